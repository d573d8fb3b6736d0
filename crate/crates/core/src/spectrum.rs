//! Closed-form bound-state algebra.
//!
//! States are labelled by the radial quantum number `n`, the orbital integer
//! `l` (total angular momentum `j = l + 1/2`), the spin polarization `s` and
//! the longitudinal wavenumber `k`, which is pinned to zero.

use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::BackgroundParams;
use crate::scalar::Real;

/// Energies closer than this are reported as degenerate.
pub const DEGENERACY_TOLERANCE: f64 = 1e-12;

/// Default threshold on `d E0 / (omega eta)`.
pub const DEFAULT_WEAK_FIELD_THRESHOLD: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Spin {
    Down,
    Up,
}

impl Serialize for Spin {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_i32(self.as_i32())
    }
}

impl Spin {
    pub fn sign<T: Real>(self) -> T {
        match self {
            Spin::Up => T::one(),
            Spin::Down => -T::one(),
        }
    }

    pub fn as_i32(self) -> i32 {
        match self {
            Spin::Up => 1,
            Spin::Down => -1,
        }
    }
}

impl TryFrom<i32> for Spin {
    type Error = Error;

    fn try_from(s: i32) -> Result<Self> {
        match s {
            1 => Ok(Spin::Up),
            -1 => Ok(Spin::Down),
            other => Err(Error::InvalidSpin(other.into())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuantumNumbers<T> {
    pub n: u32,
    pub l: i32,
    pub s: Spin,
    pub k: T,
}

impl<T: Real> QuantumNumbers<T> {
    pub fn new(n: u32, l: i32, s: Spin) -> Self {
        Self { n, l, s, k: T::zero() }
    }

    /// `j = l + 1/2`.
    pub fn j(&self) -> T {
        T::from_int(self.l.into()) + T::half()
    }

    fn require_bound(&self) -> Result<()> {
        if self.k != T::zero() {
            return Err(Error::NotSupported("bound states require k = 0"));
        }
        Ok(())
    }
}

/// Rest mass, dipole moment and rest-frame electric field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParticleParams<T> {
    pub mass: T,
    pub dipole: T,
    pub e0: T,
}

impl<T: Real> ParticleParams<T> {
    pub fn new(mass: T, dipole: T, e0: T) -> Result<Self> {
        for (name, v) in [("mass", mass), ("dipole", dipole), ("e0", e0)] {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(Error::domain(name, v, "must be positive"));
            }
        }
        Ok(Self { mass, dipole, e0 })
    }

    /// `d E0`.
    pub fn coupling(&self) -> T {
        self.dipole * self.e0
    }
}

/// `zeta_s = l + (1 - s)/2 + s (1 - eta)/2`.
pub fn effective_angular_momentum<T: Real>(l: i32, s: Spin, eta: T) -> T {
    let sign = s.sign::<T>();
    T::from_int(l.into()) + (T::one() - sign) / T::two() + sign * (T::one() - eta) / T::two()
}

/// `delta = d E0 omega eta`.
pub fn coupling_delta<T: Real>(p: &ParticleParams<T>, bg: &BackgroundParams<T>) -> T {
    p.dipole * p.e0 * bg.omega * bg.eta
}

/// Landau-level counter `n + |zeta|/(2 eta) + s zeta/(2 eta) + 1` entering the energy.
pub fn level_index<T: Real>(n: u32, zeta: T, s: Spin, eta: T) -> T {
    T::from_int(n.into()) + zeta.abs() / (T::two() * eta) + s.sign::<T>() * zeta / (T::two() * eta) + T::one()
}

/// `beta_s = [E + omega (l + 1/2)]^2 - [m + s d E0]^2 - 2 s delta zeta/eta - 2 delta`.
pub fn beta_parameter<T: Real>(
    energy: T,
    qn: &QuantumNumbers<T>,
    p: &ParticleParams<T>,
    bg: &BackgroundParams<T>,
) -> Result<T> {
    qn.require_bound()?;
    let sign = qn.s.sign::<T>();
    let zeta = effective_angular_momentum(qn.l, qn.s, bg.eta);
    let delta = coupling_delta(p, bg);
    let shifted = energy + bg.omega * qn.j();
    let mass = p.mass + sign * p.coupling();
    Ok((shifted - mass) * (shifted + mass) - T::two() * sign * delta * zeta / bg.eta - T::two() * delta)
}

/// Termination value of the Kummer series: `4 delta (n + |zeta|/(2 eta) + 1/2)`.
pub fn analytic_beta<T: Real>(n: u32, zeta: T, delta: T, eta: T) -> T {
    T::lit(4.0) * delta * (T::from_int(n.into()) + zeta.abs() / (T::two() * eta) + T::half())
}

fn require_rotation<T: Real>(bg: &BackgroundParams<T>) -> Result<()> {
    if bg.omega == T::zero() {
        Err(Error::NoBoundState)
    } else {
        Ok(())
    }
}

/// Positive-branch energy levels
/// `E = sqrt((m + s d E0)^2 + 4 d E0 omega eta K) - omega (l + 1/2)` with
/// `K` from [`level_index`].
pub fn energy_level<T: Real>(
    qn: &QuantumNumbers<T>,
    p: &ParticleParams<T>,
    bg: &BackgroundParams<T>,
) -> Result<T> {
    require_rotation(bg)?;
    qn.require_bound()?;
    Ok(landau_energy(qn, p, bg) - bg.omega * qn.j())
}

/// The square-root part of [`energy_level`], i.e. the level without the
/// rotational `-omega (l + 1/2)` shift.
pub fn landau_energy<T: Real>(qn: &QuantumNumbers<T>, p: &ParticleParams<T>, bg: &BackgroundParams<T>) -> T {
    let zeta = effective_angular_momentum(qn.l, qn.s, bg.eta);
    let mass = p.mass + qn.s.sign::<T>() * p.coupling();
    let k = level_index(qn.n, zeta, qn.s, bg.eta);
    (mass * mass + T::lit(4.0) * p.dipole * p.e0 * bg.omega * bg.eta * k).sqrt()
}

/// Exact eigenvalue of the Dirac Hamiltonian with the `d beta Sigma.E` term,
/// which acts on a definite-`s` state as a constant energy shift `s d E0`:
/// `E = sqrt(m^2 + 4 delta K) + s d E0 - omega (l + 1/2)`.
///
/// It agrees with [`energy_level`] to first order in `d E0`; the two differ
/// at order `(d E0) delta / m`. The spinors in [`crate::spinor`] solve the
/// Dirac equation with this energy.
pub fn dirac_energy<T: Real>(qn: &QuantumNumbers<T>, p: &ParticleParams<T>, bg: &BackgroundParams<T>) -> Result<T> {
    require_rotation(bg)?;
    qn.require_bound()?;
    let zeta = effective_angular_momentum(qn.l, qn.s, bg.eta);
    let k = level_index(qn.n, zeta, qn.s, bg.eta);
    let root = (p.mass * p.mass + T::lit(4.0) * coupling_delta(p, bg) * k).sqrt();
    Ok(root + qn.s.sign::<T>() * p.coupling() - bg.omega * qn.j())
}

/// [`energy_level`] written out for the flat background, where
/// `zeta_+ = l` and `zeta_- = l + 1`.
pub fn flat_energy_level<T: Real>(qn: &QuantumNumbers<T>, p: &ParticleParams<T>, omega: T) -> Result<T> {
    if omega == T::zero() {
        return Err(Error::NoBoundState);
    }
    qn.require_bound()?;
    let l = T::from_int(qn.l.into());
    let zeta = match qn.s {
        Spin::Up => l,
        Spin::Down => l + T::one(),
    };
    let sign = qn.s.sign::<T>();
    let k = T::from_int(qn.n.into()) + zeta.abs() / T::two() + sign * zeta / T::two() + T::one();
    let mass = p.mass + sign * p.coupling();
    Ok((mass * mass + T::lit(4.0) * p.dipole * p.e0 * omega * k).sqrt() - omega * qn.j())
}

/// First-order expansion of [`energy_level`] for `m >> d E0`.
pub fn nonrelativistic_energy<T: Real>(
    qn: &QuantumNumbers<T>,
    p: &ParticleParams<T>,
    bg: &BackgroundParams<T>,
) -> Result<T> {
    require_rotation(bg)?;
    qn.require_bound()?;
    let zeta = effective_angular_momentum(qn.l, qn.s, bg.eta);
    let k = level_index(qn.n, zeta, qn.s, bg.eta);
    Ok(p.mass + cyclotron_frequency(p, bg) * k + qn.s.sign::<T>() * p.coupling() - bg.omega * qn.j())
}

/// `omega_c = 2 d E0 omega eta / m`.
pub fn cyclotron_frequency<T: Real>(p: &ParticleParams<T>, bg: &BackgroundParams<T>) -> T {
    T::two() * coupling_delta(p, bg) / p.mass
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeakFieldCheck<T> {
    /// `d E0 / (omega eta)`.
    pub ratio: T,
    pub threshold: T,
    pub pass: bool,
}

pub fn check_weak_field<T: Real>(
    p: &ParticleParams<T>,
    bg: &BackgroundParams<T>,
    threshold: T,
) -> Result<WeakFieldCheck<T>> {
    require_rotation(bg)?;
    let ratio = p.coupling() / (bg.omega * bg.eta);
    Ok(WeakFieldCheck {
        ratio,
        threshold,
        pass: ratio <= threshold,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumResult<T> {
    pub qn: QuantumNumbers<T>,
    pub zeta: T,
    pub delta: T,
    pub energy: T,
    /// `energy + omega (l + 1/2)`.
    pub landau_energy: T,
    pub beta: T,
    pub nonrelativistic_energy: T,
    pub weak_field_ratio: T,
}

pub fn spectrum_result<T: Real>(
    qn: &QuantumNumbers<T>,
    p: &ParticleParams<T>,
    bg: &BackgroundParams<T>,
) -> Result<SpectrumResult<T>> {
    let energy = energy_level(qn, p, bg)?;
    Ok(SpectrumResult {
        qn: *qn,
        zeta: effective_angular_momentum(qn.l, qn.s, bg.eta),
        delta: coupling_delta(p, bg),
        energy,
        landau_energy: landau_energy(qn, p, bg),
        beta: beta_parameter(energy, qn, p, bg)?,
        nonrelativistic_energy: nonrelativistic_energy(qn, p, bg)?,
        weak_field_ratio: check_weak_field(p, bg, T::lit(DEFAULT_WEAK_FIELD_THRESHOLD))?.ratio,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpinSelection {
    Up,
    Down,
    Both,
}

impl SpinSelection {
    pub fn spins(self) -> &'static [Spin] {
        match self {
            SpinSelection::Up => &[Spin::Up],
            SpinSelection::Down => &[Spin::Down],
            SpinSelection::Both => &[Spin::Down, Spin::Up],
        }
    }
}

/// States whose Landau energies coincide in the flat (`eta = 1`) background.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegeneracyGroup<T> {
    pub members: Vec<QuantumNumbers<T>>,
    pub flat_energy: T,
    /// Spread `max - min` of the same members' Landau energies at the requested `eta`.
    pub splitting: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegeneracyReport<T> {
    pub eta: T,
    pub tolerance: T,
    pub groups: Vec<DegeneracyGroup<T>>,
}

impl<T: Real> DegeneracyReport<T> {
    /// Groups that stay degenerate in the requested background.
    pub fn unbroken(&self) -> impl Iterator<Item = &DegeneracyGroup<T>> {
        self.groups.iter().filter(move |g| g.splitting <= self.tolerance)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LandauTable<T> {
    pub entries: Vec<SpectrumResult<T>>,
    pub degeneracy: DegeneracyReport<T>,
}

/// Enumerates `n = 0..=n_max`, `l` in `l_range` and the selected spins.
///
/// Entries are sorted by `(n, l, s)`. Degeneracy is judged on the Landau
/// energy (the level without the `-omega (l + 1/2)` rotational shift, which
/// separates distinct `l` anyway): groups are formed at `eta = 1` and their
/// spread is reported at the requested `eta`.
pub fn landau_table<T: Real>(
    p: &ParticleParams<T>,
    bg: &BackgroundParams<T>,
    n_max: u32,
    l_range: RangeInclusive<i32>,
    spins: SpinSelection,
) -> Result<LandauTable<T>> {
    let mut states = Vec::new();
    for n in 0..=n_max {
        for l in l_range.clone() {
            for &s in spins.spins() {
                states.push(QuantumNumbers::new(n, l, s));
            }
        }
    }
    let entries = states
        .par_iter()
        .map(|qn| spectrum_result(qn, p, bg))
        .collect::<Result<Vec<_>>>()?;

    let flat = BackgroundParams { eta: T::one(), ..*bg };
    let tolerance = T::lit(DEGENERACY_TOLERANCE);
    let mut flat_levels: Vec<(T, usize)> = states
        .iter()
        .enumerate()
        .map(|(i, qn)| (landau_energy(qn, p, &flat), i))
        .collect();
    flat_levels.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));

    let mut groups = Vec::new();
    let mut start = 0;
    while start < flat_levels.len() {
        let mut end = start + 1;
        while end < flat_levels.len() && flat_levels[end].0 - flat_levels[end - 1].0 <= tolerance {
            end += 1;
        }
        if end - start > 1 {
            let mut idx: Vec<usize> = flat_levels[start..end].iter().map(|x| x.1).collect();
            idx.sort_unstable();
            let here: Vec<T> = idx.iter().map(|&i| entries[i].landau_energy).collect();
            let hi = here.iter().copied().fold(T::neg_infinity(), T::max);
            let lo = here.iter().copied().fold(T::infinity(), T::min);
            groups.push(DegeneracyGroup {
                members: idx.iter().map(|&i| states[i]).collect(),
                flat_energy: flat_levels[start].0,
                splitting: hi - lo,
            });
        }
        start = end;
    }

    Ok(LandauTable {
        entries,
        degeneracy: DegeneracyReport {
            eta: bg.eta,
            tolerance,
            groups,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn particle(m: f64, d: f64, e0: f64) -> ParticleParams<f64> {
        ParticleParams::new(m, d, e0).unwrap()
    }

    fn bg(eta: f64, omega: f64) -> BackgroundParams<f64> {
        BackgroundParams::new(eta, omega).unwrap()
    }

    #[test]
    fn zeta_hand_values() {
        assert_eq!(effective_angular_momentum(0, Spin::Up, 1.0), 0.0);
        assert!((effective_angular_momentum(0, Spin::Up, 0.5f64) - 0.25).abs() < 1e-15);
        assert!((effective_angular_momentum(-1, Spin::Down, 0.8f64) + 0.1).abs() < 1e-15);
        assert_eq!(Spin::try_from(0).unwrap_err(), Error::InvalidSpin(0));
        assert_eq!(Spin::try_from(-1).unwrap(), Spin::Down);
    }

    #[test]
    fn delta_hand_values() {
        assert!((coupling_delta(&particle(1.0, 0.1, 1.0), &bg(0.5, 2.0)) - 0.1).abs() < 1e-15);
        assert_eq!(coupling_delta(&particle(1.0, 0.1, 1.0), &bg(0.5, 0.0)), 0.0);
        assert!((coupling_delta(&particle(1.0, 0.01, 1.0), &bg(1.0, 1.0)) - 0.01).abs() < 1e-16);
    }

    #[test]
    fn energy_hand_values() {
        let p = particle(1.0, 0.01, 1.0);
        let e = energy_level(&QuantumNumbers::new(0, 0, Spin::Up), &p, &bg(1.0, 1.0)).unwrap();
        assert!((e - (1.0601f64.sqrt() - 0.5)).abs() < 1e-15);
        assert!((e - 0.5296116).abs() < 1e-7);

        let e = energy_level(&QuantumNumbers::new(1, 1, Spin::Down), &p, &bg(0.5, 1.0)).unwrap();
        assert!((e + 0.49).abs() < 1e-14);

        let e = energy_level(&QuantumNumbers::new(0, 0, Spin::Down), &p, &bg(1.0, 1.0)).unwrap();
        assert!((e - ((0.99f64 * 0.99 + 0.04).sqrt() - 0.5)).abs() < 1e-15);
    }

    #[test]
    fn energy_errors() {
        let p = particle(1.0, 0.01, 1.0);
        let qn = QuantumNumbers::new(0, 0, Spin::Up);
        assert_eq!(energy_level(&qn, &p, &bg(1.0, 0.0)).unwrap_err(), Error::NoBoundState);
        let moving = QuantumNumbers { k: 0.3, ..qn };
        assert!(matches!(energy_level(&moving, &p, &bg(1.0, 1.0)), Err(Error::NotSupported(_))));
    }

    #[test]
    fn beta_round_trip_hand_case() {
        let p = particle(1.0, 0.01, 1.0);
        let b = bg(1.0, 1.0);
        let qn = QuantumNumbers::new(0, 0, Spin::Up);
        let beta = beta_parameter(energy_level(&qn, &p, &b).unwrap(), &qn, &p, &b).unwrap();
        assert!((beta - 0.02).abs() < 1e-15);
        assert!((beta - analytic_beta(0, 0.0, 0.01, 1.0)).abs() < 1e-15);
    }

    #[test]
    fn beta_free_threshold_and_shift_invariance() {
        let p = particle(1.0, 0.2, 1.0);
        let still = bg(0.6, 0.0);
        let qn = QuantumNumbers::new(0, 2, Spin::Up);
        let threshold = p.mass + p.coupling() - still.omega * qn.j();
        assert_eq!(beta_parameter(threshold, &qn, &p, &still).unwrap(), 0.0);

        // beta only sees E + omega (l + 1/2)
        let b = bg(1.0, 0.5);
        let a = QuantumNumbers::new(0, 1, Spin::Up);
        let c = QuantumNumbers::new(0, 1, Spin::Up);
        let e = 1.3;
        let shifted = e + b.omega * (a.j() - c.j());
        assert_eq!(beta_parameter(e, &a, &p, &b).unwrap(), beta_parameter(shifted, &c, &p, &b).unwrap());
    }

    #[test]
    fn analytic_beta_values() {
        assert_eq!(analytic_beta(0, 0.25, 1.0, 0.5), 3.0);
        assert_eq!(analytic_beta(1, 0.25, 1.0, 0.5), 7.0);
        assert_eq!(analytic_beta(3, 0.0, 0.2, 0.7), 4.0 * 0.2 * 3.5);
    }

    #[test]
    fn nonrelativistic_values() {
        let p = particle(1.0, 0.01, 1.0);
        let b = bg(1.0, 1.0);
        let qn = QuantumNumbers::new(0, 0, Spin::Up);
        let nr = nonrelativistic_energy(&qn, &p, &b).unwrap();
        assert!((nr - 0.53).abs() < 1e-15);
        let gap = nr - energy_level(&qn, &p, &b).unwrap();
        assert!((gap - 3.88e-4).abs() < 5e-6, "gap {gap}");

        let tiny = particle(1.0, 1e-14, 1.0);
        let nr = nonrelativistic_energy(&QuantumNumbers::new(2, 3, Spin::Down), &tiny, &b).unwrap();
        assert!((nr - (1.0 - 3.5)).abs() < 1e-12);
    }

    #[test]
    fn cyclotron_and_weak_field() {
        let p = particle(1.0, 0.01, 1.0);
        assert!((cyclotron_frequency(&p, &bg(1.0, 1.0)) - 0.02).abs() < 1e-16);
        assert_eq!(cyclotron_frequency(&p, &bg(1.0, 0.0)), 0.0);
        let half = cyclotron_frequency(&p, &bg(0.5, 1.0));
        assert!((2.0 * half - cyclotron_frequency(&p, &bg(1.0, 1.0))).abs() < 1e-16);

        let w = check_weak_field(&p, &bg(1.0, 1.0), 0.01).unwrap();
        assert!(w.pass && (w.ratio - 0.01).abs() < 1e-16);
        assert!(!check_weak_field(&particle(1.0, 1.0, 1.0), &bg(1.0, 1.0), 0.01).unwrap().pass);
        let w = check_weak_field(&particle(1.0, 0.001, 1.0), &bg(0.5, 2.0), 0.01).unwrap();
        assert!(w.pass && (w.ratio - 0.001).abs() < 1e-16);
        assert_eq!(check_weak_field(&p, &bg(1.0, 0.0), 0.01).unwrap_err(), Error::NoBoundState);
    }

    #[test]
    fn dirac_energy_agrees_to_first_order() {
        let b = bg(0.7, 1.0);
        let qn = QuantumNumbers::new(1, -1, Spin::Down);
        let gap = |x: f64| {
            let p = particle(1.0, x, 1.0);
            (dirac_energy(&qn, &p, &b).unwrap() - energy_level(&qn, &p, &b).unwrap()).abs()
        };
        // difference is second order in d E0
        let ratio = gap(2e-3) / gap(1e-3);
        assert!((ratio - 4.0).abs() < 0.05, "ratio {ratio}");
    }

    #[test]
    #[allow(clippy::reversed_empty_ranges)]
    fn table_degeneracy() {
        let p = particle(1.0, 0.01, 1.0);
        let flat = landau_table(&p, &bg(1.0, 1.0), 2, -2..=2, SpinSelection::Both).unwrap();
        assert_eq!(flat.entries.len(), 3 * 5 * 2);
        assert!(!flat.degeneracy.groups.is_empty());
        assert!(flat.degeneracy.groups.iter().all(|g| g.splitting <= 1e-12));

        let cone = landau_table(&p, &bg(0.5, 1.0), 2, -2..=2, SpinSelection::Both).unwrap();
        assert_eq!(cone.degeneracy.groups.len(), flat.degeneracy.groups.len());
        assert!(cone.degeneracy.groups.iter().any(|g| g.splitting > 1e-6));

        let empty = landau_table(&p, &bg(0.5, 1.0), 2, 1..=0, SpinSelection::Both).unwrap();
        assert!(empty.entries.is_empty() && empty.degeneracy.groups.is_empty());
    }

    #[test]
    fn table_ordering() {
        let p = particle(1.0, 0.05, 1.0);
        let t = landau_table(&p, &bg(0.8, 1.0), 1, -1..=1, SpinSelection::Both).unwrap();
        let keys: Vec<_> = t.entries.iter().map(|e| (e.qn.n, e.qn.l, e.qn.s)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }
}
