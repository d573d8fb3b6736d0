//! Kummer function and the radial bound-state eigenfunctions
//! `xi(rho) = delta^{nu/2} exp(-delta rho^2 / 2) rho^nu M(-n, nu + 1, delta rho^2)`
//! with `nu = |zeta| / eta`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{physical_radius, BackgroundParams};
use crate::oracle::RadialGrid;
use crate::quadrature::simpson;
use crate::scalar::Real;
use crate::spectrum::{coupling_delta, effective_angular_momentum, ParticleParams, QuantumNumbers};

/// Series terms before [`kummer_m`] gives up.
pub const KUMMER_MAX_TERMS: usize = 20_000;

/// Smallest `delta * rho_inf^2` accepted by [`normalize`].
pub const MIN_TAIL_EXTENT: f64 = 30.0;

/// `tail_mass` above this raises [`WavefunctionTable::tail_warning`].
pub const TAIL_WARNING_LEVEL: f64 = 0.5;

/// Arguments of `M(a, b, x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KummerArgs<T> {
    pub a: T,
    pub b: T,
    pub x: T,
}

impl<T: Real> KummerArgs<T> {
    pub fn new(a: T, b: T, x: T) -> Result<Self> {
        let args = Self { a, b, x };
        args.validate()?;
        Ok(args)
    }

    fn validate(&self) -> Result<()> {
        if self.b <= T::zero() && self.b == self.b.round() {
            return Err(Error::KummerPole(self.b.to_f64().unwrap_or(f64::NAN)));
        }
        if !(self.x >= T::zero()) || !self.x.is_finite() {
            return Err(Error::domain("x", self.x, "Kummer argument must be finite and >= 0"));
        }
        if !self.a.is_finite() || !self.b.is_finite() {
            return Err(Error::domain("a", self.a, "Kummer parameters must be finite"));
        }
        Ok(())
    }

    /// `Some(n)` when `a = -n` for a non-negative integer `n`.
    pub fn terminating_degree(&self) -> Option<u32> {
        if self.a <= T::zero() && self.a == self.a.round() {
            (-self.a).to_u32()
        } else {
            None
        }
    }
}

/// Confluent hypergeometric function `M(a, b, x) = sum (a)_k / (b)_k x^k / k!`.
///
/// Terminating cases `a = -n` are summed as the exact degree-`n` polynomial.
pub fn kummer_m<T: Real>(args: KummerArgs<T>) -> Result<T> {
    args.validate()?;
    match args.terminating_degree() {
        Some(n) => Ok(kummer_polynomial(n, args.b, args.x)),
        None => kummer_m_series(args),
    }
}

fn term_ratio<T: Real>(a: T, b: T, x: T, k: T) -> T {
    (a + k) / (b + k) * x / (k + T::one())
}

fn kummer_polynomial<T: Real>(n: u32, b: T, x: T) -> T {
    let a = -T::from_int(n.into());
    let mut term = T::one();
    let mut sum = T::one();
    for k in 0..n {
        term = term * term_ratio(a, b, x, T::from_int(k.into()));
        sum += term;
    }
    sum
}

/// The power series summed term by term until convergence, with no
/// special handling of terminating `a`.
pub fn kummer_m_series<T: Real>(args: KummerArgs<T>) -> Result<T> {
    args.validate()?;
    let KummerArgs { a, b, x } = args;
    let eps = T::epsilon();
    let mut term = T::one();
    let mut sum = T::one();
    for k in 0..KUMMER_MAX_TERMS {
        let kk = T::from_int(k as i64);
        term = term * term_ratio(a, b, x, kk);
        sum += term;
        if term == T::zero() {
            return Ok(sum);
        }
        let next = term_ratio(a, b, x, kk + T::one()).abs();
        if term.abs() <= eps * sum.abs() && next < T::half() {
            return Ok(sum);
        }
    }
    Err(Error::Accuracy {
        terms: KUMMER_MAX_TERMS,
    })
}

/// Pieces of the closed-form radial solution shared with the spinor module.
#[derive(Debug, Clone, Copy)]
pub(crate) struct RadialShape<T> {
    pub n: u32,
    pub delta: T,
    /// `|zeta| / eta`.
    pub nu: T,
    pub zeta: T,
}

impl<T: Real> RadialShape<T> {
    pub fn new(qn: &QuantumNumbers<T>, p: &ParticleParams<T>, bg: &BackgroundParams<T>) -> Result<Self> {
        if !(bg.omega > T::zero()) {
            return Err(Error::NoBoundState);
        }
        let zeta = effective_angular_momentum(qn.l, qn.s, bg.eta);
        Ok(Self {
            n: qn.n,
            delta: coupling_delta(p, bg),
            nu: zeta.abs() / bg.eta,
            zeta,
        })
    }

    /// Second Kummer parameter `nu + 1`.
    pub fn b(&self) -> T {
        self.nu + T::one()
    }

    /// `delta^{nu/2} exp(-delta rho^2/2) rho^nu`.
    pub fn envelope(&self, rho: T) -> T {
        let power = if self.nu == T::zero() { T::one() } else { rho.powf(self.nu) };
        self.delta.powf(self.nu / T::two()) * (-self.delta * rho * rho / T::two()).exp() * power
    }

    /// `M(-n, nu + 1, delta rho^2)`.
    pub fn leading(&self, rho: T) -> Result<T> {
        let n = -T::from_int(self.n.into());
        kummer_m(KummerArgs::new(n, self.b(), self.delta * rho * rho)?)
    }

    /// `M(-n + 1, nu + 2, delta rho^2)`.
    pub fn contiguous(&self, rho: T) -> Result<T> {
        let a = T::one() - T::from_int(self.n.into());
        kummer_m(KummerArgs::new(a, self.b() + T::one(), self.delta * rho * rho)?)
    }
}

/// Unnormalised radial solution at `rho`.
pub fn radial_eigenfunction<T: Real>(
    qn: &QuantumNumbers<T>,
    p: &ParticleParams<T>,
    bg: &BackgroundParams<T>,
    rho: T,
) -> Result<T> {
    if !(rho >= T::zero()) {
        return Err(Error::domain("rho", rho, "must be >= 0"));
    }
    let shape = RadialShape::new(qn, p, bg)?;
    Ok(shape.envelope(rho) * shape.leading(rho)?)
}

/// Normalised samples of the radial solution on the closed grid `0, h, ..., rho_inf`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WavefunctionTable<T> {
    #[serde(skip)]
    pub grid: RadialGrid<T>,
    pub qn: QuantumNumbers<T>,
    pub rho: Vec<T>,
    pub values: Vec<T>,
    /// Factor applied to the closed form: `values = normalization * xi`.
    pub normalization: T,
    /// Fraction of `int |xi|^2 eta rho drho` lying beyond the light cylinder.
    pub tail_mass: T,
    pub tail_warning: bool,
}

impl<T: Real> WavefunctionTable<T> {
    /// `|xi|^2` per node.
    pub fn density(&self) -> Vec<T> {
        self.values.iter().map(|v| *v * *v).collect()
    }

    /// `int |xi|^2 eta rho drho` over the grid; one after normalisation.
    pub fn norm(&self, eta: T) -> T {
        weighted_integral(&self.rho, &self.values, eta, self.grid.spacing())
    }
}

fn weighted_integral<T: Real>(rho: &[T], values: &[T], eta: T, h: T) -> T {
    let f: Vec<T> = rho.iter().zip(values).map(|(r, v)| *v * *v * eta * *r).collect();
    simpson(&f, h)
}

/// Fraction of the integrand mass on `[from, rho_inf]`.
fn tail_integral<T: Real>(rho: &[T], integrand: &[T], h: T, from: T) -> T {
    let Some(k) = rho.iter().position(|r| *r >= from) else {
        return T::zero();
    };
    let mut total = simpson(&integrand[k..], h);
    if k > 0 {
        // partial cell [from, rho_k] by linear interpolation
        let t = (rho[k] - from) / h;
        let at_from = integrand[k] + (integrand[k - 1] - integrand[k]) * t;
        total += (rho[k] - from) * (at_from + integrand[k]) / T::two();
    }
    total
}

/// Samples the radial solution on `grid` and scales it to unit norm under
/// the measure `eta rho drho`.
pub fn normalize<T: Real>(
    qn: &QuantumNumbers<T>,
    p: &ParticleParams<T>,
    bg: &BackgroundParams<T>,
    grid: &RadialGrid<T>,
) -> Result<WavefunctionTable<T>> {
    let shape = RadialShape::new(qn, p, bg)?;
    let reach = shape.delta * grid.rho_inf() * grid.rho_inf();
    if reach < T::lit(MIN_TAIL_EXTENT) {
        return Err(Error::Truncation {
            reached: reach.to_f64().unwrap_or(f64::NAN),
            required: MIN_TAIL_EXTENT,
        });
    }
    let rho = grid.closed_nodes();
    let raw = rho
        .iter()
        .map(|r| Ok(shape.envelope(*r) * shape.leading(*r)?))
        .collect::<Result<Vec<T>>>()?;
    let h = grid.spacing();
    let total = weighted_integral(&rho, &raw, bg.eta, h);
    if !(total > T::zero()) || !total.is_finite() {
        return Err(Error::domain("norm", total, "radial solution is not normalisable on this grid"));
    }
    let normalization = T::one() / total.sqrt();
    let values: Vec<T> = raw.iter().map(|v| *v * normalization).collect();

    let integrand: Vec<T> = rho.iter().zip(&values).map(|(r, v)| *v * *v * bg.eta * *r).collect();
    let tail_mass = tail_integral(&rho, &integrand, h, physical_radius(bg));
    Ok(WavefunctionTable {
        grid: grid.clone(),
        qn: *qn,
        rho,
        values,
        normalization,
        tail_mass,
        tail_warning: tail_mass > T::lit(TAIL_WARNING_LEVEL),
    })
}

/// Number of sign changes in `values`, ignoring exact zeros.
pub fn sign_changes<T: Real>(values: &[T]) -> usize {
    let mut last = T::zero();
    let mut count = 0;
    for v in values {
        if *v == T::zero() {
            continue;
        }
        if last != T::zero() && (*v > T::zero()) != (last > T::zero()) {
            count += 1;
        }
        last = *v;
    }
    count
}
