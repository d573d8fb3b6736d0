//! Rotating frame around a cosmic string: metric, Fermi–Walker tetrad,
//! field transformation and the effective potential seen by a dipole.
//!
//! Coordinate index order is `(t, rho, phi, z)`; local frame indices are
//! `(0, 1, 2, 3)` with Minkowski signature `(-, +, +, +)`. Electric and
//! magnetic fields are carried in physical (orthonormal) cylindrical
//! components `(rho, phi, z)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::RadialGrid;
use crate::scalar::Real;
use crate::spectrum::Spin;

pub type Mat4<T> = [[T; 4]; 4];

/// Minkowski metric of the local frame, `diag(-1, 1, 1, 1)`.
pub fn minkowski<T: Real>() -> Mat4<T> {
    let mut m = [[T::zero(); 4]; 4];
    m[0][0] = -T::one();
    m[1][1] = T::one();
    m[2][2] = T::one();
    m[3][3] = T::one();
    m
}

/// Deficit parameter and angular velocity of the rotating frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BackgroundParams<T> {
    pub eta: T,
    pub omega: T,
}

impl<T: Real> BackgroundParams<T> {
    /// `0 < eta <= 1`, `omega >= 0`.
    pub fn new(eta: T, omega: T) -> Result<Self> {
        Self::with_override(eta, omega, false)
    }

    /// Same as [`BackgroundParams::new`], but `allow_disclination` admits
    /// `eta > 1` (the anti-conical disclination of elastic media).
    pub fn with_override(eta: T, omega: T, allow_disclination: bool) -> Result<Self> {
        if !(eta > T::zero()) || !eta.is_finite() {
            return Err(Error::domain("eta", eta, "must be positive"));
        }
        if eta > T::one() && !allow_disclination {
            return Err(Error::domain(
                "eta",
                eta,
                "cosmic strings require eta <= 1 (override to admit disclinations)",
            ));
        }
        if !(omega >= T::zero()) || !omega.is_finite() {
            return Err(Error::domain("omega", omega, "must be non-negative"));
        }
        Ok(Self { eta, omega })
    }
}

/// The five independent components of the rotating cosmic-string metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricComponents<T> {
    pub g_tt: T,
    pub g_tphi: T,
    pub g_rhorho: T,
    pub g_phiphi: T,
    pub g_zz: T,
}

impl<T: Real> MetricComponents<T> {
    pub fn matrix(&self) -> Mat4<T> {
        let z = T::zero();
        [
            [self.g_tt, z, self.g_tphi, z],
            [z, self.g_rhorho, z, z],
            [self.g_tphi, z, self.g_phiphi, z],
            [z, z, z, self.g_zz],
        ]
    }
}

pub fn metric_components<T: Real>(bg: &BackgroundParams<T>, rho: T) -> Result<MetricComponents<T>> {
    if !(rho >= T::zero()) {
        return Err(Error::domain("rho", rho, "radial coordinate must be non-negative"));
    }
    let (eta, omega) = (bg.eta, bg.omega);
    let er = eta * rho;
    Ok(MetricComponents {
        g_tt: -(T::one() - omega * omega * er * er),
        g_tphi: omega * er * er,
        g_rhorho: T::one(),
        g_phiphi: er * er,
        g_zz: T::one(),
    })
}

/// Tetrad `e^a_mu` (rows: frame index, columns: coordinate index) and its
/// inverse `e^mu_a` (rows: coordinate index, columns: frame index).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tetrad<T> {
    pub rho: T,
    pub components: Mat4<T>,
    pub inverse: Mat4<T>,
}

/// Frame `theta^0 = dt`, `theta^1 = d rho`, `theta^2 = eta omega rho dt + eta rho d phi`,
/// `theta^3 = dz` at radius `rho > 0`.
pub fn tetrad_at<T: Real>(bg: &BackgroundParams<T>, rho: T) -> Result<Tetrad<T>> {
    if rho == T::zero() {
        return Err(Error::Singular("inverse tetrad contains 1/(eta rho)"));
    }
    if !(rho > T::zero()) {
        return Err(Error::domain("rho", rho, "radial coordinate must be positive"));
    }
    let (eta, omega) = (bg.eta, bg.omega);
    let (o, l) = (T::zero(), T::one());
    let components = [
        [l, o, o, o],
        [o, l, o, o],
        [eta * omega * rho, o, eta * rho, o],
        [o, o, o, l],
    ];
    // dt = theta^0, d phi = (theta^2 - eta omega rho theta^0) / (eta rho)
    let inverse = [
        [l, o, o, o],
        [o, l, o, o],
        [-omega, o, l / (eta * rho), o],
        [o, o, o, l],
    ];
    Ok(Tetrad {
        rho,
        components,
        inverse,
    })
}

impl<T: Real> Tetrad<T> {
    /// `e^a_mu e^b_nu eta_ab`.
    pub fn metric(&self) -> Mat4<T> {
        let eta = minkowski::<T>();
        let e = &self.components;
        let mut g = [[T::zero(); 4]; 4];
        for mu in 0..4 {
            for nu in 0..4 {
                let mut acc = T::zero();
                for a in 0..4 {
                    acc += e[a][mu] * e[a][nu] * eta[a][a];
                }
                g[mu][nu] = acc;
            }
        }
        g
    }

    /// Largest deviation of `e^a_mu e^mu_b` and `e^mu_a e^a_nu` from the identity.
    pub fn duality_deviation(&self) -> T {
        let e = &self.components;
        let inv = &self.inverse;
        let mut worst = T::zero();
        for a in 0..4 {
            for b in 0..4 {
                let frame: T = (0..4).map(|mu| e[a][mu] * inv[mu][b]).sum();
                let coord: T = (0..4).map(|c| inv[a][c] * e[c][b]).sum();
                let delta = if a == b { T::one() } else { T::zero() };
                worst = worst.max((frame - delta).abs()).max((coord - delta).abs());
            }
        }
        worst
    }
}

/// Radial derivative `d e^a_mu / d rho`; the frame depends on `rho` only.
pub fn tetrad_radial_derivative<T: Real>(bg: &BackgroundParams<T>) -> Mat4<T> {
    let mut d = [[T::zero(); 4]; 4];
    d[2][0] = bg.eta * bg.omega;
    d[2][2] = bg.eta;
    d
}

/// Connection one-forms `omega^a_b = omega_mu^a_b dx^mu`, stored as
/// `forms[a][b][mu]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectionForms<T> {
    pub forms: [[[T; 4]; 4]; 4],
}

impl<T: Real> ConnectionForms<T> {
    /// The four non-null components for the Fermi–Walker frame:
    /// `omega_t^1_2 = -omega eta`, `omega_phi^1_2 = -eta` and their
    /// antisymmetric partners.
    pub fn fermi_walker(bg: &BackgroundParams<T>) -> Self {
        let mut forms = [[[T::zero(); 4]; 4]; 4];
        forms[1][2][0] = -bg.omega * bg.eta;
        forms[1][2][2] = -bg.eta;
        forms[2][1][0] = bg.omega * bg.eta;
        forms[2][1][2] = bg.eta;
        Self { forms }
    }
}

/// One coefficient `(d theta^a + omega^a_b ^ theta^b)_{mu nu}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CartanCoefficient<T> {
    pub rho: T,
    pub frame_index: usize,
    pub mu: usize,
    pub nu: usize,
    pub residual: T,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CartanReport<T> {
    pub coefficients: Vec<CartanCoefficient<T>>,
    pub passed: bool,
}

/// Checks the torsion-free structure equations for the hard-coded
/// Fermi–Walker connection at a few radii inside the physical region.
pub fn cartan_check<T: Real>(bg: &BackgroundParams<T>) -> CartanReport<T> {
    cartan_check_with(bg, &ConnectionForms::fermi_walker(bg))
}

pub fn cartan_check_with<T: Real>(
    bg: &BackgroundParams<T>,
    connection: &ConnectionForms<T>,
) -> CartanReport<T> {
    let extent = physical_radius(bg).min(T::one());
    let radii = [T::lit(0.25), T::lit(0.5), T::lit(0.75)].map(|f| f * extent);
    let de = tetrad_radial_derivative(bg);
    let tol = T::lit(64.0) * T::epsilon();

    let mut coefficients = Vec::with_capacity(radii.len() * 24);
    for &rho in &radii {
        let e = tetrad_at(bg, rho).expect("sample radius is positive").components;
        for a in 0..4 {
            for mu in 0..4 {
                for nu in (mu + 1)..4 {
                    // d theta^a: only d rho ^ dx^nu terms survive
                    let mut residual = T::zero();
                    let mut scale = T::zero();
                    if mu == 1 {
                        residual += de[a][nu];
                        scale += de[a][nu].abs();
                    }
                    if nu == 1 {
                        residual -= de[a][mu];
                        scale += de[a][mu].abs();
                    }
                    for b in 0..4 {
                        let w = &connection.forms[a][b];
                        let term = w[mu] * e[b][nu] - w[nu] * e[b][mu];
                        residual += term;
                        scale += term.abs();
                    }
                    let pass = residual.abs() <= tol * scale.max(T::one());
                    coefficients.push(CartanCoefficient {
                        rho,
                        frame_index: a,
                        mu,
                        nu,
                        residual,
                        pass,
                    });
                }
            }
        }
    }
    let passed = coefficients.iter().all(|c| c.pass);
    CartanReport {
        coefficients,
        passed,
    }
}

/// Which frame a field triple's components refer to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Frame {
    /// Orthonormal frame of the co-moving observer.
    LocalRest,
    /// Physical components along the static cylindrical triad.
    Coordinate,
}

/// Electric and magnetic fields, components ordered `(rho, phi, z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldTriple<T> {
    pub e: [T; 3],
    pub b: [T; 3],
    pub frame: Frame,
}

impl<T: Real> FieldTriple<T> {
    pub fn local(e: [T; 3], b: [T; 3]) -> Self {
        Self {
            e,
            b,
            frame: Frame::LocalRest,
        }
    }

    /// `F^{0i} = -E^i`, `F^{ij} = -eps^{ijk} B_k`.
    pub fn field_tensor(&self) -> Mat4<T> {
        let (e, b) = (self.e, self.b);
        let mut f = [[T::zero(); 4]; 4];
        for i in 0..3 {
            f[0][i + 1] = -e[i];
            f[i + 1][0] = e[i];
        }
        f[1][2] = -b[2];
        f[2][1] = b[2];
        f[2][3] = -b[0];
        f[3][2] = b[0];
        f[3][1] = -b[1];
        f[1][3] = b[1];
        f
    }
}

/// `F^{mu nu} = e^mu_a e^nu_b F^{ab}` for fields given in the local rest frame.
pub fn transform_field_tensor<T: Real>(tetrad: &Tetrad<T>, local: &FieldTriple<T>) -> Result<Mat4<T>> {
    if local.frame != Frame::LocalRest {
        return Err(Error::Contract("field transformation expects local rest-frame fields"));
    }
    let fab = local.field_tensor();
    let inv = &tetrad.inverse;
    let mut f = [[T::zero(); 4]; 4];
    for mu in 0..4 {
        for nu in 0..4 {
            let mut acc = T::zero();
            for a in 0..4 {
                for b in 0..4 {
                    acc += inv[mu][a] * inv[nu][b] * fab[a][b];
                }
            }
            f[mu][nu] = acc;
        }
    }
    Ok(f)
}

/// Reads `E` and `B` back from a coordinate tensor `F^{mu nu}`, scaling the
/// azimuthal index by `eta rho` to obtain physical components.
pub fn physical_fields<T: Real>(f: &Mat4<T>, bg: &BackgroundParams<T>, rho: T) -> FieldTriple<T> {
    let scale = [T::one(), T::one(), bg.eta * rho, T::one()];
    let p = |mu: usize, nu: usize| f[mu][nu] * scale[mu] * scale[nu];
    FieldTriple {
        e: [-p(0, 1), -p(0, 2), -p(0, 3)],
        b: [-p(2, 3), -p(3, 1), -p(1, 2)],
        frame: Frame::Coordinate,
    }
}

/// Fields seen in the rotating frame for a uniform `E0 z` in the rest frame:
/// `E_z = E0`, `B_rho = -omega eta E0 rho`.
pub fn induced_fields<T: Real>(bg: &BackgroundParams<T>, e0: T, rho: T) -> Result<FieldTriple<T>> {
    if !(rho >= T::zero()) {
        return Err(Error::domain("rho", rho, "radial coordinate must be non-negative"));
    }
    let z = T::zero();
    Ok(FieldTriple {
        e: [z, z, e0],
        b: [-bg.omega * bg.eta * e0 * rho, z, z],
        frame: Frame::Coordinate,
    })
}

/// Effective four-potential `(A_t, A_rho, A_phi, A_z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EffectivePotential<T> {
    pub a_t: T,
    pub a_rho: T,
    pub a_phi: T,
    pub a_z: T,
}

/// `A_t = s d E_z`, `A = s d (z x B)` for a dipole along `z`.
pub fn effective_potential<T: Real>(s: Spin, d: T, fields: &FieldTriple<T>) -> EffectivePotential<T> {
    let sd = s.sign::<T>() * d;
    let [b_rho, b_phi, _] = fields.b;
    EffectivePotential {
        a_t: sd * fields.e[2],
        a_rho: -sd * b_phi,
        a_phi: sd * b_rho,
        a_z: T::zero(),
    }
}

/// Closed-form and finite-difference effective magnetic field.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EffectiveField<T> {
    /// `-2 omega eta E0`.
    pub closed_form: T,
    /// Nodes where the curl was evaluated.
    pub rho: Vec<T>,
    pub numerical: Vec<T>,
    pub max_deviation: T,
}

/// `B_eff = curl(n x B)` along `z`, without the dipole magnitude.
///
/// The numerical value is `(1/rho) d/d rho (rho (n x B)_phi)` by central
/// differences at interior grid nodes.
pub fn effective_magnetic_field<T: Real>(
    bg: &BackgroundParams<T>,
    e0: T,
    grid: &RadialGrid<T>,
) -> Result<EffectiveField<T>> {
    let closed_form = -T::two() * bg.omega * bg.eta * e0;
    let nodes = grid.nodes();
    let h = grid.spacing();
    let flux = |rho: T| -> Result<T> {
        let f = induced_fields(bg, e0, rho)?;
        Ok(rho * effective_potential(Spin::Up, T::one(), &f).a_phi)
    };
    let mut rho = Vec::with_capacity(nodes.len().saturating_sub(2));
    let mut numerical = Vec::with_capacity(rho.capacity());
    let mut max_deviation = T::zero();
    for w in nodes.windows(3) {
        let curl = (flux(w[2])? - flux(w[0])?) / (T::two() * h) / w[1];
        max_deviation = max_deviation.max((curl - closed_form).abs());
        rho.push(w[1]);
        numerical.push(curl);
    }
    Ok(EffectiveField {
        closed_form,
        rho,
        numerical,
        max_deviation,
    })
}

/// Light-cylinder radius `1/(omega eta)`; infinite for a static frame.
pub fn physical_radius<T: Real>(bg: &BackgroundParams<T>) -> T {
    if bg.omega == T::zero() {
        T::infinity()
    } else {
        T::one() / (bg.omega * bg.eta)
    }
}
