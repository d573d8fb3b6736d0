//! Positive-energy four-spinors, the Dirac residual, the bilinear current and
//! its Gordon decomposition.
//!
//! Components are ordered `(xi_+, xi_-, chi_+, chi_-)` in the Dirac
//! representation. A spin-up state (`s = +1`) occupies components 0 and 3, a
//! spin-down state components 1 and 2. Stationary derivatives are applied
//! analytically (`d_t -> -iE`, `d_phi -> i(l + 1/2)`, `d_z -> 0`); radial
//! derivatives use central differences, so every per-node quantity is
//! reported on the interior nodes `2..N-2` of the grid.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{induced_fields, tetrad_at, BackgroundParams};
use crate::oracle::RadialGrid;
use crate::quadrature::simpson;
use crate::radial::RadialShape;
use crate::scalar::Real;
use crate::spectrum::{dirac_energy, ParticleParams, QuantumNumbers, Spin};

/// Nodes dropped at each end of the grid by derivative-based quantities.
pub const MARGIN: usize = 2;

pub type C<T> = Complex<T>;
pub type CMat4<T> = [[C<T>; 4]; 4];
pub type Spinor<T> = [C<T>; 4];

fn c<T: Real>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}

fn zero_mat<T: Real>() -> CMat4<T> {
    [[c(T::zero(), T::zero()); 4]; 4]
}

pub fn mat_mul<T: Real>(a: &CMat4<T>, b: &CMat4<T>) -> CMat4<T> {
    let mut out = zero_mat();
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                out[i][j] = out[i][j] + a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn mat_add<T: Real>(a: &CMat4<T>, b: &CMat4<T>) -> CMat4<T> {
    let mut out = *a;
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = out[i][j] + b[i][j];
        }
    }
    out
}

pub fn mat_scale<T: Real>(a: &CMat4<T>, k: C<T>) -> CMat4<T> {
    let mut out = *a;
    for row in out.iter_mut() {
        for x in row.iter_mut() {
            *x = *x * k;
        }
    }
    out
}

pub fn anticommutator<T: Real>(a: &CMat4<T>, b: &CMat4<T>) -> CMat4<T> {
    mat_add(&mat_mul(a, b), &mat_mul(b, a))
}

pub fn mat_vec<T: Real>(a: &CMat4<T>, v: &Spinor<T>) -> Spinor<T> {
    let mut out = [c(T::zero(), T::zero()); 4];
    for i in 0..4 {
        for k in 0..4 {
            out[i] = out[i] + a[i][k] * v[k];
        }
    }
    out
}

fn identity<T: Real>() -> CMat4<T> {
    let mut out = zero_mat();
    for (i, row) in out.iter_mut().enumerate() {
        row[i] = c(T::one(), T::zero());
    }
    out
}

/// Dirac-representation matrices. All entries are `0`, `+-1` or `+-i`, so
/// products are exact in floating point.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaConstants<T> {
    /// `gamma^0 .. gamma^3`.
    pub gamma: [CMat4<T>; 4],
    pub gamma5: CMat4<T>,
    pub sigma: [CMat4<T>; 3],
    pub alpha: [CMat4<T>; 3],
    pub beta: CMat4<T>,
}

impl<T: Real> GammaConstants<T> {
    pub fn new() -> Self {
        let (o, l) = (T::zero(), T::one());
        let pauli: [[[C<T>; 2]; 2]; 3] = [
            [[c(o, o), c(l, o)], [c(l, o), c(o, o)]],
            [[c(o, o), c(o, -l)], [c(o, l), c(o, o)]],
            [[c(l, o), c(o, o)], [c(o, o), c(-l, o)]],
        ];
        let block = |tl: [[C<T>; 2]; 2], tr: [[C<T>; 2]; 2], bl: [[C<T>; 2]; 2], br: [[C<T>; 2]; 2]| {
            let mut m = zero_mat();
            for i in 0..2 {
                for j in 0..2 {
                    m[i][j] = tl[i][j];
                    m[i][j + 2] = tr[i][j];
                    m[i + 2][j] = bl[i][j];
                    m[i + 2][j + 2] = br[i][j];
                }
            }
            m
        };
        let zero2 = [[c(o, o); 2]; 2];
        let one2 = [[c(l, o), c(o, o)], [c(o, o), c(l, o)]];
        let neg = |p: [[C<T>; 2]; 2]| p.map(|r| r.map(|x| -x));

        let gamma0 = block(one2, zero2, zero2, neg(one2));
        let spatial = pauli.map(|p| block(zero2, p, neg(p), zero2));
        Self {
            gamma: [gamma0, spatial[0], spatial[1], spatial[2]],
            gamma5: block(zero2, one2, one2, zero2),
            sigma: pauli.map(|p| block(p, zero2, zero2, p)),
            alpha: pauli.map(|p| block(zero2, p, p, zero2)),
            beta: gamma0,
        }
    }

    /// Signature of the Clifford algebra, `{gamma^a, gamma^b} = 2 diag(1, -1, -1, -1)`.
    pub fn signature() -> [T; 4] {
        [T::one(), -T::one(), -T::one(), -T::one()]
    }

    pub fn identity() -> CMat4<T> {
        identity()
    }
}

impl<T: Real> Default for GammaConstants<T> {
    fn default() -> Self {
        Self::new()
    }
}

/// `psi^dagger gamma^0 A psi`.
pub fn bilinear<T: Real>(g: &GammaConstants<T>, a: &CMat4<T>, psi: &Spinor<T>) -> C<T> {
    let av = mat_vec(&mat_mul(&g.gamma[0], a), psi);
    psi.iter().zip(av.iter()).fold(c(T::zero(), T::zero()), |acc, (x, y)| acc + x.conj() * y)
}

/// Four-spinor samples on the interior grid nodes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpinorTable<T> {
    #[serde(skip)]
    pub grid: RadialGrid<T>,
    pub qn: QuantumNumbers<T>,
    pub energy: T,
    /// Normalisation constant `C`, real and positive.
    pub prefactor: T,
    pub rho: Vec<T>,
    #[serde(skip)]
    pub components: Vec<Spinor<T>>,
}

impl<T: Real> SpinorTable<T> {
    /// All-zero table on `grid`.
    pub fn zeros(grid: &RadialGrid<T>, qn: QuantumNumbers<T>, energy: T) -> Self {
        let rho = grid.nodes();
        Self {
            grid: grid.clone(),
            qn,
            energy,
            prefactor: T::zero(),
            components: vec![[c(T::zero(), T::zero()); 4]; rho.len()],
            rho,
        }
    }

    /// `psi^dagger psi` per node.
    pub fn density(&self) -> Vec<T> {
        self.components
            .iter()
            .map(|psi| psi.iter().map(|x| x.norm_sqr()).sum())
            .collect()
    }

    /// `int psi^dagger psi eta rho drho` on `(0, rho_inf)`; the integrand is
    /// taken as zero at both ends.
    pub fn norm(&self, eta: T) -> T {
        let mut f = Vec::with_capacity(self.rho.len() + 2);
        f.push(T::zero());
        f.extend(self.density().iter().zip(&self.rho).map(|(d, r)| *d * eta * *r));
        f.push(T::zero());
        simpson(&f, self.grid.spacing())
    }
}

/// Spinor with the eigenvalue of the Dirac Hamiltonian, see
/// [`crate::spectrum::dirac_energy`].
pub fn build_spinor<T: Real>(
    qn: &QuantumNumbers<T>,
    p: &ParticleParams<T>,
    bg: &BackgroundParams<T>,
    grid: &RadialGrid<T>,
) -> Result<SpinorTable<T>> {
    let energy = dirac_energy(qn, p, bg)?;
    build_spinor_at_energy(qn, p, bg, grid, energy)
}

/// Closed-form spinor evaluated with a caller-supplied energy.
///
/// Large component `xi = g M(-n, b, delta rho^2)`, small component
/// `-(i/D) [(|zeta| - s zeta)/(eta rho) - 2 delta rho] xi + (i/D) g M(-n+1, b+1, delta rho^2) 2 n delta rho / b`
/// with `D = E + m + omega (l + 1/2) - s d E0`, `b = |zeta|/eta + 1` and the
/// envelope `g` of [`crate::radial`].
pub fn build_spinor_at_energy<T: Real>(
    qn: &QuantumNumbers<T>,
    p: &ParticleParams<T>,
    bg: &BackgroundParams<T>,
    grid: &RadialGrid<T>,
    energy: T,
) -> Result<SpinorTable<T>> {
    if qn.k != T::zero() {
        return Err(Error::NotSupported("bound states require k = 0"));
    }
    let shape = RadialShape::new(qn, p, bg)?;
    let sign = qn.s.sign::<T>();
    let denom = energy + p.mass + bg.omega * qn.j() - sign * p.coupling();
    if !(denom > T::zero()) {
        return Err(Error::Construction(denom.to_f64().unwrap_or(f64::NAN)));
    }
    let b = shape.b();
    let n = T::from_int(qn.n.into());
    let angular = shape.zeta.abs() - sign * shape.zeta;
    let rho = grid.nodes();
    let mut components = Vec::with_capacity(rho.len());
    for r in &rho {
        let g = shape.envelope(*r);
        let large = g * shape.leading(*r)?;
        let first = -(angular / (bg.eta * *r) - T::two() * shape.delta * *r) * large / denom;
        let second = if qn.n == 0 {
            T::zero()
        } else {
            g * shape.contiguous(*r)? * T::two() * n * shape.delta * *r / (b * denom)
        };
        let small = c(T::zero(), first + second);
        let zero = c(T::zero(), T::zero());
        let big = c(large, T::zero());
        components.push(match qn.s {
            Spin::Up => [big, zero, zero, small],
            Spin::Down => [zero, big, small, zero],
        });
    }
    let mut table = SpinorTable {
        grid: grid.clone(),
        qn: *qn,
        energy,
        prefactor: T::one(),
        rho,
        components,
    };
    let norm = table.norm(bg.eta);
    if !(norm > T::zero()) || !norm.is_finite() {
        return Err(Error::domain("norm", norm, "spinor is not normalisable on this grid"));
    }
    // the large component is real and positive at the innermost node
    let prefactor = T::one() / norm.sqrt();
    for psi in table.components.iter_mut() {
        for x in psi.iter_mut() {
            *x = *x * prefactor;
        }
    }
    table.prefactor = prefactor;
    Ok(table)
}

fn central_difference<T: Real, V: Copy>(
    values: &[V],
    i: usize,
    h: T,
    sub: impl Fn(V, V) -> V,
    scale: impl Fn(V, T) -> V,
) -> V {
    scale(sub(values[i + 1], values[i - 1]), T::one() / (T::two() * h))
}

fn derivative_spinor<T: Real>(psi: &[Spinor<T>], i: usize, h: T) -> Spinor<T> {
    central_difference(
        psi,
        i,
        h,
        |a: Spinor<T>, b: Spinor<T>| [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]],
        |a: Spinor<T>, k| a.map(|x| x * k),
    )
}

fn derivative_real<T: Real>(values: &[T], i: usize, h: T) -> T {
    central_difference(values, i, h, |a, b| a - b, |a, k| a * k)
}

fn interior<T>(table: &SpinorTable<T>) -> std::ops::Range<usize> {
    MARGIN..table.rho.len().saturating_sub(MARGIN)
}

/// `||H psi - E psi||` under `eta rho drho` over the interior nodes, with
/// `H = m beta - omega j - i alpha^1 (d_rho + 1/(2 rho)) + alpha^2 j/(eta rho)
///      + i d B_rho beta alpha^1 + d E0 beta Sigma^3`.
pub fn dirac_residual<T: Real>(table: &SpinorTable<T>, p: &ParticleParams<T>, bg: &BackgroundParams<T>) -> Result<T> {
    let g = GammaConstants::<T>::new();
    let h = table.grid.spacing();
    let j = table.qn.j();
    let i1 = c(T::zero(), T::one());
    let beta_alpha = mat_mul(&g.beta, &g.alpha[0]);
    let beta_sigma = mat_mul(&g.beta, &g.sigma[2]);
    let mut sum = T::zero();
    for i in interior(table) {
        let r = table.rho[i];
        let psi = &table.components[i];
        let dpsi = derivative_spinor(&table.components, i, h);
        let b_rho = induced_fields(bg, p.e0, r)?.b[0];
        let radial: Spinor<T> = std::array::from_fn(|k| dpsi[k] + psi[k] / (T::two() * r));
        let mass = mat_vec(&g.beta, psi);
        let kinetic = mat_vec(&g.alpha[0], &radial);
        let angular = mat_vec(&g.alpha[1], psi);
        let magnetic = mat_vec(&beta_alpha, psi);
        let electric = mat_vec(&beta_sigma, psi);
        let mut norm = T::zero();
        for k in 0..4 {
            let h_psi = mass[k] * p.mass - psi[k] * (bg.omega * j) - i1 * kinetic[k]
                + angular[k] * (j / (bg.eta * r))
                + i1 * magnetic[k] * (p.dipole * b_rho)
                + electric[k] * p.coupling();
            norm += (h_psi - psi[k] * table.energy).norm_sqr();
        }
        sum += norm * bg.eta * r * h;
    }
    Ok(sum.sqrt())
}

/// Coordinate gamma matrices `gamma^mu = e^mu_a gamma^a` at `rho`.
fn coordinate_gammas<T: Real>(g: &GammaConstants<T>, bg: &BackgroundParams<T>, rho: T) -> Result<[CMat4<T>; 4]> {
    let tetrad = tetrad_at(bg, rho)?;
    Ok(std::array::from_fn(|mu| {
        (0..4).fold(zero_mat(), |acc, a| {
            mat_add(&acc, &mat_scale(&g.gamma[a], c(tetrad.inverse[mu][a], T::zero())))
        })
    }))
}

/// `J^mu = psi-bar gamma^mu psi` in coordinate components `(t, rho, phi, z)`
/// at every node of the table.
pub fn bilinear_current<T: Real>(table: &SpinorTable<T>, bg: &BackgroundParams<T>) -> Result<Vec<[T; 4]>> {
    let g = GammaConstants::<T>::new();
    table
        .rho
        .iter()
        .zip(&table.components)
        .map(|(r, psi)| {
            let gammas = coordinate_gammas(&g, bg, *r)?;
            Ok(std::array::from_fn(|mu| bilinear(&g, &gammas[mu], psi).re))
        })
        .collect()
}

/// Gordon split of the current on the interior nodes. Four-vectors are in
/// coordinate components `(t, rho, phi, z)`; `polarization` and
/// `magnetization` are frame components `(1, 2, 3)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GordonCurrents<T> {
    pub rho: Vec<T>,
    /// Convection + spin + dipole.
    pub total: Vec<[T; 4]>,
    pub convection: Vec<[T; 4]>,
    pub spin: Vec<[T; 4]>,
    /// Anticommutator of `gamma^mu` with the dipole interaction.
    pub dipole: Vec<[T; 4]>,
    /// `P^a = (i/2m) psi-bar gamma^0 gamma^a psi`.
    pub polarization: Vec<[T; 3]>,
    /// `M^a = (1/2m) psi-bar Sigma^a psi`.
    pub magnetization: Vec<[T; 3]>,
    /// `psi-bar gamma^mu psi` on the same nodes.
    pub direct: Vec<[T; 4]>,
}

impl<T: Real> GordonCurrents<T> {
    /// Largest `|total - direct|` over nodes and components, with the
    /// azimuthal component scaled by `eta rho`, relative to `max |J^t|`.
    pub fn identity_deviation(&self, eta: T) -> T {
        let scale = self.direct.iter().fold(T::zero(), |m, j| m.max(j[0].abs()));
        if scale == T::zero() {
            return self
                .total
                .iter()
                .flat_map(|j| j.iter().map(|x| x.abs()))
                .fold(T::zero(), T::max);
        }
        let mut worst = T::zero();
        for ((total, direct), r) in self.total.iter().zip(&self.direct).zip(&self.rho) {
            for mu in 0..4 {
                let physical = if mu == 2 { eta * *r } else { T::one() };
                worst = worst.max(((total[mu] - direct[mu]) * physical).abs());
            }
        }
        worst / scale
    }
}

/// Convection, spin and dipole parts of the current for a stationary state.
///
/// Convection: `(i/2m) g^{mu nu} (psi-bar d_nu psi - d_nu psi-bar psi)` with
/// `g^{mu nu}` of signature `(+, -, -, -)`. Spin:
/// `t: div P`, `rho: 0`,
/// `phi: -[omega div P + d_rho M^3/(eta rho) + M^3/(eta rho^2)]`,
/// `z: (1/rho) d_rho(rho M^2)`. Dipole: `(1/2m) psi-bar {gamma^mu, V} psi`
/// with `V = -(i d B_rho alpha^1 + d E0 Sigma^3)`.
pub fn gordon_currents<T: Real>(
    table: &SpinorTable<T>,
    p: &ParticleParams<T>,
    bg: &BackgroundParams<T>,
) -> Result<GordonCurrents<T>> {
    let g = GammaConstants::<T>::new();
    let h = table.grid.spacing();
    let m = p.mass;
    let two_m = T::two() * m;
    let (energy, j, omega, eta) = (table.energy, table.qn.j(), bg.omega, bg.eta);
    let i1 = c(T::zero(), T::one());

    let g0_frame: [CMat4<T>; 3] = std::array::from_fn(|a| mat_mul(&g.gamma[0], &g.gamma[a + 1]));
    let polarization_all: Vec<[T; 3]> = table
        .components
        .iter()
        .map(|psi| std::array::from_fn(|a| (i1 * bilinear(&g, &g0_frame[a], psi)).re / two_m))
        .collect();
    let magnetization_all: Vec<[T; 3]> = table
        .components
        .iter()
        .map(|psi| std::array::from_fn(|a| bilinear(&g, &g.sigma[a], psi).re / two_m))
        .collect();
    let rho_p1: Vec<T> = table.rho.iter().zip(&polarization_all).map(|(r, pa)| *r * pa[0]).collect();
    let rho_m2: Vec<T> = table.rho.iter().zip(&magnetization_all).map(|(r, ma)| *r * ma[1]).collect();
    let m3: Vec<T> = magnetization_all.iter().map(|ma| ma[2]).collect();

    let identity = identity::<T>();
    let mut out = GordonCurrents {
        rho: Vec::new(),
        total: Vec::new(),
        convection: Vec::new(),
        spin: Vec::new(),
        dipole: Vec::new(),
        polarization: Vec::new(),
        magnetization: Vec::new(),
        direct: Vec::new(),
    };
    for i in interior(table) {
        let r = table.rho[i];
        let psi = &table.components[i];
        let scalar = bilinear(&g, &identity, psi).re;
        let dpsi = derivative_spinor(&table.components, i, h);
        let radial_flow = psi
            .iter()
            .zip(mat_vec(&g.gamma[0], &dpsi).iter())
            .fold(c(T::zero(), T::zero()), |acc, (x, y)| acc + x.conj() * y)
            .im;
        let inv = T::one() / (eta * r);
        let convection = [
            (energy + omega * j) * scalar / m,
            radial_flow / m,
            -(omega * energy + (omega * omega - inv * inv) * j) * scalar / m,
            T::zero(),
        ];

        let div_p = derivative_real(&rho_p1, i, h) / r;
        let dm3 = derivative_real(&m3, i, h);
        let spin = [
            div_p,
            T::zero(),
            -(omega * div_p + dm3 * inv + m3[i] * inv / r),
            derivative_real(&rho_m2, i, h) / r,
        ];

        let gammas = coordinate_gammas(&g, bg, r)?;
        let b_rho = induced_fields(bg, p.e0, r)?.b[0];
        let v = mat_scale(
            &mat_add(
                &mat_scale(&g.alpha[0], i1 * p.dipole * b_rho),
                &mat_scale(&g.sigma[2], c(p.coupling(), T::zero())),
            ),
            c(-T::one(), T::zero()),
        );
        let dipole: [T; 4] = std::array::from_fn(|mu| bilinear(&g, &anticommutator(&gammas[mu], &v), psi).re / two_m);
        let direct: [T; 4] = std::array::from_fn(|mu| bilinear(&g, &gammas[mu], psi).re);

        out.rho.push(r);
        out.total
            .push(std::array::from_fn(|mu| convection[mu] + spin[mu] + dipole[mu]));
        out.convection.push(convection);
        out.spin.push(spin);
        out.dipole.push(dipole);
        out.polarization.push(polarization_all[i]);
        out.magnetization.push(magnetization_all[i]);
        out.direct.push(direct);
    }
    Ok(out)
}
