//! Finite-difference eigensolver for the radial equation
//! `xi'' + xi'/rho - zeta^2/(eta^2 rho^2) xi - delta^2 rho^2 xi + beta xi = 0`,
//! used to check the analytic `beta` eigenvalues.
//!
//! Two discretisations are available:
//!
//! - [`discretize`]: the Liouville form `u = xi sqrt(rho)` with central
//!   differences and Dirichlet walls. Simple, but the `(nu^2 - 1/4)/rho^2`
//!   potential converges slowly when `nu = |zeta|/eta` is small.
//! - [`discretize_regularized`]: factors out the origin behaviour,
//!   `xi = rho^nu w`, and discretises
//!   `-(rho^{2nu+1} w')' + delta^2 rho^{2nu+3} w = beta rho^{2nu+1} w`
//!   with a cell-centred finite-volume scheme. Zero flux at the origin; at
//!   `rho_inf` either a Dirichlet wall or a Robin condition matched to the
//!   decaying Tricomi solution. Second order for every `nu`.
//!
//! Both produce a symmetric tridiagonal matrix whose eigenvalues are found by
//! Sturm-sequence bisection.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{physical_radius, BackgroundParams};
use crate::scalar::Real;
use crate::spectrum::{analytic_beta, coupling_delta, effective_angular_momentum, ParticleParams, QuantumNumbers};

/// Smallest interior point count accepted by [`RadialGrid::new`].
pub const MIN_GRID_POINTS: usize = 100;

/// Absolute bracket width of the bisection.
pub const BISECTION_WIDTH: f64 = 1e-10;

/// Default `delta * rho_inf^2`.
pub const DEFAULT_TAIL_EXTENT: f64 = 36.0;

/// Uniform grid with interior nodes `h, 2h, ..., N h` and `h = rho_inf/(N+1)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialGrid<T> {
    n: usize,
    rho_inf: T,
    h: T,
}

impl<T: Real> RadialGrid<T> {
    pub fn new(n: usize, rho_inf: T) -> Result<Self> {
        if n < MIN_GRID_POINTS {
            return Err(Error::Grid("at least 100 interior points are required"));
        }
        if !(rho_inf > T::zero()) || !rho_inf.is_finite() {
            return Err(Error::domain("rho_inf", rho_inf, "must be positive and finite"));
        }
        let h = rho_inf / T::from_int(n as i64 + 1);
        Ok(Self { n, rho_inf, h })
    }

    /// Grid reaching `delta * rho_inf^2 = sigma`.
    pub fn for_delta(delta: T, sigma: T, n: usize) -> Result<Self> {
        if !(delta > T::zero()) {
            return Err(Error::domain("delta", delta, "must be positive"));
        }
        if !(sigma > T::zero()) {
            return Err(Error::domain("rho_inf_sigma", sigma, "must be positive"));
        }
        Self::new(n, (sigma / delta).sqrt())
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn rho_inf(&self) -> T {
        self.rho_inf
    }

    pub fn spacing(&self) -> T {
        self.h
    }

    /// Interior nodes `i h`, `i = 1..=N`.
    pub fn nodes(&self) -> Vec<T> {
        (1..=self.n).map(|i| T::from_int(i as i64) * self.h).collect()
    }

    /// Nodes including both ends, `i h`, `i = 0..=N+1`.
    pub fn closed_nodes(&self) -> Vec<T> {
        let mut nodes: Vec<T> = (0..=self.n).map(|i| T::from_int(i as i64) * self.h).collect();
        nodes.push(self.rho_inf);
        nodes
    }

    /// Cell width `rho_inf / N` of the cell-centred scheme.
    pub fn cell_width(&self) -> T {
        self.rho_inf / T::from_int(self.n as i64)
    }

    /// Cell centres `(i + 1/2) rho_inf / N`, `i = 0..N`.
    pub fn cell_centres(&self) -> Vec<T> {
        let w = self.cell_width();
        (0..self.n).map(|i| (T::from_int(i as i64) + T::half()) * w).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    Dirichlet,
    #[default]
    Asymptotic,
}

/// Robin condition `w'/w = kappa(beta)` at `rho_inf`, from the large-argument
/// expansion of the Tricomi function `U(a, nu + 1, delta rho^2)` with
/// `a = nu/2 + 1/2 - beta/(4 delta)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticClosure<T> {
    nu: T,
    delta: T,
    rho_inf: T,
    h: T,
    outer_flux: T,
    last_weight: T,
}

impl<T: Real> AsymptoticClosure<T> {
    /// Logarithmic derivative of `w` at `rho_inf`, or `None` when the
    /// truncated expansion is unusable.
    pub fn log_derivative(&self, beta: T) -> Option<T> {
        let a = self.nu / T::two() + T::half() - beta / (T::lit(4.0) * self.delta);
        let b = self.nu + T::one();
        let mu = self.delta * self.rho_inf * self.rho_inf;
        let dlog_u = tricomi_log_derivative(a, b, mu)?;
        let kappa = T::two() * self.delta * self.rho_inf * (dlog_u - T::half());
        kappa.is_finite().then_some(kappa)
    }

    /// Addition to the last diagonal entry of the symmetric operator.
    pub fn diagonal_shift(&self, beta: T) -> T {
        let dirichlet = T::two() * self.outer_flux / (self.h * self.h * self.last_weight);
        match self.log_derivative(beta) {
            Some(kappa) => {
                let denom = T::one() - self.h * kappa / T::two();
                if denom > T::zero() {
                    -self.outer_flux * kappa / (self.h * denom * self.last_weight)
                } else {
                    dirichlet
                }
            }
            None => dirichlet,
        }
    }
}

/// `d ln U(a, b, mu) / d mu` from the optimally truncated series
/// `U ~ mu^{-a} sum_k c_k mu^{-k}`.
fn tricomi_log_derivative<T: Real>(a: T, b: T, mu: T) -> Option<T> {
    let mut c = T::one();
    let mut sum = T::one();
    let mut dsum = T::zero();
    let mut previous = T::one();
    for k in 0..200 {
        let kk = T::from_int(k);
        let next = c * (-(a + kk) * (a - b + T::one() + kk) / (kk + T::one()));
        let term = next * mu.powi(-(k as i32 + 1));
        if k > 0 && term.abs() > previous {
            break;
        }
        sum += term;
        dsum += -(kk + T::one()) * term / mu;
        previous = term.abs();
        c = next;
        if term.abs() <= T::epsilon() * T::epsilon() * sum.abs() {
            break;
        }
    }
    let value = -a / mu + dsum / sum;
    value.is_finite().then_some(value)
}

/// Symmetric tridiagonal matrix, optionally with an eigenvalue-dependent
/// last diagonal entry.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalOperator<T> {
    pub diagonal: Vec<T>,
    pub off_diagonal: Vec<T>,
    pub closure: Option<AsymptoticClosure<T>>,
    /// Abscissae of the unknowns (grid nodes or cell centres).
    pub abscissae: Vec<T>,
}

impl<T: Real> TridiagonalOperator<T> {
    pub fn len(&self) -> usize {
        self.diagonal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diagonal.is_empty()
    }

    /// Number of eigenvalues below `x`, with the closure evaluated at `x`.
    pub fn count_below(&self, x: T) -> usize {
        let last = self.diagonal.len() - 1;
        let shift = self.closure.as_ref().map_or(T::zero(), |c| c.diagonal_shift(x));
        let tiny = T::min_positive_value();
        let mut count = 0;
        let mut q = T::one();
        for i in 0..=last {
            let mut d = self.diagonal[i] - x;
            if i == last {
                d += shift;
            }
            q = if i == 0 {
                d
            } else {
                let o = self.off_diagonal[i - 1];
                d - o * o / q
            };
            if q == T::zero() {
                q = tiny;
            }
            if q < T::zero() {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (T, T) {
        let n = self.diagonal.len();
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for i in 0..n {
            let mut r = T::zero();
            if i > 0 {
                r += self.off_diagonal[i - 1].abs();
            }
            if i + 1 < n {
                r += self.off_diagonal[i].abs();
            }
            lo = lo.min(self.diagonal[i] - r);
            hi = hi.max(self.diagonal[i] + r);
        }
        (lo, hi)
    }

    /// `y^T A y / y^T y` for the fixed part of the matrix (closure ignored).
    pub fn rayleigh_quotient(&self, y: &[T]) -> Result<T> {
        if y.len() != self.diagonal.len() {
            return Err(Error::Contract("vector length must match the operator"));
        }
        let mut num = T::zero();
        let mut den = T::zero();
        for i in 0..y.len() {
            let mut ay = self.diagonal[i] * y[i];
            if i > 0 {
                ay += self.off_diagonal[i - 1] * y[i - 1];
            }
            if i + 1 < y.len() {
                ay += self.off_diagonal[i] * y[i + 1];
            }
            num += y[i] * ay;
            den += y[i] * y[i];
        }
        Ok(num / den)
    }
}

fn check_operator_inputs<T: Real>(zeta: T, delta: T, eta: T) -> Result<()> {
    if !(delta > T::zero()) || !delta.is_finite() {
        return Err(Error::domain("delta", delta, "must be positive"));
    }
    if !(eta > T::zero()) || !eta.is_finite() {
        return Err(Error::domain("eta", eta, "must be positive"));
    }
    if !zeta.is_finite() {
        return Err(Error::domain("zeta", zeta, "must be finite"));
    }
    Ok(())
}

/// Liouville-form stencil on the grid nodes, Dirichlet at both ends.
///
/// Diagonal `2/h^2 + (zeta^2/eta^2 - 1/4)/rho_i^2 + delta^2 rho_i^2`,
/// off-diagonal `-1/h^2`.
pub fn discretize<T: Real>(zeta: T, delta: T, eta: T, grid: &RadialGrid<T>) -> Result<TridiagonalOperator<T>> {
    check_operator_inputs(zeta, delta, eta)?;
    let h = grid.spacing();
    let h2 = h * h;
    let centrifugal = zeta * zeta / (eta * eta) - T::lit(0.25);
    let nodes = grid.nodes();
    let diagonal = nodes
        .iter()
        .map(|r| T::two() / h2 + centrifugal / (*r * *r) + delta * delta * *r * *r)
        .collect();
    Ok(TridiagonalOperator {
        diagonal,
        off_diagonal: vec![-T::one() / h2; grid.len() - 1],
        closure: None,
        abscissae: nodes,
    })
}

/// Cell-centred finite-volume discretisation of the regularised equation.
///
/// Unknowns are `sqrt(rho_c^{2nu+1}) w(rho_c)` at the cell centres of
/// [`RadialGrid::cell_centres`].
pub fn discretize_regularized<T: Real>(
    zeta: T,
    delta: T,
    eta: T,
    grid: &RadialGrid<T>,
    boundary: Boundary,
) -> Result<TridiagonalOperator<T>> {
    check_operator_inputs(zeta, delta, eta)?;
    let n = grid.len();
    let nu = zeta.abs() / eta;
    let power = T::two() * nu + T::one();
    let h = grid.cell_width();
    let h2 = h * h;
    let centres = grid.cell_centres();
    // face fluxes rho_f^{2nu+1}, zero at the origin
    let faces: Vec<T> = (0..=n).map(|i| (T::from_int(i as i64) * h).powf(power)).collect();
    let weights: Vec<T> = centres.iter().map(|r| r.powf(power)).collect();
    if weights.iter().any(|w| !(*w > T::zero()) || !w.is_finite()) {
        return Err(Error::Grid("cell weights underflow; refine the grid or reduce |zeta|/eta"));
    }

    let mut diagonal = Vec::with_capacity(n);
    for i in 0..n {
        let outer = if i + 1 == n { T::zero() } else { faces[i + 1] };
        let stiffness = (faces[i] + outer) / h2;
        let potential = delta * delta * centres[i].powf(power + T::two());
        diagonal.push((stiffness + potential) / weights[i]);
    }
    let off_diagonal = (0..n - 1)
        .map(|i| -faces[i + 1] / h2 / (weights[i] * weights[i + 1]).sqrt())
        .collect();

    let closure = AsymptoticClosure {
        nu,
        delta,
        rho_inf: grid.rho_inf(),
        h,
        outer_flux: faces[n],
        last_weight: weights[n - 1],
    };
    let closure = match boundary {
        Boundary::Asymptotic => Some(closure),
        Boundary::Dirichlet => {
            let last = n - 1;
            diagonal[last] += T::two() * closure.outer_flux / (h2 * closure.last_weight);
            None
        }
    };
    Ok(TridiagonalOperator {
        diagonal,
        off_diagonal,
        closure,
        abscissae: centres,
    })
}

/// The `count` smallest eigenvalues, ascending, by Sturm bisection.
pub fn lowest_eigenvalues<T: Real>(op: &TridiagonalOperator<T>, count: usize) -> Result<Vec<T>> {
    if count > op.len() {
        return Err(Error::Contract("count must not exceed the operator size"));
    }
    if op.is_empty() {
        return Ok(Vec::new());
    }
    let (g_lo, g_hi) = op.gershgorin();
    let width = T::lit(BISECTION_WIDTH);
    let span = (g_hi - g_lo).max(T::one());
    (0..count)
        .map(|index| {
            let mut lo = g_lo;
            let mut hi = g_hi;
            let mut step = span;
            let mut tries = 0;
            while op.count_below(lo) > index {
                lo = lo - step;
                step = step * T::two();
                tries += 1;
                if tries > 200 {
                    return Err(Error::Bisection { index });
                }
            }
            step = span;
            while op.count_below(hi) <= index {
                hi = hi + step;
                step = step * T::two();
                tries += 1;
                if tries > 400 {
                    return Err(Error::Bisection { index });
                }
            }
            let mut iterations = 0;
            while hi - lo > width {
                let mid = lo + (hi - lo) / T::two();
                if mid <= lo || mid >= hi {
                    break;
                }
                if op.count_below(mid) > index {
                    hi = mid;
                } else {
                    lo = mid;
                }
                iterations += 1;
                if iterations > 400 {
                    return Err(Error::Bisection { index });
                }
            }
            Ok(lo + (hi - lo) / T::two())
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleScheme {
    Liouville,
    #[default]
    Regularized,
}

/// Where the radial problem is posed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleDomain {
    /// `(0, rho_inf)` standing in for `(0, infinity)`; the domain on which
    /// the analytic spectrum holds.
    #[default]
    Mathematical,
    /// `(0, rho_max)` with a Dirichlet wall at the light cylinder, whatever
    /// the requested boundary. Eigenvalues are shifted away from the analytic
    /// ones.
    Physical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct OracleOptions {
    pub scheme: OracleScheme,
    pub boundary: Boundary,
    pub domain: OracleDomain,
}

/// One oracle comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenReport<T> {
    pub n: u32,
    pub l: i32,
    pub s: i32,
    pub eta: T,
    pub delta: T,
    pub zeta: T,
    pub beta_analytic: T,
    pub beta_numeric: T,
    pub rel_error: T,
    pub grid_n: usize,
    pub rho_inf: T,
    pub within_tolerance: bool,
    /// Set when the eigensolver could not produce a value for this entry.
    pub failure: Option<String>,
}

/// Builds the operator for `zeta` under `options`.
pub fn build_operator<T: Real>(
    zeta: T,
    delta: T,
    eta: T,
    grid: &RadialGrid<T>,
    options: OracleOptions,
) -> Result<TridiagonalOperator<T>> {
    match options.scheme {
        OracleScheme::Liouville => discretize(zeta, delta, eta, grid),
        OracleScheme::Regularized => discretize_regularized(zeta, delta, eta, grid, options.boundary),
    }
}

/// Compares numerical and analytic `beta` for every state in `states`.
///
/// States sharing `zeta` share one operator; distinct operators are solved
/// in parallel and the reports come back in input order.
pub fn verify_spectrum<T: Real>(
    p: &ParticleParams<T>,
    bg: &BackgroundParams<T>,
    states: &[QuantumNumbers<T>],
    tol: T,
    grid: &RadialGrid<T>,
    options: OracleOptions,
) -> Result<Vec<EigenReport<T>>> {
    let delta = coupling_delta(p, bg);
    if !(delta > T::zero()) {
        return Err(Error::NoBoundState);
    }
    let (grid, options) = match options.domain {
        OracleDomain::Mathematical => (grid.clone(), options),
        OracleDomain::Physical => (
            RadialGrid::new(grid.len(), physical_radius(bg))?,
            OracleOptions {
                boundary: Boundary::Dirichlet,
                ..options
            },
        ),
    };

    let mut groups: BTreeMap<u64, (T, u32)> = BTreeMap::new();
    for qn in states {
        let zeta = effective_angular_momentum(qn.l, qn.s, bg.eta);
        let key = zeta.to_f64().unwrap_or(f64::NAN).to_bits();
        let entry = groups.entry(key).or_insert((zeta, 0));
        entry.1 = entry.1.max(qn.n + 1);
    }
    let solved: BTreeMap<u64, std::result::Result<Vec<T>, String>> = groups
        .into_par_iter()
        .map(|(key, (zeta, count))| {
            let values = build_operator(zeta, delta, bg.eta, &grid, options)
                .and_then(|op| lowest_eigenvalues(&op, (count as usize).min(op.len())))
                .map_err(|e| e.to_string());
            (key, values)
        })
        .collect();

    Ok(states
        .iter()
        .map(|qn| {
            let zeta = effective_angular_momentum(qn.l, qn.s, bg.eta);
            let key = zeta.to_f64().unwrap_or(f64::NAN).to_bits();
            let beta_analytic = analytic_beta(qn.n, zeta, delta, bg.eta);
            let (beta_numeric, failure) = match &solved[&key] {
                Ok(values) => match values.get(qn.n as usize) {
                    Some(v) => (*v, None),
                    None => (T::nan(), Some("grid has too few points for this level".to_string())),
                },
                Err(msg) => (T::nan(), Some(msg.clone())),
            };
            let rel_error = (beta_numeric - beta_analytic).abs() / beta_analytic.abs().max(T::min_positive_value());
            EigenReport {
                n: qn.n,
                l: qn.l,
                s: qn.s.as_i32(),
                eta: bg.eta,
                delta,
                zeta,
                beta_analytic,
                beta_numeric,
                rel_error,
                grid_n: grid.len(),
                rho_inf: grid.rho_inf(),
                within_tolerance: rel_error <= tol,
                failure,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::Spin;

    #[test]
    fn grid_layout() {
        let g = RadialGrid::new(199, 2.0f64).unwrap();
        assert_eq!(g.spacing(), 0.01);
        let nodes = g.nodes();
        assert_eq!(nodes.len(), 199);
        assert_eq!(nodes[0], 0.01);
        assert!(nodes.windows(2).all(|w| w[1] > w[0]));
        assert!((nodes[198] - 1.99).abs() < 1e-14);
        let closed = g.closed_nodes();
        assert_eq!((closed[0], closed[200]), (0.0, 2.0));
        assert!(matches!(RadialGrid::new(99, 1.0), Err(Error::Grid(_))));
        assert!(matches!(RadialGrid::new(100, 0.0), Err(Error::Domain { .. })));
    }

    #[test]
    fn liouville_stencil_entries() {
        let g = RadialGrid::new(100, 1.01f64).unwrap();
        let op = discretize(0.0, 1.0, 1.0, &g).unwrap();
        let h = g.spacing();
        let r = 5.0 * h;
        let expected = 2.0 / (h * h) - 0.25 / (r * r) + r * r;
        assert!((op.diagonal[4] - expected).abs() < 1e-12 * expected.abs());
        assert!(op.off_diagonal.iter().all(|o| *o == -1.0 / (h * h)));
        assert_eq!(op.off_diagonal.len(), 99);
    }

    #[test]
    fn regularized_operator_is_symmetric_form() {
        let g = RadialGrid::new(200, 6.0f64).unwrap();
        let op = discretize_regularized(0.25, 1.0, 0.5, &g, Boundary::Dirichlet).unwrap();
        assert!(op.closure.is_none());
        assert!(op.diagonal.iter().all(|d| d.is_finite()));
        assert!(op.off_diagonal.iter().all(|o| *o < 0.0));
    }

    #[test]
    fn ground_state_flat() {
        let g = RadialGrid::new(8000, 6.0f64).unwrap();
        let op = discretize_regularized(0.0, 1.0, 1.0, &g, Boundary::Asymptotic).unwrap();
        let beta = lowest_eigenvalues(&op, 1).unwrap()[0];
        assert!((beta - 2.0).abs() / 2.0 < 1e-4, "{beta}");
    }

    #[test]
    fn conical_levels() {
        let g = RadialGrid::new(4000, 6.0f64).unwrap();
        let op = discretize_regularized(0.25, 1.0, 0.5, &g, Boundary::Asymptotic).unwrap();
        let betas = lowest_eigenvalues(&op, 4).unwrap();
        assert!((betas[0] - 3.0).abs() < 1e-4);
        assert!((betas[1] - 7.0).abs() < 1e-4);
        assert!(betas.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn liouville_stencil_near_singular_origin() {
        // (nu^2 - 1/4)/rho^2 with nu = 0 converges slowly; nu = 1 is fine
        let g = RadialGrid::new(4000, 6.0f64).unwrap();
        let smooth = lowest_eigenvalues(&discretize(1.0, 1.0, 1.0, &g).unwrap(), 1).unwrap()[0];
        assert!((smooth - 4.0).abs() / 4.0 < 1e-4, "{smooth}");
        let rough = lowest_eigenvalues(&discretize(0.0, 1.0, 1.0, &g).unwrap(), 1).unwrap()[0];
        assert!((rough - 2.0).abs() / 2.0 > 1e-3, "{rough}");
    }

    #[test]
    fn second_order_convergence() {
        let err = |n| {
            let g = RadialGrid::new(n, 6.0).unwrap();
            let op = discretize_regularized(0.6, 1.0, 0.8, &g, Boundary::Asymptotic).unwrap();
            let b = lowest_eigenvalues(&op, 2).unwrap();
            (b[1] - analytic_beta(1, 0.6f64, 1.0, 0.8)).abs()
        };
        let ratio = err(500) / err(1000);
        assert!((ratio - 4.0).abs() < 0.6, "ratio {ratio}");
    }

    #[test]
    fn rayleigh_quotient_bounds_ground_state() {
        let g = RadialGrid::new(2000, 6.0f64).unwrap();
        let (zeta, delta, eta) = (0.3, 1.0, 0.6);
        let op = discretize_regularized(zeta, delta, eta, &g, Boundary::Dirichlet).unwrap();
        let beta0 = lowest_eigenvalues(&op, 1).unwrap()[0];
        let nu: f64 = zeta / eta;
        let y: Vec<f64> = g
            .cell_centres()
            .iter()
            .map(|r| (-delta * r * r / 2.0).exp() * r.powf(nu + 0.5))
            .collect();
        let q = op.rayleigh_quotient(&y).unwrap();
        assert!(q >= beta0 - 1e-10);
        assert!((q - analytic_beta(0, zeta, delta, eta)).abs() < 1e-3);
    }

    #[test]
    fn verify_flags_everything_at_zero_tolerance() {
        let p = ParticleParams::new(1.0, 1.0, 1.0).unwrap();
        let bg = BackgroundParams::new(0.8, 1.25).unwrap();
        let g = RadialGrid::new(1000, 6.0f64).unwrap();
        let states: Vec<_> = (0..3)
            .flat_map(|n| [QuantumNumbers::new(n, 1, Spin::Up), QuantumNumbers::new(n, -1, Spin::Down)])
            .collect();
        let loose = verify_spectrum(&p, &bg, &states, 1e-3, &g, OracleOptions::default()).unwrap();
        assert!(loose.iter().all(|r| r.within_tolerance && r.failure.is_none()));
        let strict = verify_spectrum(&p, &bg, &states, 0.0, &g, OracleOptions::default()).unwrap();
        assert!(strict.iter().all(|r| !r.within_tolerance));
        assert_eq!(strict.len(), states.len());
        assert_eq!((strict[1].l, strict[1].s), (-1, -1));
    }

    #[test]
    fn physical_domain_shifts_levels() {
        let p = ParticleParams::new(1.0, 1.0, 1.0).unwrap();
        let bg = BackgroundParams::new(1.0, 0.5).unwrap();
        let g = RadialGrid::new(1000, 6.0f64).unwrap();
        let qn = [QuantumNumbers::new(0, 0, Spin::Up)];
        let options = OracleOptions {
            domain: OracleDomain::Physical,
            ..OracleOptions::default()
        };
        let walled = verify_spectrum(&p, &bg, &qn, 1e-4, &g, options).unwrap();
        assert_eq!(walled[0].rho_inf, 2.0);
        assert!(walled[0].beta_numeric > walled[0].beta_analytic);
    }

    #[test]
    fn count_exceeding_size() {
        let g = RadialGrid::new(100, 6.0f64).unwrap();
        let op = discretize(0.5, 1.0, 1.0, &g).unwrap();
        assert!(matches!(lowest_eigenvalues(&op, 101), Err(Error::Contract(_))));
    }
}
