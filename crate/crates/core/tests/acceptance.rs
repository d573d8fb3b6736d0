//! Acceptance criteria. Each test prints one `criterion N: PASS|FAIL ...`
//! line and then asserts.

use std::time::Instant;

use dipole_landau::geometry::{
    cartan_check, effective_magnetic_field, metric_components, physical_radius, tetrad_at, BackgroundParams,
};
use dipole_landau::oracle::{verify_spectrum, OracleOptions, RadialGrid};
use dipole_landau::spectrum::{
    analytic_beta, beta_parameter, coupling_delta, effective_angular_momentum, energy_level, flat_energy_level,
    landau_table, level_index, nonrelativistic_energy, ParticleParams, QuantumNumbers, Spin, SpinSelection,
};
use dipole_landau::spinor::{build_spinor, dirac_residual, gordon_currents};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn report(id: u32, pass: bool, detail: String) {
    println!("criterion {id}: {} {detail}", if pass { "PASS" } else { "FAIL" });
}

fn states(n: std::ops::RangeInclusive<u32>, l: std::ops::RangeInclusive<i32>) -> Vec<QuantumNumbers<f64>> {
    let mut out = Vec::new();
    for n in n {
        for l in l.clone() {
            for s in [Spin::Up, Spin::Down] {
                out.push(QuantumNumbers::new(n, l, s));
            }
        }
    }
    out
}

#[test]
fn criterion_1_oracle_matches_analytic_spectrum() {
    let start = Instant::now();
    let grid = RadialGrid::new(8000, 6.0).unwrap();
    let qns = states(0..=4, -2..=2);
    let p = ParticleParams::new(1.0, 1.0, 1.0).unwrap();
    let mut worst = 0.0f64;
    let mut failures = 0;
    let mut total = 0;
    for eta in [0.5f64, 0.8, 1.0] {
        // delta = d E0 omega eta = 1
        let bg = BackgroundParams::new(eta, 1.0 / eta).unwrap();
        assert!((coupling_delta(&p, &bg) - 1.0).abs() < 1e-15);
        let reports = verify_spectrum(&p, &bg, &qns, 1e-4, &grid, OracleOptions::default()).unwrap();
        for r in &reports {
            worst = worst.max(r.rel_error);
            failures += usize::from(!r.within_tolerance);
        }
        total += reports.len();
    }
    let elapsed = start.elapsed().as_secs_f64();
    let pass = failures == 0 && elapsed < 30.0;
    report(
        1,
        pass,
        format!("{total} levels, worst relative error {worst:.3e} (limit 1e-4), {elapsed:.2} s (limit 30 s)"),
    );
    assert!(pass);
}

#[test]
fn criterion_2_beta_round_trip() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let p = ParticleParams::<f64>::new(
            rng.gen_range(0.5..2.0),
            rng.gen_range(0.05..0.5),
            rng.gen_range(0.5..2.0),
        )
        .unwrap();
        let bg = BackgroundParams::new(rng.gen_range(0.3..=1.0), rng.gen_range(0.5..2.0)).unwrap();
        let s = if rng.gen_bool(0.5) { Spin::Up } else { Spin::Down };
        let qn = QuantumNumbers::new(rng.gen_range(0..=10), rng.gen_range(-5..=5), s);
        let e = energy_level(&qn, &p, &bg).unwrap();
        let beta = beta_parameter(e, &qn, &p, &bg).unwrap();
        let zeta = effective_angular_momentum(qn.l, qn.s, bg.eta);
        let expected = analytic_beta(qn.n, zeta, coupling_delta(&p, &bg), bg.eta);
        worst = worst.max((beta - expected).abs() / expected.abs());
    }
    let pass = worst <= 1e-12;
    report(2, pass, format!("1000 random cases, worst relative error {worst:.3e} (limit 1e-12)"));
    assert!(pass);
}

#[test]
fn criterion_3_flat_background_limit() {
    let mut checked = 0;
    let mut mismatches = 0;
    for &(m, d, e0) in &[(1.0, 0.01, 1.0), (0.7, 0.3, 2.5), (2.0, 0.05, 0.4)] {
        let p = ParticleParams::new(m, d, e0).unwrap();
        for omega in [0.3, 1.0, 2.7] {
            let bg = BackgroundParams::new(1.0, omega).unwrap();
            for qn in states(0..=6, -4..=4) {
                checked += 1;
                if energy_level(&qn, &p, &bg).unwrap() != flat_energy_level(&qn, &p, omega).unwrap() {
                    mismatches += 1;
                }
            }
        }
    }
    let pass = mismatches == 0;
    report(3, pass, format!("{checked} levels compared for exact equality, {mismatches} mismatches"));
    assert!(pass);
}

#[test]
fn criterion_4_nonrelativistic_remainder() {
    let bg = BackgroundParams::new(1.0, 1.0).unwrap();
    let couplings: Vec<f64> = (0..5).map(|k| 1e-3 / f64::from(1 << k)).collect();
    let mut worst = 0.0f64;
    let mut exact = Vec::new();
    for qn in states(0..=2, -2..=2) {
        let zeta = effective_angular_momentum(qn.l, qn.s, bg.eta);
        let k = level_index(qn.n, zeta, qn.s, bg.eta);
        let remainders: Vec<f64> = couplings
            .iter()
            .map(|x| {
                let p = ParticleParams::new(1.0, *x, 1.0).unwrap();
                (energy_level(&qn, &p, &bg).unwrap() - nonrelativistic_energy(&qn, &p, &bg).unwrap()).abs()
            })
            .collect();
        // s = -1, K = 1: (1 - x)^2 + 4x = (1 + x)^2, so E equals E_NR exactly
        if qn.s == Spin::Down && k == 1.0 {
            let largest = remainders.iter().copied().fold(0.0f64, f64::max);
            exact.push(format!("(n={},l={}) {largest:.1e}", qn.n, qn.l));
            continue;
        }
        for w in remainders.windows(2) {
            worst = worst.max((w[0] / w[1] - 4.0).abs() / 4.0);
        }
    }
    let pass = worst <= 0.10;
    report(
        4,
        pass,
        format!(
            "worst deviation of halving ratio from 4: {:.2}% (limit 10%); s=-1, K=1 levels have no remainder beyond rounding: {}",
            100.0 * worst,
            exact.join(", ")
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_5_effective_field_uniformity() {
    let mut worst_value = 0.0f64;
    let mut ratios = Vec::new();
    let mut pass = true;
    for eta in [0.5f64, 1.0] {
        for omega in [1.0, 2.0] {
            for e0 in [1.0, 3.0] {
                let bg = BackgroundParams::new(eta, omega).unwrap();
                let extent = physical_radius(&bg);
                let coarse = effective_magnetic_field(&bg, e0, &RadialGrid::new(1000, extent).unwrap()).unwrap();
                let fine = effective_magnetic_field(&bg, e0, &RadialGrid::new(2001, extent).unwrap()).unwrap();
                let scale = coarse.closed_form.abs();
                worst_value = worst_value.max(coarse.max_deviation / scale);
                let ratio = coarse.max_deviation / fine.max_deviation;
                ratios.push(ratio);
                pass &= coarse.max_deviation / scale <= 1e-6 && (ratio - 4.0).abs() <= 0.6;
            }
        }
    }
    let shown: Vec<String> = ratios.iter().map(|r| format!("{r:.3}")).collect();
    report(
        5,
        pass,
        format!(
            "worst relative deviation {worst_value:.3e}; error ratios under h -> h/2: [{}] (required 4 +- 15%)",
            shown.join(", ")
        ),
    );
    assert!(pass);
}

/// Exponents of the spinor components near the origin are non-integer
/// and below two, which limits central differences below second order.
fn rough_origin(qn: &QuantumNumbers<f64>, eta: f64) -> bool {
    let zeta = effective_angular_momentum(qn.l, qn.s, eta);
    let nu = zeta.abs() / eta;
    let small = if qn.s.sign::<f64>() * zeta < 0.0 { nu - 1.0 } else { nu + 1.0 };
    let integral = |x: f64| (x - x.round()).abs() < 1e-12;
    !(integral(nu) && integral(small)) && nu.min(small) < 2.0
}

#[test]
fn criterion_6_dirac_residual() {
    let p = ParticleParams::new(1.0, 0.01, 1.0).unwrap();
    let mut worst = 0.0f64;
    let mut worst_ratio = 0.0f64;
    let mut informational = Vec::new();
    for eta in [1.0, 0.5] {
        let bg = BackgroundParams::new(eta, 1.0).unwrap();
        let delta = coupling_delta(&p, &bg);
        let coarse = RadialGrid::for_delta(delta, 36.0, 4000).unwrap();
        let fine = RadialGrid::for_delta(delta, 36.0, 8001).unwrap();
        for qn in states(0..=1, -1..=2) {
            let r4 = dirac_residual(&build_spinor(&qn, &p, &bg, &coarse).unwrap(), &p, &bg).unwrap();
            let r8 = dirac_residual(&build_spinor(&qn, &p, &bg, &fine).unwrap(), &p, &bg).unwrap();
            worst = worst.max(r4);
            let ratio = r4 / r8;
            if rough_origin(&qn, eta) {
                informational.push(format!("(eta={eta},n={},l={},s={}) {ratio:.2}", qn.n, qn.l, qn.s.as_i32()));
            } else {
                worst_ratio = worst_ratio.max((ratio - 4.0).abs() / 4.0);
            }
        }
    }
    let pass = worst <= 1e-3 && worst_ratio <= 0.15;
    report(
        6,
        pass,
        format!(
            "worst residual {worst:.3e} at N=4000 (limit 1e-3); worst deviation of h-halving ratio from 4 on smooth-origin states {:.2}% (limit 15%); rough-origin ratios: {}",
            100.0 * worst_ratio,
            informational.join(", ")
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_7_gordon_identity() {
    let p = ParticleParams::new(1.0, 0.01, 1.0).unwrap();
    let mut worst = 0.0f64;
    let mut count = 0;
    for eta in [0.5, 1.0] {
        let bg = BackgroundParams::new(eta, 1.0).unwrap();
        let grid = RadialGrid::for_delta(coupling_delta(&p, &bg), 36.0, 4000).unwrap();
        for qn in states(0..=1, -1..=1) {
            let table = build_spinor(&qn, &p, &bg, &grid).unwrap();
            let currents = gordon_currents(&table, &p, &bg).unwrap();
            worst = worst.max(currents.identity_deviation(eta));
            count += 1;
        }
    }
    let pass = worst <= 1e-3;
    report(7, pass, format!("{count} states, worst relative deviation {worst:.3e} (limit 1e-3)"));
    assert!(pass);
}

#[test]
fn criterion_8_geometry_exactness() {
    let mut worst_metric = 0.0f64;
    let mut worst_duality = 0.0f64;
    let mut cartan_ok = true;
    for i in 0..10 {
        let eta = f64::from(i + 1) / 10.0;
        for j in 0..10 {
            let omega = f64::from(j + 1) / 5.0;
            let bg = BackgroundParams::new(eta, omega).unwrap();
            cartan_ok &= cartan_check(&bg).passed;
            let extent = physical_radius(&bg);
            for k in 0..10 {
                let rho = extent * (0.05 + 0.1 * f64::from(k));
                let tetrad = tetrad_at(&bg, rho).unwrap();
                let from_tetrad = tetrad.metric();
                let direct = metric_components(&bg, rho).unwrap().matrix();
                for (a, b) in from_tetrad.iter().flatten().zip(direct.iter().flatten()) {
                    worst_metric = worst_metric.max((a - b).abs() / b.abs().max(1.0));
                }
                worst_duality = worst_duality.max(tetrad.duality_deviation());
            }
        }
    }
    let pass = worst_metric <= 1e-14 && worst_duality <= 1e-14 && cartan_ok;
    report(
        8,
        pass,
        format!(
            "1000 points: metric deviation {worst_metric:.3e}, duality deviation {worst_duality:.3e} (limit 1e-14), cartan_check {}",
            if cartan_ok { "passed" } else { "failed" }
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_9_degeneracy_breaking() {
    let p = ParticleParams::new(1.0, 0.013, 1.7).unwrap();
    let flat = landau_table(&p, &BackgroundParams::new(1.0, 0.9).unwrap(), 3, -3..=3, SpinSelection::Both).unwrap();
    let cone = landau_table(&p, &BackgroundParams::new(0.5, 0.9).unwrap(), 3, -3..=3, SpinSelection::Both).unwrap();
    let exact = flat.degeneracy.groups.iter().filter(|g| g.splitting <= 1e-12).count();
    let broken: Vec<_> = cone.degeneracy.groups.iter().filter(|g| g.splitting > 1e-6).collect();
    let largest = broken.iter().map(|g| g.splitting).fold(0.0f64, f64::max);
    let pass = exact >= 1 && !broken.is_empty();
    report(
        9,
        pass,
        format!(
            "{exact} degenerate groups at eta=1; {} of them split by more than 1e-6 at eta=0.5 (largest {largest:.3e})",
            broken.len()
        ),
    );
    assert!(pass);
}
