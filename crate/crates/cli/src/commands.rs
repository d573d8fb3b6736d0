//! Command implementations. Each writes its artifacts into the output
//! directory and returns the provenance record.

use std::path::{Path, PathBuf};

use dipole_landau::geometry::{effective_magnetic_field, effective_potential, induced_fields, physical_radius};
use dipole_landau::oracle::{verify_spectrum, OracleOptions, RadialGrid};
use dipole_landau::radial::normalize;
use dipole_landau::spectrum::{
    check_weak_field, coupling_delta, cyclotron_frequency, dirac_energy, energy_level, flat_energy_level,
    landau_table, nonrelativistic_energy, QuantumNumbers, Spin, SpinSelection, WeakFieldCheck,
};
use dipole_landau::spinor::{build_spinor, dirac_residual, gordon_currents};
use dipole_landau::{Background, Grid, State};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::config::{library_error, ConfigError, RunConfig};
use crate::output::{real, write_csv, write_json};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    /// Induced fields, effective potential and effective magnetic field.
    Fields,
    /// Energy table and degeneracy report.
    Spectrum,
    /// Finite-difference oracle against the analytic spectrum.
    Verify,
    /// Normalised radial eigenfunction.
    Wavefunction,
    /// Four-spinor, Dirac residual and Gordon decomposition.
    Currents,
    /// Flat-background and nonrelativistic specialisations.
    Limits,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Fields => "fields",
            Command::Spectrum => "spectrum",
            Command::Verify => "verify",
            Command::Wavefunction => "wavefunction",
            Command::Currents => "currents",
            Command::Limits => "limits",
        }
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Output(#[from] anyhow::Error),
}

impl RunError {
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Config(_) => 2,
            RunError::Output(_) => 1,
        }
    }
}

#[derive(Debug)]
pub struct Outcome {
    pub exit_code: u8,
    pub provenance: Map<String, Value>,
    pub artifacts: Vec<PathBuf>,
}

struct Run<'a> {
    cfg: &'a RunConfig,
    out: &'a Path,
    provenance: Map<String, Value>,
    artifacts: Vec<PathBuf>,
    failed: bool,
}

impl<'a> Run<'a> {
    fn new(command: Command, cfg: &'a RunConfig, out: &'a Path) -> Self {
        let mut provenance = Map::new();
        provenance.insert("command".into(), json!(command.name()));
        provenance.insert("library_version".into(), json!(dipole_landau::VERSION));
        provenance.extend(cfg.echo());
        Self {
            cfg,
            out,
            provenance,
            artifacts: Vec::new(),
            failed: false,
        }
    }

    fn grid(&mut self, grid: &Grid) {
        self.provenance.insert("grid_n".into(), json!(grid.len()));
        self.provenance.insert("grid_rho_inf".into(), json!(grid.rho_inf()));
        self.provenance.insert("grid_spacing".into(), json!(grid.spacing()));
    }

    /// Records the weak-field check; under `strict` a failure fails the run.
    fn weak_field(&mut self, bg: &Background) -> Result<WeakFieldCheck<f64>, RunError> {
        let p = self.cfg.particle()?;
        let check = check_weak_field(&p, bg, self.cfg.weak_field_threshold).map_err(library_error)?;
        self.provenance.insert("weak_field_ratio".into(), json!(check.ratio));
        self.provenance.insert("weak_field_pass".into(), json!(check.pass));
        if !check.pass {
            eprintln!(
                "warning: weak-field condition violated: d E0 / (omega eta) = {} > {}",
                check.ratio, check.threshold
            );
            if self.cfg.strict {
                self.failed = true;
            }
        }
        Ok(check)
    }

    fn csv(&mut self, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<(), RunError> {
        self.artifacts.push(write_csv(self.out, name, header, rows)?);
        Ok(())
    }

    fn json<V: serde::Serialize>(&mut self, name: &str, value: &V) -> Result<(), RunError> {
        self.artifacts.push(write_json(self.out, name, value)?);
        Ok(())
    }

    fn finish(mut self, command: Command) -> Result<Outcome, RunError> {
        let names: Vec<Value> = self
            .artifacts
            .iter()
            .filter_map(|p| p.file_name().map(|n| json!(n.to_string_lossy())))
            .collect();
        self.provenance.insert("artifacts".into(), Value::Array(names));
        let name = format!("{}_provenance.json", command.name());
        let provenance = Value::Object(self.provenance.clone());
        self.artifacts.push(write_json(self.out, &name, &provenance)?);
        Ok(Outcome {
            exit_code: u8::from(self.failed),
            provenance: self.provenance,
            artifacts: self.artifacts,
        })
    }
}

fn require_rotation(cfg: &RunConfig) -> Result<(), ConfigError> {
    if cfg.omega == 0.0 {
        return Err(ConfigError::invalid("omega", "no bound states for omega = 0"));
    }
    Ok(())
}

fn sweep(cfg: &RunConfig) -> Vec<State> {
    let mut out = Vec::new();
    for n in 0..=cfg.n_max {
        for l in cfg.l_min..=cfg.l_max {
            for &s in cfg.spin.spins() {
                out.push(QuantumNumbers::new(n, l, s));
            }
        }
    }
    out
}

fn state_grid(cfg: &RunConfig, bg: &Background) -> Result<Grid, ConfigError> {
    let delta = coupling_delta(&cfg.particle()?, bg);
    RadialGrid::for_delta(delta, cfg.rho_inf_sigma, cfg.grid_points).map_err(library_error)
}

pub fn run_command(command: Command, cfg: &RunConfig, out: &Path) -> Result<Outcome, RunError> {
    std::fs::create_dir_all(out).map_err(anyhow::Error::from)?;
    let mut run = Run::new(command, cfg, out);
    match command {
        Command::Fields => fields(&mut run)?,
        Command::Spectrum => spectrum(&mut run)?,
        Command::Verify => verify(&mut run)?,
        Command::Wavefunction => wavefunction(&mut run)?,
        Command::Currents => currents(&mut run)?,
        Command::Limits => limits(&mut run)?,
    }
    run.finish(command)
}

fn fields(run: &mut Run) -> Result<(), RunError> {
    let cfg = run.cfg;
    let bg = cfg.background()?;
    let extent = if cfg.omega == 0.0 { 1.0 } else { physical_radius(&bg) };
    let grid = RadialGrid::new(cfg.grid_points, extent).map_err(library_error)?;
    run.grid(&grid);
    let spin = if cfg.spin == SpinSelection::Down { Spin::Down } else { Spin::Up };
    let field = effective_magnetic_field(&bg, cfg.e0, &grid).map_err(library_error)?;
    let mut rows = Vec::with_capacity(field.rho.len());
    for (r, curl) in field.rho.iter().zip(&field.numerical) {
        let f = induced_fields(&bg, cfg.e0, *r).map_err(library_error)?;
        let a = effective_potential(spin, cfg.dipole, &f);
        rows.push(vec![
            real(*r),
            real(f.e[2]),
            real(f.b[0]),
            real(a.a_t),
            real(a.a_phi),
            real(field.closed_form),
            real(*curl),
        ]);
    }
    run.csv(
        "fields.csv",
        &["rho", "e_z", "b_rho", "a_t", "a_phi", "b_eff", "b_eff_numeric"],
        &rows,
    )?;
    run.json(
        "fields.json",
        &json!({
            "b_eff": field.closed_form,
            "b_eff_max_deviation": field.max_deviation,
            "potential_spin": spin.as_i32(),
            "extent": extent,
        }),
    )
}

fn spectrum(run: &mut Run) -> Result<(), RunError> {
    let cfg = run.cfg;
    require_rotation(cfg)?;
    let (p, bg) = (cfg.particle()?, cfg.background()?);
    let weak = run.weak_field(&bg)?;
    let table = landau_table(&p, &bg, cfg.n_max, cfg.l_min..=cfg.l_max, cfg.spin).map_err(library_error)?;
    let mut rows = Vec::with_capacity(table.entries.len());
    for e in &table.entries {
        rows.push(vec![
            e.qn.n.to_string(),
            e.qn.l.to_string(),
            e.qn.s.as_i32().to_string(),
            real(e.zeta),
            real(e.delta),
            real(e.energy),
            real(dirac_energy(&e.qn, &p, &bg).map_err(library_error)?),
            real(e.landau_energy),
            real(e.beta),
            real(e.nonrelativistic_energy),
        ]);
    }
    run.csv(
        "spectrum.csv",
        &[
            "n",
            "l",
            "s",
            "zeta",
            "delta",
            "energy",
            "dirac_energy",
            "landau_energy",
            "beta",
            "nonrelativistic_energy",
        ],
        &rows,
    )?;
    run.json(
        "spectrum_degeneracy.json",
        &json!({
            "degeneracy": table.degeneracy,
            "cyclotron_frequency": cyclotron_frequency(&p, &bg),
            "weak_field": weak,
        }),
    )
}

fn verify(run: &mut Run) -> Result<(), RunError> {
    let cfg = run.cfg;
    require_rotation(cfg)?;
    let (p, bg) = (cfg.particle()?, cfg.background()?);
    run.weak_field(&bg)?;
    let grid = state_grid(cfg, &bg)?;
    run.grid(&grid);
    let options = OracleOptions {
        boundary: cfg.oracle_boundary,
        domain: cfg.oracle_domain,
        ..OracleOptions::default()
    };
    let reports = verify_spectrum(&p, &bg, &sweep(cfg), cfg.tolerance, &grid, options).map_err(library_error)?;
    let passed = reports.iter().filter(|r| r.within_tolerance).count();
    let worst = reports.iter().map(|r| r.rel_error).fold(0.0f64, |a, b| if b.is_nan() { f64::NAN } else { a.max(b) });
    let all = passed == reports.len();
    if !all {
        eprintln!("verification failed: {} of {} levels outside tolerance {}", reports.len() - passed, reports.len(), cfg.tolerance);
        run.failed = true;
    }
    run.provenance.insert("verified".into(), json!(all));
    run.json(
        "verify.json",
        &json!({
            "tolerance": cfg.tolerance,
            "all_within_tolerance": all,
            "passed": passed,
            "total": reports.len(),
            "worst_rel_error": worst,
            "reports": reports,
        }),
    )
}

fn single_state(cfg: &RunConfig) -> Result<State, ConfigError> {
    Ok(QuantumNumbers::new(cfg.n, cfg.l, cfg.single_spin()?))
}

fn wavefunction(run: &mut Run) -> Result<(), RunError> {
    let cfg = run.cfg;
    require_rotation(cfg)?;
    let (p, bg) = (cfg.particle()?, cfg.background()?);
    let qn = single_state(cfg)?;
    let weak = run.weak_field(&bg)?;
    let grid = state_grid(cfg, &bg)?;
    run.grid(&grid);
    let table = normalize(&qn, &p, &bg, &grid).map_err(library_error)?;
    if table.tail_warning {
        eprintln!(
            "warning: {:.3} of the probability lies beyond the light cylinder",
            table.tail_mass
        );
    }
    let rows: Vec<Vec<String>> = table
        .rho
        .iter()
        .zip(&table.values)
        .map(|(r, v)| vec![real(*r), real(*v), real(v * v)])
        .collect();
    run.csv("wavefunction.csv", &["rho", "xi", "probability_density"], &rows)?;
    run.json(
        "wavefunction.json",
        &json!({
            "n": qn.n,
            "l": qn.l,
            "s": qn.s.as_i32(),
            "energy": energy_level(&qn, &p, &bg).map_err(library_error)?,
            "normalization": table.normalization,
            "tail_mass": table.tail_mass,
            "tail_warning": table.tail_warning,
            "light_cylinder_radius": physical_radius(&bg),
            "weak_field": weak,
        }),
    )
}

fn currents(run: &mut Run) -> Result<(), RunError> {
    let cfg = run.cfg;
    require_rotation(cfg)?;
    let (p, bg) = (cfg.particle()?, cfg.background()?);
    let qn = single_state(cfg)?;
    let weak = run.weak_field(&bg)?;
    let grid = state_grid(cfg, &bg)?;
    run.grid(&grid);
    let table = build_spinor(&qn, &p, &bg, &grid).map_err(library_error)?;
    let residual = dirac_residual(&table, &p, &bg).map_err(library_error)?;
    let gc = gordon_currents(&table, &p, &bg).map_err(library_error)?;

    let spinor_rows: Vec<Vec<String>> = table
        .rho
        .iter()
        .zip(&table.components)
        .map(|(r, psi)| {
            let mut row = vec![real(*r)];
            for x in psi {
                row.push(real(x.re));
                row.push(real(x.im));
            }
            row
        })
        .collect();
    run.csv(
        "spinor.csv",
        &["rho", "re_1", "im_1", "re_2", "im_2", "re_3", "im_3", "re_4", "im_4"],
        &spinor_rows,
    )?;

    let mut header = vec!["rho".to_string()];
    for part in ["j", "total", "convection", "spin", "dipole"] {
        for mu in ["t", "rho", "phi", "z"] {
            header.push(format!("{part}_{mu}"));
        }
    }
    for part in ["p", "m"] {
        for a in 1..=3 {
            header.push(format!("{part}_{a}"));
        }
    }
    let mut rows = Vec::with_capacity(gc.rho.len());
    for i in 0..gc.rho.len() {
        let mut row = vec![real(gc.rho[i])];
        for v in [&gc.direct[i], &gc.total[i], &gc.convection[i], &gc.spin[i], &gc.dipole[i]] {
            row.extend(v.iter().map(|x| real(*x)));
        }
        row.extend(gc.polarization[i].iter().map(|x| real(*x)));
        row.extend(gc.magnetization[i].iter().map(|x| real(*x)));
        rows.push(row);
    }
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    run.csv("currents.csv", &header, &rows)?;
    run.json(
        "currents.json",
        &json!({
            "n": qn.n,
            "l": qn.l,
            "s": qn.s.as_i32(),
            "energy": table.energy,
            "closed_form_energy": energy_level(&qn, &p, &bg).map_err(library_error)?,
            "prefactor": table.prefactor,
            "norm": table.norm(bg.eta),
            "dirac_residual": residual,
            "gordon_max_deviation": gc.identity_deviation(bg.eta),
            "weak_field": weak,
        }),
    )
}

fn limits(run: &mut Run) -> Result<(), RunError> {
    let cfg = run.cfg;
    require_rotation(cfg)?;
    let (p, bg) = (cfg.particle()?, cfg.background()?);
    let weak = run.weak_field(&bg)?;
    let flat = Background::new(1.0, cfg.omega).map_err(library_error)?;
    let mut levels = Vec::new();
    for qn in sweep(cfg) {
        let energy = energy_level(&qn, &p, &bg).map_err(library_error)?;
        let nr = nonrelativistic_energy(&qn, &p, &bg).map_err(library_error)?;
        let at_flat = energy_level(&qn, &p, &flat).map_err(library_error)?;
        let specialised = flat_energy_level(&qn, &p, cfg.omega).map_err(library_error)?;
        levels.push(json!({
            "n": qn.n,
            "l": qn.l,
            "s": qn.s.as_i32(),
            "energy": energy,
            "nonrelativistic_energy": nr,
            "nonrelativistic_remainder": energy - nr,
            "flat_energy": at_flat,
            "flat_specialization": specialised,
            "flat_exact_match": at_flat == specialised,
        }));
    }
    run.json(
        "limits.json",
        &json!({
            "cyclotron_frequency": cyclotron_frequency(&p, &bg),
            "weak_field": weak,
            "levels": levels,
        }),
    )
}
