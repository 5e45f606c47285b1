//! Command implementations behind the `photonfluid` binary.
//!
//! Each command validates the whole configuration and computes every output
//! in memory before anything touches the output directory, so a failed run
//! leaves no partial results behind. All CSV files start with a comment line
//! `# photonfluid <version> config-sha256=<hex>` followed by a header row.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use photonfluid::bogoliubov::{
    collective_length, depletion_fraction, landau_critical_velocity, sound_speed_from_curve,
    transition_momentum, BogoliubovError,
};
use photonfluid::cavity::CavityError;
use photonfluid::fluidsim::{
    critical_velocity_sweep, measure_dispersion, run_obstacle_flow, run_ripple, DispersionSample,
    ObstacleRun, RippleMeasurement, Scales, SimError, SweepResult,
};
use photonfluid::medium::{implied_dipole, KerrSource, MediumError};
use photonfluid::units::convert_n2_esu_to_practical;
use photonfluid::DispersionCurve;

pub mod config;

pub use config::{RunConfig, ScenarioKind};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum CliError {
    #[error("validation error: {0}")]
    Validation(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<CavityError> for CliError {
    fn from(e: CavityError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<MediumError> for CliError {
    fn from(e: MediumError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<BogoliubovError> for CliError {
    fn from(e: BogoliubovError) -> Self {
        match e {
            BogoliubovError::UnstableMode { .. }
            | BogoliubovError::DegenerateMode(_)
            | BogoliubovError::TransitionNoConvergence(_)
            | BogoliubovError::QuadratureNonConvergence(_) => CliError::Numerical(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::NonFinite { .. } | SimError::UnresolvedFrequency { .. } => {
                CliError::Numerical(e.to_string())
            }
            SimError::Io(io) => CliError::Io(io),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

/// A named file produced by a command.
#[derive(Debug, Clone)]
pub struct Artifact {
    pub name: String,
    pub contents: Vec<u8>,
}

#[derive(Debug, Clone)]
pub struct CommandOutput {
    pub artifacts: Vec<Artifact>,
    /// Human-readable digest printed to stdout.
    pub summary: String,
}

impl CommandOutput {
    /// Creates `dir` if needed and writes every artifact into it.
    pub fn write_to(&self, dir: &Path) -> Result<(), CliError> {
        fs::create_dir_all(dir)?;
        for a in &self.artifacts {
            fs::write(dir.join(&a.name), &a.contents)?;
        }
        Ok(())
    }
}

fn header(cfg: &RunConfig) -> String {
    format!("# photonfluid {VERSION} config-sha256={}\n", cfg.hash())
}

/// Builds a CSV with the standard comment line and header.
fn csv(cfg: &RunConfig, columns: &str, rows: impl IntoIterator<Item = String>) -> Vec<u8> {
    let mut s = header(cfg);
    s.push_str(columns);
    s.push('\n');
    for r in rows {
        s.push_str(&r);
        s.push('\n');
    }
    s.into_bytes()
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

// ---------------------------------------------------------------- params

#[derive(Debug, Clone, Serialize)]
pub struct ParamsReport {
    pub mode_index: u64,
    pub omega: f64,
    pub finesse: f64,
    pub ring_down_time: f64,
    pub n2_esu: f64,
    pub n2_practical: f64,
    pub n2_from_formula: bool,
    pub implied_dipole: f64,
    pub e0_sq: f64,
    pub index_shift: f64,
    pub collision_time: f64,
    pub collisions_per_ringdown: f64,
    pub fluid_regime: bool,
    pub area: f64,
    pub effective_mass: f64,
    pub condensate_number: f64,
    pub interaction_strength: f64,
    pub chemical_potential: f64,
    pub sound_speed: f64,
    pub sound_speed_optical: f64,
    pub healing_length: f64,
    pub transition_momentum: f64,
    pub collective_length: f64,
    pub depletion: f64,
}

pub fn cmd_params(cfg: &RunConfig) -> Result<ParamsReport, CliError> {
    let r = cfg.resolve()?;
    let f = &r.fluid;
    let p = &f.params;
    let scales = Scales::from_params(p);
    Ok(ParamsReport {
        mode_index: r.geometry.mode_index,
        omega: f.omega,
        finesse: r.geometry.finesse(),
        ring_down_time: f.timescales.tau_cav,
        n2_esu: f.n2.value,
        n2_practical: convert_n2_esu_to_practical(f.n2.value),
        n2_from_formula: f.n2.source == KerrSource::TwoLevelFormula,
        implied_dipole: implied_dipole(f.n2.value, r.medium.atom_density, r.medium.detuning),
        e0_sq: f.e0_sq,
        index_shift: f.index_shift,
        collision_time: f.timescales.tau_coll,
        collisions_per_ringdown: f.timescales.collisions_per_ringdown,
        fluid_regime: f.is_fluid(photonfluid::medium::DEFAULT_MACROSCOPIC_THRESHOLD),
        area: f.area,
        effective_mass: p.m,
        condensate_number: p.n0,
        interaction_strength: p.v0,
        chemical_potential: p.mu_chem,
        sound_speed: p.v_s,
        sound_speed_optical: photonfluid::medium::sound_speed_from_index_shift(f.index_shift),
        healing_length: scales.length,
        transition_momentum: transition_momentum(p, &r.kernel)?,
        collective_length: collective_length(p, &r.kernel)?,
        depletion: depletion_fraction(p, &r.kernel, f.area)?,
    })
}

fn params_output(cfg: &RunConfig, rep: &ParamsReport) -> CommandOutput {
    let flag = |b: bool| if b { 1.0 } else { 0.0 };
    let rows: Vec<(&str, f64, &str)> = vec![
        ("mode_index", rep.mode_index as f64, ""),
        ("omega", rep.omega, "rad/s"),
        ("finesse", rep.finesse, ""),
        ("ring_down_time", rep.ring_down_time, "s"),
        ("n2_esu", rep.n2_esu, "cm^3/erg"),
        ("n2_practical", rep.n2_practical, "cm^2/W"),
        ("n2_from_formula", flag(rep.n2_from_formula), "bool"),
        ("implied_dipole", rep.implied_dipole, "esu*cm"),
        ("e0_sq", rep.e0_sq, "erg/cm^3"),
        ("index_shift", rep.index_shift, ""),
        ("collision_time", rep.collision_time, "s"),
        ("collisions_per_ringdown", rep.collisions_per_ringdown, ""),
        ("fluid_regime", flag(rep.fluid_regime), "bool"),
        ("area", rep.area, "cm^2"),
        ("effective_mass", rep.effective_mass, "g"),
        ("condensate_number", rep.condensate_number, ""),
        ("interaction_strength", rep.interaction_strength, "erg"),
        ("chemical_potential", rep.chemical_potential, "erg"),
        ("sound_speed", rep.sound_speed, "cm/s"),
        ("sound_speed_optical", rep.sound_speed_optical, "cm/s"),
        ("healing_length", rep.healing_length, "cm"),
        ("transition_momentum", rep.transition_momentum, "g*cm/s"),
        ("collective_length", rep.collective_length, "cm"),
        ("depletion", rep.depletion, ""),
    ];
    let mut summary = String::new();
    for (k, v, u) in &rows {
        let _ = writeln!(summary, "{k:>24} = {v:.6e} {u}");
    }
    let mut json = serde_json::to_vec_pretty(rep).expect("report serializes");
    json.push(b'\n');
    CommandOutput {
        artifacts: vec![
            Artifact {
                name: "params.csv".into(),
                contents: csv(
                    cfg,
                    "quantity,value,unit",
                    rows.iter().map(|(k, v, u)| format!("{k},{},{u}", num(*v))),
                ),
            },
            Artifact {
                name: "params.json".into(),
                contents: json,
            },
        ],
        summary,
    }
}

// -------------------------------------------------------------- spectrum

#[derive(Debug, Clone)]
pub struct SpectrumReport {
    pub curve: DispersionCurve,
    /// √(N₀V(0)/m)
    pub sound_speed: f64,
    /// lim ω̃/κ from the sampled curve.
    pub sound_speed_curve: f64,
    pub transition_momentum: f64,
    pub collective_length: f64,
    pub landau_velocity: f64,
}

pub fn cmd_spectrum(cfg: &RunConfig) -> Result<SpectrumReport, CliError> {
    let r = cfg.resolve()?;
    let p = &r.fluid.params;
    let s = &cfg.spectrum;
    let curve = DispersionCurve::sample_relative(p, &r.kernel, s.kappa_min, s.kappa_max, s.points)?;
    Ok(SpectrumReport {
        sound_speed: p.v_s,
        sound_speed_curve: sound_speed_from_curve(&curve)?,
        transition_momentum: transition_momentum(p, &r.kernel)?,
        collective_length: collective_length(p, &r.kernel)?,
        landau_velocity: landau_critical_velocity(&curve)?,
        curve,
    })
}

fn spectrum_output(cfg: &RunConfig, rep: &SpectrumReport) -> Result<CommandOutput, CliError> {
    let mut curve_csv = Vec::new();
    let comment = format!("photonfluid {VERSION} config-sha256={}", cfg.hash());
    rep.curve.write_csv(&mut curve_csv, Some(&comment))?;
    let rows = [
        ("sound_speed", rep.sound_speed, "cm/s"),
        ("sound_speed_curve", rep.sound_speed_curve, "cm/s"),
        ("transition_momentum", rep.transition_momentum, "g*cm/s"),
        ("collective_length", rep.collective_length, "cm"),
        ("landau_velocity", rep.landau_velocity, "cm/s"),
    ];
    let mut summary = String::new();
    for (k, v, u) in &rows {
        let _ = writeln!(summary, "{k:>20} = {v:.6e} {u}");
    }
    let _ = writeln!(
        summary,
        "{:>20} = {:.6}",
        "v_c / v_s",
        rep.landau_velocity / rep.sound_speed
    );
    Ok(CommandOutput {
        artifacts: vec![
            Artifact {
                name: "spectrum.csv".into(),
                contents: curve_csv,
            },
            Artifact {
                name: "spectrum_summary.csv".into(),
                contents: csv(
                    cfg,
                    "quantity,value,unit",
                    rows.iter().map(|(k, v, u)| format!("{k},{},{u}", num(*v))),
                ),
            },
        ],
        summary,
    })
}

// -------------------------------------------------------------- simulate

#[derive(Debug, Clone)]
pub enum SimulationReport {
    Dispersion(Vec<DispersionSample>),
    Ripple(RippleMeasurement),
    Obstacle(ObstacleRun),
}

/// Runs the configured scenario. Every scenario also resolves the physical
/// chain so the healing-length scales are available for unit conversion.
pub fn cmd_simulate(cfg: &RunConfig) -> Result<(SimulationReport, Scales), CliError> {
    let r = cfg.resolve()?;
    let scales = Scales::from_params(&r.fluid.params);
    let sim = &cfg.simulation;
    let rep = match sim.scenario {
        ScenarioKind::Dispersion => SimulationReport::Dispersion(measure_dispersion(&sim.dispersion)?),
        ScenarioKind::Ripple => SimulationReport::Ripple(run_ripple(&sim.ripple)?),
        ScenarioKind::Obstacle => SimulationReport::Obstacle(run_obstacle_flow(&cfg.obstacle())?),
    };
    Ok((rep, scales))
}

fn simulate_output(
    cfg: &RunConfig,
    rep: &SimulationReport,
    scales: &Scales,
) -> Result<CommandOutput, CliError> {
    let mut artifacts = Vec::new();
    let mut summary = String::new();
    match rep {
        SimulationReport::Dispersion(samples) => {
            artifacts.push(Artifact {
                name: "dispersion.csv".into(),
                contents: csv(
                    cfg,
                    "k,omega_measured,omega_predicted,rel_error,kappa_phys,omega_phys",
                    samples.iter().map(|s| {
                        format!(
                            "{},{},{},{},{},{}",
                            num(s.k),
                            num(s.measured),
                            num(s.predicted),
                            num(s.rel_error),
                            num(scales.wavenumber_to_momentum(s.k)),
                            num(s.measured / scales.time),
                        )
                    }),
                ),
            });
            let max = samples.iter().map(|s| s.rel_error).fold(0.0, f64::max);
            for s in samples {
                let _ = writeln!(
                    summary,
                    "k = {:>8.4}  measured {:.8}  predicted {:.8}  rel err {:.2e}",
                    s.k, s.measured, s.predicted, s.rel_error
                );
            }
            let _ = writeln!(summary, "max relative error {max:.3e}");
        }
        SimulationReport::Ripple(m) => {
            artifacts.push(Artifact {
                name: "ripple_profile.csv".into(),
                contents: csv(
                    cfg,
                    "r,phase,amplitude",
                    m.profile
                        .iter()
                        .map(|(r, p, a)| format!("{},{},{}", num(*r), num(*p), num(*a))),
                ),
            });
            let rows = [
                ("omega", m.omega),
                ("wavelength", m.wavelength),
                ("predicted", m.predicted),
                ("rel_error", m.rel_error),
                ("fit_r_min", m.fit_range.0),
                ("fit_r_max", m.fit_range.1),
                ("wavelength_cm", scales.length_to_physical(m.wavelength)),
                ("drive_frequency_hz", m.omega / scales.time / (2.0 * std::f64::consts::PI)),
            ];
            artifacts.push(Artifact {
                name: "ripple.csv".into(),
                contents: csv(
                    cfg,
                    "quantity,value",
                    rows.iter().map(|(k, v)| format!("{k},{}", num(*v))),
                ),
            });
            let _ = writeln!(
                summary,
                "Omega = {}: wavelength {:.4} (2pi/Omega = {:.4}, rel err {:.2e}), {:.4e} cm",
                m.omega,
                m.wavelength,
                m.predicted,
                m.rel_error,
                scales.length_to_physical(m.wavelength)
            );
        }
        SimulationReport::Obstacle(run) => {
            artifacts.push(Artifact {
                name: "vortices.csv".into(),
                contents: csv(
                    cfg,
                    "time,x,y,charge",
                    run.vortices.iter().map(|v| {
                        format!("{},{},{},{}", num(v.time), num(v.x), num(v.y), v.charge)
                    }),
                ),
            });
            artifacts.push(Artifact {
                name: "drag.csv".into(),
                contents: csv(
                    cfg,
                    "time,fx,fy",
                    run.drag
                        .iter()
                        .map(|d| format!("{},{},{}", num(d.time), num(d.fx), num(d.fy))),
                ),
            });
            artifacts.push(Artifact {
                name: "scans.csv".into(),
                contents: csv(
                    cfg,
                    "time,count,net_charge",
                    run.scans
                        .iter()
                        .map(|s| format!("{},{},{}", num(s.time), s.count, s.net_charge)),
                ),
            });
            if cfg.simulation.write_snapshot {
                if let Some(f) = &run.final_field {
                    let mut buf = Vec::new();
                    f.write_snapshot(&mut buf)?;
                    artifacts.push(Artifact {
                        name: "final.phfl".into(),
                        contents: buf,
                    });
                }
            }
            let _ = writeln!(
                summary,
                "flow speed {:.4} v_s ({:.4e} cm/s): {} detections, max neutral pairs {}, unit charges {}",
                run.flow_speed,
                scales.velocity_to_physical(run.flow_speed),
                run.vortices.len(),
                run.max_neutral_pairs(),
                run.all_unit_charges()
            );
        }
    }
    Ok(CommandOutput { artifacts, summary })
}

// ----------------------------------------------------------------- sweep

pub fn cmd_sweep(cfg: &RunConfig) -> Result<(SweepResult, Scales), CliError> {
    let r = cfg.resolve()?;
    let scales = Scales::from_params(&r.fluid.params);
    let s = &cfg.sweep;
    let res = critical_velocity_sweep(&cfg.obstacle(), s.low, s.high, s.max_iter)?;
    Ok((res, scales))
}

fn sweep_output(cfg: &RunConfig, res: &SweepResult, scales: &Scales) -> CommandOutput {
    let runs = csv(
        cfg,
        "flow_speed,flow_speed_cm_s,shed",
        res.runs.iter().map(|(v, shed)| {
            format!("{},{},{}", num(*v), num(scales.velocity_to_physical(*v)), u8::from(*shed))
        }),
    );
    let rows = [
        ("below", res.below),
        ("above", res.above),
        ("critical_velocity", res.critical_velocity),
        ("critical_velocity_cm_s", scales.velocity_to_physical(res.critical_velocity)),
    ];
    let summary = format!(
        "onset between {:.4} and {:.4} v_s; v_c = {:.4} v_s = {:.4e} cm/s ({} runs)\n",
        res.below,
        res.above,
        res.critical_velocity,
        scales.velocity_to_physical(res.critical_velocity),
        res.runs.len()
    );
    CommandOutput {
        artifacts: vec![
            Artifact {
                name: "sweep.csv".into(),
                contents: runs,
            },
            Artifact {
                name: "sweep_summary.csv".into(),
                contents: csv(
                    cfg,
                    "quantity,value",
                    rows.iter().map(|(k, v)| format!("{k},{}", num(*v))),
                ),
            },
        ],
        summary,
    }
}

// ------------------------------------------------------------- dispatch

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Params,
    Spectrum,
    Simulate,
    Sweep,
}

/// Runs a command to completion in memory.
pub fn run(cmd: Command, cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    match cmd {
        Command::Params => Ok(params_output(cfg, &cmd_params(cfg)?)),
        Command::Spectrum => spectrum_output(cfg, &cmd_spectrum(cfg)?),
        Command::Simulate => {
            let (rep, scales) = cmd_simulate(cfg)?;
            simulate_output(cfg, &rep, &scales)
        }
        Command::Sweep => {
            let (res, scales) = cmd_sweep(cfg)?;
            Ok(sweep_output(cfg, &res, &scales))
        }
    }
}

/// Loads the config, runs the command and writes its outputs; nothing is
/// written unless the command succeeds.
pub fn execute(
    cmd: Command,
    config: &Path,
    overrides: &[String],
    out: &Path,
) -> Result<CommandOutput, CliError> {
    if out.exists() && !out.is_dir() {
        return Err(CliError::Validation(format!(
            "output path {} exists and is not a directory",
            out.display()
        )));
    }
    let cfg = RunConfig::load(config, overrides)?;
    log::info!("config sha256 {}", cfg.hash());
    let output = run(cmd, &cfg)?;
    output.write_to(out)?;
    Ok(output)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Validation(String::new()).exit_code(), 2);
        assert_eq!(CliError::Numerical(String::new()).exit_code(), 3);
        let e: CliError = SimError::NonFinite { time: 1.0 }.into();
        assert_eq!(e.exit_code(), 3);
        let e: CliError = SimError::NonlinearSource(1.0).into();
        assert_eq!(e.exit_code(), 2);
        let e: CliError = BogoliubovError::UnstableMode {
            kappa: 1.0,
            omega_sq: -1.0,
        }
        .into();
        assert_eq!(e.exit_code(), 3);
    }

    #[test]
    fn csv_starts_with_hash_comment() {
        let cfg = RunConfig::default();
        let out = run(Command::Params, &cfg).unwrap();
        let text = String::from_utf8(out.artifacts[0].contents.clone()).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            format!("# photonfluid {VERSION} config-sha256={}", cfg.hash())
        );
        assert_eq!(lines.next().unwrap(), "quantity,value,unit");
    }
}
