//! Run configuration: JSON with comments, plus dotted-path overrides.
//!
//! Grammar: a single JSON object. Outside string literals, `//` starts a
//! comment running to the end of the line and `/* ... */` is a block
//! comment; both are replaced by whitespace before parsing. Unknown keys
//! are rejected. Every field has a default, so `{}` is a valid config
//! describing the rubidium operating point.
//!
//! Overrides have the form `a.b.c=value`. The value is parsed as JSON when
//! possible (numbers, booleans, arrays, quoted strings) and taken as a bare
//! string otherwise. Missing intermediate objects are created.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use photonfluid::bogoliubov::transition_momentum;
use photonfluid::cavity::CavityGeometry;
use photonfluid::fluidsim::{DispersionProbe, ObstacleFlow, RippleSource};
use photonfluid::medium::{reference_quantization_area, DrivenFluid, MediumSpec};
use photonfluid::InteractionKernel;

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CavityConfig {
    /// cm
    pub length: f64,
    pub reflectivity: f64,
    /// cm
    pub wavelength: f64,
    /// Longitudinal mode number; derived from the length when absent.
    pub mode_index: Option<u64>,
}

impl Default for CavityConfig {
    fn default() -> Self {
        Self {
            length: 2.0,
            reflectivity: 0.997,
            wavelength: 780e-7,
            mode_index: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MediumConfig {
    /// cm⁻³
    pub atom_density: f64,
    /// esu·cm
    pub dipole: f64,
    /// Δ = ω_atom − ω_laser in rad/s, positive for red detuning.
    pub detuning: f64,
    /// Kerr coefficient in cm³/erg; overrides the two-level formula.
    pub n2: Option<f64>,
}

impl Default for MediumConfig {
    fn default() -> Self {
        Self {
            atom_density: 1e12,
            dipole: 0.0,
            detuning: 2.0 * PI * 600e6,
            n2: Some(6e-6),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DriveConfig {
    /// Intracavity intensity, W/cm².
    pub intensity: f64,
    /// Transverse quantization area in cm²; by default the area giving
    /// N₀ = 8×10¹¹ at 40 W/cm².
    pub area: Option<f64>,
}

impl Default for DriveConfig {
    fn default() -> Self {
        Self {
            intensity: 40.0,
            area: None,
        }
    }
}

/// Pair-interaction kernel. Roton and tabulated momenta are in units of
/// the contact κ_c = 2m·v_s, strengths in units of V(0).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum KernelConfig {
    #[default]
    Contact,
    Roton {
        center: f64,
        width: f64,
        depth: f64,
    },
    Tabulated {
        points: Vec<(f64, f64)>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumConfig {
    /// Lower end of the momentum grid in units of κ_c.
    pub kappa_min: f64,
    pub kappa_max: f64,
    pub points: usize,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        Self {
            kappa_min: photonfluid::bogoliubov::DEFAULT_KAPPA_MIN,
            kappa_max: photonfluid::bogoliubov::DEFAULT_KAPPA_MAX,
            points: photonfluid::bogoliubov::DEFAULT_CURVE_POINTS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioKind {
    #[default]
    Dispersion,
    Ripple,
    Obstacle,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct SimulationConfig {
    pub scenario: ScenarioKind,
    pub dispersion: DispersionProbe,
    pub ripple: RippleSource,
    pub obstacle: ObstacleFlow,
    /// Write the final field of an obstacle run as a binary snapshot.
    pub write_snapshot: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    /// Flow speeds in units of v_s bracketing the vortex-shedding onset.
    pub low: f64,
    pub high: f64,
    pub max_iter: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            low: 0.2,
            high: 0.9,
            max_iter: 8,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub cavity: CavityConfig,
    pub medium: MediumConfig,
    pub drive: DriveConfig,
    pub kernel: KernelConfig,
    pub spectrum: SpectrumConfig,
    pub simulation: SimulationConfig,
    pub sweep: SweepConfig,
    /// Seeds the symmetry-breaking noise of obstacle runs.
    pub seed: u64,
}

/// Physical objects built from a validated config.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub geometry: CavityGeometry,
    pub medium: MediumSpec,
    pub fluid: DrivenFluid,
    pub kernel: InteractionKernel,
}

impl RunConfig {
    pub fn from_str_with_overrides(text: &str, overrides: &[String]) -> Result<Self, CliError> {
        let stripped = strip_comments(text)?;
        let mut value: Value = serde_json::from_str(&stripped)
            .map_err(|e| CliError::Validation(format!("config: {e}")))?;
        if !value.is_object() {
            return Err(CliError::Validation("config must be a JSON object".into()));
        }
        for o in overrides {
            apply_override(&mut value, o)?;
        }
        serde_json::from_value(value).map_err(|e| CliError::Validation(format!("config: {e}")))
    }

    pub fn load(path: &std::path::Path, overrides: &[String]) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
        Self::from_str_with_overrides(&text, overrides)
    }

    /// SHA-256 of the effective configuration, hex encoded.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(&canonical))
    }

    /// Builds cavity, medium, fluid and kernel, rejecting inconsistent input.
    pub fn resolve(&self) -> Result<Resolved, CliError> {
        let c = &self.cavity;
        let geometry =
            CavityGeometry::new(c.length, c.reflectivity, c.wavelength, c.mode_index)?;
        let medium = MediumSpec {
            atom_density: self.medium.atom_density,
            dipole: self.medium.dipole,
            detuning: self.medium.detuning,
            n2_direct: self.medium.n2,
        };
        medium.validate()?;
        let area = match self.drive.area {
            Some(a) => a,
            None => reference_quantization_area(&geometry),
        };
        let fluid = DrivenFluid::from_drive(&geometry, &medium, self.drive.intensity, area)?;
        let p = &fluid.params;
        let kernel = match &self.kernel {
            KernelConfig::Contact => InteractionKernel::contact(p.v0),
            KernelConfig::Roton {
                center,
                width,
                depth,
            } => {
                let kc = transition_momentum(p, &InteractionKernel::contact(p.v0))?;
                InteractionKernel::roton(p.v0, center * kc, width * kc, *depth)?
            }
            KernelConfig::Tabulated { points } => {
                let kc = transition_momentum(p, &InteractionKernel::contact(p.v0))?;
                InteractionKernel::tabulated(
                    points.iter().map(|&(k, v)| (k * kc, v * p.v0)).collect(),
                )?
            }
        };
        kernel.validate()?;
        let s = &self.spectrum;
        if !(s.kappa_min > 0.0 && s.kappa_min < s.kappa_max) || s.points < 3 {
            return Err(CliError::Validation(format!(
                "spectrum grid needs 0 < kappa_min < kappa_max and at least 3 points, got ({}, {}, {})",
                s.kappa_min, s.kappa_max, s.points
            )));
        }
        Ok(Resolved {
            geometry,
            medium,
            fluid,
            kernel,
        })
    }

    /// Obstacle scenario with the run seed applied.
    pub fn obstacle(&self) -> ObstacleFlow {
        let mut f = self.simulation.obstacle.clone();
        f.seed = self.seed;
        f
    }
}

/// Replaces `//` and `/* */` comments outside strings with spaces, keeping
/// line structure so parse errors point at the right line.
pub fn strip_comments(text: &str) -> Result<String, CliError> {
    let mut out = String::with_capacity(text.len());
    let mut chars = text.chars().peekable();
    let mut in_string = false;
    while let Some(c) = chars.next() {
        if in_string {
            out.push(c);
            match c {
                '\\' => {
                    if let Some(n) = chars.next() {
                        out.push(n);
                    }
                }
                '"' => in_string = false,
                _ => {}
            }
            continue;
        }
        match (c, chars.peek()) {
            ('"', _) => {
                in_string = true;
                out.push(c);
            }
            ('/', Some('/')) => {
                for n in chars.by_ref() {
                    if n == '\n' {
                        out.push('\n');
                        break;
                    }
                }
            }
            ('/', Some('*')) => {
                chars.next();
                let mut closed = false;
                let mut prev = '\0';
                for n in chars.by_ref() {
                    if n == '\n' {
                        out.push('\n');
                    }
                    if prev == '*' && n == '/' {
                        closed = true;
                        break;
                    }
                    prev = n;
                }
                if !closed {
                    return Err(CliError::Validation("unterminated block comment".into()));
                }
                out.push(' ');
            }
            _ => out.push(c),
        }
    }
    Ok(out)
}

fn apply_override(root: &mut Value, spec: &str) -> Result<(), CliError> {
    let (path, raw) = spec
        .split_once('=')
        .ok_or_else(|| CliError::Validation(format!("override '{spec}' is not key=value")))?;
    let keys: Vec<&str> = path.trim().split('.').collect();
    if keys.iter().any(|k| k.is_empty()) {
        return Err(CliError::Validation(format!("bad override path '{path}'")));
    }
    let value = serde_json::from_str(raw.trim()).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut node = root;
    for key in &keys[..keys.len() - 1] {
        let obj = node
            .as_object_mut()
            .ok_or_else(|| CliError::Validation(format!("override '{path}' descends into a non-object")))?;
        node = obj
            .entry(key.to_string())
            .or_insert_with(|| Value::Object(Default::default()));
    }
    let obj = node
        .as_object_mut()
        .ok_or_else(|| CliError::Validation(format!("override '{path}' descends into a non-object")))?;
    obj.insert(keys[keys.len() - 1].to_string(), value);
    Ok(())
}
