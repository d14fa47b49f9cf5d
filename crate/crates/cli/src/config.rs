//! Scenario configuration files.
//!
//! A config is either a single scenario object or
//! `{"schema_version": 1, "scenarios": [...]}`. Relative file paths are
//! resolved against the directory of the config file.

use std::path::{Path, PathBuf};

use canonlab::builders::{DiracReduction, JacobiSpec, JacobiSystem};
use canonlab::timedomain::{DiscreteDt, Orientation};
use canonlab::{BoundaryControl, Bump, HamiltonianField, SpaceGrid, Sym2, TimeGrid};
use num_complex::Complex;
use serde::Deserialize;

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// One coefficient profile on the space grid.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Coef {
    Constant(f64),
    Samples(Vec<f64>),
    File { file: PathBuf },
    /// `q_zero`, `q_const:c`, `rho_quad` or `dirac_free`.
    Preset(String),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum JacobiInput {
    Spec(JacobiSpec),
    File { file: PathBuf },
    /// `jacobi_quarter_turns` or `jacobi_quarter_turns:<cells>`.
    Preset(String),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum HInput {
    /// `[h11, h12, h22]` per node.
    Samples(Vec<[f64; 3]>),
    File { file: PathBuf },
    /// `H_half_identity`.
    Preset(String),
}

#[derive(Debug, Clone, Copy, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OrientationSpec {
    #[default]
    Standard,
    Reversed,
}

impl From<OrientationSpec> for Orientation {
    fn from(o: OrientationSpec) -> Self {
        match o {
            OrientationSpec::Standard => Orientation::Standard,
            OrientationSpec::Reversed => Orientation::Reversed,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum DtSpec {
    #[default]
    Sum,
    Difference,
}

impl From<DtSpec> for DiscreteDt {
    fn from(d: DtSpec) -> Self {
        match d {
            DtSpec::Sum => DiscreteDt::Sum,
            DtSpec::Difference => DiscreteDt::Difference,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SystemSpec {
    WavePotential {
        q: Coef,
    },
    WaveDensity {
        rho: Coef,
    },
    Dirac {
        p: Coef,
        q: Coef,
    },
    DiracType {
        d1: Coef,
        d2: Coef,
        psi: Coef,
    },
    JacobiContinuous {
        jacobi: JacobiInput,
        #[serde(default)]
        n: Option<usize>,
    },
    JacobiDiscrete {
        jacobi: JacobiInput,
        #[serde(default)]
        n: Option<usize>,
        #[serde(default)]
        dt_mode: DtSpec,
    },
    CanonicalI {
        h: HInput,
        #[serde(default)]
        orientation: OrientationSpec,
    },
}

impl SystemSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            SystemSpec::WavePotential { .. } => "wave-potential",
            SystemSpec::WaveDensity { .. } => "wave-density",
            SystemSpec::Dirac { .. } => "dirac",
            SystemSpec::DiracType { .. } => "dirac-type",
            SystemSpec::JacobiContinuous { .. } => "jacobi-continuous",
            SystemSpec::JacobiDiscrete { .. } => "jacobi-discrete",
            SystemSpec::CanonicalI { .. } => "canonical-i",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub x_max: f64,
    #[serde(default)]
    pub h: Option<f64>,
    #[serde(default)]
    pub n_points: Option<usize>,
    pub t_max: f64,
    /// Courant number of the time grid.
    #[serde(default = "one")]
    pub cfl: f64,
    /// Store every k-th time level in `simulate`.
    #[serde(default)]
    pub record_every: Option<usize>,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ControlSpec {
    /// Unnormalized `C_0^inf` bump.
    Bump { center: f64, width: f64 },
    /// Bump with unit integral.
    SmoothedDelta { center: f64, width: f64 },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquivalenceSpec {
    /// Coefficients of the canonical side; defaults to the scenario system.
    #[serde(default)]
    pub canonical_side: Option<SystemSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DebrangesSpec {
    /// Extent of `E_x`; defaults to the end of the Hamiltonian.
    #[serde(default)]
    pub x: Option<f64>,
    #[serde(default = "lambda_min")]
    pub lambda_min: f64,
    #[serde(default = "lambda_max")]
    pub lambda_max: f64,
    #[serde(default = "lambda_n")]
    pub lambda_n: usize,
    #[serde(default = "gram_points")]
    pub gram_points: usize,
    #[serde(default)]
    pub normalize: bool,
    #[serde(default = "c0")]
    pub c0: [f64; 2],
}

fn lambda_min() -> f64 {
    -10.0
}
fn lambda_max() -> f64 {
    10.0
}
fn lambda_n() -> usize {
    201
}
fn gram_points() -> usize {
    10
}
fn c0() -> [f64; 2] {
    [1.0, 0.0]
}

impl Default for DebrangesSpec {
    fn default() -> Self {
        Self {
            x: None,
            lambda_min: lambda_min(),
            lambda_max: lambda_max(),
            lambda_n: lambda_n(),
            gram_points: gram_points(),
            normalize: false,
            c0: c0(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BcSpec {
    /// Bump centers every `stride` time steps.
    #[serde(default = "stride")]
    pub stride: usize,
    /// Relative singular value floor of the controllability verdict.
    #[serde(default = "floor")]
    pub floor: f64,
    /// Required single-control defect.
    #[serde(default = "min_defect")]
    pub min_defect: f64,
    /// Grid doublings for the sigma_min trend.
    #[serde(default)]
    pub refinements: usize,
    #[serde(default = "yes")]
    pub wavefront: bool,
    /// Allowed relative deviation of the wavefront profile.
    #[serde(default = "wavefront_tol")]
    pub wavefront_tol: f64,
}

fn stride() -> usize {
    6
}
fn floor() -> f64 {
    canonlab::bcmethod::SIGMA_FLOOR
}
fn min_defect() -> f64 {
    0.3
}
fn yes() -> bool {
    true
}
fn wavefront_tol() -> f64 {
    0.05
}

impl Default for BcSpec {
    fn default() -> Self {
        Self {
            stride: stride(),
            floor: floor(),
            min_defect: min_defect(),
            refinements: 0,
            wavefront: true,
            wavefront_tol: wavefront_tol(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub name: Option<String>,
    pub system: SystemSpec,
    pub grid: GridSpec,
    #[serde(default)]
    pub control: Option<ControlSpec>,
    #[serde(default = "tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub equivalence: Option<EquivalenceSpec>,
    #[serde(default)]
    pub debranges: Option<DebrangesSpec>,
    #[serde(default)]
    pub bcmethod: Option<BcSpec>,
}

fn tolerance() -> f64 {
    1e-3
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    schema_version: u32,
    scenarios: Vec<ScenarioConfig>,
}

/// A validated scenario with its resolved base directory.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub cfg: ScenarioConfig,
    pub base: PathBuf,
}

pub fn load(path: &Path) -> Result<Vec<Scenario>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let parse_err = |e: serde_json::Error| CliError::Input(format!("{}: {e}", path.display()));
    let scenarios = if value.get("scenarios").is_some() {
        let f: ConfigFile = serde_json::from_value(value).map_err(parse_err)?;
        if f.schema_version != SCHEMA_VERSION {
            return Err(CliError::Input(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                f.schema_version
            )));
        }
        f.scenarios
    } else {
        vec![serde_json::from_value(value).map_err(parse_err)?]
    };
    if scenarios.is_empty() {
        return Err(CliError::Input("config has no scenarios".into()));
    }
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let out: Vec<Scenario> = scenarios
        .into_iter()
        .enumerate()
        .map(|(i, cfg)| Scenario {
            name: cfg.name.clone().unwrap_or_else(|| format!("scenario{i}")),
            cfg,
            base: base.clone(),
        })
        .collect();
    for s in &out {
        s.validate()?;
    }
    let mut names: Vec<&str> = out.iter().map(|s| s.name.as_str()).collect();
    names.sort_unstable();
    if names.windows(2).any(|w| w[0] == w[1]) {
        return Err(CliError::Input("scenario names must be unique".into()));
    }
    Ok(out)
}

fn read_numbers(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    if text.trim_start().starts_with('[') {
        return serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())));
    }
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|e| CliError::Input(format!("{}: {s:?}: {e}", path.display())))
        })
        .collect()
}

impl Scenario {
    fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base.join(p)
        }
    }

    fn validate(&self) -> Result<(), CliError> {
        let c = &self.cfg;
        if !(c.tolerance > 0.0) {
            return Err(CliError::Input(format!("{}: tolerance must be positive", self.name)));
        }
        if self.name.contains(['/', '\\']) || self.name.is_empty() {
            return Err(CliError::Input(format!("invalid scenario name {:?}", self.name)));
        }
        let g = &c.grid;
        if !(g.x_max > 0.0) || !(g.t_max > 0.0) || !(g.cfl > 0.0) {
            return Err(CliError::Input(format!("{}: x_max, t_max and cfl must be positive", self.name)));
        }
        // every referenced file must exist
        let mut files = Vec::new();
        collect_files(&c.system, &mut files);
        if let Some(side) = c.equivalence.as_ref().and_then(|e| e.canonical_side.as_ref()) {
            collect_files(side, &mut files);
        }
        for f in files {
            let p = self.resolve(&f);
            if !p.is_file() {
                return Err(CliError::Input(format!("{}: missing file {}", self.name, p.display())));
            }
        }
        Ok(())
    }

    pub fn space(&self) -> Result<SpaceGrid<f64>, CliError> {
        let g = &self.cfg.grid;
        Ok(match (g.h, g.n_points) {
            (Some(h), None) => SpaceGrid::with_spacing(g.x_max, h)?,
            (None, Some(n)) => SpaceGrid::new(g.x_max, n)?,
            (None, None) => SpaceGrid::new(g.x_max, 401)?,
            (Some(_), Some(_)) => return Err(CliError::Input("give either grid.h or grid.n_points".into())),
        })
    }

    /// Time grid at the configured Courant number for `speed`.
    pub fn time(&self, space: &SpaceGrid<f64>, speed: f64) -> Result<TimeGrid<f64>, CliError> {
        let g = &self.cfg.grid;
        Ok(TimeGrid::for_speed(g.t_max, space.h(), speed, g.cfl)?)
    }

    pub fn coef(&self, c: &Coef, space: &SpaceGrid<f64>) -> Result<Vec<f64>, CliError> {
        let n = space.len();
        let v = match c {
            Coef::Constant(v) => vec![*v; n],
            Coef::Samples(s) => s.clone(),
            Coef::File { file } => read_numbers(&self.resolve(file))?,
            Coef::Preset(p) => match p.as_str() {
                "q_zero" | "dirac_free" => vec![0.0; n],
                "rho_quad" => space.sample(|x| (1.0 + x) * (1.0 + x)),
                other => match other.strip_prefix("q_const:") {
                    Some(c) => {
                        let c: f64 = c
                            .parse()
                            .map_err(|_| CliError::Input(format!("bad constant in preset {other:?}")))?;
                        vec![c; n]
                    }
                    None => return Err(CliError::Input(format!("unknown coefficient preset {other:?}"))),
                },
            },
        };
        if v.len() != n {
            return Err(CliError::Input(format!("coefficient has {} samples, grid has {n}", v.len())));
        }
        Ok(v)
    }

    pub fn jacobi(&self, j: &JacobiInput) -> Result<JacobiSystem<f64>, CliError> {
        let spec = match j {
            JacobiInput::Spec(s) => s.clone(),
            JacobiInput::File { file } => {
                let p = self.resolve(file);
                let text = std::fs::read_to_string(&p).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
                serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?
            }
            JacobiInput::Preset(p) => {
                let cells = match p.strip_prefix("jacobi_quarter_turns") {
                    Some("") => 8,
                    Some(rest) => rest
                        .strip_prefix(':')
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| CliError::Input(format!("bad preset {p:?}")))?,
                    None => return Err(CliError::Input(format!("unknown Jacobi preset {p:?}"))),
                };
                return Ok(JacobiSystem::quarter_turns(cells, 1.0)?);
            }
        };
        Ok(spec.build()?)
    }

    pub fn hamiltonian_input(&self, h: &HInput, space: &SpaceGrid<f64>) -> Result<HamiltonianField<f64>, CliError> {
        let samples: Vec<[f64; 3]> = match h {
            HInput::Samples(s) => s.clone(),
            HInput::File { file } => {
                let v = read_numbers(&self.resolve(file))?;
                if v.len() % 3 != 0 {
                    return Err(CliError::Input("Hamiltonian file needs h11 h12 h22 triples".into()));
                }
                v.chunks(3).map(|c| [c[0], c[1], c[2]]).collect()
            }
            HInput::Preset(p) if p == "H_half_identity" => vec![[0.5, 0.0, 0.5]; space.len()],
            HInput::Preset(p) => return Err(CliError::Input(format!("unknown Hamiltonian preset {p:?}"))),
        };
        if samples.len() != space.len() {
            return Err(CliError::Input(format!(
                "Hamiltonian has {} samples, grid has {}",
                samples.len(),
                space.len()
            )));
        }
        let s = samples.iter().map(|h| Sym2::new(h[0], h[1], h[2])).collect();
        Ok(HamiltonianField::sampled(*space, s, None)?)
    }

    pub fn reduction(&self, d1: &Coef, d2: &Coef, psi: &Coef, space: &SpaceGrid<f64>) -> Result<DiracReduction<f64>, CliError> {
        Ok(DiracReduction::from_parts(
            *space,
            self.coef(d1, space)?,
            self.coef(d2, space)?,
            self.coef(psi, space)?,
        )?)
    }

    pub fn control(&self, time: &TimeGrid<f64>) -> Result<BoundaryControl<f64>, CliError> {
        let t = time.t_max();
        let spec = self.cfg.control.clone().unwrap_or(ControlSpec::Bump {
            center: 0.5 * t,
            width: 0.25 * t,
        });
        Ok(match spec {
            ControlSpec::Bump { center, width } => {
                let b = Bump::new(center, width);
                BoundaryControl::from_fn(*time, b.support(), |t| Complex::new(b.value(t), 0.0))?
            }
            ControlSpec::SmoothedDelta { center, width } => canonlab::smoothed_delta(center, width, time)?,
        })
    }
}

fn collect_files(s: &SystemSpec, out: &mut Vec<PathBuf>) {
    let mut coef = |c: &Coef| {
        if let Coef::File { file } = c {
            out.push(file.clone());
        }
    };
    match s {
        SystemSpec::WavePotential { q } => coef(q),
        SystemSpec::WaveDensity { rho } => coef(rho),
        SystemSpec::Dirac { p, q } => {
            coef(p);
            coef(q);
        }
        SystemSpec::DiracType { d1, d2, psi } => {
            coef(d1);
            coef(d2);
            coef(psi);
        }
        SystemSpec::JacobiContinuous { jacobi, .. } | SystemSpec::JacobiDiscrete { jacobi, .. } => {
            if let JacobiInput::File { file } = jacobi {
                out.push(file.clone());
            }
        }
        SystemSpec::CanonicalI { h, .. } => {
            if let HInput::File { file } = h {
                out.push(file.clone());
            }
        }
    }
}
