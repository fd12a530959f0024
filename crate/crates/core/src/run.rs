//! Batch runs: configuration, presets and artifact output.

use std::collections::BTreeSet;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analysis::{self, BandGap, ComparisonReport, FreqInterval, DEFAULT_DROP_FRACTION};
use crate::bloch::{precess, write_trajectory_csv, StokesVector};
use crate::coupled_mode::{cm_spectrum, CmProfile};
use crate::diagnostics::rap_margin;
use crate::error::{DbrError, Result};
use crate::geometry::{cell_average_index, cell_profiles, write_profile_csv, DbrSpec, Polarization};
use crate::io::{fmt_angle, write_json};
use crate::tmm::{self, AngleMap, SpectralGrid, Spectrum};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub f_min_thz: f64,
    pub f_max_thz: f64,
    pub points: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            f_min_thz: tmm::DEFAULT_F_MIN_THZ,
            f_max_thz: tmm::DEFAULT_F_MAX_THZ,
            points: tmm::DEFAULT_POINTS,
        }
    }
}

impl FromStr for GridConfig {
    type Err = DbrError;

    /// `f_min:f_max:points`, e.g. `100:800:2000`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || DbrError::InvalidConfig {
            field: "grid".into(),
            reason: format!("expected f_min:f_max:points, got `{s}`"),
        };
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        Ok(GridConfig {
            f_min_thz: parts[0].trim().parse().map_err(|_| bad())?,
            f_max_thz: parts[1].trim().parse().map_err(|_| bad())?,
            points: parts[2].trim().parse().map_err(|_| bad())?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AoiConfig {
    Single(f64),
    Sweep { min: f64, max: f64, steps: usize },
}

impl AoiConfig {
    pub fn angles(&self) -> Vec<f64> {
        match *self {
            AoiConfig::Single(a) => vec![a],
            AoiConfig::Sweep { min, steps: 0 | 1, .. } => vec![min],
            AoiConfig::Sweep { min, max, steps } => {
                let step = (max - min) / (steps - 1) as f64;
                let mut v: Vec<f64> = (0..steps).map(|i| min + step * i as f64).collect();
                v[steps - 1] = max;
                v
            }
        }
    }
}

impl FromStr for AoiConfig {
    type Err = DbrError;

    /// A single angle (`30`) or `min:max:steps` (`0:80:17`).
    fn from_str(s: &str) -> Result<Self> {
        let bad = || DbrError::InvalidConfig {
            field: "aoi".into(),
            reason: format!("expected an angle or min:max:steps, got `{s}`"),
        };
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [a] => Ok(AoiConfig::Single(a.trim().parse().map_err(|_| bad())?)),
            [a, b, n] => Ok(AoiConfig::Sweep {
                min: a.trim().parse().map_err(|_| bad())?,
                max: b.trim().parse().map_err(|_| bad())?,
                steps: n.trim().parse().map_err(|_| bad())?,
            }),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PolChoice {
    TE,
    TM,
    #[serde(rename = "both")]
    Both,
}

impl PolChoice {
    pub fn list(self) -> Vec<Polarization> {
        match self {
            PolChoice::TE => vec![Polarization::TE],
            PolChoice::TM => vec![Polarization::TM],
            PolChoice::Both => vec![Polarization::TE, Polarization::TM],
        }
    }
}

impl FromStr for PolChoice {
    type Err = DbrError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "te" => Ok(PolChoice::TE),
            "tm" => Ok(PolChoice::TM),
            "both" => Ok(PolChoice::Both),
            _ => Err(DbrError::InvalidConfig {
                field: "pol".into(),
                reason: format!("expected TE, TM or both, got `{s}`"),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    Tmm,
    CoupledMode,
}

impl Engine {
    pub fn as_str(self) -> &'static str {
        match self {
            Engine::Tmm => "tmm",
            Engine::CoupledMode => "coupled_mode",
        }
    }

    pub fn spectrum(self, spec: &DbrSpec, grid: &SpectralGrid, aoi_deg: f64, pol: Polarization) -> Result<Spectrum> {
        match self {
            Engine::Tmm => tmm::spec_spectrum(spec, grid, aoi_deg, pol),
            Engine::CoupledMode => cm_spectrum(spec, grid, aoi_deg, pol),
        }
    }

    pub fn angle_map(self, spec: &DbrSpec, grid: &SpectralGrid, aoi: &[f64], pol: Polarization) -> Result<AngleMap> {
        let rows = aoi
            .iter()
            .map(|&a| self.spectrum(spec, grid, a, pol))
            .collect::<Result<Vec<_>>>()?;
        Ok(AngleMap {
            aoi_deg: aoi.to_vec(),
            rows,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EngineChoice {
    Tmm,
    CoupledMode,
    Both,
}

impl EngineChoice {
    pub fn list(self) -> Vec<Engine> {
        match self {
            EngineChoice::Tmm => vec![Engine::Tmm],
            EngineChoice::CoupledMode => vec![Engine::CoupledMode],
            EngineChoice::Both => vec![Engine::Tmm, Engine::CoupledMode],
        }
    }
}

impl FromStr for EngineChoice {
    type Err = DbrError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "tmm" => Ok(EngineChoice::Tmm),
            "coupled_mode" | "cm" => Ok(EngineChoice::CoupledMode),
            "both" => Ok(EngineChoice::Both),
            _ => Err(DbrError::InvalidConfig {
                field: "engine".into(),
                reason: format!("expected tmm, coupled_mode or both, got `{s}`"),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Spectrum,
    AngleMap,
    Diagnose,
    Bloch,
    Pbg,
    Compare,
}

impl FromStr for Task {
    type Err = DbrError;

    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.trim().replace('-', "_"))).map_err(|_| DbrError::InvalidConfig {
            field: "tasks".into(),
            reason: format!("unknown task `{s}`"),
        })
    }
}

fn default_drop_fraction() -> f64 {
    DEFAULT_DROP_FRACTION
}

fn default_steps_per_cell() -> usize {
    100
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub spec: DbrSpec,
    #[serde(default)]
    pub grid: GridConfig,
    pub aoi: AoiConfig,
    pub pol: PolChoice,
    pub engine: EngineChoice,
    pub tasks: BTreeSet<Task>,
    #[serde(default)]
    pub baseline: Option<DbrSpec>,
    pub output_dir: PathBuf,
    #[serde(default = "default_drop_fraction")]
    pub drop_fraction: f64,
    /// Wavelength for `diagnose` and `bloch`; defaults to the half-duty Bragg wavelength.
    #[serde(default)]
    pub probe_wavelength_nm: Option<f64>,
    #[serde(default = "default_steps_per_cell")]
    pub steps_per_cell: usize,
}

/// Bragg wavelength `2 period n_bar` of a half-duty cell.
pub fn design_wavelength(spec: &DbrSpec) -> f64 {
    2.0 * spec.period * cell_average_index(spec.n1, spec.n2, spec.period / 2.0, spec.period)
}

impl RunConfig {
    pub fn new(spec: DbrSpec, output_dir: impl Into<PathBuf>) -> Self {
        RunConfig {
            spec,
            grid: GridConfig::default(),
            aoi: AoiConfig::Single(0.0),
            pol: PolChoice::TE,
            engine: EngineChoice::Tmm,
            tasks: [Task::Spectrum].into_iter().collect(),
            baseline: None,
            output_dir: output_dir.into(),
            drop_fraction: DEFAULT_DROP_FRACTION,
            probe_wavelength_nm: None,
            steps_per_cell: default_steps_per_cell(),
        }
    }

    pub fn probe_wavelength(&self) -> f64 {
        self.probe_wavelength_nm.unwrap_or_else(|| design_wavelength(&self.spec))
    }

    pub fn validate(&self) -> Result<()> {
        let field = |f: &str, reason: String| DbrError::InvalidConfig {
            field: f.into(),
            reason,
        };
        self.spec.validate().map_err(|e| field("spec", e.to_string()))?;
        if let Some(b) = &self.baseline {
            b.validate().map_err(|e| field("baseline", e.to_string()))?;
        }
        if self.grid.points < 2 {
            return Err(field("grid.points", format!("need >= 2, got {}", self.grid.points)));
        }
        if !(self.grid.f_min_thz > 0.0 && self.grid.f_min_thz < self.grid.f_max_thz) {
            return Err(field("grid", "need 0 < f_min_thz < f_max_thz".into()));
        }
        if let AoiConfig::Sweep { steps: 0, .. } = self.aoi {
            return Err(field("aoi.steps", "need >= 1".into()));
        }
        if let Some(a) = self.aoi.angles().into_iter().find(|a| !(0.0..90.0).contains(a)) {
            return Err(field("aoi", format!("angle {a} outside [0, 90)")));
        }
        if self.tasks.is_empty() {
            return Err(field("tasks", "no tasks requested".into()));
        }
        if self.tasks.contains(&Task::Compare) && self.baseline.is_none() {
            return Err(field("baseline", "the compare task needs a baseline spec".into()));
        }
        if !(self.drop_fraction > 0.0 && self.drop_fraction < 1.0) {
            return Err(field("drop_fraction", "must lie in (0, 1)".into()));
        }
        if let Some(l) = self.probe_wavelength_nm {
            if !(l > 0.0) {
                return Err(field("probe_wavelength_nm", "must be positive".into()));
            }
        }
        if self.steps_per_cell == 0 {
            return Err(field("steps_per_cell", "need >= 1".into()));
        }
        Ok(())
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Command-line values that take precedence over a config file or preset.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub output_dir: Option<PathBuf>,
    pub engine: Option<EngineChoice>,
    pub pol: Option<PolChoice>,
    pub aoi: Option<AoiConfig>,
    pub grid: Option<GridConfig>,
    pub tasks: Option<BTreeSet<Task>>,
}

impl Overrides {
    pub fn apply(&self, mut cfg: RunConfig) -> RunConfig {
        if let Some(v) = &self.output_dir {
            cfg.output_dir = v.clone();
        }
        if let Some(v) = self.engine {
            cfg.engine = v;
        }
        if let Some(v) = self.pol {
            cfg.pol = v;
        }
        if let Some(v) = self.aoi {
            cfg.aoi = v;
        }
        if let Some(v) = self.grid {
            cfg.grid = v;
        }
        if let Some(v) = &self.tasks {
            cfg.tasks = v.clone();
        }
        cfg
    }
}

pub const PRESET_NAMES: [&str; 7] = [
    "normal-n39",
    "normal-n21",
    "cdbr-d10",
    "cdbr-d5",
    "cdbr-d2.5",
    "ict-n21",
    "fig6-anglemaps",
];

/// Slices used for the tilted-cell preset.
pub const ICT_PRESET_SLICES: usize = 32;

pub fn preset_spec(name: &str) -> Result<DbrSpec> {
    Ok(match name {
        "normal-n39" => DbrSpec::normal(400.0, 200.0, 39),
        "normal-n21" => DbrSpec::normal(400.0, 200.0, 21),
        "cdbr-d10" | "fig6-anglemaps" => DbrSpec::chirped(400.0, 10.0, 10.0, 39),
        "cdbr-d5" => DbrSpec::chirped(400.0, 100.0, 5.0, 39),
        "cdbr-d2.5" => DbrSpec::chirped(400.0, 150.0, 2.5, 39),
        "ict-n21" => DbrSpec::ict(400.0, 200.0, 21, 0.05, ICT_PRESET_SLICES),
        other => return Err(DbrError::UnknownPreset(other.to_string())),
    })
}

pub fn preset(name: &str) -> Result<RunConfig> {
    let spec = preset_spec(name)?;
    let mut cfg = RunConfig::new(spec, Path::new("out").join(name));
    let tasks = |t: &[Task]| t.iter().copied().collect::<BTreeSet<_>>();
    match name {
        "normal-n39" | "normal-n21" => {
            cfg.tasks = tasks(&[Task::Spectrum, Task::Pbg]);
        }
        "cdbr-d10" | "cdbr-d5" | "cdbr-d2.5" => {
            cfg.baseline = Some(preset_spec("normal-n39")?);
            cfg.tasks = tasks(&[Task::Spectrum, Task::Pbg, Task::Compare, Task::Diagnose, Task::Bloch]);
        }
        "ict-n21" => {
            cfg.baseline = Some(preset_spec("normal-n21")?);
            cfg.tasks = tasks(&[Task::Spectrum, Task::Pbg, Task::Compare, Task::Diagnose]);
        }
        "fig6-anglemaps" => {
            cfg.baseline = Some(preset_spec("normal-n39")?);
            cfg.pol = PolChoice::Both;
            cfg.aoi = AoiConfig::Sweep {
                min: 0.0,
                max: 80.0,
                steps: 17,
            };
            cfg.tasks = tasks(&[Task::AngleMap, Task::Pbg]);
        }
        _ => unreachable!("checked by preset_spec"),
    }
    Ok(cfg)
}

#[derive(Debug, Clone, Serialize)]
struct SpectrumBands {
    design: &'static str,
    engine: &'static str,
    pol: Polarization,
    aoi_deg: f64,
    bands: Vec<BandGap>,
    principal: Option<BandGap>,
}

#[derive(Debug, Clone, Serialize)]
struct OmniEntry {
    design: &'static str,
    engine: &'static str,
    aoi_limit_deg: f64,
    intervals: Vec<FreqInterval>,
}

#[derive(Debug, Clone, Serialize)]
struct PbgReport {
    drop_fraction: f64,
    spectra: Vec<SpectrumBands>,
    comparisons: Vec<ComparisonReport>,
    omnidirectional: Vec<OmniEntry>,
}

struct Outputs {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

impl Outputs {
    fn create(&mut self, name: &str) -> Result<BufWriter<File>> {
        let path = self.dir.join(name);
        let file = File::create(&path)?;
        self.written.push(path);
        Ok(BufWriter::new(file))
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let path = self.dir.join(name);
        write_json(&path, value)?;
        self.written.push(path);
        Ok(())
    }
}

/// Runs every requested task and returns the files written, in order.
/// Identical configs produce byte-identical files.
pub fn run(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    cfg.validate()?;
    fs::create_dir_all(&cfg.output_dir)?;
    let mut out = Outputs {
        dir: cfg.output_dir.clone(),
        written: Vec::new(),
    };
    let grid = SpectralGrid::uniform(cfg.grid.f_min_thz, cfg.grid.f_max_thz, cfg.grid.points)?;
    let angles = cfg.aoi.angles();
    let engines = cfg.engine.list();
    let pols = cfg.pol.list();
    let wants = |t: Task| cfg.tasks.contains(&t);
    let with_baseline = wants(Task::Compare) && cfg.baseline.is_some();

    let mut designs: Vec<(&'static str, &DbrSpec)> = vec![("candidate", &cfg.spec)];
    if let (true, Some(b)) = (with_baseline || wants(Task::AngleMap), &cfg.baseline) {
        designs.push(("baseline", b));
    }

    let mut report = PbgReport {
        drop_fraction: cfg.drop_fraction,
        spectra: Vec::new(),
        comparisons: Vec::new(),
        omnidirectional: Vec::new(),
    };

    if wants(Task::Spectrum) || wants(Task::Pbg) || wants(Task::Compare) {
        for &engine in &engines {
            for &pol in &pols {
                for &aoi in &angles {
                    let mut computed = Vec::new();
                    for &(design, spec) in &designs {
                        if design == "baseline" && !with_baseline {
                            continue;
                        }
                        let s = engine.spectrum(spec, &grid, aoi, pol)?;
                        if wants(Task::Spectrum) {
                            let prefix = if design == "baseline" { "spectrum_baseline" } else { "spectrum" };
                            let name = format!("{prefix}_{}_{}_aoi{}.csv", engine.as_str(), pol, fmt_angle(aoi));
                            s.write_csv(out.create(&name)?)?;
                        }
                        if wants(Task::Pbg) || wants(Task::Compare) {
                            let bands = analysis::extract_pbg(&s, cfg.drop_fraction)?;
                            report.spectra.push(SpectrumBands {
                                design,
                                engine: engine.as_str(),
                                pol,
                                aoi_deg: aoi,
                                principal: analysis::principal_band(&bands),
                                bands,
                            });
                        }
                        computed.push(s);
                    }
                    if with_baseline {
                        report.comparisons.push(analysis::compare(&computed[0], &computed[1], cfg.drop_fraction)?);
                    }
                }
            }
        }
    }

    if wants(Task::AngleMap) {
        for &engine in &engines {
            for &(design, spec) in &designs {
                let mut maps = Vec::new();
                for &pol in &pols {
                    let map = engine.angle_map(spec, &grid, &angles, pol)?;
                    let prefix = if design == "baseline" { "anglemap_baseline" } else { "anglemap" };
                    map.write_csv(out.create(&format!("{prefix}_{}_{}.csv", engine.as_str(), pol))?)?;
                    maps.push(map);
                }
                if wants(Task::Pbg) && maps.len() == 2 {
                    let limit = angles.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                    report.omnidirectional.push(OmniEntry {
                        design,
                        engine: engine.as_str(),
                        aoi_limit_deg: limit,
                        intervals: analysis::omnidirectional_bands(&maps[0], &maps[1], cfg.drop_fraction, limit)?,
                    });
                }
            }
        }
    }

    if wants(Task::Pbg) || wants(Task::Compare) {
        out.json("pbg_report.json", &report)?;
    }

    if wants(Task::Diagnose) || wants(Task::Bloch) {
        let lam = cfg.probe_wavelength();
        let aoi = angles[0];
        let pol = pols[0];
        let params = cell_profiles(&cfg.spec, lam, aoi, pol)?;
        let profile = CmProfile::from_cell_params(&params, cfg.spec.period)?;
        if wants(Task::Diagnose) {
            write_profile_csv(&params, out.create("profile.csv")?)?;
            let rep = rap_margin(&profile)?;
            rep.write_csv(out.create("rap_report.csv")?)?;
            out.json("rap_summary.json", &rep.summary)?;
        }
        if wants(Task::Bloch) {
            let traj = precess(StokesVector::north(), &profile, cfg.steps_per_cell)?;
            write_trajectory_csv(&traj, out.create("bloch_trajectory.csv")?)?;
        }
    }

    Ok(out.written)
}
