//! Commands of the `bend` driver: each turns a configuration into named output artifacts.

mod svg;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use bending_core::bending::{bend, irreducibility_heuristic, BentRepresentation, IrreducibilityReport, SearchBudget};
use bending_core::classify::{
    affine_circle_developing, classify, horoball_sandwich, periodic_perturbation, precise_invariance_level,
    ClassifyOptions, CuspReport, InvarianceLevel, PeripheralData, Sandwich, DEFAULT_BETA_TOL, DEFAULT_GRID,
};
use bending_core::config::{
    bundled, parse_json, rows_from_matrix, BendingConfig, ConfigError, PlotConfig, Rows, SandwichConfig, VolumeConfig,
};
use bending_core::cusp::{
    bent_graph, cusp_volume_estimate, default_first_shell, omega_x_section, CuspModel, ShellSeries,
};
use bending_core::hilbert::{Budget, DirectionSet, DEFAULT_DIRECTIONS};
use bending_core::{Error, ProjectivePoint};
use serde::{Deserialize, Serialize};

pub use svg::Figure;

/// Driver failure, mapped to a process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("unsupported plot: {0}")]
    UnsupportedPlot(String),
    #[error("degenerate cusp detected: {0}")]
    Degenerate(String),
    #[error("numerical failure: {0}")]
    Numerical(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) | Self::Read { .. } | Self::UnsupportedPlot(_) => 1,
            Self::Degenerate(_) => 2,
            Self::Numerical(_) | Self::Write { .. } => 3,
        }
    }
}

/// Invalid data in a well-formed file is an input error.
fn invalid(e: Error) -> CliError {
    CliError::Config(ConfigError::Invalid(e))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Classify,
    Volume,
    Plot,
    Sandwich,
    Bendcheck,
}

/// One invocation of the driver.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    /// A file path, or `bundled:<name>`.
    pub input: String,
    pub t_values: Vec<f64>,
    pub seed: u64,
    pub tolerance: Option<f64>,
    pub out: PathBuf,
}

/// A named output file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
}

impl Artifact {
    fn json<T: Serialize>(name: String, value: &T) -> Self {
        let mut bytes = serde_json::to_vec_pretty(value).expect("reports serialize");
        bytes.push(b'\n');
        Self { name, bytes }
    }
}

/// Artifacts of a run, and the degeneracy message when one was detected.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub artifacts: Vec<Artifact>,
    pub degenerate: Option<String>,
}

pub fn read_input(input: &str) -> Result<String, CliError> {
    match input.strip_prefix("bundled:") {
        Some(name) => Ok(bundled(name)?.to_string()),
        None => fs::read_to_string(input).map_err(|source| CliError::Read { path: input.into(), source }),
    }
}

fn t_label(t: f64) -> String {
    format!("t{t}")
}

/// Runs a command without touching the file system beyond reading the input.
pub fn run(config: &RunConfig) -> Result<RunOutput, CliError> {
    bending_core::set_global_tolerance(config.tolerance);
    let text = read_input(&config.input)?;
    let result = match config.command {
        Command::Classify => cmd_classify(&parse_json(&text)?, config),
        Command::Volume => cmd_volume(&parse_json(&text)?, config).map(no_degeneracy),
        Command::Plot => cmd_plot(&parse_json(&text)?, config).map(no_degeneracy),
        Command::Sandwich => cmd_sandwich(&parse_json(&text)?, config).map(no_degeneracy),
        Command::Bendcheck => cmd_bendcheck(&parse_json(&text)?, config).map(no_degeneracy),
    };
    bending_core::set_global_tolerance(None);
    result
}

fn no_degeneracy(artifacts: Vec<Artifact>) -> RunOutput {
    RunOutput { artifacts, degenerate: None }
}

/// Runs a command and writes its artifacts into `config.out`, each file replaced atomically.
pub fn execute(config: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let output = run(config)?;
    let paths = write_artifacts(&config.out, &output.artifacts)?;
    match output.degenerate {
        Some(msg) => Err(CliError::Degenerate(msg)),
        None => Ok(paths),
    }
}

pub fn write_artifacts(dir: &Path, artifacts: &[Artifact]) -> Result<Vec<PathBuf>, CliError> {
    let wrap = |path: &Path| {
        let path = path.to_path_buf();
        move |source| CliError::Write { path, source }
    };
    fs::create_dir_all(dir).map_err(wrap(dir))?;
    artifacts
        .iter()
        .map(|a| {
            let path = dir.join(&a.name);
            let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(wrap(&path))?;
            tmp.write_all(&a.bytes).map_err(wrap(&path))?;
            tmp.persist(&path).map_err(|e| CliError::Write { path: path.clone(), source: e.error })?;
            Ok(path)
        })
        .collect()
}

/// Peripheral data of cusp `index` under `rep`.
pub fn peripheral_data(rep: &BentRepresentation<f64>, cfg: &BendingConfig, index: usize) -> Result<PeripheralData<f64>, CliError> {
    let cusp = &cfg.cusps[index];
    let eval = |w: &bending_core::bending::WordSpec| -> Result<_, CliError> {
        let word = w.to_word().map_err(invalid)?;
        rep.evaluate_word(&word).map_err(invalid)
    };
    Ok(PeripheralData {
        gamma: eval(&cusp.gamma)?,
        delta: cusp.delta.iter().map(eval).collect::<Result<_, _>>()?,
        signed_points: cusp.signed_points.clone(),
    })
}

/// Classifies every cusp at every `t`.
pub fn classify_reports(cfg: &BendingConfig, config: &RunConfig) -> Result<Vec<CuspReport>, CliError> {
    let data = cfg.to_data().map_err(invalid)?;
    let options = ClassifyOptions {
        beta_tol: config.tolerance.unwrap_or(DEFAULT_BETA_TOL),
        seed: config.seed,
        ..ClassifyOptions::default()
    };
    let mut reports = Vec::new();
    for &t in &config.t_values {
        let rep = bend(&data, t)?;
        for (i, cusp) in cfg.cusps.iter().enumerate() {
            reports.push(classify(&cusp.name, &peripheral_data(&rep, cfg, i)?, t, options)?);
        }
    }
    Ok(reports)
}

fn cmd_classify(cfg: &BendingConfig, config: &RunConfig) -> Result<RunOutput, CliError> {
    let mut artifacts = Vec::new();
    let mut degenerate = Vec::new();
    for report in classify_reports(cfg, config)? {
        let stem = format!("{}_{}", report.cusp, t_label(report.t));
        if let Some(w) = &report.witness {
            degenerate.push(format!("{} at t = {} is {:?}", report.cusp, report.t, report.kind));
            artifacts.push(Artifact::json(format!("{stem}_witness.json"), w));
        }
        artifacts.push(Artifact::json(format!("{stem}.json"), &report));
    }
    Ok(RunOutput { artifacts, degenerate: (!degenerate.is_empty()).then(|| degenerate.join("; ")) })
}

/// Growth diagnostics of a shell series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolumeSummary {
    pub seed: u64,
    pub partial_sums: Vec<f64>,
    pub ratios: Vec<(f64, f64)>,
    /// Every ratio is below 0.9 at 3σ.
    pub decaying: bool,
    /// Ten successive shells each add more than 5σ.
    pub growing: bool,
}

pub fn volume_series(cfg: &VolumeConfig, seed: u64) -> Result<ShellSeries, CliError> {
    let model = CuspModel::new(cfg.model, cfg.dimension).map_err(invalid)?;
    let cell = cfg.cell.to_cell().map_err(invalid)?;
    let x0 = cfg.first_shell.unwrap_or_else(|| default_first_shell(&model, &cell));
    let dirs = DirectionSet::new(cfg.dimension, cfg.directions.unwrap_or(DEFAULT_DIRECTIONS), seed);
    Ok(cusp_volume_estimate(model, &cell, x0, cfg.shells, &dirs, Budget { samples: cfg.samples, seed })?)
}

fn cmd_volume(cfg: &VolumeConfig, config: &RunConfig) -> Result<Vec<Artifact>, CliError> {
    let series = volume_series(cfg, config.seed)?;
    let summary = VolumeSummary {
        seed: config.seed,
        partial_sums: series.partial_sums(),
        ratios: series.ratios(),
        decaying: series.decays(0.9, 3.0),
        growing: series.diverges(10, 5.0),
    };
    Ok(vec![
        Artifact { name: "volume.csv".into(), bytes: series.to_csv().into_bytes() },
        Artifact::json("volume_summary.json".into(), &summary),
    ])
}

fn cmd_plot(cfg: &PlotConfig, config: &RunConfig) -> Result<Vec<Artifact>, CliError> {
    let ys: Vec<f64> = (0..=240).map(|i| (-3.0 + 6.0 * i as f64 / 240.0).exp()).collect();
    let curve = |level: f64| -> Vec<(f64, f64)> { ys.iter().map(|&y| (y, bent_graph(y, &[], level))).collect() };
    let svg_name = |stem: &str| format!("{stem}_seed{}.svg", config.seed);
    match cfg {
        PlotConfig::BentSlice { dimension, levels } => {
            if *dimension < 2 {
                return Err(CliError::UnsupportedPlot(format!("bent model of dimension {dimension}")));
            }
            let mut fig = Figure::new("bent model, slice v = 0", "y", "x");
            fig.polyline("boundary", &curve(0.0));
            for &c in levels.iter().filter(|c| **c > 0.0) {
                fig.polyline(&format!("level {c}"), &curve(c));
            }
            Ok(vec![Artifact { name: svg_name("bent_slice"), bytes: fig.render().into_bytes() }])
        }
        PlotConfig::OmegaSection { point, levels } => {
            if point.len() < 3 {
                return Err(CliError::UnsupportedPlot(format!("section of a domain of dimension {}", point.len().saturating_sub(1))));
            }
            let p = ProjectivePoint::from_slice(point).map_err(invalid)?;
            let section = omega_x_section(point.len() - 1, &p).map_err(invalid)?;
            let base = section.domain().level();
            let mut fig = Figure::new("plane section through a boundary point", "y", "x");
            let boundary: Vec<(f64, f64)> = section.boundary_curve(&ys).into_iter().map(|(x, y)| (y, x)).collect();
            fig.polyline("boundary", &boundary);
            for &c in levels.iter().filter(|c| **c > 0.0) {
                fig.polyline(&format!("level {c}"), &curve(base + c));
            }
            Ok(vec![Artifact { name: svg_name("omega_section"), bytes: fig.render().into_bytes() }])
        }
        PlotConfig::AffineCircle { signed_points } => config
            .t_values
            .iter()
            .map(|&t| {
                let circle = affine_circle_developing(signed_points, t).map_err(invalid)?;
                let mut fig = Figure::new(&format!("affine circle developing map, t = {t}"), "s", "D(s)");
                fig.polyline("identity", &[(-1.0, -1.0), (2.0, 2.0)]);
                fig.polyline("developing map", &circle.graph(-1.0, 2.0, 64));
                Ok(Artifact { name: svg_name(&format!("affine_circle_{}", t_label(t))), bytes: fig.render().into_bytes() })
            })
            .collect(),
    }
}

/// Sandwich and invariance certificates at one `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SandwichReport {
    pub t: f64,
    pub seed: u64,
    pub amplitude: f64,
    pub sandwich: Sandwich,
    pub invariance: InvarianceLevel,
}

fn cmd_sandwich(cfg: &SandwichConfig, config: &RunConfig) -> Result<Vec<Artifact>, CliError> {
    let cell = cfg.cell.to_cell().map_err(invalid)?;
    if cfg.dimension != cell.origin.len() + 1 {
        return Err(invalid(Error::Dimension { expected: cfg.dimension - 1, got: cell.origin.len() }));
    }
    let invariance = precise_invariance_level(cfg.model, cfg.dimension, &cfg.translation, cfg.epsilon, 100, config.seed)?;
    config
        .t_values
        .iter()
        .map(|&t| {
            let amplitude = cfg.amplitude * t;
            let graph = periodic_perturbation(cfg.model, &cell, amplitude);
            let sandwich = horoball_sandwich(graph, cfg.model, &cell, cfg.grid.unwrap_or(DEFAULT_GRID))?;
            let report = SandwichReport { t, seed: config.seed, amplitude, sandwich, invariance };
            Ok(Artifact::json(format!("sandwich_{}.json", t_label(t)), &report))
        })
        .collect()
}

/// Relator residuals and irreducibility evidence of `ρ_t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BendcheckReport {
    pub t: f64,
    pub seed: u64,
    pub relator_residuals: Vec<f64>,
    pub max_residual: f64,
    pub generators: std::collections::BTreeMap<String, Rows>,
    pub irreducibility: IrreducibilityReport,
}

fn cmd_bendcheck(cfg: &BendingConfig, config: &RunConfig) -> Result<Vec<Artifact>, CliError> {
    let data = cfg.to_data().map_err(invalid)?;
    config
        .t_values
        .iter()
        .map(|&t| {
            let rep = bend(&data, t)?;
            let residuals = rep.relator_residuals()?;
            let generators = data
                .generators
                .keys()
                .map(|k| (k.clone(), rows_from_matrix(rep.image(k).expect("known generator"))))
                .collect();
            let irreducibility = irreducibility_heuristic(
                &rep.generator_images(),
                SearchBudget { words: 64, trials: 16, seed: config.seed },
            );
            let report = BendcheckReport {
                t,
                seed: config.seed,
                max_residual: residuals.iter().copied().fold(0.0, f64::max),
                relator_residuals: residuals,
                generators,
                irreducibility,
            };
            Ok(Artifact::json(format!("bendcheck_{}.json", t_label(t)), &report))
        })
        .collect()
}
