//! End-to-end runs: resolve a space and coefficients, iterate, and collect
//! diagnostics (conservation, stability, distance to the stationary field,
//! agreement with the spectral closed form).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{build_by_name, CatalogError};
use crate::io::{
    initial_field, read_space, write_json, write_point_series, write_trajectory_csv,
    CoefficientFile, FormatError, InitialCondition, Scheme, TrajectoryTable,
};
use crate::parabolic::{
    advance, check_conservation, check_stability, final_field, run, spectral_solve,
    CoefficientError, CoefficientMatrix, Field, SpectralError, Trajectory,
};
use crate::space::{DigitalSpace, PointId};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Coefficients(#[from] CoefficientError),
    #[error("coefficient matrix rejected: {0}")]
    Invalid(String),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error("trajectory columns do not match the space's points")]
    ColumnMismatch,
}

/// Where a space comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceSource {
    Catalog(String),
    File(PathBuf),
}

impl SpaceSource {
    pub fn resolve(&self) -> Result<DigitalSpace, ExperimentError> {
        match self {
            SpaceSource::Catalog(name) => Ok(build_by_name(name)?),
            SpaceSource::File(path) => Ok(read_space(path)?.1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub name: String,
    pub space: SpaceSource,
    pub coefficients: CoefficientFile,
    pub initial: InitialCondition,
    pub steps: u64,
    /// Horizon of the extra run used to measure distance to the limit; 0
    /// skips it.
    #[serde(default)]
    pub extended_steps: u64,
    /// Points whose histories are written as two-column plot files.
    #[serde(default)]
    pub highlight: Vec<u32>,
    #[serde(default = "default_true")]
    pub spectral_comparison: bool,
}

fn default_true() -> bool {
    true
}

impl ExperimentConfig {
    /// Moebius strip, `w = 0.03`, 12 units at point 1, 100 steps.
    pub fn moebius() -> Self {
        ExperimentConfig {
            name: "moebius".into(),
            space: SpaceSource::Catalog("moebius12".into()),
            coefficients: CoefficientFile::Scheme {
                scheme: Scheme::LazyUniform,
                w: 0.03,
            },
            initial: [(1, 12.0)].into(),
            steps: 100,
            extended_steps: 10_000,
            highlight: vec![3, 10],
            spectral_comparison: true,
        }
    }

    /// Projective plane, `w = 0.1`, 11 units at point 1, 30 steps.
    pub fn projective() -> Self {
        ExperimentConfig {
            name: "projective".into(),
            space: SpaceSource::Catalog("projective-plane-11".into()),
            coefficients: CoefficientFile::Scheme {
                scheme: Scheme::LazyUniform,
                w: 0.1,
            },
            initial: [(1, 11.0)].into(),
            steps: 30,
            extended_steps: 10_000,
            highlight: vec![3, 10],
            spectral_comparison: true,
        }
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "moebius" => Some(Self::moebius()),
            "projective" => Some(Self::projective()),
            _ => None,
        }
    }
}

/// Diagnostics of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub trajectory_path: Option<String>,
    pub steps: u64,
    pub initial_sum: f64,
    pub max_conservation_drift: f64,
    pub max_step_drift: f64,
    pub conserved: bool,
    pub stable: bool,
    pub first_stability_violation: Option<u64>,
    /// max_p |f_p^T − f_p^∞| at the last step; absent when the limit is
    /// undefined (reducible or periodic `C`).
    pub distance_to_stationary: Option<f64>,
    pub extended_steps: Option<u64>,
    pub extended_distance_to_stationary: Option<f64>,
    /// Largest deviation between the closed form and the iteration; only for
    /// symmetric `C`.
    pub spectral_max_deviation: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct ExperimentRun {
    pub config: ExperimentConfig,
    pub space: DigitalSpace,
    pub matrix: CoefficientMatrix,
    pub trajectory: Trajectory,
    pub report: RunReport,
}

/// Metrics that depend only on the trajectory and `C`.
pub fn diagnose(c: &CoefficientMatrix, traj: &Trajectory, spectral: bool) -> RunReport {
    let cons = check_conservation(traj, None);
    let stab = check_stability(traj);
    let f0 = &traj.fields()[0];
    let limit = final_field(c, f0).ok();
    let spectral_max_deviation = if spectral && c.is_symmetric(crate::parabolic::COMMUTE_TOLERANCE)
    {
        spectral_solve(c, f0).ok().map(|sol| {
            traj.fields()
                .iter()
                .map(|f| sol.evaluate(f.t).max_abs_diff(f))
                .fold(0.0, f64::max)
        })
    } else {
        None
    };
    RunReport {
        trajectory_path: None,
        steps: traj.last().t - f0.t,
        initial_sum: f0.sum(),
        max_conservation_drift: cons.max_drift,
        max_step_drift: cons.max_step_drift,
        conserved: cons.conserved,
        stable: stab.stable,
        first_stability_violation: stab.first_violation,
        distance_to_stationary: limit.as_ref().map(|l| traj.last().max_abs_diff(l)),
        extended_steps: None,
        extended_distance_to_stationary: None,
        spectral_max_deviation,
    }
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentRun, ExperimentError> {
    let space = config.space.resolve()?;
    let matrix = config.coefficients.resolve(&space)?;
    let validation = matrix.validate();
    if !validation.is_valid() {
        return Err(ExperimentError::Invalid(validation.describe()));
    }
    let f0 = initial_field(&space, &config.initial, Path::new("<initial condition>"))?;
    let trajectory = run(&matrix, &f0, None, config.steps)?;
    let mut report = diagnose(&matrix, &trajectory, config.spectral_comparison);
    if config.extended_steps > 0 {
        report.extended_steps = Some(config.extended_steps);
        if let Ok(limit) = final_field(&matrix, &f0) {
            let f = advance(&matrix, &f0, config.extended_steps)?;
            report.extended_distance_to_stationary = Some(f.max_abs_diff(&limit));
        }
    }
    Ok(ExperimentRun {
        config: config.clone(),
        space,
        matrix,
        trajectory,
        report,
    })
}

/// Files written by [`write_outputs`].
#[derive(Debug, Clone, PartialEq)]
pub struct OutputFiles {
    pub trajectory: PathBuf,
    pub series: Vec<PathBuf>,
    pub report: PathBuf,
}

/// Writes `<name>-trajectory.csv`, `<name>-point-<p>.dat` per highlighted
/// point and `<name>-report.json` into `dir`.
pub fn write_outputs(run: &mut ExperimentRun, dir: &Path) -> Result<OutputFiles, ExperimentError> {
    let name = &run.config.name;
    let trajectory = dir.join(format!("{name}-trajectory.csv"));
    write_trajectory_csv(&trajectory, &run.space, &run.trajectory)?;
    run.report.trajectory_path = Some(trajectory.display().to_string());
    let mut series = Vec::new();
    for &p in &run.config.highlight {
        let path = dir.join(format!("{name}-point-{p}.dat"));
        write_point_series(&path, &run.space, &run.trajectory, PointId(p))?;
        series.push(path);
    }
    let report = dir.join(format!("{name}-report.json"));
    write_json(&report, &run.report)?;
    Ok(OutputFiles {
        trajectory,
        series,
        report,
    })
}

/// Rebuilds a trajectory from a parsed CSV for the given space.
pub fn trajectory_from_table(
    space: &DigitalSpace,
    table: &TrajectoryTable,
) -> Result<Trajectory, ExperimentError> {
    if table.labels != space.points() {
        return Err(ExperimentError::ColumnMismatch);
    }
    let fields = table
        .times
        .iter()
        .zip(&table.rows)
        .map(|(&t, row)| Field {
            t,
            values: row.clone(),
        })
        .collect();
    Ok(Trajectory::new(space.points().to_vec(), fields))
}
