//! `digispace` command-line front end.
//!
//! Exit status: 0 when the command succeeds and its verdict passes, 1 when a
//! verdict fails, 2 for input errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use digispace::catalog::{
    build_by_name, catalog_selftest, default_catalog, find_projective_plane_11_cached,
    ExplorationOrder, SearchSpec, NAME_PATTERNS,
};
use digispace::experiment::{
    diagnose, run_experiment, trajectory_from_table, write_outputs, ExperimentConfig, SpaceSource,
};
use digispace::io::{
    format_value, initial_field, read_initial, read_space, read_trajectory_csv, write_json,
    CoefficientFile, SpaceFile,
};
use digispace::parabolic::{spectral_solve, step, EIGEN_SUM_TOLERANCE};
use digispace::topology::surface_report;
use digispace::DigitalSpace;

/// Largest closed-form vs iteration deviation accepted by `spectral --compare`.
const SPECTRAL_COMPARE_TOLERANCE: f64 = 1e-9;
/// Distance to the limit required of the extended experiment run.
const LIMIT_TOLERANCE: f64 = 1e-6;

#[derive(Parser)]
#[command(name = "digispace", version, about = "Digital spaces and diffusion on them")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List or build catalog spaces.
    #[command(subcommand)]
    Catalog(CatalogCommand),
    /// Check whether a space file is an n-surface.
    Validate(ValidateArgs),
    /// Iterate the evolution equation and write the trajectory and report.
    Solve(SolveArgs),
    /// Run one of the preset experiments.
    Experiment(ExperimentArgs),
    /// Evaluate the closed-form spectral solution.
    Spectral(SpectralArgs),
    /// Recompute run diagnostics from a written trajectory CSV.
    Diagnose(DiagnoseArgs),
    /// Search for an 11-point projective plane.
    Search(SearchArgs),
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// Print the catalog entries and accepted name patterns.
    List,
    /// Write a catalog space to a file (or stdout).
    Build {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check every catalog entry against its expected summary.
    Selftest,
}

#[derive(Args)]
struct ValidateArgs {
    file: PathBuf,
    #[arg(long)]
    dim: usize,
    /// Also pass surfaces with boundary.
    #[arg(long)]
    allow_boundary: bool,
    /// Write the full report as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    /// Experiment configuration file; the flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Space file, or a catalog name.
    #[arg(long)]
    space: Option<String>,
    #[arg(long)]
    coeffs: Option<PathBuf>,
    #[arg(long)]
    init: Option<PathBuf>,
    #[arg(long)]
    steps: Option<u64>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long)]
    name: Option<String>,
    /// Print the resolved configuration and exit.
    #[arg(long)]
    dump_config: bool,
}

#[derive(Args)]
struct ExperimentArgs {
    /// `moebius` or `projective`.
    preset: String,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long)]
    steps: Option<u64>,
    #[arg(long)]
    dump_config: bool,
}

#[derive(Args)]
struct SpectralArgs {
    /// Space file, or a catalog name.
    #[arg(long)]
    space: String,
    #[arg(long)]
    coeffs: PathBuf,
    #[arg(long)]
    init: PathBuf,
    /// Comma-separated times, or an inclusive range `a..b`.
    #[arg(long, default_value = "0..100")]
    times: String,
    /// Compare against iteration up to the largest requested time.
    #[arg(long)]
    compare: bool,
    /// CSV output; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DiagnoseArgs {
    trajectory: PathBuf,
    /// Space file, or a catalog name.
    #[arg(long)]
    space: String,
    #[arg(long)]
    coeffs: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    /// Shuffle the point order with this seed instead of the lexicographic order.
    #[arg(long)]
    seed_order: Option<u64>,
    #[arg(long, default_value = ".")]
    cache_dir: PathBuf,
    /// Also copy the result to this space file.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    max_nodes: Option<u64>,
    #[arg(long)]
    time_budget: Option<f64>,
}

/// A command either passes or fails its verdict; errors are reported apart.
enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(Verdict::Pass) => ExitCode::SUCCESS,
        Ok(Verdict::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(command: Command) -> Result<Verdict> {
    match command {
        Command::Catalog(c) => catalog(c),
        Command::Validate(a) => validate(a),
        Command::Solve(a) => solve(a),
        Command::Experiment(a) => experiment(a),
        Command::Spectral(a) => spectral(a),
        Command::Diagnose(a) => diagnose_cmd(a),
        Command::Search(a) => search(a),
    }
}

/// A path that exists is a space file; anything else must be a catalog name.
fn space_source(arg: &str) -> SpaceSource {
    if Path::new(arg).exists() {
        SpaceSource::File(arg.into())
    } else {
        SpaceSource::Catalog(arg.into())
    }
}

fn load_space(arg: &str) -> Result<DigitalSpace> {
    space_source(arg)
        .resolve()
        .with_context(|| format!("cannot load space `{arg}`"))
}

fn catalog(command: CatalogCommand) -> Result<Verdict> {
    match command {
        CatalogCommand::List => {
            for e in default_catalog() {
                println!(
                    "{:<22} {:>3} points {:>3} edges",
                    e.name,
                    e.space.len(),
                    e.space.edge_count()
                );
            }
            println!("\nname patterns: {}", NAME_PATTERNS.join(", "));
        }
        CatalogCommand::Build { name, out } => {
            let g = build_by_name(&name)?;
            let file = SpaceFile::from_space(&name, &g);
            match out {
                Some(path) => {
                    file.write(&path)?;
                    println!(
                        "wrote {} ({} points, {} edges)",
                        path.display(),
                        g.len(),
                        g.edge_count()
                    );
                }
                None => println!("{}", serde_json::to_string_pretty(&file)?),
            }
        }
        CatalogCommand::Selftest => {
            let report = catalog_selftest(&default_catalog());
            for r in &report.results {
                let mark = if r.passed { "ok  " } else { "FAIL" };
                println!("{mark} {}", r.name);
                for p in &r.problems {
                    println!("     {p}");
                }
            }
            return Ok(Verdict::from_bool(report.all_passed()));
        }
    }
    Ok(Verdict::Pass)
}

fn validate(args: ValidateArgs) -> Result<Verdict> {
    let (name, g) = read_space(&args.file)?;
    let report = surface_report(&g, args.dim);
    if let Some(out) = &args.out {
        write_json(out, &report)?;
    }
    let kind = if report.is_surface {
        "closed surface"
    } else if report.is_surface_with_boundary {
        "surface with boundary"
    } else {
        "not a surface"
    };
    println!("{name}: {kind} (dimension {})", args.dim);
    println!(
        "  V = {}, E = {}, T = {}, euler = {}",
        report.vertex_count, report.edge_count, report.triangle_count, report.euler
    );
    match report.orientable {
        Some(o) => println!("  orientable: {o}"),
        None => println!("  orientable: n/a"),
    }
    println!("  boundary components: {}", report.boundary_components.len());
    let defective = report.defective_points();
    if !defective.is_empty() {
        let list: Vec<String> = defective.iter().map(ToString::to_string).collect();
        println!("  defective points: {}", list.join(" "));
    }
    let pass = report.is_surface || (args.allow_boundary && report.is_surface_with_boundary);
    Ok(Verdict::from_bool(pass))
}

fn solve_config(args: &SolveArgs) -> Result<ExperimentConfig> {
    let base = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("cannot read {}", path.display()))?;
            Some(
                serde_json::from_str::<ExperimentConfig>(&text)
                    .with_context(|| format!("cannot parse {}", path.display()))?,
            )
        }
        None => None,
    };
    let space = match (&args.space, &base) {
        (Some(s), _) => space_source(s),
        (None, Some(b)) => b.space.clone(),
        (None, None) => bail!("--space is required without --config"),
    };
    let coefficients = match (&args.coeffs, &base) {
        (Some(p), _) => CoefficientFile::read(p)?,
        (None, Some(b)) => b.coefficients.clone(),
        (None, None) => bail!("--coeffs is required without --config"),
    };
    let initial = match (&args.init, &base) {
        (Some(p), _) => read_initial(p)?,
        (None, Some(b)) => b.initial.clone(),
        (None, None) => bail!("--init is required without --config"),
    };
    let steps = match (args.steps, &base) {
        (Some(s), _) => s,
        (None, Some(b)) => b.steps,
        (None, None) => bail!("--steps is required without --config"),
    };
    let name = args
        .name
        .clone()
        .or_else(|| base.as_ref().map(|b| b.name.clone()))
        .unwrap_or_else(|| "solve".into());
    Ok(ExperimentConfig {
        name,
        space,
        coefficients,
        initial,
        steps,
        extended_steps: base.as_ref().map_or(0, |b| b.extended_steps),
        highlight: base.as_ref().map_or_else(Vec::new, |b| b.highlight.clone()),
        spectral_comparison: base.as_ref().map_or(true, |b| b.spectral_comparison),
    })
}

fn run_and_write(config: &ExperimentConfig, out: &Path) -> Result<digispace::experiment::RunReport> {
    let mut run = run_experiment(config)?;
    fs::create_dir_all(out).with_context(|| format!("cannot create {}", out.display()))?;
    let files = write_outputs(&mut run, out)?;
    let r = &run.report;
    println!("{}: {} steps on {} points", config.name, r.steps, run.space.len());
    println!("  trajectory: {}", files.trajectory.display());
    for s in &files.series {
        println!("  series:     {}", s.display());
    }
    println!("  report:     {}", files.report.display());
    println!(
        "  sum {} conserved: {} (max drift {:.3e})",
        format_value(r.initial_sum),
        r.conserved,
        r.max_conservation_drift
    );
    println!("  stable: {}", r.stable);
    if let Some(d) = r.distance_to_stationary {
        println!("  distance to limit at t = {}: {d:.3e}", r.steps);
    }
    if let (Some(t), Some(d)) = (r.extended_steps, r.extended_distance_to_stationary) {
        println!("  distance to limit at t = {t}: {d:.3e}");
    }
    if let Some(d) = r.spectral_max_deviation {
        println!("  spectral vs iteration: {d:.3e}");
    }
    Ok(run.report)
}

fn solve(args: SolveArgs) -> Result<Verdict> {
    let config = solve_config(&args)?;
    if args.dump_config {
        println!("{}", serde_json::to_string_pretty(&config)?);
        return Ok(Verdict::Pass);
    }
    let r = run_and_write(&config, &args.out)?;
    Ok(Verdict::from_bool(r.conserved && r.stable))
}

fn experiment(args: ExperimentArgs) -> Result<Verdict> {
    let Some(mut config) = ExperimentConfig::preset(&args.preset) else {
        bail!("unknown experiment `{}` (moebius, projective)", args.preset);
    };
    if let Some(s) = args.steps {
        config.steps = s;
    }
    if args.dump_config {
        println!("{}", serde_json::to_string_pretty(&config)?);
        return Ok(Verdict::Pass);
    }
    let r = run_and_write(&config, &args.out)?;
    let near_limit = r
        .extended_distance_to_stationary
        .map_or(true, |d| d < LIMIT_TOLERANCE);
    Ok(Verdict::from_bool(r.conserved && r.stable && near_limit))
}

fn parse_times(s: &str) -> Result<Vec<u64>> {
    if let Some((a, b)) = s.split_once("..") {
        let a: u64 = a.trim().parse().with_context(|| format!("bad time range `{s}`"))?;
        let b: u64 = b.trim().parse().with_context(|| format!("bad time range `{s}`"))?;
        if a > b {
            bail!("empty time range `{s}`");
        }
        return Ok((a..=b).collect());
    }
    s.split(',')
        .map(|t| t.trim().parse().with_context(|| format!("bad time `{t}`")))
        .collect()
}

fn spectral(args: SpectralArgs) -> Result<Verdict> {
    let g = load_space(&args.space)?;
    let c = CoefficientFile::read(&args.coeffs)?.resolve(&g)?;
    let f0 = initial_field(&g, &read_initial(&args.init)?, &args.init)?;
    let times = parse_times(&args.times)?;
    let sol = spectral_solve(&c, &f0)?;

    let mut text = String::from("t");
    for p in g.points() {
        text.push_str(&format!(",f_{p}"));
    }
    text.push('\n');
    for &t in &times {
        let f = sol.evaluate(t);
        text.push_str(&t.to_string());
        for &x in &f.values {
            text.push(',');
            text.push_str(&format_value(x));
        }
        text.push('\n');
    }
    match &args.out {
        Some(path) => {
            fs::write(path, &text).with_context(|| format!("cannot write {}", path.display()))?
        }
        None => print!("{text}"),
    }

    let sums = digispace::parabolic::check_eigen_sum_zero(&sol);
    eprintln!(
        "unit eigenvalues: {}, largest sub-unit eigenvector sum: {:.3e} (limit {EIGEN_SUM_TOLERANCE:e})",
        sol.unit_eigenvalue_count(),
        sums.max_checked_sum
    );
    if !args.compare {
        return Ok(Verdict::Pass);
    }
    let horizon = times.iter().copied().max().unwrap_or(0);
    let mut f = f0.clone();
    let mut deviation: f64 = 0.0;
    for t in 0..=horizon {
        if times.contains(&t) {
            deviation = deviation.max(sol.evaluate(t).max_abs_diff(&f));
        }
        if t < horizon {
            f = step(&c, &f, None)?;
        }
    }
    eprintln!("max deviation from iteration: {deviation:.3e}");
    Ok(Verdict::from_bool(deviation <= SPECTRAL_COMPARE_TOLERANCE))
}

fn diagnose_cmd(args: DiagnoseArgs) -> Result<Verdict> {
    let g = load_space(&args.space)?;
    let c = CoefficientFile::read(&args.coeffs)?.resolve(&g)?;
    let table = read_trajectory_csv(&args.trajectory)?;
    let traj = trajectory_from_table(&g, &table)?;
    let mut report = diagnose(&c, &traj, true);
    report.trajectory_path = Some(args.trajectory.display().to_string());
    let text = serde_json::to_string_pretty(&report)?;
    match &args.out {
        Some(path) => write_json(path, &report)?,
        None => println!("{text}"),
    }
    Ok(Verdict::from_bool(report.conserved && report.stable))
}

fn search(args: SearchArgs) -> Result<Verdict> {
    let mut spec = SearchSpec::projective_plane_11();
    if let Some(seed) = args.seed_order {
        spec.order = ExplorationOrder::Shuffled(seed);
    }
    if let Some(n) = args.max_nodes {
        spec.max_nodes = n;
    }
    if let Some(s) = args.time_budget {
        spec.time_budget_secs = Some(s);
    }
    fs::create_dir_all(&args.cache_dir)
        .with_context(|| format!("cannot create {}", args.cache_dir.display()))?;
    let (g, cached) = find_projective_plane_11_cached(&spec, &args.cache_dir)?;
    let path = digispace::catalog::cache_path(&args.cache_dir, &spec);
    println!(
        "{} {} ({} points, {} edges)",
        if cached { "cached" } else { "found" },
        path.display(),
        g.len(),
        g.edge_count()
    );
    if let Some(out) = &args.out {
        SpaceFile::from_space("projective-plane-11", &g).write(out)?;
        println!("wrote {}", out.display());
    }
    Ok(Verdict::Pass)
}
