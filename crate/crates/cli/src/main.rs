use clap::{Args, Parser, Subcommand};
use oriented_walk::dynsys::catalog;
use oriented_walk::stats::ExperimentReport;
use oriented_walk_cli::config::{parse_config_file, RunConfig};
use oriented_walk_cli::experiments::run_experiment;
use oriented_walk_cli::CliError;
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

/// Random walks on dynamically oriented lattices.
#[derive(Parser)]
#[command(name = "owalk", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write its report and data files
    Run(Box<RunArgs>),
    /// List system and generating-function presets
    Presets,
    /// Re-render a JSON report as text
    Report {
        /// Path to a report.json produced by `run`
        path: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Flat key=value config file; command-line flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    /// One of: orientations, admissibility, walk-returns, embedding-check,
    /// slln, scaling, flt, delta
    #[arg(long)]
    experiment: Option<String>,
    /// System preset, e.g. bernoulli, markov:rho=0.5, rotation:alpha=0.5
    #[arg(long)]
    system: Option<String>,
    /// Generating function preset: proj, f1, f2, f3, fmp, const:0.5
    #[arg(long)]
    f: Option<String>,
    /// Orientation law: annealed or quenched
    #[arg(long)]
    mode: Option<String>,
    /// Environment point for quenched mode on scalar systems
    #[arg(long)]
    x: Option<f64>,
    /// Walk length
    #[arg(long)]
    n: Option<u64>,
    /// Comma-separated walk lengths, e.g. 1e4,1e5,1e6
    #[arg(long = "n-grid")]
    n_grid: Option<String>,
    #[arg(long)]
    replicas: Option<u64>,
    /// Monte Carlo sample count where applicable
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (0 = all cores); never affects results
    #[arg(long)]
    workers: Option<usize>,
    /// Largest lag for orientation diagnostics
    #[arg(long = "max-lag")]
    max_lag: Option<u64>,
    /// Limit-process horizon
    #[arg(long)]
    t: Option<f64>,
    /// Limit-process time step
    #[arg(long)]
    dt: Option<f64>,
    /// Limit-process spatial cell width
    #[arg(long)]
    h: Option<f64>,
    /// Limit-process grid half-width (default 5 sqrt(t))
    #[arg(long = "x-max")]
    x_max: Option<f64>,
    /// KS threshold for the functional-limit comparison
    #[arg(long = "ks-flt-max")]
    ks_flt_max: Option<f64>,
    /// KS threshold for the scenery self-consistency comparison
    #[arg(long = "ks-self-max")]
    ks_self_max: Option<f64>,
    /// Zero-speed threshold at the largest grid point
    #[arg(long = "rms-max")]
    rms_max: Option<f64>,
}

impl RunArgs {
    fn into_map(self) -> Result<BTreeMap<String, String>, CliError> {
        let mut map = match &self.config {
            Some(path) => parse_config_file(path)?,
            None => BTreeMap::new(),
        };
        let mut put = |key: &str, value: Option<String>| {
            if let Some(v) = value {
                map.insert(key.to_string(), v);
            }
        };
        put("experiment", self.experiment);
        put("system", self.system);
        put("f", self.f);
        put("mode", self.mode);
        put("x", self.x.map(|v| v.to_string()));
        put("n", self.n.map(|v| v.to_string()));
        put("n-grid", self.n_grid);
        put("replicas", self.replicas.map(|v| v.to_string()));
        put("samples", self.samples.map(|v| v.to_string()));
        put("seed", self.seed.map(|v| v.to_string()));
        put("out", self.out.map(|v| v.display().to_string()));
        put("workers", self.workers.map(|v| v.to_string()));
        put("max-lag", self.max_lag.map(|v| v.to_string()));
        put("t", self.t.map(|v| v.to_string()));
        put("dt", self.dt.map(|v| v.to_string()));
        put("h", self.h.map(|v| v.to_string()));
        put("x-max", self.x_max.map(|v| v.to_string()));
        put("ks-flt-max", self.ks_flt_max.map(|v| v.to_string()));
        put("ks-self-max", self.ks_self_max.map(|v| v.to_string()));
        put("rms-max", self.rms_max.map(|v| v.to_string()));
        Ok(map)
    }
}

fn run(args: RunArgs) -> Result<bool, CliError> {
    let config = RunConfig::resolve(args.into_map()?)?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| CliError::Config(format!("cannot build worker pool: {e}")))?;
    let output = pool.install(|| run_experiment(&config))?;

    let out_dir = &config.out;
    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", out_dir.display())))?;
    let write = |name: &str, contents: &str| -> Result<(), CliError> {
        let path = out_dir.join(name);
        std::fs::write(&path, contents)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
        eprintln!("wrote {}", path.display());
        Ok(())
    };
    write("report.json", &output.report.to_json())?;
    write("report.txt", &output.report.render_text())?;
    for (name, contents) in &output.files {
        write(name, contents)?;
    }

    print!("{}", output.report.render_text());
    Ok(output.report.all_passed())
}

fn presets() {
    for entry in catalog() {
        println!("{}\n    {}\n    {}", entry.name, entry.summary, entry.note);
    }
}

fn report(path: &PathBuf) -> Result<(), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let parsed = ExperimentReport::from_json(&text)
        .map_err(|e| CliError::Config(format!("{} is not a report: {e}", path.display())))?;
    print!("{}", parsed.render_text());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => run(*args),
        Command::Presets => {
            presets();
            Ok(true)
        }
        Command::Report { path } => report(&path).map(|_| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{e}");
            match e {
                CliError::Config(_) => ExitCode::from(2),
                CliError::Io(_) => ExitCode::from(3),
            }
        }
    }
}
