use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use noisy_cluster::bounds::TemperatureBounds;
use noisy_cluster::experiments::ExperimentStats;
use noisy_cluster::experiments::{
    fidelity_fit, oracle::oracle_verify, run_trials, temperature_report, threshold_scan,
    with_workers, write_csv, CsvRow, FitCell, ScanConfig, ScanStatus, Summary,
};
use noisy_cluster::lattice::{LatticeSpec, Sector};
use noisy_cluster::noise::{NoiseKind, NoiseModel};
use noisy_cluster::Error;

#[derive(Parser)]
#[command(
    name = "noisy-cluster",
    version,
    about = "Error correction on noisy 3D cluster states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Failure-curve crossings over a range of sizes
    Threshold(Common),
    /// Fidelity grid over sizes and the finite-size fit
    Fidelity(Common),
    /// Failure rates at one size and error rate
    Trial(Common),
    /// Separability threshold and temperature bounds
    Bounds(Common),
    /// Stabilizer oracle against the decoder model
    OracleVerify(OracleArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Boundary {
    Planar,
    Toric,
}

#[derive(Clone, Copy, ValueEnum)]
enum Noise {
    Z,
    DepolBcc,
}

impl From<Noise> for NoiseKind {
    fn from(n: Noise) -> Self {
        match n {
            Noise::Z => NoiseKind::DephasingZ,
            Noise::DepolBcc => NoiseKind::DepolarizingBcc,
        }
    }
}

#[derive(Args)]
struct Common {
    /// Sizes: `l` for planar lattices, `L` (with `l = 2L`) for toric ones
    #[arg(long, value_delimiter = ',')]
    l: Vec<usize>,
    /// Depths: `d` for planar, `d_toric` (with `d = 2 d_toric + 1`) for toric
    #[arg(long, value_delimiter = ',')]
    d: Vec<usize>,
    #[arg(long)]
    p: Option<f64>,
    /// Evenly spaced grid `start:end:count`
    #[arg(long)]
    p_grid: Option<String>,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Boundary::Toric)]
    boundary: Boundary,
    #[arg(long, value_enum, default_value_t = Noise::Z)]
    noise: Noise,
    /// Gap used for temperature conversions
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
    /// CSV output; the JSON summary goes next to it
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, default_value_t = 3)]
    l: usize,
    #[arg(long, default_value_t = 3)]
    d: usize,
    #[arg(long, default_value_t = 100)]
    branches: u64,
    #[arg(long, default_value_t = 200)]
    error_sets: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

type CliResult<T> = Result<T, Error>;

fn parse_grid(s: &str) -> CliResult<Vec<f64>> {
    let bad = || Error::InvalidArgument(format!("bad grid `{s}`, expected start:end:count"));
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let a: f64 = parts[0].parse().map_err(|_| bad())?;
    let b: f64 = parts[1].parse().map_err(|_| bad())?;
    let n: usize = parts[2].parse().map_err(|_| bad())?;
    if n < 2 {
        return Err(bad());
    }
    Ok((0..n)
        .map(|k| a + (b - a) * k as f64 / (n - 1) as f64)
        .collect())
}

impl Common {
    fn kind(&self) -> NoiseKind {
        self.noise.into()
    }

    /// Pairs `--l` with `--d`; a missing depth defaults to `d = l`
    /// (planar) or `d_toric = L` (toric).
    fn specs(&self) -> CliResult<Vec<LatticeSpec>> {
        if self.l.is_empty() {
            return Err(Error::InvalidArgument("--l is required".into()));
        }
        let depths: Vec<usize> = match self.d.len() {
            0 => self.l.clone(),
            1 => vec![self.d[0]; self.l.len()],
            n if n == self.l.len() => self.d.clone(),
            _ => {
                return Err(Error::InvalidArgument(
                    "--d must have one value or one per --l".into(),
                ))
            }
        };
        self.l
            .iter()
            .zip(depths)
            .map(|(&l, d)| self.spec(l, d))
            .collect()
    }

    fn spec(&self, l: usize, d: usize) -> CliResult<LatticeSpec> {
        match self.boundary {
            Boundary::Planar => LatticeSpec::planar(l, d),
            Boundary::Toric => LatticeSpec::toric(l, d),
        }
    }

    fn grid(&self) -> CliResult<Vec<f64>> {
        match (&self.p_grid, self.p) {
            (Some(g), _) => parse_grid(g),
            (None, Some(p)) => Ok(vec![p]),
            (None, None) => Err(Error::InvalidArgument("--p or --p-grid is required".into())),
        }
    }
}

fn summary_path(out: &Path) -> PathBuf {
    out.with_extension("summary.json")
}

fn emit(summary: &Summary, rows: &[CsvRow], out: Option<&Path>) -> CliResult<()> {
    if let Some(path) = out {
        write_csv(path, rows)?;
        summary.write(&summary_path(path))?;
    }
    println!("{}", serde_json::to_string_pretty(summary)?);
    Ok(())
}

fn print_stats(s: &ExperimentStats) {
    eprintln!(
        "{} p={:.4}: To {}/{} ({:.5} ± {:.5}), Te {}/{} ({:.5} ± {:.5}), F={:.5}",
        s.spec,
        s.model.rate,
        s.fail_to,
        s.trials,
        s.fail_rate(Sector::To),
        s.stderr(Sector::To),
        s.fail_te,
        s.trials,
        s.fail_rate(Sector::Te),
        s.stderr(Sector::Te),
        s.fidelity()
    );
}

fn cmd_trial(a: &Common) -> CliResult<ExitCode> {
    let specs = a.specs()?;
    let grid = a.grid()?;
    let mut rows = Vec::new();
    for spec in &specs {
        for &p in &grid {
            let model = NoiseModel::new(a.kind(), p)?;
            let stats = with_workers(a.workers, || run_trials(spec, &model, a.trials, a.seed))??;
            print_stats(&stats);
            rows.push(CsvRow::from_stats(&format!("trial-{}", rows.len()), &stats));
        }
    }
    emit(&Summary::new("trial", a.seed), &rows, a.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_threshold(a: &Common) -> CliResult<ExitCode> {
    let cfg = ScanConfig::new(a.specs()?, a.grid()?, a.kind(), a.trials, a.seed);
    cfg.validate()?;
    let est = with_workers(a.workers, || threshold_scan(&cfg))??;
    let mut rows = Vec::new();
    for curve in &est.curves {
        for pt in curve {
            print_stats(&pt.stats);
            rows.push(CsvRow::from_stats(
                &format!("threshold-{}", rows.len()),
                &pt.stats,
            ));
        }
    }
    let mut summary = Summary::new("threshold", a.seed);
    summary.threshold = Some((&est).into());
    if let Some(p) = est.estimate {
        // the temperature map is defined for the dephasing rate
        let p_z = NoiseModel::new(a.kind(), p)?.edge_flip_rate();
        let ci = est.ci.map(|(lo, hi)| {
            let m = |x| {
                NoiseModel::new(a.kind(), x)
                    .map(|n| n.edge_flip_rate())
                    .unwrap_or(x)
            };
            (m(lo), m(hi))
        });
        summary.temperature = Some(temperature_report(p_z, ci, a.delta)?);
    }
    emit(&summary, &rows, a.out.as_deref())?;
    Ok(match est.status {
        ScanStatus::Found => ExitCode::SUCCESS,
        ScanStatus::Inconclusive => {
            eprintln!("no crossing in the grid: inconclusive");
            ExitCode::from(3)
        }
    })
}

fn cmd_fidelity(a: &Common) -> CliResult<ExitCode> {
    if !matches!(a.boundary, Boundary::Toric) {
        return Err(Error::InvalidArgument(
            "the fidelity fit uses toric lattices".into(),
        ));
    }
    let p = a.p.unwrap_or(0.01);
    let model = NoiseModel::new(a.kind(), p)?;
    let depths = if a.d.is_empty() {
        vec![4, 8, 16]
    } else {
        a.d.clone()
    };
    let sizes = if a.l.is_empty() {
        vec![3, 4, 5, 6]
    } else {
        a.l.clone()
    };
    let mut rows = Vec::new();
    let mut cells = Vec::new();
    for &big_l in &sizes {
        for &d_toric in &depths {
            let spec = a.spec(big_l, d_toric)?;
            let stats = with_workers(a.workers, || run_trials(&spec, &model, a.trials, a.seed))??;
            print_stats(&stats);
            cells.push(FitCell {
                big_l,
                d_toric,
                fidelity: stats.fidelity(),
                fidelity_stderr: stats.fidelity_stderr(),
            });
            rows.push(CsvRow::from_stats(
                &format!("fidelity-{}", rows.len()),
                &stats,
            ));
        }
    }
    let mut summary = Summary::new("fidelity", a.seed);
    match fidelity_fit(&cells) {
        Ok(fit) => summary.fit = Some((&fit).into()),
        Err(e) => {
            emit(&summary, &rows, a.out.as_deref())?;
            eprintln!("fit failed: {e}");
            return Ok(ExitCode::from(3));
        }
    }
    emit(&summary, &rows, a.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_bounds(a: &Common) -> CliResult<ExitCode> {
    let b = TemperatureBounds::compute(a.p.unwrap_or(0.033), a.delta)?;
    let text = serde_json::to_string_pretty(&b)?;
    if let Some(path) = &a.out {
        std::fs::write(path, &text)?;
    }
    println!("{text}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_oracle(a: &OracleArgs) -> CliResult<ExitCode> {
    let spec = LatticeSpec::planar(a.l, a.d)?;
    let rep = oracle_verify(&spec, a.branches, a.error_sets, a.seed)?;
    println!("{}", serde_json::to_string_pretty(&rep)?);
    Ok(if rep.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let res = match &cli.command {
        Command::Threshold(a) => cmd_threshold(a),
        Command::Fidelity(a) => cmd_fidelity(a),
        Command::Trial(a) => cmd_trial(a),
        Command::Bounds(a) => cmd_bounds(a),
        Command::OracleVerify(a) => cmd_oracle(a),
    };
    match res {
        Ok(code) => code,
        Err(e @ (Error::InvalidArgument(_) | Error::InvalidSpec(_) | Error::TooLarge { .. })) => {
            eprintln!("configuration error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
