use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use nfl_core::bounds::{
    bistochastic_analytic_bound, bistochastic_mc_bound, bound_curve, classical_stochastic_bound, quantum_nfl_bound,
    rank_threshold_curve, stochastic_f, stochastic_f_monte_carlo, BoundCurve, BoundKind, McParams, DEFAULT_N_MATRICES,
};
use nfl_core::experiments::{bounds_csv, format_float, run_sweep, to_json_string, write_result, ExperimentConfig};
use nfl_core::sampling::haar_trace_moments;
use nfl_core::{NflError, OutputFormat, SeedSpec};

use crate::args::{
    BoundsArgs, ClassicalMcArgs, Command, Format, McKind, SweepArgs, ThresholdsArgs, VerifyHaarArgs, SEED_ENV,
};

/// Phase used for the rotated trace moments.
const PHI: f64 = 0.7;
/// Largest tolerated |z| in `verify-haar`.
const Z_LIMIT: f64 = 4.0;
const MIN_HAAR_SAMPLES: usize = 1000;

/// Failure of a subcommand: invalid input exits with 1, anything else with 2.
#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(m) | CliError::Runtime(m) => f.write_str(m),
        }
    }
}

impl From<NflError> for CliError {
    fn from(e: NflError) -> Self {
        match e {
            NflError::ConfigInvalid { .. }
            | NflError::InvalidArgs(_)
            | NflError::InvalidDimension(_)
            | NflError::DegenerateSplit { .. }
            | NflError::RankOutOfRange { .. }
            | NflError::OrthonormalOverflow { .. }
            | NflError::DimensionMismatch(_)
            | NflError::EmptyInput => CliError::Invalid(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

type CliResult = Result<(), CliError>;

pub fn run(command: Command) -> CliResult {
    match command {
        Command::Bounds(a) => bounds(a),
        Command::Sweep(a) => sweep(a),
        Command::VerifyHaar(a) => verify_haar(a),
        Command::ClassicalMc(a) => classical_mc(a),
        Command::Thresholds(a) => thresholds(a),
    }
}

/// Master seed for Monte Carlo pieces of commands without a `--seed` flag.
fn env_seed() -> Result<u64, CliError> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Invalid(format!("{SEED_ENV}={v} is not an unsigned integer"))),
        Err(_) => Ok(0),
    }
}

fn emit(out: Option<&Path>, text: &str) -> CliResult {
    match out {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            fs::write(path, text)?;
        }
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn parse_kinds(names: &[String]) -> Result<Vec<BoundKind>, CliError> {
    let mut kinds = Vec::new();
    for name in names {
        let expanded: Vec<BoundKind> = match name.as_str() {
            "all-closed-form" => BoundKind::CLOSED_FORM.to_vec(),
            "all" => BoundKind::ALL.to_vec(),
            other => vec![other.parse()?],
        };
        for k in expanded {
            if !kinds.contains(&k) {
                kinds.push(k);
            }
        }
    }
    Ok(kinds)
}

fn bounds(a: BoundsArgs) -> CliResult {
    let kinds = parse_kinds(&a.kinds)?;
    let ts: Vec<usize> = (0..=a.t_max.unwrap_or(a.d)).collect();
    let classical_ts: Vec<usize> = ts.iter().copied().filter(|&t| t <= a.d).collect();
    let mc = McParams {
        n_matrices: DEFAULT_N_MATRICES,
        seed: SeedSpec::new(env_seed()?, 0),
    };
    let curves = kinds
        .into_iter()
        .map(|kind| {
            let ts = if kind.is_classical() { &classical_ts } else { &ts };
            bound_curve(kind, a.d, a.r, ts, Some(mc))
        })
        .collect::<nfl_core::Result<Vec<BoundCurve>>>()?;
    let text = match a.format {
        Format::Csv => bounds_csv(&curves),
        Format::Json => to_json_string(&curves)?,
    };
    emit(a.out.as_deref(), &text)
}

fn sweep(a: SweepArgs) -> CliResult {
    let text = fs::read_to_string(&a.config)
        .map_err(|e| CliError::Invalid(format!("cannot read config {}: {e}", a.config.display())))?;
    let fallback = std::env::var(SEED_ENV).ok().map(|_| env_seed()).transpose()?;
    let cfg = ExperimentConfig::from_json_str(&text, fallback)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    let res = pool.install(|| run_sweep(&cfg))?;

    println!(
        "{:>4} {:>4} {:>12} {:>12} {:>12} {:>12} {:>8} {:>6}",
        "r", "t", "mean_risk", "stderr", "sample_std", "bound", "z", "nonconv"
    );
    let mut within = 0;
    for g in &res.grid {
        let bound = quantum_nfl_bound(cfg.d, g.r, g.t)?;
        let dev = g.mean_risk - bound;
        let z = if g.stderr > 0.0 { dev / g.stderr } else { 0.0 };
        if dev.abs() <= 3.0 * g.stderr + 1e-10 {
            within += 1;
        }
        println!(
            "{:>4} {:>4} {:>12.6} {:>12.3e} {:>12.3e} {:>12.6} {:>8.2} {:>6}",
            g.r, g.t, g.mean_risk, g.stderr, g.sample_std, bound, z, g.non_converged
        );
    }
    println!(
        "{within}/{} grid points within 3 stderr of the quantum bound",
        res.grid.len()
    );

    for format in [OutputFormat::Json, OutputFormat::Csv] {
        for path in write_result(&res, format)? {
            println!("wrote {}", path.display());
        }
    }
    println!("wall time {:.2} s", res.wall_time_seconds);
    Ok(())
}

fn verify_haar(a: VerifyHaarArgs) -> CliResult {
    if a.samples < MIN_HAAR_SAMPLES {
        return Err(CliError::Invalid(format!(
            "--samples must be at least {MIN_HAAR_SAMPLES}, got {}",
            a.samples
        )));
    }
    let moments = haar_trace_moments(a.d, a.samples, SeedSpec::new(a.seed, 0), PHI)?;
    println!("d = {}, samples = {}, phi = {PHI}", a.d, a.samples);
    println!(
        "{:<22} {:>8} {:>12} {:>12} {:>8}",
        "moment", "exact", "mean", "stderr", "z"
    );
    let mut worst: f64 = 0.0;
    for m in &moments {
        println!(
            "{:<22} {:>8.4} {:>12.6} {:>12.3e} {:>8.2}",
            m.name, m.exact, m.mean, m.stderr, m.z
        );
        worst = worst.max(m.z.abs());
    }
    if worst > Z_LIMIT {
        return Err(CliError::Runtime(format!("largest |z| = {worst:.2} exceeds {Z_LIMIT}")));
    }
    println!("all |z| <= {Z_LIMIT}");
    Ok(())
}

fn classical_mc(a: ClassicalMcArgs) -> CliResult {
    let seed = SeedSpec::new(a.seed, 0);
    match a.kind {
        McKind::Bistochastic => {
            let (value, stderr) = bistochastic_mc_bound(a.d, a.t, a.matrices, seed)?;
            println!("kind classical_bistochastic_mc");
            println!("d {}", a.d);
            println!("t {}", a.t);
            println!("matrices {}", a.matrices);
            println!("value {}", format_float(value));
            println!("stderr {}", format_float(stderr));
            println!(
                "analytic_lower_bound {}",
                format_float(bistochastic_analytic_bound(a.d, a.t)?)
            );
            println!(
                "stochastic_bound {}",
                format_float(classical_stochastic_bound(a.d, a.t)?)
            );
        }
        McKind::StochasticOracle => {
            let (estimate, stderr) = stochastic_f_monte_carlo(a.d, a.matrices, seed)?;
            let exact = stochastic_f(a.d)?;
            let z = if stderr > 0.0 { (estimate - exact) / stderr } else { 0.0 };
            println!("kind stochastic_oracle");
            println!("d {}", a.d);
            println!("samples {}", a.matrices);
            println!("estimate {}", format_float(estimate));
            println!("stderr {}", format_float(stderr));
            println!("closed_form {}", format_float(exact));
            println!("z {z:.3}");
        }
    }
    Ok(())
}

pub const THRESHOLD_KINDS: [BoundKind; 4] = [
    BoundKind::ClassicalPermutation,
    BoundKind::ClassicalDeterministic,
    BoundKind::ClassicalBistochasticMc,
    BoundKind::ClassicalStochastic,
];

fn thresholds(a: ThresholdsArgs) -> CliResult {
    let t_max = a.t_max.unwrap_or(a.d);
    let mc = McParams {
        n_matrices: DEFAULT_N_MATRICES,
        seed: SeedSpec::new(env_seed()?, 0),
    };
    let mut text = String::from("kind,d,t,threshold_real,threshold_ceil\n");
    for kind in THRESHOLD_KINDS {
        for (t, r) in rank_threshold_curve(kind, a.d, t_max, Some(mc))? {
            text.push_str(&format!("{kind},{},{t},{},{}\n", a.d, format_float(r), r.ceil() as u64));
        }
    }
    emit(a.out.as_deref(), &text)
}
