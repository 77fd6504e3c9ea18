//! Argument definitions and subcommand drivers.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rkeig_core::io::{
    read_csv_matrix, read_csv_vector, read_matrix_market, write_csv_matrix, write_csv_vector,
};
use rkeig_core::{
    jacobi_evd, locate_update, parse_signs, update_decomposition_with, JacobiConfig, Locator,
    LowRankUpdate, Sign, SpectralDecomposition, UpdateOptions,
};
use serde::Serialize;

use crate::bench::{run_bench, BenchConfig, Method, Timing};
use crate::compare::{parse_ranks, run_compare, CompareConfig};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "rkeig",
    version,
    about = "Update a symmetric eigendecomposition under a signed low-rank change"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Update an eigendecomposition and write the new eigenpairs.
    Update(UpdateArgs),
    /// Print how many new eigenvalues fall between consecutive old ones.
    Locate(LocateArgs),
    /// Time the methods over a range of sizes and fit exponents.
    Bench(BenchArgs),
    /// Accuracy of the update, perturbation and direct solve across ranks.
    Compare(CompareArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Matrix Market file with `A`; it is decomposed first.
    #[arg(
        long,
        value_name = "MTX",
        required_unless_present = "eigen",
        conflicts_with = "eigen"
    )]
    pub matrix: Option<PathBuf>,
    /// Eigenvectors (columns) and eigenvalues of `A`.
    #[arg(long, num_args = 2, value_names = ["Q_CSV", "LAMBDA_CSV"])]
    pub eigen: Option<Vec<PathBuf>>,
    /// CSV with the n x k update factor `K`.
    #[arg(long, value_name = "K_CSV")]
    pub update: PathBuf,
    /// Signs of the columns of `K`, e.g. `+,-`; overrides the file comment.
    #[arg(long, allow_hyphen_values = true)]
    pub signs: Option<String>,
}

#[derive(Debug, Args)]
pub struct UpdateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Absolute root tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Output prefix for `<prefix>_lambda.csv` and `<prefix>_q.csv`.
    #[arg(long, default_value = "rkeig")]
    pub out: PathBuf,
    #[arg(long)]
    pub parallel: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum LocatorArg {
    Auto,
    Sturm,
}

#[derive(Debug, Args)]
pub struct LocateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value_t = LocatorArg::Auto)]
    pub locator: LocatorArg,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "50,100,200,400")]
    pub sizes: Vec<usize>,
    /// Rank for the rank-k methods; the rank-2 arms always use 2.
    #[arg(long, default_value_t = 2)]
    pub rank: usize,
    #[arg(long, default_value_t = 3)]
    pub trials: usize,
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_value = "rank1_twice,rank2,direct_evd"
    )]
    pub methods: Vec<Method>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Frobenius norm of the generated update.
    #[arg(long, default_value_t = 1.0)]
    pub norm: f64,
    /// Records CSV; the exponent fits go to `<stem>_fit.csv` beside it.
    #[arg(long, default_value = "bench.csv")]
    pub out: PathBuf,
    #[arg(long)]
    pub parallel: bool,
    /// Time the eigenvalue update alone, or eigenvalues and eigenvectors.
    #[arg(long, value_enum, default_value_t = Timing::Eigenvalues)]
    pub timing: Timing,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    /// `a..b`, `a..=b` or a comma list.
    #[arg(long, default_value = "1..10")]
    pub ranks: String,
    #[arg(long, default_value_t = 0.01)]
    pub norm: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "compare.csv")]
    pub out: PathBuf,
    #[arg(long)]
    pub parallel: bool,
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Update(a) => cmd_update(&a),
        Command::Locate(a) => cmd_locate(&a),
        Command::Bench(a) => cmd_bench(&a),
        Command::Compare(a) => cmd_compare(&a),
    }
}

fn open(path: &Path) -> Result<File, CliError> {
    File::open(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Output(format!("{}: {e}", path.display())))
}

fn in_file<T>(path: &Path, r: rkeig_core::Result<T>) -> Result<T, CliError> {
    r.map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Decomposition and update named by the input flags.
pub fn load_inputs(args: &InputArgs) -> Result<(SpectralDecomposition, LowRankUpdate), CliError> {
    let d = match (&args.matrix, &args.eigen) {
        (Some(m), _) => {
            let a = in_file(m, read_matrix_market(open(m)?))?;
            jacobi_evd(&a, JacobiConfig::default())?
        }
        (None, Some(files)) => {
            let (q, _) = in_file(&files[0], read_csv_matrix(open(&files[0])?))?;
            let lambda = in_file(&files[1], read_csv_vector(open(&files[1])?))?;
            SpectralDecomposition::new(q, lambda).map_err(|e| CliError::Input(e.to_string()))?
        }
        (None, None) => {
            return Err(CliError::Usage(
                "one of --matrix or --eigen is required".into(),
            ))
        }
    };
    let (k, file_signs) = in_file(&args.update, read_csv_matrix(open(&args.update)?))?;
    let signs = match &args.signs {
        Some(s) => parse_signs(s).map_err(|e| CliError::Usage(e.to_string()))?,
        None => file_signs.unwrap_or_else(|| vec![Sign::Plus; k.ncols()]),
    };
    let u = LowRankUpdate::new(k, signs).map_err(|e| CliError::Input(e.to_string()))?;
    if u.dim() != d.dim() {
        return Err(CliError::Input(format!(
            "update has {} rows but the matrix is {}x{}",
            u.dim(),
            d.dim(),
            d.dim()
        )));
    }
    Ok((d, u))
}

/// `<prefix><suffix>`, keeping the prefix's directory.
pub fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

#[derive(Serialize)]
struct UpdateSummary {
    n: usize,
    k: usize,
    residual_fro: f64,
    ortho_err: f64,
    wall_time: f64,
}

fn cmd_update(args: &UpdateArgs) -> Result<(), CliError> {
    let (d, u) = load_inputs(&args.input)?;
    let opts = UpdateOptions {
        tol: args.tol,
        parallel: args.parallel,
        ..Default::default()
    };
    let r = update_decomposition_with(&d, &u, &opts)?;
    let lambda_path = with_suffix(&args.out, "_lambda.csv");
    let q_path = with_suffix(&args.out, "_q.csv");
    write_csv_vector(create(&lambda_path)?, r.decomposition.eigenvalues())
        .map_err(|e| CliError::Output(format!("{}: {e}", lambda_path.display())))?;
    write_csv_matrix(create(&q_path)?, r.decomposition.q(), None)
        .map_err(|e| CliError::Output(format!("{}: {e}", q_path.display())))?;
    let summary = UpdateSummary {
        n: d.dim(),
        k: u.rank(),
        residual_fro: r.residual_fro,
        ortho_err: r.ortho_err,
        wall_time: r.wall_time,
    };
    println!(
        "{}",
        serde_json::to_string(&summary).map_err(|e| CliError::Output(e.to_string()))?
    );
    Ok(())
}

#[derive(Serialize)]
struct LocateSummary<'a> {
    poles: &'a [f64],
    counts: &'a [usize],
}

fn cmd_locate(args: &LocateArgs) -> Result<(), CliError> {
    let (d, u) = load_inputs(&args.input)?;
    let locator = match args.locator {
        LocatorArg::Auto => Locator::Auto,
        LocatorArg::Sturm => Locator::Sturm,
    };
    let (poles, loc) = locate_update(&d, &u, locator)?;
    let s = LocateSummary {
        poles: &poles,
        counts: loc.counts(),
    };
    println!(
        "{}",
        serde_json::to_string(&s).map_err(|e| CliError::Output(e.to_string()))?
    );
    Ok(())
}

fn write_rows<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), CliError> {
    let err = |e: csv::Error| CliError::Output(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_writer(create(path)?);
    for r in rows {
        w.serialize(r).map_err(err)?;
    }
    w.flush()
        .map_err(|e| CliError::Output(format!("{}: {e}", path.display())))
}

/// `dir/bench.csv` becomes `dir/bench_fit.csv`.
pub fn fit_path(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    out.with_file_name(format!("{stem}_fit.csv"))
}

fn cmd_bench(args: &BenchArgs) -> Result<(), CliError> {
    let cfg = BenchConfig {
        sizes: args.sizes.clone(),
        rank: args.rank,
        trials: args.trials,
        methods: args.methods.clone(),
        seed: args.seed,
        norm: args.norm,
        parallel: args.parallel,
        timing: args.timing,
    };
    let start = Instant::now();
    let report = run_bench(&cfg)?;
    write_rows(&args.out, &report.records)?;
    let rows = report.fit_rows(cfg.rank);
    let stderr = std::io::stderr();
    let mut log = stderr.lock();
    for (m, f) in &report.fits {
        let _ = match f {
            Some(f) => writeln!(log, "{m}: p = {:.3} (r2 = {:.3})", f.p, f.r2),
            None => writeln!(log, "{m}: exponent fit needs at least 3 sizes"),
        };
    }
    if !rows.is_empty() {
        write_rows(&fit_path(&args.out), &rows)?;
    }
    let _ = writeln!(
        log,
        "bench finished in {:.2} s",
        start.elapsed().as_secs_f64()
    );
    Ok(())
}

fn cmd_compare(args: &CompareArgs) -> Result<(), CliError> {
    let cfg = CompareConfig {
        n: args.n,
        ranks: parse_ranks(&args.ranks)?,
        norm: args.norm,
        seed: args.seed,
        parallel: args.parallel,
    };
    let rows = run_compare(&cfg)?;
    write_rows(&args.out, &rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn argument_definitions_are_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn output_paths() {
        assert_eq!(
            with_suffix(Path::new("out/run"), "_q.csv"),
            PathBuf::from("out/run_q.csv")
        );
        assert_eq!(
            fit_path(Path::new("res/bench.csv")),
            PathBuf::from("res/bench_fit.csv")
        );
    }

    #[test]
    fn bench_methods_parse_from_a_list() {
        let cli = Cli::try_parse_from([
            "rkeig",
            "bench",
            "--methods",
            "rank2,rank_k_sturm",
            "--sizes",
            "10,20",
        ])
        .unwrap();
        match cli.command {
            Command::Bench(b) => {
                assert_eq!(b.methods, vec![Method::Rank2, Method::RankKSturm]);
                assert_eq!(b.sizes, vec![10, 20]);
            }
            _ => panic!("expected bench"),
        }
    }

    #[test]
    fn update_requires_an_update_file() {
        let e = Cli::try_parse_from(["rkeig", "update", "--matrix", "a.mtx"]).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }
}
