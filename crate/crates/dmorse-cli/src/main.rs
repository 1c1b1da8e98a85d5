//! Command-line front end: validation, Morse matrices, cancellation with
//! fast updates checked against re-enumeration, matrix-fixture pivots,
//! integer homology, corpus generation and benchmarking.
//!
//! Exit codes: 0 success, 1 domain failure (validation, non-gradient input,
//! non-cancellable pair, fast/oracle mismatch), 2 I/O or parse failure.

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use dmorse::cancel::{
    apply_cancellation, cancel_pair, find_cancellable_pairs, fixture_pivot_update,
    make_cancellable_pair, CancellablePair,
};
use dmorse::complex::{Simplex, SimplicialComplex};
use dmorse::gvf::{
    closed_trajectory, critical_simplices, trajectory_aggregate, DiscreteVectorField,
    MatchingFile, MatchingFileError,
};
use dmorse::homology::{morse_homology, simplicial_homology, HomologyGroup};
use dmorse::matrix::IntegerMatrix;
use dmorse::morse::{morse_boundary_matrix, morse_coboundary_matrix, MorseComplexData};

#[derive(Parser)]
#[command(name = "dmorse", version, about = "Discrete Morse theory toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a matching against a complex and test acyclicity.
    Check(CheckArgs),
    /// Emit Morse boundary and coboundary matrices.
    Morse(MorseArgs),
    /// Cancel one critical pair, or greedily cancel until none remains.
    Cancel(CancelArgs),
    /// Apply pivot updates to a boundary-matrix fixture.
    FixtureUpdate(FixtureUpdateArgs),
    /// Integer homology, simplicial and (optionally) Morse.
    Homology(HomologyArgs),
    /// Time fast updates against re-enumeration over a random corpus.
    Bench(BenchArgs),
    /// Write a random corpus of complexes with greedy matchings.
    Gen(GenArgs),
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    complex: PathBuf,
    #[arg(long)]
    matching: PathBuf,
}

#[derive(Args)]
struct MorseArgs {
    #[arg(long)]
    complex: PathBuf,
    #[arg(long)]
    matching: PathBuf,
    /// Dimensions to emit; all of 0..=dim+1 when omitted.
    #[arg(long = "dim")]
    dims: Vec<i64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CancelArgs {
    #[arg(long)]
    complex: PathBuf,
    #[arg(long)]
    matching: PathBuf,
    /// JSON pair spec: {"sigma0": [vertices], "tau0": [vertices]}.
    #[arg(long, conflicts_with = "auto")]
    pair: Option<PathBuf>,
    /// Greedily cancel first-found pairs until none remains.
    #[arg(long)]
    auto: bool,
    /// Matrices via the closed-form updates only.
    #[arg(long, conflicts_with_all = ["oracle", "both"])]
    fast: bool,
    /// Matrices via trajectory re-enumeration only.
    #[arg(long, conflicts_with = "both")]
    oracle: bool,
    /// Run both routes and fail on any mismatch (the default).
    #[arg(long)]
    both: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FixtureUpdateArgs {
    /// Matrix JSON file ({"rows": ..., "cols": ..., "entries": ...}).
    #[arg(long)]
    matrix: PathBuf,
    /// Pivot per cancellation, in order: either "ROW_LABEL,COL_LABEL" inline
    /// or a path to a JSON file {"row0": "...", "col0": "..."}. Orientation
    /// is detected, so transposed fixtures work unchanged.
    #[arg(long = "pivot", required = true)]
    pivots: Vec<String>,
    /// Print the elementary row operations of each update to stderr.
    #[arg(long)]
    trace: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct HomologyArgs {
    #[arg(long)]
    complex: PathBuf,
    #[arg(long)]
    matching: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 50)]
    instances: usize,
    #[arg(long, default_value_t = 3)]
    max_dim: usize,
    #[arg(long, default_value_t = 12)]
    max_vertices: usize,
    /// Worker threads for the instance fan-out (0 = rayon default).
    #[arg(long, default_value_t = 0)]
    workers: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    instances: usize,
    #[arg(long, default_value_t = 3)]
    max_dim: usize,
    #[arg(long, default_value_t = 12)]
    max_vertices: usize,
    /// Output directory for inst_NNN.complex.json / inst_NNN.matching.json.
    #[arg(long)]
    out: PathBuf,
}

/// Domain failures exit 1, I/O and parse failures exit 2.
enum CliError {
    Domain(String),
    Io(String),
}

impl CliError {
    fn domain(e: impl Display) -> Self {
        CliError::Domain(e.to_string())
    }

    fn io(e: impl Display) -> Self {
        CliError::Io(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check(args) => cmd_check(args),
        Command::Morse(args) => cmd_morse(args),
        Command::Cancel(args) => cmd_cancel(args),
        Command::FixtureUpdate(args) => cmd_fixture_update(args),
        Command::Homology(args) => cmd_homology(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Gen(args) => cmd_gen(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let raw = fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&raw).map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}

fn load_complex(path: &Path) -> Result<SimplicialComplex, CliError> {
    read_json(path)
}

fn load_field(
    complex: &SimplicialComplex,
    path: &Path,
) -> Result<DiscreteVectorField, CliError> {
    let file: MatchingFile = read_json(path)?;
    file.into_field(complex).map_err(|e| match e {
        MatchingFileError::BadSimplex(inner) => {
            CliError::io(format!("{}: {inner}", path.display()))
        }
        MatchingFileError::Invalid(inner) => CliError::domain(inner),
    })
}

fn require_gradient(
    complex: &SimplicialComplex,
    field: &DiscreteVectorField,
) -> Result<(), CliError> {
    match closed_trajectory(complex, field) {
        None => Ok(()),
        Some(witness) => Err(CliError::Domain(format!(
            "matching is not a gradient vector field; closed trajectory: {witness}"
        ))),
    }
}

fn write_output(out: &Option<PathBuf>, payload: &impl Serialize) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(payload).map_err(CliError::io)?;
    match out {
        Some(path) => fs::write(path, text + "\n")
            .map_err(|e| CliError::io(format!("{}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn cmd_check(args: CheckArgs) -> Result<(), CliError> {
    let complex = load_complex(&args.complex)?;
    let field = load_field(&complex, &args.matching)?;
    if let Some(witness) = closed_trajectory(&complex, &field) {
        println!("not a gradient vector field; closed trajectory witness:");
        println!("{witness}");
        return Err(CliError::Domain(
            "matching admits a nontrivial closed trajectory".into(),
        ));
    }
    println!("ok: matching is a gradient vector field");
    let counts: Vec<String> = (0..=complex.dim() as isize)
        .map(|q| format!("dim {q}: {}", critical_simplices(&complex, &field, q).len()))
        .collect();
    println!("critical cells: {}", counts.join(", "));
    Ok(())
}

/// One emitted dimension: the boundary matrix and its coboundary dual.
#[derive(Serialize, Deserialize)]
struct DimensionMatrices {
    q: i64,
    boundary: IntegerMatrix,
    coboundary: IntegerMatrix,
}

#[derive(Serialize, Deserialize)]
struct MatricesReport {
    matrices: Vec<DimensionMatrices>,
}

fn assemble_dims(
    complex: &SimplicialComplex,
    field: &DiscreteVectorField,
    dims: &[i64],
) -> Result<MatricesReport, CliError> {
    let mut matrices = Vec::new();
    for &q in dims {
        let boundary =
            morse_boundary_matrix(complex, field, q as isize).map_err(CliError::domain)?;
        let coboundary =
            morse_coboundary_matrix(complex, field, q as isize).map_err(CliError::domain)?;
        if coboundary != boundary.transpose() {
            return Err(CliError::Domain(format!(
                "coboundary at q={q} is not the transposed boundary; this is a bug"
            )));
        }
        matrices.push(DimensionMatrices {
            q,
            boundary,
            coboundary,
        });
    }
    Ok(MatricesReport { matrices })
}

fn cmd_morse(args: MorseArgs) -> Result<(), CliError> {
    let complex = load_complex(&args.complex)?;
    let field = load_field(&complex, &args.matching)?;
    require_gradient(&complex, &field)?;
    let dims: Vec<i64> = if args.dims.is_empty() {
        (0..=complex.dim() as i64 + 1).collect()
    } else {
        args.dims.clone()
    };
    let report = assemble_dims(&complex, &field, &dims)?;
    write_output(&args.out, &report)
}

/// Pair spec for `cancel --pair`: vertex lists of the two critical cells.
#[derive(Deserialize)]
struct PairSpec {
    sigma0: Vec<u32>,
    tau0: Vec<u32>,
}

#[derive(Serialize)]
struct CancelReport {
    cancelled: Vec<(String, String)>,
    matching: MatchingFile,
    critical: Vec<usize>,
    matrices: Vec<DimensionMatrices>,
}

fn first_cancellable(
    complex: &SimplicialComplex,
    field: &DiscreteVectorField,
) -> Result<Option<CancellablePair>, CliError> {
    for k in 1..=complex.dim() as isize {
        let pairs = find_cancellable_pairs(complex, field, k).map_err(CliError::domain)?;
        if let Some(pair) = pairs.into_iter().next() {
            return Ok(Some(pair));
        }
    }
    Ok(None)
}

fn cmd_cancel(args: CancelArgs) -> Result<(), CliError> {
    let complex = load_complex(&args.complex)?;
    let field = load_field(&complex, &args.matching)?;
    require_gradient(&complex, &field)?;
    let both = args.both || (!args.fast && !args.oracle);
    let use_fast = both || args.fast;
    let use_oracle = both || args.oracle;

    let mut current = field;
    let mut fast_data = if use_fast {
        Some(MorseComplexData::build(&complex, &current).map_err(CliError::domain)?)
    } else {
        None
    };
    let mut cancelled: Vec<(String, String)> = Vec::new();

    let mut queue: Vec<CancellablePair> = Vec::new();
    if let Some(pair_path) = &args.pair {
        let spec: PairSpec = read_json(pair_path)?;
        let sigma0 = Simplex::new(spec.sigma0).map_err(CliError::domain)?;
        let tau0 = Simplex::new(spec.tau0).map_err(CliError::domain)?;
        queue.push(
            make_cancellable_pair(&complex, &current, &sigma0, &tau0)
                .map_err(CliError::domain)?,
        );
    } else if !args.auto {
        return Err(CliError::Domain(
            "either --pair FILE or --auto is required".into(),
        ));
    }

    loop {
        let pair = match queue.pop() {
            Some(p) => p,
            None if args.auto => match first_cancellable(&complex, &current)? {
                Some(p) => p,
                None => break,
            },
            None => break,
        };
        let next = cancel_pair(&complex, &current, &pair).map_err(CliError::domain)?;
        if let Some(data) = fast_data.take() {
            let updated = apply_cancellation(&data, &pair).map_err(CliError::domain)?;
            if use_oracle {
                let oracle = MorseComplexData::build(&complex, &next).map_err(CliError::domain)?;
                if updated != oracle {
                    return Err(CliError::Domain(format!(
                        "fast update and re-enumeration disagree after cancelling {pair}"
                    )));
                }
            }
            fast_data = Some(updated);
        }
        cancelled.push((pair.sigma0.label(), pair.tau0.label()));
        current = next;
        if !args.auto {
            break;
        }
    }

    let final_data = match fast_data {
        Some(data) => data,
        None => MorseComplexData::build(&complex, &current).map_err(CliError::domain)?,
    };
    let dims: Vec<i64> = (0..=complex.dim() as i64 + 1).collect();
    let matrices: Vec<DimensionMatrices> = dims
        .iter()
        .map(|&q| DimensionMatrices {
            q,
            boundary: final_data.boundary(q as isize).expect("dim in range").clone(),
            coboundary: final_data.coboundary(q as isize).expect("dim in range").clone(),
        })
        .collect();
    let critical = (0..=complex.dim() as isize)
        .map(|q| critical_simplices(&complex, &current, q).len())
        .collect();
    let report = CancelReport {
        cancelled,
        matching: MatchingFile::from(&current),
        critical,
        matrices,
    };
    write_output(&args.out, &report)
}

fn cmd_fixture_update(args: FixtureUpdateArgs) -> Result<(), CliError> {
    let mut matrix: IntegerMatrix = read_json(&args.matrix)?;
    for pivot in &args.pivots {
        let (a, b) = parse_pivot(pivot)?;
        let (updated, trace) =
            fixture_pivot_update(&matrix, &a, &b).map_err(CliError::domain)?;
        if args.trace {
            eprintln!("pivot ({a}, {b}):");
            eprint!("{trace}");
        }
        matrix = updated;
    }
    write_output(&args.out, &matrix)
}

#[derive(Deserialize)]
struct LabelPivot {
    row0: String,
    col0: String,
}

fn parse_pivot(raw: &str) -> Result<(String, String), CliError> {
    if let Some((a, b)) = raw.split_once(',') {
        return Ok((a.trim().to_string(), b.trim().to_string()));
    }
    let pivot: LabelPivot = read_json(Path::new(raw))?;
    Ok((pivot.row0, pivot.col0))
}

fn homology_json(q: isize, group: &HomologyGroup) -> serde_json::Value {
    let torsion: Vec<serde_json::Number> = group
        .torsion
        .iter()
        .map(|t| {
            serde_json::Number::from_str(&t.to_string()).expect("integer literal parses")
        })
        .collect();
    serde_json::json!({ "q": q, "betti": group.betti, "torsion": torsion })
}

fn cmd_homology(args: HomologyArgs) -> Result<(), CliError> {
    let complex = load_complex(&args.complex)?;
    let dims: Vec<isize> = (0..=complex.dim() as isize).collect();
    let simplicial: Vec<HomologyGroup> = dims
        .iter()
        .map(|&q| simplicial_homology(&complex, q))
        .collect();
    let mut payload = serde_json::json!({
        "simplicial": dims
            .iter()
            .zip(&simplicial)
            .map(|(&q, g)| homology_json(q, g))
            .collect::<Vec<_>>(),
    });
    if let Some(matching) = &args.matching {
        let field = load_field(&complex, matching)?;
        require_gradient(&complex, &field)?;
        let mut morse = Vec::new();
        for &q in &dims {
            let group = morse_homology(&complex, &field, q).map_err(CliError::domain)?;
            if group != simplicial[q as usize] {
                return Err(CliError::Domain(format!(
                    "Morse homology {group} differs from simplicial {} at q={q}; this is a bug",
                    simplicial[q as usize]
                )));
            }
            morse.push(homology_json(q, &group));
        }
        payload["morse"] = serde_json::Value::Array(morse);
    }
    write_output(&args.out, &payload)
}

struct BenchRow {
    instance_id: usize,
    dim_k: isize,
    n_crit_k: usize,
    n_crit_km1: usize,
    traj_count: num_bigint::BigUint,
    fast_ns: u128,
    oracle_ns: u128,
    equal: bool,
}

fn bench_instance(
    inst: &dmorse::corpus::CorpusInstance,
) -> Result<Vec<BenchRow>, CliError> {
    let complex = &inst.complex;
    let field = &inst.field;
    let data = MorseComplexData::build(complex, field).map_err(CliError::domain)?;
    let mut rows = Vec::new();
    for k in 1..=complex.dim() as isize {
        let pairs = find_cancellable_pairs(complex, field, k).map_err(CliError::domain)?;
        if pairs.is_empty() {
            continue;
        }
        let sigmas = critical_simplices(complex, field, k);
        let taus = critical_simplices(complex, field, k - 1);
        let mut traj_count = num_bigint::BigUint::ZERO;
        for sigma in &sigmas {
            for tau in &taus {
                traj_count += trajectory_aggregate(complex, field, sigma, tau)
                    .map_err(CliError::domain)?
                    .path_count;
            }
        }
        for pair in pairs {
            let started = Instant::now();
            let fast = apply_cancellation(&data, &pair).map_err(CliError::domain)?;
            let fast_ns = started.elapsed().as_nanos();

            let cancelled = cancel_pair(complex, field, &pair).map_err(CliError::domain)?;
            let started = Instant::now();
            let mut oracle_slices = Vec::new();
            for q in k - 1..=k + 1 {
                oracle_slices.push((
                    morse_boundary_matrix(complex, &cancelled, q).map_err(CliError::domain)?,
                    morse_coboundary_matrix(complex, &cancelled, q).map_err(CliError::domain)?,
                ));
            }
            let oracle_ns = started.elapsed().as_nanos();

            let equal = (k - 1..=k + 1).zip(&oracle_slices).all(|(q, (b, c))| {
                fast.boundary(q).expect("dim in range") == b
                    && fast.coboundary(q).expect("dim in range") == c
            });
            if !equal {
                return Err(CliError::Domain(format!(
                    "instance {}: fast update and re-enumeration disagree for {pair}",
                    inst.id
                )));
            }
            rows.push(BenchRow {
                instance_id: inst.id,
                dim_k: k,
                n_crit_k: sigmas.len(),
                n_crit_km1: taus.len(),
                traj_count: traj_count.clone(),
                fast_ns,
                oracle_ns,
                equal,
            });
        }
    }
    Ok(rows)
}

fn cmd_bench(args: BenchArgs) -> Result<(), CliError> {
    if args.workers > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(args.workers)
            .build_global()
            .ok();
    }
    let corpus = dmorse::corpus::generate(&dmorse::corpus::CorpusParams {
        instances: args.instances,
        max_dim: args.max_dim,
        max_vertices: args.max_vertices,
        seed: args.seed,
    });
    use rayon::prelude::*;
    let per_instance: Vec<Result<Vec<BenchRow>, CliError>> =
        corpus.par_iter().map(bench_instance).collect();
    let mut csv = String::from(
        "instance_id,dim_k,n_crit_k,n_crit_km1,traj_count,fast_ns,oracle_ns,equal\n",
    );
    for rows in per_instance {
        for row in rows? {
            csv.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                row.instance_id,
                row.dim_k,
                row.n_crit_k,
                row.n_crit_km1,
                row.traj_count,
                row.fast_ns,
                row.oracle_ns,
                row.equal
            ));
        }
    }
    match &args.out {
        Some(path) => fs::write(path, csv)
            .map_err(|e| CliError::io(format!("{}: {e}", path.display()))),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

fn cmd_gen(args: GenArgs) -> Result<(), CliError> {
    fs::create_dir_all(&args.out)
        .map_err(|e| CliError::io(format!("{}: {e}", args.out.display())))?;
    let corpus = dmorse::corpus::generate(&dmorse::corpus::CorpusParams {
        instances: args.instances,
        max_dim: args.max_dim,
        max_vertices: args.max_vertices,
        seed: args.seed,
    });
    for inst in &corpus {
        let complex_path = args.out.join(format!("inst_{:03}.complex.json", inst.id));
        let matching_path = args.out.join(format!("inst_{:03}.matching.json", inst.id));
        let complex_json =
            serde_json::to_string_pretty(&inst.complex).map_err(CliError::io)?;
        fs::write(&complex_path, complex_json + "\n")
            .map_err(|e| CliError::io(format!("{}: {e}", complex_path.display())))?;
        let matching_json =
            serde_json::to_string_pretty(&MatchingFile::from(&inst.field)).map_err(CliError::io)?;
        fs::write(&matching_path, matching_json + "\n")
            .map_err(|e| CliError::io(format!("{}: {e}", matching_path.display())))?;
    }
    println!("wrote {} instances to {}", corpus.len(), args.out.display());
    Ok(())
}
