use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

use spantree::asymptotics::{
    hardy_ramanujan, lemma1_bound, lhospital_ratio, prime_main_term, ratio_to_estimate,
};
use spantree::atlas::{
    alpha_exact, atlas_file_name, azarija_skrekovski_bound, exact_atlas, load_atlas_dir,
    sedlacek_bound, AlphaStatus, AtlasConfig, AtlasRecord, DEFAULT_MAX_N,
};
use spantree::partitions::{
    count_partitions, enumerate_partitions, p_set_enumerate, p_set_size, p_set_sizes,
    partition_table,
};
use spantree::witness::{flower, witness_family};
use spantree::{cycle, tau, Count, Graph, PartClass, Partition};

mod output;

use output::{write_scalar, Cell, OutputFormat, Table};

/// Largest n for which the asymptotics table includes exact p(n).
const EXACT_P_LIMIT: u64 = 10_000;

#[derive(Parser)]
#[command(name = "spantree", version, about = "Spanning-tree counts, prime partitions and realizable tree-count atlases")]
struct Cli {
    #[arg(long, value_enum, default_value_t = OutputFormat::Table, global = true)]
    format: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact number of spanning trees of one graph.
    Tau(TauArgs),
    /// Count or list partitions with restricted parts.
    Partitions(PartitionArgs),
    /// Connected n-vertex graphs with distinct tree counts, one per member of P_n.
    Witness(WitnessArgs),
    /// Exhaustively compute A_n and write it as JSON.
    Atlas(AtlasArgs),
    /// Least vertex count realizing a tree count, from stored atlases.
    Alpha(AlphaArgs),
    /// Per-n comparison of |P_n|, |A_n|, the lemma bound and the alpha bounds.
    Bounds(BoundsArgs),
    /// Asymptotic formulas next to exact partition counts.
    Asymptotics(AsymptoticsArgs),
}

#[derive(Args)]
#[command(group(ArgGroup::new("source").required(true).args(["input", "cycle", "complete", "flower"])))]
struct TauArgs {
    /// Edge-list file.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    cycle: Option<usize>,
    #[arg(long)]
    complete: Option<usize>,
    /// Comma-separated cycle lengths, e.g. 3,5.
    #[arg(long, value_delimiter = ',')]
    flower: Option<Vec<usize>>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    All,
    Prime,
    Oddprime,
}

impl From<ClassArg> for PartClass {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::All => PartClass::All,
            ClassArg::Prime => PartClass::Prime,
            ClassArg::Oddprime => PartClass::OddPrime,
        }
    }
}

#[derive(Args)]
struct PartitionArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum)]
    class: ClassArg,
    /// One partition per line instead of the count.
    #[arg(long)]
    list: bool,
    /// Use P_n: odd-prime partitions of every sum from 3 to n.
    #[arg(long)]
    cumulative: bool,
}

#[derive(Args)]
struct WitnessArgs {
    #[arg(long)]
    n: usize,
    /// Write witness_<n>_<index>.edges and .json files here.
    #[arg(long)]
    emit: Option<PathBuf>,
}

#[derive(Args)]
struct AtlasArgs {
    #[arg(long)]
    n: usize,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    jobs: Option<usize>,
    /// Output file (default: <atlas-dir>/atlas_<n>.json).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, env = "SPANTREE_ATLAS_DIR", default_value = ".")]
    atlas_dir: PathBuf,
    /// Allow n above 8.
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct AlphaArgs {
    /// Tree count to look up (decimal).
    #[arg(long)]
    m: Count,
    #[arg(long, env = "SPANTREE_ATLAS_DIR")]
    atlas_dir: PathBuf,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    max_n: usize,
    /// Atlas files to fill the |A_n| column from.
    #[arg(long, env = "SPANTREE_ATLAS_DIR")]
    atlas_dir: Option<PathBuf>,
}

#[derive(Args)]
struct AsymptoticsArgs {
    /// Comma-separated ascending values of n.
    #[arg(long, value_delimiter = ',', required = true)]
    grid: Vec<u64>,
    /// Append the finite-difference ratio g'(n)/f(n).
    #[arg(long)]
    check_lhospital: bool,
}

#[derive(Debug)]
enum CliError {
    /// Bad flags or unusable input: exit 2.
    Input(String),
    /// Atlas data not present: exit 3.
    MissingData(String),
    Io(io::Error),
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult = Result<(), CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = match cli.command {
        Command::Tau(args) => run_tau(args, cli.format, &mut out),
        Command::Partitions(args) => run_partitions(args, cli.format, &mut out),
        Command::Witness(args) => run_witness(args, cli.format, &mut out),
        Command::Atlas(args) => run_atlas(args, cli.format, &mut out),
        Command::Alpha(args) => run_alpha(args, cli.format, &mut out),
        Command::Bounds(args) => run_bounds(args, cli.format, &mut out),
        Command::Asymptotics(args) => run_asymptotics(args, cli.format, &mut out),
    };
    match result.and_then(|()| out.flush().map_err(CliError::Io)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::MissingData(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(CliError::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run_tau(args: TauArgs, format: OutputFormat, out: &mut impl Write) -> CliResult {
    let graph = if let Some(path) = args.input {
        let text = fs::read_to_string(&path)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        text.parse::<Graph>()
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?
    } else if let Some(k) = args.cycle {
        cycle(k).map_err(|e| CliError::Input(e.to_string()))?
    } else if let Some(k) = args.complete {
        Graph::complete(k)
    } else {
        let parts = args.flower.unwrap_or_default();
        let partition = Partition::new(parts)
            .ok_or_else(|| CliError::Input("flower parts must be positive".into()))?;
        flower(&partition).map_err(|e| CliError::Input(e.to_string()))?
    };
    write_scalar(format, "tau", Cell::exact(tau(&graph)), out)?;
    Ok(())
}

fn run_partitions(args: PartitionArgs, format: OutputFormat, out: &mut impl Write) -> CliResult {
    let class = PartClass::from(args.class);
    if args.cumulative && class != PartClass::OddPrime {
        return Err(CliError::Input("--cumulative is only defined for --class oddprime".into()));
    }
    if args.list {
        let listing: Box<dyn Iterator<Item = Partition>> = if args.cumulative {
            Box::new(p_set_enumerate(args.n))
        } else {
            Box::new(enumerate_partitions(args.n, class))
        };
        match format {
            OutputFormat::Table => {
                for p in listing {
                    writeln!(out, "{p}")?;
                }
            }
            _ => {
                let mut table = Table::new(vec!["sum", "partition", "parts"]);
                for p in listing {
                    table.push(vec![Cell::Int(p.sum() as u64), Cell::Text(p.to_string()), Cell::Int(p.len() as u64)]);
                }
                table.write(format, out)?;
            }
        }
        return Ok(());
    }
    let count = if args.cumulative {
        p_set_size(args.n)
    } else {
        count_partitions(args.n, class)
    };
    write_scalar(format, "count", Cell::exact(count), out)?;
    Ok(())
}

fn run_witness(args: WitnessArgs, format: OutputFormat, out: &mut impl Write) -> CliResult {
    if args.n < 3 {
        return Err(CliError::Input(format!("--n must be at least 3, got {}", args.n)));
    }
    if let Some(dir) = &args.emit {
        fs::create_dir_all(dir)?;
    }
    let mut table = Table::new(vec!["partition", "tau", "vertices", "edges"]);
    for (index, w) in witness_family(args.n).enumerate() {
        if let Some(dir) = &args.emit {
            w.write_to(dir, index)?;
        }
        table.push(vec![
            Cell::Text(w.partition.to_string()),
            Cell::exact(&w.tau_value),
            Cell::Int(w.graph.n_vertices() as u64),
            Cell::Int(w.graph.n_edges() as u64),
        ]);
    }
    table.write(format, out)?;
    Ok(())
}

fn run_atlas(args: AtlasArgs, format: OutputFormat, out: &mut impl Write) -> CliResult {
    if args.n == 0 {
        return Err(CliError::Input("--n must be at least 1".into()));
    }
    if args.n > DEFAULT_MAX_N && !args.force {
        return Err(CliError::Input(format!(
            "--n {} is above {DEFAULT_MAX_N}; pass --force to run it anyway",
            args.n
        )));
    }
    let mut config = AtlasConfig {
        allow_large: args.force,
        jobs: args.jobs,
        ..AtlasConfig::default()
    };
    if args.n >= 8 {
        let last = Arc::new(AtomicU64::new(0));
        config.progress = Some(Arc::new(move |done, total| {
            let pct = done * 100 / total;
            if last.fetch_max(pct, Ordering::Relaxed) < pct {
                eprintln!("atlas: {pct}% of {total} edge subsets");
            }
        }));
    }
    let record = exact_atlas(args.n, &config).map_err(|e| CliError::Input(e.to_string()))?;
    let path = args
        .out
        .unwrap_or_else(|| args.atlas_dir.join(atlas_file_name(args.n)));
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    record.save(&path).map_err(|e| CliError::Io(io::Error::other(e.to_string())))?;
    write_scalar(format, "size", Cell::Int(record.size() as u64), out)?;
    Ok(())
}

fn load_atlases(dir: &Path) -> Result<Vec<AtlasRecord>, CliError> {
    let atlases = load_atlas_dir(dir).map_err(|e| CliError::MissingData(e.to_string()))?;
    if atlases.is_empty() {
        return Err(CliError::MissingData(format!(
            "no {} in {}; run `spantree atlas` first",
            atlas_file_name(1),
            dir.display()
        )));
    }
    Ok(atlases)
}

fn run_alpha(args: AlphaArgs, format: OutputFormat, out: &mut impl Write) -> CliResult {
    let atlases = load_atlases(&args.atlas_dir)?;
    let record = alpha_exact(&args.m, &atlases);
    let cell = match record.status {
        AlphaStatus::Exact => Cell::Int(record.alpha as u64),
        AlphaStatus::LowerBoundOnly => Cell::Text(format!("> {}", record.alpha - 1)),
    };
    write_scalar(format, "alpha", cell, out)?;
    Ok(())
}

fn run_bounds(args: BoundsArgs, format: OutputFormat, out: &mut impl Write) -> CliResult {
    if args.max_n < 1 {
        return Err(CliError::Input("--max-n must be at least 1".into()));
    }
    let atlases = match &args.atlas_dir {
        Some(dir) => load_atlas_dir(dir).map_err(|e| CliError::MissingData(e.to_string()))?,
        None => Vec::new(),
    };
    let p_sizes = p_set_sizes(args.max_n);
    let mut table = Table::new(vec![
        "n",
        "p_set_size",
        "atlas_size",
        "lemma1_log",
        "lemma1_value",
        "sedlacek",
        "azarija_skrekovski",
    ]);
    for (n, p_size) in p_sizes.iter().enumerate().skip(1) {
        let atlas = atlases.iter().find(|a| a.n == n);
        let lemma = lemma1_bound(n as u64).ok();
        let opt = |v: Option<u64>| v.map_or(Cell::Empty, Cell::Int);
        table.push(vec![
            Cell::Int(n as u64),
            Cell::exact(p_size),
            atlas.map_or(Cell::Empty, |a| Cell::exact(a.size())),
            Cell::float(lemma.map(|e| e.log_value)),
            Cell::float(lemma.and_then(|e| e.value)),
            opt(sedlacek_bound(n as u64)),
            opt(azarija_skrekovski_bound(n as u64)),
        ]);
    }
    table.write(format, out)?;
    Ok(())
}

fn run_asymptotics(args: AsymptoticsArgs, format: OutputFormat, out: &mut impl Write) -> CliResult {
    if args.grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Input("--grid must be strictly ascending".into()));
    }
    let exact_max = args
        .grid
        .iter()
        .copied()
        .filter(|&n| n <= EXACT_P_LIMIT)
        .max()
        .unwrap_or(0) as usize;
    let all = partition_table(exact_max, PartClass::All);
    let prime = partition_table(exact_max, PartClass::Prime);
    let odd_prime = partition_table(exact_max, PartClass::OddPrime);

    let mut headers = vec![
        "n",
        "p_exact",
        "hr_log",
        "hr_value",
        "hr_ratio",
        "f_log",
        "lemma1_log",
        "p_op_over_p_p",
    ];
    if args.check_lhospital {
        headers.push("lhospital_ratio");
    }
    let mut table = Table::new(headers);
    for &n in &args.grid {
        let exact = (n <= EXACT_P_LIMIT).then(|| &all[n as usize]);
        let hr = hardy_ramanujan(n).ok();
        let ratio = match (exact, &hr) {
            (Some(p), Some(e)) => Some(ratio_to_estimate(p, e)),
            _ => None,
        };
        let op_ratio = (n <= EXACT_P_LIMIT)
            .then(|| big_ratio(&odd_prime[n as usize], &prime[n as usize]))
            .flatten();
        let mut row = vec![
            Cell::Int(n),
            exact.map_or(Cell::Empty, Cell::exact),
            Cell::float(hr.map(|e| e.log_value)),
            Cell::float(hr.and_then(|e| e.value)),
            Cell::float(ratio),
            Cell::float(prime_main_term(n).ok().map(|e| e.log_value)),
            Cell::float(lemma1_bound(n).ok().map(|e| e.log_value)),
            Cell::float(op_ratio),
        ];
        if args.check_lhospital {
            row.push(Cell::float((n >= 10).then(|| lhospital_ratio(n).ratio)));
        }
        table.push(row);
    }
    table.write(format, out)?;
    Ok(())
}

fn big_ratio(num: &BigUint, den: &BigUint) -> Option<f64> {
    use spantree::asymptotics::ln_biguint;
    if den.bits() == 0 {
        return None;
    }
    if num.bits() == 0 {
        return Some(0.0);
    }
    Some((ln_biguint(num) - ln_biguint(den)).exp())
}
