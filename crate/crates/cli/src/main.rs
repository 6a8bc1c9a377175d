//! `cpart` — command-line front end for the colored-partitions crate.
//!
//! Every subcommand reads and writes JSON (pretty-printed under `--pretty`);
//! diagnostics go to stderr as JSON objects. Exit codes: 0 on success, 1 when
//! a verification fails (or an internal consistency check trips), 2 on bad
//! input.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use colored_partitions::bridge::bridge_report;
use colored_partitions::machine::{phi, psi, MachineTrace};
use colored_partitions::motzkin::{dot_export, forest, motzkin_word, theta};
use colored_partitions::partition::{enumerate, ColorProduct, GroundSet};
use colored_partitions::pattern::{
    detect_family, find_shortcuts, has_double_special_pivot, mine_optimal, symbolic_of,
    PatternInstance,
};
use colored_partitions::series::{
    corollary12_first_kind, corollary12_second_kind, full_report,
};
use colored_partitions::{Error, Partition, Result};

#[derive(Parser)]
#[command(
    name = "cpart",
    version,
    about = "Colored partition machines, bridges, pattern mining and series checks",
    subcommand_required = true,
    arg_required_else_help = true
)]
struct Cli {
    /// Number of worker threads (default: available parallelism).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Pretty-print JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "UPPER")]
enum SetArg {
    #[value(alias = "o")]
    O,
    #[value(alias = "e")]
    E,
    #[value(alias = "e2")]
    E2,
}

impl From<SetArg> for GroundSet {
    fn from(s: SetArg) -> GroundSet {
        match s {
            SetArg::O => GroundSet::O,
            SetArg::E => GroundSet::E,
            SetArg::E2 => GroundSet::E2,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// List every partition of a ground set with a given size.
    Enumerate(EnumerateArgs),
    /// Run the forward merge/cross machine on strictly ordered primary parts.
    Phi(MachineArgs),
    /// Run the backward cross/split machine on a chain-ordered partition.
    Psi(MachineArgs),
    /// Half enumeration, bridge table and image-membership verdicts.
    Bridge(InputArg),
    /// Search for minimal forbidden chains and name their families.
    Mine(MineArgs),
    /// Motzkin word and weighted rooted forest of a chain-ordered partition.
    Forest(ForestArgs),
    /// Check the counting identity and inequality against the product series.
    Verify(VerifyArgs),
    /// The two matching mod-12 enumerations of a given total.
    Corollary12(CorollaryArgs),
}

#[derive(Args)]
struct EnumerateArgs {
    /// Ground set to enumerate.
    #[arg(long, value_enum)]
    set: SetArg,
    /// Number of primary colors.
    #[arg(long)]
    colors: u8,
    /// Exact total size of the partitions.
    #[arg(long)]
    size: u64,
    /// Restrict to one commutative color product, as comma-separated
    /// exponents of the primary colors (e.g. `2,1,0,0`).
    #[arg(long)]
    color_product: Option<String>,
}

#[derive(Args)]
struct MachineArgs {
    /// Input partition, as a JSON array of parts.
    #[arg(long)]
    input: PathBuf,
    /// Also write the full machine trace to this file.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct InputArg {
    /// Input partition, as a JSON array of parts.
    #[arg(long)]
    input: PathBuf,
}

#[derive(Args)]
struct MineArgs {
    /// Number of primary colors.
    #[arg(long)]
    colors: u8,
    /// Maximum number of parts per pattern.
    #[arg(long)]
    max_parts: usize,
    /// Maximum size of the leading part.
    #[arg(long)]
    max_size: u32,
    /// Drop patterns pivoting through two consecutive special moves.
    #[arg(long)]
    no_cd_moves: bool,
    /// Also write the result to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ForestArgs {
    /// Input partition, as a JSON array of parts.
    #[arg(long)]
    input: PathBuf,
    /// Write a Graphviz rendering of the forest to this file.
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Also write the JSON result to this file.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Number of primary colors.
    #[arg(long)]
    colors: u8,
    /// Truncation order of the product series.
    #[arg(long)]
    max_q: u64,
    /// Check only the identity (first and third counts agree).
    #[arg(long)]
    identity: bool,
    /// Check only the inequality (first count at most the second).
    #[arg(long)]
    inequality: bool,
    /// Write the full count report to this file.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct CorollaryArgs {
    /// Total being partitioned.
    #[arg(long)]
    size: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .is_err()
        {
            // The global pool can only be set once; a second attempt is
            // harmless and keeps the default.
        }
    }
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            let kind = if e.is_input() { "input" } else { "internal" };
            eprintln!("{}", json!({ "error": e.to_string(), "kind": kind }));
            if e.is_input() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Enumerate(a) => cmd_enumerate(cli, a),
        Command::Phi(a) => cmd_machine(cli, a, true),
        Command::Psi(a) => cmd_machine(cli, a, false),
        Command::Bridge(a) => cmd_bridge(cli, a),
        Command::Mine(a) => cmd_mine(cli, a),
        Command::Forest(a) => cmd_forest(cli, a),
        Command::Verify(a) => cmd_verify(cli, a),
        Command::Corollary12(a) => cmd_corollary(cli, a),
    }
}

fn read_partition(path: &Path) -> Result<Partition> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))?;
    let p: Partition = serde_json::from_str(&text)
        .map_err(|e| Error::input(format!("invalid partition JSON in {}: {e}", path.display())))?;
    p.validate()?;
    Ok(p)
}

fn emit<T: Serialize>(cli: &Cli, value: &T) -> Result<()> {
    println!("{}", render(cli, value)?);
    Ok(())
}

fn render<T: Serialize>(cli: &Cli, value: &T) -> Result<String> {
    let text = if cli.pretty {
        serde_json::to_string_pretty(value)
    } else {
        serde_json::to_string(value)
    };
    text.map_err(|e| Error::internal(format!("serialization failed: {e}")))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text)
        .map_err(|e| Error::input(format!("cannot write {}: {e}", path.display())))
}

fn cmd_enumerate(cli: &Cli, a: &EnumerateArgs) -> Result<ExitCode> {
    if a.colors == 0 {
        return Err(Error::input("--colors must be at least 1"));
    }
    let filter = a
        .color_product
        .as_deref()
        .map(|s| -> Result<ColorProduct> {
            let exps = s
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::input(format!("bad color-product entry {t:?}")))
                })
                .collect::<Result<Vec<u32>>>()?;
            if exps.len() != usize::from(a.colors) {
                return Err(Error::input(format!(
                    "--color-product needs {} entries, got {}",
                    a.colors,
                    exps.len()
                )));
            }
            Ok(ColorProduct(exps))
        })
        .transpose()?;
    let mut partitions: Vec<Partition> = Vec::new();
    let mut failure: Option<Error> = None;
    enumerate(a.colors, a.size, a.set.into(), &mut |parts| {
        if failure.is_some() {
            return;
        }
        if let Some(want) = &filter {
            match colored_partitions::partition::color_product(parts, a.colors) {
                Ok(got) if &got != want => return,
                Ok(_) => {}
                Err(e) => {
                    failure = Some(e);
                    return;
                }
            }
        }
        partitions.push(Partition::new(parts.to_vec()));
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let out = json!({
        "set": format!("{:?}", GroundSet::from(a.set)),
        "colors": a.colors,
        "size": a.size,
        "color_product": filter.as_ref().map(|c| c.0.clone()),
        "count": partitions.len(),
        "partitions": partitions,
    });
    emit(cli, &out)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct MachineOutput {
    input: Partition,
    output: Partition,
    trace: MachineTrace,
}

fn cmd_machine(cli: &Cli, a: &MachineArgs, forward: bool) -> Result<ExitCode> {
    let input = read_partition(&a.input)?;
    let (output, trace) = if forward {
        phi(&input)?
    } else {
        let (parts, trace) = psi(&input)?;
        (Partition::new(parts), trace)
    };
    let out = MachineOutput { input, output, trace };
    if let Some(path) = &a.trace {
        write_file(path, &render(cli, &out.trace)?)?;
    }
    emit(cli, &out)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_bridge(cli: &Cli, a: &InputArg) -> Result<ExitCode> {
    let input = read_partition(&a.input)?;
    let report = bridge_report(&input)?;
    emit(cli, &report)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct MinedPattern {
    parts: Partition,
    symbolic: Option<String>,
    family: Option<String>,
}

fn mined_entry(n: u8, pat: &PatternInstance) -> MinedPattern {
    MinedPattern {
        parts: pat.partition(),
        symbolic: symbolic_of(pat).map(|s| s.to_string()),
        family: detect_family(n, pat),
    }
}

fn cmd_mine(cli: &Cli, a: &MineArgs) -> Result<ExitCode> {
    let mined = mine_optimal(a.colors, a.max_parts, a.max_size)?;
    let kept: Vec<&PatternInstance> = mined
        .iter()
        .filter(|p| !a.no_cd_moves || !has_double_special_pivot(&p.parts))
        .collect();
    let shortcuts = find_shortcuts(a.colors, a.max_parts, a.max_size, a.no_cd_moves)?;
    let out = json!({
        "colors": a.colors,
        "max_parts": a.max_parts,
        "max_size": a.max_size,
        "no_cd_moves": a.no_cd_moves,
        "count": kept.len(),
        "patterns": kept.iter().map(|p| mined_entry(a.colors, p)).collect::<Vec<_>>(),
        "shortcuts": shortcuts.iter().map(|p| p.partition()).collect::<Vec<_>>(),
    });
    if let Some(path) = &a.out {
        write_file(path, &render(cli, &out)?)?;
    }
    emit(cli, &out)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_forest(cli: &Cli, a: &ForestArgs) -> Result<ExitCode> {
    let input = read_partition(&a.input)?;
    let word = motzkin_word(&input)?;
    let positions = theta(&input)?;
    let f = forest(&input)?;
    if f.to_word() != word {
        return Err(Error::internal(format!(
            "forest word {} disagrees with direct word {} on {input}",
            f.to_word().0, word.0
        )));
    }
    let out = json!({
        "input": input,
        "word": word,
        "theta": positions,
        "trees": f.trees.len(),
        "edges": f.edge_count(),
        "forest": f,
    });
    if let Some(path) = &a.dot {
        write_file(path, &dot_export(&f))?;
    }
    if let Some(path) = &a.json {
        write_file(path, &render(cli, &out)?)?;
    }
    emit(cli, &out)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(cli: &Cli, a: &VerifyArgs) -> Result<ExitCode> {
    let report = full_report(a.colors, a.max_q)?;
    let check_identity = a.identity || !a.inequality;
    let check_inequality = a.inequality || !a.identity;
    let identity = check_identity.then(|| report.identity_holds());
    let inequality = check_inequality.then(|| report.inequality_holds());
    let pass = identity.unwrap_or(true) && inequality.unwrap_or(true);
    let out = json!({
        "colors": a.colors,
        "max_q": a.max_q,
        "identity": identity,
        "inequality": inequality,
        "strict_witness": report.strict_witness,
        "identity_failures": report.identity_failures,
        "inequality_failures": report.inequality_failures,
        "pass": pass,
    });
    if let Some(path) = &a.json {
        write_file(path, &render(cli, &report)?)?;
    }
    emit(cli, &out)?;
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn cmd_corollary(cli: &Cli, a: &CorollaryArgs) -> Result<ExitCode> {
    let first = corollary12_first_kind(a.size)?;
    let second = corollary12_second_kind(a.size)?;
    let out = json!({
        "size": a.size,
        "first_kind": first,
        "second_kind": second,
        "count": first.len(),
    });
    if first.len() != second.len() {
        emit(cli, &out)?;
        return Err(Error::internal(format!(
            "enumeration counts differ at {}: {} vs {}",
            a.size,
            first.len(),
            second.len()
        )));
    }
    emit(cli, &out)?;
    Ok(ExitCode::SUCCESS)
}
