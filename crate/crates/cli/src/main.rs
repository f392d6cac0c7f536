use std::collections::BTreeSet;
use std::fs;
use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use uglov::bijection::{plan, psi, psi_recursive, ChargeTarget};
use uglov::canonical::{pair_orbit, CanonicalElement};
use uglov::crystal::{build_crystal, enumerate_uglov, is_flotw, CrystalGraph};
use uglov::hecke::basic_set_charge;
use uglov::symbol::{from_symbol, to_symbol, Symbol};
use uglov::{Bipartition, Charge, Modulus, NodeOrder};

mod verify;

#[derive(Parser)]
#[command(name = "uglov", version, about = "Crystals of bipartitions and their bijections")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write to this file instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// List the vertices of rank n in the component of the empty bipartition.
    Enumerate {
        #[arg(long)]
        e: Modulus,
        /// `s0,s1` for the Uglov order, `v0,v1+` or `v0,v1-` for the asymptotic ones.
        #[arg(long, allow_hyphen_values = true)]
        charge: NodeOrder,
        #[arg(long)]
        n: usize,
        /// Also compare against the FLOTW filter (needs 0 <= s0 <= s1 < e).
        #[arg(long)]
        flotw: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Apply the crystal isomorphism between two charges.
    Map {
        /// May be omitted when source and target coincide.
        #[arg(long)]
        e: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        from: Charge,
        #[arg(long, allow_hyphen_values = true)]
        to: ChargeTarget,
        /// Recompute every image by walking the crystal and compare.
        #[arg(long)]
        oracle: bool,
        /// Bipartitions such as `[2,1|3]`; read one per line from stdin if absent.
        bipartitions: Vec<Bipartition>,
        #[command(flatten)]
        out: Output,
    },
    /// Show the step sequence used by `map`.
    Plan {
        #[arg(long)]
        e: i64,
        #[arg(long, allow_hyphen_values = true)]
        from: Charge,
        #[arg(long, allow_hyphen_values = true)]
        to: ChargeTarget,
        /// Rank, needed for asymptotic targets.
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// Print the charged symbol of a bipartition, or decode one.
    Symbol {
        #[arg(long, allow_hyphen_values = true, required_unless_present = "decode")]
        charge: Option<Charge>,
        /// Padding; defaults to the least admissible value.
        #[arg(long)]
        m: Option<usize>,
        /// Decode a symbol in JSON form (`-` for stdin) back to a bipartition.
        #[arg(long, conflicts_with_all = ["charge", "bipartition"])]
        decode: Option<PathBuf>,
        #[arg(required_unless_present = "decode")]
        bipartition: Option<Bipartition>,
        #[command(flatten)]
        out: Output,
    },
    /// Print the canonical basis element of a bipartition.
    Canonical {
        #[arg(long, allow_hyphen_values = true)]
        charge: Charge,
        bipartition: Bipartition,
        #[command(flatten)]
        out: Output,
    },
    /// Hecke algebra parameters and the charge of the canonical basic set.
    BasicSet {
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
        #[arg(long, allow_hyphen_values = true)]
        l: i64,
        #[command(flatten)]
        out: Output,
    },
    /// Export the crystal graph up to a given rank.
    Graph {
        #[arg(long)]
        e: Modulus,
        #[arg(long, allow_hyphen_values = true)]
        charge: NodeOrder,
        #[arg(long)]
        max_rank: usize,
        /// Shorthand for `--format dot`.
        #[arg(long)]
        dot: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Run a property suite over a grid of moduli, charges and ranks.
    Verify(verify::VerifyArgs),
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Domain(#[from] uglov::Error),
    #[error("{0}")]
    Failed(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Domain(_) | CliError::Io(_) => 3,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn emit(out: &Output, text: &str) -> Result<()> {
    match &out.output {
        Some(path) => fs::write(path, text)?,
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("output types serialize");
    text.push('\n');
    text
}

fn reject_dot(out: &Output) -> Result<()> {
    if out.format == Format::Dot {
        return Err(CliError::Usage("--format dot is only available for graph".into()));
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct Listing {
    e: Modulus,
    order: NodeOrder,
    n: usize,
    count: usize,
    bipartitions: Vec<Bipartition>,
}

#[derive(Serialize, Deserialize)]
struct Mapping {
    input: Bipartition,
    output: Bipartition,
}

fn enumerate(e: Modulus, order: NodeOrder, n: usize, flotw: bool, out: &Output) -> Result<()> {
    reject_dot(out)?;
    let set = enumerate_uglov(e, order, n)?;
    if flotw {
        match (e, order) {
            (Modulus::Finite(m), NodeOrder::Uglov(c)) if 0 <= c.s0 && c.s0 <= c.s1 && c.s1 < m => {
                let mut filtered = BTreeSet::new();
                for lambda in Bipartition::all_of_rank(n) {
                    if is_flotw(&lambda, m, c)? {
                        filtered.insert(lambda);
                    }
                }
                if filtered != set {
                    return Err(CliError::Failed(format!(
                        "FLOTW filter gives {} bipartitions, the crystal gives {}",
                        filtered.len(),
                        set.len()
                    )));
                }
                eprintln!("FLOTW filter agrees");
            }
            _ => eprintln!("FLOTW check skipped: needs finite e and 0 <= s0 <= s1 < e"),
        }
    }
    let bipartitions: Vec<Bipartition> = set.into_iter().collect();
    match out.format {
        Format::Json => emit(out, &json(&Listing { e, order, n, count: bipartitions.len(), bipartitions })),
        _ => {
            eprintln!("{} bipartitions", bipartitions.len());
            let text: String = bipartitions.iter().map(|b| format!("{b}\n")).collect();
            emit(out, &text)
        }
    }
}

fn read_stdin_bipartitions() -> Result<Vec<Bipartition>> {
    let mut items = Vec::new();
    for line in io::stdin().lock().lines() {
        let line = line?;
        if !line.trim().is_empty() {
            items.push(line.parse()?);
        }
    }
    Ok(items)
}

fn map(e: Option<i64>, from: Charge, to: ChargeTarget, oracle: bool, inputs: Vec<Bipartition>, out: &Output) -> Result<()> {
    reject_dot(out)?;
    let inputs = if inputs.is_empty() { read_stdin_bipartitions()? } else { inputs };
    let mut results = Vec::with_capacity(inputs.len());
    for lambda in inputs {
        let output = match e {
            Some(e) => {
                let image = psi(&lambda, e, from, to)?;
                if oracle {
                    let check = psi_recursive(&lambda, Modulus::finite(e)?, NodeOrder::Uglov(from), to.order())?;
                    if check != image {
                        return Err(CliError::Failed(format!("{lambda}: plan gives {image}, crystal gives {check}")));
                    }
                }
                image
            }
            None if to == ChargeTarget::Exact(from) => lambda.clone(),
            None => return Err(CliError::Usage("--e is required unless --from and --to coincide".into())),
        };
        results.push(Mapping { input: lambda, output });
    }
    match out.format {
        Format::Json => emit(out, &json(&results)),
        _ => emit(out, &results.iter().map(|m| format!("{}\n", m.output)).collect::<String>()),
    }
}

fn show_plan(e: i64, from: Charge, to: ChargeTarget, n: Option<usize>, out: &Output) -> Result<()> {
    reject_dot(out)?;
    let p = plan(e, from, to, n)?;
    match out.format {
        Format::Json => emit(out, &json(&p)),
        _ => {
            let charges = p.charges()?;
            let mut text = format!("({})\n", charges[0]);
            for (step, charge) in p.steps.iter().zip(&charges[1..]) {
                text.push_str(&format!("  {} -> ({charge})\n", serde_json::to_string(step).expect("steps serialize")));
            }
            emit(out, &text)
        }
    }
}

fn read_input(path: &PathBuf) -> Result<String> {
    if path.as_os_str() == "-" {
        Ok(io::read_to_string(io::stdin())?)
    } else {
        Ok(fs::read_to_string(path)?)
    }
}

fn symbol(charge: Option<Charge>, m: Option<usize>, decode: Option<PathBuf>, lambda: Option<Bipartition>, out: &Output) -> Result<()> {
    reject_dot(out)?;
    if let Some(path) = decode {
        let sym = Symbol::from_json(&read_input(&path)?)?;
        let lambda = from_symbol(&sym)?;
        return match out.format {
            Format::Json => emit(out, &json(&lambda)),
            _ => emit(out, &format!("{lambda}\n")),
        };
    }
    let (Some(charge), Some(lambda)) = (charge, lambda) else {
        return Err(CliError::Usage("a charge and a bipartition are required".into()));
    };
    let sym = to_symbol(&lambda, charge, m)?;
    match out.format {
        Format::Json => emit(out, &json(&sym)),
        _ => emit(out, &format!("{sym}\n")),
    }
}

fn canonical(charge: Charge, lambda: &Bipartition, out: &Output) -> Result<()> {
    reject_dot(out)?;
    let element: CanonicalElement = pair_orbit(lambda, charge)?;
    match out.format {
        Format::Json => emit(out, &json(&element)),
        _ => emit(out, &format!("{element}\n")),
    }
}

fn basic_set(a: i64, b: i64, l: i64, out: &Output) -> Result<()> {
    reject_dot(out)?;
    let h = basic_set_charge(a, b, l)?;
    match out.format {
        Format::Json => emit(out, &json(&h)),
        _ => {
            let listed: Vec<String> = h.solutions.iter().map(i64::to_string).collect();
            let more = if h.solution_count as usize > h.solutions.len() { ", ..." } else { "" };
            emit(
                out,
                &format!(
                    "e = {}\nd = {} (solutions: {}{more}; {} in total)\np = {}\ncharge = ({})\n",
                    h.e,
                    h.d,
                    listed.join(", "),
                    h.solution_count,
                    h.p,
                    h.charge
                ),
            )
        }
    }
}

fn graph(e: Modulus, order: NodeOrder, max_rank: usize, dot: bool, out: &Output) -> Result<()> {
    let g: CrystalGraph = build_crystal(e, order, max_rank)?;
    let format = if dot { Format::Dot } else { out.format };
    match format {
        Format::Dot => emit(out, &g.to_dot()),
        Format::Json => emit(out, &format!("{}\n", g.to_json())),
        Format::Text => {
            let mut text = String::new();
            for (rank, level) in g.levels.iter().enumerate() {
                let names: Vec<String> = level.iter().map(Bipartition::to_string).collect();
                text.push_str(&format!("rank {rank}: {}\n", names.join(" ")));
            }
            for edge in &g.edges {
                text.push_str(&format!("{} -{}-> {}\n", edge.from, edge.label, edge.to));
            }
            emit(out, &text)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Enumerate { e, charge, n, flotw, out } => enumerate(e, charge, n, flotw, &out),
        Command::Map { e, from, to, oracle, bipartitions, out } => map(e, from, to, oracle, bipartitions, &out),
        Command::Plan { e, from, to, n, out } => show_plan(e, from, to, n, &out),
        Command::Symbol { charge, m, decode, bipartition, out } => symbol(charge, m, decode, bipartition, &out),
        Command::Canonical { charge, bipartition, out } => canonical(charge, &bipartition, &out),
        Command::BasicSet { a, b, l, out } => basic_set(a, b, l, &out),
        Command::Graph { e, charge, max_rank, dot, out } => graph(e, charge, max_rank, dot, &out),
        Command::Verify(args) => {
            let (text, ok) = verify::run(&args)?;
            emit(&args.out, &text)?;
            if ok {
                Ok(())
            } else {
                Err(CliError::Failed("verification failed".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
