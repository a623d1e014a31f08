use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use prio_args::args::{ArgKind, StoreConfig};
use prio_args::dung::{complete_extensions, preferred_extensions, stable_extensions, SolverConfig, VertexSet};
use prio_args::format::{parse_pdt, serialise, PdtDocument};
use prio_args::logic::Formula;
use prio_args::pdl::{all_extensions, sceptical_inference};
use prio_args::pdt::{LinearisationCap, Pdt, PriorityRelation, DEFAULT_MAX_LINEARISATIONS};
use prio_args::random::{random_draft, GeneratorConfig};
use prio_args::sp::{sp_partial, sp_structure1, sp_total};
use prio_args::verify::{check_all, Analysis, Limits};
use prio_args::{fixtures, Error};

const EXIT_VIOLATION: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_CAPACITY: u8 = 3;
/// `sp --table` enumerates every strict partial order, so keep the carrier tiny.
const TABLE_MAX_RULES: usize = 4;

#[derive(Parser)]
#[command(name = "prio-args", version, about = "Prioritised default theories and their argumentation counterpart")]
struct Cli {
    /// Cap on the number of linearisations enumerated for a partial priority.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_LINEARISATIONS)]
    max_linearisations: usize,
    /// Cap on the number of arguments built for a theory.
    #[arg(long, global = true, default_value_t = StoreConfig::default().max_arguments)]
    max_arguments: usize,
    /// Seed for `random`.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Semantics {
    Grounded,
    Complete,
    Preferred,
    Stable,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ExportFormat {
    Dot,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// List default-logic extensions and argumentation extensions.
    Extensions {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Semantics::Stable)]
        semantics: Semantics,
    },
    /// Show the structure-preference order of a theory's priority.
    Sp {
        #[arg(required_unless_present = "table")]
        file: Option<PathBuf>,
        /// Tabulate the order for every strict partial order on the rules
        /// (penguin rules when no file is given).
        #[arg(long)]
        table: bool,
    },
    /// Run every applicable differential check.
    Check { file: PathBuf },
    /// Write the defeat graph.
    Export {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = ExportFormat::Dot)]
        format: ExportFormat,
    },
    /// Print a random valid theory.
    Random {
        #[arg(long, default_value_t = 4)]
        defaults: usize,
        #[arg(long, default_value_t = 4)]
        atoms: usize,
        #[arg(long, default_value_t = 2)]
        max_facts: usize,
        /// Probability of each compatible priority pair.
        #[arg(long, default_value_t = 0.3)]
        density: f64,
        /// Emit a total priority.
        #[arg(long)]
        total: bool,
    },
}

/// Failure classes, each with its own exit status.
enum Failure {
    Input(anyhow::Error),
    Capacity(anyhow::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_capacity() {
            Failure::Capacity(e.into())
        } else {
            Failure::Input(e.into())
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

fn limits(cli: &Cli) -> Limits {
    Limits {
        linearisations: LinearisationCap {
            max_orders: cli.max_linearisations,
            ..LinearisationCap::default()
        },
        store: StoreConfig {
            max_arguments: cli.max_arguments,
            ..StoreConfig::default()
        },
        solver: SolverConfig::default(),
    }
}

fn load(path: &Path) -> Result<(Pdt, Vec<Formula>), Failure> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_pdt(&text).map_err(|e| Failure::Input(anyhow::Error::new(e).context(path.display().to_string())))
}

/// The argument ordering used for a theory: the total construction when the
/// priority is total, the partial one otherwise.
fn argument_order(t: &Pdt) -> PriorityRelation {
    if t.priority().is_total() {
        sp_total(t, t.priority())
    } else {
        sp_partial(t, t.priority())
    }
}

fn conclusion_list(a: &Analysis, s: &VertexSet) -> Vec<String> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for &x in s {
        let c = a.store.conclusion(x).to_string();
        if seen.insert(c.clone()) {
            out.push(c);
        }
    }
    out
}

fn cmd_extensions(cli: &Cli, file: &Path, semantics: Semantics) -> Result<u8, Failure> {
    let lim = limits(cli);
    let (t, queries) = load(file)?;
    let exts = all_extensions(&t, lim.linearisations).map_err(Error::from)?;
    println!("default-logic extensions: {}", exts.len());
    for (i, e) in exts.iter().enumerate() {
        let gens: Vec<String> = e.generators.iter().map(ToString::to_string).collect();
        println!("  E{}: Th({})  applied: {}", i + 1, gens.join(", "), e.trace.join(", "));
    }

    let a = Analysis::new(&t, argument_order(&t), lim.store)?;
    let family = match semantics {
        Semantics::Grounded => vec![a.af.grounded()],
        Semantics::Complete => complete_extensions(&a.af, lim.solver).map_err(Error::from)?,
        Semantics::Preferred => preferred_extensions(&a.af, lim.solver).map_err(Error::from)?,
        Semantics::Stable => stable_extensions(&a.af, lim.solver).map_err(Error::from)?,
    };
    let name = format!("{semantics:?}").to_lowercase();
    println!("{name} extensions ({} arguments in total): {}", a.store.len(), family.len());
    for (i, s) in family.iter().enumerate() {
        let rules = s.iter().fold(0u64, |m, &x| m | a.store.get(x).dr);
        println!(
            "  S{}: {} arguments, rules {{{}}}, concluding {}",
            i + 1,
            s.len(),
            t.ids_of(rules).join(", "),
            conclusion_list(&a, s).join(", ")
        );
    }

    for q in &queries {
        let pdl = sceptical_inference(&t, q, lim.linearisations).map_err(|e| match e {
            prio_args::pdl::InferenceError::Capacity(c) => Error::Capacity(c),
            prio_args::pdl::InferenceError::Logic(l) => Error::Logic(l),
        })?;
        let mut argued = !family.is_empty();
        for s in &family {
            let conc = a.store.conclusions_of(&s.iter().copied().collect::<Vec<_>>());
            argued &= t.oracle().entails(&conc, q).map_err(Error::from)?;
        }
        let yn = |b: bool| if b { "yes" } else { "no" };
        println!("query {q}: sceptical default logic {}, all {name} extensions {}", yn(pdl), yn(argued));
    }
    Ok(0)
}

/// Every strict partial order on `ids`, each listed once.
fn strict_partial_orders(ids: &[String]) -> Vec<PriorityRelation> {
    let n = ids.len();
    let candidates: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b))).collect();
    let mut out = Vec::new();
    for subset in 0u32..1 << candidates.len() {
        let pairs: Vec<(String, String)> = candidates
            .iter()
            .enumerate()
            .filter(|(k, _)| subset >> k & 1 == 1)
            .map(|(_, &(a, b))| (ids[a].clone(), ids[b].clone()))
            .collect();
        if let Ok(r) = PriorityRelation::from_pairs(ids, &pairs) {
            if r.pair_count() == pairs.len() {
                out.push(r);
            }
        }
    }
    out
}

fn cmd_sp(file: Option<&Path>, table: bool) -> Result<u8, Failure> {
    let t = match file {
        Some(f) => load(f)?.0,
        None => fixtures::penguin(),
    };
    if !table {
        let seqs = sp_structure1(&t, t.priority());
        println!("priority: {}", t.priority());
        println!("sequences (least preferred first):");
        for s in &seqs {
            let names: Vec<&str> = s.iter().map(|&r| t.ids()[r].as_str()).collect();
            println!("  {}", names.join(" "));
        }
        println!("structure order: {}", sp_partial(&t, t.priority()));
        return Ok(0);
    }
    if t.ids().len() > TABLE_MAX_RULES {
        return Err(Failure::Capacity(anyhow::anyhow!(
            "--table enumerates every partial order; at most {TABLE_MAX_RULES} rules (theory has {})",
            t.ids().len()
        )));
    }
    let orders = strict_partial_orders(t.ids());
    // Keyed by the output's pairs so rows print in a stable order.
    type Row = (PriorityRelation, Vec<PriorityRelation>);
    let mut rows: BTreeMap<Vec<(usize, usize)>, Row> = BTreeMap::new();
    for d in orders.iter() {
        let out = sp_partial(&t, d);
        rows.entry(out.index_pairs()).or_insert_with(|| (out, Vec::new())).1.push(d.clone());
    }
    println!("{} priorities, {} distinct structure orders", orders.len(), rows.len());
    for (out, inputs) in rows.values() {
        let ins: Vec<String> = inputs.iter().map(ToString::to_string).collect();
        println!("{out}  <=  {}", ins.join("; "));
    }
    Ok(0)
}

fn cmd_check(cli: &Cli, file: &Path) -> Result<u8, Failure> {
    let (t, _) = load(file)?;
    let reports = check_all(&t, &limits(cli))?;
    let mut status = 0;
    for r in &reports {
        println!("{r}");
        if !r.passed {
            status = EXIT_VIOLATION;
        }
    }
    Ok(status)
}

/// Write to stdout, treating a closed pipe as success.
fn emit(text: &str) -> Result<(), Failure> {
    use std::io::Write;
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(anyhow::Error::new(e).into()),
        _ => Ok(()),
    }
}

fn cmd_export(cli: &Cli, file: &Path, format: ExportFormat) -> Result<u8, Failure> {
    let (t, _) = load(file)?;
    let a = Analysis::new(&t, argument_order(&t), limits(cli).store)?;
    let name = |i: usize| format!("a{i}");
    match format {
        ExportFormat::Dot => {
            let mut out = String::from("digraph defeats {\n  node [shape=box];\n");
            for arg in a.store.args() {
                let label = format!(
                    "{}: {} | {{{}}}",
                    name(arg.id),
                    a.store.conclusion(arg.id),
                    t.ids_of(arg.dr).join(", ")
                );
                out.push_str(&format!("  {} [label={}];\n", name(arg.id), serde_json::to_string(&label).expect("string")));
            }
            let defeats = a.graph.defeat_pairs();
            for &(x, y) in &a.graph.attacks {
                let style = if defeats.contains(&(x, y)) { "" } else { " [style=dashed]" };
                out.push_str(&format!("  {} -> {}{style};\n", name(x), name(y)));
            }
            out.push_str("}\n");
            emit(&out)?;
        }
        ExportFormat::Json => {
            let args: Vec<_> = a
                .store
                .args()
                .iter()
                .map(|arg| {
                    let kind = match arg.kind {
                        ArgKind::Axiom => "axiom",
                        ArgKind::Defeasible(_) => "defeasible",
                        ArgKind::Strict => "strict",
                    };
                    json!({
                        "id": name(arg.id),
                        "conclusion": a.store.conclusion(arg.id).to_string(),
                        "dr": t.ids_of(arg.dr),
                        "kind": kind,
                        "children": arg.children.iter().map(|&c| name(c)).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let pair = |&(x, y): &(usize, usize)| json!([name(x), name(y)]);
            let doc = json!({
                "arguments": args,
                "attacks": a.graph.attacks.iter().map(pair).collect::<Vec<_>>(),
                "defeats": a.graph.defeat_pairs().iter().map(pair).collect::<Vec<_>>(),
                "structure_order": a.sp.pairs(),
            });
            emit(&format!("{}\n", serde_json::to_string_pretty(&doc).expect("json")))?;
        }
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_random(cli: &Cli, defaults: usize, atoms: usize, max_facts: usize, density: f64, total: bool) -> Result<u8, Failure> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Failure::Input(anyhow::anyhow!("--density must lie in [0, 1]")));
    }
    if atoms == 0 {
        return Err(Failure::Input(anyhow::anyhow!("--atoms must be at least 1")));
    }
    let cfg = GeneratorConfig {
        defaults,
        atoms,
        max_facts,
        priority_density: density,
        total,
    };
    let doc = PdtDocument {
        draft: random_draft(&cfg, cli.seed),
        queries: Vec::new(),
    };
    print!("{}", serialise(&doc));
    Ok(0)
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    match &cli.command {
        Command::Extensions { file, semantics } => cmd_extensions(cli, file, *semantics),
        Command::Sp { file, table } => cmd_sp(file.as_deref(), *table),
        Command::Check { file } => cmd_check(cli, file),
        Command::Export { file, format } => cmd_export(cli, file, *format),
        Command::Random {
            defaults,
            atoms,
            max_facts,
            density,
            total,
        } => cmd_random(cli, *defaults, *atoms, *max_facts, *density, *total),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Capacity(e)) => {
            eprintln!("capacity exceeded: {e:#}");
            ExitCode::from(EXIT_CAPACITY)
        }
    }
}
