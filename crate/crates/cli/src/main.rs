use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use malcev_core::decide::{self, CheckOptions, Mode, SynthOptions};
use malcev_core::finalg::{catalog, FiniteAlgebra, DEFAULT_ENUM_BOUND, DEFAULT_FREE_CAP};
use malcev_core::malcevgen::{self, Algorithm, ConditionFormat, MalcevCondition};
use malcev_core::relterm::{self, expand_plus, Inequality, RelTerm};
use malcev_core::termgraph::build_graph;
use malcev_core::Error;

const EXIT_FAILS: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Parser)]
#[command(name = "malcev", version, about = "Mal'cev conditions from relation-term inequalities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a term and report its structure, left/right variables and regularity.
    Term {
        term: String,
        /// Only report regularity.
        #[arg(long)]
        regular: bool,
        /// Only report variables and left/right sets.
        #[arg(long)]
        vars: bool,
    },
    /// Build the labelled graph of a `+`-free term.
    Graph {
        term: String,
        /// Emit Graphviz DOT.
        #[arg(long)]
        dot: bool,
        /// Expand `+` to k-fold products first.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Generate the Mal'cev condition of an inequality.
    Gen {
        inequality: String,
        #[arg(long, value_enum, default_value_t = AlgorithmArg::Crr)]
        algorithm: AlgorithmArg,
        /// Range `a..b` (inclusive) of k for a `+` on the right.
        #[arg(long, value_parser = parse_range)]
        k_range: Option<(usize, usize)>,
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
        /// Drop identities whose two sides coincide.
        #[arg(long)]
        prune_trivial: bool,
        /// Write one file per condition instead of printing.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Decide an inequality on an algebra or on the variety it generates.
    Check {
        inequality: String,
        #[command(flatten)]
        algebra: AlgebraArg,
        #[arg(long, value_enum, default_value_t = LevelArg::Variety)]
        level: LevelArg,
        #[arg(long, value_enum, default_value_t = ModeArg::Crr)]
        mode: ModeArg,
        /// Worker threads for per-algebra enumeration.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        threads: u32,
        /// Bound on n(n-1) for enumerating relations.
        #[arg(long, default_value_t = DEFAULT_ENUM_BOUND)]
        enum_bound: usize,
        /// Free-algebra element cap (default: MALCEV_CAP or 200000).
        #[arg(long, value_parser = positive)]
        cap: Option<usize>,
    },
    /// Search for terms of an algebra satisfying the generated condition.
    Synthesize {
        inequality: String,
        #[command(flatten)]
        algebra: AlgebraArg,
        #[arg(long, value_enum, default_value_t = AlgorithmArg::Crr)]
        algorithm: AlgorithmArg,
        /// k for a `+` on the right.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = decide::DEFAULT_ARITY_CAP)]
        arity_cap: usize,
        /// Candidate-set element cap (default: MALCEV_CAP or 200000).
        #[arg(long, value_parser = positive)]
        cap: Option<usize>,
        #[arg(long, value_enum, default_value_t = WitnessFormat::Text)]
        format: WitnessFormat,
    },
}

#[derive(clap::Args)]
struct AlgebraArg {
    /// Catalog name (bare2, bare3, z2, lat2, slat2, bool2) or path to an algebra JSON file.
    #[arg(long)]
    algebra: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Classic,
    Crr,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Latex,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Algebra,
    Variety,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Crr,
    Con,
}

#[derive(Clone, Copy, ValueEnum)]
enum WitnessFormat {
    Text,
    Json,
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected a range like 2..4, got `{s}`"))?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let a: usize = a.trim().parse().map_err(|e| format!("range start: {e}"))?;
    let b: usize = b.trim().parse().map_err(|e| format!("range end: {e}"))?;
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok((a, b))
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

/// A failed command: message and exit code.
struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_resource_limit() { EXIT_CAP } else { EXIT_USAGE };
        Failure(code, e.to_string())
    }
}

impl From<relterm::ParseError> for Failure {
    fn from(e: relterm::ParseError) -> Self {
        Failure(EXIT_USAGE, e.to_string())
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Term { term, regular, vars } => cmd_term(&term, regular, vars),
        Command::Graph { term, dot, k } => cmd_graph(&term, dot, k),
        Command::Gen {
            inequality,
            algorithm,
            k_range,
            format,
            prune_trivial,
            out_dir,
        } => cmd_gen(&inequality, algorithm, k_range, format, prune_trivial, out_dir.as_deref()),
        Command::Check {
            inequality,
            algebra,
            level,
            mode,
            threads,
            enum_bound,
            cap,
        } => cmd_check(&inequality, &algebra.algebra, level, mode, threads as usize, enum_bound, cap),
        Command::Synthesize {
            inequality,
            algebra,
            algorithm,
            k,
            arity_cap,
            cap,
            format,
        } => cmd_synthesize(&inequality, &algebra.algebra, algorithm, k, arity_cap, cap, format),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn sexpr(t: &RelTerm) -> String {
    match t {
        RelTerm::Var(v) => v.display_name(),
        RelTerm::Meet(a, b) => format!("(meet {} {})", sexpr(a), sexpr(b)),
        RelTerm::Compose(a, b) => format!("(compose {} {})", sexpr(a), sexpr(b)),
        RelTerm::Plus(a, b) => format!("(plus {} {})", sexpr(a), sexpr(b)),
    }
}

fn names(vs: &std::collections::BTreeSet<relterm::VarId>) -> String {
    let v: Vec<String> = vs.iter().map(|v| v.display_name()).collect();
    format!("{{{}}}", v.join(", "))
}

fn cmd_term(text: &str, regular: bool, vars: bool) -> CmdResult {
    let t = relterm::parse_term(text)?;
    let all = !regular && !vars;
    if all {
        println!("term: {t}");
        println!("ast: {}", sexpr(&t));
    }
    if all || vars {
        println!("vars: {}", names(&t.vars()));
        match (relterm::left_vars(&t), relterm::right_vars(&t)) {
            (Ok(l), Ok(r)) => {
                println!("left: {}", names(&l));
                println!("right: {}", names(&r));
            }
            _ => {
                println!("left: undefined (term contains +)");
                println!("right: undefined (term contains +)");
            }
        }
    }
    if all || regular {
        match relterm::is_regular(&t) {
            Ok(r) => println!("regular: {r}"),
            Err(_) => println!("regular: undefined (term contains +)"),
        }
    }
    Ok(0)
}

fn cmd_graph(text: &str, dot: bool, k: Option<usize>) -> CmdResult {
    let mut t = relterm::parse_term(text)?;
    if let Some(k) = k {
        t = expand_plus(&t, k)?;
    } else if !t.is_plus_free() {
        return Err(Failure(EXIT_USAGE, "term contains `+`; pass --k to expand it first".into()));
    }
    let g = build_graph(&t)?;
    if dot {
        print!("{}", g.to_dot());
    } else {
        println!("vertices: {}", g.vertex_count());
        for e in g.edges() {
            println!("y{} -> y{} [{}]", e.from, e.to, e.label.display_name());
        }
    }
    Ok(0)
}

fn algorithm(a: AlgorithmArg) -> Algorithm {
    match a {
        AlgorithmArg::Classic => Algorithm::Classic,
        AlgorithmArg::Crr => Algorithm::Crr,
    }
}

fn conditions(ineq: &Inequality, alg: Algorithm, k_range: Option<(usize, usize)>) -> Result<Vec<MalcevCondition>, Failure> {
    match k_range {
        Some((a, b)) => Ok(malcevgen::gen_family(&ineq.lhs, &ineq.rhs, a, b, alg)?),
        None if !ineq.rhs.is_plus_free() => Err(Failure(
            EXIT_USAGE,
            "right-hand side contains `+`; pass --k-range to generate a family".into(),
        )),
        None => Ok(vec![match alg {
            Algorithm::Classic => malcevgen::gen_eq(&ineq.lhs, &ineq.rhs)?,
            Algorithm::Crr => malcevgen::gen_eqr(&ineq.lhs, &ineq.rhs)?,
        }]),
    }
}

fn cmd_gen(
    text: &str,
    alg: AlgorithmArg,
    k_range: Option<(usize, usize)>,
    format: FormatArg,
    prune: bool,
    out_dir: Option<&Path>,
) -> CmdResult {
    let ineq = relterm::parse_inequality(text)?;
    let conds = conditions(&ineq, algorithm(alg), k_range)?;
    let (fmt, ext) = match format {
        FormatArg::Json => (ConditionFormat::Json, "json"),
        FormatArg::Latex => (ConditionFormat::Latex, "tex"),
        FormatArg::Text => (ConditionFormat::Text, "txt"),
    };
    let stem = malcevgen::slug(&ineq.to_string());
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir).map_err(|e| Failure(EXIT_USAGE, format!("{}: {e}", dir.display())))?;
        for c in &conds {
            let name = match c.k {
                Some(k) => format!("{stem}-k{k}.{ext}"),
                None => format!("{stem}.{ext}"),
            };
            let path = dir.join(name);
            fs::write(&path, c.render(fmt, prune)).map_err(|e| Failure(EXIT_USAGE, format!("{}: {e}", path.display())))?;
            println!("{}", path.display());
        }
        return Ok(0);
    }
    if conds.len() == 1 {
        print!("{}", conds[0].render(fmt, prune));
        return Ok(0);
    }
    match fmt {
        ConditionFormat::Json => {
            let docs: Vec<serde_json::Value> = conds
                .iter()
                .map(|c| serde_json::from_str(&c.render(fmt, prune)).expect("rendered JSON parses"))
                .collect();
            println!("{}", serde_json::to_string_pretty(&docs).expect("serializes"));
        }
        ConditionFormat::Latex | ConditionFormat::Text => {
            let mark = if matches!(fmt, ConditionFormat::Latex) { "%" } else { "#" };
            for (i, c) in conds.iter().enumerate() {
                if i > 0 {
                    println!();
                }
                println!("{mark} k = {}", c.k.expect("family members carry k"));
                print!("{}", c.render(fmt, prune));
            }
        }
    }
    Ok(0)
}

fn load_algebra(name: &str) -> Result<FiniteAlgebra, Failure> {
    if let Some(a) = catalog(name) {
        return Ok(a);
    }
    let text = fs::read_to_string(name).map_err(|e| {
        Failure(
            EXIT_USAGE,
            format!("`{name}` is neither a catalog algebra ({}) nor a readable file: {e}", malcev_core::finalg::CATALOG.join(", ")),
        )
    })?;
    Ok(FiniteAlgebra::from_json(&text)?)
}

fn free_cap(flag: Option<usize>) -> Result<usize, Failure> {
    if let Some(c) = flag {
        return Ok(c);
    }
    match std::env::var("MALCEV_CAP") {
        Ok(v) => positive(v.trim()).map_err(|e| Failure(EXIT_USAGE, format!("MALCEV_CAP: {e}"))),
        Err(_) => Ok(DEFAULT_FREE_CAP),
    }
}

fn cmd_check(
    text: &str,
    algebra: &str,
    level: LevelArg,
    mode: ModeArg,
    threads: usize,
    enum_bound: usize,
    cap: Option<usize>,
) -> CmdResult {
    let ineq = relterm::parse_inequality(text)?;
    let a = load_algebra(algebra)?;
    let opts = CheckOptions {
        enum_bound,
        free_cap: free_cap(cap)?,
        threads,
        ..CheckOptions::default()
    };
    let mode = match mode {
        ModeArg::Crr => Mode::Crr,
        ModeArg::Con => Mode::Con,
    };
    let verdict = match level {
        LevelArg::Algebra => decide::check_algebra(&a, &ineq, mode, &opts)?,
        LevelArg::Variety => decide::check_variety(&a, &ineq, mode, &opts)?,
    };
    println!("{}", verdict.to_json());
    Ok(if verdict.holds { 0 } else { EXIT_FAILS })
}

fn cmd_synthesize(
    text: &str,
    algebra: &str,
    alg: AlgorithmArg,
    k: Option<usize>,
    arity_cap: usize,
    cap: Option<usize>,
    format: WitnessFormat,
) -> CmdResult {
    let ineq = relterm::parse_inequality(text)?;
    let a = load_algebra(algebra)?;
    let mut conds = conditions(&ineq, algorithm(alg), k.map(|k| (k, k)))?;
    let cond = conds.remove(0);
    let opts = SynthOptions {
        arity_cap,
        domain_cap: free_cap(cap)?,
        ..SynthOptions::default()
    };
    let Some(w) = decide::synthesize_terms(&a, &cond, &opts)? else {
        println!("no witness");
        return Ok(EXIT_FAILS);
    };
    match format {
        WitnessFormat::Text => print!("{}", w.render()),
        WitnessFormat::Json => {
            let terms: Vec<serde_json::Value> = w
                .terms
                .iter()
                .map(|(name, arity, t)| serde_json::json!({ "symbol": name, "arity": arity, "term": t.to_string() }))
                .collect();
            let doc = serde_json::json!({ "source": cond.source, "algebra": a.name, "witness": terms });
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializes"));
        }
    }
    Ok(0)
}
