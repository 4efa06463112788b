//! Command-line front end: problem directories, subcommands and output
//! formats. [`run`] returns the exit code and stdout so that tests can call
//! it in-process.

use clap::{Args, Parser, Subcommand, ValueEnum};
use dlinterp::families::{alch_k, alch_tower, alcq_tower, corpus, ProblemText};
use dlinterp::interpolate::{compute_interpolant, InterpolationProblem, NoInterpolant, Options, Outcome, Verification};
use dlinterp::mosaics::{decide_joint_consistency, extract_model, Config, Mode};
use dlinterp::par::Parallelism;
use dlinterp::reasoner::Reasoner;
use dlinterp::semantics::max_sigma_bisimulation;
use dlinterp::separators::Strategy;
use dlinterp::syntax::{
    parse_concept, parse_model, parse_ontology, parse_signature, print_concept, Dialect, Ontology, PrintMode,
    TermStore,
};
use dlinterp::{Error, Result};
use std::ffi::OsString;
use std::fmt::Write;
use std::fs;
use std::path::{Path, PathBuf};

pub const EXIT_FOUND: i32 = 0;
pub const EXIT_NONE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "dlinterp", version, about = "ALC interpolants under ALCH and ALCQ ontologies")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Interpolate O |= left ⊑ right over a problem directory.
    Interpolate(InterpolateArgs),
    /// Satisfiability of a concept under an ontology.
    Sat(ConceptArgs),
    /// Whether O |= C ⊑ D.
    Entails(EntailsArgs),
    /// Maximal Σ-bisimulation between two model files.
    Bisim(BisimArgs),
    /// Witness model pair for a problem directory without an interpolant.
    Model(ProblemArgs),
    /// Write an example family as a problem directory.
    Generate(GenerateArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum DialectArg {
    Alch,
    Alcq,
}

impl From<DialectArg> for Dialect {
    fn from(d: DialectArg) -> Self {
        match d {
            DialectArg::Alch => Dialect::Alch,
            DialectArg::Alcq => Dialect::Alcq,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputMode {
    Tree,
    Dag,
    JsonStats,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Auto,
    Product,
    Sequential,
}

#[derive(Args, Debug, Clone)]
pub struct Budgets {
    #[arg(long, env = "DLINTERP_MAX_MOSAICS", default_value_t = 1 << 16, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_mosaics: u64,
    #[arg(long, env = "DLINTERP_MAX_PARTITION_NODES", default_value_t = 1 << 22, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_partition_nodes: u64,
    #[arg(long, env = "DLINTERP_MAX_SAT_CALLS", default_value_t = 1 << 22, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_sat_calls: u64,
    /// Start elimination from every set of types instead of the lazy search.
    #[arg(long)]
    pub exhaustive: bool,
    /// Run elimination rounds on one thread.
    #[arg(long)]
    pub sequential: bool,
}

impl Budgets {
    pub fn config(&self) -> Config {
        Config {
            mode: if self.exhaustive { Mode::Exhaustive } else { Mode::Lazy },
            max_mosaics: self.max_mosaics as usize,
            max_partition_nodes: self.max_partition_nodes,
            max_sat_calls: self.max_sat_calls,
            parallelism: if self.sequential {
                Parallelism::Sequential
            } else {
                Parallelism::Parallel
            },
        }
    }
}

#[derive(Args, Debug)]
pub struct ProblemArgs {
    /// Directory with ontology.dl, left.dl, right.dl, signature.txt and
    /// optionally dialect.txt.
    pub dir: PathBuf,
    #[arg(long, value_enum)]
    pub dialect: Option<DialectArg>,
    /// Overrides signature.txt.
    #[arg(long)]
    pub sigma: Option<String>,
    #[command(flatten)]
    pub budgets: Budgets,
}

#[derive(Args, Debug)]
pub struct InterpolateArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, value_enum, default_value_t = OutputMode::Dag)]
    pub output: OutputMode,
    #[arg(long)]
    pub emit_trace: bool,
    #[arg(long)]
    pub no_verify: bool,
    #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
    pub strategy: StrategyArg,
}

#[derive(Args, Debug)]
pub struct ConceptArgs {
    pub concept: String,
    #[arg(long)]
    pub ontology: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = DialectArg::Alcq)]
    pub dialect: DialectArg,
}

#[derive(Args, Debug)]
pub struct EntailsArgs {
    pub left: String,
    pub right: String,
    #[arg(long)]
    pub ontology: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = DialectArg::Alcq)]
    pub dialect: DialectArg,
}

#[derive(Args, Debug)]
pub struct BisimArgs {
    pub first: PathBuf,
    pub second: PathBuf,
    #[arg(long, default_value = "")]
    pub sigma: String,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    AlchK,
    AlchTower,
    AlcqTower,
    /// A corpus problem drawn with `--seed`.
    Random,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[arg(value_enum)]
    pub family: Family,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub k: u64,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = DialectArg::Alch)]
    pub dialect: DialectArg,
}

pub struct Output {
    pub code: i32,
    pub stdout: String,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

fn with_file<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

pub fn read_problem(dir: &Path, dialect: Option<DialectArg>, sigma: Option<&str>) -> Result<ProblemText> {
    let dialect = match dialect {
        Some(d) => d.into(),
        None => match fs::read_to_string(dir.join("dialect.txt")) {
            Ok(s) => match s.trim() {
                "alch" => Dialect::Alch,
                "alcq" => Dialect::Alcq,
                other => return Err(Error::Invalid(format!("unknown dialect {other:?}"))),
            },
            Err(_) => Dialect::Alch,
        },
    };
    let ontology = match fs::read_to_string(dir.join("ontology.dl")) {
        Ok(s) => s,
        Err(_) => String::new(),
    };
    let signature = match sigma {
        Some(s) => s.to_string(),
        None => read(&dir.join("signature.txt"))?,
    };
    Ok(ProblemText {
        dialect,
        ontology,
        left: read(&dir.join("left.dl"))?,
        right: read(&dir.join("right.dl"))?,
        signature,
    })
}

fn load_problem(dir: &Path, dialect: Option<DialectArg>, sigma: Option<&str>) -> Result<InterpolationProblem> {
    let p = read_problem(dir, dialect, sigma)?;
    let mut store = TermStore::new();
    let ontology = with_file(&dir.join("ontology.dl"), parse_ontology(&mut store, &p.ontology, p.dialect))?;
    let c0 = with_file(&dir.join("left.dl"), parse_concept(&mut store, &p.left))?;
    let d0 = with_file(&dir.join("right.dl"), parse_concept(&mut store, &p.right))?;
    let sigma = parse_signature(&p.signature)?;
    InterpolationProblem::new(store, ontology, c0, d0, sigma)
}

pub fn write_problem(dir: &Path, p: &ProblemText) -> Result<()> {
    let io = |e: std::io::Error| Error::Invalid(format!("{}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io)?;
    let dialect = match p.dialect {
        Dialect::Alch => "alch",
        Dialect::Alcq => "alcq",
    };
    for (name, text) in [
        ("ontology.dl", p.ontology.clone()),
        ("left.dl", format!("{}\n", p.left)),
        ("right.dl", format!("{}\n", p.right)),
        ("signature.txt", format!("{}\n", p.signature)),
        ("dialect.txt", format!("{dialect}\n")),
    ] {
        fs::write(dir.join(name), text).map_err(io)?;
    }
    Ok(())
}

fn cmd_interpolate(a: &InterpolateArgs) -> Result<Output> {
    let pa = &a.problem;
    let mut p = load_problem(&pa.dir, pa.dialect, pa.sigma.as_deref())?;
    let opts = Options {
        config: pa.budgets.config(),
        strategy: match a.strategy {
            StrategyArg::Auto => Strategy::Auto,
            StrategyArg::Product => Strategy::Product,
            StrategyArg::Sequential => Strategy::Sequential,
        },
        verify: !a.no_verify,
        emit_trace: a.emit_trace,
    };
    let res = compute_interpolant(&mut p, &opts)?;
    let s = &res.stats;
    let mut out = String::new();
    if a.output == OutputMode::JsonStats {
        let v = serde_json::json!({
            "types": s.types,
            "mosaics": s.mosaics,
            "rounds": s.rounds,
            "eliminated": s.eliminated,
            "interpolant_dag_size": s.interpolant_dag_size,
            "sat_calls": s.sat_calls,
            "wall_ms": s.wall_ms,
        });
        let _ = writeln!(out, "{v}");
    }
    let code = match &res.outcome {
        Outcome::Interpolant(e) => {
            if a.output != OutputMode::JsonStats {
                out.push_str("verdict: interpolant\n");
                let mode = if a.output == OutputMode::Tree {
                    PrintMode::Tree
                } else {
                    PrintMode::Dag
                };
                out.push_str(&print_concept(&p.store, *e, mode));
                if !out.ends_with('\n') {
                    out.push('\n');
                }
            }
            EXIT_FOUND
        }
        Outcome::None(why) => {
            if a.output != OutputMode::JsonStats {
                describe_none(&mut out, &p, why);
            }
            EXIT_NONE
        }
    };
    if a.output != OutputMode::JsonStats {
        let verified = match res.verification {
            Verification::Passed => "true",
            Verification::Failed => "false",
            Verification::Skipped => "skipped",
        };
        let _ = writeln!(out, "verified: {verified}");
        let _ = writeln!(
            out,
            "stats: types={} mosaics={} rounds={} eliminated={} interpolant_dag_size={} sat_calls={}",
            s.types, s.mosaics, s.rounds, s.eliminated, s.interpolant_dag_size, s.sat_calls
        );
    }
    if let Some(t) = &res.trace {
        out.push_str("trace:\n");
        out.push_str(t);
        if !out.ends_with('\n') {
            out.push('\n');
        }
    }
    Ok(Output { code, stdout: out })
}

fn describe_none(out: &mut String, p: &InterpolationProblem, why: &NoInterpolant) {
    match why {
        NoInterpolant::NotEntailed { countermodel } => {
            out.push_str("verdict: none (inclusion not entailed)\n");
            let _ = writeln!(out, "countermodel type: {}", print_concept(&p.store, *countermodel, PrintMode::Tree));
        }
        NoInterpolant::Witness { model, checked } => {
            out.push_str("verdict: none (bisimilar witness)\n");
            let i = &model.interp;
            let _ = writeln!(out, "witness: left {} right {}", i.label(model.e1), i.label(model.e2));
            let _ = writeln!(out, "witness checked: {checked}");
            out.push_str(&i.to_text());
        }
        NoInterpolant::Mosaic { types, partition_roles } => {
            out.push_str("verdict: none (surviving mosaic)\n");
            for &t in types {
                let _ = writeln!(out, "type: {}", print_concept(&p.store, t, PrintMode::Tree));
            }
            let roles: Vec<&str> = partition_roles.iter().map(|&r| p.store.name_str(r)).collect();
            let _ = writeln!(out, "partition roles: {}", roles.join(" "));
        }
    }
}

fn load_ontology(store: &mut TermStore, path: Option<&Path>, dialect: Dialect) -> Result<Ontology> {
    match path {
        Some(p) => with_file(p, parse_ontology(store, &read(p)?, dialect)),
        None => Ok(Ontology::empty(dialect)),
    }
}

fn cmd_sat(a: &ConceptArgs) -> Result<Output> {
    let mut store = TermStore::new();
    let o = load_ontology(&mut store, a.ontology.as_deref(), a.dialect.into())?;
    let c = parse_concept(&mut store, &a.concept)?;
    let sat = Reasoner::new(&o).sat(&store, c);
    Ok(Output {
        code: if sat { EXIT_FOUND } else { EXIT_NONE },
        stdout: format!("{}\n", if sat { "satisfiable" } else { "unsatisfiable" }),
    })
}

fn cmd_entails(a: &EntailsArgs) -> Result<Output> {
    let mut store = TermStore::new();
    let o = load_ontology(&mut store, a.ontology.as_deref(), a.dialect.into())?;
    let c = parse_concept(&mut store, &a.left)?;
    let d = parse_concept(&mut store, &a.right)?;
    let yes = Reasoner::new(&o).entails(&store, c, d);
    Ok(Output {
        code: if yes { EXIT_FOUND } else { EXIT_NONE },
        stdout: format!("{}\n", if yes { "entailed" } else { "not entailed" }),
    })
}

fn cmd_bisim(a: &BisimArgs) -> Result<Output> {
    let i1 = with_file(&a.first, parse_model(&read(&a.first)?))?;
    let i2 = with_file(&a.second, parse_model(&read(&a.second)?))?;
    let sigma = parse_signature(&a.sigma)?;
    let z = max_sigma_bisimulation(&i1, &i2, &sigma);
    let mut out = String::new();
    for (d, e) in z.pairs() {
        let _ = writeln!(out, "{} {}", i1.label(d), i2.label(e));
    }
    Ok(Output {
        code: EXIT_FOUND,
        stdout: out,
    })
}

fn cmd_model(a: &ProblemArgs) -> Result<Output> {
    let mut p = load_problem(&a.dir, a.dialect, a.sigma.as_deref())?;
    let nd = p.store.not(p.d0);
    let d = decide_joint_consistency(&p.store, &p.ontology, p.c0, nd, &p.sigma, &a.budgets.config())?;
    if !d.is_consistent() {
        return Ok(Output {
            code: EXIT_NONE,
            stdout: "no surviving mosaic holds both roots\n".into(),
        });
    }
    let m = extract_model(&p.store, &d)?;
    let i = &m.interp;
    let mut out = format!("left {} right {}\n", i.label(m.e1), i.label(m.e2));
    out.push_str(&i.to_text());
    out.push_str("bisimulation:\n");
    for (x, y) in m.z.pairs() {
        let _ = writeln!(out, "{} {}", i.label(x), i.label(y));
    }
    Ok(Output {
        code: EXIT_FOUND,
        stdout: out,
    })
}

fn cmd_generate(a: &GenerateArgs) -> Result<Output> {
    let p = match a.family {
        Family::AlchK => alch_k(a.k as usize),
        Family::AlchTower => alch_tower(),
        Family::AlcqTower => alcq_tower(),
        Family::Random => corpus(a.dialect.into(), 1, a.seed).remove(0),
    };
    write_problem(&a.out, &p)?;
    Ok(Output {
        code: EXIT_FOUND,
        stdout: format!("wrote {}\n", a.out.display()),
    })
}

pub fn execute(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Interpolate(a) => cmd_interpolate(a),
        Command::Sat(a) => cmd_sat(a),
        Command::Entails(a) => cmd_entails(a),
        Command::Bisim(a) => cmd_bisim(a),
        Command::Model(a) => cmd_model(a),
        Command::Generate(a) => cmd_generate(a),
    }
}

/// Parses `args` (program name first) and runs the command. Errors go to
/// stdout prefixed with `error:` and map to exit code 2.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_FOUND };
            return Output {
                code,
                stdout: e.to_string(),
            };
        }
    };
    match execute(&cli) {
        Ok(o) => o,
        Err(e) => Output {
            code: EXIT_ERROR,
            stdout: format!("error: {e}\n"),
        },
    }
}
