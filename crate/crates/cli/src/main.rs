//! `zca`: build vanishing-set automata, decide their properties, and solve
//! the recurrence, S-unit and matrix problems from the command line.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use zca_core::apps::{
    load_matrix_problem, load_recurrences, load_sunit_problem, matrix_intersection, recurrence_zero_set, sunit_solutions, DecisionReport,
};
use zca_core::automaton::{BoolOp, Dfa, Direction};
use zca_core::bounds::{complexity_bound_chain, ChainParams};
use zca_core::coeff_field::parse::parse_field;
use zca_core::kernel::{build_zero_automaton, BuildOptions, DEFAULT_CEILING};
use zca_core::polyseries::parse_input;
use zca_core::signed_groups::{parse_signed_words, GroupAutomaticSet, SignedDfa};
use zca_core::{Error, Result};

#[derive(Parser)]
#[command(name = "zca", version, about = "Vanishing sets of algebraic power series in characteristic p as p-automatic sets")]
struct Cli {
    /// Print errors as one JSON object on stderr.
    #[arg(long, global = true)]
    json_errors: bool,
    /// Worker threads for independent sign-pattern builds.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the automaton of Z(f) for an input file.
    Build(BuildArgs),
    /// Decide a property; exit status 1 when it fails.
    Decide { property: Property, file: PathBuf },
    /// List the members with every coordinate at most --max in absolute value.
    Enum {
        file: PathBuf,
        #[arg(long)]
        max: u64,
    },
    /// Boolean operations and transformations of automata.
    Ops {
        op: Op,
        a: PathBuf,
        b: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Zero set of a sum of linear recurrences.
    Recurrence(ProblemArgs),
    /// Solutions of an S-unit equation.
    Sunit(ProblemArgs),
    /// A variety intersected with a group of commuting matrices.
    Matrix(ProblemArgs),
    /// Evaluate the complexity bound chain.
    Bound(BoundArgs),
    /// Point membership; exit status 1 for non-members.
    Member {
        file: PathBuf,
        /// Coordinates, or signed words with --words.
        #[arg(allow_hyphen_values = true, required = true)]
        point: Vec<String>,
        /// Read the point as signed words like +1110 -0011.
        #[arg(long)]
        words: bool,
        #[arg(long, value_enum, default_value_t = Dir::Msb)]
        word_direction: Dir,
    },
}

#[derive(Args)]
struct BuildArgs {
    /// Coefficient field, e.g. "GF(2)(u)"; may also be given in the file.
    #[arg(long)]
    field: Option<String>,
    #[arg(long)]
    input: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Write the kernel exploration as TSV.
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_CEILING)]
    ceiling: usize,
    #[arg(long, value_enum, default_value_t = Dir::Lsb)]
    direction: Dir,
    /// Use the Ore-relation engine even for rational inputs.
    #[arg(long)]
    force_general: bool,
    /// Check state outputs against coefficients up to this total degree.
    #[arg(long)]
    witness_check: Option<u32>,
}

#[derive(Args)]
struct ProblemArgs {
    problem: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Box for the listed members.
    #[arg(long, default_value_t = 8)]
    max: u64,
    #[arg(long, default_value_t = DEFAULT_CEILING)]
    ceiling: usize,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long)]
    p: u32,
    #[arg(long, default_value_t = 1)]
    e: u32,
    #[arg(long)]
    d: u32,
    #[arg(long = "H")]
    h: u64,
    #[arg(long)]
    s: u32,
    #[arg(long = "N2", default_value_t = 1)]
    n2: u64,
    #[arg(long = "N5", default_value_t = 1)]
    n5: u64,
    #[arg(long, default_value_t = 1)]
    s_alg: u64,
    #[arg(long, default_value_t = 1)]
    t: u64,
    /// Transcendence degree of the coefficient field.
    #[arg(long, default_value_t = 0)]
    r: u64,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Property {
    Empty,
    Finite,
    Periodic,
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    And,
    Or,
    Xor,
    Diff,
    Eq,
    Complement,
    Minimize,
    Reverse,
}

#[derive(Clone, Copy, ValueEnum)]
enum Dir {
    Lsb,
    Msb,
}

impl From<Dir> for Direction {
    fn from(d: Dir) -> Direction {
        match d {
            Dir::Lsb => Direction::Lsb,
            Dir::Msb => Direction::Msb,
        }
    }
}

/// Anything `zca` reads back: a plain automaton, a signed set, or a group set.
enum Artifact {
    Plain(Dfa),
    Signed(SignedDfa),
    Group(GroupAutomaticSet),
}

impl Artifact {
    fn load(path: &Path) -> Result<Artifact> {
        let text = read(path)?;
        let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        if v.get("preimage").is_some() {
            Ok(Artifact::Group(GroupAutomaticSet::from_json(&text)?))
        } else if v.get("orthants").is_some() {
            Ok(Artifact::Signed(SignedDfa::from_json(&text)?))
        } else {
            Ok(Artifact::Plain(Dfa::from_json(&text)?))
        }
    }

    fn signed(&self) -> Option<&SignedDfa> {
        match self {
            Artifact::Plain(_) => None,
            Artifact::Signed(s) => Some(s),
            Artifact::Group(g) => Some(&g.preimage),
        }
    }

    fn to_json(&self) -> String {
        match self {
            Artifact::Plain(a) => a.to_json(),
            Artifact::Signed(s) => s.to_json(),
            Artifact::Group(g) => g.to_json(),
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Writes to the file, or to stdout when no path is given.
fn emit(path: Option<&Path>, text: &str, out: &mut String) -> Result<()> {
    match path {
        Some(p) => write(p, &(text.to_string() + "\n")),
        None => {
            out.push_str(text);
            out.push('\n');
            Ok(())
        }
    }
}

fn tuple(x: &[i64]) -> String {
    let parts: Vec<String> = x.iter().map(|v| v.to_string()).collect();
    format!("({})", parts.join(","))
}

fn listing(points: Vec<Vec<i64>>) -> String {
    if points.first().is_some_and(|x| x.len() == 1) {
        points.iter().map(|x| x[0].to_string()).collect::<Vec<_>>().join(" ")
    } else {
        points.iter().map(|x| tuple(x)).collect::<Vec<_>>().join(" ")
    }
}

/// Runs a command, returning its exit status; stdout text accumulates in `out`.
fn run(cli: Cli, out: &mut String) -> Result<u8> {
    match cli.cmd {
        Cmd::Build(args) => {
            let field = args.field.as_deref().map(parse_field).transpose()?.map(Arc::new);
            let input = parse_input(&read(&args.input)?, field)?;
            let opts = BuildOptions {
                ceiling: args.ceiling,
                trace: args.trace.is_some(),
                witness_check: args.witness_check,
                force_general: args.force_general,
            };
            let build = build_zero_automaton(&input, &opts)?;
            let dfa = build.dfa.with_direction(args.direction.into()).minimize();
            if let (Some(path), Some(trace)) = (&args.trace, &build.trace) {
                write(path, trace)?;
            }
            if let Some(path) = &args.dot {
                write(path, &dfa.to_dot(None))?;
            }
            eprintln!("states: {} (explored {})", dfa.states(), build.raw_states());
            emit(args.output.as_deref(), &dfa.to_json(), out)?;
            Ok(0)
        }
        Cmd::Decide { property, file } => {
            let art = Artifact::load(&file)?;
            let (word, holds) = match (property, &art) {
                (Property::Empty, Artifact::Plain(a)) => {
                    let e = a.is_empty();
                    (if e { "empty" } else { "nonempty" }, e)
                }
                (Property::Empty, other) => {
                    let e = other.signed().unwrap().is_empty();
                    (if e { "empty" } else { "nonempty" }, e)
                }
                (Property::Finite, Artifact::Plain(a)) => {
                    let f = a.is_finite();
                    (if f { "finite" } else { "infinite" }, f)
                }
                (Property::Finite, other) => {
                    let f = other.signed().unwrap().is_finite();
                    (if f { "finite" } else { "infinite" }, f)
                }
                (Property::Periodic, Artifact::Plain(a)) => match a.eventual_period()? {
                    Some(c) => {
                        out.push_str(&format!("periodic preperiod={} period={}\n", c.preperiod, c.period));
                        return Ok(0);
                    }
                    None => ("aperiodic", false),
                },
                (Property::Periodic, _) => return Err(Error::Unsupported("periodicity is decided for subsets of N only".into())),
            };
            out.push_str(word);
            out.push('\n');
            Ok(if holds { 0 } else { 1 })
        }
        Cmd::Enum { file, max } => {
            let points = match Artifact::load(&file)? {
                Artifact::Plain(a) => a.enumerate(max).into_iter().map(|x| x.into_iter().map(|v| v as i64).collect()).collect(),
                other => other.signed().unwrap().enumerate(max),
            };
            out.push_str(&listing(points));
            out.push('\n');
            Ok(0)
        }
        Cmd::Ops { op, a, b, output } => {
            let a = Artifact::load(&a)?;
            let b = b.map(|p| Artifact::load(&p)).transpose()?;
            let binary = |op: BoolOp| -> Result<Artifact> {
                let b = b.as_ref().ok_or_else(|| Error::Parameter("this operation needs two automata".into()))?;
                match (&a, b) {
                    (Artifact::Plain(x), Artifact::Plain(y)) => Ok(Artifact::Plain(x.combine(op, &y.with_direction(x.dir))?.minimize())),
                    (x, y) => match (x.signed(), y.signed()) {
                        (Some(x), Some(y)) => Ok(Artifact::Signed(x.combine(op, y)?)),
                        _ => Err(Error::Parameter("cannot combine a subset of N^d with a subset of Z^d".into())),
                    },
                }
            };
            let plain = |what: &str| -> Result<&Dfa> {
                match &a {
                    Artifact::Plain(x) => Ok(x),
                    _ => Err(Error::Unsupported(format!("{what} applies to plain automata"))),
                }
            };
            let result = match op {
                Op::And => binary(BoolOp::And)?,
                Op::Or => binary(BoolOp::Or)?,
                Op::Xor => binary(BoolOp::Xor)?,
                Op::Diff => binary(BoolOp::Diff)?,
                Op::Eq => {
                    let x = binary(BoolOp::Xor)?;
                    let same = match &x {
                        Artifact::Plain(d) => d.is_empty(),
                        other => other.signed().unwrap().is_empty(),
                    };
                    out.push_str(if same { "equal\n" } else { "different\n" });
                    return Ok(if same { 0 } else { 1 });
                }
                Op::Complement => Artifact::Plain(plain("complement")?.complement().minimize()),
                Op::Minimize => Artifact::Plain(plain("minimize")?.minimize()),
                Op::Reverse => Artifact::Plain(plain("reverse")?.with_direction(plain("reverse")?.dir.flip()).minimize()),
            };
            emit(output.as_deref(), &result.to_json(), out)?;
            Ok(0)
        }
        Cmd::Recurrence(args) => {
            let (k, recs) = load_recurrences(&read(&args.problem)?)?;
            let opts = BuildOptions { ceiling: args.ceiling, ..Default::default() };
            let z = recurrence_zero_set(&k, &recs, &opts)?.dfa;
            if let Some(path) = &args.output {
                write(path, &(z.to_json() + "\n"))?;
            }
            report(&DecisionReport::of_dfa(&z, args.max), args.json, out);
            Ok(0)
        }
        Cmd::Sunit(args) => {
            let (k, prob) = load_sunit_problem(&read(&args.problem)?)?;
            let opts = BuildOptions { ceiling: args.ceiling, ..Default::default() };
            let g = sunit_solutions(&k, &prob, &opts)?;
            if let Some(path) = &args.output {
                write(path, &(g.to_json() + "\n"))?;
            }
            report(&DecisionReport::of(&g.preimage, args.max), args.json, out);
            Ok(0)
        }
        Cmd::Matrix(args) => {
            let (k, prob) = load_matrix_problem(&read(&args.problem)?)?;
            let opts = BuildOptions { ceiling: args.ceiling, ..Default::default() };
            let g = matrix_intersection(&k, &prob, &opts)?;
            if let Some(path) = &args.output {
                write(path, &(g.to_json() + "\n"))?;
            }
            report(&DecisionReport::of(&g.preimage, args.max), args.json, out);
            Ok(0)
        }
        Cmd::Bound(b) => {
            if b.h == 0 || b.s == 0 || b.d == 0 || !zca_core::coeff_field::gf::is_prime(b.p as u64) {
                return Err(Error::Parameter("bound needs a prime p and H, s, d ≥ 1".into()));
            }
            let params = ChainParams { p: b.p, e: b.e, d: b.d, h: b.h, s: b.s, n2: b.n2, n5: b.n5, s_alg: b.s_alg, t: b.t, r: b.r, n: b.n };
            let rep = complexity_bound_chain(&params);
            if b.json {
                out.push_str(&serde_json::to_string_pretty(&rep).expect("serializable"));
                out.push('\n');
            } else {
                out.push_str(&rep.table());
            }
            Ok(0)
        }
        Cmd::Member { file, point, words, word_direction } => {
            let art = Artifact::load(&file)?;
            let x: Vec<i64> = if words {
                let w: Vec<&str> = point.iter().map(|s| s.as_str()).collect();
                let p = match &art {
                    Artifact::Plain(a) => a.p,
                    other => other.signed().unwrap().p,
                };
                parse_signed_words(&w, p, word_direction.into())?
            } else {
                point.iter().map(|s| s.parse::<i64>().map_err(|_| Error::Parse(format!("bad coordinate {s:?}")))).collect::<Result<_>>()?
            };
            let inside = match &art {
                Artifact::Plain(a) => {
                    if a.d != x.len() {
                        return Err(Error::Parameter(format!("expected {} coordinates", a.d)));
                    }
                    x.iter().all(|&v| v >= 0) && a.accepts(&x.iter().map(|&v| v as u64).collect::<Vec<_>>())
                }
                other => {
                    let s = other.signed().unwrap();
                    if s.d != x.len() {
                        return Err(Error::Parameter(format!("expected {} coordinates", s.d)));
                    }
                    s.contains(&x)
                }
            };
            out.push_str(if inside { "member\n" } else { "not member\n" });
            Ok(if inside { 0 } else { 1 })
        }
    }
}

fn report(rep: &DecisionReport, json: bool, out: &mut String) {
    if json {
        out.push_str(&serde_json::to_string_pretty(rep).expect("serializable"));
        out.push('\n');
    } else {
        out.push_str(&rep.to_string());
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let json_errors = cli.json_errors;
    let mut out = String::new();
    let result = run(cli, &mut out);
    print!("{out}");
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            if json_errors {
                let obj = serde_json::json!({ "kind": e.kind(), "message": e.to_string(), "exit_code": e.exit_code() });
                eprintln!("{obj}");
            } else {
                eprintln!("zca: {e}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
