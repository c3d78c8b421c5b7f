//! Command-line front end: argument parsing, dispatch, and report output.

use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use delpezzo_core::e8::{self, EpsVector};
use delpezzo_core::mutation::{self, StepKind};
use delpezzo_core::oracle;
use delpezzo_core::picard;
use delpezzo_core::quadratic::{self, Feasibility, SurfaceVariant};
use delpezzo_core::rational::{fmt_rational, Rational};
use delpezzo_core::report::{object, payload, Report, Status};

#[derive(Debug, Parser)]
#[command(name = "delpezzo", version, about = "Exceptional pairs on del Pezzo surfaces")]
pub struct Cli {
    /// Print the structured JSON report instead of aligned text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Also write the report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<std::path::PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Construct and verify the pair (V, O) on a degree-4 surface.
    Pair {
        #[arg(short, allow_negative_numbers = true)]
        d: i64,
        #[arg(short, allow_negative_numbers = true)]
        r: i64,
        /// Include every chain step.
        #[arg(long)]
        show_chain: bool,
    },
    /// Feasibility of a slope on a surface of degree 5..9.
    Classify {
        #[arg(short, allow_negative_numbers = true)]
        k: i64,
        #[arg(short, allow_negative_numbers = true)]
        d: i64,
        #[arg(short, allow_negative_numbers = true)]
        r: i64,
        /// Degree-8 surface.
        #[arg(long, value_enum)]
        surface: Option<SurfaceArg>,
    },
    /// Reduce a vector of the E8 space.
    Reduce {
        /// Eight rationals separated by spaces or commas.
        #[arg(long, allow_hyphen_values = true)]
        eps: String,
        #[arg(long, value_enum)]
        mode: ReduceMode,
    },
    /// Check the three W(D5) orbit identities for one (a, b).
    Orbit {
        #[arg(short, allow_negative_numbers = true)]
        a: i64,
        #[arg(short, allow_negative_numbers = true)]
        b: i64,
    },
    /// Feasible degrees and dimensions for a bracket of type (d, r).
    #[command(name = "theoremB", alias = "theorem-b")]
    TheoremB {
        #[arg(short, allow_negative_numbers = true)]
        d: i64,
        #[arg(short, allow_negative_numbers = true)]
        r: i64,
    },
    /// Run the brute-force oracles.
    Verify {
        #[arg(value_enum)]
        target: VerifyTarget,
        /// Bound on |a|, |b| for the orbit identities.
        #[arg(long, default_value_t = 8)]
        bound: i64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SurfaceArg {
    F1,
    P1p1,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ReduceMode {
    Chamber,
    Alcove,
    D5,
    Voronoi,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum VerifyTarget {
    All,
    UnitLemma,
    AlcoveLemma,
    Worbit,
    Structural,
}

/// Outcome of one invocation.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub fn run(argv: &[String]) -> Outcome {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let echo: Vec<String> = argv.iter().skip(1).cloned().collect();
    let start = Instant::now();
    let mut report = match dispatch(&cli.command, echo) {
        Ok(r) => r,
        Err(msg) => {
            return Outcome {
                code: EXIT_USAGE,
                stdout: String::new(),
                stderr: format!("error: {msg}\n"),
            }
        }
    };
    report.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    let text = if cli.json { report.to_json() + "\n" } else { report.to_human() };
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, &text) {
            return Outcome {
                code: EXIT_USAGE,
                stdout: String::new(),
                stderr: format!("error: cannot write {}: {e}\n", path.display()),
            };
        }
    }
    let code = if report.status == Status::Fail { EXIT_CHECK_FAILED } else { EXIT_OK };
    Outcome { code, stdout: text, stderr: String::new() }
}

type CmdResult = std::result::Result<Report, String>;

fn dispatch(cmd: &Command, echo: Vec<String>) -> CmdResult {
    match *cmd {
        Command::Pair { d, r, show_chain } => cmd_pair(echo, d, r, show_chain),
        Command::Classify { k, d, r, surface } => cmd_classify(echo, k, d, r, surface),
        Command::Reduce { ref eps, mode } => cmd_reduce(echo, eps, mode),
        Command::Orbit { a, b } => cmd_orbit(echo, a, b),
        Command::TheoremB { d, r } => cmd_theorem_b(echo, d, r),
        Command::Verify { target, bound } => cmd_verify(echo, target, bound),
    }
}

fn err(e: delpezzo_core::Error) -> String {
    e.to_string()
}

const BASIS_4: &str = "s f e1 e2 e3 e4";

fn cmd_pair(echo: Vec<String>, d: i64, r: i64, show_chain: bool) -> CmdResult {
    let chain = mutation::construct_pair(d, r).map_err(err)?;
    let verdict = mutation::verify_chain(&chain);
    let end = chain.endpoint();
    let canon = picard::d5_canonical_form(end.c1()).map_err(err)?;
    let expected = mutation::standard_c1(d, r).map_err(err)?;
    let mut fields = vec![
        ("d", json!(d)),
        ("r", json!(r)),
        ("slope", json!(fmt_rational(&Rational::new(d, r)))),
        ("basis", json!(format!("k=4 {BASIS_4}"))),
        (
            "endpoint",
            object(vec![
                ("rank", json!(end.rank())),
                ("degree", json!(end.degree())),
                ("c1", json!(end.c1().coeffs())),
            ]),
        ),
        ("chi", json!(end.chi().map_err(err)?)),
        ("chi_self", json!(mutation::chi_pair(end, end).map_err(err)?)),
        (
            "canonical",
            object(vec![
                ("rep", json!(canon.rep.to_string())),
                ("word", json!(canon.word)),
                ("standard_form", json!(format!("D_{{{},{}}}", d + r, -r))),
                ("standard_c1", json!(expected.coeffs())),
            ]),
        ),
        (
            "chain",
            object(vec![
                ("length", json!(chain.steps.len())),
                ("base", json!(chain.count(StepKind::Base))),
                ("inductive", json!(chain.count(StepKind::Inductive))),
                ("m", json!(chain.count(StepKind::SlopeM))),
                ("r", json!(chain.count(StepKind::SlopeR))),
            ]),
        ),
        (
            "verify",
            object(vec![
                ("passed", json!(verdict.passed)),
                ("checks", json!(verdict.checks)),
                ("failure", payload(&verdict.failure)),
            ]),
        ),
    ];
    if show_chain {
        let tree: Vec<String> = chain.to_tree_text().lines().map(str::to_string).collect();
        fields.push(("chain_tree", json!(tree)));
        fields.push(("steps", payload(&chain.steps)));
    }
    let rep = Report::new(echo, Status::from_passed(verdict.passed), object(fields));
    Ok(match verdict.failure {
        Some(f) => rep.with_failure(f.check),
        None => rep,
    })
}

fn feasibility_payload(v: &Feasibility) -> Value {
    match v {
        Feasibility::Feasible { norm, base, word } => object(vec![
            ("verdict", json!("feasible")),
            ("norm", json!(norm)),
            ("base", object(vec![("r", json!(base.r)), ("d", json!(base.d)), ("note", json!(base.note))])),
            ("word", json!(word.iter().map(|m| m.to_string()).collect::<Vec<_>>())),
        ]),
        Feasibility::Infeasible { norm, reason } => object(vec![
            ("verdict", json!("infeasible")),
            ("norm", json!(norm)),
            ("reason", json!(reason)),
        ]),
        Feasibility::SurfaceDependent { norm, detail } => object(vec![
            ("verdict", json!("surface-dependent")),
            ("norm", json!(norm)),
            ("detail", json!(detail)),
        ]),
        Feasibility::OutOfInterval { norm } => object(vec![
            ("verdict", json!("out-of-interval")),
            ("norm", json!(norm)),
        ]),
    }
}

fn cmd_classify(echo: Vec<String>, k: i64, d: i64, r: i64, surface: Option<SurfaceArg>) -> CmdResult {
    let variant = surface.map(|s| match s {
        SurfaceArg::F1 => SurfaceVariant::F1,
        SurfaceArg::P1p1 => SurfaceVariant::P1xP1,
    });
    let v = quadratic::classify_slope(k, d, r, variant).map_err(err)?;
    let norm = v.norm();
    let p = object(vec![
        ("k", json!(k)),
        ("d", json!(d)),
        ("r", json!(r)),
        ("surface", json!(variant.map(|s| format!("{s:?}")))),
        ("norm", json!(norm)),
        ("norm_at_least_minus_k", json!(norm >= -k)),
        ("result", feasibility_payload(&v)),
    ]);
    Ok(Report::new(echo, Status::Info, p))
}

fn parse_rational(tok: &str) -> std::result::Result<Rational, String> {
    let bad = || format!("cannot parse {tok:?} as a rational");
    match tok.split_once('/') {
        Some((n, q)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(format!("zero denominator in {tok:?}"));
            }
            Ok(Rational::new(n, q))
        }
        None => tok.trim().parse::<i64>().map(Rational::from_integer).map_err(|_| bad()),
    }
}

pub fn parse_eps(s: &str) -> std::result::Result<EpsVector, String> {
    let toks: Vec<&str> = s
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .collect();
    if toks.len() != 8 {
        return Err(format!("expected 8 coordinates, got {}", toks.len()));
    }
    let mut c = [Rational::from_integer(0); 8];
    for (slot, t) in c.iter_mut().zip(toks) {
        *slot = parse_rational(t)?;
    }
    Ok(EpsVector::from_rationals(&c))
}

fn cmd_reduce(echo: Vec<String>, eps: &str, mode: ReduceMode) -> CmdResult {
    let x = parse_eps(eps)?;
    let rs = e8::root_system();
    let mut fields = vec![("input", payload(&x)), ("mode", json!(format!("{mode:?}").to_lowercase()))];
    let replay_ok = match mode {
        ReduceMode::Chamber | ReduceMode::D5 => {
            let red = if matches!(mode, ReduceMode::Chamber) {
                e8::chamber_reduce(&x)
            } else {
                e8::d5_reduce(&x)
            };
            fields.push(("word", json!(red.word.letters())));
            fields.push(("result", payload(&red.result)));
            red.word.apply(&x) == red.result
        }
        ReduceMode::Alcove => {
            let red = e8::alcove_reduce(&x);
            fields.push(("word", json!(red.word.letters())));
            fields.push(("shift", payload(&red.shift)));
            fields.push(("result", payload(&red.result)));
            fields.push(("in_alcove", json!(e8::alcove_contains(&red.result))));
            red.word.apply(&x) == red.result
        }
        ReduceMode::Voronoi => {
            let red = e8::chamber_reduce(&x);
            let top = red.result.dot(&rs.highest);
            let inside = e8::voronoi_contains(&x);
            fields.push(("dominant", payload(&red.result)));
            fields.push(("highest_root_pairing", json!(fmt_rational(&top))));
            fields.push(("inside", json!(inside)));
            red.word.apply(&x) == red.result && inside == (top <= Rational::from_integer(1))
        }
    };
    fields.push(("replay_ok", json!(replay_ok)));
    let rep = Report::new(echo, Status::from_passed(replay_ok), object(fields));
    Ok(if replay_ok { rep } else { rep.with_failure("replay") })
}

fn cmd_orbit(echo: Vec<String>, a: i64, b: i64) -> CmdResult {
    let outcomes = oracle::check_orbit_identities(a, b).map_err(err)?;
    let first_bad = outcomes.iter().find(|o| !o.agree).map(|o| format!("{:?}", o.identity));
    let p = object(vec![("a", json!(a)), ("b", json!(b)), ("basis", json!(format!("k=4 {BASIS_4}"))), ("identities", payload(&outcomes))]);
    let rep = Report::new(echo, Status::from_passed(first_bad.is_none()), p);
    Ok(match first_bad {
        Some(name) => rep.with_failure(name),
        None => rep,
    })
}

fn cmd_theorem_b(echo: Vec<String>, d: i64, r: i64) -> CmdResult {
    let t = quadratic::theorem_b_report(d, r).map_err(err)?;
    let per: Vec<Value> = t
        .per_degree
        .iter()
        .map(|v| {
            object(vec![
                ("k", json!(v.k)),
                ("value", json!(v.value)),
                ("feasible", json!(v.feasibility.is_feasible())),
                ("result", feasibility_payload(&v.feasibility)),
            ])
        })
        .collect();
    let p = object(vec![
        ("d", json!(d)),
        ("r", json!(r)),
        ("outside_hypotheses", json!(t.outside_hypotheses)),
        ("feasible_k", json!(t.feasible)),
        ("max_dimension", json!(t.max_dimension)),
        ("per_degree", Value::Array(per)),
    ]);
    Ok(Report::new(echo, Status::Info, p))
}

struct Section {
    name: &'static str,
    passed: bool,
    first_failure: Option<String>,
    payload: Value,
}

fn verify_unit() -> Section {
    let (ok, vectors) = oracle::check_unit_lemma();
    Section {
        name: "unit-lemma",
        passed: ok,
        first_failure: (!ok).then(|| "unit-lemma".into()),
        payload: object(vec![("count", json!(vectors.len())), ("vectors", payload(&vectors))]),
    }
}

fn verify_alcove() -> std::result::Result<Section, String> {
    let cases = oracle::check_alcove_lemma().map_err(err)?;
    let bad = cases.iter().find(|c| !c.passed).map(|c| format!("alcove-lemma ({},{})", c.d, c.r));
    Ok(Section {
        name: "alcove-lemma",
        passed: bad.is_none(),
        first_failure: bad,
        payload: payload(&cases),
    })
}

fn verify_worbit(bound: i64) -> std::result::Result<Section, String> {
    let rep = oracle::check_worbit_identities(bound).map_err(err)?;
    let bad = if rep.passed {
        None
    } else {
        Some(match rep.failures.first() {
            Some(f) => format!("worbit {:?} ({},{})", f.identity, f.a, f.b),
            None => "worbit orbit-size".into(),
        })
    };
    Ok(Section {
        name: "worbit",
        passed: rep.passed,
        first_failure: bad,
        payload: payload(&rep),
    })
}

fn verify_structural() -> std::result::Result<Section, String> {
    let rep = oracle::check_structural_identities().map_err(err)?;
    let bad = rep.checks.iter().find(|c| !c.passed).map(|c| c.name.clone());
    Ok(Section {
        name: "structural",
        passed: rep.passed,
        first_failure: bad,
        payload: payload(&rep),
    })
}

fn cmd_verify(echo: Vec<String>, target: VerifyTarget, bound: i64) -> CmdResult {
    let sections = match target {
        VerifyTarget::UnitLemma => vec![verify_unit()],
        VerifyTarget::AlcoveLemma => vec![verify_alcove()?],
        VerifyTarget::Worbit => vec![verify_worbit(bound)?],
        VerifyTarget::Structural => vec![verify_structural()?],
        VerifyTarget::All => vec![
            verify_unit(),
            verify_alcove()?,
            verify_worbit(bound)?,
            verify_structural()?,
        ],
    };
    let passed = sections.iter().all(|s| s.passed);
    let first = sections.iter().find_map(|s| s.first_failure.clone());
    let p = if sections.len() == 1 {
        sections.into_iter().next().map(|s| s.payload).unwrap_or(Value::Null)
    } else {
        let mut fields = Vec::new();
        let names: Vec<&str> = sections.iter().map(|s| s.name).collect();
        for (s, name) in sections.into_iter().zip(names) {
            fields.push((name, object(vec![("passed", json!(s.passed)), ("detail", s.payload)])));
        }
        object(fields)
    };
    let rep = Report::new(echo, Status::from_passed(passed), p);
    Ok(match first {
        Some(name) => rep.with_failure(name),
        None => rep,
    })
}
