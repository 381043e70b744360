use clap::{Args, Parser, Subcommand, ValueEnum};
use idealconv_core::ap::{ap_verdict, pi_condition_crosscheck};
use idealconv_core::engine::{i_converges, ihj_decide};
use idealconv_core::finite::{crosscheck, lemma_suite, oracle_equivalence, ClaimReport, Fixture, SuiteReport};
use idealconv_core::sample::fixture_corpus;
use idealconv_core::{classify, ClassifyResult, Error, Ideal, IhjVerdict, PiecewiseFn, Rational, Universe, Verdict};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::fixture::{load, read_json, FixtureFile};
use crate::json::{
    ap_verdict_to_json, element_from_json, element_to_json, function_from_json, ideal_from_json, ideal_to_json,
    ihj_verdict_to_json, parse_rational, rational_from_json, rational_to_json, term_from_json, term_to_json,
    universe_from_json, universe_to_json, verdict_to_json,
};

/// Largest truncation bound used by the crosscheck suite.
const CROSSCHECK_BOUND: u64 = 60;

#[derive(Debug, Parser)]
#[command(name = "idealconv", version, about = "Ideal convergence over symbolic subsets of N and NxN")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = OutputFormat::Json, global = true)]
    pub output: OutputFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Inspect catalog ideals.
    #[command(subcommand)]
    Ideal(IdealCmd),
    /// Classify terms and test membership.
    #[command(subcommand)]
    Set(SetCmd),
    /// Decide convergence of a piecewise function.
    #[command(subcommand)]
    Conv(ConvCmd),
    /// Decide the additive property for a pair of ideals.
    Ap(ApArgs),
    /// Run the finite oracle suites.
    #[command(subcommand)]
    Oracle(OracleCmd),
}

#[derive(Debug, Subcommand)]
pub enum IdealCmd {
    /// Print the descriptor and flags of an ideal.
    Info(InfoArgs),
}

#[derive(Debug, Args)]
pub struct InfoArgs {
    /// Catalog name or JSON descriptor.
    pub name: String,
    /// Term JSON: the generator of `principal`, otherwise a set to test.
    #[arg(long)]
    pub set: Option<String>,
    /// JSON object of parameters for the named ideal.
    #[arg(long)]
    pub params: Option<String>,
    /// Universe for `fin` and `improper`.
    #[arg(long, default_value = "natpair")]
    pub universe: String,
}

#[derive(Debug, Subcommand)]
pub enum SetCmd {
    /// Decide whether a term is empty, finite or infinite.
    Classify(SetArgs),
    /// Test whether an element belongs to a term.
    Member(MemberArgs),
}

#[derive(Debug, Args)]
pub struct SetArgs {
    /// Term JSON, a fixture file, or inline fixture JSON.
    pub term: String,
    /// Also report membership in this ideal.
    #[arg(long)]
    pub ideal: Option<String>,
}

#[derive(Debug, Args)]
pub struct MemberArgs {
    pub term: String,
    /// Element: an integer or a pair `[a, b]`.
    pub element: Option<String>,
    #[arg(long)]
    pub ideal: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum ConvCmd {
    /// Decide I-convergence, or I^J-convergence when `--J` is given.
    Decide(ConvArgs),
    /// Print a witness set for I^J-convergence (`--J` defaults to fin).
    Witness(ConvArgs),
}

#[derive(Debug, Args)]
pub struct ConvArgs {
    /// Fixture file or inline JSON holding a `function`.
    pub fixture: String,
    #[arg(long = "I")]
    pub i: Option<String>,
    #[arg(long = "J")]
    pub j: Option<String>,
    /// Candidate limit, as `p/q` or an integer.
    #[arg(long = "x", allow_hyphen_values = true)]
    pub x: Option<String>,
    /// Exit with code 3 when the verdict is unknown.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct ApArgs {
    /// Optional fixture holding `I` and `J`.
    pub fixture: Option<String>,
    #[arg(long = "I")]
    pub i: Option<String>,
    #[arg(long = "J")]
    pub j: Option<String>,
    #[arg(long, default_value = "natpair")]
    pub universe: String,
}

#[derive(Debug, Subcommand)]
pub enum OracleCmd {
    Run(OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Lemma,
    Crosscheck,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub size: usize,
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
}

/// What a command printed and how it exits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

struct Report {
    json: Value,
    text: String,
    code: i32,
}

impl Report {
    fn ok(json: Value, text: String) -> Report {
        Report { json, text, code: 0 }
    }
}

pub fn run(cli: &Cli) -> CliResult<Outcome> {
    let report = match &cli.command {
        Command::Ideal(IdealCmd::Info(a)) => ideal_info(a)?,
        Command::Set(SetCmd::Classify(a)) => set_classify(a)?,
        Command::Set(SetCmd::Member(a)) => set_member(a)?,
        Command::Conv(ConvCmd::Decide(a)) => conv(a, false)?,
        Command::Conv(ConvCmd::Witness(a)) => conv(a, true)?,
        Command::Ap(a) => ap(a)?,
        Command::Oracle(OracleCmd::Run(a)) => oracle(a)?,
    };
    let stdout = match cli.output {
        OutputFormat::Json => serde_json::to_string_pretty(&report.json).expect("values serialize") + "\n",
        OutputFormat::Text => report.text,
    };
    Ok(Outcome { stdout, code: report.code })
}

fn flag_json(arg: &str) -> CliResult<Value> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        read_json(arg)
    } else {
        Ok(Value::from(arg))
    }
}

fn ideal_arg(arg: &str, context: Universe) -> CliResult<Ideal> {
    ideal_from_json(&flag_json(arg)?, context)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn ideal_info(a: &InfoArgs) -> CliResult<Report> {
    let universe = universe_from_json(&Value::from(a.universe.as_str()))?;
    let set = a.set.as_deref().map(|s| read_json(s).and_then(|v| term_from_json(&v))).transpose()?;
    let is_principal = a.name == "principal";
    let descriptor = if a.name.trim_start().starts_with('{') {
        if a.params.is_some() {
            return Err(CliError::Input("--params only applies to catalog names".into()));
        }
        read_json(&a.name)?
    } else {
        let mut params = match &a.params {
            Some(p) => read_json(p)?,
            None => json!({}),
        };
        if is_principal {
            let t = set.as_ref().ok_or_else(|| CliError::Input("principal needs --set".into()))?;
            params["set"] = term_to_json(t);
        }
        json!({ "ideal": a.name, "params": params })
    };
    let ideal = ideal_from_json(&descriptor, universe)?;
    let flags = ideal.flags()?;
    let maximum = ideal.maximum()?;
    let mut out = json!({
        "ideal": ideal_to_json(&ideal),
        "name": ideal.name(),
        "universe": universe_to_json(ideal.universe()),
        "admissible": flags.admissible,
        "proper": flags.proper,
        "has_maximum": flags.has_maximum,
        "maximum": maximum.as_ref().map_or(Value::Null, term_to_json),
    });
    let mut text = format!(
        "ideal: {ideal}\nuniverse: {}\nadmissible: {}\nproper: {}\nhas maximum: {}\n",
        ideal.universe(),
        yes_no(flags.admissible),
        yes_no(flags.proper),
        yes_no(flags.has_maximum),
    );
    if let Some(m) = &maximum {
        text += &format!("maximum: {m}\n");
    }
    if let (Some(t), false) = (&set, is_principal) {
        let contains = ideal.contains(t)?;
        out["contains"] = json!(contains);
        text += &format!("contains {t}: {}\n", yes_no(contains));
    }
    Ok(Report::ok(out, text))
}

fn fixture_term(fx: &FixtureFile) -> CliResult<idealconv_core::SetTerm> {
    let v = fx.term.as_ref().ok_or_else(|| CliError::Input("no term given".into()))?;
    term_from_json(v)
}

/// `--ideal` wins over the fixture's `ideal`.
fn membership(
    flag: Option<&str>,
    fx: &FixtureFile,
    t: &idealconv_core::SetTerm,
    out: &mut Value,
    text: &mut String,
) -> CliResult<()> {
    let ideal = match (flag, &fx.ideal) {
        (Some(s), _) => ideal_arg(s, t.universe())?,
        (None, Some(v)) => ideal_from_json(v, t.universe())?,
        (None, None) => return Ok(()),
    };
    let inside = ideal.contains(t)?;
    out["in_ideal"] = json!(inside);
    *text += &format!("in {ideal}: {}\n", yes_no(inside));
    Ok(())
}

fn set_classify(a: &SetArgs) -> CliResult<Report> {
    let fx = load(&a.term)?;
    let t = fixture_term(&fx)?;
    let result = classify(&t)?;
    let mut out = json!({ "term": term_to_json(&t) });
    let mut text = format!("term: {t}\n");
    match &result {
        ClassifyResult::EmptySet => {
            out["result"] = json!("empty");
            out["cardinality"] = json!(0);
            text += "empty\n";
        }
        ClassifyResult::FiniteSet { cardinality, elements } => {
            out["result"] = json!("finite");
            out["cardinality"] = json!(cardinality);
            text += &format!("finite, {cardinality} element(s)\n");
            if let Some(es) = elements {
                out["elements"] = Value::Array(es.iter().map(|&e| element_to_json(e)).collect());
                let shown: Vec<String> = es.iter().map(|e| e.to_string()).collect();
                text += &format!("elements: {}\n", shown.join(" "));
            }
        }
        ClassifyResult::InfiniteSet => {
            out["result"] = json!("infinite");
            text += "infinite\n";
        }
    }
    membership(a.ideal.as_deref(), &fx, &t, &mut out, &mut text)?;
    Ok(Report::ok(out, text))
}

fn set_member(a: &MemberArgs) -> CliResult<Report> {
    let fx = load(&a.term)?;
    let t = fixture_term(&fx)?;
    let ev = match (&a.element, &fx.element) {
        (Some(s), _) => read_json(s)?,
        (None, Some(v)) => v.clone(),
        (None, None) => return Err(CliError::Input("no element given".into())),
    };
    let e = element_from_json(&ev)?;
    if e.universe() != t.universe() {
        return Err(CliError::Input(format!("element {e} is not in {}", t.universe())));
    }
    let member = t.member(e)?;
    let mut out = json!({ "term": term_to_json(&t), "element": element_to_json(e), "member": member });
    let mut text = format!("{e} in {t}: {}\n", yes_no(member));
    membership(a.ideal.as_deref(), &fx, &t, &mut out, &mut text)?;
    Ok(Report::ok(out, text))
}

fn pick<'a>(flag: Option<&'a str>, fixture: Option<&'a Value>) -> Option<Result<Value, &'a str>> {
    match (flag, fixture) {
        (Some(s), _) => Some(Err(s)),
        (None, Some(v)) => Some(Ok(v.clone())),
        (None, None) => None,
    }
}

fn resolve_ideal(flag: Option<&str>, fixture: Option<&Value>, context: Universe) -> CliResult<Option<Ideal>> {
    pick(flag, fixture)
        .map(|src| match src {
            Ok(v) => ideal_from_json(&v, context),
            Err(s) => ideal_arg(s, context),
        })
        .transpose()
}

fn resolve_point(flag: Option<&str>, fixture: Option<&Value>) -> CliResult<Option<Rational>> {
    pick(flag, fixture)
        .map(|src| match src {
            Ok(v) => rational_from_json(&v),
            Err(s) => parse_rational(s),
        })
        .transpose()
}

fn conv(a: &ConvArgs, witness: bool) -> CliResult<Report> {
    let fx = load(&a.fixture)?;
    let fv = fx.function.as_ref().ok_or_else(|| CliError::Input("fixture has no `function`".into()))?;
    let f: PiecewiseFn = function_from_json(fv)?;
    let u = f.universe();
    let i = resolve_ideal(a.i.as_deref(), fx.i.as_ref(), u)?.ok_or_else(|| CliError::Input("no ideal I given".into()))?;
    let mut j = resolve_ideal(a.j.as_deref(), fx.j.as_ref(), u)?;
    if witness && j.is_none() {
        j = Some(Ideal::fin(u));
    }
    let x = resolve_point(a.x.as_deref(), fx.x.as_ref())?.ok_or_else(|| CliError::Input("no point x given".into()))?;
    let strict = a.strict || fx.strict.unwrap_or(false);
    let admissibility = |e: Error| match e {
        Error::AdmissibilityRequired => CliError::Input(format!("{e}")),
        other => other.into(),
    };
    let (out, text, unknown) = match &j {
        None => {
            let v = i_converges(&f, &i, x).map_err(admissibility)?;
            let reason = format!("{} along {i} at {x}", if v == Verdict::Unknown { "undecided" } else { "decided" });
            (verdict_to_json(v, &reason), format!("{}\n", v.name()), v == Verdict::Unknown)
        }
        Some(j) => {
            let v = ihj_decide(&f, &i, j, x).map_err(admissibility)?;
            let text = match (&v, witness) {
                (IhjVerdict::Converges(w), true) => format!("{}\n", w.m),
                _ => format!("{}: {}\n", v.name(), v.reason()),
            };
            let unknown = matches!(v, IhjVerdict::Unknown(_));
            let mut out = ihj_verdict_to_json(&v);
            if witness {
                out = json!({ "verdict": out["verdict"], "witness": out.get("witness").cloned().unwrap_or(Value::Null) });
            }
            (out, text, unknown)
        }
    };
    let mut out = out;
    out["x"] = rational_to_json(x);
    Ok(Report { json: out, text, code: if unknown && strict { 3 } else { 0 } })
}

fn ap(a: &ApArgs) -> CliResult<Report> {
    let fx = match &a.fixture {
        Some(p) => load(p)?,
        None => FixtureFile::default(),
    };
    let u = universe_from_json(&Value::from(a.universe.as_str()))?;
    let missing = |which: &str| CliError::Input(format!("no ideal {which} given"));
    let i = resolve_ideal(a.i.as_deref(), fx.i.as_ref(), u)?.ok_or_else(|| missing("I"))?;
    let j = resolve_ideal(a.j.as_deref(), fx.j.as_ref(), u)?.ok_or_else(|| missing("J"))?;
    let v = ap_verdict(&i, &j)?;
    let text = format!("{v}\n");
    let mut out = ap_verdict_to_json(&v);
    out["I"] = ideal_to_json(&i);
    out["J"] = ideal_to_json(&j);
    Ok(Report::ok(out, text))
}

fn claim_to_json(c: &ClaimReport) -> Value {
    json!({
        "claim": c.claim,
        "instances": c.instances,
        "violation_count": c.violation_count,
        "violations": c.violations,
    })
}

/// Truncation consistency of the symbolic fixture corpus, plus the
/// additive-property conditions on `n` points.
fn corpus_crosscheck(n: usize) -> CliResult<SuiteReport> {
    let mut report = SuiteReport::new("crosscheck", n);
    let mut pieces = ClaimReport::new("corpus-piece-sets");
    let mut convergence = ClaimReport::new("corpus-convergence");
    let mut skipped = 0u64;
    let tally = |fixture: Fixture, claim: &mut ClaimReport, skipped: &mut u64| -> CliResult<()> {
        match crosscheck(&fixture, CROSSCHECK_BOUND) {
            Ok(r) => claim.instances += r.instances,
            Err(Error::InconsistencyFound(msg)) => claim.check(false, || msg),
            Err(Error::UnsupportedCombination(_)) => *skipped += 1,
            Err(e) => return Err(e.into()),
        }
        Ok(())
    };
    for fx in fixture_corpus()? {
        for p in fx.f.pieces() {
            tally(Fixture::Membership { ideal: fx.i.clone(), term: p.set.clone() }, &mut pieces, &mut skipped)?;
        }
        tally(Fixture::Convergence { f: fx.f.clone(), ideal: fx.i.clone(), x: fx.x }, &mut convergence, &mut skipped)?;
    }
    report.claims.push(pieces);
    report.claims.push(convergence);
    if skipped > 0 {
        report.notes.push(format!("{skipped} corpus checks skipped: outside the decidable fragment"));
    }
    if n >= 2 {
        let pi = pi_condition_crosscheck(n)?;
        let mut claim = ClaimReport::new("pi-conditions-agree");
        for _ in 0..pi.pairs - pi.disagreements.len() {
            claim.check(true, String::new);
        }
        for (i, j, v) in &pi.disagreements {
            claim.check(false, || format!("ideals {i}, {j}: {v:?}"));
        }
        report.claims.push(claim);
    }
    Ok(report)
}

fn oracle(a: &OracleArgs) -> CliResult<Report> {
    let n = a.size;
    let mut report = SuiteReport::new(
        match a.suite {
            Suite::All => "all",
            Suite::Lemma => "lemma",
            Suite::Crosscheck => "crosscheck",
        },
        n,
    );
    if matches!(a.suite, Suite::All | Suite::Lemma) {
        report.merge(lemma_suite(n)?);
    }
    if matches!(a.suite, Suite::All | Suite::Crosscheck) {
        report.merge(oracle_equivalence(n, 3)?);
        report.merge(corpus_crosscheck(n)?);
    }
    let out = json!({
        "suite": report.suite,
        "size": n,
        "passed": report.passed(),
        "total_instances": report.total_instances(),
        "total_violations": report.total_violations(),
        "notes": report.notes,
        "claims": report.claims.iter().map(claim_to_json).collect::<Vec<_>>(),
    });
    let mut text = String::new();
    for c in &report.claims {
        text += &format!(
            "{:<4} {} ({} instances, {} violations)\n",
            if c.passed() { "ok" } else { "FAIL" },
            c.claim,
            c.instances,
            c.violation_count
        );
        for v in &c.violations {
            text += &format!("     {v}\n");
        }
    }
    for note in &report.notes {
        text += &format!("note: {note}\n");
    }
    text += &format!("{} violation(s) in {} instances\n", report.total_violations(), report.total_instances());
    Ok(Report { json: out, text, code: if report.passed() { 0 } else { 1 } })
}
