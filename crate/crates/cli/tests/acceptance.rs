//! Runs every acceptance criterion at its tolerance and prints one
//! PASS/FAIL line each. Exits nonzero if any criterion fails.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use idealconv_core::ap::{ap_verdict, certify_failure_on_truncation, pi_condition_crosscheck, ApVerdict};
use idealconv_core::engine::{build_diagonal_function, i_converges, ihj_decide};
use idealconv_core::finite::{crosscheck, lemma_suite, oracle_equivalence, Fixture};
use idealconv_core::sample::{fixture_corpus, TermSampler};
use idealconv_core::{
    pair_decode, pair_encode, Bijection, Ideal, IhjVerdict, Node, Partition, Rational, SetTerm, Universe, Verdict,
};

const ORACLE_BUDGET: Duration = Duration::from_secs(60);
const RANDOM_TERMS: usize = 1000;
const CERTIFIED_SAMPLES: usize = 100;
const CERTIFY_BOUND: u64 = 40;
const TRANSFER_PAIRS: usize = 1000;
const PAIR_CODES: u64 = 10_000;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

type Check = fn() -> Outcome;

fn oracle_equivalence_check() -> Outcome {
    let start = Instant::now();
    let report = match oracle_equivalence(4, 3) {
        Ok(r) => r,
        Err(e) => return outcome(false, format!("error: {e}")),
    };
    let elapsed = start.elapsed();
    let detail = format!(
        "{} instances, {} disagreements, {:.1}s",
        report.total_instances(),
        report.total_violations(),
        elapsed.as_secs_f64()
    );
    outcome(report.passed() && elapsed < ORACLE_BUDGET, detail)
}

fn lemma_suite_check() -> Outcome {
    let report = match lemma_suite(3) {
        Ok(r) => r,
        Err(e) => return outcome(false, format!("error: {e}")),
    };
    let idle: Vec<&str> = report.claims.iter().filter(|c| c.instances == 0).map(|c| c.claim.as_str()).collect();
    let detail = format!(
        "{} claims, {} instances, {} violations",
        report.claims.len(),
        report.total_instances(),
        report.total_violations()
    );
    outcome(report.passed() && idle.is_empty() && report.claims.len() >= 14, detail)
}

fn pringsheim_identity_check() -> Outcome {
    let prg = Ideal::pringsheim();
    let gamma = match Ideal::partition(Partition::Gamma) {
        Ok(i) => i,
        Err(e) => return outcome(false, format!("error: {e}")),
    };
    let mut s = TermSampler::new(0x9e37_79b9);
    let (mut mismatches, mut inconsistent, mut members) = (0, 0, 0);
    for _ in 0..RANDOM_TERMS {
        let t = s.term(Universe::NatPair);
        match (prg.contains(&t), gamma.contains(&t)) {
            (Ok(a), Ok(b)) if a == b => members += usize::from(a),
            _ => mismatches += 1,
        }
        for bound in [10, 50] {
            if crosscheck(&Fixture::Term(t.clone()), bound).is_err() {
                inconsistent += 1;
            }
        }
    }
    let detail = format!(
        "{RANDOM_TERMS} terms ({members} in the ideal), {mismatches} mismatches, {inconsistent} truncation inconsistencies"
    );
    outcome(mismatches == 0 && inconsistent == 0, detail)
}

fn ap_failure_check() -> Outcome {
    let fin = Ideal::fin(Universe::NatPair);
    let zero = Rational::from_integer(0);
    let mut notes = Vec::new();
    let mut ok = true;
    let ideals = [("uni", Ideal::partition(Partition::Columns)), ("prg", Ok(Ideal::pringsheim()))];
    for (name, ideal) in ideals {
        let Ok(ideal) = ideal else {
            return outcome(false, format!("{name}: bad ideal"));
        };
        let Ok(ApVerdict::Fails { witness }) = ap_verdict(&ideal, &fin) else {
            ok = false;
            notes.push(format!("{name}: not refuted"));
            continue;
        };
        let mut s = TermSampler::new(0x5a17);
        let samples: Result<Vec<SetTerm>, _> =
            (0..CERTIFIED_SAMPLES).map(|_| s.partition_member(&witness.partition)).collect();
        let certified = samples
            .and_then(|xs| certify_failure_on_truncation(&witness, &xs, CERTIFY_BOUND))
            .map(|r| r.passed() && r.entries.len() == CERTIFIED_SAMPLES);
        ok &= certified == Ok(true);
        let diagonal = build_diagonal_function(&witness.partition, zero).ok();
        let decided = diagonal.as_ref().map(|f| {
            (
                i_converges(f, &ideal, zero).ok() == Some(Verdict::Yes),
                ihj_decide(f, &ideal, &fin, zero).is_ok_and(|v| v.is_no()),
            )
        });
        ok &= decided == Some((true, true));
        notes.push(format!(
            "{name}: fails, {CERTIFIED_SAMPLES} samples certified: {}, diagonal yes/no: {}",
            certified == Ok(true),
            decided == Some((true, true))
        ));
    }
    outcome(ok, notes.join("; "))
}

fn corpus_consistency_check() -> Outcome {
    let corpus = match fixture_corpus() {
        Ok(c) => c,
        Err(e) => return outcome(false, format!("error: {e}")),
    };
    let (mut clashes, mut bad_witnesses, mut witnesses, mut errors) = (0, 0, 0, 0);
    for fx in &corpus {
        let (Ok(ap), Ok(conv), Ok(ihj)) =
            (ap_verdict(&fx.i, &fx.j), i_converges(&fx.f, &fx.i, fx.x), ihj_decide(&fx.f, &fx.i, &fx.j, fx.x))
        else {
            errors += 1;
            continue;
        };
        if matches!(ap, ApVerdict::Holds { .. }) && conv == Verdict::Yes && ihj.is_no() {
            clashes += 1;
        }
        if let IhjVerdict::Converges(w) = &ihj {
            witnesses += 1;
            if !w.reverify(&fx.f, &fx.i, &fx.j, fx.x).unwrap_or(false) {
                bad_witnesses += 1;
            }
        }
    }
    let detail = format!(
        "{} fixtures, {clashes} clashes, {witnesses} witnesses ({bad_witnesses} failed re-verification), {errors} errors",
        corpus.len()
    );
    outcome(corpus.len() >= 50 && clashes == 0 && bad_witnesses == 0 && errors == 0, detail)
}

fn pi_condition_check() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for n in [3, 4] {
        match pi_condition_crosscheck(n) {
            Ok(r) => {
                ok &= r.agrees();
                notes.push(format!("n={n}: {} pairs, {} disagreements", r.pairs, r.disagreements.len()));
            }
            Err(e) => {
                ok = false;
                notes.push(format!("n={n}: error: {e}"));
            }
        }
    }
    outcome(ok, notes.join("; "))
}

/// `{n : b(n) ∈ t}` built atom by atom.
fn pulled_term(t: &SetTerm, b: Bijection) -> idealconv_core::Result<SetTerm> {
    let u = t.universe().other();
    Ok(match t.node() {
        Node::Atom(a) => SetTerm::pulled(b, a.clone())?,
        Node::Complement(x) => pulled_term(x, b)?.complement(),
        Node::Intersection(xs) => SetTerm::intersect_all(u, xs.iter().map(|x| pulled_term(x, b)).collect::<Result<Vec<_>, _>>()?)?,
        Node::Union(xs) => SetTerm::union_all(u, xs.iter().map(|x| pulled_term(x, b)).collect::<Result<Vec<_>, _>>()?)?,
        Node::Difference(x, y) => pulled_term(x, b)?.minus(&pulled_term(y, b)?)?,
    })
}

fn bijection_transfer_check() -> Outcome {
    let mut s = TermSampler::new(0x7a11);
    let bases = [Ideal::partition(Partition::Columns), Ok(Ideal::fin(Universe::NatPair))];
    let Ok(bases) = bases.into_iter().collect::<Result<Vec<_>, _>>() else {
        return outcome(false, "bad base ideal");
    };
    let mut failures = 0;
    for k in 0..TRANSFER_PAIRS {
        let b = if k % 2 == 0 { Bijection::Cantor } else { Bijection::Shell };
        let base = &bases[k / 2 % bases.len()];
        let pushed = Ideal::pushforward(base.clone(), b);
        let t = s.term(Universe::NatPair);
        let e = s.element(Universe::NatPair, 30);
        let n = b.apply(e);
        let ok = b.apply(n) == e
            && pulled_term(&t, b).is_ok_and(|back| {
                back.member(n).ok() == t.member(e).ok()
                    && pushed.contains(&back).ok() == base.contains(&t).ok()
                    && base.contains(&t).is_ok()
            });
        failures += usize::from(!ok);
    }
    let codes = (1..=PAIR_CODES).filter(|&n| {
        let (a, b) = pair_encode(n);
        pair_decode(a, b) != n
    });
    let bad_codes = codes.count();
    let detail = format!("{TRANSFER_PAIRS} pairs, {failures} failures; 1..={PAIR_CODES}: {bad_codes} non-inverse codes");
    outcome(failures == 0 && bad_codes == 0, detail)
}

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn determinism_check() -> Outcome {
    let invocations: Vec<Vec<String>> = vec![
        vec!["ideal".into(), "info".into(), "pringsheim".into()],
        vec!["set".into(), "classify".into(), fixture("lower_quadrant.json")],
        vec!["conv".into(), "decide".into(), fixture("diagonal_columns.json"), "--J".into(), "fin".into()],
        vec!["conv".into(), "witness".into(), fixture("column_bump.json"), "--output".into(), "text".into()],
        vec!["ap".into(), "--I".into(), "uni".into(), "--J".into(), "fin".into()],
        vec!["oracle".into(), "run".into(), "--size".into(), "3".into(), "--suite".into(), "all".into()],
    ];
    let mut differing = Vec::new();
    for args in &invocations {
        let run = || Command::new(env!("CARGO_BIN_EXE_idealconv")).args(args).output();
        match (run(), run()) {
            (Ok(a), Ok(b)) if a.stdout == b.stdout && a.status.code() == b.status.code() && a.status.success() => {}
            _ => differing.push(args.join(" ")),
        }
    }
    let detail = format!("{} invocations run twice, {} differ: {:?}", invocations.len(), differing.len(), differing);
    outcome(differing.is_empty(), detail)
}

fn main() {
    let criteria: [(&str, Check); 8] = [
        ("oracle equivalence (|S| <= 4, <= 3 points, < 60 s)", oracle_equivalence_check),
        ("lemma suite at size 3", lemma_suite_check),
        ("pringsheim ideal equals the gamma partition ideal", pringsheim_identity_check),
        ("additive property fails for uni and prg against fin", ap_failure_check),
        ("corpus respects the additive property", corpus_consistency_check),
        ("additive-property conditions agree at sizes 3 and 4", pi_condition_check),
        ("bijection transfer and pair codes", bijection_transfer_check),
        ("CLI output is byte-deterministic", determinism_check),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        failed += usize::from(!o.passed);
        println!("{} criterion {}: {name}: {}", if o.passed { "PASS" } else { "FAIL" }, k + 1, o.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
