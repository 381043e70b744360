//! Checks symbolic answers against what finite truncations can show.
//!
//! Truncation never proves an infinite claim, but for terms without pulled
//! atoms every cell of the decomposition is either bounded by the largest
//! constant or recurs with the residue period, so a window just above the
//! constants is enough to see growth.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Signed;

use super::report::ClaimReport;
use crate::classify::{block_incidence, classify, ClassifyResult, Incidence};
use crate::engine::{i_converges, Verdict};
use crate::error::{Error, Result};
use crate::function::PiecewiseFn;
use crate::ideal::{Ideal, IdealKind};
use crate::partition::Partition;
use crate::space::Space;
use crate::term::{Atom, SetTerm};
use crate::universe::{Element, Universe};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Fixture {
    Term(SetTerm),
    Membership { ideal: Ideal, term: SetTerm },
    Convergence { f: PiecewiseFn, ideal: Ideal, x: Rational },
}

fn is_native(t: &SetTerm) -> bool {
    let mut native = true;
    t.for_each_atom(&mut |a| {
        if matches!(a, Atom::Pulled(..) | Atom::Block(Partition::Pulled(..), _)) {
            native = false;
        }
    });
    native
}

fn period(t: &SetTerm) -> u64 {
    let mut p = 1;
    t.for_each_atom(&mut |a| {
        if let Atom::Block(Partition::Residues(m), _) = a {
            p = num_integer::lcm(p, *m);
        }
    });
    p
}

fn check_classification(t: &SetTerm, bound: u64, report: &mut ClaimReport) -> Result<()> {
    let result = classify(t)?;
    let shown = t.truncate(bound);
    match &result {
        ClassifyResult::EmptySet => report.check(shown.is_empty(), || format!("{t}: empty but shows {}", shown.len())),
        ClassifyResult::FiniteSet { cardinality, elements } => {
            report.check(shown.len() as u64 <= *cardinality, || {
                format!("{t}: {cardinality} elements but shows {}", shown.len())
            });
            if let Some(elements) = elements {
                let expected: Vec<Element> = elements.iter().copied().filter(|e| e.max_coord() <= bound).collect();
                let mut got = shown.clone();
                got.sort();
                let mut want = expected;
                want.sort();
                report.check(got == want, || format!("{t}: listed elements differ from truncation"));
            }
            if is_native(t) {
                let k = t.max_constant().max(1);
                let settled = t.truncate(k).len() as u64;
                report.check(settled == *cardinality, || {
                    format!("{t}: {cardinality} elements but {settled} up to the constants")
                });
            }
        }
        ClassifyResult::InfiniteSet => {
            if is_native(t) {
                let low = t.max_constant() + 1;
                let high = bound.max(low + period(t));
                let (a, b) = (t.truncate(low).len(), t.truncate(high).len());
                report.check(b > a, || format!("{t}: infinite but {a} elements at {low} and {b} at {high}"));
            }
        }
    }
    Ok(())
}

fn blocks_met(t: &SetTerm, p: &Partition, bound: u64) -> BTreeSet<u64> {
    t.truncate(bound).into_iter().map(|e| p.block_of(e)).collect()
}

fn check_incidence(t: &SetTerm, p: &Partition, bound: u64, report: &mut ClaimReport) -> Result<Incidence> {
    let incidence = block_incidence(t, p)?;
    match &incidence {
        Incidence::Finite(blocks) => {
            let met = blocks_met(t, p, bound);
            report.check(met.iter().all(|b| blocks.contains(b)), || {
                format!("{t}: meets blocks {met:?} of {p}, expected within {blocks:?}")
            });
        }
        Incidence::Infinite => {
            if is_native(t) && p.has_infinitely_many_blocks() {
                let low = t.max_constant() + 1;
                let high = bound.max(low + 1);
                let (a, b) = (blocks_met(t, p, low).len(), blocks_met(t, p, high).len());
                report.check(b > a, || format!("{t}: meets infinitely many blocks of {p} but {a} then {b}"));
            }
        }
    }
    Ok(incidence)
}

fn check_membership(ideal: &Ideal, t: &SetTerm, bound: u64, report: &mut ClaimReport) -> Result<()> {
    let member = ideal.contains(t)?;
    match ideal.kind() {
        IdealKind::Fin(_) => {
            let finite = classify(t)?.is_finite();
            report.check(member == finite, || format!("{t}: member of {ideal} is {member}, finite is {finite}"));
            check_classification(t, bound, report)?;
        }
        IdealKind::Improper(_) => report.check(member, || format!("{t}: rejected by {ideal}")),
        IdealKind::Principal(top) => {
            let outside = t.minus(top)?;
            let empty = classify(&outside)?.is_empty();
            report.check(member == empty, || format!("{t}: member of {ideal} is {member}, overflow empty is {empty}"));
            if member {
                report.check(outside.truncate(bound).is_empty(), || format!("{t}: overflow visible below {bound}"));
            }
        }
        IdealKind::Partition(p) => {
            let incidence = check_incidence(t, p, bound, report)?;
            report.check(member == incidence.is_finite(), || format!("{t}: member of {ideal} is {member}"));
        }
        IdealKind::Pringsheim => {
            let incidence = check_incidence(t, &Partition::Gamma, bound, report)?;
            report.check(member == incidence.is_finite(), || format!("{t}: member of {ideal} is {member}"));
            let via_blocks = Ideal::partition(Partition::Gamma)?.contains(t)?;
            report.check(member == via_blocks, || format!("{t}: pringsheim {member}, gamma blocks {via_blocks}"));
        }
        _ => {
            let complement_in_filter = ideal.in_filter(&t.complement())?;
            report.check(member == complement_in_filter, || format!("{t}: membership and filter disagree"));
        }
    }
    Ok(())
}

fn is_native_fn(f: &PiecewiseFn) -> bool {
    f.pieces().iter().all(|p| is_native(&p.set))
        && f.diagonal().is_none_or(|d| !matches!(d.partition(), Partition::Pulled(..)))
}

/// Indices up to `bound` whose value lies outside some neighborhood of `x`
/// of size `eps` (any open set, on a finite space).
fn escapes(f: &PiecewiseFn, x: Rational, eps: Rational, bound: u64) -> Result<usize> {
    let sp = f.codomain();
    let near: Vec<u64> = match sp {
        Space::MetricLine => Vec::new(),
        _ => {
            let i = sp.index_of(x).ok_or_else(|| Error::PointNotInSpace(format!("{x}")))?;
            sp.open_masks().into_iter().filter(|u| u >> i & 1 == 1).collect()
        }
    };
    let mut count = 0;
    for e in SetTerm::full(f.universe()).truncate(bound) {
        let v = f.eval(e)?;
        let out = match sp {
            Space::MetricLine => (v - x).abs() >= eps,
            _ => {
                let j = sp.index_of(v).ok_or_else(|| Error::PointNotInSpace(format!("{v}")))?;
                near.iter().any(|u| u >> j & 1 == 0)
            }
        };
        count += usize::from(out);
    }
    Ok(count)
}

fn check_convergence(f: &PiecewiseFn, ideal: &Ideal, x: Rational, bound: u64, report: &mut ClaimReport) -> Result<()> {
    let verdict = i_converges(f, ideal, x)?;
    let fin = matches!(ideal.kind(), IdealKind::Fin(_));
    if verdict != Verdict::Yes || !fin || !is_native_fn(f) {
        report.check(true, String::new);
        return Ok(());
    }
    let k = f.pieces().iter().map(|p| p.set.max_constant()).max().unwrap_or(0);
    let scale = f.diagonal().map_or(0, |d| d.scale().abs().ceil().to_integer() as u64);
    for eps in [Rational::from_integer(1), Rational::new(1, 2), Rational::new(1, 4)] {
        let reach = (Rational::from_integer(scale as i64) / eps).ceil().to_integer() as u64;
        let settled = k.max(4).max(reach) + 1;
        let far = bound.max(2 * settled);
        let (a, b) = (escapes(f, x, eps, settled)?, escapes(f, x, eps, far)?);
        report.check(a == b, || format!("converges along Fin to {x} but escapes grow {a} -> {b} at radius {eps}"));
    }
    Ok(())
}

/// Confirms that a symbolic fixture is consistent with its truncations up to
/// `bound`. Returns the checks performed.
pub fn crosscheck(fixture: &Fixture, bound: u64) -> Result<ClaimReport> {
    let mut report = ClaimReport::new("crosscheck");
    match fixture {
        Fixture::Term(t) => {
            check_classification(t, bound, &mut report)?;
            if t.universe() == Universe::NatPair {
                for p in [Partition::Columns, Partition::Gamma] {
                    check_incidence(t, &p, bound, &mut report)?;
                }
            }
        }
        Fixture::Membership { ideal, term } => check_membership(ideal, term, bound, &mut report)?,
        Fixture::Convergence { f, ideal, x } => check_convergence(f, ideal, *x, bound, &mut report)?,
    }
    match report.violations.first() {
        Some(v) => Err(Error::InconsistencyFound(v.clone())),
        None => Ok(report),
    }
}
