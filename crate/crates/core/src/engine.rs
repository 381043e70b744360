//! Decision procedures for `I`-convergence and `I^J`-convergence.
//!
//! Neighborhood bases: balls of radius `1/k` on the line; on a finite space
//! the smallest open set containing the point, which is an equivalent base
//! (every larger neighborhood has a smaller escape set).

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::function::{Diagonal, Piece, PiecewiseFn, ValueSpec};
use crate::ideal::{Ideal, IdealKind, Ternary};
use crate::partition::Partition;
use crate::space::{OpenSet, Space};
use crate::term::SetTerm;
use crate::Rational;

/// Largest number of cells the witness search enumerates subsets of.
pub const MAX_SEARCH_CELLS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::Unknown => "unknown",
        }
    }
}

/// Record of the two checks that make `m` a witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Certificate {
    /// `m` is in the dual filter of `I`.
    pub m_in_filter: bool,
    /// The function modified to the limit off `m` `J`-converges.
    pub modified_converges: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Witness {
    pub m: SetTerm,
    /// Which step of the decision ladder produced the witness.
    pub rule: &'static str,
    pub certificate: Certificate,
}

impl Witness {
    /// Re-runs both checks from scratch.
    pub fn reverify(&self, f: &PiecewiseFn, i: &Ideal, j: &Ideal, x: Rational) -> Result<bool> {
        if !i.in_filter(&self.m)? {
            return Ok(false);
        }
        Ok(i_converges(&f.modify_on(&self.m, x)?, j, x)? == Verdict::Yes)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum IhjVerdict {
    Converges(Witness),
    No(String),
    Unknown(String),
}

impl IhjVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            IhjVerdict::Converges(_) => "converges",
            IhjVerdict::No(_) => "no",
            IhjVerdict::Unknown(_) => "unknown",
        }
    }

    pub fn is_converges(&self) -> bool {
        matches!(self, IhjVerdict::Converges(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, IhjVerdict::No(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            IhjVerdict::Converges(w) => Some(w),
            _ => None,
        }
    }

    pub fn reason(&self) -> String {
        match self {
            IhjVerdict::Converges(w) => format!("witness from {}", w.rule),
            IhjVerdict::No(r) | IhjVerdict::Unknown(r) => r.clone(),
        }
    }
}

impl fmt::Display for IhjVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IhjVerdict::Converges(w) => write!(f, "converges with M = {}", w.m),
            IhjVerdict::No(r) => write!(f, "no: {r}"),
            IhjVerdict::Unknown(r) => write!(f, "unknown: {r}"),
        }
    }
}

fn check_inputs(f: &PiecewiseFn, i: &Ideal, x: Rational) -> Result<()> {
    f.ensure_valid()?;
    if i.universe() != f.universe() {
        return Err(Error::UniverseMismatch { expected: f.universe(), found: i.universe() });
    }
    f.codomain().require_point(x)
}

/// Whether a piece value stays inside every basic neighborhood of `x`
/// (up to finitely many indices for tailing pieces).
fn stays_near(space: &Space, x: Rational, v: Rational) -> bool {
    match space {
        Space::MetricLine => v == x,
        _ => match space.smallest_neighborhood(x) {
            Some(u) => u.contains(space, v),
            None => v == x,
        },
    }
}

/// Indices whose piece values leave the basic neighborhoods of `x`.
fn ordinary_escape(f: &PiecewiseFn, x: Rational) -> Result<SetTerm> {
    SetTerm::union_all(
        f.universe(),
        f.pieces().iter().filter(|p| !stays_near(f.codomain(), x, p.value.target())).map(|p| p.set.clone()),
    )
}

/// `i` with `target + scale / i == x`, if any.
fn block_hitting(d: &Diagonal, x: Rational) -> Option<u64> {
    let gap = x - d.target();
    if gap.is_zero() {
        return None;
    }
    let i = d.scale() / gap;
    (i.is_integer() && i.is_positive()).then(|| *i.numer() as u64)
}

/// Decides `f⁻¹(U) ∈ F(I)` for every basic neighborhood `U` of `x`.
pub fn i_converges(f: &PiecewiseFn, i: &Ideal, x: Rational) -> Result<Verdict> {
    check_inputs(f, i, x)?;
    if f.pieces().iter().any(|p| matches!(p.value, ValueSpec::TailsTo(_))) && !i.is_admissible()? {
        return Err(Error::AdmissibilityRequired);
    }
    let escape = ordinary_escape(f, x)?;
    if !i.contains(&escape)? {
        return Ok(Verdict::No);
    }
    let Some(d) = f.diagonal() else {
        return Ok(Verdict::Yes);
    };
    let region = f.uncovered()?;
    if x != d.target() {
        // Far from the diagonal target every block but the one hitting `x`
        // eventually escapes.
        let mut far = region.clone();
        if let Some(k) = block_hitting(d, x) {
            far = far.minus(&SetTerm::block(d.partition(), k)?)?;
        }
        return Ok(if i.contains(&escape.union(&far)?)? { Verdict::Yes } else { Verdict::No });
    }
    if i.uniform_prefix_in_ideal(d.partition()) == Ternary::True {
        return Ok(Verdict::Yes);
    }
    // Each block escapes some ball, so a single bad block decides.
    let probe = (f.pieces().iter().map(|p| p.set.max_constant()).max().unwrap_or(0) + 2).min(64);
    for k in 1..=probe {
        let part = region.intersect(&SetTerm::block(d.partition(), k)?)?;
        if !i.contains(&escape.union(&part)?)? {
            return Ok(Verdict::No);
        }
    }
    Ok(Verdict::Unknown)
}

/// Candidate limits with their verdicts, in ascending order of the point.
pub fn i_limits(f: &PiecewiseFn, i: &Ideal) -> Result<Vec<(Rational, Verdict)>> {
    let mut candidates: Vec<Rational> = match f.codomain().points() {
        Some(ps) => ps.to_vec(),
        None => {
            let mut cs: Vec<Rational> = f.pieces().iter().map(|p| p.value.target()).collect();
            if let Some(d) = f.diagonal() {
                cs.push(d.target());
                let k = f.pieces().iter().map(|p| p.set.max_constant()).max().unwrap_or(0) + 1;
                cs.extend((1..=k).map(|b| d.value(b)));
            }
            cs
        }
    };
    candidates.sort_unstable();
    candidates.dedup();
    candidates.into_iter().map(|x| Ok((x, i_converges(f, i, x)?))).collect()
}

fn witness(f: &PiecewiseFn, i: &Ideal, j: &Ideal, x: Rational, m: SetTerm, rule: &'static str) -> Result<Option<Witness>> {
    if !i.in_filter(&m)? {
        return Ok(None);
    }
    let verdict = i_converges(&f.modify_on(&m, x)?, j, x)?;
    Ok((verdict == Verdict::Yes).then_some(Witness {
        m,
        rule,
        certificate: Certificate { m_in_filter: true, modified_converges: verdict },
    }))
}

fn partition_of(i: &Ideal) -> Option<Partition> {
    match i.kind() {
        IdealKind::Partition(p) => Some(p.clone()),
        IdealKind::Pringsheim => Some(Partition::Gamma),
        _ => None,
    }
}

/// Decides whether some `M ∈ F(I)` makes `f`, set to `x` off `M`,
/// `J`-convergent to `x`.
pub fn ihj_decide(f: &PiecewiseFn, i: &Ideal, j: &Ideal, x: Rational) -> Result<IhjVerdict> {
    check_inputs(f, i, x)?;
    if j.universe() != i.universe() {
        return Err(Error::UniverseMismatch { expected: i.universe(), found: j.universe() });
    }
    let u = f.universe();
    let j_verdict = i_converges(f, j, x)?;
    if j_verdict == Verdict::Yes {
        return Ok(IhjVerdict::Converges(Witness {
            m: SetTerm::full(u),
            rule: "j-convergence",
            certificate: Certificate { m_in_filter: true, modified_converges: Verdict::Yes },
        }));
    }
    let i_verdict = i_converges(f, i, x)?;
    if i_verdict == Verdict::No && j.known_inclusion(i) {
        return Ok(IhjVerdict::No(String::from("J is contained in I and f is not I-convergent")));
    }
    if let Some(top) = i.maximum()? {
        // Every filter set contains the complement of the maximum, and a
        // larger M only enlarges the escape sets.
        let m = top.complement();
        let g = f.modify_on(&m, x)?;
        return Ok(match i_converges(&g, j, x)? {
            Verdict::Yes => IhjVerdict::Converges(Witness {
                m,
                rule: "maximum",
                certificate: Certificate { m_in_filter: true, modified_converges: Verdict::Yes },
            }),
            Verdict::No => IhjVerdict::No(String::from(
                "f modified off the smallest filter set of I is not J-convergent",
            )),
            Verdict::Unknown => IhjVerdict::Unknown(String::from("J-convergence of the modified function undecided")),
        });
    }
    if i_verdict == Verdict::Yes {
        let m = ordinary_escape(f, x)?.complement();
        if let Some(w) = witness(f, i, j, x, m, "escape-complement")? {
            return Ok(IhjVerdict::Converges(w));
        }
    }

    let mut cells: Vec<SetTerm> = f.pieces().iter().map(|p| p.set.clone()).collect();
    if f.diagonal().is_some() {
        cells.push(f.uncovered()?);
    }
    if cells.len() <= MAX_SEARCH_CELLS {
        if let Some(w) = subset_search(f, i, j, x, &cells)? {
            return Ok(IhjVerdict::Converges(w));
        }
        let mut complete = true;
        for c in &cells {
            let singleton = matches!(crate::classify::classify(c)?.cardinality(), Some(0 | 1));
            if !singleton && !(i.contains(c)? && j.contains(c)?) {
                complete = false;
                break;
            }
        }
        if complete {
            return Ok(IhjVerdict::No(String::from(
                "no union of pieces works and every filter set reduces to one",
            )));
        }
    }

    if let Some(d) = f.diagonal() {
        let same_partition = partition_of(i).as_ref() == Some(d.partition())
            || (matches!(i.kind(), IdealKind::Pringsheim) && *d.partition() == Partition::Gamma);
        let j_finite = matches!(j.kind(), IdealKind::Fin(_)) || j.known_inclusion(&Ideal::fin(u));
        let pieces_null = f.pieces().iter().map(|p| i.contains(&p.set)).collect::<Result<Vec<_>>>()?;
        if same_partition && j_finite && x == d.target() && pieces_null.iter().all(|&b| b) {
            return Ok(IhjVerdict::No(String::from(
                "every filter set of the partition ideal contains whole blocks, each escaping some ball",
            )));
        }
    }
    Ok(IhjVerdict::Unknown(String::from("no rule applies and the witness search found nothing")))
}

/// Tries `M = complement of a union of cells` over all sub-collections in
/// shortlex order.
fn subset_search(
    f: &PiecewiseFn,
    i: &Ideal,
    j: &Ideal,
    x: Rational,
    cells: &[SetTerm],
) -> Result<Option<Witness>> {
    let n = cells.len();
    let mut masks: Vec<u32> = (0..1u32 << n).collect();
    masks.sort_by_key(|&m| (m.count_ones(), core::cmp::Reverse(m.reverse_bits())));
    for mask in masks {
        let chosen = (0..n).filter(|k| mask >> k & 1 == 1).map(|k| cells[k].clone());
        let union = SetTerm::union_all(f.universe(), chosen)?;
        if !i.contains(&union)? {
            continue;
        }
        if let Some(w) = witness(f, i, j, x, union.complement(), "piece-search")? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// `f = g + h` with `g` the `J`-convergent modification and `h` supported on
/// the complement of the witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub g: PiecewiseFn,
    pub h: PiecewiseFn,
    pub m: SetTerm,
}

pub fn decompose(f: &PiecewiseFn, i: &Ideal, j: &Ideal, x: Rational) -> Result<Decomposition> {
    if *f.codomain() != Space::MetricLine {
        return Err(Error::PreconditionViolated(String::from("decomposition needs the metric line")));
    }
    let m = match ihj_decide(f, i, j, x)? {
        IhjVerdict::Converges(w) => w.m,
        other => return Err(Error::NotIhjConvergent(other.reason())),
    };
    let g = f.modify_on(&m, x)?;
    let off = m.complement();
    let mut pieces: Vec<Piece> = f
        .pieces()
        .iter()
        .map(|p| {
            let value = match p.value {
                ValueSpec::Const(v) => ValueSpec::Const(v - x),
                ValueSpec::TailsTo(v) => ValueSpec::TailsTo(v - x),
            };
            Ok(Piece::new(p.set.intersect(&off)?, value))
        })
        .collect::<Result<_>>()?;
    pieces.push(Piece::constant(m.clone(), Rational::zero()));
    let diagonal = match f.diagonal() {
        Some(d) => Some(Diagonal::new(d.partition().clone(), d.target() - x, d.scale())?),
        None => None,
    };
    let h = PiecewiseFn::trusted(f.universe(), Space::MetricLine, pieces, diagonal, None);
    if !i.contains(&off)? {
        return Err(Error::NotIhjConvergent(String::from("support of h is not in I")));
    }
    Ok(Decomposition { g, h, m })
}

/// `y` on `a`, `x` elsewhere: `J`-convergent to `x` but not `I`-convergent.
#[allow(clippy::too_many_arguments)]
pub fn build_imp1_counterexample(
    i: &Ideal,
    j: &Ideal,
    space: &Space,
    x: Rational,
    u: &OpenSet,
    y: Rational,
    a: &SetTerm,
) -> Result<PiecewiseFn> {
    let fail = |s: &str| Err(Error::PreconditionViolated(String::from(s)));
    if !j.contains(a)? {
        return fail("A must belong to J");
    }
    if i.contains(a)? {
        return fail("A must not belong to I");
    }
    if !space.contains_point(x) || !space.contains_point(y) {
        return fail("x and y must be points of the space");
    }
    if !space.is_open(u) || !u.contains(space, x) {
        return fail("U must be an open neighborhood of x");
    }
    if let OpenSet::Mask(m) = u {
        if space.points().is_some_and(|ps| m.count_ones() as usize == ps.len()) {
            return fail("U must differ from the whole space");
        }
    }
    if u.contains(space, y) {
        return fail("y must lie outside U");
    }
    PiecewiseFn::two_valued(space.clone(), a.clone(), y, x)
}

/// Block `i` of `p` maps to `x + 1/i`.
pub fn build_diagonal_function(p: &Partition, x: Rational) -> Result<PiecewiseFn> {
    let d = Diagonal::new(p.clone(), x, Rational::from_integer(1))?;
    PiecewiseFn::new(p.universe(), Space::MetricLine, Vec::new(), Some(d), None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::universe::{Element, Universe};

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    fn cols() -> Ideal {
        Ideal::partition(Partition::Columns).unwrap()
    }

    fn fin2() -> Ideal {
        Ideal::fin(Universe::NatPair)
    }

    #[test]
    fn constant_converges_everywhere_for_improper() {
        let f = PiecewiseFn::constant(Universe::Nat, Space::MetricLine, q(0)).unwrap();
        let imp = Ideal::improper(Universe::Nat);
        assert_eq!(i_converges(&f, &imp, q(0)).unwrap(), Verdict::Yes);
        assert_eq!(i_converges(&f, &imp, q(17)).unwrap(), Verdict::Yes);
        let lims = i_limits(&f, &Ideal::fin(Universe::Nat)).unwrap();
        assert_eq!(lims, vec![(q(0), Verdict::Yes)]);
    }

    #[test]
    fn diagonal_over_columns() {
        let f = build_diagonal_function(&Partition::Columns, q(0)).unwrap();
        assert_eq!(i_converges(&f, &cols(), q(0)).unwrap(), Verdict::Yes);
        assert_eq!(i_converges(&f, &fin2(), q(0)).unwrap(), Verdict::No);
        // Block 1 escapes the ball of radius 1/2 and is infinite.
        assert_eq!(SetTerm::block(&Partition::Columns, 1).unwrap().truncate(30).len(), 30);
        assert!(ihj_decide(&f, &cols(), &fin2(), q(0)).unwrap().is_no());
        assert_eq!(i_converges(&f, &cols(), q(1)).unwrap(), Verdict::No);
    }

    #[test]
    fn improper_limits_on_finite_space() {
        let sp = Space::finite_top(vec![q(0), q(1), q(2)], [0, 0b001, 0b011, 0b111]).unwrap();
        let f = PiecewiseFn::two_valued(sp, SetTerm::tail(3), q(1), q(2)).unwrap();
        let lims = i_limits(&f, &Ideal::improper(Universe::Nat)).unwrap();
        assert!(lims.iter().all(|(_, v)| *v == Verdict::Yes) && lims.len() == 3);
    }

    #[test]
    fn indiscrete_space_has_every_limit() {
        let sp = Space::indiscrete(vec![q(0), q(1)]).unwrap();
        let f = PiecewiseFn::two_valued(sp, SetTerm::tail(3), q(1), q(0)).unwrap();
        let lims = i_limits(&f, &Ideal::fin(Universe::Nat)).unwrap();
        assert_eq!(lims, vec![(q(0), Verdict::Yes), (q(1), Verdict::Yes)]);
    }

    #[test]
    fn column_bump_converges_after_modification() {
        let b1 = SetTerm::block(&Partition::Columns, 1).unwrap();
        let f = PiecewiseFn::two_valued(Space::MetricLine, b1.clone(), q(1), q(0)).unwrap();
        let v = ihj_decide(&f, &cols(), &fin2(), q(0)).unwrap();
        let w = v.witness().expect("converges");
        assert_eq!(w.m.truncate(12), b1.complement().truncate(12));
        assert!(w.reverify(&f, &cols(), &fin2(), q(0)).unwrap());
        let g = f.modify_on(&w.m, q(0)).unwrap();
        assert_eq!(i_converges(&g, &fin2(), q(0)).unwrap(), Verdict::Yes);
        assert_eq!(i_converges(&f, &fin2(), q(0)).unwrap(), Verdict::No);
    }

    #[test]
    fn decomposition_recombines() {
        let b1 = SetTerm::block(&Partition::Columns, 1).unwrap();
        let f = PiecewiseFn::two_valued(Space::MetricLine, b1, q(5), q(0)).unwrap();
        let dec = decompose(&f, &cols(), &fin2(), q(0)).unwrap();
        for a in 1..12 {
            for b in 1..12 {
                let e = Element::Pair(a, b);
                let fv = f.eval(e).unwrap();
                assert_eq!(dec.g.eval(e).unwrap(), q(0));
                assert_eq!(dec.h.eval(e).unwrap(), fv);
                assert_eq!(dec.g.eval(e).unwrap() + dec.h.eval(e).unwrap(), fv);
            }
        }
        let c = PiecewiseFn::constant(Universe::Nat, Space::MetricLine, q(0)).unwrap();
        let fin = Ideal::fin(Universe::Nat);
        let d0 = decompose(&c, &fin, &fin, q(0)).unwrap();
        assert_eq!(d0.g, c.modify_on(&SetTerm::full(Universe::Nat), q(0)).unwrap());
        assert!((1..30).all(|n| d0.h.eval(Element::Nat(n)).unwrap() == q(0)));
    }

    #[test]
    fn decomposition_shifts_by_limit() {
        let f = PiecewiseFn::two_valued(Space::MetricLine, SetTerm::nat_set([2, 4]), q(9), q(3)).unwrap();
        let fin = Ideal::fin(Universe::Nat);
        let dec = decompose(&f, &fin, &fin, q(3)).unwrap();
        for n in 1..40 {
            let e = Element::Nat(n);
            assert_eq!(dec.g.eval(e).unwrap() + dec.h.eval(e).unwrap(), f.eval(e).unwrap());
        }
    }

    #[test]
    fn imp1_counterexamples() {
        let sp = Space::discrete(vec![q(0), q(1)]).unwrap();
        let nat_fin = Ideal::fin(Universe::Nat);
        let imp = Ideal::improper(Universe::Nat);
        let full = SetTerm::full(Universe::Nat);
        let f = build_imp1_counterexample(&nat_fin, &imp, &sp, q(0), &OpenSet::Mask(0b01), q(1), &full).unwrap();
        assert_eq!(i_converges(&f, &imp, q(0)).unwrap(), Verdict::Yes);
        assert_eq!(i_converges(&f, &nat_fin, q(0)).unwrap(), Verdict::No);
        assert!(ihj_decide(&f, &nat_fin, &imp, q(0)).unwrap().is_converges());

        let a = SetTerm::upper_quad(2).complement();
        let u = OpenSet::ball(q(0), Rational::new(1, 2));
        let g = build_imp1_counterexample(&cols(), &Ideal::pringsheim(), &Space::MetricLine, q(0), &u, q(1), &a)
            .unwrap();
        assert_eq!(i_converges(&g, &cols(), q(0)).unwrap(), Verdict::No);
        assert!(ihj_decide(&g, &cols(), &Ideal::pringsheim(), q(0)).unwrap().is_converges());

        let err = build_imp1_counterexample(&imp, &imp, &sp, q(0), &OpenSet::Mask(0b01), q(1), &full);
        assert!(matches!(err, Err(Error::PreconditionViolated(_))));
    }

    #[test]
    fn tails_need_admissible_ideal() {
        let f = PiecewiseFn::new(
            Universe::Nat,
            Space::MetricLine,
            vec![Piece::new(SetTerm::full(Universe::Nat), ValueSpec::TailsTo(q(2)))],
            None,
            None,
        )
        .unwrap();
        assert_eq!(i_converges(&f, &Ideal::fin(Universe::Nat), q(2)).unwrap(), Verdict::Yes);
        assert_eq!(i_converges(&f, &Ideal::fin(Universe::Nat), q(1)).unwrap(), Verdict::No);
        let p = Ideal::principal(SetTerm::tail(4));
        assert!(matches!(i_converges(&f, &p, q(2)), Err(Error::AdmissibilityRequired)));
    }

    #[test]
    fn diagonal_off_target() {
        // y_2 = 1/2, so x = 1/2 is reached only on block 2.
        let f = build_diagonal_function(&Partition::Columns, q(0)).unwrap();
        let imp = Ideal::improper(Universe::NatPair);
        assert_eq!(i_converges(&f, &imp, Rational::new(1, 2)).unwrap(), Verdict::Yes);
        let p = Ideal::principal(SetTerm::block(&Partition::Columns, 2).unwrap().complement());
        assert_eq!(i_converges(&f, &p, Rational::new(1, 2)).unwrap(), Verdict::Yes);
        assert_eq!(i_converges(&f, &p, Rational::new(1, 3)).unwrap(), Verdict::No);
    }

    #[test]
    fn constant_converges_for_any_pair() {
        let f = PiecewiseFn::constant(Universe::NatPair, Space::MetricLine, q(0)).unwrap();
        for (i, j) in [(cols(), fin2()), (Ideal::pringsheim(), cols()), (fin2(), Ideal::pringsheim())] {
            let v = ihj_decide(&f, &i, &j, q(0)).unwrap();
            assert_eq!(v.witness().unwrap().m, SetTerm::full(Universe::NatPair));
        }
    }
}
