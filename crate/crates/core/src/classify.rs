//! Exact classification of set terms.
//!
//! Every native atom compares coordinates against finitely many constants
//! (and, for residue blocks, against a modulus). Splitting each axis at those
//! constants yields finitely many cells on which the whole term is constant:
//!
//! * on `N`, without residue blocks, the segments between consecutive
//!   constants; with residue blocks of period `L`, the points `1..=K` plus
//!   the `L` residue classes above the largest constant `K`;
//! * on `N x N`, products of segments of the shared constant grid (`min(a,b)`
//!   and every coordinate comparison are constant on such products).
//!
//! A term is infinite iff it contains a cell with an unbounded segment (or a
//! residue class); otherwise its members are exactly the points of its finite
//! cells. Pulled atoms are handled by transporting the whole term along the
//! bijection, which is possible whenever the remaining atoms are finite or
//! cofinite; any other mix is reported as [`Error::UnsupportedCombination`].

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::term::{Atom, SetTerm};
use crate::universe::{Bijection, Element, Universe};

/// Finite results list their elements unless there are more than this many.
const ELEMENT_LIST_CAP: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassifyResult {
    EmptySet,
    FiniteSet { cardinality: u64, elements: Option<Vec<Element>> },
    InfiniteSet,
}

impl ClassifyResult {
    pub fn is_empty(&self) -> bool {
        matches!(self, ClassifyResult::EmptySet)
    }

    /// Empty or finite.
    pub fn is_finite(&self) -> bool {
        !matches!(self, ClassifyResult::InfiniteSet)
    }

    pub fn cardinality(&self) -> Option<u64> {
        match self {
            ClassifyResult::EmptySet => Some(0),
            ClassifyResult::FiniteSet { cardinality, .. } => Some(*cardinality),
            ClassifyResult::InfiniteSet => None,
        }
    }
}

/// Which blocks of a partition a term meets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Incidence {
    /// Ascending block indices.
    Finite(Vec<u64>),
    Infinite,
}

impl Incidence {
    pub fn is_finite(&self) -> bool {
        matches!(self, Incidence::Finite(_))
    }
}

pub fn classify(term: &SetTerm) -> Result<ClassifyResult> {
    match prepare(term)? {
        Prepared::Native(t) => Ok(classify_native(&native_cells(&t))),
        Prepared::Transport(b, t) => {
            let inner = classify(&transport(&t, b)?)?;
            Ok(match inner {
                ClassifyResult::FiniteSet { cardinality, elements } => ClassifyResult::FiniteSet {
                    cardinality,
                    elements: elements.map(|es| {
                        let mut back: Vec<Element> = es.into_iter().map(|e| b.apply(e)).collect();
                        back.sort_unstable();
                        back
                    }),
                },
                other => other,
            })
        }
    }
}

pub(crate) fn is_empty(term: &SetTerm) -> Result<bool> {
    Ok(classify(term)?.is_empty())
}

pub(crate) fn is_finite(term: &SetTerm) -> Result<bool> {
    Ok(classify(term)?.is_finite())
}

/// Blocks of `p` met by `term`. Both must live on the same universe.
pub fn block_incidence(term: &SetTerm, p: &Partition) -> Result<Incidence> {
    if term.universe() != p.universe() {
        return Err(Error::UniverseMismatch { expected: p.universe(), found: term.universe() });
    }
    if let Partition::Pulled(b, base) = p {
        return block_incidence(&transport(term, *b)?, base);
    }
    match prepare(term)? {
        Prepared::Native(t) => Ok(incidence_native(&native_cells(&t), p)),
        Prepared::Transport(..) => Err(Error::UnsupportedCombination(format!(
            "block incidence of {term} against native partition {p}"
        ))),
    }
}

/// Image of `term` under the bijection's map from its universe onto the other
/// one: `member(transport(t), b(e)) == member(t, e)`.
pub(crate) fn transport(term: &SetTerm, b: Bijection) -> Result<SetTerm> {
    let target = term.universe().other();
    term.map_atoms(&mut |atom| transport_atom(atom, b, target))
}

fn transport_atom(atom: &Atom, b: Bijection, target: Universe) -> Result<SetTerm> {
    match atom {
        Atom::Empty(_) => Ok(SetTerm::empty(target)),
        Atom::Full(_) => Ok(SetTerm::full(target)),
        Atom::Finite(_, elems) => SetTerm::finite(target, elems.iter().map(|&e| b.apply(e))),
        Atom::Tail(m) => Ok(SetTerm::finite(target, (1..*m).map(|n| b.apply(Element::Nat(n))))?.complement()),
        Atom::Pulled(b2, inner) if *b2 == b => SetTerm::atom((**inner).clone()),
        Atom::Block(Partition::Pulled(b2, base), i) if *b2 == b => SetTerm::block(base, *i),
        other => SetTerm::atom(Atom::Pulled(b, Box::new(other.clone()))),
    }
}

enum Prepared {
    Native(SetTerm),
    Transport(Bijection, SetTerm),
}

fn is_portable(atom: &Atom) -> bool {
    matches!(atom, Atom::Empty(_) | Atom::Full(_) | Atom::Finite(..) | Atom::Tail(_))
}

fn pulled_bijection(atom: &Atom) -> Option<Bijection> {
    match atom {
        Atom::Pulled(b, _) => Some(*b),
        Atom::Block(Partition::Pulled(b, _), _) => Some(*b),
        _ => None,
    }
}

/// Rewrites pulled finite/cofinite atoms natively, then decides whether the
/// term can be analysed where it is or must be transported.
fn prepare(term: &SetTerm) -> Result<Prepared> {
    let mut has_pulled = false;
    term.for_each_atom(&mut |a| has_pulled |= pulled_bijection(a).is_some());
    if !has_pulled {
        return Ok(Prepared::Native(term.clone()));
    }
    let simplified = term.map_atoms(&mut |atom| match atom {
        Atom::Pulled(b, inner) if is_portable(inner) => {
            transport_atom(inner, *b, inner.universe().other())
        }
        other => SetTerm::atom(other.clone()),
    })?;
    let mut bijections = BTreeSet::new();
    let mut rich_native = false;
    simplified.for_each_atom(&mut |a| match pulled_bijection(a) {
        Some(b) => {
            bijections.insert(b);
        }
        None => rich_native |= !is_portable(a),
    });
    match (bijections.len(), rich_native) {
        (0, _) => Ok(Prepared::Native(simplified)),
        (1, false) => Ok(Prepared::Transport(*bijections.first().unwrap(), simplified)),
        _ => Err(Error::UnsupportedCombination(format!(
            "{term} mixes pulled atoms with native atoms that cannot be transported"
        ))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Seg {
    lo: u64,
    /// `None` for the unbounded last segment.
    hi: Option<u64>,
}

impl Seg {
    fn is_infinite(self) -> bool {
        self.hi.is_none()
    }

    fn len(self) -> u64 {
        self.hi.map_or(u64::MAX, |hi| hi - self.lo + 1)
    }

    fn values(self) -> core::ops::RangeInclusive<u64> {
        self.lo..=self.hi.expect("bounded segment")
    }
}

/// Splits `{1, 2, ...}` into singletons at each constant and the gaps
/// between them, ending with `[max + 1, ∞)`.
fn segments(mut consts: Vec<u64>) -> Vec<Seg> {
    consts.retain(|&c| c >= 1);
    consts.sort_unstable();
    consts.dedup();
    let mut segs = Vec::with_capacity(2 * consts.len() + 1);
    let mut next = 1;
    for c in consts {
        if c > next {
            segs.push(Seg { lo: next, hi: Some(c - 1) });
        }
        segs.push(Seg { lo: c, hi: Some(c) });
        next = c + 1;
    }
    segs.push(Seg { lo: next, hi: None });
    segs
}

#[derive(Debug, Clone, Copy)]
enum Cell {
    Nat(Seg),
    /// `{first + t * period : t >= 0}`.
    NatClass { first: u64, period: u64 },
    Pair(Seg, Seg),
}

impl Cell {
    fn is_infinite(self) -> bool {
        match self {
            Cell::Nat(s) => s.is_infinite(),
            Cell::NatClass { .. } => true,
            Cell::Pair(a, b) => a.is_infinite() || b.is_infinite(),
        }
    }

    fn len(self) -> u64 {
        match self {
            Cell::Nat(s) => s.len(),
            Cell::NatClass { .. } => u64::MAX,
            Cell::Pair(a, b) => a.len().saturating_mul(b.len()),
        }
    }

    fn for_each_point(self, visit: &mut impl FnMut(Element)) {
        match self {
            Cell::Nat(s) => s.values().for_each(|n| visit(Element::Nat(n))),
            Cell::Pair(a, b) => {
                for x in a.values() {
                    for y in b.values() {
                        visit(Element::Pair(x, y));
                    }
                }
            }
            Cell::NatClass { .. } => unreachable!("residue classes are infinite"),
        }
    }
}

/// Cells of a native (pull-free) term on which the term holds.
fn native_cells(term: &SetTerm) -> Vec<Cell> {
    let mut consts = Vec::new();
    let mut period: u64 = 1;
    term.for_each_atom(&mut |a| {
        a.constants(&mut consts);
        if let Atom::Block(Partition::Residues(m), _) = a {
            period = period.lcm(m);
        }
    });
    match term.universe() {
        Universe::Nat if period == 1 => segments(consts)
            .into_iter()
            .filter(|s| term.eval(Element::Nat(s.lo)))
            .map(Cell::Nat)
            .collect(),
        Universe::Nat => {
            let k = consts.into_iter().max().unwrap_or(0);
            let mut cells: Vec<Cell> = (1..=k)
                .filter(|&n| term.eval(Element::Nat(n)))
                .map(|n| Cell::Nat(Seg { lo: n, hi: Some(n) }))
                .collect();
            cells.extend(
                (k + 1..=k + period)
                    .filter(|&n| term.eval(Element::Nat(n)))
                    .map(|first| Cell::NatClass { first, period }),
            );
            cells
        }
        Universe::NatPair => {
            let segs = segments(consts);
            let mut cells = Vec::new();
            for &sa in &segs {
                for &sb in &segs {
                    if term.eval(Element::Pair(sa.lo, sb.lo)) {
                        cells.push(Cell::Pair(sa, sb));
                    }
                }
            }
            cells
        }
    }
}

fn classify_native(cells: &[Cell]) -> ClassifyResult {
    if cells.is_empty() {
        return ClassifyResult::EmptySet;
    }
    if cells.iter().any(|c| c.is_infinite()) {
        return ClassifyResult::InfiniteSet;
    }
    let cardinality = cells.iter().fold(0u64, |acc, c| acc.saturating_add(c.len()));
    let elements = (cardinality <= ELEMENT_LIST_CAP).then(|| {
        let mut es = Vec::with_capacity(cardinality as usize);
        for c in cells {
            c.for_each_point(&mut |e| es.push(e));
        }
        es.sort_unstable();
        es
    });
    ClassifyResult::FiniteSet { cardinality, elements }
}

fn incidence_native(cells: &[Cell], p: &Partition) -> Incidence {
    let mut blocks = BTreeSet::new();
    for &cell in cells {
        match (p, cell) {
            (Partition::Columns, Cell::Pair(a, _)) => {
                if a.is_infinite() {
                    return Incidence::Infinite;
                }
                blocks.extend(a.values());
            }
            // Segments of one grid are equal or disjoint, so the minimum
            // ranges over exactly the lower of the two.
            (Partition::Gamma, Cell::Pair(a, b)) => {
                if a.is_infinite() && b.is_infinite() {
                    return Incidence::Infinite;
                }
                let low = if a.lo <= b.lo { a } else { b };
                blocks.extend(low.values());
            }
            (Partition::Residues(m), Cell::Nat(s)) if s.is_infinite() || s.len() >= *m => {
                blocks.extend(1..=*m);
            }
            (Partition::Residues(m), Cell::NatClass { first, period }) => {
                for t in 0..*m {
                    blocks.insert(p.block_of(Element::Nat(first + t * period)));
                }
            }
            (Partition::Residues(_), Cell::Nat(_)) => cell.for_each_point(&mut |e| {
                blocks.insert(p.block_of(e));
            }),
            _ => unreachable!("partition universe checked by caller"),
        }
    }
    Incidence::Finite(blocks.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_count(t: &SetTerm, bound: u64) -> usize {
        t.truncate(bound).len()
    }

    #[test]
    fn row_meets_column_in_one_point() {
        let t = SetTerm::row(2).intersect(&SetTerm::col(3)).unwrap();
        assert_eq!(
            classify(&t).unwrap(),
            ClassifyResult::FiniteSet { cardinality: 1, elements: Some(vec![Element::Pair(3, 2)]) }
        );
        // 20x20 enumeration oracle
        assert_eq!(t.truncate(20), vec![Element::Pair(3, 2)]);
    }

    #[test]
    fn basic_classes() {
        assert_eq!(classify(&SetTerm::full(Universe::Nat).complement()).unwrap(), ClassifyResult::EmptySet);
        let col7 = SetTerm::block(&Partition::Columns, 7).unwrap();
        assert_eq!(classify(&col7).unwrap(), ClassifyResult::InfiniteSet);
        let gap = SetTerm::tail(5).minus(&SetTerm::tail(10)).unwrap();
        assert_eq!(classify(&gap).unwrap().cardinality(), Some(5));
        assert_eq!(brute_count(&gap, 50), 5);
    }

    #[test]
    fn gamma_block_inside_higher_quadrant_is_empty() {
        let g = SetTerm::block(&Partition::Gamma, 2).unwrap();
        let t = g.intersect(&SetTerm::upper_quad(3)).unwrap();
        assert!(classify(&t).unwrap().is_empty());
        let dj = SetTerm::block(&Partition::Gamma, 2)
            .unwrap()
            .intersect(&SetTerm::block(&Partition::Gamma, 4).unwrap())
            .unwrap();
        assert!(classify(&dj).unwrap().is_empty());
    }

    #[test]
    fn residue_classes() {
        let r = Partition::Residues(3);
        let t = SetTerm::block(&r, 2)
            .unwrap()
            .intersect(&SetTerm::block(&Partition::Residues(2), 1).unwrap())
            .unwrap();
        // n ≡ 2 mod 3 and n odd: 5, 11, 17, ...
        assert_eq!(classify(&t).unwrap(), ClassifyResult::InfiniteSet);
        let none = SetTerm::block(&r, 1).unwrap().intersect(&SetTerm::block(&r, 2).unwrap()).unwrap();
        assert!(classify(&none).unwrap().is_empty());
        let few = SetTerm::block(&r, 1).unwrap().minus(&SetTerm::tail(8)).unwrap();
        assert_eq!(
            classify(&few).unwrap(),
            ClassifyResult::FiniteSet {
                cardinality: 3,
                elements: Some(vec![Element::Nat(1), Element::Nat(4), Element::Nat(7)])
            }
        );
    }

    #[test]
    fn large_constants_stay_cheap() {
        let t = SetTerm::pair_set([(1_000_000, 3)]).union(&SetTerm::row(9)).unwrap();
        assert_eq!(classify(&t).unwrap(), ClassifyResult::InfiniteSet);
        let f = SetTerm::pair_set([(1_000_000, 3)]).minus(&SetTerm::row(9)).unwrap();
        assert_eq!(classify(&f).unwrap().cardinality(), Some(1));
    }

    #[test]
    fn pulled_terms_are_transported() {
        let b = Bijection::Cantor;
        let t = SetTerm::pulled(b, Atom::Col(1))
            .unwrap()
            .intersect(&SetTerm::tail(4).complement())
            .unwrap();
        // n < 4 with first coordinate 1: encode(1) = (1,1), encode(3) = (1,2)
        assert_eq!(
            classify(&t).unwrap(),
            ClassifyResult::FiniteSet { cardinality: 2, elements: Some(vec![Element::Nat(1), Element::Nat(3)]) }
        );
        let inf = SetTerm::pulled(b, Atom::UpperQuad(3)).unwrap().minus(&SetTerm::nat_set([1, 2])).unwrap();
        assert_eq!(classify(&inf).unwrap(), ClassifyResult::InfiniteSet);
    }

    #[test]
    fn unsupported_mix_is_an_error() {
        let t = SetTerm::pulled(Bijection::Cantor, Atom::Col(1))
            .unwrap()
            .intersect(&SetTerm::block(&Partition::Residues(2), 1).unwrap())
            .unwrap();
        assert!(matches!(classify(&t), Err(Error::UnsupportedCombination(_))));
    }

    #[test]
    fn incidence_counts() {
        let cols = Partition::Columns;
        let t = SetTerm::union_all(
            Universe::NatPair,
            [
                SetTerm::block(&cols, 1).unwrap(),
                SetTerm::block(&cols, 2).unwrap(),
                SetTerm::pair_set([(5, 5)]),
            ],
        )
        .unwrap();
        assert_eq!(block_incidence(&t, &cols).unwrap(), Incidence::Finite(vec![1, 2, 5]));
        assert_eq!(
            block_incidence(&SetTerm::upper_quad(4).complement(), &cols).unwrap(),
            Incidence::Infinite
        );
        assert_eq!(
            block_incidence(&SetTerm::upper_quad(4).complement(), &Partition::Gamma).unwrap(),
            Incidence::Finite(vec![1, 2, 3])
        );
    }
}
