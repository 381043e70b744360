//! Piecewise functions from a universe into a codomain space.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::classify::{classify, ClassifyResult};
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::space::{ContinuousMap, Space};
use crate::term::SetTerm;
use crate::universe::{Element, Universe};
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ValueSpec {
    Const(Rational),
    /// Every neighborhood of the value contains all but finitely many of
    /// the piece's images. Only meaningful on the line; concrete values are
    /// `v + 1/rank(e)`.
    TailsTo(Rational),
}

impl ValueSpec {
    pub fn target(self) -> Rational {
        match self {
            ValueSpec::Const(v) | ValueSpec::TailsTo(v) => v,
        }
    }

    fn map_target(self, f: impl FnOnce(Rational) -> Rational) -> ValueSpec {
        match self {
            ValueSpec::Const(v) => ValueSpec::Const(f(v)),
            ValueSpec::TailsTo(v) => ValueSpec::TailsTo(f(v)),
        }
    }
}

impl fmt::Display for ValueSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueSpec::Const(v) => write!(f, "const {v}"),
            ValueSpec::TailsTo(v) => write!(f, "tails to {v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Piece {
    pub set: SetTerm,
    pub value: ValueSpec,
}

impl Piece {
    pub fn new(set: SetTerm, value: ValueSpec) -> Piece {
        Piece { set, value }
    }

    pub fn constant(set: SetTerm, v: Rational) -> Piece {
        Piece { set, value: ValueSpec::Const(v) }
    }
}

/// Block `i` of the partition maps to `target + scale / i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Diagonal {
    partition: Partition,
    target: Rational,
    scale: Rational,
}

impl Diagonal {
    pub fn new(partition: Partition, target: Rational, scale: Rational) -> Result<Diagonal> {
        if !partition.has_infinitely_many_blocks() {
            return Err(Error::FinitePartition(partition.name()));
        }
        if scale.is_zero() {
            return Err(Error::InvalidFunction(String::from("diagonal scale must be nonzero")));
        }
        Ok(Diagonal { partition, target, scale })
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn target(&self) -> Rational {
        self.target
    }

    pub fn scale(&self) -> Rational {
        self.scale
    }

    pub fn value(&self, block: u64) -> Rational {
        self.target + self.scale / Rational::from_integer(block as i64)
    }
}

/// A problem found by [`validate_fn`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Issue {
    WrongUniverse { piece: usize },
    Overlap { first: usize, second: usize, intersection: SetTerm },
    /// Uncovered indices form an infinite set.
    InfiniteRemainder(SetTerm),
    /// Uncovered indices are finite but no default value was given.
    MissingDefault(SetTerm),
    ValueOutsideCodomain { piece: usize, value: Rational },
    TailsOnFiniteSpace { piece: usize },
    DiagonalNeedsLine,
    DiagonalUniverse,
    Undecided(String),
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Issue::WrongUniverse { piece } => write!(f, "piece {piece} lives on the wrong universe"),
            Issue::Overlap { first, second, intersection } => {
                write!(f, "pieces {first} and {second} overlap in {intersection}")
            }
            Issue::InfiniteRemainder(t) => write!(f, "pieces leave an infinite remainder {t}"),
            Issue::MissingDefault(t) => write!(f, "finite remainder {t} has no default value"),
            Issue::ValueOutsideCodomain { piece, value } => write!(f, "piece {piece} maps to {value}, not a point"),
            Issue::TailsOnFiniteSpace { piece } => write!(f, "piece {piece} tails to a point of a finite space"),
            Issue::DiagonalNeedsLine => f.write_str("diagonal families need the metric line"),
            Issue::DiagonalUniverse => f.write_str("diagonal partition lives on another universe"),
            Issue::Undecided(s) => write!(f, "could not decide: {s}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
    /// The finite uncovered set that the default value will fill.
    pub filled_remainder: Option<SetTerm>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

/// A function given by finitely many disjoint pieces, optionally with a
/// diagonal family on everything the pieces leave uncovered.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PiecewiseFn {
    universe: Universe,
    codomain: Space,
    pieces: Vec<Piece>,
    diagonal: Option<Diagonal>,
    default: Option<Rational>,
    checked: bool,
}

impl PiecewiseFn {
    /// Builds and validates. On a finite codomain `TailsTo(v)` becomes
    /// `Const(v)`; a finite uncovered remainder becomes a `Const(default)`
    /// piece.
    pub fn new(
        universe: Universe,
        codomain: Space,
        pieces: Vec<Piece>,
        diagonal: Option<Diagonal>,
        default: Option<Rational>,
    ) -> Result<PiecewiseFn> {
        let mut f = PiecewiseFn::unchecked(universe, codomain, pieces, diagonal, default);
        if f.codomain.is_finite() {
            for p in &mut f.pieces {
                p.value = ValueSpec::Const(p.value.target());
            }
        }
        let report = validate_fn(&f);
        if !report.is_valid() {
            let msgs: Vec<String> = report.issues.iter().map(|i| format!("{i}")).collect();
            return Err(Error::InvalidFunction(msgs.join("; ")));
        }
        if let (Some(rest), Some(d)) = (report.filled_remainder, default) {
            f.pieces.push(Piece::constant(rest, d));
        }
        f.checked = true;
        Ok(f)
    }

    /// Stores the parts as given. Use [`validate_fn`] to inspect problems.
    pub fn unchecked(
        universe: Universe,
        codomain: Space,
        pieces: Vec<Piece>,
        diagonal: Option<Diagonal>,
        default: Option<Rational>,
    ) -> PiecewiseFn {
        PiecewiseFn { universe, codomain, pieces, diagonal, default, checked: false }
    }

    /// For parts that are valid by construction.
    pub(crate) fn trusted(
        universe: Universe,
        codomain: Space,
        pieces: Vec<Piece>,
        diagonal: Option<Diagonal>,
        default: Option<Rational>,
    ) -> PiecewiseFn {
        PiecewiseFn { universe, codomain, pieces, diagonal, default, checked: true }
    }

    pub fn constant(universe: Universe, codomain: Space, v: Rational) -> Result<PiecewiseFn> {
        PiecewiseFn::new(universe, codomain, alloc::vec![Piece::constant(SetTerm::full(universe), v)], None, None)
    }

    /// `on` on `a`, `off` elsewhere.
    pub fn two_valued(codomain: Space, a: SetTerm, on: Rational, off: Rational) -> Result<PiecewiseFn> {
        let u = a.universe();
        let rest = a.complement();
        PiecewiseFn::new(u, codomain, alloc::vec![Piece::constant(a, on), Piece::constant(rest, off)], None, None)
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn codomain(&self) -> &Space {
        &self.codomain
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn diagonal(&self) -> Option<&Diagonal> {
        self.diagonal.as_ref()
    }

    pub fn default_value(&self) -> Option<Rational> {
        self.default
    }

    /// Indices not covered by any ordinary piece.
    pub fn uncovered(&self) -> Result<SetTerm> {
        Ok(SetTerm::union_all(self.universe, self.pieces.iter().map(|p| p.set.clone()))?.complement())
    }

    pub(crate) fn ensure_valid(&self) -> Result<()> {
        if self.checked {
            return Ok(());
        }
        let report = validate_fn(self);
        if report.is_valid() && report.filled_remainder.is_none() {
            Ok(())
        } else {
            Err(Error::InvalidFunction(format!("{} issue(s); build with PiecewiseFn::new", report.issues.len())))
        }
    }

    /// Value at `e`.
    pub fn eval(&self, e: Element) -> Result<Rational> {
        if e.universe() != self.universe {
            return Err(Error::UniverseMismatch { expected: self.universe, found: e.universe() });
        }
        for p in &self.pieces {
            if p.set.eval(e) {
                return Ok(match p.value {
                    ValueSpec::Const(v) => v,
                    ValueSpec::TailsTo(v) => v + Rational::new(1, e.rank() as i64),
                });
            }
        }
        match &self.diagonal {
            Some(d) => Ok(d.value(d.partition.block_of(e))),
            None => self
                .default
                .ok_or_else(|| Error::InvalidFunction(format!("no piece covers {e}"))),
        }
    }

    /// `f` on `m`, the constant `x` off `m`.
    pub fn modify_on(&self, m: &SetTerm, x: Rational) -> Result<PiecewiseFn> {
        if m.universe() != self.universe {
            return Err(Error::UniverseMismatch { expected: self.universe, found: m.universe() });
        }
        self.codomain.require_point(x)?;
        let mut pieces: Vec<Piece> =
            self.pieces.iter().map(|p| Ok(Piece::new(p.set.intersect(m)?, p.value))).collect::<Result<_>>()?;
        pieces.push(Piece::constant(m.complement(), x));
        Ok(PiecewiseFn { pieces, checked: self.checked, ..self.clone() })
    }

    /// `map ∘ f`.
    pub fn compose(&self, map: &ContinuousMap) -> Result<PiecewiseFn> {
        if map.domain() != self.codomain {
            return Err(Error::PreconditionViolated(format!(
                "map is defined on {}, function takes values in {}",
                map.domain(),
                self.codomain
            )));
        }
        let collapse = matches!(map, ContinuousMap::Affine { slope, .. } if slope.is_zero());
        let mut pieces = Vec::with_capacity(self.pieces.len() + 1);
        for p in &self.pieces {
            let value = if collapse {
                ValueSpec::Const(map.apply(p.value.target())?)
            } else {
                let mut err = None;
                let v = p.value.map_target(|t| {
                    map.apply(t).unwrap_or_else(|e| {
                        err = Some(e);
                        t
                    })
                });
                if let Some(e) = err {
                    return Err(e);
                }
                v
            };
            pieces.push(Piece::new(p.set.clone(), value));
        }
        let diagonal = match (&self.diagonal, map) {
            (None, _) => None,
            (Some(_), ContinuousMap::Affine { offset, .. }) if collapse => {
                pieces.push(Piece::constant(self.uncovered()?, *offset));
                None
            }
            (Some(d), ContinuousMap::Affine { slope, offset }) => Some(Diagonal {
                partition: d.partition.clone(),
                target: slope * d.target + offset,
                scale: slope * d.scale,
            }),
            (Some(_), ContinuousMap::Table { .. }) => {
                return Err(Error::PreconditionViolated(String::from("diagonal families need the metric line")))
            }
        };
        Ok(PiecewiseFn {
            universe: self.universe,
            codomain: map.codomain(),
            pieces,
            diagonal,
            default: self.default.map(|d| map.apply(d)).transpose()?,
            checked: self.checked,
        })
    }
}

impl fmt::Display for PiecewiseFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "fn[{} -> {}]", self.universe, self.codomain)?;
        for p in &self.pieces {
            write!(f, " | {} on {}", p.value, p.set)?;
        }
        if let Some(d) = &self.diagonal {
            write!(f, " | diagonal {} + {}/i over {}", d.target, d.scale, d.partition)?;
        }
        Ok(())
    }
}

/// Checks disjointness, coverage and codomain constraints.
pub fn validate_fn(f: &PiecewiseFn) -> ValidationReport {
    let mut report = ValidationReport::default();
    let undecided = |e: Error| Issue::Undecided(format!("{e}"));
    for (k, p) in f.pieces.iter().enumerate() {
        if p.set.universe() != f.universe {
            report.issues.push(Issue::WrongUniverse { piece: k });
        }
        if !f.codomain.contains_point(p.value.target()) {
            report.issues.push(Issue::ValueOutsideCodomain { piece: k, value: p.value.target() });
        }
        if matches!(p.value, ValueSpec::TailsTo(_)) && f.codomain.is_finite() {
            report.issues.push(Issue::TailsOnFiniteSpace { piece: k });
        }
    }
    if !report.issues.is_empty() {
        return report;
    }
    if let Some(d) = &f.default {
        if !f.codomain.contains_point(*d) {
            report.issues.push(Issue::ValueOutsideCodomain { piece: f.pieces.len(), value: *d });
        }
    }
    for i in 0..f.pieces.len() {
        for j in i + 1..f.pieces.len() {
            let inter = match f.pieces[i].set.intersect(&f.pieces[j].set) {
                Ok(t) => t,
                Err(e) => {
                    report.issues.push(undecided(e));
                    continue;
                }
            };
            match classify(&inter) {
                Ok(ClassifyResult::EmptySet) => {}
                Ok(_) => report.issues.push(Issue::Overlap { first: i, second: j, intersection: inter }),
                Err(e) => report.issues.push(undecided(e)),
            }
        }
    }
    match &f.diagonal {
        Some(d) => {
            if f.codomain != Space::MetricLine {
                report.issues.push(Issue::DiagonalNeedsLine);
            }
            if d.partition.universe() != f.universe {
                report.issues.push(Issue::DiagonalUniverse);
            }
        }
        None => match f.uncovered().and_then(|rest| Ok((classify(&rest)?, rest))) {
            Ok((ClassifyResult::EmptySet, _)) => {}
            Ok((ClassifyResult::FiniteSet { .. }, rest)) => {
                if f.default.is_some() {
                    report.filled_remainder = Some(rest);
                } else {
                    report.issues.push(Issue::MissingDefault(rest));
                }
            }
            Ok((ClassifyResult::InfiniteSet, rest)) => report.issues.push(Issue::InfiniteRemainder(rest)),
            Err(e) => report.issues.push(undecided(e)),
        },
    }
    report
}
