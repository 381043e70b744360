//! Catalog of ideals with exact membership procedures.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::classify::{self, block_incidence, transport, Incidence};
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::term::{Atom, Node, SetTerm};
use crate::universe::{Bijection, Element, Universe};

/// Three-valued answer for questions the rule tables may not settle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ternary {
    True,
    False,
    Unknown,
}

impl Ternary {
    pub fn from_bool(b: bool) -> Ternary {
        if b {
            Ternary::True
        } else {
            Ternary::False
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Ternary::True => "true",
            Ternary::False => "false",
            Ternary::Unknown => "unknown",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum IdealKind {
    Fin(Universe),
    Improper(Universe),
    /// All subsets of the given term.
    Principal(SetTerm),
    /// Sets meeting finitely many blocks.
    Partition(Partition),
    /// Sets avoiding some upper quadrant; decided as the partition ideal of
    /// the gamma blocks.
    Pringsheim,
    /// Subsets `A` of `N x N` such that the union of the cuts
    /// `{n : (x, n) ∈ A}` over `x ∈ X` belongs to the base ideal on `N`.
    /// Pairs with first coordinate outside `X` are unconstrained.
    UniformProduct(Box<Ideal>, Vec<u64>),
    /// As the uniform product, but each cut separately.
    PointwiseProduct(Box<Ideal>, Vec<u64>),
    /// Image of an ideal under a bijection onto the other universe.
    Pushforward(Box<Ideal>, Bijection),
    /// `{A : A ∩ M ∈ J}`.
    Trace(Box<Ideal>, SetTerm),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IdealFlags {
    pub admissible: bool,
    pub proper: bool,
    pub has_maximum: bool,
}

/// An ideal from the catalog. Construct with the associated functions, which
/// reject ill-formed descriptors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ideal {
    kind: IdealKind,
}

impl Ideal {
    pub fn fin(u: Universe) -> Ideal {
        Ideal { kind: IdealKind::Fin(u) }
    }

    pub fn improper(u: Universe) -> Ideal {
        Ideal { kind: IdealKind::Improper(u) }
    }

    pub fn principal(t: SetTerm) -> Ideal {
        Ideal { kind: IdealKind::Principal(t) }
    }

    pub fn partition(p: Partition) -> Result<Ideal> {
        if !p.has_infinitely_many_blocks() {
            return Err(Error::FinitePartition(p.name()));
        }
        Ok(Ideal { kind: IdealKind::Partition(p) })
    }

    pub fn pringsheim() -> Ideal {
        Ideal { kind: IdealKind::Pringsheim }
    }

    pub fn uniform_product(base: Ideal, xs: impl IntoIterator<Item = u64>) -> Result<Ideal> {
        let (base, xs) = Ideal::product_parts(base, xs)?;
        Ok(Ideal { kind: IdealKind::UniformProduct(Box::new(base), xs) })
    }

    pub fn pointwise_product(base: Ideal, xs: impl IntoIterator<Item = u64>) -> Result<Ideal> {
        let (base, xs) = Ideal::product_parts(base, xs)?;
        Ok(Ideal { kind: IdealKind::PointwiseProduct(Box::new(base), xs) })
    }

    fn product_parts(base: Ideal, xs: impl IntoIterator<Item = u64>) -> Result<(Ideal, Vec<u64>)> {
        if base.universe() != Universe::Nat {
            return Err(Error::UniverseMismatch { expected: Universe::Nat, found: base.universe() });
        }
        let mut xs: Vec<u64> = xs.into_iter().collect();
        xs.sort_unstable();
        xs.dedup();
        if xs.is_empty() || xs[0] == 0 {
            return Err(Error::InvalidIdeal(String::from(
                "product index set must be a nonempty set of positive integers",
            )));
        }
        Ok((base, xs))
    }

    pub fn pushforward(base: Ideal, b: Bijection) -> Ideal {
        Ideal { kind: IdealKind::Pushforward(Box::new(base), b) }
    }

    pub fn trace(base: Ideal, m: SetTerm) -> Result<Ideal> {
        if base.universe() != m.universe() {
            return Err(Error::UniverseMismatch { expected: base.universe(), found: m.universe() });
        }
        Ok(Ideal { kind: IdealKind::Trace(Box::new(base), m) })
    }

    pub fn kind(&self) -> &IdealKind {
        &self.kind
    }

    pub fn universe(&self) -> Universe {
        match &self.kind {
            IdealKind::Fin(u) | IdealKind::Improper(u) => *u,
            IdealKind::Principal(t) => t.universe(),
            IdealKind::Partition(p) => p.universe(),
            IdealKind::Pringsheim | IdealKind::UniformProduct(..) | IdealKind::PointwiseProduct(..) => {
                Universe::NatPair
            }
            IdealKind::Pushforward(base, _) => base.universe().other(),
            IdealKind::Trace(base, _) => base.universe(),
        }
    }

    /// Catalog name of the descriptor.
    pub fn name(&self) -> &'static str {
        match &self.kind {
            IdealKind::Fin(_) => "fin",
            IdealKind::Improper(_) => "improper",
            IdealKind::Principal(_) => "principal",
            IdealKind::Partition(_) => "partition",
            IdealKind::Pringsheim => "pringsheim",
            IdealKind::UniformProduct(..) => "uniform_product",
            IdealKind::PointwiseProduct(..) => "pointwise_product",
            IdealKind::Pushforward(..) => "pushforward",
            IdealKind::Trace(..) => "trace",
        }
    }

    pub fn flags(&self) -> Result<IdealFlags> {
        Ok(IdealFlags {
            admissible: self.is_admissible()?,
            proper: self.is_proper()?,
            has_maximum: self.has_maximum()?,
        })
    }

    /// Contains every singleton.
    pub fn is_admissible(&self) -> Result<bool> {
        Ok(match &self.kind {
            IdealKind::Fin(_) | IdealKind::Improper(_) | IdealKind::Partition(_) | IdealKind::Pringsheim => true,
            IdealKind::Principal(t) => classify::is_empty(&t.complement())?,
            IdealKind::UniformProduct(base, _) | IdealKind::PointwiseProduct(base, _) => base.is_admissible()?,
            IdealKind::Pushforward(base, _) => base.is_admissible()?,
            IdealKind::Trace(base, m) => {
                if base.is_admissible()? {
                    true
                } else if let Some(top) = base.maximum()? {
                    classify::is_empty(&m.minus(&top)?)?
                } else {
                    false
                }
            }
        })
    }

    /// Does not contain the whole universe.
    pub fn is_proper(&self) -> Result<bool> {
        Ok(!self.contains(&SetTerm::full(self.universe()))?)
    }

    pub fn has_maximum(&self) -> Result<bool> {
        Ok(match &self.kind {
            IdealKind::Fin(_) | IdealKind::Partition(_) | IdealKind::Pringsheim => false,
            IdealKind::Improper(_) | IdealKind::Principal(_) => true,
            IdealKind::UniformProduct(base, _) | IdealKind::PointwiseProduct(base, _) => base.has_maximum()?,
            IdealKind::Pushforward(base, _) => base.has_maximum()?,
            IdealKind::Trace(base, m) => base.has_maximum()? || base.contains(m)?,
        })
    }

    /// The largest member, when one exists and is expressible as a term.
    pub fn maximum(&self) -> Result<Option<SetTerm>> {
        let u = self.universe();
        Ok(match &self.kind {
            IdealKind::Fin(_) | IdealKind::Partition(_) | IdealKind::Pringsheim => None,
            IdealKind::Improper(_) => Some(SetTerm::full(u)),
            IdealKind::Principal(t) => Some(t.clone()),
            IdealKind::UniformProduct(base, xs) | IdealKind::PointwiseProduct(base, xs) => {
                match base.maximum()? {
                    None => None,
                    Some(top) => {
                        let outside = SetTerm::union_all(u, xs.iter().map(|&x| SetTerm::col(x)))?.complement();
                        let mut parts = alloc::vec![outside];
                        let mut ok = true;
                        for &x in xs {
                            match lift_to_column(&top, x) {
                                Ok(t) => parts.push(t),
                                Err(_) => ok = false,
                            }
                        }
                        if ok {
                            Some(SetTerm::union_all(u, parts)?)
                        } else {
                            None
                        }
                    }
                }
            }
            IdealKind::Pushforward(base, b) => match base.maximum()? {
                Some(top) => Some(transport(&top, *b)?),
                None => None,
            },
            IdealKind::Trace(base, m) => {
                if base.contains(m)? {
                    Some(SetTerm::full(u))
                } else {
                    match base.maximum()? {
                        Some(top) => Some(top.union(&m.complement())?),
                        None => None,
                    }
                }
            }
        })
    }

    fn check_universe(&self, t: &SetTerm) -> Result<()> {
        if t.universe() == self.universe() {
            Ok(())
        } else {
            Err(Error::UniverseMismatch { expected: self.universe(), found: t.universe() })
        }
    }

    /// Exact membership of `t`.
    pub fn contains(&self, t: &SetTerm) -> Result<bool> {
        self.check_universe(t)?;
        match &self.kind {
            IdealKind::Fin(_) => classify::is_finite(t),
            IdealKind::Improper(_) => Ok(true),
            IdealKind::Principal(top) => classify::is_empty(&t.minus(top)?),
            IdealKind::Partition(p) => Ok(block_incidence(t, p)?.is_finite()),
            IdealKind::Pringsheim => Ok(block_incidence(t, &Partition::Gamma)?.is_finite()),
            IdealKind::UniformProduct(base, xs) => {
                let cuts = xs.iter().map(|&x| cut(t, x)).collect::<Result<Vec<_>>>()?;
                base.contains(&SetTerm::union_all(Universe::Nat, cuts)?)
            }
            IdealKind::PointwiseProduct(base, xs) => {
                for &x in xs {
                    if !base.contains(&cut(t, x)?)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            IdealKind::Pushforward(base, b) => base.contains(&transport(t, *b)?),
            IdealKind::Trace(base, m) => base.contains(&t.intersect(m)?),
        }
    }

    /// Membership of the complement in the ideal.
    pub fn in_filter(&self, t: &SetTerm) -> Result<bool> {
        self.check_universe(t)?;
        self.contains(&t.complement())
    }

    /// `A ∖ B` belongs to the ideal.
    pub fn subseteq_mod(&self, a: &SetTerm, b: &SetTerm) -> Result<bool> {
        self.contains(&a.minus(b)?)
    }

    /// `A △ B` belongs to the ideal.
    pub fn equiv_mod(&self, a: &SetTerm, b: &SetTerm) -> Result<bool> {
        Ok(self.subseteq_mod(a, b)? && self.subseteq_mod(b, a)?)
    }

    /// Whether every finite union of the first blocks of `p` belongs to the
    /// ideal.
    pub fn uniform_prefix_in_ideal(&self, p: &Partition) -> Ternary {
        if p.universe() != self.universe() {
            return Ternary::Unknown;
        }
        match self.prefix_rule(p) {
            Ok(Ternary::Unknown) | Err(_) => {}
            Ok(v) => return v,
        }
        // A failing early prefix settles the question.
        let upto = p.block_count().unwrap_or(PREFIX_PROBE).min(PREFIX_PROBE);
        let mut prefix = SetTerm::empty(p.universe());
        for i in 1..=upto {
            let Ok(next) = SetTerm::block(p, i).and_then(|b| prefix.union(&b)) else {
                return Ternary::Unknown;
            };
            prefix = next;
            match self.contains(&prefix) {
                Ok(false) => return Ternary::False,
                Ok(true) => {}
                Err(_) => return Ternary::Unknown,
            }
        }
        if p.block_count().is_some_and(|m| m <= PREFIX_PROBE) {
            Ternary::True
        } else {
            Ternary::Unknown
        }
    }

    fn prefix_rule(&self, p: &Partition) -> Result<Ternary> {
        if let Some(top) = self.maximum()? {
            // Every prefix lies in P(top) iff every block does.
            return Ok(match block_incidence(&top.complement(), p)? {
                Incidence::Finite(bs) if bs.is_empty() => Ternary::True,
                _ => Ternary::False,
            });
        }
        Ok(match (&self.kind, p) {
            (IdealKind::Improper(_), _) => Ternary::True,
            (IdealKind::Fin(_), _) => Ternary::False,
            (IdealKind::Partition(q), p) if q == p => Ternary::True,
            (IdealKind::Pringsheim, Partition::Gamma) => Ternary::True,
            (IdealKind::Partition(Partition::Gamma) | IdealKind::Pringsheim, Partition::Columns) => Ternary::True,
            (IdealKind::Pushforward(base, b), p) => base.uniform_prefix_in_ideal(&pull_partition(p, *b)),
            (IdealKind::Trace(base, _), p) => match base.uniform_prefix_in_ideal(p) {
                Ternary::True => Ternary::True,
                _ => Ternary::Unknown,
            },
            _ => Ternary::Unknown,
        })
    }

    /// `self ⊆ other`, when a catalog rule establishes it. `false` means
    /// "not known", not "known not to hold".
    pub fn known_inclusion(&self, other: &Ideal) -> bool {
        if self.universe() != other.universe() {
            return false;
        }
        if self.canonical() == other.canonical() {
            return true;
        }
        if matches!(other.kind, IdealKind::Improper(_)) {
            return true;
        }
        if matches!(self.kind, IdealKind::Fin(_)) && other.is_admissible().unwrap_or(false) {
            return true;
        }
        if let Ok(Some(top)) = self.maximum() {
            if other.contains(&top).unwrap_or(false) {
                return true;
            }
        }
        match (&self.canonical().kind, &other.canonical().kind) {
            (IdealKind::Partition(Partition::Columns), IdealKind::Partition(Partition::Gamma)) => true,
            (_, IdealKind::Trace(base, _)) if self.known_inclusion(base) => true,
            (
                IdealKind::UniformProduct(a, xa) | IdealKind::PointwiseProduct(a, xa),
                IdealKind::UniformProduct(b, xb) | IdealKind::PointwiseProduct(b, xb),
            ) => xa == xb && a.known_inclusion(b),
            (IdealKind::Pushforward(a, ba), IdealKind::Pushforward(b, bb)) => ba == bb && a.known_inclusion(b),
            _ => false,
        }
    }

    /// Descriptor with structurally equal ideals identified.
    fn canonical(&self) -> Ideal {
        match &self.kind {
            IdealKind::Pringsheim => Ideal { kind: IdealKind::Partition(Partition::Gamma) },
            // Uniform and pointwise products agree for finite index sets.
            IdealKind::PointwiseProduct(b, xs) => Ideal { kind: IdealKind::UniformProduct(b.clone(), xs.clone()) },
            _ => self.clone(),
        }
    }
}

const PREFIX_PROBE: u64 = 8;

fn pull_partition(p: &Partition, b: Bijection) -> Partition {
    match p {
        Partition::Pulled(b2, base) if *b2 == b => (**base).clone(),
        _ => Partition::pulled(b, p.clone()),
    }
}

/// `{n : (x, n) ∈ t}` as a term on `N`.
pub(crate) fn cut(t: &SetTerm, x: u64) -> Result<SetTerm> {
    t.map_atoms(&mut |atom| cut_atom(atom, x))
}

fn cut_atom(atom: &Atom, x: u64) -> Result<SetTerm> {
    let nat = Universe::Nat;
    Ok(match atom {
        Atom::Empty(_) => SetTerm::empty(nat),
        Atom::Full(_) => SetTerm::full(nat),
        Atom::Finite(_, elems) => SetTerm::finite(
            nat,
            elems.iter().filter_map(|e| match *e {
                Element::Pair(a, b) if a == x => Some(Element::Nat(b)),
                _ => None,
            }),
        )?,
        Atom::Row(i) => SetTerm::nat_set([*i]),
        Atom::Col(j) | Atom::Block(Partition::Columns, j) => {
            if *j == x {
                SetTerm::full(nat)
            } else {
                SetTerm::empty(nat)
            }
        }
        Atom::UpperQuad(m) => {
            if x >= *m {
                SetTerm::tail(*m)
            } else {
                SetTerm::empty(nat)
            }
        }
        Atom::Block(Partition::Gamma, i) => {
            if x < *i {
                SetTerm::empty(nat)
            } else if x == *i {
                SetTerm::tail(*i)
            } else {
                SetTerm::nat_set([*i])
            }
        }
        Atom::Pulled(b, inner) if matches!(**inner, Atom::Empty(_) | Atom::Full(_) | Atom::Finite(..) | Atom::Tail(_)) => {
            let native = transport(&SetTerm::atom((**inner).clone())?, *b)?;
            cut(&native, x)?
        }
        other => {
            return Err(Error::UnsupportedCombination(format!("column cut of {other}")));
        }
    })
}

/// `{(x, n) : n ∈ t}` for a term `t` on `N`.
pub(crate) fn lift_to_column(t: &SetTerm, x: u64) -> Result<SetTerm> {
    let column = SetTerm::col(x);
    match t.node() {
        Node::Atom(a) => Ok(match a {
            Atom::Empty(_) => SetTerm::empty(Universe::NatPair),
            Atom::Full(_) => column,
            Atom::Finite(_, elems) => SetTerm::finite(
                Universe::NatPair,
                elems.iter().filter_map(|e| match *e {
                    Element::Nat(n) => Some(Element::Pair(x, n)),
                    _ => None,
                }),
            )?,
            Atom::Tail(m) => column.minus(&SetTerm::pair_set((1..*m).map(|n| (x, n))))?,
            other => return Err(Error::UnsupportedCombination(format!("lifting {other} into a column"))),
        }),
        Node::Complement(inner) => column.minus(&lift_to_column(inner, x)?),
        Node::Union(ts) => SetTerm::union_all(
            Universe::NatPair,
            ts.iter().map(|s| lift_to_column(s, x)).collect::<Result<Vec<_>>>()?,
        ),
        Node::Intersection(ts) => SetTerm::intersect_all(
            Universe::NatPair,
            ts.iter().map(|s| lift_to_column(s, x)).collect::<Result<Vec<_>>>()?,
        ),
        Node::Difference(a, b) => lift_to_column(a, x)?.minus(&lift_to_column(b, x)?),
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, xs: &[u64]| -> fmt::Result {
            f.write_str("{")?;
            for (k, x) in xs.iter().enumerate() {
                if k > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str("}")
        };
        match &self.kind {
            IdealKind::Fin(u) => write!(f, "fin[{u}]"),
            IdealKind::Improper(u) => write!(f, "improper[{u}]"),
            IdealKind::Principal(t) => write!(f, "principal({t})"),
            IdealKind::Partition(p) => write!(f, "partition({p})"),
            IdealKind::Pringsheim => f.write_str("pringsheim"),
            IdealKind::UniformProduct(b, xs) => {
                write!(f, "uniform_product({b}, ")?;
                list(f, xs)?;
                f.write_str(")")
            }
            IdealKind::PointwiseProduct(b, xs) => {
                write!(f, "pointwise_product({b}, ")?;
                list(f, xs)?;
                f.write_str(")")
            }
            IdealKind::Pushforward(b, bij) => write!(f, "pushforward({b}, {bij})"),
            IdealKind::Trace(b, m) => write!(f, "trace({b}, {m})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cols() -> Ideal {
        Ideal::partition(Partition::Columns).unwrap()
    }

    /// Quadrant-avoidance oracle, independent of the gamma blocks.
    fn avoids_some_quadrant(t: &SetTerm) -> bool {
        (1..=40).any(|m| classify::is_empty(&t.intersect(&SetTerm::upper_quad(m)).unwrap()).unwrap())
    }

    #[test]
    fn pringsheim_examples() {
        let prg = Ideal::pringsheim();
        let t = SetTerm::upper_quad(4).complement();
        assert!(prg.contains(&t).unwrap());
        assert!(avoids_some_quadrant(&t));
        assert!(prg.in_filter(&SetTerm::upper_quad(4)).unwrap());
        for t in [SetTerm::row(1), SetTerm::col(3).complement(), SetTerm::upper_quad(9)] {
            assert_eq!(prg.contains(&t).unwrap(), avoids_some_quadrant(&t));
        }
        let flags = prg.flags().unwrap();
        assert!(flags.admissible && flags.proper && !flags.has_maximum);
    }

    #[test]
    fn membership_examples() {
        assert!(!Ideal::fin(Universe::Nat).contains(&SetTerm::tail(3)).unwrap());
        let t = SetTerm::union_all(
            Universe::NatPair,
            [
                SetTerm::block(&Partition::Columns, 1).unwrap(),
                SetTerm::block(&Partition::Columns, 2).unwrap(),
                SetTerm::pair_set([(5, 5)]),
            ],
        )
        .unwrap();
        assert!(cols().contains(&t).unwrap());
        // 20x20 oracle: three distinct first coordinates
        let mut firsts: Vec<u64> = t.truncate(20).iter().map(|e| Partition::Columns.block_of(*e)).collect();
        firsts.dedup();
        assert_eq!(firsts, vec![1, 2, 5]);
        assert!(Ideal::improper(Universe::Nat).in_filter(&SetTerm::empty(Universe::Nat)).unwrap());
        assert!(cols().in_filter(&SetTerm::block(&Partition::Columns, 1).unwrap().complement()).unwrap());
    }

    #[test]
    fn universe_mismatch_is_rejected() {
        assert!(matches!(
            Ideal::fin(Universe::Nat).contains(&SetTerm::row(1)),
            Err(Error::UniverseMismatch { .. })
        ));
    }

    #[test]
    fn modular_inclusion() {
        let fin = Ideal::fin(Universe::Nat);
        assert!(fin.subseteq_mod(&SetTerm::tail(10), &SetTerm::tail(5)).unwrap());
        assert!(fin.subseteq_mod(&SetTerm::tail(5), &SetTerm::tail(10)).unwrap());
        assert_eq!(SetTerm::tail(5).minus(&SetTerm::tail(10)).unwrap().truncate(100).len(), 5);
        let full = SetTerm::full(Universe::NatPair);
        let off3 = SetTerm::block(&Partition::Columns, 3).unwrap().complement();
        assert!(cols().subseteq_mod(&full, &off3).unwrap());
        assert!(!fin.equiv_mod(&SetTerm::tail(5), &SetTerm::nat_set([1])).unwrap());
    }

    #[test]
    fn traces() {
        let tr = Ideal::trace(Ideal::fin(Universe::Nat), SetTerm::tail(5)).unwrap();
        assert!(tr.contains(&SetTerm::nat_set([2]).union(&SetTerm::nat_set([100])).unwrap()).unwrap());
        assert!(tr.contains(&SetTerm::nat_set([1, 2, 3, 4]).union(&SetTerm::tail(5).complement()).unwrap()).unwrap());
        assert!(!tr.contains(&SetTerm::tail(7)).unwrap());
        let imp = Ideal::trace(Ideal::improper(Universe::Nat), SetTerm::tail(3)).unwrap();
        assert!(!imp.is_proper().unwrap());
        let tc = Ideal::trace(cols(), SetTerm::block(&Partition::Columns, 1).unwrap()).unwrap();
        assert!(tc.contains(&SetTerm::full(Universe::NatPair)).unwrap());
        assert!(Ideal::fin(Universe::Nat).known_inclusion(&tr));
    }

    #[test]
    fn principal_flags() {
        let p = Ideal::principal(SetTerm::tail(5));
        let f = p.flags().unwrap();
        assert!(!f.admissible && f.proper && f.has_maximum);
        assert_eq!(p.maximum().unwrap(), Some(SetTerm::tail(5)));
        let imp = Ideal::improper(Universe::Nat).flags().unwrap();
        assert!(imp.admissible && !imp.proper && imp.has_maximum);
        assert!(Ideal::principal(SetTerm::full(Universe::Nat)).is_admissible().unwrap());
    }

    #[test]
    fn residue_partition_ideal_is_rejected() {
        assert!(matches!(Ideal::partition(Partition::Residues(3)), Err(Error::FinitePartition(_))));
    }

    #[test]
    fn pushforward_membership() {
        let pf = Ideal::pushforward(Ideal::fin(Universe::Nat), Bijection::Cantor);
        assert!(pf.contains(&SetTerm::pair_set([(1, 1), (2, 2)])).unwrap());
        assert!(!pf.contains(&SetTerm::row(1)).unwrap());
        let mac = Ideal::partition(Partition::pulled(Bijection::Cantor, Partition::Gamma)).unwrap();
        let back = Ideal::pushforward(mac, Bijection::Cantor);
        for t in [SetTerm::upper_quad(3).complement(), SetTerm::row(2), SetTerm::upper_quad(2)] {
            assert_eq!(back.contains(&t).unwrap(), Ideal::pringsheim().contains(&t).unwrap());
        }
    }

    #[test]
    fn products() {
        let fin = Ideal::fin(Universe::Nat);
        let u = Ideal::uniform_product(fin.clone(), [1, 2]).unwrap();
        let p = Ideal::pointwise_product(fin, [1, 2]).unwrap();
        let a = SetTerm::upper_quad(3);
        // x = 1, 2 lie below the quadrant, so both cuts are empty.
        assert!(u.contains(&a).unwrap() && p.contains(&a).unwrap());
        let b = SetTerm::row(4).union(&SetTerm::col(7)).unwrap();
        assert!(u.contains(&b).unwrap() && p.contains(&b).unwrap());
        let c = SetTerm::col(2);
        assert!(!u.contains(&c).unwrap() && !p.contains(&c).unwrap());
        let g = SetTerm::block(&Partition::Gamma, 2).unwrap();
        assert!(!u.contains(&g).unwrap());
        assert!(u.known_inclusion(&p) && p.known_inclusion(&u));
        let pm = Ideal::pointwise_product(Ideal::principal(SetTerm::tail(4)), [2]).unwrap();
        let top = pm.maximum().unwrap().unwrap();
        assert!(pm.contains(&top).unwrap());
        assert!(!top.member(Element::Pair(2, 3)).unwrap());
        assert!(top.member(Element::Pair(2, 4)).unwrap() && top.member(Element::Pair(5, 1)).unwrap());
    }

    #[test]
    fn prefix_rules() {
        assert_eq!(cols().uniform_prefix_in_ideal(&Partition::Columns), Ternary::True);
        assert_eq!(Ideal::fin(Universe::NatPair).uniform_prefix_in_ideal(&Partition::Columns), Ternary::False);
        assert_eq!(Ideal::pringsheim().uniform_prefix_in_ideal(&Partition::Gamma), Ternary::True);
        assert_eq!(Ideal::improper(Universe::NatPair).uniform_prefix_in_ideal(&Partition::Gamma), Ternary::True);
        assert_eq!(cols().uniform_prefix_in_ideal(&Partition::Gamma), Ternary::False);
        let p = Ideal::principal(SetTerm::upper_quad(2).complement());
        assert_eq!(p.uniform_prefix_in_ideal(&Partition::Gamma), Ternary::False);
        let q = Ideal::principal(SetTerm::full(Universe::NatPair));
        assert_eq!(q.uniform_prefix_in_ideal(&Partition::Columns), Ternary::True);
    }

    #[test]
    fn inclusions() {
        let fin = Ideal::fin(Universe::NatPair);
        assert!(fin.known_inclusion(&cols()));
        assert!(cols().known_inclusion(&Ideal::pringsheim()));
        assert!(!Ideal::pringsheim().known_inclusion(&cols()));
        assert!(Ideal::pringsheim().known_inclusion(&Ideal::partition(Partition::Gamma).unwrap()));
        assert!(Ideal::principal(SetTerm::col(1)).known_inclusion(&cols()));
        assert!(!Ideal::principal(SetTerm::row(1)).known_inclusion(&cols()));
    }
}
