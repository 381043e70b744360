//! Symbolic subsets of a [`Universe`].
//!
//! A [`SetTerm`] is an immutable tree over a closed vocabulary of [`Atom`]s.
//! All nodes of a tree share one universe; combining terms from different
//! universes is rejected when the combination is built.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::universe::{Bijection, Element, Universe};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Empty(Universe),
    Full(Universe),
    /// Explicit elements, kept sorted and deduplicated.
    Finite(Universe, Vec<Element>),
    /// `{n : n >= m}` on `N`.
    Tail(u64),
    /// `[m, ∞) x [m, ∞)` on `N x N`.
    UpperQuad(u64),
    /// `{(n, i) : n >= 1}`: second coordinate fixed.
    Row(u64),
    /// `{(i, k) : k >= 1}`: first coordinate fixed.
    Col(u64),
    Block(Partition, u64),
    /// `{e : b(e) ∈ inner}` where `b` maps this universe onto the inner
    /// atom's universe.
    Pulled(Bijection, Box<Atom>),
}

impl Atom {
    pub fn universe(&self) -> Universe {
        match self {
            Atom::Empty(u) | Atom::Full(u) | Atom::Finite(u, _) => *u,
            Atom::Tail(_) => Universe::Nat,
            Atom::UpperQuad(_) | Atom::Row(_) | Atom::Col(_) => Universe::NatPair,
            Atom::Block(p, _) => p.universe(),
            Atom::Pulled(_, inner) => inner.universe().other(),
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidAtom(format!("{what} in {self}")));
        match self {
            Atom::Empty(_) | Atom::Full(_) => Ok(()),
            Atom::Finite(u, elems) => {
                for e in elems {
                    if e.universe() != *u {
                        return Err(Error::UniverseMismatch { expected: *u, found: e.universe() });
                    }
                    if !e.is_valid() {
                        return bad("zero coordinate");
                    }
                }
                Ok(())
            }
            Atom::Tail(m) | Atom::UpperQuad(m) | Atom::Row(m) | Atom::Col(m) => {
                if *m == 0 {
                    bad("zero index")
                } else {
                    Ok(())
                }
            }
            Atom::Block(p, i) => {
                if let Partition::Residues(0) = p {
                    return bad("zero modulus");
                }
                if p.is_valid_index(*i) {
                    Ok(())
                } else {
                    bad("block index out of range")
                }
            }
            Atom::Pulled(_, inner) => inner.validate(),
        }
    }

    fn normalized(self) -> Atom {
        match self {
            Atom::Finite(u, mut elems) => {
                elems.sort_unstable();
                elems.dedup();
                Atom::Finite(u, elems)
            }
            Atom::Pulled(b, inner) => Atom::Pulled(b, Box::new(inner.normalized())),
            other => other,
        }
    }

    pub fn contains(&self, e: Element) -> bool {
        match (self, e) {
            (Atom::Empty(_), _) => false,
            (Atom::Full(_), _) => true,
            (Atom::Finite(_, elems), e) => elems.binary_search(&e).is_ok(),
            (Atom::Tail(m), Element::Nat(n)) => n >= *m,
            (Atom::UpperQuad(m), Element::Pair(a, b)) => a >= *m && b >= *m,
            (Atom::Row(i), Element::Pair(_, b)) => b == *i,
            (Atom::Col(i), Element::Pair(a, _)) => a == *i,
            (Atom::Block(p, i), e) => p.block_of(e) == *i,
            (Atom::Pulled(b, inner), e) => inner.contains(b.apply(e)),
            _ => false,
        }
    }

    /// Constants the atom's membership test compares coordinates against.
    pub(crate) fn constants(&self, out: &mut Vec<u64>) {
        match self {
            Atom::Empty(_) | Atom::Full(_) => {}
            Atom::Finite(_, elems) => {
                for e in elems {
                    match *e {
                        Element::Nat(n) => out.push(n),
                        Element::Pair(a, b) => {
                            out.push(a);
                            out.push(b);
                        }
                    }
                }
            }
            Atom::Tail(m) | Atom::UpperQuad(m) | Atom::Row(m) | Atom::Col(m) => out.push(*m),
            Atom::Block(Partition::Residues(_), _) => {}
            Atom::Block(_, i) => out.push(*i),
            Atom::Pulled(_, inner) => inner.constants(out),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Empty(u) => write!(f, "empty[{u}]"),
            Atom::Full(u) => write!(f, "full[{u}]"),
            Atom::Finite(u, elems) => {
                write!(f, "finite[{u}]{{")?;
                for (k, e) in elems.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{e}")?;
                }
                f.write_str("}")
            }
            Atom::Tail(m) => write!(f, "tail({m})"),
            Atom::UpperQuad(m) => write!(f, "upper_quad({m})"),
            Atom::Row(i) => write!(f, "row({i})"),
            Atom::Col(i) => write!(f, "col({i})"),
            Atom::Block(p, i) => write!(f, "block({p},{i})"),
            Atom::Pulled(b, inner) => write!(f, "pulled({b},{inner})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    Atom(Atom),
    Complement(Box<SetTerm>),
    Union(Vec<SetTerm>),
    Intersection(Vec<SetTerm>),
    Difference(Box<SetTerm>, Box<SetTerm>),
}

/// A symbolic subset of one universe.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SetTerm {
    universe: Universe,
    node: Node,
}

impl SetTerm {
    pub fn atom(atom: Atom) -> Result<SetTerm> {
        let atom = atom.normalized();
        atom.validate()?;
        Ok(SetTerm { universe: atom.universe(), node: Node::Atom(atom) })
    }

    fn from_valid_atom(atom: Atom) -> SetTerm {
        SetTerm { universe: atom.universe(), node: Node::Atom(atom) }
    }

    pub fn empty(u: Universe) -> SetTerm {
        SetTerm::from_valid_atom(Atom::Empty(u))
    }

    pub fn full(u: Universe) -> SetTerm {
        SetTerm::from_valid_atom(Atom::Full(u))
    }

    pub fn finite(u: Universe, elems: impl IntoIterator<Item = Element>) -> Result<SetTerm> {
        SetTerm::atom(Atom::Finite(u, elems.into_iter().collect()))
    }

    /// Finite subset of `N`.
    ///
    /// # Panics
    ///
    /// Panics if some element is 0.
    pub fn nat_set(ns: impl IntoIterator<Item = u64>) -> SetTerm {
        SetTerm::finite(Universe::Nat, ns.into_iter().map(Element::Nat)).expect("indices start at 1")
    }

    /// Finite subset of `N x N`.
    ///
    /// # Panics
    ///
    /// Panics if some coordinate is 0.
    pub fn pair_set(ps: impl IntoIterator<Item = (u64, u64)>) -> SetTerm {
        SetTerm::finite(Universe::NatPair, ps.into_iter().map(|(a, b)| Element::Pair(a, b)))
            .expect("indices start at 1")
    }

    fn indexed(atom: Atom) -> SetTerm {
        SetTerm::atom(atom).expect("indices start at 1")
    }

    /// # Panics
    ///
    /// Panics if `m` is 0; the same holds for the other index constructors.
    pub fn tail(m: u64) -> SetTerm {
        SetTerm::indexed(Atom::Tail(m))
    }

    pub fn upper_quad(m: u64) -> SetTerm {
        SetTerm::indexed(Atom::UpperQuad(m))
    }

    pub fn row(i: u64) -> SetTerm {
        SetTerm::indexed(Atom::Row(i))
    }

    pub fn col(i: u64) -> SetTerm {
        SetTerm::indexed(Atom::Col(i))
    }

    pub fn block(p: &Partition, i: u64) -> Result<SetTerm> {
        SetTerm::atom(Atom::Block(p.clone(), i))
    }

    pub fn pulled(b: Bijection, inner: Atom) -> Result<SetTerm> {
        SetTerm::atom(Atom::Pulled(b, Box::new(inner)))
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn node(&self) -> &Node {
        &self.node
    }

    pub fn as_atom(&self) -> Option<&Atom> {
        match &self.node {
            Node::Atom(a) => Some(a),
            _ => None,
        }
    }

    fn check(&self, other: &SetTerm) -> Result<()> {
        if self.universe == other.universe {
            Ok(())
        } else {
            Err(Error::UniverseMismatch { expected: self.universe, found: other.universe })
        }
    }

    pub fn complement(&self) -> SetTerm {
        SetTerm { universe: self.universe, node: Node::Complement(Box::new(self.clone())) }
    }

    pub fn union(&self, other: &SetTerm) -> Result<SetTerm> {
        self.check(other)?;
        Ok(SetTerm { universe: self.universe, node: Node::Union(alloc::vec![self.clone(), other.clone()]) })
    }

    pub fn intersect(&self, other: &SetTerm) -> Result<SetTerm> {
        self.check(other)?;
        Ok(SetTerm {
            universe: self.universe,
            node: Node::Intersection(alloc::vec![self.clone(), other.clone()]),
        })
    }

    pub fn minus(&self, other: &SetTerm) -> Result<SetTerm> {
        self.check(other)?;
        Ok(SetTerm {
            universe: self.universe,
            node: Node::Difference(Box::new(self.clone()), Box::new(other.clone())),
        })
    }

    /// Symmetric difference.
    pub fn sym_diff(&self, other: &SetTerm) -> Result<SetTerm> {
        self.minus(other)?.union(&other.minus(self)?)
    }

    /// Union of any number of terms; an empty list yields the empty set.
    pub fn union_all(u: Universe, terms: impl IntoIterator<Item = SetTerm>) -> Result<SetTerm> {
        SetTerm::nary(u, terms, true)
    }

    /// Intersection of any number of terms; an empty list yields the full set.
    pub fn intersect_all(u: Universe, terms: impl IntoIterator<Item = SetTerm>) -> Result<SetTerm> {
        SetTerm::nary(u, terms, false)
    }

    fn nary(u: Universe, terms: impl IntoIterator<Item = SetTerm>, union: bool) -> Result<SetTerm> {
        let mut items: Vec<SetTerm> = Vec::new();
        for t in terms {
            if t.universe != u {
                return Err(Error::UniverseMismatch { expected: u, found: t.universe });
            }
            items.push(t);
        }
        Ok(match items.len() {
            0 if union => SetTerm::empty(u),
            0 => SetTerm::full(u),
            1 => items.pop().unwrap(),
            _ if union => SetTerm { universe: u, node: Node::Union(items) },
            _ => SetTerm { universe: u, node: Node::Intersection(items) },
        })
    }

    /// Builds a node from already-validated children. Used by the JSON reader,
    /// which must preserve the exact tree shape it was given.
    pub fn from_node(node: Node) -> Result<SetTerm> {
        let universe = match &node {
            Node::Atom(a) => return SetTerm::atom(a.clone()),
            Node::Complement(t) => t.universe,
            Node::Difference(a, b) => {
                a.check(b)?;
                a.universe
            }
            Node::Union(ts) | Node::Intersection(ts) => {
                let first = ts
                    .first()
                    .ok_or_else(|| Error::InvalidAtom("empty n-ary node".into()))?;
                for t in ts {
                    first.check(t)?;
                }
                first.universe
            }
        };
        Ok(SetTerm { universe, node })
    }

    /// Characteristic function, by direct evaluation of the tree.
    pub fn member(&self, e: Element) -> Result<bool> {
        if e.universe() != self.universe {
            return Err(Error::UniverseMismatch { expected: self.universe, found: e.universe() });
        }
        Ok(self.eval(e))
    }

    pub(crate) fn eval(&self, e: Element) -> bool {
        match &self.node {
            Node::Atom(a) => a.contains(e),
            Node::Complement(t) => !t.eval(e),
            Node::Union(ts) => ts.iter().any(|t| t.eval(e)),
            Node::Intersection(ts) => ts.iter().all(|t| t.eval(e)),
            Node::Difference(a, b) => a.eval(e) && !b.eval(e),
        }
    }

    /// Members with every coordinate `<= bound`, in ascending order.
    pub fn truncate(&self, bound: u64) -> Vec<Element> {
        match self.universe {
            Universe::Nat => (1..=bound).map(Element::Nat).filter(|&e| self.eval(e)).collect(),
            Universe::NatPair => (1..=bound)
                .flat_map(|a| (1..=bound).map(move |b| Element::Pair(a, b)))
                .filter(|&e| self.eval(e))
                .collect(),
        }
    }

    pub fn for_each_atom<'a>(&'a self, visit: &mut impl FnMut(&'a Atom)) {
        match &self.node {
            Node::Atom(a) => visit(a),
            Node::Complement(t) => t.for_each_atom(visit),
            Node::Union(ts) | Node::Intersection(ts) => ts.iter().for_each(|t| t.for_each_atom(visit)),
            Node::Difference(a, b) => {
                a.for_each_atom(visit);
                b.for_each_atom(visit);
            }
        }
    }

    /// Largest constant any atom compares against (0 if none).
    pub fn max_constant(&self) -> u64 {
        let mut cs = Vec::new();
        self.for_each_atom(&mut |a| a.constants(&mut cs));
        cs.into_iter().max().unwrap_or(0)
    }

    /// Rebuilds the tree with every atom replaced.
    pub(crate) fn map_atoms(&self, f: &mut impl FnMut(&Atom) -> Result<SetTerm>) -> Result<SetTerm> {
        Ok(match &self.node {
            Node::Atom(a) => f(a)?,
            Node::Complement(t) => t.map_atoms(f)?.complement(),
            Node::Union(ts) | Node::Intersection(ts) => {
                let mapped = ts.iter().map(|t| t.map_atoms(f)).collect::<Result<Vec<_>>>()?;
                let u = mapped[0].universe;
                for t in &mapped {
                    mapped[0].check(t)?;
                }
                let node = match &self.node {
                    Node::Union(_) => Node::Union(mapped),
                    _ => Node::Intersection(mapped),
                };
                SetTerm { universe: u, node }
            }
            Node::Difference(a, b) => a.map_atoms(f)?.minus(&b.map_atoms(f)?)?,
        })
    }
}

impl fmt::Display for SetTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, name: &str, ts: &[SetTerm]| {
            write!(f, "{name}(")?;
            for (k, t) in ts.iter().enumerate() {
                if k > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{t}")?;
            }
            f.write_str(")")
        };
        match &self.node {
            Node::Atom(a) => write!(f, "{a}"),
            Node::Complement(t) => write!(f, "compl({t})"),
            Node::Union(ts) => list(f, "union", ts),
            Node::Intersection(ts) => list(f, "inter", ts),
            Node::Difference(a, b) => write!(f, "diff({a}, {b})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_block_membership() {
        let b3 = SetTerm::block(&Partition::Gamma, 3).unwrap();
        assert!(b3.member(Element::Pair(5, 3)).unwrap());
        assert!(!b3.member(Element::Pair(2, 3)).unwrap());
    }

    #[test]
    fn complement_of_full_is_empty() {
        let t = SetTerm::full(Universe::Nat).complement();
        assert!(!t.member(Element::Nat(7)).unwrap());
        assert!(t.truncate(100).is_empty());
    }

    #[test]
    fn wrong_universe_is_rejected() {
        let err = SetTerm::tail(3).member(Element::Pair(1, 1)).unwrap_err();
        assert!(matches!(err, Error::UniverseMismatch { .. }));
        assert!(SetTerm::tail(3).union(&SetTerm::row(1)).is_err());
        assert!(SetTerm::finite(Universe::Nat, [Element::Pair(1, 2)]).is_err());
        assert!(SetTerm::block(&Partition::Residues(3), 4).is_err());
        assert!(SetTerm::atom(Atom::Tail(0)).is_err());
    }

    #[test]
    fn truncation_examples() {
        assert_eq!(
            SetTerm::upper_quad(3).truncate(4),
            vec![Element::Pair(3, 3), Element::Pair(3, 4), Element::Pair(4, 3), Element::Pair(4, 4)]
        );
        assert!(SetTerm::empty(Universe::NatPair).truncate(100).is_empty());
        let mut got = SetTerm::block(&Partition::Gamma, 2).unwrap().truncate(3);
        got.sort();
        let mut want = vec![Element::Pair(2, 2), Element::Pair(3, 2), Element::Pair(2, 3)];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn pulled_atoms_follow_the_bijection() {
        let t = SetTerm::pulled(Bijection::Cantor, Atom::Col(1)).unwrap();
        assert_eq!(t.universe(), Universe::Nat);
        for n in 1..200 {
            let (a, _) = Bijection::Cantor.encode(n);
            assert_eq!(t.member(Element::Nat(n)).unwrap(), a == 1);
        }
    }

    #[test]
    fn display_is_canonical() {
        let t = SetTerm::tail(3).union(&SetTerm::nat_set([2, 1]).complement()).unwrap();
        assert_eq!(alloc::format!("{t}"), "union(tail(3), compl(finite[nat]{1,2}))");
    }
}
