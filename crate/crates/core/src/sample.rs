//! Seeded random terms, ideal members and functions, plus a fixed corpus of
//! convergence fixtures.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engine::{build_diagonal_function, i_converges, ihj_decide};
use crate::error::Result;
use crate::function::{Diagonal, Piece, PiecewiseFn, ValueSpec};
use crate::ideal::Ideal;
use crate::partition::Partition;
use crate::space::Space;
use crate::term::{Atom, SetTerm};
use crate::universe::{Bijection, Element, Universe};
use crate::Rational;

/// Which atoms a sampler may produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleMode {
    /// Atoms of the term's own universe, no residue blocks.
    Native,
    /// Native atoms plus residue-class blocks on `N`.
    Residues,
    /// Atoms of the other universe pulled back along one bijection.
    Pulled(Bijection),
}

#[derive(Debug, Clone)]
pub struct TermSampler {
    rng: ChaCha8Rng,
    max_constant: u64,
    depth: u32,
    mode: SampleMode,
}

impl TermSampler {
    pub fn new(seed: u64) -> TermSampler {
        TermSampler { rng: ChaCha8Rng::seed_from_u64(seed), max_constant: 6, depth: 3, mode: SampleMode::Native }
    }

    pub fn with_max_constant(mut self, k: u64) -> TermSampler {
        self.max_constant = k.max(1);
        self
    }

    pub fn with_depth(mut self, depth: u32) -> TermSampler {
        self.depth = depth;
        self
    }

    pub fn with_mode(mut self, mode: SampleMode) -> TermSampler {
        self.mode = mode;
        self
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn constant(&mut self) -> u64 {
        self.rng.random_range(1..=self.max_constant)
    }

    fn native_atom(&mut self, u: Universe, residues: bool) -> Atom {
        match u {
            Universe::Nat => match self.rng.random_range(0..if residues { 6 } else { 5 }) {
                0 => Atom::Empty(u),
                1 => Atom::Full(u),
                2 | 3 => Atom::Tail(self.constant()),
                4 => {
                    let k = self.rng.random_range(1..=3);
                    let mut ns: Vec<Element> = (0..k).map(|_| Element::Nat(self.constant())).collect();
                    ns.sort();
                    ns.dedup();
                    Atom::Finite(u, ns)
                }
                _ => {
                    let m = self.rng.random_range(2..=4);
                    Atom::Block(Partition::Residues(m), self.rng.random_range(1..=m))
                }
            },
            Universe::NatPair => match self.rng.random_range(0..9) {
                0 => Atom::Empty(u),
                1 => Atom::Full(u),
                2 => Atom::UpperQuad(self.constant()),
                3 => Atom::Row(self.constant()),
                4 => Atom::Col(self.constant()),
                5 => Atom::Block(Partition::Columns, self.constant()),
                6 | 7 => Atom::Block(Partition::Gamma, self.constant()),
                _ => {
                    let k = self.rng.random_range(1..=3);
                    let mut ps: Vec<Element> =
                        (0..k).map(|_| Element::Pair(self.constant(), self.constant())).collect();
                    ps.sort();
                    ps.dedup();
                    Atom::Finite(u, ps)
                }
            },
        }
    }

    fn leaf(&mut self, u: Universe) -> SetTerm {
        let atom = match self.mode {
            SampleMode::Native => self.native_atom(u, false),
            SampleMode::Residues => self.native_atom(u, u == Universe::Nat),
            SampleMode::Pulled(b) => {
                let inner = self.native_atom(u.other(), false);
                return SetTerm::pulled(b, inner).unwrap_or_else(|_| SetTerm::empty(u));
            }
        };
        SetTerm::atom(atom).unwrap_or_else(|_| SetTerm::empty(u))
    }

    fn grow(&mut self, u: Universe, depth: u32) -> SetTerm {
        if depth == 0 || self.rng.random_bool(0.3) {
            return self.leaf(u);
        }
        let a = self.grow(u, depth - 1);
        if self.rng.random_bool(0.2) {
            return a.complement();
        }
        let b = self.grow(u, depth - 1);
        let combined = match self.rng.random_range(0..3) {
            0 => a.union(&b),
            1 => a.intersect(&b),
            _ => a.minus(&b),
        };
        combined.expect("operands share a universe")
    }

    pub fn term(&mut self, u: Universe) -> SetTerm {
        self.grow(u, self.depth)
    }

    /// An element with every coordinate at most `bound`.
    pub fn element(&mut self, u: Universe, bound: u64) -> Element {
        let bound = bound.max(1);
        match u {
            Universe::Nat => Element::Nat(self.rng.random_range(1..=bound)),
            Universe::NatPair => Element::Pair(self.rng.random_range(1..=bound), self.rng.random_range(1..=bound)),
        }
    }

    /// A member of the partition ideal of `p`: a few of the first blocks and
    /// a finite set, cut down by a random term.
    pub fn partition_member(&mut self, p: &Partition) -> Result<SetTerm> {
        let u = p.universe();
        let mut acc = SetTerm::empty(u);
        for _ in 0..self.rng.random_range(0..=3) {
            acc = acc.union(&SetTerm::block(p, self.constant())?)?;
        }
        if self.rng.random_bool(0.5) {
            let e = self.element(u, self.max_constant);
            acc = acc.union(&SetTerm::finite(u, [e])?)?;
        }
        if self.rng.random_bool(0.5) {
            let cut = self.term(u);
            acc = acc.intersect(&cut)?;
        }
        Ok(acc)
    }

    fn value(&mut self, codomain: &Space) -> Rational {
        match codomain.points() {
            Some(ps) => ps[self.rng.random_range(0..ps.len())],
            None => Rational::from_integer(self.rng.random_range(-2..=2)),
        }
    }

    /// Up to three disjoint pieces covering the universe; on the line a
    /// piece sometimes tails to its value.
    pub fn piecewise_fn(&mut self, u: Universe, codomain: &Space) -> Result<PiecewiseFn> {
        let mut covered = SetTerm::empty(u);
        let mut pieces = Vec::new();
        for _ in 0..self.rng.random_range(1..=2) {
            let set = self.term(u).minus(&covered)?;
            covered = covered.union(&set)?;
            let v = self.value(codomain);
            let tails = !codomain.is_finite() && self.rng.random_bool(0.25);
            pieces.push(Piece::new(set, if tails { ValueSpec::TailsTo(v) } else { ValueSpec::Const(v) }));
        }
        let v = self.value(codomain);
        pieces.push(Piece::constant(covered.complement(), v));
        PiecewiseFn::new(u, codomain.clone(), pieces, None, None)
    }
}

/// A named `(f, I, J, x)` instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergenceFixture {
    pub name: String,
    pub f: PiecewiseFn,
    pub i: Ideal,
    pub j: Ideal,
    pub x: Rational,
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n)
}

fn fixture(name: &str, f: PiecewiseFn, i: Ideal, j: Ideal, x: Rational) -> ConvergenceFixture {
    ConvergenceFixture { name: String::from(name), f, i, j, x }
}

fn pair_ideals() -> Result<Vec<(&'static str, Ideal)>> {
    Ok(vec![
        ("fin", Ideal::fin(Universe::NatPair)),
        ("uni", Ideal::partition(Partition::Columns)?),
        ("prg", Ideal::pringsheim()),
        ("gamma", Ideal::partition(Partition::Gamma)?),
        ("improper", Ideal::improper(Universe::NatPair)),
        ("principal-row", Ideal::principal(SetTerm::row(1))),
        ("pushed-fin", Ideal::pushforward(Ideal::fin(Universe::Nat), Bijection::Cantor)),
    ])
}

fn nat_ideals() -> Vec<(&'static str, Ideal)> {
    vec![
        ("fin", Ideal::fin(Universe::Nat)),
        ("improper", Ideal::improper(Universe::Nat)),
        ("principal-evens", Ideal::principal(SetTerm::block(&Partition::Residues(2), 2).expect("valid block"))),
        ("principal-initial", Ideal::principal(SetTerm::nat_set([1, 2, 3]))),
    ]
}

/// Hand-built fixtures followed by seeded random ones; always the same list.
pub fn fixture_corpus() -> Result<Vec<ConvergenceFixture>> {
    let line = Space::metric_line();
    let fin2 = Ideal::fin(Universe::NatPair);
    let cols = Ideal::partition(Partition::Columns)?;
    let mut out = Vec::new();

    let diag_cols = build_diagonal_function(&Partition::Columns, q(0))?;
    out.push(fixture("diagonal-columns-vs-fin", diag_cols.clone(), cols.clone(), fin2.clone(), q(0)));
    out.push(fixture("diagonal-columns-vs-self", diag_cols.clone(), cols.clone(), cols.clone(), q(0)));
    out.push(fixture("diagonal-columns-off-target", diag_cols, cols.clone(), fin2.clone(), q(1)));
    let diag_gamma = build_diagonal_function(&Partition::Gamma, q(0))?;
    out.push(fixture("diagonal-gamma-vs-fin", diag_gamma.clone(), Ideal::pringsheim(), fin2.clone(), q(0)));
    out.push(fixture("diagonal-gamma-partition", diag_gamma, Ideal::partition(Partition::Gamma)?, fin2.clone(), q(0)));
    let scaled = PiecewiseFn::new(
        Universe::NatPair,
        line.clone(),
        Vec::new(),
        Some(Diagonal::new(Partition::Columns, q(2), Rational::new(-1, 3))?),
        None,
    )?;
    out.push(fixture("scaled-diagonal", scaled, cols.clone(), fin2.clone(), q(2)));

    out.push(fixture("constant-pair", PiecewiseFn::constant(Universe::NatPair, line.clone(), q(3))?, fin2.clone(), cols.clone(), q(3)));
    out.push(fixture("constant-nat", PiecewiseFn::constant(Universe::Nat, line.clone(), q(0))?, Ideal::fin(Universe::Nat), Ideal::fin(Universe::Nat), q(0)));
    let bump = PiecewiseFn::two_valued(line.clone(), SetTerm::block(&Partition::Columns, 1)?, q(1), q(0))?;
    out.push(fixture("column-bump", bump.clone(), cols.clone(), fin2.clone(), q(0)));
    out.push(fixture("column-bump-fin", bump, fin2.clone(), cols.clone(), q(0)));
    let lower = PiecewiseFn::two_valued(line.clone(), SetTerm::upper_quad(4).complement(), q(5), q(0))?;
    out.push(fixture("outside-quadrant", lower.clone(), Ideal::pringsheim(), fin2.clone(), q(0)));
    out.push(fixture("outside-quadrant-uni", lower, cols.clone(), fin2.clone(), q(0)));
    let tails = PiecewiseFn::new(
        Universe::Nat,
        line.clone(),
        vec![Piece::new(SetTerm::full(Universe::Nat), ValueSpec::TailsTo(q(1)))],
        None,
        None,
    )?;
    out.push(fixture("harmonic", tails, Ideal::fin(Universe::Nat), Ideal::fin(Universe::Nat), q(1)));
    let sierp = Space::finite_top(vec![q(0), q(1)], [0, 0b01, 0b11])?;
    let two = PiecewiseFn::two_valued(sierp.clone(), SetTerm::tail(4), q(0), q(1))?;
    out.push(fixture("two-point-tail", two.clone(), Ideal::fin(Universe::Nat), Ideal::improper(Universe::Nat), q(0)));
    out.push(fixture("two-point-closed", two, Ideal::fin(Universe::Nat), Ideal::fin(Universe::Nat), q(1)));

    let mut sampler = TermSampler::new(0x5eed_c0de).with_depth(2).with_max_constant(4);
    let spaces = [line.clone(), sierp, Space::discrete(vec![q(0), q(1), q(2)])?];
    let pair = pair_ideals()?;
    let nat = nat_ideals();
    let mut k = 0;
    while k < 48 {
        let (u, pool) = if k % 3 == 2 { (Universe::Nat, &nat) } else { (Universe::NatPair, &pair) };
        let sp = &spaces[k % spaces.len()];
        let f = sampler.piecewise_fn(u, sp)?;
        let (ni, i) = &pool[sampler.rng().random_range(0..pool.len())];
        let (nj, j) = &pool[sampler.rng().random_range(0..pool.len())];
        let values: Vec<Rational> = f.pieces().iter().map(|p| p.value.target()).collect();
        let x = values[sampler.rng().random_range(0..values.len())];
        // Keep only inputs the engine accepts.
        if i_converges(&f, i, x).is_err() || ihj_decide(&f, i, j, x).is_err() {
            continue;
        }
        out.push(fixture(&format!("random-{k:02}-{ni}-{nj}"), f, i.clone(), j.clone(), x));
        k += 1;
    }
    Ok(out)
}
