use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use core::fmt;

use crate::universe::{Bijection, Element, Universe};

/// Catalog partitions of a universe into blocks indexed from 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Partition {
    /// `D_i = {i} x N` on `N x N`.
    Columns,
    /// `D_i = {(n,i) : n >= i} ∪ {(i,k) : k >= i}` on `N x N`, i.e. the pairs
    /// whose smaller coordinate is `i`.
    Gamma,
    /// Residue classes modulo `m` on `N`; block `i` (for `1 <= i <= m`) holds
    /// the `n` with `n ≡ i (mod m)`. Only finitely many blocks.
    Residues(u64),
    /// Blocks of the inner partition pulled back along a bijection onto the
    /// other universe.
    Pulled(Bijection, Box<Partition>),
}

impl Partition {
    pub fn pulled(bijection: Bijection, base: Partition) -> Partition {
        Partition::Pulled(bijection, Box::new(base))
    }

    pub fn universe(&self) -> Universe {
        match self {
            Partition::Columns | Partition::Gamma => Universe::NatPair,
            Partition::Residues(_) => Universe::Nat,
            Partition::Pulled(_, base) => base.universe().other(),
        }
    }

    /// Number of blocks, `None` when there are infinitely many.
    pub fn block_count(&self) -> Option<u64> {
        match self {
            Partition::Columns | Partition::Gamma => None,
            Partition::Residues(m) => Some(*m),
            Partition::Pulled(_, base) => base.block_count(),
        }
    }

    pub fn has_infinitely_many_blocks(&self) -> bool {
        self.block_count().is_none()
    }

    pub fn is_valid_index(&self, i: u64) -> bool {
        i >= 1 && self.block_count().is_none_or(|m| i <= m)
    }

    /// Index of the block containing `e`. `e` must belong to the partition's
    /// universe.
    pub fn block_of(&self, e: Element) -> u64 {
        match (self, e) {
            (Partition::Columns, Element::Pair(a, _)) => a,
            (Partition::Gamma, Element::Pair(a, b)) => a.min(b),
            (Partition::Residues(m), Element::Nat(n)) => (n - 1) % m + 1,
            (Partition::Pulled(b, base), e) => base.block_of(b.apply(e)),
            _ => panic!("element {e} outside the universe of partition {self}"),
        }
    }

    /// Number of members of block `i` whose coordinates are all `<= bound`.
    pub fn truncated_block_len(&self, i: u64, bound: u64) -> u64 {
        match self {
            Partition::Columns => {
                if i <= bound {
                    bound
                } else {
                    0
                }
            }
            Partition::Gamma => {
                if i <= bound {
                    2 * (bound - i) + 1
                } else {
                    0
                }
            }
            Partition::Residues(m) => {
                if i > bound {
                    0
                } else {
                    (bound - i) / m + 1
                }
            }
            Partition::Pulled(..) => match self.universe() {
                Universe::Nat => (1..=bound)
                    .filter(|&n| self.block_of(Element::Nat(n)) == i)
                    .count() as u64,
                Universe::NatPair => (1..=bound)
                    .flat_map(|a| (1..=bound).map(move |b| Element::Pair(a, b)))
                    .filter(|&e| self.block_of(e) == i)
                    .count() as u64,
            },
        }
    }

    pub fn name(&self) -> String {
        match self {
            Partition::Columns => String::from("columns"),
            Partition::Gamma => String::from("gamma"),
            Partition::Residues(m) => format!("residues({m})"),
            Partition::Pulled(b, base) => format!("pulled({b},{})", base.name()),
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}
