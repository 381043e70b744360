//! Brute-force oracle on explicit finite models.
//!
//! Subsets of the ground set `{0, .., n-1}` are bitmasks. An ideal is the set
//! of masks it contains, itself a bitmask over the `2^n` subsets; a topology
//! likewise. Every decision here is made by direct enumeration of the
//! definitions and shares no code with the symbolic layer.

mod bridge;
mod crosscheck;
mod lemmas;
mod report;

pub use bridge::{encode_function, encode_ideal, encode_space, oracle_equivalence};
pub use crosscheck::{crosscheck, Fixture};
pub use lemmas::lemma_suite;
pub use report::{ClaimReport, SuiteReport};

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Largest ground set for ideals.
pub const MAX_GROUND: usize = 5;
/// Largest point set for spaces.
pub const MAX_POINTS: usize = 4;

fn all(n: usize) -> u32 {
    (1u32 << n) - 1
}

/// A nonempty, hereditary, union-closed family of subsets of `{0, .., n-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteIdeal {
    n: usize,
    /// Bit `m` set iff subset `m` belongs to the family.
    family: u32,
}

impl FiniteIdeal {
    /// All subsets of `top`.
    pub fn principal(n: usize, top: u32) -> Result<FiniteIdeal> {
        if n == 0 || n > MAX_GROUND {
            return Err(Error::SizeTooLarge { size: n, min: 1, max: MAX_GROUND });
        }
        let family = (0..=all(n)).filter(|m| m & !top == 0).fold(0u32, |acc, m| acc | 1 << m);
        Ok(FiniteIdeal { n, family })
    }

    /// Checks the axioms on an explicit family.
    pub fn from_family(n: usize, family: u32) -> Option<FiniteIdeal> {
        let fi = FiniteIdeal { n, family };
        fi.satisfies_axioms().then_some(fi)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn family(&self) -> u32 {
        self.family
    }

    pub fn contains(&self, mask: u32) -> bool {
        self.family >> mask & 1 == 1
    }

    /// Members in increasing mask order.
    pub fn members(&self) -> Vec<u32> {
        (0..=all(self.n)).filter(|&m| self.contains(m)).collect()
    }

    fn satisfies_axioms(&self) -> bool {
        let members = self.members();
        self.contains(0)
            && members.iter().all(|&a| {
                (0..=all(self.n)).filter(|&b| b & !a == 0).all(|b| self.contains(b))
                    && members.iter().all(|&b| self.contains(a | b))
            })
    }

    /// Union of all members.
    pub fn maximum(&self) -> u32 {
        self.members().into_iter().fold(0, |acc, m| acc | m)
    }

    pub fn is_proper(&self) -> bool {
        !self.contains(all(self.n))
    }

    pub fn is_admissible(&self) -> bool {
        (0..self.n).all(|i| self.contains(1 << i))
    }

    /// Proper and contains `A` or its complement for every `A`.
    pub fn is_maximal(&self) -> bool {
        self.is_proper() && (0..=all(self.n)).all(|a| self.contains(a) || self.contains(all(self.n) & !a))
    }

    pub fn is_subset_of(&self, other: &FiniteIdeal) -> bool {
        self.n == other.n && self.family & !other.family == 0
    }

    /// Complement of `mask` in the ground set.
    pub fn complement(&self, mask: u32) -> u32 {
        all(self.n) & !mask
    }

    pub fn in_filter(&self, mask: u32) -> bool {
        self.contains(self.complement(mask))
    }
}

/// Every ideal on `{0, .., n-1}`, ordered by family mask.
pub fn enumerate_ideals(n: usize) -> Result<Vec<FiniteIdeal>> {
    if n == 0 || n > MAX_GROUND {
        return Err(Error::SizeTooLarge { size: n, min: 1, max: MAX_GROUND });
    }
    // Down-sets first: a mask may join only if every one-smaller subset
    // already has. Subsets precede their supersets numerically.
    let mut downsets = Vec::new();
    fn grow(n: usize, m: u32, family: u32, out: &mut Vec<u32>) {
        if m > all(n) {
            out.push(family);
            return;
        }
        grow(n, m + 1, family, out);
        let allowed = (0..n).filter(|i| m >> i & 1 == 1).all(|i| family >> (m & !(1 << i)) & 1 == 1);
        if allowed {
            grow(n, m + 1, family | 1 << m, out);
        }
    }
    grow(n, 0, 0, &mut downsets);
    let mut ideals: Vec<FiniteIdeal> = downsets
        .into_iter()
        .filter(|&fam| fam & 1 == 1)
        .map(|family| FiniteIdeal { n, family })
        .filter(|fi| {
            let ms = fi.members();
            ms.iter().all(|&a| ms.iter().all(|&b| fi.contains(a | b)))
        })
        .collect();
    ideals.sort();
    Ok(ideals)
}

/// A topology on the points `{0, .., k-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteSpace {
    k: usize,
    /// Bit `m` set iff subset `m` is open.
    opens: u16,
}

impl FiniteSpace {
    pub fn from_opens(k: usize, opens: u16) -> Option<FiniteSpace> {
        if k == 0 || k > MAX_POINTS {
            return None;
        }
        let sp = FiniteSpace { k, opens };
        let ms = sp.open_sets();
        let ok = sp.is_open(0)
            && sp.is_open(all(k))
            && ms.iter().all(|&a| ms.iter().all(|&b| sp.is_open(a | b) && sp.is_open(a & b)));
        ok.then_some(sp)
    }

    pub fn discrete(k: usize) -> FiniteSpace {
        FiniteSpace { k, opens: if k == 4 { u16::MAX } else { (1u16 << (1 << k)) - 1 } }
    }

    pub fn indiscrete(k: usize) -> FiniteSpace {
        FiniteSpace { k, opens: 1 | 1 << all(k) }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn opens(&self) -> u16 {
        self.opens
    }

    pub fn is_open(&self, mask: u32) -> bool {
        mask <= all(self.k) && self.opens >> mask & 1 == 1
    }

    pub fn open_sets(&self) -> Vec<u32> {
        (0..=all(self.k)).filter(|&m| self.is_open(m)).collect()
    }

    pub fn is_hausdorff(&self) -> bool {
        let os = self.open_sets();
        (0..self.k).all(|a| {
            (0..self.k).filter(|&b| b != a).all(|b| {
                os.iter().any(|&u| u >> a & 1 == 1 && os.iter().any(|&v| v >> b & 1 == 1 && u & v == 0))
            })
        })
    }

    pub fn is_indiscrete(&self) -> bool {
        self.open_sets().len() <= 2
    }
}

/// Every topology on `k` points, ordered by open-set mask.
pub fn enumerate_topologies(k: usize) -> Result<Vec<FiniteSpace>> {
    if k == 0 || k > MAX_POINTS {
        return Err(Error::SizeTooLarge { size: k, min: 1, max: MAX_POINTS });
    }
    let families = 1u32 << (1 << k);
    Ok((0..families).filter_map(|o| FiniteSpace::from_opens(k, o as u16)).collect())
}

/// A total function from `{0, .., n-1}` to `{0, .., k-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteFn {
    pub values: Vec<usize>,
}

impl FiniteFn {
    pub fn constant(n: usize, x: usize) -> FiniteFn {
        FiniteFn { values: alloc::vec![x; n] }
    }

    /// Ground elements mapped into `u`.
    pub fn preimage(&self, u: u32) -> u32 {
        self.values.iter().enumerate().filter(|(_, &v)| u >> v & 1 == 1).fold(0, |acc, (s, _)| acc | 1 << s)
    }

    /// `self` on `m`, `x` elsewhere.
    pub fn modify_on(&self, m: u32, x: usize) -> FiniteFn {
        FiniteFn {
            values: self.values.iter().enumerate().map(|(s, &v)| if m >> s & 1 == 1 { v } else { x }).collect(),
        }
    }
}

/// Every function from `n` elements to `k` points, in lexicographic order.
pub fn enumerate_functions(n: usize, k: usize) -> Vec<FiniteFn> {
    let total = k.pow(n as u32);
    (0..total)
        .map(|mut code| {
            let mut values = alloc::vec![0; n];
            for v in values.iter_mut().rev() {
                *v = code % k;
                code /= k;
            }
            FiniteFn { values }
        })
        .collect()
}

/// `f` converges to `x` along `ideal` when the indices leaving each open
/// neighborhood of `x` form a member of the ideal.
pub fn brute_converges(f: &FiniteFn, ideal: &FiniteIdeal, sp: &FiniteSpace, x: usize) -> bool {
    sp.open_sets()
        .into_iter()
        .filter(|u| u >> x & 1 == 1)
        .all(|u| ideal.contains(ideal.complement(f.preimage(u))))
}

/// The set of limits, as a mask over points.
pub fn brute_i_limits(f: &FiniteFn, ideal: &FiniteIdeal, sp: &FiniteSpace) -> u32 {
    (0..sp.k).filter(|&x| brute_converges(f, ideal, sp, x)).fold(0, |acc, x| acc | 1 << x)
}

/// The first `M` (by mask) in the dual filter of `I` such that `f` set to
/// `x` off `M` converges to `x` along `J`.
pub fn brute_ihj(f: &FiniteFn, i: &FiniteIdeal, j: &FiniteIdeal, sp: &FiniteSpace, x: usize) -> Option<u32> {
    (0..=all(i.n)).find(|&m| i.in_filter(m) && brute_converges(&f.modify_on(m, x), j, sp, x))
}

/// Some member of `I` contains every member of `I` modulo `J`.
pub fn brute_ap(i: &FiniteIdeal, j: &FiniteIdeal) -> bool {
    let ms = i.members();
    ms.iter().any(|&a| ms.iter().all(|&b| j.contains(b & !a)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ideal_counts() {
        assert_eq!(enumerate_ideals(1).unwrap().len(), 2);
        assert_eq!(enumerate_ideals(3).unwrap().len(), 8);
        for n in 1..=5 {
            let ideals = enumerate_ideals(n).unwrap();
            assert_eq!(ideals.len(), 1 << n);
            for i in &ideals {
                assert!(i.contains(i.maximum()));
                assert!(FiniteIdeal::from_family(n, i.family()).is_some());
            }
        }
        assert!(enumerate_ideals(6).is_err());
    }

    #[test]
    fn topology_counts() {
        let counts: Vec<usize> = (1..=4).map(|k| enumerate_topologies(k).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 4, 29, 355]);
    }

    #[test]
    fn limits_of_constants_and_improper() {
        let sp = enumerate_topologies(3).unwrap()[5];
        let full = FiniteIdeal::principal(3, 0b111).unwrap();
        let none = FiniteIdeal::principal(3, 0).unwrap();
        let f = FiniteFn { values: vec![0, 2, 1] };
        assert_eq!(brute_i_limits(&f, &full, &sp), 0b111);
        assert!(brute_i_limits(&FiniteFn::constant(3, 2), &none, &sp) >> 2 & 1 == 1);
    }

    #[test]
    fn maximal_ideals_have_limits() {
        let maximal = FiniteIdeal::principal(3, 0b110).unwrap();
        assert!(maximal.is_maximal());
        for sp in enumerate_topologies(3).unwrap() {
            for f in enumerate_functions(3, 3) {
                assert_ne!(brute_i_limits(&f, &maximal, &sp), 0);
            }
        }
    }

    #[test]
    fn ihj_of_constant() {
        let sp = FiniteSpace::discrete(2);
        let i = FiniteIdeal::principal(3, 0b001).unwrap();
        assert_eq!(brute_ihj(&FiniteFn::constant(3, 1), &i, &i, &sp, 1), Some(0b110));
    }

    #[test]
    fn ap_holds_on_finite_sets() {
        let ideals = enumerate_ideals(3).unwrap();
        for i in &ideals {
            for j in &ideals {
                assert!(brute_ap(i, j));
            }
        }
    }
}
