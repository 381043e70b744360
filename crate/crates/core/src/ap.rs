//! The additive property `AP(I, J)`: every countable family from `I` has a
//! single member of `I` containing each of them modulo `J`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::classify::{classify, transport};
use crate::error::{Error, Result};
use crate::finite::{enumerate_ideals, FiniteIdeal};
use crate::ideal::{Ideal, IdealKind};
use crate::partition::Partition;
use crate::term::SetTerm;

/// Refuted sequence `A_n = D_n` with the argument that no single member of
/// the partition ideal can almost contain every block.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ApFailureWitness {
    pub partition: Partition,
    pub argument: &'static str,
}

impl ApFailureWitness {
    /// Points of block `n` that must survive removal of a member `A` of the
    /// ideal, given that `A` meets the block in `overlap` points:
    /// all truncated points of the block except those.
    pub fn expected_growth(&self, n: u64, bound: u64, overlap: u64) -> u64 {
        self.partition.truncated_block_len(n, bound).saturating_sub(overlap)
    }

    pub fn describe(&self) -> String {
        format!("A_n = block n of {}; {}", self.partition, self.argument)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ApVerdict {
    Holds { rule: &'static str },
    Fails { witness: ApFailureWitness },
    Unknown,
}

impl ApVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            ApVerdict::Holds { .. } => "holds",
            ApVerdict::Fails { .. } => "fails",
            ApVerdict::Unknown => "unknown",
        }
    }
}

impl fmt::Display for ApVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ApVerdict::Holds { rule } => write!(f, "holds ({rule})"),
            ApVerdict::Fails { witness } => write!(f, "fails ({})", witness.describe()),
            ApVerdict::Unknown => f.write_str("unknown"),
        }
    }
}

fn partition_of(i: &Ideal) -> Option<Partition> {
    match i.kind() {
        IdealKind::Partition(p) => Some(p.clone()),
        IdealKind::Pringsheim => Some(Partition::Gamma),
        _ => None,
    }
}

fn below_fin(j: &Ideal) -> bool {
    matches!(j.kind(), IdealKind::Fin(_)) || j.known_inclusion(&Ideal::fin(j.universe()))
}

pub fn ap_verdict(i: &Ideal, j: &Ideal) -> Result<ApVerdict> {
    if i.universe() != j.universe() {
        return Err(Error::UniverseMismatch { expected: i.universe(), found: j.universe() });
    }
    if i.known_inclusion(j) {
        return Ok(ApVerdict::Holds { rule: "subset-rule" });
    }
    if i.has_maximum()? {
        return Ok(ApVerdict::Holds { rule: "maximum-rule" });
    }
    if let Some(p) = partition_of(i) {
        if below_fin(j) {
            return Ok(ApVerdict::Fails { witness: refute_partition_fin(&p)? });
        }
    }
    Ok(ApVerdict::Unknown)
}

pub fn refute_partition_fin(p: &Partition) -> Result<ApFailureWitness> {
    if !p.has_infinitely_many_blocks() {
        return Err(Error::FinitePartition(p.name()));
    }
    Ok(ApFailureWitness {
        partition: p.clone(),
        argument: "partition-vs-fin: a member of the ideal meets finitely many blocks, \
                   so some block lies outside it and is infinite",
    })
}

/// A sequence of sets, given explicitly or as the blocks of a partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    Explicit(Vec<SetTerm>),
    Blocks(Partition),
}

/// Sets to try as the common bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Candidates {
    Explicit(Vec<SetTerm>),
    /// Unions of the first `k` blocks for `k = 0..=max_blocks`. Any finite
    /// union of blocks among the first `max_blocks` is dominated by one of
    /// these, and domination only helps.
    BlockPrefixes { partition: Partition, max_blocks: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pi1Outcome {
    Found(SetTerm),
    /// No candidate worked. Not a proof that none exists.
    NotFoundInSpace,
}

const GENERATOR_MEMBER_CHECKS: u64 = 8;

/// Searches the candidates for `A ∈ I` with `A_n ∖ A ∈ J` for every `n`.
pub fn pi1_search(i: &Ideal, j: &Ideal, family: &Family, candidates: &Candidates) -> Result<Pi1Outcome> {
    match family {
        Family::Explicit(ts) => {
            for (k, t) in ts.iter().enumerate() {
                if !i.contains(t)? {
                    return Err(Error::FamilyNotInIdeal(k));
                }
            }
        }
        Family::Blocks(p) => {
            for k in 1..=GENERATOR_MEMBER_CHECKS {
                if !i.contains(&SetTerm::block(p, k)?)? {
                    return Err(Error::FamilyNotInIdeal(k as usize - 1));
                }
            }
        }
    }
    let cands: Vec<SetTerm> = match candidates {
        Candidates::Explicit(cs) => cs.clone(),
        Candidates::BlockPrefixes { partition, max_blocks } => {
            let mut out = Vec::new();
            let mut acc = SetTerm::empty(partition.universe());
            out.push(acc.clone());
            for k in 1..=*max_blocks {
                acc = acc.union(&SetTerm::block(partition, k)?)?;
                out.push(acc.clone());
            }
            out
        }
    };
    for a in cands {
        if !i.contains(&a)? {
            continue;
        }
        let bounds_all = match family {
            Family::Explicit(ts) => {
                let mut ok = true;
                for t in ts {
                    if !j.subseteq_mod(t, &a)? {
                        ok = false;
                        break;
                    }
                }
                ok
            }
            Family::Blocks(p) => blocks_almost_inside(j, p, &a)?,
        };
        if bounds_all {
            return Ok(Pi1Outcome::Found(a));
        }
    }
    Ok(Pi1Outcome::NotFoundInSpace)
}

/// `D_n ∖ a ∈ J` for every block `D_n` of `p`.
fn blocks_almost_inside(j: &Ideal, p: &Partition, a: &SetTerm) -> Result<bool> {
    if matches!(j.kind(), IdealKind::Improper(_)) {
        return Ok(true);
    }
    if !matches!(j.kind(), IdealKind::Fin(_)) {
        return Err(Error::UnsupportedCombination(format!(
            "block families are only decided modulo fin, not {j}"
        )));
    }
    if let Some(m) = p.block_count() {
        for n in 1..=m {
            if !classify(&SetTerm::block(p, n)?.minus(a)?)?.is_finite() {
                return Ok(false);
            }
        }
        return Ok(true);
    }
    let (p, a) = match p {
        Partition::Pulled(b, base) => ((**base).clone(), transport(a, *b)?),
        _ => (p.clone(), a.clone()),
    };
    if matches!(p, Partition::Pulled(..)) {
        return Err(Error::UnsupportedCombination(format!("nested pulled partition {p}")));
    }
    // Beyond every constant of `a`, all blocks of the catalog partitions sit
    // in the same cells of `a`, so block `K + 1` stands for the rest.
    let k = a.max_constant() + 1;
    for n in 1..=k {
        if !classify(&SetTerm::block(&p, n)?.minus(&a)?)?.is_finite() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One certified sample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifiedSample {
    pub sample: usize,
    /// Block outside the sample (up to finitely many points).
    pub block: u64,
    pub count: u64,
    pub expected: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificationReport {
    pub bound: u64,
    pub entries: Vec<CertifiedSample>,
    /// Indices of samples whose truncation did not show the growth.
    pub failures: Vec<usize>,
}

impl CertificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For every sample `A` of the partition ideal, finds a block `D_n` meeting
/// `A` in finitely many points and checks that the truncation of `D_n ∖ A`
/// keeps the whole truncated block apart from those points.
pub fn certify_failure_on_truncation(
    w: &ApFailureWitness,
    samples: &[SetTerm],
    bound: u64,
) -> Result<CertificationReport> {
    let ideal = Ideal::partition(w.partition.clone())?;
    let mut report = CertificationReport { bound, entries: Vec::new(), failures: Vec::new() };
    for (k, a) in samples.iter().enumerate() {
        if !ideal.contains(a)? {
            return Err(Error::SampleNotInIdeal(k));
        }
        let mut n = 1;
        let overlap = loop {
            let block = SetTerm::block(&w.partition, n)?;
            if let Some(c) = classify(&block.intersect(a)?)?.cardinality() {
                break c;
            }
            n += 1;
        };
        let count = SetTerm::block(&w.partition, n)?.minus(a)?.truncate(bound).len() as u64;
        let expected = w.expected_growth(n, bound, overlap);
        if count < expected || expected == 0 {
            report.failures.push(k);
        }
        report.entries.push(CertifiedSample { sample: k, block: n, count, expected });
    }
    Ok(report)
}

/// Outcome of checking the equivalent forms of the additive property on
/// every pair of ideals on an `n`-element set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiReport {
    pub n: usize,
    pub pairs: usize,
    /// Families examined across all pairs and conditions.
    pub families: u64,
    /// Pairs whose four conditions all hold.
    pub all_true: usize,
    /// `(index of I, index of J, [pi1, pi3, pi4, pi6])` for pairs that disagree.
    pub disagreements: Vec<(usize, usize, [bool; 4])>,
}

impl PiReport {
    pub fn agrees(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// Families up to this many members are enumerated exhaustively; larger
/// ideals are checked on their full family, which suffices because each
/// condition only gets harder as the family grows.
const EXHAUSTIVE_MEMBERS: usize = 16;

pub fn pi_condition_crosscheck(n: usize) -> Result<PiReport> {
    if !(2..=5).contains(&n) {
        return Err(Error::SizeTooLarge { size: n, min: 2, max: 5 });
    }
    let ideals = enumerate_ideals(n)?;
    let mut report = PiReport { n, pairs: 0, families: 0, all_true: 0, disagreements: Vec::new() };
    for (ii, i) in ideals.iter().enumerate() {
        let members = i.members();
        let chains = chain_families(&members);
        let disjoint = disjoint_families(&members);
        for (jj, j) in ideals.iter().enumerate() {
            report.pairs += 1;
            let table = PiTable::new(i, j, &members);
            let all: Vec<u64> = if members.len() <= EXHAUSTIVE_MEMBERS {
                (0..1u64 << members.len()).collect()
            } else {
                alloc::vec![full_family(members.len())]
            };
            report.families += (2 * all.len() + chains.len() + disjoint.len()) as u64;
            let verdicts = [
                all.iter().all(|&fam| table.pi1(fam)),
                all.iter().all(|&fam| table.pi3(fam)),
                disjoint.iter().all(|&fam| table.pi3(fam)),
                chains.iter().all(|&fam| table.pi3(fam)),
            ];
            if verdicts.iter().all(|&v| v) {
                report.all_true += 1;
            }
            if verdicts.iter().any(|&v| v != verdicts[0]) {
                report.disagreements.push((ii, jj, verdicts));
            }
        }
    }
    Ok(report)
}

fn full_family(len: usize) -> u64 {
    if len == 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

/// Precomputed per-pair masks over the members of `I` (bit `k` stands for
/// `members[k]`).
struct PiTable {
    /// `good[a]`: members `B` with `B ∖ members[a] ∈ J`.
    good: Vec<u64>,
    /// `cover[u]`: members `A` with some `B ∈ I`, `B ⊆ members[u]`, `A △ B ∈ J`.
    cover: Vec<u64>,
}

impl PiTable {
    fn new(i: &FiniteIdeal, j: &FiniteIdeal, members: &[u32]) -> PiTable {
        let mask_of = |pred: &dyn Fn(u32) -> bool| {
            members.iter().enumerate().filter(|(_, &m)| pred(m)).fold(0u64, |acc, (k, _)| acc | 1 << k)
        };
        let good = members.iter().map(|&a| mask_of(&|b| j.contains(b & !a))).collect();
        let cover = members
            .iter()
            .map(|&u| {
                mask_of(&|a| members.iter().any(|&b| b & !u == 0 && i.contains(b) && j.contains(a ^ b)))
            })
            .collect();
        PiTable { good, cover }
    }

    /// Some member almost contains every member of the family.
    fn pi1(&self, fam: u64) -> bool {
        self.good.iter().any(|&g| fam & !g == 0)
    }

    /// Every member of the family has a `J`-equivalent member of `I`, all
    /// inside one member of `I`.
    fn pi3(&self, fam: u64) -> bool {
        self.cover.iter().any(|&c| fam & !c == 0)
    }
}

/// Families (as member masks) forming chains under inclusion.
fn chain_families(members: &[u32]) -> Vec<u64> {
    let mut out = Vec::new();
    fn extend(members: &[u32], start: usize, top: Option<u32>, fam: u64, out: &mut Vec<u64>) {
        out.push(fam);
        for k in start..members.len() {
            let m = members[k];
            if top.is_none_or(|t| t & !m == 0) {
                extend(members, k + 1, Some(m), fam | 1 << k, out);
            }
        }
    }
    // Members are sorted by popcount, so a chain is built bottom-up.
    let mut order: Vec<usize> = (0..members.len()).collect();
    order.sort_by_key(|&k| (members[k].count_ones(), members[k]));
    let sorted: Vec<u32> = order.iter().map(|&k| members[k]).collect();
    let mut raw = Vec::new();
    extend(&sorted, 0, None, 0, &mut raw);
    for fam in raw {
        let mut real = 0u64;
        for (pos, &k) in order.iter().enumerate() {
            if fam >> pos & 1 == 1 {
                real |= 1 << k;
            }
        }
        out.push(real);
    }
    out
}

/// Families of pairwise disjoint members.
fn disjoint_families(members: &[u32]) -> Vec<u64> {
    let mut out = Vec::new();
    fn extend(members: &[u32], start: usize, used: u32, fam: u64, out: &mut Vec<u64>) {
        out.push(fam);
        for k in start..members.len() {
            if members[k] & used == 0 {
                extend(members, k + 1, used | members[k], fam | 1 << k, out);
            }
        }
    }
    extend(members, 0, 0, 0, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::universe::Universe;

    fn cols() -> Ideal {
        Ideal::partition(Partition::Columns).unwrap()
    }

    #[test]
    fn verdict_ladder() {
        let fin = Ideal::fin(Universe::Nat);
        assert_eq!(ap_verdict(&fin, &fin).unwrap(), ApVerdict::Holds { rule: "subset-rule" });
        let p = Ideal::principal(SetTerm::tail(5));
        assert_eq!(ap_verdict(&p, &fin).unwrap(), ApVerdict::Holds { rule: "maximum-rule" });
        let fin2 = Ideal::fin(Universe::NatPair);
        assert!(matches!(ap_verdict(&cols(), &fin2).unwrap(), ApVerdict::Fails { .. }));
        assert!(matches!(ap_verdict(&Ideal::pringsheim(), &fin2).unwrap(), ApVerdict::Fails { .. }));
        assert_eq!(ap_verdict(&Ideal::pringsheim(), &cols()).unwrap(), ApVerdict::Unknown);
    }

    #[test]
    fn refutation_needs_infinitely_many_blocks() {
        assert!(refute_partition_fin(&Partition::Gamma).is_ok());
        assert!(matches!(refute_partition_fin(&Partition::Residues(3)), Err(Error::FinitePartition(_))));
    }

    #[test]
    fn pi1_examples() {
        let fin = Ideal::fin(Universe::Nat);
        let fam = Family::Explicit(vec![SetTerm::nat_set([1]), SetTerm::nat_set([2])]);
        let cands = Candidates::Explicit(vec![SetTerm::empty(Universe::Nat)]);
        assert_eq!(pi1_search(&fin, &fin, &fam, &cands).unwrap(), Pi1Outcome::Found(SetTerm::empty(Universe::Nat)));

        let fin2 = Ideal::fin(Universe::NatPair);
        let b = |i| SetTerm::block(&Partition::Columns, i).unwrap();
        let fam = Family::Explicit(vec![b(1), b(2)]);
        let target = b(1).union(&b(2)).unwrap();
        let cands = Candidates::Explicit(vec![SetTerm::empty(Universe::NatPair), target.clone()]);
        assert_eq!(pi1_search(&cols(), &fin2, &fam, &cands).unwrap(), Pi1Outcome::Found(target));

        let gen = Family::Blocks(Partition::Columns);
        let prefixes = Candidates::BlockPrefixes { partition: Partition::Columns, max_blocks: 12 };
        assert_eq!(pi1_search(&cols(), &fin2, &gen, &prefixes).unwrap(), Pi1Outcome::NotFoundInSpace);

        let bad = Family::Explicit(vec![SetTerm::nat_set([1]), SetTerm::tail(3)]);
        assert_eq!(pi1_search(&fin, &fin, &bad, &cands_nat()), Err(Error::FamilyNotInIdeal(1)));
    }

    fn cands_nat() -> Candidates {
        Candidates::Explicit(vec![SetTerm::empty(Universe::Nat)])
    }

    #[test]
    fn certification_examples() {
        let w = refute_partition_fin(&Partition::Columns).unwrap();
        let b = |i| SetTerm::block(&Partition::Columns, i).unwrap();
        let a = b(1).union(&b(2)).unwrap();
        let r = certify_failure_on_truncation(&w, &[a], 20).unwrap();
        assert_eq!(r.entries[0].block, 3);
        assert_eq!(r.entries[0].count, 20);
        let fin = SetTerm::pair_set([(1, 1), (1, 5), (4, 4)]);
        let r = certify_failure_on_truncation(&w, &[fin], 20).unwrap();
        assert!(r.passed());
        assert_eq!(r.entries[0].block, 1);
        assert!(r.entries[0].count >= 20 - 3);
        let outside = SetTerm::row(1);
        assert_eq!(certify_failure_on_truncation(&w, &[outside], 20), Err(Error::SampleNotInIdeal(0)));
    }

    #[test]
    fn pi_conditions_agree_on_small_sets() {
        for n in [2, 3] {
            let r = pi_condition_crosscheck(n).unwrap();
            assert!(r.agrees());
            assert_eq!(r.all_true, r.pairs);
            assert_eq!(r.pairs, 1 << (2 * n));
        }
    }

    #[test]
    fn chain_and_disjoint_enumeration() {
        // members of P({0,1}): {}, {0}, {1}, {0,1}
        let members = [0b00, 0b01, 0b10, 0b11];
        let chains = chain_families(&members);
        // the empty family, 4 singletons, 5 comparable pairs, 2 chains of three
        assert_eq!(chains.len(), 1 + 4 + 5 + 2);
        let disjoint = disjoint_families(&members);
        // subsets of {∅, {0}, {1}, {0,1}} with pairwise disjoint members
        assert_eq!(disjoint.len(), 10);
    }
}
