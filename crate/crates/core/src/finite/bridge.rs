//! Encodes finite models as symbolic ones and compares the two layers.
//!
//! The ground set `{0, .., n-1}` becomes `{1, .., n}` inside `N`. Everything
//! above `n` is made negligible: encoded ideals contain the tail from `n+1`,
//! and encoded functions send that tail to the first point.

use alloc::format;
use alloc::vec::Vec;

use super::report::{ClaimReport, SuiteReport};
use super::{
    brute_ap, brute_converges, brute_ihj, enumerate_functions, enumerate_ideals, enumerate_topologies,
    FiniteFn, FiniteIdeal, FiniteSpace, MAX_GROUND, MAX_POINTS,
};
use crate::ap::{ap_verdict, ApVerdict};
use crate::engine::{i_converges, ihj_decide, IhjVerdict, Verdict};
use crate::error::{Error, Result};
use crate::function::{Piece, PiecewiseFn};
use crate::ideal::Ideal;
use crate::space::Space;
use crate::term::SetTerm;
use crate::universe::Element;
use crate::Rational;

fn point(p: usize) -> Rational {
    Rational::from_integer(p as i64)
}

fn mask_term(mask: u32) -> SetTerm {
    SetTerm::nat_set((0..32).filter(|s| mask >> s & 1 == 1).map(|s| s as u64 + 1))
}

/// The principal ideal generated by the maximum plus the tail above `n`.
pub fn encode_ideal(i: &FiniteIdeal) -> Result<Ideal> {
    let top = mask_term(i.maximum()).union(&SetTerm::tail(i.n() as u64 + 1))?;
    Ok(Ideal::principal(top))
}

/// Points become the rationals `0, 1, ..`; open sets keep their masks.
pub fn encode_space(sp: &FiniteSpace) -> Result<Space> {
    Space::finite_top((0..sp.k()).map(point).collect(), sp.open_sets().into_iter().map(u64::from))
}

pub fn encode_function(f: &FiniteFn, sp: &Space) -> Result<PiecewiseFn> {
    let n = f.values.len();
    let mut pieces: Vec<Piece> =
        f.values.iter().enumerate().map(|(s, &v)| Piece::constant(SetTerm::nat_set([s as u64 + 1]), point(v))).collect();
    pieces.push(Piece::constant(SetTerm::tail(n as u64 + 1), point(0)));
    PiecewiseFn::new(crate::universe::Universe::Nat, sp.clone(), pieces, None, None)
}

/// Restricts a symbolic subset of `N` to the encoded ground set.
fn decode_mask(t: &SetTerm, n: usize) -> u32 {
    t.truncate(n as u64)
        .into_iter()
        .filter_map(|e| match e {
            Element::Nat(s) if (1..=n as u64).contains(&s) => Some(1u32 << (s - 1)),
            _ => None,
        })
        .fold(0, |acc, b| acc | b)
}

/// Compares limits, `I^J` verdicts and additive-property verdicts across
/// every model with ground set up to `max_n` and up to `max_k` points.
pub fn oracle_equivalence(max_n: usize, max_k: usize) -> Result<SuiteReport> {
    if max_n == 0 || max_n > MAX_GROUND {
        return Err(Error::SizeTooLarge { size: max_n, min: 1, max: MAX_GROUND });
    }
    if max_k == 0 || max_k > MAX_POINTS {
        return Err(Error::SizeTooLarge { size: max_k, min: 1, max: MAX_POINTS });
    }
    let mut report = SuiteReport::new("oracle-equivalence", max_n);
    let mut limits = ClaimReport::new("i-limits-agree");
    let mut ihj = ClaimReport::new("ihj-agrees");
    let mut witnesses = ClaimReport::new("ihj-witness-valid");
    let mut ap = ClaimReport::new("ap-agrees");

    for n in 1..=max_n {
        let ideals = enumerate_ideals(n)?;
        let symbolic: Vec<Ideal> = ideals.iter().map(encode_ideal).collect::<Result<_>>()?;
        for (a, i) in ideals.iter().enumerate() {
            for (b, j) in ideals.iter().enumerate() {
                let verdict = ap_verdict(&symbolic[a], &symbolic[b])?;
                let expected = brute_ap(i, j);
                ap.check(matches!(verdict, ApVerdict::Holds { .. }) == expected, || {
                    format!("n={n} I={:b} J={:b}: brute {expected}, symbolic {}", i.family(), j.family(), verdict.name())
                });
            }
        }
        for k in 1..=max_k {
            for sp in enumerate_topologies(k)? {
                let space = encode_space(&sp)?;
                for f in enumerate_functions(n, k) {
                    let sf = encode_function(&f, &space)?;
                    for x in 0..k {
                        let describe = |i: &FiniteIdeal| {
                            format!("n={n} opens={:b} f={:?} x={x} I={:b}", sp.opens(), f.values, i.family())
                        };
                        for (a, i) in ideals.iter().enumerate() {
                            let brute = brute_converges(&f, i, &sp, x);
                            let verdict = i_converges(&sf, &symbolic[a], point(x))?;
                            let agrees = verdict == if brute { Verdict::Yes } else { Verdict::No };
                            limits.check(agrees, || format!("{}: brute {brute}, symbolic {}", describe(i), verdict.name()));
                        }
                        for (a, i) in ideals.iter().enumerate() {
                            for (b, j) in ideals.iter().enumerate() {
                                let brute = brute_ihj(&f, i, j, &sp, x);
                                let verdict = ihj_decide(&sf, &symbolic[a], &symbolic[b], point(x))?;
                                let agrees = match &verdict {
                                    IhjVerdict::Converges(_) => brute.is_some(),
                                    IhjVerdict::No(_) => brute.is_none(),
                                    IhjVerdict::Unknown(_) => false,
                                };
                                ihj.check(agrees, || {
                                    format!("{} J={:b}: brute {:?}, symbolic {verdict}", describe(i), j.family(), brute)
                                });
                                if let IhjVerdict::Converges(w) = &verdict {
                                    let m = decode_mask(&w.m, n);
                                    let valid = i.in_filter(m) && brute_converges(&f.modify_on(m, x), j, &sp, x);
                                    witnesses.check(valid, || {
                                        format!("{} J={:b}: witness {:b} ({})", describe(i), j.family(), m, w.rule)
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    report.notes.push(format!("ground sets 1..={max_n}, spaces with 1..={max_k} points"));
    report.claims = alloc::vec![limits, ihj, witnesses, ap];
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encodings_round_trip() {
        let i = FiniteIdeal::principal(3, 0b101).unwrap();
        let si = encode_ideal(&i).unwrap();
        for m in 0..8u32 {
            assert_eq!(si.contains(&mask_term(m)).unwrap(), i.contains(m));
        }
        assert_eq!(decode_mask(&mask_term(0b110), 3), 0b110);
        let sp = FiniteSpace::discrete(2);
        let space = encode_space(&sp).unwrap();
        let f = FiniteFn { values: vec![1, 0, 1] };
        let sf = encode_function(&f, &space).unwrap();
        assert_eq!(sf.eval(Element::Nat(3)).unwrap(), point(1));
        assert_eq!(sf.eval(Element::Nat(9)).unwrap(), point(0));
    }

    #[test]
    fn small_models_agree() {
        let report = oracle_equivalence(2, 2).unwrap();
        for c in &report.claims {
            assert!(c.passed(), "{}: {:?}", c.claim, c.violations);
        }
    }
}
