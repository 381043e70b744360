//! Exhaustive checks of the basic convergence facts on finite models.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::report::{ClaimReport, SuiteReport};
use super::{
    all, brute_converges, brute_i_limits, brute_ihj, enumerate_functions, enumerate_ideals, enumerate_topologies,
    FiniteFn, FiniteIdeal, FiniteSpace,
};
use crate::error::{Error, Result};

/// Largest point set used by the suite.
const SUITE_POINTS: usize = 3;

fn spaces() -> Vec<FiniteSpace> {
    (1..=SUITE_POINTS).flat_map(|k| enumerate_topologies(k).unwrap_or_default()).collect()
}

fn continuous_maps(from: &FiniteSpace, to: &FiniteSpace) -> Vec<FiniteFn> {
    enumerate_functions(from.k(), to.k())
        .into_iter()
        .filter(|g| to.open_sets().into_iter().all(|u| from.is_open(g.preimage(u))))
        .collect()
}

fn compose(g: &FiniteFn, f: &FiniteFn) -> FiniteFn {
    FiniteFn { values: f.values.iter().map(|&v| g.values[v]).collect() }
}

fn image(g: &FiniteFn, points: u32) -> u32 {
    (0..g.values.len()).filter(|&p| points >> p & 1 == 1).fold(0, |acc, p| acc | 1 << g.values[p])
}

fn show(f: &FiniteFn) -> String {
    format!("{:?}", f.values)
}

/// Runs every claim for ground sets of size `n` and spaces of up to three
/// points.
pub fn lemma_suite(n: usize) -> Result<SuiteReport> {
    if !(2..=4).contains(&n) {
        return Err(Error::SizeTooLarge { size: n, min: 2, max: 4 });
    }
    let ideals = enumerate_ideals(n)?;
    let spaces = spaces();
    let full = all(n);
    let mut report = SuiteReport::new("lemma", n);
    report.notes.push(String::from(
        "finite spaces are finitely generated, so the converse of the AP theorem is only exercised symbolically",
    ));

    let mut improper = ClaimReport::new("improper-ideal-all-limits");
    let mut constant = ClaimReport::new("constant-converges");
    let mut monotone = ClaimReport::new("limits-monotone-in-ideal");
    let mut unique = ClaimReport::new("hausdorff-unique-limit");
    let mut compact = ClaimReport::new("maximal-ideal-has-limit");
    for sp in &spaces {
        let every_point = all(sp.k());
        for f in enumerate_functions(n, sp.k()) {
            let limits: Vec<u32> = ideals.iter().map(|i| brute_i_limits(&f, i, sp)).collect();
            for (a, i) in ideals.iter().enumerate() {
                if !i.is_proper() {
                    improper.check(limits[a] == every_point, || format!("f={} limits={:b}", show(&f), limits[a]));
                }
                if sp.is_hausdorff() && i.is_proper() {
                    unique.check(limits[a].count_ones() <= 1, || {
                        format!("f={} I={:b} limits={:b}", show(&f), i.family(), limits[a])
                    });
                }
                if i.is_maximal() {
                    compact.check(limits[a] != 0, || format!("f={} I={:b}", show(&f), i.family()));
                }
                for (b, i2) in ideals.iter().enumerate() {
                    if i.is_subset_of(i2) {
                        monotone.check(limits[a] & !limits[b] == 0, || {
                            format!("f={} I1={:b} I2={:b}", show(&f), i.family(), i2.family())
                        });
                    }
                }
            }
        }
        for x in 0..sp.k() {
            for i in &ideals {
                constant.check(brute_converges(&FiniteFn::constant(n, x), i, sp, x), || {
                    format!("x={x} I={:b} opens={:b}", i.family(), sp.opens())
                });
            }
        }
    }

    let mut continuity = ClaimReport::new("continuous-image-of-limit");
    let small: Vec<FiniteSpace> = spaces.iter().copied().filter(|s| (2..=3).contains(&s.k())).collect();
    for from in &small {
        let fs = enumerate_functions(n, from.k());
        let limits: Vec<Vec<u32>> =
            fs.iter().map(|f| ideals.iter().map(|i| brute_i_limits(f, i, from)).collect()).collect();
        for to in &small {
            for g in continuous_maps(from, to) {
                for (fi, f) in fs.iter().enumerate() {
                    let gf = compose(&g, f);
                    for (a, i) in ideals.iter().enumerate() {
                        let pushed = image(&g, limits[fi][a]);
                        let after = brute_i_limits(&gf, i, to);
                        continuity.check(pushed & !after == 0, || {
                            format!("g={} f={} I={:b}", show(&g), show(f), i.family())
                        });
                    }
                }
            }
        }
    }

    let mut maximal = ClaimReport::new("maximal-ideals-characterized");
    let proper: Vec<&FiniteIdeal> = ideals.iter().filter(|i| i.is_proper()).collect();
    let by_inclusion: Vec<&FiniteIdeal> = proper
        .iter()
        .copied()
        .filter(|i| !proper.iter().any(|o| o.family() != i.family() && i.is_subset_of(o)))
        .collect();
    let mut expected: Vec<FiniteIdeal> =
        (0..n).filter_map(|s| FiniteIdeal::principal(n, full & !(1 << s)).ok()).collect();
    expected.sort();
    let mut found: Vec<FiniteIdeal> = by_inclusion.iter().map(|i| **i).collect();
    found.sort();
    maximal.check(found == expected, || format!("found {} maximal ideals", found.len()));
    for i in &by_inclusion {
        let decides = (0..=full).all(|a| i.contains(a) || i.contains(full & !a));
        maximal.check(decides, || format!("I={:b} leaves a set undecided", i.family()));
    }

    let mut two_limits = ClaimReport::new("non-hausdorff-two-limits");
    for sp in spaces.iter().filter(|s| !s.is_hausdorff()) {
        let exists = proper.iter().any(|i| {
            enumerate_functions(n, sp.k()).iter().any(|f| brute_i_limits(f, i, sp).count_ones() >= 2)
        });
        two_limits.check(exists, || format!("opens={:b}", sp.opens()));
    }

    let mut j_implies = ClaimReport::new("j-convergence-implies-ihj");
    let mut mono_i = ClaimReport::new("ihj-monotone-in-i");
    let mut mono_j = ClaimReport::new("ihj-monotone-in-j");
    let mut forward = ClaimReport::new("implication-one-forward");
    let mut trace = ClaimReport::new("trace-equivalence");
    let m = ideals.len();
    for sp in &spaces {
        let nbhds: Vec<Vec<u32>> =
            (0..sp.k()).map(|x| sp.open_sets().into_iter().filter(|u| u >> x & 1 == 1).collect()).collect();
        for f in enumerate_functions(n, sp.k()) {
            for (x, around) in nbhds.iter().enumerate() {
                let table: Vec<Option<u32>> = (0..m * m)
                    .map(|c| brute_ihj(&f, &ideals[c / m], &ideals[c % m], sp, x))
                    .collect();
                let conv = |a: usize, b: usize| table[a * m + b].is_some();
                for a in 0..m {
                    let i = &ideals[a];
                    let i_conv = brute_converges(&f, i, sp, x);
                    for b in 0..m {
                        let j = &ideals[b];
                        let describe = || format!("f={} x={x} I={:b} J={:b}", show(&f), i.family(), j.family());
                        if brute_converges(&f, j, sp, x) {
                            j_implies.check(conv(a, b), describe);
                        }
                        if j.is_subset_of(i) && conv(a, b) {
                            forward.check(i_conv, describe);
                        }
                        for c in 0..m {
                            if conv(a, b) && ideals[a].is_subset_of(&ideals[c]) {
                                mono_i.check(conv(c, b), describe);
                            }
                            if conv(a, b) && ideals[b].is_subset_of(&ideals[c]) {
                                mono_j.check(conv(a, c), describe);
                            }
                        }
                        let via_trace = (0..=full).filter(|&mm| i.in_filter(mm)).any(|mm| {
                            let traced: Vec<u32> = j.members().into_iter().map(|t| t & mm).collect();
                            around.iter().all(|&u| traced.contains(&(mm & !f.preimage(u))))
                        });
                        trace.check(via_trace == conv(a, b), describe);
                    }
                }
            }
        }
    }

    let mut converse = ClaimReport::new("implication-one-counterexample");
    for i in &ideals {
        for j in &ideals {
            let Some(witness) = j.members().into_iter().find(|&a| !i.contains(a)) else { continue };
            for sp in spaces.iter().filter(|s| !s.is_indiscrete()) {
                for x in 0..sp.k() {
                    for u in sp.open_sets().into_iter().filter(|&u| u >> x & 1 == 1 && u != all(sp.k())) {
                        for y in (0..sp.k()).filter(|&y| u >> y & 1 == 0) {
                            let f = FiniteFn {
                                values: (0..n).map(|t| if witness >> t & 1 == 1 { y } else { x }).collect(),
                            };
                            let ok = brute_ihj(&f, i, j, sp, x).is_some() && !brute_converges(&f, i, sp, x);
                            converse.check(ok, || {
                                format!("I={:b} J={:b} opens={:b} x={x} y={y}", i.family(), j.family(), sp.opens())
                            });
                        }
                    }
                }
            }
        }
    }

    let mut decomposition = ClaimReport::new("decomposition-recombines");
    let line = FiniteSpace::discrete(SUITE_POINTS);
    for f in enumerate_functions(n, SUITE_POINTS) {
        for x in 0..SUITE_POINTS {
            let off_target = f.preimage(all(SUITE_POINTS) & !(1 << x));
            for i in &ideals {
                for j in &ideals {
                    let describe = || format!("f={} x={x} I={:b} J={:b}", show(&f), i.family(), j.family());
                    let split_exists = i.members().into_iter().any(|a| j.contains(off_target & !a));
                    let found = brute_ihj(&f, i, j, &line, x);
                    decomposition.check(split_exists == found.is_some(), describe);
                    if let Some(mm) = found {
                        let g: Vec<i64> = f.modify_on(mm, x).values.iter().map(|&v| v as i64).collect();
                        let h: Vec<i64> = f.values.iter().zip(&g).map(|(&v, &w)| v as i64 - w).collect();
                        let support = h.iter().enumerate().filter(|(_, &v)| v != 0).fold(0u32, |acc, (s, _)| acc | 1 << s);
                        let recombined = g.iter().zip(&h).all(|(a, b)| a + b >= 0)
                            && g.iter().zip(&h).zip(&f.values).all(|((a, b), &v)| a + b == v as i64);
                        let g_off = g.iter().enumerate().filter(|(_, &v)| v != x as i64).fold(0u32, |acc, (s, _)| acc | 1 << s);
                        decomposition.check(recombined && i.contains(support) && j.contains(g_off), describe);
                    }
                }
            }
        }
    }

    report.claims = alloc::vec![
        improper, monotone, unique, continuity, compact, maximal, two_limits, constant, j_implies, mono_i,
        mono_j, forward, converse, trace, decomposition,
    ];
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_at_two_is_clean() {
        let report = lemma_suite(2).unwrap();
        for c in &report.claims {
            assert!(c.passed(), "{}: {:?}", c.claim, c.violations);
            assert!(c.instances > 0, "{} ran no instances", c.claim);
        }
    }

    #[test]
    fn sizes_outside_range_rejected() {
        assert!(lemma_suite(1).is_err());
        assert!(lemma_suite(5).is_err());
    }
}
