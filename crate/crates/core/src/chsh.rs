//! Exhaustive CHSH search over observable settings and two-particle states.
//!
//! Correlations are tabulated once per state as integers over a common
//! denominator, so the inner loop is four lookups and an add. The search is
//! split by the first setting; each slice is independent and the slices are
//! merged in order, so the result does not depend on how slices are scheduled.
//!
//! Pruning: flipping the sign of any one observable equals, up to an overall
//! sign, the correlator with the A pair or the B pair swapped. Restricting
//! all four settings to canonically oriented observables therefore keeps the
//! maximum and the set of attained magnitudes; only the multiplicities change.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::Serialize;

use crate::correlation::{correlation, ProductObservable};
use crate::observable::Observable;
use crate::rational::Rational;
use crate::twostate::TwoParticleSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ChshOptions {
    pub include_product: bool,
    pub prune: bool,
}

impl Default for ChshOptions {
    fn default() -> Self {
        ChshOptions {
            include_product: false,
            prune: true,
        }
    }
}

/// Settings are indices into [`ChshSearch::observables`], in the order A1, A2, B1, B2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ChshAchiever {
    pub state: usize,
    pub settings: [usize; 4],
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChshSearch {
    pub q: usize,
    pub options: ChshOptions,
    /// All signed observables; the first half are canonically oriented.
    pub observables: Vec<Observable>,
    pub states: Vec<usize>,
    pub max_abs: Rational,
    /// Every configuration reaching `max_abs`, sorted by state then settings.
    pub achievers: Vec<ChshAchiever>,
    /// Count of configurations per attained |value|, ascending.
    pub histogram: Vec<(Rational, u64)>,
    pub evaluated: u64,
}

/// Scaled correlation tables for the states in scope.
pub struct CorrelationCache {
    observables: Vec<Observable>,
    states: Vec<usize>,
    scale: i64,
    /// `table[k][i * m + j]` is `scale * E(obs_i ⊗ obs_j)` on `states[k]`.
    table: Vec<Vec<i32>>,
}

impl CorrelationCache {
    pub fn new(two: &TwoParticleSystem, include_product: bool) -> Self {
        let observables = two.spin().enumerate_observables();
        let states: Vec<usize> = if include_product {
            (0..two.states().len()).collect()
        } else {
            two.entangled_indices().collect()
        };
        let m = observables.len();
        let exact: Vec<Vec<Rational>> = states
            .iter()
            .map(|&s| {
                let mut row = Vec::with_capacity(m * m);
                for &a in &observables {
                    for &b in &observables {
                        row.push(correlation(
                            two,
                            ProductObservable {
                                first: a,
                                second: b,
                            },
                            s,
                        ));
                    }
                }
                row
            })
            .collect();
        let scale = exact
            .iter()
            .flatten()
            .fold(1i64, |acc, v| acc.lcm(&v.denom()));
        let table = exact
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| (v.numer() * (scale / v.denom())) as i32)
                    .collect()
            })
            .collect();
        CorrelationCache {
            observables,
            states,
            scale,
            table,
        }
    }

    fn first_settings(&self, prune: bool) -> usize {
        if prune {
            self.observables.len() / 2
        } else {
            self.observables.len()
        }
    }
}

/// Result of one slice of the search (fixed A1).
#[derive(Default)]
struct Partial {
    max: i64,
    achievers: Vec<(usize, [usize; 4], i64)>,
    histogram: BTreeMap<i64, u64>,
    evaluated: u64,
}

impl Partial {
    fn merge(mut self, other: Partial) -> Partial {
        use std::cmp::Ordering;
        match other.max.cmp(&self.max) {
            Ordering::Greater => {
                self.max = other.max;
                self.achievers = other.achievers;
            }
            Ordering::Equal => self.achievers.extend(other.achievers),
            Ordering::Less => {}
        }
        for (k, v) in other.histogram {
            *self.histogram.entry(k).or_default() += v;
        }
        self.evaluated += other.evaluated;
        self
    }
}

fn search_slice(cache: &CorrelationCache, prune: bool, a1: usize) -> Partial {
    let n = cache.first_settings(prune);
    let m = cache.observables.len();
    let mut out = Partial {
        max: -1,
        ..Partial::default()
    };
    // histogram by |scaled value|, dense since |value| ≤ 4
    let mut hist = vec![0u64; 4 * cache.scale as usize + 1];
    for (k, row) in cache.table.iter().enumerate() {
        let r1 = &row[a1 * m..a1 * m + m];
        for a2 in 0..n {
            let r2 = &row[a2 * m..a2 * m + m];
            for b1 in 0..n {
                let head = r1[b1] + r2[b1];
                for b2 in 0..n {
                    let v = (head + r1[b2] - r2[b2]) as i64;
                    let abs = v.abs();
                    hist[abs as usize] += 1;
                    if abs > out.max {
                        out.max = abs;
                        out.achievers.clear();
                    }
                    if abs == out.max {
                        out.achievers.push((cache.states[k], [a1, a2, b1, b2], v));
                    }
                }
            }
        }
    }
    out.evaluated = (cache.table.len() * n * n * n) as u64;
    out.histogram = hist
        .into_iter()
        .enumerate()
        .filter(|&(_, c)| c > 0)
        .map(|(v, c)| (v as i64, c))
        .collect();
    out
}

fn finish(
    two: &TwoParticleSystem,
    cache: CorrelationCache,
    options: ChshOptions,
    merged: Partial,
) -> ChshSearch {
    let scale = cache.scale;
    let mut achievers: Vec<ChshAchiever> = merged
        .achievers
        .into_iter()
        .map(|(state, settings, v)| ChshAchiever {
            state,
            settings,
            value: Rational::new(v, scale),
        })
        .collect();
    achievers.sort();
    ChshSearch {
        q: two.q(),
        options,
        observables: cache.observables,
        states: cache.states,
        max_abs: Rational::new(merged.max.max(0), scale),
        achievers,
        histogram: merged
            .histogram
            .into_iter()
            .map(|(k, c)| (Rational::new(k, scale), c))
            .collect(),
        evaluated: merged.evaluated,
    }
}

pub fn chsh_maximize_sequential(two: &TwoParticleSystem, options: ChshOptions) -> ChshSearch {
    let cache = CorrelationCache::new(two, options.include_product);
    let merged = (0..cache.first_settings(options.prune))
        .map(|a1| search_slice(&cache, options.prune, a1))
        .fold(
            Partial {
                max: -1,
                ..Partial::default()
            },
            Partial::merge,
        );
    finish(two, cache, options, merged)
}

/// Slices run on the current rayon pool; the merge is sequential and ordered.
#[cfg(feature = "parallel")]
pub fn chsh_maximize_parallel(two: &TwoParticleSystem, options: ChshOptions) -> ChshSearch {
    use rayon::prelude::*;
    let cache = CorrelationCache::new(two, options.include_product);
    let slices: Vec<Partial> = (0..cache.first_settings(options.prune))
        .into_par_iter()
        .map(|a1| search_slice(&cache, options.prune, a1))
        .collect();
    let merged = slices.into_iter().fold(
        Partial {
            max: -1,
            ..Partial::default()
        },
        Partial::merge,
    );
    finish(two, cache, options, merged)
}

/// Parallel when the `parallel` feature is enabled, sequential otherwise.
pub fn chsh_maximize(two: &TwoParticleSystem, options: ChshOptions) -> ChshSearch {
    #[cfg(feature = "parallel")]
    {
        chsh_maximize_parallel(two, options)
    }
    #[cfg(not(feature = "parallel"))]
    {
        chsh_maximize_sequential(two, options)
    }
}

impl ChshSearch {
    pub fn observable_name(&self, two: &TwoParticleSystem, i: usize) -> String {
        two.spin().observable_name(self.observables[i])
    }

    /// Position of an achiever with the given settings and state, if any.
    pub fn find_achiever(&self, state: usize, settings: [usize; 4]) -> Option<&ChshAchiever> {
        self.achievers
            .binary_search_by(|a| (a.state, a.settings).cmp(&(state, settings)))
            .ok()
            .map(|i| &self.achievers[i])
    }

    pub fn magnitudes(&self) -> Vec<Rational> {
        self.histogram.iter().map(|(v, _)| *v).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlation::chsh_value;
    use crate::r;

    fn names(two: &TwoParticleSystem, xs: [&str; 4]) -> [Observable; 4] {
        xs.map(|x| two.spin().parse_observable(x).unwrap())
    }

    #[test]
    fn printed_values_on_singlet() {
        let two = TwoParticleSystem::new(2).unwrap();
        let s = two.state_index("S").unwrap();
        let [a1, a2, b1, b2] = names(&two, ["X", "Z", "Y", "Z"]);
        assert_eq!(chsh_value(&two, [a1, a2], [b1, b2], s), r(2, 1));
        let [a1, a2, b1, b2] = names(&two, ["X", "Y", "Y", "X"]);
        assert_eq!(chsh_value(&two, [a1, a2], [b1, b2], s), r(-2, 1));
        let [x, _, _, _] = names(&two, ["X", "X", "X", "X"]);
        assert_eq!(chsh_value(&two, [x, x], [x, x], s), r(-2, 1));
    }

    #[test]
    fn q2_entangled_maximum() {
        let two = TwoParticleSystem::new(2).unwrap();
        for prune in [true, false] {
            let res = chsh_maximize_sequential(
                &two,
                ChshOptions {
                    include_product: false,
                    prune,
                },
            );
            assert_eq!(res.max_abs, r(2, 1));
            assert_eq!(res.magnitudes(), vec![r(2, 3), r(2, 1)]);
        }
        let full = chsh_maximize_sequential(
            &two,
            ChshOptions {
                include_product: false,
                prune: false,
            },
        );
        assert_eq!(full.evaluated, 6 * 6u64.pow(4));
        assert_eq!(full.histogram, vec![(r(2, 3), 5184), (r(2, 1), 2592)]);
    }

    #[test]
    fn q2_product_scope() {
        let two = TwoParticleSystem::new(2).unwrap();
        let res = chsh_maximize_sequential(
            &two,
            ChshOptions {
                include_product: true,
                prune: true,
            },
        );
        assert_eq!(res.max_abs, r(2, 1));
        assert_eq!(res.states.len(), 15);
    }

    #[test]
    fn achievers_agree_with_direct_evaluation() {
        let two = TwoParticleSystem::new(2).unwrap();
        let res = chsh_maximize_sequential(&two, ChshOptions::default());
        for a in &res.achievers {
            let o = a.settings.map(|i| res.observables[i]);
            assert_eq!(
                chsh_value(&two, [o[0], o[1]], [o[2], o[3]], a.state),
                a.value
            );
        }
        let s = two.state_index("S").unwrap();
        let idx = |x: &str| {
            let o = two.spin().parse_observable(x).unwrap();
            res.observables.iter().position(|&y| y == o).unwrap()
        };
        let hit = res
            .find_achiever(s, [idx("X"), idx("Y"), idx("Y"), idx("X")])
            .unwrap();
        assert_eq!(hit.value, r(-2, 1));
        let hit = res
            .find_achiever(s, [idx("X"), idx("Z"), idx("Y"), idx("Z")])
            .unwrap();
        assert_eq!(hit.value, r(2, 1));
    }

    #[test]
    fn pruning_keeps_magnitudes_q3() {
        let two = TwoParticleSystem::new(3).unwrap();
        let pruned = chsh_maximize_sequential(
            &two,
            ChshOptions {
                include_product: false,
                prune: true,
            },
        );
        let full = chsh_maximize_sequential(
            &two,
            ChshOptions {
                include_product: false,
                prune: false,
            },
        );
        assert_eq!(pruned.max_abs, full.max_abs);
        assert_eq!(pruned.magnitudes(), full.magnitudes());
        assert_eq!(full.max_abs, r(2, 1));
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_matches_sequential() {
        for q in [2, 3] {
            let two = TwoParticleSystem::new(q).unwrap();
            for prune in [true, false] {
                let opts = ChshOptions {
                    include_product: true,
                    prune,
                };
                assert_eq!(
                    chsh_maximize_parallel(&two, opts),
                    chsh_maximize_sequential(&two, opts)
                );
            }
        }
    }

    #[test]
    fn sign_swap_identities() {
        // ⟨A1,A2;B1,B2⟩ = ⟨A1,-A2;B2,B1⟩ = -⟨-A1,A2;B2,B1⟩
        let two = TwoParticleSystem::new(3).unwrap();
        let obs = two.spin().enumerate_observables();
        let pick = [0usize, 3, 5, 7, 10];
        for s in two.entangled_indices().step_by(3) {
            for &a1 in &pick {
                for &a2 in &pick {
                    for &b1 in &pick {
                        for &b2 in &pick {
                            let (a1, a2, b1, b2) = (obs[a1], obs[a2], obs[b1], obs[b2]);
                            let v = chsh_value(&two, [a1, a2], [b1, b2], s);
                            assert_eq!(v, chsh_value(&two, [a1, a2.negate()], [b2, b1], s));
                            assert_eq!(v, -chsh_value(&two, [a1.negate(), a2], [b2, b1], s));
                        }
                    }
                }
            }
        }
    }
}
