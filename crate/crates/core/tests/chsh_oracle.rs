//! Independent recomputation of the CHSH value distribution for q = 2..5.
//!
//! Field arithmetic, state enumeration, annihilators and correlations are
//! rebuilt here from scratch (no gqm-core types) and the full unpruned
//! search is compared with the library's result.

use std::collections::BTreeMap;

use gqm_core::chsh::{chsh_maximize, ChshOptions};
use gqm_core::r;
use gqm_core::twostate::TwoParticleSystem;
use gqm_core::Rational;

struct Field {
    q: usize,
    add: Vec<Vec<usize>>,
    mul: Vec<Vec<usize>>,
}

impl Field {
    fn new(q: usize) -> Self {
        if q == 4 {
            // 0, 1, w, w^2 with w^2 = w + 1: addition is xor of the bit patterns
            let log = [usize::MAX, 0, 1, 2];
            let exp = [1, 2, 3];
            let add = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
            let mul = (0..4)
                .map(|a| {
                    (0..4)
                        .map(|b| {
                            if a == 0 || b == 0 {
                                0
                            } else {
                                exp[(log[a] + log[b]) % 3]
                            }
                        })
                        .collect()
                })
                .collect();
            Field { q, add, mul }
        } else {
            let add = (0..q)
                .map(|a| (0..q).map(|b| (a + b) % q).collect())
                .collect();
            let mul = (0..q)
                .map(|a| (0..q).map(|b| (a * b) % q).collect())
                .collect();
            Field { q, add, mul }
        }
    }

    fn neg(&self, a: usize) -> usize {
        (0..self.q).find(|&b| self.add[a][b] == 0).unwrap()
    }
}

/// |(u ⊗ v) · psi| for duals u, v.
fn weight(f: &Field, u: [usize; 2], v: [usize; 2], psi: [usize; 4]) -> i64 {
    let mut acc = 0;
    for i in 0..2 {
        for j in 0..2 {
            acc = f.add[acc][f.mul[f.mul[u[i]][v[j]]][psi[2 * i + j]]];
        }
    }
    i64::from(acc != 0)
}

fn oracle(q: usize) -> BTreeMap<Rational, u64> {
    let f = Field::new(q);
    // points of the projective line and the functional killing each
    let mut points = vec![[1usize, 0]];
    points.extend((0..q).map(|x| [x, 1]));
    let duals: Vec<[usize; 2]> = points.iter().map(|p| [p[1], f.neg(p[0])]).collect();
    let n = points.len();
    let observables: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    // entangled states, first nonzero coordinate 1
    let mut states = Vec::new();
    for code in 1..q.pow(4) {
        let c: [usize; 4] = std::array::from_fn(|i| (code / q.pow(i as u32)) % q);
        let first = *c.iter().find(|&&x| x != 0).unwrap();
        let det = f.add[f.mul[c[0]][c[3]]][f.neg(f.mul[c[1]][c[2]])];
        if first == 1 && det != 0 {
            states.push(c);
        }
    }
    let m = observables.len();
    let mut hist = BTreeMap::new();
    for psi in states {
        let mut e = vec![0i64; m * m];
        for (i, &(a, b)) in observables.iter().enumerate() {
            for (j, &(c, d)) in observables.iter().enumerate() {
                let w = [
                    weight(&f, duals[a], duals[c], psi),
                    weight(&f, duals[a], duals[d], psi),
                    weight(&f, duals[b], duals[c], psi),
                    weight(&f, duals[b], duals[d], psi),
                ];
                let total: i64 = w.iter().sum();
                e[i * m + j] = 12 * (w[0] - w[1] - w[2] + w[3]) / total;
            }
        }
        let mut counts = vec![0u64; 49];
        for a1 in 0..m {
            for a2 in 0..m {
                for b1 in 0..m {
                    for b2 in 0..m {
                        let v = e[a1 * m + b1] + e[a1 * m + b2] + e[a2 * m + b1] - e[a2 * m + b2];
                        counts[v.unsigned_abs() as usize] += 1;
                    }
                }
            }
        }
        for (v, c) in counts.into_iter().enumerate() {
            if c > 0 {
                *hist.entry(Rational::new(v as i64, 12)).or_default() += c;
            }
        }
    }
    hist
}

fn check(q: usize) {
    let expected = oracle(q);
    let two = TwoParticleSystem::new(q).unwrap();
    let res = chsh_maximize(
        &two,
        ChshOptions {
            include_product: false,
            prune: false,
        },
    );
    let got: BTreeMap<Rational, u64> = res.histogram.iter().copied().collect();
    assert_eq!(got, expected, "q = {q}");
    assert_eq!(res.max_abs, *expected.keys().last().unwrap());
    assert_eq!(res.max_abs, r(2, 1));
    assert_eq!(res.achievers.len() as u64, expected[&r(2, 1)]);
}

#[test]
fn q2_distribution() {
    check(2);
}

#[test]
fn q3_distribution() {
    check(3);
}

#[test]
fn q4_distribution() {
    check(4);
}

#[test]
fn q5_distribution() {
    check(5);
}
