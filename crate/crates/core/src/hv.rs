//! Local deterministic hidden variables against zero-probability outcomes.
//!
//! An assignment fixes a value ±1 for every selected observable on each
//! particle. A quantum outcome pair with probability exactly 0 forbids every
//! assignment that would produce it, so each forbidden pair is a two-literal
//! clause. Existence of a surviving assignment is therefore 2-SAT, decided
//! by strongly connected components of the implication graph; small cases
//! are also enumerated outright.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use serde::Serialize;

use crate::correlation::{joint_probabilities, ProductObservable};
use crate::observable::Observable;
use crate::rational::Rational;
use crate::twostate::TwoParticleSystem;
use crate::{GqmError, Result};

/// Largest brute-force search, in assignment bits.
pub const MAX_BRUTE_FORCE_BITS: usize = 24;

/// `particle` is 1 or 2; `observable` indexes the selected set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Literal {
    pub particle: u8,
    pub observable: usize,
    pub value: i8,
}

impl Literal {
    pub fn negate(self) -> Literal {
        Literal {
            value: -self.value,
            ..self
        }
    }
}

/// Outcome `(x, y)` of `set[first]` on particle 1 and `set[second]` on particle 2
/// has probability exactly 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ForbiddenOutcome {
    pub first: usize,
    pub second: usize,
    pub x: i8,
    pub y: i8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Implication {
    pub from: Literal,
    pub to: Literal,
}

/// Bit `i` holds particle 1's value for observable `i`, bit `k + i` particle 2's;
/// a set bit means +1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Assignment {
    pub bits: u64,
    pub k: usize,
}

impl Assignment {
    pub fn value(&self, particle: u8, observable: usize) -> i8 {
        let bit = (particle as usize - 1) * self.k + observable;
        if self.bits >> bit & 1 == 1 {
            1
        } else {
            -1
        }
    }

    pub fn hits(&self, f: &ForbiddenOutcome) -> bool {
        self.value(1, f.first) == f.x && self.value(2, f.second) == f.y
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    NoHiddenVariables,
    SurvivorsExist,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::NoHiddenVariables => "no-hidden-variables",
            Verdict::SurvivorsExist => "survivors-exist",
        })
    }
}

pub fn forbidden_set(
    two: &TwoParticleSystem,
    state: usize,
    set: &[Observable],
) -> Vec<ForbiddenOutcome> {
    let mut out = Vec::new();
    for (i, &a) in set.iter().enumerate() {
        for (j, &b) in set.iter().enumerate() {
            let d = joint_probabilities(
                two,
                ProductObservable {
                    first: a,
                    second: b,
                },
                state,
            );
            for (slot, (x, y)) in [(1, 1), (1, -1), (-1, 1), (-1, -1)].into_iter().enumerate() {
                if d.p[slot].is_zero() {
                    out.push(ForbiddenOutcome {
                        first: i,
                        second: j,
                        x,
                        y,
                    });
                }
            }
        }
    }
    out
}

fn check_size(k: usize) -> Result<()> {
    if k == 0 {
        return Err(GqmError::Invalid("observable set is empty".into()));
    }
    if 2 * k > MAX_BRUTE_FORCE_BITS {
        return Err(GqmError::Invalid(format!(
            "brute force over 2^{} assignments exceeds the 2^{MAX_BRUTE_FORCE_BITS} limit",
            2 * k
        )));
    }
    Ok(())
}

fn survives(bits: u64, k: usize, forbidden: &[ForbiddenOutcome]) -> bool {
    let a = Assignment { bits, k };
    !forbidden.iter().any(|f| a.hits(f))
}

/// Every assignment avoiding all forbidden outcomes, in bit-pattern order.
pub fn surviving_assignments(k: usize, forbidden: &[ForbiddenOutcome]) -> Result<Vec<Assignment>> {
    check_size(k)?;
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        Ok((0..1u64 << (2 * k))
            .into_par_iter()
            .filter(|&bits| survives(bits, k, forbidden))
            .map(|bits| Assignment { bits, k })
            .collect())
    }
    #[cfg(not(feature = "parallel"))]
    {
        surviving_assignments_sequential(k, forbidden)
    }
}

pub fn surviving_assignments_sequential(
    k: usize,
    forbidden: &[ForbiddenOutcome],
) -> Result<Vec<Assignment>> {
    check_size(k)?;
    Ok((0..1u64 << (2 * k))
        .filter(|&bits| survives(bits, k, forbidden))
        .map(|bits| Assignment { bits, k })
        .collect())
}

/// Two implications per forbidden outcome: first = x forces second ≠ y and
/// second = y forces first ≠ x. Deduplicated and sorted.
pub fn implication_chart(forbidden: &[ForbiddenOutcome]) -> Vec<Implication> {
    let mut edges = BTreeSet::new();
    for f in forbidden {
        let u = Literal {
            particle: 1,
            observable: f.first,
            value: f.x,
        };
        let v = Literal {
            particle: 2,
            observable: f.second,
            value: f.y,
        };
        edges.insert(Implication {
            from: u,
            to: v.negate(),
        });
        edges.insert(Implication {
            from: v,
            to: u.negate(),
        });
    }
    edges.into_iter().collect()
}

struct LiteralGraph {
    k: usize,
    graph: DiGraph<Literal, ()>,
}

impl LiteralGraph {
    fn new(k: usize, chart: &[Implication]) -> Self {
        let mut graph = DiGraph::new();
        for particle in 1..=2u8 {
            for observable in 0..k {
                for value in [-1i8, 1] {
                    graph.add_node(Literal {
                        particle,
                        observable,
                        value,
                    });
                }
            }
        }
        let mut g = LiteralGraph { k, graph };
        for e in chart {
            let (a, b) = (g.node(e.from), g.node(e.to));
            g.graph.add_edge(a, b, ());
        }
        g
    }

    fn node(&self, l: Literal) -> NodeIndex {
        let var = (l.particle as usize - 1) * self.k + l.observable;
        NodeIndex::new(2 * var + usize::from(l.value == 1))
    }

    fn shortest_path(&self, from: Literal, to: Literal) -> Option<Vec<Literal>> {
        let (start, goal) = (self.node(from), self.node(to));
        let mut prev = vec![None; self.graph.node_count()];
        let mut queue = VecDeque::from([start]);
        let mut seen = vec![false; self.graph.node_count()];
        seen[start.index()] = true;
        while let Some(n) = queue.pop_front() {
            if n == goal {
                let mut path = vec![self.graph[n]];
                let mut cur = n;
                while let Some(p) = prev[cur.index()] {
                    path.push(self.graph[p]);
                    cur = p;
                }
                path.reverse();
                return Some(path);
            }
            // neighbors in ascending node order for a deterministic path
            let mut next: Vec<NodeIndex> = self.graph.neighbors(n).collect();
            next.sort_unstable();
            next.dedup();
            for m in next {
                if !seen[m.index()] {
                    seen[m.index()] = true;
                    prev[m.index()] = Some(n);
                    queue.push_back(m);
                }
            }
        }
        None
    }
}

/// 2-SAT: an assignment survives unless some literal and its negation
/// share a strongly connected component.
pub fn has_surviving_assignment(k: usize, forbidden: &[ForbiddenOutcome]) -> bool {
    let g = LiteralGraph::new(k, &implication_chart(forbidden));
    let mut comp = vec![0usize; g.graph.node_count()];
    for (c, scc) in tarjan_scc(&g.graph).into_iter().enumerate() {
        for n in scc {
            comp[n.index()] = c;
        }
    }
    (0..2 * k).all(|var| comp[2 * var] != comp[2 * var + 1])
}

/// A closed chain `L ⇒ ... ⇒ ¬L ⇒ ... ⇒ L`, preferring the shortest one
/// through the earliest literal. `None` when the constraints are satisfiable.
pub fn contradiction_cycle(k: usize, chart: &[Implication]) -> Option<Vec<Literal>> {
    let g = LiteralGraph::new(k, chart);
    let mut best: Option<Vec<Literal>> = None;
    for n in g.graph.node_indices() {
        let l = g.graph[n];
        let (Some(there), Some(back)) = (
            g.shortest_path(l, l.negate()),
            g.shortest_path(l.negate(), l),
        ) else {
            continue;
        };
        let cycle: Vec<Literal> = there.into_iter().chain(back.into_iter().skip(1)).collect();
        if best.as_ref().is_none_or(|b| cycle.len() < b.len()) {
            best = Some(cycle);
        }
    }
    best
}

/// Shortest implication chain between two literals.
pub fn implication_path(
    k: usize,
    chart: &[Implication],
    from: Literal,
    to: Literal,
) -> Option<Vec<Literal>> {
    LiteralGraph::new(k, chart).shortest_path(from, to)
}

/// Survivor enumeration (when small enough) together with the 2-SAT verdict.
#[derive(Debug, Clone, Serialize)]
pub struct HvAnalysis {
    pub observables: Vec<Observable>,
    pub forbidden: Vec<ForbiddenOutcome>,
    pub survivors: Option<Vec<Assignment>>,
    pub implications: Vec<Implication>,
    pub contradiction: Option<Vec<Literal>>,
    pub verdict: Verdict,
}

pub fn analyze(two: &TwoParticleSystem, state: usize, set: &[Observable]) -> Result<HvAnalysis> {
    let k = set.len();
    if k == 0 {
        return Err(GqmError::Invalid("observable set is empty".into()));
    }
    let forbidden = forbidden_set(two, state, set);
    let implications = implication_chart(&forbidden);
    let satisfiable = has_surviving_assignment(k, &forbidden);
    let survivors = if 2 * k <= MAX_BRUTE_FORCE_BITS {
        let list = surviving_assignments(k, &forbidden)?;
        if list.is_empty() == satisfiable {
            return Err(GqmError::Invalid(
                "brute force and implication graph disagree".into(),
            ));
        }
        Some(list)
    } else {
        None
    };
    let contradiction = if satisfiable {
        None
    } else {
        contradiction_cycle(k, &implications)
    };
    Ok(HvAnalysis {
        observables: set.to_vec(),
        forbidden,
        survivors,
        implications,
        contradiction,
        verdict: if satisfiable {
            Verdict::SurvivorsExist
        } else {
            Verdict::NoHiddenVariables
        },
    })
}

/// For every entangled state, whether any assignment to all canonical
/// observables survives. Returns (state index, survivors exist).
pub fn entangled_sweep(two: &TwoParticleSystem) -> Vec<(usize, bool)> {
    let set = two.spin().canonical_observables();
    let k = set.len();
    let check = |s: usize| (s, has_surviving_assignment(k, &forbidden_set(two, s, &set)));
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        two.entangled_indices().into_par_iter().map(check).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        two.entangled_indices().map(check).collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GapReport {
    pub survivors: Vec<Assignment>,
    /// Survivors with (Y1, Z2) = (+, -).
    pub y1z2_plus_minus: usize,
    /// Survivors with (Z1, Y2) = (-, +).
    pub z1y2_minus_plus: usize,
    pub p_y1z2_plus_minus: Rational,
    pub p_z1y2_minus_plus: Rational,
    pub ok: bool,
}

/// With only Y and Z on the q = 2 singlet, classical survivors exist but none
/// produce the anti-correlated pairs that quantum mechanics allows.
pub fn restricted_gap_check(two: &TwoParticleSystem) -> Result<GapReport> {
    if two.q() != 2 {
        return Err(GqmError::WrongOrder {
            required: 2,
            got: two.q(),
        });
    }
    let spin = two.spin();
    let s = two.state_index("S")?;
    let y = spin.parse_observable("Y")?;
    let z = spin.parse_observable("Z")?;
    let set = [y, z];
    let survivors = surviving_assignments(2, &forbidden_set(two, s, &set))?;
    let y1z2 = survivors
        .iter()
        .filter(|a| a.value(1, 0) == 1 && a.value(2, 1) == -1)
        .count();
    let z1y2 = survivors
        .iter()
        .filter(|a| a.value(1, 1) == -1 && a.value(2, 0) == 1)
        .count();
    let p1 = joint_probabilities(
        two,
        ProductObservable {
            first: y,
            second: z,
        },
        s,
    )
    .p[1];
    let p2 = joint_probabilities(
        two,
        ProductObservable {
            first: z,
            second: y,
        },
        s,
    )
    .p[2];
    let ok = !survivors.is_empty() && y1z2 == 0 && z1y2 == 0 && !p1.is_zero() && !p2.is_zero();
    Ok(GapReport {
        survivors,
        y1z2_plus_minus: y1z2,
        z1y2_minus_plus: z1y2,
        p_y1z2_plus_minus: p1,
        p_z1y2_minus_plus: p2,
        ok,
    })
}

/// `X1=+1` style rendering against a named observable set.
pub fn format_literal(names: &[String], l: Literal) -> String {
    format!(
        "{}{}={}",
        names[l.observable],
        l.particle,
        if l.value > 0 { "+1" } else { "-1" }
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::r;

    fn setup() -> (TwoParticleSystem, usize, Vec<Observable>, Vec<String>) {
        let two = TwoParticleSystem::new(2).unwrap();
        let s = two.state_index("S").unwrap();
        let set = two.spin().canonical_observables();
        let names = set.iter().map(|&o| two.spin().observable_name(o)).collect();
        (two, s, set, names)
    }

    fn lit(particle: u8, observable: usize, value: i8) -> Literal {
        Literal {
            particle,
            observable,
            value,
        }
    }

    #[test]
    fn forbidden_examples() {
        let (two, s, set, _) = setup();
        let f = forbidden_set(&two, s, &set);
        let has = |first, second, x, y| {
            f.contains(&ForbiddenOutcome {
                first,
                second,
                x,
                y,
            })
        };
        // X = 0, Y = 1, Z = 2
        assert!(has(0, 0, 1, 1));
        assert!(has(0, 2, 1, -1));
        assert!(has(1, 2, -1, 1));
        assert!(!has(0, 0, 1, -1));
    }

    #[test]
    fn no_survivors_on_singlet() {
        let (two, s, set, _) = setup();
        let f = forbidden_set(&two, s, &set);
        assert!(surviving_assignments(3, &f).unwrap().is_empty());
        assert!(!has_surviving_assignment(3, &f));
        let a = analyze(&two, s, &set).unwrap();
        assert_eq!(a.verdict, Verdict::NoHiddenVariables);
        assert_eq!(a.survivors.as_ref().map(Vec::len), Some(0));
    }

    #[test]
    fn narrated_implications() {
        let (two, s, set, names) = setup();
        let chart = implication_chart(&forbidden_set(&two, s, &set));
        let has = |from, to| chart.contains(&Implication { from, to });
        assert!(has(lit(1, 0, 1), lit(2, 2, 1)));
        assert!(has(lit(2, 2, -1), lit(1, 0, -1)));
        assert!(has(lit(2, 2, 1), lit(1, 1, 1)));
        assert!(has(lit(1, 1, -1), lit(2, 2, -1)));
        let cycle = contradiction_cycle(3, &chart).unwrap();
        assert_eq!(cycle.first(), cycle.last());
        assert!(cycle.contains(&cycle[0].negate()));
        assert!(cycle.windows(2).all(|w| chart.contains(&Implication {
            from: w[0],
            to: w[1]
        })));
        let chain = implication_path(3, &chart, lit(1, 0, 1), lit(2, 0, 1)).unwrap();
        assert_eq!(format_literal(&names, chain[0]), "X1=+1");
        assert_eq!(format_literal(&names, *chain.last().unwrap()), "X2=+1");
    }

    #[test]
    fn product_states_admit_assignments() {
        let (two, _, set, _) = setup();
        for i in 0..two.product_count() {
            let f = forbidden_set(&two, i, &set);
            assert!(!surviving_assignments(3, &f).unwrap().is_empty());
            assert!(has_surviving_assignment(3, &f));
        }
    }

    #[test]
    fn restricted_gap() {
        let two = TwoParticleSystem::new(2).unwrap();
        let g = restricted_gap_check(&two).unwrap();
        assert!(g.ok);
        assert!(!g.survivors.is_empty());
        assert_eq!(g.p_y1z2_plus_minus, r(1, 3));
        assert_eq!(g.p_z1y2_minus_plus, r(1, 3));
    }

    #[test]
    fn two_sat_agrees_with_brute_force() {
        for q in [2, 3] {
            let two = TwoParticleSystem::new(q).unwrap();
            let all = two.spin().canonical_observables();
            for s in 0..two.states().len() {
                // full set and a few two-element subsets
                let mut sets = vec![all.clone()];
                sets.extend(all.windows(2).map(|w| w.to_vec()));
                for set in sets {
                    let f = forbidden_set(&two, s, &set);
                    let brute = !surviving_assignments_sequential(set.len(), &f)
                        .unwrap()
                        .is_empty();
                    assert_eq!(brute, has_surviving_assignment(set.len(), &f));
                }
            }
        }
    }

    #[test]
    fn soundness() {
        let (two, s, set, _) = setup();
        let y_z = vec![set[1], set[2]];
        let f = forbidden_set(&two, s, &y_z);
        let survivors = surviving_assignments(2, &f).unwrap();
        for bits in 0..16u64 {
            let a = Assignment { bits, k: 2 };
            // deterministic support is the single outcome pair the assignment picks
            let disjoint = (0..2).all(|i| {
                (0..2).all(|j| {
                    let d = joint_probabilities(
                        &two,
                        ProductObservable {
                            first: y_z[i],
                            second: y_z[j],
                        },
                        s,
                    );
                    let slot = match (a.value(1, i), a.value(2, j)) {
                        (1, 1) => 0,
                        (1, -1) => 1,
                        (-1, 1) => 2,
                        _ => 3,
                    };
                    !d.p[slot].is_zero()
                })
            });
            assert_eq!(disjoint, survivors.contains(&a));
        }
    }

    #[test]
    fn brute_force_limit() {
        assert!(surviving_assignments(13, &[]).is_err());
        assert!(surviving_assignments(0, &[]).is_err());
    }
}
