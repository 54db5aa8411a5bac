//! Joint outcome probabilities and correlations of product observables.

use serde::Serialize;

use crate::field::{abs_value, Felt};
use crate::observable::Observable;
use crate::rational::Rational;
use crate::twostate::{kron, TwoParticleSystem};
use crate::{GqmError, Result};

/// `first` acts on particle 1, `second` on particle 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ProductObservable {
    pub first: Observable,
    pub second: Observable,
}

/// Probabilities of the outcome pairs in the order `++, +-, -+, --`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct JointDistribution {
    pub p: [Rational; 4],
}

impl JointDistribution {
    /// ⟨A⊗B⟩ = P(++) - P(+-) - P(-+) + P(--).
    pub fn correlation(&self) -> Rational {
        self.p[0] - self.p[1] - self.p[2] + self.p[3]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwoParticleRow {
    pub observable: String,
    pub state: String,
    pub p: [Rational; 4],
    pub correlation: Rational,
}

/// Absolute values of the four product-dual brackets, in outcome order.
pub fn outcome_weights(
    two: &TwoParticleSystem,
    obs: ProductObservable,
    coords: &[Felt; 4],
) -> [u32; 4] {
    let f = two.field();
    let duals = two.spin().duals();
    let d = |i: usize| duals[i].rep.as_slice();
    let pairs = [
        (obs.first.plus, obs.second.plus),
        (obs.first.plus, obs.second.minus),
        (obs.first.minus, obs.second.plus),
        (obs.first.minus, obs.second.minus),
    ];
    pairs.map(|(x, y)| abs_value(f.dot(&kron(f, d(x), d(y)), coords)))
}

pub fn joint_probabilities(
    two: &TwoParticleSystem,
    obs: ProductObservable,
    state: usize,
) -> JointDistribution {
    let w = outcome_weights(two, obs, &two.states()[state].coords);
    // the four product duals span the dual space, so some bracket is nonzero
    let total: i64 = w.iter().map(|&x| x as i64).sum();
    JointDistribution {
        p: w.map(|x| Rational::new(x as i64, total)),
    }
}

pub fn correlation(two: &TwoParticleSystem, obs: ProductObservable, state: usize) -> Rational {
    joint_probabilities(two, obs, state).correlation()
}

/// E(A1,B1) + E(A1,B2) + E(A2,B1) - E(A2,B2), with A on particle 1.
pub fn chsh_value(
    two: &TwoParticleSystem,
    a: [Observable; 2],
    b: [Observable; 2],
    state: usize,
) -> Rational {
    let e = |x: Observable, y: Observable| {
        correlation(
            two,
            ProductObservable {
                first: x,
                second: y,
            },
            state,
        )
    };
    e(a[0], b[0]) + e(a[0], b[1]) + e(a[1], b[0]) - e(a[1], b[1])
}

/// The nine products of X, Y, Z on the six entangled q = 2 states, rows
/// ordered by observable (X1X2, X1Y2, ..., Z1Z2) then state.
pub fn two_particle_table(two: &TwoParticleSystem) -> Result<Vec<TwoParticleRow>> {
    if two.q() != 2 {
        return Err(GqmError::WrongOrder {
            required: 2,
            got: two.q(),
        });
    }
    let spin = two.spin();
    let axes = spin.canonical_observables();
    let mut rows = Vec::new();
    for &x in &axes {
        for &y in &axes {
            let obs = ProductObservable {
                first: x,
                second: y,
            };
            for s in two.entangled_indices() {
                let d = joint_probabilities(two, obs, s);
                rows.push(TwoParticleRow {
                    observable: format!("{}1{}2", spin.observable_name(x), spin.observable_name(y)),
                    state: two.states()[s].label.clone(),
                    p: d.p,
                    correlation: d.correlation(),
                });
            }
        }
    }
    Ok(rows)
}
