//! One-particle GQM(2,q): observables, the probability rule and relabelings.
//!
//! An observable is an ordered pair of duals `{r̄, s̄}` written `A_rs`; the
//! first dual is the outcome +1 and the second the outcome -1, so
//! `A_sr = -A_rs`. For q = 2 the three directions carry the aliases
//! `X = A_bc`, `Y = A_ca`, `Z = A_ab`.

use std::fmt;

use serde::Serialize;

use crate::field::{abs_value, Felt, FieldSpec};
use crate::group::SymmetryGroup;
use crate::perm::Permutation;
use crate::projective::{derive_dual_basis, enumerate_states, DualPoint, ProjPoint, StateIndex};
use crate::rational::Rational;
use crate::{GqmError, Result};

/// Field, states and duals of a single two-level system.
#[derive(Debug, Clone)]
pub struct SpinSystem {
    field: FieldSpec,
    states: Vec<ProjPoint>,
    duals: Vec<DualPoint>,
    index: StateIndex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Observable {
    pub plus: usize,
    pub minus: usize,
}

impl Observable {
    pub fn new(plus: usize, minus: usize) -> Result<Self> {
        if plus == minus {
            return Err(GqmError::Invalid(format!(
                "observable needs two distinct duals, got {plus} twice"
            )));
        }
        Ok(Observable { plus, minus })
    }

    pub fn negate(self) -> Self {
        Observable {
            plus: self.minus,
            minus: self.plus,
        }
    }
}

/// An observable in canonical orientation together with a sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SignedObservable {
    pub sign: i8,
    pub observable: Observable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OutcomeDistribution {
    pub p_plus: Rational,
    pub p_minus: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OneParticleRow {
    pub observable: String,
    pub state: String,
    pub p_plus: Rational,
    pub p_minus: Rational,
    pub expectation: Rational,
}

impl SpinSystem {
    pub fn new(q: usize) -> Result<Self> {
        Self::from_field(FieldSpec::of_order(q)?)
    }

    pub fn from_field(field: FieldSpec) -> Result<Self> {
        let states = enumerate_states(&field, 2)?;
        let duals = derive_dual_basis(&field, &states)?;
        let index = StateIndex::new(&states);
        Ok(SpinSystem {
            field,
            states,
            duals,
            index,
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn q(&self) -> usize {
        self.field.q()
    }

    pub fn states(&self) -> &[ProjPoint] {
        &self.states
    }

    pub fn duals(&self) -> &[DualPoint] {
        &self.duals
    }

    pub fn label(&self, i: usize) -> &str {
        &self.states[i].label
    }

    pub fn state_index(&self, label: &str) -> Result<usize> {
        self.states
            .iter()
            .position(|s| s.label == label)
            .ok_or_else(|| GqmError::UnknownLabel(label.to_string()))
    }

    /// Position of the projective class of an arbitrary nonzero vector.
    pub fn find_state(&self, v: &[Felt]) -> Option<usize> {
        self.index.find(&self.field, v)
    }

    /// Canonically oriented observables, one per direction. For q = 2 the
    /// order is X, Y, Z; otherwise `A_rs` with `r < s` lexicographically.
    pub fn canonical_observables(&self) -> Vec<Observable> {
        if self.q() == 2 {
            return vec![
                Observable { plus: 1, minus: 2 },
                Observable { plus: 2, minus: 0 },
                Observable { plus: 0, minus: 1 },
            ];
        }
        let n = self.states.len();
        (0..n)
            .flat_map(|r| (r + 1..n).map(move |s| Observable { plus: r, minus: s }))
            .collect()
    }

    /// All (q+1)q ordered observables: the canonical ones followed by their negations.
    pub fn enumerate_observables(&self) -> Vec<Observable> {
        let canon = self.canonical_observables();
        let neg: Vec<Observable> = canon.iter().map(|o| o.negate()).collect();
        canon.into_iter().chain(neg).collect()
    }

    pub fn canonical_form(&self, obs: Observable) -> SignedObservable {
        let canon = self.canonical_observables();
        if canon.contains(&obs) {
            SignedObservable {
                sign: 1,
                observable: obs,
            }
        } else {
            SignedObservable {
                sign: -1,
                observable: obs.negate(),
            }
        }
    }

    /// `A_rs`, or the X/Y/Z alias (with a leading `-` when negated) for q = 2.
    pub fn observable_name(&self, obs: Observable) -> String {
        if self.q() == 2 {
            let signed = self.canonical_form(obs);
            let axis = match (signed.observable.plus, signed.observable.minus) {
                (1, 2) => "X",
                (2, 0) => "Y",
                _ => "Z",
            };
            let sign = if signed.sign < 0 { "-" } else { "" };
            format!("{sign}{axis}")
        } else {
            self.pair_name(obs)
        }
    }

    /// Always the `A_rs` form.
    pub fn pair_name(&self, obs: Observable) -> String {
        format!("A_{}{}", self.label(obs.plus), self.label(obs.minus))
    }

    /// Accepts `A_rs`, and for q = 2 also `X`, `Y`, `Z`, optionally negated.
    pub fn parse_observable(&self, name: &str) -> Result<Observable> {
        let unknown = || GqmError::UnknownLabel(name.to_string());
        let (negated, body) = match name.trim().strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, name.trim()),
        };
        let obs = if let Some(pair) = body.strip_prefix("A_") {
            let letters: Vec<char> = pair.chars().collect();
            if letters.len() != 2 {
                return Err(unknown());
            }
            let r = self.state_index(&letters[0].to_string())?;
            let s = self.state_index(&letters[1].to_string())?;
            Observable::new(r, s).map_err(|_| unknown())?
        } else if self.q() == 2 {
            let canon = self.canonical_observables();
            match body {
                "X" => canon[0],
                "Y" => canon[1],
                "Z" => canon[2],
                _ => return Err(unknown()),
            }
        } else {
            return Err(unknown());
        };
        Ok(if negated { obs.negate() } else { obs })
    }

    /// Probability rule on an arbitrary nonzero vector.
    pub fn outcome_probabilities_vec(&self, obs: Observable, v: &[Felt]) -> OutcomeDistribution {
        let f = &self.field;
        let wp = abs_value(f.dot(&self.duals[obs.plus].rep, v)) as i64;
        let wm = abs_value(f.dot(&self.duals[obs.minus].rep, v)) as i64;
        // |.|^2 = |.| since the absolute value is 0 or 1; two distinct duals
        // never both annihilate a nonzero state
        let total = wp + wm;
        OutcomeDistribution {
            p_plus: Rational::new(wp, total),
            p_minus: Rational::new(wm, total),
        }
    }

    pub fn outcome_probabilities(&self, obs: Observable, state: usize) -> OutcomeDistribution {
        self.outcome_probabilities_vec(obs, &self.states[state].rep)
    }

    pub fn expectation(&self, obs: Observable, state: usize) -> Rational {
        let d = self.outcome_probabilities(obs, state);
        d.p_plus - d.p_minus
    }

    /// Rows of (observable, state, P(+), P(-), expectation).
    ///
    /// Without negations this lists each direction once; for q = 2 the rows
    /// come in the printed order `A_ab`, `A_bc`, `A_ca`.
    pub fn one_particle_table(&self, include_negations: bool) -> Vec<OneParticleRow> {
        let mut observables = if self.q() == 2 {
            vec![
                Observable { plus: 0, minus: 1 },
                Observable { plus: 1, minus: 2 },
                Observable { plus: 2, minus: 0 },
            ]
        } else {
            self.canonical_observables()
        };
        if include_negations {
            let neg: Vec<Observable> = observables.iter().map(|o| o.negate()).collect();
            observables.extend(neg);
        }
        observables
            .iter()
            .flat_map(|&obs| {
                (0..self.states.len()).map(move |s| {
                    let d = self.outcome_probabilities(obs, s);
                    OneParticleRow {
                        observable: self.pair_name(obs),
                        state: self.label(s).to_string(),
                        p_plus: d.p_plus,
                        p_minus: d.p_minus,
                        expectation: d.p_plus - d.p_minus,
                    }
                })
            })
            .collect()
    }
}

/// Applies a realizable label permutation to both duals of an observable and
/// reports the result in canonical orientation with a sign.
pub fn relabel_action(
    system: &SpinSystem,
    group: &SymmetryGroup,
    perm: &Permutation,
    obs: Observable,
) -> Result<SignedObservable> {
    group.witness(perm)?;
    let moved = Observable {
        plus: perm.apply(obs.plus),
        minus: perm.apply(obs.minus),
    };
    Ok(system.canonical_form(moved))
}

impl fmt::Display for SignedObservable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}A_{}{}",
            if self.sign < 0 { "-" } else { "+" },
            self.observable.plus,
            self.observable.minus
        )
    }
}
