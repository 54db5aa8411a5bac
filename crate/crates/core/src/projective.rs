//! Projective state spaces PG(N-1, q) and their dual labels.

use std::collections::HashMap;

use serde::Serialize;

use crate::field::{Felt, FieldSpec};
use crate::{GqmError, Result};

/// A physical state: a canonical representative (last nonzero coordinate 1)
/// standing for all of its nonzero scalar multiples.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ProjPoint {
    pub label: String,
    pub rep: Vec<Felt>,
}

/// A measurement outcome paired with the state it annihilates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DualPoint {
    pub label: String,
    pub rep: Vec<Felt>,
}

/// Scales `v` so its last nonzero coordinate is 1. `None` for the zero vector.
pub fn canonicalize(field: &FieldSpec, v: &[Felt]) -> Option<Vec<Felt>> {
    let last = *v.iter().rev().find(|x| !x.is_zero())?;
    let k = field.inv(last).ok()?;
    Some(field.scale(k, v))
}

/// Scales `v` so its first nonzero coordinate is 1.
pub fn canonicalize_first(field: &FieldSpec, v: &[Felt]) -> Option<Vec<Felt>> {
    let first = *v.iter().find(|x| !x.is_zero())?;
    let k = field.inv(first).ok()?;
    Some(field.scale(k, v))
}

/// (q^N - 1)/(q - 1).
pub fn state_count(q: usize, levels: usize) -> usize {
    (q.pow(levels as u32) - 1) / (q - 1)
}

/// Every nonzero vector of GF(q)^N, in lexicographic index order.
pub fn all_vectors(field: &FieldSpec, levels: usize) -> impl Iterator<Item = Vec<Felt>> + '_ {
    let q = field.q();
    (1..q.pow(levels as u32)).map(move |mut k| {
        let mut v = vec![Felt::ZERO; levels];
        for slot in v.iter_mut().rev() {
            *slot = Felt((k % q) as u8);
            k /= q;
        }
        v
    })
}

pub fn format_coords(field: &FieldSpec, v: &[Felt]) -> String {
    let parts: Vec<&str> = v.iter().map(|&x| field.name(x)).collect();
    format!("[{}]", parts.join(","))
}

fn letter(i: usize) -> String {
    ((b'a' + i as u8) as char).to_string()
}

/// The printed representatives of GQM(2,q) for q ≤ 5, in label order a, b, c, ...
fn printed_spin_states(q: usize) -> Option<&'static [[u8; 2]]> {
    match q {
        2 => Some(&[[1, 0], [0, 1], [1, 1]]),
        3 => Some(&[[1, 0], [0, 1], [2, 1], [1, 1]]),
        4 => Some(&[[1, 0], [0, 1], [2, 1], [3, 1], [1, 1]]),
        5 => Some(&[[1, 0], [0, 1], [2, 1], [4, 1], [3, 1], [1, 1]]),
        _ => None,
    }
}

/// The fifteen states of GF(2)^2 ⊗ GF(2)^2 with their printed names: the
/// nine product states first, then S and the triplet and doublet.
pub const PG32_CATALOG: [(&str, [u8; 4]); 15] = [
    ("aa", [1, 0, 0, 0]),
    ("ab", [0, 1, 0, 0]),
    ("ac", [1, 1, 0, 0]),
    ("ba", [0, 0, 1, 0]),
    ("bb", [0, 0, 0, 1]),
    ("bc", [0, 0, 1, 1]),
    ("ca", [1, 0, 1, 0]),
    ("cb", [0, 1, 0, 1]),
    ("cc", [1, 1, 1, 1]),
    ("S", [0, 1, 1, 0]),
    ("(ab)", [1, 0, 0, 1]),
    ("(bc)", [1, 1, 1, 0]),
    ("(ca)", [0, 1, 1, 1]),
    ("(abc)", [1, 1, 0, 1]),
    ("(acb)", [1, 0, 1, 1]),
];

/// Enumerates PG(N-1, q) as labelled canonical points.
///
/// For N = 2 and q ≤ 5, and for the N = 4, q = 2 two-particle catalog, the
/// order and labels are the printed ones; otherwise points follow the
/// lexicographic order of their canonical representatives and are lettered
/// when there are at most 26 of them.
pub fn enumerate_states(field: &FieldSpec, levels: usize) -> Result<Vec<ProjPoint>> {
    if levels < 2 {
        return Err(GqmError::WrongLevels {
            required: 2,
            got: levels,
        });
    }
    let q = field.q();
    if levels == 2 {
        if let Some(printed) =
            printed_spin_states(q).filter(|_| q != 4 || field.irreducible() == [1, 1, 1])
        {
            return Ok(printed
                .iter()
                .enumerate()
                .map(|(i, rep)| ProjPoint {
                    label: letter(i),
                    rep: rep.iter().map(|&x| Felt(x)).collect(),
                })
                .collect());
        }
    }
    if levels == 4 && q == 2 {
        return Ok(PG32_CATALOG
            .iter()
            .map(|(label, rep)| ProjPoint {
                label: label.to_string(),
                rep: rep.iter().map(|&x| Felt(x)).collect(),
            })
            .collect());
    }
    let mut reps: Vec<Vec<Felt>> = all_vectors(field, levels)
        .filter(|v| canonicalize(field, v).as_deref() == Some(v.as_slice()))
        .collect();
    reps.sort();
    let lettered = reps.len() <= 26;
    Ok(reps
        .into_iter()
        .enumerate()
        .map(|(i, rep)| ProjPoint {
            label: if lettered { letter(i) } else { format!("p{i}") },
            rep,
        })
        .collect())
}

/// For each state `r = [x, y]` of a two-level space, the dual `[y, -x]`,
/// which annihilates `r` and nothing else. This reproduces the printed dual
/// lists for q ≤ 5 coordinate for coordinate.
pub fn derive_dual_basis(field: &FieldSpec, states: &[ProjPoint]) -> Result<Vec<DualPoint>> {
    states
        .iter()
        .map(|s| {
            if s.rep.len() != 2 {
                return Err(GqmError::WrongLevels {
                    required: 2,
                    got: s.rep.len(),
                });
            }
            Ok(DualPoint {
                label: format!("{}\u{0304}", s.label),
                rep: vec![s.rep[1], field.neg(s.rep[0])],
            })
        })
        .collect()
}

/// Field-valued pairing of a dual coefficient list with a state.
pub fn bracket(field: &FieldSpec, dual: &[Felt], state: &[Felt]) -> Result<Felt> {
    if dual.len() != state.len() {
        return Err(GqmError::DimensionMismatch {
            expected: dual.len(),
            got: state.len(),
        });
    }
    Ok(field.dot(dual, state))
}

/// Lookup from canonical representative to position in a state list.
#[derive(Debug, Clone)]
pub struct StateIndex {
    map: HashMap<Vec<Felt>, usize>,
}

impl StateIndex {
    pub fn new(states: &[ProjPoint]) -> Self {
        StateIndex {
            map: states
                .iter()
                .enumerate()
                .map(|(i, s)| (s.rep.clone(), i))
                .collect(),
        }
    }

    /// Position of the projective class of `v` (any nonzero multiple).
    pub fn find(&self, field: &FieldSpec, v: &[Felt]) -> Option<usize> {
        self.map.get(&canonicalize(field, v)?).copied()
    }
}
