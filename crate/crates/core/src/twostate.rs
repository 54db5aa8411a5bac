//! Two spins: states of GF(q)^2 ⊗ GF(q)^2 up to scalars.
//!
//! Coordinates are in Kronecker order with particle 1 as the major index,
//! so `|r⟩ ⊗ |s⟩ = [r0 s0, r0 s1, r1 s0, r1 s1]`. A state is a product
//! exactly when its reshaped 2×2 coefficient matrix is singular.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::field::{Felt, FieldSpec};
use crate::group::{apply_matrix, Matrix2, SymmetryGroup};
use crate::observable::SpinSystem;
use crate::perm::Permutation;
use crate::projective::{all_vectors, canonicalize, format_coords, PG32_CATALOG};
use crate::{GqmError, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwoState {
    pub label: String,
    pub coords: [Felt; 4],
    pub entangled: bool,
    /// For product states, the one-particle factors.
    pub factors: Option<(usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct TwoParticleSystem {
    spin: SpinSystem,
    states: Vec<TwoState>,
    index: HashMap<[Felt; 4], usize>,
}

/// Which particle a one-particle transformation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Particle {
    First,
    Second,
    Both,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultipletCatalog {
    pub singlet: Vec<String>,
    pub triplet: Vec<String>,
    pub doublet: Vec<String>,
    /// Orbit sizes of the entangled states under simultaneous relabeling.
    pub orbit_sizes: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SingletForm {
    pub terms: Vec<String>,
    pub holds: bool,
}

pub fn kron(field: &FieldSpec, u: &[Felt], v: &[Felt]) -> [Felt; 4] {
    [
        field.mul(u[0], v[0]),
        field.mul(u[0], v[1]),
        field.mul(u[1], v[0]),
        field.mul(u[1], v[1]),
    ]
}

/// Nonzero determinant of the reshaped coefficient matrix.
pub fn is_entangled(field: &FieldSpec, c: &[Felt; 4]) -> bool {
    !field
        .sub(field.mul(c[0], c[3]), field.mul(c[1], c[2]))
        .is_zero()
}

fn to_array(v: Vec<Felt>) -> [Felt; 4] {
    [v[0], v[1], v[2], v[3]]
}

impl TwoParticleSystem {
    pub fn new(q: usize) -> Result<Self> {
        Self::from_spin(SpinSystem::new(q)?)
    }

    pub fn from_spin(spin: SpinSystem) -> Result<Self> {
        let field = spin.field().clone();
        let n = spin.states().len();
        let mut states = Vec::new();
        for r in 0..n {
            for s in 0..n {
                let coords = to_array(
                    canonicalize(
                        &field,
                        &kron(&field, &spin.states()[r].rep, &spin.states()[s].rep),
                    )
                    .expect("tensor of nonzero vectors is nonzero"),
                );
                states.push(TwoState {
                    label: format!("{}{}", spin.label(r), spin.label(s)),
                    coords,
                    entangled: false,
                    factors: Some((r, s)),
                });
            }
        }
        if field.q() == 2 {
            for (label, rep) in PG32_CATALOG.iter().skip(9) {
                states.push(TwoState {
                    label: label.to_string(),
                    coords: rep.map(Felt),
                    entangled: true,
                    factors: None,
                });
            }
        } else {
            let mut ent: Vec<[Felt; 4]> = all_vectors(&field, 4)
                .filter(|v| canonicalize(&field, v).as_deref() == Some(v.as_slice()))
                .map(to_array)
                .filter(|c| is_entangled(&field, c))
                .collect();
            ent.sort();
            for coords in ent {
                states.push(TwoState {
                    label: format_coords(&field, &coords),
                    coords,
                    entangled: true,
                    factors: None,
                });
            }
        }
        let index = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.coords, i))
            .collect();
        Ok(TwoParticleSystem {
            spin,
            states,
            index,
        })
    }

    pub fn spin(&self) -> &SpinSystem {
        &self.spin
    }

    pub fn field(&self) -> &FieldSpec {
        self.spin.field()
    }

    pub fn q(&self) -> usize {
        self.spin.q()
    }

    pub fn states(&self) -> &[TwoState] {
        &self.states
    }

    pub fn product_count(&self) -> usize {
        let n = self.spin.states().len();
        n * n
    }

    pub fn entangled_indices(&self) -> std::ops::Range<usize> {
        self.product_count()..self.states.len()
    }

    pub fn tensor(&self, r: usize, s: usize) -> usize {
        r * self.spin.states().len() + s
    }

    pub fn find(&self, v: &[Felt]) -> Option<usize> {
        let c = canonicalize(self.field(), v)?;
        self.index.get(&to_array(c)).copied()
    }

    /// Accepts a catalog label (`S`, `ab`, `(abc)` ...) or bracketed coordinates.
    pub fn state_index(&self, label: &str) -> Result<usize> {
        let label = label.trim();
        if let Some(i) = self.states.iter().position(|s| s.label == label) {
            return Ok(i);
        }
        let unknown = || GqmError::UnknownLabel(label.to_string());
        let inner = label
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(unknown)?;
        let coords: Vec<Felt> = inner
            .split(',')
            .map(|t| {
                let t = t.trim();
                self.field()
                    .elements()
                    .find(|&x| self.field().name(x) == t)
                    .ok_or_else(unknown)
            })
            .collect::<Result<_>>()?;
        if coords.len() != 4 {
            return Err(GqmError::DimensionMismatch {
                expected: 4,
                got: coords.len(),
            });
        }
        self.find(&coords).ok_or_else(unknown)
    }

    /// Applies one-particle basis changes; `Both` uses the same matrix twice.
    pub fn local_action(&self, m: &Matrix2, particle: Particle, state: usize) -> usize {
        let f = self.field();
        let id: Matrix2 = [Felt::ONE, Felt::ZERO, Felt::ZERO, Felt::ONE];
        let (m1, m2) = match particle {
            Particle::First => (m, &id),
            Particle::Second => (&id, m),
            Particle::Both => (m, m),
        };
        // (M1 ⊗ M2) c, computed on the reshaped matrix as M1 C M2^T
        let c = &self.states[state].coords;
        let mut out = [Felt::ZERO; 4];
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = Felt::ZERO;
                for k in 0..2 {
                    for l in 0..2 {
                        let term = f.mul(f.mul(m1[2 * i + k], m2[2 * j + l]), c[2 * k + l]);
                        acc = f.add(acc, term);
                    }
                }
                out[2 * i + j] = acc;
            }
        }
        self.find(&out)
            .expect("invertible action maps states to states")
    }

    /// Relabels both particles by the same realizable permutation.
    pub fn diagonal_action(
        &self,
        group: &SymmetryGroup,
        perm: &Permutation,
        state: usize,
    ) -> Result<usize> {
        let w = group.witness(perm)?;
        Ok(self.local_action(&w.matrix, Particle::Both, state))
    }

    pub fn diagonal_orbits(&self, group: &SymmetryGroup) -> Vec<Vec<usize>> {
        let mut seen = BTreeSet::new();
        let mut orbits = Vec::new();
        for s in self.entangled_indices() {
            if seen.contains(&s) {
                continue;
            }
            let orbit: BTreeSet<usize> = group
                .elements()
                .iter()
                .map(|g| self.local_action(&g.matrix, Particle::Both, s))
                .collect();
            seen.extend(orbit.iter().copied());
            orbits.push(orbit.into_iter().collect());
        }
        orbits
    }

    /// Orbit of a state under independent relabelings of the two particles.
    pub fn local_orbit(&self, group: &SymmetryGroup, state: usize) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for g in group.elements() {
            let s1 = self.local_action(&g.matrix, Particle::First, state);
            for h in group.elements() {
                out.insert(self.local_action(&h.matrix, Particle::Second, s1));
            }
        }
        out
    }
}

/// Exhaustive product test: does any pair of one-particle vectors tensor to `c`?
pub fn is_product_by_search(field: &FieldSpec, c: &[Felt; 4]) -> bool {
    let target = canonicalize(field, c);
    let vs: Vec<Vec<Felt>> = all_vectors(field, 2).collect();
    vs.iter().any(|u| {
        vs.iter()
            .any(|v| canonicalize(field, &kron(field, u, v)) == target)
    })
}

/// Groups the q = 2 entangled states by their orbits under relabeling both
/// particles with the same permutation: sizes 1, 3 and 2.
pub fn build_multiplets(
    two: &TwoParticleSystem,
    group: &SymmetryGroup,
) -> Result<MultipletCatalog> {
    if two.q() != 2 {
        return Err(GqmError::WrongOrder {
            required: 2,
            got: two.q(),
        });
    }
    let mut orbits = two.diagonal_orbits(group);
    orbits.sort_by_key(Vec::len);
    let names = |o: &Vec<usize>| -> Vec<String> {
        o.iter().map(|&i| two.states()[i].label.clone()).collect()
    };
    let sizes: Vec<usize> = orbits.iter().map(Vec::len).collect();
    let by_size = |n: usize| {
        orbits
            .iter()
            .find(|o| o.len() == n)
            .map(names)
            .unwrap_or_default()
    };
    Ok(MultipletCatalog {
        singlet: by_size(1),
        triplet: by_size(3),
        doublet: by_size(2),
        orbit_sizes: sizes,
    })
}

/// Checks the sum-of-products forms of the q = 2 singlet.
pub fn alternate_singlet_forms(two: &TwoParticleSystem) -> Result<Vec<SingletForm>> {
    if two.q() != 2 {
        return Err(GqmError::WrongOrder {
            required: 2,
            got: two.q(),
        });
    }
    let f = two.field();
    let singlet = two.states()[two.state_index("S")?].coords;
    let forms: [&[&str]; 4] = [
        &["ab", "ba"],
        &["bc", "cb"],
        &["ca", "ac"],
        &["aa", "bb", "cc"],
    ];
    forms
        .iter()
        .map(|terms| {
            let mut acc = [Felt::ZERO; 4];
            for t in terms.iter() {
                let c = two.states()[two.state_index(t)?].coords;
                for k in 0..4 {
                    acc[k] = f.add(acc[k], c[k]);
                }
            }
            Ok(SingletForm {
                terms: terms.iter().map(|t| t.to_string()).collect(),
                holds: acc == singlet,
            })
        })
        .collect()
}

/// One-particle matrix applied to both factors of a product, for cross-checks.
pub fn tensor_of_images(field: &FieldSpec, m: &Matrix2, u: &[Felt], v: &[Felt]) -> [Felt; 4] {
    kron(
        field,
        &apply_matrix(field, m, u),
        &apply_matrix(field, m, v),
    )
}
