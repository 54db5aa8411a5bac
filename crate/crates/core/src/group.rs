//! Basis changes of GF(q)^2 as permutations of the q+1 state labels.
//!
//! An invertible 2×2 matrix sends each state to another state, and scalar
//! multiples act identically, so the label permutations realized by basis
//! changes form a copy of PGL(2,q). Duals transform by the inverse, which
//! induces the same permutation on dual labels, so brackets are preserved.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::field::{Felt, FieldSpec};
use crate::observable::SpinSystem;
use crate::perm::{partitions, symmetric_group, Permutation};
use crate::projective::canonicalize_first;
use crate::{GqmError, Result};

/// Row-major `[a, b, c, d]` for the matrix `[[a, b], [c, d]]`.
pub type Matrix2 = [Felt; 4];

#[derive(Debug, Clone, Serialize)]
pub struct GroupElt {
    /// Representative whose first nonzero entry (row-major) is 1.
    pub matrix: Matrix2,
    pub perm: Permutation,
    pub order: usize,
    pub cycle_type: Vec<usize>,
    pub parity: i8,
}

#[derive(Debug, Clone)]
pub struct SymmetryGroup {
    degree: usize,
    elements: Vec<GroupElt>,
    by_perm: HashMap<Permutation, usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ImageKind {
    Symmetric,
    Alternating,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PermutationImage {
    pub degree: usize,
    pub order: usize,
    pub kind: ImageKind,
    pub even: usize,
    pub odd: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ClassInfo {
    pub element_order: usize,
    pub size: usize,
    pub cycle_type: Vec<usize>,
    pub parity: i8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupFingerprint {
    pub order: usize,
    pub classes: Vec<ClassInfo>,
    pub even: usize,
    pub odd: usize,
    /// Number of elements of each cycle type, types in decreasing order.
    pub cycle_census: Vec<(Vec<usize>, usize)>,
}

impl GroupFingerprint {
    /// Sorted multiset of (element order, class size); independent of the action.
    pub fn abstract_signature(&self) -> Vec<(usize, usize)> {
        let mut sig: Vec<(usize, usize)> = self
            .classes
            .iter()
            .map(|c| (c.element_order, c.size))
            .collect();
        sig.sort_unstable();
        sig
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub cycle_type: Vec<usize>,
    pub sign: i8,
    pub symmetric_count: usize,
    pub group_count: usize,
}

pub fn det(field: &FieldSpec, m: &Matrix2) -> Felt {
    field.sub(field.mul(m[0], m[3]), field.mul(m[1], m[2]))
}

pub fn apply_matrix(field: &FieldSpec, m: &Matrix2, v: &[Felt]) -> Vec<Felt> {
    vec![
        field.add(field.mul(m[0], v[0]), field.mul(m[1], v[1])),
        field.add(field.mul(m[2], v[0]), field.mul(m[3], v[1])),
    ]
}

/// Row vector times matrix: how a dual transforms under the inverse.
pub fn apply_matrix_right(field: &FieldSpec, d: &[Felt], m: &Matrix2) -> Vec<Felt> {
    vec![
        field.add(field.mul(d[0], m[0]), field.mul(d[1], m[2])),
        field.add(field.mul(d[0], m[1]), field.mul(d[1], m[3])),
    ]
}

pub fn invert(field: &FieldSpec, m: &Matrix2) -> Result<Matrix2> {
    let k = field.inv(det(field, m))?;
    Ok([
        field.mul(k, m[3]),
        field.mul(k, field.neg(m[1])),
        field.mul(k, field.neg(m[2])),
        field.mul(k, m[0]),
    ])
}

pub fn format_matrix(field: &FieldSpec, m: &Matrix2) -> String {
    format!(
        "[[{}, {}], [{}, {}]]",
        field.name(m[0]),
        field.name(m[1]),
        field.name(m[2]),
        field.name(m[3])
    )
}

/// One representative per scalar class of invertible matrices.
pub fn enumerate_pgl(field: &FieldSpec) -> Vec<Matrix2> {
    let q = field.q();
    let mut out = Vec::new();
    for code in 0..q.pow(4) {
        let m: Matrix2 = std::array::from_fn(|i| Felt(((code / q.pow(i as u32)) % q) as u8));
        if det(field, &m).is_zero() {
            continue;
        }
        if canonicalize_first(field, &m).as_deref() == Some(&m[..]) {
            out.push(m);
        }
    }
    out
}

impl SymmetryGroup {
    pub fn new(system: &SpinSystem) -> Result<Self> {
        let field = system.field();
        let states = system.states();
        let mut elements = Vec::new();
        for m in enumerate_pgl(field) {
            let images = states
                .iter()
                .map(|s| {
                    system
                        .find_state(&apply_matrix(field, &m, &s.rep))
                        .map(|i| i as u8)
                        .ok_or_else(|| GqmError::Invalid("matrix image is not a state".into()))
                })
                .collect::<Result<Vec<u8>>>()?;
            let perm = Permutation::from_images(images)?;
            elements.push(GroupElt {
                matrix: m,
                order: perm.order(),
                cycle_type: perm.cycle_type(),
                parity: perm.parity(),
                perm,
            });
        }
        elements.sort_by(|a, b| a.perm.cmp(&b.perm));
        let by_perm: HashMap<Permutation, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.perm.clone(), i))
            .collect();
        if by_perm.len() != elements.len() {
            return Err(GqmError::Invalid(
                "two scalar classes induce the same permutation".into(),
            ));
        }
        Ok(SymmetryGroup {
            degree: states.len(),
            elements,
            by_perm,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[GroupElt] {
        &self.elements
    }

    pub fn permutations(&self) -> Vec<Permutation> {
        self.elements.iter().map(|e| e.perm.clone()).collect()
    }

    pub fn contains(&self, perm: &Permutation) -> bool {
        self.by_perm.contains_key(perm)
    }

    /// The matrix realizing a label permutation.
    pub fn witness(&self, perm: &Permutation) -> Result<&GroupElt> {
        if perm.degree() != self.degree {
            return Err(GqmError::DimensionMismatch {
                expected: self.degree,
                got: perm.degree(),
            });
        }
        self.by_perm
            .get(perm)
            .map(|&i| &self.elements[i])
            .ok_or_else(|| GqmError::Unrealizable(perm.to_cycle_string()))
    }

    pub fn image(&self) -> PermutationImage {
        permutation_image(self.degree, &self.permutations())
    }
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

pub fn permutation_image(degree: usize, perms: &[Permutation]) -> PermutationImage {
    let even = perms.iter().filter(|p| p.parity() == 1).count();
    let order = perms.len();
    let kind = if order == factorial(degree) {
        ImageKind::Symmetric
    } else if even == order && 2 * order == factorial(degree) {
        ImageKind::Alternating
    } else {
        ImageKind::Other
    };
    PermutationImage {
        degree,
        order,
        kind,
        even,
        odd: order - even,
    }
}

/// Conjugacy classes as index lists into `perms`, by direct conjugation.
/// Fails if the set is not closed under multiplication.
pub fn conjugacy_classes(perms: &[Permutation]) -> Result<Vec<Vec<usize>>> {
    let index: HashMap<&Permutation, usize> =
        perms.iter().enumerate().map(|(i, p)| (p, i)).collect();
    for g in perms {
        for h in perms {
            if !index.contains_key(&(g * h)) {
                return Err(GqmError::NotClosed);
            }
        }
    }
    let inverses: Vec<Permutation> = perms.iter().map(Permutation::inverse).collect();
    let mut class_of = vec![usize::MAX; perms.len()];
    let mut classes = Vec::new();
    for i in 0..perms.len() {
        if class_of[i] != usize::MAX {
            continue;
        }
        let id = classes.len();
        let mut members = Vec::new();
        for (h, h_inv) in perms.iter().zip(&inverses) {
            let c = index[&(&(h * &perms[i]) * h_inv)];
            if class_of[c] == usize::MAX {
                class_of[c] = id;
                members.push(c);
            }
        }
        members.sort_unstable();
        classes.push(members);
    }
    Ok(classes)
}

pub fn fingerprint(perms: &[Permutation]) -> Result<GroupFingerprint> {
    let classes = conjugacy_classes(perms)?;
    let mut infos: Vec<ClassInfo> = classes
        .iter()
        .map(|c| {
            let p = &perms[c[0]];
            ClassInfo {
                element_order: p.order(),
                size: c.len(),
                cycle_type: p.cycle_type(),
                parity: p.parity(),
            }
        })
        .collect();
    infos.sort();
    let mut census: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for p in perms {
        *census.entry(p.cycle_type()).or_default() += 1;
    }
    let even = perms.iter().filter(|p| p.parity() == 1).count();
    Ok(GroupFingerprint {
        order: perms.len(),
        classes: infos,
        even,
        odd: perms.len() - even,
        cycle_census: census.into_iter().rev().collect(),
    })
}

/// Abstract comparison: same order and same (element order, class size) multiset.
pub fn fingerprint_match(a: &GroupFingerprint, b: &GroupFingerprint) -> bool {
    a.order == b.order && a.abstract_signature() == b.abstract_signature()
}

/// Partitions of 6 in the order used by the published census.
const SIX_ORDER: [&[usize]; 11] = [
    &[6],
    &[5, 1],
    &[4, 1, 1],
    &[4, 2],
    &[3, 3],
    &[3, 2, 1],
    &[2, 2, 2],
    &[2, 2, 1, 1],
    &[3, 1, 1, 1],
    &[2, 1, 1, 1, 1],
    &[1, 1, 1, 1, 1, 1],
];

/// For each cycle type of S_n (n = degree), its size in S_n and in the group.
/// S_n is enumerated directly, so keep the degree small.
pub fn cycle_census(group: &SymmetryGroup) -> Vec<CensusRow> {
    let n = group.degree();
    let types: Vec<Vec<usize>> = if n == 6 {
        SIX_ORDER.iter().map(|t| t.to_vec()).collect()
    } else {
        partitions(n)
    };
    let mut sym: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for p in symmetric_group(n) {
        *sym.entry(p.cycle_type()).or_default() += 1;
    }
    let mut ours: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for e in group.elements() {
        *ours.entry(e.perm.cycle_type()).or_default() += 1;
    }
    types
        .into_iter()
        .map(|t| {
            let sign = if (n - t.len()).is_multiple_of(2) {
                1
            } else {
                -1
            };
            CensusRow {
                sign,
                symmetric_count: sym.get(&t).copied().unwrap_or(0),
                group_count: ours.get(&t).copied().unwrap_or(0),
                cycle_type: t,
            }
        })
        .collect()
}

/// Renders a cycle type like `(4,1,1)`, or `(1^6)` for the identity.
pub fn format_cycle_type(t: &[usize]) -> String {
    if t.len() > 1 && t.iter().all(|&x| x == 1) {
        return format!("(1^{})", t.len());
    }
    let parts: Vec<String> = t.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::alternating_group;

    fn group(q: usize) -> (SpinSystem, SymmetryGroup) {
        let sys = SpinSystem::new(q).unwrap();
        let g = SymmetryGroup::new(&sys).unwrap();
        (sys, g)
    }

    #[test]
    fn orders() {
        for (q, order) in [(2, 6), (3, 24), (4, 60), (5, 120), (7, 336), (8, 504)] {
            assert_eq!(group(q).1.order(), order, "q = {q}");
        }
    }

    #[test]
    fn images() {
        assert_eq!(group(2).1.image().kind, ImageKind::Symmetric);
        assert_eq!(group(3).1.image().kind, ImageKind::Symmetric);
        let four = group(4).1.image();
        assert_eq!((four.kind, four.odd), (ImageKind::Alternating, 0));
        let five = group(5).1.image();
        assert_eq!((five.kind, five.even, five.odd), (ImageKind::Other, 60, 60));
    }

    #[test]
    fn abstract_matches() {
        let s = |n| fingerprint(&symmetric_group(n)).unwrap();
        let a = |n| fingerprint(&alternating_group(n)).unwrap();
        let fp = |q| fingerprint(&group(q).1.permutations()).unwrap();
        assert!(fingerprint_match(&fp(2), &s(3)));
        assert!(fingerprint_match(&fp(3), &s(4)));
        assert!(fingerprint_match(&fp(4), &a(5)));
        assert!(fingerprint_match(&fp(5), &s(5)));
        assert!(!fingerprint_match(&fp(5), &a(5)));
        assert!(!fingerprint_match(&fp(3), &a(4)));
        assert_eq!(fp(5).classes.len(), 7);
    }

    #[test]
    fn closure_failure_detected() {
        let two = vec![
            Permutation::identity(3),
            Permutation::parse("(abc)", 3).unwrap(),
        ];
        assert_eq!(conjugacy_classes(&two), Err(GqmError::NotClosed));
    }

    #[test]
    fn witnesses_act_correctly() {
        for q in [2, 3, 4, 5] {
            let (sys, g) = group(q);
            let f = sys.field();
            for e in g.elements() {
                assert!(!det(f, &e.matrix).is_zero());
                let inv = invert(f, &e.matrix).unwrap();
                for (i, s) in sys.states().iter().enumerate() {
                    let img = sys.find_state(&apply_matrix(f, &e.matrix, &s.rep)).unwrap();
                    assert_eq!(img, e.perm.apply(i));
                    // duals move by the inverse and land on the moved label
                    let d = apply_matrix_right(f, &sys.duals()[i].rep, &inv);
                    let expect = &sys.duals()[e.perm.apply(i)].rep;
                    assert!(f.nonzero().any(|k| f.scale(k, expect) == d));
                }
            }
        }
    }

    #[test]
    fn scalar_multiples_canonicalize_together() {
        for q in [2, 3, 4, 5] {
            let (sys, g) = group(q);
            let f = sys.field();
            for e in g.elements() {
                for k in f.nonzero() {
                    let scaled: Vec<Felt> = f.scale(k, &e.matrix);
                    assert_eq!(canonicalize_first(f, &scaled).unwrap(), e.matrix.to_vec());
                }
            }
        }
    }

    #[test]
    fn even_half_of_q5_is_a5() {
        let (_, g) = group(5);
        let even: Vec<Permutation> = g
            .permutations()
            .into_iter()
            .filter(|p| p.parity() == 1)
            .collect();
        assert_eq!(even.len(), 60);
        let fp = fingerprint(&even).unwrap();
        assert!(fingerprint_match(
            &fp,
            &fingerprint(&alternating_group(5)).unwrap()
        ));
    }

    #[test]
    fn q4_rejects_odd_permutations() {
        let (_, g) = group(4);
        let ab = Permutation::parse("(ab)", 5).unwrap();
        assert!(matches!(g.witness(&ab), Err(GqmError::Unrealizable(_))));
        let abc = Permutation::parse("(abc)", 5).unwrap();
        assert!(g.witness(&abc).is_ok());
        assert!(matches!(
            g.witness(&Permutation::identity(4)),
            Err(GqmError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn q2_witness_for_swap() {
        // swapping a and b is realized by the antidiagonal matrix
        let (_, g) = group(2);
        let w = g.witness(&Permutation::parse("(ab)", 3).unwrap()).unwrap();
        assert_eq!(w.matrix, [Felt(0), Felt(1), Felt(1), Felt(0)]);
    }

    #[test]
    fn six_point_census() {
        let (_, g) = group(5);
        let rows = cycle_census(&g);
        let sym: Vec<usize> = rows.iter().map(|r| r.symmetric_count).collect();
        let ours: Vec<usize> = rows.iter().map(|r| r.group_count).collect();
        assert_eq!(sym, vec![120, 144, 90, 90, 40, 120, 15, 45, 40, 15, 1]);
        assert_eq!(ours, vec![20, 24, 30, 0, 20, 0, 10, 15, 0, 0, 1]);
        assert_eq!(sym.iter().sum::<usize>(), 720);
        assert_eq!(ours.iter().sum::<usize>(), 120);
        let signs: Vec<i8> = rows.iter().map(|r| r.sign).collect();
        assert_eq!(signs, vec![-1, 1, -1, 1, 1, -1, -1, 1, 1, -1, 1]);
        assert_eq!(format_cycle_type(&rows[10].cycle_type), "(1^6)");
        assert_eq!(format_cycle_type(&rows[2].cycle_type), "(4,1,1)");
    }

    #[test]
    fn census_counts_match_class_formula() {
        // n! / prod(k^m_k m_k!) against direct enumeration
        for n in 1..=6 {
            let mut counts: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
            for p in symmetric_group(n) {
                *counts.entry(p.cycle_type()).or_default() += 1;
            }
            for t in partitions(n) {
                let mut mult: BTreeMap<usize, usize> = BTreeMap::new();
                for &k in &t {
                    *mult.entry(k).or_default() += 1;
                }
                let denom: usize = mult
                    .iter()
                    .map(|(&k, &m)| k.pow(m as u32) * factorial(m))
                    .product();
                assert_eq!(counts[&t], factorial(n) / denom);
            }
        }
    }
}
