//! Incidence structure of PG(3,2), the state space of two GF(2) spins.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::field::{Felt, FieldSpec};
use crate::projective::{all_vectors, ProjPoint};
use crate::{GqmError, Result};

/// Three points whose representatives sum to zero.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct IncidenceLine {
    pub points: [usize; 3],
    pub labels: [String; 3],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Plane {
    pub points: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PlaneReport {
    pub planes: Vec<Plane>,
    /// For each line (same order as the input), the number of planes containing it.
    pub planes_per_line: Vec<usize>,
}

fn require_pg32(field: &FieldSpec, states: &[ProjPoint]) -> Result<()> {
    if field.q() != 2 {
        return Err(GqmError::WrongOrder {
            required: 2,
            got: field.q(),
        });
    }
    let levels = states.first().map_or(0, |s| s.rep.len());
    if levels != 4 || states.len() != 15 {
        return Err(GqmError::WrongLevels {
            required: 4,
            got: levels,
        });
    }
    Ok(())
}

fn vsum(field: &FieldSpec, vs: &[&[Felt]]) -> Vec<Felt> {
    let mut acc = vec![Felt::ZERO; vs[0].len()];
    for v in vs {
        for (a, &x) in acc.iter_mut().zip(v.iter()) {
            *a = field.add(*a, x);
        }
    }
    acc
}

pub fn enumerate_lines(field: &FieldSpec, states: &[ProjPoint]) -> Result<Vec<IncidenceLine>> {
    require_pg32(field, states)?;
    let n = states.len();
    let mut lines = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let s = vsum(field, &[&states[i].rep, &states[j].rep, &states[k].rep]);
                if s.iter().all(|x| x.is_zero()) {
                    lines.push(IncidenceLine {
                        points: [i, j, k],
                        labels: [
                            states[i].label.clone(),
                            states[j].label.clone(),
                            states[k].label.clone(),
                        ],
                    });
                }
            }
        }
    }
    Ok(lines)
}

/// Planes are the kernels of the fifteen nonzero dual vectors.
pub fn enumerate_planes(
    field: &FieldSpec,
    states: &[ProjPoint],
    lines: &[IncidenceLine],
) -> Result<PlaneReport> {
    require_pg32(field, states)?;
    let planes: Vec<Plane> = all_vectors(field, 4)
        .map(|d| Plane {
            points: (0..states.len())
                .filter(|&i| field.dot(&d, &states[i].rep).is_zero())
                .collect(),
        })
        .collect();
    let planes_per_line = lines
        .iter()
        .map(|l| {
            planes
                .iter()
                .filter(|p| l.points.iter().all(|x| p.points.contains(x)))
                .count()
        })
        .collect();
    Ok(PlaneReport {
        planes,
        planes_per_line,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Decomposition {
    pub state: String,
    /// Three-term sums of product points equal to the state whose terms share no row or column.
    pub transversals: Vec<[String; 3]>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GridReport {
    pub grid_lines: Vec<[String; 3]>,
    pub row_lines: usize,
    pub column_lines: usize,
    pub decompositions: Vec<Decomposition>,
    pub ok: bool,
}

/// Checks that the product states (labels `rs`, row `r`, column `s`) form a
/// 3×3 grid of six lines and that every other state is a transversal sum of
/// three of them.
pub fn product_grid_check(
    field: &FieldSpec,
    states: &[ProjPoint],
    lines: &[IncidenceLine],
) -> Result<GridReport> {
    require_pg32(field, states)?;
    let is_product =
        |s: &ProjPoint| s.label.len() == 2 && s.label.chars().all(|c| c.is_ascii_lowercase());
    let product: BTreeSet<usize> = (0..states.len())
        .filter(|&i| is_product(&states[i]))
        .collect();
    let row = |i: usize| states[i].label.as_bytes()[0];
    let col = |i: usize| states[i].label.as_bytes()[1];

    let grid: Vec<&IncidenceLine> = lines
        .iter()
        .filter(|l| l.points.iter().all(|p| product.contains(p)))
        .collect();
    let row_lines = grid
        .iter()
        .filter(|l| l.points.iter().all(|&p| row(p) == row(l.points[0])))
        .count();
    let column_lines = grid
        .iter()
        .filter(|l| l.points.iter().all(|&p| col(p) == col(l.points[0])))
        .count();

    let prod: Vec<usize> = product.iter().copied().collect();
    let mut decompositions = Vec::new();
    for (si, s) in states.iter().enumerate() {
        if product.contains(&si) {
            continue;
        }
        let mut transversals = Vec::new();
        for (a, &i) in prod.iter().enumerate() {
            for (b, &j) in prod.iter().enumerate().skip(a + 1) {
                for &k in prod.iter().skip(b + 1) {
                    let sum = vsum(field, &[&states[i].rep, &states[j].rep, &states[k].rep]);
                    let rows: BTreeSet<u8> = [i, j, k].iter().map(|&x| row(x)).collect();
                    let cols: BTreeSet<u8> = [i, j, k].iter().map(|&x| col(x)).collect();
                    if sum == s.rep && rows.len() == 3 && cols.len() == 3 {
                        transversals.push([
                            states[i].label.clone(),
                            states[j].label.clone(),
                            states[k].label.clone(),
                        ]);
                    }
                }
            }
        }
        decompositions.push(Decomposition {
            state: s.label.clone(),
            transversals,
        });
    }
    let ok = product.len() == 9
        && grid.len() == 6
        && row_lines == 3
        && column_lines == 3
        && decompositions.iter().all(|d| !d.transversals.is_empty());
    Ok(GridReport {
        grid_lines: grid.iter().map(|l| l.labels.clone()).collect(),
        row_lines,
        column_lines,
        decompositions,
        ok,
    })
}
