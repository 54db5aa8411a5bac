//! Permutations of state labels, and the reference groups S_n and A_n.
//!
//! Products compose right to left: `(g * h)(i) = g(h(i))`, so
//! `(ab)(bc) = (abc)`.

use std::fmt;
use std::ops::Mul;

use serde::{Serialize, Serializer};

use crate::{GqmError, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u8>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n as u8).collect())
    }

    /// `images[i]` is where `i` goes.
    pub fn from_images(images: Vec<u8>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            let slot = seen
                .get_mut(x as usize)
                .ok_or_else(|| GqmError::BadPermutation(format!("{images:?}")))?;
            if *slot {
                return Err(GqmError::BadPermutation(format!("{images:?}")));
            }
            *slot = true;
        }
        Ok(Permutation(images))
    }

    pub fn images(&self) -> &[u8] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u8; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// All cycles including fixed points, each starting at its smallest element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    /// Cycle lengths in decreasing order, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    /// +1 for even, -1 for odd.
    pub fn parity(&self) -> i8 {
        let transpositions: usize = self.cycles().iter().map(|c| c.len() - 1).sum();
        if transpositions.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn order(&self) -> usize {
        self.cycle_type().into_iter().fold(1, num_integer::lcm)
    }

    /// Parses cycle notation over the letters `a, b, c, ...`: `(ab)(cd)`,
    /// `(abc)`; `()`, `e` and `id` denote the identity. Overlapping cycles
    /// are multiplied, so `(ab)(bc)` parses as `(abc)`.
    pub fn parse(s: &str, degree: usize) -> Result<Self> {
        let bad = || GqmError::BadPermutation(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() || t == "()" || t == "e" || t == "id" {
            return Ok(Permutation::identity(degree));
        }
        let mut rest = t.as_str();
        let mut cycles = Vec::new();
        while !rest.is_empty() {
            let inner = rest.strip_prefix('(').ok_or_else(bad)?;
            let end = inner.find(')').ok_or_else(bad)?;
            let cycle: Vec<usize> = inner[..end]
                .chars()
                .map(|c| {
                    let k = (c as u32).wrapping_sub('a' as u32) as usize;
                    (c.is_ascii_lowercase() && k < degree)
                        .then_some(k)
                        .ok_or_else(bad)
                })
                .collect::<Result<_>>()?;
            cycles.push(cycle);
            rest = &inner[end + 1..];
        }
        // compose right to left
        let mut perm = Permutation::identity(degree);
        for cycle in cycles.iter().rev() {
            let mut step: Vec<u8> = (0..degree as u8).collect();
            let mut local = vec![false; degree];
            for (i, &x) in cycle.iter().enumerate() {
                if local[x] {
                    return Err(bad());
                }
                local[x] = true;
                step[x] = cycle[(i + 1) % cycle.len()] as u8;
            }
            perm = &Permutation(step) * &perm;
        }
        Ok(perm)
    }

    /// Cycle notation with letters, fixed points omitted; identity is `e`.
    pub fn to_cycle_string(&self) -> String {
        let s: String = self
            .cycles()
            .into_iter()
            .filter(|c| c.len() > 1)
            .map(|c| {
                let letters: String = c.iter().map(|&i| (b'a' + i as u8) as char).collect();
                format!("({letters})")
            })
            .collect();
        if s.is_empty() {
            "e".to_string()
        } else {
            s
        }
    }
}

impl Mul for &Permutation {
    type Output = Permutation;
    fn mul(self, rhs: &Permutation) -> Permutation {
        Permutation(rhs.0.iter().map(|&x| self.0[x as usize]).collect())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycle_string())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycle_string())
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_cycle_string())
    }
}

/// All n! permutations, in lexicographic order of their image lists.
pub fn symmetric_group(n: usize) -> Vec<Permutation> {
    let mut cur: Vec<u8> = (0..n as u8).collect();
    let mut out = vec![Permutation(cur.clone())];
    // next lexicographic permutation
    while let Some(i) = (0..n.saturating_sub(1))
        .rev()
        .find(|&i| cur[i] < cur[i + 1])
    {
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(Permutation(cur.clone()));
    }
    out
}

pub fn alternating_group(n: usize) -> Vec<Permutation> {
    symmetric_group(n)
        .into_iter()
        .filter(|p| p.parity() == 1)
        .collect()
}

/// Integer partitions of `n` in decreasing lexicographic order.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for k in (1..=max.min(n)).rev() {
            prefix.push(k);
            go(n - k, k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_is_right_to_left() {
        let ab = Permutation::parse("(ab)", 3).unwrap();
        let bc = Permutation::parse("(bc)", 3).unwrap();
        assert_eq!((&ab * &bc).to_cycle_string(), "(abc)");
        assert_eq!(
            Permutation::parse("(ab)(bc)", 3).unwrap().to_cycle_string(),
            "(abc)"
        );
    }

    #[test]
    fn parse_and_print() {
        let p = Permutation::parse("(ab)(cd)", 5).unwrap();
        assert_eq!(p.to_cycle_string(), "(ab)(cd)");
        assert_eq!(p.cycle_type(), vec![2, 2, 1]);
        assert_eq!(p.parity(), 1);
        assert_eq!(p.order(), 2);
        assert!(Permutation::parse("e", 4).unwrap().is_identity());
        assert!(Permutation::parse("(az)", 4).is_err());
        assert!(Permutation::parse("(aa)", 4).is_err());
        assert!(Permutation::parse("ab", 4).is_err());
        assert!(Permutation::from_images(vec![0, 0]).is_err());
    }

    #[test]
    fn group_sizes() {
        assert_eq!(symmetric_group(1).len(), 1);
        assert_eq!(symmetric_group(4).len(), 24);
        assert_eq!(symmetric_group(6).len(), 720);
        assert_eq!(alternating_group(5).len(), 60);
        let s5 = symmetric_group(5);
        let distinct: std::collections::BTreeSet<_> = s5.iter().collect();
        assert_eq!(distinct.len(), 120);
    }

    #[test]
    fn partition_counts() {
        assert_eq!(partitions(6).len(), 11);
        assert_eq!(partitions(5).len(), 7);
        assert_eq!(partitions(3), vec![vec![3], vec![2, 1], vec![1, 1, 1]]);
    }

    #[test]
    fn inverse_and_order() {
        for p in symmetric_group(5) {
            assert!((&p * &p.inverse()).is_identity());
            let mut x = p.clone();
            for _ in 1..p.order() {
                x = &x * &p;
            }
            assert!(x.is_identity());
        }
    }
}
