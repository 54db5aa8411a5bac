//! Published GQM(2,2) and PGL(2,5) tables, kept as literal data so the
//! computed tables can be compared against them entry by entry.

use crate::rational::Rational;

/// (observable, state, P(+), P(-), expectation) for q = 2.
pub const ONE_PARTICLE: [(&str, &str, &str); 9] = [
    ("A_ab", "a", "0 1 -1"),
    ("A_ab", "b", "1 0 1"),
    ("A_ab", "c", "1/2 1/2 0"),
    ("A_bc", "a", "1/2 1/2 0"),
    ("A_bc", "b", "0 1 -1"),
    ("A_bc", "c", "1 0 1"),
    ("A_ca", "a", "1 0 1"),
    ("A_ca", "b", "1/2 1/2 0"),
    ("A_ca", "c", "0 1 -1"),
];

/// (product observable, state, "P(++) P(+-) P(-+) P(--) E") for the six
/// entangled q = 2 states.
pub const TWO_PARTICLE: [(&str, &str, &str); 54] = [
    ("X1X2", "S", "0 1/2 1/2 0 -1"),
    ("X1X2", "(ab)", "1/3 1/3 1/3 0 -1/3"),
    ("X1X2", "(bc)", "1/2 0 0 1/2 1"),
    ("X1X2", "(ca)", "0 1/3 1/3 1/3 -1/3"),
    ("X1X2", "(abc)", "1/3 0 1/3 1/3 1/3"),
    ("X1X2", "(acb)", "1/3 1/3 0 1/3 1/3"),
    ("X1Y2", "S", "1/3 1/3 0 1/3 1/3"),
    ("X1Y2", "(ab)", "1/2 0 0 1/2 1"),
    ("X1Y2", "(bc)", "0 1/3 1/3 1/3 -1/3"),
    ("X1Y2", "(ca)", "1/3 1/3 1/3 0 -1/3"),
    ("X1Y2", "(abc)", "0 1/2 1/2 0 -1"),
    ("X1Y2", "(acb)", "1/3 0 1/3 1/3 1/3"),
    ("X1Z2", "S", "1/3 0 1/3 1/3 1/3"),
    ("X1Z2", "(ab)", "0 1/3 1/3 1/3 -1/3"),
    ("X1Z2", "(bc)", "1/3 1/3 1/3 0 -1/3"),
    ("X1Z2", "(ca)", "1/2 0 0 1/2 1"),
    ("X1Z2", "(abc)", "1/3 1/3 0 1/3 1/3"),
    ("X1Z2", "(acb)", "0 1/2 1/2 0 -1"),
    ("Y1X2", "S", "1/3 0 1/3 1/3 1/3"),
    ("Y1X2", "(ab)", "1/2 0 0 1/2 1"),
    ("Y1X2", "(bc)", "0 1/3 1/3 1/3 -1/3"),
    ("Y1X2", "(ca)", "1/3 1/3 1/3 0 -1/3"),
    ("Y1X2", "(abc)", "1/3 1/3 0 1/3 1/3"),
    ("Y1X2", "(acb)", "0 1/2 1/2 0 -1"),
    ("Y1Y2", "S", "0 1/2 1/2 0 -1"),
    ("Y1Y2", "(ab)", "0 1/3 1/3 1/3 -1/3"),
    ("Y1Y2", "(bc)", "1/3 1/3 1/3 0 -1/3"),
    ("Y1Y2", "(ca)", "1/2 0 0 1/2 1"),
    ("Y1Y2", "(abc)", "1/3 0 1/3 1/3 1/3"),
    ("Y1Y2", "(acb)", "1/3 1/3 0 1/3 1/3"),
    ("Y1Z2", "S", "1/3 1/3 0 1/3 1/3"),
    ("Y1Z2", "(ab)", "1/3 1/3 1/3 0 -1/3"),
    ("Y1Z2", "(bc)", "1/2 0 0 1/2 1"),
    ("Y1Z2", "(ca)", "0 1/3 1/3 1/3 -1/3"),
    ("Y1Z2", "(abc)", "0 1/2 1/2 0 -1"),
    ("Y1Z2", "(acb)", "1/3 0 1/3 1/3 1/3"),
    ("Z1X2", "S", "1/3 1/3 0 1/3 1/3"),
    ("Z1X2", "(ab)", "0 1/3 1/3 1/3 -1/3"),
    ("Z1X2", "(bc)", "1/3 1/3 1/3 0 -1/3"),
    ("Z1X2", "(ca)", "1/2 0 0 1/2 1"),
    ("Z1X2", "(abc)", "0 1/2 1/2 0 -1"),
    ("Z1X2", "(acb)", "1/3 0 1/3 1/3 1/3"),
    ("Z1Y2", "S", "1/3 0 1/3 1/3 1/3"),
    ("Z1Y2", "(ab)", "1/3 1/3 1/3 0 -1/3"),
    ("Z1Y2", "(bc)", "1/2 0 0 1/2 1"),
    ("Z1Y2", "(ca)", "0 1/3 1/3 1/3 -1/3"),
    ("Z1Y2", "(abc)", "1/3 1/3 0 1/3 1/3"),
    ("Z1Y2", "(acb)", "0 1/2 1/2 0 -1"),
    ("Z1Z2", "S", "0 1/2 1/2 0 -1"),
    ("Z1Z2", "(ab)", "1/2 0 0 1/2 1"),
    ("Z1Z2", "(bc)", "0 1/3 1/3 1/3 -1/3"),
    ("Z1Z2", "(ca)", "1/3 1/3 1/3 0 -1/3"),
    ("Z1Z2", "(abc)", "1/3 0 1/3 1/3 1/3"),
    ("Z1Z2", "(acb)", "1/3 1/3 0 1/3 1/3"),
];

/// Cycle types of S6 with their sign, size in S6, number of PGL(2,5)
/// elements, and the S5 class they correspond to (empty when none).
pub type CensusEntry = (&'static [usize], i8, usize, usize, &'static [usize]);

pub const SIX_POINT_CENSUS: [CensusEntry; 11] = [
    (&[6], -1, 120, 20, &[3, 2]),
    (&[5, 1], 1, 144, 24, &[5]),
    (&[4, 1, 1], -1, 90, 30, &[4, 1]),
    (&[4, 2], 1, 90, 0, &[]),
    (&[3, 3], 1, 40, 20, &[3, 1, 1]),
    (&[3, 2, 1], -1, 120, 0, &[]),
    (&[2, 2, 2], -1, 15, 10, &[2, 1, 1, 1]),
    (&[2, 2, 1, 1], 1, 45, 15, &[2, 2, 1]),
    (&[3, 1, 1, 1], 1, 40, 0, &[]),
    (&[2, 1, 1, 1, 1], -1, 15, 0, &[]),
    (&[1, 1, 1, 1, 1, 1], 1, 1, 1, &[1, 1, 1, 1, 1]),
];

/// Splits a space-separated row of fractions.
pub fn parse_row(s: &str) -> Vec<Rational> {
    s.split_whitespace()
        .map(|t| t.parse().expect("reference data is well formed"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::r;

    #[test]
    fn rows_are_normalized() {
        for (_, _, row) in ONE_PARTICLE {
            let v = parse_row(row);
            assert_eq!(v[0] + v[1], r(1, 1));
            assert_eq!(v[0] - v[1], v[2]);
        }
        for (_, _, row) in TWO_PARTICLE {
            let v = parse_row(row);
            assert_eq!(v[0] + v[1] + v[2] + v[3], r(1, 1));
            assert_eq!(v[0] - v[1] - v[2] + v[3], v[4]);
        }
    }

    #[test]
    fn census_totals() {
        assert_eq!(SIX_POINT_CENSUS.iter().map(|c| c.2).sum::<usize>(), 720);
        assert_eq!(SIX_POINT_CENSUS.iter().map(|c| c.3).sum::<usize>(), 120);
    }
}
