//! Tabulated Galois fields GF(p^n).
//!
//! Elements are dense indices: the element with polynomial coefficients
//! `c_0 + c_1 x + ... + c_{n-1} x^{n-1}` (over GF(p)) has index
//! `c_0 + c_1 p + ... + c_{n-1} p^{n-1}`. Index 0 is the additive identity and
//! index 1 the multiplicative identity. For GF(4) built on `x^2 + x + 1` the
//! indices 0, 1, 2, 3 are `0, 1, ω, ω²`.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Largest field order accepted unless a caller raises the limit.
pub const DEFAULT_FIELD_LIMIT: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("{0} is not a prime power")]
    NotPrimePower(usize),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{n} exceeds the configured limit of {limit}")]
    TooLarge { p: u32, n: u32, limit: usize },
    #[error("polynomial {0:?} is not monic of degree {1} over GF({2})")]
    BadPolynomial(Vec<u32>, u32, u32),
    #[error("polynomial {0:?} is reducible over GF({1})")]
    Reducible(Vec<u32>, u32),
    #[error("division by the zero element")]
    DivisionByZero,
}

/// Index of an element inside its [`FieldSpec`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize)]
pub struct Felt(pub u8);

impl Felt {
    pub const ZERO: Felt = Felt(0);
    pub const ONE: Felt = Felt(1);

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// The absolute value of a field element: 0 for the zero element, 1 otherwise.
pub fn abs_value(k: Felt) -> u32 {
    u32::from(!k.is_zero())
}

#[derive(Clone, PartialEq, Eq)]
pub struct FieldSpec {
    p: u32,
    n: u32,
    q: usize,
    irreducible: Vec<u32>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    names: Vec<String>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.n)
    }
}

pub fn is_prime(p: u32) -> bool {
    p >= 2
        && (2..)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

/// Factorizes a prime power `q = p^n`; `None` otherwise.
pub fn prime_power(q: usize) -> Option<(u32, u32)> {
    let q32 = u32::try_from(q).ok()?;
    let p = (2..=q32).find(|d| q32 % d == 0)?;
    let mut m = q32;
    let mut n = 0;
    while m % p == 0 {
        m /= p;
        n += 1;
    }
    (m == 1).then_some((p, n))
}

// Polynomials over GF(p), coefficients low to high, no trailing zeros except the zero polynomial.
fn poly_trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = poly_trim(a.to_vec());
    let b = poly_trim(b.to_vec());
    let db = b.len() - 1;
    let lead_inv = mod_inv(b[db], p);
    while r.len() > db && !(r.len() == 1 && r[0] == 0) {
        let dr = r.len() - 1;
        let factor = r[dr] * lead_inv % p;
        let shift = dr - db;
        for (i, &bc) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - factor * bc % p) % p;
        }
        r = poly_trim(r);
    }
    r
}

fn mod_inv(a: u32, p: u32) -> u32 {
    (1..p)
        .find(|x| a * x % p == 1)
        .expect("inverse in prime field")
}

fn monic_of_degree(d: u32, lower: usize, p: u32) -> Vec<u32> {
    let mut coeffs = Vec::with_capacity(d as usize + 1);
    let mut k = lower;
    for _ in 0..d {
        coeffs.push((k % p as usize) as u32);
        k /= p as usize;
    }
    coeffs.push(1);
    coeffs
}

/// Trial division by every monic polynomial of degree 1..=n/2.
pub fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let n = (poly.len() - 1) as u32;
    for d in 1..=n / 2 {
        for lower in 0..(p as usize).pow(d) {
            let divisor = monic_of_degree(d, lower, p);
            let rem = poly_rem(poly, &divisor, p);
            if rem.len() == 1 && rem[0] == 0 {
                return false;
            }
        }
    }
    true
}

/// Smallest monic irreducible of degree `n`, ordering the lower coefficients
/// by their base-`p` value with the constant term least significant.
pub fn default_irreducible(p: u32, n: u32) -> Vec<u32> {
    (0..(p as usize).pow(n))
        .map(|lower| monic_of_degree(n, lower, p))
        .find(|poly| is_irreducible(poly, p))
        .expect("an irreducible polynomial exists for every degree")
}

impl FieldSpec {
    /// Builds GF(p^n) with the default size limit.
    pub fn build(p: u32, n: u32, irreducible: Option<&[u32]>) -> Result<Self, FieldError> {
        Self::build_with_limit(p, n, irreducible, DEFAULT_FIELD_LIMIT)
    }

    /// Builds GF(q) from the order alone.
    pub fn of_order(q: usize) -> Result<Self, FieldError> {
        let (p, n) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        Self::build(p, n, None)
    }

    pub fn build_with_limit(
        p: u32,
        n: u32,
        irreducible: Option<&[u32]>,
        limit: usize,
    ) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if n == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = (p as usize)
            .checked_pow(n)
            .filter(|&q| q <= limit.min(256))
            .ok_or(FieldError::TooLarge { p, n, limit })?;
        let poly = match irreducible {
            Some(given) => {
                let ok = given.len() == n as usize + 1
                    && given.last() == Some(&1)
                    && given.iter().all(|&c| c < p);
                if !ok {
                    return Err(FieldError::BadPolynomial(given.to_vec(), n, p));
                }
                if !is_irreducible(given, p) {
                    return Err(FieldError::Reducible(given.to_vec(), p));
                }
                given.to_vec()
            }
            None => default_irreducible(p, n),
        };

        let to_coeffs = |idx: usize| -> Vec<u32> {
            let mut c = Vec::with_capacity(n as usize);
            let mut k = idx;
            for _ in 0..n {
                c.push((k % p as usize) as u32);
                k /= p as usize;
            }
            c
        };
        let to_index = |c: &[u32]| -> usize {
            c.iter()
                .rev()
                .fold(0usize, |acc, &ci| acc * p as usize + ci as usize)
        };

        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for a in 0..q {
            let ca = to_coeffs(a);
            for b in 0..q {
                let cb = to_coeffs(b);
                let sum: Vec<u32> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = to_index(&sum) as u8;

                let mut prod = vec![0u32; 2 * n as usize - 1];
                for (i, x) in ca.iter().enumerate() {
                    for (j, y) in cb.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let mut rem = poly_rem(&prod, &poly, p);
                rem.resize(n as usize, 0);
                mul[a * q + b] = to_index(&rem) as u8;
            }
        }
        let neg = (0..q)
            .map(|a| (0..q).find(|&b| add[a * q + b] == 0).unwrap() as u8)
            .collect();
        let inv = (0..q)
            .map(|a| {
                if a == 0 {
                    0
                } else {
                    (1..q).find(|&b| mul[a * q + b] == 1).unwrap() as u8
                }
            })
            .collect();

        let mut field = FieldSpec {
            p,
            n,
            q,
            irreducible: poly,
            add,
            mul,
            neg,
            inv,
            names: Vec::new(),
        };
        field.names = field.default_names();
        Ok(field)
    }

    fn default_names(&self) -> Vec<String> {
        let fixed: Option<&[&str]> = match (self.q, self.irreducible.as_slice()) {
            (2, _) => Some(&["0", "1"]),
            (3, _) => Some(&["0", "1", "-1"]),
            (4, [1, 1, 1]) => Some(&["0", "1", "ω", "ω²"]),
            (5, _) => Some(&["0", "1", "2", "-2", "-1"]),
            _ => None,
        };
        if let Some(fixed) = fixed {
            return fixed.iter().map(|s| s.to_string()).collect();
        }
        let g = self.generator();
        let mut names = vec![String::new(); self.q];
        names[0] = "0".into();
        let mut x = Felt::ONE;
        for k in 0..self.q - 1 {
            names[x.index()] = match k {
                0 => "1".into(),
                1 => "g".into(),
                _ => format!("g^{k}"),
            };
            x = self.mul(x, g);
        }
        names
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn irreducible(&self) -> &[u32] {
        &self.irreducible
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: Felt) -> &str {
        &self.names[a.index()]
    }

    pub fn elements(&self) -> impl Iterator<Item = Felt> + '_ {
        (0..self.q).map(|i| Felt(i as u8))
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Felt> + '_ {
        (1..self.q).map(|i| Felt(i as u8))
    }

    /// Embeds an integer through the prime subfield.
    pub fn from_int(&self, k: i64) -> Felt {
        Felt(k.rem_euclid(self.p as i64) as u8)
    }

    #[inline]
    pub fn add(&self, a: Felt, b: Felt) -> Felt {
        Felt(self.add[a.index() * self.q + b.index()])
    }

    #[inline]
    pub fn neg(&self, a: Felt) -> Felt {
        Felt(self.neg[a.index()])
    }

    #[inline]
    pub fn sub(&self, a: Felt, b: Felt) -> Felt {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Felt, b: Felt) -> Felt {
        Felt(self.mul[a.index() * self.q + b.index()])
    }

    pub fn inv(&self, a: Felt) -> Result<Felt, FieldError> {
        if a.is_zero() {
            Err(FieldError::DivisionByZero)
        } else {
            Ok(Felt(self.inv[a.index()]))
        }
    }

    pub fn div(&self, a: Felt, b: Felt) -> Result<Felt, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: Felt) -> usize {
        assert!(!a.is_zero());
        let mut x = a;
        let mut k = 1;
        while x != Felt::ONE {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Lowest-index primitive element.
    pub fn generator(&self) -> Felt {
        self.nonzero()
            .find(|&a| self.order(a) == self.q - 1)
            .expect("multiplicative group of a finite field is cyclic")
    }

    pub fn add_table(&self) -> Vec<Vec<u8>> {
        self.add.chunks(self.q).map(|r| r.to_vec()).collect()
    }

    pub fn mul_table(&self) -> Vec<Vec<u8>> {
        self.mul.chunks(self.q).map(|r| r.to_vec()).collect()
    }

    pub fn inv_table(&self) -> Vec<u8> {
        self.inv.clone()
    }

    /// Dot product of two coordinate lists.
    pub fn dot(&self, a: &[Felt], b: &[Felt]) -> Felt {
        a.iter()
            .zip(b)
            .fold(Felt::ZERO, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }

    pub fn scale(&self, k: Felt, v: &[Felt]) -> Vec<Felt> {
        v.iter().map(|&x| self.mul(k, x)).collect()
    }
}

/// JSON export shape for `field-table`.
#[derive(Debug, Clone, Serialize)]
pub struct FieldTable {
    pub p: u32,
    pub n: u32,
    pub q: usize,
    pub irreducible: Vec<u32>,
    pub add: Vec<Vec<u8>>,
    pub mul: Vec<Vec<u8>>,
    pub names: Vec<String>,
}

impl From<&FieldSpec> for FieldTable {
    fn from(f: &FieldSpec) -> Self {
        FieldTable {
            p: f.p,
            n: f.n,
            q: f.q,
            irreducible: f.irreducible.clone(),
            add: f.add_table(),
            mul: f.mul_table(),
            names: f.names.clone(),
        }
    }
}
