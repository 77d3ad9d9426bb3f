//! Exact arithmetic for the q-duality function `H(x, y) = q^{|x^y|}`.
//!
//! `q` is carried as a reduced fraction restricted to `[-1, 1)`, and H-values
//! are compared exactly as powers of that fraction with the convention
//! `0^0 = 1`. Almost-sure pathwise identities are tested with these values,
//! never with float tolerances.

use serde::Serialize;
use std::fmt;

use crate::error::{Error, Result};

/// Reduced rational `q = num / den` with `den > 0` and `q` in `[-1, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct QParameter {
    num: i64,
    den: i64,
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

impl QParameter {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den <= 0 {
            return Err(Error::InvalidRational(format!("{num}/{den}")));
        }
        let g = gcd(num, den).max(1);
        let (num, den) = (num / g, den / g);
        // q in [-1, 1): -den <= num < den.
        if num < -den || num >= den {
            return Err(Error::InvalidRational(format!("{num}/{den}")));
        }
        Ok(QParameter { num, den })
    }

    pub const ZERO: QParameter = QParameter { num: 0, den: 1 };
    pub const NEG_ONE: QParameter = QParameter { num: -1, den: 1 };

    /// Parse "p/r" or a bare integer.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::InvalidRational(s.to_string());
        if let Some((p, r)) = s.split_once('/') {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let r: i64 = r.trim().parse().map_err(|_| bad())?;
            QParameter::new(p, r)
        } else {
            let p: i64 = s.trim().parse().map_err(|_| bad())?;
            QParameter::new(p, 1)
        }
    }

    pub fn numer(&self) -> i64 {
        self.num
    }

    pub fn denom(&self) -> i64 {
        self.den
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn is_neg_one(&self) -> bool {
        self.num == -1 && self.den == 1
    }

    /// The exact value `q^exp`.
    pub fn pow(&self, exp: u32) -> QPower {
        QPower { q: *self, exp }
    }
}

impl fmt::Display for QParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// The exact value `q^exp` for a reduced rational `q` in `[-1, 1)`.
///
/// Equality is decided exactly: for `|q|` strictly between 0 and 1 the map
/// `k -> q^k` is injective up to the sign pattern, so `q^a = q^b` iff `a = b`;
/// `q = 0` compares by whether the exponent is zero (`0^0 = 1`); `q = -1`
/// compares by exponent parity.
#[derive(Debug, Clone, Copy)]
pub struct QPower {
    q: QParameter,
    exp: u32,
}

impl QPower {
    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn to_f64(&self) -> f64 {
        if self.exp == 0 {
            return 1.0;
        }
        if self.q.is_zero() {
            return 0.0;
        }
        self.q.to_f64().powi(self.exp as i32)
    }
}

impl PartialEq for QPower {
    fn eq(&self, other: &Self) -> bool {
        assert_eq!(self.q, other.q, "comparing powers of different q");
        if self.exp == other.exp {
            return true;
        }
        if self.q.is_zero() {
            // 0^a = 0^b iff both exponents are zero or both positive.
            return (self.exp == 0) == (other.exp == 0);
        }
        if self.q.is_neg_one() {
            return self.exp % 2 == other.exp % 2;
        }
        // 0 < |q| < 1: strictly decreasing in |value|, distinct powers differ.
        false
    }
}

impl Eq for QPower {}
