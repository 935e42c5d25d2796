//! Exact-rational vectors, homogeneous linear concepts, lifting, and
//! margin / minimal-ratio reports.
//!
//! The sign convention is global: `c(x) = +1` iff `f(x) >= 0`, so `f(x) = 0`
//! maps to `+1`. Affine concepts are handled exclusively by [`lift`]ing
//! points into dimension `d + 1`.

use crate::error::{Error, Result};
use crate::Rat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A label in `{+1, -1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    /// Sign of a rational under the `f(x) >= 0 => +1` convention.
    pub fn of(value: &Rat) -> Sign {
        if value >= &Rat::zero() {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Sign::Pos => write!(f, "+1"),
            Sign::Neg => write!(f, "-1"),
        }
    }
}

/// A point (or weight vector) with arbitrary-precision rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalVector {
    coords: Vec<Rat>,
}

impl RationalVector {
    pub fn new(coords: Vec<Rat>) -> Self {
        RationalVector { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        RationalVector::new(coords.iter().map(|&c| crate::rat(c)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        RationalVector::new(vec![Rat::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    fn check_dim(&self, other: &RationalVector) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &RationalVector) -> Result<RationalVector> {
        self.check_dim(other)?;
        Ok(RationalVector::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        ))
    }

    pub fn sub(&self, other: &RationalVector) -> Result<RationalVector> {
        self.check_dim(other)?;
        Ok(RationalVector::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        ))
    }

    pub fn scale(&self, factor: &Rat) -> RationalVector {
        RationalVector::new(self.coords.iter().map(|c| c * factor).collect())
    }

    pub fn dot(&self, other: &RationalVector) -> Result<Rat> {
        self.check_dim(other)?;
        Ok(self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .fold(Rat::zero(), |acc, t| acc + t))
    }

    pub fn norm_sq(&self) -> Rat {
        self.coords
            .iter()
            .map(|c| c * c)
            .fold(Rat::zero(), |acc, t| acc + t)
    }

    /// Appends the constant coordinate 1, embedding an affine point as a
    /// homogeneous one in dimension `d + 1`.
    pub fn lift(&self) -> RationalVector {
        let mut coords = self.coords.clone();
        coords.push(Rat::one());
        RationalVector::new(coords)
    }

    /// The unique primitive integer vector spanning the same ray:
    /// denominators cleared, divided by the gcd. Zero maps to zero.
    pub fn primitive_integers(&self) -> Vec<BigInt> {
        let lcm = self
            .coords
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coords
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();
        let gcd = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        if gcd.is_zero() {
            ints
        } else {
            ints.into_iter().map(|v| v / &gcd).collect()
        }
    }
}

/// A homogeneous half-space concept `c(x) = sign(<w, x>)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearConcept {
    w: RationalVector,
}

impl LinearConcept {
    pub fn new(w: RationalVector) -> Self {
        LinearConcept { w }
    }

    pub fn from_ints(w: &[i64]) -> Self {
        LinearConcept::new(RationalVector::from_ints(w))
    }

    pub fn weights(&self) -> &RationalVector {
        &self.w
    }

    pub fn dim(&self) -> usize {
        self.w.dim()
    }

    /// `f(x) = <w, x>`, exactly.
    pub fn eval(&self, x: &RationalVector) -> Result<Rat> {
        self.w.dot(x)
    }

    /// `+1` iff `f(x) >= 0`, `-1` otherwise.
    pub fn label_of(&self, x: &RationalVector) -> Result<Sign> {
        Ok(Sign::of(&self.eval(x)?))
    }
}

/// Scale-invariant margin quantities for a concept over a pool, reported as
/// exact squared ratios so no square root is ever taken.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarginReport {
    /// `(gamma/rho)^2 = min <w,x>^2 / (|w|^2 * max |x|^2)`.
    pub gamma_over_rho_sq: Rat,
    /// Minimal ratio `eta = min |f(x)| / max |f(x)|`.
    pub eta: Rat,
    /// `rho^2 = max |x|^2` over the pool.
    pub max_norm_sq: Rat,
}

/// Computes the minimal ratio and the squared normalized margin of `concept`
/// over a nonempty pool. Errors if `f` vanishes on every pool point.
pub fn margin_report(concept: &LinearConcept, pool: &[RationalVector]) -> Result<MarginReport> {
    if pool.is_empty() {
        return Err(Error::DegeneratePool);
    }
    let mut min_abs_f: Option<Rat> = None;
    let mut max_abs_f: Option<Rat> = None;
    let mut min_f_sq: Option<Rat> = None;
    let mut max_norm_sq: Option<Rat> = None;
    for x in pool {
        let f = concept.eval(x)?;
        let abs_f = f.abs();
        let f_sq = &f * &f;
        let norm_sq = x.norm_sq();
        min_abs_f = Some(match min_abs_f {
            Some(m) => m.min(abs_f.clone()),
            None => abs_f.clone(),
        });
        max_abs_f = Some(match max_abs_f {
            Some(m) => m.max(abs_f),
            None => abs_f.clone(),
        });
        min_f_sq = Some(match min_f_sq {
            Some(m) => m.min(f_sq.clone()),
            None => f_sq,
        });
        max_norm_sq = Some(match max_norm_sq {
            Some(m) => m.max(norm_sq.clone()),
            None => norm_sq,
        });
    }
    let max_abs_f = max_abs_f.unwrap();
    if max_abs_f.is_zero() {
        return Err(Error::DegeneratePool);
    }
    let w_norm_sq = concept.weights().norm_sq();
    let max_norm_sq = max_norm_sq.unwrap();
    Ok(MarginReport {
        gamma_over_rho_sq: min_f_sq.unwrap() / (&w_norm_sq * &max_norm_sq),
        eta: min_abs_f.unwrap() / &max_abs_f,
        max_norm_sq,
    })
}
