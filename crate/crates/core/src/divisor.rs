//! Divisor classes on the blow-up `X_r` of the plane at `r` very general points.
//!
//! A class is stored as `(d; m_1, ..., m_r)` and stands for `dH - Σ m_i E_i`.
//! The intersection form is diagonal with `H² = 1` and `E_i² = -1`, so in this
//! sign convention the canonical class is `(-3; -1^r)`.
//!
//! The textual form is `d;m1,m2,...` with `v^k` for `k` repetitions of `v`,
//! e.g. `57;18^10` or `-3;-1^10`. A bare `d` (or `d;`) is a class on the
//! plane itself.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DivisorClass {
    degree: BigInt,
    mults: Vec<BigInt>,
}

impl DivisorClass {
    pub fn new(degree: impl Into<BigInt>, mults: Vec<BigInt>) -> Self {
        DivisorClass {
            degree: degree.into(),
            mults,
        }
    }

    /// Convenience constructor from machine integers.
    pub fn from_ints(degree: i64, mults: &[i64]) -> Self {
        DivisorClass::new(degree, mults.iter().map(|&m| BigInt::from(m)).collect())
    }

    /// The homogeneous class `(d; m^r)`.
    pub fn homogeneous(degree: impl Into<BigInt>, mult: impl Into<BigInt>, r: usize) -> Self {
        DivisorClass::new(degree, vec![mult.into(); r])
    }

    pub fn zero(r: usize) -> Self {
        DivisorClass::homogeneous(0, 0, r)
    }

    /// Total transform `H` of a line.
    pub fn line(r: usize) -> Self {
        DivisorClass::homogeneous(1, 0, r)
    }

    /// The exceptional class `E_i` (0-based index), i.e. `(0; 0,..,-1,..,0)`.
    pub fn exceptional(r: usize, index: usize) -> Result<Self> {
        if index >= r {
            return Err(Error::InvalidIndex(format!(
                "exceptional index {index} out of range for r = {r}"
            )));
        }
        let mut mults = vec![BigInt::zero(); r];
        mults[index] = BigInt::from(-1);
        Ok(DivisorClass::new(0, mults))
    }

    pub fn degree(&self) -> &BigInt {
        &self.degree
    }

    pub fn mults(&self) -> &[BigInt] {
        &self.mults
    }

    /// Number of blown-up points.
    pub fn r(&self) -> usize {
        self.mults.len()
    }

    pub fn is_zero(&self) -> bool {
        self.degree.is_zero() && self.mults.iter().all(Zero::is_zero)
    }

    fn check_same_surface(&self, other: &DivisorClass) -> Result<()> {
        if self.r() != other.r() {
            return Err(Error::DimensionMismatch {
                left: self.r(),
                right: other.r(),
            });
        }
        Ok(())
    }

    /// The intersection number `D·E = d d' - Σ m_i m_i'`.
    pub fn intersect(&self, other: &DivisorClass) -> Result<BigInt> {
        self.check_same_surface(other)?;
        let mut acc = &self.degree * &other.degree;
        for (a, b) in self.mults.iter().zip(&other.mults) {
            acc -= a * b;
        }
        Ok(acc)
    }

    /// Self-intersection `D²`.
    pub fn square(&self) -> BigInt {
        self.intersect(self)
            .expect("a class lives on its own surface")
    }

    pub fn scale(&self, factor: &BigInt) -> DivisorClass {
        DivisorClass {
            degree: &self.degree * factor,
            mults: self.mults.iter().map(|m| m * factor).collect(),
        }
    }

    pub fn add(&self, other: &DivisorClass) -> Result<DivisorClass> {
        self.check_same_surface(other)?;
        Ok(DivisorClass {
            degree: &self.degree + &other.degree,
            mults: self
                .mults
                .iter()
                .zip(&other.mults)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn negate(&self) -> DivisorClass {
        self.scale(&BigInt::from(-1))
    }

    /// Splits `D = g·P` with `g > 0` the gcd of all entries and `P` primitive.
    pub fn primitive_part(&self) -> Result<(BigInt, DivisorClass)> {
        let g = self
            .mults
            .iter()
            .fold(self.degree.abs(), |acc, m| acc.gcd(m));
        if g.is_zero() {
            return Err(Error::Degenerate(
                "the zero class has no primitive part".into(),
            ));
        }
        let primitive = DivisorClass {
            degree: &self.degree / &g,
            mults: self.mults.iter().map(|m| m / &g).collect(),
        };
        Ok((g, primitive))
    }

    /// Virtual dimension on `X_r` (arithmetic genus 0).
    pub fn vdim(&self) -> BigInt {
        SurfaceContext::blowup(self.r())
            .vdim(self)
            .expect("context built from the class itself")
    }

    /// Expected dimension `max(-1, vdim)` on `X_r`.
    pub fn edim(&self) -> BigInt {
        self.vdim().max(BigInt::from(-1))
    }
}

/// The canonical class `K = (-3; -1^r)` of `X_r`.
pub fn canonical_class(r: usize) -> DivisorClass {
    DivisorClass::homogeneous(-3, -1, r)
}

/// Surface data entering Riemann–Roch: the number of blown-up points and the
/// arithmetic genus `p_a` (zero for every `X_r`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceContext {
    pub r: usize,
    pub pa: BigInt,
}

impl SurfaceContext {
    pub fn blowup(r: usize) -> Self {
        SurfaceContext {
            r,
            pa: BigInt::zero(),
        }
    }

    fn check(&self, class: &DivisorClass) -> Result<()> {
        if class.r() != self.r {
            return Err(Error::DimensionMismatch {
                left: self.r,
                right: class.r(),
            });
        }
        Ok(())
    }

    /// `vdim(D) = χ(D) - 1 = p_a + (D² - K·D)/2`.
    pub fn vdim(&self, class: &DivisorClass) -> Result<BigInt> {
        self.check(class)?;
        let k = canonical_class(self.r);
        let twice = class.square() - class.intersect(&k)?;
        // D² - K·D = D·(D - K) is even: d(d+3) - Σ m(m+1).
        debug_assert!(twice.is_even());
        Ok(&self.pa + (twice >> 1))
    }

    pub fn edim(&self, class: &DivisorClass) -> Result<BigInt> {
        Ok(self.vdim(class)?.max(BigInt::from(-1)))
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};", self.degree)?;
        let mut first = true;
        let mut i = 0;
        while i < self.mults.len() {
            let value = &self.mults[i];
            let run = self.mults[i..].iter().take_while(|m| *m == value).count();
            if !first {
                f.write_str(",")?;
            }
            first = false;
            if run > 1 {
                write!(f, "{value}^{run}")?;
            } else {
                write!(f, "{value}")?;
            }
            i += run;
        }
        Ok(())
    }
}

impl FromStr for DivisorClass {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let fail = |reason: &str| Error::Parse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let trimmed = input.trim();
        let trimmed = trimmed
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .unwrap_or(trimmed);
        let (deg, rest) = match trimmed.split_once(';') {
            Some((d, rest)) => (d, rest),
            None => (trimmed, ""),
        };
        let degree: BigInt = deg
            .trim()
            .parse()
            .map_err(|_| fail("degree is not an integer"))?;
        let mut mults = Vec::new();
        if !rest.trim().is_empty() {
            for token in rest.split(',') {
                let token = token.trim();
                let (value, count) = match token.split_once('^') {
                    Some((v, k)) => {
                        let k: usize = k
                            .trim()
                            .parse()
                            .map_err(|_| fail("repetition count is not a non-negative integer"))?;
                        (v.trim(), k)
                    }
                    None => (token, 1),
                };
                let value: BigInt = value
                    .parse()
                    .map_err(|_| fail("multiplicity is not an integer"))?;
                mults.extend(std::iter::repeat_n(value, count));
            }
        }
        Ok(DivisorClass { degree, mults })
    }
}

impl Serialize for DivisorClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DivisorClass {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `d(d+3)/2 - Σ m_i(m_i+1)/2`, the expanded form of `vdim` on `X_r`.
///
/// Kept separate from [`SurfaceContext::vdim`] so the two routes can be
/// checked against each other.
pub fn vdim_expanded(class: &DivisorClass) -> BigInt {
    let tri = |x: &BigInt| -> BigInt { (x * (x + BigInt::one())) >> 1 };
    let d = class.degree();
    let mut acc: BigInt = (d * (d + BigInt::from(3))) >> 1;
    for m in class.mults() {
        acc -= tri(m);
    }
    acc
}
