//! Exact arithmetic in the real quadratic extension `Q(√d)`.
//!
//! An element is stored as `a + b·√d` with rational `a`, `b` and a positive
//! integer radicand `d`. Signs are decided by case analysis on the signs of
//! `a` and `b` and, when they disagree, by comparing `a²` with `b²·d`. No
//! floating point is involved in any comparison.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Rational;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct QuadExt {
    a: Rational,
    b: Rational,
    rad: u64,
}

impl QuadExt {
    pub fn new(a: Rational, b: Rational, rad: u64) -> Result<Self> {
        if rad == 0 {
            return Err(Error::ZeroRadicand);
        }
        Ok(QuadExt { a, b, rad })
    }

    pub fn rational(a: Rational, rad: u64) -> Result<Self> {
        QuadExt::new(a, Rational::zero(), rad)
    }

    /// The element `√d` itself.
    pub fn sqrt(rad: u64) -> Result<Self> {
        QuadExt::new(Rational::zero(), Rational::one(), rad)
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn radicand(&self) -> u64 {
        self.rad
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero() || self.square_root_of_radicand().is_some()
    }

    /// `Some(s)` when the radicand is a perfect square `s²`.
    fn square_root_of_radicand(&self) -> Option<u64> {
        let s = self.rad.sqrt();
        (s * s == self.rad).then_some(s)
    }

    /// Rational value, if the element is rational.
    pub fn to_rational(&self) -> Option<Rational> {
        if self.b.is_zero() {
            return Some(self.a.clone());
        }
        self.square_root_of_radicand()
            .map(|s| &self.a + &self.b * Rational::from_integer(BigInt::from(s)))
    }

    /// `a² − b²·d`, the product with the conjugate.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * rat(self.rad as i64)
    }

    pub fn conjugate(&self) -> QuadExt {
        QuadExt {
            a: self.a.clone(),
            b: -self.b.clone(),
            rad: self.rad,
        }
    }

    /// Exact sign of `a + b√d`.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&Rational::zero());
        let sb = self.b.cmp(&Rational::zero());
        match (sa, sb) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (x, y) if x == y => x,
            // mixed signs: |a| vs |b|√d decides
            (sa, _) => {
                let a2 = &self.a * &self.a;
                let b2d = &self.b * &self.b * rat(self.rad as i64);
                match a2.cmp(&b2d) {
                    Ordering::Greater => sa,
                    Ordering::Less => sa.reverse(),
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.signum() == Ordering::Equal
    }

    fn check_radicand(&self, other: &QuadExt) -> Result<()> {
        if self.rad == other.rad {
            Ok(())
        } else {
            Err(Error::RadicandMismatch(self.rad, other.rad))
        }
    }

    pub fn checked_add(&self, other: &QuadExt) -> Result<QuadExt> {
        self.check_radicand(other)?;
        Ok(QuadExt {
            a: &self.a + &other.a,
            b: &self.b + &other.b,
            rad: self.rad,
        })
    }

    pub fn checked_sub(&self, other: &QuadExt) -> Result<QuadExt> {
        self.check_radicand(other)?;
        Ok(QuadExt {
            a: &self.a - &other.a,
            b: &self.b - &other.b,
            rad: self.rad,
        })
    }

    pub fn checked_mul(&self, other: &QuadExt) -> Result<QuadExt> {
        self.check_radicand(other)?;
        let d = rat(self.rad as i64);
        Ok(QuadExt {
            a: &self.a * &other.a + &self.b * &other.b * d,
            b: &self.a * &other.b + &self.b * &other.a,
            rad: self.rad,
        })
    }

    pub fn scale(&self, c: &Rational) -> QuadExt {
        QuadExt {
            a: &self.a * c,
            b: &self.b * c,
            rad: self.rad,
        }
    }

    /// `1 / self`, rationalizing the denominator with the conjugate.
    pub fn recip(&self) -> Result<QuadExt> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        if n.is_zero() {
            // only possible for a square radicand: the value is rational
            let v = self.to_rational().ok_or(Error::DivisionByZero)?;
            return QuadExt::rational(v.recip(), self.rad);
        }
        Ok(self.conjugate().scale(&n.recip()))
    }

    pub fn checked_div(&self, other: &QuadExt) -> Result<QuadExt> {
        self.check_radicand(other)?;
        self.checked_mul(&other.recip()?)
    }

    /// Re-express an element of `Q(√(n²·d))` over the radicand `d`.
    pub fn to_radicand(&self, target: u64) -> Result<QuadExt> {
        if target == 0 {
            return Err(Error::ZeroRadicand);
        }
        if !self.rad.is_multiple_of(target) {
            return Err(Error::RadicandMismatch(self.rad, target));
        }
        let q = self.rad / target;
        let n = q.sqrt();
        if n * n != q {
            return Err(Error::RadicandMismatch(self.rad, target));
        }
        Ok(QuadExt {
            a: self.a.clone(),
            b: &self.b * rat(n as i64),
            rad: target,
        })
    }

    /// Exact floor.
    pub fn floor(&self) -> BigInt {
        let guess = self.to_f64().floor();
        let mut n = if guess.is_finite() {
            BigInt::from(guess as i64)
        } else {
            BigInt::zero()
        };
        let at = |n: &BigInt| self.cmp_rational(&Rational::from_integer(n.clone()));
        while at(&n) == Ordering::Less {
            n -= 1;
        }
        while at(&(&n + 1)) != Ordering::Less {
            n += 1;
        }
        n
    }

    /// Exact ceiling.
    pub fn ceil(&self) -> BigInt {
        -(-self.clone()).floor()
    }

    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        QuadExt {
            a: &self.a - r,
            b: self.b.clone(),
            rad: self.rad,
        }
        .signum()
    }

    /// Display-only floating approximation.
    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * (self.rad as f64).sqrt()
    }
}

/// Exact order of two elements sharing a radicand.
pub fn quad_compare(u: &QuadExt, v: &QuadExt) -> Result<Ordering> {
    Ok(u.checked_sub(v)?.signum())
}

pub(crate) fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

impl PartialEq for QuadExt {
    fn eq(&self, other: &Self) -> bool {
        matches!(quad_compare(self, other), Ok(Ordering::Equal))
    }
}

impl PartialOrd for QuadExt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        quad_compare(self, other).ok()
    }
}

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt {
            a: -self.a,
            b: -self.b,
            rad: self.rad,
        }
    }
}

// Operator forms panic on radicand mismatch; library code uses the checked forms.
impl Add for &QuadExt {
    type Output = QuadExt;
    fn add(self, rhs: &QuadExt) -> QuadExt {
        self.checked_add(rhs).expect("radicand mismatch")
    }
}

impl Sub for &QuadExt {
    type Output = QuadExt;
    fn sub(self, rhs: &QuadExt) -> QuadExt {
        self.checked_sub(rhs).expect("radicand mismatch")
    }
}

impl Mul for &QuadExt {
    type Output = QuadExt;
    fn mul(self, rhs: &QuadExt) -> QuadExt {
        self.checked_mul(rhs).expect("radicand mismatch")
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = if self.b.is_negative() {
            format!("- {}", -self.b.clone())
        } else {
            format!("+ {}", self.b)
        };
        write!(f, "{} {}·√{}", self.a, b, self.rad)
    }
}

#[derive(Serialize, Deserialize)]
struct QuadRepr {
    a: String,
    b: String,
    rad: u64,
}

impl Serialize for QuadExt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QuadRepr {
            a: self.a.to_string(),
            b: self.b.to_string(),
            rad: self.rad,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadExt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = QuadRepr::deserialize(d)?;
        let a = super::parse_rational(&r.a).map_err(D::Error::custom)?;
        let b = super::parse_rational(&r.b).map_err(D::Error::custom)?;
        QuadExt::new(a, b, r.rad).map_err(D::Error::custom)
    }
}
