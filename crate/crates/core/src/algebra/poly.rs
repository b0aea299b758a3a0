//! Sparse polynomials in `x, y, z, w` over the rationals, and their reductions mod `p`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::field::Prime;
use super::monomial::{Monomial, WeightSystem};
use super::{parse_rational, Rational};
use crate::error::{Error, Result};

/// A polynomial with rational coefficients; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparsePoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl SparsePoly {
    pub fn zero() -> Self {
        SparsePoly::default()
    }

    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = SparsePoly::zero();
        for (mono, c) in terms {
            p.add_term(mono, c);
        }
        p
    }

    pub fn add_term(&mut self, mono: Monomial, c: Rational) {
        let entry = self.terms.entry(mono).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&mono);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mono: &Monomial) -> Option<&Rational> {
        self.terms.get(mono)
    }

    /// Common weighted degree of all terms, or `None` if inhomogeneous.
    /// The zero polynomial has no degree.
    pub fn weighted_degree(&self, ws: WeightSystem) -> Option<i64> {
        let mut degs = self.terms.keys().map(|m| ws.degree(m));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn involves_w(&self) -> bool {
        self.terms.keys().any(|m| m.w_exponent() > 0)
    }

    /// Partial derivative with respect to variable `var` (0 = x, ..., 3 = w).
    pub fn derivative(&self, var: usize) -> SparsePoly {
        let mut out = SparsePoly::zero();
        for (mono, c) in &self.terms {
            let e = mono.0[var];
            if e == 0 {
                continue;
            }
            let mut exps = mono.0;
            exps[var] -= 1;
            out.add_term(Monomial(exps), c * Rational::from_integer(BigInt::from(e)));
        }
        out
    }

    pub fn gradient_xyz(&self) -> [SparsePoly; 3] {
        [self.derivative(0), self.derivative(1), self.derivative(2)]
    }

    pub fn add(&self, other: &SparsePoly) -> SparsePoly {
        let mut out = self.clone();
        for (mono, c) in &other.terms {
            out.add_term(*mono, c.clone());
        }
        out
    }

    /// Reduce mod `p`; denominators must be invertible.
    pub fn reduce(&self, p: Prime) -> Result<ModPoly> {
        let mut terms = BTreeMap::new();
        for (mono, c) in &self.terms {
            let v = reduce_rational(c, p)?;
            if v != 0 {
                terms.insert(*mono, v);
            }
        }
        Ok(ModPoly { prime: p, terms })
    }

    pub fn to_interchange(&self, ws: WeightSystem) -> PolyFile {
        PolyFile {
            weights: ws.weights().to_vec(),
            degree: self.weighted_degree(ws),
            terms: self
                .terms
                .iter()
                .rev()
                .map(|(m, c)| Term {
                    e: m.0,
                    c: c.to_string(),
                })
                .collect(),
        }
    }
}

fn reduce_rational(c: &Rational, p: Prime) -> Result<u64> {
    let modulus = BigInt::from(p.get());
    let num = c.numer().mod_floor(&modulus).to_u64().unwrap_or(0);
    let den = c.denom().mod_floor(&modulus).to_u64().unwrap_or(0);
    let inv = p.inv(den).ok_or(Error::BadReduction(p.get()))?;
    Ok(p.mul(num, inv))
}

/// A polynomial over `F_p`; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModPoly {
    prime: Prime,
    terms: BTreeMap<Monomial, u64>,
}

impl ModPoly {
    /// The monomial `mono` with coefficient 1.
    pub fn monomial(mono: Monomial, prime: Prime) -> Self {
        ModPoly {
            prime,
            terms: BTreeMap::from([(mono, 1)]),
        }
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &u64)> {
        self.terms.iter()
    }

    pub fn weighted_degree(&self, ws: WeightSystem) -> Option<i64> {
        let mut degs = self.terms.keys().map(|m| ws.degree(m));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// Evaluate at a point of `F_p^3` (ignores `w`; callers pass `w`-free forms).
    pub fn eval_xyz(&self, pt: [u64; 3]) -> u64 {
        let p = self.prime;
        self.terms.iter().fold(0, |acc, (mono, c)| {
            let e = mono.0;
            let v = p.mul(
                p.mul(p.pow(pt[0], e[0] as u64), p.pow(pt[1], e[1] as u64)),
                p.pow(pt[2], e[2] as u64),
            );
            p.add(acc, p.mul(*c, v))
        })
    }
}

/// One term of the interchange format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub e: [u32; 4],
    pub c: String,
}

/// Interchange header: weight system, declared degree and the term list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyFile {
    pub weights: Vec<u32>,
    #[serde(default)]
    pub degree: Option<i64>,
    pub terms: Vec<Term>,
}

impl PolyFile {
    /// Parse into a polynomial, checking the declared degree when present.
    pub fn to_poly(&self) -> Result<(WeightSystem, SparsePoly)> {
        let ws = WeightSystem::from_weights(&self.weights)?;
        let mut poly = SparsePoly::zero();
        for t in &self.terms {
            poly.add_term(Monomial(t.e), parse_rational(&t.c)?);
        }
        if let Some(expected) = self.degree {
            match poly.weighted_degree(ws) {
                Some(found) if found == expected => {}
                Some(found) => return Err(Error::WrongDegree { expected, found }),
                None if poly.is_zero() => {}
                None => return Err(Error::Inhomogeneous),
            }
        }
        Ok((ws, poly))
    }
}
