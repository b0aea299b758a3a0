//! Weighted monomials in `x, y, z, w` with weights `(1, 1, 1, m)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Grading of `S = C[x, y, z, w]` with `deg w = m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightSystem {
    m: u32,
}

impl WeightSystem {
    pub fn new(m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::Invalid("weight m must be at least 1".into()));
        }
        Ok(WeightSystem { m })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn weights(&self) -> [u32; 4] {
        [1, 1, 1, self.m]
    }

    pub fn degree(&self, mono: &Monomial) -> i64 {
        let [a, b, c, w] = mono.0;
        a as i64 + b as i64 + c as i64 + self.m as i64 * w as i64
    }

    /// Parse the `weights` field of an interchange header.
    pub fn from_weights(weights: &[u32]) -> Result<Self> {
        match weights {
            [1, 1, 1, m] => WeightSystem::new(*m),
            _ => Err(Error::Invalid(format!(
                "weight system must be (1,1,1,m), got {weights:?}"
            ))),
        }
    }
}

/// Exponent vector `(e_x, e_y, e_z, e_w)`.
///
/// The derived order is lexicographic on the exponents, i.e. `x > y > z > w`.
/// Within one graded piece this is the graded-lex order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial(pub [u32; 4]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; 4]);

    pub fn new(ex: u32, ey: u32, ez: u32, ew: u32) -> Self {
        Monomial([ex, ey, ez, ew])
    }

    pub fn exponents(&self) -> [u32; 4] {
        self.0
    }

    pub fn w_exponent(&self) -> u32 {
        self.0[3]
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0) {
            *a += b;
        }
        Monomial(e)
    }

    pub fn total_xyz(&self) -> u32 {
        self.0[0] + self.0[1] + self.0[2]
    }
}

/// All monomials of weighted degree exactly `k`, largest first in graded-lex order.
pub fn monomials_of_degree(ws: WeightSystem, k: i64) -> Vec<Monomial> {
    if k < 0 {
        return Vec::new();
    }
    let k = k as u32;
    let m = ws.m();
    let mut out = Vec::with_capacity(dim_s(k as i64, m) as usize);
    // x-exponent descending, then y, z, w; w is determined by the rest.
    for ex in (0..=k).rev() {
        for ey in (0..=k - ex).rev() {
            for ez in (0..=k - ex - ey).rev() {
                let rest = k - ex - ey - ez;
                if rest.is_multiple_of(m) {
                    out.push(Monomial::new(ex, ey, ez, rest / m));
                }
            }
        }
    }
    out
}

/// Monomials of degree `k` in `x, y, z` alone (the plane ring `S'`).
pub fn plane_monomials(k: i64) -> Vec<Monomial> {
    if k < 0 {
        return Vec::new();
    }
    let k = k as u32;
    let mut out = Vec::with_capacity(plane_dim(k as i64) as usize);
    for ex in (0..=k).rev() {
        for ey in (0..=k - ex).rev() {
            out.push(Monomial::new(ex, ey, k - ex - ey, 0));
        }
    }
    out
}

/// `C(n + 2, 2)`, the dimension of degree-`n` forms on the plane; zero for `n < 0`.
pub fn plane_dim(n: i64) -> u64 {
    if n < 0 {
        0
    } else {
        let n = n as u64;
        (n + 2) * (n + 1) / 2
    }
}

/// `dim S_k` for weights `(1, 1, 1, m)`.
pub fn dim_s(k: i64, m: u32) -> u64 {
    if k < 0 {
        return 0;
    }
    let m = m as i64;
    (0..=k / m).map(|i| plane_dim(k - i * m)).sum()
}
