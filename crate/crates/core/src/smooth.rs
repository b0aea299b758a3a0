//! Heuristic smoothness check for a branch curve `f = 0`.
//!
//! Not a proof. Two probes:
//!
//! * For primes `p <= 101` not dividing `md`, search the projective plane over
//!   `F_p` for a common zero of `f, f_x, f_y, f_z`. A singular point defined
//!   over `Q` at a rational point survives reduction at every prime, so the
//!   probe fails only when *every* tested prime shows one. The search stops at
//!   the first prime without a singular point.
//! * Restrict `f` and its gradient to the three coordinate lines and a few
//!   seeded random lines, and look for a common root via univariate gcds over
//!   the large working prime.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::field::primes_up_to;
use crate::algebra::{ModPoly, Prime};
use crate::error::Result;
use crate::milnor::MilnorData;

const SMALL_PRIME_BOUND: u64 = 101;
const RANDOM_LINES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SmoothnessVerdict {
    #[serde(rename = "heuristic-pass")]
    HeuristicPass,
    #[serde(rename = "fail")]
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmoothnessReport {
    pub verdict: SmoothnessVerdict,
    /// Small primes examined, in order.
    pub primes_tested: Vec<u64>,
    /// Primes at which a singular `F_p`-point was found, with one witness.
    pub singular_reductions: Vec<(u64, [u64; 3])>,
    pub lines_tested: usize,
    /// Lines on which `f` and its gradient share a root over `F_P`.
    pub singular_lines: usize,
    pub note: String,
}

pub fn smoothness_heuristic(md: &MilnorData, big_prime: Prime, seed: u64) -> Result<SmoothnessReport> {
    let n = md.cover().branch_degree() as u64;
    let mut primes_tested = Vec::new();
    let mut singular_reductions = Vec::new();
    let mut clean_prime = false;
    for q in primes_up_to(SMALL_PRIME_BOUND) {
        if n.is_multiple_of(q) {
            continue;
        }
        let p = Prime::new(q)?;
        let Ok(polys) = reduce_all(md, p) else {
            continue;
        };
        primes_tested.push(q);
        match find_singular_point(&polys, p) {
            Some(pt) => singular_reductions.push((q, pt)),
            None => {
                clean_prime = true;
                break;
            }
        }
    }

    let polys = reduce_all(md, big_prime)?;
    let mut lines = coordinate_lines();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_11fe);
    for _ in 0..RANDOM_LINES {
        let mut pt = || [(); 3].map(|_| big_prime.reduce_i64(rng.gen_range(-50..=50)));
        lines.push((pt(), pt()));
    }
    let singular_lines = lines
        .iter()
        .filter(|(a, b)| line_has_singular_point(&polys, *a, *b, big_prime))
        .count();

    let verdict = if clean_prime && singular_lines == 0 {
        SmoothnessVerdict::HeuristicPass
    } else {
        SmoothnessVerdict::Fail
    };
    let note = match verdict {
        SmoothnessVerdict::HeuristicPass => "no singularity found (heuristic)".to_string(),
        SmoothnessVerdict::Fail => "possible singular point on the branch curve".to_string(),
    };
    Ok(SmoothnessReport {
        verdict,
        primes_tested,
        singular_reductions,
        lines_tested: lines.len(),
        singular_lines,
        note,
    })
}

fn reduce_all(md: &MilnorData, p: Prime) -> Result<[ModPoly; 4]> {
    let f = md.f();
    let [fx, fy, fz] = f.gradient_xyz();
    Ok([f.reduce(p)?, fx.reduce(p)?, fy.reduce(p)?, fz.reduce(p)?])
}

/// Exponent/coefficient table for fast evaluation at many points.
struct Evaluator {
    terms: Vec<([u32; 3], u64)>,
    max_exp: usize,
}

impl Evaluator {
    fn new(poly: &ModPoly) -> Self {
        let terms: Vec<_> = poly
            .terms()
            .map(|(m, c)| ([m.0[0], m.0[1], m.0[2]], *c))
            .collect();
        let max_exp = terms
            .iter()
            .flat_map(|(e, _)| e.iter().copied())
            .max()
            .unwrap_or(0) as usize;
        Evaluator { terms, max_exp }
    }

    fn eval(&self, powers: &[Vec<u64>; 3], p: Prime) -> u64 {
        self.terms.iter().fold(0, |acc, (e, c)| {
            let v = p.mul(
                p.mul(powers[0][e[0] as usize], powers[1][e[1] as usize]),
                powers[2][e[2] as usize],
            );
            p.add(acc, p.mul(*c, v))
        })
    }
}

fn power_table(base: u64, up_to: usize, p: Prime) -> Vec<u64> {
    let mut out = Vec::with_capacity(up_to + 1);
    let mut acc = 1 % p.get();
    for _ in 0..=up_to {
        out.push(acc);
        acc = p.mul(acc, base);
    }
    out
}

/// First projective `F_p`-point where all four polynomials vanish.
fn find_singular_point(polys: &[ModPoly; 4], p: Prime) -> Option<[u64; 3]> {
    let evals: Vec<Evaluator> = polys.iter().map(Evaluator::new).collect();
    let top = evals.iter().map(|e| e.max_exp).max().unwrap_or(0);
    let q = p.get();
    let points = (0..q)
        .flat_map(move |a| (0..q).map(move |b| [1, a, b]))
        .chain((0..q).map(|b| [0, 1, b]))
        .chain(std::iter::once([0, 0, 1]));
    for pt in points {
        let powers = pt.map(|c| power_table(c, top, p));
        if evals.iter().all(|e| e.eval(&powers, p) == 0) {
            return Some(pt);
        }
    }
    None
}

/// Does the line through `a` and `b` contain a common zero of all four
/// polynomials (over the algebraic closure of `F_p`)?
fn line_has_singular_point(polys: &[ModPoly; 4], a: [u64; 3], b: [u64; 3], p: Prime) -> bool {
    // the point b itself is the parameter value t = infinity
    let at_b = |poly: &ModPoly| poly.eval_xyz(b) == 0;
    if b != [0, 0, 0] && polys.iter().all(at_b) {
        return true;
    }
    let mut g: Option<Vec<u64>> = None;
    for poly in polys {
        let r = restrict_to_line(poly, a, b, p);
        g = Some(match g {
            None => r,
            Some(acc) => upoly_gcd(acc, r, p),
        });
    }
    match g {
        // nonconstant gcd, or everything vanished identically on the line
        Some(g) => g.is_empty() || g.len() > 1,
        None => false,
    }
}

/// `poly(a + t·b)` as a dense univariate polynomial, low degree first, trimmed.
fn restrict_to_line(poly: &ModPoly, a: [u64; 3], b: [u64; 3], p: Prime) -> Vec<u64> {
    let linear: Vec<Vec<u64>> = (0..3).map(|i| vec![a[i], b[i]]).collect();
    let mut out: Vec<u64> = Vec::new();
    for (mono, c) in poly.terms() {
        let mut term = vec![*c];
        for (i, lin) in linear.iter().enumerate() {
            for _ in 0..mono.0[i] {
                term = upoly_mul(&term, lin, p);
            }
        }
        if out.len() < term.len() {
            out.resize(term.len(), 0);
        }
        for (o, t) in out.iter_mut().zip(&term) {
            *o = p.add(*o, *t);
        }
    }
    trim(out)
}

fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn upoly_mul(a: &[u64], b: &[u64], p: Prime) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = p.add(out[i + j], p.mul(*x, *y));
        }
    }
    trim(out)
}

fn upoly_rem(mut a: Vec<u64>, b: &[u64], p: Prime) -> Vec<u64> {
    let lead_inv = p.inv(*b.last().expect("nonzero divisor")).expect("trimmed");
    while a.len() >= b.len() {
        let c = p.mul(*a.last().unwrap(), lead_inv);
        let shift = a.len() - b.len();
        for (i, y) in b.iter().enumerate() {
            a[shift + i] = p.sub(a[shift + i], p.mul(c, *y));
        }
        a = trim(a);
    }
    a
}

/// Gcd of dense polynomials; the empty vector is the zero polynomial.
fn upoly_gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: Prime) -> Vec<u64> {
    while !b.is_empty() {
        let r = upoly_rem(a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn coordinate_lines() -> Vec<([u64; 3], [u64; 3])> {
    vec![
        ([0, 1, 0], [0, 0, 1]),
        ([1, 0, 0], [0, 0, 1]),
        ([1, 0, 0], [0, 1, 0]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Monomial, Rational, SparsePoly};
    use crate::milnor::CoverDatum;

    fn int(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    #[test]
    fn fermat_passes() {
        let md = MilnorData::fermat(CoverDatum::new(2, 3).unwrap());
        let r = smoothness_heuristic(&md, Prime::default(), 1).unwrap();
        assert_eq!(r.verdict, SmoothnessVerdict::HeuristicPass);
        assert_eq!(r.singular_lines, 0);
    }

    #[test]
    fn random_curve_passes() {
        let md = MilnorData::random(CoverDatum::new(2, 4).unwrap(), 1);
        let r = smoothness_heuristic(&md, Prime::default(), 1).unwrap();
        assert_eq!(r.verdict, SmoothnessVerdict::HeuristicPass);
    }

    #[test]
    fn node_at_a_rational_point_fails() {
        // x^6 + y^6 + x y z^4 has a node at [0:0:1]
        let f = SparsePoly::from_terms([
            (Monomial::new(6, 0, 0, 0), int(1)),
            (Monomial::new(0, 6, 0, 0), int(1)),
            (Monomial::new(1, 1, 4, 0), int(1)),
        ]);
        let md = MilnorData::new(CoverDatum::new(2, 3).unwrap(), f).unwrap();
        let r = smoothness_heuristic(&md, Prime::default(), 1).unwrap();
        assert_eq!(r.verdict, SmoothnessVerdict::Fail);
        assert_eq!(r.singular_reductions.len(), r.primes_tested.len());
        assert!(r.singular_lines > 0);
    }

    #[test]
    fn gcd_finds_common_root() {
        let p = Prime::new(101).unwrap();
        // (t - 1)(t - 2) and (t - 1)(t + 5)
        let a = upoly_mul(&[p.neg(1), 1], &[p.neg(2), 1], p);
        let b = upoly_mul(&[p.neg(1), 1], &[5, 1], p);
        assert_eq!(upoly_gcd(a, b, p).len(), 2);
        assert_eq!(upoly_gcd(vec![1, 1], vec![2, 1], p).len(), 1);
    }
}
