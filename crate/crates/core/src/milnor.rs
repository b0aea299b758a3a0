//! Graded pieces of `S = C[x,y,z,w]`, `S' = C[x,y,z]`, `T = S/(w^{d-1})` and the
//! Milnor algebra `R = S/(w^{d-1}, f_x, f_y, f_z)` of a simple cyclic cover
//! `w^d + f(x,y,z) = 0` in `P(1,1,1,m)`.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    monomials_of_degree, plane_dim, plane_monomials, Echelon, ModPoly, Monomial, Prime,
    Rational, SparsePoly, WeightSystem,
};
use crate::error::{Error, Result};

/// The pair `(d, m)`: a degree-`d` cyclic cover of the plane branched over a
/// curve of degree `m·d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoverDatum {
    d: u32,
    m: u32,
}

impl CoverDatum {
    pub fn new(d: u32, m: u32) -> Result<Self> {
        if d < 2 {
            return Err(Error::Invalid(format!("cover degree d must be >= 2, got {d}")));
        }
        if m < 1 {
            return Err(Error::Invalid(format!("weight m must be >= 1, got {m}")));
        }
        Ok(CoverDatum { d, m })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Degree `m·d` of the branch curve (and of `X` in `P(1,1,1,m)`).
    pub fn branch_degree(&self) -> i64 {
        self.m as i64 * self.d as i64
    }

    /// Order of the cyclic Galois group.
    pub fn galois_order(&self) -> u32 {
        self.d
    }

    pub fn weights(&self) -> WeightSystem {
        WeightSystem::new(self.m).expect("m >= 1 by construction")
    }

    /// Degree of `H^{2,0}`: `dm - m - 3`.
    pub fn h20_degree(&self) -> i64 {
        self.branch_degree() - self.m as i64 - 3
    }

    /// Degree of `H^{1,1}`: `2dm - m - 3`.
    pub fn h11_degree(&self) -> i64 {
        2 * self.branch_degree() - self.m as i64 - 3
    }

    /// Degree of `H^1(Θ)_0`: `dm`.
    pub fn theta_degree(&self) -> i64 {
        self.branch_degree()
    }
}

/// `dim T_k = Σ_{i=0}^{d-2} dim S'_{k - i m}`.
pub fn dim_t(k: i64, cover: CoverDatum) -> u64 {
    (0..=cover.d as i64 - 2)
        .map(|i| plane_dim(k - i * cover.m as i64))
        .sum()
}

/// `h^0(X, kL) = Σ_{i=0}^{d-1} h^0(P^2, O(k - i m))` from the eigensheaf
/// decomposition of the pushforward of `O_X`.
pub fn pushforward_sections(k: i64, cover: CoverDatum) -> u64 {
    (0..cover.d as i64)
        .map(|i| plane_dim(k - i * cover.m as i64))
        .sum()
}

/// Geometric genus via the pushforward: `Σ_i h^0(P^2, dm - m - 3 - i m)`.
pub fn pushforward_pg(cover: CoverDatum) -> u64 {
    pushforward_sections(cover.h20_degree(), cover)
}

/// Coefficients `t^0 ..= t^order` of
/// `(1 - t^{m(d-1)}) (1 - t^{md-1})^3 / ((1 - t)^3 (1 - t^m))`.
pub fn milnor_hilbert_series(cover: CoverDatum, order: usize) -> Vec<u64> {
    let n = order + 1;
    let m = cover.m as usize;
    let d = cover.d as usize;
    let mut c = vec![0i64; n];
    c[0] = 1;
    for e in [m * (d - 1), m * d - 1, m * d - 1, m * d - 1] {
        // multiply by (1 - t^e), high to low
        for k in (e..n).rev() {
            c[k] -= c[k - e];
        }
    }
    for step in [1, 1, 1, m] {
        // divide by (1 - t^step)
        for k in step..n {
            c[k] += c[k - step];
        }
    }
    c.into_iter()
        .map(|v| u64::try_from(v).expect("complete-intersection series has nonnegative coefficients"))
        .collect()
}

pub fn milnor_hilbert_series_coeff(k: i64, cover: CoverDatum) -> u64 {
    if k < 0 {
        return 0;
    }
    milnor_hilbert_series(cover, k as usize)[k as usize]
}

/// A branch polynomial `f(x,y,z)` of degree `md` attached to its cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MilnorData {
    cover: CoverDatum,
    f: SparsePoly,
}

impl MilnorData {
    pub fn new(cover: CoverDatum, f: SparsePoly) -> Result<Self> {
        if f.involves_w() {
            return Err(Error::InvolvesW);
        }
        if f.is_zero() {
            return Err(Error::Invalid("branch polynomial is zero".into()));
        }
        let expected = cover.branch_degree();
        match f.weighted_degree(cover.weights()) {
            None => Err(Error::Inhomogeneous),
            Some(found) if found != expected => Err(Error::WrongDegree { expected, found }),
            Some(_) => Ok(MilnorData { cover, f }),
        }
    }

    /// `x^{md} + y^{md} + z^{md}`.
    pub fn fermat(cover: CoverDatum) -> Self {
        let n = cover.branch_degree() as u32;
        let one = Rational::from_integer(1.into());
        let f = SparsePoly::from_terms([
            (Monomial::new(n, 0, 0, 0), one.clone()),
            (Monomial::new(0, n, 0, 0), one.clone()),
            (Monomial::new(0, 0, n, 0), one),
        ]);
        MilnorData { cover, f }
    }

    /// Seeded random `f`: every degree-`md` monomial in `x, y, z` gets a
    /// coefficient drawn uniformly from `{-10, ..., 10} \ {0}`.
    pub fn random(cover: CoverDatum, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = SparsePoly::from_terms(plane_monomials(cover.branch_degree()).into_iter().map(
            |mono| {
                let mut v: i64 = rng.gen_range(-10..10);
                if v >= 0 {
                    v += 1;
                }
                (mono, Rational::from_integer(v.into()))
            },
        ));
        MilnorData { cover, f }
    }

    pub fn cover(&self) -> CoverDatum {
        self.cover
    }

    pub fn f(&self) -> &SparsePoly {
        &self.f
    }

    /// `F = w^d + f`.
    pub fn hypersurface(&self) -> SparsePoly {
        let wd = SparsePoly::from_terms([(
            Monomial::new(0, 0, 0, self.cover.d),
            Rational::from_integer(1.into()),
        )]);
        wd.add(&self.f)
    }

    /// Generators `(w^{d-1}, f_x, f_y, f_z)` reduced mod `p`, with weighted
    /// degrees `(m(d-1), md-1, md-1, md-1)`. Partials vanishing mod `p` are kept
    /// as zero generators.
    pub fn generators(&self, p: Prime) -> Result<Vec<Generator>> {
        let cover = self.cover;
        let mut gens = vec![Generator {
            poly: ModPoly::monomial(Monomial::new(0, 0, 0, cover.d - 1), p),
            degree: cover.m as i64 * (cover.d as i64 - 1),
        }];
        for partial in self.f.gradient_xyz() {
            gens.push(Generator {
                poly: partial.reduce(p)?,
                degree: cover.branch_degree() - 1,
            });
        }
        Ok(gens)
    }
}

/// A homogeneous ideal generator over `F_p` with its weighted degree.
#[derive(Debug, Clone)]
pub struct Generator {
    pub poly: ModPoly,
    pub degree: i64,
}

/// Monomial basis of `S_k` with a reverse lookup.
#[derive(Debug, Clone)]
pub struct GradedPiece {
    degree: i64,
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl GradedPiece {
    pub fn new(ws: WeightSystem, degree: i64) -> Self {
        let basis = monomials_of_degree(ws, degree);
        let index = basis.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        GradedPiece {
            degree,
            basis,
            index,
        }
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, mono: &Monomial) -> Option<usize> {
        self.index.get(mono).copied()
    }

    /// Coordinates of `g · mu` as a sorted sparse row.
    pub fn row(&self, g: &ModPoly, mu: &Monomial) -> Vec<(usize, u64)> {
        let mut row: Vec<(usize, u64)> = g
            .terms()
            .map(|(mono, c)| {
                let col = self
                    .index_of(&mono.mul(mu))
                    .expect("product lies in this graded piece");
                (col, *c)
            })
            .collect();
        row.sort_unstable_by_key(|e| e.0);
        row
    }
}

/// The degree-`k` piece of a homogeneous ideal, eliminated inside `S_k`.
#[derive(Debug, Clone)]
pub struct IdealPiece {
    piece: GradedPiece,
    echelon: Echelon,
}

impl IdealPiece {
    pub fn new(ws: WeightSystem, k: i64, gens: &[Generator], p: Prime) -> Self {
        let piece = GradedPiece::new(ws, k);
        let mut echelon = Echelon::new(piece.dim(), p);
        for g in gens.iter().filter(|g| !g.poly.is_zero()) {
            for mu in monomials_of_degree(ws, k - g.degree) {
                echelon.insert(piece.row(&g.poly, &mu));
            }
        }
        IdealPiece { piece, echelon }
    }

    pub fn piece(&self) -> &GradedPiece {
        &self.piece
    }

    pub fn echelon(&self) -> &Echelon {
        &self.echelon
    }

    pub fn into_echelon(self) -> Echelon {
        self.echelon
    }

    /// Dimension of the quotient in this degree.
    pub fn quotient_dim(&self) -> usize {
        self.piece.dim() - self.echelon.rank()
    }

    /// Monomials whose classes form a basis of the quotient: the non-pivot
    /// columns, i.e. the latest monomials in graded-lex order not spanned
    /// together with earlier ones.
    pub fn quotient_basis(&self) -> Vec<Monomial> {
        self.echelon
            .free_columns()
            .into_iter()
            .map(|c| self.piece.basis[c])
            .collect()
    }
}

/// `dim (S / (gens))_k` over `F_p`; zero for negative `k`.
pub fn dim_quotient(ws: WeightSystem, k: i64, gens: &[Generator], p: Prime) -> usize {
    if k < 0 {
        return 0;
    }
    IdealPiece::new(ws, k, gens, p).quotient_dim()
}

/// `dim R_k` computed by rank mod `p`. An upper bound for the dimension over
/// `Q`; equal to it whenever it matches the series coefficient.
pub fn dim_r(k: i64, md: &MilnorData, p: Prime) -> Result<u64> {
    let gens = md.generators(p)?;
    Ok(dim_quotient(md.cover.weights(), k, &gens, p) as u64)
}

/// Whether `dim_R(k)` equals the series coefficient for every `0 <= k <= up_to`.
pub fn matches_series(md: &MilnorData, p: Prime, up_to: i64) -> Result<bool> {
    let gens = md.generators(p)?;
    let series = milnor_hilbert_series(md.cover, up_to.max(0) as usize);
    let ws = md.cover.weights();
    Ok((0..=up_to).all(|k| dim_quotient(ws, k, &gens, p) as u64 == series[k as usize]))
}

/// `(h^{2,0}, primitive h^{1,1}, dim H^1(Θ)_0)` as graded Milnor dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HodgeTriple {
    pub h20: u64,
    pub h11_prim: u64,
    pub h1_theta0: u64,
}

impl HodgeTriple {
    /// Full `h^{1,1}`: the primitive part plus the polarization class.
    pub fn h11_full(&self) -> u64 {
        self.h11_prim + 1
    }

    /// `2 + 2 h^{2,0} + h^{1,1}` (with `b_1 = 0`).
    pub fn euler_characteristic(&self) -> i64 {
        2 + 2 * self.h20 as i64 + self.h11_full() as i64
    }
}

/// Where Hodge numbers come from.
#[derive(Debug, Clone)]
pub enum HodgeSource {
    /// General `f`: closed-form series coefficients.
    Series(CoverDatum),
    /// A concrete `f`: rank computations mod `p`.
    Polynomial(MilnorData),
}

impl HodgeSource {
    pub fn cover(&self) -> CoverDatum {
        match self {
            HodgeSource::Series(c) => *c,
            HodgeSource::Polynomial(md) => md.cover,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HodgeNumbers {
    pub triple: HodgeTriple,
    /// Names of pieces sitting in negative degree (reported as zero).
    pub negative_degree: Vec<String>,
}

pub fn hodge_numbers(source: &HodgeSource, p: Prime) -> Result<HodgeNumbers> {
    let cover = source.cover();
    let gens = match source {
        HodgeSource::Polynomial(md) => Some(md.generators(p)?),
        HodgeSource::Series(_) => None,
    };
    let dim = |k: i64| -> u64 {
        match &gens {
            Some(g) => dim_quotient(cover.weights(), k, g, p) as u64,
            None => milnor_hilbert_series_coeff(k, cover),
        }
    };
    let degrees = [
        ("h20", cover.h20_degree()),
        ("h11_prim", cover.h11_degree()),
        ("h1_theta0", cover.theta_degree()),
    ];
    let negative_degree = degrees
        .iter()
        .filter(|(_, k)| *k < 0)
        .map(|(name, k)| format!("{name} sits in degree {k}"))
        .collect();
    Ok(HodgeNumbers {
        triple: HodgeTriple {
            h20: dim(degrees[0].1),
            h11_prim: dim(degrees[1].1),
            h1_theta0: dim(degrees[2].1),
        },
        negative_degree,
    })
}

/// Euler number from the cover's topology: `d·e(P^2 - B) + e(B)` for a smooth
/// branch curve `B` of degree `md`.
pub fn topological_euler(cover: CoverDatum) -> i64 {
    let n = cover.branch_degree();
    let e_b = -n * (n - 3);
    cover.d as i64 * (3 - e_b) + e_b
}
