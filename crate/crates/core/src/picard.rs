//! Surjectivity certificates for the multiplication maps whose surjectivity
//! forces Picard number one on a very general simple cyclic cover.
//!
//! Two rows are checked:
//!
//! * T-level: `S'_{md} ⊗ T_{md-m-3} -> T_{2md-m-3}` with `T = S/(w^{d-1})`.
//!   Products of monomials are monomials, so this is a combinatorial check.
//! * R-level: `R_{dm} ⊗ R_{dm-m-3} -> R_{2dm-m-3}` in the Milnor algebra of a
//!   concrete `f`, certified by rank mod `p`. Full rank mod `p` implies full
//!   rank over `Q`, and surjectivity for one `f` gives it for very general `f`
//!   by semicontinuity. It says nothing about every `f`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize, Serializer};

use crate::algebra::{monomials_of_degree, plane_monomials, Echelon, Monomial, Prime, Rational};
use crate::error::{Error, Result};
use crate::milnor::{
    milnor_hilbert_series_coeff, CoverDatum, GradedPiece, IdealPiece, MilnorData,
};
use crate::seshadri::self_intersection;
use crate::smooth::{smoothness_heuristic, SmoothnessReport, SmoothnessVerdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MapLabel {
    #[serde(rename = "T-level")]
    TLevel,
    #[serde(rename = "R-level")]
    RLevel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum PrimeTag {
    Prime(u64),
    Exact(ExactTag),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExactTag {
    #[serde(rename = "exact")]
    Exact,
}

impl PrimeTag {
    pub const EXACT: PrimeTag = PrimeTag::Exact(ExactTag::Exact);
}

impl Serialize for PrimeTag {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            PrimeTag::Prime(p) => s.serialize_u64(*p),
            PrimeTag::Exact(_) => s.serialize_str("exact"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "surjective")]
    Surjective,
    #[serde(rename = "not-surjective-mod-p")]
    NotSurjectiveModP,
    #[serde(rename = "vacuous")]
    Vacuous,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurjectivityCertificate {
    pub map: MapLabel,
    pub source_dim: u64,
    pub target_dim: u64,
    pub achieved_rank: u64,
    pub prime: PrimeTag,
    pub seed: Option<u64>,
    pub verdict: Verdict,
}

impl SurjectivityCertificate {
    fn build(
        map: MapLabel,
        source_dim: u64,
        target_dim: u64,
        achieved_rank: u64,
        prime: PrimeTag,
        seed: Option<u64>,
    ) -> Self {
        debug_assert!(achieved_rank <= source_dim.min(target_dim));
        let verdict = if achieved_rank == target_dim {
            Verdict::Surjective
        } else {
            Verdict::NotSurjectiveModP
        };
        SurjectivityCertificate {
            map,
            source_dim,
            target_dim,
            achieved_rank,
            prime,
            seed,
            verdict,
        }
    }

    fn vacuous(map: MapLabel, prime: PrimeTag, seed: Option<u64>) -> Self {
        SurjectivityCertificate {
            map,
            source_dim: 0,
            target_dim: 0,
            achieved_rank: 0,
            prime,
            seed,
            verdict: Verdict::Vacuous,
        }
    }

    pub fn is_surjective(&self) -> bool {
        self.verdict == Verdict::Surjective
    }
}

/// `md - m - 3 >= m(d - 2)`: every summand `w^i S'_{k - im}` of `T_k` is
/// nonzero in the degree of `H^{2,0}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummandCondition {
    pub holds: bool,
    pub lhs: i64,
    pub rhs: i64,
}

pub fn summand_condition(cover: CoverDatum) -> SummandCondition {
    let lhs = cover.h20_degree();
    let rhs = cover.m() as i64 * (cover.d() as i64 - 2);
    let holds = lhs >= rhs;
    assert_eq!(holds, cover.m() >= 3, "summand condition is equivalent to m >= 3");
    SummandCondition { holds, lhs, rhs }
}

/// Monomials of `T_k`: those of `S_k` with `w`-exponent at most `d - 2`.
fn t_basis(cover: CoverDatum, k: i64) -> Vec<Monomial> {
    monomials_of_degree(cover.weights(), k)
        .into_iter()
        .filter(|mono| mono.w_exponent() + 2 <= cover.d())
        .collect()
}

pub fn t_level_surjective(cover: CoverDatum, p: Prime) -> SurjectivityCertificate {
    let low = cover.h20_degree();
    if low < 0 {
        return SurjectivityCertificate::vacuous(MapLabel::TLevel, PrimeTag::EXACT, None);
    }
    let plane = plane_monomials(cover.branch_degree());
    let factor = t_basis(cover, low);
    let target = t_basis(cover, cover.h11_degree());
    let index = GradedPiece::new(cover.weights(), cover.h11_degree());
    // target coordinates are the T-monomials; map S-indices onto them
    let mut t_index = vec![usize::MAX; index.dim()];
    for (i, mono) in target.iter().enumerate() {
        t_index[index.index_of(mono).expect("T-monomial lies in S")] = i;
    }
    let mut ech = Echelon::new(target.len(), p);
    for a in &plane {
        for b in &factor {
            let prod = a.mul(b);
            if prod.w_exponent() + 1 >= cover.d() {
                continue; // killed by w^{d-1}
            }
            let col = t_index[index.index_of(&prod).expect("degree matches")];
            ech.insert_unit(col);
        }
    }
    SurjectivityCertificate::build(
        MapLabel::TLevel,
        (plane.len() * factor.len()) as u64,
        target.len() as u64,
        ech.rank() as u64,
        PrimeTag::EXACT,
        None,
    )
}

pub fn r_level_surjective(
    md: &MilnorData,
    p: Prime,
    seed: Option<u64>,
) -> Result<SurjectivityCertificate> {
    let cover = md.cover();
    let tag = PrimeTag::Prime(p.get());
    if cover.h20_degree() < 0 {
        return Ok(SurjectivityCertificate::vacuous(MapLabel::RLevel, tag, seed));
    }
    let ws = cover.weights();
    let gens = md.generators(p)?;
    let theta = IdealPiece::new(ws, cover.theta_degree(), &gens, p).quotient_basis();
    let h20 = IdealPiece::new(ws, cover.h20_degree(), &gens, p).quotient_basis();
    let target = IdealPiece::new(ws, cover.h11_degree(), &gens, p);
    let target_dim = target.quotient_dim() as u64;

    let products: BTreeSet<usize> = theta
        .iter()
        .flat_map(|a| h20.iter().map(move |b| a.mul(b)))
        .map(|prod| target.piece().index_of(&prod).expect("degree matches"))
        .collect();
    let mut ech = target.into_echelon();
    let before = ech.rank();
    for col in products {
        ech.insert_unit(col);
    }
    Ok(SurjectivityCertificate::build(
        MapLabel::RLevel,
        (theta.len() * h20.len()) as u64,
        target_dim,
        (ech.rank() - before) as u64,
        tag,
        seed,
    ))
}

/// Computed Milnor dimensions against the complete-intersection series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Genericity {
    pub series_h20: u64,
    pub series_h11_prim: u64,
    pub series_h1_theta0: u64,
    pub computed_h20: u64,
    pub computed_h11_prim: u64,
    pub computed_h1_theta0: u64,
    pub matches: bool,
}

pub fn genericity(md: &MilnorData, p: Prime) -> Result<Genericity> {
    let cover = md.cover();
    let gens = md.generators(p)?;
    let ws = cover.weights();
    let dim = |k: i64| crate::milnor::dim_quotient(ws, k, &gens, p) as u64;
    let series = |k: i64| milnor_hilbert_series_coeff(k, cover);
    let (a, b, c) = (cover.h20_degree(), cover.h11_degree(), cover.theta_degree());
    let g = Genericity {
        series_h20: series(a),
        series_h11_prim: series(b),
        series_h1_theta0: series(c),
        computed_h20: dim(a),
        computed_h11_prim: dim(b),
        computed_h1_theta0: dim(c),
        matches: false,
    };
    Ok(Genericity {
        matches: g.series_h20 == g.computed_h20
            && g.series_h11_prim == g.computed_h11_prim
            && g.series_h1_theta0 == g.computed_h1_theta0,
        ..g
    })
}

pub const POSITIVE_VERDICT: &str = "Picard-rank-1 criterion verified for this f";
pub const SEMICONTINUITY_NOTE: &str = "surjectivity for this f implies surjectivity for very general f \
    (semicontinuity); no claim is made for every f";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PicardReport {
    pub d: u32,
    pub m: u32,
    pub seed: Option<u64>,
    pub prime: u64,
    pub f_source: String,
    pub smoothness: SmoothnessVerdict,
    pub smoothness_detail: SmoothnessReport,
    pub summand: bool,
    pub summand_detail: SummandCondition,
    pub t_level: SurjectivityCertificate,
    pub r_level: SurjectivityCertificate,
    pub genericity: Genericity,
    pub positive: bool,
    pub verdict: String,
    pub note: String,
}

/// Hypothesis check shared by the witness and the CLI.
pub fn require_m_at_least_three(cover: CoverDatum) -> Result<()> {
    let sc = summand_condition(cover);
    if sc.holds {
        Ok(())
    } else {
        Err(Error::Hypothesis(format!(
            "m >= 3 required for the Picard-rank-one criterion (m = {}; summand_condition = false: {} < {})",
            cover.m(),
            sc.lhs,
            sc.rhs
        )))
    }
}

/// Run every certificate for one branch polynomial. With `f = None` a random
/// `f` is drawn from `seed`.
pub fn picard_rank_one_witness(
    cover: CoverDatum,
    seed: u64,
    p: Prime,
    f: Option<(MilnorData, String)>,
) -> Result<PicardReport> {
    require_m_at_least_three(cover)?;
    let (md, f_source, seed_used) = match f {
        Some((md, label)) => (md, label, None),
        None => (MilnorData::random(cover, seed), "random".to_string(), Some(seed)),
    };
    if md.cover() != cover {
        return Err(Error::Invalid("branch polynomial belongs to a different cover".into()));
    }
    let smooth = smoothness_heuristic(&md, p, seed)
        .map_err(|e| Error::Invalid(format!("smoothness heuristic: {e}")))?;
    let summand = summand_condition(cover);
    let t_level = t_level_surjective(cover, p);
    let r_level = r_level_surjective(&md, p, seed_used)
        .map_err(|e| Error::Invalid(format!("R-level certificate: {e}")))?;
    let gen = genericity(&md, p)?;

    let mut failures = Vec::new();
    if smooth.verdict != SmoothnessVerdict::HeuristicPass {
        failures.push("smoothness heuristic failed");
    }
    if !t_level.is_surjective() {
        failures.push("T-level map not surjective");
    }
    if !r_level.is_surjective() {
        failures.push("R-level map not surjective mod p");
    }
    if !gen.matches {
        failures.push("Milnor dimensions differ from the series (non-generic f)");
    }
    let positive = failures.is_empty();
    let verdict = if positive {
        POSITIVE_VERDICT.to_string()
    } else {
        format!("certificate negative: {}; resample f", failures.join(", "))
    };
    Ok(PicardReport {
        d: cover.d(),
        m: cover.m(),
        seed: seed_used,
        prime: p.get(),
        f_source,
        smoothness: smooth.verdict,
        smoothness_detail: smooth,
        summand: summand.holds,
        summand_detail: summand,
        t_level,
        r_level,
        genericity: gen,
        positive,
        verdict,
        note: SEMICONTINUITY_NOTE.to_string(),
    })
}

/// `k` with `dC ∈ |kL|`: intersecting with `L` gives `k·L² = d·(L·C)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultipleClass {
    pub k: Rational,
    pub integral: bool,
}

pub fn dc_multiple_class(cover: CoverDatum, l_dot_c: i64) -> Result<MultipleClass> {
    if l_dot_c <= 0 {
        return Err(Error::Invalid(format!("L.C must be positive, got {l_dot_c}")));
    }
    let l_squared = self_intersection(cover);
    let k = Rational::new(
        BigInt::from(cover.d()) * BigInt::from(l_dot_c),
        BigInt::from(l_squared),
    );
    let integral = k.denom().is_one();
    debug_assert_eq!(k, Rational::from_integer(BigInt::from(l_dot_c)));
    Ok(MultipleClass { k, integral })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cover(d: u32, m: u32) -> CoverDatum {
        CoverDatum::new(d, m).unwrap()
    }

    fn p() -> Prime {
        Prime::default()
    }

    #[test]
    fn summand_examples() {
        let sc = summand_condition(cover(2, 3));
        assert!(sc.holds);
        assert_eq!((sc.lhs, sc.rhs), (0, 0));
        let sc = summand_condition(cover(5, 2));
        assert!(!sc.holds);
        assert_eq!((sc.lhs, sc.rhs), (5, 6));
        let sc = summand_condition(cover(2, 2));
        assert!(!sc.holds);
        assert_eq!((sc.lhs, sc.rhs), (-1, 0));
    }

    #[test]
    fn t_level_examples() {
        let c = t_level_surjective(cover(3, 3), p());
        assert_eq!((c.source_dim, c.target_dim, c.achieved_rank), (605, 146, 146));
        assert_eq!(c.verdict, Verdict::Surjective);

        let c = t_level_surjective(cover(2, 3), p());
        assert_eq!((c.source_dim, c.target_dim, c.achieved_rank), (28, 28, 28));
        assert!(c.is_surjective());

        let c = t_level_surjective(cover(2, 4), p());
        assert_eq!((c.source_dim, c.target_dim, c.achieved_rank), (135, 55, 55));
        assert!(c.is_surjective());
    }

    #[test]
    fn t_level_vacuous_and_failing_cases() {
        let c = t_level_surjective(cover(2, 2), p());
        assert_eq!(c.verdict, Verdict::Vacuous);
        // d=5, m=2: the summand w^3 S'_9 of T_15 is never reached
        let c = t_level_surjective(cover(5, 2), p());
        assert_eq!(c.verdict, Verdict::NotSurjectiveModP);
        assert!(c.achieved_rank < c.target_dim);
    }

    #[test]
    fn r_level_fermat_k3() {
        let md = MilnorData::fermat(cover(2, 3));
        let c = r_level_surjective(&md, p(), None).unwrap();
        assert_eq!((c.source_dim, c.target_dim, c.achieved_rank), (19, 19, 19));
        assert!(c.is_surjective());
    }

    #[test]
    fn r_level_random_octic() {
        let md = MilnorData::random(cover(2, 4), 1);
        let c = r_level_surjective(&md, p(), Some(1)).unwrap();
        assert_eq!(c.target_dim, 37);
        assert!(c.is_surjective());
        assert_eq!(c.seed, Some(1));
    }

    #[test]
    fn witness_refuses_small_m() {
        let err = picard_rank_one_witness(cover(2, 2), 1, p(), None).unwrap_err();
        assert!(matches!(err, Error::Hypothesis(_)));
        assert!(err.to_string().contains("summand_condition = false"));
    }

    #[test]
    fn witness_positive_for_octic() {
        let r = picard_rank_one_witness(cover(2, 4), 1, p(), None).unwrap();
        assert!(r.positive, "{}", r.verdict);
        assert_eq!(r.verdict, POSITIVE_VERDICT);
    }

    #[test]
    fn multiple_class_examples() {
        for (d, lc) in [(2, 3), (5, 1), (3, 7)] {
            let mc = dc_multiple_class(cover(d, 3), lc).unwrap();
            assert_eq!(mc.k, Rational::from_integer(lc.into()));
            assert!(mc.integral);
        }
        assert!(dc_multiple_class(cover(2, 3), 0).is_err());
    }
}
