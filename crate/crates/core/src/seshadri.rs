//! Certified interval `[√d − d/m, √d]` for the Seshadri constant of
//! `L = O_X(1)` at a very general point of a simple cyclic `d`-uple plane
//! branched over a curve of degree `md`, with a replayable derivation.
//!
//! The constant itself is never computed. Every comparison with `√d` is exact
//! in `Q(√d)`; floating values appear only in the display fields of a report.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::quad::rat;
use crate::algebra::{plane_dim, quad_compare, QuadExt, Rational};
use crate::error::{Error, Result};
use crate::milnor::{pushforward_sections, CoverDatum};
use crate::picard::dc_multiple_class;

/// `L² = deg X / (product of weights) = md / m = d`.
pub fn self_intersection(cover: CoverDatum) -> u64 {
    let q = Rational::new(BigInt::from(cover.branch_degree()), BigInt::from(cover.m()));
    assert!(q.is_integer(), "md/m is an integer");
    q.to_integer().to_u64().expect("positive")
}

/// A curve through the base point: intersection number with `L` and
/// multiplicity, optionally its class multiple `k` and plane degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveSample {
    pub l_dot_c: u64,
    pub mult: u64,
    pub k: Option<u64>,
    pub plane_degree: Option<u64>,
}

impl CurveSample {
    pub fn new(l_dot_c: u64, mult: u64) -> Result<Self> {
        if l_dot_c == 0 || mult == 0 {
            return Err(Error::Invalid("L.C and multiplicity must be positive".into()));
        }
        Ok(CurveSample {
            l_dot_c,
            mult,
            k: None,
            plane_degree: None,
        })
    }

    /// `π*C₀` for a plane curve of degree `plane_degree`, so `L·C = d·deg`.
    pub fn pullback(d: u64, plane_degree: u64, mult: u64) -> Result<Self> {
        let mut c = CurveSample::new(d * plane_degree, mult)?;
        c.plane_degree = Some(plane_degree);
        c.k = Some(plane_degree);
        Ok(c)
    }
}

/// `(L·C) / mult_x(C)`.
pub fn epsilon_ratio(c: &CurveSample) -> Result<Rational> {
    if c.mult == 0 {
        return Err(Error::DivisionByZero);
    }
    Ok(Rational::new(BigInt::from(c.l_dot_c), BigInt::from(c.mult)))
}

/// `ratio < √d`, decided exactly.
pub fn is_submaximal(ratio: &Rational, d: u64) -> Result<bool> {
    if !ratio.is_positive() {
        return Err(Error::Invalid("ratio must be positive".into()));
    }
    let r = QuadExt::rational(ratio.clone(), d)?;
    Ok(quad_compare(&r, &QuadExt::sqrt(d)?)? == Ordering::Less)
}

/// Upper bound `L² / (√L² − eps)` on `L·C` for an irreducible submaximal
/// curve through a very general point, as an exact element of `Q(√L²)`.
///
/// Defined for every `eps < √L²`; curve ratios are positive, but the
/// threshold `√d − d/m` may not be.
pub fn bauer_degree_bound(l_squared: u64, eps: &QuadExt) -> Result<QuadExt> {
    if eps.radicand() != l_squared {
        return Err(Error::RadicandMismatch(eps.radicand(), l_squared));
    }
    let root = QuadExt::sqrt(l_squared)?;
    if quad_compare(eps, &root)? != Ordering::Less {
        return Err(Error::NotSubmaximal(l_squared));
    }
    QuadExt::rational(rat(l_squared as i64), l_squared)?.checked_div(&root.checked_sub(eps)?)
}

/// `h⁰(X, kL) = Σ_{i=0}^{d-1} h⁰(P², O(k − im))`.
pub fn pullback_section_count(k: i64, cover: CoverDatum) -> u64 {
    pushforward_sections(k, cover)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PullbackCheck {
    pub holds: bool,
    pub ratio: Rational,
}

/// Pullbacks of plane curves are never submaximal at points off the branch
/// curve: the ratio `d·deg / mult` is at least `d >= √d`.
pub fn pullback_not_submaximal_check(plane_degree: u64, mult: u64, d: u64) -> Result<PullbackCheck> {
    if mult == 0 || plane_degree == 0 {
        return Err(Error::Invalid("degree and multiplicity must be positive".into()));
    }
    if mult > plane_degree {
        return Err(Error::Invalid(format!(
            "multiplicity {mult} exceeds plane degree {plane_degree}"
        )));
    }
    let ratio = epsilon_ratio(&CurveSample::pullback(d, plane_degree, mult)?)?;
    let holds = !is_submaximal(&ratio, d)?;
    Ok(PullbackCheck { holds, ratio })
}

/// `n · ratio`: Seshadri ratios scale linearly with the polarization.
pub fn scale_polarization(ratio: &Rational, n: u64) -> Result<Rational> {
    if n == 0 {
        return Err(Error::Invalid("scale must be at least 1".into()));
    }
    Ok(ratio * rat(n as i64))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassSample {
    pub l_dot_c: i64,
    pub k: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionCount {
    pub k: i64,
    pub on_cover: u64,
    pub on_plane: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PullbackSweep {
    pub k: i64,
    pub multiplicities_checked: u64,
    pub min_ratio: String,
}

/// One machine-checkable claim of the contradiction chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "statement", rename_all = "snake_case")]
pub enum Claim {
    /// A submaximal irreducible `C` with `√d − ε_C > d/m`, i.e. `ε_C < threshold`.
    SubmaximalHypothesis {
        d: u64,
        m: u64,
        degree: i64,
        weight_product: u64,
        l_squared: u64,
        threshold: QuadExt,
    },
    /// `dC ∈ |kL|` with `k·L² = d·(L·C)`, hence `k = L·C`.
    MultipleClass {
        d: u64,
        l_squared: u64,
        samples: Vec<ClassSample>,
    },
    /// `k = L·C < L²/(√L² − ε) < L²/(√L² − threshold) = bound`.
    BauerBound {
        l_squared: u64,
        threshold: QuadExt,
        bound: QuadExt,
        k_max: i64,
    },
    /// Below `m` every section of `kL` is pulled back from the plane.
    SectionCounts { counts: Vec<SectionCount> },
    /// The pulled-back curves are not submaximal.
    PullbacksNotSubmaximal {
        d: u64,
        sweeps: Vec<PullbackSweep>,
    },
    Conclusion {
        eliminated: Vec<i64>,
        lower: QuadExt,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub step: usize,
    #[serde(flatten)]
    pub claim: Claim,
    pub conclusion: String,
}

fn require_m(cover: CoverDatum) -> Result<()> {
    if cover.m() < 3 {
        Err(Error::Hypothesis(format!(
            "the Seshadri interval requires m >= 3 (m = {})",
            cover.m()
        )))
    } else {
        Ok(())
    }
}

/// `√d − d/m`.
pub fn lower_bound(cover: CoverDatum) -> Result<QuadExt> {
    let d = cover.d() as u64;
    QuadExt::new(
        -Rational::new(BigInt::from(d), BigInt::from(cover.m())),
        Rational::one(),
        d,
    )
}

/// Build and check the contradiction chain that rules out submaximal curves
/// with `ε_C < √d − d/m`.
pub fn contradiction_chain(cover: CoverDatum) -> Result<Vec<TraceStep>> {
    require_m(cover)?;
    let d = cover.d() as u64;
    let m = cover.m() as u64;
    let l_squared = self_intersection(cover);
    let threshold = lower_bound(cover)?;
    let mut steps = Vec::new();

    steps.push(Claim::SubmaximalHypothesis {
        d,
        m,
        degree: cover.branch_degree(),
        weight_product: m,
        l_squared,
        threshold: threshold.clone(),
    });

    let samples = (1..=m as i64)
        .map(|lc| {
            let mc = dc_multiple_class(cover, lc)?;
            if !mc.integral {
                return Err(Error::Invalid(format!("k is not integral for L.C = {lc}")));
            }
            Ok(ClassSample {
                l_dot_c: lc,
                k: mc.k.to_string(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    steps.push(Claim::MultipleClass {
        d,
        l_squared,
        samples,
    });

    // A threshold at or below zero leaves nothing to eliminate: no curve has ε_C < 0.
    let (bound, k_max) = if threshold.signum() == Ordering::Greater {
        let bound = bauer_degree_bound(l_squared, &threshold)?;
        // integer k strictly below the bound
        let k_max = (bound.ceil() - BigInt::one())
            .to_i64()
            .ok_or_else(|| Error::Invalid("bound out of range".into()))?;
        (bound, k_max)
    } else {
        (QuadExt::rational(Rational::zero(), l_squared)?, 0)
    };
    steps.push(Claim::BauerBound {
        l_squared,
        threshold: threshold.clone(),
        bound,
        k_max,
    });

    let counts: Vec<SectionCount> = (1..=k_max)
        .map(|k| SectionCount {
            k,
            on_cover: pullback_section_count(k, cover),
            on_plane: plane_dim(k),
        })
        .collect();
    steps.push(Claim::SectionCounts { counts });

    let sweeps = (1..=k_max)
        .map(|k| {
            let deg = k as u64;
            let mut min_ratio: Option<Rational> = None;
            for mult in 1..=deg {
                let check = pullback_not_submaximal_check(deg, mult, d)?;
                if !check.holds {
                    return Err(Error::Invalid(format!(
                        "pullback of degree {deg} with multiplicity {mult} is submaximal"
                    )));
                }
                if min_ratio.as_ref().is_none_or(|r| check.ratio < *r) {
                    min_ratio = Some(check.ratio);
                }
            }
            Ok(PullbackSweep {
                k,
                multiplicities_checked: deg,
                min_ratio: min_ratio.expect("k >= 1").to_string(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    steps.push(Claim::PullbacksNotSubmaximal { d, sweeps });

    steps.push(Claim::Conclusion {
        eliminated: (1..=k_max).collect(),
        lower: threshold,
    });

    let trace: Vec<TraceStep> = steps
        .into_iter()
        .enumerate()
        .map(|(i, claim)| {
            let conclusion = conclusion_text(&claim);
            TraceStep {
                step: i + 1,
                claim,
                conclusion,
            }
        })
        .collect();
    for t in &trace {
        check_claim(t)?;
    }
    Ok(trace)
}

fn conclusion_text(claim: &Claim) -> String {
    match claim {
        Claim::SubmaximalHypothesis { threshold, .. } => format!(
            "assume C irreducible and submaximal at a very general x with eps_C < {threshold}"
        ),
        Claim::MultipleClass { .. } => "dC in |kL| with k = L.C".to_string(),
        Claim::BauerBound { bound, k_max, .. } => {
            format!("k = L.C < {bound}, hence k <= {k_max}")
        }
        Claim::SectionCounts { .. } => {
            "h0(X, kL) = h0(P2, kH) for every admissible k: dC is a pullback".to_string()
        }
        Claim::PullbacksNotSubmaximal { .. } => {
            "pullbacks of plane curves are not submaximal: contradiction".to_string()
        }
        Claim::Conclusion { lower, .. } => format!("eps(L; x) >= {lower}"),
    }
}

/// Verify a single step from its recorded inputs alone.
fn check_claim(t: &TraceStep) -> Result<()> {
    let fail = |reason: String| Error::Replay {
        step: t.step,
        reason,
    };
    match &t.claim {
        Claim::SubmaximalHypothesis {
            d,
            m,
            degree,
            weight_product,
            l_squared,
            threshold,
        } => {
            if *degree != (*d * *m) as i64 || *weight_product != *m {
                return Err(fail("degree / weights inconsistent".into()));
            }
            if Rational::new(BigInt::from(*degree), BigInt::from(*weight_product))
                != rat(*l_squared as i64)
            {
                return Err(fail("L^2 != deg / weights".into()));
            }
            let expected = QuadExt::new(
                -Rational::new(BigInt::from(*d), BigInt::from(*m)),
                Rational::one(),
                *d,
            )?;
            if threshold.radicand() != *d || *threshold != expected {
                return Err(fail("threshold != sqrt(d) - d/m".into()));
            }
        }
        Claim::MultipleClass {
            d,
            l_squared,
            samples,
        } => {
            for s in samples {
                let k = Rational::new(
                    BigInt::from(*d) * BigInt::from(s.l_dot_c),
                    BigInt::from(*l_squared),
                );
                if k.to_string() != s.k || k != rat(s.l_dot_c) {
                    return Err(fail(format!("k != L.C for L.C = {}", s.l_dot_c)));
                }
            }
        }
        Claim::BauerBound {
            l_squared,
            threshold,
            bound,
            k_max,
        } => {
            if threshold.signum() == Ordering::Greater {
                let b = bauer_degree_bound(*l_squared, threshold).map_err(|e| fail(e.to_string()))?;
                if b != *bound {
                    return Err(fail("Bauer bound mismatch".into()));
                }
                // k_max is the largest integer strictly below the bound
                let below = QuadExt::rational(rat(*k_max), *l_squared)?;
                let above = QuadExt::rational(rat(*k_max + 1), *l_squared)?;
                if quad_compare(&below, bound)? != Ordering::Less
                    || quad_compare(&above, bound)? == Ordering::Less
                {
                    return Err(fail("k_max is not the strict integer bound".into()));
                }
            } else if *k_max != 0 {
                return Err(fail("nonpositive threshold must eliminate nothing".into()));
            }
        }
        Claim::SectionCounts { counts } => {
            if let Some(c) = counts.iter().find(|c| c.on_cover != c.on_plane) {
                return Err(fail(format!("h0(X, {}L) exceeds h0(P2, {}H)", c.k, c.k)));
            }
        }
        Claim::PullbacksNotSubmaximal { d, sweeps } => {
            for s in sweeps {
                let r = crate::algebra::parse_rational(&s.min_ratio)?;
                if is_submaximal(&r, *d)? {
                    return Err(fail(format!("pullback ratio {r} is submaximal")));
                }
            }
        }
        Claim::Conclusion { eliminated, lower } => {
            if eliminated.iter().enumerate().any(|(i, k)| *k != i as i64 + 1) {
                return Err(fail("eliminated classes are not 1..=k_max".into()));
            }
            if lower.b() != &Rational::one() {
                return Err(fail("lower bound must be sqrt(d) + rational".into()));
            }
        }
    }
    if t.conclusion != conclusion_text(&t.claim) {
        return Err(fail("conclusion text does not follow from the claim".into()));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeshadriReport {
    pub d: u32,
    pub m: u32,
    pub lower: QuadExt,
    pub upper: QuadExt,
    pub clamped: bool,
    pub trace: Vec<TraceStep>,
    pub lower_float: f64,
    pub upper_float: f64,
}

/// Round to 12 significant digits for display.
pub fn display_float(x: f64) -> f64 {
    format!("{x:.11e}").parse().unwrap_or(x)
}

pub fn seshadri_interval(cover: CoverDatum) -> Result<SeshadriReport> {
    require_m(cover)?;
    let d = cover.d() as u64;
    let upper = QuadExt::sqrt(d)?;
    let lower = lower_bound(cover)?;
    let clamped = lower.signum() != Ordering::Greater;
    let trace = contradiction_chain(cover)?;
    Ok(SeshadriReport {
        d: cover.d(),
        m: cover.m(),
        lower_float: display_float(lower.to_f64()),
        upper_float: display_float(upper.to_f64()),
        lower,
        upper,
        clamped,
        trace,
    })
}

/// Re-check every recorded step and confirm the report's exact values.
/// Returns the certified lower bound.
pub fn replay(report: &SeshadriReport) -> Result<QuadExt> {
    let cover = CoverDatum::new(report.d, report.m)?;
    for t in &report.trace {
        check_claim(t)?;
    }
    let fresh = seshadri_interval(cover)?;
    for (i, (a, b)) in report.trace.iter().zip(&fresh.trace).enumerate() {
        if a != b {
            return Err(Error::Replay {
                step: i + 1,
                reason: "recorded step differs from recomputation".into(),
            });
        }
    }
    if report.trace.len() != fresh.trace.len() {
        return Err(Error::Replay {
            step: report.trace.len().min(fresh.trace.len()) + 1,
            reason: "trace length differs".into(),
        });
    }
    if report.lower != fresh.lower
        || report.upper != fresh.upper
        || report.clamped != fresh.clamped
        || report.lower.radicand() != fresh.lower.radicand()
    {
        return Err(Error::Replay {
            step: report.trace.len(),
            reason: "interval endpoints differ".into(),
        });
    }
    Ok(fresh.lower)
}
