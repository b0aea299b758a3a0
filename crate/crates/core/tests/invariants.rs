//! Property and oracle checks for the Milnor, Picard and Seshadri modules.

use std::cmp::Ordering;

use cyclic_planes::algebra::{
    monomials_of_degree, parse_rational, plane_dim, plane_monomials, quad_compare, ModPoly, Prime,
    QuadExt, Rational, SparsePoly,
};
use cyclic_planes::milnor::{
    dim_quotient, dim_r, dim_t, matches_series, milnor_hilbert_series, pushforward_pg,
    CoverDatum, Generator, MilnorData,
};
use cyclic_planes::picard::{
    genericity, r_level_surjective, summand_condition, t_level_surjective,
};
use cyclic_planes::seshadri::{
    bauer_degree_bound, contradiction_chain, pullback_not_submaximal_check,
    pullback_section_count, replay, seshadri_interval, SeshadriReport,
};
use num_bigint::BigInt;
use serde_json::Value;

fn cover(d: u32, m: u32) -> CoverDatum {
    CoverDatum::new(d, m).unwrap()
}

fn binom2(n: i64) -> i64 {
    if n < 0 {
        0
    } else {
        (n + 2) * (n + 1) / 2
    }
}

/// Block formula for general f: `R_k = ⊕_{j<d-1} w^j (S'/J_f)_{k-jm}` with
/// `(S'/J_f)_n = Σ_i (-1)^i C(3,i) C(n - i(md-1) + 2, 2)`.
fn block_formula(k: i64, d: i64, m: i64) -> i64 {
    let jac = |n: i64| -> i64 {
        [1, -3, 3, -1]
            .iter()
            .enumerate()
            .map(|(i, s)| s * binom2(n - i as i64 * (m * d - 1)))
            .sum()
    };
    (0..=d - 2).map(|j| jac(k - j * m)).sum()
}

#[test]
fn series_matches_block_formula() {
    for d in 2..=6 {
        for m in 1..=6 {
            let c = cover(d, m);
            let s = milnor_hilbert_series(c, 60);
            for (k, v) in s.iter().enumerate() {
                assert_eq!(*v as i64, block_formula(k as i64, d as i64, m as i64), "d={d} m={m} k={k}");
            }
        }
    }
}

#[test]
fn dim_t_matches_monomial_count() {
    for d in 2..=5 {
        for m in 1..=5 {
            let c = cover(d, m);
            for k in 0..=30 {
                let count = monomials_of_degree(c.weights(), k)
                    .iter()
                    .filter(|mono| mono.w_exponent() + 2 <= d)
                    .count();
                assert_eq!(dim_t(k, c), count as u64);
                let summands: u64 = (0..=d as i64 - 2).map(|i| plane_dim(k - i * m as i64)).sum();
                assert_eq!(dim_t(k, c), summands);
            }
        }
    }
}

#[test]
fn h20_equals_pushforward_genus() {
    let p = Prime::default();
    for d in 2..=6 {
        for m in 1..=6 {
            let c = cover(d, m);
            let md = MilnorData::random(c, 1);
            let expected: u64 = (0..d as i64)
                .map(|i| plane_dim(c.h20_degree() - i * m as i64))
                .sum();
            assert_eq!(pushforward_pg(c), expected);
            assert_eq!(dim_r(c.h20_degree(), &md, p).unwrap(), expected, "d={d} m={m}");
        }
    }
}

#[test]
fn random_f_realizes_the_series() {
    let p = Prime::default();
    for (d, m) in [(2, 3), (2, 4), (3, 3), (3, 4), (2, 5), (3, 5)] {
        let c = cover(d, m);
        let ok = (1..=5).any(|seed| matches_series(&MilnorData::random(c, seed), p, c.h11_degree()).unwrap());
        assert!(ok, "no generic sample in 5 seeds for d={d} m={m}");
    }
}

#[test]
fn extra_generators_never_increase_dimension() {
    let p = Prime::default();
    let c = cover(2, 3);
    let ws = c.weights();
    for seed in 1..=4u64 {
        let md = MilnorData::random(c, seed);
        let gens = md.generators(p).unwrap();
        for extra_deg in [2i64, 4, 5] {
            // an arbitrary homogeneous extra generator built from another seed
            let other = MilnorData::random(cover(2, 3), seed + 100);
            let mut terms = other.f().reduce(p).unwrap();
            for _ in 0..(6 - extra_deg) {
                terms = drop_x(&terms, p);
            }
            let mut grown = gens.clone();
            grown.push(Generator {
                poly: terms,
                degree: extra_deg,
            });
            for k in 0..=9 {
                assert!(dim_quotient(ws, k, &grown, p) <= dim_quotient(ws, k, &gens, p));
            }
        }
    }
}

/// Divide out one `x` from the terms that have one; drop the rest.
fn drop_x(poly: &ModPoly, p: Prime) -> ModPoly {
    let mut out = SparsePoly::zero();
    for (mono, c) in poly.terms() {
        if mono.0[0] > 0 {
            let mut e = mono.0;
            e[0] -= 1;
            out.add_term(
                cyclic_planes::algebra::Monomial(e),
                Rational::from_integer(BigInt::from(*c)),
            );
        }
    }
    out.reduce(p).unwrap()
}

#[test]
fn fermat_partials_form_a_regular_sequence() {
    let p = Prime::default();
    for (d, m) in [(2, 3), (3, 3), (2, 4)] {
        let c = cover(d, m);
        assert!(matches_series(&MilnorData::fermat(c), p, c.h11_degree()).unwrap());
    }
}

#[test]
fn summand_condition_is_m_at_least_three() {
    for d in 2..=10 {
        for m in 1..=10 {
            assert_eq!(summand_condition(cover(d, m)).holds, m >= 3, "d={d} m={m}");
        }
    }
}

#[test]
fn t_level_surjective_on_grid() {
    for d in 2..=4 {
        for m in 3..=5 {
            let cert = t_level_surjective(cover(d, m), Prime::default());
            assert!(cert.is_surjective(), "d={d} m={m}: {cert:?}");
            assert_eq!(cert.target_dim, dim_t(cover(d, m).h11_degree(), cover(d, m)));
        }
    }
}

#[test]
fn two_primes_agree() {
    let p1 = Prime::default();
    let p2 = Prime::new(1_000_003).unwrap();
    for (d, m) in [(2, 3), (2, 4), (3, 3)] {
        let md = MilnorData::random(cover(d, m), 2);
        let a = r_level_surjective(&md, p1, Some(2)).unwrap();
        let b = r_level_surjective(&md, p2, Some(2)).unwrap();
        assert!(a.is_surjective() && b.is_surjective());
        assert_eq!(a.target_dim, b.target_dim);
        assert!(t_level_surjective(cover(d, m), p2).is_surjective());
    }
}

#[test]
fn r_level_dims_follow_the_series() {
    let p = Prime::default();
    for (d, m) in [(2, 3), (2, 4), (3, 3), (3, 4)] {
        let c = cover(d, m);
        let md = MilnorData::random(c, 1);
        let g = genericity(&md, p).unwrap();
        if g.matches {
            let cert = r_level_surjective(&md, p, Some(1)).unwrap();
            assert_eq!(cert.target_dim, g.series_h11_prim);
            assert_eq!(cert.source_dim, g.series_h1_theta0 * g.series_h20);
        }
    }
}

fn q(a: &str, b: &str, rad: u64) -> QuadExt {
    QuadExt::new(parse_rational(a).unwrap(), parse_rational(b).unwrap(), rad).unwrap()
}

#[test]
fn bauer_bound_is_increasing() {
    for d in [2u64, 3, 5] {
        let root = QuadExt::sqrt(d).unwrap();
        let grid: Vec<QuadExt> = (0..)
            .map(|j| q(&format!("{j}/100"), "0", d))
            .take_while(|e| quad_compare(e, &root).unwrap() == Ordering::Less)
            .collect();
        assert!(grid.len() >= 100);
        let bounds: Vec<QuadExt> = grid.iter().map(|e| bauer_degree_bound(d, e).unwrap()).collect();
        for w in bounds.windows(2) {
            assert_eq!(quad_compare(&w[0], &w[1]).unwrap(), Ordering::Less);
        }
    }
}

#[test]
fn hinge_identity() {
    for d in 2..=10u64 {
        for m in 3..=10i64 {
            let eps = q(&format!("-{d}/{m}"), "1", d);
            let b = bauer_degree_bound(d, &eps);
            assert_eq!(b.unwrap().to_rational(), Some(Rational::from_integer(m.into())));
        }
    }
}

#[test]
fn section_count_dichotomy() {
    for d in 2..=6 {
        for m in 3..=8 {
            let c = cover(d, m);
            for k in 0..m as i64 {
                assert_eq!(pullback_section_count(k, c), plane_dim(k));
            }
            assert_eq!(pullback_section_count(m as i64, c), plane_dim(m as i64) + 1);
        }
    }
}

#[test]
fn pullbacks_are_never_submaximal() {
    for d in 1..=6 {
        for deg in 1..=20 {
            for mult in 1..=deg {
                assert!(pullback_not_submaximal_check(deg, mult, d).unwrap().holds);
            }
        }
    }
}

fn has_float(v: &Value) -> bool {
    match v {
        Value::Number(n) => n.is_f64(),
        Value::Array(a) => a.iter().any(has_float),
        Value::Object(o) => o.values().any(has_float),
        _ => false,
    }
}

#[test]
fn traces_are_float_free_and_replayable() {
    for d in 2..=7 {
        for m in 3..=7 {
            let r = seshadri_interval(cover(d, m)).unwrap();
            let json = serde_json::to_string(&r).unwrap();
            let v: Value = serde_json::from_str(&json).unwrap();
            assert!(!has_float(&v["trace"]), "float in trace for d={d} m={m}");
            let back: SeshadriReport = serde_json::from_str(&json).unwrap();
            assert_eq!(back, r);
            assert_eq!(replay(&back).unwrap(), r.lower);
            assert_eq!(serde_json::to_string(&back).unwrap(), json);
        }
    }
}

#[test]
fn chain_bound_is_m_minus_one() {
    for d in 2..=9 {
        for m in 3..=9 {
            let trace = contradiction_chain(cover(d, m)).unwrap();
            let last = serde_json::to_value(&trace.last().unwrap().claim).unwrap();
            let eliminated = last["eliminated"].as_array().unwrap().len() as u32;
            // √d > d/m  ⇔  m² > d
            let positive = m * m > d;
            if positive {
                assert_eq!(eliminated, m - 1, "d={d} m={m}");
            }
        }
    }
}

#[test]
fn plane_monomial_basis_sizes() {
    for k in 0..12 {
        assert_eq!(plane_monomials(k).len() as u64, plane_dim(k));
    }
}
