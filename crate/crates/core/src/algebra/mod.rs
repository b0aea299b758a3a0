//! Exact arithmetic substrate: rationals, prime fields, `Q(√d)`, weighted
//! monomials, sparse polynomials and rank over `F_p`.

pub mod field;
pub mod monomial;
pub mod poly;
pub mod quad;
pub mod rank;

use num_bigint::BigInt;
use num_rational::Ratio;

use crate::error::{Error, Result};

pub use field::{Prime, DEFAULT_PRIME};
pub use monomial::{dim_s, monomials_of_degree, plane_dim, plane_monomials, Monomial, WeightSystem};
pub use poly::{ModPoly, PolyFile, SparsePoly, Term};
pub use quad::{quad_compare, QuadExt};
pub use rank::{rank_mod_p, Echelon, RankMatrix};

pub type Rational = Ratio<BigInt>;

/// Parse `"3"`, `"-2/3"` and the like.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let r: Rational = t
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    Ok(r)
}

pub fn rational_from(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}
