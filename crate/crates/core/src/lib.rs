//! Exact invariants and certificates for simple cyclic covers of the plane
//! `w^d + f(x, y, z) = 0` in `P(1, 1, 1, m)`:
//!
//! * [`milnor`]: graded dimensions of the Milnor algebra, Hilbert series and
//!   Hodge numbers;
//! * [`picard`]: surjectivity certificates for the multiplication maps that
//!   force Picard number one for very general `f`;
//! * [`seshadri`]: the certified interval `[√d − d/m, √d]` for the Seshadri
//!   constant at a very general point, with a replayable derivation trace.
//!
//! All arithmetic is exact: rationals, `F_p`, and `Q(√d)`.

pub mod algebra;
pub mod cli;
pub mod error;
pub mod milnor;
pub mod picard;
pub mod seshadri;
pub mod smooth;

pub use error::{Error, Result};
