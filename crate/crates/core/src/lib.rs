//! Exact symbolic machinery for the affine varieties
//! `X_m(n, p) = { x^n y + z^q + t^r + x0 p(x) = 0 }` where `x = x0 x1 ... xm`.
//!
//! The crate builds the defining polynomials, checks smoothness through the
//! Jacobian criterion, constructs and verifies explicit certificates that the
//! cylinders `X_m(n, p) x A^1` are all isomorphic (pointwise and over a
//! parameter space), decides scaling equivalence of the polynomials `p`, and
//! checks locally nilpotent derivations of the coordinate rings.
//!
//! Everything is exact: coefficients are arbitrary precision rationals or
//! polynomials over them.

pub mod arith;
pub mod batch;
pub mod classify;
pub mod cli;
pub mod cylinder;
pub mod error;
pub mod groebner;
pub mod lnd;
pub mod variety;

pub use arith::{MultiPoly, Rational, Ring, TruncSeries, UniPoly};
pub use error::{Error, Result};
