//! Exact arithmetic: rationals, sparse multivariate and dense univariate
//! polynomials, truncated power series, extended gcd and resultants.

pub mod euclid;
pub mod multipoly;
pub mod rational;
pub mod resultant;
pub mod ring;
pub mod series;
pub mod text;
pub mod unipoly;

pub use euclid::ext_gcd;
pub use multipoly::{poly_arith, vars, Monomial, MultiPoly, PolyOp, Vars};
pub use rational::Rational;
pub use resultant::{bareiss_det, resultant, sylvester_bezout, sylvester_matrix};
pub use ring::{Field, Ring};
pub use series::{series_exp, series_inverse, series_log, TruncSeries};
pub use unipoly::{qpoly, UniPoly};

/// Coefficient ring of the parameter space `A = Q[a2, ..., a_{n-2}]`.
pub type ParamPoly = MultiPoly<Rational>;
