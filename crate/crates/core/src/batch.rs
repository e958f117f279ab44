//! Batch drivers. With the `parallel` feature (on by default) work is spread
//! over the rayon pool; without it every driver runs sequentially.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{Rational, UniPoly};
use crate::classify::{scaling_equivalent, ScalingWitness};
use crate::cylinder::{build_cylinder_certificate, verify_cylinder_certificate, VerifyReport};
use crate::error::Result;
use crate::variety::VarietySpec;

/// Order-preserving map, always sequential.
pub fn seq_map<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    items.iter().map(f).collect()
}

/// Order-preserving map, parallel when the `parallel` feature is enabled.
#[cfg(feature = "parallel")]
pub fn par_map<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn par_map<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    seq_map(items, f)
}

/// Builds and verifies a certificate for every spec.
pub fn certify_all(specs: &[VarietySpec], parallel: bool) -> Vec<Result<VerifyReport>> {
    let job = |s: &VarietySpec| build_cylinder_certificate(s).map(|c| verify_cylinder_certificate(s, &c));
    if parallel {
        par_map(specs, job)
    } else {
        seq_map(specs, job)
    }
}

/// All polynomials of degree `<= max_deg` with integer coefficients in `-bound..=bound` and `p(0) != 0`.
pub fn small_poly_corpus(max_deg: usize, bound: i64) -> Vec<UniPoly> {
    let width = (2 * bound + 1) as usize;
    let total = width.pow(max_deg as u32 + 1);
    (0..total)
        .filter_map(|mut idx| {
            let mut cs = Vec::with_capacity(max_deg + 1);
            for _ in 0..=max_deg {
                cs.push(Rational::from_int((idx % width) as i64 - bound));
                idx /= width;
            }
            (!cs[0].is_zero()).then(|| UniPoly::new(cs))
        })
        .collect()
}

/// Shape bounds for [`random_specs`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CorpusShape {
    pub max_m: usize,
    pub max_n: u32,
    pub max_deg: usize,
}

pub const QR_PAIRS: [(u32, u32); 3] = [(2, 3), (3, 4), (2, 5)];

/// `count` valid specs drawn from a seeded ChaCha stream; same seed, same corpus.
///
/// Coefficients of `p` are `a/b` with `a` in `-3..=3`, `b` in `1..=2`, and `p(0) != 0`.
pub fn random_specs(seed: u64, count: usize, shape: CorpusShape) -> Vec<VarietySpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let m = rng.gen_range(0..=shape.max_m);
            let n = (0..=m).map(|_| rng.gen_range(2..=shape.max_n)).collect();
            let (q, r) = QR_PAIRS[rng.gen_range(0..QR_PAIRS.len())];
            let deg = rng.gen_range(0..=shape.max_deg);
            let mut cs: Vec<Rational> = (0..=deg).map(|_| Rational::new(rng.gen_range(-3..=3), rng.gen_range(1..=2))).collect();
            while cs[0].is_zero() {
                cs[0] = Rational::new(rng.gen_range(-3..=3), rng.gen_range(1..=2));
            }
            VarietySpec::new(m, n, q, r, UniPoly::new(cs))
        })
        .collect()
}

/// `scaling_equivalent` on every ordered pair of `polys`, row-major.
pub fn classify_pairs(polys: &[UniPoly], n0: u32, parallel: bool) -> Vec<Result<Option<ScalingWitness>>> {
    let rows = |p1: &UniPoly| polys.iter().map(|p2| scaling_equivalent(p1, p2, n0)).collect::<Vec<_>>();
    let nested = if parallel { par_map(polys, rows) } else { seq_map(polys, rows) };
    nested.into_iter().flatten().collect()
}
