use crate::arith::{ext_gcd, MultiPoly, Rational, Ring, TruncSeries, UniPoly};
use crate::error::{Error, Result};
use crate::variety::{cylinder_vars, VarietySpec};

use super::COPRIME_RETRIES;

/// `f` with `u f(u) = log p (mod u^N)`.
pub fn compute_f<R: Ring>(p: &UniPoly<R>, precision: usize) -> Result<UniPoly<R>> {
    if !p.constant_term().is_one() {
        return Err(Error::domain("compute_f needs p(0) = 1"));
    }
    let log = TruncSeries::from_poly(p, precision).log()?;
    Ok(log.to_poly().unshift(1).expect("log has no constant term"))
}

/// Truncation of `exp(u f / k)` to degree `< N`.
pub(crate) fn exp_root<R: Ring>(f: &UniPoly<R>, k: u32, precision: usize) -> Result<UniPoly<R>> {
    let s = TruncSeries::from_poly(&f.shift(1), precision).scale(&Rational::new(1, k as i64));
    Ok(s.exp()?.to_poly())
}

/// `(g1, g2)` with `g1 = exp(uf/q)`, `g2 = exp(uf/r)` mod `u^N`, coprime over Q.
///
/// If the truncations share a factor, `c u^N` is added to `g2` for
/// `c = 1, -1, 2, -2, ...`, which leaves both congruences intact.
pub fn compute_g_pair(p: &UniPoly, q: u32, r: u32, precision: usize) -> Result<(UniPoly, UniPoly)> {
    use num_integer::Integer;
    if q.gcd(&r) != 1 {
        return Err(Error::validation("gcd(q, r) = 1", format!("q = {q}, r = {r}")));
    }
    let f = compute_f(p, precision)?;
    let g1 = exp_root(&f, q, precision)?;
    let g2 = exp_root(&f, r, precision)?;
    for attempt in 0..=COPRIME_RETRIES {
        let c = match attempt {
            0 => 0,
            k => {
                let mag = k.div_ceil(2) as i64;
                if k % 2 == 1 {
                    mag
                } else {
                    -mag
                }
            }
        };
        let cand = &g2 + &UniPoly::monomial(Rational::from_int(c), precision);
        let (d, _, _) = ext_gcd(&g1, &cand)?;
        if d.degree() == Some(0) {
            return Ok((g1, cand));
        }
    }
    Err(Error::Construction(format!("no coprime (g1, g2) after {COPRIME_RETRIES} repairs")))
}

/// The `GL_3` part of a cylinder certificate, for a spec with `p(0) = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct GL3Certificate {
    /// Spec with the normalized `p`.
    pub spec: VarietySpec,
    pub precision: usize,
    pub g1: UniPoly,
    pub g2: UniPoly,
    /// Bottom row, polynomials in `x0..xm` over [`cylinder_vars`].
    pub h: [MultiPoly; 3],
    pub det: Rational,
}

/// Rows of the matrix over [`cylinder_vars`].
pub fn matrix_entries(cert: &GL3Certificate) -> [[MultiPoly; 3]; 3] {
    let v = cylinder_vars(cert.spec.m);
    let k = cert.spec.m + 1;
    let xn = cert.spec.x_power_n(&v);
    let zero = MultiPoly::zero_in(&v);
    [
        [cert.g1.substitute_product(&v, k), zero.clone(), xn.clone()],
        [zero, cert.g2.substitute_product(&v, k), xn],
        cert.h.clone(),
    ]
}

pub(crate) fn det3(m: &[[MultiPoly; 3]; 3]) -> MultiPoly {
    let minor = |a: usize, b: usize, c: usize, d: usize| &(&m[1][a] * &m[2][b]) - &(&m[1][c] * &m[2][d]);
    let t0 = &m[0][0] * &minor(1, 2, 2, 1);
    let t1 = &m[0][1] * &minor(0, 2, 2, 0);
    let t2 = &m[0][2] * &minor(0, 1, 1, 0);
    &(&t0 - &t1) + &t2
}

/// `adj(m) / det` for a constant nonzero `det`.
pub(crate) fn inverse3(m: &[[MultiPoly; 3]; 3], det: &Rational) -> [[MultiPoly; 3]; 3] {
    let inv = det.inv().expect("nonzero determinant");
    let cof = |i: usize, j: usize| {
        let rows: Vec<usize> = (0..3).filter(|&r| r != i).collect();
        let cols: Vec<usize> = (0..3).filter(|&c| c != j).collect();
        let d = &(&m[rows[0]][cols[0]] * &m[rows[1]][cols[1]]) - &(&m[rows[0]][cols[1]] * &m[rows[1]][cols[0]]);
        if (i + j) % 2 == 1 {
            -d
        } else {
            d
        }
    };
    std::array::from_fn(|i| std::array::from_fn(|j| cof(j, i).scale_by(&inv)))
}

pub(crate) fn mat_mul3(a: &[[MultiPoly; 3]; 3], b: &[[MultiPoly; 3]; 3]) -> [[MultiPoly; 3]; 3] {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| (0..3).fold(MultiPoly::zero_in(a[0][0].vars()), |acc, k| &acc + &(&a[i][k] * &b[k][j])))
    })
}

pub(crate) fn is_identity3(m: &[[MultiPoly; 3]; 3]) -> bool {
    (0..3).all(|i| (0..3).all(|j| if i == j { m[i][j] == MultiPoly::one_in(m[i][j].vars()) } else { m[i][j].is_zero() }))
}

/// Builds the matrix for `spec` (which must have `p(0) = 1`).
///
/// From `s g1 + t g2 = 1` and `a g1 g2 + b u^N = 1`:
/// `h3 = a`, `h2 = -b s M`, `h1 = -b t M` with `M = x^N / x^n`, giving `det = 1`.
pub fn build_gl3(spec: &VarietySpec) -> Result<GL3Certificate> {
    spec.validate()?;
    if !spec.p.constant_term().is_one() {
        return Err(Error::domain("build_gl3 needs p(0) = 1; rescale first"));
    }
    let n = spec.precision();
    let (g1, g2) = compute_g_pair(&spec.p, spec.q, spec.r, n)?;
    let (d, s, t) = ext_gcd(&g1, &g2)?;
    debug_assert!(d == UniPoly::one());
    let u_n = UniPoly::monomial(Rational::one(), n);
    let (d2, a, b) = ext_gcd(&(&g1 * &g2), &u_n)?;
    if d2.degree() != Some(0) {
        return Err(Error::Construction("g1 g2 and u^N are not coprime".into()));
    }

    let v = cylinder_vars(spec.m);
    let k = spec.m + 1;
    let mut spare = vec![0u32; v.len()];
    for (slot, &ni) in spare.iter_mut().zip(&spec.n) {
        *slot = n as u32 - ni;
    }
    let spare = crate::arith::Monomial(spare);
    let sub = |p: &UniPoly| p.substitute_product(&v, k);
    let h3 = sub(&a);
    let h2 = -sub(&(&b * &s)).mul_monomial(&spare);
    let h1 = -sub(&(&b * &t)).mul_monomial(&spare);

    let mut cert = GL3Certificate { spec: spec.clone(), precision: n, g1, g2, h: [h1, h2, h3], det: Rational::zero() };
    let det = det3(&matrix_entries(&cert));
    if !det.is_constant() || det.is_zero() {
        return Err(Error::Construction(format!("determinant is not a nonzero constant: {det}")));
    }
    cert.det = det.constant_coeff();
    check_gl3(&cert).map_err(|c| Error::Construction(format!("fresh GL3 certificate fails {c}")))?;
    Ok(cert)
}

/// Invariants of a `GL3Certificate`; returns the first failing check's name.
pub(crate) fn check_gl3(cert: &GL3Certificate) -> std::result::Result<(), &'static str> {
    let n = cert.precision;
    let p = crate::arith::TruncSeries::from_poly(&cert.spec.p, n);
    let g1 = crate::arith::TruncSeries::from_poly(&cert.g1, n);
    let g2 = crate::arith::TruncSeries::from_poly(&cert.g2, n);
    if g1.pow(cert.spec.q) != p || g2.pow(cert.spec.r) != p {
        return Err("g-power congruence");
    }
    let det = det3(&matrix_entries(cert));
    if cert.det.is_zero() || det != MultiPoly::constant_in(cert.det.clone(), det.vars()) {
        return Err("determinant");
    }
    Ok(())
}

/// `psi`: `z -> g1(x) z + x^n w`, `t -> g2(x) t + x^n w`, `w -> h1 z + h2 t + h3 w`.
pub fn apply_psi(cert: &GL3Certificate, f: &MultiPoly) -> Result<MultiPoly> {
    let v = cylinder_vars(cert.spec.m);
    let f = f.checked_add(&MultiPoly::zero_in(&v))?;
    let rows = matrix_entries(cert);
    Ok(f.substitute(&substitution_images(&rows, &v)))
}

/// Images of `x0..xm, z, t, w` under the linear map with rows `rows`.
pub(crate) fn substitution_images(rows: &[[MultiPoly; 3]; 3], v: &crate::arith::Vars) -> Vec<MultiPoly> {
    let m1 = v.len() - 3;
    let ztw: Vec<MultiPoly> = (m1..m1 + 3).map(|i| MultiPoly::var(i, v)).collect();
    let mut images: Vec<MultiPoly> = (0..m1).map(|i| MultiPoly::var(i, v)).collect();
    for row in rows {
        images.push(row.iter().zip(&ztw).fold(MultiPoly::zero_in(v), |acc, (c, x)| &acc + &(c * x)));
    }
    images
}
