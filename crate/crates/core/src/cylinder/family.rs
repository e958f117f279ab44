use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::certificate::{complete_certificate, CylinderCertificate, VerifyReport};
use super::gl3::{check_gl3, compute_f, exp_root, GL3Certificate};
use crate::arith::multipoly::vars;
use crate::arith::text::parse_poly;
use crate::arith::{ext_gcd, resultant, series_inverse, sylvester_bezout, ParamPoly, Rational, TruncSeries, UniPoly};
use crate::error::{Error, Result};
use crate::variety::{cylinder_vars, SpecFile, VarietySpec};

/// Names `a2 .. a_{n-2}` of the free coefficients of the generic `p`.
pub fn family_parameters(n: u32) -> Vec<String> {
    (2..n.saturating_sub(1)).map(|j| format!("a{j}")).collect()
}

/// Generic certificate for `n = (n, ..., n)` and `p = 1 + u + a2 u^2 + ... + a_{n-2} u^{n-2}`,
/// over `A = Q[a2 .. a_{n-2}]` localized at the resultant.
///
/// Entry `h_i` of the bottom row is `h[i] / resultant^denominator_power[i]`,
/// written as a polynomial in `u` that is evaluated at `u = x0 ... xm`.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilyCertificate {
    pub n: u32,
    pub m: usize,
    pub q: u32,
    pub r: u32,
    pub parameters: Vec<String>,
    pub p: UniPoly<ParamPoly>,
    /// Monic of degree `n`.
    pub g1: UniPoly<ParamPoly>,
    pub g2: UniPoly<ParamPoly>,
    pub resultant: ParamPoly,
    /// `s g1 + t g2 = resultant`.
    pub bezout: (UniPoly<ParamPoly>, UniPoly<ParamPoly>),
    pub h: [UniPoly<ParamPoly>; 3],
    pub denominator_power: [u32; 3],
}

fn generic_p(n: u32, params: &[String]) -> UniPoly<ParamPoly> {
    let pv = vars(params);
    let mut coeffs = vec![ParamPoly::one_in(&pv), ParamPoly::one_in(&pv)];
    coeffs.extend((0..params.len()).map(|i| ParamPoly::var(i, &pv)));
    coeffs.truncate(n as usize);
    UniPoly::new(coeffs)
}

pub fn build_family_certificate(n: u32, m: usize, q: u32, r: u32) -> Result<FamilyCertificate> {
    if n < 4 {
        return Err(Error::validation("family n >= 4", format!("n = {n}")));
    }
    let parameters = family_parameters(n);
    let p = generic_p(n, &parameters);
    let shape = VarietySpec::new(m, vec![n; m + 1], q, r, p.clone());
    shape.validate()?;

    let prec = n as usize;
    let f = compute_f(&p, prec)?;
    let pv = vars(&parameters);
    let un = UniPoly::monomial(ParamPoly::one_in(&pv), prec);
    let g1 = &exp_root(&f, q, prec)? + &un;
    let g2 = &exp_root(&f, r, prec)? + &un;
    let (res, s, t) = sylvester_bezout(&g1, &g2)?;
    if res.is_zero() {
        return Err(Error::Construction("generic resultant vanishes identically".into()));
    }

    // a g1 g2 = 1 + c u^n, so a g1 g2 - (c / Res) u^n (s g1 + t g2) = 1
    let g12 = &g1 * &g2;
    let a = series_inverse(&TruncSeries::from_poly(&g12, prec))?.to_poly();
    let c = (&(&a * &g12) - &UniPoly::one()).unshift(prec).expect("a inverts g1 g2 modulo u^n");
    let h = [&c * &t, &c * &s, a];
    Ok(FamilyCertificate { n, m, q, r, parameters, p, g1, g2, resultant: res, bezout: (s, t), h, denominator_power: [1, 1, 0] })
}

/// Symbolic replay of a family certificate over `A`.
pub fn verify_family_certificate(fam: &FamilyCertificate) -> VerifyReport {
    let mut checks: Vec<(String, bool)> = Vec::new();
    let mut push = |name: &str, ok: bool| {
        checks.push((name.to_string(), ok));
        ok
    };
    let _ = (|| -> Option<()> {
        let ok = |b: bool| b.then_some(());
        let prec = fam.n as usize;
        let shape_ok = fam.parameters == family_parameters(fam.n)
            && fam.p == generic_p(fam.n, &fam.parameters)
            && VarietySpec::new(fam.m, vec![fam.n; fam.m + 1], fam.q, fam.r, fam.p.clone()).validate().is_ok();
        ok(push("spec", shape_ok))?;
        let monic = |g: &UniPoly<ParamPoly>| g.degree() == Some(prec) && g.is_monic();
        ok(push("g monic of degree n", monic(&fam.g1) && monic(&fam.g2)))?;
        let ps = TruncSeries::from_poly(&fam.p, prec);
        let cong = TruncSeries::from_poly(&fam.g1, prec).pow(fam.q) == ps && TruncSeries::from_poly(&fam.g2, prec).pow(fam.r) == ps;
        ok(push("g-power congruence", cong))?;
        let res_ok = !fam.resultant.is_zero() && resultant(&fam.g1, &fam.g2).ok()? == fam.resultant;
        ok(push("resultant", res_ok))?;
        let (s, t) = &fam.bezout;
        ok(push("bezout", &(s * &fam.g1) + &(t * &fam.g2) == UniPoly::constant(fam.resultant.clone())))?;
        ok(push("determinant", family_det(fam).is_some_and(|d| d.is_one())))?;
        Some(())
    })();
    VerifyReport { checks }
}

/// The determinant as an element of `A` localized at the resultant, if it lies in `Q`.
fn family_det(fam: &FamilyCertificate) -> Option<Rational> {
    let e = *fam.denominator_power.iter().max()?;
    let res = &fam.resultant;
    let lift = |i: usize| fam.h[i].scale(&res.pow(e - fam.denominator_power[i]));
    let pv = res.vars().clone();
    let un = UniPoly::monomial(ParamPoly::one_in(&pv), fam.n as usize);
    let main = &(&fam.g1 * &fam.g2) * &lift(2);
    let side = &(&(&fam.g1 * &lift(1)) + &(&fam.g2 * &lift(0))) * &un;
    let d = &main - &side;
    if d.degree()? != 0 {
        return None;
    }
    let q = d.constant_term().div_exact_poly(&res.pow(e))?;
    (q.is_constant() && !q.is_zero()).then(|| q.constant_coeff())
}

/// Rational certificate at `a = values`.
///
/// Fails with a domain error when `Res(a) = 0`, where the generic matrix is undefined.
pub fn specialize_family(fam: &FamilyCertificate, values: &[Rational]) -> Result<CylinderCertificate> {
    if values.len() != fam.parameters.len() {
        return Err(Error::validation(
            "one value per parameter",
            format!("expected {} values for {:?}, got {}", fam.parameters.len(), fam.parameters, values.len()),
        ));
    }
    let at = |c: &ParamPoly| c.eval(values);
    let res = at(&fam.resultant);
    let Some(res_inv) = res.inv() else {
        return Err(Error::domain(format!("point {values:?} lies on the vanishing locus Res(a) = 0 of the family")));
    };
    let spec = VarietySpec::new(fam.m, vec![fam.n; fam.m + 1], fam.q, fam.r, fam.p.map_coeffs(at));
    let v = cylinder_vars(fam.m);
    let h = std::array::from_fn(|i| {
        fam.h[i].map_coeffs(at).scale(&res_inv.pow(fam.denominator_power[i] as i32)).substitute_product(&v, fam.m + 1)
    });
    let mut gl3 = GL3Certificate {
        spec: spec.clone(),
        precision: fam.n as usize,
        g1: fam.g1.map_coeffs(at),
        g2: fam.g2.map_coeffs(at),
        h,
        det: Rational::one(),
    };
    let det = super::gl3::det3(&super::gl3::matrix_entries(&gl3));
    if !det.is_constant() {
        return Err(Error::Construction(format!("specialized determinant is not constant: {det}")));
    }
    gl3.det = det.constant_coeff();
    check_gl3(&gl3).map_err(|c| Error::Construction(format!("specialized certificate fails {c}")))?;
    complete_certificate(&spec, Rational::one(), gl3)
}

/// One coordinate of a specialization point.
#[derive(Clone, Debug, PartialEq)]
pub enum PointValue {
    Rational(Rational),
    /// An unspecified root, over the algebraic closure, of a nonconstant polynomial.
    Root(UniPoly),
}

impl PointValue {
    fn as_rational(&self) -> Option<Rational> {
        match self {
            PointValue::Rational(v) => Some(v.clone()),
            PointValue::Root(m) if m.degree() == Some(1) => Some(-(m.coeff(0) / m.coeff(1))),
            PointValue::Root(_) => None,
        }
    }
}

/// Whether a point lies on `Res(a) = 0`.
///
/// A point with one `Root(m)` coordinate lies on the locus when every root of
/// `m` is a root of the resultant restricted to that coordinate, which is the
/// exact test `squarefree(m) | Res`. Points where only some roots of `m` lie on
/// the locus are rejected as ambiguous. At most one coordinate may be algebraic.
pub fn on_vanishing_locus(fam: &FamilyCertificate, point: &[PointValue]) -> Result<bool> {
    if point.len() != fam.parameters.len() {
        return Err(Error::validation(
            "one value per parameter",
            format!("expected {} values for {:?}, got {}", fam.parameters.len(), fam.parameters, point.len()),
        ));
    }
    let algebraic: Vec<usize> = (0..point.len()).filter(|&i| point[i].as_rational().is_none()).collect();
    match algebraic.as_slice() {
        [] => {
            let values: Vec<Rational> = point.iter().filter_map(PointValue::as_rational).collect();
            Ok(fam.resultant.eval(&values).is_zero())
        }
        &[slot] => {
            let PointValue::Root(m) = &point[slot] else { unreachable!() };
            if m.degree().unwrap_or(0) == 0 {
                return Err(Error::validation("root of a nonconstant polynomial", format!("{m:?}")));
            }
            let others: Vec<Rational> =
                point.iter().enumerate().filter(|&(i, _)| i != slot).filter_map(|(_, v)| v.as_rational()).collect();
            let restricted = fam.restrict(slot, &others);
            if restricted.is_zero() {
                return Ok(true);
            }
            let (common, _, _) = ext_gcd(m, &m.derivative())?;
            let squarefree = m.div_exact(&common).expect("gcd divides");
            if restricted.divrem(&squarefree)?.1.is_zero() {
                return Ok(true);
            }
            let (g, _, _) = ext_gcd(&squarefree, &restricted)?;
            if g.degree() != Some(0) {
                return Err(Error::validation(
                    "unambiguous specialization point",
                    format!("only some roots of the polynomial for {} lie on Res = 0", fam.parameters[slot]),
                ));
            }
            Ok(false)
        }
        _ => Err(Error::validation("at most one algebraic coordinate", format!("{} given", algebraic.len()))),
    }
}

/// [`specialize_family`] at a point given by [`PointValue`]s.
///
/// Points on the vanishing locus give a domain error. Off the locus a
/// certificate is built only when every coordinate is rational.
pub fn specialize_family_at(fam: &FamilyCertificate, point: &[PointValue]) -> Result<CylinderCertificate> {
    if on_vanishing_locus(fam, point)? {
        return Err(Error::domain(format!("point {point:?} lies on the vanishing locus Res(a) = 0 of the family")));
    }
    let values: Option<Vec<Rational>> = point.iter().map(PointValue::as_rational).collect();
    let values = values.ok_or_else(|| {
        Error::validation("rational specialization point", "certificates off the locus are built over Q only")
    })?;
    specialize_family(fam, &values)
}

/// Rational roots of a univariate polynomial over `Q`, ascending.
///
/// Uses the rational root test; fails with a capacity error if a coefficient
/// is too large to factor by trial division.
pub fn rational_roots(p: &UniPoly) -> Result<Vec<Rational>> {
    if p.is_zero() {
        return Err(Error::domain("every value is a root of the zero polynomial"));
    }
    let lcm = p.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.coeffs().iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    let low = ints.iter().position(|c| !c.is_zero()).expect("nonzero polynomial");
    let mut roots = Vec::new();
    if low > 0 {
        roots.push(Rational::zero());
    }
    let ints = &ints[low..];
    if ints.len() > 1 {
        let num_divs = divisors(&ints[0])?;
        let den_divs = divisors(ints.last().unwrap())?;
        let mut cands = std::collections::BTreeSet::new();
        for a in &num_divs {
            for b in &den_divs {
                let c = Rational::from_bigints(a.clone(), b.clone())?;
                cands.insert(c.clone());
                cands.insert(-c);
            }
        }
        roots.extend(cands.into_iter().filter(|c| p.eval(c).is_zero()));
    }
    roots.sort();
    Ok(roots)
}

const TRIAL_DIVISION_LIMIT: u64 = 10_000_000;

fn divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let mut rest = n.abs();
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let mut d = 2u64;
    while BigInt::from(d) * BigInt::from(d) <= rest {
        if d > TRIAL_DIVISION_LIMIT {
            return Err(Error::Capacity(format!("cannot factor {n} by trial division")));
        }
        let bd = BigInt::from(d);
        let mut e = 0;
        while (&rest % &bd).is_zero() {
            rest /= &bd;
            e += 1;
        }
        if e > 0 {
            factors.push((bd, e));
        }
        d += 1;
    }
    if rest > BigInt::one() {
        factors.push((rest, 1));
    }
    let mut out = vec![BigInt::one()];
    for (f, e) in factors {
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        for base in &out {
            let mut pw = base.clone();
            for _ in 0..=e {
                next.push(pw.clone());
                pw *= &f;
            }
        }
        out = next;
    }
    Ok(out)
}

impl FamilyCertificate {
    /// Searches for a rational point with `Res(a) = 0`: all parameters but the
    /// last range over `-bound..=bound`, the last is solved for exactly.
    pub fn rational_vanishing_point(&self, bound: i64) -> Result<Option<Vec<Rational>>> {
        let k = self.parameters.len();
        if k == 0 {
            return Ok(self.resultant.is_zero().then(Vec::new));
        }
        let width = (2 * bound + 1) as usize;
        let total = width.pow((k - 1) as u32);
        for idx in 0..total {
            let mut fixed: Vec<Rational> = Vec::with_capacity(k);
            let mut rest = idx;
            for _ in 0..k - 1 {
                fixed.push(Rational::from_int((rest % width) as i64 - bound));
                rest /= width;
            }
            let uni = self.restrict_last(&fixed);
            if uni.is_zero() {
                fixed.push(Rational::zero());
                return Ok(Some(fixed));
            }
            if let Some(root) = rational_roots(&uni)?.into_iter().next() {
                fixed.push(root);
                return Ok(Some(fixed));
            }
        }
        Ok(None)
    }

    /// `Res(fixed, a_last)` as a polynomial in the last parameter.
    fn restrict_last(&self, fixed: &[Rational]) -> UniPoly {
        self.restrict(self.parameters.len() - 1, fixed)
    }

    /// The resultant as a polynomial in parameter `slot`, the other parameters
    /// set to `others` in order.
    fn restrict(&self, slot: usize, others: &[Rational]) -> UniPoly {
        let mut coeffs: Vec<Rational> = Vec::new();
        for (mono, c) in self.resultant.terms() {
            let mut t = c.clone();
            let rest = mono.0.iter().enumerate().filter(|&(i, _)| i != slot).map(|(_, &e)| e);
            for (v, e) in others.iter().zip(rest) {
                t = t * v.pow(e as i32);
            }
            let d = mono.0[slot] as usize;
            if coeffs.len() <= d {
                coeffs.resize(d + 1, Rational::zero());
            }
            coeffs[d] = &coeffs[d] + &t;
        }
        UniPoly::new(coeffs)
    }

    /// The resultant as a polynomial in `a2`, for single-parameter families.
    pub fn resultant_univariate(&self) -> Option<UniPoly> {
        (self.parameters.len() == 1).then(|| self.restrict_last(&[]))
    }
}

/// JSON form of a [`FamilyCertificate`]; coefficients are polynomials in the parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyCertificateFile {
    pub spec: SpecFile,
    pub precision: usize,
    pub g1: Vec<String>,
    pub g2: Vec<String>,
    pub h: [Vec<String>; 3],
    pub det: String,
    pub resultant: String,
    pub denominator_power: [u32; 3],
    pub bezout: [Vec<String>; 2],
}

fn texts(p: &UniPoly<ParamPoly>) -> Vec<String> {
    p.coeffs().iter().map(|c| c.to_string()).collect()
}

impl FamilyCertificateFile {
    pub fn from_certificate(fam: &FamilyCertificate) -> FamilyCertificateFile {
        let spec = VarietySpec::new(fam.m, vec![fam.n; fam.m + 1], fam.q, fam.r, fam.p.clone());
        FamilyCertificateFile {
            spec: SpecFile::from_family_spec(&spec, &fam.parameters),
            precision: fam.n as usize,
            g1: texts(&fam.g1),
            g2: texts(&fam.g2),
            h: fam.h.each_ref().map(texts),
            det: family_det(fam).map_or_else(|| "undefined".into(), |d| d.to_string()),
            resultant: fam.resultant.to_string(),
            denominator_power: fam.denominator_power,
            bezout: [texts(&fam.bezout.0), texts(&fam.bezout.1)],
        }
    }

    pub fn to_certificate(&self) -> Result<FamilyCertificate> {
        let spec = self.spec.to_family_spec()?;
        let n = *spec.n.first().ok_or_else(|| Error::validation("n has m+1 entries", "empty n"))?;
        if spec.n.iter().any(|&x| x != n) || self.precision != n as usize {
            return Err(Error::validation("family n = (n, ..., n)", format!("n = {:?}", spec.n)));
        }
        let pv = vars(&self.spec.parameters);
        let uni = |cs: &[String]| -> Result<UniPoly<ParamPoly>> {
            Ok(UniPoly::new(cs.iter().map(|c| parse_poly(c, &pv)).collect::<Result<Vec<_>>>()?))
        };
        Ok(FamilyCertificate {
            n,
            m: spec.m,
            q: spec.q,
            r: spec.r,
            parameters: self.spec.parameters.clone(),
            p: spec.p,
            g1: uni(&self.g1)?,
            g2: uni(&self.g2)?,
            resultant: parse_poly(&self.resultant, &pv)?,
            bezout: (uni(&self.bezout[0])?, uni(&self.bezout[1])?),
            h: [uni(&self.h[0])?, uni(&self.h[1])?, uni(&self.h[2])?],
            denominator_power: self.denominator_power,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn parse(text: &str) -> Result<FamilyCertificateFile> {
        serde_json::from_str(text).map_err(|e| Error::parse(format!("family certificate JSON: {e}")))
    }
}
