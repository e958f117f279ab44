//! Scaling equivalence `p2(u) = mu p1(lambda u)` and the explicit ring maps
//! relating varieties with fixed `(m, n, q, r)`.

use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::{MultiPoly, Rational, UniPoly, Vars};
use crate::error::{Error, Result};
use crate::variety::{ambient_vars, defining_unchecked, VarietySpec};

/// `(mu, lambda)` with `p2(u) = mu p1(lambda u)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScalingWitness {
    pub mu: Rational,
    pub lambda: Rational,
}

impl ScalingWitness {
    pub fn identity() -> Self {
        ScalingWitness { mu: Rational::one(), lambda: Rational::one() }
    }

    /// Witness for `(p2, p1)`.
    pub fn inverse(&self) -> Self {
        ScalingWitness { mu: self.mu.inv().expect("mu != 0"), lambda: self.lambda.inv().expect("lambda != 0") }
    }

    /// Given `self` for `(p1, p2)` and `next` for `(p2, p3)`, the witness for `(p1, p3)`.
    pub fn then(&self, next: &ScalingWitness) -> Self {
        ScalingWitness { mu: &self.mu * &next.mu, lambda: &self.lambda * &next.lambda }
    }

    pub fn holds(&self, p1: &UniPoly, p2: &UniPoly) -> bool {
        !self.mu.is_zero() && !self.lambda.is_zero() && p1.rescale_var(&self.lambda).scale(&self.mu) == *p2
    }
}

/// Decides whether `p2(u) = mu p1(lambda u)` for some `mu, lambda` in `Q*`.
///
/// Refuses (domain error) pairs outside `deg p <= n0 - 2`, `p(0) != 0`.
pub fn scaling_equivalent(p1: &UniPoly, p2: &UniPoly, n0: u32) -> Result<Option<ScalingWitness>> {
    let bound = n0 as i64 - 2;
    for (name, p) in [("p1", p1), ("p2", p2)] {
        match p.degree() {
            Some(d) if (d as i64) <= bound => {}
            _ => return Err(Error::domain(format!("{name} = {p} violates deg p <= n0 - 2 = {bound}"))),
        }
        if p.constant_term().is_zero() {
            return Err(Error::domain(format!("{name} = {p} has p(0) = 0")));
        }
    }
    if p1.degree() != p2.degree() {
        return Ok(None);
    }
    let mu = &p2.constant_term() / &p1.constant_term();
    let Some(k) = (1..p1.coeffs().len()).find(|&k| !p1.coeff(k).is_zero()) else {
        let w = ScalingWitness { mu, lambda: Rational::one() };
        return Ok(w.holds(p1, p2).then_some(w));
    };
    let target = &p2.coeff(k) / &(&mu * &p1.coeff(k));
    for lambda in target.exact_roots(k as u32) {
        let w = ScalingWitness { mu: mu.clone(), lambda };
        if w.holds(p1, p2) {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// A `k`-algebra endomorphism of `k[x0..xm, z, t, y]`, given by generator images.
#[derive(Clone, Debug, PartialEq)]
pub struct RingMap {
    vars: Vars,
    images: Vec<MultiPoly>,
}

impl RingMap {
    pub fn identity(m: usize) -> RingMap {
        let vars = ambient_vars(m);
        let images = (0..vars.len()).map(|i| MultiPoly::var(i, &vars)).collect();
        RingMap { vars, images }
    }

    /// From `(generator name, image)` pairs; unnamed generators are fixed.
    pub fn from_images(m: usize, named: &[(&str, MultiPoly)]) -> Result<RingMap> {
        let mut map = RingMap::identity(m);
        for (name, img) in named {
            let i = map.vars.iter().position(|v| v == name).ok_or_else(|| Error::domain(format!("unknown generator {name}")))?;
            map.images[i] = img.checked_add(&MultiPoly::zero_in(&map.vars))?;
        }
        Ok(map)
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn image(&self, name: &str) -> Option<&MultiPoly> {
        self.vars.iter().position(|v| v == name).map(|i| &self.images[i])
    }

    pub fn apply(&self, f: &MultiPoly) -> Result<MultiPoly> {
        let f = f.checked_add(&MultiPoly::zero_in(&self.vars))?;
        Ok(f.substitute(&self.images))
    }

    /// `self` after `inner`: `f -> self(inner(f))`.
    pub fn compose(&self, inner: &RingMap) -> Result<RingMap> {
        if self.vars != inner.vars {
            return Err(Error::VariableMismatch { left: self.vars.to_vec(), right: inner.vars.to_vec() });
        }
        let images = inner.images.iter().map(|g| g.substitute(&self.images)).collect();
        Ok(RingMap { vars: self.vars.clone(), images })
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, g)| *g == MultiPoly::var(i, &self.vars))
    }

    pub fn to_json(&self) -> Value {
        let images: serde_json::Map<String, Value> =
            self.vars.iter().zip(&self.images).map(|(v, g)| (v.clone(), Value::String(g.to_string()))).collect();
        json!({ "images": images })
    }
}

/// `eta = (mu x0, lambda x1 / mu, x2, ..., xm, mu^(n1-n0) lambda^(-n1) y, z, t)`.
pub fn build_eta(spec1: &VarietySpec, witness: &ScalingWitness) -> Result<RingMap> {
    spec1.validate_shape()?;
    if spec1.m == 0 {
        return Err(Error::domain("eta rescales x1 and needs m >= 1"));
    }
    let (mu, lambda) = (&witness.mu, &witness.lambda);
    let mu_inv = mu.inv().ok_or_else(|| Error::domain("mu = 0"))?;
    if lambda.is_zero() {
        return Err(Error::domain("lambda = 0"));
    }
    let v = ambient_vars(spec1.m);
    let var = |name: &str| MultiPoly::var_named(name, &v).expect("ambient generator");
    let (n0, n1) = (spec1.n[0] as i32, spec1.n[1] as i32);
    let y_scale = &mu.pow(n1 - n0) * &lambda.pow(-n1);
    RingMap::from_images(
        spec1.m,
        &[
            ("x0", var("x0").scale_by(mu)),
            ("x1", var("x1").scale_by(&(&mu_inv * lambda))),
            ("y", var("y").scale_by(&y_scale)),
        ],
    )
}

/// `alpha = (nu0 x0, lambda_1 x_{j(1)}, ..., lambda_m x_{j(m)}, z, t)` with `nu0 = 1 / prod lambda_i`.
///
/// `perm[i-1] = j(i)` is a permutation of `1..=m` with `n_{j(i)} = n_i`.
pub fn build_alpha(spec: &VarietySpec, perm: &[usize], lambdas: &[Rational]) -> Result<RingMap> {
    spec.validate_shape()?;
    let m = spec.m;
    if perm.len() != m || lambdas.len() != m {
        return Err(Error::domain(format!("need {m} permutation entries and {m} scalings")));
    }
    let mut seen = vec![false; m + 1];
    for (i, &j) in perm.iter().enumerate() {
        if j == 0 || j > m || std::mem::replace(&mut seen[j], true) {
            return Err(Error::domain(format!("{perm:?} is not a permutation of 1..={m}")));
        }
        if spec.n[j] != spec.n[i + 1] {
            return Err(Error::domain(format!("n_{j} = {} differs from n_{} = {}", spec.n[j], i + 1, spec.n[i + 1])));
        }
    }
    if lambdas.iter().any(|l| l.is_zero()) {
        return Err(Error::domain("scalings must be nonzero"));
    }
    let prod = lambdas.iter().fold(Rational::one(), |acc, l| &acc * l);
    let nu0 = prod.inv().expect("nonzero product");
    let v = ambient_vars(m);
    let mut named = vec![(String::from("x0"), MultiPoly::var(0, &v).scale_by(&nu0))];
    for (i, (&j, l)) in perm.iter().zip(lambdas).enumerate() {
        named.push((format!("x{}", i + 1), MultiPoly::var(j, &v).scale_by(l)));
    }
    let named: Vec<(&str, MultiPoly)> = named.iter().map(|(n, g)| (n.as_str(), g.clone())).collect();
    let alpha = RingMap::from_images(m, &named)?;
    let xprod = UniPoly::u().substitute_product(&v, m + 1);
    if alpha.apply(&xprod)? != xprod {
        return Err(Error::Construction("alpha does not fix x0 x1 ... xm".into()));
    }
    Ok(alpha)
}

/// Outcome of [`verify_ring_map`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RingMapReport {
    pub passed: bool,
    /// `c` with `map(F1) = c F2`, when it exists.
    pub unit: Option<Rational>,
    pub failure: Option<String>,
}

/// Checks that `map` sends each `xi` to a nonzero multiple of some `xj` and `F1` to a `Q*`-multiple of `F2`.
pub fn verify_ring_map(spec1: &VarietySpec, spec2: &VarietySpec, map: &RingMap) -> RingMapReport {
    let fail = |what: &str| RingMapReport { passed: false, unit: None, failure: Some(what.to_string()) };
    if spec1.validate_shape().is_err() || spec2.validate_shape().is_err() {
        return fail("spec shape");
    }
    if (spec1.m, &spec1.n, spec1.q, spec1.r) != (spec2.m, &spec2.n, spec2.q, spec2.r) {
        return fail("specs share (m, n, q, r)");
    }
    let v = ambient_vars(spec1.m);
    if *map.vars() != v {
        return fail("map lives on the ambient ring");
    }
    for i in 0..=spec1.m {
        let img = &map.images[i];
        let ok = img.len() == 1 && {
            let (mono, c) = img.leading().unwrap();
            !c.is_zero() && mono.degree() == 1 && mono.0[..=spec1.m].iter().sum::<u32>() == 1
        };
        if !ok {
            return fail(&format!("x{i} maps to a multiple of some xj"));
        }
    }
    let f1 = defining_unchecked(spec1, &v).substitute(&map.images);
    let f2 = defining_unchecked(spec2, &v);
    let unit = match (f1.leading_coeff(), f2.leading_coeff()) {
        (Some(a), Some(b)) => a / b,
        _ => return fail("defining polynomial compatibility"),
    };
    if f1 != f2.scale_by(&unit) {
        return fail("defining polynomial compatibility");
    }
    RingMapReport { passed: true, unit: Some(unit), failure: None }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::qpoly;
    use crate::arith::text::parse_poly;

    fn w(mu: (i64, i64), lambda: (i64, i64)) -> ScalingWitness {
        ScalingWitness { mu: Rational::new(mu.0, mu.1), lambda: Rational::new(lambda.0, lambda.1) }
    }

    #[test]
    fn scaling_examples() {
        let p1 = qpoly(&[(1, 1), (1, 1)]);
        assert_eq!(scaling_equivalent(&p1, &qpoly(&[(2, 1), (6, 1)]), 3).unwrap(), Some(w((2, 1), (3, 1))));
        let p = qpoly(&[(3, 1), (0, 1), (-1, 2)]);
        assert_eq!(scaling_equivalent(&p, &p, 5).unwrap(), Some(ScalingWitness::identity()));
        assert_eq!(scaling_equivalent(&p1, &qpoly(&[(1, 1), (1, 1), (1, 1)]), 4).unwrap(), None);
        assert!(scaling_equivalent(&p1, &p1, 2).is_err());
        assert!(scaling_equivalent(&qpoly(&[(0, 1), (1, 1)]), &p1, 4).is_err());
    }

    #[test]
    fn even_gap_tries_both_signs() {
        // 1 + u^2 and 1 + 4u^2: lambda = +-2, the positive root is found first
        let got = scaling_equivalent(&qpoly(&[(1, 1), (0, 1), (1, 1)]), &qpoly(&[(1, 1), (0, 1), (4, 1)]), 4).unwrap();
        assert_eq!(got.map(|w| w.lambda.abs()), Some(Rational::from_int(2)));
        // 1 + u^2 + u^3 versus 1 + 4u^2 - 8u^3 needs lambda = -2
        let got = scaling_equivalent(&qpoly(&[(1, 1), (0, 1), (1, 1), (1, 1)]), &qpoly(&[(1, 1), (0, 1), (4, 1), (-8, 1)]), 5).unwrap();
        assert_eq!(got, Some(w((1, 1), (-2, 1))));
    }

    #[test]
    fn eta_example() {
        let s1 = VarietySpec::new(1, vec![3, 2], 2, 3, qpoly(&[(1, 1), (1, 1)]));
        let s2 = s1.with_p(qpoly(&[(2, 1), (6, 1)]));
        let eta = build_eta(&s1, &w((2, 1), (3, 1))).unwrap();
        let v = ambient_vars(1);
        assert_eq!(eta.image("x0").unwrap(), &parse_poly("2*x0", &v).unwrap());
        assert_eq!(eta.image("x1").unwrap(), &parse_poly("3/2*x1", &v).unwrap());
        assert_eq!(eta.image("y").unwrap(), &parse_poly("1/18*y", &v).unwrap());
        assert_eq!(eta.image("z").unwrap(), &parse_poly("z", &v).unwrap());
        let rep = verify_ring_map(&s1, &s2, &eta);
        assert!(rep.passed, "{rep:?}");
        assert_eq!(rep.unit, Some(Rational::one()));

        let bad = build_eta(&s1, &w((2, 1), (1, 1))).unwrap();
        assert!(!verify_ring_map(&s1, &s2, &bad).passed);
        assert!(build_eta(&VarietySpec::new(0, vec![3], 2, 3, qpoly(&[(1, 1)])), &ScalingWitness::identity()).is_err());
        assert!(build_eta(&s1, &ScalingWitness::identity()).unwrap().is_identity());
    }

    #[test]
    fn eta_inverse_and_composition() {
        let s1 = VarietySpec::new(1, vec![4, 3], 2, 3, qpoly(&[(2, 1), (-1, 1), (1, 1)]));
        let wa = w((1, 2), (-2, 1));
        let s2 = s1.with_p(s1.p.rescale_var(&wa.lambda).scale(&wa.mu));
        let wb = w((3, 1), (1, 3));
        let s3 = s2.with_p(s2.p.rescale_var(&wb.lambda).scale(&wb.mu));
        let e1 = build_eta(&s1, &wa).unwrap();
        let e2 = build_eta(&s2, &wb).unwrap();
        let both = e2.compose(&e1).unwrap();
        assert!(verify_ring_map(&s1, &s3, &both).passed);
        let back = build_eta(&s2, &wa.inverse()).unwrap();
        assert!(back.compose(&e1).unwrap().is_identity());
    }

    #[test]
    fn non_structural_map_fails() {
        let s = VarietySpec::new(1, vec![2, 2], 2, 3, qpoly(&[(1, 1)]));
        let v = ambient_vars(1);
        let shift = RingMap::from_images(1, &[("y", parse_poly("y + 1", &v).unwrap())]).unwrap();
        assert!(!verify_ring_map(&s, &s, &shift).passed);
        assert!(verify_ring_map(&s, &s, &RingMap::identity(1)).passed);
    }

    #[test]
    fn alpha_examples() {
        let s = VarietySpec::new(2, vec![2, 3, 3], 2, 3, qpoly(&[(1, 1)]));
        assert!(build_alpha(&s, &[1, 2], &[Rational::one(), Rational::one()]).unwrap().is_identity());
        let a = build_alpha(&s, &[2, 1], &[Rational::from_int(2), Rational::from_int(3)]).unwrap();
        let v = ambient_vars(2);
        assert_eq!(a.image("x0").unwrap(), &parse_poly("1/6*x0", &v).unwrap());
        assert_eq!(a.image("x1").unwrap(), &parse_poly("2*x2", &v).unwrap());
        // (x0/6)(2 x2)(3 x1) expanded by hand
        assert_eq!(a.apply(&parse_poly("x0*x1*x2", &v).unwrap()).unwrap(), parse_poly("x0*x1*x2", &v).unwrap());
        let s = VarietySpec::new(2, vec![2, 3, 4], 2, 3, qpoly(&[(1, 1)]));
        assert!(build_alpha(&s, &[2, 1], &[Rational::one(), Rational::one()]).is_err());
    }
}
