//! The varieties `X_m(n, p)`: specs, defining polynomials, the Jacobian
//! smoothness check and the localization `x_m != 0`.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::text::parse_poly;
use crate::arith::{vars, Monomial, MultiPoly, ParamPoly, Rational, Ring, UniPoly, Vars};
use crate::error::{Error, Result};
use crate::groebner::{buchberger, GroebnerBasis};

/// `(m, n, q, r, p)` describing `x^n y + z^q + t^r + x0 p(x) = 0`,
/// with `x = x0 ... xm` and `x^n = x0^n0 ... xm^nm`.
#[derive(Clone, Debug, PartialEq)]
pub struct VarietySpec<R: Ring = Rational> {
    pub m: usize,
    pub n: Vec<u32>,
    pub q: u32,
    pub r: u32,
    pub p: UniPoly<R>,
}

/// Ambient coordinates `x0..xm, z, t, y` in increasing variable order.
pub fn ambient_vars(m: usize) -> Vars {
    let mut v: Vec<String> = (0..=m).map(|i| format!("x{i}")).collect();
    v.extend(["z", "t", "y"].map(String::from));
    v.into()
}

/// Coordinates of `D[w] = k[x0..xm, z, t, w]`.
pub fn cylinder_vars(m: usize) -> Vars {
    let mut v: Vec<String> = (0..=m).map(|i| format!("x{i}")).collect();
    v.extend(["z", "t", "w"].map(String::from));
    v.into()
}

/// Ambient coordinates of the cylinder `R[w]`: `x0..xm, z, t, y, w`.
pub fn extended_vars(m: usize) -> Vars {
    let mut v: Vec<String> = (0..=m).map(|i| format!("x{i}")).collect();
    v.extend(["z", "t", "y", "w"].map(String::from));
    v.into()
}

impl<R: Ring> VarietySpec<R> {
    pub fn new(m: usize, n: Vec<u32>, q: u32, r: u32, p: UniPoly<R>) -> Self {
        VarietySpec { m, n, q, r, p }
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_shape()?;
        if self.p.constant_term().is_zero() {
            return Err(Error::validation("p(0) != 0", format!("p = {}", self.p)));
        }
        Ok(())
    }

    /// All clauses except `p(0) != 0`, which the smoothness check deliberately probes.
    pub fn validate_shape(&self) -> Result<()> {
        if self.n.len() != self.m + 1 {
            return Err(Error::validation("n has m+1 entries", format!("m = {} but n has {} entries", self.m, self.n.len())));
        }
        if let Some(bad) = self.n.iter().find(|&&ni| ni <= 1) {
            return Err(Error::validation("n_i > 1", format!("entry {bad} in n = {:?}", self.n)));
        }
        if self.q < 2 || self.r < 2 {
            return Err(Error::validation("q, r >= 2", format!("q = {}, r = {}", self.q, self.r)));
        }
        if self.q.gcd(&self.r) != 1 {
            return Err(Error::validation("gcd(q, r) = 1", format!("gcd({}, {}) = {}", self.q, self.r, self.q.gcd(&self.r))));
        }
        if self.p.is_zero() {
            return Err(Error::validation("p != 0", "p is the zero polynomial"));
        }
        Ok(())
    }

    /// `max n_i`: the least `N` with `x^n | x^N`.
    pub fn precision(&self) -> usize {
        self.n.iter().copied().max().unwrap_or(0) as usize
    }

    /// `x^n` in a ring whose first `m+1` variables are `x0..xm`.
    pub fn x_power_n(&self, vars: &Vars) -> MultiPoly<R> {
        let mut e = vec![0u32; vars.len()];
        e[..=self.m].copy_from_slice(&self.n);
        MultiPoly::term(R::one(), Monomial(e), vars)
    }

    pub fn x_power_n_monomial(&self, nvars: usize) -> Monomial {
        let mut e = vec![0u32; nvars];
        e[..=self.m].copy_from_slice(&self.n);
        Monomial(e)
    }

    /// `z^q + t^r + x0 p(x)` in the given ring (which must contain `z` and `t`).
    pub fn core_polynomial(&self, vars: &Vars) -> MultiPoly<R> {
        let z = MultiPoly::var_named("z", vars).expect("ring has z");
        let t = MultiPoly::var_named("t", vars).expect("ring has t");
        let x0 = MultiPoly::var(0, vars);
        let px = self.p.substitute_product(vars, self.m + 1);
        &(&z.pow(self.q) + &t.pow(self.r)) + &(&x0 * &px)
    }

    pub fn with_p(&self, p: UniPoly<R>) -> Self {
        VarietySpec { p, ..self.clone() }
    }
}

/// `x^n y + z^q + t^r + x0 p(x)` over [`ambient_vars`].
#[derive(Clone, Debug, PartialEq)]
pub struct DefiningPolynomial<R: Ring = Rational> {
    pub value: MultiPoly<R>,
}

pub fn build_defining<R: Ring>(spec: &VarietySpec<R>) -> Result<DefiningPolynomial<R>> {
    spec.validate()?;
    Ok(DefiningPolynomial { value: defining_unchecked(spec, &ambient_vars(spec.m)) })
}

/// Same polynomial without validation, over any ring containing `x0..xm, z, t, y`.
pub(crate) fn defining_unchecked<R: Ring>(spec: &VarietySpec<R>, vars: &Vars) -> MultiPoly<R> {
    let y = MultiPoly::var_named("y", vars).expect("ring has y");
    &(&spec.x_power_n(vars) * &y) + &spec.core_polynomial(vars)
}

/// `(F, dF/dx0, ..., dF/dxm, dF/dy, dF/dz, dF/dt)`.
///
/// Only the shape is validated, so `p(0) = 0` is allowed here.
pub fn jacobian_generators(spec: &VarietySpec) -> Result<Vec<MultiPoly>> {
    spec.validate_shape()?;
    let f = defining_unchecked(spec, &ambient_vars(spec.m));
    let v = f.vars().clone();
    let idx = |name: &str| v.iter().position(|x| x == name).unwrap();
    let mut out = vec![f.clone()];
    out.extend((0..=spec.m).map(|i| f.derivative(i)));
    out.push(f.derivative(idx("y")));
    out.push(f.derivative(idx("z")));
    out.push(f.derivative(idx("t")));
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SmoothnessVerdict {
    Smooth,
    Singular,
    UndecidedCapacity,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SmoothnessEvidence {
    /// The Jacobian ideal has reduced basis `{1}`.
    UnitBasis(GroebnerBasis),
    /// All Jacobian generators vanish at this point.
    SingularPoint(Vec<(String, Rational)>),
    NonUnitBasis(GroebnerBasis),
    Capacity(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SmoothnessReport {
    pub verdict: SmoothnessVerdict,
    pub evidence: SmoothnessEvidence,
}

impl SmoothnessReport {
    pub fn to_json(&self) -> serde_json::Value {
        let evidence = match &self.evidence {
            SmoothnessEvidence::UnitBasis(b) | SmoothnessEvidence::NonUnitBasis(b) => {
                serde_json::json!({ "groebner_basis": b.to_strings() })
            }
            SmoothnessEvidence::SingularPoint(pt) => {
                let point: serde_json::Map<String, serde_json::Value> =
                    pt.iter().map(|(v, c)| (v.clone(), serde_json::Value::String(c.to_string()))).collect();
                serde_json::json!({ "singular_point": point })
            }
            SmoothnessEvidence::Capacity(msg) => serde_json::json!({ "capacity": msg }),
        };
        serde_json::json!({ "verdict": self.verdict, "evidence": evidence })
    }
}

/// Jacobian criterion for the hypersurface `F = 0`.
///
/// The origin (where a vanishing `p(0)` makes every generator vanish) is probed
/// before any Gröbner computation.
pub fn check_smooth(spec: &VarietySpec, pair_cap: usize) -> Result<SmoothnessReport> {
    let gens = jacobian_generators(spec)?;
    let v = gens[0].vars().clone();
    let origin = vec![Rational::zero(); v.len()];
    if gens.iter().all(|g| g.eval(&origin).is_zero()) {
        let point = v.iter().map(|name| (name.clone(), Rational::zero())).collect();
        return Ok(SmoothnessReport { verdict: SmoothnessVerdict::Singular, evidence: SmoothnessEvidence::SingularPoint(point) });
    }
    match buchberger(&gens, pair_cap) {
        Ok(b) if b.is_unit() => Ok(SmoothnessReport { verdict: SmoothnessVerdict::Smooth, evidence: SmoothnessEvidence::UnitBasis(b) }),
        Ok(b) => Ok(SmoothnessReport { verdict: SmoothnessVerdict::Singular, evidence: SmoothnessEvidence::NonUnitBasis(b) }),
        Err(Error::Capacity(msg)) => Ok(SmoothnessReport {
            verdict: SmoothnessVerdict::UndecidedCapacity,
            evidence: SmoothnessEvidence::Capacity(msg),
        }),
        Err(e) => Err(e),
    }
}

/// `num / x_m^power` in `k[x0..xm, z, t, Y][x_m^-1]`.
#[derive(Clone, Debug)]
pub struct LaurentPoly {
    pub num: MultiPoly,
    pub power: u32,
    /// Index of `x_m` in `num`'s variables.
    pub unit_var: usize,
}

impl LaurentPoly {
    fn unit_power(&self, k: u32) -> MultiPoly {
        let mut e = vec![0; self.num.nvars()];
        e[self.unit_var] = k;
        MultiPoly::term(Rational::one(), Monomial(e), self.num.vars())
    }

    /// Cancels common powers of `x_m` between numerator and denominator.
    pub fn normalized(&self) -> LaurentPoly {
        let common = self.num.terms().map(|(m, _)| m.0[self.unit_var]).min().unwrap_or(self.power).min(self.power);
        let mut e = vec![0; self.num.nvars()];
        e[self.unit_var] = common;
        let num = self.num.divide_by_monomial(&Monomial(e)).expect("common factor divides");
        LaurentPoly { num, power: self.power - common, unit_var: self.unit_var }
    }
}

impl PartialEq for LaurentPoly {
    fn eq(&self, other: &Self) -> bool {
        self.unit_var == other.unit_var
            && &self.num * &other.unit_power(other.power) == &other.num * &self.unit_power(self.power)
    }
}

/// Result of replaying `X_m \ {x_m = 0} = X_{m-1} x G_m` on the defining polynomial.
#[derive(Clone, Debug)]
pub struct LocalizationReport {
    /// `F` after `y = x_m^(-n_m) Y`, over `x0..xm, z, t, Y`.
    pub transformed: LaurentPoly,
    /// `x0^n0 prod_{i != m} x_i^n_i Y + z^q + t^r + x0 p(x)`, built directly.
    pub expected: MultiPoly,
    pub matches_expected: bool,
    /// Inverse substitution `Y = x_m^(n_m) y` gives back `F`.
    pub round_trip: bool,
    /// `x_m` no longer occurs (true exactly when `p` is constant): then the
    /// transformed polynomial is the `(m-1)`-variety's with `Y` for `y`.
    pub unit_var_free: bool,
    pub matches_lower_variety: Option<bool>,
}

impl LocalizationReport {
    pub fn passed(&self) -> bool {
        self.matches_expected && self.round_trip && self.matches_lower_variety != Some(false)
    }
}

fn localized_vars(m: usize) -> Vars {
    let mut v: Vec<String> = (0..=m).map(|i| format!("x{i}")).collect();
    v.extend(["z", "t", "Y"].map(String::from));
    v.into()
}

/// `y -> x_m^(-n_m) Y` on a polynomial over [`ambient_vars`].
pub fn localize_y(spec: &VarietySpec, f: &MultiPoly) -> LaurentPoly {
    let lv = localized_vars(spec.m);
    let (yi, xm) = (spec.m + 3, spec.m);
    let nm = spec.n[spec.m];
    let d = f.degree_in(yi);
    // clear the denominator x_m^(n_m d)
    let num = MultiPoly::from_terms(
        &lv,
        f.terms().map(|(mono, c)| {
            let mut e = mono.0.clone();
            e[xm] += nm * (d - mono.0[yi]);
            (Monomial(e), c.clone())
        }),
    );
    LaurentPoly { num, power: nm * d, unit_var: xm }.normalized()
}

/// `Y -> x_m^(n_m) y`, the inverse of [`localize_y`]; `None` if the result
/// is not a polynomial.
pub fn delocalize_y(spec: &VarietySpec, g: &LaurentPoly) -> Option<MultiPoly> {
    let av = ambient_vars(spec.m);
    let nm = spec.n[spec.m];
    let xm = spec.m;
    let yi = spec.m + 3;
    let num = MultiPoly::from_terms(
        &av,
        g.num.terms().map(|(mono, c)| {
            let mut e = mono.0.clone();
            e[xm] += nm * mono.0[yi];
            (Monomial(e), c.clone())
        }),
    );
    let mut e = vec![0; av.len()];
    e[xm] = g.power;
    num.divide_by_monomial(&Monomial(e)).ok()
}

pub fn localization_decomposition(spec: &VarietySpec) -> Result<LocalizationReport> {
    spec.validate()?;
    if spec.m == 0 {
        return Err(Error::domain("localization at x_m needs m >= 1"));
    }
    let f = build_defining(spec)?.value;
    let transformed = localize_y(spec, &f);

    let lv = localized_vars(spec.m);
    let mut e = vec![0u32; lv.len()];
    e[..spec.m].copy_from_slice(&spec.n[..spec.m]);
    e[spec.m + 3] = 1;
    let expected = &MultiPoly::term(Rational::one(), Monomial(e), &lv) + &spec.core_polynomial(&lv);
    let matches_expected = transformed.power == 0 && transformed.num == expected;

    let round_trip = delocalize_y(spec, &transformed).is_some_and(|g| g == f);
    let unit_var_free = transformed.num.degree_in(spec.m) == 0 && transformed.power == 0;

    let matches_lower_variety = if spec.p.degree() == Some(0) {
        let lower = VarietySpec::new(spec.m - 1, spec.n[..spec.m].to_vec(), spec.q, spec.r, spec.p.clone());
        let lower_vars = ambient_vars(spec.m - 1);
        let renamed: Vars = lower_vars.iter().map(|v| if v == "y" { "Y".to_string() } else { v.clone() }).collect::<Vec<_>>().into();
        let g = build_defining(&lower)?.value;
        let g = MultiPoly::from_terms(&renamed, g.terms().map(|(m, c)| (m.clone(), c.clone())));
        Some(g.embed(&lv)? == transformed.num)
    } else {
        None
    };

    Ok(LocalizationReport { transformed, expected, matches_expected, round_trip, unit_var_free, matches_lower_variety })
}

/// On-disk spec: `{"m", "n", "q", "r", "p": ["num/den", ...], "parameters": [...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub m: usize,
    pub n: Vec<u32>,
    pub q: u32,
    pub r: u32,
    pub p: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub parameters: Vec<String>,
}

impl SpecFile {
    pub fn parse(text: &str) -> Result<SpecFile> {
        serde_json::from_str(text).map_err(|e| Error::parse(format!("spec JSON: {e}")))
    }

    /// Rational spec; family-mode files (with parameters) are rejected.
    /// Only the shape is validated; `p(0) != 0` is left to the consumer.
    pub fn to_spec(&self) -> Result<VarietySpec> {
        if !self.parameters.is_empty() {
            return Err(Error::validation("rational coefficients", "family-mode spec (parameters present) not accepted here"));
        }
        let p = UniPoly::new(self.p.iter().map(|c| c.parse()).collect::<Result<Vec<Rational>>>()?);
        let spec = VarietySpec::new(self.m, self.n.clone(), self.q, self.r, p);
        spec.validate_shape()?;
        Ok(spec)
    }

    pub fn to_family_spec(&self) -> Result<VarietySpec<ParamPoly>> {
        let pv = vars(&self.parameters);
        let p = UniPoly::new(self.p.iter().map(|c| parse_poly(c, &pv)).collect::<Result<Vec<_>>>()?);
        let spec = VarietySpec::new(self.m, self.n.clone(), self.q, self.r, p);
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_spec(spec: &VarietySpec) -> SpecFile {
        SpecFile {
            m: spec.m,
            n: spec.n.clone(),
            q: spec.q,
            r: spec.r,
            p: spec.p.coeffs().iter().map(|c| c.to_string()).collect(),
            parameters: Vec::new(),
        }
    }

    pub fn from_family_spec(spec: &VarietySpec<ParamPoly>, parameters: &[String]) -> SpecFile {
        SpecFile {
            m: spec.m,
            n: spec.n.clone(),
            q: spec.q,
            r: spec.r,
            p: spec.p.coeffs().iter().map(|c| c.to_string()).collect(),
            parameters: parameters.to_vec(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::qpoly;
    use crate::arith::text::parse_poly;
    use crate::groebner::{reduce, DEFAULT_PAIR_CAP};

    fn spec(m: usize, n: &[u32], q: u32, r: u32, p: &[(i64, i64)]) -> VarietySpec {
        VarietySpec::new(m, n.to_vec(), q, r, qpoly(p))
    }

    #[test]
    fn defining_polynomials() {
        let s = spec(0, &[2], 2, 3, &[(1, 1)]);
        let f = build_defining(&s).unwrap().value;
        assert_eq!(f, parse_poly("x0^2*y + z^2 + t^3 + x0", &ambient_vars(0)).unwrap());

        let s = spec(1, &[2, 3], 2, 3, &[(1, 1), (1, 1)]);
        let f = build_defining(&s).unwrap().value;
        assert_eq!(f, parse_poly("x0^2*x1^3*y + z^2 + t^3 + x0*(1 + x0*x1)", &ambient_vars(1)).unwrap());
    }

    #[test]
    fn validation_clauses() {
        let err = |s: VarietySpec| match build_defining(&s) {
            Err(Error::Validation { clause, .. }) => clause,
            other => panic!("expected validation error, got {other:?}"),
        };
        assert_eq!(err(spec(0, &[2], 2, 2, &[(1, 1)])), "gcd(q, r) = 1");
        assert_eq!(err(spec(0, &[1], 2, 3, &[(1, 1)])), "n_i > 1");
        assert_eq!(err(spec(0, &[2], 1, 3, &[(1, 1)])), "q, r >= 2");
        assert_eq!(err(spec(0, &[2], 2, 3, &[(0, 1), (1, 1)])), "p(0) != 0");
        assert_eq!(err(spec(1, &[2], 2, 3, &[(1, 1)])), "n has m+1 entries");
    }

    #[test]
    fn jacobian_entries() {
        let s = spec(0, &[2], 2, 3, &[(1, 1)]);
        let v = ambient_vars(0);
        let g = jacobian_generators(&s).unwrap();
        // order: F, dx0, dy, dz, dt
        assert_eq!(g[1], parse_poly("2*x0*y + 1", &v).unwrap());
        assert_eq!(g[2], parse_poly("x0^2", &v).unwrap());
        assert_eq!(g[3], parse_poly("2*z", &v).unwrap());
    }

    #[test]
    fn hand_unit_combination() {
        // 1 = (1 - 2 x0 y) dF/dx0 + 4 y^2 dF/dy for m = 0, n = (2), p = 1
        let s = spec(0, &[2], 2, 3, &[(1, 1)]);
        let v = ambient_vars(0);
        let g = jacobian_generators(&s).unwrap();
        let combo = &(&parse_poly("1 - 2*x0*y", &v).unwrap() * &g[1]) + &(&parse_poly("4*y^2", &v).unwrap() * &g[2]);
        assert_eq!(combo, MultiPoly::one_in(&v));
        let rep = check_smooth(&s, DEFAULT_PAIR_CAP).unwrap();
        assert_eq!(rep.verdict, SmoothnessVerdict::Smooth);
        match rep.evidence {
            SmoothnessEvidence::UnitBasis(b) => assert!(reduce(&MultiPoly::one_in(&v), &b).unwrap().is_zero()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn smoothness_examples() {
        let rep = check_smooth(&spec(1, &[2, 2], 2, 3, &[(1, 1)]), DEFAULT_PAIR_CAP).unwrap();
        assert_eq!(rep.verdict, SmoothnessVerdict::Smooth);
    }

    #[test]
    fn vanishing_p0_is_singular_at_origin() {
        let s = spec(0, &[2], 2, 3, &[(0, 1), (1, 1)]);
        let rep = check_smooth(&s, DEFAULT_PAIR_CAP).unwrap();
        assert_eq!(rep.verdict, SmoothnessVerdict::Singular);
        assert!(matches!(rep.evidence, SmoothnessEvidence::SingularPoint(_)));
        // independent check: every generator vanishes at the origin
        let f = defining_unchecked(&s, &ambient_vars(0));
        let v = f.vars().clone();
        let origin = vec![Rational::zero(); v.len()];
        let mut gens = vec![f.clone()];
        gens.extend((0..v.len()).map(|i| f.derivative(i)));
        assert!(gens.iter().all(|g| g.eval(&origin).is_zero()));
    }

    #[test]
    fn localization_examples() {
        let s = spec(1, &[2, 3], 2, 3, &[(1, 1)]);
        let rep = localization_decomposition(&s).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.transformed.num, parse_poly("x0^2*Y + z^2 + t^3 + x0", &localized_vars(1)).unwrap());
        assert!(rep.unit_var_free);
        assert_eq!(rep.matches_lower_variety, Some(true));

        let rep = localization_decomposition(&spec(1, &[2, 2], 2, 3, &[(1, 1)])).unwrap();
        assert!(rep.round_trip);

        let rep = localization_decomposition(&spec(1, &[2, 3], 2, 3, &[(1, 1), (1, 1)])).unwrap();
        assert!(rep.passed());
        assert!(!rep.unit_var_free);

        assert!(matches!(localization_decomposition(&spec(0, &[2], 2, 3, &[(1, 1)])), Err(Error::Domain(_))));
    }

    #[test]
    fn spec_file_round_trip() {
        let text = r#"{"m": 1, "n": [2, 3], "q": 2, "r": 3, "p": ["2/1", "1/1"]}"#;
        let sf = SpecFile::parse(text).unwrap();
        let s = sf.to_spec().unwrap();
        assert_eq!(s, spec(1, &[2, 3], 2, 3, &[(2, 1), (1, 1)]));
        assert_eq!(SpecFile::from_spec(&s), sf);
        let fam = r#"{"m": 0, "n": [4], "q": 2, "r": 3, "p": ["1", "1", "a2"], "parameters": ["a2"]}"#;
        let fs = SpecFile::parse(fam).unwrap().to_family_spec().unwrap();
        assert_eq!(fs.p.degree(), Some(2));
        assert!(SpecFile::parse(fam).unwrap().to_spec().is_err());
    }
}
