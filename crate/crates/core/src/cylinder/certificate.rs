use serde::{Deserialize, Serialize};

use super::gl3::{check_gl3, inverse3, is_identity3, mat_mul3, matrix_entries, substitution_images};
use super::{build_gl3, GL3Certificate};
use crate::arith::text::{parse_poly, parse_unipoly, unipoly_to_strings};
use crate::arith::{MultiPoly, Rational, TruncSeries, UniPoly};
use crate::error::{Error, Result};
use crate::variety::{ambient_vars, cylinder_vars, defining_unchecked, SpecFile, VarietySpec};

/// A complete, self-contained certificate for one rational spec.
#[derive(Clone, Debug, PartialEq)]
pub struct CylinderCertificate {
    /// The variety as given, before rescaling.
    pub spec: VarietySpec,
    /// `1 / p(0)`; the GL3 part is built for the rescaled spec.
    pub mu0: Rational,
    pub gl3: GL3Certificate,
    pub inverse: [[MultiPoly; 3]; 3],
    /// `F` with `psi(z^q + t^r + x0 p(x)) = p(x) (z^q + t^r + x0) + x^n F`.
    pub remainder: MultiPoly,
    /// Row `k`: generator `k` of `(x^n, z^q + t^r + x0)` as a combination of `x^n, psi(core)`.
    pub forward: [[MultiPoly; 2]; 2],
    /// Row `k`: `psi` of generator `k` of `(x^n, core)` as a combination of `x^n, z^q + t^r + x0`.
    pub backward: [[MultiPoly; 2]; 2],
}

/// Images of `x0..xm, z, t, y` under the rescaling with parameter `mu0`.
///
/// For `m >= 1`: `x0 -> mu0 x0`, `x1 -> x1 / mu0`, `y -> mu0^(n1 - n0) y`, turning `p` into `mu0 p`.
/// For `m = 0`: `x0 -> mu0 x0`, `y -> mu0^(-n0) y`, turning `p(u)` into `mu0 p(mu0 u)`.
pub fn rescaling_images(spec: &VarietySpec, mu0: &Rational) -> Vec<MultiPoly> {
    let v = ambient_vars(spec.m);
    let mut images: Vec<MultiPoly> = (0..v.len()).map(|i| MultiPoly::var(i, &v)).collect();
    let y = v.len() - 1;
    images[0] = images[0].scale_by(mu0);
    if spec.m >= 1 {
        images[1] = images[1].scale_by(&mu0.pow(-1));
        images[y] = images[y].scale_by(&mu0.pow(spec.n[1] as i32 - spec.n[0] as i32));
    } else {
        images[y] = images[y].scale_by(&mu0.pow(-(spec.n[0] as i32)));
    }
    images
}

/// `(mu0, rescaled spec)` with the rescaled `p` satisfying `p(0) = 1`.
pub fn rescale(spec: &VarietySpec) -> Result<(Rational, VarietySpec)> {
    spec.validate()?;
    let mu0 = spec.p.constant_term().inv().expect("p(0) != 0 after validation");
    let p = if spec.m >= 1 { spec.p.scale(&mu0) } else { spec.p.rescale_var(&mu0).scale(&mu0) };
    Ok((mu0, spec.with_p(p)))
}

/// Fills in inverse, remainder and cofactors around a GL3 part.
pub fn complete_certificate(spec: &VarietySpec, mu0: Rational, gl3: GL3Certificate) -> Result<CylinderCertificate> {
    let v = cylinder_vars(spec.m);
    let rows = matrix_entries(&gl3);
    let inverse = inverse3(&rows, &gl3.det);
    let psi = substitution_images(&rows, &v);
    let norm = &gl3.spec;
    let xn_mono = norm.x_power_n_monomial(v.len());
    let core = norm.core_polynomial(&v);
    let target = norm.with_p(UniPoly::one()).core_polynomial(&v);
    let px = norm.p.substitute_product(&v, norm.m + 1);
    let psi_core = core.substitute(&psi);

    let remainder = (&psi_core - &(&px * &target))
        .divide_by_monomial(&xn_mono)
        .map_err(|_| Error::Construction("psi(core) - p(x) (z^q + t^r + x0) is not divisible by x^n".into()))?;

    let vinv = TruncSeries::from_poly(&norm.p, gl3.precision).inverse()?.to_poly();
    let vx = vinv.substitute_product(&v, norm.m + 1);
    let c0 = (&target - &(&vx * &psi_core))
        .divide_by_monomial(&xn_mono)
        .map_err(|_| Error::Construction("forward cofactor is not divisible by x^n".into()))?;

    let zero = MultiPoly::zero_in(&v);
    let one = MultiPoly::one_in(&v);
    let forward = [[one.clone(), zero.clone()], [c0, vx]];
    let backward = [[one, zero], [remainder.clone(), px]];
    Ok(CylinderCertificate { spec: spec.clone(), mu0, gl3, inverse, remainder, forward, backward })
}

pub fn build_cylinder_certificate(spec: &VarietySpec) -> Result<CylinderCertificate> {
    let (mu0, norm) = rescale(spec)?;
    let gl3 = build_gl3(&norm)?;
    complete_certificate(spec, mu0, gl3)
}

/// Outcome of replaying a certificate: each check in order, stopping at the first failure.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<(String, bool)>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }

    pub fn first_failure(&self) -> Option<&str> {
        self.checks.iter().find(|(_, ok)| !ok).map(|(n, _)| n.as_str())
    }
}

/// Replays every identity in `cert` against `spec`, using only polynomial arithmetic.
pub fn verify_cylinder_certificate(spec: &VarietySpec, cert: &CylinderCertificate) -> VerifyReport {
    let mut report = VerifyReport { checks: Vec::new() };
    let mut check = |name: &str, ok: bool| {
        report.checks.push((name.to_string(), ok));
        ok
    };
    let _ = run_checks(spec, cert, &mut check);
    report
}

fn run_checks(spec: &VarietySpec, cert: &CylinderCertificate, check: &mut dyn FnMut(&str, bool) -> bool) -> Option<()> {
    let ok = |b: bool| if b { Some(()) } else { None };
    ok(check("spec", spec.validate().is_ok() && cert.spec == *spec))?;

    let norm = &cert.gl3.spec;
    let same_shape = norm.m == spec.m && norm.n == spec.n && norm.q == spec.q && norm.r == spec.r;
    let sigma_ok = same_shape && !cert.mu0.is_zero() && {
        let av = ambient_vars(spec.m);
        let images = rescaling_images(spec, &cert.mu0);
        defining_unchecked(spec, &av).substitute(&images) == defining_unchecked(norm, &av)
    };
    ok(check("rescaling", sigma_ok && norm.p.constant_term().is_one()))?;
    ok(check("precision", cert.gl3.precision == spec.precision()))?;

    let gl3 = check_gl3(&cert.gl3);
    ok(check("g-power congruence", gl3 != Err("g-power congruence")))?;
    ok(check("determinant", gl3.is_ok()))?;

    let rows = matrix_entries(&cert.gl3);
    let v = cylinder_vars(spec.m);
    let vars_ok = cert.inverse.iter().flatten().all(|e| e.nvars() == 0 || *e.vars() == v);
    ok(check(
        "inverse",
        vars_ok && is_identity3(&mat_mul3(&rows, &cert.inverse)) && is_identity3(&mat_mul3(&cert.inverse, &rows)),
    ))?;

    let psi = substitution_images(&rows, &v);
    let xn = norm.x_power_n(&v);
    let core = norm.core_polynomial(&v);
    let target = norm.with_p(UniPoly::one()).core_polynomial(&v);
    let px = norm.p.substitute_product(&v, norm.m + 1);
    let psi_core = core.substitute(&psi);
    let embed = |f: &MultiPoly| f.checked_add(&MultiPoly::zero_in(&v)).ok();
    let remainder_ok = embed(&cert.remainder).is_some_and(|f| psi_core == &(&px * &target) + &(&xn * &f));
    ok(check("remainder identity", remainder_ok))?;

    let combo = |row: &[MultiPoly; 2], a: &MultiPoly, b: &MultiPoly| -> Option<MultiPoly> {
        Some(&(&embed(&row[0])? * a) + &(&embed(&row[1])? * b))
    };
    let fwd = combo(&cert.forward[0], &xn, &psi_core).is_some_and(|e| e == xn)
        && combo(&cert.forward[1], &xn, &psi_core).is_some_and(|e| e == target);
    ok(check("forward inclusion", fwd))?;
    let bwd = combo(&cert.backward[0], &xn, &target).is_some_and(|e| e == xn.substitute(&psi))
        && combo(&cert.backward[1], &xn, &target).is_some_and(|e| e == psi_core);
    ok(check("backward inclusion", bwd))?;
    Some(())
}

impl CylinderCertificate {
    /// Every stored coefficient, in a fixed order. Used to build tampered copies.
    pub fn coefficient_count(&self) -> usize {
        let mut n = 0;
        self.clone().visit_coefficients(|_| n += 1);
        n
    }

    /// Copy with stored coefficient `slot` (see [`Self::coefficient_count`]) shifted by `delta`.
    pub fn with_shifted_coefficient(&self, slot: usize, delta: &Rational) -> CylinderCertificate {
        let mut out = self.clone();
        let mut i = 0;
        out.visit_coefficients(|c| {
            if i == slot {
                *c = &*c + delta;
            }
            i += 1;
        });
        out
    }

    fn visit_coefficients(&mut self, mut f: impl FnMut(&mut Rational)) {
        let on_uni = |p: &mut UniPoly, f: &mut dyn FnMut(&mut Rational)| {
            let mut cs = p.coeffs().to_vec();
            cs.iter_mut().for_each(|c| f(c));
            *p = UniPoly::new(cs);
        };
        let on_multi = |p: &mut MultiPoly, f: &mut dyn FnMut(&mut Rational)| {
            let vars = p.vars().clone();
            let mut terms: Vec<_> = p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
            terms.iter_mut().for_each(|(_, c)| f(c));
            *p = MultiPoly::from_terms(&vars, terms);
        };
        f(&mut self.mu0);
        on_uni(&mut self.gl3.g1, &mut f);
        on_uni(&mut self.gl3.g2, &mut f);
        self.gl3.h.iter_mut().for_each(|h| on_multi(h, &mut f));
        f(&mut self.gl3.det);
        self.inverse.iter_mut().flatten().for_each(|e| on_multi(e, &mut f));
        on_multi(&mut self.remainder, &mut f);
        self.forward.iter_mut().flatten().for_each(|e| on_multi(e, &mut f));
        self.backward.iter_mut().flatten().for_each(|e| on_multi(e, &mut f));
    }
}

/// JSON form of a [`CylinderCertificate`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateFile {
    pub spec: SpecFile,
    pub precision: usize,
    pub g1: Vec<String>,
    pub g2: Vec<String>,
    pub h: [String; 3],
    pub det: String,
    pub inverse: [String; 9],
    #[serde(rename = "F")]
    pub remainder: String,
    pub forward_cofactors: [[String; 2]; 2],
    pub backward_cofactors: [[String; 2]; 2],
    pub rescaling: Rescaling,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Rescaling {
    pub mu0: String,
}

impl CertificateFile {
    pub fn from_certificate(cert: &CylinderCertificate) -> CertificateFile {
        let s = |p: &MultiPoly| p.to_string();
        let pair = |r: &[MultiPoly; 2]| [s(&r[0]), s(&r[1])];
        CertificateFile {
            spec: SpecFile::from_spec(&cert.spec),
            precision: cert.gl3.precision,
            g1: unipoly_to_strings(&cert.gl3.g1),
            g2: unipoly_to_strings(&cert.gl3.g2),
            h: cert.gl3.h.each_ref().map(s),
            det: cert.gl3.det.to_string(),
            inverse: std::array::from_fn(|k| s(&cert.inverse[k / 3][k % 3])),
            remainder: s(&cert.remainder),
            forward_cofactors: cert.forward.each_ref().map(pair),
            backward_cofactors: cert.backward.each_ref().map(pair),
            rescaling: Rescaling { mu0: cert.mu0.to_string() },
        }
    }

    /// Rebuilds the certificate. The normalized spec is recomputed from `mu0`
    /// and is itself checked by the verifier's rescaling step.
    pub fn to_certificate(&self) -> Result<CylinderCertificate> {
        let spec = self.spec.to_spec()?;
        let mu0: Rational = self.rescaling.mu0.parse()?;
        let norm_p = match mu0.inv() {
            Some(_) if spec.m >= 1 => spec.p.scale(&mu0),
            Some(_) => spec.p.rescale_var(&mu0).scale(&mu0),
            None => return Err(Error::validation("mu0 != 0", "rescaling.mu0 is zero")),
        };
        let v = cylinder_vars(spec.m);
        let p = |t: &str| parse_poly(t, &v);
        let pair = |r: &[String; 2]| -> Result<[MultiPoly; 2]> { Ok([p(&r[0])?, p(&r[1])?]) };
        let inverse_flat: Vec<MultiPoly> = self.inverse.iter().map(|t| p(t)).collect::<Result<_>>()?;
        let gl3 = GL3Certificate {
            spec: spec.with_p(norm_p),
            precision: self.precision,
            g1: parse_unipoly(&self.g1)?,
            g2: parse_unipoly(&self.g2)?,
            h: [p(&self.h[0])?, p(&self.h[1])?, p(&self.h[2])?],
            det: self.det.parse()?,
        };
        Ok(CylinderCertificate {
            spec,
            mu0,
            gl3,
            inverse: std::array::from_fn(|i| std::array::from_fn(|j| inverse_flat[3 * i + j].clone())),
            remainder: p(&self.remainder)?,
            forward: [pair(&self.forward_cofactors[0])?, pair(&self.forward_cofactors[1])?],
            backward: [pair(&self.backward_cofactors[0])?, pair(&self.backward_cofactors[1])?],
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn parse(text: &str) -> Result<CertificateFile> {
        serde_json::from_str(text).map_err(|e| Error::parse(format!("certificate JSON: {e}")))
    }
}
