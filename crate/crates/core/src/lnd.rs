//! Derivations of `R = k[x0..xm, z, t, y] / (F)` and of `R[w]`: well-definedness,
//! local nilpotency by iteration, and kernel membership.
//!
//! Quotient normal forms use the single rewriting rule
//! `x^n y -> -(z^q + t^r + x0 p(x))`, which terminates because it lowers the `y`-degree.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arith::text::parse_poly;
use crate::arith::{MultiPoly, Rational, Vars};
use crate::error::{Error, Result};
use crate::variety::{ambient_vars, defining_unchecked, extended_vars, VarietySpec};

pub const DEFAULT_NILPOTENCY_CAP: usize = 64;

/// A derivation given by the images of the generators; extended to all
/// polynomials by the Leibniz rule.
#[derive(Clone, Debug, PartialEq)]
pub struct Derivation {
    vars: Vars,
    images: Vec<MultiPoly>,
    extend_w: bool,
}

impl Derivation {
    /// Generators not named map to 0. With `extend_w`, the ring is `R[w]`.
    pub fn new(m: usize, extend_w: bool, named: &[(&str, MultiPoly)]) -> Result<Derivation> {
        let vars = if extend_w { extended_vars(m) } else { ambient_vars(m) };
        let mut images = vec![MultiPoly::zero_in(&vars); vars.len()];
        for (name, img) in named {
            let i = vars
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| Error::domain(format!("{name} is not a generator of the ring")))?;
            images[i] = img.embed(&vars).or_else(|_| img.checked_add(&MultiPoly::zero_in(&vars)))?;
        }
        Ok(Derivation { vars, images, extend_w })
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn extend_w(&self) -> bool {
        self.extend_w
    }

    pub fn image(&self, name: &str) -> Option<&MultiPoly> {
        self.vars.iter().position(|v| v == name).map(|i| &self.images[i])
    }

    /// The same derivation on `R[w]` with `w -> 0`.
    pub fn extended(&self) -> Derivation {
        if self.extend_w {
            return self.clone();
        }
        let vars = extended_vars(self.vars.len() - 4);
        let mut images: Vec<MultiPoly> = self.images.iter().map(|g| g.embed(&vars).expect("ambient embeds")).collect();
        images.push(MultiPoly::zero_in(&vars));
        Derivation { vars, images, extend_w: true }
    }

    /// `delta(f) = sum_i df/dv_i * delta(v_i)`.
    pub fn apply(&self, f: &MultiPoly) -> Result<MultiPoly> {
        let f = f.embed(&self.vars).or_else(|_| f.checked_add(&MultiPoly::zero_in(&self.vars)))?;
        Ok((0..self.vars.len())
            .filter(|&i| !self.images[i].is_zero())
            .fold(MultiPoly::zero_in(&self.vars), |acc, i| &acc + &(&f.derivative(i) * &self.images[i])))
    }

    pub fn to_json(&self) -> Value {
        let images: serde_json::Map<String, Value> =
            self.vars.iter().zip(&self.images).map(|(v, g)| (v.clone(), Value::String(g.to_string()))).collect();
        json!({ "images": images, "extend_w": self.extend_w })
    }

    fn m(&self) -> usize {
        self.vars.len() - if self.extend_w { 5 } else { 4 }
    }
}

/// On-disk derivation: `{"images": {generator: polynomial}, "extend_w": bool}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DerivationFile {
    pub images: BTreeMap<String, String>,
    #[serde(default)]
    pub extend_w: bool,
}

impl DerivationFile {
    pub fn parse(text: &str) -> Result<DerivationFile> {
        serde_json::from_str(text).map_err(|e| Error::parse(format!("derivation JSON: {e}")))
    }

    pub fn to_derivation(&self, m: usize) -> Result<Derivation> {
        let vars = if self.extend_w { extended_vars(m) } else { ambient_vars(m) };
        let named: Vec<(&str, MultiPoly)> =
            self.images.iter().map(|(k, v)| Ok((k.as_str(), parse_poly(v, &vars)?))).collect::<Result<_>>()?;
        Derivation::new(m, self.extend_w, &named)
    }
}

/// Normal form modulo `F` in the ring of `f` (ambient or extended).
pub fn reduce_mod_f(spec: &VarietySpec, f: &MultiPoly) -> MultiPoly {
    let vars = f.vars().clone();
    let y = vars.iter().position(|v| v == "y").expect("ring has y");
    let mut lead = spec.x_power_n_monomial(vars.len());
    lead.0[y] += 1;
    let tail = -spec.core_polynomial(&vars);
    let mut cur = f.clone();
    loop {
        let (hit, keep): (Vec<_>, Vec<_>) =
            cur.terms().map(|(m, c)| (m.clone(), c.clone())).partition(|(m, _)| lead.divides(m));
        if hit.is_empty() {
            return cur;
        }
        let mut next = MultiPoly::from_terms(&vars, keep);
        for (m, c) in hit {
            next = &next + &tail.mul_monomial(&lead.quotient(&m)).scale_by(&c);
        }
        cur = next;
    }
}

/// `delta(F) = c F` exactly, with `c` reported when it exists.
#[derive(Clone, Debug, PartialEq)]
pub struct WellDefinedReport {
    pub passed: bool,
    pub image_of_f: MultiPoly,
    pub cofactor: Option<MultiPoly>,
}

pub fn check_well_defined(spec: &VarietySpec, d: &Derivation) -> Result<WellDefinedReport> {
    spec.validate_shape()?;
    if d.m() != spec.m {
        return Err(Error::domain(format!("derivation is on m = {} but the variety has m = {}", d.m(), spec.m)));
    }
    let f = defining_unchecked(spec, &d.vars);
    let df = d.apply(&f)?;
    let cofactor = if df.is_zero() { Some(MultiPoly::zero_in(&d.vars)) } else { df.div_exact_poly(&f) };
    Ok(WellDefinedReport { passed: cofactor.is_some(), image_of_f: df, cofactor })
}

/// Per-generator nilpotency degrees `d` with `delta^d(g) != 0 = delta^(d+1)(g)` in the quotient.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NilpotencyEvidence {
    pub degrees: Vec<(String, usize)>,
    pub cap: usize,
}

impl NilpotencyEvidence {
    pub fn degree(&self, name: &str) -> Option<usize> {
        self.degrees.iter().find(|(g, _)| g == name).map(|(_, d)| *d)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum NilpotencyOutcome {
    Nilpotent(NilpotencyEvidence),
    /// `delta^later(g) = factor * delta^earlier(g) != 0`, so no iterate of `g` vanishes.
    Refuted { generator: String, earlier: usize, later: usize, factor: Rational },
    /// `delta^cap(g)` is still nonzero.
    Inconclusive { generator: String, cap: usize },
}

impl NilpotencyOutcome {
    pub fn to_json(&self) -> Value {
        match self {
            NilpotencyOutcome::Nilpotent(ev) => {
                let degrees: serde_json::Map<String, Value> = ev.degrees.iter().map(|(g, d)| (g.clone(), json!(d))).collect();
                json!({ "verdict": "locally-nilpotent", "degrees": degrees, "cap": ev.cap })
            }
            NilpotencyOutcome::Refuted { generator, earlier, later, factor } => json!({
                "verdict": "refuted",
                "generator": generator,
                "cycle": { "earlier": earlier, "later": later, "factor": factor.to_string() },
            }),
            NilpotencyOutcome::Inconclusive { generator, cap } => {
                json!({ "verdict": "inconclusive-cap", "generator": generator, "cap": cap })
            }
        }
    }
}

/// `f = c g` for some `c` in `Q*`.
fn scalar_multiple(f: &MultiPoly, g: &MultiPoly) -> Option<Rational> {
    let (fm, fc) = f.leading()?;
    let (gm, gc) = g.leading()?;
    if fm != gm || f.len() != g.len() {
        return None;
    }
    let c = fc / gc;
    (*f == g.scale_by(&c)).then_some(c)
}

/// Iterates `delta` on each generator, reducing modulo `F`, for at most `cap` applications.
pub fn check_locally_nilpotent(spec: &VarietySpec, d: &Derivation, cap: usize) -> Result<NilpotencyOutcome> {
    spec.validate_shape()?;
    let mut degrees = Vec::new();
    for (i, name) in d.vars.iter().enumerate() {
        let mut history: Vec<MultiPoly> = vec![reduce_mod_f(spec, &MultiPoly::var(i, &d.vars))];
        let degree = loop {
            let k = history.len() - 1;
            if k >= cap {
                return Ok(NilpotencyOutcome::Inconclusive { generator: name.clone(), cap });
            }
            let next = reduce_mod_f(spec, &d.apply(&history[k])?);
            if next.is_zero() {
                break k;
            }
            if let Some((earlier, factor)) = history.iter().enumerate().find_map(|(j, h)| scalar_multiple(&next, h).map(|c| (j, c))) {
                return Ok(NilpotencyOutcome::Refuted { generator: name.clone(), earlier, later: k + 1, factor });
            }
            history.push(next);
        };
        degrees.push((name.clone(), degree));
    }
    Ok(NilpotencyOutcome::Nilpotent(NilpotencyEvidence { degrees, cap }))
}

/// `delta(f) = 0` in the quotient.
pub fn kernel_membership(spec: &VarietySpec, d: &Derivation, f: &MultiPoly) -> Result<bool> {
    Ok(reduce_mod_f(spec, &d.apply(f)?).is_zero())
}

/// `delta_z: z -> x^n, y -> -q z^(q-1)` and `delta_t: t -> x^n, y -> -r t^(r-1)`, both checked.
pub fn standard_lnds(spec: &VarietySpec) -> Result<Vec<Derivation>> {
    spec.validate()?;
    let v = ambient_vars(spec.m);
    let xn = spec.x_power_n(&v);
    let z = MultiPoly::var_named("z", &v)?;
    let t = MultiPoly::var_named("t", &v)?;
    let dz = Derivation::new(
        spec.m,
        false,
        &[("z", xn.clone()), ("y", z.pow(spec.q - 1).scale_by(&Rational::from_int(-(spec.q as i64))))],
    )?;
    let dt = Derivation::new(spec.m, false, &[("t", xn), ("y", t.pow(spec.r - 1).scale_by(&Rational::from_int(-(spec.r as i64))))])?;
    for d in [&dz, &dt] {
        if !check_well_defined(spec, d)?.passed {
            return Err(Error::Construction("standard derivation is not well defined".into()));
        }
        if !matches!(check_locally_nilpotent(spec, d, DEFAULT_NILPOTENCY_CAP)?, NilpotencyOutcome::Nilpotent(_)) {
            return Err(Error::Construction("standard derivation is not locally nilpotent".into()));
        }
    }
    Ok(vec![dz, dt])
}

/// `d/dw` on `R[w]`.
pub fn d_dw(m: usize) -> Derivation {
    let vars = extended_vars(m);
    Derivation::new(m, true, &[("w", MultiPoly::one_in(&vars))]).expect("w is a generator")
}
