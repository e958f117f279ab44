//! Buchberger's algorithm over the rationals, grevlex order.
//!
//! Sized for the small systems produced by the Jacobian criterion here: at
//! most eight variables and low degree. A pair cap turns runaway runs into
//! [`Error::Capacity`] rather than a stall.

use std::collections::{BTreeSet, HashSet};

use crate::arith::{Monomial, MultiPoly, Vars};
use crate::error::{Error, Result};

pub const DEFAULT_PAIR_CAP: usize = 50_000;

/// A reduced Gröbner basis: monic generators, no leading monomial dividing another.
#[derive(Clone, Debug, PartialEq)]
pub struct GroebnerBasis {
    vars: Vars,
    generators: Vec<MultiPoly>,
}

impl GroebnerBasis {
    pub fn generators(&self) -> &[MultiPoly] {
        &self.generators
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn is_unit(&self) -> bool {
        self.generators.len() == 1 && self.generators[0].is_constant() && !self.generators[0].is_zero()
    }

    /// Independent post-hoc check of the defining property and of reducedness.
    pub fn verify(&self) -> bool {
        let gens = &self.generators;
        for (i, g) in gens.iter().enumerate() {
            if !g.leading_coeff().is_some_and(|c| c.is_one()) {
                return false;
            }
            for (j, h) in gens.iter().enumerate() {
                if i != j && h.leading_monomial().unwrap().divides(g.leading_monomial().unwrap()) {
                    return false;
                }
            }
        }
        for i in 0..gens.len() {
            for j in i + 1..gens.len() {
                if !reduce_by(&s_polynomial(&gens[i], &gens[j]), gens).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.to_string()).collect()
    }
}

fn s_polynomial(f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
    let (mf, cf) = f.leading().unwrap();
    let (mg, cg) = g.leading().unwrap();
    let l = mf.lcm(mg);
    let a = f.mul_monomial(&mf.quotient(&l)).scale_by(&cf.inv().unwrap());
    let b = g.mul_monomial(&mg.quotient(&l)).scale_by(&cg.inv().unwrap());
    &a - &b
}

/// Full multivariate division remainder of `f` by the list `divisors`.
fn reduce_by(f: &MultiPoly, divisors: &[MultiPoly]) -> MultiPoly {
    let mut p = f.clone();
    let mut rem = MultiPoly::zero_in(f.vars());
    while let Some((m, c)) = p.leading().map(|(m, c)| (m.clone(), c.clone())) {
        match divisors.iter().find(|g| g.leading_monomial().is_some_and(|lm| lm.divides(&m))) {
            Some(g) => {
                let (gm, gc) = g.leading().unwrap();
                let step = g.mul_monomial(&gm.quotient(&m)).scale_by(&(&c / gc));
                p = &p - &step;
            }
            None => {
                let t = MultiPoly::term(c, m, f.vars());
                rem = &rem + &t;
                p = &p - &t;
            }
        }
    }
    rem
}

/// Normal form of `f` modulo `basis`; zero iff `f` lies in the ideal.
pub fn reduce(f: &MultiPoly, basis: &GroebnerBasis) -> Result<MultiPoly> {
    if f.nvars() != 0 && f.vars() != basis.vars() {
        return Err(Error::VariableMismatch { left: f.vars().to_vec(), right: basis.vars().to_vec() });
    }
    let f = f.embed(basis.vars()).unwrap_or_else(|_| f.clone());
    Ok(reduce_by(&f, &basis.generators))
}

/// Reduced Gröbner basis of the ideal generated by `gens`.
///
/// Uses the product and chain criteria and always treats the pending pair
/// with the smallest lcm first. Fails with a capacity error after `pair_cap` pairs.
pub fn buchberger(gens: &[MultiPoly], pair_cap: usize) -> Result<GroebnerBasis> {
    let vars = gens
        .iter()
        .find(|g| g.nvars() > 0)
        .map(|g| g.vars().clone())
        .ok_or_else(|| Error::domain("buchberger needs at least one generator"))?;
    let mut basis: Vec<MultiPoly> = Vec::new();
    for g in gens {
        let g = g.checked_add(&MultiPoly::zero_in(&vars))?;
        if !g.is_zero() {
            basis.push(g.monic().expect("nonzero rational leading coefficient"));
        }
    }
    if basis.is_empty() {
        return Ok(GroebnerBasis { vars, generators: Vec::new() });
    }
    if basis.iter().any(|g| g.is_constant()) {
        return Ok(unit_basis(&vars));
    }

    let mut queue: BTreeSet<(Monomial, usize, usize)> = BTreeSet::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    let lm = |g: &MultiPoly| g.leading_monomial().unwrap().clone();
    for j in 0..basis.len() {
        for i in 0..j {
            queue.insert((lm(&basis[i]).lcm(&lm(&basis[j])), i, j));
            pending.insert((i, j));
        }
    }

    let mut treated = 0usize;
    while let Some(entry) = queue.pop_first() {
        let (l, i, j) = entry;
        pending.remove(&(i, j));
        treated += 1;
        if treated > pair_cap {
            return Err(Error::Capacity(format!("pair cap {pair_cap} reached with {} pairs pending", queue.len() + 1)));
        }
        let (li, lj) = (lm(&basis[i]), lm(&basis[j]));
        if li.is_coprime(&lj) {
            continue;
        }
        let key = |a: usize, b: usize| (a.min(b), a.max(b));
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && lm(&basis[k]).divides(&l)
                && !pending.contains(&key(i, k))
                && !pending.contains(&key(j, k))
        });
        if chain {
            continue;
        }
        let h = reduce_by(&s_polynomial(&basis[i], &basis[j]), &basis);
        if h.is_zero() {
            continue;
        }
        if h.is_constant() {
            return Ok(unit_basis(&vars));
        }
        let h = h.monic().unwrap();
        let k = basis.len();
        let hm = lm(&h);
        basis.push(h);
        for a in 0..k {
            queue.insert((lm(&basis[a]).lcm(&hm), a, k));
            pending.insert((a, k));
        }
    }
    Ok(GroebnerBasis { vars, generators: interreduce(basis) })
}

fn unit_basis(vars: &Vars) -> GroebnerBasis {
    GroebnerBasis { vars: vars.clone(), generators: vec![MultiPoly::one_in(vars)] }
}

fn interreduce(mut basis: Vec<MultiPoly>) -> Vec<MultiPoly> {
    // minimal basis: drop generators whose leading monomial another one divides
    basis.sort_by(|a, b| a.leading_monomial().cmp(&b.leading_monomial()));
    let mut minimal: Vec<MultiPoly> = Vec::new();
    for g in basis {
        let gm = g.leading_monomial().unwrap();
        if !minimal.iter().any(|h| h.leading_monomial().unwrap().divides(gm)) {
            minimal.push(g);
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<MultiPoly> =
            minimal.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect();
        let g = &minimal[i];
        let (m, c) = g.leading().unwrap();
        let tail = &(g - &MultiPoly::term(c.clone(), m.clone(), g.vars()));
        let r = &MultiPoly::term(c.clone(), m.clone(), g.vars()) + &reduce_by(tail, &others);
        out.push(r.monic().unwrap());
    }
    out
}

/// True iff the ideal generated by `gens` contains 1.
pub fn is_unit_ideal(gens: &[MultiPoly], pair_cap: usize) -> Result<bool> {
    Ok(buchberger(gens, pair_cap)?.is_unit())
}
