use std::borrow::Cow;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::{Rational, Ring};
use crate::error::{Error, Result};

/// Ordered variable names of a polynomial ring, smallest variable first.
pub type Vars = Arc<[String]>;

pub fn vars<S: AsRef<str>>(names: &[S]) -> Vars {
    names.iter().map(|s| s.as_ref().to_string()).collect::<Vec<_>>().into()
}

/// Exponent vector, ordered graded reverse lexicographically with the
/// declared variable order `v0 < v1 < ...`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming divisibility.
    pub fn quotient(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    pub fn product(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(&a, &b)| a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| a == 0 || b == 0)
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            // tie: the smallest variable with differing exponents decides, lower exponent wins
            for (a, b) in self.0.iter().zip(&other.0) {
                if a != b {
                    return b.cmp(a);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial with canonical term storage.
///
/// A polynomial over an empty variable list is a bare constant; it combines
/// with polynomials over any variable list. All other combinations require
/// identical variable lists.
#[derive(Clone, Debug)]
pub struct MultiPoly<R = Rational> {
    vars: Vars,
    terms: BTreeMap<Monomial, R>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

/// Exact `a op b` with a structural error on mismatched rings.
pub fn poly_arith<R: Ring>(a: &MultiPoly<R>, b: &MultiPoly<R>, op: PolyOp) -> Result<MultiPoly<R>> {
    match op {
        PolyOp::Add => a.checked_add(b),
        PolyOp::Sub => a.checked_sub(b),
        PolyOp::Mul => a.checked_mul(b),
    }
}

impl<R: Ring> MultiPoly<R> {
    pub fn zero_in(vars: &Vars) -> Self {
        MultiPoly { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant_in(c: R, vars: &Vars) -> Self {
        Self::term(c, Monomial::one(vars.len()), vars)
    }

    pub fn one_in(vars: &Vars) -> Self {
        Self::constant_in(R::one(), vars)
    }

    /// The variable with index `i` of `vars`.
    pub fn var(i: usize, vars: &Vars) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Self::term(R::one(), Monomial(e), vars)
    }

    pub fn var_named(name: &str, vars: &Vars) -> Result<Self> {
        let i = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::domain(format!("unknown variable {name}")))?;
        Ok(Self::var(i, vars))
    }

    pub fn term(c: R, m: Monomial, vars: &Vars) -> Self {
        assert_eq!(m.0.len(), vars.len(), "exponent vector length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { vars: vars.clone(), terms }
    }

    pub fn from_terms(vars: &Vars, it: impl IntoIterator<Item = (Monomial, R)>) -> Self {
        let mut p = Self::zero_in(vars);
        for (m, c) in it {
            assert_eq!(m.0.len(), vars.len(), "exponent vector length");
            p.add_term(m, c);
        }
        p
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms from the leading one downwards.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &R)> + ExactSizeIterator {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: &Monomial) -> R {
        self.terms.get(m).cloned().unwrap_or_else(R::zero)
    }

    pub fn leading(&self) -> Option<(&Monomial, &R)> {
        self.terms.iter().next_back()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.leading().map(|(m, _)| m)
    }

    pub fn leading_coeff(&self) -> Option<&R> {
        self.leading().map(|(_, c)| c)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_coeff(&self) -> R {
        self.coeff(&Monomial::one(self.nvars()))
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: R) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(m, s);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn common_vars(&self, other: &Self) -> Result<Vars> {
        if Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars || other.vars.is_empty() {
            Ok(self.vars.clone())
        } else if self.vars.is_empty() {
            Ok(other.vars.clone())
        } else {
            Err(Error::VariableMismatch { left: self.vars.to_vec(), right: other.vars.to_vec() })
        }
    }

    fn promoted(&self, vars: &Vars) -> Cow<'_, Self> {
        if self.vars.len() == vars.len() {
            Cow::Borrowed(self)
        } else {
            debug_assert!(self.vars.is_empty());
            Cow::Owned(MultiPoly::constant_in(self.constant_coeff(), vars))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let vars = self.common_vars(other)?;
        let mut out = self.promoted(&vars).into_owned();
        out.vars = vars.clone();
        for (m, c) in other.promoted(&vars).terms.iter() {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        let vars = self.common_vars(other)?;
        let mut out = self.promoted(&vars).into_owned();
        out.vars = vars.clone();
        for (m, c) in other.promoted(&vars).terms.iter() {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let vars = self.common_vars(other)?;
        let a = self.promoted(&vars);
        let b = other.promoted(&vars);
        let mut acc: BTreeMap<Monomial, R> = BTreeMap::new();
        for (ma, ca) in a.terms.iter() {
            for (mb, cb) in b.terms.iter() {
                let m = ma.product(mb);
                let c = ca.clone() * cb.clone();
                match acc.get_mut(&m) {
                    Some(slot) => *slot = slot.clone() + c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(MultiPoly { vars, terms: acc })
    }

    pub fn scale_by(&self, c: &R) -> Self {
        if c.is_zero() {
            return Self::zero_in(&self.vars);
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, a)| (m.clone(), a.clone() * c.clone()))
            .filter(|(_, a)| !a.is_zero())
            .collect();
        MultiPoly { vars: self.vars.clone(), terms }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        let terms = self.terms.iter().map(|(k, c)| (k.product(m), c.clone())).collect();
        MultiPoly { vars: self.vars.clone(), terms }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one_in(&self.vars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn map_coeffs<S: Ring>(&self, f: impl Fn(&R) -> S) -> MultiPoly<S> {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), f(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        MultiPoly { vars: self.vars.clone(), terms }
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero_in(&self.vars);
        for (m, c) in self.terms.iter() {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm.0[i] -= 1;
            out.add_term(dm, c.scale(&Rational::from_int(e as i64)));
        }
        out
    }

    /// Ring map sending variable `i` to `images[i]`; all images share one ring.
    pub fn substitute(&self, images: &[MultiPoly<R>]) -> MultiPoly<R> {
        assert_eq!(images.len(), self.nvars(), "one image per variable");
        let target = images
            .iter()
            .find(|p| !p.vars.is_empty())
            .map(|p| p.vars.clone())
            .unwrap_or_else(|| Arc::from(Vec::<String>::new()));
        let mut powers: Vec<Vec<MultiPoly<R>>> = images.iter().map(|p| vec![MultiPoly::one_in(&target), p.promoted(&target).into_owned()]).collect();
        let mut out = MultiPoly::zero_in(&target);
        for (m, c) in self.terms.iter() {
            let mut t = MultiPoly::constant_in(c.clone(), &target);
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &powers[i][1];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            out = &out + &t;
        }
        out
    }

    /// Evaluation at a point with one coordinate per variable.
    pub fn eval(&self, point: &[R]) -> R {
        assert!(self.vars.is_empty() || point.len() == self.nvars(), "one coordinate per variable");
        let mut acc = R::zero();
        for (m, c) in self.terms.iter() {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t * point[i].pow(e);
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// Re-express over a variable list containing all variables that occur.
    pub fn embed(&self, target: &Vars) -> Result<Self> {
        let map: Vec<Option<usize>> = self.vars.iter().map(|v| target.iter().position(|t| t == v)).collect();
        let mut out = Self::zero_in(target);
        for (m, c) in self.terms.iter() {
            let mut e = vec![0; target.len()];
            for (i, &k) in m.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => e[j] += k,
                    None => return Err(Error::domain(format!("variable {} missing from target ring", self.vars[i]))),
                }
            }
            out.add_term(Monomial(e), c.clone());
        }
        Ok(out)
    }

    /// Exact quotient by `m`, or the first term (from the top) that `m` does not divide.
    pub fn divide_by_monomial(&self, m: &Monomial) -> std::result::Result<Self, (Monomial, R)> {
        assert_eq!(m.0.len(), self.nvars(), "exponent vector length");
        let mut out = Self::zero_in(&self.vars);
        for (k, c) in self.terms() {
            if !m.divides(k) {
                return Err((k.clone(), c.clone()));
            }
            out.terms.insert(m.quotient(k), c.clone());
        }
        Ok(out)
    }

    /// Exact division by a single polynomial. `None` if `d` does not divide `self`.
    pub fn div_exact_poly(&self, d: &Self) -> Option<Self> {
        let vars = self.common_vars(d).ok()?;
        let d = d.promoted(&vars).into_owned();
        let (dm, dc) = {
            let (m, c) = d.leading()?;
            (m.clone(), c.clone())
        };
        let mut rem = self.promoted(&vars).into_owned();
        rem.vars = vars.clone();
        let mut quot = Self::zero_in(&vars);
        while let Some((m, c)) = rem.leading() {
            if !dm.divides(m) {
                return None;
            }
            let qc = c.div_exact(&dc)?;
            let qm = dm.quotient(m);
            let step = d.mul_monomial(&qm).scale_by(&qc);
            rem = &rem - &step;
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Makes the leading coefficient one (requires it to be a unit).
    pub fn monic(&self) -> Option<Self> {
        match self.leading_coeff() {
            None => Some(self.clone()),
            Some(c) => Some(self.scale_by(&c.unit_inverse()?)),
        }
    }

    fn eq_terms(&self, other: &Self) -> bool {
        match self.common_vars(other) {
            Ok(vars) => self.promoted(&vars).terms == other.promoted(&vars).terms,
            Err(_) => false,
        }
    }
}

impl<R: Ring> PartialEq for MultiPoly<R> {
    fn eq(&self, other: &Self) -> bool {
        self.eq_terms(other)
    }
}

impl<R: Ring> fmt::Display for MultiPoly<R> {
    /// Canonical text: terms from the leading one down, `coeff*var^e*...`, joined by `" + "`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in self.terms() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            f.write_str(&c.coeff_text())?;
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*{}", self.vars[i])?,
                    _ => write!(f, "*{}^{}", self.vars[i], e)?,
                }
            }
        }
        Ok(())
    }
}

macro_rules! poly_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<'a, 'b, R: Ring> $tr<&'b MultiPoly<R>> for &'a MultiPoly<R> {
            type Output = MultiPoly<R>;
            /// Panics on mismatched variable lists; use the `checked_*` form for fallible input.
            fn $method(self, rhs: &'b MultiPoly<R>) -> MultiPoly<R> {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl<R: Ring> $tr for MultiPoly<R> {
            type Output = MultiPoly<R>;
            fn $method(self, rhs: MultiPoly<R>) -> MultiPoly<R> {
                (&self).$method(&rhs)
            }
        }
    };
}

poly_binop!(Add, add, checked_add);
poly_binop!(Sub, sub, checked_sub);
poly_binop!(Mul, mul, checked_mul);

impl<R: Ring> Neg for MultiPoly<R> {
    type Output = MultiPoly<R>;
    fn neg(self) -> MultiPoly<R> {
        let terms = self.terms.into_iter().map(|(m, c)| (m, -c)).collect();
        MultiPoly { vars: self.vars, terms }
    }
}

impl<R: Ring> Neg for &MultiPoly<R> {
    type Output = MultiPoly<R>;
    fn neg(self) -> MultiPoly<R> {
        -self.clone()
    }
}

impl<R: Ring> Ring for MultiPoly<R> {
    fn zero() -> Self {
        MultiPoly::zero_in(&Arc::from(Vec::<String>::new()))
    }

    fn one() -> Self {
        MultiPoly::one_in(&Arc::from(Vec::<String>::new()))
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn from_rational(c: Rational) -> Self {
        MultiPoly::constant_in(R::from_rational(c), &Arc::from(Vec::<String>::new()))
    }

    fn div_exact(&self, d: &Self) -> Option<Self> {
        self.div_exact_poly(d)
    }

    fn unit_inverse(&self) -> Option<Self> {
        if self.terms.len() == 1 && self.is_constant() {
            let inv = self.constant_coeff().unit_inverse()?;
            Some(MultiPoly::constant_in(inv, &self.vars))
        } else {
            None
        }
    }

    fn scale(&self, c: &Rational) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, a)| (m.clone(), a.scale(c)))
            .filter(|(_, a)| !a.is_zero())
            .collect();
        MultiPoly { vars: self.vars.clone(), terms }
    }

    fn coeff_text(&self) -> String {
        if self.terms.len() <= 1 && self.is_constant() {
            self.constant_coeff().coeff_text()
        } else {
            format!("({self})")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn additive_cancellation() {
        let v = vars(&["x0", "z"]);
        let x0 = MultiPoly::<Rational>::var(0, &v);
        let z = MultiPoly::var(1, &v);
        let s = poly_arith(&poly_arith(&x0, &z, PolyOp::Add).unwrap(), &(-&z), PolyOp::Add).unwrap();
        assert_eq!(s, x0);
    }

    #[test]
    fn square_and_zero() {
        let v = vars(&["u"]);
        let u = MultiPoly::<Rational>::var(0, &v);
        let sq = poly_arith(&u, &u, PolyOp::Mul).unwrap();
        assert_eq!(sq, MultiPoly::term(q(1), Monomial(vec![2]), &v));
        let zero = MultiPoly::zero_in(&v);
        assert!(poly_arith(&sq, &zero, PolyOp::Mul).unwrap().is_zero());
    }

    #[test]
    fn mismatch_is_structural_error() {
        let a = MultiPoly::<Rational>::var(0, &vars(&["x0"]));
        let b = MultiPoly::<Rational>::var(0, &vars(&["z"]));
        assert!(matches!(poly_arith(&a, &b, PolyOp::Add), Err(Error::VariableMismatch { .. })));
    }

    #[test]
    fn grevlex_order() {
        // x0 < x1 < z: among degree-two monomials z^2 leads, x0^2 is last
        let v = vars(&["x0", "x1", "z"]);
        let p = MultiPoly::from_terms(
            &v,
            [
                (Monomial(vec![2, 0, 0]), q(1)),
                (Monomial(vec![0, 0, 2]), q(1)),
                (Monomial(vec![1, 1, 0]), q(1)),
                (Monomial(vec![0, 1, 1]), q(1)),
                (Monomial(vec![0, 0, 1]), q(1)),
            ],
        );
        let order: Vec<_> = p.terms().map(|(m, _)| m.0.clone()).collect();
        assert_eq!(order, vec![vec![0, 0, 2], vec![0, 1, 1], vec![1, 1, 0], vec![2, 0, 0], vec![0, 0, 1]]);
        assert_eq!(p.to_string(), "1/1*z^2 + 1/1*x1*z + 1/1*x0*x1 + 1/1*x0^2 + 1/1*z");
    }

    #[test]
    fn monomial_divisibility_examples() {
        let v = vars(&["x0", "x1", "z"]);
        let f = MultiPoly::term(q(1), Monomial(vec![2, 2, 1]), &v);
        let quo = f.divide_by_monomial(&Monomial(vec![2, 2, 0])).unwrap();
        assert_eq!(quo, MultiPoly::var(2, &v));

        let g = MultiPoly::term(q(1), Monomial(vec![1, 0, 1]), &v);
        let (witness, _) = g.divide_by_monomial(&Monomial(vec![2, 0, 0])).unwrap_err();
        assert_eq!(witness, Monomial(vec![1, 0, 1]));

        let zero = MultiPoly::<Rational>::zero_in(&v);
        assert!(zero.divide_by_monomial(&Monomial(vec![5, 5, 5])).unwrap().is_zero());
    }

    #[test]
    fn exact_division() {
        let v = vars(&["x", "y"]);
        let x = MultiPoly::<Rational>::var(0, &v);
        let y = MultiPoly::var(1, &v);
        let a = &x + &y;
        let b = &(&x * &x) - &y;
        let prod = &a * &b;
        assert_eq!(prod.div_exact_poly(&a).unwrap(), b);
        assert!((&prod + &x).div_exact_poly(&a).is_none());
    }

    #[test]
    fn substitution_and_derivative() {
        let v = vars(&["x", "y"]);
        let x = MultiPoly::<Rational>::var(0, &v);
        let y = MultiPoly::var(1, &v);
        let f = &(&x * &x) + &y;
        // x -> x + y, y -> 2y
        let g = f.substitute(&[&x + &y, y.scale_by(&q(2))]);
        let expect = &(&(&x + &y) * &(&x + &y)) + &y.scale_by(&q(2));
        assert_eq!(g, expect);
        assert_eq!(f.derivative(0), x.scale_by(&q(2)));
    }

    #[test]
    fn constants_promote() {
        let v = vars(&["a"]);
        let a = MultiPoly::<Rational>::var(0, &v);
        let one = <MultiPoly<Rational> as Ring>::one();
        assert_eq!(&a + &one, MultiPoly::from_terms(&v, [(Monomial(vec![1]), q(1)), (Monomial(vec![0]), q(1))]));
        assert!((&a - &a) == <MultiPoly<Rational> as Ring>::zero());
    }
}
