use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::multipoly::{Monomial, MultiPoly, Vars};
use super::{Field, Rational, Ring};
use crate::error::{Error, Result};

/// Dense univariate polynomial in `u`, coefficients indexed by degree.
#[derive(Clone, Debug, PartialEq)]
pub struct UniPoly<R = Rational> {
    coeffs: Vec<R>,
}

impl<R: Ring> UniPoly<R> {
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(R::one())
    }

    pub fn constant(c: R) -> Self {
        Self::new(vec![c])
    }

    /// `c u^k`.
    pub fn monomial(c: R, k: usize) -> Self {
        let mut v = vec![R::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn u() -> Self {
        Self::monomial(R::one(), 1)
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> R {
        self.coeffs.get(k).cloned().unwrap_or_else(R::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&R> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff().is_some_and(|c| c.is_one())
    }

    pub fn constant_term(&self) -> R {
        self.coeff(0)
    }

    pub fn scale(&self, c: &R) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn scale_rational(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.scale(c)).collect())
    }

    /// `u^k * self`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![R::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Self::new(v)
    }

    /// Drops all terms of degree `>= n`.
    pub fn truncate(&self, n: usize) -> Self {
        Self::new(self.coeffs.iter().take(n).cloned().collect())
    }

    pub fn eval(&self, x: &R) -> R {
        self.coeffs.iter().rev().fold(R::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    /// `self(lambda * u)`.
    pub fn rescale_var(&self, lambda: &R) -> Self {
        let mut pw = R::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c.clone() * pw.clone());
            pw = pw * lambda.clone();
        }
        Self::new(out)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.scale(&Rational::from_int(k as i64)))
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn map_coeffs<S: Ring>(&self, f: impl Fn(&R) -> S) -> UniPoly<S> {
        UniPoly::new(self.coeffs.iter().map(f).collect())
    }

    /// Exact quotient `self / u^k`, if every term has degree `>= k`.
    pub fn unshift(&self, k: usize) -> Option<Self> {
        if self.coeffs.iter().take(k).any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::new(self.coeffs.iter().skip(k).cloned().collect()))
    }

    /// Evaluates at `u = x0 x1 ... x_{count-1}`, the first `count` variables of `vars`.
    pub fn substitute_product(&self, vars: &Vars, count: usize) -> MultiPoly<R> {
        assert!(count <= vars.len(), "product uses more variables than available");
        MultiPoly::from_terms(
            vars,
            self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| {
                let mut e = vec![0u32; vars.len()];
                e.iter_mut().take(count).for_each(|x| *x = k as u32);
                (Monomial(e), c.clone())
            }),
        )
    }

    /// Exact division by `d` over a ring, `None` if not divisible.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let dd = d.degree()?;
        let lc = d.leading_coeff()?.clone();
        let mut rem = self.clone();
        let Some(sd) = rem.degree() else {
            return Some(Self::zero());
        };
        if sd < dd {
            return None;
        }
        let mut quot = vec![R::zero(); sd - dd + 1];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                return None;
            }
            let c = rem.leading_coeff()?.div_exact(&lc)?;
            quot[rd - dd] = c.clone();
            rem = &rem - &d.scale(&c).shift(rd - dd);
        }
        Some(Self::new(quot))
    }
}

impl<F: Field> UniPoly<F> {
    /// Euclidean division: `self = q d + r` with `deg r < deg d`.
    pub fn divrem(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d.degree().ok_or_else(|| Error::domain("division by zero polynomial"))?;
        let inv = d.leading_coeff().expect("nonzero").inv();
        let mut rem = self.clone();
        let mut quot = vec![F::zero(); self.coeffs.len().saturating_sub(dd).max(1)];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let c = rem.leading_coeff().expect("nonzero").clone() * inv.clone();
            quot[rd - dd] = c.clone();
            rem = &rem - &d.scale(&c).shift(rd - dd);
        }
        Ok((Self::new(quot), rem))
    }

    pub fn make_monic(&self) -> Self {
        match self.leading_coeff() {
            None => Self::zero(),
            Some(c) => self.scale(&c.inv()),
        }
    }
}

impl<R: Ring> fmt::Display for UniPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", c.coeff_text())?,
                1 => write!(f, "{}*u", c.coeff_text())?,
                _ => write!(f, "{}*u^{}", c.coeff_text(), k)?,
            }
        }
        Ok(())
    }
}

impl<'a, 'b, R: Ring> Add<&'b UniPoly<R>> for &'a UniPoly<R> {
    type Output = UniPoly<R>;
    fn add(self, rhs: &'b UniPoly<R>) -> UniPoly<R> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<'a, 'b, R: Ring> Sub<&'b UniPoly<R>> for &'a UniPoly<R> {
    type Output = UniPoly<R>;
    fn sub(self, rhs: &'b UniPoly<R>) -> UniPoly<R> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<'a, 'b, R: Ring> Mul<&'b UniPoly<R>> for &'a UniPoly<R> {
    type Output = UniPoly<R>;
    fn mul(self, rhs: &'b UniPoly<R>) -> UniPoly<R> {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![R::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        UniPoly::new(out)
    }
}

impl<R: Ring> Add for UniPoly<R> {
    type Output = UniPoly<R>;
    fn add(self, rhs: UniPoly<R>) -> UniPoly<R> {
        &self + &rhs
    }
}

impl<R: Ring> Sub for UniPoly<R> {
    type Output = UniPoly<R>;
    fn sub(self, rhs: UniPoly<R>) -> UniPoly<R> {
        &self - &rhs
    }
}

impl<R: Ring> Mul for UniPoly<R> {
    type Output = UniPoly<R>;
    fn mul(self, rhs: UniPoly<R>) -> UniPoly<R> {
        &self * &rhs
    }
}

impl<R: Ring> Neg for UniPoly<R> {
    type Output = UniPoly<R>;
    fn neg(self) -> UniPoly<R> {
        UniPoly::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl<R: Ring> Neg for &UniPoly<R> {
    type Output = UniPoly<R>;
    fn neg(self) -> UniPoly<R> {
        -self.clone()
    }
}

/// Convenience constructor from small integer fractions `(num, den)`, low degree first.
pub fn qpoly(coeffs: &[(i64, i64)]) -> UniPoly<Rational> {
    UniPoly::new(coeffs.iter().map(|&(n, d)| Rational::new(n, d)).collect())
}
