use super::{Rational, Ring, UniPoly};
use crate::error::{Error, Result};

/// Element of `R[u]/(u^N)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncSeries<R = Rational> {
    coeffs: Vec<R>,
}

impl<R: Ring> TruncSeries<R> {
    pub fn zero(precision: usize) -> Self {
        assert!(precision > 0, "precision must be positive");
        TruncSeries { coeffs: vec![R::zero(); precision] }
    }

    pub fn one(precision: usize) -> Self {
        let mut s = Self::zero(precision);
        s.coeffs[0] = R::one();
        s
    }

    pub fn from_poly(p: &UniPoly<R>, precision: usize) -> Self {
        assert!(precision > 0, "precision must be positive");
        TruncSeries { coeffs: (0..precision).map(|k| p.coeff(k)).collect() }
    }

    pub fn from_coeffs(mut coeffs: Vec<R>, precision: usize) -> Self {
        assert!(precision > 0, "precision must be positive");
        coeffs.resize(precision, R::zero());
        coeffs.truncate(precision);
        TruncSeries { coeffs }
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &R {
        &self.coeffs[k]
    }

    pub fn to_poly(&self) -> UniPoly<R> {
        UniPoly::new(self.coeffs.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        TruncSeries { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() + b.clone()).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check(other);
        TruncSeries { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() - b.clone()).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let n = self.precision();
        let mut out = vec![R::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(n - i).enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        TruncSeries { coeffs: out }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        TruncSeries { coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.precision());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.precision(), other.precision(), "series precision mismatch");
    }

    /// Multiplicative inverse; the constant term must be a unit.
    pub fn inverse(&self) -> Result<Self> {
        let inv0 = self.coeffs[0]
            .unit_inverse()
            .ok_or_else(|| Error::domain("series inverse needs an invertible constant term"))?;
        let n = self.precision();
        let mut v: Vec<R> = Vec::with_capacity(n);
        v.push(inv0.clone());
        for k in 1..n {
            let mut acc = R::zero();
            for j in 1..=k {
                acc = acc + self.coeffs[j].clone() * v[k - j].clone();
            }
            v.push(-(acc * inv0.clone()));
        }
        Ok(TruncSeries { coeffs: v })
    }

    /// Formal logarithm of a series with constant term one.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::domain("series log needs constant term 1"));
        }
        // p s' = p'  =>  k s_k = k p_k - sum_{j=1}^{k-1} j s_j p_{k-j}
        let n = self.precision();
        let mut s = vec![R::zero(); n];
        for k in 1..n {
            let mut acc = self.coeffs[k].scale(&Rational::from_int(k as i64));
            for j in 1..k {
                acc = acc - (s[j].clone() * self.coeffs[k - j].clone()).scale(&Rational::from_int(j as i64));
            }
            s[k] = acc.scale(&Rational::new(1, k as i64));
        }
        Ok(TruncSeries { coeffs: s })
    }

    /// Formal exponential of a series with zero constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::domain("series exp needs constant term 0"));
        }
        // e' = s' e  =>  k e_k = sum_{j=1}^{k} j s_j e_{k-j}
        let n = self.precision();
        let mut e = vec![R::zero(); n];
        e[0] = R::one();
        for k in 1..n {
            let mut acc = R::zero();
            for j in 1..=k {
                if self.coeffs[j].is_zero() {
                    continue;
                }
                acc = acc + (self.coeffs[j].clone() * e[k - j].clone()).scale(&Rational::from_int(j as i64));
            }
            e[k] = acc.scale(&Rational::new(1, k as i64));
        }
        Ok(TruncSeries { coeffs: e })
    }
}

pub fn series_log<R: Ring>(p: &TruncSeries<R>) -> Result<TruncSeries<R>> {
    p.log()
}

pub fn series_exp<R: Ring>(s: &TruncSeries<R>) -> Result<TruncSeries<R>> {
    s.exp()
}

pub fn series_inverse<R: Ring>(p: &TruncSeries<R>) -> Result<TruncSeries<R>> {
    p.inverse()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::multipoly::{vars, MultiPoly};
    use crate::arith::unipoly::qpoly;

    fn ser(c: &[(i64, i64)], n: usize) -> TruncSeries {
        TruncSeries::from_poly(&qpoly(c), n)
    }

    /// Mercator coefficients (-1)^(i+1)/i, written out independently.
    fn mercator(n: usize) -> TruncSeries {
        let c: Vec<Rational> = (0..n)
            .map(|i| if i == 0 { Rational::zero() } else { Rational::new(if i % 2 == 1 { 1 } else { -1 }, i as i64) })
            .collect();
        TruncSeries::from_coeffs(c, n)
    }

    #[test]
    fn log_examples() {
        assert_eq!(ser(&[(1, 1)], 5).log().unwrap(), TruncSeries::zero(5));
        let l = ser(&[(1, 1), (1, 1)], 3).log().unwrap();
        assert_eq!(l, mercator(3));
        assert_eq!(l, ser(&[(0, 1), (1, 1), (-1, 2)], 3));
        assert_eq!(ser(&[(1, 1), (1, 1)], 9).log().unwrap(), mercator(9));
        assert!(ser(&[(2, 1), (1, 1)], 3).log().is_err());
    }

    #[test]
    fn log_over_parameter_ring() {
        let a = vars(&["a2"]);
        let a2 = MultiPoly::<Rational>::var(0, &a);
        let one = MultiPoly::one_in(&a);
        let p = TruncSeries::from_coeffs(vec![one.clone(), one.clone(), a2.clone()], 3);
        let l = p.log().unwrap();
        assert!(l.coeff(0).is_zero());
        assert_eq!(*l.coeff(1), one);
        assert_eq!(*l.coeff(2), &a2 - &MultiPoly::constant_in(Rational::new(1, 2), &a));
    }

    /// Direct summation of s^k/k! for k <= 2 (enough at precision 3).
    fn exp_direct(s: &TruncSeries) -> TruncSeries {
        let one = TruncSeries::one(s.precision());
        one.add(s).add(&s.mul(s).scale(&Rational::new(1, 2)))
    }

    #[test]
    fn exp_examples() {
        assert_eq!(TruncSeries::<Rational>::zero(4).exp().unwrap(), TruncSeries::one(4));
        let s = ser(&[(0, 1), (1, 1), (-1, 2)], 3);
        assert_eq!(s.exp().unwrap(), exp_direct(&s));
        assert_eq!(s.exp().unwrap(), ser(&[(1, 1), (1, 1)], 3));
        let h = s.scale(&Rational::new(1, 2));
        assert_eq!(h.exp().unwrap(), exp_direct(&h));
        assert_eq!(h.exp().unwrap(), ser(&[(1, 1), (1, 2), (-1, 8)], 3));
        assert!(ser(&[(1, 1)], 3).exp().is_err());
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(ser(&[(1, 1)], 3).inverse().unwrap(), ser(&[(1, 1)], 3));
        // geometric series
        assert_eq!(ser(&[(1, 1), (1, 1)], 3).inverse().unwrap(), ser(&[(1, 1), (-1, 1), (1, 1)], 3));
        assert_eq!(ser(&[(2, 1)], 4).inverse().unwrap(), ser(&[(1, 2)], 4));
        assert!(ser(&[(0, 1), (1, 1)], 3).inverse().is_err());
    }
}
