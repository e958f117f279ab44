use super::{Field, UniPoly};
use crate::error::{Error, Result};

/// Extended Euclid: returns `(d, s, t)` with `s f + t g = d`, `d` monic.
///
/// The cofactors are the minimal-degree pair produced by the remainder
/// sequence: `deg s < deg g - deg d` and `deg t < deg f - deg d` whenever both
/// inputs are nonconstant.
pub fn ext_gcd<F: Field>(f: &UniPoly<F>, g: &UniPoly<F>) -> Result<(UniPoly<F>, UniPoly<F>, UniPoly<F>)> {
    if f.is_zero() && g.is_zero() {
        return Err(Error::domain("gcd of two zero polynomials"));
    }
    let (mut r0, mut r1) = (f.clone(), g.clone());
    let (mut s0, mut s1) = (UniPoly::one(), UniPoly::zero());
    let (mut t0, mut t1) = (UniPoly::zero(), UniPoly::one());
    while !r1.is_zero() {
        let (q, r) = r0.divrem(&r1)?;
        let s = &s0 - &(&q * &s1);
        let t = &t0 - &(&q * &t1);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    let lc = r0.leading_coeff().expect("nonzero gcd").inv();
    Ok((r0.scale(&lc), s0.scale(&lc), t0.scale(&lc)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::unipoly::qpoly;

    #[test]
    fn examples() {
        let (d, s, t) = ext_gcd(&qpoly(&[(0, 1), (1, 1)]), &qpoly(&[(1, 1), (1, 1)])).unwrap();
        assert_eq!((d, s, t), (qpoly(&[(1, 1)]), qpoly(&[(-1, 1)]), qpoly(&[(1, 1)])));

        let (d, s, t) = ext_gcd(&qpoly(&[(0, 1), (0, 1), (1, 1)]), &qpoly(&[(0, 1), (1, 1)])).unwrap();
        assert_eq!((d, s, t), (qpoly(&[(0, 1), (1, 1)]), UniPoly::zero(), qpoly(&[(1, 1)])));
    }

    #[test]
    fn coprime_g_pair() {
        // g1, g2 for p = 1 + u, (q, r) = (2, 3), N = 3
        let f = qpoly(&[(1, 1), (1, 2), (-1, 8)]);
        let g = qpoly(&[(1, 1), (1, 3), (-1, 9)]);
        let (d, s, t) = ext_gcd(&f, &g).unwrap();
        assert_eq!(d, UniPoly::one());
        assert_eq!(&(&s * &f) + &(&t * &g), UniPoly::one());
        assert!(s.degree().unwrap_or(0) < 2 && t.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn zero_inputs() {
        assert!(ext_gcd::<crate::Rational>(&UniPoly::zero(), &UniPoly::zero()).is_err());
        let (d, s, t) = ext_gcd(&qpoly(&[(2, 1), (4, 1)]), &UniPoly::zero()).unwrap();
        assert_eq!(d, qpoly(&[(1, 2), (1, 1)]));
        assert_eq!(s, qpoly(&[(1, 4)]));
        assert!(t.is_zero());
    }
}
