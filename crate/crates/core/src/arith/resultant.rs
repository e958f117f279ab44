use super::{Ring, UniPoly};
use crate::error::{Error, Result};

/// Sylvester matrix of `(f, g)`: `deg g` shifted rows of `f` first, then
/// `deg f` rows of `g`, columns from the highest power of `u` down.
pub fn sylvester_matrix<R: Ring>(f: &UniPoly<R>, g: &UniPoly<R>) -> Result<Vec<Vec<R>>> {
    let (d1, d2) = match (f.degree(), g.degree()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::domain("resultant of a zero polynomial")),
    };
    let n = d1 + d2;
    let mut m = vec![vec![R::zero(); n]; n];
    for i in 0..d2 {
        for k in 0..=d1 {
            m[i][i + d1 - k] = f.coeff(k);
        }
    }
    for j in 0..d1 {
        for k in 0..=d2 {
            m[d2 + j][j + d2 - k] = g.coeff(k);
        }
    }
    Ok(m)
}

/// Fraction-free (Bareiss) determinant; every intermediate division is exact.
pub fn bareiss_det<R: Ring>(mut m: Vec<Vec<R>>) -> R {
    let n = m.len();
    if n == 0 {
        return R::one();
    }
    let mut negate = false;
    let mut prev = R::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return R::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].clone() * m[k][k].clone() - m[i][k].clone() * m[k][j].clone();
                m[i][j] = num.div_exact(&prev).expect("Bareiss division is exact over an integral domain");
            }
            m[i][k] = R::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// `Res(f, g)`, the determinant of [`sylvester_matrix`].
pub fn resultant<R: Ring>(f: &UniPoly<R>, g: &UniPoly<R>) -> Result<R> {
    Ok(bareiss_det(sylvester_matrix(f, g)?))
}

/// Bézout cofactors `(res, s, t)` with `s f + t g = res` identically,
/// read off the adjugate of the Sylvester matrix. No division leaves `R`.
pub fn sylvester_bezout<R: Ring>(f: &UniPoly<R>, g: &UniPoly<R>) -> Result<(R, UniPoly<R>, UniPoly<R>)> {
    let m = sylvester_matrix(f, g)?;
    let n = m.len();
    let (d1, d2) = (f.degree().unwrap_or(0), g.degree().unwrap_or(0));
    let res = bareiss_det(m.clone());
    if n == 0 {
        return Ok((res, UniPoly::zero(), UniPoly::zero()));
    }
    // adj[n-1][k] = (-1)^(k+n-1) * minor(row k, column n-1)
    let cofactor = |k: usize| -> R {
        let minor: Vec<Vec<R>> = m
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != k)
            .map(|(_, row)| row[..n - 1].to_vec())
            .collect();
        let d = bareiss_det(minor);
        if (k + n - 1) % 2 == 1 {
            -d
        } else {
            d
        }
    };
    let mut s = vec![R::zero(); d2.max(1)];
    for i in 0..d2 {
        s[d2 - 1 - i] = cofactor(i);
    }
    let mut t = vec![R::zero(); d1.max(1)];
    for j in 0..d1 {
        t[d1 - 1 - j] = cofactor(d2 + j);
    }
    Ok((res, UniPoly::new(s), UniPoly::new(t)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::multipoly::{vars, MultiPoly};
    use crate::arith::unipoly::qpoly;
    use crate::Rational;

    #[test]
    fn linear_parameters() {
        let v = vars(&["a", "b"]);
        let a = MultiPoly::<Rational>::var(0, &v);
        let b = MultiPoly::<Rational>::var(1, &v);
        let one = MultiPoly::one_in(&v);
        let f = UniPoly::new(vec![-a.clone(), one.clone()]);
        let g = UniPoly::new(vec![-b.clone(), one]);
        // lc(f)^1 * g(a) = a - b
        assert_eq!(resultant(&f, &g).unwrap(), &a - &b);
    }

    #[test]
    fn common_root_and_hand_value() {
        let u = qpoly(&[(0, 1), (1, 1)]);
        assert!(resultant(&u, &u).unwrap().is_zero());
        // the 4x4 Sylvester determinant of u^2+1, u^2-1, expanded by hand, is 4
        let f = qpoly(&[(1, 1), (0, 1), (1, 1)]);
        let g = qpoly(&[(-1, 1), (0, 1), (1, 1)]);
        assert_eq!(resultant(&f, &g).unwrap(), Rational::from_int(4));
        assert!(resultant(&f, &UniPoly::zero()).is_err());
    }

    #[test]
    fn bezout_identity() {
        let f = qpoly(&[(1, 1), (2, 1), (0, 1), (3, 1)]);
        let g = qpoly(&[(-2, 1), (1, 1), (5, 1)]);
        let (res, s, t) = sylvester_bezout(&f, &g).unwrap();
        assert_eq!(&(&s * &f) + &(&t * &g), UniPoly::constant(res.clone()));
        assert_eq!(res, resultant(&f, &g).unwrap());
        assert!(s.degree().unwrap_or(0) < 2 && t.degree().unwrap_or(0) < 3);
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        fn laplace(m: &[Vec<Rational>]) -> Rational {
            if m.is_empty() {
                return Rational::one();
            }
            let mut acc = Rational::zero();
            for c in 0..m.len() {
                let minor: Vec<Vec<Rational>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, x)| x.clone()).collect())
                    .collect();
                let term = &m[0][c] * &laplace(&minor);
                acc = if c % 2 == 0 { acc + term } else { acc - term };
            }
            acc
        }
        let m: Vec<Vec<Rational>> = [[0, 2, 1, 3], [1, 0, 4, 2], [3, 1, 0, 0], [2, 2, 5, 1]]
            .iter()
            .map(|r| r.iter().map(|&x| Rational::from_int(x)).collect())
            .collect();
        assert_eq!(bareiss_det(m.clone()), laplace(&m));
    }
}
