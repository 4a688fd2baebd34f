//! Exact rational helpers: parsing, determinants, elimination and solving.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{OmError, Result};
use crate::sign::Sign;

pub type Rational = BigRational;

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or a bare integer `"p"`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || OmError::Parse(format!("bad rational {text:?}"));
    let (p, q) = match text.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (text.trim(), "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(p, q))
}

/// Always `"p/q"` in lowest terms with a positive denominator.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn sign_of(r: &Rational) -> Sign {
    if r.is_zero() {
        Sign::Zero
    } else if r.is_positive() {
        Sign::Pos
    } else {
        Sign::Neg
    }
}

pub fn sign_of_int(r: &BigInt) -> Sign {
    if r.is_zero() {
        Sign::Zero
    } else if r.is_positive() {
        Sign::Pos
    } else {
        Sign::Neg
    }
}

/// Scales `v` by the positive lcm of its denominators.
pub fn integer_scaled(v: &[Rational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    v.iter().map(|x| x.numer() * (&l / x.denom())).collect()
}

/// Determinant by fraction-free (Bareiss) elimination; `m` is consumed.
pub fn det_int(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
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

/// Sign of the determinant of the square matrix whose columns are `cols`.
pub fn det_sign(cols: &[&[Rational]]) -> Sign {
    let scaled: Vec<Vec<BigInt>> = cols.iter().map(|c| integer_scaled(c)).collect();
    det_sign_int(&scaled.iter().map(|c| c.as_slice()).collect::<Vec<_>>())
}

/// Sign of the determinant of integer columns; 2×2 and 3×3 are expanded directly.
pub fn det_sign_int(cols: &[&[BigInt]]) -> Sign {
    match cols.len() {
        0 => Sign::Pos,
        1 => sign_of_int(&cols[0][0]),
        2 => sign_of_int(&(&cols[0][0] * &cols[1][1] - &cols[1][0] * &cols[0][1])),
        3 => {
            let (a, b, c) = (cols[0], cols[1], cols[2]);
            let d = &a[0] * (&b[1] * &c[2] - &b[2] * &c[1]) - &b[0] * (&a[1] * &c[2] - &a[2] * &c[1])
                + &c[0] * (&a[1] * &b[2] - &a[2] * &b[1]);
            sign_of_int(&d)
        }
        n => {
            let rows: Vec<Vec<BigInt>> = (0..n).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
            sign_of_int(&det_int(rows))
        }
    }
}

/// Reduced row echelon form; returns the pivot columns.
pub fn rref(m: &mut [Vec<Rational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let v = &f * &m[r][j];
                    m[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn matrix_rank(rows: &[Vec<Rational>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Unique solution of the square system `a·x = b`, or `None` when singular.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

/// Basis of `{x : rows·x = 0}`.
pub fn nullspace(rows: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![Rational::zero(); cols];
            v[fc] = Rational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][fc].clone();
            }
            v
        })
        .collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn dot_int(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

/// Serde adapter for `Vec<Vec<Rational>>` as nested `"p/q"` strings.
pub mod serde_matrix {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &[Vec<Rational>], s: S) -> std::result::Result<S::Ok, S::Error> {
        let text: Vec<Vec<String>> = m.iter().map(|r| r.iter().map(format_rational).collect()).collect();
        serde::Serialize::serialize(&text, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<Rational>>, D::Error> {
        let text: Vec<Vec<String>> = Vec::deserialize(d)?;
        text.iter()
            .map(|r| r.iter().map(|x| parse_rational(x).map_err(serde::de::Error::custom)).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_roundtrip() {
        let r = parse_rational("-6/4").unwrap();
        assert_eq!(format_rational(&r), "-3/2");
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1.5").is_err());
    }

    #[test]
    fn bareiss_matches_expansion() {
        let m: Vec<Vec<BigInt>> = [[2, -1, 0, 3], [1, 4, -2, 0], [0, 5, 1, 1], [3, 0, 2, -4]]
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        // cofactor expansion along the first row
        fn det(m: &[Vec<BigInt>]) -> BigInt {
            if m.len() == 1 {
                return m[0][0].clone();
            }
            let mut acc = BigInt::zero();
            for c in 0..m.len() {
                let minor: Vec<Vec<BigInt>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, x)| x.clone()).collect())
                    .collect();
                let term = &m[0][c] * det(&minor);
                acc = if c % 2 == 0 { acc + term } else { acc - term };
            }
            acc
        }
        assert_eq!(det_int(m.clone()), det(&m));
    }

    #[test]
    fn solve_and_nullspace() {
        let a = vec![vec![int(1), int(1)], vec![int(1), int(-1)]];
        assert_eq!(solve(&a, &[int(3), int(1)]).unwrap(), vec![int(2), int(1)]);
        let singular = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert!(solve(&singular, &[int(1), int(1)]).is_none());
        let ns = nullspace(&singular, 2);
        assert_eq!(ns.len(), 1);
        assert!(dot(&singular[0], &ns[0]).is_zero());
    }
}
