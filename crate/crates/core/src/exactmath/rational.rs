//! Small dense linear algebra over the rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Zero};

pub type Rational = BigRational;

/// Dense rational matrix as nested rows.
pub type QMatrix = Vec<Vec<Rational>>;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn identity(n: usize) -> QMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                .collect()
        })
        .collect()
}

fn common_denominator<'a>(xs: impl Iterator<Item = &'a Rational>) -> BigInt {
    xs.fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Product computed over the integers after clearing denominators row- and columnwise.
pub fn mul(a: &QMatrix, b: &QMatrix) -> QMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    let row_den: Vec<BigInt> = a.iter().map(|r| common_denominator(r.iter())).collect();
    let col_den: Vec<BigInt> = (0..cols).map(|j| common_denominator(b.iter().map(|r| &r[j]))).collect();
    let scale = |x: &Rational, d: &BigInt| x.numer() * (d / x.denom());
    let a_int: Vec<Vec<BigInt>> = a
        .iter()
        .zip(&row_den)
        .map(|(r, d)| r.iter().map(|x| scale(x, d)).collect())
        .collect();
    let b_int: Vec<Vec<BigInt>> = (0..inner)
        .map(|k| (0..cols).map(|j| scale(&b[k][j], &col_den[j])).collect())
        .collect();
    a_int
        .iter()
        .zip(&row_den)
        .map(|(row, rd)| {
            debug_assert_eq!(row.len(), inner);
            (0..cols)
                .map(|j| {
                    let mut acc = BigInt::zero();
                    for (k, x) in row.iter().enumerate() {
                        if !x.is_zero() && !b_int[k][j].is_zero() {
                            acc += x * &b_int[k][j];
                        }
                    }
                    if acc.is_zero() {
                        Rational::zero()
                    } else {
                        Rational::new(acc, rd * &col_den[j])
                    }
                })
                .collect()
        })
        .collect()
}

pub fn transpose(a: &QMatrix) -> QMatrix {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Determinant by Gaussian elimination over Q.
pub fn det(a: &QMatrix) -> Rational {
    let n = a.len();
    let mut m = a.clone();
    let mut d = Rational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return Rational::zero();
        };
        if p != k {
            m.swap(p, k);
            d = -d;
        }
        let pivot = m[k][k].clone();
        d *= &pivot;
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let f = &m[i][k] / &pivot;
            for j in k..n {
                let t = &f * &m[k][j];
                m[i][j] -= t;
            }
        }
    }
    d
}

/// Inverse by Gauss-Jordan; `None` when singular.
pub fn inverse(a: &QMatrix) -> Option<QMatrix> {
    let n = a.len();
    let mut m = a.clone();
    let mut inv = identity(n);
    for k in 0..n {
        let p = (k..n).find(|&i| !m[i][k].is_zero())?;
        m.swap(p, k);
        inv.swap(p, k);
        let pivot = m[k][k].clone();
        for j in 0..n {
            m[k][j] /= &pivot;
            inv[k][j] /= &pivot;
        }
        for i in 0..n {
            if i == k || m[i][k].is_zero() {
                continue;
            }
            let f = m[i][k].clone();
            for j in 0..n {
                let t = &f * &m[k][j];
                m[i][j] -= t;
                let t = &f * &inv[k][j];
                inv[i][j] -= t;
            }
        }
    }
    Some(inv)
}

/// Reduced row echelon form; returns the transformation `L` with `L * a = rref`,
/// the rref itself and its pivot columns.
pub fn rref_with_transform(a: &QMatrix) -> (QMatrix, QMatrix, Vec<usize>) {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m = a.clone();
    let mut l = identity(rows);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(p, r);
        l.swap(p, r);
        let pivot = m[r][c].clone();
        for j in 0..cols {
            m[r][j] /= &pivot;
        }
        for j in 0..rows {
            l[r][j] /= &pivot;
        }
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in 0..cols {
                let t = &f * &m[r][j];
                m[i][j] -= t;
            }
            for j in 0..rows {
                let t = &f * &l[r][j];
                l[i][j] -= t;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (l, m, pivots)
}

pub fn rank(a: &QMatrix) -> usize {
    rref_with_transform(a).2.len()
}
