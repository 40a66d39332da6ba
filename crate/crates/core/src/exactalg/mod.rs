//! Exact integer and rational arithmetic: matrices, polynomials, factorization,
//! and the Kronecker symbol.

mod factor;
mod kronecker;
mod matrix;
mod poly;

pub use factor::{factor_int_poly, roots_mod_prime, squarefree_decomposition, Factorization};
pub use kronecker::{kronecker_i64, kronecker_symbol};
pub use matrix::{Field, Matrix};
pub use poly::IntPolynomial;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::{Integer, Rational, RationalMatrix};

/// Characteristic polynomial of a square rational matrix, monic, low degree first.
pub fn char_poly(m: &RationalMatrix) -> crate::Result<Vec<Rational>> {
    m.char_poly()
}

/// Exact kernel basis in reduced echelon form.
pub fn rational_kernel(m: &RationalMatrix) -> Vec<Vec<Rational>> {
    m.kernel()
}

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Integer {
    BigInt::from(n)
}

/// Integer matrix to rational matrix.
pub fn to_rational_matrix(rows: &[Vec<i64>]) -> RationalMatrix {
    Matrix::from_fn(rows.len(), rows[0].len(), |i, j| {
        Rational::from_integer(BigInt::from(rows[i][j]))
    })
}

/// Scale a nonzero rational vector to a primitive integer vector whose first
/// nonzero entry is positive.
pub fn primitive_integer_vector(v: &[Rational]) -> Option<Vec<Integer>> {
    use num_integer::Integer as _;
    let first = v.iter().find(|x| !x.is_zero())?;
    let lcm = v
        .iter()
        .fold(BigInt::from(1), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let sign = if first.is_negative() { -1 } else { 1 };
    Some(ints.into_iter().map(|x| x / &g * sign).collect())
}

/// Determinant of a small integer matrix by fraction-free elimination.
pub fn det_i64(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}
