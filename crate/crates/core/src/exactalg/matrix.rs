use std::fmt::Debug;
use std::ops::{Mul, Neg};

use num_traits::{Num, One, Zero};

use crate::error::{Error, Result};

/// Scalars with exact field arithmetic.
pub trait Field: Clone + Debug + PartialEq + Num + Neg<Output = Self> {}

impl<T> Field for T where T: Clone + Debug + PartialEq + Num + Neg<Output = T> {}

/// Dense row-major matrix over a scalar type.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone + Zero> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::Dimension("matrix must be non-empty".into()));
        }
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<U: Clone + Zero>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j]).clone()
        })
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }
}

impl<T: Clone + Num> Matrix<T> {
    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }
}

impl<T: Clone + Num> Mul for &Matrix<T> {
    type Output = Matrix<T>;

    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out: Matrix<T> = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let idx = i * rhs.cols + j;
                    out.data[idx] = out.data[idx].clone() + a.clone() * rhs.get(k, j).clone();
                }
            }
        }
        out
    }
}

impl<T: Field> Matrix<T> {
    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Matrix<T>, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(p, r);
            let inv = T::one() / m.get(r, c).clone();
            for j in c..m.cols {
                let v = m.get(r, j).clone() * inv.clone();
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = m.get(i, j).clone() - f.clone() * m.get(r, j).clone();
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel, returned in reduced echelon form.
    pub fn kernel(&self) -> Vec<Vec<T>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        if free.is_empty() {
            return Vec::new();
        }
        let basis: Vec<Vec<T>> = free
            .iter()
            .map(|&f| {
                let mut v = vec![T::zero(); self.cols];
                v[f] = T::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(i, f).clone();
                }
                v
            })
            .collect();
        let (echelon, piv) = Matrix::from_rows(basis)
            .expect("kernel basis is non-empty")
            .rref();
        (0..piv.len()).map(|i| echelon.row(i).to_vec()).collect()
    }

    pub fn determinant(&self) -> Result<T> {
        if !self.is_square() {
            return Err(Error::Dimension("determinant of non-square matrix".into()));
        }
        let mut m = self.clone();
        let n = m.rows;
        let mut det = T::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Ok(T::zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det = det * piv.clone();
            for i in c + 1..n {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone() / piv.clone();
                for j in c..n {
                    let v = m.get(i, j).clone() - f.clone() * m.get(c, j).clone();
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    /// Monic characteristic polynomial det(T·I − M), low degree first.
    ///
    /// Computed through a Hessenberg reduction.
    pub fn char_poly(&self) -> Result<Vec<T>> {
        if !self.is_square() {
            return Err(Error::Dimension(
                "characteristic polynomial of non-square matrix".into(),
            ));
        }
        let n = self.rows;
        let mut h = self.clone();
        for m in 1..n.saturating_sub(1) {
            let Some(i) = (m + 1..=n).find(|&i| !h.get(i - 1, m - 1).is_zero()) else {
                continue;
            };
            let i = i - 1;
            if i > m {
                h.swap_rows(i, m);
                h.swap_cols(i, m);
            }
            let t = h.get(m, m - 1).clone();
            if t.is_zero() {
                continue;
            }
            for i in m + 1..n {
                let u = h.get(i, m - 1).clone() / t.clone();
                if u.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let v = h.get(i, j).clone() - u.clone() * h.get(m, j).clone();
                    h.set(i, j, v);
                }
                for j in 0..n {
                    let v = h.get(j, m).clone() + u.clone() * h.get(j, i).clone();
                    h.set(j, m, v);
                }
            }
        }
        // p[k] is the characteristic polynomial of the leading k×k block.
        let mut p: Vec<Vec<T>> = vec![vec![T::one()]];
        for m in 1..=n {
            let mut next = shift(&p[m - 1]);
            let hmm = h.get(m - 1, m - 1).clone();
            sub_scaled(&mut next, &p[m - 1], &hmm);
            let mut t = T::one();
            for i in 1..m {
                t = t * h.get(m - i, m - i - 1).clone();
                let coef = t.clone() * h.get(m - i - 1, m - 1).clone();
                sub_scaled(&mut next, &p[m - i - 1], &coef);
            }
            p.push(next);
        }
        Ok(p.pop().expect("non-empty"))
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }
}

impl<T> Matrix<T> {
    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

fn shift<T: Clone + Zero>(p: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(p.len() + 1);
    out.push(T::zero());
    out.extend_from_slice(p);
    out
}

fn sub_scaled<T: Clone + Num>(acc: &mut [T], p: &[T], c: &T) {
    if c.is_zero() {
        return;
    }
    for (a, b) in acc.iter_mut().zip(p) {
        *a = a.clone() - c.clone() * b.clone();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Rational, RationalMatrix};
    use num_bigint::BigInt;

    fn q(v: i64) -> Rational {
        Rational::from_integer(BigInt::from(v))
    }

    fn mat(rows: &[&[i64]]) -> RationalMatrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect())
            .unwrap()
    }

    fn poly(c: &[i64]) -> Vec<Rational> {
        c.iter().map(|&v| q(v)).collect()
    }

    #[test]
    fn char_poly_examples() {
        assert_eq!(
            mat(&[&[1, 0], &[0, 1]]).char_poly().unwrap(),
            poly(&[1, -2, 1])
        );
        let m = mat(&[&[20025, 18225], &[12870, 14670]]);
        // (T − 32895)(T − 1800)
        assert_eq!(
            m.char_poly().unwrap(),
            poly(&[32895 * 1800, -(32895 + 1800), 1])
        );
        let z = RationalMatrix::zeros(3, 3);
        assert_eq!(z.char_poly().unwrap(), poly(&[0, 0, 0, 1]));
        assert!(mat(&[&[1, 2, 3]]).char_poly().is_err());
    }

    #[test]
    fn char_poly_matches_determinant_expansion() {
        // Oracle: det(t·I − M) at integer points, interpolated implicitly by evaluation.
        let m = mat(&[&[4, 1, 1, 2], &[2, 9, 0, 3], &[2, 0, 9, 3], &[8, 6, 6, 8]]);
        let cp = m.char_poly().unwrap();
        for t in -5..6 {
            let shifted = Matrix::from_fn(4, 4, |i, j| {
                let d = if i == j { q(t) } else { q(0) };
                d - m.get(i, j).clone()
            });
            let det = shifted.determinant().unwrap();
            let val = cp
                .iter()
                .rev()
                .fold(q(0), |acc, c| acc * q(t) + c.clone());
            assert_eq!(det, val);
        }
    }

    #[test]
    fn kernel_examples() {
        assert!(mat(&[&[1, 0], &[0, 1]]).kernel().is_empty());
        assert_eq!(mat(&[&[1, 1]]).kernel(), vec![poly(&[1, -1])]);
        let k = mat(&[&[1, 2], &[2, 4]]).kernel();
        assert_eq!(k.len(), 1);
        // proportional to (−2, 1)
        assert_eq!(k[0][0].clone() * q(1), -(k[0][1].clone() * q(2)));
    }
}
