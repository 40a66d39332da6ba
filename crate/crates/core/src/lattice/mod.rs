//! Even positive definite lattices given by integer Gram matrices.

mod enumerate;
mod hnf;
mod lll;
mod named;
mod split;

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Violation};
use crate::exactalg::{det_i64, Matrix};

pub use enumerate::{for_each_short_vector, Cholesky, ShortVectorList};
pub use hnf::{hnf_rows, integer_kernel};
pub use lll::{lll_reduce, Reduction};
pub use named::named_lattice;
pub use split::theta1_split;
pub(crate) use split::expected_count;

/// Integer matrix used for basis transforms; columns are new basis vectors.
pub type IntMatrix = Matrix<i64>;

/// Largest absolute Gram entry accepted; keeps every inner product of short
/// vectors comfortably inside machine words.
const MAX_ENTRY: i64 = 1 << 40;

/// Even positive definite lattice. `gram[i][j] = B(eᵢ, eⱼ)`, so the diagonal
/// holds 2Q(eᵢ).
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GramFile", into = "GramFile")]
pub struct Lattice {
    n: usize,
    gram: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct GramFile {
    gram: Vec<Vec<i64>>,
}

impl TryFrom<GramFile> for Lattice {
    type Error = Error;

    fn try_from(f: GramFile) -> Result<Self> {
        Lattice::new(f.gram)
    }
}

impl From<Lattice> for GramFile {
    fn from(l: Lattice) -> Self {
        GramFile { gram: l.gram_rows() }
    }
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lattice{:?}", self.gram_rows())
    }
}

impl Lattice {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Validation(Violation::Empty));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Validation(Violation::NotSquare));
        }
        for i in 0..n {
            for j in 0..n {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::Validation(Violation::NotSymmetric));
                }
                if rows[i][j].abs() > MAX_ENTRY {
                    return Err(Error::Validation(Violation::EntryTooLarge));
                }
            }
            if rows[i][i] % 2 != 0 {
                return Err(Error::Validation(Violation::OddDiagonal));
            }
        }
        for k in 1..=n {
            let minor: Vec<Vec<i64>> = rows[..k].iter().map(|r| r[..k].to_vec()).collect();
            if det_i64(&minor) <= 0 {
                return Err(Error::Validation(Violation::NotPositiveDefinite));
            }
        }
        Ok(Lattice::from_trusted(n, rows.into_iter().flatten().collect()))
    }

    pub(crate) fn from_trusted(n: usize, gram: Vec<i64>) -> Self {
        debug_assert_eq!(gram.len(), n * n);
        Lattice { n, gram }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Lattice::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("gram serializes")
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.gram[i * self.n + j]
    }

    pub fn gram_flat(&self) -> &[i64] {
        &self.gram
    }

    pub fn gram_rows(&self) -> Vec<Vec<i64>> {
        self.gram.chunks(self.n).map(<[i64]>::to_vec).collect()
    }

    pub fn gram_matrix(&self) -> IntMatrix {
        Matrix::from_fn(self.n, self.n, |i, j| self.entry(i, j))
    }

    pub fn determinant(&self) -> i64 {
        det_i64(&self.gram_rows()) as i64
    }

    /// det(gram) for even rank and det(gram)/2 for odd rank.
    pub fn discriminant(&self) -> i64 {
        let d = self.determinant();
        if self.n.is_multiple_of(2) {
            d
        } else {
            d / 2
        }
    }

    /// B(x, y) = xᵀ·gram·y.
    pub fn inner(&self, x: &[i64], y: &[i64]) -> i64 {
        let mut s = 0;
        for i in 0..self.n {
            if x[i] == 0 {
                continue;
            }
            let row = &self.gram[i * self.n..(i + 1) * self.n];
            let t: i64 = row.iter().zip(y).map(|(a, b)| a * b).sum();
            s += x[i] * t;
        }
        s
    }

    /// Q(x) = B(x, x)/2.
    pub fn norm(&self, x: &[i64]) -> i64 {
        self.inner(x, x) / 2
    }

    /// gram·x.
    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        (0..self.n)
            .map(|i| {
                self.gram[i * self.n..(i + 1) * self.n]
                    .iter()
                    .zip(x)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// Gram matrix of the basis given by the columns of `u`: uᵀ·gram·u.
    pub fn transform(&self, u: &IntMatrix) -> Lattice {
        let m = u.cols();
        let cols: Vec<Vec<i64>> = (0..m).map(|j| (0..self.n).map(|i| *u.get(i, j)).collect()).collect();
        let images: Vec<Vec<i64>> = cols.iter().map(|c| self.apply(c)).collect();
        let mut g = vec![0; m * m];
        for i in 0..m {
            for j in i..m {
                let v: i64 = cols[i].iter().zip(&images[j]).map(|(a, b)| a * b).sum();
                g[i * m + j] = v;
                g[j * m + i] = v;
            }
        }
        Lattice::from_trusted(m, g)
    }

    pub fn direct_sum(&self, other: &Lattice) -> Lattice {
        let n = self.n + other.n;
        let mut g = vec![0; n * n];
        for i in 0..self.n {
            for j in 0..self.n {
                g[i * n + j] = self.entry(i, j);
            }
        }
        for i in 0..other.n {
            for j in 0..other.n {
                g[(i + self.n) * n + j + self.n] = other.entry(i, j);
            }
        }
        Lattice::from_trusted(n, g)
    }

    /// Adjoin a new basis vector v with B(v, eᵢ) = `inner[i]` and B(v, v) = `norm2`.
    pub fn extended(&self, inner: &[i64], norm2: i64) -> Result<Lattice> {
        if inner.len() != self.n {
            return Err(Error::Dimension(format!("{} inner products for rank {}", inner.len(), self.n)));
        }
        let mut rows = self.gram_rows();
        for (r, &b) in rows.iter_mut().zip(inner) {
            r.push(b);
        }
        let mut last = inner.to_vec();
        last.push(norm2);
        rows.push(last);
        Lattice::new(rows)
    }

    /// Scale the form by an integer factor.
    pub fn scaled(&self, c: i64) -> Lattice {
        Lattice::from_trusted(self.n, self.gram.iter().map(|x| x * c).collect())
    }

    /// Complete up-to-sign list of vectors with 0 < Q(x) ≤ bound.
    pub fn short_vectors(&self, bound: i64) -> ShortVectorList {
        enumerate::short_vectors(self, bound)
    }

    /// Representation numbers r₀..r_bound.
    pub fn theta1_coeffs(&self, bound: usize) -> Vec<u64> {
        split::theta1(self, bound)
    }
}

/// Short vectors of a lattice; see [`Lattice::short_vectors`].
pub fn short_vectors(l: &Lattice, bound: i64) -> ShortVectorList {
    l.short_vectors(bound)
}

pub fn theta1_coeffs(l: &Lattice, bound: usize) -> Vec<u64> {
    l.theta1_coeffs(bound)
}

pub fn discriminant(l: &Lattice) -> i64 {
    l.discriminant()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(Lattice::new(vec![vec![2, 1], vec![1, 2]]).is_ok());
        let err = Lattice::new(vec![vec![2, 0], vec![0, -2]]).unwrap_err();
        assert!(matches!(err, Error::Validation(Violation::NotPositiveDefinite)));
        let err = Lattice::new(vec![vec![2, 1], vec![0, 2]]).unwrap_err();
        assert!(matches!(err, Error::Validation(Violation::NotSymmetric)));
        let err = Lattice::new(vec![vec![3]]).unwrap_err();
        assert!(matches!(err, Error::Validation(Violation::OddDiagonal)));
        assert!(Lattice::new(vec![
            vec![2, 0, 1, 1],
            vec![0, 4, 1, 2],
            vec![1, 1, 10, 1],
            vec![1, 2, 1, 20]
        ])
        .is_ok());
    }

    #[test]
    fn json_round_trip() {
        let l = named_lattice("A2").unwrap();
        let text = l.to_json();
        assert_eq!(text, r#"{"gram":[[2,-1],[-1,2]]}"#);
        assert_eq!(Lattice::from_json(&text).unwrap(), l);
        assert!(Lattice::from_json(r#"{"gram":[[1]]}"#).is_err());
    }

    #[test]
    fn discriminants() {
        assert_eq!(named_lattice("A6+A2").unwrap().discriminant(), 21);
        assert_eq!(named_lattice("E8").unwrap().discriminant(), 1);
        assert_eq!(named_lattice("A10").unwrap().discriminant(), 11);
        assert_eq!(named_lattice("D6+D6").unwrap().discriminant(), 16);
        assert_eq!(named_lattice("A2").unwrap().discriminant(), 3);
        assert_eq!(named_lattice("A3").unwrap().discriminant(), 2);
    }
}
