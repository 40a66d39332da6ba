//! Hecke operators on the space of functions on a class set: neighbour-count
//! matrices, single-eigenvalue evaluation, the inner product, and the
//! simultaneous eigenspace decomposition over Q.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{factor_int_poly, primitive_integer_vector, IntPolynomial, Matrix};
use crate::genus::{Classifier, GenusData};
use crate::isom::{automorphism_group_with, IsomConfig};
use crate::lattice::IntMatrix;
use crate::neighbour::{
    isotropic_line_orbits, isotropic_subspaces, neighbours_of_subspace, IsotropicLines, IsotropicSubspace,
};
use crate::textual;
use crate::{Integer, Rational, RationalMatrix};

/// A function on the class set, c₁φ⁽¹⁾ + … + c_hφ⁽ʰ⁾.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModularForm {
    #[serde(with = "textual::rational_vec")]
    pub coeffs: Vec<Rational>,
}

impl ModularForm {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        ModularForm { coeffs }
    }

    pub fn from_integers(c: &[i64]) -> Self {
        ModularForm::new(c.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect())
    }

    pub fn from_big(c: &[Integer]) -> Self {
        ModularForm::new(c.iter().map(|x| Rational::from_integer(x.clone())).collect())
    }

    /// The constant function 1.
    pub fn eisenstein(h: usize) -> Self {
        ModularForm::new(vec![Rational::one(); h])
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

fn check_len(g: &GenusData, f: &ModularForm) -> Result<()> {
    if f.len() != g.class_number() {
        return Err(Error::GenusMismatch);
    }
    Ok(())
}

/// ⟨f, g⟩ = Σ fᵢgᵢ / #O(Λᵢ).
pub fn inner_product(g: &GenusData, a: &ModularForm, b: &ModularForm) -> Result<Rational> {
    check_len(g, a)?;
    check_len(g, b)?;
    Ok(a.coeffs
        .iter()
        .zip(&b.coeffs)
        .zip(&g.aut_orders)
        .fold(Rational::zero(), |acc, ((x, y), o)| acc + x * y / Rational::from_integer(o.clone())))
}

/// Matrix of T_{p,k}: `entries[i][j]` counts the p^k-neighbours of Λⱼ
/// isometric to Λᵢ. On forms it acts by the transpose.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeckeMatrix {
    pub p: u64,
    pub k: usize,
    pub entries: Vec<Vec<u64>>,
}

impl HeckeMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn column_sums(&self) -> Vec<u64> {
        let h = self.size();
        (0..h).map(|j| (0..h).map(|i| self.entries[i][j]).sum()).collect()
    }

    /// M[i][j]·#O(Λᵢ) = M[j][i]·#O(Λⱼ) for all i, j.
    pub fn is_weighted_symmetric(&self, aut_orders: &[Integer]) -> bool {
        let h = self.size();
        (0..h).all(|i| {
            (0..h).all(|j| BigInt::from(self.entries[i][j]) * &aut_orders[i] == BigInt::from(self.entries[j][i]) * &aut_orders[j])
        })
    }

    /// The operator on coefficient vectors of forms, Mᵀ.
    pub fn operator(&self) -> RationalMatrix {
        let h = self.size();
        Matrix::from_fn(h, h, |r, c| Rational::from_integer(BigInt::from(self.entries[c][r])))
    }

    pub fn apply(&self, f: &ModularForm) -> ModularForm {
        let h = self.size();
        ModularForm::new(
            (0..h)
                .map(|j| {
                    (0..h).fold(Rational::zero(), |acc, i| {
                        acc + &f.coeffs[i] * Rational::from_integer(BigInt::from(self.entries[i][j]))
                    })
                })
                .collect(),
        )
    }

    pub fn mul(&self, other: &HeckeMatrix) -> Vec<Vec<u128>> {
        let h = self.size();
        (0..h)
            .map(|i| {
                (0..h)
                    .map(|j| (0..h).map(|l| self.entries[i][l] as u128 * other.entries[l][j] as u128).sum())
                    .collect()
            })
            .collect()
    }

    pub fn commutes_with(&self, other: &HeckeMatrix) -> bool {
        self.mul(other) == other.mul(self)
    }

    pub fn char_poly(&self) -> IntPolynomial {
        let cp = self.operator().char_poly().expect("square matrix");
        IntPolynomial::from_rational_exact(&cp).expect("integer matrix has integral characteristic polynomial")
    }
}

#[derive(Clone, Debug, Default)]
pub struct HeckeConfig {
    pub isom: IsomConfig,
    /// For k = 1, classify one neighbour per orbit of O(Λⱼ) on isotropic lines
    /// and weight it by the orbit size.
    pub orbit_mode: bool,
}

fn check_operator(g: &GenusData, p: u64, k: usize) -> Result<()> {
    if g.representatives[0].determinant() % p as i64 == 0 {
        return Err(Error::BadPrime {
            p,
            disc: g.discriminant,
        });
    }
    if k == 0 || k > g.rank / 2 {
        return Err(Error::InvalidArgument(format!("k = {k} out of range for rank {}", g.rank)));
    }
    Ok(())
}

pub fn hecke_matrix(g: &GenusData, p: u64, k: usize) -> Result<HeckeMatrix> {
    hecke_matrix_with(g, p, k, &HeckeConfig::default())
}

pub fn hecke_matrix_with(g: &GenusData, p: u64, k: usize, cfg: &HeckeConfig) -> Result<HeckeMatrix> {
    check_operator(g, p, k)?;
    let h = g.class_number();
    let mut entries = vec![vec![0u64; h]; h];
    for j in 0..h {
        let counts = neighbour_class_counts(g, j, p, k, cfg)?;
        for i in 0..h {
            entries[i][j] = counts[i];
        }
    }
    Ok(HeckeMatrix { p, k, entries })
}

/// For one class Λⱼ, the number of its p^k-neighbours in each class.
pub fn neighbour_class_counts(g: &GenusData, j: usize, p: u64, k: usize, cfg: &HeckeConfig) -> Result<Vec<u64>> {
    check_operator(g, p, k)?;
    let h = g.class_number();
    let l = &g.representatives[j];
    let classifier = Classifier::new(g, cfg.isom);
    let add = |mut acc: Vec<u64>, part: Vec<u64>| {
        for (a, b) in acc.iter_mut().zip(part) {
            *a += b;
        }
        acc
    };
    let tally = |subspace: IsotropicSubspace, weight: u64| -> Result<Vec<u64>> {
        let mut counts = vec![0u64; h];
        for nb in neighbours_of_subspace(l, &subspace) {
            counts[classifier.classify(&nb.lattice)?] += weight;
        }
        Ok(counts)
    };
    if k == 1 && cfg.orbit_mode {
        let aut = automorphism_group_with(l, &cfg.isom)?;
        let gens: Vec<IntMatrix> = aut.generators.iter().map(|s| s.matrix.clone()).collect();
        let orbits = isotropic_line_orbits(l, p, &gens)?;
        return orbits
            .into_par_iter()
            .map(|o| tally(IsotropicSubspace::from_line(p, o.representative), o.size))
            .try_reduce(|| vec![0; h], |a, b| Ok(add(a, b)));
    }
    if k == 1 {
        // partition the lines by pivot position
        return (0..l.rank())
            .into_par_iter()
            .map(|c| -> Result<Vec<u64>> {
                let mut acc = vec![0u64; h];
                for x in IsotropicLines::with_pivots(l, p, c..c + 1)? {
                    acc = add(acc, tally(IsotropicSubspace::from_line(p, x), 1)?);
                }
                Ok(acc)
            })
            .try_reduce(|| vec![0; h], |a, b| Ok(add(a, b)));
    }
    let subspaces: Vec<IsotropicSubspace> = isotropic_subspaces(l, p, k)?.collect();
    subspaces
        .into_par_iter()
        .map(|s| tally(s, 1))
        .try_reduce(|| vec![0; h], |a, b| Ok(add(a, b)))
}

/// The eigenvalue of T_{p,k} on an eigenform from the neighbours of a single
/// class: the support index with the largest automorphism group is used. With
/// `verify`, a second support index is evaluated and must agree.
pub fn hecke_eigenvalue(g: &GenusData, f: &ModularForm, p: u64, k: usize) -> Result<Rational> {
    hecke_eigenvalue_with(g, f, p, k, &HeckeConfig::default(), false)
}

pub fn hecke_eigenvalue_with(
    g: &GenusData,
    f: &ModularForm,
    p: u64,
    k: usize,
    cfg: &HeckeConfig,
    verify: bool,
) -> Result<Rational> {
    check_len(g, f)?;
    let mut support: Vec<usize> = (0..f.len()).filter(|&i| !f.coeffs[i].is_zero()).collect();
    if support.is_empty() {
        return Err(Error::NotEigenvector("zero form".into()));
    }
    support.sort_by(|&a, &b| g.aut_orders[b].cmp(&g.aut_orders[a]).then(a.cmp(&b)));
    let at = |i: usize| -> Result<Rational> {
        let counts = neighbour_class_counts(g, i, p, k, cfg)?;
        let s = counts
            .iter()
            .zip(&f.coeffs)
            .fold(Rational::zero(), |acc, (&c, x)| acc + x * Rational::from_integer(BigInt::from(c)));
        Ok(s / &f.coeffs[i])
    };
    let lambda = at(support[0])?;
    if verify && support.len() > 1 {
        let second = at(support[1])?;
        if second != lambda {
            return Err(Error::NotEigenvector(format!(
                "eigenvalue {lambda} at class {} but {second} at class {}",
                support[0], support[1]
            )));
        }
    }
    Ok(lambda)
}

/// A rational eigenform with its eigenvalues λ_{p,k}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Eigenform {
    #[serde(with = "textual::integer_vec")]
    pub vector: Vec<Integer>,
    pub eigenvalues: Vec<Eigenvalue>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Eigenvalue {
    pub p: u64,
    pub k: usize,
    #[serde(with = "textual::rational")]
    pub value: Rational,
}

impl Eigenform {
    pub fn form(&self) -> ModularForm {
        ModularForm::from_big(&self.vector)
    }

    pub fn lambda(&self, p: u64, k: usize) -> Option<&Rational> {
        self.eigenvalues.iter().find(|e| e.p == p && e.k == k).map(|e| &e.value)
    }

    pub fn is_eisenstein(&self) -> bool {
        self.vector.iter().all(|x| x == &self.vector[0])
    }
}

/// A simultaneous invariant subspace that does not split over Q, described
/// by the characteristic polynomial of each operator on it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualBlock {
    pub dimension: usize,
    pub charpolys: Vec<BlockPolynomial>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockPolynomial {
    pub p: u64,
    pub k: usize,
    /// Irreducible factor and its multiplicity.
    pub factor: IntPolynomial,
    pub multiplicity: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenDecomposition {
    pub eigenforms: Vec<Eigenform>,
    pub residual: Vec<ResidualBlock>,
}

pub fn eigen_decompose(g: &GenusData, primes: &[u64]) -> Result<EigenDecomposition> {
    if primes.is_empty() {
        return Err(Error::InvalidArgument("at least one prime is needed".into()));
    }
    let mats: Vec<HeckeMatrix> = primes.iter().map(|&p| hecke_matrix(g, p, 1)).collect::<Result<_>>()?;
    decompose(&mats)
}

/// Split Q^h into simultaneous invariant subspaces of the given operators.
pub fn decompose(mats: &[HeckeMatrix]) -> Result<EigenDecomposition> {
    let h = mats.first().map_or(0, HeckeMatrix::size);
    let ops: Vec<RationalMatrix> = mats.iter().map(HeckeMatrix::operator).collect();
    // each block is a basis (columns) of an invariant subspace
    let mut blocks: Vec<Vec<Vec<Rational>>> = vec![(0..h)
        .map(|i| (0..h).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect()];
    for op in &ops {
        let mut next = Vec::new();
        for b in blocks {
            if b.len() == 1 {
                next.push(b);
                continue;
            }
            next.extend(split_block(op, &b)?);
        }
        blocks = next;
    }
    let mut eigenforms = Vec::new();
    let mut residual = Vec::new();
    for b in blocks {
        if b.len() == 1 {
            let v = primitive_integer_vector(&b[0]).expect("nonzero basis vector");
            let vr: Vec<Rational> = v.iter().map(|x| Rational::from_integer(x.clone())).collect();
            let eigenvalues = mats
                .iter()
                .zip(&ops)
                .map(|(m, op)| Eigenvalue {
                    p: m.p,
                    k: m.k,
                    value: eigenvalue_of(op, &vr),
                })
                .collect();
            eigenforms.push(Eigenform { vector: v, eigenvalues });
        } else {
            let mut charpolys = Vec::new();
            for (m, op) in mats.iter().zip(&ops) {
                let r = restrict(op, &b);
                let cp = IntPolynomial::from_rational_exact(&r.char_poly()?).expect("integral restriction");
                for (f, e) in factor_int_poly(&cp)?.factors {
                    charpolys.push(BlockPolynomial {
                        p: m.p,
                        k: m.k,
                        factor: f,
                        multiplicity: e,
                    });
                }
            }
            residual.push(ResidualBlock {
                dimension: b.len(),
                charpolys,
            });
        }
    }
    eigenforms.sort_by(|a, b| {
        b.is_eisenstein()
            .cmp(&a.is_eisenstein())
            .then_with(|| a.vector.cmp(&b.vector))
    });
    Ok(EigenDecomposition { eigenforms, residual })
}

fn eigenvalue_of(op: &RationalMatrix, v: &[Rational]) -> Rational {
    let w = op.mul_vec(v);
    let i = v.iter().position(|x| !x.is_zero()).expect("nonzero");
    &w[i] / &v[i]
}

// Matrix of `op` on the span of `basis` (columns), in that basis.
fn restrict(op: &RationalMatrix, basis: &[Vec<Rational>]) -> RationalMatrix {
    let h = op.rows();
    let d = basis.len();
    let images: Vec<Vec<Rational>> = basis.iter().map(|v| op.mul_vec(v)).collect();
    // solve basis·c = image for each image via RREF of [basis | images]
    let aug = Matrix::from_fn(h, d + d, |r, c| {
        if c < d {
            basis[c][r].clone()
        } else {
            images[c - d][r].clone()
        }
    });
    let (red, _) = aug.rref();
    Matrix::from_fn(d, d, |r, c| red.get(r, d + c).clone())
}

fn split_block(op: &RationalMatrix, basis: &[Vec<Rational>]) -> Result<Vec<Vec<Vec<Rational>>>> {
    let r = restrict(op, basis);
    let cp = IntPolynomial::from_rational_exact(&r.char_poly()?).expect("integral restriction");
    let fac = factor_int_poly(&cp)?;
    if fac.factors.len() == 1 {
        return Ok(vec![basis.to_vec()]);
    }
    let d = basis.len();
    let mut out = Vec::new();
    for (f, e) in &fac.factors {
        let fe = f.pow(*e);
        let m = poly_at_matrix(&fe, &r);
        let ker = m.kernel();
        let sub: Vec<Vec<Rational>> = ker
            .iter()
            .map(|c| {
                (0..basis[0].len())
                    .map(|row| (0..d).fold(Rational::zero(), |acc, t| acc + &c[t] * &basis[t][row]))
                    .collect()
            })
            .collect();
        out.push(sub);
    }
    Ok(out)
}

fn poly_at_matrix(f: &IntPolynomial, m: &RationalMatrix) -> RationalMatrix {
    let d = m.rows();
    let mut acc: RationalMatrix = Matrix::zeros(d, d);
    for c in f.coeffs().iter().rev() {
        acc = &acc * m;
        for i in 0..d {
            let v = acc.get(i, i) + Rational::from_integer(c.clone());
            acc.set(i, i, v);
        }
    }
    acc
}

/// Check that `f` is an eigenvector of the matrix and return its eigenvalue.
pub fn matrix_eigenvalue(m: &HeckeMatrix, f: &ModularForm) -> Result<Rational> {
    let image = m.apply(f);
    let i = f
        .coeffs
        .iter()
        .position(|x| !x.is_zero())
        .ok_or_else(|| Error::NotEigenvector("zero form".into()))?;
    let lambda = &image.coeffs[i] / &f.coeffs[i];
    for (a, b) in image.coeffs.iter().zip(&f.coeffs) {
        if a != &(&lambda * b) {
            return Err(Error::NotEigenvector(format!("T_{{{},{}}}", m.p, m.k)));
        }
    }
    Ok(lambda)
}

/// Permute simultaneous rows and columns: result[i][j] = m[perm[i]][perm[j]].
pub fn permuted(m: &[Vec<u64>], perm: &[usize]) -> Vec<Vec<u64>> {
    perm.iter().map(|&i| perm.iter().map(|&j| m[i][j]).collect()).collect()
}

/// A permutation σ with m[σ(i)][σ(j)] = target[i][j], if one exists.
pub fn equal_up_to_permutation(m: &[Vec<u64>], target: &[Vec<u64>]) -> Option<Vec<usize>> {
    let h = m.len();
    if target.len() != h {
        return None;
    }
    let mut perm = Vec::with_capacity(h);
    let mut used = vec![false; h];
    fn rec(m: &[Vec<u64>], t: &[Vec<u64>], perm: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let i = perm.len();
        if i == m.len() {
            return true;
        }
        for c in 0..m.len() {
            if used[c] {
                continue;
            }
            let ok = m[c][c] == t[i][i] && perm.iter().enumerate().all(|(a, &pa)| m[pa][c] == t[a][i] && m[c][pa] == t[i][a]);
            if ok {
                used[c] = true;
                perm.push(c);
                if rec(m, t, perm, used) {
                    return true;
                }
                perm.pop();
                used[c] = false;
            }
        }
        false
    }
    rec(m, target, &mut perm, &mut used).then_some(perm)
}
