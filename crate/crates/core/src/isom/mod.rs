//! Automorphism groups, isometry testing, and isometry-invariant fingerprints.

mod fingerprint;
mod search;

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::Result;
use crate::exactalg::det_i64;
use crate::lattice::{lll_reduce, IntMatrix, Lattice};
use crate::Integer;

pub use fingerprint::{fingerprint, minimal_vector_components, Fingerprint};
use search::{Pool, Search};

/// Limits for the backtracking searches.
#[derive(Clone, Copy, Debug)]
pub struct IsomConfig {
    pub node_cap: u64,
}

impl Default for IsomConfig {
    fn default() -> Self {
        IsomConfig {
            node_cap: 50_000_000,
        }
    }
}

/// An integer matrix U with Uᵀ·gram₁·U = gram₂; its columns are the images
/// of the second lattice's basis written in the first lattice's basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isometry {
    pub matrix: IntMatrix,
}

impl Isometry {
    pub fn identity(n: usize) -> Self {
        Isometry {
            matrix: IntMatrix::identity(n),
        }
    }

    pub fn is_witness(&self, from: &Lattice, to: &Lattice) -> bool {
        self.matrix.rows() == from.rank()
            && self.matrix.cols() == to.rank()
            && &from.transform(&self.matrix) == to
    }

    pub fn determinant(&self) -> i64 {
        det_i64(&self.matrix.to_rows()) as i64
    }

    /// Image of a coordinate vector.
    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        self.matrix.mul_vec(v)
    }

    /// The inverse isometry (a witness in the opposite direction).
    pub fn inverse(&self, from: &Lattice) -> Isometry {
        // U⁻¹ = gram₂⁻¹·Uᵀ·gram₁ computed without division: solve through the
        // adjugate-free identity Uᵀ·gram₁·U = gram₂ ⇒ U⁻¹ = gram₂⁻¹ Uᵀ gram₁.
        let n = self.matrix.rows();
        let to = from.transform(&self.matrix);
        let ut_g = &self.matrix.transpose() * &from.gram_matrix();
        let g2 = to.gram_rows();
        // Solve gram₂·X = Uᵀ·gram₁ column by column with exact rationals.
        let cols: Vec<Vec<i64>> = (0..n)
            .map(|c| {
                let rhs: Vec<i64> = (0..n).map(|r| *ut_g.get(r, c)).collect();
                solve_exact(&g2, &rhs)
            })
            .collect();
        Isometry {
            matrix: IntMatrix::from_fn(n, n, |r, c| cols[c][r]),
        }
    }

    pub fn compose(&self, then: &Isometry) -> Isometry {
        Isometry {
            matrix: &self.matrix * &then.matrix,
        }
    }
}

fn solve_exact(a: &[Vec<i64>], b: &[i64]) -> Vec<i64> {
    use crate::Rational;
    let n = a.len();
    let m = crate::exactalg::Matrix::from_fn(n, n + 1, |i, j| {
        Rational::from_integer(BigInt::from(if j < n { a[i][j] } else { b[i] }))
    });
    let (r, _) = m.rref();
    (0..n)
        .map(|i| {
            let v = r.get(i, n);
            assert!(v.is_integer(), "isometry inverse is integral");
            i64::try_from(v.to_integer()).expect("small entries")
        })
        .collect()
}

/// The finite orthogonal group O(Λ).
#[derive(Clone, Debug)]
pub struct AutGroup {
    pub generators: Vec<Isometry>,
    pub order: Integer,
    pub contains_det_minus_one: bool,
}

pub fn automorphism_group(l: &Lattice) -> Result<AutGroup> {
    automorphism_group_with(l, &IsomConfig::default())
}

/// O(Λ) by a stabilizer chain along the basis: at each level the orbit of the
/// basis vector under the stabilizer of the earlier ones is completed by
/// backtracking searches, and the order is the product of the orbit lengths.
pub fn automorphism_group_with(l: &Lattice, cfg: &IsomConfig) -> Result<AutGroup> {
    let red = lll_reduce(l);
    let r = &red.lattice;
    let n = r.rank();
    let order_probe = search::basis_order(r);
    let norms: Vec<i64> = order_probe[..n - 1]
        .iter()
        .map(|&i| r.entry(i, i) / 2)
        .collect();
    let pool = Pool::new(r, &norms);
    let mut search = Search::new(r, r, &pool, cfg.node_cap);
    let unit: Vec<Vec<i64>> = order_probe
        .iter()
        .map(|&k| (0..n).map(|j| i64::from(j == k)).collect())
        .collect();
    let mut gens: Vec<(usize, IntMatrix)> = Vec::new();
    let mut order = BigInt::one();
    for level in (0..n).rev() {
        let prefix = &unit[..level];
        let candidates: Vec<Vec<i64>> = if level + 1 < n {
            search
                .initial_list(level, prefix)
                .into_iter()
                .map(|i| pool.get(i as usize).to_vec())
                .collect()
        } else {
            search.last_candidates(prefix)
        };
        let b = &unit[level];
        let mut orbit = orbit_of(b, gens.iter().map(|(_, g)| g));
        let mut excluded: HashSet<Vec<i64>> = HashSet::new();
        for v in candidates {
            if orbit.contains(&v) || excluded.contains(&v) {
                continue;
            }
            let mut fixed = prefix.to_vec();
            fixed.push(v.clone());
            let mut found: Option<IntMatrix> = None;
            search.run(&fixed, &mut |u| {
                found = Some(u.clone());
                true
            })?;
            match found {
                Some(u) => {
                    gens.push((level, u));
                    orbit = orbit_of(b, gens.iter().map(|(_, g)| g));
                }
                None => {
                    excluded.extend(orbit_of(&v, gens.iter().map(|(_, g)| g)));
                }
            }
        }
        order *= BigInt::from(orbit.len());
    }
    let generators: Vec<Isometry> = gens
        .into_iter()
        .map(|(_, a)| Isometry {
            matrix: &(&red.transform * &a) * &red.inverse,
        })
        .collect();
    let contains_det_minus_one = generators.iter().any(|g| g.determinant() == -1);
    Ok(AutGroup {
        generators,
        order,
        contains_det_minus_one,
    })
}

/// Orbit of a coordinate vector under the group generated by `gens`.
pub fn orbit_of<'a>(v: &[i64], gens: impl Iterator<Item = &'a IntMatrix> + Clone) -> HashSet<Vec<i64>> {
    let gens: Vec<&IntMatrix> = gens.collect();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    seen.insert(v.to_vec());
    let mut stack = vec![v.to_vec()];
    while let Some(x) = stack.pop() {
        for g in &gens {
            let y = g.mul_vec(&x);
            if !seen.contains(&y) {
                seen.insert(y.clone());
                stack.push(y);
            }
        }
    }
    seen
}

pub fn is_isometric(l1: &Lattice, l2: &Lattice) -> Result<Option<Isometry>> {
    is_isometric_with(l1, l2, &IsomConfig::default())
}

/// Search for U with Uᵀ·gram₁·U = gram₂; `None` is a definitive answer.
pub fn is_isometric_with(l1: &Lattice, l2: &Lattice, cfg: &IsomConfig) -> Result<Option<Isometry>> {
    if l1.rank() != l2.rank() || l1.determinant() != l2.determinant() {
        return Ok(None);
    }
    if minimal_vector_components(l1) != minimal_vector_components(l2) {
        return Ok(None);
    }
    let r1 = lll_reduce(l1);
    let r2 = lll_reduce(l2);
    let n = l1.rank();
    let order = search::basis_order(&r2.lattice);
    let norms: Vec<i64> = order[..n - 1]
        .iter()
        .map(|&i| r2.lattice.entry(i, i) / 2)
        .collect();
    let pool = Pool::new(&r1.lattice, &norms);
    let mut search = Search::new(&r1.lattice, &r2.lattice, &pool, cfg.node_cap);
    let mut found: Option<IntMatrix> = None;
    search.run(&[], &mut |u| {
        found = Some(u.clone());
        true
    })?;
    Ok(found.map(|w| {
        let u = &(&r1.transform * &w) * &r2.inverse;
        let iso = Isometry { matrix: u };
        debug_assert!(iso.is_witness(l1, l2));
        iso
    }))
}

#[cfg(test)]
mod tests;

