//! Siegel theta series of genus g ≤ 3, the weighted theta map on functions
//! on a class set, truncated kernels and depth estimates.
//!
//! The coefficient of θ⁽ᵍ⁾(L) at a semi-integral form T is the number of
//! A ∈ Z^{n×g} with Aᵀ·gram·A = 2T. Coefficients are listed for forms of
//! trace at most the bound.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{primitive_integer_vector, Matrix};
use crate::genus::GenusData;
use crate::hecke::{inner_product, ModularForm};
use crate::isom::automorphism_group;
use crate::lattice::{for_each_short_vector, lll_reduce, IntMatrix, Lattice};
use crate::textual;
use crate::{Integer, Rational};

pub const DEFAULT_WINDOW: usize = 8;

/// A positive semidefinite g×g form T with integral diagonal and
/// half-integral off-diagonal entries.
///
/// Entries: `[a]` for g = 1; `[a, b, c]` for [[a, b/2], [b/2, c]]; for g = 3
/// the diagonal `a₁₁, a₂₂, a₃₃` followed by `b₁₂, b₁₃, b₂₃` with bᵢⱼ = 2Tᵢⱼ.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SemiIntegralForm(pub Vec<i64>);

impl SemiIntegralForm {
    pub fn genus(&self) -> usize {
        match self.0.len() {
            0 => 0,
            1 => 1,
            3 => 2,
            _ => 3,
        }
    }

    /// The integer matrix 2T.
    pub fn doubled(&self) -> Vec<Vec<i64>> {
        let e = &self.0;
        match self.genus() {
            0 => vec![],
            1 => vec![vec![2 * e[0]]],
            2 => vec![vec![2 * e[0], e[1]], vec![e[1], 2 * e[2]]],
            _ => vec![
                vec![2 * e[0], e[3], e[4]],
                vec![e[3], 2 * e[1], e[5]],
                vec![e[4], e[5], 2 * e[2]],
            ],
        }
    }

    /// The form with 2T = `m`.
    pub fn from_doubled(m: &[Vec<i64>]) -> Result<Self> {
        let g = m.len();
        if g > 3 || m.iter().any(|r| r.len() != g) {
            return Err(Error::Dimension(format!("semi-integral form of size {g}")));
        }
        for i in 0..g {
            if m[i][i] % 2 != 0 {
                return Err(Error::InvalidArgument("odd diagonal in 2T".into()));
            }
            for j in 0..g {
                if m[i][j] != m[j][i] {
                    return Err(Error::InvalidArgument("2T is not symmetric".into()));
                }
            }
        }
        let e = match g {
            0 => vec![],
            1 => vec![m[0][0] / 2],
            2 => vec![m[0][0] / 2, m[0][1], m[1][1] / 2],
            _ => vec![m[0][0] / 2, m[1][1] / 2, m[2][2] / 2, m[0][1], m[0][2], m[1][2]],
        };
        Ok(SemiIntegralForm(e))
    }

    pub fn trace(&self) -> i64 {
        let e = &self.0;
        match self.genus() {
            0 => 0,
            1 => e[0],
            2 => e[0] + e[2],
            _ => e[0] + e[1] + e[2],
        }
    }

    /// The block form diag(T, 0) of genus g + 1.
    pub fn with_zero(&self) -> SemiIntegralForm {
        let g = self.genus();
        let mut m = vec![vec![0i64; g + 1]; g + 1];
        for (i, row) in self.doubled().into_iter().enumerate() {
            m[i][..g].copy_from_slice(&row);
        }
        SemiIntegralForm::from_doubled(&m).expect("valid form")
    }

    pub fn is_reduced(&self) -> bool {
        matches!(self.reduce(), Ok(r) if &r == self)
    }

    /// Reduced representative: Gauss-reduced 0 ≤ b ≤ a ≤ c for g = 2, and for
    /// g = 3 a form with a₁₁ ≤ a₂₂ ≤ a₃₃, |bᵢⱼ| ≤ aᵢᵢ and normalized signs.
    /// The ternary representative is not unique within an equivalence class;
    /// coefficients are exact at whichever forms are listed.
    pub fn reduce(&self) -> Result<SemiIntegralForm> {
        match self.genus() {
            0 | 1 => {
                if self.0.first().is_some_and(|&a| a < 0) {
                    return Err(Error::InvalidArgument("negative form".into()));
                }
                Ok(self.clone())
            }
            2 => {
                let (a, b, c) = reduce_binary(self.0[0], self.0[1], self.0[2])?;
                Ok(SemiIntegralForm(vec![a, b, c]))
            }
            _ => reduce_ternary(self),
        }
    }
}

/// Gauss reduction of [[a, b/2], [b/2, c]] to 0 ≤ b ≤ a ≤ c.
pub fn reduce_binary(a: i64, b: i64, c: i64) -> Result<(i64, i64, i64)> {
    if a < 0 || c < 0 || 4 * a * c < b * b {
        return Err(Error::InvalidArgument(format!("({a}, {b}, {c}) is not positive semidefinite")));
    }
    let (mut a, mut b, mut c) = (a, b, c);
    loop {
        if a > c {
            std::mem::swap(&mut a, &mut c);
        }
        if a == 0 {
            break;
        }
        if b.abs() > a {
            let k = (b + a).div_euclid(2 * a);
            c = c - b * k + a * k * k;
            b -= 2 * a * k;
            continue;
        }
        break;
    }
    Ok((a, b.abs(), c))
}

fn reduce_ternary(t: &SemiIntegralForm) -> Result<SemiIntegralForm> {
    let mut m = t.doubled();
    if !is_psd3(&m) {
        return Err(Error::InvalidArgument(format!("{:?} is not positive semidefinite", t.0)));
    }
    loop {
        // sort the diagonal
        let mut perm = [0usize, 1, 2];
        perm.sort_by_key(|&i| m[i][i]);
        m = (0..3).map(|i| (0..3).map(|j| m[perm[i]][perm[j]]).collect()).collect();
        let mut changed = false;
        for i in 0..3 {
            for j in 0..3 {
                if i == j || m[i][i] == 0 {
                    continue;
                }
                // x_j ← x_j − k·x_i with |2B(x_i,x_j)| reduced below 2Q(x_i)
                let (aii, bij) = (m[i][i] / 2, m[i][j]);
                if j > i && bij.abs() > aii {
                    let k = (bij + aii).div_euclid(2 * aii);
                    for r in 0..3 {
                        if r != j {
                            let v = m[r][j] - k * m[r][i];
                            m[r][j] = v;
                            m[j][r] = v;
                        }
                    }
                    m[j][j] = m[j][j] - 2 * k * bij + 2 * k * k * aii;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let flip = |m: &mut Vec<Vec<i64>>, k: usize| {
        for r in 0..3 {
            if r != k {
                m[r][k] = -m[r][k];
                m[k][r] = -m[k][r];
            }
        }
    };
    if m[0][1] < 0 {
        flip(&mut m, 1);
    }
    if m[0][2] < 0 {
        flip(&mut m, 2);
    }
    if m[1][2] < 0 {
        if m[0][1] == 0 {
            flip(&mut m, 1);
        } else if m[0][2] == 0 {
            flip(&mut m, 2);
        }
    }
    SemiIntegralForm::from_doubled(&m)
}

fn is_psd3(m: &[Vec<i64>]) -> bool {
    let d = |r: &[usize]| -> i128 {
        let s: Vec<Vec<i64>> = r.iter().map(|&i| r.iter().map(|&j| m[i][j]).collect()).collect();
        crate::exactalg::det_i64(&s)
    };
    // all principal minors nonnegative
    [vec![0], vec![1], vec![2], vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 1, 2]]
        .iter()
        .all(|r| d(r) >= 0)
}

/// Truncated Fourier expansion indexed by reduced forms of trace ≤ bound.
/// Forms that are absent have coefficient zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaSeries {
    pub g: usize,
    pub bound: usize,
    pub coeffs: BTreeMap<SemiIntegralForm, Rational>,
}

#[derive(Serialize, Deserialize)]
struct Entry {
    form: Vec<i64>,
    #[serde(with = "textual::rational")]
    value: Rational,
}

#[derive(Serialize, Deserialize)]
struct SeriesText {
    g: usize,
    bound: usize,
    coefficients: Vec<Entry>,
}

impl ThetaSeries {
    fn empty(g: usize, bound: usize) -> Self {
        ThetaSeries {
            g,
            bound,
            coeffs: BTreeMap::new(),
        }
    }

    /// Coefficient at any form of this genus and trace within the bound.
    pub fn coefficient(&self, t: &SemiIntegralForm) -> Result<Rational> {
        if t.genus() != self.g {
            return Err(Error::Dimension(format!("form of genus {} for series of genus {}", t.genus(), self.g)));
        }
        let r = t.reduce()?;
        if r.trace() > self.bound as i64 {
            return Err(Error::InvalidArgument(format!("trace {} beyond bound {}", r.trace(), self.bound)));
        }
        Ok(self.coeffs.get(&r).cloned().unwrap_or_else(Rational::zero))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(Zero::is_zero)
    }

    /// a·self + b·other.
    pub fn combine(&self, a: &Rational, other: &ThetaSeries, b: &Rational) -> Result<ThetaSeries> {
        if self.g != other.g || self.bound != other.bound {
            return Err(Error::Dimension("theta series of different shape".into()));
        }
        let mut out = ThetaSeries::empty(self.g, self.bound);
        for (t, x) in &self.coeffs {
            *out.coeffs.entry(t.clone()).or_insert_with(Rational::zero) += a * x;
        }
        for (t, x) in &other.coeffs {
            *out.coeffs.entry(t.clone()).or_insert_with(Rational::zero) += b * x;
        }
        out.coeffs.retain(|_, v| !v.is_zero());
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        let text = SeriesText {
            g: self.g,
            bound: self.bound,
            coefficients: self
                .coeffs
                .iter()
                .map(|(t, v)| Entry {
                    form: t.0.clone(),
                    value: v.clone(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&text).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let text: SeriesText = serde_json::from_str(s)?;
        Ok(ThetaSeries {
            g: text.g,
            bound: text.bound,
            coeffs: text
                .coefficients
                .into_iter()
                .map(|e| (SemiIntegralForm(e.form), e.value))
                .collect(),
        })
    }
}

/// Vectors of each norm 1..=max, both signs, stored flat.
struct VectorTable {
    n: usize,
    by_norm: Vec<Vec<i64>>,
}

impl VectorTable {
    fn new(l: &Lattice, max: i64) -> Self {
        let n = l.rank();
        let mut by_norm = vec![Vec::new(); max.max(0) as usize + 1];
        if max > 0 {
            for_each_short_vector(l, max, |x, q| {
                let bucket = &mut by_norm[q as usize];
                bucket.extend_from_slice(x);
                bucket.extend(x.iter().map(|c| -c));
            });
        }
        VectorTable { n, by_norm }
    }

    fn norm(&self, q: i64) -> impl Iterator<Item = &[i64]> {
        let v: &[i64] = self.by_norm.get(q as usize).map_or(&[], |v| v.as_slice());
        v.chunks_exact(self.n)
    }
}

/// Orbit representatives with orbit sizes of the vectors of norm q.
fn orbit_reps(table: &VectorTable, q: i64, gens: &[IntMatrix]) -> Vec<(Vec<i64>, u64)> {
    let vecs: Vec<&[i64]> = table.norm(q).collect();
    let index: HashMap<&[i64], usize> = vecs.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let mut seen = vec![false; vecs.len()];
    let mut reps = Vec::new();
    for start in 0..vecs.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut size = 0u64;
        while let Some(i) = stack.pop() {
            size += 1;
            for g in gens {
                let y = g.mul_vec(vecs[i]);
                let j = index[y.as_slice()];
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        reps.push((vecs[start].to_vec(), size));
    }
    reps
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// θ⁽ᵍ⁾(L) for g ∈ {0, 1, 2, 3}, truncated at trace ≤ bound.
pub fn siegel_theta(l: &Lattice, g: usize, bound: usize) -> Result<ThetaSeries> {
    let red = lll_reduce(l).lattice;
    let gens = if g >= 2 {
        automorphism_group(&red)?
            .generators
            .into_iter()
            .map(|s| s.matrix)
            .collect()
    } else {
        Vec::new()
    };
    theta_reduced(&red, &gens, g, bound)
}

fn theta_reduced(l: &Lattice, gens: &[IntMatrix], g: usize, bound: usize) -> Result<ThetaSeries> {
    let mut out = ThetaSeries::empty(g, bound);
    let int = |x: u64| Rational::from_integer(BigInt::from(x));
    match g {
        0 => {
            out.coeffs.insert(SemiIntegralForm(vec![]), Rational::one());
        }
        1 => {
            for (m, r) in l.theta1_coeffs(bound).into_iter().enumerate() {
                if r != 0 {
                    out.coeffs.insert(SemiIntegralForm(vec![m as i64]), int(r));
                }
            }
        }
        2 => {
            for (t, v) in binary_counts(l, gens, bound as i64) {
                out.coeffs.insert(SemiIntegralForm(t.to_vec()), int(v));
            }
        }
        3 => {
            let b = bound as i64;
            for ([a, bb, c], v) in binary_counts(l, gens, b) {
                out.coeffs.insert(SemiIntegralForm(vec![0, a, c, 0, 0, bb]), int(v));
            }
            let table = VectorTable::new(l, b - 2);
            let mut totals: BTreeMap<[i64; 6], u64> = BTreeMap::new();
            for a1 in 1..=b / 3 {
                let reps = orbit_reps(&table, a1, gens);
                let parts: Vec<BTreeMap<[i64; 6], u64>> = reps
                    .par_iter()
                    .map(|(x, w)| {
                        let gx = l.apply(x);
                        // candidates for the second and third columns
                        let mut cand: Vec<(&[i64], Vec<i64>, i64, i64)> = Vec::new();
                        for q in a1..=b - 2 * a1 {
                            for y in table.norm(q) {
                                let s = dot(&gx, y);
                                if (0..=a1).contains(&s) {
                                    cand.push((y, l.apply(y), q, s));
                                }
                            }
                        }
                        let mut local: BTreeMap<[i64; 6], u64> = BTreeMap::new();
                        for (_, gy, a2, b12) in &cand {
                            for &(z, _, a3, b13) in &cand {
                                if a3 < *a2 || a1 + a2 + a3 > b {
                                    continue;
                                }
                                let b23 = dot(gy, z);
                                if b23.abs() > *a2 || (b23 < 0 && (*b12 == 0 || b13 == 0)) {
                                    continue;
                                }
                                *local.entry([a1, *a2, a3, *b12, b13, b23]).or_insert(0) += w;
                            }
                        }
                        local
                    })
                    .collect();
                for part in parts {
                    for (k, v) in part {
                        *totals.entry(k).or_insert(0) += v;
                    }
                }
            }
            for (k, v) in totals {
                out.coeffs.insert(SemiIntegralForm(k.to_vec()), int(v));
            }
        }
        _ => return Err(Error::InvalidArgument(format!("genus {g} theta series not supported"))),
    }
    Ok(out)
}

/// Counts of pairs (x, y) at reduced binary forms (a, b, c) of trace ≤ bound,
/// with a = 0 read off the genus-one coefficients.
fn binary_counts(l: &Lattice, gens: &[IntMatrix], bound: i64) -> BTreeMap<[i64; 3], u64> {
    let mut totals: BTreeMap<[i64; 3], u64> = BTreeMap::new();
    if bound < 0 {
        return totals;
    }
    for (c, r) in l.theta1_coeffs(bound as usize).into_iter().enumerate() {
        if r != 0 {
            totals.insert([0, 0, c as i64], r);
        }
    }
    let table = VectorTable::new(l, bound - 1);
    for a in 1..=bound / 2 {
        let reps = orbit_reps(&table, a, gens);
        let parts: Vec<Vec<u64>> = reps
            .par_iter()
            .map(|(x, w)| {
                let gx = l.apply(x);
                // hist[(c − a)·(a+1) + b]
                let width = (a + 1) as usize;
                let mut hist = vec![0u64; (bound - 2 * a + 1) as usize * width];
                for c in a..=bound - a {
                    for y in table.norm(c) {
                        let b = dot(&gx, y);
                        if (0..=a).contains(&b) {
                            hist[(c - a) as usize * width + b as usize] += w;
                        }
                    }
                }
                hist
            })
            .collect();
        let width = (a + 1) as usize;
        for part in parts {
            for (idx, v) in part.into_iter().enumerate() {
                if v != 0 {
                    let c = a + (idx / width) as i64;
                    let b = (idx % width) as i64;
                    *totals.entry([a, b, c]).or_insert(0) += v;
                }
            }
        }
    }
    totals
}

/// #{A ∈ Z^{n×g} : Aᵀ·gram·A = 2T} for an arbitrary (possibly unreduced)
/// form by direct enumeration.
pub fn representation_count(l: &Lattice, t: &SemiIntegralForm) -> Result<Integer> {
    let m = t.doubled();
    let g = m.len();
    if g == 0 {
        return Ok(Integer::one());
    }
    let red = lll_reduce(l).lattice;
    let max = (0..g).map(|i| m[i][i] / 2).max().unwrap_or(0);
    let table = VectorTable::new(&red, max);
    let list = |q: i64| -> Vec<Vec<i64>> {
        if q == 0 {
            vec![vec![0; red.rank()]]
        } else {
            table.norm(q).map(<[i64]>::to_vec).collect()
        }
    };
    let cols: Vec<Vec<Vec<i64>>> = (0..g).map(|i| list(m[i][i] / 2)).collect();
    let mut count = 0u64;
    let mut chosen: Vec<Vec<i64>> = Vec::new();
    fn rec(red: &Lattice, m: &[Vec<i64>], cols: &[Vec<Vec<i64>>], chosen: &mut Vec<Vec<i64>>, count: &mut u64) {
        let i = chosen.len();
        if i == m.len() {
            *count += 1;
            return;
        }
        for x in &cols[i] {
            if chosen.iter().enumerate().all(|(j, y)| red.inner(x, y) == m[i][j]) {
                chosen.push(x.clone());
                rec(red, m, cols, chosen, count);
                chosen.pop();
            }
        }
    }
    rec(&red, &m, &cols, &mut chosen, &mut count);
    Ok(Integer::from(count))
}

/// Per-class theta series of a genus.
pub fn class_thetas(genus: &GenusData, g: usize, bound: usize) -> Result<Vec<ThetaSeries>> {
    (0..genus.class_number())
        .into_par_iter()
        .map(|i| {
            let l = &genus.representatives[i];
            let gens: Vec<IntMatrix> = if g >= 2 {
                genus.aut_group(i)?.generators.into_iter().map(|s| s.matrix).collect()
            } else {
                Vec::new()
            };
            // representatives are stored reduced
            theta_reduced(l, &gens, g, bound)
        })
        .collect()
}

/// θ⁽ᵍ⁾(f) = Σ cᵢ/#O(Λᵢ)·θ⁽ᵍ⁾(Λᵢ).
pub fn theta_map(genus: &GenusData, f: &ModularForm, g: usize, bound: usize) -> Result<ThetaSeries> {
    if f.len() != genus.class_number() {
        return Err(Error::GenusMismatch);
    }
    if g == 0 {
        let mut out = ThetaSeries::empty(0, bound);
        let v = inner_product(genus, f, &ModularForm::eisenstein(f.len()))?;
        if !v.is_zero() {
            out.coeffs.insert(SemiIntegralForm(vec![]), v);
        }
        return Ok(out);
    }
    let thetas = class_thetas(genus, g, bound)?;
    weighted_sum(genus, f, &thetas, g, bound)
}

fn weighted_sum(genus: &GenusData, f: &ModularForm, thetas: &[ThetaSeries], g: usize, bound: usize) -> Result<ThetaSeries> {
    let mut out = ThetaSeries::empty(g, bound);
    for (i, th) in thetas.iter().enumerate() {
        let w = &f.coeffs[i] / Rational::from_integer(genus.aut_orders[i].clone());
        out = out.combine(&Rational::one(), th, &w)?;
    }
    Ok(out)
}

/// Kernel of the truncated theta map, with a re-check at a larger bound.
/// Kernel membership is only ever established up to the bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaKernel {
    pub g: usize,
    pub bound: usize,
    #[serde(with = "basis_text")]
    pub basis: Vec<Vec<Integer>>,
    pub check_bound: Option<usize>,
    pub check_dimension: Option<usize>,
}

mod basis_text {
    use super::Integer;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Vec<Integer>], s: S) -> Result<S::Ok, S::Error> {
        let t: Vec<Vec<String>> = v.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
        t.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Integer>>, D::Error> {
        let t: Vec<Vec<String>> = Vec::deserialize(d)?;
        t.into_iter()
            .map(|r| r.into_iter().map(|x| x.parse().map_err(serde::de::Error::custom)).collect())
            .collect()
    }
}

impl ThetaKernel {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// True when the re-check found the same dimension.
    pub fn is_stable(&self) -> bool {
        self.check_dimension.is_none_or(|d| d == self.dimension())
    }
}

pub fn theta_kernel(genus: &GenusData, g: usize, bound: usize) -> Result<ThetaKernel> {
    theta_kernel_with(genus, g, bound, DEFAULT_WINDOW)
}

/// Basis of {f : θ⁽ᵍ⁾(f) ≡ 0 to trace ≤ bound}; with `window > 0` the
/// dimension is recomputed at bound + window.
pub fn theta_kernel_with(genus: &GenusData, g: usize, bound: usize, window: usize) -> Result<ThetaKernel> {
    let basis = kernel_basis(genus, g, bound)?;
    let (check_bound, check_dimension) = if window > 0 {
        let b2 = bound + window;
        (Some(b2), Some(kernel_basis(genus, g, b2)?.len()))
    } else {
        (None, None)
    };
    Ok(ThetaKernel {
        g,
        bound,
        basis,
        check_bound,
        check_dimension,
    })
}

fn kernel_basis(genus: &GenusData, g: usize, bound: usize) -> Result<Vec<Vec<Integer>>> {
    let h = genus.class_number();
    let thetas = if g == 0 {
        vec![theta_reduced(&genus.representatives[0], &[], 0, bound)?; h]
    } else {
        class_thetas(genus, g, bound)?
    };
    let mut forms: Vec<&SemiIntegralForm> = thetas.iter().flat_map(|t| t.coeffs.keys()).collect();
    forms.sort();
    forms.dedup();
    if forms.is_empty() {
        return Ok((0..h)
            .map(|i| (0..h).map(|j| Integer::from(u8::from(i == j))).collect())
            .collect());
    }
    let m = Matrix::from_fn(forms.len(), h, |r, c| {
        thetas[c].coeffs.get(forms[r]).cloned().unwrap_or_else(Rational::zero)
            / Rational::from_integer(genus.aut_orders[c].clone())
    });
    Ok(m.kernel()
        .iter()
        .filter_map(|v| primitive_integer_vector(v))
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DepthStatus {
    ProvedNonzero,
    VanishesToBound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthLevel {
    pub g: usize,
    pub bound: usize,
    pub status: DepthStatus,
}

/// Smallest g with θ⁽ᵍ⁾(f) provably nonzero, if any g ≤ gmax qualifies.
/// Vanishing at the levels below is only known to the listed bounds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthReport {
    pub form: ModularForm,
    pub depth: Option<usize>,
    pub levels: Vec<DepthLevel>,
}

/// `bounds[g − 1]` is the trace bound used at genus g; the last entry is
/// reused for larger g.
pub fn depth_estimate(genus: &GenusData, f: &ModularForm, gmax: usize, bounds: &[usize]) -> Result<DepthReport> {
    if f.is_zero() {
        return Err(Error::InvalidArgument("zero form has no depth".into()));
    }
    let mut levels = Vec::new();
    let mut depth = None;
    for g in 0..=gmax.min(3) {
        let bound = if g == 0 {
            0
        } else {
            *bounds.get(g - 1).or(bounds.last()).ok_or_else(|| Error::InvalidArgument("no theta bound".into()))?
        };
        let th = theta_map(genus, f, g, bound)?;
        let status = if th.is_zero() {
            DepthStatus::VanishesToBound
        } else {
            DepthStatus::ProvedNonzero
        };
        levels.push(DepthLevel { g, bound, status });
        if status == DepthStatus::ProvedNonzero {
            depth = Some(g);
            break;
        }
    }
    Ok(DepthReport {
        form: f.clone(),
        depth,
        levels,
    })
}

/// Dimension of the truncated kernel of θ⁽²⁾ next to the number of classes
/// whose orthogonal group has no element of determinant −1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelCensus {
    pub discriminant: i64,
    pub class_number: usize,
    pub kernel: ThetaKernel,
    pub classes_without_det_minus_one: usize,
}

impl KernelCensus {
    pub fn counts_agree(&self) -> bool {
        self.kernel.dimension() == self.classes_without_det_minus_one
    }
}

pub fn kernel_census(genus: &GenusData, bound: usize, window: usize) -> Result<KernelCensus> {
    Ok(KernelCensus {
        discriminant: genus.discriminant,
        class_number: genus.class_number(),
        kernel: theta_kernel_with(genus, 2, bound, window)?,
        classes_without_det_minus_one: genus.det_minus_one.iter().filter(|&&d| !d).count(),
    })
}
