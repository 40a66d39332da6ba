use std::collections::HashMap;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::enumerate::{enumerate, for_each_short_vector, Cholesky};
use super::{lll_reduce, Lattice};
use crate::exactalg::det_i64;

// Above this many expected vectors the coset-splitting counter is used.
const DIRECT_LIMIT: f64 = 4.0e6;

/// Volume of the unit ball in dimension n.
pub(crate) fn unit_ball_volume(n: usize) -> f64 {
    let (mut even, mut odd) = (1.0f64, 2.0f64);
    for k in 2..=n {
        let v = if k % 2 == 0 { even } else { odd } * 2.0 * std::f64::consts::PI / k as f64;
        if k % 2 == 0 {
            even = v;
        } else {
            odd = v;
        }
    }
    if n.is_multiple_of(2) {
        even
    } else {
        odd
    }
}

/// Expected number of vectors with Q(x) ≤ bound.
pub(crate) fn expected_count(l: &Lattice, bound: f64) -> f64 {
    let n = l.rank();
    unit_ball_volume(n) * (2.0 * bound).powf(n as f64 / 2.0) / (l.determinant() as f64).sqrt()
}

pub(super) fn theta1(l: &Lattice, bound: usize) -> Vec<u64> {
    let red = lll_reduce(l).lattice;
    if red.rank() >= 8 && expected_count(&red, bound as f64) > DIRECT_LIMIT {
        return theta1_split(&red, bound);
    }
    let mut r = vec![0u64; bound + 1];
    r[0] = 1;
    for_each_short_vector(&red, bound as i64, |_, q| r[q as usize] += 2);
    r
}

fn subset_det(g: &Lattice, idx: &[usize]) -> i64 {
    let m: Vec<Vec<i64>> = idx
        .iter()
        .map(|&i| idx.iter().map(|&j| g.entry(i, j)).collect())
        .collect();
    det_i64(&m) as i64
}

// Pick the block of basis vectors whose Gram determinant is smallest.
fn choose_block(g: &Lattice, m: usize) -> Vec<usize> {
    let n = g.rank();
    let mut best: Option<(i64, Vec<usize>)> = None;
    let mut consider = |idx: Vec<usize>| {
        let d = subset_det(g, &idx);
        if best.as_ref().is_none_or(|(bd, bi)| (d, &idx) < (*bd, bi)) {
            best = Some((d, idx));
        }
    };
    let total = binomial(n, m);
    if total <= 20_000 {
        let mut idx: Vec<usize> = (0..m).collect();
        loop {
            consider(idx.clone());
            let Some(p) = (0..m).rev().find(|&p| idx[p] < n - m + p) else {
                break;
            };
            idx[p] += 1;
            for q in p + 1..m {
                idx[q] = idx[q - 1] + 1;
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20_000 {
            let mut idx: Vec<usize> = sample(&mut rng, n, m).into_vec();
            idx.sort_unstable();
            consider(idx);
        }
    }
    best.expect("non-empty").1
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

fn adjugate(d: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let m = d.len();
    if m == 1 {
        return vec![vec![1]];
    }
    let mut adj = vec![vec![0i64; m]; m];
    for i in 0..m {
        for j in 0..m {
            let minor: Vec<Vec<i64>> = (0..m)
                .filter(|&r| r != j)
                .map(|r| (0..m).filter(|&c| c != i).map(|c| d[r][c]).collect())
                .collect();
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            adj[i][j] = sign * det_i64(&minor) as i64;
        }
    }
    adj
}

/// Representation numbers computed by splitting x = (y, z) over a block of the
/// basis and pairing the two halves coset by coset.
pub fn theta1_split(l: &Lattice, bound: usize) -> Vec<u64> {
    let n = l.rank();
    let m = n / 2;
    let zb = choose_block(l, m);
    let yb: Vec<usize> = (0..n).filter(|i| !zb.contains(i)).collect();
    let k = yb.len();
    let dmat: Vec<Vec<i64>> = zb.iter().map(|&i| zb.iter().map(|&j| l.entry(i, j)).collect()).collect();
    let d = det_i64(&dmat) as i64;
    let adj = adjugate(&dmat);
    // S' = d·A − C·adj(D)·Cᵀ, the Schur complement scaled by d
    let c: Vec<Vec<i64>> = yb.iter().map(|&i| zb.iter().map(|&j| l.entry(i, j)).collect()).collect();
    let c_adj: Vec<Vec<i64>> = (0..k)
        .map(|i| (0..m).map(|j| (0..m).map(|t| c[i][t] * adj[t][j]).sum()).collect())
        .collect();
    let mut sp = vec![0i64; k * k];
    for i in 0..k {
        for j in 0..k {
            let corr: i64 = (0..m).map(|t| c_adj[i][t] * c[j][t]).sum();
            sp[i * k + j] = d * l.entry(yb[i], yb[j]) - corr;
        }
    }
    let sred = lll_reduce(&Lattice::from_trusted(k, sp));
    let u = &sred.transform;
    // shift numerators t(y) = adj(D)·Cᵀ·U·y'
    let shift: Vec<Vec<i64>> = (0..m)
        .map(|a| {
            (0..k)
                .map(|j| (0..k).map(|i| c_adj[i][a] * u.get(i, j)).sum())
                .collect()
        })
        .collect();
    let limit_y = 2 * bound as i64 * d;
    let mut classes: HashMap<Vec<i64>, HashMap<i64, u64>> = HashMap::new();
    let mut add = |key: Vec<i64>, v: i64| {
        *classes.entry(key).or_default().entry(v).or_default() += 1;
    };
    add(vec![0; m], 0);
    let chol_y = Cholesky::new(k, sred.lattice.gram_flat());
    let zero = vec![0; k];
    enumerate(sred.lattice.gram_flat(), &chol_y, limit_y, 1, &zero, true, |y, v| {
        let t: Vec<i64> = shift
            .iter()
            .map(|row| row.iter().zip(y).map(|(a, b)| a * b).sum::<i64>())
            .collect();
        add(t.iter().map(|x| x.rem_euclid(d)).collect(), v);
        add(t.iter().map(|x| (-x).rem_euclid(d)).collect(), v);
    });
    let dflat: Vec<i64> = dmat.iter().flatten().copied().collect();
    let chol_z = Cholesky::new(m, &dflat);
    let total_limit = 2 * bound as i64 * d * d;
    let modulus = 2 * d * d;
    let mut r = vec![0u64; bound + 1];
    let mut keys: Vec<&Vec<i64>> = classes.keys().collect();
    keys.sort();
    for key in keys {
        let yh = &classes[key];
        let vmin = *yh.keys().min().expect("non-empty class");
        let mut zh: HashMap<i64, u64> = HashMap::new();
        enumerate(&dflat, &chol_z, total_limit - d * vmin, d, key, false, |_, e| {
            *zh.entry(e).or_default() += 1;
        });
        for (&v, &cy) in yh {
            let base = d * v;
            let mut e = (-base).rem_euclid(modulus);
            while base + e <= total_limit {
                if let Some(&cz) = zh.get(&e) {
                    r[((base + e) / modulus) as usize] += cy * cz;
                }
                e += modulus;
            }
        }
    }
    r
}
