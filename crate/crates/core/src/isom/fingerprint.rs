use serde::{Deserialize, Serialize};

use crate::lattice::{lll_reduce, Lattice};

/// Isometry invariants used to sort and separate classes in a genus.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fingerprint {
    pub rank: usize,
    pub discriminant: i64,
    /// r₁..r_B of the degree-one theta series.
    pub theta: Vec<u64>,
    /// Component sizes, descending, of the graph on ± pairs of minimal vectors
    /// joined when non-orthogonal.
    pub min_components: Vec<u32>,
}

impl Fingerprint {
    pub fn depth(&self) -> usize {
        self.theta.len()
    }
}

pub fn fingerprint(l: &Lattice, depth: usize) -> Fingerprint {
    let theta = l.theta1_coeffs(depth);
    Fingerprint {
        rank: l.rank(),
        discriminant: l.discriminant(),
        theta: theta[1..].to_vec(),
        min_components: minimal_vector_components(l),
    }
}

pub fn minimal_vector_components(l: &Lattice) -> Vec<u32> {
    let r = lll_reduce(l).lattice;
    let n = r.rank();
    let cap = (0..n).map(|i| r.entry(i, i) / 2).min().unwrap_or(0);
    let list = r.short_vectors(cap);
    let mu = list.iter().map(|(_, q)| *q).min().unwrap_or(0);
    let mins: Vec<Vec<i64>> = list
        .iter()
        .filter(|(_, q)| *q == mu)
        .map(|(x, _)| r.apply(x))
        .collect();
    let raw: Vec<&Vec<i64>> = list.iter().filter(|(_, q)| *q == mu).map(|(x, _)| x).collect();
    let m = mins.len();
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for i in 0..m {
        for j in i + 1..m {
            let ip: i64 = mins[i].iter().zip(raw[j].iter()).map(|(a, b)| a * b).sum();
            if ip != 0 {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut sizes = vec![0u32; m];
    for i in 0..m {
        let root = find(&mut parent, i);
        sizes[root] += 1;
    }
    let mut out: Vec<u32> = sizes.into_iter().filter(|&s| s > 0).collect();
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}
