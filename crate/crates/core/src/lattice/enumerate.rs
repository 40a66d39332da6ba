use super::{lll_reduce, Lattice};

/// Floating-point Cholesky data xᵀ·gram·x = Σᵢ qᵢᵢ (xᵢ + Σ_{j>i} qᵢⱼ xⱼ)².
///
/// Only used to bound the search; every visited vector is checked exactly.
#[derive(Clone, Debug)]
pub struct Cholesky {
    n: usize,
    q: Vec<f64>,
}

impl Cholesky {
    pub fn new(n: usize, gram: &[i64]) -> Self {
        let mut q: Vec<f64> = gram.iter().map(|&x| x as f64).collect();
        for i in 0..n {
            for j in i + 1..n {
                q[j * n + i] = q[i * n + j];
                q[i * n + j] /= q[i * n + i];
            }
            for k in i + 1..n {
                for l in k..n {
                    q[k * n + l] -= q[k * n + i] * q[i * n + l];
                }
            }
        }
        Cholesky { n, q }
    }

    fn diag(&self, i: usize) -> f64 {
        self.q[i * self.n + i]
    }

    fn coef(&self, i: usize, j: usize) -> f64 {
        self.q[i * self.n + j]
    }
}

/// Up-to-sign list of short vectors with their norms Q(x).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ShortVectorList {
    pub entries: Vec<(Vec<i64>, i64)>,
}

impl ShortVectorList {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Vec<i64>, i64)> {
        self.entries.iter()
    }
}

/// Visit each nonzero x (one of ±x) with Q(x) ≤ bound in the given basis,
/// passing x and Q(x). The basis should be reduced for efficiency.
pub fn for_each_short_vector<F: FnMut(&[i64], i64)>(l: &Lattice, bound: i64, mut f: F) {
    let n = l.rank();
    let chol = Cholesky::new(n, l.gram_flat());
    let zero = vec![0; n];
    enumerate(l.gram_flat(), &chol, 2 * bound, 1, &zero, true, |x, e| f(x, e / 2));
}

/// Visit every w = scale·x + offset (x ∈ Zⁿ) with wᵀ·gram·w ≤ limit, passing x
/// and the exact value wᵀ·gram·w. With `half`, the offset must be zero and
/// only one vector of each pair ±x ≠ 0 is visited.
pub(crate) fn enumerate<F: FnMut(&[i64], i64)>(
    gram: &[i64],
    chol: &Cholesky,
    limit: i64,
    scale: i64,
    offset: &[i64],
    half: bool,
    mut visit: F,
) {
    let n = chol.n;
    if limit < 0 {
        return;
    }
    let sc = scale as f64;
    let s: Vec<f64> = offset.iter().map(|&t| t as f64 / sc).collect();
    let cbound = limit as f64 / (sc * sc);
    let tol = 1e-9 * (1.0 + cbound);
    let mut x = vec![0i64; n];
    let mut hi = vec![0i64; n];
    let mut center = vec![0f64; n];
    let mut rem = vec![0f64; n];
    let mut acc = vec![0i64; n * n];
    let mut part = vec![0i64; n + 1];
    let mut nz_above = vec![false; n];

    let bounds = |i: usize, x: &[i64], rem: f64, nz: bool| -> (i64, i64, f64) {
        let mut c = -s[i];
        for j in i + 1..n {
            c -= chol.coef(i, j) * (x[j] as f64 + s[j]);
        }
        let avail = rem + tol;
        if avail < 0.0 {
            return (1, 0, c);
        }
        let r = (avail / chol.diag(i)).sqrt() + 1e-9;
        let mut lo = (c - r).ceil() as i64;
        let up = (c + r).floor() as i64;
        if half && !nz {
            lo = lo.max(0);
        }
        (lo, up, c)
    };

    let mut i = n - 1;
    rem[i] = cbound;
    let (lo, up, c) = bounds(i, &x, rem[i], false);
    x[i] = lo;
    hi[i] = up;
    center[i] = c;
    loop {
        if x[i] > hi[i] {
            i += 1;
            if i == n {
                return;
            }
            x[i] += 1;
            continue;
        }
        if i == 0 {
            let a0 = acc[0];
            let g00 = gram[0];
            let p1 = part[1];
            for v in x[0]..=hi[0] {
                if half && !nz_above[0] && v == 0 {
                    continue;
                }
                let w = scale * v + offset[0];
                let e = p1 + g00 * w * w + 2 * w * a0;
                if e <= limit {
                    x[0] = v;
                    visit(&x, e);
                }
            }
            x[0] = hi[0] + 1;
            continue;
        }
        let d = x[i] as f64 - center[i];
        let w = scale * x[i] + offset[i];
        part[i] = part[i + 1] + gram[i * n + i] * w * w + 2 * w * acc[i * n + i];
        let (src, dst) = acc.split_at_mut(i * n);
        let dst_row = &mut src[(i - 1) * n..(i - 1) * n + i];
        for (k, slot) in dst_row.iter_mut().enumerate() {
            *slot = dst[k] + gram[k * n + i] * w;
        }
        rem[i - 1] = rem[i] - chol.diag(i) * d * d;
        nz_above[i - 1] = nz_above[i] || x[i] != 0;
        i -= 1;
        let (lo, up, c) = bounds(i, &x, rem[i], nz_above[i]);
        x[i] = lo;
        hi[i] = up;
        center[i] = c;
    }
}

pub(super) fn short_vectors(l: &Lattice, bound: i64) -> ShortVectorList {
    let red = lll_reduce(l);
    let n = l.rank();
    let mut entries = Vec::new();
    for_each_short_vector(&red.lattice, bound, |y, q| {
        let mut v: Vec<i64> = (0..n)
            .map(|i| (0..n).map(|j| red.transform.get(i, j) * y[j]).sum())
            .collect();
        if v.iter().find(|&&c| c != 0).is_some_and(|&c| c < 0) {
            for c in v.iter_mut() {
                *c = -*c;
            }
        }
        entries.push((v, q));
    });
    entries.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    ShortVectorList { entries }
}
