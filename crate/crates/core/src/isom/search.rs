use crate::error::{Error, Result};
use crate::lattice::{for_each_short_vector, hnf_rows, IntMatrix, Lattice};

/// Vectors of the source lattice available as images, stored flat.
pub(crate) struct Pool {
    pub n: usize,
    pub vecs: Vec<i64>,
    pub norms: Vec<i64>,
}

impl Pool {
    /// All vectors (both signs) of `l` whose norm lies in `norms`.
    pub fn new(l: &Lattice, norms: &[i64]) -> Pool {
        let n = l.rank();
        let max = norms.iter().copied().max().unwrap_or(0);
        let mut vecs = Vec::new();
        let mut out_norms = Vec::new();
        let mut found: Vec<(Vec<i64>, i64)> = Vec::new();
        if max > 0 {
            for_each_short_vector(l, max, |x, q| {
                if norms.contains(&q) {
                    found.push((x.to_vec(), q));
                }
            });
        }
        found.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
        for (x, q) in found {
            let neg: Vec<i64> = x.iter().map(|c| -c).collect();
            vecs.extend_from_slice(&x);
            out_norms.push(q);
            vecs.extend_from_slice(&neg);
            out_norms.push(q);
        }
        Pool {
            n,
            vecs,
            norms: out_norms,
        }
    }

    pub fn len(&self) -> usize {
        self.norms.len()
    }

    pub fn get(&self, i: usize) -> &[i64] {
        &self.vecs[i * self.n..(i + 1) * self.n]
    }
}

/// Basis order used by the backtracking: ascending norm, preferring vectors
/// that meet many already chosen ones.
pub(crate) fn basis_order(target: &Lattice) -> Vec<usize> {
    let n = target.rank();
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut left: Vec<usize> = (0..n).collect();
    while !left.is_empty() {
        let best = *left
            .iter()
            .min_by_key(|&&i| {
                let links = order.iter().filter(|&&j| target.entry(i, j) != 0).count();
                (target.entry(i, i), std::cmp::Reverse(links), i)
            })
            .expect("non-empty");
        order.push(best);
        left.retain(|&i| i != best);
    }
    order
}

/// Backtracking search for isometries from `target` into the source lattice.
pub(crate) struct Search<'a> {
    pub source: &'a Lattice,
    pub target: &'a Lattice,
    pub pool: &'a Pool,
    pub order: Vec<usize>,
    pub node_cap: u64,
    pub nodes: u64,
}

impl<'a> Search<'a> {
    pub fn new(source: &'a Lattice, target: &'a Lattice, pool: &'a Pool, node_cap: u64) -> Self {
        Search {
            source,
            target,
            pool,
            order: basis_order(target),
            node_cap,
            nodes: 0,
        }
    }

    fn t(&self, a: usize, b: usize) -> i64 {
        self.target.entry(self.order[a], self.order[b])
    }

    /// Candidate pool indices for level `l` consistent with the fixed images.
    pub fn initial_list(&self, l: usize, fixed: &[Vec<i64>]) -> Vec<u32> {
        let want = self.t(l, l) / 2;
        let gimgs: Vec<Vec<i64>> = fixed.iter().map(|v| self.source.apply(v)).collect();
        (0..self.pool.len())
            .filter(|&i| self.pool.norms[i] == want)
            .filter(|&i| {
                let v = self.pool.get(i);
                gimgs
                    .iter()
                    .enumerate()
                    .all(|(j, gv)| dot(v, gv) == self.t(j, l))
            })
            .map(|i| i as u32)
            .collect()
    }

    /// Extend `fixed` images of the first levels to full isometries. The
    /// callback receives each completed transform and returns `true` to stop.
    pub fn run(
        &mut self,
        fixed: &[Vec<i64>],
        on_found: &mut dyn FnMut(&IntMatrix) -> bool,
    ) -> Result<bool> {
        let n = self.target.rank();
        let d0 = fixed.len();
        if d0 == n {
            let u = self.assemble(fixed);
            return Ok(self.check(&u) && on_found(&u));
        }
        let mut lists: Vec<Vec<u32>> = (0..n.saturating_sub(1))
            .map(|l| if l >= d0 { self.initial_list(l, fixed) } else { Vec::new() })
            .collect();
        if d0 < n - 1 && lists[d0..].iter().any(Vec::is_empty) {
            return Ok(false);
        }
        let mut images: Vec<Vec<i64>> = fixed.to_vec();
        let mut gimages: Vec<Vec<i64>> = fixed.iter().map(|v| self.source.apply(v)).collect();
        self.dfs(d0, &mut lists, &mut images, &mut gimages, on_found)
    }

    fn dfs(
        &mut self,
        depth: usize,
        lists: &mut Vec<Vec<u32>>,
        images: &mut Vec<Vec<i64>>,
        gimages: &mut Vec<Vec<i64>>,
        on_found: &mut dyn FnMut(&IntMatrix) -> bool,
    ) -> Result<bool> {
        let n = self.target.rank();
        self.nodes += 1;
        if self.nodes > self.node_cap {
            return Err(Error::ResourceCap {
                what: "isometry search",
                limit: self.node_cap,
            });
        }
        if depth == n - 1 {
            for v in self.solve_last(gimages) {
                images.push(v);
                let u = self.assemble(images);
                images.pop();
                if self.check(&u) && on_found(&u) {
                    return Ok(true);
                }
            }
            return Ok(false);
        }
        let candidates = std::mem::take(&mut lists[depth]);
        for &c in &candidates {
            let v = self.pool.get(c as usize).to_vec();
            let gv = self.source.apply(&v);
            // forward check: filter the lists of all later scanned levels
            let mut saved: Vec<Vec<u32>> = Vec::with_capacity(n - 1 - depth);
            let mut dead = false;
            for l in depth + 1..n - 1 {
                let want = self.t(depth, l);
                let filtered: Vec<u32> = lists[l]
                    .iter()
                    .copied()
                    .filter(|&w| dot(self.pool.get(w as usize), &gv) == want)
                    .collect();
                if filtered.is_empty() {
                    dead = true;
                }
                saved.push(std::mem::replace(&mut lists[l], filtered));
                if dead {
                    break;
                }
            }
            if !dead {
                images.push(v);
                gimages.push(gv);
                let stop = self.dfs(depth + 1, lists, images, gimages, on_found);
                images.pop();
                gimages.pop();
                if matches!(stop, Ok(true) | Err(_)) {
                    restore(lists, depth, saved);
                    lists[depth] = candidates;
                    return stop;
                }
            }
            restore(lists, depth, saved);
        }
        lists[depth] = candidates;
        Ok(false)
    }

    /// Solutions for the final level once all earlier images are `fixed`.
    pub fn last_candidates(&self, fixed: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let gimages: Vec<Vec<i64>> = fixed.iter().map(|v| self.source.apply(v)).collect();
        self.solve_last(&gimages)
    }

    // All integral v with B(v, imgⱼ) prescribed for j < n−1 and Q(v) prescribed.
    fn solve_last(&self, gimages: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let n = self.target.rank();
        let last = n - 1;
        let rhs: Vec<i128> = (0..last).map(|j| self.t(j, last) as i128).collect();
        let target_b = self.t(last, last) as i128;
        // [Wᵀ | I] row-reduced gives R with R·Wᵀ echelon; R's last row spans the kernel.
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                let mut r: Vec<i64> = gimages.iter().map(|gv| gv[i]).collect();
                r.extend((0..n).map(|j| i64::from(i == j)));
                r
            })
            .collect();
        let h = hnf_rows(&rows);
        if h.len() != n {
            return Vec::new();
        }
        // Solve Hᵀ_top·y = rhs by forward substitution (H_top is upper triangular).
        let mut y = vec![0i128; n];
        for i in 0..last {
            let mut s = rhs[i];
            for j in 0..i {
                s -= h[j][i] as i128 * y[j];
            }
            let p = h[i][i] as i128;
            if p == 0 || s % p != 0 {
                return Vec::new();
            }
            y[i] = s / p;
        }
        if h[last][..last].iter().any(|&x| x != 0) {
            return Vec::new();
        }
        let v0: Vec<i128> = (0..n)
            .map(|c| (0..last).map(|i| y[i] * h[i][last + c] as i128).sum())
            .collect();
        let k: Vec<i128> = (0..n).map(|c| h[last][last + c] as i128).collect();
        let g = |a: &[i128], b: &[i128]| -> i128 {
            let mut s = 0i128;
            for i in 0..n {
                if a[i] == 0 {
                    continue;
                }
                for j in 0..n {
                    s += a[i] * self.source.entry(i, j) as i128 * b[j];
                }
            }
            s
        };
        let a = g(&k, &k);
        let b = 2 * g(&v0, &k);
        let c = g(&v0, &v0) - target_b;
        let disc = b * b - 4 * a * c;
        if disc < 0 {
            return Vec::new();
        }
        let r = isqrt(disc);
        if r * r != disc {
            return Vec::new();
        }
        let mut out = Vec::new();
        for num in [-b + r, -b - r] {
            if num % (2 * a) == 0 {
                let t = num / (2 * a);
                let v: Vec<i64> = (0..n).map(|i| (v0[i] + t * k[i]) as i64).collect();
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        out
    }

    fn assemble(&self, images: &[Vec<i64>]) -> IntMatrix {
        let n = self.target.rank();
        let mut u = IntMatrix::zeros(n, n);
        for (lvl, img) in images.iter().enumerate() {
            let col = self.order[lvl];
            for (r, &x) in img.iter().enumerate() {
                u.set(r, col, x);
            }
        }
        u
    }

    fn check(&self, u: &IntMatrix) -> bool {
        &self.source.transform(u) == self.target
    }
}

fn restore(lists: &mut [Vec<u32>], depth: usize, saved: Vec<Vec<u32>>) {
    for (off, s) in saved.into_iter().enumerate() {
        lists[depth + 1 + off] = s;
    }
}

pub(crate) fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn isqrt(x: i128) -> i128 {
    if x < 2 {
        return x;
    }
    let mut r = (x as f64).sqrt() as i128;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}
