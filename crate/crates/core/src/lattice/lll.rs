use super::{IntMatrix, Lattice};

/// Result of a basis reduction: `transform`ᵀ·gram·`transform` = `lattice`.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub lattice: Lattice,
    pub transform: IntMatrix,
    pub inverse: IntMatrix,
}

/// LLL reduction with δ = 0.99.
///
/// Gram–Schmidt data is tracked in floating point only to choose the basis
/// operations; the Gram matrix and the transform are updated exactly, so the
/// returned lattice is always exactly isometric to the input.
pub fn lll_reduce(l: &Lattice) -> Reduction {
    let n = l.rank();
    let mut g: Vec<i64> = l.gram_flat().to_vec();
    let mut u = IntMatrix::identity(n);
    let mut uinv = IntMatrix::identity(n);
    if n > 1 {
        lll_in_place(n, &mut g, &mut u, &mut uinv, 0.99);
    }
    sort_equal_runs(n, &mut g, &mut u, &mut uinv);
    Reduction {
        lattice: Lattice::from_trusted(n, g),
        transform: u,
        inverse: uinv,
    }
}

fn lll_in_place(n: usize, g: &mut [i64], u: &mut IntMatrix, uinv: &mut IntMatrix, delta: f64) {
    let mut mu = vec![0f64; n * n];
    let mut bstar = vec![0f64; n];
    bstar[0] = g[0] as f64;
    let mut k = 1;
    let mut steps = 0usize;
    while k < n {
        steps += 1;
        if steps > 1_000_000 {
            break;
        }
        gso_row(n, g, &mut mu, &mut bstar, k);
        let mut changed = false;
        for j in (0..k).rev() {
            let q = mu[k * n + j].round();
            if q.abs() >= 1.0 && mu[k * n + j].abs() > 0.501 {
                let q = q as i64;
                add_multiple(n, g, u, uinv, k, j, -q);
                for l in 0..j {
                    mu[k * n + l] -= q as f64 * mu[j * n + l];
                }
                mu[k * n + j] -= q as f64;
                changed = true;
            }
        }
        if changed {
            gso_row(n, g, &mut mu, &mut bstar, k);
        }
        let m = mu[k * n + k - 1];
        if bstar[k] < (delta - m * m) * bstar[k - 1] {
            swap(n, g, u, uinv, k, k - 1);
            if k > 1 {
                k -= 1;
            } else {
                bstar[0] = g[0] as f64;
            }
        } else {
            k += 1;
        }
    }
}

fn gso_row(n: usize, g: &[i64], mu: &mut [f64], bstar: &mut [f64], k: usize) {
    for j in 0..k {
        let mut s = g[k * n + j] as f64;
        for l in 0..j {
            s -= mu[j * n + l] * mu[k * n + l] * bstar[l];
        }
        mu[k * n + j] = s / bstar[j];
    }
    let mut s = g[k * n + k] as f64;
    for l in 0..k {
        s -= mu[k * n + l] * mu[k * n + l] * bstar[l];
    }
    bstar[k] = s;
}

// b_k ← b_k + q·b_j
fn add_multiple(n: usize, g: &mut [i64], u: &mut IntMatrix, uinv: &mut IntMatrix, k: usize, j: usize, q: i64) {
    let gkk = g[k * n + k] + 2 * q * g[k * n + j] + q * q * g[j * n + j];
    for l in 0..n {
        if l != k {
            let v = g[k * n + l] + q * g[j * n + l];
            g[k * n + l] = v;
            g[l * n + k] = v;
        }
    }
    g[k * n + k] = gkk;
    for i in 0..n {
        let v = *u.get(i, k) + q * *u.get(i, j);
        u.set(i, k, v);
    }
    for c in 0..n {
        let v = *uinv.get(j, c) - q * *uinv.get(k, c);
        uinv.set(j, c, v);
    }
}

fn swap(n: usize, g: &mut [i64], u: &mut IntMatrix, uinv: &mut IntMatrix, a: usize, b: usize) {
    for l in 0..n {
        g.swap(a * n + l, b * n + l);
    }
    for l in 0..n {
        g.swap(l * n + a, l * n + b);
    }
    for i in 0..n {
        let (x, y) = (*u.get(i, a), *u.get(i, b));
        u.set(i, a, y);
        u.set(i, b, x);
    }
    for c in 0..n {
        let (x, y) = (*uinv.get(a, c), *uinv.get(b, c));
        uinv.set(a, c, y);
        uinv.set(b, c, x);
    }
}

// Stable ordering by norm keeps reduced forms deterministic across equal inputs.
fn sort_equal_runs(n: usize, g: &mut [i64], u: &mut IntMatrix, uinv: &mut IntMatrix) {
    for i in 1..n {
        let mut j = i;
        while j > 0 && g[j * n + j] < g[(j - 1) * n + j - 1] {
            swap(n, g, u, uinv, j, j - 1);
            j -= 1;
        }
    }
}
