/// Row Hermite normal form: a basis (as rows) of the row lattice of `m`.
///
/// Pivots are positive and entries above each pivot are reduced into
/// `[0, pivot)`. Zero rows are dropped.
pub fn hnf_rows(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        // gcd-combine every row below r into row r on column c
        for i in r + 1..a.len() {
            if a[i][c] == 0 {
                continue;
            }
            let (g, s, t) = ext_gcd(a[r][c], a[i][c]);
            let (u, v) = (a[r][c] / g, a[i][c] / g);
            for j in c..cols {
                let x = a[r][j];
                let y = a[i][j];
                a[r][j] = s * x + t * y;
                a[i][j] = -v * x + u * y;
            }
        }
        if a[r][c] == 0 {
            continue;
        }
        if a[r][c] < 0 {
            for x in a[r].iter_mut() {
                *x = -*x;
            }
        }
        let p = a[r][c];
        for i in 0..r {
            let q = a[i][c].div_euclid(p);
            if q != 0 {
                for j in c..cols {
                    a[i][j] -= q * a[r][j];
                }
            }
        }
        r += 1;
    }
    a.truncate(r);
    a.into_iter()
        .map(|row| row.into_iter().map(|x| x as i64).collect())
        .collect()
}

// (g, s, t) with s·a + t·b = g = gcd(a, b) > 0.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Basis (rows) of the integer kernel {x ∈ Zⁿ : m·x = 0}.
pub fn integer_kernel(m: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    // Row-reduce [mᵀ | I]; rows whose left block vanishes span the kernel.
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut r: Vec<i64> = m.iter().map(|row| row[i]).collect();
            r.extend((0..n).map(|j| i64::from(i == j)));
            r
        })
        .collect();
    let h = hnf_rows(&rows);
    let k = m.len();
    h.into_iter()
        .filter(|r| r[..k].iter().all(|&x| x == 0))
        .map(|r| r[k..].to_vec())
        .collect()
}
