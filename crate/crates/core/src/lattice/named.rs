use super::{hnf_rows, Lattice};
use crate::error::{Error, Result};

fn from_edges(n: usize, edges: &[(usize, usize)]) -> Lattice {
    let mut g = vec![0; n * n];
    for i in 0..n {
        g[i * n + i] = 2;
    }
    for &(a, b) in edges {
        g[a * n + b] = -1;
        g[b * n + a] = -1;
    }
    Lattice::from_trusted(n, g)
}

fn chain(n: usize) -> Vec<(usize, usize)> {
    (1..n).map(|i| (i - 1, i)).collect()
}

fn root_a(n: usize) -> Lattice {
    from_edges(n, &chain(n))
}

fn root_d(n: usize) -> Lattice {
    let mut e = chain(n - 1);
    e.push((n - 3, n - 1));
    from_edges(n, &e)
}

fn root_e(n: usize) -> Lattice {
    let mut e = chain(n - 1);
    e.push((2, n - 1));
    from_edges(n, &e)
}

/// D_n⁺ for n ≡ 0 mod 8: D_n together with the half-integral all-½ vector.
fn d_plus(n: usize) -> Lattice {
    // coordinates doubled so every generator is integral
    let mut gens: Vec<Vec<i64>> = Vec::new();
    for i in 0..n - 1 {
        let mut v = vec![0; n];
        v[i] = 2;
        v[i + 1] = -2;
        gens.push(v);
    }
    let mut v = vec![0; n];
    v[n - 2] = 2;
    v[n - 1] = 2;
    gens.push(v);
    gens.push(vec![1; n]);
    let basis = hnf_rows(&gens);
    let mut g = vec![0; n * n];
    for i in 0..n {
        for j in 0..n {
            let dot: i64 = basis[i].iter().zip(&basis[j]).map(|(a, b)| a * b).sum();
            g[i * n + j] = dot / 4;
        }
    }
    Lattice::from_trusted(n, g)
}

fn single(name: &str) -> Result<Lattice> {
    let bad = || Error::InvalidArgument(format!("unknown lattice name `{name}`"));
    let (kind, rest) = name.split_at(1);
    let n: usize = rest.parse().map_err(|_| bad())?;
    match kind {
        "A" if n >= 1 => Ok(root_a(n)),
        "D" if n >= 3 => Ok(root_d(n)),
        "E" if (6..=8).contains(&n) => Ok(root_e(n)),
        "E" if n.is_multiple_of(8) && n >= 16 => Ok(d_plus(n)),
        _ => Err(bad()),
    }
}

/// Root lattices `An`, `Dn`, `E6`, `E7`, `E8`, the unimodular `E16` (= D16⁺),
/// and direct sums written with `+`, e.g. `A6+A2` or `E8+E8`.
pub fn named_lattice(name: &str) -> Result<Lattice> {
    let mut parts = name.split('+').map(|s| single(s.trim()));
    let first = parts
        .next()
        .ok_or_else(|| Error::InvalidArgument("empty lattice name".into()))??;
    parts.try_fold(first, |acc, l| Ok(acc.direct_sum(&l?)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinants() {
        for (name, det) in [
            ("A1", 2),
            ("A4", 5),
            ("D4", 4),
            ("D5", 4),
            ("E6", 3),
            ("E7", 2),
            ("E8", 1),
            ("E16", 1),
            ("E8+E8", 1),
        ] {
            let l = named_lattice(name).unwrap();
            assert_eq!(l.determinant(), det, "{name}");
            Lattice::new(l.gram_rows()).unwrap();
        }
        assert!(named_lattice("Q3").is_err());
        assert!(named_lattice("E9").is_err());
    }
}
