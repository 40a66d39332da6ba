//! Kneser p^k-neighbours: isotropic subspaces of Λ/pΛ and their lifts.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactalg::kronecker_i64;
use crate::lattice::{hnf_rows, lll_reduce, IntMatrix, Lattice};
use crate::Integer;

/// A k-dimensional subspace of Λ/pΛ on which Q vanishes, stored by its
/// reduced echelon basis with entries in [0, p).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IsotropicSubspace {
    p: u64,
    basis: Vec<Vec<i64>>,
}

impl IsotropicSubspace {
    /// Validates isotropy and independence and brings the basis to echelon form.
    pub fn new(l: &Lattice, p: u64, basis: Vec<Vec<i64>>) -> Result<Self> {
        check_prime(l, p)?;
        let pi = p as i64;
        let n = l.rank();
        if basis.is_empty() || basis.iter().any(|v| v.len() != n) {
            return Err(Error::InvalidArgument("subspace basis has wrong shape".into()));
        }
        let rows: Vec<Vec<i64>> = basis
            .iter()
            .map(|v| v.iter().map(|x| x.rem_euclid(pi)).collect())
            .collect();
        let (ech, pivots) = rref_mod(&rows, pi);
        if pivots.len() != rows.len() {
            return Err(Error::InvalidArgument("subspace basis is dependent mod p".into()));
        }
        for (i, x) in ech.iter().enumerate() {
            if l.norm(x).rem_euclid(pi) != 0 {
                return Err(Error::InvalidArgument("basis vector is not isotropic".into()));
            }
            for y in &ech[..i] {
                if l.inner(x, y).rem_euclid(pi) != 0 {
                    return Err(Error::InvalidArgument("basis vectors are not orthogonal mod p".into()));
                }
            }
        }
        Ok(IsotropicSubspace { p, basis: ech })
    }

    // Trusted constructor for a normalized isotropic line.
    pub(crate) fn from_line(p: u64, x: Vec<i64>) -> Self {
        IsotropicSubspace { p, basis: vec![x] }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }
}

/// A p^k-neighbour Π of a parent lattice Λ. `basis` holds, as columns, p times
/// the basis of Π written in the coordinates of Λ; `lattice` is the Gram
/// matrix of Π in that (LLL-reduced) basis.
#[derive(Clone, Debug)]
pub struct NeighbourLattice {
    pub lattice: Lattice,
    pub basis: IntMatrix,
    pub parent: Lattice,
    pub p: u64,
    pub subspace: IsotropicSubspace,
}

impl NeighbourLattice {
    pub fn k(&self) -> usize {
        self.subspace.dim()
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn check_prime(l: &Lattice, p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    if l.determinant() % p as i64 == 0 {
        return Err(Error::BadPrime {
            p,
            disc: l.discriminant(),
        });
    }
    Ok(())
}

/// Isotropic lines of Λ/pΛ, each given by the representative whose first
/// nonzero coordinate is 1. Lines are produced by increasing pivot and then
/// lexicographically; restricting the pivot range partitions the set.
pub struct IsotropicLines<'a> {
    l: &'a Lattice,
    p: i64,
    pivot: usize,
    pivot_end: usize,
    x: Vec<i64>,
    gx: Vec<i64>,
    q: i64,
    half: Vec<i64>,
    fresh: bool,
}

impl<'a> IsotropicLines<'a> {
    pub fn new(l: &'a Lattice, p: u64) -> Result<Self> {
        Self::with_pivots(l, p, 0..l.rank())
    }

    pub fn with_pivots(l: &'a Lattice, p: u64, pivots: std::ops::Range<usize>) -> Result<Self> {
        check_prime(l, p)?;
        let n = l.rank();
        let p = p as i64;
        let mut it = IsotropicLines {
            l,
            p,
            pivot: pivots.start,
            pivot_end: pivots.end.min(n),
            x: vec![0; n],
            gx: vec![0; n],
            q: 0,
            half: (0..n).map(|i| (l.entry(i, i) / 2).rem_euclid(p)).collect(),
            fresh: true,
        };
        it.start_pivot();
        Ok(it)
    }

    fn start_pivot(&mut self) {
        let n = self.l.rank();
        if self.pivot >= self.pivot_end {
            return;
        }
        let c = self.pivot;
        self.x.iter_mut().for_each(|v| *v = 0);
        self.x[c] = 1;
        for i in 0..n {
            self.gx[i] = self.l.entry(i, c).rem_euclid(self.p);
        }
        self.q = self.half[c];
        self.fresh = true;
    }

    // Step to the next vector with the current pivot; false when exhausted.
    fn advance(&mut self) -> bool {
        let n = self.l.rank();
        let p = self.p;
        let c = self.pivot;
        for j in (c + 1..n).rev() {
            if self.x[j] + 1 < p {
                self.x[j] += 1;
                self.q = (self.q + self.gx[j] + self.half[j]) % p;
                for i in 0..n {
                    self.gx[i] = (self.gx[i] + self.l.entry(i, j)).rem_euclid(p);
                }
                return true;
            }
            // x_j wraps from p−1 to 0; Q and Gx are unchanged mod p
            self.x[j] = 0;
            self.q = (self.q + self.gx[j] + self.half[j]) % p;
            for i in 0..n {
                self.gx[i] = (self.gx[i] + self.l.entry(i, j)).rem_euclid(p);
            }
        }
        false
    }
}

impl Iterator for IsotropicLines<'_> {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        while self.pivot < self.pivot_end {
            if self.fresh {
                self.fresh = false;
            } else if !self.advance() {
                self.pivot += 1;
                self.start_pivot();
                continue;
            }
            if self.q == 0 {
                return Some(self.x.clone());
            }
        }
        None
    }
}

/// All isotropic k-dimensional subspaces of (Λ/pΛ, Q mod p), each exactly once.
pub fn isotropic_subspaces<'a>(
    l: &'a Lattice,
    p: u64,
    k: usize,
) -> Result<Box<dyn Iterator<Item = IsotropicSubspace> + 'a>> {
    check_prime(l, p)?;
    let n = l.rank();
    if k == 0 || k > n / 2 {
        return Err(Error::InvalidArgument(format!("subspace dimension {k} out of range for rank {n}")));
    }
    if k == 1 {
        return Ok(Box::new(IsotropicLines::new(l, p)?.map(move |x| IsotropicSubspace { p, basis: vec![x] })));
    }
    let mut out = Vec::new();
    let pi = p as i64;
    let mut pivots: Vec<usize> = (0..k).collect();
    loop {
        let mut rows: Vec<Vec<i64>> = Vec::with_capacity(k);
        echelon_rows(l, pi, &pivots, &mut rows, &mut |rows| {
            out.push(IsotropicSubspace { p, basis: rows.to_vec() })
        });
        // next k-combination of 0..n
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(Box::new(out.into_iter()));
            }
            i -= 1;
            if pivots[i] < n - k + i {
                pivots[i] += 1;
                for j in i + 1..k {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
}

// Depth-first over the rows of reduced echelon matrices with the given pivots,
// keeping only isotropic and mutually orthogonal rows.
fn echelon_rows(
    l: &Lattice,
    p: i64,
    pivots: &[usize],
    rows: &mut Vec<Vec<i64>>,
    emit: &mut dyn FnMut(&[Vec<i64>]),
) {
    let i = rows.len();
    if i == pivots.len() {
        emit(rows);
        return;
    }
    let n = l.rank();
    let free: Vec<usize> = (pivots[i] + 1..n).filter(|j| !pivots.contains(j)).collect();
    let mut x = vec![0i64; n];
    x[pivots[i]] = 1;
    loop {
        if l.norm(&x).rem_euclid(p) == 0 && rows.iter().all(|y| l.inner(&x, y).rem_euclid(p) == 0) {
            rows.push(x.clone());
            echelon_rows(l, p, pivots, rows, emit);
            rows.pop();
        }
        let mut carried = true;
        for &j in free.iter().rev() {
            x[j] += 1;
            if x[j] < p {
                carried = false;
                break;
            }
            x[j] = 0;
        }
        if carried {
            return;
        }
    }
}

/// The neighbour attached to an isotropic subspace with the untwisted lift.
pub fn kneser_lift(l: &Lattice, s: &IsotropicSubspace) -> Result<NeighbourLattice> {
    let fresh = IsotropicSubspace::new(l, s.p, s.basis.clone())?;
    let data = LiftData::new(l, &fresh);
    Ok(data.neighbour(l, &fresh, &vec![0; skew_len(fresh.dim())]))
}

fn skew_len(k: usize) -> usize {
    k * (k.saturating_sub(1)) / 2
}

/// Every p^k-neighbour of Λ: each isotropic k-subspace has p^{k(k−1)/2}
/// neighbours, indexed by skew-symmetric k×k matrices mod p.
pub fn neighbours<'a>(
    l: &'a Lattice,
    p: u64,
    k: usize,
) -> Result<impl Iterator<Item = NeighbourLattice> + 'a> {
    let subspaces = isotropic_subspaces(l, p, k)?;
    Ok(subspaces.flat_map(move |s| neighbours_of_subspace(l, &s)))
}

/// All neighbours attached to one isotropic subspace.
pub fn neighbours_of_subspace(l: &Lattice, s: &IsotropicSubspace) -> Vec<NeighbourLattice> {
    let data = LiftData::new(l, s);
    let m = skew_len(s.dim());
    let p = s.p as i64;
    let mut twist = vec![0i64; m];
    let mut out = Vec::new();
    loop {
        out.push(data.neighbour(l, s, &twist));
        let mut carried = true;
        for t in twist.iter_mut() {
            *t += 1;
            if *t < p {
                carried = false;
                break;
            }
            *t = 0;
        }
        if carried {
            return out;
        }
    }
}

// Lifts x̃ᵢ ≡ xᵢ (mod p) with Q(x̃ᵢ) ≡ B(x̃ᵢ, x̃ⱼ) ≡ 0 (mod p²), and duals yⱼ
// with B(x̃ᵢ, yⱼ) ≡ δᵢⱼ (mod p).
struct LiftData {
    lifted: Vec<Vec<i64>>,
    duals: Vec<Vec<i64>>,
}

impl LiftData {
    fn new(l: &Lattice, s: &IsotropicSubspace) -> LiftData {
        let p = s.p as i64;
        let mut lifted: Vec<Vec<i64>> = Vec::new();
        for x in &s.basis {
            let mut rows: Vec<Vec<i64>> = lifted.iter().map(|y| reduce_vec(&l.apply(y), p)).collect();
            let mut rhs: Vec<i64> = lifted
                .iter()
                .map(|y| {
                    let b = l.inner(y, x);
                    debug_assert_eq!(b.rem_euclid(p), 0);
                    (-(b / p)).rem_euclid(p)
                })
                .collect();
            rows.push(reduce_vec(&l.apply(x), p));
            let q = l.norm(x);
            debug_assert_eq!(q.rem_euclid(p), 0);
            rhs.push((-(q / p)).rem_euclid(p));
            let z = solve_mod(&rows, &rhs, p).expect("functionals independent at a good prime");
            lifted.push(x.iter().zip(&z).map(|(a, b)| a + p * b).collect());
        }
        let f: Vec<Vec<i64>> = lifted.iter().map(|y| reduce_vec(&l.apply(y), p)).collect();
        let duals = (0..lifted.len())
            .map(|j| {
                let e: Vec<i64> = (0..lifted.len()).map(|i| i64::from(i == j)).collect();
                solve_mod(&f, &e, p).expect("functionals independent at a good prime")
            })
            .collect();
        LiftData { lifted, duals }
    }

    fn neighbour(&self, l: &Lattice, s: &IsotropicSubspace, twist: &[i64]) -> NeighbourLattice {
        let n = l.rank();
        let k = self.lifted.len();
        let p = s.p as i64;
        let mut gens: Vec<Vec<i64>> = self.lifted.clone();
        let mut t = 0;
        for i in 0..k {
            for j in i + 1..k {
                let a = twist[t];
                t += 1;
                for c in 0..n {
                    gens[i][c] += p * a * self.duals[j][c];
                    gens[j][c] -= p * a * self.duals[i][c];
                }
            }
        }
        let f: Vec<Vec<i64>> = gens.iter().map(|y| reduce_vec(&l.apply(y), p)).collect();
        // p·L_X where L_X = {y : B(x̂ᵢ, y) ≡ 0 mod p}
        let (ech, piv) = rref_mod(&f, p);
        let mut rows: Vec<Vec<i64>> = Vec::with_capacity(n + k);
        for &c in &piv {
            let mut v = vec![0; n];
            v[c] = p * p;
            rows.push(v);
        }
        for fcol in (0..n).filter(|c| !piv.contains(c)) {
            let mut v = vec![0; n];
            v[fcol] = p;
            for (r, &c) in piv.iter().enumerate() {
                v[c] = p * (-ech[r][fcol]).rem_euclid(p);
            }
            rows.push(v);
        }
        rows.extend(gens.iter().map(|g| g.iter().map(|x| x.rem_euclid(p * p)).collect()));
        let h = hnf_rows(&rows);
        assert_eq!(h.len(), n);
        let det: i128 = (0..n).map(|i| h[i][i] as i128).product();
        assert_eq!(det, (p as i128).pow(n as u32), "neighbour has the parent's covolume");
        let m = IntMatrix::from_fn(n, n, |r, c| h[c][r]);
        let raw = l.transform(&m);
        let p2 = p * p;
        let gram: Vec<Vec<i64>> = raw
            .gram_rows()
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|x| {
                        assert_eq!(x % p2, 0, "neighbour is integral");
                        x / p2
                    })
                    .collect()
            })
            .collect();
        let pi_lat = Lattice::new(gram).expect("neighbour is an even positive definite lattice");
        let red = lll_reduce(&pi_lat);
        NeighbourLattice {
            lattice: red.lattice,
            basis: &m * &red.transform,
            parent: l.clone(),
            p: s.p,
            subspace: s.clone(),
        }
    }
}

fn reduce_vec(v: &[i64], p: i64) -> Vec<i64> {
    v.iter().map(|x| x.rem_euclid(p)).collect()
}

pub(crate) fn inv_mod(a: i64, p: i64) -> i64 {
    let (mut r0, mut r1, mut s0, mut s1) = (a.rem_euclid(p), p, 1i64, 0i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1);
    s0.rem_euclid(p)
}

/// Reduced row echelon form over F_p and the pivot columns.
pub(crate) fn rref_mod(rows: &[Vec<i64>], p: i64) -> (Vec<Vec<i64>>, Vec<usize>) {
    let mut a: Vec<Vec<i64>> = rows.iter().map(|r| reduce_vec(r, p)).collect();
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        let Some(s) = (r..m).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, s);
        let inv = inv_mod(a[r][c], p);
        for x in a[r].iter_mut() {
            *x = (*x * inv) % p;
        }
        for i in 0..m {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for j in 0..n {
                    a[i][j] = (a[i][j] - f * a[r][j]).rem_euclid(p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

// A solution of rows·z ≡ rhs (mod p), free variables set to zero.
fn solve_mod(rows: &[Vec<i64>], rhs: &[i64], p: i64) -> Option<Vec<i64>> {
    let n = rows.first()?.len();
    let aug: Vec<Vec<i64>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, &b)| {
            let mut v = r.clone();
            v.push(b);
            v
        })
        .collect();
    let (ech, piv) = rref_mod(&aug, p);
    if piv.contains(&n) {
        return None;
    }
    let mut z = vec![0; n];
    for (r, &c) in piv.iter().enumerate() {
        z[c] = ech[r][n];
    }
    Some(z)
}

/// Number of isotropic k-subspaces of a nondegenerate quadratic space of even
/// dimension n over F_p whose discriminant character at p is `eps`.
pub fn isotropic_subspace_count(n: usize, eps: i32, p: u64, k: usize) -> Integer {
    let m = (n / 2) as u32;
    let pb = BigInt::from(p);
    let e = BigInt::from(eps);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k as u32 {
        num *= (pb.pow(m - i) - &e) * (pb.pow(m - i - 1) + &e);
        den *= pb.pow(i + 1) - 1;
    }
    num / den
}

fn check_even_good(n: usize, d: i64, p: u64) -> Result<i32> {
    if !n.is_multiple_of(2) {
        return Err(Error::InvalidArgument("closed form needs even rank".into()));
    }
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    if d % p as i64 == 0 {
        return Err(Error::BadPrime { p, disc: d });
    }
    let dstar = if (n / 2).is_multiple_of(2) { d } else { -d };
    Ok(kronecker_i64(dstar, p as i64))
}

/// N_{p,1} = Σ_{i=0}^{n−2} pⁱ + χ_{D*}(p)·p^{n/2−1}.
pub fn neighbour_count_k1(n: usize, d: i64, p: u64) -> Result<Integer> {
    let chi = check_even_good(n, d, p)?;
    let pb = BigInt::from(p);
    let mut s = BigInt::zero();
    for i in 0..=(n - 2) as u32 {
        s += pb.pow(i);
    }
    Ok(s + BigInt::from(chi) * pb.pow((n / 2 - 1) as u32))
}

/// Total number of p^k-neighbours of any lattice of rank n and discriminant D.
pub fn neighbour_count(n: usize, d: i64, p: u64, k: usize) -> Result<Integer> {
    let chi = check_even_good(n, d, p)?;
    if k == 0 || k > n / 2 {
        return Err(Error::InvalidArgument(format!("k = {k} out of range")));
    }
    Ok(isotropic_subspace_count(n, chi, p, k) * BigInt::from(p).pow(skew_len(k) as u32))
}

/// One orbit of isotropic lines under a group of automorphisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineOrbit {
    pub representative: Vec<i64>,
    pub size: u64,
}

const ORBIT_LINE_LIMIT: u64 = 60_000_000;

/// Orbits of the group generated by `gens` (automorphisms of Λ in its own
/// coordinates) on the isotropic lines of Λ/pΛ, by union-find over the lines.
/// Representatives are the smallest lines in the enumeration key order.
pub fn isotropic_line_orbits(l: &Lattice, p: u64, gens: &[IntMatrix]) -> Result<Vec<LineOrbit>> {
    use rayon::prelude::*;
    let n = l.rank();
    let too_big = Error::ResourceCap {
        what: "isotropic line table",
        limit: ORBIT_LINE_LIMIT,
    };
    match p.checked_pow(n as u32) {
        Some(v) if v < u64::MAX / 2 => {}
        _ => return Err(too_big),
    }
    let pi = p as i64;
    let encode = |x: &[i64]| x.iter().rev().fold(0u64, |acc, &d| acc * p + d as u64);
    let mut keys: Vec<u64> = Vec::new();
    for x in IsotropicLines::new(l, p)? {
        keys.push(encode(&x));
        if keys.len() as u64 > ORBIT_LINE_LIMIT {
            return Err(too_big);
        }
    }
    keys.sort_unstable();
    let decode = |mut k: u64| -> Vec<i64> {
        (0..n)
            .map(|_| {
                let d = (k % p) as i64;
                k /= p;
                d
            })
            .collect()
    };
    let gmod: Vec<Vec<i64>> = gens
        .iter()
        .map(|g| (0..n * n).map(|i| g.get(i / n, i % n).rem_euclid(pi)).collect())
        .collect();
    let image = |x: &[i64], g: &[i64]| -> u64 {
        let mut y: Vec<i64> = (0..n)
            .map(|r| (0..n).map(|c| g[r * n + c] * x[c]).sum::<i64>().rem_euclid(pi))
            .collect();
        let lead = *y.iter().find(|&&v| v != 0).expect("automorphisms are invertible mod p");
        let inv = inv_mod(lead, pi);
        for v in y.iter_mut() {
            *v = (*v * inv) % pi;
        }
        encode(&y)
    };
    let mut parent: Vec<u32> = (0..keys.len() as u32).collect();
    fn find(parent: &mut [u32], mut i: u32) -> u32 {
        while parent[i as usize] != i {
            let up = parent[parent[i as usize] as usize];
            parent[i as usize] = up;
            i = up;
        }
        i
    }
    const CHUNK: usize = 1 << 18;
    for start in (0..keys.len()).step_by(CHUNK) {
        let end = (start + CHUNK).min(keys.len());
        let images: Vec<u32> = (start..end)
            .into_par_iter()
            .flat_map_iter(|i| {
                let x = decode(keys[i]);
                gmod.iter()
                    .map(|g| keys.binary_search(&image(&x, g)).expect("image of an isotropic line") as u32)
                    .collect::<Vec<_>>()
            })
            .collect();
        for (off, chunk) in images.chunks(gmod.len().max(1)).enumerate() {
            let i = (start + off) as u32;
            for &j in chunk {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                    parent[hi as usize] = lo;
                }
            }
        }
    }
    let mut sizes: Vec<u64> = vec![0; keys.len()];
    for i in 0..keys.len() as u32 {
        let r = find(&mut parent, i);
        sizes[r as usize] += 1;
    }
    Ok(sizes
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > 0)
        .map(|(i, &s)| LineOrbit {
            representative: decode(keys[i]),
            size: s,
        })
        .collect())
}
