use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::poly::IntPolynomial;
use crate::error::{Error, Result};
use crate::Integer;

/// Complete factorization `content · ∏ fᵢ^eᵢ` over the integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub content: Integer,
    pub factors: Vec<(IntPolynomial, u32)>,
}

impl Factorization {
    pub fn expand(&self) -> IntPolynomial {
        self.factors.iter().fold(
            IntPolynomial::new(vec![self.content.clone()]),
            |acc, (f, e)| acc.mul(&f.pow(*e)),
        )
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self
            .factors
            .iter()
            .flat_map(|(f, e)| std::iter::repeat_n(f.degree().unwrap_or(0), *e as usize))
            .collect();
        d.sort_unstable();
        d
    }
}

/// Factor a nonzero integer polynomial into irreducibles over the rationals.
///
/// Factors are primitive with positive leading coefficient, sorted by degree and
/// then lexicographically on their coefficients.
pub fn factor_int_poly(f: &IntPolynomial) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut content = f.content();
    if f.leading().is_negative() {
        content = -content;
    }
    let prim = f.primitive_part();
    let mut factors: Vec<(IntPolynomial, u32)> = Vec::new();
    for (part, mult) in squarefree_decomposition(&prim) {
        let mut g = part;
        // Powers of T are split off before the modular machinery.
        while g.coeff(0).is_zero() && g.degree() > Some(0) {
            factors.push((IntPolynomial::from_i64(&[0, 1]), mult));
            g = IntPolynomial::new(g.coeffs()[1..].to_vec());
        }
        for h in factor_squarefree(&g) {
            factors.push((h, mult));
        }
    }
    factors.retain(|(f, _)| f.degree() > Some(0));
    factors.sort_by(|(a, _), (b, _)| {
        a.degree()
            .cmp(&b.degree())
            .then_with(|| a.coeffs().cmp(b.coeffs()))
    });
    // merge identical factors coming from different squarefree layers
    let mut merged: Vec<(IntPolynomial, u32)> = Vec::new();
    for (f, e) in factors {
        match merged.last_mut() {
            Some((g, m)) if *g == f => *m += e,
            _ => merged.push((f, e)),
        }
    }
    Ok(Factorization {
        content,
        factors: merged,
    })
}

/// Yun's algorithm on a primitive polynomial: pairs (squarefree part, multiplicity).
pub fn squarefree_decomposition(f: &IntPolynomial) -> Vec<(IntPolynomial, u32)> {
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.div_exact(&a0).expect("gcd divides").primitive_part();
    let mut c = df.div_exact(&a0).unwrap_or_else(|| {
        // derivative quotient may need rational scaling; fall back to pseudo division
        pseudo_quotient(&df, &a0)
    });
    let mut d = c.sub(&b.derivative());
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = b.gcd(&d);
        if a.degree().unwrap_or(0) > 0 {
            out.push((a.clone(), i));
        }
        b = pseudo_quotient(&b, &a);
        c = pseudo_quotient(&d, &a);
        d = c.sub(&b.derivative());
        i += 1;
    }
    out
}

// Quotient in Q[T] scaled back to a primitive integer polynomial when it is not integral.
fn pseudo_quotient(f: &IntPolynomial, d: &IntPolynomial) -> IntPolynomial {
    if let Some(q) = f.div_exact(d) {
        return q;
    }
    let dd = d.degree().expect("nonzero");
    let df = f.degree().unwrap_or(0);
    let scale = d.leading().pow((df + 1 - dd) as u32);
    f.scale(&scale).div_exact(d).expect("pseudo division is exact")
}

fn factor_squarefree(f: &IntPolynomial) -> Vec<IntPolynomial> {
    let f = f.primitive_part();
    match f.degree() {
        None | Some(0) => return Vec::new(),
        Some(1) => return vec![f],
        _ => {}
    }
    let p = choose_prime(&f);
    let modular = factor_mod_p(&to_mod(&f, p), p);
    if modular.len() <= 1 {
        return vec![f];
    }
    let bound = coefficient_bound(&f);
    let mut k = 1u32;
    let mut modulus = BigInt::from(p);
    while modulus <= bound {
        modulus *= p;
        k += 1;
    }
    let lifted = hensel_lift(&f, &modular, p, k);
    recombine(&f, lifted, &modulus)
}

// Bound on coefficients of any factor, times the leading coefficient, doubled.
fn coefficient_bound(f: &IntPolynomial) -> BigInt {
    let n = f.degree().unwrap_or(0);
    let norm_sq: BigInt = f.coeffs().iter().map(|c| c * c).sum();
    let norm = norm_sq.sqrt() + BigInt::one();
    let lc = f.leading().abs();
    (BigInt::one() << (n + 1)) * norm * lc
}

const SMALL_PRIMES: [u64; 24] = [
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

// Among the first few admissible primes pick the one with the fewest modular factors.
fn choose_prime(f: &IntPolynomial) -> u64 {
    let lc = f.leading();
    let mut best: Option<(usize, u64)> = None;
    let mut tried = 0;
    for &p in SMALL_PRIMES.iter().chain(LARGER_PRIMES.iter()) {
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = to_mod(f, p);
        let d = deriv_mod(&fp, p);
        if gcd_mod(&fp, &d, p).len() != 1 {
            continue;
        }
        let count = factor_mod_p(&fp, p).len();
        if best.is_none_or(|(c, _)| count < c) {
            best = Some((count, p));
        }
        tried += 1;
        if tried >= 5 {
            break;
        }
    }
    best.expect("a squarefree polynomial is squarefree modulo some small prime").1
}

const LARGER_PRIMES: [u64; 12] = [
    101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157,
];

// ---------- arithmetic in F_p[T], coefficients low degree first ----------

type ModPoly = Vec<u64>;

fn trim_mod(a: &mut ModPoly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn to_mod(f: &IntPolynomial, p: u64) -> ModPoly {
    let pb = BigInt::from(p);
    let mut v: ModPoly = f
        .coeffs()
        .iter()
        .map(|c| c.mod_floor(&pb).to_u64().expect("reduced"))
        .collect();
    trim_mod(&mut v);
    v
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

fn deriv_mod(a: &ModPoly, p: u64) -> ModPoly {
    let mut d: ModPoly = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| (i as u64 % p) * c % p)
        .collect();
    trim_mod(&mut d);
    d
}

fn sub_mod(a: &ModPoly, b: &ModPoly, p: u64) -> ModPoly {
    let n = a.len().max(b.len());
    let mut out: ModPoly = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim_mod(&mut out);
    out
}

fn mul_mod(a: &ModPoly, b: &ModPoly, p: u64) -> ModPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim_mod(&mut out);
    out
}

fn divrem_mod(a: &ModPoly, b: &ModPoly, p: u64) -> (ModPoly, ModPoly) {
    let db = b.len() - 1;
    let mut r = a.clone();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let inv = inv_mod(b[db], p);
    let mut q = vec![0u64; r.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db] * inv % p;
        q[k] = c;
        if c == 0 {
            continue;
        }
        for (i, &bi) in b.iter().enumerate() {
            r[k + i] = (r[k + i] + p - c * bi % p) % p;
        }
    }
    trim_mod(&mut r);
    trim_mod(&mut q);
    (q, r)
}

fn monic_mod(a: &ModPoly, p: u64) -> ModPoly {
    let inv = inv_mod(*a.last().expect("nonzero"), p);
    a.iter().map(|&c| c * inv % p).collect()
}

fn gcd_mod(a: &ModPoly, b: &ModPoly, p: u64) -> ModPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = divrem_mod(&a, &b, p).1;
        a = b;
        b = r;
    }
    if a.is_empty() {
        a
    } else {
        monic_mod(&a, p)
    }
}

/// Extended gcd for coprime inputs: (s, t) with s·a + t·b = 1.
fn xgcd_mod(a: &ModPoly, b: &ModPoly, p: u64) -> (ModPoly, ModPoly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1): (ModPoly, ModPoly) = (vec![1], Vec::new());
    let (mut t0, mut t1): (ModPoly, ModPoly) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (q, r) = divrem_mod(&r0, &r1, p);
        r0 = std::mem::replace(&mut r1, r);
        let s = sub_mod(&s0, &mul_mod(&q, &s1, p), p);
        s0 = std::mem::replace(&mut s1, s);
        let t = sub_mod(&t0, &mul_mod(&q, &t1, p), p);
        t0 = std::mem::replace(&mut t1, t);
    }
    let inv = inv_mod(r0[0], p);
    let scale = |v: &ModPoly| -> ModPoly { v.iter().map(|&c| c * inv % p).collect() };
    (scale(&s0), scale(&t0))
}

fn powmod_poly(base: &ModPoly, mut e: u128, m: &ModPoly, p: u64) -> ModPoly {
    let mut result: ModPoly = vec![1];
    let mut b = divrem_mod(base, m, p).1;
    while e > 0 {
        if e & 1 == 1 {
            result = divrem_mod(&mul_mod(&result, &b, p), m, p).1;
        }
        b = divrem_mod(&mul_mod(&b, &b, p), m, p).1;
        e >>= 1;
    }
    result
}

// Full factorization of a squarefree polynomial modulo an odd prime into monic irreducibles.
fn factor_mod_p(f: &ModPoly, p: u64) -> Vec<ModPoly> {
    let f = monic_mod(f, p);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let x: ModPoly = vec![0, 1];
    let mut h = x.clone();
    let mut d = 0usize;
    while rest.len() > 1 {
        d += 1;
        if 2 * d > rest.len() - 1 {
            out.push(rest.clone());
            break;
        }
        h = powmod_poly(&h, p as u128, &rest, p);
        let g = gcd_mod(&sub_mod(&h, &x, p), &rest, p);
        if g.len() > 1 {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ (d as u64) ^ (p << 8));
            equal_degree(&g, d, p, &mut rng, &mut out);
            rest = divrem_mod(&rest, &g, p).0;
            h = divrem_mod(&h, &rest, p).1;
        }
    }
    out.sort();
    out
}

fn equal_degree(f: &ModPoly, d: usize, p: u64, rng: &mut ChaCha8Rng, out: &mut Vec<ModPoly>) {
    let n = f.len() - 1;
    if n == d {
        out.push(f.clone());
        return;
    }
    let exponent = (pow_u128(p, d) - 1) / 2;
    loop {
        let a: ModPoly = {
            let mut v: ModPoly = (0..n).map(|_| rng.gen_range(0..p)).collect();
            trim_mod(&mut v);
            v
        };
        if a.len() < 2 {
            continue;
        }
        let b = powmod_poly(&a, exponent, f, p);
        let g = gcd_mod(&sub_mod(&b, &vec![1], p), f, p);
        if g.len() > 1 && g.len() < f.len() {
            let q = monic_mod(&divrem_mod(f, &g, p).0, p);
            equal_degree(&g, d, p, rng, out);
            equal_degree(&q, d, p, rng, out);
            return;
        }
    }
}

fn pow_u128(p: u64, d: usize) -> u128 {
    (0..d).fold(1u128, |acc, _| acc * p as u128)
}

// ---------- Hensel lifting over Z / p^k ----------

type BigPoly = Vec<BigInt>;

fn big_trim(a: &mut BigPoly) {
    while a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
}

fn big_reduce(a: &BigPoly, m: &BigInt) -> BigPoly {
    let mut v: BigPoly = a.iter().map(|c| c.mod_floor(m)).collect();
    big_trim(&mut v);
    v
}

fn big_mul(a: &BigPoly, b: &BigPoly, m: &BigInt) -> BigPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    big_reduce(&out, m)
}

fn big_add(a: &BigPoly, b: &BigPoly, m: &BigInt) -> BigPoly {
    let n = a.len().max(b.len());
    let v: BigPoly = (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_default() + b.get(i).cloned().unwrap_or_default())
        .collect();
    big_reduce(&v, m)
}

fn big_sub(a: &BigPoly, b: &BigPoly, m: &BigInt) -> BigPoly {
    let n = a.len().max(b.len());
    let v: BigPoly = (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default())
        .collect();
    big_reduce(&v, m)
}

// Division by a monic polynomial modulo m.
fn big_divrem_monic(a: &BigPoly, b: &BigPoly, m: &BigInt) -> (BigPoly, BigPoly) {
    let db = b.len() - 1;
    let mut r = a.clone();
    if r.len() <= db {
        return (Vec::new(), big_reduce(&r, m));
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db].mod_floor(m);
        if c.is_zero() {
            continue;
        }
        for (i, bi) in b.iter().enumerate() {
            r[k + i] -= &c * bi;
        }
        q[k] = c;
    }
    (big_reduce(&q, m), big_reduce(&r, m))
}

fn from_mod(a: &ModPoly) -> BigPoly {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

/// Lift monic modular factors of `f` (leading coefficient divided out) to modulus p^k.
fn hensel_lift(f: &IntPolynomial, factors: &[ModPoly], p: u64, k: u32) -> Vec<BigPoly> {
    let modulus = BigInt::from(p).pow(k);
    let lc_inv = f
        .leading()
        .modinv(&modulus)
        .expect("leading coefficient is a unit");
    let target: BigPoly = big_reduce(
        &f.coeffs().iter().map(|c| c * &lc_inv).collect(),
        &modulus,
    );
    lift_tree(&target, factors, p, k)
}

fn lift_tree(target: &BigPoly, factors: &[ModPoly], p: u64, k: u32) -> Vec<BigPoly> {
    if factors.len() == 1 {
        return vec![target.clone()];
    }
    let mid = factors.len() / 2;
    let g0 = factors[..mid]
        .iter()
        .fold(vec![1u64], |acc, f| mul_mod(&acc, f, p));
    let h0 = factors[mid..]
        .iter()
        .fold(vec![1u64], |acc, f| mul_mod(&acc, f, p));
    let (g, h) = lift_pair(target, &g0, &h0, p, k);
    let mut out = lift_tree(&g, &factors[..mid], p, k);
    out.extend(lift_tree(&h, &factors[mid..], p, k));
    out
}

// Quadratic lifting of f ≡ g·h with g, h monic, until the modulus reaches p^k.
fn lift_pair(f: &BigPoly, g0: &ModPoly, h0: &ModPoly, p: u64, k: u32) -> (BigPoly, BigPoly) {
    let (s0, t0) = xgcd_mod(g0, h0, p);
    let (mut g, mut h, mut s, mut t) = (from_mod(g0), from_mod(h0), from_mod(&s0), from_mod(&t0));
    let target = BigInt::from(p).pow(k);
    let mut m = BigInt::from(p);
    while m < target {
        let m2 = (&m * &m).min(target.clone());
        let e = big_sub(&big_reduce(f, &m2), &big_mul(&g, &h, &m2), &m2);
        let (q, r) = big_divrem_monic(&big_mul(&s, &e, &m2), &h, &m2);
        let g_new = big_add(&big_add(&g, &big_mul(&t, &e, &m2), &m2), &big_mul(&q, &g, &m2), &m2);
        let h_new = big_add(&h, &r, &m2);
        let b = big_sub(
            &big_add(&big_mul(&s, &g_new, &m2), &big_mul(&t, &h_new, &m2), &m2),
            &vec![BigInt::one()],
            &m2,
        );
        let (c, d) = big_divrem_monic(&big_mul(&s, &b, &m2), &h_new, &m2);
        s = big_sub(&s, &d, &m2);
        t = big_sub(
            &big_sub(&t, &big_mul(&t, &b, &m2), &m2),
            &big_mul(&c, &g_new, &m2),
            &m2,
        );
        g = g_new;
        h = h_new;
        m = m2;
    }
    (g, h)
}

// ---------- recombination ----------

fn symmetric(a: &BigPoly, m: &BigInt) -> IntPolynomial {
    let half = m / 2;
    IntPolynomial::new(
        a.iter()
            .map(|c| {
                let c = c.mod_floor(m);
                if c > half {
                    c - m
                } else {
                    c
                }
            })
            .collect(),
    )
}

fn recombine(f: &IntPolynomial, mut lifted: Vec<BigPoly>, modulus: &BigInt) -> Vec<IntPolynomial> {
    let mut result = Vec::new();
    let mut f = f.clone();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut found = false;
        for subset in subsets(lifted.len(), size) {
            let lc = f.leading();
            let prod = subset.iter().fold(vec![lc.clone()], |acc, &i| {
                big_mul(&acc, &lifted[i], modulus)
            });
            let cand = symmetric(&prod, modulus).primitive_part();
            if let Some(q) = f.div_exact(&cand) {
                result.push(cand);
                f = q.primitive_part();
                let keep: Vec<BigPoly> = lifted
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, v)| v.clone())
                    .collect();
                lifted = keep;
                found = true;
                break;
            }
        }
        if !found {
            size += 1;
        }
    }
    if f.degree().unwrap_or(0) > 0 {
        result.push(f.primitive_part());
    }
    result
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Roots of `f` modulo a prime `q`, ascending; used for congruence checks.
pub fn roots_mod_prime(f: &IntPolynomial, q: u64) -> Vec<u64> {
    let fp = to_mod(f, q);
    if fp.is_empty() {
        return (0..q).collect();
    }
    (0..q)
        .filter(|&x| {
            fp.iter()
                .rev()
                .fold(0u64, |acc, &c| (acc * x + c) % q)
                == 0
        })
        .collect()
}
