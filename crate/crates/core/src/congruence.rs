//! Congruences between the Hecke eigenvalue systems of rational eigenforms.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{kronecker_i64, primitive_integer_vector, roots_mod_prime, IntPolynomial};
use crate::hecke::Eigenform;
use crate::moddata::ApTable;
use crate::neighbour::is_prime;
use crate::textual;
use crate::{Integer, Rational};

/// λ_{p,k} indexed by (p, k).
pub type LambdaTable = BTreeMap<(u64, usize), Integer>;

/// Integral eigenvalues of an eigenform. Non-integral values are skipped.
pub fn lambda_table(f: &Eigenform) -> LambdaTable {
    f.eigenvalues
        .iter()
        .filter(|e| e.value.is_integer())
        .map(|e| ((e.p, e.k), e.value.to_integer()))
        .collect()
}

/// Integer vector with content 1 and positive leading entry.
pub fn normalize_primitive(v: &[Rational]) -> Result<Vec<Integer>> {
    primitive_integer_vector(v).ok_or_else(|| Error::InvalidArgument("zero vector".into()))
}

/// Smallest modulus not flagged small in a rank-n genus.
pub fn default_threshold(n: usize) -> u64 {
    2 * n as u64 + 1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Modulus {
    #[serde(with = "textual::integer")]
    pub q: Integer,
    pub prime: bool,
    /// q ≤ threshold.
    pub small: bool,
    /// Every (p, k) at which λ ≡ λ′ (mod q) was checked directly.
    pub verified: Vec<(u64, usize)>,
    /// (a, b) with a·f₁ + b·f₂ ≡ 0 (mod q), when eigenvectors were supplied.
    pub witness: Option<(u64, u64)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceReport {
    pub forms: (String, String),
    pub threshold: u64,
    pub common: Vec<(u64, usize)>,
    #[serde(with = "textual::integer")]
    pub gcd: Integer,
    /// The tables agree everywhere, so every modulus divides the differences.
    pub degenerate: bool,
    pub moduli: Vec<Modulus>,
}

impl CongruenceReport {
    /// Moduli above the threshold.
    pub fn candidates(&self) -> impl Iterator<Item = &Modulus> {
        self.moduli.iter().filter(|m| !m.small)
    }

    pub fn modulus(&self, q: u64) -> Option<&Modulus> {
        self.moduli.iter().find(|m| m.q == BigInt::from(q))
    }

    /// Search for vector witnesses at every prime modulus. Fails if a witness
    /// with both coefficients invertible exists but some listed eigenvalue
    /// pair is not congruent.
    pub fn attach_witnesses(&mut self, f1: &[Integer], f2: &[Integer], t1: &LambdaTable, t2: &LambdaTable) -> Result<()> {
        for m in &mut self.moduli {
            let Some(q) = m.q.to_u64().filter(|_| m.prime) else { continue };
            m.witness = vector_congruence(f1, f2, q)?;
            if let Some((a, b)) = m.witness {
                if a != 0 && b != 0 {
                    let bad = incongruent_pairs(t1, t2, &m.q);
                    if !bad.is_empty() {
                        return Err(Error::InvalidArgument(format!(
                            "witness ({a}, {b}) mod {q} but eigenvalues differ at {bad:?}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

fn incongruent_pairs(t1: &LambdaTable, t2: &LambdaTable, q: &Integer) -> Vec<(u64, usize)> {
    t1.iter()
        .filter_map(|(key, a)| t2.get(key).map(|b| (key, a - b)))
        .filter(|(_, d)| !(d % q).is_zero())
        .map(|(key, _)| *key)
        .collect()
}

// prime factorization by trial division; a cofactor beyond the search limit is
// returned as one factor
fn factorize(n: &Integer) -> Vec<(Integer, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::from(2u32);
    let limit = BigInt::from(10_000_000u64);
    while &d * &d <= n && d < limit {
        let mut e = 0;
        while (&n % &d).is_zero() {
            n /= &d;
            e += 1;
        }
        if e > 0 {
            out.push((d.clone(), e));
        }
        d += 1;
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

fn divisors(n: &Integer) -> Vec<Integer> {
    let mut ds = vec![BigInt::one()];
    for (p, e) in factorize(n) {
        let mut next = Vec::new();
        for d in &ds {
            let mut x = d.clone();
            for _ in 0..=e {
                next.push(x.clone());
                x *= &p;
            }
        }
        ds = next;
    }
    ds.sort();
    ds
}

fn probably_prime(q: &Integer) -> bool {
    match q.to_u64() {
        Some(q) => is_prime(q),
        None => factorize(q).len() == 1 && factorize(q)[0].1 == 1,
    }
}

/// Moduli q > 1 dividing λ_{p,k} − λ′_{p,k} at every common (p, k).
pub fn eigenvalue_congruences(
    forms: (&str, &str),
    t1: &LambdaTable,
    t2: &LambdaTable,
    threshold: u64,
) -> Result<CongruenceReport> {
    let common: Vec<(u64, usize)> = t1.keys().filter(|k| t2.contains_key(k)).copied().collect();
    if common.is_empty() {
        return Err(Error::InvalidArgument("the tables share no (p, k)".into()));
    }
    let gcd = common.iter().fold(BigInt::zero(), |g, key| g.gcd(&(&t1[key] - &t2[key])));
    let mut moduli = Vec::new();
    if !gcd.is_zero() {
        for q in divisors(&gcd).into_iter().filter(|q| q > &BigInt::one()) {
            let verified: Vec<(u64, usize)> = common
                .iter()
                .filter(|key| ((&t1[*key] - &t2[*key]) % &q).is_zero())
                .copied()
                .collect();
            if verified.len() != common.len() {
                return Err(Error::InvalidArgument(format!("modulus {q} failed re-verification")));
            }
            moduli.push(Modulus {
                prime: probably_prime(&q),
                small: q <= BigInt::from(threshold),
                q,
                verified,
                witness: None,
            });
        }
    }
    Ok(CongruenceReport {
        forms: (forms.0.to_string(), forms.1.to_string()),
        threshold,
        common,
        degenerate: gcd.is_zero(),
        gcd,
        moduli,
    })
}

fn residue(x: &Integer, q: u64) -> u64 {
    x.mod_floor(&BigInt::from(q)).to_u64().expect("reduced")
}

fn inverse(a: u64, q: u64) -> u64 {
    let e = BigInt::from(a).modpow(&BigInt::from(q - 2), &BigInt::from(q));
    e.to_u64().expect("reduced")
}

/// Nonzero (a, b) mod q with a·f₁ + b·f₂ ≡ 0 (mod q), normalized so that the
/// last nonzero coordinate is 1, or `None` when the reductions are independent.
pub fn vector_congruence(f1: &[Integer], f2: &[Integer], q: u64) -> Result<Option<(u64, u64)>> {
    if !is_prime(q) {
        return Err(Error::InvalidArgument(format!("{q} is not prime")));
    }
    if f1.len() != f2.len() {
        return Err(Error::InvalidArgument("vectors of different lengths".into()));
    }
    let r1: Vec<u64> = f1.iter().map(|x| residue(x, q)).collect();
    let r2: Vec<u64> = f2.iter().map(|x| residue(x, q)).collect();
    if r2.iter().all(|&x| x == 0) {
        return Ok(Some((0, 1)));
    }
    let i = r2.iter().position(|&x| x != 0).expect("nonzero");
    if r1[i] == 0 {
        return Ok(r1.iter().all(|&x| x == 0).then_some((1, 0)));
    }
    let a = (q - r2[i]) * inverse(r1[i], q) % q;
    let ok = r1
        .iter()
        .zip(&r2)
        .all(|(&x, &y)| (a as u128 * x as u128 + y as u128).is_multiple_of(q as u128));
    Ok(ok.then_some((a, 1)))
}

/// Common roots of f and g modulo the prime q.
pub fn common_roots_mod(f: &IntPolynomial, g: &IntPolynomial, q: u64) -> Result<Vec<u64>> {
    if !is_prime(q) {
        return Err(Error::InvalidArgument(format!("{q} is not prime")));
    }
    let rg = roots_mod_prime(g, q);
    Ok(roots_mod_prime(f, q).into_iter().filter(|r| rg.contains(r)).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureRow {
    pub p: u64,
    #[serde(with = "textual::integer")]
    pub b: Integer,
    #[serde(with = "textual::integer")]
    pub predicted: Integer,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub table: String,
    #[serde(with = "textual::integer")]
    pub q: Integer,
    pub j: u32,
    pub k: u32,
    pub rows: Vec<ConjectureRow>,
}

impl ConjectureReport {
    pub fn all_hold(&self) -> bool {
        self.rows.iter().all(|r| r.holds)
    }
}

/// Compare b_{1,p²} with a_p² − χ(p)p^{j+k−1} − p^{j+2k−5} + p^{j+2k−3} + p^{j+1}
/// modulo q at every prime present in both inputs. χ is the Kronecker symbol
/// of `chi_disc`.
pub fn conjecture_check(
    table: &ApTable,
    b: &BTreeMap<u64, Integer>,
    j: u32,
    k: u32,
    chi_disc: i64,
    q: &Integer,
) -> Result<ConjectureReport> {
    if j + 2 * k < 5 || j + k < 1 {
        return Err(Error::InvalidArgument(format!("negative exponent for j = {j}, k = {k}")));
    }
    let mut rows = Vec::new();
    for (&p, bp) in b {
        let Ok(a2) = table.ap_squared(p) else { continue };
        let pb = BigInt::from(p);
        let chi = kronecker_i64(chi_disc, p as i64);
        let predicted = a2 - BigInt::from(chi) * pb.pow(j + k - 1) - pb.pow(j + 2 * k - 5)
            + pb.pow(j + 2 * k - 3)
            + pb.pow(j + 1);
        rows.push(ConjectureRow {
            p,
            b: bp.clone(),
            holds: ((bp - &predicted) % q).is_zero(),
            predicted,
        });
    }
    Ok(ConjectureReport {
        table: table.label.clone(),
        q: q.clone(),
        j,
        k,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational;
    use crate::moddata::parse_ap_table;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn table(rows: &[(u64, usize, i64)]) -> LambdaTable {
        rows.iter().map(|&(p, k, l)| ((p, k), BigInt::from(l))).collect()
    }

    #[test]
    fn normalization() {
        assert_eq!(normalize_primitive(&[rational(405, 2), rational(-143, 1)]).unwrap(), ints(&[405, -286]));
        assert_eq!(normalize_primitive(&[rational(6, 1), rational(-5, 1)]).unwrap(), ints(&[6, -5]));
        assert_eq!(normalize_primitive(&[rational(-2, 1), rational(2, 1)]).unwrap(), ints(&[1, -1]));
        assert!(normalize_primitive(&[rational(0, 1)]).is_err());
    }

    #[test]
    fn rank16_moduli() {
        let eis = table(&[(2, 1, 32895)]);
        let cusp = table(&[(2, 1, 1800)]);
        let r = eigenvalue_congruences(("E", "phi"), &eis, &cusp, 100).unwrap();
        assert_eq!(r.gcd, BigInt::from(31095));
        let qs: Vec<i64> = r.candidates().map(|m| m.q.to_i64().unwrap()).collect();
        assert_eq!(qs, vec![691, 2073, 3455, 6219, 10365, 31095]);
        assert!(r.modulus(691).unwrap().prime);
        assert!(r.modulus(45).unwrap().small);
        let eis = table(&[(2, 1, 32895), (3, 1, 7176640)]);
        let cusp = table(&[(2, 1, 1800), (3, 1, 100800)]);
        let mut r = eigenvalue_congruences(("E", "phi"), &eis, &cusp, 100).unwrap();
        assert!(r.candidates().any(|m| m.q == BigInt::from(691)));
        r.attach_witnesses(&ints(&[1, 1]), &ints(&[405, -286]), &eis, &cusp).unwrap();
        assert_eq!(r.modulus(691).unwrap().witness, Some((286, 1)));
    }

    #[test]
    fn trivial_tables() {
        let t = table(&[(2, 1, 5), (3, 1, 7)]);
        let r = eigenvalue_congruences(("a", "b"), &t, &t, 10).unwrap();
        assert!(r.degenerate && r.moduli.is_empty());
        let u = table(&[(2, 1, 6), (3, 1, 7)]);
        let r = eigenvalue_congruences(("a", "b"), &t, &u, 10).unwrap();
        assert!(!r.degenerate && r.moduli.is_empty());
        assert!(eigenvalue_congruences(("a", "b"), &t, &table(&[(5, 1, 0)]), 10).is_err());
    }

    #[test]
    fn vector_witnesses() {
        assert_eq!(vector_congruence(&ints(&[1, 1]), &ints(&[405, -286]), 691).unwrap(), Some((286, 1)));
        assert_eq!(vector_congruence(&ints(&[1, 1]), &ints(&[1, -1]), 2).unwrap(), Some((1, 1)));
        assert_eq!(vector_congruence(&ints(&[1, 0, 0]), &ints(&[0, 1, 0]), 7).unwrap(), None);
        assert!(vector_congruence(&ints(&[1, 1]), &ints(&[1, -1]), 6).is_err());
    }

    #[test]
    fn shared_roots() {
        let f = IntPolynomial::from_i64(&[-7, 1]);
        let g = IntPolynomial::from_i64(&[-7 - 397, 1]).mul(&IntPolynomial::from_i64(&[1, 0, 1]));
        assert_eq!(common_roots_mod(&f, &g, 397).unwrap(), vec![7]);
        assert!(common_roots_mod(&f, &g, 389).unwrap().is_empty());
    }

    #[test]
    fn conjecture_rows() {
        let t = parse_ap_table("label=t\nweight=8\nlevel=1\ncharacter=trivial\n2,3\n3,-1\n").unwrap();
        let q = BigInt::from(1009);
        // j = 0, k = 4: 9 − 8 − 8 + 32 + 2 = 27 at p = 2
        let b: BTreeMap<u64, Integer> = [(2, BigInt::from(27 + 1009)), (3, BigInt::from(0))].into_iter().collect();
        let r = conjecture_check(&t, &b, 0, 4, 1, &q).unwrap();
        assert_eq!(r.rows[0].predicted, BigInt::from(27));
        assert!(r.rows[0].holds);
        assert!(!r.rows[1].holds);
        assert!(!r.all_hold());
    }

    proptest! {
        #[test]
        fn moduli_are_sound(a in proptest::collection::vec(-10_000i64..10_000, 1..4), shift in 1i64..500) {
            let t1: LambdaTable = a.iter().enumerate().map(|(i, &x)| ((i as u64 + 2, 1), BigInt::from(x))).collect();
            let t2: LambdaTable = a.iter().enumerate().map(|(i, &x)| ((i as u64 + 2, 1), BigInt::from(x + shift * (i as i64 + 1)))).collect();
            let r = eigenvalue_congruences(("a", "b"), &t1, &t2, 3).unwrap();
            for m in &r.moduli {
                prop_assert!(incongruent_pairs(&t1, &t2, &m.q).is_empty());
            }
            prop_assert!(r.modulus(shift as u64).is_some() || shift == 1);
        }

        #[test]
        fn dependent_reductions_have_witnesses(f in proptest::collection::vec(1i64..1000, 3), c in 1u64..50, noise in proptest::collection::vec(-5i64..5, 3)) {
            let q = 53u64;
            let f1 = ints(&f);
            let f2: Vec<Integer> = f.iter().zip(&noise).map(|(&x, &e)| BigInt::from(x * c as i64 + e * q as i64)).collect();
            let (a, b) = vector_congruence(&f1, &f2, q).unwrap().unwrap();
            for (x, y) in f1.iter().zip(&f2) {
                prop_assert!(((x * a + y * b) % q as i64).is_zero());
            }
        }
    }
}
