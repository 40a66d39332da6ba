//! Local L-polynomials and closed forms for Hecke eigenvalues: the rank-4
//! polynomial, Eisenstein and depth-one eigenvalues, zeta factors, the Asai
//! polynomial, and checks of eigenvalue tables against lift patterns.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{kronecker_i64, IntPolynomial};
use crate::moddata::{ApTable, ApValues};
use crate::neighbour::is_prime;
use crate::textual;
use crate::{Integer, Rational};

/// L_p(φ, T) ∈ 1 + T·Z[T].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LPolynomial {
    pub p: u64,
    pub poly: IntPolynomial,
}

impl LPolynomial {
    pub fn new(p: u64, poly: IntPolynomial) -> Result<Self> {
        if poly.coeff(0) != Integer::one() {
            return Err(Error::InvalidArgument(format!("L-polynomial {poly} has constant term ≠ 1")));
        }
        Ok(LPolynomial { p, poly })
    }

    /// λ_{p,1}, the negated linear coefficient.
    pub fn lambda1(&self) -> Integer {
        -self.poly.coeff(1)
    }

    pub fn degree(&self) -> usize {
        self.poly.degree().unwrap_or(0)
    }
}

fn pw(p: u64, e: u32) -> Integer {
    BigInt::from(p).pow(e)
}

// (pᵏ − 1)/(p − 1) = 1 + p + … + p^{k−1}
fn geometric(p: u64, k: u32) -> Integer {
    (0..k).map(|i| pw(p, i)).sum()
}

fn linear_factor(c: Integer) -> IntPolynomial {
    IntPolynomial::new(vec![Integer::one(), -c])
}

/// D* = (−1)^{n/2}·D.
pub fn d_star(n: usize, d: i64) -> i64 {
    if (n / 2).is_multiple_of(2) {
        d
    } else {
        -d
    }
}

/// χ_{D*}(p) for even n and a prime p ∤ D.
pub fn character(n: usize, d: i64, p: u64) -> Result<i32> {
    if !n.is_multiple_of(2) || n == 0 {
        return Err(Error::InvalidArgument(format!("rank {n} is not even")));
    }
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    if d % p as i64 == 0 {
        return Err(Error::BadPrime { p, disc: d });
    }
    Ok(kronecker_i64(d_star(n, d), p as i64))
}

/// Rank-4 L-polynomial from λ_{p,1}, λ_{p,2} and χ_{D*}(p):
/// 1 − λ₁T + p(λ₂ + 2)T² − λ₁p²T³ + p⁴T⁴ when χ = 1, and
/// (1 − p²T²)(1 − λ₁T + p²T²) when χ = −1.
pub fn lpoly_rank4(l1: &Integer, l2: &Integer, p: u64, chi: i32) -> Result<LPolynomial> {
    let p2 = pw(p, 2);
    let poly = match chi {
        1 => IntPolynomial::new(vec![
            Integer::one(),
            -l1.clone(),
            BigInt::from(p) * (l2 + 2),
            -l1 * &p2,
            pw(p, 4),
        ]),
        -1 => IntPolynomial::new(vec![Integer::one(), Integer::zero(), -p2.clone()])
            .mul(&IntPolynomial::new(vec![Integer::one(), -l1.clone(), p2])),
        _ => return Err(Error::InvalidArgument(format!("character value {chi}"))),
    };
    LPolynomial::new(p, poly)
}

/// (1 − χ_{D*}(p)p^{n/2−1}T)·∏_{i=0}^{n−2}(1 − pⁱT).
pub fn eisenstein_lpoly(n: usize, d: i64, p: u64) -> Result<LPolynomial> {
    let chi = character(n, d, p)?;
    let mut f = linear_factor(BigInt::from(chi) * pw(p, (n / 2 - 1) as u32));
    for i in 0..=(n - 2) as u32 {
        f = f.mul(&linear_factor(pw(p, i)));
    }
    LPolynomial::new(p, f)
}

/// λ_{p,1} of the Eisenstein form: (p^{n−1} − 1)/(p − 1) + χ_{D*}(p)p^{n/2−1}.
pub fn eisenstein_lambda(n: usize, d: i64, p: u64) -> Result<Integer> {
    let chi = character(n, d, p)?;
    Ok(geometric(p, (n - 1) as u32) + BigInt::from(chi) * pw(p, (n / 2 - 1) as u32))
}

/// λ_{p,1} of a depth-one form: a_p² − χ_{D*}(p)p^{n/2−1} + p(p^{n−3} − 1)/(p − 1).
pub fn depth1_lambda(n: usize, d: i64, p: u64, ap: &Integer) -> Result<Integer> {
    depth1_lambda_from_square(n, d, p, &(ap * ap))
}

pub fn depth1_lambda_from_square(n: usize, d: i64, p: u64, ap2: &Integer) -> Result<Integer> {
    let chi = character(n, d, p)?;
    if n < 4 {
        return Err(Error::InvalidArgument(format!("rank {n} too small")));
    }
    Ok(ap2 - BigInt::from(chi) * pw(p, (n / 2 - 1) as u32) + BigInt::from(p) * geometric(p, (n - 3) as u32))
}

/// ∏_{i=g−m}^{m−g}(1 − p^{m−i}T) with m = n/2 − 1, for 2g < n.
pub fn rallis_zeta_product(n: usize, g: usize, p: u64) -> Result<IntPolynomial> {
    if !n.is_multiple_of(2) || 2 * g >= n {
        return Err(Error::InvalidArgument(format!("need even n > 2g, got n = {n}, g = {g}")));
    }
    let m = (n / 2 - 1) as i64;
    let g = g as i64;
    Ok(((g - m)..=(m - g)).fold(IntPolynomial::one(), |acc, i| acc.mul(&linear_factor(pw(p, (m - i) as u32)))))
}

/// ∏_{i=(m+1)−g}^{g−(m+1)}(1 − p^{m−i}T) with m = n/2 − 1, for 2g ≥ n.
pub fn rallis_zeta_product_large_genus(n: usize, g: usize, p: u64) -> Result<IntPolynomial> {
    if !n.is_multiple_of(2) || 2 * g < n {
        return Err(Error::InvalidArgument(format!("need even n ≤ 2g, got n = {n}, g = {g}")));
    }
    let m = (n / 2 - 1) as i64;
    let g = g as i64;
    let lo = m + 1 - g;
    let hi = g - m - 1;
    let mut f = IntPolynomial::one();
    for i in lo..=hi {
        let e = m - i;
        if e < 0 {
            return Err(Error::InvalidArgument(format!("g = {g} gives a negative exponent")));
        }
        f = f.mul(&linear_factor(pw(p, e as u32)));
    }
    Ok(f)
}

/// Hecke data of a weight-2 Hilbert eigenform at a rational prime p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AsaiPrime {
    /// p = 𝔭𝔭′ with eigenvalues a_𝔭, a_𝔭′ (norms p).
    Split { a: Integer, a_conj: Integer },
    /// p inert with eigenvalue a_𝔭 (norm p²).
    Inert { a: Integer },
}

/// Asai L-polynomial in elementary symmetric functions of the Satake data.
pub fn asai_lpoly(data: &AsaiPrime, p: u64) -> Result<LPolynomial> {
    let pb = BigInt::from(p);
    let p2 = pw(p, 2);
    let poly = match data {
        AsaiPrime::Split { a, a_conj } => {
            let aa = a * a_conj;
            IntPolynomial::new(vec![
                Integer::one(),
                -aa.clone(),
                &pb * (a * a + a_conj * a_conj) - BigInt::from(2) * &p2,
                -&p2 * &aa,
                pw(p, 4),
            ])
        }
        AsaiPrime::Inert { a } => IntPolynomial::new(vec![Integer::one(), -a.clone(), p2.clone()])
            .mul(&IntPolynomial::new(vec![Integer::one(), Integer::zero(), -p2])),
    };
    LPolynomial::new(p, poly)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Eisenstein,
    Sym2Depth1,
    SaitoKurokawa,
    IkedaG4,
    Miyawaki,
    NonliftResidual,
}

impl Family {
    pub fn is_conjectural(self) -> bool {
        self == Family::Miyawaki
    }
}

/// Predicted λ_{p,1} of a family at one prime, or `None` when the family does
/// not apply (missing table entry, wrong rank, squared table where a_p is
/// needed).
pub fn family_lambda(family: Family, n: usize, d: i64, p: u64, tables: &[&ApTable]) -> Result<Option<Integer>> {
    let chi = BigInt::from(character(n, d, p)?);
    let m = (n / 2 - 1) as u32;
    let ap = |i: usize| -> Option<Integer> {
        let t = tables.get(i)?;
        if t.values == ApValues::ApSquared {
            return None;
        }
        t.ap(p).ok()
    };
    Ok(match family {
        Family::Eisenstein => Some(eisenstein_lambda(n, d, p)?),
        Family::Sym2Depth1 => match tables.first().and_then(|t| t.ap_squared(p).ok()) {
            Some(a2) => Some(depth1_lambda_from_square(n, d, p, &a2)?),
            None => None,
        },
        Family::SaitoKurokawa if n >= 6 => {
            ap(0).map(|a| BigInt::from(p + 1) * a + &chi * pw(p, m) + pw(p, 2) * geometric(p, (n - 5) as u32))
        }
        Family::IkedaG4 if n >= 10 => ap(0).map(|a| {
            a * geometric(p, 4) + &chi * pw(p, m) + pw(p, 4) * geometric(p, (n - 9) as u32)
        }),
        Family::Miyawaki => match (ap(0), ap(1)) {
            (Some(c), Some(dp)) => {
                let chi3 = kronecker_i64(-3, p as i64);
                Some(BigInt::from(p) * dp + c + BigInt::from(1 + chi3) * pw(p, 2))
            }
            _ => None,
        },
        _ => None,
    })
}

/// b_{1,p²} = λ_{p,1} minus the zeta and constant terms, for ranks 6 and 8.
pub fn nonlift_residual(n: usize, d: i64, p: u64, lambda: &Integer) -> Result<Integer> {
    character(n, d, p)?;
    match n {
        6 => Ok(lambda - BigInt::from(p) - pw(p, 2)),
        8 => Ok(lambda - pw(p, 3) - pw(p, 2) * geometric(p, 3)),
        _ => Err(Error::InvalidArgument(format!("no residual formula in rank {n}"))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyCheck {
    pub family: Family,
    pub tables: Vec<String>,
    pub conjectural: bool,
    /// (p, predicted value matches) at every prime where the family applies.
    pub primes: Vec<(u64, bool)>,
}

impl FamilyCheck {
    pub fn matches(&self) -> bool {
        !self.primes.is_empty() && self.primes.iter().all(|&(_, ok)| ok)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaReport {
    pub form: String,
    pub checks: Vec<FamilyCheck>,
    #[serde(with = "residual_text")]
    pub residuals: Vec<(u64, Integer)>,
}

mod residual_text {
    use super::Integer;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[(u64, Integer)], s: S) -> Result<S::Ok, S::Error> {
        let t: Vec<(u64, String)> = v.iter().map(|(p, x)| (*p, x.to_string())).collect();
        t.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<(u64, Integer)>, D::Error> {
        let t: Vec<(u64, String)> = Vec::deserialize(d)?;
        t.into_iter()
            .map(|(p, x)| Ok((p, x.parse().map_err(serde::de::Error::custom)?)))
            .collect()
    }
}

impl FormulaReport {
    pub fn matching(&self) -> impl Iterator<Item = &FamilyCheck> {
        self.checks.iter().filter(|c| c.matches())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

/// Compare an eigenvalue table λ_{p,1} against every family and table
/// combination. Primes dividing D are skipped.
pub fn classify_lambda(
    form: &str,
    lambdas: &BTreeMap<u64, Rational>,
    ap_tables: &[ApTable],
    n: usize,
    d: i64,
) -> Result<FormulaReport> {
    let good: Vec<(u64, &Rational)> = lambdas
        .iter()
        .filter(|(&p, _)| d % p as i64 != 0)
        .map(|(&p, l)| (p, l))
        .collect();
    let mut combos: Vec<(Family, Vec<&ApTable>)> = vec![(Family::Eisenstein, vec![])];
    for t in ap_tables {
        for f in [Family::Sym2Depth1, Family::SaitoKurokawa, Family::IkedaG4] {
            combos.push((f, vec![t]));
        }
    }
    for (i, c) in ap_tables.iter().enumerate() {
        for (j, dt) in ap_tables.iter().enumerate() {
            if i != j {
                combos.push((Family::Miyawaki, vec![c, dt]));
            }
        }
    }
    let mut checks = Vec::new();
    for (family, tables) in combos {
        let mut primes = Vec::new();
        for &(p, l) in &good {
            if let Some(v) = family_lambda(family, n, d, p, &tables)? {
                primes.push((p, Rational::from_integer(v) == *l));
            }
        }
        checks.push(FamilyCheck {
            family,
            tables: tables.iter().map(|t| t.label.clone()).collect(),
            conjectural: family.is_conjectural(),
            primes,
        });
    }
    let mut residuals = Vec::new();
    if n == 6 || n == 8 {
        for &(p, l) in &good {
            if l.is_integer() {
                residuals.push((p, nonlift_residual(n, d, p, &l.to_integer())?));
            }
        }
    }
    Ok(FormulaReport {
        form: form.to_string(),
        checks,
        residuals,
    })
}

/// Eigenvalues λ_{p,1} as text-serializable pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaEntry {
    pub p: u64,
    #[serde(with = "textual::rational")]
    pub lambda: Rational,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moddata::parse_ap_table;
    use crate::neighbour::neighbour_count_k1;

    fn int(x: i64) -> Integer {
        BigInt::from(x)
    }

    #[test]
    fn rank4_examples() {
        let l = lpoly_rank4(&int(9), &int(12), 2, 1).unwrap();
        assert_eq!(l.poly, IntPolynomial::from_i64(&[1, -9, 28, -36, 16]));
        let e = [1, 2, 2, 4].iter().fold(IntPolynomial::one(), |acc, &c| acc.mul(&linear_factor(int(c))));
        assert_eq!(l.poly, e);
        let l = lpoly_rank4(&int(0), &int(5), 2, -1).unwrap();
        assert_eq!(l.poly, IntPolynomial::from_i64(&[1, 0, 0, 0, -16]));
        assert_eq!(lpoly_rank4(&int(4), &int(0), 2, 1).unwrap().lambda1(), int(4));
    }

    #[test]
    fn rank4_eisenstein_matches_product() {
        for p in [2u64, 3, 5] {
            let e = eisenstein_lpoly(4, 1369, p).unwrap();
            // λ_{p,2} from the T² coefficient p(λ₂ + 2)
            let l2 = e.poly.coeff(2) / BigInt::from(p) - 2;
            assert_eq!(lpoly_rank4(&e.lambda1(), &l2, p, 1).unwrap(), e);
        }
    }

    #[test]
    fn closed_forms() {
        assert_eq!(eisenstein_lambda(16, 1, 2).unwrap(), int(32895));
        assert_eq!(eisenstein_lambda(4, 1369, 5).unwrap(), int(36));
        assert_eq!(eisenstein_lambda(8, 21, 2).unwrap(), int(119));
        assert!(matches!(eisenstein_lambda(4, 1369, 37), Err(Error::BadPrime { .. })));
        assert_eq!(depth1_lambda(4, 1369, 2, &int(-2)).unwrap(), int(4));
        for p in [2u64, 5, 11] {
            let a = int(3);
            let chi = kronecker_i64(21, p as i64);
            let pb = p as i64;
            let expect = 9 - chi as i64 * pb.pow(3) + pb * (pb.pow(5) - 1) / (pb - 1);
            assert_eq!(depth1_lambda(8, 21, p, &a).unwrap(), int(expect));
        }
    }

    #[test]
    fn eisenstein_equals_neighbour_count() {
        for n in [2usize, 4, 6, 8, 10, 16] {
            for d in [1i64, 3, 4, 7, 21, 39, 53, 1369] {
                for p in [2u64, 3, 5, 7, 11] {
                    match (eisenstein_lambda(n, d, p), neighbour_count_k1(n, d, p)) {
                        (Ok(a), Ok(b)) => assert_eq!(a, b),
                        (Err(_), Err(_)) => {}
                        other => panic!("{other:?}"),
                    }
                    if let Ok(l) = eisenstein_lpoly(n, d, p) {
                        assert_eq!(l.lambda1(), eisenstein_lambda(n, d, p).unwrap());
                        assert_eq!(l.degree(), n);
                    }
                }
            }
        }
    }

    #[test]
    fn eisenstein_lambda2_from_matrix() {
        let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/lattices/d1369_1.json");
        let g = crate::genus::enumerate_genus(&crate::lattice::Lattice::from_file(&path).unwrap(), None).unwrap();
        for p in [2u64, 3] {
            let t1 = crate::hecke::hecke_matrix(&g, p, 1).unwrap().column_sums();
            let t2 = crate::hecke::hecke_matrix(&g, p, 2).unwrap().column_sums();
            assert!(t1.iter().all(|&s| s == t1[0]) && t2.iter().all(|&s| s == t2[0]));
            let chi = character(4, 1369, p).unwrap();
            let l = lpoly_rank4(&int(t1[0] as i64), &int(t2[0] as i64), p, chi).unwrap();
            assert_eq!(l, eisenstein_lpoly(4, 1369, p).unwrap());
        }
    }

    #[test]
    fn zeta_products() {
        let p = 3u64;
        assert_eq!(rallis_zeta_product(6, 2, p).unwrap(), linear_factor(int(9)));
        let e = [9, 27, 81].iter().fold(IntPolynomial::one(), |acc, &c| acc.mul(&linear_factor(int(c))));
        assert_eq!(rallis_zeta_product(8, 2, p).unwrap(), e);
        for n in [4usize, 6, 8, 10, 16] {
            for g in 0..n / 2 {
                let f = rallis_zeta_product(n, g, p).unwrap();
                assert_eq!(f.degree(), Some(n - 1 - 2 * g));
            }
            assert!(rallis_zeta_product(n, n / 2, p).is_err());
            assert_eq!(rallis_zeta_product_large_genus(n, n / 2, p).unwrap(), linear_factor(pw(p, (n / 2 - 1) as u32)));
        }
        assert_eq!(rallis_zeta_product(6, 1, p).unwrap().degree(), Some(3));
    }

    #[test]
    fn asai() {
        for p in [2u64, 3, 5] {
            let e = int(1 + p as i64);
            let l = asai_lpoly(&AsaiPrime::Split { a: e.clone(), a_conj: e }, p).unwrap();
            let expect = [1, p, p, p * p]
                .iter()
                .fold(IntPolynomial::one(), |acc, &c| acc.mul(&linear_factor(int(c as i64))));
            assert_eq!(l.poly, expect);
            let a = int(-2);
            let l = asai_lpoly(&AsaiPrime::Split { a: a.clone(), a_conj: a.clone() }, p).unwrap();
            assert_eq!(l.lambda1(), &a * &a);
            let l = asai_lpoly(&AsaiPrime::Inert { a: int(3) }, p).unwrap();
            let pp = (p * p) as i64;
            assert_eq!(l.poly, IntPolynomial::from_i64(&[1, -3, 0, 3 * pp, -pp * pp]));
        }
    }

    #[test]
    fn ikeda_arithmetic() {
        let delta = parse_ap_table("label=1.12.a.a\nweight=12\nlevel=1\ncharacter=trivial\n2,-24\n3,252\n").unwrap();
        assert_eq!(family_lambda(Family::IkedaG4, 16, 1, 2, &[&delta]).unwrap(), Some(int(1800)));
        let lambdas: BTreeMap<u64, Rational> =
            [(2, 1800), (3, 100800)].into_iter().map(|(p, l)| (p, Rational::from_integer(int(l)))).collect();
        let r = classify_lambda("phi", &lambdas, &[delta], 16, 1).unwrap();
        let m: Vec<Family> = r.matching().map(|c| c.family).collect();
        assert_eq!(m, vec![Family::IkedaG4]);
    }

    #[test]
    fn residuals() {
        assert_eq!(nonlift_residual(8, 53, 2, &int(7)).unwrap(), int(-29));
        assert_eq!(nonlift_residual(6, 131, 3, &int(20)).unwrap(), int(8));
        assert!(nonlift_residual(10, 11, 2, &int(0)).is_err());
    }
}
