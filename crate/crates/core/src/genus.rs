//! Class sets of genera: neighbour-graph enumeration, classification, mass,
//! and the genus cache file.

use std::path::Path;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::isom::{
    automorphism_group_with, fingerprint, is_isometric_with, minimal_vector_components, AutGroup, Fingerprint,
    IsomConfig,
};
use crate::lattice::{expected_count, lll_reduce, IntMatrix, Lattice};
use crate::neighbour::{is_prime, isotropic_line_orbits, neighbours_of_subspace, IsotropicLines, IsotropicSubspace};
use crate::textual;
use crate::{Integer, Rational};

/// Theta depth is the largest B ≤ this with an affordable enumeration.
const MAX_DEPTH: usize = 8;
const DEPTH_BUDGET: f64 = 20_000.0;
const RAISED_DEPTH_BUDGET: f64 = 400_000.0;

/// A class set with its automorphism data, in canonical order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenusData {
    pub rank: usize,
    pub discriminant: i64,
    /// Prime used for the neighbour enumeration; `None` for user-supplied genera.
    pub prime: Option<u64>,
    pub seed: Lattice,
    pub representatives: Vec<Lattice>,
    #[serde(with = "textual::integer_vec")]
    pub aut_orders: Vec<Integer>,
    pub det_minus_one: Vec<bool>,
    pub fingerprint_depth: usize,
    pub fingerprints: Vec<Fingerprint>,
    #[serde(with = "textual::rational")]
    pub mass: Rational,
}

#[derive(Clone, Debug)]
pub struct GenusConfig {
    pub prime: Option<u64>,
    pub isom: IsomConfig,
    pub max_classes: usize,
    /// Quotient the neighbours of each class by its automorphism group.
    pub use_orbits: bool,
}

impl Default for GenusConfig {
    fn default() -> Self {
        GenusConfig {
            prime: None,
            isom: IsomConfig::default(),
            max_classes: 5000,
            use_orbits: true,
        }
    }
}

impl GenusData {
    pub fn class_number(&self) -> usize {
        self.representatives.len()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("genus data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, self.to_json())?;
        std::fs::rename(tmp, path)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        GenusData::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn fingerprint_of(&self, l: &Lattice) -> Fingerprint {
        fingerprint(l, self.fingerprint_depth)
    }

    /// Automorphism group of a representative, recomputed on demand.
    pub fn aut_group(&self, i: usize) -> Result<AutGroup> {
        automorphism_group_with(&self.representatives[i], &IsomConfig::default())
    }
}

/// Smallest prime not dividing the Gram determinant.
pub fn default_prime(l: &Lattice) -> u64 {
    let det = l.determinant();
    (2u64..).find(|&p| is_prime(p) && det % p as i64 != 0).expect("some prime is good")
}

/// Largest theta depth whose enumeration stays within `budget` vectors.
fn depth_for(l: &Lattice, budget: f64) -> usize {
    (1..=MAX_DEPTH)
        .take_while(|&b| b == 1 || expected_count(l, b as f64) <= budget)
        .last()
        .unwrap_or(1)
}

pub fn enumerate_genus(seed: &Lattice, p: Option<u64>) -> Result<GenusData> {
    enumerate_genus_with(
        seed,
        &GenusConfig {
            prime: p,
            ..GenusConfig::default()
        },
    )
}

struct Found {
    lattice: Lattice,
    fingerprint: Fingerprint,
    aut: AutGroup,
}

/// Breadth-first closure of the seed under p-neighbours. Each neighbour is
/// compared with the known classes of equal fingerprint by isometry testing.
pub fn enumerate_genus_with(seed: &Lattice, cfg: &GenusConfig) -> Result<GenusData> {
    let p = cfg.prime.unwrap_or_else(|| default_prime(seed));
    let start = lll_reduce(seed).lattice;
    let depth = depth_for(&start, DEPTH_BUDGET);
    let mut found = vec![Found {
        fingerprint: fingerprint(&start, depth),
        aut: automorphism_group_with(&start, &cfg.isom)?,
        lattice: start,
    }];
    let mut next = 0;
    while next < found.len() {
        let l = found[next].lattice.clone();
        let lines: Vec<Vec<i64>> = if cfg.use_orbits {
            let gens: Vec<IntMatrix> = found[next].aut.generators.iter().map(|g| g.matrix.clone()).collect();
            isotropic_line_orbits(&l, p, &gens)?
                .into_iter()
                .map(|o| o.representative)
                .collect()
        } else {
            IsotropicLines::new(&l, p)?.collect()
        };
        let candidates: Vec<(Lattice, Fingerprint)> = lines
            .into_par_iter()
            .flat_map_iter(|x| neighbours_of_subspace(&l, &IsotropicSubspace::from_line(p, x)))
            .map(|nb| {
                let f = fingerprint(&nb.lattice, depth);
                (nb.lattice, f)
            })
            .collect();
        for (cand, fp) in candidates {
            let mut known = false;
            for f in found.iter().filter(|f| f.fingerprint == fp) {
                if is_isometric_with(&f.lattice, &cand, &cfg.isom)?.is_some() {
                    known = true;
                    break;
                }
            }
            if !known {
                if found.len() >= cfg.max_classes {
                    return Err(Error::ResourceCap {
                        what: "genus enumeration",
                        limit: cfg.max_classes as u64,
                    });
                }
                found.push(Found {
                    aut: automorphism_group_with(&cand, &cfg.isom)?,
                    fingerprint: fp,
                    lattice: cand,
                });
            }
        }
        next += 1;
    }
    let reps: Vec<Lattice> = found.iter().map(|f| f.lattice.clone()).collect();
    let auts: Vec<AutGroup> = found.into_iter().map(|f| f.aut).collect();
    Ok(assemble(seed.clone(), Some(p), reps, auts, depth))
}

// Raise the depth while fingerprints collide and it stays affordable, then
// sort classes by (fingerprint, reduced gram).
fn assemble(seed: Lattice, prime: Option<u64>, reps: Vec<Lattice>, auts: Vec<AutGroup>, depth: usize) -> GenusData {
    let mut depth = depth;
    let mut fps: Vec<Fingerprint> = reps.iter().map(|l| fingerprint(l, depth)).collect();
    let limit = reps.first().map_or(1, |l| depth_for(l, RAISED_DEPTH_BUDGET));
    while has_collision(&fps) && depth < limit {
        depth += 1;
        fps = reps.iter().map(|l| fingerprint(l, depth)).collect();
    }
    let mut order: Vec<usize> = (0..reps.len()).collect();
    order.sort_by(|&a, &b| {
        fps[a]
            .cmp(&fps[b])
            .then_with(|| reps[a].gram_flat().cmp(reps[b].gram_flat()))
    });
    let aut_orders: Vec<Integer> = order.iter().map(|&i| auts[i].order.clone()).collect();
    let mass = aut_orders
        .iter()
        .fold(Rational::zero(), |acc, o| acc + Rational::new(BigInt::one(), o.clone()));
    GenusData {
        rank: seed.rank(),
        discriminant: seed.discriminant(),
        prime,
        representatives: order.iter().map(|&i| reps[i].clone()).collect(),
        det_minus_one: order.iter().map(|&i| auts[i].contains_det_minus_one).collect(),
        fingerprints: order.iter().map(|&i| fps[i].clone()).collect(),
        aut_orders,
        fingerprint_depth: depth,
        mass,
        seed,
    }
}

fn has_collision(fps: &[Fingerprint]) -> bool {
    let mut v: Vec<&Fingerprint> = fps.iter().collect();
    v.sort();
    v.windows(2).any(|w| w[0] == w[1])
}

fn check_in_genus(g: &GenusData, l: &Lattice) -> Result<()> {
    if l.rank() != g.rank || l.discriminant() != g.discriminant {
        return Err(Error::NotInGenus(format!(
            "rank {} discriminant {} against rank {} discriminant {}",
            l.rank(),
            l.discriminant(),
            g.rank,
            g.discriminant
        )));
    }
    Ok(())
}

/// Index of the class of `l`, assuming `l` lies in the genus. When only one
/// class has the fingerprint of `l` no isometry test is made, and the last
/// surviving candidate is accepted without one.
pub fn classify(g: &GenusData, l: &Lattice) -> Result<usize> {
    check_in_genus(g, l)?;
    Classifier::new(g, IsomConfig::default()).classify(l)
}

/// Staged classification: cheap invariants first, theta coefficients only
/// while several classes remain, isometry tests last.
pub struct Classifier<'a> {
    genus: &'a GenusData,
    cfg: IsomConfig,
}

impl<'a> Classifier<'a> {
    pub fn new(genus: &'a GenusData, cfg: IsomConfig) -> Self {
        Classifier { genus, cfg }
    }

    pub fn classify(&self, l: &Lattice) -> Result<usize> {
        let g = self.genus;
        let mut cands: Vec<usize> = (0..g.class_number()).collect();
        if cands.len() > 1 {
            let comps = minimal_vector_components(l);
            cands.retain(|&i| g.fingerprints[i].min_components == comps);
        }
        if cands.len() > 1 {
            let theta = l.theta1_coeffs(g.fingerprint_depth);
            cands.retain(|&i| g.fingerprints[i].theta[..] == theta[1..]);
        }
        match cands.split_last() {
            None => Err(Error::NotInGenus("no class has this fingerprint".into())),
            Some((&last, rest)) => {
                for &i in rest {
                    if is_isometric_with(&g.representatives[i], l, &self.cfg)?.is_some() {
                        return Ok(i);
                    }
                }
                Ok(last)
            }
        }
    }
}

/// Index of the class of `l`, always confirmed by an isometry witness.
pub fn classify_verified(g: &GenusData, l: &Lattice, cfg: &IsomConfig) -> Result<usize> {
    check_in_genus(g, l)?;
    let fp = g.fingerprint_of(l);
    for i in (0..g.class_number()).filter(|&i| g.fingerprints[i] == fp) {
        if is_isometric_with(&g.representatives[i], l, cfg)?.is_some() {
            return Ok(i);
        }
    }
    Err(Error::NotInGenus("no representative is isometric".into()))
}

/// Σ 1/#O(Λᵢ).
pub fn mass(g: &GenusData) -> Rational {
    g.aut_orders
        .iter()
        .fold(Rational::zero(), |acc, o| acc + Rational::new(BigInt::one(), o.clone()))
}

#[derive(Deserialize)]
struct UserGenusFile {
    lattices: Vec<UserClass>,
}

#[derive(Deserialize)]
struct UserClass {
    gram: Vec<Vec<i64>>,
    #[serde(default)]
    aut_order: Option<String>,
}

/// Read a user-supplied class list. Missing automorphism orders are computed;
/// with `spot_check`, supplied orders are recomputed and compared.
pub fn load_user_genus(path: &Path, spot_check: bool) -> Result<GenusData> {
    let text = std::fs::read_to_string(path)?;
    let file: UserGenusFile = serde_json::from_str(&text)?;
    let mut lattices = Vec::new();
    let mut orders = Vec::new();
    for c in file.lattices {
        lattices.push(Lattice::new(c.gram)?);
        orders.push(match c.aut_order {
            Some(s) => Some(
                s.trim()
                    .parse::<Integer>()
                    .map_err(|e| Error::InvalidArgument(format!("aut order {s:?}: {e}")))?,
            ),
            None => None,
        });
    }
    genus_from_classes(lattices, orders, spot_check, &IsomConfig::default())
}

/// Build genus data from a complete list of class representatives.
pub fn genus_from_classes(
    lattices: Vec<Lattice>,
    orders: Vec<Option<Integer>>,
    spot_check: bool,
    cfg: &IsomConfig,
) -> Result<GenusData> {
    let first = lattices
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty class list".into()))?
        .clone();
    if lattices
        .iter()
        .any(|l| l.rank() != first.rank() || l.discriminant() != first.discriminant())
    {
        return Err(Error::GenusMismatch);
    }
    let reps: Vec<Lattice> = lattices.iter().map(|l| lll_reduce(l).lattice).collect();
    let depth = depth_for(&reps[0], DEPTH_BUDGET);
    let fps: Vec<Fingerprint> = reps.iter().map(|l| fingerprint(l, depth)).collect();
    for i in 0..reps.len() {
        for j in 0..i {
            if fps[i] == fps[j] && is_isometric_with(&reps[j], &reps[i], cfg)?.is_some() {
                return Err(Error::DuplicateClass(j, i));
            }
        }
    }
    let mut auts = Vec::new();
    for (i, (l, supplied)) in reps.iter().zip(orders.iter().chain(std::iter::repeat(&None))).enumerate() {
        match supplied {
            Some(o) if !spot_check => {
                let group = automorphism_group_with(l, cfg).ok();
                auts.push(AutGroup {
                    generators: group.as_ref().map(|g| g.generators.clone()).unwrap_or_default(),
                    contains_det_minus_one: group.map(|g| g.contains_det_minus_one).unwrap_or(false),
                    order: o.clone(),
                });
            }
            _ => {
                let group = automorphism_group_with(l, cfg)?;
                if let Some(o) = supplied {
                    if *o != group.order {
                        return Err(Error::AutOrderMismatch {
                            index: i,
                            supplied: o.to_string(),
                            computed: group.order.to_string(),
                        });
                    }
                }
                auts.push(group);
            }
        }
    }
    Ok(assemble(first, None, reps, auts, depth))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::named_lattice;
    use crate::neighbour::neighbours;

    fn lambda1() -> Lattice {
        Lattice::new(vec![
            vec![2, 0, 1, 1],
            vec![0, 4, 1, 2],
            vec![1, 1, 10, 1],
            vec![1, 2, 1, 20],
        ])
        .unwrap()
    }

    #[test]
    fn d1369_has_four_classes() {
        let g3 = enumerate_genus(&lambda1(), Some(3)).unwrap();
        assert_eq!(g3.class_number(), 4);
        let mut orders: Vec<u64> = g3.aut_orders.iter().map(|o| o.try_into().unwrap()).collect();
        orders.sort();
        assert_eq!(orders, vec![2, 4, 4, 8]);
        assert_eq!(g3.mass, Rational::new(9.into(), 8.into()));
        let g5 = enumerate_genus(&lambda1(), Some(5)).unwrap();
        assert_eq!(g3.fingerprints, g5.fingerprints);
        for (a, b) in g3.representatives.iter().zip(&g5.representatives) {
            assert!(crate::isom::is_isometric(a, b).unwrap().is_some());
        }
        let g = enumerate_genus(&lambda1(), None).unwrap();
        assert_eq!(g.prime, Some(2));
        assert_eq!(classify(&g, &g.representatives[2]).unwrap(), 2);
        for nb in neighbours(&g.representatives[1], 2, 1).unwrap() {
            let i = classify(&g, &nb.lattice).unwrap();
            assert_eq!(classify_verified(&g, &nb.lattice, &IsomConfig::default()).unwrap(), i);
        }
        let wrong = named_lattice("A2+A2").unwrap();
        assert!(matches!(classify(&g, &wrong), Err(Error::NotInGenus(_))));
    }

    #[test]
    fn single_class_genera() {
        let e8 = enumerate_genus(&named_lattice("E8").unwrap(), None).unwrap();
        assert_eq!(e8.class_number(), 1);
        assert_eq!(e8.mass, Rational::new(1.into(), 696_729_600.into()));
        let a2 = enumerate_genus(&named_lattice("A2").unwrap(), None).unwrap();
        assert_eq!(a2.mass, Rational::new(1.into(), 12.into()));
    }

    #[test]
    fn cache_round_trip() {
        let g = enumerate_genus(&lambda1(), None).unwrap();
        let text = g.to_json();
        let back = GenusData::from_json(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn user_classes() {
        let a = named_lattice("E8+E8").unwrap();
        let b = named_lattice("E16").unwrap();
        let g = genus_from_classes(vec![a.clone(), b], vec![None, None], false, &IsomConfig::default()).unwrap();
        assert_eq!(g.class_number(), 2);
        let dup = genus_from_classes(vec![a.clone(), a.clone()], vec![None, None], false, &IsomConfig::default());
        assert!(matches!(dup, Err(Error::DuplicateClass(0, 1))));
        let bad = genus_from_classes(vec![a], vec![Some(BigInt::from(7))], true, &IsomConfig::default());
        assert!(matches!(bad, Err(Error::AutOrderMismatch { .. })));
    }
}
