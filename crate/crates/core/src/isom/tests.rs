use super::*;
use crate::lattice::named_lattice;
use proptest::prelude::*;

fn lat(rows: &[&[i64]]) -> Lattice {
    Lattice::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
}

// Brute-force O(Λ) for tiny ranks: columns range over vectors of the right norms.
fn brute_order(l: &Lattice) -> usize {
    let n = l.rank();
    let cols: Vec<Vec<Vec<i64>>> = (0..n)
        .map(|i| {
            let want = l.entry(i, i) / 2;
            let mut v = Vec::new();
            for (x, q) in l.short_vectors(want).iter() {
                if *q == want {
                    v.push(x.clone());
                    v.push(x.iter().map(|c| -c).collect());
                }
            }
            v
        })
        .collect();
    let mut count = 0;
    let mut idx = vec![0usize; n];
    loop {
        let u = IntMatrix::from_fn(n, n, |r, c| cols[c][idx[c]][r]);
        if &l.transform(&u) == l {
            count += 1;
        }
        let mut k = 0;
        loop {
            if k == n {
                return count;
            }
            idx[k] += 1;
            if idx[k] < cols[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

#[test]
fn small_orders() {
    assert_eq!(automorphism_group(&lat(&[&[2]])).unwrap().order, BigInt::from(2));
    assert_eq!(automorphism_group(&named_lattice("A2").unwrap()).unwrap().order, BigInt::from(12));
    assert_eq!(automorphism_group(&named_lattice("A3").unwrap()).unwrap().order, BigInt::from(48));
    assert_eq!(automorphism_group(&named_lattice("D4").unwrap()).unwrap().order, BigInt::from(1152));
}

#[test]
fn e8_order() {
    let g = automorphism_group(&named_lattice("E8").unwrap()).unwrap();
    assert_eq!(g.order, BigInt::from(696_729_600u64));
    assert!(g.contains_det_minus_one);
}

#[test]
fn generators_are_automorphisms() {
    let l = lat(&[&[2, 0, 1, 1], &[0, 4, 1, 2], &[1, 1, 10, 1], &[1, 2, 1, 20]]);
    let g = automorphism_group(&l).unwrap();
    assert_eq!(g.order, BigInt::from(8));
    for s in &g.generators {
        assert!(s.is_witness(&l, &l));
    }
    assert_eq!(brute_order(&l), 8);
}

#[test]
fn rank16_pair_not_isometric() {
    let a = named_lattice("E8+E8").unwrap();
    let b = named_lattice("E16").unwrap();
    assert_ne!(fingerprint(&a, 1), fingerprint(&b, 1));
    assert!(is_isometric(&a, &b).unwrap().is_none());
}

#[test]
fn isometric_after_basis_change() {
    let l = named_lattice("D5+A3").unwrap();
    let n = l.rank();
    let u = unimodular(n, &[(0, 3, 2), (5, 1, -1), (7, 0, 1), (2, 6, 3), (4, 7, -2)]);
    let m = l.transform(&u);
    let w = is_isometric(&l, &m).unwrap().expect("isometric");
    assert!(w.is_witness(&l, &m));
    let back = w.inverse(&l);
    assert!(back.is_witness(&m, &l));
}

fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    for &(i, j, k) in ops {
        if i % n == j % n {
            continue;
        }
        for r in 0..n {
            let v = u.get(r, i % n) + k * u.get(r, j % n);
            u.set(r, i % n, v);
        }
    }
    u
}

fn small_lattice() -> impl Strategy<Value = Lattice> {
    (1usize..=3).prop_flat_map(|n| {
        proptest::collection::vec(-2i64..=2, n * n).prop_filter_map("positive definite", move |a| {
            let m = IntMatrix::from_fn(n, n, |r, c| a[r * n + c] + if r == c { 3 } else { 0 });
            let g = &m.transpose() * &m;
            Lattice::new(g.to_rows().into_iter().map(|r| r.into_iter().map(|x| 2 * x).collect()).collect()).ok()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn order_matches_brute_force(l in small_lattice()) {
        let red = lll_reduce(&l).lattice;
        let g = automorphism_group(&red).unwrap();
        prop_assert_eq!(g.order, BigInt::from(brute_order(&red)));
    }

    #[test]
    fn isometry_is_equivalence(l in small_lattice(), ops in proptest::collection::vec((0usize..3, 0usize..3, -2i64..=2), 0..6)) {
        let n = l.rank();
        let m = l.transform(&unimodular(n, &ops));
        let w = is_isometric(&l, &m).unwrap();
        prop_assert!(w.as_ref().is_some_and(|w| w.is_witness(&l, &m)));
        let back = is_isometric(&m, &l).unwrap();
        prop_assert!(back.is_some());
        prop_assert!(is_isometric(&l, &l).unwrap().is_some());
        prop_assert_eq!(fingerprint(&l, 4), fingerprint(&m, 4));
    }
}

#[test]
fn rank16_orders() {
    let a = automorphism_group(&named_lattice("E8+E8").unwrap()).unwrap();
    assert_eq!(a.order, BigInt::from(2u64) * BigInt::from(696_729_600u64).pow(2));
    let b = automorphism_group(&named_lattice("E16").unwrap()).unwrap();
    let fact16: BigInt = (1..=16u64).map(BigInt::from).product();
    assert_eq!(b.order, BigInt::from(1u64 << 15) * fact16);
}
