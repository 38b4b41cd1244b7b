use num_integer::Integer;
use num_traits::{One, Zero};

use super::*;
use crate::dga::base_ring;

fn b(v: i64) -> BigInt {
    BigInt::from(v)
}

fn koszul(p: i64, n: u32) -> DGAlgebra {
    koszul_resolution(&b(p).pow(n)).unwrap()
}

/// `HC_i(Z/p^n)` below `2p`: `Z/p^{nj}` at `i = 2(j-1)`, zero in odd degrees.
fn expected_hc(p: i64, n: u32, i: i64) -> AbelianGroup {
    if i % 2 == 1 {
        AbelianGroup::trivial()
    } else {
        AbelianGroup::cyclic(b(p).pow(n * (i as u32 / 2 + 1)))
    }
}

#[test]
fn hc_of_koszul_resolutions_below_2p() {
    for (p, n) in [(2, 1), (2, 3), (3, 1), (3, 2), (5, 1), (5, 2)] {
        let bundle = CyclicComplexBundle::new(&koszul(p, n), 2 * p - 1).unwrap();
        for i in 0..2 * p {
            assert_eq!(bundle.homology(i).unwrap(), expected_hc(p, n, i), "HC_{i}(Z/{p}^{n})");
        }
    }
}

#[test]
fn hc_of_base_ring() {
    let z = base_ring();
    for i in 0..=5 {
        let expect = if i % 2 == 0 { AbelianGroup::free(1) } else { AbelianGroup::trivial() };
        assert_eq!(hc(&z, i, 5).unwrap(), expect);
    }
    assert!(matches!(hc(&z, 6, 5), Err(Error::BoundTooSmall(_))));
}

#[test]
fn hc_zero_is_the_ring() {
    for m in [2, 6, 12, 49] {
        assert_eq!(hc(&koszul_resolution(&b(m)).unwrap(), 0, 1).unwrap(), AbelianGroup::cyclic(b(m)));
    }
}

#[test]
fn hc_stabilizes_in_the_bound() {
    let a = koszul_resolution(&b(4)).unwrap().tensor(&koszul_resolution(&b(6)).unwrap());
    for i in 0..=3 {
        assert_eq!(hc(&a, i, i).unwrap(), hc(&a, i, i + 2).unwrap());
    }
}

/// In degree `2K` the total complex of the resolution of `Z/m` has one
/// generator per column, `s = 0..=K`, and the boundary from degree `2K + 1`
/// is upper bidiagonal with `m` on the diagonal and `K + 1 - s` above it.
fn even_boundary(m: &BigInt, k: i64) -> SparseIntMatrix {
    let n = (k + 1) as usize;
    let mut d = SparseIntMatrix::zeros(n, n);
    for s in 0..n {
        d.set(s, s, m.clone());
        if s > 0 {
            d.set(s - 1, s, b(k + 1 - s as i64));
        }
    }
    d
}

/// Orders of the relative groups from the hand-built presentations: the odd
/// group `2K - 1` is the cokernel of `HC_{2K}(Z/p^n) -> HC_{2K}(Z/p^{n-1})`,
/// which multiplies column `s` by `p^{K-s}`.
fn relative_oracle(p: i64, n: u32, i: i64) -> AbelianGroup {
    let (m, m2) = (b(p).pow(n), b(p).pow(n - 1));
    let coker_at = |k: i64| {
        let scale: Vec<BigInt> = (0..=k).map(|s| b(p).pow((k - s) as u32)).collect();
        let f = SparseIntMatrix::diagonal((k + 1) as usize, (k + 1) as usize, &scale);
        crate::intlin::cokernel(&even_boundary(&m2, k).hstack(&f))
    };
    if i % 2 == 1 {
        return coker_at((i + 1) / 2);
    }
    let k = i / 2;
    let src = crate::intlin::cokernel(&even_boundary(&m, k));
    let tgt = crate::intlin::cokernel(&even_boundary(&m2, k));
    // exact: 0 -> rel_{2K} -> HC_{2K}(src) -> HC_{2K}(tgt) -> rel_{2K-1} -> 0
    let order = src.order().unwrap() * coker_at(k).order().unwrap() / tgt.order().unwrap();
    AbelianGroup::cyclic(order)
}

#[test]
fn hc_matches_bidiagonal_oracle() {
    for (p, n) in [(3, 1), (3, 2), (5, 2), (7, 3)] {
        let m = b(p).pow(n);
        let bundle = CyclicComplexBundle::new(&koszul(p, n), 2 * p + 1).unwrap();
        for k in 0..=p {
            let oracle = crate::intlin::cokernel(&even_boundary(&m, k));
            assert_eq!(bundle.homology(2 * k).unwrap(), oracle, "HC_{} for p={p} n={n}", 2 * k);
            assert!(bundle.homology(2 * k + 1).unwrap().is_trivial());
        }
    }
}

#[test]
fn relative_groups_of_the_tower() {
    for (p, n) in [(3, 2), (5, 2), (3, 3)] {
        let f = reduction_map(&b(p).pow(n), &b(p).pow(n - 1)).unwrap();
        let rel = RelativeCyclic::new(&f, 2 * p - 1).unwrap();
        for i in 0..2 * p - 1 {
            let expect = if i % 2 == 1 {
                AbelianGroup::trivial()
            } else {
                AbelianGroup::cyclic(b(p).pow(i as u32 / 2 + 1))
            };
            assert_eq!(rel.homology(i).unwrap(), expect, "relative HC_{i} for p={p} n={n}");
            assert_eq!(rel.homology(i).unwrap().order(), relative_oracle(p, n, i).order());
        }
        // at 2p - 1 the cokernel of HC_{2p} survives, since B(t^p) = p·1[t^p]
        let top = rel.homology(2 * p - 1).unwrap();
        assert_eq!(top, relative_oracle(p, n, 2 * p - 1));
        assert_eq!(top, AbelianGroup::cyclic(b(p)));
        let report = rel.les_check().unwrap();
        assert!(report.all_exact(), "{:?}", report.first_failure());
    }
}

#[test]
fn relative_groups_of_identity_vanish() {
    let a = koszul(3, 2);
    let f = DGAMorphism::identity(&a);
    for i in 0..=4 {
        assert!(hc_relative(&f, i, 4).unwrap().is_trivial());
    }
}

#[test]
fn tower_surjectivity() {
    for (p, n, i) in [(3, 2, 2), (3, 2, 1), (5, 3, 4), (2, 2, 3)] {
        let r = hc_tower_surjectivity(p, n, i).unwrap();
        assert!(r.onto, "{r:?}");
        assert!(r.in_verified_range);
    }
    assert!(matches!(hc_tower_surjectivity(3, 2, 6), Err(Error::Range(_))));
    assert!(matches!(hc_tower_surjectivity(4, 2, 1), Err(Error::InvalidParams(_))));
    assert!(matches!(hc_tower_surjectivity(3, 1, 1), Err(Error::InvalidParams(_))));
    let r = hc_tower_surjectivity_unchecked(3, 2, 6).unwrap();
    assert!(!r.in_verified_range);
}

#[test]
fn sbi_sequences_are_exact() {
    let dual = DGAlgebra::new(vec![("1".into(), 0), ("x".into(), 0)], "1", vec![], vec![]).unwrap();
    let samples = [base_ring(), koszul(3, 2), koszul(5, 1), dual];
    for a in &samples {
        let report = CyclicComplexBundle::new(a, 5).unwrap().sbi_check().unwrap();
        assert!(report.all_exact(), "{:?}", report.first_failure());
        assert!(!report.checks.is_empty());
    }
}

#[test]
fn sbi_order_bookkeeping_reproduces_the_table() {
    // with HH_{odd} = 0 the sequence splits into 0 -> HH_{2k} -> HC_{2k} -> HC_{2k-2} -> 0
    let (p, n) = (3i64, 2u32);
    let bundle = CyclicComplexBundle::new(&koszul(p, n), 2 * p - 2).unwrap();
    let mut order = BigInt::one();
    for k in 0..p {
        let hh = bundle.hochschild().homology(2 * k).unwrap();
        order *= hh.order().unwrap();
        assert_eq!(bundle.homology(2 * k).unwrap().order().unwrap(), order);
        assert_eq!(order, b(p).pow(n * (k as u32 + 1)));
    }
}

#[test]
fn mod_p_control_counts_one_class_per_degree() {
    for (p, n) in [(2, 1), (3, 2), (5, 1)] {
        let groups = mod_p_control(p as u64, n, 2 * p - 1).unwrap();
        for (i, g) in groups.iter().enumerate() {
            assert_eq!(g, &AbelianGroup::cyclic(b(p)), "degree {i}");
        }
    }
}

#[test]
fn e1_page_is_hochschild_homology() {
    let (p, n) = (3i64, 2u32);
    let bundle = CyclicComplexBundle::new(&koszul(p, n), 2 * p - 1).unwrap();
    let e1 = bundle.bicomplex().e1().unwrap();
    assert!(!e1.is_empty());
    for (&(s, t), g) in &e1 {
        let expect = if (t - s) % 2 == 0 { AbelianGroup::cyclic(b(p).pow(n)) } else { AbelianGroup::trivial() };
        assert_eq!(g, &expect, "E1 at ({s}, {t})");
    }
}

#[test]
fn e1_horizontal_maps_mod_p_are_isomorphisms() {
    let p = 5i64;
    let pb = b(p);
    let bundle = CyclicComplexBundle::new(&koszul(p, 2), 2 * p - 1).unwrap();
    let bi = bundle.bicomplex();
    let mut seen = 0;
    for (s, t) in bi.cells().collect::<Vec<_>>() {
        let j = t - s;
        if s == 0 || s + t >= 2 * p - 1 {
            continue;
        }
        let m = bi.e1_horizontal(s, t, Some(&pb)).unwrap();
        assert_eq!(m.shape(), (1, 1));
        let x = m.get(0, 0).mod_floor(&pb);
        if j % 2 == 1 {
            // t[t^{k-1}] ↦ k·1[t^k] with k < p
            assert!(!x.is_zero(), "E1 differential at ({s}, {t}) is not invertible mod p");
            seen += 1;
        } else {
            assert!(x.is_zero());
        }
    }
    assert!(seen > 0);
}
