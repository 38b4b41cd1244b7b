use num_rational::BigRational;
use proptest::prelude::*;

use super::*;

fn b(v: i64) -> BigInt {
    BigInt::from(v)
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(b(n), b(d))
}

/// Units of `Z/m`, counted directly.
fn unit_count(m: u64) -> u64 {
    (1..m).filter(|x| x.gcd(&m) == 1).count() as u64
}

#[test]
fn square_zero_ranges() {
    for p in [3u64, 5, 7, 11] {
        let c = goodwillie_range(p, 2).unwrap();
        assert_eq!(c.iso_below, ratio(p as i64 - 2, 1));
        assert_eq!(c.surj_below, ratio(p as i64 - 1, 1));
        for i in 0..p as i64 - 2 {
            assert!(c.is_iso(i));
        }
        assert!(!c.is_iso(p as i64 - 2));
        assert!(c.is_surjection(p as i64 - 2));
        assert!(!c.is_surjection(p as i64 - 1));
    }
    let c = goodwillie_range(7, 2).unwrap();
    assert!(c.is_iso(4));
    assert!(!c.is_iso(5));
    assert_eq!(c.classify(5), Certificate::Surjection);
    assert_eq!(c.classify(6), Certificate::Unverified);
    assert_eq!(c.classify(-1), Certificate::Surjection);
}

#[test]
fn cube_zero_range() {
    let c = goodwillie_range(5, 3).unwrap();
    assert_eq!(c.iso_below, ratio(1, 2));
    assert_eq!(c.surj_below, ratio(3, 2));
    assert!(c.is_iso(0));
    assert!(!c.is_iso(1));
    assert!(c.is_surjection(1));
}

#[test]
fn range_errors() {
    assert!(matches!(goodwillie_range(6, 2), Err(Error::InvalidParams(_))));
    assert!(matches!(goodwillie_range(5, 1), Err(Error::InvalidParams(_))));
}

#[test]
fn relative_k_in_the_iso_range() {
    for (p, n) in [(5u64, 2u32), (7, 2), (7, 3)] {
        for i in 0..=p as i64 - 3 {
            let r = relative_k(p, n, i, i).unwrap();
            assert_eq!(r.certificate, Certificate::Iso);
            let expect = if i % 2 == 1 { AbelianGroup::cyclic(b(p as i64).pow(((i + 1) / 2) as u32)) } else { AbelianGroup::trivial() };
            assert_eq!(r.group, expect, "relative K_{i} for p={p} n={n}");
        }
    }
    let r = relative_k(7, 2, 6, 6).unwrap();
    assert_eq!(r.certificate, Certificate::Unverified);
    assert!(matches!(relative_k(7, 1, 1, 1), Err(Error::InvalidParams(_))));
    assert!(matches!(relative_k(7, 2, 3, 1), Err(Error::BoundTooSmall(_))));
}

#[test]
fn relative_k_matches_fresh_relative_cyclic_homology() {
    let f = reduction_map(&b(125), &b(25)).unwrap();
    for i in 1..=4 {
        let r = relative_k(5, 3, i, 4).unwrap();
        assert_eq!(r.hc_group, hc_relative(&f, i - 1, i).unwrap());
    }
}

#[test]
fn closed_form_groups() {
    assert_eq!(k_group(7, 2, 1).unwrap(), AbelianGroup::cyclic(b(42)));
    assert_eq!(unit_count(49), 42);
    assert_eq!(k_group(7, 1, 3).unwrap(), AbelianGroup::cyclic(b(48)));
    assert_eq!(k_group(7, 3, 3).unwrap(), AbelianGroup::cyclic(b(7).pow(4) * 48));
    assert!(k_group(7, 3, 2).unwrap().is_trivial());
    for (p, n) in [(5u64, 1u32), (5, 3), (7, 2), (11, 3)] {
        assert_eq!(k_group(p, n, 1).unwrap().order().unwrap(), b(unit_count(p.pow(n)) as i64));
    }
}

#[test]
fn closed_form_range() {
    assert!(matches!(k_group(7, 2, 5), Err(Error::OutOfRange(_))));
    assert!(matches!(k_group(7, 2, 0), Err(Error::OutOfRange(_))));
    assert!(matches!(k_group(8, 2, 1), Err(Error::InvalidParams(_))));
}

#[test]
fn tables() {
    let t = k_table(5, 2).unwrap();
    assert_eq!(t.len(), 2);
    assert_eq!(t[0].group, AbelianGroup::cyclic(b(20)));
    assert!(t[1].group.is_trivial());

    let t = k_table(7, 1).unwrap();
    let groups: Vec<AbelianGroup> = t.iter().map(|e| e.group.clone()).collect();
    let expect = [b(6), b(1), b(48), b(1)].map(|o| AbelianGroup::from_orders(0, vec![o]));
    assert_eq!(groups, expect);
    for e in &t {
        assert!(e.p_part.is_trivial());
        assert!(e.matches_closed_form);
    }
    assert!(matches!(k_table(3, 2), Err(Error::RangeEmpty(_))));
    assert!(matches!(k_table(2, 2), Err(Error::RangeEmpty(_))));
}

#[test]
fn table_bookkeeping_along_the_tower() {
    let t = k_table(7, 3).unwrap();
    for e in &t {
        assert!(e.matches_closed_form, "{e:?}");
        assert_eq!(e.tower.len(), 2);
        if e.degree % 2 == 1 {
            let j = ((e.degree + 1) / 2) as u32;
            // ∏_{n'=2}^{3} p^j = p^{2j}
            assert_eq!(e.p_part.order().unwrap(), b(7).pow(2 * j));
            assert!(e.provenance.iter().any(|s| s.starts_with("AXIOM-TC")));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closed_form_is_cyclic_of_the_right_order(
        p in prop::sample::select(vec![5u64, 7, 11, 13, 17]),
        n in 1u32..=6,
        j in 1u32..=7,
    ) {
        let i = 2 * j as i64 - 1;
        prop_assume!(i <= p as i64 - 3);
        let g = k_group(p, n, i).unwrap();
        let pb = b(p as i64);
        prop_assert!(g.is_cyclic());
        prop_assert_eq!(g.order().unwrap(), pb.pow(j * (n - 1)) * (pb.pow(j) - 1));
        let q = k_group(p, 1, i).unwrap();
        prop_assert!(q.p_part(&pb).is_trivial());
    }

    #[test]
    fn certificates_shrink_with_m(p in prop::sample::select(vec![3u64, 5, 7, 11]), m in 2u32..=6) {
        let a = goodwillie_range(p, m).unwrap();
        let c = goodwillie_range(p, m + 1).unwrap();
        prop_assert!(a.iso_below < a.surj_below);
        prop_assert!(c.iso_below <= a.iso_below && c.surj_below <= a.surj_below);
    }
}
