use num_bigint::BigInt;
use proptest::prelude::*;

use shukla::complexes::{complex_from_json, complex_to_json};
use shukla::dga::{dga_from_toml, dga_to_toml, koszul_resolution};
use shukla::filtered::{adic_filtration, adic_filtration_power, filtered_ring_from_toml, filtered_ring_to_toml};
use shukla::hochschild::HochschildComplex;
use shukla::intlin::AbelianGroup;

#[test]
fn group_json() {
    let g = AbelianGroup::from_orders(2, vec![BigInt::from(4), BigInt::from(6)]);
    let text = serde_json::to_string(&g).unwrap();
    assert_eq!(text, r#"{"free_rank":2,"invariant_factors":["2","12"]}"#);
    assert_eq!(serde_json::from_str::<AbelianGroup>(&text).unwrap(), g);
}

#[test]
fn hochschild_chains_round_trip() {
    let a = koszul_resolution(&BigInt::from(49)).unwrap();
    let h = HochschildComplex::new(&a, 5).unwrap();
    let back = complex_from_json(&complex_to_json(h.complex())).unwrap();
    assert_eq!(&back, h.complex());
    for i in 0..5 {
        assert_eq!(back.homology(i).unwrap(), h.homology(i).unwrap());
    }
}

#[test]
fn filtered_ring_round_trip() {
    for (p, n, e) in [(2u64, 3u32, 1u32), (3, 4, 2), (5, 2, 1)] {
        let r = adic_filtration_power(p, n, e).unwrap();
        let back = filtered_ring_from_toml(&filtered_ring_to_toml(&r).unwrap()).unwrap();
        assert_eq!(back, r);
    }
}

#[test]
fn graded_ring_groups_survive_toml() {
    let g = adic_filtration(3, 3).unwrap().graded();
    let back = filtered_ring_from_toml(&filtered_ring_to_toml(&g).unwrap()).unwrap();
    for s in g.lo()..=0 {
        assert_eq!(back.group().group(s), g.group().group(s));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn koszul_toml_round_trip(m in 2u64..10_000) {
        let a = koszul_resolution(&BigInt::from(m)).unwrap();
        prop_assert_eq!(dga_from_toml(&dga_to_toml(&a)).unwrap(), a);
    }

    #[test]
    fn group_normal_form_is_canonical(free in 0usize..3, orders in prop::collection::vec(1u64..200, 0..5)) {
        let orders: Vec<BigInt> = orders.into_iter().map(BigInt::from).collect();
        let g = AbelianGroup::from_orders(free, orders.clone());
        let mut rev = orders.clone();
        rev.reverse();
        prop_assert_eq!(&AbelianGroup::from_orders(free, rev), &g);
        let expect: BigInt = orders.iter().product();
        prop_assert_eq!(g.torsion_order(), expect);
        let f = g.invariant_factors();
        prop_assert!(f.windows(2).all(|w| (&w[1] % &w[0]) == BigInt::from(0)));
        prop_assert!(f.iter().all(|d| d > &BigInt::from(1)));
    }
}
