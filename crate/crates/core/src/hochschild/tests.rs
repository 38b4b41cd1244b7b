use super::*;
use crate::dga::{base_ring, koszul_resolution, reduction_map, Combo};
use crate::intlin::homology_pair;

fn b(v: i64) -> BigInt {
    BigInt::from(v)
}

fn dual_numbers() -> DGAlgebra {
    DGAlgebra::new(vec![("1".into(), 0), ("x".into(), 0)], "1", vec![], vec![]).unwrap()
}

/// Upper triangular 2x2 matrices on the basis {1, e12, e22}.
fn triangular() -> DGAlgebra {
    DGAlgebra::new(
        vec![("1".into(), 0), ("e12".into(), 0), ("e22".into(), 0)],
        "1",
        vec![
            (("e12".into(), "e22".into()), vec![("e12".into(), b(1))]),
            (("e22".into(), "e22".into()), vec![("e22".into(), b(1))]),
        ],
        vec![],
    )
    .unwrap()
}

/// Polynomial generator of degree 2 truncated at x^2.
fn graded_dual_numbers() -> DGAlgebra {
    DGAlgebra::new(vec![("1".into(), 0), ("x".into(), 2)], "1", vec![], vec![]).unwrap()
}

/// Unnormalized Hochschild homology of an algebra concentrated in degree 0:
/// chains are all of `A^{⊗(n+1)}`, `b = Σ (-1)^i d_i`.
fn unnormalized_hh(a: &DGAlgebra, i: usize) -> AbelianGroup {
    let dim = a.dim();
    let tuples = |n: usize| -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for _ in 0..=n {
            out = out
                .into_iter()
                .flat_map(|t| (0..dim).map(move |x| [t.clone(), vec![x]].concat()))
                .collect();
        }
        out
    };
    let boundary = |n: usize| -> SparseIntMatrix {
        if n == 0 {
            return SparseIntMatrix::zeros(0, dim);
        }
        let src = tuples(n);
        let tgt = tuples(n - 1);
        let pos: HashMap<Vec<usize>, usize> = tgt.iter().enumerate().map(|(k, t)| (t.clone(), k)).collect();
        let mut m = SparseIntMatrix::zeros(tgt.len(), src.len());
        for (c, t) in src.iter().enumerate() {
            for face in 0..=n {
                let s = if face % 2 == 0 { b(1) } else { b(-1) };
                let (prod, rest): (Combo, Vec<usize>) = if face < n {
                    (a.product(t[face], t[face + 1]), vec![])
                } else {
                    (a.product(t[n], t[0]), t[1..n].to_vec())
                };
                for (&y, v) in &prod {
                    let w = if face < n {
                        let mut w = t[..face].to_vec();
                        w.push(y);
                        w.extend_from_slice(&t[face + 2..]);
                        w
                    } else {
                        [vec![y], rest.clone()].concat()
                    };
                    m.add_to(pos[&w], c, &(&s * v));
                }
            }
        }
        m
    };
    homology_pair(&boundary(i), &boundary(i + 1)).unwrap()
}

#[test]
fn koszul_words_match_generators() {
    let h = hochschild_complex(&koszul_resolution(&b(9)).unwrap(), 6).unwrap();
    let t = 1;
    for k in 1..=3i64 {
        assert_eq!(h.words(2 * k), &[[vec![0], vec![t; k as usize]].concat()]);
        assert_eq!(h.words(2 * k - 1), &[vec![t; k as usize]]);
    }
    assert_eq!(h.words(0), &[vec![0]]);
    for n in 0..=7 {
        assert!(h.words(n).len() <= 1);
    }
    // D(t[t^{k-1}]) = 9·1[t^{k-1}] and B(t[t^{k-1}]) = k·1[t^k]
    for k in 1..=3i64 {
        assert_eq!(h.differential(2 * k - 1).to_dense(), vec![vec![b(9)]]);
        assert!(h.b_matrix(2 * k - 1).is_zero());
        assert_eq!(h.connes_matrix(2 * k - 1).to_dense(), vec![vec![b(k)]]);
        assert!(h.connes_matrix(2 * k - 2).is_zero());
    }
}

#[test]
fn hh_of_koszul_resolution() {
    for (p, n) in [(2, 1), (3, 2), (5, 1)] {
        let m = b(p).pow(n);
        let a = koszul_resolution(&m).unwrap();
        let h = hochschild_complex(&a, 6).unwrap();
        for i in 0..=6 {
            let expect = if i % 2 == 0 { AbelianGroup::cyclic(m.clone()) } else { AbelianGroup::trivial() };
            assert_eq!(h.homology(i).unwrap(), expect, "HH_{i} for {m}");
        }
    }
}

#[test]
fn hh_of_base_ring() {
    let z = base_ring();
    let h = hochschild_complex(&z, 4).unwrap();
    assert_eq!(h.words(0), &[vec![0]]);
    assert!(h.words(1).is_empty());
    assert_eq!(h.homology(0).unwrap(), AbelianGroup::free(1));
    for i in 1..=4 {
        assert!(h.homology(i).unwrap().is_trivial());
    }
    assert!(matches!(hh(&z, 5, 4), Err(Error::BoundTooSmall(_))));
    assert!(matches!(hochschild_complex(&z, -1), Err(Error::BoundTooSmall(_))));
}

#[test]
fn normalized_matches_unnormalized_oracle() {
    for a in [dual_numbers(), triangular()] {
        for i in 0..=3 {
            assert_eq!(hh(&a, i, 3).unwrap(), unnormalized_hh(&a, i as usize), "HH_{i} of {:?}", a.labels());
        }
    }
    // upper triangular matrices are Morita-equivalent to a product of two copies of Z
    assert_eq!(hh(&triangular(), 0, 2).unwrap(), AbelianGroup::free(2));
    assert!(hh(&triangular(), 1, 2).unwrap().is_trivial());
}

#[test]
fn identities_hold_on_graded_algebras() {
    let samples = [
        koszul_resolution(&b(4)).unwrap().tensor(&koszul_resolution(&b(6)).unwrap()),
        graded_dual_numbers(),
        triangular().tensor(&koszul_resolution(&b(3)).unwrap()),
        dual_numbers().tensor(&graded_dual_numbers()),
    ];
    for a in &samples {
        // construction checks D² = 0, B² = 0 and DB + BD = 0
        let h = hochschild_complex(a, 4).unwrap();
        assert_eq!(connes_b(&h).len(), 5);
    }
}

#[test]
fn hh_is_independent_of_bound() {
    let a = koszul_resolution(&b(4)).unwrap().tensor(&koszul_resolution(&b(6)).unwrap());
    for i in 0..=3 {
        assert_eq!(hh(&a, i, i).unwrap(), hh(&a, i, 5).unwrap());
    }
}

#[test]
fn induced_maps() {
    let a = koszul_resolution(&b(25)).unwrap();
    let (src, _, id) = induced_map(&DGAMorphism::identity(&a), 4).unwrap();
    for n in 0..=5 {
        assert_eq!(id.component(n), SparseIntMatrix::identity(src.words(n).len()));
    }
    let f = reduction_map(&b(25), &b(5)).unwrap();
    let (src, tgt, map) = induced_map(&f, 4).unwrap();
    for k in 1..=2usize {
        // t^{⊗k} ↦ 5^k t'^{⊗k}
        let n = 2 * k as i64 - 1;
        let c = src.word_index(n, &vec![1; k]).unwrap();
        let r = tgt.word_index(n, &vec![1; k]).unwrap();
        assert_eq!(map.component(n).get(r, c), b(5).pow(k as u32));
    }
    let hs = src.complex().homology_presentation(0).unwrap();
    let ht = tgt.complex().homology_presentation(0).unwrap();
    let on_h0 = map.on_homology(0, &hs, &ht).unwrap();
    assert!(crate::intlin::lattice::Presentation::is_surjective(&ht.presentation(), &on_h0));
    assert_eq!(hs.group(), &AbelianGroup::cyclic(b(25)));
    assert_eq!(ht.group(), &AbelianGroup::cyclic(b(5)));
}

#[test]
fn induced_maps_compose() {
    let f = reduction_map(&b(27), &b(9)).unwrap();
    let g = reduction_map(&b(9), &b(3)).unwrap();
    let gf = f.then(&g).unwrap();
    let (_, _, mf) = induced_map(&f, 4).unwrap();
    let (_, _, mg) = induced_map(&g, 4).unwrap();
    let (_, _, mgf) = induced_map(&gf, 4).unwrap();
    for n in 0..=5 {
        assert_eq!(mgf.component(n), &mg.component(n) * &mf.component(n));
    }
}
