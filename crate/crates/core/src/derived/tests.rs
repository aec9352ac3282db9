use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::abgrp::CanonicalForm;
use crate::gen::{random_complex, random_finite_complex, ComplexShape};

fn zn(n: u64) -> FgAbGroup {
    FgAbGroup::cyclic(n)
}

fn at(g: FgAbGroup, n: i64) -> CochainComplex {
    CochainComplex::concentrated(g, n)
}

fn m1(c: i64) -> IntMatrix {
    IntMatrix::from_rows(&[[c]], 1)
}

fn cf(free_rank: usize, t: &[i64]) -> CanonicalForm {
    CanonicalForm {
        free_rank,
        invariant_factors: t.iter().map(|&x| BigInt::from(x)).collect(),
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn assert_quasi_iso(k: &CochainComplex) {
    let r = free_replacement(k);
    assert!(r.complex.is_free());
    assert!(r.complex.lo() >= k.lo() - 1);
    for n in k.lo() - 2..=k.hi() + 1 {
        assert!(
            r.quasi.induced(n).unwrap().is_isomorphism().unwrap(),
            "H^{n} not preserved for {k}"
        );
    }
}

#[test]
fn free_replacement_examples() {
    let k = CochainComplex::two_term(-1, zn(0), zn(0), m1(2)).unwrap();
    let r = free_replacement(&k);
    assert_eq!(r.complex, k);
    assert_eq!(r.quasi, ChainMap::identity(&k));

    let r = free_replacement(&at(zn(2), 0));
    let expect = CochainComplex::two_term(-1, zn(0), zn(0), m1(2)).unwrap();
    assert_eq!(r.complex, expect);
    assert_quasi_iso(&at(zn(2), 0));
}

#[test]
fn free_replacement_is_memoized_and_deterministic() {
    let k = random_complex(&mut rng(1), &ComplexShape::length3());
    let a = free_replacement(&k);
    let b = build_replacement(&k);
    assert_eq!(a, b);
    assert_eq!(a, free_replacement(&k));
}

#[test]
fn rhom_examples() {
    let g = random_complex(&mut rng(2), &ComplexShape::length3());
    let h = rhom(&at(zn(0), 0), &g).unwrap();
    for n in -3..=1 {
        assert!(h.cohomology_at(n).is_isomorphic(&g.cohomology_at(n)));
    }
    let h = rhom(&at(zn(2), 0), &at(zn(2), 0)).unwrap();
    assert_eq!(h.cohomology_at(0).canonical_form(), cf(0, &[2]));
    assert_eq!(h.cohomology_at(1).canonical_form(), cf(0, &[2]));
}

#[test]
fn ext_examples() {
    let z = at(zn(0), 0);
    assert_eq!(ext_group(&z, &z, 0).unwrap().canonical_form(), cf(1, &[]));
    let z2 = at(zn(2), 0);
    assert_eq!(ext_group(&z2, &z2, 1).unwrap().canonical_form(), cf(0, &[2]));
    for m in 1..=12u64 {
        for n in 1..=12u64 {
            let (p, g) = (at(zn(m), 0), at(zn(n), 0));
            let d = m.gcd(&n);
            let expect = if d == 1 { cf(0, &[]) } else { cf(0, &[d as i64]) };
            assert_eq!(ext_group(&p, &g, 1).unwrap().canonical_form(), expect);
            assert_eq!(ext_group(&p, &g, 0).unwrap().canonical_form(), expect);
        }
    }
}

#[test]
fn homotopy_group_examples() {
    let [a, b, c] = homotopy_groups(&at(zn(4), 0)).unwrap();
    assert_eq!(a.canonical_form(), cf(0, &[4]));
    assert!(b.is_trivial() && c.is_trivial());
    let p = CochainComplex::from_matrices(
        -2,
        vec![zn(0), zn(0), FgAbGroup::trivial()],
        vec![m1(2), IntMatrix::zeros(0, 1)],
    )
    .unwrap();
    let [a, b, c] = homotopy_groups(&p).unwrap();
    assert!(a.is_trivial() && c.is_trivial());
    assert_eq!(b.canonical_form(), cf(0, &[2]));
    assert!(matches!(
        homotopy_groups(&at(zn(2), 1)),
        Err(Error::DegreeRange(_))
    ));
}

#[test]
fn hom_2picard_examples() {
    let g = random_complex(&mut rng(4), &ComplexShape::length3());
    let h = hom_2picard(&at(zn(0), 0), &g).unwrap();
    for n in -2..=0 {
        assert!(h.cohomology_at(n).is_isomorphic(&g.cohomology_at(n)));
    }
    let z2 = at(zn(2), 0);
    let h = hom_2picard(&z2, &z2).unwrap();
    assert_eq!(h.cohomology_at(0).canonical_form(), cf(0, &[2]));
    assert!(h.cohomology_at(-1).is_trivial());
    assert!(h.cohomology_at(-2).is_trivial());
    assert!(h.cohomology_at(1).is_trivial());
}

#[test]
fn ext_homotopy_group_examples() {
    let names = |gs: [FgAbGroup; 4]| gs.map(|g| g.to_string());
    let z = at(zn(0), 0);
    assert_eq!(names(ext_homotopy_groups(&z, &z).unwrap()), ["0", "Z", "0", "0"]);
    let z2 = at(zn(2), 0);
    assert_eq!(
        names(ext_homotopy_groups(&z2, &z2).unwrap()),
        ["Z/2", "Z/2", "0", "0"]
    );
    // Ext^i(Z/2, Z/2[2]) = Ext^{i+2}(Z/2, Z/2): nonzero for i = −1, −2
    assert_eq!(
        names(ext_homotopy_groups(&z2, &at(zn(2), -2)).unwrap()),
        ["0", "0", "Z/2", "Z/2"]
    );
}

#[test]
fn realize_examples() {
    let z2 = at(zn(2), 0);
    let model = ext_model(&z2, &z2, 1).unwrap();
    let zero = realize_extension(&model.zero()).unwrap();
    assert!(zero.splits_in_cohomology());
    assert!(classify_extension(&zero).unwrap().is_zero());
    let gen = &model.generators()[0];
    let e = realize_extension(gen).unwrap();
    assert_eq!(e.complex.cohomology_at(0).canonical_form(), cf(0, &[4]));
    assert!(!e.splits_in_cohomology());
    assert_eq!(&classify_extension(&e).unwrap(), gen);
    assert!(e.proj.induced(0).unwrap().is_surjective());
}

#[test]
fn classify_z4_by_hand() {
    // 0 → Z/2 →×2 Z/4 → Z/2 → 0
    let z2 = at(zn(2), 0);
    let z4 = at(zn(4), 0);
    let x = Extension {
        complex: z4.clone(),
        incl: ChainMap::new(&z2, &z4, BTreeMap::from([(0, m1(2))])).unwrap(),
        proj: ChainMap::new(&z4, &z2, BTreeMap::from([(0, m1(1))])).unwrap(),
    };
    let c = classify_extension(&x).unwrap();
    assert!(!c.is_zero());
    assert_eq!(c.scale(2), c.ext().zero());
    let split = Extension {
        complex: z2.direct_sum(&z2),
        incl: ChainMap::new(&z2, &z2.direct_sum(&z2), BTreeMap::from([(0, IntMatrix::from_rows(&[[1], [0]], 1))]))
            .unwrap(),
        proj: ChainMap::new(&z2.direct_sum(&z2), &z2, BTreeMap::from([(0, IntMatrix::from_rows(&[[0, 1]], 2))]))
            .unwrap(),
    };
    assert!(classify_extension(&split).unwrap().is_zero());
}

#[test]
fn classify_rejects_non_surjective_j() {
    let z2 = at(zn(2), 0);
    let x = Extension {
        complex: z2.clone(),
        incl: ChainMap::identity(&z2),
        proj: ChainMap::zero(&z2, &z2),
    };
    assert!(matches!(classify_extension(&x), Err(Error::Invalid(_))));
}

#[test]
fn ext_class_rejects_non_cocycles() {
    let z2 = at(zn(2), 0);
    let model = ext_model(&z2, &z2, 0).unwrap();
    // Hom⁰(F, Z/2) has one generator per F⁰ generator; the map to Hom¹ is ×2 on F⁻¹.
    let n = model.hom.complex.group(0).n_gens();
    let mut v = vec![BigInt::from(0); n];
    v[0] = BigInt::from(1);
    assert!(model.class_of_cocycle(&v).is_ok());
    let model = ext_model(&at(zn(0), 0), &CochainComplex::two_term(0, zn(0), zn(0), m1(1)).unwrap(), 0)
        .unwrap();
    let v = vec![BigInt::from(1); model.hom.complex.group(0).n_gens()];
    assert!(matches!(model.class_of_cocycle(&v), Err(Error::Invalid(_))));
}

#[test]
fn pullback_and_pushout_basics() {
    let z2 = at(zn(2), 0);
    let z4 = at(zn(4), 0);
    let model = ext_model(&z2, &z2, 1).unwrap();
    let xi = &model.generators()[0];
    assert_eq!(&pullback_class(&ChainMap::identity(&z2), xi).unwrap(), xi);
    assert_eq!(&pushout_class(&ChainMap::identity(&z2), xi).unwrap(), xi);
    assert!(pushout_class(&ChainMap::zero(&z2, &z4), xi).unwrap().is_zero());
    // reduction Z/4 → Z/2 pulls back into Ext¹(Z/4, Z/2) = Z/2
    let f = ChainMap::new(&z4, &z2, BTreeMap::from([(0, m1(1))])).unwrap();
    let pulled = pullback_class(&f, xi).unwrap();
    assert_eq!(pulled.ext().group().to_string(), "Z/2");
    assert!(matches!(
        pullback_class(&ChainMap::identity(&z4), xi),
        Err(Error::Mismatch(_))
    ));
}

fn small_pair(seed: u64) -> (CochainComplex, CochainComplex) {
    let mut r = rng(seed);
    let p = random_finite_complex(&mut r, -2, 0, 2);
    let g = random_complex(
        &mut r,
        &ComplexShape {
            lo: -2,
            hi: 0,
            blocks: 2,
            orders: crate::gen::MIXED,
            scramble: true,
        },
    );
    (p, g)
}

/// Inclusion `P → P ⊕ Q` or projection `P ⊕ Q → P`.
fn block_maps(p: &CochainComplex, q: &CochainComplex, inclusion: bool) -> BTreeMap<i64, IntMatrix> {
    (-2..=0)
        .map(|n| {
            let (a, b) = (p.group(n).n_gens(), q.group(n).n_gens());
            let m = if inclusion {
                IntMatrix::identity(a).vstack(&IntMatrix::zeros(b, a)).unwrap()
            } else {
                IntMatrix::identity(a).hstack(&IntMatrix::zeros(a, b)).unwrap()
            };
            (n, m)
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn replacement_is_quasi_iso(seed in any::<u64>()) {
        let k = random_complex(&mut rng(seed), &ComplexShape::length3());
        assert_quasi_iso(&k);
    }

    #[test]
    fn ext_vanishes_outside_range(seed in any::<u64>()) {
        let (p, g) = small_pair(seed);
        let h = rhom(&p, &g).unwrap();
        for i in [-6, -5, -4, -3, 4, 5] {
            prop_assert!(h.cohomology_at(i).is_trivial(), "Ext^{} nonzero", i);
        }
    }

    #[test]
    fn ext_additive_in_source(a in any::<u64>(), b in any::<u64>()) {
        let (p, g) = small_pair(a);
        let (p2, _) = small_pair(b);
        let s = p.direct_sum(&p2);
        for i in -2..=1 {
            let lhs = ext_group(&s, &g, i).unwrap();
            let rhs = ext_group(&p, &g, i).unwrap().direct_sum(&ext_group(&p2, &g, i).unwrap());
            prop_assert!(lhs.is_isomorphic(&rhs));
        }
    }

    #[test]
    fn rhom_invariant_under_quasi_iso(seed in any::<u64>()) {
        let (p, g) = small_pair(seed);
        // P and its free replacement are quasi-isomorphic
        let f = free_replacement(&p).complex;
        for i in -2..=1 {
            prop_assert!(ext_group(&p, &g, i).unwrap().is_isomorphic(&ext_group(&f, &g, i).unwrap()));
        }
    }

    #[test]
    fn hom_2picard_matches_ext(seed in any::<u64>()) {
        let (p, g) = small_pair(seed);
        let h = hom_2picard(&p, &g).unwrap();
        for i in -2..=0 {
            prop_assert!(h.cohomology_at(i).is_isomorphic(&ext_group(&p, &g, i).unwrap()));
        }
        prop_assert!(h.cohomology_at(1).is_trivial());
    }

    #[test]
    fn homotopy_groups_of_sum(a in any::<u64>(), b in any::<u64>()) {
        let (p, _) = small_pair(a);
        let (q, _) = small_pair(b);
        let s = homotopy_groups(&p.direct_sum(&q)).unwrap();
        let x = homotopy_groups(&p).unwrap();
        let y = homotopy_groups(&q).unwrap();
        for k in 0..3 {
            prop_assert!(s[k].is_isomorphic(&x[k].direct_sum(&y[k])));
        }
    }

    #[test]
    fn round_trip_and_baer_sum(seed in any::<u64>()) {
        let (p, g) = small_pair(seed);
        let model = ext_model(&p, &g, 1).unwrap();
        let mut r = rng(seed ^ 0x5eed);
        let a = model.random(&mut r);
        let b = model.random(&mut r);
        let ea = realize_extension(&a).unwrap();
        let eb = realize_extension(&b).unwrap();
        prop_assert_eq!(&classify_extension(&ea).unwrap(), &a);
        prop_assert!(ea.proj.induced(0).unwrap().is_surjective());
        prop_assert!(ea.incl.induced(-2).unwrap().is_injective().unwrap());
        if a.is_zero() {
            prop_assert!(ea.splits_in_cohomology());
        }
        let sum = baer_sum(&ea, &eb).unwrap();
        prop_assert_eq!(classify_extension(&sum).unwrap(), a.add(&b).unwrap());
    }

    #[test]
    fn pullback_functorial(seed in any::<u64>(), c1 in -2i64..=2, c2 in -2i64..=2) {
        let (p, g) = small_pair(seed);
        let model = ext_model(&p, &g, 1).unwrap();
        let xi = model.random(&mut rng(seed));
        let f = ChainMap::identity(&p).scale(c1);
        let f2 = ChainMap::identity(&p).scale(c2);
        let lhs = pullback_class(&f.compose(&f2).unwrap(), &xi).unwrap();
        let rhs = pullback_class(&f2, &pullback_class(&f, &xi).unwrap()).unwrap();
        prop_assert_eq!(&lhs, &rhs);
        prop_assert_eq!(&lhs, &xi.scale(c1 * c2));
        // P → P ⊕ Q → P is the identity
        let (q, _) = small_pair(seed.wrapping_add(1));
        let s = p.direct_sum(&q);
        let inc = ChainMap::new(&p, &s, block_maps(&p, &q, true)).unwrap();
        let pr = ChainMap::new(&s, &p, block_maps(&p, &q, false)).unwrap();
        let back = pullback_class(&inc, &pullback_class(&pr, &xi).unwrap()).unwrap();
        prop_assert_eq!(&back, &xi);
        let g2 = ChainMap::identity(&g).scale(c1);
        prop_assert_eq!(pushout_class(&g2, &xi).unwrap(), xi.scale(c1));
    }
}

