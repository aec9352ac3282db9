use std::collections::BTreeMap;

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::gen::{random_complex, ComplexShape};
use crate::oracle::cyclic_limit_order;

fn zn(n: u64) -> FgAbGroup {
    FgAbGroup::cyclic(n)
}

fn m1(c: i64) -> IntMatrix {
    IntMatrix::from_rows(&[[c]], 1)
}

fn iso(a: &FgAbGroup, b: &FgAbGroup) -> bool {
    a.is_isomorphic(b)
}

fn vee() -> Arc<PosetSite> {
    PosetSite::new(&["a", "b", "c"], &[("a", "b"), ("a", "c")]).unwrap()
}

fn diamond() -> Arc<PosetSite> {
    PosetSite::new(
        &["a", "b", "c", "d"],
        &[("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")],
    )
    .unwrap()
}

#[test]
fn poset_construction() {
    let s = PosetSite::new(&["z", "a", "m"], &[("a", "m"), ("m", "z")]).unwrap();
    assert_eq!(s.labels(), ["a", "m", "z"]);
    assert!(s.leq(0, 2), "closure adds a <= z");
    assert!(!s.leq(2, 0));
    assert_eq!(s.max_chain_length(), 2);
    assert_eq!(s.chains(2), vec![vec![0, 1, 2]]);

    assert!(matches!(
        PosetSite::new(&["a", "b"], &[("a", "b"), ("b", "a")]),
        Err(Error::Invalid(_))
    ));
    assert!(matches!(
        PosetSite::new(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("c", "a")]),
        Err(Error::Invalid(_))
    ));
    assert!(PosetSite::new(&["a", "a"], &[]).is_err());
    assert!(PosetSite::new(&["a"], &[("a", "q")]).is_err());
    assert!(PosetSite::new(&["a"], &[("a", "a")]).is_err());

    let c = PosetSite::pseudo_circle();
    assert_eq!(c.chains(0).len(), 4);
    assert_eq!(c.chains(1), vec![vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3]]);
    assert_eq!(c.max_chain_length(), 1);
}

#[test]
fn sheaf_functoriality() {
    let d = diamond();
    let maps = |c: i64| {
        BTreeMap::from([
            ((0, 1), m1(1)),
            ((0, 2), m1(c)),
            ((1, 3), m1(1)),
            ((2, 3), m1(1)),
        ])
    };
    let ok = PosetSheaf::new(&d, vec![FgAbGroup::free(1); 4], maps(1)).unwrap();
    assert_eq!(ok.res(0, 3).unwrap().matrix(), &m1(1));
    assert!(ok.res(0, 0).unwrap().equals(&GroupHom::identity(&FgAbGroup::free(1))).unwrap());
    assert!(ok.res(3, 0).is_err());
    // the two paths a -> d differ
    assert!(matches!(
        PosetSheaf::new(&d, vec![FgAbGroup::free(1); 4], maps(2)),
        Err(Error::Invalid(_))
    ));
    // paths that agree modulo the stalk are fine
    let ok = PosetSheaf::new(&d, vec![zn(2), zn(2), zn(2), zn(2)], maps(3)).unwrap();
    assert!(ok.res(0, 3).unwrap().equals(&GroupHom::identity(&zn(2))).unwrap());

    let two = PosetSite::chain(2);
    assert!(matches!(
        PosetSheaf::new(&two, vec![zn(2), zn(3)], BTreeMap::from([((0, 1), m1(1))])),
        Err(Error::IllDefined(_))
    ));
    assert!(PosetSheaf::new(&two, vec![zn(2), zn(3)], BTreeMap::new()).is_err());
    assert!(PosetSheaf::new(&two, vec![zn(2)], BTreeMap::new()).is_err());
}

#[test]
fn sheaf_complex_checks() {
    let two = PosetSite::chain(2);
    let f = PosetSheaf::constant(&two, &FgAbGroup::free(1));
    // multiplication by 2 at x0 but 3 at x1 does not commute with identity restriction
    let bad = SheafComplex::new(&two, 0, vec![f.clone(), f.clone()], vec![vec![m1(2), m1(3)]]);
    assert!(matches!(bad, Err(Error::Invalid(_))));
    let good = SheafComplex::new(&two, 0, vec![f.clone(), f.clone()], vec![vec![m1(2), m1(2)]]);
    assert!(good.is_ok());
    let nd = SheafComplex::new(
        &two,
        0,
        vec![f.clone(), f.clone(), f.clone()],
        vec![vec![m1(1), m1(1)], vec![m1(1), m1(1)]],
    );
    assert!(matches!(nd, Err(Error::NotAComplex { degree: 0 })));
}

#[test]
fn nerve_examples() {
    let pt = PosetSite::one_point();
    let a = FgAbGroup::from_invariants(1, &[2]);
    let r = nerve_rgamma(&PosetSheaf::constant(&pt, &a));
    assert_eq!((r.lo(), r.hi()), (0, 0));
    assert_eq!(r.group(0), a);

    let r = nerve_rgamma(&PosetSheaf::constant(&PosetSite::pseudo_circle(), &FgAbGroup::free(1)));
    assert_eq!(r.group(0).n_gens(), 4);
    assert_eq!(r.group(1).n_gens(), 4);
    assert_eq!(crate::exactlin::rank(r.diff(0).matrix()), 3);
    assert!(iso(&r.cohomology_at(0), &FgAbGroup::free(1)));
    assert!(iso(&r.cohomology_at(1), &FgAbGroup::free(1)));

    let r = nerve_rgamma(&PosetSheaf::constant(&PosetSite::chain(2), &FgAbGroup::free(1)));
    assert_eq!(r.group(0).n_gens(), 2);
    assert_eq!(r.group(1).n_gens(), 1);
    assert!(r.diff(0).is_surjective());
    assert!(iso(&r.cohomology_at(0), &FgAbGroup::free(1)));
    assert!(r.cohomology_at(1).is_trivial());

    // three-step chain is contractible; the vee with Z/6 -> Z/2, Z/3 has Γ = Z/6
    let r = nerve_rgamma(&PosetSheaf::constant(&PosetSite::chain(3), &zn(5)));
    assert!(iso(&r.cohomology_at(0), &zn(5)));
    assert!(r.cohomology_at(1).is_trivial() && r.cohomology_at(2).is_trivial());
    let v = PosetSheaf::new(
        &vee(),
        vec![zn(6), zn(2), zn(3)],
        BTreeMap::from([((0, 1), m1(1)), ((0, 2), m1(1))]),
    )
    .unwrap();
    let r = nerve_rgamma(&v);
    assert!(iso(&r.cohomology_at(0), &zn(6)));
    assert!(r.cohomology_at(1).is_trivial());
}

#[test]
fn hyper_examples() {
    let k = CochainComplex::two_term(-1, FgAbGroup::free(1), zn(4), m1(2)).unwrap();
    let r = hyper_rgamma(&SheafComplex::on_point(&k));
    for n in -2..=1 {
        assert!(iso(&r.cohomology_at(n), &k.cohomology_at(n)), "H^{n}");
    }
    let c = SheafComplex::concentrated(PosetSheaf::constant(&PosetSite::pseudo_circle(), &zn(2)), 0);
    let r = hyper_rgamma(&c);
    assert!(iso(&r.cohomology_at(1), &zn(2)));
    assert!(iso(&r.cohomology_at(0), &zn(2)));
}

#[test]
fn tors_examples() {
    let circle = PosetSite::pseudo_circle();
    let g = SheafComplex::concentrated(PosetSheaf::constant(&circle, &FgAbGroup::free(1)), 0);
    let t = tors_groups(&g).unwrap();
    assert!(iso(&t[0], &FgAbGroup::free(1)));
    assert!(iso(&t[1], &FgAbGroup::free(1)));
    assert!(t[2].is_trivial() && t[3].is_trivial());

    let g = SheafComplex::on_point(&CochainComplex::concentrated(zn(3), 0));
    let t = tors_groups(&g).unwrap();
    assert!(t[0].is_trivial());
    assert!(iso(&t[1], &zn(3)));
    assert!(t[2].is_trivial() && t[3].is_trivial());

    let high = SheafComplex::on_point(&CochainComplex::concentrated(zn(3), 1));
    assert!(matches!(tors_groups(&high), Err(Error::DegreeRange(_))));
    let low = SheafComplex::on_point(&CochainComplex::concentrated(zn(3), -3));
    assert!(matches!(tors_classes(&low), Err(Error::DegreeRange(_))));
    // zero groups outside the window do not count
    let padded = SheafComplex::on_point(
        &CochainComplex::concentrated(zn(3), 0).with_range(-4, 2).unwrap(),
    );
    assert!(tors_groups(&padded).is_ok());
}

#[test]
fn torsor_group_law() {
    let circle = PosetSite::pseudo_circle();
    for (g, order) in [(zn(2), 2i64), (zn(6), 6)] {
        let t = tors_classes(&SheafComplex::concentrated(PosetSheaf::constant(&circle, &g), 0)).unwrap();
        assert!(iso(t.group(), &g));
        let c = t.generators().pop().unwrap();
        assert!(!c.is_trivial());
        assert_eq!(c.add(&t.trivial()).unwrap(), c);
        assert!(tors_add(&c, &tors_neg(&c)).unwrap().is_trivial());
        assert!(c.scale(order).is_trivial());
        assert!(!c.scale(order - 1).is_trivial());
    }
    let a = tors_classes(&SheafComplex::concentrated(PosetSheaf::constant(&circle, &zn(2)), 0)).unwrap();
    let b = tors_classes(&SheafComplex::concentrated(PosetSheaf::constant(&circle, &zn(4)), 0)).unwrap();
    assert!(matches!(
        a.trivial().add(&b.trivial()),
        Err(Error::Mismatch(_))
    ));
    // a cocycle that is a coboundary is the trivial torsor
    let d0 = a.rgamma.diff(0);
    let cob = d0.apply(&[BigInt::from(1), BigInt::from(0), BigInt::from(0), BigInt::from(0)]).unwrap();
    assert!(a.class_of_cocycle(&cob).unwrap().is_trivial());
    assert!(a.class_of_cocycle(&[BigInt::from(1)]).is_err());
}

#[test]
fn unit_examples() {
    let rows = unit_check().unwrap();
    assert!(rows.len() >= 6);
    for r in &rows {
        assert!(r.ok, "{}: Hom = {}, Γ = {}", r.name, r.hom, r.gamma);
    }
    let get = |name: &str| rows.iter().find(|r| r.name == name).unwrap().hom.clone();
    assert!(iso(&get("point, Z + Z/2"), &FgAbGroup::from_invariants(1, &[2])));
    assert!(iso(&get("pseudo-circle, Z/4"), &zn(4)));
    assert!(iso(&get("antichain, Z and Z/2"), &FgAbGroup::from_invariants(1, &[2])));
    assert!(iso(&get("chain, Z -2-> Z"), &FgAbGroup::free(1)));
    assert!(iso(&get("vee, Z/6 -> Z/2, Z/3"), &zn(6)));

    let p = PosetSite::one_point();
    let other = PosetSite::chain(2);
    assert!(matches!(
        sheaf_hom(&PosetSheaf::constant(&p, &zn(2)), &PosetSheaf::constant(&other, &zn(2))),
        Err(Error::Mismatch(_))
    ));
}

/// Sites without two distinct paths between elements, so any per-pair
/// multipliers give a functor.
fn tree_sites() -> Vec<Arc<PosetSite>> {
    vec![
        PosetSite::one_point(),
        PosetSite::chain(2),
        PosetSite::chain(3),
        PosetSite::antichain(2),
        PosetSite::pseudo_circle(),
        vee(),
    ]
}

/// `K` on every stalk with each generating restriction a random scalar.
fn scaled_complex(rng: &mut ChaCha8Rng, site: &Arc<PosetSite>, k: &CochainComplex) -> SheafComplex {
    let mults: BTreeMap<(usize, usize), i64> = site
        .generators()
        .iter()
        .map(|&p| (p, rng.gen_range(-2i64..=3)))
        .collect();
    let sheaves = k
        .degrees()
        .map(|n| {
            let g = k.group(n);
            let maps = mults
                .iter()
                .map(|(&p, &c)| (p, IntMatrix::scalar(g.n_gens(), c)))
                .collect();
            PosetSheaf::new(site, vec![g; site.len()], maps).unwrap()
        })
        .collect();
    let diffs = (k.lo()..k.hi())
        .map(|n| vec![k.diff(n).matrix().clone(); site.len()])
        .collect();
    SheafComplex::new(site, k.lo(), sheaves, diffs).unwrap()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn point_site_is_identity_on_cohomology(seed in any::<u64>()) {
        let k = random_complex(&mut rng(seed), &ComplexShape::length3());
        let g = SheafComplex::on_point(&k);
        let r = hyper_rgamma(&g);
        for n in -3..=1 {
            prop_assert!(iso(&r.cohomology_at(n), &k.cohomology_at(n)));
        }
        let t = tors_groups(&g).unwrap();
        prop_assert!(t[0].is_trivial());
        prop_assert!(iso(&t[1], &k.cohomology_at(0)));
        prop_assert!(iso(&t[2], &k.cohomology_at(-1)));
        prop_assert!(iso(&t[3], &k.cohomology_at(-2)));
    }

    #[test]
    fn global_sections_match_equalizer(seed in any::<u64>(), which in 0usize..6) {
        let mut r = rng(seed);
        let site = &tree_sites()[which];
        let orders: Vec<u64> = (0..site.len()).map(|_| [2u64, 3, 4, 6][r.gen_range(0..4)]).collect();
        // c must send Z/n_x into Z/n_y: n_y divides c·n_x
        let mut pairs = Vec::new();
        let mut maps = BTreeMap::new();
        for &(x, y) in site.generators() {
            let (nx, ny) = (orders[x] as i64, orders[y] as i64);
            let step = ny / num_integer::gcd(nx, ny);
            let c = step * r.gen_range(0i64..=3);
            pairs.push((x, y, c));
            maps.insert((x, y), m1(c));
        }
        let stalks = orders.iter().map(|&n| zn(n)).collect();
        let f = PosetSheaf::new(site, stalks, maps).unwrap();
        let h0 = nerve_rgamma(&f).cohomology_at(0);
        prop_assert_eq!(h0.order().unwrap(), BigInt::from(cyclic_limit_order(&orders, &pairs)));
        let unit = PosetSheaf::constant(site, &FgAbGroup::free(1));
        prop_assert!(iso(&sheaf_hom(&unit, &f).unwrap(), &h0));
    }

    #[test]
    fn hyper_shift_and_vanishing(seed in any::<u64>(), which in 0usize..6, j in -2i64..=2) {
        let mut r = rng(seed);
        let site = &tree_sites()[which];
        let k = random_complex(&mut r, &ComplexShape::length3());
        let g = scaled_complex(&mut r, site, &k);
        let base = hyper_rgamma(&g);
        let shifted = hyper_rgamma(&g.shift(j));
        for i in -5..=4 {
            prop_assert!(iso(&shifted.cohomology_at(i), &base.cohomology_at(i + j)));
        }
        let top = site.max_chain_length() as i64 + g.hi();
        for i in top + 1..=top + 3 {
            prop_assert!(base.cohomology_at(i).is_trivial());
        }
    }

    #[test]
    fn constant_circle_has_loop_class(seed in any::<u64>()) {
        let k = random_complex(&mut rng(seed), &ComplexShape::length3());
        let g = SheafComplex::constant(&PosetSite::pseudo_circle(), &k);
        let r = hyper_rgamma(&g);
        // RΓ of the circle with constant K is K ⊕ K[−1]
        for n in -3..=1 {
            let expect = k.cohomology_at(n).direct_sum(&k.cohomology_at(n - 1));
            prop_assert!(iso(&r.cohomology_at(n), &expect));
        }
    }
}
