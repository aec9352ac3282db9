use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::abgrp::{is_exact, CanonicalForm};
use crate::gen::{random_complex, random_finite_complex, random_free_complex, ComplexShape};

fn z() -> FgAbGroup {
    FgAbGroup::cyclic(0)
}

fn zn(n: u64) -> FgAbGroup {
    FgAbGroup::cyclic(n)
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

/// `[Z →×2 Z]` in degrees −1, 0.
fn times_two() -> CochainComplex {
    CochainComplex::two_term(-1, z(), z(), m1(2)).unwrap()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn shift_examples() {
    let k = times_two();
    assert_eq!(k.shift(0), k);
    let s = k.shift(1);
    assert_eq!((s.lo(), s.hi()), (-2, -1));
    assert_eq!(s.diff(-2).matrix(), &m1(-2));
    assert_eq!(k.shift(1).shift(1), k.shift(2));
    assert_eq!(k.shift(2).diff(-3).matrix(), &m1(2));
}

#[test]
fn cohomology_examples() {
    let k = times_two();
    assert_eq!(k.cohomology_at(0).canonical_form(), cf(0, &[2]));
    assert!(k.cohomology_at(-1).is_trivial());
    let zero = CochainComplex::zero();
    for n in -3..3 {
        assert!(zero.cohomology_at(n).is_trivial());
    }
}

#[test]
fn detail_agrees_with_fast_path() {
    let k = CochainComplex::from_matrices(
        -2,
        vec![FgAbGroup::free(2), FgAbGroup::free(3), FgAbGroup::free(2)],
        vec![
            IntMatrix::from_rows(&[[2, 0], [0, 0], [0, 6]], 2),
            IntMatrix::from_rows(&[[0, 1, 0], [0, 0, 0]], 3),
        ],
    )
    .unwrap();
    for n in -3..=1 {
        assert!(k
            .cohomology_at(n)
            .is_isomorphic(&k.cohomology_detail(n).unwrap().group));
    }
}

#[test]
fn truncation_examples() {
    let id = CochainComplex::two_term(0, z(), z(), m1(1)).unwrap();
    assert!(id.good_truncate(0).is_zero_complex());
    let k = times_two();
    assert_eq!(k.good_truncate(1), k);
    assert_eq!(k.bad_truncate(0), k);
    assert!(k.bad_truncate(-2).groups().is_empty());
    let s = id.bad_truncate(0);
    assert_eq!(s.cohomology_at(0).canonical_form(), cf(1, &[]));
    assert!(id.cohomology_at(0).is_trivial());
}

#[test]
fn good_truncate_above_projection_is_quasi_iso_in_range() {
    let k = CochainComplex::from_matrices(
        -1,
        vec![z(), z(), zn(4)],
        vec![m1(3), m1(0)],
    )
    .unwrap();
    let (t, p) = k.good_truncate_above(0);
    assert_eq!(t.lo(), 0);
    assert_eq!(t.cohomology_at(0).canonical_form(), cf(0, &[3]));
    for n in 0..=1 {
        assert!(p.induced(n).unwrap().is_isomorphism().unwrap());
    }
}

#[test]
fn rejects_non_complexes() {
    let bad = CochainComplex::from_matrices(0, vec![z(), z(), z()], vec![m1(1), m1(1)]);
    assert_eq!(bad, Err(Error::NotAComplex { degree: 0 }));
    let ok = CochainComplex::from_matrices(0, vec![z(), zn(4), zn(2)], vec![m1(2), m1(1)]);
    assert!(ok.is_ok());
    let ill = CochainComplex::from_matrices(0, vec![zn(2), z()], vec![m1(1)]);
    assert!(matches!(ill, Err(Error::IllDefined(_))));
}

#[test]
fn cone_examples() {
    let k = times_two();
    let c = cone(&ChainMap::identity(&k)).unwrap();
    for n in -3..=1 {
        assert!(c.complex.cohomology_at(n).is_trivial());
    }
    let l = random_complex(&mut rng(3), &ComplexShape::length3());
    let c = cone(&ChainMap::zero(&CochainComplex::zero(), &l)).unwrap();
    assert_eq!(c.complex.trimmed(), l.trimmed());
    let zz = CochainComplex::concentrated(z(), 0);
    let two = ChainMap::new(&zz, &zz, BTreeMap::from([(0, m1(2))])).unwrap();
    let c = cone(&two).unwrap();
    assert_eq!(c.complex.cohomology_at(0).canonical_form(), cf(0, &[2]));
    assert!(c.complex.cohomology_at(-1).is_trivial());
}

#[test]
fn cone_rejects_non_chain_maps() {
    let k = times_two();
    let bad = ChainMap::new_unchecked(&k, &k, BTreeMap::from([(0, m1(1))])).unwrap();
    assert!(matches!(cone(&bad), Err(Error::NotAChainMap { .. })));
}

#[test]
fn hom_complex_examples() {
    let l = random_complex(&mut rng(5), &ComplexShape::length3());
    let h = hom_complex(&CochainComplex::concentrated(z(), 0), &l).unwrap();
    for n in -3..=1 {
        assert!(h.complex.cohomology_at(n).is_isomorphic(&l.cohomology_at(n)));
    }
    let l = CochainComplex::concentrated(zn(2), 0);
    let h = hom_complex(&times_two(), &l).unwrap();
    assert_eq!(h.complex.cohomology_at(0).canonical_form(), cf(0, &[2]));
    assert_eq!(h.complex.cohomology_at(1).canonical_form(), cf(0, &[2]));
    let nonfree = CochainComplex::concentrated(zn(2), 0);
    assert!(matches!(
        hom_complex(&nonfree, &l),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn hom_complex_cocycles_are_chain_maps() {
    let k = times_two();
    let l = CochainComplex::two_term(-1, zn(2), zn(4), m1(2)).unwrap();
    let h = hom_complex(&k, &l).unwrap();
    for n in -1..=1 {
        let z = congruence_kernel(&h.complex.diff(n)).unwrap();
        for j in 0..z.cols() {
            let v = z.column(j);
            let f = h.cocycle_to_chain_map(n, &v).unwrap();
            let back = h.chain_map_to_cocycle(n, &f).unwrap();
            assert_eq!(back, v);
        }
    }
}

/// All tuples of group elements, one per generator of a free source.
fn all_maps(src_gens: usize, dst: &FgAbGroup) -> Vec<IntMatrix> {
    let elems: Vec<Vec<BigInt>> = dst
        .enumerate()
        .unwrap()
        .iter()
        .map(|e| dst.lift(e).unwrap())
        .collect();
    let mut out = vec![Vec::<Vec<BigInt>>::new()];
    for _ in 0..src_gens {
        out = out
            .into_iter()
            .flat_map(|cols| {
                elems.iter().map(move |e| {
                    let mut c = cols.clone();
                    c.push(e.clone());
                    c
                })
            })
            .collect();
    }
    out.into_iter()
        .map(|cols| IntMatrix::from_columns(dst.n_gens(), &cols))
        .collect()
}

fn reduced_family(l: &CochainComplex, fam: &BTreeMap<i64, IntMatrix>) -> Vec<Vec<BigInt>> {
    let mut key = Vec::new();
    for (p, m) in fam {
        for j in 0..m.cols() {
            key.push(l.group(*p).reduce(&m.column(j)).unwrap());
        }
    }
    key
}

/// Chain maps `K → L` modulo null-homotopic ones, counted by enumeration.
fn homotopy_classes(k: &CochainComplex, l: &CochainComplex) -> usize {
    let degrees: Vec<i64> = k.degrees().collect();
    let choices: Vec<Vec<IntMatrix>> = degrees
        .iter()
        .map(|&p| all_maps(k.group(p).n_gens(), &l.group(p)))
        .collect();
    let commutes = |fam: &BTreeMap<i64, IntMatrix>| {
        (k.lo() - 1..=k.hi()).all(|p| {
            let zero_src = IntMatrix::zeros(l.group(p).n_gens(), k.group(p).n_gens());
            let zero_dst = IntMatrix::zeros(l.group(p + 1).n_gens(), k.group(p + 1).n_gens());
            let fp = fam.get(&p).unwrap_or(&zero_src);
            let fq = fam.get(&(p + 1)).unwrap_or(&zero_dst);
            let a = l.diff(p).matrix().mul(fp).unwrap();
            let b = fq.mul(k.diff(p).matrix()).unwrap();
            let diff = a.sub(&b).unwrap();
            (0..diff.cols()).all(|j| l.group(p + 1).is_zero_element(&diff.column(j)).unwrap())
        })
    };
    let mut maps = HashSet::new();
    let mut idx = vec![0usize; degrees.len()];
    loop {
        let fam: BTreeMap<i64, IntMatrix> = degrees
            .iter()
            .zip(&idx)
            .enumerate()
            .map(|(t, (&p, &i))| (p, choices[t][i].clone()))
            .collect();
        if commutes(&fam) {
            maps.insert(reduced_family(l, &fam));
        }
        if !advance(&mut idx, &choices.iter().map(Vec::len).collect::<Vec<_>>()) {
            break;
        }
    }
    // null-homotopic maps d h + h d with h^p : K^p → L^{p-1}
    let hchoices: Vec<Vec<IntMatrix>> = degrees
        .iter()
        .map(|&p| all_maps(k.group(p).n_gens(), &l.group(p - 1)))
        .collect();
    let mut null = HashSet::new();
    let mut idx = vec![0usize; degrees.len()];
    loop {
        let h = |p: i64| -> IntMatrix {
            match degrees.iter().position(|&q| q == p) {
                Some(t) => hchoices[t][idx[t]].clone(),
                None => IntMatrix::zeros(l.group(p - 1).n_gens(), k.group(p).n_gens()),
            }
        };
        let fam: BTreeMap<i64, IntMatrix> = degrees
            .iter()
            .map(|&p| {
                let a = l.diff(p - 1).matrix().mul(&h(p)).unwrap();
                let b = h(p + 1).mul(k.diff(p).matrix()).unwrap();
                (p, a.add(&b).unwrap())
            })
            .collect();
        null.insert(reduced_family(l, &fam));
        if !advance(&mut idx, &hchoices.iter().map(Vec::len).collect::<Vec<_>>()) {
            break;
        }
    }
    assert_eq!(maps.len() % null.len(), 0);
    maps.len() / null.len()
}

fn advance(idx: &mut [usize], lens: &[usize]) -> bool {
    for t in 0..idx.len() {
        idx[t] += 1;
        if idx[t] < lens[t] {
            return true;
        }
        idx[t] = 0;
    }
    false
}

#[test]
fn hom_degree_zero_counts_homotopy_classes() {
    let mut r = rng(11);
    let sources = [
        times_two(),
        CochainComplex::two_term(-1, z(), z(), m1(0)).unwrap(),
        CochainComplex::two_term(-1, z(), FgAbGroup::free(2), IntMatrix::from_rows(&[[3], [1]], 1))
            .unwrap(),
    ];
    for k in &sources {
        for _ in 0..3 {
            let l = random_finite_complex(&mut r, -1, 0, 2);
            let h = hom_complex(k, &l).unwrap();
            let ours = h.complex.cohomology_at(0).order().unwrap();
            assert_eq!(ours, BigInt::from(homotopy_classes(k, &l)), "K = {k}, L = {l}");
        }
    }
}

#[test]
fn total_complex_single_row_and_column() {
    let k = random_complex(&mut rng(7), &ComplexShape::length3());
    let mut row = DoubleComplex::new();
    let mut col = DoubleComplex::new();
    for n in k.degrees() {
        row.set_cell(n, 0, k.group(n));
        col.set_cell(0, n, k.group(n));
        if n < k.hi() {
            row.set_dh(n, 0, k.diff(n).matrix().clone());
            col.set_dv(0, n, k.diff(n).matrix().clone());
        }
    }
    row.validate().unwrap();
    col.validate().unwrap();
    assert_eq!(total_complex(&row).unwrap(), k);
    assert_eq!(total_complex(&col).unwrap(), k);
}

#[test]
fn total_of_hom_bicomplex_is_hom_complex() {
    let mut r = rng(13);
    for _ in 0..4 {
        let k = random_free_complex(&mut r, -2, 0, 3);
        let l = random_complex(&mut r, &ComplexShape::length3());
        let mut d = DoubleComplex::new();
        for p in k.degrees() {
            for q in l.degrees() {
                let a = k.group(p).n_gens();
                let lq = l.group(q);
                let g = FgAbGroup::new(a * lq.n_gens(), IntMatrix::identity(a).kron(lq.relations()))
                    .unwrap();
                d.set_cell(q, -p, g);
                if q < l.hi() {
                    d.set_dh(q, -p, IntMatrix::identity(a).kron(l.diff(q).matrix()));
                }
                if p > k.lo() {
                    let sign = BigInt::from(if p.rem_euclid(2) == 0 { -1 } else { 1 });
                    let m = k
                        .diff(p - 1)
                        .matrix()
                        .transpose()
                        .kron(&IntMatrix::identity(lq.n_gens()))
                        .scale(&sign);
                    d.set_dv(q, -p, m);
                }
            }
        }
        d.validate().unwrap();
        assert_eq!(total_complex(&d).unwrap(), hom_complex(&k, &l).unwrap().complex);
    }
}

fn les_exact(f: &ChainMap) {
    let c = cone(f).unwrap();
    let (k, l) = (f.src(), f.dst());
    let (lo, hi) = union_range(k, l);
    for n in lo - 2..=hi + 1 {
        let hk = k.cohomology_detail(n).unwrap();
        let hl = l.cohomology_detail(n).unwrap();
        let hc = c.complex.cohomology_detail(n).unwrap();
        let hk1 = k.cohomology_detail(n + 1).unwrap();
        let hl1 = l.cohomology_detail(n + 1).unwrap();
        let a = f.induced_between(n, &hk, &hl).unwrap();
        let b = c.incl.induced_between(n, &hl, &hc).unwrap();
        let g = c.proj.induced_between(n, &hc, &hk1).unwrap();
        let a1 = f.induced_between(n + 1, &hk1, &hl1).unwrap();
        assert!(is_exact(&a, &b).unwrap(), "exactness at H^{n}(L)");
        assert!(is_exact(&b, &g).unwrap(), "exactness at H^{n}(Cone)");
        assert!(is_exact(&g, &a1).unwrap(), "exactness at H^{}(K)", n + 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn shift_moves_cohomology(seed in any::<u64>(), i in -3i64..=3) {
        let k = random_complex(&mut rng(seed), &ComplexShape::length3());
        let s = k.shift(i);
        for n in -6..=4 {
            prop_assert!(s.cohomology_at(n).is_isomorphic(&k.cohomology_at(n + i)));
        }
    }

    #[test]
    fn shift_composes(seed in any::<u64>(), i in -3i64..=3, j in -3i64..=3) {
        let k = random_complex(&mut rng(seed), &ComplexShape::length3());
        prop_assert_eq!(k.shift(i).shift(j), k.shift(i + j));
    }

    #[test]
    fn truncations_match_definitions(seed in any::<u64>(), n in -3i64..=1) {
        let k = random_complex(&mut rng(seed), &ComplexShape::length3());
        let s = k.bad_truncate(n);
        let t = k.good_truncate(n);
        for m in -4..=2 {
            if m <= n {
                prop_assert_eq!(s.group(m), k.group(m));
            } else {
                prop_assert_eq!(s.group(m).n_gens(), 0);
            }
            if m < n {
                prop_assert_eq!(t.group(m), k.group(m));
                prop_assert!(t.cohomology_at(m).is_isomorphic(&k.cohomology_at(m)));
            } else if m == n {
                let ker = k.diff(n).kernel().unwrap().group;
                prop_assert!(t.group(m).is_isomorphic(&ker));
                prop_assert!(t.cohomology_at(m).is_isomorphic(&k.cohomology_at(m)));
            } else {
                prop_assert!(t.cohomology_at(m).is_trivial());
            }
        }
    }

    #[test]
    fn cohomology_of_sum_is_sum(a in any::<u64>(), b in any::<u64>()) {
        let k = random_complex(&mut rng(a), &ComplexShape::length3());
        let l = random_complex(&mut rng(b), &ComplexShape::length3());
        let s = k.direct_sum(&l);
        for n in -3..=1 {
            let expect = k.cohomology_at(n).direct_sum(&l.cohomology_at(n));
            prop_assert!(s.cohomology_at(n).is_isomorphic(&expect));
        }
    }

    #[test]
    fn cone_long_exact_sequence(seed in any::<u64>(), c in -3i64..=3) {
        let mut r = rng(seed);
        let k = random_complex(&mut r, &ComplexShape::length3());
        let m = random_complex(&mut r, &ComplexShape::length3());
        let l = random_complex(&mut r, &ComplexShape::length3());
        // c·id on K plus zero M → L
        let f = ChainMap::identity(&k)
            .scale(c)
            .direct_sum(&ChainMap::zero(&m, &l))
            .unwrap();
        les_exact(&f);
    }
}
