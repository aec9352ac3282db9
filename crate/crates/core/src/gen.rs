//! Seeded random inputs for property tests and the acceptance battery.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::abgrp::FgAbGroup;
use crate::chain::CochainComplex;
use crate::exactlin::IntMatrix;

/// A random unimodular matrix and its inverse, as products of elementary moves.
pub fn unimodular_pair<R: Rng>(rng: &mut R, n: usize, moves: usize) -> (IntMatrix, IntMatrix) {
    let mut w = IntMatrix::identity(n);
    let mut winv = IntMatrix::identity(n);
    if n < 2 {
        return (w, winv);
    }
    for _ in 0..moves {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = BigInt::from(rng.gen_range(-2i64..=2));
        // w ← E w with E = I + c e_i e_jᵀ ; winv ← winv E⁻¹
        for k in 0..n {
            let add = &w[(j, k)] * &c;
            w[(i, k)] += add;
        }
        for k in 0..n {
            let sub = &winv[(k, i)] * &c;
            winv[(k, j)] -= sub;
        }
    }
    (w, winv)
}

#[derive(Clone, Copy, Debug)]
pub struct ComplexShape {
    pub lo: i64,
    pub hi: i64,
    /// number of building blocks summed together
    pub blocks: usize,
    /// cyclic orders to draw from, 0 meaning Z
    pub orders: &'static [u64],
    /// scramble generators by unimodular changes of basis
    pub scramble: bool,
}

impl ComplexShape {
    pub fn length3() -> Self {
        ComplexShape {
            lo: -2,
            hi: 0,
            blocks: 3,
            orders: MIXED,
            scramble: true,
        }
    }
}

pub const MIXED: &[u64] = &[2, 3, 4, 6, 0];
pub const FINITE: &[u64] = &[2, 3, 4, 6];
pub const FREE: &[u64] = &[0];

fn pick_order<R: Rng>(rng: &mut R, pool: &[u64]) -> u64 {
    *pool.choose(rng).expect("nonempty order pool")
}

/// A cyclic-to-cyclic map `Z/a → Z/b` (0 meaning Z) chosen among the well-defined ones.
fn random_cyclic_map<R: Rng>(rng: &mut R, a: u64, b: u64) -> i64 {
    let candidates: Vec<i64> = (-3i64..=3)
        .filter(|&c| match (a, b) {
            (0, _) => true,
            (_, 0) => c == 0,
            (a, b) => (a as i64 * c).rem_euclid(b as i64) == 0,
        })
        .collect();
    *candidates.choose(rng).expect("zero is always allowed")
}

/// One block: a cyclic group in one degree, or a two-term complex `Z/a → Z/b`.
fn block<R: Rng>(rng: &mut R, shape: &ComplexShape) -> CochainComplex {
    let span = shape.hi - shape.lo;
    let two_term = span >= 1 && rng.gen_bool(0.6);
    if !two_term {
        let n = rng.gen_range(shape.lo..=shape.hi);
        return CochainComplex::concentrated(
            FgAbGroup::cyclic(pick_order(rng, shape.orders)),
            n,
        );
    }
    let n = rng.gen_range(shape.lo..shape.hi);
    let a = pick_order(rng, shape.orders);
    let b = pick_order(rng, shape.orders);
    let c = random_cyclic_map(rng, a, b);
    CochainComplex::two_term(
        n,
        FgAbGroup::cyclic(a),
        FgAbGroup::cyclic(b),
        IntMatrix::from_rows(&[[c]], 1),
    )
    .expect("block maps are chosen well defined")
}

/// Conjugates every degree by a random automorphism of the generator lattice.
pub fn scramble<R: Rng>(rng: &mut R, k: &CochainComplex) -> CochainComplex {
    let pairs: Vec<(IntMatrix, IntMatrix)> = k
        .degrees()
        .map(|n| unimodular_pair(rng, k.group(n).n_gens(), 6))
        .collect();
    let mut groups = Vec::new();
    for (i, n) in k.degrees().enumerate() {
        let g = k.group(n);
        // new coordinates x' = W x, so a relation r becomes W r
        let rel = g.relations().mul(&pairs[i].0.transpose()).expect("shape");
        groups.push(FgAbGroup::new(g.n_gens(), rel).expect("shape"));
    }
    let mut mats = Vec::new();
    for (i, n) in (k.lo()..k.hi()).enumerate() {
        let d = k.diff(n);
        let m = pairs[i + 1]
            .0
            .mul(d.matrix())
            .and_then(|x| x.mul(&pairs[i].1))
            .expect("shape");
        mats.push(m);
    }
    CochainComplex::from_matrices(k.lo(), groups, mats).expect("conjugation preserves structure")
}

/// A random complex stored on exactly `shape.lo ..= shape.hi`.
pub fn random_complex<R: Rng>(rng: &mut R, shape: &ComplexShape) -> CochainComplex {
    let mut k = CochainComplex::concentrated(FgAbGroup::trivial(), shape.lo);
    for _ in 0..shape.blocks {
        k = k.direct_sum(&block(rng, shape));
    }
    let k = k.with_range(shape.lo, shape.hi).expect("blocks lie in range");
    if shape.scramble {
        scramble(rng, &k)
    } else {
        k
    }
}

/// A random complex of finite groups in a single degree or spread over `[lo, hi]`.
pub fn random_finite_complex<R: Rng>(rng: &mut R, lo: i64, hi: i64, blocks: usize) -> CochainComplex {
    random_complex(
        rng,
        &ComplexShape {
            lo,
            hi,
            blocks,
            orders: FINITE,
            scramble: true,
        },
    )
}

/// A random complex of finitely generated free groups on `[lo, hi]`.
pub fn random_free_complex<R: Rng>(rng: &mut R, lo: i64, hi: i64, blocks: usize) -> CochainComplex {
    random_complex(
        rng,
        &ComplexShape {
            lo,
            hi,
            blocks,
            orders: FREE,
            scramble: true,
        },
    )
}
