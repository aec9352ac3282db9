use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{PosetSheaf, PosetSite, SheafComplex};
use crate::abgrp::{FgAbGroup, Subquotient};
use crate::chain::{total_complex, CochainComplex, DoubleComplex};
use crate::error::{Error, Result};
use crate::exactlin::IntMatrix;

/// Nerve cochains in one degree: chains, their stalk offsets and the product group.
struct NerveTerm {
    chains: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    offsets: Vec<usize>,
    group: FgAbGroup,
}

fn nerve_term(site: &PosetSite, n: usize, stalk: &dyn Fn(usize) -> FgAbGroup) -> NerveTerm {
    let chains = site.chains(n);
    let stalks: Vec<FgAbGroup> = chains.iter().map(|c| stalk(*c.last().expect("nonempty"))).collect();
    let mut offsets = Vec::with_capacity(chains.len() + 1);
    let mut acc = 0;
    for s in &stalks {
        offsets.push(acc);
        acc += s.n_gens();
    }
    offsets.push(acc);
    let index = chains.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
    NerveTerm {
        chains,
        index,
        offsets,
        group: FgAbGroup::direct_sum_all(&stalks),
    }
}

/// `(δc)(x₀ < … < xₙ₊₁) = Σ_{i ≤ n} (−1)ⁱ c(…x̂ᵢ…) + (−1)ⁿ⁺¹ F(xₙ → xₙ₊₁) c(x₀ … xₙ)`.
fn nerve_diff(n: usize, src: &NerveTerm, dst: &NerveTerm, res: &dyn Fn(usize, usize) -> IntMatrix) -> IntMatrix {
    let mut m = IntMatrix::zeros(dst.group.n_gens(), src.group.n_gens());
    for (t, tau) in dst.chains.iter().enumerate() {
        let r0 = dst.offsets[t];
        let last = tau[n + 1];
        for i in 0..=n + 1 {
            let mut sigma = tau.clone();
            sigma.remove(i);
            let s = src.index[&sigma];
            let c0 = src.offsets[s];
            let sign = if i % 2 == 0 { 1 } else { -1 };
            let block = if i <= n {
                let k = dst.offsets[t + 1] - r0;
                IntMatrix::scalar(k, sign)
            } else {
                res(tau[n], last).scale(&BigInt::from(sign))
            };
            m.add_block(r0, c0, &block);
        }
    }
    m
}

/// `RΓ(F)` as normalized nerve cochains, `Cⁿ = ∏_{x₀<…<xₙ} F(xₙ)`.
pub fn nerve_rgamma(f: &PosetSheaf) -> CochainComplex {
    let site = f.site();
    let top = site.max_chain_length();
    let stalk = |x: usize| f.stalk(x).clone();
    let res = |x: usize, y: usize| f.res(x, y).expect("x < y").matrix().clone();
    let terms: Vec<NerveTerm> = (0..=top).map(|n| nerve_term(site, n, &stalk)).collect();
    let mats = (0..top)
        .map(|n| nerve_diff(n, &terms[n], &terms[n + 1], &res))
        .collect();
    let groups = terms.into_iter().map(|t| t.group).collect();
    CochainComplex::from_matrices(0, groups, mats).expect("nerve cochains form a complex")
}

/// `RΓ(K)` as the total complex of nerve cochains of each `Kᵇ`.
pub fn hyper_rgamma(k: &SheafComplex) -> CochainComplex {
    let site = k.site();
    let top = site.max_chain_length();
    let mut dc = DoubleComplex::new();
    for b in k.degrees() {
        let stalk = |x: usize| k.stalk(b, x);
        let res = |x: usize, y: usize| {
            k.sheaf(b)
                .expect("in range")
                .res(x, y)
                .expect("x < y")
                .matrix()
                .clone()
        };
        let terms: Vec<NerveTerm> = (0..=top).map(|n| nerve_term(site, n, &stalk)).collect();
        for (a, t) in terms.iter().enumerate() {
            let a_i = a as i64;
            dc.set_cell(a_i, b, t.group.clone());
            if a < top {
                dc.set_dh(a_i, b, nerve_diff(a, t, &terms[a + 1], &res));
            }
            if b < k.hi() {
                let mut dv = IntMatrix::zeros(0, 0);
                for c in &t.chains {
                    dv = dv.block_diag(k.diff(b, *c.last().expect("nonempty")).matrix());
                }
                dc.set_dv(a_i, b, dv);
            }
        }
    }
    total_complex(&dc).expect("nerve double complex commutes")
}

fn check_range(g: &SheafComplex) -> Result<()> {
    let occupied: Vec<i64> = g
        .degrees()
        .filter(|&n| (0..g.site().len()).any(|x| g.stalk(n, x).n_gens() > 0))
        .collect();
    if let (Some(&lo), Some(&hi)) = (occupied.first(), occupied.last()) {
        if lo < -2 || hi > 0 {
            return Err(Error::DegreeRange(format!(
                "sheaf complex occupies degrees {lo}..={hi}, outside -2..=0"
            )));
        }
    }
    Ok(())
}

/// `Torsⁱ(G) = Hⁱ RΓ(G)` for `i = 1, 0, −1, −2`, in that order.
pub fn tors_groups(g: &SheafComplex) -> Result<[FgAbGroup; 4]> {
    check_range(g)?;
    let r = hyper_rgamma(g);
    Ok([
        r.cohomology_at(1),
        r.cohomology_at(0),
        r.cohomology_at(-1),
        r.cohomology_at(-2),
    ])
}

/// Isomorphism classes of `G`-torsors, modelled as `H¹ RΓ(G)` on nerve cocycles.
pub struct TorsorClasses {
    pub complex: SheafComplex,
    pub rgamma: CochainComplex,
    h1: Subquotient,
}

impl fmt::Debug for TorsorClasses {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tors = {}", self.h1.group)
    }
}

pub fn tors_classes(g: &SheafComplex) -> Result<Arc<TorsorClasses>> {
    check_range(g)?;
    let rgamma = hyper_rgamma(g);
    let h1 = rgamma.cohomology_detail(1)?;
    Ok(Arc::new(TorsorClasses {
        complex: g.clone(),
        rgamma,
        h1,
    }))
}

impl TorsorClasses {
    pub fn group(&self) -> &FgAbGroup {
        &self.h1.group
    }

    fn same_as(&self, other: &TorsorClasses) -> bool {
        std::ptr::eq(self, other) || self.complex == other.complex
    }

    pub fn class_of_cocycle(self: &Arc<Self>, v: &[BigInt]) -> Result<TorsClass> {
        let d = self.rgamma.diff(1);
        if v.len() != d.src().n_gens() {
            return Err(Error::Dimension(format!(
                "cocycle of length {}, expected {}",
                v.len(),
                d.src().n_gens()
            )));
        }
        if !d.dst().is_zero_element(&d.apply(v)?)? {
            return Err(Error::Invalid("the given element is not a cocycle".into()));
        }
        let coords = self.group().reduce(&self.h1.from_container(v)?)?;
        Ok(TorsClass {
            parent: Arc::clone(self),
            cocycle: v.to_vec(),
            coords,
        })
    }

    pub fn class_from_coords(self: &Arc<Self>, y: &[BigInt]) -> Result<TorsClass> {
        let c = self.group().lift(y)?;
        let v = self.h1.to_container(&c)?;
        self.class_of_cocycle(&v)
    }

    /// The trivial torsor.
    pub fn trivial(self: &Arc<Self>) -> TorsClass {
        let n = self.rgamma.group(1).n_gens();
        self.class_of_cocycle(&vec![BigInt::zero(); n]).expect("zero cocycle")
    }

    pub fn generators(self: &Arc<Self>) -> Vec<TorsClass> {
        let k = self.group().factor_orders().len();
        (0..k)
            .map(|i| {
                let mut y = vec![BigInt::zero(); k];
                y[i] = BigInt::from(1);
                self.class_from_coords(&y).expect("normal form")
            })
            .collect()
    }
}

/// A torsor class with a degree-1 cocycle of `RΓ(G)` representing it.
#[derive(Clone)]
pub struct TorsClass {
    parent: Arc<TorsorClasses>,
    cocycle: Vec<BigInt>,
    coords: Vec<BigInt>,
}

impl fmt::Debug for TorsClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TorsClass({:?} in {})", self.coords, self.parent.group())
    }
}

impl PartialEq for TorsClass {
    fn eq(&self, other: &Self) -> bool {
        self.parent.same_as(&other.parent) && self.coords == other.coords
    }
}

impl Eq for TorsClass {}

impl TorsClass {
    pub fn cocycle(&self) -> &[BigInt] {
        &self.cocycle
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn is_trivial(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// Contracted product of torsors.
    pub fn add(&self, other: &TorsClass) -> Result<TorsClass> {
        if !self.parent.same_as(&other.parent) {
            return Err(Error::Mismatch("torsor classes for different complexes".into()));
        }
        let v: Vec<BigInt> = self.cocycle.iter().zip(&other.cocycle).map(|(a, b)| a + b).collect();
        self.parent.class_of_cocycle(&v)
    }

    pub fn neg(&self) -> TorsClass {
        self.scale(-1)
    }

    pub fn scale(&self, c: i64) -> TorsClass {
        let c = BigInt::from(c);
        let v: Vec<BigInt> = self.cocycle.iter().map(|a| a * &c).collect();
        self.parent.class_of_cocycle(&v).expect("scaled cocycle")
    }
}

pub fn tors_add(a: &TorsClass, b: &TorsClass) -> Result<TorsClass> {
    a.add(b)
}

pub fn tors_neg(c: &TorsClass) -> TorsClass {
    c.neg()
}
