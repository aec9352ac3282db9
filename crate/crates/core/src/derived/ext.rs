use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;

use super::{free_replacement, Replacement};
use crate::abgrp::{FgAbGroup, Subquotient};
use crate::chain::{hom_complex, ChainMap, CochainComplex, HomComplex};
use crate::error::{Error, Result};

/// `Extⁱ(P, G)` as cocycles of `Hom(F, G)` modulo coboundaries, where `F`
/// is the memoized free replacement of `P`.
pub struct ExtGroup {
    pub source: CochainComplex,
    pub target: CochainComplex,
    pub degree: i64,
    pub replacement: Replacement,
    pub hom: HomComplex,
    cohomology: Subquotient,
}

impl fmt::Debug for ExtGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Ext^{}({}, {}) = {}",
            self.degree,
            self.source,
            self.target,
            self.cohomology.group
        )
    }
}

/// The explicit model of `Extⁱ(P, G)` that classes live in.
pub fn ext_model(p: &CochainComplex, g: &CochainComplex, i: i64) -> Result<Arc<ExtGroup>> {
    let replacement = free_replacement(p);
    let hom = hom_complex(&replacement.complex, g)?;
    let cohomology = hom.complex.cohomology_detail(i)?;
    Ok(Arc::new(ExtGroup {
        source: p.clone(),
        target: g.clone(),
        degree: i,
        replacement,
        hom,
        cohomology,
    }))
}

impl ExtGroup {
    pub fn group(&self) -> &FgAbGroup {
        &self.cohomology.group
    }

    fn same_as(&self, other: &ExtGroup) -> bool {
        std::ptr::eq(self, other)
            || (self.degree == other.degree
                && self.source == other.source
                && self.target == other.target)
    }

    /// `D v = 0` in `Hom^{i+1}(F, G)`.
    pub fn is_cocycle(&self, v: &[BigInt]) -> Result<bool> {
        let d = self.hom.complex.diff(self.degree);
        let img = d.apply(v)?;
        d.dst().is_zero_element(&img)
    }

    pub fn class_of_cocycle(self: &Arc<Self>, v: &[BigInt]) -> Result<ExtClass> {
        if v.len() != self.hom.complex.group(self.degree).n_gens() {
            return Err(Error::Dimension(format!(
                "cocycle of length {}, expected {}",
                v.len(),
                self.hom.complex.group(self.degree).n_gens()
            )));
        }
        if !self.is_cocycle(v)? {
            return Err(Error::Invalid("the given element is not a cocycle".into()));
        }
        let c = self.cohomology.from_container(v)?;
        let coords = self.group().reduce(&c)?;
        Ok(ExtClass {
            ext: Arc::clone(self),
            cocycle: v.to_vec(),
            coords,
        })
    }

    /// The class with the given normal-form coordinates in [`ExtGroup::group`].
    pub fn class_from_coords(self: &Arc<Self>, y: &[BigInt]) -> Result<ExtClass> {
        let c = self.group().lift(y)?;
        let v = self.cohomology.to_container(&c)?;
        self.class_of_cocycle(&v)
    }

    pub fn zero(self: &Arc<Self>) -> ExtClass {
        let n = self.hom.complex.group(self.degree).n_gens();
        self.class_of_cocycle(&vec![BigInt::zero(); n])
            .expect("zero is a cocycle")
    }

    /// The cyclic-factor generators of the group.
    pub fn generators(self: &Arc<Self>) -> Vec<ExtClass> {
        let k = self.group().factor_orders().len();
        (0..k)
            .map(|i| {
                let mut y = vec![BigInt::zero(); k];
                y[i] = BigInt::from(1);
                self.class_from_coords(&y).expect("normal form")
            })
            .collect()
    }

    /// A uniformly random class on torsion factors; free factors draw from `−3..=3`.
    pub fn random<R: Rng>(self: &Arc<Self>, rng: &mut R) -> ExtClass {
        let y: Vec<BigInt> = self
            .group()
            .factor_orders()
            .iter()
            .map(|d| {
                if d.is_zero() {
                    BigInt::from(rng.gen_range(-3i64..=3))
                } else {
                    let bound = u64::try_from(d).expect("small factor");
                    BigInt::from(rng.gen_range(0..bound))
                }
            })
            .collect();
        self.class_from_coords(&y).expect("normal form")
    }
}

/// A class in [`ExtGroup`], carrying a cocycle representative.
#[derive(Clone)]
pub struct ExtClass {
    ext: Arc<ExtGroup>,
    cocycle: Vec<BigInt>,
    coords: Vec<BigInt>,
}

impl fmt::Debug for ExtClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExtClass({:?} in {})", self.coords, self.ext.group())
    }
}

impl PartialEq for ExtClass {
    fn eq(&self, other: &Self) -> bool {
        self.ext.same_as(&other.ext) && self.coords == other.coords
    }
}

impl Eq for ExtClass {}

impl ExtClass {
    pub fn ext(&self) -> &Arc<ExtGroup> {
        &self.ext
    }

    pub fn cocycle(&self) -> &[BigInt] {
        &self.cocycle
    }

    /// Normal-form coordinates in the Ext group.
    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    fn check_same(&self, other: &ExtClass) -> Result<()> {
        if !self.ext.same_as(&other.ext) {
            return Err(Error::Mismatch("classes live in different Ext groups".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &ExtClass) -> Result<ExtClass> {
        self.check_same(other)?;
        let v: Vec<BigInt> = self.cocycle.iter().zip(&other.cocycle).map(|(a, b)| a + b).collect();
        self.ext.class_of_cocycle(&v)
    }

    pub fn neg(&self) -> ExtClass {
        let v: Vec<BigInt> = self.cocycle.iter().map(|a| -a).collect();
        self.ext.class_of_cocycle(&v).expect("negated cocycle")
    }

    pub fn sub(&self, other: &ExtClass) -> Result<ExtClass> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: i64) -> ExtClass {
        let c = BigInt::from(c);
        let v: Vec<BigInt> = self.cocycle.iter().map(|a| a * &c).collect();
        self.ext.class_of_cocycle(&v).expect("scaled cocycle")
    }

    /// The representative as a chain map `F → G[i]`.
    pub fn to_chain_map(&self) -> Result<ChainMap> {
        self.ext.hom.cocycle_to_chain_map(self.ext.degree, &self.cocycle)
    }
}
