use std::collections::BTreeMap;

use super::{union_range, CochainComplex};
use crate::abgrp::{GroupHom, Subquotient};
use crate::error::{Error, Result};
use crate::exactlin::IntMatrix;

/// A degreewise family `fⁿ : Kⁿ → Lⁿ` commuting with the differentials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    src: CochainComplex,
    dst: CochainComplex,
    lo: i64,
    maps: Vec<GroupHom>,
}

impl ChainMap {
    /// Components not listed are zero. Checks well-definedness and commutation.
    pub fn new(
        src: &CochainComplex,
        dst: &CochainComplex,
        comps: BTreeMap<i64, IntMatrix>,
    ) -> Result<Self> {
        let (lo, hi) = union_range(src, dst);
        for &n in comps.keys() {
            if n < lo || n > hi {
                return Err(Error::DegreeRange(format!(
                    "component in degree {n} outside {lo}..={hi}"
                )));
            }
        }
        let mut maps = Vec::new();
        for n in lo..=hi {
            let (a, b) = (src.group(n), dst.group(n));
            let m = match comps.get(&n) {
                Some(m) => GroupHom::new(a, b, m.clone()).map_err(|e| match e {
                    Error::IllDefined(msg) => {
                        Error::IllDefined(format!("component in degree {n}: {msg}"))
                    }
                    Error::Dimension(msg) => {
                        Error::Dimension(format!("component in degree {n}: {msg}"))
                    }
                    other => other,
                })?,
                None => GroupHom::zero(&a, &b),
            };
            maps.push(m);
        }
        let f = ChainMap {
            src: src.clone(),
            dst: dst.clone(),
            lo,
            maps,
        };
        f.check_commutes()?;
        Ok(f)
    }

    /// Shape checks only.
    pub fn new_unchecked(
        src: &CochainComplex,
        dst: &CochainComplex,
        comps: BTreeMap<i64, IntMatrix>,
    ) -> Result<Self> {
        let (lo, hi) = union_range(src, dst);
        let maps = (lo..=hi)
            .map(|n| {
                let (a, b) = (src.group(n), dst.group(n));
                match comps.get(&n) {
                    Some(m) => GroupHom::new_unchecked(a, b, m.clone()),
                    None => Ok(GroupHom::zero(&a, &b)),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ChainMap {
            src: src.clone(),
            dst: dst.clone(),
            lo,
            maps,
        })
    }

    pub fn check_commutes(&self) -> Result<()> {
        let (lo, hi) = union_range(&self.src, &self.dst);
        for n in lo - 1..=hi {
            let left = self.dst.diff(n).compose(&self.component(n))?;
            let right = self.component(n + 1).compose(&self.src.diff(n))?;
            if !left.equals(&right)? {
                return Err(Error::NotAChainMap { degree: n });
            }
        }
        Ok(())
    }

    pub fn identity(k: &CochainComplex) -> Self {
        ChainMap {
            src: k.clone(),
            dst: k.clone(),
            lo: k.lo(),
            maps: k.groups().iter().map(GroupHom::identity).collect(),
        }
    }

    pub fn zero(src: &CochainComplex, dst: &CochainComplex) -> Self {
        Self::new_unchecked(src, dst, BTreeMap::new()).expect("zero maps have the right shape")
    }

    pub fn src(&self) -> &CochainComplex {
        &self.src
    }

    pub fn dst(&self) -> &CochainComplex {
        &self.dst
    }

    pub fn component(&self, n: i64) -> GroupHom {
        let idx = n - self.lo;
        if idx >= 0 && (idx as usize) < self.maps.len() {
            self.maps[idx as usize].clone()
        } else {
            GroupHom::zero(&self.src.group(n), &self.dst.group(n))
        }
    }

    pub fn components(&self) -> BTreeMap<i64, IntMatrix> {
        self.maps
            .iter()
            .enumerate()
            .map(|(i, m)| (self.lo + i as i64, m.matrix().clone()))
            .collect()
    }

    /// `self ∘ g`: apply `g` first.
    pub fn compose(&self, g: &ChainMap) -> Result<ChainMap> {
        if g.dst != self.src {
            return Err(Error::Mismatch(
                "inner chain map does not end where the outer one starts".into(),
            ));
        }
        let (lo, hi) = union_range(&g.src, &self.dst);
        let comps = (lo..=hi)
            .map(|n| Ok((n, self.component(n).compose(&g.component(n))?.matrix().clone())))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Self::new_unchecked(&g.src, &self.dst, comps)
    }

    fn combine(
        &self,
        other: &ChainMap,
        op: impl Fn(&GroupHom, &GroupHom) -> Result<GroupHom>,
    ) -> Result<ChainMap> {
        if self.src != other.src || self.dst != other.dst {
            return Err(Error::Mismatch("chain maps have different endpoints".into()));
        }
        let (lo, hi) = union_range(&self.src, &self.dst);
        let comps = (lo..=hi)
            .map(|n| Ok((n, op(&self.component(n), &other.component(n))?.matrix().clone())))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Self::new_unchecked(&self.src, &self.dst, comps)
    }

    pub fn add(&self, other: &ChainMap) -> Result<ChainMap> {
        self.combine(other, GroupHom::add)
    }

    pub fn sub(&self, other: &ChainMap) -> Result<ChainMap> {
        self.combine(other, GroupHom::sub)
    }

    pub fn neg(&self) -> ChainMap {
        ChainMap {
            maps: self.maps.iter().map(GroupHom::neg).collect(),
            ..self.clone()
        }
    }

    pub fn scale(&self, c: i64) -> ChainMap {
        let c = num_bigint::BigInt::from(c);
        ChainMap {
            maps: self.maps.iter().map(|m| m.scale(&c)).collect(),
            ..self.clone()
        }
    }

    /// Every component is the zero homomorphism.
    pub fn is_zero(&self) -> bool {
        self.maps.iter().all(GroupHom::is_zero)
    }

    /// `f[i] : K[i] → L[i]`, `(f[i])ⁿ = fⁿ⁺ⁱ` (no sign).
    pub fn shift(&self, i: i64) -> ChainMap {
        ChainMap {
            src: self.src.shift(i),
            dst: self.dst.shift(i),
            lo: self.lo - i,
            maps: self.maps.clone(),
        }
    }

    /// `Hⁱ(f)` between the presentations from `cohomology_detail`.
    pub fn induced(&self, i: i64) -> Result<GroupHom> {
        let a = self.src.cohomology_detail(i)?;
        let b = self.dst.cohomology_detail(i)?;
        self.induced_between(i, &a, &b)
    }

    /// `Hⁱ(f)` between caller-supplied cohomology presentations.
    pub fn induced_between(&self, i: i64, a: &Subquotient, b: &Subquotient) -> Result<GroupHom> {
        let images = self.component(i).matrix().mul(a.basis())?;
        let m = b.from_container_columns(&images)?;
        GroupHom::new_unchecked(a.group.clone(), b.group.clone(), m)
    }

    /// Induces isomorphisms on every cohomology group.
    pub fn is_quasi_isomorphism(&self) -> Result<bool> {
        let (lo, hi) = union_range(&self.src, &self.dst);
        for n in lo..=hi {
            if !self.induced(n)?.is_isomorphism()? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Degreewise direct sum `f ⊕ g`.
    pub fn direct_sum(&self, other: &ChainMap) -> Result<ChainMap> {
        let src = self.src.direct_sum(&other.src);
        let dst = self.dst.direct_sum(&other.dst);
        let (lo, hi) = union_range(&src, &dst);
        let comps = (lo..=hi)
            .map(|n| {
                (
                    n,
                    self.component(n)
                        .direct_sum(&other.component(n))
                        .matrix()
                        .clone(),
                )
            })
            .collect();
        Self::new_unchecked(&src, &dst, comps)
    }
}
