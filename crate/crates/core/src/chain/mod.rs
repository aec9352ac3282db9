//! Bounded cochain complexes of presented groups.
//!
//! Sign conventions, fixed once for the whole crate:
//! - shift: `(K[i])ⁿ = Kⁿ⁺ⁱ` with differential `(−1)ⁱ dⁿ⁺ⁱ`
//! - cone of `f: K → L`: `Coneⁿ = Kⁿ⁺¹ ⊕ Lⁿ`, `d(x, y) = (−d x, f x + d y)`
//! - Hom complex: `(dφ) = d∘φ − (−1)ⁿ φ∘d` on degree-`n` maps
//! - totalization: `d = d_h + (−1)ᵃ d_v` on the cell in column `a`

mod double;
mod hom;
mod map;
mod ops;

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

pub use double::{total_complex, DoubleComplex};
pub use hom::{hom_complex, HomBlock, HomComplex};
pub use map::ChainMap;
pub use ops::{cone, Cone};

use crate::abgrp::{congruence_kernel, subquotient, FgAbGroup, GroupHom, Subquotient};
use crate::error::{Error, Result};
use crate::exactlin::{elementary_divisors, rank, IntMatrix};

/// Groups `Kⁿ` for `n` in `lo ..= lo + len − 1`, zero elsewhere, and the
/// differentials between consecutive stored degrees.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CochainComplex {
    lo: i64,
    groups: Vec<FgAbGroup>,
    diffs: Vec<GroupHom>,
}

impl CochainComplex {
    /// Validates endpoints and `dⁿ⁺¹ ∘ dⁿ = 0`.
    pub fn new(lo: i64, groups: Vec<FgAbGroup>, diffs: Vec<GroupHom>) -> Result<Self> {
        let k = Self::new_unchecked(lo, groups, diffs)?;
        for i in 0..k.diffs.len().saturating_sub(1) {
            let dd = k.diffs[i + 1].compose(&k.diffs[i])?;
            if !dd.is_zero() {
                return Err(Error::NotAComplex {
                    degree: lo + i as i64,
                });
            }
        }
        Ok(k)
    }

    /// Checks shapes and endpoints only.
    pub fn new_unchecked(lo: i64, groups: Vec<FgAbGroup>, diffs: Vec<GroupHom>) -> Result<Self> {
        if diffs.len() != groups.len().saturating_sub(1) {
            return Err(Error::Dimension(format!(
                "{} differentials for {} groups",
                diffs.len(),
                groups.len()
            )));
        }
        for (i, d) in diffs.iter().enumerate() {
            if d.src() != &groups[i] || d.dst() != &groups[i + 1] {
                return Err(Error::Mismatch(format!(
                    "differential in degree {} does not connect the stated groups",
                    lo + i as i64
                )));
            }
        }
        Ok(CochainComplex { lo, groups, diffs })
    }

    /// Builds the differentials from matrices, checking well-definedness and `d∘d = 0`.
    pub fn from_matrices(lo: i64, groups: Vec<FgAbGroup>, mats: Vec<IntMatrix>) -> Result<Self> {
        if mats.len() != groups.len().saturating_sub(1) {
            return Err(Error::Dimension(format!(
                "{} differentials for {} groups",
                mats.len(),
                groups.len()
            )));
        }
        let mut diffs = Vec::with_capacity(mats.len());
        for (i, m) in mats.into_iter().enumerate() {
            let d = GroupHom::new(groups[i].clone(), groups[i + 1].clone(), m).map_err(|e| {
                match e {
                    Error::IllDefined(msg) => Error::IllDefined(format!(
                        "differential in degree {}: {msg}",
                        lo + i as i64
                    )),
                    Error::Dimension(msg) => Error::Dimension(format!(
                        "differential in degree {}: {msg}",
                        lo + i as i64
                    )),
                    other => other,
                }
            })?;
            diffs.push(d);
        }
        Self::new(lo, groups, diffs)
    }

    pub fn zero() -> Self {
        CochainComplex {
            lo: 0,
            groups: Vec::new(),
            diffs: Vec::new(),
        }
    }

    /// `g` placed in a single degree.
    pub fn concentrated(g: FgAbGroup, degree: i64) -> Self {
        CochainComplex {
            lo: degree,
            groups: vec![g],
            diffs: Vec::new(),
        }
    }

    /// A two-term complex `a → b` with `a` in degree `lo`.
    pub fn two_term(lo: i64, a: FgAbGroup, b: FgAbGroup, d: IntMatrix) -> Result<Self> {
        Self::from_matrices(lo, vec![a, b], vec![d])
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Top stored degree; `lo − 1` for a complex with no stored groups.
    pub fn hi(&self) -> i64 {
        self.lo + self.groups.len() as i64 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi()
    }

    fn index(&self, n: i64) -> Option<usize> {
        (n >= self.lo && n <= self.hi()).then(|| (n - self.lo) as usize)
    }

    /// `Kⁿ`, the trivial group outside the stored range.
    pub fn group(&self, n: i64) -> FgAbGroup {
        self.index(n)
            .map_or_else(FgAbGroup::trivial, |i| self.groups[i].clone())
    }

    /// `dⁿ : Kⁿ → Kⁿ⁺¹`, the zero map where either end is outside the range.
    pub fn diff(&self, n: i64) -> GroupHom {
        match self.index(n) {
            Some(i) if i < self.diffs.len() => self.diffs[i].clone(),
            _ => GroupHom::zero(&self.group(n), &self.group(n + 1)),
        }
    }

    pub fn groups(&self) -> &[FgAbGroup] {
        &self.groups
    }

    pub fn diffs(&self) -> &[GroupHom] {
        &self.diffs
    }

    /// Every group is given on free generators with no relations.
    pub fn is_free(&self) -> bool {
        self.groups.iter().all(FgAbGroup::is_free_presentation)
    }

    /// All groups are trivial (the complex is zero, not merely acyclic).
    pub fn is_zero_complex(&self) -> bool {
        self.groups.iter().all(FgAbGroup::is_trivial)
    }

    /// Drops stored end degrees whose group has no generators.
    pub fn trimmed(&self) -> CochainComplex {
        let mut a = 0;
        let mut b = self.groups.len();
        while a < b && self.groups[a].n_gens() == 0 {
            a += 1;
        }
        while b > a && self.groups[b - 1].n_gens() == 0 {
            b -= 1;
        }
        if a == b {
            return CochainComplex::zero();
        }
        CochainComplex {
            lo: self.lo + a as i64,
            groups: self.groups[a..b].to_vec(),
            diffs: self.diffs[a..b - 1].to_vec(),
        }
    }

    /// The same complex stored on `lo ..= hi` (padding with trivial groups);
    /// the range must contain every nontrivial stored degree.
    pub fn with_range(&self, lo: i64, hi: i64) -> Result<CochainComplex> {
        let t = self.trimmed();
        if !t.groups.is_empty() && (t.lo < lo || t.hi() > hi) {
            return Err(Error::DegreeRange(format!(
                "complex occupies degrees {}..={} outside {lo}..={hi}",
                t.lo,
                t.hi()
            )));
        }
        let groups: Vec<FgAbGroup> = (lo..=hi).map(|n| t.group(n)).collect();
        let diffs: Vec<GroupHom> = (lo..hi).map(|n| t.diff(n)).collect();
        CochainComplex::new_unchecked(lo, groups, diffs)
    }

    /// `Hⁱ = ker dⁱ / im dⁱ⁻¹` with explicit coordinates in `Kⁱ`.
    pub fn cohomology_detail(&self, i: i64) -> Result<Subquotient> {
        let g = self.group(i);
        let z = congruence_kernel(&self.diff(i))?;
        let b = self.diff(i - 1).matrix().clone();
        subquotient(&g, &z, &b)
    }

    /// `Hⁱ(K)`. Free neighbours take a shortcut through ranks and
    /// elementary divisors; everything else goes through [`Self::cohomology_detail`].
    pub fn cohomology_at(&self, i: i64) -> FgAbGroup {
        if self.group(i).is_free_presentation() && self.group(i + 1).is_free_presentation() {
            let n = self.group(i).n_gens();
            let out = rank(self.diff(i).matrix());
            let divs = elementary_divisors(self.diff(i - 1).matrix());
            let free = n - out - divs.len();
            let torsion: Vec<BigInt> = divs.into_iter().filter(|d| !d.is_one()).collect();
            return group_from_invariants(free, &torsion);
        }
        self.cohomology_detail(i)
            .expect("a complex has d∘d = 0, so the image lies in the kernel")
            .group
    }

    /// `Hⁿ` for every stored degree.
    pub fn cohomology_all(&self) -> Vec<(i64, FgAbGroup)> {
        self.degrees().map(|n| (n, self.cohomology_at(n))).collect()
    }

    /// Degreewise direct sum.
    pub fn direct_sum(&self, other: &CochainComplex) -> CochainComplex {
        let (lo, hi) = union_range(self, other);
        let groups = (lo..=hi)
            .map(|n| self.group(n).direct_sum(&other.group(n)))
            .collect();
        let diffs = (lo..hi)
            .map(|n| self.diff(n).direct_sum(&other.diff(n)))
            .collect();
        CochainComplex { lo, groups, diffs }
    }

    /// `K[i]`: `(K[i])ⁿ = Kⁿ⁺ⁱ`, differential `(−1)ⁱ dⁿ⁺ⁱ`.
    pub fn shift(&self, i: i64) -> CochainComplex {
        let diffs = if i.rem_euclid(2) == 0 {
            self.diffs.clone()
        } else {
            self.diffs.iter().map(GroupHom::neg).collect()
        };
        CochainComplex {
            lo: self.lo - i,
            groups: self.groups.clone(),
            diffs,
        }
    }

    /// `σ≤n K`: degrees `≤ n` verbatim, zero above.
    pub fn bad_truncate(&self, n: i64) -> CochainComplex {
        if n < self.lo {
            return CochainComplex {
                lo: self.lo,
                groups: Vec::new(),
                diffs: Vec::new(),
            };
        }
        let keep = ((n - self.lo + 1) as usize).min(self.groups.len());
        CochainComplex {
            lo: self.lo,
            groups: self.groups[..keep].to_vec(),
            diffs: self.diffs[..keep.saturating_sub(1)].to_vec(),
        }
    }

    /// `τ≤n K`: degrees `< n` unchanged, `ker dⁿ` in degree `n`, zero above.
    pub fn good_truncate(&self, n: i64) -> CochainComplex {
        self.good_truncate_with_inclusion(n).0
    }

    /// `τ≤n K` together with the inclusion `τ≤n K → K`.
    pub fn good_truncate_with_inclusion(&self, n: i64) -> (CochainComplex, ChainMap) {
        if n < self.lo {
            let z = CochainComplex {
                lo: self.lo,
                groups: Vec::new(),
                diffs: Vec::new(),
            };
            let inc = ChainMap::zero(&z, self);
            return (z, inc);
        }
        if n >= self.hi() {
            return (self.clone(), ChainMap::identity(self));
        }
        let kn = self.group(n);
        let z = congruence_kernel(&self.diff(n)).expect("shapes agree");
        let sq = subquotient(&kn, &z, &IntMatrix::zeros(kn.n_gens(), 0))
            .expect("relations lie in the kernel");
        let top = sq.group.clone();
        let mut t = self.bad_truncate(n - 1);
        let mut inc = Vec::new();
        for m in t.degrees() {
            inc.push((m, IntMatrix::identity(t.group(m).n_gens())));
        }
        if n > self.lo {
            let dprev = self.diff(n - 1);
            let coords = sq
                .from_container_columns(dprev.matrix())
                .expect("image lies in the kernel");
            let d = GroupHom::new_unchecked(self.group(n - 1), top.clone(), coords)
                .expect("shape");
            t.groups.push(top.clone());
            t.diffs.push(d);
        } else {
            t = CochainComplex::concentrated(top.clone(), n);
        }
        inc.push((n, sq.basis().clone()));
        let inc = ChainMap::new_unchecked(&t, self, inc.into_iter().collect())
            .expect("inclusion shapes agree");
        (t, inc)
    }

    /// `τ≥n K`: `coker dⁿ⁻¹` in degree `n`, degrees `> n` unchanged, zero below,
    /// together with the projection `K → τ≥n K`.
    pub fn good_truncate_above(&self, n: i64) -> (CochainComplex, ChainMap) {
        if n <= self.lo {
            return (self.clone(), ChainMap::identity(self));
        }
        if n > self.hi() {
            let z = CochainComplex {
                lo: n,
                groups: Vec::new(),
                diffs: Vec::new(),
            };
            return (z.clone(), ChainMap::zero(self, &z));
        }
        let start = (n - self.lo) as usize;
        let quotient = self.diff(n - 1).cokernel();
        let mut groups = vec![quotient.clone()];
        groups.extend_from_slice(&self.groups[start + 1..]);
        let mut diffs = Vec::new();
        if start < self.diffs.len() {
            let d0 = &self.diffs[start];
            diffs.push(
                GroupHom::new_unchecked(quotient, d0.dst().clone(), d0.matrix().clone())
                    .expect("shape"),
            );
            diffs.extend_from_slice(&self.diffs[start + 1..]);
        }
        let t = CochainComplex { lo: n, groups, diffs };
        let proj = (n..=self.hi())
            .map(|m| (m, IntMatrix::identity(self.group(m).n_gens())))
            .collect();
        let p = ChainMap::new_unchecked(self, &t, proj).expect("shape");
        (t, p)
    }
}

pub(crate) fn group_from_invariants(free: usize, torsion: &[BigInt]) -> FgAbGroup {
    let n = free + torsion.len();
    let mut rel = IntMatrix::zeros(torsion.len(), n);
    for (i, d) in torsion.iter().enumerate() {
        rel[(i, i)] = d.clone();
    }
    FgAbGroup::new(n, rel).expect("shape")
}

pub(crate) fn union_range(a: &CochainComplex, b: &CochainComplex) -> (i64, i64) {
    match (a.groups.is_empty(), b.groups.is_empty()) {
        (true, true) => (a.lo, a.lo - 1),
        (true, false) => (b.lo, b.hi()),
        (false, true) => (a.lo, a.hi()),
        (false, false) => (a.lo.min(b.lo), a.hi().max(b.hi())),
    }
}

impl fmt::Display for CochainComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.groups.is_empty() {
            return write!(f, "0");
        }
        for (k, g) in self.groups.iter().enumerate() {
            if k > 0 {
                write!(f, " -> ")?;
            }
            write!(f, "[{}]{}", self.lo + k as i64, g)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests;
