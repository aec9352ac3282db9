//! Finite posets as Alexandrov sites, sheaves as functors on them, and a
//! constructive RΓ through normalized nerve cochains.

mod rgamma;
mod unit;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

pub use rgamma::{
    hyper_rgamma, nerve_rgamma, tors_add, tors_classes, tors_groups, tors_neg, TorsClass,
    TorsorClasses,
};
pub use unit::{sheaf_hom, unit_check, UnitCheckRow};

use crate::abgrp::{FgAbGroup, GroupHom};
use crate::chain::CochainComplex;
use crate::error::{Error, Result};
use crate::exactlin::IntMatrix;

/// A finite poset. Elements are kept sorted by label; `generators` are the
/// pairs `x < y` the order was generated from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosetSite {
    labels: Vec<String>,
    generators: Vec<(usize, usize)>,
    leq: Vec<Vec<bool>>,
}

impl PosetSite {
    /// The order generated by `pairs` (each `(a, b)` meaning `a < b`).
    pub fn new(labels: &[&str], pairs: &[(&str, &str)]) -> Result<Arc<Self>> {
        let mut sorted: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Invalid("element labels must be unique".into()));
        }
        let idx = |s: &str| {
            sorted
                .binary_search_by(|l| l.as_str().cmp(s))
                .map_err(|_| Error::Invalid(format!("unknown element {s:?}")))
        };
        let n = sorted.len();
        let mut gens = BTreeSet::new();
        for &(a, b) in pairs {
            let (x, y) = (idx(a)?, idx(b)?);
            if x == y {
                return Err(Error::Invalid(format!("pair ({a}, {b}) is not strict")));
            }
            gens.insert((x, y));
        }
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(x, y) in &gens {
            leq[x][y] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if leq[i][j] && leq[j][i] {
                    return Err(Error::Invalid(format!(
                        "order is not antisymmetric: {} and {} are mutually related",
                        sorted[i], sorted[j]
                    )));
                }
            }
        }
        Ok(Arc::new(PosetSite {
            labels: sorted,
            generators: gens.into_iter().collect(),
            leq,
        }))
    }

    pub fn one_point() -> Arc<Self> {
        Self::new(&["pt"], &[]).expect("valid")
    }

    /// `{a, b, c, d}` with `a, b < c, d`, a model of the circle.
    pub fn pseudo_circle() -> Arc<Self> {
        Self::new(
            &["a", "b", "c", "d"],
            &[("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")],
        )
        .expect("valid")
    }

    pub fn chain(n: usize) -> Arc<Self> {
        let labels: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        let pairs: Vec<(&str, &str)> = refs.windows(2).map(|w| (w[0], w[1])).collect();
        Self::new(&refs, &pairs).expect("valid")
    }

    pub fn antichain(n: usize) -> Arc<Self> {
        let labels: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        Self::new(&refs, &[]).expect("valid")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .binary_search_by(|l| l.as_str().cmp(label))
            .map_err(|_| Error::Invalid(format!("unknown element {label:?}")))
    }

    pub fn generators(&self) -> &[(usize, usize)] {
        &self.generators
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x][y]
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq[x][y]
    }

    /// Strict chains `x₀ < … < xₙ` in lexicographic order.
    pub fn chains(&self, n: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n + 1);
        self.extend_chains(n + 1, &mut cur, &mut out);
        out
    }

    fn extend_chains(&self, len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for y in 0..self.len() {
            if cur.last().is_none_or(|&x| self.lt(x, y)) {
                cur.push(y);
                self.extend_chains(len, cur, out);
                cur.pop();
            }
        }
    }

    /// Largest `n` with a strict chain of `n + 1` elements.
    pub fn max_chain_length(&self) -> usize {
        let mut n = 0;
        while !self.chains(n + 1).is_empty() {
            n += 1;
        }
        n
    }

    /// Elements ordered so that everything above `x` comes before `x`.
    fn top_down(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.len()).collect();
        v.sort_by_key(|&x| ((0..self.len()).filter(|&y| self.leq(x, y)).count(), x));
        v
    }
}

/// A functor from the poset to groups: stalks and restrictions `F(x) → F(y)` for `x ≤ y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosetSheaf {
    site: Arc<PosetSite>,
    stalks: Vec<FgAbGroup>,
    res: BTreeMap<(usize, usize), GroupHom>,
}

impl PosetSheaf {
    /// Restrictions are given on the site's generating pairs; all other
    /// restrictions are composites, which must agree along every path.
    pub fn new(
        site: &Arc<PosetSite>,
        stalks: Vec<FgAbGroup>,
        maps: BTreeMap<(usize, usize), IntMatrix>,
    ) -> Result<Self> {
        if stalks.len() != site.len() {
            return Err(Error::Dimension(format!(
                "{} stalks for {} elements",
                stalks.len(),
                site.len()
            )));
        }
        let mut gens = BTreeMap::new();
        for &(x, y) in site.generators() {
            let m = maps.get(&(x, y)).ok_or_else(|| {
                Error::Invalid(format!(
                    "missing restriction {} -> {}",
                    site.labels[x], site.labels[y]
                ))
            })?;
            let f = GroupHom::new(stalks[x].clone(), stalks[y].clone(), m.clone()).map_err(|e| {
                match e {
                    Error::IllDefined(msg) | Error::Dimension(msg) => Error::IllDefined(format!(
                        "restriction {} -> {}: {msg}",
                        site.labels[x], site.labels[y]
                    )),
                    other => other,
                }
            })?;
            gens.insert((x, y), f);
        }
        if let Some((x, y)) = maps.keys().find(|k| !gens.contains_key(k)) {
            return Err(Error::Invalid(format!(
                "restriction given on {} -> {}, which is not a generating pair",
                site.labels[*x], site.labels[*y]
            )));
        }
        let mut res: BTreeMap<(usize, usize), GroupHom> = BTreeMap::new();
        for x in site.top_down() {
            res.insert((x, x), GroupHom::identity(&stalks[x]));
            for y in 0..site.len() {
                if !site.lt(x, y) {
                    continue;
                }
                let mut found: Option<GroupHom> = None;
                for (&(a, c), g) in gens.range((x, 0)..(x + 1, 0)) {
                    debug_assert_eq!(a, x);
                    if !site.leq(c, y) {
                        continue;
                    }
                    let path = res[&(c, y)].compose(g)?;
                    match &found {
                        None => found = Some(path),
                        Some(f) if f.equals(&path)? => {}
                        Some(_) => {
                            return Err(Error::Invalid(format!(
                                "restrictions {} -> {} differ along two paths",
                                site.labels[x], site.labels[y]
                            )))
                        }
                    }
                }
                res.insert((x, y), found.expect("x < y passes through a generating pair"));
            }
        }
        Ok(PosetSheaf {
            site: Arc::clone(site),
            stalks,
            res,
        })
    }

    /// The constant functor with value `g`.
    pub fn constant(site: &Arc<PosetSite>, g: &FgAbGroup) -> Self {
        let maps = site
            .generators()
            .iter()
            .map(|&p| (p, IntMatrix::identity(g.n_gens())))
            .collect();
        Self::new(site, vec![g.clone(); site.len()], maps).expect("constant functor")
    }

    pub fn site(&self) -> &Arc<PosetSite> {
        &self.site
    }

    pub fn stalk(&self, x: usize) -> &FgAbGroup {
        &self.stalks[x]
    }

    pub fn stalks(&self) -> &[FgAbGroup] {
        &self.stalks
    }

    /// `F(x) → F(y)` for `x ≤ y`.
    pub fn res(&self, x: usize, y: usize) -> Result<&GroupHom> {
        self.res.get(&(x, y)).ok_or_else(|| {
            Error::Invalid(format!(
                "{} is not below {}",
                self.site.labels[x], self.site.labels[y]
            ))
        })
    }

    /// Restriction matrices on the generating pairs.
    pub fn generator_maps(&self) -> BTreeMap<(usize, usize), IntMatrix> {
        self.site
            .generators()
            .iter()
            .map(|p| (*p, self.res[p].matrix().clone()))
            .collect()
    }
}

/// Sheaves `Kⁿ` on one site with maps `dⁿ` given stalkwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SheafComplex {
    site: Arc<PosetSite>,
    lo: i64,
    sheaves: Vec<PosetSheaf>,
    /// `diffs[k][x]` is `d^{lo+k}` at the element `x`
    diffs: Vec<Vec<GroupHom>>,
}

impl SheafComplex {
    /// Checks that each `dⁿ` commutes with restrictions and that `d∘d = 0`.
    pub fn new(
        site: &Arc<PosetSite>,
        lo: i64,
        sheaves: Vec<PosetSheaf>,
        diffs: Vec<Vec<IntMatrix>>,
    ) -> Result<Self> {
        if diffs.len() != sheaves.len().saturating_sub(1) {
            return Err(Error::Dimension(format!(
                "{} differentials for {} sheaves",
                diffs.len(),
                sheaves.len()
            )));
        }
        if sheaves.iter().any(|s| &s.site != site) {
            return Err(Error::Mismatch("sheaves live on different sites".into()));
        }
        let mut homs = Vec::new();
        for (k, row) in diffs.into_iter().enumerate() {
            let n = lo + k as i64;
            if row.len() != site.len() {
                return Err(Error::Dimension(format!(
                    "differential in degree {n} has {} components for {} elements",
                    row.len(),
                    site.len()
                )));
            }
            let mut hs = Vec::new();
            for (x, m) in row.into_iter().enumerate() {
                let h = GroupHom::new(sheaves[k].stalk(x).clone(), sheaves[k + 1].stalk(x).clone(), m)
                    .map_err(|e| match e {
                        Error::IllDefined(msg) | Error::Dimension(msg) => Error::IllDefined(format!(
                            "differential in degree {n} at {}: {msg}",
                            site.labels[x]
                        )),
                        other => other,
                    })?;
                hs.push(h);
            }
            for &(x, y) in site.generators() {
                let a = sheaves[k + 1].res(x, y)?.compose(&hs[x])?;
                let b = hs[y].compose(sheaves[k].res(x, y)?)?;
                if !a.equals(&b)? {
                    return Err(Error::Invalid(format!(
                        "differential in degree {n} does not commute with restriction {} -> {}",
                        site.labels[x], site.labels[y]
                    )));
                }
            }
            homs.push(hs);
        }
        for k in 0..homs.len().saturating_sub(1) {
            for x in 0..site.len() {
                if !homs[k + 1][x].compose(&homs[k][x])?.is_zero() {
                    return Err(Error::NotAComplex {
                        degree: lo + k as i64,
                    });
                }
            }
        }
        Ok(SheafComplex {
            site: Arc::clone(site),
            lo,
            sheaves,
            diffs: homs,
        })
    }

    /// A single sheaf in degree `n`.
    pub fn concentrated(f: PosetSheaf, n: i64) -> Self {
        SheafComplex {
            site: Arc::clone(f.site()),
            lo: n,
            sheaves: vec![f],
            diffs: Vec::new(),
        }
    }

    /// The constant complex with value `k`.
    pub fn constant(site: &Arc<PosetSite>, k: &CochainComplex) -> Self {
        let sheaves = k
            .degrees()
            .map(|n| PosetSheaf::constant(site, &k.group(n)))
            .collect();
        let diffs = (k.lo()..k.hi())
            .map(|n| vec![k.diff(n).matrix().clone(); site.len()])
            .collect();
        Self::new(site, k.lo(), sheaves, diffs).expect("constant complex")
    }

    /// `k` over the one-point site.
    pub fn on_point(k: &CochainComplex) -> Self {
        Self::constant(&PosetSite::one_point(), k)
    }

    pub fn site(&self) -> &Arc<PosetSite> {
        &self.site
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.sheaves.len() as i64 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi()
    }

    pub fn sheaf(&self, n: i64) -> Option<&PosetSheaf> {
        if n < self.lo || n > self.hi() {
            return None;
        }
        Some(&self.sheaves[(n - self.lo) as usize])
    }

    /// Stalk of `Kⁿ` at `x`, trivial outside the range.
    pub fn stalk(&self, n: i64, x: usize) -> FgAbGroup {
        self.sheaf(n)
            .map_or_else(FgAbGroup::trivial, |s| s.stalk(x).clone())
    }

    /// `dⁿ` at `x`.
    pub fn diff(&self, n: i64, x: usize) -> GroupHom {
        if n >= self.lo && n < self.hi() {
            return self.diffs[(n - self.lo) as usize][x].clone();
        }
        GroupHom::zero(&self.stalk(n, x), &self.stalk(n + 1, x))
    }

    /// The complex of stalks at `x`.
    pub fn stalk_complex(&self, x: usize) -> CochainComplex {
        let groups = self.degrees().map(|n| self.stalk(n, x)).collect();
        let diffs = (self.lo..self.hi()).map(|n| self.diff(n, x)).collect();
        CochainComplex::new_unchecked(self.lo, groups, diffs).expect("shapes agree")
    }

    /// `K[j]` with differential `(−1)ʲ d`.
    pub fn shift(&self, j: i64) -> SheafComplex {
        let diffs = if j.rem_euclid(2) == 0 {
            self.diffs.clone()
        } else {
            self.diffs
                .iter()
                .map(|row| row.iter().map(GroupHom::neg).collect())
                .collect()
        };
        SheafComplex {
            site: Arc::clone(&self.site),
            lo: self.lo - j,
            sheaves: self.sheaves.clone(),
            diffs,
        }
    }
}

#[cfg(test)]
mod tests;
