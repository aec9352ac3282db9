use std::collections::BTreeMap;

use super::{union_range, ChainMap, CochainComplex};
use crate::abgrp::{FgAbGroup, GroupHom};
use crate::error::Result;
use crate::exactlin::IntMatrix;

/// Mapping cone with its two structure maps `L → Cone(f)` and `Cone(f) → K[1]`.
#[derive(Clone, Debug)]
pub struct Cone {
    pub complex: CochainComplex,
    pub incl: ChainMap,
    pub proj: ChainMap,
}

/// `[[a, b], [c, d]]` as one matrix.
pub(crate) fn block2(a: &IntMatrix, b: &IntMatrix, c: &IntMatrix, d: &IntMatrix) -> IntMatrix {
    let top = a.hstack(b).expect("block rows agree");
    let bot = c.hstack(d).expect("block rows agree");
    top.vstack(&bot).expect("block columns agree")
}

/// `Coneⁿ = Kⁿ⁺¹ ⊕ Lⁿ`, `d(x, y) = (−d x, f x + d y)`.
pub fn cone(f: &ChainMap) -> Result<Cone> {
    f.check_commutes()?;
    let k = f.src();
    let l = f.dst();
    let k1 = k.shift(1);
    let (lo, hi) = union_range(&k1, l);
    let groups: Vec<FgAbGroup> = (lo..=hi)
        .map(|n| k.group(n + 1).direct_sum(&l.group(n)))
        .collect();
    let mut diffs = Vec::new();
    for n in lo..hi {
        let dk = k.diff(n + 1);
        let dl = l.diff(n);
        let fk = f.component(n + 1);
        let m = block2(
            &dk.matrix().neg(),
            &IntMatrix::zeros(dk.dst().n_gens(), dl.src().n_gens()),
            fk.matrix(),
            dl.matrix(),
        );
        let idx = (n - lo) as usize;
        diffs.push(GroupHom::new_unchecked(
            groups[idx].clone(),
            groups[idx + 1].clone(),
            m,
        )?);
    }
    let c = CochainComplex::new_unchecked(lo, groups, diffs)?;
    let mut inc = BTreeMap::new();
    let mut pr = BTreeMap::new();
    for n in lo..=hi {
        let a = k.group(n + 1).n_gens();
        let b = l.group(n).n_gens();
        inc.insert(n, IntMatrix::zeros(a, b).vstack(&IntMatrix::identity(b))?);
        pr.insert(n, IntMatrix::identity(a).hstack(&IntMatrix::zeros(a, b))?);
    }
    let incl = ChainMap::new_unchecked(l, &c, trim_to(l, &c, inc))?;
    let proj = ChainMap::new_unchecked(&c, &k1, trim_to(&c, &k1, pr))?;
    Ok(Cone {
        complex: c,
        incl,
        proj,
    })
}

fn trim_to(
    a: &CochainComplex,
    b: &CochainComplex,
    mut comps: BTreeMap<i64, IntMatrix>,
) -> BTreeMap<i64, IntMatrix> {
    let (lo, hi) = union_range(a, b);
    comps.retain(|n, _| *n >= lo && *n <= hi);
    comps
}

impl ChainMap {
    /// Degreewise kernel of `self` with its inclusion into the source.
    pub fn kernel_complex(&self) -> Result<(CochainComplex, ChainMap)> {
        let k = self.src();
        let subs = k
            .degrees()
            .map(|n| self.component(n).kernel())
            .collect::<Result<Vec<_>>>()?;
        let groups: Vec<FgAbGroup> = subs.iter().map(|s| s.group.clone()).collect();
        let mut diffs = Vec::new();
        for (i, n) in (k.lo()..k.hi()).enumerate() {
            let img = k.diff(n).matrix().mul(subs[i].basis())?;
            let m = subs[i + 1].from_container_columns(&img)?;
            diffs.push(GroupHom::new_unchecked(
                groups[i].clone(),
                groups[i + 1].clone(),
                m,
            )?);
        }
        let c = CochainComplex::new_unchecked(k.lo(), groups, diffs)?;
        let inc = k
            .degrees()
            .zip(&subs)
            .map(|(n, s)| (n, s.basis().clone()))
            .collect();
        let inc = ChainMap::new_unchecked(&c, k, inc)?;
        Ok((c, inc))
    }

    /// Degreewise cokernel of `self` with the projection from the target.
    pub fn cokernel_complex(&self) -> Result<(CochainComplex, ChainMap)> {
        let l = self.dst();
        let groups: Vec<FgAbGroup> = l.degrees().map(|n| self.component(n).cokernel()).collect();
        let mut diffs = Vec::new();
        for (i, n) in (l.lo()..l.hi()).enumerate() {
            diffs.push(GroupHom::new_unchecked(
                groups[i].clone(),
                groups[i + 1].clone(),
                l.diff(n).matrix().clone(),
            )?);
        }
        let c = CochainComplex::new_unchecked(l.lo(), groups, diffs)?;
        let pr = l
            .degrees()
            .map(|n| (n, IntMatrix::identity(l.group(n).n_gens())))
            .collect();
        let pr = ChainMap::new_unchecked(l, &c, pr)?;
        Ok((c, pr))
    }
}
