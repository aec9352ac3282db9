use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::{ChainMap, CochainComplex};
use crate::abgrp::{FgAbGroup, GroupHom};
use crate::error::{Error, Result};
use crate::exactlin::IntMatrix;

/// Where the maps `Kᵖ → Lᑫ` sit inside one degree of the Hom complex.
/// A map is stored column-major: entry `(i, j)` at `offset + j·rows + i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomBlock {
    pub p: i64,
    pub q: i64,
    pub offset: usize,
    /// generators of `Lᑫ`
    pub rows: usize,
    /// generators of `Kᵖ`
    pub cols: usize,
}

impl HomBlock {
    pub fn len(&self) -> usize {
        self.rows * self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug)]
pub struct HomComplex {
    pub complex: CochainComplex,
    pub source: CochainComplex,
    pub target: CochainComplex,
    layout: BTreeMap<i64, Vec<HomBlock>>,
}

/// `Homⁿ = ⊕_{q−p=n} Hom(Kᵖ, Lᑫ)` with `dφ = d∘φ − (−1)ⁿ φ∘d`.
/// Every `Kᵖ` must be given by a free presentation.
pub fn hom_complex(k: &CochainComplex, l: &CochainComplex) -> Result<HomComplex> {
    if let Some(n) = k.degrees().find(|&n| !k.group(n).is_free_presentation()) {
        return Err(Error::Precondition(format!(
            "source group in degree {n} is not free; free-replace the source first"
        )));
    }
    let k = k.clone();
    let l = l.clone();
    if k.groups().is_empty() || l.groups().is_empty() {
        return Ok(HomComplex {
            complex: CochainComplex::zero(),
            source: k,
            target: l,
            layout: BTreeMap::new(),
        });
    }
    let lo = l.lo() - k.hi();
    let hi = l.hi() - k.lo();
    let mut layout = BTreeMap::new();
    let mut groups = Vec::new();
    for n in lo..=hi {
        let mut blocks = Vec::new();
        let mut offset = 0;
        let mut group = FgAbGroup::trivial();
        for p in k.degrees() {
            let q = p + n;
            if q < l.lo() || q > l.hi() {
                continue;
            }
            let a = k.group(p).n_gens();
            let lq = l.group(q);
            let b = lq.n_gens();
            let rel = IntMatrix::identity(a).kron(lq.relations());
            group = group.direct_sum(&FgAbGroup::new(a * b, rel)?);
            blocks.push(HomBlock {
                p,
                q,
                offset,
                rows: b,
                cols: a,
            });
            offset += a * b;
        }
        layout.insert(n, blocks);
        groups.push(group);
    }
    let mut diffs = Vec::new();
    for n in lo..hi {
        let src = &groups[(n - lo) as usize];
        let dst = &groups[(n - lo + 1) as usize];
        let mut m = IntMatrix::zeros(dst.n_gens(), src.n_gens());
        let sign = if n.rem_euclid(2) == 0 { -1 } else { 1 };
        let target_blocks = &layout[&(n + 1)];
        let find = |p: i64| -> Option<&HomBlock> { target_blocks.iter().find(|b| b.p == p) };
        for blk in &layout[&n] {
            if blk.is_empty() {
                continue;
            }
            // post-composition with d_L into (p, q+1)
            if let Some(t) = find(blk.p) {
                if t.q == blk.q + 1 && !t.is_empty() {
                    let dl = l.diff(blk.q);
                    let piece = IntMatrix::identity(blk.cols).kron(dl.matrix());
                    m.add_block(t.offset, blk.offset, &piece);
                }
            }
            // pre-composition with d_K from (p−1, q)
            if let Some(t) = find(blk.p - 1) {
                if t.q == blk.q && !t.is_empty() {
                    let dk = k.diff(blk.p - 1);
                    let piece = dk
                        .matrix()
                        .transpose()
                        .kron(&IntMatrix::identity(blk.rows))
                        .scale(&BigInt::from(sign));
                    m.add_block(t.offset, blk.offset, &piece);
                }
            }
        }
        diffs.push(GroupHom::new_unchecked(src.clone(), dst.clone(), m)?);
    }
    Ok(HomComplex {
        complex: CochainComplex::new_unchecked(lo, groups, diffs)?,
        source: k,
        target: l,
        layout,
    })
}

impl HomComplex {
    pub fn blocks(&self, n: i64) -> &[HomBlock] {
        self.layout.get(&n).map_or(&[], Vec::as_slice)
    }

    /// Splits a degree-`n` element into its matrices `Kᵖ → Lᵖ⁺ⁿ`, keyed by `p`.
    pub fn to_maps(&self, n: i64, v: &[BigInt]) -> Result<BTreeMap<i64, IntMatrix>> {
        let g = self.complex.group(n);
        if v.len() != g.n_gens() {
            return Err(Error::Dimension(format!(
                "Hom element of length {} in degree {n} with {} generators",
                v.len(),
                g.n_gens()
            )));
        }
        let mut out = BTreeMap::new();
        for b in self.blocks(n) {
            let mut m = IntMatrix::zeros(b.rows, b.cols);
            for j in 0..b.cols {
                for i in 0..b.rows {
                    m[(i, j)] = v[b.offset + j * b.rows + i].clone();
                }
            }
            out.insert(b.p, m);
        }
        Ok(out)
    }

    /// Inverse of [`HomComplex::to_maps`]; missing components are zero.
    pub fn from_maps(&self, n: i64, maps: &BTreeMap<i64, IntMatrix>) -> Result<Vec<BigInt>> {
        let mut v = vec![BigInt::from(0); self.complex.group(n).n_gens()];
        for (p, m) in maps {
            let Some(b) = self.blocks(n).iter().find(|b| b.p == *p) else {
                if m.is_zero() {
                    continue;
                }
                return Err(Error::DegreeRange(format!(
                    "no Hom block for source degree {p} in degree {n}"
                )));
            };
            if m.rows() != b.rows || m.cols() != b.cols {
                return Err(Error::Dimension(format!(
                    "component at source degree {p} has shape {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    b.rows,
                    b.cols
                )));
            }
            for j in 0..b.cols {
                for i in 0..b.rows {
                    v[b.offset + j * b.rows + i] = m[(i, j)].clone();
                }
            }
        }
        Ok(v)
    }

    /// A degree-`n` cocycle as a chain map `K → L[n]`.
    pub fn cocycle_to_chain_map(&self, n: i64, v: &[BigInt]) -> Result<ChainMap> {
        let target = self.target.shift(n);
        ChainMap::new(&self.source, &target, self.to_maps(n, v)?)
    }

    /// A chain map `K → L[n]` as a degree-`n` cocycle.
    pub fn chain_map_to_cocycle(&self, n: i64, f: &ChainMap) -> Result<Vec<BigInt>> {
        let maps = f
            .components()
            .into_iter()
            .filter(|(p, m)| {
                !m.is_zero() || self.blocks(n).iter().any(|b| b.p == *p)
            })
            .collect();
        self.from_maps(n, &maps)
    }
}
