use std::collections::BTreeMap;

use super::CochainComplex;
use crate::abgrp::{FgAbGroup, GroupHom};
use crate::error::{Error, Result};
use crate::exactlin::IntMatrix;

/// A bounded grid `C^{a,b}` with `d_h : C^{a,b} → C^{a+1,b}` and
/// `d_v : C^{a,b} → C^{a,b+1}`. Squares commute; the sign that makes them
/// anticommute is applied at totalization.
#[derive(Clone, Debug, Default)]
pub struct DoubleComplex {
    cells: BTreeMap<(i64, i64), FgAbGroup>,
    dh: BTreeMap<(i64, i64), IntMatrix>,
    dv: BTreeMap<(i64, i64), IntMatrix>,
}

impl DoubleComplex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set_cell(&mut self, a: i64, b: i64, g: FgAbGroup) {
        self.cells.insert((a, b), g);
    }

    /// Horizontal map out of cell `(a, b)`.
    pub fn set_dh(&mut self, a: i64, b: i64, m: IntMatrix) {
        self.dh.insert((a, b), m);
    }

    /// Vertical map out of cell `(a, b)`.
    pub fn set_dv(&mut self, a: i64, b: i64, m: IntMatrix) {
        self.dv.insert((a, b), m);
    }

    pub fn cell(&self, a: i64, b: i64) -> FgAbGroup {
        self.cells
            .get(&(a, b))
            .cloned()
            .unwrap_or_else(FgAbGroup::trivial)
    }

    fn map_or_zero(
        &self,
        table: &BTreeMap<(i64, i64), IntMatrix>,
        from: (i64, i64),
        to: (i64, i64),
    ) -> IntMatrix {
        table.get(&from).cloned().unwrap_or_else(|| {
            IntMatrix::zeros(self.cell(to.0, to.1).n_gens(), self.cell(from.0, from.1).n_gens())
        })
    }

    pub fn dh(&self, a: i64, b: i64) -> GroupHom {
        let m = self.map_or_zero(&self.dh, (a, b), (a + 1, b));
        GroupHom::new_unchecked(self.cell(a, b), self.cell(a + 1, b), m)
            .expect("validated shape")
    }

    pub fn dv(&self, a: i64, b: i64) -> GroupHom {
        let m = self.map_or_zero(&self.dv, (a, b), (a, b + 1));
        GroupHom::new_unchecked(self.cell(a, b), self.cell(a, b + 1), m)
            .expect("validated shape")
    }

    fn check_shapes(&self) -> Result<()> {
        for (table, name, step) in [(&self.dh, "horizontal", (1, 0)), (&self.dv, "vertical", (0, 1))] {
            for (&(a, b), m) in table {
                let src = self.cell(a, b).n_gens();
                let dst = self.cell(a + step.0, b + step.1).n_gens();
                if m.rows() != dst || m.cols() != src {
                    return Err(Error::Dimension(format!(
                        "{name} map at ({a}, {b}) is {}x{}, expected {dst}x{src}",
                        m.rows(),
                        m.cols()
                    )));
                }
            }
        }
        Ok(())
    }

    /// Checks well-definedness, `d_h² = 0`, `d_v² = 0` and commuting squares.
    pub fn validate(&self) -> Result<()> {
        self.check_shapes()?;
        for &(a, b) in self.cells.keys() {
            let h = self.dh(a, b);
            let v = self.dv(a, b);
            GroupHom::new(h.src().clone(), h.dst().clone(), h.matrix().clone())?;
            GroupHom::new(v.src().clone(), v.dst().clone(), v.matrix().clone())?;
            if !self.dh(a + 1, b).compose(&h)?.is_zero() {
                return Err(Error::Invalid(format!(
                    "horizontal differential squares to a nonzero map at ({a}, {b})"
                )));
            }
            if !self.dv(a, b + 1).compose(&v)?.is_zero() {
                return Err(Error::Invalid(format!(
                    "vertical differential squares to a nonzero map at ({a}, {b})"
                )));
            }
            let hv = self.dh(a, b + 1).compose(&v)?;
            let vh = self.dv(a + 1, b).compose(&h)?;
            if !hv.equals(&vh)? {
                return Err(Error::Invalid(format!("square at ({a}, {b}) does not commute")));
            }
        }
        Ok(())
    }

    /// Range of `a + b` over the stored cells.
    pub fn total_range(&self) -> Option<(i64, i64)> {
        let sums = self.cells.keys().map(|(a, b)| a + b);
        let lo = sums.clone().min()?;
        let hi = sums.max()?;
        Some((lo, hi))
    }

    fn diagonal(&self, n: i64) -> Vec<(i64, i64)> {
        self.cells
            .keys()
            .filter(|(a, b)| a + b == n)
            .copied()
            .collect()
    }

    /// Total degrees `lo ..= hi` only. Cohomology of the window agrees with
    /// that of the full total complex in degrees `lo + 1 ..= hi − 1`.
    pub fn total_window(&self, lo: i64, hi: i64) -> Result<CochainComplex> {
        self.check_shapes()?;
        let mut layouts = Vec::new();
        let mut groups = Vec::new();
        for n in lo..=hi {
            let cells = self.diagonal(n);
            let mut offsets = BTreeMap::new();
            let mut off = 0;
            let mut g = FgAbGroup::trivial();
            for &(a, b) in &cells {
                offsets.insert((a, b), off);
                let c = self.cell(a, b);
                off += c.n_gens();
                g = g.direct_sum(&c);
            }
            layouts.push(offsets);
            groups.push(g);
        }
        let mut diffs = Vec::new();
        for n in lo..hi {
            let i = (n - lo) as usize;
            let mut m = IntMatrix::zeros(groups[i + 1].n_gens(), groups[i].n_gens());
            for (&(a, b), &off) in &layouts[i] {
                if let Some(h) = self.dh.get(&(a, b)) {
                    if let Some(&t) = layouts[i + 1].get(&(a + 1, b)) {
                        m.add_block(t, off, h);
                    }
                }
                if let Some(v) = self.dv.get(&(a, b)) {
                    if let Some(&t) = layouts[i + 1].get(&(a, b + 1)) {
                        if a.rem_euclid(2) == 0 {
                            m.add_block(t, off, v);
                        } else {
                            m.add_block(t, off, &v.neg());
                        }
                    }
                }
            }
            diffs.push(GroupHom::new_unchecked(
                groups[i].clone(),
                groups[i + 1].clone(),
                m,
            )?);
        }
        CochainComplex::new_unchecked(lo, groups, diffs)
    }
}

/// `Totⁿ = ⊕_{a+b=n} C^{a,b}` (cells ordered by increasing `a`),
/// `d = d_h + (−1)ᵃ d_v`.
pub fn total_complex(d: &DoubleComplex) -> Result<CochainComplex> {
    match d.total_range() {
        None => Ok(CochainComplex::zero()),
        Some((lo, hi)) => d.total_window(lo, hi),
    }
}
