//! Derived Hom on bounded complexes via free replacement of the source,
//! Ext groups, homotopy groups of length-3 models and the extension calculus.

mod ext;
mod extension;

use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

pub use ext::{ext_model, ExtClass, ExtGroup};
pub use extension::{
    baer_sum, classify_extension, pullback_class, pushout_class, realize_extension, Extension,
};

use crate::abgrp::FgAbGroup;
use crate::chain::{hom_complex, ChainMap, CochainComplex, HomComplex};
use crate::error::{Error, Result};
use crate::exactlin::{lattice_basis, IntMatrix, Solver};

/// A free complex `F` with a quasi-isomorphism `q : F → K` that is
/// surjective on generators in every degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Replacement {
    pub complex: CochainComplex,
    pub quasi: ChainMap,
}

fn memo() -> &'static Mutex<HashMap<CochainComplex, Replacement>> {
    static MEMO: OnceLock<Mutex<HashMap<CochainComplex, Replacement>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Free replacement, memoized per complex.
///
/// With `Kⁿ = Z^{gₙ} / ρₙ(Z^{rₙ})` on independent relations, `Fⁿ = Z^{gₙ} ⊕ Z^{rₙ₊₁}`
/// and `D(x, y) = (d̃x + ρy, −kx − hy)` where `d̃` lifts `d`, `d̃ρ = ρh` and
/// `d̃d̃ = ρk`. The quasi-isomorphism is `(x, y) ↦ x`.
pub fn free_replacement(k: &CochainComplex) -> Replacement {
    if let Some(r) = memo().lock().expect("memo lock").get(k) {
        return r.clone();
    }
    let r = build_replacement(k);
    memo()
        .lock()
        .expect("memo lock")
        .entry(k.clone())
        .or_insert(r)
        .clone()
}

fn build_replacement(k: &CochainComplex) -> Replacement {
    if k.is_free() {
        return Replacement {
            complex: k.clone(),
            quasi: ChainMap::identity(k),
        };
    }
    let (lo, hi) = (k.lo(), k.hi());
    // ρₙ : Z^{rₙ} → Z^{gₙ}, columns an independent basis of the relation lattice
    let rho: BTreeMap<i64, IntMatrix> = (lo..=hi + 2)
        .map(|n| {
            let g = k.group(n);
            let m = if g.n_gens() == 0 {
                IntMatrix::zeros(0, 0)
            } else {
                lattice_basis(&g.relations().transpose())
            };
            (n, m)
        })
        .collect();
    let r = |n: i64| rho.get(&n).map_or(0, IntMatrix::cols);
    let g = |n: i64| k.group(n).n_gens();
    let solvers: BTreeMap<i64, Solver> = rho.iter().map(|(&n, m)| (n, Solver::new(m))).collect();
    let solve = |n: i64, b: &IntMatrix| -> IntMatrix {
        match solvers.get(&n) {
            Some(s) if b.cols() > 0 && b.rows() > 0 => s
                .solve_all(b)
                .expect("shapes agree")
                .expect("lands in the relation lattice"),
            _ => IntMatrix::zeros(r(n), b.cols()),
        }
    };
    let dt = |n: i64| k.diff(n).matrix().clone();
    let flo = lo - 1;
    let groups: Vec<FgAbGroup> = (flo..=hi).map(|n| FgAbGroup::free(g(n) + r(n + 1))).collect();
    let mut mats = Vec::new();
    for n in flo..hi {
        // D : Z^{gₙ} ⊕ Z^{rₙ₊₁} → Z^{gₙ₊₁} ⊕ Z^{rₙ₊₂}
        let rho1 = rho.get(&(n + 1)).cloned().unwrap_or_else(|| IntMatrix::zeros(g(n + 1), 0));
        let kk = solve(n + 2, &dt(n + 1).mul(&dt(n)).expect("shape"));
        let hh = solve(n + 2, &dt(n + 1).mul(&rho1).expect("shape"));
        let top = dt(n).hstack(&rho1).expect("rows agree");
        let bot = kk.neg().hstack(&hh.neg()).expect("rows agree");
        mats.push(top.vstack(&bot).expect("cols agree"));
    }
    let f = CochainComplex::from_matrices(flo, groups, mats)
        .expect("free replacement squares to zero");
    let comps = (flo..=hi)
        .map(|n| {
            let proj = IntMatrix::identity(g(n))
                .hstack(&IntMatrix::zeros(g(n), r(n + 1)))
                .expect("rows agree");
            (n, proj)
        })
        .filter(|(n, _)| *n >= lo)
        .collect();
    let quasi = ChainMap::new_unchecked(&f, k, comps).expect("shapes agree");
    Replacement { complex: f, quasi }
}

/// `Hom(F, G)` for the memoized free replacement `F` of `p`.
pub fn rhom_model(p: &CochainComplex, g: &CochainComplex) -> Result<HomComplex> {
    hom_complex(&free_replacement(p).complex, g)
}

/// `RHom(P, G)` as a complex.
pub fn rhom(p: &CochainComplex, g: &CochainComplex) -> Result<CochainComplex> {
    Ok(rhom_model(p, g)?.complex)
}

/// `Extⁱ(P, G) = Hⁱ(RHom(P, G))`.
pub fn ext_group(p: &CochainComplex, g: &CochainComplex, i: i64) -> Result<FgAbGroup> {
    Ok(rhom(p, g)?.cohomology_at(i))
}

/// Rejects complexes with generators outside degrees `−2 ..= 0`.
pub fn check_length3(k: &CochainComplex, what: &str) -> Result<()> {
    let t = k.trimmed();
    if !t.groups().is_empty() && (t.lo() < -2 || t.hi() > 0) {
        return Err(Error::DegreeRange(format!(
            "{what} occupies degrees {}..={}, outside -2..=0",
            t.lo(),
            t.hi()
        )));
    }
    Ok(())
}

/// `τ≤0 RHom(P, G)`, the model of the Hom Picard 2-stack.
pub fn hom_2picard(p: &CochainComplex, g: &CochainComplex) -> Result<CochainComplex> {
    check_length3(p, "P")?;
    check_length3(g, "G")?;
    Ok(rhom(p, g)?.good_truncate(0))
}

/// `(π₀, π₁, π₂) = (H⁰, H⁻¹, H⁻²)`.
pub fn homotopy_groups(p: &CochainComplex) -> Result<[FgAbGroup; 3]> {
    check_length3(p, "P")?;
    Ok([p.cohomology_at(0), p.cohomology_at(-1), p.cohomology_at(-2)])
}

/// `Extⁱ(P, G)` for `i = 1, 0, −1, −2`, in that order.
pub fn ext_homotopy_groups(p: &CochainComplex, g: &CochainComplex) -> Result<[FgAbGroup; 4]> {
    check_length3(p, "P")?;
    check_length3(g, "G")?;
    let h = rhom(p, g)?;
    Ok([
        h.cohomology_at(1),
        h.cohomology_at(0),
        h.cohomology_at(-1),
        h.cohomology_at(-2),
    ])
}

#[cfg(test)]
mod tests;
