use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;

use super::{nerve_rgamma, PosetSheaf, PosetSite};
use crate::abgrp::{hom_group, FgAbGroup, GroupHom};
use crate::error::{Error, Result};
use crate::exactlin::IntMatrix;

/// Natural transformations `A → B`: families `φₓ` with `B(x→y) φₓ = φ_y A(x→y)`
/// on every generating pair.
pub fn sheaf_hom(a: &PosetSheaf, b: &PosetSheaf) -> Result<FgAbGroup> {
    if a.site() != b.site() {
        return Err(Error::Mismatch("sheaves live on different sites".into()));
    }
    let site = a.site();
    let local: Vec<_> = (0..site.len())
        .map(|x| hom_group(a.stalk(x), b.stalk(x)))
        .collect();
    let src = FgAbGroup::direct_sum_all(&local.iter().map(|h| h.group.clone()).collect::<Vec<_>>());
    let mut offsets = vec![0];
    for h in &local {
        offsets.push(offsets.last().unwrap() + h.group.n_gens());
    }
    let targets: Vec<_> = site
        .generators()
        .iter()
        .map(|&(x, y)| hom_group(a.stalk(x), b.stalk(y)))
        .collect();
    let dst = FgAbGroup::direct_sum_all(&targets.iter().map(|h| h.group.clone()).collect::<Vec<_>>());
    let mut m = IntMatrix::zeros(dst.n_gens(), src.n_gens());
    let mut row = 0;
    for (&(x, y), t) in site.generators().iter().zip(&targets) {
        let (ax, bx) = (a.res(x, y)?, b.res(x, y)?);
        for (z, sign) in [(x, 1i64), (y, -1)] {
            for k in 0..local[z].group.n_gens() {
                let mut e = vec![BigInt::from(0); local[z].group.n_gens()];
                e[k] = BigInt::from(1);
                let phi = local[z].to_hom(&e)?;
                let comp = if z == x { bx.compose(&phi)? } else { phi.compose(ax)? };
                let coords = t.from_hom(&comp)?;
                for (r, c) in coords.into_iter().enumerate() {
                    m[(row + r, offsets[z] + k)] += c * sign;
                }
            }
        }
        row += t.group.n_gens();
    }
    let f = GroupHom::new(src, dst, m)?;
    Ok(f.kernel()?.group)
}

/// One line of [`unit_check`].
#[derive(Clone, Debug)]
pub struct UnitCheckRow {
    pub name: String,
    pub hom: FgAbGroup,
    pub gamma: FgAbGroup,
    pub ok: bool,
}

fn battery() -> Vec<(String, PosetSheaf)> {
    let mut out = Vec::new();
    let pt = PosetSite::one_point();
    for (name, g) in [
        ("point, Z", FgAbGroup::free(1)),
        ("point, Z/3", FgAbGroup::cyclic(3)),
        ("point, Z + Z/2", FgAbGroup::from_invariants(1, &[2])),
    ] {
        out.push((name.to_string(), PosetSheaf::constant(&pt, &g)));
    }
    let circle = PosetSite::pseudo_circle();
    for (name, g) in [
        ("pseudo-circle, Z", FgAbGroup::free(1)),
        ("pseudo-circle, Z/4", FgAbGroup::cyclic(4)),
    ] {
        out.push((name.to_string(), PosetSheaf::constant(&circle, &g)));
    }
    let anti = PosetSite::antichain(2);
    let f = PosetSheaf::new(
        &anti,
        vec![FgAbGroup::free(1), FgAbGroup::cyclic(2)],
        BTreeMap::new(),
    )
    .expect("no restrictions");
    out.push(("antichain, Z and Z/2".to_string(), f));
    let chain = PosetSite::chain(2);
    let f = PosetSheaf::new(
        &chain,
        vec![FgAbGroup::free(1), FgAbGroup::free(1)],
        BTreeMap::from([((0, 1), IntMatrix::from_rows(&[[2]], 1))]),
    )
    .expect("well defined");
    out.push(("chain, Z -2-> Z".to_string(), f));
    let v = vee();
    out.push(("vee, Z/6 -> Z/2, Z/3".to_string(), v));
    out
}

/// `a < b`, `a < c` with `Z/6` at `a` mapping onto `Z/2` and `Z/3`.
fn vee() -> PosetSheaf {
    let site: Arc<PosetSite> = PosetSite::new(&["a", "b", "c"], &[("a", "b"), ("a", "c")]).expect("valid");
    PosetSheaf::new(
        &site,
        vec![FgAbGroup::cyclic(6), FgAbGroup::cyclic(2), FgAbGroup::cyclic(3)],
        BTreeMap::from([
            ((0, 1), IntMatrix::from_rows(&[[1]], 1)),
            ((0, 2), IntMatrix::from_rows(&[[1]], 1)),
        ]),
    )
    .expect("well defined")
}

/// `Hom(Z, F) ≅ Γ(F)` for the constant sheaf `Z` on a fixed battery.
pub fn unit_check() -> Result<Vec<UnitCheckRow>> {
    battery()
        .into_iter()
        .map(|(name, f)| {
            let unit = PosetSheaf::constant(f.site(), &FgAbGroup::free(1));
            let hom = sheaf_hom(&unit, &f)?;
            let gamma = nerve_rgamma(&f).cohomology_at(0);
            let ok = hom.is_isomorphic(&gamma);
            Ok(UnitCheckRow { name, hom, gamma, ok })
        })
        .collect()
}
