use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::{check_length3, ext_model, free_replacement, ExtClass};
use crate::chain::{hom_complex, ChainMap, CochainComplex, HomComplex};
use crate::error::{Error, Result};
use crate::exactlin::{solve_in_image, IntMatrix, Solver};

/// An extension `G →i E →j P` of length-3 models.
#[derive(Clone, Debug)]
pub struct Extension {
    pub complex: CochainComplex,
    pub incl: ChainMap,
    pub proj: ChainMap,
}

impl Extension {
    /// `Hⁿ(E) ≅ Hⁿ(G) ⊕ Hⁿ(P)` in every degree `−3 ..= 1`.
    pub fn splits_in_cohomology(&self) -> bool {
        let (g, p) = (self.incl.src(), self.proj.dst());
        (-3..=1).all(|n| {
            self.complex
                .cohomology_at(n)
                .is_isomorphic(&g.cohomology_at(n).direct_sum(&p.cohomology_at(n)))
        })
    }
}

/// Matrix of `φ ↦ m_q ∘ φ` from `Homⁿ(F, A)` to `Homⁿ(F, B)` (same `F`).
fn post_matrix(src: &HomComplex, dst: &HomComplex, n: i64, m: impl Fn(i64) -> IntMatrix) -> IntMatrix {
    let mut out = IntMatrix::zeros(
        dst.complex.group(n).n_gens(),
        src.complex.group(n).n_gens(),
    );
    for b in src.blocks(n) {
        if b.is_empty() {
            continue;
        }
        if let Some(t) = dst.blocks(n).iter().find(|t| t.p == b.p) {
            if t.is_empty() {
                continue;
            }
            let piece = IntMatrix::identity(b.cols).kron(&m(b.q));
            out.add_block(t.offset, b.offset, &piece);
        }
    }
    out
}

fn relation_columns(h: &HomComplex, n: i64) -> IntMatrix {
    h.complex.group(n).relations().transpose()
}

fn zeros_like(a: &CochainComplex, b: &CochainComplex, n: i64) -> IntMatrix {
    IntMatrix::zeros(b.group(n).n_gens(), a.group(n).n_gens())
}

/// `E = Cone(ξ)[−1]` up to the sign of `ξ`: `Eⁿ = Fⁿ ⊕ Gⁿ`,
/// `d(x, y) = (dx, ξx + dy)`, then `τ≥−2`. Here `F → P` is the free replacement.
pub fn realize_extension(xi: &ExtClass) -> Result<Extension> {
    let ext = xi.ext();
    if ext.degree != 1 {
        return Err(Error::Invalid(format!(
            "extensions are classified by Ext^1, got a class of degree {}",
            ext.degree
        )));
    }
    let (p, g) = (&ext.source, &ext.target);
    check_length3(p, "P")?;
    check_length3(g, "G")?;
    let f = &ext.replacement.complex;
    let q = &ext.replacement.quasi;
    let xmaps = ext.hom.to_maps(1, xi.cocycle())?;
    let lo = f.lo().min(g.lo());
    let hi = f.hi().max(g.hi());
    let groups = (lo..=hi).map(|n| f.group(n).direct_sum(&g.group(n))).collect();
    let mut mats = Vec::new();
    for n in lo..hi {
        let df = f.diff(n).matrix().clone();
        let dg = g.diff(n).matrix().clone();
        let x = xmaps.get(&n).cloned().unwrap_or_else(|| {
            IntMatrix::zeros(g.group(n + 1).n_gens(), f.group(n).n_gens())
        });
        let top = df.hstack(&IntMatrix::zeros(df.rows(), dg.cols()))?;
        mats.push(top.vstack(&x.hstack(&dg)?)?);
    }
    let e = CochainComplex::from_matrices(lo, groups, mats)?;
    let mut icomps = BTreeMap::new();
    let mut jcomps = BTreeMap::new();
    for n in lo..=hi {
        let (a, b) = (f.group(n).n_gens(), g.group(n).n_gens());
        icomps.insert(n, IntMatrix::zeros(a, b).vstack(&IntMatrix::identity(b))?);
        let qn = q.component(n).matrix().clone();
        jcomps.insert(n, qn.hstack(&IntMatrix::zeros(p.group(n).n_gens(), b))?);
    }
    let i = ChainMap::new_unchecked(g, &e, icomps)?;
    let (t, pr) = e.good_truncate_above(-2);
    let i = pr.compose(&i)?;
    jcomps.retain(|n, _| *n >= -2);
    let j = ChainMap::new_unchecked(&t, p, jcomps)?;
    i.check_commutes()?;
    j.check_commutes()?;
    Ok(Extension {
        complex: t,
        incl: i,
        proj: j,
    })
}

/// The class of `G →i E →j P`: lift `q : F → P` through `j` to `s`, then solve
/// `i∘ξ + Dη = Ds` with `j∘η = 0`.
pub fn classify_extension(x: &Extension) -> Result<ExtClass> {
    let (i, j) = (&x.incl, &x.proj);
    let e = &x.complex;
    if i.dst() != e || j.src() != e {
        return Err(Error::Mismatch("i and j must meet in E".into()));
    }
    let (g, p) = (i.src(), j.dst());
    let model = ext_model(p, g, 1)?;
    let f = &model.replacement.complex;
    let q = &model.replacement.quasi;

    let mut s = BTreeMap::new();
    for n in f.degrees() {
        let pn = p.group(n);
        let target = q.component(n).matrix().clone();
        if target.cols() == 0 || pn.n_gens() == 0 {
            s.insert(n, zeros_like(f, e, n));
            continue;
        }
        let a = j.component(n).matrix().hstack(&pn.relations().transpose())?;
        let sol = Solver::new(&a).solve_all(&target)?.ok_or_else(|| {
            Error::Invalid(format!("j is not surjective in degree {n}"))
        })?;
        let en = e.group(n).n_gens();
        s.insert(n, sol.select_rows(&(0..en).collect::<Vec<_>>()));
    }

    let hfe = hom_complex(f, e)?;
    let hfp = hom_complex(f, p)?;
    let hfg = &model.hom;
    let sv = hfe.from_maps(0, &s)?;
    let delta = hfe.complex.diff(0).apply(&sv)?;

    let istar = post_matrix(hfg, &hfe, 1, |n| i.component(n).matrix().clone());
    let jstar = post_matrix(&hfe, &hfp, 0, |n| j.component(n).matrix().clone());
    let d0 = hfe.complex.diff(0).matrix().clone();
    let rel1 = relation_columns(&hfe, 1);
    let relp = relation_columns(&hfp, 0);
    let (na, nc, nd) = (istar.cols(), rel1.cols(), relp.cols());
    let top = istar
        .hstack(&d0)?
        .hstack(&rel1)?
        .hstack(&IntMatrix::zeros(istar.rows(), nd))?;
    let bot = IntMatrix::zeros(jstar.rows(), na)
        .hstack(&jstar)?
        .hstack(&IntMatrix::zeros(jstar.rows(), nc))?
        .hstack(&relp)?;
    let sys = top.vstack(&bot)?;
    let mut rhs = delta;
    rhs.extend(std::iter::repeat_n(BigInt::from(0), jstar.rows()));
    let z = solve_in_image(&sys, &rhs)?.ok_or_else(|| {
        Error::Invalid("the kernel of j is not G up to quasi-isomorphism".into())
    })?;
    model.class_of_cocycle(&z[..na]).map_err(|e| match e {
        Error::Invalid(_) => Error::Invalid("i is not injective enough to classify E".into()),
        other => other,
    })
}

/// Baer sum: the fibre product over `P` modulo the antidiagonal copy of `G`.
pub fn baer_sum(a: &Extension, b: &Extension) -> Result<Extension> {
    let (g, p) = (a.incl.src(), a.proj.dst());
    if b.incl.src() != g || b.proj.dst() != p {
        return Err(Error::Mismatch("extensions of different P or G".into()));
    }
    let (e1, e2) = (&a.complex, &b.complex);
    let sum = e1.direct_sum(e2);
    let (lo, hi) = (sum.lo(), sum.hi());
    let mut diff_comps = BTreeMap::new();
    for n in lo..=hi {
        let j1 = a.proj.component(n).matrix().clone();
        let j2 = b.proj.component(n).matrix().neg();
        diff_comps.insert(n, j1.hstack(&j2)?);
    }
    let m = ChainMap::new_unchecked(&sum, p, diff_comps)?;
    let (xc, _) = m.kernel_complex()?;
    let subs = (lo..=hi)
        .map(|n| m.component(n).kernel())
        .collect::<Result<Vec<_>>>()?;
    let mut anti = BTreeMap::new();
    let mut incl = BTreeMap::new();
    let mut proj = BTreeMap::new();
    for (k, n) in (lo..=hi).enumerate() {
        let i1 = a.incl.component(n).matrix().clone();
        let i2 = b.incl.component(n).matrix().clone();
        anti.insert(n, subs[k].from_container_columns(&i1.vstack(&i2.neg())?)?);
        let zero2 = IntMatrix::zeros(i2.rows(), i2.cols());
        incl.insert(n, subs[k].from_container_columns(&i1.vstack(&zero2)?)?);
        let first = IntMatrix::identity(e1.group(n).n_gens())
            .hstack(&IntMatrix::zeros(e1.group(n).n_gens(), e2.group(n).n_gens()))?;
        let j1 = a.proj.component(n).matrix().clone();
        proj.insert(n, j1.mul(&first)?.mul(subs[k].basis())?);
    }
    let anti = ChainMap::new_unchecked(g, &xc, anti)?;
    let (bc, _) = anti.cokernel_complex()?;
    let incl = ChainMap::new_unchecked(g, &bc, incl)?;
    let proj = ChainMap::new_unchecked(&bc, p, proj)?;
    incl.check_commutes()?;
    proj.check_commutes()?;
    Ok(Extension {
        complex: bc,
        incl,
        proj,
    })
}

/// `f*ξ = ξ∘f̃` where `f̃ : F′ → F` lifts `f : P′ → P` up to homotopy.
pub fn pullback_class(f: &ChainMap, xi: &ExtClass) -> Result<ExtClass> {
    let ext = xi.ext();
    if f.dst() != &ext.source {
        return Err(Error::Mismatch("f does not end at the source of the class".into()));
    }
    let p2 = f.src();
    let r2 = free_replacement(p2);
    let (f2, q2) = (&r2.complex, &r2.quasi);
    let (f1, q1) = (&ext.replacement.complex, &ext.replacement.quasi);
    let p = &ext.source;

    let hff = hom_complex(f2, f1)?;
    let hfp = hom_complex(f2, p)?;
    let d_ff = hff.complex.diff(0).matrix().clone();
    let qstar = post_matrix(&hff, &hfp, 0, |n| q1.component(n).matrix().clone());
    let d_fp = hfp.complex.diff(-1).matrix().neg();
    let relp = relation_columns(&hfp, 0);
    let (na, nb, nc) = (d_ff.cols(), d_fp.cols(), relp.cols());
    let top = d_ff
        .hstack(&IntMatrix::zeros(d_ff.rows(), nb))?
        .hstack(&IntMatrix::zeros(d_ff.rows(), nc))?;
    let bot = qstar.hstack(&d_fp)?.hstack(&relp)?;
    let sys = top.vstack(&bot)?;
    let target: BTreeMap<i64, IntMatrix> = f2
        .degrees()
        .filter(|n| p.group(*n).n_gens() > 0)
        .map(|n| {
            let m = f.component(n).matrix().mul(q2.component(n).matrix())?;
            Ok((n, m))
        })
        .collect::<Result<_>>()?;
    let mut rhs = vec![BigInt::from(0); d_ff.rows()];
    rhs.extend(hfp.from_maps(0, &target)?);
    let z = solve_in_image(&sys, &rhs)?
        .ok_or_else(|| Error::Internal("no lift of a chain map between free replacements".into()))?;
    let lift = hff.to_maps(0, &z[..na])?;

    let model = ext_model(p2, &ext.target, ext.degree)?;
    let xmaps = ext.hom.to_maps(ext.degree, xi.cocycle())?;
    let mut out = BTreeMap::new();
    for (n, x) in &xmaps {
        if let Some(l) = lift.get(n) {
            out.insert(*n, x.mul(l)?);
        }
    }
    let v = model.hom.from_maps(ext.degree, &out)?;
    model.class_of_cocycle(&v)
}

/// `g_*ξ = g∘ξ`.
pub fn pushout_class(g: &ChainMap, xi: &ExtClass) -> Result<ExtClass> {
    let ext = xi.ext();
    if g.src() != &ext.target {
        return Err(Error::Mismatch("g does not start at the target of the class".into()));
    }
    let model = ext_model(&ext.source, g.dst(), ext.degree)?;
    let xmaps = ext.hom.to_maps(ext.degree, xi.cocycle())?;
    let mut out = BTreeMap::new();
    for (n, x) in &xmaps {
        let gm = g.component(n + ext.degree).matrix().clone();
        out.insert(*n, gm.mul(x)?);
    }
    let v = model.hom.from_maps(ext.degree, &out)?;
    model.class_of_cocycle(&v)
}
