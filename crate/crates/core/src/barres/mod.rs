//! The partial resolution `𝕃.(P)` built from free abelian groups on powers
//! of a finite length-3 complex, with `Ext` computed through it.
//!
//! Basis elements are tuples of elements of one degree of `P`. The internal
//! differential is pointed, `[t] ↦ [dt] − [0, …, 0]`, so that it squares to zero.

mod formulas;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

pub use formulas::{formula, Formula, Term};

use crate::abgrp::FgAbGroup;
use crate::chain::{hom_complex, ChainMap, CochainComplex, DoubleComplex, HomComplex};
use crate::error::{Error, Result};
use crate::exactlin::IntMatrix;

/// Degrees occupied by every `𝕃ⱼ`.
pub const LO: i64 = -2;
pub const HI: i64 = 0;

/// Arities of the summands `Z[Pᵏ]` of `𝕃ⱼ`, in basis order.
pub const ARITIES: [&[usize]; 5] = [&[1], &[2], &[2, 3], &[4, 3], &[5, 4]];

/// Offset between resolution columns and `Ext` degrees: the output at
/// index `i` of [`ext_via_resolution`] is `H^{i + EXT_SHIFT}` of the total complex.
pub const EXT_SHIFT: i64 = 0;

/// Element tables of each degree of a finite complex in `−2 ..= 0`.
#[derive(Clone, Debug)]
pub struct FiniteComplex {
    complex: CochainComplex,
    degrees: Vec<DegreeTable>,
}

#[derive(Clone, Debug)]
struct DegreeTable {
    /// normal forms in lexicographic order
    elements: Vec<Vec<BigInt>>,
    index: HashMap<Vec<BigInt>, usize>,
    add: Vec<Vec<usize>>,
    /// index of `d(x)` in the next degree
    diff: Vec<usize>,
    zero: usize,
}

/// An element of `Pⁿ` by its position in the lexicographic element list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem {
    pub degree: i64,
    pub index: usize,
}

impl FiniteComplex {
    pub fn new(p: &CochainComplex) -> Result<Self> {
        let t = p.trimmed();
        if !t.groups().is_empty() && (t.lo() < LO || t.hi() > HI) {
            return Err(Error::DegreeRange(format!(
                "P occupies degrees {}..={}, outside {LO}..={HI}",
                t.lo(),
                t.hi()
            )));
        }
        let complex = p.with_range(LO, HI)?;
        let mut degrees: Vec<DegreeTable> = Vec::new();
        for n in LO..=HI {
            let g = complex.group(n);
            if !g.is_finite() {
                return Err(Error::Precondition(format!(
                    "P in degree {n} is {g}, which is infinite"
                )));
            }
            let elements = g.enumerate()?;
            let index: HashMap<Vec<BigInt>, usize> =
                elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
            let add = elements
                .iter()
                .map(|a| elements.iter().map(|b| index[&g.add_reduced(a, b)]).collect())
                .collect();
            let zero = index[&vec![BigInt::zero(); g.factor_orders().len()]];
            degrees.push(DegreeTable {
                elements,
                index,
                add,
                diff: Vec::new(),
                zero,
            });
        }
        for n in LO..HI {
            let k = (n - LO) as usize;
            let (g, h) = (complex.group(n), complex.group(n + 1));
            let d = complex.diff(n);
            let mut images = Vec::with_capacity(degrees[k].elements.len());
            for e in &degrees[k].elements {
                let y = h.reduce(&d.apply(&g.lift(e)?)?)?;
                images.push(degrees[k + 1].index[&y]);
            }
            degrees[k].diff = images;
        }
        let top = degrees.last_mut().expect("three degrees");
        top.diff = vec![0; top.elements.len()];
        Ok(FiniteComplex { complex, degrees })
    }

    pub fn complex(&self) -> &CochainComplex {
        &self.complex
    }

    fn table(&self, n: i64) -> &DegreeTable {
        &self.degrees[(n - LO) as usize]
    }

    pub fn order(&self, n: i64) -> usize {
        self.table(n).elements.len()
    }

    /// Normal-form coordinates of an element.
    pub fn element(&self, e: Elem) -> &[BigInt] {
        &self.table(e.degree).elements[e.index]
    }

    pub fn elem_of(&self, n: i64, coords: &[BigInt]) -> Result<Elem> {
        let g = self.complex.group(n);
        let y = g.reduce(coords)?;
        Ok(Elem {
            degree: n,
            index: self.table(n).index[&y],
        })
    }

    pub fn zero(&self, n: i64) -> Elem {
        Elem {
            degree: n,
            index: self.table(n).zero,
        }
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        debug_assert_eq!(a.degree, b.degree);
        Elem {
            degree: a.degree,
            index: self.table(a.degree).add[a.index][b.index],
        }
    }

    /// Label such as `1` or `(0,3)` for an element in normal form.
    pub fn label(&self, e: Elem) -> String {
        let c = self.element(e);
        match c.len() {
            0 => "0".to_string(),
            1 => c[0].to_string(),
            _ => format!(
                "({})",
                c.iter().map(BigInt::to_string).collect::<Vec<_>>().join(",")
            ),
        }
    }

    pub fn tuple_label(&self, t: &[Elem]) -> String {
        format!(
            "[{}]",
            t.iter().map(|&e| self.label(e)).collect::<Vec<_>>().join(",")
        )
    }
}

/// A formal sum of tuples, keyed by tuple.
pub type FormalSum = BTreeMap<Vec<Elem>, i64>;

/// `Dⱼ` on one basis tuple of `𝕃ⱼ₊₁`, as a formal sum in `𝕃ⱼ`.
pub fn differential(p: &FiniteComplex, j: usize, tuple: &[Elem]) -> Result<FormalSum> {
    let Some(n) = tuple.first().map(|e| e.degree) else {
        return Err(Error::Invalid("empty tuple".into()));
    };
    if tuple.iter().any(|e| e.degree != n) {
        return Err(Error::Invalid(format!(
            "tuple mixes degrees: {:?}",
            tuple.iter().map(|e| e.degree).collect::<Vec<_>>()
        )));
    }
    if !(LO..=HI).contains(&n) || tuple.iter().any(|e| e.index >= p.order(n)) {
        return Err(Error::Invalid("tuple entry is not an element of P".into()));
    }
    let f = formula(j, tuple.len()).ok_or_else(|| {
        Error::Invalid(format!("D{j} is not defined on tuples of length {}", tuple.len()))
    })?;
    Ok(evaluate(p, f, tuple))
}

fn evaluate(p: &FiniteComplex, f: &Formula, tuple: &[Elem]) -> FormalSum {
    let n = tuple[0].degree;
    let mut out = FormalSum::new();
    for term in f {
        let t: Vec<Elem> = term
            .slots
            .iter()
            .map(|slot| {
                slot.iter()
                    .fold(p.zero(n), |acc, &i| p.add(acc, tuple[i]))
            })
            .collect();
        *out.entry(t).or_insert(0) += term.coef;
    }
    out.retain(|_, c| *c != 0);
    out
}

/// A free complex on `−2 ..= 0` whose basis in degree `n` is the disjoint
/// union of `(Pⁿ)ᵏ` over the summand arities `k`.
#[derive(Clone, Debug)]
pub struct LabeledFreeComplex {
    pub arities: Vec<usize>,
    pub complex: CochainComplex,
    /// per degree: basis tuples in order
    labels: Vec<Vec<Vec<Elem>>>,
    index: Vec<HashMap<Vec<Elem>, usize>>,
}

fn tuples(p: &FiniteComplex, n: i64, k: usize) -> Vec<Vec<Elem>> {
    let m = p.order(n);
    let total = m.pow(k as u32);
    (0..total)
        .map(|mut code| {
            let mut t = vec![Elem { degree: n, index: 0 }; k];
            for slot in t.iter_mut().rev() {
                slot.index = code % m;
                code /= m;
            }
            t
        })
        .collect()
}

impl LabeledFreeComplex {
    pub fn new(p: &FiniteComplex, arities: &[usize]) -> Self {
        let mut labels = Vec::new();
        let mut index: Vec<HashMap<Vec<Elem>, usize>> = Vec::new();
        for n in LO..=HI {
            let basis: Vec<Vec<Elem>> = arities.iter().flat_map(|&k| tuples(p, n, k)).collect();
            index.push(basis.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect());
            labels.push(basis);
        }
        let groups = labels.iter().map(|b| FgAbGroup::free(b.len())).collect();
        let mats = (LO..HI)
            .map(|n| {
                let (src, dst) = (&labels[(n - LO) as usize], &index[(n - LO + 1) as usize]);
                let mut m = IntMatrix::zeros(dst.len(), src.len());
                for (c, t) in src.iter().enumerate() {
                    let image: Vec<Elem> = t
                        .iter()
                        .map(|e| Elem {
                            degree: n + 1,
                            index: p.table(n).diff[e.index],
                        })
                        .collect();
                    let zero = vec![p.zero(n + 1); t.len()];
                    m[(dst[&image], c)] += 1;
                    m[(dst[&zero], c)] -= 1;
                }
                m
            })
            .collect();
        let complex = CochainComplex::from_matrices(LO, groups, mats)
            .expect("pointed differential squares to zero");
        LabeledFreeComplex {
            arities: arities.to_vec(),
            complex,
            labels,
            index,
        }
    }

    pub fn rank(&self, n: i64) -> usize {
        self.labels
            .get((n - LO) as usize)
            .map_or(0, Vec::len)
    }

    pub fn basis(&self, n: i64) -> &[Vec<Elem>] {
        &self.labels[(n - LO) as usize]
    }

    pub fn position(&self, t: &[Elem]) -> Option<usize> {
        self.index.get((t.first()?.degree - LO) as usize)?.get(t).copied()
    }

    pub fn is_free(&self) -> bool {
        self.complex.is_free()
    }
}

/// `Z[P]` with basis `[p]` in each degree.
pub fn free_on_complex(p: &CochainComplex) -> Result<LabeledFreeComplex> {
    let fc = FiniteComplex::new(p)?;
    Ok(LabeledFreeComplex::new(&fc, &[1]))
}

/// `𝕃₀ … 𝕃₄` with `Dⱼ : 𝕃ⱼ₊₁ → 𝕃ⱼ` and `ε : 𝕃₀ → P`.
#[derive(Clone, Debug)]
pub struct ResolutionChain {
    pub p: Arc<FiniteComplex>,
    pub terms: Vec<LabeledFreeComplex>,
    pub d: Vec<ChainMap>,
    pub eps: ChainMap,
}

fn d_matrix(p: &FiniteComplex, j: usize, src: &LabeledFreeComplex, dst: &LabeledFreeComplex, n: i64) -> IntMatrix {
    let mut m = IntMatrix::zeros(dst.rank(n), src.rank(n));
    for (c, t) in src.basis(n).iter().enumerate() {
        let f = formula(j, t.len()).expect("arities match the formulas");
        for (u, coef) in evaluate(p, f, t) {
            let r = dst.position(&u).expect("image tuple is a basis element");
            m[(r, c)] += coef;
        }
    }
    m
}

/// Builds `𝕃.(P)` and checks every structural invariant; a failure is an
/// internal error.
pub fn build_resolution(p: &CochainComplex) -> Result<ResolutionChain> {
    let fc = Arc::new(FiniteComplex::new(p)?);
    let terms: Vec<LabeledFreeComplex> = ARITIES
        .iter()
        .map(|a| LabeledFreeComplex::new(&fc, a))
        .collect();
    let internal = |e: Error| Error::Internal(format!("resolution invariant failed: {e}"));
    let mut d = Vec::new();
    for j in 0..4 {
        let comps = (LO..=HI)
            .map(|n| (n, d_matrix(&fc, j, &terms[j + 1], &terms[j], n)))
            .collect();
        d.push(ChainMap::new(&terms[j + 1].complex, &terms[j].complex, comps).map_err(internal)?);
    }
    let target = fc.complex.clone();
    let eps_comps = (LO..=HI)
        .map(|n| {
            let g = target.group(n);
            let cols: Vec<Vec<BigInt>> = terms[0]
                .basis(n)
                .iter()
                .map(|t| g.lift(fc.element(t[0])))
                .collect::<Result<_>>()?;
            Ok((n, IntMatrix::from_columns(g.n_gens(), &cols)))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    let eps = ChainMap::new(&terms[0].complex, &target, eps_comps).map_err(internal)?;
    let chain = ResolutionChain { p: fc, terms, d, eps };
    chain.check().map_err(internal)?;
    Ok(chain)
}

impl ResolutionChain {
    /// `Dⱼ ∘ Dⱼ₊₁ = 0`, `ε ∘ D₀ = 0` and freeness, on every generator.
    pub fn check(&self) -> Result<()> {
        for (j, t) in self.terms.iter().enumerate() {
            if !t.is_free() {
                return Err(Error::Internal(format!("L{j} is not free")));
            }
        }
        for j in 0..3 {
            if !self.d[j].compose(&self.d[j + 1])?.is_zero() {
                return Err(Error::Internal(format!("D{j} D{} is not zero", j + 1)));
            }
        }
        if !self.eps.compose(&self.d[0])?.is_zero() {
            return Err(Error::Internal("eps D0 is not zero".into()));
        }
        for (j, f) in self.d.iter().enumerate() {
            f.check_commutes()
                .map_err(|_| Error::Internal(format!("D{j} does not commute with d")))?;
        }
        Ok(())
    }

    /// Ranks of `𝕃₀ … 𝕃₄` in degree `n`.
    pub fn ranks(&self, n: i64) -> Vec<usize> {
        self.terms.iter().map(|t| t.rank(n)).collect()
    }

    /// The bicomplex with `𝕃ⱼ` in column `−j`.
    pub fn double_complex(&self) -> DoubleComplex {
        let mut dc = DoubleComplex::new();
        for (j, t) in self.terms.iter().enumerate() {
            let a = -(j as i64);
            for n in LO..=HI {
                dc.set_cell(a, n, t.complex.group(n));
                if n < HI {
                    dc.set_dv(a, n, t.complex.diff(n).matrix().clone());
                }
                if j > 0 {
                    dc.set_dh(a, n, self.d[j - 1].component(n).matrix().clone());
                }
            }
        }
        dc
    }

    /// `Tot(𝕃.(P))` in total degrees `lo ..= hi`.
    pub fn total(&self, lo: i64, hi: i64) -> Result<CochainComplex> {
        self.double_complex().total_window(lo, hi)
    }
}

/// One row of [`resolution_homology_check`].
#[derive(Clone, Debug)]
pub struct HomologyRow {
    pub degree: i64,
    pub total: FgAbGroup,
    pub expected: FgAbGroup,
    /// `None` for rows that are only reported
    pub matches: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct HomologyReport {
    pub rows: Vec<HomologyRow>,
}

impl HomologyReport {
    /// Whether every asserted row matches.
    pub fn ok(&self) -> bool {
        self.rows.iter().all(|r| r.matches != Some(false))
    }
}

impl fmt::Display for HomologyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            let tag = match r.matches {
                Some(true) => "ok",
                Some(false) => "MISMATCH",
                None => "reported",
            };
            writeln!(
                f,
                "H^{}(Tot) = {}, H^{}(P) = {} [{tag}]",
                r.degree, r.total, r.degree, r.expected
            )?;
        }
        Ok(())
    }
}

/// Compares `Hⁱ(Tot 𝕃.(P))` with `Hⁱ(P)` for `i = 0, −1, −2`; `i = −3` is reported only.
pub fn resolution_homology_check(p: &CochainComplex) -> Result<HomologyReport> {
    let chain = build_resolution(p)?;
    homology_report(&chain)
}

pub fn homology_report(chain: &ResolutionChain) -> Result<HomologyReport> {
    let tot = chain.total(-4, 1)?;
    let rows = (-3..=0)
        .rev()
        .map(|i| {
            let total = tot.cohomology_at(i);
            let expected = chain.p.complex.cohomology_at(i);
            let matches = (i >= -2).then(|| total.is_isomorphic(&expected));
            HomologyRow {
                degree: i,
                total,
                expected,
                matches,
            }
        })
        .collect();
    Ok(HomologyReport { rows })
}

/// Precomposition `Homⁿ(𝕃ⱼ, G) → Homⁿ(𝕃ⱼ₊₁, G)` with `Dⱼ`.
fn precompose(src: &HomComplex, dst: &HomComplex, f: &ChainMap, n: i64) -> IntMatrix {
    let rows = dst.complex.group(n).n_gens();
    let cols = src.complex.group(n).n_gens();
    let mut m = IntMatrix::zeros(rows, cols);
    for b in src.blocks(n) {
        if b.is_empty() {
            continue;
        }
        if let Some(t) = dst.blocks(n).iter().find(|t| t.p == b.p && t.q == b.q) {
            if t.is_empty() {
                continue;
            }
            let piece = f
                .component(b.p)
                .matrix()
                .transpose()
                .kron(&IntMatrix::identity(b.rows));
            m.add_block(t.offset, b.offset, &piece);
        }
    }
    m
}

/// `Extⁱ(P, G)` for `i = 1, 0, −1, −2` from the bicomplex `Homⁿ(𝕃ⱼ(P), G)`
/// with column `j` in degree `j`.
pub fn ext_via_resolution(p: &CochainComplex, g: &CochainComplex) -> Result<[FgAbGroup; 4]> {
    crate::derived::check_length3(g, "G")?;
    let chain = build_resolution(p)?;
    ext_from_chain(&chain, g)
}

pub fn ext_from_chain(chain: &ResolutionChain, g: &CochainComplex) -> Result<[FgAbGroup; 4]> {
    let homs: Vec<HomComplex> = chain
        .terms
        .iter()
        .map(|t| hom_complex(&t.complex, g))
        .collect::<Result<_>>()?;
    let mut dc = DoubleComplex::new();
    for (j, h) in homs.iter().enumerate() {
        let a = j as i64;
        if h.complex.groups().is_empty() {
            continue;
        }
        for n in h.complex.degrees() {
            dc.set_cell(a, n, h.complex.group(n));
            if n < h.complex.hi() {
                dc.set_dv(a, n, h.complex.diff(n).matrix().clone());
            }
            if j + 1 < homs.len() {
                dc.set_dh(a, n, precompose(h, &homs[j + 1], &chain.d[j], n));
            }
        }
    }
    let (lo, hi) = (-2 + EXT_SHIFT, 1 + EXT_SHIFT);
    let tot = dc.total_window(lo - 1, hi + 1)?;
    Ok([
        tot.cohomology_at(1 + EXT_SHIFT),
        tot.cohomology_at(EXT_SHIFT),
        tot.cohomology_at(-1 + EXT_SHIFT),
        tot.cohomology_at(-2 + EXT_SHIFT),
    ])
}

/// Total basis size of `𝕃ⱼ(P)` for `|Pⁿ| = m` in one degree: `Σ mᵏ` over the arities.
pub fn rank_formula(m: usize, j: usize) -> usize {
    ARITIES[j].iter().map(|&k| m.pow(k as u32)).sum()
}

/// Rejects groups too large to resolve within `max_order` elements per degree.
pub fn check_order(p: &CochainComplex, max_order: u64) -> Result<()> {
    for n in p.degrees() {
        let g = p.group(n);
        if let Some(o) = g.order() {
            if o.to_u64().is_none_or(|o| o > max_order) {
                return Err(Error::Precondition(format!(
                    "P in degree {n} has order {o}, above the cap {max_order}"
                )));
            }
        }
    }
    Ok(())
}
