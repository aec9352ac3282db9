//! The acceptance battery: nine exact checks with pinned time budgets.
//!
//! Every check is deterministic for a given seed. A check that errors counts
//! as failed and carries the error in its detail line.

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::abgrp::FgAbGroup;
use crate::barres::{build_resolution, check_order, ext_from_chain, homology_report};
use crate::chain::{ChainMap, CochainComplex};
use crate::derived::{
    classify_extension, ext_group, ext_homotopy_groups, ext_model, pullback_class, pushout_class,
    realize_extension, ExtClass,
};
use crate::error::{Error, Result};
use crate::exactlin::{smith_normal_form, IntMatrix};
use crate::gen::{random_complex, random_finite_complex, ComplexShape};
use crate::oracle;
use crate::site::{tors_classes, tors_groups, PosetSite, SheafComplex};

/// Default cap on `|Pⁿ|` for the resolution battery.
pub const DEFAULT_MAX_ORDER: u64 = 4;

pub const BUDGETS: [Duration; 9] = [
    Duration::from_secs(10),
    Duration::from_secs(10),
    Duration::from_secs(10),
    Duration::from_secs(5),
    Duration::from_secs(60),
    Duration::from_secs(60),
    Duration::from_secs(300),
    Duration::from_secs(60),
    Duration::from_secs(10),
];

pub const NAMES: [&str; 9] = [
    "snf soundness",
    "classical ext oracle",
    "tors on a point",
    "tors on the pseudo-circle",
    "resolution well-formed",
    "partial-resolution exactness",
    "ext via resolution",
    "extension round trip",
    "shift and truncation conventions",
];

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl CriterionResult {
    pub fn within_budget(&self) -> bool {
        self.elapsed <= self.budget
    }

    pub fn ok(&self) -> bool {
        self.passed && self.within_budget()
    }
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.ok() { "PASS" } else { "FAIL" };
        write!(
            f,
            "[{tag}] {}. {} ({:.2}s / {}s): {}",
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.budget.as_secs(),
            self.detail
        )
    }
}

/// Outcome of one check before timing is attached.
struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(failures: &[String], summary: String) -> Outcome {
        if failures.is_empty() {
            Outcome {
                passed: true,
                detail: summary,
            }
        } else {
            let shown: Vec<&str> = failures.iter().take(4).map(String::as_str).collect();
            Outcome {
                passed: false,
                detail: format!("{} failure(s): {}", failures.len(), shown.join("; ")),
            }
        }
    }
}

fn timed(id: usize, f: impl FnOnce() -> Result<Outcome>) -> CriterionResult {
    let start = Instant::now();
    let out = f().unwrap_or_else(|e| Outcome {
        passed: false,
        detail: format!("error: {e}"),
    });
    CriterionResult {
        id,
        name: NAMES[id - 1],
        passed: out.passed,
        detail: out.detail,
        elapsed: start.elapsed(),
        budget: BUDGETS[id - 1],
    }
}

/// Runs criterion `id` (1-based).
pub fn run_one(id: usize, seed: u64, max_order: u64) -> Result<CriterionResult> {
    let r = match id {
        1 => timed(1, || snf_soundness(seed)),
        2 => timed(2, classical_ext),
        3 => timed(3, || tors_point(seed)),
        4 => timed(4, tors_circle),
        5 => timed(5, || resolution_well_formed(max_order)),
        6 => timed(6, || resolution_exactness(max_order)),
        7 => timed(7, || ext_resolution_agreement(max_order)),
        8 => timed(8, || extension_round_trip(seed)),
        9 => timed(9, || conventions(seed)),
        _ => return Err(Error::Invalid(format!("no criterion {id}, expected 1..=9"))),
    };
    Ok(r)
}

pub fn run_all(seed: u64, max_order: u64) -> Vec<CriterionResult> {
    (1..=9)
        .map(|id| run_one(id, seed, max_order).expect("ids in range"))
        .collect()
}

fn big_rows(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    m.to_rows()
}

fn snf_soundness(seed: u64) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for case in 0..500 {
        let (r, c) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
        let rows: Vec<Vec<i64>> = (0..r)
            .map(|_| (0..c).map(|_| rng.gen_range(-9..=9)).collect())
            .collect();
        let a = IntMatrix::from_rows(&rows, c);
        let snf = smith_normal_form(&a);
        let mut bad = Vec::new();
        if snf.u.mul(&a)?.mul(&snf.v)? != snf.s {
            bad.push("UAV != S");
        }
        if !oracle::det_big(&big_rows(&snf.u)).abs().is_one()
            || !oracle::det_big(&big_rows(&snf.v)).abs().is_one()
        {
            bad.push("not unimodular");
        }
        let d = snf.divisors();
        if d.iter().any(|x| !x.is_positive()) || d.windows(2).any(|w| !(&w[1] % &w[0]).is_zero()) {
            bad.push("divisibility chain");
        }
        let off_diagonal = (0..r).any(|i| (0..c).any(|j| i != j && !snf.s[(i, j)].is_zero()));
        let trailing = (d.len()..r.min(c)).any(|i| !snf.s[(i, i)].is_zero());
        if off_diagonal || trailing {
            bad.push("S not diagonal");
        }
        let minors: Vec<BigInt> = oracle::invariants_from_minors(&rows)
            .into_iter()
            .map(|x| BigInt::from(x.abs()))
            .collect();
        if minors != d {
            bad.push("minor gcds disagree");
        }
        if !bad.is_empty() {
            failures.push(format!("case {case} ({r}x{c}): {}", bad.join(", ")));
        }
    }
    Ok(Outcome::new(&failures, "500 matrices".into()))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn classical_ext() -> Result<Outcome> {
    let mut failures = Vec::new();
    for m in 1..=12u64 {
        for n in 1..=12u64 {
            let p = CochainComplex::concentrated(FgAbGroup::cyclic(m), 0);
            let g = CochainComplex::concentrated(FgAbGroup::cyclic(n), 0);
            let want = FgAbGroup::cyclic(gcd(m, n)).canonical_form();
            for i in [1, 0] {
                let got = ext_group(&p, &g, i)?.canonical_form();
                if got != want {
                    failures.push(format!("Ext^{i}(Z/{m}, Z/{n}) = {got}"));
                }
            }
        }
    }
    Ok(Outcome::new(&failures, "144 pairs at i = 1, 0".into()))
}

fn tors_point(seed: u64) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7075);
    let mut failures = Vec::new();
    for case in 0..24 {
        let k = random_complex(&mut rng, &ComplexShape::length3());
        let t = tors_groups(&SheafComplex::on_point(&k))?;
        let want = [
            FgAbGroup::trivial(),
            k.cohomology_at(0),
            k.cohomology_at(-1),
            k.cohomology_at(-2),
        ];
        for (idx, (a, b)) in t.iter().zip(&want).enumerate() {
            if !a.is_isomorphic(b) {
                failures.push(format!("case {case}: Tors^{} = {a}, expected {b}", 1 - idx as i64));
            }
        }
    }
    Ok(Outcome::new(&failures, "24 random complexes".into()))
}

fn tors_circle() -> Result<Outcome> {
    let site = PosetSite::pseudo_circle();
    let mut failures = Vec::new();
    for (name, m) in [("Z", 0u64), ("Z/2", 2), ("Z/6", 6)] {
        let g = FgAbGroup::cyclic(m);
        let k = SheafComplex::constant(&site, &CochainComplex::concentrated(g.clone(), 0));
        let t = tors_groups(&k)?;
        if !t[0].is_isomorphic(&g) {
            failures.push(format!("Tors^1({name}) = {}", t[0]));
        }
        let classes = tors_classes(&k)?;
        for c in classes.generators() {
            if !c.add(&c.neg())?.is_trivial() {
                failures.push(format!("c + (-c) != 0 for {name}"));
            }
            if m == 2 && !c.add(&c)?.is_trivial() {
                failures.push("2c != 0 for Z/2".into());
            }
            if m == 2 && c.is_trivial() {
                failures.push("Z/2 generator is trivial".into());
            }
        }
    }
    Ok(Outcome::new(&failures, "Tors^1 = Z, Z/2, Z/6".into()))
}

fn zn(n: u64) -> FgAbGroup {
    FgAbGroup::cyclic(n)
}

fn m1(c: i64) -> IntMatrix {
    IntMatrix::from_rows(&[[c]], 1)
}

/// The resolution battery, each member with a label; members with a degree
/// above `max_order` elements are left out.
pub fn resolution_battery(max_order: u64) -> Vec<(String, CochainComplex)> {
    let mut out = Vec::new();
    for n in [0, -1, -2] {
        out.push((format!("Z/2 @ {n}"), CochainComplex::concentrated(zn(2), n)));
        out.push((format!("Z/3 @ {n}"), CochainComplex::concentrated(zn(3), n)));
        out.push((
            format!("Z/2+Z/2 @ {n}"),
            CochainComplex::concentrated(zn(2).direct_sum(&zn(2)), n),
        ));
    }
    let three = CochainComplex::from_matrices(-2, vec![zn(2), zn(4), zn(2)], vec![m1(2), m1(1)])
        .expect("2 then 1 is a complex");
    out.push(("[Z/2 -2-> Z/4 -1-> Z/2]".into(), three));
    out.into_iter()
        .filter(|(_, p)| check_order(p, max_order).is_ok())
        .collect()
}

/// The targets `G` for the right-resolution comparison.
pub fn ext_targets() -> Vec<(String, CochainComplex)> {
    let two = CochainComplex::from_matrices(-2, vec![zn(2), zn(2), FgAbGroup::trivial()], vec![m1(1), IntMatrix::zeros(0, 1)])
        .expect("two-term complex");
    vec![
        ("Z @ 0".into(), CochainComplex::concentrated(zn(0), 0)),
        ("Z/2 @ 0".into(), CochainComplex::concentrated(zn(2), 0)),
        ("Z/4 @ -1".into(), CochainComplex::concentrated(zn(4), -1)),
        ("[Z/2 -1-> Z/2 -> 0]".into(), two),
    ]
}

fn resolution_well_formed(max_order: u64) -> Result<Outcome> {
    let battery = resolution_battery(max_order);
    let mut failures = Vec::new();
    for (name, p) in &battery {
        // build_resolution runs the structural checks and reports them as errors
        match build_resolution(p) {
            Ok(c) => {
                if !c.terms.iter().all(|t| t.is_free()) {
                    failures.push(format!("{name}: a term is not free"));
                }
            }
            Err(e) => failures.push(format!("{name}: {e}")),
        }
    }
    Ok(Outcome::new(&failures, format!("{} complexes", battery.len())))
}

fn resolution_exactness(max_order: u64) -> Result<Outcome> {
    let battery = resolution_battery(max_order);
    let mut failures = Vec::new();
    for (name, p) in &battery {
        let report = homology_report(&build_resolution(p)?)?;
        for r in &report.rows {
            if r.matches == Some(false) {
                failures.push(format!(
                    "{name}: H^{}(Tot) = {}, H^{}(P) = {}",
                    r.degree, r.total, r.degree, r.expected
                ));
            }
        }
    }
    Ok(Outcome::new(&failures, format!("{} complexes, i = 0, -1, -2", battery.len())))
}

fn ext_resolution_agreement(max_order: u64) -> Result<Outcome> {
    let battery = resolution_battery(max_order);
    let targets = ext_targets();
    let mut failures = Vec::new();
    for (pname, p) in &battery {
        let chain = build_resolution(p)?;
        for (gname, g) in &targets {
            let via = ext_from_chain(&chain, g)?;
            let direct = ext_homotopy_groups(p, g)?;
            for (k, (a, b)) in via.iter().zip(&direct).enumerate() {
                if !a.is_isomorphic(b) {
                    failures.push(format!(
                        "P = {pname}, G = {gname}, i = {}: {a} vs {b}",
                        1 - k as i64
                    ));
                }
            }
        }
    }
    Ok(Outcome::new(
        &failures,
        format!("{} pairs, i = 1, 0, -1, -2", battery.len() * targets.len()),
    ))
}

/// Inclusion `P → P ⊕ Q` or projection `P ⊕ Q → P` on degrees `−2 ..= 0`.
fn block_maps(p: &CochainComplex, q: &CochainComplex, inclusion: bool) -> Result<BTreeMap<i64, IntMatrix>> {
    (-2..=0)
        .map(|n| {
            let (a, b) = (p.group(n).n_gens(), q.group(n).n_gens());
            let m = if inclusion {
                IntMatrix::identity(a).vstack(&IntMatrix::zeros(b, a))?
            } else {
                IntMatrix::identity(a).hstack(&IntMatrix::zeros(a, b))?
            };
            Ok((n, m))
        })
        .collect()
}

fn pad(k: CochainComplex) -> CochainComplex {
    k.with_range(-2, 0).expect("length-3 complex")
}

/// One round-trip case. `iff` asks for the converse `split ⇒ ξ = 0` as well,
/// which is only claimed for cyclic groups in one common degree.
fn round_trip_case(
    xi: &ExtClass,
    p: &CochainComplex,
    g: &CochainComplex,
    other: &CochainComplex,
    c: i64,
    iff: bool,
) -> Result<Vec<String>> {
    let mut bad = Vec::new();
    let e = realize_extension(xi)?;
    if &classify_extension(&e)? != xi {
        bad.push("classify(realize(xi)) != xi".to_string());
    }
    let split = e.splits_in_cohomology();
    if xi.is_zero() && !split {
        bad.push("xi = 0 but E does not split".into());
    }
    if iff && !xi.is_zero() && split {
        bad.push("xi != 0 but E splits".into());
    }
    let scale = ChainMap::identity(p).scale(c);
    if pullback_class(&scale, xi)? != xi.scale(c) {
        bad.push(format!("({c})^* xi != {c} xi"));
    }
    if pushout_class(&ChainMap::identity(g).scale(c), xi)? != xi.scale(c) {
        bad.push(format!("({c})_* xi != {c} xi"));
    }
    let twice = pullback_class(&scale, &pullback_class(&scale, xi)?)?;
    if twice != pullback_class(&scale.compose(&scale)?, xi)? {
        bad.push("pullback is not functorial".into());
    }
    let s = p.direct_sum(other);
    let inc = ChainMap::new(p, &s, block_maps(p, other, true)?)?;
    let pr = ChainMap::new(&s, p, block_maps(p, other, false)?)?;
    if &pullback_class(&inc, &pullback_class(&pr, xi)?)? != xi {
        bad.push("inc^* pr^* xi != xi".into());
    }
    Ok(bad)
}

fn extension_round_trip(seed: u64) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6578);
    let orders = [2u64, 3, 4, 6];
    let mut failures = Vec::new();
    let mut zeros = 0;
    for case in 0..50 {
        let cyclic = case % 2 == 0;
        let (p, g) = if cyclic {
            let d = rng.gen_range(-2..=0);
            let m = orders[rng.gen_range(0..orders.len())];
            let n = orders[rng.gen_range(0..orders.len())];
            (
                pad(CochainComplex::concentrated(zn(m), d)),
                pad(CochainComplex::concentrated(zn(n), d)),
            )
        } else {
            let p = random_finite_complex(&mut rng, -2, 0, 2);
            let g = random_complex(
                &mut rng,
                &ComplexShape {
                    blocks: 2,
                    ..ComplexShape::length3()
                },
            );
            (p, g)
        };
        let other = random_finite_complex(&mut rng, -2, 0, 1);
        let model = ext_model(&p, &g, 1)?;
        let xi = if case % 5 == 0 {
            model.zero()
        } else {
            model.random(&mut rng)
        };
        if xi.is_zero() {
            zeros += 1;
        }
        let c = rng.gen_range(-2..=2);
        for b in round_trip_case(&xi, &p, &g, &other, c, cyclic)? {
            failures.push(format!("case {case}: {b}"));
        }
    }
    Ok(Outcome::new(&failures, format!("50 classes, {zeros} zero")))
}

fn conventions(seed: u64) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x636f);
    let mut failures = Vec::new();
    for case in 0..12 {
        let k = random_complex(&mut rng, &ComplexShape::length3());
        for i in -3..=3i64 {
            let s = k.shift(i);
            let sign = BigInt::from(if i.rem_euclid(2) == 0 { 1 } else { -1 });
            for n in s.degrees() {
                if s.group(n) != k.group(n + i) {
                    failures.push(format!("case {case}: K[{i}]^{n} != K^{}", n + i));
                }
                if n < s.hi() && *s.diff(n).matrix() != k.diff(n + i).matrix().scale(&sign) {
                    failures.push(format!("case {case}: d of K[{i}] in degree {n} has the wrong sign"));
                }
            }
            for n in -6..=4 {
                if !s.cohomology_at(n).is_isomorphic(&k.cohomology_at(n + i)) {
                    failures.push(format!("case {case}: H^{n}(K[{i}]) != H^{}(K)", n + i));
                }
            }
        }
        for n in -3..=1i64 {
            let sigma = k.bad_truncate(n);
            for m in -3..=1 {
                let want = if m <= n { k.group(m) } else { FgAbGroup::trivial() };
                if !sigma.group(m).is_isomorphic(&want) || (m <= n && sigma.group(m) != k.group(m)) {
                    failures.push(format!("case {case}: (sigma<={n} K)^{m} is wrong"));
                }
                if m < n && m >= k.lo() && m < k.hi() && sigma.diff(m) != k.diff(m) {
                    failures.push(format!("case {case}: sigma<={n} changed d^{m}"));
                }
            }
            let (tau, inc) = k.good_truncate_with_inclusion(n);
            for m in -3..=1 {
                if m < n && tau.group(m) != k.group(m) {
                    failures.push(format!("case {case}: (tau<={n} K)^{m} != K^{m}"));
                }
                if m > n && tau.group(m).n_gens() > 0 {
                    failures.push(format!("case {case}: tau<={n} K nonzero in degree {m}"));
                }
                if m <= n && !inc.induced(m)?.is_isomorphism()? {
                    failures.push(format!("case {case}: tau<={n} K -> K not iso on H^{m}"));
                }
            }
            // degree n is exactly ker dⁿ: the inclusion is injective and lands in it
            if (k.lo()..=k.hi()).contains(&n) {
                let i_n = inc.component(n);
                if !i_n.is_injective()? || !k.diff(n).compose(&i_n)?.is_zero() {
                    failures.push(format!("case {case}: (tau<={n} K)^{n} is not ker d^{n}"));
                }
            }
        }
    }
    Ok(Outcome::new(&failures, "12 complexes, shifts -3..=3".into()))
}
