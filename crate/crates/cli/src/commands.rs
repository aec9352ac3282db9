//! One function per subcommand. Each returns human-readable text, a report
//! document and whether a verification check failed.

use num_bigint::BigInt;
use picard_core::abgrp::FgAbGroup;
use picard_core::barres::{build_resolution, check_order, ext_from_chain, homology_report, LO, HI};
use picard_core::chain::CochainComplex;
use picard_core::derived::{
    classify_extension, ext_group, ext_homotopy_groups, ext_model, homotopy_groups, realize_extension,
};
use picard_core::exactlin::{smith_normal_form, IntMatrix};
use picard_core::site::{tors_groups, SheafComplex};
use picard_core::verify::run_all;
use serde_json::{json, Value};

use crate::doc::{self, int_value, rows_value, ClassDoc, Document};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Doc(#[from] doc::DocError),
    #[error(transparent)]
    Core(#[from] picard_core::Error),
}

pub type CliResult<T> = Result<T, CliError>;

pub struct Output {
    pub text: String,
    pub report: Value,
    /// a verification check failed
    pub mismatch: bool,
}

impl Output {
    fn ok(text: String, report: Value) -> Output {
        Output {
            text,
            report,
            mismatch: false,
        }
    }
}

fn report(command: &str, mut body: Value) -> Value {
    let m = body.as_object_mut().expect("report bodies are objects");
    m.insert("kind".into(), "report".into());
    m.insert("command".into(), command.into());
    body
}

fn group_str(g: &FgAbGroup) -> String {
    g.to_string()
}

pub fn as_matrix(d: Document) -> CliResult<IntMatrix> {
    match d {
        Document::Matrix(m) => Ok(m),
        other => Err(wrong("matrix", &other)),
    }
}

/// A complex, or a group read as a complex in degree 0.
pub fn as_complex(d: Document) -> CliResult<CochainComplex> {
    match d {
        Document::Complex(k) => Ok(k),
        Document::Group(g) => Ok(CochainComplex::concentrated(g, 0)),
        other => Err(wrong("complex", &other)),
    }
}

fn wrong(want: &str, got: &Document) -> CliError {
    CliError::Input(format!("expected a {want} document, got {}", got.kind()))
}

pub fn snf(a: &IntMatrix) -> Output {
    let s = smith_normal_form(a);
    let d = s.divisors();
    let text = format!(
        "invariant factors: [{}]\nrank: {}\n",
        d.iter().map(BigInt::to_string).collect::<Vec<_>>().join(", "),
        s.rank()
    );
    let r = report(
        "snf",
        json!({
            "divisors": d.iter().map(int_value).collect::<Vec<_>>(),
            "rank": s.rank(),
            "u": rows_value(&s.u),
            "s": rows_value(&s.s),
            "v": rows_value(&s.v),
        }),
    );
    Output::ok(text, r)
}

pub fn cohomology(k: &CochainComplex, degree: Option<i64>) -> Output {
    let degrees: Vec<i64> = match degree {
        Some(i) => vec![i],
        None => k.degrees().collect(),
    };
    let rows: Vec<(i64, String)> = degrees
        .iter()
        .map(|&i| (i, group_str(&k.cohomology_at(i))))
        .collect();
    let text = rows.iter().map(|(i, g)| format!("H^{i}: {g}\n")).collect();
    let r = report(
        "cohomology",
        json!({ "cohomology": rows.iter().map(|(i, g)| json!({"degree": i, "group": g})).collect::<Vec<_>>() }),
    );
    Output::ok(text, r)
}

fn degree_line(rows: &[(i64, String)]) -> String {
    let parts: Vec<String> = rows.iter().map(|(i, g)| format!("i={i}: {g}")).collect();
    format!("{}\n", parts.join(", "))
}

fn degree_rows(rows: &[(i64, String)]) -> Value {
    Value::Array(
        rows.iter()
            .map(|(i, g)| json!({"degree": i, "group": g}))
            .collect(),
    )
}

pub fn ext(p: &CochainComplex, g: &CochainComplex, degree: Option<i64>) -> CliResult<Output> {
    let rows: Vec<(i64, String)> = match degree {
        Some(i) => vec![(i, group_str(&ext_group(p, g, i)?))],
        None => {
            let e = ext_homotopy_groups(p, g)?;
            [1, 0, -1, -2].into_iter().zip(e.iter().map(group_str)).collect()
        }
    };
    Ok(Output::ok(
        degree_line(&rows),
        report("ext", json!({ "ext": degree_rows(&rows) })),
    ))
}

pub fn pi(p: &CochainComplex) -> CliResult<Output> {
    let h = homotopy_groups(p)?;
    let text = format!("pi0: {}, pi1: {}, pi2: {}\n", h[0], h[1], h[2]);
    let r = report(
        "pi",
        json!({ "pi0": group_str(&h[0]), "pi1": group_str(&h[1]), "pi2": group_str(&h[2]) }),
    );
    Ok(Output::ok(text, r))
}

pub fn tors(k: &SheafComplex) -> CliResult<Output> {
    let t = tors_groups(k)?;
    let rows: Vec<(i64, String)> = [1, 0, -1, -2].into_iter().zip(t.iter().map(group_str)).collect();
    Ok(Output::ok(
        degree_line(&rows),
        report("tors", json!({ "tors": degree_rows(&rows) })),
    ))
}

pub fn resolve(p: &CochainComplex, against: Option<&CochainComplex>, max_order: u64) -> CliResult<Output> {
    check_order(p, max_order)?;
    let chain = build_resolution(p)?;
    let mut text = String::from("ranks of L_0 .. L_4\n");
    let mut ranks = Vec::new();
    for n in LO..=HI {
        let r = chain.ranks(n);
        text += &format!(
            "  degree {n}: {}\n",
            r.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
        );
        ranks.push(json!({ "degree": n, "ranks": r }));
    }
    let dumps: Vec<Value> = chain
        .d
        .iter()
        .enumerate()
        .map(|(j, f)| {
            let comps: Vec<Value> = f
                .components()
                .iter()
                .map(|(n, m)| json!({ "degree": n, "matrix": rows_value(m) }))
                .collect();
            json!({ "j": j, "components": comps })
        })
        .collect();
    let h = homology_report(&chain)?;
    text += "homology of Tot\n";
    for line in h.to_string().lines() {
        text += &format!("  {line}\n");
    }
    let mut mismatch = !h.ok();
    let homology: Vec<Value> = h
        .rows
        .iter()
        .map(|r| {
            json!({
                "degree": r.degree,
                "total": group_str(&r.total),
                "expected": group_str(&r.expected),
                "matches": r.matches,
            })
        })
        .collect();
    let mut body = json!({ "ranks": ranks, "d": dumps, "homology": homology, "ok": h.ok() });
    if let Some(g) = against {
        let via = ext_from_chain(&chain, g)?;
        let direct = ext_homotopy_groups(p, g)?;
        text += "Ext via resolution vs derived Hom\n";
        let mut rows = Vec::new();
        for (k, i) in [1i64, 0, -1, -2].into_iter().enumerate() {
            let same = via[k].is_isomorphic(&direct[k]);
            mismatch |= !same;
            let tag = if same { "ok" } else { "MISMATCH" };
            text += &format!("  i={i}: {} vs {} [{tag}]\n", via[k], direct[k]);
            rows.push(json!({
                "degree": i,
                "resolution": group_str(&via[k]),
                "direct": group_str(&direct[k]),
                "matches": same,
            }));
        }
        body["against"] = Value::Array(rows);
    }
    body["ok"] = Value::Bool(!mismatch);
    Ok(Output {
        text,
        report: report("resolve", body),
        mismatch,
    })
}

pub fn realize(p: &CochainComplex, g: &CochainComplex, c: &ClassDoc) -> CliResult<Output> {
    if c.degree != 1 {
        return Err(CliError::Input(format!(
            "extensions are classified by Ext^1, got a class of degree {}",
            c.degree
        )));
    }
    let model = ext_model(p, g, 1)?;
    let xi = model.class_from_coords(&c.coords)?;
    let e = realize_extension(&xi)?;
    let d = Document::Extension(e);
    Ok(Output::ok(doc::emit(&d), doc::emit_value(&d)))
}

pub fn classify(e: &picard_core::derived::Extension) -> CliResult<Output> {
    let xi = classify_extension(e)?;
    let d = Document::Class(ClassDoc {
        degree: 1,
        coords: xi.coords().to_vec(),
    });
    Ok(Output::ok(doc::emit(&d), doc::emit_value(&d)))
}

pub fn verify_all(seed: u64, max_order: u64) -> Output {
    let results = run_all(seed, max_order);
    let text = results.iter().map(|r| format!("{r}\n")).collect();
    let rows: Vec<Value> = results
        .iter()
        .map(|r| {
            json!({
                "id": r.id,
                "name": r.name,
                "passed": r.ok(),
                "detail": r.detail,
                "budget_secs": r.budget.as_secs(),
            })
        })
        .collect();
    let mismatch = results.iter().any(|r| !r.ok());
    Output {
        text,
        report: report("verify-all", json!({ "seed": seed, "max_order": max_order, "criteria": rows })),
        mismatch,
    }
}
