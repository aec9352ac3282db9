//! The document format: one JSON object per value, tagged by `kind`.
//!
//! Emission is canonical. Keys come out sorted, bases keep their stored
//! order and integers are written in full decimal.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigInt;
use picard_core::abgrp::FgAbGroup;
use picard_core::chain::{ChainMap, CochainComplex};
use picard_core::derived::Extension;
use picard_core::exactlin::IntMatrix;
use picard_core::site::{PosetSheaf, PosetSite, SheafComplex};
use serde_json::{json, Map, Number, Value};

#[derive(Debug, thiserror::Error)]
pub enum DocError {
    #[error("line {line}, column {column}: {msg}")]
    Syntax { line: usize, column: usize, msg: String },
    #[error("{path}: {msg}")]
    Field { path: String, msg: String },
}

pub type DocResult<T> = Result<T, DocError>;

fn err<T>(path: &str, msg: impl Into<String>) -> DocResult<T> {
    Err(DocError::Field {
        path: path.to_string(),
        msg: msg.into(),
    })
}

fn core<T>(path: &str, r: picard_core::Result<T>) -> DocResult<T> {
    r.or_else(|e| err(path, e.to_string()))
}

/// An element of `Extⁱ(P, G)` by its coordinates in the canonical generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassDoc {
    pub degree: i64,
    pub coords: Vec<BigInt>,
}

#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug)]
pub enum Document {
    Matrix(IntMatrix),
    Group(FgAbGroup),
    Complex(CochainComplex),
    Site(Arc<PosetSite>),
    SheafComplex(SheafComplex),
    Extension(Extension),
    Class(ClassDoc),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Matrix(_) => "matrix",
            Document::Group(_) => "group",
            Document::Complex(_) => "complex",
            Document::Site(_) => "site",
            Document::SheafComplex(_) => "sheaf-complex",
            Document::Extension(_) => "extension",
            Document::Class(_) => "class",
        }
    }
}

pub fn parse(text: &str) -> DocResult<Document> {
    let v: Value = serde_json::from_str(text).map_err(|e| DocError::Syntax {
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })?;
    parse_value(&v)
}

pub fn parse_value(v: &Value) -> DocResult<Document> {
    let m = obj(v, "$")?;
    let kind = string(field(m, "kind", "$")?, "$.kind")?;
    let path = "$";
    Ok(match kind {
        "matrix" => Document::Matrix(matrix_doc(m, path)?),
        "group" => Document::Group(group(m, path)?),
        "complex" => Document::Complex(complex(m, path)?),
        "site" => Document::Site(site(m, path)?),
        "sheaf-complex" => Document::SheafComplex(sheaf_complex(m, path)?),
        "extension" => Document::Extension(extension(m, path)?),
        "class" => Document::Class(class(m, path)?),
        other => return err("$.kind", format!("unknown kind {other:?}")),
    })
}

/// Parses and checks the kind in one step.
pub fn parse_as(text: &str, kind: &str) -> DocResult<Document> {
    let d = parse(text)?;
    if d.kind() != kind {
        return err("$.kind", format!("expected a {kind} document, got {}", d.kind()));
    }
    Ok(d)
}

pub fn emit(d: &Document) -> String {
    to_text(&emit_value(d))
}

/// Canonical text: two-space indentation, sorted keys, and arrays of
/// scalars (matrix rows, coordinate vectors) on one line.
pub fn to_text(v: &Value) -> String {
    let mut s = String::new();
    write_value(&mut s, v, 0);
    s.push('\n');
    s
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(a) => a.iter().all(|x| !x.is_array() && !x.is_object()),
        Value::Object(_) => false,
        _ => true,
    }
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Object(m) if !m.is_empty() => {
            out.push_str("{\n");
            for (i, (k, x)) in m.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::from(k.as_str()).to_string());
                out.push_str(": ");
                write_value(out, x, indent + 1);
                if i + 1 < m.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        Value::Array(a) if !is_flat(v) => {
            out.push_str("[\n");
            for (i, x) in a.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(out, x, indent + 1);
                if i + 1 < a.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Array(a) => {
            let parts: Vec<String> = a.iter().map(Value::to_string).collect();
            out.push('[');
            out.push_str(&parts.join(", "));
            out.push(']');
        }
        _ => out.push_str(&v.to_string()),
    }
}

pub fn emit_value(d: &Document) -> Value {
    let mut v = match d {
        Document::Matrix(a) => json!({
            "rows": a.rows(),
            "cols": a.cols(),
            "entries": rows_value(a),
        }),
        Document::Group(g) => group_value(g),
        Document::Complex(k) => complex_value(k),
        Document::Site(s) => site_value(s),
        Document::SheafComplex(k) => sheaf_complex_value(k),
        Document::Extension(e) => extension_value(e),
        Document::Class(c) => json!({
            "degree": c.degree,
            "coords": c.coords.iter().map(int_value).collect::<Vec<_>>(),
        }),
    };
    v.as_object_mut()
        .expect("payloads are objects")
        .insert("kind".into(), Value::from(d.kind()));
    v
}

// ---- reading ----

fn obj<'a>(v: &'a Value, path: &str) -> DocResult<&'a Map<String, Value>> {
    v.as_object().map_or_else(|| err(path, "expected an object"), Ok)
}

fn arr<'a>(v: &'a Value, path: &str) -> DocResult<&'a Vec<Value>> {
    v.as_array().map_or_else(|| err(path, "expected an array"), Ok)
}

fn string<'a>(v: &'a Value, path: &str) -> DocResult<&'a str> {
    v.as_str().map_or_else(|| err(path, "expected a string"), Ok)
}

fn field<'a>(m: &'a Map<String, Value>, key: &str, path: &str) -> DocResult<&'a Value> {
    m.get(key)
        .map_or_else(|| err(path, format!("missing field {key:?}")), Ok)
}

fn sub(path: &str, key: &str) -> String {
    format!("{path}.{key}")
}

fn idx(path: &str, i: usize) -> String {
    format!("{path}[{i}]")
}

fn int(v: &Value, path: &str) -> DocResult<BigInt> {
    let Some(n) = v.as_number() else {
        return err(path, "expected an integer");
    };
    n.to_string()
        .parse::<BigInt>()
        .or_else(|_| err(path, format!("{n} is not an integer")))
}

fn small(v: &Value, path: &str) -> DocResult<i64> {
    let b = int(v, path)?;
    i64::try_from(&b).or_else(|_| err(path, format!("{b} is out of range")))
}

fn count(v: &Value, path: &str) -> DocResult<usize> {
    let b = int(v, path)?;
    usize::try_from(&b).or_else(|_| err(path, format!("{b} is not a count")))
}

fn int_list(v: &Value, path: &str) -> DocResult<Vec<BigInt>> {
    arr(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| int(x, &idx(path, i)))
        .collect()
}

/// A matrix as an array of rows, with the column count fixed by the caller
/// and the row count fixed when `rows` is given.
fn matrix(v: &Value, path: &str, rows: Option<usize>, cols: usize) -> DocResult<IntMatrix> {
    let rs = arr(v, path)?;
    if let Some(r) = rows {
        if rs.len() != r {
            return err(path, format!("expected {r} rows, got {}", rs.len()));
        }
    }
    let mut out = Vec::with_capacity(rs.len());
    for (i, row) in rs.iter().enumerate() {
        let p = idx(path, i);
        let row = int_list(row, &p)?;
        if row.len() != cols {
            return err(&p, format!("expected {cols} entries, got {}", row.len()));
        }
        out.push(row);
    }
    core(path, IntMatrix::from_big_rows(&out, cols))
}

fn matrix_doc(m: &Map<String, Value>, path: &str) -> DocResult<IntMatrix> {
    let rows = count(field(m, "rows", path)?, &sub(path, "rows"))?;
    let cols = count(field(m, "cols", path)?, &sub(path, "cols"))?;
    matrix(field(m, "entries", path)?, &sub(path, "entries"), Some(rows), cols)
}

fn group(m: &Map<String, Value>, path: &str) -> DocResult<FgAbGroup> {
    let n = count(field(m, "n_gens", path)?, &sub(path, "n_gens"))?;
    let rel = matrix(field(m, "relations", path)?, &sub(path, "relations"), None, n)?;
    core(path, FgAbGroup::new(n, rel))
}

fn group_at(v: &Value, path: &str) -> DocResult<FgAbGroup> {
    group(obj(v, path)?, path)
}

fn complex(m: &Map<String, Value>, path: &str) -> DocResult<CochainComplex> {
    let lo = small(field(m, "lo", path)?, &sub(path, "lo"))?;
    let gp = sub(path, "groups");
    let groups: Vec<FgAbGroup> = arr(field(m, "groups", path)?, &gp)?
        .iter()
        .enumerate()
        .map(|(i, g)| group_at(g, &idx(&gp, i)))
        .collect::<DocResult<_>>()?;
    let dp = sub(path, "differentials");
    let ds = arr(field(m, "differentials", path)?, &dp)?;
    if ds.len() != groups.len().saturating_sub(1) {
        return err(
            &dp,
            format!("expected {} differentials, got {}", groups.len().saturating_sub(1), ds.len()),
        );
    }
    let mats = ds
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let (s, t) = (groups[i].n_gens(), groups[i + 1].n_gens());
            matrix(d, &idx(&dp, i), Some(t), s)
        })
        .collect::<DocResult<_>>()?;
    core(&dp, CochainComplex::from_matrices(lo, groups, mats))
}

fn complex_at(v: &Value, path: &str) -> DocResult<CochainComplex> {
    complex(obj(v, path)?, path)
}

fn site(m: &Map<String, Value>, path: &str) -> DocResult<Arc<PosetSite>> {
    let ep = sub(path, "elements");
    let elements: Vec<&str> = arr(field(m, "elements", path)?, &ep)?
        .iter()
        .enumerate()
        .map(|(i, e)| string(e, &idx(&ep, i)))
        .collect::<DocResult<_>>()?;
    let cp = sub(path, "covers");
    let mut pairs = Vec::new();
    for (i, c) in arr(field(m, "covers", path)?, &cp)?.iter().enumerate() {
        let p = idx(&cp, i);
        let c = arr(c, &p)?;
        if c.len() != 2 {
            return err(&p, "a cover is a pair [smaller, larger]");
        }
        pairs.push((string(&c[0], &idx(&p, 0))?, string(&c[1], &idx(&p, 1))?));
    }
    core(path, PosetSite::new(&elements, &pairs))
}

fn label_index(site: &PosetSite, label: &str, path: &str) -> DocResult<usize> {
    core(path, site.index_of(label))
}

/// Stalks keyed by element label; every element must appear.
fn stalks(site: &PosetSite, v: &Value, path: &str) -> DocResult<Vec<FgAbGroup>> {
    let m = obj(v, path)?;
    let mut out = vec![None; site.len()];
    for (label, g) in m {
        let i = label_index(site, label, path)?;
        out[i] = Some(group_at(g, &sub(path, label))?);
    }
    out.into_iter()
        .zip(site.labels())
        .map(|(g, l)| g.map_or_else(|| err(path, format!("missing stalk at {l:?}")), Ok))
        .collect()
}

fn sheaf(site: &Arc<PosetSite>, v: &Value, path: &str) -> DocResult<PosetSheaf> {
    let m = obj(v, path)?;
    let st = stalks(site, field(m, "stalks", path)?, &sub(path, "stalks"))?;
    let rp = sub(path, "restrictions");
    let mut maps = BTreeMap::new();
    for (i, r) in arr(field(m, "restrictions", path)?, &rp)?.iter().enumerate() {
        let p = idx(&rp, i);
        let r = obj(r, &p)?;
        let x = label_index(site, string(field(r, "from", &p)?, &sub(&p, "from"))?, &p)?;
        let y = label_index(site, string(field(r, "to", &p)?, &sub(&p, "to"))?, &p)?;
        let mat = matrix(
            field(r, "matrix", &p)?,
            &sub(&p, "matrix"),
            Some(st[y].n_gens()),
            st[x].n_gens(),
        )?;
        if maps.insert((x, y), mat).is_some() {
            return err(&p, "duplicate restriction");
        }
    }
    core(path, PosetSheaf::new(site, st, maps))
}

fn sheaf_complex(m: &Map<String, Value>, path: &str) -> DocResult<SheafComplex> {
    let sp = sub(path, "site");
    let s = site(obj(field(m, "site", path)?, &sp)?, &sp)?;
    let lo = small(field(m, "lo", path)?, &sub(path, "lo"))?;
    let sh_p = sub(path, "sheaves");
    let sheaves: Vec<PosetSheaf> = arr(field(m, "sheaves", path)?, &sh_p)?
        .iter()
        .enumerate()
        .map(|(i, v)| sheaf(&s, v, &idx(&sh_p, i)))
        .collect::<DocResult<_>>()?;
    let dp = sub(path, "differentials");
    let ds = arr(field(m, "differentials", path)?, &dp)?;
    if ds.len() != sheaves.len().saturating_sub(1) {
        return err(
            &dp,
            format!("expected {} differentials, got {}", sheaves.len().saturating_sub(1), ds.len()),
        );
    }
    let mut diffs = Vec::new();
    for (k, d) in ds.iter().enumerate() {
        let p = idx(&dp, k);
        let dm = obj(d, &p)?;
        let mut row = vec![None; s.len()];
        for (label, mat) in dm {
            let x = label_index(&s, label, &p)?;
            let (a, b) = (sheaves[k].stalk(x).n_gens(), sheaves[k + 1].stalk(x).n_gens());
            row[x] = Some(matrix(mat, &sub(&p, label), Some(b), a)?);
        }
        let row: Vec<IntMatrix> = row
            .into_iter()
            .zip(s.labels())
            .map(|(m, l)| m.map_or_else(|| err(&p, format!("missing differential at {l:?}")), Ok))
            .collect::<DocResult<_>>()?;
        diffs.push(row);
    }
    core(path, SheafComplex::new(&s, lo, sheaves, diffs))
}

fn chain_map(
    v: &Value,
    path: &str,
    src: &CochainComplex,
    dst: &CochainComplex,
) -> DocResult<ChainMap> {
    let mut comps = BTreeMap::new();
    for (i, c) in arr(v, path)?.iter().enumerate() {
        let p = idx(path, i);
        let c = obj(c, &p)?;
        let n = small(field(c, "degree", &p)?, &sub(&p, "degree"))?;
        let mat = matrix(
            field(c, "matrix", &p)?,
            &sub(&p, "matrix"),
            Some(dst.group(n).n_gens()),
            src.group(n).n_gens(),
        )?;
        if comps.insert(n, mat).is_some() {
            return err(&p, format!("duplicate component in degree {n}"));
        }
    }
    core(path, ChainMap::new(src, dst, comps))
}

fn extension(m: &Map<String, Value>, path: &str) -> DocResult<Extension> {
    let g = complex_at(field(m, "sub", path)?, &sub(path, "sub"))?;
    let e = complex_at(field(m, "total", path)?, &sub(path, "total"))?;
    let p = complex_at(field(m, "quotient", path)?, &sub(path, "quotient"))?;
    let incl = chain_map(field(m, "inclusion", path)?, &sub(path, "inclusion"), &g, &e)?;
    let proj = chain_map(field(m, "projection", path)?, &sub(path, "projection"), &e, &p)?;
    Ok(Extension {
        complex: e,
        incl,
        proj,
    })
}

fn class(m: &Map<String, Value>, path: &str) -> DocResult<ClassDoc> {
    Ok(ClassDoc {
        degree: small(field(m, "degree", path)?, &sub(path, "degree"))?,
        coords: int_list(field(m, "coords", path)?, &sub(path, "coords"))?,
    })
}

// ---- writing ----

pub fn int_value(b: &BigInt) -> Value {
    Value::Number(b.to_string().parse::<Number>().expect("decimal integer"))
}

pub fn rows_value(a: &IntMatrix) -> Value {
    Value::Array(
        a.to_rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(int_value).collect()))
            .collect(),
    )
}

pub fn group_value(g: &FgAbGroup) -> Value {
    json!({ "n_gens": g.n_gens(), "relations": rows_value(g.relations()) })
}

pub fn complex_value(k: &CochainComplex) -> Value {
    json!({
        "lo": k.lo(),
        "groups": k.groups().iter().map(group_value).collect::<Vec<_>>(),
        "differentials": k.diffs().iter().map(|d| rows_value(d.matrix())).collect::<Vec<_>>(),
    })
}

fn site_value(s: &PosetSite) -> Value {
    let l = s.labels();
    let covers: BTreeSet<(usize, usize)> = s.generators().iter().copied().collect();
    json!({
        "elements": l,
        "covers": covers.iter().map(|&(x, y)| json!([l[x], l[y]])).collect::<Vec<_>>(),
    })
}

fn sheaf_value(f: &PosetSheaf) -> Value {
    let l = f.site().labels();
    let stalks: Map<String, Value> = l
        .iter()
        .zip(f.stalks())
        .map(|(l, g)| (l.clone(), group_value(g)))
        .collect();
    let res: Vec<Value> = f
        .generator_maps()
        .iter()
        .map(|(&(x, y), m)| json!({ "from": l[x], "to": l[y], "matrix": rows_value(m) }))
        .collect();
    json!({ "stalks": stalks, "restrictions": res })
}

fn sheaf_complex_value(k: &SheafComplex) -> Value {
    let s = k.site();
    let l = s.labels();
    let sheaves: Vec<Value> = k
        .degrees()
        .map(|n| sheaf_value(k.sheaf(n).expect("in range")))
        .collect();
    let diffs: Vec<Value> = k
        .degrees()
        .filter(|&n| n < k.hi())
        .map(|n| {
            let m: Map<String, Value> = (0..s.len())
                .map(|x| (l[x].clone(), rows_value(k.diff(n, x).matrix())))
                .collect();
            Value::Object(m)
        })
        .collect();
    json!({
        "site": site_value(s),
        "lo": k.lo(),
        "sheaves": sheaves,
        "differentials": diffs,
    })
}

fn chain_map_value(f: &ChainMap) -> Value {
    Value::Array(
        f.components()
            .iter()
            .map(|(n, m)| json!({ "degree": n, "matrix": rows_value(m) }))
            .collect(),
    )
}

fn extension_value(e: &Extension) -> Value {
    json!({
        "sub": complex_value(e.incl.src()),
        "total": complex_value(&e.complex),
        "quotient": complex_value(e.proj.dst()),
        "inclusion": chain_map_value(&e.incl),
        "projection": chain_map_value(&e.proj),
    })
}
