//! JSON rendering of library results.
//!
//! Objects use sorted keys (serde_json's default map), id lists are sorted
//! where the library does not already fix an order, and rationals are always
//! written `"p/q"`.

use contact_loci_core::classify::{ComponentKind, ContactReport, PosetEntry};
use contact_loci_core::fiber::{EulerCheck, Piece, PieceTopology};
use contact_loci_core::numerics::{AmbientMode, DivisorData};
use contact_loci_core::plumbing::ValidationReport;
use contact_loci_core::refine::{BlowupRecord, RefinementTrace};
use contact_loci_core::{BigRational, DivisorId, Incidence};
use serde_json::{json, Map, Value};

use crate::document::GraphDocument;

pub fn rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn ids(list: &[DivisorId]) -> Value {
    Value::Array(list.iter().map(|id| Value::String(id.to_string())).collect())
}

fn incidence(inc: &Incidence) -> Value {
    let (a, b) = inc.pair();
    json!([a.as_str(), b.as_str()])
}

fn ambient(mode: AmbientMode) -> &'static str {
    match mode {
        AmbientMode::Smooth => "smooth",
        AmbientMode::UserSuppliedDiscrepancies => "user_supplied_discrepancies",
        AmbientMode::MultiplicitiesOnly => "multiplicities_only",
    }
}

pub fn validation(report: &ValidationReport) -> Value {
    json!({
        "valid": report.passed(),
        "violations": report.violations.iter().map(|v| json!({
            "kind": v.kind.as_str(),
            "ids": ids(&v.ids),
            "detail": v.detail,
        })).collect::<Vec<_>>(),
        // arbitrary precision, so written as decimal strings
        "minors": report.minors.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
    })
}

pub fn divisor_data(dd: &DivisorData) -> Value {
    let mut out = Map::new();
    out.insert("ambient".into(), json!(ambient(dd.ambient_mode)));
    out.insert("multiplicities".into(), Value::Object(dd.multiplicities.iter().map(|(k, v)| (k.to_string(), Value::from(*v))).collect()));
    if let Some(k) = &dd.discrepancies {
        out.insert(
            "discrepancies".into(),
            Value::Object(k.iter().map(|(id, v)| (id.to_string(), Value::String(rational(v)))).collect()),
        );
    }
    Value::Object(out)
}

fn blowups(records: &[BlowupRecord]) -> Value {
    Value::Array(
        records
            .iter()
            .map(|r| json!({"incidence": incidence(&r.incidence), "vertex": r.vertex.as_str(), "multiplicity": r.multiplicity}))
            .collect(),
    )
}

pub fn refinement(trace: &RefinementTrace) -> Value {
    let mut doc = GraphDocument::from_graph(&trace.graph);
    doc.annotate(&trace.divisors);
    json!({
        "m": trace.m,
        "trace": blowups(&trace.records),
        "graph": serde_json::to_value(&doc).expect("documents always serialize"),
    })
}

pub fn poset(entries: &[PosetEntry]) -> Value {
    Value::Array(
        entries
            .iter()
            .map(|e| json!({"lower": e.lower.as_str(), "upper": e.upper.as_str(), "status": e.status.as_str()}))
            .collect(),
    )
}

pub fn contact_report(report: &ContactReport, with_codim: bool) -> Value {
    let components: Vec<Value> = report
        .components
        .iter()
        .map(|c| {
            let mut obj = Map::new();
            obj.insert("id".into(), json!(c.id.as_str()));
            match &c.kind {
                ComponentKind::ChainMaximum { leaves } => {
                    obj.insert("case".into(), json!("chain_maximum"));
                    obj.insert("leaves".into(), ids(leaves));
                }
                ComponentKind::ChainFree => {
                    obj.insert("case".into(), json!("chain_free"));
                }
            }
            if with_codim {
                obj.insert("codimension".into(), c.codimension.as_ref().map(rational).into());
            }
            Value::Object(obj)
        })
        .collect();
    let mut out = Map::new();
    out.insert("m".into(), json!(report.m));
    out.insert("blowups".into(), blowups(&report.blowups));
    out.insert(
        "m_divisors".into(),
        Value::Array(
            report
                .m_divisors
                .iter()
                .map(|d| json!({"id": d.id.as_str(), "multiplicity": d.multiplicity, "weight": d.weight}))
                .collect(),
        ),
    );
    out.insert(
        "chains".into(),
        Value::Object(report.chains.iter().map(|(leaf, chain)| (leaf.to_string(), ids(chain))).collect()),
    );
    out.insert("components".into(), Value::Array(components));
    out.insert(
        "absorbed".into(),
        Value::Object(report.absorbed.iter().map(|(d, c)| (d.to_string(), json!(c.as_str()))).collect()),
    );
    out.insert("branch_contacts".into(), ids(&report.branch_contacts));
    out.insert("poset".into(), poset(&report.poset));
    if with_codim {
        out.insert("min_codimension".into(), report.min_codimension.as_ref().map(rational).into());
    }
    Value::Object(out)
}

pub fn piece(p: &PieceTopology) -> Value {
    let kind = match p.piece {
        Piece::Vertex(_) => "vertex",
        Piece::Arrow(_) => "arrow",
        Piece::Intersection(..) => "intersection",
    };
    json!({
        "piece": p.piece.to_string(),
        "kind": kind,
        "components": p.components,
        "exact": p.exact,
        "genus": p.genus,
        "boundary": p.boundary,
        "euler": p.euler,
    })
}

pub fn euler(check: &EulerCheck) -> Value {
    let wide = |x: i128| i64::try_from(x).map(Value::from).unwrap_or_else(|_| x.to_string().into());
    json!({
        "from_pieces": wide(check.from_pieces),
        "from_formula": wide(check.from_formula),
        "equal": check.equal(),
    })
}

pub fn pairs(points: &[(u64, u64)]) -> Value {
    Value::Array(points.iter().map(|&(a, b)| json!([a, b])).collect())
}
