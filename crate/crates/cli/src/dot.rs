//! Graphviz export.

use std::fmt::Write;

use contact_loci_core::numerics::DivisorData;
use contact_loci_core::PlumbingGraph;

use crate::render::rational;

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

/// Undirected DOT text with nodes sorted by id. Vertices are labeled with
/// their self-intersection and genus, plus `N` and `k` when `annotations`
/// has them; arrows become point-shaped nodes joined by an arrowhead edge.
pub fn export_dot(g: &PlumbingGraph, annotations: Option<&DivisorData>) -> String {
    let mult = |id: &str| annotations.and_then(|dd| dd.multiplicities.get(id).copied());
    let disc = |id: &str| annotations.and_then(|dd| dd.discrepancies.as_ref()).and_then(|k| k.get(id)).map(rational);

    let mut nodes: Vec<(&str, String)> = Vec::new();
    for v in g.vertices() {
        let mut label = format!("{}\\ne={} g={}", v.id, v.self_intersection, v.genus);
        if let Some(n) = mult(v.id.as_str()) {
            write!(label, "\\nN={n}").unwrap();
        }
        if let Some(k) = disc(v.id.as_str()) {
            write!(label, "\\nk={k}").unwrap();
        }
        nodes.push((v.id.as_str(), format!("[shape=ellipse, label={}]", quote(&label))));
    }
    for a in g.arrows() {
        let mut label = a.id.to_string();
        if let Some(n) = mult(a.id.as_str()) {
            write!(label, " N={n}").unwrap();
        }
        nodes.push((a.id.as_str(), format!("[shape=point, xlabel={}]", quote(&label))));
    }
    nodes.sort();

    let mut edges: Vec<String> = g
        .edges()
        .iter()
        .map(|(a, b)| {
            let (a, b) = if a <= b { (a, b) } else { (b, a) };
            format!("{} -- {};", quote(a.as_str()), quote(b.as_str()))
        })
        .collect();
    for a in g.arrows() {
        edges.push(format!("{} -- {} [dir=forward, arrowhead=normal];", quote(a.attached_to.as_str()), quote(a.id.as_str())));
    }
    edges.sort();

    let mut out = String::from("graph {\n");
    for (id, attrs) in nodes {
        writeln!(out, "  {} {};", quote(id), attrs).unwrap();
    }
    for e in edges {
        writeln!(out, "  {e}").unwrap();
    }
    out.push_str("}\n");
    out
}
