//! Decorated dual graphs of embedded resolutions.
//!
//! Vertices are the exceptional curves over the base point, decorated with
//! self-intersection and genus. Arrows are the branches of the strict
//! transform of the curve, decorated with the coefficient of the branch in
//! the divisor. Edges are intersection points between exceptional curves;
//! repeating an edge records several intersection points.
//!
//! Vertex and arrow identifiers share one namespace, so a [`DivisorId`]
//! names exactly one divisor of the total transform.

use alloc::borrow::ToOwned;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::linalg;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DivisorId(String);

impl DivisorId {
    pub fn new(id: impl Into<String>) -> Self {
        DivisorId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for DivisorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for DivisorId {
    fn from(s: &str) -> Self {
        DivisorId(s.to_owned())
    }
}

impl From<String> for DivisorId {
    fn from(s: String) -> Self {
        DivisorId(s)
    }
}

impl core::borrow::Borrow<str> for DivisorId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

/// An exceptional curve over the base point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExceptionalVertex {
    pub id: DivisorId,
    /// Signed self-intersection `E·E`, at most -1.
    pub self_intersection: i64,
    pub genus: i64,
}

impl ExceptionalVertex {
    pub fn new(id: impl Into<DivisorId>, self_intersection: i64, genus: i64) -> Self {
        ExceptionalVertex { id: id.into(), self_intersection, genus }
    }
}

/// A branch of the strict transform, attached to the exceptional curve it meets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub id: DivisorId,
    pub attached_to: DivisorId,
    pub multiplicity: i64,
}

impl Arrow {
    pub fn new(id: impl Into<DivisorId>, attached_to: impl Into<DivisorId>, multiplicity: i64) -> Self {
        Arrow { id: id.into(), attached_to: attached_to.into(), multiplicity }
    }
}

/// One intersection point of two divisors of the total transform.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Incidence {
    /// Two exceptional curves meeting; endpoints stored in increasing order.
    Edge(DivisorId, DivisorId),
    /// A strict-transform branch meeting the exceptional curve it is attached to.
    Arrow { vertex: DivisorId, arrow: DivisorId },
}

impl Incidence {
    pub fn edge(a: impl Into<DivisorId>, b: impl Into<DivisorId>) -> Self {
        let (a, b) = (a.into(), b.into());
        if a <= b {
            Incidence::Edge(a, b)
        } else {
            Incidence::Edge(b, a)
        }
    }

    pub fn arrow(vertex: impl Into<DivisorId>, arrow: impl Into<DivisorId>) -> Self {
        Incidence::Arrow { vertex: vertex.into(), arrow: arrow.into() }
    }

    /// The two divisors, smaller id first.
    pub fn pair(&self) -> (&DivisorId, &DivisorId) {
        match self {
            Incidence::Edge(a, b) => (a, b),
            Incidence::Arrow { vertex, arrow } => {
                if vertex <= arrow {
                    (vertex, arrow)
                } else {
                    (arrow, vertex)
                }
            }
        }
    }
}

impl PartialOrd for Incidence {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Incidence {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        let kind = |i: &Incidence| matches!(i, Incidence::Arrow { .. }) as u8;
        self.pair().cmp(&other.pair()).then(kind(self).cmp(&kind(other)))
    }
}

impl fmt::Display for Incidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.pair();
        write!(f, "{{{a},{b}}}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ViolationKind {
    Disconnected,
    NoArrows,
    NotNegativeDefinite,
}

impl ViolationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ViolationKind::Disconnected => "disconnected",
            ViolationKind::NoArrows => "no_arrows",
            ViolationKind::NotNegativeDefinite => "not_negative_definite",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub ids: Vec<DivisorId>,
    pub detail: String,
}

/// Outcome of [`PlumbingGraph::validate`]. Violations are data; the graph
/// passes iff there are none.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// Sign-corrected leading principal minors `(-1)^k det M_k`, computed up
    /// to the first non-positive one.
    pub minors: Vec<BigInt>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return f.write_str("pass");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{}: {}", v.kind.as_str(), v.detail)?;
        }
        Ok(())
    }
}

/// The decorated dual graph of an embedded resolution.
///
/// Construction checks the local invariants (unique ids, known references,
/// no self-loops, sign conditions). Global conditions that can legitimately
/// fail on a well-formed document are reported by [`validate`](Self::validate).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlumbingGraph {
    vertices: Vec<ExceptionalVertex>,
    arrows: Vec<Arrow>,
    edges: Vec<(DivisorId, DivisorId)>,
    vertex_index: BTreeMap<DivisorId, usize>,
    arrow_index: BTreeMap<DivisorId, usize>,
}

impl PlumbingGraph {
    pub fn new(
        vertices: Vec<ExceptionalVertex>,
        edges: Vec<(DivisorId, DivisorId)>,
        arrows: Vec<Arrow>,
    ) -> Result<Self> {
        let mut vertex_index = BTreeMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if vertex_index.insert(v.id.clone(), i).is_some() {
                return Err(Error::DuplicateId(v.id.clone()));
            }
            if v.self_intersection > -1 {
                return Err(Error::SelfIntersection { id: v.id.clone(), value: v.self_intersection });
            }
            if v.genus < 0 {
                return Err(Error::Genus { id: v.id.clone(), value: v.genus });
            }
        }
        let mut arrow_index = BTreeMap::new();
        for (i, a) in arrows.iter().enumerate() {
            if vertex_index.contains_key(&a.id) || arrow_index.insert(a.id.clone(), i).is_some() {
                return Err(Error::DuplicateId(a.id.clone()));
            }
            if !vertex_index.contains_key(&a.attached_to) {
                return Err(Error::UnknownId(a.attached_to.clone()));
            }
            if a.multiplicity < 1 {
                return Err(Error::ArrowMultiplicity { id: a.id.clone(), value: a.multiplicity });
            }
        }
        let mut normalized = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            for end in [&a, &b] {
                if !vertex_index.contains_key(end) {
                    return Err(Error::UnknownId(end.clone()));
                }
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            normalized.push(if a < b { (a, b) } else { (b, a) });
        }
        Ok(PlumbingGraph { vertices, arrows, edges: normalized, vertex_index, arrow_index })
    }

    pub fn vertices(&self) -> &[ExceptionalVertex] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    /// Edges with endpoints in increasing id order, in document order.
    pub fn edges(&self) -> &[(DivisorId, DivisorId)] {
        &self.edges
    }

    pub fn vertex(&self, id: &str) -> Option<&ExceptionalVertex> {
        self.vertex_index.get(id).map(|&i| &self.vertices[i])
    }

    pub fn arrow(&self, id: &str) -> Option<&Arrow> {
        self.arrow_index.get(id).map(|&i| &self.arrows[i])
    }

    pub fn vertex_position(&self, id: &str) -> Option<usize> {
        self.vertex_index.get(id).copied()
    }

    pub fn is_vertex(&self, id: &str) -> bool {
        self.vertex_index.contains_key(id)
    }

    pub fn is_arrow(&self, id: &str) -> bool {
        self.arrow_index.contains_key(id)
    }

    /// Vertex ids in increasing order.
    pub fn vertex_ids(&self) -> impl Iterator<Item = &DivisorId> {
        self.vertex_index.keys()
    }

    fn require_vertex(&self, id: &str) -> Result<&ExceptionalVertex> {
        self.vertex(id).ok_or_else(|| {
            if self.is_arrow(id) {
                Error::NotExceptional(id.into())
            } else {
                Error::UnknownId(id.into())
            }
        })
    }

    /// Every intersection point, sorted; a multi-edge contributes one entry
    /// per intersection point.
    pub fn incidences(&self) -> Vec<Incidence> {
        let mut out: Vec<Incidence> = self
            .edges
            .iter()
            .map(|(a, b)| Incidence::Edge(a.clone(), b.clone()))
            .chain(self.arrows.iter().map(|a| Incidence::arrow(a.attached_to.clone(), a.id.clone())))
            .collect();
        out.sort();
        out
    }

    /// Intersection points on a vertex, sorted.
    pub fn incidences_at(&self, id: &str) -> Result<Vec<Incidence>> {
        self.require_vertex(id)?;
        let mut out: Vec<Incidence> = self
            .edges
            .iter()
            .filter(|(a, b)| a.as_str() == id || b.as_str() == id)
            .map(|(a, b)| Incidence::Edge(a.clone(), b.clone()))
            .chain(
                self.arrows
                    .iter()
                    .filter(|a| a.attached_to.as_str() == id)
                    .map(|a| Incidence::arrow(a.attached_to.clone(), a.id.clone())),
            )
            .collect();
        out.sort();
        Ok(out)
    }

    /// Divisors meeting `id`, once per intersection point, sorted.
    pub fn neighbors(&self, id: &str) -> Result<Vec<&DivisorId>> {
        self.require_vertex(id)?;
        let mut out: Vec<&DivisorId> = Vec::new();
        for (a, b) in &self.edges {
            if a.as_str() == id {
                out.push(b);
            } else if b.as_str() == id {
                out.push(a);
            }
        }
        out.extend(self.arrows.iter().filter(|a| a.attached_to.as_str() == id).map(|a| &a.id));
        out.sort();
        Ok(out)
    }

    /// Distinct divisors meeting `id`.
    pub fn distinct_neighbors(&self, id: &str) -> Result<Vec<&DivisorId>> {
        let mut out = self.neighbors(id)?;
        out.dedup();
        Ok(out)
    }

    /// Number of points of `E` lying on other divisors of the total transform.
    pub fn valence(&self, id: &str) -> Result<usize> {
        if self.is_arrow(id) {
            return Ok(1);
        }
        Ok(self.neighbors(id)?.len())
    }

    /// Sum of the multiplicities of the arrows attached to a vertex.
    pub fn arrow_weight(&self, id: &str) -> i64 {
        self.arrows.iter().filter(|a| a.attached_to.as_str() == id).map(|a| a.multiplicity).sum()
    }

    /// Intersection matrix of the exceptional curves, indexed by vertex
    /// position (document order).
    pub fn intersection_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.vertices.len();
        let mut m = vec![vec![0i64; n]; n];
        for (i, v) in self.vertices.iter().enumerate() {
            m[i][i] = v.self_intersection;
        }
        for (a, b) in &self.edges {
            let (i, j) = (self.vertex_index[a], self.vertex_index[b]);
            m[i][j] += 1;
            m[j][i] += 1;
        }
        m
    }

    fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 {
            return false;
        }
        let mut adj = vec![Vec::new(); n];
        for (a, b) in &self.edges {
            let (i, j) = (self.vertex_index[a], self.vertex_index[b]);
            adj[i].push(j);
            adj[j].push(i);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for &j in &adj[i] {
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// Checks connectivity, the presence of an arrow and negative-definiteness
    /// of the intersection matrix (exactly, by leading principal minors).
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        if !self.is_connected() {
            let ids = if self.vertices.is_empty() { Vec::new() } else { self.component_of_first_missing() };
            report.violations.push(Violation {
                kind: ViolationKind::Disconnected,
                ids,
                detail: "graph is not connected".into(),
            });
        }
        if self.arrows.is_empty() {
            report.violations.push(Violation {
                kind: ViolationKind::NoArrows,
                ids: Vec::new(),
                detail: "no strict-transform branch: multiplicity system has only the zero solution".into(),
            });
        }
        let minors = linalg::leading_principal_minors(&self.intersection_matrix());
        for (k, minor) in minors.into_iter().enumerate() {
            let corrected = if k % 2 == 0 { -minor } else { minor };
            let bad = !corrected.is_positive();
            report.minors.push(corrected.clone());
            if bad {
                report.violations.push(Violation {
                    kind: ViolationKind::NotNegativeDefinite,
                    ids: self.vertices[..=k].iter().map(|v| v.id.clone()).collect(),
                    detail: format!("leading minor of order {} has (-1)^k det = {}", k + 1, corrected),
                });
                break;
            }
        }
        report
    }

    // Vertices unreachable from the first vertex.
    fn component_of_first_missing(&self) -> Vec<DivisorId> {
        let mut reached: BTreeSet<&DivisorId> = BTreeSet::new();
        let mut stack = vec![&self.vertices[0].id];
        reached.insert(&self.vertices[0].id);
        while let Some(v) = stack.pop() {
            for (a, b) in &self.edges {
                let other = if a == v {
                    b
                } else if b == v {
                    a
                } else {
                    continue;
                };
                if reached.insert(other) {
                    stack.push(other);
                }
            }
        }
        self.vertex_index.keys().filter(|id| !reached.contains(id)).cloned().collect()
    }

    pub(crate) fn into_parts(self) -> (Vec<ExceptionalVertex>, Vec<(DivisorId, DivisorId)>, Vec<Arrow>) {
        (self.vertices, self.edges, self.arrows)
    }
}
