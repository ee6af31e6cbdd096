//! Blowups of intersection points, m-separation and admissibility.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::numerics::DivisorData;
use crate::plumbing::{Arrow, DivisorId, ExceptionalVertex, Incidence, PlumbingGraph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationCheck {
    pub separating: bool,
    /// Incidences with `N_E + N_E' <= m` and their sums, sorted by id pair.
    pub violations: Vec<(Incidence, u64)>,
}

fn incidence_sum(dd: &DivisorData, inc: &Incidence) -> Result<u64> {
    let (a, b) = inc.pair();
    Ok(dd.multiplicity(a.as_str())? + dd.multiplicity(b.as_str())?)
}

pub fn is_m_separating(g: &PlumbingGraph, dd: &DivisorData, m: u64) -> Result<SeparationCheck> {
    let mut violations = Vec::new();
    for inc in g.incidences() {
        let sum = incidence_sum(dd, &inc)?;
        if sum <= m {
            violations.push((inc, sum));
        }
    }
    Ok(SeparationCheck { separating: violations.is_empty(), violations })
}

/// Result of blowing up one intersection point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlownUp {
    pub graph: PlumbingGraph,
    pub divisors: DivisorData,
    /// The new (-1)-curve.
    pub vertex: DivisorId,
}

/// Mutable copy of a graph for running many blowups without rebuilding
/// the graph after each one.
struct Workspace {
    vertices: Vec<ExceptionalVertex>,
    edges: Vec<(DivisorId, DivisorId)>,
    arrows: Vec<Arrow>,
    divisors: DivisorData,
    taken: BTreeSet<DivisorId>,
    counter: u64,
}

impl Workspace {
    fn new(g: &PlumbingGraph, dd: &DivisorData) -> Self {
        let (vertices, edges, arrows) = g.clone().into_parts();
        let taken = vertices.iter().map(|v| v.id.clone()).chain(arrows.iter().map(|a| a.id.clone())).collect();
        Workspace { vertices, edges, arrows, divisors: dd.clone(), taken, counter: 0 }
    }

    /// `B<k>` with the smallest unused `k` above the last one handed out.
    fn fresh_id(&mut self) -> DivisorId {
        loop {
            self.counter += 1;
            let id = DivisorId::new(format!("B{}", self.counter));
            if !self.taken.contains(&id) {
                self.taken.insert(id.clone());
                return id;
            }
        }
    }

    fn bump(&mut self, id: &DivisorId) {
        if let Some(v) = self.vertices.iter_mut().find(|v| &v.id == id) {
            v.self_intersection -= 1;
        }
    }

    fn push_edge(&mut self, a: DivisorId, b: DivisorId) {
        self.edges.push(if a < b { (a, b) } else { (b, a) });
    }

    /// Blows up `incidence`, returning the new curve.
    fn blow_up(&mut self, incidence: &Incidence) -> Result<DivisorId> {
        let dd = &self.divisors;
        let (n_new, k_new) = match incidence {
            Incidence::Edge(a, b) => {
                let pos = self
                    .edges
                    .iter()
                    .position(|(x, y)| x == a && y == b)
                    .ok_or_else(|| Error::IncidenceNotFound(incidence.clone()))?;
                let k = match &dd.discrepancies {
                    Some(k) => match (k.get(a), k.get(b)) {
                        (Some(ka), Some(kb)) => Some(ka + kb + BigRational::one()),
                        _ => None,
                    },
                    None => None,
                };
                let n = dd.multiplicity(a.as_str())?.checked_add(dd.multiplicity(b.as_str())?);
                self.edges.remove(pos);
                (n, k)
            }
            Incidence::Arrow { vertex, arrow } => {
                if !self.arrows.iter().any(|x| &x.id == arrow && &x.attached_to == vertex) {
                    return Err(Error::IncidenceNotFound(incidence.clone()));
                }
                let k = dd.discrepancies.as_ref().and_then(|k| k.get(vertex)).map(|kv| kv + BigRational::one());
                (dd.multiplicity(vertex.as_str())?.checked_add(dd.multiplicity(arrow.as_str())?), k)
            }
        };
        let new_id = self.fresh_id();
        let n_new = n_new.ok_or_else(|| Error::MultiplicityOverflow(new_id.clone()))?;
        match incidence {
            Incidence::Edge(a, b) => {
                self.bump(a);
                self.bump(b);
                self.push_edge(a.clone(), new_id.clone());
                self.push_edge(new_id.clone(), b.clone());
            }
            Incidence::Arrow { vertex, arrow } => {
                let target = self.arrows.iter_mut().find(|x| &x.id == arrow).expect("checked above");
                target.attached_to = new_id.clone();
                self.bump(vertex);
                self.push_edge(vertex.clone(), new_id.clone());
            }
        }
        self.vertices.push(ExceptionalVertex::new(new_id.clone(), -1, 0));
        self.divisors.multiplicities.insert(new_id.clone(), n_new);
        match (self.divisors.discrepancies.as_mut(), k_new) {
            (Some(k), Some(kn)) => {
                k.insert(new_id.clone(), kn);
            }
            (Some(_), None) => self.divisors.discrepancies = None,
            _ => {}
        }
        Ok(new_id)
    }

    fn finish(self) -> Result<(PlumbingGraph, DivisorData)> {
        Ok((PlumbingGraph::new(self.vertices, self.edges, self.arrows)?, self.divisors))
    }
}

/// Blows up one intersection point, naming the new curve `B<k>` with the
/// smallest unused `k`.
pub fn blow_up(g: &PlumbingGraph, dd: &DivisorData, incidence: &Incidence) -> Result<BlownUp> {
    let mut ws = Workspace::new(g, dd);
    let vertex = ws.blow_up(incidence)?;
    let (graph, divisors) = ws.finish()?;
    Ok(BlownUp { graph, divisors, vertex })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupRecord {
    pub incidence: Incidence,
    pub vertex: DivisorId,
    pub multiplicity: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinementTrace {
    pub m: u64,
    pub records: Vec<BlowupRecord>,
    pub graph: PlumbingGraph,
    pub divisors: DivisorData,
}

/// Blows up violating intersection points, smallest `N`-sum first (ties by
/// id pair), until the graph is m-separating.
///
/// Each blowup replaces a sum `s = N + N'` by `N + s` and `s + N'`, both
/// larger than `s`, so the loop terminates.
pub fn make_m_separating(g: &PlumbingGraph, dd: &DivisorData, m: u64) -> Result<RefinementTrace> {
    let report = g.validate();
    if !report.passed() {
        return Err(Error::InvalidGraph(report));
    }
    // violating incidences with their number of parallel copies
    let mut pending: BTreeMap<(u64, Incidence), usize> = BTreeMap::new();
    for (inc, sum) in is_m_separating(g, dd, m)?.violations {
        *pending.entry((sum, inc)).or_default() += 1;
    }
    let mut ws = Workspace::new(g, dd);
    let mut records = Vec::new();
    while let Some(mut entry) = pending.first_entry() {
        let (sum, incidence) = entry.key().clone();
        *entry.get_mut() -= 1;
        if *entry.get() == 0 {
            entry.remove();
        }
        let vertex = ws.blow_up(&incidence)?;
        let created = match &incidence {
            Incidence::Edge(a, b) => [Incidence::edge(a.clone(), vertex.clone()), Incidence::edge(vertex.clone(), b.clone())],
            Incidence::Arrow { vertex: v, arrow } => {
                [Incidence::edge(v.clone(), vertex.clone()), Incidence::arrow(vertex.clone(), arrow.clone())]
            }
        };
        for inc in created {
            let s = incidence_sum(&ws.divisors, &inc)?;
            if s <= m {
                *pending.entry((s, inc)).or_default() += 1;
            }
        }
        records.push(BlowupRecord { incidence, vertex, multiplicity: sum });
    }
    let (graph, divisors) = ws.finish()?;
    Ok(RefinementTrace { m, records, graph, divisors })
}

/// Position of a blown-up curve over the graph a refinement started from:
/// it lies over the intersection point `incidence` of two original
/// divisors and is the monomial valuation with `weights` on their local
/// equations, in the order of `incidence.pair()`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Origin {
    pub incidence: Incidence,
    pub weights: (u64, u64),
}

/// Origins of the curves created by a sequence of blowups. Two refinements
/// of one graph create the same divisor exactly when the origins agree, up
/// to the choice among parallel edges.
pub fn origins(records: &[BlowupRecord]) -> BTreeMap<DivisorId, Origin> {
    let mut out: BTreeMap<DivisorId, Origin> = BTreeMap::new();
    for r in records {
        let (p, q) = r.incidence.pair();
        let origin = match (out.get(p), out.get(q)) {
            (None, None) => Origin { incidence: r.incidence.clone(), weights: (1, 1) },
            (Some(o), None) | (None, Some(o)) => {
                let original = if out.contains_key(p) { q } else { p };
                let w = if original == o.incidence.pair().0 { (1, 0) } else { (0, 1) };
                Origin { incidence: o.incidence.clone(), weights: (o.weights.0 + w.0, o.weights.1 + w.1) }
            }
            (Some(a), Some(b)) => {
                Origin { incidence: a.incidence.clone(), weights: (a.weights.0 + b.weights.0, a.weights.1 + b.weights.1) }
            }
        };
        out.insert(r.vertex.clone(), origin);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibilityCheck {
    pub admissible: bool,
    /// Vertices of valence > 2 with fewer than three distinct neighbors whose
    /// multiplicity they do not divide.
    pub violations: Vec<DivisorId>,
}

pub fn is_admissible(g: &PlumbingGraph, dd: &DivisorData) -> Result<AdmissibilityCheck> {
    let mut violations = Vec::new();
    for id in g.vertex_ids() {
        if g.valence(id.as_str())? <= 2 {
            continue;
        }
        let n = dd.multiplicity(id.as_str())?;
        let mut non_dividing = 0;
        for nb in g.distinct_neighbors(id.as_str())? {
            if dd.multiplicity(nb.as_str())? % n != 0 {
                non_dividing += 1;
            }
        }
        if non_dividing < 3 {
            violations.push(id.clone());
        }
    }
    Ok(AdmissibilityCheck { admissible: violations.is_empty(), violations })
}

/// Number of distinct neighbors of each vertex whose multiplicity the
/// vertex's multiplicity does not divide.
pub fn non_dividing_neighbors(g: &PlumbingGraph, dd: &DivisorData) -> Result<BTreeMap<DivisorId, usize>> {
    let mut out = BTreeMap::new();
    for id in g.vertex_ids() {
        let n = dd.multiplicity(id.as_str())?;
        let mut count = 0;
        for nb in g.distinct_neighbors(id.as_str())? {
            if dd.multiplicity(nb.as_str())? % n != 0 {
                count += 1;
            }
        }
        out.insert(id.clone(), count);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{compute_multiplicities, smooth_divisor_data};
    use crate::plumbing::fixtures::*;
    use crate::plumbing::Arrow;
    use alloc::string::{String, ToString};
    use alloc::vec;

    #[test]
    fn origins_over_one_point() {
        // N_X = N_Y = 1: refining at m = 4 produces weights with a + b <= 4
        let g = PlumbingGraph::new(
            vec![ExceptionalVertex::new("X", -2, 0), ExceptionalVertex::new("Y", -2, 0)],
            vec![e("X", "Y")],
            vec![Arrow::new("A", "X", 1), Arrow::new("B", "Y", 1)],
        )
        .unwrap();
        let dd = compute_multiplicities(&g).unwrap();
        assert_eq!((dd.multiplicity("X").unwrap(), dd.multiplicity("Y").unwrap()), (1, 1));
        let trace = make_m_separating(&g, &dd, 4).unwrap();
        let found = origins(&trace.records);
        assert_eq!(found.len(), trace.records.len());
        let mut weights: Vec<(u64, u64)> = Vec::new();
        for (id, o) in &found {
            let (p, q) = o.incidence.pair();
            let n = o.weights.0 * dd.multiplicity(p.as_str()).unwrap() + o.weights.1 * dd.multiplicity(q.as_str()).unwrap();
            assert_eq!(trace.divisors.multiplicity(id.as_str()).unwrap(), n);
            if o.incidence == Incidence::edge("X", "Y") {
                weights.push(o.weights);
            }
        }
        weights.sort();
        assert_eq!(weights, vec![(1, 1), (1, 2), (1, 3), (2, 1), (3, 1)]);
    }

    #[test]
    fn cusp_separation() {
        let g = cusp();
        let dd = compute_multiplicities(&g).unwrap();
        assert!(is_m_separating(&g, &dd, 6).unwrap().separating);
        assert!(is_m_separating(&g, &dd, 0).unwrap().separating);
        let check = is_m_separating(&g, &dd, 12).unwrap();
        assert!(!check.separating);
        let shown: Vec<String> = check.violations.iter().map(|(i, s)| format!("{i}:{s}")).collect();
        assert_eq!(shown, vec!["{A1,E3}:7", "{E1,E3}:8", "{E2,E3}:9"]);
    }

    #[test]
    fn cusp_blow_up_edge() {
        let g = cusp();
        let dd = compute_multiplicities(&g).unwrap();
        let out = blow_up(&g, &dd, &Incidence::edge("E3", "E1")).unwrap();
        assert_eq!(out.vertex.as_str(), "B1");
        assert_eq!(out.graph.vertex("E1").unwrap().self_intersection, -4);
        assert_eq!(out.graph.vertex("E3").unwrap().self_intersection, -2);
        assert_eq!(out.graph.vertex("B1").unwrap().self_intersection, -1);
        assert_eq!(out.divisors.multiplicity("B1").unwrap(), 8);
        let resolved = compute_multiplicities(&out.graph).unwrap();
        assert_eq!(resolved, out.divisors);
        assert!(out.graph.validate().passed());
    }

    #[test]
    fn smooth_point_blow_up_arrow() {
        let g = smooth_point();
        let dd = smooth_divisor_data(&g).unwrap();
        let out = blow_up(&g, &dd, &Incidence::arrow("E", "A")).unwrap();
        assert_eq!(out.divisors.multiplicity("B1").unwrap(), 2);
        assert_eq!(out.graph.vertex("E").unwrap().self_intersection, -2);
        assert_eq!(out.graph.arrow("A").unwrap().attached_to.as_str(), "B1");
        assert_eq!(out.graph.valence("B1").unwrap(), 2);
        let resolved = smooth_divisor_data(&out.graph).unwrap();
        assert_eq!(resolved.multiplicities, out.divisors.multiplicities);
        // discrepancy of a blowup of a point on E is k_E + 1
        assert_eq!(resolved.discrepancies, out.divisors.discrepancies);
    }

    #[test]
    fn blow_up_missing_incidence() {
        let g = cusp();
        let dd = compute_multiplicities(&g).unwrap();
        assert!(matches!(blow_up(&g, &dd, &Incidence::edge("E1", "E2")), Err(Error::IncidenceNotFound(_))));
        assert!(matches!(blow_up(&g, &dd, &Incidence::arrow("E1", "A1")), Err(Error::IncidenceNotFound(_))));
    }

    #[test]
    fn multi_edge_blow_up_removes_one_point() {
        let g = PlumbingGraph::new(
            vec![ExceptionalVertex::new("E1", -3, 0), ExceptionalVertex::new("E2", -3, 0)],
            vec![e("E1", "E2"), e("E1", "E2")],
            vec![Arrow::new("A", "E1", 1), Arrow::new("B", "E2", 1)],
        )
        .unwrap();
        let dd = compute_multiplicities(&g).unwrap();
        assert_eq!(dd.multiplicity("E1").unwrap(), 1);
        let out = blow_up(&g, &dd, &Incidence::edge("E1", "E2")).unwrap();
        assert_eq!(out.graph.edges().iter().filter(|(a, b)| a.as_str() == "E1" && b.as_str() == "E2").count(), 1);
        assert_eq!(compute_multiplicities(&out.graph).unwrap(), out.divisors);
    }

    #[test]
    fn cusp_refinement() {
        let g = cusp();
        let dd = compute_multiplicities(&g).unwrap();
        assert!(make_m_separating(&g, &dd, 6).unwrap().records.is_empty());
        assert!(make_m_separating(&g, &dd, 1).unwrap().records.is_empty());

        let trace = make_m_separating(&g, &dd, 12).unwrap();
        assert!(trace.records.len() >= 3);
        assert!(is_m_separating(&trace.graph, &trace.divisors, 12).unwrap().separating);
        for r in &trace.records {
            assert!(r.multiplicity <= 12 + 9);
        }
        // smallest sum first: {A1,E3} has sum 7
        assert_eq!(trace.records[0].incidence, Incidence::arrow("E3", "A1"));
        assert_eq!(trace.records[0].vertex.to_string(), "B1");
        assert_eq!(trace.records[0].multiplicity, 7);
        assert_eq!(compute_multiplicities(&trace.graph).unwrap(), trace.divisors);
        let again = make_m_separating(&trace.graph, &trace.divisors, 12).unwrap();
        assert!(again.records.is_empty());
        assert_eq!(make_m_separating(&g, &dd, 12).unwrap(), trace);
    }

    #[test]
    fn admissibility_examples() {
        let g = cusp();
        let dd = compute_multiplicities(&g).unwrap();
        assert!(is_admissible(&g, &dd).unwrap().admissible);

        let star = PlumbingGraph::new(
            vec![
                ExceptionalVertex::new("C", -2, 0),
                ExceptionalVertex::new("X", -2, 0),
                ExceptionalVertex::new("Y", -2, 0),
                ExceptionalVertex::new("Z", -2, 0),
            ],
            vec![e("C", "X"), e("C", "Y"), e("C", "Z")],
            vec![Arrow::new("A", "X", 1)],
        )
        .unwrap();
        let mult: BTreeMap<DivisorId, u64> =
            [("C", 2), ("X", 4), ("Y", 6), ("Z", 3), ("A", 1)].into_iter().map(|(k, v)| (k.into(), v)).collect();
        let check = is_admissible(&star, &DivisorData::from_multiplicities(mult)).unwrap();
        assert!(!check.admissible);
        assert_eq!(check.violations, vec![DivisorId::from("C")]);

        let bamboo = PlumbingGraph::new(
            vec![ExceptionalVertex::new("L", -2, 0), ExceptionalVertex::new("E", -1, 0)],
            vec![e("L", "E")],
            vec![Arrow::new("A", "E", 1)],
        )
        .unwrap();
        let dd = compute_multiplicities(&bamboo).unwrap();
        assert!(is_admissible(&bamboo, &dd).unwrap().admissible);
    }

    #[test]
    fn triple_point_admissible() {
        let g = triple_point();
        let dd = compute_multiplicities(&g).unwrap();
        assert_eq!(dd.multiplicity("E").unwrap(), 3);
        assert!(is_admissible(&g, &dd).unwrap().admissible);
        assert_eq!(non_dividing_neighbors(&g, &dd).unwrap()["E"], 3);
    }
}
