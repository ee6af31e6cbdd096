//! Seeded random plumbing graphs for property checks.
//!
//! Multiplicities are chosen first and self-intersections and arrows are fit
//! around them, so every generated graph is valid and its multiplicities are
//! known without solving anything: with `N > 0`, `M·N = -b <= 0`, `b != 0`
//! and a connected graph, `-M` is a nonsingular M-matrix, hence `M` is
//! negative definite.

use std::collections::BTreeMap;

use contact_loci_core::numerics::DivisorData;
use contact_loci_core::refine;
use contact_loci_core::{Arrow, DivisorId, ExceptionalVertex, PlumbingGraph};
use rand::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphParams {
    pub max_vertices: usize,
    /// Multiplicities of exceptional vertices are drawn from `1..=max_multiplicity`.
    pub max_multiplicity: u64,
    pub max_genus: i64,
    /// Up to this many edges are added on top of a spanning tree; they may
    /// close cycles or duplicate edges.
    pub extra_edges: usize,
}

impl Default for GraphParams {
    fn default() -> Self {
        GraphParams { max_vertices: 8, max_multiplicity: 8, max_genus: 0, extra_edges: 0 }
    }
}

#[derive(Debug, Clone)]
pub struct RandomGraph {
    pub graph: PlumbingGraph,
    /// The multiplicities the graph was built around, arrows included.
    pub multiplicities: BTreeMap<DivisorId, u64>,
}

impl RandomGraph {
    pub fn divisor_data(&self) -> DivisorData {
        DivisorData::from_multiplicities(self.multiplicities.clone())
    }
}

pub fn random_graph<R: Rng + ?Sized>(rng: &mut R, params: &GraphParams) -> RandomGraph {
    let n = rng.gen_range(1..=params.max_vertices.max(1));
    let ids: Vec<DivisorId> = (1..=n).map(|i| DivisorId::new(format!("E{i}"))).collect();

    let mut edges: Vec<(usize, usize)> = (1..n).map(|i| (rng.gen_range(0..i), i)).collect();
    if n >= 2 {
        for _ in 0..rng.gen_range(0..=params.extra_edges) {
            let a = rng.gen_range(0..n);
            let mut b = rng.gen_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            edges.push((a, b));
        }
    }

    let mult: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=params.max_multiplicity.max(1))).collect();
    let mut neighbor_sum = vec![0u64; n];
    for &(a, b) in &edges {
        neighbor_sum[a] += mult[b];
        neighbor_sum[b] += mult[a];
    }
    // e·N = neighbor sum + arrow weight, with arrow weight >= 0
    let mut e: Vec<u64> = (0..n)
        .map(|i| neighbor_sum[i].div_ceil(mult[i]).max(1) + rng.gen_range(0..=1))
        .collect();
    let mut weight: Vec<u64> = (0..n).map(|i| e[i] * mult[i] - neighbor_sum[i]).collect();
    if weight.iter().all(|&w| w == 0) {
        let i = rng.gen_range(0..n);
        e[i] += 1;
        weight[i] = mult[i];
    }

    let mut multiplicities = BTreeMap::new();
    let mut arrows = Vec::new();
    for i in 0..n {
        multiplicities.insert(ids[i].clone(), mult[i]);
        let mut left = weight[i];
        while left > 0 {
            let part = rng.gen_range(1..=left);
            let id = DivisorId::new(format!("A{}", arrows.len() + 1));
            multiplicities.insert(id.clone(), part);
            arrows.push(Arrow::new(id, ids[i].clone(), part as i64));
            left -= part;
        }
    }
    let vertices = (0..n)
        .map(|i| ExceptionalVertex::new(ids[i].clone(), -(e[i] as i64), rng.gen_range(0..=params.max_genus.max(0))))
        .collect();
    let edges = edges.into_iter().map(|(a, b)| (ids[a].clone(), ids[b].clone())).collect();
    let graph = PlumbingGraph::new(vertices, edges, arrows).expect("generated graphs are well formed");
    RandomGraph { graph, multiplicities }
}

/// Draws until the graph is admissible; `None` after `attempts` failures.
pub fn random_admissible_graph<R: Rng + ?Sized>(rng: &mut R, params: &GraphParams, attempts: usize) -> Option<RandomGraph> {
    (0..attempts).map(|_| random_graph(rng, params)).find(|rg| {
        refine::is_admissible(&rg.graph, &rg.divisor_data()).map(|c| c.admissible).unwrap_or(false)
    })
}
