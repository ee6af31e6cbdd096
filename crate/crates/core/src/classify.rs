//! Irreducible components of the m-contact locus at the base point.
//!
//! A leaf is an exceptional curve meeting the rest of the total transform
//! in one point. From a genus-zero leaf we walk through genus-zero curves of
//! valence two; the curves visited, plus the curve where the walk stops,
//! form the chain set of the leaf, totally ordered from the leaf outwards.
//! For an admissible m-separating resolution the components are the
//! closures of the arcs lifting to
//!
//! 1. the last m-divisor of the chain set of every leaf that is itself an
//!    m-divisor, and
//! 2. every m-divisor lying in no such chain.
//!
//! Every other m-divisor is absorbed by the last m-divisor of its chain.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use num_integer::Integer;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::numerics::{self, DivisorData};
use crate::plumbing::{DivisorId, Incidence, PlumbingGraph};
use crate::refine::{self, BlowupRecord};

/// Exceptional vertices of valence one, sorted.
pub fn leaves(g: &PlumbingGraph) -> Vec<DivisorId> {
    g.vertex_ids().filter(|id| g.valence(id.as_str()) == Ok(1)).cloned().collect()
}

/// Arrows are leaves of the total transform too, but never start a chain.
pub fn branch_leaves(g: &PlumbingGraph) -> Vec<DivisorId> {
    let mut out: Vec<DivisorId> = g.arrows().iter().map(|a| a.id.clone()).collect();
    out.sort();
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainSet {
    pub leaf: DivisorId,
    /// From the leaf to the maximal element, in increasing order.
    pub members: Vec<DivisorId>,
}

impl ChainSet {
    pub fn maximal(&self) -> &DivisorId {
        self.members.last().expect("a chain set contains its leaf")
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.members.iter().position(|m| m.as_str() == id)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.position(id).is_some()
    }

    /// The m-divisors of the chain, in chain order.
    pub fn restricted(&self, dd: &DivisorData, m: u64) -> Result<Vec<DivisorId>> {
        let mut out = Vec::new();
        for id in &self.members {
            if m.is_multiple_of(dd.multiplicity(id.as_str())?) {
                out.push(id.clone());
            }
        }
        Ok(out)
    }

    /// Last m-divisor of the chain; `None` unless the leaf is an m-divisor.
    pub fn maximal_for(&self, dd: &DivisorData, m: u64) -> Result<Option<DivisorId>> {
        Ok(self.restricted(dd, m)?.pop())
    }

    /// `N_L` divides every `N_E` in the chain and adjacent members have gcd `N_L`.
    pub fn gcd_property_holds(&self, dd: &DivisorData) -> Result<bool> {
        let nl = dd.multiplicity(self.leaf.as_str())?;
        let mut ns = Vec::with_capacity(self.members.len());
        for id in &self.members {
            ns.push(dd.multiplicity(id.as_str())?);
        }
        Ok(ns.iter().all(|n| n % nl == 0) && ns.windows(2).all(|w| w[0].gcd(&w[1]) == nl))
    }
}

/// Walks the chain set of a leaf.
///
/// The walk stops at the first curve of valence other than two or of
/// positive genus (included as the maximal element), or at a curve whose
/// only continuation is a strict-transform branch (that curve is then the
/// maximal element).
pub fn chain_set(g: &PlumbingGraph, leaf: &str) -> Result<ChainSet> {
    if g.vertex(leaf).is_none() {
        return Err(if g.is_arrow(leaf) { Error::NotExceptional(leaf.into()) } else { Error::UnknownId(leaf.into()) });
    }
    if g.valence(leaf)? != 1 {
        return Err(Error::NotALeaf(leaf.into()));
    }
    let mut members = alloc::vec![DivisorId::from(leaf)];
    let mut came_from: Option<Incidence> = None;
    loop {
        let current = members.last().unwrap().clone();
        let vertex = g.vertex(current.as_str()).unwrap();
        if vertex.genus > 0 {
            break;
        }
        if members.len() > 1 && g.valence(current.as_str())? != 2 {
            break;
        }
        let mut incidences = g.incidences_at(current.as_str())?;
        if let Some(back) = &came_from {
            if let Some(pos) = incidences.iter().position(|i| i == back) {
                incidences.remove(pos);
            }
        }
        let Some(next) = incidences.into_iter().next() else { break };
        let other = match &next {
            Incidence::Arrow { .. } => break,
            Incidence::Edge(a, b) => {
                if *a == current {
                    b.clone()
                } else {
                    a.clone()
                }
            }
        };
        if members.contains(&other) {
            break;
        }
        members.push(other);
        came_from = Some(next);
    }
    Ok(ChainSet { leaf: leaf.into(), members })
}

/// Exceptional vertices with `N_E | m`, sorted. Requires m-separation.
pub fn m_divisors(g: &PlumbingGraph, dd: &DivisorData, m: u64) -> Result<Vec<DivisorId>> {
    require_separating(g, dd, m)?;
    m_divisors_unchecked(g, dd, m)
}

fn m_divisors_unchecked(g: &PlumbingGraph, dd: &DivisorData, m: u64) -> Result<Vec<DivisorId>> {
    let mut out = Vec::new();
    for id in g.vertex_ids() {
        if m.is_multiple_of(dd.multiplicity(id.as_str())?) {
            out.push(id.clone());
        }
    }
    Ok(out)
}

fn require_separating(g: &PlumbingGraph, dd: &DivisorData, m: u64) -> Result<()> {
    let check = refine::is_m_separating(g, dd, m)?;
    if check.separating {
        Ok(())
    } else {
        Err(Error::NotMSeparating { m, violations: check.violations })
    }
}

fn require_admissible(g: &PlumbingGraph, dd: &DivisorData) -> Result<()> {
    let check = refine::is_admissible(g, dd)?;
    if check.admissible {
        Ok(())
    } else {
        Err(Error::NotAdmissible(check.violations))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Containment {
    Contained,
    NotContained,
    Unknown,
}

impl Containment {
    pub fn as_str(self) -> &'static str {
        match self {
            Containment::Contained => "contained",
            Containment::NotContained => "not_contained",
            Containment::Unknown => "unknown",
        }
    }
}

/// Whether the arcs lifting to `lower` lie in the closure of those lifting
/// to `upper`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosetEntry {
    pub lower: DivisorId,
    pub upper: DivisorId,
    pub status: Containment,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MDivisor {
    pub id: DivisorId,
    pub multiplicity: u64,
    /// `m / N_E`, the order of contact of a lifted arc with `E`.
    pub weight: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComponentKind {
    /// Last m-divisor of the chain sets of the listed m-leaves.
    ChainMaximum { leaves: Vec<DivisorId> },
    /// An m-divisor in no chain set of an m-leaf.
    ChainFree,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub id: DivisorId,
    pub kind: ComponentKind,
    pub codimension: Option<BigRational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContactReport {
    pub m: u64,
    /// Blowups performed to reach m-separation (empty without auto-refine).
    pub blowups: Vec<BlowupRecord>,
    pub m_divisors: Vec<MDivisor>,
    /// Restricted chain sets `C_{L,m}` of the m-leaves, by leaf.
    pub chains: Vec<(DivisorId, Vec<DivisorId>)>,
    pub components: Vec<Component>,
    /// Non-maximal chain m-divisors and the component absorbing them.
    pub absorbed: Vec<(DivisorId, DivisorId)>,
    /// Arrows with `N | m`; they are branch contacts outside the classification.
    pub branch_contacts: Vec<DivisorId>,
    pub poset: Vec<PosetEntry>,
    /// Codimension of the whole contact locus, when discrepancies are known
    /// and some m-divisor exists.
    pub min_codimension: Option<BigRational>,
}

impl ContactReport {
    pub fn component_ids(&self) -> Vec<DivisorId> {
        self.components.iter().map(|c| c.id.clone()).collect()
    }
}

struct ChainIndex {
    /// m-leaf, restricted chain.
    chains: Vec<(DivisorId, Vec<DivisorId>)>,
}

impl ChainIndex {
    fn build(g: &PlumbingGraph, dd: &DivisorData, m: u64) -> Result<Self> {
        let mut chains = Vec::new();
        for leaf in leaves(g) {
            if !m.is_multiple_of(dd.multiplicity(leaf.as_str())?) {
                continue;
            }
            let restricted = chain_set(g, leaf.as_str())?.restricted(dd, m)?;
            chains.push((leaf, restricted));
        }
        Ok(ChainIndex { chains })
    }

    fn maxima(&self) -> BTreeSet<&DivisorId> {
        self.chains.iter().filter_map(|(_, c)| c.last()).collect()
    }

    fn in_some_chain(&self, id: &DivisorId) -> bool {
        self.chains.iter().any(|(_, c)| c.contains(id))
    }

    fn status(&self, lower: &DivisorId, upper: &DivisorId) -> Containment {
        let below = self.chains.iter().any(|(_, c)| {
            match (c.iter().position(|x| x == lower), c.iter().position(|x| x == upper)) {
                (Some(i), Some(j)) => i < j,
                _ => false,
            }
        });
        if below {
            Containment::Contained
        } else if self.maxima().contains(lower) || !self.in_some_chain(lower) {
            Containment::NotContained
        } else {
            Containment::Unknown
        }
    }

    fn poset(&self, divisors: &[DivisorId]) -> Vec<PosetEntry> {
        let mut out = Vec::new();
        for lower in divisors {
            for upper in divisors {
                if lower != upper {
                    out.push(PosetEntry { lower: lower.clone(), upper: upper.clone(), status: self.status(lower, upper) });
                }
            }
        }
        out
    }
}

/// Containment statuses for all ordered pairs of distinct m-divisors.
///
/// `contained` when both lie in one restricted chain with the first below
/// the second; `not_contained` when the first is a chain maximum or lies in
/// no restricted chain; `unknown` otherwise.
pub fn adjacency_poset(g: &PlumbingGraph, dd: &DivisorData, m: u64) -> Result<Vec<PosetEntry>> {
    require_separating(g, dd, m)?;
    require_admissible(g, dd)?;
    let divisors = m_divisors_unchecked(g, dd, m)?;
    Ok(ChainIndex::build(g, dd, m)?.poset(&divisors))
}

/// Classifies the components of the m-contact locus, first refining the
/// resolution to an m-separating one when `auto_refine` is set.
pub fn components(g: &PlumbingGraph, dd: &DivisorData, m: u64, auto_refine: bool) -> Result<ContactReport> {
    if auto_refine {
        let trace = refine::make_m_separating(g, dd, m)?;
        let mut report = classify_separated(&trace.graph, &trace.divisors, m)?;
        report.blowups = trace.records;
        Ok(report)
    } else {
        classify_separated(g, dd, m)
    }
}

fn classify_separated(g: &PlumbingGraph, dd: &DivisorData, m: u64) -> Result<ContactReport> {
    require_separating(g, dd, m)?;
    require_admissible(g, dd)?;
    let divisors = m_divisors_unchecked(g, dd, m)?;
    let index = ChainIndex::build(g, dd, m)?;

    let mut leaves_of: BTreeMap<DivisorId, Vec<DivisorId>> = BTreeMap::new();
    for (leaf, chain) in &index.chains {
        if let Some(max) = chain.last() {
            leaves_of.entry(max.clone()).or_default().push(leaf.clone());
        }
    }
    let codim = |id: &DivisorId| -> Option<BigRational> {
        dd.discrepancies.as_ref()?;
        numerics::codimension(dd, m, id.as_str()).ok()
    };

    let mut components = Vec::new();
    let mut absorbed = Vec::new();
    for id in &divisors {
        if let Some(leaves) = leaves_of.get(id) {
            components.push(Component {
                id: id.clone(),
                kind: ComponentKind::ChainMaximum { leaves: leaves.clone() },
                codimension: codim(id),
            });
        } else if let Some((_, chain)) = index.chains.iter().find(|(_, c)| c.contains(id)) {
            absorbed.push((id.clone(), chain.last().unwrap().clone()));
        } else {
            components.push(Component { id: id.clone(), kind: ComponentKind::ChainFree, codimension: codim(id) });
        }
    }

    let mut m_divs = Vec::with_capacity(divisors.len());
    for id in &divisors {
        let n = dd.multiplicity(id.as_str())?;
        m_divs.push(MDivisor { id: id.clone(), multiplicity: n, weight: m / n });
    }
    let mut branch_contacts = Vec::new();
    for a in branch_leaves(g) {
        if m.is_multiple_of(dd.multiplicity(a.as_str())?) {
            branch_contacts.push(a);
        }
    }
    let min_codimension = if dd.discrepancies.is_some() && !divisors.is_empty() {
        Some(numerics::min_codim(dd, g, m)?)
    } else {
        None
    };

    Ok(ContactReport {
        m,
        blowups: Vec::new(),
        m_divisors: m_divs,
        poset: index.poset(&divisors),
        chains: index.chains,
        components,
        absorbed,
        branch_contacts,
        min_codimension,
    })
}
