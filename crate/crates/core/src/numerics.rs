//! Multiplicities of the total transform, discrepancies and codimensions.
//!
//! Multiplicities come from principality of the curve: the total transform
//! has zero intersection with every exceptional curve, which is the linear
//! system `M·N = -b` with `M` the intersection matrix and `b` the arrow
//! multiplicities at each vertex. Everything is solved over the rationals.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::linalg;
use crate::plumbing::{DivisorId, PlumbingGraph};
use crate::refine;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmbientMode {
    /// Ambient surface smooth at the base point; discrepancies are computed.
    Smooth,
    /// Mather discrepancies supplied with the graph.
    UserSuppliedDiscrepancies,
    MultiplicitiesOnly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorData {
    /// `N_E` for every vertex and arrow.
    pub multiplicities: BTreeMap<DivisorId, u64>,
    /// Discrepancies of the exceptional vertices, when known.
    pub discrepancies: Option<BTreeMap<DivisorId, BigRational>>,
    pub ambient_mode: AmbientMode,
}

impl DivisorData {
    pub fn from_multiplicities(multiplicities: BTreeMap<DivisorId, u64>) -> Self {
        DivisorData { multiplicities, discrepancies: None, ambient_mode: AmbientMode::MultiplicitiesOnly }
    }

    pub fn with_discrepancies(mut self, discrepancies: BTreeMap<DivisorId, BigRational>, mode: AmbientMode) -> Self {
        self.discrepancies = Some(discrepancies);
        self.ambient_mode = mode;
        self
    }

    pub fn multiplicity(&self, id: &str) -> Result<u64> {
        self.multiplicities.get(id).copied().ok_or_else(|| Error::MissingMultiplicity(id.into()))
    }

    pub fn discrepancy(&self, id: &str) -> Result<&BigRational> {
        self.discrepancies
            .as_ref()
            .and_then(|d| d.get(id))
            .ok_or_else(|| Error::MissingDiscrepancy(id.into()))
    }

    /// Vertices at which the total transform fails to be orthogonal,
    /// i.e. `e_E·N_E + Σ N_neighbors != 0`. Empty when consistent.
    pub fn orthogonality_defects(&self, g: &PlumbingGraph) -> Vec<DivisorId> {
        let mut bad = Vec::new();
        for v in g.vertices() {
            let total = (|| -> Option<i128> {
                let mut t = v.self_intersection as i128 * *self.multiplicities.get(&v.id)? as i128;
                for n in g.neighbors(v.id.as_str()).ok()? {
                    t += *self.multiplicities.get(n)? as i128;
                }
                Some(t)
            })();
            if total != Some(0) {
                bad.push(v.id.clone());
            }
        }
        for a in g.arrows() {
            if self.multiplicities.get(&a.id).map(|&n| n as i64) != Some(a.multiplicity) {
                bad.push(a.id.clone());
            }
        }
        bad.sort();
        bad
    }
}

fn big_matrix(g: &PlumbingGraph) -> Vec<Vec<BigInt>> {
    g.intersection_matrix()
        .into_iter()
        .map(|row| row.into_iter().map(BigInt::from).collect())
        .collect()
}

fn require_valid(g: &PlumbingGraph) -> Result<()> {
    let report = g.validate();
    if report.passed() {
        Ok(())
    } else {
        Err(Error::InvalidGraph(report))
    }
}

/// Solves for the multiplicities `N_E` of the total transform.
pub fn compute_multiplicities(g: &PlumbingGraph) -> Result<DivisorData> {
    require_valid(g)?;
    let rhs: Vec<BigRational> = g
        .vertices()
        .iter()
        .map(|v| BigRational::from_integer(BigInt::from(-g.arrow_weight(v.id.as_str()))))
        .collect();
    let solution = linalg::solve(&big_matrix(g), &rhs).ok_or(Error::SingularMatrix)?;
    let values: Vec<(DivisorId, BigRational)> =
        g.vertices().iter().map(|v| v.id.clone()).zip(solution).collect();

    if values.iter().any(|(_, x)| !x.is_integer()) {
        return Err(Error::NonIntegralMultiplicities(values));
    }
    if values.iter().any(|(_, x)| !x.is_positive()) {
        return Err(Error::NonPositiveMultiplicities(values));
    }
    let mut multiplicities = BTreeMap::new();
    for (id, x) in values {
        let n = x.to_integer().to_u64().ok_or_else(|| Error::MultiplicityOverflow(id.clone()))?;
        multiplicities.insert(id, n);
    }
    for a in g.arrows() {
        multiplicities.insert(a.id.clone(), a.multiplicity as u64);
    }
    Ok(DivisorData::from_multiplicities(multiplicities))
}

/// Discrepancies `k_E` of the exceptional curves when the ambient surface is
/// smooth: the relative canonical divisor `Σ k_E E` satisfies adjunction
/// `K·E = 2g_E - 2 - E·E` on every exceptional curve.
pub fn compute_discrepancies(g: &PlumbingGraph) -> Result<BTreeMap<DivisorId, BigRational>> {
    require_valid(g)?;
    let rhs: Vec<BigRational> = g
        .vertices()
        .iter()
        .map(|v| BigRational::from_integer(BigInt::from(2 * v.genus - 2 - v.self_intersection)))
        .collect();
    let solution = linalg::solve(&big_matrix(g), &rhs).ok_or(Error::SingularMatrix)?;
    Ok(g.vertices().iter().map(|v| v.id.clone()).zip(solution).collect())
}

/// Multiplicities plus discrepancies for a smooth ambient surface.
pub fn smooth_divisor_data(g: &PlumbingGraph) -> Result<DivisorData> {
    let dd = compute_multiplicities(g)?;
    let k = compute_discrepancies(g)?;
    Ok(dd.with_discrepancies(k, AmbientMode::Smooth))
}

/// Codimension `m(k_E + 1)/N_E` of the closure of the arcs with contact `m`
/// lifting to `E`.
pub fn codimension(dd: &DivisorData, m: u64, id: &str) -> Result<BigRational> {
    let n = dd.multiplicity(id)?;
    if !m.is_multiple_of(n) {
        return Err(Error::NotMDivisor { id: id.into(), m, multiplicity: n });
    }
    let k = dd.discrepancy(id)?;
    Ok((k + BigRational::one()) * BigRational::new(BigInt::from(m), BigInt::from(n)))
}

/// Codimension of the whole contact locus: the minimum of [`codimension`]
/// over the m-divisors.
pub fn min_codim(dd: &DivisorData, g: &PlumbingGraph, m: u64) -> Result<BigRational> {
    let sep = refine::is_m_separating(g, dd, m)?;
    if !sep.separating {
        return Err(Error::NotMSeparating { m, violations: sep.violations });
    }
    let mut best: Option<BigRational> = None;
    for v in g.vertices() {
        let n = dd.multiplicity(v.id.as_str())?;
        if !m.is_multiple_of(n) {
            continue;
        }
        let c = codimension(dd, m, v.id.as_str())?;
        if best.as_ref().is_none_or(|b| c < *b) {
            best = Some(c);
        }
    }
    best.ok_or(Error::NoMDivisor { m })
}
