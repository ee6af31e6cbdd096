//! Topology of the pieces of the A'Campo model of the Milnor fiber.
//!
//! The fiber decomposes into a piece over the smooth part `E°` of every
//! divisor and a piece over every intersection point. The piece over an
//! exceptional curve is an unramified `N_E`-fold cover of `E°`; its
//! component count, genus and boundary follow from the multiplicities of the
//! curve and its neighbors by Riemann-Hurwitz.

use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::numerics::DivisorData;
use crate::plumbing::{DivisorId, Incidence, PlumbingGraph};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Piece {
    Vertex(DivisorId),
    Arrow(DivisorId),
    /// One intersection point; endpoints in increasing order.
    Intersection(DivisorId, DivisorId),
}

impl fmt::Display for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Piece::Vertex(id) | Piece::Arrow(id) => write!(f, "{id}"),
            Piece::Intersection(a, b) => write!(f, "{{{a},{b}}}"),
        }
    }
}

/// All components of a piece are homeomorphic; the per-component data is
/// stored once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PieceTopology {
    pub piece: Piece,
    pub components: u64,
    /// `false` when `components` is only known to divide the true count
    /// (exceptional curves of positive genus).
    pub exact: bool,
    pub genus: i64,
    pub boundary: u64,
    /// Euler characteristic of one component, `2 - 2·genus - boundary`.
    pub euler: i64,
}

impl PieceTopology {
    fn cylinders(piece: Piece, count: u64) -> Self {
        PieceTopology { piece, components: count, exact: true, genus: 0, boundary: 2, euler: 0 }
    }

    pub fn total_euler(&self) -> i128 {
        self.components as i128 * self.euler as i128
    }
}

/// gcd of `N_E` and the multiplicities of its neighbors; equal to the
/// number of components for genus zero, a multiple of it otherwise.
pub fn piece_component_count(g: &PlumbingGraph, dd: &DivisorData, id: &str) -> Result<(u64, bool)> {
    let vertex = g.vertex(id).ok_or_else(|| unknown(g, id))?;
    let mut c = dd.multiplicity(id)?;
    for nb in g.neighbors(id)? {
        c = c.gcd(&dd.multiplicity(nb.as_str())?);
    }
    Ok((c, vertex.genus == 0))
}

fn unknown(g: &PlumbingGraph, id: &str) -> Error {
    if g.is_arrow(id) {
        Error::NotExceptional(id.into())
    } else {
        Error::UnknownId(id.into())
    }
}

/// Topology of the piece over a vertex or an arrow.
///
/// For an exceptional curve with `c` components, valence `v` and
/// `S = Σ gcd(N_E, N_E')` over its intersection points, each component has
/// genus `1 + (N_E(v + 2g - 2) - S) / (2c)` and `S / c` boundary circles.
/// For positive genus `c` is taken to be the gcd and the result is flagged
/// inexact. Arrow pieces are `v = 1` cylinders.
pub fn piece_topology(g: &PlumbingGraph, dd: &DivisorData, id: &str) -> Result<PieceTopology> {
    if g.is_arrow(id) {
        return Ok(PieceTopology::cylinders(Piece::Arrow(id.into()), 1));
    }
    let (c, exact) = piece_component_count(g, dd, id)?;
    let vertex = g.vertex(id).unwrap();
    let n = dd.multiplicity(id)? as i128;
    let neighbors = g.neighbors(id)?;
    let valence = neighbors.len() as i128;
    let mut boundary_total: i128 = 0;
    for nb in &neighbors {
        boundary_total += dd.multiplicity(id)?.gcd(&dd.multiplicity(nb.as_str())?) as i128;
    }
    let c_big = c as i128;
    let numerator = n * (valence + 2 * vertex.genus as i128 - 2) - boundary_total;
    if numerator % (2 * c_big) != 0 {
        return Err(Error::NonIntegralTopology { id: id.into(), what: "genus" });
    }
    if boundary_total % c_big != 0 {
        return Err(Error::NonIntegralTopology { id: id.into(), what: "boundary" });
    }
    let genus = 1 + numerator / (2 * c_big);
    let boundary = boundary_total / c_big;
    if genus < 0 {
        return Err(Error::NonIntegralTopology { id: id.into(), what: "genus" });
    }
    Ok(PieceTopology {
        piece: Piece::Vertex(id.into()),
        components: c,
        exact,
        genus: genus as i64,
        boundary: boundary as u64,
        euler: (2 - 2 * genus - boundary) as i64,
    })
}

/// The piece over an intersection point: `gcd(N_E, N_E')` cylinders.
pub fn edge_piece(g: &PlumbingGraph, dd: &DivisorData, a: &str, b: &str) -> Result<PieceTopology> {
    let incidence = if g.is_arrow(a) {
        Incidence::arrow(b, a)
    } else if g.is_arrow(b) {
        Incidence::arrow(a, b)
    } else {
        Incidence::edge(a, b)
    };
    if !g.incidences().contains(&incidence) {
        return Err(Error::IncidenceNotFound(incidence));
    }
    let count = dd.multiplicity(a)?.gcd(&dd.multiplicity(b)?);
    let (x, y) = incidence.pair();
    Ok(PieceTopology::cylinders(Piece::Intersection(x.clone(), y.clone()), count))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerCheck {
    /// Sum of the Euler characteristics of all pieces.
    pub from_pieces: i128,
    /// `Σ N_E (2 - 2g_E - v_E)` over the exceptional curves.
    pub from_formula: i128,
}

impl EulerCheck {
    pub fn equal(&self) -> bool {
        self.from_pieces == self.from_formula
    }
}

/// Compares the Euler characteristic of the fiber computed piece by piece
/// with the A'Campo count. Requires every exceptional curve to have genus 0.
pub fn euler_check(g: &PlumbingGraph, dd: &DivisorData) -> Result<EulerCheck> {
    let mut from_pieces = 0i128;
    let mut from_formula = 0i128;
    for v in g.vertices() {
        if v.genus > 0 {
            return Err(Error::PositiveGenus(v.id.clone()));
        }
        from_pieces += piece_topology(g, dd, v.id.as_str())?.total_euler();
        let n = dd.multiplicity(v.id.as_str())? as i128;
        from_formula += n * (2 - 2 * v.genus as i128 - g.valence(v.id.as_str())? as i128);
    }
    // arrow pieces and intersection pieces are cylinders
    Ok(EulerCheck { from_pieces, from_formula })
}

/// Divisors whose piece is fixed by the m-th power of the monodromy: those
/// with `N_E | m`, vertices and arrows alike, sorted.
pub fn fixed_point_pieces(g: &PlumbingGraph, dd: &DivisorData, m: u64) -> Result<Vec<DivisorId>> {
    let mut out = Vec::new();
    for id in g.vertex_ids().chain(g.arrows().iter().map(|a| &a.id)) {
        if m.is_multiple_of(dd.multiplicity(id.as_str())?) {
            out.push(id.clone());
        }
    }
    out.sort();
    Ok(out)
}

/// Every piece of the decomposition: vertices, arrows, then intersection points.
pub fn all_pieces(g: &PlumbingGraph, dd: &DivisorData) -> Result<Vec<PieceTopology>> {
    let mut out = Vec::new();
    for id in g.vertex_ids() {
        out.push(piece_topology(g, dd, id.as_str())?);
    }
    let mut arrows: Vec<&DivisorId> = g.arrows().iter().map(|a| &a.id).collect();
    arrows.sort();
    for id in arrows {
        out.push(piece_topology(g, dd, id.as_str())?);
    }
    for inc in g.incidences() {
        let (a, b) = inc.pair();
        out.push(edge_piece(g, dd, a.as_str(), b.as_str())?);
    }
    Ok(out)
}
