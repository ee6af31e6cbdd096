//! Cyclic quotient data of chains of rational curves.
//!
//! A chain `E_1, ..., E_{r-1}` of smooth rational curves with
//! self-intersections `-e_i <= -2` contracts to the cyclic quotient
//! singularity `A^2/μ_n` with `ζ·(x, y) = (ζx, ζ^q y)`, where
//! `n/q = [e_{r-1}, ..., e_1]` is a negative continued fraction.
//!
//! Continued fractions are passed as `e_list = [e_{r-1}, ..., e_1]`
//! (outermost entry first), matching the order in which they are written.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;

use crate::classify;
use crate::error::{Error, Result};
use crate::numerics::DivisorData;
use crate::plumbing::{DivisorId, PlumbingGraph};

fn check_entries(e_list: &[i64]) -> Result<()> {
    if e_list.is_empty() {
        return Err(Error::EmptyContinuedFraction);
    }
    if let Some((index, &value)) = e_list.iter().enumerate().find(|(_, &e)| e < 2) {
        return Err(Error::ContinuedFractionEntry { index, value });
    }
    Ok(())
}

fn check_type(n: u64, q: u64) -> Result<()> {
    if q == 0 || q >= n || n.gcd(&q) != 1 {
        return Err(Error::CyclicType { n, q });
    }
    Ok(())
}

/// Evaluates `e_1 - 1/(e_2 - 1/(... - 1/e_k))` as a reduced fraction `(n, q)`.
pub fn hj_eval(e_list: &[i64]) -> Result<(u64, u64)> {
    check_entries(e_list)?;
    let overflow = || Error::DimensionMismatch(format!("continued fraction {e_list:?} overflows"));
    let mut iter = e_list.iter().rev();
    let mut num = *iter.next().unwrap() as i128;
    let mut den = 1i128;
    for &e in iter {
        let next = (e as i128).checked_mul(num).and_then(|x| x.checked_sub(den)).ok_or_else(overflow)?;
        den = num;
        num = next;
    }
    let g = num.gcd(&den);
    let (n, q) = (num / g, den / g);
    Ok((u64::try_from(n).map_err(|_| overflow())?, u64::try_from(q).map_err(|_| overflow())?))
}

/// The unique expansion of `n/q` with all entries at least 2.
pub fn hj_expand(n: u64, q: u64) -> Result<Vec<i64>> {
    check_type(n, q)?;
    let mut out = Vec::new();
    let (mut a, mut b) = (n, q);
    while b != 0 {
        let e = a.div_ceil(b);
        out.push(e as i64);
        (a, b) = (b, e * b - a);
    }
    Ok(out)
}

/// `n_0 = 0, n_1 = 1, n_{i+1} = e_i n_i - n_{i-1}`, up to `n_r = n`.
pub fn auxiliary_sequence(e_list: &[i64]) -> Result<Vec<u64>> {
    check_entries(e_list)?;
    let mut seq: Vec<i128> = vec![0, 1];
    for &e in e_list.iter().rev() {
        let k = seq.len();
        seq.push(e as i128 * seq[k - 1] - seq[k - 2]);
    }
    seq.into_iter()
        .map(|x| u64::try_from(x).map_err(|_| Error::DimensionMismatch(format!("sequence entry {x} out of range"))))
        .collect()
}

/// Lattice points on the compact boundary of the convex hull of the nonzero
/// lattice points of the cone spanned by `(1, 0)` and `(q, n)`, from
/// `(1, 0)` to `(q, n)`.
///
/// Every cone point is the leftmost cone point of its row plus a multiple
/// of `(1, 0)`, so only the `n + 1` row minima `(ceil(q y / n), y)` (and
/// `(1, 0)` on the axis) can lie on the compact boundary. The hull chain
/// facing the origin is extracted from them with a monotone-chain scan,
/// then every lattice point on each hull edge is inserted. `(n, q) = (1, 1)`
/// is accepted as the smooth cone.
pub fn hull_boundary_points(n: u64, q: u64) -> Result<Vec<(u64, u64)>> {
    if !(n == 1 && q == 1) {
        check_type(n, q)?;
    }
    let (n, q) = (n as i128, q as i128);
    let cross = |o: (i128, i128), a: (i128, i128), b: (i128, i128)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut hull: Vec<(i128, i128)> = Vec::new();
    for y in 0..=n {
        let p = if y == 0 { (1, 0) } else { ((q * y + n - 1) / n, y) };
        // the origin lies to the left of the chain: keep strict right turns
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) >= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    debug_assert_eq!(hull.last(), Some(&(q, n)));

    let mut out = vec![(hull[0].0 as u64, hull[0].1 as u64)];
    for w in hull.windows(2) {
        let (dx, dy) = (w[1].0 - w[0].0, w[1].1 - w[0].1);
        let steps = dx.gcd(&dy);
        for k in 1..=steps {
            out.push(((w[0].0 + k * dx / steps) as u64, (w[0].1 + k * dy / steps) as u64));
        }
    }
    Ok(out)
}

/// Valuations `v^i_j` (rows `i = 0..r`, columns over the points): `v^r_j =
/// q_j`, `v^{r-1}_j = p_j` and `v^{i-1}_j = e_i v^i_j - v^{i+1}_j`.
pub fn valuation_table(e_list: &[i64], points: &[(u64, u64)]) -> Result<Vec<Vec<i64>>> {
    let (n, q) = hj_eval(e_list)?;
    if points.first() != Some(&(1, 0)) || points.last() != Some(&(q, n)) {
        return Err(Error::DimensionMismatch(format!(
            "boundary points must run from (1, 0) to ({q}, {n}) for {e_list:?}"
        )));
    }
    let r = e_list.len() + 1;
    // chain order: e[i] is e_i for i = 1..r-1
    let mut e = vec![0i64];
    e.extend(e_list.iter().rev());
    let mut table = vec![vec![0i64; points.len()]; r + 1];
    for (j, &(p, qj)) in points.iter().enumerate() {
        table[r][j] = qj as i64;
        table[r - 1][j] = p as i64;
        for i in (1..r).rev() {
            table[i - 1][j] = e[i] * table[i][j] - table[i + 1][j];
        }
    }
    if let Some((i, j)) = (0..=r).flat_map(|i| (0..points.len()).map(move |j| (i, j))).find(|&(i, j)| table[i][j] < 0) {
        return Err(Error::DimensionMismatch(format!("negative valuation at row {i}, point {j}")));
    }
    Ok(table)
}

/// Exponents `(a, b)` of the minimal monomial generators `x^a y^b` of the
/// invariant ring of `1/n(1, q)`, from `x^n` to `y^n`.
pub fn invariant_generators(n: u64, q: u64) -> Result<Vec<(u64, u64)>> {
    let e_list = hj_expand(n, q)?;
    let points = hull_boundary_points(n, q)?;
    let table = valuation_table(&e_list, &points)?;
    Ok(points.iter().enumerate().map(|(j, &(_, qj))| (table[0][j] as u64, qj)).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotonicityCheck {
    pub holds: bool,
    /// First `(i, j)` with `v^i_j / N_i < v^{i+1}_j / N_{i+1}`.
    pub first_violation: Option<(usize, usize)>,
}

/// Checks `v^i_j / N_{E_i} >= v^{i+1}_j / N_{E_{i+1}}` for `i = 1..r-1` and
/// every boundary point. `multiplicities` lists `N_{E_1}, ..., N_{E_r}` and
/// must satisfy the chain recurrence with `N_{E_0} = 0`.
pub fn verify_monotonicity(e_list: &[i64], multiplicities: &[u64]) -> Result<MonotonicityCheck> {
    check_entries(e_list)?;
    let r = e_list.len() + 1;
    if multiplicities.len() != r {
        return Err(Error::DimensionMismatch(format!("expected {r} multiplicities, got {}", multiplicities.len())));
    }
    let mut big_n = vec![0i128];
    big_n.extend(multiplicities.iter().map(|&x| x as i128));
    if big_n[1..].iter().any(|&x| x <= 0) {
        return Err(Error::ChainRecurrence(0));
    }
    let mut e = vec![0i128];
    e.extend(e_list.iter().rev().map(|&x| x as i128));
    for i in 1..r {
        if big_n[i - 1] - e[i] * big_n[i] + big_n[i + 1] != 0 {
            return Err(Error::ChainRecurrence(i));
        }
    }
    let (n, q) = hj_eval(e_list)?;
    let points = hull_boundary_points(n, q)?;
    let table = valuation_table(e_list, &points)?;
    for i in 1..r {
        #[allow(clippy::needless_range_loop)]
        for j in 0..points.len() {
            // v^i / N_i >= v^{i+1} / N_{i+1}, cross-multiplied (N > 0)
            if (table[i][j] as i128) * big_n[i + 1] < (table[i + 1][j] as i128) * big_n[i] {
                return Ok(MonotonicityCheck { holds: false, first_violation: Some((i, j)) });
            }
        }
    }
    Ok(MonotonicityCheck { holds: true, first_violation: None })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricChainData {
    /// The chain `E_1 = L, ..., E_r = E_L`.
    pub chain: Vec<DivisorId>,
    /// `e_1, ..., e_{r-1}` in chain order.
    pub coefficients: Vec<i64>,
    pub n: u64,
    /// `0` for a chain with nothing to contract (`r = 1`).
    pub q: u64,
    /// `n_0, ..., n_r`.
    pub sequence: Vec<u64>,
    pub points: Vec<(u64, u64)>,
    /// `v^i_j` for `i = 0..r`.
    pub valuations: Vec<Vec<i64>>,
}

impl ToricChainData {
    /// Continued fraction order `[e_{r-1}, ..., e_1]`.
    pub fn e_list(&self) -> Vec<i64> {
        self.coefficients.iter().rev().copied().collect()
    }

    pub fn from_e_list(e_list: &[i64]) -> Result<Self> {
        let (n, q) = hj_eval(e_list)?;
        let points = hull_boundary_points(n, q)?;
        let valuations = valuation_table(e_list, &points)?;
        Ok(ToricChainData {
            chain: Vec::new(),
            coefficients: e_list.iter().rev().copied().collect(),
            n,
            q,
            sequence: auxiliary_sequence(e_list)?,
            points,
            valuations,
        })
    }
}

/// Cyclic quotient data obtained by contracting all of the chain set of a
/// leaf except its maximal element, checked against the graph's
/// multiplicities (`N_{E_{r-1}} = N_{E_1} q`, `N_{E_r} = N_{E_1} n`).
pub fn chain_to_cyclic(g: &PlumbingGraph, dd: &DivisorData, leaf: &str) -> Result<ToricChainData> {
    let chain = classify::chain_set(g, leaf)?.members;
    let r = chain.len();
    if r == 1 {
        return Ok(ToricChainData {
            chain,
            coefficients: Vec::new(),
            n: 1,
            q: 0,
            sequence: vec![0, 1],
            points: Vec::new(),
            valuations: Vec::new(),
        });
    }
    let mut coefficients = Vec::with_capacity(r - 1);
    for id in &chain[..r - 1] {
        let e = -g.vertex(id.as_str()).unwrap().self_intersection;
        if e < 2 {
            return Err(Error::ContractibleChainElement { id: id.clone() });
        }
        coefficients.push(e);
    }
    let e_list: Vec<i64> = coefficients.iter().rev().copied().collect();
    let mut data = ToricChainData::from_e_list(&e_list)?;
    data.chain = chain;

    let n1 = dd.multiplicity(data.chain[0].as_str())?;
    for (id, expected) in [(&data.chain[r - 2], n1 * data.q), (&data.chain[r - 1], n1 * data.n)] {
        let found = dd.multiplicity(id.as_str())?;
        if found != expected {
            return Err(Error::ChainMultiplicity { id: id.clone(), expected, found });
        }
    }
    Ok(data)
}
