use alloc::string::String;
use alloc::vec::Vec;

use num_rational::BigRational;
use thiserror::Error;

use crate::plumbing::{DivisorId, Incidence, ValidationReport};

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate divisor id {0}")]
    DuplicateId(DivisorId),
    #[error("unknown vertex id {0}")]
    UnknownId(DivisorId),
    #[error("self-loop at {0} is forbidden")]
    SelfLoop(DivisorId),
    #[error("vertex {id}: self-intersection {value} must be <= -1")]
    SelfIntersection { id: DivisorId, value: i64 },
    #[error("vertex {id}: genus {value} must be >= 0")]
    Genus { id: DivisorId, value: i64 },
    #[error("arrow {id}: multiplicity {value} must be >= 1")]
    ArrowMultiplicity { id: DivisorId, value: i64 },
    #[error("invalid graph: {0}")]
    InvalidGraph(ValidationReport),
    #[error("multiplicity system has non-integral solution: {}", fmt_values(.0))]
    NonIntegralMultiplicities(Vec<(DivisorId, BigRational)>),
    #[error("multiplicity system has non-positive solution: {}", fmt_values(.0))]
    NonPositiveMultiplicities(Vec<(DivisorId, BigRational)>),
    #[error("multiplicity of {0} does not fit in 64 bits")]
    MultiplicityOverflow(DivisorId),
    #[error("intersection matrix is singular")]
    SingularMatrix,
    #[error("no multiplicity recorded for {0}")]
    MissingMultiplicity(DivisorId),
    #[error("no discrepancy available for {0}")]
    MissingDiscrepancy(DivisorId),
    #[error("{id} is not a {m}-divisor (N = {multiplicity})")]
    NotMDivisor { id: DivisorId, m: u64, multiplicity: u64 },
    #[error("no {m}-divisor: the contact locus at o is empty")]
    NoMDivisor { m: u64 },
    #[error("not {m}-separating: {}", fmt_incidences(.violations))]
    NotMSeparating { m: u64, violations: Vec<(Incidence, u64)> },
    #[error("not admissible at {}", fmt_ids(.0))]
    NotAdmissible(Vec<DivisorId>),
    #[error("incidence {0} not found")]
    IncidenceNotFound(Incidence),
    #[error("{0} is not an exceptional vertex")]
    NotExceptional(DivisorId),
    #[error("{0} is not a leaf")]
    NotALeaf(DivisorId),
    #[error("{id}: piece {what} is not integral")]
    NonIntegralTopology { id: DivisorId, what: &'static str },
    #[error("{0} has positive genus; piece component count is only a bound")]
    PositiveGenus(DivisorId),
    #[error("continued fraction entry {value} at position {index} must be >= 2")]
    ContinuedFractionEntry { index: usize, value: i64 },
    #[error("continued fraction needs at least one entry")]
    EmptyContinuedFraction,
    #[error("({n}, {q}) is not a cyclic quotient type: need 0 < q < n, gcd(n, q) = 1")]
    CyclicType { n: u64, q: u64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("multiplicities do not satisfy the chain recurrence at position {0}")]
    ChainRecurrence(usize),
    #[error("chain element {id} has self-intersection -1; contract it first")]
    ContractibleChainElement { id: DivisorId },
    #[error("chain multiplicity of {id} is {found}, expected {expected}")]
    ChainMultiplicity { id: DivisorId, expected: u64, found: u64 },
}

fn fmt_ids(ids: &[DivisorId]) -> String {
    let mut out = String::new();
    for (i, id) in ids.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(id.as_str());
    }
    out
}

fn fmt_values(values: &[(DivisorId, BigRational)]) -> String {
    use core::fmt::Write;
    let mut out = String::new();
    for (i, (id, v)) in values.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "{id}={v}");
    }
    out
}

fn fmt_incidences(violations: &[(Incidence, u64)]) -> String {
    use core::fmt::Write;
    let mut out = String::new();
    for (i, (inc, sum)) in violations.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "{inc}:{sum}");
    }
    out
}
