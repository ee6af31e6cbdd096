//! Irreducible components of contact loci of curve germs on surface germs,
//! computed from the decorated dual graph of an embedded resolution.
//!
//! The crate is `no_std` and only needs `alloc`. Reading and writing graph
//! documents, DOT export and the command-line front end live in the
//! `contact-loci` companion crate.
//!
//! Module map:
//!
//! * [`plumbing`]: the decorated dual graph, its intersection matrix and
//!   validation (including exact negative-definiteness).
//! * [`numerics`]: divisor multiplicities, discrepancies over a smooth
//!   ambient surface and contact-locus codimensions.
//! * [`refine`]: blowups of intersection points, m-separation and
//!   admissibility.
//! * [`classify`]: leaves, chain sets, m-divisors, the irreducible
//!   components and their containment poset.
//! * [`fiber`]: topology of the pieces of the A'Campo Milnor fiber.
//! * [`toric`]: cyclic quotient data attached to chains (negative continued
//!   fractions, hull boundary points, invariant monomials, valuations).
#![no_std]

extern crate alloc;

pub mod classify;
pub mod error;
pub mod fiber;
pub mod linalg;
pub mod numerics;
pub mod plumbing;
pub mod refine;
pub mod toric;

pub use error::{Error, Result};
pub use num_bigint::BigInt;
pub use num_rational::BigRational;
pub use plumbing::{Arrow, DivisorId, ExceptionalVertex, Incidence, PlumbingGraph};
