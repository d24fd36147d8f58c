//! Decision procedures for complete theories of abelian groups given in a
//! symbolic standard form, together with finite-precision constructions of
//! bi-embeddable non-isomorphic pairs.

pub mod arith;
pub mod cardinal;
pub mod classify;
mod decimal;
pub mod finite_oracle;
pub mod group_spec;
pub mod invariants;
pub mod padic;
pub mod prime;
mod relation_search;
pub mod witness_padic;
pub mod witness_socle;

pub use cardinal::Cardinal;
pub use group_spec::{Entry, ExponentSet, GroupSpec, SummandFamily};
pub use prime::{Prime, PrimeSet};
