//! Exact model of the free Boolean group `B(C)` over the Cantor set, the
//! retraction `r̂: B(C) → C`, the parity subgroups `H_Γ` that generate a
//! second-countable group topology, and bounded checkers for the
//! continuity witnesses of `r̂`.

pub mod cantor;
pub mod cli;
pub mod group;
pub mod retraction;
pub mod verifier;
pub mod witness;

pub use cantor::{BasicSet, CantorPoint, Digit, ParseError, PrefixRelation, Tail};
pub use group::{Cover, CoverError, GroupElement, Parity};
pub use retraction::{EvenDecomposition, RetractionError};
pub use witness::{Outcome, Verification, WitnessError, WitnessReport};
