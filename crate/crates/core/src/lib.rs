//! Finite commutative Moufang loops.
//!
//! Loops are Cayley tables over `0..n` with the identity at index 0. On top
//! of the table sit the associator calculus, subloop lattices, central and
//! derived series, and a symbolic layer for loops of the form
//! (quasicyclic 3-groups) × (finite loop).

pub mod associator;
pub mod catalog;
pub mod error;
pub mod limits;
pub mod mask;
pub mod sampling;
pub mod series;
pub mod subloop;
pub mod symbolic;
pub mod table;
pub mod theorems;

pub use associator::{check_identities, check_inner_automorphism, AssociatorWitness, IdentityId, IdentityReport};
pub use catalog::{build, cml81, fixture_non_moufang, load, save, ConstructionSpec};
pub use error::{Error, Result};
pub use limits::Limits;
pub use mask::SubloopMask;
pub use sampling::Coverage;
pub use series::{ClassPredicateResult, ClassValue, SeriesKind, SeriesReport};
pub use subloop::{
    all_subloops, centralizer, centre, cosets, direct_product, generated_subloop, is_associative_subloop, is_normal,
    p_components, quotient, CosetPartition,
};
pub use symbolic::{classify, ClassificationReport, SymbolicCml};
pub use table::{verify_cml, Element, LoopTable, VerificationReport};
