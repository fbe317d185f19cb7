//! Causal team semantics and generalized causal team semantics for
//! interventionist counterfactuals, dependence atoms and global disjunction.

pub mod calculus;
pub mod charform;
pub mod decision;
pub mod error;
pub mod gen;
pub mod intervention;
pub mod model;
pub mod semantics;
pub mod synthesis;
pub mod syntax;

pub use error::{Error, Result};
pub use intervention::InterventionSpec;
pub use model::*;
pub use semantics::{satisfies, Semantics, SatContext, Universe};
pub use syntax::{parse, print, Formula, Language};
