//! Crystals of bipartitions for the Fock space of level two, and the
//! explicit bijections between their vertex sets.

pub mod bijection;
pub mod canonical;
pub mod crystal;
pub mod error;
pub mod hecke;
pub mod node;
pub mod partition;
pub mod symbol;

pub use bijection::{plan, psi, psi_recursive, ChargeTarget, PsiPlan, Step};
pub use canonical::{degree_max_term, is_sl_infinity_member, pair_orbit, CanonicalElement};
pub use error::{Error, Result};
pub use hecke::{basic_set_charge, HeckeParams};
pub use node::{compare_nodes, residue, Charge, Modulus, NodeCoord, NodeOrder, Residue};
pub use partition::{Bipartition, Partition};
pub use symbol::{from_symbol, to_symbol, upsilon, upsilon_inverse, Symbol};
