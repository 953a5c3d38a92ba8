//! Schaper numbers of partitions.
//!
//! The Gram-matrix oracle in [`gram`] is the ground truth; [`colouring`] recomputes inner
//! products through colouring graphs, [`classify`] collects the combinatorial bounds, and
//! [`sum_formula`] turns a Schaper number into bounds on decomposition numbers.

pub mod budget;
pub mod classify;
pub mod colouring;
pub mod error;
pub mod gram;
pub mod io;
pub mod partition;
pub mod polytabloid;
pub mod sum_formula;
pub mod sweep;
pub mod tableau;
pub mod valuation;

pub use error::{Error, Result};
pub use gram::{schaper_number, GramMatrix, Oracle, OracleResult};
pub use partition::{james_bounds, Hook, Partition, SingularityWindow};
pub use valuation::{valuation, Prime, Valuation};
