use serde::{Deserialize, Serialize};

/// Resource caps for the exact enumerations. Exceeding one is an error, never a truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Largest Gram matrix dimension (number of standard tableaux).
    pub max_basis: u64,
    /// Largest number of terms in a single polytabloid expansion.
    pub max_terms: u64,
    /// Largest total number of term operations for one Gram matrix.
    pub max_ops: u64,
    /// Largest number of admissible colourings enumerated for one graph.
    pub max_colourings: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_basis: 1_000,
            max_terms: 10_000_000,
            max_ops: 10_000_000_000,
            max_colourings: 100_000_000,
        }
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget {
            max_basis: u64::MAX,
            max_terms: u64::MAX,
            max_ops: u64::MAX,
            max_colourings: u64::MAX,
        }
    }
}
