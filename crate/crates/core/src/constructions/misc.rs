//! The expanded pair design and the two-group ad hoc construction.

use super::group::combinations;
use super::ConstructionError;
use crate::incidence::{tensor_expand, IncidenceStructure};

/// All 2-subsets of `[0, v)`.
pub fn pair_design(v: usize) -> IncidenceStructure {
    IncidenceStructure::new(v, combinations(v, 2)).expect("pairs")
}

/// The pair design with every point cloned once; clone of `p` is `p + v`.
pub fn pair_design_expanded(v: usize) -> Result<IncidenceStructure, ConstructionError> {
    if v < 3 {
        return Err(ConstructionError::InvalidParameters(format!("pair design needs v >= 3, got {v}")));
    }
    Ok(tensor_expand(&pair_design(v), 2, 1))
}

/// Two groups of `m` points, the even and the odd indices; the blocks are
/// `(G1 - {p_i}) ∪ (G2 - {q_j})` for all i, j.
pub fn adhoc_grid_design(m: usize) -> Result<IncidenceStructure, ConstructionError> {
    if m < 3 {
        return Err(ConstructionError::InvalidParameters(format!("grid design needs m >= 3, got {m}")));
    }
    let mut blocks = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            let block = (0..m)
                .filter(|&a| a != i)
                .map(|a| 2 * a)
                .chain((0..m).filter(|&b| b != j).map(|b| 2 * b + 1))
                .collect();
            blocks.push(block);
        }
    }
    Ok(IncidenceStructure::new(2 * m, blocks).expect("grid blocks"))
}
