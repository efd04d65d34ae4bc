//! Named sources of partial geometric designs.

pub mod geometry;
pub mod group;
pub mod hamming;
pub mod km;
pub mod misc;
pub mod srg;
pub mod td;

use thiserror::Error;

pub use geometry::{affine_pg, symplectic_gq};
pub use group::{
    delta, develop, develop_family, direct_product_lift, is_pgds, pgds_search, FiniteGroup, GroupRingElement,
    NotPgdf, NotPgds,
};
pub use hamming::hamming_fusion;
pub use km::{kramer_mesner, OrbitSystem};
pub use misc::{adhoc_grid_design, pair_design_expanded};
pub use srg::{srg_neighborhood_design, SrgError, SrgParams};
pub use td::transversal_design;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("no construction path for {0}")]
    NoConstructionPath(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("unsupported scale: {0}")]
    UnsupportedScale(String),
}
