//! Partial geometric designs: exact construction, verification, spectra,
//! circulant feasibility and realization search.

pub mod algebra;
pub mod arith;
pub mod catalog;
pub mod constructions;
pub mod feasibility;
pub mod incidence;
pub mod iso;
pub mod search;
pub mod spectra;

pub use algebra::{classify, concurrence_type, derive_params, verify_pgd, FamilyTag, NotPgd, PgdParams};
pub use incidence::{
    complement, concurrence, dual, flag_count, multiset_union, tensor_expand, ConcurrenceMatrix,
    IncidenceStructure,
};
pub use iso::is_isomorphic;
pub use spectra::{circulant_eigenvalues, power_sums, verify_three_eigenvalues, CirculantRow, ExactSpectrum};
pub use search::{count_up_to_iso, realize, verify_witness, SearchMode, SearchOutcome, SearchTask};
