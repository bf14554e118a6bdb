//! Invariants of Lie algebras given by structure constants: subalgebra
//! chains, central splitting, direct-sum decomposition, radicals,
//! derivations, formal invariants and fingerprints.

mod derivations;
mod fingerprint;
mod invariants;
mod series;
mod structure;

pub use derivations::{der_tower, der_tower_bounded, derivation_algebra, is_derivation, DerivationAlgebra};
pub use fingerprint::{fingerprint, fingerprint_with, Fingerprint, FingerprintOptions};
pub use invariants::{apply_generator, formal_invariant_count, verify_casimir, verify_isomorphism};
pub use series::{
    bracket_span, center, centralizer_modulo, derived_algebra, derived_series, is_ideal, is_nilpotent,
    is_nilpotent_matrix, is_nilpotent_subalgebra, is_solvable, is_subalgebra, lower_central_series,
    upper_central_series, Series,
};
pub use structure::{
    centroid, centroid_semisimple_dim, decompose, homogeneous_grading, is_semisimple, nilradical, radical,
    split_central, CentralSplit, Decomposition, Nilradical,
};
