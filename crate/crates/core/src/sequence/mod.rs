//! Eventually-periodic matrix sequences modelling the bidual of `c ⊗ M_m`,
//! the closed faces used as examples, and their semicontinuity criteria.

pub mod element;
pub mod examples;
pub mod face;
pub mod obstruction;
pub mod oracle;
pub mod suites;
pub mod verdict;

pub use element::SeqMatrixElement;
pub use examples::{default_tilted_plane, tilted_line_grid, tilted_plane_example, TiltedPlaneExample};
pub use face::{face_functional_calculus, FaceModel};
pub use obstruction::{forced_sequence, verify_rank_one_obstruction, DeltaSchedule, InfeasibilityWitness};
pub use oracle::{testnet_oracle, OracleVerdict, TestnetGrid};
pub use suites::{block_usc_suite, BlockCriterion, SuiteReport, SuiteViolation};
pub use verdict::{
    bidual_usc_gap, classify, classify_tilted_line, classify_tilted_plane, cluster_points, is_in_compressed_algebra,
    lsc_on_blockface, usc_in_bidual, usc_on_blockface, SemicontinuityVerdict, VerdictCertificate,
};
