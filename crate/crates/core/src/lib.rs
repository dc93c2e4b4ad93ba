//! Exact Hoffman constants of linear systems.
//!
//! The Hoffman constant `H` of a system bounds the distance from a point to
//! the solution set by the size of its constraint violation. This crate
//! computes `H` for polyhedral norms by searching over index sets of the
//! constraints: sets on which the system is (relatively) surjective carry a
//! finite value obtained from one LP family, and non-surjectivity
//! certificates prune the search. The maximum over a covering family of
//! surjective sets is `H`. For Euclidean norms, where no exact LP exists,
//! [`ellipsoid`] brackets each value within a known factor.
//!
//! ```
//! use hoffman_core::{hoffman_inequalities, Algorithm, Matrix, NormConfig, NormTag};
//!
//! let a = Matrix::from_rows(&[[1.0, 0.0], [0.0, 1.0], [-1.0, -1.0]]);
//! let cfg = NormConfig::new(NormTag::LInf, NormTag::LInf);
//! let report = hoffman_inequalities(&a, cfg, Algorithm::Worklist).unwrap();
//! assert!((report.h - 2.0).abs() < 1e-9);
//! ```

pub mod certkit;
pub mod ellipsoid;
pub mod engine;
pub mod error;
pub mod linalg;
pub mod polylp;
pub mod rng;

pub use certkit::{
    algorithm1_run, algorithm2_run, verify_joint_certificates, Algorithm, CertificateLedger, IndexSet,
    LedgerDocument,
};
pub use ellipsoid::{barrier_center, bracket_hoffman_l2, dikin_bounds, BarrierCenter, DikinBounds};
pub use engine::{
    compute, facial_distance, hoffman_inequalities, hoffman_mixed, hoffman_mixed_easy_equations,
    hoffman_mixed_easy_inequalities, hoffman_restricted, tight_witness, HoffmanReport, ProblemSpec,
    TightWitness, Variant,
};
pub use error::{Error, Result};
pub use linalg::{Matrix, NormTag};
pub use polylp::{NormConfig, SurjectivityOutcome};
pub use rng::SplitMix64;
