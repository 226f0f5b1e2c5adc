//! Simulation of an n-path interferometer with path detectors and a quantum
//! memory, the complementarity quantities it supports (visibility, path
//! distinguishability, mixedness, entanglement), and checkers for the
//! duality/triality relations between them.
//!
//! The pipeline: build an input state ρ_AB ([`states`]), couple it to the
//! path detectors ([`interferometer`]), compute scalar measures on the
//! reduced outputs ([`measures`]) plus the detector-state discrimination
//! quantities ([`discrimination`]), and assemble per-relation verdicts
//! ([`relations`]).

pub mod discrimination;
pub mod error;
pub mod interferometer;
pub mod measures;
pub mod qmat;
pub mod relations;
pub mod sampling;
pub mod states;
pub mod tolerances;

pub use error::{Error, Result};
pub use interferometer::{apply_detectors, build_tripartite, DetectorConfig, InterferometerOutput};
pub use qmat::{CMatrix, HermitianMatrix, C64};
pub use relations::{ComplementarityReport, InputState, PdMode, RelationId};
pub use states::{DensityMatrix, PureBipartite};
pub use tolerances::Tolerances;
