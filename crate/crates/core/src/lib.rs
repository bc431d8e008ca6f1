//! Exact diagonalization and discrete-WKB asymptotics for inhomogeneous
//! free-fermion (XX) chains.

pub mod analytic;
pub mod error;
pub mod exact;
pub mod numerics;
pub mod profiles;
pub mod report;
pub mod wkb;

pub use error::{Error, Result};

/// Library version, recorded in output headers.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub use exact::{
    correlation_matrix, density_exact, diagonalize, entanglement_entropy, CorrelationMatrix,
    EntropyKind, FilledState, Localization, SingleParticleSpectrum,
};
pub use numerics::Tolerance;
pub use profiles::{
    load_custom, make_builtin, ContinuumProfile, FamilyParameters, FamilyTag, LatticeProfile,
    ProfileRecord,
};
pub use report::ComparisonReport;
pub use wkb::{DensityProfile, Region, RegionKind, Well, WellDecomposition, WellSelector};
