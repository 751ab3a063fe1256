//! Mellin-transform calculus for nonnegative laws: size biasing, the
//! stationary-excess semigroup, `t`-monotone densities and the
//! log-normal limit of normalized biased laws.

pub mod check;
pub mod dist;
pub mod error;
pub mod excess;
pub mod ks;
pub mod levy;
pub mod limit;
pub mod mellin;
pub mod pchip;
pub mod quad;
pub mod rng;
pub mod size_bias;
pub mod special;
pub mod suite;
pub mod tmono;

pub use check::CheckResult;
pub use dist::{DistributionSpec, MellinDomain, SampleBatch};
pub use error::{Error, Result};
pub use levy::{Jumps, LevySpec};
pub use limit::{CEstimate, ConvergenceReport, LimitLaw, NormalizationCurve};
pub use mellin::{LogMellinProfile, MellinMethod, MellinValue};
