//! Exact-arithmetic computations with persistence modules over continuous
//! posets.
//!
//! The crate is organized around a handful of layers:
//!
//! * [`poset`] — order and way-below oracles for ℝⁿ (standard, cone and
//!   orthant orders), finite posets and products, all over exact rationals;
//! * [`region`] — staircase up-sets and down-sets given by generator
//!   antichains, with Scott interiors, closures, boundaries and meagerness
//!   tests;
//! * [`linalg`] — a dense exact linear algebra kernel (rank, kernels, images,
//!   quotients) over ℚ or a prime field;
//! * [`cell`] — constructible persistence modules over the rational-grid
//!   stratification of ℝⁿ, with indicator and grid-encoded constructions,
//!   sections and cosections;
//! * [`functors`] — the lower/upper semi-continuous replacements (overline
//!   and underline), Scott radical/socle/top and their first derived
//!   functors, ephemerality and semi-continuity tests;
//! * [`metrics`] — superlinear translation families, interleaving
//!   certificates and exact interleaving distances for indicator classes;
//! * [`verify`] — seeded property suites exercising the structural theorems
//!   behind the functor calculus.

pub mod cell;
pub mod error;
pub mod finmod;
pub mod functors;
pub mod json;
pub mod linalg;
pub mod metrics;
pub mod poset;
pub mod rat;
pub mod region;
pub mod verify;

pub use cell::{CellComplex, CellModule, CellMorphism, GridModule};
pub use error::Error;
pub use linalg::RatMatrix;
pub use metrics::{DistanceResult, DistanceValue, InterleavingCertificate, SuperlinearFamily};
pub use poset::{Point, PosetSpec};
pub use rat::Rat;
pub use region::{ConvexRegion, DownSetRegion, Flavor, Region, UpSetRegion};
pub use verify::VerificationReport;

pub type Result<T> = std::result::Result<T, Error>;
