//! Certified approximation of eigenvalue limit sets of banded Toeplitz
//! matrices.
//!
//! As the truncation size of a banded Toeplitz matrix grows, its eigenvalues
//! accumulate on a limit set in the complex plane. Dense eigensolvers cannot
//! chase that limit: rounding perturbs the extreme eigenvalues exponentially
//! (the pseudospectrum of a large truncation is far larger than its spectrum).
//! This crate instead computes the limit set geometrically, as a finite
//! intersection of scaled-spectrum polygons, together with
//!
//! * a superset built from rigorously fattened polygons,
//! * a subset of certified points found by an algebraic root condition, and
//! * a two-sided Hausdorff-distance bound between the two.
//!
//! Modules follow the pipeline: [`symbol`] defines banded Laurent symbols,
//! [`roots`] the polynomial root finder, [`geometry`] the exact polygon
//! boolean core, [`spectrum`] discretized scaled spectra, [`limitset`] the
//! intersection drivers, [`algebraic`] the certified subset, and
//! [`hausdorff`] the distance certificate.

pub mod algebraic;
pub mod error;
pub mod geometry;
pub mod hausdorff;
pub mod limitset;
pub mod roots;
pub mod spectrum;
pub mod symbol;

pub use algebraic::SubsetPoints;
pub use error::{Error, Result};
pub use geometry::{FixedPointFrame, Pt, Region};
pub use hausdorff::{distance_bound, error_certificate, Certification, ErrorCertificate};
pub use limitset::{LimitSetResult, RhoSampling, SweepConfig};
pub use roots::RootSet;
pub use symbol::{CurvatureBound, LaurentSymbol, RhoInterval};
