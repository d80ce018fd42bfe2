//! Capacity of electromagnetic communication between parallel linear
//! source/destination regions.
//!
//! The crate is organized as a pipeline:
//! Green kernel ([`green`]) → wavenumber spectra ([`spectrum`]) →
//! continuous water-filling capacity ([`waterfill`]), with discrete
//! counterparts for sampled fields ([`sampled`]), a Mercer-expansion route
//! ([`mercer`]), and the finite/infinite mutual-information bound chain
//! ([`bounds`]). Everything rests on the self-contained numerical kernel in
//! [`numerics`].
//!
//! All algorithms are generic over the scalar type (`f32` or `f64`) via the
//! [`real::Real`] trait; concrete `f64` aliases live at the crate root.

pub mod bounds;
pub mod error;
pub mod green;
pub mod mercer;
pub mod numerics;
pub mod real;
pub mod sampled;
pub mod spectrum;
pub mod waterfill;

pub use error::{Error, Result};
pub use real::Real;

/// Concrete double-precision aliases for the main public types. These are
/// what most callers want; the generic forms exist for f32 experimentation.
pub type PhysicalScene64 = green::PhysicalScene<f64>;
pub type WavenumberGrid64 = spectrum::WavenumberGrid<f64>;
pub type TransferSpectrum64 = spectrum::TransferSpectrum<f64>;
pub type SpectralDensity64 = spectrum::SpectralDensity<f64>;
pub type HermitianMatrix64 = numerics::HermitianMatrix<f64>;
pub type WaterfillResult64 = waterfill::WaterfillResult<f64>;
pub type MercerSpectrum64 = mercer::MercerSpectrum<f64>;
pub type SamplingLayout64 = sampled::SamplingLayout<f64>;
pub type ChainCheck64 = bounds::ChainCheck<f64>;

/// Single-precision counterparts.
pub type PhysicalScene32 = green::PhysicalScene<f32>;
pub type WavenumberGrid32 = spectrum::WavenumberGrid<f32>;
pub type TransferSpectrum32 = spectrum::TransferSpectrum<f32>;
pub type SpectralDensity32 = spectrum::SpectralDensity<f32>;
pub type HermitianMatrix32 = numerics::HermitianMatrix<f32>;
pub type WaterfillResult32 = waterfill::WaterfillResult<f32>;
pub type MercerSpectrum32 = mercer::MercerSpectrum<f32>;
pub type SamplingLayout32 = sampled::SamplingLayout<f32>;
pub type ChainCheck32 = bounds::ChainCheck<f32>;
