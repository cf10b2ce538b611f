//! Expansion machinery for `SL_d` over residue rings `O_K/(q)` of number-field
//! integers: residue arithmetic, finite matrix groups, Cayley spectra, exact
//! random walks, product-set growth and archimedean freeness certificates.
//!
//! Numeric code is generic over [`Real`] (`f32` or `f64`); exact counting
//! uses big integers and rationals. The aliases below fix the scalar.

pub mod algebra;
pub mod archimedean;
pub mod groups;
pub mod growth;
pub mod scalar;
pub mod spectral;
pub mod walks;

pub use scalar::Real;

pub type CayleyOperatorF64 = spectral::CayleyOperator<f64>;
pub type CayleyOperatorF32 = spectral::CayleyOperator<f32>;
pub type SpectrumReportF64 = spectral::SpectrumReport<f64>;
pub type SpectrumReportF32 = spectral::SpectrumReport<f32>;
pub type IterativeOptionsF64 = spectral::IterativeOptions<f64>;
pub type IterativeOptionsF32 = spectral::IterativeOptions<f32>;
pub type ExactMeasure = walks::ExactMeasure;
pub type FloatMeasure = walks::FloatMeasure;
