//! Floating-point scalars used by the numeric parts of the crate.

/// `f32` or `f64`: anything nalgebra can eigensolve and we can print.
pub trait Real:
    nalgebra::RealField + Copy + num_traits::ToPrimitive + num_traits::FromPrimitive + Send + Sync
{
    fn lit(x: f64) -> Self {
        <Self as num_traits::FromPrimitive>::from_f64(x).expect("finite literal")
    }

    fn as_f64(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}
