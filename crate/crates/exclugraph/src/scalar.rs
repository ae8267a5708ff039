//! Scalar abstraction for the numerical kernels.
//!
//! Everything downstream of the graph layer (eigendecomposition, the
//! interior-point solver, the simplex solver, bounds and quantum-set
//! computations) is generic over [`Real`], so the same code runs in `f32`
//! or `f64`. The crate root exports `f64` aliases for the common case.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

/// Floating-point scalar usable by the solvers: `f32` or `f64`.
pub trait Real:
    num_traits::Float
    + num_traits::FromPrimitive
    + num_traits::NumAssign
    + Sum
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` constant (tolerances, step factors) into `Self`.
    fn real(v: f64) -> Self {
        Self::from_f64(v).expect("constant representable in scalar type")
    }

    /// Reads the scalar back as `f64` for reporting and diagnostics.
    fn to_f64_lossy(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}
