//! Scalar abstraction so the geometric and protocol kernels work at any
//! floating-point width. Concrete aliases for f64 live at the crate root.

use core::fmt::{Debug, Display};
use core::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar usable throughout the geometry and protocol code.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts an f64 literal; panics only if the value is not representable,
    /// which cannot happen for the compile-time constants used in this crate.
    #[inline]
    fn lit(value: f64) -> Self {
        Self::from_f64(value).expect("literal must be representable")
    }

    /// Converts a count into the scalar domain.
    #[inline]
    fn of_usize(value: usize) -> Self {
        Self::from_usize(value).expect("count must be representable")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Default absolute tolerance for geometric predicates (distances, collinearity).
#[inline]
pub fn default_geom_tol<S: Scalar>() -> S {
    S::lit(1e-9)
}

/// Default tolerance for symmetry matching.
#[inline]
pub fn default_symmetry_tol<S: Scalar>() -> S {
    S::lit(1e-6)
}
