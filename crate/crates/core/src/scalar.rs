use core::fmt::Debug;

use crate::error::{Error, Result};

/// Arithmetic needed by the combination and transformation kernels.
///
/// Implemented by `f64` for precise masses and by
/// [`IntervalMass`](crate::IntervalMass) for imprecise ones, so both run
/// through the same tuple enumeration and redistribution code.
pub trait MassScalar: Clone + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn div(&self, other: &Self) -> Result<Self>;
    /// True when the value is exactly zero (every endpoint zero).
    fn is_zero(&self) -> bool;
}

impl MassScalar for f64 {
    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn div(&self, other: &Self) -> Result<Self> {
        if *other == 0.0 {
            return Err(Error::ZeroDenominator);
        }
        Ok(self / other)
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }
}
