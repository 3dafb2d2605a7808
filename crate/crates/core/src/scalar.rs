//! Scalar abstraction shared by every numeric routine in the crate.
//!
//! The state machinery never needs square roots (densities are built as
//! `|ψ⟩⟨ψ| / ⟨ψ|ψ⟩`), so exact rationals work alongside `f32` and `f64`.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// Real scalar usable as the field for ranking-space densities.
pub trait Scalar:
    Num + Signed + Clone + PartialOrd + FromPrimitive + ToPrimitive + Debug + Send + Sync + 'static
{
    /// Tolerance used for trace, Hermiticity, PSD and support decisions.
    fn default_eps() -> Self;

    /// Lossy conversion used for reporting.
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).unwrap_or_else(Self::zero)
    }

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count fits in scalar")
    }

    fn recip(&self) -> Self {
        Self::one() / self.clone()
    }
}

impl Scalar for f64 {
    fn default_eps() -> Self {
        1e-9
    }
}

impl Scalar for f32 {
    // f32 cannot resolve 1e-9 around 1.0
    fn default_eps() -> Self {
        1e-5
    }
}

impl Scalar for BigRational {
    fn default_eps() -> Self {
        BigRational::from_integer(BigInt::from(0))
    }
}

/// `max(a, b)` for partially ordered scalars; NaN-free inputs assumed.
pub(crate) fn max_of<T: Scalar>(a: T, b: T) -> T {
    if a >= b {
        a
    } else {
        b
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    #[test]
    fn exact_eps_is_zero() {
        assert!(BigRational::default_eps().is_zero());
        assert_eq!(f64::default_eps(), 1e-9);
    }

    #[test]
    fn recip_and_counts() {
        let six = BigRational::from_count(6);
        assert_eq!(six.recip() * BigRational::from_count(6), BigRational::one());
        assert_eq!(f32::from_count(3), 3.0);
    }
}
