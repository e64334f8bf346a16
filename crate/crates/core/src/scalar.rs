//! Scalar abstractions.
//!
//! The GKP arithmetic and the decoders are written against [`Real`], which is
//! implemented for `f32` and `f64`. Matching only needs ordered additive
//! weights, so it is generic over the looser [`Weight`] trait, which also
//! admits exact integer weights.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, Num, ToPrimitive};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Floating point scalar used by the GKP model and the decoders.
pub trait Real:
    Weight + Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Complementary error function.
    fn erfc(self) -> Self;

    /// Draw one standard normal variate.
    fn standard_normal<G: Rng + ?Sized>(rng: &mut G) -> Self;

    /// Convert an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    /// The GKP lattice constant `sqrt(pi)`.
    #[inline]
    fn sqrt_pi() -> Self {
        Self::PI().sqrt()
    }

    /// Standard normal CDF.
    #[inline]
    fn normal_cdf(self) -> Self {
        Self::lit(0.5) * (-self / Self::SQRT_2()).erfc()
    }

    /// Standard normal upper tail `1 - cdf(x)`.
    #[inline]
    fn normal_sf(self) -> Self {
        Self::lit(0.5) * (self / Self::SQRT_2()).erfc()
    }
}

impl Real for f64 {
    #[inline]
    fn erfc(self) -> Self {
        libm::erfc(self)
    }

    #[inline]
    fn standard_normal<G: Rng + ?Sized>(rng: &mut G) -> Self {
        StandardNormal.sample(rng)
    }
}

impl Real for f32 {
    #[inline]
    fn erfc(self) -> Self {
        libm::erfcf(self)
    }

    #[inline]
    fn standard_normal<G: Rng + ?Sized>(rng: &mut G) -> Self {
        StandardNormal.sample(rng)
    }
}

/// Edge weight accepted by the matching engine.
///
/// Integer weights keep the blossom algorithm in exact arithmetic (all
/// intermediate dual values stay integral); float weights are what the
/// decoders produce.
pub trait Weight: Num + Copy + PartialOrd + Debug + Send + Sync + 'static {
    /// Halve a value known to be even when the type is integral.
    #[inline]
    fn half(self) -> Self {
        self / (Self::one() + Self::one())
    }

    #[inline]
    fn double(self) -> Self {
        self + self
    }

    #[inline]
    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Integer key with the same order as the value, for fast heap
    /// comparisons. NaN has no meaningful key.
    fn order_key(self) -> u64;
}

impl Weight for i32 {
    #[inline]
    fn order_key(self) -> u64 {
        (self as i64).order_key()
    }
}

impl Weight for i64 {
    #[inline]
    fn order_key(self) -> u64 {
        (self as u64) ^ (1 << 63)
    }
}

impl Weight for f32 {
    #[inline]
    fn order_key(self) -> u64 {
        (self as f64).order_key()
    }
}

impl Weight for f64 {
    #[inline]
    fn order_key(self) -> u64 {
        let bits = self.to_bits();
        if bits >> 63 == 1 {
            !bits
        } else {
            bits | (1 << 63)
        }
    }
}
