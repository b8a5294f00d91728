//! Scalar abstractions.
//!
//! [`Real`] is the floating-point bound used by the distribution, likelihood,
//! test-design and simulation code. [`Field`] is the weaker ordered-field
//! bound used by the finite relaxation oracle, so that it can also run in
//! exact rational arithmetic.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Float, FloatConst, FromPrimitive, Num, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand_distr::{Distribution, Open01, StandardNormal};

/// Floating point: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal. Every literal used by this crate is finite,
    /// so the conversion cannot fail for `f32` or `f64`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    /// Lossy conversion to `f64` for reporting and for the integer samplers.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// A standard normal variate.
    fn standard_normal<G: Rng + ?Sized>(rng: &mut G) -> Self;

    /// A uniform variate on the open interval (0, 1).
    fn open01<G: Rng + ?Sized>(rng: &mut G) -> Self;

    /// Clears the low mantissa bits; used by the erfc tail to split `x*x`
    /// exactly (`x*x = s*s + (x-s)(x+s)`).
    fn truncate_mantissa(self) -> Self;
}

impl Real for f64 {
    #[inline]
    fn standard_normal<G: Rng + ?Sized>(rng: &mut G) -> Self {
        StandardNormal.sample(rng)
    }

    #[inline]
    fn open01<G: Rng + ?Sized>(rng: &mut G) -> Self {
        Open01.sample(rng)
    }

    #[inline]
    fn truncate_mantissa(self) -> Self {
        f64::from_bits(self.to_bits() & 0xffff_ffff_0000_0000)
    }
}

impl Real for f32 {
    #[inline]
    fn standard_normal<G: Rng + ?Sized>(rng: &mut G) -> Self {
        StandardNormal.sample(rng)
    }

    #[inline]
    fn open01<G: Rng + ?Sized>(rng: &mut G) -> Self {
        Open01.sample(rng)
    }

    #[inline]
    fn truncate_mantissa(self) -> Self {
        f32::from_bits(self.to_bits() & 0xffff_f000)
    }
}

/// Ordered field with an absolute value, plus the tolerance used to accept
/// a vector as a probability vector. Exact types use a zero tolerance.
pub trait Field: Num + Signed + PartialOrd + Clone + Debug {
    fn normalization_tolerance() -> Self;

    /// Conversion from `f64`, used to lift floating-point instances into
    /// exact arithmetic. Returns `None` for non-finite input.
    fn from_f64_exact(x: f64) -> Option<Self>;
}

impl Field for f64 {
    fn normalization_tolerance() -> Self {
        1e-12
    }

    fn from_f64_exact(x: f64) -> Option<Self> {
        x.is_finite().then_some(x)
    }
}

impl Field for f32 {
    fn normalization_tolerance() -> Self {
        1e-5
    }

    fn from_f64_exact(x: f64) -> Option<Self> {
        x.is_finite().then_some(x as f32)
    }
}

impl Field for Ratio<i64> {
    fn normalization_tolerance() -> Self {
        Ratio::zero()
    }

    fn from_f64_exact(x: f64) -> Option<Self> {
        // Only dyadic rationals whose reduced form fits in i64.
        let big = BigRational::from_float(x)?;
        let numer: i64 = big.numer().to_i64()?;
        let denom: i64 = big.denom().to_i64()?;
        Some(Ratio::new(numer, denom))
    }
}

impl Field for BigRational {
    fn normalization_tolerance() -> Self {
        Ratio::from_integer(BigInt::zero())
    }

    fn from_f64_exact(x: f64) -> Option<Self> {
        BigRational::from_float(x)
    }
}
