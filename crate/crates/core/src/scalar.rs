//! Coefficient scalars for the operator algebra.
//!
//! Exact computations run over Gaussian rationals (complex numbers with
//! arbitrary-precision rational real and imaginary parts); numeric
//! computations run over `Complex<f64>`. The [`Coeff`] trait is the shared
//! interface, so the same symbolic machinery serves both, while the type
//! parameter keeps exact and approximate quantities from mixing silently.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::complex::Complex64;
use num::{BigInt, BigRational, Complex, One, Signed, Zero};

/// Exact complex scalar: Gaussian rational with big-integer numerators.
pub type GRat = Complex<BigRational>;

/// Shared coefficient interface for exact and floating operator algebra.
pub trait Coeff:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_ratio(num: i64, den: i64) -> Self;
    /// The imaginary unit.
    fn i() -> Self;
    fn conj(&self) -> Self;
    fn to_c64(&self) -> Complex64;

    fn from_int(v: i64) -> Self {
        Self::from_ratio(v, 1)
    }
}

impl Coeff for GRat {
    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Complex::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    fn i() -> Self {
        Complex::new(BigRational::zero(), BigRational::one())
    }

    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }
}

impl Coeff for Complex64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Complex64::new(num as f64 / den as f64, 0.0)
    }

    fn i() -> Self {
        Complex64::new(0.0, 1.0)
    }

    fn conj(&self) -> Self {
        Complex64::new(self.re, -self.im)
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }
}

/// Rational to nearest f64. Exact for every value arising from small graphs.
pub fn rat_to_f64(r: &BigRational) -> f64 {
    let num = bigint_to_f64(r.numer());
    let den = bigint_to_f64(r.denom());
    num / den
}

fn bigint_to_f64(v: &BigInt) -> f64 {
    // Digits beyond f64 precision only matter through magnitude, which the
    // string round-trip preserves.
    v.to_string().parse::<f64>().unwrap_or(f64::NAN)
}

/// Renders a rational as `p/q`, or just `p` for integers.
pub fn rat_display(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p` or `p/q` into an exact rational.
pub fn rat_parse(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        None => s.parse::<BigInt>().ok().map(BigRational::from),
        Some((p, q)) => {
            let p = p.trim().parse::<BigInt>().ok()?;
            let q = q.trim().parse::<BigInt>().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(BigRational::new(p, q))
            }
        }
    }
}

/// Exact rational from integers.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Gaussian rational from integer real and imaginary parts over a common
/// denominator.
pub fn grat(re_num: i64, im_num: i64, den: i64) -> GRat {
    Complex::new(rat(re_num, den), rat(im_num, den))
}

pub fn grat_is_real(v: &GRat) -> bool {
    v.im.is_zero()
}

pub fn grat_abs_le(v: &GRat, bound: &BigRational) -> bool {
    v.re.abs() <= *bound && v.im.abs() <= *bound
}
