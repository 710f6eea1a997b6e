//! Float helpers routed through `num_traits::Float`.
//!
//! With `libm` enabled and `std` disabled on `num-traits`, these resolve
//! to the software implementations in both `no_std` and test builds, so
//! results do not depend on the host libm.

use num_traits::Float;

#[inline]
pub fn sqrt(x: f64) -> f64 {
    Float::sqrt(x)
}

#[inline]
pub fn cos(x: f64) -> f64 {
    Float::cos(x)
}

#[inline]
pub fn sin(x: f64) -> f64 {
    Float::sin(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    Float::exp(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    Float::ln(x)
}

#[inline]
pub fn abs(x: f64) -> f64 {
    Float::abs(x)
}

#[inline]
pub fn atan2(y: f64, x: f64) -> f64 {
    Float::atan2(y, x)
}

#[inline]
pub fn acos(x: f64) -> f64 {
    Float::acos(x)
}

#[inline]
pub fn hypot(x: f64, y: f64) -> f64 {
    Float::hypot(x, y)
}

#[inline]
pub fn powi(x: f64, n: i32) -> f64 {
    Float::powi(x, n)
}

/// n! as a float; exact for n ≤ 20.
#[inline]
pub fn factorial(n: u32) -> f64 {
    let mut acc = 1.0;
    for k in 2..=n as u64 {
        acc *= k as f64;
    }
    acc
}
