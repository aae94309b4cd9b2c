use std::f64::consts::SQRT_2;

use crate::error::{ensure_finite, Result};

/// Standard normal CDF `Φ(s)`, via the complementary error function so that
/// the lower tail keeps full relative accuracy.
pub fn std_normal_cdf(s: f64) -> Result<f64> {
    if s == f64::INFINITY {
        return Ok(1.0);
    }
    if s == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    ensure_finite("std_normal_cdf argument", s)?;
    Ok(phi(s))
}

#[inline]
pub(crate) fn phi(s: f64) -> f64 {
    0.5 * libm::erfc(-s / SQRT_2)
}
