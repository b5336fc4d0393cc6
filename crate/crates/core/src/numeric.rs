use crate::error::{Error, Result};

/// Relative band below zero that is treated as rounding noise.
pub(crate) const RADICAND_TOLERANCE: f64 = 1e-12;

/// Square root of a quantity that is non-negative in exact arithmetic.
///
/// `scale` is the magnitude of the terms the radicand was assembled from;
/// values in `[-1e-12 * scale, 0)` clamp to zero, anything below is a
/// construction error.
pub(crate) fn guarded_sqrt(value: f64, scale: f64, what: &str) -> Result<f64> {
    if value >= 0.0 {
        return Ok(value.sqrt());
    }
    if value >= -RADICAND_TOLERANCE * scale.abs().max(1.0) {
        return Ok(0.0);
    }
    Err(Error::NonPhysical(format!(
        "negative radicand {value:e} in {what} (scale {scale:e})"
    )))
}

pub(crate) fn relative_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clamps_only_rounding_noise() {
        assert_eq!(guarded_sqrt(4.0, 1.0, "t").unwrap(), 2.0);
        assert_eq!(guarded_sqrt(-1e-13, 1.0, "t").unwrap(), 0.0);
        assert_eq!(guarded_sqrt(-1e-7, 1e6, "t").unwrap(), 0.0);
        assert!(guarded_sqrt(-1e-9, 1.0, "t").is_err());
    }
}
