//! Leading-order behavior at the critical field `h = 1`: the logarithmic
//! expansions, the finite-size scaling law, the finite critical discord of
//! the tripartition, and least-squares slope fits that test them against
//! the full formulas.
//!
//! The expansion functions evaluate the textbook expressions as written.
//! They keep only the logarithms of `f(x) ≈ ln(x/2) + 1` and drop the `+1`,
//! so the full formulas approach them up to a constant
//! [`LARGE_ARGUMENT_OFFSET_NATS`] (or [`LARGE_ARGUMENT_OFFSET_BITS`] for the
//! entanglement of formation); slopes are unaffected.

use std::f64::consts::{LN_2, LOG2_E};

use crate::error::{Error, Result};

/// `lim_{x→∞} f(x) - ln(x/2)`.
pub const LARGE_ARGUMENT_OFFSET_NATS: f64 = 1.0;
/// Same constant for the base-2 entanglement-of-formation function.
pub const LARGE_ARGUMENT_OFFSET_BITS: f64 = LOG2_E;

/// Default `h - 1` window for slope fits.
pub const STANDARD_WINDOW: (f64, f64) = (1e-6, 1e-3);
pub const STANDARD_WINDOW_POINTS: usize = 7;
/// Fits only accept fields in `(1, 1 + MAX_FIT_OFFSET]`.
pub const MAX_FIT_OFFSET: f64 = 0.01;
pub const MIN_FIT_POINTS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unit {
    Nats,
    Bits,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionResult {
    pub value: f64,
    pub unit: Unit,
    /// `h - 1` range over which the expansion tracks the full formula (up
    /// to the constant offset).
    pub validity_window: (f64, f64),
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::InvalidParameter(format!(
            "gamma must lie in [0, 1), got {gamma}"
        )));
    }
    Ok(())
}

fn check_near_critical(h: f64) -> Result<f64> {
    let offset = h - 1.0;
    if !(offset > 0.0) || !h.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "expansion needs h > 1, got {h}"
        )));
    }
    Ok(offset)
}

fn check_fraction(tau: f64, upper: f64, what: &str) -> Result<()> {
    if !(tau > 0.0 && tau < upper) {
        return Err(Error::InvalidPartition(format!(
            "{what} must lie in (0, {upper}), got {tau}"
        )));
    }
    Ok(())
}

/// `CC = QD ≈ -¼ ln(h-1) + ¼ ln(1-γ) + ½ ln τ₁(1-τ₁) - ln 2`.
pub fn expansion_cc_qd_bipartite(gamma: f64, tau1: f64, h: f64) -> Result<ExpansionResult> {
    check_gamma(gamma)?;
    check_fraction(tau1, 1.0, "tau1")?;
    let x = check_near_critical(h)?;
    let value =
        -0.25 * x.ln() + 0.25 * (1.0 - gamma).ln() + 0.5 * (tau1 * (1.0 - tau1)).ln() - LN_2;
    Ok(ExpansionResult {
        value,
        unit: Unit::Nats,
        validity_window: STANDARD_WINDOW,
    })
}

/// `EoF ≈ -¼ log₂(h-1) + ¼ log₂(1-γ) + ½ log₂ τ₁(1-τ₁) - 1`, bits.
pub fn expansion_eof_bipartite(gamma: f64, tau1: f64, h: f64) -> Result<ExpansionResult> {
    check_gamma(gamma)?;
    check_fraction(tau1, 1.0, "tau1")?;
    let x = check_near_critical(h)?;
    let value =
        -0.25 * x.log2() + 0.25 * (1.0 - gamma).log2() + 0.5 * (tau1 * (1.0 - tau1)).log2() - 1.0;
    Ok(ExpansionResult {
        value,
        unit: Unit::Bits,
        validity_window: STANDARD_WINDOW,
    })
}

/// `CC = QD ~ ⅙ ln N + ⅙ ln(1-γ) + ½ ln τ₁(1-τ₁)` at `h = 1`, nats.
pub fn finite_size_scaling(gamma: f64, tau1: f64, n: f64) -> Result<f64> {
    check_gamma(gamma)?;
    check_fraction(tau1, 1.0, "tau1")?;
    if !(n >= 2.0) || !n.is_finite() {
        return Err(Error::InvalidParameter(format!("N must be >= 2, got {n}")));
    }
    Ok(n.ln() / 6.0 + (1.0 - gamma).ln() / 6.0 + 0.5 * (tau1 * (1.0 - tau1)).ln())
}

/// The bipartite expansion evaluated at the finite-size field
/// `h - 1 = prefactor · N^{-2/3} (1-γ)^{1/3}`. Its dependence on `ln N` and
/// `ln(1-γ)` reproduces [`finite_size_scaling`].
pub fn expansion_at_scaling_field(gamma: f64, tau1: f64, n: f64, prefactor: f64) -> Result<f64> {
    if !(prefactor > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "scaling prefactor must be positive, got {prefactor}"
        )));
    }
    let offset = prefactor * n.powf(-2.0 / 3.0) * (1.0 - gamma).powf(1.0 / 3.0);
    Ok(expansion_cc_qd_bipartite(gamma, tau1, 1.0 + offset)?.value)
}

/// Finite discord of the equal tripartition at `h = 1`:
/// `ln(√(1-τ)/(2√2)) + ½ ln(((s+1)/(s-1))^s)` with `s = √(2(1-τ))`.
/// Contains no `γ`.
pub fn critical_qd_tripartite(tau: f64) -> Result<f64> {
    check_fraction(tau, 0.5, "tau")?;
    let s = (2.0 * (1.0 - tau)).sqrt();
    Ok(((1.0 - tau).sqrt() / (2.0 * 2f64.sqrt())).ln() + 0.5 * s * ((s + 1.0) / (s - 1.0)).ln())
}

/// `CC ≈ -¼ ln(h-1) + ¼ ln(1-γ) + ½ ln{ τ(1-τ)/(1-2τ) · ((s-1)/(s+1))^s }`.
pub fn expansion_cc_tripartite(gamma: f64, tau: f64, h: f64) -> Result<ExpansionResult> {
    check_gamma(gamma)?;
    check_fraction(tau, 0.5, "tau")?;
    let x = check_near_critical(h)?;
    let s = (2.0 * (1.0 - tau)).sqrt();
    let bracket = (tau * (1.0 - tau) / (1.0 - 2.0 * tau)).ln() + s * ((s - 1.0) / (s + 1.0)).ln();
    Ok(ExpansionResult {
        value: -0.25 * x.ln() + 0.25 * (1.0 - gamma).ln() + 0.5 * bracket,
        unit: Unit::Nats,
        validity_window: STANDARD_WINDOW,
    })
}

/// `count` fields `1 + x` with `x` log-spaced over `[min_offset, max_offset]`,
/// ascending.
pub fn log_offset_grid(min_offset: f64, max_offset: f64, count: usize) -> Result<Vec<f64>> {
    if !(min_offset > 0.0 && max_offset > min_offset) || !max_offset.is_finite() || count < 2 {
        return Err(Error::InvalidSpec(format!(
            "log-offset grid needs 0 < min < max and count >= 2 (got {min_offset}, {max_offset}, {count})"
        )));
    }
    let (lo, hi) = (min_offset.ln(), max_offset.ln());
    let step = (hi - lo) / (count - 1) as f64;
    Ok((0..count)
        .map(|i| {
            let x = if i + 1 == count { max_offset } else { (lo + step * i as f64).exp() };
            1.0 + x
        })
        .collect())
}

/// 7 fields log-spaced over `h - 1 ∈ [1e-6, 1e-3]`.
pub fn standard_window() -> Vec<f64> {
    log_offset_grid(STANDARD_WINDOW.0, STANDARD_WINDOW.1, STANDARD_WINDOW_POINTS)
        .expect("static window is valid")
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlopeFit {
    /// Coefficient of `ln(h - 1)`.
    pub slope: f64,
    pub intercept: f64,
    /// RMS of the fit residuals.
    pub residual: f64,
    pub window: Vec<f64>,
}

/// Least-squares fit of `values` against `ln(h - 1)`.
pub fn divergence_slope_fit(hs: &[f64], values: &[f64]) -> Result<SlopeFit> {
    if hs.len() != values.len() {
        return Err(Error::InvalidSpec(format!(
            "{} fields but {} values",
            hs.len(),
            values.len()
        )));
    }
    if hs.len() < MIN_FIT_POINTS {
        return Err(Error::InvalidSpec(format!(
            "slope fit needs at least {MIN_FIT_POINTS} points, got {}",
            hs.len()
        )));
    }
    if let Some(h) = hs.iter().find(|&&h| !(h > 1.0 && h - 1.0 <= MAX_FIT_OFFSET)) {
        return Err(Error::InvalidSpec(format!(
            "fit field {h} outside (1, {}]",
            1.0 + MAX_FIT_OFFSET
        )));
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidSpec(format!("non-finite value {v} in fit")));
    }
    let xs: Vec<f64> = hs.iter().map(|h| (h - 1.0).ln()).collect();
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = values.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mean_x).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidSpec("fit fields are all equal".into()));
    }
    let sxy: f64 = xs
        .iter()
        .zip(values)
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss: f64 = xs
        .iter()
        .zip(values)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    Ok(SlopeFit {
        slope,
        intercept,
        residual: (ss / n).sqrt(),
        window: hs.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{eof_bipartite, evaluate};
    use crate::model::ModelPoint;
    use approx::assert_abs_diff_eq;

    fn e4() -> f64 {
        1.0 + (-4.0f64).exp()
    }

    #[test]
    fn bipartite_expansion_example() {
        let v = expansion_cc_qd_bipartite(0.0, 0.5, e4()).unwrap();
        assert_abs_diff_eq!(v.value, 1.0 - 2.0 * LN_2, epsilon = 1e-14);
        assert_eq!(v.unit, Unit::Nats);
        let b = expansion_eof_bipartite(0.0, 0.5, e4()).unwrap();
        assert_abs_diff_eq!(b.value, LOG2_E - 2.0, epsilon = 1e-14);
        assert_eq!(b.unit, Unit::Bits);
    }

    #[test]
    fn expansion_slopes_are_exact() {
        let (h1, h2) = (1.0 + 1e-6, 1.0 + 1e-3);
        let run = (1e-3f64).ln() - (1e-6f64).ln();
        let d = |f: &dyn Fn(f64) -> f64| (f(h2) - f(h1)) / run;
        assert_abs_diff_eq!(
            d(&|h| expansion_cc_qd_bipartite(0.3, 0.2, h).unwrap().value),
            -0.25,
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(
            d(&|h| expansion_cc_tripartite(0.3, 0.2, h).unwrap().value),
            -0.25,
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(
            d(&|h| expansion_eof_bipartite(0.3, 0.2, h).unwrap().value),
            -0.25 / LN_2,
            epsilon = 1e-9
        );
    }

    #[test]
    fn full_formula_approaches_expansion_plus_constant() {
        let (g, t) = (0.5, 1.0 / 3.0);
        let gap = |x: f64| {
            let h = 1.0 + x;
            let full = evaluate(&ModelPoint::bipartite(g, h, t).unwrap()).unwrap();
            full.cc - expansion_cc_qd_bipartite(g, t, h).unwrap().value
        };
        let (near, far) = (gap(1e-6), gap(1e-3));
        assert!(near < far);
        assert!((near - LARGE_ARGUMENT_OFFSET_NATS).abs() < 1e-3, "{near}");
        assert!((far - LARGE_ARGUMENT_OFFSET_NATS).abs() < 0.05, "{far}");
    }

    #[test]
    fn eof_approaches_expansion_plus_constant() {
        let (g, t) = (0.5, 1.0 / 3.0);
        let gap = |x: f64| {
            let h = 1.0 + x;
            eof_bipartite(&ModelPoint::bipartite(g, h, t).unwrap()).unwrap()
                - expansion_eof_bipartite(g, t, h).unwrap().value
        };
        let (near, far) = (gap(1e-6), gap(1e-3));
        assert!(near < far);
        assert!((near - LARGE_ARGUMENT_OFFSET_BITS).abs() < 2e-3, "{near}");
    }

    #[test]
    fn tripartite_cc_approaches_expansion_plus_constant() {
        let (g, t) = (0.5, 1.0 / 3.0);
        let gap = |x: f64| {
            let h = 1.0 + x;
            let full = evaluate(&ModelPoint::tripartite(g, h, t).unwrap()).unwrap();
            full.cc - expansion_cc_tripartite(g, t, h).unwrap().value
        };
        let (near, far) = (gap(1e-6), gap(1e-3));
        assert!((near - 1.0).abs() < (far - 1.0).abs());
        assert!((near - LARGE_ARGUMENT_OFFSET_NATS).abs() < 1e-2, "{near}");
    }

    #[test]
    fn cc_in_bits_tracks_eof() {
        let p = ModelPoint::bipartite(0.5, 1.0 + 1e-8, 0.5).unwrap();
        let r = evaluate(&p).unwrap();
        assert!((r.cc / LN_2 - r.eof).abs() < 1e-4);
    }

    #[test]
    fn finite_size_example() {
        assert_abs_diff_eq!(
            finite_size_scaling(0.0, 0.5, 6f64.exp()).unwrap(),
            1.0 - LN_2,
            epsilon = 1e-14
        );
        assert!(finite_size_scaling(0.0, 0.5, 1.0).is_err());
    }

    proptest::proptest! {
        #[test]
        fn scaling_coefficients_from_substitution(
            g in 0.0f64..0.9,
            t in 0.05f64..0.5,
            log_n in 1.0f64..5.0,
            k in 0.1f64..10.1,
        ) {
            let n = 10f64.powf(log_n);
            let dn: f64 = 1e-3;
            let coeff_n = (expansion_at_scaling_field(g, t, n * dn.exp(), k).unwrap()
                - expansion_at_scaling_field(g, t, n, k).unwrap())
                / dn;
            proptest::prop_assert!((coeff_n - 1.0 / 6.0).abs() < 1e-6);
            // d/d ln(1-γ)
            let g2 = 1.0 - (1.0 - g) * (-dn).exp();
            let coeff_g = (expansion_at_scaling_field(g2, t, n, k).unwrap()
                - expansion_at_scaling_field(g, t, n, k).unwrap())
                / -dn;
            proptest::prop_assert!((coeff_g - 1.0 / 6.0).abs() < 1e-6);
            let s1 = finite_size_scaling(g, t, n).unwrap();
            let s2 = finite_size_scaling(g, t, n * dn.exp()).unwrap();
            proptest::prop_assert!(((s2 - s1) / dn - 1.0 / 6.0).abs() < 1e-9);
        }
    }

    #[test]
    fn critical_discord_values() {
        assert_abs_diff_eq!(critical_qd_tripartite(1.0 / 3.0).unwrap(), 0.2782386677, epsilon = 1e-9);
        assert!(critical_qd_tripartite(0.499).unwrap() > critical_qd_tripartite(1.0 / 3.0).unwrap());
        assert!(critical_qd_tripartite(0.4999999).unwrap() > 5.0);
        assert!(critical_qd_tripartite(0.5).is_err());
        assert!(critical_qd_tripartite(0.0).is_err());
    }

    #[test]
    fn full_tripartite_discord_tends_to_critical_value() {
        let target = critical_qd_tripartite(1.0 / 3.0).unwrap();
        let qd = |x: f64| {
            evaluate(&ModelPoint::tripartite(0.5, 1.0 + x, 1.0 / 3.0).unwrap())
                .unwrap()
                .qd
        };
        assert!((qd(1e-8) - target).abs() < 1e-3);
        assert!((qd(1e-12) - target).abs() < (qd(1e-8) - target).abs());
    }

    #[test]
    fn tripartite_cc_expansion_meets_bipartite_at_half() {
        // ((s-1)/(s+1))^s vanishes like (1-2τ)/4 and cancels the 1/(1-2τ)
        // pole, leaving the bipartite τ₁ = 1/2 expansion
        let h = 1.0 + 1e-6;
        let bip = expansion_cc_qd_bipartite(0.5, 0.5, h).unwrap().value;
        let near = expansion_cc_tripartite(0.5, 0.5 - 1e-7, h).unwrap().value;
        assert!((near - bip).abs() < 1e-6, "{near} {bip}");
        assert!(expansion_cc_tripartite(0.5, 0.5, h).is_err());
    }

    #[test]
    fn expansions_need_symmetric_side() {
        assert!(expansion_cc_qd_bipartite(0.5, 0.3, 1.0).is_err());
        assert!(expansion_cc_qd_bipartite(0.5, 0.3, 0.9).is_err());
        assert!(expansion_eof_bipartite(1.0, 0.3, 1.1).is_err());
    }

    #[test]
    fn standard_window_shape() {
        let w = standard_window();
        assert!(w.iter().all(|&h| h - 1.0 <= MAX_FIT_OFFSET));
        assert_eq!(w.len(), 7);
        assert_abs_diff_eq!(w[0] - 1.0, 1e-6, epsilon = 1e-15);
        assert_eq!(w[6], 1.0 + 1e-3);
        assert!(w.windows(2).all(|p| p[1] > p[0]));
        assert!(log_offset_grid(1e-3, 1e-6, 7).is_err());
        assert!(log_offset_grid(1e-6, 1e-3, 1).is_err());
    }

    #[test]
    fn slope_fit_of_constant() {
        let hs = standard_window();
        let fit = divergence_slope_fit(&hs, &[2.5; 7]).unwrap();
        assert_abs_diff_eq!(fit.slope, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(fit.residual, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(fit.intercept, 2.5, epsilon = 1e-14);
    }

    #[test]
    fn slope_fit_recovers_expansion_slope() {
        let hs = standard_window();
        let ys: Vec<f64> = hs
            .iter()
            .map(|&h| expansion_cc_qd_bipartite(0.5, 0.3, h).unwrap().value)
            .collect();
        let fit = divergence_slope_fit(&hs, &ys).unwrap();
        assert_abs_diff_eq!(fit.slope, -0.25, epsilon = 1e-13);
        assert!(fit.residual < 1e-13);
        assert_eq!(fit.window, hs);
    }

    #[test]
    fn slope_fit_of_full_formulas() {
        let hs = standard_window();
        let fit = |f: &dyn Fn(f64) -> f64| {
            let ys: Vec<f64> = hs.iter().map(|&h| f(h)).collect();
            divergence_slope_fit(&hs, &ys).unwrap().slope
        };
        let bip = |h| evaluate(&ModelPoint::bipartite(0.5, h, 1.0 / 3.0).unwrap()).unwrap();
        let tri = |h| evaluate(&ModelPoint::tripartite(0.5, h, 1.0 / 3.0).unwrap()).unwrap();
        // the sqrt(h-1) corrections pull the fitted slopes off -1/4
        assert_abs_diff_eq!(fit(&|h| bip(h).cc), -0.247121, epsilon = 1e-5);
        assert_abs_diff_eq!(fit(&|h| bip(h).ln_neg), -0.249259, epsilon = 1e-5);
        assert_abs_diff_eq!(fit(&|h| tri(h).cc), -0.24299, epsilon = 1e-4);
        assert_abs_diff_eq!(fit(&|h| tri(h).qd), -0.0041336, epsilon = 1e-5);
        // deeper windows converge to the asymptotic coefficient
        let deep = log_offset_grid(1e-10, 1e-7, 7).unwrap();
        let ys: Vec<f64> = deep.iter().map(|&h| bip(h).cc).collect();
        assert_abs_diff_eq!(divergence_slope_fit(&deep, &ys).unwrap().slope, -0.25, epsilon = 1e-3);
    }

    #[test]
    fn slope_fit_rejections() {
        let hs = standard_window();
        assert!(divergence_slope_fit(&hs[..5], &[0.0; 5]).is_err());
        assert!(divergence_slope_fit(&hs, &[0.0; 6]).is_err());
        let mut bad = hs.clone();
        bad[0] = 1.0;
        assert!(divergence_slope_fit(&bad, &[0.0; 7]).is_err());
        bad[0] = 1.02;
        assert!(divergence_slope_fit(&bad, &[0.0; 7]).is_err());
        let mut ys = vec![0.0; 7];
        ys[3] = f64::NAN;
        assert!(divergence_slope_fit(&hs, &ys).is_err());
    }
}
