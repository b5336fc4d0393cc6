//! Classical correlation, discord, entanglement of formation, logarithmic
//! negativity and mutual information of a two-mode Gaussian state.
//!
//! Discord and classical correlation use the Gaussian-measurement optimum
//! `E^min` (conditional variance of the unmeasured mode after the best
//! Gaussian measurement on the second mode). Entropies are in nats except
//! the entanglement of formation, which is in bits.

use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::gaussian::{covariance, standard_form, StandardForm};
use crate::model::{alpha, ModelPoint, Partition};
use crate::numeric::{guarded_sqrt, relative_close};

const DOMAIN_TOLERANCE: f64 = 1e-10;
/// Relative width of the band around the `E^min` branch boundary where both
/// formulas are evaluated and cross-checked.
const BRANCH_TIE_TOLERANCE: f64 = 1e-9;
const BRANCH_AGREEMENT: f64 = 1e-8;
/// Below this `|B - 1|` the first `E^min` formula is 0/0-conditioned.
const FIRST_BRANCH_CONDITIONING: f64 = 1e-6;

/// `f(x) = ((1+x)/2) ln((1+x)/2) - ((x-1)/2) ln((x-1)/2)`, the entropy of a
/// single mode with symplectic eigenvalue `x`, in nats.
pub fn entropy_f(x: f64) -> Result<f64> {
    if !(x >= 1.0 - DOMAIN_TOLERANCE) {
        return Err(Error::Domain {
            function: "entropy_f",
            value: x,
        });
    }
    if x <= 1.0 {
        return Ok(0.0);
    }
    let u = 0.5 * (x - 1.0);
    Ok((1.0 + u) * u.ln_1p() - u * u.ln())
}

/// `c₊ log₂ c₊ - c₋ log₂ c₋` with `c± = (Δ^{-1/2} ± Δ^{1/2})² / 4`, in bits.
pub fn formation_entropy(delta: f64) -> Result<f64> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::Domain {
            function: "formation_entropy",
            value: delta,
        });
    }
    let s = delta.sqrt();
    let c_minus = 0.25 * (1.0 / s - s).powi(2);
    // c₊ - c₋ = 1 exactly
    let c_plus = 1.0 + c_minus;
    let plus = c_plus * c_minus.ln_1p() / LN_2;
    let minus = if c_minus > 0.0 { c_minus * c_minus.log2() } else { 0.0 };
    Ok(plus - minus)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EminBranch {
    /// `(D - AB)² <= (1+B) C² (A+D)`
    First,
    Second,
    /// On the boundary between the two (every pure state): both formulas
    /// were evaluated and agree.
    Boundary,
    /// No correlations (`C = 0`): measuring one mode leaves the other as is.
    Uncorrelated,
}

impl EminBranch {
    pub fn label(&self) -> &'static str {
        match self {
            EminBranch::First => "first",
            EminBranch::Second => "second",
            EminBranch::Boundary => "boundary",
            EminBranch::Uncorrelated => "uncorrelated",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Emin {
    pub value: f64,
    pub branch: EminBranch,
}

/// Minimal conditional determinant over Gaussian measurements on mode 2.
///
/// Both branch formulas are evaluated through factored radicands written in
/// the standard-form entries; they equal the textbook expressions in `A, B,
/// C, D` identically. On the branch boundary (which every pure state sits
/// on) both formulas are computed and must agree.
pub fn emin(sf: &StandardForm) -> Result<Emin> {
    let (a, b) = (sf.a, sf.b);
    let (big_a, big_b, big_c, big_d) = (sf.det_g1, sf.det_g2, sf.det_c, sf.det_gamma);
    if big_c == 0.0 {
        return Ok(Emin {
            value: big_a,
            branch: EminBranch::Uncorrelated,
        });
    }
    let c1s = sf.c1 * sf.c1;
    let c2s = sf.c2 * sf.c2;

    // (1+B) C² (A+D) - (D-AB)²
    let selector = (a * big_b * c1s - a * c2s - b * c1s * c2s)
        * (a * big_b * c2s - a * c1s - b * c1s * c2s);
    let selector_scale = ((1.0 + big_b) * big_c * big_c * (big_a + big_d)).abs()
        + (big_d - big_a * big_b).powi(2);
    let first_selected = selector >= 0.0;
    let tie = selector.abs() <= BRANCH_TIE_TOLERANCE * selector_scale;

    let second = a * (a * b - c1s.max(c2s)) / b;
    let first = || -> Result<Option<f64>> {
        let b_minus_one = big_b - 1.0;
        if b_minus_one == 0.0 {
            return Ok(None);
        }
        let u = a * b_minus_one;
        let r1 = (u - b * c1s) * (u - b * c2s);
        let root = guarded_sqrt(r1, u * u + (b * c1s).powi(2), "E^min first branch")?;
        Ok(Some(((big_c.abs() + root) / b_minus_one).powi(2)))
    };

    let (value, branch) = if tie {
        if (big_b - 1.0).abs() > FIRST_BRANCH_CONDITIONING {
            if let Some(first) = first()? {
                if !relative_close(first, second, BRANCH_AGREEMENT) {
                    return Err(Error::BranchDisagreement { first, second });
                }
            }
        }
        (second, EminBranch::Boundary)
    } else if first_selected {
        match first()? {
            Some(v) => (v, EminBranch::First),
            None => (second, EminBranch::Second),
        }
    } else {
        (second, EminBranch::Second)
    };

    if !(value >= 1.0 - DOMAIN_TOLERANCE) {
        return Err(Error::NonPhysical(format!(
            "E^min = {value} below the uncertainty bound"
        )));
    }
    Ok(Emin { value, branch })
}

/// `E^min` specialized to the equal tripartition, as a function of `α` and
/// `τ` only. Equals 1 at the factorization point `α = 1`.
pub fn emin_tripartite_closed_form(alpha: f64, tau: f64) -> f64 {
    if alpha == 1.0 {
        return 1.0;
    }
    let d = (alpha - 1.0).powi(2);
    let mu = 2.0 * alpha * (alpha * (tau - 1.0) - tau) * (1.0 + (alpha - 1.0) * tau);
    let numerator = -2.0 * alpha * alpha - 4.0 * d * alpha * tau
        - d * (1.0 + (alpha - 8.0) * alpha) * tau * tau
        + 2.0 * d * d * tau.powi(3)
        + d.powf(1.5).abs() * (alpha + 1.0) * tau * tau * (1.0 - 2.0 * tau);
    numerator / mu
}

fn non_negative(value: f64, what: &str) -> Result<f64> {
    if value >= 0.0 {
        Ok(value)
    } else if value >= -DOMAIN_TOLERANCE {
        Ok(0.0)
    } else {
        Err(Error::NonPhysical(format!("{what} = {value} is negative")))
    }
}

/// `CC = f(√A) - f(√E^min)`, nats.
pub fn classical_correlation(sf: &StandardForm) -> Result<f64> {
    let e = emin(sf)?;
    non_negative(
        entropy_f(sf.a)? - entropy_f(e.value.sqrt())?,
        "classical correlation",
    )
}

/// `QD = f(√B) - f(ν₋) - f(ν₊) + f(√E^min)`, nats.
pub fn quantum_discord(sf: &StandardForm) -> Result<f64> {
    let e = emin(sf)?;
    non_negative(
        entropy_f(sf.b)? - entropy_f(sf.nu_minus)? - entropy_f(sf.nu_plus)?
            + entropy_f(e.value.sqrt())?,
        "quantum discord",
    )
}

/// `S(1) + S(2) - S(12)`, nats.
pub fn mutual_information(sf: &StandardForm) -> Result<f64> {
    non_negative(
        entropy_f(sf.a)? + entropy_f(sf.b)? - entropy_f(sf.nu_minus)? - entropy_f(sf.nu_plus)?,
        "mutual information",
    )
}

/// `max(0, -ln ν̃₋)`, nats.
pub fn log_negativity(sf: &StandardForm) -> f64 {
    (-sf.nu_tilde_minus.ln()).max(0.0)
}

/// Entanglement of formation of a symmetric (`a = b`) two-mode state, in
/// bits: `f(ν̃₋)` when entangled, 0 otherwise.
pub fn eof_symmetric(sf: &StandardForm) -> Result<f64> {
    if !sf.is_symmetric() {
        return Err(Error::NonPhysical(
            "closed-form entanglement of formation needs a = b".into(),
        ));
    }
    if sf.nu_tilde_minus >= 1.0 {
        return Ok(0.0);
    }
    formation_entropy(sf.nu_tilde_minus)
}

fn bipartite_alpha(point: &ModelPoint) -> Result<(f64, f64)> {
    match point.partition {
        Partition::Bipartite { tau1 } => Ok((alpha(point.couplings())?, tau1)),
        _ => Err(Error::InvalidPartition("expected a bipartition".into())),
    }
}

/// Bipartite `CC = QD = f(√A)` with `A` from its closed form; equal to the
/// entanglement entropy of the pure ground state.
pub fn bipartite_closed_form(point: &ModelPoint) -> Result<f64> {
    let (alpha, tau1) = bipartite_alpha(point)?;
    let big_a = (alpha * tau1 + (1.0 - tau1)) * (tau1 + alpha * (1.0 - tau1)) / alpha;
    entropy_f(big_a.sqrt())
}

/// Bipartite entanglement of formation, bits, from `Δ = a - c` with
/// `c = α^{-1/2} |α - 1| sqrt(τ₁(1-τ₁))`.
pub fn eof_bipartite(point: &ModelPoint) -> Result<f64> {
    let (alpha, tau1) = bipartite_alpha(point)?;
    let big_a = (alpha * tau1 + (1.0 - tau1)) * (tau1 + alpha * (1.0 - tau1)) / alpha;
    let c = ((alpha - 1.0).powi(2) * (1.0 - tau1) * tau1).sqrt() / alpha.sqrt();
    let delta = big_a.sqrt() - c;
    if !(delta > 0.0) {
        return Err(Error::Domain {
            function: "eof_bipartite",
            value: delta,
        });
    }
    if delta >= 1.0 {
        return Ok(0.0);
    }
    formation_entropy(delta)
}

/// Tripartite entanglement of formation, bits, from
/// `Δ = sqrt((√A - k₁)(√A - k₂))`. Separable reduced states (`Δ >= 1`)
/// return 0.
pub fn eof_tripartite(point: &ModelPoint) -> Result<f64> {
    let Partition::Tripartite { tau } = point.partition else {
        return Err(Error::InvalidPartition("expected a tripartition".into()));
    };
    let alpha = alpha(point.couplings())?;
    let d = (alpha - 1.0).powi(2);
    let big_a = (alpha * tau + (1.0 - tau)) * (tau + alpha * (1.0 - tau)) / alpha;
    let k1 = (d * tau * tau * (1.0 + (alpha - 1.0) * tau) / (alpha * (alpha + tau - alpha * tau)))
        .sqrt();
    let k2 = if k1 == 0.0 { 0.0 } else { d * tau * tau / (alpha * k1) };
    let a = big_a.sqrt();
    let delta_sq = (a - k1) * (a - k2);
    if !(delta_sq > 0.0) {
        return Err(Error::Domain {
            function: "eof_tripartite",
            value: delta_sq,
        });
    }
    let delta = delta_sq.sqrt();
    if delta >= 1.0 {
        return Ok(0.0);
    }
    formation_entropy(delta)
}

/// Output unit convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Units {
    /// Natural-log entropies, entanglement of formation in bits.
    #[default]
    Paper,
    Nats,
    Bits,
}

/// All measures for one parameter point. `cc`, `qd`, `mutual_information`
/// and `ln_neg` are in nats; `eof` is in bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationReport {
    pub cc: f64,
    pub qd: f64,
    pub mutual_information: f64,
    pub eof: f64,
    pub ln_neg: f64,
    pub e_min: f64,
    pub branch: EminBranch,
}

impl CorrelationReport {
    /// `[cc, qd, eof, ln_neg, mutual_information]` in the requested units.
    pub fn values_in(&self, units: Units) -> [f64; 5] {
        let (nat_scale, eof_scale) = match units {
            Units::Paper => (1.0, 1.0),
            Units::Nats => (1.0, LN_2),
            Units::Bits => (1.0 / LN_2, 1.0),
        };
        [
            self.cc * nat_scale,
            self.qd * nat_scale,
            self.eof * eof_scale,
            self.ln_neg * nat_scale,
            self.mutual_information * nat_scale,
        ]
    }
}

/// One column of a [`CorrelationReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    Cc,
    Qd,
    Eof,
    LnNeg,
    MutualInformation,
}

impl Measure {
    pub const ALL: [Measure; 5] = [
        Measure::Cc,
        Measure::Qd,
        Measure::Eof,
        Measure::LnNeg,
        Measure::MutualInformation,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Measure::Cc => "cc",
            Measure::Qd => "qd",
            Measure::Eof => "eof",
            Measure::LnNeg => "ln_neg",
            Measure::MutualInformation => "mutual_information",
        }
    }

    pub fn from_name(name: &str) -> Option<Measure> {
        Measure::ALL.into_iter().find(|m| m.name() == name)
    }

    /// Native value: nats, except bits for `Eof`.
    pub fn pick(&self, r: &CorrelationReport) -> f64 {
        match self {
            Measure::Cc => r.cc,
            Measure::Qd => r.qd,
            Measure::Eof => r.eof,
            Measure::LnNeg => r.ln_neg,
            Measure::MutualInformation => r.mutual_information,
        }
    }
}

/// Full Gaussian pipeline for one point.
pub fn evaluate(point: &ModelPoint) -> Result<CorrelationReport> {
    let sf = standard_form(&covariance(point)?)?;
    let e = emin(&sf)?;
    let fa = entropy_f(sf.a)?;
    let fb = entropy_f(sf.b)?;
    let fe = entropy_f(e.value.sqrt())?;
    let fnu = entropy_f(sf.nu_minus)? + entropy_f(sf.nu_plus)?;
    let eof = match point.partition {
        Partition::Bipartite { .. } => eof_bipartite(point)?,
        Partition::Tripartite { .. } => eof_tripartite(point)?,
    };
    Ok(CorrelationReport {
        cc: non_negative(fa - fe, "classical correlation")?,
        qd: non_negative(fb - fnu + fe, "quantum discord")?,
        mutual_information: non_negative(fa + fb - fnu, "mutual information")?,
        eof,
        ln_neg: log_negativity(&sf),
        e_min: e.value,
        branch: e.branch,
    })
}
