//! LMG parameters, the mean-field frame and the Bogoliubov reduction.
//!
//! The collective Hamiltonian is
//! `H = -(1/N)(Sx² + γ Sy²) - h Sz`. After rotating onto the mean-field
//! direction and keeping the quadratic Holstein-Primakoff terms, the ground
//! state is fixed by two numbers, `r` and `s`, and everything downstream
//! (covariance matrices, correlations) only needs the single prefactor
//! `α = sqrt((r + s) / (r - s))`.

use crate::error::{Error, Result};

/// Anisotropy and field of the LMG Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Couplings {
    pub gamma: f64,
    pub h: f64,
}

impl Couplings {
    /// Validates `0 <= gamma < 1` and `h >= 0`. The critical field `h = 1`
    /// is accepted here; only the Gaussian evaluation refuses it.
    pub fn new(gamma: f64, h: f64) -> Result<Self> {
        if !gamma.is_finite() || !(0.0..1.0).contains(&gamma) {
            return Err(Error::InvalidParameter(format!(
                "gamma must lie in [0, 1), got {gamma}"
            )));
        }
        if !h.is_finite() || h < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "h must be finite and >= 0, got {h}"
            )));
        }
        Ok(Self { gamma, h })
    }

    pub fn phase(&self) -> Phase {
        if self.h >= 1.0 {
            Phase::Symmetric
        } else {
            Phase::Broken
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    /// `h >= 1`: fully polarized along the field.
    Symmetric,
    /// `0 <= h < 1`: mean-field direction tilted by `arccos h`.
    Broken,
}

/// How the spins are grouped. Fractions are `N_k / N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Partition {
    /// Two complementary groups of fractions `tau1` and `1 - tau1`.
    Bipartite { tau1: f64 },
    /// Three groups with `tau1 = tau3 = tau`; the middle group of fraction
    /// `1 - 2 tau` is traced out.
    Tripartite { tau: f64 },
}

impl Partition {
    pub fn bipartite(tau1: f64) -> Result<Self> {
        if !tau1.is_finite() || tau1 <= 0.0 || tau1 >= 1.0 {
            return Err(Error::InvalidPartition(format!(
                "bipartition fraction must lie in (0, 1), got {tau1}"
            )));
        }
        Ok(Partition::Bipartite { tau1 })
    }

    pub fn tripartite(tau: f64) -> Result<Self> {
        if !tau.is_finite() || tau <= 0.0 || tau >= 0.5 {
            return Err(Error::InvalidPartition(format!(
                "tripartition fraction must lie in (0, 1/2), got {tau}"
            )));
        }
        Ok(Partition::Tripartite { tau })
    }

    /// Tripartition from the two outer fractions. Only the equal case has a
    /// closed-form treatment, so `tau1 != tau3` is rejected.
    pub fn tripartite_groups(tau1: f64, tau3: f64) -> Result<Self> {
        if tau1 != tau3 {
            return Err(Error::InvalidPartition(format!(
                "tripartition requires tau1 == tau3, got {tau1} and {tau3}"
            )));
        }
        Self::tripartite(tau1)
    }

    /// Fractions of the two groups whose correlations are measured.
    pub fn measured_fractions(&self) -> (f64, f64) {
        match *self {
            Partition::Bipartite { tau1 } => (tau1, 1.0 - tau1),
            Partition::Tripartite { tau } => (tau, tau),
        }
    }

    pub fn kind(&self) -> PartitionKind {
        match self {
            Partition::Bipartite { .. } => PartitionKind::Bipartite,
            Partition::Tripartite { .. } => PartitionKind::Tripartite,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitionKind {
    Bipartite,
    Tripartite,
}

/// The single input record of the Gaussian pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelPoint {
    pub gamma: f64,
    pub h: f64,
    pub partition: Partition,
}

impl ModelPoint {
    pub fn new(gamma: f64, h: f64, partition: Partition) -> Result<Self> {
        Couplings::new(gamma, h)?;
        // re-run the partition checks so hand-built enums are validated too
        let partition = match partition {
            Partition::Bipartite { tau1 } => Partition::bipartite(tau1)?,
            Partition::Tripartite { tau } => Partition::tripartite(tau)?,
        };
        Ok(Self { gamma, h, partition })
    }

    pub fn bipartite(gamma: f64, h: f64, tau1: f64) -> Result<Self> {
        Self::new(gamma, h, Partition::bipartite(tau1)?)
    }

    pub fn tripartite(gamma: f64, h: f64, tau: f64) -> Result<Self> {
        Self::new(gamma, h, Partition::tripartite(tau)?)
    }

    pub fn couplings(&self) -> Couplings {
        Couplings {
            gamma: self.gamma,
            h: self.h,
        }
    }
}

/// Mean-field rotation angle and `m = cos θ₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanFieldAngle {
    pub theta0: f64,
    pub m: f64,
}

/// Quadratic-Hamiltonian data after the Bogoliubov diagonalization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanFieldFrame {
    pub theta0: f64,
    pub m: f64,
    /// `r = 2hm - 3m² + 2 - γ`
    pub r: f64,
    /// `s = γ - m²`
    pub s: f64,
    /// Bogoliubov angle, `tanh Θ = -s/r`.
    pub theta: f64,
    /// Gap of the collective (squeezed) mode; vanishes at `h = 1`.
    pub delta1: f64,
    /// Gap of the orthogonal modes, `r / 2`.
    pub delta2: f64,
}

pub fn mean_field_angle(c: Couplings) -> MeanFieldAngle {
    match c.phase() {
        Phase::Symmetric => MeanFieldAngle { theta0: 0.0, m: 1.0 },
        Phase::Broken => MeanFieldAngle {
            theta0: c.h.acos(),
            m: c.h,
        },
    }
}

pub fn quadratic_params(c: Couplings) -> Result<MeanFieldFrame> {
    let MeanFieldAngle { theta0, m } = mean_field_angle(c);
    let (gamma, h) = (c.gamma, c.h);
    let s = gamma - m * m;
    let r = 2.0 * h * m - 3.0 * m * m + 2.0 - gamma;
    let ratio = -s / r;
    if !ratio.is_finite() || ratio.abs() >= 1.0 {
        return Err(Error::SingularPoint(format!(
            "|s/r| = {} >= 1 at gamma = {gamma}, h = {h}",
            ratio.abs()
        )));
    }
    let theta = ratio.atanh();
    let delta1 = 0.5 * (r * theta.cosh() - (m * m - gamma) * theta.sinh());
    Ok(MeanFieldFrame {
        theta0,
        m,
        r,
        s,
        theta,
        delta1,
        delta2: 0.5 * r,
    })
}

impl MeanFieldFrame {
    /// `sqrt((r + s)/(r - s))`, the definition the closed-form `alpha`
    /// must reproduce.
    pub fn alpha(&self) -> f64 {
        ((self.r + self.s) / (self.r - self.s)).sqrt()
    }
}

/// Squeezing prefactor `α` feeding every covariance matrix.
///
/// `sqrt((h-1)/(h-γ))` for `h > 1` and `sqrt((1-h²)/(1-γ))` for `h < 1`;
/// refused at the critical point where it vanishes.
pub fn alpha(c: Couplings) -> Result<f64> {
    let (gamma, h) = (c.gamma, c.h);
    if h == 1.0 {
        return Err(Error::SingularPoint(format!(
            "alpha vanishes at h = 1 (gamma = {gamma})"
        )));
    }
    let value = match c.phase() {
        Phase::Symmetric => ((h - 1.0) / (h - gamma)).sqrt(),
        Phase::Broken => ((1.0 - h) * (1.0 + h) / (1.0 - gamma)).sqrt(),
    };
    // the (r, s) route cancels catastrophically next to h = 1
    debug_assert!(
        (h - 1.0).abs() < 1e-6
            || quadratic_params(c)
            .map(|f| (f.alpha() - value).abs() <= 1e-10 * value.max(1.0))
            .unwrap_or(false),
        "closed-form alpha disagrees with sqrt((r+s)/(r-s)) at {c:?}"
    );
    Ok(value)
}
