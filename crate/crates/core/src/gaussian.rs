//! Two-mode covariance matrices of the LMG ground state, their standard
//! form and symplectic spectra.
//!
//! Quadratures are ordered `(x₁, p₁, x₂, p₂)` and normalized so that the
//! vacuum is the identity. The ground state only squeezes the collective
//! mode, so `Γ` never couples an `x` to a `p`: it splits into an x-block and
//! a p-block, which is what makes all the invariants below cheap and stable.

use crate::error::{Error, Result};
use crate::model::{alpha, ModelPoint, Partition, PartitionKind};
use crate::numeric::{guarded_sqrt, relative_close};

/// Smallest admissible symplectic eigenvalue.
pub const PHYSICALITY_TOLERANCE: f64 = 1e-10;

pub type Matrix4 = [[f64; 4]; 4];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeCovariance {
    pub matrix: Matrix4,
    pub kind: PartitionKind,
    /// `tau1` for a bipartition, `tau` for a tripartition.
    pub tau: f64,
    pub alpha: f64,
}

/// Standard form `(a, b, c1, c2)` together with the local symplectic
/// invariants and the spectra derived from them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StandardForm {
    pub a: f64,
    pub b: f64,
    /// x-block correlation (carries the sign of the x-quadrature coupling).
    pub c1: f64,
    /// p-block correlation.
    pub c2: f64,
    /// `A = det G₁ = a²`
    pub det_g1: f64,
    /// `B = det G₂ = b²`
    pub det_g2: f64,
    /// `C = det C₁ = c1 c2`
    pub det_c: f64,
    /// `D = det Γ`
    pub det_gamma: f64,
    /// `M = A + B + 2C`
    pub m: f64,
    pub nu_minus: f64,
    pub nu_plus: f64,
    /// Smallest symplectic eigenvalue of the partial transpose.
    pub nu_tilde_minus: f64,
}

/// `A₁ = 1/α - 1` (x quadrature) and `B₁ = α - 1` (p quadrature).
fn squeeze_offsets(alpha: f64) -> (f64, f64) {
    (1.0 / alpha - 1.0, alpha - 1.0)
}

fn block_matrix(a1: f64, b1: f64, t1: f64, t2: f64) -> Matrix4 {
    let cross = (t1 * t2).sqrt();
    [
        [a1 * t1 + 1.0, 0.0, a1 * cross, 0.0],
        [0.0, b1 * t1 + 1.0, 0.0, b1 * cross],
        [a1 * cross, 0.0, a1 * t2 + 1.0, 0.0],
        [0.0, b1 * cross, 0.0, b1 * t2 + 1.0],
    ]
}

/// Ground-state covariance between two complementary spin groups.
pub fn bipartite_covariance(point: &ModelPoint) -> Result<TwoModeCovariance> {
    let Partition::Bipartite { tau1 } = point.partition else {
        return Err(Error::InvalidPartition(
            "bipartite covariance needs a bipartition".into(),
        ));
    };
    let alpha = alpha(point.couplings())?;
    let (a1, b1) = squeeze_offsets(alpha);
    Ok(TwoModeCovariance {
        matrix: block_matrix(a1, b1, tau1, 1.0 - tau1),
        kind: PartitionKind::Bipartite,
        tau: tau1,
        alpha,
    })
}

/// Covariance of the two outer groups after tracing out the middle one.
/// The traced group only enters through `tau1 + tau3 < 1`.
pub fn tripartite_covariance(point: &ModelPoint) -> Result<TwoModeCovariance> {
    let Partition::Tripartite { tau } = point.partition else {
        return Err(Error::InvalidPartition(
            "tripartite covariance needs a tripartition".into(),
        ));
    };
    let alpha = alpha(point.couplings())?;
    let (a1, b1) = squeeze_offsets(alpha);
    Ok(TwoModeCovariance {
        matrix: block_matrix(a1, b1, tau, tau),
        kind: PartitionKind::Tripartite,
        tau,
        alpha,
    })
}

pub fn covariance(point: &ModelPoint) -> Result<TwoModeCovariance> {
    match point.partition {
        Partition::Bipartite { .. } => bipartite_covariance(point),
        Partition::Tripartite { .. } => tripartite_covariance(point),
    }
}

/// Closed-form `(A, B, C, D)` for the LMG covariance matrices.
pub fn closed_form_invariants(kind: PartitionKind, tau: f64, alpha: f64) -> (f64, f64, f64, f64) {
    let ab = (alpha * tau + (1.0 - tau)) * (tau + alpha * (1.0 - tau)) / alpha;
    let d = (alpha - 1.0) * (alpha - 1.0);
    match kind {
        PartitionKind::Bipartite => {
            let c = (2.0 - alpha - 1.0 / alpha) * (1.0 - tau) * tau;
            (ab, ab, c, 1.0)
        }
        PartitionKind::Tripartite => {
            let c = -d * tau * tau / alpha;
            let det = (alpha + 2.0 * d * (tau - 2.0 * tau * tau)) / alpha;
            (ab, ab, c, det)
        }
    }
}

/// Reduce a covariance matrix to standard form.
///
/// The invariants come straight from the block determinants. The standard
/// form entries are obtained by squeezing each mode locally until its
/// diagonal block is proportional to the identity; this fixes `c1` to the
/// x-block and `c2` to the p-block.
pub fn standard_form(cov: &TwoModeCovariance) -> Result<StandardForm> {
    let g = &cov.matrix;
    for i in 0..4 {
        for j in 0..i {
            if !relative_close(g[i][j], g[j][i], 1e-12) {
                return Err(Error::NonPhysical(format!(
                    "covariance matrix not symmetric at ({i}, {j})"
                )));
            }
        }
    }
    for (i, j) in [(0, 1), (0, 3), (1, 2), (2, 3)] {
        if g[i][j] != 0.0 || g[j][i] != 0.0 {
            return Err(Error::NonPhysical(format!(
                "x-p coupling at ({i}, {j}) is not supported"
            )));
        }
    }
    let (gx1, gp1, gx2, gp2) = (g[0][0], g[1][1], g[2][2], g[3][3]);
    if gx1 <= 0.0 || gp1 <= 0.0 || gx2 <= 0.0 || gp2 <= 0.0 {
        return Err(Error::NonPhysical(
            "diagonal variances must be positive".into(),
        ));
    }
    let (cx, cp) = (g[0][2], g[1][3]);

    let det_g1 = gx1 * gp1;
    let det_g2 = gx2 * gp2;
    let det_c = cx * cp;
    let det_gamma = (gx1 * gx2 - cx * cx) * (gp1 * gp2 - cp * cp);

    let squeeze = ((gp1 * gp2) / (gx1 * gx2)).sqrt().sqrt();
    let sf = assemble(
        det_g1.sqrt(),
        det_g2.sqrt(),
        cx * squeeze,
        cp / squeeze,
        det_g1,
        det_g2,
        det_c,
        det_gamma,
    )?;

    if cfg!(debug_assertions) {
        let (a, b, c, d) = closed_form_invariants(cov.kind, cov.tau, cov.alpha);
        let consistent = [(a, det_g1), (b, det_g2), (c, det_c), (d, det_gamma)]
            .iter()
            .all(|&(x, y)| relative_close(x, y, 1e-9));
        // only meaningful for matrices built by this module
        let built_here = {
            let (a1, b1) = squeeze_offsets(cov.alpha);
            let (t1, t2) = match cov.kind {
                PartitionKind::Bipartite => (cov.tau, 1.0 - cov.tau),
                PartitionKind::Tripartite => (cov.tau, cov.tau),
            };
            block_matrix(a1, b1, t1, t2) == cov.matrix
        };
        debug_assert!(!built_here || consistent, "closed-form invariants disagree");
    }
    Ok(sf)
}

impl StandardForm {
    /// Build from standard-form entries directly.
    pub fn from_entries(a: f64, b: f64, c1: f64, c2: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0) {
            return Err(Error::NonPhysical("a and b must be positive".into()));
        }
        let det_gamma = (a * b - c1 * c1) * (a * b - c2 * c2);
        assemble(a, b, c1, c2, a * a, b * b, c1 * c2, det_gamma)
    }

    /// The 4×4 standard-form matrix.
    pub fn to_matrix(&self) -> Matrix4 {
        let (a, b, c1, c2) = (self.a, self.b, self.c1, self.c2);
        [
            [a, 0.0, c1, 0.0],
            [0.0, a, 0.0, c2],
            [c1, 0.0, b, 0.0],
            [0.0, c2, 0.0, b],
        ]
    }

    /// Symmetric states (`a == b`) admit the closed-form entanglement of
    /// formation.
    pub fn is_symmetric(&self) -> bool {
        relative_close(self.a, self.b, 1e-10)
    }
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    a: f64,
    b: f64,
    c1: f64,
    c2: f64,
    det_g1: f64,
    det_g2: f64,
    det_c: f64,
    det_gamma: f64,
) -> Result<StandardForm> {
    let mut sf = StandardForm {
        a,
        b,
        c1,
        c2,
        det_g1,
        det_g2,
        det_c,
        det_gamma,
        m: det_g1 + det_g2 + 2.0 * det_c,
        nu_minus: f64::NAN,
        nu_plus: f64::NAN,
        nu_tilde_minus: f64::NAN,
    };
    let (nu_minus, nu_plus) = symplectic_eigenvalues(&sf)?;
    sf.nu_minus = nu_minus;
    sf.nu_plus = nu_plus;
    sf.nu_tilde_minus = ptranspose_eigenvalue(&sf)?;
    Ok(sf)
}

/// `ν±² = (M ± sqrt(M² - 4D)) / 2`.
///
/// The radicand is evaluated as `(a²-b²)² + 4(a c2 + b c1)(a c1 + b c2)`,
/// which equals `M² - 4D` identically but does not cancel for pure states.
pub fn symplectic_eigenvalues(sf: &StandardForm) -> Result<(f64, f64)> {
    let (a, b, c1, c2) = (sf.a, sf.b, sf.c1, sf.c2);
    let radicand =
        (sf.det_g1 - sf.det_g2).powi(2) + 4.0 * (a * c2 + b * c1) * (a * c1 + b * c2);
    let root = guarded_sqrt(radicand, sf.m * sf.m, "symplectic spectrum")?;
    let nu_plus_sq = 0.5 * (sf.m + root);
    if !(nu_plus_sq > 0.0) || !(sf.det_gamma > 0.0) {
        return Err(Error::NonPhysical(format!(
            "non-positive symplectic invariants (M = {}, D = {})",
            sf.m, sf.det_gamma
        )));
    }
    let nu_plus = nu_plus_sq.sqrt();
    let nu_minus = (sf.det_gamma / nu_plus_sq).sqrt();
    if nu_minus < 1.0 - PHYSICALITY_TOLERANCE {
        return Err(Error::NonPhysical(format!(
            "symplectic eigenvalue {nu_minus} violates the uncertainty bound"
        )));
    }
    Ok((nu_minus, nu_plus))
}

/// Smallest symplectic eigenvalue of the partially transposed state, from
/// `M̃ = A + B - 2C` in place of `M`.
pub fn ptranspose_eigenvalue(sf: &StandardForm) -> Result<f64> {
    let (a, b, c1, c2) = (sf.a, sf.b, sf.c1, sf.c2);
    let m_tilde = sf.det_g1 + sf.det_g2 - 2.0 * sf.det_c;
    let radicand =
        (sf.det_g1 - sf.det_g2).powi(2) + 4.0 * (b * c1 - a * c2) * (a * c1 - b * c2);
    let root = guarded_sqrt(radicand, m_tilde * m_tilde, "partial-transpose spectrum")?;
    // (M̃ - root)/2 rewritten to avoid cancellation
    let nu_sq = 2.0 * sf.det_gamma / (m_tilde + root);
    if !(nu_sq > 0.0) {
        return Err(Error::NonPhysical(format!(
            "partial-transpose eigenvalue squared is {nu_sq}"
        )));
    }
    Ok(nu_sq.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn bip(gamma: f64, h: f64, tau1: f64) -> TwoModeCovariance {
        bipartite_covariance(&ModelPoint::bipartite(gamma, h, tau1).unwrap()).unwrap()
    }

    fn tri(gamma: f64, h: f64, tau: f64) -> TwoModeCovariance {
        tripartite_covariance(&ModelPoint::tripartite(gamma, h, tau).unwrap()).unwrap()
    }

    fn assert_identity(m: &Matrix4, tol: f64) {
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((m[i][j] - want).abs() < tol, "({i},{j}) = {}", m[i][j]);
            }
        }
    }

    #[test]
    fn free_spin_limit_is_vacuum() {
        assert_identity(&bip(0.5, 1e12, 1.0 / 3.0).matrix, 1e-6);
    }

    #[test]
    fn factorization_point_is_vacuum() {
        assert_identity(&bip(0.5, 0.5f64.sqrt(), 0.25).matrix, 1e-15);
        assert_identity(&tri(0.5, 0.5f64.sqrt(), 1.0 / 3.0).matrix, 1e-15);
    }

    #[test]
    fn bipartite_entry_example() {
        let g = bip(0.5, 2.0, 0.5).matrix;
        assert_abs_diff_eq!(g[0][0], (1.5f64.sqrt() - 1.0) / 2.0 + 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(g[0][0], 1.1123724356957945, epsilon = 1e-14);
    }

    #[test]
    fn tripartite_entry_example() {
        let g = tri(0.0, 2.0, 1.0 / 3.0).matrix;
        assert_abs_diff_eq!(g[0][2], (2f64.sqrt() - 1.0) / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(g[0][2], 0.13807118745769836, epsilon = 1e-14);
    }

    #[test]
    fn tripartite_matches_bipartite_at_half() {
        // the tripartite matrix at tau -> 1/2 is the bipartite one at tau1 = 1/2
        let t = tri(0.3, 1.7, 0.5 - 1e-12).matrix;
        let b = bip(0.3, 1.7, 0.5).matrix;
        for i in 0..4 {
            for j in 0..4 {
                assert!((t[i][j] - b[i][j]).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn bipartite_standard_form_example() {
        let sf = standard_form(&bip(0.5, 2.0, 0.5)).unwrap();
        let alpha = (2.0f64 / 3.0).sqrt();
        assert_abs_diff_eq!(sf.det_g1, (1.0 + alpha).powi(2) / (4.0 * alpha), epsilon = 1e-14);
        assert_abs_diff_eq!(sf.det_g1, 1.010_310_363_079_829, epsilon = 1e-14);
        assert_abs_diff_eq!(sf.det_g2, sf.det_g1, epsilon = 1e-14);
        assert_abs_diff_eq!(sf.det_c, -0.010310363079828771, epsilon = 1e-14);
        assert_abs_diff_eq!(sf.det_gamma, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(sf.m, 2.0, epsilon = 1e-14);
    }

    #[test]
    fn standard_form_solves_its_defining_equations() {
        for cov in [bip(0.2, 0.4, 0.3), bip(0.7, 1.3, 0.1), tri(0.5, 1.1, 0.2), tri(0.1, 0.6, 0.45)] {
            let sf = standard_form(&cov).unwrap();
            let rel = |x: f64, y: f64| (x - y).abs() / y.abs().max(1.0);
            assert!(rel(sf.a * sf.a, sf.det_g1) < 1e-10);
            assert!(rel(sf.b * sf.b, sf.det_g2) < 1e-10);
            assert!(rel(sf.c1 * sf.c2, sf.det_c) < 1e-10);
            let d = (sf.a * sf.b - sf.c1 * sf.c1) * (sf.a * sf.b - sf.c2 * sf.c2);
            assert!(rel(d, sf.det_gamma) < 1e-10);
            assert!(rel(sf.nu_minus * sf.nu_plus, sf.det_gamma.sqrt()) < 1e-10);
            assert!(sf.nu_plus >= sf.nu_minus && sf.nu_minus > 0.0);
        }
    }

    #[test]
    fn c1_follows_the_x_block() {
        // symmetric phase: x quadrature is anti-squeezed (A₁ > 0), p squeezed
        let sf = standard_form(&bip(0.5, 2.0, 0.3)).unwrap();
        assert!(sf.c1 > 0.0 && sf.c2 < 0.0);
        let sf = standard_form(&bip(0.5, 0.2, 0.3)).unwrap();
        assert!(sf.c1 < 0.0 && sf.c2 > 0.0);
    }

    #[test]
    fn tripartite_determinant_tends_to_one_at_half() {
        let sf = standard_form(&tri(0.5, 2.0, 0.5 - 1e-9)).unwrap();
        assert!((sf.det_gamma - 1.0).abs() < 1e-8);
    }

    #[test]
    fn bipartite_states_are_pure() {
        for &(g, h, t) in &[(0.0, 0.1, 0.5), (0.5, 2.0, 0.1), (0.9, 1.0 + 1e-6, 0.3), (0.2, 1.0 - 1e-6, 0.45)] {
            let sf = standard_form(&bip(g, h, t)).unwrap();
            assert!((sf.nu_minus - 1.0).abs() < 1e-10, "{g} {h} {t}: {}", sf.nu_minus);
            assert!((sf.nu_plus - 1.0).abs() < 1e-10, "{g} {h} {t}: {}", sf.nu_plus);
            assert!((sf.det_gamma - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn tripartite_spectrum_closed_form() {
        for &(g, h, t) in &[(0.0, 0.1, 0.2), (0.5, 2.0, 1.0 / 3.0), (0.9, 1.0 + 1e-6, 0.3)] {
            let sf = standard_form(&tri(g, h, t)).unwrap();
            assert!((sf.nu_minus - 1.0).abs() < 1e-12);
            assert!((sf.nu_plus - sf.det_gamma.sqrt()).abs() < 1e-10 * sf.nu_plus);
        }
        let sf = standard_form(&tri(0.5, 0.5f64.sqrt(), 1.0 / 3.0)).unwrap();
        assert_abs_diff_eq!(sf.nu_plus, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn ptranspose_examples() {
        let vac = StandardForm::from_entries(1.0, 1.0, 0.0, 0.0).unwrap();
        assert_eq!(vac.nu_tilde_minus, 1.0);
        let sf = standard_form(&bip(0.5, 2.0, 0.5)).unwrap();
        assert!(sf.nu_tilde_minus < 1.0);
        // pure symmetric state: ν̃₋ = a - |c|
        assert_abs_diff_eq!(sf.nu_tilde_minus, sf.a - sf.c1.abs(), epsilon = 1e-14);
        let sf = standard_form(&tri(0.5, 1.0 + 1e-10, 1.0 / 3.0)).unwrap();
        assert!(sf.nu_tilde_minus > 0.1 && sf.nu_tilde_minus < 1.0);
    }

    #[test]
    fn rejects_unphysical_input() {
        let mut cov = bip(0.5, 2.0, 0.3);
        cov.matrix[0][1] = 0.1;
        cov.matrix[1][0] = 0.1;
        assert!(matches!(standard_form(&cov), Err(Error::NonPhysical(_))));
        // squeezed below the vacuum in both quadratures
        assert!(StandardForm::from_entries(0.5, 0.5, 0.0, 0.0).is_err());
        let bad = TwoModeCovariance {
            matrix: [
                [1.0, 0.0, 0.0, 0.0],
                [0.0, 1.0, 0.0, 0.0],
                [0.0, 0.0, -1.0, 0.0],
                [0.0, 0.0, 0.0, 1.0],
            ],
            kind: PartitionKind::Bipartite,
            tau: 0.5,
            alpha: 1.0,
        };
        assert!(standard_form(&bad).is_err());
    }

    #[test]
    fn wrong_partition_is_rejected() {
        let p = ModelPoint::tripartite(0.5, 2.0, 0.3).unwrap();
        assert!(matches!(bipartite_covariance(&p), Err(Error::InvalidPartition(_))));
        let p = ModelPoint::bipartite(0.5, 1.0, 0.3).unwrap();
        assert!(matches!(covariance(&p), Err(Error::SingularPoint(_))));
    }
}
