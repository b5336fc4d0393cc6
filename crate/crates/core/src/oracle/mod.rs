//! Exact finite-N reference: diagonalization in the Dicke sector and
//! reduced-state analysis across spin groups.

pub mod dicke;
pub mod reduced;
pub mod tridiag;

pub use dicke::{exact_ground_state, split_dicke, DickeGroundState};
pub use reduced::{
    bipartite_entropy_exact, quadrature_covariance, reduced_13, tripartite_reduced_exact,
    PartitionedState, TripartiteOracle,
};

use crate::error::{Error, Result};
use crate::par;

/// Group size `round(τ N)`, kept inside `[1, N-1]`.
pub fn group_size(n: usize, tau: f64) -> usize {
    ((tau * n as f64).round() as usize).clamp(1, n.saturating_sub(1).max(1))
}

/// Entanglement entropy of the `round(τ₁N)`-spin group for each `N`.
pub fn entropy_series(ns: &[usize], gamma: f64, h: f64, tau1: f64) -> Result<Vec<f64>> {
    par::map(ns, |&n| {
        let state = exact_ground_state(n, gamma, h)?;
        bipartite_entropy_exact(&state, group_size(n, tau1))
    })
    .into_iter()
    .collect()
}

/// Least-squares slope of `values` against `ln N`.
pub fn slope_vs_ln_n(ns: &[usize], values: &[f64]) -> Result<f64> {
    if ns.len() != values.len() || ns.len() < 2 {
        return Err(Error::InvalidSpec(
            "need at least two (N, value) pairs".into(),
        ));
    }
    let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = values.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidSpec("all N equal".into()));
    }
    let sxy: f64 = xs.iter().zip(values).map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok(sxy / sxx)
}

/// Oracle results for an equal tripartition `N₁ = N₃ = round(τN)`.
pub fn tripartite_series(
    ns: &[usize],
    gamma: f64,
    h: f64,
    tau: f64,
) -> Result<Vec<TripartiteOracle>> {
    par::map(ns, |&n| {
        let state = exact_ground_state(n, gamma, h)?;
        let g = group_size(n, tau);
        tripartite_reduced_exact(&state, g, g)
    })
    .into_iter()
    .collect()
}
