//! Ground state of `H = -(1/N)(Sx² + γ Sy²) - h Sz` in the maximal-spin
//! sector `S = N/2`, and the split of a Dicke state over spin groups.
//!
//! Internally states are indexed by the excitation number `k = N/2 - M`.
//! `Sx² + γSy²` couples `k` only to `k` and `k ± 2`, so the matrix splits
//! into two tridiagonal parity blocks.

use super::tridiag;
use crate::error::{Error, Result};
use crate::model::Couplings;

pub const MAX_SPINS: usize = 2048;

#[derive(Debug, Clone, PartialEq)]
pub struct DickeGroundState {
    pub n_spins: usize,
    /// Real amplitudes on `|S = N/2, M⟩`, `M = -N/2, …, N/2` ascending.
    pub amplitudes: Vec<f64>,
    pub energy: f64,
}

impl DickeGroundState {
    /// Amplitude of the state with `k` flipped spins (`M = N/2 - k`).
    pub fn by_excitation(&self, k: usize) -> f64 {
        self.amplitudes[self.n_spins - k]
    }

    /// Amplitudes indexed by excitation number.
    pub fn excitation_amplitudes(&self) -> Vec<f64> {
        self.amplitudes.iter().rev().copied().collect()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt()
    }
}

/// Diagonal and `k ↔ k+2` coupling of the Hamiltonian, by excitation number.
pub fn hamiltonian_bands(n: usize, c: Couplings) -> (Vec<f64>, Vec<f64>) {
    let nf = n as f64;
    let s = 0.5 * nf;
    let m_of = |k: usize| s - k as f64;
    let diag = (0..=n)
        .map(|k| {
            let m = m_of(k);
            -(1.0 + c.gamma) / (2.0 * nf) * (s * (s + 1.0) - m * m) - c.h * m
        })
        .collect();
    let skip = (0..n.saturating_sub(1))
        .map(|k| {
            let m = m_of(k);
            -(1.0 - c.gamma) / (4.0 * nf)
                * ((s + m) * (s - m + 1.0)).sqrt()
                * ((s + m - 1.0) * (s - m + 2.0)).sqrt()
        })
        .collect();
    (diag, skip)
}

/// Dense `(N+1)×(N+1)` Hamiltonian over excitation numbers.
pub fn dense_hamiltonian(n: usize, c: Couplings) -> nalgebra::DMatrix<f64> {
    let (diag, skip) = hamiltonian_bands(n, c);
    let mut h = nalgebra::DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag));
    for (k, &v) in skip.iter().enumerate() {
        h[(k, k + 2)] = v;
        h[(k + 2, k)] = v;
    }
    h
}

/// Lowest eigenpair in the `S = N/2` sector.
pub fn exact_ground_state(n: usize, gamma: f64, h: f64) -> Result<DickeGroundState> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 spins, got {n}")));
    }
    if n > MAX_SPINS {
        return Err(Error::DimensionTooLarge {
            dim: n + 1,
            cap: MAX_SPINS + 1,
        });
    }
    let c = Couplings::new(gamma, h)?;
    let (diag, skip) = hamiltonian_bands(n, c);

    let mut best: Option<(f64, usize, Vec<f64>)> = None;
    for parity in 0..2 {
        let idx: Vec<usize> = (parity..=n).step_by(2).collect();
        let d: Vec<f64> = idx.iter().map(|&k| diag[k]).collect();
        let e: Vec<f64> = idx[..idx.len() - 1].iter().map(|&k| skip[k]).collect();
        let (energy, v) = tridiag::lowest_eigenpair(&d, &e);
        // strict < keeps the even block on an exact tie
        if best.as_ref().is_none_or(|b| energy < b.0) {
            best = Some((energy, parity, v));
        }
    }
    let (energy, parity, v) = best.expect("two parity blocks");
    let mut by_k = vec![0.0; n + 1];
    for (j, k) in (parity..=n).step_by(2).enumerate() {
        by_k[k] = v[j];
    }
    by_k.reverse();
    Ok(DickeGroundState {
        n_spins: n,
        amplitudes: by_k,
        energy,
    })
}

/// `ln k!` for `k ≤ n`, accumulated with compensated summation.
#[derive(Debug, Clone)]
pub struct LnFactorials(Vec<f64>);

impl LnFactorials {
    pub fn new(n: usize) -> Self {
        let mut table = Vec::with_capacity(n + 1);
        table.push(0.0);
        let (mut sum, mut carry) = (0.0f64, 0.0f64);
        for k in 1..=n {
            let y = (k as f64).ln() - carry;
            let t = sum + y;
            carry = (t - sum) - y;
            sum = t;
            table.push(sum);
        }
        LnFactorials(table)
    }

    pub fn ln_binomial(&self, n: usize, k: usize) -> f64 {
        self.0[n] - self.0[k] - self.0[n - k]
    }
}

/// `sqrt(C(N₁,k₁) C(N₂,k₂) / C(N,k))` with `k₂ = k - k₁`, for
/// `k₁ = 0, …, min(k, N₁)`; infeasible `k₁` (k₂ > N₂) get 0.
pub fn split_dicke(n: usize, n1: usize, k: usize) -> Result<Vec<f64>> {
    if n1 == 0 || n1 >= n {
        return Err(Error::InvalidPartition(format!(
            "group size {n1} must lie in [1, {n})"
        )));
    }
    if k > n {
        return Err(Error::InvalidParameter(format!(
            "excitation number {k} exceeds {n}"
        )));
    }
    let lf = LnFactorials::new(n);
    Ok(split_with(&lf, n, n1, k))
}

pub(crate) fn split_with(lf: &LnFactorials, n: usize, n1: usize, k: usize) -> Vec<f64> {
    let n2 = n - n1;
    (0..=k.min(n1))
        .map(|k1| {
            let k2 = k - k1;
            if k2 > n2 {
                0.0
            } else {
                (0.5 * (lf.ln_binomial(n1, k1) + lf.ln_binomial(n2, k2) - lf.ln_binomial(n, k)))
                    .exp()
            }
        })
        .collect()
}
