//! Reduced states of the Dicke ground state across spin groups.
//!
//! A Dicke state with `k` excitations splits over groups of sizes
//! `N₁, N₂, N₃` as `Σ sqrt(C(N₁,k₁)C(N₂,k₂)C(N₃,k₃)/C(N,k)) |k₁⟩|k₂⟩|k₃⟩`.
//! Excitation numbers whose ground-state amplitude is below
//! [`SUPPORT_CUTOFF`] are dropped; the weight this removes is reported.

use nalgebra::{DMatrix, SymmetricEigen};

use super::dicke::{split_with, DickeGroundState, LnFactorials};
use crate::error::{Error, Result};
use crate::par;

pub const SUPPORT_CUTOFF: f64 = 1e-16;
/// Cap on `(K₁+1)(K₃+1)`, the effective dimension of `ρ₁₃`.
pub const MAX_REDUCED_DIM: usize = 4096;
const EIGENVALUE_TOLERANCE: f64 = 1e-10;

/// Largest excitation number carrying amplitude above the cutoff.
pub fn support_limit(state: &DickeGroundState) -> usize {
    (0..=state.n_spins)
        .rev()
        .find(|&k| state.by_excitation(k).abs() > SUPPORT_CUTOFF)
        .unwrap_or(0)
}

fn von_neumann(eigenvalues: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &w in eigenvalues {
        if !(-EIGENVALUE_TOLERANCE..=1.0 + EIGENVALUE_TOLERANCE).contains(&w) {
            return Err(Error::NonPhysical(format!(
                "density-matrix eigenvalue {w} outside [0, 1]"
            )));
        }
        if w > 0.0 {
            s -= w * w.ln();
        }
    }
    Ok(s)
}

fn check_groups(n: usize, sizes: &[usize]) -> Result<()> {
    if sizes.contains(&0) || sizes.iter().sum::<usize>() > n {
        return Err(Error::InvalidPartition(format!(
            "group sizes {sizes:?} do not fit into {n} spins"
        )));
    }
    Ok(())
}

/// Schmidt coefficients squared of the ground state across `(N₁, N - N₁)`.
pub fn schmidt_spectrum(state: &DickeGroundState, n1: usize) -> Result<Vec<f64>> {
    let n = state.n_spins;
    if n1 == 0 || n1 >= n {
        return Err(Error::InvalidPartition(format!(
            "group size {n1} must lie in [1, {n})"
        )));
    }
    let n2 = n - n1;
    let kmax = support_limit(state);
    let (r1, r2) = (n1.min(kmax), n2.min(kmax));
    let lf = LnFactorials::new(n);
    let mut p = DMatrix::<f64>::zeros(r1 + 1, r2 + 1);
    for k in 0..=kmax {
        let amp = state.by_excitation(k);
        if amp == 0.0 {
            continue;
        }
        for (k1, c) in split_with(&lf, n, n1, k).into_iter().enumerate() {
            let k2 = k - k1;
            if k1 <= r1 && k2 <= r2 {
                p[(k1, k2)] = amp * c;
            }
        }
    }
    let mut w: Vec<f64> = p.singular_values().iter().map(|s| s * s).collect();
    w.sort_by(|a, b| b.total_cmp(a));
    Ok(w)
}

/// Entanglement entropy (nats) between the first `N₁` spins and the rest.
pub fn bipartite_entropy_exact(state: &DickeGroundState, n1: usize) -> Result<f64> {
    von_neumann(&schmidt_spectrum(state, n1)?)
}

/// Amplitudes `T[k₁][k₂][k₃]` of the ground state over three groups,
/// restricted to the support. Group 2 may be empty.
struct GroupTensor {
    dims: (usize, usize, usize),
    data: Vec<f64>,
}

impl GroupTensor {
    fn build(state: &DickeGroundState, n1: usize, n3: usize) -> GroupTensor {
        let n = state.n_spins;
        let n2 = n - n1 - n3;
        let kmax = support_limit(state);
        let dims = (n1.min(kmax) + 1, n2.min(kmax) + 1, n3.min(kmax) + 1);
        let lf = LnFactorials::new(n);
        let mut data = vec![0.0; dims.0 * dims.1 * dims.2];
        for k1 in 0..dims.0 {
            for k3 in 0..dims.2 {
                for k2 in 0..dims.1 {
                    let k = k1 + k2 + k3;
                    if k > n {
                        break;
                    }
                    let amp = state.by_excitation(k);
                    if amp == 0.0 {
                        continue;
                    }
                    let ln_c = lf.ln_binomial(n1, k1)
                        + lf.ln_binomial(n2, k2)
                        + lf.ln_binomial(n3, k3)
                        - lf.ln_binomial(n, k);
                    data[(k1 * dims.1 + k2) * dims.2 + k3] = amp * (0.5 * ln_c).exp();
                }
            }
        }
        GroupTensor { dims, data }
    }

    fn at(&self, k1: usize, k2: usize, k3: usize) -> f64 {
        self.data[(k1 * self.dims.1 + k2) * self.dims.2 + k3]
    }
}

/// `ρ₁₃` and the partial transpose, both block-diagonal in the parity of
/// `k₁ + k₃`.
#[derive(Debug, Clone)]
pub struct PartitionedState {
    pub group_sizes: (usize, usize, usize),
    /// Retained excitation range per measured group: `k₁ ≤ dims.0 - 1`,
    /// `k₃ ≤ dims.1 - 1`.
    pub dims: (usize, usize),
    /// Index lists `(k₁, k₃)` of the two parity blocks.
    pub block_indices: [Vec<(usize, usize)>; 2],
    pub rho_blocks: [DMatrix<f64>; 2],
}

impl PartitionedState {
    pub fn trace(&self) -> f64 {
        self.rho_blocks.iter().map(|b| b.trace()).sum()
    }

    pub fn effective_dim(&self) -> usize {
        self.dims.0 * self.dims.1
    }

    fn locate(&self) -> Vec<(usize, usize)> {
        let mut map = vec![(0, 0); self.effective_dim()];
        for (b, idx) in self.block_indices.iter().enumerate() {
            for (j, &(k1, k3)) in idx.iter().enumerate() {
                map[k1 * self.dims.1 + k3] = (b, j);
            }
        }
        map
    }

    /// `ρ₁₃[(k₁,k₃),(k₁',k₃')]`; zero across parity blocks.
    pub fn element(&self, a: (usize, usize), b: (usize, usize)) -> f64 {
        let map = self.locate();
        let (ba, ia) = map[a.0 * self.dims.1 + a.1];
        let (bb, ib) = map[b.0 * self.dims.1 + b.1];
        if ba == bb {
            self.rho_blocks[ba][(ia, ib)]
        } else {
            0.0
        }
    }

    /// Partial transpose on group 3, block by block.
    pub fn partial_transpose_blocks(&self) -> [DMatrix<f64>; 2] {
        let map = self.locate();
        let d3 = self.dims.1;
        let pt = |b: usize| {
            let idx = &self.block_indices[b];
            DMatrix::from_fn(idx.len(), idx.len(), |i, j| {
                let (k1, k3) = idx[i];
                let (l1, l3) = idx[j];
                let (bx, ix) = map[k1 * d3 + l3];
                let (by, iy) = map[l1 * d3 + k3];
                debug_assert_eq!(bx, by);
                self.rho_blocks[bx][(ix, iy)]
            })
        };
        [pt(0), pt(1)]
    }

    /// Single-group reduced matrices `(ρ₁, ρ₃)`.
    pub fn marginals(&self) -> (DMatrix<f64>, DMatrix<f64>) {
        let (d1, d3) = self.dims;
        let mut r1 = DMatrix::zeros(d1, d1);
        let mut r3 = DMatrix::zeros(d3, d3);
        for (b, idx) in self.block_indices.iter().enumerate() {
            let rho = &self.rho_blocks[b];
            for (i, &(k1, k3)) in idx.iter().enumerate() {
                for (j, &(l1, l3)) in idx.iter().enumerate() {
                    if k3 == l3 {
                        r1[(k1, l1)] += rho[(i, j)];
                    }
                    if k1 == l1 {
                        r3[(k3, l3)] += rho[(i, j)];
                    }
                }
            }
        }
        (r1, r3)
    }
}

/// Builds `ρ₁₃ = Tr₂ |ψ⟩⟨ψ|` for groups of sizes `N₁`, `N₃` (group 2 is the
/// remainder).
pub fn reduced_13(state: &DickeGroundState, n1: usize, n3: usize) -> Result<PartitionedState> {
    let n = state.n_spins;
    check_groups(n, &[n1, n3])?;
    if n1 + n3 >= n {
        return Err(Error::InvalidPartition(
            "tripartition needs a non-empty traced group".into(),
        ));
    }
    let kmax = support_limit(state);
    let dims = (n1.min(kmax) + 1, n3.min(kmax) + 1);
    if dims.0 * dims.1 > MAX_REDUCED_DIM {
        return Err(Error::DimensionTooLarge {
            dim: dims.0 * dims.1,
            cap: MAX_REDUCED_DIM,
        });
    }
    let t = GroupTensor::build(state, n1, n3);
    let d2 = t.dims.1;
    let mut block_indices = [Vec::new(), Vec::new()];
    for k1 in 0..dims.0 {
        for k3 in 0..dims.1 {
            block_indices[(k1 + k3) % 2].push((k1, k3));
        }
    }
    let block = |b: usize| {
        let idx: &Vec<(usize, usize)> = &block_indices[b];
        let m = DMatrix::from_fn(idx.len(), d2, |i, k2| t.at(idx[i].0, k2, idx[i].1));
        &m * m.transpose()
    };
    let (r0, r1) = par::join(|| block(0), || block(1));
    Ok(PartitionedState {
        group_sizes: (n1, n - n1 - n3, n3),
        dims,
        block_indices,
        rho_blocks: [r0, r1],
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TripartiteOracle {
    pub entropy_1: f64,
    pub entropy_3: f64,
    pub entropy_13: f64,
    /// `ln ‖ρ₁₃^{T₃}‖₁`, nats.
    pub log_negativity: f64,
    /// `S₁ + S₃ - S₁₃`, nats.
    pub mutual_information: f64,
    pub trace: f64,
    /// `1 - Tr ρ₁₃`: weight lost to the support cutoff.
    pub discarded_weight: f64,
    pub effective_dim: usize,
}

fn eigenvalues(m: DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    SymmetricEigen::new(m).eigenvalues.iter().copied().collect()
}

/// Entropies, logarithmic negativity and mutual information of the two
/// measured groups.
pub fn tripartite_reduced_exact(
    state: &DickeGroundState,
    n1: usize,
    n3: usize,
) -> Result<TripartiteOracle> {
    let rho = reduced_13(state, n1, n3)?;
    let [pt0, pt1] = rho.partial_transpose_blocks();
    let [b0, b1] = rho.rho_blocks.clone();
    let jobs = [b0, b1, pt0, pt1];
    let spectra = par::map(&jobs, |m| eigenvalues(m.clone()));
    let (m1, m3) = rho.marginals();
    let mut s13_eigs: Vec<f64> = spectra[0].clone();
    s13_eigs.extend_from_slice(&spectra[1]);
    let trace_norm: f64 = spectra[2].iter().chain(&spectra[3]).map(|x| x.abs()).sum();
    let entropy_1 = von_neumann(&eigenvalues(m1))?;
    let entropy_3 = von_neumann(&eigenvalues(m3))?;
    let entropy_13 = von_neumann(&s13_eigs)?;
    let trace = rho.trace();
    Ok(TripartiteOracle {
        entropy_1,
        entropy_3,
        entropy_13,
        log_negativity: trace_norm.ln().max(0.0),
        mutual_information: entropy_1 + entropy_3 - entropy_13,
        trace,
        discarded_weight: 1.0 - trace,
        effective_dim: rho.effective_dim(),
    })
}

/// Second moments of `x_g = 2 Sx_g/√N_g`, `p_g = 2 Sy_g/√N_g` for two
/// groups, ordered `(x₁, p₁, x₃, p₃)` with `Γ_ij = ⟨{R_i, R_j}⟩/2`.
///
/// Near full polarization (`h > 1`) these are the bosonic quadratures of
/// each group, so the matrix is directly comparable with the Gaussian
/// covariance matrix.
pub fn quadrature_covariance(
    state: &DickeGroundState,
    n1: usize,
    n3: usize,
) -> Result<[[f64; 4]; 4]> {
    let n = state.n_spins;
    check_groups(n, &[n1, n3])?;
    let t = GroupTensor::build(state, n1, n3);
    let (d1, d2, d3) = t.dims;
    // ⟨k-1|S₊|k⟩ = sqrt(k (N_g - k + 1))
    let raise = |ng: usize, k: usize| ((k * (ng + 1 - k)) as f64).sqrt();

    // S₊/S₋ on group 1 or 3 (`plus` selects S₊)
    let apply = |v: &[f64], group3: bool, plus: bool| -> Vec<f64> {
        let mut out = vec![0.0; v.len()];
        let ng = if group3 { n3 } else { n1 };
        for k1 in 0..d1 {
            for k2 in 0..d2 {
                for k3 in 0..d3 {
                    let x = v[(k1 * d2 + k2) * d3 + k3];
                    if x == 0.0 {
                        continue;
                    }
                    let k = if group3 { k3 } else { k1 };
                    let (target, amp) = if plus {
                        if k == 0 {
                            continue;
                        }
                        (k - 1, raise(ng, k))
                    } else {
                        let lim = if group3 { d3 } else { d1 };
                        if k + 1 >= lim {
                            continue;
                        }
                        (k + 1, raise(ng, k + 1))
                    };
                    let (t1, t3) = if group3 { (k1, target) } else { (target, k3) };
                    out[(t1 * d2 + k2) * d3 + t3] += amp * x;
                }
            }
        }
        out
    };
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();

    let psi = &t.data;
    // ⟨ψ| A B |ψ⟩ with A = op(a), B = op(b); op(·) = (group3, plus)
    let corr = |a: (bool, bool), b: (bool, bool)| {
        let bpsi = apply(psi, b.0, b.1);
        // ⟨ψ|A = (A†|ψ⟩)†, and S₊† = S₋
        let adag_psi = apply(psi, a.0, !a.1);
        dot(&adag_psi, &bpsi)
    };
    let (p, m) = (true, false);
    let group = |g3: bool| {
        let pp = corr((g3, p), (g3, p));
        let mm = corr((g3, m), (g3, m));
        let pm = corr((g3, p), (g3, m));
        let mp = corr((g3, m), (g3, p));
        let ng = if g3 { n3 } else { n1 } as f64;
        let sxx = 0.25 * (pp + mm + pm + mp);
        let syy = -0.25 * (pp + mm - pm - mp);
        (4.0 * sxx / ng, 4.0 * syy / ng)
    };
    let (x1, p1) = group(false);
    let (x3, p3) = group(true);
    let pp = corr((false, p), (true, p));
    let mm = corr((false, m), (true, m));
    let pm = corr((false, p), (true, m));
    let mp = corr((false, m), (true, p));
    let norm = 4.0 / ((n1 * n3) as f64).sqrt();
    let xx = 0.25 * (pp + mm + pm + mp) * norm;
    let yy = -0.25 * (pp + mm - pm - mp) * norm;
    Ok([
        [x1, 0.0, xx, 0.0],
        [0.0, p1, 0.0, yy],
        [xx, 0.0, x3, 0.0],
        [0.0, yy, 0.0, p3],
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::dicke::exact_ground_state;
    use approx::assert_abs_diff_eq;

    #[test]
    fn product_state_has_no_entropy() {
        let g = exact_ground_state(60, 0.5, 1e6).unwrap();
        assert!(bipartite_entropy_exact(&g, 20).unwrap() < 1e-5);
        let t = tripartite_reduced_exact(&g, 20, 20).unwrap();
        assert!(t.log_negativity < 1e-6);
        assert!(t.mutual_information < 1e-5);
    }

    #[test]
    fn complementary_groups_share_entropy() {
        let g = exact_ground_state(101, 0.3, 1.2).unwrap();
        let a = bipartite_entropy_exact(&g, 37).unwrap();
        let b = bipartite_entropy_exact(&g, 64).unwrap();
        assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        let w = schmidt_spectrum(&g, 37).unwrap();
        assert_abs_diff_eq!(w.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn reduced_state_is_a_density_matrix() {
        let g = exact_ground_state(60, 0.5, 0.8).unwrap();
        let rho = reduced_13(&g, 20, 20).unwrap();
        assert_abs_diff_eq!(rho.trace(), 1.0, epsilon = 1e-12);
        for b in &rho.rho_blocks {
            for w in b.clone().symmetric_eigenvalues().iter() {
                assert!(*w >= -1e-10 && *w <= 1.0 + 1e-10);
            }
        }
        let (m1, m3) = rho.marginals();
        assert_abs_diff_eq!(m1.trace(), 1.0, epsilon = 1e-12);
        // equal groups see the same marginal
        assert!((m1 - m3).abs().max() < 1e-12);
    }

    #[test]
    fn marginal_entropies_match_bipartite_route() {
        let g = exact_ground_state(60, 0.5, 1.5).unwrap();
        let t = tripartite_reduced_exact(&g, 20, 15).unwrap();
        assert_abs_diff_eq!(t.entropy_1, bipartite_entropy_exact(&g, 20).unwrap(), epsilon = 1e-10);
        assert_abs_diff_eq!(t.entropy_3, bipartite_entropy_exact(&g, 15).unwrap(), epsilon = 1e-10);
        // S₁₃ = S₂ for a pure global state
        assert_abs_diff_eq!(t.entropy_13, bipartite_entropy_exact(&g, 25).unwrap(), epsilon = 1e-10);
    }

    #[test]
    fn partial_transpose_keeps_trace() {
        let g = exact_ground_state(45, 0.2, 1.1).unwrap();
        let rho = reduced_13(&g, 15, 15).unwrap();
        let [a, b] = rho.partial_transpose_blocks();
        assert_abs_diff_eq!(a.trace() + b.trace(), rho.trace(), epsilon = 1e-13);
        assert_eq!(rho.element((1, 0), (0, 0)), 0.0);
    }

    #[test]
    fn rejects_bad_groups() {
        let g = exact_ground_state(20, 0.5, 2.0).unwrap();
        assert!(reduced_13(&g, 10, 10).is_err());
        assert!(reduced_13(&g, 0, 10).is_err());
        assert!(schmidt_spectrum(&g, 20).is_err());
        assert!(quadrature_covariance(&g, 15, 10).is_err());
    }

    #[test]
    fn dimension_cap() {
        let g = exact_ground_state(400, 0.5, 1.0).unwrap();
        assert!(matches!(
            reduced_13(&g, 130, 130),
            Err(Error::DimensionTooLarge { .. })
        ));
    }

    #[test]
    fn polarized_quadratures_are_vacuum_like() {
        let g = exact_ground_state(200, 0.5, 1e4).unwrap();
        let c = quadrature_covariance(&g, 60, 60).unwrap();
        for i in 0..4 {
            assert_abs_diff_eq!(c[i][i], 1.0, epsilon = 1e-3);
        }
    }
}
