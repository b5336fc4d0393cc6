//! Lowest eigenpair of a real symmetric tridiagonal matrix: Sturm-sequence
//! bisection for the eigenvalue, shifted inverse iteration for the vector.

/// Number of eigenvalues strictly below `x`.
pub fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let tiny = f64::MIN_POSITIVE.sqrt();
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..diag.len() {
        let coupling = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        q = diag[i] - x - coupling / q;
        if q == 0.0 {
            q = -tiny;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn gershgorin(diag: &[f64], off: &[f64]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..diag.len() {
        let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
        let right = if i < off.len() { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - left - right);
        hi = hi.max(diag[i] + left + right);
    }
    (lo, hi)
}

/// Solves `(T - σ) y = b` by LDLᵀ elimination; `T - σ` must be positive
/// definite.
fn solve_shifted(diag: &[f64], off: &[f64], sigma: f64, b: &mut [f64]) {
    let n = diag.len();
    let mut d = vec![0.0; n];
    let mut l = vec![0.0; n.saturating_sub(1)];
    d[0] = diag[0] - sigma;
    for i in 1..n {
        l[i - 1] = off[i - 1] / d[i - 1];
        d[i] = diag[i] - sigma - l[i - 1] * off[i - 1];
    }
    for i in 1..n {
        b[i] -= l[i - 1] * b[i - 1];
    }
    b[n - 1] /= d[n - 1];
    for i in (0..n - 1).rev() {
        b[i] = b[i] / d[i] - l[i] * b[i + 1];
    }
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    for x in v.iter_mut() {
        *x /= norm;
    }
}

fn apply(diag: &[f64], off: &[f64], v: &[f64]) -> Vec<f64> {
    (0..diag.len())
        .map(|i| {
            let mut y = diag[i] * v[i];
            if i > 0 {
                y += off[i - 1] * v[i - 1];
            }
            if i < off.len() {
                y += off[i] * v[i + 1];
            }
            y
        })
        .collect()
}

/// Lowest eigenvalue and unit eigenvector, sign fixed so the largest
/// component is positive. `off[i]` couples `i` and `i + 1`.
pub fn lowest_eigenpair(diag: &[f64], off: &[f64]) -> (f64, Vec<f64>) {
    let n = diag.len();
    assert!(n > 0 && off.len() + 1 == n, "malformed tridiagonal matrix");
    if n == 1 {
        return (diag[0], vec![1.0]);
    }
    let (mut lo, mut hi) = gershgorin(diag, off);
    let scale = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 2.0 * f64::EPSILON * scale {
            break;
        }
        if sturm_count(diag, off, mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // shift safely below the eigenvalue so the solve stays definite
    let sigma = lo - 1e-12 * scale;
    let mut v = vec![1.0; n];
    normalize(&mut v);
    let mut previous = v.clone();
    for _ in 0..12 {
        solve_shifted(diag, off, sigma, &mut v);
        normalize(&mut v);
        let change = v
            .iter()
            .zip(&previous)
            .map(|(a, b)| (a - b).abs().min((a + b).abs()))
            .fold(0.0, f64::max);
        previous.copy_from_slice(&v);
        if change < 1e-15 {
            break;
        }
    }
    let (imax, _) = v
        .iter()
        .enumerate()
        .fold((0, 0.0), |acc, (i, x)| if x.abs() > acc.1 { (i, x.abs()) } else { acc });
    if v[imax] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    let tv = apply(diag, off, &v);
    let energy = v.iter().zip(&tv).map(|(a, b)| a * b).sum();
    (energy, v)
}

/// `‖T v - λ v‖₂`.
pub fn residual(diag: &[f64], off: &[f64], value: f64, v: &[f64]) -> f64 {
    apply(diag, off, v)
        .iter()
        .zip(v)
        .map(|(tv, x)| (tv - value * x).powi(2))
        .sum::<f64>()
        .sqrt()
}
