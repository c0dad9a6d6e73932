//! Sturm-sequence counting and bisection on symmetric tridiagonal matrices.

use super::RadialOperator;

fn pivmin(off: &[f64]) -> f64 {
    let m = off.iter().fold(1.0f64, |acc, b| acc.max(b * b));
    f64::MIN_POSITIVE * m
}

/// Number of eigenvalues strictly below `lambda`, by the inertia of `T − λ`.
pub fn count_below(diag: &[f64], off: &[f64], lambda: f64) -> usize {
    let safe = pivmin(off);
    let mut count = 0;
    let mut d = 1.0;
    for i in 0..diag.len() {
        let b2 = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        d = diag[i] - lambda - if i == 0 { 0.0 } else { b2 / d };
        if d.abs() < safe {
            d = -safe;
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

pub fn sturm_count(op: &RadialOperator, lambda: f64) -> usize {
    count_below(&op.diag, &op.offdiag, lambda)
}

/// Counts for several shifts in one pass over a matrix given node by node as
/// `(a_i, b_{i-1}²)`. Nothing but the pivots is stored.
pub fn count_streaming(
    nodes: usize,
    entry_at: impl Fn(usize) -> (f64, f64),
    off_sq_bound: f64,
    lambdas: &[f64],
) -> Vec<usize> {
    let safe = f64::MIN_POSITIVE * off_sq_bound.max(1.0);
    let mut pivots = vec![0.0f64; lambdas.len()];
    let mut counts = vec![0usize; lambdas.len()];
    for i in 0..nodes {
        let (a, b2) = entry_at(i);
        for (j, &lam) in lambdas.iter().enumerate() {
            let mut d = a - lam - if i == 0 { 0.0 } else { b2 / pivots[j] };
            if d.abs() < safe {
                d = -safe;
            }
            if d < 0.0 {
                counts[j] += 1;
            }
            pivots[j] = d;
        }
    }
    counts
}

/// Interval containing the whole spectrum.
pub fn gershgorin(diag: &[f64], off: &[f64]) -> (f64, f64) {
    let n = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let mut rad = 0.0;
        if i > 0 {
            rad += off[i - 1].abs();
        }
        if i + 1 < n {
            rad += off[i].abs();
        }
        lo = lo.min(diag[i] - rad);
        hi = hi.max(diag[i] + rad);
    }
    (lo, hi)
}

/// All eigenvalues below `lambda_max`, each to absolute accuracy `tol`, ascending.
pub fn tridiagonal_eigenvalues_below(diag: &[f64], off: &[f64], lambda_max: f64, tol: f64) -> Vec<f64> {
    if diag.is_empty() {
        return Vec::new();
    }
    let (lo, hi) = gershgorin(diag, off);
    let top = lambda_max.min(hi + 1.0);
    let start = lo - 1.0;
    let total = count_below(diag, off, top);
    let mut out = Vec::with_capacity(total);
    // (lower, upper, count below lower, count below upper)
    let mut stack = vec![(start, top, 0usize, total)];
    while let Some((a, b, ca, cb)) = stack.pop() {
        if cb == ca {
            continue;
        }
        if b - a <= tol {
            let mid = 0.5 * (a + b);
            out.extend(std::iter::repeat(mid).take(cb - ca));
            continue;
        }
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            out.extend(std::iter::repeat(mid).take(cb - ca));
            continue;
        }
        let cm = count_below(diag, off, mid);
        stack.push((mid, b, cm, cb));
        stack.push((a, mid, ca, cm));
    }
    out.sort_by(f64::total_cmp);
    out
}

pub fn eigenvalues_below(op: &RadialOperator, lambda_max: f64, tol: f64) -> Vec<f64> {
    tridiagonal_eigenvalues_below(&op.diag, &op.offdiag, lambda_max, tol)
}

/// The `k` lowest eigenvalues (0-based count `k`), each to absolute accuracy `tol`.
pub fn lowest_eigenvalues(diag: &[f64], off: &[f64], k: usize, tol: f64) -> Vec<f64> {
    let (lo, hi) = gershgorin(diag, off);
    let k = k.min(diag.len());
    (0..k)
        .map(|j| {
            let (mut a, mut b) = (lo - 1.0, hi + 1.0);
            while b - a > tol {
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b {
                    break;
                }
                if count_below(diag, off, mid) > j {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            0.5 * (a + b)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dense(diag: &[f64], off: &[f64]) -> Vec<f64> {
        let n = diag.len();
        let mut m = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = diag[i];
            if i + 1 < n {
                m[(i, i + 1)] = off[i];
                m[(i + 1, i)] = off[i];
            }
        }
        let mut e: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
        e.sort_by(f64::total_cmp);
        e
    }

    #[test]
    fn random_12x12_matches_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let diag: Vec<f64> = (0..12).map(|_| rng.gen_range(-5.0..5.0)).collect();
            let off: Vec<f64> = (0..11).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let eig = dense(&diag, &off);
            for _ in 0..10 {
                let lam: f64 = rng.gen_range(-8.0..8.0);
                let brute = eig.iter().filter(|&&e| e < lam).count();
                assert_eq!(count_below(&diag, &off, lam), brute);
            }
            let bis = tridiagonal_eigenvalues_below(&diag, &off, 100.0, 1e-12);
            assert_eq!(bis.len(), 12);
            for (a, b) in bis.iter().zip(&eig) {
                assert!((a - b).abs() < 1e-9);
            }
            let low = lowest_eigenvalues(&diag, &off, 3, 1e-12);
            for (a, b) in low.iter().zip(&eig) {
                assert!((a - b).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn streaming_agrees_with_stored() {
        let diag: Vec<f64> = (0..200).map(|i| 2.0 + (i as f64 * 0.05).sin()).collect();
        let off = vec![-0.7; 199];
        let lams = [0.0, 1.0, 1.7, 2.5, 3.3];
        let s = count_streaming(200, |i| (diag[i], 0.49), 0.49, &lams);
        for (j, &l) in lams.iter().enumerate() {
            assert_eq!(s[j], count_below(&diag, &off, l));
        }
    }

    #[test]
    fn empty_below_ground_state() {
        let diag = vec![2.0; 10];
        let off = vec![-1.0; 9];
        assert!(tridiagonal_eigenvalues_below(&diag, &off, -0.1, 1e-10).is_empty());
        assert_eq!(count_below(&diag, &off, 0.0), 0);
    }
}
