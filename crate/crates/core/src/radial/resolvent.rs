//! Weighted resolvents `W (H − z)^{-1} W` of radial operators.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::RadialOperator;
use crate::error::SpectralError;

/// LU factors of `T − z` for a real symmetric tridiagonal `T`.
#[derive(Clone, Debug)]
pub struct ShiftedSolver {
    lower: Vec<Complex64>,
    pivots: Vec<Complex64>,
    off: Vec<f64>,
}

impl ShiftedSolver {
    pub fn new(diag: &[f64], off: &[f64], z: Complex64) -> Self {
        let n = diag.len();
        let mut lower = vec![Complex64::new(0.0, 0.0); n];
        let mut pivots = Vec::with_capacity(n);
        pivots.push(diag[0] - z);
        for i in 1..n {
            let l = off[i - 1] / pivots[i - 1];
            lower[i] = l;
            pivots.push(diag[i] - z - l * off[i - 1]);
        }
        Self { lower, pivots, off: off.to_vec() }
    }

    pub fn solve(&self, rhs: &[Complex64]) -> Vec<Complex64> {
        let n = rhs.len();
        let mut y = rhs.to_vec();
        for i in 1..n {
            let prev = y[i - 1];
            y[i] -= self.lower[i] * prev;
        }
        y[n - 1] /= self.pivots[n - 1];
        for i in (0..n - 1).rev() {
            let next = y[i + 1];
            y[i] = (y[i] - self.off[i] * next) / self.pivots[i];
        }
        y
    }
}

/// `max(r, 1)^{-s}` at each interior node.
pub fn weights(op: &RadialOperator, s_weight: f64) -> Vec<f64> {
    (0..op.dim()).map(|i| op.grid.node(i).max(1.0).powf(-s_weight)).collect()
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Largest singular value of `A` from Lanczos on `A*A`, with full
/// reorthogonalization, to relative accuracy `rtol`.
pub fn largest_singular_value(
    n: usize,
    apply: impl Fn(&[Complex64]) -> Vec<Complex64>,
    apply_adj: impl Fn(&[Complex64]) -> Vec<Complex64>,
    rtol: f64,
) -> Result<f64, SpectralError> {
    let max_steps = n.min(300);
    let mut q: Vec<Complex64> = (0..n).map(|i| Complex64::new(1.0 + 0.5 * (i as f64 * 0.7).sin(), 0.0)).collect();
    let norm = dot(&q, &q).re.sqrt();
    q.iter_mut().for_each(|x| *x /= norm);
    let mut basis: Vec<Vec<Complex64>> = vec![q];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut last = 0.0f64;
    for k in 0..max_steps {
        let mut w = apply_adj(&apply(&basis[k]));
        let a = dot(&basis[k], &w).re;
        alpha.push(a);
        for _ in 0..2 {
            for v in &basis {
                let c = dot(v, &w);
                for (wi, vi) in w.iter_mut().zip(v) {
                    *wi -= c * vi;
                }
            }
        }
        let b = dot(&w, &w).re.sqrt();
        let m = alpha.len();
        let mut t = DMatrix::<f64>::zeros(m, m);
        for i in 0..m {
            t[(i, i)] = alpha[i];
            if i + 1 < m {
                t[(i, i + 1)] = beta[i];
                t[(i + 1, i)] = beta[i];
            }
        }
        let top = t.symmetric_eigen().eigenvalues.iter().copied().fold(0.0, f64::max);
        if (k > 2 && (top - last).abs() <= rtol * top) || b <= 1e-14 * top.max(1e-300) || k + 1 == max_steps {
            if k + 1 == max_steps && (top - last).abs() > 1e3 * rtol * top {
                return Err(SpectralError::NoConvergence("Lanczos did not settle on the top singular value".into()));
            }
            return Ok(top.max(0.0).sqrt());
        }
        last = top;
        beta.push(b);
        basis.push(w.into_iter().map(|x| x / b).collect());
    }
    Ok(last.max(0.0).sqrt())
}

/// Operator norm of `W_s (H − z)^{-1} W_s` with `W_s = max(r, 1)^{-s}`.
pub fn weighted_resolvent_norm(op: &RadialOperator, z: Complex64, s_weight: f64) -> Result<f64, SpectralError> {
    if z.im == 0.0 {
        return Err(SpectralError::Precondition("z must be non-real".into()));
    }
    if !(s_weight > 0.5 && s_weight < 1.5) {
        return Err(SpectralError::Precondition(format!("s_weight = {s_weight} outside (1/2, 3/2)")));
    }
    let w = weights(op, s_weight);
    let fwd = ShiftedSolver::new(&op.diag, &op.offdiag, z);
    let adj = ShiftedSolver::new(&op.diag, &op.offdiag, z.conj());
    let weigh = |x: &[Complex64]| x.iter().zip(&w).map(|(a, b)| a * b).collect::<Vec<_>>();
    largest_singular_value(
        op.dim(),
        |x| weigh(&fwd.solve(&weigh(x))),
        |x| weigh(&adj.solve(&weigh(x))),
        1e-10,
    )
}

/// Operator norm of `W (H − z₁)^{-1} W − W (H − z₂)^{-1} W`.
pub fn weighted_resolvent_difference(
    op: &RadialOperator,
    z1: Complex64,
    z2: Complex64,
    s_weight: f64,
) -> Result<f64, SpectralError> {
    if z1.im == 0.0 || z2.im == 0.0 {
        return Err(SpectralError::Precondition("z must be non-real".into()));
    }
    let w = weights(op, s_weight);
    let f1 = ShiftedSolver::new(&op.diag, &op.offdiag, z1);
    let f2 = ShiftedSolver::new(&op.diag, &op.offdiag, z2);
    let a1 = ShiftedSolver::new(&op.diag, &op.offdiag, z1.conj());
    let a2 = ShiftedSolver::new(&op.diag, &op.offdiag, z2.conj());
    let weigh = |x: &[Complex64]| x.iter().zip(&w).map(|(a, b)| a * b).collect::<Vec<_>>();
    let diff = |s1: &ShiftedSolver, s2: &ShiftedSolver, x: &[Complex64]| {
        let wx = weigh(x);
        let d: Vec<Complex64> = s1.solve(&wx).into_iter().zip(s2.solve(&wx)).map(|(a, b)| a - b).collect();
        weigh(&d)
    };
    largest_singular_value(op.dim(), |x| diff(&f1, &f2, x), |x| diff(&a1, &a2, x), 1e-10)
}
