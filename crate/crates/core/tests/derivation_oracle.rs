//! The inverse-square coefficient of the `r`-coordinate model for `p < 1`, fitted
//! against the operator built directly from the metric in the `x` coordinate.

use cusp_spectra::model::Rational;
use cusp_spectra::radial::derived_inverse_square;
use cusp_spectra::radial::sturm::lowest_eigenvalues;
use cusp_spectra::radial::xmodel::XModel;

fn r_model(c: f64, r0: f64, r1: f64, cells: usize, k: usize) -> Vec<f64> {
    let h = (r1 - r0) / cells as f64;
    let diag: Vec<f64> = (1..cells).map(|i| {
        let r = r0 + i as f64 * h;
        2.0 / (h * h) + c / (r * r)
    }).collect();
    let off = vec![-1.0 / (h * h); cells - 2];
    lowest_eigenvalues(&diag, &off, k, 1e-11)
}

fn fit_coefficient(n: usize, p: f64) -> (f64, Vec<f64>, Vec<f64>) {
    let lx = |x: f64| x.powf(p - 1.0) / (1.0 - p);
    let x_hi = 1.0;
    let r0 = lx(x_hi);
    let r1 = r0 + 10.0;
    let x_lo = ((1.0 - p) * r1).powf(1.0 / (p - 1.0));
    let x = XModel { n, p, x_lo, x_hi, cells: 200_000, dirichlet_lo: true, mu: 0.0 };
    let target = x.lowest(3, 1e-11).unwrap();
    // secant on the ground state
    let cells = 10_000;
    let f = |c: f64| r_model(c, r0, r1, cells, 1)[0] - target[0];
    let (mut a, mut b) = (0.0, 1.0);
    let (mut fa, mut fb) = (f(a), f(b));
    for _ in 0..30 {
        if fb == fa {
            break;
        }
        let c = b - fb * (b - a) / (fb - fa);
        a = b;
        fa = fb;
        b = c;
        fb = f(b);
        if fb.abs() < 1e-12 {
            break;
        }
    }
    (b, target, r_model(b, r0, r1, cells, 3))
}

#[test]
fn coefficient_matches_alpha_alpha_plus_one() {
    for (n, p) in [(2usize, Rational::new(1, 2)), (2, Rational::new(1, 3)), (3, Rational::new(1, 2))] {
        let pf = *p.numer() as f64 / *p.denom() as f64;
        let (c, x_eigs, r_eigs) = fit_coefficient(n, pf);
        let derived = derived_inverse_square(n, p);
        let derived = *derived.numer() as f64 / *derived.denom() as f64;
        assert!((c - derived).abs() < 2e-3, "n={n} p={pf}: fitted {c}, derived {derived}");
        // the fitted model also reproduces the excited states
        for (a, b) in x_eigs.iter().zip(&r_eigs) {
            assert!((a - b).abs() < 1e-4 * a, "n={n} p={pf}: {a} vs {b}");
        }
    }
}

#[test]
fn literal_c0_is_rejected() {
    // c₀ = ((2−n)p − 1)/2 = −1/2 for n = 2, p = 1/2
    let (c, _, _) = fit_coefficient(2, 0.5);
    assert!((c + 0.5).abs() > 1.0);
}
