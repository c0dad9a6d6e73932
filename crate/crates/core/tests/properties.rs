use proptest::prelude::*;

use cusp_spectra::analysis::weyl::below_prefactor;
use cusp_spectra::analysis::weyl_constants;
use cusp_spectra::config::{parse_config, to_canonical_string, CohomologySection, Config, Numerics, SurfaceSection};
use cusp_spectra::model::{BoundaryComponent, EndPotential, GramMatrix, ManifoldSpec, Phi0, PiScalar, PotentialSpec, Rational};
use cusp_spectra::radial::sturm::{count_below, lowest_eigenvalues, tridiagonal_eigenvalues_below};
use cusp_spectra::radial::{assemble, eigenvalues_below, sturm_count, Grid, Perturbation};
use cusp_spectra::topology::gauge::CohomologyPresentation;
use cusp_spectra::topology::{classify_potential, component_group, smith_normal_form, Subgroup};
use cusp_spectra::transverse::mode_spectrum;

fn r(a: i64, b: i64) -> Rational {
    Rational::new(a, b)
}

fn circle_spec(p: Rational, x0: Rational) -> ManifoldSpec {
    ManifoldSpec::new(2, p, x0, vec![BoundaryComponent::circle("c", PiScalar::two_pi())]).unwrap()
}

fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(a, b)| r(a, b))
}

fn det(m: &[Vec<i128>]) -> i128 {
    // cofactor expansion; matrices here are at most 5×5
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i128>> = m[1..].iter().map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| *x).collect()).collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * det(&minor)
        })
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_form_factorizes(rows in 1usize..=5, cols in 1usize..=5, seed in proptest::collection::vec(-9i64..=9, 25)) {
        let a: Vec<Vec<i64>> = (0..rows).map(|i| (0..cols).map(|j| seed[i * 5 + j]).collect()).collect();
        let s = smith_normal_form(&a).unwrap();
        let a128: Vec<Vec<i128>> = a.iter().map(|row| row.iter().map(|&x| x as i128).collect()).collect();
        let ua: Vec<Vec<i128>> = (0..rows).map(|i| (0..cols).map(|j| (0..rows).map(|k| s.u[i][k] * a128[k][j]).sum()).collect()).collect();
        let uav: Vec<Vec<i128>> = (0..rows).map(|i| (0..cols).map(|j| (0..cols).map(|k| ua[i][k] * s.v[k][j]).sum()).collect()).collect();
        prop_assert_eq!(&uav, &s.d);
        prop_assert_eq!(det(&s.u).abs(), 1);
        prop_assert_eq!(det(&s.v).abs(), 1);
        let f = s.invariant_factors();
        for w in f.windows(2) {
            let divides = if w[0] == 0 { w[1] == 0 } else { w[1] % w[0] == 0 };
            prop_assert!(divides, "{:?}", f);
        }
    }

    #[test]
    fn integer_flux_shift_preserves_classification_and_modes(a in rational(), k in -5i64..=5) {
        let spec = circle_spec(r(1, 1), r(1, 10));
        let pot = |x: Rational| PotentialSpec { ends: vec![EndPotential::closed_flux(vec![x])] };
        let shifted = a + Rational::from_integer(k);
        prop_assert_eq!(classify_potential(&spec, &pot(a)).trapping, classify_potential(&spec, &pot(shifted)).trapping);
        let c = &spec.ends[0];
        let mus = |x: Rational| mode_spectrum(c, &[x], 60.0).unwrap().pairs();
        prop_assert_eq!(mus(a), mus(shifted));
        // reflection a → −a
        prop_assert_eq!(mus(a), mus(-a));
    }

    #[test]
    fn torus_modes_invariant_under_lattice_shift(a in rational(), b in rational(), k in -3i64..=3, l in -3i64..=3) {
        let gram = GramMatrix::new(PiScalar::new(r(4, 1), 2), vec![vec![r(1, 1), r(1, 3)], vec![r(1, 3), r(2, 1)]]).unwrap();
        let t = BoundaryComponent::torus("t", gram);
        let shifted = [a + Rational::from_integer(k), b + Rational::from_integer(l)];
        let base = mode_spectrum(&t, &[a, b], 30.0).unwrap().pairs();
        prop_assert_eq!(&base, &mode_spectrum(&t, &shifted, 30.0).unwrap().pairs());
        prop_assert_eq!(&base, &mode_spectrum(&t, &[-a, -b], 30.0).unwrap().pairs());
    }

    #[test]
    fn coupling_classification_is_periodic(num in 1i64..=9, den in 1i64..=9, g in rational()) {
        let base = r(num, den);
        let spec = circle_spec(r(1, 1), r(1, 10));
        let trapping = |x: Rational| classify_potential(&spec, &PotentialSpec { ends: vec![EndPotential::closed_flux(vec![x * base])] }).trapping;
        let Subgroup::Cyclic(period) = component_group(&[base]) else { unreachable!() };
        prop_assert_eq!(trapping(g), trapping(g + period));
        prop_assert!(!trapping(period));
    }

    #[test]
    fn sturm_count_matches_bisection(diag in proptest::collection::vec(-5.0f64..5.0, 2..40), off_seed in proptest::collection::vec(-2.0f64..2.0, 40), lambda in -8.0f64..8.0) {
        let off: Vec<f64> = off_seed[..diag.len() - 1].to_vec();
        let eigs = tridiagonal_eigenvalues_below(&diag, &off, 20.0, 1e-12);
        prop_assume!(eigs.iter().all(|e| (e - lambda).abs() > 1e-8));
        prop_assert_eq!(count_below(&diag, &off, lambda), eigs.iter().filter(|&&e| e < lambda).count());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn mode_monotonicity(mu in 0.0f64..20.0, dmu in 0.01f64..10.0, p_den in 1i64..=3) {
        let spec = circle_spec(r(1, p_den), r(1, 2));
        let grid = Grid::covering(spec.r0(), spec.r0() + 8.0, 0.02).unwrap();
        let lo = assemble(&spec, mu, grid, &Perturbation::None).unwrap();
        let hi = assemble(&spec, mu + dmu, grid, &Perturbation::None).unwrap();
        let a = lowest_eigenvalues(&lo.diag, &lo.offdiag, 8, 1e-10);
        let b = lowest_eigenvalues(&hi.diag, &hi.offdiag, 8, 1e-10);
        for (x, y) in a.iter().zip(&b) {
            prop_assert!(y >= &(x - 1e-9));
        }
    }

    #[test]
    fn dirichlet_domain_monotonicity(length in 4.0f64..20.0, extra in 1usize..200, mu in 0.0f64..2.0) {
        let spec = circle_spec(r(1, 1), r(1, 1));
        let grid = Grid::covering(spec.r0(), spec.r0() + length, 0.02).unwrap();
        let big = Grid { cells: grid.cells + extra, ..grid };
        let a = assemble(&spec, mu, grid, &Perturbation::None).unwrap();
        let b = assemble(&spec, mu, big, &Perturbation::None).unwrap();
        let ea = lowest_eigenvalues(&a.diag, &a.offdiag, 6, 1e-10);
        let eb = lowest_eigenvalues(&b.diag, &b.offdiag, 6, 1e-10);
        for (x, y) in ea.iter().zip(&eb) {
            prop_assert!(y <= &(x + 1e-9));
        }
    }

    #[test]
    fn operator_sturm_count_consistency(lambda in 0.3f64..40.0, mu in 0.0f64..3.0) {
        let spec = circle_spec(r(1, 1), r(1, 1));
        let op = assemble(&spec, mu, Grid::covering(0.0, 10.0, 0.05).unwrap(), &Perturbation::None).unwrap();
        let eigs = eigenvalues_below(&op, lambda + 1.0, 1e-11);
        prop_assume!(eigs.iter().all(|e| (e - lambda).abs() > 1e-7));
        prop_assert_eq!(sturm_count(&op, lambda), eigs.iter().filter(|&&e| e < lambda).count());
    }

    #[test]
    fn config_round_trip(cfg in config_strategy()) {
        let text = to_canonical_string(&cfg);
        let parsed = parse_config(&text).unwrap();
        prop_assert_eq!(&parsed, &cfg);
        prop_assert_eq!(to_canonical_string(&parsed), text);
    }
}

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![1e-6f64..1e6, (1u32..200).prop_map(|k| k as f64 / 8.0)]
}

fn config_strategy() -> impl Strategy<Value = Config> {
    let end = (Just(()), rational(), rational(), prop::option::of(proptest::collection::vec(rational(), 1..4)), any::<bool>(), 1i64..5);
    (
        2usize..=3,
        (1i64..=4, 1i64..=4),
        (1i64..=9, 1i64..=20),
        proptest::collection::vec(end, 1..3),
        prop::option::of((1usize..3, any::<bool>(), rational())),
        (prop::option::of(finite()), finite(), 1usize..50, proptest::collection::vec(finite(), 0..4), proptest::collection::vec(rational(), 0..5)),
        (prop::option::of((finite(), finite())), proptest::collection::vec(prop::option::of(finite()), 0..4), any::<bool>()),
    )
        .prop_map(|(n, (pn, pd), (xn, xd), ends, surface, (h, lmax, samples, schedule, g_grid), (window, mourre_r, continuum))| {
            let mut comps = Vec::new();
            let mut pots = Vec::new();
            for (i, (_, f1, f2, phi, closed, scale)) in ends.into_iter().enumerate() {
                let label = format!("e{i}");
                let (comp, flux) = if n == 3 {
                    let gram = GramMatrix::new(PiScalar::new(r(scale, 1), 2), vec![vec![r(2, 1), r(1, 2)], vec![r(1, 2), r(3, 1)]]).unwrap();
                    (BoundaryComponent::torus(label, gram), vec![f1, f2])
                } else {
                    (BoundaryComponent::circle(label, PiScalar::new(r(scale, 1), (scale % 2) as u32)), vec![f1])
                };
                comps.push(comp);
                let phi0 = phi.map_or(Phi0::Constant(f2), Phi0::Sampled);
                pots.push(EndPotential { phi0, flux, closed });
            }
            let spec = ManifoldSpec { n, p: r(pn, pd), x0: r(xn, xd), core_volume: PiScalar::integer(0), c0_override: None, ends: comps };
            let numerics = Numerics {
                h,
                lambda_max: lmax,
                samples,
                schedule,
                g_grid,
                window: window.map(|(a, b)| (a, a + b)),
                mourre_r,
                continuum,
                ..Numerics::default()
            };
            let cohomology = (n == 3).then(|| CohomologySection {
                presentation: CohomologyPresentation { boundary_rank: vec![2], lagrangian: vec![vec![1], vec![2]], dimension: 3, orientable: true },
                b: vec![r(1, 2)],
            });
            Config {
                spec,
                potential: PotentialSpec { ends: pots },
                surface: surface.map(|(cusps, orientable, b_class)| SurfaceSection { cusps, orientable, b_class }),
                cohomology,
                field: None,
                numerics,
            }
        })
}

#[test]
fn discretization_error_is_second_order() {
    // zero mode, p = 1: λ_j = 1/4 + (jπ/Λ)²
    let spec = circle_spec(r(1, 1), r(1, 1));
    let big_l = 10.0;
    let errors: Vec<f64> = [0.1, 0.05, 0.025, 0.0125]
        .iter()
        .map(|&h| {
            let op = assemble(&spec, 0.0, Grid::covering(0.0, big_l, h).unwrap(), &Perturbation::None).unwrap();
            let e = lowest_eigenvalues(&op.diag, &op.offdiag, 3, 1e-13);
            let exact = 0.25 + (3.0 * std::f64::consts::PI / big_l).powi(2);
            (e[2] - exact).abs()
        })
        .collect();
    for w in errors.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!(order >= 1.8, "order {order} from {errors:?}");
    }
}

fn mean_spacing(spec: &ManifoldSpec, mu: f64, length: f64, lo: f64, hi: f64) -> f64 {
    let op = assemble(spec, mu, Grid::covering(spec.r0(), spec.r0() + length, 0.02).unwrap(), &Perturbation::None).unwrap();
    let levels: Vec<f64> = eigenvalues_below(&op, hi, 1e-11).into_iter().filter(|&l| l >= lo).collect();
    if levels.len() < 2 {
        return f64::INFINITY;
    }
    (levels[levels.len() - 1] - levels[0]) / (levels.len() - 1) as f64
}

#[test]
fn threshold_dichotomy() {
    let spec = circle_spec(r(1, 1), r(1, 1));
    let lengths = [20.0, 40.0, 80.0, 160.0];
    // non-trapping zero mode: spacing near λ = 2 decays like Λ^{-1}
    let xs: Vec<f64> = lengths.iter().map(|l: &f64| l.ln()).collect();
    let ys: Vec<f64> = lengths.iter().map(|&l| mean_spacing(&spec, 0.0, l, 1.5, 2.5).ln()).collect();
    let slope = cusp_spectra::radial::xmodel::slope(&xs, &ys);
    assert!((slope + 1.0).abs() < 0.15, "spacing exponent {slope}");
    // trapping, lowest mode 1/4: levels near λ = 30 do not move as r_max grows
    let spacings: Vec<f64> = lengths.iter().map(|&l| mean_spacing(&spec, 0.25, l, 5.0, 60.0)).collect();
    let least = spacings.iter().copied().fold(f64::INFINITY, f64::min);
    assert!(least > 1.0 && spacings.iter().all(|s| (s - spacings[0]).abs() < 1e-6 * s), "{spacings:?}");
}

#[test]
fn zeta_tolerance_moves_constant_within_bound() {
    let spec = circle_spec(r(1, 3), r(1, 10));
    let pot = PotentialSpec { ends: vec![EndPotential::closed_flux(vec![r(1, 2)])] };
    let tol = 1e-8;
    let a = weyl_constants(&spec, &pot, tol).unwrap().constant;
    let b = weyl_constants(&spec, &pot, 2.0 * tol).unwrap().constant;
    assert!((a - b).abs() < 2.0 * tol * below_prefactor(1.0 / 3.0), "{a} vs {b}");
}
