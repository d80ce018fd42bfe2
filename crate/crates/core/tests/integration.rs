//! Cross-module consistency checks and property tests.

use std::sync::Arc;

use num_complex::Complex;
use proptest::prelude::*;

use emcap_core::bounds::{mi_chain_check, stationarize};
use emcap_core::green::{scalar_kernel, PhysicalScene};
use emcap_core::mercer::nystrom_modes;
use emcap_core::numerics::{bessel_j0, bessel_y0, integrate, HermitianMatrix, Interval};
use emcap_core::sampled::{mutual_information, SourceAutocorrelation};
use emcap_core::spectrum::{green_spectrum, WavenumberGrid};
use emcap_core::waterfill::waterfill_ssd;
use emcap_core::SpectralDensity64;

fn scene() -> PhysicalScene<f64> {
    PhysicalScene::new(5.0, 1.0).unwrap()
}

#[test]
fn parseval_links_spectrum_to_kernel() {
    // with the unitary transform convention, ∫|G|²dκ = ∫|g|²dx
    let s = scene();
    let grid = WavenumberGrid::for_scene(&s);
    let spec = green_spectrum(&s, &grid).unwrap();
    let lhs = spec.energy();
    let rhs: f64 = 2.0
        * integrate(
            |x: f64| scalar_kernel(&s, x).norm_sqr(),
            Interval::new(0.0, 2000.0).unwrap(),
            1e-9,
        )
        .unwrap();
    assert!(
        (lhs - rhs).abs() < 0.01 * rhs,
        "Parseval mismatch: {lhs} vs {rhs}"
    );
}

#[test]
fn stationarized_kernel_is_psd_on_any_grid() {
    // feeding the shift-averaged autocorrelation into a Toeplitz covariance
    // keeps it PSD: check via Nyström eigenvalues of R''(s - s')
    let rj = SourceAutocorrelation::Stationary {
        r: Arc::new(|ds: f64| (1.0 + ds.abs()) * (-2.0 * ds.abs()).exp()),
        support: Interval::new(0.0, 1.0).unwrap(),
    };
    let spec = nystrom_modes(
        |s: f64, sp: f64| stationarize(&rj, s - sp).unwrap(),
        1.0,
        48,
        48,
    )
    .expect("stationarized kernel must be PSD");
    let l1 = spec.modes[0].lambda;
    for m in &spec.modes {
        assert!(m.lambda >= -1e-9 * l1);
    }
}

#[test]
fn chain_check_invariant_under_translation() {
    let s = PhysicalScene::new(1.0, 0.5).unwrap();
    let base = |shift: f64| SourceAutocorrelation::General {
        r: Arc::new(move |a: f64, b: f64| {
            let (a, b) = (a - shift, b - shift);
            (1.0 + a * b) * (-3.0 * (a - b).abs()).exp()
        }),
        support: Interval::new(shift, shift + 1.0).unwrap(),
    };
    let here = mi_chain_check(&s, &base(0.0), 1.0, 8, 2, 8).unwrap();
    let there = mi_chain_check(&s, &base(7.5), 1.0, 8, 2, 8).unwrap();
    assert!((here.i_ll - there.i_ll).abs() < 1e-9 * here.i_ll);
    assert!((here.i_l2l - there.i_l2l).abs() < 1e-9 * here.i_l2l);
    assert!((here.i_inf2l - there.i_inf2l).abs() < 1e-9 * here.i_inf2l);
}

#[test]
fn kkt_and_ssd_agree_on_flat_channels() {
    // a flat equivalent noise makes continuous water-filling and the discrete
    // Kuhn-Tucker allocation coincide per bin
    use emcap_core::waterfill::kkt_covariance_allocate;
    let n = 16;
    let grid = WavenumberGrid::symmetric(n, 4.0).unwrap();
    let dk = grid.spacing();
    let level = 0.3;
    let noise = SpectralDensity64::new(grid, vec![level; n]).unwrap();
    let power = 2.0;
    let wf = waterfill_ssd(&noise, power).unwrap();
    // discrete analog: one sample per bin with noise eigenvalue `level`
    let k_n = HermitianMatrix::from_diagonal(&vec![level; n]);
    let span = (n - 1) as f64 * dk;
    let (_, _mi) = kkt_covariance_allocate(&k_n, power / span * dk, n).unwrap();
    // interior bins carry P/span each
    let interior = wf.s_j.values[n / 2];
    assert!((interior - power / span).abs() < 1e-9 * power);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn waterfill_conserves_power(
        seeds in prop::collection::vec(0.05f64..5.0, 8..24),
        power in 0.01f64..50.0,
    ) {
        let n = seeds.len() & !1; // symmetric grids need even n
        let seeds = &seeds[..n];
        let grid = WavenumberGrid::symmetric(n, 3.0).unwrap();
        let noise = SpectralDensity64::new(grid.clone(), seeds.to_vec()).unwrap();
        let wf = waterfill_ssd(&noise, power).unwrap();
        // allocation non-negative and integrating to the power budget
        prop_assert!(wf.s_j.values.iter().all(|&v| v >= 0.0));
        prop_assert!((wf.s_j.integral() - power).abs() <= 1e-6 * power);
        // flat water on the support
        for (sj, sn) in wf.s_j.values.iter().zip(&noise.values) {
            if *sj > 0.0 {
                prop_assert!((sj + sn - wf.water_level).abs() <= 1e-8 * wf.water_level);
            } else {
                prop_assert!(*sn >= wf.water_level - 1e-8 * wf.water_level);
            }
        }
    }

    #[test]
    fn kernel_even_and_bounded(x in -500.0f64..500.0) {
        let s = scene();
        let a = scalar_kernel(&s, x);
        let b = scalar_kernel(&s, -x);
        prop_assert!((a - b).norm() <= 1e-13 * a.norm().max(1e-300));
        prop_assert!(a.norm().is_finite());
    }

    #[test]
    fn bessel_wronskian(x in 0.1f64..80.0) {
        // J0'Y0 − J0Y0' = ... the cylinder-function Wronskian gives
        // J1Y0 − J0Y1 = 2/(πx); use central differences of J0, Y0
        let h = 1e-5 * x.max(1.0);
        let dj = (bessel_j0(x + h).unwrap() - bessel_j0(x - h).unwrap()) / (2.0 * h);
        let dy = (bessel_y0(x + h).unwrap() - bessel_y0(x - h).unwrap()) / (2.0 * h);
        let w = bessel_j0(x).unwrap() * dy - bessel_y0(x).unwrap() * dj;
        let want = 2.0 / (std::f64::consts::PI * x);
        prop_assert!((w - want).abs() <= 1e-6 * want.abs());
    }

    #[test]
    fn stationarize_even_and_compact(delta in -3.0f64..3.0, rate in 0.2f64..4.0) {
        let rj = SourceAutocorrelation::Stationary {
            r: Arc::new(move |ds: f64| (-rate * ds.abs()).exp()),
            support: Interval::new(0.0, 2.0).unwrap(),
        };
        let a = stationarize(&rj, delta).unwrap();
        let b = stationarize(&rj, -delta).unwrap();
        prop_assert!((a - b).abs() <= 1e-9);
        if delta.abs() >= 2.0 {
            prop_assert!(a == 0.0);
        } else {
            prop_assert!(a >= 0.0);
        }
    }

    #[test]
    fn mi_nonnegative_and_submatrix_monotone(seed in 0u64..1000) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let dim = 6;
        let b: Vec<Complex<f64>> = (0..dim * dim)
            .map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let k_e = HermitianMatrix::from_fn(dim, |i, j| {
            let mut acc = Complex::new(0.0, 0.0);
            for k in 0..dim {
                acc += b[k * dim + i].conj() * b[k * dim + j];
            }
            acc
        });
        let k_n = HermitianMatrix::from_diagonal(&vec![0.4; dim]);
        let mi = mutual_information(&k_e, &k_n).unwrap();
        prop_assert!(mi >= 0.0);
        let idx: Vec<usize> = (0..dim - 2).collect();
        let sub = k_e.principal_submatrix(&idx);
        let sub_noise = HermitianMatrix::from_diagonal(&vec![0.4; dim - 2]);
        let mi_sub = mutual_information(&sub, &sub_noise).unwrap();
        prop_assert!(mi + 1e-10 >= mi_sub);
    }
}
