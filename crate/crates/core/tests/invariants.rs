//! Structural properties that hold for every measure, checked over families
//! and randomized inputs.

use std::f64::consts::TAU;

use circlemix_core::diagnostics::{
    alpha_lower_bound, classify_doeblin, classify_strictly_aperiodic, power_ratio, rho_sup, Verdict, Witness,
};
use circlemix_core::fourier::{partial_density, sample_transform, PartialProduct};
use circlemix_core::measure::{
    AtomicMeasure, CantorLebesgue, CoefficientSeq, CoefficientTail, CosinePolynomial, FrequencySeq, GappedProduct,
    GridDensity, RieszProduct,
};
use circlemix_core::operator::{grid_build, grid_power_norms, l2_power_norm, lp_norm_bounds, tv_exact};
use circlemix_core::{convolve, fourier_coefficient, fourier_table, Angle, CircleMeasure, FourierTable, TableOptions, Truncation};
use num_complex::Complex64;
use proptest::prelude::*;

fn table(mu: &CircleMeasure, n: usize) -> FourierTable {
    fourier_table(mu, n, &TableOptions::default()).unwrap()
}

fn cantor(theta: f64) -> CircleMeasure {
    CircleMeasure::Cantor(CantorLebesgue::new(theta).unwrap())
}

fn geometric_riesz() -> RieszProduct {
    RieszProduct::new(
        CoefficientSeq { prefix: vec![], tail: CoefficientTail::Geometric { scale: 1.0, ratio: 0.5 } },
        FrequencySeq::Geometric { first: 4, ratio: 4 },
    )
    .unwrap()
}

fn power_riesz() -> RieszProduct {
    RieszProduct::new(
        CoefficientSeq { prefix: vec![0.9, -0.7], tail: CoefficientTail::Power { scale: 1.0, alpha: 0.5 } },
        FrequencySeq::Geometric { first: 3, ratio: 5 },
    )
    .unwrap()
}

fn gapped() -> GappedProduct {
    GappedProduct::new(
        vec![CosinePolynomial::fejer(2).unwrap(), CosinePolynomial::new(vec![0.5]).unwrap(), CosinePolynomial::fejer(3).unwrap()],
        None,
        2.0,
    )
    .unwrap()
}

fn golden_pair() -> CircleMeasure {
    CircleMeasure::Atomic(AtomicMeasure::symmetric_pair(Angle::golden()).unwrap())
}

fn step_grid() -> CircleMeasure {
    CircleMeasure::Grid(GridDensity::new(vec![2.0, 2.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0]).unwrap())
}

fn families() -> Vec<(&'static str, CircleMeasure)> {
    let a = CircleMeasure::Atomic(
        AtomicMeasure::new(vec![(Angle::rational(1, 5).unwrap(), 0.2), (Angle::golden(), 0.5), (Angle::sqrt2().neg(), 0.3)]).unwrap(),
    );
    vec![
        ("haar", CircleMeasure::Haar),
        ("atomic", a.clone()),
        ("pair", golden_pair()),
        ("grid", step_grid()),
        ("cantor3", cantor(3.0)),
        ("cantor2.5", cantor(2.5)),
        ("riesz", CircleMeasure::Riesz(geometric_riesz())),
        ("riesz-power", CircleMeasure::Riesz(power_riesz())),
        ("gapped", CircleMeasure::Gapped(gapped())),
        ("mixture", CircleMeasure::mixture(vec![(0.4, a.clone()), (0.6, cantor(3.0))]).unwrap()),
        ("power", CircleMeasure::power(a.clone(), 3).unwrap()),
        ("reversed", CircleMeasure::reversed(a.clone())),
        ("convolution", convolve(&cantor(3.0), &a).unwrap()),
    ]
}

#[test]
fn normalization_and_conjugate_symmetry() {
    for (name, mu) in families() {
        let t = table(&mu, 300);
        assert_eq!(t.value(0), Complex64::new(1.0, 0.0), "{name}");
        for n in 1..=300 {
            assert!(t.value(n).norm() <= 1.0 + 1e-12, "{name} n={n}");
            assert_eq!(t.value(-n), t.value(n).conj(), "{name} n={n}");
        }
        if mu.is_symmetric() {
            assert!(t.is_real(), "{name}");
        }
    }
}

#[test]
fn cantor_self_similarity() {
    let mu = cantor(3.0);
    let t = table(&mu, 30_000);
    for n in -10_000i64..=10_000 {
        assert!((t.value(3 * n) - t.value(n)).norm() < 1e-12, "n={n}");
    }
}

#[test]
fn sparse_tables_match_partial_products() {
    fn check<P: PartialProduct>(p: &P, mu: &CircleMeasure, stage: usize) {
        let top = p.stage_max_frequency(stage);
        let g = (4 * top as usize).next_power_of_two();
        let s = sample_transform(partial_density(p, stage, g).unwrap().density());
        for n in 0..=top as i64 {
            let exact = fourier_coefficient(mu, n, Truncation::Stage(stage)).unwrap();
            assert!((s[n as usize] - exact).norm() < 1e-10, "stage {stage} n={n}");
        }
    }
    let r = geometric_riesz();
    let rm = CircleMeasure::Riesz(r.clone());
    for stage in 1..=4 {
        check(&r, &rm, stage);
    }
    let pr = power_riesz();
    let pm = CircleMeasure::Riesz(pr.clone());
    for stage in 1..=3 {
        check(&pr, &pm, stage);
    }
    let g = gapped();
    let gm = CircleMeasure::Gapped(g.clone());
    for stage in 1..=3 {
        check(&g, &gm, stage);
    }
}

#[test]
fn windowed_suprema_are_monotone() {
    for (name, mu) in families() {
        let big = table(&mu, 10_000);
        let mut prev_rho = -1.0;
        let mut prev_c1 = None;
        for n in [100, 1000, 10_000] {
            let t = big.truncated(n).unwrap();
            let r = rho_sup(&t).value;
            assert!(r >= prev_rho, "{name} N={n}");
            prev_rho = r;
            if let Ok((c, _)) = power_ratio(&t, 1) {
                if let Some(p) = prev_c1 {
                    assert!(c >= p, "{name} N={n}");
                }
                prev_c1 = Some(c);
            }
        }
    }
}

#[test]
fn alpha_bound_and_unimodular_witness() {
    for (name, mu) in families() {
        let t = table(&mu, 500);
        let s = rho_sup(&t).value;
        for n in 1..=10 {
            assert_eq!(alpha_lower_bound(&t, n).unwrap(), l2_power_norm(&t, n), "{name}");
            assert!((l2_power_norm(&t, n) - s.powi(n as i32)).abs() < 1e-15);
        }
    }
    let a = CircleMeasure::Atomic(
        AtomicMeasure::new(vec![
            (Angle::rational(1, 3).unwrap(), 0.2),
            (Angle::rational(1, 2).unwrap(), 0.3),
            (Angle::rational(7, 12).unwrap(), 0.5),
        ])
        .unwrap(),
    );
    let c = classify_strictly_aperiodic(&a);
    assert_eq!(c.verdict, Verdict::No);
    let Witness::UnimodularFrequency(w) = c.witness else { panic!("{c:?}") };
    let t = table(&a, w as usize);
    assert!((t.value(w).norm() - 1.0).abs() < 1e-14);
    assert!((rho_sup(&t).value - 1.0).abs() < 1e-14);
}

#[test]
fn doeblin_implies_contracting_window() {
    let nus = [cantor(3.0), golden_pair(), CircleMeasure::dirac(Angle::sqrt2()), CircleMeasure::Riesz(power_riesz())];
    for nu in &nus {
        let sup_nu = rho_sup(&table(nu, 2000)).value;
        for a in [0.1, 0.5, 0.9] {
            let mu = CircleMeasure::mixture(vec![(a, nu.clone()), (1.0 - a, CircleMeasure::Haar)]).unwrap();
            assert_eq!(classify_doeblin(&mu).verdict, Verdict::Yes);
            let s = rho_sup(&table(&mu, 2000)).value;
            assert!(s < 1.0);
            assert!((s - a * sup_nu).abs() < 1e-12);
        }
    }
}

// The L₂ operator norm of P^n − E over the window: the largest |μ̂(k)|^n, computed
// per frequency instead of from the supremum.
fn diagonal_norm(t: &FourierTable, n: u32) -> f64 {
    t.scan().map(|(_, w)| w.norm().powi(n as i32)).fold(0.0, f64::max)
}

#[test]
fn exact_l2_law() {
    for (name, mu) in families() {
        let t = table(&mu, 2000);
        for n in 1..=20 {
            assert!((l2_power_norm(&t, n) - l2_power_norm(&t, 1).powi(n as i32)).abs() < 1e-12, "{name}");
            assert!((l2_power_norm(&t, n) - diagonal_norm(&t, n)).abs() < 1e-12, "{name}");
        }
    }
}

#[test]
fn circulant_eigenvalues_match_coefficients() {
    let n = 1 << 16;
    let aligned = CircleMeasure::Atomic(
        AtomicMeasure::new(vec![
            (Angle::rational(1, 4).unwrap(), 0.5),
            (Angle::rational(3, 1 << 10).unwrap(), 0.25),
            (Angle::rational(1, 1 << 16).unwrap(), 0.25),
        ])
        .unwrap(),
    );
    for mu in [aligned, step_grid(), CircleMeasure::Riesz(geometric_riesz())] {
        let chain = grid_build(&mu, n, Truncation::Auto).unwrap();
        for k in -32i64..=32 {
            let exact = fourier_coefficient(&mu, -k, Truncation::Auto).unwrap();
            assert!((chain.eigenvalue(k) - exact).norm() < 1e-6, "k={k}");
        }
    }
}

#[test]
fn endpoint_duality_and_sandwich() {
    let sym = [golden_pair(), cantor(3.0), CircleMeasure::Riesz(geometric_riesz()), CircleMeasure::Gapped(gapped())];
    for mu in &sym {
        let chain = grid_build(mu, 1 << 10, Truncation::Auto).unwrap();
        assert!(chain.is_symmetric());
        let norms = grid_power_norms(&chain, 8).unwrap();
        for (a, b) in norms.l1.entries.iter().zip(&norms.linf.entries) {
            assert!((a.value - b.value).abs() < 1e-12);
        }
        let t = table(mu, 512);
        for p in [1.0, 1.25, 2.0, 3.0, f64::INFINITY] {
            for n in [1, 3, 8] {
                let b = lp_norm_bounds(&chain, &t, p, n, tv_exact(mu, n)).unwrap();
                assert!(b.lower <= b.upper + 1e-15, "p={p} n={n}");
            }
        }
    }
    // closed-form endpoints: the interpolated upper bound equals tv at both ends
    let mix = CircleMeasure::mixture(vec![(0.5, CircleMeasure::dirac(Angle::rational(1, 8).unwrap())), (0.5, CircleMeasure::Haar)]).unwrap();
    let chain = grid_build(&mix, 1 << 10, Truncation::Auto).unwrap();
    let t = table(&mix, 64);
    for n in 1..=6 {
        let tv = tv_exact(&mix, n);
        let lo = lp_norm_bounds(&chain, &t, 1.0, n, tv).unwrap();
        let hi = lp_norm_bounds(&chain, &t, f64::INFINITY, n, tv).unwrap();
        assert_eq!(lo.upper, tv.unwrap());
        assert_eq!(hi.upper, tv.unwrap());
    }
}

fn atomic_strategy() -> impl Strategy<Value = CircleMeasure> {
    prop::collection::vec((0i64..720, 1u32..100), 1..6).prop_map(|atoms| {
        let total: u32 = atoms.iter().map(|a| a.1).sum();
        let mut map = std::collections::BTreeMap::new();
        for (p, w) in atoms {
            *map.entry(p).or_insert(0.0) += w as f64 / total as f64;
        }
        CircleMeasure::Atomic(
            AtomicMeasure::new(map.into_iter().map(|(p, w)| (Angle::rational(p, 720).unwrap(), w)).collect()).unwrap(),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn convolution_multiplies_coefficients(a in atomic_strategy(), k in 0usize..4, n in -500i64..500) {
        let others = [cantor(3.0), CircleMeasure::Riesz(geometric_riesz()), step_grid(), golden_pair()];
        let b = &others[k];
        let c = convolve(&a, b).unwrap();
        let lhs = fourier_coefficient(&c, n, Truncation::Auto).unwrap();
        let rhs = fourier_coefficient(&a, n, Truncation::Auto).unwrap() * fourier_coefficient(b, n, Truncation::Auto).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-14);
    }

    #[test]
    fn atomic_tables_match_direct_sums(a in atomic_strategy(), n in -2000i64..2000) {
        let CircleMeasure::Atomic(ref m) = a else { unreachable!() };
        let direct: Complex64 = m
            .atoms()
            .iter()
            .map(|(t, w)| {
                let (p, q) = t.rational_part();
                let r = (p as i128 * n as i128).rem_euclid(q as i128) as f64 / q as f64;
                *w * Complex64::from_polar(1.0, -TAU * r)
            })
            .sum();
        prop_assert!((fourier_coefficient(&a, n, Truncation::Auto).unwrap() - direct).norm() < 1e-14);
    }

    #[test]
    fn random_atomic_l2_law(a in atomic_strategy()) {
        let t = table(&a, 720);
        for n in 1..=20u32 {
            prop_assert!((l2_power_norm(&t, n) - diagonal_norm(&t, n)).abs() < 1e-12);
        }
    }
}
