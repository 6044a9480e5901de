//! Worked examples for each public operation, checked against values
//! computed directly from definitions in this file.

use std::f64::consts::{LN_2, TAU};

use circlemix_core::diagnostics::{
    ac_power_test, alpha_lower_bound, classify_adapted, classify_doeblin, classify_strictly_aperiodic,
    power_ratio, rho_sup, spectrum_cloud, stolz_fit, AcPower, Verdict, Witness, STOLZ_MARGIN,
};
use circlemix_core::fourier::{partial_density, sample_transform, CoefficientSource};
use circlemix_core::hilbert::{hilbert_closed_form, hilbert_partial, TrigPolynomial};
use circlemix_core::measure::{
    AtomicMeasure, CantorLebesgue, CoefficientSeq, CoefficientTail, CosinePolynomial, FrequencySeq, GappedProduct,
    RieszProduct,
};
use circlemix_core::operator::{
    grid_build, grid_power_norms, l2_power_norm, lp_norm_bounds, mean_ergodic_norm, tv_exact, GridChain,
};
use circlemix_core::{convolve, fourier_coefficient, fourier_table, Angle, CircleMeasure, Error, TableOptions, Truncation};
use num_complex::Complex64;

fn q(p: i64, d: u64) -> Angle {
    Angle::rational(p, d).unwrap()
}

fn table(mu: &CircleMeasure, n: usize) -> circlemix_core::FourierTable {
    fourier_table(mu, n, &TableOptions::default()).unwrap()
}

fn coef(mu: &CircleMeasure, n: i64) -> Complex64 {
    fourier_coefficient(mu, n, Truncation::Auto).unwrap()
}

fn golden_pair() -> CircleMeasure {
    CircleMeasure::Atomic(AtomicMeasure::symmetric_pair(Angle::golden()).unwrap())
}

fn cantor3() -> CircleMeasure {
    CircleMeasure::Cantor(CantorLebesgue::new(3.0).unwrap())
}

fn riesz(prefix: Vec<f64>, tail: CoefficientTail, freqs: FrequencySeq) -> RieszProduct {
    RieszProduct::new(CoefficientSeq { prefix, tail }, freqs).unwrap()
}

/// `Σ w e^{-2πi n t}` straight from the atoms.
fn atomic_sum(atoms: &[(f64, f64)], n: i64) -> Complex64 {
    atoms.iter().map(|&(t, w)| w * Complex64::from_polar(1.0, -TAU * n as f64 * t)).sum()
}

#[test]
fn coefficient_examples() {
    assert_eq!(coef(&CircleMeasure::Haar, 5), Complex64::new(0.0, 0.0));
    let t = 0.3217;
    let pair = CircleMeasure::Atomic(AtomicMeasure::symmetric_pair("0.3217".parse().unwrap()).unwrap());
    for n in -20..=20 {
        assert!((coef(&pair, n) - Complex64::new((TAU * n as f64 * t).cos(), 0.0)).norm() < 1e-14);
    }
    // (1 + ½cos 8πt)(1 + ¼cos 32πt): the e_16 coefficient is ¼/2
    let r = CircleMeasure::Riesz(riesz(vec![0.5, 0.25], CoefficientTail::None, FrequencySeq::Explicit(vec![4, 16])));
    assert!((coef(&r, 16).re - 0.125).abs() < 1e-15);
    assert!((coef(&r, 20).re - 0.03125).abs() < 1e-15);
    assert!((coef(&r, 12).re - 0.03125).abs() < 1e-15);
    assert_eq!(coef(&r, 8).re, 0.0);
    let c = cantor3();
    for m in 1..200 {
        assert!((coef(&c, 3 * m) - coef(&c, m)).norm() < 1e-12);
    }
}

#[test]
fn table_examples() {
    let h = table(&CircleMeasure::Haar, 3);
    assert_eq!(h.value(0), Complex64::new(1.0, 0.0));
    assert!((-3..=3).filter(|&n| n != 0).all(|n| h.value(n) == Complex64::new(0.0, 0.0)));

    let d = table(&CircleMeasure::dirac(q(1, 4)), 4);
    for n in -4..=4 {
        assert!((d.value(n) - Complex64::from_polar(1.0, -std::f64::consts::PI * n as f64 / 2.0)).norm() < 1e-15);
        assert_eq!(d.source(n), Some(CoefficientSource::ExactClosedForm));
    }
    assert_eq!(d.value(4), Complex64::new(1.0, 0.0));

    let a = 0.35;
    let z = Angle::sqrt2();
    let mix = CircleMeasure::mixture(vec![(a, CircleMeasure::dirac(z.clone())), (1.0 - a, CircleMeasure::Haar)]).unwrap();
    let mt = table(&mix, 50);
    let zt = z.to_turns();
    assert_eq!(mt.value(0), Complex64::new(1.0, 0.0));
    for n in 1..=50 {
        assert!((mt.value(n) - a * atomic_sum(&[(zt, 1.0)], n)).norm() < 1e-12);
    }
}

#[test]
fn partial_density_examples() {
    let r = riesz(vec![], CoefficientTail::Geometric { scale: 1.0, ratio: 0.5 }, FrequencySeq::Geometric { first: 4, ratio: 4 });
    let g0 = partial_density(&r, 0, 16).unwrap();
    assert!(g0.density().iter().all(|&v| (v - 1.0).abs() < 1e-15));
    let g1 = partial_density(&r, 1, 64).unwrap();
    for (i, v) in g1.density().iter().enumerate() {
        let t = i as f64 / 64.0;
        assert!((v - (1.0 + 0.5 * (4.0 * TAU * t).cos())).abs() < 1e-14);
    }
    let gp = GappedProduct::new(vec![CosinePolynomial::fejer(2).unwrap()], None, 2.0).unwrap();
    let g = partial_density(&gp, 1, 32).unwrap();
    assert!(g.density().iter().all(|&v| v >= -1e-10));
    assert!((g.density().iter().sum::<f64>() / 32.0 - 1.0).abs() < 1e-12);
    // sparse table equals the sampled transform up to the stage's top frequency
    let s = sample_transform(g1.density());
    let mu = CircleMeasure::Riesz(riesz(vec![0.5], CoefficientTail::None, FrequencySeq::Explicit(vec![4])));
    for n in 0..=8i64 {
        assert!((s[n as usize] - coef(&mu, n)).norm() < 1e-10);
    }
}

#[test]
fn convolve_examples() {
    let c = cantor3();
    assert_eq!(convolve(&c, &CircleMeasure::Haar).unwrap(), CircleMeasure::Haar);
    let d = convolve(&CircleMeasure::dirac(q(2, 3)), &CircleMeasure::dirac(q(1, 2))).unwrap();
    assert_eq!(d, CircleMeasure::dirac(q(1, 6)));
    let a = CircleMeasure::Atomic(AtomicMeasure::new(vec![(q(1, 5), 0.2), (Angle::golden(), 0.5), (q(7, 9), 0.3)]).unwrap());
    let aa = convolve(&a, &CircleMeasure::reversed(a.clone())).unwrap();
    for n in -30..=30 {
        let v = coef(&aa, n);
        assert!(v.im.abs() < 1e-14 && v.re >= -1e-14);
        assert!((v.re - coef(&a, n).norm_sqr()).abs() < 1e-14);
    }
}

#[test]
fn classification_examples() {
    let dg = CircleMeasure::dirac(Angle::golden());
    assert_eq!(classify_adapted(&dg).verdict, Verdict::Yes);
    let quarter = CircleMeasure::Atomic(AtomicMeasure::new(vec![(q(1, 4), 0.5), (q(3, 4), 0.5)]).unwrap());
    let c = classify_adapted(&quarter);
    assert_eq!((c.verdict, c.witness), (Verdict::No, Witness::CyclicOrder(4)));
    assert_eq!(classify_adapted(&cantor3()).verdict, Verdict::Yes);

    assert_eq!(classify_strictly_aperiodic(&dg).verdict, Verdict::No);
    assert_eq!(classify_strictly_aperiodic(&golden_pair()).verdict, Verdict::Yes);
    let r = CircleMeasure::Riesz(riesz(vec![0.9, 0.3], CoefficientTail::None, FrequencySeq::Explicit(vec![3, 11])));
    assert_eq!(classify_strictly_aperiodic(&r).verdict, Verdict::Yes);
}

/// Continued-fraction denominators of the golden ratio.
fn fibonacci(k: usize) -> usize {
    let (mut a, mut b) = (0usize, 1usize);
    for _ in 0..k {
        (a, b) = (b, a + b);
    }
    a
}

#[test]
fn supremum_examples() {
    assert_eq!(rho_sup(&table(&CircleMeasure::Haar, 50)).value, 0.0);
    // a point mass is unimodular everywhere; the tie-break picks n = 1
    let r = rho_sup(&table(&CircleMeasure::dirac(q(1, 4)), 4));
    assert_eq!((r.value, r.frequency), (1.0, 1));
    let pair = CircleMeasure::Atomic(AtomicMeasure::new(vec![(Angle::ZERO, 0.5), (q(1, 4), 0.5)]).unwrap());
    let r = rho_sup(&table(&pair, 4));
    assert_eq!((r.value, r.frequency), (1.0, 4));
    let f20 = fibonacci(20);
    assert_eq!(f20, 6765);
    let s = rho_sup(&table(&golden_pair(), f20)).value;
    assert!(s > 0.999, "{s}");

    assert_eq!(alpha_lower_bound(&table(&CircleMeasure::Haar, 10), 3).unwrap(), 0.0);
    let ct = table(&cantor3(), 243);
    let s = rho_sup(&ct).value;
    assert!(s < 1.0);
    assert_eq!(alpha_lower_bound(&ct, 1).unwrap(), s);
    assert_eq!(alpha_lower_bound(&table(&CircleMeasure::dirac(Angle::golden()), 100), 10).unwrap(), 1.0);
}

#[test]
fn doeblin_examples() {
    let mix = CircleMeasure::mixture(vec![(0.3, cantor3()), (0.7, CircleMeasure::Haar)]).unwrap();
    assert_eq!(classify_doeblin(&mix).verdict, Verdict::Yes);
    assert_eq!(classify_doeblin(&cantor3()).verdict, Verdict::No);
    let geo = riesz(vec![], CoefficientTail::Geometric { scale: 1.0, ratio: 0.5 }, FrequencySeq::Geometric { first: 4, ratio: 4 });
    assert_eq!(ac_power_test(&geo).unwrap(), AcPower::At(1));
    let c = classify_doeblin(&CircleMeasure::Riesz(geo));
    assert_eq!((c.verdict, c.witness), (Verdict::Yes, Witness::AbsolutelyContinuousPower(1)));
    let sq = riesz(vec![], CoefficientTail::Power { scale: 1.0, alpha: 0.5 }, FrequencySeq::Geometric { first: 4, ratio: 4 });
    assert_eq!(ac_power_test(&sq).unwrap(), AcPower::At(3));
    let logs: Vec<f64> = (1..=12).map(|k| 1.0 / ((k + 1) as f64).ln()).filter(|a| *a <= 1.0).collect();
    let prefix_only = riesz(logs, CoefficientTail::None, FrequencySeq::Geometric { first: 4, ratio: 4 });
    assert_eq!(ac_power_test(&prefix_only).unwrap(), AcPower::Unknown);
}

#[test]
fn ratio_examples() {
    let ct = table(&cantor3(), 500);
    assert!((power_ratio(&ct, 2).unwrap().0 - 1.0).abs() < 1e-12);
    let h = table(&CircleMeasure::Haar, 20);
    assert_eq!(power_ratio(&h, 1).unwrap().0, 1.0);
    let small = power_ratio(&table(&golden_pair(), 100), 1).unwrap().0;
    let large = power_ratio(&table(&golden_pair(), 10_000), 1).unwrap().0;
    assert!(large > 10.0 * small, "{small} {large}");
    let e = power_ratio(&table(&CircleMeasure::dirac(q(1, 3)), 10), 1).unwrap_err();
    assert_eq!(e, Error::RatioUndefined { n: 1 });
    let third = CircleMeasure::Atomic(AtomicMeasure::new(vec![(Angle::ZERO, 0.5), (q(1, 3), 0.5)]).unwrap());
    assert_eq!(power_ratio(&table(&third, 10), 2).unwrap_err(), Error::RatioUndefined { n: 3 });
}

#[test]
fn stolz_and_cloud_examples() {
    let h = table(&CircleMeasure::Haar, 10);
    assert_eq!(stolz_fit(&h, STOLZ_MARGIN).radius, 0.0);
    let g = CircleMeasure::Grid(circlemix_core::measure::GridDensity::new(vec![1.6, 1.2, 0.8, 0.4, 0.4, 0.8, 1.2, 1.6]).unwrap());
    let f = stolz_fit(&table(&circlemix_core::convolve(&g, &CircleMeasure::reversed(g.clone())).unwrap(), 64), STOLZ_MARGIN);
    assert!(f.contained);
    let gp = stolz_fit(&table(&golden_pair(), 100_000), STOLZ_MARGIN);
    assert!(!gp.contained);

    let hc = spectrum_cloud(&h);
    assert_eq!(hc.points.len(), 2);
    let cc = spectrum_cloud(&table(&cantor3(), 729));
    assert!(cc.real_only && cc.max_modulus_off_zero < 0.38);
    let pc = spectrum_cloud(&table(&golden_pair(), 2000));
    assert!(pc.real_only);
    let lo = pc.points.iter().map(|(_, z)| z.re).fold(1.0, f64::min);
    assert!(lo < -0.99);
}

#[test]
fn operator_examples() {
    assert_eq!(l2_power_norm(&table(&CircleMeasure::Haar, 10), 7), 0.0);
    assert_eq!(l2_power_norm(&table(&CircleMeasure::dirac(Angle::golden()), 10), 13), 1.0);
    assert_eq!(tv_exact(&CircleMeasure::Haar, 4), Some(0.0));
    assert_eq!(tv_exact(&golden_pair(), 9), Some(2.0));
    let half = CircleMeasure::mixture(vec![(0.5, CircleMeasure::dirac(Angle::golden())), (0.5, CircleMeasure::Haar)]).unwrap();
    assert_eq!(tv_exact(&half, 3), Some(0.25));

    let u = grid_build(&CircleMeasure::Haar, 8, Truncation::Auto).unwrap();
    assert!(u.masses().iter().all(|&m| (m - 0.125).abs() < 1e-15));
    let d = grid_build(&CircleMeasure::dirac(q(1, 4)), 8, Truncation::Auto).unwrap();
    assert_eq!(d.masses()[2], 1.0);
    let c = grid_build(&cantor3(), 27, Truncation::Auto).unwrap();
    assert_eq!(c.masses().iter().filter(|&&m| (m - 0.125).abs() < 1e-12).count(), 8);

    let n = grid_power_norms(&u, 5).unwrap();
    assert!(n.l1.entries.iter().all(|e| e.value.abs() < 1e-15));
    let two = CircleMeasure::Atomic(AtomicMeasure::new(vec![(q(1, 4), 0.5), (q(1, 2), 0.5)]).unwrap());
    let chain = grid_build(&two, 8, Truncation::Auto).unwrap();
    let direct: f64 = chain.masses().iter().map(|p| (p - 0.125).abs()).sum();
    assert!((direct - 1.5).abs() < 1e-15);
    assert!((grid_power_norms(&chain, 1).unwrap().l1.entries[0].value - 1.5).abs() < 1e-14);

    let mix = CircleMeasure::mixture(vec![(0.5, CircleMeasure::dirac(q(1, 8))), (0.5, CircleMeasure::Haar)]).unwrap();
    let g = grid_power_norms(&grid_build(&mix, 1 << 12, Truncation::Auto).unwrap(), 10).unwrap();
    for e in &g.l1.entries {
        assert!((e.value - tv_exact(&mix, e.n).unwrap()).abs() < 1e-3);
    }
}

#[test]
fn bounds_and_averages() {
    let ht = table(&CircleMeasure::Haar, 8);
    let hc = grid_build(&CircleMeasure::Haar, 64, Truncation::Auto).unwrap();
    for p in [1.0, 1.5, 2.0, f64::INFINITY] {
        let b = lp_norm_bounds(&hc, &ht, p, 3, None).unwrap();
        assert!(b.lower == 0.0 && b.upper.abs() < 1e-14);
    }
    let gp = golden_pair();
    let gt = table(&gp, 500);
    let gc = grid_build(&gp, 1024, Truncation::Auto).unwrap();
    let b2 = lp_norm_bounds(&gc, &gt, 2.0, 4, None).unwrap();
    assert_eq!(b2.lower, l2_power_norm(&gt, 4));
    assert!(b2.upper >= b2.lower);
    let b1 = lp_norm_bounds(&gc, &gt, 1.0, 4, tv_exact(&gp, 4)).unwrap();
    assert_eq!((b1.lower, b1.upper), (rho_sup(&gt).value.powi(4), 2.0));
    assert!(lp_norm_bounds(&gc, &gt, 0.5, 1, None).is_err());

    assert_eq!(mean_ergodic_norm(&ht, 5).unwrap(), 0.0);
    assert_eq!(mean_ergodic_norm(&table(&CircleMeasure::dirac(q(1, 2)), 10), 6).unwrap(), 1.0);
    let ct = table(&cantor3(), 729);
    let s = rho_sup(&ct).value;
    let m = mean_ergodic_norm(&ct, 100).unwrap();
    assert!(m > 0.0 && m <= 2.0 * s / (1.0 - s) / 100.0 + 1e-15, "{m}");
}

#[test]
fn hilbert_examples() {
    let ht = table(&CircleMeasure::Haar, 4);
    let e1 = TrigPolynomial::character(1);
    let p = hilbert_partial(&ht, &e1, 50).unwrap();
    assert_eq!(p.poly.coefficient(1), Complex64::new(0.0, 0.0));
    assert_eq!(hilbert_closed_form(&ht, &e1).unwrap().coefficient(1), Complex64::new(0.0, 0.0));

    // μ̂(−1) = ½: ½δ_0 + ½ Haar
    let half = CircleMeasure::mixture(vec![(0.5, CircleMeasure::dirac(Angle::ZERO)), (0.5, CircleMeasure::Haar)]).unwrap();
    let t = table(&half, 2);
    let b = hilbert_closed_form(&t, &e1).unwrap().coefficient(1);
    assert!((b.re - LN_2).abs() < 1e-15);
    let p = hilbert_partial(&t, &e1, 1000).unwrap().poly.coefficient(1);
    assert!((p.re - LN_2).abs() < 1e-12);

    let dt = table(&CircleMeasure::dirac(Angle::ZERO), 2);
    let p = hilbert_partial(&dt, &e1, 100).unwrap();
    assert_eq!(p.diverging, vec![1]);
    let harmonic: f64 = (1..=100).map(|k| 1.0 / k as f64).sum();
    assert!((p.poly.coefficient(1).re - harmonic).abs() < 1e-12);
    assert_eq!(hilbert_closed_form(&dt, &e1).unwrap_err(), Error::SeriesDiverges { frequency: 1 });
}

#[test]
fn chain_from_masses_validates() {
    assert!(GridChain::from_masses(vec![0.5, 0.6]).is_err());
    let c = GridChain::from_masses(vec![0.25, 0.5, 0.25]).unwrap();
    assert!((c.eigenvalue(0).re - 1.0).abs() < 1e-15);
    assert!(!c.is_symmetric());
    assert!(GridChain::from_masses(vec![0.5, 0.25, 0.25]).unwrap().is_symmetric());
}
