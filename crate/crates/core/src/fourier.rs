//! Fourier–Stieltjes coefficients `μ̂(n) = ∫ e^{-2πi n t} dμ(t)`.
//!
//! With this convention the convolution operator `P_μ f(x) = ∫ f(x + y) dμ(y)`
//! acts on characters as `P_μ e_k = μ̂(−k) e_k`.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft;
use crate::measure::{CantorLebesgue, CircleMeasure, GappedProduct, GridDensity, RieszProduct};

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Product truncation control for Cantor, Riesz and gapped families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Truncation {
    /// Keep factors until every dropped factor is within `1e-15` of one
    /// (Cantor) or provably cannot contribute (Riesz, gapped).
    #[default]
    Auto,
    /// Use exactly the first `k` factors (`k ≥ 1`).
    Stage(usize),
}

/// How a table entry was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CoefficientSource {
    ExactClosedForm,
    TruncatedProduct { depth: u32 },
    FftOfGrid,
}

impl CoefficientSource {
    fn merge(self, other: Self) -> Self {
        use CoefficientSource::*;
        match (self, other) {
            (TruncatedProduct { depth: a }, TruncatedProduct { depth: b }) => TruncatedProduct { depth: a.max(b) },
            (a, b) => a.max(b),
        }
    }

    pub fn label(&self) -> alloc::string::String {
        match self {
            CoefficientSource::ExactClosedForm => "exact-closed-form".into(),
            CoefficientSource::TruncatedProduct { depth } => alloc::format!("truncated-product({depth})"),
            CoefficientSource::FftOfGrid => "fft-of-grid".into(),
        }
    }
}

/// Largest deviation from one tolerated in a dropped Cantor factor.
pub const CANTOR_TAIL_TOL: f64 = 1e-15;
const CANTOR_MAX_DEPTH: u32 = 4096;

fn check_stage(t: Truncation) -> Result<()> {
    match t {
        Truncation::Stage(0) => Err(Error::InvalidArgument("truncation depth must be ≥ 1".into())),
        _ => Ok(()),
    }
}

/// `μ̂(n)` for a single frequency.
pub fn fourier_coefficient(mu: &CircleMeasure, n: i64, trunc: Truncation) -> Result<Complex64> {
    coefficient_with_source(mu, n, trunc).map(|(v, _)| v)
}

/// `μ̂(n)` together with its provenance.
pub fn coefficient_with_source(mu: &CircleMeasure, n: i64, trunc: Truncation) -> Result<(Complex64, CoefficientSource)> {
    use CircleMeasure::*;
    if n == 0 {
        return Ok((ONE, CoefficientSource::ExactClosedForm));
    }
    Ok(match mu {
        Haar => (ZERO, CoefficientSource::ExactClosedForm),
        Atomic(a) => (
            a.atoms().iter().map(|(t, w)| t.character(n) * *w).sum(),
            CoefficientSource::ExactClosedForm,
        ),
        Grid(g) => (grid_coefficient(g, n), CoefficientSource::FftOfGrid),
        Cantor(c) => {
            check_stage(trunc)?;
            let (v, depth) = cantor_coefficient(c, n, trunc);
            (Complex64::new(v, 0.0), CoefficientSource::TruncatedProduct { depth })
        }
        Riesz(r) => {
            check_stage(trunc)?;
            (Complex64::new(riesz_coefficient(r, n, trunc), 0.0), CoefficientSource::ExactClosedForm)
        }
        Gapped(g) => {
            check_stage(trunc)?;
            (Complex64::new(gapped_coefficient(g, n, trunc), 0.0), CoefficientSource::ExactClosedForm)
        }
        Mixture(m) => {
            let mut acc = ZERO;
            let mut src = CoefficientSource::ExactClosedForm;
            for (w, c) in m.parts() {
                let (v, s) = coefficient_with_source(c, n, trunc)?;
                acc += v * *w;
                src = src.merge(s);
            }
            (acc, src)
        }
        Power { base, exponent } => {
            let (v, s) = coefficient_with_source(base, n, trunc)?;
            (v.powu(exponent.get()), s)
        }
        Reversed(b) => coefficient_with_source(b, -n, trunc)?,
        Convolution(fs) => {
            let mut acc = ONE;
            let mut src = CoefficientSource::ExactClosedForm;
            for f in fs {
                let (v, s) = coefficient_with_source(f, n, trunc)?;
                acc *= v;
                src = src.merge(s);
            }
            (acc, src)
        }
    })
}

/// `sin(πx)/(πx)` with exact zeros at nonzero integers.
pub(crate) fn sinc_turns(n: i64, g: usize) -> f64 {
    if n == 0 {
        return 1.0;
    }
    if n.rem_euclid(g as i64) == 0 {
        return 0.0;
    }
    let x = PI * n as f64 / g as f64;
    libm::sin(x) / x
}

/// Exact coefficient of a piecewise-constant density on centered cells:
/// `sinc(πn/G) · Σ_i m_i e^{-2πi n i/G}`.
fn grid_coefficient(g: &GridDensity, n: i64) -> Complex64 {
    let cells = g.n_cells();
    let masses = g.masses();
    let sum: Complex64 = masses
        .iter()
        .enumerate()
        .map(|(i, &m)| {
            let k = (n as i128 * i as i128).rem_euclid(cells as i128) as f64 / cells as f64;
            let (s, c) = libm::sincos(TAU * k);
            Complex64::new(c, -s) * m
        })
        .sum();
    sum * sinc_turns(n, cells)
}

/// `cos(2πx)` for `x` already reduced near zero.
fn cos_turns(x: f64) -> f64 {
    libm::cos(TAU * x)
}

/// `1 − cos(2πx) = 2 sin²(πx)`.
fn one_minus_cos_turns(x: f64) -> f64 {
    let s = libm::sin(PI * x);
    2.0 * s * s
}

/// `∏_{k≥1} cos(2π n c θ^{-k})` and the number of factors used.
fn cantor_coefficient(c: &CantorLebesgue, n: i64, trunc: Truncation) -> (f64, u32) {
    let m = n.unsigned_abs() as u128;
    let max_depth = match trunc {
        Truncation::Auto => CANTOR_MAX_DEPTH,
        Truncation::Stage(k) => k.min(CANTOR_MAX_DEPTH as usize) as u32,
    };
    let auto = trunc == Truncation::Auto;
    let mut value = 1.0;
    let mut depth = 0;
    if let Some(theta) = c.integer_rate() {
        // phase_k = m (θ−1) / (2 θ^k), exact while the denominator fits
        let num = m * (theta as u128 - 1);
        let mut den: Option<u128> = Some(2);
        let mut small = num as f64 / 2.0;
        for k in 1..=max_depth {
            den = den.and_then(|d| d.checked_mul(theta as u128));
            small /= theta as f64;
            let x = match den {
                Some(d) => {
                    let r = num % d;
                    let x = r as f64 / d as f64;
                    if x > 0.5 {
                        x - 1.0
                    } else {
                        x
                    }
                }
                None => small,
            };
            if auto && den.is_some_and(|d| d > num) && one_minus_cos_turns(x) < CANTOR_TAIL_TOL {
                break;
            }
            if auto && den.is_none() && one_minus_cos_turns(small) < CANTOR_TAIL_TOL {
                break;
            }
            value *= cos_turns(x);
            depth = k;
        }
    } else {
        let theta = c.theta();
        let mut x = m as f64 * c.offset();
        for k in 1..=max_depth {
            x /= theta;
            let r = x - libm::round(x);
            if auto && x < 0.5 && one_minus_cos_turns(x) < CANTOR_TAIL_TOL {
                break;
            }
            value *= cos_turns(r);
            depth = k;
        }
    }
    (value, depth)
}

/// Exact sparse expansion of `∏(1 + a_k cos(2π n_k t))`: the coefficient at
/// `n = Σ ε_k n_k` (unique under lacunarity `q > 3`) is `∏_{ε_k ≠ 0} a_k/2`.
fn riesz_coefficient(r: &RieszProduct, n: i64, trunc: Truncation) -> f64 {
    let target = n.unsigned_abs() as u128;
    let limit = match trunc {
        Truncation::Auto => usize::MAX,
        Truncation::Stage(k) => k,
    };
    let mut factors: Vec<(f64, u64)> = Vec::new();
    let mut below: Vec<u128> = Vec::new();
    let mut sum: u128 = 0;
    let mut k = 1;
    while k <= limit {
        if trunc == Truncation::Auto && sum >= target {
            break;
        }
        match r.factor(k) {
            Some(f) => {
                below.push(sum);
                sum += f.1 as u128;
                factors.push(f);
            }
            None => break,
        }
        k += 1;
    }
    let mut rem = target as i128;
    let mut value = 1.0;
    for (i, &(a, freq)) in factors.iter().enumerate().rev() {
        if rem.unsigned_abs() > below[i] {
            rem -= rem.signum() * freq as i128;
            value *= a / 2.0;
        }
    }
    if rem == 0 {
        value
    } else {
        0.0
    }
}

/// Exact sparse expansion of `∏ φ_j(r_j t)`: the coefficient at
/// `n = Σ r_j k_j`, `|k_j| ≤ m_j`, is `∏ φ̂_j(k_j)`.
fn gapped_coefficient(g: &GappedProduct, n: i64, trunc: Truncation) -> f64 {
    let stages = match trunc {
        Truncation::Auto => g.factors().len(),
        Truncation::Stage(k) => k.min(g.factors().len()),
    };
    let mut rem = n as i128;
    let mut value = 1.0;
    for j in (0..stages).rev() {
        let r = g.scales()[j] as i128;
        let below = g.max_frequency(j) as i128;
        let k = (2 * rem + r).div_euclid(2 * r);
        let phi = &g.factors()[j];
        if k.unsigned_abs() as usize > phi.degree() || (rem - k * r).abs() > below {
            return 0.0;
        }
        value *= phi.coefficient(k as i64);
        rem -= k * r;
    }
    if rem == 0 {
        value
    } else {
        0.0
    }
}

/// Options for [`fourier_table`].
#[derive(Debug, Clone, Copy)]
pub struct TableOptions {
    pub max_half_width: usize,
    pub truncation: Truncation,
}

impl TableOptions {
    pub const DEFAULT_MAX_HALF_WIDTH: usize = 10_000_000;
}

impl Default for TableOptions {
    fn default() -> Self {
        TableOptions { max_half_width: Self::DEFAULT_MAX_HALF_WIDTH, truncation: Truncation::Auto }
    }
}

/// Coefficients `μ̂(n)` for `|n| ≤ N`.
///
/// `value(0) = 1` and `value(−n) = conj(value(n))` hold exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierTable {
    half_width: usize,
    values: Vec<Complex64>,
    sources: Vec<CoefficientSource>,
    sup_certified: bool,
}

impl FourierTable {
    /// Builds a table from `μ̂(1), …, μ̂(N)`; negative frequencies are conjugates.
    pub fn from_positive(values: &[Complex64]) -> Result<Self> {
        let sources = alloc::vec![CoefficientSource::ExactClosedForm; values.len()];
        Self::assemble(values, &sources, false)
    }

    fn assemble(positive: &[Complex64], sources: &[CoefficientSource], sup_certified: bool) -> Result<Self> {
        let n = positive.len();
        if n == 0 {
            return Err(Error::InvalidArgument("table half-width must be ≥ 1".into()));
        }
        if let Some((i, v)) = positive.iter().enumerate().find(|(_, v)| !(v.norm() <= 1.0 + 1e-12)) {
            return Err(Error::InvalidArgument(alloc::format!("|value({})| = {} exceeds 1", i + 1, v.norm())));
        }
        let mut values = Vec::with_capacity(2 * n + 1);
        let mut srcs = Vec::with_capacity(2 * n + 1);
        for i in (0..n).rev() {
            values.push(positive[i].conj());
            srcs.push(sources[i]);
        }
        values.push(ONE);
        srcs.push(CoefficientSource::ExactClosedForm);
        values.extend_from_slice(positive);
        srcs.extend_from_slice(sources);
        Ok(FourierTable { half_width: n, values, sources: srcs, sup_certified })
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    pub fn get(&self, n: i64) -> Option<Complex64> {
        let idx = n.checked_add(self.half_width as i64)?;
        (idx >= 0).then(|| self.values.get(idx as usize).copied()).flatten()
    }

    /// `μ̂(n)`; panics outside the window.
    pub fn value(&self, n: i64) -> Complex64 {
        self.get(n).expect("frequency outside table window")
    }

    pub fn source(&self, n: i64) -> Option<CoefficientSource> {
        let idx = n.checked_add(self.half_width as i64)?;
        (idx >= 0).then(|| self.sources.get(idx as usize).copied()).flatten()
    }

    /// All entries in increasing frequency order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64, CoefficientSource)> + '_ {
        let n = self.half_width as i64;
        self.values.iter().zip(&self.sources).enumerate().map(move |(i, (v, s))| (i as i64 - n, *v, *s))
    }

    /// Nonzero frequencies in scan order `1, −1, 2, −2, …` (the tie-break order).
    pub fn scan(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        (1..=self.half_width as i64).flat_map(move |k| [(k, self.value(k)), (-k, self.value(-k))])
    }

    /// True when every value is real.
    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    /// True when the windowed supremum is known to be the global one
    /// independently of the scanned values (Haar).
    pub fn sup_certified(&self) -> bool {
        self.sup_certified
    }

    /// Restriction to a smaller window.
    pub fn truncated(&self, half_width: usize) -> Result<Self> {
        if half_width == 0 || half_width > self.half_width {
            return Err(Error::InvalidArgument(alloc::format!("cannot restrict a window of {} to {half_width}", self.half_width)));
        }
        let c = self.half_width;
        let values = self.values[c - half_width..=c + half_width].to_vec();
        let sources = self.sources[c - half_width..=c + half_width].to_vec();
        Ok(FourierTable { half_width, values, sources, sup_certified: self.sup_certified })
    }
}

/// Table of `μ̂(n)` for `|n| ≤ N`.
pub fn fourier_table(mu: &CircleMeasure, half_width: usize, opts: &TableOptions) -> Result<FourierTable> {
    if half_width == 0 {
        return Err(Error::InvalidArgument("table half-width must be ≥ 1".into()));
    }
    if half_width > opts.max_half_width {
        return Err(Error::TableTooLarge { requested: half_width, max: opts.max_half_width });
    }
    let (values, sources) = table_values(mu, half_width, opts.truncation)?;
    FourierTable::assemble(&values[1..], &sources[1..], matches!(mu, CircleMeasure::Haar))
}

type Column = (Vec<Complex64>, Vec<CoefficientSource>);

/// `μ̂(n)` for `n = 0..=N`, family by family.
fn table_values(mu: &CircleMeasure, n_max: usize, trunc: Truncation) -> Result<Column> {
    use CircleMeasure::*;
    let exact = || alloc::vec![CoefficientSource::ExactClosedForm; n_max + 1];
    let mut column: Column = match mu {
        Haar => {
            let mut v = alloc::vec![ZERO; n_max + 1];
            v[0] = ONE;
            (v, exact())
        }
        Atomic(a) => {
            let mut v = alloc::vec![ZERO; n_max + 1];
            for (t, w) in a.atoms() {
                for (n, slot) in v.iter_mut().enumerate() {
                    *slot += t.character(n as i64) * *w;
                }
            }
            (v, exact())
        }
        Grid(g) => {
            let cells = g.n_cells();
            let masses: Vec<Complex64> = g.masses().into_iter().map(|m| Complex64::new(m, 0.0)).collect();
            let spectrum = fft::forward(&masses);
            let v = (0..=n_max).map(|n| spectrum[n % cells] * sinc_turns(n as i64, cells)).collect();
            (v, alloc::vec![CoefficientSource::FftOfGrid; n_max + 1])
        }
        Cantor(c) => {
            check_stage(trunc)?;
            let mut v = Vec::with_capacity(n_max + 1);
            let mut s = Vec::with_capacity(n_max + 1);
            for n in 0..=n_max {
                let (x, depth) = cantor_coefficient(c, n as i64, trunc);
                v.push(Complex64::new(x, 0.0));
                s.push(CoefficientSource::TruncatedProduct { depth });
            }
            (v, s)
        }
        Riesz(r) => {
            check_stage(trunc)?;
            ((0..=n_max).map(|n| Complex64::new(riesz_coefficient(r, n as i64, trunc), 0.0)).collect(), exact())
        }
        Gapped(g) => {
            check_stage(trunc)?;
            ((0..=n_max).map(|n| Complex64::new(gapped_coefficient(g, n as i64, trunc), 0.0)).collect(), exact())
        }
        Mixture(m) => {
            let mut v = alloc::vec![ZERO; n_max + 1];
            let mut s = exact();
            for (w, c) in m.parts() {
                let (cv, cs) = table_values(c, n_max, trunc)?;
                for i in 0..=n_max {
                    v[i] += cv[i] * *w;
                    s[i] = s[i].merge(cs[i]);
                }
            }
            (v, s)
        }
        Power { base, exponent } => {
            let (mut v, s) = table_values(base, n_max, trunc)?;
            for x in &mut v {
                *x = x.powu(exponent.get());
            }
            (v, s)
        }
        Reversed(b) => {
            let (mut v, s) = table_values(b, n_max, trunc)?;
            for x in &mut v {
                *x = x.conj();
            }
            (v, s)
        }
        Convolution(fs) => {
            let mut v = alloc::vec![ONE; n_max + 1];
            let mut s = exact();
            for f in fs {
                let (cv, cs) = table_values(f, n_max, trunc)?;
                for i in 0..=n_max {
                    v[i] *= cv[i];
                    s[i] = s[i].merge(cs[i]);
                }
            }
            (v, s)
        }
    };
    column.0[0] = ONE;
    Ok(column)
}

/// Lacunary products whose stage-`n` partial products are trigonometric polynomials.
pub trait PartialProduct {
    /// Largest frequency present in the stage-`n` partial product.
    fn stage_max_frequency(&self, stage: usize) -> u64;
    /// Values of the stage-`n` partial product at `t = i/G`.
    fn stage_samples(&self, stage: usize, grid: usize) -> Vec<f64>;
    /// Number of factors, `None` if unbounded.
    fn stage_count(&self) -> Option<usize>;
}

fn cos_table(grid: usize) -> Vec<f64> {
    (0..grid).map(|i| libm::cos(TAU * (i as f64 / grid as f64))).collect()
}

impl PartialProduct for RieszProduct {
    fn stage_max_frequency(&self, stage: usize) -> u64 {
        self.stage_factors(stage).iter().map(|f| f.1).fold(0u64, |a, b| a.saturating_add(b))
    }

    fn stage_samples(&self, stage: usize, grid: usize) -> Vec<f64> {
        let cos = cos_table(grid);
        let factors = self.stage_factors(stage);
        (0..grid)
            .map(|i| {
                factors
                    .iter()
                    .map(|&(a, n)| 1.0 + a * cos[((n % grid as u64) as u128 * i as u128 % grid as u128) as usize])
                    .product()
            })
            .collect()
    }

    fn stage_count(&self) -> Option<usize> {
        self.factor_count()
    }
}

impl PartialProduct for GappedProduct {
    fn stage_max_frequency(&self, stage: usize) -> u64 {
        self.max_frequency(stage)
    }

    fn stage_samples(&self, stage: usize, grid: usize) -> Vec<f64> {
        let cos = cos_table(grid);
        let g = grid as u128;
        let stages: Vec<_> = self.factors().iter().zip(self.scales()).take(stage).collect();
        (0..grid)
            .map(|i| {
                stages
                    .iter()
                    .map(|(phi, &r)| {
                        let base = r as u128 % g * i as u128 % g;
                        1.0 + 2.0
                            * phi
                                .coeffs()
                                .iter()
                                .enumerate()
                                .map(|(k, c)| c * cos[((k as u128 + 1) * base % g) as usize])
                                .sum::<f64>()
                    })
                    .product()
            })
            .collect()
    }

    fn stage_count(&self) -> Option<usize> {
        Some(self.factors().len())
    }
}

/// Stage-`n` partial product sampled at `t_i = i/G`, as a grid density.
pub fn partial_density<P: PartialProduct + ?Sized>(product: &P, stage: usize, grid: usize) -> Result<GridDensity> {
    let top = product.stage_max_frequency(stage);
    if grid == 0 || (grid as u128) < 4 * top as u128 {
        return Err(Error::InvalidArgument(alloc::format!("grid {grid} must be at least 4 × max frequency {top}")));
    }
    let mut samples = product.stage_samples(stage, grid);
    for (i, v) in samples.iter_mut().enumerate() {
        if *v < -1e-10 {
            return Err(Error::NegativeDensity { index: i, value: *v });
        }
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    let mean = samples.iter().sum::<f64>() / grid as f64;
    if (mean - 1.0).abs() > 1e-9 {
        return Err(Error::MeanNotOne { mean });
    }
    Ok(GridDensity::new_normalized(samples))
}

/// Discrete transform of point samples: `(1/G) Σ_i s_i e^{-2πi n i/G}` for `n = 0..G`.
pub fn sample_transform(samples: &[f64]) -> Vec<Complex64> {
    let g = samples.len() as f64;
    let buf: Vec<Complex64> = samples.iter().map(|&s| Complex64::new(s / g, 0.0)).collect();
    fft::forward(&buf)
}
