//! Operator norms of `P_μ^n − E`.
//!
//! On `L₂` the operator is diagonal in the characters, so its norm is a power
//! of the coefficient supremum. Total-variation norms have closed forms for a
//! few families; everything else is measured on a discretized chain over `ℤ_N`.
//! Grid values are exact for the discretized chain and only approximate the
//! continuum norms: the singular/non-singular dichotomy of the continuum is
//! invisible at any fixed `N`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::diagnostics::{has_singular_powers, power_of, rho_sup, window_certifies};
use crate::error::{Error, Result};
use crate::fft;
use crate::fourier::{fourier_table, sinc_turns, FourierTable, TableOptions, Truncation};
use crate::measure::{CantorLebesgue, CircleMeasure, GappedProduct, GridDensity, RieszProduct};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    Exact,
    LowerBound,
    UpperBound,
}

impl NormKind {
    pub fn label(self) -> &'static str {
        match self {
            NormKind::Exact => "exact",
            NormKind::LowerBound => "lower_bound",
            NormKind::UpperBound => "upper_bound",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormLabel {
    L1,
    L2,
    Lp(f64),
    LInf,
    Tv,
}

impl NormLabel {
    pub fn label(&self) -> String {
        match self {
            NormLabel::L1 => "1".into(),
            NormLabel::L2 => "2".into(),
            NormLabel::Lp(p) => format!("{p}"),
            NormLabel::LInf => "inf".into(),
            NormLabel::Tv => "tv".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormEntry {
    pub n: u32,
    pub value: f64,
    pub kind: NormKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormCurve {
    pub label: NormLabel,
    pub entries: Vec<NormEntry>,
}

/// `‖P^n − E‖₂ = s^n`, using the windowed supremum of the table.
pub fn l2_power_norm(table: &FourierTable, n: u32) -> f64 {
    power_of(rho_sup(table).value, n)
}

/// `L₂` curve for `n = 1..=n_max`; exact when the window certifies the supremum.
pub fn l2_curve(mu: &CircleMeasure, table: &FourierTable, n_max: u32) -> NormCurve {
    let s = rho_sup(table).value;
    let kind = if window_certifies(mu, table.half_width(), s) { NormKind::Exact } else { NormKind::LowerBound };
    NormCurve {
        label: NormLabel::L2,
        entries: (1..=n_max).map(|n| NormEntry { n, value: power_of(s, n), kind }).collect(),
    }
}

/// Closed-form total variation `‖μ^n − m‖`, or `None` when no closed form applies.
///
/// Haar gives `0`; measures whose powers are all singular give `2`; a mixture
/// `a·ν + (1−a)·m` gives `a^n ‖ν^n − m‖` because `m ∗ ρ = m` for every probability `ρ`.
pub fn tv_exact(mu: &CircleMeasure, n: u32) -> Option<f64> {
    if n == 0 {
        return None;
    }
    match mu {
        CircleMeasure::Haar => return Some(0.0),
        CircleMeasure::Power { base, exponent } => return tv_exact(base, n.checked_mul(exponent.get())?),
        CircleMeasure::Reversed(b) => return tv_exact(b, n),
        CircleMeasure::Mixture(m) => {
            let haar: f64 = m.parts().iter().filter(|(_, c)| *c == CircleMeasure::Haar).map(|(w, _)| w).sum();
            if haar > 0.0 {
                let a = 1.0 - haar;
                if a <= 0.0 {
                    return Some(0.0);
                }
                let rest: Vec<(f64, CircleMeasure)> = m
                    .parts()
                    .iter()
                    .filter(|(_, c)| *c != CircleMeasure::Haar)
                    .map(|(w, c)| (w / a, c.clone()))
                    .collect();
                let nu = if rest.len() == 1 { rest[0].1.clone() } else { CircleMeasure::mixture(rest).ok()? };
                return tv_exact(&nu, n).map(|t| power_of(a, n) * t);
            }
        }
        _ => {}
    }
    has_singular_powers(mu).then_some(2.0)
}

/// A probability vector on `ℤ_N` with its circulant symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct GridChain {
    p: Vec<f64>,
    kernel_hat: Vec<Complex64>,
    stage: Option<usize>,
}

impl GridChain {
    /// Builds a chain from cell masses (`p ≥ 0`, `Σp = 1` within `1e-12`).
    pub fn from_masses(p: Vec<f64>) -> Result<Self> {
        if p.len() < 2 {
            return Err(Error::InvalidArgument("grid size must be ≥ 2".into()));
        }
        if let Some((i, v)) = p.iter().enumerate().find(|(_, v)| !(**v >= 0.0)) {
            return Err(Error::NegativeDensity { index: i, value: *v });
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidMeasure(format!("cell masses sum to {total}")));
        }
        Ok(Self::with_stage(p, None))
    }

    fn with_stage(p: Vec<f64>, stage: Option<usize>) -> Self {
        let buf: Vec<Complex64> = p.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let mut kernel_hat = fft::inverse(&buf);
        kernel_hat[0] = Complex64::new(1.0, 0.0);
        GridChain { p, kernel_hat, stage }
    }

    pub fn size(&self) -> usize {
        self.p.len()
    }

    pub fn masses(&self) -> &[f64] {
        &self.p
    }

    /// `kernel_hat(k) = Σ_j p_j e^{2πi kj/N}`, the eigenvalue of `P` on `e_k`
    /// (the grid analogue of `μ̂(−k)`).
    pub fn kernel_hat(&self) -> &[Complex64] {
        &self.kernel_hat
    }

    /// Eigenvalue at a signed frequency.
    pub fn eigenvalue(&self, k: i64) -> Complex64 {
        self.kernel_hat[k.rem_euclid(self.p.len() as i64) as usize]
    }

    /// Truncation stage used for product families.
    pub fn stage(&self) -> Option<usize> {
        self.stage
    }

    /// `p_i = p_{−i}` up to rounding (`1e-14` absolute).
    pub fn is_symmetric(&self) -> bool {
        let n = self.p.len();
        (1..n).all(|i| (self.p[i] - self.p[n - i]).abs() <= 1e-14)
    }
}

/// Largest trigonometric degree used when binning product families.
pub const MAX_GRID_DEGREE: u64 = 1 << 26;

/// Discretizes `mu` into cell masses `p_i = μ([i/N − 1/(2N), i/N + 1/(2N)))`.
pub fn grid_build(mu: &CircleMeasure, n: usize, trunc: Truncation) -> Result<GridChain> {
    if n < 2 {
        return Err(Error::InvalidArgument("grid size must be ≥ 2".into()));
    }
    let mut stage = None;
    let p = masses(mu, n, trunc, &mut stage)?;
    Ok(GridChain::with_stage(p, stage))
}

fn masses(mu: &CircleMeasure, n: usize, trunc: Truncation, stage: &mut Option<usize>) -> Result<Vec<f64>> {
    use CircleMeasure::*;
    Ok(match mu {
        Haar => alloc::vec![1.0 / n as f64; n],
        Atomic(a) => {
            let mut p = alloc::vec![0.0; n];
            for (t, w) in a.atoms() {
                p[t.cell_index(n as u64) as usize] += w;
            }
            p
        }
        Grid(g) => rebin(g, n),
        Cantor(c) => cantor_masses(c, n),
        Riesz(r) => {
            let s = product_stage(riesz_required_stage(r, n), r.factor_count(), trunc, n)?;
            *stage = Some(stage.map_or(s, |t| t.max(s)));
            product_masses(&CircleMeasure::Riesz(r.clone()), r_stage_degree(r, s), s, n)?
        }
        Gapped(g) => {
            let s = product_stage(gapped_required_stage(g, n), Some(g.factors().len()), trunc, n)?;
            *stage = Some(stage.map_or(s, |t| t.max(s)));
            product_masses(&CircleMeasure::Gapped(g.clone()), g.max_frequency(s), s, n)?
        }
        Mixture(m) => {
            let mut p = alloc::vec![0.0; n];
            for (w, c) in m.parts() {
                for (x, y) in p.iter_mut().zip(masses(c, n, trunc, stage)?) {
                    *x += w * y;
                }
            }
            p
        }
        Power { base, exponent } => {
            let b = masses(base, n, trunc, stage)?;
            let hat = to_hat(&b);
            from_hat(hat.iter().map(|h| h.powu(exponent.get())).collect())
        }
        Reversed(b) => {
            let q = masses(b, n, trunc, stage)?;
            (0..n).map(|i| q[(n - i) % n]).collect()
        }
        Convolution(fs) => {
            let mut hat = alloc::vec![Complex64::new(1.0, 0.0); n];
            for f in fs {
                for (h, g) in hat.iter_mut().zip(to_hat(&masses(f, n, trunc, stage)?)) {
                    *h *= g;
                }
            }
            from_hat(hat)
        }
    })
}

fn to_hat(p: &[f64]) -> Vec<Complex64> {
    let buf: Vec<Complex64> = p.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft::inverse(&buf)
}

fn from_hat(hat: Vec<Complex64>) -> Vec<f64> {
    let n = hat.len() as f64;
    fft::forward(&hat).iter().map(|z| (z.re / n).max(0.0)).collect()
}

/// Rebins a centered-cell density onto `n` centered cells through its CDF.
fn rebin(g: &GridDensity, n: usize) -> Vec<f64> {
    let m = g.masses();
    let cells = m.len();
    if cells == n {
        return m;
    }
    let mut prefix = Vec::with_capacity(cells + 1);
    prefix.push(0.0);
    for &v in &m {
        prefix.push(prefix.last().unwrap() + v);
    }
    // F(x) = mass of [−1/(2G), x), extended periodically with F(x + 1) = F(x) + 1
    let cdf = |x: f64| {
        let u = x * cells as f64 + 0.5;
        let k = libm::floor(u);
        let frac = u - k;
        let k = k as i64;
        let wraps = k.div_euclid(cells as i64) as f64;
        let i = k.rem_euclid(cells as i64) as usize;
        wraps + prefix[i] + frac * m[i]
    };
    (0..n)
        .map(|j| {
            let c = j as f64 / n as f64;
            let h = 0.5 / n as f64;
            (cdf(c + h) - cdf(c - h)).max(0.0)
        })
        .collect()
}

const CANTOR_CDF_DEPTH: u32 = 64;

/// `P(X < u/(2N))` for the integer-rate model, exact in integer arithmetic
/// up to [`CANTOR_CDF_DEPTH`] levels.
fn cantor_cdf_int(u: i128, half: i128, theta: i128, depth: u32) -> f64 {
    if u <= -half {
        return 0.0;
    }
    if u >= half {
        return 1.0;
    }
    if depth == CANTOR_CDF_DEPTH {
        return (u + half) as f64 / (2 * half) as f64;
    }
    let shift = (theta - 1) * half;
    0.5 * cantor_cdf_int(theta * u - shift, half, theta, depth + 1)
        + 0.5 * cantor_cdf_int(theta * u + shift, half, theta, depth + 1)
}

/// `P(X < x)` for `X = Σ ε_k c θ^{-k}`, which lives on `[−1/2, 1/2]`.
fn cantor_cdf_float(x: f64, theta: f64, c: f64, width: f64) -> f64 {
    if x <= -0.5 {
        return 0.0;
    }
    if x >= 0.5 {
        return 1.0;
    }
    if width < 1e-17 {
        return x + 0.5;
    }
    0.5 * cantor_cdf_float(theta * x - c, theta, c, width / theta)
        + 0.5 * cantor_cdf_float(theta * x + c, theta, c, width / theta)
}

fn cantor_masses(c: &CantorLebesgue, n: usize) -> Vec<f64> {
    let mass = |cdf: &dyn Fn(i128) -> f64, a: i128, b: i128, period: i128| -> f64 {
        (-1..=1).map(|m| cdf(b + m * period) - cdf(a + m * period)).sum::<f64>()
    };
    match c.integer_rate().filter(|&t| (t as u128) < (1u128 << 40)) {
        Some(theta) => {
            // cell j is [(2j − 1)/(2N), (2j + 1)/(2N)); work in units of 1/(2N)
            let half = n as i128;
            let cdf = |u: i128| cantor_cdf_int(u, half, theta as i128, 0);
            (0..n as i128).map(|j| mass(&cdf, 2 * j - 1, 2 * j + 1, 2 * half).max(0.0)).collect()
        }
        None => {
            let theta = c.theta();
            let off = c.offset();
            let scale = 2.0 * n as f64;
            let cdf = |u: i128| cantor_cdf_float(u as f64 / scale, theta, off, 1.0);
            (0..n as i128).map(|j| mass(&cdf, 2 * j - 1, 2 * j + 1, 2 * n as i128).max(0.0)).collect()
        }
    }
}

/// Smallest stage that includes every factor with frequency `≤ N/2`.
fn riesz_required_stage(r: &RieszProduct, n: usize) -> usize {
    let mut s = 0;
    while let Some((_, f)) = r.factor(s + 1) {
        if f as u128 * 2 > n as u128 {
            break;
        }
        s += 1;
    }
    s
}

fn r_stage_degree(r: &RieszProduct, s: usize) -> u64 {
    r.stage_factors(s).iter().fold(0u64, |a, f| a.saturating_add(f.1))
}

fn gapped_required_stage(g: &GappedProduct, n: usize) -> usize {
    g.scales().iter().take_while(|&&r| r as u128 * 2 <= n as u128).count()
}

fn product_stage(required: usize, available: Option<usize>, trunc: Truncation, n: usize) -> Result<usize> {
    let required = available.map_or(required, |a| required.min(a));
    match trunc {
        Truncation::Auto => Ok(required),
        Truncation::Stage(s) if s < required => Err(Error::StageTooLow { stage: s, required, cells: n }),
        Truncation::Stage(s) => Ok(available.map_or(s, |a| s.min(a))),
    }
}

/// Exact cell masses of the stage-`s` partial product:
/// `p_j = (1/N) Σ_m ĉ(m) sinc(πm/N) e^{2πi mj/N}`, folded mod `N`.
fn product_masses(mu: &CircleMeasure, degree: u64, s: usize, n: usize) -> Result<Vec<f64>> {
    if degree > MAX_GRID_DEGREE {
        return Err(Error::InvalidArgument(format!(
            "stage {s} has degree {degree}, above the binning limit {MAX_GRID_DEGREE}"
        )));
    }
    let mut folded = alloc::vec![Complex64::new(0.0, 0.0); n];
    folded[0] = Complex64::new(1.0, 0.0);
    if degree > 0 {
        let opts = TableOptions { max_half_width: MAX_GRID_DEGREE as usize, truncation: Truncation::Stage(s.max(1)) };
        let table = fourier_table(mu, degree as usize, &opts)?;
        for m in 1..=degree as i64 {
            let w = sinc_turns(m, n);
            if w == 0.0 {
                continue;
            }
            // the density has Fourier coefficient μ̂(m) at e^{2πi m t}
            folded[m.rem_euclid(n as i64) as usize] += table.value(m) * w;
            folded[(-m).rem_euclid(n as i64) as usize] += table.value(-m) * w;
        }
    }
    let spatial = fft::inverse(&folded);
    let mut p: Vec<f64> = spatial.iter().map(|z| z.re / n as f64).collect();
    for (i, v) in p.iter_mut().enumerate() {
        if *v < -1e-12 {
            return Err(Error::NegativeDensity { index: i, value: *v });
        }
        *v = v.max(0.0);
    }
    Ok(p)
}

/// Grid operator norms of `P^n − E` for `n = 1..=n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridNorms {
    pub size: usize,
    /// `‖P^n − E‖_{1→1} = Σ_i |p^{(n)}_i − 1/N|`.
    pub l1: NormCurve,
    /// `‖P^n − E‖_{∞→∞} = Σ_i |p^{(n)}_{−i} − 1/N|`.
    pub linf: NormCurve,
    pub warnings: Vec<String>,
}

/// Drift of `Σ p^{(n)}` from one that triggers renormalization.
pub const DRIFT_TOL: f64 = 1e-8;

pub fn grid_power_norms(chain: &GridChain, n_max: u32) -> Result<GridNorms> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be ≥ 1".into()));
    }
    let size = chain.size();
    let u = 1.0 / size as f64;
    let mut hat = chain.kernel_hat().to_vec();
    let mut l1 = Vec::with_capacity(n_max as usize);
    let mut linf = Vec::with_capacity(n_max as usize);
    let mut warnings = Vec::new();
    for n in 1..=n_max {
        let mut q: Vec<f64> = fft::forward(&hat).iter().map(|z| z.re / size as f64).collect();
        let total: f64 = q.iter().sum();
        if (total - 1.0).abs() > DRIFT_TOL {
            warnings.push(format!("mass drift {:.3e} at n = {n}; renormalized", total - 1.0));
            q.iter_mut().for_each(|v| *v /= total);
        }
        let a: f64 = q.iter().map(|v| (v - u).abs()).sum();
        let b: f64 = (0..size).map(|i| (q[(size - i) % size] - u).abs()).sum();
        l1.push(NormEntry { n, value: a, kind: NormKind::Exact });
        linf.push(NormEntry { n, value: b, kind: NormKind::Exact });
        for (h, k) in hat.iter_mut().zip(chain.kernel_hat()) {
            *h *= k;
        }
    }
    Ok(GridNorms {
        size,
        l1: NormCurve { label: NormLabel::L1, entries: l1 },
        linf: NormCurve { label: NormLabel::LInf, entries: linf },
        warnings,
    })
}

/// Certified interval for `‖P^n − E‖_p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpBounds {
    pub lower: f64,
    pub upper: f64,
    /// The upper endpoint comes from closed-form total variation rather than the grid.
    pub upper_exact_endpoints: bool,
}

/// Lower bound `s^n` from unimodular eigenfunctions; upper bound
/// `‖·‖₁^{1/p} ‖·‖_∞^{1−1/p}` by interpolation, using the closed-form total
/// variation when given and the grid norms otherwise.
pub fn lp_norm_bounds(chain: &GridChain, table: &FourierTable, p: f64, n: u32, tv: Option<f64>) -> Result<LpBounds> {
    if !(p >= 1.0) {
        return Err(Error::InvalidArgument(format!("p = {p} is outside [1, ∞]")));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("power must be ≥ 1".into()));
    }
    let lower = l2_power_norm(table, n);
    let (l1, linf) = match tv {
        Some(t) => (t, t),
        None => {
            let norms = grid_power_norms(chain, n)?;
            (norms.l1.entries[n as usize - 1].value, norms.linf.entries[n as usize - 1].value)
        }
    };
    let inv = if p.is_infinite() { 0.0 } else { 1.0 / p };
    let upper = if inv == 1.0 {
        l1
    } else if inv == 0.0 {
        linf
    } else {
        libm::pow(l1, inv) * libm::pow(linf, 1.0 - inv)
    };
    Ok(LpBounds { lower, upper, upper_exact_endpoints: tv.is_some() })
}

/// Cesàro symbol `|(1/N) Σ_{j=1}^N w^j|`.
pub fn cesaro_symbol(w: Complex64, n_avg: u32) -> f64 {
    let one = Complex64::new(1.0, 0.0);
    if w == one {
        return 1.0;
    }
    if (one - w).norm() < 1e-6 {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut pw = one;
        for _ in 0..n_avg {
            pw *= w;
            acc += pw;
        }
        return acc.norm() / n_avg as f64;
    }
    (w * (one - w.powu(n_avg)) / ((one - w) * n_avg as f64)).norm()
}

/// `sup_{0<|k|≤N} |(1/N_avg) Σ_{j=1}^{N_avg} μ̂(k)^j|`.
pub fn mean_ergodic_norm(table: &FourierTable, n_avg: u32) -> Result<f64> {
    if n_avg == 0 {
        return Err(Error::InvalidArgument("averaging length must be ≥ 1".into()));
    }
    Ok(table.scan().map(|(_, w)| cesaro_symbol(w, n_avg)).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::Angle;
    use crate::fourier::fourier_coefficient;
    use crate::measure::{AtomicMeasure, CoefficientSeq, CoefficientTail, CosinePolynomial, FrequencySeq};
    use proptest::prelude::*;

    fn q(p: i64, d: u64) -> Angle {
        Angle::rational(p, d).unwrap()
    }

    fn table(mu: &CircleMeasure, n: usize) -> FourierTable {
        fourier_table(mu, n, &TableOptions::default()).unwrap()
    }

    fn cantor3() -> CircleMeasure {
        CircleMeasure::Cantor(CantorLebesgue::new(3.0).unwrap())
    }

    fn riesz_geo() -> CircleMeasure {
        CircleMeasure::Riesz(
            RieszProduct::new(
                CoefficientSeq { prefix: Vec::new(), tail: CoefficientTail::Geometric { scale: 1.0, ratio: 0.5 } },
                FrequencySeq::Geometric { first: 4, ratio: 4 },
            )
            .unwrap(),
        )
    }

    #[test]
    fn l2_examples() {
        assert_eq!(l2_power_norm(&table(&CircleMeasure::Haar, 10), 7), 0.0);
        assert_eq!(l2_power_norm(&table(&CircleMeasure::dirac(Angle::golden()), 10), 9), 1.0);
        let t = table(&cantor3(), 3000);
        let s = rho_sup(&t).value;
        for n in 1..=20 {
            // oracle: norm of the truncated diagonal operator
            let diag = t.scan().map(|(_, v)| v.norm().powi(n as i32)).fold(0.0, f64::max);
            assert!((l2_power_norm(&t, n) - diag).abs() < 1e-12);
            assert!((l2_power_norm(&t, n) - power_of(s, 1).powi(n as i32)).abs() < 1e-12);
        }
    }

    #[test]
    fn tv_closed_forms() {
        assert_eq!(tv_exact(&CircleMeasure::Haar, 4), Some(0.0));
        let atomic = CircleMeasure::Atomic(AtomicMeasure::new(alloc::vec![(q(1, 3), 0.5), (Angle::golden(), 0.5)]).unwrap());
        assert_eq!(tv_exact(&atomic, 5), Some(2.0));
        let z = CircleMeasure::dirac(Angle::golden());
        let mix = CircleMeasure::mixture(alloc::vec![(0.5, z), (0.5, CircleMeasure::Haar)]).unwrap();
        assert_eq!(tv_exact(&mix, 3), Some(0.25));
        let cmix = CircleMeasure::mixture(alloc::vec![(0.3, cantor3()), (0.7, CircleMeasure::Haar)]).unwrap();
        assert!((tv_exact(&cmix, 2).unwrap() - 2.0 * 0.09).abs() < 1e-15);
        assert_eq!(tv_exact(&cantor3(), 4), Some(2.0));
        assert_eq!(tv_exact(&riesz_geo(), 1), None);
        let grid = CircleMeasure::Grid(GridDensity::new(alloc::vec![1.5, 0.5]).unwrap());
        assert_eq!(tv_exact(&grid, 1), None);
    }

    #[test]
    fn grid_build_examples() {
        let h = grid_build(&CircleMeasure::Haar, 8, Truncation::Auto).unwrap();
        assert!(h.masses().iter().all(|&v| v == 0.125));
        let d = grid_build(&CircleMeasure::dirac(q(1, 4)), 8, Truncation::Auto).unwrap();
        assert_eq!(d.masses()[2], 1.0);
        let c = grid_build(&cantor3(), 27, Truncation::Auto).unwrap();
        let occupied: Vec<usize> = (0..27).filter(|&i| c.masses()[i] > 1e-12).collect();
        assert_eq!(occupied.len(), 8);
        for &i in &occupied {
            assert!((c.masses()[i] - 0.125).abs() < 1e-15, "cell {i}: {}", c.masses()[i]);
        }
        // centers Σ ε_k 3^{-k}, k ≤ 3, in units of 1/27, reduced mod 27
        let mut expect: Vec<usize> = Vec::new();
        for e in 0..8 {
            let s: i64 = (0..3).map(|k| if e >> k & 1 == 1 { 9 / 3i64.pow(k) } else { -9 / 3i64.pow(k) }).sum();
            expect.push(s.rem_euclid(27) as usize);
        }
        expect.sort();
        assert_eq!(occupied, expect);
    }

    #[test]
    fn grid_norm_hand_example() {
        let mu = CircleMeasure::Atomic(AtomicMeasure::new(alloc::vec![(q(1, 4), 0.5), (q(1, 2), 0.5)]).unwrap());
        let chain = grid_build(&mu, 8, Truncation::Auto).unwrap();
        let norms = grid_power_norms(&chain, 1).unwrap();
        // two cells at 1/2 − 1/8 and six at 1/8
        assert!((norms.l1.entries[0].value - 1.5).abs() < 1e-15);
        let uniform = grid_build(&CircleMeasure::Haar, 16, Truncation::Auto).unwrap();
        assert!(grid_power_norms(&uniform, 5).unwrap().l1.entries.iter().all(|e| e.value < 1e-15));
    }

    #[test]
    fn grid_rebin_preserves_mass() {
        let g = GridDensity::new(alloc::vec![2.0, 0.0, 1.0, 1.0, 1.0, 1.0]).unwrap();
        let mu = CircleMeasure::Grid(g);
        for n in [2usize, 5, 6, 12, 64] {
            let c = grid_build(&mu, n, Truncation::Auto).unwrap();
            assert!((c.masses().iter().sum::<f64>() - 1.0).abs() < 1e-13);
        }
        let c = grid_build(&mu, 12, Truncation::Auto).unwrap();
        // cell 0 of width 1/12 around 0 sits inside the first source cell (density 2)
        assert!((c.masses()[0] - 2.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn riesz_grid_matches_coefficients() {
        let mu = riesz_geo();
        let chain = grid_build(&mu, 1 << 12, Truncation::Auto).unwrap();
        assert_eq!(chain.stage(), Some(5));
        for k in -32i64..=32 {
            let exact = fourier_coefficient(&mu, -k, Truncation::Auto).unwrap();
            assert!((chain.eigenvalue(k) - exact).norm() < 1e-4, "k={k}");
        }
        assert!(matches!(grid_build(&mu, 1 << 12, Truncation::Stage(2)), Err(Error::StageTooLow { required: 5, .. })));
    }

    #[test]
    fn gapped_grid_masses_are_probabilities() {
        let f = CosinePolynomial::fejer(3).unwrap();
        let g = CircleMeasure::Gapped(GappedProduct::new(alloc::vec![f.clone(), f], None, 2.0).unwrap());
        let chain = grid_build(&g, 256, Truncation::Auto).unwrap();
        assert!((chain.masses().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert_eq!(chain.stage(), Some(2));
    }

    #[test]
    fn mixture_grid_tracks_closed_form() {
        let z = CircleMeasure::dirac(q(5, 16));
        let mix = CircleMeasure::mixture(alloc::vec![(0.5, z), (0.5, CircleMeasure::Haar)]).unwrap();
        let n = 1 << 12;
        let chain = grid_build(&mix, n, Truncation::Auto).unwrap();
        let norms = grid_power_norms(&chain, 10).unwrap();
        for e in &norms.l1.entries {
            let grid_exact = 2.0 * 0.5f64.powi(e.n as i32) * (1.0 - 1.0 / n as f64);
            assert!((e.value - grid_exact).abs() < 1e-9);
            assert!((e.value - tv_exact(&mix, e.n).unwrap()).abs() < 1e-3);
        }
    }

    #[test]
    fn endpoint_norms_agree() {
        let mu = CircleMeasure::Atomic(AtomicMeasure::symmetric_pair(Angle::golden()).unwrap());
        let chain = grid_build(&mu, 1024, Truncation::Auto).unwrap();
        let norms = grid_power_norms(&chain, 8).unwrap();
        for (a, b) in norms.l1.entries.iter().zip(&norms.linf.entries) {
            assert!((a.value - b.value).abs() < 1e-12);
        }
    }

    #[test]
    fn lp_bounds_examples() {
        let h = CircleMeasure::Haar;
        let hc = grid_build(&h, 64, Truncation::Auto).unwrap();
        let b = lp_norm_bounds(&hc, &table(&h, 10), 3.0, 2, tv_exact(&h, 2)).unwrap();
        assert_eq!((b.lower, b.upper), (0.0, 0.0));
        let mu = CircleMeasure::Atomic(AtomicMeasure::new(alloc::vec![(q(1, 3), 0.5), (Angle::golden(), 0.5)]).unwrap());
        let chain = grid_build(&mu, 512, Truncation::Auto).unwrap();
        let t = table(&mu, 200);
        let b = lp_norm_bounds(&chain, &t, 1.0, 3, tv_exact(&mu, 3)).unwrap();
        assert_eq!(b.lower, l2_power_norm(&t, 3));
        assert_eq!(b.upper, 2.0);
        let g = lp_norm_bounds(&chain, &t, 2.0, 3, None).unwrap();
        assert!(g.lower <= g.upper);
        assert!(lp_norm_bounds(&chain, &t, 0.5, 1, None).is_err());
        let inf = lp_norm_bounds(&chain, &t, f64::INFINITY, 2, None).unwrap();
        assert!(inf.upper >= inf.lower);
    }

    #[test]
    fn mean_ergodic_examples() {
        assert_eq!(mean_ergodic_norm(&table(&CircleMeasure::Haar, 5), 5).unwrap(), 0.0);
        let half = CircleMeasure::dirac(q(1, 2));
        assert_eq!(mean_ergodic_norm(&table(&half, 4), 6).unwrap(), 1.0);
        let t = table(&cantor3(), 729);
        let s = rho_sup(&t).value;
        let v = mean_ergodic_norm(&t, 100).unwrap();
        assert!(v > 0.0 && v <= s / (1.0 - s) / 100.0 + 1e-15);
    }

    proptest! {
        #[test]
        fn cesaro_matches_direct_sum(re in -1.0f64..1.0, im in -1.0f64..1.0, n in 1u32..60) {
            let w = Complex64::new(re, im);
            prop_assume!(w.norm() <= 1.0);
            let direct = (1..=n).map(|j| w.powu(j)).sum::<Complex64>().norm() / n as f64;
            prop_assert!((cesaro_symbol(w, n) - direct).abs() < 1e-9);
        }

        #[test]
        fn l2_law_holds(vals in prop::collection::vec((-0.7f64..0.7, -0.7f64..0.7), 1..40), n in 1u32..=20) {
            let pos: Vec<Complex64> = vals.iter().map(|&(a, b)| Complex64::new(a, b)).collect();
            let t = FourierTable::from_positive(&pos).unwrap();
            let one = l2_power_norm(&t, 1);
            prop_assert!((l2_power_norm(&t, n) - one.powi(n as i32)).abs() < 1e-12);
        }

        #[test]
        fn symmetric_chains_have_equal_endpoint_norms(ws in prop::collection::vec(0.01f64..1.0, 1..6), d in 3u64..40) {
            let mut atoms = Vec::new();
            let total: f64 = ws.iter().sum::<f64>() * 2.0;
            for (i, w) in ws.iter().enumerate() {
                let k = (i as u64 % (d / 2).max(1)) + 1;
                atoms.push((Angle::rational(k as i64, d).unwrap(), w / total));
                atoms.push((Angle::rational(-(k as i64), d).unwrap(), w / total));
            }
            let Ok(am) = crate::measure::AtomicMeasure::new(merge(atoms)) else { return Ok(()); };
            let chain = grid_build(&CircleMeasure::Atomic(am), 256, Truncation::Auto).unwrap();
            let norms = grid_power_norms(&chain, 4).unwrap();
            for (a, b) in norms.l1.entries.iter().zip(&norms.linf.entries) {
                prop_assert!((a.value - b.value).abs() < 1e-12);
            }
        }
    }

    fn merge(atoms: Vec<(Angle, f64)>) -> Vec<(Angle, f64)> {
        let mut map = alloc::collections::BTreeMap::new();
        for (a, w) in atoms {
            *map.entry(a).or_insert(0.0) += w;
        }
        map.into_iter().collect()
    }
}
