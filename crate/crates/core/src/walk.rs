//! Random walks `X_n = x_0 + Y_1 + ⋯ + Y_n` with increments drawn from `μ`.
//!
//! Positions are 64-bit fixed-point turns, so sums wrap mod 1 exactly.
//! Trajectory `t` draws from stream `t` of a ChaCha8 generator keyed by the
//! seed, which makes every trajectory reproducible on its own.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::angle::Angle;
use crate::error::{Error, Result};
use crate::fourier::{FourierTable, Truncation};
use crate::hilbert::TrigPolynomial;
use crate::measure::{AtomicMeasure, CantorLebesgue, CircleMeasure};
use crate::operator::grid_build;

const TWO_POW_64: f64 = 18_446_744_073_709_551_616.0;

/// Generator for trajectory `t` under `seed`.
pub fn trajectory_rng(seed: u64, t: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(t);
    rng
}

/// Uniform float in `[0, 1)` with 53 random bits.
pub fn uniform(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Turns in `[0, 1)` to fixed point.
pub fn to_fixed(x: f64) -> u64 {
    let r = x - libm::floor(x);
    let v = r * TWO_POW_64;
    if v >= TWO_POW_64 {
        0
    } else {
        v as u64
    }
}

pub fn from_fixed(x: u64) -> f64 {
    x as f64 / TWO_POW_64
}

fn angle_fixed(a: &Angle) -> u64 {
    (a.fixed() >> 64) as u64
}

/// Options for building an [`IncrementSampler`].
#[derive(Debug, Clone, Copy)]
pub struct SamplerOptions {
    /// Grid used for the stage-truncated density of Riesz and gapped products.
    pub product_grid: usize,
    pub truncation: Truncation,
    /// Largest convolution exponent expanded into repeated draws.
    pub max_repeat: u32,
}

impl Default for SamplerOptions {
    fn default() -> Self {
        SamplerOptions { product_grid: 1 << 16, truncation: Truncation::Auto, max_repeat: 4096 }
    }
}

#[derive(Debug, Clone)]
enum Node {
    Point(u64),
    Atoms { cum: Vec<f64>, pos: Vec<u64> },
    Cells { cum: Vec<f64> },
    Cantor { steps: Vec<u64> },
    Mixture { cum: Vec<f64>, parts: Vec<Node> },
    Sum(Vec<Node>),
    Repeat(alloc::boxed::Box<Node>, u32),
    Negate(alloc::boxed::Box<Node>),
    Haar,
}

fn cumulative(weights: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut acc = 0.0;
    let mut cum: Vec<f64> = weights
        .map(|w| {
            acc += w;
            acc
        })
        .collect();
    let total = acc;
    cum.iter_mut().for_each(|c| *c /= total);
    if let Some(last) = cum.last_mut() {
        *last = 1.0;
    }
    cum
}

fn pick(cum: &[f64], u: f64) -> usize {
    cum.partition_point(|&c| c <= u).min(cum.len() - 1)
}

/// Step sizes `c θ^{-k}` in fixed point, down to the last nonzero one.
fn cantor_steps(c: &CantorLebesgue) -> Vec<u64> {
    let mut steps = Vec::new();
    match c.integer_rate().filter(|&t| t < (1 << 40)) {
        Some(theta) => {
            // (θ − 1)/2 · θ^{-k} · 2^64 = (θ − 1) 2^63 / θ^k
            let num = (theta as u128 - 1) << 63;
            let mut den: u128 = theta as u128;
            while den <= num {
                steps.push((num / den) as u64);
                match den.checked_mul(theta as u128) {
                    Some(d) => den = d,
                    None => break,
                }
            }
        }
        None => {
            let mut s = c.offset() / c.theta() * TWO_POW_64;
            while s >= 1.0 {
                steps.push(s as u64);
                s /= c.theta();
            }
        }
    }
    steps
}

/// Draws increments from a fixed measure.
#[derive(Debug, Clone)]
pub struct IncrementSampler {
    root: Node,
    stage: Option<usize>,
    grid: Option<usize>,
}

impl IncrementSampler {
    pub fn new(mu: &CircleMeasure, opts: &SamplerOptions) -> Result<Self> {
        let mut stage = None;
        let mut grid = None;
        let root = build(mu, opts, &mut stage, &mut grid)?;
        Ok(IncrementSampler { root, stage, grid })
    }

    /// Truncation stage of the sampled density, for Riesz and gapped parts.
    pub fn stage(&self) -> Option<usize> {
        self.stage
    }

    pub fn product_grid(&self) -> Option<usize> {
        self.grid
    }

    /// One increment in fixed-point turns.
    pub fn sample_fixed(&self, rng: &mut impl RngCore) -> u64 {
        draw(&self.root, rng)
    }

    /// One increment as an angle in `[0, 1)`.
    pub fn sample(&self, rng: &mut impl RngCore) -> f64 {
        from_fixed(self.sample_fixed(rng))
    }
}

fn build(mu: &CircleMeasure, opts: &SamplerOptions, stage: &mut Option<usize>, grid: &mut Option<usize>) -> Result<Node> {
    use CircleMeasure::*;
    Ok(match mu {
        Haar => Node::Haar,
        Atomic(a) if a.atoms().len() == 1 => Node::Point(angle_fixed(&a.atoms()[0].0)),
        Atomic(a) => Node::Atoms {
            cum: cumulative(a.atoms().iter().map(|t| t.1)),
            pos: a.atoms().iter().map(|t| angle_fixed(&t.0)).collect(),
        },
        Grid(g) => Node::Cells { cum: cumulative(g.masses().into_iter()) },
        Cantor(c) => Node::Cantor { steps: cantor_steps(c) },
        Riesz(_) | Gapped(_) => {
            let chain = grid_build(mu, opts.product_grid, opts.truncation)
                .map_err(|e| Error::Unsamplable(format!("truncated density: {e}")))?;
            *stage = chain.stage().or(*stage);
            *grid = Some(opts.product_grid);
            Node::Cells { cum: cumulative(chain.masses().iter().copied()) }
        }
        Mixture(m) => Node::Mixture {
            cum: cumulative(m.parts().iter().map(|p| p.0)),
            parts: m.parts().iter().map(|p| build(&p.1, opts, stage, grid)).collect::<Result<_>>()?,
        },
        Power { base, exponent } => {
            if exponent.get() > opts.max_repeat {
                return Err(Error::Unsamplable(format!(
                    "power {} exceeds the repeat limit {}",
                    exponent.get(),
                    opts.max_repeat
                )));
            }
            Node::Repeat(alloc::boxed::Box::new(build(base, opts, stage, grid)?), exponent.get())
        }
        Reversed(b) => Node::Negate(alloc::boxed::Box::new(build(b, opts, stage, grid)?)),
        Convolution(fs) => Node::Sum(fs.iter().map(|f| build(f, opts, stage, grid)).collect::<Result<_>>()?),
    })
}

fn draw(node: &Node, rng: &mut impl RngCore) -> u64 {
    match node {
        Node::Point(x) => *x,
        Node::Haar => rng.next_u64(),
        Node::Atoms { cum, pos } => pos[pick(cum, uniform(rng))],
        Node::Cells { cum } => {
            let n = cum.len();
            let i = pick(cum, uniform(rng));
            to_fixed((i as f64 + uniform(rng) - 0.5) / n as f64)
        }
        Node::Cantor { steps } => {
            let mut x: u64 = 0;
            for chunk in steps.chunks(64) {
                let bits = rng.next_u64();
                for (k, s) in chunk.iter().enumerate() {
                    x = if bits >> k & 1 == 1 { x.wrapping_add(*s) } else { x.wrapping_sub(*s) };
                }
            }
            x
        }
        Node::Mixture { cum, parts } => draw(&parts[pick(cum, uniform(rng))], rng),
        Node::Sum(parts) => parts.iter().fold(0u64, |acc, p| acc.wrapping_add(draw(p, rng))),
        Node::Repeat(b, k) => (0..*k).fold(0u64, |acc, _| acc.wrapping_add(draw(b, rng))),
        Node::Negate(b) => draw(b, rng).wrapping_neg(),
    }
}

/// A batch of trajectories, `M × n_max` positions in fixed-point turns.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkSample {
    pub seed: u64,
    pub trajectories: usize,
    pub horizon: usize,
    /// Row `t` holds `X_1, …, X_{n_max}` of trajectory `t`.
    pub positions: Vec<u64>,
}

impl WalkSample {
    pub fn position(&self, t: usize, n: usize) -> f64 {
        from_fixed(self.positions[t * self.horizon + n - 1])
    }
}

pub fn simulate(sampler: &IncrementSampler, x0: f64, horizon: usize, trajectories: usize, seed: u64) -> WalkSample {
    let start = to_fixed(x0);
    let mut positions = Vec::with_capacity(horizon * trajectories);
    for t in 0..trajectories {
        let mut rng = trajectory_rng(seed, t as u64);
        let mut x = start;
        for _ in 0..horizon {
            x = x.wrapping_add(sampler.sample_fixed(&mut rng));
            positions.push(x);
        }
    }
    WalkSample { seed, trajectories, horizon, positions }
}

/// `f(x)` at a fixed-point position, with the phase reduced exactly.
fn eval_fixed(f: &TrigPolynomial, x: u64) -> Complex64 {
    f.terms()
        .iter()
        .map(|&(j, a)| {
            let ph = from_fixed(x.wrapping_mul(j as u64));
            let (s, c) = libm::sincos(TAU * ph);
            a * Complex64::new(c, s)
        })
        .sum()
}

/// Mean and standard error of complex samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarlo {
    pub mean: Complex64,
    /// `sqrt(Σ|v − mean|² / (M(M − 1)))`.
    pub stderr: f64,
    pub samples: usize,
}

fn summarize(values: &[Complex64]) -> MonteCarlo {
    let m = values.len();
    let mean = values.iter().sum::<Complex64>() / m as f64;
    let ss: f64 = values.iter().map(|v| (v - mean).norm_sqr()).sum();
    let stderr = if m > 1 { libm::sqrt(ss / (m as f64 * (m - 1) as f64)) } else { 0.0 };
    MonteCarlo { mean, stderr, samples: m }
}

/// Monte-Carlo estimate of `P^n f(x_0)` with the exact value when a table is given.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PnfEstimate {
    pub mc: MonteCarlo,
    pub exact: Option<Complex64>,
    /// `|estimate − exact| / sqrt(stderr² + floor²)` with `floor = ROUNDING_FLOOR`.
    pub sigma: Option<f64>,
}

pub const MIN_TRAJECTORIES: usize = 100;

/// Rounding allowance in σ units, so deterministic walks with zero spread
/// do not turn last-bit differences into large deviations.
pub const ROUNDING_FLOOR: f64 = 1e-12;

/// `E f(x_0 + S_n)` over `M` trajectories.
pub fn estimate_pnf(
    sampler: &IncrementSampler,
    f: &TrigPolynomial,
    x0: f64,
    n: u32,
    trajectories: usize,
    seed: u64,
    table: Option<&FourierTable>,
) -> Result<PnfEstimate> {
    if trajectories < MIN_TRAJECTORIES {
        return Err(Error::InvalidArgument(format!("at least {MIN_TRAJECTORIES} trajectories are required")));
    }
    let start = to_fixed(x0);
    let values: Vec<Complex64> = (0..trajectories)
        .map(|t| {
            let mut rng = trajectory_rng(seed, t as u64);
            let mut x = start;
            for _ in 0..n {
                x = x.wrapping_add(sampler.sample_fixed(&mut rng));
            }
            eval_fixed(f, x)
        })
        .collect();
    let mc = summarize(&values);
    let exact = table.map(|t| exact_pnf(t, f, x0, n)).transpose()?;
    let sigma = exact.map(|e| (mc.mean - e).norm() / libm::hypot(mc.stderr, ROUNDING_FLOOR));
    Ok(PnfEstimate { mc, exact, sigma })
}

/// `P^n f(x_0) = Σ_j a_j μ̂(−j)^n e_j(x_0)`.
pub fn exact_pnf(table: &FourierTable, f: &TrigPolynomial, x0: f64, n: u32) -> Result<Complex64> {
    f.apply_power(table, n).map(|p| eval_fixed(&p, to_fixed(x0)))
}

/// Empirical `(1/M) Σ e^{-2πi n X}` for each requested frequency.
pub fn empirical_coefficients(sampler: &IncrementSampler, freqs: &[i64], draws: usize, seed: u64) -> Vec<MonteCarlo> {
    let mut values: Vec<Vec<Complex64>> = freqs.iter().map(|_| Vec::with_capacity(draws)).collect();
    for t in 0..draws {
        let mut rng = trajectory_rng(seed, t as u64);
        let x = sampler.sample_fixed(&mut rng);
        for (slot, &n) in values.iter_mut().zip(freqs) {
            let ph = from_fixed(x.wrapping_mul(n as u64));
            let (s, c) = libm::sincos(TAU * ph);
            slot.push(Complex64::new(c, -s));
        }
    }
    values.iter().map(|v| summarize(v)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AeRow {
    pub n: u32,
    /// `max_{x_0} |P^n f(x_0) − Ef|`.
    pub max_deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AeProbe {
    pub rows: Vec<AeRow>,
    /// `r` in `deviation ≈ C r^n`, fitted between the first and last positive rows.
    pub decay_rate: Option<f64>,
}

/// Exact evaluation of `P^n f(x_0)` over a set of starting points and a schedule of `n`.
pub fn ae_convergence_probe(table: &FourierTable, f: &TrigPolynomial, x0s: &[f64], schedule: &[u32]) -> Result<AeProbe> {
    let mean = f.mean();
    let mut rows = Vec::with_capacity(schedule.len());
    for &n in schedule {
        let p = f.apply_power(table, n)?;
        let dev = x0s.iter().map(|&x| (eval_fixed(&p, to_fixed(x)) - mean).norm()).fold(0.0, f64::max);
        rows.push(AeRow { n, max_deviation: dev });
    }
    let positive: Vec<&AeRow> = rows.iter().filter(|r| r.max_deviation > 0.0 && r.max_deviation.is_finite()).collect();
    let decay_rate = match (positive.first(), positive.last()) {
        (Some(a), Some(b)) if b.n > a.n => {
            Some(libm::exp((libm::log(b.max_deviation) - libm::log(a.max_deviation)) / (b.n - a.n) as f64))
        }
        _ => None,
    };
    Ok(AeProbe { rows, decay_rate })
}

/// Half-open arc `[start, start + length)` in turns; `length = 1` is the whole circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub start: f64,
    pub length: f64,
}

impl Arc {
    pub fn new(start: f64, length: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&length) || !start.is_finite() {
            return Err(Error::InvalidArgument(format!("arc length {length} must lie in [0, 1]")));
        }
        Ok(Arc { start: start - libm::floor(start), length })
    }

    pub fn contains(&self, x: f64) -> bool {
        if self.length >= 1.0 {
            return true;
        }
        let d = x - self.start;
        d - libm::floor(d) < self.length
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SweepOptions {
    /// Atoms of `μ^n` lighter than this are dropped.
    pub prune: f64,
    /// Largest number of atoms kept per step.
    pub budget: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions { prune: 1e-15, budget: 100_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub n: u32,
    pub max: f64,
    pub min: f64,
    pub atoms: usize,
    pub retained_mass: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepProbe {
    pub rows: Vec<SweepRow>,
    pub warnings: Vec<String>,
}

/// Extremes of `P^n 1_A` over the grid `x_i = i/G`, from the exact atoms of `μ^n`.
///
/// Illustrative only: a finite grid and horizon say nothing about null sets.
pub fn sweeping_probe(mu: &AtomicMeasure, arcs: &[Arc], n_max: u32, grid: usize, opts: &SweepOptions) -> Result<SweepProbe> {
    if grid == 0 || arcs.is_empty() {
        return Err(Error::InvalidArgument("grid and arc list must be non-empty".into()));
    }
    let inside = |x: f64| arcs.iter().any(|a| a.contains(x));
    let mut current: BTreeMap<Angle, f64> = BTreeMap::new();
    current.insert(Angle::ZERO, 1.0);
    let mut rows = Vec::with_capacity(n_max as usize);
    let mut warnings = Vec::new();
    for n in 1..=n_max {
        let mut next: BTreeMap<Angle, f64> = BTreeMap::new();
        for (a, w) in &current {
            for (b, v) in mu.atoms() {
                let c = a.checked_add(b).ok_or(Error::AngleOverflow)?;
                *next.entry(c).or_insert(0.0) += w * v;
            }
        }
        next.retain(|_, w| *w >= opts.prune);
        if next.len() > opts.budget {
            let mut ws: Vec<f64> = next.values().copied().collect();
            ws.sort_by(|x, y| y.total_cmp(x));
            let cut = ws[opts.budget - 1];
            let mut kept = 0;
            next.retain(|_, w| {
                let keep = *w >= cut && kept < opts.budget;
                kept += keep as usize;
                keep
            });
            warnings.push(format!("n = {n}: kept {} heaviest atoms", opts.budget));
        }
        current = next;
        let pts: Vec<(f64, f64)> = current.iter().map(|(a, w)| (a.to_turns(), *w)).collect();
        let retained: f64 = pts.iter().map(|p| p.1).sum();
        let (mut hi, mut lo) = (f64::NEG_INFINITY, f64::INFINITY);
        for i in 0..grid {
            let x = i as f64 / grid as f64;
            let v: f64 = pts.iter().filter(|(t, _)| inside(x + t)).map(|p| p.1).sum();
            hi = hi.max(v);
            lo = lo.min(v);
        }
        rows.push(SweepRow { n, max: hi, min: lo, atoms: pts.len(), retained_mass: retained });
    }
    Ok(SweepProbe { rows, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::{fourier_coefficient, fourier_table, TableOptions};

    fn q(p: i64, d: u64) -> Angle {
        Angle::rational(p, d).unwrap()
    }

    fn sampler(mu: &CircleMeasure) -> IncrementSampler {
        IncrementSampler::new(mu, &SamplerOptions::default()).unwrap()
    }

    #[test]
    fn dirac_is_constant() {
        let s = sampler(&CircleMeasure::dirac(q(1, 3)));
        let mut rng = trajectory_rng(7, 0);
        for _ in 0..10 {
            assert!((s.sample(&mut rng) - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn haar_mean_character_vanishes() {
        let s = sampler(&CircleMeasure::Haar);
        let m = 200_000;
        let e = empirical_coefficients(&s, &[1], m, 11)[0];
        assert!(e.mean.norm() < 3.0 / libm::sqrt(m as f64));
    }

    #[test]
    fn cantor_characteristic_function() {
        let mu = CircleMeasure::Cantor(CantorLebesgue::new(3.0).unwrap());
        let s = sampler(&mu);
        let m = 100_000;
        let emp = empirical_coefficients(&s, &[1, 2, 4], m, 3);
        for (k, e) in [1i64, 2, 4].iter().zip(&emp) {
            let exact = fourier_coefficient(&mu, *k, Truncation::Auto).unwrap();
            assert!((e.mean - exact).norm() < 4.0 / libm::sqrt(m as f64), "n={k}");
        }
    }

    #[test]
    fn cantor_steps_sum_to_half() {
        let steps = cantor_steps(&CantorLebesgue::new(3.0).unwrap());
        let total: u128 = steps.iter().map(|&s| s as u128).sum();
        assert!(((1u128 << 63) as i128 - total as i128).abs() < 64);
    }

    #[test]
    fn reproducible_streams() {
        let mu = CircleMeasure::mixture(alloc::vec![
            (0.5, CircleMeasure::Cantor(CantorLebesgue::new(3.0).unwrap())),
            (0.5, CircleMeasure::dirac(Angle::golden())),
        ])
        .unwrap();
        let s = sampler(&mu);
        let a = simulate(&s, 0.25, 20, 50, 99);
        let b = simulate(&s, 0.25, 20, 50, 99);
        assert_eq!(a, b);
        let c = simulate(&s, 0.25, 20, 50, 100);
        assert_ne!(a.positions, c.positions);
    }

    #[test]
    fn constant_function_is_exact() {
        let s = sampler(&CircleMeasure::Haar);
        let f = TrigPolynomial::character(0);
        let e = estimate_pnf(&s, &f, 0.3, 5, 100, 1, None).unwrap();
        assert_eq!(e.mc.mean, Complex64::new(1.0, 0.0));
        assert_eq!(e.mc.stderr, 0.0);
        assert!(estimate_pnf(&s, &f, 0.3, 5, 99, 1, None).is_err());
    }

    #[test]
    fn three_atom_walk_matches_eigenvalue() {
        let t = Angle::golden();
        let mu = CircleMeasure::Atomic(
            AtomicMeasure::new(alloc::vec![(t.neg(), 1.0 / 3.0), (Angle::ZERO, 1.0 / 3.0), (t.clone(), 1.0 / 3.0)]).unwrap(),
        );
        let table = fourier_table(&mu, 4, &TableOptions::default()).unwrap();
        let s = sampler(&mu);
        let f = TrigPolynomial::character(1);
        for n in [1u32, 3, 10] {
            let e = estimate_pnf(&s, &f, 0.0, n, 20_000, 5, Some(&table)).unwrap();
            let lam = (1.0 + 2.0 * libm::cos(TAU * t.to_turns())) / 3.0;
            assert!((e.exact.unwrap().re - libm::pow(lam, n as f64)).abs() < 1e-14);
            assert!(e.sigma.unwrap() < 4.0, "n={n}: {}", e.sigma.unwrap());
        }
    }

    #[test]
    fn riesz_sampler_records_stage() {
        use crate::measure::{CoefficientSeq, CoefficientTail, FrequencySeq, RieszProduct};
        let r = CircleMeasure::Riesz(
            RieszProduct::new(
                CoefficientSeq { prefix: Vec::new(), tail: CoefficientTail::Geometric { scale: 1.0, ratio: 0.5 } },
                FrequencySeq::Geometric { first: 4, ratio: 4 },
            )
            .unwrap(),
        );
        let s = IncrementSampler::new(&r, &SamplerOptions { product_grid: 1 << 10, ..SamplerOptions::default() }).unwrap();
        assert_eq!(s.stage(), Some(4));
        let emp = empirical_coefficients(&s, &[4], 50_000, 2)[0];
        assert!((emp.mean.re - 0.25).abs() < 4.0 / libm::sqrt(50_000.0) + 1e-3);
    }

    #[test]
    fn ae_probe_examples() {
        let h = fourier_table(&CircleMeasure::Haar, 3, &TableOptions::default()).unwrap();
        let f = TrigPolynomial::new(alloc::vec![(1, Complex64::new(1.0, 0.0)), (-1, Complex64::new(1.0, 0.0))]);
        let p = ae_convergence_probe(&h, &f, &[0.0, 0.3], &[1, 2, 3]).unwrap();
        assert!(p.rows.iter().all(|r| r.max_deviation == 0.0));
        let g = fourier_table(&CircleMeasure::dirac(Angle::golden()), 3, &TableOptions::default()).unwrap();
        let e1 = TrigPolynomial::character(1);
        let p = ae_convergence_probe(&g, &e1, &[0.0, 0.5], &[1, 10, 100]).unwrap();
        assert!(p.rows.iter().all(|r| (r.max_deviation - 1.0).abs() < 1e-12));
        let c = CircleMeasure::Cantor(CantorLebesgue::new(3.0).unwrap());
        let ct = fourier_table(&c, 729, &TableOptions::default()).unwrap();
        let s = crate::diagnostics::rho_sup(&ct).value;
        let p = ae_convergence_probe(&ct, &f, &[0.0, 0.1, 0.7], &[1, 2, 4, 8, 16]).unwrap();
        for r in &p.rows {
            assert!(r.max_deviation <= 2.0 * libm::pow(s, r.n as f64) + 1e-15);
        }
        assert!(p.decay_rate.unwrap() < 1.0);
    }

    #[test]
    fn sweeping_examples() {
        let golden = AtomicMeasure::dirac(Angle::golden());
        let half = Arc::new(0.0, 0.5).unwrap();
        let p = sweeping_probe(&golden, &[half], 30, 200, &SweepOptions::default()).unwrap();
        assert!(p.rows.iter().all(|r| r.max == 1.0 && r.min == 0.0 && r.atoms == 1));
        let whole = Arc::new(0.2, 1.0).unwrap();
        let p = sweeping_probe(&AtomicMeasure::symmetric_pair(Angle::golden()).unwrap(), &[whole], 10, 50, &SweepOptions::default())
            .unwrap();
        assert!(p.rows.iter().all(|r| (r.max - 1.0).abs() < 1e-12 && (r.min - 1.0).abs() < 1e-12));
        let many = AtomicMeasure::new((0..5).map(|k| (Angle::golden().checked_mul(k).unwrap(), 0.2)).collect()).unwrap();
        let p = sweeping_probe(&many, &[Arc::new(0.1, 0.3).unwrap()], 40, 100, &SweepOptions::default()).unwrap();
        let last = p.rows.last().unwrap();
        assert!(last.max < 0.5 && last.min > 0.1, "{last:?}");
        assert!((last.retained_mass - 1.0).abs() < 1e-9);
    }
}
