//! One-sided ergodic Hilbert transform `Σ_{k≥1} P^k f / k` on trigonometric polynomials.
//!
//! Since `P e_j = μ̂(−j) e_j`, everything reduces to scalar series in
//! `w = μ̂(−j)`: the partial sum `Σ_{k≤n} w^k/k` and its limit `−log(1 − w)`.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;

use crate::diagnostics::UNIMODULAR_TOL;
use crate::error::{Error, Result};
use crate::fourier::FourierTable;

/// `f = Σ_j a_j e_j` with `e_j(x) = e^{2πi j x}`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrigPolynomial {
    terms: Vec<(i64, Complex64)>,
}

impl TrigPolynomial {
    /// Merges repeated frequencies and drops exact zeros.
    pub fn new(mut terms: Vec<(i64, Complex64)>) -> Self {
        terms.sort_by_key(|t| t.0);
        let mut out: Vec<(i64, Complex64)> = Vec::with_capacity(terms.len());
        for (j, a) in terms {
            match out.last_mut() {
                Some(last) if last.0 == j => last.1 += a,
                _ => out.push((j, a)),
            }
        }
        out.retain(|t| t.1 != Complex64::new(0.0, 0.0));
        TrigPolynomial { terms: out }
    }

    /// `e_j`.
    pub fn character(j: i64) -> Self {
        Self::new(alloc::vec![(j, Complex64::new(1.0, 0.0))])
    }

    pub fn terms(&self) -> &[(i64, Complex64)] {
        &self.terms
    }

    pub fn coefficient(&self, j: i64) -> Complex64 {
        self.terms.binary_search_by_key(&j, |t| t.0).map_or(Complex64::new(0.0, 0.0), |i| self.terms[i].1)
    }

    /// `Ef = a_0`.
    pub fn mean(&self) -> Complex64 {
        self.coefficient(0)
    }

    pub fn is_centered(&self) -> bool {
        self.mean() == Complex64::new(0.0, 0.0)
    }

    pub fn max_frequency(&self) -> u64 {
        self.terms.iter().map(|t| t.0.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|&(j, a)| {
                let ph = x * j as f64;
                let (s, c) = libm::sincos(TAU * (ph - libm::floor(ph)));
                a * Complex64::new(c, s)
            })
            .sum()
    }

    /// `Σ_j |a_j|`, an upper bound for the sup norm.
    pub fn coefficient_l1(&self) -> f64 {
        self.terms.iter().map(|t| t.1.norm()).sum()
    }

    /// `P^n f = Σ_j a_j μ̂(−j)^n e_j`.
    pub fn apply_power(&self, table: &FourierTable, n: u32) -> Result<TrigPolynomial> {
        let mut out = Vec::with_capacity(self.terms.len());
        for &(j, a) in &self.terms {
            out.push((j, a * eigenvalue(table, j)?.powu(n)));
        }
        Ok(TrigPolynomial { terms: out })
    }
}

/// `μ̂(−j)`, the eigenvalue of `P` on `e_j`.
pub fn eigenvalue(table: &FourierTable, j: i64) -> Result<Complex64> {
    table.get(-j).ok_or(Error::OutsideWindow { n: -j })
}

fn require_centered(f: &TrigPolynomial) -> Result<()> {
    let a0 = f.mean();
    if a0 != Complex64::new(0.0, 0.0) {
        return Err(Error::NotCentered { re: a0.re, im: a0.im });
    }
    Ok(())
}

/// `Σ_{k=1}^n w^k / k`.
pub fn partial_log_series(w: Complex64, n: u32) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut pw = Complex64::new(1.0, 0.0);
    for k in 1..=n {
        pw *= w;
        acc += pw / k as f64;
    }
    acc
}

/// Partial transform with the frequencies whose eigenvalue is unimodular.
#[derive(Debug, Clone, PartialEq)]
pub struct HilbertPartial {
    pub poly: TrigPolynomial,
    /// Frequencies where the series diverges (partial sums grow like `log n`).
    pub diverging: Vec<i64>,
}

/// `Σ_{k=1}^n P^k f / k`, coefficientwise `b_j = a_j Σ_{k≤n} μ̂(−j)^k / k`.
pub fn hilbert_partial(table: &FourierTable, f: &TrigPolynomial, n: u32) -> Result<HilbertPartial> {
    require_centered(f)?;
    let mut terms = Vec::with_capacity(f.terms.len());
    let mut diverging = Vec::new();
    for &(j, a) in &f.terms {
        let w = eigenvalue(table, j)?;
        if w.norm() >= 1.0 - UNIMODULAR_TOL {
            diverging.push(j);
        }
        terms.push((j, a * partial_log_series(w, n)));
    }
    Ok(HilbertPartial { poly: TrigPolynomial { terms }, diverging })
}

/// Limit `b_j = −a_j log(1 − μ̂(−j))`.
pub fn hilbert_closed_form(table: &FourierTable, f: &TrigPolynomial) -> Result<TrigPolynomial> {
    require_centered(f)?;
    let mut terms = Vec::with_capacity(f.terms.len());
    for &(j, a) in &f.terms {
        let w = eigenvalue(table, j)?;
        if w.norm() >= 1.0 - UNIMODULAR_TOL {
            return Err(Error::SeriesDiverges { frequency: j });
        }
        terms.push((j, -a * (Complex64::new(1.0, 0.0) - w).ln()));
    }
    Ok(TrigPolynomial { terms })
}

/// Per-frequency comparison of the partial transform with its limit.
#[derive(Debug, Clone, PartialEq)]
pub struct HilbertRow {
    pub j: i64,
    pub eigenvalue: Complex64,
    pub partial: Complex64,
    pub closed_form: Complex64,
    /// `|a_j| |w|^{n+1} / ((n+1)(1 − |w|))`, bounding `|closed_form − partial|`.
    pub tail_bound: f64,
    /// `|partial − (wg − Σ_{k=2}^n w^k g/(k(k−1)) − w^{n+1} g/n)|` with `g = a_j/(1 − w)`.
    pub telescoping_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HilbertComparison {
    pub n: u32,
    pub rows: Vec<HilbertRow>,
    /// `Σ_j |closed_form_j − partial_j|`, bounding the sup-norm difference.
    pub max_difference: f64,
    /// `Σ_j tail_bound_j`.
    pub tail_bound: f64,
    pub telescoping_residual: f64,
}

/// Right-hand side of the telescoping identity
/// `Σ_{k=1}^n P^k f/k = Pg − Σ_{k=2}^n P^k g/(k(k−1)) − P^{n+1} g/n`, `f = (I − P)g`.
pub fn telescoping_rhs(w: Complex64, g: Complex64, n: u32) -> Complex64 {
    let mut pw = w;
    let mut acc = w * g;
    for k in 2..=n {
        pw *= w;
        acc -= pw * g / (k as f64 * (k - 1) as f64);
    }
    acc - pw * w * g / n as f64
}

pub fn hilbert_compare(table: &FourierTable, f: &TrigPolynomial, n: u32) -> Result<HilbertComparison> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be ≥ 1".into()));
    }
    let closed = hilbert_closed_form(table, f)?;
    let partial = hilbert_partial(table, f, n)?;
    let mut rows = Vec::with_capacity(f.terms.len());
    for ((&(j, a), &(_, b)), &(_, c)) in f.terms.iter().zip(&partial.poly.terms).zip(&closed.terms) {
        let w = eigenvalue(table, j)?;
        let r = w.norm();
        let tail = a.norm() * libm::pow(r, n as f64 + 1.0) / ((n as f64 + 1.0) * (1.0 - r));
        let g = a / (Complex64::new(1.0, 0.0) - w);
        let resid = (b - telescoping_rhs(w, g, n)).norm();
        rows.push(HilbertRow { j, eigenvalue: w, partial: b, closed_form: c, tail_bound: tail, telescoping_residual: resid });
    }
    Ok(HilbertComparison {
        n,
        max_difference: rows.iter().map(|r| (r.closed_form - r.partial).norm()).sum(),
        tail_bound: rows.iter().map(|r| r.tail_bound).sum(),
        telescoping_residual: rows.iter().map(|r| r.telescoping_residual).fold(0.0, f64::max),
        rows,
    })
}
