//! Probability measures on the circle.
//!
//! Every family is an immutable value validated at construction. Composite
//! measures ([`CircleMeasure::Mixture`], `Power`, `Reversed`, `Convolution`)
//! are symbolic nodes; their Fourier coefficients follow from the children.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;
use core::num::NonZeroU32;

use crate::angle::Angle;
use crate::error::{Error, Result};

const WEIGHT_TOL: f64 = 1e-12;

/// Finitely many atoms with positive weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicMeasure {
    atoms: Vec<(Angle, f64)>,
}

impl AtomicMeasure {
    pub fn new(atoms: Vec<(Angle, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidMeasure("atomic measure needs at least one atom".into()));
        }
        for (i, (_, w)) in atoms.iter().enumerate() {
            if !(w.is_finite() && *w > 0.0) {
                return Err(Error::InvalidMeasure(format!("atom {i} has non-positive weight {w}")));
            }
        }
        let total: f64 = atoms.iter().map(|(_, w)| w).sum();
        if (total - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::InvalidMeasure(format!("atom weights sum to {total}, expected 1")));
        }
        let mut seen = BTreeMap::new();
        for (i, (a, _)) in atoms.iter().enumerate() {
            if let Some(j) = seen.insert(a.clone(), i) {
                return Err(Error::InvalidMeasure(format!("atoms {j} and {i} share the angle {a}")));
            }
        }
        Ok(AtomicMeasure { atoms })
    }

    /// Builds from possibly repeated angles, merging weights and dropping
    /// atoms at or below `prune`. Weights are renormalized.
    pub(crate) fn from_merged(map: BTreeMap<Angle, f64>, prune: f64) -> Result<Self> {
        let atoms: Vec<(Angle, f64)> = map.into_iter().filter(|(_, w)| *w > prune).collect();
        let total: f64 = atoms.iter().map(|(_, w)| w).sum();
        if atoms.is_empty() || total <= 0.0 {
            return Err(Error::InvalidMeasure("no mass left after merging atoms".into()));
        }
        Ok(AtomicMeasure { atoms: atoms.into_iter().map(|(a, w)| (a, w / total)).collect() })
    }

    pub fn dirac(angle: Angle) -> Self {
        AtomicMeasure { atoms: alloc::vec![(angle, 1.0)] }
    }

    /// `½(δ_t + δ_{-t})`.
    pub fn symmetric_pair(angle: Angle) -> Result<Self> {
        let neg = angle.neg();
        AtomicMeasure::new(alloc::vec![(angle, 0.5), (neg, 0.5)])
    }

    pub fn atoms(&self) -> &[(Angle, f64)] {
        &self.atoms
    }

    /// Exact convolution `self ∗ other`.
    pub fn convolve(&self, other: &AtomicMeasure) -> Result<AtomicMeasure> {
        let mut map: BTreeMap<Angle, f64> = BTreeMap::new();
        for (a, wa) in &self.atoms {
            for (b, wb) in &other.atoms {
                let s = a.checked_add(b).ok_or(Error::AngleOverflow)?;
                *map.entry(s).or_insert(0.0) += wa * wb;
            }
        }
        AtomicMeasure::from_merged(map, 0.0)
    }

    pub fn reversed(&self) -> AtomicMeasure {
        AtomicMeasure { atoms: self.atoms.iter().map(|(a, w)| (a.neg(), *w)).collect() }
    }

    /// True when the atom set is closed under negation with matched weights.
    pub fn is_symmetric(&self) -> bool {
        let map: BTreeMap<&Angle, f64> = self.atoms.iter().map(|(a, w)| (a, *w)).collect();
        self.atoms.iter().all(|(a, w)| {
            let n = a.neg();
            map.get(&n).is_some_and(|v| (v - w).abs() <= WEIGHT_TOL)
        })
    }
}

/// Piecewise-constant density with respect to normalized Lebesgue measure.
///
/// Cell `i` of `G` is `[i/G − 1/(2G), i/G + 1/(2G))`, centered at `i/G`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridDensity {
    density: Vec<f64>,
}

impl GridDensity {
    pub fn new(density: Vec<f64>) -> Result<Self> {
        if density.is_empty() {
            return Err(Error::InvalidMeasure("grid density needs at least one cell".into()));
        }
        if let Some((i, v)) = density.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidMeasure(format!("density cell {i} is {v}")));
        }
        let mean = density.iter().sum::<f64>() / density.len() as f64;
        if (mean - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::InvalidMeasure(format!("density mean is {mean}, expected 1")));
        }
        Ok(GridDensity { density })
    }

    pub(crate) fn new_normalized(mut density: Vec<f64>) -> Self {
        let mean = density.iter().sum::<f64>() / density.len() as f64;
        for v in &mut density {
            *v /= mean;
        }
        GridDensity { density }
    }

    pub fn n_cells(&self) -> usize {
        self.density.len()
    }

    pub fn density(&self) -> &[f64] {
        &self.density
    }

    /// Cell masses `d_i / G`.
    pub fn masses(&self) -> Vec<f64> {
        let g = self.density.len() as f64;
        self.density.iter().map(|d| d / g).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        let g = self.density.len();
        (0..g).all(|i| self.density[i] == self.density[(g - i) % g])
    }
}

/// Cantor–Lebesgue measure with constant dissection rate `theta > 2`, in the
/// centered form `X = Σ_k ε_k c θ^{-k}`, `ε_k = ±1` fair, `c = (θ − 1)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CantorLebesgue {
    theta: f64,
}

impl CantorLebesgue {
    pub fn new(theta: f64) -> Result<Self> {
        if !(theta.is_finite() && theta > 2.0) {
            return Err(Error::InvalidMeasure(format!("dissection rate must exceed 2, got {theta}")));
        }
        Ok(CantorLebesgue { theta })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Half-spacing `c = (θ − 1)/2` between the two children of a dissection.
    pub fn offset(&self) -> f64 {
        (self.theta - 1.0) / 2.0
    }

    /// `Some(θ)` when the rate is an integer.
    pub fn integer_rate(&self) -> Option<u64> {
        let r = libm::round(self.theta);
        (r == self.theta && r < 1e15).then_some(r as u64)
    }
}

/// Tail law for Riesz coefficients beyond the explicit prefix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoefficientTail {
    None,
    /// `a_k = scale · ratio^k`.
    Geometric { scale: f64, ratio: f64 },
    /// `a_k = scale · k^{-alpha}`.
    Power { scale: f64, alpha: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSeq {
    pub prefix: Vec<f64>,
    pub tail: CoefficientTail,
}

impl CoefficientSeq {
    /// `a_k` for `k ≥ 1`.
    pub fn get(&self, k: usize) -> Option<f64> {
        if k == 0 {
            return None;
        }
        if let Some(&a) = self.prefix.get(k - 1) {
            return Some(a);
        }
        match self.tail {
            CoefficientTail::None => None,
            CoefficientTail::Geometric { scale, ratio } => Some(scale * libm::pow(ratio, k as f64)),
            CoefficientTail::Power { scale, alpha } => Some(scale * libm::pow(k as f64, -alpha)),
        }
    }
}

/// Frequencies `n_k` of a Riesz product.
#[derive(Debug, Clone, PartialEq)]
pub enum FrequencySeq {
    Explicit(Vec<u64>),
    /// `n_k = first · ratio^{k-1}`.
    Geometric { first: u64, ratio: u64 },
}

impl FrequencySeq {
    /// Upper limit for representable frequencies.
    const CAP: u64 = 1 << 62;

    pub fn get(&self, k: usize) -> Option<u64> {
        if k == 0 {
            return None;
        }
        match self {
            FrequencySeq::Explicit(v) => v.get(k - 1).copied(),
            FrequencySeq::Geometric { first, ratio } => {
                let mut n = *first;
                for _ in 1..k {
                    n = n.checked_mul(*ratio).filter(|&m| m <= Self::CAP)?;
                }
                Some(n)
            }
        }
    }
}

/// `∏_k (1 + a_k cos(2π n_k t))` under lacunary frequencies `n_{k+1} ≥ q n_k`, `q > 3`.
#[derive(Debug, Clone, PartialEq)]
pub struct RieszProduct {
    coeffs: CoefficientSeq,
    freqs: FrequencySeq,
    lacunarity: f64,
}

impl RieszProduct {
    pub fn new(coeffs: CoefficientSeq, freqs: FrequencySeq) -> Result<Self> {
        for (i, a) in coeffs.prefix.iter().enumerate() {
            if !(a.is_finite() && *a != 0.0 && a.abs() <= 1.0) {
                return Err(Error::InvalidMeasure(format!("coefficient a_{} = {a} is outside [-1,1]\\{{0}}", i + 1)));
            }
        }
        let first_tail = coeffs.prefix.len() + 1;
        match coeffs.tail {
            CoefficientTail::None => {}
            CoefficientTail::Geometric { scale, ratio } => {
                if scale == 0.0 || ratio == 0.0 || !scale.is_finite() || !ratio.is_finite() || ratio.abs() > 1.0 {
                    return Err(Error::InvalidMeasure(format!("geometric tail needs nonzero scale and 0 < |ratio| ≤ 1, got ({scale}, {ratio})")));
                }
            }
            CoefficientTail::Power { scale, alpha } => {
                if scale == 0.0 || !scale.is_finite() || !(alpha.is_finite() && alpha >= 0.0) {
                    return Err(Error::InvalidMeasure(format!("power tail needs nonzero scale and alpha ≥ 0, got ({scale}, {alpha})")));
                }
            }
        }
        if let Some(a) = coeffs.get(first_tail) {
            if coeffs.tail != CoefficientTail::None && a.abs() > 1.0 {
                return Err(Error::InvalidMeasure(format!("tail coefficient a_{first_tail} = {a} exceeds 1 in modulus")));
            }
        }
        let lacunarity = match &freqs {
            FrequencySeq::Explicit(v) => {
                if v.is_empty() {
                    return Err(Error::InvalidMeasure("Riesz product needs at least one frequency".into()));
                }
                if v[0] == 0 || v.iter().any(|&n| n > FrequencySeq::CAP) {
                    return Err(Error::InvalidMeasure("frequencies must be in [1, 2^62]".into()));
                }
                v.windows(2).map(|w| w[1] as f64 / w[0] as f64).fold(f64::INFINITY, f64::min)
            }
            FrequencySeq::Geometric { first, ratio } => {
                if *first == 0 || *first > FrequencySeq::CAP {
                    return Err(Error::InvalidMeasure("first frequency must be in [1, 2^62]".into()));
                }
                *ratio as f64
            }
        };
        if lacunarity <= 3.0 {
            return Err(Error::InvalidMeasure(format!("lacunarity ratio {lacunarity} must exceed 3")));
        }
        if coeffs.prefix.is_empty() && coeffs.tail == CoefficientTail::None {
            return Err(Error::InvalidMeasure("Riesz product needs coefficients".into()));
        }
        Ok(RieszProduct { coeffs, freqs, lacunarity })
    }

    pub fn coefficients(&self) -> &CoefficientSeq {
        &self.coeffs
    }

    pub fn frequencies(&self) -> &FrequencySeq {
        &self.freqs
    }

    /// Smallest observed `n_{k+1}/n_k`.
    pub fn lacunarity(&self) -> f64 {
        self.lacunarity
    }

    /// Factor `k` (1-based) as `(a_k, n_k)`, if it exists.
    pub fn factor(&self, k: usize) -> Option<(f64, u64)> {
        Some((self.coeffs.get(k)?, self.freqs.get(k)?))
    }

    /// Number of factors, `None` when the product is infinite (up to the frequency cap).
    pub fn factor_count(&self) -> Option<usize> {
        let coeff_len = match self.coeffs.tail {
            CoefficientTail::None => Some(self.coeffs.prefix.len()),
            _ => None,
        };
        let freq_len = match &self.freqs {
            FrequencySeq::Explicit(v) => Some(v.len()),
            FrequencySeq::Geometric { .. } => None,
        };
        match (coeff_len, freq_len) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (Some(a), None) => Some(a),
            (None, Some(b)) => Some(b),
            (None, None) => None,
        }
    }

    /// Factors `1..=stage` that exist.
    pub fn stage_factors(&self, stage: usize) -> Vec<(f64, u64)> {
        (1..=stage).map_while(|k| self.factor(k)).collect()
    }
}

/// Non-negative cosine polynomial `φ(t) = 1 + 2Σ_{k=1}^m c_k cos(2πkt)`,
/// i.e. `φ̂(0) = 1`, `φ̂(±k) = c_k ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct CosinePolynomial {
    coeffs: Vec<f64>,
}

impl CosinePolynomial {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidMeasure("cosine polynomial needs degree ≥ 1".into()));
        }
        if let Some((k, c)) = coeffs.iter().enumerate().find(|(_, c)| !(c.is_finite() && **c >= 0.0)) {
            return Err(Error::InvalidMeasure(format!("cosine coefficient c_{} = {c} must be ≥ 0", k + 1)));
        }
        let poly = CosinePolynomial { coeffs };
        let m = poly.degree();
        let points = 10_000 * m;
        for i in 0..points {
            let v = poly.eval(i as f64 / points as f64);
            if v < -1e-10 {
                return Err(Error::NegativeDensity { index: i, value: v });
            }
        }
        Ok(poly)
    }

    /// Fejér kernel of degree `m`: `c_k = 1 − k/(m+1)`.
    pub fn fejer(m: usize) -> Result<Self> {
        CosinePolynomial::new((1..=m).map(|k| 1.0 - k as f64 / (m as f64 + 1.0)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// `φ̂(k)`.
    pub fn coefficient(&self, k: i64) -> f64 {
        match k.unsigned_abs() as usize {
            0 => 1.0,
            j => self.coeffs.get(j - 1).copied().unwrap_or(0.0),
        }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn eval(&self, t: f64) -> f64 {
        1.0 + 2.0
            * self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c * libm::cos(core::f64::consts::TAU * (k + 1) as f64 * t))
                .sum::<f64>()
    }
}

/// Product `∏_j φ_j(r_j t)` of dilated non-negative cosine polynomials whose
/// frequency blocks never overlap: `(r_{n+1} − M_n)/M_n ≥ q > 1` with
/// `M_n = r_1 m_1 + ⋯ + r_n m_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct GappedProduct {
    factors: Vec<CosinePolynomial>,
    scales: Vec<u64>,
    ratio: f64,
}

impl GappedProduct {
    pub const DEFAULT_RATIO: f64 = 2.0;

    /// With `scales = None` the minimal admissible scales are chosen: `r_1 = 1`
    /// and `r_{n+1} = M_n + ⌈q M_n⌉`.
    pub fn new(factors: Vec<CosinePolynomial>, scales: Option<Vec<u64>>, ratio: f64) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidMeasure("gapped product needs at least one factor".into()));
        }
        if !(ratio.is_finite() && ratio > 1.0) {
            return Err(Error::InvalidMeasure(format!("gap ratio q must exceed 1, got {ratio}")));
        }
        let scales = match scales {
            Some(s) => {
                if s.len() != factors.len() {
                    return Err(Error::InvalidMeasure(format!("{} scales for {} factors", s.len(), factors.len())));
                }
                s
            }
            None => {
                let mut s = Vec::with_capacity(factors.len());
                let mut m_acc: u64 = 0;
                for f in &factors {
                    let r = if m_acc == 0 {
                        1
                    } else {
                        let lift = libm::ceil(ratio * m_acc as f64);
                        if lift >= (1u64 << 62) as f64 {
                            return Err(Error::InvalidMeasure("automatic scales overflow".into()));
                        }
                        m_acc + lift as u64
                    };
                    m_acc = r
                        .checked_mul(f.degree() as u64)
                        .and_then(|x| x.checked_add(m_acc))
                        .ok_or_else(|| Error::InvalidMeasure("automatic scales overflow".into()))?;
                    s.push(r);
                }
                s
            }
        };
        if scales.contains(&0) {
            return Err(Error::InvalidMeasure("scales must be positive".into()));
        }
        let mut m_acc: u64 = 0;
        for (j, (f, &r)) in factors.iter().zip(&scales).enumerate() {
            if j > 0 {
                let gap = (r as f64 - m_acc as f64) / m_acc as f64;
                if r <= scales[j - 1] || r <= 2 * m_acc || gap < ratio {
                    return Err(Error::GapCondition { index: j, ratio: gap, required: ratio });
                }
            }
            m_acc = r
                .checked_mul(f.degree() as u64)
                .and_then(|x| x.checked_add(m_acc))
                .filter(|&x| x <= 1 << 62)
                .ok_or_else(|| Error::InvalidMeasure("frequency bound overflows".into()))?;
        }
        Ok(GappedProduct { factors, scales, ratio })
    }

    pub fn factors(&self) -> &[CosinePolynomial] {
        &self.factors
    }

    pub fn scales(&self) -> &[u64] {
        &self.scales
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    /// `M_n` for `n = stage` (clamped to the number of factors).
    pub fn max_frequency(&self, stage: usize) -> u64 {
        self.factors
            .iter()
            .zip(&self.scales)
            .take(stage)
            .map(|(f, r)| r * f.degree() as u64)
            .sum()
    }
}

/// Weighted combination of measures with positive weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct Mixture {
    parts: Vec<(f64, CircleMeasure)>,
}

impl Mixture {
    pub fn new(parts: Vec<(f64, CircleMeasure)>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidMeasure("mixture needs at least one component".into()));
        }
        if let Some((i, (w, _))) = parts.iter().enumerate().find(|(_, (w, _))| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::InvalidMeasure(format!("mixture weight {i} is {w}")));
        }
        let total: f64 = parts.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::InvalidMeasure(format!("mixture weights sum to {total}, expected 1")));
        }
        Ok(Mixture { parts })
    }

    pub fn parts(&self) -> &[(f64, CircleMeasure)] {
        &self.parts
    }
}

/// The input type of every diagnostic.
#[derive(Debug, Clone, PartialEq)]
pub enum CircleMeasure {
    Atomic(AtomicMeasure),
    Grid(GridDensity),
    Cantor(CantorLebesgue),
    Riesz(RieszProduct),
    Gapped(GappedProduct),
    Mixture(Mixture),
    /// `k`-fold self-convolution.
    Power { base: Box<CircleMeasure>, exponent: NonZeroU32 },
    /// `μ̌(A) = μ(A^{-1})`.
    Reversed(Box<CircleMeasure>),
    /// Convolution of the factors; an empty list is `δ_0`.
    Convolution(Vec<CircleMeasure>),
    Haar,
}

impl CircleMeasure {
    pub fn mixture(parts: Vec<(f64, CircleMeasure)>) -> Result<Self> {
        Ok(CircleMeasure::Mixture(Mixture::new(parts)?))
    }

    pub fn power(base: CircleMeasure, exponent: u32) -> Result<Self> {
        let exponent = NonZeroU32::new(exponent)
            .ok_or_else(|| Error::InvalidMeasure("power exponent must be ≥ 1".to_string()))?;
        Ok(CircleMeasure::Power { base: Box::new(base), exponent })
    }

    pub fn reversed(base: CircleMeasure) -> Self {
        CircleMeasure::Reversed(Box::new(base))
    }

    pub fn dirac(angle: Angle) -> Self {
        CircleMeasure::Atomic(AtomicMeasure::dirac(angle))
    }

    /// True if the measure has a non-atomic part (its support is uncountable).
    pub fn has_continuous_part(&self) -> bool {
        match self {
            CircleMeasure::Atomic(_) => false,
            CircleMeasure::Grid(_)
            | CircleMeasure::Cantor(_)
            | CircleMeasure::Riesz(_)
            | CircleMeasure::Gapped(_)
            | CircleMeasure::Haar => true,
            CircleMeasure::Mixture(m) => m.parts.iter().any(|(_, c)| c.has_continuous_part()),
            CircleMeasure::Power { base, .. } => base.has_continuous_part(),
            CircleMeasure::Reversed(b) => b.has_continuous_part(),
            CircleMeasure::Convolution(fs) => fs.iter().any(|c| c.has_continuous_part()),
        }
    }

    /// Structural symmetry test (`μ̌ = μ` recognizable from the representation).
    pub fn is_symmetric(&self) -> bool {
        match self {
            CircleMeasure::Atomic(a) => a.is_symmetric(),
            CircleMeasure::Grid(g) => g.is_symmetric(),
            CircleMeasure::Cantor(_) | CircleMeasure::Riesz(_) | CircleMeasure::Gapped(_) | CircleMeasure::Haar => true,
            CircleMeasure::Mixture(m) => m.parts.iter().all(|(_, c)| c.is_symmetric()),
            CircleMeasure::Power { base, .. } => base.is_symmetric(),
            CircleMeasure::Reversed(b) => b.is_symmetric(),
            CircleMeasure::Convolution(fs) => fs.iter().all(|c| c.is_symmetric()),
        }
    }

    /// Expands a purely atomic measure into its atoms. Returns `None` when a
    /// continuous part is present or the expansion would exceed `max_atoms`.
    pub fn as_atomic(&self, max_atoms: usize) -> Option<AtomicMeasure> {
        match self {
            CircleMeasure::Atomic(a) => (a.atoms.len() <= max_atoms).then(|| a.clone()),
            CircleMeasure::Mixture(m) => {
                let mut map: BTreeMap<Angle, f64> = BTreeMap::new();
                for (w, c) in &m.parts {
                    for (a, v) in c.as_atomic(max_atoms)?.atoms {
                        *map.entry(a).or_insert(0.0) += w * v;
                    }
                    if map.len() > max_atoms {
                        return None;
                    }
                }
                AtomicMeasure::from_merged(map, 0.0).ok()
            }
            CircleMeasure::Power { base, exponent } => {
                let b = base.as_atomic(max_atoms)?;
                let mut acc = b.clone();
                for _ in 1..exponent.get() {
                    acc = acc.convolve(&b).ok()?;
                    if acc.atoms.len() > max_atoms {
                        return None;
                    }
                }
                Some(acc)
            }
            CircleMeasure::Reversed(b) => Some(b.as_atomic(max_atoms)?.reversed()),
            CircleMeasure::Convolution(fs) => {
                let mut acc = AtomicMeasure::dirac(Angle::ZERO);
                for f in fs {
                    acc = acc.convolve(&f.as_atomic(max_atoms)?).ok()?;
                    if acc.atoms.len() > max_atoms {
                        return None;
                    }
                }
                Some(acc)
            }
            _ => None,
        }
    }
}

/// `μ ∗ ν`. Haar absorbs everything, two atomic measures convolve exactly,
/// and other pairs become a symbolic [`CircleMeasure::Convolution`] node.
pub fn convolve(mu: &CircleMeasure, nu: &CircleMeasure) -> Result<CircleMeasure> {
    use CircleMeasure::*;
    match (mu, nu) {
        (Haar, _) | (_, Haar) => Ok(Haar),
        (Atomic(a), Atomic(b)) => Ok(Atomic(a.convolve(b)?)),
        (Convolution(xs), Convolution(ys)) => Ok(Convolution(xs.iter().chain(ys).cloned().collect())),
        (Convolution(xs), y) => {
            let mut v = xs.clone();
            v.push(y.clone());
            Ok(Convolution(v))
        }
        (x, Convolution(ys)) => {
            let mut v = alloc::vec![x.clone()];
            v.extend(ys.iter().cloned());
            Ok(Convolution(v))
        }
        (x, y) => Ok(Convolution(alloc::vec![x.clone(), y.clone()])),
    }
}
