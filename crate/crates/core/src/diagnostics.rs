//! Mixing taxonomy for convolution operators.
//!
//! Every verdict carries a [`Rule`] from a fixed registry:
//!
//! | tag | verdict |
//! |-----|---------|
//! | `non-discrete-support` | adapted / strictly aperiodic: yes |
//! | `irrational-atom` | adapted: yes |
//! | `rational-atoms-cyclic` | adapted: no |
//! | `rational-atom-differences` | strictly aperiodic: no |
//! | `irrational-atom-difference` | strictly aperiodic: yes |
//! | `nonsingular-component` | doeblin: yes |
//! | `summable-coefficient-power` | doeblin: yes |
//! | `atomic-powers-singular` | doeblin: no |
//! | `integer-rate-cantor-singular` | doeblin: no |
//! | `nonsummable-riesz-coefficients` | doeblin: no |
//! | `not-adapted` | doeblin: unknown |
//! | `no-rule` | unknown |
//!
//! ```
//! use circlemix_core::diagnostics::Rule;
//! let tags: Vec<&str> = Rule::ALL.iter().map(|r| r.tag()).collect();
//! assert_eq!(tags, [
//!     "non-discrete-support",
//!     "irrational-atom",
//!     "rational-atoms-cyclic",
//!     "rational-atom-differences",
//!     "irrational-atom-difference",
//!     "nonsingular-component",
//!     "summable-coefficient-power",
//!     "atomic-powers-singular",
//!     "integer-rate-cantor-singular",
//!     "nonsummable-riesz-coefficients",
//!     "not-adapted",
//!     "no-rule",
//! ]);
//! ```

use alloc::vec::Vec;

use num_complex::Complex64;
use num_integer::Integer;

use crate::angle::Angle;
use crate::error::{Error, Result};
use crate::fourier::FourierTable;
use crate::measure::{AtomicMeasure, CircleMeasure, CoefficientTail, RieszProduct};

/// Atom budget when expanding composite atomic measures.
pub const MAX_ATOMS: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::Unknown => "unknown",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    NonDiscreteSupport,
    IrrationalAtom,
    RationalAtomsCyclic,
    RationalAtomDifferences,
    IrrationalAtomDifference,
    NonsingularComponent,
    SummableCoefficientPower,
    AtomicPowersSingular,
    IntegerRateCantorSingular,
    NonsummableRieszCoefficients,
    NotAdapted,
    NoRule,
}

impl Rule {
    pub const ALL: [Rule; 12] = [
        Rule::NonDiscreteSupport,
        Rule::IrrationalAtom,
        Rule::RationalAtomsCyclic,
        Rule::RationalAtomDifferences,
        Rule::IrrationalAtomDifference,
        Rule::NonsingularComponent,
        Rule::SummableCoefficientPower,
        Rule::AtomicPowersSingular,
        Rule::IntegerRateCantorSingular,
        Rule::NonsummableRieszCoefficients,
        Rule::NotAdapted,
        Rule::NoRule,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Rule::NonDiscreteSupport => "non-discrete-support",
            Rule::IrrationalAtom => "irrational-atom",
            Rule::RationalAtomsCyclic => "rational-atoms-cyclic",
            Rule::RationalAtomDifferences => "rational-atom-differences",
            Rule::IrrationalAtomDifference => "irrational-atom-difference",
            Rule::NonsingularComponent => "nonsingular-component",
            Rule::SummableCoefficientPower => "summable-coefficient-power",
            Rule::AtomicPowersSingular => "atomic-powers-singular",
            Rule::IntegerRateCantorSingular => "integer-rate-cantor-singular",
            Rule::NonsummableRieszCoefficients => "nonsummable-riesz-coefficients",
            Rule::NotAdapted => "not-adapted",
            Rule::NoRule => "no-rule",
        }
    }

    /// One-line statement of the rule.
    pub fn statement(self) -> &'static str {
        match self {
            Rule::NonDiscreteSupport => "a probability with non-discrete support is adapted and strictly aperiodic",
            Rule::IrrationalAtom => "an atom of infinite order generates a dense subgroup",
            Rule::RationalAtomsCyclic => "rational atoms lie in a finite cyclic subgroup",
            Rule::RationalAtomDifferences => "all atom differences are rational, so |μ̂(n)| = 1 at their common denominator",
            Rule::IrrationalAtomDifference => "an irrational atom difference forces |μ̂(n)| < 1 for n ≠ 0",
            Rule::NonsingularComponent => "some convolution power has a nonsingular part",
            Rule::SummableCoefficientPower => "Σ|a_k|^m < ∞ makes the m-th power absolutely continuous",
            Rule::AtomicPowersSingular => "every convolution power of a discrete measure is discrete",
            Rule::IntegerRateCantorSingular => "Cantor–Lebesgue measures with integer rate have singular powers",
            Rule::NonsummableRieszCoefficients => "Riesz products with a_k not tending to 0 have singular powers",
            Rule::NotAdapted => "the Doeblin classification presumes adaptedness",
            Rule::NoRule => "no rule decides this representation",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    None,
    /// Order `d` of a cyclic group containing the support.
    CyclicOrder(u64),
    /// A frequency with `|μ̂(n)| = 1`.
    UnimodularFrequency(i64),
    IrrationalAtom(Angle),
    IrrationalDifference(Angle),
    /// A power that is absolutely continuous.
    AbsolutelyContinuousPower(u32),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub verdict: Verdict,
    pub rule: Rule,
    pub witness: Witness,
}

impl Classification {
    fn new(verdict: Verdict, rule: Rule, witness: Witness) -> Self {
        Classification { verdict, rule, witness }
    }

    fn unknown() -> Self {
        Self::new(Verdict::Unknown, Rule::NoRule, Witness::None)
    }
}

fn lcm_denominators<'a>(angles: impl Iterator<Item = &'a Angle>) -> u64 {
    angles.fold(1u64, |d, a| d.lcm(&a.rational_part().1))
}

pub fn classify_adapted(mu: &CircleMeasure) -> Classification {
    if mu.has_continuous_part() {
        return Classification::new(Verdict::Yes, Rule::NonDiscreteSupport, Witness::None);
    }
    let Some(a) = mu.as_atomic(MAX_ATOMS) else {
        return Classification::unknown();
    };
    if let Some((t, _)) = a.atoms().iter().find(|(t, _)| !t.is_rational()) {
        return Classification::new(Verdict::Yes, Rule::IrrationalAtom, Witness::IrrationalAtom(t.clone()));
    }
    let d = lcm_denominators(a.atoms().iter().map(|(t, _)| t));
    Classification::new(Verdict::No, Rule::RationalAtomsCyclic, Witness::CyclicOrder(d))
}

fn atomic_aperiodicity(a: &AtomicMeasure) -> Classification {
    let t0 = &a.atoms()[0].0;
    let mut diffs = Vec::with_capacity(a.atoms().len());
    for (t, _) in &a.atoms()[1..] {
        match t.checked_add(&t0.neg()) {
            Some(d) if !d.is_rational() => {
                return Classification::new(Verdict::Yes, Rule::IrrationalAtomDifference, Witness::IrrationalDifference(d));
            }
            Some(d) => diffs.push(d),
            None => return Classification::unknown(),
        }
    }
    let d = lcm_denominators(diffs.iter());
    Classification::new(
        Verdict::No,
        Rule::RationalAtomDifferences,
        Witness::UnimodularFrequency(i64::try_from(d).unwrap_or(i64::MAX)),
    )
}

pub fn classify_strictly_aperiodic(mu: &CircleMeasure) -> Classification {
    if mu.has_continuous_part() {
        return Classification::new(Verdict::Yes, Rule::NonDiscreteSupport, Witness::None);
    }
    match mu.as_atomic(MAX_ATOMS) {
        Some(a) => atomic_aperiodicity(&a),
        None => Classification::unknown(),
    }
}

/// Windowed supremum `s_N = max_{0<|n|≤N} |μ̂(n)|`.
///
/// `s_N` is a lower bound for the supremum over all of `ℤ` and is
/// non-decreasing in `N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhoSup {
    pub value: f64,
    /// First frequency attaining the maximum in the order `1, −1, 2, −2, …`.
    pub frequency: i64,
    pub half_width: usize,
}

pub fn rho_sup(table: &FourierTable) -> RhoSup {
    let mut best = -1.0;
    let mut at = 1;
    for (n, v) in table.scan() {
        let m = v.norm();
        if m > best {
            best = m;
            at = n;
        }
    }
    RhoSup { value: best.min(1.0), frequency: at, half_width: table.half_width() }
}

/// True when the windowed supremum of `mu` over `|n| ≤ N` is its global supremum.
pub fn window_certifies(mu: &CircleMeasure, half_width: usize, windowed: f64) -> bool {
    if windowed >= 1.0 {
        return true;
    }
    match mu {
        CircleMeasure::Haar => true,
        _ if mu.has_continuous_part() => false,
        _ => match mu.as_atomic(MAX_ATOMS) {
            Some(a) if a.atoms().iter().all(|(t, _)| t.is_rational()) => {
                lcm_denominators(a.atoms().iter().map(|(t, _)| t)) as u128 <= half_width as u128
            }
            _ => false,
        },
    }
}

/// `s_N^n`, a lower bound for the α-mixing coefficient `α_n`.
pub fn alpha_lower_bound(table: &FourierTable, n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("power must be ≥ 1".into()));
    }
    Ok(power_of(rho_sup(table).value, n))
}

/// `s^n` evaluated the same way everywhere a power of the supremum appears.
pub fn power_of(s: f64, n: u32) -> f64 {
    libm::pow(s, n as f64)
}

/// Moduli at or above this count as unimodular for ratio and divergence tests.
pub const UNIMODULAR_TOL: f64 = 1e-15;

/// `|1 − w^j| / (1 − |w|^j)`.
pub fn power_ratio_at(w: Complex64, j: u32) -> f64 {
    let num = (Complex64::new(1.0, 0.0) - w.powu(j)).norm();
    let den = 1.0 - libm::pow(w.norm(), j as f64);
    num / den
}

/// `C_j(N) = max_{0<|n|≤N} |1 − μ̂(n)^j| / (1 − |μ̂(n)|^j)` and its first attaining frequency.
pub fn power_ratio(table: &FourierTable, j: u32) -> Result<(f64, i64)> {
    if j == 0 {
        return Err(Error::InvalidArgument("j must be ≥ 1".into()));
    }
    let mut best = f64::NEG_INFINITY;
    let mut at = 1;
    for (n, w) in table.scan() {
        if w.norm() >= 1.0 - UNIMODULAR_TOL {
            return Err(Error::RatioUndefined { n });
        }
        let r = power_ratio_at(w, j);
        if r > best {
            best = r;
            at = n;
        }
    }
    Ok((best, at))
}

/// Default containment margin for [`stolz_fit`].
pub const STOLZ_MARGIN: f64 = 1e-6;

/// Smallest `r` such that `w` lies in the closed convex hull of `{1} ∪ D(0, r)`.
pub fn stolz_radius(w: Complex64) -> f64 {
    let gap = Complex64::new(1.0, 0.0) - w;
    let g2 = gap.norm_sqr();
    if g2 == 0.0 {
        return 0.0;
    }
    if gap.re >= g2 {
        w.im.abs() / g2.sqrt()
    } else {
        w.norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StolzFit {
    /// Smallest admissible radius over the window.
    pub radius: f64,
    pub frequency: i64,
    /// `radius ≤ 1 − margin`.
    pub contained: bool,
    pub margin: f64,
}

pub fn stolz_fit(table: &FourierTable, margin: f64) -> StolzFit {
    let mut radius = -1.0;
    let mut at = 1;
    for (n, w) in table.scan() {
        let r = stolz_radius(w);
        if r > radius {
            radius = r;
            at = n;
        }
    }
    let radius = radius.clamp(0.0, 1.0);
    StolzFit { radius, frequency: at, contained: radius <= 1.0 - margin, margin }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumCloud {
    /// Distinct values with the first frequency (from `−N` upward) attaining each.
    pub points: Vec<(i64, Complex64)>,
    pub real_only: bool,
    pub max_modulus_off_zero: f64,
    /// Off-zero moduli over the outer half of the window are small compared
    /// with the inner half. A heuristic: it never proves `μ̂(n) → 0`.
    pub consistent_with_decay: bool,
}

fn distinct_points(table: &FourierTable) -> Vec<(i64, Complex64)> {
    let mut seen = alloc::collections::BTreeSet::new();
    table
        .iter()
        .filter(|(_, v, _)| seen.insert(((v.re + 0.0).to_bits(), (v.im + 0.0).to_bits())))
        .map(|(k, v, _)| (k, v))
        .collect()
}

pub fn spectrum_cloud(table: &FourierTable) -> SpectrumCloud {
    let n = table.half_width() as i64;
    let mut inner: f64 = 0.0;
    let mut outer: f64 = 0.0;
    for (k, v) in table.scan() {
        if k.abs() * 2 <= n {
            inner = inner.max(v.norm());
        } else {
            outer = outer.max(v.norm());
        }
    }
    SpectrumCloud {
        points: distinct_points(table),
        real_only: table.is_real(),
        max_modulus_off_zero: inner.max(outer),
        consistent_with_decay: outer <= 1e-3 || outer <= 0.5 * inner,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AcPower {
    /// `Σ|a_k|^m < ∞` for this smallest `m`.
    At(u32),
    /// Explicit prefix only: summability is undecidable.
    Unknown,
}

/// Smallest `m` with `Σ_k |a_k|^m < ∞`, decided from the symbolic tail.
pub fn ac_power_test(riesz: &RieszProduct) -> Result<AcPower> {
    match riesz.coefficients().tail {
        CoefficientTail::None => Ok(AcPower::Unknown),
        CoefficientTail::Geometric { ratio, .. } => {
            if ratio.abs() < 1.0 {
                Ok(AcPower::At(1))
            } else {
                Err(Error::CoefficientsNotDecaying)
            }
        }
        CoefficientTail::Power { alpha, .. } => {
            if !(alpha > 0.0) {
                return Err(Error::CoefficientsNotDecaying);
            }
            let mut m = libm::floor(1.0 / alpha).max(0.0) as u32 + 1;
            while m > 1 && (m - 1) as f64 * alpha > 1.0 {
                m -= 1;
            }
            while m as f64 * alpha <= 1.0 {
                m += 1;
            }
            Ok(AcPower::At(m))
        }
    }
}

fn riesz_doeblin(r: &RieszProduct) -> Classification {
    match ac_power_test(r) {
        Ok(AcPower::At(m)) => {
            Classification::new(Verdict::Yes, Rule::SummableCoefficientPower, Witness::AbsolutelyContinuousPower(m))
        }
        Ok(AcPower::Unknown) => Classification::unknown(),
        Err(_) => Classification::new(Verdict::No, Rule::NonsummableRieszCoefficients, Witness::None),
    }
}

/// Collects the continuous generators of a measure built from atoms and
/// measures whose powers are all singular. Returns `false` if some part falls
/// outside that class.
fn singular_generators<'a>(mu: &'a CircleMeasure, out: &mut Vec<(&'a CircleMeasure, Rule)>) -> bool {
    use CircleMeasure::*;
    match mu {
        Atomic(_) => true,
        Cantor(c) if c.integer_rate().is_some() => {
            out.push((mu, Rule::IntegerRateCantorSingular));
            true
        }
        Riesz(r) if riesz_doeblin(r).verdict == Verdict::No => {
            out.push((mu, Rule::NonsummableRieszCoefficients));
            true
        }
        Mixture(m) => m.parts().iter().all(|(_, c)| singular_generators(c, out)),
        Power { base, .. } | Reversed(base) => singular_generators(base, out),
        Convolution(fs) => fs.iter().all(|c| singular_generators(c, out)),
        _ => false,
    }
}

fn has_nonsingular_power(mu: &CircleMeasure) -> Option<Classification> {
    use CircleMeasure::*;
    match mu {
        Haar | Grid(_) => Some(Classification::new(Verdict::Yes, Rule::NonsingularComponent, Witness::None)),
        Riesz(r) => {
            let c = riesz_doeblin(r);
            (c.verdict == Verdict::Yes).then_some(c)
        }
        Mixture(m) => m.parts().iter().find_map(|(_, c)| has_nonsingular_power(c)).map(|c| match c.rule {
            Rule::SummableCoefficientPower => c,
            _ => Classification::new(Verdict::Yes, Rule::NonsingularComponent, Witness::None),
        }),
        Power { base, .. } | Reversed(base) => has_nonsingular_power(base),
        Convolution(fs) => fs.iter().find_map(has_nonsingular_power),
        _ => None,
    }
}

/// Doeblin verdict: some convolution power is non-singular.
///
/// Rule-based per family; the verdict is `unknown` unless the measure is adapted.
pub fn classify_doeblin(mu: &CircleMeasure) -> Classification {
    if classify_adapted(mu).verdict != Verdict::Yes {
        return Classification::new(Verdict::Unknown, Rule::NotAdapted, Witness::None);
    }
    if let Some(c) = has_nonsingular_power(mu) {
        return c;
    }
    match singular_class(mu) {
        Some(None) => Classification::new(Verdict::No, Rule::AtomicPowersSingular, Witness::None),
        Some(Some(rule)) => Classification::new(Verdict::No, rule, Witness::None),
        None => Classification::unknown(),
    }
}

/// `Some(rule)` when every power of `mu` is provably singular: `mu` is built
/// from atoms and at most one continuous generator with singular powers.
/// The inner value names the generator's rule (`None` for purely atomic).
fn singular_class(mu: &CircleMeasure) -> Option<Option<Rule>> {
    let mut gens = Vec::new();
    if !singular_generators(mu, &mut gens) {
        return None;
    }
    let mut distinct: Vec<&(&CircleMeasure, Rule)> = Vec::new();
    for g in &gens {
        if !distinct.iter().any(|d| d.0 == g.0) {
            distinct.push(g);
        }
    }
    match distinct.as_slice() {
        [] => Some(None),
        [(_, rule)] => Some(Some(*rule)),
        _ => None,
    }
}

/// True when every convolution power of `mu` is provably singular.
pub fn has_singular_powers(mu: &CircleMeasure) -> bool {
    singular_class(mu).is_some()
}

#[derive(Debug, Clone, PartialEq)]
pub enum AcPowerVerdict {
    At(u32),
    Never,
    Unknown,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerRatioEntry {
    pub j: u32,
    /// `(C_j(N), n*)` or the frequency where the ratio is undefined.
    pub value: core::result::Result<(f64, i64), i64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixingReport {
    pub adapted: Classification,
    pub strictly_aperiodic: Classification,
    pub rho: RhoSup,
    pub rho_certified: bool,
    pub doeblin: Classification,
    pub power_ratio: Vec<PowerRatioEntry>,
    pub ac_power: AcPowerVerdict,
    pub stolz: StolzFit,
    pub real_only: bool,
    pub consistent_with_decay: bool,
}

fn find_riesz(mu: &CircleMeasure) -> Option<&RieszProduct> {
    match mu {
        CircleMeasure::Riesz(r) => Some(r),
        CircleMeasure::Power { base, .. } | CircleMeasure::Reversed(base) => find_riesz(base),
        _ => None,
    }
}

/// Full classification of `mu` over the given table window.
pub fn describe(mu: &CircleMeasure, table: &FourierTable, js: &[u32]) -> MixingReport {
    let rho = rho_sup(table);
    let cloud = spectrum_cloud(table);
    let ac_power = match find_riesz(mu).map(ac_power_test) {
        None => AcPowerVerdict::NotApplicable,
        Some(Ok(AcPower::At(m))) => AcPowerVerdict::At(m),
        Some(Ok(AcPower::Unknown)) => AcPowerVerdict::Unknown,
        Some(Err(_)) => AcPowerVerdict::Never,
    };
    let power_ratio = js
        .iter()
        .map(|&j| PowerRatioEntry {
            j,
            value: match power_ratio(table, j) {
                Ok(v) => Ok(v),
                Err(Error::RatioUndefined { n }) => Err(n),
                Err(_) => Err(0),
            },
        })
        .collect();
    MixingReport {
        adapted: classify_adapted(mu),
        strictly_aperiodic: classify_strictly_aperiodic(mu),
        rho,
        rho_certified: window_certifies(mu, table.half_width(), rho.value),
        doeblin: classify_doeblin(mu),
        power_ratio,
        ac_power,
        stolz: stolz_fit(table, STOLZ_MARGIN),
        real_only: cloud.real_only,
        consistent_with_decay: cloud.consistent_with_decay,
    }
}
