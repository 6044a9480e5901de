//! Angles on the circle, measured in turns (`t ∈ [0, 1)`).
//!
//! An [`Angle`] is stored exactly as a reduced rational `p/q` plus an integer
//! combination of declared irrational bases (golden ratio, √2, or a custom
//! value). Irrationality is never inferred from a float: it is part of the
//! input. Distinct bases are treated as rationally independent, which is true
//! for the golden ratio and √2 and is a declaration for custom values.
//!
//! Characters `e^{-2πi n t}` are evaluated from a 128-bit fixed-point phase,
//! so `n·t mod 1` keeps full precision for every `i64` frequency.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;
use num_integer::Integer;

use crate::error::{Error, Result};

/// `frac(φ) = (√5 − 1)/2` as a 128-bit binary fraction (floor).
const GOLDEN_FRAC: u128 = 0x9e37_79b9_7f4a_7c15_f39c_c060_5ced_c834;
/// `frac(√2) = √2 − 1` as a 128-bit binary fraction (floor).
const SQRT2_FRAC: u128 = 0x6a09_e667_f3bc_c908_b2fb_1366_ea95_7d3e;

const TWO_POW_128: f64 = 340_282_366_920_938_463_463_374_607_431_768_211_456.0;
const LOW64: u128 = u64::MAX as u128;

/// A declared irrational base value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IrrationalBase {
    /// The golden ratio; only its fractional part matters mod 1.
    Golden,
    /// `√2`.
    Sqrt2,
    /// A user-declared irrational, identified by its 128-bit fractional part.
    Custom(u128),
}

impl IrrationalBase {
    /// Fractional part in units of `2^-128` turns.
    pub fn fixed(self) -> u128 {
        match self {
            IrrationalBase::Golden => GOLDEN_FRAC,
            IrrationalBase::Sqrt2 => SQRT2_FRAC,
            IrrationalBase::Custom(v) => v,
        }
    }
}

/// Coarse classification of an angle, as reported to users.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AngleKind {
    Rational { p: u64, q: u64 },
    Irrational(IrrationalTag),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IrrationalTag {
    Golden,
    Sqrt2,
    Custom,
}

/// An exact angle: `p/q + Σ c_b·ξ_b (mod 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Angle {
    p: u64,
    q: u64,
    terms: Vec<(IrrationalBase, i64)>,
}

impl Ord for Angle {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.p as u128 * other.q as u128)
            .cmp(&(other.p as u128 * self.q as u128))
            .then_with(|| self.q.cmp(&other.q))
            .then_with(|| self.terms.cmp(&other.terms))
    }
}

impl PartialOrd for Angle {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Angle {
    pub const ZERO: Angle = Angle { p: 0, q: 1, terms: Vec::new() };

    /// The rational angle `p/q mod 1`, reduced to lowest terms.
    pub fn rational(p: i64, q: u64) -> Result<Angle> {
        if q == 0 {
            return Err(Error::InvalidAngle("zero denominator".to_string()));
        }
        let r = (p as i128).rem_euclid(q as i128) as u64;
        let g = r.gcd(&q);
        Ok(Angle { p: r / g, q: q / g, terms: Vec::new() })
    }

    pub fn golden() -> Angle {
        Angle::irrational(IrrationalBase::Golden)
    }

    pub fn sqrt2() -> Angle {
        Angle::irrational(IrrationalBase::Sqrt2)
    }

    pub fn irrational(base: IrrationalBase) -> Angle {
        Angle { p: 0, q: 1, terms: alloc::vec![(base, 1)] }
    }

    /// Declares a custom irrational from its decimal expansion (integer part ignored).
    pub fn custom(decimal: &str) -> Result<Angle> {
        let v = parse_decimal_fraction(decimal)?;
        if v == 0 {
            return Err(Error::InvalidAngle("custom irrational must have a nonzero fractional part".into()));
        }
        Ok(Angle::irrational(IrrationalBase::Custom(v)))
    }

    pub fn is_rational(&self) -> bool {
        self.terms.is_empty()
    }

    /// Rational part, or the whole angle when rational: `(p, q)` with `0 ≤ p < q`.
    pub fn rational_part(&self) -> (u64, u64) {
        (self.p, self.q)
    }

    pub fn irrational_terms(&self) -> &[(IrrationalBase, i64)] {
        &self.terms
    }

    pub fn kind(&self) -> AngleKind {
        if self.terms.is_empty() {
            return AngleKind::Rational { p: self.p, q: self.q };
        }
        let tag = match self.terms.as_slice() {
            [(IrrationalBase::Golden, 1)] if self.p == 0 => IrrationalTag::Golden,
            [(IrrationalBase::Sqrt2, 1)] if self.p == 0 => IrrationalTag::Sqrt2,
            _ => IrrationalTag::Custom,
        };
        AngleKind::Irrational(tag)
    }

    /// `-t mod 1`.
    pub fn neg(&self) -> Angle {
        let p = if self.p == 0 { 0 } else { self.q - self.p };
        let terms = self.terms.iter().map(|&(b, c)| (b, -c)).collect();
        Angle { p, q: self.q, terms }
    }

    /// `s + t mod 1`; `None` if the denominators or coefficients overflow.
    pub fn checked_add(&self, other: &Angle) -> Option<Angle> {
        let l = self.q.lcm(&other.q);
        let a = (self.p as u128).checked_mul((l / self.q) as u128)?;
        let b = (other.p as u128).checked_mul((l / other.q) as u128)?;
        let r = ((a + b) % l as u128) as u64;
        let g = r.gcd(&l);
        let mut terms = self.terms.clone();
        for &(base, c) in &other.terms {
            match terms.binary_search_by(|(b, _)| b.cmp(&base)) {
                Ok(i) => {
                    terms[i].1 = terms[i].1.checked_add(c)?;
                }
                Err(i) => terms.insert(i, (base, c)),
            }
        }
        terms.retain(|&(_, c)| c != 0);
        Some(Angle { p: r / g, q: l / g, terms })
    }

    /// `k·t mod 1`.
    pub fn checked_mul(&self, k: i64) -> Option<Angle> {
        let r = ((self.p as i128).checked_mul(k as i128)?).rem_euclid(self.q as i128) as u64;
        let g = r.gcd(&self.q);
        let mut terms = Vec::with_capacity(self.terms.len());
        if k != 0 {
            for &(b, c) in &self.terms {
                terms.push((b, c.checked_mul(k)?));
            }
        }
        Some(Angle { p: r / g, q: self.q / g, terms })
    }

    /// `n·t mod 1` in units of `2^-128` turns.
    pub fn phase_fixed(&self, n: i64) -> u128 {
        let a = ((n as i128).rem_euclid(self.q as i128) as u128 * self.p as u128 % self.q as u128) as u64;
        let mut acc = ratio_to_fixed(a, self.q);
        for &(base, c) in &self.terms {
            let m = (n as i128).wrapping_mul(c as i128) as u128;
            acc = acc.wrapping_add(m.wrapping_mul(base.fixed()));
        }
        acc
    }

    pub fn fixed(&self) -> u128 {
        self.phase_fixed(1)
    }

    /// The angle as a float in `[0, 1)`.
    pub fn to_turns(&self) -> f64 {
        let v = fixed_to_unit(self.fixed());
        if v >= 1.0 {
            0.0
        } else {
            v
        }
    }

    /// Index of the cell `[i/N − 1/(2N), i/N + 1/(2N))` containing the angle.
    pub fn cell_index(&self, n_cells: u64) -> u64 {
        if self.terms.is_empty() {
            let num = 2 * self.p as u128 * n_cells as u128 + self.q as u128;
            return ((num / (2 * self.q as u128)) % n_cells as u128) as u64;
        }
        let f = self.fixed();
        let hi = (f >> 64) * n_cells as u128;
        let lo = ((f & LOW64) * n_cells as u128) >> 64;
        (((hi + lo + (1u128 << 63)) >> 64) % n_cells as u128) as u64
    }

    /// `e^{-2πi n t}`, exact at multiples of a quarter turn for rational angles.
    pub fn character(&self, n: i64) -> Complex64 {
        if self.terms.is_empty() {
            let a = ((n as i128).rem_euclid(self.q as i128) as u128 * self.p as u128 % self.q as u128) as u64;
            if (4 * a as u128).is_multiple_of(self.q as u128) {
                return match (4 * a as u128 / self.q as u128) as u8 {
                    0 => Complex64::new(1.0, 0.0),
                    1 => Complex64::new(0.0, -1.0),
                    2 => Complex64::new(-1.0, 0.0),
                    _ => Complex64::new(0.0, 1.0),
                };
            }
        }
        let x = fixed_to_signed(self.phase_fixed(n));
        let (s, c) = libm::sincos(core::f64::consts::TAU * x);
        Complex64::new(c, -s)
    }
}

impl Default for Angle {
    fn default() -> Self {
        Angle::ZERO
    }
}

/// `floor(a / q · 2^128)` for `a < q`.
fn ratio_to_fixed(a: u64, q: u64) -> u128 {
    if a == 0 {
        return 0;
    }
    let q = q as u128;
    let num = (a as u128) << 64;
    let hi = num / q;
    let lo = ((num % q) << 64) / q;
    (hi << 64) | lo
}

/// Fixed-point phase to a float in `[0, 1]` (may round up to 1).
pub(crate) fn fixed_to_unit(x: u128) -> f64 {
    x as f64 / TWO_POW_128
}

/// Fixed-point phase to the representative in `[-1/2, 1/2)`.
pub(crate) fn fixed_to_signed(x: u128) -> f64 {
    (x as i128) as f64 / TWO_POW_128
}

/// Parses the digits after the decimal point into a 128-bit binary fraction.
fn parse_decimal_fraction(s: &str) -> Result<u128> {
    let s = s.trim();
    let frac = match s.split_once('.') {
        Some((int, frac)) => {
            if !int.chars().all(|c| c.is_ascii_digit()) {
                return Err(Error::InvalidAngle(alloc::format!("bad decimal '{s}'")));
            }
            frac
        }
        None => "",
    };
    if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
        return Err(Error::InvalidAngle(alloc::format!("bad decimal '{s}'")));
    }
    // x <- (d + x) / 10, from the last digit to the first, in three 64-bit limbs.
    let mut x: u128 = 0;
    for d in frac.bytes().rev().map(|b| (b - b'0') as u128) {
        let num_hi = (d << 64) | (x >> 64);
        let q_hi = num_hi / 10;
        let r = num_hi % 10;
        let num_lo = (r << 64) | (x & LOW64);
        let q_lo = num_lo / 10;
        x = (q_hi << 64) | q_lo;
    }
    Ok(x)
}

/// Decimal expansion of a 128-bit binary fraction, rounded up in the last
/// digit so that parsing it back recovers the same fixed-point value.
fn format_fixed_decimal(mut x: u128, digits: usize) -> String {
    let mut out: Vec<u8> = Vec::with_capacity(digits);
    for _ in 0..digits {
        let lo = (x & LOW64) * 10;
        let hi = (x >> 64) * 10 + (lo >> 64);
        out.push((hi >> 64) as u8);
        x = ((hi & LOW64) << 64) | (lo & LOW64);
    }
    if x != 0 {
        for d in out.iter_mut().rev() {
            if *d == 9 {
                *d = 0;
            } else {
                *d += 1;
                break;
            }
        }
    }
    let mut s = String::from("0.");
    s.extend(out.iter().map(|d| (b'0' + d) as char));
    s
}

impl fmt::Display for IrrationalBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IrrationalBase::Golden => f.write_str("golden"),
            IrrationalBase::Sqrt2 => f.write_str("sqrt2"),
            IrrationalBase::Custom(v) => write!(f, "custom({})", format_fixed_decimal(*v, 40)),
        }
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for &(b, c) in &self.terms {
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            match c.unsigned_abs() {
                1 => write!(f, "{sign}{b}")?,
                k => write!(f, "{sign}{k}*{b}")?,
            }
            first = false;
        }
        if self.p != 0 || first {
            if !first {
                f.write_str("+")?;
            }
            if self.q == 1 {
                write!(f, "{}", self.p)?;
            } else {
                write!(f, "{}/{}", self.p, self.q)?;
            }
        }
        Ok(())
    }
}

/// Parses expressions such as `1/4`, `0.25`, `golden`, `-golden`, `2*sqrt2+1/3`
/// or `custom(0.5772156649015328606065)`.
impl FromStr for Angle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Angle> {
        let bad = |why: &str| Error::InvalidAngle(alloc::format!("'{s}': {why}"));
        let src: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if src.is_empty() {
            return Err(bad("empty expression"));
        }
        let mut acc = Angle::ZERO;
        let bytes = src.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let mut sign = 1i64;
            if bytes[i] == b'+' || bytes[i] == b'-' {
                if bytes[i] == b'-' {
                    sign = -1;
                }
                i += 1;
            } else if i != 0 {
                return Err(bad("expected '+' or '-'"));
            }
            // a term runs to the next top-level sign
            let start = i;
            let mut depth = 0;
            while i < bytes.len() {
                match bytes[i] {
                    b'(' => depth += 1,
                    b')' => depth -= 1,
                    b'+' | b'-' if depth == 0 => break,
                    _ => {}
                }
                i += 1;
            }
            let term = parse_term(&src[start..i]).map_err(|e| match e {
                Error::InvalidAngle(m) => bad(&m),
                other => other,
            })?;
            let term = term.checked_mul(sign).ok_or_else(|| bad("overflow"))?;
            acc = acc.checked_add(&term).ok_or_else(|| bad("overflow"))?;
        }
        Ok(acc)
    }
}

fn parse_term(t: &str) -> Result<Angle> {
    if t.is_empty() {
        return Err(Error::InvalidAngle("empty term".into()));
    }
    let (mult, rest) = match t.split_once('*') {
        Some((k, rest)) => {
            let k: i64 = k.parse().map_err(|_| Error::InvalidAngle(alloc::format!("bad multiplier '{k}'")))?;
            (k, rest)
        }
        None => (1, t),
    };
    let angle = match rest {
        "golden" => Angle::golden(),
        "sqrt2" => Angle::sqrt2(),
        r if r.starts_with("custom(") && r.ends_with(')') => Angle::custom(&r[7..r.len() - 1])?,
        r if r.contains('/') => {
            let (p, q) = r.split_once('/').unwrap_or((r, "1"));
            let p: i64 = p.parse().map_err(|_| Error::InvalidAngle(alloc::format!("bad numerator '{p}'")))?;
            let q: u64 = q.parse().map_err(|_| Error::InvalidAngle(alloc::format!("bad denominator '{q}'")))?;
            Angle::rational(p, q)?
        }
        r if r.contains('.') => {
            let (int, frac) = r.split_once('.').unwrap_or((r, ""));
            if frac.len() > 18 || !frac.chars().all(|c| c.is_ascii_digit()) {
                return Err(Error::InvalidAngle(alloc::format!("decimal '{r}' must have at most 18 digits")));
            }
            let int: i64 = if int.is_empty() {
                0
            } else {
                int.parse().map_err(|_| Error::InvalidAngle(alloc::format!("bad decimal '{r}'")))?
            };
            let den = 10u64.pow(frac.len() as u32);
            let num: i64 = if frac.is_empty() { 0 } else { frac.parse().unwrap_or(0) };
            Angle::rational((int.rem_euclid(1) * den as i64) + num, den)?
        }
        r => {
            let p: i64 = r.parse().map_err(|_| Error::InvalidAngle(alloc::format!("unknown term '{r}'")))?;
            Angle::rational(p, 1)?
        }
    };
    angle
        .checked_mul(mult)
        .ok_or_else(|| Error::InvalidAngle("overflow".into()))
}
