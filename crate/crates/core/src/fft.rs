//! Discrete Fourier transforms of arbitrary length.
//!
//! Power-of-two lengths use an iterative radix-2 transform; other lengths go
//! through Bluestein's chirp-z reduction to a power-of-two convolution.
//! Twiddle factors are evaluated directly from `sincos` rather than by
//! recurrence, so the error stays at a few ulps times `log2 N`.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;

/// Sign of the exponent: `Forward` is `e^{-2πi jk/N}`, `Inverse` is `e^{+2πi jk/N}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

impl Direction {
    fn sign(self) -> f64 {
        match self {
            Direction::Forward => -1.0,
            Direction::Inverse => 1.0,
        }
    }
}

fn cis(x: f64) -> Complex64 {
    let (s, c) = libm::sincos(x);
    Complex64::new(c, s)
}

/// `e^{sign·2πi k/n}` with the numerator reduced first.
fn root(k: u64, n: u64, sign: f64) -> Complex64 {
    let k = k % n;
    cis(sign * TAU * (k as f64 / n as f64))
}

/// Unnormalized in-place transform: `X_k = Σ_j x_j e^{∓2πi jk/N}`.
pub fn transform(buf: &mut [Complex64], dir: Direction) {
    let n = buf.len();
    if n <= 1 {
        return;
    }
    if n.is_power_of_two() {
        radix2(buf, dir);
    } else if n <= 16 {
        let out = naive(buf, dir);
        buf.copy_from_slice(&out);
    } else {
        bluestein(buf, dir);
    }
}

/// Forward transform into a new vector.
pub fn forward(input: &[Complex64]) -> Vec<Complex64> {
    let mut v = input.to_vec();
    transform(&mut v, Direction::Forward);
    v
}

/// Inverse transform (unnormalized) into a new vector.
pub fn inverse(input: &[Complex64]) -> Vec<Complex64> {
    let mut v = input.to_vec();
    transform(&mut v, Direction::Inverse);
    v
}

/// Direct `O(N²)` transform; used for tiny sizes and as a test oracle.
pub fn naive(input: &[Complex64], dir: Direction) -> Vec<Complex64> {
    let n = input.len() as u64;
    (0..n)
        .map(|k| {
            input
                .iter()
                .enumerate()
                .map(|(j, &x)| x * root(j as u64 * k, n, dir.sign()))
                .sum()
        })
        .collect()
}

fn radix2(buf: &mut [Complex64], dir: Direction) {
    let n = buf.len();
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            buf.swap(i, j);
        }
    }
    let sign = dir.sign();
    let twiddles: Vec<Complex64> = (0..n / 2).map(|k| root(k as u64, n as u64, sign)).collect();
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let stride = n / len;
        for start in (0..n).step_by(len) {
            for k in 0..half {
                let w = twiddles[k * stride];
                let a = buf[start + k];
                let b = buf[start + k + half] * w;
                buf[start + k] = a + b;
                buf[start + k + half] = a - b;
            }
        }
        len <<= 1;
    }
}

fn bluestein(buf: &mut [Complex64], dir: Direction) {
    let n = buf.len();
    let m = (2 * n - 1).next_power_of_two();
    let sign = dir.sign();
    // chirp w_j = e^{sign·πi j²/n}; j² is reduced mod 2n to keep the argument small
    let chirp: Vec<Complex64> = (0..n)
        .map(|j| {
            let jj = (j as u128 * j as u128 % (2 * n as u128)) as u64;
            cis(sign * core::f64::consts::PI * (jj as f64 / n as f64))
        })
        .collect();
    let mut a = alloc::vec![Complex64::new(0.0, 0.0); m];
    for j in 0..n {
        a[j] = buf[j] * chirp[j];
    }
    let mut b = alloc::vec![Complex64::new(0.0, 0.0); m];
    b[0] = chirp[0].conj();
    for j in 1..n {
        b[j] = chirp[j].conj();
        b[m - j] = chirp[j].conj();
    }
    radix2(&mut a, Direction::Forward);
    radix2(&mut b, Direction::Forward);
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= y;
    }
    radix2(&mut a, Direction::Inverse);
    let scale = 1.0 / m as f64;
    for k in 0..n {
        buf[k] = a[k] * scale * chirp[k];
    }
}

/// Circular convolution `(x ⊛ y)_i = Σ_j x_j y_{i-j}` through the transform.
pub fn circular_convolution(x: &[f64], y: &[f64]) -> Vec<f64> {
    assert_eq!(x.len(), y.len());
    let n = x.len();
    let mut a: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let mut b: Vec<Complex64> = y.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    transform(&mut a, Direction::Forward);
    transform(&mut b, Direction::Forward);
    for (p, q) in a.iter_mut().zip(&b) {
        *p *= q;
    }
    transform(&mut a, Direction::Inverse);
    a.iter().map(|z| z.re / n as f64).collect()
}
