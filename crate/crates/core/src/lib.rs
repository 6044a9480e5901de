#![no_std]
// NaN must fail range checks, so `!(x <= b)` is intended.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod angle;
pub mod diagnostics;
pub mod error;
pub mod fft;
pub mod fourier;
pub mod hilbert;
pub mod measure;
pub mod operator;
pub mod walk;

pub use angle::Angle;
pub use error::{Error, Result};
pub use fourier::{fourier_coefficient, fourier_table, FourierTable, TableOptions, Truncation};
pub use measure::{convolve, CircleMeasure};
