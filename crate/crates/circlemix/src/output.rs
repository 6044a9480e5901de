//! File formats: CSV tables, JSON records and the binary grid snapshot.
//!
//! Every float is written with 17 significant digits (`{:.16e}`), so values
//! round-trip exactly and identical runs give identical bytes.

use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

/// Float in scientific notation with 17 significant digits; `inf`, `-inf` or `nan` otherwise.
pub fn float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// JSON float with 17 significant digits; non-finite values become strings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Float(pub f64);

impl Serialize for Float {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            let raw = RawValue::from_string(float(self.0)).map_err(serde::ser::Error::custom)?;
            raw.serialize(s)
        } else {
            s.serialize_str(&float(self.0))
        }
    }
}

/// Complex value as `{"re": …, "im": …}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexOut {
    pub re: Float,
    pub im: Float,
}

impl From<num_complex::Complex64> for ComplexOut {
    fn from(z: num_complex::Complex64) -> Self {
        ComplexOut { re: Float(z.re), im: Float(z.im) }
    }
}

pub fn write_csv(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> io::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.flush()
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> io::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)
}

pub const SNAPSHOT_MAGIC: &[u8; 4] = b"CMX1";

/// `CMX1`, `N` as u64, then the `N` masses as f64, all little-endian.
pub fn write_snapshot(path: &Path, masses: &[f64]) -> io::Result<()> {
    let mut buf = Vec::with_capacity(12 + 8 * masses.len());
    buf.extend_from_slice(SNAPSHOT_MAGIC);
    buf.extend_from_slice(&(masses.len() as u64).to_le_bytes());
    for m in masses {
        buf.extend_from_slice(&m.to_le_bytes());
    }
    let mut f = fs::File::create(path)?;
    f.write_all(&buf)?;
    f.flush()
}

pub fn read_snapshot(path: &Path) -> io::Result<Vec<f64>> {
    let mut bytes = Vec::new();
    fs::File::open(path)?.read_to_end(&mut bytes)?;
    let bad = |m: &str| io::Error::new(io::ErrorKind::InvalidData, m.to_string());
    if bytes.len() < 12 || &bytes[..4] != SNAPSHOT_MAGIC {
        return Err(bad("missing CMX1 header"));
    }
    let n = u64::from_le_bytes(bytes[4..12].try_into().expect("8 bytes")) as usize;
    if bytes.len() != 12 + 8 * n {
        return Err(bad("snapshot length does not match its header"));
    }
    Ok(bytes[12..].chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes"))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0] {
            let s = float(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let digits = s.split('e').next().unwrap().chars().filter(|c| c.is_ascii_digit()).count();
            assert_eq!(digits, 17, "{s}");
        }
        assert_eq!(float(f64::INFINITY), "inf");
    }

    #[test]
    fn json_floats_are_raw() {
        let s = serde_json::to_string(&[Float(0.5), Float(f64::NAN)]).unwrap();
        assert_eq!(s, "[5.0000000000000000e-1,\"nan\"]");
        let back: Vec<serde_json::Value> = serde_json::from_str(&s).unwrap();
        assert_eq!(back[0].as_f64(), Some(0.5));
    }

    #[test]
    fn snapshot_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("g.cmx");
        let m = vec![0.25, 0.5, 0.125, 0.125];
        write_snapshot(&p, &m).unwrap();
        let bytes = std::fs::read(&p).unwrap();
        assert_eq!(&bytes[..4], b"CMX1");
        assert_eq!(u64::from_le_bytes(bytes[4..12].try_into().unwrap()), 4);
        assert_eq!(read_snapshot(&p).unwrap(), m);
    }
}
