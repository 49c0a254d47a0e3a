//! RSRF: a flat little-endian container for row-major f32 matrices.
//!
//! ```text
//! offset  size  field
//! 0       4     magic "RSRF"
//! 4       4     version (u32) = 1
//! 8       8     rows (u64)
//! 16      4     channels (u32)
//! 20      ...   rows * channels f32 values, row-major
//! ```

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

pub const MAGIC: [u8; 4] = *b"RSRF";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct RsrfMatrix {
    rows: u64,
    channels: u32,
    data: Vec<f32>,
}

impl RsrfMatrix {
    pub fn new(rows: u64, channels: u32, data: Vec<f32>) -> Result<Self> {
        let expected = (rows as u128) * (channels as u128);
        if expected != data.len() as u128 {
            return Err(Error::InvalidInput(format!(
                "{} values for a {rows}x{channels} matrix",
                data.len()
            )));
        }
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::Validation(format!("payload value {i} is not finite")));
        }
        Ok(Self {
            rows,
            channels,
            data,
        })
    }

    /// Narrows f64 rows to f32. Every row must have `channels` entries.
    pub fn from_rows<R: AsRef<[f64]>>(channels: u32, rows: &[R]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * channels as usize);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != channels as usize {
                return Err(Error::InvalidInput(format!(
                    "row {i} has {} values, expected {channels}",
                    r.len()
                )));
            }
            data.extend(r.iter().map(|&v| v as f32));
        }
        Self::new(rows.len() as u64, channels, data)
    }

    pub fn rows(&self) -> u64 {
        self.rows
    }

    pub fn channels(&self) -> u32 {
        self.channels
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[f32] {
        let c = self.channels as usize;
        &self.data[r * c..(r + 1) * c]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[f32]> {
        self.data.chunks(self.channels.max(1) as usize)
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + self.data.len() * 4);
        out.extend_from_slice(&MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&self.rows.to_le_bytes());
        out.extend_from_slice(&self.channels.to_le_bytes());
        for v in &self.data {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }

    pub fn decode(bytes: &[u8]) -> Result<Self> {
        for (i, &m) in MAGIC.iter().enumerate() {
            match bytes.get(i) {
                None => return Err(Error::format_at_byte(i as u64, "truncated magic")),
                Some(&b) if b != m => {
                    return Err(Error::format_at_byte(
                        i as u64,
                        format!("bad magic byte 0x{b:02x}, expected 0x{m:02x}"),
                    ))
                }
                _ => {}
            }
        }
        if bytes.len() < HEADER_LEN {
            return Err(Error::format_at_byte(bytes.len() as u64, "truncated header"));
        }
        let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
        if version != VERSION {
            return Err(Error::format_at_byte(
                4,
                format!("unsupported version {version}"),
            ));
        }
        let rows = u64::from_le_bytes(bytes[8..16].try_into().unwrap());
        let channels = u32::from_le_bytes(bytes[16..20].try_into().unwrap());
        let payload = &bytes[HEADER_LEN..];
        let expected = (rows as u128) * (channels as u128) * 4;
        if (payload.len() as u128) < expected {
            return Err(Error::format_at_byte(
                bytes.len() as u64,
                format!(
                    "truncated payload: {rows}x{channels} needs {expected} bytes, found {}",
                    payload.len()
                ),
            ));
        }
        if (payload.len() as u128) > expected {
            return Err(Error::format_at_byte(
                HEADER_LEN as u64 + expected as u64,
                "trailing bytes after payload",
            ));
        }
        let data = payload
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
            .collect();
        Self::new(rows, channels, data)
    }
}

pub fn write_rsrf(path: impl AsRef<Path>, m: &RsrfMatrix) -> Result<()> {
    fs::write(path, m.encode())?;
    Ok(())
}

pub fn read_rsrf(path: impl AsRef<Path>) -> Result<RsrfMatrix> {
    RsrfMatrix::decode(&fs::read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_payload_is_header_only() {
        let m = RsrfMatrix::new(0, 7, vec![]).unwrap();
        let bytes = m.encode();
        assert_eq!(bytes.len(), 20);
        assert_eq!(&bytes[..4], b"RSRF");
        assert_eq!(RsrfMatrix::decode(&bytes).unwrap(), m);
    }

    #[test]
    fn one_row_roundtrip_bitwise() {
        let vals = vec![1.5, -0.0, f32::MIN_POSITIVE, 3.25e-20, f32::MAX, -7.0, 0.1];
        let m = RsrfMatrix::new(1, 7, vals.clone()).unwrap();
        let back = RsrfMatrix::decode(&m.encode()).unwrap();
        let bits = |v: &[f32]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(back.data()), bits(&vals));
    }

    #[test]
    fn header_layout() {
        let m = RsrfMatrix::new(2, 1, vec![1.0, 2.0]).unwrap();
        let b = m.encode();
        assert_eq!(&b[4..8], &[1, 0, 0, 0]);
        assert_eq!(&b[8..16], &[2, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(&b[16..20], &[1, 0, 0, 0]);
        assert_eq!(&b[20..24], &1.0f32.to_le_bytes());
    }

    #[test]
    fn bad_magic_names_byte() {
        let mut b = RsrfMatrix::new(0, 1, vec![]).unwrap().encode();
        b[3] = b'X';
        match RsrfMatrix::decode(&b) {
            Err(Error::Format { offset, unit, .. }) => {
                assert_eq!(offset, 3);
                assert_eq!(unit, "byte");
            }
            other => panic!("expected format error, got {other:?}"),
        }
    }

    #[test]
    fn bad_version_and_truncation() {
        let good = RsrfMatrix::new(2, 2, vec![1.0; 4]).unwrap().encode();
        let mut b = good.clone();
        b[4] = 2;
        assert!(matches!(RsrfMatrix::decode(&b), Err(Error::Format { offset: 4, .. })));
        assert!(matches!(
            RsrfMatrix::decode(&good[..good.len() - 1]),
            Err(Error::Format { .. })
        ));
        assert!(matches!(RsrfMatrix::decode(&good[..10]), Err(Error::Format { offset: 10, .. })));
        let mut long = good.clone();
        long.push(0);
        assert!(matches!(RsrfMatrix::decode(&long), Err(Error::Format { offset: 36, .. })));
    }

    #[test]
    fn non_finite_rejected() {
        assert!(matches!(
            RsrfMatrix::new(1, 1, vec![f32::NAN]),
            Err(Error::Validation(_))
        ));
        let mut b = RsrfMatrix::new(1, 1, vec![0.0]).unwrap().encode();
        b[20..24].copy_from_slice(&f32::INFINITY.to_le_bytes());
        assert!(matches!(RsrfMatrix::decode(&b), Err(Error::Validation(_))));
    }
}
