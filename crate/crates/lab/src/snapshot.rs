//! Binary field snapshots.
//!
//! Layout, all integers and floats little-endian:
//!
//! ```text
//! offset  size  content
//!      0     4  magic "KGSL"
//!      4     2  format version
//!      6     1  equation tag (0 Klein-Gordon, 1 Schrödinger)
//!      7     1  reserved, zero
//!      8     8  n (u64)
//!     16     8  L (f64)
//!     24     8  t (f64)
//!     32     4  field count (u32)
//!     36     4  CRC-32 of the payload
//!     40        payload: per field, the n*n real plane then the n*n
//!               imaginary plane, row-major f64
//! ```

use std::io::{Read, Write};
use std::path::Path;

use kgsl::field::{Field, Grid};
use kgsl::propagators::{Equation, KgState, NlsState, State};
use num_complex::Complex;

use crate::error::{CliError, CliResult};

pub const MAGIC: [u8; 4] = *b"KGSL";
pub const FORMAT_VERSION: u16 = 1;
const HEADER_LEN: usize = 40;

#[derive(Clone, Debug, PartialEq)]
pub struct SnapshotFile {
    pub equation: Equation,
    pub n: usize,
    pub length: f64,
    pub t: f64,
    pub fields: Vec<Vec<Complex<f64>>>,
}

fn equation_tag(eq: Equation) -> u8 {
    match eq {
        Equation::KleinGordon => 0,
        Equation::Schrodinger => 1,
    }
}

fn bad(message: impl Into<String>) -> CliError {
    CliError::Snapshot(message.into())
}

impl SnapshotFile {
    /// Snapshot of a state: `(u, u̇)` for Klein-Gordon, `u` for Schrödinger.
    pub fn from_state<S: State<f64>>(state: &S) -> Self {
        let grid = state.grid();
        let mut fields = vec![state.u().values().to_vec()];
        if let Some(v) = state.velocity() {
            fields.push(v.values().to_vec());
        }
        Self {
            equation: S::EQUATION,
            n: grid.n(),
            length: grid.length(),
            t: state.time(),
            fields,
        }
    }

    pub fn grid(&self) -> CliResult<Grid<f64>> {
        Ok(Grid::new(self.n, self.length)?)
    }

    /// Field number `k` of the snapshot.
    pub fn field(&self, k: usize) -> CliResult<Field<f64>> {
        let values = self
            .fields
            .get(k)
            .ok_or_else(|| bad(format!("snapshot has {} field(s), field {k} requested", self.fields.len())))?;
        Ok(Field::complex(self.grid()?, values.clone())?)
    }

    pub fn to_kg(&self) -> CliResult<KgState<f64>> {
        if self.equation != Equation::KleinGordon || self.fields.len() != 2 {
            return Err(bad("expected a Klein-Gordon snapshot with two fields"));
        }
        Ok(KgState::new(self.field(0)?, self.field(1)?, self.t)?)
    }

    pub fn to_nls(&self) -> CliResult<NlsState<f64>> {
        if self.equation != Equation::Schrodinger || self.fields.len() != 1 {
            return Err(bad("expected a Schrödinger snapshot with one field"));
        }
        Ok(NlsState::new(self.field(0)?, self.t))
    }

    fn payload(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.fields.len() * self.n * self.n * 16);
        for field in &self.fields {
            for c in field {
                out.extend_from_slice(&c.re.to_le_bytes());
            }
            for c in field {
                out.extend_from_slice(&c.im.to_le_bytes());
            }
        }
        out
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let payload = self.payload();
        let mut out = Vec::with_capacity(HEADER_LEN + payload.len());
        out.extend_from_slice(&MAGIC);
        out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
        out.push(equation_tag(self.equation));
        out.push(0);
        out.extend_from_slice(&(self.n as u64).to_le_bytes());
        out.extend_from_slice(&self.length.to_le_bytes());
        out.extend_from_slice(&self.t.to_le_bytes());
        out.extend_from_slice(&(self.fields.len() as u32).to_le_bytes());
        out.extend_from_slice(&crc32fast::hash(&payload).to_le_bytes());
        out.extend_from_slice(&payload);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> CliResult<Self> {
        if bytes.len() < HEADER_LEN {
            return Err(bad(format!("file of {} bytes is shorter than the header", bytes.len())));
        }
        if bytes[0..4] != MAGIC {
            return Err(bad("missing KGSL magic"));
        }
        let u16_at = |o: usize| u16::from_le_bytes(bytes[o..o + 2].try_into().unwrap());
        let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
        let u64_at = |o: usize| u64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
        let f64_at = |o: usize| f64::from_bits(u64_at(o));
        let version = u16_at(4);
        if version != FORMAT_VERSION {
            return Err(bad(format!("unsupported format version {version}")));
        }
        let equation = match bytes[6] {
            0 => Equation::KleinGordon,
            1 => Equation::Schrodinger,
            tag => return Err(bad(format!("unknown equation tag {tag}"))),
        };
        let n = usize::try_from(u64_at(8)).map_err(|_| bad("grid size overflows"))?;
        let length = f64_at(16);
        let t = f64_at(24);
        let count = u32_at(32) as usize;
        let checksum = u32_at(36);
        let plane = n.checked_mul(n).ok_or_else(|| bad("grid size overflows"))?;
        let expected = plane
            .checked_mul(16)
            .and_then(|b| b.checked_mul(count))
            .ok_or_else(|| bad("payload size overflows"))?;
        let payload = &bytes[HEADER_LEN..];
        if payload.len() != expected {
            return Err(bad(format!("payload has {} bytes, header implies {expected}", payload.len())));
        }
        if crc32fast::hash(payload) != checksum {
            return Err(bad("checksum mismatch"));
        }
        let read = |o: usize| f64::from_le_bytes(payload[o..o + 8].try_into().unwrap());
        let fields = (0..count)
            .map(|k| {
                let base = k * plane * 16;
                (0..plane)
                    .map(|i| Complex::new(read(base + 8 * i), read(base + 8 * (plane + i))))
                    .collect()
            })
            .collect();
        Ok(Self {
            equation,
            n,
            length,
            t,
            fields,
        })
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
        file.write_all(&self.to_bytes())?;
        file.flush()?;
        Ok(())
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let mut bytes = Vec::new();
        std::fs::File::open(path)?.read_to_end(&mut bytes)?;
        Self::from_bytes(&bytes)
    }
}
