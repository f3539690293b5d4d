//! Profile files.
//!
//! Binary layout, all integers and floats little-endian:
//!
//! ```text
//! magic          8 bytes  "DGSIMPRF"
//! version        u32      PROFILE_FORMAT_VERSION
//! width, height  f64, f64
//! sink x, y      f64, f64
//! node_count     u32
//! static_count   u32
//! v_max          f64
//! round_period   f64
//! horizon_rounds u32
//! seed           u64
//! static ids     static_count x u32
//! positions      horizon_rounds x node_count x (x f64, y f64), round-major
//! ```
//!
//! The JSON form carries the same content as
//! `{"format_version", "field", "mobility", "static_set", "positions"}` with
//! `positions[round][node] = [x, y]`. Both forms round-trip doubles exactly.
//! Loading re-validates every profile invariant.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{FieldConfig, MobilityConfig, MobilityProfile};
use crate::error::{Error, Result};
use crate::geom::Point;

pub const PROFILE_FORMAT_VERSION: u32 = 1;
const MAGIC: &[u8; 8] = b"DGSIMPRF";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileFormat {
    Binary,
    Json,
}

impl ProfileFormat {
    /// `.json` selects JSON; anything else is binary.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => ProfileFormat::Json,
            _ => ProfileFormat::Binary,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct JsonProfile {
    format_version: u32,
    field: FieldConfig,
    mobility: MobilityConfig,
    static_set: Vec<usize>,
    positions: Vec<Vec<[f64; 2]>>,
}

pub fn save_profile(profile: &MobilityProfile, path: &Path, format: ProfileFormat) -> Result<()> {
    let bytes = match format {
        ProfileFormat::Binary => encode_binary(profile),
        ProfileFormat::Json => encode_json(profile),
    };
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// Loads either format, detected by the magic bytes.
pub fn load_profile(path: &Path) -> Result<MobilityProfile> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode(&bytes)
}

pub(crate) fn decode(bytes: &[u8]) -> Result<MobilityProfile> {
    if bytes.starts_with(MAGIC) {
        decode_binary(bytes)
    } else {
        decode_json(bytes)
    }
}

pub(crate) fn encode_binary(profile: &MobilityProfile) -> Vec<u8> {
    let f = profile.field();
    let m = profile.mobility();
    let mut out = Vec::with_capacity(80 + profile.raw_positions().len() * 16);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&PROFILE_FORMAT_VERSION.to_le_bytes());
    for v in [f.width, f.height, f.sink.x, f.sink.y] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out.extend_from_slice(&(m.node_count as u32).to_le_bytes());
    out.extend_from_slice(&(m.static_count as u32).to_le_bytes());
    out.extend_from_slice(&m.v_max.to_le_bytes());
    out.extend_from_slice(&m.round_period.to_le_bytes());
    out.extend_from_slice(&(m.horizon_rounds as u32).to_le_bytes());
    out.extend_from_slice(&m.seed.to_le_bytes());
    for &id in profile.static_set() {
        out.extend_from_slice(&(id as u32).to_le_bytes());
    }
    for p in profile.raw_positions() {
        out.extend_from_slice(&p.x.to_le_bytes());
        out.extend_from_slice(&p.y.to_le_bytes());
    }
    out
}

struct Reader<'a> {
    bytes: &'a [u8],
    offset: usize,
}

impl<'a> Reader<'a> {
    fn take<const N: usize>(&mut self, what: &str) -> Result<[u8; N]> {
        let end = self.offset + N;
        let slice = self.bytes.get(self.offset..end).ok_or_else(|| Error::Parse {
            location: format!("byte {}", self.offset),
            message: format!("truncated file while reading {what}"),
        })?;
        self.offset = end;
        Ok(slice.try_into().expect("length checked"))
    }

    fn u32(&mut self, what: &str) -> Result<u32> {
        self.take::<4>(what).map(u32::from_le_bytes)
    }

    fn u64(&mut self, what: &str) -> Result<u64> {
        self.take::<8>(what).map(u64::from_le_bytes)
    }

    fn f64(&mut self, what: &str) -> Result<f64> {
        self.take::<8>(what).map(f64::from_le_bytes)
    }
}

fn decode_binary(bytes: &[u8]) -> Result<MobilityProfile> {
    let mut r = Reader { bytes, offset: 0 };
    r.take::<8>("magic")?;
    let version = r.u32("format version")?;
    if version != PROFILE_FORMAT_VERSION {
        return Err(Error::Parse {
            location: "byte 8".into(),
            message: format!("unsupported format version {version}"),
        });
    }
    let field = FieldConfig {
        width: r.f64("width")?,
        height: r.f64("height")?,
        sink: Point::new(r.f64("sink x")?, r.f64("sink y")?),
    };
    let node_count = r.u32("node_count")? as usize;
    let static_count = r.u32("static_count")? as usize;
    let v_max = r.f64("v_max")?;
    let round_period = r.f64("round_period")?;
    let horizon_rounds = r.u32("horizon_rounds")? as usize;
    let seed = r.u64("seed")?;
    let mobility = MobilityConfig {
        node_count,
        static_count,
        v_max,
        round_period,
        horizon_rounds,
        seed,
    };
    mobility.validate()?;

    let expected = r.offset + static_count * 4 + node_count * horizon_rounds * 16;
    if bytes.len() < expected {
        return Err(Error::Parse {
            location: format!("byte {}", bytes.len()),
            message: format!("truncated file: expected {expected} bytes"),
        });
    }
    if bytes.len() > expected {
        return Err(Error::Parse {
            location: format!("byte {expected}"),
            message: "trailing bytes after position table".into(),
        });
    }
    let mut static_set = Vec::with_capacity(static_count);
    for _ in 0..static_count {
        static_set.push(r.u32("static id")? as usize);
    }
    let mut positions = Vec::with_capacity(node_count * horizon_rounds);
    for _ in 0..node_count * horizon_rounds {
        positions.push(Point::new(r.f64("x")?, r.f64("y")?));
    }
    MobilityProfile::from_parts(field, mobility, static_set, positions)
}

fn encode_json(profile: &MobilityProfile) -> Vec<u8> {
    let positions = (0..profile.horizon())
        .map(|r| profile.round_positions(r).iter().map(|p| [p.x, p.y]).collect())
        .collect();
    let doc = JsonProfile {
        format_version: PROFILE_FORMAT_VERSION,
        field: *profile.field(),
        mobility: *profile.mobility(),
        static_set: profile.static_set().to_vec(),
        positions,
    };
    serde_json::to_vec(&doc).expect("profile serializes")
}

fn decode_json(bytes: &[u8]) -> Result<MobilityProfile> {
    let doc: JsonProfile = serde_json::from_slice(bytes).map_err(|e| Error::Parse {
        location: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    if doc.format_version != PROFILE_FORMAT_VERSION {
        return Err(Error::Parse {
            location: "format_version".into(),
            message: format!("unsupported format version {}", doc.format_version),
        });
    }
    doc.mobility.validate()?;
    if doc.positions.len() != doc.mobility.horizon_rounds
        || doc.positions.iter().any(|row| row.len() != doc.mobility.node_count)
    {
        return Err(Error::Validation("position table shape does not match config".into()));
    }
    let positions = doc
        .positions
        .into_iter()
        .flatten()
        .map(|[x, y]| Point::new(x, y))
        .collect();
    MobilityProfile::from_parts(doc.field, doc.mobility, doc.static_set, positions)
}
