//! Point-cloud and diagram file formats.
//!
//! Binary point clouds: magic `FPC1`, little-endian `u32` dimension, `u64`
//! count, then `count × dim` little-endian `f64` in row-major order.
//! Text point clouds: one point per line, whitespace-separated coordinates,
//! `#` starts a comment.
//!
//! Diagrams are JSON `{"dims": {"0": [[b, d], ...], ...}}` with infinite
//! deaths written as the string `"inf"`.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use flood_core::datagen::Void;
use flood_core::persistence::PersistenceDiagram;
use flood_core::PointCloud;
use serde_json::{json, Map, Value};

use crate::CliError;

pub const MAGIC: &[u8; 4] = b"FPC1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CloudFormat {
    Binary,
    Text,
}

impl CloudFormat {
    /// `.txt`, `.xyz` and `.csv` are text; anything else is binary.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("txt" | "xyz" | "csv") => CloudFormat::Text,
            _ => CloudFormat::Binary,
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

pub fn encode_binary(cloud: &PointCloud) -> Vec<u8> {
    let mut out = Vec::with_capacity(16 + 8 * cloud.coords().len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(cloud.dim() as u32).to_le_bytes());
    out.extend_from_slice(&(cloud.len() as u64).to_le_bytes());
    for c in cloud.coords() {
        out.extend_from_slice(&c.to_le_bytes());
    }
    out
}

pub fn decode_binary(bytes: &[u8]) -> Result<PointCloud, CliError> {
    if bytes.len() < 16 || &bytes[..4] != MAGIC {
        return Err(CliError::Data("not an FPC1 point cloud".into()));
    }
    let dim = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
    let count = u64::from_le_bytes(bytes[8..16].try_into().unwrap()) as usize;
    let body = &bytes[16..];
    let expected = count
        .checked_mul(dim)
        .and_then(|v| v.checked_mul(8))
        .ok_or_else(|| CliError::Data("FPC1 header overflows".into()))?;
    if body.len() != expected {
        return Err(CliError::Data(format!(
            "FPC1 body has {} bytes, header promises {expected}",
            body.len()
        )));
    }
    let coords = body
        .chunks_exact(8)
        .map(|b| f64::from_le_bytes(b.try_into().unwrap()))
        .collect();
    Ok(PointCloud::new(dim, coords)?)
}

pub fn encode_text(cloud: &PointCloud) -> String {
    let mut s = String::with_capacity(cloud.coords().len() * 24);
    for p in cloud.iter() {
        let row: Vec<String> = p.iter().map(|c| format!("{c:.16e}")).collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s
}

pub fn decode_text(text: &str) -> Result<PointCloud, CliError> {
    let mut dim = None;
    let mut coords = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row: Vec<f64> = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| CliError::Data(format!("line {}: {e}", lineno + 1)))?;
        match dim {
            None => dim = Some(row.len()),
            Some(d) if d != row.len() => {
                return Err(CliError::Data(format!(
                    "line {}: expected {d} coordinates, found {}",
                    lineno + 1,
                    row.len()
                )))
            }
            _ => {}
        }
        coords.extend(row);
    }
    let dim = dim.ok_or_else(|| CliError::Data("point cloud file has no points".into()))?;
    Ok(PointCloud::new(dim, coords)?)
}

pub fn read_cloud(path: &Path) -> Result<PointCloud, CliError> {
    let bytes = fs::read(path).map_err(|e| io_err(path, e))?;
    if bytes.starts_with(MAGIC) {
        return decode_binary(&bytes);
    }
    let text = String::from_utf8(bytes).map_err(|_| CliError::Data(format!("{}: not a point cloud", path.display())))?;
    decode_text(&text)
}

pub fn write_cloud(path: &Path, cloud: &PointCloud, format: CloudFormat) -> Result<(), CliError> {
    let bytes = match format {
        CloudFormat::Binary => encode_binary(cloud),
        CloudFormat::Text => encode_text(cloud).into_bytes(),
    };
    write_bytes(path, &bytes)
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let f = fs::File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = BufWriter::new(f);
    w.write_all(bytes).and_then(|_| w.flush()).map_err(|e| io_err(path, e))
}

fn number(v: f64) -> Value {
    if v.is_infinite() && v > 0.0 {
        Value::String("inf".into())
    } else {
        json!(v)
    }
}

pub fn diagram_to_json(dgm: &PersistenceDiagram) -> Value {
    let mut dims = Map::new();
    for k in dgm.dims() {
        let bars: Vec<Value> = dgm.bars(k).iter().map(|&(b, d)| json!([number(b), number(d)])).collect();
        dims.insert(k.to_string(), Value::Array(bars));
    }
    json!({ "dims": dims })
}

fn parse_number(v: &Value) -> Option<f64> {
    match v {
        Value::Number(n) => n.as_f64(),
        Value::String(s) if s == "inf" => Some(f64::INFINITY),
        _ => None,
    }
}

pub fn diagram_from_json(v: &Value) -> Result<PersistenceDiagram, CliError> {
    let bad = |what: &str| CliError::Data(format!("malformed diagram: {what}"));
    let dims = v.get("dims").and_then(Value::as_object).ok_or_else(|| bad("missing \"dims\""))?;
    let mut bars = Vec::new();
    for (k, list) in dims {
        let k: usize = k.parse().map_err(|_| bad("dimension key"))?;
        for bar in list.as_array().ok_or_else(|| bad("bar list"))? {
            let pair = bar.as_array().filter(|a| a.len() == 2).ok_or_else(|| bad("bar"))?;
            let b = parse_number(&pair[0]).ok_or_else(|| bad("birth"))?;
            let d = parse_number(&pair[1]).ok_or_else(|| bad("death"))?;
            if !(b <= d) {
                return Err(bad("birth after death"));
            }
            bars.push((k, b, d));
        }
    }
    Ok(PersistenceDiagram::from_bars(bars))
}

pub fn read_diagram(path: &Path) -> Result<PersistenceDiagram, CliError> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    diagram_from_json(&v)
}

pub fn write_diagram(path: &Path, dgm: &PersistenceDiagram) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(&diagram_to_json(dgm)).expect("diagram serializes");
    write_bytes(path, text.as_bytes())
}

pub fn voids_to_json(voids: &[Void]) -> Value {
    json!({
        "voids": voids
            .iter()
            .map(|v| json!({ "center": v.center, "radius": v.radius }))
            .collect::<Vec<_>>()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_round_trip_is_bit_exact() {
        let c = PointCloud::new(3, vec![0.1, -2.5e-300, 7.0, f64::MAX, 1.0 / 3.0, -0.0]).unwrap();
        let back = decode_binary(&encode_binary(&c)).unwrap();
        assert_eq!(c.coords().iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
                   back.coords().iter().map(|v| v.to_bits()).collect::<Vec<_>>());
        assert!(decode_binary(b"FPC1\x02\x00").is_err());
        let mut truncated = encode_binary(&c);
        truncated.pop();
        assert!(decode_binary(&truncated).is_err());
    }

    #[test]
    fn text_round_trip_is_exact() {
        let c = PointCloud::new(2, vec![0.1, 1.0 / 3.0, -1e-17, 123456.789]).unwrap();
        assert_eq!(decode_text(&encode_text(&c)).unwrap().coords(), c.coords());
        let parsed = decode_text("# header\n1 2\n\n3 4 # trailing\n").unwrap();
        assert_eq!(parsed.coords(), &[1.0, 2.0, 3.0, 4.0]);
        assert!(decode_text("1 2\n3\n").is_err());
        assert!(decode_text("# nothing\n").is_err());
    }

    #[test]
    fn diagram_json_round_trip() {
        let d = PersistenceDiagram::from_bars([(0, 0.0, f64::INFINITY), (0, 0.0, 0.5), (1, 0.25, 1.0)]);
        let v = diagram_to_json(&d);
        assert_eq!(v["dims"]["0"][1][1], "inf");
        assert_eq!(diagram_from_json(&v).unwrap(), d);
        assert!(diagram_from_json(&json!({"dims": {"0": [[1.0, 0.0]]}})).is_err());
    }
}
