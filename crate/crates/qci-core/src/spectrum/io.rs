//! Spectrum export/import: a flat text table plus a binary sidecar of
//! radial samples keyed by `(m, k)`.

use std::sync::Arc;

use crate::error::QciError;
use crate::models::ModelSystem;
use crate::spectrum::{JointEigenpair, JointSpectrum};
use crate::Result;

const BLOB_MAGIC: &[u8; 8] = b"QCIRAD1\0";

/// Text table: header comments record the profile name, grid size and
/// completeness radius; rows are `lam_1,lam_2,m,k,norm_cert`.
pub fn write_spectrum_table(spec: &JointSpectrum) -> Result<String> {
    if spec.dim() != 2 {
        return Err(QciError::Domain(
            "spectrum tables are defined for 2-dimensional systems".into(),
        ));
    }
    let mut out = String::new();
    out.push_str("# qci-spectrum v1\n");
    out.push_str(&format!("# system = {}\n", spec.system.descriptor()));
    out.push_str(&format!("# grid_size = {}\n", spec.grid_size));
    out.push_str(&format!("# lam_max = {:.17e}\n", spec.lam_max));
    if let Some((lo, hi)) = spec.channel_range {
        out.push_str(&format!("# channel_range = {lo} {hi}\n"));
    }
    out.push_str(&format!("# radial_x0 = {:.17e}\n", spec.radial_x0));
    out.push_str(&format!("# radial_h = {:.17e}\n", spec.radial_h));
    out.push_str("lam_1,lam_2,m,k,norm_cert\n");
    for p in &spec.pairs {
        out.push_str(&format!(
            "{:.17e},{:.17e},{},{},{:.3e}\n",
            p.lam[0], p.lam[1], p.quantum_numbers[0], p.quantum_numbers[1], p.norm_cert
        ));
    }
    Ok(out)
}

/// Binary sidecar: magic, record count, then per record
/// `(m: i64, k: i64, len: u64, samples: f64 × len)`, little-endian.
pub fn write_radial_blob(spec: &JointSpectrum) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(BLOB_MAGIC);
    let with_samples: Vec<&JointEigenpair> = spec
        .pairs
        .iter()
        .filter(|p| !p.radial_samples.is_empty())
        .collect();
    out.extend_from_slice(&(with_samples.len() as u64).to_le_bytes());
    for p in with_samples {
        out.extend_from_slice(&p.quantum_numbers[0].to_le_bytes());
        out.extend_from_slice(&p.quantum_numbers[1].to_le_bytes());
        out.extend_from_slice(&(p.radial_samples.len() as u64).to_le_bytes());
        for v in p.radial_samples.iter() {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

/// Rebuild a [`JointSpectrum`] from its table, optional sidecar, and the
/// owning model system.
pub fn import_spectrum(
    table: &str,
    blob: Option<&[u8]>,
    system: ModelSystem,
) -> Result<JointSpectrum> {
    let mut lam_max = None;
    let mut grid_size = 0usize;
    let mut channel_range = None;
    let mut radial_x0 = 0.0;
    let mut radial_h = 0.0;
    let mut pairs = Vec::new();
    let mut saw_header = false;

    for (lineno, line) in table.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let rest = rest.trim();
            if let Some((key, value)) = rest.split_once('=') {
                let (key, value) = (key.trim(), value.trim());
                match key {
                    "lam_max" => {
                        lam_max = Some(value.parse::<f64>().map_err(|_| {
                            QciError::Parse(format!("line {}: bad lam_max", lineno + 1))
                        })?)
                    }
                    "grid_size" => {
                        grid_size = value.parse().map_err(|_| {
                            QciError::Parse(format!("line {}: bad grid_size", lineno + 1))
                        })?
                    }
                    "channel_range" => {
                        let mut it = value.split_whitespace();
                        let lo: i64 = it
                            .next()
                            .and_then(|s| s.parse().ok())
                            .ok_or_else(|| QciError::Parse("bad channel_range".into()))?;
                        let hi: i64 = it
                            .next()
                            .and_then(|s| s.parse().ok())
                            .ok_or_else(|| QciError::Parse("bad channel_range".into()))?;
                        channel_range = Some((lo, hi));
                    }
                    "radial_x0" => {
                        radial_x0 = value
                            .parse()
                            .map_err(|_| QciError::Parse("bad radial_x0".into()))?
                    }
                    "radial_h" => {
                        radial_h = value
                            .parse()
                            .map_err(|_| QciError::Parse("bad radial_h".into()))?
                    }
                    _ => {}
                }
            }
            continue;
        }
        if !saw_header {
            if line != "lam_1,lam_2,m,k,norm_cert" {
                return Err(QciError::Parse(format!(
                    "line {}: unexpected column header '{line}'",
                    lineno + 1
                )));
            }
            saw_header = true;
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 5 {
            return Err(QciError::Parse(format!(
                "line {}: expected 5 columns, got {}",
                lineno + 1,
                cols.len()
            )));
        }
        let parse_f = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| QciError::Parse(format!("line {}: bad float '{s}'", lineno + 1)))
        };
        let parse_i = |s: &str| {
            s.parse::<i64>()
                .map_err(|_| QciError::Parse(format!("line {}: bad integer '{s}'", lineno + 1)))
        };
        pairs.push(JointEigenpair {
            lam: vec![parse_f(cols[0])?, parse_f(cols[1])?],
            quantum_numbers: vec![parse_i(cols[2])?, parse_i(cols[3])?],
            radial_samples: Arc::from(Vec::new()),
            norm_cert: parse_f(cols[4])?,
        });
    }

    let lam_max =
        lam_max.ok_or_else(|| QciError::Parse("table missing '# lam_max = …'".into()))?;

    if let Some(blob) = blob {
        attach_blob(&mut pairs, blob)?;
    }

    Ok(JointSpectrum {
        system,
        pairs,
        lam_max,
        channel_range,
        grid_size,
        radial_x0,
        radial_h,
    })
}

fn attach_blob(pairs: &mut [JointEigenpair], blob: &[u8]) -> Result<()> {
    let mut cursor = 0usize;
    let take = |cursor: &mut usize, n: usize| -> Result<Vec<u8>> {
        if *cursor + n > blob.len() {
            return Err(QciError::Parse("radial blob truncated".into()));
        }
        let out = blob[*cursor..*cursor + n].to_vec();
        *cursor += n;
        Ok(out)
    };
    let magic = take(&mut cursor, 8)?;
    if magic != BLOB_MAGIC {
        return Err(QciError::Parse("radial blob has wrong magic".into()));
    }
    let count = u64::from_le_bytes(take(&mut cursor, 8)?.try_into().unwrap()) as usize;
    use std::collections::HashMap;
    let mut index: HashMap<(i64, i64), usize> = HashMap::new();
    for (i, p) in pairs.iter().enumerate() {
        index.insert((p.quantum_numbers[0], p.quantum_numbers[1]), i);
    }
    for _ in 0..count {
        let m = i64::from_le_bytes(take(&mut cursor, 8)?.try_into().unwrap());
        let k = i64::from_le_bytes(take(&mut cursor, 8)?.try_into().unwrap());
        let len = u64::from_le_bytes(take(&mut cursor, 8)?.try_into().unwrap()) as usize;
        let bytes = take(&mut cursor, 8 * len)?;
        let samples: Vec<f64> = bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        let idx = index.get(&(m, k)).copied().ok_or_else(|| {
            QciError::Parse(format!("radial blob references unknown pair ({m}, {k})"))
        })?;
        pairs[idx].radial_samples = Arc::from(samples);
    }
    Ok(())
}
