//! On-disk formats: JSON for frames and operators (complex entries as
//! `[re, im]` pairs, real entries as bare numbers), CSV for measurement
//! records (one value per line, optional header `a`).
//!
//! JSON numbers are emitted in the shortest form that parses back to the
//! identical double, so serialize/parse round-trips are bit-exact for finite
//! values; NaN and infinity are rejected on both sides.

use nalgebra::{Complex, DMatrix};
use serde::{Deserialize, Serialize};

use qdet::{Frame, FrameVector, MeasurementRecord, ScalarField, SelfAdjointOperator};

use crate::CliError;

type C64 = Complex<f64>;

/// One matrix/vector entry: a bare number in real files, an `[re, im]` pair
/// in complex files.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntryRepr {
    Real(f64),
    Complex([f64; 2]),
}

impl EntryRepr {
    fn to_scalar(self, field: ScalarField, what: &str) -> Result<C64, CliError> {
        match (self, field) {
            (EntryRepr::Real(x), _) => Ok(C64::new(x, 0.0)),
            (EntryRepr::Complex(p), ScalarField::Complex) => Ok(C64::new(p[0], p[1])),
            (EntryRepr::Complex(_), ScalarField::Real) => Err(CliError::new(format!(
                "{what}: real file contains a complex [re, im] pair"
            ))),
        }
    }

    fn from_scalar(z: C64, field: ScalarField) -> Self {
        match field {
            ScalarField::Real => EntryRepr::Real(z.re),
            ScalarField::Complex => EntryRepr::Complex([z.re, z.im]),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FrameFile {
    pub field: ScalarField,
    pub dim: usize,
    pub vectors: Vec<Vec<EntryRepr>>,
}

impl FrameFile {
    pub fn from_frame(frame: &Frame) -> Self {
        FrameFile {
            field: frame.field(),
            dim: frame.dim(),
            vectors: frame
                .vectors()
                .iter()
                .map(|v| {
                    v.entries()
                        .iter()
                        .map(|&z| EntryRepr::from_scalar(z, frame.field()))
                        .collect()
                })
                .collect(),
        }
    }

    pub fn into_frame(self) -> Result<Frame, CliError> {
        let vectors = self
            .vectors
            .iter()
            .enumerate()
            .map(|(k, row)| {
                if row.len() != self.dim {
                    return Err(CliError::new(format!(
                        "vector {k} has {} entries, dim is {}",
                        row.len(),
                        self.dim
                    )));
                }
                let entries = row
                    .iter()
                    .map(|e| e.to_scalar(self.field, &format!("vector {k}")))
                    .collect::<Result<Vec<_>, _>>()?;
                FrameVector::new(self.field, entries).map_err(CliError::from)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Frame::new(self.field, vectors).map_err(CliError::from)
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct OperatorFile {
    pub field: ScalarField,
    pub dim: usize,
    pub entries: Vec<Vec<EntryRepr>>,
}

impl OperatorFile {
    pub fn from_operator(op: &SelfAdjointOperator) -> Self {
        OperatorFile {
            field: op.field(),
            dim: op.dim(),
            entries: (0..op.dim())
                .map(|i| {
                    (0..op.dim())
                        .map(|j| EntryRepr::from_scalar(op.entry(i, j), op.field()))
                        .collect()
                })
                .collect(),
        }
    }

    pub fn into_operator(self) -> Result<SelfAdjointOperator, CliError> {
        if self.entries.len() != self.dim {
            return Err(CliError::new(format!(
                "operator has {} rows, dim is {}",
                self.entries.len(),
                self.dim
            )));
        }
        let mut m = DMatrix::<C64>::zeros(self.dim, self.dim);
        for (i, row) in self.entries.iter().enumerate() {
            if row.len() != self.dim {
                return Err(CliError::new(format!("operator row {i} has {} entries", row.len())));
            }
            for (j, e) in row.iter().enumerate() {
                m[(i, j)] = e.to_scalar(self.field, &format!("entry ({i},{j})"))?;
            }
        }
        SelfAdjointOperator::new_strict(self.field, m, 1e-8).map_err(CliError::from)
    }
}

pub fn read_frame(path: &std::path::Path) -> Result<Frame, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::new(format!("cannot read {}: {e}", path.display())))?;
    let file: FrameFile = serde_json::from_str(&text)
        .map_err(|e| CliError::new(format!("cannot parse {}: {e}", path.display())))?;
    file.into_frame()
}

pub fn frame_json(frame: &Frame) -> String {
    serde_json::to_string_pretty(&FrameFile::from_frame(frame)).expect("frame serializes")
}

pub fn read_operator(path: &std::path::Path) -> Result<SelfAdjointOperator, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::new(format!("cannot read {}: {e}", path.display())))?;
    let file: OperatorFile = serde_json::from_str(&text)
        .map_err(|e| CliError::new(format!("cannot parse {}: {e}", path.display())))?;
    file.into_operator()
}

/// Parse a measurement CSV: one real value per line, optional header `a`.
pub fn read_measurements(path: &std::path::Path) -> Result<MeasurementRecord, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::new(format!("cannot read {}: {e}", path.display())))?;
    let mut values = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (idx == 0 && line == "a") {
            continue;
        }
        let v: f64 = line
            .parse()
            .map_err(|e| CliError::new(format!("{}:{}: {e}", path.display(), idx + 1)))?;
        values.push(v);
    }
    MeasurementRecord::new(values).map_err(CliError::from)
}

pub fn measurements_csv(record: &MeasurementRecord) -> String {
    let mut out = String::from("a\n");
    for v in record.values() {
        // Display emits the shortest digits that round-trip the double.
        out.push_str(&format!("{v}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frame_json_roundtrip_is_bit_exact() {
        for (field, seed) in [(ScalarField::Real, 1u64), (ScalarField::Complex, 2)] {
            let frame = qdet::construct::random_frame(7, 4, field, seed).unwrap();
            let json = frame_json(&frame);
            let parsed: FrameFile = serde_json::from_str(&json).unwrap();
            let back = parsed.into_frame().unwrap();
            assert_eq!(back.dim(), frame.dim());
            assert_eq!(back.len(), frame.len());
            for (a, b) in frame.vectors().iter().zip(back.vectors()) {
                for (x, y) in a.entries().iter().zip(b.entries()) {
                    assert_eq!(x.re.to_bits(), y.re.to_bits());
                    assert_eq!(x.im.to_bits(), y.im.to_bits());
                }
            }
        }
    }

    #[test]
    fn measurement_csv_roundtrip_is_bit_exact() {
        let record = MeasurementRecord::new(vec![
            0.1 + 0.2,
            -3.972049603941502e-12,
            5.0,
            f64::MIN_POSITIVE,
        ])
        .unwrap();
        let csv = measurements_csv(&record);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.csv");
        std::fs::write(&path, csv).unwrap();
        let back = read_measurements(&path).unwrap();
        assert_eq!(back.len(), record.len());
        for (x, y) in record.values().iter().zip(back.values()) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }

    #[test]
    fn json_rejects_non_finite() {
        let text = r#"{"field":"real","dim":1,"vectors":[[NaN]]}"#;
        assert!(serde_json::from_str::<FrameFile>(text).is_err());
    }

    #[test]
    fn real_file_rejects_complex_pair() {
        let text = r#"{"field":"real","dim":1,"vectors":[[[1.0,2.0]]]}"#;
        let file: FrameFile = serde_json::from_str(text).unwrap();
        assert!(file.into_frame().is_err());
    }

    #[test]
    fn operator_file_rejects_asymmetry() {
        let text = r#"{"field":"real","dim":2,"entries":[[1.0,2.0],[0.0,1.0]]}"#;
        let file: OperatorFile = serde_json::from_str(text).unwrap();
        assert!(file.into_operator().is_err());
    }
}
