//! JSON records for exact representations and hybrid transform values, and
//! CSV for vectorizations.

use ectcube_core::{Complex64, EctCurve, RadonRep};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "transform", rename_all = "lowercase")]
pub enum Record {
    Ect {
        direction: Vec<f64>,
        breakpoints: Vec<f64>,
        values: Vec<i64>,
    },
    Radon {
        direction: Vec<f64>,
        ordinary_breakpoints: Vec<f64>,
        cumulative: Vec<i64>,
        classical_dots: Vec<f64>,
        values_at_dots: Vec<i64>,
    },
    Ht {
        kernel: String,
        direction: Vec<f64>,
        /// `[re, im]`
        value: [f64; 2],
    },
}

impl Record {
    pub fn ect(direction: &[f64], curve: &EctCurve) -> Self {
        Record::Ect {
            direction: direction.to_vec(),
            breakpoints: curve.breakpoints().to_vec(),
            values: curve.values().to_vec(),
        }
    }

    pub fn radon(direction: &[f64], rep: &RadonRep) -> Self {
        Record::Radon {
            direction: direction.to_vec(),
            ordinary_breakpoints: rep.ordinary_breakpoints().to_vec(),
            cumulative: rep.cumulative().to_vec(),
            classical_dots: rep.classical_dots().to_vec(),
            values_at_dots: rep.values_at_dots().to_vec(),
        }
    }

    pub fn ht(kernel: &str, direction: &[f64], value: Complex64) -> Self {
        Record::Ht {
            kernel: kernel.to_owned(),
            direction: direction.to_vec(),
            value: [value.re, value.im],
        }
    }

    pub fn direction(&self) -> &[f64] {
        match self {
            Record::Ect { direction, .. }
            | Record::Radon { direction, .. }
            | Record::Ht { direction, .. } => direction,
        }
    }

    /// Rebuilds the curve of an `ect` record.
    pub fn to_ect(&self) -> Result<EctCurve> {
        match self {
            Record::Ect {
                breakpoints,
                values,
                ..
            } => Ok(EctCurve::from_parts(breakpoints.clone(), values.clone())?),
            _ => Err(Error::format("not an ECT record")),
        }
    }

    pub fn to_radon(&self) -> Result<RadonRep> {
        match self {
            Record::Radon {
                ordinary_breakpoints,
                cumulative,
                classical_dots,
                values_at_dots,
                ..
            } => Ok(RadonRep::from_parts(
                ordinary_breakpoints.clone(),
                cumulative.clone(),
                classical_dots.clone(),
                values_at_dots.clone(),
            )?),
            _ => Err(Error::format("not a Radon record")),
        }
    }
}

/// One JSON array holding a record per direction.
pub fn encode_records(records: &[Record]) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(records).expect("records serialize");
    out.push(b'\n');
    out
}

pub fn decode_records(bytes: &[u8]) -> Result<Vec<Record>> {
    serde_json::from_slice(bytes).map_err(|e| Error::format(format!("JSON: {e}")))
}

/// One row per direction.
pub fn encode_vectors(rows: &[Vec<i64>]) -> Result<Vec<u8>> {
    let mut writer = csv::WriterBuilder::new()
        .flexible(true)
        .from_writer(Vec::new());
    for row in rows {
        writer
            .write_record(row.iter().map(i64::to_string))
            .map_err(|e| Error::format(e.to_string()))?;
    }
    writer
        .into_inner()
        .map_err(|e| Error::format(e.to_string()))
}
