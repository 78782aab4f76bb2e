//! CSV dataset format: one row per sample, numeric feature columns, and an
//! optional trailing `label` column named by the header.

use std::path::Path;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::types::Dataset;

/// Reads a dataset. With `has_header`, a final column literally named
/// `label` is split off as ground truth.
pub fn read_csv(path: &Path, has_header: bool) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new().has_headers(has_header).from_path(path)?;
    let mut label_col = None;
    if has_header {
        let headers = reader.headers()?.clone();
        if let Some(last) = headers.iter().last() {
            if last.trim().eq_ignore_ascii_case("label") {
                label_col = Some(headers.len() - 1);
            }
        }
    }

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut labels: Vec<i64> = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let mut row = Vec::with_capacity(record.len());
        for (col, field) in record.iter().enumerate() {
            if Some(col) == label_col {
                let lab: i64 = field.trim().parse().map_err(|_| {
                    Error::Config(format!("row {line}: non-integer label {field:?}"))
                })?;
                labels.push(lab);
            } else {
                let v: f64 = field.trim().parse().map_err(|_| {
                    Error::Config(format!("row {line}: non-numeric cell {field:?}"))
                })?;
                row.push(v);
            }
        }
        if let Some(prev) = rows.last() {
            if prev.len() != row.len() {
                return Err(Error::Config(format!("row {line}: ragged column count")));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Config("csv contains no data rows".into()));
    }
    let p = rows[0].len();
    let flat: Vec<f64> = rows.into_iter().flatten().collect();
    let n = flat.len() / p;
    let samples = Array2::from_shape_vec((n, p), flat)
        .map_err(|e| Error::Config(format!("bad csv shape: {e}")))?;
    Dataset::new(samples, if label_col.is_some() { Some(labels) } else { None })
}

/// Writes a dataset, emitting a header (`f0..f{p-1}[,label]`) and the label
/// column when labels exist.
pub fn write_csv(dataset: &Dataset, path: &Path) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    let p = dataset.p();
    let mut header: Vec<String> = (0..p).map(|k| format!("f{k}")).collect();
    if dataset.labels().is_some() {
        header.push("label".into());
    }
    writer.write_record(&header)?;
    for j in 0..dataset.n() {
        let mut record: Vec<String> =
            dataset.samples().row(j).iter().map(|v| format!("{v:?}")).collect();
        if let Some(labels) = dataset.labels() {
            record.push(labels[j].to_string());
        }
        writer.write_record(&record)?;
    }
    writer.flush()?;
    Ok(())
}
