//! Headerless numeric CSV files: matrices, masks, node values and output
//! tables.

use std::path::Path;

use krlab_core::RealMatrix;

use crate::RunError;

fn reader(path: &Path) -> Result<csv::Reader<std::fs::File>, RunError> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| RunError::Config(format!("cannot open {}: {e}", path.display())))
}

fn rows(path: &Path) -> Result<Vec<Vec<f64>>, RunError> {
    let mut out = Vec::new();
    for (line, rec) in reader(path)?.records().enumerate() {
        let rec = rec.map_err(|e| RunError::Config(format!("{}: {e}", path.display())))?;
        let row = rec
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|_| RunError::Config(format!("{}:{}: not a number: {f:?}", path.display(), line + 1)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        out.push(row);
    }
    Ok(out)
}

pub fn read_matrix(path: &Path) -> Result<RealMatrix, RunError> {
    let r = rows(path)?;
    RealMatrix::from_rows(&r).map_err(|e| RunError::Config(format!("{}: {e}", path.display())))
}

/// All values of the file in row-major order.
pub fn read_values(path: &Path) -> Result<Vec<f64>, RunError> {
    Ok(rows(path)?.into_iter().flatten().collect())
}

pub fn read_mask(path: &Path) -> Result<Vec<bool>, RunError> {
    read_values(path)?
        .into_iter()
        .map(|v| match v {
            0.0 => Ok(false),
            1.0 => Ok(true),
            x => Err(RunError::Config(format!("{}: mask entries must be 0 or 1, found {x}", path.display()))),
        })
        .collect()
}

/// Same spelling as the JSON reports, including `inf`, `-inf` and `nan`.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:.16e}")
    }
}

/// Writes rows of floats with 17 significant digits and an optional header.
pub fn write_table(path: &Path, header: Option<&[&str]>, rows: &[Vec<f64>]) -> Result<(), RunError> {
    let mut w = csv::WriterBuilder::new().from_path(path).map_err(|e| RunError::Io(e.to_string()))?;
    if let Some(h) = header {
        w.write_record(h).map_err(|e| RunError::Io(e.to_string()))?;
    }
    for r in rows {
        w.write_record(r.iter().map(|v| format_float(*v))).map_err(|e| RunError::Io(e.to_string()))?;
    }
    w.flush().map_err(|e| RunError::Io(e.to_string()))
}
