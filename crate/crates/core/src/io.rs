//! CSV datasets: numeric columns, an optional header, and an optional trailing
//! integer `label` column named in the header.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::data::Dataset;
use crate::error::{Result, SceError};

#[derive(Debug, Clone, PartialEq)]
pub struct LoadedData {
    pub dataset: Dataset,
    pub labels: Option<Vec<usize>>,
    pub header: Option<Vec<String>>,
}

fn io_err(path: &Path, source: std::io::Error) -> SceError {
    SceError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn load_csv(path: impl AsRef<Path>) -> Result<LoadedData> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    read_csv(file)
}

/// Rows and columns in errors are 1-based and count the header line.
pub fn read_csv<R: Read>(input: R) -> Result<LoadedData> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(input);
    let mut records = reader.records().enumerate().peekable();

    let mut header = None;
    if let Some((_, Ok(first))) = records.peek() {
        if first.iter().any(|f| f.parse::<f64>().is_err()) {
            header = Some(first.iter().map(str::to_string).collect::<Vec<_>>());
            records.next();
        }
    }
    let labelled = header
        .as_ref()
        .and_then(|h: &Vec<String>| h.last())
        .is_some_and(|l| l.eq_ignore_ascii_case("label"));

    let mut values = Vec::new();
    let mut labels = Vec::new();
    let mut width: Option<usize> = header.as_ref().map(Vec::len);
    let mut n = 0;
    for (idx, rec) in records {
        let row = idx + 1;
        let rec = rec.map_err(|e| SceError::Parse {
            row,
            col: 0,
            msg: e.to_string(),
        })?;
        if rec.len() == 1 && rec.get(0) == Some("") {
            continue;
        }
        let expected = *width.get_or_insert(rec.len());
        if rec.len() != expected {
            return Err(SceError::RaggedRows {
                row,
                expected,
                got: rec.len(),
            });
        }
        let features = if labelled { expected - 1 } else { expected };
        for (c, field) in rec.iter().enumerate() {
            let col = c + 1;
            if c == features {
                let l = field.parse::<usize>().map_err(|_| SceError::Parse {
                    row,
                    col,
                    msg: format!("label `{field}` is not a nonnegative integer"),
                })?;
                labels.push(l);
                continue;
            }
            let v = field.parse::<f64>().map_err(|_| SceError::Parse {
                row,
                col,
                msg: format!("`{field}` is not a number"),
            })?;
            if !v.is_finite() {
                return Err(SceError::NonFiniteValue { row, col });
            }
            values.push(v);
        }
        n += 1;
    }
    let d = width.map_or(0, |w| if labelled { w - 1 } else { w });
    Ok(LoadedData {
        dataset: Dataset::new(values, n, d)?,
        labels: labelled.then_some(labels),
        header,
    })
}

/// Writes coordinates with shortest round-trip formatting, so reloading yields
/// bit-identical values. Labels, when given, go in a trailing `label` column.
pub fn write_csv<W: Write>(dataset: &Dataset, labels: Option<&[usize]>, out: W) -> Result<()> {
    if let Some(l) = labels {
        if l.len() != dataset.n() {
            return Err(SceError::LabelLengthMismatch {
                expected: dataset.n(),
                got: l.len(),
            });
        }
    }
    let mut w = csv::Writer::from_writer(out);
    let wrap = |e: csv::Error| SceError::Parse {
        row: 0,
        col: 0,
        msg: e.to_string(),
    };
    let mut head: Vec<String> = (0..dataset.d()).map(|j| format!("x{j}")).collect();
    if labels.is_some() {
        head.push("label".into());
    }
    w.write_record(&head).map_err(wrap)?;
    for i in 0..dataset.n() {
        let mut rec: Vec<String> = dataset.point(i).iter().map(|v| format!("{v:?}")).collect();
        if let Some(l) = labels {
            rec.push(l[i].to_string());
        }
        w.write_record(&rec).map_err(wrap)?;
    }
    w.flush().map_err(|e| SceError::Parse {
        row: 0,
        col: 0,
        msg: e.to_string(),
    })
}

pub fn save_csv(path: impl AsRef<Path>, dataset: &Dataset, labels: Option<&[usize]>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    write_csv(dataset, labels, std::io::BufWriter::new(file))
}
