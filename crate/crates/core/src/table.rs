//! Column-oriented numeric tables read from CSV.

use std::collections::HashSet;
use std::fs::File;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadOptions {
    /// Cells equal to one of these (after trimming) are missing.
    pub missing_tokens: Vec<String>,
    /// Reject cells that are neither numeric nor a missing token. When
    /// false they are treated as missing too.
    pub strict: bool,
}

impl Default for LoadOptions {
    fn default() -> Self {
        Self {
            missing_tokens: vec![String::new(), "NA".into(), "NaN".into()],
            strict: true,
        }
    }
}

/// Named columns of optional values, all the same length.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnTable<T> {
    names: Vec<String>,
    columns: Vec<Vec<Option<T>>>,
}

impl<T: Scalar> ColumnTable<T> {
    pub fn new(names: Vec<String>, columns: Vec<Vec<Option<T>>>) -> Result<Self> {
        if names.len() != columns.len() {
            return Err(Error::LengthMismatch {
                left: names.len(),
                right: columns.len(),
            });
        }
        let mut seen = HashSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(Error::InvalidParameter(format!("duplicate column name '{name}'")));
            }
        }
        if let Some(first) = columns.first() {
            for c in &columns {
                if c.len() != first.len() {
                    return Err(Error::LengthMismatch {
                        left: first.len(),
                        right: c.len(),
                    });
                }
            }
        }
        if columns.iter().flatten().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { names, columns })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn column_count(&self) -> usize {
        self.names.len()
    }

    pub fn row_count(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    pub fn column(&self, index: usize) -> &[Option<T>] {
        &self.columns[index]
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn column_by_name(&self, name: &str) -> Option<&[Option<T>]> {
        self.column_index(name).map(|i| self.column(i))
    }

    pub fn missing_count(&self) -> usize {
        self.columns.iter().flatten().filter(|v| v.is_none()).count()
    }

    /// Rows where both columns are present.
    pub fn complete_pairs(&self, a: usize, b: usize) -> (Vec<T>, Vec<T>) {
        self.columns[a]
            .iter()
            .zip(&self.columns[b])
            .filter_map(|(x, y)| Some(((*x)?, (*y)?)))
            .unzip()
    }

    pub fn overlap(&self, a: usize, b: usize) -> usize {
        self.columns[a]
            .iter()
            .zip(&self.columns[b])
            .filter(|(x, y)| x.is_some() && y.is_some())
            .count()
    }
}

/// Reads a headed CSV file into a [`ColumnTable`].
pub fn load_csv<T: Scalar>(path: impl AsRef<Path>, options: &LoadOptions) -> Result<ColumnTable<T>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_csv(file, path, options)
}

/// Same as [`load_csv`] for any reader; `label` names the source in errors.
pub fn read_csv<T: Scalar, R: Read>(reader: R, label: impl AsRef<Path>, options: &LoadOptions) -> Result<ColumnTable<T>> {
    let label = label.as_ref().to_path_buf();
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(reader);
    let mut records = rdr.records();

    let header = match records.next() {
        Some(rec) => rec.map_err(|e| csv_error(&label, e))?,
        None => {
            return Err(Error::Format {
                path: label,
                message: "missing header row".into(),
            })
        }
    };
    let names: Vec<String> = header.iter().map(|h| h.trim().to_string()).collect();
    let mut seen = HashSet::new();
    for name in &names {
        if !seen.insert(name.as_str()) {
            return Err(Error::Parse {
                path: label,
                line: 1,
                message: format!("duplicate column name '{name}'"),
            });
        }
    }

    let mut columns: Vec<Vec<Option<T>>> = vec![Vec::new(); names.len()];
    for rec in records {
        let rec = rec.map_err(|e| csv_error(&label, e))?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() == 1 && rec.get(0) == Some("") && names.len() > 1 {
            continue;
        }
        if rec.len() != names.len() {
            return Err(Error::Parse {
                path: label,
                line,
                message: format!("row has {} fields, header has {}", rec.len(), names.len()),
            });
        }
        for (col, cell) in rec.iter().enumerate() {
            let cell = cell.trim();
            let value = if options.missing_tokens.iter().any(|t| t == cell) {
                None
            } else {
                match cell.parse::<f64>() {
                    Ok(v) if v.is_finite() => Some(T::lit(v)),
                    _ if !options.strict => None,
                    Ok(_) => {
                        return Err(Error::Parse {
                            path: label,
                            line,
                            message: format!("non-finite value '{cell}' in column '{}'", names[col]),
                        })
                    }
                    Err(_) => {
                        return Err(Error::Parse {
                            path: label,
                            line,
                            message: format!("non-numeric value '{cell}' in column '{}'", names[col]),
                        })
                    }
                }
            };
            columns[col].push(value);
        }
    }
    ColumnTable::new(names, columns)
}

fn csv_error(path: &Path, err: csv::Error) -> Error {
    let line = err.position().map_or(0, |p| p.line());
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: err.to_string(),
    }
}

/// Writes equal-length numeric columns as CSV with the shortest round-trip
/// representation of each value.
pub fn write_columns<T: Scalar, W: Write>(writer: W, names: &[&str], columns: &[&[T]]) -> Result<()> {
    write_columns_inner(writer, names, columns).map_err(|e| Error::Format {
        path: PathBuf::from("<output>"),
        message: e.to_string(),
    })
}

fn write_columns_inner<T: Scalar, W: Write>(writer: W, names: &[&str], columns: &[&[T]]) -> std::result::Result<(), csv::Error> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(writer);
    w.write_record(names)?;
    let rows = columns.first().map_or(0, |c| c.len());
    let mut record = Vec::with_capacity(columns.len());
    for r in 0..rows {
        record.clear();
        record.extend(columns.iter().map(|c| c[r].to_string()));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ColumnTable<f64>> {
        read_csv(text.as_bytes(), "test.csv", &LoadOptions::default())
    }

    #[test]
    fn reads_missing_tokens() {
        let t = parse("a,b\n1,2\nNA,4\n5,6\n").unwrap();
        assert_eq!(t.row_count(), 3);
        assert_eq!(t.column_count(), 2);
        assert_eq!(t.missing_count(), 1);
        assert_eq!(t.column_by_name("a").unwrap(), &[Some(1.0), None, Some(5.0)]);
        assert_eq!(t.complete_pairs(0, 1), (vec![1.0, 5.0], vec![2.0, 6.0]));
        assert_eq!(t.overlap(0, 1), t.overlap(1, 0));
    }

    #[test]
    fn blank_and_nan_cells() {
        let t = parse("a,b\n,2\nNaN,4\n").unwrap();
        assert_eq!(t.missing_count(), 2);
    }

    #[test]
    fn ragged_row_names_line() {
        let err = parse("a,b\n1,2\n3\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("{other}"),
        }
        assert!(parse("a,b\n1,2\n3\n").unwrap_err().to_string().contains("line 3"));
    }

    #[test]
    fn duplicate_header_rejected() {
        assert!(parse("a,a\n1,2\n").unwrap_err().to_string().contains("duplicate"));
    }

    #[test]
    fn non_numeric_cells() {
        let err = parse("a,b\n1,x\n").unwrap_err().to_string();
        assert!(err.contains("line 2") && err.contains("'x'"), "{err}");
        let lenient = LoadOptions {
            strict: false,
            ..LoadOptions::default()
        };
        let t: ColumnTable<f64> = read_csv("a,b\n1,x\n".as_bytes(), "t", &lenient).unwrap();
        assert_eq!(t.missing_count(), 1);
        assert!(parse("a\ninf\n").is_err());
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(parse("").is_err());
        let t = parse("a,b\n").unwrap();
        assert_eq!(t.row_count(), 0);
    }

    #[test]
    fn unreadable_file_reports_path() {
        let err = load_csv::<f64>("/nonexistent/dir/file.csv", &LoadOptions::default()).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/dir/file.csv"));
    }

    #[test]
    fn write_then_read() {
        let x = [0.1, -2.5, 1e-9];
        let y = [3.0, 4.0, 5.0];
        let mut buf = Vec::new();
        write_columns(&mut buf, &["x", "y"], &[&x, &y]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("x,y\n") && !text.contains('\r'));
        let t = parse(&text).unwrap();
        assert_eq!(t.column(0), &x.map(Some));
    }
}
