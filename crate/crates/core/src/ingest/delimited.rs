//! Delimited text files: one record per line with RFC-4180-style quoting,
//! a text column and a label column addressed by header name.

use std::path::Path;

use crate::error::{Error, Result};

/// A loaded text corpus with dense class indices.
#[derive(Debug, Clone)]
pub struct DelimitedData {
    pub corpus: Vec<String>,
    /// Class index per document, densely numbered in first-appearance order.
    pub labels: Vec<usize>,
    /// Original label strings, indexed by class index.
    pub label_names: Vec<String>,
}

pub fn load_delimited(
    path: &Path,
    text_column: &str,
    label_column: &str,
    delimiter: u8,
) -> Result<DelimitedData> {
    let display = path.display().to_string();
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .flexible(false)
        .from_path(path)?;

    let headers = reader.headers()?.clone();
    let find = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::MissingColumn {
                path: display.clone(),
                column: name.to_string(),
            })
    };
    let text_idx = find(text_column)?;
    let label_idx = find(label_column)?;

    let mut corpus = Vec::new();
    let mut labels = Vec::new();
    let mut label_names: Vec<String> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| match e.position() {
            Some(pos) => Error::MalformedRow {
                path: display.clone(),
                line: pos.line(),
                detail: e.to_string(),
            },
            None => Error::Csv(e),
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let field = |idx: usize| -> Result<&str> {
            record.get(idx).ok_or_else(|| Error::MalformedRow {
                path: display.clone(),
                line,
                detail: format!("missing field {idx}"),
            })
        };
        corpus.push(field(text_idx)?.to_string());
        let label = field(label_idx)?;
        let class = match label_names.iter().position(|l| l == label) {
            Some(c) => c,
            None => {
                label_names.push(label.to_string());
                label_names.len() - 1
            }
        };
        labels.push(class);
    }
    Ok(DelimitedData {
        corpus,
        labels,
        label_names,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(content: &str) -> tempfile::NamedTempFile {
        let f = tempfile::NamedTempFile::new().unwrap();
        std::fs::write(f.path(), content).unwrap();
        f
    }

    #[test]
    fn labels_are_densely_indexed_in_first_appearance_order() {
        let f = write("label,text\nspam,buy now\nham,hello friend\nspam,free offer\n");
        let data = load_delimited(f.path(), "text", "label", b',').unwrap();
        assert_eq!(data.labels, vec![0, 1, 0]);
        assert_eq!(data.label_names, vec!["spam", "ham"]);
        assert_eq!(data.corpus[1], "hello friend");
    }

    #[test]
    fn quoted_fields_keep_the_delimiter() {
        let f = write("label,text\na,\"one, two\"\n");
        let data = load_delimited(f.path(), "text", "label", b',').unwrap();
        assert_eq!(data.corpus[0], "one, two");
    }

    #[test]
    fn missing_column_names_the_column() {
        let f = write("label,text\na,b\n");
        match load_delimited(f.path(), "body", "label", b',') {
            Err(Error::MissingColumn { column, .. }) => assert_eq!(column, "body"),
            other => panic!("expected MissingColumn, got {other:?}"),
        }
    }

    #[test]
    fn malformed_row_reports_line_number() {
        let f = write("label,text\na,b\nc,d,e\n");
        match load_delimited(f.path(), "text", "label", b',') {
            Err(Error::MalformedRow { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected MalformedRow, got {other:?}"),
        }
    }

    #[test]
    fn tab_delimiter_works() {
        let f = write("label\ttext\nx\thello world\n");
        let data = load_delimited(f.path(), "text", "label", b'\t').unwrap();
        assert_eq!(data.corpus, vec!["hello world"]);
    }
}
