//! CSV input: comma-separated, header row, empty field = missing.
//!
//! Numeric fields are parsed as `f64`. A binary or categorical column with any
//! non-numeric field is coded by label instead: its distinct labels, sorted,
//! become `0, 1, 2, ...`.

use std::collections::BTreeMap;
use std::path::Path;

use metalp::{DataType, Dataset, MixedColumn};

use crate::error::InputError;
use crate::schema::SchemaFile;

/// Reads the columns of `path` for which `keep` holds, typed by `schema`.
pub fn read_dataset(path: &Path, schema: &SchemaFile, keep: impl Fn(&str) -> bool) -> Result<Dataset, InputError> {
    let file = std::fs::File::open(path).map_err(|e| InputError::io(path, e))?;
    read_from(file, schema, keep)
}

pub fn read_from(
    input: impl std::io::Read,
    schema: &SchemaFile,
    keep: impl Fn(&str) -> bool,
) -> Result<Dataset, InputError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    schema.check_header(&header)?;

    let kept: Vec<usize> = (0..header.len()).filter(|&i| keep(&header[i])).collect();
    let mut raw: Vec<Vec<String>> = vec![Vec::new(); kept.len()];
    let mut lines: Vec<u64> = Vec::new();
    for record in reader.records() {
        let record = record?;
        lines.push(record.position().map_or(0, |p| p.line()));
        for (slot, &i) in raw.iter_mut().zip(&kept) {
            slot.push(record[i].to_string());
        }
    }

    let columns = kept
        .iter()
        .zip(raw)
        .map(|(&i, fields)| {
            let spec = schema.get(&header[i]).expect("header checked against schema");
            let values = parse_column(&spec.name, spec.kind, &fields, &lines)?;
            Ok(MixedColumn::new(spec.name.clone(), values, spec.kind)?)
        })
        .collect::<Result<Vec<_>, InputError>>()?;
    Ok(Dataset::new(columns)?)
}

fn parse_column(name: &str, kind: DataType, fields: &[String], lines: &[u64]) -> Result<Vec<Option<f64>>, InputError> {
    let numeric: Result<Vec<Option<f64>>, usize> = fields
        .iter()
        .enumerate()
        .map(|(row, f)| {
            if f.is_empty() {
                Ok(None)
            } else {
                f.parse::<f64>().map(Some).map_err(|_| row)
            }
        })
        .collect();
    match numeric {
        Ok(values) => Ok(values),
        Err(_) if matches!(kind, DataType::Binary | DataType::CategoricalOrdinal) => Ok(label_codes(fields)),
        Err(row) => Err(InputError::NotNumeric {
            column: name.to_string(),
            line: lines[row],
            value: fields[row].clone(),
        }),
    }
}

fn label_codes(fields: &[String]) -> Vec<Option<f64>> {
    let codes: BTreeMap<&str, f64> = {
        let mut labels: Vec<&str> = fields.iter().map(String::as_str).filter(|f| !f.is_empty()).collect();
        labels.sort_unstable();
        labels.dedup();
        labels.into_iter().enumerate().map(|(i, l)| (l, i as f64)).collect()
    };
    fields
        .iter()
        .map(|f| if f.is_empty() { None } else { Some(codes[f.as_str()]) })
        .collect()
}
