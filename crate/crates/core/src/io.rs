//! Cohort CSV files and generator config files.
//!
//! CSV layout: header `dmu_id,group,x1,...,xN,y1,...,yM`, one row per DMU,
//! plain decimal numbers, UTF-8. Numbers are written with Rust's shortest
//! round-trip formatting, so reading a written file reproduces the cohort
//! exactly.
//!
//! Config layout: one `key = value` pair per line, `#` starts a comment.
//! Keys: `n_inputs`, `n_outputs`, `seed`, `input_low`, `input_high`,
//! `technology_noise`, and one `group.<label> = <count>` line per group
//! (groups keep file order).

use std::io::{Read, Write};

use thiserror::Error;

use crate::domain::{validate_cohort, Cohort, CohortError, DmuRecord};
use crate::synth::GenSpec;

#[derive(Debug, Error)]
pub enum CsvError {
    #[error("empty file: expected header dmu_id,group,x1..xN,y1..yM")]
    Empty,
    #[error("bad header: {0}")]
    Header(String),
    #[error("row {row}: expected {expected} fields, found {found}")]
    FieldCount {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("row {row}, column {column}: cannot parse '{value}' as a number")]
    Number {
        row: usize,
        column: String,
        value: String,
    },
    #[error("row {row}{}: {source}", .column.as_ref().map(|c| format!(", column {c}")).unwrap_or_default())]
    Invalid {
        row: usize,
        column: Option<String>,
        source: CohortError,
    },
    #[error("no data rows")]
    NoRows,
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Parses the header into (N, M).
fn parse_header(fields: &csv::StringRecord) -> Result<(usize, usize), CsvError> {
    let cols: Vec<&str> = fields.iter().collect();
    if cols.len() < 4 || cols[0] != "dmu_id" || cols[1] != "group" {
        return Err(CsvError::Header(
            "must start with 'dmu_id,group' and list at least one x and one y column".into(),
        ));
    }
    let n = cols[2..].iter().take_while(|c| c.starts_with('x')).count();
    let m = cols.len() - 2 - n;
    for (i, c) in cols[2..2 + n].iter().enumerate() {
        if *c != format!("x{}", i + 1) {
            return Err(CsvError::Header(format!("expected 'x{}', found '{c}'", i + 1)));
        }
    }
    for (j, c) in cols[2 + n..].iter().enumerate() {
        if *c != format!("y{}", j + 1) {
            return Err(CsvError::Header(format!("expected 'y{}', found '{c}'", j + 1)));
        }
    }
    if n == 0 || m == 0 {
        return Err(CsvError::Header("need at least one x and one y column".into()));
    }
    Ok((n, m))
}

/// File line number of data record `index` (the header is line 1).
fn line_of(index: usize) -> usize {
    index + 2
}

/// Reads DMU records without checking cohort invariants.
pub fn read_records<R: Read>(reader: R) -> Result<(Vec<DmuRecord>, usize, usize), CsvError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(reader);
    let mut rows = rdr.records();
    let header = match rows.next() {
        None => return Err(CsvError::Empty),
        Some(h) => h?,
    };
    let (n, m) = parse_header(&header)?;
    let number = |row: usize, column: String, value: &str| {
        value.parse::<f64>().map_err(|_| CsvError::Number {
            row,
            column,
            value: value.to_string(),
        })
    };

    let mut records = Vec::new();
    for (index, rec) in rows.enumerate() {
        let rec = rec?;
        let row = line_of(index);
        if rec.len() != 2 + n + m {
            return Err(CsvError::FieldCount {
                row,
                expected: 2 + n + m,
                found: rec.len(),
            });
        }
        let inputs = (0..n)
            .map(|i| number(row, format!("x{}", i + 1), &rec[2 + i]))
            .collect::<Result<Vec<_>, _>>()?;
        let outputs = (0..m)
            .map(|j| number(row, format!("y{}", j + 1), &rec[2 + n + j]))
            .collect::<Result<Vec<_>, _>>()?;
        records.push(DmuRecord::new(&rec[0], &rec[1], inputs, outputs));
    }
    Ok((records, n, m))
}

/// Reads and validates a cohort. Validation failures are reported against
/// the offending file row and column.
pub fn read_cohort<R: Read>(reader: R) -> Result<Cohort, CsvError> {
    let (records, _, _) = read_records(reader)?;
    if records.is_empty() {
        return Err(CsvError::NoRows);
    }
    validate_cohort(records).map_err(|source| {
        let (index, column) = match &source {
            CohortError::NonPositiveInput { index, input, .. } => {
                (*index, Some(format!("x{}", input + 1)))
            }
            CohortError::InvalidOutput { index, output, .. } => {
                (*index, Some(format!("y{}", output + 1)))
            }
            CohortError::AllZeroOutputs { index, .. } => (*index, None),
            CohortError::EmptyId { index } => (*index, Some("dmu_id".into())),
            CohortError::DuplicateId { second, .. } => (*second, Some("dmu_id".into())),
            CohortError::DimensionMismatch { index, .. } => (*index, None),
            CohortError::EmptyCohort | CohortError::NoVariables { .. } => (0, None),
        };
        CsvError::Invalid {
            row: line_of(index),
            column,
            source,
        }
    })
}

pub fn read_cohort_file(path: &std::path::Path) -> Result<Cohort, CsvError> {
    read_cohort(std::fs::File::open(path)?)
}

pub fn write_cohort<W: Write>(cohort: &Cohort, writer: W) -> Result<(), CsvError> {
    let mut wtr = csv::Writer::from_writer(writer);
    let mut header = vec!["dmu_id".to_string(), "group".to_string()];
    header.extend((1..=cohort.n_inputs()).map(|i| format!("x{i}")));
    header.extend((1..=cohort.n_outputs()).map(|j| format!("y{j}")));
    wtr.write_record(&header)?;
    for dmu in cohort.dmus() {
        let mut row = vec![dmu.id.clone(), dmu.group.clone()];
        row.extend(dmu.inputs.iter().chain(&dmu.outputs).map(f64::to_string));
        wtr.write_record(&row)?;
    }
    wtr.flush()?;
    Ok(())
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected 'key = value'")]
    Syntax { line: usize },
    #[error("line {line}: unknown key '{key}'")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: invalid value '{value}' for '{key}'")]
    Value {
        line: usize,
        key: String,
        value: String,
    },
    #[error("missing required key '{0}'")]
    Missing(&'static str),
}

/// Parses a generator config. `seed` defaults to 0, the input range and
/// noise to the [`GenSpec`] defaults.
pub fn parse_gen_config(text: &str) -> Result<GenSpec, ConfigError> {
    let mut n_inputs = None;
    let mut n_outputs = None;
    let mut seed = 0u64;
    let (mut low, mut high) = GenSpec::DEFAULT_INPUT_RANGE;
    let mut noise = GenSpec::DEFAULT_NOISE;
    let mut groups = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or(ConfigError::Syntax { line })?;
        let bad = || ConfigError::Value {
            line,
            key: key.to_string(),
            value: value.to_string(),
        };
        match key {
            "n_inputs" => n_inputs = Some(value.parse::<usize>().map_err(|_| bad())?),
            "n_outputs" => n_outputs = Some(value.parse::<usize>().map_err(|_| bad())?),
            "seed" => seed = value.parse().map_err(|_| bad())?,
            "input_low" => low = value.parse().map_err(|_| bad())?,
            "input_high" => high = value.parse().map_err(|_| bad())?,
            "technology_noise" => noise = value.parse().map_err(|_| bad())?,
            _ => match key.strip_prefix("group.") {
                Some(label) if !label.is_empty() => {
                    groups.push((label.to_string(), value.parse().map_err(|_| bad())?));
                }
                _ => {
                    return Err(ConfigError::UnknownKey {
                        line,
                        key: key.to_string(),
                    })
                }
            },
        }
    }
    if groups.is_empty() {
        return Err(ConfigError::Missing("group.<label>"));
    }
    Ok(GenSpec {
        group_sizes: groups,
        n_inputs: n_inputs.ok_or(ConfigError::Missing("n_inputs"))?,
        n_outputs: n_outputs.ok_or(ConfigError::Missing("n_outputs"))?,
        seed,
        input_range: (low, high),
        technology_noise: noise,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "dmu_id,group,x1,x2,y1\nA,g,1,4,1\nB,g,4,1,1\nC,h,6,1,1\n";

    #[test]
    fn reads_sample() {
        let cohort = read_cohort(SAMPLE.as_bytes()).unwrap();
        assert_eq!(cohort.len(), 3);
        assert_eq!((cohort.n_inputs(), cohort.n_outputs()), (2, 1));
        assert_eq!(cohort.dmus()[2].inputs, vec![6.0, 1.0]);
    }

    #[test]
    fn write_is_bit_exact() {
        let cohort = read_cohort(SAMPLE.as_bytes()).unwrap();
        let mut out = Vec::new();
        write_cohort(&cohort, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), SAMPLE);
    }

    #[test]
    fn negative_input_names_cell() {
        let err = read_cohort("dmu_id,group,x1,y1\nA,g,1,1\nB,g,-2,1\n".as_bytes()).unwrap_err();
        assert_eq!(err.to_string(), "row 3, column x1: dmu #1 ('B') has non-positive input x1 = -2");
    }

    #[test]
    fn unparsable_number_names_cell() {
        let err = read_cohort("dmu_id,group,x1,y1\nA,g,1,abc\n".as_bytes()).unwrap_err();
        assert!(matches!(err, CsvError::Number { row: 2, ref column, .. } if column == "y1"));
    }

    #[test]
    fn header_errors() {
        assert!(matches!(read_cohort("".as_bytes()), Err(CsvError::Empty)));
        assert!(matches!(
            read_cohort("id,group,x1,y1\n".as_bytes()),
            Err(CsvError::Header(_))
        ));
        assert!(matches!(
            read_cohort("dmu_id,group,x2,y1\n".as_bytes()),
            Err(CsvError::Header(_))
        ));
        assert!(matches!(
            read_cohort("dmu_id,group,x1,x2\n".as_bytes()),
            Err(CsvError::Header(_))
        ));
        assert!(matches!(
            read_cohort("dmu_id,group,x1,y1\n".as_bytes()),
            Err(CsvError::NoRows)
        ));
    }

    #[test]
    fn duplicate_and_short_rows() {
        let err = read_cohort("dmu_id,group,x1,y1\nA,g,1,1\nA,g,2,1\n".as_bytes()).unwrap_err();
        assert!(matches!(err, CsvError::Invalid { row: 3, .. }));
        let err = read_cohort("dmu_id,group,x1,y1\nA,g,1\n".as_bytes()).unwrap_err();
        assert!(matches!(err, CsvError::FieldCount { row: 2, expected: 4, found: 3 }));
    }

    #[test]
    fn config_round_trip() {
        let spec = parse_gen_config(
            "# demo\nn_inputs = 3\nn_outputs = 2\nseed = 7\n\
             technology_noise = 0.1\ngroup.North = 12\ngroup.South = 8 # trailing\n",
        )
        .unwrap();
        assert_eq!(spec.group_sizes, vec![("North".into(), 12), ("South".into(), 8)]);
        assert_eq!((spec.n_inputs, spec.n_outputs, spec.seed), (3, 2, 7));
        assert_eq!(spec.technology_noise, 0.1);
        assert_eq!(spec.input_range, GenSpec::DEFAULT_INPUT_RANGE);
    }

    #[test]
    fn config_errors() {
        assert_eq!(
            parse_gen_config("n_inputs 3"),
            Err(ConfigError::Syntax { line: 1 })
        );
        assert!(matches!(
            parse_gen_config("colour = red"),
            Err(ConfigError::UnknownKey { line: 1, .. })
        ));
        assert!(matches!(
            parse_gen_config("n_inputs = three"),
            Err(ConfigError::Value { .. })
        ));
        assert_eq!(
            parse_gen_config("n_inputs = 1\nn_outputs = 1"),
            Err(ConfigError::Missing("group.<label>"))
        );
    }
}
