//! CSV ingestion: two-file mode (one value column per file) and single-file
//! mode (a group column with exactly two labels plus a value column).

use crate::CliError;
use std::path::Path;

#[derive(Debug, Clone)]
pub struct CsvOptions {
    pub delimiter: u8,
    pub has_header: bool,
    /// Skip rows whose value fails numeric parsing instead of erroring.
    pub skip_bad: bool,
}

pub struct LoadedData {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub group_x_label: Option<String>,
    pub group_y_label: Option<String>,
    pub skipped_rows: usize,
}

/// Column addressed by header name, or by 0-based index when the file has
/// no header row.
fn resolve_column(
    headers: Option<&csv::StringRecord>,
    spec: Option<&str>,
    default_index: usize,
    what: &str,
) -> Result<usize, CliError> {
    match (headers, spec) {
        (_, None) => Ok(default_index),
        (Some(h), Some(name)) => h
            .iter()
            .position(|c| c == name)
            .or_else(|| name.parse::<usize>().ok().filter(|&i| i < h.len()))
            .ok_or_else(|| CliError::data(format!("{what} column {name:?} not found"))),
        (None, Some(name)) => name.parse::<usize>().map_err(|_| {
            CliError::data(format!(
                "no header row: {what} column must be an index, got {name:?}"
            ))
        }),
    }
}

fn open_reader(path: &Path, opts: &CsvOptions) -> Result<csv::Reader<std::fs::File>, CliError> {
    csv::ReaderBuilder::new()
        .delimiter(opts.delimiter)
        .has_headers(opts.has_header)
        .flexible(false)
        .from_path(path)
        .map_err(|e| CliError::data(format!("cannot read {}: {e}", path.display())))
}

/// Reads one value column from one file.
pub fn read_values(
    path: &Path,
    value_col: Option<&str>,
    opts: &CsvOptions,
) -> Result<(Vec<f64>, usize), CliError> {
    let mut reader = open_reader(path, opts)?;
    let headers = if opts.has_header {
        Some(
            reader
                .headers()
                .map_err(|e| CliError::data(e.to_string()))?
                .clone(),
        )
    } else {
        None
    };
    let col = resolve_column(headers.as_ref(), value_col, 0, "value")?;

    let mut values = Vec::new();
    let mut skipped = 0_usize;
    for (row_idx, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
        let raw = record.get(col).ok_or_else(|| {
            CliError::data(format!(
                "{}: row {} has no column {col}",
                path.display(),
                row_idx + 1
            ))
        })?;
        match raw.trim().parse::<f64>() {
            Ok(v) => values.push(v),
            Err(_) if opts.skip_bad => skipped += 1,
            Err(_) => {
                return Err(CliError::data(format!(
                    "{}: row {} value {raw:?} is not numeric (use --skip-bad to drop such rows)",
                    path.display(),
                    row_idx + 1
                )))
            }
        }
    }
    Ok((values, skipped))
}

/// Reads a grouped file into the two samples. With explicit labels, rows
/// with other labels are ignored; otherwise the file must contain exactly
/// two distinct labels and they are assigned in order of first appearance.
pub fn read_grouped(
    path: &Path,
    group_col: &str,
    value_col: &str,
    label_x: Option<&str>,
    label_y: Option<&str>,
    opts: &CsvOptions,
) -> Result<LoadedData, CliError> {
    let mut reader = open_reader(path, opts)?;
    let headers = if opts.has_header {
        Some(
            reader
                .headers()
                .map_err(|e| CliError::data(e.to_string()))?
                .clone(),
        )
    } else {
        None
    };
    let gcol = resolve_column(headers.as_ref(), Some(group_col), 0, "group")?;
    let vcol = resolve_column(headers.as_ref(), Some(value_col), 1, "value")?;

    let mut rows: Vec<(String, f64)> = Vec::new();
    let mut skipped = 0_usize;
    for (row_idx, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
        let group = record
            .get(gcol)
            .ok_or_else(|| CliError::data(format!("row {} has no group column", row_idx + 1)))?
            .trim()
            .to_string();
        let raw = record
            .get(vcol)
            .ok_or_else(|| CliError::data(format!("row {} has no value column", row_idx + 1)))?;
        match raw.trim().parse::<f64>() {
            Ok(v) => rows.push((group, v)),
            Err(_) if opts.skip_bad => skipped += 1,
            Err(_) => {
                return Err(CliError::data(format!(
                    "{}: row {} value {raw:?} is not numeric (use --skip-bad to drop such rows)",
                    path.display(),
                    row_idx + 1
                )))
            }
        }
    }

    let (lx, ly) = match (label_x, label_y) {
        (Some(a), Some(b)) => (a.to_string(), b.to_string()),
        (None, None) => {
            let mut seen: Vec<String> = Vec::new();
            for (g, _) in &rows {
                if !seen.contains(g) {
                    seen.push(g.clone());
                }
            }
            if seen.len() != 2 {
                return Err(CliError::data(format!(
                    "group column {group_col:?} has {} distinct labels, need exactly 2 \
                     (or pass --group-x/--group-y)",
                    seen.len()
                )));
            }
            (seen[0].clone(), seen[1].clone())
        }
        _ => {
            return Err(CliError::usage(
                "--group-x and --group-y must be given together".to_string(),
            ))
        }
    };

    let x: Vec<f64> = rows
        .iter()
        .filter(|(g, _)| *g == lx)
        .map(|(_, v)| *v)
        .collect();
    let y: Vec<f64> = rows
        .iter()
        .filter(|(g, _)| *g == ly)
        .map(|(_, v)| *v)
        .collect();
    if x.is_empty() || y.is_empty() {
        return Err(CliError::data(format!(
            "no rows for group {:?}",
            if x.is_empty() { &lx } else { &ly }
        )));
    }
    Ok(LoadedData {
        x,
        y,
        group_x_label: Some(lx),
        group_y_label: Some(ly),
        skipped_rows: skipped,
    })
}

/// Parses a generator spec of the form `normal(m,s)`,
/// `discretized-normal(m,s,step)`, `uniform(lo,hi)` or `point-mass(v)`.
pub fn parse_generator(spec: &str) -> Result<wmw_core::Generator, CliError> {
    let spec = spec.trim();
    let (name, rest) = spec
        .split_once('(')
        .ok_or_else(|| CliError::usage(format!("bad generator spec {spec:?}")))?;
    let args = rest
        .strip_suffix(')')
        .ok_or_else(|| CliError::usage(format!("bad generator spec {spec:?}")))?;
    let nums: Vec<f64> = args
        .split(',')
        .map(|a| a.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::usage(format!("bad generator arguments in {spec:?}")))?;
    let wrong_arity = |n: usize| CliError::usage(format!("generator {name:?} takes {n} arguments"));
    match (name.trim(), nums.as_slice()) {
        ("normal", [mean, sd]) => Ok(wmw_core::Generator::Normal {
            mean: *mean,
            sd: *sd,
        }),
        ("normal", _) => Err(wrong_arity(2)),
        ("discretized-normal", [mean, sd, step]) => Ok(wmw_core::Generator::DiscretizedNormal {
            mean: *mean,
            sd: *sd,
            step: *step,
        }),
        ("discretized-normal", _) => Err(wrong_arity(3)),
        ("uniform", [lo, hi]) => Ok(wmw_core::Generator::Uniform { lo: *lo, hi: *hi }),
        ("uniform", _) => Err(wrong_arity(2)),
        ("point-mass", [at]) => Ok(wmw_core::Generator::PointMass { at: *at }),
        ("point-mass", _) => Err(wrong_arity(1)),
        _ => Err(CliError::usage(format!("unknown generator {name:?}"))),
    }
}
