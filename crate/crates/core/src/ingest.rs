//! Tabular ingest: delimited text into a column-oriented [`FeatureTable`],
//! discrete/continuous classification, and null handling.
//!
//! Cells are parsed locale-independently: a token is numeric only when it is
//! a finite decimal or scientific literal (`"1.5"`, `"-2e3"`), so `"1,5"` stays
//! a category token. Once a column is classified as discrete its numbers are
//! re-tokenized by their canonical decimal form, so `"1"` and `"1.0"` become
//! the same category.

use std::collections::{BTreeMap, HashSet};
use std::fs::File;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Reserved token substituted for nulls under [`NullPolicy::NullCategory`].
pub const NULL_CATEGORY_TOKEN: &str = "⟂NULL⟂";

/// Default null tokens (compared case-insensitively after trimming).
pub const DEFAULT_NULL_TOKENS: [&str; 4] = ["", "NA", "NaN", "null"];

/// Default unique-count threshold separating discrete from continuous features.
pub const DEFAULT_DISCRETE_THRESHOLD: usize = 10;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot open {path}: {source}")]
    MissingFile {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("row {row} has {found} fields, header has {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("duplicate header name {0:?}")]
    DuplicateHeader(String),
    #[error("empty header name in column {0}")]
    EmptyHeader(usize),
    #[error("input has no header row")]
    NoHeader,
    #[error("input has a header but zero data rows")]
    NoRecords,
    #[error("malformed delimited input: {0}")]
    Malformed(#[from] csv::Error),
    #[error("policy {policy} cannot be applied to {kind} column {column:?}")]
    IncompatiblePolicy {
        column: String,
        kind: FeatureKind,
        policy: NullPolicy,
    },
    #[error("column {0:?} is entirely null; no fill value exists")]
    AllNull(String),
}

impl IngestError {
    /// Stable machine-readable identifier for the error variant.
    pub fn code(&self) -> &'static str {
        match self {
            IngestError::MissingFile { .. } => "missing_file",
            IngestError::RaggedRow { .. } => "ragged_row",
            IngestError::DuplicateHeader(_) => "duplicate_header",
            IngestError::EmptyHeader(_) => "empty_header",
            IngestError::NoHeader => "no_header",
            IngestError::NoRecords => "no_records",
            IngestError::Malformed(_) => "malformed",
            IngestError::IncompatiblePolicy { .. } => "incompatible_policy",
            IngestError::AllNull(_) => "all_null",
        }
    }
}

/// A single parsed cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Null,
    Number(f64),
    Token(String),
}

impl Cell {
    pub fn is_null(&self) -> bool {
        matches!(self, Cell::Null)
    }

    pub fn as_number(&self) -> Option<f64> {
        match self {
            Cell::Number(x) => Some(*x),
            _ => None,
        }
    }

    /// Category token for this cell; numbers use their canonical decimal form.
    pub fn token(&self) -> Option<String> {
        match self {
            Cell::Null => None,
            Cell::Number(x) => Some(canonical_number_token(*x)),
            Cell::Token(t) => Some(t.clone()),
        }
    }
}

/// Canonical decimal token for a number, with `-0` folded onto `0`.
pub fn canonical_number_token(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else {
        format!("{x}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureKind {
    Discrete,
    Continuous,
}

impl std::fmt::Display for FeatureKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FeatureKind::Discrete => "discrete",
            FeatureKind::Continuous => "continuous",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NullPolicy {
    #[default]
    DropPairwise,
    NullCategory,
    FillMin,
    FillMedian,
}

impl NullPolicy {
    pub fn name(&self) -> &'static str {
        match self {
            NullPolicy::DropPairwise => "drop-pairwise",
            NullPolicy::NullCategory => "null-category",
            NullPolicy::FillMin => "fill-min",
            NullPolicy::FillMedian => "fill-median",
        }
    }

    /// Whether the policy is defined for a column of the given kind.
    pub fn applies_to(&self, kind: FeatureKind) -> bool {
        match self {
            NullPolicy::DropPairwise => true,
            NullPolicy::NullCategory => kind == FeatureKind::Discrete,
            NullPolicy::FillMin | NullPolicy::FillMedian => kind == FeatureKind::Continuous,
        }
    }
}

impl std::fmt::Display for NullPolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for NullPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "drop-pairwise" => Ok(NullPolicy::DropPairwise),
            "null-category" => Ok(NullPolicy::NullCategory),
            "fill-min" => Ok(NullPolicy::FillMin),
            "fill-median" => Ok(NullPolicy::FillMedian),
            other => Err(format!(
                "unknown null policy {other:?} (expected drop-pairwise, null-category, fill-min or fill-median)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureColumn {
    pub name: String,
    pub kind: FeatureKind,
    pub values: Vec<Cell>,
    /// Distinct non-null values.
    pub n_unique: usize,
    /// Set when every cell is null.
    pub all_null: bool,
}

#[derive(Hash, PartialEq, Eq)]
enum UniqueKey<'a> {
    Num(u64),
    Tok(&'a str),
}

fn unique_key(cell: &Cell) -> Option<UniqueKey<'_>> {
    match cell {
        Cell::Null => None,
        // +0.0 folds -0.0 onto 0
        Cell::Number(x) => Some(UniqueKey::Num((*x + 0.0).to_bits())),
        Cell::Token(t) => Some(UniqueKey::Tok(t)),
    }
}

fn count_unique(values: &[Cell]) -> usize {
    values.iter().filter_map(unique_key).collect::<HashSet<_>>().len()
}

impl FeatureColumn {
    /// Build a column from raw cells; the kind starts as discrete until classified.
    pub fn new(name: impl Into<String>, values: Vec<Cell>) -> Self {
        let n_unique = count_unique(&values);
        let all_null = values.iter().all(Cell::is_null);
        FeatureColumn {
            name: name.into(),
            kind: FeatureKind::Discrete,
            values,
            n_unique,
            all_null,
        }
    }

    /// Convenience constructor for a continuous column (`None` = null).
    pub fn continuous(name: impl Into<String>, values: &[Option<f64>]) -> Self {
        let cells = values
            .iter()
            .map(|v| v.map_or(Cell::Null, Cell::Number))
            .collect();
        let mut col = FeatureColumn::new(name, cells);
        col.kind = FeatureKind::Continuous;
        col
    }

    /// Convenience constructor for a discrete column (`None` = null).
    pub fn discrete(name: impl Into<String>, values: &[Option<&str>]) -> Self {
        let cells = values
            .iter()
            .map(|v| v.map_or(Cell::Null, |t| Cell::Token(t.to_string())))
            .collect();
        FeatureColumn::new(name, cells)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn null_count(&self) -> usize {
        self.values.iter().filter(|c| c.is_null()).count()
    }

    fn non_null_numbers(&self) -> Vec<f64> {
        self.values.iter().filter_map(Cell::as_number).collect()
    }

    /// Assign `kind` and normalize cells to match it.
    pub fn set_kind(&mut self, kind: FeatureKind) {
        self.kind = kind;
        if kind == FeatureKind::Discrete {
            for cell in &mut self.values {
                if let Cell::Number(x) = cell {
                    *cell = Cell::Token(canonical_number_token(*x));
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTable {
    pub features: Vec<FeatureColumn>,
    pub n_records: usize,
}

impl FeatureTable {
    /// Assemble a table, checking that names are unique and non-empty and
    /// that every column has the same length.
    pub fn new(features: Vec<FeatureColumn>) -> Result<Self, IngestError> {
        let n_records = features.first().map_or(0, |c| c.len());
        let mut seen = HashSet::new();
        for (i, col) in features.iter().enumerate() {
            if col.name.is_empty() {
                return Err(IngestError::EmptyHeader(i));
            }
            if !seen.insert(col.name.as_str()) {
                return Err(IngestError::DuplicateHeader(col.name.clone()));
            }
            if col.len() != n_records {
                return Err(IngestError::RaggedRow {
                    row: col.len().min(n_records) + 1,
                    expected: n_records,
                    found: col.len(),
                });
            }
        }
        Ok(FeatureTable {
            features,
            n_records,
        })
    }

    pub fn n_features(&self) -> usize {
        self.features.len()
    }

    pub fn column(&self, name: &str) -> Option<&FeatureColumn> {
        self.features.iter().find(|c| c.name == name)
    }

    /// Classify every column against `threshold`.
    pub fn classify(&mut self, threshold: usize) {
        for col in &mut self.features {
            let kind = classify_feature(col, threshold);
            col.set_kind(kind);
        }
    }
}

#[derive(Debug, Clone)]
pub struct LoadOptions {
    pub delimiter: u8,
    pub null_tokens: Vec<String>,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions {
            delimiter: b',',
            null_tokens: DEFAULT_NULL_TOKENS.iter().map(|s| s.to_string()).collect(),
        }
    }
}

impl LoadOptions {
    fn is_null(&self, token: &str) -> bool {
        self.null_tokens
            .iter()
            .any(|t| t.trim().eq_ignore_ascii_case(token))
    }
}

/// Parse a cell: null token, finite numeric literal, or category token.
pub fn parse_cell(raw: &str, opts: &LoadOptions) -> Cell {
    let token = raw.trim();
    if opts.is_null(token) {
        return Cell::Null;
    }
    if looks_numeric(token) {
        if let Ok(x) = token.parse::<f64>() {
            if x.is_finite() {
                return Cell::Number(x);
            }
        }
    }
    Cell::Token(token.to_string())
}

// Rust's float parser also accepts "inf", "nan" and "infinity"; only plain
// decimal/scientific literals count as numbers here.
fn looks_numeric(token: &str) -> bool {
    let body = token.strip_prefix(['+', '-']).unwrap_or(token);
    body.starts_with(|c: char| c.is_ascii_digit() || c == '.')
        && body
            .chars()
            .all(|c| c.is_ascii_digit() || matches!(c, '.' | 'e' | 'E' | '+' | '-'))
}

/// Load a delimited file with a header row into a [`FeatureTable`].
///
/// Columns come back unclassified (kind discrete, numeric cells kept as
/// numbers); call [`FeatureTable::classify`] before use.
pub fn load_table(path: impl AsRef<Path>, opts: &LoadOptions) -> Result<FeatureTable, IngestError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| IngestError::MissingFile {
        path: path.display().to_string(),
        source,
    })?;
    read_table(file, opts)
}

/// Same as [`load_table`] over any reader.
pub fn read_table<R: Read>(reader: R, opts: &LoadOptions) -> Result<FeatureTable, IngestError> {
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(opts.delimiter)
        .has_headers(false)
        .flexible(true)
        .from_reader(reader);
    let mut records = rdr.records();
    let header = match records.next() {
        Some(h) => h?,
        None => return Err(IngestError::NoHeader),
    };
    let names: Vec<String> = header.iter().map(|h| h.trim().to_string()).collect();
    let mut seen = HashSet::new();
    for (i, name) in names.iter().enumerate() {
        if name.is_empty() {
            return Err(IngestError::EmptyHeader(i));
        }
        if !seen.insert(name.as_str()) {
            return Err(IngestError::DuplicateHeader(name.clone()));
        }
    }

    let mut columns: Vec<Vec<Cell>> = vec![Vec::new(); names.len()];
    for (i, record) in records.enumerate() {
        let record = record?;
        if record.len() != names.len() {
            return Err(IngestError::RaggedRow {
                row: i + 2,
                expected: names.len(),
                found: record.len(),
            });
        }
        for (col, raw) in columns.iter_mut().zip(record.iter()) {
            col.push(parse_cell(raw, opts));
        }
    }
    if columns.first().is_none_or(Vec::is_empty) {
        return Err(IngestError::NoRecords);
    }

    let features = names
        .into_iter()
        .zip(columns)
        .map(|(name, values)| FeatureColumn::new(name, values))
        .collect();
    FeatureTable::new(features)
}

/// Discrete when fewer than `threshold` distinct values; otherwise
/// continuous only if every non-null value is numeric.
pub fn classify_feature(column: &FeatureColumn, threshold: usize) -> FeatureKind {
    let n_unique = count_unique(&column.values);
    if n_unique < threshold {
        return FeatureKind::Discrete;
    }
    let all_numeric = column
        .values
        .iter()
        .all(|c| matches!(c, Cell::Null | Cell::Number(_)));
    if all_numeric {
        FeatureKind::Continuous
    } else {
        FeatureKind::Discrete
    }
}

/// Median as the mean of the two middle order statistics for even counts.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    Some(if sorted.len().is_multiple_of(2) {
        (sorted[mid - 1] + sorted[mid]) / 2.0
    } else {
        sorted[mid]
    })
}

/// Apply a null policy to a classified column. Never changes the record count.
pub fn apply_null_policy(
    column: &FeatureColumn,
    policy: NullPolicy,
) -> Result<FeatureColumn, IngestError> {
    if !policy.applies_to(column.kind) {
        return Err(IngestError::IncompatiblePolicy {
            column: column.name.clone(),
            kind: column.kind,
            policy,
        });
    }
    let mut out = column.clone();
    let fill = match policy {
        NullPolicy::DropPairwise => return Ok(out),
        NullPolicy::NullCategory => {
            if column.null_count() > 0 {
                for cell in &mut out.values {
                    if cell.is_null() {
                        *cell = Cell::Token(NULL_CATEGORY_TOKEN.to_string());
                    }
                }
                out.n_unique += 1;
                out.all_null = false;
            }
            return Ok(out);
        }
        NullPolicy::FillMin => {
            let nums = column.non_null_numbers();
            nums.iter().copied().reduce(f64::min)
        }
        NullPolicy::FillMedian => median(&column.non_null_numbers()),
    };
    let fill = fill.ok_or_else(|| IngestError::AllNull(column.name.clone()))?;
    for cell in &mut out.values {
        if cell.is_null() {
            *cell = Cell::Number(fill);
        }
    }
    out.n_unique = count_unique(&out.values);
    Ok(out)
}

/// Which policy applies to each column given a run-wide default and
/// explicit per-feature overrides.
pub fn resolve_policies(
    table: &FeatureTable,
    default: NullPolicy,
    overrides: &BTreeMap<String, NullPolicy>,
) -> Vec<NullPolicy> {
    table
        .features
        .iter()
        .map(|c| overrides.get(&c.name).copied().unwrap_or(default))
        .collect()
}
