//! Labelled feature tables: CSV persistence, min-max normalisation and
//! seeded k-fold splits.
//!
//! # CSV layout
//!
//! UTF-8, LF line endings, no quoting. A mandatory header
//! `cx,cy,left_x,left_y,right_x,right_y,top_x,top_y,bottom_x,bottom_y,label`
//! is followed by one row per vector. An unlabelled row ends in an empty
//! field after the final comma. Labels may contain spaces but not commas or
//! line breaks.
//!
//! # Fold shuffling
//!
//! Splits are reproducible from the seed alone:
//!
//! 1. The generator is xoshiro256** whose 256-bit state is filled from the
//!    seed by four SplitMix64 outputs (increment `0x9E3779B97F4A7C15`,
//!    mixers `0xBF58476D1CE4E5B9` and `0x94D049BB133111EB`).
//! 2. Indices `0..n` are Fisher-Yates shuffled from the back: for
//!    `i = n-1 down to 1`, swap `i` with `j = (u * (i+1)) >> 64` where `u`
//!    is the next 64-bit output.
//! 3. Shuffled positions are cut into `k` contiguous blocks; the first
//!    `n mod k` blocks hold one extra row.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

use crate::error::{Error, Result};
use crate::features::{FeatureVector, FEATURE_LEN, FEATURE_NAMES};
use crate::scalar::Scalar;

pub const LABEL_COLUMN: &str = "label";

/// Ordered rows plus the distinct labels in first-appearance order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FeatureTable {
    rows: Vec<FeatureVector>,
    class_names: Vec<String>,
}

impl FeatureTable {
    pub fn new(rows: Vec<FeatureVector>) -> Self {
        let mut t = FeatureTable::default();
        for r in rows {
            t.push(r);
        }
        t
    }

    pub fn push(&mut self, row: FeatureVector) {
        if let Some(l) = &row.label {
            if !self.class_names.iter().any(|c| c == l) {
                self.class_names.push(l.clone());
            }
        }
        self.rows.push(row);
    }

    pub fn rows(&self) -> &[FeatureVector] {
        &self.rows
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_fully_labelled(&self) -> bool {
        self.rows.iter().all(|r| r.label.is_some())
    }

    /// Rows at `indices`, in that order.
    pub fn select(&self, indices: &[usize]) -> FeatureTable {
        FeatureTable::new(indices.iter().map(|&i| self.rows[i].clone()).collect())
    }
}

impl FromIterator<FeatureVector> for FeatureTable {
    fn from_iter<I: IntoIterator<Item = FeatureVector>>(iter: I) -> Self {
        FeatureTable::new(iter.into_iter().collect())
    }
}

pub fn validate_label(label: &str) -> Result<()> {
    if label.is_empty() || label.contains([',', '\n', '\r']) {
        return Err(Error::InvalidLabel(label.to_string()));
    }
    Ok(())
}

fn header() -> Vec<&'static str> {
    FEATURE_NAMES
        .iter()
        .copied()
        .chain([LABEL_COLUMN])
        .collect()
}

pub fn write_csv_to<W: Write>(t: &FeatureTable, dest: W) -> std::result::Result<(), csv::Error> {
    let mut w = csv::WriterBuilder::new()
        .quote_style(csv::QuoteStyle::Never)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(dest);
    w.write_record(header())?;
    for row in t.rows() {
        let mut fields: Vec<String> = row.values.iter().map(u32::to_string).collect();
        fields.push(row.label.clone().unwrap_or_default());
        w.write_record(&fields)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_to_io(e: csv::Error) -> std::io::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => e,
        other => std::io::Error::other(format!("{other:?}")),
    }
}

/// Serialises the table; fails before touching the file if any label is
/// not representable.
pub fn write_csv(t: &FeatureTable, path: &Path) -> Result<()> {
    for l in t.rows().iter().filter_map(|r| r.label.as_deref()) {
        validate_label(l)?;
    }
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv_to(t, file).map_err(|e| Error::io(path, csv_to_io(e)))
}

pub fn write_csv_string(t: &FeatureTable) -> Result<String> {
    for l in t.rows().iter().filter_map(|r| r.label.as_deref()) {
        validate_label(l)?;
    }
    let mut buf = Vec::new();
    write_csv_to(t, &mut buf).map_err(|e| Error::io("<memory>", csv_to_io(e)))?;
    Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
}

pub fn read_csv_from<R: Read>(src: R, path: &Path) -> Result<FeatureTable> {
    let parse_err = |line: u64, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .quoting(false)
        .from_reader(src);
    let mut records = reader.records();

    let first = match records.next() {
        Some(r) => r.map_err(|e| parse_err(1, e.to_string()))?,
        None => return Err(parse_err(1, "missing header".into())),
    };
    if first.iter().collect::<Vec<_>>() != header() {
        let line = first.position().map_or(1, |p| p.line());
        return Err(parse_err(
            line,
            format!("missing header, expected `{}`", header().join(",")),
        ));
    }

    let mut table = FeatureTable::default();
    for rec in records {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != FEATURE_LEN + 1 {
            return Err(parse_err(
                line,
                format!("expected {} fields, found {}", FEATURE_LEN + 1, rec.len()),
            ));
        }
        let mut values = [0u32; FEATURE_LEN];
        for (i, (slot, field)) in values.iter_mut().zip(rec.iter()).enumerate() {
            *slot = field.parse().map_err(|_| {
                parse_err(
                    line,
                    format!(
                        "column {}: {field:?} is not a non-negative integer",
                        FEATURE_NAMES[i]
                    ),
                )
            })?;
        }
        let label = match &rec[FEATURE_LEN] {
            "" => None,
            l => Some(l.to_string()),
        };
        table.push(FeatureVector::new(values, label));
    }
    Ok(table)
}

pub fn read_csv(path: &Path) -> Result<FeatureTable> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv_from(file, path)
}

/// Per-column minimum and maximum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NormalizationParams {
    pub min: [u32; FEATURE_LEN],
    pub max: [u32; FEATURE_LEN],
}

impl NormalizationParams {
    /// `(v - min) / (max - min)`; a constant column maps to 0. Values outside
    /// the fitted range are not clamped.
    pub fn apply<T: Scalar>(&self, values: &[u32; FEATURE_LEN]) -> Vec<T> {
        (0..FEATURE_LEN)
            .map(|i| {
                let (lo, hi) = (i64::from(self.min[i]), i64::from(self.max[i]));
                if hi == lo {
                    T::zero()
                } else {
                    T::of_i64(i64::from(values[i]) - lo) / T::of_i64(hi - lo)
                }
            })
            .collect()
    }

    pub fn invert<T: Scalar>(&self, normalized: &[T]) -> Vec<T> {
        normalized
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let (lo, hi) = (T::of_i64(self.min[i].into()), T::of_i64(self.max[i].into()));
                v * (hi - lo) + lo
            })
            .collect()
    }
}

pub fn fit_normalization(t: &FeatureTable) -> Result<NormalizationParams> {
    let first = t.rows().first().ok_or(Error::EmptyTable)?;
    let mut p = NormalizationParams {
        min: first.values,
        max: first.values,
    };
    for row in &t.rows()[1..] {
        for i in 0..FEATURE_LEN {
            p.min[i] = p.min[i].min(row.values[i]);
            p.max[i] = p.max[i].max(row.values[i]);
        }
    }
    Ok(p)
}

/// Real-valued rows with their labels carried over.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedTable<T> {
    pub rows: Vec<Vec<T>>,
    pub labels: Vec<Option<String>>,
}

pub fn apply_normalization<T: Scalar>(
    t: &FeatureTable,
    p: &NormalizationParams,
) -> NormalizedTable<T> {
    NormalizedTable {
        rows: t.rows().iter().map(|r| p.apply(&r.values)).collect(),
        labels: t.rows().iter().map(|r| r.label.clone()).collect(),
    }
}

/// Fold id for every row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldAssignment {
    pub k: usize,
    pub assignment: Vec<usize>,
}

impl FoldAssignment {
    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &f in &self.assignment {
            sizes[f] += 1;
        }
        sizes
    }

    /// Row indices of one fold, ascending.
    pub fn fold(&self, f: usize) -> Vec<usize> {
        (0..self.assignment.len())
            .filter(|&i| self.assignment[i] == f)
            .collect()
    }

    /// Row indices outside one fold, ascending.
    pub fn complement(&self, f: usize) -> Vec<usize> {
        (0..self.assignment.len())
            .filter(|&i| self.assignment[i] != f)
            .collect()
    }
}

/// Seeded shuffle of `0..n`; see the module docs for the exact algorithm.
pub fn shuffled_indices(n: usize, seed: u64) -> Vec<usize> {
    let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
    let mut idx: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let bound = (i + 1) as u128;
        let j = ((u128::from(rng.next_u64()) * bound) >> 64) as usize;
        idx.swap(i, j);
    }
    idx
}

pub fn kfold_split(n: usize, k: usize, seed: u64) -> Result<FoldAssignment> {
    if k < 2 || k > n {
        return Err(Error::InvalidFolds { k, n });
    }
    let order = shuffled_indices(n, seed);
    let (base, extra) = (n / k, n % k);
    let mut assignment = vec![0; n];
    let mut pos = 0;
    for fold in 0..k {
        let size = base + usize::from(fold < extra);
        for &row in &order[pos..pos + size] {
            assignment[row] = fold;
        }
        pos += size;
    }
    Ok(FoldAssignment { k, assignment })
}
