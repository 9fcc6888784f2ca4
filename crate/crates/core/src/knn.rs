//! Brute-force k-nearest-neighbours with majority voting and k-fold
//! cross-validation.
//!
//! Ties are resolved deterministically:
//! * neighbours at equal distance: lower training-row index first;
//! * classes with equal vote counts: smaller summed neighbour distance,
//!   then the lexicographically smaller class name.

use std::cmp::Ordering;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::dataset::{self, FeatureTable};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const DEFAULT_K_NEIGHBORS: usize = 3;
pub const DEFAULT_K_FOLDS: usize = 3;

/// Labelled training points and the neighbour count.
#[derive(Debug, Clone, PartialEq)]
pub struct KnnModel<T> {
    points: Vec<Vec<T>>,
    labels: Vec<String>,
    k_neighbors: usize,
}

impl<T: Scalar> KnnModel<T> {
    pub fn new(points: Vec<Vec<T>>, labels: Vec<String>, k_neighbors: usize) -> Result<Self> {
        if points.len() != labels.len() {
            return Err(Error::LengthMismatch {
                left: points.len(),
                right: labels.len(),
            });
        }
        if k_neighbors == 0 {
            return Err(Error::InvalidModel("k_neighbors must be positive".into()));
        }
        if k_neighbors > points.len() {
            return Err(Error::InsufficientRows {
                k_neighbors,
                available: points.len(),
            });
        }
        if let Some(p) = points.iter().find(|p| p.len() != points[0].len()) {
            return Err(Error::ArityMismatch {
                left: points[0].len(),
                right: p.len(),
            });
        }
        Ok(KnnModel {
            points,
            labels,
            k_neighbors,
        })
    }

    /// Model over raw integer features; every row must be labelled.
    pub fn from_table(t: &FeatureTable, k_neighbors: usize) -> Result<Self> {
        let labels = training_labels(t)?;
        let points = t.rows().iter().map(|r| r.to_scalars()).collect();
        Self::new(points, labels, k_neighbors)
    }

    pub fn k_neighbors(&self) -> usize {
        self.k_neighbors
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<T>] {
        &self.points
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

fn training_labels(t: &FeatureTable) -> Result<Vec<String>> {
    t.rows()
        .iter()
        .enumerate()
        .map(|(i, r)| {
            r.label
                .clone()
                .ok_or_else(|| Error::InvalidModel(format!("training row {} has no label", i + 1)))
        })
        .collect()
}

pub fn euclidean_distance<T: Scalar>(a: &[T], b: &[T]) -> Result<T> {
    if a.len() != b.len() {
        return Err(Error::ArityMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(a.iter()
        .zip(b)
        .map(|(&x, &y)| (x - y) * (x - y))
        .sum::<T>()
        .sqrt())
}

fn by_distance_then_index<T: Scalar>(a: &(usize, T), b: &(usize, T)) -> Ordering {
    a.1.partial_cmp(&b.1)
        .unwrap_or(Ordering::Equal)
        .then(a.0.cmp(&b.0))
}

/// The `k_neighbors` closest training rows as `(index, distance)`, nearest first.
pub fn nearest_neighbors<T: Scalar>(m: &KnnModel<T>, query: &[T]) -> Result<Vec<(usize, T)>> {
    let mut all = m
        .points
        .iter()
        .enumerate()
        .map(|(i, p)| euclidean_distance(p, query).map(|d| (i, d)))
        .collect::<Result<Vec<_>>>()?;
    let k = m.k_neighbors;
    if k < all.len() {
        all.select_nth_unstable_by(k - 1, by_distance_then_index);
        all.truncate(k);
    }
    all.sort_unstable_by(by_distance_then_index);
    Ok(all)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PredictionResult<T> {
    pub label: String,
    pub neighbor_indices: Vec<usize>,
    pub neighbor_distances: Vec<T>,
}

/// Majority label among `(label, distance)` votes with the module's tie rules.
pub fn vote<'a, T: Scalar>(votes: impl IntoIterator<Item = (&'a str, T)>) -> Option<&'a str> {
    let mut tally: Vec<(&str, usize, T)> = Vec::new();
    for (label, d) in votes {
        match tally.iter_mut().find(|(l, _, _)| *l == label) {
            Some(entry) => {
                entry.1 += 1;
                entry.2 = entry.2 + d;
            }
            None => tally.push((label, 1, d)),
        }
    }
    tally
        .into_iter()
        .min_by(|a, b| {
            b.1.cmp(&a.1)
                .then(a.2.partial_cmp(&b.2).unwrap_or(Ordering::Equal))
                .then(a.0.cmp(b.0))
        })
        .map(|(l, _, _)| l)
}

pub fn predict<T: Scalar>(m: &KnnModel<T>, query: &[T]) -> Result<PredictionResult<T>> {
    let nn = nearest_neighbors(m, query)?;
    let label = vote(nn.iter().map(|&(i, d)| (m.labels[i].as_str(), d)))
        .expect("model holds at least one neighbour")
        .to_string();
    Ok(PredictionResult {
        label,
        neighbor_indices: nn.iter().map(|&(i, _)| i).collect(),
        neighbor_distances: nn.iter().map(|&(_, d)| d).collect(),
    })
}

/// `100 * matches / len`.
pub fn accuracy<T: Scalar, S: AsRef<str>>(predicted: &[S], actual: &[S]) -> Result<T> {
    if predicted.len() != actual.len() {
        return Err(Error::LengthMismatch {
            left: predicted.len(),
            right: actual.len(),
        });
    }
    if predicted.is_empty() {
        return Err(Error::EmptyInput);
    }
    let correct = predicted
        .iter()
        .zip(actual)
        .filter(|(p, a)| p.as_ref() == a.as_ref())
        .count();
    Ok(T::hundred() * T::of_usize(correct) / T::of_usize(predicted.len()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FoldResult<T> {
    pub size: usize,
    pub correct: usize,
    pub accuracy: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CvReport<T> {
    pub folds: Vec<FoldResult<T>>,
    /// Unweighted mean of the fold accuracies.
    pub mean_accuracy: T,
    pub k_folds: usize,
    pub k_neighbors: usize,
    pub seed: u64,
    pub normalize: bool,
}

impl<T: Scalar> CvReport<T> {
    pub fn fold_accuracies(&self) -> Vec<T> {
        self.folds.iter().map(|f| f.accuracy).collect()
    }

    pub fn rows(&self) -> usize {
        self.folds.iter().map(|f| f.size).sum()
    }

    /// `key=value` lines, percentages with two decimals.
    pub fn to_key_values(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "rows={}", self.rows());
        let _ = writeln!(s, "k_folds={}", self.k_folds);
        let _ = writeln!(s, "k_neighbors={}", self.k_neighbors);
        let _ = writeln!(s, "seed={}", self.seed);
        let _ = writeln!(s, "normalize={}", self.normalize);
        for (i, f) in self.folds.iter().enumerate() {
            let n = i + 1;
            let _ = writeln!(s, "fold_{n}_size={}", f.size);
            let _ = writeln!(s, "fold_{n}_correct={}", f.correct);
            let _ = writeln!(s, "fold_{n}_accuracy={:.2}", f.accuracy);
        }
        let _ = writeln!(s, "mean_accuracy={:.2}", self.mean_accuracy);
        s
    }

    pub fn to_table(&self) -> String {
        let mut s = format!(
            "Accuracy score per fold (K={}, {} folds, seed {})\n",
            self.k_neighbors, self.k_folds, self.seed
        );
        for (i, f) in self.folds.iter().enumerate() {
            let _ = writeln!(
                s,
                "Fold {}: {:.2}% ({}/{})",
                i + 1,
                f.accuracy,
                f.correct,
                f.size
            );
        }
        let _ = writeln!(s, "Mean Accuracy: {:.2}%", self.mean_accuracy);
        s
    }
}

/// Unweighted arithmetic mean of per-fold percentages.
pub fn mean_accuracy<T: Scalar>(fold_accuracies: &[T]) -> Result<T> {
    if fold_accuracies.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(fold_accuracies.iter().copied().sum::<T>() / T::of_usize(fold_accuracies.len()))
}

/// Trains on all folds but one and scores the held-out fold, for every fold.
///
/// With `normalize`, min-max parameters are fitted on each training
/// partition alone and applied to both partitions.
pub fn cross_validate<T: Scalar>(
    t: &FeatureTable,
    k_folds: usize,
    k_neighbors: usize,
    seed: u64,
    normalize: bool,
) -> Result<CvReport<T>> {
    let labels = training_labels(t)?;
    let split = dataset::kfold_split(t.len(), k_folds, seed)?;
    let largest_fold = split.fold_sizes().into_iter().max().unwrap_or(0);
    let available = t.len() - largest_fold;
    if k_neighbors == 0 || k_neighbors > available {
        return Err(Error::InsufficientRows {
            k_neighbors,
            available,
        });
    }

    let folds = (0..k_folds)
        .into_par_iter()
        .map(|f| {
            let train_idx = split.complement(f);
            let test_idx = split.fold(f);
            let train = t.select(&train_idx);
            let params = if normalize {
                Some(dataset::fit_normalization(&train)?)
            } else {
                None
            };
            let encode = |v: &[u32; 10]| -> Vec<T> {
                match &params {
                    Some(p) => p.apply(v),
                    None => v.iter().map(|&x| T::of_i64(x.into())).collect(),
                }
            };
            let model = KnnModel::new(
                train.rows().iter().map(|r| encode(&r.values)).collect(),
                train_idx.iter().map(|&i| labels[i].clone()).collect(),
                k_neighbors,
            )?;
            let mut correct = 0;
            for &i in &test_idx {
                if predict(&model, &encode(&t.rows()[i].values))?.label == labels[i] {
                    correct += 1;
                }
            }
            Ok(FoldResult {
                size: test_idx.len(),
                correct,
                accuracy: T::hundred() * T::of_usize(correct) / T::of_usize(test_idx.len()),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mean = mean_accuracy(&folds.iter().map(|f| f.accuracy).collect::<Vec<_>>())?;
    Ok(CvReport {
        folds,
        mean_accuracy: mean,
        k_folds,
        k_neighbors,
        seed,
        normalize,
    })
}
