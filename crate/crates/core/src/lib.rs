//! Hand-shape feature extraction and k-nearest-neighbours gesture
//! classification.
//!
//! The pipeline turns an RGB frame into a skin mask (YCbCr thresholds),
//! traces the outer border of every skin region, keeps the largest one and
//! summarises it as ten integers: the region centroid followed by the
//! leftmost, rightmost, topmost and bottommost border points. Labelled rows
//! are stored as CSV and classified with a plain majority-vote KNN,
//! evaluated by seeded k-fold cross-validation.
//!
//! Geometry and statistics are generic over [`Scalar`] (`f32` or `f64`);
//! the aliases below fix the scalar to `f64`.

pub mod cli;
pub mod dataset;
pub mod error;
pub mod features;
pub mod imaging;
pub mod knn;
pub mod scalar;

pub use dataset::{FeatureTable, FoldAssignment, NormalizationParams};
pub use error::{Error, Result};
pub use features::{ExtremePoints, FeatureVector, FEATURE_LEN};
pub use imaging::{BinaryMask, Contour, PixelBuffer, Point, SkinRange, YcbcrBuffer};
pub use scalar::Scalar;

pub type Moments = features::Moments<f64>;
pub type Centroid = features::Centroid<f64>;
pub type FrameFeatures = features::FrameFeatures<f64>;
pub type NormalizedTable = dataset::NormalizedTable<f64>;
pub type KnnModel = knn::KnnModel<f64>;
pub type PredictionResult = knn::PredictionResult<f64>;
pub type CvReport = knn::CvReport<f64>;
