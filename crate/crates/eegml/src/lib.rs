//! Multitaper spectral features and classical machine learning for EEG
//! seizure classification.
//!
//! The crate covers the full pipeline from raw single-channel EEG segments to
//! evaluated classifiers:
//!
//! * [`ingest`]: loading labeled EEG segments (one ASCII sample per line,
//!   the distribution format of the Bonn epilepsy database) into datasets.
//! * [`tapers`]: Slepian (DPSS) data tapers from the spectral concentration
//!   problem, solved through the symmetric tridiagonal formulation.
//! * [`spectral`]: multitaper power spectrum, spectrogram and bispectrum.
//! * [`features`]: the 105-dimensional feature vector: 15 power-spectrum
//!   measures x 5 clinical bands, 5 spectrogram measures x 5 bands, and
//!   5 bispectrum measures.
//! * [`learners`]: from-scratch binary classifiers (1NN, LDA, QDA, a
//!   C4.5-style tree, random forest, backprop MLP) behind one fit/predict
//!   interface.
//! * [`multiclass`]: all-against-all code-matrix decomposition and
//!   distance-based decoding on top of the binary learners.
//! * [`eval`]: stratified k-fold cross-validation, mean error / standard
//!   deviation, and confusion-matrix metrics (CCR, predictive value).
//! * [`stats`]: Shapiro-Wilk normality, Friedman omnibus and Nemenyi
//!   post hoc tests over per-fold error blocks.
//! * [`pipeline`]: configuration plus the extract / evaluate / stats /
//!   report commands used by the `eegml` binary.
//!
//! Every stochastic step is seeded; the same configuration and data always
//! produce byte-identical outputs. See the crate examples for runnable,
//! self-contained demonstrations of each capability.

pub mod eval;
pub mod features;
pub mod ingest;
pub mod learners;
pub mod multiclass;
pub mod pipeline;
pub mod spectral;
pub mod stats;
pub mod tapers;

pub(crate) mod seeding;

pub use eval::{ConfusionMatrix, CvReport, FoldAssignment};
pub use features::{Band, ExtractionConfig, FeatureMatrix, FeatureVector};
pub use ingest::{ClassLabel, DatasetManifest, LabeledDataset, TimeSeriesSegment};
pub use learners::{Algorithm, BinaryModel, LearnerConfig, TrainingSet};
pub use multiclass::{CodeMatrix, MulticlassModel};
pub use spectral::{Bispectrum, PowerSpectrum, Spectrogram};
pub use tapers::TaperSet;
