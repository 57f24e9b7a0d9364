//! Monte Carlo estimation of the complex-weighted path histogram.

mod config;
mod engine;
mod histogram;
mod metrics;
mod sampling;

pub use config::McConfig;
pub use engine::{run_chunk_range, run_estimation, run_estimation_with_workers, sign_scan, Estimate, SignScanRow};
pub use histogram::{BinEstimate, BinLayout, BinSums, ChunkAccumulator, ChunkId, ComplexHistogram, WeightSums};
pub use metrics::SignMetrics;
pub use sampling::{chunk_stream, sample_path, sample_unit_vector, PathSample};
pub(crate) use metrics::nan_as_null;
