//! Distributed nonparametric variable screening.
//!
//! Each data partition is summarised by LP statistics, the correlations between a
//! binary response and orthonormal rank-polynomial scores of each predictor,
//! which carry normal confidence distributions `N(lp, 1/n)`. The partition
//! summaries are meta-combined under fixed or random effects, with Cochran's Q
//! and I² diagnosing heterogeneity and DerSimonian–Laird or REML estimates of
//! the between-partition variance correcting for it.
//!
//! ```
//! use metalp::meta::{combine_fixed, PartitionEstimate};
//!
//! let cd = combine_fixed(&[
//!     PartitionEstimate::new(0, 0.2, 100),
//!     PartitionEstimate::new(1, 0.4, 300),
//! ])
//! .unwrap();
//! assert!((cd.mean - 0.35).abs() < 1e-12);
//! ```

pub mod column;
pub mod error;
pub mod meta;
pub mod partition;
pub mod pipeline;
pub mod report;
pub mod score;
pub mod studies;

pub use column::{DataType, Dataset, MixedColumn};
pub use error::{Error, Result};
pub use meta::{CombinedCD, Method, PartitionEstimate, RemlOptions, RemlUpdate};
pub use partition::{PartitionPlan, Scheme};
pub use pipeline::{analyze, AnalysisConfig, AnalysisReport, PartitionSpec, VariableResult};
pub use score::{ScoreBasis, SubpopSummary};
