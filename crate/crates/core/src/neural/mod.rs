//! The learnable per-triangle transformation and the normalization helpers
//! used when fusing coordinates with features.

mod cd;
mod matrix;
mod mlp;

pub use cd::{
    cd_forward, column_stats, split_linear, BatchNormState, CdOutput, CdVariant, NormMode,
    DEFAULT_EPS, DEFAULT_MOMENTUM,
};
pub use matrix::Matrix;
pub use mlp::{BiasPolicy, DenseLayer, MlpParams};
