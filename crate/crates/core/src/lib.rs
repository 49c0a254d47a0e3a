//! Explicit local surface descriptors for raw point clouds.
//!
//! * [`triangular`]: one oriented triangle per point from its two nearest
//!   neighbors, giving a centroid, a unit normal and a surface position.
//! * [`umbrella`]: a counterclockwise fan of K triangles per point, mapped by
//!   a per-triangle transform and pooled.
//! * [`polar`]: spherical and cylindrical auxiliary coordinates.
//! * [`neural`]: the small MLP used as the transform, with manual gradients,
//!   plus batch norm and channel de-differentiation.
//! * [`analytics`]: FLOPs/parameter accounting, timing and curvature summaries.
//! * [`io`], [`synth`], [`cli`]: file formats, synthetic shapes and the
//!   command-line front end.

pub mod analytics;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod io;
pub mod neural;
pub mod polar;
pub mod synth;
pub mod triangular;
pub mod umbrella;

pub use error::{Error, Result};
pub use geometry::{normalize_unit_cube, NeighborIndex, PointCloud, RngStream, Vec3};
pub use triangular::{
    triangular_repsurf, umbrella_curvature, CentroidMode, PositionFrame, TriangularFeature,
    TriangularOptions,
};
pub use umbrella::{
    build_umbrella, degenerate_to_triangular, umbrella_repsurf, Aggregation, InputLayout,
    Transform, UmbrellaConfig, UmbrellaFeature, UmbrellaSurface,
};
