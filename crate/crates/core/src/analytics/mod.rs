//! Cost accounting, timing and curvature-sensitivity summaries.

mod curvature;
mod flops;
mod timing;

pub use curvature::{cube_sensitivity, curvature_report, oblique_tilt, RegionSummary};
pub use flops::{flops_linear, flops_repsurf, unit, CostBreakdown, OpCost};
pub use timing::{time_stage, TimingReport};
