//! Harmonic-type maps `phi: M -> N` coupled to a sub-static lapse through a
//! potential `V` on the target.
//!
//! Everything here is `f64` only.

pub mod bochner;
pub mod fixtures;
pub mod liouville;
pub mod map;
pub mod q0;
pub mod system;

#[cfg(test)]
mod tests;

pub use bochner::{bochner_residual, BochnerReport, BochnerTerms};
pub use fixtures::{scenario, scenario_names, WavemapScenario};
pub use liouville::{liouville_bound, radial_subsolution, square_root_bound, KellerOsserman, LiouvilleReport, SubsolutionProfile};
pub use map::{potential_bounds, FrameKind, Potential, PotentialBounds, RiemannTensor, SmoothMap, TargetManifold};
pub use q0::{q0_lower_bound_check, q0_probe, q0_slack, Q0Report};
pub use system::{map_system_residuals, system_survey, SystemResiduals, SystemSurvey};
