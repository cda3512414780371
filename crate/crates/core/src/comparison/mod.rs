//! Comparison geometry along rays: geodesics in `g` and in the optical
//! metric, Riccati comparison, u-completeness, warped splitting and weighted
//! volume growth.

pub mod geodesic;
pub mod ode;
pub mod riccati;
pub mod splitting;
pub mod ucomplete;
pub mod volume;

pub use geodesic::{integrate_geodesic, trace, GeodesicConfig, GeodesicTrace, MetricTag};
pub use riccati::{hypersurface_origin, riccati_compare, Origin, RiccatiTrace};
pub use splitting::{splitting_form_check, SplittingReport};
pub use ucomplete::{u_completeness_probe, EndSpec, Growth, UCompleteness};
pub use volume::{f_volume_growth, RadialOrigin, VolumeGrowth, Weight};
