//! Geometry kernel: charts, finite-difference jets, curvature, covariant
//! calculus, quadrature and boundary extrapolation.

pub mod calculus;
pub mod chart;
pub mod curvature;
pub mod deriv;
pub mod extrapolate;
pub mod quadrature;
pub mod sampling;
pub mod surface;
pub mod volume;

pub use calculus::{inner2, lower, trace_with, vec_norm, ScalarField, ScalarJet, TensorField, VectorField};
pub use chart::{Axis, Chart, Domain, Level, MetricJet, PointFn, StepConfig};
pub use curvature::{Christoffel, Curvature};
pub use deriv::{Scheme, Side};
pub use sampling::SampleBox;
pub use surface::Surface;

#[cfg(test)]
mod tests;
