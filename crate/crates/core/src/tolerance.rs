use serde::{Deserialize, Serialize};

/// Tolerance set threaded through every check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Accuracy target for pointwise geometric quantities.
    pub kernel: f64,
    /// Relative accuracy target for integrals.
    pub quad: f64,
    /// Certification threshold for identity residuals and inequality slacks.
    pub cert: f64,
    /// Relaxed threshold for quantities involving third derivatives.
    pub cert_third: f64,
    /// Allowed negative eigenvalue when testing positive semi-definiteness.
    pub psd_slack: f64,
    /// Allowed spread of quantities that must be constant.
    pub constancy: f64,
    /// ODE integration tolerance.
    pub ode: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            kernel: 1e-6,
            quad: 1e-8,
            cert: 1e-5,
            cert_third: 1e-4,
            psd_slack: 1e-8,
            constancy: 1e-5,
            ode: 1e-8,
        }
    }
}
