//! Random search for matrices violating `Q0(dphi) >= (1 - (m-1) k)/m |dphi|^4`
//! for a constant-curvature target tensor.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::wavemap::map::{q0_value, RiemannTensor};
use crate::verdict::Verdict;

const BATCH: usize = 4096;
const REL_TOL: f64 = 1e-12;

#[derive(Clone, Debug, Serialize)]
pub struct Q0Report {
    pub m: usize,
    pub n: usize,
    pub kappa: f64,
    pub trials: usize,
    pub seed: u64,
    /// `(1 - (m-1) k)/m`
    pub coefficient: f64,
    pub min_slack: f64,
    /// Smallest `slack / |dphi|^4` over nonzero trials.
    pub min_relative_slack: f64,
    /// Matrix attaining the smallest relative slack, row-major `n x m`.
    pub worst: Vec<f64>,
    pub violations: usize,
    pub verdict: Verdict,
}

/// `(Q0 - c |dphi|^4, |dphi|^4)` for an `n x m` matrix in orthonormal frames.
pub fn q0_slack(x: &Mat<f64>, riemann: &RiemannTensor, coefficient: f64) -> (f64, f64) {
    let h = Mat::identity(x.rows());
    let w = x.as_slice().iter().map(|v| v * v).sum::<f64>();
    let scale = w * w;
    (q0_value(&h, riemann, x) - coefficient * scale, scale)
}

struct BatchResult {
    min_slack: f64,
    min_rel: f64,
    worst: Vec<f64>,
    violations: usize,
}

fn run_batch(m: usize, n: usize, riemann: &RiemannTensor, coefficient: f64, seed: u64, batch: usize, count: usize) -> BatchResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(batch as u64);
    let mut out = BatchResult { min_slack: f64::INFINITY, min_rel: f64::INFINITY, worst: vec![0.0; n * m], violations: 0 };
    let mut data = vec![0.0; n * m];
    for _ in 0..count {
        for v in data.iter_mut() {
            *v = rng.gen_range(-1.0..=1.0);
        }
        let x = Mat::from_vec(n, m, data.clone());
        let (slack, scale) = q0_slack(&x, riemann, coefficient);
        out.min_slack = out.min_slack.min(slack);
        if slack < -REL_TOL * scale {
            out.violations += 1;
        }
        if scale > 0.0 && slack / scale < out.min_rel {
            out.min_rel = slack / scale;
            out.worst.copy_from_slice(&data);
        }
    }
    out
}

/// Same search as [`q0_lower_bound_check`] without the curvature precondition.
pub fn q0_probe(m: usize, n: usize, kappa: f64, trials: usize, seed: u64) -> Result<Q0Report> {
    if m < 2 || n < 1 {
        return Err(Error::Invalid(format!("need m >= 2 and n >= 1 (got m = {m}, n = {n})")));
    }
    let coefficient = (1.0 - (m - 1) as f64 * kappa) / m as f64;
    let riemann = RiemannTensor::constant(&Mat::identity(n), kappa);
    let batches = trials.div_ceil(BATCH);
    let results: Vec<BatchResult> = (0..batches)
        .into_par_iter()
        .map(|b| run_batch(m, n, &riemann, coefficient, seed, b, BATCH.min(trials - b * BATCH)))
        .collect();
    let mut min_slack = if trials == 0 { 0.0 } else { f64::INFINITY };
    let mut min_rel = f64::INFINITY;
    let mut worst = vec![0.0; n * m];
    let mut violations = 0;
    for r in results {
        min_slack = min_slack.min(r.min_slack);
        violations += r.violations;
        if r.min_rel < min_rel {
            min_rel = r.min_rel;
            worst = r.worst;
        }
    }
    Ok(Q0Report {
        m,
        n,
        kappa,
        trials,
        seed,
        coefficient,
        min_slack,
        min_relative_slack: if min_rel.is_finite() { min_rel } else { 0.0 },
        worst,
        violations,
        verdict: Verdict::from_bool(violations == 0),
    })
}

/// Brute-force check of the `Q0` estimate over `trials` random `n x m`
/// matrices with entries uniform in `[-1, 1]`; requires `k < 1/(m-1)`.
pub fn q0_lower_bound_check(m: usize, n: usize, kappa: f64, trials: usize, seed: u64) -> Result<Q0Report> {
    if m >= 2 {
        let limit = 1.0 / (m - 1) as f64;
        if kappa >= limit {
            return Err(Error::KappaTooLarge { kappa, limit });
        }
    }
    q0_probe(m, n, kappa, trials, seed)
}
