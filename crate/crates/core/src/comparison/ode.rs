//! Explicit Runge-Kutta integrators: adaptive Dormand-Prince 5(4) and fixed-step RK4.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct OdeConfig {
    pub rtol: f64,
    pub atol: f64,
    pub h_init: f64,
    pub h_max: f64,
    /// Steps shorter than this count as underflow (or as reaching a domain edge
    /// when the right-hand side refused the trial point).
    pub h_min: f64,
    pub max_steps: usize,
}

impl OdeConfig {
    pub fn with_tol(tol: f64) -> Self {
        Self { rtol: tol, atol: tol, ..Self::default() }
    }
}

impl Default for OdeConfig {
    fn default() -> Self {
        Self { rtol: 1e-10, atol: 1e-10, h_init: 1e-2, h_max: 0.5, h_min: 1e-12, max_steps: 200_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flow {
    Continue,
    Stop,
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub enum Outcome {
    Finished,
    /// The observer asked to stop.
    Stopped,
    /// The right-hand side kept rejecting trial points ahead of `t`.
    EdgeReached { t: f64 },
}

#[derive(Clone, Copy, Debug, Default, serde::Serialize)]
pub struct OdeStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

#[derive(Clone, Debug)]
pub struct Solution {
    /// State at `t0`, at every requested output time reached, and at the end.
    pub samples: Vec<(f64, Vec<f64>)>,
    pub outcome: Outcome,
    pub stats: OdeStats,
}

impl Solution {
    pub fn last(&self) -> &(f64, Vec<f64>) {
        self.samples.last().expect("solution holds the initial state")
    }
}

fn is_edge(e: &Error) -> bool {
    matches!(e, Error::OutOfDomain { .. } | Error::SingularMetric { .. } | Error::LapseNonPositive { .. })
}

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

fn combine(y: &[f64], h: f64, k: &[Vec<f64>], w: &[f64]) -> Vec<f64> {
    let mut out = y.to_vec();
    for (kj, &wj) in k.iter().zip(w) {
        if wj != 0.0 {
            for (o, &x) in out.iter_mut().zip(kj) {
                *o += h * wj * x;
            }
        }
    }
    out
}

/// Adaptive Dormand-Prince integration of `y' = f(t, y)` from `t0` to `t_end`.
///
/// Steps are shortened to land exactly on every time in `outputs` (which
/// must be increasing). `observe` runs after each accepted step, may modify
/// the state in place (e.g. to wrap periodic coordinates) and may stop the
/// integration.
pub fn dopri5<F, O>(f: &F, t0: f64, y0: &[f64], t_end: f64, outputs: &[f64], cfg: &OdeConfig, mut observe: O) -> Result<Solution>
where
    F: Fn(f64, &[f64]) -> Result<Vec<f64>>,
    O: FnMut(f64, &mut [f64]) -> Flow,
{
    let mut stats = OdeStats::default();
    let mut samples = vec![(t0, y0.to_vec())];
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut k1 = f(t, &y)?;
    stats.evaluations += 1;
    let mut h = cfg.h_init.min(cfg.h_max).min(t_end - t0);
    let mut next_out = outputs.iter().position(|&o| o > t0 + 1e-14).unwrap_or(outputs.len());

    while t < t_end - 1e-14 * t_end.abs().max(1.0) {
        if stats.accepted + stats.rejected >= cfg.max_steps {
            return Err(Error::StepUnderflow { t });
        }
        let target = outputs.get(next_out).copied().unwrap_or(t_end).min(t_end);
        let mut hit = false;
        if t + h >= target - 1e-14 * target.abs().max(1.0) {
            h = target - t;
            hit = true;
        }

        let mut k: Vec<Vec<f64>> = Vec::with_capacity(7);
        k.push(k1.clone());
        let mut failed: Option<Error> = None;
        for s in 1..7 {
            let ys = combine(&y, h, &k, &A[s][..s]);
            match f(t + C[s] * h, &ys) {
                Ok(v) if v.iter().all(|x| x.is_finite()) => k.push(v),
                Ok(_) => {
                    failed = Some(Error::OutOfDomain { point: ys });
                    break;
                }
                Err(e) => {
                    failed = Some(e);
                    break;
                }
            }
            stats.evaluations += 1;
        }
        if let Some(e) = failed {
            if !is_edge(&e) {
                return Err(e);
            }
            stats.rejected += 1;
            h *= 0.25;
            if h < cfg.h_min {
                samples.push((t, y));
                return Ok(Solution { samples, outcome: Outcome::EdgeReached { t }, stats });
            }
            continue;
        }

        let y5 = combine(&y, h, &k, &B5);
        let y4 = combine(&y, h, &k, &B4);
        let mut err = 0.0;
        for i in 0..y.len() {
            let sc = cfg.atol + cfg.rtol * y[i].abs().max(y5[i].abs());
            let e = (y5[i] - y4[i]) / sc;
            err += e * e;
        }
        err = (err / y.len() as f64).sqrt();

        if err <= 1.0 {
            t += h;
            y = y5;
            k1 = k.pop().expect("seven stages");
            stats.accepted += 1;
            let before = y.clone();
            let flow = observe(t, &mut y);
            if y != before {
                // state was projected, the FSAL stage no longer matches
                k1 = f(t, &y)?;
                stats.evaluations += 1;
            }
            if hit && next_out < outputs.len() && (outputs[next_out] - t).abs() <= 1e-12 * t.abs().max(1.0) {
                samples.push((t, y.clone()));
                next_out += 1;
            }
            if flow == Flow::Stop {
                if samples.last().map(|s| s.0) != Some(t) {
                    samples.push((t, y));
                }
                return Ok(Solution { samples, outcome: Outcome::Stopped, stats });
            }
            let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h = (h * fac).min(cfg.h_max);
        } else {
            stats.rejected += 1;
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
            if h < cfg.h_min {
                return Err(Error::StepUnderflow { t });
            }
        }
    }
    if samples.last().map(|s| s.0) != Some(t) {
        samples.push((t, y));
    }
    Ok(Solution { samples, outcome: Outcome::Finished, stats })
}

/// Classical fourth-order Runge-Kutta with `n` equal steps; returns every step.
pub fn rk4<F, O>(f: &F, t0: f64, y0: &[f64], t_end: f64, n: usize, mut observe: O) -> Result<Vec<(f64, Vec<f64>)>>
where
    F: Fn(f64, &[f64]) -> Result<Vec<f64>>,
    O: FnMut(f64, &mut [f64]),
{
    let h = (t_end - t0) / n as f64;
    let mut out = Vec::with_capacity(n + 1);
    let mut y = y0.to_vec();
    out.push((t0, y.clone()));
    for i in 0..n {
        let t = t0 + h * i as f64;
        let k1 = f(t, &y)?;
        let k2 = f(t + 0.5 * h, &combine(&y, h, &[k1.clone()], &[0.5]))?;
        let k3 = f(t + 0.5 * h, &combine(&y, h, &[k2.clone()], &[0.5]))?;
        let k4 = f(t + h, &combine(&y, h, &[k3.clone()], &[1.0]))?;
        y = combine(&y, h, &[k1, k2, k3, k4], &[1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0]);
        let tn = t0 + h * (i + 1) as f64;
        observe(tn, &mut y);
        out.push((tn, y.clone()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_and_oscillator() {
        let f = |_t: f64, y: &[f64]| Ok(vec![y[0]]);
        let sol = dopri5(&f, 0.0, &[1.0], 2.0, &[0.5, 1.0, 1.5], &OdeConfig::with_tol(1e-12), |_, _| Flow::Continue).unwrap();
        assert_eq!(sol.samples.len(), 5);
        for (t, y) in &sol.samples {
            assert!((y[0] - t.exp()).abs() < 1e-10 * t.exp(), "{t} {}", y[0]);
        }
        let osc = |_t: f64, y: &[f64]| Ok(vec![y[1], -y[0]]);
        let sol = dopri5(&osc, 0.0, &[1.0, 0.0], 2.0 * std::f64::consts::PI, &[], &OdeConfig::with_tol(1e-11), |_, _| Flow::Continue)
            .unwrap();
        let (_, y) = sol.last();
        assert!((y[0] - 1.0).abs() < 1e-9 && y[1].abs() < 1e-9);
    }

    #[test]
    fn rk4_is_fourth_order() {
        let f = |_t: f64, y: &[f64]| Ok(vec![y[1], -y[0]]);
        let err = |n| {
            let s = rk4(&f, 0.0, &[1.0, 0.0], 3.0, n, |_, _| {}).unwrap();
            (s.last().unwrap().1[0] - 3f64.cos()).abs()
        };
        let ratio = err(200) / err(400);
        assert!(ratio > 15.0 && ratio < 17.0, "{ratio}");
    }

    #[test]
    fn edge_is_reported() {
        let f = |_t: f64, y: &[f64]| if y[0] > 1.0 { Err(Error::OutOfDomain { point: y.to_vec() }) } else { Ok(vec![1.0]) };
        let sol = dopri5(&f, 0.0, &[0.0], 5.0, &[], &OdeConfig::default(), |_, _| Flow::Continue).unwrap();
        match sol.outcome {
            Outcome::EdgeReached { t } => assert!((t - 1.0).abs() < 1e-9, "{t}"),
            o => panic!("{o:?}"),
        }
    }
}
