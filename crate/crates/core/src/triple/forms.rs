use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::calculus::ScalarField;
use crate::kernel::chart::{point_vec, Chart, Level};
use crate::kernel::deriv::{d1, d2_mixed, d2_pure, Scheme, Side};
use crate::kernel::extrapolate::extrapolate_scalar;
use crate::kernel::surface::Surface;
use crate::linalg::Mat;
use crate::scalar::{compensated_sum, idx, lit, to_f64, Real};
use crate::triple::SubstaticTriple;

/// Where a second fundamental form is evaluated.
#[derive(Clone)]
pub enum SurfaceSite<'a, T> {
    /// The level set of `u` through a point, normal `-grad u / |grad u|`.
    Level(Vec<T>),
    /// A node of a parametrised surface, with its inward normal.
    Param { surface: &'a Surface<T>, y: Vec<T> },
}

/// Second fundamental forms in orthonormal tangent frames (`e_a` for `g`,
/// `u e_a` for the optical metric).
#[derive(Clone, Debug)]
pub struct FundamentalForms<T> {
    pub point: Vec<T>,
    pub u: T,
    pub a: Mat<T>,
    pub h: T,
    pub a_bar: Mat<T>,
    pub h_bar: T,
    pub h_bar_f: T,
    /// `|A_bar - u^-1 (A + d ln u(nu) g)|` relative, on the tangent frame.
    pub conformal_residual: T,
    /// `|H_bar_f - u H|` relative.
    pub hf_residual: T,
}

/// Gram-Schmidt in the metric `g` on the columns of `e`.
fn orthonormalize<T: Real>(g: &Mat<T>, cols: Vec<Vec<T>>) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = Vec::new();
    for mut v in cols {
        for w in &out {
            let c = g.bilinear(&v, w);
            v.iter_mut().zip(w).for_each(|(a, &b)| *a = *a - c * b);
        }
        let n = g.bilinear(&v, &v).max(T::zero()).sqrt();
        if n > lit(1e-10) {
            v.iter_mut().for_each(|a| *a = *a / n);
            out.push(v);
        }
    }
    out
}

/// Orthonormal basis of the `g`-orthogonal complement of the unit vector `nu`.
fn complement<T: Real>(g: &Mat<T>, nu: &[T]) -> Vec<Vec<T>> {
    let m = nu.len();
    let mut cols = vec![nu.to_vec()];
    // coordinate vectors, least aligned with nu first
    let nu_low = g.mul_vec(nu);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| {
        let a = nu_low[i].abs() / g[(i, i)].sqrt();
        let b = nu_low[j].abs() / g[(j, j)].sqrt();
        a.partial_cmp(&b).unwrap_or(std::cmp::Ordering::Equal)
    });
    for i in order {
        let mut e = vec![T::zero(); m];
        e[i] = T::one();
        cols.push(e);
    }
    let mut b = orthonormalize(g, cols);
    b.remove(0);
    b.truncate(m - 1);
    b
}

fn restrict<T: Real>(form: &Mat<T>, frame: &[Vec<T>]) -> Mat<T> {
    let n = frame.len();
    Mat::from_fn(n, n, |a, b| form.bilinear(&frame[a], &frame[b]))
}

/// `g(nu, d_a d_b X + Gamma(E_a, E_b))` on coordinate tangents.
fn embedded_form<T: Real>(chart: &Chart<T>, surface: &Surface<T>, y: &[T], nu: &[T]) -> Result<Mat<T>> {
    let x = surface.point(y);
    let g = chart.metric(&x)?;
    let gamma = chart.christoffel(&x)?;
    let e = surface.tangents(y);
    let n = y.len();
    let embed = |q: &[T]| surface.point(q);
    let h = lit::<T>(1e-3);
    let nu_low = g.mul_vec(nu);
    let mut a = Mat::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let dd = if surface.face.is_some() {
                vec![T::zero(); x.len()]
            } else if i == j {
                d2_pure(&embed, y, i, h, Side::Central, Scheme::Richardson)
            } else {
                d2_mixed(&embed, y, (i, j), (h, h), (Side::Central, Side::Central), Scheme::Richardson)
            };
            let ei: Vec<T> = (0..x.len()).map(|k| e[(k, i)]).collect();
            let ej: Vec<T> = (0..x.len()).map(|k| e[(k, j)]).collect();
            let gam = gamma.contract(&ei, &ej);
            let v: Vec<T> = dd.iter().zip(&gam).map(|(&a, &b)| a + b).collect();
            let val = crate::linalg::dot(&nu_low, &v);
            a[(i, j)] = val;
            a[(j, i)] = val;
        }
    }
    Ok(a)
}

fn rel_diff<T: Real>(a: &Mat<T>, b: &Mat<T>) -> T {
    a.sub(b).max_abs() / T::one().max(a.max_abs()).max(b.max_abs())
}

impl<T: Real> SubstaticTriple<T> {
    /// `A, H` in `g` and `A_bar, H_bar, H_bar_f` in the optical metric, each
    /// computed on its own chart, plus the residuals of the conformal relations.
    pub fn second_fundamental_forms(&self, site: &SurfaceSite<'_, T>) -> Result<FundamentalForms<T>> {
        let optical = self.optical_view();
        let m = self.dim();
        let m1 = idx::<T>(m - 1);
        let (point, nu, frame, a) = match site {
            SurfaceSite::Level(p) => {
                let d = self.point_data(p)?;
                let n = d.grad_u_norm();
                if !(n > lit(1e-8)) {
                    return Err(Error::CriticalPoint { point: point_vec(p) });
                }
                let nu: Vec<T> = d.grad_u.iter().map(|&v| -v / n).collect();
                let frame = complement(&d.g, &nu);
                let a = restrict(&d.hess_u, &frame).scale(T::one() / n);
                (p.clone(), nu, frame, a)
            }
            SurfaceSite::Param { surface, y } => {
                let x = surface.point(y);
                let g = self.chart.metric(&x)?;
                let nu = surface.unit_normal(&self.chart, y)?;
                let e = surface.tangents(y);
                let cols: Vec<Vec<T>> = (0..e.cols()).map(|a| (0..m).map(|k| e[(k, a)]).collect()).collect();
                let frame = orthonormalize(&g, cols.clone());
                if frame.len() != m - 1 {
                    return Err(Error::DegenerateInducedMetric { param: point_vec(y) });
                }
                // coefficients of the orthonormal frame in the coordinate tangents
                let acoord = embedded_form(&self.chart, surface, y, &nu)?;
                let c = frame_coefficients(&g, &cols, &frame);
                let a = c.transpose().matmul(&acoord).matmul(&c);
                (x, nu, frame, a)
            }
        };
        let u = self.lapse(&point);
        if !(u > T::zero()) {
            return Err(Error::LapseNonPositive { point: point_vec(&point), value: to_f64(u) });
        }
        let du = self.chart.scalar_d(self.u.as_ref(), &point, Level::Inner);
        let du_nu = crate::linalg::dot(&du, &nu);
        let h = a.trace();

        // optical side, independently on the conformal chart
        let a_bar = match site {
            SurfaceSite::Level(p) => {
                let gb = optical.chart.metric(p)?;
                let gib = gb.inverse().ok_or_else(|| Error::SingularMetric { point: point_vec(p) })?;
                let hess_bar = optical.chart.hessian(optical.u.as_ref(), p)?;
                let grad_bar = gib.mul_vec(&du);
                let nb = gb.bilinear(&grad_bar, &grad_bar).sqrt();
                let fb: Vec<Vec<T>> = frame.iter().map(|e| e.iter().map(|&v| v * u).collect()).collect();
                restrict(&hess_bar, &fb).scale(T::one() / nb)
            }
            SurfaceSite::Param { surface, y } => {
                let nu_bar: Vec<T> = nu.iter().map(|&v| v * u).collect();
                let acoord = embedded_form(&optical.chart, surface, y, &nu_bar)?;
                let g = self.chart.metric(&point)?;
                let e = surface.tangents(y);
                let cols: Vec<Vec<T>> = (0..e.cols()).map(|a| (0..m).map(|k| e[(k, a)]).collect()).collect();
                let c = frame_coefficients(&g, &cols, &frame);
                c.transpose().matmul(&acoord).matmul(&c).scale(u * u)
            }
        };
        let formula = a.add(&Mat::identity(m - 1).scale(du_nu / u)).scale(u);
        let h_bar = a_bar.trace();
        // df(nu_bar) = -(m-1) du(u nu) / u
        let h_bar_f = h_bar - m1 * du_nu;
        let hf_scale = T::one().max(h_bar_f.abs()).max((u * h).abs());
        Ok(FundamentalForms {
            point,
            u,
            conformal_residual: rel_diff(&a_bar, &formula),
            hf_residual: (h_bar_f - u * h).abs() / hf_scale,
            a,
            h,
            a_bar,
            h_bar,
            h_bar_f,
        })
    }
}

/// Matrix `C` with `frame = cols * C`.
fn frame_coefficients<T: Real>(g: &Mat<T>, cols: &[Vec<T>], frame: &[Vec<T>]) -> Mat<T> {
    let n = cols.len();
    let gram = Mat::from_fn(n, n, |a, b| g.bilinear(&cols[a], &cols[b]));
    let gi = gram.inverse().expect("tangent Gram matrix invertible");
    let rhs = Mat::from_fn(n, frame.len(), |a, b| g.bilinear(&cols[a], &frame[b]));
    gi.matmul(&rhs)
}

/// Surface gravity of one boundary component.
#[derive(Clone, Debug, Serialize)]
pub struct GravityReport {
    pub label: String,
    pub kappa: f64,
    pub stdev: f64,
    pub min: f64,
    pub max: f64,
    pub nodes: usize,
    pub constant: bool,
}

/// Stability form split into its gradient and potential parts.
#[derive(Clone, Debug, Serialize)]
pub struct StabilityValue {
    pub value: f64,
    pub gradient_part: f64,
    pub potential_part: f64,
}

impl<T: Real> SubstaticTriple<T> {
    /// `|grad u|` on a boundary node, extrapolated along the inward coordinate line.
    pub fn boundary_gradient_norm(&self, surface: &Surface<T>, y: &[T]) -> Result<T> {
        let f = |t: T| -> Result<T> {
            let p = surface.inward_point(y, t);
            let g = self.chart.metric(&p)?;
            let gi = g.inverse().ok_or_else(|| Error::SingularMetric { point: point_vec(&p) })?;
            let du = self.chart.scalar_d(self.u.as_ref(), &p, Level::Inner);
            Ok(gi.bilinear(&du, &du).sqrt())
        };
        extrapolate_scalar(&f, self.extrap_d)
    }

    pub fn surface_gravity(&self, component: usize, tol: f64) -> Result<GravityReport> {
        let b = self.boundary.get(component).ok_or(Error::NoBoundary)?;
        let nodes = b.surface.param_nodes(&b.nodes);
        let vals: Result<Vec<f64>> =
            nodes.iter().map(|(y, _)| Ok(to_f64(self.boundary_gradient_norm(&b.surface, y)?))).collect();
        let vals = vals?;
        let n = vals.len() as f64;
        let mean = compensated_sum(vals.iter().copied()) / n;
        let var = compensated_sum(vals.iter().map(|v| (v - mean) * (v - mean))) / n;
        Ok(GravityReport {
            label: b.label.clone(),
            kappa: mean,
            stdev: var.sqrt(),
            min: vals.iter().copied().fold(f64::INFINITY, f64::min),
            max: vals.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            nodes: vals.len(),
            constant: var.sqrt() < tol,
        })
    }

    /// `int_Sigma { |d psi|^2_gbar - u^2 [|A|^2 + Q(nu, nu)] psi^2 } dsigma` for a
    /// closed parametrised surface, with `|d psi|^2_gbar = u^2 |d psi|^2_h`.
    pub fn stability_form(&self, surface: &Surface<T>, nodes: &[usize], psi: &ScalarField<T>) -> Result<StabilityValue> {
        let quad = surface.area_nodes(&self.chart, nodes)?;
        let mut grad_terms = Vec::with_capacity(quad.len());
        let mut pot_terms = Vec::with_capacity(quad.len());
        for (y, w) in &quad {
            let x = surface.point(y);
            let u = self.lapse(&x);
            // on {u = 0} every term carries u^2
            if u <= lit(1e-12) {
                grad_terms.push(T::zero());
                pot_terms.push(T::zero());
                continue;
            }
            let h = surface.induced_metric(&self.chart, y)?;
            let hi = h.inverse().ok_or_else(|| Error::DegenerateInducedMetric { param: point_vec(y) })?;
            let wrapped = |q: &[T]| vec![psi(q)];
            let dpsi: Vec<T> = (0..y.len())
                .map(|a| d1(&wrapped, y, a, lit(1e-3), Side::Central, Scheme::Richardson)[0])
                .collect();
            let grad2 = hi.bilinear(&dpsi, &dpsi);
            let ff = self.second_fundamental_forms(&SurfaceSite::Param { surface, y: y.clone() })?;
            let a2 = ff.a.frobenius_norm().powi(2);
            let nu = surface.unit_normal(&self.chart, y)?;
            let q = self.q_tensor(&x)?;
            let qnn = q.bilinear(&nu, &nu);
            let pv = psi(y);
            grad_terms.push(u * u * grad2 * *w);
            pot_terms.push(u * u * (a2 + qnn) * pv * pv * *w);
        }
        let gp = to_f64(compensated_sum(grad_terms));
        let pp = to_f64(compensated_sum(pot_terms));
        Ok(StabilityValue { value: gp - pp, gradient_part: gp, potential_part: -pp })
    }
}
