//! Christoffel symbols and curvature from a metric jet.

use crate::error::Result;
use crate::kernel::chart::{Chart, MetricJet};
use crate::linalg::Mat;
use crate::scalar::{lit, Real};

/// Christoffel symbols of the second kind, `get(a, i, j) = Gamma^a_ij`.
#[derive(Clone, Debug)]
pub struct Christoffel<T> {
    m: usize,
    data: Vec<T>,
}

impl<T: Real> Christoffel<T> {
    pub fn dim(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn get(&self, a: usize, i: usize, j: usize) -> T {
        self.data[(a * self.m + i) * self.m + j]
    }

    /// `Gamma(v, w)^a = Gamma^a_ij v^i w^j`.
    pub fn contract(&self, v: &[T], w: &[T]) -> Vec<T> {
        let m = self.m;
        (0..m)
            .map(|a| {
                let mut s = T::zero();
                for i in 0..m {
                    if v[i] == T::zero() {
                        continue;
                    }
                    for j in 0..m {
                        s = s + self.get(a, i, j) * v[i] * w[j];
                    }
                }
                s
            })
            .collect()
    }

    pub fn from_jet(jet: &MetricJet<T>) -> Self {
        let m = jet.g.rows();
        let mut data = vec![T::zero(); m * m * m];
        let half = lit::<T>(0.5);
        for a in 0..m {
            for i in 0..m {
                for j in i..m {
                    let mut s = T::zero();
                    for l in 0..m {
                        let c = jet.dg[i][(j, l)] + jet.dg[j][(i, l)] - jet.dg[l][(i, j)];
                        s = s + jet.ginv[(a, l)] * c;
                    }
                    data[(a * m + i) * m + j] = s * half;
                    data[(a * m + j) * m + i] = s * half;
                }
            }
        }
        Self { m, data }
    }
}

/// Pointwise curvature data.
#[derive(Clone, Debug)]
pub struct Curvature<T> {
    pub g: Mat<T>,
    pub ginv: Mat<T>,
    pub gamma: Christoffel<T>,
    /// `dgamma[k]` holds the partials of the Christoffel symbols along `k`.
    pub dgamma: Vec<Christoffel<T>>,
    pub ricci: Mat<T>,
    pub scalar: T,
}

impl<T: Real> Curvature<T> {
    pub fn from_jet(jet: &MetricJet<T>) -> Self {
        let m = jet.g.rows();
        let gamma = Christoffel::from_jet(jet);
        let half = lit::<T>(0.5);
        // d_k g^{al} = -g^{ab} d_k g_bc g^{cl}
        let dginv: Vec<Mat<T>> =
            jet.dg.iter().map(|d| jet.ginv.matmul(d).matmul(&jet.ginv).scale(-T::one())).collect();
        let mut dgamma = Vec::with_capacity(m);
        for k in 0..m {
            let mut data = vec![T::zero(); m * m * m];
            for a in 0..m {
                for i in 0..m {
                    for j in i..m {
                        let mut s = T::zero();
                        for l in 0..m {
                            let c = jet.dg[i][(j, l)] + jet.dg[j][(i, l)] - jet.dg[l][(i, j)];
                            let dc = jet.ddg[k][i][(j, l)] + jet.ddg[k][j][(i, l)] - jet.ddg[k][l][(i, j)];
                            s = s + dginv[k][(a, l)] * c + jet.ginv[(a, l)] * dc;
                        }
                        data[(a * m + i) * m + j] = s * half;
                        data[(a * m + j) * m + i] = s * half;
                    }
                }
            }
            dgamma.push(Christoffel { m, data });
        }
        // R_ij = d_k G^k_ij - d_i G^k_kj + G^k_kl G^l_ij - G^k_il G^l_kj
        let mut ricci = Mat::zeros(m, m);
        for i in 0..m {
            for j in i..m {
                let mut s = T::zero();
                for k in 0..m {
                    s = s + dgamma[k].get(k, i, j) - dgamma[i].get(k, k, j);
                    for l in 0..m {
                        s = s + gamma.get(k, k, l) * gamma.get(l, i, j) - gamma.get(k, i, l) * gamma.get(l, k, j);
                    }
                }
                ricci[(i, j)] = s;
                ricci[(j, i)] = s;
            }
        }
        let scalar = (0..m).flat_map(|i| (0..m).map(move |j| (i, j))).fold(T::zero(), |acc, (i, j)| {
            acc + jet.ginv[(i, j)] * ricci[(i, j)]
        });
        Self { g: jet.g.clone(), ginv: jet.ginv.clone(), gamma, dgamma, ricci, scalar }
    }

    /// Riemann tensor `R^a_bcd` (rarely needed, computed on demand).
    pub fn riemann(&self, a: usize, b: usize, c: usize, d: usize) -> T {
        let m = self.g.rows();
        let mut s = self.dgamma[c].get(a, d, b) - self.dgamma[d].get(a, c, b);
        for e in 0..m {
            s = s + self.gamma.get(a, c, e) * self.gamma.get(e, d, b) - self.gamma.get(a, d, e) * self.gamma.get(e, c, b);
        }
        s
    }
}

impl<T: Real> Chart<T> {
    pub fn christoffel(&self, p: &[T]) -> Result<Christoffel<T>> {
        Ok(Christoffel::from_jet(&self.metric_jet1(p)?))
    }

    pub fn curvature(&self, p: &[T]) -> Result<Curvature<T>> {
        Ok(Curvature::from_jet(&self.metric_jet(p)?))
    }

    pub fn ricci(&self, p: &[T]) -> Result<Mat<T>> {
        Ok(self.curvature(p)?.ricci)
    }

    pub fn scalar_curvature(&self, p: &[T]) -> Result<T> {
        Ok(self.curvature(p)?.scalar)
    }
}
