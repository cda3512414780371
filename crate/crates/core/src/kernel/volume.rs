use crate::error::{Error, Result};
use crate::kernel::chart::{point_vec, Chart};
use crate::kernel::quadrature::{tensor_nodes, Rule1};
use crate::kernel::sampling::SampleBox;
use crate::scalar::{compensated_sum, Real};

impl<T: Real> Chart<T> {
    /// `(point, dV weight)` pairs for a tensor-product rule over `region`.
    pub fn volume_nodes(&self, region: &SampleBox<T>, n: &[usize]) -> Result<Vec<(Vec<T>, T)>> {
        let rules: Vec<Rule1<T>> = self
            .domain
            .axes
            .iter()
            .enumerate()
            .map(|(k, a)| Rule1::for_axis(a, region.lo[k], region.hi[k], n[k]))
            .collect();
        tensor_nodes(&rules)
            .into_iter()
            .map(|(p, w)| {
                let det = self.metric_raw(&p).det();
                if !(det > T::zero()) {
                    return Err(Error::SingularMetric { point: point_vec(&p) });
                }
                Ok((p, w * det.sqrt()))
            })
            .collect()
    }

    /// `int_region f dV`.
    pub fn volume_integral(&self, region: &SampleBox<T>, n: &[usize], f: &dyn Fn(&[T]) -> Result<T>) -> Result<T> {
        let nodes = self.volume_nodes(region, n)?;
        let vals: Result<Vec<T>> = nodes.iter().map(|(p, w)| Ok(f(p)? * *w)).collect();
        Ok(compensated_sum(vals?))
    }
}
