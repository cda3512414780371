//! Named wave-map scenarios over catalog triples.

use crate::catalog::models;
use crate::error::{Error, Result};
use crate::kernel::sampling::SampleBox;
use crate::triple::SubstaticTriple;
use crate::wavemap::map::{Potential, SmoothMap, TargetManifold};

pub struct WavemapScenario {
    pub name: &'static str,
    pub description: &'static str,
    pub triple: SubstaticTriple<f64>,
    pub map: SmoothMap,
    pub potential: Potential,
    pub sample_box: SampleBox<f64>,
}

impl std::fmt::Debug for WavemapScenario {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("WavemapScenario").field("name", &self.name).field("map", &self.map).finish()
    }
}

impl WavemapScenario {
    pub fn points(&self, n: usize, seed: u64) -> Vec<Vec<f64>> {
        self.sample_box.halton(n, seed)
    }
}

pub const SCENARIOS: &[(&str, &str)] = &[
    ("hemisphere-constant", "hemisphere-3, constant map into R^1, V = 3"),
    ("schwarzschild-constant", "schwarzschild-1, constant map into R^1, V = 0"),
    ("cylinder-log", "flat cylinder, phi = ln s into R^1, V = 0, sampled on 1 <= s <= 4"),
    ("hemisphere-negative", "hemisphere-3, phi = (r, r^2/2) into R^2, V = 3 (violates the map equation)"),
    ("cartesian-sphere", "flat cube, polynomial map into the unit 2-sphere, V = 0"),
];

pub fn scenario_names() -> Vec<&'static str> {
    SCENARIOS.iter().map(|s| s.0).collect()
}

pub fn scenario(name: &str) -> Result<WavemapScenario> {
    let &(name, description) =
        SCENARIOS.iter().find(|s| s.0 == name).ok_or_else(|| Error::UnknownEntry(name.to_string()))?;
    let (triple, map, potential, sample_box) = match name {
        "hemisphere-constant" => {
            let t = models::hemisphere(3, 1.0);
            let b = t.sample_box.clone();
            (t, SmoothMap::constant(TargetManifold::euclidean(1), vec![0.0]), Potential::constant(3.0), b)
        }
        "schwarzschild-constant" => {
            let t = models::schwarzschild(1.0);
            let b = t.sample_box.clone();
            (t, SmoothMap::constant(TargetManifold::euclidean(1), vec![0.0]), Potential::zero(), b)
        }
        "cylinder-log" => {
            let t = models::flat_cylinder(1.0);
            let b = SampleBox::new(vec![1.0, 0.0, 0.0], vec![4.0, 1.0, 1.0]);
            let map = SmoothMap::new("ln s", TargetManifold::euclidean(1), |p| vec![p[0].ln()]);
            (t, map, Potential::zero(), b)
        }
        "hemisphere-negative" => {
            let t = models::hemisphere(3, 1.0);
            let b = t.sample_box.clone();
            let map = SmoothMap::new("(r, r^2/2)", TargetManifold::euclidean(2), |p| vec![p[0], 0.5 * p[0] * p[0]]);
            (t, map, Potential::constant(3.0), b)
        }
        "cartesian-sphere" => {
            let t = models::flat_cartesian();
            let b = SampleBox::new(vec![-0.5; 3], vec![0.5; 3]);
            let map = SmoothMap::new("(0.4x + 0.1yz, 0.3y - 0.2x^2)", TargetManifold::space_form(2, 1.0), |p| {
                vec![0.4 * p[0] + 0.1 * p[1] * p[2], 0.3 * p[1] - 0.2 * p[0] * p[0]]
            });
            (t, map, Potential::zero(), b)
        }
        _ => unreachable!(),
    };
    Ok(WavemapScenario { name, description, triple, map, potential, sample_box })
}
