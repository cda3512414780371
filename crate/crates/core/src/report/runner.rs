//! Executes the checks of a scenario and assembles the report.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::boundary::{bgh_functional, boundary_data, boundary_scalar_constraint, corollary_3d, divergence_audit, BoundaryData};
use crate::catalog;
use crate::comparison::{
    f_volume_growth, hypersurface_origin, riccati_compare, splitting_form_check, trace, u_completeness_probe, EndSpec,
    GeodesicConfig, MetricTag, Origin, RadialOrigin, Weight,
};
use crate::error::{Error, Result};
use crate::identities::{verify_identities, Identity};
use crate::kernel::chart::Domain;
use crate::kernel::Surface;
use crate::report::registry;
use crate::report::scenario::{CheckSpec, Scenario, SCHEMA_VERSION};
use crate::tolerance::Tolerances;
use crate::triple::QSelect;
use crate::triple::SubstaticTriple;
use crate::verdict::Verdict;
use crate::wavemap;

pub const ARTIFACT: &str = "substatic-lab";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// A plottable series, written as CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    fn new(name: &str, header: &[&str]) -> Self {
        Self { name: name.to_string(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdicts {
    pub label: String,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckBlock {
    pub check: String,
    pub anchors: Vec<String>,
    pub inputs: BTreeMap<String, Value>,
    pub residuals: BTreeMap<String, f64>,
    pub verdicts: Vec<Verdicts>,
    pub verdict: Verdict,
    pub outputs: Value,
    #[serde(skip)]
    pub tables: Vec<Table>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Header {
    pub artifact: String,
    pub version: String,
    pub schema: u32,
    pub scenario: String,
    pub scenario_hash: String,
    pub seed: u64,
    pub tolerances: Tolerances,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Summary {
    pub checks: usize,
    pub pass: usize,
    pub fail: usize,
    pub not_applicable: usize,
    pub verdict: Option<Verdict>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub header: Header,
    pub checks: Vec<CheckBlock>,
    pub summary: Summary,
}

impl VerificationReport {
    /// 0 when nothing failed, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.summary.fail > 0 {
            2
        } else {
            0
        }
    }
}

pub fn run_scenario(scenario: &Scenario) -> Result<VerificationReport> {
    scenario.validate()?;
    let checks = scenario.checks.par_iter().map(|c| run_check(scenario, c)).collect::<Result<Vec<_>>>()?;
    let mut summary = Summary { checks: checks.len(), ..Summary::default() };
    for c in &checks {
        match c.verdict {
            Verdict::Pass => summary.pass += 1,
            Verdict::Fail => summary.fail += 1,
            Verdict::NotApplicable => summary.not_applicable += 1,
        }
    }
    summary.verdict = checks.iter().map(|c| c.verdict).reduce(Verdict::and);
    Ok(VerificationReport {
        header: Header {
            artifact: ARTIFACT.to_string(),
            version: VERSION.to_string(),
            schema: SCHEMA_VERSION,
            scenario: scenario.name.clone(),
            scenario_hash: scenario.hash()?,
            seed: scenario.seed,
            tolerances: scenario.tolerances,
        },
        checks,
        summary,
    })
}

/// Typed access to check parameters; every value read (or defaulted) is
/// recorded as an input of the block.
struct Args<'a> {
    check: &'a str,
    params: &'a BTreeMap<String, toml::Value>,
    scenario: &'a Scenario,
    used: BTreeMap<String, Value>,
}

fn as_f64(v: &toml::Value) -> Option<f64> {
    match v {
        toml::Value::Float(x) => Some(*x),
        toml::Value::Integer(i) => Some(*i as f64),
        _ => None,
    }
}

impl<'a> Args<'a> {
    fn bad(&self, key: &str, what: &str) -> Error {
        Error::Parse(format!("check '{}': parameter '{key}' must be {what}", self.check))
    }

    fn f64_opt(&mut self, key: &str) -> Result<Option<f64>> {
        match self.params.get(key) {
            None => Ok(None),
            Some(v) => {
                let x = as_f64(v).ok_or_else(|| self.bad(key, "a number"))?;
                self.used.insert(key.into(), json!(x));
                Ok(Some(x))
            }
        }
    }

    fn f64(&mut self, key: &str, default: f64) -> Result<f64> {
        let x = self.f64_opt(key)?.unwrap_or(default);
        self.used.insert(key.into(), json!(x));
        Ok(x)
    }

    fn f64_req(&mut self, key: &str) -> Result<f64> {
        self.f64_opt(key)?.ok_or_else(|| self.bad(key, "given"))
    }

    fn usize(&mut self, key: &str, default: usize) -> Result<usize> {
        let x = match self.params.get(key) {
            None => default,
            Some(toml::Value::Integer(i)) if *i >= 0 => *i as usize,
            Some(_) => return Err(self.bad(key, "a nonnegative integer")),
        };
        self.used.insert(key.into(), json!(x));
        Ok(x)
    }

    fn bool(&mut self, key: &str, default: bool) -> Result<bool> {
        let x = match self.params.get(key) {
            None => default,
            Some(toml::Value::Boolean(b)) => *b,
            Some(_) => return Err(self.bad(key, "true or false")),
        };
        self.used.insert(key.into(), json!(x));
        Ok(x)
    }

    fn list_opt(&mut self, key: &str) -> Result<Option<Vec<f64>>> {
        let v = match self.params.get(key) {
            None => return Ok(None),
            Some(toml::Value::Array(a)) => a.iter().map(as_f64).collect::<Option<Vec<f64>>>(),
            Some(v) => as_f64(v).map(|x| vec![x]),
        }
        .ok_or_else(|| self.bad(key, "a list of numbers"))?;
        self.used.insert(key.into(), json!(v));
        Ok(Some(v))
    }

    fn list(&mut self, key: &str, default: &[f64]) -> Result<Vec<f64>> {
        let v = self.list_opt(key)?.unwrap_or_else(|| default.to_vec());
        self.used.insert(key.into(), json!(v));
        Ok(v)
    }

    fn usize_list(&mut self, key: &str, default: &[usize]) -> Result<Vec<usize>> {
        let v = match self.params.get(key) {
            None => default.to_vec(),
            Some(toml::Value::Array(a)) => a
                .iter()
                .map(|x| x.as_integer().filter(|i| *i > 0).map(|i| i as usize))
                .collect::<Option<Vec<usize>>>()
                .ok_or_else(|| self.bad(key, "a list of positive integers"))?,
            Some(_) => return Err(self.bad(key, "a list of positive integers")),
        };
        self.used.insert(key.into(), json!(v));
        Ok(v)
    }

    fn str_opt(&mut self, key: &str) -> Result<Option<String>> {
        match self.params.get(key) {
            None => Ok(None),
            Some(toml::Value::String(s)) => {
                self.used.insert(key.into(), json!(s));
                Ok(Some(s.clone()))
            }
            Some(_) => Err(self.bad(key, "a string")),
        }
    }

    fn str(&mut self, key: &str, default: &str) -> Result<String> {
        let s = self.str_opt(key)?.unwrap_or_else(|| default.to_string());
        self.used.insert(key.into(), json!(s));
        Ok(s)
    }

    fn str_list(&mut self, key: &str) -> Result<Option<Vec<String>>> {
        let v = match self.params.get(key) {
            None => return Ok(None),
            Some(toml::Value::String(s)) => vec![s.clone()],
            Some(toml::Value::Array(a)) => a
                .iter()
                .map(|x| x.as_str().map(str::to_string))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| self.bad(key, "a list of strings"))?,
            Some(_) => return Err(self.bad(key, "a list of strings")),
        };
        self.used.insert(key.into(), json!(v));
        Ok(Some(v))
    }

    fn triple(&mut self) -> Result<SubstaticTriple<f64>> {
        let name = match self.str_opt("triple")? {
            Some(n) => n,
            None => self.scenario.triple.clone().ok_or_else(|| self.bad("triple", "given (or set at scenario level)"))?,
        };
        self.used.insert("triple".into(), json!(name));
        Ok(catalog::load(&name)?.triple)
    }
}

struct Block {
    residuals: BTreeMap<String, f64>,
    verdicts: Vec<Verdicts>,
    outputs: Value,
    tables: Vec<Table>,
}

impl Block {
    fn new(outputs: Value) -> Self {
        Self { residuals: BTreeMap::new(), verdicts: Vec::new(), outputs, tables: Vec::new() }
    }

    fn residual(&mut self, key: &str, v: f64) -> &mut Self {
        self.residuals.insert(key.to_string(), v);
        self
    }

    fn verdict(&mut self, label: impl Into<String>, v: Verdict) -> &mut Self {
        self.verdicts.push(Verdicts { label: label.into(), verdict: v });
        self
    }
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

fn fmin(it: impl Iterator<Item = f64>) -> f64 {
    it.fold(f64::INFINITY, f64::min)
}

fn fmax(it: impl Iterator<Item = f64>) -> f64 {
    it.fold(f64::NEG_INFINITY, f64::max)
}

/// Coordinate face `x^axis = value` parametrised by the remaining chart axes.
fn coordinate_face(t: &SubstaticTriple<f64>, axis: usize, value: f64, inward: f64) -> Result<Surface<f64>> {
    let axes = &t.chart.domain.axes;
    if axis >= axes.len() {
        return Err(Error::Invalid(format!("axis {axis} out of range for {}", t.name)));
    }
    let param: Vec<_> = axes.iter().enumerate().filter(|(k, _)| *k != axis).map(|(_, a)| a.clone()).collect();
    Ok(Surface::coordinate_face(&format!("{}={value}", axes[axis].name), Domain::new(param), axis, value, inward))
}

pub fn run_check(scenario: &Scenario, spec: &CheckSpec) -> Result<CheckBlock> {
    let info = registry::lookup(&spec.check)?;
    let mut args = Args { check: info.name, params: &spec.params, scenario, used: BTreeMap::new() };
    let tol = &scenario.tolerances;
    let seed = scenario.seed;
    let block = match info.name {
        "substatic" => substatic(&mut args, tol, seed)?,
        "lambda" => {
            let t = args.triple()?;
            let n = args.usize("samples", 200)?;
            let r = t.lambda_constant(n, seed, tol.constancy)?;
            let mut b = Block::new(to_json(&r));
            b.residual("lambda", r.lambda).residual("spread", r.spread).residual("max_trace_residual", r.max_trace_residual);
            b.verdict("Λ constant", Verdict::from_bool(r.is_constant));
            b
        }
        "identities" => identities(&mut args, tol, seed)?,
        "bgh" => bgh(&mut args, tol, seed)?,
        "bgh-audit" => {
            let t = args.triple()?;
            let a_list = args.list("a", &[-0.7, 0.0, 1.0])?;
            let reports = a_list.iter().map(|&a| divergence_audit(&t, a, tol, seed)).collect::<Result<Vec<_>>>()?;
            let mut b = Block::new(to_json(&reports));
            let mut table = Table::new("audit", &["a", "flux", "volume", "residual", "min_div", "hypothesis_ok"]);
            for r in &reports {
                table.rows.push(vec![r.a, r.lhs, r.rhs, r.residual, r.min_div, if r.hypothesis_ok { 1.0 } else { 0.0 }]);
                b.verdict(format!("a = {}", r.a), r.verdict);
                if !r.hypothesis_ok {
                    b.verdict(format!("a = {} below {:.6}: hypothesis violated", r.a, r.threshold), Verdict::NotApplicable);
                }
            }
            b.residual("max_residual", fmax(reports.iter().map(|r| r.residual)));
            b.tables.push(table);
            b
        }
        "bgh-3d" => {
            let n = args.usize("samples", 64)?;
            let triples: Vec<SubstaticTriple<f64>> = match args.str_list("triples")? {
                Some(names) => names.iter().map(|s| catalog::load(s).map(|e| e.triple)).collect::<Result<_>>()?,
                None => catalog::two_group()?.into_iter().map(|e| e.triple).collect(),
            };
            let data = triples.iter().map(|t| boundary_data(t, tol, n, seed, 1)).collect::<Result<Vec<_>>>()?;
            let refs: Vec<&BoundaryData> = data.iter().collect();
            let cor = corollary_3d(&refs, tol)?;
            let mut b = Block::new(to_json(&cor));
            let mut table = Table::new("groups", &["kappa", "area", "bound"]);
            for g in &cor.groups {
                table.rows.push(vec![g.kappa, g.area, cor.bound]);
            }
            b.tables.push(table);
            b.residual("bound", cor.bound).residual("s_minus_tr_q", cor.s_minus_tr_q);
            b.verdict("asserted groups within bound", cor.verdict);
            b
        }
        "scalar-constraint" => {
            let t = args.triple()?;
            let n = args.usize("samples", 64)?;
            let d = boundary_data(&t, tol, n, seed, 1)?;
            let r = boundary_scalar_constraint(&d, tol)?;
            let mut b = Block::new(to_json(&r));
            b.residual("min_slack", r.min_slack);
            b.verdict("slack ≥ 0", r.verdict);
            b
        }
        "surface-gravity" => surface_gravity(&mut args, tol)?,
        "riccati" => riccati(&mut args, tol)?,
        "ucomplete" => {
            let t = args.triple()?;
            let axis = args.usize("axis", 0)?;
            let start = args.f64_req("start")?;
            let outward = args.f64("outward", 1.0)?;
            let r0 = args.f64("r0", start)?;
            let rays = args.usize("rays", 4)?;
            let t_max = args.f64("t_max", 1024.0)?;
            let r = u_completeness_probe(&t, &EndSpec { axis, start, outward, r0 }, rays, t_max, tol.ode)?;
            let mut b = Block::new(to_json(&r));
            let mut table = Table::new("integrals", &["ray", "functional", "T", "integral"]);
            for (i, ray) in r.rays.iter().enumerate() {
                for (k, f) in [&ray.int_u, &ray.int_u_inv].into_iter().enumerate() {
                    for &(tt, v) in &f.checkpoints {
                        table.rows.push(vec![i as f64, k as f64, tt, v]);
                    }
                }
            }
            b.tables.push(table);
            b.residual("int_u_exponent", r.int_u_exponent)
                .residual("int_u_inv_exponent", r.int_u_inv_exponent)
                .residual("sandwich_c", r.sandwich_c);
            b.verdict(r.label.clone(), r.verdict);
            b
        }
        "split-check" => {
            let t = args.triple()?;
            let axis = args.usize("axis", 0)?;
            let value = args.f64("value", 1.0)?;
            let t_len = args.f64("t_len", 1.0)?;
            let intervals = args.usize("intervals", 20)?;
            let nodes = args.usize_list("nodes", &[6, 4])?;
            let face = coordinate_face(&t, axis, value, 1.0)?;
            let r = splitting_form_check(&t, &face, t_len, intervals, &nodes, tol)?;
            let mut b = Block::new(to_json(&r));
            let mut levels = Table::new("levels", &["intervals", "dt", "umbilicity", "metric_fit", "separability"]);
            for l in &r.levels {
                levels.rows.push(vec![l.intervals as f64, l.dt, l.umbilicity, l.metric_fit, l.separability]);
            }
            let mut xi = Table::new("xi", &["t", "xi"]);
            xi.rows.extend(r.xi.iter().map(|&(a, c)| vec![a, c]));
            b.tables.extend([levels, xi]);
            if let Some(fine) = r.levels.last() {
                b.residual("umbilicity", fine.umbilicity)
                    .residual("metric_fit", fine.metric_fit)
                    .residual("separability", fine.separability);
            }
            b.verdict("warped-product form", r.verdict);
            b
        }
        "volume-growth" => {
            let t = args.triple()?;
            let axis = args.usize("axis", 0)?;
            let origin = args.f64("origin", 0.0)?;
            let radii = args.list("radii", &[1.0, 2.0, 4.0, 8.0])?;
            let weight = match args.str("weight", "map")?.as_str() {
                "map" => Weight::Map,
                "optical" => Weight::Optical,
                other => return Err(Error::Parse(format!("unknown weight '{other}'"))),
            };
            let kl = match (args.f64_opt("kappa")?, args.f64_opt("lambda")?) {
                (Some(k), Some(l)) => Some((k, l)),
                (None, None) => None,
                _ => return Err(Error::Parse("kappa and lambda go together".into())),
            };
            let r = f_volume_growth(&t, RadialOrigin { axis, value: origin }, &radii, weight, kl)?;
            let mut b = Block::new(to_json(&r));
            let mut table = Table::new("volume", &["r", "x", "vol_f", "log_ratio", "shell", "comparison_m", "comparison_m1"]);
            for row in &r.rows {
                table.rows.push(vec![row.r, row.x, row.vol_f, row.log_ratio, row.shell, row.comparison_m, row.comparison_m1]);
            }
            b.tables.push(table);
            b.residual("liminf_estimate", r.liminf_estimate);
            b.verdict("h^m comparison", r.bound_m).verdict("h^(m-1) comparison", r.bound_m1).verdict("growth", r.verdict);
            b
        }
        "wavemap-system" => {
            let sc = wavemap::scenario(&args.str("scenario", "hemisphere-constant")?)?;
            let n = args.usize("samples", 64)?;
            let (survey, rows) = wavemap::system_survey(&sc.triple, &sc.map, &sc.potential, &sc.points(n, seed), tol)?;
            let mut b = Block::new(to_json(&survey));
            let mut table = Table::new("residuals", &["sample", "r1", "r2", "r3"]);
            for (i, r) in rows.iter().enumerate() {
                table.rows.push(vec![i as f64, r.r1, r.r2, r.r3]);
            }
            b.tables.push(table);
            b.residual("min_r1", survey.min_r1).residual("max_r2", survey.max_r2).residual("max_r3", survey.max_r3);
            b.verdict("system", survey.verdict);
            b
        }
        "wavemap-q0" => {
            let m = args.usize("m", 3)?;
            let n = args.usize("n", 2)?;
            let kappa = args.f64("kappa", 0.0)?;
            let trials = args.usize("trials", 100_000)?;
            let probe = args.bool("probe", false)?;
            let r = if probe {
                wavemap::q0_probe(m, n, kappa, trials, seed)?
            } else {
                wavemap::q0_lower_bound_check(m, n, kappa, trials, seed)?
            };
            let mut b = Block::new(to_json(&r));
            b.residual("min_slack", r.min_slack).residual("min_relative_slack", r.min_relative_slack);
            b.verdict(format!("{} violations in {} trials", r.violations, r.trials), r.verdict);
            b
        }
        "wavemap-bochner" => {
            let sc = wavemap::scenario(&args.str("scenario", "cylinder-log")?)?;
            let n = args.usize("samples", 16)?;
            let reps = sc
                .points(n, seed)
                .par_iter()
                .map(|p| wavemap::bochner_residual(&sc.triple, &sc.map, &sc.potential, p, tol))
                .collect::<Result<Vec<_>>>()?;
            let mut table = Table::new("bochner", &["sample", "energy_density", "lhs", "rhs_floor", "slack", "identity_residual"]);
            for (i, r) in reps.iter().enumerate() {
                table.rows.push(vec![i as f64, r.energy_density, r.lhs, r.rhs_floor, r.slack, r.identity.residual]);
            }
            let max_id = fmax(reps.iter().map(|r| r.identity.residual.abs()));
            let min_slack = fmin(reps.iter().map(|r| r.slack));
            let inequality = reps.iter().map(|r| r.verdict).fold(Verdict::NotApplicable, Verdict::and);
            let mut b = Block::new(json!({ "samples": reps.len(), "max_identity_residual": max_id, "min_slack": min_slack }));
            b.tables.push(table);
            b.residual("max_identity_residual", max_id).residual("min_slack", min_slack);
            b.verdict("identity", Verdict::from_bool(max_id < 10.0 * tol.cert)).verdict("lower bound", inequality);
            b
        }
        "wavemap-liouville" => {
            let sc = wavemap::scenario(&args.str("scenario", "hemisphere-constant")?)?;
            let n = args.usize("samples", 64)?;
            let volume = match args.list_opt("radii")? {
                Some(radii) => {
                    let axis = args.usize("axis", 0)?;
                    let origin = args.f64("origin", 0.0)?;
                    Some(f_volume_growth(&sc.triple, RadialOrigin { axis, value: origin }, &radii, Weight::Map, None)?)
                }
                None => None,
            };
            let r = wavemap::liouville_bound(&sc.triple, &sc.map, &sc.potential, &sc.points(n, seed), volume.as_ref(), tol)?;
            let mut b = Block::new(to_json(&r));
            b.residual("sup_energy_density", r.sup_energy_density)
                .residual("theorem_bound", r.theorem_bound)
                .residual("reduction_bound", r.reduction_bound)
                .residual("a", r.hypotheses.potential.a);
            b.verdict("sup ≤ square-root bound", r.verdict);
            b
        }
        other => return Err(Error::UnknownCheck(other.to_string())),
    };
    let verdict = block.verdicts.iter().map(|v| v.verdict).fold(Verdict::NotApplicable, Verdict::and);
    Ok(CheckBlock {
        check: info.name.to_string(),
        anchors: info.anchors.iter().map(|s| s.to_string()).collect(),
        inputs: args.used,
        residuals: block.residuals,
        verdicts: block.verdicts,
        verdict,
        outputs: block.outputs,
        tables: block.tables,
    })
}

fn substatic(args: &mut Args<'_>, tol: &Tolerances, seed: u64) -> Result<Block> {
    let t = args.triple()?;
    let n = args.usize("samples", 1000)?;
    let null = args.usize("null_samples", 16)?;
    let select = if args.bool("declared", false)? { QSelect::Declared } else { QSelect::Geometric };
    let pts = t.samples(n, seed);
    let reps = pts.par_iter().map(|p| t.nec_check(p, null, select, tol.psd_slack, tol.cert)).collect::<Result<Vec<_>>>()?;
    let mut table = Table::new("nec", &["sample", "min_eigenvalue", "energy_residual"]);
    for (i, r) in reps.iter().enumerate() {
        table.rows.push(vec![i as f64, r.min_eigenvalue, r.energy_residual]);
    }
    let min_eig = fmin(reps.iter().map(|r| r.min_eigenvalue));
    let max_energy = fmax(reps.iter().map(|r| r.energy_residual));
    let worst = reps.iter().min_by(|a, b| a.min_eigenvalue.total_cmp(&b.min_eigenvalue)).map(|r| r.point.clone());
    let mut b = Block::new(json!({
        "triple": t.name,
        "samples": reps.len(),
        "min_eigenvalue": min_eig,
        "min_at": worst,
        "max_energy_residual": max_energy,
        "violations": reps.iter().filter(|r| !r.pass).count(),
    }));
    b.tables.push(table);
    b.residual("min_eigenvalue", min_eig).residual("max_energy_residual", max_energy);
    b.verdict("Q ≥ 0", Verdict::from_bool(reps.iter().all(|r| r.pass)))
        .verdict("T(Y, Y) = Q(X, X)", Verdict::from_bool(reps.iter().all(|r| r.energy_pass)));
    Ok(b)
}

fn identities(args: &mut Args<'_>, tol: &Tolerances, seed: u64) -> Result<Block> {
    let t = args.triple()?;
    let n = args.usize("samples", 1000)?;
    let which = match args.str_list("which")? {
        None => Identity::ALL.to_vec(),
        Some(names) if names.len() == 1 && names[0] == "all" => Identity::ALL.to_vec(),
        Some(names) => names
            .iter()
            .map(|s| Identity::parse(s).ok_or_else(|| Error::Parse(format!("unknown identity '{s}'"))))
            .collect::<Result<_>>()?,
    };
    let run = verify_identities(&t, &which, n, seed, tol);
    let mut table = Table::new("residuals", &["identity", "residual", "tol", "lhs", "rhs"]);
    for r in &run.rows {
        let k = Identity::ALL.iter().position(|i| *i == r.identity).unwrap_or(0);
        table.rows.push(vec![k as f64, r.residual, r.tol, r.lhs, r.rhs]);
    }
    let mut b = Block::new(json!({ "triple": run.triple, "samples": run.samples, "seed": run.seed, "summaries": to_json(&run.summaries) }));
    b.tables.push(table);
    for s in &run.summaries {
        b.residual(&format!("{}_max", s.identity.name()), s.max_residual);
        b.verdict(s.identity.name(), s.verdict);
    }
    Ok(b)
}

fn bgh(args: &mut Args<'_>, tol: &Tolerances, seed: u64) -> Result<Block> {
    let t = args.triple()?;
    let bs = args.list("b", &[-0.49, 0.0, 1.0, 5.0])?;
    let n = args.usize("samples", 64)?;
    let refine = args.usize("refine", 1)?;
    let d = boundary_data(&t, tol, n, seed, refine)?;
    let reports: Vec<_> = bs.iter().map(|&b| bgh_functional(&d, b, tol)).collect();
    let components: Vec<Value> = d
        .components
        .iter()
        .map(|c| {
            json!({
                "label": c.label, "kappa": c.kappa, "kappa_spread": c.kappa_spread, "area": c.area,
                "int_s_sigma": c.int_s_sigma, "int_s": c.int_s, "int_tr_q": c.int_tr_q, "euler": c.euler().0,
            })
        })
        .collect();
    let area_bound = if d.dim == 3 { Some(corollary_3d(&[&d], tol)?) } else { None };
    let mut b = Block::new(json!({
        "triple": d.triple,
        "components": components,
        "regularity_order": d.regularity_order,
        "reports": to_json(&reports),
        "area_bound": to_json(&area_bound),
    }));
    let mut table = Table::new("bgh", &["b", "value", "scale"]);
    for r in &reports {
        table.rows.push(vec![r.b, r.value, r.scale]);
        b.verdict(format!("b = {}", r.b), r.verdict);
    }
    b.tables.push(table);
    b.residual("total_area", d.components.iter().map(|c| c.area).sum());
    b.residual("max_abs_value", fmax(reports.iter().map(|r| r.value.abs())));
    if let Some(c) = &area_bound {
        b.residual("area_bound", c.bound);
    }
    Ok(b)
}

fn surface_gravity(args: &mut Args<'_>, tol: &Tolerances) -> Result<Block> {
    let name = match args.str_opt("triple")? {
        Some(n) => n,
        None => args.scenario.triple.clone().ok_or_else(|| args.bad("triple", "given"))?,
    };
    args.used.insert("triple".into(), json!(name));
    let entry = catalog::load(&name)?;
    let t = &entry.triple;
    if t.boundary.is_empty() {
        return Err(Error::NoBoundary);
    }
    let reps = (0..t.boundary.len()).map(|i| t.surface_gravity(i, tol.constancy)).collect::<Result<Vec<_>>>()?;
    let mut b = Block::new(to_json(&reps));
    for (i, r) in reps.iter().enumerate() {
        b.residual(&format!("kappa_{}", r.label), r.kappa);
        b.verdict(format!("{} constant", r.label), Verdict::from_bool(r.constant));
        if let Some(k) = entry.truth.surface_gravities.get(i) {
            b.verdict(format!("{} = {}", r.label, k.value), Verdict::from_bool((r.kappa - k.value).abs() < 10.0 * tol.cert));
        }
    }
    Ok(b)
}

fn riccati(args: &mut Args<'_>, tol: &Tolerances) -> Result<Block> {
    let t = args.triple()?;
    let m = t.dim();
    let start = args.list_opt("start")?.ok_or_else(|| args.bad("start", "given"))?;
    let mut e0 = vec![0.0; m];
    e0[0] = 1.0;
    let dir = args.list("direction", &e0)?;
    let length = args.f64_req("length")?;
    let every = args.f64("every", 0.1)?;
    let origin = match args.str("origin", "point")?.as_str() {
        "point" => Origin::Point { offset: args.f64("offset", start[0])? },
        "hypersurface" => Origin::Hypersurface { h_bar_f: args.f64("h_bar_f", 0.0)? },
        "face" => {
            let face = coordinate_face(&t, 0, start[0], 1.0)?;
            hypersurface_origin(&t, &face, &start[1..], &dir)?
        }
        other => return Err(Error::Parse(format!("unknown origin '{other}'"))),
    };
    let tr = trace(&t, MetricTag::Optical, &start, &dir, length, &GeodesicConfig::new(tol.ode).every(every))?;
    let r = riccati_compare(&t, &tr, origin, tol.ode)?;
    let mut table = Table::new("riccati", &["t", "s", "u", "h_bar", "h_bar_f", "lambda", "lambda_s", "bound"]);
    for row in &r.rows {
        table.rows.push(vec![row.t, row.s, row.u, row.h_bar, row.h_bar_f, row.lambda, row.lambda * row.s, row.bound]);
    }
    let mut b = Block::new(to_json(&r));
    b.tables.push(table);
    b.residual("max_lambda", fmax(r.rows.iter().map(|x| x.lambda))).residual("max_excess", r.max_excess);
    if let Some(d) = r.lambda_s_deviation {
        b.residual("lambda_s_deviation", d);
    }
    b.verdict("comparison", r.verdict);
    Ok(b)
}
