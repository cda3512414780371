use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use substatic_lab::report::{self, CheckSpec, ParamValue, Scenario};

#[derive(Parser, Debug)]
#[command(name = "substatic-lab", version, about = "Numerical checks for sub-static triples (M, g, u)")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct Global {
    /// Accuracy target for pointwise geometry
    #[arg(long, global = true)]
    tol_kernel: Option<f64>,
    /// Relative accuracy target for integrals
    #[arg(long, global = true)]
    tol_quad: Option<f64>,
    /// Pass/fail threshold for residuals and slacks
    #[arg(long, global = true)]
    tol_cert: Option<f64>,
    /// Seed for sampled points and random trials
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(..=report::MAX_SEED))]
    seed: Option<u64>,
    /// Write JSON, text, CSV and the effective scenario here
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Worker threads for running checks
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Run a scenario file
    Run { scenario: PathBuf },
    /// List the available checks
    List,
    /// Show what a check evaluates and its parameters
    Describe { check: String },
    /// Q >= 0 and null-energy agreement at sampled points
    CheckSubstatic {
        #[arg(long)]
        triple: String,
        #[arg(long)]
        samples: Option<usize>,
        /// Use the declared matter Q instead of the geometric one
        #[arg(long)]
        declared: bool,
    },
    /// Residuals of the divergence and Hessian identities
    VerifyIdentities {
        #[arg(long)]
        triple: String,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        which: Vec<String>,
    },
    /// Boundary functional V(b)
    Bgh {
        #[arg(long)]
        triple: String,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        b: Vec<f64>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        refine: Option<usize>,
    },
    /// Divergence-theorem audit for (2F)^a grad F / u
    BghAudit {
        #[arg(long)]
        triple: String,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        a: Vec<f64>,
    },
    /// Area bound for boundary groups of equal surface gravity
    #[command(name = "bgh-3d")]
    Bgh3d {
        /// Catalog entries forming one manifold (default: the two-group union)
        #[arg(long, value_delimiter = ',')]
        triples: Vec<String>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Weighted mean curvature comparison along an optical ray
    Riccati {
        #[arg(long)]
        triple: String,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        start: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        direction: Vec<f64>,
        #[arg(long)]
        length: f64,
        #[arg(long)]
        every: Option<f64>,
        #[arg(long, value_enum, default_value_t = RiccatiOrigin::Point)]
        origin: RiccatiOrigin,
        #[arg(long)]
        offset: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        h_bar_f: Option<f64>,
    },
    /// Divergence of int u and int 1/u along rays of an end
    Ucomplete {
        #[arg(long)]
        triple: String,
        #[arg(long, default_value_t = 0)]
        axis: usize,
        #[arg(long)]
        start: f64,
        #[arg(long, allow_hyphen_values = true)]
        outward: Option<f64>,
        #[arg(long)]
        r0: Option<f64>,
        #[arg(long)]
        rays: Option<usize>,
        #[arg(long)]
        t_max: Option<f64>,
    },
    /// Warped-product form of the optical normal flow of a coordinate face
    SplitCheck {
        #[arg(long)]
        triple: String,
        #[arg(long)]
        axis: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        value: Option<f64>,
        #[arg(long)]
        t_len: Option<f64>,
        #[arg(long)]
        intervals: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        nodes: Vec<usize>,
    },
    /// Weighted volume growth of metric balls
    VolumeGrowth {
        #[arg(long)]
        triple: String,
        #[arg(long)]
        axis: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        origin: Option<f64>,
        #[arg(long, value_delimiter = ',')]
        radii: Vec<f64>,
        #[arg(long, value_enum)]
        weight: Option<WeightArg>,
        #[arg(long, allow_hyphen_values = true)]
        kappa: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<f64>,
    },
    /// Map-source system, Bochner formula, Q0 estimate and sup bound
    Wavemap(WavemapArgs),
}

#[derive(Args, Debug)]
struct WavemapArgs {
    #[arg(long, value_enum)]
    check: WavemapCheck,
    /// Named wave-map scenario (system, bochner, liouville)
    #[arg(long)]
    scenario: Option<String>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    kappa: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
    /// q0: search without the curvature precondition
    #[arg(long)]
    probe: bool,
    /// liouville: ball radii for volume growth evidence
    #[arg(long, value_delimiter = ',')]
    radii: Vec<f64>,
    #[arg(long)]
    axis: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    origin: Option<f64>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum WavemapCheck {
    System,
    Q0,
    Bochner,
    Liouville,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RiccatiOrigin {
    Point,
    Face,
    Hypersurface,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum WeightArg {
    Map,
    Optical,
}

fn opt(spec: CheckSpec, key: &str, v: Option<impl Into<ParamValue>>) -> CheckSpec {
    match v {
        Some(v) => spec.with(key, v),
        None => spec,
    }
}

fn list<T: Clone + Into<ParamValue>>(spec: CheckSpec, key: &str, v: &[T]) -> CheckSpec {
    if v.is_empty() {
        spec
    } else {
        spec.with(key, ParamValue::Array(v.iter().cloned().map(Into::into).collect()))
    }
}

fn usize_value(v: Option<usize>) -> Option<i64> {
    v.map(|x| x as i64)
}

/// Single-check scenario for a subcommand.
fn single(name: &str, spec: CheckSpec) -> Scenario {
    let mut s = Scenario::new(name);
    s.checks.push(spec);
    s
}

fn scenario_for(cmd: &Cmd) -> anyhow::Result<Option<Scenario>> {
    let s = match cmd {
        Cmd::List | Cmd::Describe { .. } => return Ok(None),
        Cmd::Run { scenario } => {
            Scenario::load(scenario).with_context(|| format!("loading scenario {}", scenario.display()))?
        }
        Cmd::CheckSubstatic { triple, samples, declared } => {
            let c = CheckSpec::new("substatic").with("triple", triple.as_str()).with("declared", *declared);
            single("check-substatic", opt(c, "samples", usize_value(*samples)))
        }
        Cmd::VerifyIdentities { triple, samples, which } => {
            let c = CheckSpec::new("identities").with("triple", triple.as_str());
            let c = list(opt(c, "samples", usize_value(*samples)), "which", which);
            single("verify-identities", c)
        }
        Cmd::Bgh { triple, b, samples, refine } => {
            let c = list(CheckSpec::new("bgh").with("triple", triple.as_str()), "b", b);
            single("bgh", opt(opt(c, "samples", usize_value(*samples)), "refine", usize_value(*refine)))
        }
        Cmd::BghAudit { triple, a } => single("bgh-audit", list(CheckSpec::new("bgh-audit").with("triple", triple.as_str()), "a", a)),
        Cmd::Bgh3d { triples, samples } => {
            let c = list(CheckSpec::new("bgh-3d"), "triples", triples);
            single("bgh-3d", opt(c, "samples", usize_value(*samples)))
        }
        Cmd::Riccati { triple, start, direction, length, every, origin, offset, h_bar_f } => {
            let origin = match origin {
                RiccatiOrigin::Point => "point",
                RiccatiOrigin::Face => "face",
                RiccatiOrigin::Hypersurface => "hypersurface",
            };
            let c = CheckSpec::new("riccati").with("triple", triple.as_str()).with("length", *length).with("origin", origin);
            let c = list(list(c, "start", start), "direction", direction);
            let c = opt(opt(opt(c, "every", *every), "offset", *offset), "h_bar_f", *h_bar_f);
            single("riccati", c)
        }
        Cmd::Ucomplete { triple, axis, start, outward, r0, rays, t_max } => {
            let c = CheckSpec::new("ucomplete").with("triple", triple.as_str()).with("axis", *axis as i64).with("start", *start);
            let c = opt(opt(opt(c, "outward", *outward), "r0", *r0), "rays", usize_value(*rays));
            single("ucomplete", opt(c, "t_max", *t_max))
        }
        Cmd::SplitCheck { triple, axis, value, t_len, intervals, nodes } => {
            let c = CheckSpec::new("split-check").with("triple", triple.as_str());
            let c = opt(opt(opt(c, "axis", usize_value(*axis)), "value", *value), "t_len", *t_len);
            let nodes: Vec<i64> = nodes.iter().map(|&n| n as i64).collect();
            single("split-check", list(opt(c, "intervals", usize_value(*intervals)), "nodes", &nodes))
        }
        Cmd::VolumeGrowth { triple, axis, origin, radii, weight, kappa, lambda } => {
            let c = CheckSpec::new("volume-growth").with("triple", triple.as_str());
            let c = opt(opt(c, "axis", usize_value(*axis)), "origin", *origin);
            let w = weight.map(|w| match w {
                WeightArg::Map => "map",
                WeightArg::Optical => "optical",
            });
            let c = opt(opt(opt(list(c, "radii", radii), "weight", w), "kappa", *kappa), "lambda", *lambda);
            single("volume-growth", c)
        }
        Cmd::Wavemap(w) => {
            let c = match w.check {
                WavemapCheck::System => opt(CheckSpec::new("wavemap-system"), "scenario", w.scenario.clone()),
                WavemapCheck::Bochner => opt(CheckSpec::new("wavemap-bochner"), "scenario", w.scenario.clone()),
                WavemapCheck::Liouville => {
                    let c = opt(CheckSpec::new("wavemap-liouville"), "scenario", w.scenario.clone());
                    opt(opt(list(c, "radii", &w.radii), "axis", usize_value(w.axis)), "origin", w.origin)
                }
                WavemapCheck::Q0 => {
                    let c = opt(opt(CheckSpec::new("wavemap-q0"), "m", usize_value(w.m)), "n", usize_value(w.n));
                    let c = opt(opt(c, "kappa", w.kappa), "trials", usize_value(w.trials));
                    if w.probe {
                        c.with("probe", true)
                    } else {
                        c
                    }
                }
            };
            let c = if matches!(w.check, WavemapCheck::Q0) { c } else { opt(c, "samples", usize_value(w.samples)) };
            let name = c.check.clone();
            single(&name, c)
        }
    };
    Ok(Some(s))
}

fn apply_globals(s: &mut Scenario, g: &Global) {
    if let Some(v) = g.tol_kernel {
        s.tolerances.kernel = v;
    }
    if let Some(v) = g.tol_quad {
        s.tolerances.quad = v;
    }
    if let Some(v) = g.tol_cert {
        s.tolerances.cert = v;
    }
    if let Some(v) = g.seed {
        s.seed = v;
    }
}

fn execute(cli: &Cli) -> anyhow::Result<i32> {
    if let Some(n) = cli.global.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring the thread pool")?;
    }
    match &cli.cmd {
        Cmd::List => {
            for c in report::list() {
                println!("{:<18} {}", c.name, c.summary);
            }
            return Ok(0);
        }
        Cmd::Describe { check } => {
            print!("{}", report::describe(check)?);
            return Ok(0);
        }
        _ => {}
    }
    let mut scenario = scenario_for(&cli.cmd)?.expect("scenario for a check command");
    apply_globals(&mut scenario, &cli.global);
    scenario.validate()?;
    let rep = report::run_scenario(&scenario)?;
    print!("{}", report::to_text(&rep));
    let out_dir = cli.global.out_dir.clone().or_else(|| scenario.output.as_ref().and_then(|o| o.dir.clone()).map(PathBuf::from));
    if let Some(dir) = out_dir {
        let stem = scenario.output.as_ref().and_then(|o| o.stem.clone()).unwrap_or_else(|| scenario.name.clone());
        let mut files = report::write_report(&rep, &dir, &stem)?;
        let path = dir.join(format!("{stem}.scenario.toml"));
        std::fs::write(&path, scenario.to_toml()?).with_context(|| format!("writing {}", path.display()))?;
        files.push(path);
        for f in files {
            eprintln!("wrote {}", f.display());
        }
    }
    Ok(rep.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // usage problems are execution errors, not failed checks
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
