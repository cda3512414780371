//! Static metadata for every check a scenario can name.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct Param {
    pub name: &'static str,
    pub default: &'static str,
    pub help: &'static str,
}

const fn p(name: &'static str, default: &'static str, help: &'static str) -> Param {
    Param { name, default, help }
}

#[derive(Clone, Copy, Debug)]
pub struct CheckInfo {
    pub name: &'static str,
    pub summary: &'static str,
    /// Formulas the check evaluates.
    pub anchors: &'static [&'static str],
    pub params: &'static [Param],
}

const TRIPLE: Param = p("triple", "scenario triple", "catalog entry");
const SAMPLES: Param = p("samples", "1000", "interior sample count");
const WM_SCENARIO: Param = p("scenario", "hemisphere-constant", "wave-map scenario name");

pub const CHECKS: &[CheckInfo] = &[
    CheckInfo {
        name: "substatic",
        summary: "smallest eigenvalue of Q and null-energy agreement at sampled points",
        anchors: &["u Ric - Hess u + (Δu) g ≥ 0", "Q = Ric - Hess u/u + (Δu/u) g", "T(Y, Y) = Q(X, X) for Y = e_0 + X"],
        params: &[TRIPLE, SAMPLES, p("null_samples", "16", "null vectors per point"), p("declared", "false", "use the declared matter Q")],
    },
    CheckInfo {
        name: "lambda",
        summary: "constancy of Λ over interior samples",
        anchors: &["Λ = (S - tr Q)/(m - 1)"],
        params: &[TRIPLE, p("samples", "200", "interior sample count")],
    },
    CheckInfo {
        name: "identities",
        summary: "pointwise residuals of the divergence and Hessian identities",
        anchors: &[
            "2 Q(∇u, ·) = u (dS - 2 div Q)",
            "½ div(∇|∇u|²/u) = |Hess u|²/u + Q(∇u, ∇u)/u + ⟨∇u, ∇(Δu/u)⟩",
            "div(Hess̊u(∇u, ·)/u) = |Hess̊u|²/u + Q(∇u, ∇u)/u + (m-1)/m ⟨∇u, ∇(Δu/u)⟩",
            "|Hess̊u|² = |∇u|²|Å|² + (m-2)/(m-1)|∇^T|∇u||² + m/(m-1)|Hess̊u(ν, ·)|²",
            "Hess̊u(ν, ν)/u = (m-1)(m-2)/(2m) Λ + tr Q/2 - S_Σ/2 on ∂M",
            "div(∇F/u) ≥ 0 with F = |∇u|²/2 + Λu²/(2m)",
        ],
        params: &[TRIPLE, SAMPLES, p("which", "all", "identity names: Qdu, Sh1, Sh2, Hu0, Hu0_bd, lem_dF")],
    },
    CheckInfo {
        name: "bgh",
        summary: "boundary functional V(b) and its equality case",
        anchors: &["∑ κ_i^b ∫_{Σ_i} (S_Σ - (m-2)/m S - (2/m) tr Q) ≥ 0", "equality iff round hemisphere", "|∂M| ≤ 4π"],
        params: &[
            TRIPLE,
            p("b", "[-0.49, 0, 1, 5]", "exponents b"),
            p("samples", "64", "interior samples for Λ and Q"),
            p("refine", "1", "quadrature refinement factor"),
        ],
    },
    CheckInfo {
        name: "bgh-audit",
        summary: "divergence theorem for X = (2F)^a ∇F/u",
        anchors: &["∫_{∂M} ⟨X, ν⟩ = ∫_M div X", "div((2F)^a ∇F/u) ≥ 0 for a ≥ -m/(2(m-1))"],
        params: &[TRIPLE, p("a", "[-0.7, 0, 1]", "exponents a")],
    },
    CheckInfo {
        name: "bgh-3d",
        summary: "area bound for boundary groups of equal surface gravity (m = 3)",
        anchors: &["|Σ̂_a| ≤ 24π/(S - tr Q)", "Σ̂_a grouped by κ ascending"],
        params: &[p("triples", "two-group union", "catalog entries forming one manifold"), p("samples", "64", "interior samples")],
    },
    CheckInfo {
        name: "scalar-constraint",
        summary: "boundary scalar curvature floor for unit surface gravity",
        anchors: &["S_Σ - (m-1)(m-2)/m Λ - tr Q ≥ 0 on ∂M when κ = 1"],
        params: &[TRIPLE, p("samples", "64", "interior samples")],
    },
    CheckInfo {
        name: "surface-gravity",
        summary: "constancy of |∇u| on each boundary component",
        anchors: &["κ_i = |∇u| on Σ_i"],
        params: &[TRIPLE],
    },
    CheckInfo {
        name: "riccati",
        summary: "weighted mean curvature comparison along an optical ray",
        anchors: &["H̄' + H̄²/(m-1) + Ric̄(γ', γ') = 0", "λ = u⁻² H̄_f, s = ∫ u² dt", "dλ/ds ≤ -λ²/(m-1)"],
        params: &[
            TRIPLE,
            p("start", "-", "start point"),
            p("direction", "[1, 0, ...]", "initial direction"),
            p("length", "-", "optical length"),
            p("every", "0.1", "output spacing"),
            p("origin", "point", "point | face | hypersurface"),
            p("offset", "start[0]", "distance from the point origin"),
            p("h_bar_f", "0", "initial H̄_f for origin = hypersurface"),
        ],
    },
    CheckInfo {
        name: "ucomplete",
        summary: "divergence of ∫u and ∫u⁻¹ along rays of an end",
        anchors: &["∫_γ u = ∞ and ∫_γ u⁻¹ = ∞", "C⁻¹(1+r)⁻¹ ≤ u ≤ C(1+r)"],
        params: &[
            TRIPLE,
            p("axis", "0", "end coordinate"),
            p("start", "-", "start section"),
            p("outward", "1", "direction sign"),
            p("r0", "start", "distance of the start section"),
            p("rays", "4", "number of rays"),
            p("t_max", "1024", "ray length"),
        ],
    },
    CheckInfo {
        name: "split-check",
        summary: "warped-product form of the optical normal flow",
        anchors: &["-h̄'/2 = d ln u(γ') h̄", "h̄(t) = (u(t, y)/u(0, y))⁻² h̄(0)", "u(t, y) = r(y) ξ(t)"],
        params: &[
            TRIPLE,
            p("axis", "0", "face coordinate"),
            p("value", "1", "face value"),
            p("t_len", "1", "flow length"),
            p("intervals", "20", "coarse t intervals"),
            p("nodes", "[6, 4]", "surface nodes per axis"),
        ],
    },
    CheckInfo {
        name: "volume-growth",
        summary: "weighted volume of metric balls against the comparison curve",
        anchors: &["vol_f(B_r) ≤ C ∫_0^r h^m", "h'' = κ̄² h", "liminf ln vol_f(B_r)/r² < ∞"],
        params: &[
            TRIPLE,
            p("axis", "0", "radial coordinate"),
            p("origin", "0", "radial origin value"),
            p("radii", "[1, 2, 4, 8]", "ball radii"),
            p("weight", "map", "map (f = -ln u) | optical (f = -(m-1) ln u)"),
            p("kappa", "-", "κ̄ for the comparison curve"),
            p("lambda", "-", "λ̄ for the comparison curve"),
        ],
    },
    CheckInfo {
        name: "wavemap-system",
        summary: "residuals of the lapse / map-source system",
        anchors: &["u Ric - Hess u + (Δu) g ≥ u φ*h", "Δu + V(φ) u = 0", "u τ(φ) + dφ(∇u) = (m-1)/2 DV(φ) u"],
        params: &[WM_SCENARIO, p("samples", "64", "sample count")],
    },
    CheckInfo {
        name: "wavemap-q0",
        summary: "random search for violations of the Q₀ estimate",
        anchors: &["Q₀(dφ) = |φ*h|² - R^N(dφ_i, dφ_j, dφ_i, dφ_j)", "Q₀(dφ) ≥ (1 - (m-1)κ)/m |dφ|⁴"],
        params: &[
            p("m", "3", "source dimension"),
            p("n", "2", "target dimension"),
            p("kappa", "0", "target curvature, < 1/(m-1)"),
            p("trials", "100000", "random matrices"),
            p("probe", "false", "skip the κ < 1/(m-1) precondition"),
        ],
    },
    CheckInfo {
        name: "wavemap-bochner",
        summary: "weighted Bochner identity and lower bound for |dφ|²",
        anchors: &[
            "½Δ_f|dφ|² = |∇dφ|² + ⟨∇τ_f(φ), dφ⟩ + Ric_f(dφ, dφ) - R^N(dφ, dφ, dφ, dφ)",
            "½Δ_f|dφ|² ≥ [(m-1)/2 Hess V + V h](dφ, dφ) + (1 - (m-1)κ)/m |dφ|⁴",
            "f = -ln u",
        ],
        params: &[WM_SCENARIO, p("samples", "16", "sample count")],
    },
    CheckInfo {
        name: "wavemap-liouville",
        summary: "sampled sup |dφ|² against the Keller-Osserman bound",
        anchors: &["sup |dφ|² ≤ [a m / (2(1 - (m-1)κ))]^{1/2}", "sup v ≤ (a/b)^{1/(σ-1)}, b = 2(1 - (m-1)κ)/m, σ = 2"],
        params: &[
            WM_SCENARIO,
            p("samples", "64", "sample count"),
            p("radii", "-", "ball radii for volume growth evidence"),
            p("axis", "0", "radial coordinate"),
            p("origin", "0", "radial origin value"),
        ],
    },
];

pub fn list() -> &'static [CheckInfo] {
    CHECKS
}

pub fn lookup(name: &str) -> Result<&'static CheckInfo> {
    CHECKS.iter().find(|c| c.name == name).ok_or_else(|| Error::UnknownCheck(name.to_string()))
}

pub fn describe(name: &str) -> Result<String> {
    let c = lookup(name)?;
    let mut s = format!("{}: {}\n", c.name, c.summary);
    for a in c.anchors {
        s.push_str(&format!("  evaluates  {a}\n"));
    }
    if !c.params.is_empty() {
        s.push_str("  parameters\n");
        for p in c.params {
            s.push_str(&format!("    {:<12} {:<18} {}\n", p.name, p.default, p.help));
        }
    }
    Ok(s)
}
