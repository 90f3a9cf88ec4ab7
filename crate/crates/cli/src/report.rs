//! The structured report and its human rendering.
//!
//! Every rational is written as an exact literal (`3/2`, `-1`). Decimal
//! approximations are only attached when asked for and live in separate
//! `*_approx` fields.

use ricci_ot_core::curvature::{EdgeCurvature, IdlenessProfile};
use ricci_ot_core::graph::GraphDocument;
use ricci_ot_core::ratio::to_f64;
use ricci_ot_core::verify::TheoremVerdict;
use ricci_ot_core::{CurvatureReport, Ratio, WeightModel, WeightedGraph};
use serde::{Deserialize, Serialize};
use std::fmt::Write;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub graph: GraphDocument,
    pub weight: String,
    pub monotonicity: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub edges: Vec<EdgeRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub methods_agree: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub total: Option<TotalRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<ProfileRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<PairRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub verdicts: Vec<VerdictRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeRow {
    pub u: String,
    pub v: String,
    pub length: String,
    pub kappa: String,
    pub kappa_star: String,
    pub kappa_laplacian: String,
    pub kappa_limit: String,
    pub profile_pieces: usize,
    pub agree: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa_approx: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TotalRow {
    pub total_curvature: String,
    pub h_of_w: String,
    pub general_bound: String,
    pub euler_bound: String,
    pub girth: String,
    pub treelike: bool,
    pub equality_general: bool,
    pub equality_euler: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub total_approx: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PieceRow {
    pub start: String,
    pub end: String,
    pub slope: String,
    pub intercept: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub u: String,
    pub v: String,
    pub kappa: String,
    pub pieces: Vec<PieceRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairRow {
    pub x: String,
    pub y: String,
    pub distance: String,
    pub adjacent: bool,
    pub kappa: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa_alpha: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictRow {
    pub theorem: String,
    pub hypothesis_met: bool,
    pub claim_holds: bool,
    pub lhs: String,
    pub rhs: String,
    pub equality: bool,
    pub equality_condition_met: bool,
    pub violated: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Report {
    pub fn new(command: &str, g: &WeightedGraph, wm: &WeightModel) -> Self {
        let weight = wm.family().to_string();
        let mut graph = g.to_document();
        graph.weight = Some(weight.clone());
        Report {
            command: command.into(),
            graph,
            weight,
            monotonicity: wm.monotonicity().to_string(),
            seed: None,
            edges: Vec::new(),
            methods_agree: None,
            total: None,
            profile: None,
            pair: None,
            verdicts: Vec::new(),
        }
    }

    pub fn with_edges(mut self, g: &WeightedGraph, rows: &[EdgeCurvature], decimal: bool) -> Self {
        self.edges = rows
            .iter()
            .map(|e| EdgeRow {
                u: g.name(e.u).into(),
                v: g.name(e.v).into(),
                length: g.edges()[e.edge].length.to_string(),
                kappa: e.kappa_star.to_string(),
                kappa_star: e.kappa_star.to_string(),
                kappa_laplacian: e.kappa_laplacian.to_string(),
                kappa_limit: e.kappa_limit.to_string(),
                profile_pieces: e.profile_pieces,
                agree: e.methods_agree(),
                kappa_approx: decimal.then(|| to_f64(&e.kappa_star)),
            })
            .collect();
        self.methods_agree = Some(rows.iter().all(EdgeCurvature::methods_agree));
        self
    }

    pub fn with_total(mut self, report: &CurvatureReport, decimal: bool) -> Self {
        self.total = Some(TotalRow {
            total_curvature: report.total.to_string(),
            h_of_w: report.h_of_w.to_string(),
            general_bound: report.general_bound.to_string(),
            euler_bound: report.bound_2v_minus_2e.to_string(),
            girth: report.girth.to_string(),
            treelike: report.treelike,
            equality_general: report.equality_flags.general_lower,
            equality_euler: report.equality_flags.euler,
            total_approx: decimal.then(|| to_f64(&report.total)),
        });
        self
    }

    pub fn with_profile(
        mut self,
        g: &WeightedGraph,
        u: usize,
        v: usize,
        p: &IdlenessProfile,
    ) -> Self {
        let kappa = -p
            .pieces
            .last()
            .expect("profiles are nonempty")
            .slope
            .clone();
        self.profile = Some(ProfileRow {
            u: g.name(u).into(),
            v: g.name(v).into(),
            kappa: kappa.to_string(),
            pieces: p
                .segments()
                .map(|(a, b, line)| PieceRow {
                    start: a.to_string(),
                    end: b.to_string(),
                    slope: line.slope.to_string(),
                    intercept: line.intercept.to_string(),
                })
                .collect(),
        });
        self
    }

    pub fn with_verdicts(mut self, verdicts: &[TheoremVerdict]) -> Self {
        self.verdicts = verdicts
            .iter()
            .map(|v| VerdictRow {
                theorem: v.theorem_id.to_string(),
                hypothesis_met: v.hypothesis_met,
                claim_holds: v.claim_holds,
                lhs: v.lhs.to_string(),
                rhs: v.rhs.to_string(),
                equality: v.equality,
                equality_condition_met: v.equality_condition_met,
                violated: v.violated(),
                witness: v.witness.clone(),
            })
            .collect();
        self
    }

    pub fn render_human(&self) -> String {
        let mut out = String::new();
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "instance: seed {seed}");
            for e in &self.graph.edges {
                let _ = writeln!(out, "  {} {} {}", e.u, e.v, e.length);
            }
        }
        let _ = writeln!(out, "weight: {} ({})", self.weight, self.monotonicity);
        for e in &self.edges {
            let _ = write!(out, "{}-{} (d = {}): κ = {}", e.u, e.v, e.length, e.kappa);
            if let Some(x) = e.kappa_approx {
                let _ = write!(out, " [≈ {x:.6}, approximate]");
            }
            if e.agree {
                let _ = writeln!(out, "  pieces {}", e.profile_pieces);
            } else {
                let _ = writeln!(
                    out,
                    "  DISAGREE star {} laplacian {} limit {}",
                    e.kappa_star, e.kappa_laplacian, e.kappa_limit
                );
            }
        }
        if let Some(ok) = self.methods_agree {
            let _ = writeln!(out, "agreement: {}", if ok { "OK" } else { "FAILED" });
        }
        if let Some(t) = &self.total {
            let _ = writeln!(out, "K(G) = {}", t.total_curvature);
            if let Some(x) = t.total_approx {
                let _ = writeln!(out, "  ≈ {x:.6} (approximate)");
            }
            let _ = writeln!(out, "H(w) = {}", t.h_of_w);
            let _ = writeln!(out, "2|V| - H(w) = {}", t.general_bound);
            let _ = writeln!(out, "2|V| - 2|E| = {}", t.euler_bound);
            let _ = writeln!(out, "girth = {}, treelike = {}", t.girth, t.treelike);
        }
        if let Some(p) = &self.profile {
            let _ = writeln!(out, "profile {}-{}: κ = {}", p.u, p.v, p.kappa);
            let _ = writeln!(
                out,
                "{:>10} {:>10} {:>10} {:>10}",
                "start", "end", "slope", "intercept"
            );
            for r in &p.pieces {
                let _ = writeln!(
                    out,
                    "{:>10} {:>10} {:>10} {:>10}",
                    r.start, r.end, r.slope, r.intercept
                );
            }
        }
        if let Some(p) = &self.pair {
            let _ = writeln!(
                out,
                "pair {}, {}: d = {}, adjacent = {}",
                p.x, p.y, p.distance, p.adjacent
            );
            if let (Some(a), Some(k)) = (&p.alpha, &p.kappa_alpha) {
                let _ = writeln!(out, "κ_{a} = {k}");
            }
            let _ = writeln!(out, "κ = {}", p.kappa);
        }
        for v in &self.verdicts {
            let status = if !v.hypothesis_met {
                "hypothesis not met"
            } else if v.violated {
                "VIOLATED"
            } else {
                "holds"
            };
            let relation = if v.equality { "equality" } else { "strict" };
            let _ = writeln!(
                out,
                "{}: {status}; lhs {} rhs {} ({relation}), equality condition {}",
                v.theorem,
                v.lhs,
                v.rhs,
                if v.equality_condition_met {
                    "met"
                } else {
                    "not met"
                }
            );
            if let Some(w) = &v.witness {
                let _ = writeln!(out, "  {w}");
            }
        }
        out
    }
}

pub fn ratio_f64(r: &Ratio) -> f64 {
    to_f64(r)
}
