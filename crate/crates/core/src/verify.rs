//! Verdicts for the total-curvature bounds and the graph Gauss-Bonnet
//! identity.
//!
//! A verdict always records whether its hypothesis is in force; the claim
//! and the equality characterization are evaluated either way, so any input
//! can be run through every check.

use crate::curvature::{total_curvature_with, CurvatureReport};
use crate::exec::Execution;
use crate::graph::WeightedGraph;
use crate::ratio::{int, Ratio};
use crate::weight::{Monotonicity, WeightModel};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TheoremId {
    /// `K(G) >= 2|V| - H(w)`, equality iff treelike.
    GeneralLower,
    /// `K(G) >= 2|V| - 2|E|` for non-increasing `F`.
    MainLower,
    /// `K(G) <= 2|V| - 2|E|` for treelike `d` and increasing `F`.
    Upper,
    /// `K(G) = 2 - 2(|E| - |V| + 1)` for unit lengths and girth >= 6.
    GaussBonnet,
    /// `w_e d(e)/d(f) + w_f d(f)/d(e) <= w_e + w_f` for non-increasing `F`.
    WeightIneqDec,
    /// The reverse inequality for increasing `F`.
    WeightIneqInc,
}

impl TheoremId {
    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::GeneralLower => "general_lower",
            TheoremId::MainLower => "main_lower",
            TheoremId::Upper => "upper",
            TheoremId::GaussBonnet => "gauss_bonnet",
            TheoremId::WeightIneqDec => "weight_ineq_dec",
            TheoremId::WeightIneqInc => "weight_ineq_inc",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremVerdict {
    pub theorem_id: TheoremId,
    pub hypothesis_met: bool,
    pub claim_holds: bool,
    pub lhs: Ratio,
    pub rhs: Ratio,
    pub equality: bool,
    pub equality_condition_met: bool,
    pub witness: Option<String>,
}

impl TheoremVerdict {
    /// An in-force theorem whose claim fails or whose equality case does not
    /// match its characterization. Always a defect.
    pub fn violated(&self) -> bool {
        self.hypothesis_met && (!self.claim_holds || self.equality != self.equality_condition_met)
    }
}

fn two_v(g: &WeightedGraph) -> Ratio {
    int(2 * g.num_vertices() as i64)
}

fn euler_bound(g: &WeightedGraph) -> Ratio {
    int(2 * g.num_vertices() as i64 - 2 * g.num_edges() as i64)
}

fn treelike_witness_text(g: &WeightedGraph) -> Option<String> {
    g.treelike_witness().map(|w| {
        format!(
            "edge {}-{}: d({},{}) = {} < {}",
            g.name(w.edge.0),
            g.name(w.edge.1),
            g.name(w.k),
            g.name(w.l),
            w.distance,
            w.detour
        )
    })
}

pub fn general_lower_from(g: &WeightedGraph, report: &CurvatureReport) -> TheoremVerdict {
    let rhs = two_v(g) - &report.h_of_w;
    TheoremVerdict {
        theorem_id: TheoremId::GeneralLower,
        hypothesis_met: true,
        claim_holds: report.total >= rhs,
        equality: report.total == rhs,
        lhs: report.total.clone(),
        rhs,
        equality_condition_met: report.treelike,
        witness: treelike_witness_text(g),
    }
}

pub fn main_lower_from(
    g: &WeightedGraph,
    wm: &WeightModel,
    report: &CurvatureReport,
) -> TheoremVerdict {
    let rhs = euler_bound(g);
    let uniform_girth = g.uniform_length() && report.girth.at_least(6);
    let treelike_constant = report.treelike && wm.constant_on_lengths();
    TheoremVerdict {
        theorem_id: TheoremId::MainLower,
        hypothesis_met: wm.monotonicity() == Monotonicity::NonIncreasing,
        claim_holds: report.total >= rhs,
        equality: report.total == rhs,
        lhs: report.total.clone(),
        rhs,
        equality_condition_met: uniform_girth || treelike_constant,
        witness: Some(format!(
            "uniform & girth>=6: {uniform_girth}; treelike & F constant: {treelike_constant}"
        )),
    }
}

pub fn upper_from(g: &WeightedGraph, wm: &WeightModel, report: &CurvatureReport) -> TheoremVerdict {
    let rhs = euler_bound(g);
    TheoremVerdict {
        theorem_id: TheoremId::Upper,
        hypothesis_met: report.treelike && wm.monotonicity() == Monotonicity::Increasing,
        claim_holds: report.total <= rhs,
        equality: report.total == rhs,
        lhs: report.total.clone(),
        rhs,
        equality_condition_met: g.uniform_length(),
        witness: treelike_witness_text(g),
    }
}

pub fn gauss_bonnet_from(g: &WeightedGraph, report: &CurvatureReport) -> TheoremVerdict {
    let girth_ok = report.girth.at_least(6);
    let uniform = g.uniform_length();
    let genus = g.num_edges() as i64 - g.num_vertices() as i64 + 1;
    let chi = int(2 - 2 * genus);
    let holds = report.total == chi;
    let witness = match (girth_ok, uniform) {
        (true, true) => None,
        _ => Some(format!(
            "hypothesis not met: girth {} (need >= 6), uniform lengths: {uniform}",
            report.girth
        )),
    };
    TheoremVerdict {
        theorem_id: TheoremId::GaussBonnet,
        hypothesis_met: girth_ok && uniform,
        claim_holds: holds,
        lhs: report.total.clone(),
        rhs: chi,
        equality: holds,
        equality_condition_met: girth_ok && uniform,
        witness,
    }
}

/// `K(G) >= 2|V| - H(w)`, equality iff treelike.
pub fn verify_general_lower(g: &WeightedGraph, wm: &WeightModel) -> TheoremVerdict {
    general_lower_from(g, &total_curvature_with(g, wm, Execution::default()))
}

/// `K(G) >= 2|V| - 2|E|` under non-increasing `F`; equality iff
/// (uniform `d` and girth >= 6) or (treelike and `F` constant on the
/// occurring lengths).
pub fn verify_main_lower(g: &WeightedGraph, wm: &WeightModel) -> TheoremVerdict {
    main_lower_from(g, wm, &total_curvature_with(g, wm, Execution::default()))
}

/// `K(G) <= 2|V| - 2|E|` under treelike `d` and increasing `F`; equality iff
/// `d` is constant.
pub fn verify_upper(g: &WeightedGraph, wm: &WeightModel) -> TheoremVerdict {
    upper_from(g, wm, &total_curvature_with(g, wm, Execution::default()))
}

/// `K(G) = χ(G)` for unit-walk curvature on uniform lengths with girth >= 6.
pub fn verify_gauss_bonnet(g: &WeightedGraph) -> TheoremVerdict {
    let wm = WeightModel::unit(g);
    gauss_bonnet_from(g, &total_curvature_with(g, &wm, Execution::default()))
}

/// Both sides of `w_e d(e)/d(f) + w_f d(f)/d(e)` vs `w_e + w_f`, oriented by
/// the monotonicity of `F`.
pub fn check_weight_inequality(
    g: &WeightedGraph,
    wm: &WeightModel,
    e: usize,
    f: usize,
) -> TheoremVerdict {
    let (de, df) = (&g.edges()[e].length, &g.edges()[f].length);
    let (we, wf) = (wm.edge_weight(e), wm.edge_weight(f));
    let lhs = we * de / df + wf * df / de;
    let rhs = we + wf;
    let same_length = de == df;
    let (theorem_id, hypothesis_met, claim_holds, equality_condition_met) = match wm.monotonicity()
    {
        Monotonicity::Increasing => (TheoremId::WeightIneqInc, true, lhs >= rhs, same_length),
        m => (
            TheoremId::WeightIneqDec,
            m == Monotonicity::NonIncreasing,
            lhs <= rhs,
            same_length || wm.f_value(e) == wm.f_value(f),
        ),
    };
    TheoremVerdict {
        theorem_id,
        hypothesis_met,
        claim_holds,
        equality: lhs == rhs,
        lhs,
        rhs,
        equality_condition_met,
        witness: Some(format!("edges {e} and {f}")),
    }
}

/// `w_e d(e)² + w_f d(f)² - (w_e + w_f) d(e) d(f)` and
/// `(F(d(e)) - F(d(f)))(d(e) - d(f))`, which must coincide.
pub fn weight_factorization(
    g: &WeightedGraph,
    wm: &WeightModel,
    e: usize,
    f: usize,
) -> (Ratio, Ratio) {
    let (de, df) = (&g.edges()[e].length, &g.edges()[f].length);
    let (we, wf) = (wm.edge_weight(e), wm.edge_weight(f));
    let expanded = we * de * de + wf * df * df - (we + wf) * de * df;
    let factored = (wm.f_value(e) - wm.f_value(f)) * (de - df);
    (expanded, factored)
}

/// Aggregates the weight inequality over every pair of edges sharing a
/// vertex; the witness names the first pair that fails.
pub fn weight_inequality_over_graph(g: &WeightedGraph, wm: &WeightModel) -> TheoremVerdict {
    let mut pairs = Vec::new();
    for x in 0..g.num_vertices() {
        let inc: Vec<usize> = g.incident_edges(x).collect();
        for (i, &e) in inc.iter().enumerate() {
            for &f in &inc[i + 1..] {
                pairs.push(check_weight_inequality(g, wm, e, f));
            }
        }
    }
    let theorem_id = match wm.monotonicity() {
        Monotonicity::Increasing => TheoremId::WeightIneqInc,
        _ => TheoremId::WeightIneqDec,
    };
    let hypothesis_met = wm.monotonicity() != Monotonicity::Neither;
    let failing = pairs
        .iter()
        .find(|v| !v.claim_holds || v.equality != v.equality_condition_met)
        .and_then(|v| v.witness.clone());
    TheoremVerdict {
        theorem_id,
        hypothesis_met,
        claim_holds: pairs.iter().all(|v| v.claim_holds),
        lhs: pairs.iter().map(|v| &v.lhs).sum(),
        rhs: pairs.iter().map(|v| &v.rhs).sum(),
        equality: pairs.iter().all(|v| v.equality),
        equality_condition_met: pairs.iter().all(|v| v.equality_condition_met),
        witness: failing.or_else(|| Some(format!("{} incident edge pairs", pairs.len()))),
    }
}

/// Every verdict for one input, from a single curvature computation.
pub fn verify_all(
    g: &WeightedGraph,
    wm: &WeightModel,
    exec: Execution,
) -> (CurvatureReport, Vec<TheoremVerdict>) {
    let report = total_curvature_with(g, wm, exec);
    let verdicts = vec![
        general_lower_from(g, &report),
        main_lower_from(g, wm, &report),
        upper_from(g, wm, &report),
        gauss_bonnet_from(g, &report),
        weight_inequality_over_graph(g, wm),
    ];
    (report, verdicts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{cycle_edges, unit_graph};
    use crate::ratio::frac;
    use crate::weight::WeightFamily;

    fn graph(text: &str) -> WeightedGraph {
        WeightedGraph::parse_edge_list(text).unwrap()
    }

    fn model(g: &WeightedGraph, spec: &str) -> WeightModel {
        WeightModel::build(g, WeightFamily::parse(spec).unwrap()).unwrap()
    }

    #[test]
    fn general_lower_examples() {
        let tree = graph("a b 1/2\nb c 3\nb d 2\nd e 1");
        let v = verify_general_lower(&tree, &model(&tree, "power:-1"));
        assert!(v.equality && v.equality_condition_met && !v.violated());

        let c5 = unit_graph(5, &cycle_edges(5));
        let v = verify_general_lower(&c5, &WeightModel::unit(&c5));
        assert!(v.claim_holds && !v.equality && !v.equality_condition_met);

        let c6 = unit_graph(6, &cycle_edges(6));
        let v = verify_general_lower(&c6, &WeightModel::unit(&c6));
        assert!(v.equality && v.equality_condition_met);
    }

    #[test]
    fn main_lower_examples() {
        let tree = graph("a b 1\nb c 1\nb d 1");
        let v = verify_main_lower(&tree, &WeightModel::unit(&tree));
        assert!(v.hypothesis_met && v.equality && v.equality_condition_met);

        let mixed = graph("a b 1\nb c 2\nc d 1");
        let v = verify_main_lower(&mixed, &model(&mixed, "table:1=2,2=1"));
        assert!(v.hypothesis_met && v.claim_holds && !v.equality && !v.equality_condition_met);

        let c5 = unit_graph(5, &cycle_edges(5));
        let v = verify_main_lower(&c5, &WeightModel::unit(&c5));
        assert!(v.claim_holds && !v.equality && !v.violated());
    }

    #[test]
    fn upper_examples() {
        let path = graph("a b 1\nb c 1\nc d 1");
        let v = verify_upper(&path, &model(&path, "power:1"));
        assert!(v.hypothesis_met && v.equality && v.equality_condition_met);

        let mixed = graph("a b 1\nb c 2\nc d 1");
        let v = verify_upper(&mixed, &model(&mixed, "power:1"));
        assert!(v.hypothesis_met && v.claim_holds && !v.equality && !v.violated());

        let lengths = [1, 2, 3, 1, 2, 3];
        let edges: Vec<_> = (0..6).map(|i| (i, (i + 1) % 6, int(lengths[i]))).collect();
        let c6 = WeightedGraph::from_indexed(6, &edges).unwrap();
        let v = verify_upper(&c6, &model(&c6, "power:1"));
        assert!(v.hypothesis_met && v.claim_holds && !v.equality);
    }

    #[test]
    fn gauss_bonnet_examples() {
        let c6 = unit_graph(6, &cycle_edges(6));
        let v = verify_gauss_bonnet(&c6);
        assert!(v.hypothesis_met && v.claim_holds);
        assert_eq!(v.rhs, int(0));
        let tree = graph("a b 2\nb c 2\nc d 2\nc e 2");
        let v = verify_gauss_bonnet(&tree);
        assert!(v.hypothesis_met && v.claim_holds);
        assert_eq!(v.lhs, int(2));
        let c5 = unit_graph(5, &cycle_edges(5));
        let v = verify_gauss_bonnet(&c5);
        assert!(!v.hypothesis_met && v.witness.is_some());
    }

    #[test]
    fn weight_inequality_examples() {
        let g = graph("a b 1\nb c 2\nc d 1");
        let v = check_weight_inequality(&g, &WeightModel::unit(&g), 0, 2);
        assert!(v.equality && v.equality_condition_met);

        let v = check_weight_inequality(&g, &WeightModel::unit(&g), 0, 1);
        assert_eq!(v.lhs, frac(3, 2));
        assert_eq!(v.rhs, frac(3, 2));
        assert!(v.equality && v.equality_condition_met && v.theorem_id == TheoremId::WeightIneqDec);

        let v = check_weight_inequality(&g, &model(&g, "power:1"), 0, 1);
        assert_eq!(v.lhs, frac(5, 2));
        assert_eq!(v.rhs, int(2));
        assert!(v.claim_holds && !v.equality && !v.equality_condition_met);
        assert_eq!(v.theorem_id, TheoremId::WeightIneqInc);
    }

    #[test]
    fn factorization_identity() {
        let g = graph("a b 1/2\nb c 3\nc d 2");
        for spec in ["power:2", "table:1/2=5,2=1,3=7", "exp:3/2"] {
            let wm = match WeightFamily::parse(spec).and_then(|f| WeightModel::build(&g, f)) {
                Ok(wm) => wm,
                Err(_) => continue,
            };
            for e in 0..3 {
                for f in 0..3 {
                    let (a, b) = weight_factorization(&g, &wm, e, f);
                    assert_eq!(a, b);
                }
            }
        }
    }
}
