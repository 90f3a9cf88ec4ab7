//! Curvature of weighted graphs.
//!
//! `κ_α(x,y) = 1 - W(μ_x^α, μ_y^α)/d(x,y)` and its limit curvature
//! `κ(x,y) = lim_{α→1} κ_α/(1-α)`, computed three independent ways:
//!
//! * [`kappa_limit`]: extract the exact piecewise-linear idleness profile
//!   `α ↦ κ_α` and read `κ` off its final segment,
//! * [`kappa_star`]: a single LP over star-couplings,
//! * [`kappa_laplacian`]: a single LP over 1-Lipschitz potentials with unit
//!   gradient along the edge, minimizing the gradient of the Laplacian.

use crate::exec::Execution;
use crate::graph::{Girth, GraphError, Vertex, WeightedGraph};
use crate::lp::{Direction, LinearProgram, LpStatus, Relation};
use crate::ratio::{int, Ratio};
use crate::transport::{
    add_lipschitz_rows, check_complementary_slackness, mu_alpha, solve_star_coupling, wasserstein,
    wasserstein_on, Distribution, TransportError,
};
use crate::weight::WeightModel;
use num_traits::{One, Zero};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurvatureError {
    #[error("curvature needs two distinct vertices")]
    SameVertex,
    #[error(transparent)]
    Transport(#[from] TransportError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// `κ = slope·α + intercept`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Line {
    pub slope: Ratio,
    pub intercept: Ratio,
}

impl Line {
    pub fn at(&self, alpha: &Ratio) -> Ratio {
        &self.slope * alpha + &self.intercept
    }

    fn crossing(&self, other: &Line) -> Ratio {
        (&other.intercept - &self.intercept) / (&self.slope - &other.slope)
    }
}

/// Exact piecewise-linear description of `α ↦ κ_α(x,y)` on `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdlenessProfile {
    /// Starts at 0, ends at 1; one more entry than `pieces`.
    pub breakpoints: Vec<Ratio>,
    pub pieces: Vec<Line>,
}

impl IdlenessProfile {
    pub fn num_pieces(&self) -> usize {
        self.pieces.len()
    }

    pub fn value_at(&self, alpha: &Ratio) -> Ratio {
        let i = self.breakpoints[1..]
            .iter()
            .position(|b| alpha <= b)
            .unwrap_or(self.pieces.len() - 1);
        self.pieces[i].at(alpha)
    }

    /// `(start, end, line)` per piece.
    pub fn segments(&self) -> impl Iterator<Item = (&Ratio, &Ratio, &Line)> {
        self.pieces
            .iter()
            .enumerate()
            .map(|(i, l)| (&self.breakpoints[i], &self.breakpoints[i + 1], l))
    }

    pub fn is_continuous(&self) -> bool {
        self.pieces
            .windows(2)
            .zip(&self.breakpoints[1..])
            .all(|(w, b)| w[0].at(b) == w[1].at(b))
    }

    pub fn is_concave(&self) -> bool {
        self.pieces.windows(2).all(|w| w[0].slope > w[1].slope)
    }

    /// Whether a single piece covers `[from, 1]`.
    pub fn linear_on_tail(&self, from: &Ratio) -> bool {
        let last = self.breakpoints.len() - 2;
        self.breakpoints[last] <= *from
    }
}

/// Fixed data for one vertex pair: endpoints, the support `N(x) ∪ N(y)` and
/// the α-endpoint measures used to turn a potential into a line.
struct PairContext<'a> {
    g: &'a WeightedGraph,
    wm: &'a WeightModel,
    x: Vertex,
    y: Vertex,
    d: Ratio,
    support: BTreeSet<Vertex>,
    walk_x: Distribution,
    walk_y: Distribution,
}

struct Sample {
    kappa: Ratio,
    line: Line,
}

impl<'a> PairContext<'a> {
    fn new(
        g: &'a WeightedGraph,
        wm: &'a WeightModel,
        x: Vertex,
        y: Vertex,
    ) -> Result<Self, CurvatureError> {
        if x == y {
            return Err(CurvatureError::SameVertex);
        }
        let walk_x = mu_alpha(g, wm, x, &Ratio::zero())?;
        let walk_y = mu_alpha(g, wm, y, &Ratio::zero())?;
        let support = g
            .closed_neighborhood(x)
            .into_iter()
            .chain(g.closed_neighborhood(y))
            .collect();
        Ok(Self {
            g,
            wm,
            x,
            y,
            d: g.distance(x, y).clone(),
            support,
            walk_x,
            walk_y,
        })
    }

    /// `κ_α` together with the supporting line given by the optimal potential.
    fn sample(&self, alpha: &Ratio) -> Sample {
        let mu_x = mu_alpha(self.g, self.wm, self.x, alpha).expect("alpha checked by caller");
        let mu_y = mu_alpha(self.g, self.wm, self.y, alpha).expect("alpha checked by caller");
        let t = wasserstein_on(self.g, &mu_x, &mu_y, &self.support, self.y);
        assert!(
            check_complementary_slackness(&t.coupling, &t.potential, self.g),
            "optimal plan and potential violate complementary slackness"
        );
        let kappa = Ratio::one() - &t.distance / &self.d;
        // W_f(α) is affine in α: evaluate the potential's objective at α = 0, 1.
        let w0 = t.potential.objective(&self.walk_x, &self.walk_y);
        let w1 = t
            .potential
            .objective(&Distribution::dirac(self.x), &Distribution::dirac(self.y));
        let line = Line {
            slope: -(&w1 - &w0) / &self.d,
            intercept: Ratio::one() - &w0 / &self.d,
        };
        debug_assert_eq!(line.at(alpha), kappa);
        Sample { kappa, line }
    }

    /// Splits `[a, b]` at the crossing of the supporting lines at the two
    /// ends until each part is covered by one of them. `κ_α` is concave, so
    /// every line from an optimal potential lies on or above it.
    fn refine(
        &self,
        a: &Ratio,
        sa: &Sample,
        b: &Ratio,
        sb: &Sample,
        out: &mut Vec<(Ratio, Ratio, Line)>,
        depth: usize,
    ) {
        assert!(depth < 256, "idleness profile refinement did not terminate");
        if sa.line.at(b) == sb.kappa {
            out.push((a.clone(), b.clone(), sa.line.clone()));
            return;
        }
        if sb.line.at(a) == sa.kappa {
            out.push((a.clone(), b.clone(), sb.line.clone()));
            return;
        }
        let mid = sa.line.crossing(&sb.line);
        debug_assert!(*a < mid && mid < *b);
        let sm = self.sample(&mid);
        if sm.kappa == sa.line.at(&mid) {
            out.push((a.clone(), mid.clone(), sa.line.clone()));
            out.push((mid, b.clone(), sb.line.clone()));
            return;
        }
        self.refine(a, sa, &mid, &sm, out, depth + 1);
        self.refine(&mid, &sm, b, sb, out, depth + 1);
    }

    fn profile(&self) -> IdlenessProfile {
        let (zero, one) = (Ratio::zero(), Ratio::one());
        let s0 = self.sample(&zero);
        let s1 = self.sample(&one);
        let mut raw = Vec::new();
        self.refine(&zero, &s0, &one, &s1, &mut raw, 0);

        let mut breakpoints = vec![zero];
        let mut pieces: Vec<Line> = Vec::new();
        for (_, end, line) in raw {
            if pieces.last() == Some(&line) {
                *breakpoints.last_mut().unwrap() = end;
            } else {
                pieces.push(line);
                breakpoints.push(end);
            }
        }
        IdlenessProfile {
            breakpoints,
            pieces,
        }
    }
}

/// `κ_α(x,y) = 1 - W(μ_x^α, μ_y^α)/d(x,y)` for any distinct `x`, `y`.
pub fn kappa_alpha(
    g: &WeightedGraph,
    wm: &WeightModel,
    x: Vertex,
    y: Vertex,
    alpha: &Ratio,
) -> Result<Ratio, CurvatureError> {
    if x == y {
        return Err(CurvatureError::SameVertex);
    }
    let mu_x = mu_alpha(g, wm, x, alpha)?;
    let mu_y = mu_alpha(g, wm, y, alpha)?;
    let t = wasserstein(g, &mu_x, &mu_y);
    Ok(Ratio::one() - t.distance / g.distance(x, y))
}

/// The exact idleness profile of the pair `(x, y)`.
pub fn idleness_profile(
    g: &WeightedGraph,
    wm: &WeightModel,
    x: Vertex,
    y: Vertex,
) -> Result<IdlenessProfile, CurvatureError> {
    Ok(PairContext::new(g, wm, x, y)?.profile())
}

/// `κ(x,y)` from the final segment of the idleness profile, where
/// `κ_α = κ·(1-α)`.
pub fn kappa_limit(
    g: &WeightedGraph,
    wm: &WeightModel,
    x: Vertex,
    y: Vertex,
) -> Result<Ratio, CurvatureError> {
    let profile = idleness_profile(g, wm, x, y)?;
    Ok(limit_from_profile(&profile))
}

fn limit_from_profile(profile: &IdlenessProfile) -> Ratio {
    let last = profile.pieces.last().expect("profiles are nonempty");
    assert_eq!(last.at(&Ratio::one()), Ratio::zero(), "κ_1 must vanish");
    -last.slope.clone()
}

/// `κ(x,y) = sup_B Σ B(a,b) d(a,b) / d(x,y)` over star-couplings.
pub fn kappa_star(
    g: &WeightedGraph,
    wm: &WeightModel,
    x: Vertex,
    y: Vertex,
) -> Result<Ratio, CurvatureError> {
    let (value, _) = solve_star_coupling(g, wm, x, y)?;
    Ok(value / g.distance(x, y))
}

/// `κ(x,y) = min (Δf(x) - Δf(y)) / d(x,y)` over 1-Lipschitz `f` on
/// `N(x) ∪ N(y)` with `f(y) - f(x) = d(x,y)`, where
/// `Δf(z) = Σ_{t∼z} w_zt (f(t) - f(z)) / D_z`.
pub fn kappa_laplacian(
    g: &WeightedGraph,
    wm: &WeightModel,
    x: Vertex,
    y: Vertex,
) -> Result<Ratio, CurvatureError> {
    if !g.adjacent(x, y) {
        return Err(GraphError::NotAdjacent(g.name(x).into(), g.name(y).into()).into());
    }
    let verts: Vec<Vertex> = g
        .closed_neighborhood(x)
        .into_iter()
        .chain(g.closed_neighborhood(y))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let pos = |v: Vertex| verts.binary_search(&v).expect("vertex in support");
    let d = g.distance(x, y);

    let mut lp = LinearProgram::new(verts.len(), Direction::Minimize);
    for i in 0..verts.len() {
        lp.set_free(i);
    }
    lp.set_bounds(pos(x), Some(Ratio::zero()), Some(Ratio::zero()));
    let mut objective = vec![Ratio::zero(); verts.len()];
    for (z, sign) in [(x, Ratio::one()), (y, -Ratio::one())] {
        let scale = &sign / (wm.degree(z) * d);
        for t in g.neighbors(z) {
            let c = wm.weight(g, z, t) * &scale;
            objective[pos(t)] += &c;
            objective[pos(z)] -= c;
        }
    }
    for (i, c) in objective.into_iter().enumerate() {
        lp.set_objective(i, c);
    }
    add_lipschitz_rows(&mut lp, g, &verts);
    lp.add_constraint(
        vec![(pos(y), Ratio::one()), (pos(x), -Ratio::one())],
        Relation::Eq,
        d.clone(),
    );
    let sol = lp.solve();
    assert_eq!(
        sol.status,
        LpStatus::Optimal,
        "Laplacian LP is feasible and bounded"
    );
    Ok(sol.value)
}

/// `H(w) = Σ_{uv∈E} [ Σ_{x∼u} w_ux d(u,x) / (D_u d(u,v)) + Σ_{y∼v} w_vy d(v,y) / (D_v d(u,v)) ]`.
pub fn compute_h(g: &WeightedGraph, wm: &WeightModel) -> Ratio {
    // Σ_{x∼u} w_ux d(u,x) / D_u does not depend on the edge.
    let spread: Vec<Ratio> = (0..g.num_vertices())
        .map(|u| {
            let s: Ratio = g
                .incident_edges(u)
                .map(|id| wm.edge_weight(id) * &g.edges()[id].length)
                .sum();
            s / wm.degree(u)
        })
        .collect();
    g.edges()
        .iter()
        .map(|e| (&spread[e.u] + &spread[e.v]) / &e.length)
        .sum()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeCurvature {
    pub edge: usize,
    pub u: Vertex,
    pub v: Vertex,
    pub kappa_star: Ratio,
    pub kappa_laplacian: Ratio,
    pub kappa_limit: Ratio,
    pub profile_pieces: usize,
}

impl EdgeCurvature {
    pub fn methods_agree(&self) -> bool {
        self.kappa_star == self.kappa_laplacian && self.kappa_star == self.kappa_limit
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EqualityFlags {
    /// `K(G) = 2|V| - H(w)`
    pub general_lower: bool,
    /// `K(G) = 2|V| - 2|E|`
    pub euler: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurvatureReport {
    pub per_edge: Vec<EdgeCurvature>,
    /// `K(G)`, summed from the star-coupling values.
    pub total: Ratio,
    pub h_of_w: Ratio,
    /// `2|V| - H(w)`
    pub general_bound: Ratio,
    /// `2|V| - 2|E|`
    pub bound_2v_minus_2e: Ratio,
    pub treelike: bool,
    pub girth: Girth,
    pub equality_flags: EqualityFlags,
}

impl CurvatureReport {
    pub fn methods_agree(&self) -> bool {
        self.per_edge.iter().all(EdgeCurvature::methods_agree)
    }
}

/// All three curvatures of one edge.
pub fn edge_curvature(g: &WeightedGraph, wm: &WeightModel, edge: usize) -> EdgeCurvature {
    let e = &g.edges()[edge];
    let (u, v) = (e.u, e.v);
    let star = kappa_star(g, wm, u, v).expect("edge endpoints are adjacent");
    let laplacian = kappa_laplacian(g, wm, u, v).expect("edge endpoints are adjacent");
    let profile = idleness_profile(g, wm, u, v).expect("edge endpoints are distinct");
    EdgeCurvature {
        edge,
        u,
        v,
        kappa_star: star,
        kappa_laplacian: laplacian,
        kappa_limit: limit_from_profile(&profile),
        profile_pieces: profile.num_pieces(),
    }
}

pub fn total_curvature(g: &WeightedGraph, wm: &WeightModel) -> CurvatureReport {
    total_curvature_with(g, wm, Execution::default())
}

/// Per-edge curvatures fanned out with `exec`, joined in edge order.
pub fn total_curvature_with(
    g: &WeightedGraph,
    wm: &WeightModel,
    exec: Execution,
) -> CurvatureReport {
    let edges: Vec<usize> = (0..g.num_edges()).collect();
    let per_edge = exec.map(&edges, |&id| edge_curvature(g, wm, id));
    let total: Ratio = per_edge.iter().map(|e| &e.kappa_star).sum();
    let h_of_w = compute_h(g, wm);
    let two_v = int(2 * g.num_vertices() as i64);
    let general_bound = &two_v - &h_of_w;
    let bound_2v_minus_2e = &two_v - int(2 * g.num_edges() as i64);
    let equality_flags = EqualityFlags {
        general_lower: total == general_bound,
        euler: total == bound_2v_minus_2e,
    };
    CurvatureReport {
        per_edge,
        total,
        h_of_w,
        general_bound,
        bound_2v_minus_2e,
        treelike: g.is_treelike(),
        girth: g.girth(),
        equality_flags,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::frac;
    use crate::weight::WeightFamily;

    fn graph(text: &str) -> WeightedGraph {
        WeightedGraph::parse_edge_list(text).unwrap()
    }

    fn cycle(n: usize) -> WeightedGraph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, int(1))).collect();
        WeightedGraph::from_indexed(n, &edges).unwrap()
    }

    #[test]
    fn kappa_alpha_examples() {
        let k2 = graph("u v 1");
        let wm = WeightModel::unit(&k2);
        assert_eq!(kappa_alpha(&k2, &wm, 0, 1, &int(1)).unwrap(), int(0));
        assert_eq!(kappa_alpha(&k2, &wm, 0, 1, &frac(1, 2)).unwrap(), int(1));
        let p3 = graph("a b 1\nb c 1");
        let wm = WeightModel::unit(&p3);
        assert_eq!(kappa_alpha(&p3, &wm, 0, 1, &int(0)).unwrap(), int(0));
        assert_eq!(
            kappa_alpha(&p3, &wm, 0, 0, &int(0)),
            Err(CurvatureError::SameVertex)
        );
        // Non-adjacent pairs are allowed.
        assert!(kappa_alpha(&p3, &wm, 0, 2, &frac(1, 2)).is_ok());
    }

    #[test]
    fn k2_profile() {
        let g = graph("u v 1");
        let p = idleness_profile(&g, &WeightModel::unit(&g), 0, 1).unwrap();
        assert_eq!(p.breakpoints, vec![int(0), frac(1, 2), int(1)]);
        assert_eq!(
            p.pieces[0],
            Line {
                slope: int(2),
                intercept: int(0)
            }
        );
        assert_eq!(
            p.pieces[1],
            Line {
                slope: int(-2),
                intercept: int(2)
            }
        );
        assert!(p.is_concave() && p.is_continuous());
    }

    #[test]
    fn three_methods_on_small_cases() {
        let k2 = graph("u v 1");
        let p3 = graph("a b 1\nb c 1");
        let c6 = cycle(6);
        let s3 = graph("c x1 1\nc x2 1\nc x3 1");
        for (g, expect) in [
            (&k2, int(2)),
            (&p3, int(1)),
            (&c6, int(0)),
            (&s3, frac(2, 3)),
        ] {
            let wm = WeightModel::unit(g);
            let e = &g.edges()[0];
            assert_eq!(kappa_star(g, &wm, e.u, e.v).unwrap(), expect);
            assert_eq!(kappa_laplacian(g, &wm, e.u, e.v).unwrap(), expect);
            assert_eq!(kappa_limit(g, &wm, e.u, e.v).unwrap(), expect);
        }
    }

    #[test]
    fn h_of_w_examples() {
        let c5 = cycle(5);
        assert_eq!(compute_h(&c5, &WeightModel::unit(&c5)), int(10));
        let k2 = graph("u v 7/3");
        let wm = WeightModel::build(&k2, WeightFamily::Power(3)).unwrap();
        assert_eq!(compute_h(&k2, &wm), int(2));
        // P3 with d(ab) = 1, d(bc) = 2, F = 1: w_ab = 1, w_bc = 1/2, D_b = 3/2.
        // Edge ab: a-side 1·1/1 = 1; b-side (1·1 + 1/2·2)/(3/2)/1 = 4/3.
        // Edge bc: b-side (4/3)/2 = 2/3; c-side (1/2·2)/(1/2)/2 = 1.
        let p3 = graph("a b 1\nb c 2");
        assert_eq!(
            compute_h(&p3, &WeightModel::unit(&p3)),
            int(1) + frac(4, 3) + frac(2, 3) + int(1)
        );
    }

    #[test]
    fn totals_for_tree_and_cycles() {
        let tree = graph("a b 1\nb c 1\nb d 1\nd e 1");
        let r = total_curvature(&tree, &WeightModel::unit(&tree));
        assert_eq!(r.total, int(2));
        assert!(r.methods_agree());
        let c6 = cycle(6);
        let r = total_curvature(&c6, &WeightModel::unit(&c6));
        assert_eq!(r.total, int(0));
        assert!(r.equality_flags.euler && r.equality_flags.general_lower);
        let c5 = cycle(5);
        let r = total_curvature(&c5, &WeightModel::unit(&c5));
        assert!(r.total > int(0));
        assert!(!r.treelike);
    }

    #[test]
    fn not_adjacent_is_rejected() {
        let p3 = graph("a b 1\nb c 1");
        let wm = WeightModel::unit(&p3);
        assert!(kappa_star(&p3, &wm, 0, 2).is_err());
        assert!(kappa_laplacian(&p3, &wm, 0, 2).is_err());
    }
}
