//! Random-walk measures, Wasserstein-1 distance (primal and dual) and
//! star-couplings.

use crate::graph::{GraphError, Vertex, WeightedGraph};
use crate::lp::{Direction, LinearProgram, LpStatus, Relation};
use crate::ratio::{int, Ratio};
use crate::weight::WeightModel;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::sync::atomic::{AtomicU64, Ordering};
use thiserror::Error;

static SLACKNESS_CHECKS: AtomicU64 = AtomicU64::new(0);

/// How many (plan, potential) pairs have passed through
/// [`check_complementary_slackness`] in this process.
pub fn slackness_checks_performed() -> u64 {
    SLACKNESS_CHECKS.load(Ordering::Relaxed)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransportError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("idleness {0} is outside [0, 1]")]
    AlphaOutOfRange(Ratio),
    #[error("potential rounding needs integer edge lengths")]
    NonIntegerMetric,
    #[error("vertex index {0} is out of range")]
    VertexOutOfRange(Vertex),
}

/// A finitely supported probability measure. Zero masses are not stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distribution {
    mass: BTreeMap<Vertex, Ratio>,
}

impl Distribution {
    /// Returns `None` unless every mass is nonnegative and they sum to one.
    pub fn new(masses: impl IntoIterator<Item = (Vertex, Ratio)>) -> Option<Self> {
        let mut mass: BTreeMap<Vertex, Ratio> = BTreeMap::new();
        for (x, m) in masses {
            if m.is_negative() {
                return None;
            }
            *mass.entry(x).or_insert_with(Ratio::zero) += m;
        }
        mass.retain(|_, m| !m.is_zero());
        let total: Ratio = mass.values().sum();
        total.is_one().then_some(Self { mass })
    }

    pub fn dirac(x: Vertex) -> Self {
        Self {
            mass: BTreeMap::from([(x, Ratio::one())]),
        }
    }

    pub fn mass(&self, x: Vertex) -> Ratio {
        self.mass.get(&x).cloned().unwrap_or_else(Ratio::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.mass.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vertex, &Ratio)> {
        self.mass.iter().map(|(x, m)| (*x, m))
    }

    /// `t·self + (1-t)·other` for `t` in `[0, 1]`.
    pub fn mix(&self, other: &Self, t: &Ratio) -> Self {
        let s = Ratio::one() - t;
        Self::new(
            self.iter()
                .map(|(x, m)| (x, m * t))
                .chain(other.iter().map(|(x, m)| (x, m * &s))),
        )
        .expect("convex combination of distributions")
    }
}

/// `μ_x^α`: mass `α` at `x`, `(1-α)·w_xz/D_x` at each neighbor `z`.
pub fn mu_alpha(
    g: &WeightedGraph,
    wm: &WeightModel,
    x: Vertex,
    alpha: &Ratio,
) -> Result<Distribution, TransportError> {
    if x >= g.num_vertices() {
        return Err(TransportError::VertexOutOfRange(x));
    }
    if alpha.is_negative() || *alpha > Ratio::one() {
        return Err(TransportError::AlphaOutOfRange(alpha.clone()));
    }
    let rest = Ratio::one() - alpha;
    let dx = wm.degree(x);
    let masses = std::iter::once((x, alpha.clone()))
        .chain(g.neighbors(x).map(|z| (z, &rest * wm.weight(g, x, z) / dx)));
    Ok(Distribution::new(masses).expect("random-walk step is a probability measure"))
}

/// A transport plan between two distributions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coupling {
    pub plan: BTreeMap<(Vertex, Vertex), Ratio>,
}

impl Coupling {
    pub fn get(&self, a: Vertex, b: Vertex) -> Ratio {
        self.plan.get(&(a, b)).cloned().unwrap_or_else(Ratio::zero)
    }

    pub fn cost(&self, g: &WeightedGraph) -> Ratio {
        self.plan
            .iter()
            .map(|((a, b), m)| m * g.distance(*a, *b))
            .sum()
    }

    /// Nonnegativity and both marginal conditions, exactly.
    pub fn couples(&self, mu1: &Distribution, mu2: &Distribution) -> bool {
        if self.plan.values().any(|m| m.is_negative()) {
            return false;
        }
        let mut rows: BTreeMap<Vertex, Ratio> = BTreeMap::new();
        let mut cols: BTreeMap<Vertex, Ratio> = BTreeMap::new();
        for ((a, b), m) in &self.plan {
            *rows.entry(*a).or_insert_with(Ratio::zero) += m;
            *cols.entry(*b).or_insert_with(Ratio::zero) += m;
        }
        rows.retain(|_, m| !m.is_zero());
        cols.retain(|_, m| !m.is_zero());
        rows == mu1.mass && cols == mu2.mass
    }
}

/// A vertex function on a finite support set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Potential {
    pub value: BTreeMap<Vertex, Ratio>,
}

impl Potential {
    pub fn get(&self, x: Vertex) -> &Ratio {
        &self.value[&x]
    }

    /// `f(a) - f(b) <= d(a,b)` for every pair in the support.
    pub fn is_lipschitz(&self, g: &WeightedGraph) -> bool {
        self.value.iter().all(|(a, fa)| {
            self.value
                .iter()
                .all(|(b, fb)| fa - fb <= *g.distance(*a, *b))
        })
    }

    /// `Σ f(x)(μ1(x) - μ2(x))`.
    pub fn objective(&self, mu1: &Distribution, mu2: &Distribution) -> Ratio {
        self.value
            .iter()
            .map(|(x, f)| f * (mu1.mass(*x) - mu2.mass(*x)))
            .sum()
    }

    fn shifted_to_zero_at(mut self, anchor: Vertex) -> Self {
        let base = self.value[&anchor].clone();
        if !base.is_zero() {
            for v in self.value.values_mut() {
                *v -= &base;
            }
        }
        self
    }
}

/// Optimal primal/dual pair for one transport problem.
#[derive(Debug, Clone)]
pub struct Transport {
    pub distance: Ratio,
    pub coupling: Coupling,
    pub potential: Potential,
}

/// Exact `W(μ1, μ2)` with an optimal coupling and a Kantorovich potential on
/// `supp(μ1) ∪ supp(μ2)`, normalized to vanish at the smallest vertex of
/// `supp(μ2)`.
pub fn wasserstein(g: &WeightedGraph, mu1: &Distribution, mu2: &Distribution) -> Transport {
    let support: BTreeSet<Vertex> = mu1.support().chain(mu2.support()).collect();
    let anchor = mu2.support().next().expect("distributions are nonempty");
    wasserstein_on(g, mu1, mu2, &support, anchor)
}

/// As [`wasserstein`], with the potential defined on `support` (which must
/// contain both supports) and pinned to zero at `anchor`.
pub fn wasserstein_on(
    g: &WeightedGraph,
    mu1: &Distribution,
    mu2: &Distribution,
    support: &BTreeSet<Vertex>,
    anchor: Vertex,
) -> Transport {
    debug_assert!(mu1
        .support()
        .chain(mu2.support())
        .all(|x| support.contains(&x)));
    debug_assert!(support.contains(&anchor));
    let coupling = optimal_coupling(g, mu1, mu2);
    let (dual_value, potential) = kantorovich_potential(g, mu1, mu2, support, anchor);
    let distance = coupling.cost(g);
    assert_eq!(distance, dual_value, "transport duality gap");
    Transport {
        distance,
        coupling,
        potential,
    }
}

fn optimal_coupling(g: &WeightedGraph, mu1: &Distribution, mu2: &Distribution) -> Coupling {
    let rows: Vec<(Vertex, &Ratio)> = mu1.iter().collect();
    let cols: Vec<(Vertex, &Ratio)> = mu2.iter().collect();
    let nc = cols.len();
    let mut lp = LinearProgram::new(rows.len() * nc, Direction::Minimize);
    for (i, (a, _)) in rows.iter().enumerate() {
        for (j, (b, _)) in cols.iter().enumerate() {
            lp.set_objective(i * nc + j, g.distance(*a, *b).clone());
        }
    }
    for (i, (_, m)) in rows.iter().enumerate() {
        let coeffs = (0..nc).map(|j| (i * nc + j, Ratio::one())).collect();
        lp.add_constraint(coeffs, Relation::Eq, (*m).clone());
    }
    // One column constraint is implied by the others and total mass.
    for (j, (_, m)) in cols.iter().enumerate().skip(1) {
        let coeffs = (0..rows.len())
            .map(|i| (i * nc + j, Ratio::one()))
            .collect();
        lp.add_constraint(coeffs, Relation::Eq, (*m).clone());
    }
    let sol = lp.solve();
    assert_eq!(
        sol.status,
        LpStatus::Optimal,
        "transport LP is always feasible and bounded"
    );
    let mut plan = BTreeMap::new();
    for (i, (a, _)) in rows.iter().enumerate() {
        for (j, (b, _)) in cols.iter().enumerate() {
            let m = &sol.assignment[i * nc + j];
            if !m.is_zero() {
                plan.insert((*a, *b), m.clone());
            }
        }
    }
    Coupling { plan }
}

fn kantorovich_potential(
    g: &WeightedGraph,
    mu1: &Distribution,
    mu2: &Distribution,
    support: &BTreeSet<Vertex>,
    anchor: Vertex,
) -> (Ratio, Potential) {
    let verts: Vec<Vertex> = support.iter().copied().collect();
    let mut lp = LinearProgram::new(verts.len(), Direction::Maximize);
    for (i, &x) in verts.iter().enumerate() {
        lp.set_objective(i, mu1.mass(x) - mu2.mass(x));
        if x == anchor {
            lp.set_bounds(i, Some(Ratio::zero()), Some(Ratio::zero()));
        } else {
            lp.set_free(i);
        }
    }
    add_lipschitz_rows(&mut lp, g, &verts);
    let sol = lp.solve();
    assert_eq!(
        sol.status,
        LpStatus::Optimal,
        "dual transport LP is bounded once pinned"
    );
    let potential = Potential {
        value: verts.iter().copied().zip(sol.assignment).collect(),
    };
    (sol.value, potential.shifted_to_zero_at(anchor))
}

/// `f(a) - f(b) <= d(a,b)` for every ordered pair of distinct vertices.
pub(crate) fn add_lipschitz_rows(lp: &mut LinearProgram, g: &WeightedGraph, verts: &[Vertex]) {
    for (i, &a) in verts.iter().enumerate() {
        for (j, &b) in verts.iter().enumerate() {
            if i != j {
                lp.add_constraint(
                    vec![(i, Ratio::one()), (j, -Ratio::one())],
                    Relation::Le,
                    g.distance(a, b).clone(),
                );
            }
        }
    }
}

/// Returns the first pair `(a, b)`, `a != b`, carrying mass under `coupling`
/// with `f(a) - f(b) != d(a, b)`, or `None` when slackness holds everywhere.
pub fn complementary_slackness_witness(
    coupling: &Coupling,
    potential: &Potential,
    g: &WeightedGraph,
) -> Option<(Vertex, Vertex)> {
    coupling
        .plan
        .iter()
        .filter(|((a, b), m)| a != b && !m.is_zero())
        .map(|((a, b), _)| (*a, *b))
        .find(|&(a, b)| potential.get(a) - potential.get(b) != *g.distance(a, b))
}

pub fn check_complementary_slackness(
    coupling: &Coupling,
    potential: &Potential,
    g: &WeightedGraph,
) -> bool {
    SLACKNESS_CHECKS.fetch_add(1, Ordering::Relaxed);
    complementary_slackness_witness(coupling, potential, g).is_none()
}

/// Pointwise floor of a potential. With integer edge lengths the result is
/// again 1-Lipschitz.
pub fn integerize_potential(f: &Potential, g: &WeightedGraph) -> Result<Potential, TransportError> {
    if g.edges().iter().any(|e| !e.length.is_integer()) {
        return Err(TransportError::NonIntegerMetric);
    }
    Ok(Potential {
        value: f.value.iter().map(|(x, v)| (*x, v.floor())).collect(),
    })
}

/// A signed plan `B` anchored at `(u, v)` with `B(u,v) > 0`, all other
/// entries `<= 0`, zero total, and rows/columns off the anchor summing to
/// `-μ_u` / `-μ_v` (idleness zero).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarCoupling {
    pub anchor: (Vertex, Vertex),
    pub b: BTreeMap<(Vertex, Vertex), Ratio>,
}

impl StarCoupling {
    pub fn get(&self, x: Vertex, y: Vertex) -> Ratio {
        self.b.get(&(x, y)).cloned().unwrap_or_else(Ratio::zero)
    }

    /// `Σ B(x,y) d(x,y)`.
    pub fn objective(&self, g: &WeightedGraph) -> Ratio {
        self.b
            .iter()
            .map(|((x, y), m)| m * g.distance(*x, *y))
            .sum()
    }

    /// Checks every defining condition and `B(u,v) <= 2`; returns a
    /// description of the first failure.
    pub fn validate(&self, g: &WeightedGraph, wm: &WeightModel) -> Result<(), String> {
        let (u, v) = self.anchor;
        let zero = Ratio::zero();
        let buv = self.get(u, v);
        if !buv.is_positive() {
            return Err(format!("B(u,v) = {buv} is not positive"));
        }
        if buv > int(2) {
            return Err(format!("B(u,v) = {buv} exceeds 2"));
        }
        if let Some(((x, y), m)) = self.b.iter().find(|(k, m)| **k != (u, v) && **m > zero) {
            return Err(format!("B({x},{y}) = {m} is positive"));
        }
        let total: Ratio = self.b.values().sum();
        if !total.is_zero() {
            return Err(format!("total mass {total} is not zero"));
        }
        let mu_u = mu_alpha(g, wm, u, &zero).map_err(|e| e.to_string())?;
        let mu_v = mu_alpha(g, wm, v, &zero).map_err(|e| e.to_string())?;
        let mut rows: BTreeMap<Vertex, Ratio> = BTreeMap::new();
        let mut cols: BTreeMap<Vertex, Ratio> = BTreeMap::new();
        for ((x, y), m) in &self.b {
            *rows.entry(*x).or_insert_with(Ratio::zero) += m;
            *cols.entry(*y).or_insert_with(Ratio::zero) += m;
        }
        for x in 0..g.num_vertices() {
            if x != u {
                let r = rows.get(&x).cloned().unwrap_or_else(Ratio::zero);
                if r != -mu_u.mass(x) {
                    return Err(format!("row {x} sums to {r}"));
                }
            }
            if x != v {
                let c = cols.get(&x).cloned().unwrap_or_else(Ratio::zero);
                if c != -mu_v.mass(x) {
                    return Err(format!("column {x} sums to {c}"));
                }
            }
        }
        Ok(())
    }

    /// `1_{(u,v)} - (1-α)·B`, a coupling of `μ_u^α` and `μ_v^α` whenever
    /// `(1-α)·B(u,v) <= 1`.
    pub fn to_coupling(&self, alpha: &Ratio) -> Option<Coupling> {
        let (u, v) = self.anchor;
        let s = Ratio::one() - alpha;
        if &s * self.get(u, v) > Ratio::one() {
            return None;
        }
        let mut plan: BTreeMap<(Vertex, Vertex), Ratio> =
            self.b.iter().map(|(k, m)| (*k, -(&s * m))).collect();
        *plan.entry((u, v)).or_insert_with(Ratio::zero) += Ratio::one();
        plan.retain(|_, m| !m.is_zero());
        Some(Coupling { plan })
    }

    /// Inverse of [`StarCoupling::to_coupling`] for `α < 1`.
    pub fn from_coupling(anchor: (Vertex, Vertex), coupling: &Coupling, alpha: &Ratio) -> Self {
        let s = Ratio::one() - alpha;
        assert!(s.is_positive(), "idleness must be below one");
        let mut b: BTreeMap<(Vertex, Vertex), Ratio> =
            coupling.plan.iter().map(|(k, m)| (*k, -m / &s)).collect();
        *b.entry(anchor).or_insert_with(Ratio::zero) += s.recip();
        b.retain(|_, m| !m.is_zero());
        Self { anchor, b }
    }
}

/// Maximizes `Σ B(x,y) d(x,y)` over star-couplings anchored at `(u, v)`
/// supported on `N(u) × N(v)`. Returns the optimal value and a maximizer.
pub fn solve_star_coupling(
    g: &WeightedGraph,
    wm: &WeightModel,
    u: Vertex,
    v: Vertex,
) -> Result<(Ratio, StarCoupling), TransportError> {
    if !g.adjacent(u, v) {
        return Err(GraphError::NotAdjacent(g.name(u).into(), g.name(v).into()).into());
    }
    let rows = g.closed_neighborhood(u);
    let cols = g.closed_neighborhood(v);
    let nc = cols.len();
    let var = |i: usize, j: usize| i * nc + j;
    let zero = Ratio::zero();
    let mu_u = mu_alpha(g, wm, u, &zero)?;
    let mu_v = mu_alpha(g, wm, v, &zero)?;

    let mut lp = LinearProgram::new(rows.len() * nc, Direction::Maximize);
    for (i, &x) in rows.iter().enumerate() {
        for (j, &y) in cols.iter().enumerate() {
            let k = var(i, j);
            lp.set_objective(k, g.distance(x, y).clone());
            if (x, y) == (u, v) {
                lp.set_free(k);
            } else {
                lp.set_bounds(k, None, Some(Ratio::zero()));
            }
        }
    }
    for (i, &x) in rows.iter().enumerate() {
        if x != u {
            let coeffs = (0..nc).map(|j| (var(i, j), Ratio::one())).collect();
            lp.add_constraint(coeffs, Relation::Eq, -mu_u.mass(x));
        }
    }
    for (j, &y) in cols.iter().enumerate() {
        if y != v {
            let coeffs = (0..rows.len()).map(|i| (var(i, j), Ratio::one())).collect();
            lp.add_constraint(coeffs, Relation::Eq, -mu_v.mass(y));
        }
    }
    let all = (0..rows.len() * nc).map(|k| (k, Ratio::one())).collect();
    lp.add_constraint(all, Relation::Eq, Ratio::zero());

    let sol = lp.solve();
    assert_eq!(
        sol.status,
        LpStatus::Optimal,
        "star-coupling LP is feasible and bounded"
    );
    let mut b = BTreeMap::new();
    for (i, &x) in rows.iter().enumerate() {
        for (j, &y) in cols.iter().enumerate() {
            let m = &sol.assignment[var(i, j)];
            if !m.is_zero() {
                b.insert((x, y), m.clone());
            }
        }
    }
    Ok((sol.value, StarCoupling { anchor: (u, v), b }))
}
