//! Exact rational linear programming.
//!
//! A dense two-phase tableau simplex with Bland's rule. Programs in this
//! crate have at most a few dozen variables, so the tableau is kept dense and
//! every pivot is exact. Each optimal solution carries a dual certificate that
//! is re-checked (primal feasibility, dual feasibility, equal objective values)
//! before it is returned.

use crate::ratio::Ratio;
use num_traits::{Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<(usize, Ratio)>,
    pub relation: Relation,
    pub rhs: Ratio,
}

/// A linear program over `num_vars` variables.
///
/// Variables default to `x >= 0`; use [`LinearProgram::set_bounds`] or
/// [`LinearProgram::set_free`] to change that.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    num_vars: usize,
    direction: Direction,
    objective: Vec<Ratio>,
    constraints: Vec<Constraint>,
    lower: Vec<Option<Ratio>>,
    upper: Vec<Option<Ratio>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Objective value; zero unless `status` is `Optimal`.
    pub value: Ratio,
    pub assignment: Vec<Ratio>,
    /// Shadow price of each user constraint: the rate of change of the
    /// optimal value per unit increase of its right-hand side.
    pub dual_assignment: Vec<Ratio>,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

impl LinearProgram {
    pub fn new(num_vars: usize, direction: Direction) -> Self {
        Self {
            num_vars,
            direction,
            objective: vec![Ratio::zero(); num_vars],
            constraints: Vec::new(),
            lower: vec![Some(Ratio::zero()); num_vars],
            upper: vec![None; num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn set_objective(&mut self, var: usize, coeff: Ratio) {
        self.objective[var] = coeff;
    }

    pub fn add_constraint(&mut self, coeffs: Vec<(usize, Ratio)>, relation: Relation, rhs: Ratio) {
        debug_assert!(coeffs.iter().all(|(j, _)| *j < self.num_vars));
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn set_bounds(&mut self, var: usize, lower: Option<Ratio>, upper: Option<Ratio>) {
        self.lower[var] = lower;
        self.upper[var] = upper;
    }

    pub fn set_free(&mut self, var: usize) {
        self.set_bounds(var, None, None);
    }

    /// Objective value of an arbitrary assignment.
    pub fn evaluate(&self, x: &[Ratio]) -> Ratio {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Whether `x` satisfies every constraint and bound exactly.
    pub fn is_feasible(&self, x: &[Ratio]) -> bool {
        if x.len() != self.num_vars {
            return false;
        }
        for j in 0..self.num_vars {
            if matches!(&self.lower[j], Some(l) if x[j] < *l) {
                return false;
            }
            if matches!(&self.upper[j], Some(u) if x[j] > *u) {
                return false;
            }
        }
        self.constraints.iter().all(|c| {
            let lhs: Ratio = c.coeffs.iter().map(|(j, a)| a * &x[*j]).sum();
            match c.relation {
                Relation::Le => lhs <= c.rhs,
                Relation::Eq => lhs == c.rhs,
                Relation::Ge => lhs >= c.rhs,
            }
        })
    }

    pub fn solve(&self) -> LpSolution {
        let std = StandardForm::build(self);
        let outcome = std.solve();
        match outcome {
            Outcome::Infeasible => self.empty(LpStatus::Infeasible),
            Outcome::Unbounded => self.empty(LpStatus::Unbounded),
            Outcome::Optimal { x, y } => {
                assert!(
                    std.certificate_holds(&x, &y),
                    "simplex produced an invalid optimality certificate"
                );
                let assignment = std.recover(&x);
                debug_assert!(self.is_feasible(&assignment));
                let value = self.evaluate(&assignment);
                let sign = match self.direction {
                    Direction::Maximize => Ratio::from_integer(1.into()),
                    Direction::Minimize => Ratio::from_integer((-1).into()),
                };
                let dual_assignment = (0..self.constraints.len()).map(|i| &y[i] * &sign).collect();
                LpSolution {
                    status: LpStatus::Optimal,
                    value,
                    assignment,
                    dual_assignment,
                }
            }
        }
    }

    fn empty(&self, status: LpStatus) -> LpSolution {
        LpSolution {
            status,
            value: Ratio::zero(),
            assignment: Vec::new(),
            dual_assignment: Vec::new(),
        }
    }
}

/// How an original variable is expressed through nonnegative columns.
#[derive(Debug, Clone)]
enum VarMap {
    /// `x = offset + col`
    Shifted { col: usize, offset: Ratio },
    /// `x = offset - col`
    Mirrored { col: usize, offset: Ratio },
    /// `x = plus - minus`
    Split { plus: usize, minus: usize },
}

/// `max c.x  s.t.  A x (rel) b,  x >= 0` with rows kept sparse.
struct StandardForm {
    cols: usize,
    objective: Vec<Ratio>,
    rows: Vec<Vec<(usize, Ratio)>>,
    relations: Vec<Relation>,
    rhs: Vec<Ratio>,
    maps: Vec<VarMap>,
}

enum Outcome {
    Infeasible,
    Unbounded,
    Optimal { x: Vec<Ratio>, y: Vec<Ratio> },
}

impl StandardForm {
    fn build(lp: &LinearProgram) -> Self {
        let mut cols = 0;
        let mut maps = Vec::with_capacity(lp.num_vars);
        let mut bound_rows = Vec::new();
        for j in 0..lp.num_vars {
            let map = match (&lp.lower[j], &lp.upper[j]) {
                (Some(l), upper) => {
                    let col = cols;
                    cols += 1;
                    if let Some(u) = upper {
                        bound_rows.push((col, u - l));
                    }
                    VarMap::Shifted {
                        col,
                        offset: l.clone(),
                    }
                }
                (None, Some(u)) => {
                    let col = cols;
                    cols += 1;
                    VarMap::Mirrored {
                        col,
                        offset: u.clone(),
                    }
                }
                (None, None) => {
                    let plus = cols;
                    cols += 2;
                    VarMap::Split {
                        plus,
                        minus: plus + 1,
                    }
                }
            };
            maps.push(map);
        }

        let sign_max = lp.direction == Direction::Maximize;
        let mut objective = vec![Ratio::zero(); cols];
        for (j, c) in lp.objective.iter().enumerate() {
            let c = if sign_max { c.clone() } else { -c };
            substitute(&maps[j], &c, &mut objective_sink(&mut objective));
        }

        let mut rows = Vec::new();
        let mut relations = Vec::new();
        let mut rhs = Vec::new();
        for con in &lp.constraints {
            let mut dense: Vec<Ratio> = vec![Ratio::zero(); cols];
            let mut b = con.rhs.clone();
            for (j, a) in &con.coeffs {
                let shift = substitute(&maps[*j], a, &mut objective_sink(&mut dense));
                b -= shift;
            }
            rows.push(sparsify(dense));
            relations.push(con.relation);
            rhs.push(b);
        }
        for (col, cap) in bound_rows {
            rows.push(vec![(col, Ratio::from_integer(1.into()))]);
            relations.push(Relation::Le);
            rhs.push(cap);
        }
        Self {
            cols,
            objective,
            rows,
            relations,
            rhs,
            maps,
        }
    }

    fn recover(&self, x: &[Ratio]) -> Vec<Ratio> {
        self.maps
            .iter()
            .map(|m| match m {
                VarMap::Shifted { col, offset } => offset + &x[*col],
                VarMap::Mirrored { col, offset } => offset - &x[*col],
                VarMap::Split { plus, minus } => &x[*plus] - &x[*minus],
            })
            .collect()
    }

    /// Exact check of the primal/dual pair for this standard form.
    fn certificate_holds(&self, x: &[Ratio], y: &[Ratio]) -> bool {
        if x.iter().any(|v| v.is_negative()) {
            return false;
        }
        for (i, row) in self.rows.iter().enumerate() {
            let lhs: Ratio = row.iter().map(|(j, a)| a * &x[*j]).sum();
            let ok = match self.relations[i] {
                Relation::Le => lhs <= self.rhs[i] && !y[i].is_negative(),
                Relation::Eq => lhs == self.rhs[i],
                Relation::Ge => lhs >= self.rhs[i] && !y[i].is_positive(),
            };
            if !ok {
                return false;
            }
        }
        let mut aty = vec![Ratio::zero(); self.cols];
        for (i, row) in self.rows.iter().enumerate() {
            if y[i].is_zero() {
                continue;
            }
            for (j, a) in row {
                aty[*j] += a * &y[i];
            }
        }
        if aty.iter().zip(&self.objective).any(|(l, c)| l < c) {
            return false;
        }
        let primal: Ratio = self.objective.iter().zip(x).map(|(c, v)| c * v).sum();
        let dual: Ratio = self.rhs.iter().zip(y).map(|(b, v)| b * v).sum();
        primal == dual
    }

    fn solve(&self) -> Outcome {
        let m = self.rows.len();
        let n = self.cols;
        // Column layout: structural | one slack/surplus per inequality | artificials.
        let mut row_sign = vec![1i8; m];
        let mut relations = self.relations.clone();
        for i in 0..m {
            if self.rhs[i].is_negative() {
                row_sign[i] = -1;
                relations[i] = match relations[i] {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
            }
        }
        let num_slack = relations.iter().filter(|r| **r != Relation::Eq).count();
        let num_art = relations.iter().filter(|r| **r != Relation::Le).count();
        let art_start = n + num_slack;
        let total = art_start + num_art;
        let width = total + 1;

        let mut tab = Tableau {
            data: vec![vec![Ratio::zero(); width]; m],
            obj: vec![Ratio::zero(); width],
            basis: vec![0; m],
            identity_col: vec![0; m],
            width,
        };
        let mut next_slack = n;
        let mut next_art = art_start;
        for i in 0..m {
            let row = &mut tab.data[i];
            for (j, a) in &self.rows[i] {
                row[*j] = if row_sign[i] < 0 { -a } else { a.clone() };
            }
            row[total] = if row_sign[i] < 0 {
                -&self.rhs[i]
            } else {
                self.rhs[i].clone()
            };
            match relations[i] {
                Relation::Le => {
                    row[next_slack] = Ratio::from_integer(1.into());
                    tab.basis[i] = next_slack;
                    tab.identity_col[i] = next_slack;
                    next_slack += 1;
                }
                Relation::Ge => {
                    row[next_slack] = Ratio::from_integer((-1).into());
                    next_slack += 1;
                    row[next_art] = Ratio::from_integer(1.into());
                    tab.basis[i] = next_art;
                    tab.identity_col[i] = next_art;
                    next_art += 1;
                }
                Relation::Eq => {
                    row[next_art] = Ratio::from_integer(1.into());
                    tab.basis[i] = next_art;
                    tab.identity_col[i] = next_art;
                    next_art += 1;
                }
            }
        }

        // Phase 1: maximize -(sum of artificials).
        if num_art > 0 {
            let mut cost = vec![Ratio::zero(); total];
            for c in cost.iter_mut().skip(art_start) {
                *c = Ratio::from_integer((-1).into());
            }
            tab.load_objective(&cost);
            let bounded = tab.run(total);
            debug_assert!(bounded, "phase one is always bounded");
            if tab.obj[total].is_positive() {
                // obj[rhs] holds minus the objective value; positive means
                // some artificial variable is stuck above zero.
                return Outcome::Infeasible;
            }
            tab.evict_artificials(art_start);
        }

        // Phase 2 over structural and slack columns only.
        let mut cost = vec![Ratio::zero(); total];
        cost[..n].clone_from_slice(&self.objective);
        tab.load_objective(&cost);
        if !tab.run(art_start) {
            return Outcome::Unbounded;
        }

        let mut x = vec![Ratio::zero(); n];
        for (i, &b) in tab.basis.iter().enumerate() {
            if b < n {
                x[b] = tab.data[i][total].clone();
            }
        }
        // y_i = c_B B^{-1} e_i; the identity columns carry zero cost, so the
        // reduced cost there is exactly -y_i.
        let y = (0..m)
            .map(|i| {
                let v = -&tab.obj[tab.identity_col[i]];
                if row_sign[i] < 0 {
                    -v
                } else {
                    v
                }
            })
            .collect();
        Outcome::Optimal { x, y }
    }
}

struct Tableau {
    data: Vec<Vec<Ratio>>,
    /// Reduced costs; the last entry is minus the current objective value.
    obj: Vec<Ratio>,
    basis: Vec<usize>,
    identity_col: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn load_objective(&mut self, cost: &[Ratio]) {
        let rhs = self.width - 1;
        self.obj = vec![Ratio::zero(); self.width];
        self.obj[..cost.len()].clone_from_slice(cost);
        for i in 0..self.data.len() {
            let cb = &cost[self.basis[i]];
            if cb.is_zero() {
                continue;
            }
            let cb = cb.clone();
            for j in 0..=rhs {
                if !self.data[i][j].is_zero() {
                    let delta = &cb * &self.data[i][j];
                    self.obj[j] -= delta;
                }
            }
        }
    }

    /// Bland's rule pivoting over columns `0..limit`. Returns false when the
    /// objective is unbounded.
    fn run(&mut self, limit: usize) -> bool {
        let rhs = self.width - 1;
        loop {
            let Some(enter) = (0..limit).find(|&j| self.obj[j].is_positive()) else {
                return true;
            };
            let mut leave: Option<(usize, Ratio)> = None;
            for i in 0..self.data.len() {
                let a = &self.data[i][enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.data[i][rhs] / a;
                let better = match &leave {
                    None => true,
                    Some((k, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*k])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((row, _)) = leave else {
                return false;
            };
            self.pivot(row, enter);
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.data[row][col].clone();
        if !num_traits::One::is_one(&p) {
            for v in self.data[row].iter_mut() {
                if !v.is_zero() {
                    *v /= &p;
                }
            }
        }
        let support: Vec<usize> = (0..self.width)
            .filter(|&j| !self.data[row][j].is_zero())
            .collect();
        let pivot_row = self.data[row].clone();
        for (i, r) in self.data.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let t = r[col].clone();
            for &j in &support {
                r[j] -= &t * &pivot_row[j];
            }
        }
        if !self.obj[col].is_zero() {
            let t = self.obj[col].clone();
            for &j in &support {
                self.obj[j] -= &t * &pivot_row[j];
            }
        }
        self.basis[row] = col;
    }

    /// Pivots zero-level artificial variables out of the basis where some
    /// non-artificial column allows it. Rows where none does are redundant and
    /// keep their artificial at zero for the rest of the solve.
    fn evict_artificials(&mut self, art_start: usize) {
        for i in 0..self.data.len() {
            if self.basis[i] < art_start {
                continue;
            }
            if let Some(j) = (0..art_start).find(|&j| !self.data[i][j].is_zero()) {
                self.pivot(i, j);
            }
        }
    }
}

fn objective_sink(target: &mut [Ratio]) -> impl FnMut(usize, Ratio) + '_ {
    move |col, v| target[col] += v
}

/// Adds `coeff * x_j` expressed over standard-form columns; returns the
/// constant part `coeff * offset`.
fn substitute(map: &VarMap, coeff: &Ratio, sink: &mut impl FnMut(usize, Ratio)) -> Ratio {
    match map {
        VarMap::Shifted { col, offset } => {
            sink(*col, coeff.clone());
            coeff * offset
        }
        VarMap::Mirrored { col, offset } => {
            sink(*col, -coeff);
            coeff * offset
        }
        VarMap::Split { plus, minus } => {
            sink(*plus, coeff.clone());
            sink(*minus, -coeff);
            Ratio::zero()
        }
    }
}

fn sparsify(dense: Vec<Ratio>) -> Vec<(usize, Ratio)> {
    dense
        .into_iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::{frac, int};

    #[test]
    fn single_upper_bound() {
        let mut lp = LinearProgram::new(1, Direction::Maximize);
        lp.set_objective(0, int(1));
        lp.add_constraint(vec![(0, int(1))], Relation::Le, frac(3, 2));
        let sol = lp.solve();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.value, frac(3, 2));
        assert_eq!(sol.dual_assignment, vec![int(1)]);
    }

    #[test]
    fn unbounded_ray() {
        let mut lp = LinearProgram::new(1, Direction::Maximize);
        lp.set_objective(0, int(1));
        lp.add_constraint(vec![(0, int(1))], Relation::Ge, int(0));
        assert_eq!(lp.solve().status, LpStatus::Unbounded);
    }

    #[test]
    fn infeasible_system() {
        let mut lp = LinearProgram::new(1, Direction::Minimize);
        lp.set_objective(0, int(1));
        lp.add_constraint(vec![(0, int(1))], Relation::Ge, int(2));
        lp.add_constraint(vec![(0, int(1))], Relation::Le, int(1));
        assert_eq!(lp.solve().status, LpStatus::Infeasible);
    }

    #[test]
    fn identity_transport_costs_nothing() {
        // A(i,j) laid out row-major, cost [[0,1],[1,0]].
        let mut lp = LinearProgram::new(4, Direction::Minimize);
        lp.set_objective(1, int(1));
        lp.set_objective(2, int(1));
        let half = frac(1, 2);
        lp.add_constraint(vec![(0, int(1)), (1, int(1))], Relation::Eq, half.clone());
        lp.add_constraint(vec![(2, int(1)), (3, int(1))], Relation::Eq, half.clone());
        lp.add_constraint(vec![(0, int(1)), (2, int(1))], Relation::Eq, half.clone());
        lp.add_constraint(vec![(1, int(1)), (3, int(1))], Relation::Eq, half);
        let sol = lp.solve();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.value, int(0));
        assert!(lp.is_feasible(&sol.assignment));
    }

    #[test]
    fn free_and_bounded_variables() {
        // min x - y  with x free, -2 <= y <= 5, x + y >= 1, x >= -3
        let mut lp = LinearProgram::new(2, Direction::Minimize);
        lp.set_objective(0, int(1));
        lp.set_objective(1, int(-1));
        lp.set_free(0);
        lp.set_bounds(1, Some(int(-2)), Some(int(5)));
        lp.add_constraint(vec![(0, int(1)), (1, int(1))], Relation::Ge, int(1));
        lp.add_constraint(vec![(0, int(1))], Relation::Ge, int(-3));
        let sol = lp.solve();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.value, int(-8));
        assert_eq!(sol.assignment, vec![int(-3), int(5)]);
    }

    #[test]
    fn upper_only_variable() {
        // max x with x <= 7/3 as a bound, no lower bound, and x <= 10 row.
        let mut lp = LinearProgram::new(1, Direction::Maximize);
        lp.set_objective(0, int(1));
        lp.set_bounds(0, None, Some(frac(7, 3)));
        lp.add_constraint(vec![(0, int(1))], Relation::Le, int(10));
        let sol = lp.solve();
        assert_eq!(sol.value, frac(7, 3));
    }

    #[test]
    fn redundant_equalities_are_tolerated() {
        let mut lp = LinearProgram::new(2, Direction::Maximize);
        lp.set_objective(0, int(2));
        lp.set_objective(1, int(1));
        lp.add_constraint(vec![(0, int(1)), (1, int(1))], Relation::Eq, int(1));
        lp.add_constraint(vec![(0, int(2)), (1, int(2))], Relation::Eq, int(2));
        let sol = lp.solve();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.value, int(2));
    }

    #[test]
    fn shadow_prices_for_minimization() {
        // min 3x + 2y  s.t. x + y >= 4, x >= 1
        let mut lp = LinearProgram::new(2, Direction::Minimize);
        lp.set_objective(0, int(3));
        lp.set_objective(1, int(2));
        lp.add_constraint(vec![(0, int(1)), (1, int(1))], Relation::Ge, int(4));
        lp.add_constraint(vec![(0, int(1))], Relation::Ge, int(1));
        let sol = lp.solve();
        assert_eq!(sol.value, int(9));
        assert_eq!(sol.dual_assignment, vec![int(2), int(1)]);
    }
}
