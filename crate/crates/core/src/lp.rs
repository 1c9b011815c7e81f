//! Exact linear programming: dictionary simplex with Bland's rule over
//! rationals.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};

use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Eq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LowerBound {
    Zero,
    Free,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// `maximize objective · x` subject to the constraints and lower bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
    pub lower_bounds: Vec<LowerBound>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub values: Vec<Rational>,
    pub objective: Rational,
    pub tight: Vec<usize>,
}

impl LinearProgram {
    pub fn maximize(objective: Vec<Rational>) -> Self {
        let n = objective.len();
        LinearProgram {
            num_vars: n,
            objective,
            constraints: Vec::new(),
            lower_bounds: vec![LowerBound::Zero; n],
        }
    }

    pub fn add_le(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> usize {
        self.push(coeffs, Relation::Le, rhs)
    }

    /// Stored as the negated `≤` row.
    pub fn add_ge(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> usize {
        self.push(coeffs.into_iter().map(|c| -c).collect(), Relation::Le, -rhs)
    }

    pub fn add_eq(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> usize {
        self.push(coeffs, Relation::Eq, rhs)
    }

    fn push(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> usize {
        assert_eq!(coeffs.len(), self.num_vars, "row length must equal variable count");
        self.constraints.push(Constraint { coeffs, relation, rhs });
        self.constraints.len() - 1
    }

    pub fn evaluate(&self, x: &[Rational]) -> Rational {
        dot(&self.objective, x)
    }

    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars
            && self
                .lower_bounds
                .iter()
                .zip(x)
                .all(|(lb, v)| *lb == LowerBound::Free || !v.is_negative())
            && self.constraints.iter().all(|c| {
                let lhs = dot(&c.coeffs, x);
                match c.relation {
                    Relation::Le => lhs <= c.rhs,
                    Relation::Eq => lhs == c.rhs,
                }
            })
    }

    pub fn tight_set(&self, x: &[Rational]) -> Vec<usize> {
        (0..self.constraints.len())
            .filter(|&i| dot(&self.constraints[i].coeffs, x) == self.constraints[i].rhs)
            .collect()
    }

    /// One line per row, fractions as `p/q`, zero coefficients omitted.
    pub fn dump(&self) -> String {
        let term_list = |coeffs: &[Rational]| {
            let terms: Vec<String> = coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| format!("{} x{j}", rational::format(c)))
                .collect();
            if terms.is_empty() {
                "0".to_string()
            } else {
                terms.join(" + ")
            }
        };
        let mut out = format!("max {}\n", term_list(&self.objective));
        for (i, c) in self.constraints.iter().enumerate() {
            let rel = match c.relation {
                Relation::Le => "<=",
                Relation::Eq => "=",
            };
            writeln!(out, "c{i}: {} {rel} {}", term_list(&c.coeffs), rational::format(&c.rhs)).unwrap();
        }
        for (j, lb) in self.lower_bounds.iter().enumerate() {
            if *lb == LowerBound::Free {
                writeln!(out, "x{j} free").unwrap();
            }
        }
        out
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .filter(|(x, _)| !x.is_zero())
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn solve(lp: &LinearProgram) -> LpSolution {
    let std = StandardForm::from(lp);
    let outcome = std.solve();
    match outcome {
        Outcome::Optimal(y) => {
            let values = std.recover(&y);
            let objective = lp.evaluate(&values);
            let tight = lp.tight_set(&values);
            debug_assert!(lp.is_feasible(&values));
            LpSolution {
                status: LpStatus::Optimal,
                values,
                objective,
                tight,
            }
        }
        Outcome::Infeasible => empty(lp, LpStatus::Infeasible),
        Outcome::Unbounded => empty(lp, LpStatus::Unbounded),
    }
}

fn empty(lp: &LinearProgram, status: LpStatus) -> LpSolution {
    LpSolution {
        status,
        values: vec![Rational::zero(); lp.num_vars],
        objective: Rational::zero(),
        tight: Vec::new(),
    }
}

/// Maximizes `secondary` over the optimal face of `lp`. A non-optimal
/// primary status is returned unchanged.
pub fn solve_lexicographic(lp: &LinearProgram, secondary: &[Rational]) -> LpSolution {
    let first = solve(lp);
    if first.status != LpStatus::Optimal {
        return first;
    }
    let mut second = lp.clone();
    second.add_eq(lp.objective.clone(), first.objective.clone());
    second.objective = secondary.to_vec();
    let sol = solve(&second);
    if sol.status != LpStatus::Optimal {
        return sol;
    }
    LpSolution {
        objective: lp.evaluate(&sol.values),
        tight: lp.tight_set(&sol.values),
        values: sol.values,
        status: LpStatus::Optimal,
    }
}

/// `max c·y` s.t. `A y ≤ b`, `y ≥ 0`, with free variables split and
/// equalities doubled. Rows with identical coefficients are merged.
struct StandardForm {
    c: Vec<Rational>,
    rows: Vec<(Vec<Rational>, Rational)>,
    /// Column of each original variable, and the column of its negative
    /// part when free.
    columns: Vec<(usize, Option<usize>)>,
}

impl StandardForm {
    fn from(lp: &LinearProgram) -> Self {
        let mut columns = Vec::with_capacity(lp.num_vars);
        let mut width = 0;
        for lb in &lp.lower_bounds {
            match lb {
                LowerBound::Zero => {
                    columns.push((width, None));
                    width += 1;
                }
                LowerBound::Free => {
                    columns.push((width, Some(width + 1)));
                    width += 2;
                }
            }
        }
        let expand = |coeffs: &[Rational]| {
            let mut row = vec![Rational::zero(); width];
            for (j, v) in coeffs.iter().enumerate() {
                let (pos, neg) = columns[j];
                row[pos] = v.clone();
                if let Some(neg) = neg {
                    row[neg] = -v.clone();
                }
            }
            row
        };
        let c = expand(&lp.objective);
        let mut merged: BTreeMap<Vec<Rational>, Rational> = BTreeMap::new();
        let mut order = Vec::new();
        let mut add = |row: Vec<Rational>, rhs: Rational| match merged.get_mut(&row) {
            Some(b) => {
                if rhs < *b {
                    *b = rhs;
                }
            }
            None => {
                order.push(row.clone());
                merged.insert(row, rhs);
            }
        };
        for con in &lp.constraints {
            let row = expand(&con.coeffs);
            if con.relation == Relation::Eq {
                add(row.iter().map(|v| -v.clone()).collect(), -con.rhs.clone());
            }
            add(row, con.rhs.clone());
        }
        let rows = order
            .into_iter()
            .map(|row| {
                let b = merged[&row].clone();
                (row, b)
            })
            .collect();
        StandardForm { c, rows, columns }
    }

    fn recover(&self, y: &[Rational]) -> Vec<Rational> {
        self.columns
            .iter()
            .map(|&(pos, neg)| match neg {
                Some(neg) => &y[pos] - &y[neg],
                None => y[pos].clone(),
            })
            .collect()
    }

    fn solve(&self) -> Outcome {
        let n = self.c.len();
        // Rows that are all zero either hold trivially or make the LP infeasible.
        let mut rows = Vec::new();
        for (a, b) in &self.rows {
            if a.iter().all(|v| v.is_zero()) {
                if b.is_negative() {
                    return Outcome::Infeasible;
                }
            } else {
                rows.push((a.clone(), b.clone()));
            }
        }
        let mut d = Dictionary::new(n, &rows);
        if d.b.iter().any(|b| b.is_negative()) && !d.phase_one() {
            return Outcome::Infeasible;
        }
        d.set_objective(&self.c);
        if !d.run() {
            return Outcome::Unbounded;
        }
        Outcome::Optimal(d.primal(n))
    }
}

enum Outcome {
    Optimal(Vec<Rational>),
    Infeasible,
    Unbounded,
}

/// Chvátal dictionary: `x_B[i] = b[i] - Σ_j a[i][j] x_N[j]`,
/// `z = z0 + Σ_j c[j] x_N[j]`. Variable labels: `0..n` structural,
/// `n..n+m` slacks, `n+m` the phase-one auxiliary.
struct Dictionary {
    basic: Vec<usize>,
    nonbasic: Vec<usize>,
    a: Vec<Vec<Rational>>,
    b: Vec<Rational>,
    c: Vec<Rational>,
    z0: Rational,
}

impl Dictionary {
    fn new(n: usize, rows: &[(Vec<Rational>, Rational)]) -> Self {
        let m = rows.len();
        Dictionary {
            basic: (n..n + m).collect(),
            nonbasic: (0..n).collect(),
            a: rows.iter().map(|(a, _)| a.clone()).collect(),
            b: rows.iter().map(|(_, b)| b.clone()).collect(),
            c: vec![Rational::zero(); n],
            z0: Rational::zero(),
        }
    }

    fn pivot(&mut self, r: usize, s: usize) {
        let piv = self.a[r][s].clone();
        let inv = piv.recip();
        // Solve row r for the entering variable.
        let mut row: Vec<Rational> = self.a[r].iter().map(|v| v * &inv).collect();
        row[s] = inv.clone();
        let rb = &self.b[r] * &inv;
        for i in 0..self.a.len() {
            if i == r || self.a[i][s].is_zero() {
                continue;
            }
            let f = self.a[i][s].clone();
            for j in 0..row.len() {
                if j == s {
                    self.a[i][j] = -(&f * &row[s]);
                } else if !row[j].is_zero() {
                    let delta = &f * &row[j];
                    self.a[i][j] -= delta;
                }
            }
            let delta = &f * &rb;
            self.b[i] -= delta;
        }
        if !self.c[s].is_zero() {
            let f = self.c[s].clone();
            for j in 0..row.len() {
                if j == s {
                    self.c[j] = -(&f * &row[s]);
                } else if !row[j].is_zero() {
                    let delta = &f * &row[j];
                    self.c[j] -= delta;
                }
            }
            self.z0 += &f * &rb;
        }
        self.a[r] = row;
        self.b[r] = rb;
        std::mem::swap(&mut self.basic[r], &mut self.nonbasic[s]);
    }

    /// Bland's rule iterations; false when unbounded.
    fn run(&mut self) -> bool {
        loop {
            let entering = (0..self.nonbasic.len())
                .filter(|&j| self.c[j].is_positive())
                .min_by_key(|&j| self.nonbasic[j]);
            let Some(s) = entering else { return true };
            let mut best: Option<(Rational, usize)> = None;
            for i in 0..self.a.len() {
                if self.a[i][s].is_positive() {
                    let ratio = &self.b[i] / &self.a[i][s];
                    let better = match &best {
                        None => true,
                        Some((r, k)) => ratio < *r || (ratio == *r && self.basic[i] < self.basic[*k]),
                    };
                    if better {
                        best = Some((ratio, i));
                    }
                }
            }
            let Some((_, r)) = best else { return false };
            self.pivot(r, s);
        }
    }

    /// Finds a feasible dictionary via an auxiliary variable; false when the
    /// LP is infeasible.
    fn phase_one(&mut self) -> bool {
        let aux = self.basic.len() + self.nonbasic.len();
        for row in &mut self.a {
            row.push(-Rational::one());
        }
        self.nonbasic.push(aux);
        let s = self.nonbasic.len() - 1;
        self.c = vec![Rational::zero(); self.nonbasic.len()];
        self.c[s] = -Rational::one();
        self.z0 = Rational::zero();
        let r = (0..self.b.len())
            .min_by(|&i, &k| self.b[i].cmp(&self.b[k]).then(self.basic[i].cmp(&self.basic[k])))
            .unwrap();
        self.pivot(r, s);
        let bounded = self.run();
        debug_assert!(bounded);
        if self.z0.is_negative() {
            return false;
        }
        if let Some(r) = self.basic.iter().position(|&v| v == aux) {
            let s = (0..self.nonbasic.len())
                .filter(|&j| !self.a[r][j].is_zero())
                .min_by_key(|&j| self.nonbasic[j]);
            match s {
                Some(s) => self.pivot(r, s),
                // The row reads aux = 0: a redundant constraint.
                None => {
                    self.a.remove(r);
                    self.b.remove(r);
                    self.basic.remove(r);
                }
            }
        }
        if let Some(s) = self.nonbasic.iter().position(|&v| v == aux) {
            for row in &mut self.a {
                row.remove(s);
            }
            self.nonbasic.remove(s);
        }
        true
    }

    fn set_objective(&mut self, c: &[Rational]) {
        self.c = vec![Rational::zero(); self.nonbasic.len()];
        self.z0 = Rational::zero();
        for (j, &v) in self.nonbasic.iter().enumerate() {
            if v < c.len() {
                self.c[j] += &c[v];
            }
        }
        for (i, &v) in self.basic.iter().enumerate() {
            if v < c.len() && !c[v].is_zero() {
                self.z0 += &c[v] * &self.b[i];
                for j in 0..self.nonbasic.len() {
                    if !self.a[i][j].is_zero() {
                        let delta = &c[v] * &self.a[i][j];
                        self.c[j] -= delta;
                    }
                }
            }
        }
    }

    fn primal(&self, n: usize) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); n];
        for (i, &v) in self.basic.iter().enumerate() {
            if v < n {
                x[v] = self.b[i].clone();
            }
        }
        x
    }
}
