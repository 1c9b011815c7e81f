//! Normal forms for optimal cost shares: the ordering of the forest's edges,
//! pushed-to-the-left shares, the CHANGE(j,i) exchange and shares maximized
//! for player two.
//!
//! Positions in an [`EdgeOrdering`] are 0-based.

use std::ops::Range;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::enforce::{CostShares, LpModel};
use crate::error::{Error, Result};
use crate::forests::SteinerForest;
use crate::graph::{EdgeId, Path};
use crate::instance::{Instance, Player};
use crate::lp::{self, LinearProgram, LpStatus};
use crate::rational::{self, Rational};

/// The forest's edges as P₁-left, P₂-left, middle, P₁-right, P₂-right, each
/// segment increasing along its path.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeOrdering {
    pub edges: Vec<EdgeId>,
    pub l1: usize,
    pub l2: usize,
    pub m: usize,
    pub r1: usize,
    pub r2: usize,
    /// Player two's path runs from t₂ to s₂ in this ordering.
    pub p2_reversed: bool,
}

impl EdgeOrdering {
    pub fn position(&self, e: EdgeId) -> Option<usize> {
        self.edges.iter().position(|&x| x == e)
    }

    pub fn middle(&self) -> Range<usize> {
        self.l1 + self.l2..self.l1 + self.l2 + self.m
    }

    /// Positions of the player's path edges, ascending.
    pub fn positions(&self, p: Player) -> Vec<usize> {
        let (l1, l2, m, r1) = (self.l1, self.l2, self.m, self.r1);
        let mut out = Vec::new();
        match p {
            Player::One => {
                out.extend(0..l1);
                out.extend(self.middle());
                out.extend(l1 + l2 + m..l1 + l2 + m + r1);
            }
            Player::Two => {
                out.extend(l1..l1 + l2);
                out.extend(self.middle());
                out.extend(l1 + l2 + m + r1..self.edges.len());
            }
        }
        out
    }
}

pub fn compute_ordering(f: &SteinerForest) -> EdgeOrdering {
    let p1 = &f.p1;
    let shared: Vec<usize> = (0..p1.len()).filter(|&k| f.p2.contains_edge(p1.edges[k])).collect();
    let (Some(&a), Some(&b)) = (shared.first(), shared.last()) else {
        let mut edges = p1.edges.clone();
        edges.extend_from_slice(&f.p2.edges);
        return EdgeOrdering {
            edges,
            l1: p1.len(),
            l2: f.p2.len(),
            m: 0,
            r1: 0,
            r2: 0,
            p2_reversed: false,
        };
    };
    // The shared part of two paths in a forest is one contiguous subpath.
    let first = p1.edges[a];
    let second = if b > a { Some(p1.edges[a + 1]) } else { None };
    let mut p2: Path = f.p2.clone();
    let at = |p: &Path, e: EdgeId| p.edges.iter().position(|&x| x == e).unwrap();
    let reversed = match second {
        Some(s) => at(&p2, s) < at(&p2, first),
        // A single shared edge: compare the vertex it is entered from.
        None => p2.vertices[at(&p2, first)] != p1.vertices[a],
    };
    if reversed {
        p2 = p2.reversed();
    }
    let c = at(&p2, first);
    let m = b - a + 1;
    let mut edges = Vec::with_capacity(f.edges.len());
    edges.extend_from_slice(&p1.edges[..a]);
    edges.extend_from_slice(&p2.edges[..c]);
    edges.extend_from_slice(&p1.edges[a..=b]);
    edges.extend_from_slice(&p1.edges[b + 1..]);
    edges.extend_from_slice(&p2.edges[c + m..]);
    EdgeOrdering {
        edges,
        l1: a,
        l2: c,
        m,
        r1: p1.len() - b - 1,
        r2: p2.len() - c - m,
        p2_reversed: reversed,
    }
}

/// Largest `ε ≥ 0` keeping `shares + ε·direction` feasible for LP(F), found
/// by a one-variable LP. `None` when no row limits the step.
pub fn max_step(model: &LpModel, shares: &CostShares, direction: &[(Player, EdgeId, i64)]) -> Result<Option<Rational>> {
    if !model.is_feasible(shares) {
        return Err(Error::InfeasibleShares);
    }
    let x = model.to_vector(shares);
    let mut d = vec![Rational::zero(); x.len()];
    for &(p, e, s) in direction {
        let j = model.var(p, e).ok_or(Error::InfeasibleShares)?;
        d[j] += rational::int(s);
    }
    let mut lp = LinearProgram::maximize(vec![Rational::one()]);
    for (terms, rhs) in model.rows() {
        let slope: Rational = terms.iter().map(|(j, a)| a * &d[*j]).sum();
        if !slope.is_zero() {
            let used: Rational = terms.iter().map(|(j, a)| a * &x[*j]).sum();
            lp.add_le(vec![slope], rhs - used);
        }
    }
    for (xj, dj) in x.iter().zip(&d) {
        if dj.is_negative() {
            lp.add_le(vec![-dj], xj.clone());
        }
    }
    let sol = lp::solve(&lp);
    match sol.status {
        LpStatus::Optimal => Ok(Some(sol.objective)),
        LpStatus::Unbounded => Ok(None),
        LpStatus::Infeasible => Err(Error::InfeasibleShares),
    }
}

/// A feasible transfer of share mass from `later` to `earlier`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlViolation {
    pub player: Player,
    pub earlier: EdgeId,
    pub later: EdgeId,
    pub epsilon: Rational,
}

/// `None` when the shares are pushed to the left, else the first violating
/// triple in (player, earlier, later) order.
pub fn is_pushed_left(model: &LpModel, ord: &EdgeOrdering, shares: &CostShares) -> Result<Option<PlViolation>> {
    if !model.is_feasible(shares) {
        return Err(Error::InfeasibleShares);
    }
    for p in Player::BOTH {
        let pos = ord.positions(p);
        for (k, &a) in pos.iter().enumerate() {
            for &b in &pos[k + 1..] {
                let (earlier, later) = (ord.edges[a], ord.edges[b]);
                if shares.get(p, later).is_zero() {
                    continue;
                }
                let eps = max_step(model, shares, &[(p, earlier, 1), (p, later, -1)])?.unwrap_or_else(|| shares.get(p, later));
                if eps.is_positive() {
                    return Ok(Some(PlViolation {
                        player: p,
                        earlier,
                        later,
                        epsilon: eps,
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// Moves share mass towards earlier edges until no transfer is feasible.
/// For each prefix of a player's edges the share on its last edge is
/// minimized with the prefix total fixed and no earlier share decreasing.
pub fn push_left(model: &LpModel, ord: &EdgeOrdering, shares: &CostShares) -> Result<CostShares> {
    if !model.is_feasible(shares) {
        return Err(Error::InfeasibleShares);
    }
    let mut xi = shares.clone();
    let limit = ord.edges.len().pow(2) + 8;
    for _round in 0..limit {
        let mut changed = false;
        for p in Player::BOTH {
            let prefix_edges: Vec<EdgeId> = ord.positions(p).into_iter().map(|k| ord.edges[k]).collect();
            for alpha in 0..prefix_edges.len() {
                if let Some(sigma) = push_prefix(model, &xi, p, &prefix_edges[..=alpha])? {
                    for (e, v) in prefix_edges[..=alpha].iter().zip(sigma) {
                        xi.set(p, *e, v);
                    }
                    changed = true;
                }
            }
        }
        if !changed {
            return Ok(xi);
        }
    }
    Err(Error::Consistency("push_left did not reach a fixed point".into()))
}

/// New shares on `prefix` if the share on its last edge can drop.
fn push_prefix(model: &LpModel, xi: &CostShares, p: Player, prefix: &[EdgeId]) -> Result<Option<Vec<Rational>>> {
    let n = prefix.len();
    let last = prefix[n - 1];
    if xi.get(p, last).is_zero() {
        return Ok(None);
    }
    let local = |e: EdgeId| prefix.iter().position(|&x| x == e);
    let mut objective = vec![Rational::zero(); n];
    objective[n - 1] = -Rational::one();
    let mut lp = LinearProgram::maximize(objective);
    let mass: Rational = prefix.iter().map(|&e| xi.get(p, e)).sum();
    lp.add_eq(vec![Rational::one(); n], mass);
    for (k, &e) in prefix.iter().enumerate() {
        let mut row = vec![Rational::zero(); n];
        row[k] = Rational::one();
        let cap = model.capacity.iter().find(|(x, _)| *x == e).map(|(_, c)| c.clone()).unwrap();
        lp.add_le(row.clone(), cap - xi.get(p.other(), e));
        if k + 1 < n {
            lp.add_ge(row, xi.get(p, e));
        }
    }
    for d in model.deviations.iter().filter(|d| d.player == p) {
        let mut row = vec![Rational::zero(); n];
        let mut fixed = Rational::zero();
        let mut touches = false;
        for &e in &d.substituted {
            match local(e) {
                Some(k) => {
                    row[k] = Rational::one();
                    touches = true;
                }
                None => fixed += xi.get(p, e),
            }
        }
        if touches {
            lp.add_le(row, &d.rhs - fixed);
        }
    }
    let sol = lp::solve(&lp);
    if sol.status != LpStatus::Optimal {
        return Err(Error::Consistency(format!("push LP reported {:?}", sol.status)));
    }
    if sol.values[n - 1] < xi.get(p, last) {
        Ok(Some(sol.values))
    } else {
        Ok(None)
    }
}

fn check_middle(ord: &EdgeOrdering, j: usize, i: usize) -> Result<()> {
    let mid = ord.middle();
    if j >= i || !mid.contains(&j) || !mid.contains(&i) {
        return Err(Error::IndexOutOfSegment { j, i });
    }
    Ok(())
}

fn change_direction(ord: &EdgeOrdering, j: usize, i: usize) -> [(Player, EdgeId, i64); 4] {
    let (ej, ei) = (ord.edges[j], ord.edges[i]);
    [(Player::Two, ei, 1), (Player::One, ej, 1), (Player::Two, ej, -1), (Player::One, ei, -1)]
}

/// Largest step of CHANGE(j,i): player two pays more on `e_i` and less on
/// `e_j`, player one the reverse. Feasible exactly when the step is positive.
pub fn change_feasible(model: &LpModel, ord: &EdgeOrdering, shares: &CostShares, j: usize, i: usize) -> Result<(bool, Rational)> {
    check_middle(ord, j, i)?;
    let eps = max_step(model, shares, &change_direction(ord, j, i))?
        .ok_or_else(|| Error::Consistency("unbounded CHANGE step".into()))?;
    Ok((eps.is_positive(), eps))
}

fn apply_change(ord: &EdgeOrdering, shares: &mut CostShares, j: usize, i: usize, eps: &Rational) {
    for (p, e, s) in change_direction(ord, j, i) {
        let v = shares.get(p, e) + rational::int(s) * eps;
        shares.set(p, e, v);
    }
}

/// Applies CHANGE(j,i) with its full step wherever feasible, `i` from the
/// right end of the middle and `j` from `i − 1` down, until a full pass
/// changes nothing. Returns the shares and the number of applications.
pub fn algorithm_change(model: &LpModel, ord: &EdgeOrdering, shares: &CostShares) -> Result<(CostShares, usize)> {
    let mut xi = shares.clone();
    let mid = ord.middle();
    let cap = ord.edges.len().pow(2);
    let mut applied = 0;
    loop {
        let mut changed = false;
        for i in mid.clone().rev() {
            for j in (mid.start..i).rev() {
                let (ok, eps) = change_feasible(model, ord, &xi, j, i)?;
                if ok {
                    apply_change(ord, &mut xi, j, i, &eps);
                    applied += 1;
                    changed = true;
                    if applied > cap {
                        return Err(Error::Consistency(format!("Algorithm Change exceeded {cap} steps")));
                    }
                }
            }
        }
        if !changed {
            return Ok((xi, applied));
        }
    }
}

/// First position whose edge is not fully paid.
pub fn first_unpaid(inst: &Instance, ord: &EdgeOrdering, shares: &CostShares) -> Option<usize> {
    ord.edges.iter().position(|&e| &shares.edge_total(e) < inst.cost(e))
}

/// Maximum player-two total over LP(F) optima paying every edge before
/// position `paid_before` in full.
fn max_player_two(inst: &Instance, model: &LpModel, ord: &EdgeOrdering, optimum: &Rational, paid_before: usize) -> Result<CostShares> {
    let mut lp = model.to_lp();
    let n = model.vars.len();
    lp.add_eq(vec![Rational::one(); n], optimum.clone());
    for &e in &ord.edges[..paid_before] {
        let mut row = vec![Rational::zero(); n];
        for p in Player::BOTH {
            if let Some(j) = model.var(p, e) {
                row[j] = Rational::one();
            }
        }
        lp.add_eq(row, inst.cost(e).clone());
    }
    lp.objective = model.player_two_objective();
    let sol = lp::solve(&lp);
    if sol.status != LpStatus::Optimal {
        return Err(Error::Consistency(format!("player-two LP reported {:?}", sol.status)));
    }
    Ok(model.to_shares(&sol.values))
}

#[derive(Clone, Debug)]
pub struct Player2Report {
    pub shares: CostShares,
    pub ordering: EdgeOrdering,
    pub first_unpaid: Option<usize>,
    /// The first unpaid edge lies right of the middle.
    pub case_r: bool,
    /// Player two's total is maximal among optima with the same first unpaid edge.
    pub two_m: bool,
    /// No CHANGE(j,i) with `j < i` in the middle is feasible.
    pub nc: bool,
    /// Properties that hold trivially for this forest.
    pub vacuous: Vec<&'static str>,
    pub changes: usize,
}

pub fn maximize_for_player2(inst: &Instance, model: &LpModel) -> Result<Player2Report> {
    let ord = compute_ordering(&model.forest);
    let (sol, lex) = model.lexicographic_optimum()?;
    let pushed = push_left(model, &ord, &lex)?;
    let mut unpaid = first_unpaid(inst, &ord, &pushed);
    // Re-solve until the first unpaid edge stops moving right.
    let xi = loop {
        let bound = unpaid.unwrap_or(ord.edges.len());
        let xi = max_player_two(inst, model, &ord, &sol.objective, bound)?;
        let next = first_unpaid(inst, &ord, &xi);
        if next == unpaid {
            break xi;
        }
        unpaid = next;
    };
    let (xi, changes) = algorithm_change(model, &ord, &xi)?;
    let unpaid = first_unpaid(inst, &ord, &xi);
    let bound = unpaid.unwrap_or(ord.edges.len());
    let best = max_player_two(inst, model, &ord, &sol.objective, bound)?;
    let two_m = xi.sum() == sol.objective && xi.total(Player::Two) == best.total(Player::Two);
    let mut nc = true;
    for i in ord.middle() {
        for j in ord.middle().start..i {
            if change_feasible(model, &ord, &xi, j, i)?.0 {
                nc = false;
            }
        }
    }
    let mut vacuous = Vec::new();
    if ord.m < 2 {
        vacuous.push("NC");
    }
    if unpaid.is_none() {
        vacuous.push("2M");
    }
    Ok(Player2Report {
        shares: xi,
        case_r: unpaid.is_some_and(|k| k >= ord.middle().end),
        first_unpaid: unpaid,
        ordering: ord,
        two_m,
        nc,
        vacuous,
        changes,
    })
}

/// Middle edges that player two does not pay in full and that no tight
/// player-two deviation substitutes.
pub fn missing_tight_alternatives(inst: &Instance, model: &LpModel, ord: &EdgeOrdering, shares: &CostShares) -> Vec<EdgeId> {
    let tight: Vec<&crate::enforce::Deviation> = model
        .deviations
        .iter()
        .filter(|d| d.player == Player::Two)
        .filter(|d| d.substituted.iter().map(|&e| shares.get(Player::Two, e)).sum::<Rational>() == d.rhs)
        .collect();
    ord.middle()
        .map(|k| ord.edges[k])
        .filter(|&e| &shares.get(Player::Two, e) < inst.cost(e))
        .filter(|e| !tight.iter().any(|d| d.substituted.contains(e)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forests::PathCatalog;
    use crate::graph::{Graph, VertexId, DEFAULT_PATH_CAP};
    use crate::instance::Terminals;

    /// Two private unit edges in series with a unit-cost bypass.
    fn series_with_bypass() -> (Instance, LpModel) {
        let g = Graph::from_pairs(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap();
        let t = Terminals {
            s1: VertexId(0),
            t1: VertexId(2),
            s2: VertexId(2),
            t2: VertexId(3),
        };
        let inst = Instance::new(g, t, vec![rational::int(1); 4]).unwrap();
        let f = SteinerForest::from_edges(&inst, &[EdgeId(0), EdgeId(1), EdgeId(3)]).unwrap();
        let model = LpModel::new(&inst, &f, &PathCatalog::new(&inst, DEFAULT_PATH_CAP).unwrap());
        (inst, model)
    }

    #[test]
    fn disjoint_paths_order_player_one_first() {
        let (_, model) = series_with_bypass();
        let ord = compute_ordering(&model.forest);
        assert_eq!((ord.l1, ord.l2, ord.m, ord.r1, ord.r2), (2, 1, 0, 0, 0));
        assert_eq!(ord.edges, vec![EdgeId(0), EdgeId(1), EdgeId(3)]);
    }

    #[test]
    fn push_moves_mass_to_the_front() {
        let (_, model) = series_with_bypass();
        let ord = compute_ordering(&model.forest);
        let mut xi = CostShares::new();
        xi.set(Player::One, EdgeId(0), rational::zero());
        xi.set(Player::One, EdgeId(1), rational::one());
        xi.set(Player::Two, EdgeId(3), rational::one());
        let v = is_pushed_left(&model, &ord, &xi).unwrap().unwrap();
        assert_eq!((v.earlier, v.later, v.epsilon), (EdgeId(0), EdgeId(1), rational::one()));
        let pushed = push_left(&model, &ord, &xi).unwrap();
        assert_eq!(pushed.get(Player::One, EdgeId(0)), rational::one());
        assert_eq!(pushed.get(Player::One, EdgeId(1)), rational::zero());
        assert_eq!(is_pushed_left(&model, &ord, &pushed).unwrap(), None);
        assert_eq!(push_left(&model, &ord, &pushed).unwrap(), pushed);
    }

    #[test]
    fn change_needs_middle_indices() {
        let (_, model) = series_with_bypass();
        let ord = compute_ordering(&model.forest);
        let (_, xi) = model.lexicographic_optimum().unwrap();
        assert!(matches!(change_feasible(&model, &ord, &xi, 0, 1), Err(Error::IndexOutOfSegment { j: 0, i: 1 })));
    }

    #[test]
    fn infeasible_shares_are_rejected() {
        let (_, model) = series_with_bypass();
        let ord = compute_ordering(&model.forest);
        let mut xi = CostShares::new();
        xi.set(Player::One, EdgeId(0), rational::int(1));
        xi.set(Player::One, EdgeId(1), rational::int(1));
        assert_eq!(is_pushed_left(&model, &ord, &xi), Err(Error::InfeasibleShares));
    }
}
