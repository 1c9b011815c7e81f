//! Slow reference implementations. Each one takes a different route from the
//! library code it checks: recursion instead of an explicit stack, subsets
//! instead of searches, vertex enumeration instead of pivoting.

use std::collections::BTreeSet;

use costshare::enforce::{CostShares, LpModel, SeparableProtocol};
use costshare::forests::SteinerForest;
use costshare::graph::{EdgeId, Graph, VertexId};
use costshare::lp::{LinearProgram, LowerBound, Relation};
use costshare::{Instance, Player, Rational};
use num_traits::{One, Signed, Zero};

/// Edge sequences of all simple `s`–`t` paths, by plain recursion.
pub fn dfs_paths(g: &Graph, s: VertexId, t: VertexId) -> BTreeSet<Vec<EdgeId>> {
    fn go(g: &Graph, x: VertexId, t: VertexId, seen: &mut Vec<VertexId>, edges: &mut Vec<EdgeId>, out: &mut BTreeSet<Vec<EdgeId>>) {
        if x == t {
            out.insert(edges.clone());
            return;
        }
        for e in g.edge_ids() {
            let edge = g.edge(e);
            if !edge.touches(x) {
                continue;
            }
            let y = edge.other(x);
            if seen.contains(&y) {
                continue;
            }
            seen.push(y);
            edges.push(e);
            go(g, y, t, seen, edges, out);
            edges.pop();
            seen.pop();
        }
    }
    let mut out = BTreeSet::new();
    go(g, s, t, &mut vec![s], &mut Vec::new(), &mut out);
    out
}

/// Longest cycle by checking every edge subset for being one cycle: connected
/// with every touched vertex of degree two. Meant for at most ~20 edges.
pub fn longest_cycle_brute(g: &Graph) -> usize {
    let m = g.edge_count();
    assert!(m <= 24, "too many edges for subset enumeration");
    let mut best = 0;
    for mask in 1u32..(1u32 << m) {
        let size = mask.count_ones() as usize;
        if size <= best || size < 2 {
            continue;
        }
        let chosen: Vec<EdgeId> = (0..m).filter(|k| mask >> k & 1 == 1).map(EdgeId).collect();
        let mut degree = vec![0usize; g.vertex_count()];
        for &e in &chosen {
            degree[g.edge(e).u.0] += 1;
            degree[g.edge(e).v.0] += 1;
        }
        if degree.iter().any(|&d| d != 0 && d != 2) {
            continue;
        }
        if spans_connected(g, &chosen) {
            best = size;
        }
    }
    best
}

fn spans_connected(g: &Graph, edges: &[EdgeId]) -> bool {
    let touched: BTreeSet<VertexId> = edges.iter().flat_map(|&e| [g.edge(e).u, g.edge(e).v]).collect();
    let Some(&start) = touched.iter().next() else { return true };
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        for &e in edges {
            let edge = g.edge(e);
            if edge.touches(x) && seen.insert(edge.other(x)) {
                stack.push(edge.other(x));
            }
        }
    }
    seen.len() == touched.len()
}

/// K4 minor by trying every assignment of vertices to four branch sets or
/// to deletion: 5^n assignments.
pub fn has_k4_minor_brute(g: &Graph) -> bool {
    let n = g.vertex_count();
    assert!(n <= 9, "too many vertices for branch-set enumeration");
    let mut label = vec![0u8; n];
    loop {
        if branch_sets_work(g, &label) {
            return true;
        }
        // Next assignment in base 5.
        let mut k = 0;
        loop {
            if k == n {
                return false;
            }
            label[k] += 1;
            if label[k] < 5 {
                break;
            }
            label[k] = 0;
            k += 1;
        }
    }
}

fn branch_sets_work(g: &Graph, label: &[u8]) -> bool {
    for b in 1..=4u8 {
        let members: Vec<usize> = (0..label.len()).filter(|&v| label[v] == b).collect();
        let Some(&first) = members.first() else { return false };
        let mut seen = BTreeSet::from([first]);
        let mut stack = vec![first];
        while let Some(x) = stack.pop() {
            for &(_, y) in g.incident(VertexId(x)) {
                if label[y.0] == b && seen.insert(y.0) {
                    stack.push(y.0);
                }
            }
        }
        if seen.len() != members.len() {
            return false;
        }
    }
    let mut adjacent = BTreeSet::new();
    for e in g.edges() {
        let (a, b) = (label[e.u.0], label[e.v.0]);
        if a != 0 && b != 0 && a != b {
            adjacent.insert((a.min(b), a.max(b)));
        }
    }
    adjacent.len() == 6
}

/// Optimum of a bounded LP with nonnegative variables by enumerating every
/// basic solution: each choice of `n` constraints (rows or `x_j = 0`) made
/// tight. `None` when infeasible.
pub fn lp_vertex_enumeration(lp: &LinearProgram) -> Option<Rational> {
    assert!(lp.lower_bounds.iter().all(|b| *b == LowerBound::Zero), "oracle needs x >= 0");
    let n = lp.num_vars;
    // Every hyperplane as (a, b) meaning a·x = b when tight.
    let mut planes: Vec<(Vec<Rational>, Rational)> = lp.constraints.iter().map(|c| (c.coeffs.clone(), c.rhs.clone())).collect();
    for j in 0..n {
        let mut a = vec![Rational::zero(); n];
        a[j] = Rational::one();
        planes.push((a, Rational::zero()));
    }
    let mut best: Option<Rational> = None;
    let mut choice: Vec<usize> = Vec::new();
    fn rec(
        start: usize,
        n: usize,
        planes: &[(Vec<Rational>, Rational)],
        choice: &mut Vec<usize>,
        lp: &LinearProgram,
        best: &mut Option<Rational>,
    ) {
        if choice.len() == n {
            if let Some(x) = solve_square(planes, choice) {
                if lp.is_feasible(&x) {
                    let v = lp.evaluate(&x);
                    if best.as_ref().map_or(true, |b| v > *b) {
                        *best = Some(v);
                    }
                }
            }
            return;
        }
        for k in start..planes.len() {
            choice.push(k);
            rec(k + 1, n, planes, choice, lp, best);
            choice.pop();
        }
    }
    rec(0, n, &planes, &mut choice, lp, &mut best);
    best
}

/// Unique solution of the chosen equations, by Gauss–Jordan elimination.
fn solve_square(planes: &[(Vec<Rational>, Rational)], rows: &[usize]) -> Option<Vec<Rational>> {
    let n = rows.len();
    let mut m: Vec<Vec<Rational>> = rows
        .iter()
        .map(|&k| {
            let mut r = planes[k].0.clone();
            r.push(planes[k].1.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let p = m[col][col].clone();
        for x in m[col].iter_mut() {
            *x = &*x / &p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..=n {
                    let sub = &f * &m[col][c];
                    m[r][c] -= sub;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

/// The LP dual `min b·y, Aᵀy ≥ c, y ≥ 0` of `max c·x, Ax ≤ b, x ≥ 0`, as a
/// maximization of `−b·y`.
pub fn dual(lp: &LinearProgram) -> LinearProgram {
    assert!(lp.constraints.iter().all(|c| c.relation == Relation::Le));
    assert!(lp.lower_bounds.iter().all(|b| *b == LowerBound::Zero));
    let m = lp.constraints.len();
    let mut d = LinearProgram::maximize(lp.constraints.iter().map(|c| -c.rhs.clone()).collect());
    for j in 0..lp.num_vars {
        let row: Vec<Rational> = (0..m).map(|k| lp.constraints[k].coeffs[j].clone()).collect();
        d.add_ge(row, lp.objective[j].clone());
    }
    d
}

/// Steiner forests as edge subsets: acyclic, connecting both pairs, and with
/// every edge on one of the two terminal paths inside the subset.
pub fn forests_by_subsets(inst: &Instance) -> BTreeSet<Vec<EdgeId>> {
    let g = inst.graph();
    let m = g.edge_count();
    assert!(m <= 20, "too many edges for subset enumeration");
    let t = inst.terminals();
    let mut out = BTreeSet::new();
    for mask in 0u32..(1u32 << m) {
        let chosen: Vec<EdgeId> = (0..m).filter(|k| mask >> k & 1 == 1).map(EdgeId).collect();
        if !acyclic_by_leaf_stripping(g, &chosen) {
            continue;
        }
        let p1 = tree_path(g, &chosen, t.s1, t.t1);
        let p2 = tree_path(g, &chosen, t.s2, t.t2);
        let (Some(p1), Some(p2)) = (p1, p2) else { continue };
        let used: BTreeSet<EdgeId> = p1.into_iter().chain(p2).collect();
        if used.len() == chosen.len() {
            out.insert(chosen);
        }
    }
    out
}

/// An edge set is acyclic iff deleting degree-one vertices empties it.
fn acyclic_by_leaf_stripping(g: &Graph, edges: &[EdgeId]) -> bool {
    let mut left: Vec<EdgeId> = edges.to_vec();
    loop {
        let mut degree = vec![0usize; g.vertex_count()];
        for &e in &left {
            degree[g.edge(e).u.0] += 1;
            degree[g.edge(e).v.0] += 1;
        }
        let before = left.len();
        left.retain(|&e| degree[g.edge(e).u.0] > 1 && degree[g.edge(e).v.0] > 1);
        if left.is_empty() {
            return true;
        }
        if left.len() == before {
            return false;
        }
    }
}

/// The unique path between `a` and `b` in an acyclic edge set.
fn tree_path(g: &Graph, edges: &[EdgeId], a: VertexId, b: VertexId) -> Option<Vec<EdgeId>> {
    fn go(g: &Graph, edges: &[EdgeId], x: VertexId, b: VertexId, from: Option<EdgeId>) -> Option<Vec<EdgeId>> {
        if x == b {
            return Some(Vec::new());
        }
        for &e in edges {
            if Some(e) == from || !g.edge(e).touches(x) {
                continue;
            }
            if let Some(mut rest) = go(g, edges, g.edge(e).other(x), b, Some(e)) {
                rest.push(e);
                return Some(rest);
            }
        }
        None
    }
    go(g, edges, a, b, None)
}

/// Best response cost of `p` with the other player fixed, over all simple
/// paths found by [`dfs_paths`].
pub fn best_response_cost(inst: &Instance, protocol: &SeparableProtocol, p: Player, fixed: &[EdgeId]) -> Rational {
    let t = inst.terminals();
    let (s, tt) = t.pair(p);
    let g = inst.graph();
    dfs_paths(g, s, tt)
        .into_iter()
        .map(|own| {
            own.iter()
                .map(|e| {
                    let both = fixed.contains(e);
                    let users = if both {
                        costshare::enforce::PlayerSet::ALL[3]
                    } else {
                        costshare::enforce::PlayerSet::of(&[p])
                    };
                    protocol.share(*e, users, p)
                })
                .sum::<Rational>()
        })
        .min()
        .expect("terminals connected")
}

/// Nash check for the forest's profile via best responses.
pub fn is_pne_by_best_response(inst: &Instance, f: &SteinerForest, protocol: &SeparableProtocol) -> bool {
    Player::BOTH.into_iter().all(|p| {
        let other = f.path(p.other());
        let current = protocol.player_cost(p, &f.p1, &f.p2);
        best_response_cost(inst, protocol, p, &other.edges) >= current
    })
}

/// Bracket `[lo, hi]` of width at most `2^-bits` around the largest feasible
/// step along `direction`, found by bisection with exact feasibility checks.
/// Returns `lo = hi = 0` when no positive step is feasible at the finest grid.
pub fn max_step_bisect(
    model: &LpModel,
    shares: &CostShares,
    direction: &[(Player, EdgeId, i64)],
    upper: Rational,
    bits: u32,
) -> (Rational, Rational) {
    let feasible = |eps: &Rational| {
        let mut x = shares.clone();
        for &(p, e, s) in direction {
            let v = x.get(p, e) + Rational::from_integer(s.into()) * eps;
            x.set(p, e, v);
        }
        x.is_nonnegative() && model.is_feasible(&x)
    };
    let mut lo = Rational::zero();
    let mut hi = upper;
    if feasible(&hi) {
        return (hi.clone(), hi);
    }
    let two = Rational::from_integer(2.into());
    let width = (0..bits).fold(Rational::one(), |w, _| w / &two);
    while &hi - &lo > width {
        let mid = (&lo + &hi) / &two;
        if feasible(&mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    debug_assert!(!lo.is_negative());
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use costshare::lp::LinearProgram;
    use costshare::{rational, Terminals};

    fn cycle(n: usize) -> Graph {
        Graph::from_pairs(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>()).unwrap()
    }

    fn complete(n: usize) -> Graph {
        Graph::from_pairs(n, &(0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn known_path_counts() {
        // K4 between two vertices: the edge, two 2-paths, two 3-paths.
        assert_eq!(dfs_paths(&complete(4), VertexId(0), VertexId(1)).len(), 5);
        assert_eq!(dfs_paths(&cycle(6), VertexId(0), VertexId(3)).len(), 2);
    }

    #[test]
    fn known_cycles_and_minors() {
        assert_eq!(longest_cycle_brute(&cycle(5)), 5);
        assert_eq!(longest_cycle_brute(&complete(5)), 5);
        assert_eq!(longest_cycle_brute(&Graph::from_pairs(3, &[(0, 1), (1, 2)]).unwrap()), 0);
        assert!(has_k4_minor_brute(&complete(4)));
        assert!(!has_k4_minor_brute(&cycle(7)));
        // A 5-wheel contracts to K4.
        let mut wheel: Vec<(usize, usize)> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        wheel.extend((0..5).map(|i| (i, 5)));
        assert!(has_k4_minor_brute(&Graph::from_pairs(6, &wheel).unwrap()));
    }

    #[test]
    fn known_lp_optimum() {
        // max x + y  s.t.  x + 2y <= 4,  3x + y <= 6: optimum 14/5 at (8/5, 6/5).
        let mut lp = LinearProgram::maximize(vec![rational::one(), rational::one()]);
        lp.add_le(vec![rational::int(1), rational::int(2)], rational::int(4));
        lp.add_le(vec![rational::int(3), rational::int(1)], rational::int(6));
        assert_eq!(lp_vertex_enumeration(&lp), Some(rational::frac(14, 5)));
        lp.add_ge(vec![rational::one(), rational::zero()], rational::int(3));
        assert_eq!(lp_vertex_enumeration(&lp), None);
    }

    #[test]
    fn square_forests() {
        // Square 0-1-2-3 with both pairs (0, 2): each pair picks a side, and
        // the union is acyclic only when both pick the same side.
        let g = cycle(4);
        let t = Terminals {
            s1: VertexId(0),
            t1: VertexId(2),
            s2: VertexId(0),
            t2: VertexId(2),
        };
        let inst = Instance::new(g, t, vec![rational::one(); 4]).unwrap();
        assert_eq!(forests_by_subsets(&inst).len(), 2);
    }
}
