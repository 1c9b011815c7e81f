//! Backtracking search for a topological embedding of a pattern. Slots are
//! routed one at a time as simple paths through free vertices, in the order
//! they are met when walking the pattern's routes.

use std::collections::VecDeque;

use serde::Serialize;

use super::patterns::{BcKind, BcPattern};
use super::validate::validate_embedding;
use super::{BcEmbedding, Roles, SlotImage};
use crate::error::{Error, Result};
use crate::graph::{has_cycle_of_length_at_least, has_k4_minor, EdgeId, Graph, Path, VertexId, DEFAULT_CYCLE_CAP};
use crate::instance::Terminals;

pub const DEFAULT_SEARCH_CAP: u64 = 200_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DetectOptions {
    /// Node expansions allowed across the whole search.
    pub search_cap: u64,
    pub prefilters: bool,
}

impl Default for DetectOptions {
    fn default() -> Self {
        DetectOptions {
            search_cap: DEFAULT_SEARCH_CAP,
            prefilters: true,
        }
    }
}

/// Why no embedding was reported.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Prefilter {
    #[serde(rename = "fewer-than-7-vertices")]
    FewVertices,
    #[serde(rename = "fewer-than-9-edges")]
    FewEdges,
    K4MinorFree,
    #[serde(rename = "longest-cycle-at-most-6")]
    ShortCycles,
    NoBcBySearch,
}

impl Prefilter {
    pub fn name(self) -> &'static str {
        match self {
            Prefilter::FewVertices => "fewer-than-7-vertices",
            Prefilter::FewEdges => "fewer-than-9-edges",
            Prefilter::K4MinorFree => "k4-minor-free",
            Prefilter::ShortCycles => "longest-cycle-at-most-6",
            Prefilter::NoBcBySearch => "no-bc-by-search",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BcOutcome {
    Found(BcEmbedding),
    None(Prefilter),
}

impl BcOutcome {
    pub fn embedding(&self) -> Option<&BcEmbedding> {
        match self {
            BcOutcome::Found(e) => Some(e),
            BcOutcome::None(_) => None,
        }
    }
}

pub fn prefilter(g: &Graph) -> Option<Prefilter> {
    if g.vertex_count() < 7 {
        return Some(Prefilter::FewVertices);
    }
    if g.edge_count() < 9 {
        return Some(Prefilter::FewEdges);
    }
    if !has_k4_minor(g) {
        return Some(Prefilter::K4MinorFree);
    }
    // A search that runs out of steps proves nothing; fall through.
    if let Ok(false) = has_cycle_of_length_at_least(g, 7, DEFAULT_CYCLE_CAP) {
        return Some(Prefilter::ShortCycles);
    }
    None
}

/// First embedding in pattern order, then orientation order.
pub fn detect_bc(g: &Graph, t: &Terminals, opts: &DetectOptions) -> Result<BcOutcome> {
    t.validate(g)?;
    if opts.prefilters {
        if let Some(p) = prefilter(g) {
            return Ok(BcOutcome::None(p));
        }
    }
    let mut budget = Budget {
        used: 0,
        cap: opts.search_cap,
    };
    for kind in BcKind::ALL {
        if let Some(emb) = search_kind(g, t, kind, &mut budget)? {
            if !validate_embedding(&emb, g, t) {
                return Err(Error::Consistency(format!("search produced an invalid {kind} embedding")));
            }
            return Ok(BcOutcome::Found(emb));
        }
    }
    Ok(BcOutcome::None(Prefilter::NoBcBySearch))
}

/// Embedding of one pattern under any of the eight orientations.
pub fn search_kind(g: &Graph, t: &Terminals, kind: BcKind, budget: &mut Budget) -> Result<Option<BcEmbedding>> {
    let pattern = BcPattern::get(kind);
    for roles in Roles::orientations(t) {
        let ends = [roles.u, roles.v, roles.w, roles.x];
        if (0..4).any(|a| (a + 1..4).any(|b| ends[a] == ends[b])) {
            continue;
        }
        let mut s = Search::new(g, &pattern, roles, budget);
        if s.step(0)? {
            return Ok(Some(s.embedding()));
        }
    }
    Ok(None)
}

pub struct Budget {
    pub used: u64,
    pub cap: u64,
}

impl Budget {
    pub fn new(cap: u64) -> Self {
        Budget { used: 0, cap }
    }

    fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.cap {
            return Err(Error::SearchBudgetExceeded(self.cap));
        }
        Ok(())
    }
}

struct Search<'a> {
    g: &'a Graph,
    pattern: &'a BcPattern,
    roles: Roles,
    /// Slot index and whether it is routed from its `from` node.
    order: Vec<(usize, bool)>,
    node_at: Vec<Option<VertexId>>,
    hosted: Vec<Vec<usize>>,
    interior: Vec<bool>,
    edge_used: Vec<bool>,
    images: Vec<Option<Path>>,
    budget: &'a mut Budget,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph, pattern: &'a BcPattern, roles: Roles, budget: &'a mut Budget) -> Self {
        let mut s = Search {
            g,
            pattern,
            roles,
            order: schedule(pattern),
            node_at: vec![None; pattern.nodes.len()],
            hosted: vec![Vec::new(); g.vertex_count()],
            interior: vec![false; g.vertex_count()],
            edge_used: vec![false; g.edge_count()],
            images: vec![None; pattern.slots.len()],
            budget,
        };
        for (k, v) in [roles.u, roles.v, roles.w, roles.x].into_iter().enumerate() {
            s.place(k, v);
        }
        s
    }

    fn place(&mut self, node: usize, v: VertexId) {
        self.node_at[node] = Some(v);
        self.hosted[v.0].push(node);
    }

    fn unplace(&mut self, node: usize) {
        let v = self.node_at[node].take().unwrap();
        self.hosted[v.0].retain(|&n| n != node);
    }

    fn is_free(&self, v: VertexId) -> bool {
        self.hosted[v.0].is_empty() && !self.interior[v.0]
    }

    fn endpoints(&self, k: usize) -> (usize, usize) {
        let (slot, forward) = self.order[k];
        let spec = &self.pattern.slots[slot];
        let a = self.pattern.node_index(spec.from).unwrap();
        let b = self.pattern.node_index(spec.to).unwrap();
        if forward {
            (a, b)
        } else {
            (b, a)
        }
    }

    /// Unplaced `b` may share a vertex with `c` only through a dashed slot.
    fn may_join(&self, b: usize, v: VertexId) -> bool {
        self.hosted[v.0].iter().any(|&c| {
            self.pattern
                .slot_between(self.pattern.nodes[b], self.pattern.nodes[c])
                .is_some_and(|(k, _)| !self.pattern.slots[k].solid)
        })
    }

    fn step(&mut self, k: usize) -> Result<bool> {
        if k == self.order.len() {
            return Ok(true);
        }
        let (a, _) = self.endpoints(k);
        let mut path = Path::trivial(self.node_at[a].unwrap());
        self.walk(k, &mut path)
    }

    fn walk(&mut self, k: usize, path: &mut Path) -> Result<bool> {
        self.budget.tick()?;
        let (slot, _) = self.order[k];
        let solid = self.pattern.slots[slot].solid;
        let (_, b) = self.endpoints(k);
        let cur = path.target();
        if !path.is_empty() || !solid {
            let stop_here = match self.node_at[b] {
                Some(vb) => vb == cur,
                // A fresh vertex reached by the walk, or the start of a dashed slot.
                None => !path.is_empty() || self.may_join(b, cur),
            };
            if stop_here && self.finish(k, path, b)? {
                return Ok(true);
            }
        }
        let incident: Vec<(EdgeId, VertexId)> = self.g.incident(cur).to_vec();
        for (e, w) in incident {
            if self.edge_used[e.0] {
                continue;
            }
            if self.is_free(w) {
                self.edge_used[e.0] = true;
                self.interior[w.0] = true;
                path.vertices.push(w);
                path.edges.push(e);
                let found = self.walk(k, path)?;
                path.vertices.pop();
                path.edges.pop();
                self.interior[w.0] = false;
                self.edge_used[e.0] = false;
                if found {
                    return Ok(true);
                }
            } else if !self.interior[w.0] && !path.contains_vertex(w) {
                let ends_here = match self.node_at[b] {
                    Some(vb) => vb == w,
                    None => self.may_join(b, w),
                };
                if ends_here {
                    self.budget.tick()?;
                    self.edge_used[e.0] = true;
                    path.vertices.push(w);
                    path.edges.push(e);
                    let found = self.finish(k, path, b)?;
                    path.vertices.pop();
                    path.edges.pop();
                    self.edge_used[e.0] = false;
                    if found {
                        return Ok(true);
                    }
                }
            }
        }
        Ok(false)
    }

    /// Records the image ending at the path's target, places `b` there if
    /// needed, and continues with the next slot.
    fn finish(&mut self, k: usize, path: &Path, b: usize) -> Result<bool> {
        let end = path.target();
        let fresh = self.node_at[b].is_none();
        let was_interior = self.interior[end.0];
        if fresh {
            self.interior[end.0] = false;
            self.place(b, end);
        }
        let (slot, forward) = self.order[k];
        self.images[slot] = Some(if forward { path.clone() } else { path.reversed() });
        let mut found = false;
        if self.feasible() {
            found = self.step(k + 1)?;
        }
        if !found {
            self.images[slot] = None;
            if fresh {
                self.unplace(b);
                self.interior[end.0] = was_interior;
            }
        }
        Ok(found)
    }

    /// Every unrouted slot between two placed nodes can still be routed.
    fn feasible(&self) -> bool {
        for (k, spec) in self.pattern.slots.iter().enumerate() {
            if self.images[k].is_some() {
                continue;
            }
            let a = self.node_at[self.pattern.node_index(spec.from).unwrap()];
            let b = self.node_at[self.pattern.node_index(spec.to).unwrap()];
            let (Some(a), Some(b)) = (a, b) else { continue };
            if a == b {
                if spec.solid {
                    return false;
                }
                continue;
            }
            if !self.reachable(a, b) {
                return false;
            }
        }
        true
    }

    fn reachable(&self, a: VertexId, b: VertexId) -> bool {
        let mut seen = vec![false; self.g.vertex_count()];
        let mut queue = VecDeque::from([a]);
        seen[a.0] = true;
        while let Some(x) = queue.pop_front() {
            for &(e, y) in self.g.incident(x) {
                if self.edge_used[e.0] || seen[y.0] {
                    continue;
                }
                if y == b {
                    return true;
                }
                if self.is_free(y) {
                    seen[y.0] = true;
                    queue.push_back(y);
                }
            }
        }
        false
    }

    fn embedding(&self) -> BcEmbedding {
        BcEmbedding {
            kind: self.pattern.kind,
            roles: self.roles,
            nodes: self
                .pattern
                .nodes
                .iter()
                .zip(&self.node_at)
                .map(|(n, v)| (n.to_string(), v.unwrap()))
                .collect(),
            slots: self
                .pattern
                .slots
                .iter()
                .zip(&self.images)
                .map(|(s, p)| SlotImage {
                    name: s.name.to_string(),
                    path: p.clone().unwrap(),
                })
                .collect(),
        }
    }
}

/// Slots in the order first met along the upper, lower and q routes, each
/// directed away from the node placed earlier.
fn schedule(p: &BcPattern) -> Vec<(usize, bool)> {
    let mut seen = vec![false; p.slots.len()];
    let mut out = Vec::new();
    for route in [&p.upper, &p.lower, &p.q[0], &p.q[1], &p.q[2]] {
        for pair in route.windows(2) {
            let (k, forward) = p.slot_between(pair[0], pair[1]).expect("route follows slots");
            if !seen[k] {
                seen[k] = true;
                out.push((k, forward));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal(kind: BcKind) -> (Graph, Terminals) {
        BcPattern::get(kind).minimal_graph().unwrap()
    }

    #[test]
    fn schedule_covers_every_slot() {
        for kind in BcKind::ALL {
            let p = BcPattern::get(kind);
            assert_eq!(schedule(&p).len(), p.slots.len(), "{kind}");
        }
    }

    #[test]
    fn each_minimal_graph_contains_its_pattern() {
        for kind in BcKind::ALL {
            let (g, t) = minimal(kind);
            let mut budget = Budget::new(DEFAULT_SEARCH_CAP);
            let emb = search_kind(&g, &t, kind, &mut budget).unwrap();
            let emb = emb.unwrap_or_else(|| panic!("{kind} not found in its own minimal graph"));
            assert!(validate_embedding(&emb, &g, &t), "{kind}");
        }
    }

    #[test]
    fn detect_reports_some_pattern_on_minimal_graphs() {
        for kind in BcKind::ALL {
            let (g, t) = minimal(kind);
            let out = detect_bc(&g, &t, &DetectOptions::default()).unwrap();
            assert!(matches!(out, BcOutcome::Found(_)), "{kind}");
        }
    }

    #[test]
    fn small_graphs_are_filtered() {
        let g = Graph::from_pairs(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3)]).unwrap();
        let t = Terminals {
            s1: VertexId(0),
            t1: VertexId(1),
            s2: VertexId(2),
            t2: VertexId(3),
        };
        assert_eq!(detect_bc(&g, &t, &DetectOptions::default()).unwrap(), BcOutcome::None(Prefilter::FewVertices));
        let unfiltered = DetectOptions {
            prefilters: false,
            ..DetectOptions::default()
        };
        assert_eq!(detect_bc(&g, &t, &unfiltered).unwrap(), BcOutcome::None(Prefilter::NoBcBySearch));
    }

    #[test]
    fn budget_is_enforced() {
        let (g, t) = minimal(BcKind::Bc4b);
        let opts = DetectOptions {
            search_cap: 10,
            prefilters: false,
        };
        assert!(matches!(detect_bc(&g, &t, &opts), Err(Error::SearchBudgetExceeded(10))));
    }
}
