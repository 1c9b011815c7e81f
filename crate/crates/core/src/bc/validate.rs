//! Re-checks an embedding against the graph without trusting the search:
//! first the pattern's own slot structure, then the path-level conditions
//! that define a preliminary bad configuration and the BC1 to BC4 properties.

use std::collections::BTreeSet;

use super::patterns::{BcKind, BcPattern};
use super::{BcEmbedding, Roles};
use crate::graph::{is_forest, EdgeId, Graph, Path, VertexId};
use crate::instance::Terminals;

/// `P_u`, `P_ℓ` and the three alternatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PbcPaths {
    pub upper: Path,
    pub lower: Path,
    pub q: [Path; 3],
}

pub fn validate_embedding(emb: &BcEmbedding, g: &Graph, t: &Terminals) -> bool {
    let pattern = emb.pattern();
    if !slots_are_disjoint(emb, &pattern, g) {
        return false;
    }
    let node = |name: &str| emb.nodes.iter().find(|(n, _)| n == name).map(|(_, v)| *v);
    let r = emb.roles;
    if node("u") != Some(r.u) || node("v") != Some(r.v) || node("w") != Some(r.w) || node("x") != Some(r.x) {
        return false;
    }
    let Some(paths) = emb.pbc_paths() else { return false };
    classify_pbc(g, t, &r, &paths).is_some_and(|kinds| kinds.contains(&emb.kind))
}

fn slots_are_disjoint(emb: &BcEmbedding, pattern: &BcPattern, g: &Graph) -> bool {
    if emb.nodes.len() != pattern.nodes.len() || emb.slots.len() != pattern.slots.len() {
        return false;
    }
    if emb.nodes.iter().zip(&pattern.nodes).any(|((n, v), p)| n != p || v.0 >= g.vertex_count()) {
        return false;
    }
    let at = |name: &str| emb.nodes[pattern.node_index(name).unwrap()].1;
    let hosts: BTreeSet<VertexId> = emb.nodes.iter().map(|(_, v)| *v).collect();
    let mut interiors = BTreeSet::new();
    let mut edges = BTreeSet::new();
    // Nodes sharing a vertex must be tied together by empty dashed slots.
    let mut rep: Vec<usize> = (0..pattern.nodes.len()).collect();
    fn find(rep: &mut [usize], mut x: usize) -> usize {
        while rep[x] != x {
            rep[x] = rep[rep[x]];
            x = rep[x];
        }
        x
    }
    for (image, spec) in emb.slots.iter().zip(&pattern.slots) {
        let p = &image.path;
        if image.name != spec.name || !p.is_valid_in(g) {
            return false;
        }
        if p.source() != at(spec.from) || p.target() != at(spec.to) {
            return false;
        }
        if p.is_empty() {
            if spec.solid {
                return false;
            }
            let a = find(&mut rep, pattern.node_index(spec.from).unwrap());
            let b = find(&mut rep, pattern.node_index(spec.to).unwrap());
            rep[a] = b;
        }
        for &v in p.vertices.iter().skip(1).take(p.len().saturating_sub(1)) {
            if hosts.contains(&v) || !interiors.insert(v) {
                return false;
            }
        }
        for &e in &p.edges {
            if !edges.insert(e) {
                return false;
            }
        }
    }
    for a in 0..pattern.nodes.len() {
        for b in a + 1..pattern.nodes.len() {
            if emb.nodes[a].1 == emb.nodes[b].1 && find(&mut rep, a) != find(&mut rep, b) {
                return false;
            }
        }
    }
    true
}

struct Alternative {
    /// Oriented along its forest path.
    path: Path,
    /// Forest edges on the closed cycle.
    substituted: BTreeSet<EdgeId>,
}

impl Alternative {
    fn new(q: &Path, along: &Path, g: &Graph) -> Option<Alternative> {
        if q.is_empty() || !q.is_valid_in(g) {
            return None;
        }
        let (a, b) = (along.position(q.source())?, along.position(q.target())?);
        if q.vertices[1..q.vertices.len() - 1].iter().any(|&v| along.contains_vertex(v)) {
            return None;
        }
        if q.edges.iter().any(|&e| along.contains_edge(e)) {
            return None;
        }
        let (path, lo, hi) = if a < b { (q.clone(), a, b) } else { (q.reversed(), b, a) };
        Some(Alternative {
            path,
            substituted: along.edges[lo..hi].iter().copied().collect(),
        })
    }

    fn vertices(&self) -> BTreeSet<VertexId> {
        self.path.vertices.iter().copied().collect()
    }

    fn interior(&self) -> BTreeSet<VertexId> {
        let v = &self.path.vertices;
        v[1..v.len() - 1].iter().copied().collect()
    }

    fn cycle(&self) -> BTreeSet<EdgeId> {
        let mut c = self.substituted.clone();
        c.extend(self.path.edges.iter().copied());
        c
    }
}

fn set(edges: &[EdgeId]) -> BTreeSet<EdgeId> {
    edges.iter().copied().collect()
}

fn vset(p: &Path) -> BTreeSet<VertexId> {
    p.vertices.iter().copied().collect()
}

/// The part of `a` from its first to its last vertex on `b`.
fn overlap(a: &Path, b: &BTreeSet<VertexId>) -> Option<Path> {
    let first = a.vertices.iter().position(|v| b.contains(v))?;
    let last = a.vertices.iter().rposition(|v| b.contains(v))?;
    Some(a.slice(first, last))
}

/// Which of the shared-subpath directions hold: `(same, opposite)`.
fn shared_direction(q1: &Path, q2: &Path) -> Option<(bool, bool)> {
    let a = overlap(q1, &vset(q2))?;
    let b = overlap(q2, &vset(q1))?;
    Some((a == b, a == b.reversed()))
}

/// `None` when the paths are not a preliminary bad configuration for these
/// roles; otherwise every BC type whose properties hold.
pub fn classify_pbc(g: &Graph, t: &Terminals, roles: &Roles, paths: &PbcPaths) -> Option<Vec<BcKind>> {
    let (pu, pl) = (&paths.upper, &paths.lower);
    if !roles.matches(t) || !pu.is_valid_in(g) || !pl.is_valid_in(g) {
        return None;
    }
    if (pu.source(), pu.target(), pl.source(), pl.target()) != (roles.u, roles.v, roles.w, roles.x) {
        return None;
    }
    let mut union = pu.edges.clone();
    union.extend_from_slice(&pl.edges);
    if !is_forest(&union, g) {
        return None;
    }
    // Common subpath, contiguous and equally directed on both paths.
    let common: Vec<usize> = (0..pu.len()).filter(|&k| pl.contains_edge(pu.edges[k])).collect();
    let (&a, &b) = (common.first()?, common.last()?);
    if b - a + 1 != common.len() {
        return None;
    }
    let c = pl.edges.iter().position(|&e| e == pu.edges[a])?;
    let d = c + common.len();
    if d > pl.len() || pu.edges[a..=b] != pl.edges[c..d] || pu.vertices[a] != pl.vertices[c] {
        return None;
    }
    let m = set(&pu.edges[a..=b]);
    let l_u = pu.slice(0, a);
    let r_u = pu.slice(b + 1, pu.len());
    let l_l = pl.slice(0, c);
    let r_l = pl.slice(d, pl.len());
    if r_u.is_empty() || l_l.is_empty() || r_l.is_empty() {
        return None;
    }

    let q1 = Alternative::new(&paths.q[0], pu, g)?;
    let q2 = Alternative::new(&paths.q[1], pl, g)?;
    let q3 = Alternative::new(&paths.q[2], pl, g)?;
    let s1 = &q1.substituted;
    let meets = |x: &BTreeSet<EdgeId>, y: &Path| y.edges.iter().any(|e| x.contains(e));
    let meets_m = |x: &BTreeSet<EdgeId>| x.intersection(&m).next().is_some();
    let m_minus = |x: &BTreeSet<EdgeId>| m.difference(x).next().is_some();
    if !(meets(s1, &r_u) && meets_m(s1)) {
        return None;
    }
    if !(meets(&q2.substituted, &l_l) && meets_m(&q2.substituted) && m_minus(&q2.substituted)) {
        return None;
    }
    if !(meets(&q3.substituted, &r_l) && meets_m(&q3.substituted) && m_minus(&q3.substituted)) {
        return None;
    }
    let core: BTreeSet<EdgeId> = m
        .iter()
        .filter(|e| q2.substituted.contains(e) && q3.substituted.contains(e))
        .copied()
        .collect();
    if core.is_empty() || !core.is_subset(s1) {
        return None;
    }
    let beyond_core = |x: &BTreeSet<EdgeId>| m.iter().any(|e| s1.contains(e) && x.contains(e) && !core.contains(e));
    if !beyond_core(&q2.substituted) || !beyond_core(&q3.substituted) {
        return None;
    }

    let mut kinds = Vec::new();
    let small = !meets(s1, &l_u);
    let (v1, v2, v3) = (q1.vertices(), q2.vertices(), q3.vertices());
    let disjoint = |x: &BTreeSet<VertexId>, y: &BTreeSet<VertexId>| x.is_disjoint(y);
    let mut forest_nodes = vset(pu);
    forest_nodes.extend(pl.vertices.iter().copied());
    let off_forest = [&q1, &q2, &q3].iter().all(|q| q.interior().is_disjoint(&forest_nodes));
    let pairwise = disjoint(&v1, &v2) && disjoint(&v1, &v3) && disjoint(&v2, &v3);
    let q3_apart = disjoint(&v3, &v1) && disjoint(&v3, &v2);

    if pairwise && off_forest {
        kinds.push(if small { BcKind::Bc1a } else { BcKind::Bc1b });
    }
    if q3_apart && off_forest && !disjoint(&v1, &v2) {
        if let Some((same, opposite)) = shared_direction(&q1.path, &q2.path) {
            match (small, same, opposite) {
                (true, true, _) => kinds.push(BcKind::Bc2a),
                (false, true, _) => kinds.push(BcKind::Bc2c),
                _ => {}
            }
            match (small, opposite) {
                (true, true) => kinds.push(BcKind::Bc2b),
                (false, true) => kinds.push(BcKind::Bc2d),
                _ => {}
            }
        }
    }

    // BC3 and BC4 share everything except how q1 meets q2.
    let u_side: BTreeSet<VertexId> = vset(&l_u).union(&vset(&r_u)).copied().collect();
    let back_shape = small
        && m.is_subset(s1)
        && v2.is_disjoint(&u_side)
        && v3.is_disjoint(&u_side)
        && v1.is_disjoint(&vset(&r_l))
        && !v1.contains(&q2.path.source())
        && {
            let on_l = vset(&l_l);
            let last = q1.path.vertices.iter().rposition(|v| on_l.contains(v));
            last.is_some_and(|k| k > 0 && q1.path.edges[..k].iter().all(|e| q2.cycle().contains(e)))
        };
    if back_shape && pairwise {
        kinds.push(BcKind::Bc3);
    }
    if back_shape && q3_apart && !disjoint(&v1, &v2) {
        if let Some((same, opposite)) = shared_direction(&q1.path, &q2.path) {
            if same {
                kinds.push(BcKind::Bc4a);
            }
            if opposite {
                kinds.push(BcKind::Bc4b);
            }
        }
    }
    Some(kinds)
}
