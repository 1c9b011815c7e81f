//! Undirected multigraphs, simple paths and the structural checks used by
//! the graph-class filters.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_PATH_CAP: usize = 100_000;
pub const DEFAULT_CYCLE_CAP: usize = 50_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeId(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub u: VertexId,
    pub v: VertexId,
}

impl Edge {
    pub fn other(&self, x: VertexId) -> VertexId {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }

    pub fn touches(&self, x: VertexId) -> bool {
        self.u == x || self.v == x
    }
}

/// Vertices and edges are indexed by position; names are kept for I/O.
#[derive(Clone, Debug)]
pub struct Graph {
    vertex_names: Vec<String>,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(EdgeId, VertexId)>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_names == other.vertex_names && self.edges == other.edges
    }
}

impl Eq for Graph {}

impl Graph {
    /// Builds a graph from names and `(edge name, u, v)` triples given by
    /// vertex index.
    pub fn new(vertex_names: Vec<String>, edges: Vec<(String, usize, usize)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for (i, name) in vertex_names.iter().enumerate() {
            if !seen.insert(name.as_str()) {
                return Err(Error::invalid(format!("vertices[{i}]"), format!("duplicate vertex {name:?}")));
            }
        }
        let n = vertex_names.len();
        let mut names = BTreeSet::new();
        let mut list = Vec::with_capacity(edges.len());
        for (i, (name, u, v)) in edges.into_iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::invalid(format!("edges[{i}]"), "endpoint out of range"));
            }
            if u == v {
                return Err(Error::invalid(format!("edges[{i}]"), format!("self-loop on {:?}", vertex_names[u])));
            }
            if !names.insert(name.clone()) {
                return Err(Error::invalid(format!("edges[{i}].id"), format!("duplicate edge id {name:?}")));
            }
            list.push(Edge {
                name,
                u: VertexId(u),
                v: VertexId(v),
            });
        }
        let adjacency = build_adjacency(n, &list);
        Ok(Graph {
            vertex_names,
            edges: list,
            adjacency,
        })
    }

    /// Vertices named `"0".."n-1"`, edges named `"e0".."e{m-1}"`.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let names = (0..n).map(|i| i.to_string()).collect();
        let edges = pairs.iter().enumerate().map(|(i, &(u, v))| (format!("e{i}"), u, v)).collect();
        Graph::new(names, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertex_names.len()).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v.0]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edges[e.0].name
    }

    pub fn find_vertex(&self, name: &str) -> Option<VertexId> {
        self.vertex_names.iter().position(|n| n == name).map(VertexId)
    }

    pub fn find_edge(&self, name: &str) -> Option<EdgeId> {
        self.edges.iter().position(|e| e.name == name).map(EdgeId)
    }

    /// Incident `(edge, neighbour)` pairs in ascending edge order.
    pub fn incident(&self, v: VertexId) -> &[(EdgeId, VertexId)] {
        &self.adjacency[v.0]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v.0].len()
    }

    /// True when the stored adjacency equals a fresh rebuild from the edges.
    pub fn adjacency_consistent(&self) -> bool {
        self.adjacency == build_adjacency(self.vertex_count(), &self.edges)
    }

    pub fn connected(&self, a: VertexId, b: VertexId) -> bool {
        let mut seen = vec![false; self.vertex_count()];
        let mut queue = VecDeque::from([a]);
        seen[a.0] = true;
        while let Some(x) = queue.pop_front() {
            if x == b {
                return true;
            }
            for &(_, y) in self.incident(x) {
                if !seen[y.0] {
                    seen[y.0] = true;
                    queue.push_back(y);
                }
            }
        }
        false
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() == 0 || self.vertices().all(|v| self.connected(VertexId(0), v))
    }

    /// Graphviz rendering. Styled edges get the given colour and a bold pen.
    pub fn to_dot(&self, style: &DotStyle) -> String {
        let mut out = String::from("graph G {\n");
        for v in self.vertices() {
            let name = self.vertex_name(v);
            match style.vertex_labels.get(&v) {
                Some(label) => writeln!(out, "  {} [label={}];", quote(name), quote(&format!("{name}\n{label}"))),
                None => writeln!(out, "  {};", quote(name)),
            }
            .unwrap();
        }
        for e in self.edge_ids() {
            let edge = self.edge(e);
            let mut attrs = Vec::new();
            let mut label = edge.name.clone();
            if let Some(extra) = style.edge_labels.get(&e) {
                label = format!("{label}: {extra}");
            }
            attrs.push(format!("label={}", quote(&label)));
            if let Some(colour) = style.edge_colours.get(&e) {
                attrs.push(format!("color={}", quote(colour)));
                attrs.push("penwidth=2.5".to_string());
            }
            writeln!(
                out,
                "  {} -- {} [{}];",
                quote(self.vertex_name(edge.u)),
                quote(self.vertex_name(edge.v)),
                attrs.join(", ")
            )
            .unwrap();
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Clone, Debug, Default)]
pub struct DotStyle {
    pub edge_colours: BTreeMap<EdgeId, String>,
    pub edge_labels: BTreeMap<EdgeId, String>,
    pub vertex_labels: BTreeMap<VertexId, String>,
}

impl DotStyle {
    pub fn highlight(edges: &[EdgeId]) -> Self {
        let mut style = DotStyle::default();
        for &e in edges {
            style.edge_colours.insert(e, "red".to_string());
        }
        style
    }
}

fn quote(s: &str) -> String {
    let escaped = s.replace('\\', "\\\\").replace('"', "\\\"").replace('\n', "\\n");
    format!("\"{escaped}\"")
}

fn build_adjacency(n: usize, edges: &[Edge]) -> Vec<Vec<(EdgeId, VertexId)>> {
    let mut adj = vec![Vec::new(); n];
    for (i, e) in edges.iter().enumerate() {
        adj[e.u.0].push((EdgeId(i), e.v));
        adj[e.v.0].push((EdgeId(i), e.u));
    }
    adj
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

impl Path {
    pub fn trivial(v: VertexId) -> Self {
        Path {
            vertices: vec![v],
            edges: Vec::new(),
        }
    }

    pub fn source(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn target(&self) -> VertexId {
        *self.vertices.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn reversed(&self) -> Path {
        let mut p = self.clone();
        p.vertices.reverse();
        p.edges.reverse();
        p
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.edges.contains(&e)
    }

    /// Simple, and every edge joins its neighbouring vertices in `g`.
    pub fn is_valid_in(&self, g: &Graph) -> bool {
        if self.vertices.len() != self.edges.len() + 1 {
            return false;
        }
        let distinct: BTreeSet<_> = self.vertices.iter().collect();
        if distinct.len() != self.vertices.len() || self.vertices.iter().any(|v| v.0 >= g.vertex_count()) {
            return false;
        }
        self.edges.iter().enumerate().all(|(k, &e)| {
            e.0 < g.edge_count() && {
                let edge = g.edge(e);
                let (a, b) = (self.vertices[k], self.vertices[k + 1]);
                (edge.u == a && edge.v == b) || (edge.u == b && edge.v == a)
            }
        })
    }

    /// Concatenates `self` and `next`, which must start where `self` ends.
    pub fn join(&self, next: &Path) -> Path {
        assert_eq!(self.target(), next.source());
        let mut p = self.clone();
        p.vertices.extend_from_slice(&next.vertices[1..]);
        p.edges.extend_from_slice(&next.edges);
        p
    }

    /// Sub-path between vertex positions `from..=to`.
    pub fn slice(&self, from: usize, to: usize) -> Path {
        Path {
            vertices: self.vertices[from..=to].to_vec(),
            edges: self.edges[from..to].to_vec(),
        }
    }

    pub fn position(&self, v: VertexId) -> Option<usize> {
        self.vertices.iter().position(|&x| x == v)
    }
}

/// All simple `s`–`t` paths, in lexicographic order of their edge sequences.
pub fn enumerate_simple_paths(g: &Graph, s: VertexId, t: VertexId, cap: usize) -> Result<Vec<Path>> {
    if s == t {
        return Ok(vec![Path::trivial(s)]);
    }
    let mut out = Vec::new();
    let mut on_path = vec![false; g.vertex_count()];
    let mut vertices = vec![s];
    let mut edges = Vec::new();
    // Stack of next-incidence cursors, one per vertex on the current path.
    let mut cursor = vec![0usize];
    on_path[s.0] = true;
    while let Some(&k) = cursor.last() {
        let x = *vertices.last().unwrap();
        let inc = g.incident(x);
        if k == inc.len() {
            cursor.pop();
            on_path[x.0] = false;
            vertices.pop();
            edges.pop();
            continue;
        }
        *cursor.last_mut().unwrap() += 1;
        let (e, y) = inc[k];
        if on_path[y.0] {
            continue;
        }
        if y == t {
            if out.len() == cap {
                return Err(Error::PathExplosion(cap));
            }
            let mut p = Path {
                vertices: vertices.clone(),
                edges: edges.clone(),
            };
            p.vertices.push(y);
            p.edges.push(e);
            out.push(p);
            continue;
        }
        on_path[y.0] = true;
        vertices.push(y);
        edges.push(e);
        cursor.push(0);
    }
    // Edge-ordered incidence lists make DFS order lexicographic.
    Ok(out)
}

/// Length of the longest simple cycle (a pair of parallel edges counts as a
/// cycle of length 2); 0 when acyclic. `cap` bounds the number of search steps.
pub fn longest_cycle_length(g: &Graph, cap: usize) -> Result<usize> {
    longest_cycle_search(g, usize::MAX, cap)
}

/// True when some simple cycle has at least `k` edges.
pub fn has_cycle_of_length_at_least(g: &Graph, k: usize, cap: usize) -> Result<bool> {
    Ok(longest_cycle_search(g, k, cap)? >= k)
}

fn longest_cycle_search(g: &Graph, stop_at: usize, cap: usize) -> Result<usize> {
    let n = g.vertex_count();
    let mut best = 0;
    let mut steps = 0usize;
    let mut on_path = vec![false; n];
    for root in g.vertices() {
        // Only cycles whose smallest vertex is `root` are explored from it.
        fn go(
            g: &Graph,
            root: VertexId,
            x: VertexId,
            via: Option<EdgeId>,
            depth: usize,
            on_path: &mut [bool],
            best: &mut usize,
            stop_at: usize,
            steps: &mut usize,
            cap: usize,
        ) -> Result<()> {
            for &(e, y) in g.incident(x) {
                if Some(e) == via || y < root {
                    continue;
                }
                *steps += 1;
                if *steps > cap {
                    return Err(Error::PathExplosion(cap));
                }
                if y == root {
                    *best = (*best).max(depth + 1);
                    continue;
                }
                if on_path[y.0] {
                    continue;
                }
                on_path[y.0] = true;
                go(g, root, y, Some(e), depth + 1, on_path, best, stop_at, steps, cap)?;
                on_path[y.0] = false;
                if *best >= stop_at {
                    return Ok(());
                }
            }
            Ok(())
        }
        on_path[root.0] = true;
        go(g, root, root, None, 0, &mut on_path, &mut best, stop_at, &mut steps, cap)?;
        on_path[root.0] = false;
        if best >= stop_at {
            break;
        }
    }
    Ok(best)
}

/// Series-parallel reduction on the underlying simple graph: repeatedly drop
/// vertices of degree at most one and suppress vertices of degree two. K4 is
/// a minor exactly when something survives.
pub fn has_k4_minor(g: &Graph) -> bool {
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); g.vertex_count()];
    for e in g.edges() {
        adj[e.u.0].insert(e.v.0);
        adj[e.v.0].insert(e.u.0);
    }
    let mut alive = vec![true; g.vertex_count()];
    let mut queue: VecDeque<usize> = (0..g.vertex_count()).collect();
    while let Some(x) = queue.pop_front() {
        if !alive[x] || adj[x].len() > 2 {
            continue;
        }
        alive[x] = false;
        let nbrs: Vec<usize> = std::mem::take(&mut adj[x]).into_iter().collect();
        for &y in &nbrs {
            adj[y].remove(&x);
        }
        if let [a, b] = nbrs[..] {
            adj[a].insert(b);
            adj[b].insert(a);
        }
        queue.extend(nbrs);
    }
    alive.iter().any(|&a| a)
}

/// True iff the edges induce an acyclic subgraph.
pub fn is_forest(edges: &[EdgeId], g: &Graph) -> bool {
    let mut uf = UnionFind::new(g.vertex_count());
    let mut seen = BTreeSet::new();
    for &e in edges {
        if !seen.insert(e) {
            continue;
        }
        let edge = g.edge(e);
        if !uf.union(edge.u.0, edge.v.0) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Graph {
        Graph::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![("ab".into(), 0, 1), ("bc".into(), 1, 2), ("ac".into(), 0, 2)],
        )
        .unwrap()
    }

    fn cycle(n: usize) -> Graph {
        let pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_pairs(n, &pairs).unwrap()
    }

    fn wheel(n: usize) -> Graph {
        let mut pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        pairs.extend((0..n).map(|i| (n, i)));
        Graph::from_pairs(n + 1, &pairs).unwrap()
    }

    #[test]
    fn triangle_paths() {
        let g = triangle();
        let paths = enumerate_simple_paths(&g, VertexId(0), VertexId(1), 10).unwrap();
        assert_eq!(paths.len(), 2);
        assert_eq!(paths[0].edges, vec![EdgeId(0)]);
        assert_eq!(paths[1].vertices, vec![VertexId(0), VertexId(2), VertexId(1)]);
    }

    #[test]
    fn single_edge_has_one_path() {
        let g = Graph::from_pairs(2, &[(0, 1)]).unwrap();
        assert_eq!(enumerate_simple_paths(&g, VertexId(0), VertexId(1), 10).unwrap().len(), 1);
    }

    #[test]
    fn path_cap_is_an_error() {
        let g = triangle();
        assert_eq!(
            enumerate_simple_paths(&g, VertexId(0), VertexId(1), 1),
            Err(Error::PathExplosion(1))
        );
    }

    #[test]
    fn rejects_self_loops_and_duplicate_ids() {
        assert!(Graph::from_pairs(2, &[(1, 1)]).is_err());
        let dup = Graph::new(vec!["a".into(), "b".into()], vec![("x".into(), 0, 1), ("x".into(), 0, 1)]);
        assert!(dup.is_err());
        let parallel = Graph::from_pairs(2, &[(0, 1), (0, 1)]).unwrap();
        assert!(parallel.adjacency_consistent());
    }

    #[test]
    fn cycle_lengths() {
        let tree = Graph::from_pairs(4, &[(0, 1), (1, 2), (1, 3)]).unwrap();
        assert_eq!(longest_cycle_length(&tree, DEFAULT_CYCLE_CAP).unwrap(), 0);
        assert_eq!(longest_cycle_length(&cycle(6), DEFAULT_CYCLE_CAP).unwrap(), 6);
        assert_eq!(longest_cycle_length(&wheel(5), DEFAULT_CYCLE_CAP).unwrap(), 6);
        let digon = Graph::from_pairs(2, &[(0, 1), (0, 1)]).unwrap();
        assert_eq!(longest_cycle_length(&digon, DEFAULT_CYCLE_CAP).unwrap(), 2);
        assert!(has_cycle_of_length_at_least(&cycle(7), 7, DEFAULT_CYCLE_CAP).unwrap());
        assert!(!has_cycle_of_length_at_least(&wheel(5), 7, DEFAULT_CYCLE_CAP).unwrap());
    }

    #[test]
    fn k4_minor_basics() {
        let k4 = Graph::from_pairs(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert!(has_k4_minor(&k4));
        for n in 3..10 {
            assert!(!has_k4_minor(&cycle(n)));
        }
        assert!(has_k4_minor(&wheel(5)));
    }

    #[test]
    fn forests() {
        let g = triangle();
        assert!(is_forest(&[], &g));
        assert!(is_forest(&[EdgeId(0), EdgeId(1)], &g));
        assert!(!is_forest(&[EdgeId(0), EdgeId(1), EdgeId(2)], &g));
    }

    #[test]
    fn dot_mentions_highlight() {
        let dot = triangle().to_dot(&DotStyle::highlight(&[EdgeId(1)]));
        assert!(dot.contains("\"b\" -- \"c\" [label=\"bc\", color=\"red\""));
    }
}
