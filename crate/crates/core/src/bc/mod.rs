//! Bad Configurations: the nine forbidden terminal-anchored patterns, a
//! backtracking search for topological embeddings, an independent validator
//! and the witness cost functions.

mod patterns;
mod search;
mod validate;
mod witness;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::graph::{EdgeId, Graph, Path, VertexId};
use crate::instance::{Player, Terminals};

pub use patterns::{BcKind, BcPattern, SlotSpec};
pub use search::{detect_bc, prefilter, search_kind, BcOutcome, Budget, DetectOptions, Prefilter, DEFAULT_SEARCH_CAP};
pub use validate::{classify_pbc, validate_embedding, PbcPaths};
pub use witness::generate_witness;

/// Which terminal plays which role: `{u, v}` is one player's pair and
/// `{w, x}` the other's.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Roles {
    pub upper: Player,
    pub u: VertexId,
    pub v: VertexId,
    pub w: VertexId,
    pub x: VertexId,
}

impl Roles {
    /// The eight assignments in search order.
    pub fn orientations(t: &Terminals) -> Vec<Roles> {
        let mut out = Vec::new();
        for upper in Player::BOTH {
            let (a, b) = t.pair(upper);
            let (c, d) = t.pair(upper.other());
            for (u, v) in [(a, b), (b, a)] {
                for (w, x) in [(c, d), (d, c)] {
                    out.push(Roles { upper, u, v, w, x });
                }
            }
        }
        out
    }

    pub fn matches(&self, t: &Terminals) -> bool {
        let same = |p: (VertexId, VertexId), q: (VertexId, VertexId)| p == q || p == (q.1, q.0);
        same((self.u, self.v), t.pair(self.upper)) && same((self.w, self.x), t.pair(self.upper.other()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlotImage {
    pub name: String,
    /// Path from the slot's `from` node to its `to` node.
    pub path: Path,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BcEmbedding {
    pub kind: BcKind,
    pub roles: Roles,
    /// Pattern node name to host vertex, in pattern node order.
    pub nodes: Vec<(String, VertexId)>,
    /// One image per pattern slot, in pattern slot order.
    pub slots: Vec<SlotImage>,
}

impl BcEmbedding {
    pub fn pattern(&self) -> BcPattern {
        BcPattern::get(self.kind)
    }

    /// Concatenation of slot images along a node route of the pattern.
    pub fn route(&self, route: &[&str]) -> Option<Path> {
        let pattern = self.pattern();
        let node = |name: &str| self.nodes.iter().find(|(n, _)| n == name).map(|(_, v)| *v);
        let mut path = Path::trivial(node(route[0])?);
        for pair in route.windows(2) {
            let (k, forward) = pattern.slot_between(pair[0], pair[1])?;
            let image = &self.slots.get(k)?.path;
            let piece = if forward { image.clone() } else { image.reversed() };
            if piece.source() != path.target() {
                return None;
            }
            path = path.join(&piece);
        }
        Some(path)
    }

    /// `P_u`, `P_ℓ`, `q1`, `q2`, `q3` assembled from the slot images.
    pub fn pbc_paths(&self) -> Option<PbcPaths> {
        let p = self.pattern();
        Some(PbcPaths {
            upper: self.route(&p.upper)?,
            lower: self.route(&p.lower)?,
            q: [self.route(&p.q[0])?, self.route(&p.q[1])?, self.route(&p.q[2])?],
        })
    }

    pub fn edges(&self) -> Vec<EdgeId> {
        let mut all: Vec<EdgeId> = self.slots.iter().flat_map(|s| s.path.edges.iter().copied()).collect();
        all.sort();
        all.dedup();
        all
    }

    pub fn to_report(&self, g: &Graph) -> EmbeddingReport {
        let name = |v: VertexId| g.vertex_name(v).to_string();
        EmbeddingReport {
            pattern: self.kind,
            upper_player: self.roles.upper,
            roles: BTreeMap::from([
                ("u", name(self.roles.u)),
                ("v", name(self.roles.v)),
                ("w", name(self.roles.w)),
                ("x", name(self.roles.x)),
            ]),
            nodes: self.nodes.iter().map(|(n, v)| (n.clone(), name(*v))).collect(),
            slots: self
                .slots
                .iter()
                .map(|s| SlotReport {
                    name: s.name.clone(),
                    vertices: s.path.vertices.iter().map(|&v| name(v)).collect(),
                    edges: s.path.edges.iter().map(|&e| g.edge_name(e).to_string()).collect(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EmbeddingReport {
    pub pattern: BcKind,
    pub upper_player: Player,
    pub roles: BTreeMap<&'static str, String>,
    pub nodes: BTreeMap<String, String>,
    pub slots: Vec<SlotReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SlotReport {
    pub name: String,
    pub vertices: Vec<String>,
    pub edges: Vec<String>,
}

impl fmt::Display for BcKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
