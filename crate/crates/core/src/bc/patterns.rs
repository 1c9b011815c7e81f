//! The nine patterns as slot lists. Node names: `u v w x` are the terminals,
//! `m0`/`m1` the ends of the common subpath M, `qNs`/`qNe` where qN leaves and
//! rejoins the forest paths, `y` where q1 leaves L_ℓ (BC3, BC4) and `j1`/`j2`
//! the ends of the subpath shared by q1 and q2 (BC2, BC4).

use serde::Serialize;

use crate::error::Result;
use crate::graph::{Graph, VertexId};
use crate::instance::Terminals;
use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum BcKind {
    #[serde(rename = "BC1a")]
    Bc1a,
    #[serde(rename = "BC1b")]
    Bc1b,
    #[serde(rename = "BC2a")]
    Bc2a,
    #[serde(rename = "BC2b")]
    Bc2b,
    #[serde(rename = "BC2c")]
    Bc2c,
    #[serde(rename = "BC2d")]
    Bc2d,
    #[serde(rename = "BC3")]
    Bc3,
    #[serde(rename = "BC4a")]
    Bc4a,
    #[serde(rename = "BC4b")]
    Bc4b,
}

impl BcKind {
    pub const ALL: [BcKind; 9] = [
        BcKind::Bc1a,
        BcKind::Bc1b,
        BcKind::Bc2a,
        BcKind::Bc2b,
        BcKind::Bc2c,
        BcKind::Bc2d,
        BcKind::Bc3,
        BcKind::Bc4a,
        BcKind::Bc4b,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BcKind::Bc1a => "BC1a",
            BcKind::Bc1b => "BC1b",
            BcKind::Bc2a => "BC2a",
            BcKind::Bc2b => "BC2b",
            BcKind::Bc2c => "BC2c",
            BcKind::Bc2d => "BC2d",
            BcKind::Bc3 => "BC3",
            BcKind::Bc4a => "BC4a",
            BcKind::Bc4b => "BC4b",
        }
    }

    pub fn parse(s: &str) -> Option<BcKind> {
        BcKind::ALL.into_iter().find(|k| k.name().eq_ignore_ascii_case(s))
    }

    /// Witness optimum: 22 for the BC1/BC3 tables, 26 for BC2/BC4.
    pub fn witness_opt(self) -> i64 {
        match self {
            BcKind::Bc1a | BcKind::Bc1b | BcKind::Bc3 => 22,
            _ => 26,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlotSpec {
    pub name: &'static str,
    pub from: &'static str,
    pub to: &'static str,
    /// Solid slots need at least one edge; dashed ones may be a single node.
    pub solid: bool,
    /// Witness cost carried by the slot.
    pub cost: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BcPattern {
    pub kind: BcKind,
    /// `u, v, w, x` first.
    pub nodes: Vec<&'static str>,
    pub slots: Vec<SlotSpec>,
    pub upper: Vec<&'static str>,
    pub lower: Vec<&'static str>,
    pub q: [Vec<&'static str>; 3],
}

const fn solid(name: &'static str, from: &'static str, to: &'static str, cost: i64) -> SlotSpec {
    SlotSpec {
        name,
        from,
        to,
        solid: true,
        cost,
    }
}

const fn dashed(name: &'static str, from: &'static str, to: &'static str) -> SlotSpec {
    SlotSpec {
        name,
        from,
        to,
        solid: false,
        cost: 0,
    }
}

/// Costs along M and the forest tails: `[L_ℓ, M1, M2, M3, R_u, R_ℓ]`.
type TailCosts = [i64; 6];

const BC1_COSTS: TailCosts = [5, 3, 2, 3, 4, 5];
const BC2_COSTS: TailCosts = [5, 5, 2, 3, 6, 5];

/// Skeleton shared by the patterns where q1 starts on M (BC1a, BC2a/b).
fn small_skeleton(c: TailCosts) -> Vec<SlotSpec> {
    vec![
        dashed("Lu", "u", "m0"),
        dashed("Lw", "w", "q2s"),
        solid("Ll", "q2s", "m0", c[0]),
        dashed("M0", "m0", "q1s"),
        solid("M1", "q1s", "q3s", c[1]),
        solid("M2", "q3s", "q2e", c[2]),
        solid("M3", "q2e", "m1", c[3]),
        solid("Ru", "m1", "q1e", c[4]),
        dashed("Rv", "q1e", "v"),
        solid("Rl", "m1", "q3e", c[5]),
        dashed("Rx", "q3e", "x"),
    ]
}

/// Skeleton where q1 starts on L_u (BC1b, BC2c/d).
fn big_skeleton(c: TailCosts) -> Vec<SlotSpec> {
    vec![
        dashed("Lu", "u", "q1s"),
        solid("Lq", "q1s", "m0", 0),
        dashed("Lw", "w", "q2s"),
        solid("Ll", "q2s", "m0", c[0]),
        solid("M1", "m0", "q3s", c[1]),
        solid("M2", "q3s", "q2e", c[2]),
        solid("M3", "q2e", "m1", c[3]),
        solid("Ru", "m1", "q1e", c[4]),
        dashed("Rv", "q1e", "v"),
        solid("Rl", "m1", "q3e", c[5]),
        dashed("Rx", "q3e", "x"),
    ]
}

/// Skeleton where q1 starts at m0 and runs back along L_ℓ (BC3, BC4).
fn back_skeleton(c: TailCosts) -> Vec<SlotSpec> {
    vec![
        dashed("Lu", "u", "m0"),
        dashed("Lw", "w", "q2s"),
        solid("Ll", "q2s", "y", c[0]),
        solid("a1", "y", "m0", 0),
        solid("M1", "m0", "q3s", c[1]),
        solid("M2", "q3s", "q2e", c[2]),
        solid("M3", "q2e", "m1", c[3]),
        solid("Ru", "m1", "q1e", c[4]),
        dashed("Rv", "q1e", "v"),
        solid("Rl", "m1", "q3e", c[5]),
        dashed("Rx", "q3e", "x"),
    ]
}

/// q1 and q2 share the j1–j2 subpath; `crossed` makes q2 run it backwards.
fn shared_q(first: &'static str, crossed: bool, q1_cost: [i64; 2]) -> Vec<SlotSpec> {
    let mut s = vec![
        solid("a1", first, "j1", q1_cost[0]),
        dashed("a2", "j1", "j2"),
        solid("a3", "j2", "q1e", q1_cost[1]),
    ];
    if crossed {
        s.push(solid("b1", "q2s", "j2", 5));
        s.push(solid("b3", "j1", "q2e", 3));
    } else {
        s.push(solid("b1", "q2s", "j1", 5));
        s.push(solid("b3", "j2", "q2e", 3));
    }
    s
}

impl BcPattern {
    pub fn get(kind: BcKind) -> BcPattern {
        let nodes_small = vec!["u", "v", "w", "x", "m0", "q1s", "q3s", "q2e", "m1", "q1e", "q3e", "q2s"];
        let upper_small = vec!["u", "m0", "q1s", "q3s", "q2e", "m1", "q1e", "v"];
        let lower_small = vec!["w", "q2s", "m0", "q1s", "q3s", "q2e", "m1", "q3e", "x"];
        let nodes_big = vec!["u", "v", "w", "x", "q1s", "m0", "q3s", "q2e", "m1", "q1e", "q3e", "q2s"];
        let upper_big = vec!["u", "q1s", "m0", "q3s", "q2e", "m1", "q1e", "v"];
        let lower_big = vec!["w", "q2s", "m0", "q3s", "q2e", "m1", "q3e", "x"];
        let nodes_back = vec!["u", "v", "w", "x", "m0", "q3s", "q2e", "m1", "q1e", "q3e", "q2s", "y"];
        let upper_back = vec!["u", "m0", "q3s", "q2e", "m1", "q1e", "v"];
        let lower_back = vec!["w", "q2s", "y", "m0", "q3s", "q2e", "m1", "q3e", "x"];
        let q2_plain = vec!["q2s", "q2e"];
        let q3 = vec!["q3s", "q3e"];
        let with = |mut v: Vec<&'static str>, extra: &[&'static str]| {
            v.extend_from_slice(extra);
            v
        };
        let q2_shared = |crossed: bool| {
            if crossed {
                vec!["q2s", "j2", "j1", "q2e"]
            } else {
                vec!["q2s", "j1", "j2", "q2e"]
            }
        };
        let (nodes, slots, upper, lower, q) = match kind {
            BcKind::Bc1a | BcKind::Bc1b => {
                let big = kind == BcKind::Bc1b;
                let mut slots = if big { big_skeleton(BC1_COSTS) } else { small_skeleton(BC1_COSTS) };
                slots.push(solid("q1", "q1s", "q1e", 9));
                slots.push(solid("q2", "q2s", "q2e", 6));
                slots.push(solid("q3", "q3s", "q3e", 6));
                let q = [vec!["q1s", "q1e"], q2_plain, q3];
                if big {
                    (nodes_big, slots, upper_big, lower_big, q)
                } else {
                    (nodes_small, slots, upper_small, lower_small, q)
                }
            }
            BcKind::Bc2a | BcKind::Bc2b | BcKind::Bc2c | BcKind::Bc2d => {
                let big = matches!(kind, BcKind::Bc2c | BcKind::Bc2d);
                let crossed = matches!(kind, BcKind::Bc2b | BcKind::Bc2d);
                let mut slots = if big { big_skeleton(BC2_COSTS) } else { small_skeleton(BC2_COSTS) };
                slots.extend(shared_q("q1s", crossed, [5, 6]));
                slots.push(solid("q3", "q3s", "q3e", 6));
                let q = [vec!["q1s", "j1", "j2", "q1e"], q2_shared(crossed), q3];
                if big {
                    (with(nodes_big, &["j1", "j2"]), slots, upper_big, lower_big, q)
                } else {
                    (with(nodes_small, &["j1", "j2"]), slots, upper_small, lower_small, q)
                }
            }
            BcKind::Bc3 => {
                let mut slots = back_skeleton(BC1_COSTS);
                slots.push(solid("a2", "y", "q1e", 9));
                slots.push(solid("q2", "q2s", "q2e", 6));
                slots.push(solid("q3", "q3s", "q3e", 6));
                let q = [vec!["m0", "y", "q1e"], q2_plain, q3];
                (nodes_back, slots, upper_back, lower_back, q)
            }
            BcKind::Bc4a | BcKind::Bc4b => {
                let crossed = kind == BcKind::Bc4b;
                let mut slots = back_skeleton(BC2_COSTS);
                slots.push(solid("a2", "y", "j1", 5));
                slots.push(dashed("a3", "j1", "j2"));
                slots.push(solid("a4", "j2", "q1e", 6));
                if crossed {
                    slots.push(solid("b1", "q2s", "j2", 5));
                    slots.push(solid("b3", "j1", "q2e", 3));
                } else {
                    slots.push(solid("b1", "q2s", "j1", 5));
                    slots.push(solid("b3", "j2", "q2e", 3));
                }
                slots.push(solid("q3", "q3s", "q3e", 6));
                let q = [vec!["m0", "y", "j1", "j2", "q1e"], q2_shared(crossed), q3];
                (with(nodes_back, &["j1", "j2"]), slots, upper_back, lower_back, q)
            }
        };
        BcPattern {
            kind,
            nodes,
            slots,
            upper,
            lower,
            q,
        }
    }

    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.nodes.iter().position(|&n| n == name)
    }

    /// Slot joining two nodes, and whether `a → b` is its stored direction.
    pub fn slot_between(&self, a: &str, b: &str) -> Option<(usize, bool)> {
        self.slots.iter().enumerate().find_map(|(k, s)| {
            if s.from == a && s.to == b {
                Some((k, true))
            } else if s.from == b && s.to == a {
                Some((k, false))
            } else {
                None
            }
        })
    }

    pub fn total_cost(&self) -> i64 {
        self.slots.iter().map(|s| s.cost).sum()
    }

    /// Node groups merged when every dashed slot has length zero, as indices
    /// into `nodes`; each node maps to its group's representative.
    pub fn collapsed_nodes(&self) -> Vec<usize> {
        let mut rep: Vec<usize> = (0..self.nodes.len()).collect();
        fn find(rep: &[usize], mut x: usize) -> usize {
            while rep[x] != x {
                x = rep[x];
            }
            x
        }
        for s in self.slots.iter().filter(|s| !s.solid) {
            let a = find(&rep, self.node_index(s.from).unwrap());
            let b = find(&rep, self.node_index(s.to).unwrap());
            rep[a.max(b)] = a.min(b);
        }
        (0..self.nodes.len()).map(|x| find(&rep, x)).collect()
    }

    /// Smallest instantiation: dashed slots collapse to a node, solid slots
    /// become single edges named after the slot. Vertices are named by the
    /// merged node names joined with `=`; `(u, v, w, x)` are `(s1, t1, s2, t2)`.
    pub fn minimal_graph(&self) -> Result<(Graph, Terminals)> {
        let rep = self.collapsed_nodes();
        let mut reps: Vec<usize> = rep.clone();
        reps.sort();
        reps.dedup();
        let names: Vec<String> = reps
            .iter()
            .map(|&r| {
                let members: Vec<&str> = (0..self.nodes.len()).filter(|&x| rep[x] == r).map(|x| self.nodes[x]).collect();
                members.join("=")
            })
            .collect();
        let vertex = |node: &str| reps.iter().position(|&r| r == rep[self.node_index(node).unwrap()]).unwrap();
        let edges = self
            .slots
            .iter()
            .filter(|s| s.solid)
            .map(|s| (s.name.to_string(), vertex(s.from), vertex(s.to)))
            .collect();
        let g = Graph::new(names, edges)?;
        let t = Terminals {
            s1: VertexId(vertex("u")),
            t1: VertexId(vertex("v")),
            s2: VertexId(vertex("w")),
            t2: VertexId(vertex("x")),
        };
        Ok((g, t))
    }

    /// Witness costs on the minimal graph, edge by edge.
    pub fn minimal_costs(&self) -> Vec<Rational> {
        self.slots.iter().filter(|s| s.solid).map(|s| rational::int(s.cost)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn routes_use_existing_slots() {
        for kind in BcKind::ALL {
            let p = BcPattern::get(kind);
            for route in [&p.upper, &p.lower, &p.q[0], &p.q[1], &p.q[2]] {
                for pair in route.windows(2) {
                    assert!(p.slot_between(pair[0], pair[1]).is_some(), "{kind}: {pair:?}");
                }
            }
            for s in &p.slots {
                assert!(p.node_index(s.from).is_some() && p.node_index(s.to).is_some(), "{kind}: {}", s.name);
            }
            assert_eq!(&p.nodes[..4], &["u", "v", "w", "x"]);
        }
    }

    #[test]
    fn every_slot_lies_on_a_route() {
        for kind in BcKind::ALL {
            let p = BcPattern::get(kind);
            for (k, _) in p.slots.iter().enumerate() {
                let used = [&p.upper, &p.lower, &p.q[0], &p.q[1], &p.q[2]]
                    .iter()
                    .any(|r| r.windows(2).any(|w| p.slot_between(w[0], w[1]).map(|x| x.0) == Some(k)));
                assert!(used, "{kind}: slot {} unused", p.slots[k].name);
            }
        }
    }

    #[test]
    fn bc1a_minimal_shape() {
        let (g, _) = BcPattern::get(BcKind::Bc1a).minimal_graph().unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (7, 9));
    }

    #[test]
    fn crossed_variants_differ_only_in_q2() {
        // BC2d relates to BC2c exactly as BC2b relates to BC2a.
        for (plain, crossed) in [(BcKind::Bc2a, BcKind::Bc2b), (BcKind::Bc2c, BcKind::Bc2d), (BcKind::Bc4a, BcKind::Bc4b)] {
            let p = BcPattern::get(plain);
            let c = BcPattern::get(crossed);
            assert_eq!(p.upper, c.upper);
            assert_eq!(p.lower, c.lower);
            assert_eq!(p.q[0], c.q[0]);
            let mut reversed_mid = p.q[1].clone();
            reversed_mid[1..3].reverse();
            assert_eq!(reversed_mid, c.q[1]);
            let differing: Vec<_> = p.slots.iter().zip(&c.slots).filter(|(a, b)| a != b).map(|(a, _)| a.name).collect();
            assert_eq!(differing, vec!["b1", "b3"]);
        }
    }
}
