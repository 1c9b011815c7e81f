//! Game instances: a graph, two terminal pairs and nonnegative edge costs,
//! plus the JSON document format.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId};
use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Player {
    One,
    Two,
}

impl Player {
    pub const BOTH: [Player; 2] = [Player::One, Player::Two];

    pub fn index(self) -> usize {
        match self {
            Player::One => 0,
            Player::Two => 1,
        }
    }

    pub fn other(self) -> Player {
        match self {
            Player::One => Player::Two,
            Player::Two => Player::One,
        }
    }

    pub fn number(self) -> u8 {
        self.index() as u8 + 1
    }
}

impl Serialize for Player {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(self.number())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Terminals {
    pub s1: VertexId,
    pub t1: VertexId,
    pub s2: VertexId,
    pub t2: VertexId,
}

impl Terminals {
    pub fn pair(&self, p: Player) -> (VertexId, VertexId) {
        match p {
            Player::One => (self.s1, self.t1),
            Player::Two => (self.s2, self.t2),
        }
    }

    pub fn validate(&self, g: &Graph) -> Result<()> {
        for (name, v) in [("s1", self.s1), ("t1", self.t1), ("s2", self.s2), ("t2", self.t2)] {
            if v.0 >= g.vertex_count() {
                return Err(Error::invalid(format!("terminals.{name}"), "unknown vertex"));
            }
        }
        if self.s1 == self.t1 {
            return Err(Error::invalid("terminals", "s1 equals t1"));
        }
        if self.s2 == self.t2 {
            return Err(Error::invalid("terminals", "s2 equals t2"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    graph: Graph,
    terminals: Terminals,
    costs: Vec<Rational>,
}

impl Instance {
    pub fn new(graph: Graph, terminals: Terminals, costs: Vec<Rational>) -> Result<Self> {
        terminals.validate(&graph)?;
        if costs.len() != graph.edge_count() {
            return Err(Error::invalid("edges", "one cost per edge required"));
        }
        for (i, c) in costs.iter().enumerate() {
            if c.is_negative() {
                return Err(Error::invalid(format!("edges[{i}].cost"), "negative cost"));
            }
        }
        for p in Player::BOTH {
            let (s, t) = terminals.pair(p);
            if !graph.connected(s, t) {
                return Err(Error::invalid("terminals", format!("player {} terminals are disconnected", p.number())));
            }
        }
        Ok(Instance { graph, terminals, costs })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn terminals(&self) -> Terminals {
        self.terminals
    }

    pub fn cost(&self, e: EdgeId) -> &Rational {
        &self.costs[e.0]
    }

    pub fn costs(&self) -> &[Rational] {
        &self.costs
    }

    pub fn total_cost<'a>(&self, edges: impl IntoIterator<Item = &'a EdgeId>) -> Rational {
        edges.into_iter().fold(Rational::zero(), |acc, e| acc + self.cost(*e))
    }

    pub fn with_costs(&self, costs: Vec<Rational>) -> Result<Instance> {
        Instance::new(self.graph.clone(), self.terminals, costs)
    }

    /// Merges the endpoints of every zero-cost edge. Edges that become loops
    /// disappear; each merged vertex keeps the name of its lowest member.
    pub fn contract_zero_cost_edges(&self) -> Result<Instance> {
        let n = self.graph.vertex_count();
        let mut rep: Vec<usize> = (0..n).collect();
        fn find(rep: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while rep[r] != r {
                r = rep[r];
            }
            rep[x] = r;
            r
        }
        for e in self.graph.edge_ids() {
            if self.cost(e).is_zero() {
                let edge = self.graph.edge(e);
                let (a, b) = (find(&mut rep, edge.u.0), find(&mut rep, edge.v.0));
                if a != b {
                    rep[a.max(b)] = a.min(b);
                }
            }
        }
        let roots: Vec<usize> = (0..n).map(|x| find(&mut rep, x)).collect();
        let mut index = BTreeMap::new();
        let mut names = Vec::new();
        for (x, &r) in roots.iter().enumerate() {
            if r == x {
                index.insert(x, names.len());
                names.push(self.graph.vertex_name(VertexId(x)).to_string());
            }
        }
        let mut edges = Vec::new();
        let mut costs = Vec::new();
        for e in self.graph.edge_ids() {
            let edge = self.graph.edge(e);
            let (a, b) = (index[&roots[edge.u.0]], index[&roots[edge.v.0]]);
            if a != b {
                edges.push((edge.name.clone(), a, b));
                costs.push(self.cost(e).clone());
            }
        }
        let map = |v: VertexId| VertexId(index[&roots[v.0]]);
        let t = self.terminals;
        let terminals = Terminals {
            s1: map(t.s1),
            t1: map(t.t1),
            s2: map(t.s2),
            t2: map(t.t2),
        };
        Instance::new(Graph::new(names, edges)?, terminals, costs)
    }

    /// Contracts zero-cost edges and replaces each edge of integer cost k by
    /// a path of k unit-cost edges.
    pub fn subdivide_unit(&self) -> Result<Instance> {
        let base = self.contract_zero_cost_edges()?;
        let g = base.graph();
        let mut names: Vec<String> = g.vertex_names().to_vec();
        let mut edges = Vec::new();
        for e in g.edge_ids() {
            let c = base.cost(e);
            if !c.is_integer() {
                return Err(Error::BadParameter(format!("edge {} has non-integer cost", g.edge_name(e))));
            }
            let k: usize = c
                .to_integer()
                .try_into()
                .map_err(|_| Error::BadParameter("cost too large to subdivide".into()))?;
            let edge = g.edge(e);
            let mut prev = edge.u.0;
            for step in 1..k {
                names.push(format!("{}#{step}", edge.name));
                let next = names.len() - 1;
                edges.push((format!("{}#{}", edge.name, step - 1), prev, next));
                prev = next;
            }
            edges.push((format!("{}#{}", edge.name, k - 1), prev, edge.v.0));
        }
        let costs = vec![rational::one(); edges.len()];
        Instance::new(Graph::new(names, edges)?, base.terminals(), costs)
    }

    pub fn to_json(&self) -> String {
        let doc = RawDocument {
            vertices: self.graph.vertex_names().to_vec(),
            edges: self
                .graph
                .edge_ids()
                .map(|e| {
                    let edge = self.graph.edge(e);
                    RawEdge {
                        id: edge.name.clone(),
                        u: self.graph.vertex_name(edge.u).to_string(),
                        v: self.graph.vertex_name(edge.v).to_string(),
                        cost: Some(rational::format(self.cost(e))),
                    }
                })
                .collect(),
            terminals: Some(raw_terminals(&self.graph, self.terminals)),
        };
        serde_json::to_string_pretty(&doc).expect("instance serializes")
    }

    pub fn from_json(text: &str) -> Result<Instance> {
        let doc = GraphDocument::from_json(text)?;
        let terminals = doc.terminals.ok_or_else(|| Error::invalid("terminals", "missing"))?;
        let costs = doc
            .costs
            .into_iter()
            .enumerate()
            .map(|(i, c)| c.ok_or_else(|| Error::invalid(format!("edges[{i}].cost"), "missing")))
            .collect::<Result<Vec<_>>>()?;
        Instance::new(doc.graph, terminals, costs)
    }
}

/// A parsed JSON document in which terminals and costs are optional, so the
/// same format carries bare graphs and full instances.
#[derive(Clone, Debug)]
pub struct GraphDocument {
    pub graph: Graph,
    pub terminals: Option<Terminals>,
    pub costs: Vec<Option<Rational>>,
}

impl GraphDocument {
    pub fn from_json(text: &str) -> Result<GraphDocument> {
        let raw: RawDocument = serde_json::from_str(text).map_err(|e| Error::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let names: BTreeMap<&str, usize> = raw.vertices.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let lookup = |field: String, name: &str| {
            names
                .get(name)
                .copied()
                .ok_or_else(|| Error::invalid(field, format!("unknown vertex {name:?}")))
        };
        let mut edges = Vec::new();
        let mut costs = Vec::new();
        for (i, e) in raw.edges.iter().enumerate() {
            let u = lookup(format!("edges[{i}].u"), &e.u)?;
            let v = lookup(format!("edges[{i}].v"), &e.v)?;
            edges.push((e.id.clone(), u, v));
            costs.push(match &e.cost {
                Some(c) => Some(
                    rational::parse(c).map_err(|err| Error::invalid(format!("edges[{i}].cost"), err.to_string()))?,
                ),
                None => None,
            });
        }
        let terminals = match &raw.terminals {
            Some(t) => Some(Terminals {
                s1: VertexId(lookup("terminals.s1".into(), &t.s1)?),
                t1: VertexId(lookup("terminals.t1".into(), &t.t1)?),
                s2: VertexId(lookup("terminals.s2".into(), &t.s2)?),
                t2: VertexId(lookup("terminals.t2".into(), &t.t2)?),
            }),
            None => None,
        };
        let graph = Graph::new(raw.vertices.clone(), edges)?;
        if let Some(t) = &terminals {
            t.validate(&graph)?;
        }
        Ok(GraphDocument { graph, terminals, costs })
    }

    pub fn graph_to_json(g: &Graph) -> String {
        let doc = RawDocument {
            vertices: g.vertex_names().to_vec(),
            edges: g
                .edge_ids()
                .map(|e| {
                    let edge = g.edge(e);
                    RawEdge {
                        id: edge.name.clone(),
                        u: g.vertex_name(edge.u).to_string(),
                        v: g.vertex_name(edge.v).to_string(),
                        cost: None,
                    }
                })
                .collect(),
            terminals: None,
        };
        serde_json::to_string_pretty(&doc).expect("graph serializes")
    }
}

fn raw_terminals(g: &Graph, t: Terminals) -> RawTerminals {
    RawTerminals {
        s1: g.vertex_name(t.s1).to_string(),
        t1: g.vertex_name(t.t1).to_string(),
        s2: g.vertex_name(t.s2).to_string(),
        t2: g.vertex_name(t.t2).to_string(),
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    vertices: Vec<String>,
    edges: Vec<RawEdge>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    terminals: Option<RawTerminals>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEdge {
    id: String,
    u: String,
    v: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cost: Option<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerminals {
    s1: String,
    t1: String,
    s2: String,
    t2: String,
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = r#"{
        "vertices": ["a", "b", "c"],
        "edges": [
            {"id": "ab", "u": "a", "v": "b", "cost": "3/2"},
            {"id": "bc", "u": "b", "v": "c", "cost": "0"}
        ],
        "terminals": {"s1": "a", "t1": "b", "s2": "b", "t2": "c"}
    }"#;

    #[test]
    fn json_round_trip() {
        let inst = Instance::from_json(SMALL).unwrap();
        assert_eq!(inst.cost(EdgeId(0)), &rational::frac(3, 2));
        let again = Instance::from_json(&inst.to_json()).unwrap();
        assert_eq!(inst, again);
        assert_eq!(inst.to_json(), again.to_json());
    }

    #[test]
    fn reports_field_paths() {
        let bad = SMALL.replace("\"3/2\"", "\"-1\"");
        assert_eq!(
            Instance::from_json(&bad).unwrap_err(),
            Error::invalid("edges[0].cost", "negative cost")
        );
        let bad = SMALL.replace("\"v\": \"c\"", "\"v\": \"zz\"");
        assert!(matches!(Instance::from_json(&bad), Err(Error::Invalid { field, .. }) if field == "edges[1].v"));
        let bad = SMALL.replace("\"t2\": \"c\"", "\"t2\": \"b\"");
        assert!(Instance::from_json(&bad).is_err());
        assert!(matches!(Instance::from_json("{\n  \"vertices\": 3\n}"), Err(Error::Json { line: 2, .. })));
    }

    #[test]
    fn rejects_disconnected_pairs() {
        let g = Graph::from_pairs(4, &[(0, 1), (2, 3)]).unwrap();
        let t = Terminals {
            s1: VertexId(0),
            t1: VertexId(2),
            s2: VertexId(2),
            t2: VertexId(3),
        };
        assert!(Instance::new(g, t, vec![rational::one(); 2]).is_err());
    }

    #[test]
    fn contraction_and_subdivision() {
        let inst = Instance::from_json(SMALL).unwrap();
        assert!(inst.contract_zero_cost_edges().is_err(), "s2 and t2 merge");
        let g = Graph::from_pairs(3, &[(0, 1), (1, 2)]).unwrap();
        let t = Terminals {
            s1: VertexId(0),
            t1: VertexId(2),
            s2: VertexId(0),
            t2: VertexId(1),
        };
        let inst = Instance::new(g, t, vec![rational::int(3), rational::int(2)]).unwrap();
        let sub = inst.subdivide_unit().unwrap();
        assert_eq!(sub.graph().edge_count(), 5);
        assert_eq!(sub.graph().vertex_count(), 6);
        assert!(sub.graph().connected(sub.terminals().s1, sub.terminals().t1));
    }
}
