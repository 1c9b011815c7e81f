//! Graph families, reference fixture instances, random generators and the
//! efficiency classifier.

use std::collections::BTreeSet;

use num_traits::Signed;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::bc::{detect_bc, BcEmbedding, BcKind, BcOutcome, BcPattern, DetectOptions, Prefilter};
use crate::enforce::CostShares;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId};
use crate::instance::{Instance, Player, Terminals};
use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Wheel,
    Fan,
    Cycle,
    Path,
    Complete,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::Wheel, Family::Fan, Family::Cycle, Family::Path, Family::Complete];

    pub fn name(self) -> &'static str {
        match self {
            Family::Wheel => "wheel",
            Family::Fan => "fan",
            Family::Cycle => "cycle",
            Family::Path => "path",
            Family::Complete => "complete",
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.name() == s)
    }

    fn minimum(self) -> usize {
        match self {
            Family::Wheel | Family::Cycle => 3,
            Family::Fan | Family::Path => 2,
            Family::Complete => 1,
        }
    }

    /// Vertices `0..n` carry the cycle, path or clique; wheels and fans add
    /// vertex `n` adjacent to all of them.
    pub fn generate(self, n: usize) -> Result<Graph> {
        if n < self.minimum() {
            return Err(Error::BadParameter(format!("{} needs n >= {}", self.name(), self.minimum())));
        }
        let path: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        let spokes = (0..n).map(|i| (i, n));
        let pairs: Vec<(usize, usize)> = match self {
            Family::Path => path,
            Family::Cycle => path.into_iter().chain([(n - 1, 0)]).collect(),
            Family::Wheel => path.into_iter().chain([(n - 1, 0)]).chain(spokes).collect(),
            Family::Fan => path.into_iter().chain(spokes).collect(),
            Family::Complete => (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect(),
        };
        let vertices = match self {
            Family::Wheel | Family::Fan => n + 1,
            _ => n,
        };
        Graph::from_pairs(vertices, &pairs)
    }
}

/// `wheel7`, `fan5`, ... as a family and size.
pub fn parse_family_id(id: &str) -> Option<(Family, usize)> {
    let split = id.find(|c: char| c.is_ascii_digit())?;
    let family = Family::parse(&id[..split])?;
    let n = id[split..].parse().ok()?;
    Some((family, n))
}

pub const FIXTURE_IDS: [&str; 5] = ["fig1-shapley", "fig1bc1", "pos-lower-bound", "bipartite-bc1a", "planar-bc1a"];

/// Fixture parameters; `eps` is used by fig1-shapley and `x` by pos-lower-bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixtureParams {
    pub eps: Rational,
    pub x: Rational,
}

impl Default for FixtureParams {
    fn default() -> Self {
        FixtureParams {
            eps: rational::frac(1, 4),
            x: rational::one(),
        }
    }
}

pub fn fixture_ids() -> Vec<String> {
    let mut ids: Vec<String> = FIXTURE_IDS.iter().map(|s| s.to_string()).collect();
    ids.extend(BcKind::ALL.iter().map(|k| format!("bc-minimal-{}", k.name().to_lowercase())));
    ids
}

pub fn fixture(id: &str, params: &FixtureParams) -> Result<Instance> {
    match id {
        "fig1-shapley" => fig1_shapley(&params.eps),
        "fig1bc1" => fig1bc1(),
        "pos-lower-bound" => pos_lower_bound(&params.x),
        "bipartite-bc1a" => bipartite_bc1a(),
        "planar-bc1a" => planar_bc1a(),
        _ => {
            let kind = id
                .strip_prefix("bc-minimal-")
                .and_then(BcKind::parse)
                .ok_or_else(|| Error::BadParameter(format!("unknown fixture {id:?}")))?;
            bc_minimal(kind)
        }
    }
}

fn build(vertices: &[&str], edges: &[(&str, &str, Rational)], terminals: [&str; 4]) -> Result<Instance> {
    let names: Vec<String> = vertices.iter().map(|s| s.to_string()).collect();
    let at = |n: &str| vertices.iter().position(|&v| v == n).expect("fixture vertex");
    let list = edges.iter().map(|(a, b, _)| (format!("{a}-{b}"), at(a), at(b))).collect();
    let g = Graph::new(names, list)?;
    let t = Terminals {
        s1: VertexId(at(terminals[0])),
        t1: VertexId(at(terminals[1])),
        s2: VertexId(at(terminals[2])),
        t2: VertexId(at(terminals[3])),
    };
    Instance::new(g, t, edges.iter().map(|(_, _, c)| c.clone()).collect())
}

/// Both players start at `s`; the optimum shares the edge to `t2`.
pub fn fig1_shapley(eps: &Rational) -> Result<Instance> {
    if !eps.is_positive() {
        return Err(Error::BadParameter("eps must be positive".into()));
    }
    let one = rational::one();
    let two = rational::int(2);
    build(
        &["s", "t2", "t1"],
        &[
            ("s", "t2", two.clone()),
            ("t2", "t1", &one + &two * eps),
            ("s", "t1", &two + eps),
        ],
        ["s", "t1", "s", "t2"],
    )
}

/// Reference protocol shares: player two carries `s-t2`,
/// player one the edge `t2-t1`.
pub fn fig1_reference_shares(inst: &Instance) -> CostShares {
    let e = |n: &str| inst.graph().find_edge(n).unwrap();
    let mut xi = CostShares::new();
    xi.set(Player::One, e("s-t2"), rational::zero());
    xi.set(Player::Two, e("s-t2"), inst.cost(e("s-t2")).clone());
    xi.set(Player::One, e("t2-t1"), inst.cost(e("t2-t1")).clone());
    xi
}

pub fn fig1bc1() -> Result<Instance> {
    let c = rational::int;
    build(
        &["s1", "s2", "n2", "v3", "n5", "v4", "v6", "v7", "n3", "n4", "t1", "t2"],
        &[
            ("s1", "v3", c(0)),
            ("s2", "n2", c(0)),
            ("n2", "v3", c(5)),
            ("v3", "n5", c(0)),
            ("n5", "v4", c(3)),
            ("v4", "v6", c(2)),
            ("v6", "v7", c(3)),
            ("v7", "n3", c(4)),
            ("n3", "t1", c(0)),
            ("v7", "n4", c(5)),
            ("n4", "t2", c(0)),
            ("n5", "n3", c(9)),
            ("n2", "v6", c(6)),
            ("v4", "n4", c(6)),
        ],
        ["s1", "t1", "s2", "t2"],
    )
}

/// Reference optimal shares for `fig1bc1`; zero-cost edges carry nothing.
pub fn fig1bc1_reference_shares(inst: &Instance) -> CostShares {
    let e = |n: &str| inst.graph().find_edge(n).unwrap();
    let table: [(&str, Option<i64>, Option<i64>); 10] = [
        ("s1-v3", Some(0), None),
        ("s2-n2", None, Some(0)),
        ("n2-v3", None, Some(5)),
        ("v3-n5", Some(0), Some(0)),
        ("n5-v4", Some(2), Some(1)),
        ("v4-v6", Some(2), Some(0)),
        ("v6-v7", Some(2), Some(1)),
        ("v7-n3", Some(3), None),
        ("n3-t1", Some(0), None),
        ("v7-n4", None, Some(5)),
    ];
    let mut xi = CostShares::new();
    for (name, a, b) in table {
        if let Some(a) = a {
            xi.set(Player::One, e(name), rational::int(a));
        }
        if let Some(b) = b {
            xi.set(Player::Two, e(name), rational::int(b));
        }
    }
    xi.set(Player::Two, e("n4-t2"), rational::zero());
    xi
}

pub fn pos_lower_bound(x: &Rational) -> Result<Instance> {
    if x.is_negative() {
        return Err(Error::BadParameter("x must be nonnegative".into()));
    }
    let lin = |a: i64, b: i64| rational::int(a) * x + rational::int(b);
    build(
        &["s1", "s2", "v4", "v6", "v7", "t1", "t2"],
        &[
            ("s2", "s1", lin(3, 2)),
            ("s1", "v4", lin(2, 1)),
            ("v4", "v6", lin(1, 1)),
            ("v6", "v7", lin(2, 1)),
            ("v7", "t1", lin(3, 1)),
            ("v7", "t2", lin(3, 2)),
            ("v4", "t2", lin(4, 2)),
            ("s2", "v6", lin(4, 2)),
            ("s1", "t1", lin(6, 3)),
        ],
        ["s1", "t1", "s2", "t2"],
    )
}

/// Edges of the enforceable forest of cost `15x+8`: both players on
/// disjoint shortest paths.
pub fn pos_witness_edges(inst: &Instance) -> Vec<EdgeId> {
    let mut e: Vec<EdgeId> = ["v4-v6", "v4-t2", "s2-v6", "s1-t1"]
        .iter()
        .map(|n| inst.graph().find_edge(n).unwrap())
        .collect();
    e.sort();
    e
}

const BC1A_TEMPLATE: [(&str, &str); 12] = [
    ("s1", "v3"),
    ("s2", "v3"),
    ("v3", "v4"),
    ("v4", "v5"),
    ("v5", "v6"),
    ("v6", "v7"),
    ("v7", "v8"),
    ("v8", "t1"),
    ("v8", "t2"),
    ("s2", "v7"),
    ("v4", "t1"),
    ("v6", "t2"),
];

pub fn bipartite_bc1a() -> Result<Instance> {
    let edges: Vec<(&str, &str, Rational)> = BC1A_TEMPLATE.iter().map(|&(a, b)| (a, b, rational::one())).collect();
    build(&["s1", "s2", "v3", "v4", "v5", "v6", "v7", "v8", "t1", "t2"], &edges, ["s1", "t1", "s2", "t2"])
}

/// The bipartite fixture with `v5` suppressed.
pub fn planar_bc1a() -> Result<Instance> {
    let mut edges: Vec<(&str, &str, Rational)> = BC1A_TEMPLATE
        .iter()
        .filter(|(a, b)| *a != "v5" && *b != "v5")
        .map(|&(a, b)| (a, b, rational::one()))
        .collect();
    edges.insert(3, ("v4", "v6", rational::one()));
    build(&["s1", "s2", "v3", "v4", "v6", "v7", "v8", "t1", "t2"], &edges, ["s1", "t1", "s2", "t2"])
}

/// The pattern with every solid slot a single edge at its witness cost.
pub fn bc_minimal(kind: BcKind) -> Result<Instance> {
    let pattern = BcPattern::get(kind);
    let (g, t) = pattern.minimal_graph()?;
    Instance::new(g, t, pattern.minimal_costs())
}

/// Connected simple graph: a random spanning tree plus each remaining pair
/// with probability `density`.
pub fn random_connected_graph<R: Rng>(rng: &mut R, n: usize, density: f64) -> Result<Graph> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut pairs = BTreeSet::new();
    for k in 1..n {
        let a = order[k];
        let b = order[rng.gen_range(0..k)];
        pairs.insert((a.min(b), a.max(b)));
    }
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(density) {
                pairs.insert((a, b));
            }
        }
    }
    Graph::from_pairs(n, &pairs.into_iter().collect::<Vec<_>>())
}

/// A K4-minor-free graph grown from one edge by subdividing edges, adding a
/// two-edge path parallel to an edge, and hanging leaves.
pub fn random_series_parallel<R: Rng>(rng: &mut R, steps: usize) -> Result<Graph> {
    let mut n = 2;
    let mut edges: Vec<(usize, usize)> = vec![(0, 1)];
    for _ in 0..steps {
        let k = rng.gen_range(0..edges.len());
        let (a, b) = edges[k];
        match rng.gen_range(0..3) {
            0 => {
                edges[k] = (a, n);
                edges.push((n, b));
            }
            1 => {
                edges.push((a, n));
                edges.push((n, b));
            }
            _ => {
                let host = rng.gen_range(0..n);
                edges.push((host, n));
            }
        }
        n += 1;
    }
    Graph::from_pairs(n, &edges)
}

/// Costs `p/q` with `p ∈ 0..=10`, `q ∈ 1..=4`.
pub fn random_costs<R: Rng>(rng: &mut R, m: usize) -> Vec<Rational> {
    (0..m).map(|_| rational::frac(rng.gen_range(0..=10), rng.gen_range(1..=4))).collect()
}

/// Terminal pairs with `s_i ≠ t_i`; if `distinct`, all four differ.
pub fn random_terminals<R: Rng>(rng: &mut R, n: usize, distinct: bool) -> Terminals {
    loop {
        let v: Vec<usize> = if distinct {
            let mut all: Vec<usize> = (0..n).collect();
            all.shuffle(rng);
            all.truncate(4);
            all
        } else {
            (0..4).map(|_| rng.gen_range(0..n)).collect()
        };
        if v[0] != v[1] && v[2] != v[3] {
            return Terminals {
                s1: VertexId(v[0]),
                t1: VertexId(v[1]),
                s2: VertexId(v[2]),
                t2: VertexId(v[3]),
            };
        }
    }
}

/// Connected simple graphs on `n` vertices, one per isomorphism class, each
/// as the edge set that is lexicographically smallest over relabelings.
pub fn connected_graphs_up_to_iso(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let perms = permutations(n);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << pairs.len()) {
        let chosen: Vec<(usize, usize)> = (0..pairs.len()).filter(|k| mask >> k & 1 == 1).map(|k| pairs[k]).collect();
        if !connected(n, &chosen) {
            continue;
        }
        let canon = perms
            .iter()
            .map(|p| {
                let mut e: Vec<(usize, usize)> = chosen
                    .iter()
                    .map(|&(a, b)| (p[a].min(p[b]), p[a].max(p[b])))
                    .collect();
                e.sort();
                e
            })
            .min()
            .unwrap();
        if seen.insert(canon.clone()) {
            out.push(Graph::from_pairs(n, &canon).expect("simple graph"));
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..=p.len() {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

fn connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for &(a, b) in edges {
            let y = if a == x { b } else if b == x { a } else { continue };
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen.iter().all(|&s| s)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Efficiency {
    /// No Bad Configuration; the reason names the prefilter or the search.
    Efficient(Prefilter),
    NotEfficient(Box<BcEmbedding>),
    /// The search ran out of its expansion budget.
    Unknown(u64),
}

pub fn classify_efficiency(g: &Graph, t: &Terminals, opts: &DetectOptions) -> Result<Efficiency> {
    match detect_bc(g, t, opts) {
        Ok(BcOutcome::Found(emb)) => Ok(Efficiency::NotEfficient(Box::new(emb))),
        Ok(BcOutcome::None(reason)) => Ok(Efficiency::Efficient(reason)),
        Err(Error::SearchBudgetExceeded(cap)) => Ok(Efficiency::Unknown(cap)),
        Err(e) => Err(e),
    }
}
