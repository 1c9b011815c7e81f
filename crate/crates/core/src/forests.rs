//! Steiner forests of a two-player instance, optimal forests and the price
//! of stability.

use std::collections::HashSet;

use fixedbitset::FixedBitSet;
use num_traits::Zero;
use serde::Serialize;

use crate::enforce::LpModel;
use crate::error::{Error, Result};
use crate::graph::{enumerate_simple_paths, EdgeId, Path};
use crate::instance::{Instance, Player};
use crate::rational::{self, Rational};

/// Simple terminal paths of both players, enumerated once per instance.
#[derive(Clone, Debug)]
pub struct PathCatalog {
    paths: [Vec<Path>; 2],
}

impl PathCatalog {
    pub fn new(inst: &Instance, cap: usize) -> Result<Self> {
        let t = inst.terminals();
        let g = inst.graph();
        Ok(PathCatalog {
            paths: [
                enumerate_simple_paths(g, t.s1, t.t1, cap)?,
                enumerate_simple_paths(g, t.s2, t.t2, cap)?,
            ],
        })
    }

    pub fn paths(&self, p: Player) -> &[Path] {
        &self.paths[p.index()]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SteinerForest {
    /// Ascending edge ids.
    pub edges: Vec<EdgeId>,
    pub p1: Path,
    pub p2: Path,
    pub cost: Rational,
}

impl SteinerForest {
    pub fn path(&self, p: Player) -> &Path {
        match p {
            Player::One => &self.p1,
            Player::Two => &self.p2,
        }
    }

    /// Players whose path contains `e`.
    pub fn users(&self, e: EdgeId) -> Vec<Player> {
        Player::BOTH.into_iter().filter(|&p| self.path(p).contains_edge(e)).collect()
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    /// Builds the forest from an explicit edge set, recovering both paths.
    pub fn from_edges(inst: &Instance, edges: &[EdgeId]) -> Result<SteinerForest> {
        let g = inst.graph();
        let mut sorted: Vec<EdgeId> = edges.to_vec();
        sorted.sort();
        sorted.dedup();
        if sorted.iter().any(|e| e.0 >= g.edge_count()) {
            return Err(Error::NotAForest("unknown edge".into()));
        }
        if !crate::graph::is_forest(&sorted, g) {
            return Err(Error::NotAForest("edge set has a cycle".into()));
        }
        let names: Vec<String> = g.vertex_names().to_vec();
        let sub_edges = sorted
            .iter()
            .map(|&e| (g.edge_name(e).to_string(), g.edge(e).u.0, g.edge(e).v.0))
            .collect();
        let sub = crate::graph::Graph::new(names, sub_edges)?;
        let t = inst.terminals();
        let mut paths = Vec::new();
        for (s, tt) in [(t.s1, t.t1), (t.s2, t.t2)] {
            let found = enumerate_simple_paths(&sub, s, tt, 2)?;
            let Some(p) = found.into_iter().next() else {
                return Err(Error::NotAForest("a terminal pair is not connected".into()));
            };
            paths.push(Path {
                vertices: p.vertices,
                edges: p.edges.iter().map(|e| sorted[e.0]).collect(),
            });
        }
        let p2 = paths.pop().unwrap();
        let p1 = paths.pop().unwrap();
        let forest = SteinerForest::from_paths(inst, p1, p2)
            .ok_or_else(|| Error::NotAForest("edge set is not a union of the two paths".into()))?;
        if forest.edges != sorted {
            return Err(Error::NotAForest("edge set has edges on neither terminal path".into()));
        }
        Ok(forest)
    }

    /// The union of two terminal paths, or `None` if it has a cycle.
    pub fn from_paths(inst: &Instance, p1: Path, p2: Path) -> Option<SteinerForest> {
        let g = inst.graph();
        let mut edges = FixedBitSet::with_capacity(g.edge_count());
        let mut vertices = FixedBitSet::with_capacity(g.vertex_count());
        for p in [&p1, &p2] {
            edges.extend(p.edges.iter().map(|e| e.0));
            vertices.extend(p.vertices.iter().map(|v| v.0));
        }
        let components = if p1.vertices.iter().any(|v| p2.contains_vertex(*v)) { 1 } else { 2 };
        if edges.count_ones(..) + components != vertices.count_ones(..) {
            return None;
        }
        let edges: Vec<EdgeId> = edges.ones().map(EdgeId).collect();
        let cost = inst.total_cost(&edges);
        Some(SteinerForest { edges, p1, p2, cost })
    }

    pub fn edge_names(&self, inst: &Instance) -> Vec<String> {
        self.edges.iter().map(|&e| inst.graph().edge_name(e).to_string()).collect()
    }
}

/// Every acyclic union of a simple s1–t1 path and a simple s2–t2 path,
/// sorted by cost and then by edge set. `cap` bounds both the per-player
/// path counts and the number of forests.
pub fn enumerate_forests(inst: &Instance, cap: usize) -> Result<Vec<SteinerForest>> {
    let catalog = PathCatalog::new(inst, cap)?;
    enumerate_forests_with(inst, &catalog, cap)
}

pub fn enumerate_forests_with(inst: &Instance, catalog: &PathCatalog, cap: usize) -> Result<Vec<SteinerForest>> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for p1 in catalog.paths(Player::One) {
        for p2 in catalog.paths(Player::Two) {
            if let Some(f) = SteinerForest::from_paths(inst, p1.clone(), p2.clone()) {
                if seen.insert(f.edges.clone()) {
                    if out.len() == cap {
                        return Err(Error::PathExplosion(cap));
                    }
                    out.push(f);
                }
            }
        }
    }
    out.sort_by(|a, b| a.cost.cmp(&b.cost).then_with(|| a.edges.cmp(&b.edges)));
    Ok(out)
}

/// Minimum forest cost and every forest attaining it.
pub fn optimal_forests(inst: &Instance, cap: usize) -> Result<(Rational, Vec<SteinerForest>)> {
    let all = enumerate_forests(inst, cap)?;
    let min = all.first().map(|f| f.cost.clone()).ok_or(Error::NoEnforceableForest)?;
    let best = all.into_iter().take_while(|f| f.cost == min).collect();
    Ok((min, best))
}

#[derive(Clone, Debug, Serialize)]
pub struct PosReport {
    #[serde(with = "rational")]
    pub pos: Rational,
    #[serde(with = "rational")]
    pub optimal_cost: Rational,
    #[serde(with = "rational")]
    pub best_cost: Rational,
    #[serde(skip)]
    pub best_enforceable: SteinerForest,
    /// All enforceable forests of cost `best_cost`, in enumeration order.
    #[serde(skip)]
    pub tied: Vec<SteinerForest>,
}

/// Cheapest enforceable forest cost over optimal cost. An instance whose
/// optimum costs nothing has price of stability 1.
pub fn price_of_stability(inst: &Instance, cap: usize) -> Result<PosReport> {
    let catalog = PathCatalog::new(inst, cap)?;
    let forests = enumerate_forests_with(inst, &catalog, cap)?;
    let optimal_cost = forests.first().map(|f| f.cost.clone()).ok_or(Error::NoEnforceableForest)?;
    let mut tied: Vec<SteinerForest> = Vec::new();
    for f in forests {
        if let Some(first) = tied.first() {
            if f.cost != first.cost {
                break;
            }
        }
        if LpModel::new(inst, &f, &catalog).is_enforceable() {
            tied.push(f);
        }
    }
    let best = tied.first().cloned().ok_or(Error::NoEnforceableForest)?;
    let pos = if optimal_cost.is_zero() {
        if !best.cost.is_zero() {
            return Err(Error::Consistency("zero-cost optimum without a zero-cost enforceable forest".into()));
        }
        rational::one()
    } else {
        &best.cost / &optimal_cost
    };
    Ok(PosReport {
        pos,
        optimal_cost,
        best_cost: best.cost.clone(),
        best_enforceable: best,
        tied,
    })
}
