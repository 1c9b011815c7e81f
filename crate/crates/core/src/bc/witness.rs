//! Witness costs: each slot's table cost sits on the first edge of its image,
//! every other embedding edge is free, and edges outside the embedding get a
//! big-M price that no forest worth considering can afford.

use super::BcEmbedding;
use crate::error::Result;
use crate::graph::Graph;
use crate::instance::{Instance, Terminals};
use crate::rational::{self, Rational};

pub fn generate_witness(emb: &BcEmbedding, g: &Graph, t: &Terminals) -> Result<Instance> {
    let pattern = emb.pattern();
    let big_m = rational::int(1 + pattern.total_cost());
    let mut costs: Vec<Rational> = vec![big_m; g.edge_count()];
    for (image, spec) in emb.slots.iter().zip(&pattern.slots) {
        for (k, &e) in image.path.edges.iter().enumerate() {
            costs[e.0] = if k == 0 { rational::int(spec.cost) } else { rational::zero() };
        }
    }
    Instance::new(g.clone(), *t, costs)
}
