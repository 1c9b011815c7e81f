//! Two-player network design games: enforceability of Steiner forests under
//! separable cost-sharing protocols, Bad Configuration detection and exact
//! price of stability on small instances.

pub mod bc;
pub mod classes;
pub mod enforce;
pub mod error;
pub mod forests;
pub mod graph;
pub mod instance;
pub mod lp;
pub mod rational;
pub mod shares;

pub use error::{Error, Result};
pub use graph::{EdgeId, Graph, Path, VertexId};
pub use instance::{Instance, Player, Terminals};
pub use rational::Rational;
