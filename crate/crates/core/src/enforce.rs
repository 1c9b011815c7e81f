//! LP(F), enforceability and the separable protocol built from an optimal
//! share vector.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forests::{PathCatalog, SteinerForest};
use crate::graph::{EdgeId, Path};
use crate::instance::{Instance, Player};
use crate::lp::{self, LinearProgram, LpSolution, LpStatus};
use crate::rational::{self, Rational};

/// Shares ξ keyed by player and edge, defined on the edges of that player's
/// path.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CostShares {
    entries: BTreeMap<(Player, EdgeId), Rational>,
}

impl CostShares {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, p: Player, e: EdgeId, value: Rational) {
        self.entries.insert((p, e), value);
    }

    /// Zero for edges off the player's path.
    pub fn get(&self, p: Player, e: EdgeId) -> Rational {
        self.entries.get(&(p, e)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total(&self, p: Player) -> Rational {
        self.entries
            .iter()
            .filter(|((q, _), _)| *q == p)
            .fold(Rational::zero(), |acc, (_, v)| acc + v)
    }

    pub fn sum(&self) -> Rational {
        self.entries.values().fold(Rational::zero(), |acc, v| acc + v)
    }

    pub fn edge_total(&self, e: EdgeId) -> Rational {
        self.get(Player::One, e) + self.get(Player::Two, e)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Player, EdgeId, &Rational)> {
        self.entries.iter().map(|(&(p, e), v)| (p, e, v))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.values().all(|v| !v.is_negative())
    }

    /// Shares as `{player, edge, share}` records with edge names.
    pub fn to_records(&self, inst: &Instance) -> Vec<ShareRecord> {
        self.iter()
            .map(|(p, e, v)| ShareRecord {
                player: p,
                edge: inst.graph().edge_name(e).to_string(),
                share: v.clone(),
            })
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ShareRecord {
    pub player: Player,
    pub edge: String,
    #[serde(with = "rational")]
    pub share: Rational,
}

/// One deviation row: `Σ_{e∈P_i∖P_i'} ξ_{i,e} ≤ Σ_{e∈P_i'∖P_i} c(e)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Deviation {
    pub player: Player,
    /// Index of the alternative in the player's path catalog.
    pub alternative: usize,
    /// `P_i ∖ P_i'`.
    pub substituted: Vec<EdgeId>,
    pub rhs: Rational,
}

/// LP(F) in structured form. Variables are player one's path edges in path
/// order, then player two's.
#[derive(Clone, Debug)]
pub struct LpModel {
    pub forest: SteinerForest,
    pub vars: Vec<(Player, EdgeId)>,
    index: BTreeMap<(Player, EdgeId), usize>,
    /// `(e, c(e))` for each forest edge, ascending.
    pub capacity: Vec<(EdgeId, Rational)>,
    pub deviations: Vec<Deviation>,
}

impl LpModel {
    pub fn new(inst: &Instance, f: &SteinerForest, catalog: &PathCatalog) -> LpModel {
        let mut vars = Vec::new();
        for p in Player::BOTH {
            vars.extend(f.path(p).edges.iter().map(|&e| (p, e)));
        }
        let index = vars.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        let capacity = f.edges.iter().map(|&e| (e, inst.cost(e).clone())).collect();
        let mut deviations = Vec::new();
        for p in Player::BOTH {
            let own = f.path(p);
            for (k, alt) in catalog.paths(p).iter().enumerate() {
                if alt.edges == own.edges {
                    continue;
                }
                let substituted: Vec<EdgeId> = own.edges.iter().copied().filter(|e| !alt.contains_edge(*e)).collect();
                let rhs = inst.total_cost(alt.edges.iter().filter(|e| !own.contains_edge(**e)));
                deviations.push(Deviation {
                    player: p,
                    alternative: k,
                    substituted,
                    rhs,
                });
            }
        }
        LpModel {
            forest: f.clone(),
            vars,
            index,
            capacity,
            deviations,
        }
    }

    pub fn var(&self, p: Player, e: EdgeId) -> Option<usize> {
        self.index.get(&(p, e)).copied()
    }

    /// Rows in order: capacities, then deviations.
    pub fn rows(&self) -> Vec<(Vec<(usize, Rational)>, Rational)> {
        let mut rows = Vec::with_capacity(self.capacity.len() + self.deviations.len());
        for (e, c) in &self.capacity {
            let terms = Player::BOTH
                .into_iter()
                .filter_map(|p| self.var(p, *e).map(|j| (j, Rational::one())))
                .collect();
            rows.push((terms, c.clone()));
        }
        for d in &self.deviations {
            let terms = d
                .substituted
                .iter()
                .map(|&e| (self.var(d.player, e).unwrap(), Rational::one()))
                .collect();
            rows.push((terms, d.rhs.clone()));
        }
        rows
    }

    pub fn to_lp(&self) -> LinearProgram {
        let n = self.vars.len();
        let mut lp = LinearProgram::maximize(vec![Rational::one(); n]);
        for (terms, rhs) in self.rows() {
            let mut row = vec![Rational::zero(); n];
            for (j, v) in terms {
                row[j] = v;
            }
            lp.add_le(row, rhs);
        }
        lp
    }

    pub fn player_two_objective(&self) -> Vec<Rational> {
        self.vars
            .iter()
            .map(|(p, _)| if *p == Player::Two { Rational::one() } else { Rational::zero() })
            .collect()
    }

    pub fn to_vector(&self, shares: &CostShares) -> Vec<Rational> {
        self.vars.iter().map(|&(p, e)| shares.get(p, e)).collect()
    }

    pub fn to_shares(&self, values: &[Rational]) -> CostShares {
        let mut s = CostShares::new();
        for (&(p, e), v) in self.vars.iter().zip(values) {
            s.set(p, e, v.clone());
        }
        s
    }

    pub fn is_feasible(&self, shares: &CostShares) -> bool {
        let defined_only_on_paths = shares.iter().all(|(p, e, _)| self.var(p, e).is_some());
        defined_only_on_paths && self.to_lp().is_feasible(&self.to_vector(shares))
    }

    pub fn optimum(&self) -> Rational {
        lp::solve(&self.to_lp()).objective
    }

    pub fn is_enforceable(&self) -> bool {
        self.optimum() == self.forest.cost
    }

    /// The optimum maximizing player two's total among optima.
    pub fn lexicographic_optimum(&self) -> Result<(LpSolution, CostShares)> {
        let sol = lp::solve_lexicographic(&self.to_lp(), &self.player_two_objective());
        if sol.status != LpStatus::Optimal {
            return Err(Error::Consistency(format!("LP(F) reported {:?}", sol.status)));
        }
        let shares = self.to_shares(&sol.values);
        Ok((sol, shares))
    }
}

/// Builds LP(F) with one deviation row per alternative simple path.
pub fn build_lp(inst: &Instance, f: &SteinerForest, cap: usize) -> Result<LinearProgram> {
    let catalog = PathCatalog::new(inst, cap)?;
    Ok(LpModel::new(inst, f, &catalog).to_lp())
}

#[derive(Clone, Debug, Serialize)]
pub struct UnpaidEdge {
    pub edge: String,
    #[serde(with = "rational")]
    pub deficit: Rational,
}

#[derive(Clone, Debug)]
pub struct EnforceReport {
    pub lp_optimum: Rational,
    pub forest_cost: Rational,
    pub enforceable: bool,
    pub shares: CostShares,
    /// `(e, c(e) − Σ_i ξ_{i,e})` for edges with a positive deficit.
    pub unpaid_edges: Vec<(EdgeId, Rational)>,
}

pub fn check_enforceable(inst: &Instance, f: &SteinerForest, cap: usize) -> Result<EnforceReport> {
    let catalog = PathCatalog::new(inst, cap)?;
    let model = LpModel::new(inst, f, &catalog);
    report_for(inst, &model)
}

pub fn report_for(inst: &Instance, model: &LpModel) -> Result<EnforceReport> {
    let f = &model.forest;
    let (sol, shares) = model.lexicographic_optimum()?;
    let unpaid_edges: Vec<(EdgeId, Rational)> = f
        .edges
        .iter()
        .map(|&e| (e, inst.cost(e) - shares.edge_total(e)))
        .filter(|(_, d)| d.is_positive())
        .collect();
    let enforceable = sol.objective == f.cost;
    if enforceable != unpaid_edges.is_empty() {
        return Err(Error::Consistency("budget balance disagrees with LP optimum".into()));
    }
    Ok(EnforceReport {
        lp_optimum: sol.objective,
        forest_cost: f.cost.clone(),
        enforceable,
        shares,
        unpaid_edges,
    })
}

/// A set of players sharing an edge, as a bit mask (bit 0 is player one).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlayerSet(pub u8);

impl PlayerSet {
    pub const ALL: [PlayerSet; 4] = [PlayerSet(0), PlayerSet(1), PlayerSet(2), PlayerSet(3)];

    pub fn of(players: &[Player]) -> PlayerSet {
        PlayerSet(players.iter().fold(0, |m, p| m | (1 << p.index())))
    }

    pub fn contains(self, p: Player) -> bool {
        self.0 & (1 << p.index()) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn minus(self, other: PlayerSet) -> PlayerSet {
        PlayerSet(self.0 & !other.0)
    }

    /// Lowest-numbered member.
    pub fn min(self) -> Option<Player> {
        Player::BOTH.into_iter().find(|&p| self.contains(p))
    }

    pub fn members(self) -> Vec<Player> {
        Player::BOTH.into_iter().filter(|&p| self.contains(p)).collect()
    }
}

/// Separable protocol: the share each player pays on an edge depends only on
/// the edge and the set of players using it.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SeparableProtocol {
    rules: BTreeMap<(EdgeId, PlayerSet), [Rational; 2]>,
}

impl SeparableProtocol {
    pub fn share(&self, e: EdgeId, users: PlayerSet, p: Player) -> Rational {
        self.rules
            .get(&(e, users))
            .map(|s| s[p.index()].clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn set(&mut self, e: EdgeId, users: PlayerSet, shares: [Rational; 2]) {
        self.rules.insert((e, users), shares);
    }

    pub fn rules(&self) -> impl Iterator<Item = (EdgeId, PlayerSet, &[Rational; 2])> {
        self.rules.iter().map(|(&(e, s), v)| (e, s, v))
    }

    /// Each nonempty user set pays exactly c(e), and only its members pay.
    pub fn is_budget_balanced(&self, inst: &Instance) -> bool {
        inst.graph().edge_ids().all(|e| {
            PlayerSet::ALL.into_iter().filter(|s| !s.is_empty()).all(|s| {
                let row = [self.share(e, s, Player::One), self.share(e, s, Player::Two)];
                let outsiders_pay = Player::BOTH.into_iter().any(|p| !s.contains(p) && !row[p.index()].is_zero());
                !outsiders_pay && row.iter().all(|v| !v.is_negative()) && &row[0] + &row[1] == *inst.cost(e)
            })
        })
    }

    /// What player `p` pays on profile `(q1, q2)`.
    pub fn player_cost(&self, p: Player, q1: &Path, q2: &Path) -> Rational {
        let own = if p == Player::One { q1 } else { q2 };
        own.edges.iter().fold(Rational::zero(), |acc, &e| {
            let mut users = Vec::new();
            if q1.contains_edge(e) {
                users.push(Player::One);
            }
            if q2.contains_edge(e) {
                users.push(Player::Two);
            }
            acc + self.share(e, PlayerSet::of(&users), p)
        })
    }

    pub fn to_records(&self, inst: &Instance) -> Vec<ProtocolRecord> {
        self.rules()
            .filter(|(_, s, _)| !s.is_empty())
            .map(|(e, s, v)| ProtocolRecord {
                edge: inst.graph().edge_name(e).to_string(),
                users: s.members(),
                player1: v[0].clone(),
                player2: v[1].clone(),
            })
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ProtocolRecord {
    pub edge: String,
    pub users: Vec<Player>,
    #[serde(with = "rational")]
    pub player1: Rational,
    #[serde(with = "rational")]
    pub player2: Rational,
}

/// The four-case protocol: on the forest's own user set each player pays its
/// share; a set containing a newcomer charges the lowest newcomer c(e); a
/// proper nonempty subset charges its lowest member c(e).
pub fn emit_protocol(inst: &Instance, f: &SteinerForest, shares: &CostShares) -> Result<SeparableProtocol> {
    for &e in &f.edges {
        if shares.edge_total(e) != *inst.cost(e) {
            return Err(Error::NotBudgetBalanced(inst.graph().edge_name(e).to_string()));
        }
    }
    let mut protocol = SeparableProtocol::default();
    for e in inst.graph().edge_ids() {
        let forest_users = PlayerSet::of(&f.users(e));
        for s in PlayerSet::ALL {
            let mut row = [Rational::zero(), Rational::zero()];
            if s == forest_users {
                for p in s.members() {
                    row[p.index()] = shares.get(p, e);
                }
            } else if let Some(p) = s.minus(forest_users).min() {
                row[p.index()] = inst.cost(e).clone();
            } else if let Some(p) = s.min() {
                row[p.index()] = inst.cost(e).clone();
            }
            protocol.set(e, s, row);
        }
    }
    Ok(protocol)
}

/// Equal split among the users of each edge.
pub fn shapley_protocol(inst: &Instance) -> SeparableProtocol {
    let mut protocol = SeparableProtocol::default();
    for e in inst.graph().edge_ids() {
        for s in PlayerSet::ALL {
            let mut row = [Rational::zero(), Rational::zero()];
            if !s.is_empty() {
                let each = inst.cost(e) / rational::int(s.len() as i64);
                for p in s.members() {
                    row[p.index()] = each.clone();
                }
            }
            protocol.set(e, s, row);
        }
    }
    protocol
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImprovingDeviation {
    pub player: Player,
    pub path: Path,
    pub current_cost: Rational,
    pub deviation_cost: Rational,
}

/// First strictly improving unilateral deviation from `(q1, q2)`, players
/// and alternatives in catalog order.
pub fn find_improving_deviation(
    catalog: &PathCatalog,
    protocol: &SeparableProtocol,
    q1: &Path,
    q2: &Path,
) -> Option<ImprovingDeviation> {
    for p in Player::BOTH {
        let current = protocol.player_cost(p, q1, q2);
        for alt in catalog.paths(p) {
            let cost = match p {
                Player::One => protocol.player_cost(p, alt, q2),
                Player::Two => protocol.player_cost(p, q1, alt),
            };
            if cost < current {
                return Some(ImprovingDeviation {
                    player: p,
                    path: alt.clone(),
                    current_cost: current,
                    deviation_cost: cost,
                });
            }
        }
    }
    None
}

/// True iff the forest's strategy profile is a pure Nash equilibrium under
/// the protocol.
pub fn verify_pne(inst: &Instance, f: &SteinerForest, protocol: &SeparableProtocol, cap: usize) -> Result<bool> {
    let catalog = PathCatalog::new(inst, cap)?;
    Ok(find_improving_deviation(&catalog, protocol, &f.p1, &f.p2).is_none())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equilibrium {
    pub p1: Path,
    pub p2: Path,
    /// Cost of the edges used by at least one player.
    pub social_cost: Rational,
}

/// All pure Nash equilibria over arbitrary pairs of simple terminal paths.
pub fn enumerate_pne(inst: &Instance, protocol: &SeparableProtocol, cap: usize) -> Result<Vec<Equilibrium>> {
    let catalog = PathCatalog::new(inst, cap)?;
    let mut out = Vec::new();
    for q1 in catalog.paths(Player::One) {
        for q2 in catalog.paths(Player::Two) {
            if find_improving_deviation(&catalog, protocol, q1, q2).is_none() {
                let mut used: Vec<EdgeId> = q1.edges.iter().chain(&q2.edges).copied().collect();
                used.sort();
                used.dedup();
                out.push(Equilibrium {
                    p1: q1.clone(),
                    p2: q2.clone(),
                    social_cost: inst.total_cost(&used),
                });
            }
        }
    }
    Ok(out)
}
