//! Tasks, assignments, solutions and the collaboration cost functions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{shortest_path, shortest_path_distances, DistanceMatrix, ItemId, SocialNetwork, User, UserId};

/// Required units per item. Items are distinct and kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Task {
    requirements: Vec<(ItemId, u32)>,
}

impl Task {
    pub fn new(requirements: impl IntoIterator<Item = (ItemId, u32)>) -> Result<Self> {
        let mut requirements: Vec<(ItemId, u32)> = requirements.into_iter().collect();
        requirements.sort_unstable_by_key(|&(item, _)| item);
        for w in requirements.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidTask(format!("item {} listed twice", w[0].0)));
            }
        }
        if let Some(&(item, _)) = requirements.iter().find(|&&(_, n)| n == 0) {
            return Err(Error::InvalidTask(format!("item {item} requires zero units")));
        }
        Ok(Task { requirements })
    }

    /// Unit-demand task: one unit of each listed item.
    pub fn unit(items: impl IntoIterator<Item = ItemId>) -> Result<Self> {
        Self::new(items.into_iter().map(|i| (i, 1)))
    }

    pub fn requirements(&self) -> &[(ItemId, u32)] {
        &self.requirements
    }

    pub fn units(&self, item: ItemId) -> u32 {
        self.requirements
            .binary_search_by_key(&item, |&(i, _)| i)
            .map(|pos| self.requirements[pos].1)
            .unwrap_or(0)
    }

    pub fn total_units(&self) -> u64 {
        self.requirements.iter().map(|&(_, n)| u64::from(n)).sum()
    }

    /// Number of distinct items.
    pub fn k(&self) -> usize {
        self.requirements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.requirements.is_empty()
    }

    pub fn is_unit_demand(&self) -> bool {
        self.requirements.iter().all(|&(_, n)| n == 1)
    }
}

/// Units of each item placed on each user.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment {
    alloc: BTreeMap<(ItemId, UserId), u32>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `units` of `item` to `user`. Zero is ignored.
    pub fn add(&mut self, item: ItemId, user: UserId, units: u32) {
        if units > 0 {
            *self.alloc.entry((item, user)).or_insert(0) += units;
        }
    }

    pub fn get(&self, item: ItemId, user: UserId) -> u32 {
        self.alloc.get(&(item, user)).copied().unwrap_or(0)
    }

    /// `(item, user, units)` in ascending `(item, user)` order.
    pub fn entries(&self) -> impl Iterator<Item = (ItemId, UserId, u32)> + '_ {
        self.alloc.iter().map(|(&(i, u), &n)| (i, u, n))
    }

    pub fn load(&self, user: UserId) -> u64 {
        self.entries()
            .filter(|&(_, u, _)| u == user)
            .map(|(_, _, n)| u64::from(n))
            .sum()
    }

    pub fn coverage(&self, item: ItemId) -> u64 {
        self.entries()
            .filter(|&(i, _, _)| i == item)
            .map(|(_, _, n)| u64::from(n))
            .sum()
    }

    /// Users carrying at least one unit, ascending.
    pub fn users(&self) -> Vec<UserId> {
        let set: BTreeSet<UserId> = self.alloc.keys().map(|&(_, u)| u).collect();
        set.into_iter().collect()
    }

    pub fn is_empty(&self) -> bool {
        self.alloc.is_empty()
    }

    pub fn map_users(&self, f: impl Fn(UserId) -> UserId) -> Assignment {
        let mut out = Assignment::new();
        for (i, u, n) in self.entries() {
            out.add(i, f(u), n);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AssignmentViolation {
    UnknownUser { user: UserId },
    MissingSkill { item: ItemId, user: UserId },
    OverCapacity { user: UserId, load: u64, capacity: u32 },
    Coverage { item: ItemId, required: u32, assigned: u64 },
}

impl fmt::Display for AssignmentViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::UnknownUser { user } => write!(f, "user {user} does not exist"),
            Self::MissingSkill { item, user } => write!(f, "user {user} lacks item {item}"),
            Self::OverCapacity { user, load, capacity } => {
                write!(f, "user {user} carries {load} units, capacity {capacity}")
            }
            Self::Coverage {
                item,
                required,
                assigned,
            } => {
                write!(f, "item {item}: {assigned} units assigned, {required} required")
            }
        }
    }
}

/// Checks skills, capacities and exact coverage. Empty result means valid.
pub fn check_assignment(task: &Task, users: &[User], assignment: &Assignment) -> Vec<AssignmentViolation> {
    let mut out = Vec::new();
    let mut loads: BTreeMap<UserId, u64> = BTreeMap::new();
    let mut covered: BTreeMap<ItemId, u64> = BTreeMap::new();

    for (item, user, units) in assignment.entries() {
        *covered.entry(item).or_default() += u64::from(units);
        let Some(u) = users.get(user.index()) else {
            out.push(AssignmentViolation::UnknownUser { user });
            continue;
        };
        if !u.has_skill(item) {
            out.push(AssignmentViolation::MissingSkill { item, user });
        }
        *loads.entry(user).or_default() += u64::from(units);
    }
    for (&user, &load) in &loads {
        let capacity = users[user.index()].capacity;
        if load > u64::from(capacity) {
            out.push(AssignmentViolation::OverCapacity { user, load, capacity });
        }
    }
    for &(item, required) in task.requirements() {
        let assigned = covered.get(&item).copied().unwrap_or(0);
        if assigned != u64::from(required) {
            out.push(AssignmentViolation::Coverage {
                item,
                required,
                assigned,
            });
        }
    }
    for (&item, &assigned) in &covered {
        if task.units(item) == 0 {
            out.push(AssignmentViolation::Coverage {
                item,
                required: 0,
                assigned,
            });
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CostKind {
    Diameter,
    Steiner,
}

impl CostKind {
    pub fn name(self) -> &'static str {
        match self {
            CostKind::Diameter => "diameter",
            CostKind::Steiner => "steiner",
        }
    }
}

impl std::str::FromStr for CostKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "diameter" => Ok(CostKind::Diameter),
            "steiner" => Ok(CostKind::Steiner),
            other => Err(format!("unknown cost model `{other}`")),
        }
    }
}

/// Weights of the price term and the collaboration term.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pricing {
    pub alpha: f64,
    pub beta: f64,
}

impl Pricing {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite() {
            Ok(Pricing { alpha, beta })
        } else {
            Err(Error::InvalidPricing { alpha, beta })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CostModel {
    pub kind: CostKind,
    pub pricing: Option<Pricing>,
}

impl CostModel {
    pub fn plain(kind: CostKind) -> Self {
        CostModel { kind, pricing: None }
    }

    pub fn priced(kind: CostKind, pricing: Pricing) -> Self {
        CostModel {
            kind,
            pricing: Some(pricing),
        }
    }
}

pub(crate) fn diameter_from(dist: &DistanceMatrix, team: &[UserId]) -> f64 {
    let mut worst = 0.0_f64;
    for (i, &a) in team.iter().enumerate() {
        for &b in &team[i + 1..] {
            let d = dist.get(a, b);
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

/// Largest full-graph distance between two team members.
pub fn diameter_cost(network: &SocialNetwork, team: &[UserId]) -> Result<f64> {
    if team.is_empty() {
        return Err(Error::EmptyTeam);
    }
    for &u in team {
        network.check_user(u)?;
    }
    let dist = shortest_path_distances(network, Some(team));
    Ok(diameter_from(&dist, team))
}

/// Minimum spanning tree of the metric closure over `team` (Prim, ties to
/// the lower index). Returns the cost and the tree as pairs of team indices.
pub(crate) fn closure_mst(dist: &DistanceMatrix, team: &[UserId]) -> (f64, Vec<(usize, usize)>) {
    let k = team.len();
    if k <= 1 {
        return (0.0, Vec::new());
    }
    let mut in_tree = vec![false; k];
    let mut best = vec![f64::INFINITY; k];
    let mut parent = vec![0usize; k];
    let mut total = 0.0;
    let mut tree = Vec::with_capacity(k - 1);
    in_tree[0] = true;
    for j in 1..k {
        best[j] = dist.get(team[0], team[j]);
    }
    for _ in 1..k {
        let mut pick = None;
        for j in 0..k {
            if in_tree[j] {
                continue;
            }
            match pick {
                None => pick = Some(j),
                Some(p) if best[j] < best[p] => pick = Some(j),
                _ => {}
            }
        }
        let j = pick.expect("a vertex remains outside the tree");
        in_tree[j] = true;
        total += best[j];
        tree.push((parent[j], j));
        for m in 0..k {
            if !in_tree[m] {
                let d = dist.get(team[j], team[m]);
                if d < best[m] {
                    best[m] = d;
                    parent[m] = j;
                }
            }
        }
    }
    (total, tree)
}

/// Metric-closure MST weight over the team: the standard 2-approximate
/// surrogate for the cheapest Steiner tree spanning it.
pub fn steiner_cost(network: &SocialNetwork, team: &[UserId]) -> Result<f64> {
    Ok(steiner_tree(network, team)?.cost)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SteinerTree {
    pub cost: f64,
    /// Closure edges between team members.
    pub edges: Vec<(UserId, UserId)>,
    /// Non-team vertices on the shortest paths realising the closure edges.
    pub connectors: Vec<UserId>,
}

pub fn steiner_tree(network: &SocialNetwork, team: &[UserId]) -> Result<SteinerTree> {
    if team.is_empty() {
        return Err(Error::EmptyTeam);
    }
    for &u in team {
        network.check_user(u)?;
    }
    let dist = shortest_path_distances(network, Some(team));
    let (cost, tree) = closure_mst(&dist, team);
    let edges: Vec<(UserId, UserId)> = tree.iter().map(|&(a, b)| (team[a], team[b])).collect();
    let members: BTreeSet<UserId> = team.iter().copied().collect();
    let mut connectors = BTreeSet::new();
    if cost.is_finite() {
        for &(a, b) in &edges {
            if let Some(path) = shortest_path(network, a, b) {
                connectors.extend(path.into_iter().filter(|u| !members.contains(u)));
            }
        }
    }
    Ok(SteinerTree {
        cost,
        edges,
        connectors: connectors.into_iter().collect(),
    })
}

pub fn collaboration_cost(network: &SocialNetwork, team: &[UserId], kind: CostKind) -> Result<f64> {
    match kind {
        CostKind::Diameter => diameter_cost(network, team),
        CostKind::Steiner => steiner_cost(network, team),
    }
}

/// `alpha * sum(prices) + beta * f(team)`.
pub fn priced_cost(network: &SocialNetwork, team: &[UserId], model: &CostModel) -> Result<f64> {
    let pricing = model.pricing.ok_or(Error::MissingPricing)?;
    let f = collaboration_cost(network, team, model.kind)?;
    let prices: f64 = team.iter().map(|&u| network.user(u).price).sum();
    Ok(pricing.alpha * prices + pricing.beta * f)
}

/// One greedy step of the Steiner solver.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceStep {
    pub user: UserId,
    pub units_gained: u64,
    pub attach_cost: f64,
}

/// Wall-clock timer; reads zero on targets without a monotonic clock.
pub(crate) struct Stopwatch {
    #[cfg(not(target_arch = "wasm32"))]
    start: std::time::Instant,
}

impl Stopwatch {
    pub(crate) fn start() -> Self {
        Stopwatch {
            #[cfg(not(target_arch = "wasm32"))]
            start: std::time::Instant::now(),
        }
    }

    pub(crate) fn elapsed(&self) -> Duration {
        #[cfg(not(target_arch = "wasm32"))]
        {
            self.start.elapsed()
        }
        #[cfg(target_arch = "wasm32")]
        {
            Duration::ZERO
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SolveStats {
    pub flow_calls: u64,
    pub elapsed: Duration,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PricedCosts {
    /// Collaboration cost measured on the transformed graph.
    pub transformed_cost: f64,
    /// `alpha * sum(prices) + beta * f(team)` evaluated on the original graph.
    pub priced_cost: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    /// Users carrying at least one unit, ascending.
    pub team: Vec<UserId>,
    /// Relay users on the Steiner tree; they carry no units and no price.
    pub connectors: Vec<UserId>,
    pub assignment: Assignment,
    /// `+inf` when the team spans several components.
    pub cost: f64,
    pub solver: String,
    pub stats: SolveStats,
    pub trace: Vec<TraceStep>,
    pub priced: Option<PricedCosts>,
}

impl Solution {
    pub fn empty(solver: impl Into<String>) -> Self {
        Solution {
            team: Vec::new(),
            connectors: Vec::new(),
            assignment: Assignment::new(),
            cost: 0.0,
            solver: solver.into(),
            stats: SolveStats::default(),
            trace: Vec::new(),
            priced: None,
        }
    }

    pub fn is_disconnected(&self) -> bool {
        self.cost.is_infinite()
    }
}

/// Solver result: a solution, or the number of units no team can cover.
#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Solved(Solution),
    Infeasible { deficit: u64, flow_calls: u64 },
}

impl Outcome {
    pub fn solution(&self) -> Option<&Solution> {
        match self {
            Outcome::Solved(s) => Some(s),
            Outcome::Infeasible { .. } => None,
        }
    }

    pub fn into_solution(self) -> Option<Solution> {
        match self {
            Outcome::Solved(s) => Some(s),
            Outcome::Infeasible { .. } => None,
        }
    }

    pub fn flow_calls(&self) -> u64 {
        match self {
            Outcome::Solved(s) => s.stats.flow_calls,
            Outcome::Infeasible { flow_calls, .. } => *flow_calls,
        }
    }
}
