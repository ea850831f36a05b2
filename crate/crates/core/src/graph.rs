//! Social network representation and the shortest-path metric shared by
//! every cost model and solver.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct UserId(pub u32);

impl UserId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for UserId {
    fn from(i: usize) -> Self {
        UserId(i as u32)
    }
}

impl fmt::Display for UserId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A skill, or equivalently a kind of work item a task may require.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ItemId(pub u32);

impl fmt::Display for ItemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct User {
    pub id: UserId,
    /// Sorted skill set.
    pub skills: Vec<ItemId>,
    /// Maximum total units this user may be assigned.
    pub capacity: u32,
    pub price: f64,
}

impl User {
    pub fn new(id: impl Into<UserId>, skills: impl IntoIterator<Item = ItemId>, capacity: u32) -> Self {
        let mut skills: Vec<ItemId> = skills.into_iter().collect();
        skills.sort_unstable();
        User {
            id: id.into(),
            skills,
            capacity,
            price: 0.0,
        }
    }

    pub fn with_price(mut self, price: f64) -> Self {
        self.price = price;
        self
    }

    pub fn has_skill(&self, item: ItemId) -> bool {
        self.skills.binary_search(&item).is_ok()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub a: UserId,
    pub b: UserId,
    pub weight: f64,
}

/// Undirected weighted graph of users. Immutable once built.
#[derive(Clone, Debug, PartialEq)]
pub struct SocialNetwork {
    users: Vec<User>,
    edges: Vec<Edge>,
    price_transformed: bool,
}

impl SocialNetwork {
    /// Builds a network without checking invariants; see [`validate`].
    pub fn new(users: Vec<User>, edges: Vec<Edge>) -> Self {
        SocialNetwork {
            users,
            edges,
            price_transformed: false,
        }
    }

    /// Builds a network and rejects it if [`validate`] reports anything.
    pub fn try_new(users: Vec<User>, edges: Vec<Edge>) -> Result<Self> {
        let net = Self::new(users, edges);
        let report = validate(&net);
        if report.is_valid() {
            Ok(net)
        } else {
            Err(Error::InvalidNetwork(report.to_string()))
        }
    }

    pub(crate) fn mark_price_transformed(mut self) -> Self {
        self.price_transformed = true;
        self
    }

    pub fn is_price_transformed(&self) -> bool {
        self.price_transformed
    }

    pub fn users(&self) -> &[User] {
        &self.users
    }

    pub fn user(&self, id: UserId) -> &User {
        &self.users[id.index()]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.users.len()
    }

    pub fn is_empty(&self) -> bool {
        self.users.is_empty()
    }

    pub fn user_ids(&self) -> impl Iterator<Item = UserId> + '_ {
        (0..self.users.len()).map(UserId::from)
    }

    pub fn check_user(&self, id: UserId) -> Result<()> {
        if id.index() < self.users.len() {
            Ok(())
        } else {
            Err(Error::InvalidUser(id))
        }
    }

    /// Adjacency lists in edge insertion order. Edges with invalid endpoints
    /// are skipped.
    pub fn adjacency(&self) -> Vec<Vec<(usize, f64)>> {
        let n = self.users.len();
        let mut adj = vec![Vec::new(); n];
        for e in &self.edges {
            let (a, b) = (e.a.index(), e.b.index());
            if a < n && b < n && a != b {
                adj[a].push((b, e.weight));
                adj[b].push((a, e.weight));
            }
        }
        adj
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    SelfLoop { edge: usize, user: UserId },
    DuplicateEdge { first: usize, second: usize },
    NegativeWeight { edge: usize, weight: f64 },
    BadEndpoint { edge: usize, user: UserId },
    MisnumberedUser { position: usize, id: UserId },
    DuplicateSkill { user: UserId, item: ItemId },
    NegativePrice { user: UserId, price: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SelfLoop { edge, user } => write!(f, "edge #{edge}: self-loop on user {user}"),
            Violation::DuplicateEdge { first, second } => {
                write!(f, "edge #{second} duplicates edge #{first}")
            }
            Violation::NegativeWeight { edge, weight } => {
                write!(f, "edge #{edge}: weight {weight} is negative or not a number")
            }
            Violation::BadEndpoint { edge, user } => {
                write!(f, "edge #{edge}: endpoint {user} does not exist")
            }
            Violation::MisnumberedUser { position, id } => {
                write!(f, "user at position {position} has id {id}")
            }
            Violation::DuplicateSkill { user, item } => {
                write!(f, "user {user} lists item {item} twice")
            }
            Violation::NegativePrice { user, price } => {
                write!(f, "user {user}: price {price} is negative or not a number")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Lists every broken network invariant. An empty report means the network
/// is a simple undirected graph with non-negative weights over users
/// numbered `0..n`.
pub fn validate(network: &SocialNetwork) -> ValidationReport {
    let mut violations = Vec::new();
    let n = network.users.len();

    for (position, user) in network.users.iter().enumerate() {
        if user.id.index() != position {
            violations.push(Violation::MisnumberedUser { position, id: user.id });
        }
        let mut seen = HashSet::new();
        for &item in &user.skills {
            if !seen.insert(item) {
                violations.push(Violation::DuplicateSkill { user: user.id, item });
            }
        }
        if !user.price.is_finite() || user.price < 0.0 {
            violations.push(Violation::NegativePrice {
                user: user.id,
                price: user.price,
            });
        }
    }

    let mut pairs = std::collections::HashMap::new();
    for (idx, e) in network.edges.iter().enumerate() {
        let mut bad = false;
        for id in [e.a, e.b] {
            if id.index() >= n {
                violations.push(Violation::BadEndpoint { edge: idx, user: id });
                bad = true;
            }
        }
        if e.a == e.b {
            violations.push(Violation::SelfLoop { edge: idx, user: e.a });
            bad = true;
        }
        if !e.weight.is_finite() || e.weight < 0.0 {
            violations.push(Violation::NegativeWeight {
                edge: idx,
                weight: e.weight,
            });
        }
        if bad {
            continue;
        }
        let key = (e.a.min(e.b), e.a.max(e.b));
        if let Some(&first) = pairs.get(&key) {
            violations.push(Violation::DuplicateEdge { first, second: idx });
        } else {
            pairs.insert(key, idx);
        }
    }

    ValidationReport { violations }
}

#[derive(Clone, Copy, PartialEq)]
struct HeapEntry {
    dist: f64,
    node: usize,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on (dist, node)
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Dijkstra from `source`. Returns distances and shortest-path predecessors.
pub(crate) fn dijkstra(adj: &[Vec<(usize, f64)>], source: usize) -> (Vec<f64>, Vec<Option<usize>>) {
    let n = adj.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut pred = vec![None; n];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(HeapEntry {
        dist: 0.0,
        node: source,
    });
    while let Some(HeapEntry { dist: d, node }) = heap.pop() {
        if d > dist[node] {
            continue;
        }
        for &(next, w) in &adj[node] {
            let cand = d + w;
            if cand < dist[next] {
                dist[next] = cand;
                pred[next] = Some(node);
                heap.push(HeapEntry { dist: cand, node: next });
            }
        }
    }
    (dist, pred)
}

/// Shortest-path distances under edge weights, `+inf` between components.
///
/// Rows are stored per source; a lookup `(u, v)` is answered from the row of
/// `u`, or from the row of `v` by symmetry.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    rows: Vec<Option<Vec<f64>>>,
}

impl DistanceMatrix {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn has_row(&self, u: UserId) -> bool {
        self.rows.get(u.index()).is_some_and(Option::is_some)
    }

    pub fn row(&self, u: UserId) -> Option<&[f64]> {
        self.rows.get(u.index()).and_then(|r| r.as_deref())
    }

    /// Distance between `u` and `v`.
    ///
    /// Panics if neither endpoint was a source of this matrix.
    pub fn get(&self, u: UserId, v: UserId) -> f64 {
        self.try_get(u, v)
            .expect("distance requested between two non-source users")
    }

    pub fn try_get(&self, u: UserId, v: UserId) -> Option<f64> {
        if let Some(row) = self.row(u) {
            return row.get(v.index()).copied();
        }
        self.row(v).and_then(|row| row.get(u.index()).copied())
    }
}

/// Computes cheapest-path distances from each source (all users when
/// `sources` is `None`).
pub fn shortest_path_distances(network: &SocialNetwork, sources: Option<&[UserId]>) -> DistanceMatrix {
    let n = network.len();
    let adj = network.adjacency();
    let mut rows = vec![None; n];
    let mut run = |s: usize| {
        if s < n && rows[s].is_none() {
            rows[s] = Some(dijkstra(&adj, s).0);
        }
    };
    match sources {
        Some(list) => list.iter().for_each(|s| run(s.index())),
        None => (0..n).for_each(&mut run),
    }
    DistanceMatrix { n, rows }
}

/// One cheapest path from `from` to `to` (inclusive), or `None` when they
/// are disconnected.
pub fn shortest_path(network: &SocialNetwork, from: UserId, to: UserId) -> Option<Vec<UserId>> {
    let adj = network.adjacency();
    let (dist, pred) = dijkstra(&adj, from.index());
    if !dist.get(to.index())?.is_finite() {
        return None;
    }
    let mut path = vec![to];
    let mut cur = to.index();
    while let Some(p) = pred[cur] {
        path.push(UserId::from(p));
        cur = p;
    }
    path.reverse();
    Some(path)
}

/// Pairwise distances between team members, measured in the full graph.
#[derive(Clone, Debug, PartialEq)]
pub struct TeamDistances {
    pub team: Vec<UserId>,
    /// Row-major `team.len() x team.len()` table.
    pub table: Vec<f64>,
}

impl TeamDistances {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.table[i * self.team.len() + j]
    }
}

pub fn induced_distance(network: &SocialNetwork, team: &[UserId]) -> Result<TeamDistances> {
    for &u in team {
        network.check_user(u)?;
    }
    let dist = shortest_path_distances(network, Some(team));
    Ok(restrict(&dist, team))
}

pub(crate) fn restrict(dist: &DistanceMatrix, team: &[UserId]) -> TeamDistances {
    let k = team.len();
    let mut table = Vec::with_capacity(k * k);
    for &a in team {
        for &b in team {
            table.push(dist.get(a, b));
        }
    }
    TeamDistances {
        team: team.to_vec(),
        table,
    }
}
