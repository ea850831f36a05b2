//! Capacitated coverage as maximum flow.
//!
//! The network has four layers: the source, one node per required item, one
//! node per candidate user and the sink. `s -> item` carries the item's unit
//! count, `item -> user` exists when the user holds the skill and also
//! carries the unit count, `user -> t` carries the user's capacity. A
//! candidate set covers the task exactly when the maximum flow saturates
//! every source arc, and an integral maximum flow read off the middle layer
//! is a valid assignment.

use std::collections::VecDeque;

use crate::graph::{ItemId, User, UserId};
use crate::task::{Assignment, Task};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlowNode {
    Source,
    Sink,
    Item(ItemId),
    User(UserId),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FlowArc {
    pub from: usize,
    pub to: usize,
    pub cap: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowNetwork {
    pub nodes: Vec<FlowNode>,
    /// Source arcs first (ascending item), then item-user arcs (ascending
    /// item, then ascending user), then sink arcs (ascending user).
    pub arcs: Vec<FlowArc>,
}

impl FlowNetwork {
    pub const SOURCE: usize = 0;
    pub const SINK: usize = 1;

    pub fn node_of(&self, kind: FlowNode) -> Option<usize> {
        self.nodes.iter().position(|&n| n == kind)
    }

    /// Capacity of the arc between two nodes, if present.
    pub fn capacity(&self, from: FlowNode, to: FlowNode) -> Option<u64> {
        let (f, t) = (self.node_of(from)?, self.node_of(to)?);
        self.arcs.iter().find(|a| a.from == f && a.to == t).map(|a| a.cap)
    }

    pub fn in_degree(&self, node: FlowNode) -> usize {
        match self.node_of(node) {
            Some(idx) => self.arcs.iter().filter(|a| a.to == idx).count(),
            None => 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowResult {
    pub value: u64,
    /// Flow on each arc, aligned with [`FlowNetwork::arcs`].
    pub arc_flows: Vec<u64>,
}

fn sorted_candidates(candidates: &[UserId], users: &[User]) -> Vec<UserId> {
    let mut c: Vec<UserId> = candidates.iter().copied().filter(|u| u.index() < users.len()).collect();
    c.sort_unstable();
    c.dedup();
    c
}

pub fn build_flow_network(task: &Task, candidates: &[UserId], users: &[User]) -> FlowNetwork {
    let candidates = sorted_candidates(candidates, users);
    let k = task.k();
    let mut nodes = vec![FlowNode::Source, FlowNode::Sink];
    nodes.extend(task.requirements().iter().map(|&(i, _)| FlowNode::Item(i)));
    nodes.extend(candidates.iter().map(|&u| FlowNode::User(u)));
    let item_node = |j: usize| 2 + j;
    let user_node = |j: usize| 2 + k + j;

    let mut arcs = Vec::new();
    for (j, &(_, units)) in task.requirements().iter().enumerate() {
        arcs.push(FlowArc {
            from: FlowNetwork::SOURCE,
            to: item_node(j),
            cap: u64::from(units),
        });
    }
    for (j, &(item, units)) in task.requirements().iter().enumerate() {
        for (c, &u) in candidates.iter().enumerate() {
            if users[u.index()].has_skill(item) {
                arcs.push(FlowArc {
                    from: item_node(j),
                    to: user_node(c),
                    cap: u64::from(units),
                });
            }
        }
    }
    for (c, &u) in candidates.iter().enumerate() {
        arcs.push(FlowArc {
            from: user_node(c),
            to: FlowNetwork::SINK,
            cap: u64::from(users[u.index()].capacity),
        });
    }
    FlowNetwork { nodes, arcs }
}

struct Residual {
    to: usize,
    cap: u64,
    rev: usize,
}

/// Dinic's algorithm. Arc order is fixed by the network, so the returned
/// flow is deterministic.
pub fn max_flow(network: &FlowNetwork) -> FlowResult {
    let n = network.nodes.len();
    let mut graph: Vec<Vec<Residual>> = (0..n).map(|_| Vec::new()).collect();
    let mut handles = Vec::with_capacity(network.arcs.len());
    for arc in &network.arcs {
        let fwd = graph[arc.from].len();
        let bwd = graph[arc.to].len() + usize::from(arc.from == arc.to);
        graph[arc.from].push(Residual {
            to: arc.to,
            cap: arc.cap,
            rev: bwd,
        });
        graph[arc.to].push(Residual {
            to: arc.from,
            cap: 0,
            rev: fwd,
        });
        handles.push((arc.from, fwd));
    }

    let (s, t) = (FlowNetwork::SOURCE, FlowNetwork::SINK);
    let mut value = 0u64;
    if n >= 2 {
        let mut level = vec![usize::MAX; n];
        let mut next = vec![0usize; n];
        loop {
            level.fill(usize::MAX);
            level[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for e in &graph[v] {
                    if e.cap > 0 && level[e.to] == usize::MAX {
                        level[e.to] = level[v] + 1;
                        queue.push_back(e.to);
                    }
                }
            }
            if level[t] == usize::MAX {
                break;
            }
            next.fill(0);
            loop {
                let pushed = augment(&mut graph, &level, &mut next, s, t, u64::MAX);
                if pushed == 0 {
                    break;
                }
                value += pushed;
            }
        }
    }

    let arc_flows = network
        .arcs
        .iter()
        .zip(&handles)
        .map(|(arc, &(v, idx))| arc.cap - graph[v][idx].cap)
        .collect();
    FlowResult { value, arc_flows }
}

fn augment(graph: &mut [Vec<Residual>], level: &[usize], next: &mut [usize], v: usize, t: usize, limit: u64) -> u64 {
    if v == t {
        return limit;
    }
    while next[v] < graph[v].len() {
        let i = next[v];
        let (to, cap) = (graph[v][i].to, graph[v][i].cap);
        if cap > 0 && level[to] == level[v] + 1 {
            let pushed = augment(graph, level, next, to, t, limit.min(cap));
            if pushed > 0 {
                graph[v][i].cap -= pushed;
                let rev = graph[v][i].rev;
                graph[to][rev].cap += pushed;
                return pushed;
            }
        }
        next[v] += 1;
    }
    0
}

fn extract_assignment(network: &FlowNetwork, flow: &FlowResult) -> Assignment {
    let mut assignment = Assignment::new();
    for (arc, &f) in network.arcs.iter().zip(&flow.arc_flows) {
        if let (FlowNode::Item(item), FlowNode::User(user)) = (network.nodes[arc.from], network.nodes[arc.to]) {
            assignment.add(item, user, f as u32);
        }
    }
    assignment
}

/// Some required item has no qualified candidate at all.
fn has_orphan_item(task: &Task, candidates: &[UserId], users: &[User]) -> bool {
    task.requirements().iter().any(|&(item, _)| {
        !candidates
            .iter()
            .any(|u| users.get(u.index()).is_some_and(|user| user.has_skill(item)))
    })
}

/// Whether `candidates` can cover the task; on success also returns the
/// assignment read from an integral maximum flow.
pub fn is_feasible(task: &Task, candidates: &[UserId], users: &[User]) -> (bool, Option<Assignment>) {
    if task.is_empty() {
        return (true, Some(Assignment::new()));
    }
    if has_orphan_item(task, candidates, users) {
        return (false, None);
    }
    let network = build_flow_network(task, candidates, users);
    let flow = max_flow(&network);
    if flow.value == task.total_units() {
        (true, Some(extract_assignment(&network, &flow)))
    } else {
        (false, None)
    }
}

/// Largest number of task units the candidates can absorb together.
pub fn coverage(task: &Task, candidates: &[UserId], users: &[User]) -> u64 {
    if task.is_empty() {
        return 0;
    }
    max_flow(&build_flow_network(task, candidates, users)).value
}

/// Units of the task the candidates cannot cover; zero iff feasible.
pub fn min_infeasibility_certificate(task: &Task, candidates: &[UserId], users: &[User]) -> u64 {
    task.total_units() - coverage(task, candidates, users)
}

/// Per-item shortfall under a maximum flow over `candidates`, in task order.
pub fn item_deficits(task: &Task, candidates: &[UserId], users: &[User]) -> Vec<(ItemId, u64)> {
    let network = build_flow_network(task, candidates, users);
    let flow = max_flow(&network);
    task.requirements()
        .iter()
        .enumerate()
        .map(|(j, &(item, units))| (item, u64::from(units) - flow.arc_flows[j]))
        .collect()
}
