//! Capacity-blind comparison strategy.
//!
//! Rarest-first greedy in the uncapacitated style: every holder of the
//! rarest item is tried as a seed, each remaining item not yet held by the
//! team is covered by the holder nearest to the team, and the seed giving
//! the smallest diameter wins. Only then are capacities looked at: while the
//! flow check reports a shortfall, the nearest unused holder of the most
//! deficient item joins.

use crate::feasibility::{coverage, is_feasible, item_deficits, min_infeasibility_certificate};
use crate::graph::{shortest_path_distances, DistanceMatrix, ItemId, SocialNetwork, UserId};
use crate::task::{diameter_from, steiner_tree, CostKind, Outcome, Solution, SolveStats, Stopwatch, Task};

pub const SOLVER_NAME: &str = "baseline";

fn nearest(dist: &DistanceMatrix, team: &[UserId], pool: impl Iterator<Item = UserId>) -> Option<UserId> {
    pool.map(|u| {
        let d = team.iter().map(|&m| dist.get(u, m)).fold(f64::INFINITY, f64::min);
        (d, u)
    })
    .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
    .map(|(_, u)| u)
}

fn holders(network: &SocialNetwork, item: ItemId) -> impl Iterator<Item = UserId> + '_ {
    network.user_ids().filter(move |&u| network.user(u).has_skill(item))
}

/// Uncapacitated selection from one seed.
fn grow(network: &SocialNetwork, dist: &DistanceMatrix, order: &[ItemId], seed: UserId) -> Vec<UserId> {
    let mut team = vec![seed];
    for &item in order {
        if team.iter().any(|&u| network.user(u).has_skill(item)) {
            continue;
        }
        if let Some(u) = nearest(dist, &team, holders(network, item)) {
            team.push(u);
        }
    }
    team
}

/// The comparison strategy; the returned cost is measured under `kind`.
pub fn baseline_uncapacitated(network: &SocialNetwork, task: &Task, kind: CostKind) -> Outcome {
    let clock = Stopwatch::start();
    if task.is_empty() {
        return Outcome::Solved(Solution::empty(SOLVER_NAME));
    }
    let users = network.users();
    let all: Vec<UserId> = network.user_ids().collect();
    let deficit = min_infeasibility_certificate(task, &all, users);
    let mut flow_calls = 1;
    if deficit > 0 {
        return Outcome::Infeasible { deficit, flow_calls };
    }

    let dist = shortest_path_distances(network, None);
    let mut order: Vec<(usize, ItemId)> = task
        .requirements()
        .iter()
        .map(|&(item, _)| (holders(network, item).count(), item))
        .collect();
    order.sort_unstable();
    let order: Vec<ItemId> = order.into_iter().map(|(_, item)| item).collect();

    let mut team = holders(network, order[0])
        .map(|seed| {
            let team = grow(network, &dist, &order[1..], seed);
            (diameter_from(&dist, &team), team)
        })
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .map(|(_, team)| team)
        .expect("rarest item has a holder");

    // Capacity repair.
    loop {
        flow_calls += 1;
        let deficits = item_deficits(task, &team, users);
        if deficits.iter().all(|&(_, d)| d == 0) {
            break;
        }
        let mut short: Vec<(u64, ItemId)> = deficits
            .iter()
            .filter(|&&(_, d)| d > 0)
            .map(|&(item, d)| (d, item))
            .collect();
        short.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let fresh = |u: &UserId| !team.contains(u) && users[u.index()].capacity > 0;
        let mut pick = short
            .iter()
            .find_map(|&(_, item)| nearest(&dist, &team, holders(network, item).filter(fresh)));
        if pick.is_none() {
            // The shortfall sits on items whose holders are all in the team;
            // take the nearest outsider that raises coverage.
            let covered = coverage(task, &team, users);
            let mut gainers = Vec::new();
            for u in network.user_ids().filter(fresh) {
                let mut trial = team.clone();
                trial.push(u);
                flow_calls += 1;
                if coverage(task, &trial, users) > covered {
                    gainers.push(u);
                }
            }
            pick = nearest(&dist, &team, gainers.into_iter());
        }
        match pick {
            Some(u) => team.push(u),
            None => {
                return Outcome::Infeasible {
                    deficit: short.iter().map(|&(d, _)| d).sum(),
                    flow_calls,
                }
            }
        }
    }

    flow_calls += 1;
    let (_, assignment) = is_feasible(task, &team, users);
    let assignment = assignment.expect("repaired team covers the task");
    let members = assignment.users();
    let (cost, connectors) = match kind {
        CostKind::Diameter => (diameter_from(&dist, &members), Vec::new()),
        CostKind::Steiner => {
            let tree = steiner_tree(network, &members).expect("valid non-empty team");
            (tree.cost, tree.connectors)
        }
    };
    Outcome::Solved(Solution {
        team: members,
        connectors,
        assignment,
        cost,
        solver: SOLVER_NAME.to_string(),
        stats: SolveStats {
            flow_calls,
            elapsed: clock.elapsed(),
        },
        trace: Vec::new(),
        priced: None,
    })
}
