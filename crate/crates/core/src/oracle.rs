//! Exhaustive reference solvers for small instances.
//!
//! Everything here is exponential and guarded by hard size limits. The
//! feasibility search deliberately shares no code with the flow-based check
//! so the two can be compared.

use crate::error::{Error, Result};
use crate::feasibility::is_feasible;
use crate::graph::{shortest_path_distances, DistanceMatrix, SocialNetwork, User, UserId};
use crate::task::{closure_mst, diameter_from, Task};

pub const MAX_USERS: usize = 20;
pub const MAX_TERMINALS: usize = 10;
pub const MAX_FEASIBLE_UNITS: u64 = 12;
pub const MAX_FEASIBLE_CANDIDATES: usize = 8;

fn limit(what: &'static str, got: usize, max: usize) -> Result<()> {
    if got > max {
        Err(Error::SizeLimit { what, got, limit: max })
    } else {
        Ok(())
    }
}

/// Tries every placement of every unit on a qualified candidate.
pub fn exact_feasible(task: &Task, candidates: &[UserId], users: &[User]) -> Result<bool> {
    limit("task units", task.total_units() as usize, MAX_FEASIBLE_UNITS as usize)?;
    limit("candidates", candidates.len(), MAX_FEASIBLE_CANDIDATES)?;
    let pool: Vec<&User> = candidates.iter().filter_map(|u| users.get(u.index())).collect();
    // One entry per unit; units of the same item are adjacent.
    let units: Vec<usize> = task
        .requirements()
        .iter()
        .enumerate()
        .flat_map(|(j, &(_, n))| std::iter::repeat_n(j, n as usize))
        .collect();
    let mut remaining: Vec<u32> = pool.iter().map(|u| u.capacity).collect();
    Ok(place(task, &pool, &units, 0, 0, &mut remaining))
}

fn place(task: &Task, pool: &[&User], units: &[usize], pos: usize, floor: usize, remaining: &mut [u32]) -> bool {
    let Some(&req) = units.get(pos) else {
        return true;
    };
    let item = task.requirements()[req].0;
    // Units of one item are interchangeable: place them on non-decreasing
    // candidate positions.
    let start = if pos > 0 && units[pos - 1] == req { floor } else { 0 };
    for c in start..pool.len() {
        if remaining[c] > 0 && pool[c].has_skill(item) {
            remaining[c] -= 1;
            let done = place(task, pool, units, pos + 1, c, remaining);
            remaining[c] += 1;
            if done {
                return true;
            }
        }
    }
    false
}

/// Minimum Steiner tree weight connecting `terminals` in the full graph
/// (Dreyfus-Wagner over shortest-path distances).
pub fn exact_steiner_cost(network: &SocialNetwork, terminals: &[UserId]) -> Result<f64> {
    limit("terminals", terminals.len(), MAX_TERMINALS)?;
    for &t in terminals {
        network.check_user(t)?;
    }
    let dist = shortest_path_distances(network, None);
    Ok(dreyfus_wagner(&dist, network.len(), terminals))
}

pub(crate) fn dreyfus_wagner(dist: &DistanceMatrix, n: usize, terminals: &[UserId]) -> f64 {
    let mut terms = terminals.to_vec();
    terms.sort_unstable();
    terms.dedup();
    if terms.len() <= 1 {
        return 0.0;
    }
    let root = terms.pop().expect("at least two terminals");
    let k = terms.len();
    let full = (1usize << k) - 1;
    let d = |a: usize, b: usize| dist.get(UserId::from(a), UserId::from(b));

    // best[mask][v]: cheapest tree spanning the terminals in `mask` plus v.
    let mut best = vec![vec![f64::INFINITY; n]; full + 1];
    for (i, t) in terms.iter().enumerate() {
        for (v, slot) in best[1 << i].iter_mut().enumerate() {
            *slot = d(t.index(), v);
        }
    }
    let mut merged = vec![f64::INFINITY; n];
    for mask in 1..=full {
        if mask.count_ones() < 2 {
            continue;
        }
        let low = mask & mask.wrapping_neg();
        for u in 0..n {
            let mut m = f64::INFINITY;
            // Proper sub-masks holding the lowest bit, so each split is seen once.
            let rest = mask ^ low;
            let mut sub = rest;
            loop {
                let part = sub | low;
                if part != mask {
                    let c = best[part][u] + best[mask ^ part][u];
                    if c < m {
                        m = c;
                    }
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & rest;
            }
            merged[u] = m;
        }
        for (v, slot) in best[mask].iter_mut().enumerate() {
            let mut m = f64::INFINITY;
            for (u, &mu) in merged.iter().enumerate() {
                let c = mu + d(u, v);
                if c < m {
                    m = c;
                }
            }
            *slot = m;
        }
    }
    best[full][root.index()]
}

/// Calls `visit` on every subset of `0..n` of size `1..=max`, by size and
/// then lexicographically.
fn for_each_subset(n: usize, max: usize, mut visit: impl FnMut(&[UserId])) {
    for size in 1..=max.min(n) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let team: Vec<UserId> = idx.iter().map(|&i| UserId::from(i)).collect();
            visit(&team);
            // advance to the next combination
            let mut i = size;
            while i > 0 && idx[i - 1] == n - size + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for j in i..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
}

/// Any feasible team contains a feasible sub-team of at most `total_units`
/// members (the users actually carrying units), and both costs are monotone
/// under adding members, so larger subsets never improve on the optimum.
fn effective_size(network: &SocialNetwork, task: &Task, max_team_size: usize) -> usize {
    max_team_size.min(network.len()).min(task.total_units() as usize)
}

pub type TeamCost = (Vec<UserId>, f64);

fn search(
    network: &SocialNetwork,
    task: &Task,
    max_team_size: usize,
    lower_bound: impl Fn(&[UserId]) -> f64,
    exact: impl Fn(&[UserId]) -> f64,
) -> Result<Option<TeamCost>> {
    limit("users", network.len(), MAX_USERS)?;
    if task.is_empty() {
        return Ok(Some((Vec::new(), 0.0)));
    }
    let users = network.users();
    let mut best: Option<TeamCost> = None;
    for_each_subset(network.len(), effective_size(network, task, max_team_size), |team| {
        if let Some((_, b)) = &best {
            if lower_bound(team) >= *b {
                return;
            }
        }
        if !is_feasible(task, team, users).0 {
            return;
        }
        let cost = exact(team);
        if best.as_ref().is_none_or(|(_, b)| cost < *b) {
            best = Some((team.to_vec(), cost));
        }
    });
    Ok(best)
}

/// Minimum-diameter feasible team with at most `max_team_size` members.
pub fn exact_min_diameter(network: &SocialNetwork, task: &Task, max_team_size: usize) -> Result<Option<TeamCost>> {
    limit("users", network.len(), MAX_USERS)?;
    let dist = shortest_path_distances(network, None);
    search(
        network,
        task,
        max_team_size,
        |team| diameter_from(&dist, team),
        |team| diameter_from(&dist, team),
    )
}

/// Feasible team with the cheapest exact Steiner tree, at most
/// `max_team_size` members.
pub fn exact_min_steiner(network: &SocialNetwork, task: &Task, max_team_size: usize) -> Result<Option<TeamCost>> {
    limit("users", network.len(), MAX_USERS)?;
    limit("terminals", effective_size(network, task, max_team_size), MAX_TERMINALS)?;
    let dist = shortest_path_distances(network, None);
    let n = network.len();
    search(
        network,
        task,
        max_team_size,
        // the closure MST is at most twice the optimal tree
        |team| closure_mst(&dist, team).0 / 2.0,
        |team| dreyfus_wagner(&dist, n, team),
    )
}
