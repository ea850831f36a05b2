//! Minimum-diameter team search over anchor balls.
//!
//! For every candidate radius `r` (ascending) and anchor `u` (ascending id),
//! the ball of radius `r` around `u` is tested for coverage. The first
//! feasible ball wins. An optimal team of diameter `D` lies inside the ball
//! of radius `D` around any of its members, so the winning radius is at most
//! `D`, and any ball of radius `r` has diameter at most `2r`.

use crate::error::Result;
use crate::feasibility::{is_feasible, min_infeasibility_certificate};
use crate::graph::{shortest_path_distances, DistanceMatrix, SocialNetwork, UserId};
use crate::task::{diameter_from, Outcome, Solution, SolveStats, Stopwatch, Task};
use crate::EPS;

pub const SOLVER_NAME: &str = "diameter";

/// Sorted distinct finite pairwise distances, including 0 when the network
/// is non-empty. Values within `EPS` of each other are merged.
pub fn candidate_radii(network: &SocialNetwork) -> Vec<f64> {
    radii_from(&shortest_path_distances(network, None), network.len())
}

fn radii_from(dist: &DistanceMatrix, n: usize) -> Vec<f64> {
    let mut all: Vec<f64> = Vec::with_capacity(n * n / 2 + 1);
    for u in 0..n {
        let row = dist.row(UserId::from(u)).expect("full matrix");
        all.extend(row[u..].iter().copied().filter(|d| d.is_finite()));
    }
    all.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::new();
    for d in all {
        if out.last().is_none_or(|&last| d - last > EPS) {
            out.push(d);
        }
    }
    out
}

/// Users within `radius` (plus `EPS`) of `anchor`, ascending.
pub fn ball(network: &SocialNetwork, anchor: UserId, radius: f64) -> Result<Vec<UserId>> {
    network.check_user(anchor)?;
    let dist = shortest_path_distances(network, Some(&[anchor]));
    Ok(ball_from(&dist, anchor, radius))
}

pub(crate) fn ball_from(dist: &DistanceMatrix, anchor: UserId, radius: f64) -> Vec<UserId> {
    dist.row(anchor)
        .expect("anchor row")
        .iter()
        .enumerate()
        .filter(|&(_, &d)| d.is_finite() && d <= radius + EPS)
        .map(|(v, _)| UserId::from(v))
        .collect()
}

/// How the smallest feasible radius is located for each anchor. Both return
/// the same `(radius, anchor)` pair; bisection issues fewer flow probes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum AnchorSearch {
    Linear,
    #[default]
    Bisect,
}

struct Search<'a> {
    network: &'a SocialNetwork,
    task: &'a Task,
    dist: &'a DistanceMatrix,
    radii: &'a [f64],
    flow_calls: u64,
}

impl Search<'_> {
    fn feasible(&mut self, anchor: UserId, idx: usize) -> bool {
        let members = ball_from(self.dist, anchor, self.radii[idx]);
        self.flow_calls += 1;
        is_feasible(self.task, &members, self.network.users()).0
    }

    /// Smallest (radius index, anchor) with a feasible ball, scanning radii
    /// in the outer loop.
    fn linear(&mut self) -> Option<(usize, UserId)> {
        for idx in 0..self.radii.len() {
            for anchor in self.network.user_ids() {
                if self.feasible(anchor, idx) {
                    return Some((idx, anchor));
                }
            }
        }
        None
    }

    /// Per-anchor binary search, exploiting that balls only grow with the
    /// radius. Anchors are visited in ascending order and only radii strictly
    /// below the incumbent are searched, which preserves the linear scan's
    /// tie-break.
    fn bisect(&mut self) -> Option<(usize, UserId)> {
        let mut best: Option<(usize, UserId)> = None;
        for anchor in self.network.user_ids() {
            let limit = best.map_or(self.radii.len(), |(idx, _)| idx);
            if limit == 0 {
                break;
            }
            if !self.feasible(anchor, limit - 1) {
                continue;
            }
            let (mut lo, mut hi) = (0, limit - 1);
            while lo < hi {
                let mid = (lo + hi) / 2;
                if self.feasible(anchor, mid) {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            best = Some((lo, anchor));
        }
        best
    }
}

/// Capacitated minimum-diameter team, within a factor 2 of optimal.
pub fn solve_diameter(network: &SocialNetwork, task: &Task) -> Outcome {
    solve_diameter_with(network, task, AnchorSearch::default())
}

pub fn solve_diameter_with(network: &SocialNetwork, task: &Task, strategy: AnchorSearch) -> Outcome {
    let clock = Stopwatch::start();
    if task.is_empty() {
        return Outcome::Solved(Solution::empty(SOLVER_NAME));
    }
    let all: Vec<UserId> = network.user_ids().collect();
    let deficit = min_infeasibility_certificate(task, &all, network.users());
    if deficit > 0 {
        return Outcome::Infeasible { deficit, flow_calls: 1 };
    }

    let dist = shortest_path_distances(network, None);
    let radii = radii_from(&dist, network.len());
    let mut search = Search {
        network,
        task,
        dist: &dist,
        radii: &radii,
        flow_calls: 1,
    };
    let found = match strategy {
        AnchorSearch::Linear => search.linear(),
        AnchorSearch::Bisect => search.bisect(),
    };
    let members = match found {
        Some((idx, anchor)) => ball_from(&dist, anchor, radii[idx]),
        // Coverable only across components.
        None => all,
    };
    search.flow_calls += 1;
    let (_, assignment) = is_feasible(task, &members, network.users());
    let assignment = assignment.expect("selected ball is feasible");
    let team = assignment.users();
    let cost = diameter_from(&dist, &team);
    Outcome::Solved(Solution {
        team,
        connectors: Vec::new(),
        assignment,
        cost,
        solver: SOLVER_NAME.to_string(),
        stats: SolveStats {
            flow_calls: search.flow_calls,
            elapsed: clock.elapsed(),
        },
        trace: Vec::new(),
        priced: None,
    })
}
