//! Cost-effectiveness greedy for the Steiner collaboration cost.
//!
//! Starting from an empty team, each step adds the user with the lowest
//! ratio of attachment cost (distance to the nearest team member) to the
//! number of extra task units the team can cover once that user joins.
//! Coverage is the maximum-flow value over the team, which is monotone and
//! submodular in the team, so the greedy is a set-cover style
//! approximation over the task's units.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::feasibility::{coverage, is_feasible, min_infeasibility_certificate};
use crate::graph::{shortest_path_distances, DistanceMatrix, SocialNetwork, UserId};
use crate::task::{steiner_tree, Outcome, Solution, SolveStats, Stopwatch, Task, TraceStep};
use crate::EPS;

pub const SOLVER_NAME: &str = "steiner";

/// Attachment cost of `user` to `team`: distance to the nearest member, or
/// 0 for an empty team.
fn attach_cost(dist: &DistanceMatrix, team: &[UserId], user: UserId) -> f64 {
    team.iter()
        .map(|&m| dist.get(user, m))
        .fold(if team.is_empty() { 0.0 } else { f64::INFINITY }, f64::min)
}

fn ratio(step: &TraceStep) -> f64 {
    step.attach_cost / step.units_gained as f64
}

/// Lower is better: ratio, then attachment cost, then larger gain, then id.
fn compare(a: &TraceStep, b: &TraceStep) -> Ordering {
    let (ra, rb) = (ratio(a), ratio(b));
    let by_ratio = if ra == rb || (ra - rb).abs() <= EPS {
        Ordering::Equal
    } else {
        ra.total_cmp(&rb)
    };
    by_ratio
        .then_with(|| {
            if a.attach_cost == b.attach_cost || (a.attach_cost - b.attach_cost).abs() <= EPS {
                Ordering::Equal
            } else {
                a.attach_cost.total_cmp(&b.attach_cost)
            }
        })
        .then_with(|| b.units_gained.cmp(&a.units_gained))
        .then_with(|| a.user.cmp(&b.user))
}

struct Greedy<'a> {
    network: &'a SocialNetwork,
    task: &'a Task,
    dist: &'a DistanceMatrix,
    flow_calls: u64,
}

impl Greedy<'_> {
    fn step(&mut self, team: &[UserId], covered: u64) -> Result<TraceStep> {
        let users = self.network.users();
        let mut best: Option<TraceStep> = None;
        let mut trial = team.to_vec();
        for user in self.network.user_ids() {
            let u = &users[user.index()];
            if team.contains(&user) || u.capacity == 0 || !self.task.requirements().iter().any(|&(i, _)| u.has_skill(i))
            {
                continue;
            }
            trial.push(user);
            self.flow_calls += 1;
            let gained = coverage(self.task, &trial, users).saturating_sub(covered);
            trial.pop();
            if gained == 0 {
                continue;
            }
            let cand = TraceStep {
                user,
                units_gained: gained,
                attach_cost: attach_cost(self.dist, team, user),
            };
            if best.as_ref().is_none_or(|b| compare(&cand, b) == Ordering::Less) {
                best = Some(cand);
            }
        }
        best.ok_or(Error::NoCandidate)
    }
}

/// One greedy move: the user with the best attachment-cost-per-unit ratio
/// given the current team and the units it already covers.
pub fn greedy_step(network: &SocialNetwork, task: &Task, team: &[UserId], covered: u64) -> Result<TraceStep> {
    for &u in team {
        network.check_user(u)?;
    }
    let dist = shortest_path_distances(network, Some(team));
    // Rows for candidates are not needed: lookups go through the team rows.
    let mut greedy = Greedy {
        network,
        task,
        dist: &dist,
        flow_calls: 0,
    };
    greedy.step(team, covered)
}

/// Capacitated team with low Steiner cost via the cost-effectiveness greedy.
pub fn solve_steiner(network: &SocialNetwork, task: &Task) -> Outcome {
    let clock = Stopwatch::start();
    if task.is_empty() {
        return Outcome::Solved(Solution::empty(SOLVER_NAME));
    }
    let users = network.users();
    let all: Vec<UserId> = network.user_ids().collect();
    let deficit = min_infeasibility_certificate(task, &all, users);
    if deficit > 0 {
        return Outcome::Infeasible { deficit, flow_calls: 1 };
    }

    let dist = shortest_path_distances(network, None);
    let mut greedy = Greedy {
        network,
        task,
        dist: &dist,
        flow_calls: 1,
    };
    let total = task.total_units();
    let mut team: Vec<UserId> = Vec::new();
    let mut trace = Vec::new();
    let mut covered = 0;
    while covered < total {
        let step = match greedy.step(&team, covered) {
            Ok(step) => step,
            // Unreachable while the whole network covers the task: some
            // user always has positive marginal coverage.
            Err(_) => {
                return Outcome::Infeasible {
                    deficit: total - covered,
                    flow_calls: greedy.flow_calls,
                }
            }
        };
        covered += step.units_gained;
        team.push(step.user);
        trace.push(step);
    }

    greedy.flow_calls += 1;
    let (_, assignment) = is_feasible(task, &team, users);
    let assignment = assignment.expect("greedy team covers the task");
    let members = assignment.users();
    let tree = steiner_tree(network, &members).expect("non-empty team of valid users");
    Outcome::Solved(Solution {
        team: members,
        connectors: tree.connectors,
        assignment,
        cost: tree.cost,
        solver: SOLVER_NAME.to_string(),
        stats: SolveStats {
            flow_calls: greedy.flow_calls,
            elapsed: clock.elapsed(),
        },
        trace,
        priced: None,
    })
}
