//! Capacitated team formation on weighted social networks.
//!
//! Given a graph of users, each holding a set of skills (items) and a
//! capacity, and a task listing the units required per item, the solvers
//! here pick a team and an item-to-user assignment that covers the task
//! without overloading anyone while keeping the team socially close.
//!
//! Two collaboration costs are supported: the team diameter and the
//! (metric-closure) Steiner tree cost. [`diameter::solve_diameter`] is a
//! 2-approximation for the former and [`steiner::solve_steiner`] a
//! cost-effectiveness greedy for the latter. Priced users are handled by a
//! graph rewrite in [`transforms`]; exact exponential-time references live
//! in [`oracle`].

pub mod bench;
pub mod diameter;
pub mod error;
pub mod feasibility;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod steiner;
pub mod task;
pub mod transforms;

pub use error::{Error, Result};
pub use graph::{DistanceMatrix, ItemId, SocialNetwork, User, UserId};
pub use task::{Assignment, CostKind, CostModel, Outcome, Pricing, Solution, Task};

/// Absolute tolerance used for every distance comparison.
pub const EPS: f64 = 1e-9;

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
struct ReadmeDoctests;
