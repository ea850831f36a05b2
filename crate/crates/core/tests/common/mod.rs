#![allow(dead_code)]

use proptest::prelude::*;
use teamform::graph::Edge;
use teamform::{ItemId, SocialNetwork, Task, User, UserId};

/// Quarter-unit weights keep sums exact.
pub fn weight() -> impl Strategy<Value = f64> {
    (0u32..=16).prop_map(|q| f64::from(q) / 4.0)
}

pub fn network(max_users: usize, max_items: u32, max_cap: u32) -> impl Strategy<Value = SocialNetwork> {
    (1..=max_users).prop_flat_map(move |n| {
        let users = proptest::collection::vec(
            (
                proptest::collection::btree_set(0..max_items, 0..=max_items as usize),
                0..=max_cap,
            ),
            n,
        );
        let pairs = proptest::collection::vec((0..n, 0..n, weight(), any::<bool>()), 0..=n * 2);
        (users, pairs).prop_map(move |(users, pairs)| {
            let users = users
                .into_iter()
                .enumerate()
                .map(|(i, (skills, cap))| User::new(i, skills.into_iter().map(ItemId), cap))
                .collect();
            let mut seen = std::collections::BTreeSet::new();
            let edges = pairs
                .into_iter()
                .filter(|&(a, b, _, keep)| keep && a != b && seen.insert((a.min(b), a.max(b))))
                .map(|(a, b, w, _)| Edge {
                    a: UserId::from(a),
                    b: UserId::from(b),
                    weight: w,
                })
                .collect();
            SocialNetwork::new(users, edges)
        })
    })
}

pub fn task(max_items: u32, max_units: u32) -> impl Strategy<Value = Task> {
    proptest::collection::btree_map(0..max_items, 1..=max_units, 0..=max_items as usize)
        .prop_map(|m| Task::new(m.into_iter().map(|(i, n)| (ItemId(i), n))).unwrap())
}

pub fn ids(v: &[u32]) -> Vec<UserId> {
    v.iter().map(|&i| UserId(i)).collect()
}
