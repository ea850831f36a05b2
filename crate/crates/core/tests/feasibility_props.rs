mod common;

use common::{network, task};
use proptest::prelude::*;
use teamform::feasibility::{
    build_flow_network, coverage, is_feasible, max_flow, min_infeasibility_certificate, FlowNetwork,
};
use teamform::oracle::exact_feasible;
use teamform::task::check_assignment;
use teamform::{ItemId, Task, User, UserId};

/// Smallest s-t cut by enumerating every source side.
fn brute_min_cut(net: &FlowNetwork) -> u64 {
    let n = net.nodes.len();
    let inner: Vec<usize> = (0..n)
        .filter(|&v| v != FlowNetwork::SOURCE && v != FlowNetwork::SINK)
        .collect();
    let mut best = u64::MAX;
    for mask in 0u32..(1 << inner.len()) {
        let mut side = vec![false; n];
        side[FlowNetwork::SOURCE] = true;
        for (bit, &v) in inner.iter().enumerate() {
            side[v] = mask >> bit & 1 == 1;
        }
        let cut = net
            .arcs
            .iter()
            .filter(|a| side[a.from] && !side[a.to])
            .map(|a| a.cap)
            .sum();
        best = best.min(cut);
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn flow_agrees_with_exhaustive_search(net in network(8, 4, 3), task in task(4, 3)) {
        let users = net.users();
        let all: Vec<UserId> = net.user_ids().collect();
        let (ok, assignment) = is_feasible(&task, &all, users);
        prop_assert_eq!(ok, exact_feasible(&task, &all, users).unwrap());
        prop_assert_eq!(ok, assignment.is_some());
        prop_assert_eq!(ok, min_infeasibility_certificate(&task, &all, users) == 0);
        if let Some(a) = assignment {
            prop_assert!(check_assignment(&task, users, &a).is_empty());
        }
    }

    #[test]
    fn max_flow_is_min_cut(net in network(5, 4, 3), task in task(4, 3)) {
        let all: Vec<UserId> = net.user_ids().collect();
        let fnet = build_flow_network(&task, &all, net.users());
        prop_assume!(fnet.nodes.len() <= 12);
        let flow = max_flow(&fnet);
        prop_assert_eq!(flow.value, brute_min_cut(&fnet));
        // conservation and capacity bounds
        let mut balance = vec![0i64; fnet.nodes.len()];
        for (arc, &f) in fnet.arcs.iter().zip(&flow.arc_flows) {
            prop_assert!(f <= arc.cap);
            balance[arc.from] -= f as i64;
            balance[arc.to] += f as i64;
        }
        for (v, &b) in balance.iter().enumerate() {
            match v {
                FlowNetwork::SOURCE => prop_assert_eq!(-b, flow.value as i64),
                FlowNetwork::SINK => prop_assert_eq!(b, flow.value as i64),
                _ => prop_assert_eq!(b, 0),
            }
        }
    }

    #[test]
    fn monotone_in_candidates_and_capacity(
        net in network(7, 3, 2),
        task in task(3, 3),
        mask in 0u32..128,
        extra in 0u32..7,
        bump in 0u32..7,
    ) {
        let n = net.len() as u32;
        let cands: Vec<UserId> = net.user_ids().filter(|u| mask >> u.0 & 1 == 1).collect();
        let users = net.users();
        let base = is_feasible(&task, &cands, users).0;
        let base_cov = coverage(&task, &cands, users);

        let mut more = cands.clone();
        more.push(UserId(extra % n));
        prop_assert!(!base || is_feasible(&task, &more, users).0);
        prop_assert!(coverage(&task, &more, users) >= base_cov);

        let mut raised: Vec<User> = users.to_vec();
        raised[(bump % n) as usize].capacity += 1;
        prop_assert!(!base || is_feasible(&task, &cands, &raised).0);

        if let Some(&(item, _)) = task.requirements().first() {
            let smaller = Task::new(task.requirements().iter().map(|&(i, u)| {
                if i == item { (i, u - 1) } else { (i, u) }
            }).filter(|&(_, u)| u > 0)).unwrap();
            prop_assert!(!base || is_feasible(&smaller, &cands, users).0);
        }
    }
}

/// Every instance with up to 5 candidates, 3 items, 2 units per item and
/// capacity 2 over a fixed skill pattern family.
#[test]
fn exhaustive_small_grid() {
    let mut checked = 0;
    for n in 1..=3usize {
        // each user: skill mask over 2 items (4 options) x capacity 0..=2
        let per_user: usize = 4 * 3;
        for code in 0..per_user.pow(n as u32) {
            let mut c = code;
            let users: Vec<User> = (0..n)
                .map(|i| {
                    let skills = c % 4;
                    let cap = (c / 4) % 3;
                    c /= per_user;
                    User::new(i, (0..2).filter(|b| skills >> b & 1 == 1).map(ItemId), cap as u32)
                })
                .collect();
            for t0 in 0..=2u32 {
                for t1 in 0..=2u32 {
                    let task =
                        Task::new([(ItemId(0), t0), (ItemId(1), t1)].into_iter().filter(|&(_, u)| u > 0)).unwrap();
                    let all: Vec<UserId> = (0..n).map(UserId::from).collect();
                    let (ok, a) = is_feasible(&task, &all, &users);
                    assert_eq!(ok, exact_feasible(&task, &all, &users).unwrap(), "{users:?} {task:?}");
                    if let Some(a) = a {
                        assert!(check_assignment(&task, &users, &a).is_empty());
                    }
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 10_000);
}
