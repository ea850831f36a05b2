//! Input rewrites that let the base solvers handle priced users and
//! multi-unit tasks.
//!
//! Pricing splits every user `u` into a relay `u` (no skills, no capacity)
//! and a pendant shadow `u'` that takes over the skills and capacity,
//! joined by an edge of weight `alpha * price(u)`. Original edges are scaled
//! by `beta`. A path between two shadows then pays both endpoint prices plus
//! the scaled social distance.

use crate::diameter::solve_diameter;
use crate::error::{Error, Result};
use crate::graph::{Edge, SocialNetwork, User, UserId};
use crate::steiner::solve_steiner;
use crate::task::{priced_cost, CostKind, CostModel, Outcome, PricedCosts, Pricing, Task};

#[derive(Clone, Debug, PartialEq)]
pub struct PricedTransform {
    pub network: SocialNetwork,
    /// `user_map[u]` is the shadow of original user `u`.
    pub user_map: Vec<UserId>,
    pub pricing: Pricing,
}

impl PricedTransform {
    pub fn original_len(&self) -> usize {
        self.user_map.len()
    }

    /// Original user behind a transformed node (shadow or relay).
    pub fn original_of(&self, id: UserId) -> UserId {
        let n = self.original_len();
        if id.index() >= n {
            UserId::from(id.index() - n)
        } else {
            id
        }
    }
}

pub fn apply_price_transform(network: &SocialNetwork, alpha: f64, beta: f64) -> Result<PricedTransform> {
    let pricing = Pricing::new(alpha, beta)?;
    if network.is_price_transformed() {
        return Err(Error::AlreadyTransformed);
    }
    let n = network.len();
    let mut users: Vec<User> = network.users().iter().map(|u| User::new(u.id, [], 0)).collect();
    users.extend(
        network
            .users()
            .iter()
            .map(|u| User::new(n + u.id.index(), u.skills.iter().copied(), u.capacity)),
    );

    let mut edges: Vec<Edge> = network
        .edges()
        .iter()
        .map(|e| Edge {
            weight: beta * e.weight,
            ..*e
        })
        .collect();
    edges.extend(network.users().iter().map(|u| Edge {
        a: u.id,
        b: UserId::from(n + u.id.index()),
        weight: alpha * u.price,
    }));

    Ok(PricedTransform {
        network: SocialNetwork::new(users, edges).mark_price_transformed(),
        user_map: (n..2 * n).map(UserId::from).collect(),
        pricing,
    })
}

/// Recovers the original network: shadows dropped, skills and capacities
/// moved back, prices read off the pendant edges, weights divided by beta.
pub fn invert_price_transform(t: &PricedTransform) -> Result<SocialNetwork> {
    if !t.network.is_price_transformed() {
        return Err(Error::NotTransformed);
    }
    let n = t.original_len();
    let edges = t.network.edges();
    let scaled = edges.len() - n;
    let Pricing { alpha, beta } = t.pricing;
    let users = (0..n)
        .map(|u| {
            let shadow = t.network.user(t.user_map[u]);
            User::new(u, shadow.skills.iter().copied(), shadow.capacity).with_price(edges[scaled + u].weight / alpha)
        })
        .collect();
    let originals = edges[..scaled]
        .iter()
        .map(|e| Edge {
            weight: e.weight / beta,
            ..*e
        })
        .collect();
    Ok(SocialNetwork::new(users, originals))
}

fn run(network: &SocialNetwork, task: &Task, kind: CostKind) -> Outcome {
    match kind {
        CostKind::Diameter => solve_diameter(network, task),
        CostKind::Steiner => solve_steiner(network, task),
    }
}

/// Runs the chosen solver on the price-transformed graph and maps the team
/// back to original ids. `cost` is the transformed-graph cost; the directly
/// evaluated priced objective is reported alongside in `priced`.
pub fn solve_priced(network: &SocialNetwork, task: &Task, model: &CostModel) -> Result<Outcome> {
    let pricing = model.pricing.ok_or(Error::MissingPricing)?;
    let t = apply_price_transform(network, pricing.alpha, pricing.beta)?;
    let mut sol = match run(&t.network, task, model.kind) {
        Outcome::Solved(sol) => sol,
        infeasible => return Ok(infeasible),
    };
    let back = |u: UserId| t.original_of(u);
    sol.team = sol.team.iter().map(|&u| back(u)).collect();
    sol.assignment = sol.assignment.map_users(back);
    let mut connectors: Vec<UserId> = sol
        .connectors
        .iter()
        .map(|&u| back(u))
        .filter(|u| !sol.team.contains(u))
        .collect();
    connectors.sort_unstable();
    connectors.dedup();
    sol.connectors = connectors;
    for step in &mut sol.trace {
        step.user = back(step.user);
    }
    let direct = if sol.team.is_empty() {
        0.0
    } else {
        priced_cost(network, &sol.team, model)?
    };
    sol.priced = Some(PricedCosts {
        transformed_cost: sol.cost,
        priced_cost: direct,
    });
    sol.solver = format!("{}+priced", model.kind.name());
    Ok(Outcome::Solved(sol))
}

/// Multi-unit tasks go straight to the base solvers, whose coverage check
/// already handles unit counts. Kept as an explicit entry point so callers
/// need not care whether a task is unit-demand.
pub fn solve_multiunit(network: &SocialNetwork, task: &Task, kind: CostKind) -> Outcome {
    run(network, task, kind)
}

/// Dispatches on the cost model: priced pipeline when pricing is present.
pub fn solve(network: &SocialNetwork, task: &Task, model: &CostModel) -> Result<Outcome> {
    match model.pricing {
        Some(_) => solve_priced(network, task, model),
        None => Ok(solve_multiunit(network, task, model.kind)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{shortest_path_distances, ItemId};
    use crate::task::steiner_cost;

    fn e(a: u32, b: u32, w: f64) -> Edge {
        Edge {
            a: UserId(a),
            b: UserId(b),
            weight: w,
        }
    }

    fn two_users(prices: [f64; 2], d: f64) -> SocialNetwork {
        let users = vec![
            User::new(0usize, [ItemId(0)], 1).with_price(prices[0]),
            User::new(1usize, [ItemId(1)], 1).with_price(prices[1]),
        ];
        SocialNetwork::new(users, vec![e(0, 1, d)])
    }

    #[test]
    fn pendant_and_scaled_weights() {
        let users = vec![
            User::new(0usize, [ItemId(0)], 2).with_price(5.0),
            User::new(1usize, [], 1),
        ];
        let net = SocialNetwork::new(users, vec![e(0, 1, 3.0)]);
        let t = apply_price_transform(&net, 2.0, 4.0).unwrap();
        assert_eq!(t.network.len(), 4);
        assert_eq!(t.network.edges()[0].weight, 12.0);
        let pendant = t.network.edges()[1];
        assert_eq!((pendant.a, pendant.b, pendant.weight), (UserId(0), UserId(2), 10.0));
        let shadow = t.network.user(UserId(2));
        assert_eq!(
            (shadow.skills.clone(), shadow.capacity, shadow.price),
            (vec![ItemId(0)], 2, 0.0)
        );
        let relay = t.network.user(UserId(0));
        assert!(relay.skills.is_empty() && relay.capacity == 0);
        assert_eq!(invert_price_transform(&t).unwrap(), net);
    }

    #[test]
    fn rejects_bad_parameters_and_composition() {
        let net = two_users([1.0, 1.0], 1.0);
        assert!(apply_price_transform(&net, 0.0, 1.0).is_err());
        assert!(apply_price_transform(&net, 1.0, -1.0).is_err());
        let t = apply_price_transform(&net, 1.0, 1.0).unwrap();
        assert!(matches!(
            apply_price_transform(&t.network, 1.0, 1.0),
            Err(Error::AlreadyTransformed)
        ));
        let fake = PricedTransform {
            network: net.clone(),
            ..t
        };
        assert!(matches!(invert_price_transform(&fake), Err(Error::NotTransformed)));
    }

    #[test]
    fn shadow_distance_identity() {
        let net = two_users([1.0, 2.0], 3.0);
        let t = apply_price_transform(&net, 1.5, 2.0).unwrap();
        let d = shortest_path_distances(&t.network, None);
        assert_eq!(d.get(UserId(2), UserId(3)), 1.5 + 3.0 + 2.0 * 3.0);
    }

    #[test]
    fn steiner_pair_matches_priced_objective() {
        let net = two_users([1.0, 2.0], 3.0);
        let model = CostModel::priced(CostKind::Steiner, Pricing::new(1.0, 2.0).unwrap());
        let task = Task::unit([ItemId(0), ItemId(1)]).unwrap();
        let sol = solve_priced(&net, &task, &model).unwrap().into_solution().unwrap();
        assert_eq!(sol.team, vec![UserId(0), UserId(1)]);
        let priced = sol.priced.unwrap();
        assert_eq!(priced.transformed_cost, 1.0 + 2.0 + 2.0 * 3.0);
        assert_eq!(priced.priced_cost, priced.transformed_cost);
        assert!(sol.connectors.is_empty());
    }

    #[test]
    fn diameter_singleton_differs_from_priced() {
        let users = vec![User::new(0usize, [ItemId(0)], 1).with_price(5.0)];
        let net = SocialNetwork::new(users, vec![]);
        let model = CostModel::priced(CostKind::Diameter, Pricing::new(2.0, 1.0).unwrap());
        let sol = solve_priced(&net, &Task::unit([ItemId(0)]).unwrap(), &model)
            .unwrap()
            .into_solution()
            .unwrap();
        assert_eq!(sol.team, vec![UserId(0)]);
        assert_eq!(sol.cost, 0.0);
        assert_eq!(sol.priced.unwrap().priced_cost, 10.0);
    }

    #[test]
    fn zero_prices_keep_costs() {
        let net = two_users([0.0, 0.0], 3.0);
        let task = Task::unit([ItemId(0), ItemId(1)]).unwrap();
        for kind in [CostKind::Diameter, CostKind::Steiner] {
            let model = CostModel::priced(kind, Pricing::new(1.0, 1.0).unwrap());
            let priced = solve_priced(&net, &task, &model).unwrap().into_solution().unwrap();
            let plain = solve_multiunit(&net, &task, kind).into_solution().unwrap();
            assert_eq!(priced.cost, plain.cost);
            assert_eq!(priced.team, plain.team);
        }
    }

    #[test]
    fn priced_empty_task() {
        let net = two_users([1.0, 1.0], 1.0);
        let model = CostModel::priced(CostKind::Steiner, Pricing::new(1.0, 1.0).unwrap());
        let sol = solve_priced(&net, &Task::default(), &model)
            .unwrap()
            .into_solution()
            .unwrap();
        assert!(sol.team.is_empty());
        assert_eq!(sol.cost, 0.0);
        assert!(matches!(
            solve_priced(&net, &Task::default(), &CostModel::plain(CostKind::Steiner)),
            Err(Error::MissingPricing)
        ));
    }

    #[test]
    fn multiunit_examples() {
        let users = vec![User::new(0usize, [ItemId(0)], 1), User::new(1usize, [ItemId(0)], 1)];
        let net = SocialNetwork::new(users, vec![e(0, 1, 2.5)]);
        let task = Task::new([(ItemId(0), 2)]).unwrap();
        let sol = solve_multiunit(&net, &task, CostKind::Diameter)
            .into_solution()
            .unwrap();
        assert_eq!(sol.team, vec![UserId(0), UserId(1)]);
        assert_eq!(sol.cost, 2.5);
        let task = Task::new([(ItemId(0), 3)]).unwrap();
        assert!(matches!(
            solve_multiunit(&net, &task, CostKind::Steiner),
            Outcome::Infeasible { deficit: 1, .. }
        ));
        assert_eq!(steiner_cost(&net, &[UserId(0), UserId(1)]).unwrap(), 2.5);
    }
}
