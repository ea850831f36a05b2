use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::feasibility::is_feasible;
use crate::graph::{Edge, ItemId, SocialNetwork, User, UserId};
use crate::task::Task;

/// Random draws of task items are retried this many times.
pub const TASK_ATTEMPTS: usize = 100;

/// Resolution of `WeightDist::Uniform` weights.
const WEIGHT_STEPS: u32 = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphKind {
    /// Erdos-Renyi with edge probability `density`.
    UniformRandom,
    /// Chung-Lu with expected degrees following `exponent`; `density`
    /// sets the mean degree to `density * (n - 1)`.
    PowerLaw,
    /// Near-square lattice, row-major.
    Grid,
}

impl std::str::FromStr for GraphKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "uniform-random" | "uniform" => Ok(GraphKind::UniformRandom),
            "power-law-degree" | "power-law" => Ok(GraphKind::PowerLaw),
            "grid" => Ok(GraphKind::Grid),
            other => Err(format!("unknown graph kind `{other}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightDist {
    Unit,
    /// Uniform on (0, 1], quantised to multiples of 1/1024 so scaled
    /// weights stay exactly representable.
    Uniform,
}

impl std::str::FromStr for WeightDist {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "unit" => Ok(WeightDist::Unit),
            "uniform" => Ok(WeightDist::Uniform),
            other => Err(format!("unknown weight distribution `{other}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSpec {
    pub kind: GraphKind,
    pub n: usize,
    pub density: f64,
    pub exponent: f64,
    pub weights: WeightDist,
    /// Size of the item universe.
    pub items: u32,
    pub skills_min: u32,
    pub skills_max: u32,
    pub cap_min: u32,
    pub cap_max: u32,
    pub price_min: u32,
    pub price_max: u32,
    /// Distinct items per task.
    pub k: usize,
    pub units_max: u32,
    pub seed: u64,
}

impl Default for GeneratorSpec {
    fn default() -> Self {
        GeneratorSpec {
            kind: GraphKind::UniformRandom,
            n: 10,
            density: 0.3,
            exponent: 2.5,
            weights: WeightDist::Unit,
            items: 6,
            skills_min: 1,
            skills_max: 2,
            cap_min: 1,
            cap_max: 2,
            price_min: 0,
            price_max: 0,
            k: 3,
            units_max: 1,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub network: SocialNetwork,
    pub task: Task,
}

fn weight(rng: &mut ChaCha8Rng, dist: WeightDist) -> f64 {
    match dist {
        WeightDist::Unit => 1.0,
        WeightDist::Uniform => f64::from(rng.gen_range(1..=WEIGHT_STEPS)) / f64::from(WEIGHT_STEPS),
    }
}

fn pairs(spec: &GeneratorSpec, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let n = spec.n;
    let mut out = Vec::new();
    match spec.kind {
        GraphKind::UniformRandom => {
            for a in 0..n {
                for b in a + 1..n {
                    if rng.gen_bool(spec.density.clamp(0.0, 1.0)) {
                        out.push((a, b));
                    }
                }
            }
        }
        GraphKind::PowerLaw => {
            let gamma = spec.exponent.max(2.0 + 1e-6);
            let raw: Vec<f64> = (0..n).map(|i| ((i + 1) as f64).powf(-1.0 / (gamma - 1.0))).collect();
            let target = spec.density.clamp(0.0, 1.0) * (n.saturating_sub(1)) as f64;
            let mean = raw.iter().sum::<f64>() / n as f64;
            let w: Vec<f64> = raw.iter().map(|x| x * target / mean).collect();
            let total: f64 = w.iter().sum();
            for a in 0..n {
                for b in a + 1..n {
                    let p = if total > 0.0 {
                        (w[a] * w[b] / total).min(1.0)
                    } else {
                        0.0
                    };
                    if rng.gen_bool(p) {
                        out.push((a, b));
                    }
                }
            }
        }
        GraphKind::Grid => {
            let cols = (n as f64).sqrt().ceil().max(1.0) as usize;
            for v in 0..n {
                if (v + 1) % cols != 0 && v + 1 < n {
                    out.push((v, v + 1));
                }
                if v + cols < n {
                    out.push((v, v + cols));
                }
            }
        }
    }
    out
}

fn draw_task(spec: &GeneratorSpec, users: &[User], rng: &mut ChaCha8Rng) -> Option<Task> {
    let mut held: Vec<ItemId> = users.iter().flat_map(|u| u.skills.iter().copied()).collect();
    held.sort_unstable();
    held.dedup();
    if held.len() < spec.k {
        return None;
    }
    let picks = sample(rng, held.len(), spec.k);
    let reqs: Vec<(ItemId, u32)> = picks
        .iter()
        .map(|i| (held[i], rng.gen_range(1..=spec.units_max.max(1))))
        .collect();
    Task::new(reqs).ok()
}

/// Deterministic in `spec.seed`. The task is redrawn until the full user
/// set can cover it.
pub fn generate(spec: &GeneratorSpec) -> Result<Instance> {
    if spec.n == 0 {
        return Err(Error::InvalidNetwork("generator needs at least one user".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let edges: Vec<Edge> = pairs(spec, &mut rng)
        .into_iter()
        .map(|(a, b)| Edge {
            a: UserId::from(a),
            b: UserId::from(b),
            weight: weight(&mut rng, spec.weights),
        })
        .collect();

    let items = spec.items.max(1);
    let users: Vec<User> = (0..spec.n)
        .map(|id| {
            let lo = spec.skills_min.min(items);
            let hi = spec.skills_max.clamp(lo, items);
            let count = rng.gen_range(lo..=hi) as usize;
            let skills = sample(&mut rng, items as usize, count)
                .into_iter()
                .map(|i| ItemId(i as u32));
            let capacity = rng.gen_range(spec.cap_min..=spec.cap_max.max(spec.cap_min));
            let price = rng.gen_range(spec.price_min..=spec.price_max.max(spec.price_min));
            User::new(id, skills, capacity).with_price(f64::from(price))
        })
        .collect();

    let all: Vec<UserId> = (0..spec.n).map(UserId::from).collect();
    for _ in 0..TASK_ATTEMPTS {
        if let Some(task) = draw_task(spec, &users, &mut rng) {
            if is_feasible(&task, &all, &users).0 {
                return Ok(Instance {
                    network: SocialNetwork::new(users, edges),
                    task,
                });
            }
        }
    }
    Err(Error::GenerationFailed(TASK_ATTEMPTS))
}
