//! WebAssembly bindings for the browser demo.
//!
//! Instances travel as the plain-text graph, users and task formats; every
//! export returns a JSON string. The `*_json` functions hold the logic and
//! are what the native tests exercise.

use serde::Serialize;
use serde_json::Value;
use teamform::bench::parse_spec_file;
use teamform::feasibility::{is_feasible, min_infeasibility_certificate};
use teamform::io::{
    assignment_json, format_edges, format_task, format_users, parse_edges, parse_task, parse_users, solution_json,
};
use teamform::transforms::solve;
use teamform::{CostKind, CostModel, Outcome, Pricing, SocialNetwork, UserId};
use wasm_bindgen::prelude::*;

const LAYOUT_ROUNDS: usize = 300;

#[derive(Serialize)]
struct GeneratedDoc {
    graph: String,
    users: String,
    task: String,
}

#[derive(Serialize)]
struct SolveDoc {
    /// Unit-square coordinates, one pair per user.
    layout: Vec<[f64; 2]>,
    edges: Vec<(UserId, UserId, f64)>,
    feasible: bool,
    deficit: u64,
    solution: Option<Value>,
}

#[derive(Serialize)]
struct FeasibleDoc {
    feasible: bool,
    deficit: u64,
    assignment: Option<Value>,
}

fn network(graph: &str, users: &str) -> Result<SocialNetwork, String> {
    let edges = parse_edges("graph", graph).map_err(|e| e.to_string())?;
    let users = parse_users("users", users).map_err(|e| e.to_string())?;
    SocialNetwork::try_new(users, edges).map_err(|e| e.to_string())
}

/// Generates the first instance described by a `key=value` spec.
pub fn generate_json(spec: &str) -> Result<String, String> {
    let specs = parse_spec_file("spec", spec).map_err(|e| e.to_string())?;
    let spec = specs.first().ok_or("spec describes no instance")?;
    let inst = teamform::bench::generate(spec).map_err(|e| e.to_string())?;
    let doc = GeneratedDoc {
        graph: format_edges(&inst.network),
        users: format_users(&inst.network),
        task: format_task(&inst.task),
    };
    Ok(serde_json::to_string(&doc).expect("serializes"))
}

/// Solves under `model` (`diameter` or `steiner`). Pricing applies when both
/// `alpha` and `beta` are positive.
pub fn solve_json(graph: &str, users: &str, task: &str, model: &str, alpha: f64, beta: f64) -> Result<String, String> {
    let net = network(graph, users)?;
    let task = parse_task("task", task).map_err(|e| e.to_string())?;
    let kind: CostKind = model.parse()?;
    let model = if alpha > 0.0 && beta > 0.0 {
        CostModel::priced(kind, Pricing::new(alpha, beta).map_err(|e| e.to_string())?)
    } else {
        CostModel::plain(kind)
    };
    let outcome = solve(&net, &task, &model).map_err(|e| e.to_string())?;
    let (feasible, deficit, solution) = match &outcome {
        Outcome::Solved(s) => (
            true,
            0,
            Some(serde_json::from_str(&solution_json(s)).expect("valid json")),
        ),
        Outcome::Infeasible { deficit, .. } => (false, *deficit, None),
    };
    let doc = SolveDoc {
        layout: layout(&net),
        edges: net.edges().iter().map(|e| (e.a, e.b, e.weight)).collect(),
        feasible,
        deficit,
        solution,
    };
    Ok(serde_json::to_string(&doc).expect("serializes"))
}

/// Checks a comma-separated candidate list; empty means every user.
pub fn feasible_json(users: &str, task: &str, candidates: &str) -> Result<String, String> {
    let net = network("", users)?;
    let task = parse_task("task", task).map_err(|e| e.to_string())?;
    let cands: Vec<UserId> = if candidates.trim().is_empty() {
        net.user_ids().collect()
    } else {
        candidates
            .split(',')
            .map(|s| {
                let id = UserId(s.trim().parse().map_err(|_| format!("bad user id `{}`", s.trim()))?);
                net.check_user(id).map_err(|e| e.to_string())?;
                Ok(id)
            })
            .collect::<Result<_, String>>()?
    };
    let (ok, assignment) = is_feasible(&task, &cands, net.users());
    let doc = FeasibleDoc {
        feasible: ok,
        deficit: if ok {
            0
        } else {
            min_infeasibility_certificate(&task, &cands, net.users())
        },
        assignment: assignment.map(|a| serde_json::from_str(&assignment_json(&a)).expect("valid json")),
    };
    Ok(serde_json::to_string(&doc).expect("serializes"))
}

/// Spring layout started from a circle; deterministic for a given network.
fn layout(net: &SocialNetwork) -> Vec<[f64; 2]> {
    let n = net.len();
    if n == 0 {
        return Vec::new();
    }
    let mut pos: Vec<[f64; 2]> = (0..n)
        .map(|i| {
            let t = std::f64::consts::TAU * i as f64 / n as f64;
            [0.5 + 0.4 * t.cos(), 0.5 + 0.4 * t.sin()]
        })
        .collect();
    let k = (1.0 / n as f64).sqrt();
    for round in 0..LAYOUT_ROUNDS {
        let temp = 0.1 * (1.0 - round as f64 / LAYOUT_ROUNDS as f64);
        let mut shift = vec![[0.0f64; 2]; n];
        for a in 0..n {
            for b in a + 1..n {
                let (dx, dy) = (pos[a][0] - pos[b][0], pos[a][1] - pos[b][1]);
                let d = (dx * dx + dy * dy).sqrt().max(1e-6);
                let f = k * k / d;
                shift[a][0] += dx / d * f;
                shift[a][1] += dy / d * f;
                shift[b][0] -= dx / d * f;
                shift[b][1] -= dy / d * f;
            }
        }
        for e in net.edges() {
            let (a, b) = (e.a.index(), e.b.index());
            let (dx, dy) = (pos[a][0] - pos[b][0], pos[a][1] - pos[b][1]);
            let d = (dx * dx + dy * dy).sqrt().max(1e-6);
            let f = d * d / k;
            shift[a][0] -= dx / d * f;
            shift[a][1] -= dy / d * f;
            shift[b][0] += dx / d * f;
            shift[b][1] += dy / d * f;
        }
        for (p, s) in pos.iter_mut().zip(&shift) {
            let len = (s[0] * s[0] + s[1] * s[1]).sqrt().max(1e-9);
            let step = len.min(temp);
            p[0] = (p[0] + s[0] / len * step).clamp(0.0, 1.0);
            p[1] = (p[1] + s[1] / len * step).clamp(0.0, 1.0);
        }
    }
    pos
}

fn to_js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn generate(spec: &str) -> Result<String, JsValue> {
    to_js(generate_json(spec))
}

#[wasm_bindgen(js_name = solveTeam)]
pub fn solve_team(graph: &str, users: &str, task: &str, model: &str, alpha: f64, beta: f64) -> Result<String, JsValue> {
    to_js(solve_json(graph, users, task, model, alpha, beta))
}

#[wasm_bindgen(js_name = checkFeasible)]
pub fn check_feasible(users: &str, task: &str, candidates: &str) -> Result<String, JsValue> {
    to_js(feasible_json(users, task, candidates))
}
