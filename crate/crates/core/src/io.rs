//! Plain-text instance formats and the canonical solution document.
//!
//! * graph file: one edge per line, `u v w`
//! * users file: one user per line, `id capacity [price] items` where items
//!   is a comma-separated list or `-` when empty
//! * task file: one requirement per line, `item units`
//!
//! Blank lines and lines starting with `#` are ignored everywhere.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Edge, ItemId, SocialNetwork, User, UserId};
use crate::task::{Assignment, Outcome, Solution, Task, TraceStep};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn field<T: std::str::FromStr>(source: &str, line: usize, token: Option<&str>, what: &str) -> Result<T> {
    let token = token.ok_or_else(|| Error::Parse {
        path: source.to_string(),
        line,
        msg: format!("missing {what}"),
    })?;
    token.parse().map_err(|_| Error::Parse {
        path: source.to_string(),
        line,
        msg: format!("bad {what} `{token}`"),
    })
}

fn no_trailing(source: &str, line: usize, mut rest: std::str::SplitWhitespace<'_>) -> Result<()> {
    match rest.next() {
        None => Ok(()),
        Some(tok) => Err(Error::Parse {
            path: source.to_string(),
            line,
            msg: format!("unexpected token `{tok}`"),
        }),
    }
}

pub fn parse_edges(source: &str, text: &str) -> Result<Vec<Edge>> {
    content_lines(text)
        .map(|(line, l)| {
            let mut tok = l.split_whitespace();
            let a: u32 = field(source, line, tok.next(), "endpoint")?;
            let b: u32 = field(source, line, tok.next(), "endpoint")?;
            let weight: f64 = field(source, line, tok.next(), "weight")?;
            no_trailing(source, line, tok)?;
            Ok(Edge {
                a: UserId(a),
                b: UserId(b),
                weight,
            })
        })
        .collect()
}

fn parse_skills(source: &str, line: usize, token: &str) -> Result<Vec<ItemId>> {
    if token == "-" {
        return Ok(Vec::new());
    }
    token
        .split(',')
        .map(|s| field::<u32>(source, line, Some(s), "item").map(ItemId))
        .collect()
}

/// Users sorted by id.
pub fn parse_users(source: &str, text: &str) -> Result<Vec<User>> {
    let mut users = content_lines(text)
        .map(|(line, l)| {
            let tokens: Vec<&str> = l.split_whitespace().collect();
            let (price, skills) = match tokens.len() {
                3 => (0.0, tokens[2]),
                4 => (field(source, line, Some(tokens[2]), "price")?, tokens[3]),
                _ => {
                    return Err(Error::Parse {
                        path: source.to_string(),
                        line,
                        msg: "expected `id capacity [price] items`".to_string(),
                    })
                }
            };
            let id: u32 = field(source, line, tokens.first().copied(), "user id")?;
            let capacity: u32 = field(source, line, tokens.get(1).copied(), "capacity")?;
            let mut skills = parse_skills(source, line, skills)?;
            skills.sort_unstable();
            Ok(User {
                id: UserId(id),
                skills,
                capacity,
                price,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    users.sort_by_key(|u| u.id);
    Ok(users)
}

pub fn parse_task(source: &str, text: &str) -> Result<Task> {
    let reqs = content_lines(text)
        .map(|(line, l)| {
            let mut tok = l.split_whitespace();
            let item: u32 = field(source, line, tok.next(), "item")?;
            let units: u32 = field(source, line, tok.next(), "units")?;
            no_trailing(source, line, tok)?;
            Ok((ItemId(item), units))
        })
        .collect::<Result<Vec<_>>>()?;
    Task::new(reqs)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Reads and validates a network from a graph file and a users file.
pub fn load_network(graph: &Path, users: &Path) -> Result<SocialNetwork> {
    let edges = parse_edges(&graph.display().to_string(), &read(graph)?)?;
    let users = parse_users(&users.display().to_string(), &read(users)?)?;
    SocialNetwork::try_new(users, edges)
}

pub fn load_task(path: &Path) -> Result<Task> {
    parse_task(&path.display().to_string(), &read(path)?)
}

pub fn format_edges(network: &SocialNetwork) -> String {
    let mut out = String::new();
    for e in network.edges() {
        let _ = writeln!(out, "{} {} {}", e.a, e.b, e.weight);
    }
    out
}

pub fn format_users(network: &SocialNetwork) -> String {
    let mut out = String::new();
    for u in network.users() {
        let skills = if u.skills.is_empty() {
            "-".to_string()
        } else {
            u.skills.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
        };
        let _ = writeln!(out, "{} {} {} {}", u.id, u.capacity, u.price, skills);
    }
    out
}

pub fn format_task(task: &Task) -> String {
    let mut out = String::new();
    for &(item, units) in task.requirements() {
        let _ = writeln!(out, "{item} {units}");
    }
    out
}

/// Writes `<prefix>.graph`, `<prefix>.users` and `<prefix>.task`.
pub fn save_instance(prefix: &Path, network: &SocialNetwork, task: &Task) -> Result<()> {
    let with = |ext: &str| {
        let mut p = prefix.as_os_str().to_owned();
        p.push(ext);
        std::path::PathBuf::from(p)
    };
    write(&with(".graph"), &format_edges(network))?;
    write(&with(".users"), &format_users(network))?;
    write(&with(".task"), &format_task(task))
}

#[derive(Serialize)]
struct AssignmentEntry {
    item: ItemId,
    user: UserId,
    units: u32,
}

fn entries(assignment: &Assignment) -> Vec<AssignmentEntry> {
    assignment
        .entries()
        .map(|(item, user, units)| AssignmentEntry { item, user, units })
        .collect()
}

#[derive(Serialize)]
struct SolutionDoc<'a> {
    team: &'a [UserId],
    assignment: Vec<AssignmentEntry>,
    /// `null` when the team spans several components.
    cost: Option<f64>,
    solver: &'a str,
    connectors: &'a [UserId],
    flow_calls: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    transformed_cost: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    priced_cost: Option<f64>,
    #[serde(skip_serializing_if = "<[_]>::is_empty")]
    trace: &'a [TraceStep],
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

/// Canonical single-line JSON with a fixed key order. Wall time is left
/// out so documents are reproducible.
pub fn solution_json(solution: &Solution) -> String {
    let doc = SolutionDoc {
        team: &solution.team,
        assignment: entries(&solution.assignment),
        cost: finite(solution.cost),
        solver: &solution.solver,
        connectors: &solution.connectors,
        flow_calls: solution.stats.flow_calls,
        transformed_cost: solution.priced.map(|p| p.transformed_cost).and_then(finite),
        priced_cost: solution.priced.map(|p| p.priced_cost).and_then(finite),
        trace: &solution.trace,
    };
    serde_json::to_string(&doc).expect("solution document serializes")
}

pub fn assignment_json(assignment: &Assignment) -> String {
    serde_json::to_string(&entries(assignment)).expect("assignment serializes")
}

#[derive(Serialize)]
struct OracleDoc<'a> {
    team: &'a [UserId],
    cost: Option<f64>,
    model: &'a str,
}

/// Reference optimum as `{"team":[...],"cost":x,"model":"..."}`.
pub fn oracle_json(team: &[UserId], cost: f64, model: &str) -> String {
    serde_json::to_string(&OracleDoc {
        team,
        cost: finite(cost),
        model,
    })
    .expect("oracle document serializes")
}

pub fn outcome_text(outcome: &Outcome) -> String {
    match outcome {
        Outcome::Solved(s) => solution_json(s),
        Outcome::Infeasible { deficit, .. } => format!("INFEASIBLE deficit={deficit}"),
    }
}
