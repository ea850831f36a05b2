use std::fs::File;
use std::io::Write;
use std::path::Path;

use super::baseline::baseline_uncapacitated;
use super::generate::{generate, GeneratorSpec};
use crate::diameter::solve_diameter;
use crate::error::{Error, Result};
use crate::steiner::solve_steiner;
use crate::task::{CostKind, Outcome};

pub const CSV_HEADER: [&str; 10] = [
    "instance",
    "seed",
    "n",
    "k",
    "total_units",
    "solver",
    "cost",
    "feasible",
    "flow_calls",
    "ms",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum BenchSolver {
    Diameter,
    Steiner,
    /// Baseline team, cost measured as diameter.
    Baseline,
    /// Baseline team, cost measured as Steiner tree.
    BaselineSteiner,
}

impl BenchSolver {
    pub const ALL: [BenchSolver; 4] = [
        BenchSolver::Diameter,
        BenchSolver::Steiner,
        BenchSolver::Baseline,
        BenchSolver::BaselineSteiner,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BenchSolver::Diameter => "diameter",
            BenchSolver::Steiner => "steiner",
            BenchSolver::Baseline => "baseline",
            BenchSolver::BaselineSteiner => "baseline-steiner",
        }
    }

    fn run(self, instance: &super::Instance) -> Outcome {
        let (net, task) = (&instance.network, &instance.task);
        match self {
            BenchSolver::Diameter => solve_diameter(net, task),
            BenchSolver::Steiner => solve_steiner(net, task),
            BenchSolver::Baseline => baseline_uncapacitated(net, task, CostKind::Diameter),
            BenchSolver::BaselineSteiner => baseline_uncapacitated(net, task, CostKind::Steiner),
        }
    }
}

impl std::str::FromStr for BenchSolver {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        BenchSolver::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| format!("unknown solver `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BenchOptions {
    /// When false the `ms` column is written as 0 so output is byte-stable.
    pub record_time: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentRow {
    pub instance: usize,
    pub seed: u64,
    pub n: usize,
    pub k: usize,
    pub total_units: u64,
    pub solver: &'static str,
    /// `None` when infeasible; may be infinite for disconnected teams.
    pub cost: Option<f64>,
    pub feasible: bool,
    pub flow_calls: u64,
    pub ms: f64,
}

impl ExperimentRow {
    fn record(&self) -> [String; 10] {
        let cost = match self.cost {
            None => String::new(),
            Some(c) if c.is_infinite() => "inf".to_string(),
            Some(c) => c.to_string(),
        };
        [
            self.instance.to_string(),
            self.seed.to_string(),
            self.n.to_string(),
            self.k.to_string(),
            self.total_units.to_string(),
            self.solver.to_string(),
            cost,
            self.feasible.to_string(),
            self.flow_calls.to_string(),
            format!("{:.3}", self.ms),
        ]
    }
}

/// One row per (instance, solver), sorted by instance then solver name.
pub fn run_instances(
    specs: &[GeneratorSpec],
    solvers: &[BenchSolver],
    opts: BenchOptions,
) -> Result<Vec<ExperimentRow>> {
    let mut rows = Vec::with_capacity(specs.len() * solvers.len());
    for (idx, spec) in specs.iter().enumerate() {
        let instance = generate(spec)?;
        for &solver in solvers {
            let outcome = solver.run(&instance);
            let (cost, feasible, ms) = match &outcome {
                Outcome::Solved(s) => (Some(s.cost), true, s.stats.elapsed.as_secs_f64() * 1e3),
                Outcome::Infeasible { .. } => (None, false, 0.0),
            };
            rows.push(ExperimentRow {
                instance: idx,
                seed: spec.seed,
                n: spec.n,
                k: instance.task.k(),
                total_units: instance.task.total_units(),
                solver: solver.name(),
                cost,
                feasible,
                flow_calls: outcome.flow_calls(),
                ms: if opts.record_time { ms } else { 0.0 },
            });
        }
    }
    rows.sort_by(|a, b| a.instance.cmp(&b.instance).then(a.solver.cmp(b.solver)));
    Ok(rows)
}

pub fn write_csv<W: Write>(rows: &[ExperimentRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.write_record(row.record())?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

pub fn run_experiments(
    specs: &[GeneratorSpec],
    solvers: &[BenchSolver],
    output: &Path,
    opts: BenchOptions,
) -> Result<Vec<ExperimentRow>> {
    let rows = run_instances(specs, solvers, opts)?;
    let file = File::create(output).map_err(|e| Error::io(output, e))?;
    write_csv(&rows, file).map_err(|e| match e {
        Error::Csv(c) if c.is_io_error() => match c.into_kind() {
            csv::ErrorKind::Io(io) => Error::io(output, io),
            _ => unreachable!(),
        },
        other => other,
    })?;
    Ok(rows)
}

/// Parses instance groups: `key=value` lines, groups separated by blank
/// lines. `count=N` expands a group into N instances with consecutive seeds
/// starting at `seed`.
pub fn parse_spec_file(source: &str, text: &str) -> Result<Vec<GeneratorSpec>> {
    let mut out = Vec::new();
    let mut group: Vec<(usize, &str)> = Vec::new();
    let lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    for (line, l) in lines.chain(std::iter::once((0, ""))) {
        if l.starts_with('#') {
            continue;
        }
        if l.is_empty() {
            if !group.is_empty() {
                expand_group(source, &group, &mut out)?;
                group.clear();
            }
            continue;
        }
        group.push((line, l));
    }
    Ok(out)
}

fn expand_group(source: &str, group: &[(usize, &str)], out: &mut Vec<GeneratorSpec>) -> Result<()> {
    let mut spec = GeneratorSpec::default();
    let mut count = 1u64;
    for &(line, l) in group {
        let err = |msg: String| Error::Parse {
            path: source.to_string(),
            line,
            msg,
        };
        let (key, value) = l
            .split_once('=')
            .ok_or_else(|| err(format!("expected key=value, got `{l}`")))?;
        let (key, value) = (key.trim(), value.trim());
        fn num<T: std::str::FromStr>(v: &str) -> std::result::Result<T, String> {
            v.parse().map_err(|_| format!("bad number `{v}`"))
        }
        let res: std::result::Result<(), String> = (|| {
            match key {
                "kind" => spec.kind = value.parse()?,
                "n" => spec.n = num(value)?,
                "density" => spec.density = num(value)?,
                "exponent" => spec.exponent = num(value)?,
                "weights" => spec.weights = value.parse()?,
                "items" => spec.items = num(value)?,
                "skills_min" => spec.skills_min = num(value)?,
                "skills_max" => spec.skills_max = num(value)?,
                "cap_min" => spec.cap_min = num(value)?,
                "cap_max" => spec.cap_max = num(value)?,
                "price_min" => spec.price_min = num(value)?,
                "price_max" => spec.price_max = num(value)?,
                "k" => spec.k = num(value)?,
                "units_max" => spec.units_max = num(value)?,
                "seed" => spec.seed = num(value)?,
                "count" => count = num(value)?,
                other => return Err(format!("unknown key `{other}`")),
            }
            Ok(())
        })();
        res.map_err(err)?;
    }
    if spec.n == 0 {
        return Err(Error::Parse {
            path: source.to_string(),
            line: group[0].0,
            msg: "n must be at least 1".to_string(),
        });
    }
    for i in 0..count {
        out.push(GeneratorSpec {
            seed: spec.seed.wrapping_add(i),
            ..spec.clone()
        });
    }
    Ok(())
}
