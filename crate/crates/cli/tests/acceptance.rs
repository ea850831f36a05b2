//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use teamform::bench::{
    baseline_uncapacitated, generate, run_experiments, run_instances, write_csv, BenchOptions, BenchSolver,
    GeneratorSpec, GraphKind, WeightDist,
};
use teamform::diameter::{solve_diameter, solve_diameter_with, AnchorSearch};
use teamform::feasibility::is_feasible;
use teamform::io::{format_edges, format_task, format_users, load_network, load_task, outcome_text, solution_json};
use teamform::oracle::{exact_feasible, exact_min_diameter, exact_min_steiner};
use teamform::steiner::solve_steiner;
use teamform::task::check_assignment;
use teamform::transforms::{apply_price_transform, invert_price_transform, solve, solve_multiunit};
use teamform::{
    graph::{shortest_path_distances, Edge},
    CostKind, CostModel, ItemId, Outcome, Pricing, SocialNetwork, Task, User, UserId,
};

/// Frozen after one calibration pass over 40,000 instances drawn like the
/// criterion-4 corpus (seeds 101 and 202), whose worst scaled ratio was 5.33.
/// The greedy's first pick ignores distance, so ratios up to ~20 occur.
const STEINER_ENVELOPE_C: f64 = 6.0;
const TOL: f64 = 1e-9;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn ids(n: usize) -> Vec<UserId> {
    (0..n).map(UserId::from).collect()
}

/// Random network on `n` users. `connected` adds a random spanning tree
/// first. Weights are multiples of 1/4.
fn random_network(
    rng: &mut ChaCha8Rng,
    n: usize,
    items: u32,
    cap_max: u32,
    connected: bool,
    priced: bool,
) -> SocialNetwork {
    let mut edges = Vec::new();
    let mut push = |a: usize, b: usize, rng: &mut ChaCha8Rng| {
        edges.push(Edge {
            a: UserId::from(a),
            b: UserId::from(b),
            weight: f64::from(rng.gen_range(1..=8u32)) / 4.0,
        })
    };
    if connected {
        for v in 1..n {
            let u = rng.gen_range(0..v);
            push(u, v, rng);
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(0.25) {
                push(a, b, rng);
            }
        }
    }
    let users = (0..n)
        .map(|id| {
            let skills: Vec<ItemId> = (0..items).filter(|_| rng.gen_bool(0.45)).map(ItemId).collect();
            let cap = rng.gen_range(1..=cap_max);
            let price = if priced {
                f64::from(rng.gen_range(0..=16u32)) / 4.0
            } else {
                0.0
            };
            User::new(id, skills, cap).with_price(price)
        })
        .collect();
    SocialNetwork::try_new(users, dedup_edges(edges)).expect("generated network is valid")
}

/// Keeps the first edge of every unordered pair.
fn dedup_edges(edges: Vec<Edge>) -> Vec<Edge> {
    let mut seen = std::collections::BTreeSet::new();
    edges
        .into_iter()
        .filter(|e| seen.insert((e.a.min(e.b), e.a.max(e.b))))
        .collect()
}

fn random_task(rng: &mut ChaCha8Rng, items: u32, k_max: usize, units_max: u32) -> Task {
    let mut pool: Vec<u32> = (0..items).collect();
    pool.shuffle(rng);
    let k = rng.gen_range(1..=k_max.min(items as usize));
    Task::new(pool[..k].iter().map(|&i| (ItemId(i), rng.gen_range(1..=units_max)))).expect("valid task")
}

struct Instance {
    net: SocialNetwork,
    task: Task,
}

/// Connected, coverable instances with at most 10 users and 4 items; every
/// other instance is unit-demand.
fn corpus(seed: u64, count: usize, keep: impl Fn(&Task) -> bool) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.gen_range(2..=10);
        let items = rng.gen_range(1..=4);
        let net = random_network(&mut rng, n, items, 3, true, false);
        let units_max = if out.len() % 2 == 0 { 1 } else { 3 };
        let task = random_task(&mut rng, items, 4, units_max);
        if keep(&task) && is_feasible(&task, &ids(n), net.users()).0 {
            out.push(Instance { net, task });
        }
    }
    out
}

type Check<'a> = dyn FnMut(&Task, &[UserId], &[User]) + 'a;

// Criteria 1 and 2.
fn flow_equivalence() -> (Verdict, Verdict) {
    let clock = Instant::now();
    let mut checked = 0u64;
    let mut disagreements = 0u64;
    let mut witnesses = 0u64;
    let mut violations = 0u64;
    let mut check = |task: &Task, cands: &[UserId], users: &[User]| {
        let (ok, assignment) = is_feasible(task, cands, users);
        let exact = exact_feasible(task, cands, users).expect("within oracle limits");
        checked += 1;
        if ok != exact {
            disagreements += 1;
        }
        if ok {
            witnesses += 1;
            match assignment {
                Some(a)
                    if check_assignment(task, users, &a).is_empty() && a.users().iter().all(|u| cands.contains(u)) => {}
                _ => violations += 1,
            }
        }
    };

    // Exhaustive grid: user types are (skill subset of 3 items, capacity
    // 0..=2); candidate sets are multisets of at most 5 types, tasks are all
    // unit vectors in {0,1,2}^3.
    let types: Vec<(u32, u32)> = (0..8).flat_map(|mask| (0..=2).map(move |cap| (mask, cap))).collect();
    let tasks: Vec<Task> = (0..27u32)
        .map(|code| {
            let units = [code % 3, code / 3 % 3, code / 9];
            Task::new((0..3).filter(|&i| units[i] > 0).map(|i| (ItemId(i as u32), units[i]))).unwrap()
        })
        .collect();
    let mut grid = 0u64;
    let mut stack: Vec<usize> = Vec::new();
    fn visit(
        types: &[(u32, u32)],
        tasks: &[Task],
        stack: &mut Vec<usize>,
        start: usize,
        grid: &mut u64,
        check: &mut Check<'_>,
    ) {
        let users: Vec<User> = stack
            .iter()
            .enumerate()
            .map(|(id, &t)| {
                let (mask, cap) = types[t];
                User::new(id, (0..3).filter(|b| mask >> b & 1 == 1).map(ItemId), cap)
            })
            .collect();
        let cands = ids(users.len());
        for task in tasks {
            check(task, &cands, &users);
            *grid += 1;
        }
        if stack.len() == 5 {
            return;
        }
        for t in start..types.len() {
            stack.push(t);
            visit(types, tasks, stack, t, grid, check);
            stack.pop();
        }
    }
    visit(&types, &tasks, &mut stack, 0, &mut grid, &mut check);

    // Random instances: up to 10 users, candidate subsets of at most 8.
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let random = 12_000;
    for _ in 0..random {
        let n = rng.gen_range(1..=10);
        let items = rng.gen_range(1..=4);
        let users: Vec<User> = (0..n)
            .map(|id| {
                let skills: Vec<ItemId> = (0..items).filter(|_| rng.gen_bool(0.5)).map(ItemId).collect();
                User::new(id, skills, rng.gen_range(0..=3))
            })
            .collect();
        let mut cands = ids(n);
        cands.shuffle(&mut rng);
        cands.truncate(rng.gen_range(0..=8.min(n)));
        let task = random_task(&mut rng, items, 4, 3);
        check(&task, &cands, &users);
    }
    let elapsed = clock.elapsed();
    let c1 = verdict(
        disagreements == 0 && elapsed < Duration::from_secs(60),
        format!(
            "{checked} instances ({grid} grid, {random} random), {disagreements} disagreements, {:.1}s",
            elapsed.as_secs_f64()
        ),
    );
    let c2 = verdict(
        violations == 0 && witnesses > 0,
        format!("{witnesses} feasible verdicts, {violations} invalid assignments"),
    );
    (c1, c2)
}

fn diameter_ratio() -> Verdict {
    let clock = Instant::now();
    let instances = corpus(3, 1000, |_| true);
    let mut violations = 0;
    let mut worst: f64 = 1.0;
    for inst in &instances {
        let sol = solve_diameter(&inst.net, &inst.task).into_solution().expect("feasible");
        let (_, opt) = exact_min_diameter(&inst.net, &inst.task, inst.net.len())
            .unwrap()
            .expect("feasible");
        if sol.cost.is_nan() || sol.cost > 2.0 * opt + TOL {
            violations += 1;
        }
        if opt > 0.0 {
            worst = worst.max(sol.cost / opt);
        }
    }
    let elapsed = clock.elapsed();
    let multi = instances.iter().filter(|i| !i.task.is_unit_demand()).count();
    verdict(
        violations == 0 && elapsed < Duration::from_secs(120),
        format!(
            "{} instances ({multi} multi-unit), {violations} violations, worst ratio {worst:.3}, {:.2}s",
            instances.len(),
            elapsed.as_secs_f64()
        ),
    )
}

fn steiner_ratio() -> Verdict {
    let instances = corpus(3, 1000, |t| t.k() <= 3 && t.total_units() <= 5);
    let mut worst_ratio: f64 = 1.0;
    let mut worst_scaled: f64 = 0.0;
    let mut outside = 0;
    for inst in &instances {
        let sol = solve_steiner(&inst.net, &inst.task).into_solution().expect("feasible");
        let (_, opt) = exact_min_steiner(&inst.net, &inst.task, inst.net.len())
            .unwrap()
            .expect("feasible");
        let ratio = if opt == 0.0 {
            if sol.cost == 0.0 {
                1.0
            } else {
                f64::INFINITY
            }
        } else {
            sol.cost / opt
        };
        let size = (inst.task.k() as f64 * inst.task.total_units() as f64).max(2.0);
        let unit = 1.0 + size.log2();
        if !ratio.is_finite() || ratio > STEINER_ENVELOPE_C * unit + TOL {
            outside += 1;
        }
        worst_ratio = worst_ratio.max(ratio);
        worst_scaled = worst_scaled.max(ratio / unit);
    }
    verdict(
        outside == 0,
        format!(
            "{} instances, worst ratio {worst_ratio:.4}, worst ratio/(1+log2(k*units)) {worst_scaled:.4}, envelope c={STEINER_ENVELOPE_C}, {outside} outside",
            instances.len()
        ),
    )
}

fn price_transform() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let count = 600;
    let mut bad_dist = 0;
    let mut bad_trip = 0;
    let mut pairs = 0;
    for _ in 0..count {
        let n = rng.gen_range(1..=10);
        let connected = rng.gen_bool(0.7);
        let net = random_network(&mut rng, n, 4, 3, connected, true);
        let alpha = f64::from(rng.gen_range(1..=8u32)) / 4.0;
        let beta = f64::from(rng.gen_range(1..=8u32)) / 4.0;
        let t = apply_price_transform(&net, alpha, beta).unwrap();
        let base = shortest_path_distances(&net, None);
        let shadows = t.user_map.clone();
        let moved = shortest_path_distances(&t.network, Some(&shadows));
        for u in net.user_ids() {
            for v in net.user_ids().filter(|&v| v != u) {
                pairs += 1;
                let want = alpha * net.user(u).price + alpha * net.user(v).price + beta * base.get(u, v);
                let got = moved.get(shadows[u.index()], shadows[v.index()]);
                let same = if want.is_finite() {
                    (got - want).abs() <= TOL
                } else {
                    got == want
                };
                if !same {
                    bad_dist += 1;
                }
            }
        }
        if invert_price_transform(&t).unwrap() != net {
            bad_trip += 1;
        }
    }
    verdict(
        bad_dist == 0 && bad_trip == 0,
        format!("{count} priced instances, {pairs} shadow pairs, {bad_dist} distance mismatches, {bad_trip} round-trip mismatches"),
    )
}

fn multiunit_identity() -> Verdict {
    let instances = corpus(3, 1000, |_| true);
    let mut compared = 0;
    let mut mismatches = 0;
    for inst in instances.iter().filter(|i| i.task.is_unit_demand()) {
        for kind in [CostKind::Diameter, CostKind::Steiner] {
            let base = match kind {
                CostKind::Diameter => solve_diameter(&inst.net, &inst.task),
                CostKind::Steiner => solve_steiner(&inst.net, &inst.task),
            };
            let via = solve_multiunit(&inst.net, &inst.task, kind);
            compared += 1;
            let same = match (&base, &via) {
                (Outcome::Solved(a), Outcome::Solved(b)) => {
                    solution_json(a) == solution_json(b) && a.cost.to_bits() == b.cost.to_bits()
                }
                _ => outcome_text(&base) == outcome_text(&via),
            };
            if !same {
                mismatches += 1;
            }
        }
    }
    verdict(
        mismatches == 0,
        format!("{compared} unit-demand runs, {mismatches} mismatches"),
    )
}

/// Every solver and oracle on a fixed instance, rendered to text.
fn fingerprint(inst: &Instance) -> String {
    let (net, task) = (&inst.net, &inst.task);
    let mut out = String::new();
    let outcomes = [
        solve_diameter_with(net, task, AnchorSearch::Linear),
        solve_diameter_with(net, task, AnchorSearch::Bisect),
        solve_steiner(net, task),
        solve_multiunit(net, task, CostKind::Diameter),
        solve_multiunit(net, task, CostKind::Steiner),
        baseline_uncapacitated(net, task, CostKind::Diameter),
        baseline_uncapacitated(net, task, CostKind::Steiner),
    ];
    for o in &outcomes {
        let _ = writeln!(out, "{}", outcome_text(o));
    }
    let pricing = Pricing::new(0.5, 1.25).unwrap();
    for kind in [CostKind::Diameter, CostKind::Steiner] {
        let o = solve(net, task, &CostModel::priced(kind, pricing)).unwrap();
        let _ = writeln!(out, "{}", outcome_text(&o));
    }
    let cands: Vec<UserId> = net.user_ids().take(8).collect();
    if task.total_units() <= 12 {
        let _ = writeln!(out, "{}", exact_feasible(task, &cands, net.users()).unwrap());
    }
    let _ = writeln!(out, "{:?}", exact_min_diameter(net, task, net.len()).unwrap());
    let _ = writeln!(out, "{:?}", exact_min_steiner(net, task, net.len()).unwrap());
    out
}

fn bench_specs(count: u64, n: usize) -> Vec<GeneratorSpec> {
    let kinds = [GraphKind::UniformRandom, GraphKind::PowerLaw, GraphKind::Grid];
    (0..count)
        .map(|seed| {
            let kind = kinds[(seed % 3) as usize];
            GeneratorSpec {
                kind,
                n,
                density: match kind {
                    GraphKind::PowerLaw => 0.15,
                    _ => 0.12,
                },
                weights: WeightDist::Uniform,
                items: 10,
                skills_min: 1,
                skills_max: 3,
                cap_min: 1,
                cap_max: 2,
                k: 4,
                units_max: 2,
                seed,
                ..GeneratorSpec::default()
            }
        })
        .collect()
}

fn determinism() -> Verdict {
    let instances = corpus(17, 40, |_| true);
    let specs = bench_specs(12, 20);
    let tmp = tempfile::tempdir().unwrap();
    let spec_file = tmp.path().join("spec.txt");
    fs::write(
        &spec_file,
        "kind=power-law-degree\nn=25\nweights=uniform\nunits_max=2\ncount=6\n",
    )
    .unwrap();

    let run_once = |round: usize| -> Vec<u8> {
        let mut bytes = Vec::new();
        for inst in &instances {
            bytes.extend(fingerprint(inst).into_bytes());
        }
        for spec in &specs {
            let g = generate(spec).unwrap();
            bytes.extend(format_edges(&g.network).into_bytes());
            bytes.extend(format_users(&g.network).into_bytes());
            bytes.extend(format_task(&g.task).into_bytes());
        }
        let rows = run_instances(&specs, &BenchSolver::ALL, BenchOptions::default()).unwrap();
        write_csv(&rows, &mut bytes).unwrap();
        let csv = tmp.path().join(format!("bench-{round}.csv"));
        let status = Command::new(env!("CARGO_BIN_EXE_teamform"))
            .args(["bench", "--no-timing", "--spec"])
            .arg(&spec_file)
            .arg("--out")
            .arg(&csv)
            .status()
            .unwrap();
        assert!(status.success());
        bytes.extend(fs::read(&csv).unwrap());
        bytes
    };
    let runs: Vec<Vec<u8>> = (0..3).map(run_once).collect();
    let same = runs.windows(2).all(|w| w[0] == w[1]);
    verdict(
        same,
        format!(
            "3 runs over {} instances, {} generated specs and the bench CLI, {} bytes each",
            instances.len(),
            specs.len(),
            runs[0].len()
        ),
    )
}

fn bench_comparison() -> Verdict {
    let clock = Instant::now();
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("bench.csv");
    let specs = bench_specs(200, 40);
    run_experiments(
        &specs,
        &[BenchSolver::Diameter, BenchSolver::Baseline],
        &path,
        BenchOptions::default(),
    )
    .unwrap();
    let text = fs::read_to_string(&path).unwrap();

    // instance -> (diameter cost, baseline cost)
    let mut costs: std::collections::BTreeMap<usize, [Option<f64>; 2]> = Default::default();
    for line in text.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let slot = match f[5] {
            "diameter" => 0,
            "baseline" => 1,
            _ => continue,
        };
        let cost = match f[6] {
            "" | "inf" => None,
            c => Some(c.parse::<f64>().unwrap()),
        };
        costs.entry(f[0].parse().unwrap()).or_default()[slot] = cost;
    }
    let paired: Vec<(f64, f64)> = costs.values().filter_map(|c| Some((c[0]?, c[1]?))).collect();
    let m = paired.len() as f64;
    let ours = paired.iter().map(|p| p.0).sum::<f64>() / m;
    let theirs = paired.iter().map(|p| p.1).sum::<f64>() / m;
    let elapsed = clock.elapsed();
    verdict(
        !paired.is_empty() && ours <= theirs && elapsed < Duration::from_secs(300),
        format!(
            "{} instances, {} with finite costs, mean diameter {ours:.4} vs baseline {theirs:.4}, {:.2}s",
            specs.len(),
            paired.len(),
            elapsed.as_secs_f64()
        ),
    )
}

fn cli_contract() -> Verdict {
    let bin = env!("CARGO_BIN_EXE_teamform");
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let mut failures: Vec<String> = Vec::new();
    let mut goldens = 0;
    let run = |args: &[&str]| Command::new(bin).args(args).output().unwrap();

    for inst in ["path", "triangle", "split"] {
        let dir = fixtures.join(inst);
        let p = |f: &str| dir.join(f).display().to_string();
        let (graph, users, task) = (p("graph.txt"), p("users.txt"), p("task.txt"));
        let mut cases: Vec<(Vec<&str>, String)> = Vec::new();
        for model in ["diameter", "steiner"] {
            cases.push((
                vec![
                    "solve", "--model", model, "--graph", &graph, "--users", &users, "--task", &task,
                ],
                format!("solve-{model}.json"),
            ));
        }
        cases.push((
            vec!["feasible", "--users", &users, "--task", &task],
            "feasible.txt".into(),
        ));
        cases.push((
            vec![
                "oracle", "--model", "diameter", "--graph", &graph, "--users", &users, "--task", &task,
            ],
            "oracle-diameter.json".into(),
        ));
        for (args, golden) in cases {
            goldens += 1;
            let out = run(&args);
            let want = fs::read(dir.join(&golden)).unwrap();
            if !out.status.success() || out.stdout != want {
                failures.push(format!("{inst}/{golden}"));
            }
        }
    }

    // gen output parses back and re-serialises to the same bytes.
    let tmp = tempfile::tempdir().unwrap();
    let spec = tmp.path().join("spec.txt");
    fs::write(
        &spec,
        "kind=grid\nn=9\nweights=uniform\nprice_max=4\nunits_max=2\ncount=3\n",
    )
    .unwrap();
    let gen_dir = tmp.path().join("gen");
    if !run(&[
        "gen",
        "--spec",
        spec.to_str().unwrap(),
        "--out-prefix",
        gen_dir.to_str().unwrap(),
    ])
    .status
    .success()
    {
        failures.push("gen".into());
    }
    for i in 0..3 {
        let p = |ext: &str| gen_dir.join(format!("instance-{i:03}.{ext}"));
        let net = load_network(&p("graph"), &p("users"));
        let task = load_task(&p("task"));
        match (net, task) {
            (Ok(net), Ok(task)) => {
                let same = fs::read_to_string(p("graph")).unwrap() == format_edges(&net)
                    && fs::read_to_string(p("users")).unwrap() == format_users(&net)
                    && fs::read_to_string(p("task")).unwrap() == format_task(&task);
                if !same {
                    failures.push(format!("gen round trip {i}"));
                }
                let (g, u, t) = (p("graph"), p("users"), p("task"));
                let out = run(&[
                    "solve",
                    "--model",
                    "diameter",
                    "--graph",
                    g.to_str().unwrap(),
                    "--users",
                    u.to_str().unwrap(),
                    "--task",
                    t.to_str().unwrap(),
                ]);
                if !out.status.success() {
                    failures.push(format!("solve on generated {i}"));
                }
            }
            _ => failures.push(format!("gen parse {i}")),
        }
    }

    let csv = tmp.path().join("bench.csv");
    let out = run(&[
        "bench",
        "--no-timing",
        "--spec",
        spec.to_str().unwrap(),
        "--out",
        csv.to_str().unwrap(),
    ]);
    let header_ok = fs::read_to_string(&csv)
        .map(|t| {
            t.starts_with("instance,seed,n,k,total_units,solver,cost,feasible,flow_calls,ms\n")
                && t.lines().count() == 10
        })
        .unwrap_or(false);
    if !out.status.success() || !header_ok {
        failures.push("bench".into());
    }

    verdict(
        failures.is_empty(),
        if failures.is_empty() {
            format!("{goldens} golden outputs byte-exact, gen/solve/bench round trips ok")
        } else {
            format!("failures: {}", failures.join(", "))
        },
    )
}

fn main() {
    let (c1, c2) = flow_equivalence();
    let results = [
        ("flow matches exact feasibility", c1),
        ("feasible verdicts carry valid assignments", c2),
        ("diameter within twice optimal", diameter_ratio()),
        ("steiner ratio inside log envelope", steiner_ratio()),
        ("price transform algebra", price_transform()),
        ("multi-unit path identical on unit demand", multiunit_identity()),
        ("deterministic outputs", determinism()),
        ("diameter solver beats baseline on average", bench_comparison()),
        ("cli golden round trip", cli_contract()),
    ];
    let mut failed = 0;
    for (i, (name, v)) in results.iter().enumerate() {
        println!(
            "{} criterion {}: {name}: {}",
            if v.pass { "PASS" } else { "FAIL" },
            i + 1,
            v.detail
        );
        failed += usize::from(!v.pass);
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
