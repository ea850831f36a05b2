use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use teamform::bench::{generate, parse_spec_file, run_experiments, BenchOptions, BenchSolver};
use teamform::feasibility::{is_feasible, min_infeasibility_certificate};
use teamform::io::{assignment_json, load_network, load_task, oracle_json, outcome_text, parse_users, save_instance};
use teamform::oracle::{exact_feasible, exact_min_diameter, exact_min_steiner, MAX_USERS};
use teamform::transforms::solve;
use teamform::{CostKind, CostModel, Error, Outcome, Pricing, SocialNetwork, UserId};

const EXIT_INVALID: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(name = "teamform", version, about = "Capacitated team formation on social networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Diameter,
    Steiner,
}

impl From<Model> for CostKind {
    fn from(m: Model) -> Self {
        match m {
            Model::Diameter => CostKind::Diameter,
            Model::Steiner => CostKind::Steiner,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleModel {
    Diameter,
    Steiner,
    Feasible,
}

#[derive(clap::Args)]
struct InstanceArgs {
    /// Edge list, one `u v w` per line
    #[arg(long)]
    graph: PathBuf,
    /// User list, one `id capacity [price] items` per line
    #[arg(long)]
    users: PathBuf,
    /// Requirements, one `item units` per line
    #[arg(long)]
    task: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Find a team covering the task
    Solve {
        #[arg(long, value_enum)]
        model: Model,
        #[command(flatten)]
        instance: InstanceArgs,
        /// Weight of the price term; enables the priced pipeline with --beta
        #[arg(long, requires = "beta")]
        alpha: Option<f64>,
        /// Weight of the collaboration term
        #[arg(long, requires = "alpha")]
        beta: Option<f64>,
    },
    /// Check whether a candidate set can cover the task
    Feasible {
        #[arg(long)]
        users: PathBuf,
        #[arg(long)]
        task: PathBuf,
        /// Comma-separated user ids; all users when omitted
        #[arg(long, value_delimiter = ',')]
        candidates: Option<Vec<u32>>,
    },
    /// Exhaustive reference solvers for small instances
    Oracle {
        #[arg(long, value_enum)]
        model: OracleModel,
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, default_value_t = MAX_USERS)]
        max_team_size: usize,
        /// Candidate ids for `--model feasible`; all users when omitted
        #[arg(long, value_delimiter = ',')]
        candidates: Option<Vec<u32>>,
    },
    /// Generate synthetic instances from a spec file
    Gen {
        #[arg(long)]
        spec: PathBuf,
        /// Output directory; files are named instance-NNN.{graph,users,task}
        #[arg(long)]
        out_prefix: PathBuf,
    },
    /// Run every solver over generated instances and write a CSV
    Bench {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Comma-separated solver names
        #[arg(long, value_delimiter = ',', default_value = "diameter,steiner,baseline")]
        solvers: Vec<BenchSolver>,
        /// Write 0 in the ms column so the CSV is reproducible
        #[arg(long)]
        no_timing: bool,
    },
}

enum Failure {
    Lib(Error),
    Infeasible,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn read_spec(path: &Path) -> Result<Vec<teamform::bench::GeneratorSpec>, Error> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_spec_file(&path.display().to_string(), &text)
}

fn candidates_or_all(net: &SocialNetwork, given: Option<Vec<u32>>) -> Result<Vec<UserId>, Error> {
    match given {
        None => Ok(net.user_ids().collect()),
        Some(ids) => ids
            .into_iter()
            .map(|i| {
                net.check_user(UserId(i))?;
                Ok(UserId(i))
            })
            .collect(),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve {
            model,
            instance,
            alpha,
            beta,
        } => {
            let net = load_network(&instance.graph, &instance.users)?;
            let task = load_task(&instance.task)?;
            let model = match (alpha, beta) {
                (Some(a), Some(b)) => CostModel::priced(model.into(), Pricing::new(a, b)?),
                _ => CostModel::plain(model.into()),
            };
            let outcome = solve(&net, &task, &model)?;
            println!("{}", outcome_text(&outcome));
            if matches!(outcome, Outcome::Infeasible { .. }) {
                return Err(Failure::Infeasible);
            }
        }
        Command::Feasible {
            users,
            task,
            candidates,
        } => {
            let text = fs::read_to_string(&users).map_err(|source| Error::Io {
                path: users.clone(),
                source,
            })?;
            let net = SocialNetwork::try_new(parse_users(&users.display().to_string(), &text)?, Vec::new())?;
            let task = load_task(&task)?;
            let cands = candidates_or_all(&net, candidates)?;
            match is_feasible(&task, &cands, net.users()) {
                (true, Some(a)) => {
                    println!("FEASIBLE");
                    println!("{}", assignment_json(&a));
                }
                _ => println!(
                    "INFEASIBLE deficit={}",
                    min_infeasibility_certificate(&task, &cands, net.users())
                ),
            }
        }
        Command::Oracle {
            model,
            instance,
            max_team_size,
            candidates,
        } => {
            let net = load_network(&instance.graph, &instance.users)?;
            let task = load_task(&instance.task)?;
            let (best, name) = match model {
                OracleModel::Feasible => {
                    let cands = candidates_or_all(&net, candidates)?;
                    let ok = exact_feasible(&task, &cands, net.users())?;
                    println!("{}", if ok { "FEASIBLE" } else { "INFEASIBLE" });
                    return Ok(());
                }
                OracleModel::Diameter => (exact_min_diameter(&net, &task, max_team_size)?, "diameter"),
                OracleModel::Steiner => (exact_min_steiner(&net, &task, max_team_size)?, "steiner"),
            };
            match best {
                Some((team, cost)) => println!("{}", oracle_json(&team, cost, name)),
                None => {
                    println!("INFEASIBLE");
                    return Err(Failure::Infeasible);
                }
            }
        }
        Command::Gen { spec, out_prefix } => {
            let specs = read_spec(&spec)?;
            fs::create_dir_all(&out_prefix).map_err(|source| Error::Io {
                path: out_prefix.clone(),
                source,
            })?;
            for (i, s) in specs.iter().enumerate() {
                let inst = generate(s)?;
                let prefix = out_prefix.join(format!("instance-{i:03}"));
                save_instance(&prefix, &inst.network, &inst.task)?;
                println!("{}", prefix.display());
            }
        }
        Command::Bench {
            spec,
            out,
            solvers,
            no_timing,
        } => {
            let specs = read_spec(&spec)?;
            let opts = BenchOptions {
                record_time: !no_timing,
            };
            let rows = run_experiments(&specs, &solvers, &out, opts)?;
            eprintln!("wrote {} rows to {}", rows.len(), out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Infeasible) => ExitCode::from(EXIT_INFEASIBLE),
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            match e {
                Error::Io { .. } => ExitCode::from(EXIT_IO),
                Error::Csv(ref c) if c.is_io_error() => ExitCode::from(EXIT_IO),
                _ => ExitCode::from(EXIT_INVALID),
            }
        }
    }
}
