use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use aweno::bench::{
    convergence_study, default_stem, efficiency_report, emit_snapshot, format_convergence_table,
    format_efficiency_table, run, RunConfig,
};
use aweno::error::Error;
use aweno::lcd::{ConMatvec, LcdBackend};
use aweno::problems::{catalog, ProblemId};
use aweno::weno::WenoOrder;

#[derive(Parser)]
#[command(name = "aweno", version, about = "A-WENO finite difference solver for the Euler equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Advance one problem to its end time and write the final field.
    Run(RunArgs),
    /// Refinement study on a problem with an exact solution.
    Converge {
        #[command(flatten)]
        args: RunArgs,
        /// Grid sizes, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "20,40,80,160")]
        ns: Vec<usize>,
    },
    /// Time uniform-flow steps and report eigenmatrix multiplication counts.
    Bench {
        /// Orders, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "5,7,9")]
        orders: Vec<u32>,
        #[arg(long)]
        two_d: bool,
        /// Cells per direction.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 10)]
        steps: u64,
        /// Use the sparse split evaluation for CH-CON.
        #[arg(long)]
        split_xi: bool,
        #[arg(long)]
        json: bool,
    },
    /// List the available problems.
    ListProblems,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    problem: Option<String>,
    #[arg(long)]
    order: Option<u32>,
    #[arg(long)]
    backend: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    nx: Option<usize>,
    #[arg(long)]
    ny: Option<usize>,
    #[arg(long)]
    cfl: Option<f64>,
    #[arg(long)]
    tend: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    no_pp_interp: bool,
    #[arg(long)]
    no_pp_flux: bool,
    #[arg(long)]
    accuracy_mode: bool,
    #[arg(long)]
    h0: Option<f64>,
    /// Use the reduced grid when no size is given.
    #[arg(long)]
    desk: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

impl RunArgs {
    fn to_config(&self) -> Result<RunConfig, Error> {
        let mut cfg = RunConfig::new(ProblemId::Sod, WenoOrder::Five, LcdBackend::ChRi);
        if let Some(path) = &self.config {
            cfg.apply_file(path)?;
        }
        let mut set = |k: &str, v: Option<String>| v.map_or(Ok(()), |v| cfg.set(k, &v));
        set("problem", self.problem.clone())?;
        set("order", self.order.map(|v| v.to_string()))?;
        set("backend", self.backend.clone())?;
        set("n", self.n.map(|v| v.to_string()))?;
        set("nx", self.nx.map(|v| v.to_string()))?;
        set("ny", self.ny.map(|v| v.to_string()))?;
        set("cfl", self.cfl.map(|v| v.to_string()))?;
        set("tend", self.tend.map(|v| v.to_string()))?;
        set("gamma", self.gamma.map(|v| v.to_string()))?;
        set("h0", self.h0.map(|v| v.to_string()))?;
        set("seed", self.seed.map(|v| v.to_string()))?;
        if self.no_pp_interp {
            cfg.pp_interp = false;
        }
        if self.no_pp_flux {
            cfg.pp_flux = false;
        }
        if self.accuracy_mode {
            cfg.accuracy_mode = true;
        }
        if self.desk {
            cfg.desk = true;
        }
        if let Some(out) = &self.out {
            cfg.out = Some(out.clone());
        }
        Ok(cfg)
    }
}

fn execute(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Run(args) => {
            let cfg = args.to_config()?;
            let out = run(&cfg)?;
            let s = &out.stats;
            println!(
                "{}: t = {} in {} steps ({:.3e} s/step), min rho {:.3e}, min p {:.3e}",
                cfg.problem,
                out.snapshot.time,
                s.steps,
                out.wall_per_step(),
                s.min_density,
                s.min_pressure
            );
            println!(
                "limiter activations: interpolation {}, flux {}; retries {}; conservation drift {:.2e}",
                s.interp_limiter_activations, s.flux_limiter_activations, s.retries, out.conservation_drift
            );
            if let Some(e) = out.errors {
                println!("density error: l1 {:.4e}, l2 {:.4e}, linf {:.4e}", e.l1, e.l2, e.linf);
            }
            if let Some(dir) = &cfg.out {
                let cells = (out.snapshot.grid.nx, out.snapshot.grid.ny);
                let path = emit_snapshot(&out, dir, &default_stem(&cfg, cells))?;
                println!("wrote {}", path.display());
            }
        }
        Command::Converge { args, ns } => {
            let cfg = args.to_config()?;
            let rows = convergence_study(&cfg, &ns)?;
            println!("{} k = {} {}", cfg.problem, cfg.order.k(), cfg.backend);
            print!("{}", format_convergence_table(&rows));
            if let Some(dir) = &cfg.out {
                std::fs::create_dir_all(dir).map_err(|source| Error::Io {
                    path: dir.clone(),
                    source,
                })?;
                let path = dir.join(format!("converge_{}_k{}_{}.json", cfg.problem, cfg.order.k(), cfg.backend));
                let body = serde_json::to_string_pretty(&rows).expect("rows serialize");
                std::fs::write(&path, body + "\n").map_err(|source| Error::Io { path, source })?;
            }
        }
        Command::Bench {
            orders,
            two_d,
            n,
            steps,
            split_xi,
            json,
        } => {
            let orders = orders.into_iter().map(WenoOrder::from_k).collect::<Result<Vec<_>, _>>()?;
            let n = n.unwrap_or(if two_d { 400 } else { 2000 });
            let matvec = if split_xi { ConMatvec::SplitXi } else { ConMatvec::Naive };
            let rows = efficiency_report(&orders, &LcdBackend::ALL, two_d, n, steps, matvec)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&rows).expect("rows serialize"));
            } else {
                print!("{}", format_efficiency_table(&rows));
            }
        }
        Command::ListProblems => {
            for spec in catalog() {
                let cells = if spec.is_2d() {
                    format!("{}x{}", spec.cells.0, spec.cells.1)
                } else {
                    spec.cells.0.to_string()
                };
                println!(
                    "{:<20} {}D  cells {:<10} gamma {:<8.4} T {}",
                    spec.id.to_string(),
                    if spec.is_2d() { 2 } else { 1 },
                    cells,
                    spec.gamma,
                    spec.t_end
                );
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_numerical() {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
