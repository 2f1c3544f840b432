use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lgt_tadpole::io::{config::parse_table, run_evolve, run_ground_state, run_observables, RunConfig};
use lgt_tadpole::Error;

/// Truncated SU(2) lattice gauge theory with dynamical tadpole improvement.
#[derive(Parser, Debug)]
#[command(name = "lgt-tadpole", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve for the self-consistent interacting vacuum.
    GroundState(Overrides),
    /// Real-time evolution; writes a CSV time series.
    Evolve(Overrides),
    /// Stabilizer entropies, entanglement and profiles of one state.
    Observables(Overrides),
}

/// Flags override keys of the TOML config file.
#[derive(Args, Debug, Default)]
struct Overrides {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_parser = ["chain", "honeycomb"])]
    model: Option<String>,
    #[arg(long = "L")]
    length: Option<i64>,
    #[arg(long = "Lx")]
    lx: Option<i64>,
    #[arg(long = "Ly")]
    ly: Option<i64>,
    #[arg(long)]
    g: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    tmax: Option<f64>,
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    initial: Option<String>,
    #[arg(long = "sc-tol")]
    sc_tol: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Overrides {
    fn resolve(&self) -> lgt_tadpole::Result<RunConfig> {
        let mut table = match &self.config {
            Some(p) => parse_table(&std::fs::read_to_string(p)?)?,
            None => toml::Table::new(),
        };
        let mut set = |key: &str, v: Option<toml::Value>| {
            if let Some(v) = v {
                table.insert(key.into(), v);
            }
        };
        set("model", self.model.clone().map(Into::into));
        set("L", self.length.map(Into::into));
        set("Lx", self.lx.map(Into::into));
        set("Ly", self.ly.map(Into::into));
        set("g", self.g.map(Into::into));
        set("dt", self.dt.map(Into::into));
        set("tmax", self.tmax.map(Into::into));
        set("mode", self.mode.clone().map(Into::into));
        set("initial", self.initial.clone().map(Into::into));
        set("sc_tol", self.sc_tol.map(Into::into));
        set("out", self.out.as_ref().map(|p| p.display().to_string().into()));
        RunConfig::from_table(table)
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Io(_) => 1,
        e if e.is_validation() => 2,
        _ => 3,
    }
}

fn run(cmd: &Command) -> lgt_tadpole::Result<()> {
    match cmd {
        Command::GroundState(o) => {
            let r = run_ground_state(&o.resolve()?)?;
            let v = &r.vacuum;
            println!(
                "vacuum: {} iterations, energy {:.10}, energy density {:.10}",
                v.iterations, v.total_energy, v.energy_density
            );
            println!("tadpole: {:?}", v.tadpole.values());
            println!("wrote {}", r.vacuum_file.display());
        }
        Command::Evolve(o) => {
            let r = run_evolve(&o.resolve()?)?;
            println!("{} rows", r.series.records.len());
            println!("wrote {}", r.csv_path.display());
        }
        Command::Observables(o) => {
            let r = run_observables(&o.resolve()?)?;
            if let (Some(m1), Some(m2)) = (r.report.m1_per_l, r.report.m2_per_l) {
                println!("M1/L = {m1:.6}, M2/L = {m2:.6}");
            }
            println!("wrote {}", r.report_path.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match &e {
                Error::NonConvergence { history, .. } | Error::Oscillation { history } => {
                    eprintln!("residual history: {history:?}");
                }
                _ => {}
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
