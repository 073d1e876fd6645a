use clap::{Parser, Subcommand};
use qflux::acceptance;
use qflux::scenario::{run_scenario, summary_to_json, OutputFormat, Scenario, ScenarioConfig};
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_CONFIG: u8 = 2;
const EXIT_INVARIANT: u8 = 3;

#[derive(Parser)]
#[command(
    name = "qflux",
    about = "Quantum hydrodynamics in 1-D: flux extraction, packet evolution, validation scenarios",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and emit its field table and summary
    Run {
        /// Scenario name, e.g. gaussian-fields, soliton-nls, box-evolution
        scenario: String,
        /// Flat key = value config file; command-line flags override it
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        grid_n: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        x_min: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        x_max: Option<f64>,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        t_final: Option<f64>,
        #[arg(long)]
        hbar: Option<f64>,
        #[arg(long)]
        mass: Option<f64>,
        /// Output base path; writes {out}.json and, for csv format, {out}.csv
        #[arg(long)]
        out: Option<PathBuf>,
        /// csv (summary json + field table csv) or json (single file)
        #[arg(long)]
        format: Option<String>,
    },
    /// Run the acceptance suite and print one PASS/FAIL line per criterion
    Acceptance {
        /// Run a single criterion by name
        #[arg(long)]
        only: Option<String>,
    },
}

fn run_command(cli: Cli) -> Result<(), (u8, String)> {
    match cli.command {
        Command::Run {
            scenario,
            config,
            grid_n,
            x_min,
            x_max,
            dt,
            t_final,
            hbar,
            mass,
            out,
            format,
        } => {
            let mut cfg = ScenarioConfig::default();
            if let Some(path) = &config {
                cfg.apply_file(path)
                    .map_err(|e| (EXIT_CONFIG, e.to_string()))?;
            }
            // flags win over the config file
            cfg.scenario = Some(
                scenario
                    .parse::<Scenario>()
                    .map_err(|e| (EXIT_CONFIG, e.to_string()))?,
            );
            cfg.grid_n = grid_n.or(cfg.grid_n);
            cfg.x_min = x_min.or(cfg.x_min);
            cfg.x_max = x_max.or(cfg.x_max);
            cfg.dt = dt.or(cfg.dt);
            cfg.t_final = t_final.or(cfg.t_final);
            cfg.hbar = hbar.or(cfg.hbar);
            cfg.mass = mass.or(cfg.mass);
            cfg.out = out.or(cfg.out);
            if let Some(f) = format {
                cfg.format = Some(
                    f.parse::<OutputFormat>()
                        .map_err(|e| (EXIT_CONFIG, e.to_string()))?,
                );
            }

            let output = run_scenario(&cfg).map_err(|e| {
                use qflux::scenario::ScenarioError::*;
                match &e {
                    Config(_) => (EXIT_CONFIG, e.to_string()),
                    Invariant(_) | Io { .. } => (EXIT_INVARIANT, e.to_string()),
                }
            })?;
            print!("{}", summary_to_json(&output, false));
            if output.summary.all_pass() {
                Ok(())
            } else {
                let failed: Vec<&str> = output
                    .summary
                    .checks
                    .iter()
                    .filter(|c| !c.pass)
                    .map(|c| c.name.as_str())
                    .collect();
                Err((
                    EXIT_INVARIANT,
                    format!("failed checks: {}", failed.join(", ")),
                ))
            }
        }
        Command::Acceptance { only } => {
            let results = acceptance::run(only.as_deref()).map_err(|e| (EXIT_CONFIG, e))?;
            for r in &results {
                println!("{}", r.report_line());
            }
            let failed = results.iter().filter(|r| !r.pass()).count();
            if failed == 0 {
                Ok(())
            } else {
                Err((EXIT_INVARIANT, format!("{failed} criteria failed")))
            }
        }
    }
}

fn main() -> ExitCode {
    match run_command(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, msg)) => {
            eprintln!("qflux: {msg}");
            ExitCode::from(code)
        }
    }
}
