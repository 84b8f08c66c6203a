use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use geolab::error::Error;
use geolab::lab::emit::{render, to_stable_json, write_atomic};
use geolab::lab::examples::{build_example, list_examples, ExampleName};
use geolab::lab::experiment::{run_experiment, ExperimentConfig, Format, Quantity};
use geolab::lab::table::{render_table, table_passed, verify_table, TableOptions};

#[derive(Parser)]
#[command(name = "geolab", version, about = "Entropy and hyperbolicity experiments on graph covers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the bundled example spaces.
    ListExamples,
    /// Write the space description of an example as JSON.
    Build {
        #[arg(long)]
        example: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run one experiment from a config file and/or flags (flags win).
    Run(RunArgs),
    /// Run the regression table; exits 1 when any row fails.
    VerifyTable {
        /// Row group: sft, convexity, hull, hcrit, bowen, md, hcov, hgeod, properties or delta.
        #[arg(long)]
        only: Option<String>,
        /// Print rows as JSON instead of a text table.
        #[arg(long)]
        json: bool,
        /// Replace the a2 voltage of tree:2 by a1 before running.
        #[arg(long)]
        inject_wrong_voltage: bool,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    space: Option<String>,
    #[arg(long)]
    quantity: Option<Quantity>,
    /// Largest horizon; horizons are 1..=T.
    #[arg(long)]
    horizon: Option<usize>,
    /// Explicit comma-separated horizons.
    #[arg(long, value_delimiter = ',')]
    horizons: Option<Vec<usize>>,
    /// Covering radius r (integer, p/q or decimal).
    #[arg(long)]
    radius: Option<String>,
    /// Decay a of e^{-a|s|}.
    #[arg(long)]
    decay: Option<f64>,
    #[arg(long)]
    anchor_radius: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    budget: Option<u64>,
    /// Comma-separated cylinder labels.
    #[arg(long, value_delimiter = ',')]
    cylinders: Option<Vec<String>>,
    /// Comma-separated boundary points, each `head|period`.
    #[arg(long, value_delimiter = ',')]
    points: Option<Vec<String>>,
    #[arg(long)]
    window: Option<usize>,
    #[arg(long)]
    quotient: bool,
    #[arg(long)]
    strategy: Option<String>,
    #[arg(long)]
    tau: Option<String>,
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<Format>,
}

impl RunArgs {
    fn into_config(self) -> Result<ExperimentConfig, Error> {
        let mut c = match &self.config {
            Some(p) => ExperimentConfig::from_json_file(p)?,
            None => ExperimentConfig::default(),
        };
        if let Some(s) = self.space {
            c.space = s;
        }
        if c.space.is_empty() {
            return Err(Error::Config("missing space".into()));
        }
        macro_rules! set {
            ($($field:ident <- $value:expr),*) => {$(if let Some(v) = $value { c.$field = Some(v); })*};
        }
        set!(
            quantity <- self.quantity,
            horizon <- self.horizon,
            horizons <- self.horizons,
            r <- self.radius,
            a <- self.decay,
            anchor_radius <- self.anchor_radius,
            seed <- self.seed,
            budget <- self.budget,
            cylinders <- self.cylinders,
            points <- self.points,
            window <- self.window,
            strategy <- self.strategy,
            tau <- self.tau,
            grid <- self.grid,
            out <- self.out,
            format <- self.format
        );
        c.quotient |= self.quotient;
        Ok(c)
    }
}

fn exit_for(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    match e {
        Error::BudgetExceeded(_) => ExitCode::from(3),
        _ => ExitCode::from(2),
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), Error> {
    match out {
        Some(p) => write_atomic(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::ListExamples => {
            for (name, about) in list_examples() {
                println!("{name:<20} {about}");
            }
        }
        Command::Build { example, out } => {
            let ex = build_example(&example.parse::<ExampleName>()?)?;
            write_atomic(&out, &to_stable_json(&ex.description)?)?;
        }
        Command::Run(args) => {
            let config = args.into_config()?;
            let outcome = run_experiment(&config)?;
            let text = render(&outcome, config.format.unwrap_or_default())?;
            emit(&text, config.out.as_ref())?;
        }
        Command::VerifyTable { only, json, inject_wrong_voltage } => {
            let rows = verify_table(&TableOptions { only, wrong_voltage: inject_wrong_voltage })?;
            if json {
                print!("{}", to_stable_json(&rows)?);
            } else {
                print!("{}", render_table(&rows));
            }
            if !table_passed(&rows) {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    run(cli.command).unwrap_or_else(|e| exit_for(&e))
}
