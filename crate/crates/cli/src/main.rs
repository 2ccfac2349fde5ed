mod config;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use orthoiir::io::{
    model_from_json, model_to_json, object_function_csv, report_to_json, transfer_function_to_json,
};
use orthoiir::{build_object_function, design_with_reference, sweep, Error as DesignError, Stage};

use crate::config::DesignConfig;

#[derive(Parser)]
#[command(
    name = "orthoiir",
    version,
    about = "Linear-phase IIR filter design from Legendre FIR prototypes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full design pipeline from a JSON configuration.
    Design {
        config: PathBuf,
        /// Validate the configuration without designing.
        #[arg(long)]
        check: bool,
        /// Suppress progress lines.
        #[arg(long)]
        quiet: bool,
    },
    /// Re-sweep a saved pole-zero model into a response CSV.
    Respond {
        model: PathBuf,
        #[arg(long, default_value_t = orthoiir::response::DEFAULT_GRID_POINTS)]
        points: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

enum CliError {
    Config(String),
    Pipeline(DesignError),
    Io(PathBuf, std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Pipeline(_) => 3,
            CliError::Io(..) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Pipeline(e) => {
                write!(f, "pipeline error: {e}")?;
                if matches!(
                    e.root(),
                    DesignError::ZeroDenominatorLevel(_) | DesignError::DenominatorVanishes { .. }
                ) {
                    write!(
                        f,
                        " (the denominator characteristic must have no zero in 0 <= omega <= pi)"
                    )?;
                }
                Ok(())
            }
            CliError::Io(path, e) => write!(f, "io error on {}: {e}", path.display()),
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn cmd_design(config_path: &Path, check: bool, quiet: bool) -> Result<(), CliError> {
    let progress = |msg: &str| {
        if !quiet {
            eprintln!("{msg}");
        }
    };
    let cfg = DesignConfig::parse(&read(config_path)?).map_err(CliError::Config)?;
    let hp_spec = cfg
        .hp_spec()
        .map_err(|e| CliError::Pipeline(e.at(Stage::Spec)))?;
    if check {
        progress("config ok");
        return Ok(());
    }

    progress(&format!(
        "designing {:?} filter with {} / {} Legendre terms",
        cfg.kind, cfg.num_terms_n, cfg.num_terms_m
    ));
    let report = design_with_reference(
        &cfg.lp_spec,
        &hp_spec,
        cfg.num_terms_n,
        cfg.num_terms_m,
        cfg.kind,
        cfg.reference_omega,
    )
    .map_err(CliError::Pipeline)?;
    for note in &report.notes {
        progress(&format!("  {note}"));
    }

    let response = sweep(&report.model_stable, cfg.grid_points).map_err(CliError::Pipeline)?;
    let response_raw = sweep(&report.model_raw, cfg.grid_points).map_err(CliError::Pipeline)?;
    let obj_n =
        build_object_function(&cfg.lp_spec, cfg.lp_spec.x0()).map_err(CliError::Pipeline)?;
    let obj_d = build_object_function(&hp_spec, hp_spec.x0()).map_err(CliError::Pipeline)?;

    let dir = cfg.resolved_output_dir();
    fs::create_dir_all(&dir).map_err(|e| CliError::Io(dir.clone(), e))?;
    let files = [
        ("report.json", report_to_json(&report)),
        ("model.json", model_to_json(&report.model_stable)),
        (
            "ba_coeffs.json",
            transfer_function_to_json(&report.model_stable.transfer_function()),
        ),
        ("response.csv", response.to_csv()),
        ("response_raw.csv", response_raw.to_csv()),
        (
            "objfn_num.csv",
            object_function_csv(&obj_n, &report.numerator, cfg.grid_points),
        ),
        (
            "objfn_den.csv",
            object_function_csv(&obj_d, &report.denominator, cfg.grid_points),
        ),
    ];
    for (name, contents) in &files {
        write(&dir.join(name), contents)?;
    }
    progress(&format!("wrote {} files to {}", files.len(), dir.display()));
    Ok(())
}

fn cmd_respond(model_path: &Path, points: usize, out: &Path) -> Result<(), CliError> {
    let model = model_from_json(&read(model_path)?).map_err(|e| CliError::Config(e.to_string()))?;
    if points < orthoiir::response::MIN_GRID_POINTS {
        return Err(CliError::Config(format!(
            "--points must be at least {}",
            orthoiir::response::MIN_GRID_POINTS
        )));
    }
    let curve = sweep(&model, points).map_err(CliError::Pipeline)?;
    write(out, &curve.to_csv())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Design {
            config,
            check,
            quiet,
        } => cmd_design(config, *check, *quiet),
        Command::Respond { model, points, out } => cmd_respond(model, *points, out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("orthoiir: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
