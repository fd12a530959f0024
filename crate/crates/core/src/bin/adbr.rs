use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use adiabatic_dbr::run::{self, AoiConfig, EngineChoice, GridConfig, Overrides, PolChoice, RunConfig, Task};
use adiabatic_dbr::{DbrError, Result};
use clap::Parser;

/// Spectra, band gaps and adiabaticity diagnostics for Bragg reflectors.
#[derive(Debug, Parser)]
#[command(name = "adbr", version)]
struct Cli {
    /// Named preset (normal-n39, normal-n21, cdbr-d10, cdbr-d5, cdbr-d2.5, ict-n21, fig6-anglemaps).
    #[arg(long)]
    preset: Option<String>,
    /// JSON run configuration; overrides the preset.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// tmm, coupled_mode or both.
    #[arg(long)]
    engine: Option<EngineChoice>,
    /// TE, TM or both.
    #[arg(long)]
    pol: Option<PolChoice>,
    /// Single angle in degrees, or min:max:steps.
    #[arg(long)]
    aoi: Option<AoiConfig>,
    /// f_min:f_max:points in THz.
    #[arg(long)]
    grid: Option<GridConfig>,
    /// Comma-separated tasks: spectrum, angle_map, diagnose, bloch, pbg, compare.
    #[arg(long, value_delimiter = ',')]
    tasks: Option<Vec<Task>>,
    /// Print the resolved configuration as JSON and exit.
    #[arg(long)]
    print_config: bool,
}

fn resolve(cli: &Cli) -> Result<RunConfig> {
    let base = match (&cli.config, &cli.preset) {
        (Some(path), _) => RunConfig::from_json_file(path)?,
        (None, Some(name)) => run::preset(name)?,
        (None, None) => {
            return Err(DbrError::InvalidConfig {
                field: "preset".into(),
                reason: "pass --preset or --config".into(),
            })
        }
    };
    let overrides = Overrides {
        output_dir: cli.out.clone(),
        engine: cli.engine,
        pol: cli.pol,
        aoi: cli.aoi,
        grid: cli.grid,
        tasks: cli.tasks.as_ref().map(|t| t.iter().copied().collect::<BTreeSet<_>>()),
    };
    let cfg = overrides.apply(base);
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help / --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let body = serde_json::json!({ "error": "usage", "message": e.kind().to_string(), "detail": e.to_string().trim() });
            eprintln!("{body}");
            return ExitCode::from(2);
        }
    };
    let outcome = resolve(&cli).and_then(|cfg| {
        if cli.print_config {
            println!("{}", serde_json::to_string_pretty(&cfg)?);
            return Ok(());
        }
        for path in run::run(&cfg)? {
            println!("{}", path.display());
        }
        Ok(())
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let body = serde_json::json!({ "error": e.kind(), "message": e.to_string() });
            eprintln!("{body}");
            ExitCode::from(2)
        }
    }
}
