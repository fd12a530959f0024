//! Batch run of a named preset, the same path the `adbr` binary takes.
//!
//! ```text
//! cargo run --release --example run_preset -- cdbr-d10 out/cdbr-d10
//! ```

use adiabatic_dbr::run::{preset, run, EngineChoice, PRESET_NAMES};
use adiabatic_dbr::Result;

fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "cdbr-d10".to_string());
    let mut cfg = preset(&name)?;
    if let Some(dir) = args.next() {
        cfg.output_dir = dir.into();
    }
    cfg.engine = EngineChoice::Both;
    println!("presets: {}", PRESET_NAMES.join(", "));
    println!("{}", serde_json::to_string_pretty(&cfg)?);
    for path in run(&cfg)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}
