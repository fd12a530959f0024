//! A design built from JSON with non-default materials and media.
//!
//! ```text
//! cargo run --release --example custom_design
//! ```

use adiabatic_dbr::analysis::{extract_pbg, principal_band, DEFAULT_DROP_FRACTION};
use adiabatic_dbr::geometry::{cell_profiles, write_profile_csv, Material};
use adiabatic_dbr::tmm::spec_spectrum;
use adiabatic_dbr::{DbrSpec, Polarization, Result, SpectralGrid};

fn main() -> Result<()> {
    let (hi, lo) = (Material::tio2(), Material::sio2());
    let spec = DbrSpec::chirped(350.0, 20.0, 8.0, 30)
        .with_indices(hi.n, lo.n)
        .with_media(1.0, 1.52);
    let text = serde_json::to_string_pretty(&spec)?;
    println!("{text}");
    let spec: DbrSpec = serde_json::from_str(&text)?;
    spec.validate()?;

    let s = spec_spectrum(&spec, &SpectralGrid::uniform(150.0, 750.0, 1500)?, 20.0, Polarization::TM)?;
    if let Some(b) = principal_band(&extract_pbg(&s, DEFAULT_DROP_FRACTION)?) {
        println!("TM at 20 deg: {:.1}-{:.1} nm", b.lambda_low, b.lambda_high);
    }

    let params = cell_profiles(&spec, 1400.0, 20.0, Polarization::TM)?;
    write_profile_csv(&params[..5], std::io::stdout().lock())?;
    Ok(())
}
