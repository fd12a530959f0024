//! Reflectance of a periodic quarter-wave-like stack and its main stop band.
//!
//! ```text
//! cargo run --release --example normal_spectrum
//! ```

use adiabatic_dbr::analysis::{extract_pbg, principal_band, DEFAULT_DROP_FRACTION};
use adiabatic_dbr::geometry::build_stack;
use adiabatic_dbr::tmm::{spectrum, stack_response};
use adiabatic_dbr::{DbrSpec, Polarization, Result, SpectralGrid};

fn main() -> Result<()> {
    let spec = DbrSpec::normal(400.0, 200.0, 39);
    let stack = build_stack(&spec)?;
    println!("{} layers, {:.0} nm thick", stack.layers.len(), stack.total_length());

    let lam = spec.bragg_wavelength();
    let at_bragg = stack_response(&stack, lam, 0.0, Polarization::TE)?;
    println!("Bragg wavelength {lam:.1} nm: R = {:.8}, T = {:.2e}", at_bragg.reflectance, at_bragg.transmittance);

    let s = spectrum(&stack, &SpectralGrid::default_grid(), 0.0, Polarization::TE)?;
    let bands = extract_pbg(&s, DEFAULT_DROP_FRACTION)?;
    for b in &bands {
        println!(
            "band {:7.2}-{:7.2} THz ({:6.1}-{:6.1} nm), R_max {:.4}",
            b.f_low, b.f_high, b.lambda_low, b.lambda_high, b.r_max
        );
    }
    if let Some(main) = principal_band(&bands) {
        println!("principal band: {:.1} nm wide, centred at {:.1} nm", main.width_nm, main.centre_nm());
    }

    s.write_csv(std::io::sink())?;
    Ok(())
}
