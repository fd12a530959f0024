//! Adiabaticity, autoresonance and end decoupling for three designs.
//!
//! ```text
//! cargo run --release --example rap_diagnostics
//! ```

use adiabatic_dbr::coupled_mode::CmProfile;
use adiabatic_dbr::diagnostics::rap_margin;
use adiabatic_dbr::run::design_wavelength;
use adiabatic_dbr::{DbrSpec, Polarization, Result};

fn main() -> Result<()> {
    let designs = [
        ("periodic", DbrSpec::normal(400.0, 200.0, 39)),
        ("chirped", DbrSpec::chirped(400.0, 10.0, 10.0, 39)),
        ("tilted", DbrSpec::ict(400.0, 200.0, 21, 0.05, 32)),
    ];
    for (name, spec) in designs {
        let lam = design_wavelength(&spec);
        let profile = CmProfile::for_spec(&spec, lam, 0.0, Polarization::TE)?;
        let s = rap_margin(&profile)?.summary;
        println!(
            "{name:>8} @ {lam:.1} nm: max ratio {:.3}, autoresonant cells {:?}, |dbeta/kappa| ends ({:.1}, {:.1}), decoupled {:?}",
            s.max_ratio, s.autoresonant_span, s.end_decoupling.0, s.end_decoupling.1, s.ends_decoupled
        );
    }
    Ok(())
}
