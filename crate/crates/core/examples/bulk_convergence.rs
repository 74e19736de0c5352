//! Second-order convergence of the bulk stepper against closed-form
//! solutions, with the two half-lines joined transparently.

use liouville_defect::charges::observed_order;
use liouville_defect::cli::commands::oracle_errors;
use liouville_defect::cli::{CouplingMode, InitialData, RunConfig};

fn main() -> liouville_defect::Result<()> {
    let mut cfg = RunConfig::default();
    cfg.coupling = CouplingMode::Transparent;
    let spacings = [1.0 / 64.0, 1.0 / 128.0, 1.0 / 256.0];
    for (name, initial) in [("static_log", InitialData::StaticLog), ("cosh_time", InitialData::CoshTime)] {
        let errors = oracle_errors(&cfg, initial, &spacings)?;
        println!("{name}:");
        for (i, (dx, e)) in spacings.iter().zip(&errors).enumerate() {
            let order = if i > 0 { format!("order {:.3}", observed_order(errors[i - 1], *e)) } else { String::new() };
            println!("  dx = 1/{:<4} max error {e:.3e}  {order}", (1.0 / dx) as u32);
        }
    }
    Ok(())
}
