//! Evolves a Bäcklund-consistent pair through the defect and tracks the
//! modified momentum and energy, which stay conserved once the flux
//! through the outer edges is subtracted.

use liouville_defect::charges::{drift_monitor, ChargeMonitor};
use liouville_defect::cli::setup::build_run;
use liouville_defect::cli::{InitialData, RunConfig};

fn main() -> liouville_defect::Result<()> {
    let cfg = RunConfig::default();
    let mut previous = None;
    for dx in [1.0 / 32.0, 1.0 / 64.0, 1.0 / 128.0] {
        let mut sim = build_run(&cfg, InitialData::Backlund, 0.0, dx)?;
        let mut monitor = ChargeMonitor::new();
        sim.run(cfg.t_end, |s| monitor.observe(s).map(|_| ()))?;
        let first = monitor.reports()[0];
        let d = drift_monitor(monitor.reports())?;
        println!(
            "dx = 1/{:<3}  P+M = {:+.6}  E-B = {:+.6}  drift(P+M) {:.2e}  drift(E-B) {:.2e}  drift(P) {:.2e}",
            (1.0 / dx) as u32,
            first.p_mod,
            first.e_mod,
            d.p_mod,
            d.e_mod,
            d.p_uncorrected
        );
        if let Some((p, e)) = previous {
            println!("              drift ratios under halving: {:.3} {:.3}", p / d.p_mod, e / d.e_mod);
        }
        previous = Some((d.p_mod, d.e_mod));
    }
    Ok(())
}
