//! Region-by-region curvature of the two hatted connections on a live
//! defect run, and the overlap test with injected x-independent fields.

use liouville_defect::cli::commands::{appendix_a_level, injected_overlap};
use liouville_defect::cli::RunConfig;

fn main() -> liouville_defect::Result<()> {
    let cfg = RunConfig::default();
    for dx in [1.0 / 32.0, 1.0 / 64.0, 1.0 / 128.0] {
        let (p1, p2, d) = appendix_a_level(&cfg, dx)?;
        println!("dx = 1/{}: defect residuals at x = 0: {:+.2e}, {:+.2e}", (1.0 / dx) as u32, d.d1, d.d2);
        for r in [p1, p2] {
            println!(
                "  {:?}: bulk {:.3e}, delta h-coefficient {:+.6} vs D = {:+.6} at the step (mismatch {:.1e}), overlap {:.3e} with max |phi_x| {:.3}",
                r.patch, r.bulk_max, r.delta[0], r.defect_residual, r.delta_mismatch, r.overlap_max, r.overlap_gradient
            );
        }
    }
    let border = cfg.params().border()?;
    for gradient in [0.0, 1e-3, 0.1] {
        let [o1, o2] = injected_overlap(&border, -cfg.overlap, cfg.overlap, gradient)?;
        println!("injected phi_x = {gradient}: overlap curvature {o1:.3e} / {o2:.3e}");
    }
    Ok(())
}
