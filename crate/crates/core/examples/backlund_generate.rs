//! Generates the Bäcklund partner of an exact solution on a light-cone
//! grid and compares it with the closed-form partner.

use liouville_defect::sim::backlund::{cross_residuals, liouville_residual};
use liouville_defect::sim::{backlund_generate, ExactSolution, LightConeField, LightConeGrid, ProbeRegion};

fn main() -> liouville_defect::Result<()> {
    let (mu, lambda, l) = (1.0, 0.8, 1.0);
    let probe = ProbeRegion::new((-l, l), (-l, l));
    let (first, second) = ExactSolution::backlund_pair(mu, lambda, 1.0, 0.3, probe)?;
    for n in [32, 64, 128] {
        let dx = l / n as f64;
        let grid = LightConeGrid::for_slice(0.0, dx, n);
        let f1 = LightConeField::sample(grid, |t, x| first.jet(t, x));
        let (t, x) = grid.tx(0, 0);
        let f2 = backlund_generate(&f1, mu, lambda, second.value(t, x))?;
        let mut err: f64 = 0.0;
        for i in 0..=grid.nz {
            for j in 0..=grid.nzbar {
                let (t, x) = grid.tx(i, j);
                err = err.max((f2.at(i, j) - second.value(t, x)).abs());
            }
        }
        let (rm, rp) = cross_residuals(&f1, &f2, mu);
        println!(
            "n = {n:>3}: partner error {err:.3e}, Liouville residual {:.3e}, cross residuals {rm:.3e} {rp:.3e}",
            liouville_residual(&f2, mu)
        );
    }
    Ok(())
}
