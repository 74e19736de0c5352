//! Builds transition functions on a circle around the defect from an
//! evolved field history, checks the cocycle condition and reports on
//! triviality, with and without the defect.

use liouville_defect::bundle::{
    arc_smoothness, build_cover, cocycle_check, quotient_build, transition_from_defect, triviality_report, History,
    DEFAULT_SMOOTHNESS_BOUND,
};
use liouville_defect::cli::setup::build_run;
use liouville_defect::cli::{CouplingMode, InitialData, RunConfig};
use liouville_defect::lie::{exp_alg, GroupElement, LieElement};

fn history(cfg: &RunConfig) -> liouville_defect::Result<History> {
    let mut sim = build_run(cfg, cfg.initial, -cfg.r, cfg.dx)?;
    let mut snaps = Vec::new();
    sim.run(cfg.r, |s| {
        snaps.push(s.clone());
        Ok(())
    })?;
    History::new(snaps)
}

fn main() -> liouville_defect::Result<()> {
    let defect = RunConfig::default();
    let mut free = RunConfig::default();
    free.coupling = CouplingMode::Transparent;
    free.initial = InitialData::CoshTime;
    let fibres = [GroupElement::identity(), exp_alg(LieElement::new(0.2, -0.4, 0.3))];
    for (name, cfg) in [("defect", &defect), ("no defect", &free)] {
        let atlas = transition_from_defect(build_cover(cfg.r, 256)?, &history(cfg)?, cfg.lambda)?;
        let c = cocycle_check(&atlas);
        let t = triviality_report(&atlas);
        println!("{name}: {} overlap points", atlas.overlap.len());
        println!("  cocycle deviation {:.2e} (pass {})", c.inverse_deviation.max(c.diagonal_deviation), c.pass);
        println!("  {} (max distance from identity {:.3})", t.verdict, t.max_distance_from_identity);
        for s in arc_smoothness(&atlas, DEFAULT_SMOOTHNESS_BOUND) {
            println!("  arc {:?}: max slope {:.3}", s.arc, s.max_slope);
        }
        let q = quotient_build(&atlas, &fibres)?;
        println!("  quotient: {} elements in {} classes", q.elements.len(), q.classes.len());
    }
    Ok(())
}
