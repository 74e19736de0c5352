use std::fs::File;
use std::io::BufReader;

use super::config::{BoundaryMode, InitialData, RunConfig};
use crate::error::{Error, Result};
use crate::sim::{
    backlund_initial_state, Coupling, ExactKind, ExactSolution, FieldState, OuterBoundary,
    ProbeRegion, SimConfig, Simulator,
};

/// Exact solutions behind oracle initial data: `(left, right)`.
pub fn oracles(cfg: &RunConfig, t0: f64) -> Result<Option<(ExactSolution, ExactSolution)>> {
    let l = cfg.l;
    // covers the light-cone square used by the Bäcklund generator
    let probe = ProbeRegion::new((t0 - l, (t0 + l).max(cfg.t_end)), (-l, l));
    let single = |kind| ExactSolution::new(cfg.mu, kind, probe).map(|s| Some((s.clone(), s)));
    match cfg.initial {
        InitialData::Backlund | InitialData::ExactPair => {
            ExactSolution::backlund_pair(cfg.mu, cfg.lambda, cfg.omega, cfg.rapidity, probe).map(Some)
        }
        InitialData::CoshTime => single(ExactKind::CoshTime { omega: cfg.omega }),
        InitialData::StaticLog => single(ExactKind::StaticLog { x0: cfg.x0 }),
        InitialData::Pulse | InitialData::File => Ok(None),
    }
}

/// Initial state at `t0` on a grid of spacing `dx`, with its stepper
/// configuration. `dt` keeps the configured ratio `dt/dx`.
pub fn build_run(cfg: &RunConfig, initial: InitialData, t0: f64, dx: f64) -> Result<Simulator> {
    let cfg = RunConfig {
        initial,
        ..cfg.clone()
    };
    let params = cfg.params();
    let coupling = Coupling::from(cfg.coupling);
    let n = (cfg.l / dx).round() as usize;
    let pair = oracles(&cfg, t0)?;
    let state = match (cfg.initial, &pair) {
        (InitialData::Backlund, Some((a, b))) => {
            backlund_initial_state(params, t0, dx, n, a, b.value(t0 - cfg.l, 0.0))?
        }
        (InitialData::Pulse, _) => pulse(&cfg, t0, dx, n)?,
        (InitialData::File, _) => {
            let open = |p: &Option<std::path::PathBuf>, key: &str| -> Result<BufReader<File>> {
                let p = p.as_ref().ok_or_else(|| Error::config(key, "missing path"))?;
                File::open(p)
                    .map(BufReader::new)
                    .map_err(|e| Error::config(key, format!("cannot open {}: {e}", p.display())))
            };
            FieldState::from_columns(params, coupling, t0, open(&cfg.field1, "field1")?, open(&cfg.field2, "field2")?)?
        }
        (_, Some((a, b))) => FieldState::from_exact(params, coupling, t0, dx, n, a, b)?,
        (_, None) => unreachable!("oracle initial data always has oracles"),
    };
    let boundary = match (cfg.boundary, pair) {
        (BoundaryMode::Exact, Some((left, right))) => OuterBoundary::Exact { left, right },
        (BoundaryMode::Exact, None) => {
            return Err(Error::config("boundary", "boundary = exact needs exact initial data"))
        }
        (BoundaryMode::Sponge, _) => OuterBoundary::Sponge {
            width: cfg.sponge_width,
            strength: cfg.sponge_strength,
        },
    };
    let dt = cfg.dt() * state.dx / cfg.dx;
    let mut sim_cfg = SimConfig::new(dt, boundary);
    sim_cfg.phi_max = cfg.phi_max;
    Simulator::new(state, sim_cfg)
}

/// `φ = A exp(−((x − c)/w)²)` moving right at unit speed.
fn pulse(cfg: &RunConfig, t0: f64, dx: f64, n: usize) -> Result<FieldState> {
    let (a, c, w) = (cfg.pulse_amplitude, cfg.pulse_center, cfg.pulse_width);
    let shape = |x: f64| {
        let u = (x - c) / w;
        let phi = a * (-u * u).exp();
        (phi, 2.0 * u / w * phi)
    };
    let side = |x0: f64| -> (Vec<f64>, Vec<f64>) {
        (0..=n).map(|i| shape(x0 + i as f64 * dx)).unzip()
    };
    let (phi1, pi1) = side(-(n as f64) * dx);
    let (phi2, pi2) = side(0.0);
    FieldState::new(cfg.params(), Coupling::from(cfg.coupling), t0, dx, phi1, pi1, phi2, pi2)
}
