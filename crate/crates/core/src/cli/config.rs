use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sim::stepper::CFL_LIMIT;
use crate::sim::{Coupling, Params};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryMode {
    /// Dirichlet data from the exact solutions behind the initial data.
    Exact,
    Sponge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialData {
    /// Boosted cosh solution on the left, Bäcklund-generated partner on
    /// the right.
    Backlund,
    /// Boosted cosh solution and its closed-form Bäcklund partner.
    ExactPair,
    CoshTime,
    StaticLog,
    /// Right-moving Gaussian bump.
    Pulse,
    /// Column files `field1` and `field2`.
    File,
}

impl InitialData {
    fn is_oracle(self) -> bool {
        !matches!(self, InitialData::Pulse | InitialData::File)
    }

    fn is_pair(self) -> bool {
        matches!(self, InitialData::Backlund | InitialData::ExactPair)
    }
}

/// Everything a run needs. Built from defaults, a `key = value` file and
/// `--set` overrides, in that order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub mu: f64,
    pub k: f64,
    pub lambda: f64,
    #[serde(rename = "L")]
    pub l: f64,
    pub dx: f64,
    /// `None` means `dx / 2`.
    #[serde(skip)]
    pub dt: Option<f64>,
    pub t0: f64,
    pub t_end: f64,
    pub r: f64,
    pub boundary: BoundaryMode,
    pub sponge_width: f64,
    pub sponge_strength: f64,
    pub coupling: CouplingMode,
    pub initial: InitialData,
    pub omega: f64,
    pub rapidity: f64,
    pub x0: f64,
    pub pulse_amplitude: f64,
    pub pulse_width: f64,
    pub pulse_center: f64,
    pub field1: Option<PathBuf>,
    pub field2: Option<PathBuf>,
    pub phi_max: f64,
    pub seed: u64,
    pub samples: usize,
    pub cases: usize,
    pub overlap: f64,
    /// Time after `t0` at which region reports are taken.
    pub region_time: f64,
    pub refinements: usize,
    pub bundle_points: usize,
    pub fibre_samples: usize,
    pub smoothness_bound: f64,
    pub defect_offset: f64,
    pub snapshot_every: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingMode {
    Defect,
    Transparent,
}

impl From<CouplingMode> for Coupling {
    fn from(c: CouplingMode) -> Self {
        match c {
            CouplingMode::Defect => Coupling::Defect,
            CouplingMode::Transparent => Coupling::Transparent,
        }
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            mu: 1.0,
            k: Params::DEFAULT_K,
            lambda: 0.8,
            l: 2.0,
            dx: 1.0 / 64.0,
            dt: None,
            t0: 0.0,
            t_end: 2.0,
            r: 1.0,
            boundary: BoundaryMode::Exact,
            sponge_width: 0.5,
            sponge_strength: 20.0,
            coupling: CouplingMode::Defect,
            initial: InitialData::Backlund,
            omega: 1.0,
            rapidity: 0.3,
            x0: -3.0,
            pulse_amplitude: 0.1,
            pulse_width: 0.15,
            pulse_center: -1.0,
            field1: None,
            field2: None,
            phi_max: 30.0,
            seed: 0,
            samples: 50,
            cases: 20,
            overlap: 0.25,
            region_time: 0.5,
            refinements: 3,
            bundle_points: 256,
            fibre_samples: 4,
            smoothness_bound: 100.0,
            defect_offset: 0.0,
            snapshot_every: 0,
        }
    }
}

/// Keys accepted in config files and `--set`.
pub const KEYS: &[&str] = &[
    "mu", "k", "lambda", "L", "dx", "dt", "t0", "t_end", "r", "boundary", "sponge_width",
    "sponge_strength", "coupling", "initial", "omega", "rapidity", "x0", "pulse_amplitude",
    "pulse_width", "pulse_center", "field1", "field2", "phi_max", "seed", "samples", "cases",
    "overlap", "region_time", "refinements", "bundle_points", "fibre_samples", "smoothness_bound",
    "defect_offset", "snapshot_every",
];

fn bad(line: Option<usize>, key: &str, message: impl Into<String>) -> Error {
    Error::Config {
        line,
        key: key.into(),
        message: message.into(),
    }
}

impl RunConfig {
    /// Resolved time step.
    pub fn dt(&self) -> f64 {
        self.dt.unwrap_or(0.5 * self.dx)
    }

    /// Grid points per half-line minus one: `L = n·dx`.
    pub fn n(&self) -> usize {
        (self.l / self.dx).round() as usize
    }

    pub fn params(&self) -> Params {
        Params::new(self.mu, self.k, self.lambda)
    }

    /// Reads `key = value` lines; `#` starts a comment.
    pub fn parse_str(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(Some(i + 1), line, "expected `key = value`"))?;
            self.set(Some(i + 1), key.trim(), value.trim())?;
        }
        Ok(())
    }

    pub fn load(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            bad(None, "config", format!("cannot read {}: {e}", path.display()))
        })?;
        self.parse_str(&text)
    }

    /// Applies one `key=value` override.
    pub fn set_override(&mut self, assignment: &str) -> Result<()> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| bad(None, assignment, "expected `key=value`"))?;
        self.set(None, key.trim(), value.trim())
    }

    fn set(&mut self, line: Option<usize>, key: &str, value: &str) -> Result<()> {
        let real = || -> Result<f64> {
            value
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| bad(line, key, format!("`{value}` is not a finite number")))
        };
        let count = || -> Result<usize> {
            value
                .parse::<usize>()
                .map_err(|_| bad(line, key, format!("`{value}` is not a non-negative integer")))
        };
        let choice = |options: &[&str]| -> Result<usize> {
            options.iter().position(|o| *o == value).ok_or_else(|| {
                bad(line, key, format!("`{value}` is not one of {}", options.join(", ")))
            })
        };
        match key {
            "mu" => self.mu = real()?,
            "k" => self.k = real()?,
            "lambda" => self.lambda = real()?,
            "L" => self.l = real()?,
            "dx" => self.dx = real()?,
            "dt" => self.dt = Some(real()?),
            "t0" => self.t0 = real()?,
            "t_end" => self.t_end = real()?,
            "r" => self.r = real()?,
            "boundary" => {
                self.boundary = [BoundaryMode::Exact, BoundaryMode::Sponge][choice(&["exact", "sponge"])?]
            }
            "sponge_width" => self.sponge_width = real()?,
            "sponge_strength" => self.sponge_strength = real()?,
            "coupling" => {
                self.coupling =
                    [CouplingMode::Defect, CouplingMode::Transparent][choice(&["defect", "transparent"])?]
            }
            "initial" => {
                self.initial = [
                    InitialData::Backlund,
                    InitialData::ExactPair,
                    InitialData::CoshTime,
                    InitialData::StaticLog,
                    InitialData::Pulse,
                    InitialData::File,
                ][choice(&["backlund", "exact_pair", "cosh_time", "static_log", "pulse", "file"])?]
            }
            "omega" => self.omega = real()?,
            "rapidity" => self.rapidity = real()?,
            "x0" => self.x0 = real()?,
            "pulse_amplitude" => self.pulse_amplitude = real()?,
            "pulse_width" => self.pulse_width = real()?,
            "pulse_center" => self.pulse_center = real()?,
            "field1" => self.field1 = Some(PathBuf::from(value)),
            "field2" => self.field2 = Some(PathBuf::from(value)),
            "phi_max" => self.phi_max = real()?,
            "seed" => {
                self.seed = value
                    .parse()
                    .map_err(|_| bad(line, key, format!("`{value}` is not a u64")))?
            }
            "samples" => self.samples = count()?,
            "cases" => self.cases = count()?,
            "overlap" => self.overlap = real()?,
            "region_time" => self.region_time = real()?,
            "refinements" => self.refinements = count()?,
            "bundle_points" => self.bundle_points = count()?,
            "fibre_samples" => self.fibre_samples = count()?,
            "smoothness_bound" => self.smoothness_bound = real()?,
            "defect_offset" => self.defect_offset = real()?,
            "snapshot_every" => self.snapshot_every = count()?,
            _ => return Err(bad(line, key, "unknown key")),
        }
        Ok(())
    }

    /// Cross-field checks. Errors name the offending key.
    pub fn validate(&self) -> Result<()> {
        let check = |ok: bool, key: &str, msg: String| if ok { Ok(()) } else { Err(bad(None, key, msg)) };
        check(self.dx > 0.0, "dx", format!("dx must be positive, got {}", self.dx))?;
        check(self.l > 0.0, "L", format!("L must be positive, got {}", self.l))?;
        let n = self.n();
        check(
            n >= 4 && (n as f64 * self.dx - self.l).abs() <= 1e-9 * self.l,
            "L",
            format!("L = {} must be a multiple of dx = {} with at least 4 cells", self.l, self.dx),
        )?;
        let dt = self.dt();
        check(dt > 0.0, "dt", format!("dt must be positive, got {dt}"))?;
        check(
            dt / self.dx <= CFL_LIMIT,
            "dt",
            format!("dt/dx = {} violates the CFL bound dt/dx <= {CFL_LIMIT}", dt / self.dx),
        )?;
        check(self.k != 0.0, "k", "k must be nonzero".into())?;
        check(
            self.lambda != 0.0 || self.mu == 0.0,
            "lambda",
            "lambda must be nonzero unless mu = 0".into(),
        )?;
        check(self.r > 0.0 && self.r < self.l, "r", format!("need 0 < r < L, got r = {}, L = {}", self.r, self.l))?;
        check(self.t_end >= self.t0, "t_end", format!("t_end = {} precedes t0 = {}", self.t_end, self.t0))?;
        check(self.omega > 0.0, "omega", format!("omega must be positive, got {}", self.omega))?;
        check(self.phi_max > 0.0, "phi_max", format!("phi_max must be positive, got {}", self.phi_max))?;
        check(self.bundle_points >= 8, "bundle_points", format!("need at least 8 points, got {}", self.bundle_points))?;
        check(self.refinements >= 2, "refinements", format!("need at least 2 refinements, got {}", self.refinements))?;
        check(
            self.overlap > 0.0 && self.overlap < self.l,
            "overlap",
            format!("need 0 < overlap < L, got {}", self.overlap),
        )?;
        check(
            self.region_time > 0.0 && self.overlap < self.l - self.region_time,
            "region_time",
            format!(
                "need region_time > 0 and overlap < L - region_time, got region_time = {}",
                self.region_time
            ),
        )?;
        check(self.pulse_width > 0.0, "pulse_width", "pulse_width must be positive".into())?;
        check(
            self.sponge_width > 0.0 && self.sponge_strength >= 0.0,
            "sponge_width",
            "sponge needs positive width and non-negative strength".into(),
        )?;
        if self.initial.is_oracle() {
            check(self.mu != 0.0, "initial", "exact initial data need mu != 0; use initial = pulse".into())?;
        } else {
            check(
                self.boundary == BoundaryMode::Sponge,
                "boundary",
                "boundary = exact needs exact initial data".into(),
            )?;
        }
        if self.initial.is_pair() {
            check(
                self.coupling == CouplingMode::Defect,
                "coupling",
                "a Backlund pair needs coupling = defect".into(),
            )?;
        }
        if matches!(self.initial, InitialData::CoshTime | InitialData::StaticLog) {
            check(
                self.coupling == CouplingMode::Transparent,
                "coupling",
                "single-field exact data need coupling = transparent".into(),
            )?;
        }
        if self.initial == InitialData::StaticLog {
            check(self.x0 < -self.l, "x0", format!("x0 = {} must lie left of -L", self.x0))?;
        }
        if self.initial == InitialData::File {
            check(
                self.field1.is_some() && self.field2.is_some(),
                "field1",
                "initial = file needs field1 and field2".into(),
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_overrides() {
        let mut c = RunConfig::default();
        c.parse_str("# comment\nmu = 2\n\nlambda=0.5  # inline\nboundary = sponge\n").unwrap();
        assert_eq!((c.mu, c.lambda, c.boundary), (2.0, 0.5, BoundaryMode::Sponge));
        c.set_override("dx=0.03125").unwrap();
        assert_eq!(c.dt(), 0.015625);
        assert_eq!(c.n(), 64);
    }

    #[test]
    fn diagnostics_carry_line_and_key() {
        let mut c = RunConfig::default();
        match c.parse_str("mu = 1\nomega = fast\n") {
            Err(Error::Config { line, key, .. }) => assert_eq!((line, key.as_str()), (Some(2), "omega")),
            other => panic!("{other:?}"),
        }
        match c.parse_str("colour = red") {
            Err(Error::Config { line, key, message }) => {
                assert_eq!((line, key.as_str(), message.as_str()), (Some(1), "colour", "unknown key"))
            }
            other => panic!("{other:?}"),
        }
        assert!(c.set_override("mu").is_err());
    }

    #[test]
    fn validation() {
        assert!(RunConfig::default().validate().is_ok());
        let mut c = RunConfig::default();
        c.dt = Some(0.9 * c.dx);
        match c.validate() {
            Err(Error::Config { key, message, .. }) => {
                assert_eq!(key, "dt");
                assert!(message.contains("CFL"));
            }
            other => panic!("{other:?}"),
        }
        let mut c = RunConfig::default();
        c.r = c.l;
        assert!(matches!(c.validate(), Err(Error::Config { key, .. }) if key == "r"));
        let mut c = RunConfig::default();
        c.lambda = 0.0;
        assert!(matches!(c.validate(), Err(Error::Config { key, .. }) if key == "lambda"));
        c.mu = 0.0;
        c.initial = InitialData::Pulse;
        c.boundary = BoundaryMode::Sponge;
        assert!(c.validate().is_ok());
        let mut c = RunConfig::default();
        c.initial = InitialData::CoshTime;
        assert!(matches!(c.validate(), Err(Error::Config { key, .. }) if key == "coupling"));
    }
}
