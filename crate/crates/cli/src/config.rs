//! Flat `key = value` experiment files.
//!
//! Lines are `dotted.key = value`; `#` starts a comment. List values are
//! comma separated. Setting `experiment` to a preset name loads that preset
//! first, and the remaining keys override it.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use gpme_core::solver::{SchemeKind, SchemeSpec, DEFAULT_DT_FACTOR, DEFAULT_EPS_FACTOR};
use gpme_core::{CoefficientModel, InitialCondition, ProblemSpec, VelocityStencil};

use crate::error::CliError;
use crate::presets;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IcKind {
    Exact,
    PiecewiseLinear,
    Custom,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub k_max: f64,
    pub k_min: f64,
    pub p_star: f64,
    pub x_lo: f64,
    pub x_hi: f64,
    pub bc_left: f64,
    pub bc_right: f64,
    pub t_end: f64,
    pub ic: IcKind,
    /// Initial front for exact data; ignored when `ic_t0` is set.
    pub ic_front: f64,
    pub ic_t0: Option<f64>,
    pub ic_k_min_gen: f64,
    pub ic_x_knee: f64,
    pub ic_x: Vec<f64>,
    pub ic_p: Vec<f64>,
    pub grids: Vec<usize>,
    pub schemes: Vec<SchemeKind>,
    pub dt_factors: Vec<f64>,
    pub eps_factor: f64,
    pub stencil: VelocityStencil,
    /// Refinement factors; 0 runs on the plain grid.
    pub n_inner: Vec<usize>,
    pub probes: Vec<f64>,
    pub snapshot_times: Vec<f64>,
    pub output_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            experiment: "custom".into(),
            k_max: 1.0,
            k_min: 0.0,
            p_star: 0.5,
            x_lo: 0.0,
            x_hi: 1.0,
            bc_left: 1.0,
            bc_right: 0.0,
            t_end: 0.05,
            ic: IcKind::Exact,
            ic_front: 0.2,
            ic_t0: None,
            ic_k_min_gen: 0.01,
            ic_x_knee: 0.5,
            ic_x: Vec::new(),
            ic_p: Vec::new(),
            grids: vec![50],
            schemes: vec![SchemeKind::SamJump],
            dt_factors: vec![DEFAULT_DT_FACTOR],
            eps_factor: DEFAULT_EPS_FACTOR,
            stencil: VelocityStencil::Zero,
            n_inner: vec![0],
            probes: vec![0.32],
            snapshot_times: vec![],
            output_dir: PathBuf::from("out"),
        }
    }
}

/// A violated constraint, named by its config key.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub field: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

fn diag(field: &str, message: impl Into<String>) -> Diagnostic {
    Diagnostic {
        field: field.into(),
        message: message.into(),
    }
}

type Entries = BTreeMap<String, (usize, String)>;

fn parse_entries(text: &str, source: &str) -> Result<Entries, CliError> {
    let mut out = Entries::new();
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| CliError::Parse {
            path: source.into(),
            line: line_no,
            message,
        };
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(format!("expected 'key = value', got '{line}'")))?;
        let key = key.trim().to_string();
        if key.is_empty() {
            return Err(err("empty key".into()));
        }
        if out
            .insert(key.clone(), (line_no, value.trim().to_string()))
            .is_some()
        {
            return Err(err(format!("duplicate key '{key}'")));
        }
    }
    Ok(out)
}

fn scalar<T: std::str::FromStr>(value: &str) -> Result<T, String>
where
    T::Err: fmt::Display,
{
    value
        .parse::<T>()
        .map_err(|e| format!("cannot parse '{value}': {e}"))
}

fn list<T: std::str::FromStr>(value: &str) -> Result<Vec<T>, String>
where
    T::Err: fmt::Display,
{
    if value.is_empty() {
        return Ok(Vec::new());
    }
    value.split(',').map(|v| scalar(v.trim())).collect()
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Parses config text. `source` only labels error messages.
    pub fn parse(text: &str, source: &str) -> Result<Self, CliError> {
        let entries = parse_entries(text, source)?;
        let mut cfg = ExperimentConfig::default();
        if let Some((line, name)) = entries.get("experiment") {
            if let Some(preset) = presets::find(name) {
                let base = parse_entries(preset.config, name)?;
                cfg.apply(&base, name)?;
            } else if name != "custom" {
                return Err(CliError::Parse {
                    path: source.into(),
                    line: *line,
                    message: format!("unknown experiment '{name}' (see `gpme presets`)"),
                });
            }
        }
        cfg.apply(&entries, source)?;
        Ok(cfg)
    }

    fn apply(&mut self, entries: &Entries, source: &str) -> Result<(), CliError> {
        for (key, (line, value)) in entries {
            self.set(key, value).map_err(|message| CliError::Parse {
                path: source.into(),
                line: *line,
                message: format!("{key}: {message}"),
            })?;
        }
        Ok(())
    }

    fn set(&mut self, key: &str, v: &str) -> Result<(), String> {
        match key {
            "experiment" => self.experiment = v.to_string(),
            "problem.k_max" => self.k_max = scalar(v)?,
            "problem.k_min" => self.k_min = scalar(v)?,
            "problem.p_star" => self.p_star = scalar(v)?,
            "problem.x_lo" => self.x_lo = scalar(v)?,
            "problem.x_hi" => self.x_hi = scalar(v)?,
            "problem.bc_left" => self.bc_left = scalar(v)?,
            "problem.bc_right" => self.bc_right = scalar(v)?,
            "problem.t_end" => self.t_end = scalar(v)?,
            "ic.kind" => {
                self.ic = match v {
                    "exact" => IcKind::Exact,
                    "piecewise-linear" => IcKind::PiecewiseLinear,
                    "custom" => IcKind::Custom,
                    _ => {
                        return Err(format!(
                            "unknown kind '{v}' (exact | piecewise-linear | custom)"
                        ))
                    }
                }
            }
            "ic.front" => self.ic_front = scalar(v)?,
            "ic.t0" => self.ic_t0 = Some(scalar(v)?),
            "ic.k_min_gen" => self.ic_k_min_gen = scalar(v)?,
            "ic.x_knee" => self.ic_x_knee = scalar(v)?,
            "ic.x" => self.ic_x = list(v)?,
            "ic.p" => self.ic_p = list(v)?,
            "run.grids" => self.grids = list(v)?,
            "run.schemes" => self.schemes = list(v)?,
            "scheme.dt_factor" => self.dt_factors = list(v)?,
            "scheme.eps_factor" => self.eps_factor = scalar(v)?,
            "scheme.stencil" => self.stencil = scalar(v)?,
            "amr.n_inner" => self.n_inner = list(v)?,
            "output.probes" => self.probes = list(v)?,
            "output.snapshots" => self.snapshot_times = list(v)?,
            "output.dir" => self.output_dir = PathBuf::from(v),
            _ => return Err("unknown key".into()),
        }
        Ok(())
    }

    pub fn model(&self) -> gpme_core::Result<CoefficientModel> {
        CoefficientModel::new(self.k_max, self.k_min, self.p_star)
    }

    pub fn problem(&self) -> gpme_core::Result<ProblemSpec> {
        let model = self.model()?;
        let initial_condition = match self.ic {
            IcKind::Exact => match self.ic_t0 {
                Some(t0) => InitialCondition::ExactAtTime {
                    t0,
                    k_min_gen: self.ic_k_min_gen,
                },
                None => {
                    InitialCondition::exact_with_front(&model, self.ic_front, self.ic_k_min_gen)?
                }
            },
            IcKind::PiecewiseLinear => InitialCondition::PiecewiseLinear {
                x_knee: self.ic_x_knee,
            },
            IcKind::Custom => InitialCondition::Custom {
                x: self.ic_x.clone(),
                p: self.ic_p.clone(),
            },
        };
        let spec = ProblemSpec {
            model,
            x_lo: self.x_lo,
            x_hi: self.x_hi,
            bc_left: self.bc_left,
            bc_right: self.bc_right,
            initial_condition,
            t_end: self.t_end,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn scheme(&self, kind: SchemeKind, dt_factor: f64) -> SchemeSpec {
        SchemeSpec::new(kind)
            .with_dt_factor(dt_factor)
            .with_eps_factor(self.eps_factor)
            .with_stencil(self.stencil)
    }
}

/// All violated constraints; empty means the config can be run.
pub fn validate_config(cfg: &ExperimentConfig) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    if let Err(e) = cfg.model() {
        out.push(diag("problem", e.to_string()));
    }
    if !(cfg.x_lo < cfg.x_hi) {
        out.push(diag(
            "problem.x_hi",
            format!("domain [{}, {}] is empty", cfg.x_lo, cfg.x_hi),
        ));
    }
    if !(cfg.bc_left > cfg.p_star && cfg.p_star > cfg.bc_right) {
        out.push(diag(
            "problem.p_star",
            format!(
                "must lie strictly between bc_right = {} and bc_left = {}",
                cfg.bc_right, cfg.bc_left
            ),
        ));
    }
    if !(cfg.t_end >= 0.0 && cfg.t_end.is_finite()) {
        out.push(diag("problem.t_end", format!("{} must be >= 0", cfg.t_end)));
    }
    match cfg.ic {
        IcKind::Exact => {
            if cfg.x_lo != 0.0 || cfg.bc_left != 1.0 || cfg.bc_right != 0.0 {
                out.push(diag(
                    "ic.kind",
                    "exact data needs x_lo = 0 and boundary values (1, 0)",
                ));
            }
            match cfg.ic_t0 {
                Some(t0) if !(t0 > 0.0) => out.push(diag("ic.t0", format!("{t0} must be > 0"))),
                None if !(cfg.ic_front > cfg.x_lo && cfg.ic_front < cfg.x_hi) => out.push(diag(
                    "ic.front",
                    format!("{} must lie inside the domain", cfg.ic_front),
                )),
                _ => {}
            }
            if !(cfg.ic_k_min_gen >= 0.0 && cfg.ic_k_min_gen < cfg.k_max) {
                out.push(diag(
                    "ic.k_min_gen",
                    format!("{} must lie in [0, k_max)", cfg.ic_k_min_gen),
                ));
            }
        }
        IcKind::PiecewiseLinear => {
            if !(cfg.ic_x_knee > cfg.x_lo && cfg.ic_x_knee < cfg.x_hi) {
                out.push(diag(
                    "ic.x_knee",
                    format!("{} must lie inside the domain", cfg.ic_x_knee),
                ));
            }
        }
        IcKind::Custom => {
            if cfg.ic_x.len() != cfg.ic_p.len() || cfg.ic_x.len() < 2 {
                out.push(diag(
                    "ic.p",
                    "ic.x and ic.p need the same length, at least 2",
                ));
            }
        }
    }
    if out.is_empty() {
        // Anything the field checks above do not cover, such as a custom
        // table that is not monotone.
        let grid = cfg.grids.iter().copied().find(|&n| n >= 4).unwrap_or(16);
        let check = cfg.problem().and_then(|p| {
            let g = gpme_core::Grid::uniform(p.x_lo, p.x_hi, grid)?;
            gpme_core::model::build_initial_condition(&p, &g).map(|_| ())
        });
        if let Err(e) = check {
            out.push(diag("ic", e.to_string()));
        }
    }
    if cfg.grids.is_empty() {
        out.push(diag("run.grids", "no grids"));
    }
    for &n in &cfg.grids {
        if n < 4 {
            out.push(diag(
                "run.grids",
                format!("N = {n} is below the minimum of 4"),
            ));
        }
    }
    if cfg.schemes.is_empty() {
        out.push(diag("run.schemes", "no schemes"));
    }
    if cfg.schemes.contains(&SchemeKind::SamExact) && cfg.ic != IcKind::Exact {
        out.push(diag("run.schemes", "sam-exact needs ic.kind = exact"));
    }
    if cfg.dt_factors.is_empty() {
        out.push(diag("scheme.dt_factor", "no time-step factors"));
    }
    let limit = 0.5 / cfg.k_max;
    for &f in &cfg.dt_factors {
        if !(f > 0.0) {
            out.push(diag("scheme.dt_factor", format!("{f} must be > 0")));
        } else if f > limit {
            out.push(diag(
                "scheme.dt_factor",
                format!(
                    "stability: dt_factor exceeds explicit limit ({f} > 1/(2 k_max) = {limit})"
                ),
            ));
        }
    }
    if !(cfg.eps_factor > 0.0 && cfg.eps_factor < 0.5) {
        out.push(diag(
            "scheme.eps_factor",
            format!("{} must lie in (0, 0.5)", cfg.eps_factor),
        ));
    } else if cfg.schemes.iter().any(|k| k.is_sam()) {
        let need = cfg
            .dt_factors
            .iter()
            .fold(0.0f64, |m, &f| m.max(2.0 * f * cfg.k_max));
        if cfg.eps_factor < need {
            out.push(diag(
                "scheme.eps_factor",
                format!(
                    "stability: eps_factor {} is below 2·dt_factor·k_max = {need}; sub-cell fluxes near a node are unstable",
                    cfg.eps_factor
                ),
            ));
        }
    }
    if cfg.n_inner.is_empty() {
        out.push(diag(
            "amr.n_inner",
            "no refinement factors (use 0 for none)",
        ));
    }
    if cfg.n_inner.iter().any(|&n| n > 0) && cfg.schemes.iter().any(|k| k.is_sam()) {
        out.push(diag(
            "amr.n_inner",
            "refinement only applies to averaging schemes",
        ));
    }
    for &x in &cfg.probes {
        if !(x > cfg.x_lo && x < cfg.x_hi) {
            out.push(diag("output.probes", format!("probe outside domain: {x}")));
        }
    }
    for &t in &cfg.snapshot_times {
        if !(t >= 0.0 && t <= cfg.t_end) {
            out.push(diag(
                "output.snapshots",
                format!("snapshot time {t} outside [0, t_end = {}]", cfg.t_end),
            ));
        }
    }
    out
}
