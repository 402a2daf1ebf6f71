//! Line-based `key = value` run configuration.
//!
//! Unknown keys are hard errors: a typo that silently fell back to a default
//! would invalidate a convergence study without any visible symptom.

use std::fmt;

use ldg_core::fluxes::FluxVariant;
use ldg_core::problems::{builtin, builtin_ids, BoundaryCondition, ProblemSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Run,
    Convergence,
    Projtest,
    Fluxtest,
    History,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Run => "run",
            Mode::Convergence => "convergence",
            Mode::Projtest => "projtest",
            Mode::Fluxtest => "fluxtest",
            Mode::History => "history",
        }
    }

    fn from_name(s: &str) -> Option<Mode> {
        Some(match s {
            "run" => Mode::Run,
            "convergence" => Mode::Convergence,
            "projtest" => Mode::Projtest,
            "fluxtest" => Mode::Fluxtest,
            "history" => Mode::History,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    /// 1-based line in the config file, when the error is tied to one.
    pub line: Option<usize>,
    pub msg: String,
}

impl ConfigError {
    fn at(line: usize, msg: impl Into<String>) -> Self {
        ConfigError { line: Some(line), msg: msg.into() }
    }

    fn general(msg: impl Into<String>) -> Self {
        ConfigError { line: None, msg: msg.into() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(n) => write!(f, "config error (line {n}): {}", self.msg),
            None => write!(f, "config error: {}", self.msg),
        }
    }
}

impl std::error::Error for ConfigError {}

pub struct RunConfig {
    pub mode: Mode,
    pub problem: &'static ProblemSpec,
    pub k: usize,
    pub cells: Vec<usize>,
    pub theta: f64,
    pub variant: FluxVariant,
    pub cfl: Option<f64>,
    pub dt_override: Option<f64>,
    pub t_end: Option<f64>,
    pub history_stride: usize,
    /// Output path from the config file; the CLI --out flag wins over it.
    pub out: Option<String>,
}

const KEYS: &[&str] = &[
    "mode",
    "problem",
    "k",
    "cells",
    "theta",
    "flux",
    "boundary",
    "cfl",
    "dt_override",
    "t_end",
    "history_stride",
    "out",
];

/// Parse and validate a config for the given subcommand.
pub fn parse_config(text: &str, mode: Mode) -> Result<RunConfig, ConfigError> {
    // key -> (value, line)
    let mut seen: Vec<(String, String, usize)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let Some(eq) = line.find('=') else {
            return Err(ConfigError::at(line_no, format!("expected `key = value`, got `{line}`")));
        };
        let key = line[..eq].trim();
        let value = line[eq + 1..].trim();
        if key.is_empty() {
            return Err(ConfigError::at(line_no, "empty key"));
        }
        if value.is_empty() {
            return Err(ConfigError::at(line_no, format!("key `{key}` has no value")));
        }
        if !KEYS.contains(&key) {
            return Err(ConfigError::at(line_no, format!("unknown key `{key}`")));
        }
        if let Some((_, _, prev)) = seen.iter().find(|(k, _, _)| k == key) {
            return Err(ConfigError::at(
                line_no,
                format!("key `{key}` already set on line {prev}"),
            ));
        }
        seen.push((key.to_string(), value.to_string(), line_no));
    }

    let get = |key: &str| seen.iter().find(|(k, _, _)| k == key).map(|(_, v, l)| (v.as_str(), *l));

    if let Some((v, l)) = get("mode") {
        match Mode::from_name(v) {
            Some(m) if m == mode => {}
            Some(m) => {
                return Err(ConfigError::at(
                    l,
                    format!("mode `{}` does not match the `{}` subcommand", m.name(), mode.name()),
                ))
            }
            None => return Err(ConfigError::at(l, format!("unknown mode `{v}`"))),
        }
    }

    let (prob_id, prob_line) =
        get("problem").ok_or_else(|| ConfigError::general("missing required key `problem`"))?;
    let problem = builtin(prob_id).ok_or_else(|| {
        let known: Vec<&str> = builtin_ids().collect();
        ConfigError::at(
            prob_line,
            format!("unknown problem `{prob_id}` (known: {})", known.join(", ")),
        )
    })?;

    let (k_str, k_line) =
        get("k").ok_or_else(|| ConfigError::general("missing required key `k`"))?;
    let k: usize = k_str
        .parse()
        .map_err(|_| ConfigError::at(k_line, format!("`k` must be a nonnegative integer, got `{k_str}`")))?;
    if k > 8 {
        return Err(ConfigError::at(k_line, format!("polynomial degree {k} is out of range (max 8)")));
    }

    let (cells_str, cells_line) =
        get("cells").ok_or_else(|| ConfigError::general("missing required key `cells`"))?;
    let mut cells = Vec::new();
    for piece in cells_str.split(',') {
        let piece = piece.trim();
        let n: usize = piece.parse().map_err(|_| {
            ConfigError::at(cells_line, format!("`cells` entries must be positive integers, got `{piece}`"))
        })?;
        if n == 0 {
            return Err(ConfigError::at(cells_line, "`cells` entries must be positive"));
        }
        cells.push(n);
    }
    if !cells.windows(2).all(|w| w[0] < w[1]) {
        return Err(ConfigError::at(cells_line, "`cells` must be strictly increasing"));
    }

    let (theta_str, theta_line) =
        get("theta").ok_or_else(|| ConfigError::general("missing required key `theta`"))?;
    let theta: f64 = theta_str
        .parse()
        .map_err(|_| ConfigError::at(theta_line, format!("`theta` must be a number, got `{theta_str}`")))?;
    if !theta.is_finite() || theta <= 0.0 {
        return Err(ConfigError::at(theta_line, "`theta` must be finite and positive"));
    }

    let variant = match get("flux") {
        None => FluxVariant::Flux1,
        Some(("1", _)) | Some(("flux1", _)) => FluxVariant::Flux1,
        Some(("2", _)) | Some(("flux2", _)) => FluxVariant::Flux2,
        Some((v, l)) => {
            return Err(ConfigError::at(l, format!("`flux` must be 1 or 2, got `{v}`")))
        }
    };

    if let Some((v, l)) = get("boundary") {
        let actual = match problem.bc {
            BoundaryCondition::Periodic => "periodic",
            BoundaryCondition::Dirichlet { .. } => "dirichlet",
            BoundaryCondition::Mixed { .. } => "mixed",
        };
        if !matches!(v, "periodic" | "dirichlet" | "mixed") {
            return Err(ConfigError::at(l, format!("unknown boundary kind `{v}`")));
        }
        if v != actual {
            return Err(ConfigError::at(
                l,
                format!("boundary `{v}` does not match problem `{prob_id}` ({actual})"),
            ));
        }
    }

    let parse_pos = |key: &str| -> Result<Option<f64>, ConfigError> {
        match get(key) {
            None => Ok(None),
            Some((v, l)) => {
                let x: f64 = v.parse().map_err(|_| {
                    ConfigError::at(l, format!("`{key}` must be a number, got `{v}`"))
                })?;
                if !x.is_finite() || x <= 0.0 {
                    return Err(ConfigError::at(l, format!("`{key}` must be finite and positive")));
                }
                Ok(Some(x))
            }
        }
    };

    let cfl = parse_pos("cfl")?;
    let dt_override = parse_pos("dt_override")?;
    if cfl.is_some() && dt_override.is_some() {
        return Err(ConfigError::general("`cfl` and `dt_override` are mutually exclusive"));
    }
    let t_end = parse_pos("t_end")?;

    let history_stride = match get("history_stride") {
        None => 1,
        Some((v, l)) => {
            let s: usize = v.parse().map_err(|_| {
                ConfigError::at(l, format!("`history_stride` must be a positive integer, got `{v}`"))
            })?;
            if s == 0 {
                return Err(ConfigError::at(l, "`history_stride` must be positive"));
            }
            s
        }
    };

    let out = get("out").map(|(v, _)| v.to_string());

    // per-mode requirements
    let integrates = matches!(mode, Mode::Run | Mode::Convergence | Mode::History);
    if integrates {
        if t_end.is_none() {
            return Err(ConfigError::general(format!(
                "`{}` mode requires `t_end`",
                mode.name()
            )));
        }
        if cfl.is_none() && dt_override.is_none() {
            return Err(ConfigError::general(format!(
                "`{}` mode requires `cfl` or `dt_override`",
                mode.name()
            )));
        }
    }
    match mode {
        Mode::Run | Mode::History => {
            if cells.len() != 1 {
                return Err(ConfigError::at(
                    cells_line,
                    format!("`{}` mode takes exactly one cell count", mode.name()),
                ));
            }
        }
        Mode::Convergence | Mode::Projtest => {
            if cells.len() < 2 {
                return Err(ConfigError::at(
                    cells_line,
                    format!("`{}` mode needs at least two cell counts for orders", mode.name()),
                ));
            }
        }
        Mode::Fluxtest => {}
    }
    if matches!(mode, Mode::Convergence | Mode::History) && problem.exact.is_none() {
        return Err(ConfigError::general(format!(
            "problem `{prob_id}` has no exact solution; `{}` mode needs one",
            mode.name()
        )));
    }
    if matches!(mode, Mode::Projtest | Mode::Fluxtest)
        && !matches!(problem.bc, BoundaryCondition::Periodic)
    {
        // the projections are globally coupled and the flux identities pick up
        // boundary terms on a bounded domain; both modes are periodic-only
        return Err(ConfigError::general(format!(
            "`{}` mode needs a periodic problem",
            mode.name()
        )));
    }

    Ok(RunConfig {
        mode,
        problem,
        k,
        cells,
        theta,
        variant,
        cfl,
        dt_override,
        t_end,
        history_stride,
        out,
    })
}
