//! Run configuration: defaults, `key = value` config files and command-line
//! overrides, in increasing order of precedence.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::CircleGrid;
use crate::squeeze::{CounterexampleConfig, SliceGrid};

/// Environment variable consulted for the output directory when neither the
/// command line nor the config file sets one.
pub const OUT_ENV: &str = "SQUEEZE_LAB_OUT";
pub const DEFAULT_OUT: &str = "squeeze-lab-out";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub r: f64,
    pub eps: f64,
    pub tol: f64,
    pub tau_grid: usize,
    pub refine_iters: usize,
    pub k_density: usize,
    pub slice_points: usize,
    pub slice_angles: usize,
    pub certification_points: usize,
    /// Sample count for the statistical checks.
    pub samples: usize,
    pub out: PathBuf,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub beta_override: Option<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let cx = CounterexampleConfig::default();
        Self {
            r: cx.r,
            eps: cx.eps,
            tol: cx.tol,
            tau_grid: cx.tau_grid.n(),
            refine_iters: cx.tau_grid.refine_iters(),
            k_density: cx.k_density,
            slice_points: cx.slice.radii,
            slice_angles: cx.slice.angles,
            certification_points: cx.certification_points,
            samples: 1000,
            out: PathBuf::from(DEFAULT_OUT),
            seed: 42,
            beta_override: None,
        }
    }
}

/// Values that may come from a config file or from flags.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub r: Option<f64>,
    pub eps: Option<f64>,
    pub tol: Option<f64>,
    pub tau_grid: Option<usize>,
    pub k_density: Option<usize>,
    pub slice_points: Option<usize>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub beta_override: Option<f64>,
}

impl Overrides {
    /// Parses a `key = value` file. Blank lines and `#` comments are skipped;
    /// keys match the long flag names (`tau-grid`, `k-density`, ...), with `_`
    /// accepted for `-`. Unknown keys are errors.
    pub fn parse_file_contents(text: &str) -> Result<Self> {
        let mut o = Overrides::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::usage(format!("config line {}", lineno + 1), format!("expected key = value, got {raw:?}"))
            })?;
            let key = key.trim().replace('_', "-");
            let value = value.trim();
            let flag = format!("--{key}");
            match key.as_str() {
                "r" => o.r = Some(parse_num(&flag, value)?),
                "eps" => o.eps = Some(parse_num(&flag, value)?),
                "tol" => o.tol = Some(parse_num(&flag, value)?),
                "tau-grid" => o.tau_grid = Some(parse_num(&flag, value)?),
                "k-density" => o.k_density = Some(parse_num(&flag, value)?),
                "slice-points" => o.slice_points = Some(parse_num(&flag, value)?),
                "seed" => o.seed = Some(parse_num(&flag, value)?),
                "out" => o.out = Some(PathBuf::from(value)),
                _ => return Err(Error::usage(key, "unknown config key")),
            }
        }
        Ok(o)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::usage("--config", format!("{}: {e}", path.display())))?;
        Self::parse_file_contents(&text)
    }
}

fn parse_num<T: std::str::FromStr>(flag: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e| Error::usage(flag, format!("{value:?}: {e}")))
}

impl RunConfig {
    pub fn apply(&mut self, o: &Overrides) {
        macro_rules! set {
            ($($field:ident),*) => { $( if let Some(v) = o.$field.clone() { self.$field = v; } )* };
        }
        set!(r, eps, tol, tau_grid, k_density, slice_points, out, seed);
        if o.beta_override.is_some() {
            self.beta_override = o.beta_override;
        }
    }

    /// Defaults, then the file (if any), then flags. The output directory falls
    /// back to `SQUEEZE_LAB_OUT` when neither layer sets it.
    pub fn resolve(file: Option<&Path>, flags: &Overrides, env_out: Option<PathBuf>) -> Result<Self> {
        let mut cfg = RunConfig::default();
        let from_file = file.map(Overrides::from_file).transpose()?.unwrap_or_default();
        if from_file.out.is_none() && flags.out.is_none() {
            if let Some(dir) = env_out {
                cfg.out = dir;
            }
        }
        cfg.apply(&from_file);
        cfg.apply(flags);
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks every invariant and names the flag responsible for a violation.
    pub fn validate(&self) -> Result<()> {
        if !(self.r > 0.0 && self.r < 0.5) {
            return Err(Error::usage("--r", format!("{} must lie in (0, 0.5)", self.r)));
        }
        if !(self.eps > 0.0 && self.eps < self.r) {
            return Err(Error::usage("--eps", format!("{} must lie in (0, r = {})", self.eps, self.r)));
        }
        if !(self.tol > 0.0 && self.tol < 1e-3) {
            return Err(Error::usage("--tol", format!("{} must lie in (0, 1e-3)", self.tol)));
        }
        if self.tau_grid < 16 {
            return Err(Error::usage("--tau-grid", format!("{} must be at least 16", self.tau_grid)));
        }
        if self.k_density < 4 {
            return Err(Error::usage("--k-density", format!("{} must be at least 4", self.k_density)));
        }
        if self.slice_points == 0 {
            return Err(Error::usage("--slice-points", "must be positive"));
        }
        Ok(())
    }

    pub fn circle_grid(&self) -> CircleGrid {
        CircleGrid::new(self.tau_grid, self.refine_iters).expect("validated tau grid")
    }

    pub fn counterexample(&self) -> Result<CounterexampleConfig> {
        let cx = CounterexampleConfig {
            r: self.r,
            eps: self.eps,
            k_density: self.k_density,
            slice: SliceGrid { radii: self.slice_points, angles: self.slice_angles },
            tau_grid: self.circle_grid(),
            certification_points: self.certification_points,
            tol: self.tol,
            beta_override: self.beta_override,
        };
        cx.validate()?;
        Ok(cx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let cfg = RunConfig::resolve(None, &Overrides::default(), None).unwrap();
        assert_eq!(cfg.r, 0.4);
        assert_eq!(cfg.eps, 0.05);
        assert_eq!(cfg.seed, 42);
        assert_eq!(cfg.out, PathBuf::from(DEFAULT_OUT));
    }

    #[test]
    fn file_then_flags() {
        let file = Overrides::parse_file_contents("# comment\nr = 0.3\n tau_grid=1024\neps = 0.02 # inline\n\n").unwrap();
        let flags = Overrides { r: Some(0.45), ..Default::default() };
        let mut cfg = RunConfig::default();
        cfg.apply(&file);
        cfg.apply(&flags);
        assert_eq!((cfg.r, cfg.eps, cfg.tau_grid), (0.45, 0.02, 1024));
    }

    #[test]
    fn unknown_key_is_rejected() {
        let err = Overrides::parse_file_contents("radius = 0.3").unwrap_err();
        assert!(matches!(err, Error::Usage { ref flag, .. } if flag == "radius"));
        assert!(Overrides::parse_file_contents("r 0.3").is_err());
        assert!(Overrides::parse_file_contents("r = abc").is_err());
    }

    #[test]
    fn invariant_violation_names_flag() {
        let flags = Overrides { r: Some(0.6), ..Default::default() };
        let err = RunConfig::resolve(None, &flags, None).unwrap_err();
        assert!(matches!(err, Error::Usage { ref flag, .. } if flag == "--r"));
    }

    #[test]
    fn env_out_is_a_fallback() {
        let env = Some(PathBuf::from("/tmp/env-out"));
        let cfg = RunConfig::resolve(None, &Overrides::default(), env.clone()).unwrap();
        assert_eq!(cfg.out, PathBuf::from("/tmp/env-out"));
        let flags = Overrides { out: Some(PathBuf::from("flag-out")), ..Default::default() };
        let cfg = RunConfig::resolve(None, &flags, env).unwrap();
        assert_eq!(cfg.out, PathBuf::from("flag-out"));
    }
}
