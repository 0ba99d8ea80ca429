//! Run configuration: defaults per experiment, a flat key=value file, and
//! command-line overrides, resolved in that order.

use crate::CliError;
use oriented_walk::dynsys::{parse_generating_function, parse_system_kind, SystemSpec};
use oriented_walk::lattice::{FieldModeConfig, LatticeConfig};
use oriented_walk::rng::{domain, RngStream};
use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Orientations,
    Admissibility,
    WalkReturns,
    EmbeddingCheck,
    Slln,
    Scaling,
    Flt,
    Delta,
}

impl ExperimentKind {
    pub fn parse(name: &str) -> Result<Self, CliError> {
        Ok(match name {
            "orientations" => ExperimentKind::Orientations,
            "admissibility" => ExperimentKind::Admissibility,
            "walk-returns" => ExperimentKind::WalkReturns,
            "embedding-check" => ExperimentKind::EmbeddingCheck,
            "slln" => ExperimentKind::Slln,
            "scaling" => ExperimentKind::Scaling,
            "flt" => ExperimentKind::Flt,
            "delta" => ExperimentKind::Delta,
            other => {
                return Err(CliError::Config(format!(
                    "unknown experiment `{other}` (expected one of: orientations, \
                     admissibility, walk-returns, embedding-check, slln, scaling, flt, delta)"
                )))
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::Orientations => "orientations",
            ExperimentKind::Admissibility => "admissibility",
            ExperimentKind::WalkReturns => "walk-returns",
            ExperimentKind::EmbeddingCheck => "embedding-check",
            ExperimentKind::Slln => "slln",
            ExperimentKind::Scaling => "scaling",
            ExperimentKind::Flt => "flt",
            ExperimentKind::Delta => "delta",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub experiment: ExperimentKind,
    pub system: String,
    pub f: String,
    pub mode: String,
    pub x: Option<f64>,
    pub n: u64,
    pub n_grid: Vec<u64>,
    pub replicas: u64,
    pub samples: u64,
    pub seed: u64,
    pub max_lag: i64,
    pub t: f64,
    pub dt: f64,
    pub h: f64,
    pub x_max: Option<f64>,
    pub ks_flt_max: f64,
    pub ks_self_max: f64,
    pub rms_max: f64,
    pub out: PathBuf,
    pub workers: usize,
}

struct Defaults {
    system: &'static str,
    f: &'static str,
    n: u64,
    n_grid: &'static [u64],
    replicas: u64,
    samples: u64,
}

const SCALING_GRID: [u64; 9] = [
    1 << 12,
    1 << 13,
    1 << 14,
    1 << 15,
    1 << 16,
    1 << 17,
    1 << 18,
    1 << 19,
    1 << 20,
];
const DECADE_GRID: [u64; 3] = [10_000, 100_000, 1_000_000];

fn defaults(kind: ExperimentKind) -> Defaults {
    match kind {
        ExperimentKind::Orientations => Defaults {
            system: "bernoulli",
            f: "proj",
            n: 1_000_000,
            n_grid: &[],
            replicas: 1,
            samples: 100_000,
        },
        ExperimentKind::Admissibility => Defaults {
            system: "identity",
            f: "f1",
            n: 0,
            n_grid: &[],
            replicas: 1,
            samples: 1_000_000,
        },
        ExperimentKind::WalkReturns => Defaults {
            system: "bernoulli",
            f: "proj",
            n: 0,
            n_grid: &DECADE_GRID,
            replicas: 200,
            samples: 0,
        },
        ExperimentKind::EmbeddingCheck => Defaults {
            system: "bernoulli",
            f: "proj",
            n: 10_000,
            n_grid: &[],
            replicas: 100,
            samples: 0,
        },
        ExperimentKind::Slln => Defaults {
            system: "bernoulli",
            f: "proj",
            n: 0,
            n_grid: &DECADE_GRID,
            replicas: 200,
            samples: 0,
        },
        ExperimentKind::Scaling => Defaults {
            system: "bernoulli",
            f: "proj",
            n: 0,
            n_grid: &SCALING_GRID,
            replicas: 500,
            samples: 0,
        },
        ExperimentKind::Flt => Defaults {
            system: "bernoulli",
            f: "proj",
            n: 1 << 20,
            n_grid: &[],
            replicas: 2_000,
            samples: 2_000,
        },
        ExperimentKind::Delta => Defaults {
            system: "identity",
            f: "const:0.5",
            n: 0,
            n_grid: &[],
            replicas: 1,
            samples: 10_000,
        },
    }
}

/// Parses a flat `key = value` file; `#` starts a comment.
pub fn parse_config_file(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            CliError::Config(format!(
                "{}:{}: expected key = value, got `{raw}`",
                path.display(),
                lineno + 1
            ))
        })?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn parse_u64(key: &str, raw: &str) -> Result<u64, CliError> {
    if let Ok(v) = raw.parse::<u64>() {
        return Ok(v);
    }
    // accept scientific notation like 1e6 for counts
    if let Ok(v) = raw.parse::<f64>() {
        if v >= 0.0 && v.fract() == 0.0 && v <= u64::MAX as f64 {
            return Ok(v as u64);
        }
    }
    Err(CliError::Config(format!("key `{key}`: `{raw}` is not a count")))
}

fn parse_f64(key: &str, raw: &str) -> Result<f64, CliError> {
    raw.parse::<f64>()
        .map_err(|_| CliError::Config(format!("key `{key}`: `{raw}` is not a number")))
}

fn parse_grid(key: &str, raw: &str) -> Result<Vec<u64>, CliError> {
    raw.split(',')
        .map(|s| parse_u64(key, s.trim()))
        .collect::<Result<Vec<_>, _>>()
}

impl RunConfig {
    /// Resolves defaults, then the config file map, then explicit overrides.
    pub fn resolve(mut map: BTreeMap<String, String>) -> Result<RunConfig, CliError> {
        let experiment = ExperimentKind::parse(
            &map.remove("experiment")
                .ok_or_else(|| CliError::Config("missing key `experiment`".into()))?,
        )?;
        let d = defaults(experiment);

        let mut take = |key: &str| map.remove(key);

        let system = take("system").unwrap_or_else(|| d.system.to_string());
        let f = take("f").unwrap_or_else(|| d.f.to_string());
        let mode = take("mode").unwrap_or_else(|| "annealed".to_string());
        if mode != "annealed" && mode != "quenched" {
            return Err(CliError::Config(format!(
                "mode must be `annealed` or `quenched`, got `{mode}`"
            )));
        }
        let x = take("x").map(|v| parse_f64("x", &v)).transpose()?;
        let n = take("n").map(|v| parse_u64("n", &v)).transpose()?.unwrap_or(d.n);
        let n_grid = take("n-grid")
            .map(|v| parse_grid("n-grid", &v))
            .transpose()?
            .unwrap_or_else(|| d.n_grid.to_vec());
        let replicas = take("replicas")
            .map(|v| parse_u64("replicas", &v))
            .transpose()?
            .unwrap_or(d.replicas);
        let samples = take("samples")
            .map(|v| parse_u64("samples", &v))
            .transpose()?
            .unwrap_or(d.samples);
        let seed = take("seed").map(|v| parse_u64("seed", &v)).transpose()?.unwrap_or(1);
        let max_lag = take("max-lag")
            .map(|v| parse_u64("max-lag", &v))
            .transpose()?
            .unwrap_or(5) as i64;
        let t = take("t").map(|v| parse_f64("t", &v)).transpose()?.unwrap_or(1.0);
        let dt = take("dt").map(|v| parse_f64("dt", &v)).transpose()?.unwrap_or(1e-5);
        let h = take("h").map(|v| parse_f64("h", &v)).transpose()?.unwrap_or(0.01);
        let x_max = take("x-max").map(|v| parse_f64("x-max", &v)).transpose()?;
        let ks_flt_max = take("ks-flt-max")
            .map(|v| parse_f64("ks-flt-max", &v))
            .transpose()?
            .unwrap_or(0.08);
        let ks_self_max = take("ks-self-max")
            .map(|v| parse_f64("ks-self-max", &v))
            .transpose()?
            .unwrap_or(0.05);
        let rms_max = take("rms-max")
            .map(|v| parse_f64("rms-max", &v))
            .transpose()?
            .unwrap_or(0.05);
        let out = PathBuf::from(take("out").unwrap_or_else(|| "owalk-out".to_string()));
        let workers = take("workers")
            .map(|v| parse_u64("workers", &v))
            .transpose()?
            .unwrap_or(0) as usize;

        if let Some(key) = map.keys().next() {
            return Err(CliError::Config(format!("unknown key `{key}`")));
        }

        let config = RunConfig {
            experiment,
            system,
            f,
            mode,
            x,
            n,
            n_grid,
            replicas,
            samples,
            seed,
            max_lag,
            t,
            dt,
            h,
            x_max,
            ks_flt_max,
            ks_self_max,
            rms_max,
            out,
            workers,
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), CliError> {
        // fail fast on unresolvable presets
        let _ = self.system_spec()?;
        if self.replicas == 0 {
            return Err(CliError::Config("replicas must be at least 1".into()));
        }
        match self.experiment {
            ExperimentKind::WalkReturns | ExperimentKind::Slln | ExperimentKind::Scaling => {
                if self.n_grid.len() < 2 || self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(CliError::Config(
                        "n-grid must have >= 2 strictly increasing entries".into(),
                    ));
                }
                if self.experiment == ExperimentKind::Scaling && self.n_grid.len() < 4 {
                    return Err(CliError::Config(
                        "scaling needs an n-grid of at least 4 points".into(),
                    ));
                }
            }
            ExperimentKind::EmbeddingCheck => {
                if self.n == 0 {
                    return Err(CliError::Config("n must be positive".into()));
                }
            }
            ExperimentKind::Flt => {
                if self.n < 1 << 16 {
                    return Err(CliError::Config(
                        "flt needs n >= 2^16 (quarter-length samples must stay >= 2^14)".into(),
                    ));
                }
            }
            ExperimentKind::Admissibility if self.samples < 300 => {
                return Err(CliError::Config(
                    "admissibility needs samples >= 300".into(),
                ));
            }
            _ => {}
        }
        Ok(())
    }

    pub fn system_spec(&self) -> Result<SystemSpec, CliError> {
        let kind = parse_system_kind(&self.system)?;
        let f = parse_generating_function(&self.f)?;
        Ok(SystemSpec::new(kind, f)?)
    }

    /// The lattice configuration: quenched mode pins one environment point
    /// for the whole ensemble (from `x` for scalar systems, from the seed
    /// for shift systems), annealed mode redraws it per replica.
    pub fn lattice(&self) -> Result<LatticeConfig, CliError> {
        let spec = self.system_spec()?;
        let mode = if self.mode == "annealed" {
            FieldModeConfig::Annealed
        } else {
            let point = match self.x {
                Some(x) => spec.point_from_scalar(x)?,
                None => {
                    let mut rng = RngStream::new(self.seed).derive(domain::POINT, 0);
                    spec.sample_point(&mut rng)
                }
            };
            FieldModeConfig::Quenched(point)
        };
        Ok(LatticeConfig { spec, mode })
    }

    pub fn delta_x_max(&self, t: f64) -> f64 {
        self.x_max.unwrap_or(5.0 * t.sqrt())
    }

    /// Echo of the resolved configuration for the report. Excludes `out`
    /// and `workers`: neither may influence report bytes.
    pub fn echo(&self) -> BTreeMap<String, String> {
        let mut map = BTreeMap::new();
        let mut put = |k: &str, v: String| {
            map.insert(k.to_string(), v);
        };
        put("experiment", self.experiment.to_string());
        put("system", self.system.clone());
        put("f", self.f.clone());
        put("mode", self.mode.clone());
        if let Some(x) = self.x {
            put("x", x.to_string());
        }
        put("n", self.n.to_string());
        if !self.n_grid.is_empty() {
            let grid: Vec<String> = self.n_grid.iter().map(|n| n.to_string()).collect();
            put("n-grid", grid.join(","));
        }
        put("replicas", self.replicas.to_string());
        put("samples", self.samples.to_string());
        put("seed", self.seed.to_string());
        put("max-lag", self.max_lag.to_string());
        put("t", self.t.to_string());
        put("dt", self.dt.to_string());
        put("h", self.h.to_string());
        put("x-max", self.delta_x_max(self.t).to_string());
        put("ks-flt-max", self.ks_flt_max.to_string());
        put("ks-self-max", self.ks_self_max.to_string());
        put("rms-max", self.rms_max.to_string());
        map
    }
}
