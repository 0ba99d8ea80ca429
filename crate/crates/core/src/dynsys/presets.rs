//! String-addressable presets for systems and generating functions.

use super::{GeneratingFunction, SystemKind};
use crate::error::CoreError;

/// Golden-ratio angle, the classic badly-approximable irrational.
pub const GOLDEN_ANGLE: f64 = 0.618_033_988_749_894_9;
/// A Liouville-like angle, extremely well approximable by rationals.
pub const LIOUVILLE_ANGLE: f64 = 0.110_001;

const DEFAULT_MP_BURN_IN: u64 = 10_000;

/// Parses a system preset: `bernoulli`, `markov:rho=0.5`,
/// `rotation:alpha=0.618034` (also `alpha=golden` / `alpha=liouville`),
/// `mp:alpha=0.25[,burnin=10000]`, `identity`.
pub fn parse_system_kind(name: &str) -> Result<SystemKind, CoreError> {
    let (head, args) = split_preset(name);
    match head {
        "bernoulli" => {
            no_args(name, &args)?;
            Ok(SystemKind::BernoulliShift)
        }
        "identity" => {
            no_args(name, &args)?;
            Ok(SystemKind::Identity)
        }
        "markov" => {
            let hold = required_f64(name, &args, "rho")?;
            only_keys(name, &args, &["rho"])?;
            Ok(SystemKind::MarkovShift { hold })
        }
        "rotation" => {
            let raw = required(name, &args, "alpha")?;
            let angle = match raw.as_str() {
                "golden" => GOLDEN_ANGLE,
                "liouville" => LIOUVILLE_ANGLE,
                other => parse_f64(name, other)?,
            };
            only_keys(name, &args, &["alpha"])?;
            Ok(SystemKind::Rotation { angle })
        }
        "mp" => {
            let alpha = required_f64(name, &args, "alpha")?;
            let burn_in = match args.iter().find(|(k, _)| k == "burnin") {
                Some((_, v)) => v
                    .parse::<u64>()
                    .map_err(|_| CoreError::UnknownPreset(name.to_string()))?,
                None => DEFAULT_MP_BURN_IN,
            };
            only_keys(name, &args, &["alpha", "burnin"])?;
            Ok(SystemKind::MannevillePomeau { alpha, burn_in })
        }
        _ => Err(CoreError::UnknownPreset(name.to_string())),
    }
}

/// Parses a generating-function preset: `proj`, `f1`, `f2`, `f3`, `fmp`,
/// `const:0.5`.
pub fn parse_generating_function(name: &str) -> Result<GeneratingFunction, CoreError> {
    match name {
        "proj" => Ok(GeneratingFunction::Projection),
        "f1" => Ok(GeneratingFunction::Linear),
        "f2" => Ok(GeneratingFunction::CosineSquared),
        "f3" => Ok(GeneratingFunction::HalfIndicator),
        "fmp" => Ok(GeneratingFunction::MapIncrement),
        other => match other.strip_prefix("const:") {
            Some(v) => {
                let c = v
                    .parse::<f64>()
                    .map_err(|_| CoreError::UnknownPreset(name.to_string()))?;
                GeneratingFunction::constant(c)
            }
            None => Err(CoreError::UnknownPreset(name.to_string())),
        },
    }
}

fn split_preset(name: &str) -> (&str, Vec<(String, String)>) {
    match name.split_once(':') {
        None => (name, Vec::new()),
        Some((head, rest)) => {
            let args = rest
                .split(',')
                .filter(|s| !s.is_empty())
                .map(|kv| match kv.split_once('=') {
                    Some((k, v)) => (k.trim().to_string(), v.trim().to_string()),
                    None => (kv.trim().to_string(), String::new()),
                })
                .collect();
            (head, args)
        }
    }
}

fn no_args(name: &str, args: &[(String, String)]) -> Result<(), CoreError> {
    if args.is_empty() {
        Ok(())
    } else {
        Err(CoreError::UnknownPreset(name.to_string()))
    }
}

fn only_keys(name: &str, args: &[(String, String)], keys: &[&str]) -> Result<(), CoreError> {
    if args.iter().all(|(k, _)| keys.contains(&k.as_str())) {
        Ok(())
    } else {
        Err(CoreError::UnknownPreset(name.to_string()))
    }
}

fn required(name: &str, args: &[(String, String)], key: &str) -> Result<String, CoreError> {
    args.iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v.clone())
        .ok_or_else(|| CoreError::UnknownPreset(name.to_string()))
}

fn required_f64(name: &str, args: &[(String, String)], key: &str) -> Result<f64, CoreError> {
    parse_f64(name, &required(name, args, key)?)
}

fn parse_f64(name: &str, raw: &str) -> Result<f64, CoreError> {
    raw.parse::<f64>()
        .map_err(|_| CoreError::UnknownPreset(name.to_string()))
}

#[derive(Debug, Clone)]
pub struct PresetEntry {
    pub name: String,
    pub summary: String,
    pub note: String,
}

/// Stable catalog of presets with admissibility and walk-behavior notes.
pub fn catalog() -> Vec<PresetEntry> {
    let entry = |name: &str, summary: &str, note: &str| PresetEntry {
        name: name.to_string(),
        summary: summary.to_string(),
        note: note.to_string(),
    };
    vec![
        entry(
            "bernoulli",
            "shift over i.i.d. uniform coordinates",
            "with f=proj the admissibility integral is pi: walk transient",
        ),
        entry(
            "markov:rho=R",
            "shift over a hold-or-redraw chain, correlations decay like R^|lag|",
            "with f=proj admissible for every R in [0,1): walk transient",
        ),
        entry(
            "rotation:alpha=A",
            "circle rotation by A (accepts alpha=golden, alpha=liouville)",
            "admissible f (e.g. f1) gives transience for every angle; with f3 \
             the lattice is deterministic, see the combinations below",
        ),
        entry(
            "mp:alpha=A,burnin=B",
            "intermittent interval map x -> x + x^(1+A) mod 1, sampled by burn-in",
            "with f=fmp and A < 1/3 the admissibility integral is finite: walk transient",
        ),
        entry(
            "identity",
            "trivial system, uniform measure",
            "useful for plain Monte Carlo integrals over [0,1]",
        ),
        entry(
            "f=proj",
            "coordinate projection (shift systems)",
            "admissible under the product measure (integral pi)",
        ),
        entry(
            "f=f1",
            "f(x) = x",
            "admissible (integral pi) despite touching 0 and 1",
        ),
        entry(
            "f=f2",
            "f(x) = cos^2(2 pi x)",
            "admissibility integral diverges; recurrence vs transience unknown",
        ),
        entry(
            "f=f3",
            "indicator of [0, 1/2)",
            "0/1-valued, never admissible; orientations become deterministic",
        ),
        entry(
            "f=fmp",
            "f(x) = (1 + x - T(x)) / 2",
            "mean 1/2 for any measure-preserving T; admissible on mp:alpha<1/3",
        ),
        entry(
            "f=const:c",
            "constant c in [0,1]",
            "const:0.5 gives the homogeneous i.i.d. lattice, integral exactly 2",
        ),
        entry(
            "rotation:alpha=0.5 + f3, quenched x=0.25",
            "strips of height 1 alternately oriented left/right",
            "known recurrent: return counts keep growing",
        ),
        entry(
            "rotation:alpha=0 + f3, quenched x=0.25",
            "every line oriented the same way",
            "known transient: return counts stabilize",
        ),
        entry(
            "rotation:alpha=golden|liouville + f3",
            "quasi-periodic strip lattices",
            "exploratory only: behavior conjectured to depend on how well the \
             angle is approximated by rationals",
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_documented_presets() {
        assert!(matches!(
            parse_system_kind("bernoulli").unwrap(),
            SystemKind::BernoulliShift
        ));
        assert!(matches!(
            parse_system_kind("identity").unwrap(),
            SystemKind::Identity
        ));
        match parse_system_kind("markov:rho=0.5").unwrap() {
            SystemKind::MarkovShift { hold } => assert_eq!(hold, 0.5),
            other => panic!("{other:?}"),
        }
        match parse_system_kind("rotation:alpha=0.618034").unwrap() {
            SystemKind::Rotation { angle } => assert!((angle - 0.618034).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
        match parse_system_kind("rotation:alpha=golden").unwrap() {
            SystemKind::Rotation { angle } => assert_eq!(angle, GOLDEN_ANGLE),
            other => panic!("{other:?}"),
        }
        match parse_system_kind("mp:alpha=0.25").unwrap() {
            SystemKind::MannevillePomeau { alpha, burn_in } => {
                assert_eq!(alpha, 0.25);
                assert_eq!(burn_in, DEFAULT_MP_BURN_IN);
            }
            other => panic!("{other:?}"),
        }
        match parse_system_kind("mp:alpha=0.25,burnin=500").unwrap() {
            SystemKind::MannevillePomeau { burn_in, .. } => assert_eq!(burn_in, 500),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parses_generating_functions() {
        assert!(matches!(
            parse_generating_function("proj").unwrap(),
            GeneratingFunction::Projection
        ));
        assert!(matches!(
            parse_generating_function("f3").unwrap(),
            GeneratingFunction::HalfIndicator
        ));
        match parse_generating_function("const:0.5").unwrap() {
            GeneratingFunction::Constant(c) => assert_eq!(c, 0.5),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_unknown_or_malformed() {
        assert!(parse_system_kind("lorenz").is_err());
        assert!(parse_system_kind("markov").is_err());
        assert!(parse_system_kind("markov:rho=x").is_err());
        assert!(parse_system_kind("rotation:beta=1").is_err());
        assert!(parse_generating_function("f9").is_err());
        assert!(parse_generating_function("const:2.0").is_err());
    }

    #[test]
    fn catalog_mentions_key_lattices() {
        let cat = catalog();
        let all = cat
            .iter()
            .map(|e| format!("{} {} {}", e.name, e.summary, e.note))
            .collect::<Vec<_>>()
            .join("\n");
        assert!(all.contains("known recurrent"));
        assert!(all.contains("known transient"));
        assert!(all.contains("diverges"));
        assert!(all.contains("unknown"));
    }
}
