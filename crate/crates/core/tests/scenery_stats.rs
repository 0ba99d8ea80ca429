//! Distributional invariants of the scenery walk and the limit-process
//! simulator.

use oriented_walk::dynsys::{GeneratingFunction, SystemKind, SystemSpec};
use oriented_walk::lattice::{FieldModeConfig, LatticeConfig};
use oriented_walk::rng::{domain, RngStream};
use oriented_walk::scenery::{simulate_delta, DeltaConfig};
use oriented_walk::stats::{mean, variance};
use rayon::prelude::*;

fn iid_config() -> LatticeConfig {
    LatticeConfig {
        spec: SystemSpec::new(SystemKind::BernoulliShift, GeneratingFunction::Projection)
            .unwrap(),
        mode: FieldModeConfig::Annealed,
    }
}

/// The normalized scenery endpoint is symmetric about 0 on an i.i.d.
/// field: mean and skewness both vanish within 4 sigma.
#[test]
fn scenery_endpoint_is_symmetric() {
    let config = iid_config();
    let n = 1u64 << 16;
    let replicas = 2_000u64;
    let master = RngStream::new(641);
    let values: Vec<f64> = (0..replicas)
        .into_par_iter()
        .map(|r| {
            let mut rng = master.derive(domain::REPLICA, r);
            let mut field = config.make_field(&mut rng);
            let mut y = 0i64;
            let mut z = field.orientation(0) as i64;
            for _ in 0..n {
                y += rng.sign();
                z += field.orientation(y) as i64;
            }
            z as f64 / (n as f64).powf(0.75)
        })
        .collect();

    let m = mean(&values);
    let sd = variance(&values).sqrt();
    let k = values.len() as f64;
    assert!(
        m.abs() < 4.0 * sd / k.sqrt(),
        "mean {m} vs 4-sigma band {}",
        4.0 * sd / k.sqrt()
    );

    let skew = values
        .iter()
        .map(|v| {
            let d = (v - m) / sd;
            d * d * d
        })
        .sum::<f64>()
        / k;
    // sd of the sample skewness of a symmetric law is about sqrt(6/k)
    assert!(
        skew.abs() < 4.0 * (6.0 / k).sqrt(),
        "skewness {skew} vs band {}",
        4.0 * (6.0 / k).sqrt()
    );
}

/// Halving both discretization steps moves the variance estimate of the
/// limit process by less than 3%.
#[test]
fn delta_variance_is_stable_under_grid_refinement() {
    let samples = 20_000u64;
    let run = |dt: f64, h: f64, block: u64| -> f64 {
        let cfg = DeltaConfig {
            t: 1.0,
            dt,
            h,
            x_max: 5.0,
        };
        let master = RngStream::new(643).derive(domain::SPLIT, block);
        let values: Vec<f64> = (0..samples)
            .into_par_iter()
            .map(|i| {
                let mut rng = master.derive(domain::REPLICA, i);
                simulate_delta(&cfg, &mut rng).unwrap().value
            })
            .collect();
        variance(&values)
    };
    let coarse = run(1e-4, 0.02, 0);
    let fine = run(5e-5, 0.01, 1);
    let change = (fine - coarse).abs() / coarse;
    assert!(
        change < 0.03,
        "variance moved by {:.2}% under refinement ({coarse} -> {fine})",
        100.0 * change
    );
}
