//! Property tests of the structural invariants.

use oriented_walk::dynsys::{
    GeneratingFunction, OrientationField, SystemKind, SystemPoint, SystemSpec,
};
use oriented_walk::embedding::{local_times, vertical_walk};
use oriented_walk::lattice::{run_walk, verify_path, FieldModeConfig, LatticeConfig};
use oriented_walk::rng::RngStream;
use oriented_walk::stats::{exponent_fit, ks_two_sample};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// Local-time mass: the visit counts of an n-step path sum to n + 1.
    #[test]
    fn local_time_mass(seed in any::<u64>(), n in 1u64..100_000) {
        let mut rng = RngStream::new(seed);
        let path = vertical_walk(n, &mut rng);
        let lt = local_times(&path);
        prop_assert_eq!(lt.total(), n + 1);
        let (lo, hi) = lt.support();
        prop_assert!(lo >= -(n as i64) && hi <= n as i64);
    }

    /// Orientation fields are identical no matter the order of queries.
    #[test]
    fn field_order_independence(
        seed in any::<u64>(),
        hold in 0.0f64..0.95,
        mut levels in prop::collection::vec(-2_000i64..2_000, 1..64),
    ) {
        let spec = SystemSpec::new(
            SystemKind::MarkovShift { hold },
            GeneratingFunction::Projection,
        ).unwrap();
        let mut rng = RngStream::new(seed);
        let mut forward = OrientationField::annealed(spec, &mut rng.clone());
        let mut backward = OrientationField::annealed(spec, &mut rng);

        let fwd: Vec<i8> = levels.iter().map(|&y| forward.orientation(y)).collect();
        levels.reverse();
        let bwd: Vec<i8> = levels.iter().map(|&y| backward.orientation(y)).collect();
        let bwd_reversed: Vec<i8> = bwd.into_iter().rev().collect();
        prop_assert_eq!(fwd, bwd_reversed);
    }

    /// Every recorded walk transition is one of the three lattice edges.
    #[test]
    fn walk_paths_replay_against_their_field(seed in any::<u64>(), n in 1u64..2_000) {
        let config = LatticeConfig {
            spec: SystemSpec::new(
                SystemKind::MarkovShift { hold: 0.3 },
                GeneratingFunction::Projection,
            ).unwrap(),
            mode: FieldModeConfig::Annealed,
        };
        let mut rng = RngStream::new(seed);
        let mut field = config.make_field(&mut rng);
        let path = run_walk(n, &mut field, &mut rng, &[]);
        prop_assert!(verify_path(&path, &mut field).is_ok());
        prop_assert!(path.returns_to_origin <= n);
    }

    /// KS is symmetric and invariant under a common strictly increasing
    /// transform. Values live on a coarse lattice so the affine map cannot
    /// collapse distinct points.
    #[test]
    fn ks_symmetry_and_monotone_invariance(
        a in prop::collection::vec(-10_000i32..10_000, 1..200),
        b in prop::collection::vec(-10_000i32..10_000, 1..200),
    ) {
        let a: Vec<f64> = a.into_iter().map(|v| v as f64 / 256.0).collect();
        let b: Vec<f64> = b.into_iter().map(|v| v as f64 / 256.0).collect();
        let d_ab = ks_two_sample(&a, &b).unwrap().statistic;
        let d_ba = ks_two_sample(&b, &a).unwrap().statistic;
        prop_assert_eq!(d_ab, d_ba);
        prop_assert!((0.0..=1.0).contains(&d_ab));

        let ta: Vec<f64> = a.iter().map(|v| 2.0 * v + 1.0).collect();
        let tb: Vec<f64> = b.iter().map(|v| 2.0 * v + 1.0).collect();
        prop_assert_eq!(ks_two_sample(&ta, &tb).unwrap().statistic, d_ab);
    }

    /// The log-log fit recovers exact power laws to machine precision.
    #[test]
    fn exponent_fit_recovers_power_laws(
        slope in 0.1f64..2.0,
        coeff in 0.5f64..10.0,
    ) {
        let points: Vec<(f64, f64)> = (0..8)
            .map(|i| {
                let n = (1u64 << (10 + i)) as f64;
                (n, coeff * n.powf(slope))
            })
            .collect();
        let fit = exponent_fit(&points).unwrap();
        prop_assert!((fit.slope - slope).abs() < 1e-9);
        prop_assert!(fit.r_squared > 1.0 - 1e-9);
    }

    /// Quenched site draws depend only on (seed, level): replaying a field
    /// with the same seed reproduces it bit for bit.
    #[test]
    fn quenched_fields_replay(seed in any::<u64>(), x in 0.0f64..1.0) {
        let spec = SystemSpec::new(
            SystemKind::Rotation { angle: 0.37 },
            GeneratingFunction::Linear,
        ).unwrap();
        let mut f1 = OrientationField::quenched(spec, SystemPoint::Scalar(x), seed);
        let mut f2 = OrientationField::quenched(spec, SystemPoint::Scalar(x), seed);
        for y in -50..=50 {
            prop_assert_eq!(f1.orientation(y), f2.orientation(y));
        }
    }
}
