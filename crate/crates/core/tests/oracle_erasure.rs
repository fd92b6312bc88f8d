//! Cross-engine oracles: the closed-form erasure lane against the generic
//! matrix recursion and the component engine.

mod common;

use common::lane_vs_matrix_worst_dev;
use mlpolar::{
    construct_components, construct_matrix, sweep_channel, BitLevelErasureChannel, ChannelSpec,
    Limits, SchedulePolicy,
};

use sweep_channel as lane_sweep;

#[test]
fn lane_matches_matrix_engine_on_plain_erasure() {
    for policy in [
        SchedulePolicy::FixedL,
        SchedulePolicy::Alternating,
        SchedulePolicy::Adaptive,
    ] {
        for n in 1..=4 {
            let worst = lane_vs_matrix_worst_dev(0.3, n, policy, 1e-3);
            assert!(worst <= 1e-9, "{policy:?} n={n}: worst {worst}");
        }
    }
}

#[test]
fn lane_matches_matrix_engine_on_bit_level_starts() {
    let limits = Limits::default();
    for (e1, e2, e3) in [(0.25, 0.1, 0.3), (0.0, 0.6, 0.2), (0.5, 0.0, 0.0)] {
        let start = BitLevelErasureChannel::new(e1, e2, e3).unwrap();
        for policy in [
            SchedulePolicy::FixedL,
            SchedulePolicy::Alternating,
            SchedulePolicy::Adaptive,
        ] {
            let lane = lane_sweep(start, 3, policy, 1e-2).unwrap();
            let matrix =
                construct_matrix(&start.to_quaternary().unwrap(), 3, policy, 1e-2, &limits)
                    .unwrap();
            assert_eq!(lane.gammas, matrix.gammas);
            for (l, m) in lane.records.iter().zip(matrix.records.iter()) {
                assert!((l.z1 - m.z1).abs() <= 1e-9, "{l:?} vs {m:?}");
                assert!((l.z2 - m.z2).abs() <= 1e-9);
                assert!((l.z_global - m.z_global).abs() <= 1e-9);
                assert_eq!(l.class, m.class);
            }
        }
    }
}

#[test]
fn component_engine_matches_lane_on_erasure_specs() {
    let spec = ChannelSpec::erasure(0.25);
    let limits = Limits::default();
    for policy in [
        SchedulePolicy::FixedL,
        SchedulePolicy::Alternating,
        SchedulePolicy::Adaptive,
    ] {
        let lane = sweep_channel(
            BitLevelErasureChannel::lower(0.25).unwrap(),
            5,
            policy,
            1e-3,
        )
        .unwrap();
        let comp =
            construct_components(&spec.components().unwrap(), 5, policy, 1e-3, &limits).unwrap();
        assert_eq!(lane.gammas, comp.gammas);
        for (l, c) in lane.records.iter().zip(comp.records.iter()) {
            assert!((l.z1 - c.z1).abs() <= 1e-9);
            assert!((l.z2 - c.z2).abs() <= 1e-9);
            assert_eq!(l.class, c.class);
        }
    }
}

#[test]
fn dispatch_routes_erasure_to_the_lane() {
    // depth 15 is far past the generic depth cap; only the lane can do it
    let spec = ChannelSpec::erasure(0.1);
    let rep = mlpolar::construct(&spec, 15, SchedulePolicy::FixedL, 1e-6, &Limits::default(), false)
        .unwrap();
    assert_eq!(rep.len(), 1 << 15);
    let err =
        mlpolar::construct(&spec, 15, SchedulePolicy::FixedL, 1e-6, &Limits::default(), true)
            .unwrap_err();
    assert!(matches!(err, mlpolar::Error::DepthCapExceeded { .. }));
}

#[test]
fn two_step_paths_are_schedule_equivalent_on_erasure() {
    let w = mlpolar::QuaternaryChannel::erasure(0.3).unwrap();
    let limits = Limits::default();
    for path in ["00", "01", "10", "11"] {
        let fixed = mlpolar::synthesize(&w, path, SchedulePolicy::FixedL, &limits).unwrap();
        let alt = mlpolar::synthesize(&w, path, SchedulePolicy::Alternating, &limits).unwrap();
        assert!(fixed.equivalent(&alt), "path {path}");
    }
}

#[test]
fn noiseless_channel_bound_holds_with_equality() {
    let spec = ChannelSpec::pauli([1.0, 0.0, 0.0, 0.0]);
    let rep = mlpolar::construct(&spec, 3, SchedulePolicy::FixedL, 1e-6, &Limits::default(), false)
        .unwrap();
    let p10 = rep.set_size_check();
    assert!(p10.bound_d.holds);
    assert_eq!(p10.bound_d.lhs, 0.0);
    assert_eq!(p10.bound_d.rhs, 0.0);
}

#[test]
fn lane_t_values_stay_in_range() {
    let rep = mlpolar::sweep(0.35, 10, SchedulePolicy::Adaptive, 1e-6).unwrap();
    assert!(rep
        .records
        .iter()
        .all(|r| (-1e-12..=2.0 + 1e-12).contains(&r.t_value())));
}

#[test]
fn longer_even_paths_stay_schedule_equivalent() {
    // depth-4 and depth-6 paths on narrow (erasure-family) channels, where
    // the matrix engine stays small
    let starts = [
        BitLevelErasureChannel::new(0.0, 0.0, 0.35).unwrap(),
        BitLevelErasureChannel::new(0.2, 0.1, 0.15).unwrap(),
    ];
    let limits = Limits::default();
    for start in starts {
        let w = start.to_quaternary().unwrap();
        for path in ["0110", "1010", "110100"] {
            let fixed = mlpolar::synthesize(&w, path, SchedulePolicy::FixedL, &limits).unwrap();
            let alt =
                mlpolar::synthesize(&w, path, SchedulePolicy::Alternating, &limits).unwrap();
            assert!(fixed.equivalent(&alt), "path {path}");
        }
    }
}
