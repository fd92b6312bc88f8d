//! Decoder correctness against independent sequential-argmax oracles, and
//! the genie-aided statistics that pin the transform wiring convention.

mod common;

use common::{enumeration_oracle, AffineOracle};
use mlpolar::codec::sample_error_with_rng;
use mlpolar::{
    construct, sc_decode, transform, ChannelSpec, Direction, Limits, PauliLabel, SchedulePolicy,
    SideInfo,
};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

fn rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

#[test]
fn n4_erasure_decisions_match_weighted_enumeration() {
    let spec = ChannelSpec::erasure(0.3);
    let report = construct(&spec, 2, SchedulePolicy::FixedL, 0.1, &Limits::default(), false)
        .unwrap();
    let mut r = rng(101);
    for _ in 0..400 {
        let (errors, obs) = sample_error_with_rng(&spec, 4, &mut r).unwrap();
        let truth = transform(&errors, &report.gammas, Direction::Inverse).unwrap();
        let side = SideInfo::from_truth(&report, &truth).unwrap();
        let decoded = sc_decode(&obs, &report, &side).unwrap();
        let (oracle, _) = enumeration_oracle(&obs, &report, &side);
        assert_eq!(decoded, oracle);
    }
}

#[test]
fn n4_pauli_decisions_match_weighted_enumeration_outside_ties() {
    let spec = ChannelSpec::pauli([0.6, 0.2, 0.12, 0.08]);
    let report = construct(&spec, 2, SchedulePolicy::FixedL, 0.2, &Limits::default(), false)
        .unwrap();
    let mut r = rng(55);
    let mut mismatches_at_ties = 0;
    for _ in 0..400 {
        let (errors, obs) = sample_error_with_rng(&spec, 4, &mut r).unwrap();
        let truth = transform(&errors, &report.gammas, Direction::Inverse).unwrap();
        let side = SideInfo::from_truth(&report, &truth).unwrap();
        let decoded = sc_decode(&obs, &report, &side).unwrap();
        let (oracle, ties) = enumeration_oracle(&obs, &report, &side);
        for i in 0..decoded.len() {
            if decoded[i] != oracle[i] {
                assert!(ties[i], "disagreement outside a posterior tie at index {i}");
                mismatches_at_ties += 1;
                break;
            }
        }
    }
    // ties under a dense Pauli prior have measure zero
    assert_eq!(mismatches_at_ties, 0);
}

#[test]
fn n16_erasure_matches_affine_counting_oracle() {
    let spec = ChannelSpec::erasure(0.3);
    let report = construct(&spec, 4, SchedulePolicy::FixedL, 1e-3, &Limits::default(), false)
        .unwrap();
    let oracle = AffineOracle::new(&report);
    let mut r = rng(977);
    let trials = 1000;
    let mut agree = 0;
    for _ in 0..trials {
        let (errors, obs) = sample_error_with_rng(&spec, 16, &mut r).unwrap();
        let truth = transform(&errors, &report.gammas, Direction::Inverse).unwrap();
        let side = SideInfo::from_truth(&report, &truth).unwrap();
        let decoded = sc_decode(&obs, &report, &side).unwrap();
        let erased: Vec<bool> = errors
            .iter()
            .zip(obs.iter())
            .map(|(_, row)| row[1] > 0.0)
            .collect();
        let (expected, ties) = oracle.decode(&erased, &side);
        if decoded == expected {
            agree += 1;
        } else {
            for i in 0..decoded.len() {
                if decoded[i] != expected[i] {
                    assert!(ties[i], "disagreement outside an exact posterior tie");
                    break;
                }
            }
        }
    }
    assert!(
        agree * 100 >= trials * 99,
        "only {agree}/{trials} trials matched the oracle"
    );
}

#[test]
fn fully_pinned_side_info_reproduces_truth() {
    // every position erased, every index carries both exponents
    let spec = ChannelSpec::erasure(1.0);
    let report = construct(&spec, 3, SchedulePolicy::FixedL, 0.1, &Limits::default(), false)
        .unwrap();
    let mut r = rng(5);
    for _ in 0..50 {
        let (errors, obs) = sample_error_with_rng(&spec, 8, &mut r).unwrap();
        let truth = transform(&errors, &report.gammas, Direction::Inverse).unwrap();
        let side = SideInfo::from_truth(&report, &truth).unwrap();
        let decoded = sc_decode(&obs, &report, &side).unwrap();
        assert_eq!(decoded, truth);
    }
}

/// Pinned-bit fractions under genie-aided decoding converge to the
/// closed-form partial-channel parameters; this is the check that fails
/// under any inconsistent stage/wiring convention.
#[test]
fn genie_aided_pinning_matches_closed_forms() {
    for (eps, n, seed) in [(0.2, 3usize, 21u64), (0.5, 4, 22)] {
        let spec = ChannelSpec::erasure(eps);
        let size = 1usize << n;
        let report =
            construct(&spec, n, SchedulePolicy::FixedL, 1e-3, &Limits::default(), false).unwrap();
        let trials = 100_000usize;
        let mut r = rng(seed);
        let mut x_pinned = vec![0usize; size];
        let mut z_pinned = vec![0usize; size];
        for _ in 0..trials {
            let (errors, obs) = sample_error_with_rng(&spec, size, &mut r).unwrap();
            let truth = transform(&errors, &report.gammas, Direction::Inverse).unwrap();
            let rows = mlpolar::genie_decision_rows(&obs, &report, &truth).unwrap();
            for (i, row) in rows.iter().enumerate() {
                let achievable: Vec<usize> =
                    (0..4).filter(|&u| row[u] > 0.0).collect();
                if achievable.iter().all(|&u| u >> 1 == achievable[0] >> 1) {
                    x_pinned[i] += 1;
                }
                if achievable.iter().all(|&u| u & 1 == achievable[0] & 1) {
                    z_pinned[i] += 1;
                }
            }
        }
        for (i, rec) in report.records.iter().enumerate() {
            let t = trials as f64;
            // x-exponent is pinned unless the first partial channel erases it
            for (pinned, z) in [(x_pinned[i], rec.z1), (z_pinned[i], rec.z2)] {
                let expect = 1.0 - z;
                let got = pinned as f64 / t;
                let se = (expect * (1.0 - expect) / t).sqrt();
                assert!(
                    (got - expect).abs() <= 3.0 * se + 1e-9,
                    "index {i}: pinned fraction {got} vs {expect} (se {se})"
                );
            }
        }
    }
}

#[test]
fn side_info_shape_mismatch_is_rejected() {
    let spec = ChannelSpec::erasure(0.3);
    let report = construct(&spec, 3, SchedulePolicy::FixedL, 0.1, &Limits::default(), false)
        .unwrap();
    let obs = vec![[1.0, 0.0, 0.0, 0.0]; 4];
    let side = SideInfo::from_truth(&report, &vec![PauliLabel::I; 8]).unwrap();
    assert!(sc_decode(&obs, &report, &side).is_err());
}

#[test]
fn observation_rows_must_be_nonzero() {
    let spec = ChannelSpec::erasure(0.3);
    let report = construct(&spec, 2, SchedulePolicy::FixedL, 0.1, &Limits::default(), false)
        .unwrap();
    let mut r = rng(1);
    let (errors, mut obs) = sample_error_with_rng(&spec, 4, &mut r).unwrap();
    let truth = transform(&errors, &report.gammas, Direction::Inverse).unwrap();
    let side = SideInfo::from_truth(&report, &truth).unwrap();
    obs[2] = [0.0; 4];
    assert!(sc_decode(&obs, &report, &side).is_err());
}
