//! Acceptance suite: one test per shipping criterion, each printing a
//! PASS/FAIL line (visible with `cargo test -- --nocapture`).
//!
//! Run with: `cargo test -p mlpolar --test acceptance`

mod common;

use common::{lane_vs_matrix_worst_dev, AffineOracle};
use mlpolar::codec::{sample_error_with_rng, simulate_with_report};
use mlpolar::{
    asymptotic_fractions, certified_set_size_check, construct, sc_decode, sweep, transform, ChannelSpec,
    Direction, Limits, PauliLabel, SchedulePolicy, SideInfo, ZPair,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use std::time::Instant;

fn report_line(name: &str, pass: bool, detail: &str) {
    println!("{}: {name} ({detail})", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "{name}: {detail}");
}

const TABLE_TOL: f64 = 2e-5;

/// Reference five-decimal table fractions for erasure 0.1 at depth 20,
/// delta 1e-6: (|A|/N, (|B|+|C|)/N, |D|/N) per schedule.
const FIXED_ROW: (f64, f64, f64) = (0.49438, 0.03021, 0.00046);
const ADAPTIVE_ROW: (f64, f64, f64) = (0.64493, 0.07359, 0.00071);

#[test]
fn criterion_01_depth20_table_reproduction() {
    let t0 = Instant::now();
    let fixed = sweep(0.1, 20, SchedulePolicy::FixedL, 1e-6).unwrap();
    let adaptive = sweep(0.1, 20, SchedulePolicy::Adaptive, 1e-6).unwrap();
    let elapsed = t0.elapsed();
    let mut pass = elapsed.as_secs_f64() < 10.0;
    let mut detail = format!("runtime {elapsed:?}");
    for (rep, want) in [(&fixed, FIXED_ROW), (&adaptive, ADAPTIVE_ROW)] {
        let (fa, fbc, fd, _) = rep.fractions();
        let ok = (fa - want.0).abs() <= TABLE_TOL
            && (fbc - want.1).abs() <= TABLE_TOL
            && (fd - want.2).abs() <= TABLE_TOL;
        detail.push_str(&format!(
            "; {}: A={fa:.5} B+C={fbc:.5} D={fd:.5} vs {want:?}",
            rep.policy.name()
        ));
        pass &= ok;
    }
    report_line("depth-20 table reproduction", pass, &detail);
}

#[test]
fn criterion_02_asymptotic_fractions_and_convergence() {
    let (fa, fbc, fd) = asymptotic_fractions(ZPair::new(0.1, 0.1).unwrap());
    let mut pass = (fa - 0.81).abs() <= 1e-12
        && (fbc - 0.18).abs() <= 1e-12
        && (fd - 0.01).abs() <= 1e-12;
    let mut detail = format!("limits ({fa}, {fbc}, {fd})");
    for policy in [SchedulePolicy::FixedL, SchedulePolicy::Adaptive] {
        let mut last = -1.0;
        for n in [10usize, 14, 18, 20] {
            let cov = sweep(0.1, n, policy, 1e-6).unwrap().covered_fraction();
            pass &= cov > last;
            last = cov;
        }
        detail.push_str(&format!("; {} covered@20={last:.5}", policy.name()));
        pass &= last <= 0.81 + 0.18 + 0.01 + 1e-12;
    }
    report_line("asymptotic fractions and monotone coverage", pass, &detail);
}

#[test]
fn criterion_03_martingale_equality_depth_20() {
    let mut pass = true;
    let mut detail = String::new();
    for policy in [SchedulePolicy::FixedL, SchedulePolicy::Adaptive] {
        let rep = sweep(0.1, 20, policy, 1e-6).unwrap();
        let n = rep.records.len() as f64;
        let mean = mlpolar::report::pairwise_sum_by(&rep.records, |r| r.z1 * r.z2) / n;
        pass &= (mean - 0.01).abs() <= 1e-12;
        detail.push_str(&format!("{}: {mean:.16}; ", rep.policy.name()));
    }
    report_line("product-martingale equality at depth 20", pass, &detail);
}

#[test]
fn criterion_04_information_conservation_every_depth() {
    let mut pass = true;
    let mut worst = 0.0f64;
    for policy in [SchedulePolicy::FixedL, SchedulePolicy::Adaptive] {
        for n in 1..=20usize {
            let rep = sweep(0.1, n, policy, 1e-6).unwrap();
            let total = rep.records.len() as f64;
            let mean =
                mlpolar::report::pairwise_sum_by(&rep.records, |r| 2.0 - r.z1 - r.z2) / total;
            worst = worst.max((mean - 1.8).abs());
            pass &= (mean - 1.8).abs() <= 1e-9;
        }
    }
    report_line(
        "information conservation at every depth",
        pass,
        &format!("worst |mean - 1.8| = {worst:.3e}"),
    );
}

#[test]
fn criterion_05_lane_matches_generic_recursion() {
    let mut pass = true;
    let mut worst = 0.0f64;
    for eps in [0.1, 0.3, 0.5, 0.9] {
        for policy in [
            SchedulePolicy::FixedL,
            SchedulePolicy::Alternating,
            SchedulePolicy::Adaptive,
        ] {
            for n in 1..=6usize {
                let dev = lane_vs_matrix_worst_dev(eps, n, policy, 1e-6);
                worst = worst.max(dev);
                pass &= dev <= 1e-9;
            }
        }
    }
    report_line(
        "erasure lane vs generic recursion",
        pass,
        &format!("worst deviation {worst:.3e} over eps x schedule x depth<=6"),
    );
}

#[test]
fn criterion_06_lemma_property_suites() {
    let results = mlpolar::verify::lemma_suite(1000, 20260809).unwrap();
    let mut pass = true;
    let mut detail = String::new();
    for r in &results {
        if !r.passed() {
            pass = false;
            detail.push_str(&format!("{} failed; ", r.name));
        }
    }
    if pass {
        detail = format!("{} properties, 1000 channels, zero failures", results.len());
    }
    report_line("single-split lemma suites", pass, &detail);
}

#[test]
fn criterion_07_two_step_schedule_equivalence() {
    let results = mlpolar::verify::equivalence_suite(100, 20260809).unwrap();
    let pass = results.iter().all(|r| r.passed());
    let worst = results
        .iter()
        .map(|r| r.worst_slack)
        .fold(f64::NEG_INFINITY, f64::max);
    report_line(
        "alternating/fixed two-step equivalence",
        pass,
        &format!("100 channels, worst metric deviation {worst:.3e}"),
    );
}

#[test]
fn criterion_08_set_size_bounds() {
    let mut pass = true;
    let mut detail = String::new();
    for eps in [0.1, 0.5] {
        let rep = sweep(eps, 20, SchedulePolicy::FixedL, 1e-6).unwrap();
        let p10 = rep.set_size_check();
        pass &= p10.bound_d.holds && p10.bound_bc.holds;
        detail.push_str(&format!(
            "erasure {eps}: D {:.5}<={:.5}; ",
            p10.bound_d.lhs, p10.bound_d.rhs
        ));
    }
    // Exact synthesis cannot reach depth 8 for non-erasure channels (the
    // output alphabet squares per conditioned step), so the bounds are
    // checked by certified one-sided counts: exact leaves while the
    // component budget lasts, provable bound pairs plus the conserved
    // information budget for the rest.
    let mut rng = ChaCha12Rng::seed_from_u64(80);
    let limits = Limits {
        max_components: 4096,
        ..Limits::default()
    };
    let mut certified = 0;
    for _ in 0..20 {
        let mut p = [0.0f64; 4];
        let mut s = 0.0;
        for e in p.iter_mut() {
            *e = -rng.gen::<f64>().ln();
            s += *e;
        }
        for e in p.iter_mut() {
            *e /= s;
        }
        let comps = ChannelSpec::pauli(p).components().unwrap();
        let cert = certified_set_size_check(&comps, 8, 0.1, &limits).unwrap();
        if cert.bound_d.holds && cert.bound_bc.holds {
            certified += 1;
        } else {
            pass = false;
            detail.push_str(&format!("pauli {p:?} failed certification; "));
        }
    }
    detail.push_str(&format!("{certified}/20 random Pauli channels certified at depth 8"));
    report_line("set-size bounds", pass, &detail);
}

#[test]
fn criterion_09_decoder_correctness() {
    let mut pass = true;
    let mut detail = String::new();

    // (a) N=16 erasure 0.3 against the affine counting oracle
    let spec = ChannelSpec::erasure(0.3);
    let report = construct(&spec, 4, SchedulePolicy::FixedL, 1e-3, &Limits::default(), false)
        .unwrap();
    let oracle = AffineOracle::new(&report);
    let mut rng = ChaCha12Rng::seed_from_u64(90);
    let trials = 1000;
    let mut agree = 0;
    let mut off_tie = 0;
    for _ in 0..trials {
        let (errors, obs) = sample_error_with_rng(&spec, 16, &mut rng).unwrap();
        let truth = transform(&errors, &report.gammas, Direction::Inverse).unwrap();
        let side = SideInfo::from_truth(&report, &truth).unwrap();
        let decoded = sc_decode(&obs, &report, &side).unwrap();
        let erased: Vec<bool> = obs.iter().map(|row| row[1] > 0.0).collect();
        let (expected, ties) = oracle.decode(&erased, &side);
        if decoded == expected {
            agree += 1;
        } else {
            let first = (0..16).find(|&i| decoded[i] != expected[i]).unwrap();
            if !ties[first] {
                off_tie += 1;
            }
        }
    }
    pass &= agree * 100 >= trials * 99 && off_tie == 0;
    detail.push_str(&format!("oracle agreement {agree}/{trials} (off-tie {off_tie}); "));

    // (b) transform round trip at block length 1024
    let tree = mlpolar::report::GammaTree::for_policy(SchedulePolicy::Alternating, 10);
    let mut ok_rt = true;
    for _ in 0..1000 {
        let v: Vec<PauliLabel> = (0..1024)
            .map(|_| PauliLabel::from_index(rng.gen_range(0..4)))
            .collect();
        let f = transform(&v, &tree, Direction::Forward).unwrap();
        if transform(&f, &tree, Direction::Inverse).unwrap() != v {
            ok_rt = false;
            break;
        }
    }
    pass &= ok_rt;
    detail.push_str(&format!("round-trip@1024 ok={ok_rt}; "));

    // (c) frame-error rate against the decoding union bound
    let spec = ChannelSpec::erasure(0.1);
    let report = construct(&spec, 10, SchedulePolicy::FixedL, 1e-3, &Limits::default(), false)
        .unwrap();
    let fer_report = simulate_with_report(&spec, &report, 10_000, 417).unwrap();
    let fer = fer_report.fer();
    let se = (fer * (1.0 - fer) / fer_report.trials as f64).sqrt();
    let bound = report.union_bound();
    pass &= fer <= bound + 3.0 * se;
    detail.push_str(&format!("fer {fer} vs union bound {bound:.4} (se {se:.2e})"));
    report_line("decoder correctness", pass, &detail);
}

#[test]
fn criterion_10_fast_polarization_sanity() {
    let rep = sweep(0.1, 20, SchedulePolicy::FixedL, 1e-6).unwrap();
    let mut worst_noiseless_z = 0.0f64;
    for r in &rep.records {
        if r.class == mlpolar::ChannelClass::Noiseless {
            worst_noiseless_z = worst_noiseless_z.max(r.z1.max(r.z2));
        }
    }
    // reporting threshold 2^(-2^(0.2 * 10))
    let delta2 = (2.0f64).powf(-(2.0f64.powf(0.2 * 10.0)));
    let count = rep
        .records
        .iter()
        .filter(|r| r.z1.max(r.z2) < delta2)
        .count();
    let pass = worst_noiseless_z < 1e-6 && count > 0;
    report_line(
        "fast polarization sanity",
        pass,
        &format!("max noiseless Z {worst_noiseless_z:.2e}; {count} indices below {delta2:.3e}"),
    );
}
