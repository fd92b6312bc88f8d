//! Randomized property suites over the channel operations: the inequality
//! and equality relations the synthesis machinery is expected to satisfy on
//! arbitrary channels. The command-line `verify` subcommand and the test
//! suite both run these.

use crate::channel::QuaternaryChannel;
use crate::erasure::BitLevelErasureChannel;
use crate::error::{Error, Result};
use crate::gamma::PairPermutation;
use crate::label::{PauliLabel, NONZERO_LABELS};
use crate::polar::combine_split;
use crate::report::pairwise_sum_by;
use crate::schedule::SchedulePolicy;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

const SLACK: f64 = 1e-9;

/// Outcome of one property over all samples.
#[derive(Clone, Debug)]
pub struct PropertyResult {
    pub name: &'static str,
    pub samples: usize,
    pub failures: usize,
    /// Worst margin observed: positive means the check came that close to
    /// (or past) the allowed slack; negative means comfortably inside.
    pub worst_slack: f64,
    pub counterexample: Option<String>,
}

impl PropertyResult {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            samples: 0,
            failures: 0,
            worst_slack: f64::NEG_INFINITY,
            counterexample: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    /// Records one violation margin; failure when it exceeds `tol`.
    fn record(&mut self, violation: f64, tol: f64, w: &QuaternaryChannel) {
        self.samples += 1;
        if violation > self.worst_slack {
            self.worst_slack = violation;
        }
        if violation > tol {
            self.failures += 1;
            if self.counterexample.is_none() {
                self.counterexample = Some(serialize_channel(w));
            }
        }
    }
}

fn serialize_channel(w: &QuaternaryChannel) -> String {
    let rows: Vec<Vec<f64>> = (0..4)
        .map(|x| w.columns().iter().map(|c| c[x]).collect())
        .collect();
    serde_json::to_string(&rows).unwrap_or_else(|_| "<unserializable>".into())
}

/// Random channel mix: dense rows, group channels, and bit-level erasures.
pub fn random_channel(rng: &mut impl Rng) -> QuaternaryChannel {
    match rng.gen_range(0..4u8) {
        0 | 1 => {
            let m = rng.gen_range(2..=8usize);
            let mut rows: [Vec<f64>; 4] = [vec![], vec![], vec![], vec![]];
            for row in rows.iter_mut() {
                let mut r: Vec<f64> = (0..m).map(|_| -rng.gen::<f64>().ln()).collect();
                let s: f64 = r.iter().sum();
                r.iter_mut().for_each(|v| *v /= s);
                *row = r;
            }
            QuaternaryChannel::from_rows(&rows).expect("normalized rows")
        }
        2 => QuaternaryChannel::from_pauli(random_dist(rng)).expect("normalized"),
        _ => {
            // keep one single-bit erasure off so the alphabet stays at 7
            let scale = rng.gen::<f64>();
            let (mut e1, mut e2) = (rng.gen::<f64>(), 0.0);
            if rng.gen::<bool>() {
                std::mem::swap(&mut e1, &mut e2);
            }
            let e3 = rng.gen::<f64>();
            let total = (e1 + e2 + e3).max(1.0);
            QuaternaryChannel::bit_level_erasure(
                scale * e1 / total,
                scale * e2 / total,
                scale * e3 / total,
            )
            .expect("valid triple")
            .reduce_outputs()
        }
    }
}

pub fn random_pauli_dist(rng: &mut impl Rng) -> [f64; 4] {
    random_dist(rng)
}

fn random_dist(rng: &mut impl Rng) -> [f64; 4] {
    let mut p = [0.0; 4];
    let mut s = 0.0;
    for e in p.iter_mut() {
        *e = -rng.gen::<f64>().ln();
        s += *e;
    }
    p.iter_mut().for_each(|v| *v /= s);
    p
}

fn log2e() -> f64 {
    std::f64::consts::E.log2()
}

/// Single-split lemma suite on `samples` random channels.
pub fn lemma_suite(samples: usize, seed: u64) -> Result<Vec<PropertyResult>> {
    if samples == 0 {
        return Err(Error::Spec("samples must be at least 1".into()));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let gl = PairPermutation::gamma_l();
    let mut pair_triangle = PropertyResult::new("pair-triangle (two high Z force the third)");
    let mut half_noisy_info = PropertyResult::new("half-noisy information window");
    let mut half_noisy_gap = PropertyResult::new("half-noisy information gap");
    let mut good_eq_1 = PropertyResult::new("conditioned-branch Z1 equality");
    let mut good_eq_2 = PropertyResult::new("conditioned-branch Z2 squaring");
    let mut partial_sum = PropertyResult::new("partial Z upper bound (sum)");
    let mut partial_max = PropertyResult::new("partial Z lower bound (max)");
    let mut info_partial = PropertyResult::new("information vs partial-Z bound");
    let mut split_rel_1 = PropertyResult::new("marginalized partial-1 doubling bound");
    let mut split_rel_2 = PropertyResult::new("marginalized partial-2 equality");
    let mut split_rel_3 = PropertyResult::new("conditioned partial-1 product equality");
    let mut split_rel_4 = PropertyResult::new("conditioned partial-2 upper bound");
    let mut info_lower = PropertyResult::new("information lower bound in Z");
    let mut info_upper = PropertyResult::new("information upper bound in Z");
    let mut info_conserved = PropertyResult::new("information conservation per split");

    for _ in 0..samples {
        let w = random_channel(&mut rng);
        let m = w.metric_vector();
        let ds = NONZERO_LABELS;

        for (k1, &d1) in ds.iter().enumerate() {
            for (k2, &d2) in ds.iter().enumerate() {
                if k1 == k2 {
                    continue;
                }
                let d3 = d1 ^ d2;
                let k3 = d3.index() - 1;
                let eps1 = (1.0 - m.z_d[k1]).max(0.0);
                let eps2 = (1.0 - m.z_d[k2]).max(0.0);
                let lower = 1.0 - 4.0 * (eps1.sqrt() + eps2.sqrt()).powi(2);
                pair_triangle.record(lower - m.z_d[k3], SLACK, &w);
            }
        }

        for (k3, &d3) in ds.iter().enumerate() {
            let others: Vec<usize> = (0..3).filter(|&k| k != k3).collect();
            let eps = m.z_d[others[0]]
                .max(m.z_d[others[1]])
                .max((1.0 - m.z_d[k3]).max(0.0));
            let i_partial = w.partial_channel(d3)?.mutual_information();
            half_noisy_info.record((1.0 - (1.0 + 2.0 * eps).log2()) - i_partial, SLACK, &w);
            let delta = (2.0 * eps).sqrt() + (1.0 + 2.0 * eps).log2();
            half_noisy_gap.record((m.i_sym - i_partial).abs() - delta, SLACK, &w);
        }

        let (bad, good) = combine_split(&w, &gl)?;
        let mg = good.metric_vector();
        let mb = bad.metric_vector();
        good_eq_1.record((mg.z_d[0] - m.z_d[1]).abs(), SLACK, &w);
        good_eq_2.record((mg.z_d[1] - m.z_d[0] * m.z_d[0]).abs(), SLACK, &w);

        for (k1, &_d1) in ds.iter().enumerate() {
            let others: Vec<usize> = (0..3).filter(|&k| k != k1).collect();
            let (za, zb) = (m.z_d[others[0]], m.z_d[others[1]]);
            partial_sum.record(m.z_partial[k1] - (za + zb), SLACK, &w);
            partial_max.record(za.max(zb) - m.z_partial[k1], SLACK, &w);
        }
        let bound: f64 = (0..3)
            .map(|k| {
                ((1.0 - m.z_d[k] * m.z_d[k]).max(0.0).sqrt()
                    + (1.0 - m.z_partial[k] * m.z_partial[k]).max(0.0).sqrt())
                    / 3.0
            })
            .sum();
        info_partial.record(m.i_sym - bound, SLACK, &w);

        split_rel_1.record(
            mb.z_partial[0] - (2.0 * m.z_partial[1] - m.z_partial[1] * m.z_partial[1]),
            SLACK,
            &w,
        );
        split_rel_2.record((mb.z_partial[1] - m.z_partial[0]).abs(), SLACK, &w);
        split_rel_3.record((mg.z_partial[0] - m.z_d[0] * m.z_partial[1]).abs(), SLACK, &w);
        split_rel_4.record(mg.z_partial[1] - m.z_partial[0], SLACK, &w);

        info_lower.record((4.0 / (1.0 + 3.0 * m.z_global)).log2() - m.i_sym, SLACK, &w);
        info_upper.record(
            m.i_sym - 6.0 * log2e() * (1.0 - m.z_global * m.z_global).max(0.0).sqrt(),
            SLACK,
            &w,
        );
        info_conserved.record((mb.i_sym + mg.i_sym - 2.0 * m.i_sym).abs(), SLACK, &w);
    }

    Ok(vec![
        pair_triangle,
        half_noisy_info,
        half_noisy_gap,
        good_eq_1,
        good_eq_2,
        partial_sum,
        partial_max,
        info_partial,
        split_rel_1,
        split_rel_2,
        split_rel_3,
        split_rel_4,
        info_lower,
        info_upper,
        info_conserved,
    ])
}

/// Two-step supermartingale and one-step product bounds on random channels.
pub fn martingale_suite(samples: usize, seed: u64) -> Result<Vec<PropertyResult>> {
    if samples == 0 {
        return Err(Error::Spec("samples must be at least 1".into()));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let gl = PairPermutation::gamma_l();
    let mut super_1 = PropertyResult::new("two-step partial-1 supermartingale");
    let mut super_2 = PropertyResult::new("two-step partial-2 supermartingale");
    let mut product = PropertyResult::new("one-step partial-product bound");
    let mut lane_product = PropertyResult::new("erasure partial-product equality");
    let mut lane_martingale = PropertyResult::new("erasure sweep product preservation");
    let mut lane_info = PropertyResult::new("erasure sweep information preservation");

    let generic_budget = samples.min(200);
    for _ in 0..generic_budget {
        // small alphabets keep the two-step channels manageable
        let w = loop {
            let c = random_channel(&mut rng);
            if c.num_outputs() <= 6 {
                break c;
            }
        };
        let m = w.metric_vector();
        let (bad, good) = combine_split(&w, &gl)?;
        let mut sums = [0.0f64; 2];
        for child in [&bad, &good] {
            let (b2, g2) = combine_split(child, &gl)?;
            for grand in [&b2, &g2] {
                sums[0] += grand.z_partial(PauliLabel::Z)?;
                sums[1] += grand.z_partial(PauliLabel::X)?;
            }
        }
        super_1.record(sums[0] - 4.0 * m.z_partial[0], SLACK, &w);
        super_2.record(sums[1] - 4.0 * m.z_partial[1], SLACK, &w);
        let prod_sum = bad.z_partial(PauliLabel::Z)? * bad.z_partial(PauliLabel::X)?
            + good.z_partial(PauliLabel::Z)? * good.z_partial(PauliLabel::X)?;
        product.record(prod_sum - 2.0 * m.z_partial[0] * m.z_partial[1], SLACK, &w);
    }

    for _ in 0..samples {
        let t = random_triple(&mut rng);
        let w = t.to_quaternary()?;
        let z = t.z_pair();
        for step in [
            BitLevelErasureChannel::step_fixed_l,
            BitLevelErasureChannel::step_gamma1,
            BitLevelErasureChannel::step_gamma2,
        ] {
            let (b, g) = step(&t);
            let (zb, zg) = (b.z_pair(), g.z_pair());
            lane_product.record(
                (zb.z1 * zb.z2 + zg.z1 * zg.z2 - 2.0 * z.z1 * z.z2).abs(),
                1e-12,
                &w,
            );
        }
        let n = rng.gen_range(3..=8usize);
        for policy in [
            SchedulePolicy::FixedL,
            SchedulePolicy::Alternating,
            SchedulePolicy::Adaptive,
        ] {
            let rep = crate::erasure::sweep_channel(t, n, policy, 1e-6)?;
            let nn = rep.records.len() as f64;
            let mean_prod = pairwise_sum_by(&rep.records, |r| r.z1 * r.z2) / nn;
            lane_martingale.record((mean_prod - z.z1 * z.z2).abs(), 1e-12, &w);
            let mean_info = pairwise_sum_by(&rep.records, |r| 2.0 - r.z1 - r.z2) / nn;
            lane_info.record((mean_info - t.mutual_information()).abs(), SLACK, &w);
        }
    }

    Ok(vec![
        super_1,
        super_2,
        product,
        lane_product,
        lane_martingale,
        lane_info,
    ])
}

fn random_triple(rng: &mut impl Rng) -> BitLevelErasureChannel {
    let (a, b, c) = (rng.gen::<f64>(), rng.gen::<f64>(), rng.gen::<f64>());
    let total = (a + b + c).max(1.0);
    let scale = rng.gen::<f64>();
    BitLevelErasureChannel::new(scale * a / total, scale * b / total, scale * c / total)
        .expect("valid triple")
}

/// Two-step equivalence of the alternating schedule against the fixed map.
pub fn equivalence_suite(samples: usize, seed: u64) -> Result<Vec<PropertyResult>> {
    if samples == 0 {
        return Err(Error::Spec("samples must be at least 1".into()));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut equiv = PropertyResult::new("two-step alternating/fixed channel equivalence");
    let mut metrics = PropertyResult::new("two-step alternating/fixed metric agreement");
    let gl = PairPermutation::gamma_l();
    let g1 = PairPermutation::gamma_1();
    let g2 = PairPermutation::gamma_2();
    for _ in 0..samples {
        let w = loop {
            let c = random_channel(&mut rng);
            if c.num_outputs() <= 6 {
                break c;
            }
        };
        let (fb, fg) = combine_split(&w, &gl)?;
        let (ab, ag) = combine_split(&w, &g1)?;
        for (first_fixed, first_alt) in [(fb, ab), (fg, ag)] {
            let (fb2, fg2) = combine_split(&first_fixed, &gl)?;
            let (ab2, ag2) = combine_split(&first_alt, &g2)?;
            for (two_fixed, two_alt) in [(fb2, ab2), (fg2, ag2)] {
                equiv.record(if two_fixed.equivalent(&two_alt) { 0.0 } else { 1.0 }, 0.5, &w);
                metrics.record(
                    two_fixed.metric_vector().max_abs_diff(&two_alt.metric_vector()),
                    SLACK,
                    &w,
                );
            }
        }
    }
    Ok(vec![equiv, metrics])
}

/// Named suite dispatch used by the command line.
pub fn run_suite(name: &str, samples: usize, seed: u64) -> Result<Vec<PropertyResult>> {
    match name {
        "lemmas" => lemma_suite(samples, seed),
        "martingale" => martingale_suite(samples, seed),
        "equivalence" => equivalence_suite(samples, seed),
        other => Err(Error::Spec(format!("unknown suite {other:?}"))),
    }
}
