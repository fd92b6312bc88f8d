//! The label-level transform network, error sampling, successive-cancellation
//! decoding with side information, and the Monte Carlo frame-error harness.

use crate::classify::ChannelClass;
use crate::error::{Error, Result};
use crate::gamma::{PairPermutation, PermName};
use crate::label::PauliLabel;
use crate::polar::Limits;
use crate::report::{ConstructionReport, GammaTree};
use crate::schedule::SchedulePolicy;
use crate::spec::ChannelSpec;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use std::fmt;

/// Per-position likelihood rows over the four labels. Rows must be
/// nonnegative and not all zero; only ratios matter.
pub type ObservationVector = Vec<[f64; 4]>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Synthetic labels to physical labels (the encoder network).
    Forward,
    /// Physical labels to synthetic labels.
    Inverse,
}

struct PermSet {
    perms: [PairPermutation; 3],
}

impl PermSet {
    fn new() -> Self {
        Self {
            perms: [
                PairPermutation::gamma_l(),
                PairPermutation::gamma_1(),
                PairPermutation::gamma_2(),
            ],
        }
    }

    fn get(&self, name: PermName) -> &PairPermutation {
        match name {
            PermName::GammaL => &self.perms[0],
            PermName::Gamma1 => &self.perms[1],
            PermName::Gamma2 => &self.perms[2],
            PermName::Custom => panic!("transform networks use the built-in permutations"),
        }
    }
}

/// Applies the butterfly of pair permutations. Stage k (k = 1 outermost)
/// pairs positions differing in bit (n - k); the forward direction runs the
/// innermost stage first.
pub fn transform(
    labels: &[PauliLabel],
    gammas: &GammaTree,
    direction: Direction,
) -> Result<Vec<PauliLabel>> {
    let size = labels.len();
    if !size.is_power_of_two() {
        return Err(Error::LengthNotPowerOfTwo(size));
    }
    let n = gammas.depth();
    if size != 1 << n {
        return Err(Error::ShapeMismatch(format!(
            "{size} labels for a depth-{n} network"
        )));
    }
    let perms = PermSet::new();
    let mut s = labels.to_vec();
    let stages: Vec<usize> = match direction {
        Direction::Forward => (1..=n).rev().collect(),
        Direction::Inverse => (1..=n).collect(),
    };
    for k in stages {
        let half = 1usize << (n - k);
        for j in 0..size {
            if j & half != 0 {
                continue;
            }
            let prefix = j >> (n - k + 1);
            let g = perms.get(gammas.choice(k - 1, prefix));
            let (a, b) = match direction {
                Direction::Forward => g.apply(s[j], s[j | half]),
                Direction::Inverse => g.apply_inverse(s[j], s[j | half]),
            };
            s[j] = a;
            s[j | half] = b;
        }
    }
    Ok(s)
}

/// Raw mixture components of a spec (weights and true error distributions,
/// without the translation canonicalization used by synthesis).
fn raw_components(spec: &ChannelSpec) -> Result<Vec<(f64, [f64; 4])>> {
    match spec {
        ChannelSpec::Erasure { epsilon } => {
            let e = *epsilon;
            if !(0.0..=1.0).contains(&e) {
                return Err(Error::EpsilonOutOfRange(e));
            }
            Ok(vec![(1.0 - e, [1.0, 0.0, 0.0, 0.0]), (e, [0.25; 4])])
        }
        ChannelSpec::Pauli { p } => Ok(vec![(1.0, spec_dist(p)?)]),
        ChannelSpec::Cmp { components } => {
            let total: f64 = components.iter().map(|c| c.lambda.max(0.0)).sum();
            if total <= 0.0 {
                return Err(Error::Spec("zero-mass component weights".into()));
            }
            components
                .iter()
                .map(|c| Ok((c.lambda.max(0.0) / total, spec_dist(&c.p)?)))
                .collect()
        }
    }
}

fn spec_dist(map: &std::collections::BTreeMap<String, f64>) -> Result<[f64; 4]> {
    let mut p = [0.0; 4];
    for (k, &v) in map {
        let lab = PauliLabel::from_name(k)
            .ok_or_else(|| Error::Spec(format!("unknown Pauli label {k:?}")))?;
        p[lab.index()] = v.max(0.0);
    }
    let s: f64 = p.iter().sum();
    if s <= 0.0 {
        return Err(Error::Spec("zero-mass distribution".into()));
    }
    for e in p.iter_mut() {
        *e /= s;
    }
    Ok(p)
}

/// Draws one physical error vector and its per-position likelihood rows.
///
/// Per position: a mixture component is drawn by weight, then the error from
/// its distribution; the likelihood row is the weighted component
/// distribution (the observed output is the all-identity word by channel
/// symmetry).
pub fn sample_error_with_rng(
    spec: &ChannelSpec,
    len: usize,
    rng: &mut impl Rng,
) -> Result<(Vec<PauliLabel>, ObservationVector)> {
    let comps = raw_components(spec)?;
    let mut errors = Vec::with_capacity(len);
    let mut obs = Vec::with_capacity(len);
    for _ in 0..len {
        let mut pick = rng.gen::<f64>();
        let mut chosen = comps.len() - 1;
        for (i, (w, _)) in comps.iter().enumerate() {
            if pick < *w {
                chosen = i;
                break;
            }
            pick -= *w;
        }
        let (w, dist) = &comps[chosen];
        let mut draw = rng.gen::<f64>();
        let mut e = PauliLabel::Y;
        for u in 0..4 {
            if draw < dist[u] {
                e = PauliLabel::from_index(u as u8);
                break;
            }
            draw -= dist[u];
        }
        errors.push(e);
        obs.push([w * dist[0], w * dist[1], w * dist[2], w * dist[3]]);
    }
    Ok((errors, obs))
}

/// Seed-reproducible variant: the generator is ChaCha12 keyed with the
/// little-endian `seed` and stream id in the first 16 seed bytes.
pub fn sample_error(
    spec: &ChannelSpec,
    len: usize,
    seed: u64,
) -> Result<(Vec<PauliLabel>, ObservationVector)> {
    let mut rng = trial_rng(seed, 0);
    sample_error_with_rng(spec, len, &mut rng)
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha12Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&trial.to_le_bytes());
    ChaCha12Rng::from_seed(key)
}

/// What the decoder learns from measurements, per synthetic index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SideEntry {
    /// Information position: nothing known in advance.
    Open,
    /// Z-exponent known (half-noisy type 1 positions).
    ZKnown(u8),
    /// X-exponent known (half-noisy type 2 positions).
    XKnown(u8),
    /// Both exponents known (noisy and unpolarized positions).
    Both(PauliLabel),
}

/// Side information aligned with a construction report's classification.
#[derive(Clone, Debug, PartialEq)]
pub struct SideInfo {
    entries: Vec<SideEntry>,
}

impl SideInfo {
    pub fn new(entries: Vec<SideEntry>) -> Self {
        Self { entries }
    }

    pub fn entries(&self) -> &[SideEntry] {
        &self.entries
    }

    /// Derives the measurement outcomes from the true transformed error,
    /// following the report's classification.
    pub fn from_truth(report: &ConstructionReport, truth: &[PauliLabel]) -> Result<Self> {
        if truth.len() != report.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} labels for a size-{} report",
                truth.len(),
                report.len()
            )));
        }
        let entries = report
            .records
            .iter()
            .zip(truth.iter())
            .map(|(r, &t)| match r.class {
                ChannelClass::Noiseless => SideEntry::Open,
                ChannelClass::HalfNoisyType1 => SideEntry::ZKnown(t.z_bit()),
                ChannelClass::HalfNoisyType2 => SideEntry::XKnown(t.x_bit()),
                ChannelClass::Noisy | ChannelClass::Unpolarized => SideEntry::Both(t),
            })
            .collect();
        Ok(Self { entries })
    }

    fn matches(&self, report: &ConstructionReport) -> bool {
        self.entries.len() == report.len()
            && self
                .entries
                .iter()
                .zip(report.records.iter())
                .all(|(e, r)| {
                    matches!(
                        (e, r.class),
                        (SideEntry::Open, ChannelClass::Noiseless)
                            | (SideEntry::ZKnown(_), ChannelClass::HalfNoisyType1)
                            | (SideEntry::XKnown(_), ChannelClass::HalfNoisyType2)
                            | (SideEntry::Both(_), ChannelClass::Noisy)
                            | (SideEntry::Both(_), ChannelClass::Unpolarized)
                    )
                })
    }
}

#[inline]
fn rescale(row: &mut [f64; 4]) {
    let m = row[0].max(row[1]).max(row[2]).max(row[3]);
    if m > 0.0 {
        for e in row.iter_mut() {
            *e /= m;
        }
    }
}

struct Decoder<'a> {
    perms: PermSet,
    gammas: &'a GammaTree,
    side: &'a [SideEntry],
    out: Vec<PauliLabel>,
    rows_out: Option<Vec<[f64; 4]>>,
}

impl Decoder<'_> {
    /// Decides one synthetic label from its likelihood row and side entry.
    /// Argmax ties break toward the smaller encoding.
    fn decide(&mut self, index: usize, row: &[f64; 4]) -> PauliLabel {
        if let Some(rows) = self.rows_out.as_mut() {
            rows[index] = *row;
        }
        let candidates: &[PauliLabel] = match self.side[index] {
            SideEntry::Both(l) => {
                self.out[index] = l;
                return l;
            }
            SideEntry::ZKnown(z) => {
                let c = [PauliLabel::from_bits(0, z), PauliLabel::from_bits(1, z)];
                return self.pick(index, row, &c);
            }
            SideEntry::XKnown(x) => {
                let c = [PauliLabel::from_bits(x, 0), PauliLabel::from_bits(x, 1)];
                return self.pick(index, row, &c);
            }
            SideEntry::Open => &crate::label::LABELS,
        };
        self.pick(index, row, candidates)
    }

    fn pick(&mut self, index: usize, row: &[f64; 4], candidates: &[PauliLabel]) -> PauliLabel {
        let mut best = candidates[0];
        let mut best_val = row[best.index()];
        for &c in &candidates[1..] {
            if row[c.index()] > best_val {
                best = c;
                best_val = row[c.index()];
            }
        }
        self.out[index] = best;
        best
    }

    /// Decodes a block of `rows.len()` copies of the virtual channel at
    /// (level, prefix); returns the decided copy labels of this block.
    fn decode_block(&mut self, level: usize, prefix: usize, rows: Vec<[f64; 4]>) -> Vec<PauliLabel> {
        if rows.len() == 1 {
            let label = self.decide(prefix, &rows[0]);
            return vec![label];
        }
        let half = rows.len() / 2;
        let (t1, t2) = self.perms.get(self.gammas.choice(level, prefix)).tables();
        let mut bad_rows = Vec::with_capacity(half);
        for j in 0..half {
            let (r1, r2) = (&rows[j], &rows[j + half]);
            let mut row = [0.0f64; 4];
            for (u, slot) in row.iter_mut().enumerate() {
                for v in 0..4 {
                    *slot += r1[t1[u][v] as usize] * r2[t2[u][v] as usize];
                }
            }
            rescale(&mut row);
            bad_rows.push(row);
        }
        let u_hat = self.decode_block(level + 1, prefix << 1, bad_rows);
        let mut good_rows = Vec::with_capacity(half);
        for j in 0..half {
            let (r1, r2) = (&rows[j], &rows[j + half]);
            let u = u_hat[j].index();
            let mut row = [0.0f64; 4];
            for (v, slot) in row.iter_mut().enumerate() {
                *slot = r1[t1[u][v] as usize] * r2[t2[u][v] as usize];
            }
            rescale(&mut row);
            good_rows.push(row);
        }
        let v_hat = self.decode_block(level + 1, (prefix << 1) | 1, good_rows);
        // recombine decided inputs into the copy labels of this block
        let g = self.perms.get(self.gammas.choice(level, prefix));
        let mut labels = vec![PauliLabel::I; rows.len()];
        for j in 0..half {
            let (a, b) = g.apply(u_hat[j], v_hat[j]);
            labels[j] = a;
            labels[j + half] = b;
        }
        labels
    }
}

/// Successive-cancellation decoding of the transformed error.
///
/// Synthetic indices are decided in order; marginalized branches average the
/// undecided partner input uniformly, conditioned branches substitute the
/// decided one. Likelihood rows are rescaled by their maximum at every node.
pub fn sc_decode(
    observations: &ObservationVector,
    report: &ConstructionReport,
    side: &SideInfo,
) -> Result<Vec<PauliLabel>> {
    sc_decode_impl(observations, report, side, false).map(|(d, _)| d)
}

/// Like `sc_decode`, also returning the likelihood row each synthetic index
/// was decided from (before side-information restriction).
pub fn sc_decode_with_rows(
    observations: &ObservationVector,
    report: &ConstructionReport,
    side: &SideInfo,
) -> Result<(Vec<PauliLabel>, Vec<[f64; 4]>)> {
    sc_decode_impl(observations, report, side, true).map(|(d, r)| (d, r.expect("requested")))
}

fn sc_decode_impl(
    observations: &ObservationVector,
    report: &ConstructionReport,
    side: &SideInfo,
    want_rows: bool,
) -> Result<(Vec<PauliLabel>, Option<Vec<[f64; 4]>>)> {
    let size = report.len();
    if observations.len() != size {
        return Err(Error::ShapeMismatch(format!(
            "{} observation rows for a size-{size} report",
            observations.len()
        )));
    }
    if !side.matches(report) {
        return Err(Error::ShapeMismatch(
            "side information does not match the report's classes".into(),
        ));
    }
    let mut rows = Vec::with_capacity(size);
    for (j, r) in observations.iter().enumerate() {
        if r.iter().any(|&v| !(v >= 0.0)) || r.iter().all(|&v| v == 0.0) {
            return Err(Error::ShapeMismatch(format!(
                "observation row {j} is not a nonnegative, nonzero likelihood row"
            )));
        }
        let mut row = *r;
        rescale(&mut row);
        rows.push(row);
    }
    let mut dec = Decoder {
        perms: PermSet::new(),
        gammas: &report.gammas,
        side: side.entries(),
        out: vec![PauliLabel::I; size],
        rows_out: want_rows.then(|| vec![[0.0; 4]; size]),
    };
    dec.decode_block(0, 0, rows);
    Ok((dec.out, dec.rows_out))
}

/// Genie-aided likelihood pass: every decision is forced to the true label,
/// so the returned per-index rows sample each virtual channel in isolation.
pub fn genie_decision_rows(
    observations: &ObservationVector,
    report: &ConstructionReport,
    truth: &[PauliLabel],
) -> Result<Vec<[f64; 4]>> {
    let size = report.len();
    if observations.len() != size || truth.len() != size {
        return Err(Error::ShapeMismatch(format!(
            "{} rows / {} truth labels for a size-{size} report",
            observations.len(),
            truth.len()
        )));
    }
    let mut rows = Vec::with_capacity(size);
    for r in observations {
        let mut row = *r;
        rescale(&mut row);
        rows.push(row);
    }
    let side: Vec<SideEntry> = truth.iter().map(|&t| SideEntry::Both(t)).collect();
    let mut dec = Decoder {
        perms: PermSet::new(),
        gammas: &report.gammas,
        side: &side,
        out: vec![PauliLabel::I; size],
        rows_out: Some(vec![[0.0; 4]; size]),
    };
    dec.decode_block(0, 0, rows);
    Ok(dec.rows_out.expect("requested"))
}

/// Aggregate decoding statistics over a batch of trials.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FrameErrorReport {
    pub trials: u64,
    pub frame_errors: u64,
    /// Wrong exponents on information positions (both exponents count).
    pub class_a_bit_errors: u64,
    /// Wrong X-exponents on type-1 half-noisy positions.
    pub class_b_bit_errors: u64,
    /// Wrong Z-exponents on type-2 half-noisy positions.
    pub class_c_bit_errors: u64,
    pub seed: u64,
}

impl FrameErrorReport {
    pub fn fer(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.frame_errors as f64 / self.trials as f64
        }
    }

    fn merge(self, other: Self) -> Self {
        Self {
            trials: self.trials + other.trials,
            frame_errors: self.frame_errors + other.frame_errors,
            class_a_bit_errors: self.class_a_bit_errors + other.class_a_bit_errors,
            class_b_bit_errors: self.class_b_bit_errors + other.class_b_bit_errors,
            class_c_bit_errors: self.class_c_bit_errors + other.class_c_bit_errors,
            seed: self.seed,
        }
    }
}

impl fmt::Display for FrameErrorReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "trials={} frame_errors={} fer={} seed={}",
            self.trials,
            self.frame_errors,
            self.fer(),
            self.seed
        )?;
        writeln!(f, "class_a_bit_errors={}", self.class_a_bit_errors)?;
        writeln!(f, "class_b_bit_errors={}", self.class_b_bit_errors)?;
        write!(f, "class_c_bit_errors={}", self.class_c_bit_errors)
    }
}

/// Runs one decoding trial against a prepared report.
fn run_trial(
    spec: &ChannelSpec,
    report: &ConstructionReport,
    seed: u64,
    trial: u64,
) -> Result<(bool, u64, u64, u64)> {
    let size = report.len();
    let mut rng = trial_rng(seed, trial);
    let (errors, obs) = sample_error_with_rng(spec, size, &mut rng)?;
    let truth = transform(&errors, &report.gammas, Direction::Inverse)?;
    let side = SideInfo::from_truth(report, &truth)?;
    let decoded = sc_decode(&obs, report, &side)?;
    let mut a = 0u64;
    let mut b = 0u64;
    let mut c = 0u64;
    for (i, r) in report.records.iter().enumerate() {
        match r.class {
            ChannelClass::Noiseless => {
                if decoded[i].x_bit() != truth[i].x_bit() {
                    a += 1;
                }
                if decoded[i].z_bit() != truth[i].z_bit() {
                    a += 1;
                }
            }
            ChannelClass::HalfNoisyType1 => {
                if decoded[i].x_bit() != truth[i].x_bit() {
                    b += 1;
                }
            }
            ChannelClass::HalfNoisyType2 => {
                if decoded[i].z_bit() != truth[i].z_bit() {
                    c += 1;
                }
            }
            _ => {}
        }
    }
    Ok((a + b + c > 0, a, b, c))
}

/// Monte Carlo frame-error simulation: constructs (or sweeps) the code, then
/// decodes `trials` independently sampled error words. Deterministic for a
/// fixed seed regardless of worker count (trial i uses generator (seed, i)).
pub fn simulate(
    spec: &ChannelSpec,
    n: usize,
    policy: SchedulePolicy,
    delta: f64,
    trials: u64,
    seed: u64,
    limits: &Limits,
) -> Result<FrameErrorReport> {
    let report = crate::polar::construct(spec, n, policy, delta, limits, false)?;
    simulate_with_report(spec, &report, trials, seed)
}

/// Simulation against an existing report (avoids rebuilding constructions).
pub fn simulate_with_report(
    spec: &ChannelSpec,
    report: &ConstructionReport,
    trials: u64,
    seed: u64,
) -> Result<FrameErrorReport> {
    let acc = (0..trials)
        .into_par_iter()
        .map(|t| {
            run_trial(spec, report, seed, t).map(|(fe, a, b, c)| FrameErrorReport {
                trials: 1,
                frame_errors: fe as u64,
                class_a_bit_errors: a,
                class_b_bit_errors: b,
                class_c_bit_errors: c,
                seed,
            })
        })
        .try_reduce(
            || FrameErrorReport { seed, ..Default::default() },
            |x, y| Ok(x.merge(y)),
        )?;
    Ok(acc)
}
