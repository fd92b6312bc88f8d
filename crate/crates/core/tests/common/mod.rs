#![allow(dead_code)]

//! Shared test oracles: sequential-argmax references for the
//! successive-cancellation decoder, independent of its likelihood recursion.

use mlpolar::report::ConstructionReport;
use mlpolar::{transform, Direction, PauliLabel, SideEntry, SideInfo};

/// Weighted brute-force oracle for small blocks and arbitrary observation
/// rows: enumerates all 4^N synthetic words, weights them by the product of
/// per-position likelihoods of their transform image, and decides each index
/// by the sequential posterior argmax with the same side-information and
/// tie-break rules as the decoder. Returns (decision, was_tie) per index.
pub fn enumeration_oracle(
    obs: &[[f64; 4]],
    report: &ConstructionReport,
    side: &SideInfo,
) -> (Vec<PauliLabel>, Vec<bool>) {
    let n_idx = report.len();
    assert!(n_idx <= 256, "enumeration oracle is for tiny blocks");
    let all: Vec<(Vec<PauliLabel>, f64)> = (0..4usize.pow(n_idx as u32))
        .map(|code| {
            let word: Vec<PauliLabel> = (0..n_idx)
                .map(|k| PauliLabel::from_index(((code >> (2 * k)) & 3) as u8))
                .collect();
            let image = transform(&word, &report.gammas, Direction::Forward).unwrap();
            let weight: f64 = image
                .iter()
                .zip(obs.iter())
                .map(|(&e, row)| row[e.index()])
                .product();
            (word, weight)
        })
        .collect();
    let mut decided: Vec<PauliLabel> = Vec::with_capacity(n_idx);
    let mut ties = Vec::with_capacity(n_idx);
    for i in 0..n_idx {
        let allowed = allowed_labels(side.entries()[i]);
        let mut mass = [0.0f64; 4];
        for (word, weight) in &all {
            if word[..i] == decided[..] {
                mass[word[i].index()] += weight;
            }
        }
        let mut best = allowed[0];
        for &c in &allowed[1..] {
            if mass[c.index()] > mass[best.index()] {
                best = c;
            }
        }
        let near_ties = allowed
            .iter()
            .filter(|c| {
                let diff = mass[best.index()] - mass[c.index()];
                diff <= 1e-12 * mass[best.index()].max(1e-300)
            })
            .count();
        ties.push(near_ties > 1);
        decided.push(best);
    }
    (decided, ties)
}

fn allowed_labels(side: SideEntry) -> Vec<PauliLabel> {
    match side {
        SideEntry::Open => vec![PauliLabel::I, PauliLabel::Z, PauliLabel::X, PauliLabel::Y],
        SideEntry::ZKnown(z) => vec![PauliLabel::from_bits(0, z), PauliLabel::from_bits(1, z)],
        SideEntry::XKnown(x) => vec![PauliLabel::from_bits(x, 0), PauliLabel::from_bits(x, 1)],
        SideEntry::Both(l) => vec![l],
    }
}

/// Affine-counting oracle for erasure observations: every consistent error
/// word is equally likely, so posteriors are uniform over an affine set of
/// GF(2) vectors and each decision is "the smallest allowed label whose
/// added constraints stay solvable". Exact at any block length.
pub struct AffineOracle {
    /// Row r of the forward transform over GF(2): bit r of the image as a
    /// mask over the 2N synthetic bits.
    rows: Vec<u64>,
    n_idx: usize,
}

impl AffineOracle {
    pub fn new(report: &ConstructionReport) -> Self {
        let n_idx = report.len();
        assert!(2 * n_idx <= 64, "affine oracle packs bit masks into u64");
        // column k of the map = transform image of the k-th basis word
        let mut rows = vec![0u64; 2 * n_idx];
        for k in 0..2 * n_idx {
            let mut word = vec![PauliLabel::I; n_idx];
            let (pos, bit) = (k / 2, k % 2);
            word[pos] = if bit == 0 {
                PauliLabel::X // x-exponent basis vector
            } else {
                PauliLabel::Z
            };
            let image = transform(&word, &report.gammas, Direction::Forward).unwrap();
            for (r, lab) in image.iter().enumerate() {
                if lab.x_bit() == 1 {
                    rows[2 * r] |= 1 << k;
                }
                if lab.z_bit() == 1 {
                    rows[2 * r + 1] |= 1 << k;
                }
            }
        }
        Self { rows, n_idx }
    }

    /// Sequential decode; `erased[j]` marks positions whose observation row
    /// is uniform. Returns (decision, was_tie) per index.
    pub fn decode(&self, erased: &[bool], side: &SideInfo) -> (Vec<PauliLabel>, Vec<bool>) {
        // constraints: (mask, rhs) rows of an affine GF(2) system over the
        // synthetic bits; unerased physical bits are zero
        let mut constraints: Vec<(u64, bool)> = Vec::new();
        for (j, &e) in erased.iter().enumerate() {
            if !e {
                constraints.push((self.rows[2 * j], false));
                constraints.push((self.rows[2 * j + 1], false));
            }
        }
        let mut decided = Vec::with_capacity(self.n_idx);
        let mut ties = Vec::with_capacity(self.n_idx);
        for i in 0..self.n_idx {
            let allowed = allowed_labels(side.entries()[i]);
            let mut chosen = None;
            let mut feasible = 0usize;
            for &c in &allowed {
                let mut sys = constraints.clone();
                sys.push((1 << (2 * i), c.x_bit() == 1));
                sys.push((1 << (2 * i + 1), c.z_bit() == 1));
                if solvable(&mut sys) {
                    feasible += 1;
                    if chosen.is_none() {
                        chosen = Some(c);
                    }
                }
            }
            // no feasible candidate happens only after a wrong forced value;
            // fall back to the smallest allowed label like the decoder does
            let c = chosen.unwrap_or(allowed[0]);
            ties.push(feasible != 1);
            constraints.push((1 << (2 * i), c.x_bit() == 1));
            constraints.push((1 << (2 * i + 1), c.z_bit() == 1));
            decided.push(c);
        }
        (decided, ties)
    }
}

/// Gaussian elimination over GF(2); returns whether the system is solvable.
/// The basis is kept mutually reduced so one elimination pass per row is
/// enough.
fn solvable(sys: &mut [(u64, bool)]) -> bool {
    let mut basis: Vec<(u64, bool)> = Vec::new();
    for &mut (mut mask, mut rhs) in sys.iter_mut() {
        for &(pm, pr) in &basis {
            let pivot = pm & pm.wrapping_neg();
            if mask & pivot != 0 {
                mask ^= pm;
                rhs ^= pr;
            }
        }
        if mask == 0 {
            if rhs {
                return false;
            }
            continue;
        }
        let pivot = mask & mask.wrapping_neg();
        for (pm, pr) in basis.iter_mut() {
            if *pm & pivot != 0 {
                *pm ^= mask;
                *pr ^= rhs;
            }
        }
        basis.push((mask, rhs));
    }
    true
}

/// Worst absolute deviation between the closed-form lane and the generic
/// matrix engine over all 2^n leaves: partial-channel pairs and classes are
/// both compared. Classes must agree exactly.
pub fn lane_vs_matrix_worst_dev(
    eps: f64,
    n: usize,
    policy: mlpolar::SchedulePolicy,
    delta: f64,
) -> f64 {
    use mlpolar::{construct_matrix, sweep, Limits, QuaternaryChannel};
    let lane = sweep(eps, n, policy, delta).unwrap();
    let limits = Limits::default();
    let matrix = construct_matrix(
        &QuaternaryChannel::erasure(eps).unwrap(),
        n,
        policy,
        delta,
        &limits,
    )
    .unwrap();
    assert_eq!(lane.gammas, matrix.gammas, "engines chose different permutations");
    let mut worst = 0.0f64;
    for (l, m) in lane.records.iter().zip(matrix.records.iter()) {
        worst = worst.max((l.z1 - m.z1).abs()).max((l.z2 - m.z2).abs());
        worst = worst.max((l.z_global - m.z_global).abs());
        assert_eq!(l.class, m.class, "lane and matrix classes diverge");
    }
    worst
}
