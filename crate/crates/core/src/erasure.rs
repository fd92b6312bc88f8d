//! Closed-form evolution of bit-level erasure channels.
//!
//! A bit-level erasure channel erases the first input bit alone, the second
//! alone, or both, with probabilities (eps1, eps2, eps3). This family is
//! closed under all three combining permutations, so whole construction
//! sweeps reduce to polynomial updates on the triple: 2^20 indices take
//! milliseconds instead of matrix synthesis.

use crate::channel::QuaternaryChannel;
use crate::classify::classify_z;
use crate::error::{Error, Result};
use crate::gamma::PermName;
use crate::report::{
    ClassCounts, ConstructionReport, GammaTree, RootSummary, VirtualChannelRecord,
};
use crate::schedule::{SchedulePolicy, ADAPTIVE_TIE_TOL};
use rayon::prelude::*;

/// Largest sweep depth held in memory (2^26 triples is ~1.6 GB).
pub const SWEEP_DEPTH_CAP: usize = 26;

/// Erasure probabilities (first bit alone, second bit alone, both).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BitLevelErasureChannel {
    pub eps1: f64,
    pub eps2: f64,
    pub eps3: f64,
}

/// The pair (Z(W^[1]), Z(W^[2])) of partial-channel parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZPair {
    pub z1: f64,
    pub z2: f64,
}

impl BitLevelErasureChannel {
    pub fn new(eps1: f64, eps2: f64, eps3: f64) -> Result<Self> {
        for e in [eps1, eps2, eps3] {
            if !(0.0..=1.0).contains(&e) {
                return Err(Error::EpsilonOutOfRange(e));
            }
        }
        if eps1 + eps2 + eps3 > 1.0 + 1e-12 {
            return Err(Error::EpsilonOutOfRange(eps1 + eps2 + eps3));
        }
        Ok(Self { eps1, eps2, eps3 })
    }

    /// Lowers a plain erasure spec: both bits erased together.
    pub fn lower(epsilon: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::EpsilonOutOfRange(epsilon));
        }
        Ok(Self { eps1: 0.0, eps2: 0.0, eps3: epsilon })
    }

    /// Z(W^[1]) = eps1 + eps3 and Z(W^[2]) = eps2 + eps3.
    #[inline]
    pub fn z_pair(&self) -> ZPair {
        ZPair {
            z1: self.eps1 + self.eps3,
            z2: self.eps2 + self.eps3,
        }
    }

    /// The difference parameters (Z_1, Z_2, Z_3) = (eps2+eps3, eps1+eps3, eps3).
    #[inline]
    pub fn z_d(&self) -> [f64; 3] {
        [self.eps2 + self.eps3, self.eps1 + self.eps3, self.eps3]
    }

    /// Symmetric mutual information: 2 - Z(W^[1]) - Z(W^[2]).
    #[inline]
    pub fn mutual_information(&self) -> f64 {
        let z = self.z_pair();
        2.0 - z.z1 - z.z2
    }

    /// The explicit 4x9 transition matrix (for oracle cross-checks).
    pub fn to_quaternary(&self) -> Result<QuaternaryChannel> {
        QuaternaryChannel::bit_level_erasure(self.eps1, self.eps2, self.eps3)
    }

    /// One combining step under the fixed map: marginalized and conditioned
    /// branch triples.
    pub fn step_fixed_l(&self) -> (Self, Self) {
        let (e1, e2, e3) = (self.eps1, self.eps2, self.eps3);
        let e0 = 1.0 - e1 - e2 - e3;
        let z2 = e2 + e3;
        let bad = Self {
            eps1: e2 + e0 * z2,
            eps2: e1 * (1.0 - z2),
            eps3: e3 + e1 * z2,
        };
        let good = Self {
            eps1: e2 * z2,
            eps2: e1 + e3 * (1.0 - z2),
            eps3: e3 * z2,
        };
        (bad, good)
    }

    /// One combining step under Gamma1 (first bit untouched).
    pub fn step_gamma1(&self) -> (Self, Self) {
        let (e1, e2, e3) = (self.eps1, self.eps2, self.eps3);
        let z1 = e1 + e3;
        let z2 = e2 + e3;
        let bad = Self {
            eps1: e1 * (1.0 - z2),
            eps2: 2.0 * z2 - z2 * z2 - e3 - e1 * z2,
            eps3: e3 + e1 * z2,
        };
        let good = Self {
            eps1: z1 - z2 * e3,
            eps2: e2 * z2,
            eps3: z2 * e3,
        };
        (bad, good)
    }

    /// One combining step under Gamma2 (second bit untouched).
    pub fn step_gamma2(&self) -> (Self, Self) {
        let (e1, e2, e3) = (self.eps1, self.eps2, self.eps3);
        let z1 = e1 + e3;
        let z2 = e2 + e3;
        let bad = Self {
            eps1: 2.0 * z1 - z1 * z1 - e3 - e2 * z1,
            eps2: e2 * (1.0 - z1),
            eps3: e3 + e2 * z1,
        };
        let good = Self {
            eps1: e1 * z1,
            eps2: z2 - z1 * e3,
            eps3: z1 * e3,
        };
        (bad, good)
    }

    pub fn step(&self, gamma: PermName) -> (Self, Self) {
        match gamma {
            PermName::GammaL => self.step_fixed_l(),
            PermName::Gamma1 => self.step_gamma1(),
            PermName::Gamma2 => self.step_gamma2(),
            PermName::Custom => panic!("the erasure lane has no custom-permutation closed form"),
        }
    }
}

impl ZPair {
    pub fn new(z1: f64, z2: f64) -> Result<Self> {
        for z in [z1, z2] {
            if !(0.0..=1.0).contains(&z) {
                return Err(Error::EpsilonOutOfRange(z));
            }
        }
        Ok(Self { z1, z2 })
    }

    /// Fixed-map pair recursion: the new second entry equals the old first
    /// in both branches.
    pub fn step_fixed_l(&self) -> (Self, Self) {
        let (z1, z2) = (self.z1, self.z2);
        (
            Self { z1: 2.0 * z2 - z2 * z2, z2: z1 },
            Self { z1: z2 * z2, z2: z1 },
        )
    }

    pub fn step_gamma1(&self) -> (Self, Self) {
        let (z1, z2) = (self.z1, self.z2);
        (
            Self { z1, z2: 2.0 * z2 - z2 * z2 },
            Self { z1, z2: z2 * z2 },
        )
    }

    pub fn step_gamma2(&self) -> (Self, Self) {
        let (z1, z2) = (self.z1, self.z2);
        (
            Self { z1: 2.0 * z1 - z1 * z1, z2 },
            Self { z1: z1 * z1, z2 },
        )
    }

    /// T values of the conditioned branch under Gamma1 / Gamma2.
    #[inline]
    pub fn adaptive_ts(&self) -> (f64, f64) {
        (
            self.z1 + self.z2 * self.z2,
            self.z1 * self.z1 + self.z2,
        )
    }
}

fn choose_gamma(t: &BitLevelErasureChannel, policy: SchedulePolicy, step: usize) -> PermName {
    match policy.fixed_choice(step) {
        Some(name) => name,
        None => {
            let (t1, t2) = t.z_pair().adaptive_ts();
            if t1 <= t2 + ADAPTIVE_TIE_TOL {
                PermName::Gamma1
            } else {
                PermName::Gamma2
            }
        }
    }
}

/// Full construction sweep of a plain erasure channel.
pub fn sweep(
    epsilon: f64,
    n: usize,
    policy: SchedulePolicy,
    delta: f64,
) -> Result<ConstructionReport> {
    sweep_channel(BitLevelErasureChannel::lower(epsilon)?, n, policy, delta)
}

/// Full construction sweep from an arbitrary bit-level erasure start.
///
/// Evolves all 2^n triples level by level (children written into disjoint
/// halves of each block) and classifies every leaf.
pub fn sweep_channel(
    start: BitLevelErasureChannel,
    n: usize,
    policy: SchedulePolicy,
    delta: f64,
) -> Result<ConstructionReport> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::DeltaOutOfRange(delta));
    }
    if n > SWEEP_DEPTH_CAP {
        return Err(Error::DepthTooLarge { depth: n, cap: SWEEP_DEPTH_CAP });
    }
    let size = 1usize << n;
    let mut nodes = vec![BitLevelErasureChannel { eps1: 0.0, eps2: 0.0, eps3: 0.0 }; size];
    nodes[0] = start;
    let mut gammas = GammaTree::new(n);
    for k in 0..n {
        let stride = size >> k;
        let (node_chunks, gamma_level) = (nodes.par_chunks_mut(stride), gammas.level_mut(k));
        node_chunks.zip(gamma_level.par_iter_mut()).for_each(|(chunk, gslot)| {
            let parent = chunk[0];
            let name = choose_gamma(&parent, policy, k + 1);
            *gslot = name;
            let (bad, good) = parent.step(name);
            chunk[0] = bad;
            chunk[stride / 2] = good;
        });
    }
    let records: Vec<VirtualChannelRecord> = nodes
        .par_iter()
        .map(|t| {
            let z = t.z_pair();
            let z_d = t.z_d();
            VirtualChannelRecord {
                z1: z.z1,
                z2: z.z2,
                z_global: (z_d[0] + z_d[1] + z_d[2]) / 3.0,
                class: classify_z(z_d, delta).expect("delta checked above"),
            }
        })
        .collect();
    let mut counts = ClassCounts::default();
    for r in &records {
        counts.add(r.class);
    }
    let zr = start.z_pair();
    Ok(ConstructionReport {
        n,
        delta,
        policy,
        counts,
        records,
        gammas,
        root: RootSummary {
            z_partial_1: zr.z1,
            z_partial_2: zr.z2,
            mutual_information: start.mutual_information(),
        },
    })
}

/// Limit fractions (|A|/N, (|B|+|C|)/N, |D|/N) of the polarized sets.
pub fn asymptotic_fractions(pair: ZPair) -> (f64, f64, f64) {
    let (z1, z2) = (pair.z1, pair.z2);
    let fd = z1 * z2;
    let fbc = z1 + z2 - 2.0 * z1 * z2;
    let fa = 1.0 - z1 - z2 + z1 * z2;
    (fa, fbc, fd)
}
