//! Channel combining/splitting and the recursive construction of virtual
//! channels, on explicit matrices or on mixed-Pauli component lists.

use crate::channel::QuaternaryChannel;
use crate::classify::classify_z;
use crate::cmp::ComponentChannel;
use crate::error::{Error, Result};
use crate::gamma::PairPermutation;
use crate::label::PauliLabel;
use crate::report::{
    ClassCounts, ConstructionReport, GammaTree, RootSummary, VirtualChannelRecord,
};
use crate::schedule::{SchedulePolicy, ADAPTIVE_TIE_TOL};

/// Resource caps for the generic recursion. The depth cap keeps the
/// exponential-width worst case from being entered by accident; the width
/// caps turn runaway output growth into a clean error instead of thrashing.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    /// Maximum recursion depth for generic (non-erasure-lane) channels.
    pub max_depth: usize,
    /// Maximum output-alphabet size a matrix channel may reach.
    pub max_outputs: usize,
    /// Maximum component count a mixed-Pauli channel may reach.
    pub max_components: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_depth: 10,
            max_outputs: 2048,
            max_components: 1 << 16,
        }
    }
}

/// One combining/splitting step on two copies of `w`.
///
/// The first returned channel marginalizes the paired input (outputs
/// (y1, y2)); the second conditions on it (outputs (y1, y2, u)). Both are
/// passed through output reduction.
pub fn combine_split(
    w: &QuaternaryChannel,
    gamma: &PairPermutation,
) -> Result<(QuaternaryChannel, QuaternaryChannel)> {
    let (t1, t2) = gamma.tables();
    let cols = w.columns();
    let m = cols.len();
    let mut bad_cols = Vec::with_capacity(m * m);
    let mut good_cols = Vec::with_capacity(m * m * 4);
    for c1 in cols {
        for c2 in cols {
            let mut bad = [0.0f64; 4];
            for u in 0..4 {
                let mut col = [0.0f64; 4];
                for v in 0..4 {
                    let t = 0.25 * c1[t1[u][v] as usize] * c2[t2[u][v] as usize];
                    col[v] = t;
                    bad[u] += t;
                }
                good_cols.push(col);
            }
            bad_cols.push(bad);
        }
    }
    let bad = QuaternaryChannel::from_columns(
        (0..bad_cols.len()).map(|i| format!("b{i}")).collect(),
        bad_cols,
    )?
    .reduce_outputs();
    let good = QuaternaryChannel::from_columns(
        (0..good_cols.len()).map(|i| format!("g{i}")).collect(),
        good_cols,
    )?
    .reduce_outputs();
    Ok((bad, good))
}

/// T(gamma, W): the sum of the two partial-channel parameters of the
/// conditioned branch under `gamma`.
pub fn t_value(w: &QuaternaryChannel, gamma: &PairPermutation) -> Result<f64> {
    let (_, good) = combine_split(w, gamma)?;
    Ok(good.z_partial(PauliLabel::Z)? + good.z_partial(PauliLabel::X)?)
}

/// Picks the combining permutation minimizing T over {Gamma1, Gamma2};
/// ties within 1e-12 go to Gamma1.
pub fn adaptive_choice(w: &QuaternaryChannel) -> Result<PairPermutation> {
    let g1 = PairPermutation::gamma_1();
    let g2 = PairPermutation::gamma_2();
    let t1 = t_value(w, &g1)?;
    let t2 = t_value(w, &g2)?;
    Ok(if t1 <= t2 + ADAPTIVE_TIE_TOL { g1 } else { g2 })
}

fn choose_gamma_matrix(
    w: &QuaternaryChannel,
    policy: SchedulePolicy,
    step: usize,
) -> Result<PairPermutation> {
    match policy.fixed_choice(step) {
        Some(name) => Ok(PairPermutation::by_name(name)),
        None => adaptive_choice(w),
    }
}

/// Synthesizes the virtual channel along `path` ('0' = marginalized branch,
/// '1' = conditioned branch; first character is the first polarization step).
pub fn synthesize(
    w: &QuaternaryChannel,
    path: &str,
    policy: SchedulePolicy,
    limits: &Limits,
) -> Result<QuaternaryChannel> {
    if path.len() > limits.max_depth {
        return Err(Error::DepthCapExceeded {
            depth: path.len(),
            cap: limits.max_depth,
        });
    }
    let mut current = w.clone();
    for (k, bit) in path.chars().enumerate() {
        let take_good = match bit {
            '0' => false,
            '1' => true,
            other => return Err(Error::Spec(format!("path bit {other:?} is not 0/1"))),
        };
        if current.num_outputs() > limits.max_outputs {
            return Err(Error::WidthCapExceeded {
                width: current.num_outputs(),
                cap: limits.max_outputs,
            });
        }
        let gamma = choose_gamma_matrix(&current, policy, k + 1)?;
        let (bad, good) = combine_split(&current, &gamma)?;
        current = if take_good { good } else { bad };
    }
    Ok(current)
}

fn record_matrix(w: &QuaternaryChannel, delta: f64) -> Result<VirtualChannelRecord> {
    let m = w.metric_vector();
    Ok(VirtualChannelRecord {
        z1: m.z_partial[0],
        z2: m.z_partial[1],
        z_global: m.z_global,
        class: classify_z(m.z_d, delta)?,
    })
}

fn construct_matrix_rec(
    w: QuaternaryChannel,
    depth: usize,
    prefix: u64,
    n: usize,
    policy: SchedulePolicy,
    delta: f64,
    limits: &Limits,
    records: &mut [VirtualChannelRecord],
    gammas: &mut GammaTree,
) -> Result<()> {
    if depth == n {
        records[0] = record_matrix(&w, delta)?;
        return Ok(());
    }
    if w.num_outputs() > limits.max_outputs {
        return Err(Error::WidthCapExceeded {
            width: w.num_outputs(),
            cap: limits.max_outputs,
        });
    }
    let gamma = choose_gamma_matrix(&w, policy, depth + 1)?;
    gammas.set(depth, prefix as usize, gamma.name);
    let (bad, good) = combine_split(&w, &gamma)?;
    drop(w);
    let (lo, hi) = records.split_at_mut(records.len() / 2);
    construct_matrix_rec(bad, depth + 1, prefix << 1, n, policy, delta, limits, lo, gammas)?;
    construct_matrix_rec(good, depth + 1, (prefix << 1) | 1, n, policy, delta, limits, hi, gammas)
}

fn placeholder_record() -> VirtualChannelRecord {
    VirtualChannelRecord {
        z1: 0.0,
        z2: 0.0,
        z_global: 0.0,
        class: crate::classify::ChannelClass::Unpolarized,
    }
}

/// Classifies all 2^n virtual channels of a matrix channel.
pub fn construct_matrix(
    w: &QuaternaryChannel,
    n: usize,
    policy: SchedulePolicy,
    delta: f64,
    limits: &Limits,
) -> Result<ConstructionReport> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::DeltaOutOfRange(delta));
    }
    if n > limits.max_depth {
        return Err(Error::DepthCapExceeded {
            depth: n,
            cap: limits.max_depth,
        });
    }
    let root = RootSummary {
        z_partial_1: w.z_partial(PauliLabel::Z)?,
        z_partial_2: w.z_partial(PauliLabel::X)?,
        mutual_information: w.mutual_information(),
    };
    let mut records = vec![placeholder_record(); 1 << n];
    let mut gammas = GammaTree::new(n);
    construct_matrix_rec(
        w.clone(),
        0,
        0,
        n,
        policy,
        delta,
        limits,
        &mut records,
        &mut gammas,
    )?;
    let mut counts = ClassCounts::default();
    for r in &records {
        counts.add(r.class);
    }
    Ok(ConstructionReport {
        n,
        delta,
        policy,
        counts,
        records,
        gammas,
        root,
    })
}

/// Streaming T of the conditioned branch for a component channel; avoids
/// materializing the child since Z is additive over unmerged components.
fn t_value_components(c: &ComponentChannel, gamma: &PairPermutation) -> f64 {
    let (t1, t2) = gamma.tables();
    let comps = c.components();
    let mut tsum = 0.0;
    for (wi, pi) in comps {
        for (wj, pj) in comps {
            let w = wi * wj;
            for u in 0..4 {
                let mut r = [0.0f64; 4];
                for v in 0..4 {
                    r[v] = pi[t1[u][v] as usize] * pj[t2[u][v] as usize];
                }
                // partial-channel parameters of a group component p reduce to
                // Z^[1] = 2 sqrt((p0+p1)(p2+p3)), Z^[2] = 2 sqrt((p0+p2)(p1+p3));
                // both are 1-homogeneous, so the q_u normalization cancels
                let z1 = 2.0 * ((r[0] + r[1]) * (r[2] + r[3])).sqrt();
                let z2 = 2.0 * ((r[0] + r[2]) * (r[1] + r[3])).sqrt();
                tsum += w * (z1 + z2);
            }
        }
    }
    tsum
}

/// Adaptive choice on the component form.
pub fn adaptive_choice_components(c: &ComponentChannel) -> PairPermutation {
    let g1 = PairPermutation::gamma_1();
    let g2 = PairPermutation::gamma_2();
    let t1 = t_value_components(c, &g1);
    let t2 = t_value_components(c, &g2);
    if t1 <= t2 + ADAPTIVE_TIE_TOL {
        g1
    } else {
        g2
    }
}

fn record_components(c: &ComponentChannel, delta: f64) -> Result<VirtualChannelRecord> {
    use PauliLabel::{X, Y, Z};
    let z_d = [c.z_d(Z)?, c.z_d(X)?, c.z_d(Y)?];
    Ok(VirtualChannelRecord {
        z1: c.z_partial(Z)?,
        z2: c.z_partial(X)?,
        z_global: (z_d[0] + z_d[1] + z_d[2]) / 3.0,
        class: classify_z(z_d, delta)?,
    })
}

fn construct_components_rec(
    c: ComponentChannel,
    depth: usize,
    prefix: u64,
    n: usize,
    policy: SchedulePolicy,
    delta: f64,
    limits: &Limits,
    records: &mut [VirtualChannelRecord],
    gammas: &mut GammaTree,
) -> Result<()> {
    if depth == n {
        records[0] = record_components(&c, delta)?;
        return Ok(());
    }
    let gamma = match policy.fixed_choice(depth + 1) {
        Some(name) => PairPermutation::by_name(name),
        None => adaptive_choice_components(&c),
    };
    gammas.set(depth, prefix as usize, gamma.name);
    let (bad, good) = c.split(&gamma, limits.max_components)?;
    drop(c);
    let (lo, hi) = records.split_at_mut(records.len() / 2);
    construct_components_rec(bad, depth + 1, prefix << 1, n, policy, delta, limits, lo, gammas)?;
    construct_components_rec(good, depth + 1, (prefix << 1) | 1, n, policy, delta, limits, hi, gammas)
}

/// Classifies all 2^n virtual channels of a mixed-Pauli component channel.
pub fn construct_components(
    c: &ComponentChannel,
    n: usize,
    policy: SchedulePolicy,
    delta: f64,
    limits: &Limits,
) -> Result<ConstructionReport> {
    use PauliLabel::{X, Z};
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::DeltaOutOfRange(delta));
    }
    if n > limits.max_depth {
        return Err(Error::DepthCapExceeded {
            depth: n,
            cap: limits.max_depth,
        });
    }
    let root = RootSummary {
        z_partial_1: c.z_partial(Z)?,
        z_partial_2: c.z_partial(X)?,
        mutual_information: c.mutual_information(),
    };
    let mut records = vec![placeholder_record(); 1 << n];
    let mut gammas = GammaTree::new(n);
    construct_components_rec(
        c.clone(),
        0,
        0,
        n,
        policy,
        delta,
        limits,
        &mut records,
        &mut gammas,
    )?;
    let mut counts = ClassCounts::default();
    for r in &records {
        counts.add(r.class);
    }
    Ok(ConstructionReport {
        n,
        delta,
        policy,
        counts,
        records,
        gammas,
        root,
    })
}

/// Entry point from a channel spec. Plain erasure specs route to the
/// closed-form lane (no depth cap beyond its memory bound); Pauli and cmp
/// specs run on the component form. `force_generic` runs the matrix engine
/// on the lowered transition matrix instead, for oracle cross-checks.
pub fn construct(
    spec: &crate::spec::ChannelSpec,
    n: usize,
    policy: SchedulePolicy,
    delta: f64,
    limits: &Limits,
    force_generic: bool,
) -> Result<ConstructionReport> {
    if force_generic {
        return construct_matrix(&spec.lower()?, n, policy, delta, limits);
    }
    if let Some(triple) = spec.as_erasure() {
        return crate::erasure::sweep_channel(triple?, n, policy, delta);
    }
    construct_components(&spec.components()?, n, policy, delta, limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::ChannelClass;
    use crate::gamma::PermName;
    use PauliLabel::{X, Z};

    #[test]
    fn identity_stays_noiseless_and_uniform_stays_noisy() {
        let gl = PairPermutation::gamma_l();
        let (b, g) = combine_split(&QuaternaryChannel::identity(), &gl).unwrap();
        for w in [&b, &g] {
            for d in crate::label::NONZERO_LABELS {
                assert!(w.z_d(d).unwrap() < 1e-12);
            }
        }
        let (b, g) = combine_split(&QuaternaryChannel::fully_randomizing(), &gl).unwrap();
        for w in [&b, &g] {
            assert!(w.mutual_information().abs() < 1e-12);
        }
    }

    #[test]
    fn erasure_split_partials() {
        let w = QuaternaryChannel::erasure(0.1).unwrap();
        let (b, g) = combine_split(&w, &PairPermutation::gamma_l()).unwrap();
        assert!((b.z_partial(Z).unwrap() - 0.19).abs() < 1e-12);
        assert!((b.z_partial(X).unwrap() - 0.1).abs() < 1e-12);
        assert!((g.z_partial(Z).unwrap() - 0.01).abs() < 1e-12);
        assert!((g.z_partial(X).unwrap() - 0.1).abs() < 1e-12);
    }

    #[test]
    fn synthesize_empty_path_returns_the_channel() {
        let w = QuaternaryChannel::erasure(0.3).unwrap();
        let s = synthesize(&w, "", SchedulePolicy::FixedL, &Limits::default()).unwrap();
        assert!(w.equivalent(&s));
    }

    #[test]
    fn synthesize_good_good_path() {
        let w = QuaternaryChannel::erasure(0.1).unwrap();
        let s = synthesize(&w, "11", SchedulePolicy::FixedL, &Limits::default()).unwrap();
        // two conditioned steps: (z1, z2) -> (z2^2, z1) -> (z1^2, z2^2)
        assert!((s.z_partial(Z).unwrap() - 0.01).abs() < 1e-12);
        assert!((s.z_partial(X).unwrap() - 0.01).abs() < 1e-12);
    }

    #[test]
    fn depth_cap_is_enforced() {
        let w = QuaternaryChannel::erasure(0.1).unwrap();
        let err = synthesize(&w, "011011011011", SchedulePolicy::FixedL, &Limits::default())
            .unwrap_err();
        assert!(matches!(err, Error::DepthCapExceeded { depth: 12, cap: 10 }));
        let err =
            construct_matrix(&w, 12, SchedulePolicy::FixedL, 1e-6, &Limits::default()).unwrap_err();
        assert!(matches!(err, Error::DepthCapExceeded { .. }));
    }

    #[test]
    fn adaptive_choice_examples() {
        // symmetric start: tie, Gamma1
        let w = QuaternaryChannel::erasure(0.1).unwrap();
        assert_eq!(adaptive_choice(&w).unwrap().name, PermName::Gamma1);
        // z1 = 0.5, z2 = 0.1: T2 = 0.35 < T1 = 0.51, Gamma2
        let w = QuaternaryChannel::bit_level_erasure(0.5, 0.1, 0.0).unwrap();
        assert_eq!(adaptive_choice(&w).unwrap().name, PermName::Gamma2);
        // noiseless: all T zero, tie, Gamma1
        assert_eq!(
            adaptive_choice(&QuaternaryChannel::identity()).unwrap().name,
            PermName::Gamma1
        );
    }

    #[test]
    fn construct_endpoint_channels() {
        let limits = Limits::default();
        let rep = construct_matrix(
            &QuaternaryChannel::identity(),
            3,
            SchedulePolicy::FixedL,
            1e-6,
            &limits,
        )
        .unwrap();
        assert_eq!(rep.counts.a, 8);
        assert_eq!(rep.counts.total(), 8);
        rep.validate().unwrap();
        let rep = construct_matrix(
            &QuaternaryChannel::fully_randomizing(),
            3,
            SchedulePolicy::Adaptive,
            1e-6,
            &limits,
        )
        .unwrap();
        assert_eq!(rep.counts.d, 8);
    }

    #[test]
    fn construct_zero_depth_reports_the_root_class() {
        let w = QuaternaryChannel::erasure(0.4).unwrap();
        let rep =
            construct_matrix(&w, 0, SchedulePolicy::FixedL, 0.1, &Limits::default()).unwrap();
        assert_eq!(rep.records.len(), 1);
        assert_eq!(rep.records[0].class, ChannelClass::Unpolarized);
    }

    #[test]
    fn component_construct_matches_matrix_construct() {
        let spec = crate::spec::ChannelSpec::pauli([0.7, 0.1, 0.1, 0.1]);
        let limits = Limits::default();
        for policy in [
            SchedulePolicy::FixedL,
            SchedulePolicy::Alternating,
            SchedulePolicy::Adaptive,
        ] {
            let rm =
                construct_matrix(&spec.lower().unwrap(), 3, policy, 0.05, &limits).unwrap();
            let rc =
                construct_components(&spec.components().unwrap(), 3, policy, 0.05, &limits)
                    .unwrap();
            for (a, b) in rm.records.iter().zip(rc.records.iter()) {
                assert!((a.z1 - b.z1).abs() < 1e-9, "{a:?} vs {b:?}");
                assert!((a.z2 - b.z2).abs() < 1e-9);
                assert!((a.z_global - b.z_global).abs() < 1e-9);
                assert_eq!(a.class, b.class);
            }
            assert_eq!(rm.gammas, rc.gammas);
        }
    }
}
