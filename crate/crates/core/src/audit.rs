//! Sound verification of the set-size bounds at depths where exact synthesis
//! is out of reach.
//!
//! Exact output alphabets square at every conditioned split, so non-erasure
//! channels cannot be synthesized to depths like 2^8 leaves within any memory
//! budget. The set-size bounds can still be checked one-sidedly:
//!
//! * the partial-channel parameters obey provable per-step upper bounds that
//!   close over pairs (the erasure closed forms with inequality instead of
//!   equality), so a subtree whose root is too wide to split is covered by
//!   evolving bound pairs, certifying "noiseless here" / "not noisy here";
//! * mutual information is conserved exactly across splits, so the number of
//!   uncertified leaves that could still be noiseless is limited by the
//!   information budget left after the exact leaves and the per-leaf
//!   information lower bounds are paid for.
//!
//! Together these bound |D| and |A| + |D| from above, which is exactly what
//! the two set-size inequalities need.

use crate::classify::ChannelClass;
use crate::cmp::ComponentChannel;
use crate::erasure::ZPair;
use crate::error::{Error, Result};
use crate::gamma::PairPermutation;
use crate::label::PauliLabel;
use crate::polar::Limits;
use crate::report::BoundCheck;
use crate::schedule::SchedulePolicy;

/// Raw tallies from a certified sweep.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CertifiedCounts {
    /// Leaves classified exactly.
    pub exact_a: usize,
    pub exact_b: usize,
    pub exact_c: usize,
    pub exact_d: usize,
    pub exact_unpolarized: usize,
    /// Covered leaves whose bound pair certifies the noiseless class.
    pub certified_a: usize,
    /// Covered leaves certified not noisy, but otherwise open.
    pub open_not_d: usize,
    /// Covered leaves with no class certificate.
    pub open: usize,
}

impl CertifiedCounts {
    pub fn total(&self) -> usize {
        self.exact_a
            + self.exact_b
            + self.exact_c
            + self.exact_d
            + self.exact_unpolarized
            + self.certified_a
            + self.open_not_d
            + self.open
    }

    /// Largest possible |D|.
    pub fn d_upper(&self) -> usize {
        self.exact_d + self.open
    }

    /// Fraction of leaves that were synthesized exactly.
    pub fn exact_fraction(&self) -> f64 {
        let exact = self.exact_a
            + self.exact_b
            + self.exact_c
            + self.exact_d
            + self.exact_unpolarized;
        exact as f64 / self.total() as f64
    }
}

/// Outcome of the certified set-size check.
#[derive(Clone, Debug)]
pub struct CertifiedSetSizeCheck {
    pub counts: CertifiedCounts,
    /// How many uncertified not-noisy leaves the information budget lets be
    /// noiseless at most.
    pub info_limited_a: usize,
    /// |D|/N upper estimate against Z(W^[1]) Z(W^[2]).
    pub bound_d: BoundCheck,
    /// Certified lower estimate of (|B|+|C|+unpolarized)/N against
    /// 2 - I(W) - 2 Z(W^[1]) Z(W^[2]).
    pub bound_bc: BoundCheck,
}

const SLACK: f64 = 1e-9;

struct CoveredLeaf {
    /// Certified lower bound on the leaf's mutual information.
    info_low: f64,
    kind: CoverKind,
}

enum CoverKind {
    CertifiedA,
    OpenNotD,
    Open,
}

struct Tally {
    counts: CertifiedCounts,
    exact_info: f64,
    covered: Vec<CoveredLeaf>,
}

/// Information lower bound for a leaf whose partial parameters are bounded
/// above by (u1, u2): the global-Z form and the per-component decomposition
/// form, whichever is tighter.
fn info_lower_bound(u1: f64, u2: f64) -> f64 {
    let m = u1.min(u2);
    let zbar = ((u1 + u2 + m) / 3.0).min(1.0);
    let by_global = (4.0 / (1.0 + 3.0 * zbar)).log2();
    let z3p = (u1 + u2).min(1.0);
    let by_parts = 2.0
        - (2.0 * (1.0 + u1).log2()
            + 2.0 * (1.0 + u2).log2()
            + (1.0 + m).log2()
            + (1.0 + z3p).log2())
            / 3.0;
    by_global.max(by_parts).max(0.0)
}

fn cover_subtree(pair: ZPair, remaining: usize, delta: f64, tally: &mut Tally) {
    if remaining == 0 {
        let (u1, u2) = (pair.z1.min(1.0), pair.z2.min(1.0));
        let kind = if u1 < delta && u2 < delta {
            tally.counts.certified_a += 1;
            CoverKind::CertifiedA
        } else if u1 <= 1.0 - delta || u2 <= 1.0 - delta {
            tally.counts.open_not_d += 1;
            CoverKind::OpenNotD
        } else {
            tally.counts.open += 1;
            CoverKind::Open
        };
        tally.covered.push(CoveredLeaf {
            info_low: info_lower_bound(u1, u2),
            kind,
        });
        return;
    }
    let (bad, good) = pair.step_fixed_l();
    cover_subtree(bad, remaining - 1, delta, tally);
    cover_subtree(good, remaining - 1, delta, tally);
}

fn certify_rec(
    c: ComponentChannel,
    depth: usize,
    n: usize,
    delta: f64,
    limits: &Limits,
    tally: &mut Tally,
) -> Result<()> {
    use PauliLabel::{X, Y, Z};
    if depth == n {
        let z_d = [c.z_d(Z)?, c.z_d(X)?, c.z_d(Y)?];
        tally.exact_info += c.mutual_information();
        match crate::classify::classify_z(z_d, delta)? {
            ChannelClass::Noiseless => tally.counts.exact_a += 1,
            ChannelClass::HalfNoisyType1 => tally.counts.exact_b += 1,
            ChannelClass::HalfNoisyType2 => tally.counts.exact_c += 1,
            ChannelClass::Noisy => tally.counts.exact_d += 1,
            ChannelClass::Unpolarized => tally.counts.exact_unpolarized += 1,
        }
        return Ok(());
    }
    let gamma = PairPermutation::gamma_l();
    match c.split(&gamma, limits.max_components) {
        Ok((bad, good)) => {
            drop(c);
            certify_rec(bad, depth + 1, n, delta, limits, tally)?;
            certify_rec(good, depth + 1, n, delta, limits, tally)
        }
        Err(Error::WidthCapExceeded { .. }) => {
            let pair = ZPair::new(c.z_partial(Z)?.min(1.0), c.z_partial(X)?.min(1.0))?;
            cover_subtree(pair, n - depth, delta, tally);
            Ok(())
        }
        Err(e) => Err(e),
    }
}

/// Checks both set-size bounds for the fixed schedule at depth `n`,
/// synthesizing exactly while the component budget lasts and covering the
/// rest with certified bound pairs plus the information budget.
pub fn certified_set_size_check(
    c: &ComponentChannel,
    n: usize,
    delta: f64,
    limits: &Limits,
) -> Result<CertifiedSetSizeCheck> {
    use PauliLabel::{X, Z};
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::DeltaOutOfRange(delta));
    }
    let mut tally = Tally {
        counts: CertifiedCounts::default(),
        exact_info: 0.0,
        covered: Vec::new(),
    };
    certify_rec(c.clone(), 0, n, delta, limits, &mut tally)?;
    let counts = tally.counts;
    let total = counts.total() as f64;
    let root_info = c.mutual_information();
    let zz = c.z_partial(Z)? * c.z_partial(X)?;

    // conservation: the covered leaves' information sums to exactly the root
    // budget minus the exact leaves; every assignment of the noiseless class
    // to an uncertified leaf must pay that class's minimum information
    let covered_floor: f64 = tally.covered.iter().map(|l| l.info_low).sum();
    let budget = (total * root_info - tally.exact_info - covered_floor).max(0.0) + total * SLACK;
    let info_a = (4.0 / (1.0 + 3.0 * delta)).log2();
    let mut upgrade_costs: Vec<f64> = tally
        .covered
        .iter()
        .filter(|l| matches!(l.kind, CoverKind::OpenNotD))
        .map(|l| (info_a - l.info_low).max(0.0))
        .collect();
    upgrade_costs.sort_by(|a, b| a.partial_cmp(b).expect("no NaN"));
    let mut left = budget;
    let mut info_limited_a = 0usize;
    for cost in upgrade_costs {
        if cost <= left {
            left -= cost;
            info_limited_a += 1;
        } else {
            break;
        }
    }

    let d_frac_hi = counts.d_upper() as f64 / total;
    let a_plus_d_hi =
        counts.exact_a + counts.exact_d + counts.certified_a + counts.open + info_limited_a;
    let bc_lo = 1.0 - a_plus_d_hi as f64 / total;
    let bc_rhs = 2.0 - root_info - 2.0 * zz;
    Ok(CertifiedSetSizeCheck {
        counts,
        info_limited_a,
        bound_d: BoundCheck {
            lhs: d_frac_hi,
            rhs: zz,
            holds: d_frac_hi <= zz + SLACK,
        },
        bound_bc: BoundCheck {
            lhs: bc_lo,
            rhs: bc_rhs,
            holds: bc_lo >= bc_rhs - SLACK,
        },
    })
}

/// The schedule the certified cover models; exposed so callers can assert it.
pub const CERTIFIED_POLICY: SchedulePolicy = SchedulePolicy::FixedL;
