//! Construction sweep results: per-index records, set counts, bound checks,
//! and the CSV/plot-data serializations.

use crate::classify::ChannelClass;
use crate::error::{Error, Result};
use crate::gamma::PermName;
use crate::schedule::SchedulePolicy;
use std::io::Write;

/// Per-index outcome of a construction sweep.
///
/// `z1` and `z2` are the Bhattacharyya parameters of the two binary partial
/// channels (their sum is the T-value); `z_global` is Z(W) of the virtual
/// channel, kept for the decoding union bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VirtualChannelRecord {
    pub z1: f64,
    pub z2: f64,
    pub z_global: f64,
    pub class: ChannelClass,
}

impl VirtualChannelRecord {
    #[inline]
    pub fn t_value(&self) -> f64 {
        self.z1 + self.z2
    }
}

/// The combining permutations chosen at every internal node of the
/// construction tree: level k holds one entry per length-k path prefix.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaTree {
    levels: Vec<Vec<PermName>>,
}

impl GammaTree {
    pub fn new(n: usize) -> Self {
        Self {
            levels: (0..n).map(|k| vec![PermName::GammaL; 1 << k]).collect(),
        }
    }

    /// Pre-filled tree for a non-adaptive policy.
    pub fn for_policy(policy: SchedulePolicy, n: usize) -> Self {
        let mut t = Self::new(n);
        for k in 0..n {
            let name = policy.fixed_choice(k + 1);
            for e in t.levels[k].iter_mut() {
                *e = name.unwrap_or(PermName::GammaL);
            }
        }
        t
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Permutation used when combining two copies of the virtual channel at
    /// `prefix` (a length-`level` path).
    #[inline]
    pub fn choice(&self, level: usize, prefix: usize) -> PermName {
        self.levels[level][prefix]
    }

    #[inline]
    pub fn set(&mut self, level: usize, prefix: usize, name: PermName) {
        self.levels[level][prefix] = name;
    }

    /// Mutable access to one level, for in-place sweeps.
    pub fn level_mut(&mut self, level: usize) -> &mut [PermName] {
        &mut self.levels[level]
    }

    /// The permutation names along the path to a leaf index.
    pub fn path_choices(&self, index: u64) -> Vec<PermName> {
        let n = self.levels.len();
        (0..n)
            .map(|k| self.choice(k, (index >> (n - k)) as usize))
            .collect()
    }

    pub fn path_tags(&self, index: u64) -> String {
        self.path_choices(index).iter().map(|g| g.tag()).collect()
    }
}

/// Counts of the polarization sets.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ClassCounts {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
    pub unpolarized: usize,
}

impl ClassCounts {
    pub fn add(&mut self, class: ChannelClass) {
        match class {
            ChannelClass::Noiseless => self.a += 1,
            ChannelClass::HalfNoisyType1 => self.b += 1,
            ChannelClass::HalfNoisyType2 => self.c += 1,
            ChannelClass::Noisy => self.d += 1,
            ChannelClass::Unpolarized => self.unpolarized += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.a + self.b + self.c + self.d + self.unpolarized
    }
}

/// Root-channel quantities the bound checks compare against.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootSummary {
    pub z_partial_1: f64,
    pub z_partial_2: f64,
    pub mutual_information: f64,
}

/// One side of the set-size bound check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SetSizeBounds {
    /// |D|/N against Z(W^[1]) Z(W^[2]).
    pub bound_d: BoundCheck,
    /// (|B|+|C|)/N against 2 - I(W) - 2 Z(W^[1]) Z(W^[2]), less the
    /// unpolarized fraction (finite-length correction).
    pub bound_bc: BoundCheck,
}

const BOUND_SLACK: f64 = 1e-9;

/// Result of classifying all 2^n virtual channels.
#[derive(Clone, Debug)]
pub struct ConstructionReport {
    pub n: usize,
    pub delta: f64,
    pub policy: SchedulePolicy,
    pub counts: ClassCounts,
    pub records: Vec<VirtualChannelRecord>,
    pub gammas: GammaTree,
    pub root: RootSummary,
}

impl ConstructionReport {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn fraction(&self, count: usize) -> f64 {
        count as f64 / self.records.len() as f64
    }

    /// (|A|/N, (|B|+|C|)/N, |D|/N, unpolarized/N).
    pub fn fractions(&self) -> (f64, f64, f64, f64) {
        (
            self.fraction(self.counts.a),
            self.fraction(self.counts.b + self.counts.c),
            self.fraction(self.counts.d),
            self.fraction(self.counts.unpolarized),
        )
    }

    /// Fraction landing in one of the four polarized sets.
    pub fn covered_fraction(&self) -> f64 {
        1.0 - self.fraction(self.counts.unpolarized)
    }

    /// Path bit string of an index (first polarization step first).
    pub fn path_string(&self, index: u64) -> String {
        (0..self.n)
            .rev()
            .map(|k| if index >> k & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    /// Evaluates both bound checks against the stored root metrics.
    pub fn set_size_check(&self) -> SetSizeBounds {
        let n = self.records.len() as f64;
        let zz = self.root.z_partial_1 * self.root.z_partial_2;
        let d_frac = self.counts.d as f64 / n;
        let bc_frac = (self.counts.b + self.counts.c) as f64 / n;
        let bc_rhs =
            2.0 - self.root.mutual_information - 2.0 * zz - self.counts.unpolarized as f64 / n;
        SetSizeBounds {
            bound_d: BoundCheck {
                lhs: d_frac,
                rhs: zz,
                holds: d_frac <= zz + BOUND_SLACK,
            },
            bound_bc: BoundCheck {
                lhs: bc_frac,
                rhs: bc_rhs,
                holds: bc_frac >= bc_rhs - BOUND_SLACK,
            },
        }
    }

    /// Decoding union bound: 3 Z(W) over the noiseless set plus the partial
    /// parameters over the two half-noisy sets.
    pub fn union_bound(&self) -> f64 {
        pairwise_sum_by(&self.records, |r| match r.class {
            ChannelClass::Noiseless => 3.0 * r.z_global,
            ChannelClass::HalfNoisyType1 => r.z1,
            ChannelClass::HalfNoisyType2 => r.z2,
            _ => 0.0,
        })
    }

    /// Writes the CSV: header, one row per index, then summary comments.
    pub fn write_csv(&self, w: &mut impl Write, sort_by_t: bool) -> std::io::Result<()> {
        writeln!(w, "index,path,z1,z2,t,class,gammas")?;
        let mut order: Vec<usize> = (0..self.records.len()).collect();
        if sort_by_t {
            order.sort_by(|&i, &j| {
                let (a, b) = (self.records[i].t_value(), self.records[j].t_value());
                a.partial_cmp(&b).expect("no NaN").then(i.cmp(&j))
            });
        }
        for i in order {
            let r = &self.records[i];
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                i,
                self.path_string(i as u64),
                r.z1,
                r.z2,
                r.t_value(),
                r.class.name(),
                self.gammas.path_tags(i as u64),
            )?;
        }
        let (fa, fbc, fd, fu) = self.fractions();
        writeln!(w, "# n={} delta={} policy={}", self.n, self.delta, self.policy.name())?;
        writeln!(w, "# |A|={}, fraction={:.5}", self.counts.a, fa)?;
        writeln!(
            w,
            "# |B|={}, |C|={}, fraction={:.5}",
            self.counts.b,
            self.counts.c,
            fbc
        )?;
        writeln!(w, "# |D|={}, fraction={:.5}", self.counts.d, fd)?;
        writeln!(
            w,
            "# unpolarized={}, fraction={:.5}",
            self.counts.unpolarized, fu
        )?;
        writeln!(w, "# covered_fraction={:.5}", self.covered_fraction())?;
        let p10 = self.set_size_check();
        writeln!(
            w,
            "# bound_D: {} <= {} holds={}",
            p10.bound_d.lhs, p10.bound_d.rhs, p10.bound_d.holds
        )?;
        writeln!(
            w,
            "# bound_BC: {} >= {} holds={}",
            p10.bound_bc.lhs, p10.bound_bc.rhs, p10.bound_bc.holds
        )?;
        Ok(())
    }

    /// Two-column (rank, t_value) data, sorted by t, for direct plotting.
    pub fn write_plot_data(&self, w: &mut impl Write) -> std::io::Result<()> {
        let mut ts: Vec<f64> = self.records.iter().map(|r| r.t_value()).collect();
        ts.sort_by(|a, b| a.partial_cmp(b).expect("no NaN"));
        for (rank, t) in ts.iter().enumerate() {
            writeln!(w, "{rank} {t}")?;
        }
        Ok(())
    }

    /// Internal consistency: counts match records and fractions sum to 1.
    pub fn validate(&self) -> Result<()> {
        if self.records.len() != 1usize << self.n {
            return Err(Error::ShapeMismatch(format!(
                "{} records for n={}",
                self.records.len(),
                self.n
            )));
        }
        if self.counts.total() != self.records.len() {
            return Err(Error::ShapeMismatch("counts do not sum to 2^n".into()));
        }
        let (fa, fbc, fd, fu) = self.fractions();
        if ((fa + fbc + fd + fu) - 1.0).abs() > 1e-12 {
            return Err(Error::ShapeMismatch("fractions do not sum to 1".into()));
        }
        Ok(())
    }
}

/// Pairwise (tree) summation of a mapped slice; keeps rounding error at the
/// 2^20-term sums well under the equality tolerances.
pub fn pairwise_sum_by<T>(items: &[T], f: impl Fn(&T) -> f64 + Copy) -> f64 {
    match items.len() {
        0 => 0.0,
        1 => f(&items[0]),
        n => {
            let (lo, hi) = items.split_at(n / 2);
            pairwise_sum_by(lo, f) + pairwise_sum_by(hi, f)
        }
    }
}
