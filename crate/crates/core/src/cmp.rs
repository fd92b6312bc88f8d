//! Flagged-component form of a mixed-Pauli channel.
//!
//! A channel here is a weighted list of Pauli error distributions: with
//! probability `weight` the channel applies an error drawn from `dist` and
//! the flag is part of the output. This is closed under combining and
//! splitting, so the polar recursion can run on component lists instead of
//! full transition matrices. Merging components whose distributions agree up
//! to an XOR translation is exactly the proportional-column output reduction
//! of the lowered matrix, so the two representations synthesize equivalent
//! channels; the component form just stays a factor ~16 smaller per step.

use crate::channel::{QuaternaryChannel, MERGE_TOL};
use crate::error::{Error, Result};
use crate::gamma::PairPermutation;
use crate::label::{PauliLabel, NONZERO_LABELS};

/// A channel as a mixture of Pauli components: (weight, error distribution).
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentChannel {
    comps: Vec<(f64, [f64; 4])>,
}

#[inline]
fn translate(p: &[f64; 4], d: usize) -> [f64; 4] {
    [p[d], p[1 ^ d], p[2 ^ d], p[3 ^ d]]
}

/// Canonical representative of a distribution under the four translations:
/// the lexicographically smallest translate.
#[inline]
fn canonical(p: &[f64; 4]) -> [f64; 4] {
    let mut best = *p;
    for d in 1..4 {
        let t = translate(p, d);
        if t < best {
            best = t;
        }
    }
    best
}

/// Sorts by distribution and merges weights of components whose canonical
/// distributions agree entrywise within the output-merge tolerance.
fn compact(comps: &mut Vec<(f64, [f64; 4])>) {
    comps.sort_unstable_by(|a, b| a.1.partial_cmp(&b.1).expect("no NaN"));
    // windowed merge: members of one family can interleave with another
    // once leading entries tie to rounding noise
    let mut out = 0usize;
    'comps: for i in 0..comps.len() {
        let (w, d) = comps[i];
        for j in (out.saturating_sub(64)..out).rev() {
            let d0 = comps[j].1;
            if d[0] - d0[0] > MERGE_TOL {
                break;
            }
            if d.iter().zip(d0.iter()).all(|(a, b)| (a - b).abs() <= MERGE_TOL) {
                comps[j].0 += w;
                continue 'comps;
            }
        }
        comps[out] = (w, d);
        out += 1;
    }
    comps.truncate(out);
}

impl ComponentChannel {
    /// Builds from raw components; weights must be nonnegative and sum to 1
    /// within 1e-9, distributions are canonicalized and merged.
    pub fn new(raw: Vec<(f64, [f64; 4])>) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::EmptyOutputAlphabet);
        }
        let mut sum = 0.0;
        let mut comps = Vec::with_capacity(raw.len());
        for (w, p) in raw {
            if !(w >= 0.0) {
                return Err(Error::NegativeEntry { row: 0, col: 0, value: w });
            }
            if w == 0.0 {
                continue;
            }
            sum += w;
            comps.push((w, canonical(&p)));
        }
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::RowSumOutOfTolerance { row: 0, sum, tol: 1e-9 });
        }
        compact(&mut comps);
        Ok(Self { comps })
    }

    pub fn num_components(&self) -> usize {
        self.comps.len()
    }

    pub fn components(&self) -> &[(f64, [f64; 4])] {
        &self.comps
    }

    /// Explicit transition matrix over the flagged alphabet (flag, label).
    pub fn lower(&self) -> Result<QuaternaryChannel> {
        let mut outputs = Vec::with_capacity(4 * self.comps.len());
        let mut cols = Vec::with_capacity(4 * self.comps.len());
        for (x, (w, p)) in self.comps.iter().enumerate() {
            for u in 0..4usize {
                // column over inputs v: weight * p[u xor v]
                outputs.push(format!("({x},{})", PauliLabel::from_index(u as u8).name()));
                cols.push([
                    w * p[u],
                    w * p[u ^ 1],
                    w * p[u ^ 2],
                    w * p[u ^ 3],
                ]);
            }
        }
        QuaternaryChannel::from_columns(outputs, cols)
    }

    /// Z_d(W) = sum over components of weight * sum_w sqrt(p_w p_{w xor d}).
    pub fn z_d(&self, d: PauliLabel) -> Result<f64> {
        if d == PauliLabel::I {
            return Err(Error::ZeroDifference);
        }
        let di = d.index();
        Ok(self
            .comps
            .iter()
            .map(|(w, p)| w * (0..4).map(|v| (p[v] * p[v ^ di]).sqrt()).sum::<f64>())
            .sum())
    }

    /// Z(W^[d]) of the binary partial channel, summed over components.
    pub fn z_partial(&self, d: PauliLabel) -> Result<f64> {
        if d == PauliLabel::I {
            return Err(Error::ZeroDifference);
        }
        let di = d.index();
        let rest: Vec<usize> = NONZERO_LABELS
            .iter()
            .map(|l| l.index())
            .filter(|&i| i != di)
            .collect();
        Ok(self
            .comps
            .iter()
            .map(|(w, p)| {
                w * (0..4)
                    .map(|y| {
                        let a = 0.5 * (p[y] + p[y ^ di]);
                        let b = 0.5 * (p[y ^ rest[0]] + p[y ^ rest[1]]);
                        (a * b).sqrt()
                    })
                    .sum::<f64>()
            })
            .sum())
    }

    /// Symmetric mutual information: 2 - H(p) per component, weight-averaged.
    pub fn mutual_information(&self) -> f64 {
        self.comps
            .iter()
            .map(|(w, p)| {
                let h: f64 = p
                    .iter()
                    .map(|&q| if q > 0.0 { -q * q.log2() } else { 0.0 })
                    .sum();
                w * (2.0 - h)
            })
            .sum()
    }

    /// Z(W), the global Bhattacharyya parameter.
    pub fn z_global(&self) -> f64 {
        NONZERO_LABELS
            .iter()
            .map(|&d| self.z_d(d).expect("nonzero"))
            .sum::<f64>()
            / 3.0
    }

    /// One combining/splitting step on two copies of this channel.
    ///
    /// For a component pair (p, p') the marginalized branch contributes the
    /// single component q_u = sum_v p[g1(u,v)] p'[g2(u,v)], and the
    /// conditioned branch one component per u with weight scaled by q_u.
    /// `max_components` bounds both children after merging.
    pub fn split(
        &self,
        gamma: &PairPermutation,
        max_components: usize,
    ) -> Result<(ComponentChannel, ComponentChannel)> {
        let (t1, t2) = gamma.tables();
        let f = self.comps.len();
        let mut bad: Vec<(f64, [f64; 4])> = Vec::new();
        let mut good: Vec<(f64, [f64; 4])> = Vec::new();
        // doubling high-waters amortize the compaction sorts while keeping
        // transient memory bounded
        let mut bad_hw = 1usize << 16;
        let mut good_hw = 1usize << 16;
        for i in 0..f {
            let (wi, pi) = self.comps[i];
            for j in 0..f {
                let (wj, pj) = self.comps[j];
                let w = wi * wj;
                let mut q = [0.0f64; 4];
                let mut r = [[0.0f64; 4]; 4];
                for u in 0..4 {
                    for v in 0..4 {
                        let t = pi[t1[u][v] as usize] * pj[t2[u][v] as usize];
                        r[u][v] = t;
                        q[u] += t;
                    }
                }
                bad.push((w, canonical(&q)));
                for u in 0..4 {
                    if q[u] > 0.0 {
                        let inv = 1.0 / q[u];
                        let mut d = r[u];
                        for e in d.iter_mut() {
                            *e *= inv;
                        }
                        good.push((w * q[u], canonical(&d)));
                    }
                }
            }
            if bad.len() > bad_hw {
                compact(&mut bad);
                if bad.len() > max_components {
                    return Err(Error::WidthCapExceeded {
                        width: bad.len(),
                        cap: max_components,
                    });
                }
                bad_hw = (bad.len() * 2).max(1 << 16);
            }
            if good.len() > good_hw {
                compact(&mut good);
                if good.len() > max_components {
                    return Err(Error::WidthCapExceeded {
                        width: good.len(),
                        cap: max_components,
                    });
                }
                good_hw = (good.len() * 2).max(1 << 16);
            }
        }
        compact(&mut bad);
        compact(&mut good);
        for side in [&bad, &good] {
            if side.len() > max_components {
                return Err(Error::WidthCapExceeded {
                    width: side.len(),
                    cap: max_components,
                });
            }
        }
        Ok((Self { comps: bad }, Self { comps: good }))
    }
}
