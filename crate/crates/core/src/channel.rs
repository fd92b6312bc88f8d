//! Quaternary- and binary-input channels as explicit transition matrices.
//!
//! A channel is stored column-major: one likelihood column per output symbol,
//! indexed by the fixed Pauli-label encoding. All channels are immutable after
//! validation and every operation on them is a pure function.

use crate::error::{Error, Result};
use crate::label::{PauliLabel, LABELS};

/// Row-sum tolerance accepted by validation.
pub const ROW_SUM_TOL: f64 = 1e-9;
/// Tolerance for merging proportional output columns (applied to columns
/// normalized by their sum, whose entries lie in [0, 1]).
pub const MERGE_TOL: f64 = 1e-12;
/// Per-entry tolerance for channel equivalence.
pub const EQUIV_TOL: f64 = 1e-9;

/// A channel from the 4 Pauli labels to a finite output alphabet.
#[derive(Clone, PartialEq, Debug)]
pub struct QuaternaryChannel {
    outputs: Vec<String>,
    cols: Vec<[f64; 4]>,
}

/// A binary-input channel (the partial channels of a quaternary one).
#[derive(Clone, PartialEq, Debug)]
pub struct BinaryChannel {
    outputs: Vec<String>,
    cols: Vec<[f64; 2]>,
}

fn check_and_normalize<const R: usize>(cols: &mut [[f64; R]]) -> Result<()> {
    if cols.is_empty() {
        return Err(Error::EmptyOutputAlphabet);
    }
    for (y, col) in cols.iter().enumerate() {
        for (x, &p) in col.iter().enumerate() {
            if !(p >= 0.0) {
                return Err(Error::NegativeEntry {
                    row: x,
                    col: y,
                    value: p,
                });
            }
        }
    }
    for x in 0..R {
        let sum: f64 = cols.iter().map(|c| c[x]).sum();
        if (sum - 1.0).abs() > ROW_SUM_TOL {
            return Err(Error::RowSumOutOfTolerance {
                row: x,
                sum,
                tol: ROW_SUM_TOL,
            });
        }
        if sum != 1.0 {
            for c in cols.iter_mut() {
                c[x] /= sum;
            }
        }
    }
    Ok(())
}

fn synthetic_labels(m: usize) -> Vec<String> {
    (0..m).map(|y| format!("y{y}")).collect()
}

/// Merge proportional columns (summing them), dropping zero-mass columns.
/// Shared by the quaternary and binary reductions.
fn reduce_cols<const R: usize>(cols: &[[f64; R]]) -> Vec<[f64; R]> {
    // key = column normalized by its sum; entries are in [0,1], so the
    // relative merge tolerance acts as an absolute one on the key
    let mut keyed: Vec<([f64; R], [f64; R])> = cols
        .iter()
        .filter_map(|c| {
            let s: f64 = c.iter().sum();
            if s == 0.0 {
                return None;
            }
            let mut d = *c;
            for e in d.iter_mut() {
                *e /= s;
            }
            Some((d, *c))
        })
        .collect();
    keyed.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("validated entries are not NaN"));
    // proportional columns may interleave with other families once their
    // leading entries agree to rounding noise, so scan a window of previous
    // groups instead of only the last one
    let mut merged: Vec<([f64; R], [f64; R])> = Vec::with_capacity(keyed.len());
    'cols: for (key, col) in keyed {
        for (k0, c0) in merged.iter_mut().rev().take(64) {
            if key[0] - k0[0] > MERGE_TOL {
                break;
            }
            if key.iter().zip(k0.iter()).all(|(a, b)| (a - b).abs() <= MERGE_TOL) {
                for (e, v) in c0.iter_mut().zip(col.iter()) {
                    *e += v;
                }
                continue 'cols;
            }
        }
        merged.push((key, col));
    }
    merged.into_iter().map(|(_, c)| c).collect()
}

impl QuaternaryChannel {
    /// Validates and builds a channel from per-output likelihood columns.
    ///
    /// Entries must be nonnegative and every input row must sum to 1 within
    /// `ROW_SUM_TOL`; rows are renormalized to exactly 1 when they deviate.
    pub fn from_columns(outputs: Vec<String>, mut cols: Vec<[f64; 4]>) -> Result<Self> {
        if outputs.len() != cols.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} labels for {} columns",
                outputs.len(),
                cols.len()
            )));
        }
        check_and_normalize(&mut cols)?;
        Ok(Self { outputs, cols })
    }

    /// Validates a 4 x M row-major matrix; output labels are synthetic.
    pub fn from_rows(rows: &[Vec<f64>; 4]) -> Result<Self> {
        let m = rows[0].len();
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        let cols = (0..m)
            .map(|y| [rows[0][y], rows[1][y], rows[2][y], rows[3][y]])
            .collect();
        Self::from_columns(synthetic_labels(m), cols)
    }

    /// The noiseless channel: W(u|v) = [u = v].
    pub fn identity() -> Self {
        let mut cols = vec![[0.0; 4]; 4];
        for x in 0..4 {
            cols[x][x] = 1.0;
        }
        Self::from_columns(LABELS.iter().map(|l| l.name().into()).collect(), cols)
            .expect("identity is valid")
    }

    /// The fully randomizing channel: W(u|v) = 1/4 on a 4-symbol alphabet.
    pub fn fully_randomizing() -> Self {
        let cols = vec![[0.25; 4]; 4];
        Self::from_columns(LABELS.iter().map(|l| l.name().into()).collect(), cols)
            .expect("uniform is valid")
    }

    /// Group channel of a Pauli error distribution: W(u|v) = p[u xor v].
    pub fn from_pauli(p: [f64; 4]) -> Result<Self> {
        let mut cols = vec![[0.0; 4]; 4];
        for v in 0..4 {
            for w in 0..4 {
                cols[v ^ w][v] = p[w];
            }
        }
        Self::from_columns(LABELS.iter().map(|l| l.name().into()).collect(), cols)
    }

    /// The erasure channel rendered over outputs {I, Z, X, Y, ?}.
    pub fn erasure(eps: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eps) {
            return Err(Error::EpsilonOutOfRange(eps));
        }
        let mut cols = vec![[0.0; 4]; 5];
        for x in 0..4 {
            cols[x][x] = 1.0 - eps;
            cols[4][x] = eps;
        }
        let mut outputs: Vec<String> = LABELS.iter().map(|l| l.name().into()).collect();
        outputs.push("?".into());
        Self::from_columns(outputs, cols)
    }

    /// Bit-level erasure channel over the 9 outputs
    /// {(x1,x2)} + {(?,x2)} + {(x1,?)} + {(?,?)}.
    pub fn bit_level_erasure(eps1: f64, eps2: f64, eps3: f64) -> Result<Self> {
        for e in [eps1, eps2, eps3] {
            if !(0.0..=1.0).contains(&e) {
                return Err(Error::EpsilonOutOfRange(e));
            }
        }
        let eps0 = 1.0 - eps1 - eps2 - eps3;
        if eps0 < -1e-12 {
            return Err(Error::EpsilonOutOfRange(eps1 + eps2 + eps3));
        }
        let eps0 = eps0.max(0.0);
        let mut cols = vec![[0.0; 4]; 9];
        let mut outputs = Vec::with_capacity(9);
        for l in LABELS {
            outputs.push(format!("({},{})", l.x_bit(), l.z_bit()));
        }
        outputs.extend(["(?,0)".into(), "(?,1)".into(), "(0,?)".into(), "(1,?)".into(), "(?,?)".to_string()]);
        for x in LABELS {
            let i = x.index();
            cols[i][i] = eps0;
            cols[4 + x.z_bit() as usize][i] = eps1;
            cols[6 + x.x_bit() as usize][i] = eps2;
            cols[8][i] = eps3;
        }
        Self::from_columns(outputs, cols)
    }

    #[inline]
    pub fn num_outputs(&self) -> usize {
        self.cols.len()
    }

    pub fn outputs(&self) -> &[String] {
        &self.outputs
    }

    pub fn columns(&self) -> &[[f64; 4]] {
        &self.cols
    }

    /// W(y|x) by output index and input label.
    #[inline]
    pub fn prob(&self, y: usize, x: PauliLabel) -> f64 {
        self.cols[y][x.index()]
    }

    /// Merges outputs with proportional likelihood columns and drops
    /// zero-probability outputs. Every channel metric is preserved.
    pub fn reduce_outputs(&self) -> Self {
        let cols = reduce_cols(&self.cols);
        Self {
            outputs: synthetic_labels(cols.len()),
            cols,
        }
    }

    /// Channel equivalence: identical transition matrix up to a permutation
    /// of input rows and output columns.
    ///
    /// Both channels are reduced, then the column multisets are compared
    /// (after canonical sorting) under each of the 24 input permutations.
    pub fn equivalent(&self, other: &Self) -> bool {
        let a = self.reduce_outputs();
        let b = other.reduce_outputs();
        if a.cols.len() != b.cols.len() {
            return false;
        }
        let sorted = |cols: &[[f64; 4]]| {
            let mut v = cols.to_vec();
            v.sort_by(|x, y| x.partial_cmp(y).expect("no NaN"));
            v
        };
        let b_sorted = sorted(&b.cols);
        let mut perm = [0usize, 1, 2, 3];
        permute_all(&mut perm, 0, &mut |p| {
            let permuted: Vec<[f64; 4]> = a
                .cols
                .iter()
                .map(|c| [c[p[0]], c[p[1]], c[p[2]], c[p[3]]])
                .collect();
            columns_match(&sorted(&permuted), &b_sorted)
        })
    }
}

/// Tolerance-aware multiset comparison of two sorted column lists: each
/// column must pair with a distinct near-equal partner. Near-ties can order
/// differently in the two lists, so partners are searched in a local window.
fn columns_match(a: &[[f64; 4]], b: &[[f64; 4]]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    let mut lo = 0usize;
    for col in a {
        while lo < b.len() && (used[lo] || b[lo][0] < col[0] - EQUIV_TOL) {
            if !used[lo] && b[lo][0] < col[0] - EQUIV_TOL {
                return false;
            }
            lo += 1;
        }
        let mut found = false;
        let mut j = lo;
        while j < b.len() && b[j][0] <= col[0] + EQUIV_TOL {
            if !used[j]
                && col
                    .iter()
                    .zip(b[j].iter())
                    .all(|(u, v)| (u - v).abs() <= EQUIV_TOL)
            {
                used[j] = true;
                found = true;
                break;
            }
            j += 1;
        }
        if !found {
            return false;
        }
    }
    true
}

/// Visit all permutations of `perm[k..]`; returns true as soon as `f` does.
fn permute_all(perm: &mut [usize; 4], k: usize, f: &mut impl FnMut(&[usize; 4]) -> bool) -> bool {
    if k == 4 {
        return f(perm);
    }
    for i in k..4 {
        perm.swap(k, i);
        if permute_all(perm, k + 1, f) {
            perm.swap(k, i);
            return true;
        }
        perm.swap(k, i);
    }
    false
}

impl BinaryChannel {
    pub fn from_columns(outputs: Vec<String>, mut cols: Vec<[f64; 2]>) -> Result<Self> {
        if outputs.len() != cols.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} labels for {} columns",
                outputs.len(),
                cols.len()
            )));
        }
        check_and_normalize(&mut cols)?;
        Ok(Self { outputs, cols })
    }

    #[inline]
    pub fn num_outputs(&self) -> usize {
        self.cols.len()
    }

    pub fn outputs(&self) -> &[String] {
        &self.outputs
    }

    pub fn columns(&self) -> &[[f64; 2]] {
        &self.cols
    }

    pub fn reduce_outputs(&self) -> Self {
        let cols = reduce_cols(&self.cols);
        Self {
            outputs: synthetic_labels(cols.len()),
            cols,
        }
    }
}
