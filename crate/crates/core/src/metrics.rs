//! Scalar channel metrics: Bhattacharyya parameters, symmetric mutual
//! information, and the three binary partial channels.

use crate::channel::{BinaryChannel, QuaternaryChannel};
use crate::error::{Error, Result};
use crate::label::{PauliLabel, LABELS, NONZERO_LABELS};

/// The six unordered input pairs in canonical order:
/// (I,Z), (I,X), (I,Y), (Z,X), (Z,Y), (X,Y).
pub const INPUT_PAIRS: [(PauliLabel, PauliLabel); 6] = [
    (PauliLabel::I, PauliLabel::Z),
    (PauliLabel::I, PauliLabel::X),
    (PauliLabel::I, PauliLabel::Y),
    (PauliLabel::Z, PauliLabel::X),
    (PauliLabel::Z, PauliLabel::Y),
    (PauliLabel::X, PauliLabel::Y),
];

/// All scalar metrics of a quaternary channel in one bundle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricVector {
    /// Z(W_{x,x'}) for the six unordered pairs, in `INPUT_PAIRS` order.
    pub z_pair: [f64; 6],
    /// (Z_1, Z_2, Z_3), indexed by the difference label d = Z, X, Y.
    pub z_d: [f64; 3],
    /// Z(W), the average of the pairwise parameters.
    pub z_global: f64,
    /// Symmetric mutual information I(W) in bits.
    pub i_sym: f64,
    /// (Z(W^[1]), Z(W^[2]), Z(W^[3])) of the binary partial channels.
    pub z_partial: [f64; 3],
}

fn xlog2(p: f64, q: f64) -> f64 {
    // p * log2(p/q) with the 0 log 0 convention; q = 0 forces p = 0 here
    if p == 0.0 {
        0.0
    } else {
        p * (p / q).log2()
    }
}

impl QuaternaryChannel {
    /// Z(W_{x,x'}) = sum_y sqrt(W(y|x) W(y|x')).
    pub fn pairwise_bhattacharyya(&self, x: PauliLabel, xp: PauliLabel) -> f64 {
        let (i, j) = (x.index(), xp.index());
        self.columns().iter().map(|c| (c[i] * c[j]).sqrt()).sum()
    }

    /// Z_d(W), the average of Z(W_{x, x xor d}) over the four inputs.
    pub fn z_d(&self, d: PauliLabel) -> Result<f64> {
        if d == PauliLabel::I {
            return Err(Error::ZeroDifference);
        }
        let sum: f64 = LABELS
            .iter()
            .map(|&x| self.pairwise_bhattacharyya(x, x ^ d))
            .sum();
        Ok(sum / 4.0)
    }

    /// Z(W) = (1/12) sum over distinct pairs = (1/3) sum_d Z_d(W).
    pub fn z_global(&self) -> f64 {
        let sum: f64 = INPUT_PAIRS
            .iter()
            .map(|&(x, xp)| self.pairwise_bhattacharyya(x, xp))
            .sum();
        sum / 6.0
    }

    /// Symmetric mutual information I(W) in bits, in [0, 2].
    pub fn mutual_information(&self) -> f64 {
        self.columns()
            .iter()
            .map(|c| {
                let p_y = c.iter().sum::<f64>() / 4.0;
                if p_y == 0.0 {
                    return 0.0;
                }
                c.iter().map(|&w| xlog2(w, p_y)).sum::<f64>() / 4.0
            })
            .sum()
    }

    /// I(W_{x,x'}): symmetric mutual information of the binary-input
    /// restriction to inputs {x, x'}.
    pub fn pairwise_mutual_information(&self, x: PauliLabel, xp: PauliLabel) -> f64 {
        let (i, j) = (x.index(), xp.index());
        self.columns()
            .iter()
            .map(|c| {
                let mid = 0.5 * (c[i] + c[j]);
                if mid == 0.0 {
                    return 0.0;
                }
                0.5 * (xlog2(c[i], mid) + xlog2(c[j], mid))
            })
            .sum()
    }

    /// I_d(W) = (1/4) sum_x I(W_{x, x xor d}).
    pub fn i_d(&self, d: PauliLabel) -> Result<f64> {
        if d == PauliLabel::I {
            return Err(Error::ZeroDifference);
        }
        let sum: f64 = LABELS
            .iter()
            .map(|&x| self.pairwise_mutual_information(x, x ^ d))
            .sum();
        Ok(sum / 4.0)
    }

    /// The binary partial channel W^[d]: inputs {0, d} average to bit 0 and
    /// {d2, d3} to bit 1, where {d, d2, d3} are the nonzero labels.
    pub fn partial_channel(&self, d: PauliLabel) -> Result<BinaryChannel> {
        if d == PauliLabel::I {
            return Err(Error::ZeroDifference);
        }
        let rest: Vec<usize> = NONZERO_LABELS
            .iter()
            .filter(|&&l| l != d)
            .map(|&l| l.index())
            .collect();
        let di = d.index();
        let cols = self
            .columns()
            .iter()
            .map(|c| {
                [
                    0.5 * (c[0] + c[di]),
                    0.5 * (c[rest[0]] + c[rest[1]]),
                ]
            })
            .collect();
        BinaryChannel::from_columns(self.outputs().to_vec(), cols)
    }

    /// Convenience: Z(W^[d]).
    pub fn z_partial(&self, d: PauliLabel) -> Result<f64> {
        Ok(self.partial_channel(d)?.bhattacharyya())
    }

    /// Computes the full metric bundle.
    pub fn metric_vector(&self) -> MetricVector {
        let mut z_pair = [0.0; 6];
        for (k, &(x, xp)) in INPUT_PAIRS.iter().enumerate() {
            z_pair[k] = self.pairwise_bhattacharyya(x, xp);
        }
        let mut z_d = [0.0; 3];
        let mut z_partial = [0.0; 3];
        for (k, &d) in NONZERO_LABELS.iter().enumerate() {
            z_d[k] = self.z_d(d).expect("d is nonzero");
            z_partial[k] = self.z_partial(d).expect("d is nonzero");
        }
        MetricVector {
            z_pair,
            z_d,
            z_global: self.z_global(),
            i_sym: self.mutual_information(),
            z_partial,
        }
    }
}

impl BinaryChannel {
    /// Z of a binary-input channel: sum_y sqrt(W(y|0) W(y|1)).
    pub fn bhattacharyya(&self) -> f64 {
        self.columns().iter().map(|c| (c[0] * c[1]).sqrt()).sum()
    }

    /// Symmetric mutual information of a binary-input channel, in [0, 1].
    pub fn mutual_information(&self) -> f64 {
        self.columns()
            .iter()
            .map(|c| {
                let mid = 0.5 * (c[0] + c[1]);
                if mid == 0.0 {
                    return 0.0;
                }
                0.5 * (xlog2(c[0], mid) + xlog2(c[1], mid))
            })
            .sum()
    }
}

impl MetricVector {
    /// Maximum absolute difference across all entries; used by equivalence
    /// checks on synthesized channels.
    pub fn max_abs_diff(&self, other: &MetricVector) -> f64 {
        let mut worst: f64 = (self.z_global - other.z_global).abs();
        worst = worst.max((self.i_sym - other.i_sym).abs());
        for k in 0..6 {
            worst = worst.max((self.z_pair[k] - other.z_pair[k]).abs());
        }
        for k in 0..3 {
            worst = worst.max((self.z_d[k] - other.z_d[k]).abs());
            worst = worst.max((self.z_partial[k] - other.z_partial[k]).abs());
        }
        worst
    }
}
