//! The four Pauli labels and their Klein four-group structure.

use std::fmt;

/// A Pauli label with the fixed two-bit encoding `x1x2`, where `x1` is the
/// X-exponent and `x2` is the Z-exponent: I=00, Z=01, X=10, Y=11.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
#[repr(u8)]
pub enum PauliLabel {
    I = 0b00,
    Z = 0b01,
    X = 0b10,
    Y = 0b11,
}

pub const LABELS: [PauliLabel; 4] = [PauliLabel::I, PauliLabel::Z, PauliLabel::X, PauliLabel::Y];

/// The three non-identity labels, in encoding order (Z, X, Y).
pub const NONZERO_LABELS: [PauliLabel; 3] = [PauliLabel::Z, PauliLabel::X, PauliLabel::Y];

impl PauliLabel {
    /// Label from its two-bit encoding. Panics if `v > 3`.
    #[inline]
    pub fn from_index(v: u8) -> Self {
        match v & 0b11 {
            0 => PauliLabel::I,
            1 => PauliLabel::Z,
            2 => PauliLabel::X,
            _ => PauliLabel::Y,
        }
    }

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    /// X-exponent (`x1`, the high bit).
    #[inline]
    pub fn x_bit(self) -> u8 {
        (self as u8) >> 1
    }

    /// Z-exponent (`x2`, the low bit).
    #[inline]
    pub fn z_bit(self) -> u8 {
        (self as u8) & 1
    }

    #[inline]
    pub fn from_bits(x1: u8, x2: u8) -> Self {
        Self::from_index(((x1 & 1) << 1) | (x2 & 1))
    }

    pub fn name(self) -> &'static str {
        match self {
            PauliLabel::I => "I",
            PauliLabel::Z => "Z",
            PauliLabel::X => "X",
            PauliLabel::Y => "Y",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "I" => Some(PauliLabel::I),
            "Z" => Some(PauliLabel::Z),
            "X" => Some(PauliLabel::X),
            "Y" => Some(PauliLabel::Y),
            _ => None,
        }
    }
}

impl std::ops::BitXor for PauliLabel {
    type Output = PauliLabel;

    /// Group operation of the Klein four-group (bitwise XOR of encodings).
    #[inline]
    fn bitxor(self, rhs: PauliLabel) -> PauliLabel {
        PauliLabel::from_index(self as u8 ^ rhs as u8)
    }
}

impl fmt::Display for PauliLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
