//! Pair permutations: the automorphisms of Pauli-label pairs used as the
//! channel-combining operation.

use crate::error::{Error, Result};
use crate::label::PauliLabel;

/// Identifies one of the built-in combining permutations, or a custom one.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum PermName {
    GammaL,
    Gamma1,
    Gamma2,
    Custom,
}

impl PermName {
    /// Single-character tag used in CSV output ("L", "1", "2", "c").
    pub fn tag(self) -> char {
        match self {
            PermName::GammaL => 'L',
            PermName::Gamma1 => '1',
            PermName::Gamma2 => '2',
            PermName::Custom => 'c',
        }
    }
}

/// A linear bijection on the 16 pairs of Pauli labels.
///
/// Stored as a lookup table indexed by the 4-bit encoding `u1 u2 v1 v2`,
/// together with its inverse.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PairPermutation {
    pub name: PermName,
    map: [u8; 16],
    inv: [u8; 16],
}

#[inline]
fn pack(u: PauliLabel, v: PauliLabel) -> usize {
    (u.index() << 2) | v.index()
}

#[inline]
fn unpack(i: u8) -> (PauliLabel, PauliLabel) {
    (
        PauliLabel::from_index((i >> 2) & 0b11),
        PauliLabel::from_index(i & 0b11),
    )
}

impl PairPermutation {
    /// Builds a permutation from a map on label pairs, checking that it is a
    /// bijection, linear over XOR, and fixes (I, I).
    pub fn new<F>(name: PermName, f: F) -> Result<Self>
    where
        F: Fn(PauliLabel, PauliLabel) -> (PauliLabel, PauliLabel),
    {
        let mut map = [0u8; 16];
        let mut inv = [0xffu8; 16];
        for i in 0..16u8 {
            let (u, v) = unpack(i);
            let (a, b) = f(u, v);
            let j = pack(a, b) as u8;
            map[i as usize] = j;
            if inv[j as usize] != 0xff {
                return Err(Error::InvalidPermutation(format!(
                    "two pairs map to index {j}"
                )));
            }
            inv[j as usize] = i;
        }
        // linearity over the 4-bit XOR group, all 256 pairs
        for a in 0..16u8 {
            for b in 0..16u8 {
                if map[(a ^ b) as usize] != map[a as usize] ^ map[b as usize] {
                    return Err(Error::InvalidPermutation(format!(
                        "map({a} xor {b}) != map({a}) xor map({b})"
                    )));
                }
            }
        }
        Ok(Self { name, map, inv })
    }

    /// The fixed combining map: `(u1u2, v1v2) -> ((u2, u1+v1), (u2+v2, v1))`.
    pub fn gamma_l() -> Self {
        Self::new(PermName::GammaL, |u, v| {
            (
                PauliLabel::from_bits(u.z_bit(), u.x_bit() ^ v.x_bit()),
                PauliLabel::from_bits(u.z_bit() ^ v.z_bit(), v.x_bit()),
            )
        })
        .expect("built-in map is linear")
    }

    /// CNOT conjugation, control on the first wire:
    /// `(u1u2, v1v2) -> ((u1, u2+v2), (u1+v1, v2))`.
    pub fn gamma_1() -> Self {
        Self::new(PermName::Gamma1, |u, v| {
            (
                PauliLabel::from_bits(u.x_bit(), u.z_bit() ^ v.z_bit()),
                PauliLabel::from_bits(u.x_bit() ^ v.x_bit(), v.z_bit()),
            )
        })
        .expect("built-in map is linear")
    }

    /// CNOT conjugation with control and target interchanged:
    /// `(u1u2, v1v2) -> ((u1+v1, u2), (v1, u2+v2))`.
    pub fn gamma_2() -> Self {
        Self::new(PermName::Gamma2, |u, v| {
            (
                PauliLabel::from_bits(u.x_bit() ^ v.x_bit(), u.z_bit()),
                PauliLabel::from_bits(v.x_bit(), u.z_bit() ^ v.z_bit()),
            )
        })
        .expect("built-in map is linear")
    }

    pub fn by_name(name: PermName) -> Self {
        match name {
            PermName::GammaL => Self::gamma_l(),
            PermName::Gamma1 => Self::gamma_1(),
            PermName::Gamma2 => Self::gamma_2(),
            PermName::Custom => panic!("no canonical custom permutation"),
        }
    }

    #[inline]
    pub fn apply(&self, u: PauliLabel, v: PauliLabel) -> (PauliLabel, PauliLabel) {
        unpack(self.map[pack(u, v)])
    }

    #[inline]
    pub fn apply_inverse(&self, a: PauliLabel, b: PauliLabel) -> (PauliLabel, PauliLabel) {
        unpack(self.inv[pack(a, b)])
    }

    /// First component of the image, `gamma_1(u, v)`.
    #[inline]
    pub fn first(&self, u: PauliLabel, v: PauliLabel) -> PauliLabel {
        self.apply(u, v).0
    }

    /// Second component of the image, `gamma_2(u, v)`.
    #[inline]
    pub fn second(&self, u: PauliLabel, v: PauliLabel) -> PauliLabel {
        self.apply(u, v).1
    }

    /// Image tables indexed `[u][v]`, handy for tight inner loops.
    pub fn tables(&self) -> ([[u8; 4]; 4], [[u8; 4]; 4]) {
        let mut t1 = [[0u8; 4]; 4];
        let mut t2 = [[0u8; 4]; 4];
        for u in 0..4 {
            for v in 0..4 {
                let j = self.map[(u << 2) | v];
                t1[u][v] = (j >> 2) & 0b11;
                t2[u][v] = j & 0b11;
            }
        }
        (t1, t2)
    }
}
