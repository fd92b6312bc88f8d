//! Classification of a channel into noiseless, half-noisy, noisy, or
//! unpolarized, from its three difference-Bhattacharyya parameters.

use crate::channel::QuaternaryChannel;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// The five classes a virtual channel can land in for a given delta.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, Serialize, Deserialize)]
pub enum ChannelClass {
    /// All three Z_d below delta: carries both input bits.
    Noiseless,
    /// Z_2, Z_3 < delta and Z_1 > 1 - delta: carries the X-exponent only.
    HalfNoisyType1,
    /// Z_1, Z_3 < delta and Z_2 > 1 - delta: carries the Z-exponent only.
    HalfNoisyType2,
    /// Z_1 and Z_2 above 1 - delta: carries nothing.
    Noisy,
    /// None of the above at this delta.
    Unpolarized,
}

impl ChannelClass {
    pub fn name(self) -> &'static str {
        match self {
            ChannelClass::Noiseless => "noiseless",
            ChannelClass::HalfNoisyType1 => "half-noisy-1",
            ChannelClass::HalfNoisyType2 => "half-noisy-2",
            ChannelClass::Noisy => "noisy",
            ChannelClass::Unpolarized => "unpolarized",
        }
    }
}

/// Classifies from the (Z_1, Z_2, Z_3) triple.
///
/// The noisy test deliberately checks only Z_1 and Z_2: when both exceed
/// 1 - delta the third parameter is forced close to 1 as well.
pub fn classify_z(z: [f64; 3], delta: f64) -> Result<ChannelClass> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::DeltaOutOfRange(delta));
    }
    let [z1, z2, z3] = z;
    let class = if z1 < delta && z2 < delta && z3 < delta {
        ChannelClass::Noiseless
    } else if z2 < delta && z3 < delta && z1 > 1.0 - delta {
        ChannelClass::HalfNoisyType1
    } else if z1 < delta && z3 < delta && z2 > 1.0 - delta {
        ChannelClass::HalfNoisyType2
    } else if z1 > 1.0 - delta && z2 > 1.0 - delta {
        ChannelClass::Noisy
    } else {
        ChannelClass::Unpolarized
    };
    Ok(class)
}

impl QuaternaryChannel {
    /// Classifies this channel at threshold `delta` in (0, 1/2).
    pub fn classify(&self, delta: f64) -> Result<ChannelClass> {
        let m = self.metric_vector();
        classify_z(m.z_d, delta)
    }
}
