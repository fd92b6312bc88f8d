//! Schedule policies: which combining permutation each polarization step uses.

use crate::gamma::PermName;
use serde::{Deserialize, Serialize};

/// How the combining permutation is chosen along the recursion.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum SchedulePolicy {
    /// The fixed map at every step.
    FixedL,
    /// Gamma1 on odd steps, Gamma2 on even steps (steps count from 1).
    Alternating,
    /// Per-node minimization of T = Z(good^[1]) + Z(good^[2]) over
    /// {Gamma1, Gamma2}; ties go to Gamma1.
    Adaptive,
}

impl SchedulePolicy {
    /// The policy's choice at a given step when it does not depend on the
    /// channel (None for the adaptive policy).
    pub fn fixed_choice(self, step: usize) -> Option<PermName> {
        match self {
            SchedulePolicy::FixedL => Some(PermName::GammaL),
            SchedulePolicy::Alternating => Some(if step % 2 == 1 {
                PermName::Gamma1
            } else {
                PermName::Gamma2
            }),
            SchedulePolicy::Adaptive => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SchedulePolicy::FixedL => "fixed",
            SchedulePolicy::Alternating => "alternating",
            SchedulePolicy::Adaptive => "adaptive",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "fixed" => Some(SchedulePolicy::FixedL),
            "alternating" => Some(SchedulePolicy::Alternating),
            "adaptive" => Some(SchedulePolicy::Adaptive),
            _ => None,
        }
    }
}

/// Tie tolerance for the adaptive T comparison.
pub const ADAPTIVE_TIE_TOL: f64 = 1e-12;
