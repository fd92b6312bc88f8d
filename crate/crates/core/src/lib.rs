//! Multilevel polarization of quaternary Pauli-label channels.
//!
//! Recursively combining two channel copies with a fixed two-qubit-Clifford
//! pair permutation and splitting the result drives every virtual channel
//! toward one of four limits: noiseless, noisy, or reliably carrying exactly
//! one of its two input bits. This crate synthesizes those virtual channels
//! exactly (on transition matrices or on mixed-Pauli component lists),
//! evolves bit-level erasure channels in closed form, classifies the
//! resulting index sets, and decodes with successive cancellation plus the
//! side information the half-noisy and noisy positions provide.

pub mod audit;
pub mod channel;
pub mod classify;
pub mod cmp;
pub mod codec;
pub mod erasure;
pub mod error;
pub mod gamma;
pub mod label;
pub mod metrics;
pub mod polar;
pub mod report;
pub mod schedule;
pub mod spec;
pub mod verify;

pub use audit::{certified_set_size_check, CertifiedCounts, CertifiedSetSizeCheck};
pub use channel::{BinaryChannel, QuaternaryChannel};
pub use classify::ChannelClass;
pub use cmp::ComponentChannel;
pub use codec::{
    genie_decision_rows, sample_error, sc_decode, sc_decode_with_rows, simulate, transform, Direction, FrameErrorReport, ObservationVector,
    SideEntry, SideInfo,
};
pub use erasure::{asymptotic_fractions, sweep, sweep_channel, BitLevelErasureChannel, ZPair};
pub use error::{Error, Result};
pub use gamma::{PairPermutation, PermName};
pub use label::PauliLabel;
pub use metrics::MetricVector;
pub use polar::{
    adaptive_choice, combine_split, construct, construct_components, construct_matrix, synthesize,
    Limits,
};
pub use report::{ClassCounts, ConstructionReport, GammaTree, VirtualChannelRecord};
pub use schedule::SchedulePolicy;
pub use spec::ChannelSpec;
