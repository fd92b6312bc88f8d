//! Channel spec files: the JSON descriptions of Pauli, mixed-Pauli, and
//! erasure channels accepted by the CLI and the library entry points.

use crate::channel::QuaternaryChannel;
use crate::cmp::ComponentChannel;
use crate::erasure::BitLevelErasureChannel;
use crate::error::{Error, Result};
use crate::label::LABELS;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

const PROB_TOL: f64 = 1e-9;

/// A parsed channel description.
///
/// ```json
/// {"type":"pauli", "p":{"I":0.9,"X":0.03,"Y":0.03,"Z":0.04}}
/// {"type":"cmp", "components":[{"lambda":0.9,"p":{...}}, {"lambda":0.1,"p":{...}}]}
/// {"type":"erasure", "epsilon":0.1}
/// ```
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum ChannelSpec {
    Pauli {
        p: BTreeMap<String, f64>,
    },
    Cmp {
        components: Vec<CmpComponentSpec>,
    },
    Erasure {
        epsilon: f64,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CmpComponentSpec {
    pub lambda: f64,
    pub p: BTreeMap<String, f64>,
}

fn dist_from_map(map: &BTreeMap<String, f64>) -> Result<[f64; 4]> {
    let mut p = [0.0; 4];
    for (k, &v) in map {
        let lab = crate::label::PauliLabel::from_name(k)
            .ok_or_else(|| Error::Spec(format!("unknown Pauli label {k:?}")))?;
        if !(v >= 0.0) {
            return Err(Error::Spec(format!("negative probability for {k}")));
        }
        p[lab.index()] = v;
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > PROB_TOL {
        return Err(Error::Spec(format!(
            "probabilities sum to {sum}, outside tolerance of 1"
        )));
    }
    if sum != 1.0 {
        for e in p.iter_mut() {
            *e /= sum;
        }
    }
    Ok(p)
}

impl ChannelSpec {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Spec(e.to_string()))
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Spec(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn pauli(p: [f64; 4]) -> Self {
        let map = LABELS
            .iter()
            .map(|l| (l.name().to_string(), p[l.index()]))
            .collect();
        ChannelSpec::Pauli { p: map }
    }

    pub fn erasure(epsilon: f64) -> Self {
        ChannelSpec::Erasure { epsilon }
    }

    /// The flagged component form: weight and error distribution per flag.
    pub fn components(&self) -> Result<ComponentChannel> {
        match self {
            ChannelSpec::Pauli { p } => {
                ComponentChannel::new(vec![(1.0, dist_from_map(p)?)])
            }
            ChannelSpec::Cmp { components } => {
                if components.is_empty() {
                    return Err(Error::Spec("cmp channel needs at least one component".into()));
                }
                let mut lam_sum = 0.0;
                let mut comps = Vec::with_capacity(components.len());
                for c in components {
                    if !(c.lambda >= 0.0) {
                        return Err(Error::Spec("negative component weight".into()));
                    }
                    lam_sum += c.lambda;
                    comps.push((c.lambda, dist_from_map(&c.p)?));
                }
                if (lam_sum - 1.0).abs() > PROB_TOL {
                    return Err(Error::Spec(format!(
                        "component weights sum to {lam_sum}, outside tolerance of 1"
                    )));
                }
                for c in comps.iter_mut() {
                    c.0 /= lam_sum;
                }
                ComponentChannel::new(comps)
            }
            ChannelSpec::Erasure { epsilon } => {
                let e = *epsilon;
                if !(0.0..=1.0).contains(&e) {
                    return Err(Error::EpsilonOutOfRange(e));
                }
                ComponentChannel::new(vec![
                    (1.0 - e, [1.0, 0.0, 0.0, 0.0]),
                    (e, [0.25; 4]),
                ])
            }
        }
    }

    /// Lowers to an explicit transition matrix. Pauli specs produce the 4x4
    /// group channel; cmp and erasure specs produce the flagged alphabet.
    pub fn lower(&self) -> Result<QuaternaryChannel> {
        match self {
            ChannelSpec::Pauli { p } => QuaternaryChannel::from_pauli(dist_from_map(p)?),
            _ => self.components()?.lower(),
        }
    }

    /// The bit-level erasure triple when this spec routes to the closed-form
    /// lane (only plain erasure specs do).
    pub fn as_erasure(&self) -> Option<Result<BitLevelErasureChannel>> {
        match self {
            ChannelSpec::Erasure { epsilon } => Some(BitLevelErasureChannel::lower(*epsilon)),
            _ => None,
        }
    }
}
