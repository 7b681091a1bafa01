//! Value parsers for compact command-line specs.

use std::fmt;
use std::str::FromStr;

use purify_core::dense::DenseChannel;
use purify_core::pauli::Pauli;
use purify_core::{get_code_by_name, PauliParams, Policy, Result, StabilizerCode};

/// `pauli:p1,p2,p3,p4`, `depol:f`, `amp-damp:gamma` or `random:seed`.
#[derive(Clone, Debug, PartialEq)]
pub enum ChannelSpec {
    Pauli(PauliParams),
    Depolarizing(f64),
    AmplitudeDamping(f64),
    Random(u64),
}

impl ChannelSpec {
    /// The equivalent Pauli channel, when there is one.
    pub fn as_pauli(&self) -> Option<PauliParams> {
        match self {
            ChannelSpec::Pauli(p) => Some(p.clone()),
            ChannelSpec::Depolarizing(f) => Some(PauliParams::depolarizing(*f)),
            _ => None,
        }
    }

    pub fn to_dense(&self) -> Result<DenseChannel> {
        match self {
            ChannelSpec::Pauli(p) => DenseChannel::pauli(p),
            ChannelSpec::Depolarizing(f) => DenseChannel::depolarizing(*f),
            ChannelSpec::AmplitudeDamping(g) => DenseChannel::amplitude_damping(*g),
            ChannelSpec::Random(seed) => Ok(DenseChannel::random(*seed)),
        }
    }
}

fn unit(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|e| format!("{s:?}: {e}"))?;
    if !(0.0..=1.0).contains(&v) {
        return Err(format!("{v} outside [0, 1]"));
    }
    Ok(v)
}

impl FromStr for ChannelSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (kind, body) = s.split_once(':').ok_or_else(|| format!("channel {s:?} lacks a kind prefix"))?;
        match kind {
            "pauli" => PauliParams::parse(body).map(ChannelSpec::Pauli).map_err(|e| e.to_string()),
            "depol" => unit(body).map(ChannelSpec::Depolarizing),
            "amp-damp" => unit(body).map(ChannelSpec::AmplitudeDamping),
            "random" => body.trim().parse().map(ChannelSpec::Random).map_err(|e| format!("seed {body:?}: {e}")),
            _ => Err(format!("unknown channel kind {kind:?} (pauli, depol, amp-damp, random)")),
        }
    }
}

impl fmt::Display for ChannelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChannelSpec::Pauli(p) => {
                let [a, b, c, d] = p.probs;
                write!(f, "pauli:{a},{b},{c},{d}")
            }
            ChannelSpec::Depolarizing(x) => write!(f, "depol:{x}"),
            ChannelSpec::AmplitudeDamping(g) => write!(f, "amp-damp:{g}"),
            ChannelSpec::Random(s) => write!(f, "random:{s}"),
        }
    }
}

pub fn code(s: &str) -> std::result::Result<&'static StabilizerCode, String> {
    get_code_by_name(s).map_err(|e| e.to_string())
}

pub fn policy(s: &str) -> std::result::Result<Policy, String> {
    s.parse::<Policy>().map_err(|e| e.to_string())
}

pub fn params(s: &str) -> std::result::Result<PauliParams, String> {
    PauliParams::parse(s).map_err(|e| e.to_string())
}

pub fn probability(s: &str) -> std::result::Result<f64, String> {
    unit(s)
}

pub fn pauli(s: &str) -> std::result::Result<Pauli, String> {
    match s {
        "I" => Ok(Pauli::I),
        "X" => Ok(Pauli::X),
        "Y" => Ok(Pauli::Y),
        "Z" => Ok(Pauli::Z),
        _ => Err(format!("expected one of I, X, Y, Z, got {s:?}")),
    }
}

pub fn labels(s: &str) -> std::result::Result<Vec<Pauli>, String> {
    s.split(',').map(|t| pauli(t.trim())).collect()
}

/// `lo:hi:steps`, the same values on both axes.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareGrid {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl FromStr for SquareGrid {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, steps] = parts.as_slice() else {
            return Err(format!("grid {s:?} is not lo:hi:steps"));
        };
        let (lo, hi) = (unit(lo)?, unit(hi)?);
        let steps: usize = steps.parse().map_err(|e| format!("steps {steps:?}: {e}"))?;
        if steps == 0 || lo > hi {
            return Err(format!("grid {s:?} is empty"));
        }
        Ok(Self { lo, hi, steps })
    }
}
