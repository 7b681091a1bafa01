//! Two ways of applying an imperfect logical Pauli to an encoded qubit.
//!
//! *Pre-encoding* applies the noisy gate to the bare qubit, so its error is
//! encoded along with the state and survives decoding untouched.
//! *Transversal* applies the gate's letters qubit by qubit on the block,
//! so each gate error is independent and can be corrected.
//!
//! "A gate of fidelity `q`" is the ideal Pauli followed by a Pauli channel
//! with identity weight `q` whose residual shape is a [`GateNoise`].
//! Physical noise of fidelity `p` is depolarizing, or a pure bit flip when
//! the table only corrects bit flips.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::codes::StabilizerCode;
use crate::dense::{channel_fidelity, DenseChannel, Decoder};
use crate::effective::{ChannelPolys, OutcomeTable};
use crate::error::{Error, Result};
use crate::pauli::Pauli;
use crate::recovery::{build_table, CorrectionTable, Policy};
use crate::PauliParams;

/// Residual weights over `X, Y, Z` of the gate noise.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GateNoise {
    residual: [f64; 3],
}

impl Default for GateNoise {
    fn default() -> Self {
        Self::depolarizing()
    }
}

impl GateNoise {
    pub fn depolarizing() -> Self {
        Self { residual: [1.0 / 3.0; 3] }
    }

    /// Residual weights, normalized to sum to one.
    pub fn shaped(x: f64, y: f64, z: f64) -> Result<Self> {
        let s = x + y + z;
        if [x, y, z].iter().any(|w| !w.is_finite() || *w < 0.0) || s <= 0.0 {
            return Err(Error::InvalidParams(format!("gate noise shape ({x}, {y}, {z})")));
        }
        Ok(Self { residual: [x / s, y / s, z / s] })
    }

    /// Pauli channel of identity weight `q`.
    pub fn channel(&self, q: f64) -> PauliParams {
        let r = 1.0 - q;
        PauliParams::new(q, r * self.residual[0], r * self.residual[1], r * self.residual[2])
    }
}

/// `depol` or `shape:x,y,z`.
impl FromStr for GateNoise {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "depol" {
            return Ok(Self::depolarizing());
        }
        let body = s.strip_prefix("shape:").ok_or_else(|| Error::Parse(format!("gate noise {s:?}")))?;
        let w = body
            .split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        match w.as_slice() {
            [x, y, z] => Self::shaped(*x, *y, *z),
            _ => Err(Error::Parse(format!("gate noise {s:?} needs three weights"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    PreEncoding,
    Transversal,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::PreEncoding => "pre_encoding",
            Method::Transversal => "transversal",
        })
    }
}

/// Where the transversal gate sits relative to the physical noise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Placement {
    AfterEncoding,
    BeforeDecoding,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LogicalGateResult {
    pub method: Method,
    pub target: Pauli,
    pub p: f64,
    pub q: f64,
    pub fidelity: f64,
    /// `q · F(p)`.
    pub reference: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MethodComparison {
    pub p: f64,
    pub q: f64,
    pub baseline: f64,
    pub pre_encoding: f64,
    pub transversal: f64,
    pub reference: f64,
    pub winner: Method,
}

impl MethodComparison {
    /// Sign of `F(p,q)₂ − q·F(p)` with ties within `tol` reported as 0.
    pub fn transversal_sign(&self, tol: f64) -> i8 {
        let d = self.transversal - self.reference;
        if d > tol {
            1
        } else if d < -tol {
            -1
        } else {
            0
        }
    }
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::InvalidParams(format!("{name} = {v} outside [0, 1]")));
    }
    Ok(())
}

/// One code and table, with both the exact Pauli path and the dense path.
pub struct LogicalGates {
    code: &'static StabilizerCode,
    table: CorrectionTable,
    outcomes: OutcomeTable,
    polys: ChannelPolys,
    noise: GateNoise,
}

impl LogicalGates {
    pub fn new(code: &'static StabilizerCode, policy: &Policy, noise: GateNoise) -> Result<Self> {
        let table = build_table(code, policy)?;
        let outcomes = OutcomeTable::new(code, &table)?;
        let polys = outcomes.to_polys(table.policy_name());
        Ok(Self { code, table, outcomes, polys, noise })
    }

    pub fn code(&self) -> &'static StabilizerCode {
        self.code
    }

    pub fn polys(&self) -> &ChannelPolys {
        &self.polys
    }

    /// Noisy gate as a Pauli channel: the ideal `target` after the noise.
    fn gate(&self, target: Pauli, q: f64) -> PauliParams {
        self.noise.channel(q).shifted(target)
    }

    /// Physical channel of identity weight `p`.
    pub fn physical(&self, p: f64) -> PauliParams {
        match self.table.policy() {
            Policy::BitflipOnly => PauliParams::new(p, 1.0 - p, 0.0, 0.0),
            _ => PauliParams::depolarizing(p),
        }
    }

    fn logical_channel(&self, p: f64) -> PauliParams {
        crate::effective::eval_polys(&self.polys, &self.physical(p))
    }

    /// `F(p)`: identity weight after one level under [`LogicalGates::physical`] noise.
    pub fn baseline_f(&self, p: f64) -> Result<f64> {
        check_unit("p", p)?;
        Ok(self.logical_channel(p).probs[0])
    }

    fn result(&self, method: Method, target: Pauli, p: f64, q: f64, fidelity: f64) -> Result<LogicalGateResult> {
        let reference = q * self.baseline_f(p)?;
        Ok(LogicalGateResult { method, target, p, q, fidelity, reference })
    }

    pub fn pre_encoding(&self, target: Pauli, p: f64, q: f64) -> Result<LogicalGateResult> {
        check_unit("p", p)?;
        check_unit("q", q)?;
        let composite = self.logical_channel(p).compose(&self.gate(target, q));
        self.result(Method::PreEncoding, target, p, q, *composite.get(target))
    }

    fn transversal_channels(&self, target: Pauli, p: f64, q: f64) -> Vec<(PauliParams, PauliParams)> {
        let op = self.code.logical(target);
        (0..self.code.n)
            .map(|k| {
                let gate = match op.letter(k) {
                    Pauli::I => PauliParams::pure(Pauli::I),
                    l => self.gate(l, q),
                };
                (gate, self.physical(p))
            })
            .collect()
    }

    pub fn transversal(&self, target: Pauli, p: f64, q: f64) -> Result<LogicalGateResult> {
        self.transversal_at(target, p, q, Placement::AfterEncoding)
    }

    pub fn transversal_at(&self, target: Pauli, p: f64, q: f64, placement: Placement) -> Result<LogicalGateResult> {
        check_unit("p", p)?;
        check_unit("q", q)?;
        let per_qubit: Vec<PauliParams> = self
            .transversal_channels(target, p, q)
            .into_iter()
            .map(|(gate, phys)| match placement {
                Placement::AfterEncoding => gate.compose(&phys),
                Placement::BeforeDecoding => phys.compose(&gate),
            })
            .collect();
        let out = self.outcomes.eval_per_qubit(&per_qubit)?;
        self.result(Method::Transversal, target, p, q, *out.get(target))
    }

    /// Pre-encoding method through the dense engine.
    pub fn pre_encoding_dense(&self, target: Pauli, p: f64, q: f64) -> Result<LogicalGateResult> {
        check_unit("p", p)?;
        check_unit("q", q)?;
        let decoder = Decoder::new(self.code, &self.table)?;
        let logical = decoder.effective(&vec![DenseChannel::pauli(&self.physical(p))?; self.code.n])?;
        let composite = DenseChannel::pauli(&self.gate(target, q))?.then(&logical);
        self.result(Method::PreEncoding, target, p, q, channel_fidelity(&composite, target)?)
    }

    /// Transversal method through the dense engine.
    pub fn transversal_dense(&self, target: Pauli, p: f64, q: f64, placement: Placement) -> Result<LogicalGateResult> {
        check_unit("p", p)?;
        check_unit("q", q)?;
        let decoder = Decoder::new(self.code, &self.table)?;
        let per_qubit = self
            .transversal_channels(target, p, q)
            .into_iter()
            .map(|(gate, phys)| {
                let (gate, phys) = (DenseChannel::pauli(&gate)?, DenseChannel::pauli(&phys)?);
                Ok(match placement {
                    Placement::AfterEncoding => gate.then(&phys),
                    Placement::BeforeDecoding => phys.then(&gate),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let logical = decoder.effective(&per_qubit)?;
        self.result(Method::Transversal, target, p, q, channel_fidelity(&logical, target)?)
    }

    /// Both methods at every grid point, in the order given. The winner is the
    /// pre-encoding method on exact ties.
    pub fn compare_methods(&self, target: Pauli, grid: &[(f64, f64)]) -> Result<Vec<MethodComparison>> {
        if grid.is_empty() {
            return Err(Error::InvalidParams("empty (p, q) grid".into()));
        }
        grid.iter()
            .map(|&(p, q)| {
                let pre = self.pre_encoding(target, p, q)?;
                let tr = self.transversal(target, p, q)?;
                let winner = if tr.fidelity > pre.fidelity { Method::Transversal } else { Method::PreEncoding };
                Ok(MethodComparison {
                    p,
                    q,
                    baseline: self.baseline_f(p)?,
                    pre_encoding: pre.fidelity,
                    transversal: tr.fidelity,
                    reference: pre.reference,
                    winner,
                })
            })
            .collect()
    }
}

/// `steps` evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..steps).map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64).collect(),
    }
}

/// Cartesian product sorted by `(p, q)`.
pub fn square_grid(values: &[f64]) -> Vec<(f64, f64)> {
    values.iter().flat_map(|p| values.iter().map(move |q| (*p, *q))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{get_code, CodeName};

    fn gates(name: CodeName) -> LogicalGates {
        LogicalGates::new(get_code(name), &Policy::default_for(name), GateNoise::default()).unwrap()
    }

    #[test]
    fn baseline_values() {
        let g = gates(CodeName::ThreeQubit);
        assert!((g.baseline_f(1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((g.baseline_f(0.9).unwrap() - 0.972).abs() < 1e-12);
        let g = gates(CodeName::FiveI);
        let p: f64 = 0.99;
        assert!(g.baseline_f(p).unwrap() >= p.powi(5) + 5.0 * p.powi(4) * (1.0 - p) - 1e-15);
    }

    #[test]
    fn ideal_gate_reduces_to_baseline() {
        for name in CodeName::ALL {
            let g = gates(name);
            for t in [Pauli::X, Pauli::Y, Pauli::Z] {
                let f = g.baseline_f(0.93).unwrap();
                assert!((g.pre_encoding(t, 0.93, 1.0).unwrap().fidelity - f).abs() < 1e-12);
                assert!((g.transversal(t, 0.93, 1.0).unwrap().fidelity - f).abs() < 1e-12, "{name} {t}");
            }
        }
    }

    #[test]
    fn perfect_memory_passes_gate_error_through() {
        let g = gates(CodeName::Steane);
        assert!((g.pre_encoding(Pauli::X, 1.0, 0.9).unwrap().fidelity - 0.9).abs() < 1e-12);
    }

    #[test]
    fn pre_encoding_bound() {
        for name in CodeName::ALL {
            let g = gates(name);
            for p in [0.90, 0.95, 0.99] {
                for q in [0.90, 0.95, 0.99] {
                    let r = g.pre_encoding(Pauli::X, p, q).unwrap();
                    assert!(r.fidelity >= r.reference - 1e-12, "{name} {p} {q}");
                }
            }
        }
    }

    #[test]
    fn placement_does_not_matter() {
        for name in [CodeName::Steane, CodeName::FiveI] {
            let g = gates(name);
            for (p, q) in [(0.9, 0.95), (0.97, 0.91)] {
                let a = g.transversal_at(Pauli::Y, p, q, Placement::AfterEncoding).unwrap().fidelity;
                let b = g.transversal_at(Pauli::Y, p, q, Placement::BeforeDecoding).unwrap().fidelity;
                assert!((a - b).abs() < 1e-12);
                let c = g.transversal_dense(Pauli::Y, p, q, Placement::AfterEncoding).unwrap().fidelity;
                let d = g.transversal_dense(Pauli::Y, p, q, Placement::BeforeDecoding).unwrap().fidelity;
                assert!((c - d).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn dense_path_agrees() {
        for name in [CodeName::ThreeQubit, CodeName::FiveI, CodeName::FiveIi, CodeName::Steane] {
            let g = gates(name);
            for t in [Pauli::X, Pauli::Y, Pauli::Z] {
                let a = g.pre_encoding(t, 0.92, 0.96).unwrap().fidelity;
                let b = g.pre_encoding_dense(t, 0.92, 0.96).unwrap().fidelity;
                assert!((a - b).abs() < 1e-10, "{name} {t}");
                let a = g.transversal(t, 0.92, 0.96).unwrap().fidelity;
                let b = g.transversal_dense(t, 0.92, 0.96, Placement::AfterEncoding).unwrap().fidelity;
                assert!((a - b).abs() < 1e-10, "{name} {t}");
            }
        }
    }

    #[test]
    fn trivial_grid() {
        let rows = gates(CodeName::FiveI).compare_methods(Pauli::X, &[(1.0, 1.0)]).unwrap();
        assert!((rows[0].pre_encoding - 1.0).abs() < 1e-15 && (rows[0].transversal - 1.0).abs() < 1e-15);
        assert!(gates(CodeName::FiveI).compare_methods(Pauli::X, &[]).is_err());
    }

    #[test]
    fn noise_shapes() {
        assert_eq!("depol".parse::<GateNoise>().unwrap(), GateNoise::depolarizing());
        let n: GateNoise = "shape:1,0,1".parse().unwrap();
        assert!(n.channel(0.8).max_abs_diff(&PauliParams::new(0.8, 0.1, 0.0, 0.1)) < 1e-15);
        assert!("shape:0,0,0".parse::<GateNoise>().is_err());
        assert!("shape:1,2".parse::<GateNoise>().is_err());
    }

    #[test]
    fn grid_helpers() {
        let v = linspace(0.9, 1.0, 6);
        assert_eq!(v.len(), 6);
        assert!((v[5] - 1.0).abs() < 1e-15);
        assert_eq!(square_grid(&v).len(), 36);
    }
}
