//! Syndromes, logical classification of normalizer elements, and
//! syndrome → recovery tables.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::codes::{CodeName, StabilizerCode};
use crate::error::{Error, Result};
use crate::pauli::{enumerate_paulis, Pauli, PauliString};

/// Bit `i` set iff the error anticommutes with generator `g_{i+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syndrome {
    pub bits: u64,
    pub len: usize,
}

impl Syndrome {
    pub fn index(&self) -> usize {
        self.bits as usize
    }

    pub fn bit(&self, i: usize) -> bool {
        (self.bits >> i) & 1 == 1
    }
}

impl fmt::Display for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", if self.bit(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

pub fn syndrome(code: &StabilizerCode, e: &PauliString) -> Result<Syndrome> {
    if e.n() != code.n {
        return Err(Error::Dimension { expected: code.n, found: e.n() });
    }
    Ok(syndrome_unchecked(code, e))
}

#[inline]
pub(crate) fn syndrome_unchecked(code: &StabilizerCode, e: &PauliString) -> Syndrome {
    let bits = code
        .generators
        .iter()
        .enumerate()
        .fold(0u64, |acc, (i, g)| acc | ((!g.commutes_unchecked(e) as u64) << i));
    Syndrome { bits, len: code.generators.len() }
}

/// Logical Pauli implemented by a normalizer element `m`.
pub fn logical_action(code: &StabilizerCode, m: &PauliString) -> Result<Pauli> {
    let s = syndrome(code, m)?;
    if s.bits != 0 {
        return Err(Error::NotInNormalizer(m.to_string()));
    }
    Ok(logical_action_unchecked(code, m))
}

#[inline]
pub(crate) fn logical_action_unchecked(code: &StabilizerCode, m: &PauliString) -> Pauli {
    let flips_z = !m.commutes_unchecked(&code.logical_z);
    let flips_x = !m.commutes_unchecked(&code.logical_x);
    // anticommuting with Z̄ means an X component, with X̄ a Z component
    Pauli::from_bits(flips_z, flips_x)
}

/// How recoveries are chosen for each syndrome.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    /// First error of minimum weight in enumeration order.
    MinWeightLex,
    /// Minimum weight, ties broken by fewest `Y` letters, then enumeration
    /// order.
    MinWeightFewestY,
    /// Like `MinWeightLex`, restricted to errors built from `I` and `X`.
    BitflipOnly,
    /// A user-supplied recovery per syndrome.
    Explicit(Vec<PauliString>),
}

impl Policy {
    pub fn name(&self) -> &'static str {
        match self {
            Policy::MinWeightLex => "min_weight_lex",
            Policy::MinWeightFewestY => "min_weight_fewest_y",
            Policy::BitflipOnly => "bitflip_only",
            Policy::Explicit(_) => "explicit",
        }
    }

    /// The customary policy for each catalog code.
    pub fn default_for(code: CodeName) -> Policy {
        match code {
            CodeName::ThreeQubit => Policy::BitflipOnly,
            _ => Policy::MinWeightLex,
        }
    }
}

impl FromStr for Policy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min_weight_lex" => Ok(Policy::MinWeightLex),
            "min_weight_fewest_y" => Ok(Policy::MinWeightFewestY),
            "bitflip_only" => Ok(Policy::BitflipOnly),
            _ => Err(Error::UnknownPolicy(s.to_string())),
        }
    }
}

/// Total map from syndromes to recoveries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrectionTable {
    code: CodeName,
    policy: Policy,
    entries: Vec<PauliString>,
}

impl CorrectionTable {
    pub fn code(&self) -> CodeName {
        self.code
    }

    pub fn policy(&self) -> &Policy {
        &self.policy
    }

    pub fn policy_name(&self) -> &'static str {
        self.policy.name()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[PauliString] {
        &self.entries
    }

    pub fn recovery(&self, s: Syndrome) -> &PauliString {
        &self.entries[s.index()]
    }

    /// `(syndrome, recovery)` pairs in syndrome order.
    pub fn iter(&self, code: &StabilizerCode) -> impl Iterator<Item = (Syndrome, &PauliString)> + '_ {
        let len = code.generators.len();
        self.entries.iter().enumerate().map(move |(i, r)| (Syndrome { bits: i as u64, len }, r))
    }

    pub fn export(&self, code: &StabilizerCode) -> TableExport {
        TableExport {
            code: self.code.to_string(),
            policy: self.policy.name().to_string(),
            entries: self
                .iter(code)
                .map(|(s, r)| TableEntry { syndrome: s.to_string(), recovery: *r, weight: r.weight() })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableEntry {
    pub syndrome: String,
    pub recovery: PauliString,
    pub weight: usize,
}

/// Archival form of a table; `explicit_from_export` reads it back.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableExport {
    pub code: String,
    pub policy: String,
    pub entries: Vec<TableEntry>,
}

/// Recovers the explicit recovery list (syndrome order) from an export.
pub fn explicit_from_export(export: &TableExport) -> Policy {
    Policy::Explicit(export.entries.iter().map(|e| e.recovery).collect())
}

pub fn build_table(code: &StabilizerCode, policy: &Policy) -> Result<CorrectionTable> {
    let size = 1usize << code.generators.len();
    let entries = match policy {
        Policy::MinWeightLex => scan_min_weight(code, |_| true, |e| (e.weight(), 0))?,
        Policy::MinWeightFewestY => scan_min_weight(code, |_| true, |e| (e.weight(), e.letter_counts()[2] as usize))?,
        Policy::BitflipOnly => scan_min_weight(code, |p| p.z_bits() == 0, |e| (e.weight(), 0))?,
        Policy::Explicit(list) => {
            let mut slots: Vec<Option<PauliString>> = vec![None; size];
            for r in list {
                let s = syndrome(code, r)?;
                if slots[s.index()].replace(r.unsigned()).is_some() {
                    return Err(Error::Table(format!("duplicated syndrome {s}")));
                }
            }
            if let Some(i) = slots.iter().position(|e| e.is_none()) {
                let s = Syndrome { bits: i as u64, len: code.generators.len() };
                return Err(Error::Table(format!("no recovery for syndrome {s}")));
            }
            slots.into_iter().map(|e| e.expect("checked total")).collect()
        }
    };
    let table = CorrectionTable { code: code.name, policy: policy.clone(), entries };
    if table.entries[0].weight() != 0 {
        return Err(Error::Table("trivial syndrome must map to the identity".into()));
    }
    Ok(table)
}

fn scan_min_weight(
    code: &StabilizerCode,
    allowed: impl Fn(&PauliString) -> bool,
    key: impl Fn(&PauliString) -> (usize, usize),
) -> Result<Vec<PauliString>> {
    let size = 1usize << code.generators.len();
    let mut best: Vec<Option<((usize, usize), PauliString)>> = vec![None; size];
    for e in enumerate_paulis(code.n)? {
        if !allowed(&e) {
            continue;
        }
        let s = syndrome_unchecked(code, &e);
        let w = key(&e);
        // enumeration order is lexicographic, so the first hit of a key wins
        match &best[s.index()] {
            Some((bw, _)) if *bw <= w => {}
            _ => best[s.index()] = Some((w, e)),
        }
    }
    best.into_iter()
        .enumerate()
        .map(|(i, b)| {
            b.map(|(_, e)| e).ok_or_else(|| {
                let s = Syndrome { bits: i as u64, len: code.generators.len() };
                Error::Table(format!("policy reaches no error with syndrome {s}"))
            })
        })
        .collect()
}

/// Per syndrome: minimum error weight and whether minimum-weight errors fall
/// in more than one logical class (so a min-weight decoder must choose).
#[derive(Clone, Debug)]
pub struct Degeneracy {
    pub min_weight: Vec<usize>,
    pub ambiguous: Vec<bool>,
}

impl Degeneracy {
    pub fn ambiguous_count(&self) -> usize {
        self.ambiguous.iter().filter(|a| **a).count()
    }
}

pub fn degeneracy(code: &StabilizerCode) -> Result<Degeneracy> {
    let size = 1usize << code.generators.len();
    let mut min_weight = vec![usize::MAX; size];
    let mut representative: Vec<Option<PauliString>> = vec![None; size];
    let mut ambiguous = vec![false; size];
    for e in enumerate_paulis(code.n)? {
        let s = syndrome_unchecked(code, &e).index();
        let w = e.weight();
        if w < min_weight[s] {
            min_weight[s] = w;
            representative[s] = Some(e);
            ambiguous[s] = false;
        } else if w == min_weight[s] && !ambiguous[s] {
            let r = representative[s].expect("set with min weight");
            let m = r.multiply(&e)?;
            if logical_action_unchecked(code, &m) != Pauli::I {
                ambiguous[s] = true;
            }
        }
    }
    Ok(Degeneracy { min_weight, ambiguous })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::get_code;

    fn ps(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn three_qubit_syndromes() {
        let c = get_code(CodeName::ThreeQubit);
        assert_eq!(syndrome(c, &ps("XII")).unwrap().to_string(), "10");
        assert_eq!(syndrome(c, &ps("III")).unwrap().to_string(), "00");
        assert!(syndrome(c, &ps("XI")).is_err());
    }

    #[test]
    fn steane_z7_flags_x_generators() {
        let c = get_code(CodeName::Steane);
        let s = syndrome(c, &ps("IIIIIIZ")).unwrap();
        // g2, g4, g6 are the X-type generators, bits 1, 3, 5
        assert_eq!(s.bits, 0b101010);
    }

    #[test]
    fn logical_actions() {
        let c = get_code(CodeName::ThreeQubit);
        assert_eq!(logical_action(c, &ps("XXX")).unwrap(), Pauli::X);
        assert_eq!(logical_action(c, &ps("ZZI")).unwrap(), Pauli::I);
        assert_eq!(logical_action(c, &ps("ZII")).unwrap(), Pauli::Z);
        assert!(matches!(logical_action(c, &ps("XII")), Err(Error::NotInNormalizer(_))));
        let f = get_code(CodeName::FiveI);
        let y3 = ps("IIYII");
        assert_eq!(logical_action(f, &y3.multiply(&y3).unwrap()).unwrap(), Pauli::I);
    }

    #[test]
    fn bitflip_table_matches_textbook_choice() {
        let c = get_code(CodeName::ThreeQubit);
        let t = build_table(c, &Policy::BitflipOnly).unwrap();
        let pairs: Vec<(String, String)> = t.iter(c).map(|(s, r)| (s.to_string(), r.to_string())).collect();
        let expect = [("00", "III"), ("10", "XII"), ("01", "IIX"), ("11", "IXI")];
        assert_eq!(pairs.len(), 4);
        for (s, r) in expect {
            assert!(pairs.contains(&(s.to_string(), r.to_string())), "{s} -> {r}");
        }
    }

    #[test]
    fn table_sizes_and_weights() {
        let cases = [
            (CodeName::FiveI, 16, [1, 15, 0, 0]),
            (CodeName::FiveIi, 16, [1, 15, 0, 0]),
            (CodeName::Steane, 64, [1, 21, 42, 0]),
        ];
        for (name, size, by_weight) in cases {
            let c = get_code(name);
            let t = build_table(c, &Policy::MinWeightLex).unwrap();
            assert_eq!(t.len(), size);
            let mut counts = [0; 4];
            for r in t.entries() {
                counts[r.weight()] += 1;
            }
            assert_eq!(counts, by_weight, "{name}");
        }
        for name in [CodeName::Shor, CodeName::NineA, CodeName::NineB] {
            assert_eq!(build_table(get_code(name), &Policy::MinWeightLex).unwrap().len(), 256);
        }
    }

    #[test]
    fn recoveries_match_their_syndrome_and_residuals_are_logical() {
        for name in CodeName::ALL {
            let c = get_code(name);
            let t = build_table(c, &Policy::default_for(name)).unwrap();
            assert_eq!(t.entries()[0], PauliString::identity(c.n));
            for (s, r) in t.iter(c) {
                assert_eq!(syndrome(c, r).unwrap(), s);
            }
            for e in enumerate_paulis(c.n).unwrap().step_by(7) {
                let residual = t.recovery(syndrome(c, &e).unwrap()).multiply(&e).unwrap();
                assert!(logical_action(c, &residual).is_ok());
            }
        }
    }

    #[test]
    fn min_weight_is_deterministic() {
        let c = get_code(CodeName::Steane);
        assert_eq!(build_table(c, &Policy::MinWeightLex).unwrap(), build_table(c, &Policy::MinWeightLex).unwrap());
    }

    #[test]
    fn explicit_tables_are_checked() {
        let c = get_code(CodeName::ThreeQubit);
        let good: Vec<PauliString> = ["III", "XII", "IXI", "IIX"].iter().map(|s| ps(s)).collect();
        let t = build_table(c, &Policy::Explicit(good.clone())).unwrap();
        assert_eq!(t, CorrectionTable { policy: Policy::Explicit(good.clone()), ..build_table(c, &Policy::BitflipOnly).unwrap() });
        let dup = vec![ps("III"), ps("XII"), ps("IXI"), ps("IXI")];
        assert!(build_table(c, &Policy::Explicit(dup)).is_err());
        let partial = vec![ps("III"), ps("XII"), ps("IXI")];
        assert!(build_table(c, &Policy::Explicit(partial)).is_err());
        let no_identity = vec![ps("ZZI"), ps("XII"), ps("IXI"), ps("IIX")];
        assert!(build_table(c, &Policy::Explicit(no_identity)).is_err());
    }

    #[test]
    fn export_round_trips_through_explicit_policy() {
        let c = get_code(CodeName::Steane);
        let t = build_table(c, &Policy::MinWeightLex).unwrap();
        let back = build_table(c, &explicit_from_export(&t.export(c))).unwrap();
        assert_eq!(back.entries(), t.entries());
    }

    #[test]
    fn bitflip_policy_is_not_total_on_steane() {
        assert!(build_table(get_code(CodeName::Steane), &Policy::BitflipOnly).is_err());
    }

    #[test]
    fn degeneracy_of_distance_three_codes() {
        let five = degeneracy(get_code(CodeName::FiveI)).unwrap();
        assert_eq!(five.ambiguous_count(), 0);
        let steane = degeneracy(get_code(CodeName::Steane)).unwrap();
        assert!(steane.ambiguous_count() > 0);
    }
}
