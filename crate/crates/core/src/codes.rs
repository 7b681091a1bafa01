//! The seven single-logical-qubit stabilizer codes and their printed bases.
//!
//! Logical basis states are held exactly: amplitudes are Gaussian integers
//! with a declared normalization `1/sqrt(norm_sq)`.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{enumerate_paulis, symplectic_rank, Pauli, PauliString};

/// Catalog identifiers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CodeName {
    ThreeQubit,
    Steane,
    Shor,
    NineA,
    NineB,
    FiveI,
    FiveIi,
}

impl CodeName {
    pub const ALL: [CodeName; 7] = [
        CodeName::ThreeQubit,
        CodeName::Steane,
        CodeName::Shor,
        CodeName::NineA,
        CodeName::NineB,
        CodeName::FiveI,
        CodeName::FiveIi,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CodeName::ThreeQubit => "three_qubit",
            CodeName::Steane => "steane",
            CodeName::Shor => "shor",
            CodeName::NineA => "nine_a",
            CodeName::NineB => "nine_b",
            CodeName::FiveI => "five_i",
            CodeName::FiveIi => "five_ii",
        }
    }
}

impl fmt::Display for CodeName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CodeName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CodeName::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::UnknownCode(s.to_string()))
    }
}

type Amp = Complex<i64>;

/// Multiplies by `i^k`.
fn rotate(a: Amp, k: u8) -> Amp {
    match k & 3 {
        0 => a,
        1 => Amp::new(-a.im, a.re),
        2 => -a,
        _ => Amp::new(a.im, -a.re),
    }
}

/// A state `(1/sqrt(norm_sq)) Σ_b a_b |b⟩` with Gaussian-integer `a_b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactState {
    n: usize,
    amps: Vec<Amp>,
    norm_sq: i64,
}

impl ExactState {
    fn zero(n: usize, norm_sq: i64) -> Self {
        Self { n, amps: vec![Amp::new(0, 0); 1 << n], norm_sq }
    }

    /// Superposition of kets written with qubit 1 leftmost, e.g. `"-10111"`.
    pub fn from_kets(n: usize, norm_sq: i64, kets: &[&str]) -> Result<Self> {
        let mut s = Self::zero(n, norm_sq);
        for k in kets {
            let (sign, bits) = match k.strip_prefix('-') {
                Some(rest) => (-1, rest),
                None => (1, k.strip_prefix('+').unwrap_or(k)),
            };
            if bits.len() != n {
                return Err(Error::Parse(format!("ket {k:?} is not {n} qubits")));
            }
            let b = parse_ket(bits)?;
            s.amps[b as usize] += Amp::new(sign, 0);
        }
        Ok(s)
    }

    /// Tensor product `self ⊗ other`, with `self` on the low qubits.
    pub fn tensor(&self, other: &ExactState) -> ExactState {
        let n = self.n + other.n;
        let mut out = Self::zero(n, self.norm_sq * other.norm_sq);
        for (a, &x) in self.amps.iter().enumerate() {
            if x == Amp::new(0, 0) {
                continue;
            }
            for (b, &y) in other.amps.iter().enumerate() {
                out.amps[a | (b << self.n)] += x * y;
            }
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Declared squared normalization denominator.
    pub fn norm_sq(&self) -> i64 {
        self.norm_sq
    }

    pub fn amplitudes(&self) -> &[Amp] {
        &self.amps
    }

    /// `Σ |a_b|²` of the unnormalized amplitudes.
    pub fn raw_norm_sq(&self) -> i64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn apply(&self, p: &PauliString) -> ExactState {
        let mut out = Self::zero(self.n, self.norm_sq);
        for (b, &a) in self.amps.iter().enumerate() {
            if a != Amp::new(0, 0) {
                let (b2, k) = p.apply_to_basis(b as u64);
                out.amps[b2 as usize] += rotate(a, k);
            }
        }
        out
    }

    /// Unnormalized inner product `Σ conj(a_b) c_b`.
    pub fn raw_inner(&self, other: &ExactState) -> Amp {
        self.amps.iter().zip(&other.amps).map(|(a, c)| a.conj() * c).sum()
    }

    pub fn negated(&self) -> ExactState {
        ExactState { n: self.n, amps: self.amps.iter().map(|a| -a).collect(), norm_sq: self.norm_sq }
    }

    /// Normalized amplitudes as `f64` pairs `(re, im)`.
    pub fn to_f64(&self) -> Vec<(f64, f64)> {
        let s = 1.0 / (self.norm_sq as f64).sqrt();
        self.amps.iter().map(|a| (a.re as f64 * s, a.im as f64 * s)).collect()
    }

    /// Signed basis-ket expansion, qubit 1 leftmost.
    pub fn ket_expansion(&self) -> String {
        let mut out = String::new();
        if self.norm_sq != 1 {
            out.push_str(&format!("1/sqrt({}) * [", self.norm_sq));
        }
        let mut first = true;
        for (b, a) in self.amps.iter().enumerate() {
            if *a == Amp::new(0, 0) {
                continue;
            }
            let coef = match (a.re, a.im) {
                (1, 0) => if first { String::new() } else { "+".into() },
                (-1, 0) => "-".into(),
                (re, 0) => if re > 0 && !first { format!("+{re}") } else { format!("{re}") },
                (re, im) => format!("{}({re}{im:+}i)", if first { "" } else { "+" }),
            };
            out.push_str(&coef);
            out.push('|');
            for q in 0..self.n {
                out.push(if (b >> q) & 1 == 1 { '1' } else { '0' });
            }
            out.push('⟩');
            first = false;
        }
        if self.norm_sq != 1 {
            out.push(']');
        }
        out
    }
}

fn parse_ket(bits: &str) -> Result<u64> {
    bits.chars().enumerate().try_fold(0u64, |acc, (q, c)| match c {
        '0' => Ok(acc),
        '1' => Ok(acc | (1 << q)),
        _ => Err(Error::Parse(format!("bad ket digit {c:?}"))),
    })
}

/// A stabilizer code encoding one logical qubit.
#[derive(Clone, Debug)]
pub struct StabilizerCode {
    pub name: CodeName,
    pub n: usize,
    pub generators: Vec<PauliString>,
    pub logical_x: PauliString,
    pub logical_z: PauliString,
    pub logical_zero: ExactState,
    pub logical_one: ExactState,
}

impl StabilizerCode {
    /// Logical operator carrying the label `l` (`Y` as the product `X̄·Z̄`, phase dropped).
    pub fn logical(&self, l: Pauli) -> PauliString {
        match l {
            Pauli::I => PauliString::identity(self.n),
            Pauli::X => self.logical_x,
            Pauli::Z => self.logical_z,
            Pauli::Y => self.logical_x.multiply(&self.logical_z).expect("same n").unsigned(),
        }
    }
}

fn ps(s: &str) -> PauliString {
    s.parse().expect("catalog literal")
}

fn pss(list: &[&str]) -> Vec<PauliString> {
    list.iter().map(|s| ps(s)).collect()
}

/// `Σ_{S ⊆ gens} (Π_{g∈S} g)|seed⟩`.
fn project_seed(n: usize, gens: &[PauliString], seed: &str, norm_sq: Option<i64>) -> ExactState {
    let mut s = ExactState::from_kets(n, 1, &[seed]).expect("catalog literal");
    for g in gens {
        let gs = s.apply(g);
        for (a, b) in s.amps.iter_mut().zip(gs.amps) {
            *a += b;
        }
    }
    s.norm_sq = norm_sq.unwrap_or_else(|| s.raw_norm_sq());
    s
}

fn three_qubit() -> StabilizerCode {
    StabilizerCode {
        name: CodeName::ThreeQubit,
        n: 3,
        generators: pss(&["ZZI", "IZZ"]),
        logical_x: ps("XXX"),
        logical_z: ps("ZZZ"),
        logical_zero: ExactState::from_kets(3, 1, &["000"]).unwrap(),
        logical_one: ExactState::from_kets(3, 1, &["111"]).unwrap(),
    }
}

fn steane() -> StabilizerCode {
    let generators = pss(&["IIIZZZZ", "IIIXXXX", "IZZIIZZ", "IXXIIXX", "ZIZIZIZ", "XIXIXIX"]);
    let x_type = [generators[1], generators[3], generators[5]];
    let zero = project_seed(7, &x_type, "0000000", Some(8));
    let one = zero.apply(&ps("XXXXXXX"));
    StabilizerCode {
        name: CodeName::Steane,
        n: 7,
        generators,
        logical_x: ps("XXXXXXX"),
        logical_z: ps("ZZZZZZZ"),
        logical_zero: zero,
        logical_one: one,
    }
}

fn five_i() -> StabilizerCode {
    let generators = pss(&["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]);
    let zero = project_seed(5, &generators, "00000", None);
    let one = zero.apply(&ps("XXXXX"));
    StabilizerCode {
        name: CodeName::FiveI,
        n: 5,
        generators,
        logical_x: ps("XXXXX"),
        logical_z: ps("ZZZZZ"),
        logical_zero: zero,
        logical_one: one,
    }
}

fn nine_generators_z_blocks() -> Vec<PauliString> {
    pss(&[
        "ZZIIIIIII", "IZZIIIIII", "IIIZZIIII", "IIIIZZIII", "IIIIIIZZI", "IIIIIIIZZ", "XXXXXXIII",
        "IIIXXXXXX",
    ])
}

fn shor() -> StabilizerCode {
    let block = ExactState::from_kets(3, 2, &["000", "111"]).unwrap();
    let zero = block.tensor(&block).tensor(&block);
    let one = zero.apply(&ps("ZZZZZZZZZ"));
    StabilizerCode {
        name: CodeName::Shor,
        n: 9,
        generators: nine_generators_z_blocks(),
        logical_x: ps("ZZZZZZZZZ"),
        logical_z: ps("XXXIIIIII"),
        logical_zero: zero,
        logical_one: one,
    }
}

fn nine_a() -> Result<StabilizerCode> {
    let zero = ExactState::from_kets(9, 4, &["000000000", "111111000", "000111111", "111000111"])?;
    let one = ExactState::from_kets(9, 4, &["111111111", "000000111", "111000000", "000111000"])?;
    with_derived_logicals(CodeName::NineA, nine_generators_z_blocks(), zero, one)
}

fn nine_b() -> Result<StabilizerCode> {
    let even = ExactState::from_kets(3, 4, &["000", "011", "101", "110"])?;
    let odd = ExactState::from_kets(3, 4, &["111", "100", "010", "001"])?;
    let zero = even.tensor(&even).tensor(&even);
    let one = odd.tensor(&odd).tensor(&odd);
    let generators = pss(&[
        "XXIIIIIII", "IXXIIIIII", "IIIXXIIII", "IIIIXXIII", "IIIIIIXXI", "IIIIIIIXX", "ZZZZZZIII",
        "IIIZZZZZZ",
    ]);
    with_derived_logicals(CodeName::NineB, generators, zero, one)
}

fn five_ii() -> Result<StabilizerCode> {
    let zero = ExactState::from_kets(
        5,
        8,
        &["00000", "-10111", "-01011", "11100", "10010", "00101", "11001", "01110"],
    )?;
    let one = ExactState::from_kets(
        5,
        8,
        &["11111", "-01000", "10100", "-00011", "01101", "11010", "-00110", "-10001"],
    )?;
    let generators = derive_stabilizers(5, &zero, &one)?;
    with_derived_logicals(CodeName::FiveIi, generators, zero, one)
}

/// Paulis in order of increasing weight, then number of distinct letters,
/// then lexicographic.
fn weight_ordered(n: usize) -> Result<Vec<PauliString>> {
    let mut all: Vec<PauliString> = enumerate_paulis(n)?.collect();
    all.sort_by_key(|p| {
        let kinds = p.letter_counts()[1..].iter().filter(|c| **c > 0).count();
        (p.weight(), kinds, p.lex_index())
    });
    Ok(all)
}

/// Signed Pauli `±P` with `±P|0̄⟩ = a|0̄⟩`-style action given by `target`.
fn find_signed(
    candidates: &[PauliString],
    zero: &ExactState,
    one: &ExactState,
    target: impl Fn(&ExactState, &ExactState) -> (ExactState, ExactState),
    skip_identity: bool,
) -> Vec<PauliString> {
    let (want0, want1) = target(zero, one);
    let mut found = Vec::new();
    for p in candidates {
        if skip_identity && p.weight() == 0 {
            continue;
        }
        let a = zero.apply(p);
        let b = one.apply(p);
        if a == want0 && b == want1 {
            found.push(*p);
        } else if a.negated() == want0 && b.negated() == want1 {
            found.push(p.with_phase(2));
        }
    }
    found
}

/// Generators of the stabilizer of `span{zero, one}`, chosen greedily in
/// [`weight_ordered`] order.
fn derive_stabilizers(n: usize, zero: &ExactState, one: &ExactState) -> Result<Vec<PauliString>> {
    let candidates = weight_ordered(n)?;
    let group = find_signed(&candidates, zero, one, |z, o| (z.clone(), o.clone()), true);
    let mut generators: Vec<PauliString> = Vec::new();
    for g in group {
        let mut trial = generators.clone();
        trial.push(g);
        if symplectic_rank(&trial) == trial.len() {
            generators = trial;
        }
        if generators.len() == n - 1 {
            return Ok(generators);
        }
    }
    Err(Error::InvalidCode {
        code: format!("{n}-qubit"),
        reason: format!("stabilizer has rank {} < {}", generators.len(), n - 1),
    })
}

/// First Paulis in [`weight_ordered`] order acting on the printed
/// basis as logical Z (`|0̄⟩ → |0̄⟩, |1̄⟩ → -|1̄⟩`) and logical X (`|0̄⟩ ↔ |1̄⟩`).
fn with_derived_logicals(
    name: CodeName,
    generators: Vec<PauliString>,
    zero: ExactState,
    one: ExactState,
) -> Result<StabilizerCode> {
    let n = zero.n();
    let candidates: Vec<PauliString> = weight_ordered(n)?
        .into_iter()
        .filter(|p| p.weight() > 0 && generators.iter().all(|g| g.commutes_unchecked(p)))
        .collect();
    let missing = |what: &str| Error::InvalidCode { code: name.to_string(), reason: format!("no {what} found") };
    let logical_z = *find_signed(&candidates, &zero, &one, |z, o| (z.clone(), o.negated()), true)
        .first()
        .ok_or_else(|| missing("logical Z"))?;
    let logical_x = *find_signed(&candidates, &zero, &one, |z, o| (o.clone(), z.clone()), true)
        .first()
        .ok_or_else(|| missing("logical X"))?;
    Ok(StabilizerCode { name, n, generators, logical_x, logical_z, logical_zero: zero, logical_one: one })
}

fn build(name: CodeName) -> StabilizerCode {
    let code = match name {
        CodeName::ThreeQubit => Ok(three_qubit()),
        CodeName::Steane => Ok(steane()),
        CodeName::Shor => Ok(shor()),
        CodeName::NineA => nine_a(),
        CodeName::NineB => nine_b(),
        CodeName::FiveI => Ok(five_i()),
        CodeName::FiveIi => five_ii(),
    };
    code.unwrap_or_else(|e| panic!("catalog entry {name} is malformed: {e}"))
}

/// Catalog lookup; entries are built once and shared.
pub fn get_code(name: CodeName) -> &'static StabilizerCode {
    static CATALOG: [OnceLock<StabilizerCode>; 7] = [const { OnceLock::new() }; 7];
    let idx = CodeName::ALL.iter().position(|c| *c == name).expect("catalog name");
    CATALOG[idx].get_or_init(|| build(name))
}

pub fn get_code_by_name(name: &str) -> Result<&'static StabilizerCode> {
    Ok(get_code(name.parse()?))
}

/// Outcome of one structural check.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub code: String,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Verifies every structural invariant of `code` with exact state arithmetic.
pub fn validate_code(code: &StabilizerCode) -> ValidationReport {
    let mut checks = Vec::new();
    let mut push = |name: &'static str, passed: bool, detail: String| checks.push(Check { name, passed, detail });
    let n = code.n;
    let gens = &code.generators;

    let dims_ok = gens.iter().chain([&code.logical_x, &code.logical_z]).all(|g| g.n() == n)
        && code.logical_zero.n() == n
        && code.logical_one.n() == n;
    push("dimensions", dims_ok, format!("n = {n}"));
    if !dims_ok {
        return ValidationReport { code: code.name.to_string(), checks };
    }

    push("generator_count", gens.len() + 1 == n, format!("{} generators", gens.len()));

    let mut bad_pairs = Vec::new();
    for (i, a) in gens.iter().enumerate() {
        for (j, b) in gens.iter().enumerate().skip(i + 1) {
            if !a.commutes_unchecked(b) {
                bad_pairs.push(format!("g{}/g{}", i + 1, j + 1));
            }
        }
    }
    push("generators_commute", bad_pairs.is_empty(), bad_pairs.join(", "));

    let rank = symplectic_rank(gens);
    push("generators_independent", rank == gens.len(), format!("rank {rank}"));

    let lx_ok = gens.iter().all(|g| g.commutes_unchecked(&code.logical_x));
    let lz_ok = gens.iter().all(|g| g.commutes_unchecked(&code.logical_z));
    push("logicals_commute_with_generators", lx_ok && lz_ok, format!("X̄ {lx_ok}, Z̄ {lz_ok}"));
    push(
        "logicals_anticommute",
        !code.logical_x.commutes_unchecked(&code.logical_z),
        format!("{} / {}", code.logical_x, code.logical_z),
    );

    let (zero, one) = (&code.logical_zero, &code.logical_one);
    let norms = (zero.raw_norm_sq(), one.raw_norm_sq());
    push(
        "states_normalized",
        norms.0 == zero.norm_sq() && norms.1 == one.norm_sq(),
        format!("Σ|a|² = {}/{}, {}/{}", norms.0, zero.norm_sq(), norms.1, one.norm_sq()),
    );
    let overlap = zero.raw_inner(one);
    push("states_orthogonal", overlap == Complex::new(0, 0), format!("⟨0̄|1̄⟩ ∝ {overlap}"));

    let stabilized = gens.iter().enumerate().filter(|(_, g)| zero.apply(g) != *zero || one.apply(g) != *one);
    let unstab: Vec<String> = stabilized.map(|(i, _)| format!("g{}", i + 1)).collect();
    push("states_stabilized", unstab.is_empty(), unstab.join(", "));

    let z_ok = zero.apply(&code.logical_z) == *zero && one.apply(&code.logical_z) == one.negated();
    push("logical_z_eigenstates", z_ok, String::new());
    let xa = zero.apply(&code.logical_x);
    let xb = one.apply(&code.logical_x);
    let x_ok = (xa == *one && xb == *zero) || (xa == one.negated() && xb == zero.negated());
    push("logical_x_exchanges", x_ok, String::new());

    ValidationReport { code: code.name.to_string(), checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_catalog_code_validates() {
        for name in CodeName::ALL {
            let report = validate_code(get_code(name));
            assert!(report.all_passed(), "{name}: {:?}", report.checks);
        }
    }

    #[test]
    fn three_qubit_record() {
        let c = get_code(CodeName::ThreeQubit);
        assert_eq!(c.n, 3);
        let g: Vec<String> = c.generators.iter().map(|g| g.to_string()).collect();
        assert_eq!(g, ["ZZI", "IZZ"]);
        assert_eq!(c.logical_zero.ket_expansion(), "|000⟩");
        assert_eq!(c.logical_one.ket_expansion(), "|111⟩");
    }

    #[test]
    fn steane_one_is_all_x_on_zero() {
        let c = get_code(CodeName::Steane);
        assert_eq!(c.generators.len(), 6);
        assert_eq!(c.generators[0].to_string(), "IIIZZZZ");
        assert_eq!(c.logical_zero.apply(&"XXXXXXX".parse().unwrap()), c.logical_one);
        assert_eq!(c.logical_zero.amplitudes().iter().filter(|a| a.re != 0).count(), 8);
    }

    #[test]
    fn five_ii_printed_signs() {
        let c = get_code(CodeName::FiveIi);
        let amp = |ket: &str| c.logical_zero.amplitudes()[parse_ket(ket).unwrap() as usize].re;
        let signs: Vec<i64> =
            ["10111", "01011", "11100", "10010", "00101", "11001", "01110"].iter().map(|k| amp(k)).collect();
        assert_eq!(amp("00000"), 1);
        assert_eq!(signs, [-1, -1, 1, 1, 1, 1, 1]);
        assert_eq!(c.generators.len(), 4);
    }

    #[test]
    fn nine_b_prefactor_normalizes() {
        let c = get_code(CodeName::NineB);
        assert_eq!(c.logical_zero.norm_sq(), 64);
        assert_eq!(c.logical_zero.raw_norm_sq(), 64);
        assert!(validate_code(c).check("states_normalized").unwrap().passed);
    }

    #[test]
    fn shor_logicals_follow_catalog_convention() {
        let c = get_code(CodeName::Shor);
        assert_eq!(c.logical_x.to_string(), "ZZZZZZZZZ");
        assert_eq!(c.logical_z.to_string(), "XXXIIIIII");
        assert!(validate_code(c).all_passed());
    }

    #[test]
    fn injected_anticommuting_generator_fails_commutation() {
        let mut c = get_code(CodeName::ThreeQubit).clone();
        c.generators[1] = "XII".parse().unwrap();
        let report = validate_code(&c);
        assert!(!report.check("generators_commute").unwrap().passed);
        assert!(!report.all_passed());
    }

    #[test]
    fn stabilizer_group_size_and_seed_projection() {
        for name in CodeName::ALL {
            let c = get_code(name);
            let k = c.generators.len();
            let mut group = std::collections::HashSet::new();
            let mut projected = ExactState::zero(c.n, 1);
            let seed_index = c.logical_zero.amplitudes().iter().position(|a| *a != Complex::new(0, 0)).unwrap();
            let mut seed = ExactState::zero(c.n, 1);
            seed.amps[seed_index] = Complex::new(1, 0);
            for mask in 0..1u32 << k {
                let mut elem = PauliString::identity(c.n);
                for (i, g) in c.generators.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        elem = elem.multiply(g).unwrap();
                    }
                }
                group.insert(elem);
                let img = seed.apply(&elem);
                for (a, b) in projected.amps.iter_mut().zip(img.amps) {
                    *a += b;
                }
            }
            assert_eq!(group.len(), 1 << k, "{name}");
            // the projection lies in span{|0̄⟩, |1̄⟩}; except for shor, whose printed
            // basis is rotated by a logical Hadamard, it is parallel to |0̄⟩
            let a0 = projected.raw_inner(&c.logical_zero);
            let a1 = projected.raw_inner(&c.logical_one);
            let captured = a0.norm_sqr() + a1.norm_sqr();
            assert_eq!(captured, projected.raw_norm_sq() * c.logical_zero.raw_norm_sq(), "{name}");
            if name == CodeName::Shor {
                assert_eq!(a0, a1);
            } else {
                assert_eq!(a1, Complex::new(0, 0), "{name}");
            }
        }
    }

    #[test]
    fn unknown_code_name() {
        assert!(matches!("seven".parse::<CodeName>(), Err(Error::UnknownCode(_))));
        assert_eq!("five_ii".parse::<CodeName>().unwrap(), CodeName::FiveIi);
    }
}
