//! Symplectic representation of n-qubit Pauli operators.
//!
//! A [`PauliString`] stores one X-bit and one Z-bit per qubit together with a
//! global phase `i^k`. Qubit 1 (the leftmost letter of the textual form) lives
//! at bit position 0. The single-qubit letter `Y` is the Hermitian matrix
//! `[[0,-i],[i,0]]`, so that `X·Z = -iY`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest qubit count accepted by [`enumerate_paulis`].
pub const MAX_ENUMERATION_QUBITS: usize = 12;

/// Largest qubit count representable by [`PauliString`].
pub const MAX_QUBITS: usize = 64;

/// Single-qubit Pauli letter, also used as a logical label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    /// Letters in enumeration order `I < X < Y < Z`.
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    /// `(x, z)` bits of the letter.
    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    /// Position in [`Pauli::ALL`]; also the index into channel parameter arrays.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Self {
        Self::ALL[i & 3]
    }

    /// Product up to phase (the Klein four-group law).
    pub fn compose(self, other: Pauli) -> Pauli {
        let (ax, az) = self.bits();
        let (bx, bz) = other.bits();
        Pauli::from_bits(ax ^ bx, az ^ bz)
    }

    pub fn commutes_with(self, other: Pauli) -> bool {
        let (ax, az) = self.bits();
        let (bx, bz) = other.bits();
        !((ax & bz) ^ (az & bx))
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// An n-qubit Pauli operator `i^phase · σ(x_1,z_1) ⊗ … ⊗ σ(x_n,z_n)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct PauliString {
    n: usize,
    x: u64,
    z: u64,
    phase: u8,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_QUBITS, "at most {MAX_QUBITS} qubits");
        Self { n, x: 0, z: 0, phase: 0 }
    }

    /// Builds a string from raw bit masks; bits above `n` are rejected.
    pub fn from_bits(n: usize, x: u64, z: u64, phase: u8) -> Result<Self> {
        if n > MAX_QUBITS {
            return Err(Error::QubitCount { n, max: MAX_QUBITS });
        }
        let mask = mask(n);
        if x & !mask != 0 || z & !mask != 0 {
            return Err(Error::Dimension { expected: n, found: 64 - (x | z).leading_zeros() as usize });
        }
        Ok(Self { n, x, z, phase: phase & 3 })
    }

    /// Pauli with `letter` on qubit `q` (0-based) and identity elsewhere.
    pub fn single(n: usize, q: usize, letter: Pauli) -> Self {
        assert!(q < n, "qubit {q} out of range for {n} qubits");
        let (x, z) = letter.bits();
        Self { n, x: (x as u64) << q, z: (z as u64) << q, phase: 0 }
    }

    /// The same letter on every qubit.
    pub fn uniform(n: usize, letter: Pauli) -> Self {
        let (x, z) = letter.bits();
        let m = mask(n);
        Self { n, x: if x { m } else { 0 }, z: if z { m } else { 0 }, phase: 0 }
    }

    pub fn from_letters(letters: &[Pauli]) -> Self {
        let mut p = Self::identity(letters.len());
        for (q, l) in letters.iter().enumerate() {
            p.set_letter(q, *l);
        }
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x_bits(&self) -> u64 {
        self.x
    }

    pub fn z_bits(&self) -> u64 {
        self.z
    }

    /// Exponent `k` of the global phase `i^k`.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn with_phase(mut self, phase: u8) -> Self {
        self.phase = phase & 3;
        self
    }

    /// Drops the global phase.
    pub fn unsigned(self) -> Self {
        self.with_phase(0)
    }

    pub fn letter(&self, q: usize) -> Pauli {
        Pauli::from_bits((self.x >> q) & 1 == 1, (self.z >> q) & 1 == 1)
    }

    pub fn set_letter(&mut self, q: usize, letter: Pauli) {
        let (x, z) = letter.bits();
        self.x = (self.x & !(1 << q)) | ((x as u64) << q);
        self.z = (self.z & !(1 << q)) | ((z as u64) << q);
    }

    pub fn letters(&self) -> impl Iterator<Item = Pauli> + '_ {
        (0..self.n).map(move |q| self.letter(q))
    }

    /// Counts of `I, X, Y, Z` letters, indexed by [`Pauli::index`].
    pub fn letter_counts(&self) -> [u8; 4] {
        let y = (self.x & self.z).count_ones() as u8;
        let x = (self.x & !self.z).count_ones() as u8;
        let z = (self.z & !self.x).count_ones() as u8;
        [self.n as u8 - x - y - z, x, y, z]
    }

    pub fn weight(&self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    /// Hermitian iff the phase is real.
    pub fn is_hermitian(&self) -> bool {
        self.phase % 2 == 0
    }

    pub fn multiply(&self, other: &PauliString) -> Result<PauliString> {
        check_dims(self, other)?;
        let mut phase = self.phase as i32 + other.phase as i32;
        for q in 0..self.n {
            phase += letter_product_phase(self.letter(q), other.letter(q));
        }
        Ok(PauliString {
            n: self.n,
            x: self.x ^ other.x,
            z: self.z ^ other.z,
            phase: phase.rem_euclid(4) as u8,
        })
    }

    pub fn commutes(&self, other: &PauliString) -> Result<bool> {
        check_dims(self, other)?;
        Ok(self.commutes_unchecked(other))
    }

    /// Symplectic inner product test without the dimension check.
    #[inline]
    pub(crate) fn commutes_unchecked(&self, other: &PauliString) -> bool {
        ((self.x & other.z) ^ (self.z & other.x)).count_ones() % 2 == 0
    }

    /// Action on a computational basis state `|b⟩`: returns `(b', k)` with
    /// `P|b⟩ = i^k |b'⟩`. Bit `q` of `b` is the value of qubit `q+1`.
    #[inline]
    pub fn apply_to_basis(&self, b: u64) -> (u64, u8) {
        let k = self.phase as u32
            + (self.x & self.z).count_ones()
            + 2 * (self.z & b).count_ones();
        (b ^ self.x, (k % 4) as u8)
    }

    /// Position of this string (phase ignored) in [`enumerate_paulis`] order.
    pub fn lex_index(&self) -> u64 {
        (0..self.n).fold(0u64, |acc, q| (acc << 2) | self.letter(q).index() as u64)
    }

    /// Inverse of [`PauliString::lex_index`].
    pub fn from_lex_index(n: usize, index: u64) -> Self {
        let mut p = Self::identity(n);
        for q in 0..n {
            let digit = (index >> (2 * (n - 1 - q))) & 3;
            p.set_letter(q, Pauli::from_index(digit as usize));
        }
        p
    }

    /// Row of the binary symplectic matrix, `x` bits in the low half.
    pub(crate) fn symplectic_row(&self) -> u128 {
        (self.x as u128) | ((self.z as u128) << 64)
    }
}

/// Phase exponent `g` with `σ_a σ_b = i^g σ_{a·b}`.
fn letter_product_phase(a: Pauli, b: Pauli) -> i32 {
    use Pauli::*;
    match (a, b) {
        (I, _) | (_, I) => 0,
        (X, Y) | (Y, Z) | (Z, X) => 1,
        (Y, X) | (Z, Y) | (X, Z) => -1,
        _ => 0,
    }
}

fn mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn check_dims(a: &PauliString, b: &PauliString) -> Result<()> {
    if a.n != b.n {
        return Err(Error::Dimension { expected: a.n, found: b.n });
    }
    Ok(())
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = ["", "+i", "-", "-i"][self.phase as usize];
        write!(f, "{prefix}")?;
        for l in self.letters() {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (phase, body) = if let Some(rest) = s.strip_prefix("+i") {
            (1, rest)
        } else if let Some(rest) = s.strip_prefix("-i") {
            (3, rest)
        } else if let Some(rest) = s.strip_prefix('+') {
            (0, rest)
        } else if let Some(rest) = s.strip_prefix('-') {
            (2, rest)
        } else {
            (0, s)
        };
        if body.is_empty() || body.chars().count() > MAX_QUBITS {
            return Err(Error::Parse(format!("bad Pauli string {s:?}")));
        }
        let letters = body
            .chars()
            .map(|c| Pauli::from_char(c).ok_or_else(|| Error::Parse(format!("bad Pauli letter {c:?} in {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(PauliString::from_letters(&letters).with_phase(phase))
    }
}

impl Serialize for PauliString {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Every phase-+1 Pauli string on `n` qubits, lexicographic in the letters
/// with qubit 1 most significant.
pub fn enumerate_paulis(n: usize) -> Result<impl ExactSizeIterator<Item = PauliString>> {
    // usize range: u64 ranges are not ExactSizeIterator
    if n == 0 || n > MAX_ENUMERATION_QUBITS {
        return Err(Error::QubitCount { n, max: MAX_ENUMERATION_QUBITS });
    }
    Ok((0..1usize << (2 * n)).map(move |k| PauliString::from_lex_index(n, k as u64)))
}

/// Rank over GF(2) of the symplectic rows of `paulis`.
pub fn symplectic_rank(paulis: &[PauliString]) -> usize {
    let mut basis: Vec<u128> = Vec::new();
    for p in paulis {
        let mut row = p.symplectic_row();
        for b in &basis {
            let pivot = 127 - b.leading_zeros();
            if (row >> pivot) & 1 == 1 {
                row ^= b;
            }
        }
        if row != 0 {
            basis.push(row);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;

    type Mat = Vec<Vec<Complex64>>;

    fn letter_matrix(l: Pauli) -> [[Complex64; 2]; 2] {
        let o = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match l {
            Pauli::I => [[one, o], [o, one]],
            Pauli::X => [[o, one], [one, o]],
            Pauli::Y => [[o, -i], [i, o]],
            Pauli::Z => [[one, o], [o, -one]],
        }
    }

    /// Kronecker-product oracle, independent of `apply_to_basis`.
    fn dense(p: &PauliString) -> Mat {
        let n = p.n();
        let dim = 1 << n;
        let ph = Complex64::new(0.0, 1.0).powu(p.phase() as u32);
        let mut m = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, entry) in row.iter_mut().enumerate() {
                let mut v = ph;
                for q in 0..n {
                    let lm = letter_matrix(p.letter(q));
                    v *= lm[(r >> q) & 1][(c >> q) & 1];
                }
                *entry = v;
            }
        }
        m
    }

    fn matmul(a: &Mat, b: &Mat) -> Mat {
        let d = a.len();
        let mut out = vec![vec![Complex64::new(0.0, 0.0); d]; d];
        for i in 0..d {
            for k in 0..d {
                for j in 0..d {
                    out[i][j] += a[i][k] * b[k][j];
                }
            }
        }
        out
    }

    fn close(a: &Mat, b: &Mat) -> bool {
        a.iter().flatten().zip(b.iter().flatten()).all(|(x, y)| (x - y).norm() < 1e-12)
    }

    fn ps(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn identity_is_neutral() {
        for p in enumerate_paulis(2).unwrap() {
            assert_eq!(PauliString::identity(2).multiply(&p).unwrap(), p);
        }
    }

    #[test]
    fn x_squared_is_identity() {
        let xx = ps("X").multiply(&ps("X")).unwrap();
        assert_eq!(xx, ps("I"));
        assert_eq!(xx.phase(), 0);
    }

    #[test]
    fn x_times_z_is_minus_i_y() {
        let xz = ps("X").multiply(&ps("Z")).unwrap();
        assert_eq!(xz, ps("-iY"));
        let oracle = matmul(&dense(&ps("X")), &dense(&ps("Z")));
        assert!(close(&oracle, &dense(&xz)));
    }

    #[test]
    fn commutation_examples() {
        assert!(!ps("XI").commutes(&ps("ZI")).unwrap());
        assert!(ps("XZ").commutes(&ps("ZX")).unwrap());
        let a = dense(&ps("XZ"));
        let b = dense(&ps("ZX"));
        assert!(close(&matmul(&a, &b), &matmul(&b, &a)));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        assert!(matches!(ps("XX").multiply(&ps("X")), Err(Error::Dimension { .. })));
        assert!(ps("XX").commutes(&ps("XXX")).is_err());
    }

    #[test]
    fn weights() {
        assert_eq!(PauliString::identity(7).weight(), 0);
        assert_eq!(ps("XIIIIII").weight(), 1);
        assert_eq!(ps("XIZIIII").weight(), 2);
    }

    #[test]
    fn enumeration_order_and_size() {
        let one: Vec<String> = enumerate_paulis(1).unwrap().map(|p| p.to_string()).collect();
        assert_eq!(one, ["I", "X", "Y", "Z"]);
        let three: Vec<PauliString> = enumerate_paulis(3).unwrap().collect();
        assert_eq!(three.len(), 64);
        assert_eq!(three[0].to_string(), "III");
        assert_eq!(three[63].to_string(), "ZZZ");
        assert_eq!(three[1].to_string(), "IIX");
        assert_eq!(enumerate_paulis(9).unwrap().len(), 262_144);
        assert!(enumerate_paulis(13).is_err());
        assert!(enumerate_paulis(0).is_err());
    }

    #[test]
    fn enumeration_is_distinct() {
        let all: std::collections::HashSet<_> = enumerate_paulis(4).unwrap().collect();
        assert_eq!(all.len(), 256);
    }

    #[test]
    fn parse_and_display() {
        for s in ["XIZ", "-YY", "+iZ", "-iXYZ"] {
            assert_eq!(ps(s).to_string(), s);
        }
        assert_eq!(ps("+XIZ").to_string(), "XIZ");
        let p = ps("XIZ");
        assert_eq!(p.letter(0), Pauli::X);
        assert_eq!(p.letter(2), Pauli::Z);
        assert_eq!(p.x_bits(), 0b001);
        assert_eq!(p.z_bits(), 0b100);
        assert!("XQ".parse::<PauliString>().is_err());
        assert!("".parse::<PauliString>().is_err());
    }

    #[test]
    fn basis_action_matches_dense() {
        for p in enumerate_paulis(2).unwrap() {
            for ph in 0..4 {
                let p = p.with_phase(ph);
                let m = dense(&p);
                for b in 0..4u64 {
                    let (b2, k) = p.apply_to_basis(b);
                    let amp = Complex64::new(0.0, 1.0).powu(k as u32);
                    assert!((m[b2 as usize][b as usize] - amp).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn all_pairs_commutation_agrees_with_dense() {
        let all: Vec<_> = enumerate_paulis(2).unwrap().collect();
        for a in &all {
            for b in &all {
                let (ma, mb) = (dense(a), dense(b));
                let dense_commutes = close(&matmul(&ma, &mb), &matmul(&mb, &ma));
                assert_eq!(a.commutes(b).unwrap(), dense_commutes, "{a} {b}");
            }
        }
    }

    #[test]
    fn symplectic_rank_counts_independent_rows() {
        assert_eq!(symplectic_rank(&[ps("ZZI"), ps("IZZ")]), 2);
        assert_eq!(symplectic_rank(&[ps("ZZI"), ps("IZZ"), ps("ZIZ")]), 2);
        assert_eq!(symplectic_rank(&[ps("XI"), ps("ZI"), ps("YI")]), 2);
    }

    fn arb_pauli(n: usize) -> impl Strategy<Value = PauliString> {
        (0..1u64 << (2 * n), 0u8..4).prop_map(move |(k, ph)| PauliString::from_lex_index(n, k).with_phase(ph))
    }

    proptest! {
        #[test]
        fn multiply_matches_dense_oracle(a in arb_pauli(3), b in arb_pauli(3)) {
            let prod = a.multiply(&b).unwrap();
            prop_assert!(close(&matmul(&dense(&a), &dense(&b)), &dense(&prod)));
        }

        #[test]
        fn multiply_is_associative(a in arb_pauli(3), b in arb_pauli(3), c in arb_pauli(3)) {
            let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
            let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn hermitian_squares_to_plus_identity(a in arb_pauli(6)) {
            let a = a.with_phase(a.phase() & 2);
            let sq = a.multiply(&a).unwrap();
            prop_assert_eq!(sq, PauliString::identity(6));
        }

        #[test]
        fn self_commutes(a in arb_pauli(8)) {
            prop_assert!(a.commutes(&a).unwrap());
        }

        #[test]
        fn lex_index_round_trips(k in 0u64..1 << 18) {
            prop_assert_eq!(PauliString::from_lex_index(9, k).lex_index(), k);
        }
    }
}
