//! Effective logical channel after one round of encode / noise / decode.
//!
//! Every physical Pauli error is folded through the correction table into a
//! logical Pauli; counting errors by their letter content gives four exact
//! integer polynomials in `(p1, p2, p3, p4)`.

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::codes::{CodeName, StabilizerCode};
use crate::error::{Error, Result};
use crate::pauli::{enumerate_paulis, Pauli, PauliString};
use crate::recovery::{logical_action_unchecked, syndrome_unchecked, CorrectionTable};
use crate::scalar::{from_f64, from_u64, Real, Scalar};

/// Probabilities of `I, X, Y, Z`, indexed by [`Pauli::index`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PauliChannelParams<T> {
    pub probs: [T; 4],
}

impl<T: Scalar> PauliChannelParams<T> {
    pub fn new(p1: T, p2: T, p3: T, p4: T) -> Self {
        Self { probs: [p1, p2, p3, p4] }
    }

    pub fn get(&self, l: Pauli) -> &T {
        &self.probs[l.index()]
    }

    /// The channel that applies `l` with certainty.
    pub fn pure(l: Pauli) -> Self {
        let mut probs = [T::zero(), T::zero(), T::zero(), T::zero()];
        probs[l.index()] = T::one();
        Self { probs }
    }

    /// Identity weight `f`, remainder split evenly over `X, Y, Z`.
    pub fn depolarizing(f: T) -> Self {
        let r = (T::one() - f.clone()) / from_u64(3);
        Self::new(f, r.clone(), r.clone(), r)
    }

    pub fn uniform() -> Self {
        let q = T::one() / from_u64(4);
        Self::new(q.clone(), q.clone(), q.clone(), q)
    }

    pub fn sum(&self) -> T {
        self.probs.iter().cloned().fold(T::zero(), |a, b| a + b)
    }

    /// Channel followed by the fixed Pauli `l`: weight moves from `a` to `l·a`.
    pub fn shifted(&self, l: Pauli) -> Self {
        let mut probs = self.probs.clone();
        for a in Pauli::ALL {
            probs[a.compose(l).index()] = self.probs[a.index()].clone();
        }
        Self { probs }
    }

    /// Composition of two Pauli channels (order is irrelevant).
    pub fn compose(&self, other: &Self) -> Self {
        let mut probs = [T::zero(), T::zero(), T::zero(), T::zero()];
        for a in Pauli::ALL {
            for b in Pauli::ALL {
                let slot = &mut probs[a.compose(b).index()];
                *slot = slot.clone() + self.probs[a.index()].clone() * other.probs[b.index()].clone();
            }
        }
        Self { probs }
    }

    /// Label carrying the largest weight (first one on ties).
    pub fn dominant(&self) -> Pauli {
        let mut best = Pauli::I;
        for l in Pauli::ALL {
            if self.probs[l.index()] > self.probs[best.index()] {
                best = l;
            }
        }
        best
    }
}

impl<T: Real> PauliChannelParams<T> {
    /// Each component in `[0, 1]` and the total within `1e-12` of one.
    pub fn validate(&self) -> Result<()> {
        let tol: T = from_f64(1e-12);
        for (i, p) in self.probs.iter().enumerate() {
            if !p.is_finite() || *p < -tol || *p > T::one() + tol {
                return Err(Error::InvalidParams(format!("p{} = {:?} outside [0, 1]", i + 1, p)));
            }
        }
        let s = self.sum();
        if (s - T::one()).abs() > tol {
            return Err(Error::InvalidParams(format!("components sum to {s:?}")));
        }
        Ok(())
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (*a - *b).abs())
            .fold(T::zero(), |m, d| m.max(d))
    }
}

impl PauliChannelParams<f64> {
    /// Parses `p1,p2,p3,p4` (or `p1,p2` for a bit-flip channel).
    pub fn parse(s: &str) -> Result<Self> {
        let vals = s
            .split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        let p = match vals.as_slice() {
            [a, b] => Self::new(*a, *b, 0.0, 0.0),
            [a, b, c, d] => Self::new(*a, *b, *c, *d),
            _ => return Err(Error::Parse(format!("expected 2 or 4 components, got {}", vals.len()))),
        };
        p.validate()?;
        Ok(p)
    }
}

/// Homogeneous degree-`n` polynomial in `(p1, p2, p3, p4)` with non-negative
/// integer coefficients, keyed by exponent tuple.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExactPoly {
    degree: u8,
    terms: BTreeMap<[u8; 4], u64>,
}

impl ExactPoly {
    pub fn new(degree: u8) -> Self {
        Self { degree, terms: BTreeMap::new() }
    }

    pub fn degree(&self) -> u8 {
        self.degree
    }

    pub fn add(&mut self, exps: [u8; 4], coeff: u64) {
        debug_assert_eq!(exps.iter().map(|e| *e as u32).sum::<u32>(), self.degree as u32);
        if coeff != 0 {
            let slot = self.terms.entry(exps).or_insert(0);
            *slot = slot.checked_add(coeff).expect("coefficient overflow");
        }
    }

    pub fn coeff(&self, exps: [u8; 4]) -> u64 {
        self.terms.get(&exps).copied().unwrap_or(0)
    }

    /// Nonzero terms in ascending exponent-tuple order.
    pub fn terms(&self) -> impl Iterator<Item = ([u8; 4], u64)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, *c))
    }

    pub fn coefficient_sum(&self) -> u64 {
        self.terms.values().sum()
    }

    pub fn eval<T: Scalar>(&self, p: &PauliChannelParams<T>) -> T {
        self.terms.iter().fold(T::zero(), |acc, (e, c)| {
            let mut term: T = from_u64(*c);
            for (pi, k) in p.probs.iter().zip(e) {
                term = term * num_traits::pow(pi.clone(), *k as usize);
            }
            acc + term
        })
    }
}

impl fmt::Display for ExactPoly {
    /// Highest powers of `p1` first, e.g. `p1^3 + 3 p1^2 p2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if *c != 1 {
                write!(f, "{c} ")?;
            }
            let factors: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, k)| **k > 0)
                .map(|(v, k)| if *k == 1 { format!("p{}", v + 1) } else { format!("p{}^{k}", v + 1) })
                .collect();
            f.write_str(&factors.join(" "))?;
        }
        Ok(())
    }
}

impl Serialize for ExactPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term {
            exponents: [u8; 4],
            coeff: u64,
        }
        let terms: Vec<Term> = self.terms().map(|(exponents, coeff)| Term { exponents, coeff }).collect();
        let mut s = serializer.serialize_struct("ExactPoly", 2)?;
        s.serialize_field("degree", &self.degree)?;
        s.serialize_field("terms", &terms)?;
        s.end()
    }
}

/// Logical label of every physical error in enumeration order.
#[derive(Clone, Debug)]
pub struct OutcomeTable {
    code: CodeName,
    n: usize,
    labels: Vec<Pauli>,
}

impl OutcomeTable {
    pub fn new(code: &StabilizerCode, table: &CorrectionTable) -> Result<Self> {
        if table.code() != code.name {
            return Err(Error::Table(format!("table built for {}, not {}", table.code(), code.name)));
        }
        let labels = enumerate_paulis(code.n)?
            .map(|e| {
                let r = table.recovery(syndrome_unchecked(code, &e));
                let residual = r.multiply(&e).expect("same n");
                logical_action_unchecked(code, &residual)
            })
            .collect();
        Ok(Self { code: code.name, n: code.n, labels })
    }

    pub fn code(&self) -> CodeName {
        self.code
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn label(&self, e: &PauliString) -> Pauli {
        self.labels[e.lex_index() as usize]
    }

    /// Logical channel when qubit `q` suffers the Pauli channel `per_qubit[q]`
    /// independently of the others.
    pub fn eval_per_qubit<T: Scalar>(&self, per_qubit: &[PauliChannelParams<T>]) -> Result<PauliChannelParams<T>> {
        if per_qubit.len() != self.n {
            return Err(Error::Dimension { expected: self.n, found: per_qubit.len() });
        }
        let mut acc: [Compensated<T>; 4] = std::array::from_fn(|_| Compensated::default());
        self.accumulate(per_qubit, 0, 0, T::one(), &mut acc);
        Ok(PauliChannelParams { probs: acc.map(Compensated::total) })
    }

    fn accumulate<T: Scalar>(&self, per_qubit: &[PauliChannelParams<T>], q: usize, index: usize, weight: T, acc: &mut [Compensated<T>; 4]) {
        if q == self.n {
            acc[self.labels[index].index()].add(weight);
            return;
        }
        for (digit, p) in per_qubit[q].probs.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            self.accumulate(per_qubit, q + 1, index * 4 + digit, weight.clone() * p.clone(), acc);
        }
    }

    pub fn to_polys(&self, policy: &str) -> ChannelPolys {
        let mut polys = std::array::from_fn(|_| ExactPoly::new(self.n as u8));
        let mut counts: BTreeMap<([u8; 4], Pauli), u64> = BTreeMap::new();
        for (k, label) in self.labels.iter().enumerate() {
            let e = PauliString::from_lex_index(self.n, k as u64);
            *counts.entry((e.letter_counts(), *label)).or_insert(0) += 1;
        }
        for ((exps, label), c) in counts {
            polys[label.index()].add(exps, c);
        }
        ChannelPolys { code: self.code, table_policy: policy.to_string(), polys }
    }
}

/// Neumaier summation; the correction stays zero for exact scalars.
struct Compensated<T> {
    sum: T,
    comp: T,
}

impl<T: Scalar> Default for Compensated<T> {
    fn default() -> Self {
        Self { sum: T::zero(), comp: T::zero() }
    }
}

fn magnitude<T: Scalar>(x: &T) -> T {
    if *x < T::zero() {
        T::zero() - x.clone()
    } else {
        x.clone()
    }
}

impl<T: Scalar> Compensated<T> {
    fn add(&mut self, x: T) {
        let t = self.sum.clone() + x.clone();
        if magnitude(&self.sum) >= magnitude(&x) {
            self.comp = self.comp.clone() + ((self.sum.clone() - t.clone()) + x);
        } else {
            self.comp = self.comp.clone() + ((x - t.clone()) + self.sum.clone());
        }
        self.sum = t;
    }

    fn total(self) -> T {
        self.sum + self.comp
    }
}

/// The four effective-channel polynomials `λ̃_II, λ̃_XX, λ̃_YY, λ̃_ZZ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChannelPolys {
    pub code: CodeName,
    pub table_policy: String,
    pub polys: [ExactPoly; 4],
}

impl ChannelPolys {
    pub fn get(&self, l: Pauli) -> &ExactPoly {
        &self.polys[l.index()]
    }

    pub fn n(&self) -> usize {
        self.polys[0].degree() as usize
    }

    /// Logical label that the pure channel `d` is mapped to.
    pub fn image_of_pure(&self, d: Pauli) -> Pauli {
        let mut exps = [0u8; 4];
        exps[d.index()] = self.n() as u8;
        Pauli::ALL
            .into_iter()
            .find(|l| self.get(*l).coeff(exps) == 1)
            .expect("each error has exactly one logical outcome")
    }
}

/// Exact effective polynomials of `code` decoded with `table`.
pub fn effective_polys(code: &StabilizerCode, table: &CorrectionTable) -> Result<ChannelPolys> {
    Ok(OutcomeTable::new(code, table)?.to_polys(table.policy_name()))
}

pub fn eval_polys<T: Scalar>(polys: &ChannelPolys, params: &PauliChannelParams<T>) -> PauliChannelParams<T> {
    PauliChannelParams { probs: std::array::from_fn(|i| polys.polys[i].eval(params)) }
}
