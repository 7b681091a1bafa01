//! Concatenated error correction: iteration of the one-level map, channel
//! classification, worst-case single-variable maps and purification
//! thresholds.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::codes::CodeName;
use crate::effective::{eval_polys, ChannelPolys, PauliChannelParams};
use crate::error::{Error, Result};
use crate::pauli::Pauli;
use crate::scalar::{from_f64, from_u64, Real, Scalar};

/// Limit type of a concatenated channel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ChannelType {
    #[serde(rename = "I_type")]
    I,
    #[serde(rename = "X_type")]
    X,
    #[serde(rename = "Y_type")]
    Y,
    #[serde(rename = "Z_type")]
    Z,
    /// Never purifies.
    #[serde(rename = "T_type")]
    T,
}

impl ChannelType {
    pub fn from_pauli(p: Pauli) -> Self {
        match p {
            Pauli::I => Self::I,
            Pauli::X => Self::X,
            Pauli::Y => Self::Y,
            Pauli::Z => Self::Z,
        }
    }

    pub fn as_pauli(self) -> Option<Pauli> {
        match self {
            Self::I => Some(Pauli::I),
            Self::X => Some(Pauli::X),
            Self::Y => Some(Pauli::Y),
            Self::Z => Some(Pauli::Z),
            Self::T => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::I => "I_type",
            Self::X => "X_type",
            Self::Y => "Y_type",
            Self::Z => "Z_type",
            Self::T => "T_type",
        }
    }
}

impl fmt::Display for ChannelType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `trajectory[0] = start`, each further entry one more level of correction.
pub fn iterate<T: Scalar>(polys: &ChannelPolys, start: &PauliChannelParams<T>, levels: usize) -> Vec<PauliChannelParams<T>> {
    let mut out = Vec::with_capacity(levels + 1);
    out.push(start.clone());
    for _ in 0..levels {
        let next = step(polys, out.last().expect("non-empty"));
        out.push(next);
    }
    out
}

/// One level, rescaled to unit total. The rescaling is exact in theory; in
/// floating point it stops the total from drifting, since a degree-`n` map
/// sends a total of `1 + ε` to roughly `1 + nε`.
fn step<T: Scalar>(polys: &ChannelPolys, p: &PauliChannelParams<T>) -> PauliChannelParams<T> {
    let next = eval_polys(polys, p);
    let total = next.sum();
    PauliChannelParams { probs: next.probs.map(|v| v / total.clone()) }
}

#[derive(Clone, Copy, Debug)]
pub struct ClassifyOptions {
    pub tol: f64,
    pub max_levels: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self { tol: 1e-9, max_levels: 64 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChannelClass<T> {
    pub label: ChannelType,
    /// First level at which a component reached `1 - tol`.
    pub levels_to_converge: Option<usize>,
    pub trajectory: Vec<PauliChannelParams<T>>,
    /// `(odd-level label, even-level label)` when the purified channel
    /// alternates between two labels from one level to the next.
    pub oscillation: Option<(ChannelType, ChannelType)>,
}

fn purified<T: Real>(p: &PauliChannelParams<T>, tol: T) -> Option<Pauli> {
    Pauli::ALL.into_iter().find(|l| *p.get(*l) >= T::one() - tol)
}

/// Iterates until one component reaches `1 - tol`. A period-two alternation
/// is reported through `oscillation`, with `label` taken from odd levels.
///
/// The result is `T` when `max_levels` is exhausted or when the trajectory
/// settles on a mixed fixed point. Stopping there matters: the uniform
/// channel is an unstable fixed point and rounding noise would otherwise
/// push the trajectory towards an arbitrary pure label.
pub fn classify<T: Real>(polys: &ChannelPolys, start: &PauliChannelParams<T>, opts: &ClassifyOptions) -> Result<ChannelClass<T>> {
    if !(opts.tol > 0.0 && opts.tol < 0.5) {
        return Err(Error::InvalidParams(format!("tol {} outside (0, 0.5)", opts.tol)));
    }
    if opts.max_levels == 0 {
        return Err(Error::InvalidParams("max_levels must be at least 1".into()));
    }
    start.validate()?;
    let tol: T = from_f64(opts.tol);
    let mut trajectory = vec![start.clone()];
    for level in 0..=opts.max_levels {
        let current = &trajectory[level];
        if let Some(l) = purified(current, tol) {
            let next = step(polys, current);
            let after = next.dominant();
            trajectory.push(next);
            let (label, oscillation) = if after == l {
                (ChannelType::from_pauli(l), None)
            } else {
                let (odd, even) = if level % 2 == 1 { (l, after) } else { (after, l) };
                let pair = (ChannelType::from_pauli(odd), ChannelType::from_pauli(even));
                (pair.0, Some(pair))
            };
            return Ok(ChannelClass { label, levels_to_converge: Some(level), trajectory, oscillation });
        }
        if level == opts.max_levels {
            break;
        }
        let next = step(polys, current);
        let stationary = next.max_abs_diff(current) <= tol;
        trajectory.push(next);
        if stationary {
            break;
        }
    }
    Ok(ChannelClass { label: ChannelType::T, levels_to_converge: None, trajectory, oscillation: None })
}

/// Single-variable map `f(p) = Σ_k coeffs[k] (1-p)^k p^(n-k)`: the weight of
/// `image` after one level when the input has weight `p` on `start` and the
/// remainder on `residual`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WorstCasePoly {
    pub code: CodeName,
    pub start: Pauli,
    pub image: Pauli,
    pub residual: Pauli,
    pub coeffs: Vec<u64>,
}

impl WorstCasePoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval<T: Scalar>(&self, p: T) -> T {
        let n = self.degree();
        let q = T::one() - p.clone();
        let mut acc = T::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            acc = acc + from_u64::<T>(*c) * pow(&q, k) * pow(&p, n - k);
        }
        acc
    }

    /// Coefficients in the monomial basis: entry `j` multiplies `p^j`.
    pub fn power_coeffs(&self) -> Vec<i64> {
        let n = self.degree();
        let mut out = vec![0i64; n + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            let mut binom = 1i64;
            for i in 0..=k {
                let sign = if i % 2 == 0 { 1 } else { -1 };
                out[n - k + i] += sign * binom * *c as i64;
                binom = binom * (k - i) as i64 / (i + 1) as i64;
            }
        }
        out
    }
}

fn pow<T: Scalar>(x: &T, k: usize) -> T {
    let mut acc = T::one();
    for _ in 0..k {
        acc = acc * x.clone();
    }
    acc
}

impl fmt::Display for WorstCasePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.degree();
        let mut first = true;
        for k in (0..=n).rev() {
            let c = self.coeffs[k];
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let mut factors = Vec::new();
            match k {
                0 => {}
                1 => factors.push("(1-p)".to_string()),
                _ => factors.push(format!("(1-p)^{k}")),
            }
            match n - k {
                0 => {}
                1 => factors.push("p".to_string()),
                e => factors.push(format!("p^{e}")),
            }
            if c != 1 || factors.is_empty() {
                write!(f, "{c}")?;
                if !factors.is_empty() {
                    f.write_str(" ")?;
                }
            }
            f.write_str(&factors.join(" "))?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Restricts which labels may start a branch or carry the residual weight.
#[derive(Clone, Debug, Default)]
pub struct WorstCaseOptions {
    /// Dominant input labels to consider; defaults to the support.
    pub starts: Option<Vec<Pauli>>,
    /// Labels the physical channel can put weight on. Defaults to `{I, X}`
    /// for bit-flip tables and all four labels otherwise.
    pub support: Option<Vec<Pauli>>,
}

impl WorstCaseOptions {
    pub fn starts(labels: &[Pauli]) -> Self {
        Self { starts: Some(labels.to_vec()), support: None }
    }

    fn resolve(&self, polys: &ChannelPolys) -> (Vec<Pauli>, Vec<Pauli>) {
        let support = match &self.support {
            Some(s) => s.clone(),
            None if polys.table_policy == "bitflip_only" => vec![Pauli::I, Pauli::X],
            None => Pauli::ALL.to_vec(),
        };
        let starts = self.starts.clone().unwrap_or_else(|| support.clone());
        (starts, support)
    }
}

fn candidate(polys: &ChannelPolys, d: Pauli, sigma: Pauli) -> Vec<u64> {
    let n = polys.n();
    let target = polys.get(polys.image_of_pure(d));
    (0..=n)
        .map(|k| {
            let mut exps = [0u8; 4];
            exps[d.index()] += (n - k) as u8;
            exps[sigma.index()] += k as u8;
            target.coeff(exps)
        })
        .collect()
}

/// Minimizing residual direction for one starting label. Coefficient vectors
/// are compared lexicographically from the `p^n` end, which orders the maps
/// by their value as `p → 1`.
pub fn branch_poly(polys: &ChannelPolys, d: Pauli, support: &[Pauli]) -> Result<WorstCasePoly> {
    let best = support
        .iter()
        .filter(|s| **s != d)
        .map(|s| (candidate(polys, d, *s), *s))
        .min_by(|a, b| a.0.cmp(&b.0))
        .ok_or_else(|| Error::InvalidParams("support must contain a label besides the start".into()))?;
    Ok(WorstCasePoly { code: polys.code, start: d, image: polys.image_of_pure(d), residual: best.1, coeffs: best.0 })
}

/// The minimum over starting labels and residual directions.
pub fn worst_case_poly(polys: &ChannelPolys, opts: &WorstCaseOptions) -> Result<WorstCasePoly> {
    let (starts, support) = opts.resolve(polys);
    let mut best: Option<WorstCasePoly> = None;
    for d in starts {
        let f = branch_poly(polys, d, &support)?;
        if best.as_ref().is_none_or(|b| f.coeffs < b.coeffs) {
            best = Some(f);
        }
    }
    best.ok_or_else(|| Error::InvalidParams("no starting label".into()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BranchThreshold<T> {
    pub start: Pauli,
    pub image: Pauli,
    pub threshold: T,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdReport<T> {
    pub code: CodeName,
    /// Largest branch threshold.
    pub threshold: T,
    pub branches: Vec<BranchThreshold<T>>,
}

/// Purification threshold per starting label.
///
/// A label that the code maps to itself (or that lies on a cycle of labels)
/// needs `F(p) > p` for the composed map `F` around its cycle. A label that
/// is converted into another one needs its one-level image to clear the
/// threshold of the label it is converted into.
pub fn purification_threshold<T: Real>(polys: &ChannelPolys, opts: &WorstCaseOptions, tol: T) -> Result<ThresholdReport<T>> {
    if !(tol > T::zero()) {
        return Err(Error::InvalidParams("tolerance must be positive".into()));
    }
    let (starts, support) = opts.resolve(polys);
    let mut maps = BTreeMap::new();
    for d in &support {
        maps.insert(*d, branch_poly(polys, *d, &support)?);
    }
    let mut memo = BTreeMap::new();
    let mut branches = Vec::new();
    for d in starts {
        if !maps.contains_key(&d) {
            return Err(Error::InvalidParams(format!("start {d} outside the channel support")));
        }
        let threshold = branch_threshold(&maps, d, tol, &mut memo)?;
        branches.push(BranchThreshold { start: d, image: maps[&d].image, threshold });
    }
    let threshold = branches.iter().map(|b| b.threshold).fold(T::neg_infinity(), T::max);
    Ok(ThresholdReport { code: polys.code, threshold, branches })
}

fn branch_threshold<T: Real>(maps: &BTreeMap<Pauli, WorstCasePoly>, d: Pauli, tol: T, memo: &mut BTreeMap<Pauli, T>) -> Result<T> {
    if let Some(t) = memo.get(&d) {
        return Ok(*t);
    }
    let mut cycle = vec![d];
    let mut cur = maps[&d].image;
    while cur != d && !cycle.contains(&cur) {
        if !maps.contains_key(&cur) {
            return Err(Error::InvalidParams(format!("label {cur} outside the channel support")));
        }
        cycle.push(cur);
        cur = maps[&cur].image;
    }
    let t = if cur == d {
        let composed = |p: T| cycle.iter().fold(p, |x, l| maps[l].eval(x));
        solve_crossing(|p| composed(p) - p, tol)?
    } else {
        let next = branch_threshold(maps, maps[&d].image, tol, memo)?;
        let f = &maps[&d];
        solve_crossing(|p| f.eval(p) - next, tol)?
    };
    memo.insert(d, t);
    Ok(t)
}

const GRID: usize = 1000;

/// Largest root of `g` in `[0.5, 1)`: scan a grid downward from 1 for the
/// first point with `g ≤ 0`, then bisect against the grid point above it.
fn solve_crossing<T: Real>(g: impl Fn(T) -> T, tol: T) -> Result<T> {
    let point = |j: usize| -> T { from_f64(0.5 + 0.5 * j as f64 / GRID as f64) };
    let j = (0..GRID).rev().find(|j| g(point(*j)) <= T::zero()).ok_or(Error::Bracketing)?;
    let mut lo = point(j);
    if g(lo) == T::zero() {
        return Ok(lo);
    }
    if j + 1 == GRID {
        return Err(Error::Bracketing);
    }
    let mut hi = point(j + 1);
    let two = T::one() + T::one();
    while hi - lo > tol {
        let mid = (lo + hi) / two;
        if g(mid) <= T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) / two)
}

/// Parameter grids for sweeps.
///
/// * `simplex:N`: every `(a, b, c, d) / N` with `a + b + c + d = N`.
/// * `depol:LO:HI:STEPS`: depolarizing channels with identity weight from
///   `LO` to `HI`.
/// * `dominant:L:LO:HI:STEPS`: weight on label `L`, remainder split evenly.
#[derive(Clone, Debug, PartialEq)]
pub enum GridSpec {
    Simplex(usize),
    Depolarizing { lo: f64, hi: f64, steps: usize },
    Dominant { label: Pauli, lo: f64, hi: f64, steps: usize },
}

impl GridSpec {
    pub fn points(&self) -> Vec<PauliChannelParams<f64>> {
        match *self {
            GridSpec::Simplex(n) => {
                let mut out = Vec::new();
                for a in (0..=n).rev() {
                    for b in (0..=n - a).rev() {
                        for c in (0..=n - a - b).rev() {
                            let d = n - a - b - c;
                            let f = |v: usize| v as f64 / n as f64;
                            out.push(PauliChannelParams::new(f(a), f(b), f(c), f(d)));
                        }
                    }
                }
                out
            }
            GridSpec::Depolarizing { lo, hi, steps } => linspace(lo, hi, steps).map(PauliChannelParams::depolarizing).collect(),
            GridSpec::Dominant { label, lo, hi, steps } => linspace(lo, hi, steps)
                .map(|w| {
                    let r = (1.0 - w) / 3.0;
                    let mut probs = [r; 4];
                    probs[label.index()] = w;
                    PauliChannelParams { probs }
                })
                .collect(),
        }
    }
}

fn linspace(lo: f64, hi: f64, steps: usize) -> impl Iterator<Item = f64> {
    (0..steps).map(move |i| if steps == 1 { lo } else { lo + (hi - lo) * i as f64 / (steps - 1) as f64 })
}

impl FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| t.parse::<f64>().map_err(|e| Error::Parse(format!("grid value {t:?}: {e}")));
        let count = |t: &str| match t.parse::<usize>() {
            Ok(v) if v >= 1 => Ok(v),
            _ => Err(Error::Parse(format!("grid count {t:?} must be a positive integer"))),
        };
        let range = |lo: f64, hi: f64| {
            if (0.0..=1.0).contains(&lo) && (0.0..=1.0).contains(&hi) && lo <= hi {
                Ok(())
            } else {
                Err(Error::Parse(format!("grid range {lo}..{hi} outside [0, 1]")))
            }
        };
        match parts.as_slice() {
            ["simplex", n] => Ok(GridSpec::Simplex(count(n)?)),
            ["depol", lo, hi, steps] => {
                let (lo, hi) = (num(lo)?, num(hi)?);
                range(lo, hi)?;
                Ok(GridSpec::Depolarizing { lo, hi, steps: count(steps)? })
            }
            ["dominant", l, lo, hi, steps] => {
                let mut chars = l.chars();
                let label = match (chars.next(), chars.next()) {
                    (Some(c), None) => Pauli::from_char(c).ok_or_else(|| Error::Parse(format!("bad label {l:?}")))?,
                    _ => return Err(Error::Parse(format!("bad label {l:?}"))),
                };
                let (lo, hi) = (num(lo)?, num(hi)?);
                range(lo, hi)?;
                Ok(GridSpec::Dominant { label, lo, hi, steps: count(steps)? })
            }
            _ => Err(Error::Parse(format!("unrecognized grid {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub params: PauliChannelParams<f64>,
    pub label: ChannelType,
    pub levels: Option<usize>,
}

pub fn sweep(polys: &ChannelPolys, grid: &GridSpec, opts: &ClassifyOptions) -> Result<Vec<SweepRow>> {
    grid.points()
        .into_iter()
        .map(|p| {
            let c = classify(polys, &p, opts)?;
            Ok(SweepRow { params: p, label: c.label, levels: c.levels_to_converge })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::get_code;
    use crate::effective::effective_polys;
    use crate::recovery::{build_table, Policy};
    use crate::PauliParams;
    use proptest::prelude::*;

    fn polys(name: CodeName) -> ChannelPolys {
        let code = get_code(name);
        effective_polys(code, &build_table(code, &Policy::default_for(name)).unwrap()).unwrap()
    }

    fn threshold(name: CodeName, opts: &WorstCaseOptions) -> f64 {
        purification_threshold(&polys(name), opts, 1e-12).unwrap().threshold
    }

    #[test]
    fn worst_case_forms() {
        let cases: [(CodeName, &[u64]); 5] = [
            (CodeName::FiveI, &[1, 5, 0, 0, 0, 0]),
            (CodeName::Steane, &[1, 7, 0, 28, 7, 21, 0, 0]),
            (CodeName::NineA, &[1, 9, 9, 57, 27, 99, 27, 27, 0, 0]),
            (CodeName::FiveIi, &[1, 1, 2, 2, 0, 0]),
            (CodeName::ThreeQubit, &[1, 3, 0, 0]),
        ];
        for (name, coeffs) in cases {
            let f = worst_case_poly(&polys(name), &WorstCaseOptions::default()).unwrap();
            assert_eq!(f.coeffs, coeffs, "{name}");
        }
    }

    #[test]
    fn display_and_power_basis() {
        let f = worst_case_poly(&polys(CodeName::FiveI), &WorstCaseOptions::default()).unwrap();
        assert_eq!(f.to_string(), "5 (1-p) p^4 + p^5");
        assert_eq!(f.power_coeffs(), vec![0, 0, 0, 0, 5, -4]);
        for p in [0.0f64, 0.3, 0.77, 1.0] {
            let direct: f64 = f.power_coeffs().iter().enumerate().map(|(j, c)| *c as f64 * p.powi(j as i32)).sum();
            assert!((direct - f.eval(p)).abs() < 1e-12);
        }
    }

    #[test]
    fn f_is_one_at_one_and_bounded() {
        for name in CodeName::ALL {
            let f = worst_case_poly(&polys(name), &WorstCaseOptions::default()).unwrap();
            assert_eq!(f.eval(1.0f64), 1.0);
            for k in 0..=100 {
                let v = f.eval(k as f64 / 100.0);
                assert!((-1e-12..=1.0 + 1e-12).contains(&v), "{name}");
            }
        }
    }

    #[test]
    fn thresholds() {
        let d = WorstCaseOptions::default();
        assert!((threshold(CodeName::FiveI, &d) - 0.868877).abs() < 1e-5);
        assert!((threshold(CodeName::Steane, &d) - 0.935404).abs() < 1e-5);
        for name in [CodeName::Shor, CodeName::NineA, CodeName::NineB] {
            assert!((threshold(name, &d) - 0.950149).abs() < 1e-5, "{name}");
        }
        assert!((threshold(CodeName::FiveIi, &d) - 0.964831).abs() < 1e-5);
        assert!((threshold(CodeName::FiveIi, &WorstCaseOptions::starts(&[Pauli::I, Pauli::Y])) - 0.868877).abs() < 1e-5);
        assert_eq!(threshold(CodeName::ThreeQubit, &d), 0.5);
    }

    #[test]
    fn threshold_in_f32() {
        let t: f32 = purification_threshold(&polys(CodeName::FiveI), &WorstCaseOptions::default(), 1e-6).unwrap().threshold;
        assert!((t - 0.868877).abs() < 1e-4);
    }

    #[test]
    fn above_threshold_the_map_improves() {
        for name in [CodeName::FiveI, CodeName::Steane, CodeName::Shor, CodeName::NineA, CodeName::ThreeQubit] {
            let polys = polys(name);
            let f = worst_case_poly(&polys, &WorstCaseOptions::default()).unwrap();
            let t = purification_threshold(&polys, &WorstCaseOptions::default(), 1e-12).unwrap().threshold;
            for k in 1..=100 {
                let p = t + (1.0 - t) * k as f64 / 101.0;
                assert!(f.eval(p) > p, "{name} at {p}");
            }
        }
    }

    #[test]
    fn five_ii_direct_map_never_improves_near_one() {
        let err = purification_threshold(&polys(CodeName::FiveIi), &WorstCaseOptions::starts(&[Pauli::Z]), 1e-9f64).unwrap();
        let f = branch_poly(&polys(CodeName::FiveIi), Pauli::Z, &Pauli::ALL).unwrap();
        assert_eq!(f.image, Pauli::I);
        assert!(f.eval(0.99) < 0.99);
        assert!((f.eval(err.threshold) - 0.868877).abs() < 1e-5);
        assert!(solve_crossing(|p: f64| f.eval(p) - p, 1e-9).is_err());
    }

    #[test]
    fn fixed_points() {
        for name in [CodeName::ThreeQubit, CodeName::Steane, CodeName::FiveI, CodeName::NineA, CodeName::NineB] {
            let polys = polys(name);
            for l in Pauli::ALL {
                let p: PauliParams = PauliChannelParams::pure(l);
                assert_eq!(eval_polys(&polys, &p), p, "{name} {l}");
            }
        }
        let shor = polys(CodeName::Shor);
        assert_eq!(eval_polys(&shor, &PauliParams::pure(Pauli::X)), PauliParams::pure(Pauli::Z));
        assert_eq!(eval_polys(&shor, &PauliParams::pure(Pauli::Z)), PauliParams::pure(Pauli::X));
        let five = polys(CodeName::FiveIi);
        assert_eq!(eval_polys(&five, &PauliParams::pure(Pauli::Z)), PauliParams::pure(Pauli::I));
        assert_eq!(eval_polys(&five, &PauliParams::pure(Pauli::X)), PauliParams::pure(Pauli::Y));
    }

    #[test]
    fn three_qubit_trajectories() {
        let polys = polys(CodeName::ThreeQubit);
        let up = iterate(&polys, &PauliParams::new(0.9, 0.1, 0.0, 0.0), 3);
        assert!(up.windows(2).all(|w| w[1].probs[0] > w[0].probs[0]));
        let c = classify(&polys, &PauliParams::new(0.3, 0.7, 0.0, 0.0), &ClassifyOptions::default()).unwrap();
        assert_eq!(c.label, ChannelType::X);
        let still = iterate(&polys, &PauliParams::pure(Pauli::I), 5);
        assert!(still.iter().all(|p| *p == PauliParams::pure(Pauli::I)));
    }

    #[test]
    fn classification_examples() {
        let opts = ClassifyOptions::default();
        let steane = polys(CodeName::Steane);
        assert_eq!(classify(&steane, &PauliParams::depolarizing(0.99), &opts).unwrap().label, ChannelType::I);
        let low = classify(&steane, &PauliParams::depolarizing(0.80), &opts).unwrap();
        assert_eq!(low.label, ChannelType::T);
        assert!((low.trajectory.last().unwrap().probs[0] - 0.25).abs() < 1e-9);
        let short = ClassifyOptions { tol: 1e-9, max_levels: 2 };
        let cut = classify(&steane, &PauliParams::depolarizing(0.9), &short).unwrap();
        assert_eq!((cut.label, cut.trajectory.len()), (ChannelType::T, 3));

        let five = polys(CodeName::FiveIi);
        let r = 0.02 / 3.0;
        assert_eq!(classify(&five, &PauliParams::new(r, r, r, 0.98), &opts).unwrap().label, ChannelType::I);
        assert_eq!(classify(&five, &PauliParams::new(r, 0.98, r, r), &opts).unwrap().label, ChannelType::Y);

        let shor = polys(CodeName::Shor);
        let c = classify(&shor, &PauliParams::new(0.05, 0.02, 0.03, 0.90), &opts).unwrap();
        assert_eq!(c.label, ChannelType::X);
        assert_eq!(c.oscillation, Some((ChannelType::X, ChannelType::Z)));
        assert_eq!(c.trajectory[1].dominant(), Pauli::X);
        assert_eq!(c.trajectory[2].dominant(), Pauli::Z);
    }

    #[test]
    fn uniform_never_purifies() {
        for name in CodeName::ALL {
            let c = classify(&polys(name), &PauliParams::uniform(), &ClassifyOptions::default()).unwrap();
            assert_eq!(c.label, ChannelType::T, "{name}");
        }
    }

    #[test]
    fn classify_rejects_bad_options() {
        let p = polys(CodeName::FiveI);
        let bad = ClassifyOptions { tol: 0.7, max_levels: 3 };
        assert!(classify(&p, &PauliParams::uniform(), &bad).is_err());
        let bad = ClassifyOptions { tol: 1e-9, max_levels: 0 };
        assert!(classify(&p, &PauliParams::uniform(), &bad).is_err());
        assert!(classify(&p, &PauliParams::new(0.5, 0.6, 0.0, 0.0), &ClassifyOptions::default()).is_err());
    }

    #[test]
    fn grid_parsing() {
        assert_eq!("simplex:4".parse::<GridSpec>().unwrap().points().len(), 35);
        let g: GridSpec = "depol:0.9:1:11".parse().unwrap();
        let pts = g.points();
        assert_eq!(pts.len(), 11);
        assert!((pts[10].probs[0] - 1.0).abs() < 1e-15);
        let g: GridSpec = "dominant:Z:0.5:1:3".parse().unwrap();
        assert_eq!(g.points()[0].dominant(), Pauli::Z);
        for bad in ["simplex:0", "depol:0.9:1.2:3", "dominant:Q:0:1:2", "line:1"] {
            assert!(bad.parse::<GridSpec>().is_err(), "{bad}");
        }
    }

    fn transversal_action(name: CodeName, p: Pauli) -> Option<Pauli> {
        let code = get_code(name);
        crate::logical_action(code, &crate::PauliString::uniform(code.n, p)).ok()
    }

    fn arb_channel() -> impl Strategy<Value = PauliParams> {
        (0usize..4, 0.9f64..1.0, 0.0f64..1.0, 0.0f64..1.0).prop_map(|(d, w, a, b)| {
            let r = 1.0 - w;
            let mut rest = [a, b, 1.0];
            let s: f64 = rest.iter().sum();
            for v in &mut rest {
                *v *= r / s;
            }
            let mut probs = [0.0; 4];
            let mut it = rest.iter();
            for (i, slot) in probs.iter_mut().enumerate() {
                *slot = if i == d { w } else { *it.next().unwrap() };
            }
            PauliChannelParams { probs }
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn classification_commutes_with_transversal_shift(p in arb_channel(), code in 0usize..4, shift in 1usize..4) {
            let name = [CodeName::Steane, CodeName::FiveI, CodeName::NineA, CodeName::NineB][code];
            let shift = Pauli::ALL[shift];
            let l = transversal_action(name, shift).unwrap();
            prop_assert_eq!(l, shift);
            let polys = polys(name);
            let a = iterate(&polys, &p, 4);
            let b = iterate(&polys, &p.shifted(shift), 4);
            for (x, y) in a.iter().zip(&b) {
                prop_assert!(x.shifted(l).max_abs_diff(y) < 1e-12);
            }
            // Labels are only compared when the start purifies: mixed fixed
            // points are unstable, so rounding decides where they drift.
            let opts = ClassifyOptions::default();
            let a = classify(&polys, &p, &opts).unwrap();
            if let Some(x) = a.label.as_pauli() {
                let b = classify(&polys, &p.shifted(shift), &opts).unwrap();
                prop_assert_eq!(ChannelType::from_pauli(x.compose(l)), b.label);
            }
        }

        #[test]
        fn concentrated_residual_is_the_minimizer(w in 0.85f64..1.0, a in 0.0f64..1.0, b in 0.0f64..1.0, code in 0usize..5) {
            let name = [CodeName::FiveI, CodeName::Steane, CodeName::Shor, CodeName::NineA, CodeName::NineB][code];
            let polys = polys(name);
            let f = worst_case_poly(&polys, &WorstCaseOptions::default()).unwrap();
            let total = a + b + 1.0;
            let r = 1.0 - w;
            let p = PauliParams::new(w, r * a / total, r * b / total, r / total);
            let out = eval_polys(&polys, &p);
            prop_assert!(out.probs[0] >= f.eval(w) - 1e-12);
        }
    }
}
