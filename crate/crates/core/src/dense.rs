//! Dense simulation of encode / noise / decode-with-recovery for arbitrary
//! single-qubit channels.
//!
//! Decoding is the instrument `B_s = V† R_s Π_s`, where `V` is the encoding
//! isometry, `Π_s` the syndrome-`s` projector and `R_s` the table's
//! recovery. The rows of `B_s` are sparse (`Π_s R_s |ψ_i⟩` has the support
//! of a codeword), which keeps every step linear in the size of `ρ`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::codes::StabilizerCode;
use crate::effective::PauliChannelParams;
use crate::error::{Error, Result};
use crate::flow::{ChannelClass, ChannelType, ClassifyOptions};
use crate::pauli::{Pauli, PauliString};
use crate::recovery::CorrectionTable;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

const TP_TOL: f64 = 1e-10;
const MAX_QUBITS: usize = 9;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// 2×2 matrix of a single-qubit Pauli.
pub fn pauli_matrix(p: Pauli) -> CMatrix {
    let (o, z, i) = (c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0));
    let v = match p {
        Pauli::I => [o, z, z, o],
        Pauli::X => [z, o, o, z],
        Pauli::Y => [z, -i, i, z],
        Pauli::Z => [o, z, z, -o],
    };
    CMatrix::from_row_slice(2, 2, &v)
}

/// A CPTP map in Kraus form.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseChannel {
    dim: usize,
    kraus: Vec<CMatrix>,
}

/// Pauli transfer matrix `R_ij = ½ Tr[σ_i Λ(σ_j)]`.
pub type Ptm = [[f64; 4]; 4];

impl DenseChannel {
    /// Checks shapes and trace preservation.
    pub fn new(kraus: Vec<CMatrix>) -> Result<Self> {
        let dim = kraus.first().map(|k| k.nrows()).ok_or_else(|| Error::InvalidParams("no Kraus operators".into()))?;
        if kraus.iter().any(|k| k.nrows() != dim || k.ncols() != dim) {
            return Err(Error::InvalidParams("Kraus operators must be square and of equal size".into()));
        }
        let ch = Self { dim, kraus };
        let dev = ch.trace_deviation();
        if dev > TP_TOL {
            return Err(Error::NotTracePreserving(dev));
        }
        Ok(ch)
    }

    pub fn identity(dim: usize) -> Self {
        Self { dim, kraus: vec![CMatrix::identity(dim, dim)] }
    }

    pub fn unitary(p: Pauli) -> Self {
        Self { dim: 2, kraus: vec![pauli_matrix(p)] }
    }

    /// Kraus operators `√p_a σ_a`.
    pub fn pauli(params: &PauliChannelParams<f64>) -> Result<Self> {
        params.validate()?;
        let kraus = Pauli::ALL
            .iter()
            .filter(|l| *params.get(**l) > 0.0)
            .map(|l| pauli_matrix(*l) * c(params.get(*l).sqrt(), 0.0))
            .collect();
        Self::new(kraus)
    }

    pub fn depolarizing(f: f64) -> Result<Self> {
        Self::pauli(&PauliChannelParams::depolarizing(f))
    }

    pub fn amplitude_damping(gamma: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::InvalidParams(format!("gamma {gamma} outside [0, 1]")));
        }
        let z = c(0.0, 0.0);
        let k0 = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), z, z, c((1.0 - gamma).sqrt(), 0.0)]);
        let k1 = CMatrix::from_row_slice(2, 2, &[z, c(gamma.sqrt(), 0.0), z, z]);
        Self::new(vec![k0, k1])
    }

    /// Haar-random Stinespring isometry `C² → C² ⊗ C⁴`, split into four
    /// Kraus operators. Deterministic in `seed`.
    pub fn random(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut cols: Vec<Vec<C64>> = (0..2)
            .map(|_| (0..8).map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect())
            .collect();
        // Gram-Schmidt on Gaussian columns gives a Haar isometry.
        for j in 0..2 {
            for k in 0..j {
                let proj: C64 = cols[k].iter().zip(&cols[j]).map(|(a, b)| a.conj() * b).sum();
                let base = cols[k].clone();
                for (x, b) in cols[j].iter_mut().zip(&base) {
                    *x -= proj * b;
                }
            }
            let norm = cols[j].iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            for x in &mut cols[j] {
                *x /= norm;
            }
        }
        let kraus = (0..4).map(|e| CMatrix::from_fn(2, 2, |r, col| cols[col][2 * e + r])).collect();
        Self { dim: 2, kraus }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        self.kraus.iter().fold(CMatrix::zeros(self.dim, self.dim), |acc, k| acc + k * rho * k.adjoint())
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &DenseChannel) -> DenseChannel {
        let kraus = next.kraus.iter().flat_map(|b| self.kraus.iter().map(move |a| b * a)).collect();
        DenseChannel { dim: self.dim, kraus }
    }

    /// Largest entry of `Σ K†K − I`.
    pub fn trace_deviation(&self) -> f64 {
        let sum = self.kraus.iter().fold(CMatrix::zeros(self.dim, self.dim), |acc, k| acc + k.adjoint() * k);
        (sum - CMatrix::identity(self.dim, self.dim)).iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    /// `J = Σ_ab |a⟩⟨b| ⊗ Λ(|a⟩⟨b|)`, unnormalized.
    pub fn choi(&self) -> CMatrix {
        let d = self.dim;
        let mut j = CMatrix::zeros(d * d, d * d);
        for k in &self.kraus {
            // vec(K) with input index major: v[(a, r)] = K[r][a]
            let v = CMatrix::from_fn(d * d, 1, |idx, _| k[(idx % d, idx / d)]);
            j += &v * v.adjoint();
        }
        j
    }

    pub fn min_choi_eigenvalue(&self) -> f64 {
        SymmetricEigen::new(self.choi()).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Kraus operators from the eigendecomposition of a Choi matrix laid out
    /// as in [`DenseChannel::choi`].
    pub fn from_choi(choi: CMatrix, dim: usize) -> Result<Self> {
        let eig = SymmetricEigen::new(choi);
        let mut kraus = Vec::new();
        for (k, lambda) in eig.eigenvalues.iter().enumerate() {
            if *lambda < -TP_TOL {
                return Err(Error::InvalidParams(format!("Choi matrix has eigenvalue {lambda:e}")));
            }
            if *lambda <= 1e-15 {
                continue;
            }
            let v = eig.eigenvectors.column(k);
            let s = lambda.sqrt();
            kraus.push(CMatrix::from_fn(dim, dim, |r, a| v[a * dim + r] * s));
        }
        Self::new(kraus)
    }

    fn require_qubit(&self) -> Result<()> {
        if self.dim != 2 {
            return Err(Error::Dimension { expected: 2, found: self.dim });
        }
        Ok(())
    }

    pub fn ptm(&self) -> Result<Ptm> {
        self.require_qubit()?;
        let sigma: Vec<CMatrix> = Pauli::ALL.iter().map(|p| pauli_matrix(*p)).collect();
        let mut r = [[0.0; 4]; 4];
        for (j, sj) in sigma.iter().enumerate() {
            let out = self.apply(sj);
            for (i, si) in sigma.iter().enumerate() {
                r[i][j] = 0.5 * (si * &out).trace().re;
            }
        }
        Ok(r)
    }

    /// Superoperator on `(row bit, column bit)` pairs, index `2r + c`.
    fn superop(&self) -> [[C64; 4]; 4] {
        let mut s = [[c(0.0, 0.0); 4]; 4];
        for k in &self.kraus {
            for (out, row) in s.iter_mut().enumerate() {
                let (r, cc) = (out >> 1, out & 1);
                for (inp, slot) in row.iter_mut().enumerate() {
                    let (r2, c2) = (inp >> 1, inp & 1);
                    *slot += k[(r, r2)] * k[(cc, c2)].conj();
                }
            }
        }
        s
    }
}

/// Pauli channel with the same PTM diagonal.
pub fn pauli_twirl(ch: &DenseChannel) -> Result<PauliChannelParams<f64>> {
    let r = ch.ptm()?;
    let d = [r[0][0], r[1][1], r[2][2], r[3][3]];
    let walsh = [[1.0, 1.0, 1.0, 1.0], [1.0, 1.0, -1.0, -1.0], [1.0, -1.0, 1.0, -1.0], [1.0, -1.0, -1.0, 1.0]];
    let mut probs = [0.0; 4];
    for (k, w) in walsh.iter().enumerate() {
        let v = 0.25 * w.iter().zip(&d).map(|(a, b)| a * b).sum::<f64>();
        if v < -TP_TOL {
            return Err(Error::TwirlInconsistent { index: k + 1, value: v });
        }
        probs[k] = v.max(0.0);
    }
    Ok(PauliChannelParams { probs })
}

/// Identity weight of the twirl of `target† ∘ ch`.
pub fn channel_fidelity(ch: &DenseChannel, target: Pauli) -> Result<f64> {
    Ok(pauli_twirl(&ch.then(&DenseChannel::unitary(target)))?.probs[0])
}

/// Sparse rows of the decoding instrument for one code and table.
pub struct Decoder {
    n: usize,
    codewords: [Vec<C64>; 2],
    /// `branches[s][i]` = nonzero entries of `Π_s R_s |ψ_i⟩`.
    branches: Vec<[Vec<(usize, C64)>; 2]>,
}

fn dense_state(code: &StabilizerCode, l: usize) -> Vec<C64> {
    let s = if l == 0 { &code.logical_zero } else { &code.logical_one };
    s.to_f64().into_iter().map(|(re, im)| c(re, im)).collect()
}

fn apply_pauli(p: &PauliString, v: &[C64]) -> Vec<C64> {
    let units = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)];
    let mut out = vec![c(0.0, 0.0); v.len()];
    for (b, a) in v.iter().enumerate() {
        if a.norm_sqr() > 0.0 {
            let (b2, k) = p.apply_to_basis(b as u64);
            out[b2 as usize] += units[k as usize] * a;
        }
    }
    out
}

impl Decoder {
    pub fn new(code: &StabilizerCode, table: &CorrectionTable) -> Result<Self> {
        if code.n > MAX_QUBITS {
            return Err(Error::QubitCount { n: code.n, max: MAX_QUBITS });
        }
        if table.code() != code.name {
            return Err(Error::Table(format!("table built for {}, not {}", table.code(), code.name)));
        }
        let codewords = [dense_state(code, 0), dense_state(code, 1)];
        let mut branches = Vec::with_capacity(table.len());
        for (s, r) in table.iter(code) {
            let row = |psi: &[C64]| {
                let mut v = apply_pauli(r, psi);
                for (j, g) in code.generators.iter().enumerate() {
                    // (I ± g)/2 keeps the eigenvalue selected by bit j
                    let gv = apply_pauli(g, &v);
                    let sign = if s.bit(j) { -1.0 } else { 1.0 };
                    for (x, y) in v.iter_mut().zip(&gv) {
                        *x = (*x + y * sign) * 0.5;
                    }
                }
                v.into_iter().enumerate().filter(|(_, x)| x.norm_sqr() > 1e-30).collect::<Vec<_>>()
            };
            branches.push([row(&codewords[0]), row(&codewords[1])]);
        }
        Ok(Self { n: code.n, codewords, branches })
    }

    /// Largest entry of `Σ_s B_s† B_s − I`.
    pub fn instrument_deviation(&self) -> f64 {
        let d = 1usize << self.n;
        let mut sum = vec![c(0.0, 0.0); d * d];
        for pair in &self.branches {
            for row in pair {
                for (r, a) in row {
                    for (cc, b) in row {
                        sum[r * d + cc] += a * b.conj();
                    }
                }
            }
        }
        let mut dev: f64 = 0.0;
        for r in 0..d {
            for cc in 0..d {
                let target = if r == cc { 1.0 } else { 0.0 };
                dev = dev.max((sum[r * d + cc] - c(target, 0.0)).norm());
            }
        }
        dev
    }

    /// Logical channel when qubit `q` suffers `channels[q]`.
    pub fn effective(&self, channels: &[DenseChannel]) -> Result<DenseChannel> {
        if channels.len() != self.n {
            return Err(Error::Dimension { expected: self.n, found: channels.len() });
        }
        for ch in channels {
            ch.require_qubit()?;
        }
        let superops: Vec<[[C64; 4]; 4]> = channels.iter().map(DenseChannel::superop).collect();
        let d = 1usize << self.n;
        let mut choi = CMatrix::zeros(4, 4);
        for a in 0..2 {
            for b in 0..2 {
                let mut rho = vec![c(0.0, 0.0); d * d];
                for (r, x) in self.codewords[a].iter().enumerate() {
                    if x.norm_sqr() == 0.0 {
                        continue;
                    }
                    for (cc, y) in self.codewords[b].iter().enumerate() {
                        rho[r * d + cc] = x * y.conj();
                    }
                }
                for (q, s) in superops.iter().enumerate() {
                    apply_on_qubit(&mut rho, d, q, s);
                }
                for i in 0..2 {
                    for j in 0..2 {
                        let mut acc = c(0.0, 0.0);
                        for pair in &self.branches {
                            for (r, u) in &pair[i] {
                                let base = r * d;
                                for (cc, v) in &pair[j] {
                                    acc += u.conj() * rho[base + cc] * v;
                                }
                            }
                        }
                        choi[(a * 2 + i, b * 2 + j)] = acc;
                    }
                }
            }
        }
        DenseChannel::from_choi(trace_normalized(choi), 2)
    }
}

/// `(M ⊗ I) J (M ⊗ I)` with `M = T^{-1/2}` and `T = Tr_out J`. Exact
/// arithmetic gives `T = I`; without this, rounding in the trace grows by
/// roughly a factor `n` per concatenation level.
fn trace_normalized(choi: CMatrix) -> CMatrix {
    let t = CMatrix::from_fn(2, 2, |a, b| choi[(2 * a, 2 * b)] + choi[(2 * a + 1, 2 * b + 1)]);
    let eig = SymmetricEigen::new(t);
    let inv_sqrt = eig.eigenvalues.map(|l| c(1.0 / l.sqrt(), 0.0));
    let m = &eig.eigenvectors * CMatrix::from_diagonal(&inv_sqrt) * eig.eigenvectors.adjoint();
    let lift = m.kronecker(&CMatrix::identity(2, 2));
    &lift * choi * lift.adjoint()
}

fn apply_on_qubit(rho: &mut [C64], d: usize, q: usize, s: &[[C64; 4]; 4]) {
    let bit = 1usize << q;
    for r in (0..d).filter(|r| r & bit == 0) {
        for cc in (0..d).filter(|cc| cc & bit == 0) {
            let idx = [r * d + cc, r * d + cc + bit, (r + bit) * d + cc, (r + bit) * d + cc + bit];
            let v = idx.map(|i| rho[i]);
            for (o, row) in s.iter().enumerate() {
                rho[idx[o]] = row[0] * v[0] + row[1] * v[1] + row[2] * v[2] + row[3] * v[3];
            }
        }
    }
}

/// `Λ_eff(ρ) = Σ_s B_s ch^{⊗n}(V ρ V†) B_s†`.
pub fn effective_dense(code: &StabilizerCode, table: &CorrectionTable, ch: &DenseChannel) -> Result<DenseChannel> {
    Decoder::new(code, table)?.effective(&vec![ch.clone(); code.n])
}

/// As [`effective_dense`] with a separate channel per qubit.
pub fn effective_dense_per_qubit(code: &StabilizerCode, table: &CorrectionTable, channels: &[DenseChannel]) -> Result<DenseChannel> {
    Decoder::new(code, table)?.effective(channels)
}

#[derive(Clone, Debug, Serialize)]
pub struct Tomography {
    pub ptm: Ptm,
    pub twirled: PauliChannelParams<f64>,
    pub min_choi_eigenvalue: f64,
    pub trace_deviation: f64,
}

pub fn tomography(ch: &DenseChannel) -> Result<Tomography> {
    Ok(Tomography {
        ptm: ch.ptm()?,
        twirled: pauli_twirl(ch)?,
        min_choi_eigenvalue: ch.min_choi_eigenvalue(),
        trace_deviation: ch.trace_deviation(),
    })
}

/// Concatenation with the dense engine: each level feeds the previous
/// level's logical channel to every physical qubit. Labels are read from
/// the twirled channel; the trajectory holds the twirl at each level.
pub fn classify_dense(code: &StabilizerCode, table: &CorrectionTable, ch: &DenseChannel, opts: &ClassifyOptions) -> Result<ChannelClass<f64>> {
    if !(opts.tol > 0.0 && opts.tol < 0.5) || opts.max_levels == 0 {
        return Err(Error::InvalidParams("tol must lie in (0, 0.5) and max_levels be positive".into()));
    }
    let decoder = Decoder::new(code, table)?;
    let mut current = ch.clone();
    let mut trajectory = vec![pauli_twirl(&current)?];
    for level in 0..=opts.max_levels {
        let tw = trajectory[level].clone();
        if let Some(l) = Pauli::ALL.into_iter().find(|l| *tw.get(*l) >= 1.0 - opts.tol) {
            return Ok(ChannelClass { label: ChannelType::from_pauli(l), levels_to_converge: Some(level), trajectory, oscillation: None });
        }
        if level == opts.max_levels {
            break;
        }
        current = decoder.effective(&vec![current; code.n])?;
        let next = pauli_twirl(&current)?;
        let stationary = next.max_abs_diff(&tw) <= opts.tol;
        trajectory.push(next);
        if stationary {
            break;
        }
    }
    Ok(ChannelClass { label: ChannelType::T, levels_to_converge: None, trajectory, oscillation: None })
}
