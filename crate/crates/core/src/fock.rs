//! Truncated two-mode Fock space and the interferometer's unitary pieces.
//!
//! A [`TwoModeState`] stores amplitudes `psi(n_a, n_b)` for every
//! `n_a + n_b <= cutoff`, grouped into blocks of fixed total photon number.
//! Passive optics never couple different blocks, so a 50:50 beam splitter is a
//! list of `(N + 1) x (N + 1)` unitaries and photon-number conservation holds
//! by construction.

use std::fmt::Write as _;
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::states::DiagonalCoeffs;

/// Amplitudes smaller than this are flushed to zero.
pub const FLUSH_THRESHOLD: f64 = 1e-300;

/// Rounding slack allowed on either side of the declared norm range.
pub const NORM_SLACK: f64 = 1e-12;

fn flush(z: Complex64) -> Complex64 {
    if z.norm_sqr() < FLUSH_THRESHOLD * FLUSH_THRESHOLD {
        Complex64::new(0.0, 0.0)
    } else {
        z
    }
}

/// Which output mode to look at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    A,
    B,
}

/// A pure state of two bosonic modes truncated at a total photon number.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeState {
    cutoff: usize,
    /// `blocks[n][a]` is the amplitude of `|a, n - a>`.
    blocks: Vec<Vec<Complex64>>,
    tail_mass_bound: f64,
}

impl TwoModeState {
    /// All-zero amplitudes; only reachable through the checked constructors.
    fn zeros(cutoff: usize, tail_mass_bound: f64) -> Self {
        let blocks = (0..=cutoff)
            .map(|n| vec![Complex64::new(0.0, 0.0); n + 1])
            .collect();
        Self {
            cutoff,
            blocks,
            tail_mass_bound,
        }
    }

    fn validated(mut self) -> Result<Self> {
        for block in &mut self.blocks {
            for z in block.iter_mut() {
                *z = flush(*z);
            }
        }
        let norm = self.norm_sqr();
        let bound = self.tail_mass_bound;
        if !(bound >= 0.0) || !(norm >= 1.0 - bound - NORM_SLACK) || norm > 1.0 + NORM_SLACK {
            return Err(Error::NotNormalized {
                norm,
                tail_bound: bound,
            });
        }
        Ok(self)
    }

    /// Builds a state from `((n_a, n_b), amplitude)` pairs; unspecified
    /// entries are zero. The squared norm must lie in `[1 - tail_mass_bound, 1]`
    /// up to [`NORM_SLACK`].
    pub fn from_amplitudes<I>(cutoff: usize, entries: I, tail_mass_bound: f64) -> Result<Self>
    where
        I: IntoIterator<Item = ((usize, usize), Complex64)>,
    {
        let mut state = Self::zeros(cutoff, tail_mass_bound);
        for ((na, nb), amp) in entries {
            let total = na + nb;
            if total > cutoff {
                return Err(Error::ExceedsCutoff {
                    requested: total,
                    cutoff,
                });
            }
            state.blocks[total][na] += amp;
        }
        state.validated()
    }

    /// `|n_a>|n_b>` in the smallest truncation that holds it.
    pub fn fock(na: usize, nb: usize) -> Self {
        Self::fock_with_cutoff(na, nb, na + nb).expect("cutoff fits by construction")
    }

    pub fn fock_with_cutoff(na: usize, nb: usize, cutoff: usize) -> Result<Self> {
        Self::from_amplitudes(cutoff, [((na, nb), Complex64::new(1.0, 0.0))], 0.0)
    }

    pub fn vacuum() -> Self {
        Self::fock(0, 0)
    }

    /// Product of two single-mode amplitude sequences, restricted to
    /// `n_a + n_b <= cutoff`. The norm is checked against `tail_mass_bound`.
    pub fn product(
        mode_a: &[Complex64],
        mode_b: &[Complex64],
        cutoff: usize,
        tail_mass_bound: f64,
    ) -> Result<Self> {
        let mut state = Self::zeros(cutoff, tail_mass_bound);
        for (n, block) in state.blocks.iter_mut().enumerate() {
            for (na, z) in block.iter_mut().enumerate() {
                let nb = n - na;
                if let (Some(a), Some(b)) = (mode_a.get(na), mode_b.get(nb)) {
                    *z = a * b;
                }
            }
        }
        state.validated()
    }

    /// Maximum total photon number retained (and hence per-mode maximum).
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn tail_mass_bound(&self) -> f64 {
        self.tail_mass_bound
    }

    /// Amplitude of `|n_a, n_b>`; zero outside the truncation.
    pub fn amplitude(&self, na: usize, nb: usize) -> Complex64 {
        self.blocks
            .get(na + nb)
            .map_or(Complex64::new(0.0, 0.0), |block| block[na])
    }

    /// Amplitudes with total photon number `n`, indexed by the mode-a count.
    pub fn block(&self, n: usize) -> Option<&[Complex64]> {
        self.blocks.get(n).map(Vec::as_slice)
    }

    /// Iterates `((n_a, n_b), amplitude)` over the whole truncation.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), Complex64)> + '_ {
        self.blocks.iter().enumerate().flat_map(|(n, block)| {
            block
                .iter()
                .enumerate()
                .map(move |(na, &z)| ((na, n - na), z))
        })
    }

    pub fn norm_sqr(&self) -> f64 {
        self.blocks.iter().flatten().map(|z| z.norm_sqr()).sum()
    }

    /// Probability held in each total-photon-number block.
    pub fn block_masses(&self) -> Vec<f64> {
        self.blocks
            .iter()
            .map(|b| b.iter().map(|z| z.norm_sqr()).sum())
            .collect()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.cutoff != other.cutoff {
            return Err(Error::CutoffMismatch {
                left: self.cutoff,
                right: other.cutoff,
            });
        }
        Ok(self
            .blocks
            .iter()
            .flatten()
            .zip(other.blocks.iter().flatten())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|| a b |self> - zeta |self> ||`, with `a b` the two-mode lowering
    /// product. Amplitudes beyond the cutoff count as zero, so the residual
    /// includes the truncation edge.
    pub fn pair_lowering_residual(&self, zeta: Complex64) -> f64 {
        let mut sum = 0.0;
        for (n, block) in self.blocks.iter().enumerate() {
            for (na, &z) in block.iter().enumerate() {
                let nb = n - na;
                // (a b psi)(na, nb) = sqrt((na + 1)(nb + 1)) psi(na + 1, nb + 1)
                let lowered = self
                    .blocks
                    .get(n + 2)
                    .map_or(Complex64::new(0.0, 0.0), |next| next[na + 1])
                    * (((na + 1) * (nb + 1)) as f64).sqrt();
                sum += (lowered - zeta * z).norm_sqr();
            }
        }
        sum.sqrt()
    }

    fn map_blocks(&self, f: impl Fn(usize, &[Complex64]) -> Vec<Complex64>) -> Self {
        let blocks = self
            .blocks
            .iter()
            .enumerate()
            .map(|(n, b)| f(n, b).into_iter().map(flush).collect())
            .collect();
        Self {
            cutoff: self.cutoff,
            blocks,
            tail_mass_bound: self.tail_mass_bound,
        }
    }
}

/// Twin-Fock superposition `sum_N C_N |N>|N>`.
///
/// The truncation is `2 K` for coefficients `C_0..C_K`, which is exactly the
/// subspace a beam splitter can reach from the diagonal.
pub fn from_diagonal(coeffs: &DiagonalCoeffs) -> Result<TwoModeState> {
    let c = coeffs.coefficients();
    if c.is_empty() {
        return Err(Error::EmptyCoefficients);
    }
    let k = c.len() - 1;
    TwoModeState::from_amplitudes(
        2 * k,
        c.iter().enumerate().map(|(n, &z)| ((n, n), z)),
        coeffs.tail_mass_bound(),
    )
}

/// The two 50:50 beam-splitter conventions of the interferometer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BeamSplitterKind {
    /// `a' = (a + b)/sqrt2`, `b' = (b - a)/sqrt2`: no phase on reflection.
    First,
    /// `a'' = (a' + i b')/sqrt2`, `b'' = (i a' + b')/sqrt2`: pi/2 on reflection.
    Second,
}

impl BeamSplitterKind {
    /// Mode transformation `out_i = sum_j M[i][j] in_j` on annihilators.
    pub fn mode_matrix(self) -> [[Complex64; 2]; 2] {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let r = |x: f64| Complex64::new(x * s, 0.0);
        let i = Complex64::new(0.0, s);
        match self {
            Self::First => [[r(1.0), r(1.0)], [r(-1.0), r(1.0)]],
            Self::Second => [[r(1.0), i], [i, r(1.0)]],
        }
    }

    /// Shared, lazily grown block cache for this kind.
    pub fn splitter(self) -> &'static BeamSplitter {
        static FIRST: OnceLock<BeamSplitter> = OnceLock::new();
        static SECOND: OnceLock<BeamSplitter> = OnceLock::new();
        let cell = match self {
            Self::First => &FIRST,
            Self::Second => &SECOND,
        };
        cell.get_or_init(|| BeamSplitter::from_mode_matrix(self.mode_matrix()))
    }
}

/// Fock-basis matrix of one total-photon-number block, column-major:
/// column `m` is the image of `|m, N - m>`, row `p` the amplitude on
/// `|p, N - p>`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockMatrix {
    total: usize,
    entries: Vec<Complex64>,
}

impl BlockMatrix {
    pub fn total(&self) -> usize {
        self.total
    }

    pub fn dim(&self) -> usize {
        self.total + 1
    }

    pub fn column(&self, m: usize) -> &[Complex64] {
        let d = self.dim();
        &self.entries[m * d..(m + 1) * d]
    }

    pub fn get(&self, p: usize, m: usize) -> Complex64 {
        self.column(m)[p]
    }

    fn apply(&self, input: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (m, &amp) in input.iter().enumerate() {
            if amp == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (o, &u) in out.iter_mut().zip(self.column(m)) {
                *o += u * amp;
            }
        }
        out
    }

    /// Block `N + 1` from block `N`.
    ///
    /// Input creation operators map as `a_in^+ -> M00 a^+ + M10 b^+` and
    /// `b_in^+ -> M01 a^+ + M11 b^+`, so `U|m, n>` is `U|m - 1, n>` (or
    /// `U|m, n - 1>`) hit by one creation operator and divided by `sqrt(m)`
    /// (or `sqrt(n)`). Growing along the larger of `m`, `n` keeps the
    /// divisor at least `sqrt((N + 1)/2)`.
    fn next(&self, mode: &[[Complex64; 2]; 2]) -> Self {
        let total = self.total + 1;
        let d = total + 1;
        let mut entries = vec![Complex64::new(0.0, 0.0); d * d];
        for m in 0..=total {
            let n = total - m;
            let (src, ca, cb, div) = if m >= n {
                (self.column(m - 1), mode[0][0], mode[1][0], m)
            } else {
                (self.column(m), mode[0][1], mode[1][1], n)
            };
            let scale = 1.0 / (div as f64).sqrt();
            let col = &mut entries[m * d..(m + 1) * d];
            for (p, z) in col.iter_mut().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                if p >= 1 {
                    acc += ca * (p as f64).sqrt() * src[p - 1];
                }
                if p < total {
                    acc += cb * ((total - p) as f64).sqrt() * src[p];
                }
                *z = flush(acc * scale);
            }
        }
        Self { total, entries }
    }
}

/// Blocks up to this total photon number are kept in the shared cache;
/// larger ones are regenerated on every application.
const MAX_CACHED_TOTAL: usize = 160;

/// A two-mode passive unitary in block form, built once and shared.
///
/// The cache only grows; readers take a snapshot of the `Arc`ed blocks.
#[derive(Debug)]
pub struct BeamSplitter {
    mode: [[Complex64; 2]; 2],
    cache: RwLock<Vec<Arc<BlockMatrix>>>,
}

impl BeamSplitter {
    /// `mode` must be a 2x2 unitary acting on annihilation operators.
    pub fn from_mode_matrix(mode: [[Complex64; 2]; 2]) -> Self {
        let vacuum = BlockMatrix {
            total: 0,
            entries: vec![Complex64::new(1.0, 0.0)],
        };
        Self {
            mode,
            cache: RwLock::new(vec![Arc::new(vacuum)]),
        }
    }

    pub fn mode_matrix(&self) -> [[Complex64; 2]; 2] {
        self.mode
    }

    /// Cached blocks `0..=max_total.min(MAX_CACHED_TOTAL)`.
    fn cached_blocks(&self, max_total: usize) -> Vec<Arc<BlockMatrix>> {
        let want = max_total.min(MAX_CACHED_TOTAL);
        {
            let cache = self.cache.read().expect("beam splitter cache poisoned");
            if cache.len() > want {
                return cache[..=want].to_vec();
            }
        }
        let mut cache = self.cache.write().expect("beam splitter cache poisoned");
        while cache.len() <= want {
            let next = cache
                .last()
                .expect("cache starts non-empty")
                .next(&self.mode);
            cache.push(Arc::new(next));
        }
        cache[..=want].to_vec()
    }

    /// The matrix of block `total`.
    pub fn block(&self, total: usize) -> BlockMatrix {
        let cached = self.cached_blocks(total);
        let mut last = cached
            .last()
            .expect("at least the vacuum block")
            .as_ref()
            .clone();
        while last.total < total {
            last = last.next(&self.mode);
        }
        last
    }

    pub fn apply(&self, state: &TwoModeState) -> TwoModeState {
        let cached = self.cached_blocks(state.cutoff);
        let mut out = Vec::with_capacity(state.cutoff + 1);
        for (block, input) in cached.iter().zip(&state.blocks) {
            out.push(block.apply(input));
        }
        if state.cutoff > MAX_CACHED_TOTAL {
            let mut current = cached.last().expect("non-empty").as_ref().clone();
            for input in &state.blocks[MAX_CACHED_TOTAL + 1..] {
                current = current.next(&self.mode);
                out.push(current.apply(input));
            }
        }
        TwoModeState {
            cutoff: state.cutoff,
            blocks: out,
            tail_mass_bound: state.tail_mass_bound,
        }
    }
}

/// Applies the Fock-space unitary of a 50:50 beam splitter.
pub fn apply_beam_splitter(state: &TwoModeState, kind: BeamSplitterKind) -> TwoModeState {
    kind.splitter().apply(state)
}

/// `psi(n_a, n_b) -> exp(i phi n_b) psi(n_a, n_b)`: phase shift in arm b.
pub fn apply_phase(state: &TwoModeState, phi: f64) -> TwoModeState {
    state.map_blocks(|n, block| {
        block
            .iter()
            .enumerate()
            .map(|(na, z)| z * Complex64::from_polar(1.0, phi * (n - na) as f64))
            .collect()
    })
}

fn parity_sign(n: usize) -> f64 {
    if n.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `<(-1)^{n_b}>` normalised by the captured probability.
pub fn parity_b(state: &TwoModeState) -> f64 {
    let mut weighted = 0.0;
    let mut total = 0.0;
    for ((_, nb), z) in state.iter() {
        let p = z.norm_sqr();
        weighted += parity_sign(nb) * p;
        total += p;
    }
    weighted / total
}

/// `<psi| (-1)^{n_b} |psi>` as a complex inner product, unnormalised. Its
/// imaginary part must vanish; exposed so that can be checked.
pub fn parity_b_inner(state: &TwoModeState) -> Complex64 {
    state
        .iter()
        .map(|((_, nb), z)| z.conj() * (z * parity_sign(nb)))
        .sum()
}

/// Joint photon-number distribution `P(n1, n2)` on a square grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointDistribution {
    cutoff: usize,
    /// Row-major `values[n1 * (cutoff + 1) + n2]`.
    values: Vec<f64>,
    tail_mass_bound: f64,
}

impl JointDistribution {
    pub fn zeros(cutoff: usize, tail_mass_bound: f64) -> Self {
        Self {
            cutoff,
            values: vec![0.0; (cutoff + 1) * (cutoff + 1)],
            tail_mass_bound,
        }
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn tail_mass_bound(&self) -> f64 {
        self.tail_mass_bound
    }

    pub fn get(&self, n1: usize, n2: usize) -> f64 {
        if n1 > self.cutoff || n2 > self.cutoff {
            return 0.0;
        }
        self.values[n1 * (self.cutoff + 1) + n2]
    }

    /// Panics outside the grid. Small negative rounding is clamped to zero.
    pub fn set(&mut self, n1: usize, n2: usize, p: f64) {
        assert!(
            n1 <= self.cutoff && n2 <= self.cutoff,
            "({n1}, {n2}) outside grid"
        );
        self.values[n1 * (self.cutoff + 1) + n2] = p.max(0.0);
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Entry with the largest probability; ties resolve to the first in
    /// row-major order.
    pub fn argmax(&self) -> (usize, usize) {
        let d = self.cutoff + 1;
        let mut best = 0;
        for (i, &v) in self.values.iter().enumerate() {
            if v > self.values[best] {
                best = i;
            }
        }
        (best / d, best % d)
    }

    /// Marginal of mode 1 (`n1`) or mode 2 (`n2`).
    pub fn marginal(&self, mode: Mode) -> Vec<f64> {
        let d = self.cutoff + 1;
        let mut out = vec![0.0; d];
        for n1 in 0..d {
            for n2 in 0..d {
                let p = self.values[n1 * d + n2];
                match mode {
                    Mode::A => out[n1] += p,
                    Mode::B => out[n2] += p,
                }
            }
        }
        out
    }

    /// Largest absolute entrywise difference; grids of different size are
    /// compared with zero padding.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let c = self.cutoff.max(other.cutoff);
        let mut worst: f64 = 0.0;
        for n1 in 0..=c {
            for n2 in 0..=c {
                worst = worst.max((self.get(n1, n2) - other.get(n1, n2)).abs());
            }
        }
        worst
    }

    /// `n1,n2,p` rows over the full square grid, 17 significant digits, LF
    /// line endings.
    pub fn to_csv(&self) -> String {
        let d = self.cutoff + 1;
        let mut out = String::with_capacity(32 * d * d + 8);
        out.push_str("n1,n2,p\n");
        for n1 in 0..d {
            for n2 in 0..d {
                let _ = writeln!(out, "{n1},{n2},{:.16e}", self.values[n1 * d + n2]);
            }
        }
        out
    }
}

/// `P(n1, n2) = |psi(n1, n2)|^2`.
pub fn joint_distribution(state: &TwoModeState) -> JointDistribution {
    let mut dist = JointDistribution::zeros(state.cutoff, state.tail_mass_bound);
    for ((na, nb), z) in state.iter() {
        dist.set(na, nb, z.norm_sqr());
    }
    dist
}

/// Marginal photon-number statistics of one mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeStats {
    pub mean: f64,
    pub variance: f64,
    /// `variance / mean - 1`
    pub mandel_q: f64,
}

/// Mean, variance and Mandel `Q` of one mode's marginal distribution.
pub fn mode_stats(state: &TwoModeState, mode: Mode) -> Result<ModeStats> {
    let (mut p0, mut p1, mut p2) = (0.0, 0.0, 0.0);
    for ((na, nb), z) in state.iter() {
        let p = z.norm_sqr();
        let n = match mode {
            Mode::A => na,
            Mode::B => nb,
        } as f64;
        p0 += p;
        p1 += p * n;
        p2 += p * n * n;
    }
    let mean = p1 / p0;
    if mean <= 0.0 {
        return Err(Error::UndefinedMandelQ);
    }
    let variance = p2 / p0 - mean * mean;
    Ok(ModeStats {
        mean,
        variance,
        mandel_q: variance / mean - 1.0,
    })
}

/// `|<s1|s2>|^2`.
pub fn fidelity(s1: &TwoModeState, s2: &TwoModeState) -> Result<f64> {
    Ok(s1.inner(s2)?.norm_sqr())
}
