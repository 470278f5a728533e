//! Closed-form interferometer observables.
//!
//! For a twin-Fock superposition `sum C_N |N>|N>` sent through the
//! interferometer, the parity of output mode b is the `|C_N|^2`-weighted
//! average of `P_N(cos 2 phi)`. Everything here follows from that and from
//! the arcsine amplitudes produced by the first beam splitter.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::fock::JointDistribution;
use crate::special_fn::{ln_binomial, LegendreSeq};
use crate::states::DiagonalCoeffs;

/// Amplitude `A_k^N` of `|2k, 2N - 2k>` after the first beam splitter acts
/// on `|N>|N>`: `2^-N (-1)^(N-k) [C(2k, k) C(2N - 2k, N - k)]^(1/2)`.
pub fn arcsine_coeff(n: u64, k: u64) -> Result<f64> {
    let magnitude = (0.5 * arcsine_ln_weight(n, k)?).exp();
    Ok(if (n - k).is_multiple_of(2) {
        magnitude
    } else {
        -magnitude
    })
}

fn arcsine_ln_weight(n: u64, k: u64) -> Result<f64> {
    if k > n {
        return Err(Error::IndexExceedsOrder { n, k });
    }
    Ok(ln_binomial(2 * k, k)? + ln_binomial(2 * (n - k), n - k)?
        - 2.0 * n as f64 * std::f64::consts::LN_2)
}

/// Discrete arcsine law `P(2k, 2N - 2k) = 4^-N C(2k, k) C(2N - 2k, N - k)`.
pub fn arcsine_joint(n: u64, k: u64) -> Result<f64> {
    Ok(arcsine_ln_weight(n, k)?.exp())
}

/// Parity expectation and its slope in `phi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParityResult {
    pub value: f64,
    pub derivative_wrt_phi: f64,
    /// `1 - value`, kept separately because it is tiny near `phi = 0`.
    pub complement: f64,
}

fn legendre_seq_at(phi: f64) -> LegendreSeq {
    let x = (2.0 * phi).cos().clamp(-1.0, 1.0);
    let s = phi.sin();
    LegendreSeq::with_complement(x, 2.0 * s * s).expect("x clamped to [-1, 1]")
}

/// `<Pi_b> = P_N(cos 2 phi)` for the input `|N>|N>`.
pub fn parity_twin_fock(n: usize, phi: f64) -> ParityResult {
    let p = legendre_seq_at(phi)
        .nth(n)
        .expect("LegendreSeq is infinite");
    ParityResult {
        value: p.value,
        derivative_wrt_phi: -2.0 * (2.0 * phi).sin() * p.derivative,
        complement: p.complement,
    }
}

/// `<Pi_b> = sum |C_N|^2 P_N(cos 2 phi)`, normalised by the retained mass.
///
/// The truncated sum differs from the untruncated one by at most about
/// twice the coefficients' tail bound since `|P_N| <= 1`.
pub fn parity_superposition(coeffs: &DiagonalCoeffs, phi: f64) -> ParityResult {
    let (mut mass, mut value, mut slope, mut complement) = (0.0, 0.0, 0.0, 0.0);
    for (w, p) in coeffs.weights().zip(legendre_seq_at(phi)) {
        mass += w;
        if w != 0.0 {
            value += w * p.value;
            slope += w * p.derivative;
            complement += w * p.complement;
        }
    }
    ParityResult {
        value: value / mass,
        derivative_wrt_phi: -2.0 * (2.0 * phi).sin() * slope / mass,
        complement: complement / mass,
    }
}

/// N00N-state parity: `(-1)^(N/2) cos(N phi + Phi)` for even `N`,
/// `(-1)^((N+1)/2) sin(N phi + Phi)` for odd `N`.
pub fn parity_noon(n: usize, big_phi: f64, phi: f64) -> Result<f64> {
    if n == 0 {
        return Err(invalid("n", "a N00N state needs at least one photon"));
    }
    let arg = n as f64 * phi + big_phi;
    Ok(if n.is_multiple_of(2) {
        let sign = if (n / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
        sign * arg.cos()
    } else {
        let sign = if n.div_ceil(2).is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        sign * arg.sin()
    })
}

/// Entangled-coherent-state parity with `Phi = 0`, `theta = 3 pi / 2`:
/// `exp(-N̄ (1 - cos phi)) cos(N̄ sin phi) / (1 + exp(-N̄))`.
pub fn parity_ecs(n_bar: f64, phi: f64) -> Result<f64> {
    if !(n_bar >= 0.0) || !n_bar.is_finite() {
        return Err(invalid("n_bar", format!("{n_bar} must be finite and >= 0")));
    }
    let envelope = (-n_bar * (1.0 - phi.cos())).exp() / (1.0 + (-n_bar).exp());
    Ok(envelope * (n_bar * phi.sin()).cos())
}

/// Phase uncertainty from error propagation on the parity signal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseUncertainty {
    /// `delta_pi / |derivative|`
    pub delta_phi: f64,
    /// `sqrt(1 - <Pi>^2)`, using `Pi^2 = 1`
    pub delta_pi: f64,
    pub derivative: f64,
    pub parity: f64,
}

/// Smallest parity slope treated as non-zero.
const MIN_SLOPE: f64 = 1e-300;

/// `sqrt(1 - <Pi>^2)` written as `sqrt(c (2 - c))` with `c = 1 - <Pi>`.
fn parity_spread(p: &ParityResult) -> f64 {
    (p.complement * (2.0 - p.complement)).max(0.0).sqrt()
}

/// `delta_phi = sqrt(1 - <Pi>^2) / |d<Pi>/dphi|`. Undefined at `phi = 0`
/// (both numerator and denominator vanish) and at stationary points.
pub fn phase_uncertainty(coeffs: &DiagonalCoeffs, phi: f64) -> Result<PhaseUncertainty> {
    if phi == 0.0 || !phi.is_finite() {
        return Err(Error::DivergentUncertainty { phi });
    }
    let p = parity_superposition(coeffs, phi);
    let slope = p.derivative_wrt_phi.abs();
    if !(slope >= MIN_SLOPE) {
        return Err(Error::DivergentUncertainty { phi });
    }
    let delta_pi = parity_spread(&p);
    Ok(PhaseUncertainty {
        delta_phi: delta_pi / slope,
        delta_pi,
        derivative: p.derivative_wrt_phi,
        parity: p.value,
    })
}

/// `SNR = <Pi_b> / delta Pi_b`.
pub fn snr(coeffs: &DiagonalCoeffs, phi: f64) -> Result<f64> {
    if !phi.is_finite() {
        return Err(invalid("phi", "must be finite"));
    }
    let p = parity_superposition(coeffs, phi);
    let spread = parity_spread(&p);
    if phi == 0.0 || spread == 0.0 {
        return Err(Error::InfiniteSnr { phi });
    }
    Ok(p.value / spread)
}

/// Joint photon-number distribution before the first beam splitter:
/// `P(N, N) = |C_N|^2`, on the same `2K` grid as the post-splitter one.
pub fn joint_before_bs(coeffs: &DiagonalCoeffs) -> JointDistribution {
    let k = coeffs.cutoff();
    let mut dist = JointDistribution::zeros(2 * k, coeffs.tail_mass_bound());
    for (n, w) in coeffs.weights().enumerate() {
        dist.set(n, n, w);
    }
    dist
}

/// Joint distribution after the first beam splitter. Only even-even cells
/// are populated: `P(2k, 2m) = |C_{k+m}|^2 (A_k^{k+m})^2`.
pub fn joint_after_bs(coeffs: &DiagonalCoeffs) -> JointDistribution {
    let k_max = coeffs.cutoff();
    let mut dist = JointDistribution::zeros(2 * k_max, coeffs.tail_mass_bound());
    for (n, w) in coeffs.weights().enumerate() {
        if w == 0.0 {
            continue;
        }
        for k in 0..=n {
            let p = w * arcsine_joint(n as u64, k as u64).expect("k <= n");
            dist.set(2 * k, 2 * (n - k), p);
        }
    }
    dist
}

fn check_total(total_n: f64) -> Result<()> {
    if !(total_n > 0.0) || !total_n.is_finite() {
        return Err(invalid("total_n", format!("{total_n} must be positive")));
    }
    Ok(())
}

/// Standard quantum limit `1 / sqrt(total photons)`.
pub fn sql(total_n: f64) -> Result<f64> {
    check_total(total_n)?;
    Ok(1.0 / total_n.sqrt())
}

/// Heisenberg limit `1 / total photons`.
pub fn hl(total_n: f64) -> Result<f64> {
    check_total(total_n)?;
    Ok(1.0 / total_n)
}
