//! Brute-force verification path.
//!
//! States are pushed through the full interferometer in Fock space (first
//! beam splitter, phase on arm b, second beam splitter) and the parity of
//! mode b is read off the output amplitudes. Nothing here uses the Legendre
//! or arcsine closed forms, so agreement with [`crate::analytic`] is a real
//! cross-check. Explicit-coefficient Legendre sums used as references for
//! the recurrences also live here.

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::fock::{
    apply_beam_splitter, apply_phase, fidelity, from_diagonal, parity_b, parity_b_inner,
    BeamSplitter, BeamSplitterKind, TwoModeState,
};
use crate::states::{smsv_state, tmsvs_coeffs, tmsvs_cutoff_for, Sign, SqueezeParam};

/// Output state of the interferometer for input `input` and phase `phi`.
pub fn mzi_output(input: &TwoModeState, phi: f64) -> TwoModeState {
    let mid = apply_phase(&apply_beam_splitter(input, BeamSplitterKind::First), phi);
    apply_beam_splitter(&mid, BeamSplitterKind::Second)
}

/// Parity of output mode b after the full interferometer.
pub fn mzi_parity_numeric(input: &TwoModeState, phi: f64) -> f64 {
    parity_b(&mzi_output(input, phi))
}

/// `<Pi_b>` as a complex inner product over the output state.
pub fn mzi_parity_complex(input: &TwoModeState, phi: f64) -> Complex64 {
    parity_b_inner(&mzi_output(input, phi))
}

/// Same interferometer with caller-supplied beam splitters, for convention
/// checks.
pub fn mzi_parity_with(
    input: &TwoModeState,
    phi: f64,
    first: &BeamSplitter,
    second: &BeamSplitter,
) -> f64 {
    parity_b(&second.apply(&apply_phase(&first.apply(input), phi)))
}

/// Parity after only the phase shift and the second beam splitter, for
/// states (like N00N states) prepared directly inside the interferometer.
pub fn inner_stage_parity(inside: &TwoModeState, phi: f64) -> f64 {
    parity_b(&apply_beam_splitter(
        &apply_phase(inside, phi),
        BeamSplitterKind::Second,
    ))
}

/// Central-difference step used by the cross checks: `max(1e-5, phi/10)`,
/// capped at `1e-3`.
pub fn default_step(phi: f64) -> f64 {
    (phi.abs() / 10.0).clamp(1e-5, 1e-3)
}

/// `sqrt(1 - <Pi>^2) / |d<Pi>/dphi|` with the slope from a central
/// difference of the brute-force parity.
pub fn phase_uncertainty_numeric(input: &TwoModeState, phi: f64, h: f64) -> Result<f64> {
    if !(h > 0.0 && h <= 1e-3) {
        return Err(invalid("h", format!("step {h} must lie in (0, 1e-3]")));
    }
    let value = mzi_parity_numeric(input, phi);
    let slope =
        (mzi_parity_numeric(input, phi + h) - mzi_parity_numeric(input, phi - h)) / (2.0 * h);
    if !(slope.abs() >= 1e-10) {
        return Err(Error::DivergentUncertainty { phi });
    }
    Ok(((1.0 - value) * (1.0 + value)).max(0.0).sqrt() / slope.abs())
}

/// Fidelity between the first beam splitter's image of a TMSVS and the
/// product of single-mode squeezed vacua `|xi>_a |-xi>_b`.
pub fn disentanglement_check(xi: SqueezeParam, cutoff: usize) -> Result<f64> {
    let coeffs = tmsvs_coeffs(xi, cutoff)?;
    let split = apply_beam_splitter(&from_diagonal(&coeffs)?, BeamSplitterKind::First);
    let total = split.cutoff();
    let a = smsv_state(xi, Sign::Plus, total);
    let b = smsv_state(xi, Sign::Minus, total);
    // probability the product puts above total photon number 2K equals the
    // TMSVS tail, by number conservation
    let product = TwoModeState::product(&a, &b, total, coeffs.tail_mass_bound() + 1e-12)?;
    fidelity(&split, &product)
}

/// [`disentanglement_check`] at the smallest cutoff whose TMSVS tail is
/// below `tolerance`.
pub fn disentanglement_check_auto(xi: SqueezeParam, tolerance: f64) -> Result<f64> {
    disentanglement_check(xi, tmsvs_cutoff_for(xi, tolerance))
}

/// `P_n(x) = 2^-n sum_k (-1)^k C(n, k) C(2n - 2k, n) x^(n - 2k)`.
///
/// Cancellation limits this to moderate orders (about `n <= 20`).
pub fn legendre_explicit(n: usize, x: f64) -> f64 {
    legendre_explicit_terms(n)
        .map(|(c, p)| c * x.powi(p as i32))
        .sum()
}

/// Term-wise derivative of [`legendre_explicit`].
pub fn legendre_explicit_derivative(n: usize, x: f64) -> f64 {
    legendre_explicit_terms(n)
        .filter(|&(_, p)| p > 0)
        .map(|(c, p)| c * p as f64 * x.powi(p as i32 - 1))
        .sum()
}

/// `sum (1 + p) |c_p|`, bounding the magnitude of the terms summed by
/// [`legendre_explicit`] and its derivative on `[-1, 1]`, and hence the
/// scale of their rounding error.
pub fn legendre_explicit_condition(n: usize) -> f64 {
    legendre_explicit_terms(n)
        .map(|(c, p)| c.abs() * (1.0 + p as f64))
        .sum()
}

fn exact_binomial(n: u64, k: u64) -> u128 {
    let k = k.min(n - k);
    (0..k as u128).fold(1, |c, i| c * (n as u128 - i) / (i + 1))
}

fn legendre_explicit_terms(n: usize) -> impl Iterator<Item = (f64, usize)> {
    let scale = 0.5_f64.powi(n as i32);
    (0..=n / 2).map(move |k| {
        let coeff =
            exact_binomial(n as u64, k as u64) * exact_binomial(2 * (n - k) as u64, n as u64);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        (sign * coeff as f64 * scale, n - 2 * k)
    })
}

/// `I_v(x)` by plain summation of the power series, with no log-domain
/// scaling. Overflows above roughly `x = 700`.
pub fn bessel_i_naive(order: u32, x: f64) -> f64 {
    let nu = order as f64;
    let q = 0.25 * x * x;
    let mut term = (0.5 * x).powi(order as i32);
    let mut sum = term;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= q / (k * (k + nu));
        sum += term;
        if k > x && term <= 1e-18 * sum {
            break;
        }
    }
    sum
}
