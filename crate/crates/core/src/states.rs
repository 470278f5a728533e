//! Input-state families: twin-Fock, two-mode squeezed vacuum (TMSVS), pair
//! coherent states (PCS), single-mode squeezed vacuum and N00N states, plus
//! the maps between family parameters and mean photon number.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::fock::{TwoModeState, NORM_SLACK};
use crate::special_fn::{bessel_ratio_i1_i0, ln_bessel_i, ln_factorial};

/// Default tail tolerance for automatically sized truncations.
pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-12;

/// Retained coefficients must have decayed below this before the PCS
/// truncation is accepted.
const PCS_LAST_WEIGHT_LIMIT: f64 = 1e-16;

/// Which superposition a coefficient list represents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum StateFamily {
    TwinFock { n: usize },
    Tmsvs { xi: Complex64 },
    Pcs { zeta: Complex64 },
    Custom,
}

/// Coefficients `C_0..C_K` of `sum_N C_N |N>_a |N>_b`.
///
/// `sum |C_N|^2` lies in `[1 - tail_mass_bound, 1]` up to `1e-12` rounding slack, where the bound
/// covers the probability of the discarded `N > K` terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagonalCoeffs {
    c: Vec<Complex64>,
    family: StateFamily,
    tail_mass_bound: f64,
}

impl DiagonalCoeffs {
    pub fn new(c: Vec<Complex64>, family: StateFamily, tail_mass_bound: f64) -> Result<Self> {
        if c.is_empty() {
            return Err(Error::EmptyCoefficients);
        }
        let norm: f64 = c.iter().map(|z| z.norm_sqr()).sum();
        if !(tail_mass_bound >= 0.0)
            || !(norm >= 1.0 - tail_mass_bound - NORM_SLACK)
            || norm > 1.0 + NORM_SLACK
        {
            return Err(Error::NotNormalized {
                norm,
                tail_bound: tail_mass_bound,
            });
        }
        Ok(Self {
            c,
            family,
            tail_mass_bound,
        })
    }

    /// Arbitrary user-supplied coefficients.
    pub fn custom(c: Vec<Complex64>, tail_mass_bound: f64) -> Result<Self> {
        Self::new(c, StateFamily::Custom, tail_mass_bound)
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.c
    }

    /// `|C_N|^2`.
    pub fn weights(&self) -> impl Iterator<Item = f64> + '_ {
        self.c.iter().map(|z| z.norm_sqr())
    }

    pub fn family(&self) -> StateFamily {
        self.family
    }

    pub fn tail_mass_bound(&self) -> f64 {
        self.tail_mass_bound
    }

    /// Largest retained `N`.
    pub fn cutoff(&self) -> usize {
        self.c.len() - 1
    }

    /// `2 sum N |C_N|^2 / sum |C_N|^2`, the total photon number of both
    /// modes computed directly from the retained terms.
    pub fn mean_total(&self) -> f64 {
        let (mut mass, mut first) = (0.0, 0.0);
        for (n, w) in self.weights().enumerate() {
            mass += w;
            first += n as f64 * w;
        }
        2.0 * first / mass
    }
}

/// TMSVS squeezing parameter, `|xi| < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezeParam(Complex64);

impl SqueezeParam {
    pub fn new(xi: Complex64) -> Result<Self> {
        let r = xi.norm();
        if !(r < 1.0) {
            return Err(Error::SqueezeOutOfRange(r));
        }
        Ok(Self(xi))
    }

    pub fn real(xi: f64) -> Result<Self> {
        Self::new(Complex64::new(xi, 0.0))
    }

    pub fn value(self) -> Complex64 {
        self.0
    }
}

/// PCS parameter `zeta`, any finite complex number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairCoherentParam(Complex64);

impl PairCoherentParam {
    pub fn new(zeta: Complex64) -> Result<Self> {
        if !zeta.re.is_finite() || !zeta.im.is_finite() {
            return Err(invalid("zeta", "must be finite"));
        }
        Ok(Self(zeta))
    }

    pub fn real(zeta: f64) -> Result<Self> {
        Self::new(Complex64::new(zeta, 0.0))
    }

    pub fn value(self) -> Complex64 {
        self.0
    }
}

/// `|N>|N>`: a single unit coefficient at index `n`.
pub fn twin_fock_coeffs(n: usize, cutoff: usize) -> Result<DiagonalCoeffs> {
    if n > cutoff {
        return Err(Error::ExceedsCutoff {
            requested: n,
            cutoff,
        });
    }
    let mut c = vec![Complex64::new(0.0, 0.0); cutoff + 1];
    c[n] = Complex64::new(1.0, 0.0);
    DiagonalCoeffs::new(c, StateFamily::TwinFock { n }, 0.0)
}

/// `C_N = z^N` scaled by `exp(ln_mag(N))`, with `z = |z| e^{i theta}` split
/// so powers never overflow.
fn polar_power(theta: f64, n: usize, ln_mag: f64) -> Complex64 {
    Complex64::from_polar(ln_mag.exp(), theta * n as f64)
}

/// `C_N = (1 - |xi|^2)^{1/2} xi^N` for `N <= cutoff`. The discarded mass is
/// exactly `|xi|^{2(cutoff + 1)}`.
pub fn tmsvs_coeffs(xi: SqueezeParam, cutoff: usize) -> Result<DiagonalCoeffs> {
    let xi = xi.value();
    let r = xi.norm();
    let theta = xi.arg();
    let r2 = r * r;
    let c = if r == 0.0 {
        let mut c = vec![Complex64::new(0.0, 0.0); cutoff + 1];
        c[0] = Complex64::new(1.0, 0.0);
        c
    } else {
        let ln_norm = 0.5 * (-r2).ln_1p();
        (0..=cutoff)
            .map(|n| polar_power(theta, n, ln_norm + n as f64 * r.ln()))
            .collect()
    };
    let tail = r2.powi(cutoff as i32 + 1);
    DiagonalCoeffs::new(c, StateFamily::Tmsvs { xi }, tail)
}

/// Smallest cutoff whose TMSVS tail mass is at most `tolerance`.
pub fn tmsvs_cutoff_for(xi: SqueezeParam, tolerance: f64) -> usize {
    let r2 = xi.value().norm_sqr();
    if r2 == 0.0 || tolerance >= 1.0 {
        return 0;
    }
    // r2^(K+1) <= tol  <=>  K + 1 >= ln tol / ln r2
    let k = (tolerance.ln() / r2.ln()).ceil() as usize;
    let mut cutoff = k.saturating_sub(1);
    while r2.powi(cutoff as i32 + 1) > tolerance {
        cutoff += 1;
    }
    cutoff
}

pub fn tmsvs_coeffs_auto(xi: SqueezeParam, tolerance: f64) -> Result<DiagonalCoeffs> {
    tmsvs_coeffs(xi, tmsvs_cutoff_for(xi, tolerance))
}

/// `ln |C_N|^2` for the PCS.
fn pcs_ln_weight(r: f64, n: usize, ln_i0: f64) -> f64 {
    2.0 * (n as f64 * r.ln() - ln_factorial(n as u64)) - ln_i0
}

/// Upper bound on `sum_{N > cutoff} |C_N|^2` for the PCS: past `N`, term
/// ratios are `|zeta|^2 / (N + 1)^2`, so the tail is dominated by a geometric
/// series starting at `|C_{cutoff+1}|^2`. Infinite while the ratio can still
/// exceed one.
fn pcs_tail_bound(r: f64, cutoff: usize, ln_i0: f64) -> f64 {
    if r == 0.0 {
        return 0.0;
    }
    let ratio = (r / (cutoff as f64 + 2.0)).powi(2);
    if ratio >= 1.0 {
        return f64::INFINITY;
    }
    pcs_ln_weight(r, cutoff + 1, ln_i0).exp() / (1.0 - ratio)
}

/// `C_N = zeta^N / (N! sqrt(I_0(2|zeta|)))` for `N <= cutoff`.
///
/// Fails when the ratio-test tail bound exceeds
/// [`DEFAULT_TAIL_TOLERANCE`].
pub fn pcs_coeffs(zeta: PairCoherentParam, cutoff: usize) -> Result<DiagonalCoeffs> {
    pcs_coeffs_with_tolerance(zeta, cutoff, DEFAULT_TAIL_TOLERANCE)
}

pub fn pcs_coeffs_with_tolerance(
    zeta: PairCoherentParam,
    cutoff: usize,
    tolerance: f64,
) -> Result<DiagonalCoeffs> {
    let z = zeta.value();
    let r = z.norm();
    let theta = z.arg();
    let ln_i0 = ln_bessel_i(0, 2.0 * r)?;
    let tail = pcs_tail_bound(r, cutoff, ln_i0);
    if tail > tolerance {
        return Err(Error::CutoffTooSmall {
            cutoff,
            tail,
            tolerance,
        });
    }
    let c = if r == 0.0 {
        let mut c = vec![Complex64::new(0.0, 0.0); cutoff + 1];
        c[0] = Complex64::new(1.0, 0.0);
        c
    } else {
        (0..=cutoff)
            .map(|n| polar_power(theta, n, 0.5 * pcs_ln_weight(r, n, ln_i0)))
            .collect()
    };
    DiagonalCoeffs::new(c, StateFamily::Pcs { zeta: z }, tail)
}

/// Smallest PCS cutoff with a tail bound below `tolerance` and a last
/// retained weight below `1e-16`.
pub fn pcs_cutoff_for(zeta: PairCoherentParam, tolerance: f64) -> Result<usize> {
    let r = zeta.value().norm();
    if r == 0.0 {
        return Ok(0);
    }
    let ln_i0 = ln_bessel_i(0, 2.0 * r)?;
    let mut cutoff = r.floor() as usize;
    while pcs_tail_bound(r, cutoff, ln_i0) > tolerance
        || pcs_ln_weight(r, cutoff, ln_i0).exp() >= PCS_LAST_WEIGHT_LIMIT
    {
        cutoff += 1;
    }
    Ok(cutoff)
}

pub fn pcs_coeffs_auto(zeta: PairCoherentParam, tolerance: f64) -> Result<DiagonalCoeffs> {
    pcs_coeffs_with_tolerance(zeta, pcs_cutoff_for(zeta, tolerance)?, tolerance)
}

/// Sign choice in `|±xi>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

/// Single-mode squeezed vacuum amplitudes on `|0>..|cutoff>`:
/// `(1 - |xi|^2)^{1/4} (±1)^m sqrt((2m)!) / (2^m m!) xi^m` on `|2m>`, zero on
/// odd numbers.
pub fn smsv_state(xi: SqueezeParam, sign: Sign, cutoff: usize) -> Vec<Complex64> {
    let xi = match sign {
        Sign::Plus => xi.value(),
        Sign::Minus => -xi.value(),
    };
    let r = xi.norm();
    let theta = xi.arg();
    let mut amps = vec![Complex64::new(0.0, 0.0); cutoff + 1];
    amps[0] = Complex64::new((1.0 - r * r).powf(0.25), 0.0);
    if r == 0.0 {
        return amps;
    }
    let ln_pref = 0.25 * (-r * r).ln_1p();
    for m in 1..=cutoff / 2 {
        let ln_mag = ln_pref + 0.5 * ln_factorial(2 * m as u64)
            - m as f64 * std::f64::consts::LN_2
            - ln_factorial(m as u64)
            + m as f64 * r.ln();
        amps[2 * m] = polar_power(theta, m, ln_mag);
    }
    amps
}

/// Exact probability that the single-mode squeezed vacuum puts above
/// `cutoff`, from the complement of the retained mass.
pub fn smsv_tail(amps: &[Complex64]) -> f64 {
    (1.0 - amps.iter().map(|z| z.norm_sqr()).sum::<f64>()).max(0.0)
}

/// `(|N, 0> + e^{i Phi} |0, N>) / sqrt 2`.
pub fn noon_state(n: usize, big_phi: f64, cutoff: usize) -> Result<TwoModeState> {
    if n == 0 {
        return Err(invalid("n", "a N00N state needs at least one photon"));
    }
    if n > cutoff {
        return Err(Error::ExceedsCutoff {
            requested: n,
            cutoff,
        });
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    TwoModeState::from_amplitudes(
        cutoff,
        [
            ((n, 0), Complex64::new(h, 0.0)),
            ((0, n), Complex64::from_polar(h, big_phi)),
        ],
        0.0,
    )
}

/// `2N̄ = 2|xi|^2 / (1 - |xi|^2)`.
pub fn tmsvs_mean_total(xi: SqueezeParam) -> f64 {
    let r2 = xi.value().norm_sqr();
    2.0 * r2 / (1.0 - r2)
}

/// `2N̄ = 2|zeta| I_1(2|zeta|) / I_0(2|zeta|)`.
pub fn pcs_mean_total(zeta: PairCoherentParam) -> f64 {
    let r = zeta.value().norm();
    2.0 * r * bessel_ratio_i1_i0(2.0 * r).expect("argument is finite and non-negative")
}

/// Families whose parameter can be solved from a target mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeanParamFamily {
    Tmsvs,
    Pcs,
}

/// Real, non-negative parameter (`xi` or `zeta`) whose total mean photon
/// number equals `target_total_mean`.
pub fn solve_param_for_mean(family: MeanParamFamily, target_total_mean: f64) -> Result<f64> {
    if !target_total_mean.is_finite() {
        return Err(invalid("target_total_mean", "must be finite"));
    }
    if target_total_mean < 0.0 {
        return Err(invalid("target_total_mean", "must be non-negative"));
    }
    if target_total_mean == 0.0 {
        return Ok(0.0);
    }
    match family {
        MeanParamFamily::Tmsvs => {
            let per_mode = 0.5 * target_total_mean;
            Ok((per_mode / (1.0 + per_mode)).sqrt())
        }
        MeanParamFamily::Pcs => {
            let mean = |z: f64| 2.0 * z * bessel_ratio_i1_i0(2.0 * z).expect("finite z");
            let tol = 1e-10 * (1.0 + target_total_mean);
            // total mean ~ 2 zeta - 1/2 for large zeta and ~ 2 zeta^2 for small
            let mut hi = (0.5 * target_total_mean + 1.0).max(target_total_mean.sqrt());
            while mean(hi) < target_total_mean {
                hi *= 2.0;
            }
            let mut lo = 0.0;
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let m = mean(mid);
                if (m - target_total_mean).abs() <= tol {
                    return Ok(mid);
                }
                if m < target_total_mean {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Err(Error::NoConvergence {
                target: target_total_mean,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{from_diagonal, mode_stats, Mode};
    use crate::special_fn::bessel_i;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn mass(d: &DiagonalCoeffs) -> f64 {
        d.weights().sum()
    }

    #[test]
    fn twin_fock_examples() {
        let v = twin_fock_coeffs(0, 0).unwrap();
        assert_eq!(v.coefficients(), &[c(1.0)]);
        let t = twin_fock_coeffs(15, 20).unwrap();
        assert_eq!(t.coefficients()[15], c(1.0));
        assert_eq!(t.weights().filter(|&w| w != 0.0).count(), 1);
        assert_eq!(t.tail_mass_bound(), 0.0);
        assert_eq!(t.mean_total(), 30.0);
        assert_eq!(
            twin_fock_coeffs(3, 2),
            Err(Error::ExceedsCutoff {
                requested: 3,
                cutoff: 2
            })
        );
    }

    #[test]
    fn tmsvs_examples() {
        let vac = tmsvs_coeffs(SqueezeParam::real(0.0).unwrap(), 10).unwrap();
        assert_eq!(vac.coefficients()[0], c(1.0));
        assert!(vac.coefficients()[1..].iter().all(|z| z.norm() == 0.0));

        let xi = SqueezeParam::real(std::f64::consts::FRAC_1_SQRT_2).unwrap();
        assert!((tmsvs_mean_total(xi) - 2.0).abs() < 1e-14);

        let d = tmsvs_coeffs(SqueezeParam::real(0.9).unwrap(), 200).unwrap();
        assert!(d.tail_mass_bound() < 1e-18);
        assert!((d.tail_mass_bound() - 0.81_f64.powi(201)).abs() < 1e-30);

        assert_eq!(SqueezeParam::real(1.0), Err(Error::SqueezeOutOfRange(1.0)));
    }

    #[test]
    fn tmsvs_complex_phase_only_enters_coefficients() {
        let xi = SqueezeParam::new(Complex64::from_polar(0.6, 0.7)).unwrap();
        let d = tmsvs_coeffs(xi, 30).unwrap();
        let real = tmsvs_coeffs(SqueezeParam::real(0.6).unwrap(), 30).unwrap();
        for (a, b) in d.weights().zip(real.weights()) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!((d.coefficients()[3].arg() - 2.1).abs() < 1e-12);
    }

    #[test]
    fn auto_cutoffs_meet_tolerance() {
        for &xi in &[0.1, 0.5, 0.8, 0.95] {
            let p = SqueezeParam::real(xi).unwrap();
            let d = tmsvs_coeffs_auto(p, 1e-12).unwrap();
            assert!(d.tail_mass_bound() <= 1e-12);
            assert!(mass(&d) >= 1.0 - d.tail_mass_bound() - 1e-14);
            if d.cutoff() > 0 {
                assert!(tmsvs_coeffs(p, d.cutoff() - 1).unwrap().tail_mass_bound() > 1e-12);
            }
        }
        for &z in &[0.0, 0.3, 2.0, 7.5, 20.0] {
            let d = pcs_coeffs_auto(PairCoherentParam::real(z).unwrap(), 1e-14).unwrap();
            assert!(d.tail_mass_bound() <= 1e-14);
            assert!(mass(&d) >= 1.0 - d.tail_mass_bound() - 1e-13);
            assert!(d.weights().last().unwrap() < 1e-16 || z == 0.0);
        }
    }

    #[test]
    fn pcs_examples() {
        let vac = pcs_coeffs(PairCoherentParam::real(0.0).unwrap(), 5).unwrap();
        assert_eq!(vac.coefficients()[0], c(1.0));
        assert_eq!(vac.tail_mass_bound(), 0.0);

        let d = pcs_coeffs(PairCoherentParam::real(2.0).unwrap(), 40).unwrap();
        assert!((mass(&d) - 1.0).abs() < 1e-12);
        // normalisation checked against the Bessel series independently
        let direct: f64 = (0..=40)
            .map(|n| 4.0_f64.powi(n) / (ln_factorial(n as u64).exp().powi(2)))
            .sum();
        assert!((direct / bessel_i(0, 4.0).unwrap() - 1.0).abs() < 1e-12);

        assert!(matches!(
            pcs_coeffs(PairCoherentParam::real(5.0).unwrap(), 6),
            Err(Error::CutoffTooSmall { .. })
        ));
    }

    #[test]
    fn pcs_is_pair_lowering_eigenstate() {
        for zeta in [
            Complex64::new(2.0, 0.0),
            Complex64::new(6.0, 0.0),
            Complex64::from_polar(6.0, 1.0),
        ] {
            let p = PairCoherentParam::new(zeta).unwrap();
            let d = pcs_coeffs_auto(p, 1e-26).unwrap();
            let s = from_diagonal(&d).unwrap();
            assert!(s.pair_lowering_residual(zeta) < 1e-10, "zeta = {zeta}");
            // equal populations: n_a - n_b annihilates the state
            assert!(s.iter().all(|((a, b), z)| a == b || z.norm() == 0.0));
        }
    }

    #[test]
    fn smsv_examples() {
        let vac = smsv_state(SqueezeParam::real(0.0).unwrap(), Sign::Plus, 6);
        assert_eq!(vac[0], c(1.0));
        assert!(vac[1..].iter().all(|z| z.norm() == 0.0));

        let xi = SqueezeParam::real(0.6).unwrap();
        for sign in [Sign::Plus, Sign::Minus] {
            let amps = smsv_state(xi, sign, 120);
            assert!(amps.iter().skip(1).step_by(2).all(|z| z.norm() == 0.0));
            let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
            assert!((norm - 1.0).abs() < 1e-10);
        }
        let plus = smsv_state(xi, Sign::Plus, 4);
        let minus = smsv_state(xi, Sign::Minus, 4);
        assert!((plus[2] + minus[2]).norm() < 1e-15);
        assert!((plus[4] - minus[4]).norm() < 1e-15);
        // m = 1: (1 - xi^2)^{1/4} sqrt(2)/2 xi
        assert!((plus[2].re - 0.64_f64.powf(0.25) * 0.6 / 2.0_f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn noon_examples() {
        let s = noon_state(1, 0.0, 1).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(s.amplitude(1, 0), c(h));
        assert_eq!(s.amplitude(0, 1), c(h));
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
        let twenty = crate::fock::joint_distribution(&noon_state(20, 0.3, 20).unwrap());
        for n1 in 0..=20 {
            for n2 in 0..=20 {
                let p = twenty.get(n1, n2);
                if (n1, n2) == (20, 0) || (n1, n2) == (0, 20) {
                    assert!((p - 0.5).abs() < 1e-15);
                } else {
                    assert_eq!(p, 0.0);
                }
            }
        }
        assert!(noon_state(3, 0.0, 2).is_err());
        assert!(noon_state(0, 0.0, 2).is_err());
    }

    #[test]
    fn pcs_mean_matches_direct_sum() {
        assert_eq!(pcs_mean_total(PairCoherentParam::real(0.0).unwrap()), 0.0);
        assert_eq!(tmsvs_mean_total(SqueezeParam::real(0.0).unwrap()), 0.0);
        for &z in &[0.1, 0.7, 2.0, 5.0, 12.0, 25.0] {
            let p = PairCoherentParam::real(z).unwrap();
            let d = pcs_coeffs_auto(p, 1e-15).unwrap();
            assert!(
                (pcs_mean_total(p) - d.mean_total()).abs() < 1e-10 * (1.0 + d.mean_total()),
                "zeta = {z}"
            );
        }
        let d = pcs_coeffs(PairCoherentParam::real(2.0).unwrap(), 60).unwrap();
        assert!(
            (pcs_mean_total(PairCoherentParam::real(2.0).unwrap()) - d.mean_total()).abs() < 1e-10
        );
    }

    #[test]
    fn mean_maps_are_increasing() {
        let mut last = (-1.0, -1.0);
        for i in 0..200 {
            let t = tmsvs_mean_total(SqueezeParam::real(i as f64 / 200.0).unwrap());
            let p = pcs_mean_total(PairCoherentParam::real(i as f64 * 0.2).unwrap());
            assert!(t > last.0 && p > last.1);
            last = (t, p);
        }
    }

    #[test]
    fn solve_param_examples() {
        assert_eq!(
            solve_param_for_mean(MeanParamFamily::Tmsvs, 0.0).unwrap(),
            0.0
        );
        let xi = solve_param_for_mean(MeanParamFamily::Tmsvs, 2.0).unwrap();
        assert!((xi - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        for &target in &[0.01, 1.0, 4.0, 30.0, 60.0, 500.0] {
            let z = solve_param_for_mean(MeanParamFamily::Pcs, target).unwrap();
            let got = pcs_mean_total(PairCoherentParam::real(z).unwrap());
            assert!((got - target).abs() <= 1e-10 * (1.0 + target), "{target}");
        }
        assert!(solve_param_for_mean(MeanParamFamily::Pcs, f64::NAN).is_err());
        assert!(solve_param_for_mean(MeanParamFamily::Pcs, f64::INFINITY).is_err());
    }

    #[test]
    fn marginal_statistics() {
        // TMSVS with total mean 4 has thermal marginals with mean 2
        let xi =
            SqueezeParam::real(solve_param_for_mean(MeanParamFamily::Tmsvs, 4.0).unwrap()).unwrap();
        let s = from_diagonal(&tmsvs_coeffs(xi, 60).unwrap()).unwrap();
        for mode in [Mode::A, Mode::B] {
            let st = mode_stats(&s, mode).unwrap();
            assert!((st.mean - 2.0).abs() < 1e-8);
            assert!((st.variance - 6.0).abs() < 1e-6);
            assert!((st.mandel_q - 2.0).abs() < 1e-6);
        }
        let pcs =
            from_diagonal(&pcs_coeffs_auto(PairCoherentParam::real(2.0).unwrap(), 1e-14).unwrap())
                .unwrap();
        for mode in [Mode::A, Mode::B] {
            assert!(mode_stats(&pcs, mode).unwrap().mandel_q < 0.0);
        }
    }
}
