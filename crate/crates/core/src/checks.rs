//! Self-verification suite: every closed form against its brute-force or
//! explicit counterpart, plus the structural properties of the Fock-space
//! machinery. Drives the CLI `verify` command.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::{parity_superposition, parity_twin_fock, phase_uncertainty};
use crate::error::Result;
use crate::fock::{
    apply_beam_splitter, apply_phase, from_diagonal, BeamSplitterKind, TwoModeState,
};
use crate::oracle::{
    bessel_i_naive, default_step, disentanglement_check_auto, legendre_explicit,
    legendre_explicit_condition, legendre_explicit_derivative, mzi_parity_numeric,
    phase_uncertainty_numeric,
};
use crate::special_fn::{bessel_i, legendre};
use crate::states::{
    pcs_coeffs, pcs_coeffs_auto, pcs_cutoff_for, solve_param_for_mean, tmsvs_coeffs,
    tmsvs_cutoff_for, twin_fock_coeffs, DiagonalCoeffs, MeanParamFamily, PairCoherentParam,
    SqueezeParam,
};
use crate::sweeps::{coeffs_for_total_mean, joint_cross_check, InputFamily, Stage};

/// Largest coefficient cutoff used when propagating superpositions through
/// the brute-force interferometer.
pub const ORACLE_MAX_CUTOFF: usize = 120;

/// Total means at which superposition parities are cross-checked.
pub const SUPERPOSITION_TOTALS: [f64; 3] = [2.0, 10.0, 30.0];

/// Phases at which superposition parities are cross-checked.
pub const CHECK_PHIS: [f64; 5] = [1e-4, 0.01, 0.05, 0.1, 0.3];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    /// Largest twin-Fock `N` in the parity identity check.
    pub max_n: usize,
    /// Absolute tolerance for the parity agreement checks.
    pub tolerance: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            max_n: 12,
            tolerance: 1e-8,
        }
    }
}

/// Outcome of one check. `error` is the worst observed violation measure,
/// compared against `tolerance` (or, for `at_least` checks, the worst
/// observed value against a floor).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckResult {
    fn at_most(name: &'static str, error: f64, tolerance: f64) -> Self {
        Self {
            name,
            error,
            tolerance,
            passed: error <= tolerance,
        }
    }
}

/// Diagonal coefficients for a total mean, truncated at no more than
/// [`ORACLE_MAX_CUTOFF`] with the tail bound adjusted accordingly.
pub fn oracle_coeffs(family: InputFamily, total_mean: f64) -> Result<DiagonalCoeffs> {
    const TOL: f64 = 1e-14;
    match family {
        InputFamily::TwinFock => coeffs_for_total_mean(family, total_mean, 0.0),
        InputFamily::Tmsvs => {
            let xi = SqueezeParam::real(solve_param_for_mean(MeanParamFamily::Tmsvs, total_mean)?)?;
            tmsvs_coeffs(xi, tmsvs_cutoff_for(xi, TOL).min(ORACLE_MAX_CUTOFF))
        }
        InputFamily::Pcs => {
            let zeta =
                PairCoherentParam::real(solve_param_for_mean(MeanParamFamily::Pcs, total_mean)?)?;
            let cutoff = pcs_cutoff_for(zeta, TOL)?;
            if cutoff <= ORACLE_MAX_CUTOFF {
                pcs_coeffs_auto(zeta, TOL)
            } else {
                crate::states::pcs_coeffs_with_tolerance(zeta, ORACLE_MAX_CUTOFF, 1.0)
            }
        }
    }
}

pub fn check_unitarity() -> CheckResult {
    let mut worst: f64 = 0.0;
    for kind in [BeamSplitterKind::First, BeamSplitterKind::Second] {
        for total in 0..=40 {
            let u = kind.splitter().block(total);
            for i in 0..u.dim() {
                for j in i..u.dim() {
                    let dot: Complex64 = u
                        .column(i)
                        .iter()
                        .zip(u.column(j))
                        .map(|(x, y)| x.conj() * y)
                        .sum();
                    let expect = if i == j { 1.0 } else { 0.0 };
                    worst = worst.max((dot - expect).norm());
                }
            }
        }
    }
    CheckResult::at_most("beam-splitter unitarity", worst, 1e-12)
}

/// A deterministic dense test state with every amplitude populated.
fn dense_state(cutoff: usize) -> TwoModeState {
    let mut entries = Vec::new();
    let mut norm = 0.0;
    for n in 0..=cutoff {
        for na in 0..=n {
            let z = Complex64::new(
                ((3 * na + 7 * n) % 11) as f64 - 5.0,
                ((5 * na + n) % 7) as f64 - 3.0,
            );
            norm += z.norm_sqr();
            entries.push(((na, n - na), z));
        }
    }
    let scale = 1.0 / f64::sqrt(norm);
    TwoModeState::from_amplitudes(
        cutoff,
        entries.into_iter().map(|(k, z)| (k, z * scale)),
        1e-12,
    )
    .expect("normalised by construction")
}

pub fn check_conservation() -> CheckResult {
    let mut worst: f64 = 0.0;
    let states = [
        dense_state(25),
        from_diagonal(&pcs_coeffs(PairCoherentParam::real(3.0).unwrap(), 40).unwrap()).unwrap(),
    ];
    for s in &states {
        for kind in [BeamSplitterKind::First, BeamSplitterKind::Second] {
            let out = apply_beam_splitter(s, kind);
            for (a, b) in s.block_masses().iter().zip(out.block_masses()) {
                worst = worst.max((a - b).abs());
            }
            worst = worst.max((out.norm_sqr() - s.norm_sqr()).abs());
        }
        for phi in [0.1, 1.0, 2.0 * std::f64::consts::PI] {
            worst = worst.max((apply_phase(s, phi).norm_sqr() - s.norm_sqr()).abs());
        }
    }
    CheckResult::at_most("block conservation / norm", worst, 1e-12)
}

pub fn check_legendre_explicit() -> CheckResult {
    let mut worst: f64 = 0.0;
    for n in 0..=20 {
        for i in 0..=40 {
            let x = -1.0 + i as f64 * 0.05;
            let p = legendre(n, x).unwrap();
            let scale = legendre_explicit_condition(n);
            worst = worst.max((p.value - legendre_explicit(n, x)).abs() / scale);
            let d = legendre_explicit_derivative(n, x);
            worst = worst.max((p.derivative - d).abs() / scale);
        }
    }
    CheckResult::at_most("legendre vs explicit sum", worst, 1e-11)
}

pub fn check_legendre_derivative() -> CheckResult {
    let h = 1e-6;
    let mut worst: f64 = 0.0;
    for n in 0..=30 {
        for i in 0..=198 {
            let x = -0.99 + i as f64 * 0.01;
            let fd =
                (legendre(n, x + h).unwrap().value - legendre(n, x - h).unwrap().value) / (2.0 * h);
            worst = worst.max((legendre(n, x).unwrap().derivative - fd).abs());
        }
    }
    CheckResult::at_most("legendre derivative vs fd", worst, 1e-5)
}

pub fn check_bessel() -> CheckResult {
    let mut worst: f64 = 0.0;
    for i in 0..=240 {
        let x = 0.25 * i as f64;
        for order in 0..=1 {
            let reference = bessel_i_naive(order, x);
            let got = bessel_i(order, x).unwrap();
            let scale = reference.abs().max(1e-300);
            worst = worst.max(if reference == 0.0 {
                got.abs()
            } else {
                (got - reference).abs() / scale
            });
        }
    }
    CheckResult::at_most("bessel I0/I1 vs naive series", worst, 1e-12)
}

pub fn check_twin_fock_parity(max_n: usize, tolerance: f64) -> CheckResult {
    let mut worst: f64 = 0.0;
    for n in 0..=max_n {
        let s = from_diagonal(&twin_fock_coeffs(n, n).unwrap()).unwrap();
        for i in 0..=100 {
            let phi = std::f64::consts::FRAC_PI_2 * i as f64 / 100.0;
            let diff = (mzi_parity_numeric(&s, phi) - parity_twin_fock(n, phi).value).abs();
            worst = worst.max(diff);
        }
    }
    CheckResult::at_most("twin-fock parity vs oracle", worst, tolerance)
}

/// Worst `|analytic - oracle| - 10 * tail` over families, totals and phases.
pub fn check_superposition_parity(tolerance: f64) -> Result<CheckResult> {
    let mut worst: f64 = 0.0;
    for family in [InputFamily::Tmsvs, InputFamily::Pcs] {
        for &total in &SUPERPOSITION_TOTALS {
            let d = oracle_coeffs(family, total)?;
            let s = from_diagonal(&d)?;
            for &phi in &CHECK_PHIS {
                let diff =
                    (parity_superposition(&d, phi).value - mzi_parity_numeric(&s, phi)).abs();
                worst = worst.max(diff - 10.0 * d.tail_mass_bound());
            }
        }
    }
    Ok(CheckResult::at_most(
        "superposition parity vs oracle",
        worst.max(0.0),
        tolerance,
    ))
}

pub fn check_derivatives(max_n: usize) -> Result<CheckResult> {
    let h = 1e-6;
    let mut cases: Vec<DiagonalCoeffs> = (1..=max_n)
        .map(|n| twin_fock_coeffs(n, n).unwrap())
        .collect();
    cases.push(oracle_coeffs(InputFamily::Tmsvs, 10.0)?);
    cases.push(oracle_coeffs(InputFamily::Pcs, 10.0)?);
    let mut worst: f64 = 0.0;
    for d in &cases {
        for i in 1..=60 {
            let phi = 0.025 * i as f64;
            let p = parity_superposition(d, phi);
            if p.derivative_wrt_phi.abs() <= 1e-3 {
                continue;
            }
            let fd = (parity_superposition(d, phi + h).value
                - parity_superposition(d, phi - h).value)
                / (2.0 * h);
            worst = worst.max(((p.derivative_wrt_phi - fd) / fd).abs());
        }
    }
    Ok(CheckResult::at_most("parity derivative vs fd", worst, 1e-4))
}

pub fn check_uncertainty_paths() -> Result<CheckResult> {
    let cases = [
        (twin_fock_coeffs(5, 5)?, 1e-4),
        (oracle_coeffs(InputFamily::Tmsvs, 4.0)?, 0.05),
        (oracle_coeffs(InputFamily::Pcs, 4.0)?, 0.05),
    ];
    let mut worst: f64 = 0.0;
    for (d, phi) in &cases {
        let analytic = phase_uncertainty(d, *phi)?.delta_phi;
        let numeric = phase_uncertainty_numeric(&from_diagonal(d)?, *phi, default_step(*phi))?;
        worst = worst.max(((numeric - analytic) / analytic).abs());
    }
    Ok(CheckResult::at_most(
        "phase uncertainty cross-path",
        worst,
        1e-4,
    ))
}

/// Squeezing values for the beam-splitter disentanglement check.
pub const DISENTANGLEMENT_XIS: [f64; 3] = [0.3, 0.5, 0.8];

pub fn check_disentanglement() -> Result<CheckResult> {
    let mut worst: f64 = 0.0;
    for &xi in &DISENTANGLEMENT_XIS {
        let f = disentanglement_check_auto(SqueezeParam::real(xi)?, 1e-8)?;
        worst = worst.max(1.0 - f);
    }
    Ok(CheckResult::at_most(
        "tmsvs disentanglement (1 - F)",
        worst,
        1e-6,
    ))
}

pub fn check_joint_distributions() -> Result<CheckResult> {
    let mut worst: f64 = 0.0;
    let mut cases: Vec<DiagonalCoeffs> = Vec::new();
    for total in [2.0, 4.0, 10.0, 20.0] {
        cases.push(coeffs_for_total_mean(InputFamily::TwinFock, total, 0.0)?);
        cases.push(coeffs_for_total_mean(InputFamily::Tmsvs, total, 1e-12)?);
        cases.push(coeffs_for_total_mean(InputFamily::Pcs, total, 1e-12)?);
    }
    for d in &cases {
        for stage in [Stage::Before, Stage::After] {
            worst = worst.max(joint_cross_check(d, stage)?);
        }
    }
    Ok(CheckResult::at_most(
        "joint distribution vs propagated",
        worst,
        1e-10,
    ))
}

/// `|zeta|` values for the pair-lowering eigenvalue residual.
pub const EIGEN_ZETAS: [f64; 5] = [0.5, 1.0, 2.0, 4.0, 6.0];

pub fn check_pcs_eigenvalue() -> Result<CheckResult> {
    let mut worst: f64 = 0.0;
    for &r in &EIGEN_ZETAS {
        for theta in [0.0, 1.0, -2.5] {
            let zeta = Complex64::from_polar(r, theta);
            let d = pcs_coeffs_auto(PairCoherentParam::new(zeta)?, 1e-26)?;
            worst = worst.max(from_diagonal(&d)?.pair_lowering_residual(zeta));
        }
    }
    Ok(CheckResult::at_most(
        "pcs pair-lowering residual",
        worst,
        1e-10,
    ))
}

/// Runs every check in a fixed order.
pub fn run_all(config: &VerifyConfig) -> Result<Vec<CheckResult>> {
    Ok(vec![
        check_unitarity(),
        check_conservation(),
        check_legendre_explicit(),
        check_legendre_derivative(),
        check_bessel(),
        check_twin_fock_parity(config.max_n, config.tolerance),
        check_superposition_parity(config.tolerance)?,
        check_derivatives(config.max_n)?,
        check_uncertainty_paths()?,
        check_disentanglement()?,
        check_joint_distributions()?,
        check_pcs_eigenvalue()?,
    ])
}
