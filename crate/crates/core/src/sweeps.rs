//! Batch scans for plotting: parity against phase, phase uncertainty
//! and SNR against total mean photon number, and joint distributions.
//!
//! Grid points are evaluated in parallel; output order always follows the
//! input grid.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{
    hl, joint_after_bs, joint_before_bs, parity_ecs, parity_noon, parity_superposition,
    phase_uncertainty, snr, sql,
};
use crate::error::{invalid, Error, Result};
use crate::fock::{
    apply_beam_splitter, from_diagonal, joint_distribution, BeamSplitterKind, JointDistribution,
};
use crate::states::{
    pcs_coeffs_auto, solve_param_for_mean, tmsvs_coeffs_auto, twin_fock_coeffs, DiagonalCoeffs,
    MeanParamFamily, PairCoherentParam, SqueezeParam, StateFamily,
};

/// Default tail tolerance for sweep truncations.
pub const SWEEP_TAIL_TOLERANCE: f64 = 1e-14;

/// Twin-Fock superposition families that can be indexed by total mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InputFamily {
    TwinFock,
    Tmsvs,
    Pcs,
}

/// Coefficients whose total mean photon number is `total_mean`. Twin-Fock
/// inputs need an even integer total.
pub fn coeffs_for_total_mean(
    family: InputFamily,
    total_mean: f64,
    tail_tolerance: f64,
) -> Result<DiagonalCoeffs> {
    if !(total_mean >= 0.0) || !total_mean.is_finite() {
        return Err(invalid(
            "total_mean",
            format!("{total_mean} must be finite and >= 0"),
        ));
    }
    match family {
        InputFamily::TwinFock => {
            let half = 0.5 * total_mean;
            if half.fract() != 0.0 {
                return Err(invalid(
                    "total_mean",
                    format!("twin-Fock total photon number must be even, got {total_mean}"),
                ));
            }
            let n = half as usize;
            twin_fock_coeffs(n, n)
        }
        InputFamily::Tmsvs => {
            let xi = solve_param_for_mean(MeanParamFamily::Tmsvs, total_mean)?;
            tmsvs_coeffs_auto(SqueezeParam::real(xi)?, tail_tolerance)
        }
        InputFamily::Pcs => {
            let zeta = solve_param_for_mean(MeanParamFamily::Pcs, total_mean)?;
            pcs_coeffs_auto(PairCoherentParam::real(zeta)?, tail_tolerance)
        }
    }
}

/// What a scan row was computed for.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ScanFamily {
    Diagonal(StateFamily),
    Noon { n: usize, big_phi: f64 },
    Ecs { n_bar: f64 },
}

/// Why a row carries no value for its main observable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanFlag {
    /// Parity slope vanishes; phase uncertainty is unbounded.
    Divergent,
    /// Parity variance vanishes; SNR is unbounded.
    InfiniteSnr,
    /// SNR is not positive, so its logarithm is undefined.
    NonPositiveSnr,
}

impl ScanFlag {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Divergent => "divergent",
            Self::InfiniteSnr => "infinite-snr",
            Self::NonPositiveSnr => "nonpositive-snr",
        }
    }
}

/// One row of a sweep. `x` is the phase for parity scans and the total mean
/// photon number for uncertainty and SNR scans.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub family: ScanFamily,
    pub x: f64,
    pub parity: Option<f64>,
    pub delta_phi: Option<f64>,
    pub sql: Option<f64>,
    pub hl: Option<f64>,
    pub snr: Option<f64>,
    pub log10_snr: Option<f64>,
    pub flag: Option<ScanFlag>,
    pub truncation_cutoff: usize,
    pub tail_bound: f64,
}

impl ScanRecord {
    fn new(family: ScanFamily, x: f64, cutoff: usize, tail_bound: f64) -> Self {
        Self {
            family,
            x,
            parity: None,
            delta_phi: None,
            sql: None,
            hl: None,
            snr: None,
            log10_snr: None,
            flag: None,
            truncation_cutoff: cutoff,
            tail_bound,
        }
    }

    fn for_coeffs(coeffs: &DiagonalCoeffs, x: f64) -> Self {
        Self::new(
            ScanFamily::Diagonal(coeffs.family()),
            x,
            coeffs.cutoff(),
            coeffs.tail_mass_bound(),
        )
    }
}

fn check_phi_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(invalid("phi_grid", "must not be empty"));
    }
    if grid.iter().any(|p| !p.is_finite()) {
        return Err(invalid("phi_grid", "must be finite"));
    }
    if grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(invalid("phi_grid", "must be sorted ascending"));
    }
    Ok(())
}

fn check_mean_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(invalid("total_mean_grid", "must not be empty"));
    }
    if grid.iter().any(|&m| !(m > 0.0) || !m.is_finite()) {
        return Err(invalid(
            "total_mean_grid",
            "means must be positive and finite",
        ));
    }
    Ok(())
}

/// `points` equally spaced values on `[lo, hi]`, endpoints included.
pub fn uniform_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..points)
            .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
            .collect(),
    }
}

/// 2001 points on `[0, pi/2]`.
pub fn default_phi_grid() -> Vec<f64> {
    uniform_grid(0.0, std::f64::consts::FRAC_PI_2, 2001)
}

/// Total means `2, 4, ..., 60`.
pub fn default_total_means() -> Vec<f64> {
    (1..=30).map(|i| 2.0 * i as f64).collect()
}

/// Parity against phase for a twin-Fock superposition.
pub fn scan_parity(coeffs: &DiagonalCoeffs, phi_grid: &[f64]) -> Result<Vec<ScanRecord>> {
    check_phi_grid(phi_grid)?;
    Ok(phi_grid
        .par_iter()
        .map(|&phi| {
            let mut rec = ScanRecord::for_coeffs(coeffs, phi);
            rec.parity = Some(parity_superposition(coeffs, phi).value);
            rec
        })
        .collect())
}

/// Parity against phase for a N00N state.
pub fn scan_parity_noon(n: usize, big_phi: f64, phi_grid: &[f64]) -> Result<Vec<ScanRecord>> {
    check_phi_grid(phi_grid)?;
    phi_grid
        .iter()
        .map(|&phi| {
            let mut rec = ScanRecord::new(ScanFamily::Noon { n, big_phi }, phi, n, 0.0);
            rec.parity = Some(parity_noon(n, big_phi, phi)?);
            Ok(rec)
        })
        .collect()
}

/// Parity against phase for an entangled coherent state.
pub fn scan_parity_ecs(n_bar: f64, phi_grid: &[f64]) -> Result<Vec<ScanRecord>> {
    check_phi_grid(phi_grid)?;
    phi_grid
        .iter()
        .map(|&phi| {
            let mut rec = ScanRecord::new(ScanFamily::Ecs { n_bar }, phi, 0, 0.0);
            rec.parity = Some(parity_ecs(n_bar, phi)?);
            Ok(rec)
        })
        .collect()
}

fn with_limits(mut rec: ScanRecord, total: f64) -> Result<ScanRecord> {
    rec.sql = Some(sql(total)?);
    rec.hl = Some(hl(total)?);
    Ok(rec)
}

/// Phase uncertainty against total mean photon number at fixed `phi`.
/// Points where the uncertainty diverges come back flagged.
pub fn scan_uncertainty(
    family: InputFamily,
    total_mean_grid: &[f64],
    phi: f64,
    tail_tolerance: f64,
) -> Result<Vec<ScanRecord>> {
    check_mean_grid(total_mean_grid)?;
    total_mean_grid
        .par_iter()
        .map(|&total| {
            let coeffs = coeffs_for_total_mean(family, total, tail_tolerance)?;
            let mut rec = with_limits(ScanRecord::for_coeffs(&coeffs, total), total)?;
            match phase_uncertainty(&coeffs, phi) {
                Ok(u) => {
                    rec.delta_phi = Some(u.delta_phi);
                    rec.parity = Some(u.parity);
                }
                Err(Error::DivergentUncertainty { .. }) => {
                    rec.parity = Some(parity_superposition(&coeffs, phi).value);
                    rec.flag = Some(ScanFlag::Divergent);
                }
                Err(e) => return Err(e),
            }
            Ok(rec)
        })
        .collect()
}

/// SNR and `log10` SNR against total mean photon number at fixed `phi`.
pub fn scan_snr(
    family: InputFamily,
    total_mean_grid: &[f64],
    phi: f64,
    tail_tolerance: f64,
) -> Result<Vec<ScanRecord>> {
    check_mean_grid(total_mean_grid)?;
    total_mean_grid
        .par_iter()
        .map(|&total| {
            let coeffs = coeffs_for_total_mean(family, total, tail_tolerance)?;
            let mut rec = with_limits(ScanRecord::for_coeffs(&coeffs, total), total)?;
            rec.parity = Some(parity_superposition(&coeffs, phi).value);
            match snr(&coeffs, phi) {
                Ok(s) => {
                    rec.snr = Some(s);
                    if s > 0.0 {
                        rec.log10_snr = Some(s.log10());
                    } else {
                        rec.flag = Some(ScanFlag::NonPositiveSnr);
                    }
                }
                Err(Error::InfiniteSnr { .. }) => rec.flag = Some(ScanFlag::InfiniteSnr),
                Err(e) => return Err(e),
            }
            Ok(rec)
        })
        .collect()
}

/// Before or after the first beam splitter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Before,
    After,
}

/// Joint photon-number distribution at the requested stage, from the
/// closed forms.
pub fn export_joint(coeffs: &DiagonalCoeffs, stage: Stage) -> JointDistribution {
    match stage {
        Stage::Before => joint_before_bs(coeffs),
        Stage::After => joint_after_bs(coeffs),
    }
}

/// Largest entrywise difference between [`export_joint`] and the
/// distribution of the state propagated in Fock space.
pub fn joint_cross_check(coeffs: &DiagonalCoeffs, stage: Stage) -> Result<f64> {
    let mut state = from_diagonal(coeffs)?;
    if stage == Stage::After {
        state = apply_beam_splitter(&state, BeamSplitterKind::First);
    }
    Ok(export_joint(coeffs, stage).max_abs_diff(&joint_distribution(&state)))
}
