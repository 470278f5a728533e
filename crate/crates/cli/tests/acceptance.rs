//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! fails. Runs under `cargo test` as a harness-less test target.

use std::f64::consts::FRAC_PI_2;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use parity_mzi::analytic::{
    arcsine_joint, hl, parity_superposition, parity_twin_fock, phase_uncertainty, snr, sql,
};
use parity_mzi::checks::{oracle_coeffs, ORACLE_MAX_CUTOFF};
use parity_mzi::fock::{apply_beam_splitter, from_diagonal, mode_stats};
use parity_mzi::oracle::{
    default_step, disentanglement_check_auto, mzi_parity_numeric, phase_uncertainty_numeric,
};
use parity_mzi::states::{
    pcs_coeffs_auto, solve_param_for_mean, tmsvs_coeffs_auto, twin_fock_coeffs, MeanParamFamily,
    PairCoherentParam, SqueezeParam,
};
use parity_mzi::sweeps::{
    coeffs_for_total_mean, default_phi_grid, export_joint, joint_cross_check, scan_parity,
    uniform_grid, InputFamily, Stage, SWEEP_TAIL_TOLERANCE,
};
use parity_mzi::{BeamSplitterKind, Complex64, Mode, TwoModeState};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within(limit: Duration, start: Instant, detail: String) -> Outcome {
    let took = start.elapsed();
    ensure(
        took < limit,
        format!(
            "{detail}; {:.2}s of {}s",
            took.as_secs_f64(),
            limit.as_secs()
        ),
    )
}

fn err(e: parity_mzi::Error) -> String {
    e.to_string()
}

fn sign_changes(values: &[f64]) -> usize {
    values
        .iter()
        .filter(|v| **v != 0.0)
        .collect::<Vec<_>>()
        .windows(2)
        .filter(|w| w[0].signum() != w[1].signum())
        .count()
}

fn twin_fock_identity() -> Outcome {
    let start = Instant::now();
    let grid = uniform_grid(0.0, FRAC_PI_2, 101);
    let mut worst: f64 = 0.0;
    for n in 0..=20 {
        let input = TwoModeState::fock(n, n);
        for &phi in &grid {
            let d = (mzi_parity_numeric(&input, phi) - parity_twin_fock(n, phi).value).abs();
            worst = worst.max(d);
        }
    }
    if worst > 1e-9 {
        return Err(format!("worst |oracle - P_N| = {worst:.3e} > 1e-9"));
    }
    within(
        Duration::from_secs(10),
        start,
        format!("worst |oracle - P_N| = {worst:.3e}"),
    )
}

fn superposition_parity() -> Outcome {
    let start = Instant::now();
    let mut worst_excess = f64::NEG_INFINITY;
    let mut max_cutoff = 0;
    for family in [InputFamily::Tmsvs, InputFamily::Pcs] {
        for total in [2.0, 10.0, 30.0] {
            let d = oracle_coeffs(family, total).map_err(err)?;
            max_cutoff = max_cutoff.max(d.cutoff());
            let s = from_diagonal(&d).map_err(err)?;
            for phi in [1e-4, 0.05, 0.3] {
                let diff =
                    (parity_superposition(&d, phi).value - mzi_parity_numeric(&s, phi)).abs();
                let allowed = 1e-8 + 10.0 * d.tail_mass_bound();
                worst_excess = worst_excess.max(diff - allowed);
            }
        }
    }
    if worst_excess > 0.0 || max_cutoff > ORACLE_MAX_CUTOFF {
        return Err(format!(
            "worst excess over 1e-8 + 10 tail = {worst_excess:.3e}, cutoff {max_cutoff}"
        ));
    }
    within(
        Duration::from_secs(60),
        start,
        format!(
            "all diffs inside tolerance (margin {:.3e}), cutoff <= {max_cutoff}",
            -worst_excess
        ),
    )
}

fn super_resolution() -> Outcome {
    let grid = default_phi_grid();
    let parity = |family| -> Result<Vec<f64>, String> {
        let d = coeffs_for_total_mean(family, 30.0, SWEEP_TAIL_TOLERANCE).map_err(err)?;
        Ok(scan_parity(&d, &grid)
            .map_err(err)?
            .iter()
            .map(|r| r.parity.expect("parity scans fill parity"))
            .collect())
    };
    let pcs = sign_changes(&parity(InputFamily::Pcs)?);
    let tmsvs = sign_changes(&parity(InputFamily::Tmsvs)?);
    ensure(
        pcs >= 2 && tmsvs == 0,
        format!("sign changes on [0, pi/2]: pcs {pcs}, tmsvs {tmsvs}"),
    )
}

/// Small-angle oracle: `1 - P_N(cos 2 phi) ~ N(N+1) phi^2`, so
/// `delta_phi -> 1 / sqrt(2 N (N + 1))`.
fn twin_fock_uncertainty() -> Outcome {
    let phi = 1e-4;
    let mut worst_rel: f64 = 0.0;
    let mut worst_oracle: f64 = 0.0;
    for n in [2usize, 5, 10, 25] {
        let expect = 1.0 / (2.0 * (n * (n + 1)) as f64).sqrt();
        let d = twin_fock_coeffs(n, n).map_err(err)?;
        let got = phase_uncertainty(&d, phi).map_err(err)?.delta_phi;
        worst_rel = worst_rel.max((got / expect - 1.0).abs());
        let numeric = phase_uncertainty_numeric(&TwoModeState::fock(n, n), phi, default_step(phi))
            .map_err(err)?;
        worst_oracle = worst_oracle.max((numeric / expect - 1.0).abs());
    }
    if worst_rel > 1e-4 || worst_oracle > 1e-4 {
        return Err(format!(
            "relative error vs 1/sqrt(2N(N+1)): analytic {worst_rel:.3e}, numeric {worst_oracle:.3e}"
        ));
    }
    // N = 1 sits exactly on the HL, so the lower bound is inclusive up to rounding
    let slack = 1e-9;
    for n in 1..=50usize {
        let total = 2.0 * n as f64;
        let d = twin_fock_coeffs(n, n).map_err(err)?;
        let dp = phase_uncertainty(&d, phi).map_err(err)?.delta_phi;
        let (h, s) = (hl(total).map_err(err)?, sql(total).map_err(err)?);
        if dp < h * (1.0 - slack) || dp > s {
            return Err(format!(
                "N = {n}: delta_phi {dp:.6e} outside [{h:.6e}, {s:.6e}]"
            ));
        }
    }
    Ok(format!(
        "relative error {worst_rel:.2e} (numeric {worst_oracle:.2e}); HL <= delta_phi <= SQL for N <= 50"
    ))
}

fn tmsvs_dip() -> Outcome {
    let uncertainty = |total: f64, phi: f64| -> Result<f64, String> {
        let d =
            coeffs_for_total_mean(InputFamily::Tmsvs, total, SWEEP_TAIL_TOLERANCE).map_err(err)?;
        Ok(phase_uncertainty(&d, phi).map_err(err)?.delta_phi)
    };
    let mut best: Option<(f64, f64)> = None;
    for i in 1..=40 {
        let total = 0.1 * i as f64;
        let ratio = uncertainty(total, 1e-4)? * total;
        if best.is_none_or(|(_, r)| ratio < r) {
            best = Some((total, ratio));
        }
    }
    let (best_total, best_ratio) = best.expect("grid is nonempty");
    let r4 = uncertainty(4.0, 0.05)? * 4.0;
    let r30 = uncertainty(30.0, 0.05)? * 30.0;
    ensure(
        best_ratio < 1.0 && r30 > r4,
        format!(
            "phi = 1e-4: min delta_phi/HL = {best_ratio:.4} at 2N = {best_total:.1}; \
             phi = 0.05: delta_phi/HL {r4:.3} at 4, {r30:.3} at 30"
        ),
    )
}

fn disentanglement() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for xi in [0.3, 0.5, 0.8] {
        let f =
            disentanglement_check_auto(SqueezeParam::real(xi).map_err(err)?, 1e-8).map_err(err)?;
        worst = worst.max(1.0 - f);
    }
    if worst > 1e-6 {
        return Err(format!("worst 1 - F = {worst:.3e} > 1e-6"));
    }
    within(
        Duration::from_secs(30),
        start,
        format!("worst 1 - F = {worst:.3e}"),
    )
}

fn photon_statistics() -> Outcome {
    let mut lines = Vec::new();
    for total in [4.0, 20.0] {
        let zeta = solve_param_for_mean(MeanParamFamily::Pcs, total).map_err(err)?;
        let d = pcs_coeffs_auto(PairCoherentParam::real(zeta).map_err(err)?, 1e-14).map_err(err)?;
        let s = from_diagonal(&d).map_err(err)?;
        for mode in [Mode::A, Mode::B] {
            let q = mode_stats(&s, mode).map_err(err)?.mandel_q;
            if q >= 0.0 || q.is_nan() {
                return Err(format!("pcs 2N = {total}: Q = {q} is not negative"));
            }
        }
        let xi = solve_param_for_mean(MeanParamFamily::Tmsvs, total).map_err(err)?;
        let d = tmsvs_coeffs_auto(SqueezeParam::real(xi).map_err(err)?, 1e-14).map_err(err)?;
        let s = from_diagonal(&d).map_err(err)?;
        let n_bar = 0.5 * total;
        for mode in [Mode::A, Mode::B] {
            let st = mode_stats(&s, mode).map_err(err)?;
            let want = n_bar * n_bar + n_bar;
            let rel = (st.variance / want - 1.0).abs();
            if st.mandel_q <= 0.0 || st.mandel_q.is_nan() || rel > 1e-6 {
                return Err(format!(
                    "tmsvs 2N = {total}: Q = {}, variance rel err {rel:.3e}",
                    st.mandel_q
                ));
            }
        }
        lines.push(format!("2N = {total}"));
    }
    Ok(format!(
        "pcs Q < 0 and tmsvs Q > 0 with variance N(N+1) at {}",
        lines.join(", ")
    ))
}

fn joint_distributions() -> Outcome {
    let mut worst_arcsine: f64 = 0.0;
    for n in 0..=100usize {
        let out = apply_beam_splitter(&TwoModeState::fock(n, n), BeamSplitterKind::First);
        for k in 0..=n {
            let brute = out.amplitude(2 * k, 2 * (n - k)).norm_sqr();
            let closed = arcsine_joint(n as u64, k as u64).map_err(err)?;
            worst_arcsine = worst_arcsine.max((brute - closed).abs());
        }
    }
    if worst_arcsine > 1e-12 {
        return Err(format!("arcsine law off by {worst_arcsine:.3e}"));
    }
    let mut worst_grid: f64 = 0.0;
    let mut worst_sum: f64 = 0.0;
    for family in [InputFamily::TwinFock, InputFamily::Tmsvs, InputFamily::Pcs] {
        for total in [2.0, 4.0, 10.0, 20.0] {
            let d = coeffs_for_total_mean(family, total, SWEEP_TAIL_TOLERANCE).map_err(err)?;
            worst_grid = worst_grid.max(joint_cross_check(&d, Stage::After).map_err(err)?);
            for stage in [Stage::Before, Stage::After] {
                let dist = export_joint(&d, stage);
                let excess = (dist.total() - 1.0).abs() - dist.tail_mass_bound() - 1e-12;
                worst_sum = worst_sum.max(excess);
            }
        }
    }
    ensure(
        worst_grid <= 1e-10 && worst_sum <= 0.0,
        format!(
            "arcsine {worst_arcsine:.2e}; analytic vs propagated {worst_grid:.2e}; sums inside tail bounds: {}",
            worst_sum <= 0.0
        ),
    )
}

fn snr_curves() -> Outcome {
    let phi = 1e-4;
    let mut worst_rel: f64 = 0.0;
    for i in 2..=15 {
        let total = 2.0 * i as f64;
        let log_snr = |family| -> Result<f64, String> {
            let d = coeffs_for_total_mean(family, total, SWEEP_TAIL_TOLERANCE).map_err(err)?;
            Ok(snr(&d, phi).map_err(err)?.log10())
        };
        let tf = log_snr(InputFamily::TwinFock)?;
        let pcs = log_snr(InputFamily::Pcs)?;
        let tm = log_snr(InputFamily::Tmsvs)?;
        worst_rel = worst_rel.max(((pcs - tf) / tf).abs());
        if tm > tf || tm > pcs {
            return Err(format!(
                "2N = {total}: tmsvs {tm:.4} above twin-fock {tf:.4} or pcs {pcs:.4}"
            ));
        }
    }
    ensure(
        worst_rel <= 0.05,
        format!("phi = 1e-4: worst |pcs - twin-fock| / twin-fock in log10 SNR = {worst_rel:.4}; tmsvs lowest"),
    )
}

fn pcs_eigenstate() -> Outcome {
    let mut worst: f64 = 0.0;
    for i in 1..=12 {
        let r = 0.5 * i as f64;
        for theta in [0.0, 0.7, 2.0, -1.3, 3.1] {
            let zeta = Complex64::from_polar(r, theta);
            let d =
                pcs_coeffs_auto(PairCoherentParam::new(zeta).map_err(err)?, 1e-26).map_err(err)?;
            worst = worst.max(from_diagonal(&d).map_err(err)?.pair_lowering_residual(zeta));
        }
    }
    ensure(
        worst <= 1e-10,
        format!("worst ||ab|z> - z|z>|| = {worst:.3e} for |z| <= 6"),
    )
}

fn verify_subcommand() -> Outcome {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_parity-mzi"))
        .args(["verify", "--max-n", "12", "--tolerance", "1e-8"])
        .output()
        .map_err(|e| format!("could not run verify: {e}"))?;
    let table = String::from_utf8_lossy(&out.stdout);
    let summary = table.lines().last().unwrap_or("").to_string();
    if !out.status.success() {
        return Err(format!("verify exited {:?}: {table}", out.status.code()));
    }
    within(Duration::from_secs(120), start, summary)
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("twin-fock parity identity", twin_fock_identity),
        ("superposition parity", superposition_parity),
        ("super-resolution dichotomy", super_resolution),
        ("twin-fock phase uncertainty", twin_fock_uncertainty),
        ("tmsvs sub-HL dip", tmsvs_dip),
        ("tmsvs disentanglement", disentanglement),
        ("photon statistics", photon_statistics),
        ("joint distributions", joint_distributions),
        ("snr curves", snr_curves),
        ("pcs eigenstate residual", pcs_eigenstate),
        ("verify subcommand", verify_subcommand),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
