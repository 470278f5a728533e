//! Special functions behind the interferometer formulas: log-factorials,
//! log-binomials, Legendre polynomials with their first derivative, and the
//! modified Bessel functions `I0` and `I1`.
//!
//! Factorials and binomials are kept in the log domain because the arcsine
//! weights `C(2k, k)` grow past `f64` range long before the photon numbers
//! used in sweeps do.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Largest `n` whose factorial is tabulated directly; above it Stirling's
/// series is used.
const LN_FACTORIAL_TABLE_MAX: usize = 170;

fn ln_factorial_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = Vec::with_capacity(LN_FACTORIAL_TABLE_MAX + 1);
        let mut product = 1.0_f64;
        table.push(0.0);
        for k in 1..=LN_FACTORIAL_TABLE_MAX {
            product *= k as f64;
            table.push(product.ln());
        }
        table
    })
}

/// `ln(n!)`.
pub fn ln_factorial(n: u64) -> f64 {
    if (n as usize) <= LN_FACTORIAL_TABLE_MAX {
        return ln_factorial_table()[n as usize];
    }
    // Stirling series for ln Γ(n + 1); at n > 170 the first omitted term is
    // below 1e-20 in absolute size.
    let x = n as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series =
        inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0))));
    (x + 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln() + series
}

/// `ln C(n, k)`.
pub fn ln_binomial(n: u64, k: u64) -> Result<f64> {
    if k > n {
        return Err(Error::IndexExceedsOrder { n, k });
    }
    Ok(ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k))
}

/// A Legendre polynomial and its derivative evaluated at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LegendreEval {
    pub n: usize,
    pub x: f64,
    pub value: f64,
    /// `dP_n/dx`
    pub derivative: f64,
    /// `1 - P_n(x)`, accurate even when `x` is within rounding of one.
    pub complement: f64,
}

/// Iterator over `P_0(x), P_1(x), ...` together with their derivatives.
///
/// Values follow Bonnet's recurrence
/// `(m + 1) P_{m+1} = (2m + 1) x P_m - m P_{m-1}` and derivatives follow
/// `P'_{m+1} = P'_{m-1} + (2m + 1) P_m`, which stays exact at `x = ±1`
/// (`P'_n(1) = n(n + 1)/2`) without a division by `1 - x^2`.
/// Complements `Q_m = 1 - P_m` obey
/// `(m + 1) Q_{m+1} = (2m + 1)(1 - x) + (2m + 1) x Q_m - m Q_{m-1}`.
#[derive(Debug, Clone)]
pub struct LegendreSeq {
    x: f64,
    one_minus_x: f64,
    n: usize,
    prev: (f64, f64, f64),
    curr: (f64, f64, f64),
}

impl LegendreSeq {
    pub fn new(x: f64) -> Result<Self> {
        Self::with_complement(x, 1.0 - x)
    }

    /// Like [`LegendreSeq::new`] but takes `1 - x` separately, so callers
    /// that know it exactly (e.g. `2 sin^2 phi` for `x = cos 2 phi`) keep
    /// full relative precision in the complements.
    pub fn with_complement(x: f64, one_minus_x: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&x) {
            return Err(Error::OutOfUnitInterval(x));
        }
        Ok(Self {
            x,
            one_minus_x,
            n: 0,
            prev: (0.0, 0.0, 0.0),
            curr: (1.0, 0.0, 0.0),
        })
    }
}

impl Iterator for LegendreSeq {
    type Item = LegendreEval;

    fn next(&mut self) -> Option<LegendreEval> {
        let out = LegendreEval {
            n: self.n,
            x: self.x,
            value: self.curr.0,
            derivative: self.curr.1,
            complement: self.curr.2,
        };
        let m = self.n as f64;
        let k = 2.0 * m + 1.0;
        let value = (k * self.x * self.curr.0 - m * self.prev.0) / (m + 1.0);
        let derivative = self.prev.1 + k * self.curr.0;
        let complement =
            (k * self.one_minus_x + k * self.x * self.curr.2 - m * self.prev.2) / (m + 1.0);
        self.prev = self.curr;
        self.curr = (value, derivative, complement);
        self.n += 1;
        Some(out)
    }
}

/// `P_n(x)` and `P'_n(x)` for `x` in `[-1, 1]`.
pub fn legendre(n: usize, x: f64) -> Result<LegendreEval> {
    Ok(LegendreSeq::new(x)?
        .nth(n)
        .expect("LegendreSeq is infinite"))
}

/// Arguments above this are summed with scaled terms.
const BESSEL_LOG_DOMAIN_THRESHOLD: f64 = 30.0;
const BESSEL_RELATIVE_CUTOFF: f64 = 1e-17;

fn check_bessel_args(order: u32, x: f64) -> Result<()> {
    if order > 1 {
        return Err(Error::UnsupportedBesselOrder(order));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(crate::error::invalid(
            "x",
            format!("{x} must be finite and >= 0"),
        ));
    }
    Ok(())
}

/// Modified Bessel function of the first kind, `I_0(x)` or `I_1(x)`, from
/// its power series `sum_k (x/2)^(2k + v) / (k! (k + v)!)`.
pub fn bessel_i(order: u32, x: f64) -> Result<f64> {
    check_bessel_args(order, x)?;
    if x > BESSEL_LOG_DOMAIN_THRESHOLD {
        return Ok(ln_bessel_i(order, x)?.exp());
    }
    let nu = order as f64;
    let q = 0.25 * x * x;
    let mut term = if order == 0 { 1.0 } else { 0.5 * x };
    let mut sum = term;
    let mut k = 0.0;
    while term > BESSEL_RELATIVE_CUTOFF * sum {
        k += 1.0;
        term *= q / (k * (k + nu));
        sum += term;
    }
    Ok(sum)
}

/// `ln I_v(x)` for `v` in `{0, 1}`, valid far beyond the overflow point of
/// `I_v` itself.
///
/// The series is summed relative to its largest term: the peak index is
/// located analytically, its log is taken once, and neighbours are reached
/// by the term ratio `(x/2)^2 / (k (k + v))` in both directions.
pub fn ln_bessel_i(order: u32, x: f64) -> Result<f64> {
    check_bessel_args(order, x)?;
    if x == 0.0 {
        return Ok(if order == 0 { 0.0 } else { f64::NEG_INFINITY });
    }
    let nu = order as f64;
    let q = 0.25 * x * x;
    // term ratio t_{k+1}/t_k = q/((k+1)(k+1+v)) drops below 1 past the peak
    let peak = ((-nu + (nu * nu + 4.0 * q).sqrt()) / 2.0).floor().max(0.0) as u64;
    let ln_peak = (2.0 * peak as f64 + nu) * (0.5 * x).ln()
        - ln_factorial(peak)
        - ln_factorial(peak + order as u64);

    let mut sum = 1.0;
    let mut term = 1.0;
    let mut k = peak as f64;
    loop {
        term *= q / ((k + 1.0) * (k + 1.0 + nu));
        sum += term;
        k += 1.0;
        if term < BESSEL_RELATIVE_CUTOFF * sum {
            break;
        }
    }
    term = 1.0;
    k = peak as f64;
    while k > 0.0 {
        term *= k * (k + nu) / q;
        sum += term;
        k -= 1.0;
        if term < BESSEL_RELATIVE_CUTOFF * sum {
            break;
        }
    }
    Ok(ln_peak + sum.ln())
}

/// `I_1(x) / I_0(x)`, evaluated without overflow.
pub fn bessel_ratio_i1_i0(x: f64) -> Result<f64> {
    if x == 0.0 {
        check_bessel_args(1, x)?;
        return Ok(0.0);
    }
    if x <= BESSEL_LOG_DOMAIN_THRESHOLD {
        return Ok(bessel_i(1, x)? / bessel_i(0, x)?);
    }
    Ok((ln_bessel_i(1, x)? - ln_bessel_i(0, x)?).exp())
}
