//! Gamma-function machinery, the universal first-order coefficient `f(D)` and
//! the Gauss hypergeometric function for the parameter family
//! `F(1/2, (3-D)/2; D/2; y)`.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};

/// `f(D)` in the limit `D -> infinity`.
pub const F_UNIVERSAL_INF: f64 = FRAC_1_SQRT_2;

/// Above this dimension `f_universal` returns [`F_UNIVERSAL_INF`].
pub const F_UNIVERSAL_SWITCH: f64 = 1.0e5;

/// Above this dimension `gauss_2f1_family` returns `(1+y)^{-1/2}`.
pub const HYP_FAMILY_SWITCH: f64 = 1.0e7;

const HYP_RTOL: f64 = 1.0e-15;
const HYP_MAX_TERMS: usize = 1_000_000;

/// Spatial dimension together with the derived `delta = 1/D` and
/// `beta = (D-1)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dimension {
    d: f64,
}

impl Dimension {
    pub fn new(d: f64) -> Result<Self> {
        if !(d >= 1.0) || !d.is_finite() {
            return Err(Error::domain("D", format!("expected finite D >= 1, got {d}")));
        }
        Ok(Self { d })
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn delta(&self) -> f64 {
        1.0 / self.d
    }

    pub fn beta(&self) -> f64 {
        0.5 * (self.d - 1.0)
    }
}

/// `ln Gamma(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("x", format!("log_gamma needs x > 0, got {x}")));
    }
    Ok(statrs::function::gamma::ln_gamma(x))
}

/// The universal first-order coefficient
/// `f(D) = Gamma(D/2+1/2) Gamma(D+1/2) / (Gamma(D/2) Gamma(D+1))`,
/// i.e. `<1/r12>` for two hydrogenic ground-state electrons in scaled units.
pub fn f_universal(d: f64) -> Result<f64> {
    let dim = Dimension::new(d)?;
    let d = dim.d();
    if d > F_UNIVERSAL_SWITCH {
        return Ok(F_UNIVERSAL_INF);
    }
    let ln = log_gamma(0.5 * d + 0.5)? - log_gamma(0.5 * d)? + log_gamma(d + 0.5)?
        - log_gamma(d + 1.0)?;
    Ok(ln.exp())
}

/// If `x` is a non-positive integer (to rounding), returns `-x`.
fn non_positive_integer(x: f64) -> Option<u64> {
    let r = x.round();
    if r <= 0.0 && (x - r).abs() <= 1.0e-12 * r.abs().max(1.0) {
        Some((-r) as u64)
    } else {
        None
    }
}

/// Gauss hypergeometric series `2F1(a, b; c; y)` for real parameters and
/// `|y| < 1`.
///
/// Terminates exactly when `a` or `b` is a non-positive integer; otherwise the
/// forward term recurrence runs until the terms are negligible and decreasing.
pub fn hyp2f1(a: f64, b: f64, c: f64, y: f64) -> Result<f64> {
    if !(y.abs() < 1.0) {
        return Err(Error::domain("y", format!("2F1 series needs |y| < 1, got {y}")));
    }
    if non_positive_integer(c).is_some() {
        return Err(Error::domain("c", format!("c must not be a non-positive integer, got {c}")));
    }
    let terminating = [a, b].into_iter().filter_map(non_positive_integer).min();

    let mut term = 1.0;
    let mut sum = 1.0;
    if let Some(m) = terminating {
        for n in 0..m {
            let n = n as f64;
            term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * y;
            sum += term;
        }
        return Ok(sum);
    }

    for n in 0..HYP_MAX_TERMS {
        let nf = n as f64;
        let ratio = (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * y;
        term *= ratio;
        sum += term;
        if term.abs() <= HYP_RTOL * sum.abs() && ratio.abs() < 1.0 {
            return Ok(sum);
        }
        if term == 0.0 {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence(format!(
        "2F1({a}, {b}; {c}; {y}) did not converge in {HYP_MAX_TERMS} terms"
    )))
}

/// `F(1/2, (3-D)/2; D/2; y)` for `y` in `[0, 1)`.
///
/// Odd integer `D >= 3` gives a terminating series. For `D` beyond
/// [`HYP_FAMILY_SWITCH`] the limit `(1+y)^{-1/2}` is returned.
pub fn gauss_2f1_family(d: f64, y: f64) -> Result<f64> {
    let dim = Dimension::new(d)?;
    if !(0.0..1.0).contains(&y) {
        return Err(Error::domain("y", format!("expected y in [0, 1), got {y}")));
    }
    if dim.d() > HYP_FAMILY_SWITCH {
        return Ok(gauss_2f1_family_limit(y));
    }
    hyp2f1(0.5, 0.5 * (3.0 - dim.d()), 0.5 * dim.d(), y)
}

/// `lim_{D -> infinity} F(1/2, (3-D)/2; D/2; y) = (1+y)^{-1/2}`.
pub fn gauss_2f1_family_limit(y: f64) -> f64 {
    (1.0 + y).powf(-0.5)
}

/// `n`-th derivative of `2F1(a, b; c; y)` with respect to `y`.
pub(crate) fn hyp2f1_derivative(n: u32, a: f64, b: f64, c: f64, y: f64) -> Result<f64> {
    let mut prefactor = 1.0;
    for k in 0..n {
        let k = k as f64;
        prefactor *= (a + k) * (b + k) / (c + k);
    }
    if prefactor == 0.0 {
        return Ok(0.0);
    }
    let nf = n as f64;
    Ok(prefactor * hyp2f1(a + nf, b + nf, c + nf, y)?)
}
