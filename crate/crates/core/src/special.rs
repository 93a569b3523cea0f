//! Special functions behind the Student t tail probability.

use crate::error::{Error, Result};

/// Relative tolerance of the continued-fraction evaluation.
pub const CF_TOLERANCE: f64 = 1e-12;
const CF_MAX_ITER: usize = 500;
const TINY: f64 = 1e-300;

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the gamma function for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection: Γ(x)Γ(1-x) = π / sin(πx).
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// Regularized incomplete beta function `I_x(a, b)`.
pub fn regularized_incomplete_beta(x: f64, a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "incomplete beta needs a, b > 0 (got a={a}, b={b})"
        )));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidArgument(format!(
            "incomplete beta needs 0 <= x <= 1 (got {x})"
        )));
    }
    if x == 0.0 || x == 1.0 {
        return Ok(x);
    }
    // The fraction converges fast only below the mean; reflect otherwise.
    if x > (a + 1.0) / (a + b + 2.0) {
        Ok(1.0 - beta_fraction(1.0 - x, b, a)?)
    } else {
        beta_fraction(x, a, b)
    }
}

/// `x^a (1-x)^b / (a B(a,b))` times the continued fraction, evaluated with the
/// modified Lentz method.
fn beta_fraction(x: f64, a: f64, b: f64) -> Result<f64> {
    let prefix = (a * x.ln() + b * (1.0 - x).ln() - ln_beta(a, b)).exp() / a;

    let clamp = |v: f64| if v.abs() < TINY { TINY } else { v };
    let mut c = 1.0;
    let mut d = 1.0 / clamp(1.0 - (a + b) * x / (a + 1.0));
    let mut f = d;

    for m in 1..=CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;

        let even = m * (b - m) * x / ((a + m2 - 1.0) * (a + m2));
        d = 1.0 / clamp(1.0 + even * d);
        c = clamp(1.0 + even / c);
        f *= d * c;

        let odd = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0));
        d = 1.0 / clamp(1.0 + odd * d);
        c = clamp(1.0 + odd / c);
        let delta = d * c;
        f *= delta;

        if (delta - 1.0).abs() < CF_TOLERANCE {
            return Ok(prefix * f);
        }
    }
    Err(Error::InvalidArgument(format!(
        "incomplete beta continued fraction did not converge (x={x}, a={a}, b={b})"
    )))
}

/// Two-tailed Student t probability `P(|T| >= |t|)` with `df` degrees of
/// freedom, as `I_{df/(df+t^2)}(df/2, 1/2)`.
pub fn student_t_two_tailed(t: f64, df: f64) -> Result<f64> {
    if df.is_nan() || df <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "df must be positive (got {df})"
        )));
    }
    if t.is_nan() {
        return Err(Error::InvalidArgument("t statistic is NaN".into()));
    }
    if t.is_infinite() {
        return Ok(0.0);
    }
    let x = df / (df + t * t);
    Ok(regularized_incomplete_beta(x, df / 2.0, 0.5)?.clamp(0.0, 1.0))
}
