//! Scalar special functions needed by the closed-form correlators and the
//! continuum limit: log-gamma, digamma, the Gauss hypergeometric series
//! (including the logarithmic branch at unit argument), and the modified
//! Bessel functions `K0`/`K1`.

use crate::error::{ChainError, Result};

/// `ln(pi)`.
pub const LN_PI: f64 = 1.1447298858494002;

/// `ln(2 * sqrt(e / pi))`.
const LN_2_SQRT_E_OVER_PI: f64 = 0.6207822376352452;

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.5772156649015329;

/// Lanczos coefficients (Pugh 2004, via statrs, MIT licensed).
const GAMMA_DK: &[f64] = &[
    2.4857408913875355e-5,
    1.0514237858172197,
    -3.4568709722201625,
    4.512277094668948,
    -2.9828522532357664,
    1.056397115771267,
    -1.9542877319164587e-1,
    1.709705434044412e-2,
    -5.719261174043057e-4,
    4.633994733599057e-6,
    -2.7199490848860772e-9,
];

const GAMMA_R: f64 = 10.900511;

/// Natural log of the gamma function, accurate to ~15 digits.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        let s = GAMMA_DK
            .iter()
            .enumerate()
            .skip(1)
            .fold(GAMMA_DK[0], |s, (i, &d)| s + d / (i as f64 - x));
        LN_PI
            - (std::f64::consts::PI * x).sin().ln()
            - s.ln()
            - LN_2_SQRT_E_OVER_PI
            - (0.5 - x) * ((0.5 - x + GAMMA_R) / std::f64::consts::E).ln()
    } else {
        let s = GAMMA_DK
            .iter()
            .enumerate()
            .skip(1)
            .fold(GAMMA_DK[0], |s, (i, &d)| s + d / (x + i as f64 - 1.0));
        s.ln()
            + LN_2_SQRT_E_OVER_PI
            + (x - 0.5) * ((x - 0.5 + GAMMA_R) / std::f64::consts::E).ln()
    }
}

/// Digamma function for positive arguments: recurrence up to `x >= 10`, then
/// the standard asymptotic series in `1/x^2`.
pub fn digamma(mut x: f64) -> f64 {
    assert!(x > 0.0, "digamma requires a positive argument");
    let mut acc = 0.0;
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    // Bernoulli-number tail: ln x - 1/(2x) - sum B_2n / (2n x^{2n}).
    let tail = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0)))));
    acc + x.ln() - 0.5 / x - tail
}

/// Gauss hypergeometric function `2F1(a, b; c; x)` by direct power series.
///
/// Intended for `|x| <= 0.99`; fails with a numerical error if the series
/// has not met `tol` within `max_terms` terms.
pub fn hyp2f1_series(a: f64, b: f64, c: f64, x: f64, tol: f64, max_terms: usize) -> Result<f64> {
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    for k in 0..max_terms {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * x;
        sum += term;
        if term.abs() <= tol * sum.abs() {
            return Ok(sum);
        }
    }
    Err(ChainError::numerical(format!(
        "2F1({a}, {b}; {c}; {x}) did not converge within {max_terms} terms"
    )))
}

/// `2F1(a, b; a+b; 1-w)` for small `w > 0`, via the logarithmic connection
/// series that applies when `c - a - b = 0`:
///
/// ```text
/// F = G(a+b)/(G(a) G(b)) * sum_k [(a)_k (b)_k / (k!)^2] w^k
///       * [2 psi(k+1) - psi(a+k) - psi(b+k) - ln w]
/// ```
pub fn hyp2f1_log_unit(a: f64, b: f64, w: f64, tol: f64, max_terms: usize) -> Result<f64> {
    assert!(w > 0.0 && w < 1.0);
    let pref = (ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b)).exp();
    let ln_w = w.ln();
    let mut poch = 1.0f64; // (a)_k (b)_k / (k!)^2 * w^k
    let mut psi_k = digamma(1.0);
    let mut psi_a = digamma(a);
    let mut psi_b = digamma(b);
    let mut sum = 0.0f64;
    for k in 0..max_terms {
        let kf = k as f64;
        if k > 0 {
            poch *= (a + kf - 1.0) * (b + kf - 1.0) / (kf * kf) * w;
            psi_k += 1.0 / kf;
            psi_a += 1.0 / (a + kf - 1.0);
            psi_b += 1.0 / (b + kf - 1.0);
        }
        let term = poch * (2.0 * psi_k - psi_a - psi_b - ln_w);
        sum += term;
        if k > 2 && term.abs() <= tol * sum.abs() {
            return Ok(pref * sum);
        }
    }
    Err(ChainError::numerical(format!(
        "logarithmic 2F1 branch (a={a}, b={b}, w={w}) did not converge"
    )))
}

/// Modified Bessel function `K0(x)`, `x > 0`.
///
/// Power series below `x = 2`, otherwise the integral representation
/// `K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt` on a uniform grid
/// (the integrand extends evenly through `t = 0`, so the trapezoid rule
/// converges spectrally).
pub fn bessel_k0(x: f64) -> f64 {
    assert!(x > 0.0);
    if x <= 2.0 {
        // K0 = -(ln(x/2) + gamma) I0(x) + sum_k H_k (x^2/4)^k / (k!)^2
        let q = 0.25 * x * x;
        let mut term = 1.0f64;
        let mut i0 = 1.0f64;
        let mut hsum = 0.0f64;
        let mut hk = 0.0f64;
        for k in 1..200 {
            let kf = k as f64;
            term *= q / (kf * kf);
            hk += 1.0 / kf;
            i0 += term;
            hsum += term * hk;
            if term * (1.0 + hk) < 1e-18 * (i0 + hsum.abs()) {
                break;
            }
        }
        -((0.5 * x).ln() + EULER_GAMMA) * i0 + hsum
    } else {
        bessel_k_integral(0.0, x)
    }
}

/// Modified Bessel function `K1(x)`, `x > 0`.
pub fn bessel_k1(x: f64) -> f64 {
    assert!(x > 0.0);
    if x <= 2.0 {
        // K1 = ln(x/2) I1(x) + 1/x
        //      - (x/4) sum_k [psi(k+1) + psi(k+2)] (x^2/4)^k / (k! (k+1)!)
        let q = 0.25 * x * x;
        let mut term = 1.0f64; // (x^2/4)^k / (k! (k+1)!)
        let mut i1 = 1.0f64; // I1 = (x/2) * i1
        let mut psi_pair = digamma(1.0) + digamma(2.0);
        let mut series = psi_pair;
        for k in 1..200 {
            let kf = k as f64;
            term *= q / (kf * (kf + 1.0));
            psi_pair += 1.0 / kf + 1.0 / (kf + 1.0);
            i1 += term;
            series += term * psi_pair;
            if term * (1.0 + psi_pair.abs()) < 1e-18 * (i1 + series.abs()) {
                break;
            }
        }
        (0.5 * x).ln() * (0.5 * x * i1) + 1.0 / x - 0.25 * x * series
    } else {
        bessel_k_integral(1.0, x)
    }
}

fn bessel_k_integral(nu: f64, x: f64) -> f64 {
    let t_max = (740.0 / x).acosh();
    let h = 0.004;
    let n = (t_max / h).ceil() as usize;
    let f = |t: f64| (-x * t.cosh()).exp() * (nu * t).cosh();
    let mut sum = 0.5 * f(0.0);
    for i in 1..=n {
        sum += f(i as f64 * h);
    }
    sum * h
}
