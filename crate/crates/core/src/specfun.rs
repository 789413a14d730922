//! Modified Bessel functions `K0`, `K1` and the exponential integral `E1` for
//! positive real arguments.
//!
//! `K0`/`K1` use the ascending series below `x = 2` and Steed's continued
//! fraction (Temme's CF2 for order zero) above. `E1` uses its power series up
//! to `x = 1` and the Lentz-evaluated continued fraction beyond.

use crate::error::{domain, Result};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082_402_431;

/// Arguments above this underflow (the result is flagged).
pub const UNDERFLOW_ARG: f64 = 700.0;

const SERIES_SPLIT: f64 = 2.0;
const MAX_ITER: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecFunResult {
    pub value: f64,
    /// Relative accuracy bound over the supported range.
    pub rel_err_bound: f64,
    /// Set when the argument lies beyond [`UNDERFLOW_ARG`].
    pub underflow: bool,
}

const REL_ERR: f64 = 1e-13;

fn check_arg(x: f64, name: &str) -> Result<()> {
    if !(x > 0.0) || x.is_nan() {
        return domain(format!("{name} requires a positive argument, got {x}"));
    }
    Ok(())
}

/// Ascending series for `(K0, K1)`, accurate for `x <= 2`.
fn k01_series(x: f64) -> (f64, f64) {
    let y = 0.25 * x * x;
    let ln_half = (0.5 * x).ln();
    // term_k = y^k / (k!)^2 for I0; term1_k = y^k / (k! (k+1)!) for I1.
    let mut term0 = 1.0;
    let mut term1 = 1.0;
    let mut harmonic = 0.0; // H_k
    let mut i0 = 1.0;
    let mut i1 = 1.0;
    let mut sum0 = -EULER_GAMMA; // sum psi(k+1) term0
    let mut sum1 = 2.0 * -EULER_GAMMA + 1.0; // sum [psi(k+1) + psi(k+2)] term1
    for k in 1..200 {
        let kf = k as f64;
        term0 *= y / (kf * kf);
        term1 *= y / (kf * (kf + 1.0));
        harmonic += 1.0 / kf;
        let psi_k1 = -EULER_GAMMA + harmonic;
        let psi_k2 = psi_k1 + 1.0 / (kf + 1.0);
        i0 += term0;
        i1 += term1;
        sum0 += psi_k1 * term0;
        sum1 += (psi_k1 + psi_k2) * term1;
        if term0 < 1e-18 * i0 && term1 < 1e-18 * i1 {
            break;
        }
    }
    let k0 = -ln_half * i0 + sum0;
    let i1 = 0.5 * x * i1;
    let k1 = 1.0 / x + ln_half * i1 - 0.25 * x * sum1;
    (k0, k1)
}

/// Steed's method for `(e^x K0(x), e^x K1(x))`, for `x >= 2`.
fn k01_scaled_cf(x: f64) -> (f64, f64) {
    let a1 = 0.25;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..MAX_ITER {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-17 {
            break;
        }
    }
    h *= a1;
    let k0 = (std::f64::consts::PI / (2.0 * x)).sqrt() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    (k0, k1)
}

fn k01(x: f64) -> (f64, f64) {
    if x < SERIES_SPLIT {
        k01_series(x)
    } else {
        let (k0, k1) = k01_scaled_cf(x);
        let e = (-x).exp();
        (k0 * e, k1 * e)
    }
}

fn wrap(value: f64, x: f64) -> SpecFunResult {
    SpecFunResult {
        value,
        rel_err_bound: REL_ERR,
        underflow: x > UNDERFLOW_ARG,
    }
}

pub fn bessel_k0_detailed(x: f64) -> Result<SpecFunResult> {
    check_arg(x, "K0")?;
    Ok(wrap(k01(x).0, x))
}

pub fn bessel_k1_detailed(x: f64) -> Result<SpecFunResult> {
    check_arg(x, "K1")?;
    Ok(wrap(k01(x).1, x))
}

/// Modified Bessel function of the second kind, order zero.
pub fn bessel_k0(x: f64) -> Result<f64> {
    bessel_k0_detailed(x).map(|r| r.value)
}

/// Modified Bessel function of the second kind, order one.
pub fn bessel_k1(x: f64) -> Result<f64> {
    bessel_k1_detailed(x).map(|r| r.value)
}

/// `(K0(x), K1(x))` in one evaluation.
pub fn bessel_k01(x: f64) -> Result<(f64, f64)> {
    check_arg(x, "K0/K1")?;
    Ok(k01(x))
}

/// `e^x E1(x)`; finite for every positive `x`.
pub(crate) fn exp_scaled_e1(x: f64) -> f64 {
    if x <= 1.0 {
        return x.exp() * e1_series(x);
    }
    // E1(x) = e^{-x} / (x + 1 - 1/(x + 3 - 4/(x + 5 - ...)))
    let tiny = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let fi = i as f64;
        let an = -fi * fi;
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h
}

fn e1_series(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut term = 1.0;
    for k in 1..200 {
        let kf = k as f64;
        term *= -x / kf;
        let t = term / kf;
        sum += t;
        if t.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    -EULER_GAMMA - x.ln() - sum
}

pub fn exp_integral_e1_detailed(x: f64) -> Result<SpecFunResult> {
    check_arg(x, "E1")?;
    let value = if x <= 1.0 {
        e1_series(x)
    } else {
        exp_scaled_e1(x) * (-x).exp()
    };
    Ok(wrap(value, x))
}

/// Exponential integral `E1(x) = int_x^inf e^{-t}/t dt`.
pub fn exp_integral_e1(x: f64) -> Result<f64> {
    exp_integral_e1_detailed(x).map(|r| r.value)
}
