//! Large-`M` closed forms and scaling functions for the deviation `I(M)`.
//!
//! Three families:
//!
//! * steepest-descent amplitudes at fixed temperature, below and above `T_c`,
//!   with zero field, finite field, and the `z^2 M` fixed crossover;
//! * the Bessel scaling functions of `m = 4 z1c M |1 - alpha2| / (1 - z1c^2)`
//!   for free and fixed boundaries, and the crossover integral joining them;
//! * the critical crossover function `F(zeta) = int_0^inf (t - zeta)/(t + zeta) e^{-t} dt`
//!   and its single zero.
//!
//! The above-`T_c` amplitudes carry an overall `1/z2` where a `1/alpha2` is
//! sometimes quoted; only the `1/z2` version matches the exact integral and
//! reduces to the critical Bessel forms as `alpha2 -> 1`.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::integrate::{integrate_with_breaks, QuadConfig};
use crate::params::{
    critical_z2, derived_alphas, CouplingParams, CriticalPoint, DerivedAlphas, Regime, REGIME_TOL,
};
use crate::roots::brent;
use crate::specfun::{bessel_k01, exp_scaled_e1};

/// `ln` of the largest finite double's reciprocal, where `exp(-x)` underflows.
const UNDERFLOW_EXP: f64 = 745.0;

/// Scaling variables for one `(couplings, M)` pair near criticality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingParams {
    pub m_rows: f64,
    pub critical: CriticalPoint,
    /// `1 - alpha2`; positive below `T_c`.
    pub signed_gap: f64,
    /// `4 z1c M (1 - alpha2) / (1 - z1c^2)`, populated below (and at) `T_c`.
    pub m: Option<f64>,
    /// `4 z1c M (alpha2 - 1) / (1 - z1c^2)`, populated above `T_c`.
    pub m_bar: Option<f64>,
    /// `2 M z^2 (1 + z2)^2 alpha2 z1 / z2^2`.
    pub zeta_sq: f64,
    /// `2 z^2 M (1/z2c^2 - 1)`.
    pub zeta_c_sq: f64,
}

fn scaling_variable(c: &CriticalPoint, gap: f64, m_rows: f64) -> f64 {
    4.0 * c.z1c * m_rows * gap / (1.0 - c.z1c * c.z1c)
}

impl ScalingParams {
    /// Scaling variables for actual couplings. The reference critical point
    /// keeps `z1` and moves `z2` onto the critical line.
    pub fn from_couplings(p: &CouplingParams, m_rows: f64) -> Result<Self> {
        if !(m_rows > 0.0) {
            return domain(format!("M = {m_rows} must be positive"));
        }
        let d = derived_alphas(p, REGIME_TOL);
        let critical = critical_z2(p.z1())?;
        let gap = d.gap();
        let (z1, z2, z) = (p.z1(), p.z2(), p.z());
        let zeta_sq = 2.0 * m_rows * z * z * (1.0 + z2).powi(2) * d.alpha2 * z1 / (z2 * z2);
        Ok(Self::assemble(
            critical,
            m_rows,
            gap,
            zeta_sq,
            zeta_c_sq(&critical, z, m_rows),
        ))
    }

    /// Scaling variables given directly by the critical point, the signed gap
    /// `1 - alpha2` and `zeta_c^2`. `zeta_sq` is set to its critical limit.
    pub fn near_critical(
        critical: CriticalPoint,
        m_rows: f64,
        signed_gap: f64,
        zeta_c_sq: f64,
    ) -> Result<Self> {
        if !(m_rows > 0.0) {
            return domain(format!("M = {m_rows} must be positive"));
        }
        if !(zeta_c_sq >= 0.0) {
            return domain(format!("zeta_c^2 = {zeta_c_sq} must be non-negative"));
        }
        Ok(Self::assemble(
            critical, m_rows, signed_gap, zeta_c_sq, zeta_c_sq,
        ))
    }

    fn assemble(
        critical: CriticalPoint,
        m_rows: f64,
        gap: f64,
        zeta_sq: f64,
        zeta_c_sq: f64,
    ) -> Self {
        let s = scaling_variable(&critical, gap.abs(), m_rows);
        let (m, m_bar) = if gap >= 0.0 {
            (Some(s), None)
        } else {
            (None, Some(s))
        };
        Self {
            m_rows,
            critical,
            signed_gap: gap,
            m,
            m_bar,
            zeta_sq,
            zeta_c_sq,
        }
    }

    pub fn regime(&self) -> Regime {
        if self.signed_gap >= 0.0 {
            Regime::BelowTc
        } else {
            Regime::AboveTc
        }
    }
}

/// `zeta_c^2 = 2 z^2 M (1/z2c^2 - 1)`.
pub fn zeta_c_sq(c: &CriticalPoint, z: f64, m_rows: f64) -> f64 {
    2.0 * z * z * m_rows * (1.0 / (c.z2c * c.z2c) - 1.0)
}

fn require(d: &DerivedAlphas, expected: Regime) -> Result<()> {
    if d.regime != expected {
        return Err(Error::RegimeMismatch {
            expected,
            actual: d.regime,
        });
    }
    Ok(())
}

fn check_m(m_rows: f64) -> Result<()> {
    if !(m_rows > 0.0) {
        return domain(format!("M = {m_rows} must be positive"));
    }
    Ok(())
}

/// `[z2 (1 + z1) / (1 - z1)]^{-2M}`, i.e. `alpha(0)^{-2M}` below `T_c`.
fn low_t_decay(p: &CouplingParams, m_rows: f64) -> f64 {
    let (z1, z2) = (p.z1(), p.z2());
    (-2.0 * m_rows * (z2 * (1.0 + z1) / (1.0 - z1)).ln()).exp()
}

/// `[(1 - z1) / (z2 (1 + z1))]^{-2M}`, i.e. `alpha(0)^{-2M}` above `T_c`.
fn high_t_decay(p: &CouplingParams, m_rows: f64) -> f64 {
    let (z1, z2) = (p.z1(), p.z2());
    (-2.0 * m_rows * ((1.0 - z1) / (z2 * (1.0 + z1))).ln()).exp()
}

/// Below `T_c`, zero field: leading `M^{-1/2}` steepest-descent amplitude.
pub fn asym_low_t_free(p: &CouplingParams, m_rows: f64) -> Result<f64> {
    check_m(m_rows)?;
    let d = derived_alphas(p, REGIME_TOL);
    require(&d, Regime::BelowTc)?;
    let (z1, z2) = (p.z1(), p.z2());
    let amp = z2 * (1.0 - z2 * z2) * (1.0 + z1).powi(2) / (2.0 * (1.0 - z1).powi(2));
    let root = ((1.0 - d.alpha1) * (1.0 - d.alpha2) / (2.0 * PI * z1 * d.alpha2 * m_rows)).sqrt();
    Ok(-amp * root * low_t_decay(p, m_rows))
}

/// `z^2` at which the finite-field amplitude below `T_c` changes sign,
/// `(1 - alpha2)/A = (1 + z2)^2 (1 - alpha1)(1 - alpha2)/4`.
pub fn sign_threshold_z_sq(p: &CouplingParams) -> Result<f64> {
    let d = derived_alphas(p, REGIME_TOL);
    require(&d, Regime::BelowTc)?;
    Ok(d.gap() / d.a_const)
}

#[cfg(test)]
pub(crate) fn sign_threshold_expanded(p: &CouplingParams, d: &DerivedAlphas) -> f64 {
    0.25 * (1.0 + p.z2()).powi(2) * (1.0 - d.alpha1) * (1.0 - d.alpha2)
}

/// Below `T_c`, fixed boundary field `z = p.z() > 0`: leading `M^{-3/2}` amplitude.
pub fn asym_low_t_field(p: &CouplingParams, m_rows: f64) -> Result<f64> {
    check_m(m_rows)?;
    let d = derived_alphas(p, REGIME_TOL);
    require(&d, Regime::BelowTc)?;
    let (z1, z2, z) = (p.z1(), p.z2(), p.z());
    if z == 0.0 {
        return domain("the finite-field amplitude diverges at z = 0; use crossover_low_t");
    }
    let z_sq = z * z;
    let amp =
        z2.powi(3) * (1.0 - z2) * (1.0 + z1).powi(2) / (8.0 * (1.0 + z2) * (1.0 - z1).powi(2));
    let bracket = (1.0 - d.alpha2) - z_sq * d.a_const;
    let denom = z_sq * (2.0 * PI * (1.0 - d.alpha2)).sqrt() * (z1 * d.alpha2 * m_rows).powf(1.5);
    Ok(-amp * bracket * (1.0 - d.alpha1).sqrt() / denom * low_t_decay(p, m_rows))
}

/// `G(zeta^2) = int_{-inf}^{inf} u^2 / (u^2 + zeta^2) e^{-u^2} du`.
pub fn crossover_g(zeta_sq: f64) -> Result<f64> {
    if !(zeta_sq >= 0.0) {
        return domain(format!("zeta^2 = {zeta_sq} must be non-negative"));
    }
    let zeta = zeta_sq.sqrt();
    let mut pts = vec![0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 28.0];
    for s in [0.1, 1.0, 10.0] {
        let x = s * zeta;
        if x > 0.0 && x < 28.0 {
            pts.push(x);
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let f = |u: f64| {
        let u2 = u * u;
        if zeta_sq == 0.0 {
            (-u2).exp()
        } else {
            u2 / (u2 + zeta_sq) * (-u2).exp()
        }
    };
    let cfg = QuadConfig::with_tol(1e-15, 1e-13);
    Ok(2.0 * integrate_with_breaks(f, &pts, &cfg).value)
}

/// Below `T_c`, `z -> 0` with `zeta^2` fixed: the amplitude with the `G(zeta^2)` integral.
pub fn crossover_low_t(p: &CouplingParams, m_rows: f64) -> Result<f64> {
    check_m(m_rows)?;
    let d = derived_alphas(p, REGIME_TOL);
    require(&d, Regime::BelowTc)?;
    let sp = ScalingParams::from_couplings(p, m_rows)?;
    let (z1, z2) = (p.z1(), p.z2());
    let amp = z2 * (1.0 - z2 * z2) * (1.0 + z1).powi(2) / (2.0 * PI * (1.0 - z1).powi(2));
    let root = ((1.0 - d.alpha1) * (1.0 - d.alpha2) / (2.0 * z1 * d.alpha2 * m_rows)).sqrt();
    Ok(-amp * root * low_t_decay(p, m_rows) * crossover_g(sp.zeta_sq)?)
}

/// Above `T_c`, zero field: leading `M^{-3/2}` amplitude.
pub fn asym_high_t_free(p: &CouplingParams, m_rows: f64) -> Result<f64> {
    check_m(m_rows)?;
    let d = derived_alphas(p, REGIME_TOL);
    require(&d, Regime::AboveTc)?;
    let (z1, z2) = (p.z1(), p.z2());
    let root = (2.0 * PI * z1 * d.alpha2 * (1.0 - d.alpha1) * (d.alpha2 - 1.0)).sqrt();
    let denom = 2.0 * z2 * (1.0 + z1).powi(2) * (1.0 + z2).powi(2) * root * m_rows.powf(1.5);
    Ok(-(1.0 - z1).powi(2) / denom * high_t_decay(p, m_rows))
}

/// Above `T_c`, fixed boundary field `z = p.z() > 0`: leading `M^{-1/2}`
/// amplitude, positive for every `z > 0`.
pub fn asym_high_t_field(p: &CouplingParams, m_rows: f64) -> Result<f64> {
    check_m(m_rows)?;
    let d = derived_alphas(p, REGIME_TOL);
    require(&d, Regime::AboveTc)?;
    let (z1, z2, z) = (p.z1(), p.z2(), p.z());
    if z == 0.0 {
        return domain("the finite-field amplitude needs z > 0; use asym_high_t_free");
    }
    let z_sq = z * z;
    let amp = 2.0 * (1.0 - z1).powi(2) * z_sq
        / (z2 * z2 * (1.0 + z1).powi(2) * ((d.alpha2 - 1.0) + z_sq * d.a_const));
    let root = (z1 * (d.alpha2 - 1.0) / (2.0 * PI * m_rows * d.alpha2 * (1.0 - d.alpha1))).sqrt();
    Ok(amp * root * (d.alpha2 / z2) * high_t_decay(p, m_rows))
}

/// Above `T_c`, `z -> 0` with `zeta^2` fixed: the zero-field amplitude times `(1 - 2 zeta^2)`.
pub fn crossover_high_t(p: &CouplingParams, m_rows: f64) -> Result<f64> {
    let free = asym_high_t_free(p, m_rows)?;
    let sp = ScalingParams::from_couplings(p, m_rows)?;
    Ok(free * (1.0 - 2.0 * sp.zeta_sq))
}

fn bessel_prefactor(c: &CriticalPoint, gap: f64) -> f64 {
    2.0 * c.z1c * gap / (PI * (1.0 - c.z1c * c.z1c))
}

fn scaling_inputs(c: &CriticalPoint, gap: f64, m_rows: f64, name: &str) -> Result<(f64, f64, f64)> {
    let s = scaling_variable(c, gap, m_rows);
    if !(gap > 0.0 && m_rows > 0.0 && s > 0.0) {
        return domain(format!(
            "{name} needs a positive scaling variable (gap {gap}, M {m_rows})"
        ));
    }
    let (k0, k1) = bessel_k01(s)?;
    Ok((bessel_prefactor(c, gap), k0, k1))
}

/// `T -> T_c-`, free boundary: `-(2 z1c e / (pi (1 - z1c^2))) [K1(m) + K0(m)]`, `e = 1 - alpha2`.
pub fn scaling_low_t_free(c: &CriticalPoint, one_minus_alpha2: f64, m_rows: f64) -> Result<f64> {
    let (pf, k0, k1) = scaling_inputs(c, one_minus_alpha2, m_rows, "scaling_low_t_free")?;
    Ok(-pf * (k1 + k0))
}

/// `T -> T_c-`, fixed boundary: `+(2 z1c e / (pi (1 - z1c^2))) [K1(m) - K0(m)]`.
pub fn scaling_low_t_fixed(c: &CriticalPoint, one_minus_alpha2: f64, m_rows: f64) -> Result<f64> {
    let (pf, k0, k1) = scaling_inputs(c, one_minus_alpha2, m_rows, "scaling_low_t_fixed")?;
    Ok(pf * (k1 - k0))
}

/// `T -> T_c+`, free boundary: `-(2 z1c e / (pi (1 - z1c^2))) [K1(mb) - K0(mb)]`, `e = alpha2 - 1`.
pub fn scaling_high_t_free(c: &CriticalPoint, alpha2_minus_1: f64, m_rows: f64) -> Result<f64> {
    let (pf, k0, k1) = scaling_inputs(c, alpha2_minus_1, m_rows, "scaling_high_t_free")?;
    Ok(-pf * (k1 - k0))
}

/// `T -> T_c+`, fixed boundary: `+(2 z1c e / (pi (1 - z1c^2))) [K1(mb) + K0(mb)]`.
pub fn scaling_high_t_fixed(c: &CriticalPoint, alpha2_minus_1: f64, m_rows: f64) -> Result<f64> {
    let (pf, k0, k1) = scaling_inputs(c, alpha2_minus_1, m_rows, "scaling_high_t_fixed")?;
    Ok(pf * (k1 + k0))
}

/// The crossover between free and fixed Bessel scaling forms at fixed
/// `zeta_c^2`, as an integral over `y` with weight `e^{-m cosh y}`.
pub fn crossover_scaling(sp: &ScalingParams) -> Result<f64> {
    let gap = sp.signed_gap.abs();
    let s = scaling_variable(&sp.critical, gap, sp.m_rows);
    if !(s > 0.0) {
        return domain(
            "crossover_scaling needs a positive scaling variable; use critical_crossover at m = 0",
        );
    }
    let zc = sp.zeta_c_sq;
    if !(zc >= 0.0) {
        return domain(format!("zeta_c^2 = {zc} must be non-negative"));
    }
    let below = sp.regime() == Regime::BelowTc;
    // cosh y - 1 = 2 sinh^2(y/2), exact near y = 0; e^{-s} is factored out
    let f = move |y: f64| {
        let cm1 = 2.0 * (0.5 * y).sinh().powi(2);
        let cp1 = cm1 + 2.0;
        let weight = (-s * cm1).exp();
        let ratio = if below {
            if zc == 0.0 {
                cp1
            } else {
                (s * cp1 - zc) * cm1 / (s * cm1 + zc)
            }
        } else {
            (s * cm1 - zc) * cp1 / (s * cp1 + zc)
        };
        ratio * weight
    };
    // truncate where s (cosh y - 1) reaches the underflow threshold
    let y_max = (1.0 + UNDERFLOW_EXP / s).acosh();
    let mut pts: Vec<f64> = (0..=24).map(|k| y_max * 0.5f64.powi(k)).collect();
    let knee = (2.0 * zc / s).sqrt();
    if knee > 0.0 && knee < y_max {
        pts.extend(
            [0.5 * knee, knee, 2.0 * knee]
                .into_iter()
                .filter(|&x| x < y_max),
        );
    }
    pts.push(0.0);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let cfg = QuadConfig::with_tol(1e-15, 1e-12);
    let integral = integrate_with_breaks(f, &pts, &cfg).value * (-s).exp();
    // -(z1c e / (pi (1 - z1c^2))) int_{-inf}^{inf} = -prefactor int_0^inf
    Ok(-bessel_prefactor(&sp.critical, gap) * integral)
}

/// `F(zeta) = int_0^inf (t - zeta)/(t + zeta) e^{-t} dt = 1 - 2 zeta e^zeta E1(zeta)`.
pub fn critical_crossover_f(zeta_c_sq: f64) -> Result<f64> {
    if !(zeta_c_sq >= 0.0) {
        return domain(format!("zeta_c^2 = {zeta_c_sq} must be non-negative"));
    }
    if zeta_c_sq == 0.0 {
        return Ok(1.0);
    }
    Ok(1.0 - 2.0 * zeta_c_sq * exp_scaled_e1(zeta_c_sq))
}

/// `F(zeta)` by direct quadrature of the `t` integral.
pub fn critical_crossover_f_quad(zeta_c_sq: f64) -> Result<f64> {
    if !(zeta_c_sq >= 0.0) {
        return domain(format!("zeta_c^2 = {zeta_c_sq} must be non-negative"));
    }
    let zeta = zeta_c_sq;
    let t_max = 760.0;
    let mut pts = vec![0.0, 1.0, 4.0, 16.0, 64.0, t_max];
    for s in [0.01, 0.1, 1.0, 10.0] {
        let x = s * zeta;
        if x > 0.0 && x < t_max {
            pts.push(x);
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let cfg = QuadConfig::with_tol(1e-15, 1e-13);
    let f = |t: f64| {
        if zeta == 0.0 {
            (-t).exp()
        } else {
            (t - zeta) / (t + zeta) * (-t).exp()
        }
    };
    Ok(integrate_with_breaks(f, &pts, &cfg).value)
}

/// At `T = T_c`, `z -> 0` with `zeta_c^2` fixed: `-F(zeta_c^2) / (2 pi M)`.
pub fn critical_crossover(zeta_c_sq: f64, m_rows: f64) -> Result<f64> {
    check_m(m_rows)?;
    Ok(-critical_crossover_f(zeta_c_sq)? / (2.0 * PI * m_rows))
}

/// The unique zero of `F` on `[0, inf)`.
pub fn find_crossover_zero() -> Result<f64> {
    brent(
        |x| critical_crossover_f(x).unwrap_or(f64::NAN),
        0.5,
        0.7,
        1e-14,
    )
}
