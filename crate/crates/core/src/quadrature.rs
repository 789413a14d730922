//! The exact energy integrals: the boundary-induced deviation `I(M)` and the
//! bulk vertical energy, the latter in two independent forms.

use std::f64::consts::PI;

use crate::error::{domain, Result};
use crate::integrate::{integrate_with_breaks, QuadConfig, QuadOutcome};
use crate::params::{derived_alphas, CouplingParams, DerivedAlphas, REGIME_TOL};
use crate::spectral::Kernel;

/// Tolerances used for the bulk integrals.
const BULK_ABS_TOL: f64 = 1e-13;
const BULK_REL_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyQuery {
    pub params: CouplingParams,
    /// Row distance `M` of the bond `(M-1, M)` from the boundary row `1`.
    pub m_rows: u32,
    /// Absolute tolerance on `I(M) * alpha(0)^(2M-1)`, the deviation with its
    /// exponential decay divided out.
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl EnergyQuery {
    pub fn new(params: CouplingParams, m_rows: u32) -> Self {
        let cfg = QuadConfig::default();
        Self {
            params,
            m_rows,
            abs_tol: cfg.abs_tol,
            rel_tol: cfg.rel_tol,
        }
    }

    pub fn with_tol(mut self, abs_tol: f64, rel_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self.rel_tol = rel_tol;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.m_rows == 0 {
            return domain("M must be at least 1");
        }
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return domain(format!(
                "tolerances must be positive (abs {}, rel {})",
                self.abs_tol, self.rel_tol
            ));
        }
        Ok(())
    }
}

/// `I(M)` with its quadrature diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Deviation {
    pub value: f64,
    pub est_error: f64,
    pub evaluations: usize,
    /// False when the requested tolerance was not reached.
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BulkEnergy {
    pub form1: f64,
    pub form2: f64,
    pub est_error: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyResult {
    pub deviation: f64,
    pub bulk_form1: f64,
    pub bulk_form2: f64,
    /// `bulk_form2 + deviation`.
    pub total: f64,
    pub est_error: f64,
    /// Set when any of the integrals missed its tolerance.
    pub warning: bool,
}

/// `[0, pi]` with a geometric ladder of breakpoints towards the origin, where
/// the integrands vary on the scale of the distance from criticality.
fn graded_half_range() -> Vec<f64> {
    let mut pts: Vec<f64> = (1..=24).rev().map(|k| PI * 0.25f64.powi(k)).collect();
    pts.insert(0, 0.0);
    pts.push(PI);
    pts
}

/// Integrand of `I(M)` divided by `alpha(0)^-(2M-1)`, without the prefactor.
fn deviation_integrand(
    p: CouplingParams,
    d: DerivedAlphas,
    m_rows: u32,
) -> (impl Fn(f64) -> f64, f64) {
    let c = p.z() * p.z() / p.z2();
    let exponent = 2.0 * f64::from(m_rows) - 1.0;
    let ln_alpha0 = Kernel::new(&d, &p, 0.0).ln_alpha;
    let f = move |theta: f64| {
        let k = Kernel::new(&d, &p, theta);
        let weight = (-exponent * (k.ln_alpha - ln_alpha0)).exp();
        weight * k.weighted_numerator(c) / k.sqrt_factor
    };
    (f, exponent * ln_alpha0)
}

/// The deviation `I(M) = <s_{M,0} s_{M-1,0}> - <E^v>_bulk` by adaptive
/// quadrature of the exact momentum integral.
pub fn energy_deviation(q: &EnergyQuery) -> Result<Deviation> {
    q.validate()?;
    let p = q.params;
    let d = derived_alphas(&p, REGIME_TOL);
    let (f, log_decay) = deviation_integrand(p, d, q.m_rows);
    // even integrand: (alpha2 / 2 pi) * 2 * int_0^pi
    let pref = d.alpha2 / PI;
    let cfg = QuadConfig::with_tol(q.abs_tol / pref, q.rel_tol);
    let out = integrate_with_breaks(f, &graded_half_range(), &cfg);
    let out = out.scaled(pref * (-log_decay).exp());
    Ok(Deviation {
        value: out.value,
        est_error: out.abs_error,
        evaluations: out.evaluations,
        converged: out.converged,
    })
}

/// Continuous branch of `arg(1 - a e^{i theta})` on `[0, pi]`.
fn unit_factor_phase(a: f64, theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    if a < 1.0 {
        -(a * s).atan2(1.0 - a * c)
    } else {
        PI + theta + (s / a).atan2(1.0 - c / a)
    }
}

/// Phase `psi` with `[(1 - a3 e^{it})(1 - a4 e^{-it}) / ((1 - a3 e^{-it})(1 - a4 e^{it}))]^{1/2} = e^{i psi}`;
/// the modulus of the ratio is exactly one.
pub(crate) fn bulk_phase(alpha3: f64, alpha4: f64, theta: f64) -> f64 {
    unit_factor_phase(alpha3, theta) - unit_factor_phase(alpha4, theta)
}

fn bulk_form1(p: &CouplingParams, d: &DerivedAlphas) -> QuadOutcome {
    let (z1, z2) = (p.z1(), p.z2());
    let (p, d) = (*p, *d);
    // the roots are alpha and 1/alpha, so 1 - alpha^2 = -alpha z1 (1 + z2)^2 S / (z2 (1 - z1^2))
    let f = move |theta: f64| {
        let k = Kernel::new(&d, &p, theta);
        k.n / (k.alpha * k.sqrt_factor)
    };
    let cfg = QuadConfig::with_tol(BULK_ABS_TOL, BULK_REL_TOL);
    let pref = -(1.0 - z2 * z2) / (PI * z1 * (1.0 + z2).powi(2));
    let out = integrate_with_breaks(f, &graded_half_range(), &cfg).scaled(pref);
    QuadOutcome {
        value: z2 + out.value,
        ..out
    }
}

fn bulk_form2(d: &DerivedAlphas) -> QuadOutcome {
    let (a3, a4) = (d.alpha3, d.alpha4);
    let cfg = QuadConfig::with_tol(BULK_ABS_TOL, BULK_REL_TOL);
    integrate_with_breaks(
        |t: f64| bulk_phase(a3, a4, t).cos(),
        &graded_half_range(),
        &cfg,
    )
    .scaled(1.0 / PI)
}

/// Bulk vertical energy `<E^v>_bulk` in its two forms `(form1, form2)`.
pub fn bulk_energy(p: &CouplingParams) -> BulkEnergy {
    let d = derived_alphas(p, REGIME_TOL);
    let f1 = bulk_form1(p, &d);
    let f2 = bulk_form2(&d);
    BulkEnergy {
        form1: f1.value,
        form2: f2.value,
        est_error: f1.abs_error.max(f2.abs_error),
        converged: f1.converged && f2.converged,
    }
}

/// `<s_{M,0} s_{M-1,0}>` assembled from the bulk energy and the deviation.
pub fn total_energy_density(q: &EnergyQuery) -> Result<EnergyResult> {
    let dev = energy_deviation(q)?;
    let bulk = bulk_energy(&q.params);
    Ok(EnergyResult {
        deviation: dev.value,
        bulk_form1: bulk.form1,
        bulk_form2: bulk.form2,
        total: bulk.form2 + dev.value,
        est_error: dev.est_error + bulk.est_error,
        warning: !(dev.converged && bulk.converged),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::critical_z2;
    use approx::assert_relative_eq;
    use num_complex::Complex64;
    use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

    const ZC: f64 = SQRT_2 - 1.0;

    fn params(z1: f64, z2: f64, z: f64) -> CouplingParams {
        CouplingParams::new(z1, z2, z).unwrap()
    }

    fn dev(z1: f64, z2: f64, z: f64, m: u32) -> f64 {
        energy_deviation(&EnergyQuery::new(params(z1, z2, z), m))
            .unwrap()
            .value
    }

    /// Nearest-neighbour correlation of the isotropic lattice from the
    /// elliptic-integral closed form, with K(k) by the AGM.
    fn onsager_isotropic(z: f64) -> f64 {
        let beta = z.atanh();
        let k = 2.0 * (2.0 * beta).sinh() / (2.0 * beta).cosh().powi(2);
        let (mut a, mut g) = (1.0, (1.0 - k * k).sqrt());
        for _ in 0..40 {
            let (a1, g1) = (0.5 * (a + g), (a * g).sqrt());
            a = a1;
            g = g1;
        }
        let kk = PI / (2.0 * a);
        let t = (2.0 * beta).tanh();
        0.5 / t * (1.0 + 2.0 / PI * (2.0 * t * t - 1.0) * kk)
    }

    #[test]
    fn bulk_at_isotropic_critical_point() {
        let b = bulk_energy(&params(ZC, ZC, 0.0));
        assert!(b.converged);
        assert!((b.form1 - FRAC_1_SQRT_2).abs() < 1e-9, "form1 {}", b.form1);
        assert!((b.form2 - FRAC_1_SQRT_2).abs() < 1e-9, "form2 {}", b.form2);
    }

    #[test]
    fn bulk_matches_onsager_on_both_sides() {
        for &z in &[0.2, 0.3, 0.4, 0.5, 0.7] {
            let b = bulk_energy(&params(z, z, 0.0));
            let exact = onsager_isotropic(z);
            assert_relative_eq!(b.form1, exact, epsilon = 1e-10);
            assert_relative_eq!(b.form2, exact, epsilon = 1e-10);
        }
    }

    #[test]
    fn bulk_ground_state_limit() {
        let b = bulk_energy(&params(0.999, 0.999, 0.0));
        assert!((b.form2 - 1.0).abs() < 1e-3);
        assert!((b.form1 - b.form2).abs() < 1e-9);
    }

    #[test]
    fn phase_rewrite_matches_complex_evaluation() {
        let pts = [
            (0.1, 0.2, 0.3),
            (0.5, 0.5, 1.1),
            (0.3, 0.3, 2.9),
            (0.9, 0.1, 0.05),
            (0.2, 0.8, 1.7),
            (0.6, 0.3, 0.4),
            (0.15, 0.15, 2.2),
            (0.7, 0.7, 0.9),
            (0.45, 0.35, 1.3),
            (0.25, 0.6, 2.6),
        ];
        let mut checked = 0;
        for &(z1, z2, th) in &pts {
            for theta in [th, PI - 0.5 * th] {
                let d = derived_alphas(&params(z1, z2, 0.0), REGIME_TOL);
                let e = Complex64::from_polar(1.0, theta);
                let ratio = (1.0 - d.alpha3 * e) * (1.0 - d.alpha4 / e)
                    / ((1.0 - d.alpha3 / e) * (1.0 - d.alpha4 * e));
                let psi = bulk_phase(d.alpha3, d.alpha4, theta);
                // e^{2 i psi} is the ratio itself; the root differs from the
                // principal one at most by a sign
                let two = Complex64::from_polar(1.0, 2.0 * psi);
                assert!((two - ratio).norm() < 1e-12);
                assert!((ratio.norm() - 1.0).abs() < 1e-12);
                assert_relative_eq!(psi.cos().abs(), ratio.sqrt().re.abs(), epsilon = 1e-12);
                checked += 1;
            }
        }
        assert_eq!(checked, 20);
    }

    #[test]
    fn free_critical_limit() {
        let m = 100;
        let v = f64::from(m) * dev(ZC, ZC, 0.0, m);
        assert!((v / (-0.5 / PI) - 1.0).abs() < 0.02, "{v}");
    }

    #[test]
    fn fixed_critical_limit() {
        let m = 100;
        let v = f64::from(m) * dev(ZC, ZC, 1.0, m);
        assert!((v / (0.5 / PI) - 1.0).abs() < 0.02, "{v}");
    }

    #[test]
    fn critical_sequences_approach_monotonically() {
        for (z, target) in [(0.0, -0.5 / PI), (1.0, 0.5 / PI)] {
            let gaps: Vec<f64> = [25u32, 50, 100]
                .iter()
                .map(|&m| (f64::from(m) * dev(ZC, ZC, z, m) - target).abs())
                .collect();
            assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "{gaps:?}");
        }
    }

    #[test]
    fn deviation_at_one_row_is_single_bond() {
        // The bond (0, 1) couples to the lattice only through one spin.
        for &(z1, z2) in &[(0.5, 0.5), (0.3, 0.3), (0.2, 0.7)] {
            let p = params(z1, z2, 0.0);
            let b = bulk_energy(&p);
            assert_relative_eq!(b.form2 + dev(z1, z2, 0.0, 1), z2, epsilon = 1e-10);
        }
    }

    #[test]
    fn decay_ratio_follows_the_mass() {
        for &(z1, z2) in &[(0.5, 0.5), (0.3, 0.3)] {
            let p = params(z1, z2, 0.0);
            let d = derived_alphas(&p, REGIME_TOL);
            let a0 = crate::spectral::alpha_of_theta(&d, &p, 0.0);
            let r = dev(z1, z2, 0.0, 41) / dev(z1, z2, 0.0, 40);
            assert!((r * a0 * a0 - 1.0).abs() < 0.05, "{}", r * a0 * a0);
            let r2 = dev(z1, z2, 0.0, 401) / dev(z1, z2, 0.0, 400);
            assert!((r2 * a0 * a0 - 1.0).abs() < 0.01);
        }
    }

    #[test]
    fn full_range_equals_twice_half_range() {
        for &(z1, z2, z) in &[(0.5, 0.5, 0.0), (0.3, 0.3, 0.6), (ZC, ZC, 1.0)] {
            let p = params(z1, z2, z);
            let d = derived_alphas(&p, REGIME_TOL);
            let (f, log_decay) = deviation_integrand(p, d, 7);
            let half = graded_half_range();
            let mut pts: Vec<f64> = half
                .iter()
                .rev()
                .filter(|&&x| x > 0.0)
                .map(|x| -x)
                .collect();
            pts.extend_from_slice(&half);
            let cfg = QuadConfig::with_tol(1e-13, 1e-12);
            let full = integrate_with_breaks(&f, &pts, &cfg).value * d.alpha2 / (2.0 * PI);
            let full = full * (-log_decay).exp();
            assert_relative_eq!(full, dev(z1, z2, z, 7), max_relative = 1e-10);
        }
    }

    #[test]
    fn decays_from_first_row() {
        assert!(dev(0.5, 0.5, 0.0, 2).abs() < dev(0.5, 0.5, 0.0, 1).abs());
    }

    #[test]
    fn total_assembles_pieces() {
        let q = EnergyQuery::new(params(ZC, ZC, 0.0), 100);
        let r = total_energy_density(&q).unwrap();
        assert_eq!(r.total, r.bulk_form2 + r.deviation);
        assert!(!r.warning);
        let expected = FRAC_1_SQRT_2 - 0.5 / (PI * 100.0);
        assert!((r.total - expected).abs() < 0.02 * 0.5 / (PI * 100.0));
    }

    #[test]
    fn zero_field_from_physical_is_identical() {
        use crate::params::{couplings_from_physical, BoundaryField};
        let p = couplings_from_physical(0.7, 0.4, BoundaryField::Finite(0.0), 1.3).unwrap();
        let q = params(p.z1(), p.z2(), 0.0);
        let a = total_energy_density(&EnergyQuery::new(p, 9)).unwrap();
        let b = total_energy_density(&EnergyQuery::new(q, 9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn criticality_away_from_isotropy() {
        let c = critical_z2(0.25).unwrap();
        let b = bulk_energy(&params(c.z1c, c.z2c, 0.0));
        assert!((b.form1 - b.form2).abs() < 1e-9);
        let m = 200;
        let v = f64::from(m) * dev(c.z1c, c.z2c, 0.0, m);
        assert!((v / (-0.5 / PI) - 1.0).abs() < 0.02, "{v}");
    }

    #[test]
    fn rejects_bad_queries() {
        let p = params(0.5, 0.5, 0.0);
        assert!(energy_deviation(&EnergyQuery::new(p, 0)).is_err());
        assert!(energy_deviation(&EnergyQuery::new(p, 3).with_tol(0.0, 1e-10)).is_err());
    }

    #[test]
    fn tight_cap_sets_warning() {
        let p = params(ZC, ZC, 1.0);
        let q = EnergyQuery::new(p, 50).with_tol(1e-300, 1e-300);
        let d = energy_deviation(&q).unwrap();
        assert!(!d.converged);
        assert!(d.value.is_finite());
    }
}
