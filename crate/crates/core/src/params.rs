//! Reduced couplings, the constants derived from them, and the temperature
//! regime classification.

use crate::error::{domain, Result};

/// Tolerance on `|alpha2 - 1|` below which parameters are treated as critical.
pub const REGIME_TOL: f64 = 1e-9;

/// Reduced couplings `z1 = tanh(E1/kT)`, `z2 = tanh(E2/kT)` and the boundary
/// variable `z = tanh(Hb/kT)`. `z = 1` is an infinite boundary field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingParams {
    z1: f64,
    z2: f64,
    z: f64,
}

impl CouplingParams {
    pub fn new(z1: f64, z2: f64, z: f64) -> Result<Self> {
        if !(z1 > 0.0 && z1 < 1.0) {
            return domain(format!("z1 = {z1} must lie in (0, 1)"));
        }
        if !(z2 > 0.0 && z2 < 1.0) {
            return domain(format!("z2 = {z2} must lie in (0, 1)"));
        }
        if !(0.0..=1.0).contains(&z) {
            return domain(format!("z = {z} must lie in [0, 1]"));
        }
        Ok(Self { z1, z2, z })
    }

    pub fn z1(&self) -> f64 {
        self.z1
    }

    pub fn z2(&self) -> f64 {
        self.z2
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    /// Same bulk couplings with a different boundary variable.
    pub fn with_z(&self, z: f64) -> Result<Self> {
        Self::new(self.z1, self.z2, z)
    }

    pub fn is_free(&self) -> bool {
        self.z == 0.0
    }
}

/// Boundary field in units of `k_B`, possibly infinite (all-up boundary row).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryField {
    Finite(f64),
    Infinite,
}

/// Builds reduced couplings from interaction energies, boundary field and
/// temperature, all in units where `k_B = 1`.
pub fn couplings_from_physical(
    e1: f64,
    e2: f64,
    hb: BoundaryField,
    temperature: f64,
) -> Result<CouplingParams> {
    if !(temperature > 0.0 && temperature.is_finite()) {
        return domain(format!("temperature {temperature} must be positive"));
    }
    if !(e1 > 0.0 && e2 > 0.0) {
        return domain(format!("couplings E1 = {e1}, E2 = {e2} must be positive"));
    }
    let z = match hb {
        BoundaryField::Infinite => 1.0,
        BoundaryField::Finite(h) if h >= 0.0 => (h / temperature).tanh(),
        BoundaryField::Finite(h) => return domain(format!("boundary field {h} must be >= 0")),
    };
    CouplingParams::new((e1 / temperature).tanh(), (e2 / temperature).tanh(), z)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    BelowTc,
    AtTc,
    AboveTc,
}

/// Constants fixed by the bulk couplings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedAlphas {
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    pub alpha4: f64,
    /// The constant `A = 4 / ((1 + z2)^2 (1 - alpha1))`.
    pub a_const: f64,
    pub regime: Regime,
}

impl DerivedAlphas {
    /// `A` through its other closed form, `(1 - alpha2) + alpha2 (1 + z1)^2 / (1 - alpha1)`.
    pub fn a_const_expanded(&self, p: &CouplingParams) -> f64 {
        let z1 = p.z1();
        (1.0 - self.alpha2) + self.alpha2 * (1.0 + z1) * (1.0 + z1) / (1.0 - self.alpha1)
    }

    /// Signed distance from criticality, `1 - alpha2` (positive below `T_c`).
    pub fn gap(&self) -> f64 {
        1.0 - self.alpha2
    }
}

pub fn derived_alphas(p: &CouplingParams, regime_tol: f64) -> DerivedAlphas {
    let (z1, z2) = (p.z1(), p.z2());
    let alpha1 = z1 * (1.0 - z2) / (1.0 + z2);
    let alpha2 = (1.0 - z2) / (z1 * (1.0 + z2));
    let alpha3 = z2 * (1.0 - z1) / (1.0 + z1);
    let alpha4 = (1.0 - z1) / (z2 * (1.0 + z1));
    let a_const = 4.0 / ((1.0 + z2) * (1.0 + z2) * (1.0 - alpha1));
    let regime = if (alpha2 - 1.0).abs() <= regime_tol {
        Regime::AtTc
    } else if alpha2 < 1.0 {
        Regime::BelowTc
    } else {
        Regime::AboveTc
    };
    DerivedAlphas {
        alpha1,
        alpha2,
        alpha3,
        alpha4,
        a_const,
        regime,
    }
}

/// A point on the critical line `z1 z2 + z1 + z2 = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPoint {
    pub z1c: f64,
    pub z2c: f64,
}

impl CriticalPoint {
    /// `z1c z2c + z1c + z2c - 1`; zero up to rounding.
    pub fn residual(&self) -> f64 {
        self.z1c * self.z2c + self.z1c + self.z2c - 1.0
    }
}

/// The critical vertical coupling for a given horizontal one.
pub fn critical_z2(z1: f64) -> Result<CriticalPoint> {
    if !(z1 > 0.0 && z1 < 1.0) {
        return domain(format!("z1 = {z1} must lie in (0, 1)"));
    }
    Ok(CriticalPoint {
        z1c: z1,
        z2c: (1.0 - z1) / (1.0 + z1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const ZC: f64 = std::f64::consts::SQRT_2 - 1.0;

    #[test]
    fn physical_to_reduced() {
        let p = couplings_from_physical(
            0.5f64.atanh(),
            0.5f64.atanh(),
            BoundaryField::Finite(0.0),
            1.0,
        )
        .unwrap();
        assert_relative_eq!(p.z1(), 0.5, epsilon = 1e-15);
        assert_relative_eq!(p.z2(), 0.5, epsilon = 1e-15);
        assert_eq!(p.z(), 0.0);

        let p = couplings_from_physical(1.0, 1.0, BoundaryField::Infinite, 2.0).unwrap();
        assert_eq!(p.z(), 1.0);

        let t = 3.0;
        let p = couplings_from_physical(1.0, 1.0, BoundaryField::Finite(t * 0.3f64.atanh()), t)
            .unwrap();
        assert_relative_eq!(p.z(), 0.3, epsilon = 1e-15);
    }

    #[test]
    fn physical_domain_errors() {
        assert!(couplings_from_physical(1.0, 1.0, BoundaryField::Finite(0.0), 0.0).is_err());
        assert!(couplings_from_physical(1.0, 1.0, BoundaryField::Finite(0.0), -1.0).is_err());
        assert!(couplings_from_physical(0.0, 1.0, BoundaryField::Finite(0.0), 1.0).is_err());
        assert!(couplings_from_physical(1.0, -1.0, BoundaryField::Finite(0.0), 1.0).is_err());
        assert!(couplings_from_physical(1.0, 1.0, BoundaryField::Finite(-0.1), 1.0).is_err());
        // tanh rounds to exactly 1 at very low temperature
        assert!(couplings_from_physical(1.0, 1.0, BoundaryField::Finite(0.0), 1e-3).is_err());
    }

    #[test]
    fn isotropic_critical_alphas() {
        let p = CouplingParams::new(ZC, ZC, 0.0).unwrap();
        let d = derived_alphas(&p, REGIME_TOL);
        assert_relative_eq!(d.alpha2, 1.0, epsilon = 1e-15);
        assert_relative_eq!(d.alpha1, 3.0 - 2.0 * 2f64.sqrt(), epsilon = 1e-15);
        assert_eq!(d.regime, Regime::AtTc);
    }

    #[test]
    fn below_and_above() {
        let p = CouplingParams::new(0.5, 0.5, 0.0).unwrap();
        let d = derived_alphas(&p, REGIME_TOL);
        assert_relative_eq!(d.alpha1, 1.0 / 6.0, epsilon = 1e-15);
        assert_relative_eq!(d.alpha2, 2.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(d.a_const, 32.0 / 15.0, epsilon = 1e-14);
        assert_relative_eq!(d.a_const_expanded(&p), 32.0 / 15.0, epsilon = 1e-14);
        assert_eq!(d.regime, Regime::BelowTc);

        let p = CouplingParams::new(0.3, 0.3, 0.0).unwrap();
        let d = derived_alphas(&p, REGIME_TOL);
        assert_relative_eq!(d.alpha2, 0.7 / 0.39, epsilon = 1e-14);
        assert_eq!(d.regime, Regime::AboveTc);
    }

    #[test]
    fn critical_line() {
        let c = critical_z2(ZC).unwrap();
        assert_relative_eq!(c.z2c, ZC, epsilon = 1e-15);
        let c = critical_z2(0.5).unwrap();
        assert_relative_eq!(c.z2c, 1.0 / 3.0, epsilon = 1e-15);
        let c = critical_z2(1e-12).unwrap();
        assert!(c.z2c < 1.0 && c.z2c > 1.0 - 1e-11);
        assert!(critical_z2(0.0).is_err());
        assert!(critical_z2(1.0).is_err());
    }

    #[test]
    fn invalid_params() {
        assert!(CouplingParams::new(0.0, 0.5, 0.0).is_err());
        assert!(CouplingParams::new(0.5, 1.0, 0.0).is_err());
        assert!(CouplingParams::new(0.5, 0.5, 1.0 + 1e-12).is_err());
        assert!(CouplingParams::new(f64::NAN, 0.5, 0.0).is_err());
        assert!(CouplingParams::new(0.5, 0.5, 1.0).is_ok());
    }

    proptest! {
        #[test]
        fn both_forms_of_a_agree(z1 in 0.01f64..0.99, z2 in 0.01f64..0.99) {
            let p = CouplingParams::new(z1, z2, 0.0).unwrap();
            let d = derived_alphas(&p, REGIME_TOL);
            let alt = d.a_const_expanded(&p);
            prop_assert!((d.a_const - alt).abs() <= 1e-12 * d.a_const.abs());
            prop_assert!(d.alpha1 <= 1.0 - 1e-12 && d.alpha1 > 0.0);
            let prod = ((1.0 - z2) / (1.0 + z2)).powi(2);
            prop_assert!((d.alpha1 * d.alpha2 - prod).abs() <= 1e-14);
        }

        #[test]
        fn critical_line_has_unit_alpha2(z1 in 0.05f64..0.95) {
            let c = critical_z2(z1).unwrap();
            prop_assert!(c.residual().abs() <= 1e-14);
            let p = CouplingParams::new(c.z1c, c.z2c, 0.0).unwrap();
            let d = derived_alphas(&p, REGIME_TOL);
            prop_assert!((d.alpha2 - 1.0).abs() <= 1e-12);
            prop_assert_eq!(d.regime, Regime::AtTc);
        }
    }
}
