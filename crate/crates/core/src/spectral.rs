//! Momentum-dependent ingredients of the exact integral: the dispersion root
//! `alpha(theta)`, the boundary response `v/v'`, and the boundary-field ratio.
//!
//! The two combinations
//!
//! ```text
//! N = (1 - z1^2) - z2 alpha (1 + z1^2 + 2 z1 cos theta)
//! D = z2 (1 + z1^2 + 2 z1 cos theta) - (1 - z1^2) alpha
//! ```
//!
//! satisfy `N D = 4 z1^2 alpha sin^2 theta` exactly, because `alpha` and
//! `1/alpha` are the two roots of the dispersion quadratic. At most one of
//! them is small at any momentum (`D` vanishes at `theta = 0` below `T_c`,
//! `N` vanishes at `theta = 0` above `T_c` and at `theta = pi` always), so the
//! small one is recovered from the large one through the identity instead of
//! by cancellation. Everything else is expressed through `N` and `D`.

use crate::params::{CouplingParams, DerivedAlphas, Regime};

/// Below this `|theta|` the `v/v'` pole above `T_c` is reported as a [`VRatio::Pole`].
pub const POLE_WINDOW: f64 = 1e-6;

/// `v/v'` at one momentum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VRatio {
    Finite(f64),
    /// Near `theta = 0` above `T_c`, `v/v' ~ residue / theta`. Here `residue`
    /// is exactly `theta * v/v'` at the requested momentum (its `theta -> 0`
    /// limit at `theta = 0` itself).
    Pole {
        residue: f64,
        theta: f64,
    },
}

impl VRatio {
    /// Numerical value; infinite for a pole evaluated exactly at `theta = 0`.
    pub fn value(&self) -> f64 {
        match *self {
            VRatio::Finite(v) => v,
            VRatio::Pole { residue, theta } => {
                if theta == 0.0 {
                    f64::INFINITY.copysign(residue)
                } else {
                    residue / theta
                }
            }
        }
    }
}

/// All spectral quantities at one momentum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralEval {
    pub theta: f64,
    pub alpha: f64,
    pub v_ratio: VRatio,
    /// `[(1 + a1^2 - 2 a1 cos theta)(1 + a2^2 - 2 a2 cos theta)]^(1/2)`.
    pub sqrt_factor: f64,
}

/// Shared per-momentum state used by the integrands.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Kernel {
    pub z1: f64,
    pub alpha: f64,
    pub ln_alpha: f64,
    pub sqrt_factor: f64,
    /// `sin(theta/2)` and `cos(theta/2)`.
    pub sin_half: f64,
    pub cos_half: f64,
    pub n: f64,
    pub d: f64,
}

impl Kernel {
    pub fn new(d: &DerivedAlphas, p: &CouplingParams, theta: f64) -> Self {
        let (z1, z2) = (p.z1(), p.z2());
        let (sin_half, cos_half) = (0.5 * theta).sin_cos();
        let s2 = sin_half * sin_half;
        // 1 + a^2 - 2 a cos(theta) = (1 - a)^2 + 4 a sin^2(theta/2)
        let f1 = (1.0 - d.alpha1).powi(2) + 4.0 * d.alpha1 * s2;
        let f2 = (1.0 - d.alpha2).powi(2) + 4.0 * d.alpha2 * s2;
        let sqrt_factor = (f1 * f2).sqrt();
        let cos_t = 1.0 - 2.0 * s2;
        let q = (1.0 + z1 * z1) * (1.0 + z2 * z2) - 2.0 * z1 * (1.0 - z2 * z2) * cos_t;
        let one_m_z1sq = 1.0 - z1 * z1;
        let alpha = (q + z1 * (1.0 + z2).powi(2) * sqrt_factor) / (2.0 * z2 * one_m_z1sq);
        // 1 + z1^2 + 2 z1 cos(theta) = (1 + z1)^2 - 4 z1 sin^2(theta/2)
        let pp = (1.0 + z1).powi(2) - 4.0 * z1 * s2;
        let mut n = one_m_z1sq - z2 * alpha * pp;
        let mut dd = z2 * pp - one_m_z1sq * alpha;
        let product = 16.0 * z1 * z1 * alpha * s2 * cos_half * cos_half;
        if n.abs() >= dd.abs() {
            if n != 0.0 {
                dd = product / n;
            }
        } else {
            n = product / dd;
        }
        Kernel {
            z1,
            alpha,
            ln_alpha: alpha.ln(),
            sqrt_factor,
            sin_half,
            cos_half,
            n,
            d: dd,
        }
    }

    /// `v/v' = D / (2 z1 sin theta)`, written so that whichever of `N`, `D` is
    /// large sets the scale.
    pub fn v_ratio(&self) -> f64 {
        let sin_t = 2.0 * self.sin_half * self.cos_half;
        if self.n.abs() >= self.d.abs() {
            2.0 * self.z1 * self.alpha * sin_t / self.n
        } else {
            self.d / (2.0 * self.z1 * sin_t)
        }
    }

    /// The bracketed boundary factor with `c = z^2 / z2`.
    pub fn boundary_ratio(&self, c: f64) -> f64 {
        if c == 0.0 {
            return 1.0;
        }
        let (s2, k2) = (self.sin_half.powi(2), self.cos_half.powi(2));
        let (z1, a) = (self.z1, self.alpha);
        if self.n.abs() >= self.d.abs() {
            let w = 4.0 * z1 * a * s2;
            w * (self.n + 4.0 * c * z1 * a * k2) / (self.n * (w - c * self.n))
        } else {
            self.d * (4.0 * z1 * s2 + c * self.d) / (4.0 * z1 * s2 * (self.d - 4.0 * z1 * c * k2))
        }
    }

    /// `N` times the boundary factor; finite at every momentum.
    pub fn weighted_numerator(&self, c: f64) -> f64 {
        if c == 0.0 {
            return self.n;
        }
        let (s2, k2) = (self.sin_half.powi(2), self.cos_half.powi(2));
        let (z1, a) = (self.z1, self.alpha);
        if self.n.abs() >= self.d.abs() {
            let w = 4.0 * z1 * a * s2;
            w * (self.n + 4.0 * c * z1 * a * k2) / (w - c * self.n)
        } else {
            4.0 * z1 * a * k2 * (4.0 * z1 * s2 + c * self.d) / (self.d - 4.0 * z1 * c * k2)
        }
    }
}

/// The larger root of the dispersion quadratic at momentum `theta`.
pub fn alpha_of_theta(d: &DerivedAlphas, p: &CouplingParams, theta: f64) -> f64 {
    Kernel::new(d, p, theta).alpha
}

/// `v/v'` at momentum `theta`. Odd in `theta`.
///
/// At `theta = 0` the ratio is zero below `T_c` and a pole above it. At `T_c`
/// it jumps between `-1` and `+1` across the origin and `0` is returned at the
/// origin itself.
pub fn v_ratio(d: &DerivedAlphas, p: &CouplingParams, theta: f64) -> VRatio {
    let k = Kernel::new(d, p, theta);
    if d.regime == Regime::AboveTc && theta.abs() < POLE_WINDOW {
        let z1 = p.z1();
        // theta / sin(theta) via the half angle, exact at 0
        let theta_over_sin = if theta == 0.0 {
            1.0
        } else {
            theta / (2.0 * k.sin_half * k.cos_half)
        };
        return VRatio::Pole {
            residue: k.d / (2.0 * z1) * theta_over_sin,
            theta,
        };
    }
    if theta == 0.0 {
        return VRatio::Finite(0.0);
    }
    VRatio::Finite(k.v_ratio())
}

/// The boundary-field ratio
/// `[tan(theta/2) + (z^2/z2) v/v'] / [tan(theta/2) - (z^2/z2) v'/v]`, the real
/// form of the complex bracket. Even in `theta`, identically `1` when `z = 0`.
///
/// At `theta = +-pi` the value is the limit `1 + z^2 D(pi) / (4 z1 z2)`: `v/v'`
/// diverges there together with `tan(theta/2)`.
pub fn boundary_ratio(d: &DerivedAlphas, p: &CouplingParams, z: f64, theta: f64) -> f64 {
    let c = z * z / p.z2();
    Kernel::new(d, p, theta).boundary_ratio(c)
}

pub fn spectral_eval(d: &DerivedAlphas, p: &CouplingParams, theta: f64) -> SpectralEval {
    let k = Kernel::new(d, p, theta);
    SpectralEval {
        theta,
        alpha: k.alpha,
        v_ratio: v_ratio(d, p, theta),
        sqrt_factor: k.sqrt_factor,
    }
}
