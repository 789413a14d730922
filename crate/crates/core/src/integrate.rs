//! Globally adaptive Gauss-Kronrod (7/15) integration on finite intervals.
//!
//! The interval with the largest error estimate is bisected until the total
//! estimate meets `max(abs_tol, rel_tol * |value|)`. Splitting order depends
//! only on the integrand values, so results are reproducible bit for bit.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum bisection depth of any interval.
    pub max_depth: u32,
    /// Cap on the total number of intervals.
    pub max_intervals: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_depth: 60,
            max_intervals: 20_000,
        }
    }
}

impl QuadConfig {
    pub fn with_tol(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOutcome {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
    /// False when the tolerance was not met within the depth or interval caps.
    pub converged: bool,
}

impl QuadOutcome {
    pub fn scaled(self, factor: f64) -> Self {
        Self {
            value: self.value * factor,
            abs_error: self.abs_error * factor.abs(),
            ..self
        }
    }

    /// Sum of two independent pieces.
    pub fn combine(self, other: Self) -> Self {
        Self {
            value: self.value + other.value,
            abs_error: self.abs_error + other.abs_error,
            evaluations: self.evaluations + other.evaluations,
            converged: self.converged && other.converged,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: u32,
    seq: usize,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

/// One 15-point Kronrod evaluation with the QUADPACK error heuristic.
fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (value, err)
}

/// Integrates `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadConfig) -> QuadOutcome {
    integrate_with_breaks(f, &[a, b], cfg)
}

/// Integrates `f` from `points[0]` to `points[last]`, starting from the
/// subintervals delimited by `points` (strictly increasing).
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    points: &[f64],
    cfg: &QuadConfig,
) -> QuadOutcome {
    assert!(points.len() >= 2, "need at least two points");
    debug_assert!(
        points.windows(2).all(|w| w[0] < w[1]),
        "points must increase"
    );

    let mut heap = BinaryHeap::new();
    let mut seq = 0;
    let mut evaluations = 0;
    for w in points.windows(2) {
        let (value, error) = kronrod(&f, w[0], w[1]);
        evaluations += 15;
        heap.push(Segment {
            a: w[0],
            b: w[1],
            value,
            error,
            depth: 0,
            seq,
        });
        seq += 1;
    }
    // Intervals at maximum depth are parked here and never split again.
    let mut done: Vec<Segment> = Vec::new();

    let total = |heap: &BinaryHeap<Segment>, done: &[Segment]| -> (f64, f64) {
        let mut segs: Vec<&Segment> = heap.iter().chain(done.iter()).collect();
        segs.sort_by(|x, y| x.a.total_cmp(&y.a));
        segs.iter()
            .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error))
    };

    let (mut value, mut error) = total(&heap, &done);
    let mut converged = false;
    let mut splits = 0usize;
    loop {
        if error <= cfg.abs_tol.max(cfg.rel_tol * value.abs()) {
            // confirm with an exactly ordered sum before stopping
            (value, error) = total(&heap, &done);
            if error <= cfg.abs_tol.max(cfg.rel_tol * value.abs()) {
                converged = true;
                break;
            }
        }
        if heap.len() + done.len() >= cfg.max_intervals {
            break;
        }
        let Some(worst) = heap.pop() else { break };
        if worst.depth >= cfg.max_depth {
            done.push(worst);
            continue;
        }
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            done.push(worst);
            continue;
        }
        value -= worst.value;
        error -= worst.error;
        for (lo, hi) in [(worst.a, mid), (mid, worst.b)] {
            let (v, e) = kronrod(&f, lo, hi);
            evaluations += 15;
            value += v;
            error += e;
            heap.push(Segment {
                a: lo,
                b: hi,
                value: v,
                error: e,
                depth: worst.depth + 1,
                seq,
            });
            seq += 1;
        }
        splits += 1;
        if splits.is_multiple_of(256) {
            (value, error) = total(&heap, &done);
        }
    }
    let (value, abs_error) = total(&heap, &done);
    QuadOutcome {
        value,
        abs_error,
        evaluations,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn weights_are_normalised() {
        let k: f64 = 2.0 * WGK[..7].iter().sum::<f64>() + WGK[7];
        let g: f64 = 2.0 * WG[..3].iter().sum::<f64>() + WG[3];
        assert_relative_eq!(k, 2.0, epsilon = 1e-15);
        assert_relative_eq!(g, 2.0, epsilon = 1e-15);
    }

    #[test]
    fn single_rule_exact_for_polynomials() {
        // Kronrod 15 integrates degree <= 22 exactly, Gauss 7 degree <= 13.
        for deg in 0..=22 {
            let (v, _) = kronrod(&|x: f64| x.powi(deg), -1.0, 1.0);
            let exact = if deg % 2 == 1 {
                0.0
            } else {
                2.0 / (deg as f64 + 1.0)
            };
            assert!((v - exact).abs() < 1e-14, "degree {deg}: {v} vs {exact}");
        }
    }

    #[test]
    fn smooth_integrals() {
        let cfg = QuadConfig::default();
        let r = integrate(|x: f64| x.sin(), 0.0, std::f64::consts::PI, &cfg);
        assert!(r.converged);
        assert_relative_eq!(r.value, 2.0, epsilon = 1e-13);
        let r = integrate(|x: f64| (-x * x).exp(), -10.0, 10.0, &cfg);
        assert_relative_eq!(r.value, std::f64::consts::PI.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn endpoint_singularity() {
        // plain bisection gains only sqrt(h) per level on 1/sqrt(x)
        let loose = QuadConfig::with_tol(1e-8, 1e-8);
        let r = integrate(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, &loose);
        assert!(r.converged);
        assert_relative_eq!(r.value, 2.0, epsilon = 1e-7);
        let cfg = QuadConfig::default();
        let r = integrate(|x: f64| x.ln(), 0.0, 1.0, &cfg);
        assert_relative_eq!(r.value, -1.0, epsilon = 1e-11);
    }

    #[test]
    fn kink_with_breakpoint() {
        let cfg = QuadConfig::default();
        let r = integrate_with_breaks(|x: f64| x.abs(), &[-1.0, 0.0, 2.0], &cfg);
        assert_relative_eq!(r.value, 2.5, epsilon = 1e-14);
    }

    #[test]
    fn reports_non_convergence() {
        let cfg = QuadConfig {
            max_intervals: 4,
            ..QuadConfig::default()
        };
        let r = integrate(|x: f64| (1.0 / x).sin(), 1e-6, 1.0, &cfg);
        assert!(!r.converged);
        assert!(r.abs_error > 0.0);
    }

    #[test]
    fn deterministic() {
        let cfg = QuadConfig::default();
        let f = |x: f64| (50.0 * x).cos() * (-x).exp();
        let a = integrate(f, 0.0, 10.0, &cfg);
        let b = integrate(f, 0.0, 10.0, &cfg);
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.evaluations, b.evaluations);
    }
}
