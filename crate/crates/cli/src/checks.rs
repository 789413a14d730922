//! The validation suite: fourteen numbered checks, each reducing to a
//! pass/fail verdict plus the numbers behind it.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use ising_edge::integrate::{integrate, integrate_with_breaks, QuadConfig};
use ising_edge::{
    asym_high_t_field, asym_high_t_free, asym_low_t_free, bessel_k0, bessel_k1, brute_force_energy,
    bulk_energy, critical_crossover_f, critical_crossover_f_quad, critical_z2, crossover_g,
    crossover_high_t, crossover_scaling, derived_alphas, energy_deviation, exp_integral_e1,
    find_crossover_zero, scaling_high_t_fixed, scaling_low_t_fixed, scaling_low_t_free,
    total_energy_density, transfer_matrix_energy, CouplingParams, EnergyQuery, OracleConfig,
    Regime, Result, ScalingParams, REGIME_TOL,
};

use crate::output::{Cell, Table};
use crate::tables;

const ZC: f64 = SQRT_2 - 1.0;
/// The located zero of the critical crossover function.
pub const CROSSOVER_ZERO: f64 = 0.610058;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl std::fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "[{verdict}] {:02} {}: {}",
            self.id, self.title, self.detail
        )
    }
}

fn outcome(id: u8, title: &'static str, res: Result<(bool, String)>) -> CheckOutcome {
    let (passed, detail) = res.unwrap_or_else(|e| (false, format!("error: {e}")));
    CheckOutcome {
        id,
        title,
        passed,
        detail,
    }
}

fn params(z1: f64, z2: f64, z: f64) -> Result<CouplingParams> {
    CouplingParams::new(z1, z2, z)
}

fn deviation(p: CouplingParams, m: u32) -> Result<f64> {
    Ok(energy_deviation(&EnergyQuery::new(p, m))?.value)
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

/// Couplings on the isotropic `z1` with `alpha2 = 1 - signed_gap` exactly.
fn near_critical(signed_gap: f64, z: f64) -> Result<CouplingParams> {
    let w = ZC * (1.0 - signed_gap);
    params(ZC, (1.0 - w) / (1.0 + w), z)
}

pub fn bulk_at_criticality() -> CheckOutcome {
    outcome(
        1,
        "bulk value at criticality",
        (|| {
            let start = std::time::Instant::now();
            let b = bulk_energy(&params(ZC, ZC, 0.0)?);
            let secs = start.elapsed().as_secs_f64();
            let (e1, e2) = (
                (b.form1 - FRAC_1_SQRT_2).abs(),
                (b.form2 - FRAC_1_SQRT_2).abs(),
            );
            Ok((
                e1 <= 1e-9 && e2 <= 1e-9 && secs < 1.0,
                format!("|form1 - 1/sqrt2| = {e1:.2e}, |form2 - 1/sqrt2| = {e2:.2e}, {secs:.3} s"),
            ))
        })(),
    )
}

pub fn bulk_form_equivalence() -> CheckOutcome {
    outcome(
        2,
        "bulk-form equivalence on a 10x10 grid",
        (|| {
            let mut worst: f64 = 0.0;
            let mut count = 0;
            for i in 0..10 {
                for j in 0..10 {
                    let (z1, z2) = (
                        0.1 + 0.8 * f64::from(i) / 9.0,
                        0.1 + 0.8 * f64::from(j) / 9.0,
                    );
                    let p = params(z1, z2, 0.0)?;
                    if derived_alphas(&p, REGIME_TOL).regime == Regime::AtTc {
                        continue;
                    }
                    let b = bulk_energy(&p);
                    worst = worst.max((b.form1 - b.form2).abs());
                    count += 1;
                }
            }
            Ok((
                worst <= 1e-9,
                format!("max |form1 - form2| = {worst:.2e} over {count} points"),
            ))
        })(),
    )
}

fn critical_limit(id: u8, title: &'static str, z: f64, target: f64) -> CheckOutcome {
    outcome(
        id,
        title,
        (|| {
            let p = params(ZC, ZC, z)?;
            let mut gaps = Vec::new();
            let mut scaled = 0.0;
            for m in [25u32, 50, 100] {
                scaled = f64::from(m) * deviation(p, m)?;
                gaps.push((scaled - target).abs());
            }
            let rel = gaps[2] / target.abs();
            Ok((
            rel <= 0.02 && strictly_decreasing(&gaps),
            format!(
                "100 I(100) = {scaled:.6}, relative gap {rel:.4}; |M I - target| at 25/50/100 = {:.2e}/{:.2e}/{:.2e}",
                gaps[0], gaps[1], gaps[2]
            ),
        ))
        })(),
    )
}

pub fn free_limit() -> CheckOutcome {
    critical_limit(
        3,
        "critical free-boundary limit -1/(2 pi M)",
        0.0,
        -0.5 / PI,
    )
}

pub fn fixed_limit() -> CheckOutcome {
    critical_limit(
        4,
        "critical fixed-boundary limit +1/(2 pi M)",
        1.0,
        0.5 / PI,
    )
}

pub fn crossover_zero() -> CheckOutcome {
    outcome(
        5,
        "crossover zero",
        (|| {
            let root = find_crossover_zero()?;
            let f_id = critical_crossover_f(root)?;
            let f_quad = critical_crossover_f_quad(root)?;
            let diff = (f_id - f_quad).abs();
            Ok((
                (root - CROSSOVER_ZERO).abs() <= 1e-4 && diff <= 1e-10,
                format!("zeta_c^2 = {root:.9}, |F_E1 - F_quad| = {diff:.2e}"),
            ))
        })(),
    )
}

pub fn interpolation_endpoints() -> CheckOutcome {
    outcome(
        6,
        "crossover endpoints F(0) = 1, F(1e6) = -1",
        (|| {
            let f0 = critical_crossover_f(0.0)?;
            let f0q = critical_crossover_f_quad(0.0)?;
            let finf = critical_crossover_f(1e6)?;
            let ok = (f0 - 1.0).abs() <= 1e-12
                && (f0q - 1.0).abs() <= 1e-12
                && (finf + 1.0).abs() <= 1e-4;
            Ok((
                ok,
                format!("F(0) = {f0} (quadrature {f0q:.15}), F(1e6) = {finf:.8}"),
            ))
        })(),
    )
}

fn steepest_descent(
    id: u8,
    title: &'static str,
    z12: f64,
    tol: f64,
    asym: fn(&CouplingParams, f64) -> Result<f64>,
) -> CheckOutcome {
    outcome(
        id,
        title,
        (|| {
            let p = params(z12, z12, 0.0)?;
            let mut gaps = Vec::new();
            for m in [30u32, 40, 50] {
                gaps.push((asym(&p, f64::from(m))? / deviation(p, m)? - 1.0).abs());
            }
            Ok((
                gaps[0] <= tol && strictly_decreasing(&gaps),
                format!(
                    "|asym/I - 1| at M = 30/40/50: {:.4}/{:.4}/{:.4}",
                    gaps[0], gaps[1], gaps[2]
                ),
            ))
        })(),
    )
}

pub fn steepest_descent_below() -> CheckOutcome {
    steepest_descent(
        7,
        "steepest-descent match below T_c",
        0.5,
        0.02,
        asym_low_t_free,
    )
}

pub fn steepest_descent_above() -> CheckOutcome {
    steepest_descent(
        8,
        "steepest-descent match above T_c",
        0.3,
        0.05,
        asym_high_t_free,
    )
}

pub fn field_sign() -> CheckOutcome {
    outcome(
        9,
        "sign of the field asymptotics",
        (|| {
            let threshold: f64 = 0.15625;
            let below = deviation(params(0.5, 0.5, (0.5 * threshold).sqrt())?, 40)?;
            let above = deviation(params(0.5, 0.5, (2.0 * threshold).sqrt())?, 40)?;
            let hi_small = asym_high_t_field(&params(0.3, 0.3, 0.2)?, 40.0)?;
            let hi_large = asym_high_t_field(&params(0.3, 0.3, 0.8)?, 40.0)?;
            Ok((
            below < 0.0 && above > 0.0 && hi_small > 0.0 && hi_large > 0.0,
            format!(
                "I(40) at z^2 = z*^2/2: {below:.3e}, at 2 z*^2: {above:.3e}; above T_c field amplitude at z = 0.2/0.8: {hi_small:.3e}/{hi_large:.3e}"
            ),
        ))
        })(),
    )
}

pub fn bessel_scaling() -> CheckOutcome {
    outcome(
        10,
        "Bessel scaling consistency at m = 1",
        (|| {
            let c = critical_z2(ZC)?;
            let mut below = Vec::new();
            let mut above = Vec::new();
            for eps in [0.02f64, 0.01] {
                // m = 4 z1c M eps / (1 - z1c^2) = 2 M eps on the isotropic line
                let m_rows = (1.0 / (2.0 * eps)).round();
                let m = m_rows as u32;
                let free = scaling_low_t_free(&c, eps, m_rows)?;
                below.push((free / deviation(near_critical(eps, 0.0)?, m)? - 1.0).abs());
                let fixed = scaling_high_t_fixed(&c, eps, m_rows)?;
                above.push((fixed / deviation(near_critical(-eps, 1.0)?, m)? - 1.0).abs());
            }
            Ok((
                strictly_decreasing(&below) && strictly_decreasing(&above),
                format!(
                    "relative gap at eps = 0.02/0.01: below {:.4}/{:.4}, above {:.4}/{:.4}",
                    below[0], below[1], above[0], above[1]
                ),
            ))
        })(),
    )
}

pub fn crossover_recoveries() -> CheckOutcome {
    outcome(
        11,
        "crossover endpoint recoveries",
        (|| {
            let g0 = (crossover_g(0.0)? - PI.sqrt()).abs();
            let c = critical_z2(ZC)?;
            let m_rows = 50.0;
            let eps = (1.0 - ZC * ZC) / (4.0 * ZC * m_rows);
            let at0 = crossover_scaling(&ScalingParams::near_critical(c, m_rows, eps, 0.0)?)?;
            let atinf = crossover_scaling(&ScalingParams::near_critical(c, m_rows, eps, 1e6)?)?;
            let r0 = (at0 / scaling_low_t_free(&c, eps, m_rows)? - 1.0).abs();
            let rinf = (atinf / scaling_low_t_fixed(&c, eps, m_rows)? - 1.0).abs();
            let p = params(0.3, 0.3, 0.0)?;
            let high = (crossover_high_t(&p, 30.0)? - asym_high_t_free(&p, 30.0)?).abs();
            let high_rel = high / asym_high_t_free(&p, 30.0)?.abs();
            Ok((
            g0 <= 1e-10 && r0 <= 5e-3 && rinf <= 5e-3 && high_rel <= 1e-12,
            format!(
                "|G(0) - sqrt(pi)| = {g0:.2e}; crossover/free - 1 = {r0:.2e}, crossover/fixed - 1 = {rinf:.2e}; high-T crossover at zeta = 0 differs by {high_rel:.2e}"
            ),
        ))
        })(),
    )
}

/// `K_n(x) = int_0^inf exp(-x cosh y) cosh(n y) dy`.
fn bessel_k_oracle(n: i32, x: f64) -> f64 {
    let y_max = (1.0 + 745.0 / x).acosh();
    let f = |y: f64| (-x * y.cosh()).exp() * (f64::from(n) * y).cosh();
    integrate(f, 0.0, y_max, &QuadConfig::with_tol(1e-16, 1e-13)).value
}

/// `E1(x) = int_0^1 exp(-x/u) / u du`.
fn e1_oracle(x: f64) -> f64 {
    let f = |u: f64| if u == 0.0 { 0.0 } else { (-x / u).exp() / u };
    integrate_with_breaks(
        f,
        &[0.0, 0.05, 0.2, 1.0],
        &QuadConfig::with_tol(1e-16, 1e-13),
    )
    .value
}

pub fn special_functions() -> CheckOutcome {
    outcome(
        12,
        "special functions",
        (|| {
            let d0 = (bessel_k0(1.0)? - bessel_k_oracle(0, 1.0)).abs();
            let d1 = (bessel_k1(1.0)? - bessel_k_oracle(1, 1.0)).abs();
            let de = (exp_integral_e1(1.0)? - e1_oracle(1.0)).abs();
            let small = 1e-6 * bessel_k1(1e-6)? - 1.0;
            let m = 50.0;
            let lead = |n: f64| {
                (PI / (2.0 * m)).sqrt() * (-m).exp() * (1.0 + (4.0 * n * n - 1.0) / (8.0 * m))
            };
            let r0 = bessel_k0(m)? / lead(0.0) - 1.0;
            let r1 = bessel_k1(m)? / lead(1.0) - 1.0;
            Ok((
            d0 <= 1e-10 && d1 <= 1e-10 && de <= 1e-10 && small.abs() <= 1e-5 && r0.abs() <= 1e-3 && r1.abs() <= 1e-3,
            format!(
                "|K0(1)|, |K1(1)|, |E1(1)| vs integrals: {d0:.1e}, {d1:.1e}, {de:.1e}; m K1(m) - 1 at 1e-6: {small:.1e}; large-m ratio - 1 at 50: {r0:.1e}, {r1:.1e}"
            ),
        ))
        })(),
    )
}

pub fn oracle_chain() -> CheckOutcome {
    outcome(
        13,
        "transfer-matrix oracle chain",
        (|| {
            let generic = params(0.45, 0.6, 0.3)?;
            let mut brute_gap: f64 = 0.0;
            for (n, rows) in [(2, 3), (3, 4)] {
                let cfg = OracleConfig::new(n, rows, generic, 2);
                brute_gap = brute_gap
                    .max((brute_force_energy(&cfg)? - transfer_matrix_energy(&cfg)?).abs());
            }
            let p = params(0.5, 0.5, 0.0)?;
            let quad = total_energy_density(&EnergyQuery::new(p, 3))?.total;
            let mut gaps = Vec::new();
            for n in [6, 8, 10] {
                gaps.push((transfer_matrix_energy(&OracleConfig::new(n, 40, p, 3))? - quad).abs());
            }
            Ok((
            brute_gap <= 1e-12 && strictly_decreasing(&gaps),
            format!(
                "|brute - TM| = {brute_gap:.1e}; |TM - quadrature| at n_cols = 6/8/10: {:.2e}/{:.2e}/{:.2e}",
                gaps[0], gaps[1], gaps[2]
            ),
        ))
        })(),
    )
}

/// Verdict on a rendered `figure1` table: `kind,zeta_c_sq,f` rows.
pub fn judge_figure1(t: &Table) -> (bool, String) {
    let (Some(ik), Some(iz), Some(if_)) = (t.column("kind"), t.column("zeta_c_sq"), t.column("f"))
    else {
        return (false, "missing columns".into());
    };
    let mut points = Vec::new();
    let mut zero = None;
    for row in &t.rows {
        let (z, f) = (row[iz].as_f64(), row[if_].as_f64());
        match (&row[ik], z, f) {
            (Cell::Text(k), Some(z), Some(f)) if k == "point" => points.push((z, f)),
            (Cell::Text(k), Some(z), Some(_)) if k == "zero" => zero = Some(z),
            _ => return (false, "malformed row".into()),
        }
    }
    let Some(zero) = zero else {
        return (false, "no zero record".into());
    };
    let n = points.len();
    let starts = points
        .first()
        .is_some_and(|&(z, f)| z == 0.0 && (f - 1.0).abs() <= 1e-12);
    let monotone = points
        .windows(2)
        .all(|w| w[1].0 > w[0].0 && w[1].1 < w[0].1);
    let changes: Vec<usize> = (1..n)
        .filter(|&i| points[i - 1].1.signum() != points[i].1.signum())
        .collect();
    let located = changes.len() == 1 && {
        let i = changes[0];
        points[i - 1].0 <= zero && zero <= points[i].0
    };
    let ok = n == tables::FIGURE1_POINTS
        && starts
        && monotone
        && located
        && (zero - CROSSOVER_ZERO).abs() <= 1e-4;
    (
        ok,
        format!(
            "{n} points, starts at 1: {starts}, monotone: {monotone}, sign changes: {}, zero record {zero:.9}",
            changes.len()
        ),
    )
}

pub fn figure1_reproduction() -> CheckOutcome {
    outcome(
        14,
        "figure1 table shape",
        tables::figure1().map(|(t, _)| judge_figure1(&t)),
    )
}

pub fn run_all() -> Vec<CheckOutcome> {
    vec![
        bulk_at_criticality(),
        bulk_form_equivalence(),
        free_limit(),
        fixed_limit(),
        crossover_zero(),
        interpolation_endpoints(),
        steepest_descent_below(),
        steepest_descent_above(),
        field_sign(),
        bessel_scaling(),
        crossover_recoveries(),
        special_functions(),
        oracle_chain(),
        figure1_reproduction(),
    ]
}
