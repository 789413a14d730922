//! One function per subcommand, each producing a [`Table`].

use std::f64::consts::{PI, SQRT_2};

use ising_edge::roots::brent;
use ising_edge::{
    asym_high_t_field, asym_high_t_free, asym_low_t_field, asym_low_t_free,
    couplings_from_physical, critical_crossover, critical_crossover_f, critical_z2, derived_alphas,
    energy_deviation, find_crossover_zero, scaling_high_t_fixed, scaling_high_t_free,
    scaling_low_t_fixed, scaling_low_t_free, total_energy_density, transfer_matrix_energy,
    zeta_c_sq, BoundaryField, CouplingParams, EnergyQuery, Error, OracleConfig, Regime, Result,
    REGIME_TOL,
};
use rayon::prelude::*;

use crate::output::{Cell, Table};

pub const FIGURE1_POINTS: usize = 501;
pub const FIGURE1_MAX: f64 = 5.0;

/// `count` evenly spaced points from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, count: usize) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::Domain("count must be at least 1".into()));
    }
    if !(start.is_finite() && stop.is_finite()) {
        return Err(Error::Domain(format!(
            "range [{start}, {stop}] is not finite"
        )));
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let step = (stop - start) / (count - 1) as f64;
    Ok((0..count)
        .map(|i| {
            if i + 1 == count {
                stop
            } else {
                start + step * i as f64
            }
        })
        .collect())
}

pub fn eval(p: CouplingParams, m: u32, abs_tol: f64, rel_tol: f64) -> Result<Table> {
    let r = total_energy_density(&EnergyQuery::new(p, m).with_tol(abs_tol, rel_tol))?;
    let mut t = Table::new(&[
        "m",
        "deviation",
        "bulk_form1",
        "bulk_form2",
        "total",
        "est_error",
        "warning",
    ]);
    t.push(vec![
        m.into(),
        r.deviation.into(),
        r.bulk_form1.into(),
        r.bulk_form2.into(),
        r.total.into(),
        r.est_error.into(),
        r.warning.into(),
    ]);
    Ok(t)
}

/// The large-`M` closed form that applies to `p`, and its name.
pub fn leading_asymptotic(p: &CouplingParams, m: u32) -> Result<(&'static str, f64)> {
    let d = derived_alphas(p, REGIME_TOL);
    let mf = f64::from(m);
    Ok(match (d.regime, p.is_free()) {
        (Regime::BelowTc, true) => ("low_t_free", asym_low_t_free(p, mf)?),
        (Regime::BelowTc, false) => ("low_t_field", asym_low_t_field(p, mf)?),
        (Regime::AboveTc, true) => ("high_t_free", asym_high_t_free(p, mf)?),
        (Regime::AboveTc, false) => ("high_t_field", asym_high_t_field(p, mf)?),
        (Regime::AtTc, _) => {
            let c = critical_z2(p.z1())?;
            (
                "critical_crossover",
                critical_crossover(zeta_c_sq(&c, p.z(), mf), mf)?,
            )
        }
    })
}

pub fn scan_m(p: CouplingParams, ms: &[u32]) -> Result<Table> {
    let rows: Result<Vec<Vec<Cell>>> = ms
        .par_iter()
        .map(|&m| {
            let dev = energy_deviation(&EnergyQuery::new(p, m))?;
            let (name, asym) = leading_asymptotic(&p, m)?;
            Ok(vec![
                m.into(),
                dev.value.into(),
                dev.est_error.into(),
                asym.into(),
                (dev.value / asym).into(),
                name.into(),
                (!dev.converged).into(),
            ])
        })
        .collect();
    let mut t = Table::new(&[
        "m",
        "deviation",
        "est_error",
        "asymptotic",
        "ratio",
        "formula",
        "warning",
    ]);
    t.rows = rows?;
    Ok(t)
}

/// `ln sinh x` without overflow.
fn ln_sinh(x: f64) -> f64 {
    if x > 20.0 {
        x - std::f64::consts::LN_2 + (-2.0 * (-2.0 * x).exp()).ln_1p()
    } else {
        x.sinh().ln()
    }
}

/// Critical temperature for couplings `e1, e2` (`k_B = 1`):
/// the root of `sinh(2 E1/T) sinh(2 E2/T) = 1`.
pub fn critical_temperature(e1: f64, e2: f64) -> Result<f64> {
    if !(e1 > 0.0 && e2 > 0.0 && e1.is_finite() && e2.is_finite()) {
        return Err(Error::Domain(format!(
            "couplings E1 = {e1}, E2 = {e2} must be positive"
        )));
    }
    let g = |t: f64| ln_sinh(2.0 * e1 / t) + ln_sinh(2.0 * e2 / t);
    let scale = e1 + e2;
    brent(g, 1e-3 * scale, 1e3 * scale, 1e-13)
}

pub fn scan_t(e1: f64, ratio: f64, hb: BoundaryField, ts: &[f64], m: u32) -> Result<(Table, f64)> {
    let e2 = ratio * e1;
    let tc = critical_temperature(e1, e2)?;
    let rows: Result<Vec<Vec<Cell>>> = ts
        .par_iter()
        .map(|&t| {
            let p = couplings_from_physical(e1, e2, hb, t * tc)?;
            let d = derived_alphas(&p, REGIME_TOL);
            let r = total_energy_density(&EnergyQuery::new(p, m))?;
            Ok(vec![
                t.into(),
                (t * tc).into(),
                p.z1().into(),
                p.z2().into(),
                p.z().into(),
                d.alpha2.into(),
                r.deviation.into(),
                r.bulk_form2.into(),
                r.total.into(),
                r.est_error.into(),
                r.warning.into(),
            ])
        })
        .collect();
    let mut table = Table::new(&[
        "t",
        "temperature",
        "z1",
        "z2",
        "z",
        "alpha2",
        "deviation",
        "bulk",
        "total",
        "est_error",
        "warning",
    ]);
    table.rows = rows?;
    Ok((table, tc))
}

/// Bessel scaling forms against `m` (below `T_c`) or `m_bar` (above).
pub fn scaling(z1c: f64, m_rows: f64, above: bool, ms: &[f64]) -> Result<Table> {
    let c = critical_z2(z1c)?;
    let mut t = Table::new(&[if above { "m_bar" } else { "m" }, "gap", "free", "fixed"]);
    for &m in ms {
        let gap = m * (1.0 - z1c * z1c) / (4.0 * z1c * m_rows);
        let (free, fixed) = if above {
            (
                scaling_high_t_free(&c, gap, m_rows)?,
                scaling_high_t_fixed(&c, gap, m_rows)?,
            )
        } else {
            (
                scaling_low_t_free(&c, gap, m_rows)?,
                scaling_low_t_fixed(&c, gap, m_rows)?,
            )
        };
        t.push(vec![m.into(), gap.into(), free.into(), fixed.into()]);
    }
    Ok(t)
}

pub fn crossover(zetas: &[f64], m_rows: f64) -> Result<Table> {
    let mut t = Table::new(&["zeta_c_sq", "f", "minus_f_over_2pi", "deviation"]);
    for &z in zetas {
        let f = critical_crossover_f(z)?;
        t.push(vec![
            z.into(),
            f.into(),
            (-f / (2.0 * PI)).into(),
            critical_crossover(z, m_rows)?.into(),
        ]);
    }
    Ok(t)
}

/// `F(zeta_c^2)` on `[0, 5]` with a final `zero` record holding the root.
pub fn figure1() -> Result<(Table, f64)> {
    let mut t = Table::new(&["kind", "zeta_c_sq", "f"]);
    for z in linspace(0.0, FIGURE1_MAX, FIGURE1_POINTS)? {
        t.push(vec![
            "point".into(),
            z.into(),
            critical_crossover_f(z)?.into(),
        ]);
    }
    let root = find_crossover_zero()?;
    t.push(vec![
        "zero".into(),
        root.into(),
        critical_crossover_f(root)?.into(),
    ]);
    Ok((t, root))
}

pub fn oracle_compare(p: CouplingParams, m: usize, n_rows: usize, cols: &[usize]) -> Result<Table> {
    let quad = total_energy_density(&EnergyQuery::new(p, m as u32))?;
    let rows: Result<Vec<Vec<Cell>>> = cols
        .par_iter()
        .map(|&n| {
            let tm = transfer_matrix_energy(&OracleConfig::new(n, n_rows, p, m))?;
            Ok(vec![
                n.into(),
                tm.into(),
                quad.total.into(),
                (tm - quad.total).abs().into(),
            ])
        })
        .collect();
    let mut t = Table::new(&["n_cols", "oracle", "quadrature", "abs_diff"]);
    t.rows = rows?;
    Ok(t)
}

/// The isotropic critical coupling `sqrt(2) - 1`.
pub fn isotropic_z1c() -> f64 {
    SQRT_2 - 1.0
}
