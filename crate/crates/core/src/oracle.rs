//! Exact finite-lattice reference values, independent of the momentum-space
//! machinery: a row transfer matrix on an `N`-column cylinder and, for tiny
//! lattices, plain enumeration of every configuration.
//!
//! Geometry: rows `1..=n_rows`, row 1 carries the boundary field, the last row
//! is a free edge, columns are periodic. Spin `+1` is a set bit.

use crate::error::{domain, Error, Result};
use crate::params::CouplingParams;

pub const MAX_TM_COLS: usize = 12;
pub const MAX_BRUTE_SPINS: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub n_cols: usize,
    pub n_rows: usize,
    pub params: CouplingParams,
    /// The bond `(M-1, M)` is measured; `M >= 2`.
    pub m_rows: usize,
}

impl OracleConfig {
    pub fn new(n_cols: usize, n_rows: usize, params: CouplingParams, m_rows: usize) -> Self {
        Self {
            n_cols,
            n_rows,
            params,
            m_rows,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_cols < 2 {
            return domain(format!("need at least 2 columns, got {}", self.n_cols));
        }
        if self.m_rows < 2 {
            return domain(format!(
                "the bond (M-1, M) needs M >= 2, got {}",
                self.m_rows
            ));
        }
        if self.n_rows < self.m_rows + 1 {
            return domain(format!(
                "n_rows = {} must be at least M + 1 = {}",
                self.n_rows,
                self.m_rows + 1
            ));
        }
        Ok(())
    }
}

/// Reduced couplings as Boltzmann exponents; `None` field means infinite.
#[derive(Debug, Clone, Copy)]
struct Exponents {
    k1: f64,
    k2: f64,
    h: Option<f64>,
}

impl Exponents {
    fn from(p: &CouplingParams) -> Self {
        Self {
            k1: p.z1().atanh(),
            k2: p.z2().atanh(),
            h: (p.z() < 1.0).then(|| p.z().atanh()),
        }
    }
}

fn spin(state: usize, col: usize) -> f64 {
    if state >> col & 1 == 1 {
        1.0
    } else {
        -1.0
    }
}

/// `sum_k s_k s_{k+1}` around a ring of `n` columns.
fn ring_bonds(state: usize, n: usize) -> i32 {
    let mask = (1usize << n) - 1;
    let rotated = ((state >> 1) | (state << (n - 1))) & mask;
    n as i32 - 2 * (state ^ rotated).count_ones() as i32
}

fn magnetization(state: usize, n: usize) -> i32 {
    2 * state.count_ones() as i32 - n as i32
}

struct TransferMatrix {
    n: usize,
    row_weight: Vec<f64>,
    boundary_weight: Vec<f64>,
    bond_same: f64,
    bond_flip: f64,
}

impl TransferMatrix {
    fn new(n: usize, e: Exponents) -> Self {
        let size = 1usize << n;
        let row_weight: Vec<f64> = (0..size)
            .map(|s| (e.k1 * f64::from(ring_bonds(s, n))).exp())
            .collect();
        let boundary_weight = (0..size)
            .map(|s| match e.h {
                Some(h) => row_weight[s] * (h * f64::from(magnetization(s, n))).exp(),
                None if s == size - 1 => row_weight[s],
                None => 0.0,
            })
            .collect();
        Self {
            n,
            row_weight,
            boundary_weight,
            bond_same: e.k2.exp(),
            bond_flip: (-e.k2).exp(),
        }
    }

    /// Applies the vertical-bond matrix one column at a time.
    fn apply_bonds(&self, v: &mut [f64]) {
        for col in 0..self.n {
            let bit = 1usize << col;
            for s in 0..v.len() {
                if s & bit == 0 {
                    let (lo, hi) = (v[s], v[s | bit]);
                    v[s] = self.bond_same * lo + self.bond_flip * hi;
                    v[s | bit] = self.bond_flip * lo + self.bond_same * hi;
                }
            }
        }
    }

    fn times_row_weight(&self, v: &mut [f64]) {
        v.iter_mut()
            .zip(&self.row_weight)
            .for_each(|(x, w)| *x *= w);
    }

    /// Boundary-side vector for row `row` (1-based): weights of every
    /// configuration of rows `1..=row`, summed over all but the last row.
    fn forward(&self, row: usize) -> Vec<f64> {
        let mut v = self.boundary_weight.clone();
        normalise(&mut v);
        for _ in 2..=row {
            self.apply_bonds(&mut v);
            self.times_row_weight(&mut v);
            normalise(&mut v);
        }
        v
    }

    /// Far-side vector for row `row`: weights of rows `row..=n_rows`.
    fn backward(&self, row: usize, n_rows: usize) -> Vec<f64> {
        let mut v = self.row_weight.clone();
        normalise(&mut v);
        for _ in (row..n_rows).rev() {
            self.apply_bonds(&mut v);
            self.times_row_weight(&mut v);
            normalise(&mut v);
        }
        v
    }
}

fn normalise(v: &mut [f64]) {
    let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if max > 0.0 {
        v.iter_mut().for_each(|x| *x /= max);
    }
}

fn check_tm(cfg: &OracleConfig) -> Result<()> {
    cfg.validate()?;
    if cfg.n_cols > MAX_TM_COLS {
        return Err(Error::Resource(format!(
            "transfer matrix limited to {MAX_TM_COLS} columns, got {}",
            cfg.n_cols
        )));
    }
    Ok(())
}

/// `<s_{M,k} s_{M-1,k}>` for the bond in column `column`.
pub fn transfer_matrix_bond(cfg: &OracleConfig, column: usize) -> Result<f64> {
    check_tm(cfg)?;
    let n = cfg.n_cols;
    let col = column % n;
    let tm = TransferMatrix::new(n, Exponents::from(&cfg.params));
    let upper = tm.forward(cfg.m_rows - 1);
    let lower = tm.backward(cfg.m_rows, cfg.n_rows);

    let mut plain = lower.clone();
    tm.apply_bonds(&mut plain);
    let mut flipped: Vec<f64> = lower
        .iter()
        .enumerate()
        .map(|(s, x)| spin(s, col) * x)
        .collect();
    tm.apply_bonds(&mut flipped);

    let z: f64 = upper.iter().zip(&plain).map(|(a, b)| a * b).sum();
    let num: f64 = upper
        .iter()
        .zip(&flipped)
        .enumerate()
        .map(|(s, (a, b))| spin(s, col) * a * b)
        .sum();
    Ok(num / z)
}

/// `<s_{M,0} s_{M-1,0}>` on the cylinder.
pub fn transfer_matrix_energy(cfg: &OracleConfig) -> Result<f64> {
    transfer_matrix_bond(cfg, 0)
}

/// `<s_{row,column}>` on the cylinder.
pub fn transfer_matrix_magnetization(cfg: &OracleConfig, row: usize, column: usize) -> Result<f64> {
    check_tm(cfg)?;
    if row == 0 || row > cfg.n_rows {
        return domain(format!("row {row} outside 1..={}", cfg.n_rows));
    }
    let n = cfg.n_cols;
    let tm = TransferMatrix::new(n, Exponents::from(&cfg.params));
    let upper = tm.forward(row);
    let below = if row == cfg.n_rows {
        vec![1.0; upper.len()]
    } else {
        let mut v = tm.backward(row + 1, cfg.n_rows);
        tm.apply_bonds(&mut v);
        v
    };
    let z: f64 = upper.iter().zip(&below).map(|(a, b)| a * b).sum();
    let num: f64 = upper
        .iter()
        .zip(&below)
        .enumerate()
        .map(|(s, (a, b))| spin(s, column % n) * a * b)
        .sum();
    Ok(num / z)
}

/// `<s_{M,0} s_{M-1,0}>` by summing over all `2^(n_cols n_rows)` configurations.
pub fn brute_force_energy(cfg: &OracleConfig) -> Result<f64> {
    cfg.validate()?;
    let (n, rows) = (cfg.n_cols, cfg.n_rows);
    if n * rows > MAX_BRUTE_SPINS {
        return Err(Error::Resource(format!(
            "enumeration limited to {MAX_BRUTE_SPINS} spins, got {}",
            n * rows
        )));
    }
    let e = Exponents::from(&cfg.params);
    let mask = (1usize << n) - 1;
    let (r_up, r_down) = (cfg.m_rows - 2, cfg.m_rows - 1);
    // Shift exponents by their largest possible value to keep weights <= 1.
    let shift =
        (e.k1.abs() + e.k2.abs()) * (n * rows) as f64 + e.h.map_or(0.0, |h| h.abs() * n as f64);

    let mut z = Kahan::default();
    let mut num = Kahan::default();
    for config in 0usize..(1usize << (n * rows)) {
        let row = |r: usize| (config >> (r * n)) & mask;
        let first = row(0);
        let field = match e.h {
            Some(h) => h * f64::from(magnetization(first, n)),
            None if first == mask => 0.0,
            None => continue,
        };
        let mut horizontal = 0i32;
        let mut vertical = 0i32;
        for r in 0..rows {
            horizontal += ring_bonds(row(r), n);
            if r + 1 < rows {
                vertical += n as i32 - 2 * (row(r) ^ row(r + 1)).count_ones() as i32;
            }
        }
        let w = (e.k1 * f64::from(horizontal) + e.k2 * f64::from(vertical) + field - shift).exp();
        z.add(w);
        num.add(spin(row(r_up), 0) * spin(row(r_down), 0) * w);
    }
    Ok(num.sum / z.sum)
}

#[derive(Default)]
struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    fn add(&mut self, x: f64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cfg(n: usize, rows: usize, z1: f64, z2: f64, z: f64, m: usize) -> OracleConfig {
        OracleConfig::new(n, rows, CouplingParams::new(z1, z2, z).unwrap(), m)
    }

    #[test]
    fn ring_bond_counts() {
        assert_eq!(ring_bonds(0b11, 2), 2);
        assert_eq!(ring_bonds(0b01, 2), -2);
        assert_eq!(ring_bonds(0b101, 3), -1);
        assert_eq!(ring_bonds(0b1111, 4), 4);
        assert_eq!(ring_bonds(0b0101, 4), -4);
    }

    #[test]
    fn brute_force_matches_transfer_matrix() {
        for &(n, rows, m) in &[(2, 3, 2), (3, 4, 3), (2, 5, 3), (4, 4, 2)] {
            for &(z1, z2, z) in &[(0.5, 0.5, 0.0), (0.3, 0.7, 0.4), (0.6, 0.2, 1.0)] {
                let c = cfg(n, rows, z1, z2, z, m);
                let a = brute_force_energy(&c).unwrap();
                let b = transfer_matrix_energy(&c).unwrap();
                assert!((a - b).abs() < 1e-12, "{n}x{rows}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn independent_spins() {
        let c = cfg(3, 4, 1e-12, 1e-12, 0.0, 2);
        assert!(brute_force_energy(&c).unwrap().abs() < 1e-11);
    }

    #[test]
    fn frozen_vertical_bonds() {
        let c = cfg(2, 3, 1e-12, 1.0 - 1e-15, 0.0, 2);
        assert!((brute_force_energy(&c).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn high_temperature_leading_order() {
        for &z in &[1e-3, 1e-4] {
            let c = cfg(6, 10, z, z, 0.0, 4);
            assert_relative_eq!(
                transfer_matrix_energy(&c).unwrap(),
                z,
                max_relative = 10.0 * z
            );
        }
    }

    #[test]
    fn zero_field_magnetization_vanishes() {
        let c = cfg(5, 8, 0.6, 0.6, 0.0, 3);
        for row in [1, 3, 8] {
            assert!(transfer_matrix_magnetization(&c, row, 0).unwrap().abs() < 1e-12);
        }
        let c = cfg(5, 8, 0.6, 0.6, 0.5, 3);
        assert!(transfer_matrix_magnetization(&c, 1, 0).unwrap() > 0.1);
    }

    #[test]
    fn column_translation_invariance() {
        let c = cfg(7, 12, 0.45, 0.5, 0.3, 4);
        let base = transfer_matrix_bond(&c, 0).unwrap();
        for col in 1..7 {
            assert!((transfer_matrix_bond(&c, col).unwrap() - base).abs() < 1e-13);
        }
    }

    #[test]
    fn limits_and_errors() {
        assert!(matches!(
            transfer_matrix_energy(&cfg(13, 20, 0.5, 0.5, 0.0, 3)),
            Err(Error::Resource(_))
        ));
        assert!(matches!(
            brute_force_energy(&cfg(5, 5, 0.5, 0.5, 0.0, 3)),
            Err(Error::Resource(_))
        ));
        assert!(transfer_matrix_energy(&cfg(4, 3, 0.5, 0.5, 0.0, 3)).is_err());
        assert!(transfer_matrix_energy(&cfg(4, 10, 0.5, 0.5, 0.0, 1)).is_err());
    }

    #[test]
    fn deep_lattice_is_finite() {
        let c = cfg(8, 400, 0.9, 0.9, 1.0, 200);
        let v = transfer_matrix_energy(&c).unwrap();
        assert!(v.is_finite() && v > 0.9);
    }
}
