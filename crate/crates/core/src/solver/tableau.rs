//! Extrapolation tableau `T_ij` with per-entry correction norms.

use super::{CoefficientTable, MethodMode};
use crate::blas1::{axpy, axpy_error, moller_update, nan_max, norm_inf, scal, scal_error, CompScalar, CompVector};
use crate::eft::DoubleDouble;
use crate::error::{Error, Result};

/// Lower-triangular tableau, indexed one-based as `T(i, j)` with `j <= i`.
#[derive(Debug, Clone)]
pub struct Tableau<'a> {
    coeffs: &'a CoefficientTable,
    rows: Vec<Vec<CompVector>>,
    corr: Vec<Vec<f64>>,
}

impl<'a> Tableau<'a> {
    pub fn new(coeffs: &'a CoefficientTable) -> Self {
        Self { coeffs, rows: Vec::new(), corr: Vec::new() }
    }

    /// Number of rows started so far.
    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    /// Starts row `i = rows() + 1` with `T_i1`. Returns `i`.
    pub fn push_initial(&mut self, t_i1: CompVector) -> Result<usize> {
        if self.rows.len() >= self.coeffs.stages() {
            return Err(Error::InvalidStages(self.rows.len() + 1));
        }
        if let Some(first) = self.rows.first() {
            if first[0].len() != t_i1.len() {
                return Err(Error::DimensionMismatch { expected: first[0].len(), found: t_i1.len() });
            }
        }
        self.rows.push(vec![t_i1]);
        self.corr.push(Vec::new());
        Ok(self.rows.len())
    }

    pub fn get(&self, i: usize, j: usize) -> &CompVector {
        &self.rows[i - 1][j - 1]
    }

    pub fn diag(&self, i: usize) -> &CompVector {
        self.get(i, i)
    }

    /// `norm_inf(R_ij)`, for `2 <= j <= i`.
    pub fn corr(&self, i: usize, j: usize) -> f64 {
        self.corr[i - 1][j - 2]
    }

    /// Consumes the tableau, returning `T_ij`.
    pub fn into_entry(mut self, i: usize, j: usize) -> CompVector {
        self.rows.swap_remove(i - 1).swap_remove(j - 1)
    }

    /// Fills `T_i2 ..= T_ii` from `T_i1` and row `i - 1`.
    pub fn extrapolate_row(&mut self, i: usize, mode: MethodMode) -> Result<()> {
        if i < 2 || i != self.rows.len() || self.rows[i - 1].len() != 1 {
            return Err(Error::InvalidConfig(format!("row {i} is not ready for extrapolation")));
        }
        let (done, rest) = self.rows.split_at_mut(i - 1);
        let above = &done[i - 2];
        let row = &mut rest[0];
        let corr = &mut self.corr[i - 1];
        for j in 2..=i {
            let c = self.coeffs.get(i, j);
            let (t, r) = extrapolate_entry(&row[j - 2], &above[j - 2], c, mode)?;
            row.push(t);
            corr.push(r);
        }
        Ok(())
    }
}

/// `R = c (same - up)`, `T = same + R`; returns `(T, norm_inf(R))`.
fn extrapolate_entry(same: &CompVector, up: &CompVector, c: CompScalar, mode: MethodMode) -> Result<(CompVector, f64)> {
    match mode {
        MethodMode::Double | MethodMode::DMoller => {
            let mut r = same.v().to_vec();
            axpy(-1.0, up.v(), &mut r)?;
            scal(c.v, &mut r);
            let corr = r.iter().fold(0.0f64, |m, x| nan_max(m, x.abs()));
            let t = if mode == MethodMode::Double {
                let mut t = same.v().to_vec();
                axpy(1.0, &r, &mut t)?;
                CompVector::from_values(t)?
            } else {
                let (mut s, mut rp) = (same.v().to_vec(), same.e().to_vec());
                moller_update(&mut s, &mut rp, &r)?;
                CompVector::new(s, rp)?
            };
            Ok((t, corr))
        }
        MethodMode::Deft | MethodMode::Deft2 => {
            let mut r = same.clone();
            axpy_error(CompScalar::new(-1.0, 0.0), up, &mut r)?;
            scal_error(c, &mut r);
            let mut t = same.clone();
            axpy_error(CompScalar::ONE, &r, &mut t)?;
            Ok((t, norm_inf(&r)))
        }
        MethodMode::DD => {
            if same.len() != up.len() {
                return Err(Error::DimensionMismatch { expected: same.len(), found: up.len() });
            }
            let c = DoubleDouble::from(c);
            let mut corr = 0.0f64;
            let t: Vec<DoubleDouble> = (0..same.len())
                .map(|k| {
                    let a = same.get_dd(k);
                    let r = c * (a - up.get_dd(k));
                    corr = nan_max(corr, r.to_f64().abs());
                    a + r
                })
                .collect();
            Ok((CompVector::from_dd(&t)?, corr))
        }
    }
}
