//! Round-off propagation factors of the extrapolation tableau.
//!
//! An error `(-1)^(i-1) eps` injected into each `T_i1` reaches `T_ij` as
//! `r_ij eps`, with `r_ij = r_i,j-1 + c_ij (r_i,j-1 - r_i-1,j-1)`.

use super::{coefficients, SupportSequence};

#[derive(Debug, Clone, PartialEq)]
pub struct PropagationTable {
    rows: Vec<Vec<f64>>,
}

impl PropagationTable {
    /// `r_ij`, one-based, `j <= i`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.rows[i - 1][j - 1]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i - 1]
    }

    pub fn stages(&self) -> usize {
        self.rows.len()
    }

    /// `max |r_ij|` over the whole triangle.
    pub fn max_abs(&self) -> f64 {
        self.rows.iter().flatten().fold(0.0, |m, r| m.max(r.abs()))
    }

    /// `max_j |r_ij|` for each row.
    pub fn row_max_abs(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.iter().fold(0.0f64, |m, x| m.max(x.abs()))).collect()
    }
}

pub fn propagation_coefficients(seq: &SupportSequence) -> PropagationTable {
    let c = coefficients(seq);
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(seq.stages());
    for i in 1..=seq.stages() {
        let mut row = Vec::with_capacity(i);
        row.push(if i % 2 == 1 { 1.0 } else { -1.0 });
        for j in 2..=i {
            let same = row[j - 2];
            let up = rows[i - 2][j - 2];
            row.push(same + c.get(i, j).v * (same - up));
        }
        rows.push(row);
    }
    PropagationTable { rows }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::SequenceKind;

    #[test]
    fn first_entries() {
        let t = propagation_coefficients(&SupportSequence::new(SequenceKind::Romberg, 3).unwrap());
        assert_eq!(t.get(1, 1), 1.0);
        assert_eq!(t.get(2, 1), -1.0);
        assert_eq!(t.get(3, 1), 1.0);
        assert!((t.get(2, 2) + 5.0 / 3.0).abs() < 1e-15);
        assert_eq!(t.stages(), 4);
        assert_eq!(t.row(3).len(), 3);
    }
}
