use std::fmt;
use std::str::FromStr;

use crate::blas1::CompScalar;
use crate::eft::{two_prod, DoubleDouble};
use crate::error::{Error, Result};

pub const MAX_STAGES: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SequenceKind {
    /// `w_i = 2^i`
    Romberg,
    /// `w_i = 2(i + 1)`
    Harmonic,
}

impl fmt::Display for SequenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SequenceKind::Romberg => "romberg",
            SequenceKind::Harmonic => "harmonic",
        })
    }
}

impl FromStr for SequenceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "romberg" => Ok(SequenceKind::Romberg),
            "harmonic" => Ok(SequenceKind::Harmonic),
            other => Err(Error::InvalidConfig(format!("unknown sequence {other:?}"))),
        }
    }
}

/// Substep counts of the extrapolation stages.
///
/// A sequence with maximum stage `L` has stages `i = 0..=L`, so the tableau
/// has `L + 1` rows. Stage `i` uses `w_i = 2^(i+1)` substeps (Romberg) or
/// `w_i = 2(i + 1)` (harmonic); both start at 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportSequence {
    kind: SequenceKind,
    w: Vec<u64>,
}

impl SupportSequence {
    pub fn new(kind: SequenceKind, max_stage: usize) -> Result<Self> {
        if !(1..=MAX_STAGES).contains(&max_stage) {
            return Err(Error::InvalidStages(max_stage));
        }
        let w = (0..=max_stage as u64)
            .map(|i| match kind {
                SequenceKind::Romberg => 2u64 << i,
                SequenceKind::Harmonic => 2 * (i + 1),
            })
            .collect();
        Ok(Self { kind, w })
    }

    pub fn kind(&self) -> SequenceKind {
        self.kind
    }

    /// `L`.
    pub fn max_stage(&self) -> usize {
        self.w.len() - 1
    }

    /// Tableau rows, `L + 1`.
    pub fn stages(&self) -> usize {
        self.w.len()
    }

    /// All substep counts; row `r` of the tableau (one-based) uses `w()[r - 1]`.
    pub fn w(&self) -> &[u64] {
        &self.w
    }
}

/// Extrapolation weights `c_ij = ((w_i / w_{i-j+1})^2 - 1)^-1`.
///
/// Indexed by one-based tableau rows: `get(i, j)` with `2 <= j <= i`, where
/// `w_i` is the substep count of row `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    rows: Vec<Vec<CompScalar>>,
}

impl CoefficientTable {
    pub fn get(&self, i: usize, j: usize) -> CompScalar {
        assert!(j >= 2 && j <= i, "c_{i},{j} is not defined");
        self.rows[i - 1][j - 2]
    }

    /// `c_i2 ..= c_ii`.
    pub fn row(&self, i: usize) -> &[CompScalar] {
        &self.rows[i - 1]
    }

    pub fn stages(&self) -> usize {
        self.rows.len()
    }
}

fn square(w: u64) -> DoubleDouble {
    let p = two_prod(w as f64, w as f64);
    DoubleDouble::new(p.s, p.e)
}

/// Computes every `c_ij` in double-double as `w_k^2 / (w_i^2 - w_k^2)` with
/// `k = i - j + 1`. The squares and their difference are exact, so the only
/// rounding is the final division.
pub fn coefficients(seq: &SupportSequence) -> CoefficientTable {
    let w = seq.w();
    let rows = (1..=w.len())
        .map(|i| {
            (2..=i)
                .map(|j| {
                    let wi = square(w[i - 1]);
                    let wk = square(w[i - j]);
                    let denom = wi.accurate_sub(wk);
                    // denominators are positive since w is strictly increasing
                    CompScalar::from(wk / denom)
                })
                .collect()
        })
        .collect();
    CoefficientTable { rows }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequences() {
        let r4 = SupportSequence::new(SequenceKind::Romberg, 4).unwrap();
        assert_eq!(r4.w(), [2, 4, 8, 16, 32]);
        assert_eq!((r4.max_stage(), r4.stages()), (4, 5));
        assert_eq!(SupportSequence::new(SequenceKind::Harmonic, 4).unwrap().w(), [2, 4, 6, 8, 10]);
        assert_eq!(SupportSequence::new(SequenceKind::Romberg, 1).unwrap().w(), [2, 4]);
        assert_eq!(SupportSequence::new(SequenceKind::Romberg, 0), Err(Error::InvalidStages(0)));
        assert_eq!(SupportSequence::new(SequenceKind::Harmonic, 31), Err(Error::InvalidStages(31)));
        let r30 = SupportSequence::new(SequenceKind::Romberg, 30).unwrap();
        assert_eq!(*r30.w().last().unwrap(), 1 << 31);
    }

    #[test]
    fn sequences_are_even_and_increasing() {
        for kind in [SequenceKind::Romberg, SequenceKind::Harmonic] {
            let s = SupportSequence::new(kind, 30).unwrap();
            assert!(s.w().iter().all(|w| w % 2 == 0));
            assert!(s.w().windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn romberg_c22_is_one_third() {
        let c = coefficients(&SupportSequence::new(SequenceKind::Romberg, 3).unwrap());
        let c22 = c.get(2, 2);
        assert_eq!(c22.v, 1.0 / 3.0);
        assert_eq!(c22.e, 1.0 / 3.0 / 2f64.powi(54));
        // c33 = 1/((8/2)^2 - 1) = 1/15, c32 = 1/((8/4)^2 - 1) = 1/3
        assert_eq!(c.get(3, 2), c22);
        assert_eq!(c.get(3, 3).v, 1.0 / 15.0);
    }

    #[test]
    fn harmonic_weights() {
        let c = coefficients(&SupportSequence::new(SequenceKind::Harmonic, 2).unwrap());
        assert_eq!(c.get(2, 2).v, 1.0 / 3.0);
        // w = 4 and 6: 1/((6/4)^2 - 1) = 4/5
        let c32 = c.get(3, 2);
        assert_eq!(c32.v, 0.8);
        // 4/5 - fl(0.8), rounded to binary64
        assert_eq!(c32.e, -4.4408920985006264e-17);
    }

    #[test]
    fn parse_kind() {
        assert_eq!("Romberg".parse::<SequenceKind>().unwrap(), SequenceKind::Romberg);
        assert!("fibonacci".parse::<SequenceKind>().is_err());
    }
}
