//! Jacobi recurrence coefficient sequences and support models.
//!
//! A half-line Jacobi operator is determined by off-diagonal entries
//! `a(n) > 0` and diagonal entries `b(n)` for `n >= 1`. The coefficient
//! sequence is the library's stand-in for the orthogonality measure: every
//! other quantity (polynomial values, truncation eigenvalues, certificates)
//! is computed from it.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CoeffsError {
    #[error("off-diagonal coefficient must be positive, got {0}")]
    NonpositiveOffdiag(f64),
    #[error("invalid support model: {0}")]
    InvalidSupport(String),
    #[error("explicit sequence: index {index} out of range (have {len} entries)")]
    ExplicitOutOfRange { index: usize, len: usize },
    #[error("coefficient index must be >= 1, got {0}")]
    BadIndex(usize),
}

/// Finite union of closed intervals plus isolated points, used to model
/// the support of the orthogonality measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SupportModel {
    intervals: Vec<[f64; 2]>,
    points: Vec<f64>,
}

impl SupportModel {
    /// Build a support model from closed intervals `[lo, hi]` and isolated
    /// points. Intervals must be disjoint and sorted; points must not lie in
    /// the interior of any interval.
    pub fn new(intervals: Vec<[f64; 2]>, points: Vec<f64>) -> Result<Self, CoeffsError> {
        for iv in &intervals {
            if !(iv[0] <= iv[1]) || !iv[0].is_finite() || !iv[1].is_finite() {
                return Err(CoeffsError::InvalidSupport(format!(
                    "bad interval [{}, {}]",
                    iv[0], iv[1]
                )));
            }
        }
        for w in intervals.windows(2) {
            if !(w[0][1] < w[1][0]) {
                return Err(CoeffsError::InvalidSupport(format!(
                    "intervals [{}, {}] and [{}, {}] overlap or are out of order",
                    w[0][0], w[0][1], w[1][0], w[1][1]
                )));
            }
        }
        for w in points.windows(2) {
            if !(w[0] < w[1]) {
                return Err(CoeffsError::InvalidSupport(format!(
                    "points {} and {} out of order",
                    w[0], w[1]
                )));
            }
        }
        for &p in &points {
            if !p.is_finite() {
                return Err(CoeffsError::InvalidSupport(format!("non-finite point {p}")));
            }
            if intervals.iter().any(|iv| iv[0] < p && p < iv[1]) {
                return Err(CoeffsError::InvalidSupport(format!(
                    "point {p} lies inside an interval"
                )));
            }
        }
        Ok(Self { intervals, points })
    }

    pub fn from_intervals(intervals: Vec<[f64; 2]>) -> Result<Self, CoeffsError> {
        Self::new(intervals, Vec::new())
    }

    pub fn intervals(&self) -> &[[f64; 2]] {
        &self.intervals
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Euclidean distance from `x` to the union of intervals and points.
    /// Zero exactly when `x` lies in the union.
    pub fn dist(&self, x: f64) -> f64 {
        let mut best = f64::INFINITY;
        for iv in &self.intervals {
            let d = if x < iv[0] {
                iv[0] - x
            } else if x > iv[1] {
                x - iv[1]
            } else {
                0.0
            };
            best = best.min(d);
        }
        for &p in &self.points {
            best = best.min((x - p).abs());
        }
        best
    }

    pub fn contains(&self, x: f64) -> bool {
        self.dist(x) == 0.0
    }

    /// Smallest element of the union, if non-empty.
    pub fn min(&self) -> Option<f64> {
        let a = self.intervals.first().map(|iv| iv[0]);
        let b = self.points.first().copied();
        match (a, b) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (x, None) => x,
            (None, y) => y,
        }
    }

    /// Largest element of the union, if non-empty.
    pub fn max(&self) -> Option<f64> {
        let a = self.intervals.last().map(|iv| iv[1]);
        let b = self.points.last().copied();
        match (a, b) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (x, None) => x,
            (None, y) => y,
        }
    }
}

/// A Jacobi coefficient sequence: `a(n) > 0` off-diagonal, `b(n)` diagonal,
/// both indexed from 1. Values are pure functions of the index, so sequences
/// are freely shareable across threads.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CoefficientSequence {
    /// `a(n) = a`, `b(n) = b` for all n (free Jacobi matrix when a=1, b=0).
    Constant { a: f64, b: f64 },
    /// Period-two off-diagonal `a1, a2, a1, a2, ...` with constant diagonal.
    Periodic2 { a1: f64, a2: f64, b: f64 },
    /// The dense-zeros construction: period-(3,1) off-diagonal with the
    /// dyadic diagonal blocks `b_k = beta_n` for `2n^2 <= k < 2(n+1)^2`.
    Section4,
    /// `base` with `b(1)` replaced, creating (for suitable values) a single
    /// isolated point of the spectrum.
    RankOne {
        base: Box<CoefficientSequence>,
        b1: f64,
    },
    /// Finite explicit tables; queries past the end are a hard error.
    Explicit { a: Vec<f64>, b: Vec<f64> },
    /// `base` with the first `shift` coefficients removed:
    /// `a(n) = base.a(n+shift)`, `b(n) = base.b(n+shift)`.
    Shifted {
        base: Box<CoefficientSequence>,
        shift: usize,
    },
}

impl CoefficientSequence {
    pub fn constant(a: f64, b: f64) -> Result<Self, CoeffsError> {
        if !(a > 0.0) {
            return Err(CoeffsError::NonpositiveOffdiag(a));
        }
        Ok(Self::Constant { a, b })
    }

    pub fn periodic2(a1: f64, a2: f64, b: f64) -> Result<Self, CoeffsError> {
        if !(a1 > 0.0) {
            return Err(CoeffsError::NonpositiveOffdiag(a1));
        }
        if !(a2 > 0.0) {
            return Err(CoeffsError::NonpositiveOffdiag(a2));
        }
        Ok(Self::Periodic2 { a1, a2, b })
    }

    pub fn section4() -> Self {
        Self::Section4
    }

    pub fn rank_one(base: CoefficientSequence, b1: f64) -> Self {
        Self::RankOne {
            base: Box::new(base),
            b1,
        }
    }

    pub fn explicit(a: Vec<f64>, b: Vec<f64>) -> Result<Self, CoeffsError> {
        for &v in &a {
            if !(v > 0.0) {
                return Err(CoeffsError::NonpositiveOffdiag(v));
            }
        }
        Ok(Self::Explicit { a, b })
    }

    /// Remove the first row and column: `a(n) -> a(n+1)`, `b(n) -> b(n+1)`.
    /// The coefficients of the second-kind polynomials.
    pub fn strip(&self) -> Self {
        match self {
            Self::Constant { .. } => self.clone(),
            Self::Shifted { base, shift } => Self::Shifted {
                base: base.clone(),
                shift: shift + 1,
            },
            _ => Self::Shifted {
                base: Box::new(self.clone()),
                shift: 1,
            },
        }
    }

    /// Off-diagonal coefficient, `n >= 1`. Panics on index 0 or on an
    /// out-of-range explicit query.
    pub fn a(&self, n: usize) -> f64 {
        assert!(n >= 1, "coefficient index must be >= 1");
        match self {
            Self::Constant { a, .. } => *a,
            Self::Periodic2 { a1, a2, .. } => {
                if n % 2 == 1 {
                    *a1
                } else {
                    *a2
                }
            }
            Self::Section4 => {
                if n % 2 == 1 {
                    3.0
                } else {
                    1.0
                }
            }
            Self::RankOne { base, .. } => base.a(n),
            Self::Explicit { a, .. } => {
                assert!(
                    n <= a.len(),
                    "explicit sequence: a({n}) out of range (have {})",
                    a.len()
                );
                a[n - 1]
            }
            Self::Shifted { base, shift } => base.a(n + shift),
        }
    }

    /// Diagonal coefficient, `n >= 1`.
    pub fn b(&self, n: usize) -> f64 {
        assert!(n >= 1, "coefficient index must be >= 1");
        match self {
            Self::Constant { b, .. } => *b,
            Self::Periodic2 { b, .. } => *b,
            Self::Section4 => beta(section4_block(n)),
            Self::RankOne { base, b1 } => {
                if n == 1 {
                    *b1
                } else {
                    base.b(n)
                }
            }
            Self::Explicit { b, .. } => {
                assert!(
                    n <= b.len(),
                    "explicit sequence: b({n}) out of range (have {})",
                    b.len()
                );
                b[n - 1]
            }
            Self::Shifted { base, shift } => base.b(n + shift),
        }
    }

    /// Support of the measure when it is known in closed form; `None`
    /// otherwise. Certificate checkers never consult this implicitly --
    /// the support model is always an explicit argument.
    pub fn known_support(&self) -> Option<SupportModel> {
        match self {
            Self::Constant { a, b } => {
                Some(SupportModel::from_intervals(vec![[b - 2.0 * a, b + 2.0 * a]]).unwrap())
            }
            Self::Periodic2 { a1, a2, b } => {
                let lo = (a1 - a2).abs();
                let hi = a1 + a2;
                let ivs = if lo == 0.0 {
                    vec![[b - hi, b + hi]]
                } else {
                    vec![[b - hi, b - lo], [b + lo, b + hi]]
                };
                Some(SupportModel::from_intervals(ivs).unwrap())
            }
            Self::Section4 => {
                Some(SupportModel::from_intervals(vec![[-5.0, -1.0], [1.0, 5.0]]).unwrap())
            }
            Self::RankOne { .. } | Self::Explicit { .. } | Self::Shifted { .. } => None,
        }
    }

    /// Largest index for which explicit tables have data, `None` when the
    /// sequence is defined for every index.
    pub fn explicit_len(&self) -> Option<usize> {
        match self {
            Self::Explicit { a, b } => Some(a.len().min(b.len())),
            Self::RankOne { base, .. } => base.explicit_len(),
            Self::Shifted { base, shift } => base.explicit_len().map(|l| l.saturating_sub(*shift)),
            _ => None,
        }
    }
}

/// Block index n with `2n^2 <= k < 2(n+1)^2`, with `k = 1` assigned to the
/// first block.
fn section4_block(k: usize) -> usize {
    if k < 2 {
        return 1;
    }
    let mut n = ((k / 2) as f64).sqrt() as usize;
    while 2 * (n + 1) * (n + 1) <= k {
        n += 1;
    }
    while n > 1 && 2 * n * n > k {
        n -= 1;
    }
    n
}

/// The dyadic diagonal sequence: `beta(1) = 0`, then for each level
/// `k = 1, 2, ...` the block `j/2^k` for `j = -(2^k - 1), ..., 2^k - 1`
/// in increasing `j`. Visits every dyadic rational in (-1, 1), each one
/// infinitely often.
pub fn beta(n: usize) -> f64 {
    assert!(n >= 1, "beta index must be >= 1");
    if n == 1 {
        return 0.0;
    }
    let n = n as u64;
    // Level k occupies indices [2^(k+1) - k - 1, 2^(k+2) - k - 2).
    let mut k: u32 = 1;
    loop {
        let start = (1u64 << (k + 1)) - k as u64 - 1;
        let next = (1u64 << (k + 2)) - k as u64 - 2;
        if n < next {
            let j = (n - start) as i64 - ((1i64 << k) - 1);
            return j as f64 / (1u64 << k) as f64;
        }
        k += 1;
    }
}
