//! The dense-zeros-in-a-gap construction, end to end.
//!
//! The period-(3,1) off-diagonal with the dyadic diagonal blocks produces a
//! measure supported on [-5,-1] u [1,5] whose polynomial zeros are dense in
//! [-1,1]: while the diagonal sits at `beta_n`, a trial vector built from
//! the base polynomials' values at 0 is an approximate eigenvector of the
//! truncation at `beta_n`, so some zero of `p_{2(n+1)^2 - 1}` lands within
//! `2 * 3^{-2n}` of it.

use serde::{Deserialize, Serialize};

use crate::coeffs::{beta, CoefficientSequence, SupportModel};
use crate::tridiag::{default_tol, truncate};

/// One row of the dense-zeros experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    /// Block index.
    pub n: usize,
    /// Polynomial degree `2(n+1)^2 - 1`.
    pub j: usize,
    pub beta_n: f64,
    pub nearest_zero: f64,
    pub distance: f64,
    /// Localization bound `2 * 3^{-2n}`.
    pub bound: f64,
    pub residual_sq: f64,
    /// Residual bound `4 * 3^{-4n}`.
    pub residual_bound: f64,
    pub pass: bool,
}

/// Discriminant of the period-two operator: trace of the two-step transfer
/// matrix, `(x^2 - (a1^2 + a2^2)) / (a1 a2)`.
pub fn discriminant(a1: f64, a2: f64, x: f64) -> f64 {
    assert!(a1 > 0.0 && a2 > 0.0);
    (x * x - (a1 * a1 + a2 * a2)) / (a1 * a2)
}

/// Bands of the doubly infinite period-two operator: `|discriminant| <= 2`,
/// i.e. `[-(a1+a2), -|a1-a2|] u [|a1-a2|, a1+a2]` (one interval when
/// a1 = a2).
pub fn bands(a1: f64, a2: f64) -> SupportModel {
    assert!(a1 > 0.0 && a2 > 0.0);
    let lo = (a1 - a2).abs();
    let hi = a1 + a2;
    let ivs = if lo == 0.0 {
        vec![[-hi, hi]]
    } else {
        vec![[-hi, -lo], [lo, hi]]
    };
    SupportModel::from_intervals(ivs).expect("band intervals are sorted and disjoint")
}

/// Trial vector of base-polynomial values at 0: entry 2k is `(-3)^k`, odd
/// entries vanish. `j` must be odd so the vector is annihilated by the
/// base truncation. Entries are built by repeated multiplication so the
/// matrix-vector cancellations below are exact in floating point.
pub fn phi_vector(j: usize) -> Vec<f64> {
    assert!(j % 2 == 1, "need odd j");
    let mut v = vec![0.0f64; j];
    let mut pow = 1.0f64;
    for (k, slot) in v.iter_mut().enumerate() {
        if k % 2 == 0 {
            *slot = pow;
            pow *= -3.0;
        }
    }
    v
}

/// Relative residual `||(L_{j;F} - beta_n) phi_j||^2 / ||phi_j||^2` for
/// `j = 2(n+1)^2 - 1`, together with its bound `4 * 3^{-4n}`.
pub fn residual_check(n: usize) -> (f64, f64) {
    assert!(n >= 1);
    let j = 2 * (n + 1) * (n + 1) - 1;
    let seq = CoefficientSequence::section4();
    let t = truncate(&seq, j);
    let phi = phi_vector(j);
    let b = beta(n);

    let mut num = 0.0f64;
    let mut den = 0.0f64;
    for i in 0..j {
        let mut r = (t.diag()[i] - b) * phi[i];
        if i > 0 {
            r += t.offdiag()[i - 1] * phi[i - 1];
        }
        if i + 1 < j {
            r += t.offdiag()[i] * phi[i + 1];
        }
        num += r * r;
        den += phi[i] * phi[i];
        // rows inside the current block see a constant diagonal and the
        // base cancellation, so they vanish identically
        let k = i + 1;
        if 2 * n * n <= k {
            debug_assert_eq!(r, 0.0, "row {k}");
        }
    }
    let bound = 4.0 * 3.0f64.powi(-4 * n as i32);
    let residual_sq = num / den;
    assert!(
        residual_sq <= bound,
        "residual {residual_sq} exceeds bound {bound} at n={n}"
    );
    (residual_sq, bound)
}

/// Run the dense-zeros experiment for block indices `1..=n_max`: find the
/// zero of `p_{2(n+1)^2 - 1}` nearest to `beta_n` and compare against the
/// localization bound. Records are computed in parallel, output ordered
/// by n.
pub fn run_gap_experiment(n_max: usize) -> Vec<ExperimentRecord> {
    use rayon::prelude::*;
    assert!(n_max >= 1);
    (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let j = 2 * (n + 1) * (n + 1) - 1;
            let b = beta(n);
            let seq = CoefficientSequence::section4();
            let t = truncate(&seq, j);
            let zs = t.eigenvalues(default_tol(&t));
            let (idx, _) = zs
                .zeros
                .iter()
                .enumerate()
                .min_by(|(_, x), (_, y)| {
                    (*x - b).abs().partial_cmp(&(*y - b).abs()).unwrap()
                })
                .expect("non-empty zero set");
            let nearest_zero = zs.zeros[idx];
            // bracket width counts against the error budget
            let distance = (nearest_zero - b).abs() + zs.widths[idx];
            let bound = 2.0 * 3.0f64.powi(-2 * n as i32);
            let (residual_sq, residual_bound) = residual_check(n);
            let pass = distance <= bound && residual_sq <= residual_bound;
            ExperimentRecord {
                n,
                j,
                beta_n: b,
                nearest_zero,
                distance,
                bound,
                residual_sq,
                residual_bound,
                pass,
            }
        })
        .collect()
}

/// All zeros in the open gap (-1, 1) across degrees `1..=j_max`, tagged by
/// degree. Each degree contributes at most one (a gap holds at most one
/// zero per polynomial).
pub fn gap_zero_cloud(j_max: usize) -> Vec<(usize, f64)> {
    use rayon::prelude::*;
    assert!(j_max >= 1);
    let per_degree: Vec<Vec<(usize, f64)>> = (1..=j_max)
        .into_par_iter()
        .map(|j| {
            let seq = CoefficientSequence::section4();
            let t = truncate(&seq, j);
            let zs = t.eigenvalues(default_tol(&t));
            let in_gap: Vec<(usize, f64)> = zs
                .zeros
                .iter()
                .copied()
                .filter(|z| -1.0 < *z && *z < 1.0)
                .map(|z| (j, z))
                .collect();
            assert!(
                in_gap.len() <= 1,
                "degree {j} has {} zeros in the gap",
                in_gap.len()
            );
            in_gap
        })
        .collect();
    per_degree.into_iter().flatten().collect()
}

/// Outcome of the spectrum containment check for the dense-zeros family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumCheck {
    pub n_trunc: usize,
    pub tol: f64,
    /// Eigenvalues outside `[-5 - tol, 5 + tol]`.
    pub outside_hull: usize,
    /// Eigenvalues in the open gap `(-1 + tol, 1 - tol)`.
    pub in_gap: usize,
    /// Distance from the spectrum to each of -5, -1, 1, 5.
    pub endpoint_gaps: [f64; 4],
    pub hull_ok: bool,
    pub gap_ok: bool,
    /// Every endpoint approached within 0.1.
    pub endpoints_ok: bool,
}

impl SpectrumCheck {
    pub fn pass(&self) -> bool {
        self.hull_ok && self.gap_ok && self.endpoints_ok
    }
}

/// Check that the truncation spectrum is contained in the claimed support
/// (up to `tol`), enters the gap at most once (the traveling zero is
/// expected, not a failure), and approaches the band endpoints.
pub fn spectrum_check(n_trunc: usize, tol: f64) -> SpectrumCheck {
    assert!(n_trunc >= 10);
    let seq = CoefficientSequence::section4();
    let t = truncate(&seq, n_trunc);
    let zs = t.eigenvalues(default_tol(&t));

    let outside_hull = zs
        .zeros
        .iter()
        .filter(|z| z.abs() > 5.0 + tol)
        .count();
    let in_gap = zs
        .zeros
        .iter()
        .filter(|z| -1.0 + tol < **z && **z < 1.0 - tol)
        .count();
    let mut endpoint_gaps = [f64::INFINITY; 4];
    for (i, e) in [-5.0f64, -1.0, 1.0, 5.0].into_iter().enumerate() {
        for &z in &zs.zeros {
            endpoint_gaps[i] = endpoint_gaps[i].min((z - e).abs());
        }
    }
    SpectrumCheck {
        n_trunc,
        tol,
        outside_hull,
        in_gap,
        endpoint_gaps,
        hull_ok: outside_hull == 0,
        gap_ok: in_gap <= 1,
        endpoints_ok: endpoint_gaps.iter().all(|&g| g <= 0.1),
    }
}
