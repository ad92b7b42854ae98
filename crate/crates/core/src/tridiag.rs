//! Finite Jacobi truncations and a Sturm-sequence bisection eigensolver.
//!
//! The zeros of the degree-n orthonormal polynomial are exactly the
//! eigenvalues of the n-by-n truncation of the Jacobi matrix, so zero
//! finding and zero counting both reduce to symmetric tridiagonal
//! eigenvalue machinery: an LDLT inertia count and bisection inside the
//! Gershgorin enclosure.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coeffs::CoefficientSequence;
use crate::polyeval::{eval_p, log_sum_exp};

#[derive(Debug, Error, PartialEq)]
pub enum TridiagError {
    #[error("dimension must be >= 1")]
    EmptyMatrix,
    #[error("off-diagonal entries must be strictly positive, got {0}")]
    NonpositiveOffdiag(f64),
    #[error("off-diagonal length {off} does not match dimension {n} (need n-1)")]
    LengthMismatch { off: usize, n: usize },
}

/// Symmetric tridiagonal matrix with strictly positive off-diagonal, so all
/// eigenvalues are simple.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalMatrix {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

/// Zeros of `p_n`, i.e. the eigenvalues of the n-by-n truncation, each
/// bracketed by bisection to width at most `tol`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroSet {
    pub degree: usize,
    pub zeros: Vec<f64>,
    pub widths: Vec<f64>,
    pub tol: f64,
}

impl TridiagonalMatrix {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self, TridiagError> {
        if diag.is_empty() {
            return Err(TridiagError::EmptyMatrix);
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(TridiagError::LengthMismatch {
                off: offdiag.len(),
                n: diag.len(),
            });
        }
        for &e in &offdiag {
            if !(e > 0.0) {
                return Err(TridiagError::NonpositiveOffdiag(e));
            }
        }
        Ok(Self { diag, offdiag })
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    /// Gershgorin enclosure of the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.n();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut r = 0.0;
            if i > 0 {
                r += self.offdiag[i - 1];
            }
            if i + 1 < n {
                r += self.offdiag[i];
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `t`: the count of negative pivots
    /// of the LDLT factorization of `A - t`. Zero pivots are replaced by a
    /// tiny signed perturbation so the count is always defined.
    pub fn sturm_count(&self, t: f64) -> usize {
        let (lo, hi) = self.gershgorin();
        let scale = lo.abs().max(hi.abs()).max(1.0);
        let guard = f64::EPSILON * scale;

        let mut count = 0usize;
        let mut q = self.diag[0] - t;
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.n() {
            let q_safe = if q.abs() < guard {
                if q < 0.0 {
                    -guard
                } else {
                    guard
                }
            } else {
                q
            };
            let e = self.offdiag[i - 1];
            q = (self.diag[i] - t) - e * e / q_safe;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// All eigenvalues, sorted, each bisected to bracket width <= `tol`.
    /// Refinement order is fixed, so output is deterministic.
    pub fn eigenvalues(&self, tol: f64) -> ZeroSet {
        assert!(tol > 0.0, "bisection tolerance must be positive");
        let n = self.n();
        let (glo, ghi) = self.gershgorin();
        let pad = 1e-12 * (1.0 + glo.abs().max(ghi.abs()));
        let lo = glo - pad;
        let hi = ghi + pad;

        let mut zeros = Vec::with_capacity(n);
        let mut widths = Vec::with_capacity(n);
        self.refine(lo, hi, 0, n, tol, &mut zeros, &mut widths);
        debug_assert_eq!(zeros.len(), n);
        ZeroSet {
            degree: n,
            zeros,
            widths,
            tol,
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn refine(
        &self,
        lo: f64,
        hi: f64,
        c_lo: usize,
        c_hi: usize,
        tol: f64,
        zeros: &mut Vec<f64>,
        widths: &mut Vec<f64>,
    ) {
        if c_hi == c_lo {
            return;
        }
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            for _ in c_lo..c_hi {
                zeros.push(mid);
                widths.push(hi - lo);
            }
            return;
        }
        let c_mid = self.sturm_count(mid).clamp(c_lo, c_hi);
        self.refine(lo, mid, c_lo, c_mid, tol, zeros, widths);
        self.refine(mid, hi, c_mid, c_hi, tol, zeros, widths);
    }
}

/// Default bisection tolerance for a given matrix: `1e-12 * max(1, R)` with
/// `R` the Gershgorin radius bound.
pub fn default_tol(t: &TridiagonalMatrix) -> f64 {
    let (lo, hi) = t.gershgorin();
    1e-12 * lo.abs().max(hi.abs()).max(1.0)
}

/// The n-by-n truncation of the Jacobi matrix of `seq`: diagonal `b(1..n)`,
/// off-diagonal `a(1..n-1)`.
pub fn truncate(seq: &CoefficientSequence, n: usize) -> TridiagonalMatrix {
    assert!(n >= 1, "truncation dimension must be >= 1");
    let diag = (1..=n).map(|k| seq.b(k)).collect();
    let offdiag = (1..n).map(|k| seq.a(k)).collect();
    TridiagonalMatrix::new(diag, offdiag).expect("coefficient sequence yields a valid truncation")
}

/// Number of zeros of `p_n` in the open interval `(lo, hi)`. The lower
/// endpoint is nudged inward by one ulp; the Sturm count is already strict
/// at the upper endpoint.
pub fn count_zeros_in(seq: &CoefficientSequence, n: usize, lo: f64, hi: f64) -> usize {
    assert!(lo < hi, "need lo < hi");
    let t = truncate(seq, n);
    let lo_in = next_up(lo);
    t.sturm_count(hi).saturating_sub(t.sturm_count(lo_in))
}

fn next_up(x: f64) -> f64 {
    // f64::next_up, kept local to pin semantics for the endpoint nudge
    if x.is_nan() || x == f64::INFINITY {
        return x;
    }
    if x == 0.0 {
        return f64::from_bits(1);
    }
    let bits = x.to_bits();
    if x > 0.0 {
        f64::from_bits(bits + 1)
    } else {
        f64::from_bits(bits - 1)
    }
}

/// Gauss quadrature for the measure of `seq`: nodes are the eigenvalues of
/// the N-by-N truncation, the weight at node `x_i` is the squared first
/// component of the normalized eigenvector. Weights are positive and sum
/// to 1.
///
/// First components come from inverse iteration on the truncation. The
/// textbook alternative `1 / sum_{j<N} p_j(x_i)^2` is exponentially
/// ill-conditioned in the node for eigenvectors localized away from the
/// first site (the dense-zeros family produces many), while inverse
/// iteration only needs the node to well within the eigenvalue spacing.
pub fn gauss_quadrature(seq: &CoefficientSequence, n_nodes: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n_nodes >= 1, "need at least one node");
    let t = truncate(seq, n_nodes);
    let zs = t.eigenvalues(default_tol(&t));
    let nodes: Vec<f64> = zs
        .zeros
        .iter()
        .zip(&zs.widths)
        .map(|(&z, &w)| polish_node(seq, n_nodes, z, w.max(zs.tol)))
        .collect();
    let weights = nodes
        .iter()
        .map(|&x| t.first_component_sq(x))
        .collect();
    (nodes, weights)
}

/// Weight at a node by direct kernel summation, `1 / K_{N-1}(x, x)` in log
/// space. Agrees with the eigenvector route whenever the polynomial values
/// at the node are well-scaled; kept as an independent cross-check.
pub fn quadrature_weight_from_kernel(seq: &CoefficientSequence, n_nodes: usize, x: f64) -> f64 {
    let p = eval_p(seq, x, n_nodes - 1);
    let logs: Vec<f64> = p.iter().map(|v| 2.0 * v.log_mag).collect();
    (-log_sum_exp(&logs)).exp()
}

impl TridiagonalMatrix {
    /// Squared first component of the unit eigenvector for the eigenvalue
    /// nearest `lambda`, by inverse iteration with a partially pivoted
    /// tridiagonal solve.
    fn first_component_sq(&self, lambda: f64) -> f64 {
        let n = self.n();
        if n == 1 {
            return 1.0;
        }
        // Deterministic pseudo-random start; an all-ones vector can be
        // nearly orthogonal to eigenvectors with sign symmetry.
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut v: Vec<f64> = (0..n)
            .map(|_| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
            })
            .collect();
        let norm0 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        for x in &mut v {
            *x /= norm0;
        }
        for _ in 0..3 {
            let mut w = self.solve_shifted(lambda, &v);
            let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            if !norm.is_finite() || norm == 0.0 {
                break;
            }
            for x in &mut w {
                *x /= norm;
            }
            v = w;
        }
        v[0] * v[0]
    }

    /// Solve `(A - lambda) x = rhs` by Gaussian elimination with partial
    /// pivoting on the tridiagonal band. Near-singular shifts are exactly
    /// the intended use; zero pivots are nudged.
    fn solve_shifted(&self, lambda: f64, rhs: &[f64]) -> Vec<f64> {
        let n = self.n();
        // Row i holds its diagonal plus the two entries to the right; the
        // second superdiagonal is fill-in from row swaps.
        let mut rows: Vec<[f64; 3]> = (0..n)
            .map(|i| {
                [
                    self.diag[i] - lambda,
                    if i + 1 < n { self.offdiag[i] } else { 0.0 },
                    0.0,
                ]
            })
            .collect();
        let mut x: Vec<f64> = rhs.to_vec();

        let scale = {
            let (lo, hi) = self.gershgorin();
            lo.abs().max(hi.abs()).max(1.0)
        };
        let tiny = f64::MIN_POSITIVE.max(f64::EPSILON * f64::EPSILON * scale);
        let nudge = |p: f64| if p.abs() < tiny { tiny.copysign(p) } else { p };

        for i in 0..n - 1 {
            let mut lower = [self.offdiag[i], rows[i + 1][0], rows[i + 1][1]];
            if lower[0].abs() > rows[i][0].abs() {
                std::mem::swap(&mut rows[i], &mut lower);
                x.swap(i, i + 1);
            }
            let m = lower[0] / nudge(rows[i][0]);
            rows[i + 1] = [lower[1] - m * rows[i][1], lower[2] - m * rows[i][2], 0.0];
            x[i + 1] -= m * x[i];
        }

        let mut out = vec![0.0f64; n];
        for i in (0..n).rev() {
            let mut s = x[i];
            if i + 1 < n {
                s -= rows[i][1] * out[i + 1];
            }
            if i + 2 < n {
                s -= rows[i][2] * out[i + 2];
            }
            out[i] = s / nudge(rows[i][0]);
        }
        out
    }
}

fn polish_node(seq: &CoefficientSequence, degree: usize, start: f64, radius: f64) -> f64 {
    let mut x = start;
    for _ in 0..4 {
        let (p, dp) = crate::polyeval::eval_p_with_deriv(seq, x, degree);
        if p.is_zero() || dp.is_zero() {
            break;
        }
        let step = -(p.sign * dp.sign) as f64 * (p.log_mag - dp.log_mag).exp();
        if !step.is_finite() || step.abs() > 4.0 * radius {
            break; // Newton left the bracket; keep the bisection value
        }
        x += step;
        if step.abs() < 1e-16 * (1.0 + x.abs()) {
            break;
        }
    }
    if (x - start).abs() <= 4.0 * radius {
        x
    } else {
        start
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::CoefficientSequence;
    use std::f64::consts::PI;

    fn free() -> CoefficientSequence {
        CoefficientSequence::constant(1.0, 0.0).unwrap()
    }

    /// Chebyshev-U oracle: for the free sequence the zeros of p_n are
    /// 2 cos(k pi / (n+1)), k = 1..n.
    fn chebyshev_zeros(n: usize) -> Vec<f64> {
        let mut z: Vec<f64> = (1..=n)
            .map(|k| 2.0 * (k as f64 * PI / (n as f64 + 1.0)).cos())
            .collect();
        z.sort_by(f64::total_cmp);
        z
    }

    #[test]
    fn truncate_basic() {
        let t = truncate(&free(), 3);
        assert_eq!(t.diag(), &[0.0, 0.0, 0.0]);
        assert_eq!(t.offdiag(), &[1.0, 1.0]);
        let t8 = truncate(&CoefficientSequence::section4(), 8);
        assert_eq!(t8.diag()[7], -0.5);
    }

    #[test]
    fn truncate_of_strip_deletes_first_row_col() {
        let seq = CoefficientSequence::section4();
        let n = 20;
        let big = truncate(&seq, n + 1);
        let small = truncate(&seq.strip(), n);
        assert_eq!(small.diag(), &big.diag()[1..]);
        assert_eq!(small.offdiag(), &big.offdiag()[1..]);
    }

    #[test]
    fn sturm_count_small_cases() {
        let one = TridiagonalMatrix::new(vec![0.0], vec![]).unwrap();
        assert_eq!(one.sturm_count(1.0), 1);
        assert_eq!(one.sturm_count(-1.0), 0);

        // eigenvalues of the 2x2 free truncation are -1, 1
        let t = truncate(&free(), 2);
        assert_eq!(t.sturm_count(0.0), 1);
        assert_eq!(t.sturm_count(2.0), 2);
        assert_eq!(t.sturm_count(-2.0), 0);
    }

    #[test]
    fn sturm_count_monotone() {
        let seq = CoefficientSequence::section4();
        let t = truncate(&seq, 37);
        let mut prev = 0;
        let mut s = -6.0;
        while s <= 6.0 {
            let c = t.sturm_count(s);
            assert!(c >= prev);
            prev = c;
            s += 0.1;
        }
        assert_eq!(prev, 37);
    }

    #[test]
    fn eigenvalues_two_by_two() {
        let t = truncate(&free(), 2);
        let zs = t.eigenvalues(1e-13);
        assert_eq!(zs.zeros.len(), 2);
        assert!((zs.zeros[0] + 1.0).abs() < 1e-12);
        assert!((zs.zeros[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigenvalues_match_chebyshev_oracle() {
        for n in [1, 2, 5, 13, 50] {
            let t = truncate(&free(), n);
            let zs = t.eigenvalues(1e-13);
            let oracle = chebyshev_zeros(n);
            for (z, o) in zs.zeros.iter().zip(&oracle) {
                assert!((z - o).abs() < 1e-10, "n={n}: {z} vs {o}");
            }
        }
    }

    #[test]
    fn periodic2_truncation_gap_eigenvalue_is_zero() {
        // p_7 for the (3,1) period has exactly one zero in (-2,2), at 0.
        let seq = CoefficientSequence::periodic2(3.0, 1.0, 0.0).unwrap();
        let t = truncate(&seq, 7);
        let zs = t.eigenvalues(1e-13);
        let in_gap: Vec<f64> = zs
            .zeros
            .iter()
            .copied()
            .filter(|z| -2.0 < *z && *z < 2.0)
            .collect();
        assert_eq!(in_gap.len(), 1);
        assert!(in_gap[0].abs() < 1e-12);
        // eval_p agrees: sign change across the bracket
        let w = 1e-10;
        let lo = crate::polyeval::eval_p(&seq, in_gap[0] - w, 7)[7];
        let hi = crate::polyeval::eval_p(&seq, in_gap[0] + w, 7)[7];
        assert_ne!(lo.sign, hi.sign);
    }

    #[test]
    fn count_zeros_open_interval() {
        assert_eq!(count_zeros_in(&free(), 2, -0.5, 0.5), 0);
        assert_eq!(count_zeros_in(&free(), 3, -0.5, 0.5), 1);
        // zeros of p_2 are exactly +-1; open interval excludes them
        assert_eq!(count_zeros_in(&free(), 2, -1.0, 1.0), 0);
        assert_eq!(count_zeros_in(&free(), 2, -1.5, 1.5), 2);
    }

    #[test]
    fn count_zeros_section4_near_beta2() {
        // the degree-17 polynomial has a zero within 2/81 of -1/2
        assert!(count_zeros_in(&CoefficientSequence::section4(), 17, -0.6, -0.4) >= 1);
    }

    #[test]
    fn rank_one_bound_state_count() {
        let seq = CoefficientSequence::rank_one(free(), 3.0);
        let t = truncate(&seq, 500);
        // exactly one eigenvalue above 2
        assert_eq!(500 - t.sturm_count(2.0 + 1e-9), 1);
    }

    #[test]
    fn free_spectrum_clusters_in_minus2_2() {
        let t = truncate(&free(), 2000);
        let (lo, hi) = t.gershgorin();
        assert!(lo >= -2.0 - 1e-9 && hi <= 2.0 + 1e-9);
        let zs = t.eigenvalues(1e-10);
        assert!(*zs.zeros.first().unwrap() > -2.0);
        assert!(*zs.zeros.last().unwrap() < 2.0);
        assert!((zs.zeros.first().unwrap() + 2.0).abs() < 1e-4);
        assert!((zs.zeros.last().unwrap() - 2.0).abs() < 1e-4);
    }

    #[test]
    fn quadrature_single_node() {
        let (nodes, weights) = gauss_quadrature(&free(), 1);
        assert_eq!(nodes.len(), 1);
        assert!(nodes[0].abs() < 1e-11);
        assert!((weights[0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn quadrature_weights_sum_to_one() {
        for seq in [
            free(),
            CoefficientSequence::periodic2(3.0, 1.0, 0.0).unwrap(),
            CoefficientSequence::section4(),
        ] {
            let (_, weights) = gauss_quadrature(&seq, 100);
            let sum: f64 = weights.iter().sum();
            assert!((sum - 1.0).abs() < 1e-10, "sum = {sum}");
            assert!(weights.iter().all(|&w| w > 0.0));
        }
    }

    #[test]
    fn quadrature_weights_match_kernel_formula() {
        // On the free family every eigenvector has an O(1) first component,
        // so the kernel route is well-conditioned and must agree.
        let seq = free();
        let (nodes, weights) = gauss_quadrature(&seq, 40);
        for (&x, &w) in nodes.iter().zip(&weights) {
            let wk = quadrature_weight_from_kernel(&seq, 40, x);
            assert!((w - wk).abs() < 1e-10 * w.max(wk), "w = {w}, wk = {wk}");
        }
    }

    #[test]
    fn quadrature_second_moment() {
        // sum w_i x_i^2 = (J^2)_{11} = a1^2 + b1^2
        for seq in [
            CoefficientSequence::periodic2(3.0, 1.0, 0.25).unwrap(),
            CoefficientSequence::rank_one(free(), 1.5),
        ] {
            let (nodes, weights) = gauss_quadrature(&seq, 30);
            let m2: f64 = nodes.iter().zip(&weights).map(|(x, w)| w * x * x).sum();
            let expect = seq.a(1) * seq.a(1) + seq.b(1) * seq.b(1);
            assert!((m2 - expect).abs() < 1e-9, "{m2} vs {expect}");
        }
    }

    #[test]
    fn adjacent_degree_interlacing() {
        for seq in [
            free(),
            CoefficientSequence::periodic2(3.0, 1.0, 0.0).unwrap(),
            CoefficientSequence::section4(),
        ] {
            for n in [5usize, 20, 100] {
                let z1 = truncate(&seq, n).eigenvalues(1e-12).zeros;
                let z2 = truncate(&seq, n + 1).eigenvalues(1e-12).zeros;
                for k in 0..n {
                    assert!(z2[k] <= z1[k] + 1e-11 && z1[k] <= z2[k + 1] + 1e-11);
                }
            }
        }
    }
}
