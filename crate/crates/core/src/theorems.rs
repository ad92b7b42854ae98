//! Executable certificates for the zero-localization theorems.
//!
//! A point x0 at distance d from the support excludes zeros of p_n or
//! p_{n+1} from the interval of radius `delta_n = d^2 / (d + sqrt(2) a_{n+1})`
//! around it. For an isolated point of the support the same radius, with d
//! replaced by the distance to the support of the second-kind measure,
//! excludes all but at most one zero. Both statements, together with the
//! kernel inequalities they rest on, are checked here numerically.
//!
//! All inequality checks run in (sign, log) arithmetic: the kernel and the
//! squared polynomials span hundreds of orders of magnitude on the
//! dense-zeros family. A relative slack of 1e-9 absorbs rounding.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coeffs::{CoefficientSequence, SupportModel};
use crate::polyeval::{eval_p, kernel_diag_log, log_sum_exp};
use crate::tridiag::{count_zeros_in, default_tol, truncate};

/// Relative slack for log-space inequality comparisons.
const LOG_SLACK: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum CertifyError {
    #[error("x0 = {x0} lies in the support model (dist = 0)")]
    PointInSupport { x0: f64 },
    #[error("x0 = {x0} is not an isolated point of the estimated support")]
    NotIsolated { x0: f64 },
    #[error("inputs must be positive: d = {d}, a_next = {a_next}")]
    NonpositiveInput { d: f64, a_next: f64 },
}

/// Which of the two adjacent degrees is zero-free on the certified interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroFreeDegree {
    Lower,
    Upper,
    Both,
    Neither,
}

/// Certificate that p_n or p_{n+1} has no zeros in
/// `(x0 - delta_n, x0 + delta_n)`. `verified == false` with a correct
/// support model is a theorem violation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapCertificate {
    pub x0: f64,
    pub d: f64,
    pub n: usize,
    pub delta_n: f64,
    pub count_n: usize,
    pub count_n_plus_1: usize,
    pub zero_free_degree: ZeroFreeDegree,
    pub verified: bool,
}

impl GapCertificate {
    /// One-line human-readable verdict.
    pub fn verdict(&self) -> String {
        let which = match self.zero_free_degree {
            ZeroFreeDegree::Lower => format!("p{}", self.n),
            ZeroFreeDegree::Upper => format!("p{}", self.n + 1),
            ZeroFreeDegree::Both => format!("p{} and p{}", self.n, self.n + 1),
            ZeroFreeDegree::Neither => "none".to_string(),
        };
        format!(
            "theorem1 n={} x0={} d={} delta={:.6e} zero-free: {} -> {}",
            self.n,
            self.x0,
            self.d,
            self.delta_n,
            which,
            if self.verified { "VERIFIED" } else { "VIOLATED" }
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IsolatedStatus {
    Verified,
    Violated,
    /// The support estimate placed x0 inside supp of the second-kind
    /// measure, so the hypothesis could not be established.
    Inconclusive,
}

/// Certificate that p_n or p_{n+1} has at most one zero in
/// `(x0 - delta_n, x0 + delta_n)` around an isolated point x0 of the
/// support.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsolatedCertificate {
    pub x0: f64,
    pub d0: f64,
    pub n: usize,
    pub delta_n: f64,
    pub count_n: usize,
    pub count_n_plus_1: usize,
    /// The degree achieving the smaller zero count.
    pub low_zero_degree: usize,
    pub zero_count: usize,
    pub status: IsolatedStatus,
    pub verified: bool,
}

impl IsolatedCertificate {
    pub fn verdict(&self) -> String {
        format!(
            "theorem2 n={} x0={} d0={} delta={:.6e} p{} has {} zero(s) -> {:?}",
            self.n,
            self.x0,
            self.d0,
            self.delta_n,
            self.low_zero_degree,
            self.zero_count,
            self.status
        )
    }
}

/// Exclusion radius `d^2 / (d + sqrt(2) a_next)`, always in (0, d).
pub fn delta_radius(d: f64, a_next: f64) -> Result<f64, CertifyError> {
    if !(d > 0.0) || !(a_next > 0.0) {
        return Err(CertifyError::NonpositiveInput { d, a_next });
    }
    Ok(d * d / (d + std::f64::consts::SQRT_2 * a_next))
}

/// Certify the gap-exclusion statement at degree pair (n, n+1). The support
/// model is the caller's asserted model of the measure's support; the
/// certificate is only as good as that hypothesis.
pub fn certify_theorem1(
    seq: &CoefficientSequence,
    support: &SupportModel,
    x0: f64,
    n: usize,
) -> Result<GapCertificate, CertifyError> {
    let d = support.dist(x0);
    if d == 0.0 {
        return Err(CertifyError::PointInSupport { x0 });
    }
    let delta_n = delta_radius(d, seq.a(n + 1))?;
    let count_n = count_zeros_in(seq, n.max(1), x0 - delta_n, x0 + delta_n);
    let count_n = if n == 0 { 0 } else { count_n };
    let count_n_plus_1 = count_zeros_in(seq, n + 1, x0 - delta_n, x0 + delta_n);
    let zero_free_degree = match (count_n == 0, count_n_plus_1 == 0) {
        (true, true) => ZeroFreeDegree::Both,
        (true, false) => ZeroFreeDegree::Lower,
        (false, true) => ZeroFreeDegree::Upper,
        (false, false) => ZeroFreeDegree::Neither,
    };
    Ok(GapCertificate {
        x0,
        d,
        n,
        delta_n,
        count_n,
        count_n_plus_1,
        zero_free_degree,
        verified: zero_free_degree != ZeroFreeDegree::Neither,
    })
}

/// Certify a range of degrees in parallel; output order follows the range.
pub fn certify_theorem1_range(
    seq: &CoefficientSequence,
    support: &SupportModel,
    x0: f64,
    n_lo: usize,
    n_hi: usize,
) -> Result<Vec<GapCertificate>, CertifyError> {
    use rayon::prelude::*;
    (n_lo..=n_hi)
        .into_par_iter()
        .map(|n| certify_theorem1(seq, support, x0, n))
        .collect()
}

/// Estimate the support of the measure of `seq` as the eps-fattened
/// eigenvalues of the N-by-N truncation, merged into intervals.
pub fn estimate_support(seq: &CoefficientSequence, n_trunc: usize, eps: f64) -> SupportModel {
    assert!(n_trunc >= 2 && eps > 0.0);
    let t = truncate(seq, n_trunc);
    let zs = t.eigenvalues(default_tol(&t));
    let mut intervals: Vec<[f64; 2]> = Vec::new();
    for &z in &zs.zeros {
        let (lo, hi) = (z - eps, z + eps);
        match intervals.last_mut() {
            Some(last) if lo <= last[1] => last[1] = last[1].max(hi),
            _ => intervals.push([lo, hi]),
        }
    }
    SupportModel::from_intervals(intervals).expect("merged intervals are sorted and disjoint")
}

/// Estimate the support of the second-kind measure: same machinery applied
/// to the stripped sequence.
pub fn estimate_nu_support(seq: &CoefficientSequence, n_trunc: usize, eps: f64) -> SupportModel {
    estimate_support(&seq.strip(), n_trunc, eps)
}

/// Certify the isolated-point statement at degree pair (n, n+1). The
/// radius uses the distance from x0 to the estimated support of the
/// second-kind measure, with `a(n+1)` from the original sequence as in the
/// theorem statement.
pub fn certify_theorem2(
    seq: &CoefficientSequence,
    x0: f64,
    n: usize,
    n_trunc: usize,
    eps: f64,
) -> Result<IsolatedCertificate, CertifyError> {
    // hypothesis check: x0 must look like an isolated point of supp(d mu)
    let mu_est = estimate_support(seq, n_trunc, eps);
    let cluster = mu_est
        .intervals()
        .iter()
        .find(|iv| iv[0] <= x0 && x0 <= iv[1]);
    match cluster {
        None => return Err(CertifyError::NotIsolated { x0 }),
        Some(iv) if iv[1] - iv[0] > 4.0 * eps => {
            return Err(CertifyError::NotIsolated { x0 });
        }
        Some(_) => {}
    }

    let d0 = estimate_nu_support(seq, n_trunc, eps).dist(x0);
    certify_theorem2_with_d0(seq, x0, n, d0)
}

/// Certify a range of degrees against a single pair of support estimates.
/// The N-by-N eigensolves dominate the cost of one certificate, so doing
/// them once for the whole range is the difference between seconds and
/// minutes.
pub fn certify_theorem2_range(
    seq: &CoefficientSequence,
    x0: f64,
    n_lo: usize,
    n_hi: usize,
    n_trunc: usize,
    eps: f64,
) -> Result<Vec<IsolatedCertificate>, CertifyError> {
    use rayon::prelude::*;
    let mu_est = estimate_support(seq, n_trunc, eps);
    let cluster = mu_est
        .intervals()
        .iter()
        .find(|iv| iv[0] <= x0 && x0 <= iv[1]);
    match cluster {
        None => return Err(CertifyError::NotIsolated { x0 }),
        Some(iv) if iv[1] - iv[0] > 4.0 * eps => {
            return Err(CertifyError::NotIsolated { x0 });
        }
        Some(_) => {}
    }
    let d0 = estimate_nu_support(seq, n_trunc, eps).dist(x0);
    (n_lo..=n_hi)
        .into_par_iter()
        .map(|n| certify_theorem2_with_d0(seq, x0, n, d0))
        .collect()
}

fn certify_theorem2_with_d0(
    seq: &CoefficientSequence,
    x0: f64,
    n: usize,
    d0: f64,
) -> Result<IsolatedCertificate, CertifyError> {
    if d0 == 0.0 {
        return Ok(IsolatedCertificate {
            x0,
            d0,
            n,
            delta_n: 0.0,
            count_n: 0,
            count_n_plus_1: 0,
            low_zero_degree: n,
            zero_count: 0,
            status: IsolatedStatus::Inconclusive,
            verified: false,
        });
    }
    let delta_n = delta_radius(d0, seq.a(n + 1))?;
    let count_n = if n == 0 {
        0
    } else {
        count_zeros_in(seq, n, x0 - delta_n, x0 + delta_n)
    };
    let count_n_plus_1 = count_zeros_in(seq, n + 1, x0 - delta_n, x0 + delta_n);
    let (low_zero_degree, zero_count) = if count_n <= count_n_plus_1 {
        (n, count_n)
    } else {
        (n + 1, count_n_plus_1)
    };
    let verified = zero_count <= 1;
    Ok(IsolatedCertificate {
        x0,
        d0,
        n,
        delta_n,
        count_n,
        count_n_plus_1,
        low_zero_degree,
        zero_count,
        status: if verified {
            IsolatedStatus::Verified
        } else {
            IsolatedStatus::Violated
        },
        verified,
    })
}

/// Check the kernel lower bound on zero distances: for every zero w of p_j
/// (j <= n+1),
/// `|z0 - w| >= |p_j(z0)| dist(w, supp) / K_n(z0, z0)^{1/2}`.
/// Computed in log space; must always hold given a correct support model.
pub fn check_lemma21(
    seq: &CoefficientSequence,
    support: &SupportModel,
    z0: f64,
    j: usize,
    n: usize,
) -> bool {
    assert!(j <= n + 1, "need j <= n + 1");
    assert!(j >= 1, "p_0 has no zeros");
    let pj = eval_p(seq, z0, j)[j];
    let half_log_k = 0.5 * kernel_diag_log(seq, z0, n);
    let t = truncate(seq, j);
    let zeros = t.eigenvalues(default_tol(&t)).zeros;
    zeros.iter().all(|&w| {
        if pj.is_zero() {
            return true;
        }
        let dist_w = support.dist(w);
        if dist_w == 0.0 {
            return true;
        }
        let lhs = (z0 - w).abs();
        if lhs == 0.0 {
            return false;
        }
        let rhs_log = pj.log_mag + dist_w.ln() - half_log_k;
        lhs.ln() >= rhs_log - LOG_SLACK
    })
}

/// Check the kernel upper bound:
/// `K_n(x, x) dist(x, supp)^2 <= a_{n+1}^2 [p_{n+1}(x)^2 + p_n(x)^2]`,
/// in log space.
pub fn check_lemma22(seq: &CoefficientSequence, support: &SupportModel, x: f64, n: usize) -> bool {
    let d = support.dist(x);
    if d == 0.0 {
        return true;
    }
    let lhs_log = kernel_diag_log(seq, x, n) + 2.0 * d.ln();
    let p = eval_p(seq, x, n + 1);
    let rhs_log =
        2.0 * seq.a(n + 1).ln() + log_sum_exp(&[2.0 * p[n].log_mag, 2.0 * p[n + 1].log_mag]);
    lhs_log <= rhs_log + LOG_SLACK
}

/// Check that the zeros of p_{n+1} and q_n strictly interlace: exactly one
/// q-zero between consecutive p-zeros. Comparisons allow the combined
/// bisection bracket width.
pub fn check_interlace(seq: &CoefficientSequence, n: usize) -> bool {
    assert!(n >= 1);
    let tp = truncate(seq, n + 1);
    let p = tp.eigenvalues(default_tol(&tp));
    let tq = truncate(&seq.strip(), n);
    let q = tq.eigenvalues(default_tol(&tq));
    (0..n).all(|k| {
        let slack = p.widths[k].max(p.widths[k + 1]).max(q.widths[k]);
        p.zeros[k] - slack <= q.zeros[k] && q.zeros[k] <= p.zeros[k + 1] + slack
    })
}

/// Stieltjes transform `m(z) = \int d mu(x) / (x - z)`, approximated by the
/// depth-N backward continued fraction
/// `m_k = 1 / (b_k - z - a_k^2 m_{k+1})`. Converges in N for z off the real
/// axis.
pub fn m_function(seq: &CoefficientSequence, z: Complex64, n_depth: usize) -> Complex64 {
    assert!(z.im != 0.0, "need Im z != 0");
    assert!(n_depth >= 1);
    let mut m = Complex64::new(0.0, 0.0);
    for k in (1..=n_depth).rev() {
        let a = seq.a(k);
        m = (Complex64::new(seq.b(k), 0.0) - z - a * a * m).inv();
    }
    m
}

/// Residual of the coefficient-stripping relation between the measure and
/// its second-kind measure:
/// `| m_nu(z) - a_1^{-2} [ b_1 - z - m_mu(z)^{-1} ] |`.
/// Vanishes as the continued-fraction depth grows.
pub fn check_eq32(seq: &CoefficientSequence, z: Complex64, n_depth: usize) -> f64 {
    let m_nu = m_function(&seq.strip(), z, n_depth);
    let m_mu = m_function(seq, z, n_depth + 1);
    let a1 = seq.a(1);
    let rhs = (Complex64::new(seq.b(1), 0.0) - z - m_mu.inv()) / (a1 * a1);
    (m_nu - rhs).norm()
}
