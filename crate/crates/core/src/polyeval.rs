//! Stable evaluation of orthonormal polynomials and the reproducing kernel.
//!
//! The three-term recurrence
//! `a_{k+1} p_{k+1}(x) = (x - b_{k+1}) p_k(x) - a_k p_{k-1}(x)`
//! can grow like `3^n` (the dense-zeros family does exactly that at x = 0),
//! so the main evaluator carries a running log-scale and reports values as
//! sign times log-magnitude. Plain-double variants exist for the kernel,
//! which refuses to return silently degraded results on overflow.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coeffs::CoefficientSequence;

/// Rescale once the running pair exceeds this magnitude (or drops below its
/// reciprocal). Ratios and signs, which all downstream checks depend on,
/// are preserved exactly.
const RESCALE_LIMIT: f64 = 6.235149080811617e27; // exp(64)

/// Overflow guard for plain-double kernel accumulation: products of two
/// values below this bound cannot overflow.
const PLAIN_LIMIT: f64 = 1e150;

#[derive(Debug, Error, PartialEq)]
pub enum KernelError {
    #[error("polynomial values exceed plain double range at degree {degree}; reduce n or shift x")]
    Overflow { degree: usize },
    #[error("evaluation points too close (|x - y| = {gap:.3e}); use the direct kernel")]
    CoincidentPoints { gap: f64 },
}

/// `p_n(x)` as sign times `exp(log_mag)`, comparable without overflow for
/// degrees up to at least 1e5.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledPolyValue {
    /// -1, 0 or +1; zero exactly when the recurrence produced an exact zero.
    pub sign: i8,
    /// Natural log of the magnitude; `-inf` when `sign == 0`.
    pub log_mag: f64,
}

impl ScaledPolyValue {
    pub const ZERO: Self = Self {
        sign: 0,
        log_mag: f64::NEG_INFINITY,
    };

    pub fn from_value(v: f64) -> Self {
        if v == 0.0 {
            Self::ZERO
        } else {
            Self {
                sign: if v > 0.0 { 1 } else { -1 },
                log_mag: v.abs().ln(),
            }
        }
    }

    /// The plain value; overflows to +-inf when the magnitude is out of
    /// double range.
    pub fn value(&self) -> f64 {
        self.sign as f64 * self.log_mag.exp()
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// Order by the signed value, without forming it.
    pub fn total_cmp(&self, other: &Self) -> std::cmp::Ordering {
        match self.sign.cmp(&other.sign) {
            std::cmp::Ordering::Equal => {
                if self.sign >= 0 {
                    self.log_mag.total_cmp(&other.log_mag)
                } else {
                    other.log_mag.total_cmp(&self.log_mag)
                }
            }
            ord => ord,
        }
    }
}

/// Value of the Christoffel-Darboux kernel `K_n(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelValue {
    pub value: f64,
    pub n: usize,
    pub x: f64,
    pub y: f64,
}

/// Evaluate `p_0(x), ..., p_n(x)` with running rescaling. Intermediate
/// magnitudes never leave machine range.
pub fn eval_p(seq: &CoefficientSequence, x: f64, n: usize) -> Vec<ScaledPolyValue> {
    let mut out = Vec::with_capacity(n + 1);
    let mut log_scale = 0.0f64;
    let mut prev = 0.0f64; // p_{k-1} / exp(log_scale)
    let mut cur = 1.0f64; // p_k / exp(log_scale)
    out.push(scaled(cur, log_scale));
    for k in 0..n {
        let a_next = seq.a(k + 1);
        let b_next = seq.b(k + 1);
        let a_prev = if k == 0 { 0.0 } else { seq.a(k) };
        let next = ((x - b_next) * cur - a_prev * prev) / a_next;
        prev = cur;
        cur = next;
        let m = prev.abs().max(cur.abs());
        if m > RESCALE_LIMIT || (m > 0.0 && m < 1.0 / RESCALE_LIMIT) {
            prev /= m;
            cur /= m;
            log_scale += m.ln();
        }
        out.push(scaled(cur, log_scale));
    }
    out
}

fn scaled(v: f64, log_scale: f64) -> ScaledPolyValue {
    if v == 0.0 {
        ScaledPolyValue::ZERO
    } else {
        ScaledPolyValue {
            sign: if v > 0.0 { 1 } else { -1 },
            log_mag: v.abs().ln() + log_scale,
        }
    }
}

/// Evaluate `p_n(x)` and its derivative, both scaled, by running the value
/// and derivative recurrences jointly. Used to Newton-polish quadrature
/// nodes.
pub fn eval_p_with_deriv(
    seq: &CoefficientSequence,
    x: f64,
    n: usize,
) -> (ScaledPolyValue, ScaledPolyValue) {
    let mut log_scale = 0.0f64;
    let mut prev = 0.0f64;
    let mut cur = 1.0f64;
    let mut dprev = 0.0f64;
    let mut dcur = 0.0f64;
    for k in 0..n {
        let a_next = seq.a(k + 1);
        let b_next = seq.b(k + 1);
        let a_prev = if k == 0 { 0.0 } else { seq.a(k) };
        let next = ((x - b_next) * cur - a_prev * prev) / a_next;
        let dnext = ((x - b_next) * dcur - a_prev * dprev + cur) / a_next;
        prev = cur;
        cur = next;
        dprev = dcur;
        dcur = dnext;
        let m = prev.abs().max(cur.abs()).max(dprev.abs()).max(dcur.abs());
        if m > RESCALE_LIMIT || (m > 0.0 && m < 1.0 / RESCALE_LIMIT) {
            prev /= m;
            cur /= m;
            dprev /= m;
            dcur /= m;
            log_scale += m.ln();
        }
    }
    if n == 0 {
        (scaled(1.0, 0.0), ScaledPolyValue::ZERO)
    } else {
        (scaled(cur, log_scale), scaled(dcur, log_scale))
    }
}

/// Second-kind polynomials `q_0(x), ..., q_n(x)`: the orthonormal
/// polynomials of the stripped sequence.
pub fn eval_q(seq: &CoefficientSequence, x: f64, n: usize) -> Vec<ScaledPolyValue> {
    eval_p(&seq.strip(), x, n)
}

/// Plain-double evaluation of `p_0(x), ..., p_n(x)`, failing once any value
/// leaves the range where kernel products stay representable.
pub fn eval_p_plain(seq: &CoefficientSequence, x: f64, n: usize) -> Result<Vec<f64>, KernelError> {
    let mut out = Vec::with_capacity(n + 1);
    let mut prev = 0.0f64;
    let mut cur = 1.0f64;
    out.push(cur);
    for k in 0..n {
        let next = ((x - seq.b(k + 1)) * cur - if k == 0 { 0.0 } else { seq.a(k) } * prev)
            / seq.a(k + 1);
        if !next.is_finite() || next.abs() > PLAIN_LIMIT {
            return Err(KernelError::Overflow { degree: k + 1 });
        }
        prev = cur;
        cur = next;
        out.push(cur);
    }
    Ok(out)
}

/// Plain-double evaluation that keeps going past overflow, reporting `None`
/// from the first unrepresentable degree on. Exact (not exp/log
/// round-tripped) wherever it yields a value.
pub fn eval_p_plain_partial(seq: &CoefficientSequence, x: f64, n: usize) -> Vec<Option<f64>> {
    let mut out = Vec::with_capacity(n + 1);
    let mut prev = 0.0f64;
    let mut cur = 1.0f64;
    let mut ok = true;
    out.push(Some(cur));
    for k in 0..n {
        let next = ((x - seq.b(k + 1)) * cur - if k == 0 { 0.0 } else { seq.a(k) } * prev)
            / seq.a(k + 1);
        ok = ok && next.is_finite();
        prev = cur;
        cur = next;
        out.push(if ok { Some(cur) } else { None });
    }
    out
}

/// `log gamma_n` where `gamma_n = (a_1 ... a_n)^{-1}` is the (positive)
/// leading coefficient of `p_n`.
pub fn leading_coeff_log(seq: &CoefficientSequence, n: usize) -> f64 {
    -(1..=n).map(|k| seq.a(k).ln()).sum::<f64>()
}

/// `K_n(x, y) = sum_{j<=n} p_j(x) p_j(y)` by direct compensated summation.
pub fn kernel_direct(
    seq: &CoefficientSequence,
    x: f64,
    y: f64,
    n: usize,
) -> Result<KernelValue, KernelError> {
    let px = eval_p_plain(seq, x, n)?;
    let py = eval_p_plain(seq, y, n)?;
    // Kahan summation
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    for (a, b) in px.iter().zip(&py) {
        let term = a * b - c;
        let t = sum + term;
        c = (t - sum) - term;
        sum = t;
    }
    Ok(KernelValue {
        value: sum,
        n,
        x,
        y,
    })
}

/// `K_n(x, y)` by the Christoffel-Darboux formula
/// `a_{n+1} [p_{n+1}(x) p_n(y) - p_{n+1}(y) p_n(x)] / (x - y)`.
/// Rejects nearly coincident points; the confluent limit is not needed by
/// any certificate check.
pub fn kernel_cd(
    seq: &CoefficientSequence,
    x: f64,
    y: f64,
    n: usize,
) -> Result<KernelValue, KernelError> {
    let gap = (x - y).abs();
    if gap < 1e-12 * (1.0 + x.abs()) {
        return Err(KernelError::CoincidentPoints { gap });
    }
    let px = eval_p_plain(seq, x, n + 1)?;
    let py = eval_p_plain(seq, y, n + 1)?;
    let a = seq.a(n + 1);
    let value = a * (px[n + 1] * py[n] - py[n + 1] * px[n]) / (x - y);
    Ok(KernelValue {
        value,
        n,
        x,
        y,
    })
}

/// `log K_n(x, x)`, computed entirely in log space so it is available even
/// where the plain kernel overflows. Always finite since `p_0 = 1`.
pub fn kernel_diag_log(seq: &CoefficientSequence, x: f64, n: usize) -> f64 {
    let p = eval_p(seq, x, n);
    let logs: Vec<f64> = p.iter().map(|v| 2.0 * v.log_mag).collect();
    log_sum_exp(&logs)
}

/// log(sum exp(l_i)) with the max factored out. Empty input or all `-inf`
/// gives `-inf`.
pub fn log_sum_exp(logs: &[f64]) -> f64 {
    let m = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    m + logs.iter().map(|l| (l - m).exp()).sum::<f64>().ln()
}
