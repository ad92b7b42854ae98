//! Command-line front end with deterministic CSV/JSON/human output.
//!
//! Exit codes: 0 success, 2 usage or parse error, 3 precondition violation,
//! 4 theorem violation detected (reserved; a verified-false certificate
//! from a correct support model would be a bug in the underlying theorem).

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::json;

use crate::coeffs::{CoefficientSequence, SupportModel};
use crate::gapdense;
use crate::polyeval::eval_p;
use crate::theorems;
use crate::tridiag::{self, truncate};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_THEOREM_VIOLATION: i32 = 4;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Precondition(String),
    TheoremViolation(String),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Precondition(_) => EXIT_PRECONDITION,
            CliError::TheoremViolation(_) => EXIT_THEOREM_VIOLATION,
            CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Precondition(m) => write!(f, "precondition violated: {m}"),
            CliError::TheoremViolation(m) => write!(f, "THEOREM VIOLATION: {m}"),
            CliError::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "jacobi-zeros",
    about = "Orthonormal polynomial zeros, certificates, and gap experiments from Jacobi coefficients",
    version
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "human")]
    pub format: Format,
    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Bisection tolerance for eigenvalue brackets (default: 1e-12 times
    /// the spectral-radius bound).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate p_0..p_n at a point (sign, log-magnitude, plain value).
    Eval {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long)]
        x: f64,
        #[arg(long)]
        n: usize,
    },
    /// Zeros of p_n (eigenvalues of the n-by-n truncation).
    Zeros {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long)]
        n: usize,
    },
    /// Count zeros of p_n in an open interval.
    Count {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        lo: f64,
        #[arg(long)]
        hi: f64,
    },
    /// Zero-free interval certificates around x0 for a range of degrees.
    Certify {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long)]
        x0: f64,
        /// Degree range, e.g. "1..100" or a single degree.
        #[arg(long)]
        n: String,
        /// Support model, e.g. "[-5,-1],[1,5]" (bare numbers are isolated
        /// points). Required unless --isolated.
        #[arg(long)]
        support: Option<String>,
        /// Treat x0 as an isolated point of the support (second-kind
        /// certificate).
        #[arg(long)]
        isolated: bool,
        /// Truncation size for support estimation (isolated mode).
        #[arg(long, default_value_t = 2000)]
        trunc: usize,
        /// Fattening radius for support estimation (isolated mode).
        #[arg(long, default_value_t = 0.02)]
        eps: f64,
    },
    /// The dense-zeros experiment, or the in-gap zero cloud with --cloud.
    Gapdense {
        #[arg(long, default_value_t = 5)]
        n_max: usize,
        /// Emit the (degree, zero) cloud up to this degree instead.
        #[arg(long)]
        cloud: Option<usize>,
    },
    /// Gauss quadrature nodes and weights for the family's measure.
    Quadrature {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long)]
        n: usize,
    },
    /// Stieltjes transform at a complex point, with the second-kind
    /// consistency residual.
    Mcheck {
        #[command(flatten)]
        family: FamilyArg,
        /// Complex point as "re,im".
        #[arg(long)]
        z: String,
        /// Continued-fraction depth.
        #[arg(long, default_value_t = 500)]
        depth: usize,
    },
}

#[derive(Debug, Args)]
pub struct FamilyArg {
    /// Coefficient family: "constant:a,b", "periodic2:a1,a2,b",
    /// "section4", or a JSON object with a "kind" field.
    #[arg(long)]
    pub family: String,
}

/// Parse the family mini-language; JSON objects pass through serde.
pub fn parse_family(spec: &str) -> Result<CoefficientSequence, CliError> {
    let spec = spec.trim();
    if spec.starts_with('{') {
        return serde_json::from_str(spec)
            .map_err(|e| CliError::Usage(format!("bad family JSON: {e}")));
    }
    let (kind, rest) = match spec.split_once(':') {
        Some((k, r)) => (k, r),
        None => (spec, ""),
    };
    let nums: Result<Vec<f64>, _> = if rest.is_empty() {
        Ok(Vec::new())
    } else {
        rest.split(',').map(|s| s.trim().parse::<f64>()).collect()
    };
    let nums = nums.map_err(|e| CliError::Usage(format!("bad family parameters: {e}")))?;
    let wrong_arity = |want: usize| {
        CliError::Usage(format!(
            "family '{kind}' takes {want} parameters, got {}",
            nums.len()
        ))
    };
    match kind {
        "constant" => {
            if nums.len() != 2 {
                return Err(wrong_arity(2));
            }
            CoefficientSequence::constant(nums[0], nums[1])
                .map_err(|e| CliError::Usage(e.to_string()))
        }
        "periodic2" => {
            if nums.len() != 3 {
                return Err(wrong_arity(3));
            }
            CoefficientSequence::periodic2(nums[0], nums[1], nums[2])
                .map_err(|e| CliError::Usage(e.to_string()))
        }
        "section4" => {
            if !nums.is_empty() {
                return Err(wrong_arity(0));
            }
            Ok(CoefficientSequence::section4())
        }
        other => Err(CliError::Usage(format!("unknown family '{other}'"))),
    }
}

/// Parse a support spec: comma-separated "[lo,hi]" intervals and bare
/// numbers for isolated points.
pub fn parse_support(spec: &str) -> Result<SupportModel, CliError> {
    let mut intervals = Vec::new();
    let mut points = Vec::new();
    let mut rest = spec.trim();
    while !rest.is_empty() {
        rest = rest.trim_start_matches(',').trim();
        if rest.is_empty() {
            break;
        }
        if let Some(stripped) = rest.strip_prefix('[') {
            let end = stripped
                .find(']')
                .ok_or_else(|| CliError::Usage("unterminated interval in support".into()))?;
            let body = &stripped[..end];
            let parts: Vec<&str> = body.split(',').collect();
            if parts.len() != 2 {
                return Err(CliError::Usage(format!("bad interval [{body}]")));
            }
            let lo: f64 = parts[0]
                .trim()
                .parse()
                .map_err(|e| CliError::Usage(format!("bad interval bound: {e}")))?;
            let hi: f64 = parts[1]
                .trim()
                .parse()
                .map_err(|e| CliError::Usage(format!("bad interval bound: {e}")))?;
            intervals.push([lo, hi]);
            rest = &stripped[end + 1..];
        } else {
            let end = rest.find(',').unwrap_or(rest.len());
            let p: f64 = rest[..end]
                .trim()
                .parse()
                .map_err(|e| CliError::Usage(format!("bad support point: {e}")))?;
            points.push(p);
            rest = &rest[end..];
        }
    }
    intervals.sort_by(|a, b| a[0].total_cmp(&b[0]));
    points.sort_by(f64::total_cmp);
    points.dedup();
    SupportModel::new(intervals, points).map_err(|e| CliError::Usage(e.to_string()))
}

/// Parse "lo..hi" or a single degree.
pub fn parse_range(spec: &str) -> Result<(usize, usize), CliError> {
    let bad = |m: &str| CliError::Usage(format!("bad degree range '{spec}': {m}"));
    if let Some((a, b)) = spec.split_once("..") {
        let lo: usize = a.trim().parse().map_err(|_| bad("not an integer"))?;
        let hi: usize = b.trim().parse().map_err(|_| bad("not an integer"))?;
        if lo > hi {
            return Err(bad("empty range"));
        }
        Ok((lo, hi))
    } else {
        let n: usize = spec.trim().parse().map_err(|_| bad("not an integer"))?;
        Ok((n, n))
    }
}

/// Round-trip-safe number formatting: 17 significant digits, '.' decimal
/// separator.
pub fn fmt_f64(v: f64) -> String {
    if v == f64::INFINITY {
        return "inf".into();
    }
    if v == f64::NEG_INFINITY {
        return "-inf".into();
    }
    format!("{v:.16e}")
}

/// A table of rows, rendered to any of the three formats.
struct Table {
    headers: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    json_rows: Vec<serde_json::Value>,
}

impl Table {
    fn new(headers: Vec<&'static str>) -> Self {
        Self {
            headers,
            rows: Vec::new(),
            json_rows: Vec::new(),
        }
    }

    fn push(&mut self, cells: Vec<String>, json: serde_json::Value) {
        debug_assert_eq!(cells.len(), self.headers.len());
        self.rows.push(cells);
        self.json_rows.push(json);
    }

    fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Csv => {
                let _ = writeln!(out, "{}", self.headers.join(","));
                for row in &self.rows {
                    let _ = writeln!(out, "{}", row.join(","));
                }
            }
            Format::Human => {
                let _ = writeln!(out, "{}", self.headers.join("\t"));
                for row in &self.rows {
                    let _ = writeln!(out, "{}", row.join("\t"));
                }
            }
            Format::Json => {
                let _ = writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&serde_json::Value::Array(
                        self.json_rows.clone()
                    ))
                    .expect("tables serialize")
                );
            }
        }
        out
    }
}

fn check_degree(seq: &CoefficientSequence, n: usize) -> Result<(), CliError> {
    if n == 0 {
        return Err(CliError::Usage("degree must be >= 1".into()));
    }
    if let Some(len) = seq.explicit_len() {
        if n > len {
            return Err(CliError::Usage(format!(
                "explicit sequence has only {len} coefficients, degree {n} requested"
            )));
        }
    }
    Ok(())
}

/// Run a parsed command and return its rendered output.
pub fn execute(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Eval { family, x, n } => {
            let seq = parse_family(&family.family)?;
            if let Some(len) = seq.explicit_len() {
                if *n > len {
                    return Err(CliError::Usage(format!(
                        "explicit sequence has only {len} coefficients"
                    )));
                }
            }
            let values = eval_p(&seq, *x, *n);
            let plain = crate::polyeval::eval_p_plain_partial(&seq, *x, *n);
            let mut t = Table::new(vec!["j", "sign", "log_mag", "value"]);
            for (j, (v, p)) in values.iter().zip(&plain).enumerate() {
                t.push(
                    vec![
                        j.to_string(),
                        v.sign.to_string(),
                        fmt_f64(v.log_mag),
                        p.map(fmt_f64).unwrap_or_default(),
                    ],
                    json!({"j": j, "sign": v.sign, "log_mag": v.log_mag, "value": p}),
                );
            }
            Ok(t.render(cli.format))
        }
        Command::Zeros { family, n } => {
            let seq = parse_family(&family.family)?;
            check_degree(&seq, *n)?;
            let m = truncate(&seq, *n);
            let tol = cli.tol.unwrap_or_else(|| tridiag::default_tol(&m));
            let zs = m.eigenvalues(tol);
            let mut t = Table::new(vec!["index", "zero", "bracket_width"]);
            for (i, (z, w)) in zs.zeros.iter().zip(&zs.widths).enumerate() {
                t.push(
                    vec![i.to_string(), fmt_f64(*z), fmt_f64(*w)],
                    json!({"index": i, "zero": z, "bracket_width": w}),
                );
            }
            Ok(t.render(cli.format))
        }
        Command::Count { family, n, lo, hi } => {
            let seq = parse_family(&family.family)?;
            check_degree(&seq, *n)?;
            if !(lo < hi) {
                return Err(CliError::Precondition(format!(
                    "need lo < hi, got {lo} >= {hi}"
                )));
            }
            let c = tridiag::count_zeros_in(&seq, *n, *lo, *hi);
            let mut t = Table::new(vec!["n", "lo", "hi", "count"]);
            t.push(
                vec![n.to_string(), fmt_f64(*lo), fmt_f64(*hi), c.to_string()],
                json!({"n": n, "lo": lo, "hi": hi, "count": c}),
            );
            Ok(t.render(cli.format))
        }
        Command::Certify {
            family,
            x0,
            n,
            support,
            isolated,
            trunc,
            eps,
        } => {
            let seq = parse_family(&family.family)?;
            let (n_lo, n_hi) = parse_range(n)?;
            if *isolated {
                certify_isolated(cli, &seq, *x0, n_lo, n_hi, *trunc, *eps)
            } else {
                let supp = match support {
                    Some(s) => parse_support(s)?,
                    None => seq.known_support().ok_or_else(|| {
                        CliError::Usage(
                            "no --support given and the family has no known support".into(),
                        )
                    })?,
                };
                certify_gap(cli, &seq, &supp, *x0, n_lo, n_hi)
            }
        }
        Command::Gapdense { n_max, cloud } => {
            if let Some(j_max) = cloud {
                if *j_max < 1 {
                    return Err(CliError::Usage("cloud degree must be >= 1".into()));
                }
                let cloud = gapdense::gap_zero_cloud(*j_max);
                let mut t = Table::new(vec!["j", "zero"]);
                for (j, z) in cloud {
                    t.push(
                        vec![j.to_string(), fmt_f64(z)],
                        json!({"j": j, "zero": z}),
                    );
                }
                Ok(t.render(cli.format))
            } else {
                if *n_max < 1 {
                    return Err(CliError::Usage("n-max must be >= 1".into()));
                }
                let records = gapdense::run_gap_experiment(*n_max);
                let mut t = Table::new(vec![
                    "n",
                    "j",
                    "beta_n",
                    "nearest_zero",
                    "distance",
                    "bound",
                    "residual_sq",
                    "residual_bound",
                    "pass",
                ]);
                for r in &records {
                    t.push(
                        vec![
                            r.n.to_string(),
                            r.j.to_string(),
                            fmt_f64(r.beta_n),
                            fmt_f64(r.nearest_zero),
                            fmt_f64(r.distance),
                            fmt_f64(r.bound),
                            fmt_f64(r.residual_sq),
                            fmt_f64(r.residual_bound),
                            r.pass.to_string(),
                        ],
                        serde_json::to_value(r).expect("records serialize"),
                    );
                }
                Ok(t.render(cli.format))
            }
        }
        Command::Quadrature { family, n } => {
            let seq = parse_family(&family.family)?;
            check_degree(&seq, *n)?;
            let (nodes, weights) = tridiag::gauss_quadrature(&seq, *n);
            let mut t = Table::new(vec!["index", "node", "weight"]);
            for (i, (x, w)) in nodes.iter().zip(&weights).enumerate() {
                t.push(
                    vec![i.to_string(), fmt_f64(*x), fmt_f64(*w)],
                    json!({"index": i, "node": x, "weight": w}),
                );
            }
            Ok(t.render(cli.format))
        }
        Command::Mcheck { family, z, depth } => {
            let seq = parse_family(&family.family)?;
            let parts: Vec<&str> = z.split(',').collect();
            if parts.len() != 2 {
                return Err(CliError::Usage(format!("bad complex point '{z}'")));
            }
            let re: f64 = parts[0]
                .trim()
                .parse()
                .map_err(|e| CliError::Usage(format!("bad complex point: {e}")))?;
            let im: f64 = parts[1]
                .trim()
                .parse()
                .map_err(|e| CliError::Usage(format!("bad complex point: {e}")))?;
            if im == 0.0 {
                return Err(CliError::Precondition("need Im z != 0".into()));
            }
            if *depth < 1 {
                return Err(CliError::Usage("depth must be >= 1".into()));
            }
            let zc = Complex64::new(re, im);
            let m = theorems::m_function(&seq, zc, *depth);
            let residual = theorems::check_eq32(&seq, zc, *depth);
            let mut t = Table::new(vec!["re_z", "im_z", "re_m", "im_m", "eq32_residual"]);
            t.push(
                vec![
                    fmt_f64(re),
                    fmt_f64(im),
                    fmt_f64(m.re),
                    fmt_f64(m.im),
                    fmt_f64(residual),
                ],
                json!({"z": {"re": re, "im": im}, "m": {"re": m.re, "im": m.im},
                       "eq32_residual": residual}),
            );
            Ok(t.render(cli.format))
        }
    }
}

fn certify_gap(
    cli: &Cli,
    seq: &CoefficientSequence,
    supp: &SupportModel,
    x0: f64,
    n_lo: usize,
    n_hi: usize,
) -> Result<String, CliError> {
    let certs = theorems::certify_theorem1_range(seq, supp, x0, n_lo, n_hi).map_err(|e| match e {
        theorems::CertifyError::PointInSupport { .. } => CliError::Precondition(e.to_string()),
        other => CliError::Usage(other.to_string()),
    })?;
    if let Some(bad) = certs.iter().find(|c| !c.verified) {
        return Err(CliError::TheoremViolation(bad.verdict()));
    }
    render_gap_certs(cli.format, &certs)
}

fn render_gap_certs(
    format: Format,
    certs: &[theorems::GapCertificate],
) -> Result<String, CliError> {
    if format == Format::Human {
        let mut out = String::new();
        for c in certs {
            let _ = writeln!(out, "{}", c.verdict());
        }
        return Ok(out);
    }
    let mut t = Table::new(vec![
        "n",
        "x0",
        "d",
        "delta_n",
        "count_n",
        "count_n_plus_1",
        "zero_free_degree",
        "verified",
    ]);
    for c in certs {
        t.push(
            vec![
                c.n.to_string(),
                fmt_f64(c.x0),
                fmt_f64(c.d),
                fmt_f64(c.delta_n),
                c.count_n.to_string(),
                c.count_n_plus_1.to_string(),
                format!("{:?}", c.zero_free_degree).to_lowercase(),
                c.verified.to_string(),
            ],
            serde_json::to_value(c).expect("certificates serialize"),
        );
    }
    Ok(t.render(format))
}

fn certify_isolated(
    cli: &Cli,
    seq: &CoefficientSequence,
    x0: f64,
    n_lo: usize,
    n_hi: usize,
    trunc: usize,
    eps: f64,
) -> Result<String, CliError> {
    let certs = theorems::certify_theorem2_range(seq, x0, n_lo, n_hi, trunc, eps).map_err(
        |e| match e {
            theorems::CertifyError::NotIsolated { .. } => CliError::Precondition(e.to_string()),
            other => CliError::Usage(other.to_string()),
        },
    )?;
    for c in &certs {
        if c.status == theorems::IsolatedStatus::Violated {
            return Err(CliError::TheoremViolation(c.verdict()));
        }
    }
    if cli.format == Format::Human {
        let mut out = String::new();
        for c in &certs {
            let _ = writeln!(out, "{}", c.verdict());
        }
        return Ok(out);
    }
    let mut t = Table::new(vec![
        "n",
        "x0",
        "d0",
        "delta_n",
        "count_n",
        "count_n_plus_1",
        "low_zero_degree",
        "zero_count",
        "status",
    ]);
    for c in &certs {
        t.push(
            vec![
                c.n.to_string(),
                fmt_f64(c.x0),
                fmt_f64(c.d0),
                fmt_f64(c.delta_n),
                c.count_n.to_string(),
                c.count_n_plus_1.to_string(),
                c.low_zero_degree.to_string(),
                c.zero_count.to_string(),
                format!("{:?}", c.status).to_lowercase(),
            ],
            serde_json::to_value(c).expect("certificates serialize"),
        );
    }
    Ok(t.render(cli.format))
}

/// Top-level driver: configure the thread pool, execute, write output.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    if let Some(threads) = cli.threads {
        // ignore failure when a pool already exists (repeated calls in tests)
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    let output = execute(cli)?;
    match &cli.out {
        Some(path) => {
            std::fs::write(path, output.as_bytes())?;
        }
        None => {
            std::io::stdout().write_all(output.as_bytes())?;
        }
    }
    Ok(())
}
