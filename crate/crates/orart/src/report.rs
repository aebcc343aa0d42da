//! Shared report types for curvature tests.
//!
//! Every comparison-style check (CN inequality, triangle comparison,
//! convexity, Berestovskii probes) produces a [`CatReport`]: a pass/fail
//! verdict plus the violating tuples, worst first. Slack is always
//! `bound - measured`, so negative slack means a violation.

use serde::Serialize;
use std::fmt;

/// Outcome of a refutation-style test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Pass,
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => write!(f, "pass"),
            Verdict::Fail => write!(f, "fail"),
        }
    }
}

/// A single violating sample: the labeled points involved and the slack.
#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub points: Vec<String>,
    pub slack: f64,
}

/// Aggregate result of a sampled or exhaustive inequality check.
///
/// `witnesses` holds only violations (slack < -tolerance), sorted most
/// negative first and truncated to [`CatReport::MAX_WITNESSES`];
/// `violations` is the untruncated count. `min_slack` is the smallest slack
/// seen over all checks, including passing ones, so equality cases are
/// visible to callers.
#[derive(Debug, Clone, Serialize)]
pub struct CatReport {
    pub kind: String,
    pub verdict: Verdict,
    pub checked: usize,
    pub skipped: usize,
    pub violations: usize,
    pub min_slack: f64,
    pub tolerance: f64,
    pub witnesses: Vec<Witness>,
}

impl CatReport {
    pub const MAX_WITNESSES: usize = 32;

    pub fn new(kind: &str, tolerance: f64) -> Self {
        CatReport {
            kind: kind.to_string(),
            verdict: Verdict::Pass,
            checked: 0,
            skipped: 0,
            violations: 0,
            min_slack: f64::INFINITY,
            tolerance,
            witnesses: Vec::new(),
        }
    }

    /// Record one evaluated sample.
    pub fn record(&mut self, points: Vec<String>, slack: f64) {
        self.checked += 1;
        if slack < self.min_slack {
            self.min_slack = slack;
        }
        if slack < -self.tolerance {
            self.verdict = Verdict::Fail;
            self.violations += 1;
            self.witnesses.push(Witness { points, slack });
        }
    }

    /// Sort witnesses worst-first and truncate to the cap.
    pub fn finish(mut self) -> Self {
        self.witnesses.sort_by(|a, b| {
            a.slack
                .partial_cmp(&b.slack)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then_with(|| a.points.cmp(&b.points))
        });
        self.witnesses.truncate(Self::MAX_WITNESSES);
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

impl fmt::Display for CatReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}: {} ({} checked, {} skipped, tol {:e})",
            self.kind, self.verdict, self.checked, self.skipped, self.tolerance
        )?;
        if self.checked > 0 && self.min_slack.is_finite() {
            writeln!(f, "  min slack: {}", self.min_slack)?;
        }
        if self.violations > 0 {
            writeln!(f, "  violations: {}", self.violations)?;
        }
        for w in &self.witnesses {
            writeln!(f, "  witness ({}) slack {}", w.points.join(", "), w.slack)?;
        }
        Ok(())
    }
}

/// A space that can measure distances and produce midpoints; the CN test is
/// generic over this so metric graphs, finite metric spaces, and Euclidean
/// point sets all plug in.
pub trait DistanceOracle {
    type Point: Clone;

    fn distance(&self, a: &Self::Point, b: &Self::Point) -> f64;

    /// All midpoints of `(a, b)` this oracle can name. May be empty.
    fn midpoints(&self, a: &Self::Point, b: &Self::Point) -> Vec<Self::Point>;

    fn label(&self, p: &Self::Point) -> String;
}

/// Quadratic midpoint test over a finite point list.
///
/// For every pair `{q, r}` with at least one midpoint `m`, and every
/// observation point `p`, the nonpositive-curvature bound
///
/// ```text
/// d(p,q)^2 + d(p,r)^2 >= 2 d(m,p)^2 + 2 d(m,q)^2
/// ```
///
/// must hold; slack is left side minus right side. Pairs without any
/// midpoint are counted as skipped.
pub fn cn_report<O: DistanceOracle>(oracle: &O, points: &[O::Point], tol: f64) -> CatReport {
    let mut report = CatReport::new("cn-inequality", tol);
    for (qi, q) in points.iter().enumerate() {
        for r in points.iter().skip(qi + 1) {
            let mids = oracle.midpoints(q, r);
            if mids.is_empty() {
                report.skipped += 1;
                continue;
            }
            for m in &mids {
                let dmq = oracle.distance(m, q);
                for p in points {
                    let dpq = oracle.distance(p, q);
                    let dpr = oracle.distance(p, r);
                    let dmp = oracle.distance(m, p);
                    let slack = dpq * dpq + dpr * dpr - 2.0 * dmp * dmp - 2.0 * dmq * dmq;
                    report.record(
                        vec![
                            oracle.label(p),
                            oracle.label(q),
                            oracle.label(r),
                            oracle.label(m),
                        ],
                        slack,
                    );
                }
            }
        }
    }
    report.finish()
}
