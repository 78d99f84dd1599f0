//! Identity-verification engine.
//!
//! Runs every identity in the library over a grid of exact evaluation
//! points and reports per-identity pass counts plus witnesses for any
//! failure. Exact identities are checked with zero tolerance; the two
//! floating suites (derivative, q -> 1 limits) carry explicit tolerances
//! from the configuration.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::bernstein::{
    additive_recurrence, classical_basis_f64, degree_reduction, derivative,
    derivative_central_diff, moment_identity, monomial_expansion, operator_apply, q_basis,
    q_basis_f64, q_basis_oracle, ratio_identity, sum_basis_closed_form, SampledFunction,
};
use crate::error::{Error, Result};
use crate::qnum::{FloatPoint, QPoint};
use crate::rational::Rational;
use crate::stirling::{
    bell_numbers, q_power_expansion, q_stirling, q_stirling_f64, q_stirling_series_oracle,
    qbern_via_bernoulli, stirling2_difference, stirling2_recurrence, stirling2_series_oracle,
    theorem8_check,
};

/// Every identity suite the engine can run, in report order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IdentityId {
    T1Oracle,
    T2Recurrence,
    T2Derivative,
    T3Symmetry,
    T3Sum,
    Eq7IdentityFn,
    T4Reduction,
    C5Ratio,
    T6Monomial,
    T7Moment,
    Eq20Bernoulli,
    Eq2122QStirling,
    Eq23Power,
    T8Equality,
    QLimit,
}

impl IdentityId {
    pub const ALL: [IdentityId; 15] = [
        IdentityId::T1Oracle,
        IdentityId::T2Recurrence,
        IdentityId::T2Derivative,
        IdentityId::T3Symmetry,
        IdentityId::T3Sum,
        IdentityId::Eq7IdentityFn,
        IdentityId::T4Reduction,
        IdentityId::C5Ratio,
        IdentityId::T6Monomial,
        IdentityId::T7Moment,
        IdentityId::Eq20Bernoulli,
        IdentityId::Eq2122QStirling,
        IdentityId::Eq23Power,
        IdentityId::T8Equality,
        IdentityId::QLimit,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            IdentityId::T1Oracle => "T1_ORACLE",
            IdentityId::T2Recurrence => "T2_RECURRENCE",
            IdentityId::T2Derivative => "T2_DERIVATIVE",
            IdentityId::T3Symmetry => "T3_SYMMETRY",
            IdentityId::T3Sum => "T3_SUM",
            IdentityId::Eq7IdentityFn => "EQ7_IDENTITY_FN",
            IdentityId::T4Reduction => "T4_REDUCTION",
            IdentityId::C5Ratio => "C5_RATIO",
            IdentityId::T6Monomial => "T6_MONOMIAL",
            IdentityId::T7Moment => "T7_MOMENT",
            IdentityId::Eq20Bernoulli => "EQ20_BERNOULLI",
            IdentityId::Eq2122QStirling => "EQ21_22_QSTIRLING",
            IdentityId::Eq23Power => "EQ23_POWER",
            IdentityId::T8Equality => "T8_EQUALITY",
            IdentityId::QLimit => "QLIMIT",
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        IdentityId::ALL
            .iter()
            .copied()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::UnknownIdentity(s.to_string()))
    }
}

impl Serialize for IdentityId {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

/// Parses a comma-separated `--only` list.
pub fn parse_identity_list(s: &str) -> Result<BTreeSet<IdentityId>> {
    s.split(',').map(|part| part.trim().parse()).collect()
}

/// Grid and tolerance settings for a verify run.
#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub max_n: u32,
    pub q_list: Vec<Rational>,
    pub x_grid_size: u32,
    pub float_tol_derivative: f64,
    pub float_tol_limit: f64,
    pub parallel: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        let q_list = [(1, 5), (1, 3), (1, 2), (3, 4), (9, 10)]
            .iter()
            .map(|&(n, d)| Rational::new(n, d).expect("nonzero denominators"))
            .collect();
        Self {
            max_n: 12,
            q_list,
            x_grid_size: 9,
            float_tol_derivative: 1e-5,
            float_tol_limit: 1e-3,
            parallel: false,
        }
    }
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_n < 1 {
            return Err(Error::Config("max_n must be >= 1".into()));
        }
        if self.x_grid_size < 1 {
            return Err(Error::Config("x_grid_size must be >= 1".into()));
        }
        if self.q_list.is_empty() {
            return Err(Error::Config("q_list must be nonempty".into()));
        }
        for q in &self.q_list {
            if q <= &Rational::zero() || q >= &Rational::one() {
                return Err(Error::Config(format!("q={q} outside (0,1)")));
            }
        }
        Ok(())
    }

    /// Applies comma-separated `key=value` overrides, e.g.
    /// `"max_n=6,q_list=1/5;1/2"` (q_list entries are `;`-separated).
    pub fn apply_overrides(&mut self, overrides: &str) -> Result<()> {
        for part in overrides.split(',').filter(|p| !p.trim().is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("expected key=value, got '{part}'")))?;
            let value = value.trim();
            match key.trim() {
                "max_n" => {
                    self.max_n = value
                        .parse()
                        .map_err(|_| Error::Config(format!("bad max_n '{value}'")))?;
                }
                "x_grid_size" => {
                    self.x_grid_size = value
                        .parse()
                        .map_err(|_| Error::Config(format!("bad x_grid_size '{value}'")))?;
                }
                "float_tol_derivative" => {
                    self.float_tol_derivative = value.parse().map_err(|_| {
                        Error::Config(format!("bad float_tol_derivative '{value}'"))
                    })?;
                }
                "float_tol_limit" => {
                    self.float_tol_limit = value
                        .parse()
                        .map_err(|_| Error::Config(format!("bad float_tol_limit '{value}'")))?;
                }
                "parallel" => {
                    self.parallel = value
                        .parse()
                        .map_err(|_| Error::Config(format!("bad parallel '{value}'")))?;
                }
                "q_list" => {
                    self.q_list = value
                        .split(';')
                        .map(|q| q.trim().parse())
                        .collect::<Result<_>>()?;
                }
                other => return Err(Error::Config(format!("unknown key '{other}'"))),
            }
        }
        self.validate()
    }

    /// Loads overrides from a JSON file.
    pub fn apply_json(&mut self, json: &str) -> Result<()> {
        #[derive(serde::Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Overrides {
            max_n: Option<u32>,
            q_list: Option<Vec<String>>,
            x_grid_size: Option<u32>,
            float_tol_derivative: Option<f64>,
            float_tol_limit: Option<f64>,
            parallel: Option<bool>,
        }
        let parsed: Overrides =
            serde_json::from_str(json).map_err(|e| Error::Config(e.to_string()))?;
        if let Some(v) = parsed.max_n {
            self.max_n = v;
        }
        if let Some(v) = parsed.q_list {
            self.q_list = v.iter().map(|s| s.parse()).collect::<Result<_>>()?;
        }
        if let Some(v) = parsed.x_grid_size {
            self.x_grid_size = v;
        }
        if let Some(v) = parsed.float_tol_derivative {
            self.float_tol_derivative = v;
        }
        if let Some(v) = parsed.float_tol_limit {
            self.float_tol_limit = v;
        }
        if let Some(v) = parsed.parallel {
            self.parallel = v;
        }
        self.validate()
    }

    /// Exact evaluation points for one q: `x_grid_size` interior X values
    /// plus, when asked, the endpoints X = q (x = 1) and X = 1 (x = 0).
    pub fn points_for(&self, q: &Rational, include_endpoints: bool) -> Vec<QPoint> {
        let mut points = Vec::new();
        let one = Rational::one();
        let gap = &one - q;
        let steps = Rational::from_int((self.x_grid_size + 1) as i64);
        if include_endpoints {
            points.push(QPoint::new(q.clone(), q.clone()).expect("X = q is valid"));
        }
        for j in 1..=self.x_grid_size {
            let x_pow = q + &(&gap * &(&Rational::from_int(j as i64) / &steps));
            points.push(QPoint::new(q.clone(), x_pow).expect("interior X is valid"));
        }
        if include_endpoints {
            points.push(QPoint::new(q.clone(), one).expect("X = 1 is valid"));
        }
        points
    }

    // per-suite degree caps, anchored to max_n
    fn deep_n(&self) -> u32 {
        self.max_n + 4
    }

    fn reduced_n(&self) -> u32 {
        self.max_n.saturating_sub(2).max(1)
    }

    fn float_n(&self) -> u32 {
        self.max_n.saturating_sub(4).max(1)
    }
}

/// Deliberate faults for exercising the failure path.
#[derive(Clone, Copy, Debug, Default)]
pub struct FaultInjection {
    /// Flip the (1-q) factor in the basis-sum closed form to (q-1).
    pub flip_sum_sign: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// Check coordinates, kept as strings so the report is uniform across
/// exact and floating suites.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<String>,
}

impl Params {
    fn grid(k: impl fmt::Display, n: impl fmt::Display, p: &QPoint) -> Self {
        Params {
            k: Some(k.to_string()),
            n: Some(n.to_string()),
            i: None,
            point: Some(format!("q={}, X={}", p.q(), p.x_pow())),
        }
    }

    fn with_i(mut self, i: impl fmt::Display) -> Self {
        self.i = Some(i.to_string());
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct FailureDetail {
    pub parameters: Params,
    pub witness: Witness,
}

/// Outcome of one identity suite over the whole grid.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub identity_id: IdentityId,
    pub parameters: Params,
    pub status: Status,
    pub checks: u64,
    pub checks_failed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<FailureDetail>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub pass: u64,
    pub fail: u64,
    pub checks_run: u64,
    pub checks_failed: u64,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConfigDump {
    pub max_n: u32,
    pub q_list: Vec<String>,
    pub x_grid_size: u32,
    pub float_tol_derivative: f64,
    pub float_tol_limit: f64,
    pub parallel: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub config: ConfigDump,
    pub results: Vec<IdentityReport>,
    pub summary: Summary,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.summary.fail == 0
    }

    /// Plain-text rendering: one line per identity plus any witnesses.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            let status = match r.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
            };
            out.push_str(&format!(
                "{status} {:<18} {:>8} checks  ({:.2}s)\n",
                r.identity_id.as_str(),
                r.checks,
                r.seconds
            ));
            for f in &r.failures {
                out.push_str(&format!(
                    "     at k={} n={} i={} point={}: left={} right={}\n",
                    f.parameters.k.as_deref().unwrap_or("-"),
                    f.parameters.n.as_deref().unwrap_or("-"),
                    f.parameters.i.as_deref().unwrap_or("-"),
                    f.parameters.point.as_deref().unwrap_or("-"),
                    f.witness.left,
                    f.witness.right
                ));
            }
            if let Some(note) = &r.note {
                out.push_str(&format!("     note: {note}\n"));
            }
        }
        out.push_str(&format!(
            "summary: {} identities pass, {} fail; {} checks run, {} failed ({:.2}s)\n",
            self.summary.pass,
            self.summary.fail,
            self.summary.checks_run,
            self.summary.checks_failed,
            self.summary.seconds
        ));
        out
    }
}

const MAX_WITNESSES: usize = 20;

/// Accumulates check results for one suite.
struct SuiteAcc {
    checks: u64,
    failed: u64,
    failures: Vec<FailureDetail>,
}

impl SuiteAcc {
    fn new() -> Self {
        Self {
            checks: 0,
            failed: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, params: Params, left: String, right: String) {
        self.checks += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < MAX_WITNESSES {
                self.failures.push(FailureDetail {
                    parameters: params,
                    witness: Witness { left, right },
                });
            }
        }
    }

    fn check_eq(&mut self, params: Params, left: &Rational, right: &Rational) {
        self.record(left == right, params, left.to_string(), right.to_string());
    }

    /// |left - right| <= tol * max(1, |left|, |right|)
    fn check_close(&mut self, params: Params, left: f64, right: f64, tol: f64) {
        let scale = left.abs().max(right.abs()).max(1.0);
        let ok = (left - right).abs() <= tol * scale;
        self.record(ok, params, format!("{left:.17e}"), format!("{right:.17e}"));
    }

    /// |left - right| <= tol (absolute)
    fn check_abs(&mut self, params: Params, left: f64, right: f64, tol: f64) {
        let ok = (left - right).abs() <= tol;
        self.record(ok, params, format!("{left:.17e}"), format!("{right:.17e}"));
    }

    fn into_report(
        self,
        id: IdentityId,
        parameters: Params,
        note: Option<String>,
        started: Instant,
    ) -> IdentityReport {
        let status = if self.failed == 0 {
            Status::Pass
        } else {
            Status::Fail
        };
        IdentityReport {
            identity_id: id,
            parameters,
            status,
            checks: self.checks,
            checks_failed: self.failed,
            witness: self.failures.first().map(|f| f.witness.clone()),
            failures: self.failures,
            note,
            seconds: started.elapsed().as_secs_f64(),
        }
    }
}

/// Runs the selected identity suites and assembles the report.
pub fn run_verify(
    config: &VerifyConfig,
    only: Option<&BTreeSet<IdentityId>>,
    faults: FaultInjection,
) -> Result<VerifyReport> {
    config.validate()?;
    let started = Instant::now();
    let selected: Vec<IdentityId> = IdentityId::ALL
        .iter()
        .copied()
        .filter(|id| only.is_none_or(|set| set.contains(id)))
        .collect();

    let run_one = |id: &IdentityId| run_suite(*id, config, faults);
    let mut results: Vec<IdentityReport> = if config.parallel {
        selected.par_iter().map(run_one).collect()
    } else {
        selected.iter().map(run_one).collect()
    };
    results.sort_by_key(|r| r.identity_id);

    let pass = results.iter().filter(|r| r.status == Status::Pass).count() as u64;
    let fail = results.len() as u64 - pass;
    let checks_run = results.iter().map(|r| r.checks).sum();
    let checks_failed = results.iter().map(|r| r.checks_failed).sum();

    Ok(VerifyReport {
        config: ConfigDump {
            max_n: config.max_n,
            q_list: config.q_list.iter().map(|q| q.to_string()).collect(),
            x_grid_size: config.x_grid_size,
            float_tol_derivative: config.float_tol_derivative,
            float_tol_limit: config.float_tol_limit,
            parallel: config.parallel,
        },
        results,
        summary: Summary {
            pass,
            fail,
            checks_run,
            checks_failed,
            seconds: started.elapsed().as_secs_f64(),
        },
    })
}

fn run_suite(id: IdentityId, config: &VerifyConfig, faults: FaultInjection) -> IdentityReport {
    let started = Instant::now();
    match id {
        IdentityId::T1Oracle => suite_t1_oracle(config, started),
        IdentityId::T2Recurrence => suite_t2_recurrence(config, started),
        IdentityId::T2Derivative => suite_t2_derivative(config, started),
        IdentityId::T3Symmetry => suite_t3_symmetry(config, started),
        IdentityId::T3Sum => suite_t3_sum(config, faults, started),
        IdentityId::Eq7IdentityFn => suite_eq7(config, started),
        IdentityId::T4Reduction => suite_t4(config, started),
        IdentityId::C5Ratio => suite_c5(config, started),
        IdentityId::T6Monomial => suite_t6(config, started),
        IdentityId::T7Moment => suite_t7(config, started),
        IdentityId::Eq20Bernoulli => suite_eq20(config, started),
        IdentityId::Eq2122QStirling => suite_eq2122(config, started),
        IdentityId::Eq23Power => suite_eq23(config, started),
        IdentityId::T8Equality => suite_t8(config, started),
        IdentityId::QLimit => suite_qlimit(config, started),
    }
}

fn sweep_points(config: &VerifyConfig, include_endpoints: bool) -> Vec<QPoint> {
    config
        .q_list
        .iter()
        .flat_map(|q| config.points_for(q, include_endpoints))
        .collect()
}

fn sweep_params(max_n: u32, config: &VerifyConfig) -> Params {
    Params {
        k: None,
        n: Some(format!("0..={max_n}")),
        i: None,
        point: Some(format!(
            "{} q values x {} X points",
            config.q_list.len(),
            config.x_grid_size + 2
        )),
    }
}

fn suite_t1_oracle(config: &VerifyConfig, started: Instant) -> IdentityReport {
    let mut acc = SuiteAcc::new();
    let max_n = config.max_n;
    for p in sweep_points(config, true) {
        for n in 0..=max_n {
            for k in 0..=n {
                acc.check_eq(
                    Params::grid(k, n, &p),
                    &q_basis(k, n, &p),
                    &q_basis_oracle(k, n, &p),
                );
            }
        }
    }
    acc.into_report(
        IdentityId::T1Oracle,
        sweep_params(max_n, config),
        None,
        started,
    )
}

fn suite_t2_recurrence(config: &VerifyConfig, started: Instant) -> IdentityReport {
    let mut acc = SuiteAcc::new();
    let max_n = config.deep_n();
    for p in sweep_points(config, true) {
        for n in 1..=max_n {
            for k in 0..=n {
                acc.check_eq(
                    Params::grid(k, n, &p),
                    &additive_recurrence(k, n, &p),
                    &q_basis(k, n, &p),
                );
            }
        }
    }
    acc.into_report(
        IdentityId::T2Recurrence,
        sweep_params(max_n, config),
        None,
        started,
    )
}

fn suite_t2_derivative(config: &VerifyConfig, started: Instant) -> IdentityReport {
    let mut acc = SuiteAcc::new();
    let max_n = config.float_n();
    let h = 1e-6;
    for &q in &[0.3f64, 0.5, 0.9] {
        for xi in 1..=9u32 {
            let x = xi as f64 / 10.0;
            let fp = FloatPoint::new(q, x).expect("interior point");
            for n in 1..=max_n {
                for k in 0..=n {
                    let params = Params {
                        k: Some(k.to_string()),
                        n: Some(n.to_string()),
                        i: None,
                        point: Some(format!("q={q}, x={x}")),
                    };
                    let formula = derivative(k, n, &fp).expect("interior x");
                    let fd = derivative_central_diff(k, n, &fp, h).expect("interior x");
                    acc.check_close(params, formula, fd, config.float_tol_derivative);
                }
            }
        }
    }
    let params = Params {
        k: None,
        n: Some(format!("1..={max_n}")),
        i: None,
        point: Some("q in {0.3,0.5,0.9}, x in {0.1..0.9}".to_string()),
    };
    acc.into_report(IdentityId::T2Derivative, params, None, started)
}

fn suite_t3_symmetry(config: &VerifyConfig, started: Instant) -> IdentityReport {
    let mut acc = SuiteAcc::new();
    let max_n = config.deep_n();
    for p in sweep_points(config, true) {
        let reflected = p.reflect();
        for n in 0..=max_n {
            for k in 0..=n {
                acc.check_eq(
                    Params::grid(k, n, &p),
                    &q_basis(n - k, n, &reflected),
                    &q_basis(k, n, &p),
                );
            }
        }
    }
    acc.into_report(
        IdentityId::T3Symmetry,
        sweep_params(max_n, config),
        None,
        started,
    )
}

fn suite_t3_sum(config: &VerifyConfig, faults: FaultInjection, started: Instant) -> IdentityReport {
    let mut acc = SuiteAcc::new();
    let max_n = config.deep_n();
    for p in sweep_points(config, true) {
        let power_base = p.q_number() + p.q_complement();
        for n in 0..=max_n {
            let literal: Rational = (0..=n).map(|k| q_basis(k, n, &p)).sum();
            let closed = sum_basis_closed_form(n, &p, faults.flip_sum_sign);
            let params = Params::grid("-", n, &p);
            acc.check_eq(params.clone(), &literal, &closed);
            acc.check_eq(params, &literal, &power_base.pow(n as i64));
        }
    }
    let note = "sign factor pinned to (1-q): the literal sum of C(n,k) a^k b^{n-k} \
                is (a+b)^n, and a+b = 1 + (1-q) a b exactly"
        .to_string();
    acc.into_report(
        IdentityId::T3Sum,
        sweep_params(max_n, config),
        Some(note),
        started,
    )
}

fn suite_eq7(config: &VerifyConfig, started: Instant) -> IdentityReport {
    let mut acc = SuiteAcc::new();
    let max_n = config.max_n;
    for p in sweep_points(config, true) {
        let factor = Rational::one() + (&Rational::one() - p.q()) * p.q_number() * p.q_complement();
        for n in 1..=max_n {
            let f = SampledFunction::identity(n);
            let left = operator_apply(&f, &p);
            let right = p.q_number() * factor.pow(n as i64 - 1);
            acc.check_eq(Params::grid("-", n, &p), &left, &right);
        }
    }
    let note = "closed form checked for f(x) = x only; it does not extend to \
                general f (constant f already has mismatched degrees)"
        .to_string();
    acc.into_report(
        IdentityId::Eq7IdentityFn,
        sweep_params(max_n, config),
        Some(note),
        started,
    )
}

fn suite_t4(config: &VerifyConfig, started: Instant) -> IdentityReport {
    let mut acc = SuiteAcc::new();
    let max_n = config.deep_n();
    for p in sweep_points(config, true) {
        let factor = Rational::one() + (&Rational::one() - p.q()) * p.q_number() * p.q_complement();
        for n in 1..=max_n {
            for k in 0..=n {
                let left = degree_reduction(k, n, &p);
                let right = q_basis(k, n - 1, &p) * &factor;
                acc.check_eq(Params::grid(k, n, &p), &left, &right);
            }
        }
    }
    acc.into_report(
        IdentityId::T4Reduction,
        sweep_params(max_n, config),
        None,
        started,
    )
}

fn suite_c5(config: &VerifyConfig, started: Instant) -> IdentityReport {
    let mut acc = SuiteAcc::new();
    let max_n = config.deep_n();
    // interior points plus X = 1 (x = 0); X = q (x = 1) rejects by contract
    for q in &config.q_list {
        let mut points = config.points_for(q, false);
        points.push(QPoint::new(q.clone(), Rational::one()).expect("X = 1 is valid"));
        for p in points {
            for n in 1..=max_n {
                for k in 1..=n {
                    let left = ratio_identity(k, n, &p).expect("complement nonzero off x=1");
                    acc.check_eq(Params::grid(k, n, &p), &left, &q_basis(k, n, &p));
                }
            }
        }
        // boundary: the x = 1 point must raise the domain error
        let boundary = QPoint::new(q.clone(), q.clone()).expect("X = q is valid");
        let err = ratio_identity(1, 1, &boundary);
        acc.record(
            err == Err(Error::ZeroComplement),
            Params::grid(1, 1, &boundary),
            format!("{err:?}"),
            "Err(ZeroComplement)".to_string(),
        );
    }
    let note = "x = 1 (X = q) is excluded: [1-x]_q vanishes there and the ratio \
                form is undefined; the boundary check asserts the domain error"
        .to_string();
    acc.into_report(
        IdentityId::C5Ratio,
        sweep_params(max_n, config),
        Some(note),
        started,
    )
}

fn suite_t6(config: &VerifyConfig, started: Instant) -> IdentityReport {
    let mut acc = SuiteAcc::new();
    let max_n = config.max_n;
    for p in sweep_points(config, true) {
        for n in 0..=max_n {
            for k in 0..=n {
                acc.check_eq(
                    Params::grid(k, n, &p),
                    &monomial_expansion(k, n, &p),
                    &q_basis(k, n, &p),
                );
            }
        }
    }
    acc.into_report(
        IdentityId::T6Monomial,
        sweep_params(max_n, config),
        None,
        started,
    )
}

fn suite_t7(config: &VerifyConfig, started: Instant) -> IdentityReport {
    let mut acc = SuiteAcc::new();
    let max_n = config.max_n;
    for p in sweep_points(config, true) {
        let x_val = p.q_number();
        for n in 1..=max_n {
            for i in 1..=n {
                let left = moment_identity(i, n, &p).expect("i <= n");
                let params = Params::grid("-", n, &p).with_i(i);
                acc.check_eq(params, &left, &x_val.pow(i as i64));
            }
        }
    }
    let note = "weighted sum starts at k = i; the nominal k = i-1 term vanishes \
                because C(i-1, i) = 0"
        .to_string();
    acc.into_report(
        IdentityId::T7Moment,
        sweep_params(max_n, config),
        Some(note),
        started,
    )
}

fn suite_eq20(config: &VerifyConfig, started: Instant) -> IdentityReport {
    let mut acc = SuiteAcc::new();
    let max_l = config.reduced_n();
    for p in sweep_points(config, true) {
        for l in 0..=max_l {
            for k in 0..=l {
                acc.check_eq(
                    Params::grid(k, l, &p),
                    &qbern_via_bernoulli(k, l, &p),
                    &q_basis(k, l, &p),
                );
            }
        }
        // below-degree vanishing: l < k
        for k in 1..=max_l {
            for l in 0..k {
                acc.check_eq(
                    Params::grid(k, l, &p),
                    &qbern_via_bernoulli(k, l, &p),
                    &Rational::zero(),
                );
            }
        }
    }
    acc.into_report(
        IdentityId::Eq20Bernoulli,
        sweep_params(max_l, config),
        None,
        started,
    )
}

fn suite_eq2122(config: &VerifyConfig, started: Instant) -> IdentityReport {
    let mut acc = SuiteAcc::new();
    let max_n = config.reduced_n();
    for q in &config.q_list {
        for n in 0..=max_n {
            for k in 0..=n {
                let params = Params {
                    k: Some(k.to_string()),
                    n: Some(n.to_string()),
                    i: None,
                    point: Some(format!("q={q}")),
                };
                acc.check_eq(
                    params,
                    &q_stirling(n, k, q),
                    &q_stirling_series_oracle(n, k, q),
                );
            }
        }
    }
    // floating q -> 1 limit against the classical triangle
    let limit_n = config.float_n();
    let classical = stirling2_recurrence(limit_n);
    let q_near_one = 1.0 - 1e-4;
    for n in 0..=limit_n {
        for k in 0..=n {
            let params = Params {
                k: Some(k.to_string()),
                n: Some(n.to_string()),
                i: None,
                point: Some(format!("q={q_near_one}")),
            };
            acc.check_close(
                params,
                q_stirling_f64(n, k, q_near_one),
                classical.get(n, k).to_f64(),
                config.float_tol_limit,
            );
        }
    }
    let note = "q-difference coefficients carry q^C(j,2) per term, as forced by \
                the operator product of (E - q^i I) factors; a constant q^C(n,2) \
                variant is inconsistent with that product and is not used. The \
                q -> 1 comparison is relative: classical values reach the \
                thousands at n = 8"
        .to_string();
    acc.into_report(
        IdentityId::Eq2122QStirling,
        sweep_params(max_n, config),
        Some(note),
        started,
    )
}

fn suite_eq23(config: &VerifyConfig, started: Instant) -> IdentityReport {
    let mut acc = SuiteAcc::new();
    let max_i = config.reduced_n();
    for p in sweep_points(config, true) {
        let x_val = p.q_number();
        for i in 0..=max_i {
            let params = Params::grid("-", "-", &p).with_i(i);
            acc.check_eq(params, &q_power_expansion(i, &p), &x_val.pow(i as i64));
        }
    }
    acc.into_report(
        IdentityId::Eq23Power,
        sweep_params(max_i, config),
        None,
        started,
    )
}

fn suite_t8(config: &VerifyConfig, started: Instant) -> IdentityReport {
    let mut acc = SuiteAcc::new();
    let max_n = config.reduced_n();
    for p in sweep_points(config, true) {
        for n in 1..=max_n {
            for i in 1..=n {
                let (moment, power) = theorem8_check(i, n, &p).expect("i <= n");
                let params = Params::grid("-", n, &p).with_i(i);
                acc.check_eq(params, &moment, &power);
            }
        }
    }
    acc.into_report(
        IdentityId::T8Equality,
        sweep_params(max_n, config),
        None,
        started,
    )
}

fn suite_qlimit(config: &VerifyConfig, started: Instant) -> IdentityReport {
    let mut acc = SuiteAcc::new();
    let max_n = config.float_n();
    let q = 1.0 - 1e-4;
    for xi in 0..=10u32 {
        let x = xi as f64 / 10.0;
        let fp = FloatPoint::new(q, x).expect("x in [0,1]");
        for n in 0..=max_n {
            for k in 0..=n {
                let params = Params {
                    k: Some(k.to_string()),
                    n: Some(n.to_string()),
                    i: None,
                    point: Some(format!("q={q}, x={x}")),
                };
                acc.check_abs(
                    params,
                    q_basis_f64(k, n, &fp),
                    classical_basis_f64(k, n, x),
                    config.float_tol_limit,
                );
            }
        }
    }
    let params = Params {
        k: None,
        n: Some(format!("0..={max_n}")),
        i: None,
        point: Some(format!("q={q}, x in 0..=1 step 0.1")),
    };
    acc.into_report(IdentityId::QLimit, params, None, started)
}

/// Stirling agreement is part of the acceptance surface but has no grid
/// dependence; exposed for reuse by the CLI self-checks and tests.
pub fn stirling_triple_path_max(max_n: u32) -> bool {
    let table = stirling2_recurrence(max_n);
    let bells = bell_numbers(max_n.min(10));
    for n in 0..=max_n {
        for k in 0..=n {
            let r = table.get(n, k);
            if r != stirling2_difference(n, k) || r != stirling2_series_oracle(n, k) {
                return false;
            }
        }
    }
    for (n, bell) in bells.iter().enumerate() {
        let row: Rational = (0..=n as u32).map(|k| table.get(n as u32, k)).sum();
        if row != Rational::from_bigint(bell.clone()) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config() -> VerifyConfig {
        VerifyConfig {
            max_n: 5,
            x_grid_size: 3,
            q_list: vec![Rational::new(1, 3).unwrap(), Rational::new(1, 2).unwrap()],
            ..VerifyConfig::default()
        }
    }

    #[test]
    fn default_run_passes_on_small_grid() {
        let report = run_verify(&small_config(), None, FaultInjection::default()).unwrap();
        assert!(report.all_pass());
        assert_eq!(report.summary.fail, 0);
        assert_eq!(report.results.len(), IdentityId::ALL.len());
        assert!(report.summary.checks_run > 0);
    }

    #[test]
    fn fault_injection_fails_with_witness() {
        let only: BTreeSet<_> = [IdentityId::T3Sum].into_iter().collect();
        let faults = FaultInjection {
            flip_sum_sign: true,
        };
        let report = run_verify(&small_config(), Some(&only), faults).unwrap();
        assert!(!report.all_pass());
        let t3 = &report.results[0];
        assert_eq!(t3.status, Status::Fail);
        let witness = t3.witness.as_ref().expect("fail carries a witness");
        assert_ne!(witness.left, witness.right);
    }

    #[test]
    fn only_filter_selects_suites() {
        let only: BTreeSet<_> = [IdentityId::T3Sum, IdentityId::T8Equality]
            .into_iter()
            .collect();
        let report = run_verify(&small_config(), Some(&only), FaultInjection::default()).unwrap();
        assert_eq!(report.results.len(), 2);
        assert_eq!(report.results[0].identity_id, IdentityId::T3Sum);
        assert_eq!(report.results[1].identity_id, IdentityId::T8Equality);
    }

    #[test]
    fn parallel_matches_serial() {
        let mut config = small_config();
        let serial = run_verify(&config, None, FaultInjection::default()).unwrap();
        config.parallel = true;
        let parallel = run_verify(&config, None, FaultInjection::default()).unwrap();
        assert_eq!(serial.summary.checks_run, parallel.summary.checks_run);
        assert_eq!(serial.summary.fail, parallel.summary.fail);
        let ids: Vec<_> = parallel.results.iter().map(|r| r.identity_id).collect();
        let expected: Vec<_> = serial.results.iter().map(|r| r.identity_id).collect();
        assert_eq!(ids, expected);
    }

    #[test]
    fn identity_ids_round_trip() {
        for id in IdentityId::ALL {
            assert_eq!(id.as_str().parse::<IdentityId>().unwrap(), id);
        }
        assert!(matches!(
            "NOPE".parse::<IdentityId>(),
            Err(Error::UnknownIdentity(_))
        ));
    }

    #[test]
    fn overrides_parse() {
        let mut config = VerifyConfig::default();
        config
            .apply_overrides("max_n=6, x_grid_size=4, q_list=1/5;1/2, parallel=true")
            .unwrap();
        assert_eq!(config.max_n, 6);
        assert_eq!(config.x_grid_size, 4);
        assert_eq!(config.q_list.len(), 2);
        assert!(config.parallel);
        assert!(config.apply_overrides("max_n=0").is_err());
        assert!(VerifyConfig::default().apply_overrides("nope=1").is_err());
        assert!(VerifyConfig::default()
            .apply_overrides("q_list=5/3")
            .is_err());
    }

    #[test]
    fn json_overrides_parse() {
        let mut config = VerifyConfig::default();
        config
            .apply_json(r#"{"max_n": 7, "q_list": ["1/2"], "float_tol_limit": 0.01}"#)
            .unwrap();
        assert_eq!(config.max_n, 7);
        assert_eq!(config.q_list.len(), 1);
        assert!(config.apply_json(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn grid_has_endpoints_when_asked() {
        let config = VerifyConfig::default();
        let q = Rational::new(1, 2).unwrap();
        let interior = config.points_for(&q, false);
        assert_eq!(interior.len(), config.x_grid_size as usize);
        let full = config.points_for(&q, true);
        assert_eq!(full.len(), config.x_grid_size as usize + 2);
        assert_eq!(full.first().unwrap().x_pow(), &q);
        assert_eq!(full.last().unwrap().x_pow(), &Rational::one());
    }

    #[test]
    fn stirling_helper_agrees() {
        assert!(stirling_triple_path_max(10));
    }
}
