//! Verification suites: seeded random trials for the numeric identities and
//! exact comparisons for the counting identities.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sixvertex::closedform::{
    a_refined, b_identity, bc_relations, double_gen_check, f_closed, fnew_ratio_spread, ode_residual_a, ode_residual_f,
    recursion_check, refined_row,
};
use sixvertex::ikdet::{basic_equation_residual, quasiperiod_residual, shifted_det_sum, transform_residual};
use sixvertex::model::{ETA_CUBE_ROOT, GENERIC_THRESHOLD};
use sixvertex::rootuni::{
    cyclic_residual, degree_residual, fourier_f, p_determinant, p_zero_residual, probe_points, ratio_spread,
    solve_null, third_coeff_check, union_symmetry_residual, UPartition,
};
use sixvertex::{Error, Result, SpectralConfig};

use crate::parallel::{par_stats, par_stats_with_ceiling};
use crate::report::{
    json_f64, json_f64s, json_int, json_str, Failure, MaxResidual, Params, Status, Tolerance, VerifyReport,
};

/// Redraws allowed per trial before a degenerate sample is reported as such.
const MAX_REDRAWS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum)]
pub enum Suite {
    Detsum,
    Basic,
    Cyclic,
    Thirds,
    Nullspace,
    Pdet,
    Union,
    Quasiperiod,
    Transform,
    Refined,
    Ode,
    Fclosed,
    Bcrel,
    Blast,
    Gen51,
    All,
}

impl Suite {
    pub const EACH: [Suite; 15] = [
        Suite::Detsum,
        Suite::Basic,
        Suite::Cyclic,
        Suite::Thirds,
        Suite::Nullspace,
        Suite::Pdet,
        Suite::Union,
        Suite::Quasiperiod,
        Suite::Transform,
        Suite::Refined,
        Suite::Ode,
        Suite::Fclosed,
        Suite::Bcrel,
        Suite::Blast,
        Suite::Gen51,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Detsum => "detsum",
            Suite::Basic => "basic",
            Suite::Cyclic => "cyclic",
            Suite::Thirds => "thirds",
            Suite::Nullspace => "nullspace",
            Suite::Pdet => "pdet",
            Suite::Union => "union",
            Suite::Quasiperiod => "quasiperiod",
            Suite::Transform => "transform",
            Suite::Refined => "refined",
            Suite::Ode => "ode",
            Suite::Fclosed => "fclosed",
            Suite::Bcrel => "bcrel",
            Suite::Blast => "blast",
            Suite::Gen51 => "gen51",
            Suite::All => "all",
        }
    }

    /// Checked entirely in integer/rational arithmetic.
    pub fn is_exact(self) -> bool {
        matches!(self, Suite::Refined | Suite::Bcrel | Suite::Blast | Suite::Gen51)
    }

    /// Suites that draw random spectral parameters.
    fn uses_config(self) -> bool {
        !self.is_exact() && !matches!(self, Suite::Ode | Suite::Fclosed | Suite::All)
    }

    pub fn default_tolerance(self, n: usize) -> Tolerance {
        match self {
            s if s.is_exact() => Tolerance::Exact,
            Suite::Nullspace | Suite::Pdet => Tolerance::Relative(1e-8),
            Suite::Ode | Suite::Fclosed => Tolerance::Relative(1e-10),
            _ if n <= 4 => Tolerance::Relative(1e-9),
            _ => Tolerance::Relative(1e-6),
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub suite: Suite,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    /// Overrides the suite's default tolerance for numeric suites.
    pub tol: Option<f64>,
    /// Overrides the suite's default `η` (`2π/order` for detsum/basic, `2π/3` otherwise).
    pub eta: Option<f64>,
    /// Root-of-unity order for detsum/basic.
    pub order: u32,
    pub ceiling: usize,
}

impl VerifyOptions {
    pub fn new(suite: Suite, n: usize) -> Self {
        Self {
            suite,
            n,
            trials: 20,
            seed: 0,
            tol: None,
            eta: None,
            order: 3,
            ceiling: sixvertex::enumerate::DEFAULT_CEILING,
        }
    }

    fn eta(&self) -> f64 {
        self.eta.unwrap_or(match self.suite {
            Suite::Detsum | Suite::Basic => 2.0 * PI / self.order as f64,
            _ => ETA_CUBE_ROOT,
        })
    }

    fn tolerance(&self) -> Tolerance {
        match (self.suite.default_tolerance(self.n), self.tol) {
            (Tolerance::Relative(_), Some(t)) => Tolerance::Relative(t),
            (default, _) => default,
        }
    }
}

pub fn is_degenerate(e: &Error) -> bool {
    matches!(
        e,
        Error::DegenerateParameters(_)
            | Error::DegenerateEta(_)
            | Error::NearSingular(_)
            | Error::RankDeficient { .. }
            | Error::IllConditioned(_)
    )
}

/// `n` parameters per family, uniform on `(0, π/2)`, redrawn until generic.
pub fn sample_config(rng: &mut ChaCha8Rng, n: usize, eta: f64) -> Result<SpectralConfig> {
    loop {
        let xs: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..FRAC_PI_2)).collect();
        let ys: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..FRAC_PI_2)).collect();
        let cfg = SpectralConfig::new(eta, xs, ys)?;
        if cfg.is_generic(GENERIC_THRESHOLD) {
            return Ok(cfg);
        }
    }
}

/// Runs `check` on `trials` random generic configurations, redrawing any that
/// trip a degeneracy guard.
pub fn config_trials(
    n: usize,
    eta: f64,
    trials: usize,
    seed: u64,
    mut check: impl FnMut(&SpectralConfig) -> Result<f64>,
) -> Result<Vec<(SpectralConfig, f64)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(trials);
    for _ in 0..trials {
        let mut last = None;
        for _ in 0..MAX_REDRAWS {
            let cfg = sample_config(&mut rng, n, eta)?;
            match check(&cfg) {
                Ok(r) => {
                    out.push((cfg, r));
                    last = None;
                    break;
                }
                Err(e) if is_degenerate(&e) => last = Some(e),
                Err(e) => return Err(e),
            }
        }
        if let Some(e) = last {
            return Err(e);
        }
    }
    Ok(out)
}

fn within(residual: f64, tol: f64) -> bool {
    residual <= tol
}

struct Collector {
    tol: f64,
    max: f64,
    failures: Vec<Failure>,
}

impl Collector {
    fn new(tol: f64) -> Self {
        Self {
            tol,
            max: 0.0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, inputs: BTreeMap<String, Box<serde_json::value::RawValue>>, residual: f64) {
        // NaN compares false and is kept as the maximum
        if !(residual <= self.max) {
            self.max = residual;
        }
        if !within(residual, self.tol) {
            self.failures.push(Failure {
                inputs,
                observed: json_f64(residual),
                expected: json_f64(self.tol),
            });
        }
    }
}

fn config_inputs(cfg: &SpectralConfig) -> BTreeMap<String, Box<serde_json::value::RawValue>> {
    BTreeMap::from([
        ("eta".to_string(), json_f64(cfg.eta())),
        ("xs".to_string(), json_f64s(cfg.xs())),
        ("ys".to_string(), json_f64s(cfg.ys())),
    ])
}

fn exact_failure(e: &Error) -> Option<Failure> {
    match e {
        Error::TableMismatch { r, rt, detail } => Some(Failure {
            inputs: BTreeMap::from([("r".to_string(), json_int(r)), ("rt".to_string(), json_int(rt))]),
            observed: json_str(detail),
            expected: json_str("equality"),
        }),
        Error::NonIntegerQuotient { r, rt } => Some(Failure {
            inputs: BTreeMap::from([("r".to_string(), json_int(r)), ("rt".to_string(), json_int(rt))]),
            observed: json_str("non-integer quotient"),
            expected: json_str("integer"),
        }),
        _ => None,
    }
}

/// Allowed-frequency polynomial vs `f` and vanishing at the `u_j`.
fn nullspace_residual(cfg: &SpectralConfig) -> Result<f64> {
    let part = UPartition::from_config(cfg);
    let f = fourier_f(cfg)?;
    let null = solve_null(&part.us)?;
    let scale = null.max_coeff();
    let vanish = part.us.iter().map(|&u| null.eval(u).norm()).fold(0.0, f64::max) / scale;
    let points: Vec<f64> = probe_points(20).collect();
    let (_, spread) = ratio_spread(&points, |u| Ok(null.eval(u)), |u| Ok(f.eval(u)))?;
    Ok(vanish.max(spread))
}

/// `P` vanishing at the `u_j`, and proportional to both the nullspace solution and `f`.
fn pdet_residual(cfg: &SpectralConfig) -> Result<f64> {
    let part = UPartition::from_config(cfg);
    let f = fourier_f(cfg)?;
    let null = solve_null(&part.us)?;
    let points: Vec<f64> = probe_points(20).collect();
    let zeros = p_zero_residual(&part.us)?;
    let (_, vs_null) = ratio_spread(&points, |u| p_determinant(u, &part.us), |u| Ok(null.eval(u)))?;
    let (_, vs_f) = ratio_spread(&points, |u| p_determinant(u, &part.us), |u| Ok(f.eval(u)))?;
    Ok(zeros.max(vs_null).max(vs_f))
}

fn numeric_check(suite: Suite, order: u32) -> impl Fn(&SpectralConfig) -> Result<f64> {
    move |cfg| match suite {
        Suite::Detsum => Ok(shifted_det_sum(cfg, order)?.relative()),
        Suite::Basic => Ok(basic_equation_residual(cfg, order)?.relative()),
        Suite::Cyclic => Ok(cyclic_residual(&fourier_f(cfg)?)),
        Suite::Thirds => third_coeff_check(&fourier_f(cfg)?, cfg.n()),
        Suite::Nullspace => nullspace_residual(cfg),
        Suite::Pdet => pdet_residual(cfg),
        Suite::Union => union_symmetry_residual(cfg),
        Suite::Quasiperiod => Ok(quasiperiod_residual(cfg)?.max(degree_residual(cfg)?)),
        Suite::Transform => transform_residual(cfg),
        _ => unreachable!("not a configuration suite"),
    }
}

fn finish(
    opts: &VerifyOptions,
    trials: usize,
    eta: Option<f64>,
    max: MaxResidual,
    failures: Vec<Failure>,
    details: BTreeMap<String, Box<serde_json::value::RawValue>>,
) -> VerifyReport {
    let tol = opts.tolerance();
    let within_tol = match (max, tol) {
        (MaxResidual::Numeric(m), Tolerance::Relative(t)) => within(m, t),
        _ => true,
    };
    VerifyReport {
        suite: opts.suite.name().to_string(),
        n: opts.n,
        params: Params {
            trials,
            seed: opts.seed,
            eta: eta.map(json_f64),
            order: matches!(opts.suite, Suite::Detsum | Suite::Basic).then_some(opts.order),
            tol,
        },
        status: if failures.is_empty() && within_tol {
            Status::Pass
        } else {
            Status::Fail
        },
        max_residual: max,
        failures,
        details,
        suites: Vec::new(),
    }
}

fn relative_tol(opts: &VerifyOptions) -> f64 {
    match opts.tolerance() {
        Tolerance::Relative(t) => t,
        Tolerance::Exact => 0.0,
    }
}

fn run_config_suite(opts: &VerifyOptions) -> Result<VerifyReport> {
    let eta = opts.eta();
    let mut c = Collector::new(relative_tol(opts));
    let results = config_trials(
        opts.n,
        eta,
        opts.trials,
        opts.seed,
        numeric_check(opts.suite, opts.order),
    )?;
    for (cfg, r) in &results {
        c.record(config_inputs(cfg), *r);
    }
    Ok(finish(
        opts,
        results.len(),
        Some(eta),
        MaxResidual::Numeric(c.max),
        c.failures,
        BTreeMap::new(),
    ))
}

/// Exact refined-ODE and ratio-recursion checks plus the `f` ODE at random `u`.
fn run_ode(opts: &VerifyOptions) -> Result<VerifyReport> {
    let n = opts.n;
    let mut c = Collector::new(relative_tol(opts));
    if !ode_residual_a(n)?.is_zero() {
        c.failures.push(Failure {
            inputs: BTreeMap::from([("n".to_string(), json_int(n))]),
            observed: json_str("nonzero polynomial"),
            expected: json_str("zero polynomial"),
        });
    }
    for r in 1..n {
        if !recursion_check(n, r)? {
            c.failures.push(Failure {
                inputs: BTreeMap::from([("r".to_string(), json_int(r))]),
                observed: json_str("unequal"),
                expected: json_str("equality"),
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut done = 0;
    while done < opts.trials {
        let u = rng.gen_range(0.0..FRAC_PI_2);
        match ode_residual_f(n, u) {
            Ok(r) => {
                c.record(BTreeMap::from([("u".to_string(), json_f64(u))]), r);
                done += 1;
            }
            Err(Error::NearSingular(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(finish(
        opts,
        done,
        None,
        MaxResidual::Numeric(c.max),
        c.failures,
        BTreeMap::new(),
    ))
}

/// Closed-form `f` against the product form, plus its exact vanishing derivatives.
fn run_fclosed(opts: &VerifyOptions) -> Result<VerifyReport> {
    let n = opts.n;
    let mut c = Collector::new(relative_tol(opts));
    let f = f_closed(n)?;
    let lowest = f.lowest_nonvanishing_derivative();
    if lowest < 2 * n as u32 - 1 {
        c.failures.push(Failure {
            inputs: BTreeMap::from([("derivative".to_string(), json_int(lowest))]),
            observed: json_str(&f.derivative_at_zero(lowest).to_string()),
            expected: json_str("0"),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let points: Vec<f64> = (0..opts.trials.max(2)).map(|_| rng.gen_range(0.0..FRAC_PI_2)).collect();
    let (mean, spread) = fnew_ratio_spread(&refined_row(n)?, &points)?;
    c.record(BTreeMap::from([("points".to_string(), json_f64s(&points))]), spread);
    let cyclic = cyclic_residual(&f.to_trig_poly());
    c.record(BTreeMap::from([("check".to_string(), json_str("cyclic"))]), cyclic);
    let details = BTreeMap::from([("ratio".to_string(), json_f64(mean))]);
    Ok(finish(
        opts,
        points.len(),
        None,
        MaxResidual::Numeric(c.max),
        c.failures,
        details,
    ))
}

fn exact_outcome(
    opts: &VerifyOptions,
    outcome: Result<BTreeMap<String, Box<serde_json::value::RawValue>>>,
) -> Result<VerifyReport> {
    match outcome {
        Ok(details) => Ok(finish(opts, 0, None, MaxResidual::Exact, Vec::new(), details)),
        Err(e) => match exact_failure(&e) {
            Some(f) => Ok(finish(opts, 0, None, MaxResidual::Exact, vec![f], BTreeMap::new())),
            None => Err(e),
        },
    }
}

fn run_refined(opts: &VerifyOptions) -> Result<VerifyReport> {
    let stats = par_stats_with_ceiling(opts.n, opts.ceiling)?;
    let table = stats.refined_top();
    let mut failures = Vec::new();
    for r in 1..=opts.n {
        let (got, want) = (table.at(r), a_refined(opts.n, r)?);
        if got != want {
            failures.push(Failure {
                inputs: BTreeMap::from([("r".to_string(), json_int(r))]),
                observed: json_int(got),
                expected: json_int(want),
            });
        }
    }
    Ok(finish(opts, 0, None, MaxResidual::Exact, failures, BTreeMap::new()))
}

fn run_exact(opts: &VerifyOptions) -> Result<VerifyReport> {
    let n = opts.n;
    let stats = par_stats_with_ceiling(n, opts.ceiling)?;
    let outcome = match opts.suite {
        Suite::Bcrel => {
            let prev = if n >= 2 {
                par_stats(n - 1)?.refined_top()
            } else {
                return Err(Error::OutOfRange("bcrel needs n >= 2".into()));
            };
            bc_relations(&stats, &prev).map(|r| BTreeMap::from([("checks".to_string(), json_int(r.checks))]))
        }
        Suite::Blast => {
            b_identity(&stats.double_top_bottom()).map(|r| BTreeMap::from([("checks".to_string(), json_int(r.checks))]))
        }
        Suite::Gen51 => double_gen_check(&stats.double_top_bottom()).map(|r| {
            BTreeMap::from([
                ("checks".to_string(), json_int(r.checks)),
                ("constant".to_string(), json_str(&r.constant.to_string())),
            ])
        }),
        _ => unreachable!("not an exact suite"),
    };
    exact_outcome(opts, outcome)
}

fn run_all(opts: &VerifyOptions) -> Result<VerifyReport> {
    let mut reports = Vec::with_capacity(Suite::EACH.len());
    for suite in Suite::EACH {
        if suite == Suite::Bcrel && opts.n < 2 {
            continue;
        }
        let sub = VerifyOptions { suite, ..opts.clone() };
        reports.push(run_verify(&sub)?);
    }
    let max = reports
        .iter()
        .filter_map(|r| match r.max_residual {
            MaxResidual::Numeric(x) => Some(x),
            MaxResidual::Exact => None,
        })
        .fold(0.0, |a: f64, b| if b > a || b.is_nan() { b } else { a });
    let status = if reports.iter().all(VerifyReport::passed) {
        Status::Pass
    } else {
        Status::Fail
    };
    Ok(VerifyReport {
        suite: "all".to_string(),
        n: opts.n,
        params: Params {
            trials: opts.trials,
            seed: opts.seed,
            eta: opts.eta.map(json_f64),
            order: Some(opts.order),
            tol: opts.tol.map_or(Tolerance::Exact, Tolerance::Relative),
        },
        status,
        max_residual: MaxResidual::Numeric(max),
        failures: Vec::new(),
        details: BTreeMap::new(),
        suites: reports,
    })
}

pub fn run_verify(opts: &VerifyOptions) -> Result<VerifyReport> {
    if opts.n == 0 {
        return Err(Error::OutOfRange("n must be at least 1".into()));
    }
    match opts.suite {
        s if s.uses_config() => run_config_suite(opts),
        Suite::Ode => run_ode(opts),
        Suite::Fclosed => run_fclosed(opts),
        Suite::Refined => run_refined(opts),
        Suite::Bcrel | Suite::Blast | Suite::Gen51 => run_exact(opts),
        Suite::All => run_all(opts),
        _ => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(suite: Suite, n: usize) -> VerifyReport {
        let mut o = VerifyOptions::new(suite, n);
        o.trials = 4;
        run_verify(&o).unwrap()
    }

    #[test]
    fn numeric_suites_pass_small_n() {
        for suite in [
            Suite::Detsum,
            Suite::Basic,
            Suite::Cyclic,
            Suite::Thirds,
            Suite::Nullspace,
            Suite::Pdet,
            Suite::Union,
            Suite::Quasiperiod,
            Suite::Transform,
            Suite::Ode,
            Suite::Fclosed,
        ] {
            let r = run(suite, 2);
            assert!(r.passed(), "{}: {}", suite.name(), r.to_json());
        }
    }

    #[test]
    fn exact_suites_pass() {
        for suite in [Suite::Refined, Suite::Bcrel, Suite::Blast, Suite::Gen51] {
            let r = run(suite, 4);
            assert!(r.passed(), "{}", r.to_json());
            assert_eq!(r.max_residual, MaxResidual::Exact);
        }
    }

    #[test]
    fn union_control_fails_off_root() {
        let mut o = VerifyOptions::new(Suite::Union, 2);
        o.eta = Some(0.9);
        let r = run_verify(&o).unwrap();
        assert!(!r.passed());
        assert_eq!(r.failures.len(), o.trials);
    }

    #[test]
    fn reports_are_reproducible() {
        let a = run(Suite::Union, 3).to_json();
        let b = run(Suite::Union, 3).to_json();
        assert_eq!(a, b);
        let mut o = VerifyOptions::new(Suite::Union, 3);
        o.trials = 4;
        o.seed = 99;
        assert_ne!(run_verify(&o).unwrap().to_json(), a);
    }

    #[test]
    fn sampler_stays_in_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let cfg = sample_config(&mut rng, 3, 1.0).unwrap();
            assert!(cfg.xs().iter().chain(cfg.ys()).all(|&p| (0.0..FRAC_PI_2).contains(&p)));
            assert!(cfg.is_generic(GENERIC_THRESHOLD));
        }
    }
}
