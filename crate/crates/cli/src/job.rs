//! Jobs: one request (from flags or from a batch line) and its execution.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use thomae_core::oracle::{prove_chain_with, QuadratureConfig, DEFAULT_CHAIN_TOLERANCE};
use thomae_core::sampling::{ParamSampler, EULER_X, SAALSCHUTZ_MAX_N};
use thomae_core::series::{sum_2f1, sum_3f2_unit, Params2F1, Params3F2, SeriesResult, Tolerance, DEFAULT_MAX_TERMS};
use thomae_core::transforms::{
    choose_representation, euler_second_map, gauss_sum, kummer_map, saalschutz_sum, thomae_map,
    Transformed3F2,
};
use thomae_core::verify::{
    verify_euler2, verify_gauss, verify_kummer, verify_saalschutz, verify_thomae, Identity,
    IdentityCheck,
};
use thomae_core::{Error, Rational};

use crate::record::{
    finite, CheckRecord, Diagnostics, ErrorRecord, ResultRecord, StageRecord, Status, TransformRecord,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Eval,
    Transform,
    Verify,
    Prove,
    ClosedForm,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Eval => "eval",
            CommandKind::Transform => "transform",
            CommandKind::Verify => "verify",
            CommandKind::Prove => "prove",
            CommandKind::ClosedForm => "closed-form",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// Per-job overrides of the global settings.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    pub rel: Option<f64>,
    pub abs: Option<f64>,
    pub max_terms: Option<u64>,
    pub tail_correction: Option<bool>,
    pub quad_error: Option<f64>,
    pub chain_tol: Option<f64>,
}

/// One request. `params` holds a, b, c, d, e for ₃F₂ or a, b, c for ₂F₁;
/// `name` selects the identity, transform or closed form where one is needed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: CommandKind,
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub params: Option<Vec<f64>>,
    #[serde(default)]
    pub x: Option<f64>,
    #[serde(default)]
    pub n: Option<u32>,
    #[serde(default)]
    pub a: Option<Rational>,
    #[serde(default)]
    pub b: Option<Rational>,
    #[serde(default)]
    pub c: Option<Rational>,
    #[serde(default)]
    pub random: Option<u32>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub auto_transform: Option<bool>,
    #[serde(default)]
    pub tolerance: Option<ToleranceOverrides>,
    #[serde(default)]
    pub format: Option<Format>,
}

impl JobSpec {
    pub fn new(command: CommandKind) -> Self {
        JobSpec {
            command,
            name: None,
            params: None,
            x: None,
            n: None,
            a: None,
            b: None,
            c: None,
            random: None,
            seed: None,
            auto_transform: None,
            tolerance: None,
            format: None,
        }
    }
}

/// Fully resolved numerical settings, echoed in every record.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    pub tol_rel: f64,
    pub tol_abs: f64,
    pub max_terms: u64,
    pub tail_correction: bool,
    pub quad_error: f64,
    pub quad_levels: u32,
    pub chain_tol: f64,
    pub seed: u64,
    pub auto_transform: bool,
}

impl Default for Settings {
    fn default() -> Self {
        let q = QuadratureConfig::default();
        Settings {
            tol_rel: 1e-12,
            tol_abs: 0.0,
            max_terms: DEFAULT_MAX_TERMS,
            tail_correction: true,
            quad_error: q.target_abs_error,
            quad_levels: q.max_levels,
            chain_tol: DEFAULT_CHAIN_TOLERANCE,
            seed: 0,
            auto_transform: false,
        }
    }
}

impl Settings {
    fn apply(mut self, job: &JobSpec) -> Self {
        if let Some(t) = job.tolerance {
            self.tol_rel = t.rel.unwrap_or(self.tol_rel);
            self.tol_abs = t.abs.unwrap_or(self.tol_abs);
            self.max_terms = t.max_terms.unwrap_or(self.max_terms);
            self.tail_correction = t.tail_correction.unwrap_or(self.tail_correction);
            self.quad_error = t.quad_error.unwrap_or(self.quad_error);
            self.chain_tol = t.chain_tol.unwrap_or(self.chain_tol);
        }
        self.seed = job.seed.unwrap_or(self.seed);
        self.auto_transform = job.auto_transform.unwrap_or(self.auto_transform);
        self
    }

    fn series(&self) -> Result<Tolerance, Error> {
        Ok(Tolerance::new(self.tol_rel, self.tol_abs, self.max_terms)?
            .with_tail_correction(self.tail_correction))
    }

    fn quadrature(&self) -> Result<QuadratureConfig, Error> {
        QuadratureConfig::new(self.quad_error, self.quad_levels)
    }
}

enum Failure {
    Core(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Step<T> = Result<T, Failure>;

fn usage<T>(msg: impl Into<String>) -> Step<T> {
    Err(Failure::Usage(msg.into()))
}

fn params3(job: &JobSpec) -> Step<Params3F2> {
    match job.params.as_deref().and_then(Params3F2::from_slice) {
        Some(p) => Ok(p),
        None => usage("expected five parameters a,b,c,d,e"),
    }
}

fn params2(job: &JobSpec) -> Step<Params2F1> {
    match job.params.as_deref() {
        Some(&[a, b, c]) => Ok(Params2F1::new(a, b, c)),
        _ => usage("expected three parameters a,b,c"),
    }
}

fn name<'a>(job: &'a JobSpec, what: &str) -> Step<&'a str> {
    match job.name.as_deref() {
        Some(n) => Ok(n),
        None => usage(format!("missing {what}")),
    }
}

fn rationals(job: &JobSpec) -> Step<(u32, Rational, Rational, Rational)> {
    match (job.n, &job.a, &job.b, &job.c) {
        (Some(n), Some(a), Some(b), Some(c)) => Ok((n, a.clone(), b.clone(), c.clone())),
        _ => usage("expected n, a, b and c"),
    }
}

fn series_diagnostics(s: &SeriesResult, excess: f64) -> Diagnostics {
    Diagnostics {
        terms_used: Some(s.terms_used),
        tail_bound: finite(s.tail_bound),
        tail_corrected: Some(s.tail_corrected),
        converged: Some(s.converged),
        terminated_exactly: Some(s.terminated_exactly),
        excess: finite(excess),
        quadrature_error: None,
    }
}

/// Runs a series evaluation; an exhausted term budget still reports its best estimate.
fn record_series(rec: &mut ResultRecord, r: Result<SeriesResult, Error>, scale: f64, excess: f64) -> Step<()> {
    match r {
        Ok(s) => {
            rec.value = finite(scale * s.value);
            rec.diagnostics = series_diagnostics(&s, excess);
            Ok(())
        }
        Err(Error::MaxTermsExceeded { best }) => {
            rec.value = finite(scale * best.value);
            rec.diagnostics = series_diagnostics(&best, excess);
            Err(Failure::Core(Error::MaxTermsExceeded { best }))
        }
        Err(e) => Err(e.into()),
    }
}

fn run_eval(job: &JobSpec, st: &Settings, rec: &mut ResultRecord) -> Step<()> {
    let tol = st.series()?;
    let params = job.params.as_deref().unwrap_or(&[]);
    if params.len() == 3 {
        let p = params2(job)?;
        let x = job.x.unwrap_or(1.0);
        rec.representation = Some("identity".into());
        return record_series(rec, sum_2f1(&p, x, &tol), 1.0, p.c - p.a - p.b);
    }
    let p = params3(job)?;
    let chosen = if st.auto_transform {
        choose_representation(&p)?
    } else {
        Transformed3F2::identity(&p)
    };
    rec.representation = Some(chosen.name.to_string());
    let prefactor = chosen.prefactor.eval_log()?.to_f64();
    if chosen.name != thomae_core::TransformKind::Identity {
        rec.transform = Some(transform_record(&chosen, Some(prefactor)));
    }
    record_series(rec, sum_3f2_unit(&chosen.params, &tol), prefactor, chosen.excess())
}

fn transform_record(t: &Transformed3F2, prefactor: Option<f64>) -> TransformRecord {
    TransformRecord {
        kind: t.name.to_string(),
        prefactor_numerator: t.prefactor.numerator_args.clone(),
        prefactor_denominator: t.prefactor.denominator_args.clone(),
        prefactor: prefactor.and_then(finite),
        power_exponent: None,
        params: t.params.upper().into_iter().chain(t.params.lower()).collect(),
        excess: finite(t.excess()),
    }
}

fn run_transform(job: &JobSpec, st: &Settings, rec: &mut ResultRecord) -> Step<()> {
    let kind = name(job, "transform name (thomae, kummer, euler2, auto)")?;
    if kind == "euler2" {
        let p = params2(job)?;
        let t = euler_second_map(&p)?;
        rec.transform = Some(TransformRecord {
            kind: kind.into(),
            prefactor_numerator: Vec::new(),
            prefactor_denominator: Vec::new(),
            prefactor: None,
            power_exponent: finite(t.power_exponent),
            params: vec![t.params.a, t.params.b, t.params.c],
            excess: finite(t.params.c - t.params.a - t.params.b),
        });
        return Ok(());
    }
    let p = params3(job)?;
    let t = match kind {
        "thomae" => thomae_map(&p)?,
        "kummer" => kummer_map(&p)?,
        "auto" => choose_representation(&p)?,
        other => return usage(format!("unknown transform {other:?}")),
    };
    let prefactor = t.prefactor.eval_log()?.to_f64();
    rec.representation = Some(t.name.to_string());
    rec.transform = Some(transform_record(&t, Some(prefactor)));
    record_series(rec, sum_3f2_unit(&t.params, &st.series()?), prefactor, t.excess())
}

fn check_from(c: &IdentityCheck, params: Vec<f64>, x: Option<f64>) -> CheckRecord {
    CheckRecord {
        identity: c.identity.to_string(),
        params,
        x,
        lhs: finite(c.lhs),
        rhs: finite(c.rhs),
        abs_discrepancy: finite(c.abs_discrepancy),
        rel_discrepancy: finite(c.rel_discrepancy),
        rel_tolerance: Some(c.rel_tolerance),
        pass: c.pass,
        ..CheckRecord::default()
    }
}

fn check_error(identity: Identity, params: Vec<f64>, x: Option<f64>, e: &Error) -> CheckRecord {
    CheckRecord {
        identity: identity.to_string(),
        params,
        x,
        pass: false,
        error: Some(e.to_string()),
        ..CheckRecord::default()
    }
}

fn float_check(identity: Identity, params: Vec<f64>, x: Option<f64>, tol: &Tolerance) -> CheckRecord {
    let rel = identity.default_rel_tol();
    let r = match identity {
        Identity::Thomae => verify_thomae(&Params3F2::from_slice(&params).unwrap(), tol, rel),
        Identity::Kummer => verify_kummer(&Params3F2::from_slice(&params).unwrap(), tol, rel),
        Identity::Gauss => verify_gauss(&Params2F1::new(params[0], params[1], params[2]), tol, rel),
        Identity::Euler2 => verify_euler2(
            &Params2F1::new(params[0], params[1], params[2]),
            x.unwrap_or(0.5),
            tol,
            rel,
        ),
        Identity::Saalschutz => unreachable!("exact identity"),
    };
    match r {
        Ok(c) => check_from(&c, params, x),
        Err(e) => check_error(identity, params, x, &e),
    }
}

fn exact_check(n: u32, a: &Rational, b: &Rational, c: &Rational) -> CheckRecord {
    let mut rec = CheckRecord {
        identity: "saalschutz".into(),
        exact_params: vec![a.to_string(), b.to_string(), c.to_string()],
        n: Some(n),
        ..CheckRecord::default()
    };
    match verify_saalschutz(n, a, b, c) {
        Ok(r) => {
            rec.lhs = finite(r.lhs.to_f64());
            rec.rhs = finite(r.rhs.to_f64());
            rec.lhs_exact = Some(r.lhs.to_string());
            rec.rhs_exact = Some(r.rhs.to_string());
            rec.abs_discrepancy = finite((&r.lhs - &r.rhs).to_f64().abs());
            rec.pass = r.pass;
        }
        Err(e) => rec.error = Some(e.to_string()),
    }
    rec
}

fn run_verify(job: &JobSpec, st: &Settings, rec: &mut ResultRecord) -> Step<()> {
    let identity: Identity = name(job, "identity name")?.parse()?;
    let tol = st.series()?;
    let xs: Vec<f64> = match job.x {
        Some(x) => vec![x],
        None => EULER_X.to_vec(),
    };
    if let Some(count) = job.random {
        let mut sampler = ParamSampler::new(st.seed);
        for _ in 0..count {
            match identity {
                Identity::Thomae => {
                    let p = sampler.thomae();
                    rec.checks.push(float_check(identity, flat3(&p), None, &tol));
                }
                Identity::Kummer => {
                    let p = sampler.kummer();
                    rec.checks.push(float_check(identity, flat3(&p), None, &tol));
                }
                Identity::Gauss => {
                    let p = sampler.gauss();
                    rec.checks.push(float_check(identity, vec![p.a, p.b, p.c], None, &tol));
                }
                Identity::Euler2 => {
                    let p = sampler.euler2();
                    for &x in &xs {
                        rec.checks.push(float_check(identity, vec![p.a, p.b, p.c], Some(x), &tol));
                    }
                }
                Identity::Saalschutz => {
                    let (a, b, c) = sampler.saalschutz();
                    let ns: Vec<u32> = match job.n {
                        Some(n) => vec![n],
                        None => (0..=SAALSCHUTZ_MAX_N).collect(),
                    };
                    for n in ns {
                        rec.checks.push(exact_check(n, &a, &b, &c));
                    }
                }
            }
        }
    } else {
        match identity {
            Identity::Thomae | Identity::Kummer => {
                let p = params3(job)?;
                let c = match identity {
                    Identity::Thomae => verify_thomae(&p, &tol, identity.default_rel_tol())?,
                    _ => verify_kummer(&p, &tol, identity.default_rel_tol())?,
                };
                rec.checks.push(check_from(&c, flat3(&p), None));
            }
            Identity::Gauss => {
                let p = params2(job)?;
                let c = verify_gauss(&p, &tol, identity.default_rel_tol())?;
                rec.checks.push(check_from(&c, vec![p.a, p.b, p.c], None));
            }
            Identity::Euler2 => {
                let p = params2(job)?;
                for &x in &xs {
                    let c = verify_euler2(&p, x, &tol, identity.default_rel_tol())?;
                    rec.checks.push(check_from(&c, vec![p.a, p.b, p.c], Some(x)));
                }
            }
            Identity::Saalschutz => {
                let (n, a, b, c) = rationals(job)?;
                verify_saalschutz(n, &a, &b, &c)?;
                rec.checks.push(exact_check(n, &a, &b, &c));
            }
        }
    }
    let failed = rec.checks.iter().filter(|c| !c.pass).count();
    rec.max_discrepancy = rec
        .checks
        .iter()
        .filter_map(|c| c.rel_discrepancy.or(c.abs_discrepancy))
        .reduce(f64::max);
    if rec.checks.len() == 1 {
        let c = &rec.checks[0];
        rec.value = c.lhs;
        rec.exact_value = c.lhs_exact.clone();
    }
    if failed > 0 {
        rec.status = Status::Fail;
    }
    Ok(())
}

fn flat3(p: &Params3F2) -> Vec<f64> {
    vec![p.a, p.b, p.c, p.d, p.e]
}

fn run_prove(job: &JobSpec, st: &Settings, rec: &mut ResultRecord) -> Step<()> {
    let p = params3(job)?;
    let report = prove_chain_with(&p, &st.quadrature()?, &st.series()?, st.chain_tol)?;
    rec.stage_values = report
        .stage_values
        .iter()
        .map(|s| StageRecord {
            label: s.label.clone(),
            value: finite(s.value),
            error_estimate: finite(s.error_estimate),
            accurate: s.accurate,
        })
        .collect();
    rec.value = finite(report.stage_values[0].value);
    rec.max_discrepancy = finite(report.max_pairwise_discrepancy);
    rec.diagnostics.quadrature_error = rec
        .stage_values
        .iter()
        .filter(|s| s.label.ends_with("integral") || s.label == "integral-form")
        .filter_map(|s| s.error_estimate)
        .reduce(f64::max);
    if !report.pass {
        rec.status = Status::Fail;
        rec.error = Some(ErrorRecord {
            kind: "chain-discrepancy".into(),
            message: if report.diagnostics.is_empty() {
                format!(
                    "max pairwise discrepancy {:e} exceeds {:e}",
                    report.max_pairwise_discrepancy, report.tolerance
                )
            } else {
                report.diagnostics.join("; ")
            },
            stage: None,
            input_error: false,
        });
    }
    Ok(())
}

fn run_closed_form(job: &JobSpec, rec: &mut ResultRecord) -> Step<()> {
    match name(job, "closed form name (gauss, saalschutz)")? {
        "gauss" => {
            let p = params2(job)?;
            rec.value = finite(gauss_sum(&p)?);
        }
        "saalschutz" => {
            let (n, a, b, c) = rationals(job)?;
            let v = saalschutz_sum(n, &a, &b, &c)?;
            rec.value = finite(v.to_f64());
            rec.exact_value = Some(v.to_string());
        }
        other => return usage(format!("unknown closed form {other:?}")),
    }
    Ok(())
}

/// Executes one job; never panics on bad input, every failure becomes a record.
pub fn run_job(job: &JobSpec, global: &Settings) -> ResultRecord {
    let start = Instant::now();
    let settings = global.apply(job);
    let mut rec = ResultRecord::new(job.command.name());
    rec.input = Some(job.clone());
    rec.settings = Some(settings);
    let outcome = match job.command {
        CommandKind::Eval => run_eval(job, &settings, &mut rec),
        CommandKind::Transform => run_transform(job, &settings, &mut rec),
        CommandKind::Verify => run_verify(job, &settings, &mut rec),
        CommandKind::Prove => run_prove(job, &settings, &mut rec),
        CommandKind::ClosedForm => run_closed_form(job, &mut rec),
    };
    match outcome {
        Ok(()) => {}
        Err(Failure::Core(e)) => rec.fail_with(ErrorRecord::from_core(&e)),
        Err(Failure::Usage(m)) => rec.fail_with(ErrorRecord::usage(m)),
    }
    rec.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    rec
}

/// A batch line that did not parse as a job.
pub fn malformed(line: &str, err: &serde_json::Error) -> ResultRecord {
    let mut rec = ResultRecord::new("invalid");
    let excerpt: String = line.chars().take(80).collect();
    rec.fail_with(ErrorRecord {
        kind: "malformed-job".into(),
        message: format!("{err} in {excerpt:?}"),
        stage: None,
        input_error: true,
    });
    rec
}
