//! Stage-by-stage numerical certification of the derivation of Thomae's
//! relation from the Euler integral, each stage computed on its own path.
//!
//! | stage                       | computed as                                                    |
//! |-----------------------------|----------------------------------------------------------------|
//! | lhs-series                  | ₃F₂(a, b, c; d, e; 1) summed directly                          |
//! | integral-form               | quadrature, kernel ₂F₁(a, b; d; x), weight x^(c−1)(1−x)^(e−c−1) |
//! | euler-transformed-integral  | quadrature, kernel ₂F₁(d−a, d−b; d; x), weight (1−x)^(s−1)      |
//! | termwise-sum                | Σₙ wₙ B(c+n, s) with B advanced by its own recurrence          |
//! | kummer-form-series          | Kummer prefactor × mapped series                               |
//! | second-integral             | quadrature, kernel ₂F₁(d−b, c; d+e−a−b; x), weight x^(d−a−1)(1−x)^(a−1) |
//! | euler-again-integral        | quadrature, kernel ₂F₁(e−a, s; d+e−a−b; x), weight x^(d−a−1)(1−x)^(e−c−1) |
//! | thomae-form-series          | Thomae prefactor × mapped series                               |
//!
//! The intermediate reordering of upper and lower parameters is a permutation
//! and is checked symbolically instead of numerically.

use serde::{Deserialize, Serialize};

use super::{check_integral_preconditions, normalized_integral, QuadratureConfig};
use crate::arith::{beta_closed_form, is_nonpositive_integer, GammaRatio};
use crate::error::{Error, Result};
use crate::series::{monotone_index, Params2F1, Params3F2, RatioSeries, SeriesResult, Tolerance};
use crate::transforms::{kummer_map, thomae_map};

pub const DEFAULT_CHAIN_TOLERANCE: f64 = 1e-8;

pub const STAGE_LABELS: [&str; 8] = [
    "lhs-series",
    "integral-form",
    "euler-transformed-integral",
    "termwise-sum",
    "kummer-form-series",
    "second-integral",
    "euler-again-integral",
    "thomae-form-series",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageValue {
    pub label: String,
    pub value: f64,
    pub error_estimate: f64,
    /// False when the stage returned only a best estimate.
    pub accurate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProofChainReport {
    pub params: Params3F2,
    pub stage_values: Vec<StageValue>,
    pub max_pairwise_discrepancy: f64,
    /// |lhs-series − thomae-form-series|: the end-to-end claim.
    pub endpoint_discrepancy: f64,
    pub tolerance: f64,
    /// The reordered Kummer parameters describe the same series.
    pub reordering_is_permutation: bool,
    pub diagnostics: Vec<String>,
    pub pass: bool,
}

/// Series tolerance for a stage whose series is multiplied by `prefactor`,
/// giving the product an absolute budget of `chain_tolerance / 8`.
pub fn stage_series_tolerance(tol: &Tolerance, chain_tolerance: f64, prefactor: f64) -> Tolerance {
    Tolerance {
        abs: chain_tolerance / 8.0 / prefactor.abs(),
        ..*tol
    }
}

fn stage_quadrature(cfg: &QuadratureConfig, chain_tolerance: f64) -> QuadratureConfig {
    cfg.with_target(cfg.target_abs_error.min(chain_tolerance / 8.0))
}

/// Value, error estimate and whether it met its target; accuracy failures are
/// downgraded to a flagged estimate, everything else propagates.
type StageOutcome = (f64, f64, bool);

fn from_series(prefactor: f64, r: Result<SeriesResult>) -> Result<StageOutcome> {
    match r {
        Ok(s) => Ok((prefactor * s.value, prefactor.abs() * s.tail_bound, s.converged)),
        Err(Error::MaxTermsExceeded { best }) => {
            Ok((prefactor * best.value, prefactor.abs() * best.tail_bound, false))
        }
        Err(e) => Err(e),
    }
}

fn from_integral(r: Result<super::IntegralResult>) -> Result<StageOutcome> {
    match r {
        Ok(q) => Ok((q.value, q.error_estimate, true)),
        Err(Error::AccuracyNotReached {
            estimate,
            achieved_error,
        }) => Ok((estimate, achieved_error, false)),
        Err(e) => Err(e),
    }
}

/// Γ(e)/(Γ(c)Γ(e−c)) Σₙ (d−a)ₙ(d−b)ₙ/((d)ₙ n!) B(c+n, s), after swapping sum
/// and integral in the Euler-transformed form.
fn termwise_sum(p: &Params3F2, tol: &Tolerance, chain_tolerance: f64) -> Result<StageOutcome> {
    let Params3F2 { a, b, c, d, e } = *p;
    let s = p.excess();
    if is_nonpositive_integer(d) {
        return Err(Error::LowerPole {
            param: d,
            index: (-d) as u64 + 1,
        });
    }
    let norm = GammaRatio::new(vec![e], vec![c, e - c]).eval_log()?.to_f64();
    let first = norm * beta_closed_form(c, s)?;
    let (u1, u2) = (d - a, d - b);
    let series = RatioSeries {
        first,
        ratio: |n: f64| {
            let weight = (u1 + n) * (u2 + n) / ((d + n) * (n + 1.0));
            // B(c+n+1, s) / B(c+n, s)
            let beta = (c + n) / (c + n + s);
            weight * beta
        },
        rate: 1.0,
        excess: Some(e - c),
        monotone_from: monotone_index(&[u1, u2, c], &[d, c + s], 1.0),
    };
    let stage_tol = Tolerance {
        abs: chain_tolerance / 8.0,
        ..*tol
    };
    from_series(1.0, series.sum(&stage_tol))
}

fn check_chain_preconditions(p: &Params3F2) -> Result<()> {
    check_integral_preconditions(p).map_err(|e| e.at_stage("integral-form"))?;
    let second = |cond: bool, what: &str| {
        if cond {
            Ok(())
        } else {
            Err(Error::precondition(what).at_stage("second-integral"))
        }
    };
    second(p.d - p.a > 0.0, "d - a > 0")?;
    second(p.a > 0.0, "a > 0")
}

pub fn prove_chain(p: &Params3F2, cfg: &QuadratureConfig, tol: &Tolerance) -> Result<ProofChainReport> {
    prove_chain_with(p, cfg, tol, DEFAULT_CHAIN_TOLERANCE)
}

pub fn prove_chain_with(
    p: &Params3F2,
    cfg: &QuadratureConfig,
    tol: &Tolerance,
    chain_tolerance: f64,
) -> Result<ProofChainReport> {
    tol.validate()?;
    cfg.validate()?;
    if !(chain_tolerance > 0.0) {
        return Err(Error::InvalidTolerance(format!(
            "chain tolerance = {chain_tolerance} (must be > 0)"
        )));
    }
    check_chain_preconditions(p)?;
    let Params3F2 { a, b, c, d, e } = *p;
    let s = p.excess();
    let deab = d + e - a - b;
    let quad = stage_quadrature(cfg, chain_tolerance);
    let euler_norm = GammaRatio::new(vec![e], vec![c, e - c]);
    let kummer = kummer_map(p)?;
    let thomae = thomae_map(p)?;
    let kummer_pre = kummer.prefactor.eval_log()?.to_f64();
    let thomae_pre = thomae.prefactor.eval_log()?.to_f64();
    let mut second_pre = kummer.prefactor.clone();
    second_pre.numerator_args.push(d);
    second_pre.denominator_args.extend([d - a, a]);

    let outcomes: [Result<StageOutcome>; 8] = [
        from_series(
            1.0,
            crate::series::sum_3f2_unit(p, &stage_series_tolerance(tol, chain_tolerance, 1.0)),
        ),
        from_integral(normalized_integral(&euler_norm, c, e - c, Params2F1::new(a, b, d), &quad)),
        from_integral(normalized_integral(&euler_norm, c, s, Params2F1::new(d - a, d - b, d), &quad)),
        termwise_sum(p, tol, chain_tolerance),
        from_series(
            kummer_pre,
            crate::series::sum_3f2_unit(
                &kummer.params,
                &stage_series_tolerance(tol, chain_tolerance, kummer_pre),
            ),
        ),
        from_integral(normalized_integral(&second_pre, d - a, a, Params2F1::new(d - b, c, deab), &quad)),
        from_integral(normalized_integral(&second_pre, d - a, e - c, Params2F1::new(e - a, s, deab), &quad)),
        thomae
            .evaluate(&stage_series_tolerance(tol, chain_tolerance, thomae_pre))
            .map(|v| (v.value, thomae_pre.abs() * v.series.tail_bound, v.series.converged))
            .or_else(|e| match e {
                Error::MaxTermsExceeded { best } => {
                    Ok((thomae_pre * best.value, thomae_pre.abs() * best.tail_bound, false))
                }
                e => Err(e),
            }),
    ];

    let mut stage_values = Vec::with_capacity(8);
    let mut diagnostics = Vec::new();
    for (label, outcome) in STAGE_LABELS.iter().zip(outcomes) {
        let (value, error_estimate, accurate) = outcome?;
        if !accurate {
            diagnostics.push(format!(
                "{label}: target not reached (error estimate {error_estimate:e})"
            ));
        }
        stage_values.push(StageValue {
            label: label.to_string(),
            value,
            error_estimate,
            accurate,
        });
    }

    let mut max_pairwise_discrepancy: f64 = 0.0;
    for (i, x) in stage_values.iter().enumerate() {
        for y in &stage_values[i + 1..] {
            max_pairwise_discrepancy = max_pairwise_discrepancy.max((x.value - y.value).abs());
        }
    }
    let endpoint_discrepancy = (stage_values[0].value - stage_values[7].value).abs();
    if max_pairwise_discrepancy.is_nan() {
        max_pairwise_discrepancy = f64::INFINITY;
    }

    let reordered = Params3F2::new(d - b, c, d - a, deab, d);
    let reordering_is_permutation = reordered.same_series_as(&kummer.params);
    if !reordering_is_permutation {
        diagnostics.push("reordered Kummer parameters are not a permutation".into());
    }

    let pass = max_pairwise_discrepancy <= chain_tolerance && diagnostics.is_empty();
    Ok(ProofChainReport {
        params: *p,
        stage_values,
        max_pairwise_discrepancy,
        endpoint_discrepancy,
        tolerance: chain_tolerance,
        reordering_is_permutation,
        diagnostics,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn chain_tol() -> Tolerance {
        Tolerance::default().with_tail_correction(true)
    }

    #[test]
    fn reference_point_passes() {
        let p = Params3F2::new(0.5, 0.6, 0.7, 2.0, 2.5);
        let r = prove_chain(&p, &QuadratureConfig::default(), &chain_tol()).unwrap();
        assert_eq!(r.stage_values.len(), 8);
        for (sv, label) in r.stage_values.iter().zip(STAGE_LABELS) {
            assert_eq!(sv.label, label);
            assert!((sv.value - 1.055_459_896_076_114_880).abs() < 1e-8, "{sv:?}");
        }
        assert!(r.pass, "{r:?}");
        assert!(r.reordering_is_permutation);
    }

    #[test]
    fn zeta_two_chain() {
        let p = Params3F2::new(1.0, 1.0, 1.0, 2.0, 2.0);
        let r = prove_chain(&p, &QuadratureConfig::default(), &chain_tol()).unwrap();
        for sv in &r.stage_values {
            assert!((sv.value - PI * PI / 6.0).abs() < 1e-6, "{sv:?}");
        }
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn precondition_names_stage() {
        let p = Params3F2::new(2.0, 0.3, 0.4, 1.5, 2.2);
        let err = prove_chain(&p, &QuadratureConfig::default(), &chain_tol()).unwrap_err();
        assert_eq!(
            err,
            Error::Precondition {
                condition: "d - a > 0".into(),
                stage: Some("second-integral".into())
            }
        );
        let p = Params3F2::new(0.5, 0.3, -0.4, 1.5, 2.2);
        let err = prove_chain(&p, &QuadratureConfig::default(), &chain_tol()).unwrap_err();
        assert!(matches!(err, Error::Precondition { stage: Some(s), .. } if s == "integral-form"));
    }

    #[test]
    fn thomae_stage_is_the_transform_path() {
        let p = Params3F2::new(0.9, 0.4, 1.1, 2.3, 1.7);
        let tol = chain_tol();
        let r = prove_chain(&p, &QuadratureConfig::default(), &tol).unwrap();
        let t = thomae_map(&p).unwrap();
        let pre = crate::arith::gamma_ratio_eval(&t.prefactor).unwrap();
        let series = crate::series::sum_3f2_unit(
            &t.params,
            &stage_series_tolerance(&tol, DEFAULT_CHAIN_TOLERANCE, pre),
        )
        .unwrap();
        assert_eq!(r.stage_values[7].value, pre * series.value);
    }

    #[test]
    fn unreached_stage_fails_the_report() {
        // plain summation at excess 0.5 cannot reach the stage budget
        let p = Params3F2::new(0.5, 0.6, 0.7, 1.0, 1.3);
        let tol = Tolerance {
            max_terms: 1000,
            ..Tolerance::default()
        };
        let r = prove_chain(&p, &QuadratureConfig::default(), &tol).unwrap();
        assert!(!r.pass);
        assert!(!r.diagnostics.is_empty());
    }
}
