//! Verification paths that share no summation code with the series engine:
//! quadrature of beta and Euler-type integrals, and the staged proof chain.

mod chain;
mod kernel;
mod quadrature;

pub use chain::{
    prove_chain, prove_chain_with, stage_series_tolerance, ProofChainReport, StageValue,
    DEFAULT_CHAIN_TOLERANCE, STAGE_LABELS,
};
pub use kernel::Kernel2F1;
pub use quadrature::{integrate_weighted, Node, QuadratureConfig, QuadratureResult, MAX_LEVELS};

use serde::{Deserialize, Serialize};

use crate::arith::{GammaRatio, SignedLogValue};
use crate::error::{Error, Result};
use crate::series::{Params2F1, Params3F2};

/// ∫₀¹ x^(α−1) (1−x)^(β−1) dx by quadrature.
pub fn beta_integral(alpha: f64, beta: f64, cfg: &QuadratureConfig) -> Result<QuadratureResult> {
    integrate_weighted(alpha, beta, |_| Ok(SignedLogValue::ONE), cfg)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralResult {
    /// Normalized value, comparable with ₃F₂(1).
    pub value: f64,
    pub error_estimate: f64,
    pub prefactor: f64,
    pub quadrature: QuadratureResult,
    /// The ₂F₁ kernel was replaced by its Euler-transformed form.
    pub euler_kernel: bool,
}

/// prefactor × ∫₀¹ x^(α−1)(1−x)^(β−1) ₂F₁(kernel; x) dx, with the quadrature
/// target scaled so that the normalized value meets `cfg.target_abs_error`.
pub(crate) fn normalized_integral(
    prefactor: &GammaRatio,
    alpha: f64,
    beta: f64,
    kernel: Params2F1,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    cfg.validate()?;
    let pre = prefactor.eval_log()?.to_f64();
    let k = Kernel2F1::new(kernel)?;
    let scaled = cfg.with_target(cfg.target_abs_error / pre.abs());
    match integrate_weighted(alpha, beta, |n| k.eval(n.x, n.y), &scaled) {
        Ok(q) => Ok(IntegralResult {
            value: pre * q.value,
            error_estimate: pre.abs() * q.error_estimate,
            prefactor: pre,
            quadrature: q,
            euler_kernel: false,
        }),
        Err(Error::AccuracyNotReached {
            estimate,
            achieved_error,
        }) => Err(Error::AccuracyNotReached {
            estimate: pre * estimate,
            achieved_error: pre.abs() * achieved_error,
        }),
        Err(e) => Err(e),
    }
}

fn require(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::precondition(what))
    }
}

pub(crate) fn check_integral_preconditions(p: &Params3F2) -> Result<()> {
    require(p.c > 0.0, "c > 0")?;
    require(p.e - p.c > 0.0, "e - c > 0")?;
    require(p.excess() > 0.0, "d + e - a - b - c > 0")
}

/// ₃F₂(a, b, c; d, e; 1) as Γ(e)/(Γ(c)Γ(e−c)) ∫₀¹ x^(c−1)(1−x)^(e−c−1) ₂F₁(a, b; d; x) dx.
///
/// When d − a − b ≤ 0 the kernel is unbounded at x = 1 and is replaced by
/// (1−x)^(d−a−b) ₂F₁(d−a, d−b; d; x), folding the power into the weight.
pub fn euler_integral_3f2(p: &Params3F2, cfg: &QuadratureConfig) -> Result<IntegralResult> {
    check_integral_preconditions(p)?;
    let Params3F2 { a, b, c, d, e } = *p;
    let prefactor = GammaRatio::new(vec![e], vec![c, e - c]);
    let kernel_excess = d - a - b;
    if kernel_excess > 0.0 {
        normalized_integral(&prefactor, c, e - c, Params2F1::new(a, b, d), cfg)
    } else {
        let mut r = normalized_integral(
            &prefactor,
            c,
            p.excess(),
            Params2F1::new(d - a, d - b, d),
            cfg,
        )?;
        r.euler_kernel = true;
        Ok(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{sum_3f2_unit, Tolerance};
    use std::f64::consts::PI;

    #[test]
    fn beta_examples() {
        let cfg = QuadratureConfig::default();
        assert!((beta_integral(1.0, 1.0, &cfg).unwrap().value - 1.0).abs() < 1e-14);
        assert!((beta_integral(2.0, 3.0, &cfg).unwrap().value - 1.0 / 12.0).abs() < 1e-14);
        let r = beta_integral(0.5, 0.5, &cfg).unwrap();
        assert!((r.value - PI).abs() < 1e-12, "{r:?}");
        assert!(matches!(
            beta_integral(0.0, 1.0, &cfg),
            Err(Error::Precondition { .. })
        ));
    }

    #[test]
    fn beta_refinement_is_monotone() {
        let mut errors = Vec::new();
        for levels in [1u32, 2, 3, 4, 5, 6, 8, 10, 12] {
            let cfg = QuadratureConfig::new(1e-300, levels).unwrap();
            let err = match beta_integral(0.5, 0.5, &cfg) {
                Err(Error::AccuracyNotReached { estimate, .. }) => (estimate - PI).abs(),
                other => panic!("{other:?}"),
            };
            errors.push(err);
        }
        for w in [(0, 1), (1, 3), (2, 5), (3, 6), (4, 7), (5, 8)] {
            assert!(errors[w.1] <= errors[w.0], "{errors:?}");
        }
    }

    #[test]
    fn euler_integral_trivial_upper() {
        let cfg = QuadratureConfig::default();
        let r = euler_integral_3f2(&Params3F2::new(0.0, 1.3, 0.8, 2.1, 1.9), &cfg).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn euler_integral_zeta_two() {
        let cfg = QuadratureConfig::new(1e-10, 12).unwrap();
        let r = euler_integral_3f2(&Params3F2::new(1.0, 1.0, 1.0, 2.0, 2.0), &cfg).unwrap();
        assert!((r.value - PI * PI / 6.0).abs() < 1e-8, "{r:?}");
        assert!(r.euler_kernel);
    }

    #[test]
    fn euler_integral_matches_series() {
        let cfg = QuadratureConfig::new(1e-11, 12).unwrap();
        let p = Params3F2::new(0.5, 0.6, 0.7, 2.0, 2.5);
        let q = euler_integral_3f2(&p, &cfg).unwrap();
        let s = sum_3f2_unit(&p, &Tolerance::default()).unwrap();
        assert!((q.value - s.value).abs() < 1e-9);
        assert!((q.value - 1.055_459_896_076_114_880).abs() < 1e-10);
    }

    #[test]
    fn euler_integral_preconditions() {
        let cfg = QuadratureConfig::default();
        for (p, what) in [
            (Params3F2::new(0.5, 0.5, 0.0, 2.0, 2.0), "c > 0"),
            (Params3F2::new(0.5, 0.5, 2.0, 2.0, 2.0), "e - c > 0"),
            (Params3F2::new(1.5, 1.5, 1.0, 1.0, 2.0), "d + e - a - b - c > 0"),
        ] {
            assert_eq!(euler_integral_3f2(&p, &cfg).unwrap_err(), Error::precondition(what));
        }
    }
}
