//! Double-exponential quadrature on [0, 1] for integrands of the form
//! x^(α−1) (1−x)^(β−1) g(x).
//!
//! The substitution x = (1 + tanh(π/2 · sinh t)) / 2 sends both endpoints to
//! infinity in t, where the transformed integrand decays double exponentially
//! for any α, β > 0. Everything is assembled in log space so that neither the
//! weight nor an unbounded g overflows near the endpoints.

use std::f64::consts::{FRAC_PI_2, LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::arith::{Sign, SignedLogValue};
use crate::error::{Error, Result};

pub const MAX_LEVELS: u32 = 12;
const MIN_LEVELS: u32 = 3;
const T_MAX: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub target_abs_error: f64,
    /// Number of step halvings; level k uses step 2^(−k).
    pub max_levels: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            target_abs_error: 1e-12,
            max_levels: 10,
        }
    }
}

impl QuadratureConfig {
    pub fn new(target_abs_error: f64, max_levels: u32) -> Result<Self> {
        let cfg = QuadratureConfig {
            target_abs_error,
            max_levels,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.target_abs_error > 0.0) || !self.target_abs_error.is_finite() {
            return Err(Error::InvalidTolerance(format!(
                "target_abs_error = {} (must be > 0)",
                self.target_abs_error
            )));
        }
        if !(1..=MAX_LEVELS).contains(&self.max_levels) {
            return Err(Error::InvalidTolerance(format!(
                "max_levels = {} (must be in 1..={MAX_LEVELS})",
                self.max_levels
            )));
        }
        Ok(())
    }

    pub(crate) fn with_target(mut self, target: f64) -> Self {
        self.target_abs_error = target;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub levels: u32,
    pub evaluations: u64,
}

/// A node of the transformed rule: x and 1 − x, each accurate to full relative
/// precision, and their logarithms.
#[derive(Debug, Clone, Copy)]
pub struct Node {
    pub x: f64,
    pub y: f64,
    pub ln_x: f64,
    pub ln_y: f64,
}

impl Node {
    fn at(t: f64) -> Node {
        let u = FRAC_PI_2 * t.sinh();
        // ln σ(2u) and ln σ(−2u), σ the logistic function
        let tail = (-2.0 * u.abs()).exp().ln_1p();
        let (ln_x, ln_y) = if u >= 0.0 {
            (-tail, -2.0 * u - tail)
        } else {
            (2.0 * u - tail, -tail)
        };
        Node {
            x: ln_x.exp(),
            y: ln_y.exp(),
            ln_x,
            ln_y,
        }
    }
}

#[derive(Default)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        self.comp += if self.sum.abs() >= x.abs() {
            (self.sum - t) + x
        } else {
            (x - t) + self.sum
        };
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// ∫₀¹ x^(α−1) (1−x)^(β−1) g(x) dx, with g given as a signed log so that it may
/// grow without bound at an endpoint.
pub fn integrate_weighted<G>(alpha: f64, beta: f64, g: G, cfg: &QuadratureConfig) -> Result<QuadratureResult>
where
    G: Fn(&Node) -> Result<SignedLogValue>,
{
    cfg.validate()?;
    if !(alpha > 0.0) || !(beta > 0.0) {
        return Err(Error::precondition(format!(
            "alpha > 0 and beta > 0 (got {alpha}, {beta})"
        )));
    }

    let ln_pi = PI.ln();
    let contribution = |t: f64| -> Result<(f64, f64)> {
        let node = Node::at(t);
        let gv = g(&node)?;
        let Some(ln_g) = gv.log_magnitude() else {
            return Ok((0.0, 0.0));
        };
        // dx/dt = π cosh t · x · (1 − x)
        let ln_cosh = t.abs() + (-2.0 * t.abs()).exp().ln_1p() - LN_2;
        let log = ln_pi + ln_cosh + alpha * node.ln_x + beta * node.ln_y + ln_g;
        let mag = log.exp();
        let v = match gv.sign() {
            Sign::Negative => -mag,
            _ => mag,
        };
        Ok((v, mag))
    };

    let mut sum = Neumaier::default();
    let mut abs_sum = 0.0;
    let mut evaluations = 0u64;
    let n0 = T_MAX as i64;
    for j in -n0..=n0 {
        let (v, m) = contribution(j as f64)?;
        sum.add(v);
        abs_sum += m;
        evaluations += 1;
    }
    let mut h = 1.0;
    let mut estimate = sum.value() * h;
    let mut error = f64::INFINITY;

    for level in 1..=cfg.max_levels {
        h *= 0.5;
        let half_count = (T_MAX / h) as i64;
        let mut j = -half_count + 1;
        while j <= half_count {
            let (v, m) = contribution(j as f64 * h)?;
            sum.add(v);
            abs_sum += m;
            evaluations += 1;
            j += 2;
        }
        let next = sum.value() * h;
        let roundoff = 8.0 * f64::EPSILON * abs_sum * h;
        error = (next - estimate).abs().max(roundoff);
        estimate = next;
        if level >= MIN_LEVELS && error <= cfg.target_abs_error {
            return Ok(QuadratureResult {
                value: estimate,
                error_estimate: error,
                levels: level,
                evaluations,
            });
        }
    }
    Err(Error::AccuracyNotReached {
        estimate,
        achieved_error: error,
    })
}
