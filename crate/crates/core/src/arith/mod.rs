//! Scalar arithmetic: gamma in log space, Pochhammer symbols, gamma ratios and
//! exact rationals.

mod gamma;
mod rational;

pub use gamma::{gamma, log_gamma_signed, Sign, SignedLogValue};
pub use rational::Rational;

pub(crate) use gamma::is_nonpositive_integer;

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rising factorial x(x+1)⋯(x+n−1); 1 for n = 0.
pub fn pochhammer(x: f64, n: u32) -> f64 {
    let mut acc = 1.0;
    for k in 0..n {
        acc *= x + k as f64;
    }
    acc
}

/// Exact rising factorial over the rationals.
pub fn pochhammer_rational(x: &Rational, n: u32) -> Rational {
    let mut acc = Rational::one();
    let mut factor = x.clone();
    for _ in 0..n {
        if factor.is_zero() {
            return Rational::zero();
        }
        acc = &acc * &factor;
        factor = factor + Rational::one();
    }
    acc
}

/// Γ(n₁)⋯Γ(nₖ) / (Γ(d₁)⋯Γ(dₘ)), kept symbolic until evaluated.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct GammaRatio {
    pub numerator_args: Vec<f64>,
    pub denominator_args: Vec<f64>,
}

impl GammaRatio {
    pub fn new(numerator_args: Vec<f64>, denominator_args: Vec<f64>) -> Self {
        GammaRatio {
            numerator_args,
            denominator_args,
        }
    }

    pub fn one() -> Self {
        Self::default()
    }

    pub fn first_pole(&self) -> Option<f64> {
        self.numerator_args
            .iter()
            .chain(&self.denominator_args)
            .copied()
            .find(|&x| x.is_nan() || is_nonpositive_integer(x))
    }

    /// Sorted argument lists with bitwise-equal pairs removed from both sides.
    fn reduced(&self) -> (Vec<f64>, Vec<f64>) {
        let mut num = self.numerator_args.clone();
        let mut den = self.denominator_args.clone();
        num.sort_by(f64::total_cmp);
        den.sort_by(f64::total_cmp);
        let (mut i, mut j) = (0, 0);
        let (mut keep_num, mut keep_den) = (Vec::new(), Vec::new());
        while i < num.len() && j < den.len() {
            match num[i].total_cmp(&den[j]) {
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
                Ordering::Less => {
                    keep_num.push(num[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    keep_den.push(den[j]);
                    j += 1;
                }
            }
        }
        keep_num.extend_from_slice(&num[i..]);
        keep_den.extend_from_slice(&den[j..]);
        (keep_num, keep_den)
    }

    pub fn eval_log(&self) -> Result<SignedLogValue> {
        if let Some(arg) = self.first_pole() {
            return Err(Error::Pole { arg });
        }
        let (num, den) = self.reduced();
        let mut acc = SignedLogValue::ONE;
        for x in num {
            acc = acc.mul(log_gamma_signed(x)?);
        }
        for x in den {
            acc = acc.div(log_gamma_signed(x)?);
        }
        Ok(acc)
    }
}

/// Evaluates a [`GammaRatio`] once, in log space.
pub fn gamma_ratio_eval(r: &GammaRatio) -> Result<f64> {
    r.eval_log().map(|v| v.to_f64())
}

/// B(α, β) = Γ(α)Γ(β)/Γ(α+β).
pub fn beta_closed_form(alpha: f64, beta: f64) -> Result<f64> {
    gamma_ratio_eval(&GammaRatio::new(vec![alpha, beta], vec![alpha + beta]))
}
