//! Two-sided identity checks: each side is evaluated on its own and the
//! discrepancy compared with a relative tolerance (or exactly, for rationals).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::series::{sum_2f1, sum_3f2_terminating_exact, sum_3f2_unit, Params2F1, Params3F2, Tolerance};
use crate::transforms::{euler_second_map, gauss_sum, kummer_map, saalschutz_params, saalschutz_sum, thomae_map};

pub const THOMAE_REL_TOL: f64 = 1e-9;
pub const KUMMER_REL_TOL: f64 = 1e-9;
pub const GAUSS_REL_TOL: f64 = 1e-10;
pub const EULER_REL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Identity {
    Thomae,
    Kummer,
    Gauss,
    Saalschutz,
    Euler2,
}

impl Identity {
    pub const ALL: [Identity; 5] = [
        Identity::Thomae,
        Identity::Kummer,
        Identity::Gauss,
        Identity::Saalschutz,
        Identity::Euler2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::Thomae => "thomae",
            Identity::Kummer => "kummer",
            Identity::Gauss => "gauss",
            Identity::Saalschutz => "saalschutz",
            Identity::Euler2 => "euler2",
        }
    }

    /// Default relative tolerance; Saalschütz is checked exactly.
    pub fn default_rel_tol(self) -> f64 {
        match self {
            Identity::Thomae => THOMAE_REL_TOL,
            Identity::Kummer => KUMMER_REL_TOL,
            Identity::Gauss => GAUSS_REL_TOL,
            Identity::Euler2 => EULER_REL_TOL,
            Identity::Saalschutz => 0.0,
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Identity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Identity::ALL
            .into_iter()
            .find(|i| i.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown identity {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub identity: Identity,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_discrepancy: f64,
    pub rel_discrepancy: f64,
    pub rel_tolerance: f64,
    pub lhs_terms: u64,
    /// Zero when the right side is a closed form.
    pub rhs_terms: u64,
    pub pass: bool,
}

impl IdentityCheck {
    fn new(identity: Identity, lhs: f64, rhs: f64, terms: (u64, u64), rel_tolerance: f64) -> Self {
        let abs_discrepancy = (lhs - rhs).abs();
        let scale = lhs.abs().max(rhs.abs());
        let rel_discrepancy = if scale == 0.0 { 0.0 } else { abs_discrepancy / scale };
        IdentityCheck {
            identity,
            lhs,
            rhs,
            abs_discrepancy,
            rel_discrepancy,
            rel_tolerance,
            lhs_terms: terms.0,
            rhs_terms: terms.1,
            pass: rel_discrepancy <= rel_tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactCheck {
    pub lhs: Rational,
    pub rhs: Rational,
    pub pass: bool,
}

/// Direct ₃F₂(1) against the Thomae prefactor times the mapped series.
pub fn verify_thomae(p: &Params3F2, tol: &Tolerance, rel_tol: f64) -> Result<IdentityCheck> {
    let rhs = thomae_map(p)?.evaluate(tol)?;
    let lhs = sum_3f2_unit(p, tol)?;
    Ok(IdentityCheck::new(
        Identity::Thomae,
        lhs.value,
        rhs.value,
        (lhs.terms_used, rhs.series.terms_used),
        rel_tol,
    ))
}

pub fn verify_kummer(p: &Params3F2, tol: &Tolerance, rel_tol: f64) -> Result<IdentityCheck> {
    let rhs = kummer_map(p)?.evaluate(tol)?;
    let lhs = sum_3f2_unit(p, tol)?;
    Ok(IdentityCheck::new(
        Identity::Kummer,
        lhs.value,
        rhs.value,
        (lhs.terms_used, rhs.series.terms_used),
        rel_tol,
    ))
}

/// ₂F₁(1) by summation against the gamma closed form.
pub fn verify_gauss(p: &Params2F1, tol: &Tolerance, rel_tol: f64) -> Result<IdentityCheck> {
    let rhs = gauss_sum(p)?;
    let lhs = sum_2f1(p, 1.0, tol)?;
    Ok(IdentityCheck::new(Identity::Gauss, lhs.value, rhs, (lhs.terms_used, 0), rel_tol))
}

/// ₂F₁(x) against (1−x)^(c−a−b) ₂F₁(c−a, c−b; c; x).
pub fn verify_euler2(p: &Params2F1, x: f64, tol: &Tolerance, rel_tol: f64) -> Result<IdentityCheck> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::Domain(format!("x = {x} outside [0, 1)")));
    }
    let t = euler_second_map(p)?;
    let rhs = sum_2f1(&t.params, x, tol)?;
    let lhs = sum_2f1(p, x, tol)?;
    let power = (1.0 - x).powf(t.power_exponent);
    Ok(IdentityCheck::new(
        Identity::Euler2,
        lhs.value,
        power * rhs.value,
        (lhs.terms_used, rhs.terms_used),
        rel_tol,
    ))
}

/// Terminating sum against the Pochhammer ratio, in exact arithmetic.
pub fn verify_saalschutz(n: u32, a: &Rational, b: &Rational, c: &Rational) -> Result<ExactCheck> {
    let rhs = saalschutz_sum(n, a, b, c)?;
    let lhs = sum_3f2_terminating_exact(&saalschutz_params(n, a, b, c), n as u64)?;
    let pass = lhs == rhs;
    Ok(ExactCheck { lhs, rhs, pass })
}
