//! Term-recurrence summation of ₂F₁(x) and ₃F₂(1).
//!
//! Terms are generated with the ratio t₍ₙ₊₁₎/tₙ and accumulated with Neumaier
//! compensation. Two stopping rules are available:
//!
//! * plain: stop at N once |t_N|·(N+1)/s (the integral-comparison estimate
//!   for terms decaying like n^(−1−s)) is below tolerance, the last three
//!   terms decreased in magnitude, and N is past the index after which the
//!   magnitudes are provably monotone;
//! * tail-corrected: additionally record partial sums at N₀, 2N₀, 4N₀, … and
//!   eliminate the tail terms A_j·N^(−s−j) by Richardson extrapolation. The
//!   result carries `tail_corrected = true`.

use serde::{Deserialize, Serialize};

use crate::arith::{is_nonpositive_integer, Rational};
use crate::error::{Error, Result};

/// Smallest excess accepted by [`sum_3f2_unit`] for non-terminating input.
pub const MIN_EXCESS: f64 = 0.05;

pub const DEFAULT_MAX_TERMS: u64 = 2_000_000;

const MAX_RICHARDSON_DEPTH: usize = 6;
const FIRST_CHECKPOINT: u64 = 64;

/// Upper a, b; lower c.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params2F1 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// Upper a, b, c; lower d, e.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params3F2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
}

impl Params2F1 {
    pub fn new(a: f64, b: f64, c: f64) -> Self {
        Params2F1 { a, b, c }
    }

    pub fn excess(&self) -> f64 {
        excess_2f1(self)
    }
}

impl Params3F2 {
    pub fn new(a: f64, b: f64, c: f64, d: f64, e: f64) -> Self {
        Params3F2 { a, b, c, d, e }
    }

    pub fn from_slice(v: &[f64]) -> Option<Self> {
        match *v {
            [a, b, c, d, e] => Some(Params3F2 { a, b, c, d, e }),
            _ => None,
        }
    }

    pub fn excess(&self) -> f64 {
        excess_3f2(self)
    }

    pub fn upper(&self) -> [f64; 3] {
        [self.a, self.b, self.c]
    }

    pub fn lower(&self) -> [f64; 2] {
        [self.d, self.e]
    }

    /// Upper and lower lists each sorted; the series is symmetric in both.
    pub fn canonical(&self) -> ([f64; 3], [f64; 2]) {
        let mut up = self.upper();
        let mut low = self.lower();
        up.sort_by(f64::total_cmp);
        low.sort_by(f64::total_cmp);
        (up, low)
    }

    /// Whether both parameter sets denote the same series up to reordering.
    pub fn same_series_as(&self, other: &Params3F2) -> bool {
        self.canonical() == other.canonical()
    }
}

/// s = d + e − a − b − c
pub fn excess_3f2(p: &Params3F2) -> f64 {
    p.d + p.e - p.a - p.b - p.c
}

/// c − a − b
pub fn excess_2f1(p: &Params2F1) -> f64 {
    p.c - p.a - p.b
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
    pub max_terms: u64,
    /// Apply the extrapolated tail to the returned value.
    pub tail_correction: bool,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rel: 1e-12,
            abs: 0.0,
            max_terms: DEFAULT_MAX_TERMS,
            tail_correction: false,
        }
    }
}

impl Tolerance {
    pub fn new(rel: f64, abs: f64, max_terms: u64) -> Result<Self> {
        let t = Tolerance {
            rel,
            abs,
            max_terms,
            tail_correction: false,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn with_tail_correction(mut self, on: bool) -> Self {
        self.tail_correction = on;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel >= 1e-15) || !self.rel.is_finite() {
            return Err(Error::InvalidTolerance(format!(
                "rel = {} (must be >= 1e-15)",
                self.rel
            )));
        }
        if !(self.abs >= 0.0) || !self.abs.is_finite() {
            return Err(Error::InvalidTolerance(format!("abs = {} (must be >= 0)", self.abs)));
        }
        if self.max_terms == 0 {
            return Err(Error::InvalidTolerance("max_terms = 0".into()));
        }
        Ok(())
    }

    fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesResult {
    pub value: f64,
    pub terms_used: u64,
    /// Estimated absolute truncation error of `value`.
    pub tail_bound: f64,
    pub converged: bool,
    pub terminated_exactly: bool,
    pub tail_corrected: bool,
}

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
struct CompensatedSum {
    sum: f64,
    comp: f64,
    abs_sum: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
        self.abs_sum += x.abs();
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// A hypergeometric-type series described by t₀ and its term ratio.
pub(crate) struct RatioSeries<F: Fn(f64) -> f64> {
    pub first: f64,
    /// t₍ₙ₊₁₎ / tₙ
    pub ratio: F,
    /// Limit of the ratio as n → ∞ (the argument x).
    pub rate: f64,
    /// Parametric excess s, when terms behave like n^(−1−s) at unit rate.
    pub excess: Option<f64>,
    /// From this index on |tₙ| is strictly decreasing.
    pub monotone_from: u64,
}

impl<F: Fn(f64) -> f64> RatioSeries<F> {
    fn plain_tail_estimate(&self, n: u64, t_n: f64, t_next: f64) -> f64 {
        let power_law = self
            .excess
            .filter(|&s| s > 0.0)
            .map(|s| t_n.abs() * (n as f64 + 1.0) / s)
            .unwrap_or(f64::INFINITY);
        if self.rate >= 1.0 {
            return power_law;
        }
        let rho = (self.ratio)(n as f64 + 1.0).abs().max(self.rate);
        let geometric = if rho < 1.0 {
            t_next.abs() / (1.0 - rho)
        } else {
            f64::INFINITY
        };
        geometric.min(power_law)
    }

    pub(crate) fn sum(&self, tol: &Tolerance) -> Result<SeriesResult> {
        let extrapolate = tol.tail_correction && self.rate == 1.0;
        let s = self.excess.unwrap_or(0.0);
        let mut acc = CompensatedSum::default();
        let mut t = self.first;
        let mut prev_abs = f64::INFINITY;
        let mut decreasing = 0u32;

        let mut next_checkpoint = FIRST_CHECKPOINT.max((self.monotone_from + 1).next_power_of_two());
        let mut table: Vec<Vec<f64>> = Vec::new();
        let mut best_extrapolated: Option<(f64, f64)> = None;

        let mut n: u64 = 0;
        loop {
            acc.add(t);
            let abs_t = t.abs();
            if abs_t < prev_abs {
                decreasing += 1;
            } else {
                decreasing = 0;
            }
            prev_abs = abs_t;
            let next = t * (self.ratio)(n as f64);
            let partial = acc.value();

            if next == 0.0 {
                return Ok(SeriesResult {
                    value: partial,
                    terms_used: n + 1,
                    tail_bound: 0.0,
                    converged: true,
                    terminated_exactly: false,
                    tail_corrected: false,
                });
            }

            if n >= self.monotone_from && decreasing >= 3 {
                let est = self.plain_tail_estimate(n, t, next);
                if est <= tol.target(partial) {
                    return Ok(SeriesResult {
                        value: partial,
                        terms_used: n + 1,
                        tail_bound: est,
                        converged: true,
                        terminated_exactly: false,
                        tail_corrected: false,
                    });
                }
            }

            if extrapolate && n + 1 == next_checkpoint {
                let row = richardson_row(&table, partial, s);
                let (value, err) = richardson_estimate(&table, &row, acc.abs_sum);
                table.push(row);
                if table.len() >= 3 {
                    best_extrapolated = Some((value, err));
                    if err <= tol.target(value) {
                        return Ok(SeriesResult {
                            value,
                            terms_used: n + 1,
                            tail_bound: err,
                            converged: true,
                            terminated_exactly: false,
                            tail_corrected: true,
                        });
                    }
                }
                next_checkpoint = next_checkpoint.saturating_mul(2);
            }

            if n + 1 >= tol.max_terms || !next.is_finite() {
                let best = match best_extrapolated {
                    Some((value, err)) => SeriesResult {
                        value,
                        terms_used: n + 1,
                        tail_bound: err,
                        converged: false,
                        terminated_exactly: false,
                        tail_corrected: true,
                    },
                    None => SeriesResult {
                        value: partial,
                        terms_used: n + 1,
                        tail_bound: self.plain_tail_estimate(n, t, next),
                        converged: false,
                        terminated_exactly: false,
                        tail_corrected: false,
                    },
                };
                return Err(Error::MaxTermsExceeded {
                    best: Box::new(best),
                });
            }
            t = next;
            n += 1;
        }
    }
}

/// Next Richardson row for partial sums at geometrically doubled indices, using
/// the known tail exponents s, s+1, s+2, ….
fn richardson_row(table: &[Vec<f64>], partial: f64, s: f64) -> Vec<f64> {
    let mut row = vec![partial];
    if let Some(prev) = table.last() {
        let depth = prev.len().min(MAX_RICHARDSON_DEPTH);
        for k in 1..=depth {
            let factor = 2f64.powf(s + (k - 1) as f64) - 1.0;
            let r = row[k - 1] + (row[k - 1] - prev[k - 1]) / factor;
            row.push(r);
        }
    }
    row
}

fn richardson_estimate(table: &[Vec<f64>], row: &[f64], abs_sum: f64) -> (f64, f64) {
    let k = row.len() - 1;
    let value = row[k];
    let mut err = if k >= 1 {
        (row[k] - row[k - 1]).abs()
    } else {
        f64::INFINITY
    };
    if let Some(prev) = table.last() {
        if prev.len() > k {
            err = err.max((row[k] - prev[k]).abs());
        }
    }
    (value, err + 32.0 * f64::EPSILON * abs_sum)
}

/// Index beyond which the term ratio of Σ Π(uᵢ)ₙ/Π(lⱼ)ₙ · xⁿ/n! stays in (0, 1).
///
/// For n past every −parameter all factors are positive, and the ratio is
/// below one where P(n) = Π(lⱼ+n)(n+1) − x·Π(uᵢ+n) > 0; the Cauchy root bound
/// of P gives the index.
pub(crate) fn monotone_index(upper: &[f64], lower: &[f64], x: f64) -> u64 {
    let positive_from = upper
        .iter()
        .chain(lower)
        .map(|&p| (-p).floor() + 1.0)
        .fold(0.0_f64, f64::max);

    let mut low_poly = vec![1.0, 1.0]; // n + 1
    for &l in lower {
        low_poly = poly_mul_linear(&low_poly, l);
    }
    let mut up_poly = vec![x];
    for &u in upper {
        up_poly = poly_mul_linear(&up_poly, u);
    }
    let len = low_poly.len().max(up_poly.len());
    let mut p: Vec<f64> = (0..len)
        .map(|i| low_poly.get(i).copied().unwrap_or(0.0) - up_poly.get(i).copied().unwrap_or(0.0))
        .collect();
    while p.len() > 1 && *p.last().unwrap() == 0.0 {
        p.pop();
    }
    let lead = *p.last().unwrap();
    let root_bound = if lead > 0.0 {
        1.0 + p[..p.len() - 1]
            .iter()
            .map(|c| (c / lead).abs())
            .fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    let idx = positive_from.max(root_bound).ceil();
    if idx.is_finite() && idx < u64::MAX as f64 {
        idx as u64
    } else {
        u64::MAX
    }
}

/// Coefficients (ascending powers of n) of poly · (n + r).
fn poly_mul_linear(poly: &[f64], r: f64) -> Vec<f64> {
    let mut out = vec![0.0; poly.len() + 1];
    for (i, &c) in poly.iter().enumerate() {
        out[i] += c * r;
        out[i + 1] += c;
    }
    out
}

/// Smallest m with an upper parameter equal to −m.
fn termination_index(upper: &[f64]) -> Option<u64> {
    upper
        .iter()
        .filter(|&&u| is_nonpositive_integer(u))
        .map(|&u| (-u) as u64)
        .min()
}

fn check_lower_poles(lower: &[f64], terminates_at: Option<u64>) -> Result<()> {
    for &l in lower {
        if is_nonpositive_integer(l) {
            let k = (-l) as u64;
            if terminates_at.is_none_or(|m| k < m) {
                return Err(Error::LowerPole {
                    param: l,
                    index: k + 1,
                });
            }
        }
    }
    Ok(())
}

fn term_ratio(upper: &[f64], lower: &[f64], x: f64, n: f64) -> f64 {
    let mut r = x / (n + 1.0);
    for &u in upper {
        r *= u + n;
    }
    for &l in lower {
        r /= l + n;
    }
    r
}

fn sum_terminating(upper: &[f64], lower: &[f64], x: f64, m: u64) -> SeriesResult {
    let mut acc = CompensatedSum::default();
    let mut t = 1.0;
    let mut used = 0;
    for n in 0..=m {
        if t == 0.0 && n > 0 {
            break;
        }
        acc.add(t);
        used = n + 1;
        t *= term_ratio(upper, lower, x, n as f64);
    }
    SeriesResult {
        value: acc.value(),
        terms_used: used,
        tail_bound: 0.0,
        converged: true,
        terminated_exactly: true,
        tail_corrected: false,
    }
}

fn sum_general(upper: &[f64], lower: &[f64], x: f64, excess: f64, tol: &Tolerance) -> Result<SeriesResult> {
    let series = RatioSeries {
        first: 1.0,
        ratio: |n| term_ratio(upper, lower, x, n),
        rate: x.abs(),
        excess: Some(excess),
        monotone_from: monotone_index(upper, lower, x.abs()),
    };
    series.sum(tol)
}

/// Σ (a)ₙ(b)ₙ/((c)ₙ n!) xⁿ for 0 ≤ x ≤ 1 (x = 1 needs c − a − b > 0), or any
/// x when an upper parameter is a non-positive integer.
pub fn sum_2f1(p: &Params2F1, x: f64, tol: &Tolerance) -> Result<SeriesResult> {
    tol.validate()?;
    if !x.is_finite() {
        return Err(Error::Domain(format!("x = {x}")));
    }
    let upper = [p.a, p.b];
    let lower = [p.c];
    let terminates = termination_index(&upper);
    check_lower_poles(&lower, terminates)?;
    if let Some(m) = terminates {
        return Ok(sum_terminating(&upper, &lower, x, m));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("x = {x} outside [0, 1]")));
    }
    let s = excess_2f1(p);
    if x == 1.0 && s <= 0.0 {
        return Err(Error::Domain(format!(
            "x = 1 with c - a - b = {s} <= 0 diverges"
        )));
    }
    sum_general(&upper, &lower, x, s, tol)
}

/// Σ (a)ₙ(b)ₙ(c)ₙ/((d)ₙ(e)ₙ n!).
pub fn sum_3f2_unit(p: &Params3F2, tol: &Tolerance) -> Result<SeriesResult> {
    tol.validate()?;
    let upper = p.upper();
    let lower = p.lower();
    let terminates = termination_index(&upper);
    check_lower_poles(&lower, terminates)?;
    if let Some(m) = terminates {
        return Ok(sum_terminating(&upper, &lower, 1.0, m));
    }
    let s = excess_3f2(p);
    if s.is_nan() || s <= 0.0 {
        return Err(Error::Divergence { excess: s });
    }
    if s < MIN_EXCESS {
        return Err(Error::SlowConvergence {
            excess: s,
            min: MIN_EXCESS,
        });
    }
    sum_general(&upper, &lower, 1.0, s, tol)
}

/// Upper a, b, c; lower d, e, all exact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalParams3F2 {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
    pub e: Rational,
}

/// Exact value of a ₃F₂(1) that terminates at index `n` (an upper parameter is −n).
pub fn sum_3f2_terminating_exact(p: &RationalParams3F2, n: u64) -> Result<Rational> {
    let minus_n = Rational::from_integer(-(n as i64));
    if ![&p.a, &p.b, &p.c].iter().any(|&u| *u == minus_n) {
        return Err(Error::precondition(format!(
            "no upper parameter equals -{n}"
        )));
    }
    let upper = [&p.a, &p.b, &p.c];
    let lower = [&p.d, &p.e];
    let mut sum = Rational::one();
    let mut term = Rational::one();
    for k in 0..n {
        let kk = Rational::from_integer(k as i64);
        let num = upper
            .iter()
            .fold(Rational::one(), |acc, &u| acc * (u + &kk));
        if num.is_zero() {
            break;
        }
        let den = lower
            .iter()
            .fold(Rational::from_integer(k as i64 + 1), |acc, &l| acc * (l + &kk));
        if den.is_zero() {
            let param = lower
                .iter()
                .find(|&&l| (l + &kk).is_zero())
                .map(|l| l.to_f64())
                .unwrap_or(f64::NAN);
            return Err(Error::LowerPole {
                param,
                index: k + 1,
            });
        }
        term = term * num / den;
        sum = &sum + &term;
    }
    Ok(sum)
}
