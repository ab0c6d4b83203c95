//! ₂F₁(a, b; c; x) on [0, 1) at full precision, including points so close to
//! x = 1 that 1 − x underflows in a plain subtraction.
//!
//! For x ≤ ½ the defining series is summed directly. Beyond that the function
//! is continued by Taylor expansion of the hypergeometric ODE along the ladder
//! y_k = 2^(−k−1) of distances to the singular point: each rung is half-way to
//! x = 1 from the previous one, so every expansion is taken at half its radius
//! of convergence. Values carry a separate log scale so that kernels which blow
//! up like (1 − x)^(c−a−b) stay representable.

use crate::arith::{is_nonpositive_integer, SignedLogValue};
use crate::error::{Error, Result};
use crate::series::Params2F1;

/// Smallest rung; about 1e-307, still a normal f64.
const LADDER_DEPTH: usize = 1018;
const MAX_TAYLOR_TERMS: usize = 2000;
const MAX_DIRECT_TERMS: u64 = 100_000;

/// F and y·F′ at one rung, both divided by exp(log_scale).
#[derive(Debug, Clone, Copy)]
struct Rung {
    log_scale: f64,
    f: f64,
    g: f64,
}

#[derive(Debug, Clone)]
pub struct Kernel2F1 {
    p: Params2F1,
    ladder: Vec<Rung>,
}

/// Σ (a)ₙ(b)ₙ/((c)ₙ n!) xⁿ for 0 ≤ x ≤ ½, summed to machine precision.
fn direct_series(p: &Params2F1, x: f64) -> Result<f64> {
    let mut sum = 1.0;
    let mut comp = 0.0;
    let mut t = 1.0;
    let mut small = 0;
    for n in 0..MAX_DIRECT_TERMS {
        let nf = n as f64;
        t *= (p.a + nf) * (p.b + nf) / ((p.c + nf) * (nf + 1.0)) * x;
        if t == 0.0 {
            return Ok(sum + comp);
        }
        let s = sum + t;
        comp += if sum.abs() >= t.abs() {
            (sum - s) + t
        } else {
            (t - s) + sum
        };
        sum = s;
        // ratio below ¾ once n is past the parameters, so two tiny terms end it
        let ratio = ((p.a + nf + 1.0) * (p.b + nf + 1.0) / ((p.c + nf + 1.0) * (nf + 2.0)) * x).abs();
        if t.abs() <= f64::EPSILON * 1e-2 * sum.abs() && ratio < 0.75 {
            small += 1;
            if small >= 2 {
                return Ok(sum + comp);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::AccuracyNotReached {
        estimate: sum + comp,
        achieved_error: t.abs(),
    })
}

/// Normalized Taylor coefficients gₖ = F⁽ᵏ⁾(x₀) y₀ᵏ / k! at x₀ = 1 − y₀, summed
/// at τ ∈ [0, ½]: returns (F(x₀ + τy₀), y₁F′(x₀ + τy₀)) with y₁ = y₀(1 − τ).
fn taylor_step(p: &Params2F1, y0: f64, f0: f64, g0: f64, tau: f64) -> (f64, f64) {
    let x0 = 1.0 - y0;
    let (a, b, c) = (p.a, p.b, p.c);
    let apb1 = a + b + 1.0;
    let lin = c - apb1 + apb1 * y0;
    let (mut gk, mut gk1) = (f0, g0);
    let mut f = f0 + g0 * tau;
    let mut df = g0;
    let mut tau_k = tau; // τ^(k+1) for the term g_{k+2}
    let mut quiet = 0;
    let scale = f0.abs().max(g0.abs());
    for k in 0..MAX_TAYLOR_TERMS {
        let kf = k as f64;
        let gk2 = ((kf + a) * (kf + b) * y0 * gk
            - (kf + 1.0) * ((2.0 * y0 - 1.0) * kf + lin) * gk1)
            / (x0 * (kf + 1.0) * (kf + 2.0));
        let d_term = (kf + 2.0) * gk2 * tau_k;
        tau_k *= tau;
        let f_term = gk2 * tau_k;
        f += f_term;
        df += d_term;
        let tiny = 1e-18 * (f.abs() + df.abs()).max(1e-300 * scale);
        if f_term.abs() <= tiny && d_term.abs() <= tiny {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        } else {
            quiet = 0;
        }
        gk = gk1;
        gk1 = gk2;
        if tau == 0.0 {
            break;
        }
    }
    (f, (1.0 - tau) * df)
}

impl Kernel2F1 {
    pub fn new(p: Params2F1) -> Result<Self> {
        if is_nonpositive_integer(p.c) {
            return Err(Error::LowerPole {
                param: p.c,
                index: (-p.c) as u64 + 1,
            });
        }
        let f = direct_series(&p, 0.5)?;
        let dp = Params2F1::new(p.a + 1.0, p.b + 1.0, p.c + 1.0);
        let g = 0.5 * p.a * p.b / p.c * direct_series(&dp, 0.5)?;
        let mut ladder = Vec::with_capacity(LADDER_DEPTH + 1);
        let mut rung = normalize(Rung { log_scale: 0.0, f, g });
        ladder.push(rung);
        let mut y = 0.5;
        for _ in 0..LADDER_DEPTH {
            let (f, g) = taylor_step(&p, y, rung.f, rung.g, 0.5);
            rung = normalize(Rung {
                log_scale: rung.log_scale,
                f,
                g,
            });
            ladder.push(rung);
            y *= 0.5;
        }
        Ok(Kernel2F1 { p, ladder })
    }

    pub fn params(&self) -> &Params2F1 {
        &self.p
    }

    /// F at the point x = 1 − y; both are passed so neither loses precision.
    pub fn eval(&self, x: f64, y: f64) -> Result<SignedLogValue> {
        if !(0.0..=1.0).contains(&x) || !(y > 0.0) {
            return Err(Error::Domain(format!("kernel argument x = {x}, 1 - x = {y}")));
        }
        if y >= 0.5 {
            return Ok(SignedLogValue::from_f64(direct_series(&self.p, x)?));
        }
        // rung k sits at y_k = 2^(−k−1) with y_k/2 < y ≤ y_k
        let mut k = ((-y.log2()).floor() as i64 - 1).max(0) as usize;
        let yk = |k: usize| 0.5f64.powi(k as i32 + 1);
        while k > 0 && y > yk(k) {
            k -= 1;
        }
        while y <= 0.5 * yk(k) {
            k += 1;
        }
        if k >= self.ladder.len() {
            return Err(Error::Domain(format!("1 - x = {y} below kernel ladder")));
        }
        let rung = self.ladder[k];
        let tau = 1.0 - y / yk(k);
        let (f, _) = taylor_step(&self.p, yk(k), rung.f, rung.g, tau);
        Ok(SignedLogValue::from_f64(f).scale_log(rung.log_scale))
    }
}

fn normalize(r: Rung) -> Rung {
    let m = r.f.abs().max(r.g.abs());
    if m == 0.0 || !m.is_finite() {
        return r;
    }
    Rung {
        log_scale: r.log_scale + m.ln(),
        f: r.f / m,
        g: r.g / m,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn eval_y(k: &Kernel2F1, y: f64) -> f64 {
        k.eval(1.0 - y, y).unwrap().to_f64()
    }

    #[test]
    fn matches_reference_values() {
        // mpmath, 30 digits
        let k = Kernel2F1::new(Params2F1::new(0.3, 0.4, 1.5)).unwrap();
        assert!(rel(k.eval(0.5, 0.5).unwrap().to_f64(), 1.050_118_922_867_027_369) < 1e-15);
        assert!(rel(eval_y(&k, 1e-6), 1.181_180_413_175_562_957_6) < 1e-13);
    }

    #[test]
    fn closed_forms_near_one() {
        // ₂F₁(1, 1; 2; x) = −ln(1 − x)/x
        let k = Kernel2F1::new(Params2F1::new(1.0, 1.0, 2.0)).unwrap();
        for y in [0.3f64, 0.1, 1e-3, 1e-20, 1e-150, 1e-290] {
            let want = -y.ln() / (1.0 - y);
            assert!(rel(eval_y(&k, y), want) < 1e-13, "y = {y}");
        }
        // ₂F₁(a, b; b; x) = (1 − x)^(−a), far outside f64 range in the limit
        let k = Kernel2F1::new(Params2F1::new(2.5, 0.7, 0.7)).unwrap();
        for y in [0.4f64, 1e-8, 1e-200] {
            let got = k.eval(1.0 - y, y).unwrap().log_magnitude().unwrap();
            let want = -2.5 * y.ln();
            assert!((got - want).abs() < 1e-12 * want.abs().max(1.0), "y = {y}");
        }
    }

    #[test]
    fn bounded_kernel_tends_to_gauss_value() {
        // c − a − b = 1.3 > 0: F(1) = Γ(c)Γ(c−a−b)/(Γ(c−a)Γ(c−b))
        let p = Params2F1::new(0.5, 0.6, 2.4);
        let k = Kernel2F1::new(p).unwrap();
        let want = crate::transforms::gauss_sum(&p).unwrap();
        assert!(rel(eval_y(&k, 1e-280), want) < 1e-13);
    }

    #[test]
    fn continuous_across_rungs() {
        let k = Kernel2F1::new(Params2F1::new(-1.7, 2.2, 0.9)).unwrap();
        for j in 1..60 {
            let y = 0.5f64.powi(j);
            let below = eval_y(&k, y * (1.0 - 1e-12));
            let at = eval_y(&k, y);
            assert!(rel(below, at) < 1e-10, "y = 2^-{j}");
        }
    }

    #[test]
    fn lower_pole_rejected() {
        assert!(matches!(
            Kernel2F1::new(Params2F1::new(1.0, 1.0, -2.0)),
            Err(Error::LowerPole { .. })
        ));
    }
}
