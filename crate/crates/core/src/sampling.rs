//! Seeded parameter sampling inside each identity's validity region.
//!
//! All boxes are closed-form constants so that runs are reproducible from the
//! seed alone. Sampling is uniform on each box, with rejection for the derived
//! parameter constraints.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::Rational;
use crate::series::{Params2F1, Params3F2};

/// Thomae: a ∈ [0.2, 3], s ∈ [0.5, 4], transformed excess (= a) ≥ 0.5.
pub const THOMAE_A: (f64, f64) = (0.2, 3.0);
pub const THOMAE_MIN_TRANSFORMED_EXCESS: f64 = 0.5;
/// Kummer: e − c ∈ [0.5, 4], s ∈ [0.5, 4].
pub const KUMMER_GAP: (f64, f64) = (0.5, 4.0);
pub const EXCESS: (f64, f64) = (0.5, 4.0);
/// Free upper parameters b, c (and a for Kummer).
pub const UPPER: (f64, f64) = (0.1, 3.0);
/// Free lower parameter d; derived lower parameters must also reach this floor.
pub const LOWER: (f64, f64) = (0.5, 4.0);

/// Gauss: a, b ∈ [0.1, 3], c − a − b ∈ [0.5, 4].
pub const GAUSS_UPPER: (f64, f64) = (0.1, 3.0);
pub const GAUSS_EXCESS: (f64, f64) = (0.5, 4.0);

/// Euler: a, b ∈ [0.1, 3], c ∈ [0.5, 5].
pub const EULER_UPPER: (f64, f64) = (0.1, 3.0);
pub const EULER_LOWER: (f64, f64) = (0.5, 5.0);
pub const EULER_X: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];

/// Integral representation: c ∈ [0.2, 2.5], e − c ∈ [0.3, 3], a, b ∈ [0.1, 2.5],
/// s ∈ [0.5, 3], d ≥ 0.3.
pub const INTEGRAL_C: (f64, f64) = (0.2, 2.5);
pub const INTEGRAL_GAP: (f64, f64) = (0.3, 3.0);
pub const INTEGRAL_UPPER: (f64, f64) = (0.1, 2.5);
pub const INTEGRAL_EXCESS: (f64, f64) = (0.5, 3.0);
pub const INTEGRAL_MIN_D: f64 = 0.3;

/// Proof chain: a ∈ [0.5, 2.5], b ∈ [0.1, 2.5], c ∈ [0.2, 2.5],
/// e − c ∈ [0.5, 3], s ∈ [0.5, 3], d − a ≥ 0.3.
pub const CHAIN_A: (f64, f64) = (0.5, 2.5);
pub const CHAIN_B: (f64, f64) = (0.1, 2.5);
pub const CHAIN_C: (f64, f64) = (0.2, 2.5);
pub const CHAIN_GAP: (f64, f64) = (0.5, 3.0);
pub const CHAIN_EXCESS: (f64, f64) = (0.5, 3.0);
pub const CHAIN_MIN_D_MINUS_A: f64 = 0.3;

/// Saalschütz: numerators in [−12, 12], denominators in [1, 8], n ≤ 20.
pub const SAALSCHUTZ_NUMER: (i64, i64) = (-12, 12);
pub const SAALSCHUTZ_DENOM: (i64, i64) = (1, 8);
pub const SAALSCHUTZ_MAX_N: u32 = 20;

/// Beta integral: α, β ∈ [0.2, 6].
pub const BETA_RANGE: (f64, f64) = (0.2, 6.0);

pub struct ParamSampler {
    rng: ChaCha8Rng,
}

impl ParamSampler {
    pub fn new(seed: u64) -> Self {
        ParamSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn uniform(&mut self, (lo, hi): (f64, f64)) -> f64 {
        self.rng.random_range(lo..=hi)
    }

    pub fn thomae(&mut self) -> Params3F2 {
        loop {
            let a = self.uniform(THOMAE_A);
            if a < THOMAE_MIN_TRANSFORMED_EXCESS {
                continue;
            }
            let b = self.uniform(UPPER);
            let c = self.uniform(UPPER);
            let s = self.uniform(EXCESS);
            let d = self.uniform(LOWER);
            let e = s + a + b + c - d;
            if e >= LOWER.0 {
                return Params3F2::new(a, b, c, d, e);
            }
        }
    }

    pub fn kummer(&mut self) -> Params3F2 {
        loop {
            let a = self.uniform(UPPER);
            let b = self.uniform(UPPER);
            let c = self.uniform(UPPER);
            let gap = self.uniform(KUMMER_GAP);
            let s = self.uniform(EXCESS);
            let e = c + gap;
            let d = s + a + b - gap;
            if d >= LOWER.0 {
                return Params3F2::new(a, b, c, d, e);
            }
        }
    }

    pub fn gauss(&mut self) -> Params2F1 {
        let a = self.uniform(GAUSS_UPPER);
        let b = self.uniform(GAUSS_UPPER);
        let s = self.uniform(GAUSS_EXCESS);
        Params2F1::new(a, b, a + b + s)
    }

    pub fn euler2(&mut self) -> Params2F1 {
        let a = self.uniform(EULER_UPPER);
        let b = self.uniform(EULER_UPPER);
        let c = self.uniform(EULER_LOWER);
        Params2F1::new(a, b, c)
    }

    pub fn integral(&mut self) -> Params3F2 {
        loop {
            let a = self.uniform(INTEGRAL_UPPER);
            let b = self.uniform(INTEGRAL_UPPER);
            let c = self.uniform(INTEGRAL_C);
            let gap = self.uniform(INTEGRAL_GAP);
            let s = self.uniform(INTEGRAL_EXCESS);
            let e = c + gap;
            let d = s + a + b - gap;
            if d >= INTEGRAL_MIN_D {
                return Params3F2::new(a, b, c, d, e);
            }
        }
    }

    pub fn chain(&mut self) -> Params3F2 {
        loop {
            let a = self.uniform(CHAIN_A);
            let b = self.uniform(CHAIN_B);
            let c = self.uniform(CHAIN_C);
            let gap = self.uniform(CHAIN_GAP);
            let s = self.uniform(CHAIN_EXCESS);
            let e = c + gap;
            let d = s + a + b - gap;
            if d - a >= CHAIN_MIN_D_MINUS_A {
                return Params3F2::new(a, b, c, d, e);
            }
        }
    }

    fn small_rational(&mut self) -> Rational {
        let p = self.rng.random_range(SAALSCHUTZ_NUMER.0..=SAALSCHUTZ_NUMER.1);
        let q = self.rng.random_range(SAALSCHUTZ_DENOM.0..=SAALSCHUTZ_DENOM.1);
        Rational::new(p, q)
    }

    /// (a, b, c) for which both sides of Saalschütz are defined for every
    /// n ≤ [`SAALSCHUTZ_MAX_N`]: neither c nor c − a − b is in {0, −1, …, −19}.
    pub fn saalschutz(&mut self) -> (Rational, Rational, Rational) {
        let bad = |r: &Rational| {
            r.as_nonpositive_integer()
                .is_some_and(|k| k < SAALSCHUTZ_MAX_N as u64)
        };
        loop {
            let a = self.small_rational();
            let b = self.small_rational();
            let c = self.small_rational();
            let cab = &(&c - &a) - &b;
            if !bad(&c) && !bad(&cab) {
                return (a, b, c);
            }
        }
    }

    pub fn beta(&mut self) -> (f64, f64) {
        (self.uniform(BETA_RANGE), self.uniform(BETA_RANGE))
    }
}
