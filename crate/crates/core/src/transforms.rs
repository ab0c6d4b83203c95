//! Two-term transformations of ₃F₂(1) and ₂F₁(x) as data, plus the Gauss and
//! Saalschütz closed forms.
//!
//! A [`Transformed3F2`] is a gamma-ratio prefactor together with a mapped
//! parameter set; nothing is evaluated until [`Transformed3F2::evaluate`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{gamma_ratio_eval, pochhammer_rational, GammaRatio, Rational};
use crate::error::{Error, Result};
use crate::series::{excess_2f1, excess_3f2, sum_3f2_unit, Params2F1, Params3F2, SeriesResult, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransformKind {
    Identity,
    Kummer,
    Thomae,
}

impl fmt::Display for TransformKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TransformKind::Identity => "identity",
            TransformKind::Kummer => "kummer",
            TransformKind::Thomae => "thomae",
        })
    }
}

/// prefactor × ₃F₂(params; 1)
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transformed3F2 {
    pub prefactor: GammaRatio,
    pub params: Params3F2,
    pub name: TransformKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformedValue {
    pub value: f64,
    pub prefactor: f64,
    pub series: SeriesResult,
}

impl Transformed3F2 {
    pub fn identity(p: &Params3F2) -> Self {
        Transformed3F2 {
            prefactor: GammaRatio::one(),
            params: *p,
            name: TransformKind::Identity,
        }
    }

    /// Excess of the mapped series; larger means faster term decay.
    pub fn excess(&self) -> f64 {
        excess_3f2(&self.params)
    }

    pub fn evaluate(&self, tol: &Tolerance) -> Result<TransformedValue> {
        let prefactor = gamma_ratio_eval(&self.prefactor)?;
        let series = sum_3f2_unit(&self.params, tol)?;
        Ok(TransformedValue {
            value: prefactor * series.value,
            prefactor,
            series,
        })
    }
}

/// (1 − x)^power_exponent × ₂F₁(params; x)
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Transformed2F1 {
    pub power_exponent: f64,
    pub params: Params2F1,
}

fn require(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::precondition(what))
    }
}

fn check_poles(r: &GammaRatio) -> Result<()> {
    match r.first_pole() {
        Some(arg) => Err(Error::Pole { arg }),
        None => Ok(()),
    }
}

/// Thomae: ₃F₂(a,b,c; d,e) = Γ(d)Γ(e)Γ(s)/(Γ(a)Γ(s+c)Γ(s+b)) · ₃F₂(d−a, e−a, s; s+c, s+b)
/// with s = d+e−a−b−c. Needs a > 0 and s > 0.
pub fn thomae_map(p: &Params3F2) -> Result<Transformed3F2> {
    let Params3F2 { a, b, c, d, e } = *p;
    let s = excess_3f2(p);
    require(a > 0.0, "a > 0")?;
    require(s > 0.0, "d + e - a - b - c > 0")?;
    let deab = d + e - a - b;
    let deac = d + e - a - c;
    let prefactor = GammaRatio::new(vec![d, e, s], vec![a, deab, deac]);
    check_poles(&prefactor)?;
    Ok(Transformed3F2 {
        prefactor,
        params: Params3F2::new(d - a, e - a, s, deab, deac),
        name: TransformKind::Thomae,
    })
}

/// Kummer: ₃F₂(a,b,c; d,e) = Γ(e)Γ(s)/(Γ(e−c)Γ(d+e−a−b)) · ₃F₂(d−a, d−b, c; d, d+e−a−b).
/// Needs e − c > 0 and s > 0.
pub fn kummer_map(p: &Params3F2) -> Result<Transformed3F2> {
    let Params3F2 { a, b, c, d, e } = *p;
    let s = excess_3f2(p);
    require(e - c > 0.0, "e - c > 0")?;
    require(s > 0.0, "d + e - a - b - c > 0")?;
    let deab = d + e - a - b;
    let prefactor = GammaRatio::new(vec![e, s], vec![e - c, deab]);
    check_poles(&prefactor)?;
    Ok(Transformed3F2 {
        prefactor,
        params: Params3F2::new(d - a, d - b, c, d, deab),
        name: TransformKind::Kummer,
    })
}

/// Euler: ₂F₁(a,b; c; x) = (1−x)^(c−a−b) ₂F₁(c−a, c−b; c; x).
pub fn euler_second_map(p: &Params2F1) -> Result<Transformed2F1> {
    if crate::arith::is_nonpositive_integer(p.c) {
        return Err(Error::LowerPole {
            param: p.c,
            index: (-p.c) as u64 + 1,
        });
    }
    Ok(Transformed2F1 {
        power_exponent: excess_2f1(p),
        params: Params2F1::new(p.c - p.a, p.c - p.b, p.c),
    })
}

/// Gauss: ₂F₁(a,b; c; 1) = Γ(c)Γ(c−a−b)/(Γ(c−a)Γ(c−b)) for c − a − b > 0.
pub fn gauss_sum(p: &Params2F1) -> Result<f64> {
    let s = excess_2f1(p);
    require(s > 0.0, "c - a - b > 0")?;
    gamma_ratio_eval(&GammaRatio::new(vec![p.c, s], vec![p.c - p.a, p.c - p.b]))
}

/// Saalschütz: ₃F₂(−n, a, b; c, 1+a+b−c−n; 1) = (c−a)ₙ(c−b)ₙ / ((c)ₙ(c−a−b)ₙ).
pub fn saalschutz_sum(n: u32, a: &Rational, b: &Rational, c: &Rational) -> Result<Rational> {
    let cab = &(c - a) - b;
    let den_c = pochhammer_rational(c, n);
    if den_c.is_zero() {
        return Err(Error::ZeroDenominator(format!("({c})_{n} = 0")));
    }
    let den_cab = pochhammer_rational(&cab, n);
    if den_cab.is_zero() {
        return Err(Error::ZeroDenominator(format!("({cab})_{n} = 0")));
    }
    let num = pochhammer_rational(&(c - a), n) * pochhammer_rational(&(c - b), n);
    Ok(num / (den_c * den_cab))
}

/// The terminating series whose value [`saalschutz_sum`] gives in closed form.
pub fn saalschutz_params(n: u32, a: &Rational, b: &Rational, c: &Rational) -> crate::series::RationalParams3F2 {
    let n_r = Rational::from_integer(n as i64);
    crate::series::RationalParams3F2 {
        a: -n_r.clone(),
        b: a.clone(),
        c: b.clone(),
        d: c.clone(),
        e: &(&(Rational::one() + a.clone()) + b) - &(c + &n_r),
    }
}

/// Picks, among identity, Kummer and Thomae, the valid rewrite with the largest
/// excess. Ties go to the earlier of identity, Kummer, Thomae.
pub fn choose_representation(p: &Params3F2) -> Result<Transformed3F2> {
    let s = excess_3f2(p);
    let mut best: Option<Transformed3F2> = (s > 0.0).then(|| Transformed3F2::identity(p));
    for candidate in [kummer_map(p), thomae_map(p)].into_iter().flatten() {
        let better = match &best {
            Some(b) => candidate.excess() > b.excess(),
            None => true,
        };
        if better {
            best = Some(candidate);
        }
    }
    best.ok_or(Error::NoValidRepresentation { excess: s })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::sum_3f2_terminating_exact;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-14 * b.abs().max(1.0)
    }

    fn close_params(p: &Params3F2, q: [f64; 5]) -> bool {
        [p.a, p.b, p.c, p.d, p.e]
            .iter()
            .zip(q)
            .all(|(&x, y)| close(x, y))
    }

    #[test]
    fn thomae_reference_point() {
        let p = Params3F2::new(0.5, 0.6, 0.7, 2.0, 2.5);
        let t = thomae_map(&p).unwrap();
        assert!(close_params(&t.params, [1.5, 2.0, 2.7, 3.4, 3.3]));
        assert_eq!(t.prefactor.numerator_args[..2], [2.0, 2.5]);
        assert!(close(t.prefactor.numerator_args[2], 2.7));
        assert_eq!(t.prefactor.denominator_args[0], 0.5);
        assert!(close(t.prefactor.denominator_args[1], 3.4));
        assert!(close(t.prefactor.denominator_args[2], 3.3));
        // mpmath: 0.14481645637432050818
        let pre = gamma_ratio_eval(&t.prefactor).unwrap();
        assert!((pre - 0.144_816_456_374_320_508).abs() < 1e-14);
        assert!((t.excess() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn thomae_fixed_point() {
        let p = Params3F2::new(1.0, 1.0, 1.0, 2.0, 2.0);
        let t = thomae_map(&p).unwrap();
        assert_eq!(t.params, p);
        assert_eq!(gamma_ratio_eval(&t.prefactor).unwrap(), 1.0);
    }

    #[test]
    fn thomae_preconditions() {
        let err = thomae_map(&Params3F2::new(-0.5, 0.6, 0.7, 2.0, 2.5)).unwrap_err();
        assert_eq!(err, Error::precondition("a > 0"));
        let err = thomae_map(&Params3F2::new(0.5, 0.75, 0.25, 1.0, 0.5)).unwrap_err();
        assert_eq!(err, Error::precondition("d + e - a - b - c > 0"));
        // d = −1 puts a pole in Γ(d)
        let err = thomae_map(&Params3F2::new(0.5, -3.0, -2.0, -1.0, 2.5)).unwrap_err();
        assert_eq!(err, Error::Pole { arg: -1.0 });
    }

    #[test]
    fn kummer_reference_point() {
        let p = Params3F2::new(0.5, 0.6, 0.7, 2.0, 2.5);
        let k = kummer_map(&p).unwrap();
        assert!(close_params(&k.params, [1.5, 1.4, 0.7, 2.0, 3.4]));
        assert_eq!(k.prefactor.numerator_args[0], 2.5);
        assert!(close(k.prefactor.numerator_args[1], 2.7));
        assert!(close(k.prefactor.denominator_args[0], 1.8));
        assert!(close(k.prefactor.denominator_args[1], 3.4));
        // mpmath: 0.73952975369400990713
        let pre = gamma_ratio_eval(&k.prefactor).unwrap();
        assert!((pre - 0.739_529_753_694_009_907).abs() < 1e-14);
        assert!((k.excess() - 1.8).abs() < 1e-12);
    }

    #[test]
    fn kummer_with_zero_upper_is_unity() {
        let p = Params3F2::new(0.4, 0.9, 0.0, 1.5, 2.5);
        let k = kummer_map(&p).unwrap();
        let v = k.evaluate(&Tolerance::default()).unwrap();
        assert!((v.value - 1.0).abs() < 1e-15);
        assert!((v.prefactor - 1.0).abs() < 1e-15);
    }

    #[test]
    fn kummer_preconditions() {
        let err = kummer_map(&Params3F2::new(0.1, 0.1, 4.0, 3.0, 2.0)).unwrap_err();
        assert_eq!(err, Error::precondition("e - c > 0"));
    }

    #[test]
    fn euler_examples() {
        let t = euler_second_map(&Params2F1::new(1.0, 1.0, 2.0)).unwrap();
        assert_eq!(t.power_exponent, 0.0);
        assert_eq!(t.params, Params2F1::new(1.0, 1.0, 2.0));
        let t = euler_second_map(&Params2F1::new(0.3, 0.4, 1.5)).unwrap();
        assert!(close(t.power_exponent, 0.8));
        assert!(close(t.params.a, 1.2) && close(t.params.b, 1.1) && t.params.c == 1.5);
        assert!(matches!(
            euler_second_map(&Params2F1::new(0.3, 0.4, -2.0)),
            Err(Error::LowerPole { .. })
        ));
    }

    #[test]
    fn euler_is_an_involution_on_exact_grid() {
        // multiples of 1/64 keep every subtraction exact
        for i in 0..40 {
            let p = Params2F1::new(
                (i * 7 % 190) as f64 / 64.0,
                (i * 13 % 170) as f64 / 64.0 - 0.5,
                (i * 11 % 300) as f64 / 64.0 + 0.25,
            );
            let once = euler_second_map(&p).unwrap();
            let twice = euler_second_map(&once.params).unwrap();
            assert_eq!(twice.params, p);
            assert_eq!(once.power_exponent + twice.power_exponent, 0.0);
        }
    }

    #[test]
    fn gauss_examples() {
        assert_eq!(gauss_sum(&Params2F1::new(0.37, 0.0, 2.9)).unwrap(), 1.0);
        assert!((gauss_sum(&Params2F1::new(1.0, 1.0, 3.0)).unwrap() - 2.0).abs() < 1e-15);
        let v = gauss_sum(&Params2F1::new(0.5, 0.5, 2.0)).unwrap();
        assert!((v - 4.0 / std::f64::consts::PI).abs() < 1e-14);
        assert!(matches!(
            gauss_sum(&Params2F1::new(1.0, 1.0, 2.0)),
            Err(Error::Precondition { .. })
        ));
        assert_eq!(
            gauss_sum(&Params2F1::new(5.0, -3.0, 3.0)),
            Err(Error::Pole { arg: -2.0 })
        );
    }

    #[test]
    fn saalschutz_examples() {
        let r = |n: i64, d: i64| Rational::new(n, d);
        assert_eq!(saalschutz_sum(0, &r(3, 7), &r(-2, 5), &r(9, 4)).unwrap(), Rational::one());
        assert_eq!(saalschutz_sum(1, &r(1, 1), &r(1, 1), &r(3, 1)).unwrap(), r(4, 3));
        let v = saalschutz_sum(2, &r(1, 2), &r(1, 2), &r(2, 1)).unwrap();
        assert_eq!(v, r(75, 64));
        let params = saalschutz_params(2, &r(1, 2), &r(1, 2), &r(2, 1));
        assert_eq!(params.e, r(-2, 1));
        assert_eq!(sum_3f2_terminating_exact(&params, 2).unwrap(), r(75, 64));
    }

    #[test]
    fn saalschutz_zero_denominator() {
        let r = |n: i64, d: i64| Rational::new(n, d);
        assert!(matches!(
            saalschutz_sum(3, &r(1, 2), &r(1, 3), &r(-1, 1)),
            Err(Error::ZeroDenominator(_))
        ));
        // c − a − b = −1
        assert!(matches!(
            saalschutz_sum(3, &r(1, 1), &r(1, 1), &r(1, 1)),
            Err(Error::ZeroDenominator(_))
        ));
    }

    #[test]
    fn chooser_examples() {
        let t = choose_representation(&Params3F2::new(1.0, 1.0, 1.0, 2.0, 2.0)).unwrap();
        assert_eq!(t.name, TransformKind::Identity);
        let t = choose_representation(&Params3F2::new(5.0, 0.2, 0.3, 3.0, 3.5)).unwrap();
        assert_eq!(t.name, TransformKind::Thomae);
        let t = choose_representation(&Params3F2::new(0.1, 0.1, 4.0, 3.0, 2.0)).unwrap();
        assert_eq!(t.name, TransformKind::Identity);
        assert!(matches!(
            choose_representation(&Params3F2::new(1.0, 1.0, 1.0, 1.0, 1.5)),
            Err(Error::NoValidRepresentation { .. })
        ));
    }

    #[test]
    fn chooser_prefers_kummer_on_tie_with_thomae() {
        // s = 0.5, e − c = 2 = a
        let p = Params3F2::new(2.0, 0.5, 1.0, 1.0, 3.0);
        let t = choose_representation(&p).unwrap();
        assert_eq!(t.name, TransformKind::Kummer);
    }
}
