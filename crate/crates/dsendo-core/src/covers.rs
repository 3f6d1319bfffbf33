//! Evaluation model of the elliptic torus and its double covers.
//!
//! A point `t ∈ X₊ ⊗ ℝ` stands for the cover element lying over `exp(2πit)`;
//! half-integral characters are evaluated canonically as `exp(2πi⟨λ, t⟩)`, so
//! `t` and `t + μ` (`μ ∈ X₊`) represent different cover points exactly when
//! some evaluated character detects the shift.

use crate::rootdata::{BasedRootDatum, PositiveSystem, Weight, WeylElement};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use thiserror::Error;

/// Name of the pseudo-random generator used for sampling, recorded in reports.
pub const PRNG_NAME: &str = "ChaCha8Rng (rand_chacha 0.9, seed_from_u64)";

/// Default minimal distance of `⟨α, t⟩` from the integers for sampled points.
pub const DEFAULT_WALL_MARGIN: f64 = 1e-3;

/// Errors of the evaluation model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoversError {
    #[error("cannot take the argument of zero")]
    ZeroArgument,
    #[error("torus point {t:?} is singular: <alpha, t> is an integer for the root {root:?}")]
    Irregular { t: Vec<f64>, root: Vec<i64> },
    #[error("weight {lambda} is not genuine: it does not differ from rho = {rho} by a character")]
    NotGenuine { lambda: String, rho: String },
}

/// A point of the elliptic torus (or of a cover of it) in angle coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusPoint {
    pub t: Vec<f64>,
}

impl TorusPoint {
    pub fn new(t: Vec<f64>) -> Self {
        Self { t }
    }

    /// `w·t`.
    pub fn act(&self, w: &WeylElement) -> Self {
        Self { t: w.act_real(&self.t) }
    }

    /// `t + μ` for a cocharacter `μ ∈ X₊` (the deck action on covers).
    pub fn shift(&self, mu: &[i64]) -> Self {
        Self {
            t: self.t.iter().zip(mu).map(|(a, &b)| a + b as f64).collect(),
        }
    }

    /// `⟨α, t⟩` for an integral character.
    pub fn pair(&self, alpha: &[i64]) -> f64 {
        alpha.iter().zip(&self.t).map(|(&a, x)| a as f64 * x).sum()
    }

    /// `min_α dist(⟨α, t⟩, ℤ)` over the roots of the datum (∞ for the empty system).
    pub fn wall_distance(&self, datum: &BasedRootDatum) -> f64 {
        datum
            .roots
            .iter()
            .map(|a| {
                let x = self.pair(a);
                (x - x.round()).abs()
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Regular means no root takes an integral value.
    pub fn is_regular(&self, datum: &BasedRootDatum) -> bool {
        self.wall_distance(datum) > 0.0
    }

    fn check_regular(&self, datum: &BasedRootDatum) -> Result<(), CoversError> {
        for a in &datum.roots {
            let x = self.pair(a);
            if x == x.round() {
                return Err(CoversError::Irregular {
                    t: self.t.clone(),
                    root: a.clone(),
                });
            }
        }
        Ok(())
    }
}

/// A genuine character of the `ρ`-cover: `λ ∈ ρ + X*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenuineCharacter {
    pub lambda: Weight,
    pub genuineness_shift: Weight,
}

impl GenuineCharacter {
    /// Checks `λ − ρ ∈ X*`.
    pub fn new(lambda: Weight, rho: Weight) -> Result<Self, CoversError> {
        if !lambda.sub(&rho).is_integral() {
            return Err(CoversError::NotGenuine {
                lambda: lambda.to_string(),
                rho: rho.to_string(),
            });
        }
        Ok(Self {
            lambda,
            genuineness_shift: rho,
        })
    }

    pub fn eval(&self, t: &TorusPoint) -> Complex64 {
        eval_char(&self.lambda, t)
    }
}

/// `exp(2πi⟨λ, t⟩)`.
pub fn eval_char(lambda: &Weight, t: &TorusPoint) -> Complex64 {
    eval_char_f64(&lambda.to_f64(), t)
}

/// `exp(2πi⟨λ, t⟩)` for a weight already converted to floating point.
pub fn eval_char_f64(lambda: &[f64], t: &TorusPoint) -> Complex64 {
    let x: f64 = lambda.iter().zip(&t.t).map(|(a, b)| a * b).sum();
    Complex64::from_polar(1.0, 2.0 * PI * x)
}

/// `D_B(t) = ∏_{α>0} (e^{πi⟨α,t⟩} − e^{−πi⟨α,t⟩}) = ∏_{α>0} 2i·sin(π⟨α,t⟩)`.
pub fn weyl_denominator(datum: &BasedRootDatum, ps: &PositiveSystem, t: &TorusPoint) -> Complex64 {
    ps.positive_roots()
        .into_iter()
        .map(|i| Complex64::new(0.0, 2.0 * (PI * t.pair(&datum.roots[i])).sin()))
        .product()
}

/// `|D_T(t)| = ∏_{all α} |1 − exp(2πi⟨α, t⟩)|`.
pub fn torus_discriminant(datum: &BasedRootDatum, t: &TorusPoint) -> f64 {
    datum
        .roots
        .iter()
        .map(|a| (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, 2.0 * PI * t.pair(a))).norm())
        .product()
}

/// `z / |z|`.
pub fn arg_unit(z: Complex64) -> Result<Complex64, CoversError> {
    let r = z.norm();
    if r == 0.0 {
        return Err(CoversError::ZeroArgument);
    }
    Ok(z / r)
}

/// `d_B(t) = arg D_B(t)`, computed factor by factor so that no underflow can
/// occur near walls.
pub fn d_arg(datum: &BasedRootDatum, ps: &PositiveSystem, t: &TorusPoint) -> Result<Complex64, CoversError> {
    t.check_regular(datum)?;
    let mut out = Complex64::new(1.0, 0.0);
    for i in ps.positive_roots() {
        let z = Complex64::new(0.0, 2.0 * (PI * t.pair(&datum.roots[i])).sin());
        out *= arg_unit(z)?;
    }
    Ok(out)
}

/// Draws `n` points uniformly from the angle cube `[0, 1)^rank`, rejecting
/// points closer than `margin` to a wall of the datum.
pub fn sample_regular_points(datum: &BasedRootDatum, n: usize, seed: u64, margin: f64) -> Vec<TorusPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let t: Vec<f64> = (0..datum.rank).map(|_| rng.random::<f64>()).collect();
        let p = TorusPoint::new(t);
        if p.wall_distance(datum) >= margin {
            out.push(p);
        }
    }
    out
}

/// Draws `n` points at distance exactly about `margin` from a randomly chosen
/// wall: a regular sample is moved along the coroot direction of a root until
/// that root takes the value `k + margin`.
pub fn sample_near_walls(datum: &BasedRootDatum, n: usize, seed: u64, margin: f64) -> Vec<TorusPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    if datum.roots.is_empty() {
        return sample_regular_points(datum, n, seed, 0.0);
    }
    while out.len() < n {
        let t: Vec<f64> = (0..datum.rank).map(|_| rng.random::<f64>()).collect();
        let i = rng.random_range(0..datum.roots.len());
        let (a, c) = (&datum.roots[i], &datum.coroots[i]);
        let p = TorusPoint::new(t);
        let x = p.pair(a);
        // ⟨α, t + sα∨⟩ = x + 2s; choose s to land at round(x) + margin.
        let s = (x.round() + margin - x) / 2.0;
        let q = TorusPoint::new(p.t.iter().zip(c).map(|(v, &k)| v + s * k as f64).collect());
        if q.wall_distance(datum) >= 0.5 * margin {
            out.push(q);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::{rho, Q};

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn characters() {
        let t = TorusPoint::new(vec![0.25]);
        assert!(close(eval_char(&Weight::zero(1), &t), Complex64::new(1.0, 0.0)));
        assert!(close(eval_char(&Weight::from_ints(&[1]), &t), Complex64::new(0.0, 1.0)));
    }

    #[test]
    fn a1_denominator() {
        let d = BasedRootDatum::family("A1-sc").unwrap();
        let ps = d.based_positive_system();
        let t = TorusPoint::new(vec![0.25]);
        assert!(close(weyl_denominator(&d, &ps, &t), Complex64::new(0.0, 2.0)));
        assert!(close(d_arg(&d, &ps, &t).unwrap(), Complex64::new(0.0, 1.0)));
        assert!(weyl_denominator(&d, &ps, &TorusPoint::new(vec![0.5])).norm() < 1e-12);
        assert!(matches!(d_arg(&d, &ps, &TorusPoint::new(vec![0.5])), Err(CoversError::Irregular { .. })));
    }

    #[test]
    fn arg_values() {
        assert!(close(arg_unit(Complex64::new(0.0, 2.0)).unwrap(), Complex64::new(0.0, 1.0)));
        assert!(close(arg_unit(Complex64::new(-3.0, 0.0)).unwrap(), Complex64::new(-1.0, 0.0)));
        assert_eq!(arg_unit(Complex64::new(0.0, 0.0)), Err(CoversError::ZeroArgument));
    }

    #[test]
    fn genuineness() {
        let d = BasedRootDatum::family("A1-adj").unwrap();
        let r = rho(&d, &d.based_positive_system());
        assert!(GenuineCharacter::new(Weight(vec![Q::new(3, 2)]), r.clone()).is_ok());
        assert!(GenuineCharacter::new(Weight::from_ints(&[1]), r.clone()).is_err());
        let d = BasedRootDatum::family("A1-sc").unwrap();
        let r = rho(&d, &d.based_positive_system());
        assert!(GenuineCharacter::new(Weight::from_ints(&[2]), r).is_ok());
    }

    #[test]
    fn sampling_is_deterministic_and_respects_margin() {
        let d = BasedRootDatum::family("C2-sc").unwrap();
        let a = sample_regular_points(&d, 50, 7, 1e-3);
        let b = sample_regular_points(&d, 50, 7, 1e-3);
        assert_eq!(a, b);
        assert!(a.iter().all(|p| p.wall_distance(&d) >= 1e-3));
        let near = sample_near_walls(&d, 50, 7, 1e-6);
        assert!(near.iter().all(|p| p.wall_distance(&d) < 2e-6 && p.is_regular(&d)));
    }
}
