//! Dense complex polynomials and ratios of them, in the variable μ.

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

/// Coefficients in increasing degree: `c[0] + c[1] μ + …`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Poly(pub Vec<Complex64>);

impl Poly {
    pub fn constant(c: Complex64) -> Self {
        Poly(vec![c])
    }

    pub fn one() -> Self {
        Poly::constant(Complex64::new(1.0, 0.0))
    }

    /// `c0 + c1 μ`.
    pub fn linear(c0: Complex64, c1: Complex64) -> Self {
        Poly(vec![c0, c1])
    }

    pub fn degree(&self) -> usize {
        self.0.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }

    pub fn eval(&self, mu: Complex64) -> Complex64 {
        self.0.iter().rev().fold(Complex64::zero(), |acc, c| acc * mu + c)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![Complex64::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }

    pub fn scale(&self, s: Complex64) -> Poly {
        Poly(self.0.iter().map(|c| c * s).collect())
    }
}

/// `num(μ) / den(μ)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rational {
    pub num: Poly,
    pub den: Poly,
}

impl Rational {
    pub fn one() -> Self {
        Rational { num: Poly::one(), den: Poly::one() }
    }

    pub fn mul(&self, other: &Rational) -> Rational {
        Rational { num: self.num.mul(&other.num), den: self.den.mul(&other.den) }
    }

    pub fn eval(&self, mu: Complex64) -> Complex64 {
        self.num.eval(mu) / self.den.eval(mu)
    }

    pub fn degree(&self) -> usize {
        self.num.degree().max(self.den.degree())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn horner_and_convolution() {
        let p = Poly::linear(c(1.0, 0.0), c(0.0, 2.0));
        let q = Poly::linear(c(-3.0, 1.0), c(1.0, 0.0));
        let pq = p.mul(&q);
        assert_eq!(pq.degree(), 2);
        let mu = c(0.7, -1.3);
        assert!((pq.eval(mu) - p.eval(mu) * q.eval(mu)).norm() < 1e-14);
    }

    #[test]
    fn zero_leading_coefficients_do_not_count() {
        let p = Poly(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(p.degree(), 0);
    }
}
