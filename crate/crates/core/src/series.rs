//! Truncated formal power series over rationals.
//!
//! A [`TruncatedSeries`] stores the first `order` coefficients of a formal
//! series in `t`. It is the coefficient-extraction oracle for everything the
//! generating-function arguments claim: instead of a contour integral, the
//! n-th exponential coefficient is read off as `n! * a_n`. All arithmetic is
//! exact; results are truncated to the shorter operand.

use crate::error::{Error, Result};
use crate::rational::{factorial, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<Rational>,
}

impl TruncatedSeries {
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        Self { coeffs }
    }

    /// The series `1 + 0 t + ...` with `order` stored coefficients.
    pub fn one(order: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); order];
        if order > 0 {
            coeffs[0] = Rational::one();
        }
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![Rational::zero(); order],
        }
    }

    /// `exp(c t)`: coefficient of `t^n` is `c^n / n!`.
    pub fn exp_ct(c: &Rational, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order);
        let mut term = Rational::one();
        for n in 0..order {
            if n > 0 {
                term = term * c / Rational::from_int(n as i64);
            }
            coeffs.push(term.clone());
        }
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, i: usize) -> &Rational {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Cauchy product, truncated to the shorter operand.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut coeffs = vec![Rational::zero(); order];
        for (i, a) in self.coeffs.iter().enumerate().take(order) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order - i) {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] += &(a * b);
            }
        }
        Self { coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let coeffs = (0..order)
            .map(|i| &self.coeffs[i] + &other.coeffs[i])
            .collect();
        Self { coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let coeffs = (0..order)
            .map(|i| &self.coeffs[i] - &other.coeffs[i])
            .collect();
        Self { coeffs }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiplication by `t^k`: shifts coefficients up, dropping the tail.
    pub fn shift_mul_tk(&self, k: usize) -> Self {
        let order = self.order();
        let mut coeffs = vec![Rational::zero(); order];
        if k < order {
            coeffs[k..].clone_from_slice(&self.coeffs[..order - k]);
        }
        Self { coeffs }
    }

    /// Multiplicative inverse of a series with unit part, i.e. `a_0 != 0`.
    pub fn invert_unit(&self) -> Result<Self> {
        let a0 = self.coeffs.first().filter(|c| !c.is_zero());
        let a0 = a0.ok_or(Error::NonInvertibleSeries)?;
        let inv0 = a0.recip();
        let order = self.order();
        let mut coeffs = vec![Rational::zero(); order];
        coeffs[0] = inv0.clone();
        for n in 1..order {
            let mut acc = Rational::zero();
            for i in 1..=n {
                acc += &(&self.coeffs[i] * &coeffs[n - i]);
            }
            coeffs[n] = -(acc * &inv0);
        }
        Ok(Self { coeffs })
    }

    /// Integer power by repeated squaring; `k = 0` is the identity series.
    pub fn pow(&self, k: u32) -> Self {
        let mut result = Self::one(self.order());
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// The exponential-generating-function coefficient `n! * a_n`.
    /// This is the formal-residue read of the degree-n term.
    pub fn egf_coefficient(&self, n: usize) -> Result<Rational> {
        if n >= self.order() {
            return Err(Error::TruncationTooShort {
                n,
                order: self.order(),
            });
        }
        Ok(Rational::from_bigint(factorial(n as u32)) * &self.coeffs[n])
    }
}
