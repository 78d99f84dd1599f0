//! q-numbers, q-factorials, and Gaussian binomial coefficients, evaluated
//! exactly at rational points.
//!
//! The central trick is the evaluation point: instead of carrying `x`
//! directly (for which `q^x` is usually irrational), a [`QPoint`] stores the
//! pair `(q, X)` with `X = q^x`, both rational. Every quantity the basis
//! polynomials are built from — `[x]_q`, `[1-x]_q = (1 - q/X)/(1-q)`,
//! `[x-j]_q = (1 - X q^{-j})/(1-q)` — is then a rational function of `q` and
//! `X`, so identity checks run with zero tolerance.
//!
//! The floating path ([`FloatPoint`]) carries `(q, x)` directly and computes
//! `q^x = exp(x ln q)`; it exists for the derivative formula and the q -> 1
//! limits, where transcendentals are unavoidable.

use crate::error::{Error, Result};
use crate::rational::Rational;

/// An exact evaluation point `(q, X)` with `X = q^x` for an implicit
/// `x` in `[0,1]`, hence `0 < q < 1` and `q <= X <= 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoint {
    q: Rational,
    x_pow: Rational,
}

impl QPoint {
    pub fn new(q: Rational, x_pow: Rational) -> Result<Self> {
        check_q(&q)?;
        if x_pow < q || x_pow > Rational::one() {
            return Err(Error::PointOutOfRange {
                q: q.to_string(),
                x: x_pow.to_string(),
            });
        }
        Ok(Self { q, x_pow })
    }

    /// Convenience constructor from small integer fractions.
    pub fn from_ints(q_num: i64, q_den: i64, x_num: i64, x_den: i64) -> Result<Self> {
        Self::new(Rational::new(q_num, q_den)?, Rational::new(x_num, x_den)?)
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    /// The stored value of `q^x`.
    pub fn x_pow(&self) -> &Rational {
        &self.x_pow
    }

    /// `[x]_q = (1 - q^x) / (1 - q)`. Lies in `[0, 1]`.
    pub fn q_number(&self) -> Rational {
        let one = Rational::one();
        (&one - &self.x_pow) / (&one - &self.q)
    }

    /// `[1-x]_q = (1 - q^{1-x}) / (1 - q)` with `q^{1-x} = q / X`.
    /// Lies in `[0, 1]` and satisfies `[1-x]_q = 1 - (q/X) [x]_q`.
    pub fn q_complement(&self) -> Rational {
        let one = Rational::one();
        (&one - &(&self.q / &self.x_pow)) / (&one - &self.q)
    }

    /// `[x-j]_q = (1 - X q^{-j}) / (1 - q)`; negative once `j >= 1` and
    /// `x < j`.
    pub fn q_shifted(&self, j: u32) -> Rational {
        let one = Rational::one();
        (&one - &(&self.x_pow * &self.q.pow(-(j as i64)))) / (&one - &self.q)
    }

    /// The point for `1 - x`, i.e. `(q, q/X)`. An involution.
    pub fn reflect(&self) -> QPoint {
        QPoint {
            q: self.q.clone(),
            x_pow: &self.q / &self.x_pow,
        }
    }

    /// `[x choose k]_q = [x]_q [x-1]_q ... [x-k+1]_q / [k]_q!`.
    pub fn q_x_binomial(&self, k: u32) -> Rational {
        let mut prod = Rational::one();
        for j in 0..k {
            prod = prod * self.q_shifted(j);
        }
        prod / q_factorial(k, &self.q)
    }
}

/// A floating evaluation point `(q, x)` with `0 < q < 1`, `0 <= x <= 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FloatPoint {
    q: f64,
    x: f64,
}

impl FloatPoint {
    pub fn new(q: f64, x: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::QOutOfRange(q.to_string()));
        }
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::XOutOfRange(x.to_string()));
        }
        Ok(Self { q, x })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    /// `q^x` via `exp(x ln q)`.
    pub fn q_pow_x(&self) -> f64 {
        (self.x * self.q.ln()).exp()
    }

    pub fn q_pow_1mx(&self) -> f64 {
        ((1.0 - self.x) * self.q.ln()).exp()
    }

    pub fn q_number(&self) -> f64 {
        (1.0 - self.q_pow_x()) / (1.0 - self.q)
    }

    pub fn q_complement(&self) -> f64 {
        (1.0 - self.q_pow_1mx()) / (1.0 - self.q)
    }
}

fn check_q(q: &Rational) -> Result<()> {
    if q <= &Rational::zero() || q >= &Rational::one() {
        return Err(Error::QOutOfRange(q.to_string()));
    }
    Ok(())
}

/// `[n]_q = 1 + q + ... + q^{n-1}` for integer `n >= 0`; `[0]_q = 0`.
pub fn q_int(n: u32, q: &Rational) -> Rational {
    let mut acc = Rational::zero();
    let mut pow = Rational::one();
    for _ in 0..n {
        acc += &pow;
        pow *= q;
    }
    acc
}

/// `[k]_q! = [k]_q [k-1]_q ... [1]_q`; empty product is 1.
pub fn q_factorial(k: u32, q: &Rational) -> Rational {
    (1..=k).map(|i| q_int(i, q)).product()
}

/// Gaussian binomial coefficient, built by the q-Pascal recurrence
/// `C(n,k)_q = C(n-1,k-1)_q + q^k C(n-1,k)_q` with `C(n,0)_q = 1`.
/// Zero when `k > n`.
pub fn gaussian_binomial(n: u32, k: u32, q: &Rational) -> Rational {
    if k > n {
        return Rational::zero();
    }
    // row[j] holds C(m,j)_q while m ascends
    let mut row = vec![Rational::zero(); (k + 1) as usize];
    row[0] = Rational::one();
    for _m in 1..=n {
        for j in (1..=(k as usize)).rev() {
            let shifted = q.pow(j as i64) * &row[j];
            row[j] = &row[j - 1] + &shifted;
        }
    }
    row[k as usize].clone()
}

/// The factorial-quotient form `[n]_q! / ([k]_q! [n-k]_q!)`, kept as an
/// independent cross-check of the recurrence path.
pub fn gaussian_binomial_factorial(n: u32, k: u32, q: &Rational) -> Rational {
    if k > n {
        return Rational::zero();
    }
    q_factorial(n, q) / (q_factorial(k, q) * q_factorial(n - k, q))
}

/// Exact binomial coefficient re-exported alongside its q-analogue.
pub use crate::rational::binomial;

/// Sums the first `n` powers of q in floating point, for q -> 1 sweeps.
pub fn gaussian_binomial_f64(n: u32, k: u32, q: f64) -> f64 {
    if k > n {
        return 0.0;
    }
    let qint = |m: u32| (0..m).map(|i| q.powi(i as i32)).sum::<f64>();
    let qfact = |m: u32| (1..=m).map(qint).product::<f64>();
    qfact(n) / (qfact(k) * qfact(n - k))
}
