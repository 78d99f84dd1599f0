//! Second-kind Stirling numbers, higher-order Bernoulli numbers and
//! polynomials, the shift-difference and q-difference operators, and
//! q-Stirling numbers.
//!
//! Everything here is triple-sourced on purpose. Stirling numbers come from
//! the triangular recurrence, from the finite-difference formula
//! `S(n,k) = Delta^k 0^n / k!`, and from the series `(e^t-1)^k / k!`; the
//! q-Stirling numbers come from a finite q-binomial sum and from a linear
//! combination of exponential series. The agreement of independant paths is
//! what the verify suites assert.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::bernstein::moment_identity;
use crate::error::{Error, Result};
use crate::qnum::{gaussian_binomial, q_factorial, q_int, QPoint};
use crate::rational::{binomial, factorial, Rational};
use crate::series::TruncatedSeries;

/// Triangle of second-kind Stirling numbers `S(n,k)` for `0 <= k <= n <=
/// max_n`, built by `S(n,k) = k S(n-1,k) + S(n-1,k-1)`.
#[derive(Clone, Debug)]
pub struct StirlingTable {
    max_n: u32,
    entries: Vec<Vec<Rational>>,
}

impl StirlingTable {
    pub fn max_n(&self) -> u32 {
        self.max_n
    }

    /// `S(n,k)`; zero outside the triangle.
    pub fn get(&self, n: u32, k: u32) -> Rational {
        if n > self.max_n || k > n {
            return Rational::zero();
        }
        self.entries[n as usize][k as usize].clone()
    }
}

/// Builds the full Stirling triangle up to `max_n` by the recurrence.
pub fn stirling2_recurrence(max_n: u32) -> StirlingTable {
    let mut entries: Vec<Vec<Rational>> = Vec::with_capacity((max_n + 1) as usize);
    for n in 0..=(max_n as usize) {
        let mut row = vec![Rational::zero(); n + 1];
        if n == 0 {
            row[0] = Rational::one();
        } else {
            for k in 1..=n {
                let keep = Rational::from_int(k as i64)
                    * &entries[n - 1]
                        .get(k)
                        .cloned()
                        .unwrap_or_else(Rational::zero);
                let carry = entries[n - 1][k - 1].clone();
                row[k] = keep + carry;
            }
        }
        entries.push(row);
    }
    StirlingTable { max_n, entries }
}

/// `S(n,k) = Delta^k 0^n / k!` via the alternating finite-difference sum
/// `(1/k!) sum_l C(k,l) (-1)^{k-l} l^n` (with the `0^0 = 1` convention).
pub fn stirling2_difference(n: u32, k: u32) -> Rational {
    let mut acc = BigInt::zero();
    for l in 0..=k {
        let base = BigInt::from(l);
        let power = if n == 0 && l == 0 {
            BigInt::one()
        } else {
            base.pow(n)
        };
        let term = binomial(k, l) * power;
        if (k - l) % 2 == 1 {
            acc -= term;
        } else {
            acc += term;
        }
    }
    Rational::from_bigint(acc) / Rational::from_bigint(factorial(k))
}

/// `S(n,k)` as the degree-n exponential coefficient of `(e^t-1)^k / k!`.
pub fn stirling2_series_oracle(n: u32, k: u32) -> Rational {
    let order = (n + 1) as usize;
    let em1 = TruncatedSeries::exp_ct(&Rational::one(), order).sub(&TruncatedSeries::one(order));
    let series = em1
        .pow(k)
        .scale(&Rational::from_bigint(factorial(k)).recip());
    series
        .egf_coefficient(n as usize)
        .expect("order is n + 1 by construction")
}

/// Bell numbers `B_0..B_max_n` by the Bell-triangle recurrence; an
/// independent cross-check for Stirling row sums.
pub fn bell_numbers(max_n: u32) -> Vec<BigInt> {
    let mut bells = vec![BigInt::one()];
    let mut row = vec![BigInt::one()];
    for _ in 1..=max_n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(row.last().expect("rows are nonempty").clone());
        for entry in &row {
            let previous = next.last().expect("pushed above").clone();
            next.push(previous + entry);
        }
        // Bell(n) heads row n of the triangle
        bells.push(next.first().expect("nonempty").clone());
        row = next;
    }
    bells
}

/// Higher-order Bernoulli numbers `B_n^{(k)}` for `n <= max_n`: the
/// exponential coefficients of `(t/(e^t-1))^k`.
#[derive(Clone, Debug)]
pub struct BernoulliOrderTable {
    order: u32,
    numbers: Vec<Rational>,
}

impl BernoulliOrderTable {
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn max_n(&self) -> u32 {
        (self.numbers.len() - 1) as u32
    }

    /// `B_n^{(k)}`.
    pub fn get(&self, n: u32) -> &Rational {
        &self.numbers[n as usize]
    }
}

/// Builds `B_n^{(k)}` by inverting `(e^t-1)/t` and raising to the k-th
/// power; exact throughout.
pub fn bernoulli_order(k: u32, max_n: u32) -> BernoulliOrderTable {
    let order = (max_n + 1) as usize;
    // (e^t - 1)/t has coefficient 1/(i+1)! at t^i
    let expm1_over_t = TruncatedSeries::from_coeffs(
        (0..order)
            .map(|i| Rational::from_bigint(factorial(i as u32 + 1)).recip())
            .collect(),
    );
    let kernel = expm1_over_t
        .invert_unit()
        .expect("constant term is 1")
        .pow(k);
    let numbers = (0..order)
        .map(|n| {
            kernel
                .egf_coefficient(n)
                .expect("n < order by construction")
        })
        .collect();
    BernoulliOrderTable { order: k, numbers }
}

/// Polynomial value `B_n^{(k)}(y) = sum_j C(n,j) B_j^{(k)} y^{n-j}`, the
/// shift of the number sequence by `e^{yt}`.
pub fn bernoulli_order_poly(k: u32, n: u32, y: &Rational) -> Rational {
    let table = bernoulli_order(k, n);
    bernoulli_poly_from_table(&table, n, y)
}

/// Same shift evaluated from a precomputed table (for sweeps).
pub fn bernoulli_poly_from_table(table: &BernoulliOrderTable, n: u32, y: &Rational) -> Rational {
    assert!(n <= table.max_n(), "table too short for degree {n}");
    let mut acc = Rational::zero();
    for j in 0..=n {
        acc += &(Rational::from_bigint(binomial(n, j)) * table.get(j) * y.pow((n - j) as i64));
    }
    acc
}

/// Bernoulli-Stirling decomposition of the modified basis:
/// `B_{k,l}(x,q) = [x]_q^k sum_{n=0}^l B_n^{(k)}([1-x]_q) C(l,n) S(l-n,k)`.
/// Vanishes for `l < k` and reproduces the closed form otherwise.
pub fn qbern_via_bernoulli(k: u32, l: u32, p: &QPoint) -> Rational {
    let table = bernoulli_order(k, l);
    let y = p.q_complement();
    let mut acc = Rational::zero();
    for n in 0..=l {
        acc += &(bernoulli_poly_from_table(&table, n, &y)
            * Rational::from_bigint(binomial(l, n))
            * stirling2_difference(l - n, k));
    }
    p.q_number().pow(k as i64) * acc
}

/// Applies the q-difference operator product `prod_{i=0}^{n-1} (E - q^i I)`
/// to the value table `f(0), f(1), ..` and evaluates at 0. `f_values` must
/// supply `f(0..=n)`.
pub fn q_difference_at_zero(f_values: &[Rational], n: u32, q: &Rational) -> Result<Rational> {
    let needed = (n + 1) as usize;
    if f_values.len() < needed {
        return Err(Error::InsufficientSamples {
            needed: n as usize,
            got: f_values.len(),
        });
    }
    let mut table = f_values[..needed].to_vec();
    for i in 0..n {
        let scale = q.pow(i as i64);
        // (E - q^i I) g at argument j is g(j+1) - q^i g(j)
        for j in 0..table.len() - 1 {
            table[j] = &table[j + 1] - &(&scale * &table[j]);
        }
        table.pop();
    }
    Ok(table.into_iter().next().expect("n+1 values shrank to 1"))
}

/// q-Stirling number from the finite sum
/// `S(n,k:q) = q^{-C(k,2)}/[k]_q! sum_j (-1)^j q^{C(j,2)} C(k,j)_q [k-j]_q^n`.
pub fn q_stirling(n: u32, k: u32, q: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for j in 0..=k {
        let mut term =
            q.pow(choose2(j)) * gaussian_binomial(k, j, q) * q_int(k - j, q).pow(n as i64);
        if j % 2 == 1 {
            term = -term;
        }
        acc += &term;
    }
    q.pow(-choose2(k)) / q_factorial(k, q) * acc
}

/// The same number read off the generating function: the degree-n
/// exponential coefficient of
/// `q^{-C(k,2)}/[k]_q! sum_j (-1)^{k-j} C(k,j)_q q^{C(k-j,2)} e^{[j]_q t}`.
pub fn q_stirling_series_oracle(n: u32, k: u32, q: &Rational) -> Rational {
    let order = (n + 1) as usize;
    let mut combined = TruncatedSeries::zero(order);
    for j in 0..=k {
        let mut weight = gaussian_binomial(k, j, q) * q.pow(choose2(k - j));
        if (k - j) % 2 == 1 {
            weight = -weight;
        }
        combined = combined.add(&TruncatedSeries::exp_ct(&q_int(j, q), order).scale(&weight));
    }
    let scale = q.pow(-choose2(k)) / q_factorial(k, q);
    scale
        * combined
            .egf_coefficient(n as usize)
            .expect("order is n + 1 by construction")
}

/// Floating-path q-Stirling number for q -> 1 sweeps.
pub fn q_stirling_f64(n: u32, k: u32, q: f64) -> f64 {
    let qint = |m: u32| (0..m).map(|i| q.powi(i as i32)).sum::<f64>();
    let qfact = |m: u32| (1..=m).map(qint).product::<f64>();
    let gauss = |nn: u32, kk: u32| qfact(nn) / (qfact(kk) * qfact(nn - kk));
    let c2 = |m: u32| (m as i32 * (m as i32 - 1)) / 2;
    let mut acc = 0.0;
    for j in 0..=k {
        let sign = if j % 2 == 1 { -1.0 } else { 1.0 };
        acc += sign * q.powi(c2(j)) * gauss(k, j) * qint(k - j).powi(n as i32);
    }
    q.powi(-c2(k)) / qfact(k) * acc
}

/// Table of q-Stirling numbers at a fixed q.
#[derive(Clone, Debug)]
pub struct QStirlingTable {
    q: Rational,
    max_n: u32,
    entries: Vec<Vec<Rational>>,
}

impl QStirlingTable {
    pub fn build(q: Rational, max_n: u32) -> Self {
        let entries = (0..=max_n)
            .map(|n| (0..=n).map(|k| q_stirling(n, k, &q)).collect())
            .collect();
        Self { q, max_n, entries }
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    /// `S(n,k:q)`; zero outside the triangle.
    pub fn get(&self, n: u32, k: u32) -> Rational {
        if n > self.max_n || k > n {
            return Rational::zero();
        }
        self.entries[n as usize][k as usize].clone()
    }
}

/// Power-basis expansion
/// `[x]_q^i = sum_{k=0}^i q^{C(k,2)} C(x,k)_q [k]_q! S(i,k:q)`.
pub fn q_power_expansion(i: u32, p: &QPoint) -> Rational {
    let q = p.q();
    let mut acc = Rational::zero();
    for k in 0..=i {
        acc += &(q.pow(choose2(k)) * p.q_x_binomial(k) * q_factorial(k, q) * q_stirling(i, k, q));
    }
    acc
}

/// Evaluates the moment identity and the power expansion side by side; both
/// reduce to `[x]_q^i`, so the pair must be equal.
pub fn theorem8_check(i: u32, n: u32, p: &QPoint) -> Result<(Rational, Rational)> {
    let moment = moment_identity(i, n, p)?;
    let power = q_power_expansion(i, p);
    Ok((moment, power))
}

fn choose2(m: u32) -> i64 {
    (m as i64) * (m as i64 - 1) / 2
}
