//! Classical and modified q-Bernstein bases, the sampled-function operator,
//! and the recurrence / symmetry / expansion identities they satisfy.
//!
//! The modified basis is `B_{k,n}(x,q) = C(n,k) [x]_q^k [1-x]_q^{n-k}`,
//! evaluated exactly at a [`QPoint`]. Each identity in this module comes in
//! two independently computed sides, so tests and the verify suites can
//! assert equality with zero tolerance. The only floating-point entry points
//! are the derivative formula (which needs `ln q`) and the q -> 1 limit
//! sweeps.

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::qnum::{FloatPoint, QPoint};
use crate::rational::{binomial, factorial, Rational};
use crate::series::TruncatedSeries;

/// A basis value together with the indices and point that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisValue {
    pub k: u32,
    pub n: u32,
    pub point: QPoint,
    pub value: Rational,
}

impl BasisValue {
    pub fn compute(k: u32, n: u32, point: QPoint) -> Self {
        let value = q_basis(k, n, &point);
        Self { k, n, point, value }
    }
}

/// A function sampled on the uniform grid `j/n`, `j = 0..=n`, used by the
/// operator. Entry `j` holds `f(j/n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledFunction {
    samples: Vec<Rational>,
}

impl SampledFunction {
    /// `samples.len()` must be `n + 1`; the degree is implied by the length.
    pub fn new(samples: Vec<Rational>) -> Self {
        assert!(!samples.is_empty(), "need at least the sample f(0)");
        Self { samples }
    }

    /// Samples of `f(x) = x` on the grid, i.e. `f(j/n) = j/n`.
    pub fn identity(n: u32) -> Self {
        assert!(n >= 1, "identity samples need n >= 1");
        let samples = (0..=n)
            .map(|j| Rational::new(j as i64, n as i64).expect("n >= 1"))
            .collect();
        Self { samples }
    }

    /// The constant function `f = c`.
    pub fn constant(n: u32, c: Rational) -> Self {
        Self {
            samples: vec![c; (n + 1) as usize],
        }
    }

    pub fn degree(&self) -> u32 {
        (self.samples.len() - 1) as u32
    }

    pub fn samples(&self) -> &[Rational] {
        &self.samples
    }
}

/// Classical Bernstein basis `C(n,k) x^k (1-x)^{n-k}`; zero for `k > n`.
pub fn classical_basis(k: u32, n: u32, x: &Rational) -> Result<Rational> {
    if x < &Rational::zero() || x > &Rational::one() {
        return Err(Error::XOutOfRange(x.to_string()));
    }
    if k > n {
        return Ok(Rational::zero());
    }
    let one_minus = &Rational::one() - x;
    Ok(Rational::from_bigint(binomial(n, k)) * x.pow(k as i64) * one_minus.pow((n - k) as i64))
}

/// Modified q-Bernstein basis `C(n,k) [x]_q^k [1-x]_q^{n-k}`; zero for
/// `n < k`.
pub fn q_basis(k: u32, n: u32, p: &QPoint) -> Rational {
    if k > n {
        return Rational::zero();
    }
    Rational::from_bigint(binomial(n, k))
        * p.q_number().pow(k as i64)
        * p.q_complement().pow((n - k) as i64)
}

/// The same value read off the generating function: the degree-n
/// exponential coefficient of `([x]_q t)^k / k! * e^{[1-x]_q t}`. Must agree
/// with [`q_basis`] exactly.
pub fn q_basis_oracle(k: u32, n: u32, p: &QPoint) -> Rational {
    let order = (n + 1) as usize;
    let scale = p.q_number().pow(k as i64) / Rational::from_bigint(factorial(k));
    let series = TruncatedSeries::exp_ct(&p.q_complement(), order)
        .shift_mul_tk(k as usize)
        .scale(&scale);
    series
        .egf_coefficient(n as usize)
        .expect("order is n + 1 by construction")
}

/// Degree-raising recurrence
/// `[1-x]_q B_{k,n-1} + [x]_q B_{k-1,n-1}`; equals `B_{k,n}`.
pub fn additive_recurrence(k: u32, n: u32, p: &QPoint) -> Rational {
    assert!(n >= 1, "recurrence needs n >= 1");
    let lower = p.q_complement() * q_basis(k, n - 1, p);
    if k == 0 {
        lower
    } else {
        lower + p.q_number() * q_basis(k - 1, n - 1, p)
    }
}

/// Closed form of the basis sum: `(1 + (1-q) [x]_q [1-x]_q)^n`. Equals both
/// the literal sum over k and `([x]_q + [1-x]_q)^n`.
pub fn sum_basis(n: u32, p: &QPoint) -> Rational {
    sum_basis_closed_form(n, p, false)
}

/// Internal form with an optional sign fault used by the verify failure
/// path: flipping the sign factor to (q-1) breaks the identity on purpose.
pub fn sum_basis_closed_form(n: u32, p: &QPoint, flip_sign: bool) -> Rational {
    let sign = if flip_sign {
        p.q() - &Rational::one()
    } else {
        &Rational::one() - p.q()
    };
    let base = Rational::one() + sign * p.q_number() * p.q_complement();
    base.pow(n as i64)
}

/// Applies the operator `f -> sum_j f(j/n) B_{j,n}(x,q)` exactly.
pub fn operator_apply(f: &SampledFunction, p: &QPoint) -> Rational {
    let n = f.degree();
    f.samples()
        .iter()
        .enumerate()
        .map(|(j, fj)| fj * &q_basis(j as u32, n, p))
        .sum()
}

/// Left side of the degree-reduction identity
/// `((n-k)/n) B_{k,n} + ((k+1)/n) B_{k+1,n}`; equals
/// `B_{k,n-1} (1 + (1-q) [x]_q [1-x]_q)`.
pub fn degree_reduction(k: u32, n: u32, p: &QPoint) -> Rational {
    assert!(n >= 1 && k <= n, "degree reduction needs 1 <= n and k <= n");
    let n_rat = Rational::from_int(n as i64);
    let left = Rational::from_int((n - k) as i64) / &n_rat * q_basis(k, n, p);
    let right = Rational::from_int((k + 1) as i64) / &n_rat * q_basis(k + 1, n, p);
    left + right
}

/// Ratio form `((n-k+1)/k) ([x]_q/[1-x]_q) B_{k-1,n}`; equals `B_{k,n}`.
/// Undefined where `[1-x]_q = 0` (x = 1).
pub fn ratio_identity(k: u32, n: u32, p: &QPoint) -> Result<Rational> {
    assert!(k >= 1, "ratio identity needs k >= 1");
    let complement = p.q_complement();
    if complement.is_zero() {
        return Err(Error::ZeroComplement);
    }
    let factor = Rational::new(n as i64 + 1 - k as i64, k as i64).expect("k >= 1");
    Ok(factor * (p.q_number() / complement) * q_basis(k - 1, n, p))
}

/// Monomial expansion
/// `B_{k,n} = sum_{i=k}^{n} C(i,k) C(n,i) (-1)^{i-k} (q/X)^{i-k} [x]_q^i`,
/// with `q^{(1-x)(i-k)}` computed exactly as `(q/X)^{i-k}`.
pub fn monomial_expansion(k: u32, n: u32, p: &QPoint) -> Rational {
    let q_pow_1mx = p.q() / p.x_pow();
    let q_num = p.q_number();
    let mut acc = Rational::zero();
    for i in k..=n {
        let mut term = Rational::from_bigint(binomial(i, k) * binomial(n, i))
            * q_pow_1mx.pow((i - k) as i64)
            * q_num.pow(i as i64);
        if (i - k) % 2 == 1 {
            term = -term;
        }
        acc += &term;
    }
    acc
}

/// Moment identity: the normalized weighted sum
/// `([x]_q+[1-x]_q)^{i-n} sum_{k=i}^n (C(k,i)/C(n,i)) B_{k,n}` equals
/// `[x]_q^i`. The nominal `k = i-1` start is dropped: that term carries
/// `C(i-1,i) = 0`.
pub fn moment_identity(i: u32, n: u32, p: &QPoint) -> Result<Rational> {
    if i > n {
        return Err(Error::MomentIndexOutOfRange { i, n });
    }
    let denom = Rational::from_bigint(binomial(n, i));
    let mut acc = Rational::zero();
    for k in i..=n {
        acc += &(Rational::from_bigint(binomial(k, i)) / &denom * q_basis(k, n, p));
    }
    let normalizer = (p.q_number() + p.q_complement()).pow((n - i) as i64);
    Ok(acc / normalizer)
}

/// Classical basis on the floating path.
pub fn classical_basis_f64(k: u32, n: u32, x: f64) -> f64 {
    if k > n {
        return 0.0;
    }
    let coeff = binomial(n, k).to_f64().unwrap_or(f64::NAN);
    coeff * x.powi(k as i32) * (1.0 - x).powi((n - k) as i32)
}

/// Modified basis on the floating path, `q^x` computed as `exp(x ln q)`.
pub fn q_basis_f64(k: u32, n: u32, fp: &FloatPoint) -> f64 {
    if k > n {
        return 0.0;
    }
    let coeff = binomial(n, k).to_f64().unwrap_or(f64::NAN);
    coeff * fp.q_number().powi(k as i32) * fp.q_complement().powi((n - k) as i32)
}

/// Derivative of `B_{k,n}(x,q)` in x:
/// `n (q^x B_{k-1,n-1} - q^{1-x} B_{k,n-1}) ln(q)/(q-1)`.
/// Validated against a central finite difference, so the boundary points
/// x = 0 and x = 1 are rejected.
pub fn derivative(k: u32, n: u32, fp: &FloatPoint) -> Result<f64> {
    assert!(n >= 1, "derivative needs n >= 1");
    if fp.x() <= 0.0 || fp.x() >= 1.0 {
        return Err(Error::DerivativeAtBoundary(fp.x()));
    }
    let q = fp.q();
    let lower_k = if k == 0 {
        0.0
    } else {
        q_basis_f64(k - 1, n - 1, fp)
    };
    let value = n as f64 * (fp.q_pow_x() * lower_k - fp.q_pow_1mx() * q_basis_f64(k, n - 1, fp));
    Ok(value * q.ln() / (q - 1.0))
}

/// Central finite difference of the basis in x, the independent oracle for
/// [`derivative`].
pub fn derivative_central_diff(k: u32, n: u32, fp: &FloatPoint, h: f64) -> Result<f64> {
    let up = FloatPoint::new(fp.q(), fp.x() + h)?;
    let down = FloatPoint::new(fp.q(), fp.x() - h)?;
    Ok((q_basis_f64(k, n, &up) - q_basis_f64(k, n, &down)) / (2.0 * h))
}

/// For each q in `qs`, the distance `|B_{k,n}(x,q) - B_{k,n}(x)|` between
/// the modified and the classical basis. Shrinks as q -> 1.
pub fn classical_limit_check(k: u32, n: u32, x: f64, qs: &[f64]) -> Result<Vec<f64>> {
    let classical = classical_basis_f64(k, n, x);
    qs.iter()
        .map(|&q| {
            let fp = FloatPoint::new(q, x)?;
            Ok((q_basis_f64(k, n, &fp) - classical).abs())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn point(qn: i64, qd: i64, xn: i64, xd: i64) -> QPoint {
        QPoint::from_ints(qn, qd, xn, xd).unwrap()
    }

    // the worked example point q = 1/4, X = 1/2 (so [x]_q = [1-x]_q = 2/3)
    fn p_mid() -> QPoint {
        point(1, 4, 1, 2)
    }

    #[test]
    fn classical_basis_examples() {
        assert_eq!(classical_basis(1, 2, &rat(1, 2)).unwrap(), rat(1, 2));
        assert_eq!(
            classical_basis(0, 3, &Rational::zero()).unwrap(),
            Rational::one()
        );
        assert_eq!(classical_basis(2, 1, &rat(1, 2)).unwrap(), Rational::zero());
        assert!(classical_basis(1, 2, &rat(3, 2)).is_err());
        assert!(classical_basis(1, 2, &rat(-1, 2)).is_err());
    }

    #[test]
    fn q_basis_examples() {
        assert_eq!(q_basis(0, 0, &p_mid()), Rational::one());
        assert_eq!(q_basis(1, 2, &p_mid()), rat(8, 9));
        assert_eq!(q_basis(3, 2, &p_mid()), Rational::zero());
    }

    #[test]
    fn q_basis_oracle_examples() {
        assert_eq!(q_basis_oracle(0, 0, &p_mid()), Rational::one());
        assert_eq!(q_basis_oracle(1, 2, &p_mid()), rat(8, 9));
        assert_eq!(q_basis_oracle(2, 1, &p_mid()), Rational::zero());
    }

    #[test]
    fn additive_recurrence_examples() {
        assert_eq!(
            additive_recurrence(0, 1, &point(1, 2, 1, 1)),
            Rational::one()
        );
        assert_eq!(additive_recurrence(1, 2, &p_mid()), rat(8, 9));
        assert_eq!(additive_recurrence(2, 2, &p_mid()), rat(4, 9));
    }

    #[test]
    fn sum_basis_examples() {
        assert_eq!(sum_basis(0, &p_mid()), Rational::one());
        assert_eq!(sum_basis(1, &p_mid()), rat(4, 3));
        assert_eq!(sum_basis(2, &p_mid()), rat(16, 9));
    }

    #[test]
    fn operator_examples() {
        let p = p_mid();
        let constant = SampledFunction::constant(3, Rational::one());
        assert_eq!(operator_apply(&constant, &p), sum_basis(3, &p));
        let ident = SampledFunction::identity(2);
        assert_eq!(operator_apply(&ident, &p), rat(8, 9));
        let zero = SampledFunction::constant(4, Rational::zero());
        assert_eq!(operator_apply(&zero, &p), Rational::zero());
    }

    #[test]
    fn degree_reduction_examples() {
        let p = p_mid();
        assert_eq!(degree_reduction(0, 1, &p), rat(4, 3));
        // k = n: both sides vanish
        assert_eq!(degree_reduction(2, 2, &p), Rational::zero());
        assert_eq!(q_basis(2, 1, &p), Rational::zero());
        // independent sides agree
        let left = degree_reduction(1, 2, &p);
        let right = q_basis(1, 1, &p) * sum_basis(1, &p);
        assert_eq!(left, right);
        assert_eq!(left, rat(8, 9));
    }

    #[test]
    fn ratio_identity_examples() {
        let p = p_mid();
        assert_eq!(ratio_identity(1, 1, &p).unwrap(), rat(2, 3));
        assert_eq!(ratio_identity(2, 2, &p).unwrap(), rat(4, 9));
        // x = 1 means X = q: the complement vanishes
        let boundary = point(1, 4, 1, 4);
        assert_eq!(ratio_identity(1, 1, &boundary), Err(Error::ZeroComplement));
    }

    #[test]
    fn monomial_expansion_examples() {
        let p = p_mid();
        assert_eq!(monomial_expansion(2, 2, &p), p.q_number().pow(2));
        assert_eq!(monomial_expansion(0, 1, &p), rat(2, 3));
        assert_eq!(monomial_expansion(1, 2, &p), rat(8, 9));
    }

    #[test]
    fn moment_identity_examples() {
        let p = p_mid();
        assert_eq!(moment_identity(2, 2, &p).unwrap(), p.q_number().pow(2));
        assert_eq!(moment_identity(1, 2, &p).unwrap(), rat(2, 3));
        assert_eq!(
            moment_identity(3, 2, &p),
            Err(Error::MomentIndexOutOfRange { i: 3, n: 2 })
        );
    }

    #[test]
    fn derivative_classical_limits() {
        let q = 1.0 - 1e-6;
        let fp = FloatPoint::new(q, 0.5).unwrap();
        assert!((derivative(0, 1, &fp).unwrap() + 1.0).abs() < 1e-5);
        assert!((derivative(1, 1, &fp).unwrap() - 1.0).abs() < 1e-5);
    }

    #[test]
    fn derivative_matches_central_difference() {
        let fp = FloatPoint::new(0.5, 0.5).unwrap();
        let formula = derivative(1, 2, &fp).unwrap();
        let fd = derivative_central_diff(1, 2, &fp, 1e-6).unwrap();
        let scale = formula.abs().max(fd.abs()).max(1.0);
        assert!((formula - fd).abs() / scale < 1e-5);
    }

    #[test]
    fn derivative_rejects_boundary() {
        for x in [0.0, 1.0] {
            let fp = FloatPoint::new(0.5, x).unwrap();
            assert_eq!(derivative(1, 2, &fp), Err(Error::DerivativeAtBoundary(x)));
        }
    }

    #[test]
    fn classical_limit_examples() {
        let diffs = classical_limit_check(1, 2, 0.5, &[1.0 - 1e-6]).unwrap();
        assert!(diffs[0] < 1e-5);
        assert_eq!(classical_limit_check(0, 0, 0.3, &[0.5]).unwrap(), vec![0.0]);
        let exact = classical_limit_check(1, 1, 1.0, &[0.3, 0.7]).unwrap();
        assert_eq!(exact, vec![0.0, 0.0]);
    }

    #[test]
    fn basis_value_provenance() {
        let v = BasisValue::compute(1, 2, p_mid());
        assert_eq!(v.value, rat(8, 9));
        assert!(BasisValue::compute(5, 2, p_mid()).value.is_zero());
    }

    fn arb_point() -> impl Strategy<Value = QPoint> {
        (1i64..15, 2i64..16, 0i64..20, 1i64..20).prop_filter_map("valid point", |(a, b, c, d)| {
            if a >= b || c > d {
                return None;
            }
            let q = rat(a, b);
            let r = rat(c, d);
            let x_pow = &q + &(&r * &(&Rational::one() - &q));
            QPoint::new(q, x_pow).ok()
        })
    }

    proptest! {
        #[test]
        fn positivity_and_zero_pattern(p in arb_point(), k in 0u32..10, n in 0u32..10) {
            prop_assume!(k <= n);
            let v = q_basis(k, n, &p);
            prop_assert!(v >= Rational::zero());
            let x_at_zero = p.q_number().is_zero();
            let comp_at_zero = p.q_complement().is_zero();
            let expect_zero = (x_at_zero && k >= 1) || (comp_at_zero && k < n);
            prop_assert_eq!(v.is_zero(), expect_zero);
        }

        #[test]
        fn symmetry_under_reflection(p in arb_point(), k in 0u32..8, n in 0u32..8) {
            prop_assume!(k <= n);
            prop_assert_eq!(q_basis(n - k, n, &p.reflect()), q_basis(k, n, &p));
        }

        #[test]
        fn oracle_equivalence(p in arb_point(), k in 0u32..7, n in 0u32..7) {
            prop_assert_eq!(q_basis_oracle(k, n, &p), q_basis(k, n, &p));
        }

        #[test]
        fn sum_matches_literal_and_power_form(p in arb_point(), n in 0u32..9) {
            let literal: Rational = (0..=n).map(|k| q_basis(k, n, &p)).sum();
            let closed = sum_basis(n, &p);
            let power = (p.q_number() + p.q_complement()).pow(n as i64);
            prop_assert_eq!(&literal, &closed);
            prop_assert_eq!(literal, power);
        }
    }
}
