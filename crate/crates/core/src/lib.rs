//! Exact-arithmetic toolkit for modified q-Bernstein polynomials.
//!
//! The basis `B_{k,n}(x,q) = C(n,k) [x]_q^k [1-x]_q^{n-k}` and its
//! supporting tower — q-numbers, Gaussian binomials, second-kind Stirling
//! numbers, higher-order Bernoulli polynomials, q-Stirling numbers — are
//! evaluated over arbitrary-precision rationals, so every identity the
//! basis satisfies is checkable as an exact equality. The [`verify`] module
//! sweeps all of them over a configurable grid; the `qbernstein` binary
//! exposes evaluation, tabulation, verification, and operator approximation
//! from the command line.
//!
//! Exactness hinges on the evaluation point: a [`qnum::QPoint`] stores
//! `(q, X)` with `X = q^x`, both rational, so `[x]_q`, `[1-x]_q = 1 -
//! (q/X)[x]_q`, and `[x-j]_q` are all rational functions of the pair. The
//! floating path exists only where transcendentals are forced (the
//! derivative formula and q -> 1 limits).

pub mod bernstein;
pub mod error;
pub mod qnum;
pub mod rational;
pub mod series;
pub mod stirling;
pub mod verify;

pub use error::{Error, Result};
pub use qnum::{FloatPoint, QPoint};
pub use rational::Rational;
pub use series::TruncatedSeries;
