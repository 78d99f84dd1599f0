//! Acceptance suite: every release gate in one place, one test per
//! criterion, each printing a `[PASS]` line (visible with `--nocapture`).
//!
//! Grid bounds and tolerances are pinned here on purpose — they are the
//! contract, independent of whatever defaults the verify engine carries.

use std::process::Command;
use std::time::Instant;

use qbernstein::bernstein::{
    additive_recurrence, classical_basis_f64, degree_reduction, derivative,
    derivative_central_diff, moment_identity, monomial_expansion, operator_apply, q_basis,
    q_basis_f64, q_basis_oracle, ratio_identity, sum_basis, SampledFunction,
};
use qbernstein::error::Error;
use qbernstein::qnum::{FloatPoint, QPoint};
use qbernstein::rational::Rational;
use qbernstein::stirling::{
    bell_numbers, q_power_expansion, q_stirling, q_stirling_f64, q_stirling_series_oracle,
    qbern_via_bernoulli, stirling2_difference, stirling2_recurrence, stirling2_series_oracle,
    theorem8_check,
};

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n, d).unwrap()
}

const Q_LIST: [(i64, i64); 5] = [(1, 5), (1, 3), (1, 2), (3, 4), (9, 10)];

/// 11 X points per q: the endpoints X = q (x = 1) and X = 1 (x = 0) plus 9
/// evenly spaced interior values.
fn grid() -> Vec<QPoint> {
    let mut points = Vec::new();
    for &(qn, qd) in &Q_LIST {
        let q = rat(qn, qd);
        points.push(QPoint::new(q.clone(), q.clone()).unwrap());
        for j in 1..=9i64 {
            let x_pow = &q + &((&Rational::one() - &q) * rat(j, 10));
            points.push(QPoint::new(q.clone(), x_pow).unwrap());
        }
        points.push(QPoint::new(q.clone(), Rational::one()).unwrap());
    }
    points
}

fn interior_grid() -> Vec<QPoint> {
    grid()
        .into_iter()
        .filter(|p| !p.q_complement().is_zero())
        .collect()
}

#[test]
fn criterion_01_closed_form_vs_generating_function_oracle() {
    let start = Instant::now();
    for p in grid() {
        for n in 0..=12u32 {
            for k in 0..=n {
                assert_eq!(
                    q_basis(k, n, &p),
                    q_basis_oracle(k, n, &p),
                    "k={k}, n={n}, q={}, X={}",
                    p.q(),
                    p.x_pow()
                );
            }
        }
    }
    assert!(start.elapsed().as_secs() < 10, "expected < 10 s");
    println!("[PASS] criterion 01 — closed form equals series oracle, exact, n <= 12");
}

#[test]
fn criterion_02_additive_recurrence() {
    let start = Instant::now();
    for p in grid() {
        for n in 1..=16u32 {
            for k in 0..=n {
                assert_eq!(
                    additive_recurrence(k, n, &p),
                    q_basis(k, n, &p),
                    "k={k}, n={n}, q={}, X={}",
                    p.q(),
                    p.x_pow()
                );
            }
        }
    }
    assert!(start.elapsed().as_secs() < 5, "expected < 5 s");
    println!("[PASS] criterion 02 — additive recurrence, exact, n <= 16");
}

#[test]
fn criterion_03_derivative_vs_central_difference() {
    let start = Instant::now();
    let h = 1e-6;
    let tol = 1e-5;
    for &q in &[0.3f64, 0.5, 0.9] {
        for xi in 1..=9u32 {
            let x = xi as f64 / 10.0;
            let fp = FloatPoint::new(q, x).unwrap();
            for n in 1..=8u32 {
                for k in 0..=n {
                    let formula = derivative(k, n, &fp).unwrap();
                    let fd = derivative_central_diff(k, n, &fp, h).unwrap();
                    let scale = formula.abs().max(fd.abs()).max(1.0);
                    assert!(
                        (formula - fd).abs() <= tol * scale,
                        "k={k}, n={n}, q={q}, x={x}: {formula} vs {fd}"
                    );
                }
            }
        }
    }
    assert!(start.elapsed().as_secs() < 5, "expected < 5 s");
    println!("[PASS] criterion 03 — derivative matches central difference, rel 1e-5, n <= 8");
}

#[test]
fn criterion_04_symmetry_and_sum() {
    let start = Instant::now();
    for p in grid() {
        let reflected = p.reflect();
        let power_base = p.q_number() + p.q_complement();
        for n in 0..=16u32 {
            for k in 0..=n {
                assert_eq!(q_basis(n - k, n, &reflected), q_basis(k, n, &p));
            }
            let literal: Rational = (0..=n).map(|k| q_basis(k, n, &p)).sum();
            assert_eq!(literal, sum_basis(n, &p), "sum closed form at n={n}");
            assert_eq!(literal, power_base.pow(n as i64), "power form at n={n}");
        }
    }
    assert!(start.elapsed().as_secs() < 5, "expected < 5 s");
    println!("[PASS] criterion 04 — symmetry and (1-q)-signed sum identity, exact, n <= 16");
}

#[test]
fn criterion_05_operator_on_identity_function() {
    let start = Instant::now();
    for p in grid() {
        let factor = Rational::one() + (&Rational::one() - p.q()) * p.q_number() * p.q_complement();
        for n in 1..=12u32 {
            let f = SampledFunction::identity(n);
            assert_eq!(
                operator_apply(&f, &p),
                p.q_number() * factor.pow(n as i64 - 1),
                "n={n}, q={}, X={}",
                p.q(),
                p.x_pow()
            );
        }
    }
    assert!(start.elapsed().as_secs() < 2, "expected < 2 s");
    println!("[PASS] criterion 05 — operator on f(x)=x equals closed form, exact, n <= 12");
}

#[test]
fn criterion_06_degree_reduction_and_ratio() {
    let start = Instant::now();
    for p in grid() {
        let factor = Rational::one() + (&Rational::one() - p.q()) * p.q_number() * p.q_complement();
        for n in 1..=16u32 {
            for k in 0..=n {
                assert_eq!(
                    degree_reduction(k, n, &p),
                    q_basis(k, n - 1, &p) * &factor,
                    "reduction k={k}, n={n}"
                );
            }
        }
    }
    for p in interior_grid() {
        for n in 1..=16u32 {
            for k in 1..=n {
                assert_eq!(
                    ratio_identity(k, n, &p).unwrap(),
                    q_basis(k, n, &p),
                    "ratio k={k}, n={n}"
                );
            }
        }
    }
    // x = 1 (X = q) raises the documented domain error
    for &(qn, qd) in &Q_LIST {
        let boundary = QPoint::from_ints(qn, qd, qn, qd).unwrap();
        assert_eq!(ratio_identity(1, 1, &boundary), Err(Error::ZeroComplement));
    }
    assert!(start.elapsed().as_secs() < 5, "expected < 5 s");
    println!(
        "[PASS] criterion 06 — degree reduction and ratio identity, exact, with boundary error"
    );
}

#[test]
fn criterion_07_monomial_expansion_and_moments() {
    let start = Instant::now();
    for p in grid() {
        let x_val = p.q_number();
        for n in 0..=12u32 {
            for k in 0..=n {
                assert_eq!(
                    monomial_expansion(k, n, &p),
                    q_basis(k, n, &p),
                    "monomial k={k}, n={n}"
                );
            }
            for i in 1..=n {
                assert_eq!(
                    moment_identity(i, n, &p).unwrap(),
                    x_val.pow(i as i64),
                    "moment i={i}, n={n}"
                );
            }
        }
    }
    assert!(start.elapsed().as_secs() < 10, "expected < 10 s");
    println!("[PASS] criterion 07 — monomial expansion and moment identity, exact, n <= 12");
}

#[test]
fn criterion_08_stirling_triple_path_and_bell() {
    let start = Instant::now();
    let table = stirling2_recurrence(12);
    for n in 0..=12u32 {
        for k in 0..=n {
            let recurrence = table.get(n, k);
            assert_eq!(
                recurrence,
                stirling2_difference(n, k),
                "difference at ({n},{k})"
            );
            assert_eq!(
                recurrence,
                stirling2_series_oracle(n, k),
                "series at ({n},{k})"
            );
        }
    }
    let bells = bell_numbers(10);
    for n in 0..=10u32 {
        let row_sum: Rational = (0..=n).map(|k| table.get(n, k)).sum();
        assert_eq!(row_sum, Rational::from_bigint(bells[n as usize].clone()));
    }
    assert!(start.elapsed().as_secs() < 5, "expected < 5 s");
    println!("[PASS] criterion 08 — Stirling triple-path agreement and Bell row sums, exact");
}

#[test]
fn criterion_09_bernoulli_stirling_decomposition() {
    let start = Instant::now();
    for p in grid() {
        for l in 0..=10u32 {
            for k in 0..=l {
                assert_eq!(
                    qbern_via_bernoulli(k, l, &p),
                    q_basis(k, l, &p),
                    "k={k}, l={l}, q={}, X={}",
                    p.q(),
                    p.x_pow()
                );
            }
        }
        for k in 1..=10u32 {
            for l in 0..k {
                assert!(
                    qbern_via_bernoulli(k, l, &p).is_zero(),
                    "below-degree k={k}, l={l}"
                );
            }
        }
    }
    assert!(start.elapsed().as_secs() < 20, "expected < 20 s");
    println!("[PASS] criterion 09 — Bernoulli-Stirling decomposition, exact, l <= 10");
}

#[test]
fn criterion_10_q_stirling_dual_path_and_limit() {
    let start = Instant::now();
    for (qn, qd) in [(1i64, 5i64), (1, 3), (1, 2), (3, 4)] {
        let q = rat(qn, qd);
        for n in 0..=10u32 {
            for k in 0..=n {
                assert_eq!(
                    q_stirling(n, k, &q),
                    q_stirling_series_oracle(n, k, &q),
                    "n={n}, k={k}, q={q}"
                );
            }
        }
    }
    // q -> 1: deviation is relative (classical values reach the thousands)
    let classical = stirling2_recurrence(8);
    let q = 1.0 - 1e-4;
    for n in 0..=8u32 {
        for k in 0..=n {
            let target = classical.get(n, k).to_f64();
            let value = q_stirling_f64(n, k, q);
            assert!(
                (value - target).abs() <= 1e-3 * target.abs().max(1.0),
                "n={n}, k={k}: {value} vs {target}"
            );
        }
    }
    assert!(start.elapsed().as_secs() < 10, "expected < 10 s");
    println!("[PASS] criterion 10 — q-Stirling dual path exact, q->1 limit within 1e-3 (relative)");
}

#[test]
fn criterion_11_power_expansion_and_theorem8() {
    let start = Instant::now();
    for p in grid() {
        let x_val = p.q_number();
        for i in 0..=10u32 {
            assert_eq!(
                q_power_expansion(i, &p),
                x_val.pow(i as i64),
                "power expansion i={i}"
            );
        }
        for n in 1..=10u32 {
            for i in 1..=n {
                let (moment, power) = theorem8_check(i, n, &p).unwrap();
                assert_eq!(moment, power, "pair i={i}, n={n}");
            }
        }
    }
    assert!(start.elapsed().as_secs() < 10, "expected < 10 s");
    println!("[PASS] criterion 11 — power-basis expansion and equal moment/power pairs, exact");
}

#[test]
fn criterion_12_classical_limit() {
    let start = Instant::now();
    let q = 1.0 - 1e-4;
    let mut max_diff = 0.0f64;
    for xi in 0..=10u32 {
        let x = xi as f64 / 10.0;
        let fp = FloatPoint::new(q, x).unwrap();
        for n in 0..=8u32 {
            for k in 0..=n {
                let diff = (q_basis_f64(k, n, &fp) - classical_basis_f64(k, n, x)).abs();
                max_diff = max_diff.max(diff);
            }
        }
    }
    assert!(max_diff < 1e-3, "max deviation {max_diff}");
    assert!(start.elapsed().as_secs() < 2, "expected < 2 s");
    println!("[PASS] criterion 12 — classical limit at q = 1-1e-4 within 1e-3, n <= 8");
}

#[test]
fn criterion_13_end_to_end_verify() {
    let bin = env!("CARGO_BIN_EXE_qbernstein");

    let start = Instant::now();
    let output = Command::new(bin)
        .args(["verify", "--format", "json"])
        .output()
        .expect("binary runs");
    let elapsed = start.elapsed();
    assert!(output.status.success(), "default verify must exit 0");
    assert!(elapsed.as_secs() < 60, "default verify took {elapsed:?}");
    let report: serde_json::Value =
        serde_json::from_slice(&output.stdout).expect("JSON report parses");
    assert_eq!(report["summary"]["fail"], 0, "fail must be 0");
    assert_eq!(report["summary"]["checks_failed"], 0);
    assert!(report["results"].as_array().map_or(0, |r| r.len()) == 15);

    // mutated run: flipped sum sign must fail with a witness and exit 1
    let mutated = Command::new(bin)
        .args([
            "verify",
            "--only",
            "T3_SUM",
            "--inject-sum-sign-flip",
            "--format",
            "json",
        ])
        .output()
        .expect("binary runs");
    assert_eq!(mutated.status.code(), Some(1), "mutation must exit 1");
    let report: serde_json::Value =
        serde_json::from_slice(&mutated.stdout).expect("JSON report parses");
    let result = &report["results"][0];
    assert_eq!(result["status"], "fail");
    let witness = &result["witness"];
    assert!(witness["left"].is_string() && witness["right"].is_string());
    assert_ne!(witness["left"], witness["right"]);

    println!("[PASS] criterion 13 — end-to-end verify exits 0 with fail=0; mutation exits 1 with witness");
}
