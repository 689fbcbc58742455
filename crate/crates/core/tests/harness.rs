mod common;

use fracshoot::harness::{
    build_example, build_example_with_sign, check_eps_reduction, emit_report, parse_csv,
    run_convergence, ExampleId, ExampleProblem, LeftBcSign, Pipeline, ReportFormat, CSV_HEADER,
};
use fracshoot::{
    FractionalBvp, Method, Nonlinearity, RobinBc, Scheme, ShootingConfig, UniformGrid,
};

/// Caputo derivative of the exact solution of each example, from the
/// independent oracles.
fn caputo_exact(ex: &ExampleProblem, alpha: f64, t: f64) -> f64 {
    match ex.id {
        ExampleId::Ex1 => common::caputo_power(alpha, 4.0, t),
        // e^t minus its cubic Taylor polynomial
        ExampleId::Ex2 => common::caputo_taylor(alpha, t, 4, common::exp_coeff),
        // sin t - t + t^3/6
        ExampleId::Ex3 | ExampleId::Ex5 => common::caputo_taylor(alpha, t, 5, common::sine_coeff),
        ExampleId::Ex4 => {
            let a2 = ex.alpha2;
            [a2, 2.0 * a2 - 1.0, 0.0, 1.0, 3.0, 4.0]
                .iter()
                .zip([1.0, 1.0, 1.0, 3.0, 4.0, 1.0])
                .map(|(&p, c)| c * common::caputo_power(alpha, p, t))
                .sum()
        }
    }
}

fn all_examples() -> Vec<ExampleProblem> {
    let mut out = Vec::new();
    for id in [ExampleId::Ex1, ExampleId::Ex2, ExampleId::Ex3] {
        for (a1, a2) in [(0.4, 1.7), (0.9, 1.1), (0.1, 1.9)] {
            out.push(build_example(id, a1, a2).unwrap());
        }
    }
    for id in [ExampleId::Ex4, ExampleId::Ex5] {
        for a2 in [1.1, 1.5, 1.9] {
            out.push(build_example(id, 1.0, a2).unwrap());
        }
    }
    out
}

#[test]
fn exact_solutions_satisfy_their_equations() {
    for ex in all_examples() {
        for k in 1..=20 {
            let t = k as f64 / 20.0;
            let y = (ex.exact)(t);
            let w = if ex.id.is_linear() {
                (ex.exact_derivative)(t)
            } else {
                caputo_exact(&ex, ex.alpha1, t)
            };
            let lhs = caputo_exact(&ex, ex.alpha2, t);
            let rhs = (ex.bvp.rhs().f)(t, y, w);
            assert!(
                (lhs - rhs).abs() < 1e-8,
                "{} ({}, {}) t = {t}: {lhs} vs {rhs}",
                ex.id,
                ex.alpha1,
                ex.alpha2
            );
        }
    }
}

#[test]
fn exact_derivatives_match_finite_differences() {
    for ex in all_examples() {
        for t in [0.2, 0.5, 0.9] {
            let d = 1e-6;
            let fd = ((ex.exact)(t + d) - (ex.exact)(t - d)) / (2.0 * d);
            assert!(
                (fd - (ex.exact_derivative)(t)).abs() < 1e-7,
                "{} t = {t}",
                ex.id
            );
        }
    }
}

#[test]
fn boundary_data_come_from_the_exact_solution() {
    for ex in all_examples() {
        let bc = ex.bvp.bc();
        let left = bc.left_defect((ex.exact)(0.0), (ex.exact_derivative)(0.0));
        let right = bc.right_defect((ex.exact)(1.0), (ex.exact_derivative)(1.0));
        assert!(
            left.abs() < 1e-14 && right.abs() < 1e-13,
            "{}: {left} {right}",
            ex.id
        );
        assert_eq!((ex.gamma1, ex.gamma2), (bc.gamma1, bc.gamma2));
    }
    let ex1 = build_example(ExampleId::Ex1, 0.4, 1.7).unwrap();
    assert_eq!((ex1.gamma1, ex1.gamma2), (0.0, 5.0));
    let ex2 = build_example(ExampleId::Ex2, 0.4, 1.7).unwrap();
    assert!((ex2.gamma2 - 0.2698969902514238).abs() < 1e-14);
    let ex3 = build_example(ExampleId::Ex3, 0.4, 1.7).unwrap();
    assert!((ex3.gamma2 - 0.04843995734270289).abs() < 1e-14);
}

#[test]
fn left_condition_sign_variants() {
    for id in [ExampleId::Ex4, ExampleId::Ex5] {
        let neg = build_example(id, 1.0, 1.5).unwrap();
        assert_eq!(neg.bvp.bc().b1, -2.0);
        let pos = build_example_with_sign(id, 1.0, 1.5, LeftBcSign::Positive).unwrap();
        assert_eq!(pos.bvp.bc().b1, 2.0);
        assert_eq!(neg.linear.as_ref().unwrap().bc(), neg.bvp.bc());
        for ex in [&neg, &pos] {
            let bc = ex.bvp.bc();
            assert!(
                bc.left_defect((ex.exact)(0.0), (ex.exact_derivative)(0.0))
                    .abs()
                    < 1e-14
            );
        }
    }
    // ignored for the nonlinear examples
    let a = build_example_with_sign(ExampleId::Ex1, 0.4, 1.7, LeftBcSign::Positive).unwrap();
    assert_eq!(
        a.bvp.bc(),
        build_example(ExampleId::Ex1, 0.4, 1.7).unwrap().bvp.bc()
    );
}

#[test]
fn registry_rejects_bad_orders() {
    assert!(build_example(ExampleId::Ex4, 0.5, 1.5).is_err());
    assert!(build_example(ExampleId::Ex1, 1.0, 1.5).is_err());
    assert!(build_example(ExampleId::Ex2, 0.4, 2.0).is_err());
    assert!("ex6".parse::<ExampleId>().is_err());
    assert_eq!("Ex3".parse::<ExampleId>().unwrap(), ExampleId::Ex3);
    for id in ExampleId::ALL {
        let (a1, a2) = id.default_orders();
        assert!(build_example(id, a1, a2).is_ok());
        assert_eq!(id.to_string().parse::<ExampleId>().unwrap(), id);
    }
}

fn small_report() -> fracshoot::harness::ConvergenceReport {
    let ex = build_example(ExampleId::Ex1, 0.4, 1.7).unwrap();
    let cfg = ShootingConfig::new(0.2, Method::Newton, Scheme::Linear);
    run_convergence(&ex, Pipeline::Hpcm, &[10, 20, 40], &cfg).unwrap()
}

#[test]
fn csv_report_round_trips() {
    let report = small_report();
    let text = emit_report(&report, ReportFormat::Csv);
    assert!(text.starts_with(CSV_HEADER));

    // an independent reader sees the same table
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(headers.join(","), CSV_HEADER);
    let records: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(records.len(), 3);
    let parsed = parse_csv(&text).unwrap();
    for ((rec, row), orig) in records.iter().zip(&parsed).zip(&report.rows) {
        assert_eq!(rec[0].parse::<usize>().unwrap(), orig.n);
        assert_eq!(row.n, orig.n);
        assert_eq!(row.k, orig.k);
        let (got, want) = (row.max_error.unwrap(), orig.max_error.unwrap());
        // three significant digits
        assert!((got / want - 1.0).abs() < 5e-3);
        assert_eq!(rec[1].parse::<f64>().unwrap(), got);
    }
    assert!(parsed[0].rate.is_none() && parsed[1].rate.is_some());
    assert!(parse_csv("N,err\n1,2\n").is_err());
}

#[test]
fn markdown_report_lists_every_row() {
    let report = small_report();
    let md = emit_report(&report, ReportFormat::Markdown);
    assert!(md.starts_with("ex1 (hpcm, newton / linear)"));
    let rows: Vec<&str> = md
        .lines()
        .filter(|l| l.starts_with("| ") && !l.starts_with("| N"))
        .collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[2].starts_with("| 40 | "));
}

#[test]
fn reports_are_deterministic() {
    let (a, b) = (small_report(), small_report());
    for (x, y) in a.rows.iter().zip(&b.rows) {
        assert_eq!(x.max_error, y.max_error);
        assert_eq!(x.residual, y.residual);
        assert_eq!(x.k, y.k);
    }
}

#[test]
fn failing_rows_do_not_stop_the_sweep() {
    let ex = build_example(ExampleId::Ex1, 0.4, 1.7).unwrap();
    let cfg = ShootingConfig::new(0.2, Method::Newton, Scheme::Quadratic);
    // N = 2 is too coarse for the quadratic scheme
    let report = run_convergence(&ex, Pipeline::Hpcm, &[2, 16], &cfg).unwrap();
    assert!(report.rows[0].failed() && !report.rows[1].failed());
    assert!(report.rows[1].rate.is_none());
    assert!(emit_report(&report, ReportFormat::Markdown).contains("failed ("));
    assert!(run_convergence(&ex, Pipeline::Hpcm, &[16, 8], &cfg).is_err());
    assert!(run_convergence(&ex, Pipeline::LinearExplicit, &[16], &cfg)
        .unwrap()
        .rows[0]
        .failed());
}

#[test]
fn regularization_gap_shrinks_with_eps() {
    let ex = build_example(ExampleId::Ex5, 1.0, 1.5).unwrap();
    for n in [64, 160] {
        let grid = UniformGrid::new(0.0, 1.0, n).unwrap();
        for scheme in [Scheme::Linear, Scheme::Quadratic] {
            for eps in [[1e-1, 1e-2, 1e-3], [1e-2, 1e-4, 1e-6]] {
                let gaps = check_eps_reduction(&ex.bvp, 0.5, &eps, &grid, scheme).unwrap();
                assert!(
                    gaps.windows(2).all(|w| w[1].1 < w[0].1),
                    "N {n} {scheme}: {gaps:?}"
                );
            }
        }
    }
    // y = 0 is an exact solution of both systems
    let grid = UniformGrid::new(0.0, 1.0, 64).unwrap();
    let zero = Nonlinearity::linear(|_| 0.0, |_| 0.0, |_| 0.0);
    let bc = RobinBc::new(1.0, 1.0, 0.0, 1.0, 0.0, 0.0).unwrap();
    let p = FractionalBvp::new(1.0, 1.5, zero, bc, 1.0).unwrap();
    let gaps = check_eps_reduction(&p, 0.0, &[1e-1, 1e-2, 1e-3], &grid, Scheme::Quadratic).unwrap();
    assert!(gaps.iter().all(|&(_, g)| g == 0.0));
    assert!(check_eps_reduction(&p, 0.0, &[1e-3, 1e-2], &grid, Scheme::Linear).is_err());
    assert!(build_example(ExampleId::Ex1, 0.4, 1.7)
        .map(|ex| check_eps_reduction(&ex.bvp, 0.0, &[1e-2], &grid, Scheme::Linear).is_err())
        .unwrap());
}

#[test]
fn tiny_eps_gap_is_below_discretization_error() {
    // at the converged slope y'(0) = 0, so the order-eps equation has no
    // layer at t = 0 to resolve
    let ex = build_example(ExampleId::Ex5, 1.0, 1.5).unwrap();
    let cfg = ShootingConfig::new(0.2, Method::Halley, Scheme::Quadratic).with_tol(1e-12);
    let report = run_convergence(&ex, Pipeline::Hpcm, &[160], &cfg).unwrap();
    let trace = fracshoot::harness::shoot_example(&ex, Pipeline::Hpcm, 160, &cfg).unwrap();
    let grid = UniformGrid::new(0.0, 1.0, 160).unwrap();
    let gap = check_eps_reduction(
        &ex.bvp,
        trace.final_iterate().s,
        &[1e-10],
        &grid,
        Scheme::Quadratic,
    )
    .unwrap()[0]
        .1;
    let err = report.rows[0].max_error.unwrap();
    assert!(gap <= err, "gap {gap:e} vs error {err:e}");
}
