//! End-to-end acceptance checks. Each test prints one PASS/FAIL line
//! straight to stdout so the summary survives output capture.

use std::f64::consts::PI;
use std::io::Write;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::TestRunner;

use xpzeta::dirichlet::{s_func, star, ExpPoly};
use xpzeta::inversion::{
    bracketing_iterate, critical_sigma, euler_zagier_truncated, fixed_point_solve, g_from_target, zeta_series,
    zeta_sigma_target, InversionPolicy,
};
use xpzeta::jost::{argand_csv, argand_scan, build_jost, find_real_zeros, finite_n_residual, JostModel};
use xpzeta::oracle::{build_matrix, classify_states, eigensolve, eigenvalues, GridSpec};
use xpzeta::rational::PosRational;
use xpzeta::specfun::{catalan, mellin, rs_theta, zeta_real, PotentialSpec};
use xpzeta::spectra::{smooth_zero, zscan_true_zeros, LineKind};

const C1_ZERO_TOL: f64 = 1e-9;
const C1_RUNTIME: Duration = Duration::from_secs(1);
const C2_CIRCLE_TOL: f64 = 1e-12;
const C3_SIGMA_C: f64 = 1.72865;
const C3_TOL: f64 = 5e-5;
const C4_STEP_TOL: f64 = 1e-10;
const C4_MAX_ITERATIONS: usize = 200;
const C4_RESIDUAL_TOL: f64 = 1e-8;
const C4_BOUND: f64 = 1.0;
const C5_TOL: f64 = 1e-12;
const C6_RANDOM_POLYS: usize = 100;
const C7_TOL: f64 = 1e-12;
const C7_CASES: usize = 200;
const C8_REL_TOL: f64 = 0.02;
const C8_REFINE_RATIO: f64 = 1.8;
const C8_RUNTIME: Duration = Duration::from_secs(120);
const C9_REL_TOL: f64 = 0.05;
const C9_RESIDUAL_TOL: f64 = 0.1;
/// Delocalized residuals are checked for |E| below this, which spans the
/// first three bound states; the finite-grid error grows with E beyond it.
const C9_RESIDUAL_WINDOW: f64 = 25.0;
const C10_FIRST_ZERO: f64 = 14.134725;
const C10_FIRST_TOL: f64 = 1e-4;
const C10_GAP: f64 = 1.5;
const C11_T0_TOL: f64 = 0.5;
const C12_ZERO_TOL: f64 = 1e-3;
const C12_MU: f64 = 0.5;
const C13_TAIL_TOL: f64 = 1e-4;
const C13_COEFF_TOL: f64 = 1e-15;

fn report(n: u32, name: &str, pass: bool, detail: &str) {
    let status = if pass { "PASS" } else { "FAIL" };
    let line = format!("criterion {n:>2} [{status}] {name}: {detail}\n");
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(line.as_bytes());
    let _ = out.flush();
    assert!(pass, "criterion {n} failed: {detail}");
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn q(n: u64, d: u64) -> PosRational {
    PosRational::new(n, d).unwrap()
}

fn real_poly() -> impl Strategy<Value = ExpPoly> {
    prop::collection::vec((1u64..=12, 1u64..=12, -1.0f64..1.0), 1..=10)
        .prop_map(|v| ExpPoly::from_terms(v.into_iter().map(|(n, d, c)| (q(n, d), re(c)))))
}

fn vanishing_poly() -> impl Strategy<Value = ExpPoly> {
    real_poly().prop_map(|p| {
        let shift = p.at_zero();
        &p - &ExpPoly::constant(shift)
    })
}

/// Draws `count` values from a strategy with a fixed seed.
fn samples<S: Strategy>(strategy: S, count: usize) -> Vec<S::Value> {
    let mut runner = TestRunner::deterministic();
    (0..count).map(|_| strategy.new_tree(&mut runner).unwrap().current()).collect()
}

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|k| lo + (hi - lo) * k as f64 / n as f64).collect()
}

#[test]
fn c01_step_bound_states() {
    let start = Instant::now();
    let f = build_jost(JostModel::Step { a1: 1.0, x1: q(2, 1) }).unwrap();
    let zeros = find_real_zeros(&f, 0.0, 40.0, None).unwrap();
    let elapsed = start.elapsed();
    let expected: Vec<f64> = (0..4).map(|n| (2 * n + 1) as f64 * PI / 2f64.ln()).collect();
    let worst = zeros.iter().zip(&expected).map(|(z, e)| (z.energy - e).abs()).fold(0.0, f64::max);
    let pass = zeros.len() == expected.len() && worst < C1_ZERO_TOL && elapsed < C1_RUNTIME;
    let found: Vec<String> = zeros.iter().map(|z| format!("{:.10}", z.energy)).collect();
    report(
        1,
        "step bound states",
        pass,
        &format!("zeros [{}], max error {worst:.2e}, {elapsed:.2?}", found.join(", ")),
    );
}

#[test]
fn c02_argand_circle() {
    let f = build_jost(JostModel::Step { a1: 1.0, x1: q(2, 1) }).unwrap();
    let scan = argand_scan(&f, -60.0, 60.0, 0.01).unwrap();
    let circle = scan.iter().map(|(_, v)| ((v - 0.5).norm() - 0.5).abs()).fold(0.0, f64::max);
    let mut pass = circle < C2_CIRCLE_TOL;
    let mut detail = format!("a1=1 circle deviation {circle:.2e}");
    for a1 in [0.2, 0.4, 0.6] {
        let f = build_jost(JostModel::Step { a1, x1: q(2, 1) }).unwrap();
        let min_re = argand_scan(&f, -60.0, 60.0, 0.01).unwrap().iter().map(|(_, v)| v.re).fold(f64::INFINITY, f64::min);
        let zeros = find_real_zeros(&f, -60.0, 60.0, None).unwrap();
        pass &= min_re > 0.0 && zeros.is_empty();
        detail += &format!("; a1={a1} min Re F {min_re:.4}, {} zeros", zeros.len());
    }
    report(2, "Argand circle", pass, &detail);
}

#[test]
fn c03_critical_sigma() {
    let sigma = critical_sigma().unwrap();
    let err = (sigma - C3_SIGMA_C).abs();
    report(
        3,
        "critical threshold",
        err < C3_TOL,
        &format!("sigma_c = {sigma:.8}, zeta(sigma_c) = {:.12}, |diff| {err:.2e}", zeta_real(sigma).unwrap()),
    );
}

#[test]
fn c04_inversion_sigma_two() {
    let target = zeta_sigma_target(2.0, 64).unwrap();
    let g = g_from_target(&target).unwrap();
    let policy = InversionPolicy::for_terms(64);
    let start = Instant::now();
    let (a, r) = fixed_point_solve(&g, &policy).unwrap();
    let elapsed = start.elapsed();
    let ts = grid(10.0, 25.0, 3000);
    let values = a.eval_grid(&ts);
    let sup = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let extrema = values.windows(3).filter(|w| (w[1].re - w[0].re) * (w[2].re - w[1].re) < 0.0).count();
    let diff = r.successive_diff.unwrap();
    let residual = r.final_residual.unwrap();
    let pass = r.converged
        && r.iterations_used <= C4_MAX_ITERATIONS
        && diff < C4_STEP_TOL
        && residual < C4_RESIDUAL_TOL
        && sup < C4_BOUND
        && extrema >= 2;
    report(
        4,
        "inversion at sigma = 2",
        pass,
        &format!(
            "{} iterations, step {diff:.2e}, retained residual {residual:.2e} over {} terms \
             (truncation bound {:.2e}), sup|a| on (10,25) {sup:.4}, {extrema} local extrema of Re a, {elapsed:.1?}",
            r.iterations_used,
            r.retained_terms.unwrap(),
            r.truncation_bound.unwrap(),
        ),
    );
}

#[test]
fn c05_single_frequency() {
    let c = 0.125;
    let g = ExpPoly::from_terms([(q(2, 1), re(c)), (q(1, 1), re(-c))]);
    let policy = InversionPolicy { convergence_tol: 1e-14, ..InversionPolicy::for_terms(2) };
    let (a, r) = fixed_point_solve(&g, &policy).unwrap();
    // root of 2α² + α − c = 0
    let alpha = ((1.0 + 8.0 * c).sqrt() - 1.0) / 4.0;
    let err = (a.coeff(&q(2, 1)) - alpha).norm().max((a.coeff(&q(1, 1)) + alpha).norm());
    let pass = r.converged && a.len() == 2 && err < C5_TOL;
    report(
        5,
        "single-frequency closed form",
        pass,
        &format!("alpha = {:.16}, expected {alpha:.16}, error {err:.2e}", a.coeff(&q(2, 1)).re),
    );
}

#[test]
fn c06_catalan_structure() {
    let trees = bracketing_iterate(5, 5);
    let mut pass = true;
    let mut counts = Vec::new();
    for n in 1..=5usize {
        let k = trees.iter().filter(|b| b.order() == n).count();
        let expected = catalan(n as u32 - 1);
        pass &= num_bigint::BigUint::from(k) == expected;
        counts.push(format!("{n}:{k}/{expected}"));
    }
    let polys = samples(real_poly(), C6_RANDOM_POLYS);
    let ts = grid(-40.0, 40.0, 400);
    let mut worst: f64 = 0.0;
    for g in &polys {
        let l1sq = g.l1_norm().powi(2);
        let sup = star(g, g).eval_grid(&ts).iter().map(|v| v.norm()).fold(0.0, f64::max);
        worst = worst.max(sup / l1sq);
    }
    pass &= worst <= 1.0 + 1e-12;
    report(
        6,
        "Catalan structure",
        pass,
        &format!("bracketings per order [{}], max sup|g*g|/(sum|g|)^2 = {worst:.6} over {C6_RANDOM_POLYS} polys", counts.join(" ")),
    );
}

#[test]
fn c07_algebraic_suites() {
    let pairs = samples((real_poly(), real_poly()), C7_CASES);
    let vanishing = samples(vanishing_poly(), C7_CASES);
    let ts = grid(-25.0, 25.0, 100);
    let (mut shuffle, mut reality, mut positivity, mut type_i): (f64, f64, f64, f64) = (0.0, 0.0, f64::INFINITY, 0.0);
    let mut regular = true;
    for (f, g) in &pairs {
        let lhs = &s_func(f, g) + &s_func(g, f).reflect();
        let offset = ExpPoly::constant(2.0 * f.at_zero() * g.at_zero());
        let rhs = &f.mul(&g.reflect()).scale(re(2.0)) - &offset;
        shuffle = shuffle.max(lhs.max_coeff_diff(&rhs));
        let p = star(f, g);
        regular &= p.is_analytic() && p.is_real_symmetric(0.0);
        for &t in &ts {
            reality = reality.max((p.eval_real(-t) - p.eval_real(t).conj()).norm());
        }
        let ff = star(f, f);
        for &x in &[-7.0, -1.5, 0.0, 2.5, 11.0] {
            for &y in &[0.05, 0.5, 2.0] {
                positivity = positivity.min(ff.eval(Complex64::new(x, y)).re);
            }
        }
    }
    for a in &vanishing {
        let f = &(&ExpPoly::one() + &a.scale(re(2.0))) + &star(a, a);
        for &t in &ts {
            let lhs = f.eval_real(t).re;
            let rhs = (1.0 + a.eval_real(t)).norm_sqr();
            type_i = type_i.max((lhs - rhs).abs());
        }
    }
    let pass = shuffle < C7_TOL && reality < C7_TOL && regular && positivity > 0.0 && type_i < C7_TOL;
    report(
        7,
        "shuffle/reality/regularity/positivity",
        pass,
        &format!(
            "shuffle {shuffle:.1e}, reality {reality:.1e}, analytic+real {regular}, \
             min Re(f*f) in UHP {positivity:.2e}, type I identity {type_i:.1e} ({C7_CASES} cases)"
        ),
    );
}

/// Worst relative error of the ten lowest positive energies against n + 1/2.
fn free_level_error(m: usize) -> f64 {
    let g = GridSpec::new((2.0 * PI).exp(), m).unwrap();
    let mus = eigenvalues(&build_matrix(&g, None, None).unwrap()).unwrap();
    let mut energies: Vec<f64> = mus.iter().filter(|&&mu| mu > 0.0).map(|mu| 1.0 / mu).collect();
    energies.sort_by(f64::total_cmp);
    energies.iter().take(10).enumerate().map(|(n, e)| (e - (n as f64 + 0.5)).abs() / (n as f64 + 0.5)).fold(0.0, f64::max)
}

#[test]
fn c08_free_matrix_oracle() {
    let start = Instant::now();
    let fine = free_level_error(4000);
    let coarse = free_level_error(2000);
    let elapsed = start.elapsed();
    let ratio = coarse / fine;
    let pass = fine < C8_REL_TOL && ratio >= C8_REFINE_RATIO && elapsed < C8_RUNTIME;
    report(
        8,
        "free matrix oracle",
        pass,
        &format!("max rel error M=4000 {fine:.3e}, M=2000 {coarse:.3e}, ratio {ratio:.2}, {elapsed:.1?}"),
    );
}

#[test]
fn c09_embedded_bound_states() {
    let n = 65536.0;
    let grid = GridSpec::new(n, 4000).unwrap();
    let a = PotentialSpec::step(1.0, q(2, 1)).unwrap();
    let pairs = eigensolve(&build_matrix(&grid, Some(&a), None).unwrap()).unwrap();
    let lines = classify_states(&pairs, &grid, 4.0).unwrap();
    let f = build_jost(JostModel::Step { a1: 1.0, x1: q(2, 1) }).unwrap();
    let mut pass = true;
    let mut found = Vec::new();
    for k in 0..3 {
        let exact = (2 * k + 1) as f64 * PI / 2f64.ln();
        let hit = lines
            .iter()
            .filter(|l| l.kind == LineKind::Localized)
            .map(|l| l.energy)
            .min_by(|x, y| (x - exact).abs().total_cmp(&(y - exact).abs()));
        let ok = hit.is_some_and(|e| (e - exact).abs() / exact < C9_REL_TOL);
        pass &= ok;
        found.push(format!("{exact:.4}->{}", hit.map_or("none".into(), |e| format!("{e:.4}"))));
    }
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for l in lines.iter().filter(|l| l.kind == LineKind::Delocalized && l.energy.abs() < C9_RESIDUAL_WINDOW) {
        worst = worst.max(finite_n_residual(&f, n, l.energy).unwrap().norm());
        checked += 1;
    }
    pass &= checked > 0 && worst < C9_RESIDUAL_TOL;
    let band = |lo: f64, hi: f64| {
        lines
            .iter()
            .filter(|l| l.kind == LineKind::Delocalized && l.energy.abs() >= lo && l.energy.abs() < hi)
            .map(|l| finite_n_residual(&f, n, l.energy).unwrap().norm())
            .fold(0.0, f64::max)
    };
    let bands: Vec<String> =
        [(25.0, 30.0), (30.0, 40.0)].iter().map(|&(lo, hi)| format!("{lo}-{hi}: {:.2e}", band(lo, hi))).collect();
    report(
        9,
        "embedded bound states",
        pass,
        &format!(
            "localized [{}]; max delocalized residual {worst:.3e} over {checked} states with |E| < {C9_RESIDUAL_WINDOW} \
             (informational, by |E| band: {})",
            found.join(", "),
            bands.join(", ")
        ),
    );
}

#[test]
fn c10_smooth_vs_true_zeros() {
    let scan = zscan_true_zeros(0.0, 100.0, 0.01).unwrap();
    let zeros = &scan.zeros;
    let first_err = zeros.first().map_or(f64::INFINITY, |z| (z - C10_FIRST_ZERO).abs());
    // smooth_n solves θ = (n − ½)π, which lands next to the (n+1)-th zero
    let mut shifted: f64 = 0.0;
    let mut literal: f64 = 0.0;
    for n in 1..=20u32 {
        let s = smooth_zero(n).unwrap();
        shifted = shifted.max((s - zeros[n as usize]).abs());
        literal = literal.max((s - zeros[n as usize - 1]).abs());
    }
    let smooth_count = (1..).take_while(|&n| smooth_zero(n).unwrap() < 100.0).count();
    let expected_count = (rs_theta(100.0) / PI + 0.5).floor() as usize;
    let pass = zeros.len() >= 21
        && first_err < C10_FIRST_TOL
        && shifted <= C10_GAP
        && smooth_count == 28
        && smooth_count == expected_count
        && zeros.len() == 29;
    report(
        10,
        "smooth vs true zeros",
        pass,
        &format!(
            "first zero {:.8} (err {first_err:.1e}); max |smooth_n - true_(n+1)| {shifted:.3} for n <= 20 \
             (literal pairing |smooth_n - true_n| {literal:.3}, informational); counts below 100: smooth {smooth_count}, true {}",
            zeros[0],
            zeros.len()
        ),
    );
}

#[test]
fn c11_mellin_asymptotics() {
    let a = PotentialSpec::SmoothSine;
    let dev = |t: f64| {
        let predicted = Complex64::new(0.0, -2.0) * Complex64::from_polar(1.0, 2.0 * rs_theta(t));
        (t * mellin(&a, t).unwrap() / predicted - 1.0).norm()
    };
    let ts = grid(30.0, 60.0, 9);
    let devs: Vec<f64> = ts.iter().map(|&t| dev(t)).collect();
    // least-squares slope of the deviation against t
    let tm = ts.iter().sum::<f64>() / ts.len() as f64;
    let dm = devs.iter().sum::<f64>() / devs.len() as f64;
    let slope = ts.iter().zip(&devs).map(|(t, d)| (t - tm) * (d - dm)).sum::<f64>()
        / ts.iter().map(|t| (t - tm).powi(2)).sum::<f64>();
    let pass = devs[0] <= C11_T0_TOL && slope <= 0.0;
    let shown: Vec<String> = devs.iter().map(|d| format!("{d:.3}")).collect();
    report(
        11,
        "Mellin asymptotics",
        pass,
        &format!("deviation at t=30 {:.4} (limit {C11_T0_TOL}), on 30..60 [{}], slope {slope:.2e}", devs[0], shown.join(", ")),
    );
}

#[test]
fn c12_critical_line_target() {
    let f = build_jost(JostModel::CriticalTarget { mu: C12_MU }).unwrap();
    let at_zero = f.eval(0.0).unwrap();
    let step = 0.01;
    let rows = argand_scan(&f, 0.0, 50.0, step).unwrap();
    let negative = rows.iter().find(|(t, v)| *t > 0.0 && v.re < 0.0).map(|(t, _)| *t);
    // read the CSV back and refine its local minima of |F|
    let csv = argand_csv(&rows);
    let parsed: Vec<(f64, f64)> = csv
        .lines()
        .skip(1)
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            (v[0], v[1].hypot(v[2]))
        })
        .collect();
    let mut refined = Vec::new();
    for w in parsed.windows(3) {
        if w[1].1 < w[0].1 && w[1].1 <= w[2].1 && w[1].1 < 0.05 && refined.len() < 3 {
            let z = find_real_zeros(&f, w[0].0, w[2].0, Some(step / 10.0)).unwrap();
            if let Some(z) = z.first() {
                refined.push((z.energy, f.eval(z.energy).unwrap().norm()));
            }
        }
    }
    let true_zeros = zscan_true_zeros(10.0, 30.0, 0.01).unwrap().zeros;
    let matches = refined.len() == 3
        && refined.iter().zip(&true_zeros).all(|((e, m), z)| *m < C12_ZERO_TOL && (e - z).abs() < 1e-6);
    let pass = at_zero == re(1.0) && negative.is_some() && matches;
    let shown: Vec<String> = refined.iter().map(|(e, m)| format!("{e:.6} (|F| {m:.1e})")).collect();
    report(
        12,
        "critical-line target",
        pass,
        &format!(
            "F(0) = {at_zero}; first Re F < 0 at t = {}; loops through origin at [{}]",
            negative.map_or("none".into(), |t| format!("{t:.2}")),
            shown.join(", ")
        ),
    );
}

#[test]
fn c13_euler_zagier() {
    let n = 200u64;
    let z = zeta_series(2.0, n).unwrap();
    let sq = star(&z, &z);
    let closed = euler_zagier_truncated(2.0, n).unwrap();
    let coeff = sq.max_coeff_diff(&closed);
    let same_support = sq.len() == closed.len();
    let zeta4 = PI.powi(4) / 90.0;
    let mut worst: f64 = 0.0;
    for &t in &[0.0, 0.7, 3.3, 14.1, 27.5, 49.0] {
        let mut direct = re(zeta4);
        for k in 2..=n {
            for m in 1..k {
                let (kf, mf) = (k as f64, m as f64);
                direct += 2.0 / (kf * mf).powi(2) * Complex64::from_polar(1.0, t * (kf / mf).ln());
            }
        }
        worst = worst.max((sq.eval_real(t) - direct).norm());
    }
    let pass = same_support && coeff < C13_COEFF_TOL && worst < C13_TAIL_TOL;
    report(
        13,
        "Euler-Zagier square",
        pass,
        &format!("{} terms, max coefficient difference {coeff:.1e}, max deviation from double sum {worst:.2e}", sq.len()),
    );
}
