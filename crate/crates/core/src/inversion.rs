//! Reconstruction of a type I potential from a target Jost function by the
//! fixed point 𝐚 = 𝐠 + 𝐚⋆𝐚 with 𝐠 = (1 − F)/4.


use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dirichlet::{prune, star, star_screened, ExpPoly};
use crate::error::{Error, Result};
use crate::rational::PosRational;
use crate::specfun::zeta_real;

/// Truncation and stopping rules for [`fixed_point_solve`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InversionPolicy {
    pub max_iterations: usize,
    /// Coefficients below this are dropped after every ⋆-square.
    pub coeff_floor: f64,
    /// Frequencies above this (or below its inverse) are dropped.
    pub max_frequency: PosRational,
    /// Sup-norm of successive iterates on the grid that ends the iteration.
    pub convergence_tol: f64,
    /// Products c_i c_j smaller than `coeff_floor * screen_ratio` are never formed.
    pub screen_ratio: f64,
    /// Convergence grid: `grid_points` equally spaced points on [0, grid_hi].
    pub grid_hi: f64,
    pub grid_points: usize,
}

/// Default coefficient floor; see [`InversionPolicy::for_terms`].
pub const DEFAULT_COEFF_FLOOR: f64 = 1e-9;

impl InversionPolicy {
    /// Defaults for a target with frequencies up to `n_terms`: frequency cap
    /// n_terms², 200 iterations, tolerance 1e−10 on t ∈ [0, 50] with 2048 points.
    pub fn for_terms(n_terms: u64) -> Self {
        let cap = n_terms.max(2).saturating_mul(n_terms.max(2));
        InversionPolicy {
            max_iterations: 200,
            coeff_floor: DEFAULT_COEFF_FLOOR,
            max_frequency: PosRational::integer(cap).expect("cap is positive"),
            convergence_tol: 1e-10,
            screen_ratio: 1e-5,
            grid_hi: 50.0,
            grid_points: 2048,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.max_iterations > 0
            && self.coeff_floor > 0.0
            && self.convergence_tol > 0.0
            && self.screen_ratio > 0.0
            && self.screen_ratio <= 1.0
            && self.grid_hi > 0.0
            && self.grid_points >= 2
            && self.max_frequency > PosRational::one();
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("invalid inversion policy {self:?}")))
        }
    }

    pub fn grid(&self) -> Vec<f64> {
        let n = self.grid_points - 1;
        (0..=n).map(|k| self.grid_hi * k as f64 / n as f64).collect()
    }
}

/// Convergence diagnostics of the inversion series and of the solver run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    /// Σ|g_n|.
    pub g_l1: f64,
    /// Σ|g_n| ≤ 1/4, sufficient for convergence of the bracketing series.
    pub catalan_bound_ok: bool,
    /// sup over the grid of |F − 1|.
    pub sup_dev: f64,
    /// Whether sup|F − 1| ≤ 1 holds on the grid.
    pub sup_dev_ok: bool,
    /// Solver iterations; zero for a diagnostics-only report.
    pub iterations_used: usize,
    pub converged: bool,
    /// Last sup-grid distance between successive iterates.
    pub successive_diff: Option<f64>,
    /// sup over the grid of 4|𝐚 − 𝐠 − P(𝐚⋆𝐚)| with P the policy's pruning,
    /// i.e. the reconstruction error on the retained frequencies.
    pub final_residual: Option<f64>,
    /// 4 Σ|c| over the terms of 𝐚⋆𝐚 removed by pruning; the unpruned
    /// residual is at most `final_residual` plus this.
    pub truncation_bound: Option<f64>,
    pub retained_terms: Option<usize>,
    pub warnings: Vec<String>,
}

/// 𝐠 = (1 − F)/4 for a target normalized to F(0) = 1.
pub fn g_from_target(f: &ExpPoly) -> Result<ExpPoly> {
    let dev = (f.at_zero() - 1.0).norm();
    if dev > 1e-12 {
        return Err(Error::Unnormalized(dev));
    }
    Ok((&ExpPoly::one() - f).scale(Complex64::new(0.25, 0.0)))
}

/// Σ_{n ≤ n_terms} n^{−σ} n^{it}, the truncated series of ζ(σ − it).
pub fn zeta_series(sigma: f64, n_terms: u64) -> Result<ExpPoly> {
    if n_terms == 0 || !sigma.is_finite() {
        return Err(Error::InvalidArgument(format!("bad zeta series ({sigma}, {n_terms})")));
    }
    let mut terms = Vec::with_capacity(n_terms as usize);
    for n in 1..=n_terms {
        terms.push((PosRational::integer(n)?, Complex64::new((n as f64).powf(-sigma), 0.0)));
    }
    Ok(ExpPoly::from_terms(terms))
}

/// The truncated series of ζ(σ − it) divided by its own value at t = 0,
/// so that F(0) = 1 holds exactly for the polynomial.
pub fn zeta_sigma_target(sigma: f64, n_terms: u64) -> Result<ExpPoly> {
    let s = zeta_series(sigma, n_terms)?;
    let norm = s.at_zero().re;
    Ok(s.scale(Complex64::new(1.0 / norm, 0.0)))
}

/// ⋆-square that never forms products c_i c_j below `min_product`; exact otherwise.
fn star_square_screened(a: &ExpPoly, min_product: f64) -> ExpPoly {
    star_screened(a, a, min_product)
}

fn sup_on(p: &ExpPoly, grid: &[f64]) -> f64 {
    p.eval_grid(grid).iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// Σ|g| and sup|F − 1| on the grid, with the two sufficient conditions.
pub fn convergence_diagnostics<F>(g: &ExpPoly, f_target: F, t_grid: &[f64]) -> Result<ConvergenceReport>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let g_l1 = g.l1_norm();
    let mut sup_dev: f64 = 0.0;
    for &t in t_grid {
        sup_dev = sup_dev.max((f_target(t)? - 1.0).norm());
    }
    Ok(ConvergenceReport {
        g_l1,
        catalan_bound_ok: g_l1 <= 0.25,
        sup_dev,
        sup_dev_ok: sup_dev <= 1.0,
        iterations_used: 0,
        converged: false,
        successive_diff: None,
        final_residual: None,
        truncation_bound: None,
        retained_terms: None,
        warnings: Vec::new(),
    })
}

/// Iterates 𝐚 ← 𝐠 + prune(𝐚⋆𝐚) from 𝐚 = 𝐠. Non-convergence is reported in
/// the returned diagnostics rather than as an error.
pub fn fixed_point_solve(g: &ExpPoly, policy: &InversionPolicy) -> Result<(ExpPoly, ConvergenceReport)> {
    policy.validate()?;
    if !g.vanishes_at_zero(1e-12) {
        return Err(Error::InvalidArgument(format!("g(0) = {} must vanish", g.at_zero())));
    }
    let grid = policy.grid();
    let target = &ExpPoly::one() - &g.scale(Complex64::new(4.0, 0.0));
    let mut report = convergence_diagnostics(g, |t| Ok(target.eval_real(t)), &grid)?;
    if !report.catalan_bound_ok {
        report
            .warnings
            .push(format!("sum |g_n| = {:.6} exceeds 1/4; convergence is not guaranteed", report.g_l1));
    }
    let min_product = policy.coeff_floor * policy.screen_ratio;
    let mut a = g.clone();
    let mut diff = f64::INFINITY;
    let mut iterations = 0;
    while iterations < policy.max_iterations {
        iterations += 1;
        let sq = prune(&star_square_screened(&a, min_product), policy.coeff_floor, &policy.max_frequency);
        let next = g + &sq;
        diff = sup_on(&(&next - &a), &grid);
        a = next;
        if !diff.is_finite() {
            break;
        }
        if diff < policy.convergence_tol {
            report.converged = true;
            break;
        }
    }
    report.iterations_used = iterations;
    report.successive_diff = Some(diff);
    report.retained_terms = Some(a.len());
    let sq = star(&a, &a);
    let kept = prune(&sq, policy.coeff_floor, &policy.max_frequency);
    report.final_residual = Some(4.0 * sup_on(&(&(&a - g) - &kept), &grid));
    let dropped = sq.l1_norm() - kept.l1_norm();
    report.truncation_bound = Some(4.0 * dropped.max(0.0));
    if !report.converged {
        report.warnings.push(format!("no convergence after {iterations} iterations (last step {diff:e})"));
    }
    Ok((a, report))
}

/// sup over the grid of |(1 − 4(𝐚 − 𝐚⋆𝐚))(t) − F(t)|.
pub fn reconstruction_residual<F>(a: &ExpPoly, f_target: F, t_grid: &[f64]) -> Result<f64>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let rebuilt = &ExpPoly::one() - &(a - &star(a, a)).scale(Complex64::new(4.0, 0.0));
    let values = rebuilt.eval_grid(t_grid);
    let mut worst: f64 = 0.0;
    for (&t, v) in t_grid.iter().zip(values) {
        worst = worst.max((v - f_target(t)?).norm());
    }
    Ok(worst)
}

/// Σ|g_n| = (1 − 1/ζ(σ))/2 for the ζ(σ − it) target, and whether it is ≤ 1/4.
pub fn zeta_sigma_bound(sigma: f64) -> Result<(f64, bool)> {
    let l1 = 0.5 * (1.0 - 1.0 / zeta_real(sigma)?);
    Ok((l1, l1 <= 0.25))
}

/// σ_c with ζ(σ_c) = 2, below which the Catalan bound fails.
pub fn critical_sigma() -> Result<f64> {
    let (mut lo, mut hi) = (1.5, 2.0);
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if zeta_real(mid)? > 2.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// ζ_n(2σ) + 2 Σ_{n ≥ k > m ≥ 1} (km)^{−σ} (k/m)^{it}, summed directly.
pub fn euler_zagier_truncated(sigma: f64, n_terms: u64) -> Result<ExpPoly> {
    let mut terms = Vec::new();
    for k in 1..=n_terms {
        terms.push((PosRational::one(), Complex64::new((k as f64).powf(-2.0 * sigma), 0.0)));
        for m in 1..k {
            let c = 2.0 * (k as f64 * m as f64).powf(-sigma);
            terms.push((PosRational::new(k, m)?, Complex64::new(c, 0.0)));
        }
    }
    Ok(ExpPoly::from_terms(terms))
}

/// A bracketing of products of 𝐠.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bracketing {
    Leaf,
    Star(Box<Bracketing>, Box<Bracketing>),
}

impl Bracketing {
    pub fn order(&self) -> usize {
        match self {
            Bracketing::Leaf => 1,
            Bracketing::Star(l, r) => l.order() + r.order(),
        }
    }

    /// Evaluates the bracketing with 𝐠 at every leaf.
    pub fn apply(&self, g: &ExpPoly) -> ExpPoly {
        match self {
            Bracketing::Leaf => g.clone(),
            Bracketing::Star(l, r) => star(&l.apply(g), &r.apply(g)),
        }
    }
}

impl std::fmt::Display for Bracketing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Bracketing::Leaf => write!(f, "g"),
            Bracketing::Star(l, r) => write!(f, "({l}*{r})"),
        }
    }
}

/// Terms of the k-th fixed-point iterate a_{k+1} = g + a_k ⋆ a_k (a_0 = g),
/// expanded symbolically and kept up to `max_order` factors of g.
pub fn bracketing_iterate(steps: usize, max_order: usize) -> Vec<Bracketing> {
    let mut a = vec![Bracketing::Leaf];
    for _ in 0..steps {
        let mut next = vec![Bracketing::Leaf];
        for x in &a {
            for y in &a {
                if x.order() + y.order() <= max_order {
                    next.push(Bracketing::Star(Box::new(x.clone()), Box::new(y.clone())));
                }
            }
        }
        a = next;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::catalan;
    use num_bigint::BigUint;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn q(n: u64, d: u64) -> PosRational {
        PosRational::new(n, d).unwrap()
    }

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn single(c: f64) -> ExpPoly {
        ExpPoly::from_terms([(q(2, 1), re(c)), (q(1, 1), re(-c))])
    }

    #[test]
    fn g_from_targets() {
        assert!(g_from_target(&ExpPoly::one()).unwrap().is_zero());
        assert!(matches!(
            g_from_target(&ExpPoly::constant(re(1.1))),
            Err(Error::Unnormalized(_))
        ));
        let sigma = 2.0;
        let f = zeta_sigma_target(sigma, 64).unwrap();
        let g = g_from_target(&f).unwrap();
        let c = 1.0 / zeta_series(sigma, 64).unwrap().at_zero().re;
        assert!((g.coeff(&q(1, 1)).re - (1.0 - c) / 4.0).abs() < 1e-16);
        for n in [2u64, 7, 64] {
            assert!((g.coeff(&q(n, 1)).re + c / (4.0 * (n as f64).powf(sigma))).abs() < 1e-17);
        }
        assert!(g.vanishes_at_zero(1e-15));
        // full normalization limit
        let g1 = (1.0 - 1.0 / zeta_real(2.0).unwrap()) / 4.0;
        assert!((g1 - (1.0 - 6.0 / std::f64::consts::PI.powi(2)) / 4.0).abs() < 1e-15);
        assert!((g1 - 0.09801).abs() < 1e-5);
    }

    #[test]
    fn single_frequency_closed_form() {
        let c = 0.125;
        let policy = InversionPolicy { convergence_tol: 1e-14, ..InversionPolicy::for_terms(4) };
        let (a, report) = fixed_point_solve(&single(c), &policy).unwrap();
        assert!(report.converged);
        // scalar oracle: on α(2^{it} − 1) the map is α ← c − 2α²
        let mut alpha = c;
        for _ in 0..200 {
            alpha = c - 2.0 * alpha * alpha;
        }
        let closed = ((1.0 + 8.0 * c).sqrt() - 1.0) / 4.0;
        assert!((closed - (2f64.sqrt() - 1.0) / 4.0).abs() < 1e-16);
        assert!((a.coeff(&q(2, 1)).re - closed).abs() < 1e-12);
        assert!((a.coeff(&q(1, 1)).re + closed).abs() < 1e-12);
        assert_eq!(a.len(), 2);
        assert!((alpha - closed).abs() < 1e-15);
    }

    #[test]
    fn zero_g_gives_zero() {
        let (a, r) = fixed_point_solve(&ExpPoly::zero(), &InversionPolicy::for_terms(4)).unwrap();
        assert!(a.is_zero() && r.converged && r.g_l1 == 0.0 && r.catalan_bound_ok);
        let grid: Vec<f64> = (0..100).map(|k| k as f64 * 0.5).collect();
        assert_eq!(reconstruction_residual(&a, |_| Ok(re(1.0)), &grid).unwrap(), 0.0);
    }

    #[test]
    fn exact_solution_has_tiny_residual() {
        let c: f64 = 0.125;
        let alpha = ((1.0 + 8.0 * c).sqrt() - 1.0) / 4.0;
        let a = single(alpha);
        let target = &ExpPoly::one() - &single(c).scale(re(4.0));
        let grid: Vec<f64> = (0..500).map(|k| k as f64 * 0.1).collect();
        assert!(reconstruction_residual(&a, |t| Ok(target.eval_real(t)), &grid).unwrap() < 1e-12);
    }

    #[test]
    fn catalan_bound_values() {
        let (l1, ok) = zeta_sigma_bound(2.0).unwrap();
        assert!((l1 - 0.1960).abs() < 1e-4 && ok);
        let (l1, ok) = zeta_sigma_bound(1.5).unwrap();
        assert!((l1 - 0.3086).abs() < 1e-4 && !ok);
        let sc = critical_sigma().unwrap();
        assert!((sc - 1.72865).abs() < 5e-5);
        assert!((zeta_real(sc).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn diagnostics_for_sigma_one_and_a_half() {
        let g = g_from_target(&zeta_sigma_target(1.5, 64).unwrap()).unwrap();
        let grid: Vec<f64> = (0..=1000).map(|k| k as f64 * 0.1).collect();
        let norm = zeta_real(1.5).unwrap();
        let f = |t: f64| Ok(crate::specfun::zeta(Complex64::new(1.5, -t))? / norm);
        let r = convergence_diagnostics(&g, f, &grid).unwrap();
        assert!(!r.catalan_bound_ok);
        assert!(r.sup_dev_ok, "sup |F - 1| = {}", r.sup_dev);
    }

    #[test]
    fn one_step_is_worse_than_converged() {
        let f = zeta_sigma_target(2.0, 16).unwrap();
        let g = g_from_target(&f).unwrap();
        let policy = InversionPolicy { coeff_floor: 1e-9, ..InversionPolicy::for_terms(16) };
        let (a, r) = fixed_point_solve(&g, &policy).unwrap();
        assert!(r.converged);
        let grid = policy.grid();
        let ft = |t: f64| Ok(f.eval_real(t));
        let converged = reconstruction_residual(&a, ft, &grid).unwrap();
        let one_step = reconstruction_residual(&g, ft, &grid).unwrap();
        let gg = sup_on(&star(&g, &g), &grid);
        assert!((one_step - 4.0 * gg).abs() < 1e-12);
        assert!(converged < one_step);
    }

    #[test]
    fn second_iterate_matches_series_through_cubic_order() {
        let g = ExpPoly::from_terms([(q(3, 1), re(0.05)), (q(2, 1), re(-0.08)), (q(1, 1), re(0.03))]);
        let gg = star(&g, &g);
        let a1 = &g + &gg;
        let a2 = &g + &star(&a1, &a1);
        let expanded = &(&(&(&g + &gg) + &star(&g, &gg)) + &star(&gg, &g)) + &star(&gg, &gg);
        assert!(a2.max_coeff_diff(&expanded) < 1e-17);
        let policy = InversionPolicy { max_iterations: 2, coeff_floor: 1e-300, ..InversionPolicy::for_terms(3) };
        let (solved, _) = fixed_point_solve(&g, &policy).unwrap();
        assert!(solved.max_coeff_diff(&a2) < 1e-17);
    }

    #[test]
    fn bracketings_count_catalan() {
        for n in 1..=5usize {
            let terms = bracketing_iterate(n, n);
            let at_n: Vec<&Bracketing> = terms.iter().filter(|b| b.order() == n).collect();
            let distinct: HashSet<&&Bracketing> = at_n.iter().collect();
            assert_eq!(distinct.len(), at_n.len());
            assert_eq!(BigUint::from(at_n.len()), catalan(n as u32 - 1));
        }
        let cubic: Vec<String> =
            bracketing_iterate(2, 3).iter().filter(|b| b.order() == 3).map(|b| b.to_string()).collect();
        assert_eq!(cubic, vec!["(g*(g*g))", "((g*g)*g)"]);
    }

    #[test]
    fn iterate_k_is_exact_through_order_k_plus_one() {
        for k in 1..=4usize {
            let iterate = bracketing_iterate(k, k + 1);
            for n in 1..=k + 1 {
                let count = iterate.iter().filter(|b| b.order() == n).count();
                assert_eq!(BigUint::from(count), catalan(n as u32 - 1), "k = {k}, n = {n}");
            }
        }
    }

    #[test]
    fn euler_zagier_square() {
        let s = zeta_series(2.0, 50).unwrap();
        let sq = star(&s, &s);
        let ez = euler_zagier_truncated(2.0, 50).unwrap();
        assert!(sq.max_coeff_diff(&ez) < 1e-16);
        assert_eq!(sq.len(), ez.len());
    }

    fn int_poly() -> impl Strategy<Value = ExpPoly> {
        prop::collection::vec((1u64..30, -1.0f64..1.0), 1..15)
            .prop_map(|v| ExpPoly::from_terms(v.into_iter().map(|(n, c)| (q(n, 1), re(c)))))
    }

    proptest! {
        #[test]
        fn star_square_bound(g in int_poly(), t in -50.0f64..50.0) {
            let v = star(&g, &g).eval_real(t).norm();
            prop_assert!(v <= g.l1_norm().powi(2) * (1.0 + 1e-12));
        }

        #[test]
        fn screened_square_is_exact_without_screening(g in int_poly()) {
            let scale = 1.0 + g.l1_norm().powi(2);
            prop_assert!(star_square_screened(&g, 0.0).max_coeff_diff(&star(&g, &g)) < 1e-14 * scale);
        }
    }
}
