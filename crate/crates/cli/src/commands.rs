//! One adapter per subcommand: resolve parameters, call the library, tabulate.

use std::f64::consts::PI;
use std::path::PathBuf;

use clap::ValueEnum;
use num_complex::Complex64;
use serde_json::{json, Value};

use xpzeta::dirichlet::json::{from_json, to_json};
use xpzeta::dirichlet::ExpPoly;
use xpzeta::inversion::{fixed_point_solve, g_from_target, zeta_sigma_target, InversionPolicy};
use xpzeta::jost::{self, build_jost, JostModel};
use xpzeta::oracle::{self, build_matrix, classify_states, compare_eigencondition, eigensolve, GridSpec};
use xpzeta::rational::PosRational;
use xpzeta::specfun::{mellin, rs_theta, PotentialSpec};
use xpzeta::spectra::{self, CountingVariant, ModelParams, RdParams};

use crate::args::{Command, CountingKind, ModelArgs, ModelKind, ScanArgs};
use crate::config::Resolver;
use crate::error::CliError;
use crate::table::Table;

/// Result of one pipeline run.
#[derive(Debug)]
pub struct Outcome {
    pub table: Table,
    /// Subcommand-specific diagnostics for the run metadata.
    pub diagnostics: Value,
    pub warnings: Vec<String>,
    /// Set when the table was produced but the run still counts as failed.
    pub failure: Option<CliError>,
}

impl Outcome {
    fn table(table: Table) -> Self {
        Outcome { table, diagnostics: Value::Null, warnings: Vec::new(), failure: None }
    }
}

fn get_enum<E: ValueEnum>(r: &mut Resolver, key: &str, flag: Option<E>, default: E) -> Result<E, CliError> {
    let name = |e: &E| e.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    let raw = r.get(key, flag.as_ref().map(name), name(&default))?;
    E::from_str(&raw, true).map_err(|e| CliError::Validation(format!("{key}: {e}")))
}

fn rational(key: &str, raw: &str) -> Result<PosRational, CliError> {
    raw.parse().map_err(|e| CliError::Validation(format!("{key} = {raw:?}: {e}")))
}

fn scan(r: &mut Resolver, s: &ScanArgs, lo: f64, hi: f64, step: f64) -> Result<(f64, f64, f64), CliError> {
    let lo = r.get("t_lo", s.t_lo, lo)?;
    let hi = r.get("t_hi", s.t_hi, hi)?;
    let step = r.get("step", s.step, step)?;
    if !(step > 0.0) || !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(CliError::Validation(format!("bad scan range [{lo}, {hi}] with step {step}")));
    }
    Ok((lo, hi, step))
}

fn read_poly(path: &PathBuf) -> Result<ExpPoly, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
    Ok(from_json(&text)?)
}

fn model(r: &mut Resolver, m: &ModelArgs) -> Result<JostModel, CliError> {
    Ok(match get_enum(r, "model", m.model, ModelKind::Step)? {
        ModelKind::Step => {
            let a1 = r.get("a1", m.a1, 1.0)?;
            let x1 = r.get("x1", m.x1.clone(), "2".to_string())?;
            JostModel::Step { a1, x1: rational("x1", &x1)? }
        }
        ModelKind::ZetaSigma => JostModel::ZetaSigma { sigma: r.get("sigma", m.sigma, 2.0)? },
        ModelKind::Critical => JostModel::CriticalTarget { mu: r.get("mu", m.mu, 0.5)? },
        ModelKind::Smooth => JostModel::SmoothAsymptotic,
        ModelKind::TypeI => JostModel::TypeI { a: read_poly(&r.require("poly_a", m.poly_a.clone())?)? },
        ModelKind::TypeII => JostModel::TypeII {
            a: read_poly(&r.require("poly_a", m.poly_a.clone())?)?,
            b: read_poly(&r.require("poly_b", m.poly_b.clone())?)?,
        },
    })
}

fn grid_points(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).round() as usize;
    (0..=n).map(|k| lo + k as f64 * step).collect()
}

pub fn run(command: &Command, r: &mut Resolver) -> Result<Outcome, CliError> {
    match command {
        Command::Counting { variant, e_lo, e_hi, step, lambda, l_x } => {
            let variant = match get_enum(r, "variant", *variant, CountingKind::BerryKeating)? {
                CountingKind::BerryKeating => CountingVariant::BerryKeating,
                CountingKind::Connes => CountingVariant::Connes,
                CountingKind::Box => CountingVariant::Box,
            };
            let lo = r.get("e_lo", *e_lo, 1.0)?;
            let hi = r.get("e_hi", *e_hi, 100.0)?;
            let step = r.get("step", *step, 1.0)?;
            let lambda = r.get_opt("lambda", *lambda)?;
            let l_x = r.get_opt("l_x", *l_x)?;
            if !(step > 0.0) || !(lo <= hi) {
                return Err(CliError::Validation(format!("bad energy range [{lo}, {hi}] with step {step}")));
            }
            let mut t = Table::new(&["E", "N"]);
            for e in grid_points(lo, hi, step) {
                t.push(vec![e.into(), spectra::counting(variant, e, lambda, l_x)?.into()]);
            }
            Ok(Outcome::table(t))
        }
        Command::XpSpectrum { n_box, alpha, n_lo, n_hi } => {
            let params = ModelParams { n: r.get("n_box", *n_box, 1000.0)?, alpha: r.get("alpha", *alpha, 0.0)? };
            let first = r.get("n_lo", *n_lo, -5)?;
            let lines = spectra::xp_eigenvalues(&params, first, r.get("n_hi", *n_hi, 5)?)?;
            let mut t = Table::new(&["index", "E", "kind", "residual"]);
            for (k, l) in lines.iter().enumerate() {
                t.push(vec![(first + k as i64).into(), l.energy.into(), l.kind.as_str().into(), l.residual.into()]);
            }
            Ok(Outcome::table(t))
        }
        Command::RdSpectrum { g, h, n_box, e_lo, e_hi } => {
            let params =
                RdParams { g: r.get("g", *g, 1.0)?, h: r.get("h", *h, 1.0)?, n: r.get("n_box", *n_box, 100.0)? };
            let window = (r.get("e_lo", *e_lo, -50.0)?, r.get("e_hi", *e_hi, 0.99)?);
            let roots = spectra::rd_solve(&params, window)?;
            let mut t = Table::new(&["E", "branch"]);
            for root in &roots {
                t.push(vec![root.energy.into(), root.branch.into()]);
            }
            let mut out = Outcome::table(t);
            out.diagnostics = json!({ "edge_margin": spectra::RD_EDGE_MARGIN });
            Ok(out)
        }
        Command::SmoothZeros { count } => {
            let count = r.get("count", *count, 20)?;
            let mut t = Table::new(&["n", "E"]);
            for n in 1..=count {
                t.push(vec![(n as i64).into(), spectra::smooth_zero(n)?.into()]);
            }
            Ok(Outcome::table(t))
        }
        Command::TrueZeros { scan: s } => {
            let (lo, hi, step) = scan(r, s, 0.0, 100.0, 0.01)?;
            let found = spectra::zscan_true_zeros(lo, hi, step)?;
            let mut t = Table::new(&["n", "t"]);
            for (k, z) in found.zeros.iter().enumerate() {
                t.push(vec![(k + 1).into(), (*z).into()]);
            }
            let mut out = Outcome::table(t);
            out.warnings = found.warnings;
            out.diagnostics = json!({ "bisection_tol": spectra::ZSCAN_TOL });
            Ok(out)
        }
        Command::StepDemo { a1, x1, scan: s } => {
            let a1 = r.get("a1", *a1, 1.0)?;
            let x1 = rational("x1", &r.get("x1", x1.clone(), "2".to_string())?)?;
            let (lo, hi, step) = scan(r, s, 0.0, 40.0, 0.01)?;
            let log_x1 = x1.ln();
            let f = build_jost(JostModel::Step { a1, x1 })?;
            let zeros = jost::find_real_zeros(&f, lo, hi, Some(step))?;
            let mut t = Table::new(&["n", "E", "analytic_E", "kind", "residual"]);
            for z in &zeros {
                // nearest (2n + 1)π / log x1
                let n = ((z.energy * log_x1 / PI - 1.0) / 2.0).round();
                let analytic = (2.0 * n + 1.0) * PI / log_x1;
                t.push(vec![(n as i64).into(), z.energy.into(), analytic.into(), z.kind.as_str().into(), z.residual.into()]);
            }
            let mut out = Outcome::table(t);
            out.diagnostics = json!({ "zero_accept": jost::ZERO_ACCEPT, "bound_states": zeros.len() });
            Ok(out)
        }
        Command::Argand { model: m, scan: s } => {
            let f = build_jost(model(r, m)?)?;
            let (lo, hi, step) = scan(r, s, 0.0, 40.0, 0.01)?;
            let mut t = Table::new(&["t", "re_F", "im_F"]);
            for (x, v) in jost::argand_scan(&f, lo, hi, step)? {
                t.push(vec![x.into(), v.re.into(), v.im.into()]);
            }
            Ok(Outcome::table(t))
        }
        Command::Invert { sigma, n_terms, scan: s, coeff_floor, max_iterations, tol, potential_out } => {
            let sigma = r.get("sigma", *sigma, 2.0)?;
            let n_terms = r.get("n_terms", *n_terms, 64)?;
            let (lo, hi, step) = scan(r, s, 10.0, 25.0, 0.01)?;
            let defaults = InversionPolicy::for_terms(n_terms);
            let policy = InversionPolicy {
                coeff_floor: r.get("coeff_floor", *coeff_floor, defaults.coeff_floor)?,
                max_iterations: r.get("max_iterations", *max_iterations, defaults.max_iterations)?,
                convergence_tol: r.get("tol", *tol, defaults.convergence_tol)?,
                ..defaults
            };
            let potential_out = r.get_opt("potential_out", potential_out.clone())?;
            let g = g_from_target(&zeta_sigma_target(sigma, n_terms)?)?;
            let (a, report) = fixed_point_solve(&g, &policy)?;
            if let Some(path) = potential_out {
                std::fs::write(&path, to_json(&a))?;
            }
            let mut t = Table::new(&["t", "re_a", "im_a"]);
            let ts = grid_points(lo, hi, step);
            for (x, v) in ts.iter().zip(a.eval_grid(&ts)) {
                t.push(vec![(*x).into(), v.re.into(), v.im.into()]);
            }
            let failure = (!report.converged).then(|| {
                CliError::Numerical(format!(
                    "fixed point did not converge in {} iterations (last step {:e})",
                    report.iterations_used,
                    report.successive_diff.unwrap_or(f64::NAN)
                ))
            });
            Ok(Outcome {
                table: t,
                warnings: report.warnings.clone(),
                diagnostics: json!({ "policy": policy, "report": report }),
                failure,
            })
        }
        Command::MellinCheck { scan: s } => {
            let (lo, hi, step) = scan(r, s, 30.0, 60.0, 1.0)?;
            if lo <= 0.0 {
                return Err(CliError::Validation(format!("the asymptotic ratio needs t > 0, got t_lo = {lo}")));
            }
            let a = PotentialSpec::SmoothSine;
            let mut t = Table::new(&["t", "re_ahat", "im_ahat", "ratio_dev"]);
            for x in grid_points(lo, hi, step) {
                let ahat = mellin(&a, x)?;
                let predicted = Complex64::new(0.0, -2.0) * Complex64::from_polar(1.0, 2.0 * rs_theta(x));
                let dev = (x * ahat / predicted - 1.0).norm();
                t.push(vec![x.into(), ahat.re.into(), ahat.im.into(), dev.into()]);
            }
            let mut out = Outcome::table(t);
            out.diagnostics = json!({ "mellin_tol": xpzeta::specfun::mellin::MELLIN_TOL });
            Ok(out)
        }
        Command::MatrixOracle { n_box, m, a1, x1, edge, eigenvectors } => {
            let n = r.get("n_box", *n_box, (2.0 * PI).exp())?;
            let m = r.get("m", *m, 1000)?;
            let a1 = r.get_opt("a1", *a1)?;
            let grid = GridSpec::new(n, m)?;
            let (potential, model, default_edge) = match a1 {
                Some(a1) => {
                    let x1 = rational("x1", &r.get("x1", x1.clone(), "2".to_string())?)?;
                    let edge = 2.0 * x1.to_f64();
                    (Some(PotentialSpec::step(a1, x1.clone())?), JostModel::Step { a1, x1 }, edge)
                }
                None => (None, JostModel::TypeI { a: ExpPoly::zero() }, 4.0),
            };
            let edge = r.get("edge", *edge, default_edge)?;
            let dump = r.get_opt("eigenvectors", eigenvectors.clone())?;
            let matrix = build_matrix(&grid, potential.as_ref(), None)?;
            let pairs = eigensolve(&matrix)?;
            if let Some(path) = dump {
                let file = std::fs::File::create(&path)?;
                oracle::write_eigenvectors(&pairs, std::io::BufWriter::new(file))?;
            }
            let lines = classify_states(&pairs, &grid, edge)?;
            let report = compare_eigencondition(&lines, &build_jost(model)?, n)?;
            let mut t = Table::new(&["index", "E", "kind", "residual"]);
            for (k, l) in report.lines.iter().enumerate() {
                t.push(vec![k.into(), l.energy.into(), l.kind.as_str().into(), l.residual.into()]);
            }
            let zero_modes = pairs.iter().filter(|p| p.energy.is_none()).count();
            let mut out = Outcome::table(t);
            out.diagnostics = json!({
                "grid": grid,
                "kind": matrix.kind(),
                "localization_edge": edge,
                "localization_threshold": oracle::LOCALIZATION_THRESHOLD,
                "zero_mode_tol": oracle::ZERO_MODE_TOL,
                "zero_modes": zero_modes,
                "max_delocalized": report.max_delocalized,
                "mean_delocalized": report.mean_delocalized,
                "max_localized": report.max_localized,
                "mean_localized": report.mean_localized,
            });
            Ok(out)
        }
        Command::ValidateJost { model: m, scan: s } => {
            let f = build_jost(model(r, m)?)?;
            let (lo, hi, step) = scan(r, s, -50.0, 50.0, 0.1)?;
            let v = jost::validate(&f, &grid_points(lo, hi, step))?;
            let mut t = Table::new(&["reality", "regularity", "min_re", "type_i_identity", "upper_half_plane_min_re"]);
            t.push(vec![
                v.reality.into(),
                v.regularity.into(),
                v.min_re.into(),
                v.type_i_identity.into(),
                v.upper_half_plane_min_re.into(),
            ]);
            let mut out = Outcome::table(t);
            out.diagnostics = json!({ "uhp_heights": jost::UHP_HEIGHTS });
            Ok(out)
        }
    }
}
