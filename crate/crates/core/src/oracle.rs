//! Direct discretization of the inverse Hamiltonian on a log-uniform grid.
//!
//! With q = log x sampled at midpoints q_j = (j + ½)h, h = log N / M, the
//! kernel (i/2)[sign(x − x′) + a(x)b(x′) − a(x′)b(x)]/√(xx′) acting on
//! L²(dx) becomes the Hermitian matrix
//! h·(i/2)[sign(j − k) + a_j b_k − a_k b_j] acting on v_j = √(h x_j) ψ(x_j).
//! Its eigenvalues are μ = 1/E.

use std::io::Write;

use faer::{Mat, Side};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jost::{finite_n_residual, JostEval};
use crate::specfun::PotentialSpec;
use crate::spectra::{LineKind, SpectralLine};

/// Eigenvalues with |μ| below this are zero modes with no energy.
pub const ZERO_MODE_TOL: f64 = 1e-12;
/// Hermiticity tolerance, relative to the largest entry.
pub const HERMITIAN_TOL: f64 = 1e-14;
/// Default tail-to-peak ratio below which a state is localized.
pub const LOCALIZATION_THRESHOLD: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Upper edge of the box 1 < x < N.
    pub n: f64,
    /// Number of grid points.
    pub m: usize,
}

impl GridSpec {
    pub fn new(n: f64, m: usize) -> Result<Self> {
        let g = GridSpec { n, m };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.n > 1.0) || !self.n.is_finite() {
            return Err(Error::InvalidArgument(format!("box edge N must be finite and > 1, got {}", self.n)));
        }
        if self.m < 2 {
            return Err(Error::InvalidArgument(format!("grid needs at least 2 points, got {}", self.m)));
        }
        Ok(())
    }

    /// Spacing h = log N / M in q = log x.
    pub fn step(&self) -> f64 {
        self.n.ln() / self.m as f64
    }

    /// Midpoints q_j = (j + ½)h.
    pub fn q_points(&self) -> Vec<f64> {
        let h = self.step();
        (0..self.m).map(|j| (j as f64 + 0.5) * h).collect()
    }

    pub fn x_points(&self) -> Vec<f64> {
        self.q_points().into_iter().map(f64::exp).collect()
    }

    /// Quadrature weights in q; all equal to h, summing to log N.
    pub fn weights(&self) -> Vec<f64> {
        vec![self.step(); self.m]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelKind {
    Free,
    Interacting,
}

#[derive(Debug, Clone)]
pub struct KernelMatrix {
    entries: Mat<Complex64>,
    grid: GridSpec,
    kind: KernelKind,
}

impl KernelMatrix {
    /// Wraps arbitrary entries; used to feed hand-built matrices to [`eigensolve`].
    pub fn from_entries(entries: Mat<Complex64>, grid: GridSpec, kind: KernelKind) -> Result<Self> {
        grid.validate()?;
        if entries.nrows() != grid.m || entries.ncols() != grid.m {
            return Err(Error::InvalidArgument(format!(
                "matrix is {}x{}, grid has {} points",
                entries.nrows(),
                entries.ncols(),
                grid.m
            )));
        }
        Ok(KernelMatrix { entries, grid, kind })
    }

    pub fn entries(&self) -> faer::MatRef<'_, Complex64> {
        self.entries.as_ref()
    }

    pub fn entry(&self, j: usize, k: usize) -> Complex64 {
        self.entries[(j, k)]
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    /// max |H_jk − conj H_kj|.
    pub fn hermiticity_defect(&self) -> f64 {
        let m = self.grid.m;
        let mut worst: f64 = 0.0;
        for j in 0..m {
            for k in 0..=j {
                worst = worst.max((self.entries[(j, k)] - self.entries[(k, j)].conj()).norm());
            }
        }
        worst
    }

    fn max_abs(&self) -> f64 {
        let m = self.grid.m;
        let mut worst: f64 = 0.0;
        for j in 0..m {
            for k in 0..m {
                worst = worst.max(self.entries[(j, k)].norm());
            }
        }
        worst
    }
}

fn sample(p: &PotentialSpec, xs: &[f64]) -> Result<Vec<f64>> {
    p.validate()?;
    xs.iter()
        .map(|&x| {
            let v = p.value(x);
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::InvalidPotential(format!("potential is {v} at x = {x}")))
            }
        })
        .collect()
}

/// Builds the discretized H⁻¹. Without `a` the kernel is free; with `a` but
/// no `b`, b ≡ 1 (the type I model).
pub fn build_matrix(grid: &GridSpec, a: Option<&PotentialSpec>, b: Option<&PotentialSpec>) -> Result<KernelMatrix> {
    grid.validate()?;
    let m = grid.m;
    let h = grid.step();
    let xs = grid.x_points();
    let (av, bv, kind) = match a {
        None => (vec![0.0; m], vec![0.0; m], KernelKind::Free),
        Some(a) => {
            let bv = match b {
                Some(b) => sample(b, &xs)?,
                None => vec![1.0; m],
            };
            (sample(a, &xs)?, bv, KernelKind::Interacting)
        }
    };
    let mut entries = Mat::<Complex64>::zeros(m, m);
    for j in 0..m {
        for k in 0..j {
            // sign(j − k) = 1 below the diagonal
            let v = 0.5 * h * (1.0 + av[j] * bv[k] - av[k] * bv[j]);
            entries[(j, k)] = Complex64::new(0.0, v);
            entries[(k, j)] = Complex64::new(0.0, -v);
        }
    }
    Ok(KernelMatrix { entries, grid: *grid, kind })
}

/// One eigenpair of H⁻¹: μ = 1/E, its energy unless μ is a zero mode, and a
/// unit eigenvector whose largest component is real and positive.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub mu: f64,
    pub energy: Option<f64>,
    pub vector: Vec<Complex64>,
}

/// Full spectrum sorted by μ.
pub fn eigensolve(matrix: &KernelMatrix) -> Result<Vec<EigenPair>> {
    check_hermitian(matrix)?;
    let evd = matrix.entries.self_adjoint_eigen(Side::Lower).map_err(|e| Error::Eigen(format!("{e:?}")))?;
    let u = evd.U();
    let s = evd.S().column_vector();
    let m = matrix.grid.m;
    let mut out: Vec<EigenPair> = (0..m)
        .map(|k| {
            let mu = s[k].re;
            let mut vector: Vec<Complex64> = (0..m).map(|j| u[(j, k)]).collect();
            let (idx, peak) = vector
                .iter()
                .copied()
                .enumerate()
                .max_by(|p, q| p.1.norm().total_cmp(&q.1.norm()))
                .unwrap_or_default();
            if peak.norm() > 0.0 {
                let phase = peak.conj() / peak.norm();
                vector.iter_mut().for_each(|v| *v *= phase);
                vector[idx] = Complex64::new(peak.norm(), 0.0);
            }
            let energy = (mu.abs() >= ZERO_MODE_TOL).then(|| 1.0 / mu);
            EigenPair { mu, energy, vector }
        })
        .collect();
    out.sort_by(|p, q| p.mu.total_cmp(&q.mu));
    Ok(out)
}

/// Eigenvalues μ only, ascending; cheaper than [`eigensolve`].
pub fn eigenvalues(matrix: &KernelMatrix) -> Result<Vec<f64>> {
    check_hermitian(matrix)?;
    let mut mus = matrix
        .entries
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Eigen(format!("{e:?}")))?;
    mus.sort_by(f64::total_cmp);
    Ok(mus)
}

fn check_hermitian(matrix: &KernelMatrix) -> Result<()> {
    let defect = matrix.hermiticity_defect();
    if defect > HERMITIAN_TOL * matrix.max_abs().max(f64::MIN_POSITIVE) {
        return Err(Error::NotHermitian(defect));
    }
    Ok(())
}

/// max |⟨v_j, v_k⟩ − δ_jk| over the returned eigenvectors.
pub fn gram_deviation(pairs: &[EigenPair]) -> f64 {
    let n = pairs.len();
    let mut v = Mat::<Complex64>::zeros(pairs.first().map_or(0, |p| p.vector.len()), n);
    for (k, p) in pairs.iter().enumerate() {
        for (j, c) in p.vector.iter().enumerate() {
            v[(j, k)] = *c;
        }
    }
    let gram = v.adjoint() * &v;
    let mut worst: f64 = 0.0;
    for j in 0..n {
        for k in 0..n {
            let target = if j == k { 1.0 } else { 0.0 };
            worst = worst.max((gram[(j, k)] - target).norm());
        }
    }
    worst
}

/// Tail and shape measures of one eigenvector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateShape {
    /// max over x > edge of |ψ(x)|√x, an estimate of |C_∞|.
    pub tail: f64,
    /// max over the whole box of |ψ(x)|√x.
    pub peak: f64,
    /// Σ|v_j|⁴ for the unit vector.
    pub ipr: f64,
}

/// |ψ(x_j)|√x_j = |v_j|/√h for the unit vector v.
pub fn state_shape(pair: &EigenPair, grid: &GridSpec, x_localization_edge: f64) -> StateShape {
    let scale = 1.0 / grid.step().sqrt();
    let edge_q = x_localization_edge.ln();
    let mut shape = StateShape { tail: 0.0, peak: 0.0, ipr: 0.0 };
    for (q, v) in grid.q_points().into_iter().zip(&pair.vector) {
        let amp = v.norm() * scale;
        shape.peak = shape.peak.max(amp);
        if q > edge_q {
            shape.tail = shape.tail.max(amp);
        }
        shape.ipr += v.norm_sqr() * v.norm_sqr();
    }
    shape
}

/// Classifies every non-zero mode with [`LOCALIZATION_THRESHOLD`]. The
/// residual field holds the tail-to-peak ratio.
pub fn classify_states(pairs: &[EigenPair], grid: &GridSpec, x_localization_edge: f64) -> Result<Vec<SpectralLine>> {
    classify_states_with(pairs, grid, x_localization_edge, LOCALIZATION_THRESHOLD)
}

pub fn classify_states_with(
    pairs: &[EigenPair],
    grid: &GridSpec,
    x_localization_edge: f64,
    threshold: f64,
) -> Result<Vec<SpectralLine>> {
    grid.validate()?;
    if !(x_localization_edge > 1.0 && x_localization_edge < grid.n) {
        return Err(Error::InvalidArgument(format!(
            "localization edge {x_localization_edge} must lie in (1, {})",
            grid.n
        )));
    }
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::InvalidArgument(format!("threshold {threshold} must lie in (0, 1)")));
    }
    Ok(pairs
        .iter()
        .filter_map(|p| {
            let energy = p.energy?;
            let shape = state_shape(p, grid, x_localization_edge);
            let ratio = if shape.peak > 0.0 { shape.tail / shape.peak } else { 0.0 };
            let kind = if ratio < threshold { LineKind::Localized } else { LineKind::Delocalized };
            Some(SpectralLine { energy, kind, residual: ratio })
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenconditionReport {
    /// One line per input state; the residual is |F(E) + F(−E)N^{iE}| for
    /// delocalized states and |F(E)| for localized ones.
    pub lines: Vec<SpectralLine>,
    pub max_delocalized: Option<f64>,
    pub mean_delocalized: Option<f64>,
    pub max_localized: Option<f64>,
    pub mean_localized: Option<f64>,
}

fn max_mean(v: &[f64]) -> (Option<f64>, Option<f64>) {
    if v.is_empty() {
        return (None, None);
    }
    let max = v.iter().copied().fold(0.0, f64::max);
    (Some(max), Some(v.iter().sum::<f64>() / v.len() as f64))
}

/// Checks classified matrix states against the analytic eigenconditions.
pub fn compare_eigencondition(lines: &[SpectralLine], f: &JostEval, n: f64) -> Result<EigenconditionReport> {
    let mut out = Vec::with_capacity(lines.len());
    let (mut deloc, mut loc) = (Vec::new(), Vec::new());
    for line in lines {
        let (kind, residual) = match line.kind {
            LineKind::Localized => {
                let r = f.eval(line.energy)?.norm();
                loc.push(r);
                (LineKind::Localized, r)
            }
            other => {
                let r = finite_n_residual(f, n, line.energy)?.norm();
                deloc.push(r);
                (other, r)
            }
        };
        out.push(SpectralLine { energy: line.energy, kind, residual });
    }
    let (max_delocalized, mean_delocalized) = max_mean(&deloc);
    let (max_localized, mean_localized) = max_mean(&loc);
    Ok(EigenconditionReport { lines: out, max_delocalized, mean_delocalized, max_localized, mean_localized })
}

/// Writes eigenvectors as little-endian f64 rows: μ followed by the real
/// and imaginary part of each component, so each row has 1 + 2M values.
pub fn write_eigenvectors<W: Write>(pairs: &[EigenPair], mut w: W) -> std::io::Result<()> {
    for p in pairs {
        w.write_all(&p.mu.to_le_bytes())?;
        for c in &p.vector {
            w.write_all(&c.re.to_le_bytes())?;
            w.write_all(&c.im.to_le_bytes())?;
        }
    }
    w.flush()
}
