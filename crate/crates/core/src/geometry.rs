//! Affine feasible sets, the orthogonal projector onto the subspace `L` that
//! the objective level sets are translates of, and the `r_e` diagnostic.

use log::warn;

use crate::error::{Error, Result};
use crate::linalg::{axpy, dot, max_abs, norm, Matrix};
use crate::reformulate::HPInstance;

/// Relative threshold (times the largest row norm) below which a
/// Gram-Schmidt residual counts as linearly dependent.
pub const RANK_TOL: f64 = 1e-10;

/// Default constraint tolerance `1e-9 (1 + ‖b‖)`.
pub fn default_feas_tol(b: &[f64]) -> f64 {
    1e-9 * (1.0 + norm(b))
}

/// `Affine = {x : Ax = b}` together with the objective and an orthonormal
/// basis of `L = {v : Av = 0, c·v = 0}`. Immutable once built.
#[derive(Debug, Clone)]
pub struct AffineGeometry {
    a: Matrix,
    b: Vec<f64>,
    c: Vec<f64>,
    e: Vec<f64>,
    basis: Vec<Vec<f64>>,
    descent: Vec<f64>,
    dropped_rows: Vec<usize>,
    objective_degenerate: bool,
    feas_tol: f64,
}

/// Orthogonalizes `v` against `basis` twice (classical Gram-Schmidt with one
/// re-orthogonalization pass).
fn orthogonalize(v: &mut [f64], basis: &[Vec<f64>]) {
    for _ in 0..2 {
        for q in basis {
            let p = dot(q, v);
            axpy(-p, q, v);
        }
    }
}

impl AffineGeometry {
    pub fn new(a_rows: &[Vec<f64>], b: &[f64], c: &[f64], e: &[f64]) -> Result<Self> {
        Self::with_tol(a_rows, b, c, e, default_feas_tol(b))
    }

    pub fn with_tol(a_rows: &[Vec<f64>], b: &[f64], c: &[f64], e: &[f64], feas_tol: f64) -> Result<Self> {
        let d = c.len();
        if e.len() != d {
            return Err(Error::DimensionMismatch(format!("e has length {}, expected {d}", e.len())));
        }
        if a_rows.len() != b.len() {
            return Err(Error::DimensionMismatch(format!("{} rows but {} right-hand sides", a_rows.len(), b.len())));
        }
        if let Some(r) = a_rows.iter().position(|r| r.len() != d) {
            return Err(Error::DimensionMismatch(format!("constraint row {r} has wrong length")));
        }
        if a_rows.iter().flatten().chain(b).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("affine constraints"));
        }
        if !c.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("objective"));
        }
        if !e.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("interior point"));
        }
        let a = if a_rows.is_empty() { Matrix::zeros(0, d) } else { Matrix::from_rows(a_rows)? };

        let residual = norm(&crate::linalg::sub(&a.mul_vec(e), b));
        if residual > feas_tol {
            return Err(Error::InfeasibleInteriorPoint { residual, tol: feas_tol });
        }

        let largest = a_rows.iter().map(|r| norm(r)).fold(norm(c), f64::max);
        let thresh = RANK_TOL * largest.max(f64::MIN_POSITIVE);

        let mut rowspace: Vec<Vec<f64>> = Vec::new();
        let mut dropped_rows = Vec::new();
        for (i, row) in a_rows.iter().enumerate() {
            let mut r = row.clone();
            orthogonalize(&mut r, &rowspace);
            let n = norm(&r);
            if n > thresh {
                r.iter_mut().for_each(|v| *v /= n);
                rowspace.push(r);
            } else {
                warn!("constraint row {i} is linearly dependent on earlier rows; dropped");
                dropped_rows.push(i);
            }
        }

        let mut cr = c.to_vec();
        orthogonalize(&mut cr, &rowspace);
        let cn = norm(&cr);
        let objective_degenerate = cn <= thresh;
        let mut descent = vec![0.0; d];
        if objective_degenerate {
            warn!("objective is orthogonal to null(A)");
        } else {
            cr.iter_mut().for_each(|v| *v /= cn);
            descent = cr.iter().map(|v| -v).collect();
            rowspace.push(cr);
        }

        // Greedy completion: at each step take the coordinate direction with
        // the largest component outside the current span.
        let mut basis: Vec<Vec<f64>> = Vec::new();
        let target = d - rowspace.len();
        while basis.len() < target {
            let mut best: Option<(f64, Vec<f64>)> = None;
            for j in 0..d {
                let mut u = vec![0.0; d];
                u[j] = 1.0;
                orthogonalize(&mut u, &rowspace);
                orthogonalize(&mut u, &basis);
                let n = norm(&u);
                if best.as_ref().map_or(true, |(bn, _)| n > *bn) {
                    best = Some((n, u));
                }
            }
            let (n, mut u) = best.expect("d > 0 whenever target > 0");
            u.iter_mut().for_each(|v| *v /= n);
            orthogonalize(&mut u, &rowspace);
            orthogonalize(&mut u, &basis);
            let n = norm(&u);
            u.iter_mut().for_each(|v| *v /= n);
            basis.push(u);
        }

        Ok(Self { a, b: b.to_vec(), c: c.to_vec(), e: e.to_vec(), basis, descent, dropped_rows, objective_degenerate, feas_tol })
    }

    pub fn dim(&self) -> usize {
        self.c.len()
    }

    /// Dimension of `L`.
    pub fn dim_l(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<f64>] {
        &self.basis
    }

    /// Unit vector of `null(A)` orthogonal to `L` with `c·u < 0`; zero when
    /// the objective is degenerate.
    pub fn descent_direction(&self) -> &[f64] {
        &self.descent
    }

    pub fn dropped_rows(&self) -> &[usize] {
        &self.dropped_rows
    }

    pub fn objective_degenerate(&self) -> bool {
        self.objective_degenerate
    }

    pub fn feas_tol(&self) -> f64 {
        self.feas_tol
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn c(&self) -> &[f64] {
        &self.c
    }

    pub fn e(&self) -> &[f64] {
        &self.e
    }

    /// Errors unless the instance has a non-trivial objective and `dim L ≥ 1`.
    pub fn check_nondegenerate(&self) -> Result<()> {
        if self.objective_degenerate {
            return Err(Error::DegenerateObjective);
        }
        if self.basis.is_empty() {
            return Err(Error::DegenerateSubspace);
        }
        Ok(())
    }

    /// `P_L g = Σ ⟨q_i, g⟩ q_i`.
    pub fn project(&self, g: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; g.len()];
        for q in &self.basis {
            axpy(dot(q, g), q, &mut out);
        }
        out
    }

    /// Largest entrywise violation of `Ax = b`.
    pub fn affine_residual(&self, x: &[f64]) -> f64 {
        let ax = self.a.mul_vec(x);
        max_abs(&crate::linalg::sub(&ax, &self.b))
    }
}

/// Radius of the largest Euclidean ball around `e` whose slice by
/// `Affine_{c·e}` lies inside the cone. Exact for polyhedral cones: the
/// minimum over halfspace factors `aᵀx ≥ 0` of `aᵀe / ‖P_L a‖`.
pub fn compute_r_e(inst: &HPInstance) -> Result<f64> {
    let normals = inst.cone().linear_factors()?;
    let geom = inst.geometry();
    let e = inst.e();
    let mut r = f64::INFINITY;
    for a in normals {
        let pa = norm(&geom.project(&a));
        let scale = norm(&a);
        if pa <= 1e-14 * scale {
            continue;
        }
        r = r.min(dot(&a, e) / pa);
    }
    Ok(r)
}
