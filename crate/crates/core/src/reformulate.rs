//! Radial projection from `e` to the cone boundary, warm-start
//! normalization, and the formulas translating between the conic problem
//! and the maximize-`λ_min`-on-`Affine_z` problem.

use crate::cones::{Cone, ConeSpec};
use crate::error::{Error, Result};
use crate::geometry::{default_feas_tol, AffineGeometry};
use crate::linalg::{add, dot, scale, sub};

/// `λ_min(x)` at or above this makes the radial projection undefined.
pub const PROJECTION_LIMIT: f64 = 1.0 - 1e-12;

/// `min c·x  s.t.  Ax = b, x ∈ K` with a known strictly feasible `e`.
#[derive(Debug, Clone)]
pub struct HPInstance {
    a_rows: Vec<Vec<f64>>,
    cone: Cone,
    geometry: AffineGeometry,
}

impl HPInstance {
    pub fn new(c: Vec<f64>, a_rows: Vec<Vec<f64>>, b: Vec<f64>, e: Vec<f64>, cone: ConeSpec) -> Result<Self> {
        let tol = default_feas_tol(&b);
        Self::with_tols(c, a_rows, b, e, cone, tol, crate::cones::DEFAULT_MULT_TOL)
    }

    pub fn with_tols(
        c: Vec<f64>,
        a_rows: Vec<Vec<f64>>,
        b: Vec<f64>,
        e: Vec<f64>,
        cone: ConeSpec,
        feas_tol: f64,
        mult_tol: f64,
    ) -> Result<Self> {
        let cone = Cone::new(cone, &e)?.with_mult_tol(mult_tol);
        let geometry = AffineGeometry::with_tol(&a_rows, &b, &c, &e, feas_tol)?;
        Ok(Self { a_rows, cone, geometry })
    }

    pub fn c(&self) -> &[f64] {
        self.geometry.c()
    }

    pub fn b(&self) -> &[f64] {
        self.geometry.b()
    }

    pub fn e(&self) -> &[f64] {
        self.geometry.e()
    }

    pub fn a_rows(&self) -> &[Vec<f64>] {
        &self.a_rows
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    pub fn cone_spec(&self) -> &ConeSpec {
        self.cone.spec()
    }

    pub fn geometry(&self) -> &AffineGeometry {
        &self.geometry
    }

    pub fn dim(&self) -> usize {
        self.geometry.dim()
    }

    pub fn degree(&self) -> usize {
        self.cone.degree()
    }

    /// `c·e`.
    pub fn ce(&self) -> f64 {
        dot(self.c(), self.e())
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        dot(self.c(), x)
    }

    pub fn lambda_min(&self, x: &[f64]) -> Result<f64> {
        self.cone.lambda_min(x)
    }
}

/// `e + s (x − e)`.
fn ray_point(e: &[f64], x: &[f64], s: f64) -> Vec<f64> {
    add(e, &scale(s, &sub(x, e)))
}

/// `π(x) = e + (x − e)/(1 − λ_min(x))`, the point where the ray from `e`
/// through `x` leaves the cone.
pub fn radial_project(inst: &HPInstance, x: &[f64]) -> Result<Vec<f64>> {
    let lm = inst.lambda_min(x)?;
    if lm >= PROJECTION_LIMIT {
        return Err(Error::ProjectionUndefined(lm));
    }
    Ok(ray_point(inst.e(), x, 1.0 / (1.0 - lm)))
}

/// Rescales `v` along the ray from `e` so that `λ_min = 1/4`.
pub fn normalize_start(inst: &HPInstance, v: &[f64]) -> Result<Vec<f64>> {
    let (cv, ce) = (inst.objective(v), inst.ce());
    if !(cv < ce) {
        return Err(Error::BadWarmStart { cv, ce });
    }
    let lm = inst.lambda_min(v)?;
    if lm >= PROJECTION_LIMIT {
        return Err(Error::ProjectionUndefined(lm));
    }
    Ok(ray_point(inst.e(), v, 0.75 / (1.0 - lm)))
}

/// Optimal value of `max λ_min` over `Affine_z`: `(z − z*)/(c·e − z*)`.
pub fn lambda_star_of_z(z: f64, z_star: f64, ce: f64) -> f64 {
    (z - z_star) / (ce - z_star)
}

/// Gap in `λ_min` on `Affine_z` equivalent to a relative objective gap `eps`
/// after radial projection.
pub fn gap_equivalence(eps: f64, z: f64, z_star: f64, ce: f64) -> f64 {
    eps / (1.0 - eps) * (ce - z) / (ce - z_star)
}

/// Maps an optimal `π*` of the conic problem to the maximizer of `λ_min` on
/// `Affine_z`: `e + (c·e − z)/(c·e − z*) (π* − e)`.
pub fn equivalent_opt_forward(inst: &HPInstance, z: f64, pi_star: &[f64], z_star: f64) -> Vec<f64> {
    let ce = inst.ce();
    ray_point(inst.e(), pi_star, (ce - z) / (ce - z_star))
}
