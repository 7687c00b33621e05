//! Brute-force reference solvers for desk-scale instances.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::Error;
use crate::linalg::{dot, norm, solve_square, Matrix};
use crate::reformulate::HPInstance;

pub const MAX_LINEAR_FACTORS: usize = 22;
pub const MAX_COMBINATIONS: u128 = 1_000_000;
const PIVOT_TOL: f64 = 1e-10;
const FEAS_TOL: f64 = 1e-9;
const SEGMENT_WIDTH: f64 = 1e-10;
const MAX_DOUBLINGS: usize = 60;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("enumeration too large: {0}")]
    TooLarge(String),
    #[error("objective is unbounded below on the feasible set")]
    Unbounded,
    #[error("feasible set is empty")]
    Infeasible,
    #[error("segment oracle needs a one-dimensional search space, got {0}")]
    DimensionMismatch(usize),
    #[error("unsupported cone: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Model(#[from] Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleMethod {
    VertexEnumeration,
    SegmentBisection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub z_star: f64,
    pub argmin: Vec<f64>,
    pub method: OracleMethod,
}

/// Minimizes `c·x` over `{Ax = b} ∩ {aᵢ·x ≥ 0}` by enumerating basic
/// solutions. Requires a polyhedral cone.
pub fn oracle_lp(inst: &HPInstance) -> Result<OracleResult, OracleError> {
    let m = linear_system(inst)?.normals.len();
    oracle_lp_ordered(inst, &(0..m).collect::<Vec<_>>())
}

/// Same as [`oracle_lp`] with the factors visited in the order `perm`.
pub fn oracle_lp_ordered(inst: &HPInstance, perm: &[usize]) -> Result<OracleResult, OracleError> {
    let sys = linear_system(inst)?;
    let m = sys.normals.len();
    assert_eq!(perm.len(), m, "perm must be a permutation of the factors");
    let k = sys.null.len();
    if k == 0 {
        // Affine set is the single point e.
        return Ok(OracleResult { z_star: inst.ce(), argmin: inst.e().to_vec(), method: OracleMethod::VertexEnumeration });
    }
    if binomial(m, k) > MAX_COMBINATIONS || binomial(m, k - 1) > MAX_COMBINATIONS {
        return Err(OracleError::TooLarge(format!("C({m}, {k}) basic solutions")));
    }
    // Constraint i in t-coordinates: rows[i]·t ≥ −offs[i].
    let rows: Vec<Vec<f64>> = sys.normals.iter().map(|a| sys.null.iter().map(|n| dot(a, n)).collect()).collect();
    let offs: Vec<f64> = sys.normals.iter().map(|a| dot(a, inst.e())).collect();
    let c_t: Vec<f64> = sys.null.iter().map(|n| dot(inst.c(), n)).collect();

    if has_descent_ray(&rows, &c_t, perm, k) {
        return Err(OracleError::Unbounded);
    }

    let mut best: Option<(f64, Vec<f64>)> = None;
    for_each_combination(m, k, |idx| {
        let sel: Vec<usize> = idx.iter().map(|&i| perm[i]).collect();
        let mat = Matrix::from_rows(&sel.iter().map(|&i| rows[i].clone()).collect::<Vec<_>>())
            .expect("rows have equal length");
        let rhs: Vec<f64> = sel.iter().map(|&i| -offs[i]).collect();
        let Some(t) = solve_square(&mat, &rhs, PIVOT_TOL) else { return };
        let feasible = rows.iter().zip(&offs).all(|(r, o)| dot(r, &t) + o >= -FEAS_TOL * (1.0 + o.abs()));
        if !feasible {
            return;
        }
        let z = dot(&c_t, &t);
        if best.as_ref().map_or(true, |(bz, _)| z < *bz) {
            best = Some((z, t));
        }
    });

    let (_, t) = best.ok_or(OracleError::Infeasible)?;
    let mut x = inst.e().to_vec();
    for (tj, n) in t.iter().zip(&sys.null) {
        x.iter_mut().zip(n).for_each(|(xi, ni)| *xi += tj * ni);
    }
    Ok(OracleResult { z_star: inst.objective(&x), argmin: x, method: OracleMethod::VertexEnumeration })
}

struct LinearSystem {
    normals: Vec<Vec<f64>>,
    /// Orthonormal basis of null(A).
    null: Vec<Vec<f64>>,
}

fn linear_system(inst: &HPInstance) -> Result<LinearSystem, OracleError> {
    if !inst.cone().is_polyhedral() {
        return Err(OracleError::Unsupported(format!("{} cone is not polyhedral", inst.cone_spec().kind())));
    }
    let normals = inst.cone().linear_factors()?;
    if normals.len() > MAX_LINEAR_FACTORS {
        return Err(OracleError::TooLarge(format!("{} linear factors", normals.len())));
    }
    let g = inst.geometry();
    let mut null = g.basis().to_vec();
    if !g.objective_degenerate() {
        null.push(g.descent_direction().to_vec());
    }
    Ok(LinearSystem { normals, null })
}

/// Looks for an extreme ray `d` of `{rows·d ≥ 0}` with `c·d < 0`.
fn has_descent_ray(rows: &[Vec<f64>], c_t: &[f64], perm: &[usize], k: usize) -> bool {
    let tol = 1e-9 * norm(c_t).max(1.0);
    let check = |d: &[f64]| {
        let dn = norm(d);
        if dn == 0.0 {
            return false;
        }
        [1.0, -1.0].iter().any(|s| {
            s * dot(c_t, d) < -tol * dn && rows.iter().all(|r| s * dot(r, d) >= -tol * dn)
        })
    };
    let mut found = false;
    if k == 1 {
        return check(&[1.0]);
    }
    for_each_combination(rows.len(), k - 1, |idx| {
        if found {
            return;
        }
        let sub: Vec<&Vec<f64>> = idx.iter().map(|&i| &rows[perm[i]]).collect();
        if let Some(d) = null_vector(&sub, k) {
            found = check(&d);
        }
    });
    found
}

/// Generalized cross product of `k − 1` vectors in `ℝᵏ`; `None` if they are
/// (numerically) dependent.
fn null_vector(rows: &[&Vec<f64>], k: usize) -> Option<Vec<f64>> {
    let mut d = vec![0.0; k];
    for (j, dj) in d.iter_mut().enumerate() {
        let minor: Vec<Vec<f64>> =
            rows.iter().map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, v)| *v).collect()).collect();
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        *dj = sign * det(minor);
    }
    let scale: f64 = rows.iter().map(|r| norm(r)).product();
    (norm(&d) > PIVOT_TOL * scale.max(f64::MIN_POSITIVE)).then_some(d)
}

fn det(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    let mut det = 1.0;
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        if a[piv][col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        det *= a[col][col];
        for i in (col + 1)..n {
            let f = a[i][col] / a[col][col];
            for k in col..n {
                a[i][k] -= f * a[col][k];
            }
        }
    }
    det
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else { return };
        idx[i] += 1;
        for j in (i + 1)..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Minimizes `c·x` over a feasible set whose search space `L` is a line.
///
/// The optimal value is located by bisection on `z`: a level `z` is
/// feasible iff `max_t λ_min(x_z + t u) ≥ 0`, where `x_z` is the point of
/// `Affine_z` on the steepest-descent line through `e` and `u` spans `L`.
/// The inner maximum of the concave function is found by golden-section
/// search.
pub fn oracle_segment(inst: &HPInstance) -> Result<OracleResult, OracleError> {
    let g = inst.geometry();
    if g.dim_l() != 1 {
        return Err(OracleError::DimensionMismatch(g.dim_l()));
    }
    let u = g.basis()[0].clone();
    let e = inst.e();
    if !(inst.lambda_min(e)? > 0.0) {
        return Err(OracleError::Infeasible);
    }
    let lm_line = |base: &[f64], t: f64| -> Result<f64, OracleError> {
        let x: Vec<f64> = base.iter().zip(&u).map(|(b, u)| b + t * u).collect();
        Ok(inst.lambda_min(&x)?)
    };

    if g.objective_degenerate() {
        // c is constant on the segment: every feasible point is optimal.
        let t = segment_endpoint(|t| lm_line(e, t))?;
        let x: Vec<f64> = e.iter().zip(&u).map(|(e, u)| e + t * u).collect();
        return Ok(OracleResult { z_star: inst.ce(), argmin: x, method: OracleMethod::SegmentBisection });
    }

    let w: Vec<f64> = g.descent_direction().iter().map(|v| -v).collect();
    let kappa = dot(inst.c(), &w);
    let ce = inst.ce();
    let x_of = |z: f64| -> Vec<f64> { e.iter().zip(&w).map(|(e, w)| e + (z - ce) / kappa * w).collect() };
    let best_on = |z: f64| -> Result<(f64, f64), OracleError> {
        let base = x_of(z);
        maximize_concave(|t| lm_line(&base, t))
    };

    let mut z_hi = ce;
    let mut hi_t = 0.0;
    let mut step = 1.0;
    let mut z_lo = None;
    for _ in 0..MAX_DOUBLINGS {
        let z = ce - step;
        let (t, val) = best_on(z)?;
        if val < 0.0 {
            z_lo = Some(z);
            break;
        }
        z_hi = z;
        hi_t = t;
        step *= 2.0;
    }
    let mut z_lo = z_lo.ok_or(OracleError::Unbounded)?;
    while z_hi - z_lo > SEGMENT_WIDTH {
        let mid = 0.5 * (z_lo + z_hi);
        if mid <= z_lo || mid >= z_hi {
            break;
        }
        let (t, val) = best_on(mid)?;
        if val >= 0.0 {
            z_hi = mid;
            hi_t = t;
        } else {
            z_lo = mid;
        }
    }
    let argmin: Vec<f64> = x_of(z_hi).iter().zip(&u).map(|(x, u)| x + hi_t * u).collect();
    Ok(OracleResult { z_star: inst.objective(&argmin), argmin, method: OracleMethod::SegmentBisection })
}

/// Argmax and max of a concave function of one variable.
fn maximize_concave(f: impl Fn(f64) -> Result<f64, OracleError>) -> Result<(f64, f64), OracleError> {
    let f0 = f(0.0)?;
    let mut s = 1.0;
    let mut bracketed = false;
    for _ in 0..MAX_DOUBLINGS {
        if f(s)? < f0 && f(-s)? < f0 {
            bracketed = true;
            break;
        }
        s *= 2.0;
    }
    if !bracketed {
        return Err(OracleError::Unbounded);
    }
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (-s, s);
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while b - a > 1e-13 * s {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc >= fd { (c, fc) } else { (d, fd) })
}

/// Upper end of `{t ≥ 0 : g(t) ≥ 0}` for concave `g` with `g(0) > 0`.
fn segment_endpoint(g: impl Fn(f64) -> Result<f64, OracleError>) -> Result<f64, OracleError> {
    let mut hi = 1.0;
    let mut n = 0;
    while g(hi)? >= 0.0 {
        hi *= 2.0;
        n += 1;
        if n > MAX_DOUBLINGS {
            return Err(OracleError::Unbounded);
        }
    }
    let mut lo = 0.0;
    while hi - lo > SEGMENT_WIDTH {
        let mid = 0.5 * (lo + hi);
        if g(mid)? >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}
