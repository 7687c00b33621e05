//! Seeded instance generators. Every generated instance has its interior
//! point built in, and every level set is bounded.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::format::{AffineSection, ConeFile, Metadata, ProblemFile};
use crate::error::{Error, Result};
use crate::linalg::norm;
use crate::reformulate::HPInstance;

pub const MAX_LP_VARS: usize = 20;

/// Random LP over the nonnegative orthant. `n_cons` counts all equality
/// rows, including the bounding row `1ᵀx = 1ᵀx̂` that is always attached.
pub fn generate_lp(n_vars: usize, n_cons: usize, seed: u64) -> Result<ProblemFile> {
    if n_vars > MAX_LP_VARS || n_cons == 0 || n_cons + 2 > n_vars {
        return Err(Error::InvalidParameter(format!(
            "generate_lp needs 1 ≤ n_cons ≤ n_vars − 2 and n_vars ≤ {MAX_LP_VARS} (got {n_vars}, {n_cons})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x_hat: Vec<f64> = (0..n_vars).map(|_| rng.gen_range(0.5..2.0)).collect();
    let mut rows: Vec<Vec<f64>> = (0..n_cons - 1)
        .map(|_| (0..n_vars).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();
    rows.push(vec![1.0; n_vars]);
    let rhs = rows.iter().map(|r| crate::linalg::dot(r, &x_hat)).collect();
    let mut c: Vec<f64> = (0..n_vars).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let cn = norm(&c);
    c.iter_mut().for_each(|v| *v /= cn);
    Ok(ProblemFile {
        dimension: n_vars,
        objective: c,
        affine: AffineSection { rows, rhs },
        interior_point: x_hat,
        cone: ConeFile::Orthant { dim: n_vars },
        metadata: Some(Metadata { known_optimum: None, generator_seed: Some(seed) }),
    })
}

/// Planar segment problem in `(x₁, x₂, r)`: the intersection of one to
/// three rotated Lorentz factors `‖Aᵢx + r bᵢ‖² ≤ r(αᵢᵀx + βᵢr)` with the
/// row `r = 1`. Each factor is stored as `p(y) = ½ yᵀBy` with
/// `yᵀBy = r(αᵀx + βr) − ‖Ax + rb‖²`, positive inside.
pub fn generate_socp_segment(seed: u64) -> ProblemFile {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x_hat = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
    let n_factors = rng.gen_range(1..=3usize);
    let mut parts = Vec::with_capacity(n_factors);
    for _ in 0..n_factors {
        let a = loop {
            let a: [[f64; 2]; 2] = [
                [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)],
                [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)],
            ];
            if (a[0][0] * a[1][1] - a[0][1] * a[1][0]).abs() > 0.25 {
                break a;
            }
        };
        let b = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let alpha = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let w = [
            a[0][0] * x_hat[0] + a[0][1] * x_hat[1] + b[0],
            a[1][0] * x_hat[0] + a[1][1] * x_hat[1] + b[1],
        ];
        let beta = w[0] * w[0] + w[1] * w[1] - alpha[0] * x_hat[0] - alpha[1] * x_hat[1] + rng.gen_range(0.5..2.0);
        parts.push(ConeFile::Quadratic { matrix: rotated_lorentz(a, b, alpha, beta) });
    }
    let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let cone = if parts.len() == 1 { parts.pop().unwrap() } else { ConeFile::Intersection { parts } };
    ProblemFile {
        dimension: 3,
        objective: vec![theta.cos(), theta.sin(), 0.0],
        affine: AffineSection { rows: vec![vec![0.0, 0.0, 1.0]], rhs: vec![1.0] },
        interior_point: vec![x_hat[0], x_hat[1], 1.0],
        cone,
        metadata: Some(Metadata { known_optimum: None, generator_seed: Some(seed) }),
    }
}

fn rotated_lorentz(a: [[f64; 2]; 2], b: [f64; 2], alpha: [f64; 2], beta: f64) -> Vec<Vec<f64>> {
    // yᵀBy = −‖Ax + rb‖² + r αᵀx + β r²
    let mut m = vec![vec![0.0; 3]; 3];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = -(a[0][i] * a[0][j] + a[1][i] * a[1][j]);
        }
        let atb = a[0][i] * b[0] + a[1][i] * b[1];
        m[i][2] = 0.5 * alpha[i] - atb;
        m[2][i] = m[i][2];
    }
    m[2][2] = beta - (b[0] * b[0] + b[1] * b[1]);
    m
}

/// The unit disk `x₁² + x₂² ≤ r²` on `r = 1`, centred at `e = (0, 0, 1)`.
/// `e` is a double root of the Lorentz factor.
pub fn lorentz_segment() -> ProblemFile {
    ProblemFile {
        dimension: 3,
        objective: vec![1.0, 0.5, 0.0],
        affine: AffineSection { rows: vec![vec![0.0, 0.0, 1.0]], rhs: vec![1.0] },
        interior_point: vec![0.0, 0.0, 1.0],
        cone: ConeFile::Quadratic { matrix: vec![vec![-1.0, 0.0, 0.0], vec![0.0, -1.0, 0.0], vec![0.0, 0.0, 1.0]] },
        metadata: Some(Metadata { known_optimum: Some(-(1.25f64).sqrt()), generator_seed: None }),
    }
}

/// `e` plus one unit step along the steepest feasible descent direction.
pub fn default_warm_start(inst: &HPInstance) -> Vec<f64> {
    let u = inst.geometry().descent_direction();
    inst.e().iter().zip(u).map(|(e, u)| e + u).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cones::validate_interior;

    #[test]
    fn lp_reproducible() {
        let a = generate_lp(8, 3, 42).unwrap();
        let b = generate_lp(8, 3, 42).unwrap();
        assert_eq!(a.to_text(), b.to_text());
        assert_ne!(a.to_text(), generate_lp(8, 3, 43).unwrap().to_text());
    }

    #[test]
    fn lp_passes_validation() {
        for seed in 0..20 {
            let pf = generate_lp(6, 2, seed).unwrap();
            let spec = pf.check_schema().unwrap();
            validate_interior(&spec, &pf.interior_point).unwrap();
            let inst = pf.to_instance().unwrap();
            inst.geometry().check_nondegenerate().unwrap();
        }
    }

    #[test]
    fn lp_size_limits() {
        assert!(generate_lp(21, 2, 0).is_err());
        assert!(generate_lp(3, 2, 0).is_err());
        assert!(generate_lp(3, 0, 0).is_err());
        assert_eq!(generate_lp(3, 1, 1).unwrap().to_instance().unwrap().geometry().dim_l(), 1);
    }

    #[test]
    fn socp_segment_valid() {
        for seed in 0..30 {
            let pf = generate_socp_segment(seed);
            let inst = pf.to_instance().unwrap_or_else(|e| panic!("seed {seed}: {e}"));
            assert_eq!(inst.geometry().dim_l(), 1);
            assert!(inst.lambda_min(inst.e()).unwrap() > 0.0);
        }
    }

    #[test]
    fn lorentz_fixture_double_root_at_e() {
        let inst = lorentz_segment().to_instance().unwrap();
        assert_eq!(inst.cone().spectrum(inst.e()).unwrap().multiplicities, vec![2]);
    }

    #[test]
    fn warm_start_decreases_objective() {
        let inst = generate_lp(5, 2, 7).unwrap().to_instance().unwrap();
        let v = default_warm_start(&inst);
        assert!(inst.objective(&v) < inst.ce());
        assert!(inst.geometry().affine_residual(&v) < 1e-12);
    }
}
