//! Finite-difference verification of the smoothed-objective gradients.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cones::ConeSpec;
use crate::error::Result;
use crate::linalg::{cholesky, norm, smat, svec, Matrix};
use crate::reformulate::HPInstance;
use crate::smoothing::SmoothedObjective;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradcheckReport {
    pub mu: f64,
    pub seed: u64,
    pub random_points: usize,
    pub engineered_points: usize,
    pub max_rel_err_f: f64,
    pub max_rel_err_hat_f: f64,
    pub max_rel_err: f64,
}

/// Compares both gradients with central differences at `trials` random
/// points of the affine set plus a set of points with repeated eigenvalues.
pub fn gradcheck(inst: &HPInstance, mu: f64, trials: usize, seed: u64) -> Result<GradcheckReport> {
    let obj = SmoothedObjective::new(inst.cone(), mu)?;
    let mut points = random_affine_points(inst, trials, seed);
    let engineered = engineered_points(inst);
    let n_eng = engineered.len();
    points.extend(engineered);

    let (mut err_f, mut err_hat) = (0.0f64, 0.0f64);
    for x in &points {
        err_f = err_f.max(rel_err(&obj.grad_f_mu(x)?, &fd_gradient(|y| obj.f_mu(y), x, mu)?));
        err_hat = err_hat.max(rel_err(&obj.grad_hat_f_mu(x)?, &fd_gradient(|y| obj.hat_f_mu(y), x, mu)?));
    }
    Ok(GradcheckReport {
        mu,
        seed,
        random_points: trials,
        engineered_points: n_eng,
        max_rel_err_f: err_f,
        max_rel_err_hat_f: err_hat,
        max_rel_err: err_f.max(err_hat),
    })
}

/// `‖g − r‖ / ‖r‖`.
pub fn rel_err(g: &[f64], reference: &[f64]) -> f64 {
    let diff: Vec<f64> = g.iter().zip(reference).map(|(a, b)| a - b).collect();
    norm(&diff) / norm(reference).max(f64::MIN_POSITIVE)
}

/// Richardson-extrapolated central differences. The step is tied to `μ`,
/// which sets the curvature scale of the smoothed functions.
pub fn fd_gradient(f: impl Fn(&[f64]) -> Result<f64>, x: &[f64], mu: f64) -> Result<Vec<f64>> {
    let h = 5e-3 * mu.min(1.0);
    let mut y = x.to_vec();
    let mut g = vec![0.0; x.len()];
    let central = |i: usize, h: f64, y: &mut Vec<f64>| -> Result<f64> {
        y[i] = x[i] + h;
        let fp = f(y)?;
        y[i] = x[i] - h;
        let fm = f(y)?;
        y[i] = x[i];
        Ok((fp - fm) / (2.0 * h))
    };
    for (i, gi) in g.iter_mut().enumerate() {
        let d1 = central(i, h, &mut y)?;
        let d2 = central(i, 0.5 * h, &mut y)?;
        *gi = (4.0 * d2 - d1) / 3.0;
    }
    Ok(g)
}

/// Points `e + Σ tⱼ nⱼ` with `nⱼ` an orthonormal basis of `null(A)` and
/// `tⱼ` uniform in `[−‖e‖, ‖e‖]`.
pub fn random_affine_points(inst: &HPInstance, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let g = inst.geometry();
    let mut dirs = g.basis().to_vec();
    if !g.objective_degenerate() {
        dirs.push(g.descent_direction().to_vec());
    }
    let r = norm(inst.e());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut x = inst.e().to_vec();
            for d in &dirs {
                let t = rng.gen_range(-r..r);
                x.iter_mut().zip(d).for_each(|(xi, di)| *xi += t * di);
            }
            x
        })
        .collect()
}

/// Points with repeated eigenvalues: multiples of `e`, product points that
/// agree with `e` on one block, and PSD blocks with a repeated eigenvalue.
pub fn engineered_points(inst: &HPInstance) -> Vec<Vec<f64>> {
    let e = inst.e();
    let mut pts = vec![e.iter().map(|v| 2.0 * v).collect::<Vec<_>>(), e.iter().map(|v| -0.5 * v).collect()];
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut blocks = Vec::new();
    collect_blocks(inst.cone_spec(), 0, e.len(), &mut blocks);
    for (start, len, spec) in blocks {
        if len < e.len() {
            // Perturb every coordinate outside this block.
            let mut x = e.to_vec();
            for (i, xi) in x.iter_mut().enumerate() {
                if i < start || i >= start + len {
                    *xi += rng.gen_range(-0.5..0.5);
                }
            }
            pts.push(x);
        }
        if let ConeSpec::Psd { order } = spec {
            if *order >= 2 {
                pts.push(psd_rank_one_point(e, start, *order, &mut rng));
            }
        }
    }
    pts
}

fn collect_blocks<'s>(spec: &'s ConeSpec, start: usize, len: usize, out: &mut Vec<(usize, usize, &'s ConeSpec)>) {
    match spec {
        ConeSpec::Product { blocks } => {
            for b in blocks {
                collect_blocks(&b.cone, start + b.start, b.len, out);
            }
        }
        _ => out.push((start, len, spec)),
    }
}

/// `E + 2 L q qᵀ Lᵀ` on the block, so that `L⁻¹XL⁻ᵀ = I + 2qqᵀ` has the
/// eigenvalue 1 repeated `order − 1` times.
fn psd_rank_one_point(e: &[f64], start: usize, order: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let len = order * (order + 1) / 2;
    let eb = smat(&e[start..start + len], order);
    let Some(l) = cholesky(&eb) else { return e.to_vec() };
    let q: Vec<f64> = (0..order).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let lq = l.mul_vec(&q);
    let mut upd = Matrix::zeros(order, order);
    for i in 0..order {
        for j in 0..order {
            upd[(i, j)] = 2.0 * lq[i] * lq[j];
        }
    }
    let mut x = e.to_vec();
    for (xi, u) in x[start..start + len].iter_mut().zip(svec(&upd)) {
        *xi += u;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::generate::{generate_lp, lorentz_segment};

    #[test]
    fn lorentz_passes() {
        let inst = lorentz_segment().to_instance().unwrap();
        for mu in [1.0, 0.01] {
            let r = gradcheck(&inst, mu, 20, 3).unwrap();
            assert!(r.max_rel_err <= 1e-6, "{r:?}");
        }
    }

    #[test]
    fn reproducible() {
        let inst = generate_lp(6, 2, 1).unwrap().to_instance().unwrap();
        assert_eq!(gradcheck(&inst, 0.1, 10, 9).unwrap(), gradcheck(&inst, 0.1, 10, 9).unwrap());
    }

    #[test]
    fn random_points_are_affine() {
        let inst = generate_lp(6, 2, 1).unwrap().to_instance().unwrap();
        for x in random_affine_points(&inst, 10, 0) {
            assert!(inst.geometry().affine_residual(&x) < 1e-9);
        }
    }
}
