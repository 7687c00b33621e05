#![allow(dead_code)]

use hyperprog::cones::{ConeSpec, ProductBlock};
use hyperprog::harness::{generate_lp, generate_socp_segment, lorentz_segment};
use hyperprog::linalg::{dot, norm, svec, Matrix};
use hyperprog::HPInstance;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn lp(n_vars: usize, n_cons: usize, seed: u64) -> HPInstance {
    generate_lp(n_vars, n_cons, seed).unwrap().to_instance().unwrap()
}

/// LPs with 4–10 variables and 1–3 equality rows, varied by seed.
pub fn seeded_lp(seed: u64) -> HPInstance {
    let n = 4 + (seed as usize % 7);
    lp(n, 1 + (seed as usize / 7) % (n - 2).min(3), seed)
}

pub fn socp(seed: u64) -> HPInstance {
    generate_socp_segment(seed).to_instance().unwrap()
}

pub fn lorentz() -> HPInstance {
    lorentz_segment().to_instance().unwrap()
}

fn unit(mut v: Vec<f64>) -> Vec<f64> {
    let n = norm(&v);
    v.iter_mut().for_each(|x| *x /= n);
    v
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

/// Orthant in ℝ⁴ intersected with three random halfspaces containing `e`,
/// with the bounding row `1ᵀx = 1ᵀe`.
pub fn halfspaces(seed: u64) -> HPInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let e: Vec<f64> = (0..4).map(|_| rng.gen_range(0.5..1.5)).collect();
    let mut parts = vec![ConeSpec::Orthant { dim: 4 }];
    for _ in 0..3 {
        let mut a = random_vec(&mut rng, 4);
        let shift = (rng.gen_range(0.2..1.0) - dot(&a, &e)) / dot(&e, &e);
        a.iter_mut().zip(&e).for_each(|(ai, ei)| *ai += shift * ei);
        parts.push(ConeSpec::Halfspace { a });
    }
    let rhs = e.iter().sum();
    HPInstance::new(unit(random_vec(&mut rng, 4)), vec![vec![1.0; 4]], vec![rhs], e, ConeSpec::Intersection { parts })
        .unwrap()
}

fn random_pd(rng: &mut ChaCha8Rng, order: usize) -> Matrix {
    let m = Matrix::from_rows(&(0..order).map(|_| random_vec(rng, order)).collect::<Vec<_>>()).unwrap();
    let mut p = m.matmul(&m.transpose());
    for i in 0..order {
        p[(i, i)] += 1.0;
    }
    p
}

/// Order-`order` PSD cone around a random positive definite `E`, with the
/// trace fixed.
pub fn psd(order: usize, seed: u64) -> HPInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let e = svec(&random_pd(&mut rng, order));
    let tr = svec(&Matrix::identity(order));
    let rhs = dot(&tr, &e);
    let c = unit(random_vec(&mut rng, e.len()));
    HPInstance::new(c, vec![tr], vec![rhs], e, ConeSpec::Psd { order }).unwrap()
}

/// `ℝ²₊ × Lorentz(3) × PSD(2)`, eight coordinates, one random row.
pub fn product(seed: u64) -> HPInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lorentz = Matrix::from_diag(&[-1.0, -1.0, 1.0]);
    let spec = ConeSpec::Product {
        blocks: vec![
            ProductBlock { start: 0, len: 2, cone: ConeSpec::Orthant { dim: 2 } },
            ProductBlock { start: 2, len: 3, cone: ConeSpec::Quadratic { b: lorentz } },
            ProductBlock { start: 5, len: 3, cone: ConeSpec::Psd { order: 2 } },
        ],
    };
    let mut e = vec![rng.gen_range(0.5..1.5), rng.gen_range(0.5..1.5)];
    e.extend([rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3), 1.0]);
    e.extend(svec(&random_pd(&mut rng, 2)));
    let row = random_vec(&mut rng, 8);
    let rhs = dot(&row, &e);
    HPInstance::new(unit(random_vec(&mut rng, 8)), vec![row], vec![rhs], e, spec).unwrap()
}

pub struct Family {
    pub name: &'static str,
    pub instances: Vec<HPInstance>,
}

/// One representative set of instances per implemented cone family.
pub fn families() -> Vec<Family> {
    vec![
        Family { name: "orthant", instances: (0..4).map(|s| lp(4 + 2 * s as usize, 2, s)).collect() },
        Family { name: "halfspaces", instances: (0..4).map(halfspaces).collect() },
        Family {
            name: "quadratic",
            instances: std::iter::once(lorentz()).chain((0..3).map(socp)).collect(),
        },
        Family { name: "psd", instances: vec![psd(2, 1), psd(3, 2), psd(4, 3), psd(4, 4)] },
        Family { name: "product", instances: (0..4).map(product).collect() },
    ]
}
