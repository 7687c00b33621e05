//! Log-sum-exp smoothings of the extreme eigenvalues.
//!
//! `f_μ(x) = μ ln Σ_j exp(λ_j(x)/μ)` smooths `λ_max` from above and
//! `f̂_μ(x) = −f_μ(−x)` smooths `λ_min` from below, each within `μ ln n`.
//! Gradients are convex combinations of the cone's eigenvalue directions with
//! softmax (resp. soft-min) weights.

use crate::cones::{Cone, EigenGradient};
use crate::error::{Error, Result};
use crate::geometry::AffineGeometry;
use crate::linalg::{axpy, norm};

/// Shifted exponentials below this are dropped from gradient sums.
const WEIGHT_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy)]
pub struct SmoothedObjective<'a> {
    cone: &'a Cone,
    mu: f64,
}

/// Value of `f̂_μ` and its gradient projected onto `L`.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub value: f64,
    pub proj_grad: Vec<f64>,
    /// Rounding-level uncertainty of the gradient:
    /// `ε_mach ‖∇f̂‖ (1 + max|λ|/μ)`.
    pub grad_noise: f64,
}

impl<'a> SmoothedObjective<'a> {
    pub fn new(cone: &'a Cone, mu: f64) -> Result<Self> {
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::InvalidParameter(format!("smoothing parameter must be positive, got {mu}")));
        }
        Ok(Self { cone, mu })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn cone(&self) -> &'a Cone {
        self.cone
    }

    pub fn f_mu(&self, x: &[f64]) -> Result<f64> {
        let roots = self.cone.eigenvalues(x)?;
        let top = roots.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let s: f64 = roots.iter().map(|l| ((l - top) / self.mu).exp()).sum();
        Ok(top + self.mu * s.ln())
    }

    pub fn hat_f_mu(&self, x: &[f64]) -> Result<f64> {
        let roots = self.cone.eigenvalues(x)?;
        let bottom = roots.iter().copied().fold(f64::INFINITY, f64::min);
        let s: f64 = roots.iter().map(|l| ((bottom - l) / self.mu).exp()).sum();
        Ok(bottom - self.mu * s.ln())
    }

    pub fn grad_f_mu(&self, x: &[f64]) -> Result<Vec<f64>> {
        let entries = self.cone.eigen_gradients(x)?;
        Ok(combine(&entries, &softmax_weights(&entries, self.mu, Extreme::Max), x.len()))
    }

    /// Gradient of `f̂_μ`: the same directions as at `x`, soft-min weights.
    pub fn grad_hat_f_mu(&self, x: &[f64]) -> Result<Vec<f64>> {
        let entries = self.cone.eigen_gradients(x)?;
        Ok(combine(&entries, &softmax_weights(&entries, self.mu, Extreme::Min), x.len()))
    }

    /// One gradient computation: `(f̂_μ(x), P_L ∇f̂_μ(x))`. Bumps `counter`
    /// by exactly one.
    pub fn eval_on_affine(&self, geom: &AffineGeometry, x: &[f64], counter: &mut u64) -> Result<Evaluation> {
        *counter += 1;
        let value = self.hat_f_mu(x)?;
        let entries = self.cone.eigen_gradients(x)?;
        let grad = combine(&entries, &softmax_weights(&entries, self.mu, Extreme::Min), x.len());
        let scale = entries.iter().fold(0.0f64, |m, g| m.max(g.value.abs()));
        let grad_noise = f64::EPSILON * norm(&grad) * (1.0 + scale / self.mu);
        Ok(Evaluation { value, proj_grad: geom.project(&grad), grad_noise })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extreme {
    Max,
    Min,
}

/// Normalized weights `m_j exp(±(λ_j − λ_ext)/μ)`; sum to one.
pub fn softmax_weights(entries: &[EigenGradient], mu: f64, which: Extreme) -> Vec<f64> {
    let sign = match which {
        Extreme::Max => 1.0,
        Extreme::Min => -1.0,
    };
    let ext = entries.iter().map(|g| sign * g.value).fold(f64::NEG_INFINITY, f64::max);
    let raw: Vec<f64> = entries
        .iter()
        .map(|g| {
            let w = (g.multiplicity as f64) * ((sign * g.value - ext) / mu).exp();
            if w < WEIGHT_FLOOR {
                0.0
            } else {
                w
            }
        })
        .collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

fn combine(entries: &[EigenGradient], weights: &[f64], d: usize) -> Vec<f64> {
    let mut out = vec![0.0; d];
    for (g, w) in entries.iter().zip(weights) {
        if *w != 0.0 {
            axpy(*w, &g.direction, &mut out);
        }
    }
    out
}
