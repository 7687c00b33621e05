//! The restarting driver: two accelerated runs with fixed smoothing
//! parameters `μ₁ = 1/(12 ln n)` and `μ₂ = ε/(6 ln n)` advanced in gradient
//! lockstep. Whenever the `μ₁` run reaches an iterate with `λ_min ≥ 1/2`,
//! both runs restart from that iterate pushed back along the ray from `e` to
//! `λ_min = 1/4`, which lowers the objective level by a factor of at least
//! 3/2 relative to `c·e`.

use serde::{Deserialize, Serialize};

use crate::agm::{AgmState, TickOutcome};
use crate::error::{Error, Result};
use crate::reformulate::{normalize_start, radial_project, HPInstance, PROJECTION_LIMIT};

#[derive(Debug, Clone, PartialEq)]
pub struct MainConfig {
    /// Target relative accuracy, `0 < eps < 1`.
    pub eps: f64,
    pub l1_est: f64,
    /// Total gradient evaluations over both runs.
    pub grad_budget: u64,
    /// Known optimal value; enables stopping at the target gap.
    pub z_star_hint: Option<f64>,
}

impl MainConfig {
    pub fn new(eps: f64, l1_est: f64, grad_budget: u64) -> Result<Self> {
        let cfg = Self { eps, l1_est, grad_budget, z_star_hint: None };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_z_star(mut self, z_star: f64) -> Self {
        self.z_star_hint = Some(z_star);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(Error::InvalidParameter(format!("eps must lie in (0, 1), got {}", self.eps)));
        }
        if !(self.l1_est > 0.0 && self.l1_est.is_finite()) {
            return Err(Error::InvalidParameter(format!("L1 estimate must be positive, got {}", self.l1_est)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    TargetReached,
    BudgetExhausted,
}

/// Which sequence produced the reported point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IterateSource {
    Start,
    Agm1,
    Agm2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestartRecord {
    /// Index of the outer iteration that begins with this restart.
    pub ell: usize,
    /// Objective level before (`z_ℓ`) and after (`z_{ℓ+1}`) the restart.
    pub z_before: f64,
    pub z_after: f64,
    /// `(c·e − z_{ℓ+1}) / (c·e − z_ℓ)`.
    pub ratio: f64,
    pub lambda_min_trigger: f64,
    pub lambda_min_restart: f64,
    pub grad_count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub best_pi: Vec<f64>,
    pub best_obj: f64,
    pub best_source: IterateSource,
    pub rel_gap: Option<f64>,
    pub z1: f64,
    pub ce: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub grad_count_total: u64,
    pub grad_count_agm1: u64,
    pub grad_count_agm2: u64,
    pub outer_iterations: usize,
    pub restart_log: Vec<RestartRecord>,
    pub stop_reason: StopReason,
}

/// `e + (3/4)/(1 − λ_min(w)) (w − e)`; requires `λ_min(w) ≥ 1/2`.
pub fn restart_point(inst: &HPInstance, w: &[f64]) -> Result<Vec<f64>> {
    let lm = inst.lambda_min(w)?;
    if lm < 0.5 - 1e-12 {
        return Err(Error::PrematureRestart(lm));
    }
    if lm >= PROJECTION_LIMIT {
        return Err(Error::ProjectionUndefined(lm));
    }
    let s = 0.75 / (1.0 - lm);
    Ok(inst.e().iter().zip(w).map(|(e, w)| e + s * (w - e)).collect())
}

struct Best {
    pi: Vec<f64>,
    obj: f64,
    source: IterateSource,
}

impl Best {
    fn offer(&mut self, inst: &HPInstance, x: &[f64], source: IterateSource) {
        // λ_min(x) ≥ 1 only happens on unbounded instances; such points carry
        // no projection.
        if let Ok(pi) = radial_project(inst, x) {
            let obj = inst.objective(&pi);
            if obj < self.obj {
                *self = Best { pi, obj, source };
            }
        }
    }
}

fn rel_gap(obj: f64, z_star: Option<f64>, ce: f64) -> Option<f64> {
    z_star.map(|zs| (obj - zs) / (ce - zs))
}

fn check_objective(inst: &HPInstance) -> Result<()> {
    if inst.geometry().objective_degenerate() {
        return Err(Error::DegenerateObjective);
    }
    Ok(())
}

/// With `dim L = 0` every level set is a single point and the ray from `e`
/// through `v₁` already exits the cone at an optimum, so no gradients are
/// needed.
fn point_level_sets(inst: &HPInstance, v1: &[f64], cfg: &MainConfig, mu1: f64, mu2: f64) -> SolveReport {
    let ce = inst.ce();
    let mut best = Best { pi: Vec::new(), obj: f64::INFINITY, source: IterateSource::Start };
    best.offer(inst, v1, IterateSource::Start);
    SolveReport {
        rel_gap: rel_gap(best.obj, cfg.z_star_hint, ce),
        best_pi: best.pi,
        best_obj: best.obj,
        best_source: best.source,
        z1: inst.objective(v1),
        ce,
        mu1,
        mu2,
        grad_count_total: 0,
        grad_count_agm1: 0,
        grad_count_agm2: 0,
        outer_iterations: 1,
        restart_log: Vec::new(),
        stop_reason: StopReason::TargetReached,
    }
}

fn log_degree(inst: &HPInstance) -> Result<f64> {
    let n = inst.degree();
    if n < 2 {
        return Err(Error::DegreeTooSmall(n));
    }
    Ok((n as f64).ln())
}

/// Runs the restarting two-instance method from warm start `v_in`.
pub fn solve(inst: &HPInstance, v_in: &[f64], cfg: &MainConfig) -> Result<SolveReport> {
    cfg.validate()?;
    check_objective(inst)?;
    let ln_n = log_degree(inst)?;
    let mu1 = 1.0 / (12.0 * ln_n);
    let mu2 = cfg.eps / (6.0 * ln_n);
    let ce = inst.ce();

    let v1 = normalize_start(inst, v_in)?;
    let z1 = inst.objective(&v1);
    if inst.geometry().dim_l() == 0 {
        return Ok(point_level_sets(inst, &v1, cfg, mu1, mu2));
    }
    let mut agm1 = AgmState::new(inst, mu1, cfg.l1_est, &v1)?;
    let mut agm2 = AgmState::new(inst, mu2, cfg.l1_est, &v1)?;
    let mut best = Best { pi: Vec::new(), obj: f64::INFINITY, source: IterateSource::Start };
    best.offer(inst, &v1, IterateSource::Start);

    let (mut g1, mut g2) = (0u64, 0u64);
    let mut ell = 1;
    let mut restart_log = Vec::new();
    let reached = |b: &Best| rel_gap(b.obj, cfg.z_star_hint, ce).is_some_and(|g| g <= cfg.eps);
    let mut stop_reason = if reached(&best) { StopReason::TargetReached } else { StopReason::BudgetExhausted };

    while stop_reason != StopReason::TargetReached && g1 + g2 < cfg.grad_budget {
        let out = agm1.tick()?;
        g1 += 1;
        if let TickOutcome::Accepted(_) = out {
            let w = agm1.x().to_vec();
            best.offer(inst, &w, IterateSource::Agm1);
            if agm1.lambda_min() >= 0.5 {
                let next = restart_point(inst, &w)?;
                let z_before = agm1.z();
                let z_after = inst.objective(&next);
                restart_log.push(RestartRecord {
                    ell: ell + 1,
                    z_before,
                    z_after,
                    ratio: (ce - z_after) / (ce - z_before),
                    lambda_min_trigger: agm1.lambda_min(),
                    lambda_min_restart: inst.lambda_min(&next)?,
                    grad_count: g1 + g2,
                });
                ell += 1;
                agm1 = AgmState::new(inst, mu1, cfg.l1_est, &next)?;
                agm2 = AgmState::new(inst, mu2, cfg.l1_est, &next)?;
            }
        }
        if reached(&best) {
            stop_reason = StopReason::TargetReached;
            break;
        }
        if g1 + g2 >= cfg.grad_budget {
            break;
        }
        if let TickOutcome::Accepted(_) = agm2.tick()? {
            best.offer(inst, agm2.x(), IterateSource::Agm2);
        }
        g2 += 1;
        if reached(&best) {
            stop_reason = StopReason::TargetReached;
        }
    }

    Ok(SolveReport {
        rel_gap: rel_gap(best.obj, cfg.z_star_hint, ce),
        best_pi: best.pi,
        best_obj: best.obj,
        best_source: best.source,
        z1,
        ce,
        mu1,
        mu2,
        grad_count_total: g1 + g2,
        grad_count_agm1: g1,
        grad_count_agm2: g2,
        outer_iterations: ell,
        restart_log,
        stop_reason,
    })
}

/// A single accelerated run with an explicit `μ`, started from the
/// normalized warm start and never restarted. Reported in the same format.
pub fn solve_single(inst: &HPInstance, v_in: &[f64], mu: f64, cfg: &MainConfig) -> Result<SolveReport> {
    cfg.validate()?;
    check_objective(inst)?;
    let ce = inst.ce();
    let v1 = normalize_start(inst, v_in)?;
    let z1 = inst.objective(&v1);
    if inst.geometry().dim_l() == 0 {
        return Ok(point_level_sets(inst, &v1, cfg, mu, mu));
    }
    let mut agm = AgmState::new(inst, mu, cfg.l1_est, &v1)?;
    let mut best = Best { pi: Vec::new(), obj: f64::INFINITY, source: IterateSource::Start };
    best.offer(inst, &v1, IterateSource::Start);
    let reached = |b: &Best| rel_gap(b.obj, cfg.z_star_hint, ce).is_some_and(|g| g <= cfg.eps);
    let mut stop_reason = StopReason::BudgetExhausted;
    while !reached(&best) && agm.grad_count() < cfg.grad_budget {
        if let TickOutcome::Accepted(_) = agm.tick()? {
            best.offer(inst, agm.x(), IterateSource::Agm1);
        }
    }
    if reached(&best) {
        stop_reason = StopReason::TargetReached;
    }
    Ok(SolveReport {
        rel_gap: rel_gap(best.obj, cfg.z_star_hint, ce),
        best_pi: best.pi,
        best_obj: best.obj,
        best_source: best.source,
        z1,
        ce,
        mu1: mu,
        mu2: mu,
        grad_count_total: agm.grad_count(),
        grad_count_agm1: agm.grad_count(),
        grad_count_agm2: 0,
        outer_iterations: 1,
        restart_log: Vec::new(),
        stop_reason,
    })
}
