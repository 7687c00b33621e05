//! Accelerated gradient ascent on `f̂_μ` over `Affine_z` with a
//! doubling/halving search on the Lipschitz constant.
//!
//! The state machine advances one gradient evaluation per [`AgmState::tick`]
//! so that two instances can be interleaved at equal gradient counts. A trial
//! costs two evaluations: one at `y` to form the candidate `x`, one at `x`
//! for the acceptance test. The gradient at an accepted `x` is reused in the
//! `v` update.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::linalg::{axpy, dot, norm};
use crate::reformulate::HPInstance;
use crate::smoothing::{Evaluation, SmoothedObjective};

pub const L_FLOOR: f64 = 1e-12;
pub const L_CEILING: f64 = 1e30;
/// Multiple of the gradient's rounding level below which the two sides of
/// the acceptance test count as tied.
pub const TIE_FACTOR: f64 = 64.0;

#[derive(Debug, Clone, PartialEq)]
pub enum Phase {
    NeedTrial,
    AwaitAccept { a: f64, y: Vec<f64>, x: Vec<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TickOutcome {
    /// A new iterate `x_k` was accepted; carries the new `k`.
    Accepted(usize),
    SearchContinues,
}

/// Data of the most recent accepted step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    pub a: f64,
    pub a_acc_before: f64,
    pub l_trial: f64,
}

#[derive(Debug, Clone)]
pub struct AgmState<'a> {
    inst: &'a HPInstance,
    obj: SmoothedObjective<'a>,
    k: usize,
    x: Vec<f64>,
    v: Vec<f64>,
    a_acc: f64,
    l: f64,
    z: f64,
    grad_count: u64,
    rejections: u64,
    phase: Phase,
    best_lambda_min: f64,
    last_lambda_min: f64,
    last_value: Option<f64>,
    last_step: Option<StepRecord>,
    history: Option<(usize, VecDeque<(usize, f64)>)>,
}

impl<'a> AgmState<'a> {
    /// Starts the method at `x0` with `L = l1_est / μ`, `v = x0`, `A = 0`.
    pub fn new(inst: &'a HPInstance, mu: f64, l1_est: f64, x0: &[f64]) -> Result<Self> {
        let obj = SmoothedObjective::new(inst.cone(), mu)?;
        if !(l1_est > 0.0 && l1_est.is_finite()) {
            return Err(Error::InvalidParameter(format!("L1 estimate must be positive, got {l1_est}")));
        }
        if x0.len() != inst.dim() {
            return Err(Error::DimensionMismatch(format!("start has length {}, expected {}", x0.len(), inst.dim())));
        }
        let z = inst.objective(x0);
        let ce = inst.ce();
        if !(z < ce) {
            return Err(Error::BadStart(format!("c·x0 = {z} is not below c·e = {ce}")));
        }
        let res = inst.geometry().affine_residual(x0);
        let tol = inst.geometry().feas_tol().max(1e-8);
        if res > tol {
            return Err(Error::BadStart(format!("affine residual {res:.3e} exceeds {tol:.3e}")));
        }
        let lm = inst.lambda_min(x0)?;
        Ok(Self {
            inst,
            obj,
            k: 0,
            x: x0.to_vec(),
            v: x0.to_vec(),
            a_acc: 0.0,
            l: l1_est / mu,
            z,
            grad_count: 0,
            rejections: 0,
            phase: Phase::NeedTrial,
            best_lambda_min: lm,
            last_lambda_min: lm,
            last_value: None,
            last_step: None,
            history: None,
        })
    }

    /// Keeps the last `capacity` accepted `(k, f̂_μ(x_k))` pairs.
    pub fn with_history(mut self, capacity: usize) -> Self {
        self.history = Some((capacity, VecDeque::with_capacity(capacity)));
        self
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    pub fn a_acc(&self) -> f64 {
        self.a_acc
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    pub fn mu(&self) -> f64 {
        self.obj.mu()
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn grad_count(&self) -> u64 {
        self.grad_count
    }

    pub fn rejections(&self) -> u64 {
        self.rejections
    }

    pub fn phase(&self) -> &Phase {
        &self.phase
    }

    pub fn best_lambda_min(&self) -> f64 {
        self.best_lambda_min
    }

    /// `λ_min` of the current accepted iterate.
    pub fn lambda_min(&self) -> f64 {
        self.last_lambda_min
    }

    /// `f̂_μ(x_k)` of the last accepted iterate (`None` before the first).
    pub fn value(&self) -> Option<f64> {
        self.last_value
    }

    pub fn last_step(&self) -> Option<StepRecord> {
        self.last_step
    }

    pub fn history(&self) -> Option<&VecDeque<(usize, f64)>> {
        self.history.as_ref().map(|(_, h)| h)
    }

    fn evaluate(&mut self, x: &[f64]) -> Result<Evaluation> {
        self.obj.eval_on_affine(self.inst.geometry(), x, &mut self.grad_count)
    }

    /// Performs exactly one gradient evaluation.
    pub fn tick(&mut self) -> Result<TickOutcome> {
        match std::mem::replace(&mut self.phase, Phase::NeedTrial) {
            Phase::NeedTrial => {
                let l = self.l;
                let a = (1.0 + (1.0 + 2.0 * self.a_acc * l).sqrt()) / l;
                let denom = self.a_acc + a;
                let y: Vec<f64> =
                    self.x.iter().zip(&self.v).map(|(xk, v)| (self.a_acc * xk + a * v) / denom).collect();
                let ev = self.evaluate(&y)?;
                let mut x = y.clone();
                axpy(1.0 / l, &ev.proj_grad, &mut x);
                self.phase = Phase::AwaitAccept { a, y, x };
                Ok(TickOutcome::SearchContinues)
            }
            Phase::AwaitAccept { a, y, x } => {
                let ev = self.evaluate(&x)?;
                let l = self.l;
                let g = &ev.proj_grad;
                let step: Vec<f64> = y.iter().zip(&x).map(|(yi, xi)| yi - xi).collect();
                // y − x lies in L, so ⟨∇f̂, y − x⟩ = ⟨P_L∇f̂, y − x⟩.
                // Where f̂ is locally linear the two sides agree exactly and
                // rounding alone would decide; such ties accept.
                let tie = TIE_FACTOR * ev.grad_noise * norm(g) / l;
                if dot(g, &step) + dot(g, g) / l > tie {
                    self.l = 2.0 * l;
                    self.rejections += 1;
                    if self.l > L_CEILING {
                        return Err(Error::LipschitzOverflow(L_CEILING));
                    }
                    return Ok(TickOutcome::SearchContinues);
                }
                axpy(a, g, &mut self.v);
                self.last_step = Some(StepRecord { a, a_acc_before: self.a_acc, l_trial: l });
                self.a_acc += a;
                if l / 2.0 >= L_FLOOR {
                    self.l = l / 2.0;
                }
                self.x = x;
                self.k += 1;
                self.last_value = Some(ev.value);
                let lm = self.inst.lambda_min(&self.x)?;
                self.last_lambda_min = lm;
                self.best_lambda_min = self.best_lambda_min.max(lm);
                if let Some((cap, h)) = self.history.as_mut() {
                    if h.len() == *cap {
                        h.pop_front();
                    }
                    if *cap > 0 {
                        h.push_back((self.k, ev.value));
                    }
                }
                Ok(TickOutcome::Accepted(self.k))
            }
        }
    }

    /// Ticks until `stop` is met. The predicate, if any, is checked after
    /// every accepted iterate.
    pub fn run(&mut self, stop: &StopCondition<'_>) -> Result<()> {
        loop {
            if stop.max_grads.is_some_and(|m| self.grad_count >= m) {
                return Ok(());
            }
            if stop.max_iters.is_some_and(|m| self.k >= m) {
                return Ok(());
            }
            if let TickOutcome::Accepted(_) = self.tick()? {
                if let Some(pred) = stop.predicate {
                    if pred(self) {
                        return Ok(());
                    }
                }
            }
        }
    }
}

/// When to stop [`AgmState::run`]. At least one limit should be set.
#[derive(Default, Clone, Copy)]
pub struct StopCondition<'f> {
    pub max_grads: Option<u64>,
    pub max_iters: Option<usize>,
    pub predicate: Option<&'f dyn Fn(&AgmState<'_>) -> bool>,
}

impl<'f> StopCondition<'f> {
    pub fn grads(n: u64) -> Self {
        Self { max_grads: Some(n), ..Default::default() }
    }

    pub fn iters(k: usize) -> Self {
        Self { max_iters: Some(k), ..Default::default() }
    }

    pub fn with_predicate(mut self, p: &'f dyn Fn(&AgmState<'_>) -> bool) -> Self {
        self.predicate = Some(p);
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cones::ConeSpec;

    /// min x1 s.t. x1 + x2 + x3 = 3, x ≥ 0.
    fn lp() -> HPInstance {
        HPInstance::new(vec![1.0, 0.0, 0.0], vec![vec![1.0, 1.0, 1.0]], vec![3.0], vec![1.0; 3], ConeSpec::Orthant {
            dim: 3,
        })
        .unwrap()
    }

    #[test]
    fn initial_state() {
        let inst = lp();
        let st = AgmState::new(&inst, 0.5, 1.0, &[0.5, 1.25, 1.25]).unwrap();
        assert_eq!(st.k(), 0);
        assert_eq!(st.grad_count(), 0);
        assert_eq!(st.l(), 2.0);
        assert_eq!(st.a_acc(), 0.0);
        assert!(matches!(AgmState::new(&inst, 0.5, 1.0, &[1.0; 3]), Err(Error::BadStart(_))));
        assert!(matches!(AgmState::new(&inst, 0.5, 1.0, &[0.5, 1.0, 1.0]), Err(Error::BadStart(_))));
    }

    #[test]
    fn first_step_size() {
        let inst = lp();
        let mut st = AgmState::new(&inst, 0.5, 1.0, &[0.5, 1.25, 1.25]).unwrap();
        st.tick().unwrap();
        match st.phase() {
            Phase::AwaitAccept { a, .. } => assert_eq!(*a, 1.0),
            p => panic!("unexpected phase {p:?}"),
        }
    }

    #[test]
    fn budget_and_iteration_stops() {
        let inst = lp();
        let mut st = AgmState::new(&inst, 0.5, 1.0, &[0.5, 1.25, 1.25]).unwrap();
        st.run(&StopCondition::grads(0)).unwrap();
        assert_eq!((st.k(), st.grad_count()), (0, 0));
        st.run(&StopCondition::iters(1)).unwrap();
        assert_eq!(st.k(), 1);
        let l_acc = st.last_step().unwrap().l_trial;
        assert_eq!(st.l(), l_acc / 2.0);
    }

    #[test]
    fn iterates_stay_on_level_set() {
        let inst = lp();
        let x0 = [0.5, 1.25, 1.25];
        let mut st = AgmState::new(&inst, 0.1, 1e-3, &x0).unwrap();
        for _ in 0..50 {
            st.run(&StopCondition::iters(st.k() + 1)).unwrap();
            assert!(inst.geometry().affine_residual(st.x()) <= 1e-8);
            assert!((inst.objective(st.x()) - 0.5).abs() <= 1e-8 * 1.5);
            let rec = st.last_step().unwrap();
            let want = (1.0 + (1.0 + 2.0 * rec.a_acc_before * rec.l_trial).sqrt()) / rec.l_trial;
            assert!((rec.a - want).abs() <= 1e-12 * want);
            assert!((st.a_acc() - (rec.a_acc_before + rec.a)).abs() <= 1e-12 * st.a_acc());
        }
    }

    #[test]
    fn predicate_stop() {
        let inst = lp();
        // On this level set λ_min peaks at 0.5, at (0.5, 1.25, 1.25).
        let mut st = AgmState::new(&inst, 0.05, 1e-3, &[0.5, 0.1, 2.4]).unwrap();
        let pred = |s: &AgmState<'_>| s.lambda_min() >= 0.45;
        st.run(&StopCondition::grads(100_000).with_predicate(&pred)).unwrap();
        assert!(st.lambda_min() >= 0.45);
        assert!(st.grad_count() < 100_000);
    }
}
