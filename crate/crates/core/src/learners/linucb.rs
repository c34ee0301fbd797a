//! LinUCB with a ridge estimate and the self-normalised confidence radius.

use alloc::format;

#[allow(unused_imports)]
use num_traits::Float;

use super::{check_contexts, Learner, Snapshot, Turn};
use crate::linalg::{self, argmax, Matrix, Vector};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct LinUcb {
    dim: usize,
    lambda: f64,
    delta: f64,
    /// `V_t = λI + Σ a aᵀ`.
    design: Matrix,
    moment: Vector,
    theta_hat: Vector,
    rounds: u64,
    turn: Turn<Vector>,
}

impl LinUcb {
    pub fn new(dim: usize, lambda: f64, delta: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParameter(format!("lambda must be > 0, got {lambda}")));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidParameter(format!("delta must lie in (0, 1), got {delta}")));
        }
        Ok(Self {
            dim,
            lambda,
            delta,
            design: Matrix::identity(dim, dim) * lambda,
            moment: Vector::zeros(dim),
            theta_hat: Vector::zeros(dim),
            rounds: 0,
            turn: Turn::default(),
        })
    }

    /// `β_t = √λ + √(2 log(1/δ) + d log(1 + t/(dλ)))` after `t` observations.
    pub fn radius(&self, t: u64) -> f64 {
        let d = self.dim as f64;
        self.lambda.sqrt()
            + (2.0 * (1.0 / self.delta).ln() + d * (1.0 + t as f64 / (d * self.lambda)).ln()).sqrt()
    }

    pub fn design_matrix(&self) -> &Matrix {
        &self.design
    }

    pub fn theta_hat(&self) -> &Vector {
        &self.theta_hat
    }

    /// Optimistic index of every context.
    pub fn indices(&self, contexts: &[Vector]) -> Result<alloc::vec::Vec<f64>> {
        let chol = linalg::cholesky(self.design.clone(), "LinUCB design matrix")?;
        let beta = self.radius(self.rounds);
        Ok(contexts
            .iter()
            .map(|a| self.theta_hat.dot(a) + beta * a.dot(&chol.solve(a)).max(0.0).sqrt())
            .collect())
    }
}

impl Learner for LinUcb {
    fn name(&self) -> &str {
        "linucb"
    }

    fn select(&mut self, contexts: &[Vector]) -> Result<usize> {
        check_contexts(contexts, self.dim)?;
        let i = argmax(self.indices(contexts)?).unwrap_or(0);
        self.turn.begin(contexts[i].clone())?;
        Ok(i)
    }

    fn observe(&mut self, reward: f64) -> Result<()> {
        let a = self.turn.end()?;
        self.design.ger(1.0, &a, &a, 1.0);
        self.moment.axpy(reward, &a, 1.0);
        let chol = linalg::cholesky(self.design.clone(), "LinUCB design matrix")?;
        self.theta_hat = chol.solve(&self.moment);
        self.rounds += 1;
        Ok(())
    }

    fn snapshot(&self) -> Snapshot {
        Snapshot { theta_hat: self.theta_hat.clone(), active: None, c_hat: None, epoch: None }
    }
}
