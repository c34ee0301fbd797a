//! Exploration-free greedy learner for perturbed contexts.

use super::{check_contexts, Learner, Snapshot, Turn};
use crate::linalg::{argmax, Matrix, SymPinv, Vector};
use crate::Result;

/// Plays `argmax_i ⟨θ̂_t, a_{i,t}⟩` where `θ̂_t` is the minimum-norm
/// least-squares fit to all past (context, reward) pairs. `θ̂_1 = 0`.
#[derive(Debug, Clone)]
pub struct Greedy {
    dim: usize,
    /// `Γ_t = Σ a aᵀ` over chosen contexts.
    gram: Matrix,
    /// `Σ a y`.
    moment: Vector,
    theta_hat: Vector,
    rounds: u64,
    turn: Turn<Vector>,
}

impl Greedy {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            gram: Matrix::zeros(dim, dim),
            moment: Vector::zeros(dim),
            theta_hat: Vector::zeros(dim),
            rounds: 0,
            turn: Turn::default(),
        }
    }

    pub fn theta_hat(&self) -> &Vector {
        &self.theta_hat
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn rounds(&self) -> u64 {
        self.rounds
    }

    /// Adds one observation and refits.
    pub fn update(&mut self, context: &Vector, reward: f64) {
        self.gram.ger(1.0, context, context, 1.0);
        self.moment.axpy(reward, context, 1.0);
        self.theta_hat = SymPinv::new(&self.gram).solve(&self.moment);
        self.rounds += 1;
    }
}

/// Greedy choice for a given estimate (lowest index on ties).
pub(crate) fn greedy_choice(theta_hat: &Vector, contexts: &[Vector]) -> usize {
    argmax(contexts.iter().map(|a| theta_hat.dot(a))).unwrap_or(0)
}

impl Learner for Greedy {
    fn name(&self) -> &str {
        "greedy"
    }

    fn select(&mut self, contexts: &[Vector]) -> Result<usize> {
        check_contexts(contexts, self.dim)?;
        let i = greedy_choice(&self.theta_hat, contexts);
        self.turn.begin(contexts[i].clone())?;
        Ok(i)
    }

    fn observe(&mut self, reward: f64) -> Result<()> {
        let a = self.turn.end()?;
        self.update(&a, reward);
        Ok(())
    }

    fn snapshot(&self) -> Snapshot {
        Snapshot { theta_hat: self.theta_hat.clone(), active: None, c_hat: None, epoch: None }
    }
}
