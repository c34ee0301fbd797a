//! Linear Thompson sampling with a conjugate Gaussian model.

use alloc::format;

use rand_distr::{Distribution, StandardNormal};

use super::{check_contexts, Learner, Snapshot, Turn};
use crate::linalg::{self, argmax, Matrix, Vector};
use crate::rng::StreamRng;
use crate::{Error, Result};

/// Prior `N(0, prior_variance · I)`, Gaussian observation noise of variance
/// `noise_variance`; each round plays the argmax under one posterior sample.
#[derive(Debug, Clone)]
pub struct LinearThompson {
    dim: usize,
    noise_variance: f64,
    /// Posterior precision `I/σ₀² + Σ a aᵀ/σ²`.
    precision: Matrix,
    /// `Σ a y / σ²`.
    moment: Vector,
    rng: StreamRng,
    last_sample: Vector,
    turn: Turn<Vector>,
}

impl LinearThompson {
    pub fn new(dim: usize, prior_variance: f64, noise_variance: f64, rng: StreamRng) -> Result<Self> {
        if !(prior_variance > 0.0 && prior_variance.is_finite()) {
            return Err(Error::InvalidParameter(format!("prior variance must be > 0, got {prior_variance}")));
        }
        if !(noise_variance > 0.0 && noise_variance.is_finite()) {
            return Err(Error::InvalidParameter(format!("noise variance must be > 0, got {noise_variance}")));
        }
        Ok(Self {
            dim,
            noise_variance,
            precision: Matrix::identity(dim, dim) / prior_variance,
            moment: Vector::zeros(dim),
            rng,
            last_sample: Vector::zeros(dim),
            turn: Turn::default(),
        })
    }

    pub fn posterior_mean(&self) -> Result<Vector> {
        let chol = linalg::cholesky(self.precision.clone(), "posterior precision")?;
        Ok(chol.solve(&self.moment))
    }

    /// One draw from the current posterior.
    pub fn sample(&mut self) -> Result<Vector> {
        let chol = linalg::cholesky(self.precision.clone(), "posterior precision")?;
        let mean = chol.solve(&self.moment);
        let z = Vector::from_fn(self.dim, |_, _| StandardNormal.sample(&mut self.rng));
        // P = L Lᵀ, so Lᵀ x = z gives x ~ N(0, P⁻¹).
        let noise = chol
            .l()
            .transpose()
            .solve_upper_triangular(&z)
            .ok_or_else(|| Error::Singular("posterior precision factor".into()))?;
        Ok(mean + noise)
    }

    pub fn update(&mut self, context: &Vector, reward: f64) {
        self.precision.ger(1.0 / self.noise_variance, context, context, 1.0);
        self.moment.axpy(reward / self.noise_variance, context, 1.0);
    }
}

impl Learner for LinearThompson {
    fn name(&self) -> &str {
        "thompson"
    }

    fn select(&mut self, contexts: &[Vector]) -> Result<usize> {
        check_contexts(contexts, self.dim)?;
        let theta = self.sample()?;
        let i = argmax(contexts.iter().map(|a| theta.dot(a))).unwrap_or(0);
        self.last_sample = theta;
        self.turn.begin(contexts[i].clone())?;
        Ok(i)
    }

    fn observe(&mut self, reward: f64) -> Result<()> {
        let a = self.turn.end()?;
        self.update(&a, reward);
        Ok(())
    }

    fn snapshot(&self) -> Snapshot {
        Snapshot {
            theta_hat: self.posterior_mean().unwrap_or_else(|_| self.last_sample.clone()),
            active: None,
            c_hat: None,
            epoch: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, Stream};
    use approx::assert_relative_eq;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_vec(xs.to_vec())
    }

    #[test]
    fn prior_samples_have_prior_variance() {
        let mut ts = LinearThompson::new(3, 0.5, 1.0, stream(4, Stream::Learner)).unwrap();
        let n = 10_000;
        let mut sum = Vector::zeros(3);
        let mut sq = Vector::zeros(3);
        for _ in 0..n {
            let s = ts.sample().unwrap();
            sum += &s;
            sq += s.component_mul(&s);
        }
        for j in 0..3 {
            let mean = sum[j] / n as f64;
            let var = sq[j] / n as f64 - mean * mean;
            assert!((var - 0.5).abs() <= 0.05 * 0.5, "variance {var}");
        }
    }

    #[test]
    fn posterior_mean_is_ridge_with_lambda_two() {
        let mut ts = LinearThompson::new(2, 0.5, 1.0, stream(0, Stream::Learner)).unwrap();
        let a = v(&[0.6, 0.0]);
        let ys = [0.2, 0.4, 0.3];
        for y in ys {
            ts.update(&a, y);
        }
        // (2 + n a²) θ₁ = a Σy, θ₂ = 0.
        let expected = 0.6 * 0.9 / (2.0 + 3.0 * 0.36);
        let m = ts.posterior_mean().unwrap();
        assert_relative_eq!(m[0], expected, epsilon = 1e-12);
        assert_relative_eq!(m[1], 0.0, epsilon = 1e-15);
    }

    #[test]
    fn posterior_mean_is_consistent() {
        let theta = v(&[0.4, -0.7]);
        let arms = [v(&[1.0, 0.0]), v(&[0.0, 1.0]), v(&[0.6, 0.6])];
        let mut ts = LinearThompson::new(2, 0.5, 1.0, stream(0, Stream::Learner)).unwrap();
        for t in 0..100_000 {
            let a = &arms[t % 3];
            ts.update(a, theta.dot(a));
        }
        let m = ts.posterior_mean().unwrap();
        assert!((m - theta).norm() < 1e-2);
    }

    #[test]
    fn bad_parameters() {
        assert!(LinearThompson::new(2, 0.0, 1.0, stream(0, Stream::Learner)).is_err());
        assert!(LinearThompson::new(2, 0.5, -1.0, stream(0, Stream::Learner)).is_err());
    }
}
