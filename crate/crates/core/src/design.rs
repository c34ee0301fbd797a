//! Near G-optimal experimental design.
//!
//! Minimises `max_a ‖a‖²_{Γ(ζ)⁻¹}` over distributions `ζ` on a finite arm set,
//! `Γ(ζ) = Σ ζ(a) a aᵀ`. The optimum equals the dimension of the span (the
//! Kiefer-Wolfowitz equivalence), and the solver stops once the value is within
//! a factor two of it. Rank-deficient arm sets are handled by working in an
//! orthonormal basis of their span.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::{self, argmax, Matrix, SpanBasis, SymPinv, Vector};
use crate::{Error, Result};

/// Relative weight floor (times `1/k`) below which the pruning pass drops an arm.
pub const PRUNE_FLOOR: f64 = 1e-6;

/// `log log d`, with `log(1 + log d)` substituted for `d ≤ 2`.
pub fn loglog(dim: usize) -> f64 {
    let d = dim as f64;
    if dim <= 2 {
        (1.0 + d.ln()).ln()
    } else {
        d.ln().ln()
    }
}

/// Support-size bound `4d(log log d + 18)`.
pub fn support_bound(dim: usize) -> f64 {
    4.0 * dim as f64 * (loglog(dim) + 18.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Design {
    /// One weight per input arm; sums to one.
    pub weights: Vec<f64>,
    /// `max_a ‖a‖²_{Γ(ζ)⁻¹}` over all input arms.
    pub value: f64,
    /// Dimension of the span of the arms.
    pub rank: usize,
    /// Frank-Wolfe steps taken.
    pub iterations: usize,
    /// `-log det Γ(ζ)` (in span coordinates) before each step and at the end.
    pub objective: Vec<f64>,
}

impl Design {
    pub fn support(&self) -> Vec<usize> {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > 0.0)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn support_len(&self) -> usize {
        self.weights.iter().filter(|&&w| w > 0.0).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DesignOptions {
    /// Relative gap `(value - r)/r` at which the solver stops early.
    pub tol: f64,
    /// Step limit; `None` means `10⁴ · d`.
    pub max_iters: Option<usize>,
}

impl Default for DesignOptions {
    fn default() -> Self {
        Self { tol: 1e-2, max_iters: None }
    }
}

/// `Γ(ζ) = Σ ζ(a) a aᵀ`.
pub fn gram(arms: &[Vector], weights: &[f64]) -> Matrix {
    let dim = arms.first().map_or(0, |a| a.len());
    linalg::weighted_outer_sum(dim, weights.iter().copied().zip(arms))
}

/// `bᵀ Γ⁻¹ b`, with the inverse taken on the range of `Γ`; errors when `b`
/// is not in that range.
pub fn weighted_norm_sq(b: &Vector, gram: &Matrix) -> Result<f64> {
    if b.len() != gram.nrows() {
        return Err(Error::DimensionMismatch { expected: gram.nrows(), got: b.len() });
    }
    SymPinv::new(gram).quad_form(b)
}

/// Arms expressed in an orthonormal basis of their span.
#[derive(Debug, Clone)]
pub struct Projection {
    pub arms: Vec<Vector>,
    pub basis: SpanBasis,
}

impl Projection {
    pub fn rank(&self) -> usize {
        self.basis.rank()
    }
}

pub fn project_to_span(arms: &[Vector]) -> Result<Projection> {
    let basis = SpanBasis::of(arms)?;
    let arms = arms.iter().map(|a| basis.project(a)).collect();
    Ok(Projection { arms, basis })
}

/// Greedy maximum-volume choice of `rank` arms spanning the space.
fn spanning_subset(arms: &[Vector], rank: usize) -> Vec<usize> {
    let mut residual: Vec<Vector> = arms.to_vec();
    let mut chosen = Vec::with_capacity(rank);
    for _ in 0..rank {
        let Some(i) = argmax(residual.iter().enumerate().map(|(i, r)| {
            if chosen.contains(&i) {
                f64::NEG_INFINITY
            } else {
                r.norm_squared()
            }
        })) else {
            break;
        };
        let norm = residual[i].norm();
        if !(norm > 0.0) {
            break;
        }
        let q = &residual[i] / norm;
        for r in residual.iter_mut() {
            let c = q.dot(r);
            r.axpy(-c, &q, 1.0);
        }
        chosen.push(i);
    }
    chosen
}

struct Evaluation {
    scores: Vec<f64>,
    neg_log_det: f64,
}

fn evaluate(arms: &[Vector], weights: &[f64]) -> Option<Evaluation> {
    let g = gram(arms, weights);
    let chol = nalgebra::Cholesky::new(g)?;
    let l = chol.l_dirty();
    let neg_log_det = -2.0 * (0..l.nrows()).map(|i| l[(i, i)].ln()).sum::<f64>();
    let scores = arms.iter().map(|a| a.dot(&chol.solve(a))).collect();
    Some(Evaluation { scores, neg_log_det })
}

fn max_score(scores: &[f64]) -> (usize, f64) {
    let j = argmax(scores.iter().copied()).unwrap_or(0);
    (j, scores[j])
}

/// Frank-Wolfe (Fedorov-Wynn) iterations on the D-optimal objective, started
/// from uniform weights on a greedy spanning subset and stopped as soon as the
/// G-value is at most `2r` (or within `tol` of `r`), followed by a pruning pass.
pub fn frank_wolfe_design(arms: &[Vector], opts: DesignOptions) -> Result<Design> {
    let k = arms.len();
    if k == 0 {
        return Err(Error::InvalidArmSet("empty arm set".into()));
    }
    let dim = arms[0].len();
    let projection = project_to_span(arms)?;
    let rank = projection.rank();
    let x = &projection.arms;
    let r = rank as f64;
    let bound = 2.0 * r;
    let max_iters = opts.max_iters.unwrap_or(10_000 * dim);

    let mut weights = vec![0.0; k];
    let init = spanning_subset(x, rank);
    if init.len() != rank {
        return Err(Error::Singular("could not find a spanning subset".into()));
    }
    for &i in &init {
        weights[i] = 1.0 / r;
    }

    let mut objective = Vec::new();
    let mut iterations = 0;
    let value = loop {
        let eval = evaluate(x, &weights)
            .ok_or_else(|| Error::Singular("design information matrix".into()))?;
        objective.push(eval.neg_log_det);
        let (j, g) = max_score(&eval.scores);
        if g <= bound || (g - r) / r <= opts.tol {
            break g;
        }
        if iterations >= max_iters {
            return Err(Error::DesignNotConverged {
                iterations,
                value: g,
                bound,
                best: alloc::boxed::Box::new(Design {
                    weights,
                    value: g,
                    rank,
                    iterations,
                    objective,
                }),
            });
        }
        let step = (g / r - 1.0) / (g - 1.0);
        for w in weights.iter_mut() {
            *w *= 1.0 - step;
        }
        weights[j] += step;
        iterations += 1;
    };

    let (weights, value) = prune(x, weights, value, bound);
    let design = Design { weights, value, rank, iterations, objective };
    let support = design.support_len();
    let limit = support_bound(dim);
    if support as f64 > limit {
        return Err(Error::SupportTooLarge { support, bound: limit as usize });
    }
    Ok(design)
}

fn prune(arms: &[Vector], weights: Vec<f64>, value: f64, bound: f64) -> (Vec<f64>, f64) {
    let floor = PRUNE_FLOOR / arms.len() as f64;
    if !weights.iter().any(|&w| w > 0.0 && w < floor) {
        return (normalised(weights), value);
    }
    let pruned: Vec<f64> = normalised(weights.iter().map(|&w| if w < floor { 0.0 } else { w }).collect());
    match evaluate(arms, &pruned) {
        Some(eval) => {
            let (_, g) = max_score(&eval.scores);
            if g <= bound {
                (pruned, g)
            } else {
                (normalised(weights), value)
            }
        }
        None => (normalised(weights), value),
    }
}

fn normalised(mut weights: Vec<f64>) -> Vec<f64> {
    let total: f64 = weights.iter().sum();
    for w in weights.iter_mut() {
        *w /= total;
    }
    weights
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_vec(xs.to_vec())
    }

    fn basis(d: usize) -> Vec<Vector> {
        (0..d).map(|i| Vector::from_fn(d, |j, _| if i == j { 1.0 } else { 0.0 })).collect()
    }

    #[test]
    fn gram_of_basis() {
        let g = gram(&basis(2), &[0.5, 0.5]);
        assert_eq!(g, Matrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 0.5]));
        let a = v(&[0.3, -0.4]);
        let g = gram(&[a.clone()], &[1.0]);
        assert_relative_eq!(g, &a * a.transpose(), epsilon = 1e-15);
    }

    #[test]
    fn weighted_norm_identity_cases() {
        let id = Matrix::identity(3, 3);
        assert_relative_eq!(weighted_norm_sq(&v(&[1.0, 0.0, 0.0]), &id).unwrap(), 1.0, epsilon = 1e-14);
        let g = gram(&basis(3), &[1.0 / 3.0; 3]);
        for e in basis(3) {
            assert_relative_eq!(weighted_norm_sq(&e, &g).unwrap(), 3.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn weighted_norm_outside_span_errors() {
        let g = gram(&[v(&[1.0, 0.0])], &[1.0]);
        assert!(matches!(weighted_norm_sq(&v(&[0.0, 1.0]), &g), Err(Error::OutsideSpan { .. })));
        assert!(weighted_norm_sq(&v(&[1.0]), &g).is_err());
    }

    #[test]
    fn basis_design_is_uniform() {
        let d = frank_wolfe_design(&basis(3), DesignOptions::default()).unwrap();
        assert_relative_eq!(d.value, 3.0, epsilon = 1e-12);
        for w in &d.weights {
            assert_relative_eq!(*w, 1.0 / 3.0, epsilon = 1e-12);
        }
        assert_eq!(d.support_len(), 3);
    }

    #[test]
    fn single_scalar_arm() {
        let d = frank_wolfe_design(&[v(&[0.5])], DesignOptions::default()).unwrap();
        assert_eq!(d.weights, vec![1.0]);
        assert_relative_eq!(d.value, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn rank_deficient_design_uses_span() {
        // Three arms in a plane of R^4.
        let arms = [v(&[0.5, 0.5, 0.0, 0.0]), v(&[0.0, 0.0, 0.6, 0.0]), v(&[0.3, 0.3, 0.3, 0.0])];
        let d = frank_wolfe_design(&arms, DesignOptions::default()).unwrap();
        assert_eq!(d.rank, 2);
        assert!(d.value <= 4.0 + 1e-12);
        assert!(d.value >= 2.0 - 1e-9);
    }

    #[test]
    fn collinear_arms_have_rank_one() {
        let arms = [v(&[0.2, 0.4]), v(&[-0.1, -0.2]), v(&[0.4, 0.8])];
        let p = project_to_span(&arms).unwrap();
        assert_eq!(p.rank(), 1);
        let d = frank_wolfe_design(&arms, DesignOptions::default()).unwrap();
        assert!(d.value <= 2.0);
    }

    #[test]
    fn all_zero_arms_error() {
        assert!(project_to_span(&[v(&[0.0, 0.0])]).is_err());
        assert!(frank_wolfe_design(&[], DesignOptions::default()).is_err());
    }

    #[test]
    fn support_bound_small_dims() {
        assert_relative_eq!(support_bound(1), 72.0);
        assert_relative_eq!(support_bound(2), 8.0 * ((1.0 + 2f64.ln()).ln() + 18.0));
        assert_relative_eq!(support_bound(5), 20.0 * (5f64.ln().ln() + 18.0));
    }

    #[test]
    fn iteration_limit_reports_best_design() {
        // A design that needs iterations: many arms on a circle, start from two.
        let arms: Vec<Vector> = (0..40)
            .map(|i| {
                let t = i as f64 * 0.05;
                v(&[t.cos(), 0.05 * t.sin()])
            })
            .collect();
        let err = frank_wolfe_design(&arms, DesignOptions { tol: 0.0, max_iters: Some(0) });
        match err {
            Ok(d) => assert!(d.value <= 4.0),
            Err(Error::DesignNotConverged { best, .. }) => assert_relative_eq!(best.weights.iter().sum::<f64>(), 1.0, epsilon = 1e-12),
            Err(e) => panic!("{e}"),
        }
    }
}
