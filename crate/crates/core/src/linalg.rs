//! Small dense linear-algebra helpers on top of `nalgebra`.

use alloc::vec::Vec;

use nalgebra::{Cholesky, DMatrix, DVector, Dyn, SymmetricEigen, SVD};
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

pub type Vector = DVector<f64>;
pub type Matrix = DMatrix<f64>;

/// Relative singular-value cutoff used to decide the rank of an arm set.
pub const RANK_TOL: f64 = 1e-9;

/// Relative eigenvalue cutoff when pseudo-inverting a PSD matrix.
const PINV_TOL: f64 = 1e-12;

/// Relative out-of-span residual tolerated by [`SymPinv::quad_form`].
const SPAN_TOL: f64 = 1e-8;

/// Index of the largest value, lowest index on ties. `None` for an empty iterator.
pub fn argmax<I: IntoIterator<Item = f64>>(values: I) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in values.into_iter().enumerate() {
        match best {
            Some((_, b)) if v <= b => {}
            _ => best = Some((i, v)),
        }
    }
    best.map(|(i, _)| i)
}

/// `Σ wᵢ aᵢ aᵢᵀ`.
pub fn weighted_outer_sum<'a, I>(dim: usize, terms: I) -> Matrix
where
    I: IntoIterator<Item = (f64, &'a Vector)>,
{
    let mut m = Matrix::zeros(dim, dim);
    for (w, a) in terms {
        if w != 0.0 {
            m.ger(w, a, a, 1.0);
        }
    }
    m
}

/// Orthonormal basis of the span of a set of vectors.
///
/// The rank cutoff is `RANK_TOL` times the largest singular value.
#[derive(Debug, Clone)]
pub struct SpanBasis {
    /// `d × r`, orthonormal columns.
    basis: Matrix,
}

impl SpanBasis {
    pub fn of(vectors: &[Vector]) -> Result<Self> {
        let first = vectors
            .first()
            .ok_or_else(|| Error::InvalidArmSet("empty vector set".into()))?;
        let dim = first.len();
        let rows = Matrix::from_fn(vectors.len(), dim, |i, j| vectors[i][j]);
        let svd = SVD::new(rows, false, true);
        let v_t = svd.v_t.expect("requested V^T");
        let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
        order.sort_by(|&a, &b| {
            svd.singular_values[b]
                .partial_cmp(&svd.singular_values[a])
                .unwrap_or(core::cmp::Ordering::Equal)
        });
        let top = order.first().map(|&i| svd.singular_values[i]).unwrap_or(0.0);
        if !(top > 0.0) {
            return Err(Error::InvalidArmSet("all vectors are zero".into()));
        }
        let keep: Vec<usize> = order
            .into_iter()
            .filter(|&i| svd.singular_values[i] > RANK_TOL * top)
            .collect();
        let mut basis = Matrix::zeros(dim, keep.len());
        for (c, &i) in keep.iter().enumerate() {
            for j in 0..dim {
                basis[(j, c)] = v_t[(i, j)];
            }
        }
        Ok(Self { basis })
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn rank(&self) -> usize {
        self.basis.ncols()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.basis
    }

    /// Coordinates of `v` in the basis (drops any out-of-span component).
    pub fn project(&self, v: &Vector) -> Vector {
        self.basis.tr_mul(v)
    }

    /// Back to ambient coordinates.
    pub fn lift(&self, coords: &Vector) -> Vector {
        &self.basis * coords
    }

    /// Norm of the component of `v` orthogonal to the span.
    pub fn residual(&self, v: &Vector) -> f64 {
        (v - self.lift(&self.project(v))).norm()
    }
}

/// Cholesky factorisation with an error instead of `None`.
pub fn cholesky(m: Matrix, what: &str) -> Result<Cholesky<f64, Dyn>> {
    Cholesky::new(m).ok_or_else(|| Error::Singular(what.into()))
}

/// Pseudo-inverse of a symmetric positive semidefinite matrix.
#[derive(Debug, Clone)]
pub struct SymPinv {
    /// Eigenvectors spanning the range, as columns.
    vectors: Matrix,
    /// Matching eigenvalues (all strictly positive).
    values: Vec<f64>,
}

impl SymPinv {
    pub fn new(m: &Matrix) -> Self {
        let dim = m.nrows();
        let sym = (m + m.transpose()) * 0.5;
        let eig = SymmetricEigen::new(sym);
        let top = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
        let keep: Vec<usize> = (0..dim)
            .filter(|&i| top > 0.0 && eig.eigenvalues[i] > PINV_TOL * top)
            .collect();
        let mut vectors = Matrix::zeros(dim, keep.len());
        let mut values = Vec::with_capacity(keep.len());
        for (c, &i) in keep.iter().enumerate() {
            vectors.set_column(c, &eig.eigenvectors.column(i));
            values.push(eig.eigenvalues[i]);
        }
        Self { vectors, values }
    }

    pub fn rank(&self) -> usize {
        self.values.len()
    }

    /// `bᵀ M⁺ b`, failing when `b` leaves the range of `M`.
    pub fn quad_form(&self, b: &Vector) -> Result<f64> {
        let coords = self.vectors.tr_mul(b);
        let inside = &self.vectors * &coords;
        let residual = (b - inside).norm();
        if residual > SPAN_TOL * b.norm().max(1.0) {
            return Err(Error::OutsideSpan { residual });
        }
        Ok(coords
            .iter()
            .zip(&self.values)
            .map(|(c, l)| c * c / l)
            .sum())
    }

    /// Minimum-norm solution `M⁺ b`.
    pub fn solve(&self, b: &Vector) -> Vector {
        let mut coords = self.vectors.tr_mul(b);
        for (c, l) in coords.iter_mut().zip(&self.values) {
            *c /= l;
        }
        &self.vectors * coords
    }

    /// Smallest eigenvalue kept in the range (0 for the zero matrix).
    pub fn min_positive_eigenvalue(&self) -> f64 {
        self.values.iter().cloned().fold(f64::infinity(), f64::min).min(f64::MAX)
    }
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_eigenvalue(m: &Matrix) -> f64 {
    let sym = (m + m.transpose()) * 0.5;
    SymmetricEigen::new(sym)
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::infinity(), f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use approx::assert_relative_eq;

    #[test]
    fn argmax_breaks_ties_low() {
        assert_eq!(argmax([1.0, 3.0, 3.0, 2.0]), Some(1));
        assert_eq!(argmax([0.0, 0.0]), Some(0));
        assert_eq!(argmax(core::iter::empty()), None);
    }

    #[test]
    fn span_of_collinear_vectors_is_one_dimensional() {
        let v = vec![
            Vector::from_vec(vec![1.0, 2.0, 0.0]),
            Vector::from_vec(vec![-0.5, -1.0, 0.0]),
        ];
        let span = SpanBasis::of(&v).unwrap();
        assert_eq!(span.rank(), 1);
        assert!(span.residual(&v[1]) < 1e-12);
        assert!(span.residual(&Vector::from_vec(vec![0.0, 0.0, 1.0])) > 0.99);
    }

    #[test]
    fn pinv_matches_inverse_on_full_rank() {
        let m = Matrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]);
        let b = Vector::from_vec(vec![0.3, -0.7]);
        let exact = m.clone().try_inverse().unwrap() * &b;
        let p = SymPinv::new(&m);
        assert_relative_eq!(p.solve(&b), exact, epsilon = 1e-12);
        assert_relative_eq!(p.quad_form(&b).unwrap(), b.dot(&exact), epsilon = 1e-12);
    }

    #[test]
    fn pinv_rejects_out_of_range_vectors() {
        let m = Matrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let p = SymPinv::new(&m);
        assert_eq!(p.rank(), 1);
        assert!(p.quad_form(&Vector::from_vec(vec![0.0, 1.0])).is_err());
        assert_relative_eq!(p.quad_form(&Vector::from_vec(vec![2.0, 0.0])).unwrap(), 4.0);
    }
}
