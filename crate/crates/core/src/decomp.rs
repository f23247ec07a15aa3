//! Hermitian eigendecomposition, SVD and PSD functional calculus.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::MatrixError;
use crate::matrix::{inner, normalized, vector_norm, ComplexMatrix};
use crate::scalar::Real;
use crate::tolerance::Tolerances;

/// `M = Q diag(eigenvalues) Q*` with eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEig<T: Real> {
    pub eigenvalues: Vec<T>,
    /// Unitary matrix whose columns are the eigenvectors.
    pub eigenvectors: ComplexMatrix<T>,
}

/// `M = left diag(singular_values) right*` with both factors unitary and
/// singular values descending.
#[derive(Debug, Clone)]
pub struct SvdFactors<T: Real> {
    pub left: ComplexMatrix<T>,
    pub singular_values: Vec<T>,
    pub right: ComplexMatrix<T>,
}

impl<T: Real> SvdFactors<T> {
    /// Numerical rank: `s_i > rank_rel * s_max * max(rows, cols)`.
    pub fn rank(&self, tol: &Tolerances) -> usize {
        let smax = self.singular_values.first().copied().unwrap_or_else(T::zero);
        let dim = self.left.rows().max(self.right.rows());
        let cutoff = T::lit(tol.rank_rel) * smax * T::lit(dim as f64);
        self.singular_values.iter().filter(|&&s| s > cutoff).count()
    }

    /// `left * diag(s) * right*` over the full factorization.
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        let (m, n) = (self.left.rows(), self.right.rows());
        let k = self.singular_values.len();
        ComplexMatrix::from_fn(m, n, |i, j| {
            (0..k).fold(Complex::zero(), |acc, l| {
                acc + self.left.get(i, l) * self.right.get(j, l).conj() * self.singular_values[l]
            })
        })
    }
}

impl<T: Real> HermitianEig<T> {
    /// `Q diag(f(lambda_i)) Q*`.
    pub fn apply(&self, f: impl Fn(T) -> T) -> ComplexMatrix<T> {
        let q = &self.eigenvectors;
        let n = q.rows();
        let vals: Vec<T> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n).fold(Complex::zero(), |acc, k| {
                if vals[k] == T::zero() {
                    acc
                } else {
                    acc + q.get(i, k) * q.get(j, k).conj() * vals[k]
                }
            })
        })
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The input is symmetrized as `(M + M*) / 2` before factorization after
/// checking `||M - M*||_F <= eq_abs * (1 + ||M||_F)`.
pub fn hermitian_eig<T: Real>(m: &ComplexMatrix<T>, tol: &Tolerances) -> Result<HermitianEig<T>, MatrixError> {
    let n = m.require_square()?;
    let mh = m.adjoint();
    let skew = m.distance(&mh);
    if skew > T::lit(tol.eq_abs) * (T::one() + m.frobenius_norm()) {
        return Err(MatrixError::NotHermitian {
            residual: skew.as_f64(),
        });
    }
    let sym = (m + &mh).scale_real(T::lit(0.5));
    let raw = T::hermitian_eig(n, sym.entries()).ok_or(MatrixError::NoConvergence("hermitian eigensolver"))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| raw.values[a].partial_cmp(&raw.values[b]).expect("finite eigenvalues"));
    let eigenvalues = order.iter().map(|&k| raw.values[k]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| raw.vectors[i * n + order[j]]);
    Ok(HermitianEig {
        eigenvalues,
        eigenvectors,
    })
}

/// Extends orthonormal columns to a full orthonormal basis of `C^n`.
///
/// Each new column is the standard basis vector with the largest component
/// orthogonal to the current span, so every step has residual at least
/// `1 / sqrt(n)`.
fn complete_basis<T: Real>(mut cols: Vec<Vec<Complex<T>>>, n: usize) -> Vec<Vec<Complex<T>>> {
    while cols.len() < n {
        let best = (0..n)
            .map(|k| {
                let mut v: Vec<Complex<T>> = (0..n)
                    .map(|i| {
                        if i == k {
                            Complex::new(T::one(), T::zero())
                        } else {
                            Complex::zero()
                        }
                    })
                    .collect();
                // Two passes of Gram-Schmidt.
                for _ in 0..2 {
                    for c in &cols {
                        let p = inner(&v, c);
                        for (vi, ci) in v.iter_mut().zip(c) {
                            *vi = *vi - *ci * p;
                        }
                    }
                }
                v
            })
            .max_by(|a, b| vector_norm(a).partial_cmp(&vector_norm(b)).expect("finite"))
            .expect("n > 0");
        cols.push(normalized(&best).expect("residual bounded below"));
    }
    cols
}

const JACOBI_SWEEPS: usize = 80;

/// One-sided Jacobi on the columns of `m` (requires `rows >= cols`).
///
/// Returns the rotated columns `A V` and the columns of `V`.
type Columns<T> = Vec<Vec<Complex<T>>>;

fn one_sided_jacobi<T: Real>(m: &ComplexMatrix<T>) -> Result<(Columns<T>, Columns<T>), MatrixError> {
    let n = m.cols();
    let mut a: Vec<Vec<Complex<T>>> = (0..n).map(|j| m.column(j)).collect();
    let mut v: Vec<Vec<Complex<T>>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| {
                    if i == j {
                        Complex::new(T::one(), T::zero())
                    } else {
                        Complex::zero()
                    }
                })
                .collect()
        })
        .collect();
    let eps = T::epsilon() * T::lit(n as f64);
    let two = T::lit(2.0);
    for _ in 0..JACOBI_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = vector_norm(&a[p]).powi(2);
                let beta = vector_norm(&a[q]).powi(2);
                // g = a_p* a_q
                let g = inner(&a[q], &a[p]);
                let gabs = g.norm();
                if gabs == T::zero() || gabs <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = g.conj() / gabs;
                let zeta = (beta - alpha) / (two * gabs);
                let sign = if zeta < T::zero() { -T::one() } else { T::one() };
                let t = sign / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                for cols in [&mut a, &mut v] {
                    let (lo, hi) = cols.split_at_mut(q);
                    for (xp, xq) in lo[p].iter_mut().zip(hi[0].iter_mut()) {
                        let yp = *xp;
                        let yq = *xq * phase;
                        *xp = yp * c - yq * s;
                        *xq = yp * s + yq * c;
                    }
                }
            }
        }
        if !rotated {
            return Ok((a, v));
        }
    }
    Err(MatrixError::NoConvergence("svd"))
}

/// Singular value decomposition with full unitary factors.
///
/// Computed by one-sided Jacobi, which keeps small singular values
/// accurate relative to their own size and handles exact rank deficiency.
pub fn svd<T: Real>(m: &ComplexMatrix<T>) -> Result<SvdFactors<T>, MatrixError> {
    let (rows, cols) = m.shape();
    let tall = rows >= cols;
    let work = if tall { m.clone() } else { m.adjoint() };
    let (a, v) = one_sided_jacobi(&work)?;
    let norms: Vec<T> = a.iter().map(|c| vector_norm(c)).collect();
    let mut order: Vec<usize> = (0..norms.len()).collect();
    order.sort_by(|&x, &y| norms[y].partial_cmp(&norms[x]).expect("finite singular values"));
    let singular_values: Vec<T> = order.iter().map(|&k| norms[k]).collect();
    let smax = singular_values.first().copied().unwrap_or_else(T::zero);
    let floor = smax * T::epsilon();
    let kept: Vec<Vec<Complex<T>>> = order
        .iter()
        .filter(|&&k| norms[k] > floor && norms[k] > T::min_positive_value())
        .map(|&k| normalized(&a[k]).expect("non-zero column"))
        .collect();
    let u = complete_basis(kept, work.rows());
    let v_sorted: Vec<Vec<Complex<T>>> = order.iter().map(|&k| v[k].clone()).collect();
    let (left, right) = if tall { (u, v_sorted) } else { (v_sorted, u) };
    Ok(SvdFactors {
        left: ComplexMatrix::from_columns(&left),
        singular_values,
        right: ComplexMatrix::from_columns(&right),
    })
}

/// Operator (spectral) norm, the largest singular value.
pub fn operator_norm<T: Real>(m: &ComplexMatrix<T>) -> Result<T, MatrixError> {
    Ok(svd(m)?.singular_values[0])
}

/// Fractional power `M^gamma` of a positive semidefinite matrix.
///
/// Eigenvalues with `|lambda| <= rank_rel * max|lambda|` are treated as exact
/// zeros, so roundoff in the null space is neither amplified by `gamma < 1`
/// nor rejected as indefiniteness. Eigenvalues below that band are an error.
pub fn psd_power<T: Real>(m: &ComplexMatrix<T>, gamma: T, tol: &Tolerances) -> Result<ComplexMatrix<T>, MatrixError> {
    if !(gamma > T::zero() && gamma.is_finite()) {
        return Err(MatrixError::InvalidExponent(gamma.as_f64()));
    }
    let eig = hermitian_eig(m, tol)?;
    let lmax = eig.eigenvalues.iter().fold(T::zero(), |acc, l| acc.max(l.abs()));
    let clip = T::lit(tol.rank_rel) * lmax;
    if let Some(&bad) = eig.eigenvalues.iter().find(|&&l| l < -clip) {
        return Err(MatrixError::NotPositiveSemidefinite {
            eigenvalue: bad.as_f64(),
        });
    }
    Ok(eig.apply(|l| if l <= clip { T::zero() } else { l.powf(gamma) }))
}
