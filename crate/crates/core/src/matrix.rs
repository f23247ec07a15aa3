//! Dense complex matrices in row-major storage.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::MatrixError;
use crate::scalar::Real;
use crate::tolerance::Tolerances;

/// A dense `rows x cols` complex matrix with finite entries.
///
/// Entry `(i, j)` lives at `entries[i * cols + j]`. Construction rejects
/// empty shapes and non-finite entries, so every value of this type satisfies
/// both invariants.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix<T: Real> {
    rows: usize,
    cols: usize,
    entries: Vec<Complex<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex<T>>) -> Result<Self, MatrixError> {
        if rows == 0 || cols == 0 {
            return Err(MatrixError::EmptyShape { rows, cols });
        }
        if entries.len() != rows * cols {
            return Err(MatrixError::InvalidData {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        if let Some(k) = entries.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(MatrixError::NonFinite {
                row: k / cols,
                col: k % cols,
            });
        }
        Ok(Self { rows, cols, entries })
    }

    /// Builds a matrix from real row-major data; convenient for literals.
    pub fn from_real(rows: usize, cols: usize, data: &[T]) -> Result<Self, MatrixError> {
        Self::new(rows, cols, data.iter().map(|&x| Complex::new(x, T::zero())).collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        assert!(rows > 0 && cols > 0, "empty shape {rows}x{cols}");
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self { rows, cols, entries }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| Complex::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { Complex::one() } else { Complex::zero() })
    }

    pub fn from_diagonal(diag: &[Complex<T>]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { diag[i] } else { Complex::zero() })
    }

    pub fn from_real_diagonal(diag: &[T]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| {
            if i == j {
                Complex::new(diag[i], T::zero())
            } else {
                Complex::zero()
            }
        })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<Complex<T>>]) -> Self {
        let rows = columns.first().map_or(0, Vec::len);
        assert!(columns.iter().all(|c| c.len() == rows), "ragged columns");
        Self::from_fn(rows, columns.len(), |i, j| columns[j][i])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.entries[i * self.cols + j]
    }

    pub fn column(&self, j: usize) -> Vec<Complex<T>> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn diagonal(&self) -> Vec<Complex<T>> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).collect()
    }

    pub fn require_square(&self) -> Result<usize, MatrixError> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(MatrixError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// Conjugate transpose. Involutive bit for bit.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self, MatrixError> {
        if self.cols != rhs.rows {
            return Err(MatrixError::DimensionMismatch {
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let mut out = vec![Complex::zero(); self.rows * rhs.cols];
        for i in 0..self.rows {
            let row = &mut out[i * rhs.cols..(i + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.entries[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                let brow = &rhs.entries[k * rhs.cols..(k + 1) * rhs.cols];
                for (acc, &b) in row.iter_mut().zip(brow) {
                    *acc = *acc + a * b;
                }
            }
        }
        Ok(Self {
            rows: self.rows,
            cols: rhs.cols,
            entries: out,
        })
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(Complex<T>, Complex<T>) -> Complex<T>) -> Result<Self, MatrixError> {
        if self.shape() != rhs.shape() {
            return Err(MatrixError::DimensionMismatch {
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self, MatrixError> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self, MatrixError> {
        self.zip_with(rhs, |a, b| a - b)
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        self.map(|z| z * c)
    }

    pub fn scale_real(&self, c: T) -> Self {
        self.map(|z| z * c)
    }

    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                self.entries[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .fold(Complex::zero(), |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }

    pub fn trace(&self) -> Complex<T> {
        self.diagonal().into_iter().fold(Complex::zero(), |a, b| a + b)
    }

    pub fn frobenius_norm(&self) -> T {
        // Scaled sum of squares avoids overflow for large entries.
        let amax = self
            .entries
            .iter()
            .map(|z| z.re.abs().max(z.im.abs()))
            .fold(T::zero(), T::max);
        if amax == T::zero() {
            return T::zero();
        }
        let sum = self.entries.iter().fold(T::zero(), |acc, z| {
            let (re, im) = (z.re / amax, z.im / amax);
            acc + re * re + im * im
        });
        amax * sum.sqrt()
    }

    /// `||self - other||_F`; panics on shape mismatch.
    pub fn distance(&self, other: &Self) -> T {
        (self - other).frobenius_norm()
    }

    /// Mixed absolute/relative equality:
    /// `||X - Y||_F <= eq_abs * (1 + max(||X||_F, ||Y||_F))`.
    pub fn approx_eq(&self, other: &Self, tol: &Tolerances) -> bool {
        self.shape() == other.shape() && self.relative_distance(other) <= T::lit(tol.eq_abs)
    }

    /// `||X - Y||_F / (1 + max(||X||_F, ||Y||_F))`.
    pub fn relative_distance(&self, other: &Self) -> T {
        let scale = self.frobenius_norm().max(other.frobenius_norm());
        self.distance(other) / (T::one() + scale)
    }

    /// Converts the scalar type, e.g. `f64 -> f32`.
    pub fn cast<U: Real>(&self) -> ComplexMatrix<U> {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .map(|z| Complex::new(U::lit(z.re.as_f64()), U::lit(z.im.as_f64())))
                .collect(),
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl<T: Real> $trait<&ComplexMatrix<T>> for &ComplexMatrix<T> {
            type Output = ComplexMatrix<T>;

            /// Panics on incompatible shapes; use the `try_` variant to recover.
            fn $method(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
                match self.$try(rhs) {
                    Ok(m) => m,
                    Err(e) => panic!("{e}"),
                }
            }
        }
    };
}

binop!(Mul, mul, try_mul);
binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);

impl<T: Real> Neg for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn neg(self) -> ComplexMatrix<T> {
        self.map(|z| -z)
    }
}

/// `<u, v> = sum_i u_i conj(v_i)`, linear in the first argument.
pub fn inner<T: Real>(u: &[Complex<T>], v: &[Complex<T>]) -> Complex<T> {
    assert_eq!(u.len(), v.len(), "vector length mismatch");
    u.iter()
        .zip(v)
        .fold(Complex::zero(), |acc, (&a, &b)| acc + a * b.conj())
}

pub fn vector_norm<T: Real>(v: &[Complex<T>]) -> T {
    v.iter().fold(T::zero(), |acc, z| acc.hypot(z.norm()))
}

/// Returns `v / ||v||`, or `None` for the zero vector.
pub fn normalized<T: Real>(v: &[Complex<T>]) -> Option<Vec<Complex<T>>> {
    let n = vector_norm(v);
    (n > T::zero()).then(|| v.iter().map(|&z| z / n).collect())
}

/// Jordan product `(AB + BA) / 2`.
///
/// The two products are summed in the same order regardless of argument
/// order, so the result is bit-identical under swapping `a` and `b`.
pub fn jordan_product<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>, MatrixError> {
    a.require_square()?;
    b.require_square()?;
    if a.shape() != b.shape() {
        return Err(MatrixError::DimensionMismatch {
            left: a.shape(),
            right: b.shape(),
        });
    }
    let ab = a.try_mul(b)?;
    let ba = b.try_mul(a)?;
    let half = T::lit(0.5);
    ab.zip_with(&ba, |x, y| {
        // Commutative complex addition keeps the result symmetric.
        (x + y) * half
    })
}

/// Rank-one operator `x ⊗ y : u -> <u, y> x`, entries `x_i conj(y_j)`.
pub fn rank_one<T: Real>(x: &[Complex<T>], y: &[Complex<T>]) -> Result<ComplexMatrix<T>, MatrixError> {
    if x.len() != y.len() {
        return Err(MatrixError::DimensionMismatch {
            left: (x.len(), 1),
            right: (y.len(), 1),
        });
    }
    if x.is_empty() || vector_norm(x) == T::zero() || vector_norm(y) == T::zero() {
        return Err(MatrixError::ZeroVector);
    }
    let n = x.len();
    Ok(ComplexMatrix::from_fn(n, n, |i, j| x[i] * y[j].conj()))
}

/// Standard basis vector `e_k` in dimension `n`.
pub fn basis_vector<T: Real>(n: usize, k: usize) -> Vec<Complex<T>> {
    (0..n)
        .map(|i| if i == k { Complex::one() } else { Complex::zero() })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = ComplexMatrix<f64>;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(matches!(
            M::new(2, 2, vec![c(0.0, 0.0); 3]),
            Err(MatrixError::InvalidData { .. })
        ));
        assert!(matches!(M::new(0, 2, vec![]), Err(MatrixError::EmptyShape { .. })));
        assert_eq!(
            M::new(1, 2, vec![c(0.0, 0.0), c(f64::NAN, 0.0)]),
            Err(MatrixError::NonFinite { row: 0, col: 1 })
        );
        assert!(M::new(1, 1, vec![c(f64::INFINITY, 0.0)]).is_err());
    }

    #[test]
    fn adjoint_examples() {
        let t = M::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(t.adjoint(), M::from_real(2, 2, &[0.0, 0.0, 1.0, 0.0]).unwrap());
        let i = M::new(1, 1, vec![c(0.0, 1.0)]).unwrap();
        assert_eq!(i.adjoint(), M::new(1, 1, vec![c(0.0, -1.0)]).unwrap());
        let h = M::new(2, 2, vec![c(2.0, 0.0), c(1.0, -3.0), c(1.0, 3.0), c(-1.0, 0.0)]).unwrap();
        assert_eq!(h.adjoint(), h);
    }

    #[test]
    fn adjoint_of_rectangular() {
        let a = M::from_real(2, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        let at = a.adjoint();
        assert_eq!(at.shape(), (3, 2));
        assert_eq!(at.get(2, 1), c(6.0, 0.0));
        assert_eq!(at.adjoint(), a);
    }

    #[test]
    fn jordan_product_examples() {
        let a = M::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        let b = M::from_real(2, 2, &[0.0, 0.0, 1.0, 0.0]).unwrap();
        // AB = diag(1, 0), BA = diag(0, 1).
        assert_eq!(jordan_product(&a, &b).unwrap(), M::from_real_diagonal(&[0.5, 0.5]));
        assert_eq!(jordan_product(&a, &M::identity(2)).unwrap(), a);
        assert!(matches!(
            jordan_product(&a, &M::identity(3)),
            Err(MatrixError::DimensionMismatch { .. })
        ));
        let rect = M::zeros(2, 3);
        assert!(matches!(
            jordan_product(&rect, &rect),
            Err(MatrixError::NotSquare { .. })
        ));
    }

    #[test]
    fn jordan_product_of_nested_projections() {
        // Q = e1⊗e1 <= P = e1⊗e1 + e2⊗e2 gives P∘Q = Q.
        let p = M::from_real_diagonal(&[1.0, 1.0, 0.0]);
        let q = M::from_real_diagonal(&[1.0, 0.0, 0.0]);
        assert_eq!(jordan_product(&p, &q).unwrap(), q);
    }

    #[test]
    fn rank_one_examples() {
        let e1 = basis_vector::<f64>(2, 0);
        let e2 = basis_vector::<f64>(2, 1);
        assert_eq!(rank_one(&e1, &e1).unwrap(), M::from_real_diagonal(&[1.0, 0.0]));
        assert_eq!(
            rank_one(&e1, &e2).unwrap(),
            M::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap()
        );
        assert_eq!(rank_one(&e1, &[c(0.0, 0.0), c(0.0, 0.0)]), Err(MatrixError::ZeroVector));
        assert!(rank_one(&e1, &basis_vector::<f64>(3, 0)).is_err());
    }

    #[test]
    fn rank_one_action() {
        let x = vec![c(1.0, 2.0), c(-0.5, 0.25), c(0.0, 1.0)];
        let y = vec![c(0.3, -1.0), c(2.0, 0.0), c(-1.0, -1.0)];
        let u = vec![c(0.7, 0.1), c(-0.2, 0.9), c(1.5, -0.4)];
        let lhs = rank_one(&x, &y).unwrap().mul_vec(&u);
        let s = inner(&u, &y);
        for (l, xi) in lhs.iter().zip(&x) {
            assert!((l - s * xi).norm() < 1e-14);
        }
    }

    #[test]
    fn frobenius_and_trace() {
        let m = M::new(2, 2, vec![c(3.0, 4.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)]).unwrap();
        assert!((m.frobenius_norm() - 26f64.sqrt()).abs() < 1e-15);
        assert_eq!(m.trace(), c(3.0, 5.0));
        assert_eq!(M::zeros(3, 3).frobenius_norm(), 0.0);
    }

    #[test]
    fn approx_eq_is_mixed() {
        let tol = Tolerances::default();
        let a = M::identity(2).scale_real(1e6);
        let b = a.map(|z| z + c(1e-4, 0.0));
        assert!(a.approx_eq(&b, &tol));
        let z = M::zeros(2, 2);
        assert!(!z.approx_eq(&M::identity(2).scale_real(1e-6), &tol));
    }
}
