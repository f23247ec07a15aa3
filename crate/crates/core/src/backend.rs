//! Hermitian eigensolver delegated to `nalgebra`.
//!
//! The backend works on raw row-major buffers so that the generic matrix type
//! never has to name `nalgebra`'s own scalar traits.

use nalgebra::{linalg::SymmetricEigen, DMatrix};
use num_complex::Complex;

const MAX_SWEEPS: usize = 10_000;

/// Hermitian eigendecomposition; `vectors` is `n x n` row-major with the
/// eigenvectors stored as columns. Eigenvalues come back unordered.
#[derive(Debug, Clone)]
pub struct RawEig<T> {
    pub values: Vec<T>,
    pub vectors: Vec<Complex<T>>,
}

/// Factorization entry points implemented for each supported precision.
pub trait Backend: Sized {
    fn hermitian_eig(n: usize, data: &[Complex<Self>]) -> Option<RawEig<Self>>;
}

fn row_major<T: Copy>(m: &DMatrix<T>) -> Vec<T> {
    let mut out = Vec::with_capacity(m.nrows() * m.ncols());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out.push(m[(i, j)]);
        }
    }
    out
}

macro_rules! impl_backend {
    ($t:ty) => {
        impl Backend for $t {
            fn hermitian_eig(n: usize, data: &[Complex<$t>]) -> Option<RawEig<$t>> {
                let m = DMatrix::from_row_slice(n, n, data);
                let eig = SymmetricEigen::try_new(m, <$t>::EPSILON, MAX_SWEEPS)?;
                Some(RawEig {
                    values: eig.eigenvalues.iter().copied().collect(),
                    vectors: row_major(&eig.eigenvectors),
                })
            }
        }
    };
}

impl_backend!(f32);
impl_backend!(f64);
