//! Seeded random matrix generators for the randomized checks.
//!
//! Every trial draws from its own ChaCha stream derived from
//! `(seed, dim, trial)`, so trials can run in any order or in parallel and
//! still produce identical reports.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::decomp::svd;
use crate::error::MatrixError;
use crate::matrix::{inner, normalized, rank_one, vector_norm};
use crate::predicates::{normal_residual, projection_residual};
use crate::{CMatrix, C64};

pub type TrialRng = ChaCha8Rng;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Independent stream for one trial of one dimension.
pub fn trial_rng(seed: u64, dim: usize, trial: usize) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(dim as u64)));
    rng.set_stream(trial as u64);
    rng
}

/// Standard complex Gaussian, `E|z|^2 = 1`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C64> {
    (0..n).map(|_| complex_gaussian(rng)).collect()
}

/// Uniformly distributed unit vector in `C^n`.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C64> {
    loop {
        if let Some(v) = normalized(&gaussian_vector(rng, n)) {
            return v;
        }
    }
}

/// Unit vector orthogonal to every vector in `against` (which must be
/// orthonormal and span less than the whole space).
pub fn orthogonal_unit_vector<R: Rng + ?Sized>(rng: &mut R, against: &[Vec<C64>]) -> Vec<C64> {
    let n = against.first().map_or(0, Vec::len);
    loop {
        let mut v = gaussian_vector(rng, n);
        for _ in 0..2 {
            for a in against {
                let p = inner(&v, a);
                for (vi, ai) in v.iter_mut().zip(a) {
                    *vi -= ai * p;
                }
            }
        }
        if vector_norm(&v) > 1e-3 {
            return normalized(&v).expect("nonzero");
        }
    }
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| complex_gaussian(rng))
}

/// `k` orthonormal vectors from Gram-Schmidt (two passes) on Gaussians.
pub fn orthonormal_columns<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> Vec<Vec<C64>> {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(k);
    while cols.len() < k {
        let v = if cols.is_empty() {
            unit_vector(rng, n)
        } else {
            orthogonal_unit_vector(rng, &cols)
        };
        cols.push(v);
    }
    cols
}

/// Haar-distributed unitary.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    CMatrix::from_columns(&orthonormal_columns(rng, n, n))
}

/// Orthogonal projection onto the span of orthonormal `cols`.
pub fn projection_onto(cols: &[Vec<C64>], n: usize) -> CMatrix {
    cols.iter().fold(CMatrix::zeros(n, n), |acc, c| {
        &acc + &rank_one(c, c).expect("unit vector")
    })
}

/// `x⊗x` for a random unit `x`.
pub fn projection_rank1<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let x = unit_vector(rng, n);
    rank_one(&x, &x).expect("unit vector")
}

/// Random orthogonal projection of rank `k`.
pub fn projection_rankk<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> CMatrix {
    projection_onto(&orthonormal_columns(rng, n, k), n)
}

/// `U diag(z) U*` with Gaussian eigenvalues `z` and Haar `U`.
pub fn normal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let u = unitary(rng, n);
    let d = CMatrix::from_diagonal(&gaussian_vector(rng, n));
    &(&u * &d) * &u.adjoint()
}

/// Hermitian `(G + G*) / 2`.
pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let g = ginibre(rng, n);
    (&g + &g.adjoint()).scale_real(0.5)
}

/// Positive semidefinite `G G* / n`.
pub fn psd<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let g = ginibre(rng, n);
    (&g * &g.adjoint()).scale_real(1.0 / n as f64)
}

/// Square-zero `S N S^-1` where `N = X Y*` with `Y* X = 0` and `S` has
/// singular values in `[0.5, 2]`.
pub fn square_zero<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let k = rng.random_range(1..=n / 2);
    let basis = orthonormal_columns(rng, n, 2 * k);
    let (xs, ys) = basis.split_at(k);
    let mut nil = CMatrix::zeros(n, n);
    for x in xs {
        for y in ys {
            let c = complex_gaussian(rng);
            nil = &nil + &rank_one(x, y).expect("unit vectors").scale(c);
        }
    }
    let u = unitary(rng, n);
    let w = unitary(rng, n);
    let d: Vec<f64> = (0..n).map(|_| 2f64.powf(rng.random_range(-1.0..=1.0))).collect();
    let inv: Vec<f64> = d.iter().map(|x| 1.0 / x).collect();
    let s = &(&u * &CMatrix::from_real_diagonal(&d)) * &w.adjoint();
    let s_inv = &(&w * &CMatrix::from_real_diagonal(&inv)) * &u.adjoint();
    &(&s * &nil) * &s_inv
}

/// `σ_min >= 1e-6 σ_max`, the surrogate for "T and T* are one-to-one".
pub fn is_injective(m: &CMatrix) -> bool {
    svd(m).is_ok_and(|f| {
        let s = &f.singular_values;
        s[s.len() - 1] >= 1e-6 * s[0] && s[0] > 0.0
    })
}

/// Ginibre matrix resampled until it passes [`is_injective`].
pub fn invertible<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    loop {
        let g = ginibre(rng, n);
        if is_injective(&g) {
            return g;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    Ginibre,
    Unitary,
    ProjectionRank1,
    ProjectionRankk,
    Normal,
    NilpotentSqZero,
    Psd,
}

impl GeneratorKind {
    pub const ALL: [GeneratorKind; 7] = [
        GeneratorKind::Ginibre,
        GeneratorKind::Unitary,
        GeneratorKind::ProjectionRank1,
        GeneratorKind::ProjectionRankk,
        GeneratorKind::Normal,
        GeneratorKind::NilpotentSqZero,
        GeneratorKind::Psd,
    ];

    pub fn draw<R: Rng + ?Sized>(self, rng: &mut R, n: usize) -> CMatrix {
        match self {
            GeneratorKind::Ginibre => ginibre(rng, n),
            GeneratorKind::Unitary => unitary(rng, n),
            GeneratorKind::ProjectionRank1 => projection_rank1(rng, n),
            GeneratorKind::ProjectionRankk => {
                let k = rng.random_range(1..n);
                projection_rankk(rng, n, k)
            }
            GeneratorKind::Normal => normal(rng, n),
            GeneratorKind::NilpotentSqZero => square_zero(rng, n),
            GeneratorKind::Psd => psd(rng, n),
        }
    }

    /// Scale-relative residual of the structural property this kind
    /// promises; `None` for Ginibre, which promises nothing.
    pub fn structural_residual(self, m: &CMatrix) -> Option<f64> {
        let n = m.frobenius_norm();
        let r = match self {
            GeneratorKind::Ginibre => return None,
            GeneratorKind::Unitary => (&m.adjoint() * m).distance(&CMatrix::identity(m.rows())) / (1.0 + n * n),
            GeneratorKind::ProjectionRank1 | GeneratorKind::ProjectionRankk => projection_residual(m) / (1.0 + n * n),
            GeneratorKind::Normal => normal_residual(m) / (1.0 + n * n),
            GeneratorKind::NilpotentSqZero => (m * m).frobenius_norm() / (1.0 + n * n),
            GeneratorKind::Psd => {
                let skew = m.distance(&m.adjoint());
                let eig = crate::decomp::hermitian_eig(m, &Default::default());
                let low = eig.map_or(f64::INFINITY, |e| (-e.eigenvalues[0]).max(0.0));
                skew.max(low) / (1.0 + n)
            }
        };
        Some(r)
    }
}

/// Generator family, dimension and seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub dim: usize,
    pub kind: GeneratorKind,
    pub seed: u64,
}

/// Structural residual bound every generator must meet.
pub const SELF_TEST_TOL: f64 = 1e-12;

impl GeneratorSpec {
    pub fn new(dim: usize, kind: GeneratorKind, seed: u64) -> Result<Self, MatrixError> {
        if dim < 2 {
            return Err(MatrixError::DimensionTooSmall { dim, min: 2 });
        }
        Ok(Self { dim, kind, seed })
    }

    pub fn sample(&self, trial: usize) -> CMatrix {
        self.kind.draw(&mut trial_rng(self.seed, self.dim, trial), self.dim)
    }

    /// Draws `samples` matrices and returns the worst structural residual.
    /// Errors if any exceeds [`SELF_TEST_TOL`].
    pub fn self_test(&self, samples: usize) -> Result<f64, MatrixError> {
        let mut worst = 0.0f64;
        for t in 0..samples {
            let m = self.sample(t);
            if let Some(r) = self.kind.structural_residual(&m) {
                if r.is_nan() || r > SELF_TEST_TOL {
                    return Err(MatrixError::Precondition(format!(
                        "generator {:?} at dim {} produced residual {r:e}",
                        self.kind, self.dim
                    )));
                }
                worst = worst.max(r);
            }
        }
        Ok(worst)
    }
}

/// Runs the self-test for every generator kind at `dim`.
pub fn self_test_all(dim: usize, seed: u64, samples: usize) -> Result<(), MatrixError> {
    for kind in GeneratorKind::ALL {
        GeneratorSpec::new(dim, kind, seed)?.self_test(samples)?;
    }
    Ok(())
}
