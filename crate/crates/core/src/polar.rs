//! Polar decomposition and the λ-Aluthge family of transforms.
//!
//! For square `T` the polar decomposition `T = V|T|` uses the partial
//! isometry `V` with the same null space as `T`. The λ-Aluthge transform is
//! `Δλ(T) = |T|^λ V |T|^(1-λ)` for `λ ∈ [0, 1]`; `Δ0(T) = T` and `Δ1(T)` is the
//! Duggal transform `|T|V`.

use num_complex::Complex;
use num_traits::Zero;

use crate::decomp::svd;
use crate::error::MatrixError;
use crate::matrix::{inner, rank_one, vector_norm, ComplexMatrix};
use crate::predicates::{is_quasi_normal, normal_residual};
use crate::scalar::Real;
use crate::spectrum::matching_distance;
use crate::spectrum::spectrum;
use crate::tolerance::Tolerances;

/// `T = V |T|` with `N(V) = N(T)`.
#[derive(Debug, Clone)]
pub struct PolarDecomposition<T: Real> {
    isometry_part: ComplexMatrix<T>,
    modulus: ComplexMatrix<T>,
    /// Right singular vectors of `T`; eigenvectors of `|T|`.
    right: ComplexMatrix<T>,
    /// Singular values with those under the rank cutoff set to zero.
    singular_values: Vec<T>,
    rank: usize,
}

impl<T: Real> PolarDecomposition<T> {
    /// The partial isometry `V`.
    pub fn isometry_part(&self) -> &ComplexMatrix<T> {
        &self.isometry_part
    }

    /// The positive factor `|T| = (T*T)^(1/2)`.
    pub fn modulus(&self) -> &ComplexMatrix<T> {
        &self.modulus
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `|T|^gamma` for `gamma > 0`, computed from the singular values
    /// directly. Values below the rank cutoff map to zero.
    pub fn modulus_power(&self, gamma: T) -> ComplexMatrix<T> {
        let powered: Vec<T> = self
            .singular_values
            .iter()
            .map(|&s| if s > T::zero() { s.powf(gamma) } else { T::zero() })
            .collect();
        hermitian_from_factors(&self.right, &powered)
    }

    /// `V |T|`.
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        &self.isometry_part * &self.modulus
    }
}

/// `X diag(values) X*`.
fn hermitian_from_factors<T: Real>(x: &ComplexMatrix<T>, values: &[T]) -> ComplexMatrix<T> {
    let n = x.rows();
    ComplexMatrix::from_fn(n, n, |i, j| {
        values
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .fold(Complex::zero(), |acc, (k, &v)| {
                acc + x.get(i, k) * x.get(j, k).conj() * v
            })
    })
}

/// Polar decomposition from the SVD `T = W Σ X*`.
///
/// With `r` the numerical rank, `V = W_r X_r*` and `|T| = X Σ_r X*`, where
/// `Σ_r` keeps the leading `r` singular values. The zero matrix yields
/// `V = 0`, `|T| = 0`.
pub fn polar<T: Real>(t: &ComplexMatrix<T>, tol: &Tolerances) -> Result<PolarDecomposition<T>, MatrixError> {
    let n = t.require_square()?;
    let f = svd(t)?;
    let rank = f.rank(tol);
    let isometry_part = ComplexMatrix::from_fn(n, n, |i, j| {
        (0..rank).fold(Complex::zero(), |acc, k| {
            acc + f.left.get(i, k) * f.right.get(j, k).conj()
        })
    });
    let singular_values: Vec<T> = f
        .singular_values
        .iter()
        .enumerate()
        .map(|(k, &s)| if k < rank { s } else { T::zero() })
        .collect();
    let modulus = hermitian_from_factors(&f.right, &singular_values);
    Ok(PolarDecomposition {
        isometry_part,
        modulus,
        right: f.right,
        singular_values,
        rank,
    })
}

fn check_lambda<T: Real>(lambda: T, open: bool) -> Result<(), MatrixError> {
    let ok = if open {
        lambda > T::zero() && lambda < T::one()
    } else {
        lambda >= T::zero() && lambda <= T::one()
    };
    if ok {
        Ok(())
    } else {
        Err(MatrixError::LambdaOutOfRange {
            value: lambda.as_f64(),
            range: if open { "(0, 1)" } else { "[0, 1]" },
        })
    }
}

/// Applies `Δλ` to an existing polar decomposition.
pub fn aluthge_from_polar<T: Real>(p: &PolarDecomposition<T>, lambda: T) -> ComplexMatrix<T> {
    if lambda == T::zero() {
        p.reconstruct()
    } else if lambda == T::one() {
        &p.modulus * &p.isometry_part
    } else {
        let left = p.modulus_power(lambda);
        let right = p.modulus_power(T::one() - lambda);
        &(&left * &p.isometry_part) * &right
    }
}

/// The λ-Aluthge transform `|T|^λ V |T|^(1-λ)`.
///
/// The endpoints skip fractional powers: `λ = 0` returns `V|T|` and `λ = 1`
/// returns `|T|V`.
pub fn aluthge<T: Real>(t: &ComplexMatrix<T>, lambda: T, tol: &Tolerances) -> Result<ComplexMatrix<T>, MatrixError> {
    check_lambda(lambda, false)?;
    Ok(aluthge_from_polar(&polar(t, tol)?, lambda))
}

/// Duggal transform `|T| V`.
pub fn duggal<T: Real>(t: &ComplexMatrix<T>, tol: &Tolerances) -> Result<ComplexMatrix<T>, MatrixError> {
    aluthge(t, T::one(), tol)
}

/// Closed form `Δλ(x⊗y) = (<x, y> / ||y||^2) y⊗y`, valid for `λ ∈ (0, 1)`.
pub fn aluthge_rank_one<T: Real>(
    x: &[Complex<T>],
    y: &[Complex<T>],
    lambda: T,
) -> Result<ComplexMatrix<T>, MatrixError> {
    check_lambda(lambda, true)?;
    // Validates lengths and non-zero vectors.
    rank_one(x, y)?;
    let ny = vector_norm(y);
    let coeff = inner(x, y) / (ny * ny);
    Ok(rank_one(y, y)?.scale(coeff))
}

/// Iterate sequence `Δλ^n(T)` with per-step Frobenius deltas.
#[derive(Debug, Clone)]
pub struct AluthgeTrace<T: Real> {
    pub lambda: T,
    /// `iterates[0] = T`, `iterates[n + 1] = Δλ(iterates[n])`.
    pub iterates: Vec<ComplexMatrix<T>>,
    /// `step_deltas[n] = ||iterates[n + 1] - iterates[n]||_F`.
    pub step_deltas: Vec<T>,
    pub converged: bool,
    pub limit_quasi_normal: bool,
}

/// Per-step diagnostics of an [`AluthgeTrace`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow<T> {
    pub step: usize,
    pub delta_frobenius: T,
    /// `||A A* - A* A||_F` of the iterate produced by this step.
    pub distance_to_normal: T,
    /// Pairing distance between the iterate's spectrum and the input's.
    pub spectral_drift: T,
}

impl<T: Real> AluthgeTrace<T> {
    pub fn limit(&self) -> &ComplexMatrix<T> {
        self.iterates.last().expect("trace holds the input")
    }

    pub fn steps(&self) -> usize {
        self.step_deltas.len()
    }

    /// One row per transform step (the input itself has no row).
    pub fn rows(&self) -> Result<Vec<TraceRow<T>>, MatrixError> {
        let base = spectrum(&self.iterates[0])?;
        self.step_deltas
            .iter()
            .enumerate()
            .map(|(k, &delta)| {
                let it = &self.iterates[k + 1];
                let drift = matching_distance(&base, &spectrum(it)?).expect("same dimension");
                Ok(TraceRow {
                    step: k + 1,
                    delta_frobenius: delta,
                    distance_to_normal: normal_residual(it),
                    spectral_drift: drift,
                })
            })
            .collect()
    }
}

/// Runs `Δλ` repeatedly until `delta <= conv_tol * (1 + ||T||_F)` or
/// `max_iter` steps have been taken.
///
/// Quasi-normality of the final iterate is judged with `fix_rel` relaxed
/// tenfold.
pub fn iterate_aluthge<T: Real>(
    t: &ComplexMatrix<T>,
    lambda: T,
    max_iter: usize,
    conv_tol: T,
    tol: &Tolerances,
) -> Result<AluthgeTrace<T>, MatrixError> {
    t.require_square()?;
    check_lambda(lambda, true)?;
    let threshold = conv_tol * (T::one() + t.frobenius_norm());
    let mut iterates = vec![t.clone()];
    let mut step_deltas = Vec::new();
    let mut converged = false;
    for _ in 0..max_iter {
        let current = iterates.last().expect("non-empty");
        let next = aluthge(current, lambda, tol)?;
        let delta = next.distance(current);
        iterates.push(next);
        step_deltas.push(delta);
        if delta <= threshold {
            converged = true;
            break;
        }
    }
    let limit_quasi_normal = is_quasi_normal(iterates.last().expect("non-empty"), &tol.relaxed_fix(10.0));
    Ok(AluthgeTrace {
        lambda,
        iterates,
        step_deltas,
        converged,
        limit_quasi_normal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::basis_vector;
    use crate::predicates::{is_partial_isometry, partial_isometry_residual};

    type M = ComplexMatrix<f64>;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn polar_of_scaled_shift() {
        let t = M::from_real(2, 2, &[0.0, 2.0, 0.0, 0.0]).unwrap();
        let p = polar(&t, &tol()).unwrap();
        assert!(
            p.isometry_part()
                .distance(&M::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap())
                < 1e-15
        );
        assert!(p.modulus().distance(&M::from_real_diagonal(&[0.0, 2.0])) < 1e-15);
        assert!(p.reconstruct().distance(&t) < 1e-15);
        assert_eq!(p.rank(), 1);
        // N(V) = span(e1) = N(T).
        let e1 = basis_vector::<f64>(2, 0);
        assert!(crate::matrix::vector_norm(&p.isometry_part().mul_vec(&e1)) < 1e-15);
        assert!(is_partial_isometry(p.isometry_part(), &tol()));
    }

    #[test]
    fn polar_of_unitary_and_psd() {
        let r = 0.5f64.sqrt();
        let u = M::new(2, 2, vec![c(r, 0.0), c(0.0, r), c(0.0, r), c(r, 0.0)]).unwrap();
        let p = polar(&u, &tol()).unwrap();
        assert!(p.isometry_part().distance(&u) < 1e-14);
        assert!(p.modulus().distance(&M::identity(2)) < 1e-14);

        let psd = M::from_real_diagonal(&[3.0, 0.0, 1.0]);
        let p = polar(&psd, &tol()).unwrap();
        assert!(p.modulus().distance(&psd) < 1e-14);
        assert!(p.isometry_part().distance(&M::from_real_diagonal(&[1.0, 0.0, 1.0])) < 1e-14);
    }

    #[test]
    fn polar_of_zero() {
        let p = polar(&M::zeros(3, 3), &tol()).unwrap();
        assert_eq!(p.rank(), 0);
        assert_eq!(p.isometry_part(), &M::zeros(3, 3));
        assert_eq!(p.modulus(), &M::zeros(3, 3));
        assert_eq!(aluthge(&M::zeros(3, 3), 0.5, &tol()).unwrap(), M::zeros(3, 3));
    }

    #[test]
    fn polar_rejects_rectangular() {
        assert!(matches!(
            polar(&M::zeros(2, 3), &tol()),
            Err(MatrixError::NotSquare { .. })
        ));
    }

    #[test]
    fn aluthge_examples() {
        for lambda in [0.0, 0.3, 0.5, 1.0] {
            assert!(
                aluthge(&M::identity(3), lambda, &tol())
                    .unwrap()
                    .distance(&M::identity(3))
                    < 1e-14
            );
        }
        let shift = M::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(aluthge(&shift, 0.5, &tol()).unwrap().frobenius_norm() < 1e-15);
        assert!(matches!(
            aluthge(&shift, 1.5, &tol()),
            Err(MatrixError::LambdaOutOfRange { .. })
        ));
        assert!(aluthge(&shift, f64::NAN, &tol()).is_err());
    }

    #[test]
    fn endpoints() {
        let t = M::new(2, 2, vec![c(1.0, 1.0), c(2.0, 0.0), c(0.0, -1.0), c(0.5, 0.0)]).unwrap();
        assert!(aluthge(&t, 0.0, &tol()).unwrap().distance(&t) < 1e-13);
        assert_eq!(aluthge(&t, 1.0, &tol()).unwrap(), duggal(&t, &tol()).unwrap());
    }

    #[test]
    fn duggal_examples() {
        let t = M::from_real(2, 2, &[0.0, 2.0, 0.0, 0.0]).unwrap();
        // diag(0, 2) * [[0, 1], [0, 0]] = 0.
        assert!(duggal(&t, &tol()).unwrap().frobenius_norm() < 1e-15);
        let normal = M::new(2, 2, vec![c(1.0, 0.0), c(0.0, 2.0), c(0.0, 2.0), c(1.0, 0.0)]).unwrap();
        assert!(duggal(&normal, &tol()).unwrap().distance(&normal) < 1e-13);
    }

    #[test]
    fn rank_one_closed_form() {
        let r = 0.5f64.sqrt();
        let x = basis_vector::<f64>(2, 0);
        let y = vec![c(r, 0.0), c(r, 0.0)];
        let expected = M::from_real(2, 2, &[0.5, 0.5, 0.5, 0.5]).unwrap().scale_real(r);
        let closed = aluthge_rank_one(&x, &y, 0.5).unwrap();
        assert!(closed.distance(&expected) < 1e-15);
        let via_polar = aluthge(&rank_one(&x, &y).unwrap(), 0.5, &tol()).unwrap();
        assert!(via_polar.distance(&expected) < 1e-14);

        let e2 = basis_vector::<f64>(2, 1);
        assert_eq!(aluthge_rank_one(&x, &e2, 0.3).unwrap().frobenius_norm(), 0.0);
        assert!(
            aluthge_rank_one(&y, &y, 0.7)
                .unwrap()
                .distance(&rank_one(&y, &y).unwrap())
                < 1e-15
        );

        assert!(aluthge_rank_one(&x, &y, 0.0).is_err());
        assert!(aluthge_rank_one(&x, &y, 1.0).is_err());
        assert_eq!(
            aluthge_rank_one(&x, &[c(0.0, 0.0), c(0.0, 0.0)], 0.5),
            Err(MatrixError::ZeroVector)
        );
    }

    #[test]
    fn polar_invariants_on_rank_deficient_input() {
        let x = vec![c(1.0, 0.5), c(-0.2, 0.0), c(0.0, 1.0), c(0.3, -0.3)];
        let y = vec![c(0.5, 0.0), c(1.0, 1.0), c(-0.4, 0.2), c(0.0, -1.0)];
        let z = vec![c(0.0, 1.0), c(1.0, 0.0), c(0.7, 0.0), c(-1.0, 0.2)];
        let t = &rank_one(&x, &y).unwrap() + &rank_one(&z, &x).unwrap();
        let p = polar(&t, &tol()).unwrap();
        assert_eq!(p.rank(), 2);
        let err = p.reconstruct().distance(&t);
        assert!(err < 1e-13, "{err}");
        assert!(partial_isometry_residual(p.isometry_part()) < 1e-13);
        // N(V) = N(T) = N(|T|): compare on an orthonormal basis.
        let f = svd(&t).unwrap();
        for k in 0..4 {
            let v = f.right.column(k);
            let vv = crate::matrix::vector_norm(&p.isometry_part().mul_vec(&v));
            let mv = crate::matrix::vector_norm(&p.modulus().mul_vec(&v));
            assert_eq!(vv < 1e-12, mv < 1e-12, "column {k}: {vv} vs {mv}");
        }
    }

    #[test]
    fn iterate_normal_converges_immediately() {
        let t = M::from_diagonal(&[c(1.0, 2.0), c(-0.5, 0.0), c(0.0, 0.3)]);
        let trace = iterate_aluthge(&t, 0.5, 500, 1e-12, &tol()).unwrap();
        assert!(trace.converged);
        assert_eq!(trace.steps(), 1);
        assert!(trace.limit().distance(&t) < 1e-13);
        assert!(trace.limit_quasi_normal);
    }

    #[test]
    fn iterate_shift_hits_zero() {
        let t = M::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        let trace = iterate_aluthge(&t, 0.5, 500, 1e-12, &tol()).unwrap();
        assert!(trace.converged);
        assert_eq!(trace.steps(), 2);
        assert_eq!(trace.iterates[1].frobenius_norm(), 0.0);
        let rows = trace.rows().unwrap();
        assert_eq!(rows.len(), 2);
        assert!((rows[0].delta_frobenius - 1.0).abs() < 1e-15);
        assert_eq!(rows[1].delta_frobenius, 0.0);
    }

    #[test]
    fn iterate_two_by_two_reaches_normal_limit() {
        let t = M::new(2, 2, vec![c(1.0, 0.2), c(3.0, -1.0), c(0.1, 0.0), c(-0.5, 0.7)]).unwrap();
        let trace = iterate_aluthge(&t, 0.5, 500, 1e-12, &tol()).unwrap();
        assert!(trace.converged, "steps {}", trace.steps());
        assert!(normal_residual(trace.limit()) < 1e-6);
        assert!(trace.limit_quasi_normal);
        for row in trace.rows().unwrap() {
            assert!(row.spectral_drift < 1e-9);
        }
    }

    #[test]
    fn iterate_rejects_endpoints() {
        assert!(iterate_aluthge(&M::identity(2), 0.0, 10, 1e-10, &tol()).is_err());
        assert!(iterate_aluthge(&M::identity(2), 1.0, 10, 1e-10, &tol()).is_err());
    }

    #[test]
    fn generic_over_f32() {
        let t = ComplexMatrix::<f32>::from_real(2, 2, &[1.0, 2.0, 0.0, 3.0]).unwrap();
        let tol32 = Tolerances {
            rank_rel: 1e-6,
            ..Tolerances::default()
        };
        let d = aluthge(&t, 0.5f32, &tol32).unwrap();
        let d64 = aluthge(&t.cast::<f64>(), 0.5f64, &tol()).unwrap();
        assert!(d.cast::<f64>().distance(&d64) < 1e-5);
    }
}
