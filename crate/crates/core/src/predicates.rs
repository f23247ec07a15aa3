//! Structural predicates: normal, quasi-normal, projection, partial isometry.
//!
//! Each predicate has a companion `*_residual` returning the raw Frobenius
//! residual so callers can report margins.

use crate::matrix::ComplexMatrix;
use crate::scalar::Real;
use crate::tolerance::Tolerances;

/// `||T*T - TT*||_F`.
pub fn normal_residual<T: Real>(t: &ComplexMatrix<T>) -> T {
    let th = t.adjoint();
    (&th * t).distance(&(t * &th))
}

/// `||TT*T - T*T^2||_F`.
pub fn quasi_normal_residual<T: Real>(t: &ComplexMatrix<T>) -> T {
    let th = t.adjoint();
    let tth = t * &th;
    let tht = &th * t;
    (&tth * t).distance(&(&tht * t))
}

/// `max(||T^2 - T||_F, ||T - T*||_F)`.
pub fn projection_residual<T: Real>(t: &ComplexMatrix<T>) -> T {
    (t * t).distance(t).max(t.distance(&t.adjoint()))
}

/// `||TT*T - T||_F`.
pub fn partial_isometry_residual<T: Real>(t: &ComplexMatrix<T>) -> T {
    (&(t * &t.adjoint()) * t).distance(t)
}

/// `T*T = TT*` within `fix_rel * (1 + ||T||_F^2)`.
pub fn is_normal<T: Real>(t: &ComplexMatrix<T>, tol: &Tolerances) -> bool {
    if !t.is_square() {
        return false;
    }
    let n = t.frobenius_norm();
    normal_residual(t) <= T::lit(tol.fix_rel) * (T::one() + n * n)
}

/// `TT*T = T*T^2` within `fix_rel * (1 + ||T||_F^3)`.
pub fn is_quasi_normal<T: Real>(t: &ComplexMatrix<T>, tol: &Tolerances) -> bool {
    if !t.is_square() {
        return false;
    }
    let n = t.frobenius_norm();
    quasi_normal_residual(t) <= T::lit(tol.fix_rel) * (T::one() + n * n * n)
}

/// Orthogonal projection: `T^2 = T = T*` within `eq_abs * (1 + ||T||_F^2)`.
pub fn is_projection<T: Real>(t: &ComplexMatrix<T>, tol: &Tolerances) -> bool {
    if !t.is_square() {
        return false;
    }
    let n = t.frobenius_norm();
    projection_residual(t) <= T::lit(tol.eq_abs) * (T::one() + n * n)
}

/// Partial isometry: `TT*T = T` within `eq_abs * (1 + ||T||_F^3)`. Any shape.
pub fn is_partial_isometry<T: Real>(t: &ComplexMatrix<T>, tol: &Tolerances) -> bool {
    let n = t.frobenius_norm();
    partial_isometry_residual(t) <= T::lit(tol.eq_abs) * (T::one() + n * n * n)
}

/// Hermitian: `T = T*` within `eq_abs * (1 + ||T||_F)`.
pub fn is_self_adjoint<T: Real>(t: &ComplexMatrix<T>, tol: &Tolerances) -> bool {
    t.is_square() && t.approx_eq(&t.adjoint(), tol)
}
