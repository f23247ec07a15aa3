//! Randomized checks of the rank-one formula, the projection lemmas, the
//! square identity, the self-adjointness lemmas, the kernel of the
//! transform, spectrum invariance and the fixed-point characterization.
//!
//! Biconditional checks run both directions in every trial: a constructed
//! instance satisfying the hypothesis, and a generic instance that must fail
//! both sides by a clear margin.

use rand::Rng;

use crate::generators::{
    complex_gaussian, gaussian_vector, ginibre, hermitian, invertible, normal, orthogonal_unit_vector, psd,
    square_zero, unit_vector, TrialRng,
};
use crate::harness::{CheckConfig, Gauge, Probe, Trial};
use crate::matrix::{inner, jordan_product, normalized, rank_one, vector_norm};
use crate::polar::{aluthge, aluthge_rank_one};
use crate::predicates::normal_residual;
use crate::spectrum::{matching_distance, spectrum};
use crate::{CMatrix, MatrixError, C64};

fn delta(cfg: &CheckConfig, m: &CMatrix) -> Result<CMatrix, MatrixError> {
    aluthge(m, cfg.lambda, &cfg.tol)
}

fn scaled(v: Vec<C64>, rng: &mut TrialRng) -> Vec<C64> {
    let s = 10f64.powf(rng.random_range(-1.0..1.0));
    v.into_iter().map(|z| z * s).collect()
}

/// `Δλ(x⊗y) = (<x,y>/||y||^2) y⊗y` against the decomposition path.
///
/// One trial in ten uses `y ⊥ x` and one in ten uses `x = y` unit.
pub fn rank_one_formula(cfg: &CheckConfig, rng: &mut TrialRng, t: &mut Trial) -> Result<(), MatrixError> {
    let n = cfg.dim;
    let mode = rng.random_range(0..10);
    let (x, y) = match mode {
        0 => {
            let x = scaled(gaussian_vector(rng, n), rng);
            let u = normalized(&x).ok_or(MatrixError::ZeroVector)?;
            let y = scaled(orthogonal_unit_vector(rng, &[u]), rng);
            (x, y)
        }
        1 => {
            let x = unit_vector(rng, n);
            (x.clone(), x)
        }
        _ => (
            scaled(gaussian_vector(rng, n), rng),
            scaled(gaussian_vector(rng, n), rng),
        ),
    };
    let a = rank_one(&x, &y)?;
    t.input("x_tensor_y", &a);
    let got = delta(cfg, &a)?;
    let closed = aluthge_rank_one(&x, &y, cfg.lambda)?;
    let scale = vector_norm(&x) * vector_norm(&y);
    t.confirm("rank-one closed form", got.distance(&closed), scale, cfg.tol.eq_abs);
    if mode == 1 {
        t.confirm("unit x = y is fixed", got.distance(&a), 1.0, cfg.tol.eq_abs);
    }
    Ok(())
}

/// `Δλ(A∘P) = P` iff `PA = P`, for `P = x⊗x`.
pub fn projection_absorb(cfg: &CheckConfig, rng: &mut TrialRng, t: &mut Trial) -> Result<(), MatrixError> {
    let n = cfg.dim;
    let eq = cfg.tol.eq_abs;
    let x = unit_vector(rng, n);
    let p = rank_one(&x, &x)?;

    // A* x = x, so PA = x⊗(A* x) = P.
    let a = if rng.random_bool(0.5) {
        let g = ginibre(rng, n);
        let gx = g.adjoint().mul_vec(&x);
        let corr: Vec<C64> = x.iter().zip(&gx).map(|(a, b)| a - b).collect();
        match rank_one(&x, &corr) {
            Ok(r) => &g + &r,
            Err(_) => g,
        }
    } else {
        let z = scaled(orthogonal_unit_vector(rng, std::slice::from_ref(&x)), rng);
        &CMatrix::identity(n) + &rank_one(&z, &x)?
    };
    t.input("P", &p);
    t.input("A", &a);
    let an = a.frobenius_norm();
    t.confirm("construction PA = P", (&p * &a).distance(&p), an, eq);
    let lhs = delta(cfg, &jordan_product(&a, &p)?)?;
    t.confirm("PA = P implies Δ(A∘P) = P", lhs.distance(&p), an, eq);

    t.refute("generic A", rng, |rng| {
        let a = ginibre(rng, n);
        let slack = eq * (1.0 + a.frobenius_norm());
        let premise = (&p * &a).distance(&p);
        let conclusion = delta(cfg, &jordan_product(&a, &p)?)?.distance(&p);
        Ok(Probe::new(Gauge::new(conclusion, slack))
            .premise(Gauge::new(premise, slack))
            .input("A", &a))
    })
}

/// `Δλ(A∘P) = A` iff `A = αP`.
pub fn scalar_projection(cfg: &CheckConfig, rng: &mut TrialRng, t: &mut Trial) -> Result<(), MatrixError> {
    let n = cfg.dim;
    let eq = cfg.tol.eq_abs;
    let x = unit_vector(rng, n);
    let p = rank_one(&x, &x)?;
    let alpha = match rng.random_range(0..10) {
        0 => C64::new(0.0, 0.0),
        1 => C64::new(1.0, 0.0),
        _ => complex_gaussian(rng) * 2.0,
    };
    let a = p.scale(alpha);
    t.input("P", &p);
    t.input("alpha_P", &a);
    let lhs = delta(cfg, &jordan_product(&a, &p)?)?;
    t.confirm("A = αP implies Δ(A∘P) = A", lhs.distance(&a), alpha.norm(), eq);

    t.refute("generic A", rng, |rng| {
        let a = ginibre(rng, n);
        let slack = eq * (1.0 + a.frobenius_norm());
        // Distance from A to span{P}; the projection coefficient is <Ax, x>.
        let coeff = inner(&a.mul_vec(&x), &x);
        let premise = a.distance(&p.scale(coeff));
        let conclusion = delta(cfg, &jordan_product(&a, &p)?)?.distance(&a);
        Ok(Probe::new(Gauge::new(conclusion, slack))
            .premise(Gauge::new(premise, slack))
            .input("A", &a))
    })
}

/// For injective `T`: `Δλ(T^2) = T` iff `T = I`, and `Δλ(T^2) = T`
/// implies `T^2 = T*`.
pub fn square_identity(cfg: &CheckConfig, rng: &mut TrialRng, t: &mut Trial) -> Result<(), MatrixError> {
    let n = cfg.dim;
    let eq = cfg.tol.eq_abs;
    let id = CMatrix::identity(n);
    let nn = id.frobenius_norm();
    t.confirm("T = I", delta(cfg, &(&id * &id))?.distance(&id), nn, eq);

    let mut implication: Vec<(f64, f64, f64)> = Vec::new();
    t.refute("injective T", rng, |rng| {
        let m = if rng.random_range(0..4) == 0 {
            let c = complex_gaussian(rng) * 2.0;
            CMatrix::identity(n).scale(c)
        } else {
            invertible(rng, n)
        };
        let tn = m.frobenius_norm();
        let slack = eq * (1.0 + tn);
        let sq = &m * &m;
        let conclusion = delta(cfg, &sq)?.distance(&m);
        if conclusion <= slack {
            implication.push((sq.distance(&m.adjoint()), tn * tn, conclusion));
        }
        Ok(Probe::new(Gauge::new(conclusion, slack))
            .premise(Gauge::new(m.distance(&id), slack))
            .input("T", &m))
    })?;
    for (gap, scale, _) in implication {
        t.confirm("Δ(T^2) = T implies T^2 = T*", gap, scale, eq);
    }
    Ok(())
}

/// Injective `S`: `Δλ(S) = S*` iff `S = S*`. Normal `S`: `Δλ(S*) = S` iff
/// `S = S*`.
pub fn selfadjoint_lemmas(cfg: &CheckConfig, rng: &mut TrialRng, t: &mut Trial) -> Result<(), MatrixError> {
    let n = cfg.dim;
    let eq = cfg.tol.eq_abs;
    let fix = cfg.tol.fix_rel;
    let s = if rng.random_bool(0.5) {
        hermitian(rng, n)
    } else {
        psd(rng, n)
    };
    t.input("S_hermitian", &s);
    let sn = s.frobenius_norm();
    t.confirm(
        "hermitian S: Δ(S) = S*",
        delta(cfg, &s)?.distance(&s.adjoint()),
        sn,
        fix,
    );
    t.confirm(
        "hermitian S: Δ(S*) = S",
        delta(cfg, &s.adjoint())?.distance(&s),
        sn,
        fix,
    );

    t.refute("injective", rng, |rng| {
        let s = invertible(rng, n);
        let slack = eq * (1.0 + s.frobenius_norm());
        let sh = s.adjoint();
        Ok(Probe::new(Gauge::new(delta(cfg, &s)?.distance(&sh), slack))
            .premise(Gauge::new(s.distance(&sh), slack))
            .input("S", &s))
    })?;
    t.refute("quasinormal", rng, |rng| {
        let s = normal(rng, n);
        let slack = eq * (1.0 + s.frobenius_norm());
        let sh = s.adjoint();
        Ok(Probe::new(Gauge::new(delta(cfg, &sh)?.distance(&s), slack))
            .premise(Gauge::new(s.distance(&sh), slack))
            .input("S", &s))
    })
}

/// Threshold on `||T^2||_F` for the refuting side of the kernel check.
pub const KERNEL_SQUARE_FLOOR: f64 = 1e-3;

/// `Δλ(T) = 0` iff `T^2 = 0`.
///
/// Refuting samples alternate between Ginibre matrices and perturbed
/// square-zero matrices `N + εG`, which probe the boundary of the kernel.
pub fn nilpotent_kernel(cfg: &CheckConfig, rng: &mut TrialRng, t: &mut Trial) -> Result<(), MatrixError> {
    let n = cfg.dim;
    let eq = cfg.tol.eq_abs;
    let m = square_zero(rng, n);
    t.input("T_square_zero", &m);
    let mn = m.frobenius_norm();
    t.confirm("T^2 = 0 (construction)", (&m * &m).frobenius_norm(), mn * mn, eq);
    t.confirm("T^2 = 0 implies Δ(T) = 0", delta(cfg, &m)?.frobenius_norm(), mn, eq);

    t.refute("||T^2|| > floor", rng, |rng| {
        let m = loop {
            let cand = if rng.random_bool(0.5) {
                ginibre(rng, n)
            } else {
                let eps = 10f64.powf(rng.random_range(-3.0..0.0));
                &square_zero(rng, n) + &ginibre(rng, n).scale_real(eps)
            };
            if (&cand * &cand).frobenius_norm() > KERNEL_SQUARE_FLOOR {
                break cand;
            }
        };
        let mn = m.frobenius_norm();
        Ok(
            Probe::new(Gauge::new(delta(cfg, &m)?.frobenius_norm(), eq * (1.0 + mn)))
                .premise(Gauge::new((&m * &m).frobenius_norm(), eq * (1.0 + mn * mn)))
                .input("T", &m),
        )
    })
}

/// Optimal-matching distance between `σ(T)` and `σ(Δλ(T))`.
pub fn spectrum_invariance(cfg: &CheckConfig, rng: &mut TrialRng, t: &mut Trial) -> Result<(), MatrixError> {
    let m = ginibre(rng, cfg.dim);
    t.input("T", &m);
    let before = spectrum(&m)?;
    let after = spectrum(&delta(cfg, &m)?)?;
    let d = matching_distance(&before, &after).expect("same dimension");
    t.confirm("σ(Δ(T)) = σ(T)", d, m.frobenius_norm(), cfg.tol.spec_rel);
    Ok(())
}

/// Normal matrices are exactly the fixed points of `Δλ`.
pub fn fixed_points(cfg: &CheckConfig, rng: &mut TrialRng, t: &mut Trial) -> Result<(), MatrixError> {
    let fix = cfg.tol.fix_rel;
    let m = normal(rng, cfg.dim);
    t.input("T_normal", &m);
    t.confirm(
        "normal T is fixed",
        delta(cfg, &m)?.distance(&m),
        m.frobenius_norm(),
        fix,
    );

    t.refute("non-normal T", rng, |rng| {
        let m = ginibre(rng, cfg.dim);
        let mn = m.frobenius_norm();
        Ok(Probe::new(Gauge::new(delta(cfg, &m)?.distance(&m), fix * (1.0 + mn)))
            .premise(Gauge::new(normal_residual(&m), fix * (1.0 + mn * mn)))
            .input("T", &m))
    })
}
