//! Candidate maps `Φ` on square matrices and the checks that unitary
//! conjugation commutes with `Δλ` of Jordan products while the natural
//! competitors do not.
//!
//! Commutation residuals are measured in the operator 2-norm and judged
//! against `fix_rel * (1 + ||A||_2 ||B||_2)`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::decomp::{operator_norm, svd};
use crate::generators::{
    ginibre, hermitian, normal, orthonormal_columns, projection_onto, projection_rankk, unit_vector, unitary, TrialRng,
};
use crate::harness::{CheckConfig, Gauge, Probe, Trial};
use crate::matrix::{inner, jordan_product, rank_one, vector_norm};
use crate::polar::aluthge;
use crate::predicates::{projection_residual, quasi_normal_residual};
use crate::{CMatrix, MatrixError, Tolerances, C64};

/// Allowed `||U*U - I||_F / n` for a candidate map's unitary.
pub const UNITARY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapKind {
    /// `A ↦ U A U*`
    UnitaryConj,
    /// `A ↦ U A* U*`
    AdjointConj,
    /// `A ↦ c U A U*`
    ScaledUnitaryConj,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CandidateMap {
    kind: MapKind,
    unitary: CMatrix,
    scale: C64,
}

impl CandidateMap {
    pub fn new(kind: MapKind, unitary: CMatrix, scale: C64) -> Result<Self, MatrixError> {
        let n = unitary.require_square()?;
        let err = (&unitary.adjoint() * &unitary).distance(&CMatrix::identity(n));
        if err > UNITARY_TOL * n as f64 {
            return Err(MatrixError::Precondition(format!(
                "map matrix is not unitary: ||U*U - I||_F = {err:e}"
            )));
        }
        let scale = if kind == MapKind::ScaledUnitaryConj {
            scale
        } else {
            C64::new(1.0, 0.0)
        };
        Ok(Self { kind, unitary, scale })
    }

    pub fn unitary_conj(u: CMatrix) -> Result<Self, MatrixError> {
        Self::new(MapKind::UnitaryConj, u, C64::new(1.0, 0.0))
    }

    pub fn adjoint_conj(u: CMatrix) -> Result<Self, MatrixError> {
        Self::new(MapKind::AdjointConj, u, C64::new(1.0, 0.0))
    }

    pub fn scaled_unitary_conj(u: CMatrix, c: C64) -> Result<Self, MatrixError> {
        Self::new(MapKind::ScaledUnitaryConj, u, c)
    }

    pub fn kind(&self) -> MapKind {
        self.kind
    }

    pub fn unitary(&self) -> &CMatrix {
        &self.unitary
    }

    pub fn scale(&self) -> C64 {
        self.scale
    }

    pub fn apply(&self, a: &CMatrix) -> Result<CMatrix, MatrixError> {
        let n = a.require_square()?;
        if n != self.unitary.rows() {
            return Err(MatrixError::DimensionMismatch {
                left: self.unitary.shape(),
                right: a.shape(),
            });
        }
        let u = &self.unitary;
        Ok(match self.kind {
            MapKind::UnitaryConj => &(u * a) * &u.adjoint(),
            MapKind::AdjointConj => &(u * &a.adjoint()) * &u.adjoint(),
            MapKind::ScaledUnitaryConj => (&(u * a) * &u.adjoint()).scale(self.scale),
        })
    }
}

/// Which map family a check draws from; the unitary is fixed or drawn
/// per trial.
#[derive(Debug, Clone, PartialEq)]
pub struct MapSpec {
    pub kind: MapKind,
    pub unitary: Option<CMatrix>,
    pub scale: C64,
}

impl MapSpec {
    pub fn random(kind: MapKind) -> Self {
        Self {
            kind,
            unitary: None,
            scale: C64::new(1.0, 0.0),
        }
    }

    pub fn scaled(c: C64) -> Self {
        Self {
            kind: MapKind::ScaledUnitaryConj,
            unitary: None,
            scale: c,
        }
    }

    pub fn fixed(kind: MapKind, u: CMatrix) -> Self {
        Self {
            kind,
            unitary: Some(u),
            scale: C64::new(1.0, 0.0),
        }
    }

    /// Whether the commutation conditions should hold for this family.
    pub fn expected_to_hold(&self) -> bool {
        match self.kind {
            MapKind::UnitaryConj => true,
            MapKind::AdjointConj => false,
            MapKind::ScaledUnitaryConj => self.scale == C64::new(1.0, 0.0),
        }
    }

    pub fn draw(&self, rng: &mut TrialRng, n: usize) -> Result<CandidateMap, MatrixError> {
        let u = match &self.unitary {
            Some(u) => u.clone(),
            None => unitary(rng, n),
        };
        CandidateMap::new(self.kind, u, self.scale)
    }
}

/// Source of the `(A, B)` pairs.
#[derive(Debug, Clone, PartialEq)]
pub enum PairSource {
    Ginibre,
    Fixed(CMatrix, CMatrix),
}

impl PairSource {
    fn draw(&self, rng: &mut TrialRng, n: usize) -> (CMatrix, CMatrix) {
        match self {
            PairSource::Ginibre => (ginibre(rng, n), ginibre(rng, n)),
            PairSource::Fixed(a, b) => (a.clone(), b.clone()),
        }
    }
}

/// Sides of `Δλ(Φ(A)∘Φ(B)^s) = Φ(Δλ(A∘B^s))` with `B^s = B*` when `star`.
pub struct Commutation {
    pub lhs: CMatrix,
    pub rhs: CMatrix,
    pub residual: f64,
    pub scale: f64,
}

pub fn commutation(
    phi: &CandidateMap,
    a: &CMatrix,
    b: &CMatrix,
    lambda: f64,
    star: bool,
    tol: &Tolerances,
) -> Result<Commutation, MatrixError> {
    let pa = phi.apply(a)?;
    let pb = phi.apply(b)?;
    let (pb, b2) = if star {
        (pb.adjoint(), b.adjoint())
    } else {
        (pb, b.clone())
    };
    let lhs = aluthge(&jordan_product(&pa, &pb)?, lambda, tol)?;
    let rhs = phi.apply(&aluthge(&jordan_product(a, &b2)?, lambda, tol)?)?;
    let residual = operator_norm(&(&lhs - &rhs))?;
    let scale = operator_norm(a)? * operator_norm(b)?;
    Ok(Commutation {
        lhs,
        rhs,
        residual,
        scale,
    })
}

fn commutation_body(
    cfg: &CheckConfig,
    rng: &mut TrialRng,
    t: &mut Trial,
    map: &MapSpec,
    pairs: &PairSource,
    star: bool,
) -> Result<(), MatrixError> {
    let n = cfg.dim;
    let fix = cfg.tol.fix_rel;
    let label = if star {
        "star Jordan condition"
    } else {
        "Jordan condition"
    };
    if map.expected_to_hold() {
        let phi = map.draw(rng, n)?;
        let (a, b) = pairs.draw(rng, n);
        t.input("U", phi.unitary());
        t.input("A", &a);
        t.input("B", &b);
        let c = commutation(&phi, &a, &b, cfg.lambda, star, &cfg.tol)?;
        let sides = (operator_norm(&c.lhs)?, operator_norm(&c.rhs)?);
        t.confirm_nonvacuous(label, c.residual, c.scale, fix, sides);
        Ok(())
    } else {
        t.refute(label, rng, |rng| {
            let phi = map.draw(rng, n)?;
            let (a, b) = pairs.draw(rng, n);
            let c = commutation(&phi, &a, &b, cfg.lambda, star, &cfg.tol)?;
            let slack = fix * (1.0 + c.scale);
            let vacuous = operator_norm(&c.lhs)? <= slack && operator_norm(&c.rhs)? <= slack;
            Ok(Probe::new(Gauge::new(c.residual, slack))
                .vacuous(vacuous)
                .input("U", phi.unitary())
                .input("A", &a)
                .input("B", &b))
        })
    }
}

/// `Δλ(Φ(A)∘Φ(B)) = Φ(Δλ(A∘B))`.
pub fn jordan_condition(map: MapSpec, pairs: PairSource) -> impl crate::harness::TrialBody {
    move |cfg: &CheckConfig, rng: &mut TrialRng, t: &mut Trial| commutation_body(cfg, rng, t, &map, &pairs, false)
}

/// `Δλ(Φ(A)∘Φ(B)*) = Φ(Δλ(A∘B*))`.
pub fn star_jordan_condition(map: MapSpec, pairs: PairSource) -> impl crate::harness::TrialBody {
    move |cfg: &CheckConfig, rng: &mut TrialRng, t: &mut Trial| commutation_body(cfg, rng, t, &map, &pairs, true)
}

/// Structural properties of unitary conjugation on random projection
/// configurations, plus reverse-direction samples showing `Φ` does not
/// create projections or quasi-normal matrices from generic inputs.
pub fn structural_properties(cfg: &CheckConfig, rng: &mut TrialRng, t: &mut Trial) -> Result<(), MatrixError> {
    let n = cfg.dim;
    let eq = cfg.tol.eq_abs;
    let fix = cfg.tol.fix_rel;
    let phi = CandidateMap::unitary_conj(unitary(rng, n))?;
    t.input("U", phi.unitary());
    let f = |m: &CMatrix| phi.apply(m);

    // (i) commutes with Δλ
    let a = ginibre(rng, n);
    t.input("A", &a);
    let an = a.frobenius_norm();
    let lhs = aluthge(&f(&a)?, cfg.lambda, &cfg.tol)?;
    let rhs = f(&aluthge(&a, cfg.lambda, &cfg.tol)?)?;
    t.confirm("(i) Δ(Φ(A)) = Φ(Δ(A))", lhs.distance(&rhs), an, eq);

    // (ii) multiplicative on squares of normal matrices
    let nm = normal(rng, n);
    t.input("N", &nm);
    let nn = nm.frobenius_norm();
    let fnm = f(&nm)?;
    t.confirm(
        "(ii) Φ(N^2) = Φ(N)^2",
        f(&(&nm * &nm))?.distance(&(&fnm * &fnm)),
        nn * nn,
        eq,
    );
    t.confirm("quasi-normal preserved", quasi_normal_residual(&fnm), nn * nn * nn, fix);

    // (iii) projections map to projections
    let k = rng.random_range(1..n);
    let p = projection_rankk(rng, n, k);
    t.input("P_rank_k", &p);
    t.confirm("(iii) Φ(P) is a projection", projection_residual(&f(&p)?), k as f64, eq);

    // (iv), (vi): P ⊥ Q from disjoint orthonormal columns
    let cols = orthonormal_columns(rng, n, n);
    let kp = rng.random_range(1..n);
    let kq = rng.random_range(1..=n - kp);
    let po = projection_onto(&cols[..kp], n);
    let qo = projection_onto(&cols[kp..kp + kq], n);
    t.input("P_orth", &po);
    t.input("Q_orth", &qo);
    let (fp, fq) = (f(&po)?, f(&qo)?);
    t.confirm("(iv) Φ(P)Φ(Q) = 0", (&fp * &fq).frobenius_norm(), 1.0, eq);
    t.confirm("(iv) Φ(Q)Φ(P) = 0", (&fq * &fp).frobenius_norm(), 1.0, eq);
    let sum = &po + &qo;
    let fsum = f(&sum)?;
    t.confirm(
        "(vi) Φ(P+Q) = Φ(P)+Φ(Q)",
        fsum.distance(&(&fp + &fq)),
        (kp + kq) as f64,
        eq,
    );
    t.confirm(
        "(vi) Φ(P+Q) is a projection",
        projection_residual(&fsum),
        (kp + kq) as f64,
        eq,
    );

    // (v): Q ≤ P from nested spans
    let big = rng.random_range(1..=n);
    let small = rng.random_range(1..=big);
    let pn = projection_onto(&cols[..big], n);
    let qn = projection_onto(&cols[..small], n);
    t.input("P_outer", &pn);
    t.input("Q_inner", &qn);
    let (fpn, fqn) = (f(&pn)?, f(&qn)?);
    t.confirm(
        "(v) Φ(P)∘Φ(Q) = Φ(Q)",
        jordan_product(&fpn, &fqn)?.distance(&fqn),
        big as f64,
        eq,
    );
    t.confirm("(v) Φ(P)Φ(Q) = Φ(Q)", (&fpn * &fqn).distance(&fqn), big as f64, eq);

    // (vii): rank-one projections stay rank one
    let x = unit_vector(rng, n);
    let p1 = rank_one(&x, &x)?;
    let fp1 = f(&p1)?;
    t.confirm("(vii) Φ(x⊗x) is a projection", projection_residual(&fp1), 1.0, eq);
    t.confirm(
        "(vii) tr Φ(x⊗x) = 1",
        (fp1.trace() - C64::new(1.0, 0.0)).norm(),
        1.0,
        eq,
    );
    let rank = svd(&fp1)?.rank(&cfg.tol);
    if rank != 1 {
        t.fail(format!("(vii) Φ(x⊗x) has numerical rank {rank}"));
    }

    // self-adjointness, Φ(0) = 0, Φ(I) = I
    let h = hermitian(rng, n);
    t.input("H", &h);
    let fh = f(&h)?;
    t.confirm("Φ(H) self-adjoint", fh.distance(&fh.adjoint()), h.frobenius_norm(), eq);
    t.confirm("Φ(0) = 0", f(&CMatrix::zeros(n, n))?.frobenius_norm(), 0.0, eq);
    let id = CMatrix::identity(n);
    t.confirm("Φ(I) = I", f(&id)?.distance(&id), id.frobenius_norm(), eq);

    t.refute("generic A is no projection", rng, |rng| {
        let a = ginibre(rng, n);
        let an = a.frobenius_norm();
        let slack = eq * (1.0 + an * an);
        Ok(Probe::new(Gauge::new(projection_residual(&f(&a)?), slack))
            .premise(Gauge::new(projection_residual(&a), slack))
            .input("A", &a))
    })?;
    t.refute("generic A is not quasi-normal", rng, |rng| {
        let a = ginibre(rng, n);
        let an = a.frobenius_norm();
        let slack = fix * (1.0 + an * an * an);
        Ok(Probe::new(Gauge::new(quasi_normal_residual(&f(&a)?), slack))
            .premise(Gauge::new(quasi_normal_residual(&a), slack))
            .input("A", &a))
    })
}

/// `<Φ(A)y, y> = <Ax, x>` with `y = Ux`, at four unit vectors per trial.
///
/// One trial in ten uses `A = I` and one in ten `A = x⊗x`.
pub fn vector_state_identity(cfg: &CheckConfig, rng: &mut TrialRng, t: &mut Trial) -> Result<(), MatrixError> {
    let n = cfg.dim;
    let phi = CandidateMap::unitary_conj(unitary(rng, n))?;
    let x0 = unit_vector(rng, n);
    let a = match rng.random_range(0..10) {
        0 => CMatrix::identity(n),
        1 => rank_one(&x0, &x0)?,
        _ => ginibre(rng, n),
    };
    t.input("U", phi.unitary());
    t.input("A", &a);
    let fa = phi.apply(&a)?;
    let an = a.frobenius_norm();
    for k in 0..4 {
        let x = if k == 0 { x0.clone() } else { unit_vector(rng, n) };
        let y = phi.unitary().mul_vec(&x);
        let lhs = inner(&fa.mul_vec(&y), &y);
        let rhs = inner(&a.mul_vec(&x), &x);
        t.confirm("<Φ(A)y, y> = <Ax, x>", (lhs - rhs).norm(), an, cfg.tol.eq_abs);
    }
    Ok(())
}

/// The rank-one counterexample for the adjoint form.
#[derive(Debug, Clone)]
pub struct Counterexample {
    /// `A = x⊗x'`
    pub a: CMatrix,
    /// `Δλ(A*)`, through the polar decomposition.
    pub lhs: CMatrix,
    /// `(Δλ(A))*`, through the polar decomposition.
    pub rhs: CMatrix,
    /// `||lhs - rhs||_2`
    pub residual: f64,
    /// `||lhs - rhs||_F`
    pub residual_frobenius: f64,
    /// `|<x, x'>| ||x'⊗x' - x⊗x||_2` from the rank-one formula.
    pub closed_form: f64,
}

/// Builds `A = x⊗x'` and compares `Δλ(A*)` with `(Δλ(A))*`.
///
/// Requires `λ ∈ (0, 1)` and unit, linearly independent, non-orthogonal
/// `x`, `x'`.
pub fn adjoint_counterexample(
    lambda: f64,
    x: &[C64],
    xp: &[C64],
    tol: &Tolerances,
) -> Result<Counterexample, MatrixError> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(MatrixError::LambdaOutOfRange {
            value: lambda,
            range: "(0, 1)",
        });
    }
    if x.len() != xp.len() {
        return Err(MatrixError::DimensionMismatch {
            left: (x.len(), 1),
            right: (xp.len(), 1),
        });
    }
    for (name, v) in [("x", x), ("x'", xp)] {
        let nv = vector_norm(v);
        if (nv - 1.0).abs() > 1e-10 {
            return Err(MatrixError::Precondition(format!(
                "{name} must be a unit vector, norm {nv}"
            )));
        }
    }
    let c = inner(x, xp);
    if c.norm() <= 1e-8 {
        return Err(MatrixError::Precondition("x and x' are orthogonal".into()));
    }
    let perp: Vec<C64> = xp.iter().zip(x).map(|(b, a)| b - a * inner(xp, x)).collect();
    if vector_norm(&perp) <= 1e-8 {
        return Err(MatrixError::Precondition("x and x' are linearly dependent".into()));
    }
    let a = rank_one(x, xp)?;
    let lhs = aluthge(&a.adjoint(), lambda, tol)?;
    let rhs = aluthge(&a, lambda, tol)?.adjoint();
    let diff = &lhs - &rhs;
    let proj_gap = &rank_one(xp, xp)? - &rank_one(x, x)?;
    Ok(Counterexample {
        residual: operator_norm(&diff)?,
        residual_frobenius: diff.frobenius_norm(),
        closed_form: c.norm() * operator_norm(&proj_gap)?,
        a,
        lhs,
        rhs,
    })
}

/// Random-instance version: the residual matches its closed form within
/// `1e-10`, and `A ↦ U A* U*` violates the Jordan condition on `(x⊗x', I)`.
pub fn adjoint_counterexample_check(cfg: &CheckConfig, rng: &mut TrialRng, t: &mut Trial) -> Result<(), MatrixError> {
    let n = cfg.dim;
    let (x, xp) = loop {
        let x = unit_vector(rng, n);
        let xp = unit_vector(rng, n);
        let c = inner(&x, &xp).norm();
        if c > 0.05 && c < 0.95 {
            break (x, xp);
        }
    };
    let ce = adjoint_counterexample(cfg.lambda, &x, &xp, &cfg.tol)?;
    t.input("A", &ce.a);
    t.input("lhs", &ce.lhs);
    t.input("rhs", &ce.rhs);
    t.confirm(
        "residual = closed form",
        (ce.residual - ce.closed_form).abs(),
        0.0,
        1e-10,
    );
    let a = ce.a.clone();
    t.refute("adjoint map on (A, I)", rng, |rng| {
        let phi = CandidateMap::adjoint_conj(unitary(rng, n))?;
        let c = commutation(&phi, &a, &CMatrix::identity(n), cfg.lambda, false, &cfg.tol)?;
        Ok(Probe::new(Gauge::new(c.residual, cfg.tol.fix_rel * (1.0 + c.scale))).input("U", phi.unitary()))
    })
}
