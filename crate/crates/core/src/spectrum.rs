//! Eigenvalues of general complex matrices and multiset comparison.
//!
//! Eigenvalues come from a Householder reduction to Hessenberg form followed
//! by single-shift complex QR with Wilkinson shifts and aggressive zeroing of
//! negligible subdiagonals. Every similarity applied is unitary, so the
//! computed values are exact eigenvalues of a matrix within a small multiple
//! of machine precision of the input.

use std::cmp::Ordering;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::MatrixError;
use crate::matrix::ComplexMatrix;
use crate::scalar::Real;

const ITERATIONS_PER_EIGENVALUE: usize = 60;

struct Dense<T: Real> {
    n: usize,
    a: Vec<Complex<T>>,
}

impl<T: Real> Dense<T> {
    fn at(&self, i: usize, j: usize) -> Complex<T> {
        self.a[i * self.n + j]
    }

    fn set(&mut self, i: usize, j: usize, z: Complex<T>) {
        self.a[i * self.n + j] = z;
    }

    /// In-place unitary reduction to upper Hessenberg form.
    fn hessenberg(&mut self) {
        let n = self.n;
        for k in 0..n.saturating_sub(2) {
            let col: Vec<Complex<T>> = (k + 1..n).map(|i| self.at(i, k)).collect();
            let alpha = col.iter().fold(T::zero(), |acc, z| acc.hypot(z.norm()));
            if alpha == T::zero() {
                continue;
            }
            // Householder vector v = x + e^{i arg x0} ||x|| e1.
            let x0 = col[0];
            let phase = if x0.norm() == T::zero() {
                Complex::one()
            } else {
                x0 / x0.norm()
            };
            let mut v = col;
            v[0] = v[0] + phase * alpha;
            let vnorm2 = v.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr());
            if vnorm2 == T::zero() {
                continue;
            }
            let two = T::lit(2.0);
            // Left: A <- (I - 2 v v* / v*v) A on rows k+1..n.
            for j in 0..n {
                let s = v
                    .iter()
                    .enumerate()
                    .fold(Complex::zero(), |acc, (r, vi)| acc + vi.conj() * self.at(k + 1 + r, j));
                let f = s * (two / vnorm2);
                for (r, vi) in v.iter().enumerate() {
                    let val = self.at(k + 1 + r, j) - *vi * f;
                    self.set(k + 1 + r, j, val);
                }
            }
            // Right: A <- A (I - 2 v v* / v*v) on columns k+1..n.
            for i in 0..n {
                let s = v
                    .iter()
                    .enumerate()
                    .fold(Complex::zero(), |acc, (r, vi)| acc + self.at(i, k + 1 + r) * *vi);
                let f = s * (two / vnorm2);
                for (r, vi) in v.iter().enumerate() {
                    let val = self.at(i, k + 1 + r) - f * vi.conj();
                    self.set(i, k + 1 + r, val);
                }
            }
            for i in k + 2..n {
                self.set(i, k, Complex::zero());
            }
        }
    }

    fn negligible(&self, k: usize, scale: T) -> bool {
        let sub = self.at(k, k - 1).norm();
        let mut local = self.at(k - 1, k - 1).norm() + self.at(k, k).norm();
        if local == T::zero() {
            local = scale;
        }
        sub <= T::epsilon() * local
    }

    /// Eigenvalue of the trailing 2x2 block of the window closer to its
    /// bottom-right entry.
    fn wilkinson_shift(&self, hi: usize) -> Complex<T> {
        let a = self.at(hi - 1, hi - 1);
        let b = self.at(hi - 1, hi);
        let c = self.at(hi, hi - 1);
        let d = self.at(hi, hi);
        let half = T::lit(0.5);
        let tr_half = (a + d) * half;
        let det = a * d - b * c;
        let disc = (tr_half * tr_half - det).sqrt();
        let l1 = tr_half + disc;
        let l2 = tr_half - disc;
        if (l1 - d).norm() <= (l2 - d).norm() {
            l1
        } else {
            l2
        }
    }

    /// One explicitly shifted QR sweep on the active window `lo..=hi`.
    fn qr_sweep(&mut self, lo: usize, hi: usize, shift: Complex<T>) {
        for i in lo..=hi {
            let v = self.at(i, i) - shift;
            self.set(i, i, v);
        }
        let mut rotations = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let a = self.at(k, k);
            let b = self.at(k + 1, k);
            let (c, s) = givens(a, b);
            for j in k..=hi {
                let x = self.at(k, j);
                let y = self.at(k + 1, j);
                self.set(k, j, x * c + s * y);
                self.set(k + 1, j, -s.conj() * x + y * c);
            }
            self.set(k + 1, k, Complex::zero());
            rotations.push((c, s));
        }
        for (offset, &(c, s)) in rotations.iter().enumerate() {
            let k = lo + offset;
            for i in lo..=(k + 2).min(hi) {
                let x = self.at(i, k);
                let y = self.at(i, k + 1);
                self.set(i, k, x * c + y * s.conj());
                self.set(i, k + 1, -x * s + y * c);
            }
        }
        for i in lo..=hi {
            let v = self.at(i, i) + shift;
            self.set(i, i, v);
        }
    }
}

/// Rotation `[[c, s], [-conj(s), c]]` mapping `(a, b)` to `(r, 0)`.
fn givens<T: Real>(a: Complex<T>, b: Complex<T>) -> (T, Complex<T>) {
    let na = a.norm();
    let nb = b.norm();
    if nb == T::zero() {
        return (T::one(), Complex::zero());
    }
    if na == T::zero() {
        return (T::zero(), b.conj() / nb);
    }
    let r = na.hypot(nb);
    let c = na / r;
    let s = (a / na) * b.conj() / r;
    (c, s)
}

/// Eigenvalues of a square matrix with multiplicity, sorted by `(re, im)`.
pub fn spectrum<T: Real>(m: &ComplexMatrix<T>) -> Result<Vec<Complex<T>>, MatrixError> {
    let n = m.require_square()?;
    let scale = m
        .entries()
        .iter()
        .fold(T::zero(), |acc, z| acc.max(z.re.abs()).max(z.im.abs()));
    if scale == T::zero() {
        return Ok(vec![Complex::zero(); n]);
    }
    let mut h = Dense {
        n,
        a: m.entries().iter().map(|&z| z / scale).collect(),
    };
    h.hessenberg();
    let norm = h.a.iter().fold(T::zero(), |acc, z| acc.hypot(z.norm()));

    let mut values = Vec::with_capacity(n);
    let mut hi = n - 1;
    let mut budget = ITERATIONS_PER_EIGENVALUE * n;
    let mut since_deflation = 0usize;
    loop {
        if hi == 0 {
            values.push(h.at(0, 0));
            break;
        }
        // Locate the start of the unreduced block ending at `hi`.
        let mut lo = hi;
        while lo > 0 {
            if h.negligible(lo, norm) {
                h.set(lo, lo - 1, Complex::zero());
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            values.push(h.at(hi, hi));
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        if budget == 0 {
            return Err(MatrixError::NoConvergence("complex QR eigenvalue iteration"));
        }
        budget -= 1;
        since_deflation += 1;
        let shift = if since_deflation % 11 == 10 {
            // Exceptional shift to break cycles.
            h.at(hi, hi) + Complex::new(h.at(hi, hi - 1).norm() * T::lit(0.75), T::zero())
        } else {
            h.wilkinson_shift(hi)
        };
        h.qr_sweep(lo, hi, shift);
    }

    let mut out: Vec<Complex<T>> = values.into_iter().map(|z| z * scale).collect();
    out.sort_by(cmp_re_im);
    Ok(out)
}

fn cmp_re_im<T: Real>(a: &Complex<T>, b: &Complex<T>) -> Ordering {
    a.re.partial_cmp(&b.re)
        .unwrap_or(Ordering::Equal)
        .then(a.im.partial_cmp(&b.im).unwrap_or(Ordering::Equal))
}

/// Optimal (bottleneck) matching distance between two multisets:
/// the smallest `t` such that a bijection pairs every element of `a` with an
/// element of `b` at distance at most `t`.
///
/// Returns `None` when the multisets have different sizes.
pub fn matching_distance<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Option<T> {
    if a.len() != b.len() {
        return None;
    }
    let n = a.len();
    if n == 0 {
        return Some(T::zero());
    }
    let dist: Vec<T> = a.iter().flat_map(|x| b.iter().map(move |y| (*x - *y).norm())).collect();
    let mut candidates = dist.clone();
    candidates.sort_by(|x, y| x.partial_cmp(y).unwrap_or(Ordering::Equal));
    candidates.dedup();

    let feasible = |t: T| -> bool {
        let mut owner: Vec<Option<usize>> = vec![None; n];
        (0..n).all(|i| {
            let mut seen = vec![false; n];
            augment(i, t, n, &dist, &mut owner, &mut seen)
        })
    };
    // The largest candidate is always feasible.
    let (mut lo, mut hi) = (0usize, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Some(candidates[lo])
}

fn augment<T: Real>(i: usize, t: T, n: usize, dist: &[T], owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
    for j in 0..n {
        if dist[i * n + j] <= t && !seen[j] {
            seen[j] = true;
            let free = match owner[j] {
                None => true,
                Some(k) => augment(k, t, n, dist, owner, seen),
            };
            if free {
                owner[j] = Some(i);
                return true;
            }
        }
    }
    false
}

/// Pairing distance between the spectra of two square matrices.
pub fn spectral_distance<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<T, MatrixError> {
    let sa = spectrum(a)?;
    let sb = spectrum(b)?;
    matching_distance(&sa, &sb).ok_or(MatrixError::DimensionMismatch {
        left: a.shape(),
        right: b.shape(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::rank_one;

    type M = ComplexMatrix<f64>;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn close(a: &[Complex<f64>], b: &[Complex<f64>], tol: f64) -> bool {
        matching_distance(a, b).unwrap() <= tol
    }

    #[test]
    fn triangular_and_nilpotent() {
        let t = M::from_real(2, 2, &[1.0, 1.0, 0.0, 2.0]).unwrap();
        assert!(close(&spectrum(&t).unwrap(), &[c(1.0, 0.0), c(2.0, 0.0)], 1e-14));
        let n = M::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(spectrum(&n).unwrap(), vec![c(0.0, 0.0); 2]);
        assert_eq!(spectrum(&M::zeros(3, 3)).unwrap(), vec![c(0.0, 0.0); 3]);
    }

    #[test]
    fn projection_spectrum() {
        let s = 1.0 / 3f64.sqrt();
        let x = vec![c(s, 0.0), c(0.0, s), c(-s, 0.0)];
        let p = rank_one(&x, &x).unwrap();
        let sp = spectrum(&p).unwrap();
        assert!(close(&sp, &[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)], 1e-14));
    }

    #[test]
    fn rotation_has_complex_pair() {
        let r = M::from_real(2, 2, &[0.0, -1.0, 1.0, 0.0]).unwrap();
        assert!(close(&spectrum(&r).unwrap(), &[c(0.0, -1.0), c(0.0, 1.0)], 1e-14));
    }

    #[test]
    fn companion_matrix_roots() {
        // Companion matrix of (z - 1)(z - 2)(z - 3)(z - i) expanded.
        let roots = [c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(0.0, 1.0)];
        let mut coeffs = vec![c(1.0, 0.0)];
        for r in roots {
            let mut next = vec![c(0.0, 0.0); coeffs.len() + 1];
            for (k, &a) in coeffs.iter().enumerate() {
                next[k] += a;
                next[k + 1] -= a * r;
            }
            coeffs = next;
        }
        let n = roots.len();
        let comp = M::from_fn(n, n, |i, j| {
            if i == 0 {
                -coeffs[j + 1]
            } else if i == j + 1 {
                c(1.0, 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        assert!(close(&spectrum(&comp).unwrap(), &roots, 1e-10));
    }

    #[test]
    fn trace_and_sorting() {
        let a = M::new(
            3,
            3,
            vec![
                c(1.0, 0.5),
                c(-2.0, 0.0),
                c(0.3, 1.1),
                c(0.0, -0.7),
                c(0.9, 0.2),
                c(1.4, 0.0),
                c(-0.6, 0.6),
                c(0.25, -1.5),
                c(2.0, 0.1),
            ],
        )
        .unwrap();
        let sp = spectrum(&a).unwrap();
        let sum = sp.iter().fold(c(0.0, 0.0), |acc, z| acc + z);
        assert!((sum - a.trace()).norm() < 1e-13);
        assert!(sp.windows(2).all(|w| cmp_re_im(&w[0], &w[1]) != Ordering::Greater));
        assert!(matches!(spectrum(&M::zeros(2, 3)), Err(MatrixError::NotSquare { .. })));
    }

    #[test]
    fn matching_is_optimal_not_greedy() {
        // Greedy nearest pairing of 0 -> 0.9 leaves 1.8 -> -1: cost 2.8.
        // Optimal pairing 0 -> -1, 1.8 -> 0.9 costs 1.
        let a = [c(0.0, 0.0), c(1.8, 0.0)];
        let b = [c(0.9, 0.0), c(-1.0, 0.0)];
        assert!((matching_distance(&a, &b).unwrap() - 1.0).abs() < 1e-15);
        assert!(matching_distance(&a, &b[..1]).is_none());
    }
}
