//! Dense eigen-solvers for the tiny matrices this crate needs: real symmetric
//! 3x3 (cyclic Jacobi) and the minimum eigenvalue of complex Hermitian
//! matrices up to 8x8 (Jacobi on the real 2n x 2n embedding).
//!
//! Jacobi was chosen over the closed-form cubic because it is backward stable
//! and returns an orthonormal eigenbasis directly; the cubic survives only as
//! a test oracle. Output is deterministic: eigenvalues sorted descending with
//! a stable tie order, and each eigenvector's first component of magnitude
//! above 1e-12 is made positive.

use crate::error::{Error, Result};
use crate::C64;

/// Convergence threshold on the off-diagonal Frobenius norm.
pub const JACOBI_OFFDIAG_TOL: f64 = 1e-14;
/// Hard sweep cap; quadratic convergence needs far fewer for n <= 16.
pub const JACOBI_MAX_SWEEPS: usize = 50;
/// Components smaller than this do not decide an eigenvector's sign.
pub const SIGN_PIVOT_TOL: f64 = 1e-12;
/// Maximum deviation from Hermitian symmetry accepted by [`min_eig_herm`].
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Relative gap below which eigenvalues are ordered as ties (first in wins).
pub const EIG_TIE_REL_TOL: f64 = 1e-11;

const MAX_N: usize = 16;

/// Real symmetric 3x3 matrix. Construction enforces exact (bitwise) symmetry,
/// so downstream code never has to re-symmetrize.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymMat3 {
    m: [[f64; 3]; 3],
}

impl SymMat3 {
    /// Wraps a matrix that is already exactly symmetric.
    pub fn new(m: [[f64; 3]; 3]) -> Result<Self> {
        for r in &m {
            for x in r {
                if !x.is_finite() {
                    return Err(Error::InvalidInput("non-finite matrix entry".into()));
                }
            }
        }
        for i in 0..3 {
            for j in (i + 1)..3 {
                if m[i][j] != m[j][i] {
                    return Err(Error::InvalidInput(format!(
                        "matrix not exactly symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(SymMat3 { m })
    }

    /// Builds from the upper triangle, mirroring it exactly.
    pub fn from_upper(diag: [f64; 3], off: [f64; 3]) -> Self {
        let [a01, a02, a12] = off;
        SymMat3 {
            m: [
                [diag[0], a01, a02],
                [a01, diag[1], a12],
                [a02, a12, diag[2]],
            ],
        }
    }

    pub fn entries(&self) -> &[[f64; 3]; 3] {
        &self.m
    }

    /// Quadratic form v . M v.
    pub fn quad_form(&self, v: [f64; 3]) -> f64 {
        let mut acc = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                acc += v[i] * self.m[i][j] * v[j];
            }
        }
        acc
    }
}

/// Eigen-decomposition of a [`SymMat3`]: `values[i]` belongs to `vectors[i]`,
/// values descending, vectors orthonormal.
#[derive(Clone, Copy, Debug)]
pub struct EigenPair3 {
    pub values: [f64; 3],
    pub vectors: [[f64; 3]; 3],
}

/// Full eigen-decomposition of a real symmetric 3x3 matrix by cyclic Jacobi.
pub fn eig_sym3(m: &SymMat3) -> Result<EigenPair3> {
    let mut a = [[0.0; MAX_N]; MAX_N];
    for i in 0..3 {
        a[i][..3].copy_from_slice(&m.m[i]);
    }
    let (vals, vecs) = jacobi_sym(a, 3)?;
    let mut order = [0usize, 1, 2];
    // Stable: ties keep ascending index so degenerate spectra are handled
    // identically on every call. Near-ties count as ties — eigenvalues that
    // are mathematically equal can differ by round-off in the input entries,
    // and downstream consumers branch on which eigenvector comes first.
    let tie = EIG_TIE_REL_TOL * vals[..3].iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for pass in 0..2 {
        for k in 0..2 - pass {
            if vals[order[k + 1]] > vals[order[k]] + tie {
                order.swap(k, k + 1);
            }
        }
    }
    let mut out = EigenPair3 {
        values: [0.0; 3],
        vectors: [[0.0; 3]; 3],
    };
    for (slot, &idx) in order.iter().enumerate() {
        out.values[slot] = vals[idx];
        for r in 0..3 {
            out.vectors[slot][r] = vecs[r][idx];
        }
        fix_sign(&mut out.vectors[slot]);
    }
    Ok(out)
}

/// Minimum eigenvalue of a complex Hermitian n x n matrix, n <= 8.
///
/// The matrix H = A + iB (A symmetric, B antisymmetric) is embedded as the
/// real symmetric [[A, -B], [B, A]], whose spectrum is that of H with every
/// eigenvalue doubled, and the embedding is diagonalized by the same Jacobi
/// core used for [`eig_sym3`].
pub fn min_eig_herm<const N: usize>(h: &[[C64; N]; N]) -> Result<f64> {
    assert!(N <= 8, "min_eig_herm supports n <= 8");
    let mut defect: f64 = 0.0;
    for i in 0..N {
        for j in 0..N {
            if !h[i][j].re.is_finite() || !h[i][j].im.is_finite() {
                return Err(Error::InvalidInput("non-finite matrix entry".into()));
            }
            defect = defect.max((h[i][j] - h[j][i].conj()).norm());
        }
    }
    if defect > HERMITICITY_TOL {
        return Err(Error::InvalidInput(format!(
            "matrix not Hermitian: defect {defect:.3e} exceeds {HERMITICITY_TOL:.0e}"
        )));
    }
    let mut a = [[0.0; MAX_N]; MAX_N];
    for i in 0..N {
        for j in 0..N {
            let z = (h[i][j] + h[j][i].conj()) * 0.5;
            a[i][j] = z.re;
            a[i][j + N] = -z.im;
            a[i + N][j] = z.im;
            a[i + N][j + N] = z.re;
        }
    }
    let (vals, _) = jacobi_sym(a, 2 * N)?;
    let mut min = f64::INFINITY;
    for &v in vals.iter().take(2 * N) {
        min = min.min(v);
    }
    Ok(min)
}

/// Cheap sufficient test that every eigenvalue of Hermitian `h` exceeds
/// `-shift`: Cholesky factorization of `h + shift I` succeeds exactly when
/// that shifted matrix is positive definite. Costs O(n^3) with a tiny
/// constant, so callers can reserve the full eigensolve for the rare
/// failures. Assumes `h` is Hermitian; only the lower triangle is read.
pub fn herm_psd_with_shift<const N: usize>(h: &[[C64; N]; N], shift: f64) -> bool {
    assert!(N <= 8, "herm_psd_with_shift supports n <= 8");
    let mut l = [[C64::new(0.0, 0.0); N]; N];
    for j in 0..N {
        let mut d = h[j][j].re + shift;
        for k in 0..j {
            d -= l[j][k].norm_sqr();
        }
        if !(d > 0.0) {
            return false;
        }
        let root = d.sqrt();
        l[j][j] = C64::new(root, 0.0);
        for i in (j + 1)..N {
            let mut acc = h[i][j];
            for k in 0..j {
                acc -= l[i][k] * l[j][k].conj();
            }
            l[i][j] = acc / root;
        }
    }
    true
}

/// Flips `v` so its first component with |x| > [`SIGN_PIVOT_TOL`] is positive.
fn fix_sign(v: &mut [f64; 3]) {
    for &x in v.iter() {
        if x.abs() > SIGN_PIVOT_TOL {
            if x < 0.0 {
                for y in v.iter_mut() {
                    *y = -*y;
                }
            }
            return;
        }
    }
}

fn offdiag_norm(a: &[[f64; MAX_N]; MAX_N], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i][j] * a[i][j];
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi on the leading n x n block. Returns (eigenvalues, V) with
/// A = V diag V^t; V's columns are the eigenvectors, unsorted.
fn jacobi_sym(
    mut a: [[f64; MAX_N]; MAX_N],
    n: usize,
) -> Result<([f64; MAX_N], [[f64; MAX_N]; MAX_N])> {
    let mut v = [[0.0; MAX_N]; MAX_N];
    for (i, row) in v.iter_mut().enumerate().take(n) {
        row[i] = 1.0;
    }
    for _sweep in 0..JACOBI_MAX_SWEEPS {
        if offdiag_norm(&a, n) < JACOBI_OFFDIAG_TOL {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                // Symmetric Schur rotation annihilating a[p][q].
                let tau = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let app = a[p][p];
                let aqq = a[q][q];
                a[p][p] = app - t * apq;
                a[q][q] = aqq + t * apq;
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                for k in 0..n {
                    if k != p && k != q {
                        let akp = a[k][p];
                        let akq = a[k][q];
                        a[k][p] = c * akp - s * akq;
                        a[p][k] = a[k][p];
                        a[k][q] = s * akp + c * akq;
                        a[q][k] = a[k][q];
                    }
                }
                for row in v.iter_mut().take(n) {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    if offdiag_norm(&a, n) >= JACOBI_OFFDIAG_TOL {
        return Err(Error::InternalConsistency(format!(
            "Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps"
        )));
    }
    let mut vals = [0.0; MAX_N];
    for i in 0..n {
        vals[i] = a[i][i];
    }
    Ok((vals, v))
}
