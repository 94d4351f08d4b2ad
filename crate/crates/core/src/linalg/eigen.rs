use serde::Serialize;

use super::matrix::{CMatrix, C64, ZERO};
use crate::error::{Error, Result};

/// Sweep cap for the cyclic Jacobi iteration.
pub const MAX_SWEEPS: usize = 100;
/// Stop once the off-diagonal Frobenius mass falls to this fraction of ‖M‖_F.
pub const OFF_DIAG_REL_TOL: f64 = 1e-14;
/// Relative asymmetry accepted by `herm_eig`.
pub const HERMITIAN_REL_TOL: f64 = 1e-10;

/// Eigenvalues in descending order with orthonormal eigenvectors as columns.
#[derive(Debug, Clone, Serialize)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    #[serde(skip)]
    pub eigenvectors: CMatrix,
}

impl EigenDecomposition {
    /// V·f(Λ)·V*.
    pub fn reassemble(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let v = &self.eigenvectors;
        let n = v.rows();
        let fl: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut acc = ZERO;
                for (k, &w) in fl.iter().enumerate() {
                    if w != 0.0 {
                        acc += v[(i, k)] * v[(j, k)].conj() * w;
                    }
                }
                out[(i, j)] = acc;
                out[(j, i)] = acc.conj();
            }
            out[(i, i)] = C64::new(out[(i, i)].re, 0.0);
        }
        out
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }
}

/// Checks ‖M − M*‖₂ ≤ 1e-10·max(1, ‖M‖₂).
pub fn check_hermitian(m: &CMatrix) -> Result<()> {
    let n = m.ensure_square()?;
    let diff = m - &m.adjoint();
    let res_f = diff.frobenius_norm();
    let m_f = m.frobenius_norm();
    // Cheap accept: ‖D‖₂ ≤ ‖D‖_F and ‖M‖₂ ≥ ‖M‖_F/√n.
    if res_f <= HERMITIAN_REL_TOL * f64::max(1.0, m_f / (n as f64).sqrt()) {
        return Ok(());
    }
    // i(M − M*) is Hermitian, so its 2-norm is its largest |eigenvalue|.
    let skew = diff.scale_complex(C64::new(0.0, 1.0));
    let res = jacobi(&skew, false)?
        .0
        .iter()
        .fold(0.0_f64, |a, l| a.max(l.abs()));
    let norm = super::spectral_norm(m);
    if res <= HERMITIAN_REL_TOL * norm.max(1.0) {
        Ok(())
    } else {
        Err(Error::NotHermitian { residual: res })
    }
}

/// Full Hermitian eigendecomposition by cyclic complex Jacobi.
pub fn herm_eig(m: &CMatrix) -> Result<EigenDecomposition> {
    check_hermitian(m)?;
    let (eigenvalues, vecs) = jacobi(m, true)?;
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors: vecs.expect("vectors requested"),
    })
}

/// Eigenvalues only, descending.
pub fn herm_eigvals(m: &CMatrix) -> Result<Vec<f64>> {
    check_hermitian(m)?;
    Ok(jacobi(m, false)?.0)
}

/// Skips the symmetry check; the input is hermitized first. For internal
/// callers that build Hermitian matrices by construction.
pub(crate) fn herm_eig_unchecked(m: &CMatrix) -> Result<EigenDecomposition> {
    let (eigenvalues, vecs) = jacobi(m, true)?;
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors: vecs.expect("vectors requested"),
    })
}

pub(crate) fn herm_eigvals_unchecked(m: &CMatrix) -> Result<Vec<f64>> {
    Ok(jacobi(m, false)?.0)
}

fn jacobi(m: &CMatrix, want_vectors: bool) -> Result<(Vec<f64>, Option<CMatrix>)> {
    let n = m.ensure_square()?;
    let h = m.hermitian_part();
    if n == 1 {
        let v = want_vectors.then(|| CMatrix::identity(1));
        return Ok((vec![h[(0, 0)].re], v));
    }
    if n == 2 && !want_vectors {
        return Ok((eigvals_2x2(&h), None));
    }

    let mut a = h.into_data();
    let mut v = want_vectors.then(|| CMatrix::identity(n).into_data());

    let total = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let target = OFF_DIAG_REL_TOL * total;
    let mut converged = false;

    for _ in 0..=MAX_SWEEPS {
        if off_diagonal_norm(&a, n) <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, v.as_deref_mut(), n, p, q);
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j * n + j].re.total_cmp(&a[i * n + i].re));
    let eigenvalues = order.iter().map(|&i| a[i * n + i].re).collect();
    let vectors = v.map(|v| CMatrix::from_fn(n, n, |i, j| v[i * n + order[j]]));
    Ok((eigenvalues, vectors))
}

// Closed form for a Hermitian 2×2; identical to a single Jacobi rotation.
fn eigvals_2x2(h: &CMatrix) -> Vec<f64> {
    let a = h[(0, 0)].re;
    let d = h[(1, 1)].re;
    let mean = 0.5 * (a + d);
    let rad = (0.5 * (a - d)).hypot(h[(0, 1)].norm());
    vec![mean + rad, mean - rad]
}

fn off_diagonal_norm(a: &[C64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            s += a[i * n + j].norm_sqr();
        }
    }
    (2.0 * s).sqrt()
}

// Annihilates a[p][q] with the unitary D·J, where D rotates the phase of
// column q so the pivot becomes real and J is a real Givens rotation. Only
// the columns are transformed; rows follow by Hermitian symmetry.
fn rotate(a: &mut [C64], v: Option<&mut [C64]>, n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let r = apq.norm_sqr().sqrt();
    if r == 0.0 {
        return;
    }
    let w = apq.conj() * r.recip();
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.is_infinite() {
        0.0
    } else {
        let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
        sign / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let ws = w * s;
    let wc = w * c;

    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        let new_p = akp * c - akq * ws;
        let new_q = akp * s + akq * wc;
        a[k * n + p] = new_p;
        a[k * n + q] = new_q;
        a[p * n + k] = new_p.conj();
        a[q * n + k] = new_q.conj();
    }
    a[p * n + q] = ZERO;
    a[q * n + p] = ZERO;
    a[p * n + p] = C64::new(app - t * r, 0.0);
    a[q * n + q] = C64::new(aqq + t * r, 0.0);

    if let Some(v) = v {
        for k in 0..n {
            let vkp = v[k * n + p];
            let vkq = v[k * n + q];
            v[k * n + p] = vkp * c - vkq * ws;
            v[k * n + q] = vkp * s + vkq * wc;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::spectral_norm;

    fn check_decomposition(m: &CMatrix, e: &EigenDecomposition) {
        let v = &e.eigenvectors;
        let n = m.rows();
        let lam = CMatrix::from_diag_real(&e.eigenvalues);
        let resid = &m.matmul(v) - &v.matmul(&lam);
        assert!(spectral_norm(&resid) <= 1e-12 * spectral_norm(m).max(1.0));
        let orth = &v.adjoint().matmul(v) - &CMatrix::identity(n);
        assert!(spectral_norm(&orth) <= 1e-12);
        assert!(e.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn identity_and_diagonal() {
        let e = herm_eig(&CMatrix::identity(2)).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 1.0]);
        let e = herm_eig(&CMatrix::from_diag_real(&[1.0, 3.0])).unwrap();
        assert_eq!(e.eigenvalues, vec![3.0, 1.0]);
        assert!((e.eigenvectors[(1, 0)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn two_by_two_characteristic_roots() {
        let m = CMatrix::from_real_rows(&[[1.0, -1.0], [-1.0, 2.0]]);
        let e = herm_eig(&m).unwrap();
        let s5 = 5f64.sqrt();
        assert!((e.eigenvalues[0] - (3.0 + s5) / 2.0).abs() < 1e-14);
        assert!((e.eigenvalues[1] - (3.0 - s5) / 2.0).abs() < 1e-14);
        check_decomposition(&m, &e);
    }

    #[test]
    fn complex_hermitian() {
        let i = C64::new(0.0, 1.0);
        let one = C64::new(1.0, 0.0);
        let m = CMatrix::from_rows(&[
            [one * 2.0, i, one + i],
            [-i, one * 0.5, -one * 2.0],
            [one - i, -one * 2.0, -one],
        ]);
        let e = herm_eig(&m).unwrap();
        check_decomposition(&m, &e);
        let tr: f64 = e.eigenvalues.iter().sum();
        assert!((tr - 1.5).abs() < 1e-13);
        assert_eq!(herm_eigvals(&m).unwrap(), e.eigenvalues);
    }

    #[test]
    fn zero_matrix_converges() {
        let e = herm_eig(&CMatrix::zeros(3, 3)).unwrap();
        assert_eq!(e.eigenvalues, vec![0.0; 3]);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = CMatrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]);
        assert!(matches!(herm_eig(&m), Err(Error::NotHermitian { .. })));
        let m = CMatrix::from_real_rows(&[[1.0, 2.0, 3.0]]);
        assert!(matches!(herm_eig(&m), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn tolerates_roundoff_asymmetry() {
        let m = CMatrix::from_real_rows(&[[1.0, 1.0 + 1e-13], [1.0, 2.0]]);
        assert!(herm_eig(&m).is_ok());
    }
}
