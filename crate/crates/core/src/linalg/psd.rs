use super::eigen::{herm_eig, EigenDecomposition};
use super::matrix::CMatrix;
use crate::error::{Error, Result};

/// Eigenvalues in [−PSD_CLAMP_REL·λ_max, 0) are treated as round-off and clamped.
pub const PSD_CLAMP_REL: f64 = 1e-10;

/// n·ε·λ_max: eigenvalues at or below this count as zero.
pub fn rank_tol(n: usize, lambda_max: f64) -> f64 {
    n as f64 * f64::EPSILON * lambda_max.max(0.0)
}

/// Spectral data of a PSD matrix, from which every factor used by the
/// semi-Hilbertian machinery is assembled.
#[derive(Debug, Clone)]
pub struct PsdFactors {
    eig: EigenDecomposition,
    rank_tol: f64,
    rank: usize,
}

impl PsdFactors {
    /// Validates that `a` is Hermitian PSD within the clamping window.
    pub fn new(a: &CMatrix) -> Result<Self> {
        let eig = herm_eig(a)?;
        Self::from_eigen(eig)
    }

    /// Uses a known decomposition. Eigenvalues are still checked against the
    /// clamping window.
    pub fn from_eigen(eig: EigenDecomposition) -> Result<Self> {
        let n = eig.eigenvalues.len();
        let lmax = eig.max_eigenvalue();
        let lmin = eig.min_eigenvalue();
        if lmin < -PSD_CLAMP_REL * lmax.max(0.0) {
            return Err(Error::NotPsd { eigenvalue: lmin });
        }
        let rank_tol = rank_tol(n, lmax);
        let rank = eig.eigenvalues.iter().filter(|&&l| l > rank_tol).count();
        Ok(Self {
            eig,
            rank_tol,
            rank,
        })
    }

    pub fn dim(&self) -> usize {
        self.eig.eigenvalues.len()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rank_tol(&self) -> f64 {
        self.rank_tol
    }

    pub fn lambda_max(&self) -> f64 {
        self.eig.max_eigenvalue().max(0.0)
    }

    pub fn eigen(&self) -> &EigenDecomposition {
        &self.eig
    }

    /// V·max(Λ,0)·V*.
    pub fn matrix(&self) -> CMatrix {
        self.eig.reassemble(|l| l.max(0.0))
    }

    /// Square root with sub-rank-tolerance eigenvalues zeroed, so that
    /// ker(A^{1/2}) matches the rank decision.
    pub fn sqrt(&self) -> CMatrix {
        let tol = self.rank_tol;
        self.eig.reassemble(|l| if l > tol { l.sqrt() } else { 0.0 })
    }

    pub fn pinv(&self) -> CMatrix {
        let tol = self.rank_tol;
        self.eig.reassemble(|l| if l > tol { 1.0 / l } else { 0.0 })
    }

    pub fn pinv_sqrt(&self) -> CMatrix {
        let tol = self.rank_tol;
        self.eig
            .reassemble(|l| if l > tol { 1.0 / l.sqrt() } else { 0.0 })
    }

    pub fn proj(&self) -> CMatrix {
        let tol = self.rank_tol;
        self.eig.reassemble(|l| if l > tol { 1.0 } else { 0.0 })
    }

    /// Power r ≥ 0 on the range; kernel directions map to zero.
    pub fn power(&self, r: f64) -> CMatrix {
        let tol = self.rank_tol;
        self.eig
            .reassemble(|l| if l > tol { l.powf(r) } else { 0.0 })
    }
}

pub fn psd_sqrt(a: &CMatrix) -> Result<CMatrix> {
    Ok(PsdFactors::new(a)?.sqrt())
}

pub fn pinv_psd(a: &CMatrix) -> Result<CMatrix> {
    Ok(PsdFactors::new(a)?.pinv())
}

pub fn proj_range(a: &CMatrix) -> Result<CMatrix> {
    Ok(PsdFactors::new(a)?.proj())
}
