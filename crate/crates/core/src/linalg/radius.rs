use std::f64::consts::PI;

use super::eigen::herm_eigvals_unchecked;
use super::matrix::CMatrix;
use crate::error::Result;

/// Uniform angular grid size over [0, π).
pub const GRID_POINTS: usize = 720;
/// Golden-section refinement stops at this bracket width.
pub const REFINE_WIDTH: f64 = 1e-12;
/// Number of grid local maxima that get refined.
pub const REFINE_CANDIDATES: usize = 3;
/// Below this relative skew-Hermitian mass the matrix is treated as Hermitian.
pub const HERMITIAN_SHORTCUT_REL: f64 = 1e-12;

/// √λ_max(M*M).
pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.data().iter().all(|z| z.re == 0.0 && z.im == 0.0) {
        return 0.0;
    }
    let g = m.adjoint().matmul(m);
    let lmax = herm_eigvals_unchecked(&g)
        .map(|v| v[0])
        .unwrap_or_else(|_| g.frobenius_norm());
    lmax.max(0.0).sqrt()
}

/// Largest |eigenvalue| of a Hermitian matrix.
pub fn hermitian_abs_max(h: &CMatrix) -> Result<f64> {
    let ev = herm_eigvals_unchecked(h)?;
    Ok(ev[0].abs().max(ev[ev.len() - 1].abs()))
}

/// Classical numerical radius w(M) = max_θ max|λ|(cos θ·Re M + sin θ·Im M)
/// over θ ∈ [0, π).
pub fn numerical_radius(m: &CMatrix) -> Result<f64> {
    m.ensure_square()?;
    let re = m.hermitian_part();
    let im = m.skew_hermitian_part();
    let total = m.frobenius_norm();
    if total == 0.0 {
        return Ok(0.0);
    }
    if im.frobenius_norm() <= HERMITIAN_SHORTCUT_REL * total {
        return hermitian_abs_max(&re);
    }
    if re.frobenius_norm() <= HERMITIAN_SHORTCUT_REL * total {
        return hermitian_abs_max(&im);
    }

    let profile = AngularProfile { re, im };
    let step = PI / GRID_POINTS as f64;
    let values = (0..GRID_POINTS)
        .map(|i| profile.eval(i as f64 * step))
        .collect::<Result<Vec<f64>>>()?;

    let mut peaks: Vec<usize> = (0..GRID_POINTS)
        .filter(|&i| {
            let prev = values[(i + GRID_POINTS - 1) % GRID_POINTS];
            let next = values[(i + 1) % GRID_POINTS];
            values[i] >= prev && values[i] >= next
        })
        .collect();
    peaks.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    peaks.truncate(REFINE_CANDIDATES);

    let mut best = values.iter().copied().fold(0.0, f64::max);
    for i in peaks {
        let centre = i as f64 * step;
        let refined = golden_max(|t| profile.eval(t), centre - step, centre + step)?;
        best = best.max(refined);
    }
    Ok(best)
}

struct AngularProfile {
    re: CMatrix,
    im: CMatrix,
}

impl AngularProfile {
    fn eval(&self, theta: f64) -> Result<f64> {
        let (s, c) = theta.sin_cos();
        let n = self.re.rows();
        let h = CMatrix::from_fn(n, n, |i, j| self.re[(i, j)] * c + self.im[(i, j)] * s);
        hermitian_abs_max(&h)
    }
}

// Golden-section search for the maximum of a unimodal f on [lo, hi];
// returns the best value seen.
fn golden_max(f: impl Fn(f64) -> Result<f64>, mut lo: f64, mut hi: f64) -> Result<f64> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    let mut best = f1.max(f2);
    while hi - lo > REFINE_WIDTH {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2)?;
            best = best.max(f2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1)?;
            best = best.max(f1);
        }
    }
    Ok(best)
}
