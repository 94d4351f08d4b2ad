//! The semi-Hilbertian structure induced by a PSD weight A.

use std::ops::Index;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{herm_eig_unchecked, CMatrix, MatrixFile, PsdFactors, C64};

/// Default relative tolerance of a space.
pub const DEFAULT_TOL: f64 = 1e-9;

/// A finite complex vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CVector(Vec<C64>);

impl CVector {
    pub fn new(entries: Vec<C64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidParams("vector must be non-empty".into()));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParams("vector entries must be finite".into()));
        }
        Ok(Self(entries))
    }

    pub fn from_real(entries: &[f64]) -> Self {
        Self(entries.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = vec![C64::new(0.0, 0.0); dim];
        v[k] = C64::new(1.0, 0.0);
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self(self.0.iter().map(|z| z * s).collect())
    }

    pub fn apply(m: &CMatrix, x: &Self) -> Self {
        Self(m.mul_vec(&x.0))
    }

    pub fn random(rng: &mut impl Rng, dim: usize) -> Self {
        Self((0..dim).map(|_| complex_gaussian(rng)).collect())
    }
}

impl Index<usize> for CVector {
    type Output = C64;

    fn index(&self, i: usize) -> &C64 {
        &self.0[i]
    }
}

/// (N(0,1) + i·N(0,1))/√2.
pub fn complex_gaussian(rng: &mut impl Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn random_gaussian_matrix(rng: &mut impl Rng, n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| complex_gaussian(rng))
}

/// A validated PSD weight with its cached factors.
#[derive(Debug, Clone)]
pub struct SemiHilbertSpace {
    dim: usize,
    a: CMatrix,
    sqrt_a: CMatrix,
    pinv_a: CMatrix,
    pinv_sqrt_a: CMatrix,
    proj_a: CMatrix,
    rank: usize,
    tol: f64,
    lambda_max: f64,
}

impl SemiHilbertSpace {
    pub fn new(a: CMatrix, tol: f64) -> Result<Self> {
        let factors = PsdFactors::new(&a)?;
        Self::assemble(a, factors, tol)
    }

    pub fn with_default_tol(a: CMatrix) -> Result<Self> {
        Self::new(a, DEFAULT_TOL)
    }

    /// Builds the space from a trusted spectral decomposition; A itself is
    /// reassembled from it.
    pub fn from_factors(factors: PsdFactors, tol: f64) -> Result<Self> {
        let a = factors.matrix();
        Self::assemble(a, factors, tol)
    }

    fn assemble(a: CMatrix, factors: PsdFactors, tol: f64) -> Result<Self> {
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Error::InvalidParams(format!("tol must be positive, got {tol}")));
        }
        Ok(Self {
            dim: a.rows(),
            sqrt_a: factors.sqrt(),
            pinv_a: factors.pinv(),
            pinv_sqrt_a: factors.pinv_sqrt(),
            proj_a: factors.proj(),
            rank: factors.rank(),
            lambda_max: factors.lambda_max(),
            a,
            tol,
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self::with_default_tol(CMatrix::identity(dim)).expect("identity is PSD")
    }

    pub fn from_file(file: &MatrixFile) -> Result<Self> {
        Self::new(file.to_matrix()?, file.tol.unwrap_or(DEFAULT_TOL))
    }

    pub fn to_file(&self) -> MatrixFile {
        MatrixFile::from_matrix(&self.a).with_tol(self.tol)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn a(&self) -> &CMatrix {
        &self.a
    }

    pub fn sqrt_a(&self) -> &CMatrix {
        &self.sqrt_a
    }

    pub fn pinv_a(&self) -> &CMatrix {
        &self.pinv_a
    }

    pub fn pinv_sqrt_a(&self) -> &CMatrix {
        &self.pinv_sqrt_a
    }

    pub fn proj_a(&self) -> &CMatrix {
        &self.proj_a
    }

    /// I − P_A.
    pub fn kernel_proj(&self) -> CMatrix {
        &CMatrix::identity(self.dim) - &self.proj_a
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn lambda_max(&self) -> f64 {
        self.lambda_max
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank == self.dim
    }

    fn check_dim(&self, x: &CVector) -> Result<()> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.dim(),
            });
        }
        Ok(())
    }

    pub fn check_operator(&self, t: &CMatrix) -> Result<()> {
        let n = t.ensure_square()?;
        if n != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: n,
            });
        }
        Ok(())
    }

    /// ⟨x, y⟩_A = y*·A·x.
    pub fn inner(&self, x: &CVector, y: &CVector) -> Result<C64> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        let ax = self.a.mul_vec(x.as_slice());
        Ok(ax.iter().zip(y.as_slice()).map(|(u, v)| u * v.conj()).sum())
    }

    /// ‖x‖_A = ‖A^{1/2}x‖.
    pub fn norm(&self, x: &CVector) -> Result<f64> {
        self.check_dim(x)?;
        let y = self.sqrt_a.mul_vec(x.as_slice());
        Ok(y.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
    }

    /// Projects onto ran(A) and rescales to unit A-norm; `None` when the
    /// projection has zero A-norm.
    pub fn a_normalize(&self, x: &CVector) -> Result<Option<CVector>> {
        self.check_dim(x)?;
        let px = CVector::apply(&self.proj_a, x);
        let n = self.norm(&px)?;
        if n <= f64::MIN_POSITIVE || !n.is_finite() {
            return Ok(None);
        }
        Ok(Some(px.scale(C64::new(1.0 / n, 0.0))))
    }
}

/// Convenience alias matching the operation name used in the docs.
pub fn make_space(a: CMatrix, tol: f64) -> Result<SemiHilbertSpace> {
    SemiHilbertSpace::new(a, tol)
}

/// A = G*G for complex Gaussian G. With probability `singular_prob` the
/// ⌈dim/3⌉ smallest eigenvalues are set to zero before reassembly.
pub fn random_space(dim: usize, seed: u64, singular_prob: f64) -> Result<SemiHilbertSpace> {
    if dim == 0 {
        return Err(Error::InvalidParams("dim must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&singular_prob) {
        return Err(Error::InvalidParams(format!(
            "singular_prob must lie in [0,1], got {singular_prob}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = random_gaussian_matrix(&mut rng, dim);
    let mut eig = herm_eig_unchecked(&g.adjoint().matmul(&g))?;
    let u: f64 = rng.random();
    if u < singular_prob {
        let k = dim.div_ceil(3);
        for l in eig.eigenvalues.iter_mut().rev().take(k) {
            *l = 0.0;
        }
    }
    SemiHilbertSpace::from_factors(PsdFactors::from_eigen(eig)?, DEFAULT_TOL)
}

/// T = PGP + (I−P)G(I−P) + (I−P)GP, so T* maps ran(A) into itself.
/// At full rank T = G.
pub fn random_operator_in_ba(space: &SemiHilbertSpace, seed: u64) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_operator_in_ba_with(space, &mut rng)
}

pub fn random_operator_in_ba_with(space: &SemiHilbertSpace, rng: &mut impl Rng) -> CMatrix {
    let g = random_gaussian_matrix(rng, space.dim());
    if space.is_full_rank() {
        return g;
    }
    block_lower(space.proj_a(), &space.kernel_proj(), &g)
}

/// T = GP + (I−P)G(I−P): maps ker A into ker A, so T ∈ B_{A^{1/2}}.
pub fn random_operator_in_ba_half(space: &SemiHilbertSpace, rng: &mut impl Rng) -> CMatrix {
    let g = random_gaussian_matrix(rng, space.dim());
    if space.is_full_rank() {
        return g;
    }
    let q = space.kernel_proj();
    &g.matmul(space.proj_a()) + &q.matmul(&g).matmul(&q)
}

pub(crate) fn block_lower(p: &CMatrix, q: &CMatrix, g: &CMatrix) -> CMatrix {
    let gp = g.matmul(p);
    let pgp = p.matmul(&gp);
    let qgp = q.matmul(&gp);
    let qgq = q.matmul(g).matmul(q);
    &(&pgp + &qgq) + &qgp
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::spectral_norm;
    use proptest::prelude::*;

    fn ex_a() -> CMatrix {
        CMatrix::from_real_rows(&[[1.0, -1.0], [-1.0, 2.0]])
    }

    #[test]
    fn make_space_examples() {
        let s = SemiHilbertSpace::identity(2);
        assert_eq!(s.rank(), 2);
        assert!(s.proj_a().max_abs_diff(&CMatrix::identity(2)) < 1e-15);

        let s = make_space(CMatrix::from_diag_real(&[1.0, 0.0]), DEFAULT_TOL).unwrap();
        assert_eq!(s.rank(), 1);
        assert!(s.proj_a().max_abs_diff(&CMatrix::from_diag_real(&[1.0, 0.0])) < 1e-15);

        let s = make_space(ex_a(), DEFAULT_TOL).unwrap();
        assert_eq!(s.rank(), 2);
        let expect = CMatrix::from_real_rows(&[[2.0, 1.0], [1.0, 1.0]]);
        assert!(s.pinv_a().max_abs_diff(&expect) < 1e-12);
    }

    #[test]
    fn make_space_rejects_bad_weights() {
        assert!(matches!(
            make_space(CMatrix::from_diag_real(&[1.0, -1.0]), DEFAULT_TOL),
            Err(Error::NotPsd { .. })
        ));
        assert!(matches!(
            make_space(CMatrix::from_real_rows(&[[1.0, 1.0], [0.0, 1.0]]), DEFAULT_TOL),
            Err(Error::NotHermitian { .. })
        ));
        assert!(matches!(
            make_space(CMatrix::from_real_rows(&[[1.0, 1.0]]), DEFAULT_TOL),
            Err(Error::NotSquare { .. })
        ));
        assert!(make_space(CMatrix::identity(2), 0.0).is_err());
    }

    #[test]
    fn inner_and_norm_examples() {
        let id = SemiHilbertSpace::identity(2);
        let e1 = CVector::basis(2, 0);
        let e2 = CVector::basis(2, 1);
        assert_eq!(id.inner(&e1, &e1).unwrap(), C64::new(1.0, 0.0));

        let s = make_space(ex_a(), DEFAULT_TOL).unwrap();
        assert!((s.inner(&e1, &e2).unwrap() - C64::new(-1.0, 0.0)).norm() < 1e-15);
        assert!((s.norm(&e1).unwrap() - 1.0).abs() < 1e-12);
        assert!((s.norm(&CVector::from_real(&[1.0, 1.0])).unwrap() - 1.0).abs() < 1e-12);

        let k = make_space(CMatrix::from_real_rows(&[[1.0, 1.0], [1.0, 1.0]]), DEFAULT_TOL).unwrap();
        let ker = CVector::from_real(&[1.0, -1.0]);
        assert!(k.inner(&ker, &e2).unwrap().norm() < 1e-15);
        assert!(k.norm(&ker).unwrap() < 1e-12);
        assert!(matches!(
            s.inner(&e1, &CVector::basis(3, 0)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn inner_is_linear_in_first_argument() {
        let s = make_space(ex_a(), DEFAULT_TOL).unwrap();
        let x = CVector::from_real(&[1.0, 2.0]);
        let y = CVector::from_real(&[-1.0, 0.5]);
        let i = C64::new(0.0, 1.0);
        let lhs = s.inner(&x.scale(i), &y).unwrap();
        assert!((lhs - i * s.inner(&x, &y).unwrap()).norm() < 1e-14);
        let rhs = s.inner(&x, &y.scale(i)).unwrap();
        assert!((rhs + i * s.inner(&x, &y).unwrap()).norm() < 1e-14);
    }

    #[test]
    fn random_space_examples() {
        assert_eq!(random_space(2, 7, 0.0).unwrap().rank(), 2);
        assert_eq!(random_space(3, 7, 1.0).unwrap().rank(), 2);
        assert_eq!(random_space(6, 7, 1.0).unwrap().rank(), 4);
        let a = random_space(4, 11, 0.5).unwrap();
        let b = random_space(4, 11, 0.5).unwrap();
        assert_eq!(a.a(), b.a());
    }

    #[test]
    fn block_construction_example() {
        let p = CMatrix::from_diag_real(&[1.0, 0.0]);
        let q = CMatrix::from_diag_real(&[0.0, 1.0]);
        let g = CMatrix::from_real_rows(&[[1.0, 1.0], [1.0, 1.0]]);
        let t = block_lower(&p, &q, &g);
        assert_eq!(t, CMatrix::from_real_rows(&[[1.0, 0.0], [1.0, 1.0]]));
    }

    #[test]
    fn full_rank_operator_is_raw_gaussian() {
        let s = random_space(3, 1, 0.0).unwrap();
        let t = random_operator_in_ba(&s, 5);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        assert_eq!(t, random_gaussian_matrix(&mut rng, 3));
    }

    #[test]
    fn space_invariants_on_random_spaces() {
        for seed in 0..40 {
            let s = random_space(2 + (seed as usize % 5), seed, 0.5).unwrap();
            let scale = s.lambda_max().max(1.0);
            let sq = s.sqrt_a().matmul(s.sqrt_a());
            assert!(spectral_norm(&(&sq - s.a())) <= s.tol() * scale);
            let ap = s.a().matmul(s.pinv_a());
            assert!(spectral_norm(&(&ap - s.proj_a())) <= s.tol());
            let ps = s.sqrt_a().matmul(s.pinv_sqrt_a());
            assert!(spectral_norm(&(&ps - s.proj_a())) <= s.tol());
        }
    }

    fn vec_strategy(dim: usize) -> impl Strategy<Value = CVector> {
        prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), dim)
            .prop_map(|v| CVector::new(v.into_iter().map(|(a, b)| C64::new(a, b)).collect()).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn semi_inner_product_axioms(seed in 0u64..1000, x in vec_strategy(4), y in vec_strategy(4)) {
            let s = random_space(4, seed, 0.5).unwrap();
            let scale = s.lambda_max().max(1.0) * (1.0 + x.norm() * y.norm() + x.norm().powi(2));
            let xy = s.inner(&x, &y).unwrap();
            let yx = s.inner(&y, &x).unwrap();
            prop_assert!((xy - yx.conj()).norm() <= s.tol() * scale);
            let xx = s.inner(&x, &x).unwrap();
            prop_assert!(xx.re >= -s.tol() * scale);
            prop_assert!(xx.im.abs() <= s.tol() * scale);
            let nx = s.norm(&x).unwrap();
            prop_assert!((nx * nx - xx.re).abs() <= s.tol() * scale);
            let ny = s.norm(&y).unwrap();
            prop_assert!(xy.norm() <= nx * ny + s.tol() * scale);
        }

        #[test]
        fn zero_norm_iff_kernel(seed in 0u64..1000, x in vec_strategy(3)) {
            let s = random_space(3, seed, 1.0).unwrap();
            let q = s.kernel_proj();
            let kx = CVector::apply(&q, &x);
            prop_assert!(s.norm(&kx).unwrap() <= s.tol() * kx.norm().max(1.0) * s.lambda_max().max(1.0));
            let px = CVector::apply(s.proj_a(), &x);
            if px.norm() > 1e-6 {
                prop_assert!(s.norm(&px).unwrap() > 0.0);
            }
        }

        #[test]
        fn generated_operators_preserve_range(seed in 0u64..1000, dim in 2usize..7) {
            let s = random_space(dim, seed, 1.0).unwrap();
            let t = random_operator_in_ba(&s, seed ^ 0x5555);
            // (I−P)·T*·A = 0
            let resid = s.kernel_proj().matmul(&t.adjoint()).matmul(s.a());
            let scale = spectral_norm(&t.adjoint().matmul(s.a())).max(1.0);
            prop_assert!(spectral_norm(&resid) <= s.tol() * scale);
        }
    }
}
