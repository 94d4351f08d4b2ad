//! Operators on a semi-Hilbertian space: A-adjoint, membership tests,
//! A-seminorm, A-numerical radius and A-positive powers.

use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{
    herm_eigvals_unchecked, hermitian_abs_max, numerical_radius, spectral_norm, CMatrix,
    PsdFactors,
};
use crate::space::{CVector, SemiHilbertSpace};

/// A finite value or the sentinel for operators outside B_{A^{1/2}}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Radius {
    Finite(f64),
    Infinite,
}

impl Radius {
    /// The value, with `Infinite` mapped to `f64::INFINITY`.
    pub fn value(self) -> f64 {
        match self {
            Radius::Finite(v) => v,
            Radius::Infinite => f64::INFINITY,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Radius::Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Radius::Finite(v) => Some(v),
            Radius::Infinite => None,
        }
    }
}

impl fmt::Display for Radius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Radius::Finite(v) => write!(f, "{v}"),
            Radius::Infinite => f.write_str("INFINITE"),
        }
    }
}

impl Serialize for Radius {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Radius::Finite(v) => s.serialize_f64(*v),
            Radius::Infinite => s.serialize_str("INFINITE"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadiusMethod {
    Reduction,
    SampleOracle,
    GridOracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadiusResult {
    pub value: Radius,
    pub method: RadiusMethod,
}

impl RadiusResult {
    fn reduction(value: Radius) -> Self {
        Self {
            value,
            method: RadiusMethod::Reduction,
        }
    }
}

fn rel_small(residual: f64, scale: f64, tol: f64) -> bool {
    residual <= tol * scale.max(1.0)
}

/// T ∈ B_A(H): ‖(I − P_A)·T*·A‖₂ ≤ tol·max(1, ‖T*·A‖₂).
pub fn in_b_a(space: &SemiHilbertSpace, t: &CMatrix) -> Result<bool> {
    space.check_operator(t)?;
    if space.is_full_rank() {
        return Ok(true);
    }
    let ta = t.adjoint().matmul(space.a());
    let resid = space.kernel_proj().matmul(&ta);
    Ok(rel_small(spectral_norm(&resid), spectral_norm(&ta), space.tol()))
}

/// T ∈ B_{A^{1/2}}(H): ‖A^{1/2}·T·(I − P_A)‖₂ ≤ tol·max(1, ‖A^{1/2}·T‖₂).
pub fn in_b_a_half(space: &SemiHilbertSpace, t: &CMatrix) -> Result<bool> {
    space.check_operator(t)?;
    if space.is_full_rank() {
        return Ok(true);
    }
    let st = space.sqrt_a().matmul(t);
    let resid = st.matmul(&space.kernel_proj());
    Ok(rel_small(spectral_norm(&resid), spectral_norm(&st), space.tol()))
}

/// T^{♯A} = A†·T*·A.
pub fn a_adjoint(space: &SemiHilbertSpace, t: &CMatrix) -> Result<CMatrix> {
    if !in_b_a(space, t)? {
        return Err(Error::NotInBA);
    }
    Ok(a_adjoint_unchecked(space, t))
}

pub(crate) fn a_adjoint_unchecked(space: &SemiHilbertSpace, t: &CMatrix) -> CMatrix {
    space.pinv_a().matmul(&t.adjoint()).matmul(space.a())
}

/// AT is Hermitian within tolerance.
pub fn is_a_selfadjoint(space: &SemiHilbertSpace, t: &CMatrix) -> Result<bool> {
    space.check_operator(t)?;
    let at = space.a().matmul(t);
    let resid = &at - &at.adjoint();
    Ok(rel_small(spectral_norm(&resid), spectral_norm(&at), space.tol()))
}

/// AT is Hermitian PSD within tolerance.
pub fn is_a_positive(space: &SemiHilbertSpace, t: &CMatrix) -> Result<bool> {
    if !is_a_selfadjoint(space, t)? {
        return Ok(false);
    }
    let h = space.a().matmul(t).hermitian_part();
    let ev = herm_eigvals_unchecked(&h)?;
    let lmin = ev[ev.len() - 1];
    let scale = ev[0].abs().max(lmin.abs());
    Ok(lmin >= -space.tol() * scale.max(1.0))
}

/// Ã = A^{1/2}·T·(A^{1/2})†.
pub fn reduced_matrix(space: &SemiHilbertSpace, t: &CMatrix) -> Result<CMatrix> {
    if !in_b_a_half(space, t)? {
        return Err(Error::NotInBAHalf);
    }
    Ok(reduced_unchecked(space, t))
}

pub(crate) fn reduced_unchecked(space: &SemiHilbertSpace, t: &CMatrix) -> CMatrix {
    space.sqrt_a().matmul(t).matmul(space.pinv_sqrt_a())
}

/// ‖T‖_A, or INFINITE when T ∉ B_{A^{1/2}}.
pub fn a_op_norm(space: &SemiHilbertSpace, t: &CMatrix) -> Result<RadiusResult> {
    if !in_b_a_half(space, t)? {
        return Ok(RadiusResult::reduction(Radius::Infinite));
    }
    let r = reduced_unchecked(space, t);
    Ok(RadiusResult::reduction(Radius::Finite(spectral_norm(&r))))
}

/// w_A(T), or INFINITE when T ∉ B_{A^{1/2}}.
pub fn a_numerical_radius(space: &SemiHilbertSpace, t: &CMatrix) -> Result<RadiusResult> {
    if !in_b_a_half(space, t)? {
        return Ok(RadiusResult::reduction(Radius::Infinite));
    }
    let r = reduced_unchecked(space, t);
    Ok(RadiusResult::reduction(Radius::Finite(numerical_radius(&r)?)))
}

/// Lower-bound oracle: max of |⟨Tx, x⟩_A| over random x in ran(A) scaled to
/// ‖x‖_A = 1.
pub fn oracle_a_numrad_sample(
    space: &SemiHilbertSpace,
    t: &CMatrix,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    if space.rank() == 0 {
        return Err(Error::DegenerateSpace);
    }
    if !in_b_a_half(space, t)? {
        return Err(Error::NotInBAHalf);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let at = space.a().matmul(t);
    let mut best = 0.0_f64;
    let mut drawn = 0;
    while drawn < samples {
        let x = CVector::random(&mut rng, space.dim());
        let Some(u) = space.a_normalize(&x)? else {
            continue;
        };
        drawn += 1;
        let atu = at.mul_vec(u.as_slice());
        let val: crate::C64 = atu.iter().zip(u.as_slice()).map(|(a, b)| a * b.conj()).sum();
        best = best.max(val.norm());
    }
    Ok(best)
}

/// Brute-force angular grid on the reduced matrix with `points` angles over
/// [0, π) and no refinement.
pub fn oracle_a_numrad_grid(space: &SemiHilbertSpace, t: &CMatrix, points: usize) -> Result<f64> {
    if points == 0 {
        return Err(Error::InvalidParams("grid needs at least one point".into()));
    }
    let r = reduced_matrix(space, t)?;
    let re = r.hermitian_part();
    let im = r.skew_hermitian_part();
    let n = r.rows();
    let mut best = 0.0_f64;
    for k in 0..points {
        let theta = std::f64::consts::PI * k as f64 / points as f64;
        let (s, c) = theta.sin_cos();
        let h = CMatrix::from_fn(n, n, |i, j| re[(i, j)] * c + im[(i, j)] * s);
        best = best.max(hermitian_abs_max(&h)?);
    }
    Ok(best)
}

/// W^r for A-positive W ∈ B_{A^{1/2}}, computed as (A^{1/2})†·Ŵ^r·A^{1/2}
/// with Ŵ = A^{1/2}·W·(A^{1/2})†.
pub fn a_positive_power(space: &SemiHilbertSpace, w: &CMatrix, r: f64) -> Result<CMatrix> {
    if !(r.is_finite() && r >= 1.0) {
        return Err(Error::InvalidParams(format!("power r must be ≥ 1, got {r}")));
    }
    if !is_a_positive(space, w)? {
        return Err(Error::NotAPositive);
    }
    if !in_b_a_half(space, w)? {
        return Err(Error::NotSupportedOnRange);
    }
    a_positive_power_unchecked(space, w, r)
}

pub(crate) fn a_positive_power_unchecked(
    space: &SemiHilbertSpace,
    w: &CMatrix,
    r: f64,
) -> Result<CMatrix> {
    let hat = reduced_unchecked(space, w).hermitian_part();
    let powered = reduced_psd_power(&hat, r)?;
    Ok(space.pinv_sqrt_a().matmul(&powered).matmul(space.sqrt_a()))
}

// Ŵ is PSD up to round-off; negative noise is clamped rather than rejected.
fn reduced_psd_power(hat: &CMatrix, r: f64) -> Result<CMatrix> {
    let eig = crate::linalg::herm_eig_unchecked(hat)?;
    let lmax = eig.max_eigenvalue().max(0.0);
    let clamped = crate::linalg::EigenDecomposition {
        eigenvalues: eig.eigenvalues.iter().map(|&l| l.max(0.0)).collect(),
        eigenvectors: eig.eigenvectors,
    };
    if lmax == 0.0 {
        return Ok(CMatrix::zeros(hat.rows(), hat.cols()));
    }
    Ok(PsdFactors::from_eigen(clamped)?.power(r))
}

/// An operator bound to a space, with membership flags computed once and the
/// A-adjoint and reduced matrix cached on first use.
#[derive(Debug)]
pub struct AOperator {
    space: Arc<SemiHilbertSpace>,
    t: CMatrix,
    in_ba: bool,
    in_ba_half: bool,
    adjoint: OnceLock<CMatrix>,
    reduced: OnceLock<CMatrix>,
}

impl AOperator {
    pub fn new(space: Arc<SemiHilbertSpace>, t: CMatrix) -> Result<Self> {
        let in_ba = in_b_a(&space, &t)?;
        let in_ba_half = in_ba || in_b_a_half(&space, &t)?;
        Ok(Self {
            space,
            t,
            in_ba,
            in_ba_half,
            adjoint: OnceLock::new(),
            reduced: OnceLock::new(),
        })
    }

    pub fn space(&self) -> &Arc<SemiHilbertSpace> {
        &self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.t
    }

    pub fn in_ba(&self) -> bool {
        self.in_ba
    }

    pub fn in_ba_half(&self) -> bool {
        self.in_ba_half
    }

    pub fn adjoint(&self) -> Result<&CMatrix> {
        if !self.in_ba {
            return Err(Error::NotInBA);
        }
        Ok(self
            .adjoint
            .get_or_init(|| a_adjoint_unchecked(&self.space, &self.t)))
    }

    pub fn reduced(&self) -> Result<&CMatrix> {
        if !self.in_ba_half {
            return Err(Error::NotInBAHalf);
        }
        Ok(self
            .reduced
            .get_or_init(|| reduced_unchecked(&self.space, &self.t)))
    }

    pub fn op_norm(&self) -> Result<Radius> {
        match self.reduced() {
            Ok(r) => Ok(Radius::Finite(spectral_norm(r))),
            Err(Error::NotInBAHalf) => Ok(Radius::Infinite),
            Err(e) => Err(e),
        }
    }

    pub fn numerical_radius(&self) -> Result<Radius> {
        match self.reduced() {
            Ok(r) => Ok(Radius::Finite(numerical_radius(r)?)),
            Err(Error::NotInBAHalf) => Ok(Radius::Infinite),
            Err(e) => Err(e),
        }
    }

    pub fn is_selfadjoint(&self) -> Result<bool> {
        is_a_selfadjoint(&self.space, &self.t)
    }

    pub fn is_positive(&self) -> Result<bool> {
        is_a_positive(&self.space, &self.t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{make_space, random_operator_in_ba, random_operator_in_ba_half, random_space};
    use crate::C64;
    use proptest::prelude::*;

    fn ex_space() -> SemiHilbertSpace {
        make_space(CMatrix::from_real_rows(&[[1.0, -1.0], [-1.0, 2.0]]), 1e-9).unwrap()
    }

    fn diag_space(d: &[f64]) -> SemiHilbertSpace {
        make_space(CMatrix::from_diag_real(d), 1e-9).unwrap()
    }

    fn fin(r: RadiusResult) -> f64 {
        r.value.finite().expect("finite")
    }

    #[test]
    fn membership_examples() {
        let s = ex_space();
        let any = CMatrix::from_real_rows(&[[3.0, -1.0], [2.0, 7.0]]);
        assert!(in_b_a(&s, &any).unwrap());
        let d = diag_space(&[1.0, 0.0]);
        assert!(in_b_a(&d, &CMatrix::from_real_rows(&[[0.0, 0.0], [1.0, 0.0]])).unwrap());
        assert!(!in_b_a(&d, &CMatrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]])).unwrap());
        assert!(in_b_a_half(&d, &CMatrix::identity(2)).unwrap());
        assert!(matches!(
            in_b_a(&s, &CMatrix::identity(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn ladder_operator_leaves_the_space() {
        let s = diag_space(&[0.0, 1.0, 2.0, 3.0]);
        let mut t = CMatrix::zeros(4, 4);
        for k in 1..4 {
            let v = C64::new((k as f64).sqrt(), 0.0);
            t[(k - 1, k)] = v;
            t[(k, k - 1)] = v;
        }
        assert!(!in_b_a_half(&s, &t).unwrap());
        assert!(!in_b_a(&s, &t).unwrap());
        assert_eq!(a_numerical_radius(&s, &t).unwrap().value, Radius::Infinite);
        assert_eq!(a_op_norm(&s, &t).unwrap().value, Radius::Infinite);
    }

    #[test]
    fn adjoint_examples() {
        let s = ex_space();
        let t = CMatrix::from_real_rows(&[[1.0, 0.0], [1.0, 1.0]]);
        let ts = a_adjoint(&s, &t).unwrap();
        let expect = CMatrix::from_real_rows(&[[-1.0, 4.0], [-1.0, 3.0]]);
        assert!(ts.max_abs_diff(&expect) < 1e-9);

        let id = SemiHilbertSpace::identity(2);
        let c = CMatrix::from_rows(&[
            [C64::new(1.0, 2.0), C64::new(0.0, 1.0)],
            [C64::new(3.0, 0.0), C64::new(-1.0, -1.0)],
        ]);
        assert!(a_adjoint(&id, &c).unwrap().max_abs_diff(&c.adjoint()) < 1e-14);

        let d = diag_space(&[1.0, 0.0]);
        let bad = CMatrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]);
        assert!(matches!(a_adjoint(&d, &bad), Err(Error::NotInBA)));
    }

    #[test]
    fn double_adjoint_is_compression() {
        let s = random_space(4, 3, 1.0).unwrap();
        let t = random_operator_in_ba(&s, 9);
        let ts = a_adjoint(&s, &t).unwrap();
        let tss = a_adjoint(&s, &ts).unwrap();
        let ptp = s.proj_a().matmul(&t).matmul(s.proj_a());
        assert!(spectral_norm(&(&tss - &ptp)) <= 1e-9 * spectral_norm(&t).max(1.0));
    }

    #[test]
    fn selfadjoint_and_positive_examples() {
        let s = ex_space();
        let t = CMatrix::from_real_rows(&[[1.0, 0.0], [1.0, 1.0]]);
        let w = a_adjoint(&s, &t).unwrap().matmul(&t);
        assert!(is_a_positive(&s, &w).unwrap());
        assert!(is_a_selfadjoint(&s, &CMatrix::identity(2)).unwrap());
        let id = SemiHilbertSpace::identity(2);
        let nil = CMatrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]);
        assert!(!is_a_selfadjoint(&id, &nil).unwrap());
        assert!(!is_a_positive(&id, &CMatrix::from_diag_real(&[1.0, -1.0])).unwrap());
    }

    #[test]
    fn reduced_examples() {
        let id = SemiHilbertSpace::identity(2);
        let t = CMatrix::from_real_rows(&[[1.0, 2.0], [3.0, 4.0]]);
        assert!(reduced_matrix(&id, &t).unwrap().max_abs_diff(&t) < 1e-14);
        let s = diag_space(&[4.0, 1.0]);
        let d = CMatrix::from_diag_real(&[2.5, -7.0]);
        assert!(reduced_matrix(&s, &d).unwrap().max_abs_diff(&d) < 1e-14);
        let k = diag_space(&[0.0, 1.0, 2.0, 3.0]);
        let mut bad = CMatrix::zeros(4, 4);
        bad[(1, 0)] = C64::new(1.0, 0.0);
        assert!(matches!(reduced_matrix(&k, &bad), Err(Error::NotInBAHalf)));
    }

    #[test]
    fn norm_and_radius_of_identity() {
        for seed in 0..5 {
            let s = random_space(3, seed, 0.5).unwrap();
            let i3 = CMatrix::identity(3);
            assert!((fin(a_op_norm(&s, &i3).unwrap()) - 1.0).abs() < 1e-9);
            assert!((fin(a_numerical_radius(&s, &i3).unwrap()) - 1.0).abs() < 1e-9);
            let o = oracle_a_numrad_sample(&s, &i3, 50, seed).unwrap();
            assert!((o - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn example_radius_of_t() {
        let s = ex_space();
        let t = CMatrix::from_real_rows(&[[1.0, 0.0], [1.0, 1.0]]);
        let w = fin(a_numerical_radius(&s, &t).unwrap());
        assert!((w - 2.0).abs() < 1e-9);
        let o = oracle_a_numrad_sample(&s, &t, 100_000, 1).unwrap();
        assert!(o >= 1.99 && o <= w + 1e-9);
        let g = oracle_a_numrad_grid(&s, &t, 5000).unwrap();
        assert!((g - w).abs() < 1e-6);
    }

    #[test]
    fn oracle_rejects_rank_zero() {
        let z = make_space(CMatrix::zeros(2, 2), 1e-9).unwrap();
        assert!(matches!(
            oracle_a_numrad_sample(&z, &CMatrix::identity(2), 10, 0),
            Err(Error::DegenerateSpace)
        ));
    }

    #[test]
    fn power_examples() {
        let s = ex_space();
        let t = CMatrix::from_real_rows(&[[1.0, 0.0], [1.0, 1.0]]);
        let w = a_adjoint(&s, &t).unwrap().matmul(&t);
        let p1 = a_positive_power(&s, &w, 1.0).unwrap();
        assert!(p1.max_abs_diff(&w) < 1e-9 * spectral_norm(&w));
        let p2 = a_positive_power(&s, &w, 2.0).unwrap();
        assert!(p2.max_abs_diff(&w.matmul(&w)) < 1e-9 * spectral_norm(&w).powi(2));
        let id = SemiHilbertSpace::identity(2);
        let d = a_positive_power(&id, &CMatrix::from_diag_real(&[4.0, 9.0]), 1.5).unwrap();
        assert!(d.max_abs_diff(&CMatrix::from_diag_real(&[8.0, 27.0])) < 1e-12);
        assert!(matches!(
            a_positive_power(&id, &CMatrix::from_diag_real(&[1.0, -1.0]), 2.0),
            Err(Error::NotAPositive)
        ));
        assert!(a_positive_power(&id, &CMatrix::identity(2), 0.5).is_err());
    }

    #[test]
    fn power_on_singular_space_matches_direct_power() {
        let s = random_space(5, 21, 1.0).unwrap();
        let t = random_operator_in_ba(&s, 4);
        let ts = a_adjoint(&s, &t).unwrap();
        let w = ts.matmul(&t);
        let p3 = a_positive_power(&s, &w, 3.0).unwrap();
        let direct = w.pow(3);
        let scale = spectral_norm(&direct).max(1.0);
        assert!(spectral_norm(&(&p3 - &direct)) <= 1e-8 * scale);
    }

    #[test]
    fn aoperator_caches() {
        let s = Arc::new(ex_space());
        let op = AOperator::new(s.clone(), CMatrix::from_real_rows(&[[1.0, 0.0], [1.0, 1.0]])).unwrap();
        assert!(op.in_ba() && op.in_ba_half());
        let a1 = op.adjoint().unwrap() as *const CMatrix;
        let a2 = op.adjoint().unwrap() as *const CMatrix;
        assert_eq!(a1, a2);
        assert!((op.numerical_radius().unwrap().value() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn radius_serializes_sentinel() {
        assert_eq!(serde_json::to_string(&Radius::Infinite).unwrap(), "\"INFINITE\"");
        assert_eq!(serde_json::to_string(&Radius::Finite(1.5)).unwrap(), "1.5");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn adjoint_identities(seed in 0u64..10_000, dim in 2usize..6) {
            let s = random_space(dim, seed, 0.5).unwrap();
            let t = random_operator_in_ba(&s, seed.wrapping_mul(3) + 1);
            let u = random_operator_in_ba(&s, seed.wrapping_mul(3) + 2);
            let ts = a_adjoint(&s, &t).unwrap();
            let scale = spectral_norm(&t.adjoint().matmul(s.a())).max(1.0);
            // A·T♯ = T*·A
            let lhs = s.a().matmul(&ts);
            let rhs = t.adjoint().matmul(s.a());
            prop_assert!(spectral_norm(&(&lhs - &rhs)) <= 1e-9 * scale);
            // ‖T‖_A = ‖T♯‖_A, ‖T♯T‖_A = ‖TT♯‖_A = ‖T‖_A²
            let n = fin(a_op_norm(&s, &t).unwrap());
            let ns = fin(a_op_norm(&s, &ts).unwrap());
            prop_assert!((n - ns).abs() <= 1e-8 * n.max(1.0));
            let n1 = fin(a_op_norm(&s, &ts.matmul(&t)).unwrap());
            let n2 = fin(a_op_norm(&s, &t.matmul(&ts)).unwrap());
            prop_assert!((n1 - n * n).abs() <= 1e-8 * (n * n).max(1.0));
            prop_assert!((n2 - n * n).abs() <= 1e-8 * (n * n).max(1.0));
            // (TU)♯ = U♯T♯
            let tu = a_adjoint(&s, &t.matmul(&u)).unwrap();
            let us_ts = a_adjoint(&s, &u).unwrap().matmul(&ts);
            let sc = spectral_norm(&tu).max(1.0);
            prop_assert!(spectral_norm(&(&tu - &us_ts)) <= 1e-8 * sc);
        }

        #[test]
        fn seminorm_and_radius_inequalities(seed in 0u64..10_000, dim in 2usize..6) {
            let s = random_space(dim, seed, 0.5).unwrap();
            let t = random_operator_in_ba(&s, seed + 17);
            let u = random_operator_in_ba(&s, seed + 18);
            let nt = fin(a_op_norm(&s, &t).unwrap());
            let nu = fin(a_op_norm(&s, &u).unwrap());
            let w = fin(a_numerical_radius(&s, &t).unwrap());
            let tol = 1e-9 * nt.max(1.0);
            prop_assert!(0.5 * nt - tol <= w && w <= nt + tol);
            for k in [2u32, 3] {
                let wk = fin(a_numerical_radius(&s, &t.pow(k)).unwrap());
                prop_assert!(wk <= w.powi(k as i32) * (1.0 + 1e-9) + 1e-9);
            }
            let ntu = fin(a_op_norm(&s, &t.matmul(&u)).unwrap());
            prop_assert!(ntu <= nt * nu * (1.0 + 1e-9) + 1e-9);
            let nsum = fin(a_op_norm(&s, &(&t + &u)).unwrap());
            prop_assert!(nsum <= (nt + nu) * (1.0 + 1e-9) + 1e-9);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = CVector::random(&mut rng, dim);
            let tx = CVector::apply(&t, &x);
            prop_assert!(s.norm(&tx).unwrap() <= nt * s.norm(&x).unwrap() * (1.0 + 1e-9) + 1e-9);
        }

        #[test]
        fn selfadjoint_radius_equals_norm(seed in 0u64..10_000, dim in 2usize..6) {
            let s = random_space(dim, seed, 0.5).unwrap();
            let t = random_operator_in_ba(&s, seed + 5);
            let h = &t + &a_adjoint(&s, &t).unwrap();
            prop_assert!(is_a_selfadjoint(&s, &h).unwrap());
            let w = fin(a_numerical_radius(&s, &h).unwrap());
            let n = fin(a_op_norm(&s, &h).unwrap());
            prop_assert!((w - n).abs() <= 1e-9 * n.max(1.0));
        }

        #[test]
        fn reduction_residual(seed in 0u64..10_000, dim in 2usize..6) {
            let s = random_space(dim, seed, 1.0).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let t = random_operator_in_ba_half(&s, &mut rng);
            let r = reduced_matrix(&s, &t).unwrap();
            let lhs = r.matmul(s.sqrt_a());
            let rhs = s.sqrt_a().matmul(&t);
            prop_assert!(spectral_norm(&(&lhs - &rhs)) <= 1e-9 * spectral_norm(&rhs).max(1.0));
        }
    }
}
