//! Application drivers: a Sturm-Liouville discretization, a reaction-diffusion
//! linearization, a truncated Fock space and a thermal two-spin system. Also
//! the worked 2×2 examples with their claimed values.

use std::f64::consts::PI;
use std::io::Write;

use serde::Serialize;

use crate::aops::{a_adjoint, a_numerical_radius, in_b_a, in_b_a_half, Radius};
use crate::bounds::{BoundId, BoundParams, BoundReport, PairEvaluator, SingleEvaluator};
use crate::error::{Error, Result};
use crate::linalg::{herm_eig, herm_eigvals, numerical_radius, spectral_norm, CMatrix, C64};
use crate::space::{CVector, SemiHilbertSpace, DEFAULT_TOL};

/// A claimed value printed next to the computed one. Claims never fail a run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimRow {
    pub quantity: String,
    /// "eq" (|computed − claimed| ≤ tol) or "le" (computed ≤ claimed).
    pub relation: &'static str,
    pub claimed: f64,
    pub computed: f64,
    pub tol: f64,
    pub discrepancy: bool,
}

impl ClaimRow {
    pub fn eq(quantity: impl Into<String>, claimed: f64, computed: f64, tol: f64) -> Self {
        Self {
            quantity: quantity.into(),
            relation: "eq",
            claimed,
            computed,
            tol,
            discrepancy: !((computed - claimed).abs() <= tol),
        }
    }

    pub fn le(quantity: impl Into<String>, claimed: f64, computed: f64) -> Self {
        Self {
            quantity: quantity.into(),
            relation: "le",
            claimed,
            computed,
            tol: 0.0,
            discrepancy: !(computed <= claimed),
        }
    }
}

// ---------------------------------------------------------------- Sturm

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SturmConfig {
    pub n: usize,
    /// p at the half-grid points x_{j+1/2}, j = 0..N (length N+1).
    pub p: Vec<f64>,
    /// q at the interior points (length N).
    pub q: Vec<f64>,
    /// w at the interior points (length N).
    pub w: Vec<f64>,
}

impl SturmConfig {
    /// p ≡ 1, q ≡ 0, w ≡ 1.
    pub fn constant(n: usize) -> Self {
        Self {
            n,
            p: vec![1.0; n + 1],
            q: vec![0.0; n],
            w: vec![1.0; n],
        }
    }

    pub fn h(&self) -> f64 {
        1.0 / (self.n as f64 + 1.0)
    }

    pub fn is_constant(&self) -> bool {
        self.p.iter().all(|&v| v == 1.0) && self.q.iter().all(|&v| v == 0.0) && self.w.iter().all(|&v| v == 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if n == 0 {
            return Err(Error::InvalidConfig("N must be at least 1".into()));
        }
        if self.p.len() != n + 1 || self.q.len() != n || self.w.len() != n {
            return Err(Error::InvalidConfig(format!(
                "expected |p| = {}, |q| = |w| = {n}; got {}, {}, {}",
                n + 1,
                self.p.len(),
                self.q.len(),
                self.w.len()
            )));
        }
        if self.p.iter().any(|&v| !(v.is_finite() && v > 0.0)) {
            return Err(Error::InvalidConfig("p must be positive".into()));
        }
        if self.w.iter().any(|&v| !(v.is_finite() && v > 0.0)) {
            return Err(Error::InvalidConfig("w must be positive".into()));
        }
        if self.q.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig("q must be finite".into()));
        }
        Ok(())
    }
}

/// (T_h, A_h) for −(p u′)′ + q u with Dirichlet ends, conservative scheme.
pub fn sturm_matrices(cfg: &SturmConfig) -> Result<(CMatrix, CMatrix)> {
    cfg.validate()?;
    let n = cfg.n;
    let inv_h2 = 1.0 / (cfg.h() * cfg.h());
    let mut t = CMatrix::zeros(n, n);
    for j in 0..n {
        t[(j, j)] = C64::new((cfg.p[j] + cfg.p[j + 1]) * inv_h2 + cfg.q[j], 0.0);
        if j + 1 < n {
            let off = C64::new(-cfg.p[j + 1] * inv_h2, 0.0);
            t[(j, j + 1)] = off;
            t[(j + 1, j)] = off;
        }
    }
    Ok((t, CMatrix::from_diag_real(&cfg.w)))
}

/// The closed form 2h⁻²(1 − cos πh) asserted for the constant case.
pub fn sturm_exact_radius(n: usize) -> f64 {
    let h = 1.0 / (n as f64 + 1.0);
    2.0 / (h * h) * (1.0 - (PI * h).cos())
}

/// Largest eigenvalue of the constant-coefficient T_h, 2h⁻²(1 + cos πh).
/// The closed form above is the smallest one; they agree only at N = 1.
pub fn sturm_largest_eigenvalue(n: usize) -> f64 {
    let h = 1.0 / (n as f64 + 1.0);
    2.0 / (h * h) * (1.0 + (PI * h).cos())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SturmReport {
    pub n: usize,
    pub h: f64,
    pub constant_coefficients: bool,
    /// w_A(T_h).
    pub computed: f64,
    /// max |λ(T_h)|.
    pub spectral_radius: f64,
    /// Closed form, constant case only.
    pub exact: Option<f64>,
    pub rel_err: Option<f64>,
    /// 2h⁻²(1 + cos πh), constant case only.
    pub largest_eigenvalue: Option<f64>,
    pub rel_err_largest: Option<f64>,
    pub bounds: Vec<BoundReport>,
}

pub fn sturm_report(cfg: &SturmConfig) -> Result<SturmReport> {
    let (t, a) = sturm_matrices(cfg)?;
    let space = SemiHilbertSpace::new(a, DEFAULT_TOL)?;
    let mut ev = SingleEvaluator::new(&space, &t)?;
    let computed = ev.w;
    let spectral_radius = herm_eigvals(&t)?.iter().fold(0.0_f64, |m, l| m.max(l.abs()));
    let constant = cfg.is_constant();
    let rel = |x: f64| (computed - x).abs() / x.abs();
    let exact = constant.then(|| sturm_exact_radius(cfg.n));
    let largest = constant.then(|| sturm_largest_eigenvalue(cfg.n));
    let bounds = vec![
        ev.eval(BoundId::Thm31, BoundParams::new(0.5, 1.0, 1.0, 2)?)?,
        ev.eval(BoundId::In6, BoundParams::default())?,
    ];
    Ok(SturmReport {
        n: cfg.n,
        h: cfg.h(),
        constant_coefficients: constant,
        computed,
        spectral_radius,
        exact,
        rel_err: exact.map(rel),
        largest_eigenvalue: largest,
        rel_err_largest: largest.map(rel),
        bounds,
    })
}

pub const STURM_CSV_HEADER: &str = "N,h,computed,exact,rel_err";

pub fn write_sturm_csv(mut out: impl Write, reports: &[SturmReport]) -> Result<()> {
    writeln!(out, "{STURM_CSV_HEADER}")?;
    for r in reports {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        writeln!(out, "{},{},{},{},{}", r.n, r.h, r.computed, opt(r.exact), opt(r.rel_err))?;
    }
    Ok(())
}

// ---------------------------------------------------- reaction-diffusion

/// (1/h²)·tridiag(1, −2, 1) on N interior points, h = 1/(N+1).
pub fn discrete_laplacian(n: usize) -> CMatrix {
    let h = 1.0 / (n as f64 + 1.0);
    let s = 1.0 / (h * h);
    CMatrix::from_fn(n, n, |i, j| {
        if i == j {
            C64::new(-2.0 * s, 0.0)
        } else if i.abs_diff(j) == 1 {
            C64::new(s, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RdiffReport {
    pub n: usize,
    /// w_A(Δ_h + diag f′).
    pub lhs: f64,
    /// w_A(Δ_h).
    pub w_laplacian: f64,
    /// max_j |f′_j|.
    pub sup_fprime: f64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
}

/// Checks w_A(Δ_h + diag f′) ≤ w_A(Δ_h) + max|f′| with A = diag(e^{−V}).
pub fn reaction_diffusion_check(n: usize, v: &[f64], fprime: &[f64]) -> Result<RdiffReport> {
    if n == 0 {
        return Err(Error::InvalidConfig("N must be at least 1".into()));
    }
    if v.len() != n || fprime.len() != n {
        return Err(Error::InvalidConfig(format!(
            "V and f' need {n} samples, got {} and {}",
            v.len(),
            fprime.len()
        )));
    }
    if v.iter().chain(fprime).any(|x| !x.is_finite()) {
        return Err(Error::InvalidConfig("samples must be finite".into()));
    }
    let weights: Vec<f64> = v.iter().map(|x| (-x).exp()).collect();
    let space = SemiHilbertSpace::new(CMatrix::from_diag_real(&weights), DEFAULT_TOL)?;
    let lap = discrete_laplacian(n);
    let t = &lap + &CMatrix::from_diag_real(fprime);
    let lhs = a_numerical_radius(&space, &t)?.value.value();
    let w_laplacian = a_numerical_radius(&space, &lap)?.value.value();
    let sup_fprime = fprime.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let rhs = w_laplacian + sup_fprime;
    Ok(RdiffReport {
        n,
        lhs,
        w_laplacian,
        sup_fprime,
        rhs,
        slack: rhs - lhs,
        holds: crate::report::holds_within(lhs, rhs, crate::report::BOUND_HOLDS_REL_TOL),
    })
}

// ------------------------------------------------------------------ Fock

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FockConfig {
    pub nmax: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockOperators {
    pub a: CMatrix,
    pub adag: CMatrix,
    pub number: CMatrix,
}

/// Ladder operators on span{|0⟩, …, |nmax⟩}.
pub fn fock_operators(cfg: FockConfig) -> Result<FockOperators> {
    if cfg.nmax < 2 {
        return Err(Error::InvalidConfig(format!("nmax must be at least 2, got {}", cfg.nmax)));
    }
    let d = cfg.nmax + 1;
    let a = CMatrix::from_fn(d, d, |i, j| {
        if j == i + 1 {
            C64::new((j as f64).sqrt(), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let adag = a.adjoint();
    let number = adag.matmul(&a);
    Ok(FockOperators { a, adag, number })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FockReport {
    pub nmax: usize,
    pub in_b_a: bool,
    pub in_b_a_half: bool,
    pub numerical_radius: Radius,
    /// Largest |[a, a†] − I| entry away from (nmax, nmax).
    pub commutator_defect_elsewhere: f64,
    /// [a, a†] at (nmax, nmax).
    pub commutator_last_entry: f64,
    /// ⟨N(a + a†)|1⟩, |1⟩⟩.
    pub pairing: [f64; 2],
    pub claims: Vec<ClaimRow>,
}

/// A = N (singular), T = a + a†.
pub fn fock_report(cfg: FockConfig) -> Result<FockReport> {
    let ops = fock_operators(cfg)?;
    let d = cfg.nmax + 1;
    let space = SemiHilbertSpace::new(ops.number.clone(), DEFAULT_TOL)?;
    let t = &ops.a + &ops.adag;
    let comm = &ops.a.matmul(&ops.adag) - &ops.adag.matmul(&ops.a);
    let mut defect = 0.0_f64;
    for i in 0..d {
        for j in 0..d {
            if i == d - 1 && j == d - 1 {
                continue;
            }
            let id = if i == j { 1.0 } else { 0.0 };
            defect = defect.max((comm[(i, j)] - C64::new(id, 0.0)).norm());
        }
    }
    let one = CVector::basis(d, 1);
    let pairing = {
        let nt = ops.number.matmul(&t);
        let v = CVector::apply(&nt, &one);
        v[1] * one[1].conj()
    };
    let claims = vec![ClaimRow::eq("<N(a+a^dag)|1>, |1>>", 2.0, pairing.norm(), 1e-9)];
    Ok(FockReport {
        nmax: cfg.nmax,
        in_b_a: in_b_a(&space, &t)?,
        in_b_a_half: in_b_a_half(&space, &t)?,
        numerical_radius: a_numerical_radius(&space, &t)?.value,
        commutator_defect_elsewhere: defect,
        commutator_last_entry: comm[(d - 1, d - 1)].re,
        pairing: [pairing.re, pairing.im],
        claims,
    })
}

// ------------------------------------------------------------------ spin

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpinConfig {
    pub j: f64,
    pub b: f64,
    pub beta: f64,
}

pub fn pauli() -> [CMatrix; 3] {
    let o = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    [
        CMatrix::from_rows(&[[o, one], [one, o]]),
        CMatrix::from_rows(&[[o, -i], [i, o]]),
        CMatrix::from_rows(&[[one, o], [o, -one]]),
    ]
}

/// J(σx⊗σx + σy⊗σy) + B(σz⊗I + I⊗σz).
pub fn spin_hamiltonian(cfg: SpinConfig) -> CMatrix {
    let [sx, sy, sz] = pauli();
    let id = CMatrix::identity(2);
    let xy = &sx.kron(&sx) + &sy.kron(&sy);
    let z = &sz.kron(&id) + &id.kron(&sz);
    &xy.scale(cfg.j) + &z.scale(cfg.b)
}

/// e^{−βH}/tr(e^{−βH}); β = 0 gives I/n exactly.
pub fn thermal_state(h: &CMatrix, beta: f64) -> Result<CMatrix> {
    let n = h.ensure_square()?;
    if !(beta.is_finite() && beta >= 0.0) {
        return Err(Error::InvalidParams(format!("beta must be ≥ 0, got {beta}")));
    }
    if beta == 0.0 {
        return Ok(CMatrix::identity(n).scale(1.0 / n as f64));
    }
    let eig = herm_eig(h)?;
    let lmin = eig.min_eigenvalue();
    let weights: Vec<f64> = eig.eigenvalues.iter().map(|&l| (-beta * (l - lmin)).exp()).collect();
    let z: f64 = weights.iter().sum();
    Ok(eig.reassemble(|l| (-beta * (l - lmin)).exp() / z))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpinReport {
    pub config: SpinConfig,
    pub rho_trace: f64,
    /// w_ρ(S) for S = σx ⊗ I.
    pub w_s: f64,
    /// ‖S♯S + SS♯‖_ρ.
    pub n_sum: f64,
    /// w_ρ(S²).
    pub w_s2: f64,
    pub thm31: BoundReport,
    pub thm31_rhs_quarter: f64,
    /// The claims refer to B = 0 and β → 0.
    pub claims_apply: bool,
    pub claims: Vec<ClaimRow>,
}

pub fn spin_report(cfg: SpinConfig) -> Result<SpinReport> {
    if !cfg.j.is_finite() || !cfg.b.is_finite() {
        return Err(Error::InvalidConfig("J and B must be finite".into()));
    }
    let rho = thermal_state(&spin_hamiltonian(cfg), cfg.beta)
        .map_err(|e| Error::InvalidConfig(e.to_string()))?;
    let space = SemiHilbertSpace::new(rho.clone(), DEFAULT_TOL)?;
    let [sx, ..] = pauli();
    let s = sx.kron(&CMatrix::identity(2));
    let mut ev = SingleEvaluator::new(&space, &s)?;
    let thm31 = ev.eval(BoundId::Thm31, BoundParams::new(0.5, 1.0, 1.0, 2)?)?;
    let q = thm31.rhs.powf(0.25);
    let claims = vec![
        ClaimRow::eq("||S#S + SS#||_rho", 0.5, ev.n_sum, 1e-9),
        ClaimRow::eq("w_rho(S^2)", 0.25, ev.w_sq, 1e-9),
        ClaimRow::eq("THM31 rhs", 0.0288, thm31.rhs, 5e-5),
        ClaimRow::le("w_rho(S)", 0.41, ev.w),
    ];
    Ok(SpinReport {
        config: cfg,
        rho_trace: rho.trace().re,
        w_s: ev.w,
        n_sum: ev.n_sum,
        w_s2: ev.w_sq,
        thm31,
        thm31_rhs_quarter: q,
        claims_apply: cfg.b == 0.0 && cfg.beta == 0.0,
        claims,
    })
}

// ------------------------------------------------------ worked examples

/// One row of the worked-example table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExampleRow {
    pub example: &'static str,
    pub quantity: String,
    /// None for pure inequality rows.
    pub claimed: Option<f64>,
    pub tol: Option<f64>,
    /// For inequality rows this is rhs − lhs.
    pub computed: f64,
    /// The same quantity over the classical unit sphere with AX in place of X.
    pub classical: Option<f64>,
    pub pass: bool,
}

impl ExampleRow {
    fn approx(example: &'static str, q: &str, claimed: f64, tol: f64, computed: f64, classical: Option<f64>) -> Self {
        Self {
            example,
            quantity: q.to_string(),
            claimed: Some(claimed),
            tol: Some(tol),
            computed,
            classical,
            pass: (computed - claimed).abs() <= tol,
        }
    }

    fn check(example: &'static str, q: &str, slack: f64, strict: bool) -> Self {
        Self {
            example,
            quantity: q.to_string(),
            claimed: None,
            tol: None,
            computed: slack,
            classical: None,
            pass: if strict { slack > 0.0 } else { slack >= 0.0 },
        }
    }
}

pub fn example_weight() -> CMatrix {
    CMatrix::from_real_rows(&[[1.0, -1.0], [-1.0, 2.0]])
}

// ‖AX‖₂ and w(AX): the values obtained by taking the supremum over the
// classical unit sphere instead of the A-unit sphere.
fn classical_norm(a: &CMatrix, x: &CMatrix) -> f64 {
    spectral_norm(&a.matmul(x))
}

fn classical_w(a: &CMatrix, x: &CMatrix) -> Result<f64> {
    numerical_radius(&a.matmul(x))
}

pub const EXAMPLE_SINGLE: &str = "single operator";
pub const EXAMPLE_POWER: &str = "r-power refinement";
pub const EXAMPLE_PAIR: &str = "operator pair";

/// Claimed-vs-computed table for the 2×2 worked examples.
pub fn worked_example_rows() -> Result<Vec<ExampleRow>> {
    let a = example_weight();
    let space = SemiHilbertSpace::new(a.clone(), DEFAULT_TOL)?;
    let lower = CMatrix::from_real_rows(&[[1.0, 0.0], [1.0, 1.0]]);
    let upper = CMatrix::from_real_rows(&[[1.0, 1.0], [0.0, 1.0]]);
    let mut rows = Vec::new();

    // Single operator T = lower.
    let t = &lower;
    let ts = a_adjoint(&space, t)?;
    let expected_ts = CMatrix::from_real_rows(&[[-1.0, 4.0], [-1.0, 3.0]]);
    let mut ev = SingleEvaluator::new(&space, t)?;
    let sum = &ts.matmul(t) + &t.matmul(&ts);
    let t2 = t.matmul(t);
    let n_c = classical_norm(&a, &sum);
    let w_c = classical_w(&a, t)?;
    let w2_c = classical_w(&a, &t2)?;
    let p31 = BoundParams::new(0.5, 1.0, 1.0, 2)?;
    let thm31 = ev.eval(BoundId::Thm31, p31)?;
    let in6 = ev.eval(BoundId::In6, p31)?;
    let thm31_c = p31.gamma1() / 16.0 * n_c * n_c + p31.gamma2() / 8.0 * n_c * w2_c;
    let in6_c = 3.0 / 16.0 * n_c * n_c + 0.125 * n_c * w2_c;
    let ex = EXAMPLE_SINGLE;
    rows.push(ExampleRow::approx(ex, "max|T# - [[-1,4],[-1,3]]|", 0.0, 1e-9, ts.max_abs_diff(&expected_ts), None));
    rows.push(ExampleRow::approx(ex, "||T#T + TT#||_A", 12.385, 0.01, ev.n_sum, Some(n_c)));
    rows.push(ExampleRow::approx(ex, "w_A(T)", 2.0, 1e-6, ev.w, Some(w_c)));
    rows.push(ExampleRow::approx(ex, "w_A(T^2)", 2.3, 0.05, ev.w_sq, Some(w2_c)));
    rows.push(ExampleRow::approx(ex, "THM31 rhs^(1/4)", 2.31, 0.02, thm31.rhs.powf(0.25), Some(thm31_c.powf(0.25))));
    rows.push(ExampleRow::approx(ex, "IN6 rhs^(1/4)", 2.39, 0.02, in6.rhs.powf(0.25), Some(in6_c.powf(0.25))));
    rows.push(ExampleRow::check(ex, "w_A(T) <= THM31 rhs^(1/4)", thm31.rhs.powf(0.25) - ev.w, false));

    // r-power refinement on the same T.
    let thm32 = ev.eval(BoundId::Thm32, p31)?;
    let quarter_n2 = 0.25 * ev.n_sum * ev.n_sum;
    let thm32_c = p31.delta1() / 4.0 * n_c * n_c + p31.delta2() * w2_c * w2_c;
    let ex = EXAMPLE_POWER;
    rows.push(ExampleRow::approx(ex, "THM32 rhs (r=1)", 34.21, 0.05, thm32.rhs, Some(thm32_c)));
    rows.push(ExampleRow::approx(ex, "N^2/4", 38.34, 0.05, quarter_n2, Some(0.25 * n_c * n_c)));
    rows.push(ExampleRow::approx(ex, "THM32 rhs^(1/4)", 2.41, 0.02, thm32.rhs.powf(0.25), Some(thm32_c.powf(0.25))));
    rows.push(ExampleRow::check(ex, "THM32 rhs < N^2/4", quarter_n2 - thm32.rhs, true));

    // Pair T = upper, S = lower.
    let (t, s) = (&upper, &lower);
    let mut pe = PairEvaluator::new(&space, t, s)?;
    let tst = a_adjoint(&space, t)?.matmul(t);
    let sss = a_adjoint(&space, s)?.matmul(s);
    let sst = a_adjoint(&space, s)?.matmul(t);
    let thm41 = pe.eval(BoundId::Thm41, BoundParams::default())?;
    let thm42 = pe.eval(BoundId::Thm42, p31)?;
    let p1 = pe.p_r(1.0)?;
    let sq = |m: &CMatrix| m.matmul(m);
    let ex = EXAMPLE_PAIR;
    rows.push(ExampleRow::approx(ex, "||T||_A", 2.618, 0.005, pe.norm_t, Some(classical_norm(&a, t))));
    rows.push(ExampleRow::approx(ex, "||S||_A", 2.414, 0.005, pe.norm_s, Some(classical_norm(&a, s))));
    rows.push(ExampleRow::approx(ex, "||T+S||_A^2", 10.10, 0.02, pe.norm_sum.powi(2), Some(classical_norm(&a, &(t + s)).powi(2))));
    rows.push(ExampleRow::approx(ex, "||T#T + S#S||_A", 3.618, 0.005, pe.n_plus, Some(classical_norm(&a, &(&tst + &sss)))));
    rows.push(ExampleRow::approx(ex, "||T#T - S#S||_A", 1.618, 0.005, pe.n_minus, Some(classical_norm(&a, &(&tst - &sss)))));
    rows.push(ExampleRow::approx(ex, "w_A(S#T)", 4.405, 0.01, pe.w_st, Some(classical_w(&a, &sst)?)));
    rows.push(ExampleRow::approx(ex, "THM41 rhs^(1/2)", 4.212, 0.01, thm41.rhs.sqrt(), None));
    rows.push(ExampleRow::check(ex, "THM41 rhs^(1/2) < 5.032", 5.032 - thm41.rhs.sqrt(), true));
    rows.push(ExampleRow::approx(ex, "||(T#T)^2 + (S#S)^2||_A", 17.24, 0.02, p1, Some(classical_norm(&a, &(&sq(&tst) + &sq(&sss))))));
    rows.push(ExampleRow::approx(ex, "THM42 rhs^(1/2) (alpha=0.5)", 4.37, 0.02, thm42.rhs.sqrt(), None));
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sturm_matrix_examples() {
        let (t, a) = sturm_matrices(&SturmConfig::constant(1)).unwrap();
        assert_eq!(t[(0, 0)].re, 8.0);
        assert_eq!(a, CMatrix::identity(1));
        let (t, _) = sturm_matrices(&SturmConfig::constant(2)).unwrap();
        let expect = CMatrix::from_real_rows(&[[18.0, -9.0], [-9.0, 18.0]]);
        assert!(t.max_abs_diff(&expect) < 1e-12);
        assert!(sturm_matrices(&SturmConfig { w: vec![1.0, -1.0], ..SturmConfig::constant(2) }).is_err());
    }

    #[test]
    fn sturm_closed_forms() {
        assert!((sturm_exact_radius(1) - 8.0).abs() < 1e-12);
        assert!((sturm_exact_radius(3) - 32.0 * (1.0 - (PI / 4.0).cos())).abs() < 1e-12);
        assert!((sturm_exact_radius(10_000) - PI * PI).abs() < 1e-6);
    }

    #[test]
    fn sturm_radius_is_largest_eigenvalue() {
        for n in [1, 3, 7, 15] {
            let r = sturm_report(&SturmConfig::constant(n)).unwrap();
            assert!((r.computed - r.spectral_radius).abs() <= 1e-9 * r.spectral_radius);
            assert!(r.rel_err_largest.unwrap() < 1e-10, "{r:?}");
            assert!(r.bounds.iter().all(|b| b.holds));
        }
        let r = sturm_report(&SturmConfig::constant(1)).unwrap();
        assert!(r.rel_err.unwrap() < 1e-12);
    }

    #[test]
    fn sturm_variable_coefficients_have_no_exact_value() {
        let cfg = SturmConfig {
            n: 4,
            p: vec![1.0, 1.5, 2.0, 1.5, 1.0],
            q: vec![0.1, 0.2, 0.3, 0.4],
            w: vec![1.0, 2.0, 1.0, 0.5],
        };
        let r = sturm_report(&cfg).unwrap();
        assert!(r.exact.is_none() && r.rel_err.is_none());
        assert!(r.bounds.iter().all(|b| b.holds));
    }

    #[test]
    fn rdiff_cases() {
        let r = reaction_diffusion_check(5, &[0.0; 5], &[0.0; 5]).unwrap();
        assert!((r.lhs - r.w_laplacian).abs() < 1e-9 * r.lhs);
        // Δ_h is negative definite, so a nonpositive shift adds exactly |c|.
        let r = reaction_diffusion_check(5, &[0.0; 5], &[-2.0; 5]).unwrap();
        assert!((r.lhs - r.rhs).abs() < 1e-9 * r.rhs);
        let r = reaction_diffusion_check(5, &[0.0; 5], &[2.0; 5]).unwrap();
        assert!(r.holds && r.slack > 1.0);
        assert!(reaction_diffusion_check(3, &[0.0; 2], &[0.0; 3]).is_err());
    }

    #[test]
    fn fock_ladder() {
        let ops = fock_operators(FockConfig { nmax: 2 }).unwrap();
        let s2 = 2f64.sqrt();
        let expect = CMatrix::from_real_rows(&[[0.0, 1.0, 0.0], [0.0, 0.0, s2], [0.0, 0.0, 0.0]]);
        assert!(ops.a.max_abs_diff(&expect) < 1e-15);
        assert!(ops.number.max_abs_diff(&CMatrix::from_diag_real(&[0.0, 1.0, 2.0])) < 1e-15);
        assert!(fock_operators(FockConfig { nmax: 1 }).is_err());
        let rep = fock_report(FockConfig { nmax: 2 }).unwrap();
        assert!((rep.commutator_last_entry + 2.0).abs() < 1e-12);
        assert!(rep.commutator_defect_elsewhere < 1e-12);
    }

    #[test]
    fn fock_membership_and_pairing() {
        let rep = fock_report(FockConfig { nmax: 4 }).unwrap();
        assert!(!rep.in_b_a_half);
        assert_eq!(rep.numerical_radius, Radius::Infinite);
        assert!(rep.pairing[0].abs() < 1e-12 && rep.pairing[1].abs() < 1e-12);
        assert!(rep.claims[0].discrepancy);
    }

    #[test]
    fn thermal_state_properties() {
        let h = spin_hamiltonian(SpinConfig { j: 1.0, b: 0.3, beta: 0.0 });
        assert_eq!(thermal_state(&h, 0.0).unwrap(), CMatrix::identity(4).scale(0.25));
        let rho = thermal_state(&h, 2.0).unwrap();
        assert!((rho.trace().re - 1.0).abs() < 1e-12);
        assert!(herm_eigvals(&rho).unwrap().iter().all(|&l| l > 0.0));
        assert!(thermal_state(&h, -1.0).is_err());
    }

    #[test]
    fn spin_high_temperature() {
        let rep = spin_report(SpinConfig { j: 1.0, b: 0.0, beta: 0.0 }).unwrap();
        assert!((rep.w_s - 1.0).abs() < 1e-9);
        assert!((rep.n_sum - 2.0).abs() < 1e-9);
        assert!((rep.w_s2 - 1.0).abs() < 1e-9);
        assert!(rep.thm31.holds);
        assert!(rep.claims_apply);
        assert!(rep.claims.iter().all(|c| c.discrepancy));
    }

    #[test]
    fn worked_examples_identity_rows() {
        let rows = worked_example_rows().unwrap();
        let get = |q: &str| rows.iter().find(|r| r.quantity == q).unwrap();
        assert!(get("max|T# - [[-1,4],[-1,3]]|").pass);
        assert!(get("w_A(T)").pass);
        assert!(get("w_A(T) <= THM31 rhs^(1/4)").pass);
        assert!((get("||T#T + TT#||_A").computed - 10.0).abs() < 1e-9);
        // The classical column reproduces the claimed values.
        assert!((get("||T#T + TT#||_A").classical.unwrap() - 12.385).abs() < 0.01);
    }
}
