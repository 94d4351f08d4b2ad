//! The catalog of operator-level A-numerical-radius and A-seminorm
//! inequalities, evaluated on concrete operators.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::aops::{
    a_adjoint, a_adjoint_unchecked, a_positive_power_unchecked, reduced_unchecked,
};
use crate::error::{Error, Result};
use crate::linalg::{numerical_radius, spectral_norm, CMatrix, MatrixFile};
use crate::report::{
    holds_within, ChainStats, CsvRow, IdStats, IdentityStats, InstanceEcho, VerificationSummary,
    ViolationRecord, BOUND_HOLDS_REL_TOL,
};
use crate::space::{random_operator_in_ba_with, random_space, SemiHilbertSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundId {
    In1Lower,
    In1Upper,
    In2Power,
    In3,
    In4,
    In5Lower,
    In6,
    In7,
    In8,
    Thm31,
    Thm32,
    ThmProd4r,
    CorProd,
    ThmRahma1,
    Cf1,
    Thm41,
    Thm42,
    Thm43,
}

impl BoundId {
    pub const ALL: [BoundId; 18] = [
        BoundId::In1Lower,
        BoundId::In1Upper,
        BoundId::In2Power,
        BoundId::In3,
        BoundId::In4,
        BoundId::In5Lower,
        BoundId::In6,
        BoundId::In7,
        BoundId::In8,
        BoundId::Thm31,
        BoundId::Thm32,
        BoundId::ThmProd4r,
        BoundId::CorProd,
        BoundId::ThmRahma1,
        BoundId::Cf1,
        BoundId::Thm41,
        BoundId::Thm42,
        BoundId::Thm43,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundId::In1Lower => "IN1_LOWER",
            BoundId::In1Upper => "IN1_UPPER",
            BoundId::In2Power => "IN2_POWER",
            BoundId::In3 => "IN3",
            BoundId::In4 => "IN4",
            BoundId::In5Lower => "IN5_LOWER",
            BoundId::In6 => "IN6",
            BoundId::In7 => "IN7",
            BoundId::In8 => "IN8",
            BoundId::Thm31 => "THM31",
            BoundId::Thm32 => "THM32",
            BoundId::ThmProd4r => "THM_PROD_4R",
            BoundId::CorProd => "COR_PROD",
            BoundId::ThmRahma1 => "THM_RAHMA1",
            BoundId::Cf1 => "CF1",
            BoundId::Thm41 => "THM41",
            BoundId::Thm42 => "THM42",
            BoundId::Thm43 => "THM43",
        }
    }

    /// True for inequalities involving two operators T and S.
    pub fn is_pair(self) -> bool {
        matches!(
            self,
            BoundId::ThmProd4r
                | BoundId::CorProd
                | BoundId::ThmRahma1
                | BoundId::Cf1
                | BoundId::Thm41
                | BoundId::Thm42
                | BoundId::Thm43
        )
    }

    pub fn uses_alpha(self) -> bool {
        matches!(
            self,
            BoundId::Thm31 | BoundId::Thm32 | BoundId::ThmProd4r | BoundId::ThmRahma1 | BoundId::Thm42
        )
    }

    pub fn uses_beta(self) -> bool {
        matches!(
            self,
            BoundId::In7
                | BoundId::In8
                | BoundId::Thm31
                | BoundId::Thm32
                | BoundId::ThmProd4r
                | BoundId::ThmRahma1
        )
    }

    pub fn uses_r(self) -> bool {
        matches!(
            self,
            BoundId::Thm32 | BoundId::ThmProd4r | BoundId::CorProd | BoundId::ThmRahma1
        )
    }

    pub fn uses_n(self) -> bool {
        self == BoundId::In2Power
    }
}

impl fmt::Display for BoundId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_uppercase().replace('-', "_");
        BoundId::ALL
            .into_iter()
            .find(|id| id.name() == key || (key == "IN2" && *id == BoundId::In2Power))
            .ok_or_else(|| Error::InvalidParams(format!("unknown bound id '{s}'")))
    }
}

impl Serialize for BoundId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// α ∈ [0,1], β ≥ 0, r ≥ 1, n ≥ 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    pub alpha: f64,
    pub beta: f64,
    pub r: f64,
    pub n: u32,
}

impl Default for BoundParams {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            beta: 1.0,
            r: 1.0,
            n: 2,
        }
    }
}

impl BoundParams {
    pub fn new(alpha: f64, beta: f64, r: f64, n: u32) -> Result<Self> {
        let p = Self { alpha, beta, r, n };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::InvalidParams(format!("alpha must lie in [0,1], got {}", self.alpha)));
        }
        if !(self.beta.is_finite() && self.beta >= 0.0) {
            return Err(Error::InvalidParams(format!("beta must be ≥ 0, got {}", self.beta)));
        }
        if !(self.r.is_finite() && self.r >= 1.0) {
            return Err(Error::InvalidParams(format!("r must be ≥ 1, got {}", self.r)));
        }
        if self.n < 1 {
            return Err(Error::InvalidParams("n must be ≥ 1".into()));
        }
        Ok(())
    }

    pub fn gamma1(&self) -> f64 {
        let (a, b) = (self.alpha, self.beta);
        ((2.0 * b + 1.0) * (1.0 + a * a) + 2.0 * a) / (1.0 + b)
    }

    pub fn gamma2(&self) -> f64 {
        let (a, b) = (self.alpha, self.beta);
        (1.0 - a) * (2.0 + (1.0 + a) * (1.0 + 2.0 * b)) / (1.0 + b)
    }

    pub fn delta1(&self) -> f64 {
        let (a, b) = (self.alpha, self.beta);
        (1.0 + a + 2.0 * b) / (2.0 * (1.0 + b))
    }

    pub fn delta2(&self) -> f64 {
        let (a, b) = (self.alpha, self.beta);
        (1.0 - a) / (2.0 * (1.0 + b))
    }
}

/// One evaluated inequality instance. `holds` is derived from the sides.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub id: BoundId,
    pub params: BoundParams,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
}

impl BoundReport {
    pub fn new(id: BoundId, params: BoundParams, lhs: f64, rhs: f64) -> Self {
        Self {
            id,
            params,
            lhs,
            rhs,
            slack: rhs - lhs,
            holds: holds_within(lhs, rhs, BOUND_HOLDS_REL_TOL),
        }
    }

    pub fn to_row(&self) -> CsvRow {
        CsvRow {
            id: self.id.name().to_string(),
            alpha: self.params.alpha,
            beta: self.params.beta,
            r: self.params.r,
            n: self.params.n,
            lhs: self.lhs,
            rhs: self.rhs,
            slack: self.slack,
            holds: self.holds,
        }
    }
}

// ‖X‖_A and w_A(X) for operators already known to lie in B_A.
fn norm_a(space: &SemiHilbertSpace, x: &CMatrix) -> f64 {
    spectral_norm(&reduced_unchecked(space, x))
}

fn numrad_a(space: &SemiHilbertSpace, x: &CMatrix) -> Result<f64> {
    numerical_radius(&reduced_unchecked(space, x))
}

// W^p for A-positive W: direct products for small integer p, the reduced
// functional calculus otherwise.
fn positive_power(space: &SemiHilbertSpace, w: &CMatrix, p: f64) -> Result<CMatrix> {
    if p.fract() == 0.0 && (1.0..=16.0).contains(&p) {
        Ok(w.pow(p as u32))
    } else {
        a_positive_power_unchecked(space, w, p)
    }
}

/// Cached quantities for inequalities in one operator T.
#[derive(Debug)]
pub struct SingleEvaluator<'a> {
    space: &'a SemiHilbertSpace,
    t: CMatrix,
    tst: CMatrix,
    tts: CMatrix,
    /// ‖T‖_A
    pub norm: f64,
    /// w_A(T)
    pub w: f64,
    /// ‖T♯T + TT♯‖_A
    pub n_sum: f64,
    /// w_A(T²)
    pub w_sq: f64,
    w_pow: Vec<(u32, f64)>,
    m_r: Vec<(f64, f64)>,
}

impl<'a> SingleEvaluator<'a> {
    pub fn new(space: &'a SemiHilbertSpace, t: &CMatrix) -> Result<Self> {
        let ts = a_adjoint(space, t)?;
        let tst = ts.matmul(t);
        let tts = t.matmul(&ts);
        let w = numrad_a(space, t)?;
        let w_sq = numrad_a(space, &t.matmul(t))?;
        Ok(Self {
            norm: norm_a(space, t),
            w,
            n_sum: norm_a(space, &(&tst + &tts)),
            w_sq,
            w_pow: vec![(1, w), (2, w_sq)],
            m_r: Vec::new(),
            space,
            t: t.clone(),
            tst,
            tts,
        })
    }

    /// w_A(Tⁿ).
    pub fn w_pow(&mut self, n: u32) -> Result<f64> {
        if let Some(&(_, v)) = self.w_pow.iter().find(|(k, _)| *k == n) {
            return Ok(v);
        }
        let v = numrad_a(self.space, &self.t.pow(n))?;
        self.w_pow.push((n, v));
        Ok(v)
    }

    /// ‖(T♯T)^r + (TT♯)^r‖_A.
    pub fn m_r(&mut self, r: f64) -> Result<f64> {
        if r == 1.0 {
            return Ok(self.n_sum);
        }
        if let Some(&(_, v)) = self.m_r.iter().find(|(k, _)| *k == r) {
            return Ok(v);
        }
        let sum = &positive_power(self.space, &self.tst, r)? + &positive_power(self.space, &self.tts, r)?;
        let v = norm_a(self.space, &sum);
        self.m_r.push((r, v));
        Ok(v)
    }

    pub fn eval(&mut self, id: BoundId, params: BoundParams) -> Result<BoundReport> {
        if id.is_pair() {
            return Err(Error::InvalidParams(format!("{id} needs two operators")));
        }
        params.validate()?;
        let (w, nrm, n, w2) = (self.w, self.norm, self.n_sum, self.w_sq);
        let beta = params.beta;
        let (lhs, rhs) = match id {
            BoundId::In1Lower => (0.5 * nrm, w),
            BoundId::In1Upper => (w, nrm),
            BoundId::In2Power => (self.w_pow(params.n)?, w.powi(params.n as i32)),
            BoundId::In3 => (w * w, 0.5 * n),
            BoundId::In4 => (w * w, 0.5 * (nrm * nrm + w2)),
            BoundId::In5Lower => (0.25 * n, w * w),
            BoundId::In6 => (w.powi(4), 3.0 / 16.0 * n * n + 0.125 * n * w2),
            BoundId::In7 => (
                w.powi(4),
                (1.0 + 2.0 * beta) / (16.0 * (1.0 + beta)) * n * n
                    + (2.0 * beta + 3.0) / (8.0 * (1.0 + beta)) * n * w2,
            ),
            BoundId::In8 => (
                w.powi(4),
                (1.0 + 2.0 * beta) / (8.0 * (1.0 + beta)) * n * n + w2 * w2 / (2.0 * (1.0 + beta)),
            ),
            BoundId::Thm31 => (
                w.powi(4),
                params.gamma1() / 16.0 * n * n + params.gamma2() / 8.0 * n * w2,
            ),
            BoundId::Thm32 => {
                let r = params.r;
                let m = self.m_r(r)?;
                (
                    w.powf(4.0 * r),
                    params.delta1() / 4.0 * m * m + params.delta2() * w2.powf(2.0 * r),
                )
            }
            _ => unreachable!("pair ids rejected above"),
        };
        Ok(BoundReport::new(id, params, lhs, rhs))
    }
}

/// Cached quantities for inequalities in two operators T, S.
#[derive(Debug)]
pub struct PairEvaluator<'a> {
    space: &'a SemiHilbertSpace,
    tst: CMatrix,
    sss: CMatrix,
    /// ‖T‖_A, ‖S‖_A
    pub norm_t: f64,
    pub norm_s: f64,
    /// ‖T+S‖_A
    pub norm_sum: f64,
    /// w_A(T+S)
    pub w_sum: f64,
    /// w_A(S♯T)
    pub w_st: f64,
    /// ‖T♯T + S♯S‖_A and ‖T♯T − S♯S‖_A
    pub n_plus: f64,
    pub n_minus: f64,
    /// w_A(T♯T), w_A(S♯S)
    pub w_tst: f64,
    pub w_sss: f64,
    /// w_A(S♯S·T♯T)
    pub w_prod: f64,
    p_r: Vec<(f64, f64)>,
}

impl<'a> PairEvaluator<'a> {
    pub fn new(space: &'a SemiHilbertSpace, t: &CMatrix, s: &CMatrix) -> Result<Self> {
        let ts = a_adjoint(space, t)?;
        let ss = a_adjoint(space, s)?;
        let tst = ts.matmul(t);
        let sss = ss.matmul(s);
        let sum = t + s;
        Ok(Self {
            norm_t: norm_a(space, t),
            norm_s: norm_a(space, s),
            norm_sum: norm_a(space, &sum),
            w_sum: numrad_a(space, &sum)?,
            w_st: numrad_a(space, &ss.matmul(t))?,
            n_plus: norm_a(space, &(&tst + &sss)),
            n_minus: norm_a(space, &(&tst - &sss)),
            w_tst: numrad_a(space, &tst)?,
            w_sss: numrad_a(space, &sss)?,
            w_prod: numrad_a(space, &sss.matmul(&tst))?,
            p_r: Vec::new(),
            space,
            tst,
            sss,
        })
    }

    /// ‖(T♯T)^{2r} + (S♯S)^{2r}‖_A.
    pub fn p_r(&mut self, r: f64) -> Result<f64> {
        if let Some(&(_, v)) = self.p_r.iter().find(|(k, _)| *k == r) {
            return Ok(v);
        }
        let sum = &positive_power(self.space, &self.tst, 2.0 * r)?
            + &positive_power(self.space, &self.sss, 2.0 * r)?;
        let v = norm_a(self.space, &sum);
        self.p_r.push((r, v));
        Ok(v)
    }

    pub fn eval(&mut self, id: BoundId, params: BoundParams) -> Result<BoundReport> {
        if !id.is_pair() {
            return Err(Error::InvalidParams(format!("{id} takes a single operator")));
        }
        params.validate()?;
        let (alpha, beta, r) = (params.alpha, params.beta, params.r);
        let (lhs, rhs) = match id {
            BoundId::ThmProd4r => {
                let p = self.p_r(r)?;
                (
                    self.w_st.powf(4.0 * r),
                    params.gamma1() / 16.0 * p * p + params.gamma2() / 8.0 * p * self.w_prod.powf(r),
                )
            }
            BoundId::CorProd => (self.w_prod.powf(r), 0.5 * self.p_r(r)?),
            BoundId::ThmRahma1 => {
                let p = self.p_r(r)?;
                (
                    self.w_st.powf(4.0 * r),
                    (1.0 + alpha + 2.0 * beta) / (8.0 * (1.0 + beta)) * p * p
                        + (1.0 - alpha) / (2.0 * (1.0 + beta)) * self.w_prod.powf(2.0 * r),
                )
            }
            BoundId::Cf1 => (self.w_st * self.w_st, 0.5 * self.p_r(1.0)?),
            BoundId::Thm41 => (self.norm_sum * self.norm_sum, self.thm41_rhs()),
            BoundId::Thm42 => (self.norm_sum * self.norm_sum, self.thm42_rhs(alpha)?),
            BoundId::Thm43 => (
                self.w_sum * self.w_sum,
                0.5 * (self.n_plus + self.n_minus)
                    + (self.w_tst * self.w_sss).sqrt()
                    + 2.0 * self.w_st,
            ),
            _ => unreachable!("single ids rejected above"),
        };
        Ok(BoundReport::new(id, params, lhs, rhs))
    }

    pub fn thm41_rhs(&self) -> f64 {
        0.5 * (self.n_plus + self.n_minus) + self.norm_t * self.norm_s + 2.0 * self.w_st
    }

    pub fn thm42_rhs(&mut self, alpha: f64) -> Result<f64> {
        let q = self.p_r(1.0)?;
        Ok((q + 2.0 * self.w_st * self.w_st).sqrt()
            + (alpha + 1.0) * self.norm_t * self.norm_s
            + (1.0 - alpha) * self.w_st)
    }

    /// (‖T‖_A + ‖S‖_A)².
    pub fn triangle_sq(&self) -> f64 {
        (self.norm_t + self.norm_s).powi(2)
    }
}

pub fn eval_single(
    space: &SemiHilbertSpace,
    t: &CMatrix,
    id: BoundId,
    params: BoundParams,
) -> Result<BoundReport> {
    if id.is_pair() {
        return Err(Error::InvalidParams(format!("{id} needs two operators")));
    }
    params.validate()?;
    SingleEvaluator::new(space, t)?.eval(id, params)
}

pub fn eval_pair(
    space: &SemiHilbertSpace,
    t: &CMatrix,
    s: &CMatrix,
    id: BoundId,
    params: BoundParams,
) -> Result<BoundReport> {
    if !id.is_pair() {
        return Err(Error::InvalidParams(format!("{id} takes a single operator")));
    }
    params.validate()?;
    PairEvaluator::new(space, t, s)?.eval(id, params)
}

/// Parameter values swept by the verifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamGrid {
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    pub rs: Vec<f64>,
    pub ns: Vec<u32>,
}

impl Default for ParamGrid {
    fn default() -> Self {
        Self {
            alphas: vec![0.0, 0.25, 0.5, 0.75, 1.0],
            betas: vec![0.0, 0.5, 1.0, 10.0],
            rs: vec![1.0, 2.0],
            ns: vec![2, 3],
        }
    }
}

impl ParamGrid {
    pub fn validate(&self) -> Result<()> {
        if self.alphas.is_empty() || self.betas.is_empty() || self.rs.is_empty() || self.ns.is_empty() {
            return Err(Error::InvalidConfig("parameter lists must be non-empty".into()));
        }
        for &a in &self.alphas {
            for &b in &self.betas {
                for &r in &self.rs {
                    for &n in &self.ns {
                        BoundParams::new(a, b, r, n)
                            .map_err(|e| Error::InvalidConfig(e.to_string()))?;
                    }
                }
            }
        }
        Ok(())
    }

    /// The parameter combinations relevant to `id`; unused parameters keep
    /// the first grid value.
    pub fn combos_for(&self, uses_alpha: bool, uses_beta: bool, uses_r: bool, uses_n: bool) -> Vec<BoundParams> {
        let pick = |used: bool, v: &Vec<f64>| if used { v.clone() } else { vec![v[0]] };
        let ns = if uses_n { self.ns.clone() } else { vec![self.ns[0]] };
        let mut out = Vec::new();
        for &alpha in &pick(uses_alpha, &self.alphas) {
            for &beta in &pick(uses_beta, &self.betas) {
                for &r in &pick(uses_r, &self.rs) {
                    for &n in &ns {
                        out.push(BoundParams { alpha, beta, r, n });
                    }
                }
            }
        }
        out
    }

    pub fn for_bound(&self, id: BoundId) -> Vec<BoundParams> {
        self.combos_for(id.uses_alpha(), id.uses_beta(), id.uses_r(), id.uses_n())
    }
}

/// Settings shared by the randomized verifiers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub dim_min: usize,
    pub dim_max: usize,
    pub trials: usize,
    pub seed: u64,
    pub singular_prob: f64,
    pub grid: ParamGrid,
    /// Keep every evaluated row (for CSV output).
    #[serde(default)]
    pub collect_rows: bool,
    /// Cap on the violation list.
    pub max_listed_violations: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            dim_min: 2,
            dim_max: 6,
            trials: 1000,
            seed: 42,
            singular_prob: 0.5,
            grid: ParamGrid::default(),
            collect_rows: false,
            max_listed_violations: 100,
        }
    }
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if self.dim_min == 0 || self.dim_min > self.dim_max {
            return Err(Error::InvalidConfig(format!(
                "invalid dimension range {}..{}",
                self.dim_min, self.dim_max
            )));
        }
        if !(0.0..=1.0).contains(&self.singular_prob) {
            return Err(Error::InvalidConfig(format!(
                "singular_prob must lie in [0,1], got {}",
                self.singular_prob
            )));
        }
        self.grid.validate()
    }

    pub(crate) fn trial_seed(&self, k: usize) -> u64 {
        self.seed.wrapping_add(k as u64)
    }

    pub(crate) fn draw_dim(&self, rng: &mut impl Rng) -> usize {
        rng.random_range(self.dim_min..=self.dim_max)
    }
}

/// Relative residual tolerance for the algebraic identities.
pub const IDENTITY_REL_TOL: f64 = 1e-8;

/// Relative slack allowed in the refinement comparisons.
pub const CHAIN_REL_TOL: f64 = 1e-12;

pub const CHAIN_NAMES: [&str; 3] = [
    "THM32 rhs (r=1) <= N^2/4",
    "THM41 rhs <= (||T||_A + ||S||_A)^2",
    "THM42 rhs <= (||T||_A + ||S||_A)^2",
];

pub const IDENTITY_NAMES: [&str; 3] = [
    "A*adjoint(T) = T^* A",
    "adjoint(TS) = adjoint(S) adjoint(T)",
    "||adjoint(T) T||_A = ||T||_A^2",
];

struct TrialOutcome {
    trial: usize,
    trial_seed: u64,
    dim: usize,
    a: CMatrix,
    t: CMatrix,
    s: CMatrix,
    reports: Vec<BoundReport>,
    identities: [f64; 3],
    /// (value, reference) pairs per chain.
    chains: [Vec<(f64, f64)>; 3],
    error: Option<String>,
}

fn run_bound_trial(cfg: &VerifyConfig, trial: usize) -> TrialOutcome {
    let trial_seed = cfg.trial_seed(trial);
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
    let dim = cfg.draw_dim(&mut rng);
    let space_seed: u64 = rng.random();
    let mut out = TrialOutcome {
        trial,
        trial_seed,
        dim,
        a: CMatrix::zeros(dim, dim),
        t: CMatrix::zeros(dim, dim),
        s: CMatrix::zeros(dim, dim),
        reports: Vec::new(),
        identities: [0.0; 3],
        chains: Default::default(),
        error: None,
    };
    let space = match random_space(dim, space_seed, cfg.singular_prob) {
        Ok(s) => s,
        Err(e) => {
            out.error = Some(format!("trial {trial}: {e}"));
            return out;
        }
    };
    out.a = space.a().clone();
    out.t = random_operator_in_ba_with(&space, &mut rng);
    out.s = random_operator_in_ba_with(&space, &mut rng);
    if let Err(e) = evaluate_trial(cfg, &space, &mut out) {
        out.error = Some(format!("trial {trial}: {e}"));
    }
    out
}

fn evaluate_trial(cfg: &VerifyConfig, space: &SemiHilbertSpace, out: &mut TrialOutcome) -> Result<()> {
    let (t, s) = (&out.t, &out.s);
    let mut single = SingleEvaluator::new(space, t)?;
    let mut pair = PairEvaluator::new(space, t, s)?;
    for id in BoundId::ALL {
        for params in cfg.grid.for_bound(id) {
            let rep = if id.is_pair() {
                pair.eval(id, params)?
            } else {
                single.eval(id, params)?
            };
            match id {
                BoundId::Thm32 if params.r == 1.0 => {
                    out.chains[0].push((rep.rhs, 0.25 * single.n_sum * single.n_sum))
                }
                BoundId::Thm41 => out.chains[1].push((rep.rhs, pair.triangle_sq())),
                BoundId::Thm42 => out.chains[2].push((rep.rhs, pair.triangle_sq())),
                _ => {}
            }
            out.reports.push(rep);
        }
    }
    out.identities = identity_residuals(space, t, s, single.norm)?;
    Ok(())
}

/// Relative residuals of A·T♯ = T*A, (TS)♯ = S♯T♯ and ‖T♯T‖_A = ‖T‖_A².
pub fn identity_residuals(
    space: &SemiHilbertSpace,
    t: &CMatrix,
    s: &CMatrix,
    norm_t: f64,
) -> Result<[f64; 3]> {
    let ts = a_adjoint_unchecked(space, t);
    let ss = a_adjoint_unchecked(space, s);
    let tsa = t.adjoint().matmul(space.a());
    let r1 = spectral_norm(&(&space.a().matmul(&ts) - &tsa)) / spectral_norm(&tsa).max(1.0);
    let tsp = a_adjoint(space, &t.matmul(s))?;
    let prod = ss.matmul(&ts);
    let r2 = spectral_norm(&(&tsp - &prod)) / spectral_norm(&tsp).max(1.0);
    let n2 = norm_t * norm_t;
    let r3 = (norm_a(space, &ts.matmul(t)) - n2).abs() / n2.max(1.0);
    Ok([r1, r2, r3])
}

/// Runs every bound over random spaces and operators across the grid.
/// Trial k uses seed + k, so the result does not depend on scheduling.
pub fn verify_random(cfg: &VerifyConfig) -> Result<VerificationSummary> {
    cfg.validate()?;
    let outcomes: Vec<TrialOutcome> = (0..cfg.trials)
        .into_par_iter()
        .map(|k| run_bound_trial(cfg, k))
        .collect();

    let mut per_id: Vec<IdStats> = BoundId::ALL.iter().map(|id| IdStats::new(id.name())).collect();
    let mut identities: Vec<IdentityStats> = IDENTITY_NAMES.iter().map(|n| IdentityStats::new(*n)).collect();
    let mut chains: Vec<ChainStats> = CHAIN_NAMES.iter().map(|n| ChainStats::new(*n)).collect();
    let mut summary = VerificationSummary {
        kind: "bounds".into(),
        seed: cfg.seed,
        trials: cfg.trials,
        evaluations: 0,
        total_violations: 0,
        skipped: 0,
        errors: Vec::new(),
        per_id: Vec::new(),
        violations: Vec::new(),
        identities: Vec::new(),
        chains: Vec::new(),
        rows: Vec::new(),
    };

    for o in &outcomes {
        if let Some(e) = &o.error {
            summary.errors.push(e.clone());
            continue;
        }
        let echo = || InstanceEcho {
            trial: o.trial,
            trial_seed: o.trial_seed,
            dim: o.dim,
            a: MatrixFile::from_matrix(&o.a),
            t: Some(MatrixFile::from_matrix(&o.t)),
            s: Some(MatrixFile::from_matrix(&o.s)),
            vectors: None,
        };
        for rep in &o.reports {
            let row = rep.to_row();
            let idx = BoundId::ALL.iter().position(|&i| i == rep.id).expect("known id");
            per_id[idx].record(&row, echo);
            summary.evaluations += 1;
            if !row.holds {
                summary.total_violations += 1;
                if summary.violations.len() < cfg.max_listed_violations {
                    summary.violations.push(ViolationRecord {
                        trial: o.trial,
                        trial_seed: o.trial_seed,
                        row: row.clone(),
                    });
                }
            }
            if cfg.collect_rows {
                summary.rows.push(row);
            }
        }
        for (stat, &rel) in identities.iter_mut().zip(&o.identities) {
            stat.record(rel, IDENTITY_REL_TOL);
        }
        for (stat, pairs) in chains.iter_mut().zip(&o.chains) {
            for &(v, r) in pairs {
                stat.record(v, r, CHAIN_REL_TOL);
            }
        }
    }
    summary.per_id = per_id;
    summary.identities = identities;
    summary.chains = chains;
    Ok(summary)
}
