//! Vector-level inequalities in the A-semi-inner product, as evaluable
//! predicates.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::aops::a_adjoint;
use crate::bounds::{BoundParams, VerifyConfig};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, MatrixFile};
use crate::report::{
    holds_within, CsvRow, IdStats, InstanceEcho, VerificationSummary, ViolationRecord,
    LEMMA_HOLDS_REL_TOL,
};
use crate::space::{random_operator_in_ba_with, random_space, CVector, SemiHilbertSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LemmaId {
    Kr0,
    Md1,
    Md2,
    L24,
    CorOne,
    L25Major1,
    Cor27,
    HolderQhb,
    Max1,
    Qadri1,
    Comb1,
    /// |⟨a,b⟩|² ≤ β/(1+β)‖a‖²‖b‖² + 1/(1+β)‖a‖‖b‖|⟨a,b⟩|, the intermediate
    /// step behind L24.
    RefinedCs,
}

impl LemmaId {
    pub const ALL: [LemmaId; 12] = [
        LemmaId::Kr0,
        LemmaId::Md1,
        LemmaId::Md2,
        LemmaId::L24,
        LemmaId::CorOne,
        LemmaId::L25Major1,
        LemmaId::Cor27,
        LemmaId::HolderQhb,
        LemmaId::Max1,
        LemmaId::Qadri1,
        LemmaId::Comb1,
        LemmaId::RefinedCs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LemmaId::Kr0 => "KR0",
            LemmaId::Md1 => "MD1",
            LemmaId::Md2 => "MD2",
            LemmaId::L24 => "L24",
            LemmaId::CorOne => "COR_ONE",
            LemmaId::L25Major1 => "L25_MAJOR1",
            LemmaId::Cor27 => "COR27",
            LemmaId::HolderQhb => "HOLDER_QHB",
            LemmaId::Max1 => "MAX1",
            LemmaId::Qadri1 => "QADRI1",
            LemmaId::Comb1 => "COMB1",
            LemmaId::RefinedCs => "REFINED_CS",
        }
    }

    pub fn uses_alpha(self) -> bool {
        matches!(
            self,
            LemmaId::Md1
                | LemmaId::Md2
                | LemmaId::L24
                | LemmaId::CorOne
                | LemmaId::L25Major1
                | LemmaId::Cor27
                | LemmaId::Comb1
        )
    }

    pub fn uses_beta(self) -> bool {
        matches!(
            self,
            LemmaId::L24 | LemmaId::CorOne | LemmaId::L25Major1 | LemmaId::Cor27 | LemmaId::RefinedCs
        )
    }

    pub fn uses_r(self) -> bool {
        matches!(
            self,
            LemmaId::Md2 | LemmaId::CorOne | LemmaId::L25Major1 | LemmaId::Cor27
        )
    }

    pub fn needs_operator(self) -> bool {
        self == LemmaId::HolderQhb
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LemmaId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_uppercase().replace('-', "_");
        LemmaId::ALL
            .into_iter()
            .find(|id| id.name() == key)
            .ok_or_else(|| Error::InvalidParams(format!("unknown lemma id '{s}'")))
    }
}

impl Serialize for LemmaId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaReport {
    pub id: LemmaId,
    pub params: BoundParams,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
}

impl LemmaReport {
    pub fn new(id: LemmaId, params: BoundParams, lhs: f64, rhs: f64) -> Self {
        Self {
            id,
            params,
            lhs,
            rhs,
            slack: rhs - lhs,
            holds: holds_within(lhs, rhs, LEMMA_HOLDS_REL_TOL),
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

/// The scalars every lemma is built from.
#[derive(Debug, Clone, Copy)]
struct Triple {
    na: f64,
    nb: f64,
    ab: f64,
    ae: f64,
    eb: f64,
}

impl Triple {
    fn new(space: &SemiHilbertSpace, a: &CVector, b: &CVector, e: &CVector) -> Result<Self> {
        let ne = space.norm(e)?;
        if (ne - 1.0).abs() > space.tol().max(1e-9) {
            return Err(Error::NotUnitA { norm: ne });
        }
        Ok(Self {
            na: space.norm(a)?,
            nb: space.norm(b)?,
            ab: space.inner(a, b)?.norm(),
            ae: space.inner(a, e)?.norm(),
            eb: space.inner(e, b)?.norm(),
        })
    }
}

/// C₁ and C₂ of the squared form.
pub fn l24_coefficients(alpha: f64, beta: f64) -> (f64, f64) {
    let c1 = ((2.0 * beta + 1.0) * (1.0 + alpha * alpha) + 2.0 * alpha) / (4.0 * (1.0 + beta));
    let c2 = (1.0 - alpha) * (2.0 + (1.0 + alpha) * (1.0 + 2.0 * beta)) / (4.0 * (1.0 + beta));
    (c1, c2)
}

/// Coefficients of the 2r-power form with β-weighted Cauchy-Schwarz.
pub fn major_coefficients(alpha: f64, beta: f64) -> (f64, f64) {
    (
        (1.0 + alpha + 2.0 * beta) / (2.0 * (1.0 + beta)),
        (1.0 - alpha) / (2.0 * (1.0 + beta)),
    )
}

fn eval_triple(t: Triple, id: LemmaId, p: BoundParams) -> (f64, f64) {
    let Triple { na, nb, ab, ae, eb } = t;
    let (alpha, beta, r) = (p.alpha, p.beta, p.r);
    let prod = ae * eb;
    let nab = na * nb;
    match id {
        LemmaId::Kr0 => (prod, 0.5 * (nab + ab)),
        LemmaId::Md1 => (prod, 0.5 * (1.0 + alpha) * nab + 0.5 * (1.0 - alpha) * ab),
        LemmaId::Md2 => (
            prod.powf(r),
            0.5 * (1.0 + alpha) * nab.powf(r) + 0.5 * (1.0 - alpha) * ab.powf(r),
        ),
        LemmaId::L24 => {
            let (c1, c2) = l24_coefficients(alpha, beta);
            (prod * prod, c1 * nab * nab + c2 * nab * ab)
        }
        LemmaId::CorOne => {
            let (c1, c2) = l24_coefficients(alpha, beta);
            (
                prod.powf(2.0 * r),
                c1 * nab.powf(2.0 * r) + c2 * nab.powf(r) * ab.powf(r),
            )
        }
        LemmaId::L25Major1 => {
            let (k1, k2) = major_coefficients(alpha, beta);
            (prod.powf(2.0 * r), k1 * nab.powf(2.0 * r) + k2 * ab.powf(2.0 * r))
        }
        LemmaId::Cor27 => {
            let (k1, k2) = major_coefficients(alpha, beta);
            (
                prod.powf(2.0 * r),
                k1 * nab.powf(2.0 * r) + k2 * ab.powf(r) * nab.powf(r),
            )
        }
        LemmaId::Max1 => (ae * ae + eb * eb, na.max(nb).powi(2) + ab),
        LemmaId::Qadri1 => (ae + eb, ((na + nb) * na.max(nb) + 2.0 * ab).sqrt()),
        LemmaId::Comb1 => (
            (ae + eb).powi(2),
            (na.powi(4) + nb.powi(4) + 2.0 * ab * ab).sqrt()
                + (1.0 + alpha) * nab
                + (1.0 - alpha) * ab,
        ),
        LemmaId::RefinedCs => (
            ab * ab,
            beta / (1.0 + beta) * nab * nab + nab * ab / (1.0 + beta),
        ),
        LemmaId::HolderQhb => unreachable!("handled by eval_holder"),
    }
}

// x = a/‖a‖_A and y = b/‖b‖_A after projecting onto ran(A). A vector with
// zero A-norm makes both sides vanish.
fn eval_holder(space: &SemiHilbertSpace, a: &CVector, b: &CVector, t: &CMatrix) -> Result<(f64, f64)> {
    space.check_operator(t)?;
    let ts = a_adjoint(space, t)?;
    let (Some(x), Some(y)) = (space.a_normalize(a)?, space.a_normalize(b)?) else {
        return Ok((0.0, 0.0));
    };
    let tx = CVector::apply(t, &x);
    let lhs = space.inner(&tx, &y)?.norm_sqr();
    let tst_x = CVector::apply(&ts.matmul(t), &x);
    let tts_y = CVector::apply(&t.matmul(&ts), &y);
    let u = space.inner(&tst_x, &x)?.re.max(0.0);
    let v = space.inner(&tts_y, &y)?.re.max(0.0);
    Ok((lhs, (u * v).sqrt()))
}

/// Evaluates one lemma on (a, b, e). `e` must have unit A-norm. The operator
/// is required by HOLDER_QHB only and ignored otherwise.
pub fn eval_lemma(
    space: &SemiHilbertSpace,
    a: &CVector,
    b: &CVector,
    e: &CVector,
    id: LemmaId,
    params: BoundParams,
    op: Option<&CMatrix>,
) -> Result<LemmaReport> {
    params.validate()?;
    let triple = Triple::new(space, a, b, e)?;
    let (lhs, rhs) = if id.needs_operator() {
        let t = op.ok_or_else(|| Error::InvalidParams(format!("{id} needs an operator")))?;
        eval_holder(space, a, b, t)?
    } else {
        eval_triple(triple, id, params)
    };
    Ok(LemmaReport::new(id, params, lhs, rhs))
}

pub fn lemma_params(cfg: &VerifyConfig, id: LemmaId) -> Vec<BoundParams> {
    cfg.grid.combos_for(id.uses_alpha(), id.uses_beta(), id.uses_r(), false)
}

struct LemmaTrial {
    trial: usize,
    trial_seed: u64,
    dim: usize,
    a_mat: CMatrix,
    t: CMatrix,
    vectors: [CVector; 3],
    reports: Vec<LemmaReport>,
    skipped: bool,
    error: Option<String>,
}

fn vec_pairs(v: &CVector) -> Vec<[f64; 2]> {
    v.as_slice().iter().map(|z| [z.re, z.im]).collect()
}

fn run_lemma_trial(cfg: &VerifyConfig, trial: usize) -> LemmaTrial {
    let trial_seed = cfg.trial_seed(trial);
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
    let dim = cfg.draw_dim(&mut rng);
    let space_seed: u64 = rand::Rng::random(&mut rng);
    let zero = CVector::from_real(&vec![0.0; dim]);
    let mut out = LemmaTrial {
        trial,
        trial_seed,
        dim,
        a_mat: CMatrix::zeros(dim, dim),
        t: CMatrix::zeros(dim, dim),
        vectors: [zero.clone(), zero.clone(), zero],
        reports: Vec::new(),
        skipped: false,
        error: None,
    };
    let result = (|| -> Result<()> {
        let space = random_space(dim, space_seed, cfg.singular_prob)?;
        out.a_mat = space.a().clone();
        let a = CVector::random(&mut rng, dim);
        let b = CVector::random(&mut rng, dim);
        let raw_e = CVector::random(&mut rng, dim);
        out.t = random_operator_in_ba_with(&space, &mut rng);
        let Some(e) = space.a_normalize(&raw_e)? else {
            out.skipped = true;
            return Ok(());
        };
        out.vectors = [a.clone(), b.clone(), e.clone()];
        for id in LemmaId::ALL {
            for p in lemma_params(cfg, id) {
                out.reports.push(eval_lemma(&space, &a, &b, &e, id, p, Some(&out.t))?);
            }
        }
        Ok(())
    })();
    if let Err(err) = result {
        out.error = Some(format!("trial {trial}: {err}"));
    }
    out
}

/// Samples `cfg.trials` triples (a, b, e) with e A-normalized inside ran(A)
/// and checks every lemma across the grid. Trial k uses seed + k.
pub fn verify_lemmas_random(cfg: &VerifyConfig) -> Result<VerificationSummary> {
    cfg.validate()?;
    let outcomes: Vec<LemmaTrial> = (0..cfg.trials)
        .into_par_iter()
        .map(|k| run_lemma_trial(cfg, k))
        .collect();

    let mut per_id: Vec<IdStats> = LemmaId::ALL.iter().map(|id| IdStats::new(id.name())).collect();
    let mut summary = VerificationSummary {
        kind: "lemmas".into(),
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
        if o.skipped {
            summary.skipped += 1;
            continue;
        }
        for rep in &o.reports {
            let row = rep.to_row();
            let idx = LemmaId::ALL.iter().position(|&i| i == rep.id).expect("known id");
            let echo = || InstanceEcho {
                trial: o.trial,
                trial_seed: o.trial_seed,
                dim: o.dim,
                a: MatrixFile::from_matrix(&o.a_mat),
                t: rep.id.needs_operator().then(|| MatrixFile::from_matrix(&o.t)),
                s: None,
                vectors: Some(o.vectors.iter().map(vec_pairs).collect()),
            };
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
    }
    summary.per_id = per_id;
    Ok(summary)
}
