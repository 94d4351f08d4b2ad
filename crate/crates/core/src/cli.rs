//! Command-line front end. `run` parses arguments, writes to the supplied
//! sinks and returns the process exit code (0 ok, 1 violations, 2 usage).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::applications::{
    fock_report, reaction_diffusion_check, spin_report, sturm_report, worked_example_rows,
    write_sturm_csv, ClaimRow, FockConfig, SpinConfig, SturmConfig,
};
use crate::bounds::{eval_pair, eval_single, verify_random, BoundId, BoundParams, ParamGrid, VerifyConfig};
use crate::error::{Error, Result};
use crate::lemmas::{eval_lemma, verify_lemmas_random, LemmaId};
use crate::linalg::{read_matrix, CMatrix, C64};
use crate::report::{write_csv, CsvRow, VerificationSummary};
use crate::space::{CVector, SemiHilbertSpace, DEFAULT_TOL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "semihilbert", version, about = "A-numerical radius inequalities on semi-Hilbertian spaces")]
pub struct Cli {
    /// Output format. Defaults to json when --out is given, text otherwise.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the machine-readable report here; a text summary still goes to stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Randomized check of every bound and lemma.
    Verify(VerifyArgs),
    /// Claimed-vs-computed table for the worked 2×2 examples.
    PaperExamples,
    /// Evaluate one bound on matrices read from files.
    Bound(BoundArgs),
    /// Evaluate one vector lemma.
    Lemma(LemmaArgs),
    /// Finite-difference Sturm-Liouville operator.
    Sturm(SturmArgs),
    /// Two-spin thermal state.
    Spin(SpinArgs),
    /// Truncated Fock space with A = N.
    Fock(FockArgs),
    /// Reaction-diffusion subadditivity check.
    Rdiff(RdiffArgs),
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    #[arg(long, value_delimiter = ',')]
    pub alpha: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub beta: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub r: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<u32>>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Operator trials for the bounds suite.
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    /// Vector triples for the lemma suite.
    #[arg(long, default_value_t = 5000)]
    pub lemma_trials: usize,
    /// Dimension range, e.g. 2..6 (inclusive).
    #[arg(long, default_value = "2..6", value_parser = parse_dims)]
    pub dims: (usize, usize),
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.5)]
    pub singular_prob: f64,
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    /// Bound id, e.g. THM31.
    pub id: String,
    #[arg(short = 'A', long = "weight")]
    pub a: PathBuf,
    #[arg(short = 'T', long = "op-t")]
    pub t: PathBuf,
    #[arg(short = 'S', long = "op-s")]
    pub s: Option<PathBuf>,
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    #[arg(long, default_value_t = 2)]
    pub n: u32,
}

#[derive(Debug, Args)]
pub struct LemmaArgs {
    /// Lemma id, e.g. KR0.
    pub id: String,
    /// Weight matrix file; the identity of the vectors' dimension if omitted.
    #[arg(short = 'A', long = "weight")]
    pub a_mat: Option<PathBuf>,
    /// Entries as re or re:im, comma separated.
    #[arg(long = "va", value_delimiter = ',', allow_hyphen_values = true)]
    pub va: Vec<String>,
    #[arg(long = "vb", value_delimiter = ',', allow_hyphen_values = true)]
    pub vb: Vec<String>,
    #[arg(long = "ve", value_delimiter = ',', allow_hyphen_values = true)]
    pub ve: Vec<String>,
    /// Operator file, needed by HOLDER_QHB.
    #[arg(short = 'T', long = "op-t")]
    pub t: Option<PathBuf>,
    /// A-normalize e before evaluating.
    #[arg(long)]
    pub normalize: bool,
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
}

#[derive(Debug, Args)]
pub struct SturmArgs {
    /// Grid sizes.
    #[arg(long, value_delimiter = ',', default_value = "1,3,7,15,31,63")]
    pub n: Vec<usize>,
}

#[derive(Debug, Args)]
pub struct SpinArgs {
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub j: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub b: f64,
    #[arg(long, default_value_t = 0.0)]
    pub beta: f64,
}

#[derive(Debug, Args)]
pub struct FockArgs {
    #[arg(long, value_delimiter = ',', default_value = "8")]
    pub nmax: Vec<usize>,
}

#[derive(Debug, Args)]
pub struct RdiffArgs {
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    /// Potential samples; drawn from the seed if omitted.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub v: Option<Vec<f64>>,
    /// f′(ū) samples; drawn from the seed if omitted.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub fprime: Option<Vec<f64>>,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
}

fn parse_dims(s: &str) -> std::result::Result<(usize, usize), String> {
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (lo, hi.trim_start_matches('=')),
        None => (s, s),
    };
    let lo: usize = lo.trim().parse().map_err(|e| format!("bad dims '{s}': {e}"))?;
    let hi: usize = hi.trim().parse().map_err(|e| format!("bad dims '{s}': {e}"))?;
    Ok((lo, hi))
}

fn parse_entry(s: &str) -> Result<C64> {
    let s = s.trim();
    let (re, im) = match s.split_once(':') {
        Some((re, im)) => (re, im),
        None => (s, "0"),
    };
    let p = |x: &str| x.trim().parse::<f64>().map_err(|e| Error::Parse(format!("bad entry '{s}': {e}")));
    Ok(C64::new(p(re)?, p(im)?))
}

fn parse_vector(entries: &[String], name: &str) -> Result<CVector> {
    if entries.is_empty() {
        return Err(Error::InvalidParams(format!("vector --{name} is required")));
    }
    CVector::new(entries.iter().map(|e| parse_entry(e)).collect::<Result<_>>()?)
}

/// Six significant digits.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let e = x.abs().log10().floor() as i32;
    if (-4..6).contains(&e) {
        format!("{:.*}", (5 - e).max(0) as usize, x)
    } else {
        format!("{x:.5e}")
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// What a command produced: text for humans, JSON and CSV for machines.
struct Output {
    text: String,
    json: serde_json::Value,
    csv: String,
    code: i32,
}

impl Output {
    fn new(text: String, json: impl Serialize, csv: String, code: i32) -> Result<Self> {
        Ok(Self {
            text,
            json: serde_json::to_value(json)?,
            csv,
            code,
        })
    }
}

fn csv_of(rows: &[CsvRow]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(&mut buf, rows)?;
    Ok(String::from_utf8(buf).expect("ascii"))
}

fn claims_text(out: &mut String, claims: &[ClaimRow]) {
    let _ = writeln!(out, "  {:<40} {:>4} {:>12} {:>12}  flag", "claimed quantity", "rel", "claimed", "computed");
    for c in claims {
        let _ = writeln!(
            out,
            "  {:<40} {:>4} {:>12} {:>12}  {}",
            c.quantity,
            c.relation,
            sig6(c.claimed),
            sig6(c.computed),
            if c.discrepancy { "DISCREPANCY" } else { "ok" }
        );
    }
}

fn claims_csv(claims: &[ClaimRow]) -> String {
    let mut s = String::from("quantity,relation,claimed,computed,tol,discrepancy\n");
    for c in claims {
        let _ = writeln!(s, "{},{},{},{},{},{}", c.quantity, c.relation, c.claimed, c.computed, c.tol, c.discrepancy);
    }
    s
}

fn grid_from(p: &ParamArgs) -> ParamGrid {
    let d = ParamGrid::default();
    ParamGrid {
        alphas: p.alpha.clone().unwrap_or(d.alphas),
        betas: p.beta.clone().unwrap_or(d.betas),
        rs: p.r.clone().unwrap_or(d.rs),
        ns: p.n.clone().unwrap_or(d.ns),
    }
}

fn summary_text(out: &mut String, s: &VerificationSummary) {
    let _ = writeln!(
        out,
        "{}: {} trials, {} evaluations, {} violations, {} skipped, {} errors",
        s.kind,
        s.trials,
        s.evaluations,
        s.total_violations,
        s.skipped,
        s.errors.len()
    );
    let _ = writeln!(out, "  {:<14} {:>8} {:>10} {:>14}", "id", "evals", "violations", "min rel slack");
    for st in &s.per_id {
        let _ = writeln!(
            out,
            "  {:<14} {:>8} {:>10} {:>14}",
            st.id,
            st.evaluations,
            st.violations,
            sig6(st.min_relative_slack)
        );
    }
    for i in &s.identities {
        let _ = writeln!(
            out,
            "  identity {:<40} failures {} max rel residual {}",
            i.name,
            i.failures,
            sig6(i.max_relative_residual)
        );
    }
    for e in s.errors.iter().take(5) {
        let _ = writeln!(out, "  error: {e}");
    }
}

fn cmd_verify(args: &VerifyArgs, want_rows: bool) -> Result<Output> {
    let base = VerifyConfig {
        dim_min: args.dims.0,
        dim_max: args.dims.1,
        trials: args.trials,
        seed: args.seed,
        singular_prob: args.singular_prob,
        grid: grid_from(&args.params),
        collect_rows: want_rows,
        ..VerifyConfig::default()
    };
    let lemma_cfg = VerifyConfig {
        trials: args.lemma_trials,
        ..base.clone()
    };
    let bounds = verify_random(&base)?;
    let lemmas = verify_lemmas_random(&lemma_cfg)?;
    let passed = bounds.passed() && lemmas.passed();
    let mut text = String::new();
    summary_text(&mut text, &bounds);
    summary_text(&mut text, &lemmas);
    let _ = writeln!(text, "result: {}", if passed { "PASS" } else { "FAIL" });
    let mut rows = bounds.rows.clone();
    rows.extend(lemmas.rows.iter().cloned());
    #[derive(Serialize)]
    struct Both<'a> {
        passed: bool,
        bounds: &'a VerificationSummary,
        lemmas: &'a VerificationSummary,
    }
    let json = Both {
        passed,
        bounds: &bounds,
        lemmas: &lemmas,
    };
    Output::new(text, json, csv_of(&rows)?, if passed { EXIT_OK } else { EXIT_VIOLATION })
}

fn cmd_paper_examples() -> Result<Output> {
    let rows = worked_example_rows()?;
    let mut text = String::new();
    let _ = writeln!(
        text,
        "{:<20} {:<32} {:>10} {:>8} {:>12} {:>12}  result",
        "example", "quantity", "claimed", "tol", "computed", "classical"
    );
    let mut csv = String::from("example,quantity,claimed,tol,computed,classical,pass\n");
    let opt = |v: Option<f64>| v.map(sig6).unwrap_or_else(|| "-".into());
    let raw = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in &rows {
        let _ = writeln!(
            text,
            "{:<20} {:<32} {:>10} {:>8} {:>12} {:>12}  {}",
            r.example,
            r.quantity,
            opt(r.claimed),
            opt(r.tol),
            sig6(r.computed),
            opt(r.classical),
            if r.pass { "PASS" } else { "FAIL" }
        );
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            r.example,
            r.quantity,
            raw(r.claimed),
            raw(r.tol),
            r.computed,
            raw(r.classical),
            r.pass
        );
    }
    let _ = writeln!(
        text,
        "computed: supremum over the A-unit sphere; classical: the same quantity with AX over the ordinary unit sphere"
    );
    let all = rows.iter().all(|r| r.pass);
    Output::new(text, &rows, csv, if all { EXIT_OK } else { EXIT_VIOLATION })
}

fn load_space(path: &Path) -> Result<SemiHilbertSpace> {
    let (a, tol) = read_matrix(path)?;
    SemiHilbertSpace::new(a, tol.unwrap_or(DEFAULT_TOL))
}

fn load_op(path: &Path) -> Result<CMatrix> {
    Ok(read_matrix(path)?.0)
}

fn report_text(id: &str, params: &BoundParams, lhs: f64, rhs: f64, slack: f64, holds: bool) -> String {
    format!(
        "{id} (alpha={}, beta={}, r={}, n={}): lhs {} rhs {} slack {} holds {}\n",
        sig6(params.alpha),
        sig6(params.beta),
        sig6(params.r),
        params.n,
        sig6(lhs),
        sig6(rhs),
        sig6(slack),
        yes_no(holds)
    )
}

fn cmd_bound(args: &BoundArgs) -> Result<Output> {
    let id: BoundId = args.id.parse()?;
    let params = BoundParams::new(args.alpha, args.beta, args.r, args.n)?;
    let space = load_space(&args.a)?;
    let t = load_op(&args.t)?;
    space.check_operator(&t)?;
    let rep = if id.is_pair() {
        let s_path = args
            .s
            .as_ref()
            .ok_or_else(|| Error::InvalidParams(format!("{id} needs -S")))?;
        let s = load_op(s_path)?;
        space.check_operator(&s)?;
        eval_pair(&space, &t, &s, id, params)?
    } else {
        eval_single(&space, &t, id, params)?
    };
    let text = report_text(id.name(), &params, rep.lhs, rep.rhs, rep.slack, rep.holds);
    let csv = csv_of(&[rep.to_row()])?;
    let code = if rep.holds { EXIT_OK } else { EXIT_VIOLATION };
    Output::new(text, &rep, csv, code)
}

fn cmd_lemma(args: &LemmaArgs) -> Result<Output> {
    let id: LemmaId = args.id.parse()?;
    let params = BoundParams::new(args.alpha, args.beta, args.r, 2)?;
    let a = parse_vector(&args.va, "va")?;
    let b = parse_vector(&args.vb, "vb")?;
    let mut e = parse_vector(&args.ve, "ve")?;
    let space = match &args.a_mat {
        Some(p) => load_space(p)?,
        None => SemiHilbertSpace::identity(a.dim()),
    };
    if args.normalize {
        e = space
            .a_normalize(&e)?
            .ok_or_else(|| Error::InvalidParams("e has zero A-norm".into()))?;
    }
    let op = args.t.as_deref().map(load_op).transpose()?;
    let rep = eval_lemma(&space, &a, &b, &e, id, params, op.as_ref())?;
    let text = report_text(id.name(), &params, rep.lhs, rep.rhs, rep.slack, rep.holds);
    let csv = csv_of(&[rep.to_row()])?;
    let code = if rep.holds { EXIT_OK } else { EXIT_VIOLATION };
    Output::new(text, &rep, csv, code)
}

fn cmd_sturm(args: &SturmArgs) -> Result<Output> {
    if args.n.is_empty() {
        return Err(Error::InvalidConfig("at least one N is required".into()));
    }
    let reports = args
        .n
        .iter()
        .map(|&n| sturm_report(&SturmConfig::constant(n)))
        .collect::<Result<Vec<_>>>()?;
    let mut text = format!(
        "{:>5} {:>12} {:>14} {:>14} {:>12} {:>14} {:>12}\n",
        "N", "h", "w_A(T_h)", "closed form", "rel_err", "largest eig", "rel_err"
    );
    let opt = |v: Option<f64>| v.map(sig6).unwrap_or_else(|| "-".into());
    let mut consistent = true;
    for r in &reports {
        let _ = writeln!(
            text,
            "{:>5} {:>12} {:>14} {:>14} {:>12} {:>14} {:>12}",
            r.n,
            sig6(r.h),
            sig6(r.computed),
            opt(r.exact),
            opt(r.rel_err),
            opt(r.largest_eigenvalue),
            opt(r.rel_err_largest)
        );
        consistent &= (r.computed - r.spectral_radius).abs() <= 1e-9 * r.spectral_radius;
        consistent &= r.rel_err_largest.is_none_or(|e| e <= 1e-8);
        consistent &= r.bounds.iter().all(|b| b.holds);
    }
    let _ = writeln!(
        text,
        "closed form 2h^-2(1-cos(pi h)) is the smallest eigenvalue; w_A(T_h) is the largest, 2h^-2(1+cos(pi h))"
    );
    let mut buf = Vec::new();
    write_sturm_csv(&mut buf, &reports)?;
    let csv = String::from_utf8(buf).expect("ascii");
    Output::new(text, &reports, csv, if consistent { EXIT_OK } else { EXIT_VIOLATION })
}

fn cmd_spin(args: &SpinArgs) -> Result<Output> {
    let rep = spin_report(SpinConfig {
        j: args.j,
        b: args.b,
        beta: args.beta,
    })?;
    let mut text = format!(
        "spin J={} B={} beta={}: tr(rho) {}\n  w_rho(S) {}\n  ||S#S + SS#||_rho {}\n  w_rho(S^2) {}\n  THM31 rhs {} (fourth root {}) holds {}\n",
        sig6(args.j),
        sig6(args.b),
        sig6(args.beta),
        sig6(rep.rho_trace),
        sig6(rep.w_s),
        sig6(rep.n_sum),
        sig6(rep.w_s2),
        sig6(rep.thm31.rhs),
        sig6(rep.thm31_rhs_quarter),
        yes_no(rep.thm31.holds)
    );
    if !rep.claims_apply {
        text.push_str("  (claims below refer to B = 0, beta -> 0)\n");
    }
    claims_text(&mut text, &rep.claims);
    let ok = rep.thm31.holds && (rep.rho_trace - 1.0).abs() <= 1e-12;
    let csv = claims_csv(&rep.claims);
    Output::new(text, &rep, csv, if ok { EXIT_OK } else { EXIT_VIOLATION })
}

fn cmd_fock(args: &FockArgs) -> Result<Output> {
    let reports = args
        .nmax
        .iter()
        .map(|&nmax| fock_report(FockConfig { nmax }))
        .collect::<Result<Vec<_>>>()?;
    let mut text = String::new();
    let mut csv = String::from("nmax,in_b_a,in_b_a_half,numerical_radius,pairing_re,pairing_im,commutator_last\n");
    let mut ok = true;
    for r in &reports {
        let _ = writeln!(
            text,
            "fock nmax={}: T in B_A {}, T in B_(A^1/2) {}, w_A(T) {}, [a,a^dag] last entry {}, pairing {}",
            r.nmax,
            yes_no(r.in_b_a),
            yes_no(r.in_b_a_half),
            r.numerical_radius,
            sig6(r.commutator_last_entry),
            sig6(r.pairing[0])
        );
        claims_text(&mut text, &r.claims);
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            r.nmax, r.in_b_a, r.in_b_a_half, r.numerical_radius, r.pairing[0], r.pairing[1], r.commutator_last_entry
        );
        ok &= r.commutator_defect_elsewhere <= 1e-12;
    }
    Output::new(text, &reports, csv, if ok { EXIT_OK } else { EXIT_VIOLATION })
}

fn cmd_rdiff(args: &RdiffArgs) -> Result<Output> {
    let n = args.n;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let v = args
        .v
        .clone()
        .unwrap_or_else(|| (0..n).map(|_| rng.random_range(0.0..2.0)).collect());
    let fp = args
        .fprime
        .clone()
        .unwrap_or_else(|| (0..n).map(|_| rng.random_range(-50.0..50.0)).collect());
    let rep = reaction_diffusion_check(n, &v, &fp)?;
    let text = format!(
        "rdiff N={}: w_A(T) {} <= w_A(Lap) {} + sup|f'| {} = {}  slack {} holds {}\n",
        n,
        sig6(rep.lhs),
        sig6(rep.w_laplacian),
        sig6(rep.sup_fprime),
        sig6(rep.rhs),
        sig6(rep.slack),
        yes_no(rep.holds)
    );
    let csv = format!(
        "n,lhs,w_laplacian,sup_fprime,rhs,slack,holds\n{},{},{},{},{},{},{}\n",
        n, rep.lhs, rep.w_laplacian, rep.sup_fprime, rep.rhs, rep.slack, rep.holds
    );
    Output::new(text, &rep, csv, if rep.holds { EXIT_OK } else { EXIT_VIOLATION })
}

fn dispatch(cli: &Cli, format: Format) -> Result<Output> {
    match &cli.command {
        Command::Verify(a) => cmd_verify(a, format == Format::Csv),
        Command::PaperExamples => cmd_paper_examples(),
        Command::Bound(a) => cmd_bound(a),
        Command::Lemma(a) => cmd_lemma(a),
        Command::Sturm(a) => cmd_sturm(a),
        Command::Spin(a) => cmd_spin(a),
        Command::Fock(a) => cmd_fock(a),
        Command::Rdiff(a) => cmd_rdiff(a),
    }
}

fn render(out: &Output, format: Format) -> String {
    match format {
        Format::Text => out.text.clone(),
        Format::Csv => out.csv.clone(),
        Format::Json => serde_json::to_string_pretty(&out.json).expect("values serialize") + "\n",
    }
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    let format = cli
        .format
        .unwrap_or(if cli.out.is_some() { Format::Json } else { Format::Text });
    let out = match dispatch(&cli, format) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = fs::write(path, render(&out, format)) {
                let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                return EXIT_USAGE;
            }
            let _ = stdout.write_all(out.text.as_bytes());
        }
        None => {
            let _ = stdout.write_all(render(&out, format).as_bytes());
        }
    }
    out.code
}
