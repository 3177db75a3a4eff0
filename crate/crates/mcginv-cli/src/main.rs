//! `mcginv`: batch entry points over algebra bundles.
//!
//! Exit status 0 when every requested check passes, 1 on the first failing
//! check (named on stderr), 2 on I/O or format errors.

mod objects;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use cyclo::CycScalar;
use linmap::LinMap;
use mcginv::bundle::{load_matrix, Bundle};
use mcginv::coend::HandleK;
use mcginv::examples::{automorphism_from_group_aut, certify, drinfeld_double_cyclic};
use mcginv::frobenius::FrobeniusF;
use mcginv::mcg::{invariance_suite, pq_invariance_suite, GeneratorResult, McgContext, SuiteOptions, DEFAULT_BUDGET};
use mcginv::ribbon::{identity_suite, verify_integrals, verify_quasitriangular, verify_ribbon, verify_ribbon_automorphism};
use mcginv::{McgError, Report, RibbonData};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "mcginv", version, about = "Exact mapping class group invariants from factorizable ribbon Hopf algebras")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Write the JSON report here.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Record wall-clock times in the JSON report (off keeps reports byte-identical).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
enum Cmd {
    /// Hopf axioms, then quasitriangular, ribbon and integral checks when R is present.
    VerifyHopf(VerifyArgs),
    /// Derived ribbon data: Q, u, v, pivot, integrals.
    Derive(AlgebraArgs),
    /// The exact identity suite.
    IdentitySuite(AlgebraArgs),
    /// Frobenius structure on F, or F^ω.
    BuildF(OmegaArgs),
    /// S_K, T_K and the SL(2,Z) scalars.
    Sl2z(AlgebraArgs),
    /// Evaluates a diagram expression over the structure maps of H.
    Eval(EvalArgs),
    /// Basis of the intertwiner space between two bimodule expressions.
    Hom(HomArgs),
    /// Builds Cor_{g,n} or Corr_{g,p,q}.
    Correlator(CorrArgs),
    /// Invariance of the correlator under every generator.
    McgCheck(McgArgs),
    /// Writes a certified example bundle.
    GenExample(GenArgs),
}

#[derive(Args, Debug, Serialize)]
struct AlgebraArgs {
    #[arg(long)]
    algebra: PathBuf,
}

#[derive(Args, Debug, Serialize)]
struct VerifyArgs {
    /// Bundle file (or use --algebra).
    file: Option<PathBuf>,
    #[arg(long)]
    algebra: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct OmegaArgs {
    #[arg(long)]
    algebra: PathBuf,
    /// Ribbon automorphism as a matrix file.
    #[arg(long)]
    omega: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct EvalArgs {
    #[arg(long)]
    algebra: PathBuf,
    #[arg(long)]
    expr: String,
}

#[derive(Args, Debug, Serialize)]
struct HomArgs {
    #[arg(long)]
    algebra: PathBuf,
    #[arg(long)]
    src: String,
    #[arg(long)]
    dst: String,
}

#[derive(Args, Debug, Serialize)]
struct CorrArgs {
    #[arg(long)]
    algebra: PathBuf,
    #[arg(long)]
    g: usize,
    #[arg(long, default_value_t = 0)]
    n: usize,
    #[arg(long, requires = "q")]
    p: Option<usize>,
    #[arg(long, requires = "p")]
    q: Option<usize>,
    #[arg(long)]
    omega: Option<PathBuf>,
    /// Write the correlator matrix here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct McgArgs {
    #[arg(long)]
    algebra: PathBuf,
    #[arg(long)]
    g: usize,
    #[arg(long, default_value_t = 0)]
    n: usize,
    #[arg(long, requires = "q")]
    p: Option<usize>,
    #[arg(long, requires = "p")]
    q: Option<usize>,
    #[arg(long)]
    omega: Option<PathBuf>,
    /// Rerun everything with (λ, Λ) replaced by (-λ, -Λ).
    #[arg(long)]
    both_signs: bool,
    /// Sample t_{j,k} and e_m regardless of the budget.
    #[arg(long)]
    sample_tjk: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 2)]
    samples: usize,
    /// Bound on dim(K)^g for exhaustive checks.
    #[arg(long, env = "MCGINV_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: usize,
}

#[derive(Args, Debug, Serialize)]
struct GenArgs {
    #[arg(long, default_value = "double-cyclic")]
    family: String,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    out: PathBuf,
    /// Also write the automorphism induced by x ↦ a·x on Z/k.
    #[arg(long, requires = "omega_out")]
    omega_a: Option<i64>,
    #[arg(long)]
    omega_out: Option<PathBuf>,
}

#[derive(Serialize)]
struct GeneratorRow {
    label: String,
    indices: Vec<usize>,
    status: String,
    #[serde(rename = "max-entry-deviation")]
    deviation: String,
    #[serde(rename = "wall-time")]
    wall_time_ms: Option<u128>,
}

#[derive(Serialize)]
struct RunReport<'a> {
    config: &'a Cmd,
    status: &'static str,
    first_failure: Option<String>,
    reports: Vec<Report>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    generators: Vec<GeneratorRow>,
    results: Value,
}

/// What a command produced before the verdict is formed.
#[derive(Default)]
struct Output {
    reports: Vec<Report>,
    generators: Vec<(String, Vec<GeneratorResult>)>,
    results: serde_json::Map<String, Value>,
    lines: Vec<String>,
}

impl Output {
    fn put(&mut self, key: &str, v: impl Serialize) {
        self.results.insert(key.into(), serde_json::to_value(v).expect("serializable"));
    }
}

fn exit_code(e: &McgError) -> u8 {
    match e {
        McgError::Io(_)
        | McgError::Format(_)
        | McgError::Syntax { .. }
        | McgError::UnknownToken { .. }
        | McgError::UnboundIdentifier(_)
        | McgError::ShapeMismatch(_) => 2,
        _ => 1,
    }
}

fn ribbon(path: &Path) -> Result<RibbonData, McgError> {
    Bundle::load(path)?.ribbon()
}

fn context(path: &Path, omega: Option<&Path>) -> Result<(McgContext, Option<LinMap>), McgError> {
    let rd = ribbon(path)?;
    let w = omega.map(load_matrix).transpose()?;
    Ok((McgContext::new(rd, w.as_ref())?, w))
}

fn verify_hopf(a: &VerifyArgs, out: &mut Output) -> Result<(), McgError> {
    let path = a.file.as_ref().or(a.algebra.as_ref()).ok_or_else(|| McgError::Format("no bundle file given".into()))?;
    let b = Bundle::load(path)?;
    let h = b.hopf()?;
    let rep = h.verify_hopf();
    let ok = rep.passed();
    out.reports.push(rep);
    let Some(r) = b.r.as_ref().filter(|_| ok) else {
        return Ok(());
    };
    let rq = verify_quasitriangular(&h, r);
    let ok = rq.passed();
    out.reports.push(rq);
    if !ok {
        return Ok(());
    }
    let rd = b.ribbon()?;
    let mut rr = verify_ribbon(&rd);
    rr.flag("factorizable", rd.factorizable, None);
    rr.flag("integrals normalized", rd.normalized, None);
    out.reports.push(rr);
    out.reports.push(verify_integrals(&rd));
    Ok(())
}

fn derive(a: &AlgebraArgs, out: &mut Output) -> Result<(), McgError> {
    let rd = ribbon(&a.algebra)?;
    let mut rep = Report::new(format!("derived data of {}", rd.base.name));
    rep.flag("factorizable", rd.factorizable, None);
    rep.flag("integrals normalized", rd.normalized, None);
    out.reports.push(rep);
    out.reports.push(verify_integrals(&rd));
    out.put("Q", &rd.q);
    out.put("u", &rd.u);
    out.put("v", &rd.v);
    out.put("t", &rd.t);
    out.put("Lambda", &rd.big_lambda);
    out.put("lambda", &rd.lambda);
    out.lines.push(format!("Λ = {}", show(&rd.big_lambda)));
    out.lines.push(format!("λ = {}", show(&rd.lambda)));
    Ok(())
}

fn show(v: &[CycScalar]) -> String {
    let parts: Vec<String> = v.iter().map(|c| c.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

fn identities(a: &AlgebraArgs, out: &mut Output) -> Result<(), McgError> {
    out.reports.push(identity_suite(&ribbon(&a.algebra)?));
    Ok(())
}

fn build_f(a: &OmegaArgs, out: &mut Output) -> Result<(), McgError> {
    let rd = ribbon(&a.algebra)?;
    let w = a.omega.as_deref().map(load_matrix).transpose()?;
    if let Some(w) = &w {
        let rep = verify_ribbon_automorphism(&rd, w)?;
        let ok = rep.passed();
        out.reports.push(rep);
        if !ok {
            return Ok(());
        }
    }
    let f = FrobeniusF::build(&rd, w.as_ref())?;
    out.reports.push(f.verify(&rd));
    let special = f.special_scalar();
    out.lines.push(format!(
        "m∘Δ = {} · id",
        special.as_ref().map_or("(not a multiple)".to_string(), |c| c.to_string())
    ));
    out.put("special", special);
    out.put("product", &f.m);
    out.put("coproduct", &f.delta);
    out.put("unit", &f.eta);
    out.put("counit", &f.eps);
    Ok(())
}

fn sl2z(a: &AlgebraArgs, out: &mut Output) -> Result<(), McgError> {
    let rd = ribbon(&a.algebra)?;
    let k = HandleK::build(&rd)?;
    out.reports.push(k.verify(&rd));
    let (c1, c2) = k.sl2z_scalars();
    let fmt = |c: &Option<CycScalar>| c.as_ref().map_or("none".to_string(), |c| c.to_string());
    out.lines.push(format!("(S T)^3 = {} · S^2", fmt(&c1)));
    out.lines.push(format!("S^2 T = {} · T S^2", fmt(&c2)));
    out.put("c1", c1);
    out.put("c2", c2);
    out.put("S_K", &k.s);
    out.put("T_K", &k.t);
    Ok(())
}

fn eval(a: &EvalArgs, out: &mut Output) -> Result<(), McgError> {
    let rd = ribbon(&a.algebra)?;
    let f = rd.context().eval_str(&a.expr)?;
    match f.as_scalar() {
        Some(c) => out.lines.push(c.to_string()),
        None => {
            out.lines.push(format!("{} <- {}", f.cod(), f.dom()));
            for row in f.to_rows() {
                out.lines.push(show(&row));
            }
        }
    }
    out.put("value", &f);
    Ok(())
}

fn hom(a: &HomArgs, out: &mut Output) -> Result<(), McgError> {
    let rd = ribbon(&a.algebra)?;
    let x = objects::parse_object(&rd, &a.src)?;
    let y = objects::parse_object(&rd, &a.dst)?;
    let basis = mcginv::bimod::hom_space(&x, &y)?;
    out.lines.push(format!("dim Hom({}, {}) = {}", x.name, y.name, basis.len()));
    let mut rep = Report::new(format!("Hom({}, {})", x.name, y.name));
    let all = basis.iter().all(|f| x.is_intertwiner(&y, f));
    rep.flag("basis elements intertwine", all, None);
    out.reports.push(rep);
    out.put("dimension", basis.len());
    out.put("basis", &basis);
    Ok(())
}

fn correlator(a: &CorrArgs, out: &mut Output) -> Result<(), McgError> {
    let (ctx, _) = context(&a.algebra, a.omega.as_deref())?;
    let (cor, target, label) = match (a.p, a.q) {
        (Some(p), Some(q)) => (ctx.corr(a.g, p, q), ctx.f_power(p), format!("Corr_{{{},{},{}}}", a.g, p, q)),
        _ => (ctx.cor(a.g, a.n), ctx.f_power(a.n), format!("Cor_{{{},{}}}", a.g, a.n)),
    };
    let source = match (a.p, a.q) {
        (Some(_), Some(q)) => {
            let kg = ctx.k_power(a.g);
            mcginv::bimod::tensor(&ctx.rd.base, &kg, &ctx.f_power(q))?
        }
        _ => ctx.k_power(a.g),
    };
    let mut rep = Report::new(format!("{label} over {}", ctx.rd.base.name));
    rep.flag("intertwiner", source.is_intertwiner(&target, &cor), None);
    rep.flag("nonzero", !cor.is_zero(), None);
    out.reports.push(rep);
    out.lines.push(format!("{label}: {} <- {}, {} nonzero entries", cor.cod(), cor.dom(), cor.nnz()));
    if let Some(path) = &a.out {
        std::fs::write(path, serde_json::to_string(&cor)?)?;
    }
    out.put("shape", json!({"codomain": cor.cod().legs(), "domain": cor.dom().legs()}));
    out.put("nnz", cor.nnz());
    Ok(())
}

fn mcg_check(a: &McgArgs, out: &mut Output) -> Result<(), McgError> {
    let (ctx, w) = context(&a.algebra, a.omega.as_deref())?;
    let budget = if a.sample_tjk { 0 } else { a.budget };
    let opts = SuiteOptions { budget, seed: a.seed, samples: a.samples };
    let run = |c: &McgContext| match (a.p, a.q) {
        (Some(p), Some(q)) => pq_invariance_suite(c, a.g, p, q, &opts),
        _ => invariance_suite(c, a.g, a.n, &opts),
    };
    let (rep, res) = run(&ctx);
    out.reports.push(rep);
    out.generators.push((String::new(), res));
    if let Some(w) = &w {
        if a.p.is_none() {
            let winv = linmap::inverse(w).map_err(|_| McgError::NotInvertible("automorphism".into()))?;
            let plain = McgContext::new(ctx.rd.clone(), None)?;
            let want = McgContext::twisted_from_plain(&plain, &winv, a.g, a.n)?;
            let mut r = Report::new("twisted correlator");
            r.eq("Cor^ω = Cor∘(id⊗(ω^-1)*)^g", &ctx.cor(a.g, a.n), &want);
            out.reports.push(r);
        }
    }
    if a.both_signs {
        let flipped = McgContext::new(ctx.rd.with_flipped_sign(), w.as_ref())?;
        let (mut rep, res) = run(&flipped);
        rep.title = format!("{} (flipped sign)", rep.title);
        out.reports.push(rep);
        out.generators.push(("flipped sign: ".into(), res));
    }
    Ok(())
}

fn gen_example(a: &GenArgs, out: &mut Output) -> Result<(), McgError> {
    if a.family != "double-cyclic" {
        return Err(McgError::Format(format!("unknown family {:?}; only double-cyclic ships", a.family)));
    }
    let ex = drinfeld_double_cyclic(a.k)?;
    let rd = certify(&ex)?;
    let mut rep = Report::new(format!("certification of {}", ex.hopf.name));
    rep.flag("certified", true, None);
    if let (Some(aa), Some(path)) = (a.omega_a, &a.omega_out) {
        let w = automorphism_from_group_aut(a.k, aa)?;
        let r = verify_ribbon_automorphism(&rd, &w)?;
        let ok = r.passed();
        rep.merge("automorphism", r);
        if ok {
            std::fs::write(path, serde_json::to_string(&w)?)?;
        }
    }
    out.reports.push(rep);
    std::fs::write(&a.out, Bundle::from_example(&ex).to_json_string())?;
    out.lines.push(format!("wrote {} (dim {})", a.out.display(), ex.hopf.n));
    Ok(())
}

fn finish(cli: &Cli, out: Output, res: Result<(), McgError>) -> ExitCode {
    if let Err(e) = res {
        eprintln!("error: {e}");
        return ExitCode::from(exit_code(&e));
    }
    let first_failure = out
        .reports
        .iter()
        .find_map(|r| r.first_failure().map(|c| c.name.clone()))
        .or_else(|| {
            out.generators
                .iter()
                .find_map(|(p, rs)| rs.iter().find(|r| r.status != "pass").map(|r| format!("{p}invariance under {}", r.label)))
        });
    for r in &out.reports {
        print!("{}", r.summary());
    }
    let mut rows = Vec::new();
    for (prefix, rs) in &out.generators {
        for r in rs {
            println!("  {}{:<8} {:<5} {:>6} ms  {}", prefix, r.label, r.status, r.millis, r.deviation);
            rows.push(GeneratorRow {
                label: format!("{prefix}{}", r.label),
                indices: r.indices.clone(),
                status: r.status.clone(),
                deviation: r.deviation.clone(),
                wall_time_ms: cli.timings.then_some(r.millis),
            });
        }
    }
    for l in &out.lines {
        println!("{l}");
    }
    let status = if first_failure.is_some() { "fail" } else { "pass" };
    if let Some(path) = &cli.report {
        let report = RunReport {
            config: &cli.cmd,
            status,
            first_failure: first_failure.clone(),
            reports: out.reports,
            generators: rows,
            results: Value::Object(out.results),
        };
        let text = serde_json::to_string_pretty(&report).expect("serializable") + "\n";
        if let Err(e) = std::fs::write(path, text) {
            eprintln!("error: cannot write report: {e}");
            return ExitCode::from(2);
        }
    }
    match first_failure {
        None => {
            println!("PASS");
            ExitCode::SUCCESS
        }
        Some(name) => {
            println!("FAIL: {name}");
            eprintln!("first failing check: {name}");
            ExitCode::from(1)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = Output::default();
    let start = Instant::now();
    let res = match &cli.cmd {
        Cmd::VerifyHopf(a) => verify_hopf(a, &mut out),
        Cmd::Derive(a) => derive(a, &mut out),
        Cmd::IdentitySuite(a) => identities(a, &mut out),
        Cmd::BuildF(a) => build_f(a, &mut out),
        Cmd::Sl2z(a) => sl2z(a, &mut out),
        Cmd::Eval(a) => eval(a, &mut out),
        Cmd::Hom(a) => hom(a, &mut out),
        Cmd::Correlator(a) => correlator(a, &mut out),
        Cmd::McgCheck(a) => mcg_check(a, &mut out),
        Cmd::GenExample(a) => gen_example(a, &mut out),
    };
    if cli.timings {
        out.put("wall-time", start.elapsed().as_millis());
    }
    finish(&cli, out, res)
}
