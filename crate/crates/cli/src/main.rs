//! `hli`: batch front end. Exit 0 when the checked property holds, 1 when it
//! fails or a countermodel is found, 2 on bad input.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use hli_core::eval::{eval_closed_with, EvalOptions};
use hli_core::io::{load_approx_system, load_model, load_pool, load_proof, model_to_json};
use hli_core::parser::{parse_formula, parse_formula_inferred};
use hli_core::rational::Rational01;
use hli_core::satisfaction::{
    check_elementary_substructure, check_weak_negation, hasat, hsat_with, qeq_holds, validate_approximation_system,
    ApproxViolation, ApproximationSystem, LevelConfig, LevelSpec, WeakNegation, WeakNegationViolation,
};
use hli_core::syntax::{congruence_axioms, Formula, Relation};
use hli_core::validation::generate::generate_models;
use hli_core::validation::{
    check_abstract_logic_properties, check_proof, find_countermodel, validate_axiom, AxiomId,
    ModelGenSpec, Signature, DEFAULT_INSTANCES,
};
use hli_core::wpm::{check_semantic_integral_laws, FuzzySubset, LawReport, WeakProbModel};
use hli_core::Valuation;

#[derive(Parser)]
#[command(name = "hli", version, about = "Evaluate and validate formulas of the logic of integrals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
enum Output {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum RelationArg {
    Eq,
    Approx,
}

#[derive(Args, Default)]
struct Common {
    /// Model file; repeatable.
    #[arg(long = "model", global = true)]
    models: Vec<PathBuf>,
    #[arg(long, global = true, conflicts_with = "formula_file")]
    formula: Option<String>,
    #[arg(long, global = true)]
    formula_file: Option<PathBuf>,
    #[arg(long, global = true)]
    approx_system: Option<PathBuf>,
    /// Comma-separated levels in (0, 1), or `auto`.
    #[arg(long, global = true)]
    levels: Option<String>,
    /// Level pairs `i:j,...` (0-based), or `diagonal`.
    #[arg(long, global = true)]
    pairs: Option<String>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true)]
    size: Option<usize>,
    /// Comma-separated value grid, e.g. `0,1/4,1/2,3/4,1`.
    #[arg(long, global = true)]
    grid: Option<String>,
    #[arg(long, global = true, conflicts_with = "exhaustive")]
    count: Option<usize>,
    #[arg(long, global = true)]
    exhaustive: bool,
    #[arg(long, global = true)]
    pool: Option<PathBuf>,
    #[arg(long, global = true)]
    proof: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    output: Output,
}

#[derive(Subcommand)]
enum Command {
    /// Print the exact truth value of a sentence.
    Eval,
    /// Decide H-satisfaction (value 1).
    Sat,
    /// Decide approximate satisfaction in an approximation system.
    ApproxSat,
    /// Decide a quantifier equality such as `INT P(x) dx = INT Q(y) dy`.
    Qeq,
    ValidateAxioms {
        /// mu1..mu5; all axioms when omitted.
        #[arg(long)]
        axiom: Option<String>,
        #[arg(long, default_value_t = DEFAULT_INSTANCES)]
        instances: usize,
    },
    ValidateIntegralLaws {
        /// Random fuzzy subsets per model when not exhaustive.
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    ValidateApproxSystem,
    CheckWeakNegation {
        /// JSON object mapping sentences to their weak negations; `~` when omitted.
        #[arg(long)]
        negation: Option<PathBuf>,
    },
    /// First `--model` is the candidate substructure of the second.
    CheckSubstructure,
    CheckProof,
    FindCountermodel {
        /// Identifiers to read as constants in the formula.
        #[arg(long, value_delimiter = ',')]
        constants: Vec<String>,
    },
    CheckClosure,
    GenModels {
        #[command(flatten)]
        signature: SignatureArgs,
    },
    Congruence {
        #[arg(long, value_enum)]
        relation: RelationArg,
        #[command(flatten)]
        signature: SignatureArgs,
    },
}

#[derive(Args)]
struct SignatureArgs {
    /// e.g. `P/1,R/2`
    #[arg(long, default_value = "")]
    predicates: String,
    /// e.g. `f/1`
    #[arg(long, default_value = "")]
    functions: String,
    /// e.g. `c,d`
    #[arg(long, default_value = "")]
    constant_symbols: String,
}

enum Verdict {
    Holds,
    Fails,
}

impl From<bool> for Verdict {
    fn from(b: bool) -> Self {
        if b {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Verdict::Holds) => ExitCode::SUCCESS,
        Ok(Verdict::Fails) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<Verdict> {
    let c = &cli.common;
    match &cli.command {
        Command::Eval => cmd_eval(c),
        Command::Sat => cmd_sat(c),
        Command::ApproxSat => cmd_approx_sat(c),
        Command::Qeq => cmd_qeq(c),
        Command::ValidateAxioms { axiom, instances } => cmd_validate_axioms(c, axiom.as_deref(), *instances),
        Command::ValidateIntegralLaws { samples } => cmd_integral_laws(c, *samples),
        Command::ValidateApproxSystem => cmd_approx_system(c),
        Command::CheckWeakNegation { negation } => cmd_weak_negation(c, negation.as_deref()),
        Command::CheckSubstructure => cmd_substructure(c),
        Command::CheckProof => cmd_proof(c),
        Command::FindCountermodel { constants } => cmd_countermodel(c, constants),
        Command::CheckClosure => cmd_closure(c),
        Command::GenModels { signature } => cmd_gen_models(c, signature),
        Command::Congruence { relation, signature } => cmd_congruence(c, *relation, signature),
    }
}

fn emit(c: &Common, text: impl AsRef<str>, value: Value) {
    match c.output {
        Output::Text => println!("{}", text.as_ref()),
        Output::Json => println!("{}", serde_json::to_string_pretty(&value).expect("serializable")),
    }
}

fn compact(v: &Value) -> String {
    serde_json::to_string(v).expect("serializable")
}

// ---- flag handling ----

fn models(c: &Common) -> Result<Vec<WeakProbModel>> {
    if c.models.is_empty() {
        bail!("--model is required");
    }
    c.models.iter().map(|p| load_model(p).with_context(|| format!("--model {}", p.display()))).collect()
}

fn one_model(c: &Common) -> Result<WeakProbModel> {
    let mut ms = models(c)?;
    if ms.len() != 1 {
        bail!("--model: expected exactly one model, got {}", ms.len());
    }
    Ok(ms.remove(0))
}

fn formula_text(c: &Common) -> Result<String> {
    match (&c.formula, &c.formula_file) {
        (Some(f), _) => Ok(f.clone()),
        (None, Some(p)) => {
            std::fs::read_to_string(p).map(|s| s.trim().to_owned()).with_context(|| format!("--formula-file {}", p.display()))
        }
        (None, None) => bail!("--formula or --formula-file is required"),
    }
}

fn formula_for(c: &Common, model: &WeakProbModel) -> Result<Formula> {
    let text = formula_text(c)?;
    parse_formula(&text, &model.vocabulary()).map_err(|e| anyhow!("--formula: {e}"))
}

fn constants_of(models: &[WeakProbModel]) -> BTreeSet<String> {
    models.iter().flat_map(|m| m.constant_map().keys().cloned()).collect()
}

fn approx_system(c: &Common, constants: &BTreeSet<String>) -> Result<Option<ApproximationSystem>> {
    c.approx_system
        .as_ref()
        .map(|p| load_approx_system(p, constants).with_context(|| format!("--approx-system {}", p.display())))
        .transpose()
}

fn pool(c: &Common, constants: &BTreeSet<String>) -> Result<Vec<Formula>> {
    let p = c.pool.as_ref().ok_or_else(|| anyhow!("--pool is required"))?;
    load_pool(p, constants).with_context(|| format!("--pool {}", p.display()))
}

fn rational_list(flag: &str, text: &str) -> Result<Vec<Rational01>> {
    text.split(',')
        .map(|s| s.trim().parse::<Rational01>().map_err(|e| anyhow!("{flag}: `{}`: {e}", s.trim())))
        .collect()
}

fn levels(c: &Common) -> Result<LevelSpec> {
    let levels = match c.levels.as_deref().map(str::trim) {
        None | Some("auto") => {
            if c.pairs.as_deref().is_some_and(|p| p.trim() != "diagonal") {
                bail!("--pairs needs explicit --levels");
            }
            return Ok(LevelSpec::Auto);
        }
        Some(text) => rational_list("--levels", text)?,
    };
    let cfg = match c.pairs.as_deref().map(str::trim) {
        None | Some("diagonal") => LevelConfig::diagonal(levels),
        Some(text) => {
            let pairs = text
                .split(',')
                .map(|p| {
                    let (i, j) = p.split_once(':').ok_or_else(|| anyhow!("--pairs: `{p}` is not `i:j`"))?;
                    let idx = |s: &str| s.trim().parse::<usize>().map_err(|e| anyhow!("--pairs: `{p}`: {e}"));
                    Ok((idx(i)?, idx(j)?))
                })
                .collect::<Result<Vec<_>>>()?;
            LevelConfig::new(levels, pairs)
        }
    };
    Ok(LevelSpec::Fixed(cfg.map_err(|e| anyhow!("--levels/--pairs: {e}"))?))
}

fn eval_options(c: &Common) -> Result<EvalOptions> {
    Ok(EvalOptions { levels: levels(c)?, ..Default::default() })
}

fn gen_spec(c: &Common, default_size: usize) -> Result<ModelGenSpec> {
    let size = c.size.unwrap_or(default_size);
    let mut spec = if c.exhaustive {
        ModelGenSpec::exhaustive(size)
    } else {
        ModelGenSpec::random(size, c.count.unwrap_or(100), c.seed)
    };
    spec.seed = c.seed;
    if let Some(g) = &c.grid {
        spec = spec.with_grid(rational_list("--grid", g)?);
    }
    spec.validate().map_err(|e| anyhow!("--size/--grid: {e}"))?;
    Ok(spec)
}

fn arity_list(flag: &str, text: &str) -> Result<Vec<(String, usize)>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            let (n, a) = s.split_once('/').ok_or_else(|| anyhow!("{flag}: `{s}` is not `name/arity`"))?;
            Ok((n.trim().to_owned(), a.trim().parse().map_err(|e| anyhow!("{flag}: `{s}`: {e}"))?))
        })
        .collect()
}

fn signature(args: &SignatureArgs) -> Result<Signature> {
    let constants =
        args.constant_symbols.split(',').map(str::trim).filter(|s| !s.is_empty()).map(str::to_owned).collect();
    let sig = Signature {
        predicates: arity_list("--predicates", &args.predicates)?,
        functions: arity_list("--functions", &args.functions)?,
        constants,
    };
    let mut voc = hli_core::Vocabulary::with_flags(true, false);
    for (p, a) in &sig.predicates {
        voc.add_predicate(p, *a).map_err(|e| anyhow!("--predicates: {e}"))?;
    }
    for (f, a) in &sig.functions {
        voc.add_function(f, *a).map_err(|e| anyhow!("--functions: {e}"))?;
    }
    for k in &sig.constants {
        voc.add_constant(k).map_err(|e| anyhow!("--constant-symbols: {e}"))?;
    }
    Ok(sig)
}

// ---- commands ----

fn cmd_eval(c: &Common) -> Result<Verdict> {
    let m = one_model(c)?;
    let f = formula_for(c, &m)?;
    let v = eval_closed_with(&f, &m, &eval_options(c)?)?;
    emit(c, v.to_string(), json!({ "formula": f.to_string(), "value": v }));
    Ok(Verdict::Holds)
}

fn cmd_sat(c: &Common) -> Result<Verdict> {
    let m = one_model(c)?;
    let f = formula_for(c, &m)?;
    let opts = eval_options(c)?;
    let sat = hsat_with(&f, &m, &opts)?;
    let value = eval_closed_with(&f, &m, &opts)?;
    let text = if sat { "H-SAT".to_owned() } else { format!("NOT H-SAT (value {value})\nmodel: {}", compact(&model_to_json(&m))) };
    emit(c, text, json!({ "formula": f.to_string(), "hsat": sat, "value": value, "model": model_to_json(&m) }));
    Ok(sat.into())
}

fn cmd_approx_sat(c: &Common) -> Result<Verdict> {
    let m = one_model(c)?;
    let f = formula_for(c, &m)?;
    let sys = approx_system(c, &constants_of(std::slice::from_ref(&m)))?
        .ok_or_else(|| anyhow!("--approx-system is required"))?;
    let sat = hasat(&f, &m, &sys)?;
    let failing: Vec<String> = match sys.index_of(&f) {
        Some(i) if !sat => sys
            .approximations(i)
            .filter(|&j| hsat_with(&sys.sentences()[j], &m, &EvalOptions::default()) == Ok(false))
            .map(|j| sys.sentences()[j].to_string())
            .collect(),
        _ => Vec::new(),
    };
    let text = if sat {
        "HA-SAT".to_owned()
    } else {
        format!("NOT HA-SAT\nunsatisfied approximations: {}\nmodel: {}", failing.join("; "), compact(&model_to_json(&m)))
    };
    emit(c, text, json!({ "formula": f.to_string(), "hasat": sat, "unsatisfied": failing, "model": model_to_json(&m) }));
    Ok(sat.into())
}

fn cmd_qeq(c: &Common) -> Result<Verdict> {
    let m = one_model(c)?;
    let f = formula_for(c, &m)?;
    let Formula::QEq(l, r) = &f else {
        bail!("--formula: expected a quantifier equality `A = B`, got `{f}`");
    };
    let holds = qeq_holds(l, r, &m, &Valuation::new(), &eval_options(c)?)?;
    let text = if holds { "QEQ HOLDS".to_owned() } else { format!("QEQ FAILS\nmodel: {}", compact(&model_to_json(&m))) };
    emit(c, text, json!({ "formula": f.to_string(), "holds": holds, "model": model_to_json(&m) }));
    Ok(holds.into())
}

fn cmd_validate_axioms(c: &Common, axiom: Option<&str>, instances: usize) -> Result<Verdict> {
    let axioms: Vec<AxiomId> = match axiom {
        Some(a) => vec![a.parse().map_err(|e| anyhow!("--axiom: {e}"))?],
        None => AxiomId::ALL.to_vec(),
    };
    let spec = gen_spec(c, 2)?;
    let mut ok = true;
    let mut lines = Vec::new();
    let mut records = Vec::new();
    for a in axioms {
        let r = validate_axiom(a, &spec, instances)?;
        ok &= r.passed();
        lines.push(format!("{a}: {} violations ({} checks over {} models)", r.violation_count, r.checks, r.models));
        for v in &r.violations {
            lines.push(format!("  witness: {}", compact(&v.to_json())));
        }
        if let Some(w) = &r.equality_witness {
            lines.push(format!("  {} strict instances, e.g. {}", r.equality_failures, compact(&w.to_json())));
        }
        records.push(json!({
            "axiom": a.name(),
            "models": r.models,
            "checks": r.checks,
            "violation_count": r.violation_count,
            "violations": r.violations.iter().map(|v| v.to_json()).collect::<Vec<_>>(),
            "equality_failures": r.equality_failures,
            "equality_witness": r.equality_witness.as_ref().map(|w| w.to_json()),
        }));
    }
    emit(c, lines.join("\n"), Value::Array(records));
    Ok(ok.into())
}

fn all_subsets(grid: &[Rational01], arity: usize, n: usize) -> Vec<FuzzySubset> {
    let cells = n.pow(arity as u32);
    let mut out: Vec<Vec<Rational01>> = vec![Vec::new()];
    for _ in 0..cells {
        out = out.into_iter().flat_map(|p| grid.iter().map(move |v| [p.clone(), vec![v.clone()]].concat())).collect();
    }
    out.into_iter().map(|v| FuzzySubset::new(arity, n, v).expect("full table")).collect()
}

fn cmd_integral_laws(c: &Common, samples: usize) -> Result<Verdict> {
    if !c.models.is_empty() {
        bail!("--model is not used by validate-integral-laws; use --size and --grid");
    }
    let spec = gen_spec(c, 2)?;
    let grid = &spec.value_grid;
    let n = spec.size;
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let (pairs, hs) = if c.exhaustive {
        let cells = grid.len().checked_pow((n * n) as u32).unwrap_or(usize::MAX);
        if cells > 100_000 {
            bail!("--size/--grid: {cells} bivariate subsets is too many for an exhaustive check");
        }
        let unary = all_subsets(grid, 1, n);
        let pairs: Vec<_> = unary.iter().flat_map(|f| unary.iter().map(move |g| (f.clone(), g.clone()))).collect();
        (pairs, all_subsets(grid, 2, n))
    } else {
        let mut pick = |cells: usize| -> Vec<Rational01> { (0..cells).map(|_| grid[rng.gen_range(0..grid.len())].clone()).collect() };
        let pairs: Vec<_> = (0..samples).map(|_| (FuzzySubset::unary(pick(n)), FuzzySubset::unary(pick(n)))).collect();
        let hs: Vec<_> = (0..samples).map(|_| FuzzySubset::new(2, n, pick(n * n)).expect("full table")).collect();
        (pairs, hs)
    };
    let mut total = LawReport::default();
    let mut witness = None;
    let models: Vec<WeakProbModel> = generate_models(&spec, &Signature::default())?.collect();
    for m in &models {
        let r = check_semantic_integral_laws(m, &pairs, &hs);
        if witness.is_none() && !r.passed() {
            witness = Some(model_to_json(m));
        }
        total.merge(r);
    }
    let mut lines: Vec<String> =
        total.checks.iter().map(|(law, k)| format!("{}: {k} checks", law.name())).collect();
    lines.push(format!("{} violations over {} models", total.violations.len(), models.len()));
    if let Some(v) = total.first_violation() {
        lines.push(format!("witness: law {} on {}: {} vs {}", v.law.name(), v.witness, v.lhs, v.rhs));
        lines.push(format!("model: {}", compact(witness.as_ref().expect("set with the violation"))));
    }
    let checks: BTreeMap<&str, usize> = total.checks.iter().map(|(l, k)| (l.name(), *k)).collect();
    let violations: Vec<Value> = total
        .violations
        .iter()
        .map(|v| json!({ "kind": "violation", "law": v.law.name(), "instantiation": v.witness, "lhs": v.lhs, "rhs": v.rhs }))
        .collect();
    emit(
        c,
        lines.join("\n"),
        json!({ "models": models.len(), "checks": checks, "violations": violations, "model": witness,
                "strict_implication": total.strict_implication }),
    );
    Ok(total.passed().into())
}

fn describe_approx(sys: &ApproximationSystem, v: &ApproxViolation) -> String {
    let s = |i: &usize| sys.sentences()[*i].to_string();
    match v {
        ApproxViolation::Transitivity { i, j, k } => format!("transitivity: {} < {} < {} but not {0} < {2}", s(i), s(j), s(k)),
        ApproxViolation::VocabularyClosure { model, i, j } => {
            format!("vocabulary closure (model {model}): `{}` is in the language, `{}` is not", s(i), s(j))
        }
        ApproxViolation::Monotonicity { model, i, j } => {
            format!("monotonicity (model {model}): `{}` holds, its approximation `{}` does not", s(i), s(j))
        }
        ApproxViolation::Evaluation { model, sentence, message } => format!("model {model}, `{}`: {message}", s(sentence)),
    }
}

fn cmd_approx_system(c: &Common) -> Result<Verdict> {
    let ms = models(c)?;
    let sys = approx_system(c, &constants_of(&ms))?.ok_or_else(|| anyhow!("--approx-system is required"))?;
    let report = validate_approximation_system(&sys, &ms);
    let mut lines = vec![format!("{} violations over {} models", report.violations.len(), report.models)];
    lines.extend(report.violations.iter().map(|v| format!("  {}", describe_approx(&sys, v))));
    let descs: Vec<String> = report.violations.iter().map(|v| describe_approx(&sys, v)).collect();
    emit(c, lines.join("\n"), json!({ "models": report.models, "valid": report.valid(), "violations": descs }));
    Ok(report.valid().into())
}

fn cmd_weak_negation(c: &Common, negation: Option<&Path>) -> Result<Verdict> {
    let ms = models(c)?;
    let consts = constants_of(&ms);
    let pool = pool(c, &consts)?;
    let sys = approx_system(c, &consts)?.unwrap_or_else(|| ApproximationSystem::diagonal(pool.clone()));
    let neg = match negation {
        None => WeakNegation::Standard,
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("--negation {}", p.display()))?;
            let raw: BTreeMap<String, String> =
                serde_json::from_str(&text).with_context(|| format!("--negation {}", p.display()))?;
            let parse = |t: &str| {
                parse_formula_inferred(t, &consts).map(|r| r.0).map_err(|e| anyhow!("--negation {}: `{t}`: {e}", p.display()))
            };
            WeakNegation::Explicit(raw.iter().map(|(k, v)| Ok((parse(k)?, parse(v)?))).collect::<Result<_>>()?)
        }
    };
    let report = check_weak_negation(&neg, &pool, &sys, &ms);
    let describe = |v: &WeakNegationViolation| match v {
        WeakNegationViolation::NotTotal { sentence } => format!("no weak negation given for `{sentence}`"),
        WeakNegationViolation::Totality { model, sentence } => {
            format!("totality (model {model}): neither `{}` nor its negation holds; model: {}", pool[*sentence], compact(&model_to_json(&ms[*model])))
        }
        WeakNegationViolation::Exclusion { model, sentence, approximation } => format!(
            "exclusion (model {model}): `{}` and the negation of `{}` both hold; model: {}",
            pool[*sentence],
            sys.sentences()[*approximation],
            compact(&model_to_json(&ms[*model]))
        ),
        WeakNegationViolation::Evaluation { model, sentence, message } => format!("model {model}, `{}`: {message}", pool[*sentence]),
    };
    let descs: Vec<String> = report.violations.iter().map(describe).collect();
    let mut lines = vec![format!(
        "{} violations ({} totality, {} exclusion) over {} checks",
        report.violations.len(),
        report.totality_failures(),
        report.exclusion_failures(),
        report.checked
    )];
    lines.extend(descs.iter().map(|d| format!("  {d}")));
    emit(c, lines.join("\n"), json!({ "checked": report.checked, "passed": report.passed(), "violations": descs }));
    Ok(report.passed().into())
}

fn cmd_substructure(c: &Common) -> Result<Verdict> {
    let ms = models(c)?;
    let [small, large] = ms.as_slice() else {
        bail!("--model: expected two models (substructure first), got {}", ms.len());
    };
    let mut consts = constants_of(&ms);
    consts.extend(small.universe().iter().cloned());
    let pool = pool(c, &consts)?;
    let sys = approx_system(c, &consts)?.unwrap_or_else(|| ApproximationSystem::diagonal(pool.clone()));
    let holds = check_elementary_substructure(small, large, &pool, &sys)?;
    let text = if holds {
        "ELEMENTARY SUBSTRUCTURE".to_owned()
    } else {
        format!(
            "NOT AN ELEMENTARY SUBSTRUCTURE\nsmall: {}\nlarge: {}",
            compact(&model_to_json(small)),
            compact(&model_to_json(large))
        )
    };
    emit(c, text, json!({ "holds": holds }));
    Ok(holds.into())
}

fn cmd_proof(c: &Common) -> Result<Verdict> {
    let p = c.proof.as_ref().ok_or_else(|| anyhow!("--proof is required"))?;
    let script = load_proof(p).with_context(|| format!("--proof {}", p.display()))?;
    let report = check_proof(&script);
    let text = match &report.error {
        None => format!("VALID ({} lines)", report.lines),
        Some(e) => format!("INVALID at line {}: {}", e.line, e.message),
    };
    let witnesses: BTreeMap<String, String> = report.axiom_witnesses.iter().map(|(l, w)| (l.to_string(), w.clone())).collect();
    emit(
        c,
        text,
        json!({ "lines": report.lines, "valid": report.valid(),
                "error": report.error.as_ref().map(|e| json!({ "line": e.line, "message": e.message })),
                "axiom_witnesses": witnesses }),
    );
    Ok(report.valid().into())
}

fn cmd_countermodel(c: &Common, constants: &[String]) -> Result<Verdict> {
    let text = formula_text(c)?;
    let consts: BTreeSet<String> = constants.iter().map(|s| s.trim().to_owned()).collect();
    let (f, _) = parse_formula_inferred(&text, &consts).map_err(|e| anyhow!("--formula: {e}"))?;
    let spec = gen_spec(c, 2)?;
    match find_countermodel(&f, &spec)? {
        None => {
            emit(c, "no countermodel found", json!({ "formula": f.to_string(), "countermodel": null }));
            Ok(Verdict::Holds)
        }
        Some(m) => {
            let v = eval_closed_with(&f, &m, &EvalOptions::default())?;
            let mj = model_to_json(&m);
            emit(
                c,
                format!("countermodel (value {v}): {}", compact(&mj)),
                json!({ "formula": f.to_string(), "value": v, "countermodel": mj }),
            );
            Ok(Verdict::Fails)
        }
    }
}

fn cmd_closure(c: &Common) -> Result<Verdict> {
    let p = c.pool.as_ref().ok_or_else(|| anyhow!("--pool is required"))?;
    let text = std::fs::read_to_string(p).with_context(|| format!("--pool {}", p.display()))?;
    let raw: Vec<String> = serde_json::from_str(&text).with_context(|| format!("--pool {}", p.display()))?;
    let mut pool = Vec::new();
    for (i, t) in raw.iter().enumerate() {
        let (f, _) = parse_formula_inferred(t, &BTreeSet::new()).map_err(|e| anyhow!("--pool {} entry {i}: {e}", p.display()))?;
        pool.push(f.close_with_constants());
    }
    let spec = gen_spec(c, 2)?;
    let report = check_abstract_logic_properties(&spec, &pool)?;
    let mut lines: Vec<String> = report.checks.iter().map(|(p, k)| format!("{p}: {k} checks")).collect();
    lines.push(format!("{} violations", report.violations.len()));
    let viol: Vec<Value> = report
        .violations
        .iter()
        .map(|v| json!({ "kind": v.property.to_string(), "sentence": v.sentence, "model": v.model, "lhs": v.expected, "rhs": v.found }))
        .collect();
    lines.extend(viol.iter().map(|v| format!("  witness: {}", compact(v))));
    let checks: BTreeMap<String, usize> = report.checks.iter().map(|(p, k)| (p.to_string(), *k)).collect();
    emit(c, lines.join("\n"), json!({ "checks": checks, "violations": viol }));
    Ok(report.passed().into())
}

fn cmd_gen_models(c: &Common, sig: &SignatureArgs) -> Result<Verdict> {
    let sig = signature(sig)?;
    let spec = gen_spec(c, 2)?;
    let models: Vec<Value> = generate_models(&spec, &sig)?.map(|m| model_to_json(&m)).collect();
    let text = models.iter().map(compact).collect::<Vec<_>>().join("\n");
    emit(c, text, Value::Array(models));
    Ok(Verdict::Holds)
}

fn cmd_congruence(c: &Common, relation: RelationArg, sig: &SignatureArgs) -> Result<Verdict> {
    let sig = signature(sig)?;
    let (rel, approx) = match relation {
        RelationArg::Eq => (Relation::Eq, false),
        RelationArg::Approx => (Relation::Approx, true),
    };
    let mut voc = sig.vocabulary();
    voc.has_eq = true;
    voc.has_approx = approx;
    let axioms = congruence_axioms(&voc, rel).map_err(|e| anyhow!("--relation: {e}"))?;
    let texts: Vec<String> = axioms.iter().map(|a| a.to_string()).collect();
    emit(c, texts.join("\n"), json!(texts));
    Ok(Verdict::Holds)
}
