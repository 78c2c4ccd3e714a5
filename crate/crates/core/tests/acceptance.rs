//! Acceptance criteria 1-11. Runs without the test harness and prints one
//! PASS/FAIL line per criterion; the process fails if any criterion fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use hli_core::eval::{eval_closed, eval_closed_with, EvalOptions, QuantifierDomain};
use hli_core::io::proof_from_json;
use hli_core::parser::{parse_formula, print_formula};
use hli_core::rational::{default_grid, q, Rational01};
use hli_core::satisfaction::{
    hasat, hsat, hsat_qeq, hsat_qeq_dirac, level_set_condition, validate_approximation_system, ApproximationSystem,
    LevelConfig, LevelSpec, QeqError,
};
use hli_core::syntax::Formula;
use hli_core::validation::generate::{normalized_measures, random_model};
use hli_core::validation::{
    check_closure_pair, check_proof, random_valid_system, validate_axiom, AxiomId, ClosureReport, FormulaGen,
    Justification, ModelGenSpec, ProofScript, Signature, DEFAULT_INSTANCES,
};
use hli_core::wpm::{
    check_semantic_integral_laws, integral_dissection, integral_expectation, integral_layercake, integral_product,
    iterated_integral, FuzzySubset, WeakProbModel,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn names(n: &[&str]) -> Vec<String> {
    n.iter().map(|s| s.to_string()).collect()
}

fn parse(text: &str, m: &WeakProbModel) -> Result<Formula, String> {
    parse_formula(text, &m.vocabulary()).map_err(|e| format!("{text}: {e}"))
}

fn example_two() -> WeakProbModel {
    WeakProbModel::new(names(&["one", "two", "three"]), vec![q(1, 3); 3])
        .and_then(|m| m.predicate("Phi", 1, vec![q(1, 2), q(4, 5), q(1, 1)]))
        .and_then(|m| m.constant("c1", 0))
        .and_then(|m| m.constant("c2", 1))
        .and_then(|m| m.constant("c3", 2))
        .expect("valid model")
}

fn criterion_1() -> Outcome {
    let m = example_two();
    let ex = parse("EX x. Phi(x)", &m)?;
    let all = parse("ALL x. Phi(x)", &m)?;
    ensure(hsat(&ex, &m) == Ok(true), || "EX x. Phi(x) not H-satisfied".into())?;
    ensure(hsat(&all, &m) == Ok(false), || "ALL x. Phi(x) H-satisfied".into())?;
    let v = eval_closed(&all, &m).map_err(|e| e.to_string())?;
    ensure(v == q(1, 2), || format!("eval(ALL x. Phi(x)) = {v}"))?;
    let literal = EvalOptions { domain: QuantifierDomain::NamedConstants, ..Default::default() };
    let lv = eval_closed_with(&all, &m, &literal).map_err(|e| e.to_string())?;
    ensure(lv == q(1, 2), || format!("constant-restricted eval = {lv}"))?;
    Ok(format!("EX sat, ALL not sat, eval(ALL) = {v}"))
}

fn criterion_2() -> Outcome {
    let m = WeakProbModel::new(names(&["a"]), vec![q(1, 1)])
        .and_then(|m| m.predicate("Phi", 1, vec![q(9, 10)]))
        .and_then(|m| m.predicate("Psi", 1, vec![q(1, 1)]))
        .and_then(|m| m.constant("c", 0))
        .expect("valid model");
    let or = parse("Phi(c) \\/ Psi(c)", &m)?;
    let strong = parse("Phi(c) & Psi(c)", &m)?;
    let weak = parse("Phi(c) /\\ Psi(c)", &m)?;
    ensure(hsat(&or, &m) == Ok(true), || "disjunction not satisfied".into())?;
    ensure(hsat(&strong, &m) == Ok(false), || "strong conjunction satisfied".into())?;
    ensure(hsat(&weak, &m) == Ok(false), || "weak conjunction satisfied".into())?;
    let vs = eval_closed(&strong, &m).map_err(|e| e.to_string())?;
    let vw = eval_closed(&weak, &m).map_err(|e| e.to_string())?;
    ensure(vs == q(9, 10) && vw == q(9, 10), || format!("values {vs}, {vw}"))?;
    Ok("\\/ sat; & and /\\ at 9/10".into())
}

fn all_unary(grid: &[Rational01], n: usize) -> Vec<FuzzySubset> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<Rational01>| {
                grid.iter().map(move |v| {
                    let mut p = prefix.clone();
                    p.push(v.clone());
                    p
                })
            })
            .collect();
    }
    out.into_iter().map(FuzzySubset::unary).collect()
}

fn criterion_3() -> Outcome {
    let grid = default_grid();
    let unary = all_unary(&grid, 2);
    let pairs: Vec<(FuzzySubset, FuzzySubset)> =
        unary.iter().flat_map(|f| unary.iter().map(move |g| (f.clone(), g.clone()))).collect();
    let bivariate: Vec<FuzzySubset> = all_unary(&grid, 4)
        .into_iter()
        .map(|f| FuzzySubset::new(2, 2, f.values).expect("4 cells"))
        .collect();
    let mut models = 0;
    let mut checks = 0;
    let mut strict = 0;
    for measure in normalized_measures(&grid, 2) {
        let m = WeakProbModel::with_default_names(measure).expect("normalized");
        let report = check_semantic_integral_laws(&m, &pairs, &bivariate);
        if let Some(v) = report.first_violation() {
            return Err(format!("law {} violated: {} ({} vs {})", v.law.name(), v.witness, v.lhs, v.rhs));
        }
        models += 1;
        checks += report.checks.values().sum::<usize>();
        strict += report.strict_implication;
    }
    ensure(pairs.len() == 625, || format!("{} pairs", pairs.len()))?;
    ensure(strict > 0, || "no strict instance of the implication law".into())?;
    Ok(format!("{models} measures x 625 pairs, {checks} checks, 0 violations, {strict} strict implication instances"))
}

fn criterion_4() -> Outcome {
    let spec = ModelGenSpec::exhaustive(2);
    let mut parts = Vec::new();
    for a in AxiomId::ALL {
        let r = validate_axiom(a, &spec, DEFAULT_INSTANCES).map_err(|e| e.to_string())?;
        if let Some(v) = r.violations.first() {
            return Err(format!("{a}: {} violations, first {} ({} vs {})", r.violation_count, v.instantiation, v.lhs, v.rhs));
        }
        if a == AxiomId::Mu3 {
            let w = r.equality_witness.as_ref().ok_or("mu3: no equality-failure witness")?;
            parts.push(format!("{a} {} checks, {} strict (e.g. {} < {})", r.checks, r.equality_failures, w.lhs, w.rhs));
        } else {
            parts.push(format!("{a} {} checks", r.checks));
        }
    }
    Ok(parts.join("; "))
}

fn random_value(rng: &mut impl Rng) -> Rational01 {
    let d = rng.gen_range(1..=12);
    Rational01::from_ratio(rng.gen_range(0..=d), d).expect("n <= d")
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let spec = ModelGenSpec::random(3, 1, 5);
    let sig = Signature::predicates(&[("R", 2)]);
    let double = Formula::integral("y", Formula::integral("x", Formula::atom("R", vec![hli_core::Term::var("x"), hli_core::Term::var("y")])));
    for k in 0..1000 {
        let base = random_model(&mut rng, &spec, &sig);
        let values: Vec<Rational01> = (0..9).map(|_| random_value(&mut rng)).collect();
        let h = FuzzySubset::new(2, 3, values.clone()).expect("9 cells");
        let mut m = WeakProbModel::new(base.universe().to_vec(), base.measure().to_vec()).expect("valid");
        m.add_predicate("R", 2, values).expect("binary table");
        let a = iterated_integral(&h, &m, 0);
        let b = iterated_integral(&h, &m, 1);
        let sum = integral_product(&h, &m);
        let via_eval = eval_closed(&double, &m).map_err(|e| e.to_string())?;
        ensure(a == sum && b == sum && via_eval == sum, || format!("sample {k}: {a}, {b}, {sum}, {via_eval}"))?;
    }
    Ok("1000 samples, both orders equal the double sum".into())
}

fn criterion_6() -> Outcome {
    let grid = default_grid();
    let mut compared = 0usize;
    for n in 1..=4 {
        let subsets = all_unary(&grid, n);
        for measure in normalized_measures(&grid, n) {
            let m = WeakProbModel::with_default_names(measure).expect("normalized");
            for f in &subsets {
                let e = integral_expectation(f, &m);
                let l = integral_layercake(f, &m);
                let d = integral_dissection(f, &m).map_err(|e| e.to_string())?;
                ensure(e == l && l == d, || format!("|M| = {n}, f = {:?}: {e}, {l}, {d}", f.values))?;
                compared += 1;
            }
        }
    }
    Ok(format!("{compared} (model, f) pairs agree"))
}

fn criterion_7() -> Outcome {
    let sig = Signature::predicates(&[("P", 1), ("Q", 1)]).with_constants(&["c"]);
    let gen = FormulaGen::new(sig.clone(), 4);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut implications = 0;
    for t in 0..500 {
        let spec = ModelGenSpec::random(rng.gen_range(1..=3), 1, t);
        let model = random_model(&mut rng, &spec, &sig);
        let pool: Vec<Formula> = (0..4).map(|_| gen.sentence(&mut rng)).collect();
        let sys = random_valid_system(&mut rng, pool, std::slice::from_ref(&model), 8, 2).map_err(|e| e.to_string())?;
        let report = validate_approximation_system(&sys, std::slice::from_ref(&model));
        ensure(report.valid(), || format!("triple {t}: generated system invalid: {:?}", report.violations))?;
        let i = rng.gen_range(0..sys.sentences().len());
        let s = &sys.sentences()[i];
        let h = hsat(s, &model).map_err(|e| e.to_string())?;
        let ha = hasat(s, &model, &sys).map_err(|e| e.to_string())?;
        ensure(!h || ha, || format!("triple {t}: {s} is H-satisfied but not approximately"))?;
        let one = eval_closed(s, &model).map_err(|e| e.to_string())?.is_one();
        ensure(one == h, || format!("triple {t}: eval = 1 is {one}, hsat is {h} for {s}"))?;
        implications += usize::from(h);
        let diag = ApproximationSystem::diagonal(sys.sentences().to_vec());
        ensure(validate_approximation_system(&diag, std::slice::from_ref(&model)).valid(), || {
            format!("triple {t}: diagonal system rejected")
        })?;
    }
    Ok(format!("500 triples, {implications} with hsat true, 0 violations; diagonal accepted"))
}

fn criterion_8() -> Outcome {
    let sig = Signature::predicates(&[("P", 1), ("Q", 1), ("R", 2)]).with_constants(&["c"]);
    let gen = FormulaGen::new(sig.clone(), 5);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for k in 0..200 {
        let spec = ModelGenSpec::random(rng.gen_range(1..=4), 1, k);
        let m = random_model(&mut rng, &spec, &sig);
        let e = gen.quant_expr(&mut rng, 5);
        let r = hsat_qeq(&e, &e, &m, &LevelSpec::Auto);
        ensure(r == Ok(true), || format!("expression {k} not reflexive: {r:?}"))?;
    }
    let half = LevelConfig::new(vec![q(1, 2)], vec![(0, 0)]).map_err(|e| e.to_string())?;
    let mut agreements = 0;
    for k in 0..200 {
        let n = rng.gen_range(1..=4);
        let m = random_model(&mut rng, &ModelGenSpec::random(n, 1, k), &Signature::default());
        let crisp = |rng: &mut ChaCha8Rng| FuzzySubset::unary((0..n).map(|_| if rng.gen() { q(1, 1) } else { q(0, 1) }).collect());
        let f = crisp(&mut rng);
        let g = crisp(&mut rng);
        let dirac = hsat_qeq_dirac(&f, &g, &m);
        let level = level_set_condition(&f, &g, &m, &half);
        let agree = match (&dirac, &level) {
            (Ok(a), Ok(b)) => a == b,
            (Err(QeqError::DiracContainmentViolated { .. }), Err(QeqError::ContainmentViolated { .. })) => true,
            _ => false,
        };
        ensure(agree, || format!("pair {k}: dirac {dirac:?}, level {level:?}"))?;
        agreements += 1;
    }
    let f = FuzzySubset::unary(vec![q(3, 4), q(1, 4)]);
    let g = FuzzySubset::unary(vec![q(3, 4), q(0, 1)]);
    let null_b = WeakProbModel::new(names(&["a", "b"]), vec![q(1, 1), q(0, 1)]).expect("valid");
    let uniform = WeakProbModel::new(names(&["a", "b"]), vec![q(1, 2), q(1, 2)]).expect("valid");
    ensure(level_set_condition(&f, &g, &null_b, &half) == Ok(true), || "measure-zero witness rejected".into())?;
    let low = LevelConfig::new(vec![q(1, 8)], vec![(0, 0)]).map_err(|e| e.to_string())?;
    ensure(level_set_condition(&f, &g, &null_b, &low) == Ok(true), || "measure-zero witness rejected at 1/8".into())?;
    ensure(level_set_condition(&f, &g, &uniform, &low) == Ok(false), || "measure-1/2 witness accepted".into())?;
    Ok(format!("200 reflexive, {agreements} crisp agreements, witnesses decided"))
}

fn criterion_9() -> Outcome {
    let sig = Signature::predicates(&[("P", 1), ("Q", 1), ("R", 2)]).with_functions(&[("f", 1)]).with_constants(&["c"]);
    let gen = FormulaGen::new(sig.clone(), 4);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut report = ClosureReport::default();
    for k in 0..200 {
        let spec = ModelGenSpec::random(rng.gen_range(1..=4), 1, k);
        let m = random_model(&mut rng, &spec, &sig);
        let s = gen.sentence(&mut rng);
        check_closure_pair(&m, &s, &mut rng, &mut report);
    }
    if let Some(v) = report.violations.first() {
        return Err(format!("{} violation on {}: {} vs {}", v.property, v.sentence, v.expected, v.found));
    }
    let checks: Vec<String> = report.checks.iter().map(|(p, c)| format!("{p} {c}")).collect();
    Ok(checks.join(", "))
}

fn criterion_10() -> Outcome {
    let sig = Signature::predicates(&[("P", 1), ("Q", 1), ("R", 2), ("S", 3)])
        .with_functions(&[("f", 1), ("g", 2)])
        .with_constants(&["c", "d"]);
    let voc = sig.vocabulary();
    let gen = FormulaGen::new(sig, 6).with_qeq();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut deepest = 0;
    for k in 0..10_000 {
        let f = gen.any(&mut rng);
        deepest = deepest.max(f.depth());
        let text = print_formula(&f);
        let back = parse_formula(&text, &voc).map_err(|e| format!("formula {k}: `{text}`: {e}"))?;
        ensure(back == f, || format!("formula {k}: `{text}` reparsed as `{}`", print_formula(&back)))?;
    }
    Ok(format!("10000 formulas, max depth {deepest}"))
}

fn corrupt(script: &ProofScript, k: usize) -> (ProofScript, usize) {
    let idx = script
        .lines
        .iter()
        .rposition(|l| l.justification != Justification::Premise)
        .expect("every corpus script has a derived line");
    let mut out = script.clone();
    let line = &mut out.lines[idx];
    let renamed = |x: &str| if x == "w" { "v".to_owned() } else { "w".to_owned() };
    line.justification = match (&line.justification, k % 2) {
        (Justification::Gen(i, x), 1) => Justification::Gen(*i, renamed(x)),
        (Justification::IntIntro(i, x), 1) => Justification::IntIntro(*i, renamed(x)),
        (Justification::IntMono(i, x), 1) => Justification::IntMono(*i, renamed(x)),
        (Justification::Mp(i, j), 1) => Justification::Mp(*j, *i),
        (Justification::Axiom(a), 1) => {
            Justification::Axiom(AxiomId::ALL[(AxiomId::ALL.iter().position(|b| b == a).expect("known") + 1) % 5])
        }
        (j, _) => {
            line.formula = Formula::not(line.formula.clone());
            j.clone()
        }
    };
    (out, idx + 1)
}

fn criterion_11() -> Outcome {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/proofs.json"))
        .map_err(|e| e.to_string())?;
    let corpus: Vec<serde_json::Value> = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    ensure(corpus.len() == 20, || format!("{} scripts in corpus", corpus.len()))?;
    let mut axioms = BTreeSet::new();
    let mut rules = BTreeSet::new();
    for (k, entry) in corpus.iter().enumerate() {
        let name = entry["name"].as_str().unwrap_or("?");
        let script = proof_from_json(&entry["script"].to_string()).map_err(|e| format!("{name}: {e}"))?;
        let report = check_proof(&script);
        if let Some(e) = &report.error {
            return Err(format!("`{name}` rejected at line {}: {}", e.line, e.message));
        }
        for l in &script.lines {
            match &l.justification {
                Justification::Axiom(a) => {
                    axioms.insert(a.name());
                }
                Justification::Premise => {}
                Justification::Mp(..) => {
                    rules.insert("mp");
                }
                Justification::Gen(..) => {
                    rules.insert("gen");
                }
                Justification::IntIntro(..) => {
                    rules.insert("int-intro");
                }
                Justification::IntMono(..) => {
                    rules.insert("int-mono");
                }
            }
        }
        let (bad, line) = corrupt(&script, k);
        match check_proof(&bad).error {
            Some(e) if e.line == line => {}
            Some(e) => return Err(format!("`{name}` corruption at line {line} reported at line {}", e.line)),
            None => return Err(format!("`{name}` corruption at line {line} accepted")),
        }
    }
    ensure(axioms.len() == 5 && rules.len() == 4, || format!("coverage: axioms {axioms:?}, rules {rules:?}"))?;
    Ok("20 scripts accepted, 20 corruptions rejected at the corrupted line".into())
}

fn main() {
    let criteria: [(&str, u64, fn() -> Outcome); 11] = [
        ("three-element quantifier example", 1, criterion_1),
        ("connective example", 1, criterion_2),
        ("semantic integral laws, |M| = 2, full grid", 60, criterion_3),
        ("axioms mu1-mu5, |M| = 2, exhaustive", 120, criterion_4),
        ("Fubini, 1000 bivariate samples at |M| = 3", 10, criterion_5),
        ("integral oracle agreement, |M| <= 4", 60, criterion_6),
        ("satisfaction strength chain, 500 triples", 30, criterion_7),
        ("quantifier equality semantics", 10, criterion_8),
        ("closure under renaming, reduct, isomorphism", 10, criterion_9),
        ("parser round trip, 10000 formulas", 10, criterion_10),
        ("proof checker corpus and corruptions", 5, criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*limit);
        let (status, detail) = match (&outcome, in_time) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("over time limit; {d}")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("criterion {:>2} {status} [{:.2}s / {limit}s] {name}: {detail}", i + 1, elapsed.as_secs_f64());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
