//! JSON file formats for models, approximation systems, sentence pools and
//! proof scripts.
//!
//! Every rational is a `"p/q"` string. Model tables are keyed by
//! comma-separated element names and must be total.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use serde::Deserialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::parser::{parse_formula_inferred, ParseError};
use crate::rational::{parse_rational, Rational01};
use crate::satisfaction::ApproximationSystem;
use crate::syntax::Formula;
use crate::validation::{Justification, ProofLine, ProofScript};
use crate::wpm::{all_tuples, tuple_index, ModelError, WeakProbModel};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read `{path}`")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("format error: {0}")]
    Format(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("formula {index}: {error}")]
    Formula { index: usize, error: ParseError },
    #[error("proof line {line}: {message}")]
    Justification { line: usize, message: String },
}

fn read(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|source| IoError::Read { path: path.to_owned(), source })
}

fn json_error(e: serde_json::Error) -> IoError {
    IoError::Format(e.to_string())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    universe: Vec<String>,
    measure: BTreeMap<String, String>,
    #[serde(default)]
    predicates: BTreeMap<String, TableFile>,
    #[serde(default)]
    functions: BTreeMap<String, TableFile>,
    #[serde(default)]
    constants: BTreeMap<String, String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TableFile {
    arity: usize,
    table: BTreeMap<String, String>,
}

fn unit_value(symbol: &str, text: &str) -> Result<Rational01, IoError> {
    let v = parse_rational(text).map_err(|e| IoError::Format(format!("`{symbol}`: {e}")))?;
    Rational01::new(v).map_err(|_| {
        IoError::Model(ModelError::ValueOutOfRange { symbol: symbol.to_owned(), value: text.trim().to_owned() })
    })
}

fn element(model: &WeakProbModel, name: &str) -> Result<usize, IoError> {
    model.element_index(name.trim()).ok_or_else(|| ModelError::UnknownElement(name.trim().to_owned()).into())
}

/// Reads a total table keyed by comma-separated element tuples, in
/// row-major order.
fn read_table<T>(
    model: &WeakProbModel,
    symbol: &str,
    file: &TableFile,
    mut cell: impl FnMut(&str) -> Result<T, IoError>,
) -> Result<Vec<T>, IoError> {
    if file.arity == 0 {
        return Err(IoError::Format(format!("`{symbol}` must have positive arity")));
    }
    let n = model.size();
    let mut slots: Vec<Option<T>> = (0..n.pow(file.arity as u32)).map(|_| None).collect();
    for (key, value) in &file.table {
        let tuple = key.split(',').map(|e| element(model, e)).collect::<Result<Vec<_>, _>>()?;
        if tuple.len() != file.arity {
            return Err(IoError::Format(format!(
                "`{symbol}` key `{key}` has {} component(s), expected {}",
                tuple.len(),
                file.arity
            )));
        }
        let slot = &mut slots[tuple_index(&tuple, n)];
        if slot.is_some() {
            return Err(IoError::Format(format!("`{symbol}` lists tuple `{key}` twice")));
        }
        *slot = Some(cell(value)?);
    }
    let mut out = Vec::with_capacity(slots.len());
    for (tuple, slot) in all_tuples(file.arity, n).zip(slots) {
        match slot {
            Some(v) => out.push(v),
            None => {
                let names: Vec<&str> = tuple.iter().map(|&e| model.element_name(e)).collect();
                return Err(ModelError::TableIncomplete { symbol: symbol.to_owned(), detail: format!("missing `{}`", names.join(",")) }.into());
            }
        }
    }
    Ok(out)
}

pub fn model_from_json(text: &str) -> Result<WeakProbModel, IoError> {
    let file: ModelFile = serde_json::from_str(text).map_err(json_error)?;
    let universe: Vec<String> = file.universe.iter().map(|s| s.trim().to_owned()).collect();
    let position: BTreeMap<&str, usize> = universe.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let mut measure: Vec<Option<Rational01>> = vec![None; universe.len()];
    for (name, value) in &file.measure {
        let &i = position.get(name.trim()).ok_or_else(|| ModelError::UnknownElement(name.trim().to_owned()))?;
        measure[i] = Some(unit_value("measure", value)?);
    }
    let measure = measure
        .into_iter()
        .zip(&universe)
        .map(|(m, name)| {
            m.ok_or_else(|| {
                IoError::Model(ModelError::TableIncomplete { symbol: "measure".into(), detail: format!("missing `{name}`") })
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut model = WeakProbModel::new(universe, measure)?;
    for (name, table) in &file.predicates {
        let values = read_table(&model, name, table, |v| unit_value(name, v))?;
        model.add_predicate(name, table.arity, values)?;
    }
    for (name, table) in &file.functions {
        let values = read_table(&model, name, table, |v| element(&model, v))?;
        model.add_function(name, table.arity, values)?;
    }
    for (name, elem) in &file.constants {
        let e = element(&model, elem)?;
        model.add_constant(name, e)?;
    }
    Ok(model)
}

pub fn load_model(path: impl AsRef<Path>) -> Result<WeakProbModel, IoError> {
    model_from_json(&read(path.as_ref())?)
}

/// The model in the same format [`model_from_json`] reads.
pub fn model_to_json(model: &WeakProbModel) -> Value {
    let n = model.size();
    let key = |tuple: &[usize]| tuple.iter().map(|&e| model.element_name(e)).collect::<Vec<_>>().join(",");
    let measure: Map<String, Value> =
        (0..n).map(|i| (model.element_name(i).to_owned(), json!(model.weight(i).to_string()))).collect();
    let predicates: Map<String, Value> = model
        .predicate_tables()
        .iter()
        .map(|(name, t)| {
            let table: Map<String, Value> =
                all_tuples(t.arity, n).zip(&t.values).map(|(tp, v)| (key(&tp), json!(v.to_string()))).collect();
            (name.clone(), json!({ "arity": t.arity, "table": table }))
        })
        .collect();
    let functions: Map<String, Value> = model
        .function_tables()
        .iter()
        .map(|(name, t)| {
            let table: Map<String, Value> = all_tuples(t.arity, n)
                .zip(&t.values)
                .map(|(tp, &v)| (key(&tp), json!(model.element_name(v))))
                .collect();
            (name.clone(), json!({ "arity": t.arity, "table": table }))
        })
        .collect();
    let constants: Map<String, Value> =
        model.constant_map().iter().map(|(c, &e)| (c.clone(), json!(model.element_name(e)))).collect();
    json!({
        "universe": model.universe(),
        "measure": measure,
        "predicates": predicates,
        "functions": functions,
        "constants": constants,
    })
}

/// Parses each sentence with symbols inferred from use; identifiers in
/// `constants` are constant symbols.
fn parse_all(texts: &[String], constants: &BTreeSet<String>) -> Result<Vec<Formula>, IoError> {
    texts
        .iter()
        .enumerate()
        .map(|(index, t)| parse_formula_inferred(t, constants).map(|(f, _)| f).map_err(|error| IoError::Formula { index, error }))
        .collect()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ApproxFile {
    sentences: Vec<String>,
    #[serde(default)]
    rel: Vec<(usize, usize)>,
}

pub fn approx_system_from_json(text: &str, constants: &BTreeSet<String>) -> Result<ApproximationSystem, IoError> {
    let file: ApproxFile = serde_json::from_str(text).map_err(json_error)?;
    let sentences = parse_all(&file.sentences, constants)?;
    ApproximationSystem::new(sentences, file.rel).map_err(|e| IoError::Format(e.to_string()))
}

pub fn load_approx_system(path: impl AsRef<Path>, constants: &BTreeSet<String>) -> Result<ApproximationSystem, IoError> {
    approx_system_from_json(&read(path.as_ref())?, constants)
}

pub fn approx_system_to_json(sys: &ApproximationSystem) -> Value {
    let sentences: Vec<String> = sys.sentences().iter().map(|s| s.to_string()).collect();
    let rel: Vec<[usize; 2]> = sys.rel().iter().map(|&(i, j)| [i, j]).collect();
    json!({ "sentences": sentences, "rel": rel })
}

/// A pool file is a JSON array of sentences.
pub fn pool_from_json(text: &str, constants: &BTreeSet<String>) -> Result<Vec<Formula>, IoError> {
    let texts: Vec<String> = serde_json::from_str(text).map_err(json_error)?;
    parse_all(&texts, constants)
}

pub fn load_pool(path: impl AsRef<Path>, constants: &BTreeSet<String>) -> Result<Vec<Formula>, IoError> {
    pool_from_json(&read(path.as_ref())?, constants)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLine {
    formula: String,
    just: String,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ProofFile {
    Lines(Vec<RawLine>),
    Object {
        #[serde(default)]
        constants: Vec<String>,
        lines: Vec<RawLine>,
    },
}

/// A proof file is either an array of `{formula, just}` lines or an object
/// with `lines` and an optional `constants` list.
pub fn proof_from_json(text: &str) -> Result<ProofScript, IoError> {
    let file: ProofFile = serde_json::from_str(text).map_err(json_error)?;
    let (constants, raw) = match file {
        ProofFile::Lines(lines) => (BTreeSet::new(), lines),
        ProofFile::Object { constants, lines } => (constants.into_iter().collect(), lines),
    };
    let mut lines = Vec::with_capacity(raw.len());
    for (i, r) in raw.iter().enumerate() {
        let (formula, _) =
            parse_formula_inferred(&r.formula, &constants).map_err(|error| IoError::Formula { index: i + 1, error })?;
        let justification: Justification =
            r.just.parse().map_err(|message| IoError::Justification { line: i + 1, message })?;
        lines.push(ProofLine { formula, justification });
    }
    Ok(ProofScript { lines })
}

pub fn load_proof(path: impl AsRef<Path>) -> Result<ProofScript, IoError> {
    proof_from_json(&read(path.as_ref())?)
}

pub fn proof_to_json(script: &ProofScript) -> Value {
    let lines: Vec<Value> = script
        .lines
        .iter()
        .map(|l| json!({ "formula": l.formula.to_string(), "just": l.justification.to_string() }))
        .collect();
    let constants: BTreeSet<String> = script
        .lines
        .iter()
        .filter_map(|l| l.formula.used_vocabulary().ok())
        .flat_map(|v| v.constants().map(str::to_owned).collect::<Vec<_>>())
        .collect();
    json!({ "constants": constants, "lines": lines })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    const TWO: &str = r#"{
        "universe": ["a", "b"],
        "measure": {"a": "1/2", "b": "1/2"},
        "predicates": {"P": {"arity": 1, "table": {"a": "1", "b": "0/1"}},
                       "R": {"arity": 2, "table": {"a,a": "1/4", "a,b": "1/2", "b,a": "3/4", "b, b": "1"}}},
        "functions": {"f": {"arity": 1, "table": {"a": "b", "b": "a"}}},
        "constants": {"c": "a"}
    }"#;

    #[test]
    fn loads_a_model() {
        let m = model_from_json(TWO).unwrap();
        assert_eq!(m.size(), 2);
        assert_eq!(m.predicate_value("R", &[1, 0]), Some(&q(3, 4)));
        assert_eq!(m.predicate_value("R", &[1, 1]), Some(&q(1, 1)));
        assert_eq!(m.apply_function("f", &[0]), Some(1));
        assert_eq!(m.constant_element("c"), Some(0));
    }

    #[test]
    fn json_round_trip() {
        let m = model_from_json(TWO).unwrap();
        let text = model_to_json(&m).to_string();
        assert_eq!(model_from_json(&text).unwrap(), m);
    }

    #[test]
    fn rejects_bad_models() {
        let unnormalized = r#"{"universe": ["a", "b"], "measure": {"a": "1/3", "b": "1/3"}}"#;
        assert!(matches!(model_from_json(unnormalized), Err(IoError::Model(ModelError::MeasureNotNormalized(s))) if s == "2/3"));
        let out_of_range = r#"{"universe": ["a"], "measure": {"a": "1"},
            "predicates": {"P": {"arity": 1, "table": {"a": "3/2"}}}}"#;
        assert!(matches!(model_from_json(out_of_range), Err(IoError::Model(ModelError::ValueOutOfRange { .. }))));
        let partial = r#"{"universe": ["a", "b"], "measure": {"a": "1", "b": "0"},
            "predicates": {"P": {"arity": 1, "table": {"a": "1"}}}}"#;
        assert!(matches!(model_from_json(partial), Err(IoError::Model(ModelError::TableIncomplete { .. }))));
        let no_mass = r#"{"universe": ["a", "b"], "measure": {"a": "1"}}"#;
        assert!(matches!(model_from_json(no_mass), Err(IoError::Model(ModelError::TableIncomplete { .. }))));
        let float = r#"{"universe": ["a"], "measure": {"a": 1.0}}"#;
        assert!(matches!(model_from_json(float), Err(IoError::Format(_))));
        let wrong_arity = r#"{"universe": ["a"], "measure": {"a": "1"},
            "predicates": {"P": {"arity": 2, "table": {"a": "1"}}}}"#;
        assert!(matches!(model_from_json(wrong_arity), Err(IoError::Format(_))));
        let stranger = r#"{"universe": ["a"], "measure": {"a": "1"}, "constants": {"c": "z"}}"#;
        assert!(matches!(model_from_json(stranger), Err(IoError::Model(ModelError::UnknownElement(_)))));
        assert!(matches!(model_from_json("{"), Err(IoError::Format(_))));
    }

    #[test]
    fn approximation_system_file() {
        let consts = BTreeSet::from(["c".to_owned()]);
        let sys = approx_system_from_json(r#"{"sentences": ["P(c)", "P(c) \\/ Q(c)"], "rel": [[0, 1]]}"#, &consts).unwrap();
        assert_eq!(sys.sentences().len(), 2);
        assert_eq!(sys.approximations(0).collect::<Vec<_>>(), vec![1]);
        let back = approx_system_from_json(&approx_system_to_json(&sys).to_string(), &consts).unwrap();
        assert_eq!(back, sys);
        assert!(matches!(
            approx_system_from_json(r#"{"sentences": ["P(c)"], "rel": [[0, 3]]}"#, &consts),
            Err(IoError::Format(_))
        ));
        assert!(matches!(
            approx_system_from_json(r#"{"sentences": ["P(c) + Q(c)"]}"#, &consts),
            Err(IoError::Formula { index: 0, .. })
        ));
    }

    #[test]
    fn pool_file() {
        let pool = pool_from_json(r#"["ALL x. P(x)", "rat(1/2)"]"#, &BTreeSet::new()).unwrap();
        assert_eq!(pool.len(), 2);
        assert!(pool_from_json(r#"{"a": 1}"#, &BTreeSet::new()).is_err());
    }

    #[test]
    fn proof_file() {
        let script = proof_from_json(
            r#"[{"formula": "P(x)", "just": "premise"}, {"formula": "INT P(x) dx", "just": "int-intro:1,x"}]"#,
        )
        .unwrap();
        assert_eq!(script.lines.len(), 2);
        assert_eq!(script.lines[1].justification, Justification::IntIntro(1, "x".into()));
        let again = proof_from_json(&proof_to_json(&script).to_string()).unwrap();
        assert_eq!(again, script);
        let bad = r#"[{"formula": "P(x)", "just": "magic"}]"#;
        assert!(matches!(proof_from_json(bad), Err(IoError::Justification { line: 1, .. })));
    }
}
