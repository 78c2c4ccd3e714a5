//! Invariance of truth values under renaming, reducts and isomorphisms.

use std::collections::BTreeMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use crate::eval::eval_closed;
use crate::io::model_to_json;
use crate::syntax::{is_reserved, Formula, Vocabulary};
use crate::validation::generate::{generate_models, GenError, ModelGenSpec, Signature};
use crate::wpm::{WeakProbModel, ISOMORPHISM_BOUND};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClosureProperty {
    Renaming,
    Reduct,
    Isomorphism,
    SentenceMonotonicity,
}

impl fmt::Display for ClosureProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClosureProperty::Renaming => "renaming",
            ClosureProperty::Reduct => "reduct",
            ClosureProperty::Isomorphism => "isomorphism",
            ClosureProperty::SentenceMonotonicity => "sentence-monotonicity",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosureViolation {
    pub property: ClosureProperty,
    pub model: Value,
    pub sentence: String,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ClosureReport {
    pub checks: BTreeMap<ClosureProperty, usize>,
    pub violations: Vec<ClosureViolation>,
}

impl ClosureReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn count(&mut self, p: ClosureProperty) {
        *self.checks.entry(p).or_default() += 1;
    }
}

/// Renames every non-reserved symbol `s` of the model to `s_r`.
fn renaming_for(model: &WeakProbModel) -> BTreeMap<String, String> {
    let voc = model.vocabulary();
    voc.predicates()
        .map(|(n, _)| n)
        .chain(voc.functions().map(|(n, _)| n))
        .chain(voc.constants())
        .filter(|n| !is_reserved(n))
        .map(|n| (n.to_owned(), format!("{n}_r")))
        .collect()
}

/// Checks one sentence in one model against all four properties.
pub fn check_closure_pair(model: &WeakProbModel, sentence: &Formula, rng: &mut impl Rng, report: &mut ClosureReport) {
    let value = eval_closed(sentence, model);
    let shown = |r: &Result<_, _>| match r {
        Ok(v) => format!("{v}"),
        Err(e) => format!("error: {e}"),
    };
    let compare = |report: &mut ClosureReport, p: ClosureProperty, other: String| {
        report.count(p);
        let expected = shown(&value);
        if other != expected {
            report.violations.push(ClosureViolation {
                property: p,
                model: model_to_json(model),
                sentence: sentence.to_string(),
                expected,
                found: other,
            });
        }
    };

    let rho = renaming_for(model);
    let renamed = model.rename(&rho).map(|m| shown(&eval_closed(&sentence.rename_symbols(&rho), &m)));
    compare(report, ClosureProperty::Renaming, renamed.unwrap_or_else(|e| format!("error: {e}")));

    match sentence.used_vocabulary() {
        Ok(voc) => {
            let reduct = model.reduct(&voc).map(|m| shown(&eval_closed(sentence, &m)));
            compare(report, ClosureProperty::Reduct, reduct.unwrap_or_else(|e| format!("error: {e}")));

            report.count(ClosureProperty::SentenceMonotonicity);
            let wider: Vocabulary = model.vocabulary();
            if sentence.check_well_formed(&voc).is_ok()
                && voc.is_subvocabulary_of(&wider)
                && sentence.check_well_formed(&wider).is_err()
            {
                report.violations.push(ClosureViolation {
                    property: ClosureProperty::SentenceMonotonicity,
                    model: model_to_json(model),
                    sentence: sentence.to_string(),
                    expected: "well formed".into(),
                    found: "not well formed".into(),
                });
            }
        }
        Err(e) => compare(report, ClosureProperty::Reduct, format!("error: {e}")),
    }

    let mut perm: Vec<usize> = (0..model.size()).collect();
    perm.shuffle(rng);
    let names: Vec<String> = (0..model.size()).map(|i| format!("u{i}")).collect();
    match model.transport(&perm, names) {
        Ok(image) => {
            compare(report, ClosureProperty::Isomorphism, shown(&eval_closed(sentence, &image)));
            if model.size() <= ISOMORPHISM_BOUND && model.isomorphic(&image) != Ok(true) {
                report.count(ClosureProperty::Isomorphism);
                report.violations.push(ClosureViolation {
                    property: ClosureProperty::Isomorphism,
                    model: model_to_json(model),
                    sentence: sentence.to_string(),
                    expected: "isomorphic image".into(),
                    found: "no isomorphism found".into(),
                });
            }
        }
        Err(e) => compare(report, ClosureProperty::Isomorphism, format!("error: {e}")),
    }
}

/// Runs [`check_closure_pair`] for every generated model and pool sentence.
/// Models interpret the symbols the pool uses.
pub fn check_abstract_logic_properties(spec: &ModelGenSpec, pool: &[Formula]) -> Result<ClosureReport, GenError> {
    let mut voc = Vocabulary::new();
    for s in pool {
        if let Ok(v) = s.used_vocabulary() {
            voc = voc.union(&v).unwrap_or(voc);
        }
    }
    let sig = Signature::from_vocabulary(&voc);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed ^ 0x5eed);
    let mut report = ClosureReport::default();
    for model in generate_models(spec, &sig)? {
        for s in pool {
            check_closure_pair(&model, s, &mut rng, &mut report);
        }
    }
    Ok(report)
}
