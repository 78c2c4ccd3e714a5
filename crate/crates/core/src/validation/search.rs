//! Countermodel search over discretized model spaces.

use thiserror::Error;

use crate::eval::{eval_closed, EvalError};
use crate::syntax::{Formula, SIMILARITY};
use crate::validation::generate::{generate_models, GenError, ModelCount, ModelGenSpec, Signature};
use crate::wpm::WeakProbModel;

/// Bounds for exhaustive search.
pub const EXHAUSTIVE_MAX_SIZE: usize = 3;
pub const EXHAUSTIVE_MAX_GRID: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("not a sentence; free variables: {}", .0.join(", "))]
    NotASentence(Vec<String>),
    #[error("search space too large: {0}")]
    SearchSpaceTooLarge(String),
    #[error("{0}")]
    Symbols(String),
    #[error(transparent)]
    Generation(GenError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

impl From<GenError> for SearchError {
    fn from(e: GenError) -> Self {
        match e {
            GenError::SearchSpaceTooLarge(s) => SearchError::SearchSpaceTooLarge(s),
            other => SearchError::Generation(other),
        }
    }
}

/// Signature of the symbols `formula` uses.
pub fn formula_signature(formula: &Formula) -> Result<Signature, SearchError> {
    let voc = formula.used_vocabulary().map_err(|e| SearchError::Symbols(e.to_string()))?;
    let mut sig = Signature::from_vocabulary(&voc);
    if voc.has_approx {
        sig.predicates.push((SIMILARITY.to_owned(), 2));
    }
    Ok(sig)
}

/// The first model in search order with `eval_closed(formula, M) < 1`.
pub fn find_countermodel(formula: &Formula, spec: &ModelGenSpec) -> Result<Option<WeakProbModel>, SearchError> {
    let free = formula.free_vars();
    if !free.is_empty() {
        return Err(SearchError::NotASentence(free.into_iter().collect()));
    }
    if spec.count == ModelCount::Exhaustive
        && (spec.size > EXHAUSTIVE_MAX_SIZE || spec.value_grid.len() > EXHAUSTIVE_MAX_GRID)
    {
        return Err(SearchError::SearchSpaceTooLarge(format!(
            "exhaustive search needs size <= {EXHAUSTIVE_MAX_SIZE} and at most {EXHAUSTIVE_MAX_GRID} grid values"
        )));
    }
    for model in generate_models(spec, &formula_signature(formula)?)? {
        if !eval_closed(formula, &model)?.is_one() {
            return Ok(Some(model));
        }
    }
    Ok(None)
}
