//! A fuzzy logic of integrals over finite weak probabilistic models.
//!
//! Formulas use Łukasiewicz connectives plus an integral quantifier. Truth
//! values and measures are exact rationals in `[0, 1]`.

pub mod eval;
pub mod io;
pub mod parser;
pub mod rational;
pub mod satisfaction;
pub mod syntax;
pub mod validation;
pub mod wpm;

pub use eval::{eval, eval_closed, EvalError, EvalOptions, QuantifierDomain, Valuation};
pub use parser::{parse_formula, parse_formula_inferred, print_formula, ParseError, SourceSpan};
pub use rational::{q, Rational01};
pub use satisfaction::{hasat, hsat, hsat_qeq, hsat_qeq_dirac, ApproximationSystem, LevelConfig, LevelSpec};
pub use syntax::{congruence_axioms, Formula, QuantExpr, Quantifier, Relation, Term, Vocabulary};
pub use wpm::{FuzzySubset, ModelError, WeakProbModel};
