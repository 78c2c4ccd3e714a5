//! Axiom validity testing, proof checking, closure properties and
//! countermodel search.

pub mod axioms;
pub mod closure;
pub mod formulas;
pub mod generate;
pub mod proof;
pub mod search;
pub mod systems;

pub use axioms::{validate_axiom, AxiomId, AxiomReport, ValidationRecord, DEFAULT_INSTANCES};
pub use closure::{check_abstract_logic_properties, check_closure_pair, ClosureProperty, ClosureReport};
pub use formulas::FormulaGen;
pub use generate::{generate_models, GenError, ModelCount, ModelGenSpec, Signature};
pub use proof::{check_proof, match_axiom, Justification, ProofError, ProofLine, ProofReport, ProofScript};
pub use search::{find_countermodel, SearchError};
pub use systems::random_valid_system;
