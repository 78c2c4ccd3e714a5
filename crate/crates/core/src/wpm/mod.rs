//! Finite weak probabilistic models.
//!
//! A model has a finite non-empty universe, an exact probability measure on
//! it, `[0, 1]`-valued predicate tables, element-valued function tables and
//! constants. All tables are total over `|M|^n` and stored row-major.

mod integral;
mod structure;

pub use integral::*;
pub use structure::*;

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

use crate::rational::{format_rational, Rational01};
use crate::syntax::{is_identifier, Vocabulary, VocabularyError, IDENTITY, SIMILARITY};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("the universe must not be empty")]
    EmptyUniverse,
    #[error("element `{0}` is listed more than once")]
    DuplicateElement(String),
    #[error("`{0}` is not a valid element name")]
    InvalidElementName(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("measure sums to {0}, not 1")]
    MeasureNotNormalized(String),
    #[error("table for `{symbol}` is incomplete: {detail}")]
    TableIncomplete { symbol: String, detail: String },
    #[error("value {value} for `{symbol}` lies outside [0, 1]")]
    ValueOutOfRange { symbol: String, value: String },
    #[error("symbol `{0}` is already interpreted")]
    DuplicateSymbol(String),
    #[error("`{0}` is not a binary predicate of the model")]
    NotBinaryPredicate(String),
    #[error("`{0}` cannot be interpreted by a model")]
    ReservedSymbol(String),
    #[error(transparent)]
    Vocabulary(#[from] VocabularyError),
    #[error("vocabulary is not a subvocabulary of the model's: `{0}`")]
    NotSubvocabulary(String),
    #[error("universe has {size} elements; the bound for this operation is {bound}")]
    UniverseTooLarge { size: usize, bound: usize },
    #[error("renaming is not a bijection: {0}")]
    BadRenaming(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredicateTable {
    pub arity: usize,
    pub values: Vec<Rational01>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionTable {
    pub arity: usize,
    pub values: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakProbModel {
    universe: Vec<String>,
    index: BTreeMap<String, usize>,
    measure: Vec<Rational01>,
    predicates: BTreeMap<String, PredicateTable>,
    functions: BTreeMap<String, FunctionTable>,
    constants: BTreeMap<String, usize>,
}

/// Row-major index of a tuple of element indices.
pub fn tuple_index(tuple: &[usize], size: usize) -> usize {
    tuple.iter().fold(0, |acc, &e| acc * size + e)
}

/// Inverse of [`tuple_index`].
pub fn index_tuple(mut index: usize, arity: usize, size: usize) -> Vec<usize> {
    let mut out = vec![0; arity];
    for slot in out.iter_mut().rev() {
        *slot = index % size;
        index /= size;
    }
    out
}

/// All tuples of `arity` element indices, in row-major order.
pub fn all_tuples(arity: usize, size: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..size.pow(arity as u32)).map(move |i| index_tuple(i, arity, size))
}

impl WeakProbModel {
    /// A model with no symbols; the measure must be normalized exactly.
    pub fn new(universe: Vec<String>, measure: Vec<Rational01>) -> Result<Self, ModelError> {
        if universe.is_empty() {
            return Err(ModelError::EmptyUniverse);
        }
        if measure.len() != universe.len() {
            return Err(ModelError::TableIncomplete {
                symbol: "measure".into(),
                detail: format!("{} weights for {} elements", measure.len(), universe.len()),
            });
        }
        let mut index = BTreeMap::new();
        for (i, name) in universe.iter().enumerate() {
            if !is_identifier(name) {
                return Err(ModelError::InvalidElementName(name.clone()));
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(ModelError::DuplicateElement(name.clone()));
            }
        }
        let total: BigRational = measure.iter().map(Rational01::value).sum();
        if !total.is_one() {
            return Err(ModelError::MeasureNotNormalized(format_rational(&total)));
        }
        Ok(Self {
            universe,
            index,
            measure,
            predicates: BTreeMap::new(),
            functions: BTreeMap::new(),
            constants: BTreeMap::new(),
        })
    }

    /// Elements named `e0, e1, ...` with the given measure.
    pub fn with_default_names(measure: Vec<Rational01>) -> Result<Self, ModelError> {
        let names = (0..measure.len()).map(|i| format!("e{i}")).collect();
        Self::new(names, measure)
    }

    fn check_symbol_free(&self, name: &str) -> Result<(), ModelError> {
        if name == IDENTITY || (crate::syntax::is_reserved(name) && name != SIMILARITY) {
            return Err(ModelError::ReservedSymbol(name.to_owned()));
        }
        if !is_identifier(name) {
            return Err(VocabularyError::InvalidName(name.to_owned()).into());
        }
        if self.predicates.contains_key(name) || self.functions.contains_key(name) || self.constants.contains_key(name) {
            return Err(ModelError::DuplicateSymbol(name.to_owned()));
        }
        Ok(())
    }

    pub fn add_predicate(&mut self, name: &str, arity: usize, values: Vec<Rational01>) -> Result<(), ModelError> {
        self.check_symbol_free(name)?;
        if arity == 0 {
            return Err(VocabularyError::ZeroArity(name.to_owned()).into());
        }
        if name == SIMILARITY && arity != 2 {
            return Err(ModelError::NotBinaryPredicate(name.to_owned()));
        }
        let expected = self.size().pow(arity as u32);
        if values.len() != expected {
            return Err(ModelError::TableIncomplete {
                symbol: name.to_owned(),
                detail: format!("{} of {expected} entries", values.len()),
            });
        }
        self.predicates.insert(name.to_owned(), PredicateTable { arity, values });
        Ok(())
    }

    pub fn add_function(&mut self, name: &str, arity: usize, values: Vec<usize>) -> Result<(), ModelError> {
        self.check_symbol_free(name)?;
        if name == SIMILARITY {
            return Err(ModelError::ReservedSymbol(name.to_owned()));
        }
        if arity == 0 {
            return Err(VocabularyError::ZeroArity(name.to_owned()).into());
        }
        let expected = self.size().pow(arity as u32);
        if values.len() != expected {
            return Err(ModelError::TableIncomplete {
                symbol: name.to_owned(),
                detail: format!("{} of {expected} entries", values.len()),
            });
        }
        if let Some(&bad) = values.iter().find(|&&v| v >= self.size()) {
            return Err(ModelError::UnknownElement(format!("#{bad}")));
        }
        self.functions.insert(name.to_owned(), FunctionTable { arity, values });
        Ok(())
    }

    pub fn add_constant(&mut self, name: &str, element: usize) -> Result<(), ModelError> {
        self.check_symbol_free(name)?;
        if name == SIMILARITY {
            return Err(ModelError::ReservedSymbol(name.to_owned()));
        }
        if element >= self.size() {
            return Err(ModelError::UnknownElement(format!("#{element}")));
        }
        self.constants.insert(name.to_owned(), element);
        Ok(())
    }

    pub fn predicate(mut self, name: &str, arity: usize, values: Vec<Rational01>) -> Result<Self, ModelError> {
        self.add_predicate(name, arity, values)?;
        Ok(self)
    }

    pub fn function(mut self, name: &str, arity: usize, values: Vec<usize>) -> Result<Self, ModelError> {
        self.add_function(name, arity, values)?;
        Ok(self)
    }

    pub fn constant(mut self, name: &str, element: usize) -> Result<Self, ModelError> {
        self.add_constant(name, element)?;
        Ok(self)
    }

    pub fn size(&self) -> usize {
        self.universe.len()
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn element_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn element_name(&self, index: usize) -> &str {
        &self.universe[index]
    }

    pub fn measure(&self) -> &[Rational01] {
        &self.measure
    }

    pub fn weight(&self, element: usize) -> &Rational01 {
        &self.measure[element]
    }

    pub fn predicate_table(&self, name: &str) -> Option<&PredicateTable> {
        self.predicates.get(name)
    }

    pub fn function_table(&self, name: &str) -> Option<&FunctionTable> {
        self.functions.get(name)
    }

    pub fn constant_element(&self, name: &str) -> Option<usize> {
        self.constants.get(name).copied()
    }

    pub fn predicate_tables(&self) -> &BTreeMap<String, PredicateTable> {
        &self.predicates
    }

    pub fn function_tables(&self) -> &BTreeMap<String, FunctionTable> {
        &self.functions
    }

    pub fn constant_map(&self) -> &BTreeMap<String, usize> {
        &self.constants
    }

    pub fn predicate_value(&self, name: &str, args: &[usize]) -> Option<&Rational01> {
        let table = self.predicates.get(name)?;
        (table.arity == args.len()).then(|| &table.values[tuple_index(args, self.size())])
    }

    pub fn apply_function(&self, name: &str, args: &[usize]) -> Option<usize> {
        let table = self.functions.get(name)?;
        (table.arity == args.len()).then(|| table.values[tuple_index(args, self.size())])
    }

    /// The vocabulary interpreted by this model. Quantifier equality is always
    /// available; `≈` is available when a binary `SIM` table is present.
    pub fn vocabulary(&self) -> Vocabulary {
        let mut voc = Vocabulary::with_flags(true, self.predicates.contains_key(SIMILARITY));
        for (n, t) in &self.predicates {
            if n != SIMILARITY {
                voc.add_predicate(n, t.arity).expect("model symbols are distinct");
            }
        }
        for (n, t) in &self.functions {
            voc.add_function(n, t.arity).expect("model symbols are distinct");
        }
        for n in self.constants.keys() {
            voc.add_constant(n).expect("model symbols are distinct");
        }
        voc
    }

    /// The values of a unary predicate as a fuzzy subset.
    pub fn predicate_subset(&self, name: &str) -> Option<FuzzySubset> {
        let t = self.predicates.get(name)?;
        Some(FuzzySubset { arity: t.arity, size: self.size(), values: t.values.clone() })
    }

    /// Expansion by constants naming every element; each constant is the
    /// element's own name. An existing constant of that name must already
    /// denote the element.
    pub fn expand_with_element_constants(&self) -> Result<Self, ModelError> {
        let mut out = self.clone();
        for (i, name) in self.universe.iter().enumerate() {
            match self.constants.get(name) {
                Some(&e) if e == i => {}
                Some(_) => return Err(ModelError::DuplicateSymbol(name.clone())),
                None => out.add_constant(name, i)?,
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn names(n: &[&str]) -> Vec<String> {
        n.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn normalization_is_exact() {
        assert!(WeakProbModel::new(names(&["a", "b"]), vec![q(1, 2), q(1, 2)]).is_ok());
        assert_eq!(
            WeakProbModel::new(names(&["a", "b"]), vec![q(1, 3), q(1, 3)]),
            Err(ModelError::MeasureNotNormalized("2/3".into()))
        );
        assert_eq!(WeakProbModel::new(vec![], vec![]), Err(ModelError::EmptyUniverse));
        assert_eq!(
            WeakProbModel::new(names(&["a", "a"]), vec![q(1, 2), q(1, 2)]),
            Err(ModelError::DuplicateElement("a".into()))
        );
    }

    #[test]
    fn tables_must_be_total() {
        let m = WeakProbModel::new(names(&["a", "b"]), vec![q(1, 2), q(1, 2)]).unwrap();
        assert!(matches!(
            m.clone().predicate("R", 2, vec![q(1, 2); 3]),
            Err(ModelError::TableIncomplete { .. })
        ));
        assert!(matches!(m.clone().function("f", 1, vec![0, 2]), Err(ModelError::UnknownElement(_))));
        assert!(matches!(m.clone().constant("c", 5), Err(ModelError::UnknownElement(_))));
        assert!(matches!(m.clone().predicate("EQ", 2, vec![q(1, 2); 4]), Err(ModelError::ReservedSymbol(_))));
        assert!(matches!(m.predicate("SIM", 1, vec![q(1, 2); 2]), Err(ModelError::NotBinaryPredicate(_))));
    }

    #[test]
    fn tuple_indexing_roundtrips() {
        for i in 0..27 {
            assert_eq!(tuple_index(&index_tuple(i, 3, 3), 3), i);
        }
        assert_eq!(all_tuples(2, 2).collect::<Vec<_>>(), vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn vocabulary_reflects_tables() {
        let m = WeakProbModel::new(names(&["a", "b"]), vec![q(1, 2), q(1, 2)])
            .unwrap()
            .predicate("SIM", 2, vec![Rational01::one(); 4])
            .unwrap()
            .predicate("P", 1, vec![q(1, 2); 2])
            .unwrap()
            .constant("c", 1)
            .unwrap();
        let v = m.vocabulary();
        assert!(v.has_approx && v.has_eq);
        assert_eq!(v.predicate_arity("P"), Some(1));
        assert_eq!(v.predicate_arity("SIM"), Some(2));
        assert!(v.has_constant("c"));
        assert_eq!(v.predicates().count(), 1);
    }
}
