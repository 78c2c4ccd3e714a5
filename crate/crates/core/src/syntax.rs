//! Vocabularies, terms and formulas of the language of integrals.
//!
//! Similarity `≈` and term identity are not separate constructors: they are the
//! reserved binary predicates [`SIMILARITY`] and [`IDENTITY`], enabled by the
//! vocabulary flags `has_approx` and `has_eq`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::rational::Rational01;

/// Reserved binary predicate read as the similarity relation `≈`.
pub const SIMILARITY: &str = "SIM";
/// Reserved binary predicate read as crisp identity between elements.
pub const IDENTITY: &str = "EQ";

const KEYWORDS: [&str; 4] = ["ALL", "EX", "INT", "rat"];

pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn is_reserved(name: &str) -> bool {
    KEYWORDS.contains(&name) || name == SIMILARITY || name == IDENTITY
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VocabularyError {
    #[error("symbol `{0}` is declared more than once")]
    DuplicateName(String),
    #[error("symbol `{0}` must have positive arity")]
    ZeroArity(String),
    #[error("`{0}` is not a valid symbol name")]
    InvalidName(String),
    #[error("`{0}` is reserved")]
    ReservedName(String),
    #[error("symbol `{name}` is used with arities {first} and {second}")]
    InconsistentArity { name: String, first: usize, second: usize },
    #[error("symbol `{0}` is used both as a predicate and as a function or constant")]
    KindClash(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Copy)]
pub enum SymbolKind {
    Predicate(usize),
    Function(usize),
    Constant,
}

/// Predicate, function and constant symbols together with the two equality flags.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vocabulary {
    predicates: BTreeMap<String, usize>,
    functions: BTreeMap<String, usize>,
    constants: BTreeSet<String>,
    /// Equality between quantifier expressions (and the `EQ` atom) is allowed.
    pub has_eq: bool,
    /// The similarity atom `SIM` is allowed.
    pub has_approx: bool,
}

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_flags(has_eq: bool, has_approx: bool) -> Self {
        Self { has_eq, has_approx, ..Self::default() }
    }

    fn check_fresh(&self, name: &str) -> Result<(), VocabularyError> {
        if !is_identifier(name) {
            return Err(VocabularyError::InvalidName(name.to_owned()));
        }
        if is_reserved(name) {
            return Err(VocabularyError::ReservedName(name.to_owned()));
        }
        if self.kind(name).is_some() {
            return Err(VocabularyError::DuplicateName(name.to_owned()));
        }
        Ok(())
    }

    pub fn add_predicate(&mut self, name: &str, arity: usize) -> Result<(), VocabularyError> {
        self.check_fresh(name)?;
        if arity == 0 {
            return Err(VocabularyError::ZeroArity(name.to_owned()));
        }
        self.predicates.insert(name.to_owned(), arity);
        Ok(())
    }

    pub fn add_function(&mut self, name: &str, arity: usize) -> Result<(), VocabularyError> {
        self.check_fresh(name)?;
        if arity == 0 {
            return Err(VocabularyError::ZeroArity(name.to_owned()));
        }
        self.functions.insert(name.to_owned(), arity);
        Ok(())
    }

    pub fn add_constant(&mut self, name: &str) -> Result<(), VocabularyError> {
        self.check_fresh(name)?;
        self.constants.insert(name.to_owned());
        Ok(())
    }

    pub fn predicate(mut self, name: &str, arity: usize) -> Result<Self, VocabularyError> {
        self.add_predicate(name, arity)?;
        Ok(self)
    }

    pub fn function(mut self, name: &str, arity: usize) -> Result<Self, VocabularyError> {
        self.add_function(name, arity)?;
        Ok(self)
    }

    pub fn constant(mut self, name: &str) -> Result<Self, VocabularyError> {
        self.add_constant(name)?;
        Ok(self)
    }

    pub fn kind(&self, name: &str) -> Option<SymbolKind> {
        if let Some(&a) = self.predicates.get(name) {
            Some(SymbolKind::Predicate(a))
        } else if let Some(&a) = self.functions.get(name) {
            Some(SymbolKind::Function(a))
        } else if self.constants.contains(name) {
            Some(SymbolKind::Constant)
        } else {
            None
        }
    }

    /// Arity of a predicate, including the reserved ones when their flag is set.
    pub fn predicate_arity(&self, name: &str) -> Option<usize> {
        match name {
            SIMILARITY if self.has_approx => Some(2),
            IDENTITY if self.has_eq => Some(2),
            _ => self.predicates.get(name).copied(),
        }
    }

    pub fn function_arity(&self, name: &str) -> Option<usize> {
        self.functions.get(name).copied()
    }

    pub fn has_constant(&self, name: &str) -> bool {
        self.constants.contains(name)
    }

    pub fn predicates(&self) -> impl Iterator<Item = (&str, usize)> {
        self.predicates.iter().map(|(n, &a)| (n.as_str(), a))
    }

    pub fn functions(&self) -> impl Iterator<Item = (&str, usize)> {
        self.functions.iter().map(|(n, &a)| (n.as_str(), a))
    }

    pub fn constants(&self) -> impl Iterator<Item = &str> {
        self.constants.iter().map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.predicates.is_empty() && self.functions.is_empty() && self.constants.is_empty()
    }

    /// True when every symbol of `self` is declared in `other` with the same
    /// kind and arity, and every enabled flag is enabled there too.
    pub fn is_subvocabulary_of(&self, other: &Vocabulary) -> bool {
        self.predicates.iter().all(|(n, a)| other.predicates.get(n) == Some(a))
            && self.functions.iter().all(|(n, a)| other.functions.get(n) == Some(a))
            && self.constants.is_subset(&other.constants)
            && (!self.has_eq || other.has_eq)
            && (!self.has_approx || other.has_approx)
    }

    /// Symbols of both vocabularies; fails on kind or arity conflicts.
    pub fn union(&self, other: &Vocabulary) -> Result<Vocabulary, VocabularyError> {
        let mut out = self.clone();
        out.has_eq |= other.has_eq;
        out.has_approx |= other.has_approx;
        for (n, a) in other.predicates() {
            match out.kind(n) {
                None => out.add_predicate(n, a)?,
                Some(SymbolKind::Predicate(b)) if a == b => {}
                Some(SymbolKind::Predicate(b)) => {
                    return Err(VocabularyError::InconsistentArity { name: n.to_owned(), first: b, second: a })
                }
                Some(_) => return Err(VocabularyError::KindClash(n.to_owned())),
            }
        }
        for (n, a) in other.functions() {
            match out.kind(n) {
                None => out.add_function(n, a)?,
                Some(SymbolKind::Function(b)) if a == b => {}
                Some(SymbolKind::Function(b)) => {
                    return Err(VocabularyError::InconsistentArity { name: n.to_owned(), first: b, second: a })
                }
                Some(_) => return Err(VocabularyError::KindClash(n.to_owned())),
            }
        }
        for n in other.constants() {
            match out.kind(n) {
                None => out.add_constant(n)?,
                Some(SymbolKind::Constant) => {}
                Some(_) => return Err(VocabularyError::KindClash(n.to_owned())),
            }
        }
        Ok(out)
    }

    /// Applies a symbol renaming; names missing from `map` are kept.
    pub fn renamed(&self, map: &BTreeMap<String, String>) -> Result<Vocabulary, VocabularyError> {
        let rn = |n: &str| map.get(n).cloned().unwrap_or_else(|| n.to_owned());
        let mut out = Vocabulary::with_flags(self.has_eq, self.has_approx);
        for (n, a) in self.predicates() {
            out.add_predicate(&rn(n), a)?;
        }
        for (n, a) in self.functions() {
            out.add_function(&rn(n), a)?;
        }
        for n in self.constants() {
            out.add_constant(&rn(n))?;
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    Const(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Self {
        Term::Var(name.to_owned())
    }

    pub fn constant(name: &str) -> Self {
        Term::Const(name.to_owned())
    }

    pub fn app(name: &str, args: Vec<Term>) -> Self {
        Term::App(name.to_owned(), args)
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Const(_) => {}
            Term::App(_, args) => args.iter().for_each(|t| t.collect_vars(out)),
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn substitute(&self, var: &str, replacement: &Term) -> Term {
        match self {
            Term::Var(v) if v == var => replacement.clone(),
            Term::Var(_) | Term::Const(_) => self.clone(),
            Term::App(f, args) => {
                Term::App(f.clone(), args.iter().map(|t| t.substitute(var, replacement)).collect())
            }
        }
    }

    fn rename_symbols(&self, map: &BTreeMap<String, String>) -> Term {
        let rn = |n: &String| map.get(n).cloned().unwrap_or_else(|| n.clone());
        match self {
            Term::Var(_) => self.clone(),
            Term::Const(c) => Term::Const(rn(c)),
            Term::App(f, args) => Term::App(rn(f), args.iter().map(|t| t.rename_symbols(map)).collect()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Quantifier {
    Forall,
    Exists,
    Integral,
}

/// `∀x φ`, `∃x φ` or `∫ φ dx`: one side of a quantifier equality.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuantExpr {
    pub quantifier: Quantifier,
    pub var: String,
    pub body: Formula,
}

impl QuantExpr {
    pub fn new(quantifier: Quantifier, var: &str, body: Formula) -> Self {
        Self { quantifier, var: var.to_owned(), body }
    }

    pub fn to_formula(&self) -> Formula {
        let body = Box::new(self.body.clone());
        let var = self.var.clone();
        match self.quantifier {
            Quantifier::Forall => Formula::Forall(var, body),
            Quantifier::Exists => Formula::Exists(var, body),
            Quantifier::Integral => Formula::Integral(var, body),
        }
    }

    /// The quantifier expression a formula is, if its top constructor is a quantifier.
    pub fn from_formula(formula: &Formula) -> Option<Self> {
        let (quantifier, var, body) = match formula {
            Formula::Forall(v, b) => (Quantifier::Forall, v, b),
            Formula::Exists(v, b) => (Quantifier::Exists, v, b),
            Formula::Integral(v, b) => (Quantifier::Integral, v, b),
            _ => return None,
        };
        Some(Self { quantifier, var: var.clone(), body: (**body).clone() })
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = self.body.free_vars();
        out.remove(&self.var);
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(String, Vec<Term>),
    Const(Rational01),
    Not(Box<Formula>),
    /// Weak conjunction (min).
    And(Box<Formula>, Box<Formula>),
    /// Weak disjunction (max).
    Or(Box<Formula>, Box<Formula>),
    /// Strong conjunction `&` (Łukasiewicz t-norm).
    StrongAnd(Box<Formula>, Box<Formula>),
    /// Strong disjunction `⊻` (Łukasiewicz t-conorm).
    StrongOr(Box<Formula>, Box<Formula>),
    /// Łukasiewicz implication.
    Implies(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
    Integral(String, Box<Formula>),
    /// Equality between two quantifier expressions; only legal at the top level.
    QEq(Box<QuantExpr>, Box<QuantExpr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("substituting for `{var}` would capture `{captured}` under its binder")]
pub struct CaptureError {
    pub var: String,
    pub captured: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WellFormedError {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("`{name}` expects {expected} argument(s), found {found}")]
    ArityMismatch { name: String, expected: usize, found: usize },
    #[error("`{0}` is not a predicate")]
    NotAPredicate(String),
    #[error("`{0}` is not a function or constant")]
    NotATerm(String),
    #[error("quantifier equality is not enabled in this vocabulary")]
    EqualityDisabled,
    #[error("quantifier equality may only occur at the top level")]
    NestedEquality,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relation {
    Eq,
    Approx,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("the vocabulary does not enable `{0}`")]
pub struct FlagMissing(pub &'static str);

impl Formula {
    pub fn atom(pred: &str, args: Vec<Term>) -> Self {
        Formula::Atom(pred.to_owned(), args)
    }

    pub fn constant(value: Rational01) -> Self {
        Formula::Const(value)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn strong_and(a: Formula, b: Formula) -> Self {
        Formula::StrongAnd(Box::new(a), Box::new(b))
    }

    pub fn strong_or(a: Formula, b: Formula) -> Self {
        Formula::StrongOr(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    /// `(a → b) & (b → a)`, valued `1 - |a - b|`.
    pub fn equiv(a: Formula, b: Formula) -> Self {
        Formula::strong_and(Formula::implies(a.clone(), b.clone()), Formula::implies(b, a))
    }

    pub fn forall(var: &str, body: Formula) -> Self {
        Formula::Forall(var.to_owned(), Box::new(body))
    }

    pub fn exists(var: &str, body: Formula) -> Self {
        Formula::Exists(var.to_owned(), Box::new(body))
    }

    pub fn integral(var: &str, body: Formula) -> Self {
        Formula::Integral(var.to_owned(), Box::new(body))
    }

    pub fn qeq(lhs: QuantExpr, rhs: QuantExpr) -> Self {
        Formula::QEq(Box::new(lhs), Box::new(rhs))
    }

    /// Splits a `(a → b) & (b → a)` formula into `(a, b)`.
    pub fn as_equiv(&self) -> Option<(&Formula, &Formula)> {
        if let Formula::StrongAnd(l, r) = self {
            if let (Formula::Implies(a, b), Formula::Implies(c, d)) = (&**l, &**r) {
                if a == d && b == c {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(_, args) => {
                let mut vars = BTreeSet::new();
                args.iter().for_each(|t| t.collect_vars(&mut vars));
                out.extend(vars.into_iter().filter(|v| !bound.contains(v)));
            }
            Formula::Const(_) => {}
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::StrongAnd(a, b)
            | Formula::StrongOr(a, b)
            | Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) | Formula::Integral(v, body) => {
                bound.push(v.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
            Formula::QEq(l, r) => {
                for side in [l, r] {
                    bound.push(side.var.clone());
                    side.body.collect_free(bound, out);
                    bound.pop();
                }
            }
        }
    }

    /// Replaces the free occurrences of `var` by `term`.
    pub fn substitute(&self, var: &str, term: &Term) -> Result<Formula, CaptureError> {
        let term_vars = term.vars();
        self.subst_inner(var, term, &term_vars)
    }

    fn subst_inner(&self, var: &str, term: &Term, term_vars: &BTreeSet<String>) -> Result<Formula, CaptureError> {
        let rec = |f: &Formula| f.subst_inner(var, term, term_vars).map(Box::new);
        Ok(match self {
            Formula::Atom(p, args) => {
                Formula::Atom(p.clone(), args.iter().map(|t| t.substitute(var, term)).collect())
            }
            Formula::Const(_) => self.clone(),
            Formula::Not(f) => Formula::Not(rec(f)?),
            Formula::And(a, b) => Formula::And(rec(a)?, rec(b)?),
            Formula::Or(a, b) => Formula::Or(rec(a)?, rec(b)?),
            Formula::StrongAnd(a, b) => Formula::StrongAnd(rec(a)?, rec(b)?),
            Formula::StrongOr(a, b) => Formula::StrongOr(rec(a)?, rec(b)?),
            Formula::Implies(a, b) => Formula::Implies(rec(a)?, rec(b)?),
            Formula::Forall(..) | Formula::Exists(..) | Formula::Integral(..) => {
                let q = QuantExpr::from_formula(self).expect("quantifier");
                q.subst_inner(var, term, term_vars)?.to_formula()
            }
            Formula::QEq(l, r) => Formula::QEq(
                Box::new(l.subst_inner(var, term, term_vars)?),
                Box::new(r.subst_inner(var, term, term_vars)?),
            ),
        })
    }

    /// Renames predicate, function and constant symbols; variables are untouched.
    pub fn rename_symbols(&self, map: &BTreeMap<String, String>) -> Formula {
        let rec = |f: &Formula| Box::new(f.rename_symbols(map));
        match self {
            Formula::Atom(p, args) => Formula::Atom(
                map.get(p).cloned().unwrap_or_else(|| p.clone()),
                args.iter().map(|t| t.rename_symbols(map)).collect(),
            ),
            Formula::Const(_) => self.clone(),
            Formula::Not(f) => Formula::Not(rec(f)),
            Formula::And(a, b) => Formula::And(rec(a), rec(b)),
            Formula::Or(a, b) => Formula::Or(rec(a), rec(b)),
            Formula::StrongAnd(a, b) => Formula::StrongAnd(rec(a), rec(b)),
            Formula::StrongOr(a, b) => Formula::StrongOr(rec(a), rec(b)),
            Formula::Implies(a, b) => Formula::Implies(rec(a), rec(b)),
            Formula::Forall(v, b) => Formula::Forall(v.clone(), rec(b)),
            Formula::Exists(v, b) => Formula::Exists(v.clone(), rec(b)),
            Formula::Integral(v, b) => Formula::Integral(v.clone(), rec(b)),
            Formula::QEq(l, r) => Formula::QEq(
                Box::new(QuantExpr { body: l.body.rename_symbols(map), ..(**l).clone() }),
                Box::new(QuantExpr { body: r.body.rename_symbols(map), ..(**r).clone() }),
            ),
        }
    }

    /// Checks symbols, arities and the placement of quantifier equalities.
    pub fn check_well_formed(&self, voc: &Vocabulary) -> Result<(), WellFormedError> {
        match self {
            Formula::QEq(l, r) => {
                if !voc.has_eq {
                    return Err(WellFormedError::EqualityDisabled);
                }
                l.body.check_inner(voc)?;
                r.body.check_inner(voc)
            }
            _ => self.check_inner(voc),
        }
    }

    fn check_inner(&self, voc: &Vocabulary) -> Result<(), WellFormedError> {
        match self {
            Formula::Atom(p, args) => {
                let expected = match voc.predicate_arity(p) {
                    Some(a) => a,
                    None if voc.kind(p).is_some() => return Err(WellFormedError::NotAPredicate(p.clone())),
                    None => return Err(WellFormedError::UnknownSymbol(p.clone())),
                };
                if expected != args.len() {
                    return Err(WellFormedError::ArityMismatch {
                        name: p.clone(),
                        expected,
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|t| check_term(t, voc))
            }
            Formula::Const(_) => Ok(()),
            Formula::Not(f) => f.check_inner(voc),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::StrongAnd(a, b)
            | Formula::StrongOr(a, b)
            | Formula::Implies(a, b) => {
                a.check_inner(voc)?;
                b.check_inner(voc)
            }
            Formula::Forall(_, b) | Formula::Exists(_, b) | Formula::Integral(_, b) => b.check_inner(voc),
            Formula::QEq(..) => Err(WellFormedError::NestedEquality),
        }
    }

    /// The smallest vocabulary over which the formula is well formed.
    pub fn used_vocabulary(&self) -> Result<Vocabulary, VocabularyError> {
        let mut voc = Vocabulary::new();
        self.collect_symbols(&mut voc)?;
        Ok(voc)
    }

    fn collect_symbols(&self, voc: &mut Vocabulary) -> Result<(), VocabularyError> {
        match self {
            Formula::Atom(p, args) => {
                match p.as_str() {
                    SIMILARITY => voc.has_approx = true,
                    IDENTITY => voc.has_eq = true,
                    _ => note_symbol(voc, p, SymbolKind::Predicate(args.len()))?,
                }
                args.iter().try_for_each(|t| collect_term_symbols(t, voc))
            }
            Formula::Const(_) => Ok(()),
            Formula::Not(f) => f.collect_symbols(voc),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::StrongAnd(a, b)
            | Formula::StrongOr(a, b)
            | Formula::Implies(a, b) => {
                a.collect_symbols(voc)?;
                b.collect_symbols(voc)
            }
            Formula::Forall(_, b) | Formula::Exists(_, b) | Formula::Integral(_, b) => b.collect_symbols(voc),
            Formula::QEq(l, r) => {
                voc.has_eq = true;
                l.body.collect_symbols(voc)?;
                r.body.collect_symbols(voc)
            }
        }
    }

    /// Number of connectives and quantifiers on the longest root-to-leaf path.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(..) | Formula::Const(_) => 0,
            Formula::Not(f) => 1 + f.depth(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::StrongAnd(a, b)
            | Formula::StrongOr(a, b)
            | Formula::Implies(a, b) => 1 + a.depth().max(b.depth()),
            Formula::Forall(_, b) | Formula::Exists(_, b) | Formula::Integral(_, b) => 1 + b.depth(),
            Formula::QEq(l, r) => 1 + l.body.depth().max(r.body.depth()),
        }
    }

    /// Replaces every free variable by the constant of the same name.
    pub fn close_with_constants(&self) -> Formula {
        self.free_vars().iter().fold(self.clone(), |f, v| {
            f.substitute(v, &Term::Const(v.clone())).expect("constants cannot be captured")
        })
    }
}

impl QuantExpr {
    fn subst_inner(&self, var: &str, term: &Term, term_vars: &BTreeSet<String>) -> Result<QuantExpr, CaptureError> {
        if self.var == var || !self.body.free_vars().contains(var) {
            return Ok(self.clone());
        }
        if term_vars.contains(&self.var) {
            return Err(CaptureError { var: var.to_owned(), captured: self.var.clone() });
        }
        Ok(QuantExpr { body: self.body.subst_inner(var, term, term_vars)?, ..self.clone() })
    }
}

fn check_term(term: &Term, voc: &Vocabulary) -> Result<(), WellFormedError> {
    match term {
        Term::Var(_) => Ok(()),
        Term::Const(c) => match voc.kind(c) {
            Some(SymbolKind::Constant) => Ok(()),
            Some(_) => Err(WellFormedError::NotATerm(c.clone())),
            None => Err(WellFormedError::UnknownSymbol(c.clone())),
        },
        Term::App(f, args) => {
            let expected = match voc.kind(f) {
                Some(SymbolKind::Function(a)) => a,
                Some(_) => return Err(WellFormedError::NotATerm(f.clone())),
                None => return Err(WellFormedError::UnknownSymbol(f.clone())),
            };
            if expected != args.len() {
                return Err(WellFormedError::ArityMismatch { name: f.clone(), expected, found: args.len() });
            }
            args.iter().try_for_each(|t| check_term(t, voc))
        }
    }
}

fn note_symbol(voc: &mut Vocabulary, name: &str, kind: SymbolKind) -> Result<(), VocabularyError> {
    match (voc.kind(name), kind) {
        (None, SymbolKind::Predicate(a)) => voc.add_predicate(name, a),
        (None, SymbolKind::Function(a)) => voc.add_function(name, a),
        (None, SymbolKind::Constant) => voc.add_constant(name),
        (Some(existing), wanted) if existing == wanted => Ok(()),
        (Some(SymbolKind::Predicate(a)), SymbolKind::Predicate(b))
        | (Some(SymbolKind::Function(a)), SymbolKind::Function(b)) => {
            Err(VocabularyError::InconsistentArity { name: name.to_owned(), first: a, second: b })
        }
        _ => Err(VocabularyError::KindClash(name.to_owned())),
    }
}

fn collect_term_symbols(term: &Term, voc: &mut Vocabulary) -> Result<(), VocabularyError> {
    match term {
        Term::Var(_) => Ok(()),
        Term::Const(c) => note_symbol(voc, c, SymbolKind::Constant),
        Term::App(f, args) => {
            note_symbol(voc, f, SymbolKind::Function(args.len()))?;
            args.iter().try_for_each(|t| collect_term_symbols(t, voc))
        }
    }
}

/// Congruence axioms for identity or similarity: one per function symbol and
/// one per predicate symbol, over fresh variables `x1..xn`, `y1..yn`.
///
/// For identity the outer connective is the classical implication, written
/// `~A \/ B`; for similarity it is the Łukasiewicz implication. A predicate's
/// consequent is `P(x..) -> P(y..)` under identity and the truth-value
/// similarity `P(x..) <-> P(y..)` (see [`Formula::equiv`]) under `≈`.
pub fn congruence_axioms(voc: &Vocabulary, relation: Relation) -> Result<Vec<Formula>, FlagMissing> {
    let rel_name = match relation {
        Relation::Eq if !voc.has_eq => return Err(FlagMissing("=")),
        Relation::Approx if !voc.has_approx => return Err(FlagMissing("≈")),
        Relation::Eq => IDENTITY,
        Relation::Approx => SIMILARITY,
    };
    let xs = |n: usize, prefix: &str| -> Vec<Term> { (1..=n).map(|i| Term::Var(format!("{prefix}{i}"))).collect() };
    let antecedent = |n: usize| -> Formula {
        (1..=n)
            .map(|i| {
                Formula::atom(rel_name, vec![Term::Var(format!("x{i}")), Term::Var(format!("y{i}"))])
            })
            .reduce(Formula::and)
            .expect("positive arity")
    };
    let connect = |ante: Formula, cons: Formula| match relation {
        Relation::Eq => Formula::or(Formula::not(ante), cons),
        Relation::Approx => Formula::implies(ante, cons),
    };

    let mut out = Vec::new();
    for (f, n) in voc.functions() {
        let cons = Formula::atom(rel_name, vec![Term::app(f, xs(n, "x")), Term::app(f, xs(n, "y"))]);
        out.push(connect(antecedent(n), cons));
    }
    for (p, n) in voc.predicates() {
        let (px, py) = (Formula::atom(p, xs(n, "x")), Formula::atom(p, xs(n, "y")));
        let cons = match relation {
            Relation::Eq => Formula::implies(px, py),
            Relation::Approx => Formula::equiv(px, py),
        };
        out.push(connect(antecedent(n), cons));
    }
    Ok(out)
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) | Term::Const(v) => write!(f, "{v}"),
            Term::App(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}
