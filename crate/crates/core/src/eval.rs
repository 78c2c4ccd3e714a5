//! Exact truth values `‖φ‖_{M,v}` over finite weak probabilistic models.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::rational::Rational01;
use crate::satisfaction::{qeq_holds, LevelSpec, QeqError};
use crate::syntax::{Formula, QuantExpr, Term, IDENTITY};
use crate::wpm::{FuzzySubset, WeakProbModel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("variable `{0}` is not bound by the valuation")]
    UnboundVariable(String),
    #[error("symbol `{0}` is not interpreted by the model")]
    UnknownSymbol(String),
    #[error("`{name}` expects {expected} argument(s), found {found}")]
    ArityMismatch { name: String, expected: usize, found: usize },
    #[error("not a sentence; free variables: {}", .0.join(", "))]
    NotASentence(Vec<String>),
    #[error("valuation refers to unknown element `{0}`")]
    UnknownElement(String),
    #[error(transparent)]
    Qeq(Box<QeqError>),
}

impl From<QeqError> for EvalError {
    fn from(e: QeqError) -> Self {
        EvalError::Qeq(Box::new(e))
    }
}

/// Assignment of universe elements (by index) to variables.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Valuation(BTreeMap<String, usize>);

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(mut self, var: &str, element: usize) -> Self {
        self.0.insert(var.to_owned(), element);
        self
    }

    /// Builds a valuation from `(variable, element-name)` pairs.
    pub fn from_names<'a>(
        model: &WeakProbModel,
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self, EvalError> {
        let mut out = Self::new();
        for (var, name) in pairs {
            let e = model.element_index(name).ok_or_else(|| EvalError::UnknownElement(name.to_owned()))?;
            out.0.insert(var.to_owned(), e);
        }
        Ok(out)
    }

    pub fn get(&self, var: &str) -> Option<usize> {
        self.0.get(var).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.0.iter().map(|(k, &v)| (k.as_str(), v))
    }
}

/// Which elements `∀` and `∃` range over. The integral always uses the
/// whole universe, weighted by the measure.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum QuantifierDomain {
    #[default]
    Elements,
    /// Only elements denoted by some constant symbol.
    NamedConstants,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EvalOptions {
    pub domain: QuantifierDomain,
    /// Level configuration used for quantifier equalities.
    pub levels: LevelSpec,
}

struct Evaluator<'m> {
    model: &'m WeakProbModel,
    opts: &'m EvalOptions,
    domain: Vec<usize>,
    env: Vec<(String, usize)>,
}

impl<'m> Evaluator<'m> {
    fn new(model: &'m WeakProbModel, opts: &'m EvalOptions, valuation: &Valuation) -> Self {
        let domain = match opts.domain {
            QuantifierDomain::Elements => (0..model.size()).collect(),
            QuantifierDomain::NamedConstants => {
                let mut d: Vec<usize> = model.constant_map().values().copied().collect();
                d.sort_unstable();
                d.dedup();
                d
            }
        };
        let env = valuation.iter().map(|(k, v)| (k.to_owned(), v)).collect();
        Self { model, opts, domain, env }
    }

    fn term(&self, t: &Term) -> Result<usize, EvalError> {
        match t {
            Term::Var(v) => self
                .env
                .iter()
                .rev()
                .find(|(name, _)| name == v)
                .map(|&(_, e)| e)
                .ok_or_else(|| EvalError::UnboundVariable(v.clone())),
            Term::Const(c) => self.model.constant_element(c).ok_or_else(|| EvalError::UnknownSymbol(c.clone())),
            Term::App(f, args) => {
                let table = self.model.function_table(f).ok_or_else(|| EvalError::UnknownSymbol(f.clone()))?;
                if table.arity != args.len() {
                    return Err(EvalError::ArityMismatch { name: f.clone(), expected: table.arity, found: args.len() });
                }
                let vals = args.iter().map(|a| self.term(a)).collect::<Result<Vec<_>, _>>()?;
                Ok(self.model.apply_function(f, &vals).expect("arity checked"))
            }
        }
    }

    fn with_binding<T>(&mut self, var: &str, element: usize, f: impl FnOnce(&mut Self) -> T) -> T {
        self.env.push((var.to_owned(), element));
        let out = f(self);
        self.env.pop();
        out
    }

    fn formula(&mut self, f: &Formula) -> Result<Rational01, EvalError> {
        Ok(match f {
            Formula::Atom(p, args) => {
                let vals = args.iter().map(|a| self.term(a)).collect::<Result<Vec<_>, _>>()?;
                if p == IDENTITY {
                    if vals.len() != 2 {
                        return Err(EvalError::ArityMismatch { name: p.clone(), expected: 2, found: vals.len() });
                    }
                    return Ok(if vals[0] == vals[1] { Rational01::one() } else { Rational01::zero() });
                }
                let table = self.model.predicate_table(p).ok_or_else(|| EvalError::UnknownSymbol(p.clone()))?;
                if table.arity != vals.len() {
                    return Err(EvalError::ArityMismatch { name: p.clone(), expected: table.arity, found: vals.len() });
                }
                self.model.predicate_value(p, &vals).expect("arity checked").clone()
            }
            Formula::Const(r) => r.clone(),
            Formula::Not(a) => self.formula(a)?.complement(),
            Formula::And(a, b) => self.formula(a)?.min_with(&self.formula(b)?),
            Formula::Or(a, b) => self.formula(a)?.max_with(&self.formula(b)?),
            Formula::StrongAnd(a, b) => self.formula(a)?.strong_and(&self.formula(b)?),
            Formula::StrongOr(a, b) => self.formula(a)?.strong_or(&self.formula(b)?),
            Formula::Implies(a, b) => self.formula(a)?.implies(&self.formula(b)?),
            Formula::Forall(x, body) => {
                let mut acc = Rational01::one();
                for e in self.domain.clone() {
                    let v = self.with_binding(x, e, |s| s.formula(body))?;
                    acc = acc.min_with(&v);
                }
                acc
            }
            Formula::Exists(x, body) => {
                let mut acc = Rational01::zero();
                for e in self.domain.clone() {
                    let v = self.with_binding(x, e, |s| s.formula(body))?;
                    acc = acc.max_with(&v);
                }
                acc
            }
            Formula::Integral(x, body) => {
                let mut acc = BigRational::zero();
                for e in 0..self.model.size() {
                    let v = self.with_binding(x, e, |s| s.formula(body))?;
                    acc += v.value() * self.model.weight(e).value();
                }
                Rational01::clamped(acc)
            }
            Formula::QEq(l, r) => {
                let valuation = self.current_valuation();
                if qeq_holds(l, r, self.model, &valuation, self.opts)? {
                    Rational01::one()
                } else {
                    Rational01::zero()
                }
            }
        })
    }

    fn current_valuation(&self) -> Valuation {
        let mut v = Valuation::new();
        for (k, e) in &self.env {
            v.0.insert(k.clone(), *e);
        }
        v
    }
}

/// Truth value of `formula` in `model` under `valuation`.
pub fn eval(formula: &Formula, model: &WeakProbModel, valuation: &Valuation) -> Result<Rational01, EvalError> {
    eval_with(formula, model, valuation, &EvalOptions::default())
}

pub fn eval_with(
    formula: &Formula,
    model: &WeakProbModel,
    valuation: &Valuation,
    opts: &EvalOptions,
) -> Result<Rational01, EvalError> {
    Evaluator::new(model, opts, valuation).formula(formula)
}

/// Truth value of a sentence.
pub fn eval_closed(formula: &Formula, model: &WeakProbModel) -> Result<Rational01, EvalError> {
    eval_closed_with(formula, model, &EvalOptions::default())
}

pub fn eval_closed_with(formula: &Formula, model: &WeakProbModel, opts: &EvalOptions) -> Result<Rational01, EvalError> {
    let free = formula.free_vars();
    if !free.is_empty() {
        return Err(EvalError::NotASentence(free.into_iter().collect()));
    }
    eval_with(formula, model, &Valuation::new(), opts)
}

/// The matrix function `m ↦ ‖body‖_{M, v[x ↦ m]}` of a quantifier expression.
pub fn matrix_function(
    expr: &QuantExpr,
    model: &WeakProbModel,
    valuation: &Valuation,
    opts: &EvalOptions,
) -> Result<FuzzySubset, EvalError> {
    let mut ev = Evaluator::new(model, opts, valuation);
    let values = (0..model.size())
        .map(|e| ev.with_binding(&expr.var, e, |s| s.formula(&expr.body)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FuzzySubset::unary(values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_formula;
    use crate::rational::q;

    fn uniform_ab() -> WeakProbModel {
        WeakProbModel::new(vec!["a".into(), "b".into()], vec![q(1, 2), q(1, 2)])
            .unwrap()
            .predicate("P", 1, vec![q(1, 1), q(0, 1)])
            .unwrap()
    }

    /// Three named elements with φ-values 1/2, 4/5, 1.
    fn three_constants() -> WeakProbModel {
        WeakProbModel::new(vec!["one".into(), "two".into(), "three".into()], vec![q(1, 3); 3])
            .unwrap()
            .predicate("Phi", 1, vec![q(1, 2), q(4, 5), q(1, 1)])
            .unwrap()
            .constant("c1", 0)
            .unwrap()
            .constant("c2", 1)
            .unwrap()
            .constant("c3", 2)
            .unwrap()
    }

    fn sentence(text: &str, m: &WeakProbModel) -> Formula {
        parse_formula(text, &m.vocabulary()).unwrap()
    }

    #[test]
    fn implication_values() {
        let m = uniform_ab();
        assert_eq!(eval_closed(&sentence("rat(7/10) -> rat(3/10)", &m), &m).unwrap(), q(3, 5));
        assert_eq!(eval_closed(&sentence("rat(3/10) -> rat(7/10)", &m), &m).unwrap(), q(1, 1));
    }

    #[test]
    fn quantifiers_over_named_elements() {
        let m = three_constants();
        assert_eq!(eval_closed(&sentence("EX x. Phi(x)", &m), &m).unwrap(), q(1, 1));
        assert_eq!(eval_closed(&sentence("ALL x. Phi(x)", &m), &m).unwrap(), q(1, 2));
        let literal = EvalOptions { domain: QuantifierDomain::NamedConstants, ..Default::default() };
        let all = sentence("ALL x. Phi(x)", &m);
        assert_eq!(eval_closed_with(&all, &m, &literal).unwrap(), q(1, 2));
    }

    #[test]
    fn named_constant_domain_can_differ() {
        let m = three_constants().reduct(&{
            let mut v = crate::syntax::Vocabulary::new();
            v.add_predicate("Phi", 1).unwrap();
            v.add_constant("c3").unwrap();
            v
        });
        let m = m.unwrap();
        let all = sentence("ALL x. Phi(x)", &m);
        let literal = EvalOptions { domain: QuantifierDomain::NamedConstants, ..Default::default() };
        assert_eq!(eval_closed_with(&all, &m, &literal).unwrap(), q(1, 1));
        assert_eq!(eval_closed(&all, &m).unwrap(), q(1, 2));
    }

    #[test]
    fn closed_evaluation() {
        let m = uniform_ab();
        assert_eq!(eval_closed(&sentence("rat(1/2)", &m), &m).unwrap(), q(1, 2));
        assert_eq!(eval_closed(&sentence("INT P(x) dx", &m), &m).unwrap(), q(1, 2));
        assert_eq!(
            eval_closed(&sentence("P(x)", &m), &m),
            Err(EvalError::NotASentence(vec!["x".into()]))
        );
    }

    #[test]
    fn open_evaluation_and_errors() {
        let m = uniform_ab();
        let f = sentence("P(x) -> P(y)", &m);
        let v = Valuation::from_names(&m, [("x", "a"), ("y", "b")]).unwrap();
        assert_eq!(eval(&f, &m, &v).unwrap(), q(0, 1));
        assert_eq!(eval(&f, &m, &Valuation::new().bind("x", 0)), Err(EvalError::UnboundVariable("y".into())));
        let foreign = Formula::atom("Q", vec![Term::var("x")]);
        assert_eq!(eval(&foreign, &m, &v), Err(EvalError::UnknownSymbol("Q".into())));
        assert!(matches!(Valuation::from_names(&m, [("x", "zz")]), Err(EvalError::UnknownElement(_))));
    }

    #[test]
    fn shadowing_uses_innermost_binder() {
        let m = uniform_ab();
        // ∀x inside binds x again; the outer valuation x ↦ b must not leak in.
        let f = sentence("ALL x. P(x)", &m);
        let v = Valuation::new().bind("x", 1);
        assert_eq!(eval(&f, &m, &v).unwrap(), q(0, 1));
        let g = sentence("EX x. P(x)", &m);
        assert_eq!(eval(&g, &m, &v).unwrap(), q(1, 1));
    }

    #[test]
    fn identity_atom_is_crisp() {
        let m = uniform_ab();
        let voc = m.vocabulary();
        let f = parse_formula("INT EQ(x, x) dx", &voc).unwrap();
        assert_eq!(eval_closed(&f, &m).unwrap(), q(1, 1));
        let g = parse_formula("INT INT EQ(x, y) dx dy", &voc).unwrap();
        assert_eq!(eval_closed(&g, &m).unwrap(), q(1, 2));
    }

    #[test]
    fn matrix_of_quantifier_expression() {
        let m = uniform_ab();
        let e = QuantExpr::new(crate::syntax::Quantifier::Integral, "x", sentence("~P(x)", &m));
        let f = matrix_function(&e, &m, &Valuation::new(), &EvalOptions::default()).unwrap();
        assert_eq!(f.values, vec![q(0, 1), q(1, 1)]);
    }
}
