//! Satisfaction, quantifier equalities, approximation systems and
//! finite-pool theories.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::eval::{eval_closed_with, matrix_function, EvalError, EvalOptions, Valuation};
use crate::rational::Rational01;
use crate::syntax::{Formula, QuantExpr};
use crate::wpm::{level_set, mu_elements, FuzzySubset, ModelError, WeakProbModel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QeqError {
    #[error("containment {{g > {alpha_j}}} ⊆ {{f > {alpha_i}}} fails at pair ({i}, {j}); witness `{witness}`")]
    ContainmentViolated { i: usize, j: usize, alpha_i: Rational01, alpha_j: Rational01, witness: String },
    #[error("containment g⁻¹(1) ⊆ f⁻¹(1) fails; witness `{witness}`")]
    DiracContainmentViolated { witness: String },
    #[error("matrix takes the non-crisp value {0}")]
    NotCrisp(Rational01),
    #[error("quantifier body has free variables other than its bound one: {}", .0.join(", "))]
    ArityMismatch(Vec<String>),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LevelConfigError {
    #[error("levels must be strictly ascending")]
    NotAscending,
    #[error("level {0} lies outside the open interval (0, 1)")]
    OutOfRange(Rational01),
    #[error("pair ({0}, {1}) refers past the last level")]
    PairOutOfRange(usize, usize),
}

/// Thresholds `α` and the `(i, j)` pairs of levels compared by a quantifier
/// equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelConfig {
    levels: Vec<Rational01>,
    pairing: Vec<(usize, usize)>,
}

impl LevelConfig {
    pub fn new(levels: Vec<Rational01>, pairing: Vec<(usize, usize)>) -> Result<Self, LevelConfigError> {
        for l in &levels {
            if l.is_zero() || l.is_one() {
                return Err(LevelConfigError::OutOfRange(l.clone()));
            }
        }
        if levels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(LevelConfigError::NotAscending);
        }
        if let Some(&(i, j)) = pairing.iter().find(|&&(i, j)| i >= levels.len() || j >= levels.len()) {
            return Err(LevelConfigError::PairOutOfRange(i, j));
        }
        Ok(Self { levels, pairing })
    }

    /// Pairs every level with itself.
    pub fn diagonal(levels: Vec<Rational01>) -> Result<Self, LevelConfigError> {
        let pairing = (0..levels.len()).map(|i| (i, i)).collect();
        Self::new(levels, pairing)
    }

    pub fn levels(&self) -> &[Rational01] {
        &self.levels
    }

    pub fn pairing(&self) -> &[(usize, usize)] {
        &self.pairing
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub enum LevelSpec {
    /// Diagonal pairing over the distinct values of both matrices in `(0, 1)`.
    #[default]
    Auto,
    Fixed(LevelConfig),
}

impl LevelSpec {
    fn resolve(&self, f: &FuzzySubset, g: &FuzzySubset) -> LevelConfig {
        match self {
            LevelSpec::Fixed(cfg) => cfg.clone(),
            LevelSpec::Auto => {
                let levels: BTreeSet<Rational01> =
                    f.range().into_iter().chain(g.range()).filter(|v| !v.is_zero() && !v.is_one()).collect();
                LevelConfig::diagonal(levels.into_iter().collect()).expect("distinct values in (0, 1)")
            }
        }
    }
}

/// Dirac case: `μ(f⁻¹(1) \ g⁻¹(1)) = 0` for crisp matrices, after checking
/// `g⁻¹(1) ⊆ f⁻¹(1)`.
pub fn hsat_qeq_dirac(f: &FuzzySubset, g: &FuzzySubset, model: &WeakProbModel) -> Result<bool, QeqError> {
    for v in f.values.iter().chain(&g.values) {
        if !v.is_crisp() {
            return Err(QeqError::NotCrisp(v.clone()));
        }
    }
    let ones = |h: &FuzzySubset| -> BTreeSet<usize> { (0..h.values.len()).filter(|&i| h.values[i].is_one()).collect() };
    let (fs, gs) = (ones(f), ones(g));
    if let Some(&w) = gs.difference(&fs).next() {
        return Err(QeqError::DiracContainmentViolated { witness: model.element_name(w).to_owned() });
    }
    let diff: BTreeSet<usize> = fs.difference(&gs).copied().collect();
    Ok(mu_elements(model, &diff).is_zero())
}

/// The level-set condition alone: for every configured pair, containment of
/// `{g > α_j}` in `{f > α_i}` is checked, then the measures of
/// `{f > α_i} \ {g > α_j}` must sum to exactly zero.
pub fn level_set_condition(
    f: &FuzzySubset,
    g: &FuzzySubset,
    model: &WeakProbModel,
    cfg: &LevelConfig,
) -> Result<bool, QeqError> {
    let mut total = Rational01::zero();
    for &(i, j) in cfg.pairing() {
        let (ai, aj) = (&cfg.levels()[i], &cfg.levels()[j]);
        let fs = level_set(f, ai);
        let gs = level_set(g, aj);
        if let Some(&w) = gs.difference(&fs).next() {
            return Err(QeqError::ContainmentViolated {
                i,
                j,
                alpha_i: ai.clone(),
                alpha_j: aj.clone(),
                witness: model.element_name(w).to_owned(),
            });
        }
        let diff: BTreeSet<usize> = fs.difference(&gs).copied().collect();
        total = total.strong_or(&mu_elements(model, &diff));
    }
    Ok(total.is_zero())
}

/// Decides `f = g` for two matrices, using the Dirac check when both are crisp.
pub fn qeq_matrices(f: &FuzzySubset, g: &FuzzySubset, model: &WeakProbModel, levels: &LevelSpec) -> Result<bool, QeqError> {
    if f.is_crisp() && g.is_crisp() {
        return hsat_qeq_dirac(f, g, model);
    }
    level_set_condition(f, g, model, &levels.resolve(f, g))
}

/// Quantifier equality under a valuation of the outer variables.
pub fn qeq_holds(
    lhs: &QuantExpr,
    rhs: &QuantExpr,
    model: &WeakProbModel,
    valuation: &Valuation,
    opts: &EvalOptions,
) -> Result<bool, QeqError> {
    let unbound: Vec<String> = lhs
        .free_vars()
        .into_iter()
        .chain(rhs.free_vars())
        .filter(|v| valuation.get(v).is_none())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if !unbound.is_empty() {
        return Err(QeqError::ArityMismatch(unbound));
    }
    let f = matrix_function(lhs, model, valuation, opts)?;
    let g = matrix_function(rhs, model, valuation, opts)?;
    qeq_matrices(&f, &g, model, &opts.levels)
}

/// Quantifier equality between two closed quantifier expressions.
pub fn hsat_qeq(lhs: &QuantExpr, rhs: &QuantExpr, model: &WeakProbModel, levels: &LevelSpec) -> Result<bool, QeqError> {
    let opts = EvalOptions { levels: levels.clone(), ..Default::default() };
    qeq_holds(lhs, rhs, model, &Valuation::new(), &opts)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SatError {
    #[error("not a sentence; free variables: {}", .0.join(", "))]
    NotASentence(Vec<String>),
    #[error("sentence `{0}` is not in the approximation system")]
    SentenceNotInSystem(String),
    #[error("element `{0}` of the smaller structure is missing from the larger one")]
    NotASubuniverse(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Qeq(#[from] QeqError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn require_sentence(f: &Formula) -> Result<(), SatError> {
    let free = f.free_vars();
    if free.is_empty() {
        Ok(())
    } else {
        Err(SatError::NotASentence(free.into_iter().collect()))
    }
}

/// `M ⊨^H φ`.
pub fn hsat(formula: &Formula, model: &WeakProbModel) -> Result<bool, SatError> {
    hsat_with(formula, model, &EvalOptions::default())
}

pub fn hsat_with(formula: &Formula, model: &WeakProbModel, opts: &EvalOptions) -> Result<bool, SatError> {
    require_sentence(formula)?;
    match formula {
        Formula::QEq(l, r) => Ok(qeq_holds(l, r, model, &Valuation::new(), opts)?),
        Formula::Not(inner) => Ok(eval_closed_with(inner, model, opts)?.is_zero()),
        _ => Ok(eval_closed_with(formula, model, opts)?.is_one()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("relation pair ({0}, {1}) refers past the last sentence")]
pub struct PairOutOfRange(pub usize, pub usize);

/// A finite approximation relation `φ ⊲ φ′` over an explicit sentence pool.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproximationSystem {
    sentences: Vec<Formula>,
    rel: BTreeSet<(usize, usize)>,
}

impl ApproximationSystem {
    pub fn new(
        sentences: Vec<Formula>,
        rel: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, PairOutOfRange> {
        let rel: BTreeSet<(usize, usize)> = rel.into_iter().collect();
        if let Some(&(i, j)) = rel.iter().find(|&&(i, j)| i >= sentences.len() || j >= sentences.len()) {
            return Err(PairOutOfRange(i, j));
        }
        Ok(Self { sentences, rel })
    }

    /// Each sentence approximates exactly itself.
    pub fn diagonal(sentences: Vec<Formula>) -> Self {
        let rel = (0..sentences.len()).map(|i| (i, i)).collect();
        Self { sentences, rel }
    }

    pub fn sentences(&self) -> &[Formula] {
        &self.sentences
    }

    pub fn rel(&self) -> &BTreeSet<(usize, usize)> {
        &self.rel
    }

    pub fn index_of(&self, formula: &Formula) -> Option<usize> {
        self.sentences.iter().position(|s| s == formula)
    }

    pub fn approximations(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.rel.range((i, 0)..=(i, usize::MAX)).map(|&(_, j)| j)
    }

    pub fn transitive_closure(&self) -> Self {
        let n = self.sentences.len();
        let mut reach = vec![vec![false; n]; n];
        for &(i, j) in &self.rel {
            reach[i][j] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if reach[i][k] {
                    for j in 0..n {
                        if reach[k][j] {
                            reach[i][j] = true;
                        }
                    }
                }
            }
        }
        let rel = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| reach[i][j]).collect();
        Self { sentences: self.sentences.clone(), rel }
    }

    /// Triples `(i, j, k)` with `i ⊲ j`, `j ⊲ k` but not `i ⊲ k`.
    pub fn transitivity_violations(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for &(i, j) in &self.rel {
            for k in self.approximations(j) {
                if !self.rel.contains(&(i, k)) {
                    out.push((i, j, k));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ApproxViolation {
    Transitivity { i: usize, j: usize, k: usize },
    /// `i ⊲ j`, `i` is in the model's language and `j` is not.
    VocabularyClosure { model: usize, i: usize, j: usize },
    /// `i ⊲ j` and the model satisfies `i` but not `j`.
    Monotonicity { model: usize, i: usize, j: usize },
    Evaluation { model: usize, sentence: usize, message: String },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ApproxSystemReport {
    pub models: usize,
    pub violations: Vec<ApproxViolation>,
}

impl ApproxSystemReport {
    pub fn valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Per-sentence satisfaction in one model; `None` for sentences outside the
/// model's language.
fn satisfaction_table(
    sys: &ApproximationSystem,
    model: &WeakProbModel,
    m: usize,
    violations: &mut Vec<ApproxViolation>,
) -> Vec<Option<bool>> {
    let voc = model.vocabulary();
    sys.sentences
        .iter()
        .enumerate()
        .map(|(i, s)| {
            if s.check_well_formed(&voc).is_err() {
                return None;
            }
            match hsat(s, model) {
                Ok(b) => Some(b),
                Err(e) => {
                    violations.push(ApproxViolation::Evaluation { model: m, sentence: i, message: e.to_string() });
                    None
                }
            }
        })
        .collect()
}

pub fn validate_approximation_system(sys: &ApproximationSystem, models: &[WeakProbModel]) -> ApproxSystemReport {
    let mut violations: Vec<ApproxViolation> =
        sys.transitivity_violations().into_iter().map(|(i, j, k)| ApproxViolation::Transitivity { i, j, k }).collect();
    for (m, model) in models.iter().enumerate() {
        let voc = model.vocabulary();
        let in_language: Vec<bool> = sys.sentences.iter().map(|s| s.check_well_formed(&voc).is_ok()).collect();
        let sat = satisfaction_table(sys, model, m, &mut violations);
        for &(i, j) in &sys.rel {
            if in_language[i] && !in_language[j] {
                violations.push(ApproxViolation::VocabularyClosure { model: m, i, j });
            }
            if sat[i] == Some(true) && sat[j] == Some(false) {
                violations.push(ApproxViolation::Monotonicity { model: m, i, j });
            }
        }
    }
    ApproxSystemReport { models: models.len(), violations }
}

/// `M ⊨^HA φ`: every approximation of `φ` in `sys` is H-satisfied.
pub fn hasat(formula: &Formula, model: &WeakProbModel, sys: &ApproximationSystem) -> Result<bool, SatError> {
    let i = sys.index_of(formula).ok_or_else(|| SatError::SentenceNotInSystem(formula.to_string()))?;
    hasat_index(i, model, sys)
}

pub fn hasat_index(i: usize, model: &WeakProbModel, sys: &ApproximationSystem) -> Result<bool, SatError> {
    for j in sys.approximations(i) {
        if !hsat(&sys.sentences[j], model)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Approximate satisfaction, treating sentences outside `sys` as their own
/// sole approximation.
fn hasat_or_self(formula: &Formula, model: &WeakProbModel, sys: &ApproximationSystem) -> Result<bool, SatError> {
    match sys.index_of(formula) {
        Some(i) => hasat_index(i, model, sys),
        None => hsat(formula, model),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub enum WeakNegation {
    /// Syntactic `~`.
    #[default]
    Standard,
    Explicit(BTreeMap<Formula, Formula>),
}

impl WeakNegation {
    pub fn apply(&self, formula: &Formula) -> Option<Formula> {
        match self {
            WeakNegation::Standard => Some(Formula::not(formula.clone())),
            WeakNegation::Explicit(map) => map.get(formula).cloned(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeakNegationViolation {
    /// The map is undefined on a sentence that needs it.
    NotTotal { sentence: String },
    /// Neither `φ` nor its weak negation is H-satisfied.
    Totality { model: usize, sentence: usize },
    /// The weak negation of an approximation of `φ` and `φ` itself are both
    /// approximately satisfied.
    Exclusion { model: usize, sentence: usize, approximation: usize },
    Evaluation { model: usize, sentence: usize, message: String },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WeakNegationReport {
    pub checked: usize,
    pub violations: Vec<WeakNegationViolation>,
}

impl WeakNegationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn totality_failures(&self) -> usize {
        self.violations.iter().filter(|v| matches!(v, WeakNegationViolation::Totality { .. })).count()
    }

    pub fn exclusion_failures(&self) -> usize {
        self.violations.iter().filter(|v| matches!(v, WeakNegationViolation::Exclusion { .. })).count()
    }
}

/// Checks both weak-negation clauses for every model and every pool
/// sentence. `pool` indexes into `sys` where a sentence occurs there;
/// sentences outside the system approximate only themselves.
pub fn check_weak_negation(
    neg: &WeakNegation,
    pool: &[Formula],
    sys: &ApproximationSystem,
    models: &[WeakProbModel],
) -> WeakNegationReport {
    let mut report = WeakNegationReport::default();
    let mut negations = Vec::with_capacity(pool.len());
    for s in pool {
        let n = neg.apply(s);
        if n.is_none() {
            report.violations.push(WeakNegationViolation::NotTotal { sentence: s.to_string() });
        }
        negations.push(n);
    }
    for (m, model) in models.iter().enumerate() {
        for (i, s) in pool.iter().enumerate() {
            let Some(ns) = &negations[i] else { continue };
            report.checked += 1;
            let clause_a = (|| -> Result<bool, SatError> { Ok(hsat(s, model)? || hsat(ns, model)?) })();
            match clause_a {
                Ok(true) => {}
                Ok(false) => report.violations.push(WeakNegationViolation::Totality { model: m, sentence: i }),
                Err(e) => {
                    report.violations.push(WeakNegationViolation::Evaluation { model: m, sentence: i, message: e.to_string() });
                    continue;
                }
            }
            let approximations: Vec<usize> = match sys.index_of(s) {
                Some(k) => sys.approximations(k).collect(),
                None => Vec::new(),
            };
            let own = match hasat_or_self(s, model, sys) {
                Ok(b) => b,
                Err(e) => {
                    report.violations.push(WeakNegationViolation::Evaluation { model: m, sentence: i, message: e.to_string() });
                    continue;
                }
            };
            let mut candidates: Vec<(usize, Formula)> =
                approximations.iter().map(|&j| (j, sys.sentences[j].clone())).collect();
            if sys.index_of(s).is_none() {
                candidates.push((usize::MAX, s.clone()));
            }
            for (j, approx) in candidates {
                let Some(n_approx) = neg.apply(&approx) else {
                    report.violations.push(WeakNegationViolation::NotTotal { sentence: approx.to_string() });
                    continue;
                };
                match hasat_or_self(&n_approx, model, sys) {
                    Ok(true) if own => {
                        report.violations.push(WeakNegationViolation::Exclusion { model: m, sentence: i, approximation: j })
                    }
                    Ok(_) => {}
                    Err(e) => report.violations.push(WeakNegationViolation::Evaluation {
                        model: m,
                        sentence: i,
                        message: e.to_string(),
                    }),
                }
            }
        }
    }
    report
}

/// `{φ ∈ pool : M ⊨^HA φ}`, in pool order.
pub fn theory_of(model: &WeakProbModel, pool: &[Formula], sys: &ApproximationSystem) -> Result<Vec<Formula>, SatError> {
    let mut out = Vec::new();
    for s in pool {
        if hasat(s, model, sys)? {
            out.push(s.clone());
        }
    }
    Ok(out)
}

/// Whether `small` is an elementary substructure of `large` relative to a
/// sentence pool. Both structures are expanded by constants naming the
/// elements of `small`; pool sentences may use those names.
pub fn check_elementary_substructure(
    small: &WeakProbModel,
    large: &WeakProbModel,
    pool: &[Formula],
    sys: &ApproximationSystem,
) -> Result<bool, SatError> {
    let mut large_exp = large.clone();
    for name in small.universe() {
        let e = large.element_index(name).ok_or_else(|| SatError::NotASubuniverse(name.clone()))?;
        match large.constant_element(name) {
            Some(existing) if existing == e => {}
            Some(_) => return Err(ModelError::DuplicateSymbol(name.clone()).into()),
            None => large_exp.add_constant(name, e)?,
        }
    }
    let small_exp = small.expand_with_element_constants()?;
    for s in theory_of(&small_exp, pool, sys)? {
        if !hasat(&s, &large_exp, sys)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_formula;
    use crate::rational::q;
    use crate::syntax::{Quantifier, Term};

    fn model(names: &[&str], mu: Vec<Rational01>) -> WeakProbModel {
        WeakProbModel::new(names.iter().map(|s| s.to_string()).collect(), mu).unwrap()
    }

    fn unary(vals: &[(i64, i64)]) -> FuzzySubset {
        FuzzySubset::unary(vals.iter().map(|&(n, d)| q(n, d)).collect())
    }

    #[test]
    fn example_two_item_one() {
        let m = model(&["a"], vec![q(1, 1)])
            .predicate("Phi", 1, vec![q(9, 10)])
            .unwrap()
            .predicate("Psi", 1, vec![q(1, 1)])
            .unwrap()
            .constant("c", 0)
            .unwrap();
        let voc = m.vocabulary();
        let sat = |t: &str| hsat(&parse_formula(t, &voc).unwrap(), &m).unwrap();
        assert!(sat("Phi(c) \\/ Psi(c)"));
        assert!(!sat("Phi(c) & Psi(c)"));
        assert!(!sat("Phi(c) /\\ Psi(c)"));
    }

    #[test]
    fn negation_needs_value_zero() {
        let m = model(&["a"], vec![q(1, 1)]);
        let half = Formula::constant(q(1, 2));
        assert!(!hsat(&half, &m).unwrap());
        assert!(!hsat(&Formula::not(half), &m).unwrap());
        assert!(hsat(&Formula::not(Formula::constant(q(0, 1))), &m).unwrap());
        let open = Formula::atom("P", vec![Term::var("x")]);
        assert_eq!(hsat(&open, &m), Err(SatError::NotASentence(vec!["x".into()])));
    }

    #[test]
    fn dirac_examples() {
        let f = unary(&[(1, 1), (1, 1)]);
        let g = unary(&[(1, 1), (0, 1)]);
        assert!(hsat_qeq_dirac(&f, &f, &model(&["a", "b"], vec![q(1, 2), q(1, 2)])).unwrap());
        assert!(hsat_qeq_dirac(&f, &g, &model(&["a", "b"], vec![q(1, 1), q(0, 1)])).unwrap());
        assert!(!hsat_qeq_dirac(&f, &g, &model(&["a", "b"], vec![q(1, 2), q(1, 2)])).unwrap());
        assert!(matches!(
            hsat_qeq_dirac(&g, &f, &model(&["a", "b"], vec![q(1, 2), q(1, 2)])),
            Err(QeqError::DiracContainmentViolated { .. })
        ));
        assert!(matches!(hsat_qeq_dirac(&unary(&[(1, 2), (0, 1)]), &g, &model(&["a", "b"], vec![q(1, 2), q(1, 2)])), Err(QeqError::NotCrisp(_))));
    }

    #[test]
    fn level_set_examples() {
        let f = unary(&[(3, 4), (1, 4)]);
        let g = unary(&[(3, 4), (0, 1)]);
        let cfg = LevelConfig::new(vec![q(1, 2)], vec![(0, 0)]).unwrap();
        assert!(level_set_condition(&f, &g, &model(&["a", "b"], vec![q(1, 1), q(0, 1)]), &cfg).unwrap());
        // {f > 1/2} = {g > 1/2} = {a}; a finer level exposes b.
        let fine = LevelConfig::diagonal(vec![q(1, 8), q(1, 2)]).unwrap();
        let uniform = model(&["a", "b"], vec![q(1, 2), q(1, 2)]);
        assert!(level_set_condition(&f, &g, &uniform, &cfg).unwrap());
        assert!(!level_set_condition(&f, &g, &uniform, &fine).unwrap());
        // Automatic levels are the attained values 1/4 and 3/4; f(b) = 1/4 is
        // not strictly above either, so b never enters a difference.
        assert!(qeq_matrices(&f, &g, &uniform, &LevelSpec::Auto).unwrap());
        assert!(qeq_matrices(&f, &g, &model(&["a", "b"], vec![q(1, 1), q(0, 1)]), &LevelSpec::Auto).unwrap());
        assert!(matches!(
            level_set_condition(&g, &f, &uniform, &fine),
            Err(QeqError::ContainmentViolated { i: 0, j: 0, .. })
        ));
    }

    #[test]
    fn level_config_validation() {
        assert_eq!(LevelConfig::new(vec![q(0, 1)], vec![]), Err(LevelConfigError::OutOfRange(q(0, 1))));
        assert_eq!(LevelConfig::new(vec![q(1, 2), q(1, 4)], vec![]), Err(LevelConfigError::NotAscending));
        assert_eq!(LevelConfig::new(vec![q(1, 2)], vec![(0, 1)]), Err(LevelConfigError::PairOutOfRange(0, 1)));
    }

    #[test]
    fn qeq_formula_in_hsat_and_eval() {
        let m = model(&["a", "b"], vec![q(1, 2), q(1, 2)])
            .predicate("P", 1, vec![q(3, 4), q(1, 4)])
            .unwrap()
            .predicate("Q", 1, vec![q(3, 4), q(1, 4)])
            .unwrap();
        let voc = m.vocabulary();
        let f = parse_formula("INT P(x) dx = INT Q(y) dy", &voc).unwrap();
        assert!(hsat(&f, &m).unwrap());
        assert_eq!(crate::eval::eval_closed(&f, &m).unwrap(), q(1, 1));
        let l = QuantExpr::new(Quantifier::Integral, "x", Formula::atom("P", vec![Term::var("x")]));
        let r = QuantExpr::new(Quantifier::Forall, "x", Formula::atom("P", vec![Term::var("z")]));
        assert_eq!(hsat_qeq(&l, &r, &m, &LevelSpec::Auto), Err(QeqError::ArityMismatch(vec!["z".into()])));
    }

    fn ab_model(p: (i64, i64), q_: (i64, i64)) -> WeakProbModel {
        model(&["a"], vec![q(1, 1)])
            .predicate("P", 1, vec![q(p.0, p.1)])
            .unwrap()
            .predicate("Q", 1, vec![q(q_.0, q_.1)])
            .unwrap()
            .constant("c", 0)
            .unwrap()
    }

    fn pq_sentences() -> Vec<Formula> {
        let voc = ab_model((0, 1), (0, 1)).vocabulary();
        ["P(c)", "P(c) \\/ Q(c)"].iter().map(|t| parse_formula(t, &voc).unwrap()).collect()
    }

    #[test]
    fn approximation_system_examples() {
        let models = vec![ab_model((0, 1), (1, 1)), ab_model((1, 1), (0, 1)), ab_model((1, 2), (1, 2))];
        let diag = ApproximationSystem::diagonal(pq_sentences());
        assert!(validate_approximation_system(&diag, &models).valid());
        let weakening = ApproximationSystem::new(pq_sentences(), [(0, 0), (1, 1), (0, 1)]).unwrap();
        assert!(validate_approximation_system(&weakening, &models).valid());
        let strengthening = ApproximationSystem::new(pq_sentences(), [(1, 0)]).unwrap();
        let report = validate_approximation_system(&strengthening, &models);
        assert_eq!(report.violations, vec![ApproxViolation::Monotonicity { model: 0, i: 1, j: 0 }]);
        let broken = ApproximationSystem::new(pq_sentences(), [(0, 1), (1, 0)]).unwrap();
        assert_eq!(validate_approximation_system(&broken, &[]).violations.len(), 2);
        assert!(broken.transitive_closure().transitivity_violations().is_empty());
    }

    #[test]
    fn vocabulary_closure_is_checked() {
        let m = model(&["a"], vec![q(1, 1)]).predicate("P", 1, vec![q(1, 1)]).unwrap().constant("c", 0).unwrap();
        let sys = ApproximationSystem::new(pq_sentences(), [(0, 1)]).unwrap();
        let report = validate_approximation_system(&sys, &[m]);
        assert_eq!(report.violations, vec![ApproxViolation::VocabularyClosure { model: 0, i: 0, j: 1 }]);
    }

    #[test]
    fn approximate_satisfaction() {
        let s = pq_sentences();
        let isolated = ApproximationSystem::new(s.clone(), [(0, 1)]).unwrap();
        assert!(hasat(&s[1], &ab_model((0, 1), (0, 1)), &isolated).unwrap());
        let diag = ApproximationSystem::diagonal(s.clone());
        for m in [ab_model((0, 1), (1, 1)), ab_model((1, 1), (0, 1)), ab_model((1, 2), (0, 1))] {
            for f in &s {
                assert_eq!(hasat(f, &m, &diag).unwrap(), hsat(f, &m).unwrap());
            }
        }
        let outside = Formula::constant(q(1, 1));
        assert!(matches!(hasat(&outside, &ab_model((0, 1), (0, 1)), &diag), Err(SatError::SentenceNotInSystem(_))));
    }

    #[test]
    fn weak_negation_clauses() {
        let s = pq_sentences();
        let diag = ApproximationSystem::diagonal(s.clone());
        let crisp = vec![ab_model((0, 1), (1, 1)), ab_model((1, 1), (0, 1))];
        assert!(check_weak_negation(&WeakNegation::Standard, &s, &diag, &crisp).passed());
        let fuzzy = vec![ab_model((1, 2), (0, 1))];
        let report = check_weak_negation(&WeakNegation::Standard, &s, &diag, &fuzzy);
        assert_eq!(report.totality_failures(), 2);
        assert_eq!(report.exclusion_failures(), 0);
        let partial = WeakNegation::Explicit(BTreeMap::from([(s[0].clone(), s[1].clone())]));
        let report = check_weak_negation(&partial, &s, &diag, &crisp);
        assert!(report.violations.contains(&WeakNegationViolation::NotTotal { sentence: s[1].to_string() }));
    }

    #[test]
    fn substructure_examples() {
        let small = model(&["a"], vec![q(1, 1)]).predicate("P", 1, vec![q(1, 1)]).unwrap();
        let large = model(&["a", "b"], vec![q(1, 2), q(1, 2)]).predicate("P", 1, vec![q(1, 1), q(0, 1)]).unwrap();
        let voc = small.expand_with_element_constants().unwrap().vocabulary();
        let pa = parse_formula("P(a)", &voc).unwrap();
        let all = parse_formula("ALL x. P(x)", &voc).unwrap();
        let sys = ApproximationSystem::diagonal(vec![pa.clone(), all.clone()]);
        assert!(check_elementary_substructure(&small, &large, &[pa.clone()], &sys).unwrap());
        assert!(!check_elementary_substructure(&small, &large, &[all.clone()], &sys).unwrap());
        assert!(check_elementary_substructure(&small, &large, &[], &sys).unwrap());
        assert!(check_elementary_substructure(&large, &large, &[pa, all], &sys).unwrap());
        assert!(matches!(
            check_elementary_substructure(&large, &small, &[], &sys),
            Err(SatError::NotASubuniverse(name)) if name == "b"
        ));
    }
}
