//! Measures of sets, three routes to the integral of a fuzzy subset, level
//! sets, and the semantic-integral laws.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use super::{all_tuples, tuple_index, ModelError, WeakProbModel};
use crate::rational::{format_rational, Rational01};

/// A total map `|M|^arity -> [0, 1]`, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FuzzySubset {
    pub arity: usize,
    pub size: usize,
    pub values: Vec<Rational01>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FuzzySubsetError {
    #[error("expected {expected} values for arity {arity} over {size} elements, got {found}")]
    NotTotal { arity: usize, size: usize, expected: usize, found: usize },
    #[error("arity must be positive")]
    ZeroArity,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("fuzzy subset takes the non-crisp value {0}")]
pub struct NotCrisp(pub Rational01);

impl FuzzySubset {
    pub fn new(arity: usize, size: usize, values: Vec<Rational01>) -> Result<Self, FuzzySubsetError> {
        if arity == 0 {
            return Err(FuzzySubsetError::ZeroArity);
        }
        let expected = size.pow(arity as u32);
        if values.len() != expected {
            return Err(FuzzySubsetError::NotTotal { arity, size, expected, found: values.len() });
        }
        Ok(Self { arity, size, values })
    }

    /// Unary subset from one value per element.
    pub fn unary(values: Vec<Rational01>) -> Self {
        Self { arity: 1, size: values.len(), values }
    }

    pub fn constant(size: usize, value: Rational01) -> Self {
        Self { arity: 1, size, values: vec![value; size] }
    }

    pub fn from_fn(arity: usize, size: usize, f: impl Fn(&[usize]) -> Rational01) -> Self {
        let values = all_tuples(arity, size).map(|t| f(&t)).collect();
        Self { arity, size, values }
    }

    pub fn at(&self, tuple: &[usize]) -> &Rational01 {
        &self.values[tuple_index(tuple, self.size)]
    }

    pub fn is_crisp(&self) -> bool {
        self.values.iter().all(Rational01::is_crisp)
    }

    pub fn map(&self, f: impl Fn(&Rational01) -> Rational01) -> Self {
        Self { values: self.values.iter().map(f).collect(), ..self.clone() }
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(&Rational01, &Rational01) -> Rational01) -> Self {
        assert_eq!((self.arity, self.size), (other.arity, other.size), "shape mismatch");
        Self { values: self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect(), ..self.clone() }
    }

    /// Tuples on which the subset takes the value 1.
    pub fn truth_set(&self) -> BTreeSet<Vec<usize>> {
        all_tuples(self.arity, self.size).filter(|t| self.at(t).is_one()).collect()
    }

    /// Distinct values, ascending.
    pub fn range(&self) -> BTreeSet<Rational01> {
        self.values.iter().cloned().collect()
    }
}

/// `μ(A) = Σ_{(m1..mk) ∈ A} μ(m1)…μ(mk)`.
pub fn mu_set(model: &WeakProbModel, set: &BTreeSet<Vec<usize>>, arity: usize) -> Rational01 {
    let total: BigRational = set
        .iter()
        .map(|tuple| {
            debug_assert_eq!(tuple.len(), arity);
            tuple.iter().fold(BigRational::one(), |acc, &e| acc * model.weight(e).value())
        })
        .sum();
    Rational01::clamped(total)
}

/// Measure of a set of elements.
pub fn mu_elements(model: &WeakProbModel, set: &BTreeSet<usize>) -> Rational01 {
    Rational01::clamped(set.iter().map(|&e| model.weight(e).value()).sum())
}

fn assert_unary(f: &FuzzySubset, model: &WeakProbModel) {
    assert!(f.arity == 1 && f.size == model.size(), "expected a unary fuzzy subset of the model's universe");
}

/// `Σ_m f(m) μ(m)`.
pub fn integral_expectation(f: &FuzzySubset, model: &WeakProbModel) -> Rational01 {
    assert_unary(f, model);
    let total: BigRational = f.values.iter().zip(model.measure()).map(|(v, w)| v.value() * w.value()).sum();
    Rational01::clamped(total)
}

/// Integral over the product measure of an `n`-ary fuzzy subset:
/// `Σ_{tuples} f(t) Π μ(t_i)`.
pub fn integral_product(f: &FuzzySubset, model: &WeakProbModel) -> Rational01 {
    assert_eq!(f.size, model.size());
    let total: BigRational = all_tuples(f.arity, f.size)
        .map(|t| {
            t.iter().fold(f.at(&t).value().clone(), |acc, &e| acc * model.weight(e).value())
        })
        .sum();
    Rational01::clamped(total)
}

/// Iterated integral of a bivariate subset. `inner_first == 0` integrates the
/// first coordinate first, `1` the second.
pub fn iterated_integral(h: &FuzzySubset, model: &WeakProbModel, inner_first: usize) -> Rational01 {
    assert!(h.arity == 2 && h.size == model.size() && inner_first < 2);
    let n = model.size();
    let outer: BigRational = (0..n)
        .map(|outer| {
            let inner: BigRational = (0..n)
                .map(|inner| {
                    let t = if inner_first == 0 { [inner, outer] } else { [outer, inner] };
                    h.at(&t).value() * model.weight(inner).value()
                })
                .sum();
            inner * model.weight(outer).value()
        })
        .sum();
    Rational01::clamped(outer)
}

/// `{x : f(x) > α}`, strict.
pub fn level_set(f: &FuzzySubset, alpha: &Rational01) -> BTreeSet<usize> {
    assert_eq!(f.arity, 1);
    (0..f.size).filter(|&i| &f.values[i] > alpha).collect()
}

/// Layer-cake integral: with the distinct values `0 = v0 < v1 < … < vk` of
/// `f ∪ {0}`, `Σ_i (v_i − v_{i−1}) μ{x : f(x) ≥ v_i}`.
pub fn integral_layercake(f: &FuzzySubset, model: &WeakProbModel) -> Rational01 {
    assert_unary(f, model);
    let mut levels = f.range();
    levels.insert(Rational01::zero());
    let mut total = BigRational::zero();
    let mut prev = BigRational::zero();
    for v in levels.iter().skip(1) {
        let at_least: BigRational = (0..f.size)
            .filter(|&i| &f.values[i] >= v)
            .map(|i| model.weight(i).value())
            .sum();
        total += (v.value() - &prev) * at_least;
        prev = v.value().clone();
    }
    Rational01::clamped(total)
}

/// Dirac-style integral `Σ_m f(m) μ({m : f(m) = 1})`, defined here only for
/// crisp `f`, where it equals `μ(f⁻¹(1))`.
pub fn integral_dirac(f: &FuzzySubset, model: &WeakProbModel) -> Result<Rational01, NotCrisp> {
    assert_unary(f, model);
    if let Some(v) = f.values.iter().find(|v| !v.is_crisp()) {
        return Err(NotCrisp(v.clone()));
    }
    let ones: BTreeSet<usize> = (0..f.size).filter(|&i| f.values[i].is_one()).collect();
    Ok(mu_elements(model, &ones))
}

/// A finite partition of the universe into non-empty blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dissection {
    blocks: Vec<BTreeSet<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DissectionError {
    #[error("empty block")]
    EmptyBlock,
    #[error("element #{0} occurs in more than one block")]
    Overlap(usize),
    #[error("element #{0} is not covered")]
    Uncovered(usize),
    #[error("element #{0} is outside the universe")]
    OutOfUniverse(usize),
}

impl Dissection {
    pub fn new(blocks: Vec<BTreeSet<usize>>, size: usize) -> Result<Self, DissectionError> {
        let mut seen = vec![false; size];
        for block in &blocks {
            if block.is_empty() {
                return Err(DissectionError::EmptyBlock);
            }
            for &e in block {
                if e >= size {
                    return Err(DissectionError::OutOfUniverse(e));
                }
                if std::mem::replace(&mut seen[e], true) {
                    return Err(DissectionError::Overlap(e));
                }
            }
        }
        if let Some(e) = seen.iter().position(|s| !s) {
            return Err(DissectionError::Uncovered(e));
        }
        Ok(Self { blocks })
    }

    pub fn blocks(&self) -> &[BTreeSet<usize>] {
        &self.blocks
    }

    /// `Σ_k inf{f(x) : x ∈ A_k} μ(A_k)`.
    pub fn lower_sum(&self, f: &FuzzySubset, model: &WeakProbModel) -> BigRational {
        self.blocks
            .iter()
            .map(|block| {
                let inf = block.iter().map(|&e| &f.values[e]).min().expect("blocks are non-empty");
                let mass: BigRational = block.iter().map(|&e| model.weight(e).value()).sum();
                inf.value() * mass
            })
            .sum()
    }
}

/// Every set partition of `{0..n}`, via restricted growth strings.
pub fn set_partitions(n: usize) -> Vec<Vec<BTreeSet<usize>>> {
    fn rec(i: usize, n: usize, labels: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<BTreeSet<usize>>>) {
        if i == n {
            let mut blocks = vec![BTreeSet::new(); max];
            for (e, &l) in labels.iter().enumerate() {
                blocks[l].insert(e);
            }
            out.push(blocks);
            return;
        }
        for l in 0..=max {
            labels.push(l);
            rec(i + 1, n, labels, max.max(l + 1), out);
            labels.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(0, n, &mut Vec::with_capacity(n), 0, &mut out);
    }
    out
}

pub const DISSECTION_BOUND: usize = 8;

fn cached_partitions(n: usize) -> Arc<Vec<Dissection>> {
    static CACHE: OnceLock<Mutex<BTreeMap<usize, Arc<Vec<Dissection>>>>> = OnceLock::new();
    let mut cache = CACHE.get_or_init(Default::default).lock().expect("partition cache");
    cache
        .entry(n)
        .or_insert_with(|| set_partitions(n).into_iter().map(|blocks| Dissection { blocks }).collect::<Vec<_>>().into())
        .clone()
}

/// `sup` of the lower sums over all dissections of the universe, by brute
/// force. Fails when the universe exceeds `bound` elements.
pub fn integral_dissection_bounded(
    f: &FuzzySubset,
    model: &WeakProbModel,
    bound: usize,
) -> Result<Rational01, ModelError> {
    assert_unary(f, model);
    if model.size() > bound {
        return Err(ModelError::UniverseTooLarge { size: model.size(), bound });
    }
    // Lower sums scaled to integers by the common denominators of f and μ.
    let lcm = |xs: &mut dyn Iterator<Item = &Rational01>| xs.fold(BigInt::one(), |a, x| a.lcm(x.value().denom()));
    let (df, dw) = (lcm(&mut f.values.iter()), lcm(&mut model.measure().iter()));
    let scale = |x: &Rational01, d: &BigInt| x.value().numer() * (d / x.value().denom());
    let fs: Vec<BigInt> = f.values.iter().map(|x| scale(x, &df)).collect();
    let ws: Vec<BigInt> = model.measure().iter().map(|x| scale(x, &dw)).collect();
    let best = cached_partitions(model.size())
        .iter()
        .map(|d| {
            d.blocks
                .iter()
                .map(|block| {
                    let inf = block.iter().map(|&e| &fs[e]).min().expect("blocks are non-empty");
                    let mass: BigInt = block.iter().map(|&e| &ws[e]).sum();
                    inf * mass
                })
                .sum::<BigInt>()
        })
        .max()
        .expect("a non-empty universe has a partition");
    Ok(Rational01::clamped(BigRational::new(best, df * dw)))
}

pub fn integral_dissection(f: &FuzzySubset, model: &WeakProbModel) -> Result<Rational01, ModelError> {
    integral_dissection_bounded(f, model, DISSECTION_BOUND)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IntegralLaw {
    /// `∮ k_r = r`
    Constant,
    /// `∮ (1 − f) = 1 − ∮ f`
    Complement,
    /// `∮ (f ⇒ g) ≤ ∮ f ⇒ ∮ g`
    Implication,
    /// `∮ (f ⊕ g) = ∮ f + ∮ g − ∮ (f ∗ g)`
    Additivity,
    /// Iterated integrals of a bivariate subset commute.
    Fubini,
}

impl IntegralLaw {
    pub const ALL: [IntegralLaw; 5] = [
        IntegralLaw::Constant,
        IntegralLaw::Complement,
        IntegralLaw::Implication,
        IntegralLaw::Additivity,
        IntegralLaw::Fubini,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IntegralLaw::Constant => "constant",
            IntegralLaw::Complement => "complement",
            IntegralLaw::Implication => "implication",
            IntegralLaw::Additivity => "additivity",
            IntegralLaw::Fubini => "fubini",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawViolation {
    pub law: IntegralLaw,
    pub witness: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LawReport {
    pub checks: BTreeMap<IntegralLaw, usize>,
    pub violations: Vec<LawViolation>,
    /// Samples on which the implication law held strictly.
    pub strict_implication: usize,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first_violation(&self) -> Option<&LawViolation> {
        self.violations.first()
    }

    pub fn merge(&mut self, other: LawReport) {
        for (law, n) in other.checks {
            *self.checks.entry(law).or_default() += n;
        }
        self.violations.extend(other.violations);
        self.strict_implication += other.strict_implication;
    }
}

fn describe(f: &FuzzySubset) -> String {
    let vals: Vec<String> = f.values.iter().map(ToString::to_string).collect();
    format!("[{}]", vals.join(", "))
}

/// Checks the five semantic-integral laws with [`integral_expectation`] on
/// each pair `(f, g)` and each bivariate `h`. The constant law is checked for every
/// value in the range of `f`.
pub fn check_semantic_integral_laws(
    model: &WeakProbModel,
    pairs: &[(FuzzySubset, FuzzySubset)],
    bivariate: &[FuzzySubset],
) -> LawReport {
    let mut report = LawReport::default();
    let n = model.size();
    let record = |report: &mut LawReport, law, ok: bool, witness: &dyn Fn() -> String, lhs: &BigRational, rhs: &BigRational| {
        *report.checks.entry(law).or_default() += 1;
        if !ok {
            report.violations.push(LawViolation {
                law,
                witness: witness(),
                lhs: format_rational(lhs),
                rhs: format_rational(rhs),
            });
        }
    };

    for (f, g) in pairs {
        let int_f = integral_expectation(f, model);
        let int_g = integral_expectation(g, model);

        for r in f.range() {
            let lhs = integral_expectation(&FuzzySubset::constant(n, r.clone()), model);
            record(&mut report, IntegralLaw::Constant, lhs == r, &|| format!("r = {r}"), lhs.value(), r.value());
        }

        let lhs = integral_expectation(&f.map(Rational01::complement), model);
        let rhs = int_f.complement();
        record(&mut report, IntegralLaw::Complement, lhs == rhs, &|| format!("f = {}", describe(f)), lhs.value(), rhs.value());

        let lhs = integral_expectation(&f.zip_with(g, Rational01::implies), model);
        let rhs = int_f.implies(&int_g);
        if lhs < rhs {
            report.strict_implication += 1;
        }
        record(
            &mut report,
            IntegralLaw::Implication,
            lhs <= rhs,
            &|| format!("f = {}, g = {}", describe(f), describe(g)),
            lhs.value(),
            rhs.value(),
        );

        let lhs = integral_expectation(&f.zip_with(g, Rational01::strong_or), model);
        let prod = integral_expectation(&f.zip_with(g, Rational01::strong_and), model);
        let rhs = int_f.value() + int_g.value() - prod.value();
        record(
            &mut report,
            IntegralLaw::Additivity,
            lhs.value() == &rhs,
            &|| format!("f = {}, g = {}", describe(f), describe(g)),
            lhs.value(),
            &rhs,
        );
    }

    for h in bivariate {
        let lhs = iterated_integral(h, model, 0);
        let rhs = iterated_integral(h, model, 1);
        record(&mut report, IntegralLaw::Fubini, lhs == rhs, &|| format!("h = {}", describe(h)), lhs.value(), rhs.value());
    }
    report
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FAlgebraReport {
    pub missing_constants: Vec<Rational01>,
    /// Index pairs `(i, j)` whose pointwise implication is not in the family.
    pub missing_implications: Vec<(usize, usize)>,
}

impl FAlgebraReport {
    pub fn is_closed(&self) -> bool {
        self.missing_constants.is_empty() && self.missing_implications.is_empty()
    }
}

/// Checks that a finite family of unary fuzzy subsets contains the constant
/// functions for `constants` and is closed under pointwise `⇒`.
pub fn check_f_algebra(family: &[FuzzySubset], size: usize, constants: &[Rational01]) -> FAlgebraReport {
    let members: BTreeSet<&Vec<Rational01>> = family.iter().map(|f| &f.values).collect();
    let mut report = FAlgebraReport::default();
    for r in constants {
        if !members.contains(&vec![r.clone(); size]) {
            report.missing_constants.push(r.clone());
        }
    }
    for (i, f) in family.iter().enumerate() {
        for (j, g) in family.iter().enumerate() {
            if !members.contains(&f.zip_with(g, Rational01::implies).values) {
                report.missing_implications.push((i, j));
            }
        }
    }
    report
}
