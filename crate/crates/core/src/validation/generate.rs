//! Exhaustive and seeded random enumeration of finite models.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::rational::{default_grid, Rational01};
use crate::syntax::Vocabulary;
use crate::wpm::WeakProbModel;

/// Largest number of models an exhaustive enumeration may visit.
pub const EXHAUSTIVE_LIMIT: u128 = 20_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("universe size must be at least 1")]
    ZeroSize,
    #[error("the {0} grid is empty")]
    EmptyGrid(&'static str),
    #[error("the measure grid has no positive value")]
    NoPositiveWeight,
    #[error("search space too large: {0}")]
    SearchSpaceTooLarge(String),
}

/// Symbols a generated model interprets.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    pub predicates: Vec<(String, usize)>,
    pub functions: Vec<(String, usize)>,
    pub constants: Vec<String>,
}

impl Signature {
    pub fn from_vocabulary(voc: &Vocabulary) -> Self {
        Self {
            predicates: voc.predicates().map(|(n, a)| (n.to_owned(), a)).collect(),
            functions: voc.functions().map(|(n, a)| (n.to_owned(), a)).collect(),
            constants: voc.constants().map(str::to_owned).collect(),
        }
    }

    pub fn predicates(list: &[(&str, usize)]) -> Self {
        Self { predicates: list.iter().map(|&(n, a)| (n.to_owned(), a)).collect(), ..Self::default() }
    }

    pub fn with_constants(mut self, names: &[&str]) -> Self {
        self.constants.extend(names.iter().map(|s| s.to_string()));
        self
    }

    pub fn with_functions(mut self, list: &[(&str, usize)]) -> Self {
        self.functions.extend(list.iter().map(|&(n, a)| (n.to_owned(), a)));
        self
    }

    pub fn vocabulary(&self) -> Vocabulary {
        let mut voc = Vocabulary::with_flags(true, false);
        for (n, a) in &self.predicates {
            voc.add_predicate(n, *a).expect("signature symbols are distinct");
        }
        for (n, a) in &self.functions {
            voc.add_function(n, *a).expect("signature symbols are distinct");
        }
        for n in &self.constants {
            voc.add_constant(n).expect("signature symbols are distinct");
        }
        voc
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelCount {
    Random(usize),
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelGenSpec {
    pub size: usize,
    pub value_grid: Vec<Rational01>,
    pub measure_grid: Vec<Rational01>,
    pub seed: u64,
    pub count: ModelCount,
}

impl Default for ModelGenSpec {
    fn default() -> Self {
        Self { size: 2, value_grid: default_grid(), measure_grid: default_grid(), seed: 0, count: ModelCount::Random(100) }
    }
}

impl ModelGenSpec {
    pub fn exhaustive(size: usize) -> Self {
        Self { size, count: ModelCount::Exhaustive, ..Self::default() }
    }

    pub fn random(size: usize, count: usize, seed: u64) -> Self {
        Self { size, count: ModelCount::Random(count), seed, ..Self::default() }
    }

    pub fn with_grid(mut self, grid: Vec<Rational01>) -> Self {
        self.value_grid = grid;
        self
    }

    pub fn validate(&self) -> Result<(), GenError> {
        if self.size == 0 {
            return Err(GenError::ZeroSize);
        }
        if self.value_grid.is_empty() {
            return Err(GenError::EmptyGrid("value"));
        }
        if self.measure_grid.is_empty() {
            return Err(GenError::EmptyGrid("measure"));
        }
        if self.measure_grid.iter().all(Rational01::is_zero) {
            return Err(GenError::NoPositiveWeight);
        }
        Ok(())
    }
}

fn normalize(weights: &[&Rational01]) -> Option<Vec<Rational01>> {
    let total: BigRational = weights.iter().map(|w| w.value().clone()).sum();
    if total.is_zero() {
        return None;
    }
    Some(weights.iter().map(|w| Rational01::clamped(w.value() / &total)).collect())
}

/// Distinct measures obtained by renormalizing every draw of grid weights,
/// in order of first appearance.
pub fn normalized_measures(grid: &[Rational01], size: usize) -> Vec<Vec<Rational01>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut digits = vec![0usize; size];
    loop {
        let draw: Vec<&Rational01> = digits.iter().map(|&d| &grid[d]).collect();
        if let Some(m) = normalize(&draw) {
            if seen.insert(m.clone()) {
                out.push(m);
            }
        }
        if !increment(&mut digits, |_| grid.len()) {
            return out;
        }
    }
}

/// Mixed-radix increment, least significant digit last; false on wrap.
fn increment(digits: &mut [usize], radix: impl Fn(usize) -> usize) -> bool {
    for i in (0..digits.len()).rev() {
        digits[i] += 1;
        if digits[i] < radix(i) {
            return true;
        }
        digits[i] = 0;
    }
    false
}

/// One digit per table cell, in the order predicates, functions, constants.
fn radices(spec: &ModelGenSpec, sig: &Signature) -> Vec<usize> {
    let n = spec.size;
    let mut out = Vec::new();
    for (_, a) in &sig.predicates {
        out.extend(std::iter::repeat(spec.value_grid.len()).take(n.pow(*a as u32)));
    }
    for (_, a) in &sig.functions {
        out.extend(std::iter::repeat(n).take(n.pow(*a as u32)));
    }
    out.extend(std::iter::repeat(n).take(sig.constants.len()));
    out
}

fn build(spec: &ModelGenSpec, sig: &Signature, measure: Vec<Rational01>, digits: &[usize]) -> WeakProbModel {
    let n = spec.size;
    let mut model = WeakProbModel::with_default_names(measure).expect("normalized measure");
    let mut pos = 0;
    for (name, a) in &sig.predicates {
        let cells = n.pow(*a as u32);
        let values = digits[pos..pos + cells].iter().map(|&d| spec.value_grid[d].clone()).collect();
        model.add_predicate(name, *a, values).expect("valid signature");
        pos += cells;
    }
    for (name, a) in &sig.functions {
        let cells = n.pow(*a as u32);
        model.add_function(name, *a, digits[pos..pos + cells].to_vec()).expect("valid signature");
        pos += cells;
    }
    for name in &sig.constants {
        model.add_constant(name, digits[pos]).expect("valid signature");
        pos += 1;
    }
    model
}

/// Number of models [`exhaustive_models`] yields, or `None` on overflow.
pub fn exhaustive_space_size(spec: &ModelGenSpec, sig: &Signature) -> Option<u128> {
    let mut total = normalized_measures(&spec.measure_grid, spec.size).len() as u128;
    for r in radices(spec, sig) {
        total = total.checked_mul(r as u128)?;
    }
    Some(total)
}

/// Every model over the grids: each distinct measure, then every table
/// assignment in mixed-radix order.
pub fn exhaustive_models(spec: &ModelGenSpec, sig: &Signature) -> impl Iterator<Item = WeakProbModel> {
    let spec = spec.clone();
    let sig = sig.clone();
    let measures = normalized_measures(&spec.measure_grid, spec.size);
    let radix = radices(&spec, &sig);
    measures.into_iter().flat_map(move |measure| {
        let spec = spec.clone();
        let sig = sig.clone();
        let radix = radix.clone();
        let mut digits = Some(vec![0usize; radix.len()]);
        std::iter::from_fn(move || {
            let current = digits.take()?;
            let model = build(&spec, &sig, measure.clone(), &current);
            let mut next = current;
            if increment(&mut next, |i| radix[i]) {
                digits = Some(next);
            }
            Some(model)
        })
    })
}

/// Draws a measure from the grid, redrawing all-zero draws, then tables.
pub fn random_model(rng: &mut impl Rng, spec: &ModelGenSpec, sig: &Signature) -> WeakProbModel {
    let measure = loop {
        let draw: Vec<&Rational01> =
            (0..spec.size).map(|_| &spec.measure_grid[rng.gen_range(0..spec.measure_grid.len())]).collect();
        if let Some(m) = normalize(&draw) {
            break m;
        }
    };
    let digits: Vec<usize> = radices(spec, sig).into_iter().map(|r| rng.gen_range(0..r)).collect();
    build(spec, sig, measure, &digits)
}

pub fn random_models(spec: &ModelGenSpec, sig: &Signature, count: usize) -> impl Iterator<Item = WeakProbModel> {
    let spec = spec.clone();
    let sig = sig.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    (0..count).map(move |_| random_model(&mut rng, &spec, &sig))
}

/// Models per `spec.count`. Exhaustive enumeration is refused beyond
/// [`EXHAUSTIVE_LIMIT`] models.
pub fn generate_models(
    spec: &ModelGenSpec,
    sig: &Signature,
) -> Result<Box<dyn Iterator<Item = WeakProbModel>>, GenError> {
    spec.validate()?;
    match spec.count {
        ModelCount::Random(k) => Ok(Box::new(random_models(spec, sig, k))),
        ModelCount::Exhaustive => {
            match exhaustive_space_size(spec, sig) {
                Some(s) if s <= EXHAUSTIVE_LIMIT => {}
                Some(s) => {
                    return Err(GenError::SearchSpaceTooLarge(format!("{s} models exceed the limit of {EXHAUSTIVE_LIMIT}")))
                }
                None => return Err(GenError::SearchSpaceTooLarge("model count overflows".into())),
            }
            Ok(Box::new(exhaustive_models(spec, sig)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn measures_are_normalized_and_distinct() {
        let ms = normalized_measures(&default_grid(), 2);
        // Distinct ratios a / (a + b) with a, b in 0..=4, not both zero.
        assert_eq!(ms.len(), 13);
        for m in &ms {
            let total: BigRational = m.iter().map(|w| w.value().clone()).sum();
            assert_eq!(total, BigRational::from_integer(1.into()));
        }
        assert_eq!(normalized_measures(&[q(1, 2)], 3), vec![vec![q(1, 3); 3]]);
    }

    #[test]
    fn exhaustive_count_matches_space_size() {
        let spec = ModelGenSpec::exhaustive(2).with_grid(vec![q(0, 1), q(1, 1)]);
        let sig = Signature::predicates(&[("P", 1)]).with_constants(&["c"]);
        let models: Vec<_> = exhaustive_models(&spec, &sig).collect();
        assert_eq!(models.len() as u128, exhaustive_space_size(&spec, &sig).unwrap());
        assert_eq!(models.len(), 13 * 4 * 2);
        let distinct: BTreeSet<String> = models.iter().map(|m| format!("{m:?}")).collect();
        assert_eq!(distinct.len(), models.len());
    }

    #[test]
    fn random_models_are_reproducible() {
        let spec = ModelGenSpec::random(3, 5, 42);
        let sig = Signature::predicates(&[("P", 1), ("R", 2)]).with_functions(&[("f", 1)]);
        let a: Vec<_> = random_models(&spec, &sig, 5).collect();
        let b: Vec<_> = random_models(&spec, &sig, 5).collect();
        assert_eq!(a, b);
        let other: Vec<_> = random_models(&ModelGenSpec { seed: 43, ..spec.clone() }, &sig, 5).collect();
        assert_ne!(a, other);
    }

    #[test]
    fn refuses_huge_spaces() {
        let spec = ModelGenSpec::exhaustive(4);
        let sig = Signature::predicates(&[("R", 2)]);
        assert!(matches!(generate_models(&spec, &sig), Err(GenError::SearchSpaceTooLarge(_))));
        assert!(matches!(generate_models(&ModelGenSpec { size: 0, ..spec }, &sig), Err(GenError::ZeroSize)));
    }
}
