//! Structure-level operations: reducts, renamings, isomorphism, and the
//! Lipschitz validators for similarity structures.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::Signed;

use super::{all_tuples, tuple_index, FunctionTable, ModelError, PredicateTable, WeakProbModel};
use crate::rational::Rational01;
use crate::syntax::{is_reserved, Vocabulary, SIMILARITY};

pub const ISOMORPHISM_BOUND: usize = 8;

impl WeakProbModel {
    /// Drops every interpretation outside `voc`.
    pub fn reduct(&self, voc: &Vocabulary) -> Result<WeakProbModel, ModelError> {
        let own = self.vocabulary();
        if !voc.is_subvocabulary_of(&own) {
            let offending = voc
                .predicates()
                .map(|(n, _)| n)
                .chain(voc.functions().map(|(n, _)| n))
                .chain(voc.constants())
                .find(|n| own.kind(n) != voc.kind(n))
                .unwrap_or("SIM")
                .to_owned();
            return Err(ModelError::NotSubvocabulary(offending));
        }
        let mut out = self.clone();
        out.predicates.retain(|n, _| voc.predicate_arity(n).is_some());
        out.functions.retain(|n, _| voc.function_arity(n).is_some());
        out.constants.retain(|n, _| voc.has_constant(n));
        Ok(out)
    }

    /// Renames symbols by `map` (names not in the map are kept). The renaming
    /// must be injective on the model's symbols and may not produce clashes
    /// or touch reserved names.
    pub fn rename(&self, map: &BTreeMap<String, String>) -> Result<WeakProbModel, ModelError> {
        let rn = |n: &String| map.get(n).cloned().unwrap_or_else(|| n.clone());
        for (from, to) in map {
            if is_reserved(from) || is_reserved(to) {
                return Err(ModelError::BadRenaming(format!("`{from}` -> `{to}` touches a reserved name")));
            }
        }
        let mut targets = BTreeSet::new();
        let symbols = self.predicates.keys().chain(self.functions.keys()).chain(self.constants.keys());
        for name in symbols {
            if !targets.insert(rn(name)) {
                return Err(ModelError::BadRenaming(format!("two symbols map to `{}`", rn(name))));
            }
        }
        let mut out = self.clone();
        out.predicates = self.predicates.iter().map(|(n, t)| (rn(n), t.clone())).collect();
        out.functions = self.functions.iter().map(|(n, t)| (rn(n), t.clone())).collect();
        out.constants = self.constants.iter().map(|(n, &e)| (rn(n), e)).collect();
        Ok(out)
    }

    /// Transports the model along a bijection of the universe: element `i`
    /// becomes element `perm[i]`, named `names[perm[i]]`.
    pub fn transport(&self, perm: &[usize], names: Vec<String>) -> Result<WeakProbModel, ModelError> {
        let n = self.size();
        let mut inverse = vec![usize::MAX; n];
        if perm.len() != n || names.len() != n {
            return Err(ModelError::BadRenaming("permutation has the wrong length".into()));
        }
        for (i, &p) in perm.iter().enumerate() {
            if p >= n || inverse[p] != usize::MAX {
                return Err(ModelError::BadRenaming("not a permutation".into()));
            }
            inverse[p] = i;
        }
        let measure = inverse.iter().map(|&i| self.measure[i].clone()).collect();
        let mut out = WeakProbModel::new(names, measure)?;
        let pull = |t: &[usize]| -> Vec<usize> { t.iter().map(|&e| inverse[e]).collect() };
        for (name, table) in &self.predicates {
            let values = all_tuples(table.arity, n)
                .map(|t| table.values[tuple_index(&pull(&t), n)].clone())
                .collect();
            out.predicates.insert(name.clone(), PredicateTable { arity: table.arity, values });
        }
        for (name, table) in &self.functions {
            let values = all_tuples(table.arity, n)
                .map(|t| perm[table.values[tuple_index(&pull(&t), n)]])
                .collect();
            out.functions.insert(name.clone(), FunctionTable { arity: table.arity, values });
        }
        out.constants = self.constants.iter().map(|(c, &e)| (c.clone(), perm[e])).collect();
        Ok(out)
    }

    /// Whether a measure-preserving isomorphism onto `other` exists, by
    /// search over universe bijections.
    pub fn isomorphic(&self, other: &WeakProbModel) -> Result<bool, ModelError> {
        self.isomorphic_bounded(other, ISOMORPHISM_BOUND)
    }

    pub fn isomorphic_bounded(&self, other: &WeakProbModel, bound: usize) -> Result<bool, ModelError> {
        if self.size() > bound {
            return Err(ModelError::UniverseTooLarge { size: self.size(), bound });
        }
        if self.size() != other.size() || self.vocabulary() != other.vocabulary() {
            return Ok(false);
        }
        let shapes_match = self.predicates.iter().all(|(n, t)| other.predicates[n].arity == t.arity)
            && self.functions.iter().all(|(n, t)| other.functions[n].arity == t.arity);
        if !shapes_match {
            return Ok(false);
        }
        let mut perm = Vec::with_capacity(self.size());
        let mut used = vec![false; self.size()];
        Ok(self.extend_iso(other, &mut perm, &mut used))
    }

    fn extend_iso(&self, other: &WeakProbModel, perm: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let n = self.size();
        if perm.len() == n {
            return self.is_isomorphism(other, perm);
        }
        let i = perm.len();
        for j in 0..n {
            if used[j] || self.measure[i] != other.measure[j] {
                continue;
            }
            perm.push(j);
            used[j] = true;
            if self.partial_consistent(other, perm) && self.extend_iso(other, perm, used) {
                return true;
            }
            used[j] = false;
            perm.pop();
        }
        false
    }

    /// Checks the unary predicate values on the assigned prefix.
    fn partial_consistent(&self, other: &WeakProbModel, perm: &[usize]) -> bool {
        let i = perm.len() - 1;
        self.predicates
            .iter()
            .filter(|(_, t)| t.arity == 1)
            .all(|(name, t)| t.values[i] == other.predicates[name].values[perm[i]])
    }

    fn is_isomorphism(&self, other: &WeakProbModel, perm: &[usize]) -> bool {
        let n = self.size();
        let push = |t: &[usize]| -> Vec<usize> { t.iter().map(|&e| perm[e]).collect() };
        self.predicates.iter().all(|(name, t)| {
            let o = &other.predicates[name];
            all_tuples(t.arity, n).all(|tu| t.values[tuple_index(&tu, n)] == o.values[tuple_index(&push(&tu), n)])
        }) && self.functions.iter().all(|(name, t)| {
            let o = &other.functions[name];
            all_tuples(t.arity, n).all(|tu| perm[t.values[tuple_index(&tu, n)]] == o.values[tuple_index(&push(&tu), n)])
        }) && self.constants.iter().all(|(c, &e)| other.constants.get(c) == Some(&perm[e]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LipschitzKind {
    /// `min_i (a_i ≈ b_i) ≤ f(ā) ≈ f(b̄)`
    Function,
    /// `|P(ā) − P(b̄)| ≤ max_i d(a_i, b_i)` with `d = 1 − ≈`
    Predicate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LipschitzViolation {
    pub kind: LipschitzKind,
    pub symbol: String,
    pub a: Vec<String>,
    pub b: Vec<String>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LipschitzReport {
    pub checked: usize,
    pub violations: Vec<LipschitzViolation>,
}

impl LipschitzReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the similarity-based Lipschitz condition for every function symbol
/// and the 1-Lipschitz condition, under `d(x, y) = 1 − (x ≈ y)`, for every
/// predicate symbol.
pub fn check_similarity_lipschitz(model: &WeakProbModel, approx_pred: &str) -> Result<LipschitzReport, ModelError> {
    let sim = model
        .predicate_table(approx_pred)
        .filter(|t| t.arity == 2)
        .ok_or_else(|| ModelError::NotBinaryPredicate(approx_pred.to_owned()))?;
    let n = model.size();
    let similar = |x: usize, y: usize| &sim.values[x * n + y];
    let names = |t: &[usize]| t.iter().map(|&e| model.element_name(e).to_owned()).collect::<Vec<_>>();
    let mut report = LipschitzReport::default();

    for (name, table) in model.function_tables() {
        for a in all_tuples(table.arity, n) {
            for b in all_tuples(table.arity, n) {
                report.checked += 1;
                let lhs = a.iter().zip(&b).map(|(&x, &y)| similar(x, y)).min().expect("positive arity");
                let fa = table.values[tuple_index(&a, n)];
                let fb = table.values[tuple_index(&b, n)];
                let rhs = similar(fa, fb);
                if lhs > rhs {
                    report.violations.push(LipschitzViolation {
                        kind: LipschitzKind::Function,
                        symbol: name.clone(),
                        a: names(&a),
                        b: names(&b),
                        lhs: lhs.to_string(),
                        rhs: rhs.to_string(),
                    });
                }
            }
        }
    }

    for (name, table) in model.predicate_tables() {
        for a in all_tuples(table.arity, n) {
            for b in all_tuples(table.arity, n) {
                report.checked += 1;
                let pa = table.values[tuple_index(&a, n)].value();
                let pb = table.values[tuple_index(&b, n)].value();
                let lhs: BigRational = (pa - pb).abs();
                let rhs = a
                    .iter()
                    .zip(&b)
                    .map(|(&x, &y)| similar(x, y).complement())
                    .max()
                    .expect("positive arity");
                if &lhs > rhs.value() {
                    report.violations.push(LipschitzViolation {
                        kind: LipschitzKind::Predicate,
                        symbol: name.clone(),
                        a: names(&a),
                        b: names(&b),
                        lhs: Rational01::clamped(lhs).to_string(),
                        rhs: rhs.to_string(),
                    });
                }
            }
        }
    }
    Ok(report)
}

/// Convenience: the reserved similarity predicate.
pub fn check_default_similarity_lipschitz(model: &WeakProbModel) -> Result<LipschitzReport, ModelError> {
    check_similarity_lipschitz(model, SIMILARITY)
}
