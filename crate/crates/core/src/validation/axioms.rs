//! Semantic checks of the integral axioms over generated models.

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::eval::{eval, EvalError, Valuation};
use crate::io::model_to_json;
use crate::rational::{q, Rational01};
use crate::syntax::{Formula, Term};
use crate::validation::generate::{generate_models, GenError, ModelGenSpec, Signature};
use crate::wpm::WeakProbModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AxiomId {
    Mu1,
    Mu2,
    Mu3,
    Mu4,
    Mu5,
}

impl AxiomId {
    pub const ALL: [AxiomId; 5] = [AxiomId::Mu1, AxiomId::Mu2, AxiomId::Mu3, AxiomId::Mu4, AxiomId::Mu5];

    pub fn name(self) -> &'static str {
        match self {
            AxiomId::Mu1 => "mu1",
            AxiomId::Mu2 => "mu2",
            AxiomId::Mu3 => "mu3",
            AxiomId::Mu4 => "mu4",
            AxiomId::Mu5 => "mu5",
        }
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AxiomId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AxiomId::ALL
            .into_iter()
            .find(|a| a.name() == s.trim().replace('μ', "mu"))
            .ok_or_else(|| format!("unknown axiom `{s}` (expected mu1..mu5)"))
    }
}

/// One line of a validation report, replayable from its inline model.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationRecord {
    pub kind: String,
    pub axiom: String,
    pub model: Value,
    pub instantiation: String,
    pub lhs: String,
    pub rhs: String,
}

impl ValidationRecord {
    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.kind,
            "axiom": self.axiom,
            "model": self.model,
            "instantiation": self.instantiation,
            "lhs": self.lhs,
            "rhs": self.rhs,
        })
    }
}

/// Left and right side of one schema instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomInstance {
    pub lhs: Formula,
    pub rhs: Formula,
    pub description: String,
}

fn atom1(p: &str, v: &str) -> Formula {
    Formula::atom(p, vec![Term::var(v)])
}

fn atom2(p: &str, a: &str, b: &str) -> Formula {
    Formula::atom(p, vec![Term::var(a), Term::var(b)])
}

/// Unary bodies over `P` and `Q` in `x`; the last one has `y` free.
fn unary_bodies() -> Vec<Formula> {
    let (p, qx) = (atom1("P", "x"), atom1("Q", "x"));
    vec![
        p.clone(),
        qx.clone(),
        Formula::not(p.clone()),
        Formula::strong_and(p.clone(), qx.clone()),
        Formula::strong_or(p.clone(), Formula::not(qx.clone())),
        Formula::implies(p.clone(), qx.clone()),
        Formula::and(p.clone(), qx.clone()),
        Formula::or(p.clone(), qx),
        Formula::constant(q(1, 3)),
        Formula::strong_and(p, atom1("P", "y")),
    ]
}

fn binary_bodies() -> Vec<Formula> {
    let (rxy, ryx) = (atom2("R", "x", "y"), atom2("R", "y", "x"));
    vec![
        rxy.clone(),
        ryx.clone(),
        atom2("R", "x", "x"),
        Formula::not(rxy.clone()),
        Formula::strong_and(rxy.clone(), ryx.clone()),
        Formula::implies(rxy.clone(), atom2("R", "y", "y")),
        Formula::strong_or(rxy.clone(), Formula::constant(q(1, 4))),
        Formula::or(rxy, Formula::exists("z", atom2("R", "z", "y"))),
    ]
}

/// Pairs `(i, j)` ordered by `i + j`, so short prefixes mix both sides.
fn pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    out.sort_by_key(|&(i, j)| (i + j, i));
    out
}

/// The signature the instances of `axiom` are built over.
pub fn axiom_signature(axiom: AxiomId) -> Signature {
    match axiom {
        AxiomId::Mu1 => Signature::predicates(&[("P", 1)]),
        AxiomId::Mu5 => Signature::predicates(&[("R", 2)]),
        _ => Signature::predicates(&[("P", 1), ("Q", 1)]),
    }
}

/// Schema instances for `axiom`, in a fixed order.
pub fn axiom_instances(axiom: AxiomId) -> Vec<AxiomInstance> {
    let int = |v: &str, f: Formula| Formula::integral(v, f);
    let inst = |lhs: Formula, rhs: Formula, description: String| AxiomInstance { lhs, rhs, description };
    match axiom {
        AxiomId::Mu1 => {
            let py = atom1("P", "y");
            [
                Formula::constant(q(0, 1)),
                Formula::constant(q(1, 3)),
                Formula::constant(q(1, 1)),
                Formula::forall("y", py.clone()),
                Formula::exists("y", py.clone()),
                int("y", py.clone()),
                py.clone(),
                Formula::implies(py.clone(), Formula::constant(q(1, 2))),
            ]
            .into_iter()
            .map(|v| inst(int("x", v.clone()), v.clone(), format!("v := {v}")))
            .collect()
        }
        AxiomId::Mu2 => unary_bodies()
            .into_iter()
            .map(|phi| inst(int("x", Formula::not(phi.clone())), Formula::not(int("x", phi.clone())), format!("phi := {phi}")))
            .collect(),
        AxiomId::Mu3 | AxiomId::Mu4 => {
            let bodies = unary_bodies();
            pairs(bodies.len())
                .into_iter()
                .map(|(i, j)| {
                    let (phi, psi) = (bodies[i].clone(), bodies[j].clone());
                    let description = format!("phi := {phi}; psi := {psi}");
                    if axiom == AxiomId::Mu3 {
                        inst(
                            int("x", Formula::implies(phi.clone(), psi.clone())),
                            Formula::implies(int("x", phi), int("x", psi)),
                            description,
                        )
                    } else {
                        inst(
                            int("x", Formula::strong_or(phi.clone(), psi.clone())),
                            Formula::implies(
                                Formula::implies(int("x", phi.clone()), int("x", Formula::strong_and(phi, psi.clone()))),
                                int("x", psi),
                            ),
                            description,
                        )
                    }
                })
                .collect()
        }
        AxiomId::Mu5 => binary_bodies()
            .into_iter()
            .map(|phi| inst(int("y", int("x", phi.clone())), int("x", int("y", phi.clone())), format!("phi := {phi}")))
            .collect(),
    }
}

/// Default number of instances per axiom.
pub const DEFAULT_INSTANCES: usize = 24;

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomReport {
    pub axiom: AxiomId,
    pub models: usize,
    pub checks: usize,
    pub violation_count: usize,
    /// The first violations, at most [`RECORD_LIMIT`].
    pub violations: Vec<ValidationRecord>,
    /// Instances where both sides differ although the checked direction
    /// holds (only for `mu3`).
    pub equality_failures: usize,
    pub equality_witness: Option<ValidationRecord>,
}

pub const RECORD_LIMIT: usize = 20;

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }
}

/// All valuations of `vars` over the universe.
fn valuations(vars: &[String], size: usize) -> Vec<Valuation> {
    let mut out = vec![Valuation::new()];
    for v in vars {
        out = out.into_iter().flat_map(|val| (0..size).map(move |e| val.clone().bind(v, e))).collect();
    }
    out
}

fn describe(inst: &AxiomInstance, val: &Valuation, model: &WeakProbModel) -> String {
    let binds: Vec<String> = val.iter().map(|(v, e)| format!("{v} := {}", model.element_name(e))).collect();
    let mut s = format!("{}; lhs := {}; rhs := {}", inst.description, inst.lhs, inst.rhs);
    if !binds.is_empty() {
        s.push_str(&format!("; {}", binds.join(", ")));
    }
    s
}

/// Checks `axiom` on every model of `spec` and the first `instances`
/// schema instances. `mu3` is checked as `lhs ≤ rhs`; the others as exact
/// equality.
pub fn validate_axiom(axiom: AxiomId, spec: &ModelGenSpec, instances: usize) -> Result<AxiomReport, GenError> {
    let insts: Vec<AxiomInstance> = axiom_instances(axiom).into_iter().take(instances).collect();
    let vars: Vec<Vec<String>> = insts
        .iter()
        .map(|i| {
            let mut fv = i.lhs.free_vars();
            fv.extend(i.rhs.free_vars());
            fv.into_iter().collect()
        })
        .collect();
    let mut report = AxiomReport {
        axiom,
        models: 0,
        checks: 0,
        violation_count: 0,
        violations: Vec::new(),
        equality_failures: 0,
        equality_witness: None,
    };
    for model in generate_models(spec, &axiom_signature(axiom))? {
        report.models += 1;
        for (inst, fv) in insts.iter().zip(&vars) {
            for val in valuations(fv, model.size()) {
                report.checks += 1;
                let sides = (|| -> Result<(Rational01, Rational01), EvalError> {
                    Ok((eval(&inst.lhs, &model, &val)?, eval(&inst.rhs, &model, &val)?))
                })();
                let record = |kind: &str, lhs: String, rhs: String| ValidationRecord {
                    kind: kind.to_owned(),
                    axiom: axiom.name().to_owned(),
                    model: model_to_json(&model),
                    instantiation: describe(inst, &val, &model),
                    lhs,
                    rhs,
                };
                let (l, r) = match sides {
                    Ok(lr) => lr,
                    Err(e) => {
                        report.violation_count += 1;
                        if report.violations.len() < RECORD_LIMIT {
                            report.violations.push(record("error", e.to_string(), String::new()));
                        }
                        continue;
                    }
                };
                let holds = if axiom == AxiomId::Mu3 { l <= r } else { l == r };
                if !holds {
                    report.violation_count += 1;
                    if report.violations.len() < RECORD_LIMIT {
                        report.violations.push(record("violation", l.to_string(), r.to_string()));
                    }
                } else if l != r {
                    report.equality_failures += 1;
                    if report.equality_witness.is_none() {
                        report.equality_witness = Some(record("equality-failure", l.to_string(), r.to_string()));
                    }
                }
            }
        }
    }
    Ok(report)
}
