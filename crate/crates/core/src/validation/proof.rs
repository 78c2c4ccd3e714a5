//! Hilbert-style proof scripts for the integral axioms and rules.

use std::fmt;
use std::str::FromStr;

use crate::syntax::Formula;
use crate::validation::axioms::AxiomId;

/// Line references are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Justification {
    Axiom(AxiomId),
    Premise,
    /// `Mp(i, j)`: line `j` is `line i -> this line`.
    Mp(usize, usize),
    Gen(usize, String),
    IntIntro(usize, String),
    IntMono(usize, String),
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Axiom(a) => write!(f, "axiom:{a}"),
            Justification::Premise => f.write_str("premise"),
            Justification::Mp(i, j) => write!(f, "mp:{i},{j}"),
            Justification::Gen(i, x) => write!(f, "gen:{i},{x}"),
            Justification::IntIntro(i, x) => write!(f, "int-intro:{i},{x}"),
            Justification::IntMono(i, x) => write!(f, "int-mono:{i},{x}"),
        }
    }
}

impl FromStr for Justification {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "premise" {
            return Ok(Justification::Premise);
        }
        let (rule, args) = s.split_once(':').ok_or_else(|| format!("unknown justification `{s}`"))?;
        let args: Vec<&str> = args.split(',').map(str::trim).collect();
        let line = |a: &str| -> Result<usize, String> {
            match a.parse::<usize>() {
                Ok(n) if n >= 1 => Ok(n),
                _ => Err(format!("`{a}` is not a line number")),
            }
        };
        let two = |n: usize| -> Result<(), String> {
            if args.len() == n {
                Ok(())
            } else {
                Err(format!("`{rule}` takes {n} argument(s)"))
            }
        };
        match rule.trim() {
            "axiom" => {
                two(1)?;
                Ok(Justification::Axiom(args[0].parse()?))
            }
            "mp" => {
                two(2)?;
                Ok(Justification::Mp(line(args[0])?, line(args[1])?))
            }
            r @ ("gen" | "int-intro" | "int-mono") => {
                two(2)?;
                let (i, x) = (line(args[0])?, args[1].to_owned());
                if !crate::syntax::is_identifier(&x) {
                    return Err(format!("`{x}` is not a variable"));
                }
                Ok(match r {
                    "gen" => Justification::Gen(i, x),
                    "int-intro" => Justification::IntIntro(i, x),
                    _ => Justification::IntMono(i, x),
                })
            }
            other => Err(format!("unknown rule `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofLine {
    pub formula: Formula,
    pub justification: Justification,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProofScript {
    pub lines: Vec<ProofLine>,
}

impl ProofScript {
    pub fn push(&mut self, formula: Formula, justification: Justification) -> usize {
        self.lines.push(ProofLine { formula, justification });
        self.lines.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofError {
    /// 1-based.
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofReport {
    pub lines: usize,
    pub error: Option<ProofError>,
    /// Schema bindings found for each axiom line.
    pub axiom_witnesses: Vec<(usize, String)>,
}

impl ProofReport {
    pub fn valid(&self) -> bool {
        self.error.is_none()
    }
}

fn integral_of(f: &Formula) -> Option<(&str, &Formula)> {
    match f {
        Formula::Integral(x, b) => Some((x, b)),
        _ => None,
    }
}

/// Matches `left ≡ right` against one orientation of the schema.
fn match_sides(axiom: AxiomId, left: &Formula, right: &Formula) -> Option<String> {
    let (x, body) = integral_of(left)?;
    match axiom {
        AxiomId::Mu1 => (body == right && !body.free_vars().contains(x)).then(|| format!("x := {x}; v := {body}")),
        AxiomId::Mu2 => {
            let Formula::Not(phi) = body else { return None };
            let Formula::Not(r) = right else { return None };
            let (x2, phi2) = integral_of(r)?;
            (x2 == x && phi2 == phi.as_ref()).then(|| format!("x := {x}; phi := {phi}"))
        }
        AxiomId::Mu3 => {
            let Formula::Implies(phi, psi) = body else { return None };
            let Formula::Implies(a, b) = right else { return None };
            let (xa, pa) = integral_of(a)?;
            let (xb, pb) = integral_of(b)?;
            (xa == x && xb == x && pa == phi.as_ref() && pb == psi.as_ref())
                .then(|| format!("x := {x}; phi := {phi}; psi := {psi}"))
        }
        AxiomId::Mu4 => {
            let Formula::StrongOr(phi, psi) = body else { return None };
            let Formula::Implies(inner, c) = right else { return None };
            let Formula::Implies(a, b) = inner.as_ref() else { return None };
            let (xa, pa) = integral_of(a)?;
            let (xb, pb) = integral_of(b)?;
            let (xc, pc) = integral_of(c)?;
            let conj = Formula::strong_and(phi.as_ref().clone(), psi.as_ref().clone());
            (xa == x && xb == x && xc == x && pa == phi.as_ref() && *pb == conj && pc == psi.as_ref())
                .then(|| format!("x := {x}; phi := {phi}; psi := {psi}"))
        }
        AxiomId::Mu5 => {
            let (y, inner) = (x, body);
            let (x1, phi) = integral_of(inner)?;
            let (x2, r_inner) = integral_of(right)?;
            let (y2, phi2) = integral_of(r_inner)?;
            (x2 == x1 && y2 == y && phi2 == phi).then(|| format!("x := {x1}; y := {y}; phi := {phi}"))
        }
    }
}

/// Whether `formula` is an instance of the schema, written as an
/// equivalence `(A -> B) & (B -> A)` or as either implication.
pub fn match_axiom(axiom: AxiomId, formula: &Formula) -> Result<String, String> {
    let (a, b) = if let Some((a, b)) = formula.as_equiv() {
        (a, b)
    } else if let Formula::Implies(a, b) = formula {
        (a.as_ref(), b.as_ref())
    } else {
        return Err(format!("not an equivalence or implication, so not an instance of {axiom}"));
    };
    match_sides(axiom, a, b)
        .or_else(|| match_sides(axiom, b, a))
        .ok_or_else(|| format!("does not match schema {axiom}"))
}

fn check_line(script: &ProofScript, n: usize) -> Result<Option<String>, String> {
    let line = &script.lines[n - 1];
    let earlier = |i: usize| -> Result<&Formula, String> {
        if i >= 1 && i < n {
            Ok(&script.lines[i - 1].formula)
        } else {
            Err(format!("line {i} is not an earlier line"))
        }
    };
    let f = &line.formula;
    match &line.justification {
        Justification::Premise => Ok(None),
        Justification::Axiom(a) => match_axiom(*a, f).map(Some),
        Justification::Mp(i, j) => {
            let (ante, imp) = (earlier(*i)?, earlier(*j)?);
            match imp {
                Formula::Implies(a, b) if a.as_ref() == ante && b.as_ref() == f => Ok(None),
                Formula::Implies(..) => Err(format!("line {j} is not `line {i} -> this line`")),
                _ => Err(format!("line {j} is not an implication")),
            }
        }
        Justification::Gen(i, x) => {
            let prem = earlier(*i)?;
            match f {
                Formula::Forall(v, b) if v == x && b.as_ref() == prem => Ok(None),
                _ => Err(format!("expected `ALL {x}. ` applied to line {i}")),
            }
        }
        Justification::IntIntro(i, x) => {
            let prem = earlier(*i)?;
            match f {
                Formula::Integral(v, b) if v == x && b.as_ref() == prem => Ok(None),
                _ => Err(format!("expected the integral over {x} of line {i}")),
            }
        }
        Justification::IntMono(i, x) => {
            let Formula::Implies(phi, psi) = earlier(*i)? else {
                return Err(format!("line {i} is not an implication"));
            };
            let expected = Formula::implies(
                Formula::integral(x, phi.as_ref().clone()),
                Formula::integral(x, psi.as_ref().clone()),
            );
            if *f == expected {
                Ok(None)
            } else {
                Err(format!("expected `{expected}`"))
            }
        }
    }
}

/// Checks lines in order and stops at the first invalid one.
pub fn check_proof(script: &ProofScript) -> ProofReport {
    let mut report = ProofReport { lines: script.lines.len(), error: None, axiom_witnesses: Vec::new() };
    for n in 1..=script.lines.len() {
        match check_line(script, n) {
            Ok(Some(w)) => report.axiom_witnesses.push((n, w)),
            Ok(None) => {}
            Err(message) => {
                report.error = Some(ProofError { line: n, message });
                break;
            }
        }
    }
    report
}
