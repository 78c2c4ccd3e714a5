//! Seeded random formulas over a signature.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::rational::Rational01;
use crate::syntax::{Formula, QuantExpr, Quantifier, Term};
use crate::validation::generate::Signature;

#[derive(Debug, Clone)]
pub struct FormulaGen {
    pub signature: Signature,
    pub vars: Vec<String>,
    pub max_depth: usize,
    /// Allows a quantifier equality at the root.
    pub allow_qeq: bool,
    /// Largest denominator of generated truth constants.
    pub max_denominator: i64,
}

impl FormulaGen {
    pub fn new(signature: Signature, max_depth: usize) -> Self {
        Self {
            signature,
            vars: ["x", "y", "z"].iter().map(|s| s.to_string()).collect(),
            max_depth,
            allow_qeq: false,
            max_denominator: 8,
        }
    }

    pub fn with_qeq(mut self) -> Self {
        self.allow_qeq = true;
        self
    }

    fn rational(&self, rng: &mut impl Rng) -> Rational01 {
        let d = rng.gen_range(1..=self.max_denominator);
        let n = rng.gen_range(0..=d);
        Rational01::from_ratio(n, d).expect("n <= d")
    }

    fn term(&self, rng: &mut impl Rng, depth: usize) -> Term {
        let funcs = &self.signature.functions;
        let consts = &self.signature.constants;
        match rng.gen_range(0..6) {
            0 | 1 if !consts.is_empty() => Term::Const(consts.choose(rng).expect("non-empty").clone()),
            2 if depth > 0 && !funcs.is_empty() => {
                let (f, a) = funcs.choose(rng).expect("non-empty");
                Term::App(f.clone(), (0..*a).map(|_| self.term(rng, depth - 1)).collect())
            }
            _ => Term::Var(self.vars.choose(rng).expect("variables").clone()),
        }
    }

    fn leaf(&self, rng: &mut impl Rng) -> Formula {
        let preds = &self.signature.predicates;
        if preds.is_empty() || rng.gen_ratio(1, 6) {
            return Formula::Const(self.rational(rng));
        }
        let (p, a) = preds.choose(rng).expect("non-empty");
        Formula::Atom(p.clone(), (0..*a).map(|_| self.term(rng, 1)).collect())
    }

    /// A formula of depth at most `depth`, possibly with free variables.
    pub fn formula(&self, rng: &mut impl Rng, depth: usize) -> Formula {
        if depth == 0 || rng.gen_ratio(1, 5) {
            return self.leaf(rng);
        }
        let sub = |rng: &mut _| self.formula(rng, depth - 1);
        match rng.gen_range(0..9) {
            0 => Formula::not(sub(rng)),
            1 => Formula::and(sub(rng), sub(rng)),
            2 => Formula::or(sub(rng), sub(rng)),
            3 => Formula::strong_and(sub(rng), sub(rng)),
            4 => Formula::strong_or(sub(rng), sub(rng)),
            5 => Formula::implies(sub(rng), sub(rng)),
            q => {
                let v = self.vars.choose(rng).expect("variables");
                let body = sub(rng);
                match q {
                    6 => Formula::forall(v, body),
                    7 => Formula::exists(v, body),
                    _ => Formula::integral(v, body),
                }
            }
        }
    }

    fn quantifier(rng: &mut impl Rng) -> Quantifier {
        *[Quantifier::Forall, Quantifier::Exists, Quantifier::Integral].choose(rng).expect("non-empty")
    }

    /// Binds every free variable of `f` with randomly chosen quantifiers.
    pub fn close(&self, rng: &mut impl Rng, f: Formula) -> Formula {
        f.free_vars().into_iter().fold(f, |acc, v| QuantExpr::new(Self::quantifier(rng), &v, acc).to_formula())
    }

    /// A sentence of depth at most `max_depth`.
    pub fn sentence(&self, rng: &mut impl Rng) -> Formula {
        let budget = self.max_depth.saturating_sub(self.vars.len());
        let f = self.formula(rng, budget);
        self.close(rng, f)
    }

    /// A quantifier expression whose body has only the bound variable free.
    pub fn quant_expr(&self, rng: &mut impl Rng, depth: usize) -> QuantExpr {
        let var = self.vars.choose(rng).expect("variables").clone();
        let budget = depth.saturating_sub(self.vars.len());
        let mut body = self.formula(rng, budget);
        for v in body.free_vars() {
            if v != var {
                body = QuantExpr::new(Self::quantifier(rng), &v, body).to_formula();
            }
        }
        QuantExpr::new(Self::quantifier(rng), &var, body)
    }

    /// Any formula for syntax tests: free variables allowed, and a quantifier
    /// equality at the root when enabled.
    pub fn any(&self, rng: &mut impl Rng) -> Formula {
        if self.allow_qeq && self.max_depth > 0 && rng.gen_ratio(1, 8) {
            let q = |rng: &mut _| {
                let var = self.vars.choose(rng).expect("variables").clone();
                QuantExpr::new(Self::quantifier(rng), &var, self.formula(rng, self.max_depth - 1))
            };
            return Formula::qeq(q(rng), q(rng));
        }
        self.formula(rng, self.max_depth)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gen() -> FormulaGen {
        let sig = Signature::predicates(&[("P", 1), ("R", 2)]).with_constants(&["c"]).with_functions(&[("f", 1)]);
        FormulaGen::new(sig, 6).with_qeq()
    }

    #[test]
    fn depth_and_closure() {
        let g = gen();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let voc = g.signature.vocabulary();
        for _ in 0..500 {
            let s = g.sentence(&mut rng);
            assert!(s.is_sentence());
            assert!(s.depth() <= 6);
            s.check_well_formed(&voc).unwrap();
            let a = g.any(&mut rng);
            assert!(a.depth() <= 6);
            a.check_well_formed(&voc).unwrap();
            let e = g.quant_expr(&mut rng, 4);
            assert!(e.free_vars().is_empty());
        }
    }
}
