//! ASCII concrete syntax for formulas.
//!
//! | token       | meaning               |
//! |-------------|-----------------------|
//! | `~`         | negation              |
//! | `&`, `|+|`  | strong and / strong or (tightest binary level) |
//! | `/\`, `\/`  | weak and / weak or    |
//! | `->`        | Łukasiewicz implication, right associative |
//! | `ALL x.`, `EX x.` | quantifiers, scoping as far right as possible |
//! | `INT φ dx`  | integral quantifier   |
//! | `rat(p/q)`  | truth constant        |
//! | `=`         | equality of two quantifier expressions, top level only |

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::rational::{parse_rational, Rational01};
use crate::syntax::{
    is_identifier, is_reserved, Formula, QuantExpr, SymbolKind, Term, Vocabulary, IDENTITY, SIMILARITY,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {span}: {message}")]
    Syntax { span: SourceSpan, message: String },
    #[error("unknown symbol `{name}` at {span}")]
    UnknownSymbol { name: String, span: SourceSpan },
    #[error("`{name}` at {span} expects {expected} argument(s), found {found}")]
    ArityMismatch { name: String, expected: usize, found: usize, span: SourceSpan },
}

impl ParseError {
    pub fn span(&self) -> SourceSpan {
        match self {
            ParseError::Syntax { span, .. }
            | ParseError::UnknownSymbol { span, .. }
            | ParseError::ArityMismatch { span, .. } => *span,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Tilde,
    WeakAnd,
    WeakOr,
    StrongAnd,
    StrongOr,
    Arrow,
    Dot,
    LParen,
    RParen,
    Comma,
    Equals,
    Slash,
    Minus,
    Number(String),
    Ident(String),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Tilde => "~",
            Tok::WeakAnd => "/\\",
            Tok::WeakOr => "\\/",
            Tok::StrongAnd => "&",
            Tok::StrongOr => "|+|",
            Tok::Arrow => "->",
            Tok::Dot => ".",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Comma => ",",
            Tok::Equals => "=",
            Tok::Slash => "/",
            Tok::Minus => "-",
            Tok::Number(n) => return write!(f, "`{n}`"),
            Tok::Ident(i) => return write!(f, "`{i}`"),
            Tok::Eof => return write!(f, "end of input"),
        };
        write!(f, "`{s}`")
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, SourceSpan)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < bytes.len() {
        let c = bytes[i];
        if c == b'\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_ascii_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let start = i;
        let fixed: Option<(Tok, usize)> = match c {
            b'~' => Some((Tok::Tilde, 1)),
            b'&' => Some((Tok::StrongAnd, 1)),
            b'.' => Some((Tok::Dot, 1)),
            b'(' => Some((Tok::LParen, 1)),
            b')' => Some((Tok::RParen, 1)),
            b',' => Some((Tok::Comma, 1)),
            b'=' => Some((Tok::Equals, 1)),
            b'/' if bytes.get(i + 1) == Some(&b'\\') => Some((Tok::WeakAnd, 2)),
            b'/' => Some((Tok::Slash, 1)),
            b'\\' if bytes.get(i + 1) == Some(&b'/') => Some((Tok::WeakOr, 2)),
            b'|' if bytes.get(i + 1) == Some(&b'+') && bytes.get(i + 2) == Some(&b'|') => Some((Tok::StrongOr, 3)),
            b'-' if bytes.get(i + 1) == Some(&b'>') => Some((Tok::Arrow, 2)),
            b'-' => Some((Tok::Minus, 1)),
            _ => None,
        };
        let (tok, len) = if let Some(t) = fixed {
            t
        } else if c.is_ascii_digit() {
            let len = bytes[i..].iter().take_while(|b| b.is_ascii_digit()).count();
            (Tok::Number(text[i..i + len].to_owned()), len)
        } else if c.is_ascii_alphabetic() || c == b'_' {
            let len = bytes[i..].iter().take_while(|b| b.is_ascii_alphanumeric() || **b == b'_').count();
            (Tok::Ident(text[i..i + len].to_owned()), len)
        } else {
            let ch = text[i..].chars().next().expect("in bounds");
            let span = SourceSpan { start, end: start + ch.len_utf8(), line, column: col };
            return Err(ParseError::Syntax { span, message: format!("unexpected character `{ch}`") });
        };
        out.push((tok, SourceSpan { start, end: start + len, line, column: col }));
        i += len;
        col += len;
    }
    out.push((Tok::Eof, SourceSpan { start: text.len(), end: text.len(), line, column: col }));
    Ok(out)
}

/// How identifiers are resolved to symbols.
enum Symbols<'a> {
    /// Every symbol must be declared in the vocabulary.
    Declared(&'a Vocabulary),
    /// Predicates and functions are inferred from use; bare identifiers are
    /// constants when listed, variables otherwise.
    Inferred { constants: &'a BTreeSet<String>, voc: Vocabulary },
}

struct Parser<'a> {
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
    symbols: Symbols<'a>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.pos + offset).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, SourceSpan) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { span: self.span(), message: message.into() })
    }

    fn expect(&mut self, tok: Tok) -> Result<SourceSpan, ParseError> {
        if *self.peek() == tok {
            Ok(self.bump().1)
        } else {
            self.error(format!("expected {tok}, found {}", self.peek()))
        }
    }

    fn top(&mut self) -> Result<Formula, ParseError> {
        let lhs_span = self.span();
        let lhs = self.implication()?;
        let f = if *self.peek() == Tok::Equals {
            let eq_span = self.bump().1;
            let rhs_span = self.span();
            let rhs = self.implication()?;
            let Some(l) = QuantExpr::from_formula(&lhs) else {
                return Err(ParseError::Syntax {
                    span: lhs_span,
                    message: "`=` may only compare quantifier expressions".into(),
                });
            };
            let Some(r) = QuantExpr::from_formula(&rhs) else {
                return Err(ParseError::Syntax {
                    span: rhs_span,
                    message: "`=` may only compare quantifier expressions".into(),
                });
            };
            if let Symbols::Declared(voc) = &self.symbols {
                if !voc.has_eq {
                    return Err(ParseError::Syntax {
                        span: eq_span,
                        message: "quantifier equality is not enabled in this vocabulary".into(),
                    });
                }
            }
            Formula::qeq(l, r)
        } else {
            lhs
        };
        if *self.peek() != Tok::Eof {
            return self.error(format!("unexpected {}", self.peek()));
        }
        Ok(f)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.weak()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn weak(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.strong()?;
        loop {
            match self.peek() {
                Tok::WeakAnd => {
                    self.bump();
                    acc = Formula::and(acc, self.strong()?);
                }
                Tok::WeakOr => {
                    self.bump();
                    acc = Formula::or(acc, self.strong()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn strong(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::StrongAnd => {
                    self.bump();
                    acc = Formula::strong_and(acc, self.unary()?);
                }
                Tok::StrongOr => {
                    self.bump();
                    acc = Formula::strong_or(acc, self.unary()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LParen => {
                self.bump();
                let f = self.implication()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(kw) if kw == "ALL" || kw == "EX" => {
                self.bump();
                let var = self.binder()?;
                self.expect(Tok::Dot)?;
                let body = self.implication()?;
                Ok(if kw == "ALL" { Formula::forall(&var, body) } else { Formula::exists(&var, body) })
            }
            Tok::Ident(kw) if kw == "INT" => {
                self.bump();
                let body = self.implication()?;
                let span = self.span();
                let var = match self.peek() {
                    Tok::Ident(d) if d.len() > 1 && d.starts_with('d') && *self.peek_at(1) != Tok::LParen => {
                        d[1..].to_owned()
                    }
                    other => return self.error(format!("expected `d<variable>` closing the integral, found {other}")),
                };
                self.bump();
                self.check_binder(&var, span)?;
                Ok(Formula::integral(&var, body))
            }
            Tok::Ident(kw) if kw == "rat" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let value = self.rational()?;
                self.expect(Tok::RParen)?;
                Ok(Formula::Const(value))
            }
            Tok::Ident(name) => self.atom(name),
            other => self.error(format!("expected a formula, found {other}")),
        }
    }

    fn rational(&mut self) -> Result<Rational01, ParseError> {
        let start = self.span();
        let mut text = String::new();
        if *self.peek() == Tok::Minus {
            self.bump();
            text.push('-');
        }
        match self.bump() {
            (Tok::Number(n), _) => text.push_str(&n),
            (other, span) => {
                return Err(ParseError::Syntax { span, message: format!("expected a number, found {other}") })
            }
        }
        if *self.peek() == Tok::Slash {
            self.bump();
            match self.bump() {
                (Tok::Number(n), _) => {
                    text.push('/');
                    text.push_str(&n);
                }
                (other, span) => {
                    return Err(ParseError::Syntax { span, message: format!("expected a denominator, found {other}") })
                }
            }
        }
        let end = self.toks[self.pos.saturating_sub(1)].1.end;
        let span = SourceSpan { end, ..start };
        parse_rational(&text)
            .and_then(Rational01::new)
            .map_err(|e| ParseError::Syntax { span, message: e.to_string() })
    }

    fn binder(&mut self) -> Result<String, ParseError> {
        match self.bump() {
            (Tok::Ident(v), span) => {
                self.check_binder(&v, span)?;
                Ok(v)
            }
            (other, span) => Err(ParseError::Syntax { span, message: format!("expected a variable, found {other}") }),
        }
    }

    fn check_binder(&self, var: &str, span: SourceSpan) -> Result<(), ParseError> {
        let clash = is_reserved(var)
            || !is_identifier(var)
            || match &self.symbols {
                Symbols::Declared(voc) => voc.kind(var).is_some(),
                Symbols::Inferred { constants, voc } => constants.contains(var) || voc.kind(var).is_some(),
            };
        if clash {
            return Err(ParseError::Syntax { span, message: format!("`{var}` cannot be used as a bound variable") });
        }
        Ok(())
    }

    fn args(&mut self) -> Result<Vec<Term>, ParseError> {
        self.expect(Tok::LParen)?;
        let mut args = vec![self.term()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            args.push(self.term()?);
        }
        self.expect(Tok::RParen)?;
        Ok(args)
    }

    fn atom(&mut self, name: String) -> Result<Formula, ParseError> {
        let span = self.bump().1;
        if *self.peek() != Tok::LParen {
            return Err(ParseError::Syntax {
                span,
                message: format!("expected `(` after predicate `{name}`; a bare identifier is not a formula"),
            });
        }
        let args = self.args()?;
        let full = SourceSpan { end: self.toks[self.pos - 1].1.end, ..span };
        let arity_err = |expected: usize| ParseError::ArityMismatch {
            name: name.clone(),
            expected,
            found: args.len(),
            span: full,
        };
        match &mut self.symbols {
            Symbols::Declared(voc) => match voc.predicate_arity(&name) {
                Some(a) if a == args.len() => {}
                Some(a) => return Err(arity_err(a)),
                None if voc.kind(&name).is_some() => {
                    return Err(ParseError::Syntax { span, message: format!("`{name}` is not a predicate") })
                }
                None => return Err(ParseError::UnknownSymbol { name, span }),
            },
            Symbols::Inferred { constants, voc } => {
                if name == SIMILARITY || name == IDENTITY {
                    if args.len() != 2 {
                        return Err(arity_err(2));
                    }
                    if name == SIMILARITY {
                        voc.has_approx = true;
                    } else {
                        voc.has_eq = true;
                    }
                } else if is_reserved(&name) || constants.contains(&name) {
                    return Err(ParseError::Syntax { span, message: format!("`{name}` is not a predicate") });
                } else {
                    match voc.kind(&name) {
                        None => voc.add_predicate(&name, args.len()).map_err(|e| ParseError::Syntax {
                            span,
                            message: e.to_string(),
                        })?,
                        Some(SymbolKind::Predicate(a)) if a == args.len() => {}
                        Some(SymbolKind::Predicate(a)) => return Err(arity_err(a)),
                        Some(_) => {
                            return Err(ParseError::Syntax { span, message: format!("`{name}` is not a predicate") })
                        }
                    }
                }
            }
        }
        Ok(Formula::Atom(name, args))
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let (name, span) = match self.bump() {
            (Tok::Ident(n), span) => (n, span),
            (other, span) => return Err(ParseError::Syntax { span, message: format!("expected a term, found {other}") }),
        };
        if is_reserved(&name) {
            return Err(ParseError::Syntax { span, message: format!("`{name}` is reserved") });
        }
        if *self.peek() == Tok::LParen {
            let args = self.args()?;
            let full = SourceSpan { end: self.toks[self.pos - 1].1.end, ..span };
            let found = args.len();
            let arity_err = |expected| ParseError::ArityMismatch { name: name.clone(), expected, found, span: full };
            match &mut self.symbols {
                Symbols::Declared(voc) => match voc.kind(&name) {
                    Some(SymbolKind::Function(a)) if a == found => {}
                    Some(SymbolKind::Function(a)) => return Err(arity_err(a)),
                    Some(_) => return Err(ParseError::Syntax { span, message: format!("`{name}` is not a function") }),
                    None => return Err(ParseError::UnknownSymbol { name, span }),
                },
                Symbols::Inferred { constants, voc } => {
                    if constants.contains(&name) {
                        return Err(ParseError::Syntax { span, message: format!("`{name}` is not a function") });
                    }
                    match voc.kind(&name) {
                        None => voc.add_function(&name, found).map_err(|e| ParseError::Syntax {
                            span,
                            message: e.to_string(),
                        })?,
                        Some(SymbolKind::Function(a)) if a == found => {}
                        Some(SymbolKind::Function(a)) => return Err(arity_err(a)),
                        Some(_) => {
                            return Err(ParseError::Syntax { span, message: format!("`{name}` is not a function") })
                        }
                    }
                }
            }
            return Ok(Term::App(name, args));
        }
        match &self.symbols {
            Symbols::Declared(voc) => match voc.kind(&name) {
                Some(SymbolKind::Constant) => Ok(Term::Const(name)),
                Some(_) => Err(ParseError::Syntax { span, message: format!("`{name}` is not a term") }),
                None => Ok(Term::Var(name)),
            },
            Symbols::Inferred { constants, voc } => {
                if constants.contains(&name) {
                    Ok(Term::Const(name))
                } else if voc.kind(&name).is_some() {
                    Err(ParseError::Syntax { span, message: format!("`{name}` is not a term") })
                } else {
                    Ok(Term::Var(name))
                }
            }
        }
    }
}

/// Parses a formula whose symbols are all declared in `voc`. Identifiers in
/// term position that are not declared constants are variables.
pub fn parse_formula(text: &str, voc: &Vocabulary) -> Result<Formula, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0, symbols: Symbols::Declared(voc) };
    p.top()
}

/// Parses a formula without a declared vocabulary: predicate and function
/// symbols are inferred from use (with consistent arities) and bare
/// identifiers listed in `constants` are constants. Returns the formula and
/// the vocabulary it uses.
pub fn parse_formula_inferred(text: &str, constants: &BTreeSet<String>) -> Result<(Formula, Vocabulary), ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        symbols: Symbols::Inferred { constants, voc: Vocabulary::new() },
    };
    let f = p.top()?;
    let voc = match p.symbols {
        Symbols::Inferred { voc, .. } => voc,
        Symbols::Declared(_) => unreachable!(),
    };
    let mut voc = voc;
    if matches!(f, Formula::QEq(..)) {
        voc.has_eq = true;
    }
    for c in f.used_vocabulary().expect("parser enforces consistent symbols").constants() {
        voc.add_constant(c).expect("constants are disjoint from inferred symbols");
    }
    Ok((f, voc))
}

const LEVEL_QUANT: u8 = 0;
const LEVEL_IMPLIES: u8 = 1;
const LEVEL_WEAK: u8 = 2;
const LEVEL_STRONG: u8 = 3;
const LEVEL_NOT: u8 = 4;
const LEVEL_ATOM: u8 = 5;

fn level(f: &Formula) -> u8 {
    match f {
        Formula::Forall(..) | Formula::Exists(..) | Formula::Integral(..) | Formula::QEq(..) => LEVEL_QUANT,
        Formula::Implies(..) => LEVEL_IMPLIES,
        Formula::And(..) | Formula::Or(..) => LEVEL_WEAK,
        Formula::StrongAnd(..) | Formula::StrongOr(..) => LEVEL_STRONG,
        Formula::Not(_) => LEVEL_NOT,
        Formula::Atom(..) | Formula::Const(_) => LEVEL_ATOM,
    }
}

fn write_formula(out: &mut String, f: &Formula, min_level: u8) {
    if level(f) < min_level {
        out.push('(');
        write_formula(out, f, 0);
        out.push(')');
        return;
    }
    let binary = |out: &mut String, a: &Formula, op: &str, b: &Formula, lmin: u8, rmin: u8| {
        write_formula(out, a, lmin);
        out.push(' ');
        out.push_str(op);
        out.push(' ');
        write_formula(out, b, rmin);
    };
    match f {
        Formula::Atom(p, args) => {
            out.push_str(p);
            out.push('(');
            for (i, t) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&t.to_string());
            }
            out.push(')');
        }
        Formula::Const(r) => {
            out.push_str(&format!("rat({r})"));
        }
        Formula::Not(a) => {
            out.push('~');
            write_formula(out, a, LEVEL_NOT);
        }
        Formula::Implies(a, b) => binary(out, a, "->", b, LEVEL_WEAK, LEVEL_IMPLIES),
        Formula::And(a, b) => binary(out, a, "/\\", b, LEVEL_WEAK, LEVEL_STRONG),
        Formula::Or(a, b) => binary(out, a, "\\/", b, LEVEL_WEAK, LEVEL_STRONG),
        Formula::StrongAnd(a, b) => binary(out, a, "&", b, LEVEL_STRONG, LEVEL_NOT),
        Formula::StrongOr(a, b) => binary(out, a, "|+|", b, LEVEL_STRONG, LEVEL_NOT),
        Formula::Forall(v, b) => {
            out.push_str(&format!("ALL {v}. "));
            write_formula(out, b, 0);
        }
        Formula::Exists(v, b) => {
            out.push_str(&format!("EX {v}. "));
            write_formula(out, b, 0);
        }
        Formula::Integral(v, b) => {
            out.push_str("INT ");
            write_formula(out, b, 0);
            out.push_str(&format!(" d{v}"));
        }
        Formula::QEq(l, r) => {
            write_formula(out, &l.to_formula(), 0);
            out.push_str(" = ");
            write_formula(out, &r.to_formula(), 0);
        }
    }
}

/// Canonical text of a formula; [`parse_formula`] reads it back to an equal tree.
pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(&mut out, f, 0);
    out
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::syntax::Quantifier;

    fn voc() -> Vocabulary {
        Vocabulary::with_flags(true, false)
            .predicate("P", 1)
            .unwrap()
            .predicate("Q", 1)
            .unwrap()
            .predicate("R", 2)
            .unwrap()
            .function("f", 1)
            .unwrap()
            .constant("c")
            .unwrap()
    }

    fn p(v: &str) -> Formula {
        Formula::atom("P", vec![Term::var(v)])
    }

    fn qq(v: &str) -> Formula {
        Formula::atom("Q", vec![Term::var(v)])
    }

    #[test]
    fn integral_atom() {
        assert_eq!(parse_formula("INT P(x) dx", &voc()).unwrap(), Formula::integral("x", p("x")));
    }

    #[test]
    fn integral_equality() {
        assert_eq!(
            parse_formula("INT P(x) dx = INT Q(y) dy", &voc()).unwrap(),
            Formula::qeq(
                QuantExpr::new(Quantifier::Integral, "x", p("x")),
                QuantExpr::new(Quantifier::Integral, "y", qq("y"))
            )
        );
    }

    #[test]
    fn arithmetic_on_formulas_is_rejected() {
        let err = parse_formula("P(x) + Q(x)", &voc()).unwrap_err();
        assert!(matches!(err, ParseError::Syntax { .. }));
        assert_eq!(err.span().start, 5);
        assert_eq!(err.span().column, 6);
    }

    #[test]
    fn equality_between_plain_formulas_is_rejected() {
        let err = parse_formula("P(x) = Q(x)", &voc()).unwrap_err();
        assert!(matches!(err, ParseError::Syntax { .. }), "{err}");
        let no_eq = Vocabulary::new().predicate("P", 1).unwrap();
        assert!(parse_formula("ALL x. P(x) = ALL y. P(y)", &no_eq).is_err());
    }

    #[test]
    fn printing_examples() {
        assert_eq!(print_formula(&Formula::not(p("x"))), "~P(x)");
        let f = Formula::implies(Formula::Const(q(1, 2)), Formula::atom("P", vec![Term::constant("c")]));
        assert_eq!(print_formula(&f), "rat(1/2) -> P(c)");
        assert_eq!(print_formula(&Formula::forall("x", p("x"))), "ALL x. P(x)");
    }

    #[test]
    fn precedence() {
        let v = voc();
        let f = parse_formula("~P(x) & Q(x) /\\ P(y) -> Q(y) -> P(x)", &v).unwrap();
        let expected = Formula::implies(
            Formula::and(Formula::strong_and(Formula::not(p("x")), qq("x")), p("y")),
            Formula::implies(qq("y"), p("x")),
        );
        assert_eq!(f, expected);
        let g = parse_formula("P(x) & ALL y. Q(y) -> P(y)", &v).unwrap();
        assert_eq!(g, Formula::strong_and(p("x"), Formula::forall("y", Formula::implies(qq("y"), p("y")))));
    }

    #[test]
    fn constants_and_variables() {
        let f = parse_formula("R(c, f(x))", &voc()).unwrap();
        assert_eq!(f, Formula::atom("R", vec![Term::constant("c"), Term::app("f", vec![Term::var("x")])]));
    }

    #[test]
    fn symbol_errors() {
        let v = voc();
        assert!(matches!(parse_formula("S(x)", &v), Err(ParseError::UnknownSymbol { .. })));
        assert!(matches!(parse_formula("P(x, y)", &v), Err(ParseError::ArityMismatch { expected: 1, found: 2, .. })));
        assert!(matches!(parse_formula("P(g(x))", &v), Err(ParseError::UnknownSymbol { .. })));
        assert!(matches!(parse_formula("ALL c. P(c)", &v), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_formula("rat(3/2)", &v), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_formula("INT P(x)", &v), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_formula("P(x) é", &v), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn malformed_inputs_never_panic() {
        for text in ["", "(", ")", "~", "ALL", "ALL x", "ALL x.", "INT", "rat(", "rat(1/", "P(", "P(x", "=", "-> P(x)", "|+", "/"] {
            assert!(parse_formula(text, &voc()).is_err(), "{text:?} should fail");
        }
    }

    #[test]
    fn nested_integrals_and_quantifier_parens() {
        let v = voc();
        let text = "INT INT R(x, y) dx dy";
        let f = parse_formula(text, &v).unwrap();
        assert_eq!(print_formula(&f), text);
        let g = Formula::implies(Formula::forall("x", p("x")), Formula::exists("y", qq("y")));
        let printed = print_formula(&g);
        assert_eq!(printed, "(ALL x. P(x)) -> (EX y. Q(y))");
        assert_eq!(parse_formula(&printed, &v).unwrap(), g);
    }

    #[test]
    fn inferred_vocabulary() {
        let consts = BTreeSet::from(["c".to_owned()]);
        let (f, v) = parse_formula_inferred("P(c) \\/ ~P(c) /\\ SIM(x, g(y, c))", &consts).unwrap();
        assert_eq!(v.predicate_arity("P"), Some(1));
        assert_eq!(v.function_arity("g"), Some(2));
        assert!(v.has_approx && v.has_constant("c"));
        assert!(f.check_well_formed(&v).is_ok());
        assert!(matches!(
            parse_formula_inferred("P(x) /\\ P(x, y)", &consts),
            Err(ParseError::ArityMismatch { .. })
        ));
    }
}
