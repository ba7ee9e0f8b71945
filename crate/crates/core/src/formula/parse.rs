//! S-expression problem files.
//!
//! ```text
//! theory doag
//! vars x: x1 x2 ; y: y1
//! formula (and (= x2 (+ x1 y1)) (< y1 x1))
//! ```
//!
//! Lines starting with `#` are comments.

use num_rational::BigRational;

use super::{Atom, Formula, LinearTerm, Partition, Problem, Relation, Theory};
use crate::error::{Error, Result};
use crate::scalar::{parse_scalar, Scalar};

const RESERVED: &[&str] = &["and", "or", "not", "exists", "forall", "theory", "vars", "formula"];

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Colon,
    Semi,
    Word(String),
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn tokenize(text: &str) -> Vec<Spanned> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        if line.trim_start().starts_with('#') {
            continue;
        }
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let (line, column) = (li + 1, i + 1);
            let single = match c {
                '(' => Some(Tok::Open),
                ')' => Some(Tok::Close),
                ':' => Some(Tok::Colon),
                ';' => Some(Tok::Semi),
                _ => None,
            };
            if let Some(tok) = single {
                out.push(Spanned { tok, line, column });
                i += 1;
            } else if c.is_whitespace() {
                i += 1;
            } else {
                let start = i;
                while i < chars.len() && !chars[i].is_whitespace() && !"():;".contains(chars[i]) {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                out.push(Spanned {
                    tok: Tok::Word(word),
                    line,
                    column,
                });
            }
        }
    }
    out
}

struct Parser<'a, S> {
    toks: Vec<Spanned>,
    pos: usize,
    theory: Theory,
    declared: &'a [String],
    scope: Vec<String>,
    _marker: std::marker::PhantomData<S>,
}

fn is_ident(w: &str) -> bool {
    let mut cs = w.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
        && !RESERVED.contains(&w)
}

fn is_number(w: &str) -> bool {
    let body = w.strip_prefix('-').unwrap_or(w);
    let (n, d) = body.split_once('/').unwrap_or((body, "1"));
    !n.is_empty() && !d.is_empty() && n.chars().all(|c| c.is_ascii_digit()) && d.chars().all(|c| c.is_ascii_digit())
}

/// Parses a problem file with arbitrary-precision rationals.
pub fn parse(text: &str) -> Result<Problem<BigRational>> {
    parse_as(text)
}

/// Parses a problem file into any scalar type.
pub fn parse_as<S: Scalar>(text: &str) -> Result<Problem<S>> {
    let toks = tokenize(text);
    let mut header = HeaderParser { toks: &toks, pos: 0 };
    header.keyword("theory")?;
    let theory = match header.word()?.as_str() {
        "dlo" => Theory::Dlo,
        "doag" => Theory::Doag,
        other => return Err(header.error_prev(format!("unknown theory `{other}`"))),
    };
    header.keyword("vars")?;
    header.keyword("x")?;
    header.expect(Tok::Colon)?;
    let x = header.idents()?;
    header.expect(Tok::Semi)?;
    header.keyword("y")?;
    header.expect(Tok::Colon)?;
    let y = header.idents()?;
    header.keyword("formula")?;
    let partition = Partition {
        x: x.clone(),
        y: y.clone(),
    };
    partition.validate()?;
    let declared = partition.variables();
    let pos = header.pos;
    let mut p = Parser::<S> {
        toks,
        pos,
        theory,
        declared: &declared,
        scope: Vec::new(),
        _marker: std::marker::PhantomData,
    };
    let formula = p.sexpr()?;
    if p.pos < p.toks.len() {
        return Err(p.error_here("trailing input after formula"));
    }
    Problem::new(theory, partition, formula)
}

struct HeaderParser<'t> {
    toks: &'t [Spanned],
    pos: usize,
}

impl HeaderParser<'_> {
    fn error_at(&self, i: usize, message: String) -> Error {
        let (line, column) = self
            .toks
            .get(i)
            .or(self.toks.last())
            .map_or((1, 1), |t| (t.line, t.column));
        Error::Syntax { line, column, message }
    }

    fn error_prev(&self, message: String) -> Error {
        self.error_at(self.pos.saturating_sub(1), message)
    }

    fn word(&mut self) -> Result<String> {
        match self.toks.get(self.pos) {
            Some(Spanned { tok: Tok::Word(w), .. }) => {
                self.pos += 1;
                Ok(w.clone())
            }
            _ => Err(self.error_at(self.pos, "expected a word".into())),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<()> {
        let at = self.pos;
        let w = self.word().map_err(|_| self.error_at(at, format!("expected `{kw}`")))?;
        if w != kw {
            return Err(self.error_at(at, format!("expected `{kw}`, found `{w}`")));
        }
        Ok(())
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        match self.toks.get(self.pos) {
            Some(t) if t.tok == tok => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.error_at(self.pos, format!("expected {tok:?}"))),
        }
    }

    fn idents(&mut self) -> Result<Vec<String>> {
        let mut out = Vec::new();
        while let Some(Spanned { tok: Tok::Word(w), .. }) = self.toks.get(self.pos) {
            if w == "formula" || !is_ident(w) {
                break;
            }
            out.push(w.clone());
            self.pos += 1;
        }
        if out.is_empty() {
            return Err(self.error_at(self.pos, "expected at least one variable name".into()));
        }
        Ok(out)
    }
}

impl<S: Scalar> Parser<'_, S> {
    fn error_at(&self, i: usize, message: impl Into<String>) -> Error {
        let (line, column) = self
            .toks
            .get(i)
            .or(self.toks.last())
            .map_or((1, 1), |t| (t.line, t.column));
        Error::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    fn error_here(&self, message: impl Into<String>) -> Error {
        self.error_at(self.pos, message)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.tok.clone());
        self.pos += 1;
        t
    }

    fn expect_close(&mut self) -> Result<()> {
        match self.next() {
            Some(Tok::Close) => Ok(()),
            _ => Err(self.error_at(self.pos - 1, "expected `)`")),
        }
    }

    fn sexpr(&mut self) -> Result<Formula<S>> {
        if self.next() != Some(Tok::Open) {
            return Err(self.error_at(self.pos - 1, "expected `(`"));
        }
        let head_at = self.pos;
        let head = match self.next() {
            Some(Tok::Word(w)) => w,
            _ => return Err(self.error_at(head_at, "expected an operator")),
        };
        match head.as_str() {
            "and" | "or" => {
                let mut kids = Vec::new();
                while self.peek() == Some(&Tok::Open) {
                    kids.push(self.sexpr()?);
                }
                if kids.is_empty() {
                    return Err(self.error_here(format!("`{head}` needs at least one operand")));
                }
                self.expect_close()?;
                Ok(if head == "and" {
                    Formula::And(kids)
                } else {
                    Formula::Or(kids)
                })
            }
            "not" => {
                let f = self.sexpr()?;
                self.expect_close()?;
                Ok(Formula::not(f))
            }
            "exists" | "forall" => {
                if self.next() != Some(Tok::Open) {
                    return Err(self.error_at(self.pos - 1, "expected `(` before bound variables"));
                }
                let mut vars = Vec::new();
                loop {
                    let at = self.pos;
                    match self.next() {
                        Some(Tok::Word(w)) if is_ident(&w) => {
                            if self.declared.contains(&w) || self.scope.contains(&w) || vars.contains(&w) {
                                return Err(Error::DuplicateVariable(w));
                            }
                            vars.push(w);
                        }
                        Some(Tok::Close) if !vars.is_empty() => break,
                        _ => return Err(self.error_at(at, "expected a bound variable name")),
                    }
                }
                let depth = self.scope.len();
                self.scope.extend(vars.iter().cloned());
                let body = self.sexpr()?;
                self.scope.truncate(depth);
                self.expect_close()?;
                let body = Box::new(body);
                Ok(if head == "exists" {
                    Formula::Exists(vars, body)
                } else {
                    Formula::Forall(vars, body)
                })
            }
            "<" | "<=" | "=" => {
                let rel = match head.as_str() {
                    "<" => Relation::Lt,
                    "<=" => Relation::Le,
                    _ => Relation::Eq,
                };
                let lhs = self.term()?;
                let rhs = self.term()?;
                self.expect_close()?;
                let atom = Atom::compare(&lhs, rel, &rhs);
                if let (Theory::Dlo, Formula::Atom(a)) = (self.theory, &atom) {
                    if !a.is_order_shaped() {
                        return Err(Error::TheoryMismatch(format!(
                            "atom at {}:{} is not an order atom",
                            self.toks[head_at].line, self.toks[head_at].column
                        )));
                    }
                }
                Ok(atom)
            }
            other => Err(self.error_at(head_at, format!("unknown operator `{other}`"))),
        }
    }

    fn term(&mut self) -> Result<LinearTerm<S>> {
        let at = self.pos;
        match self.next() {
            Some(Tok::Word(w)) if is_number(&w) => {
                let c = parse_scalar::<S>(&w).ok_or_else(|| Error::ScalarRange(w.clone()))?;
                Ok(LinearTerm::constant(c))
            }
            Some(Tok::Word(w)) if is_ident(&w) => {
                if self.declared.contains(&w) || self.scope.contains(&w) {
                    Ok(LinearTerm::var(&w))
                } else {
                    Err(Error::UndeclaredVariable(w))
                }
            }
            Some(Tok::Open) => {
                let op_at = self.pos;
                let op = match self.next() {
                    Some(Tok::Word(w)) => w,
                    _ => return Err(self.error_at(op_at, "expected a term operator")),
                };
                if self.theory == Theory::Dlo && matches!(op.as_str(), "+" | "-" | "*") {
                    return Err(Error::TheoryMismatch(format!(
                        "operator `{op}` at {}:{} is not available in dlo",
                        self.toks[op_at].line, self.toks[op_at].column
                    )));
                }
                let t = match op.as_str() {
                    "+" => {
                        let mut acc = self.term()?;
                        while self.peek() != Some(&Tok::Close) {
                            acc = acc.add(&self.term()?);
                        }
                        acc
                    }
                    "-" => {
                        let a = self.term()?;
                        let b = self.term()?;
                        a.sub(&b)
                    }
                    "*" => {
                        let k_at = self.pos;
                        let k = match self.next() {
                            Some(Tok::Word(w)) if is_number(&w) => {
                                parse_scalar::<S>(&w).ok_or_else(|| Error::ScalarRange(w.clone()))?
                            }
                            _ => return Err(self.error_at(k_at, "expected a rational coefficient")),
                        };
                        self.term()?.scale(&k)
                    }
                    other => return Err(self.error_at(op_at, format!("unknown term operator `{other}`"))),
                };
                self.expect_close()?;
                Ok(t)
            }
            _ => Err(self.error_at(at, "expected a term")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = BigRational;

    #[test]
    fn parses_simple_problem() {
        let p = parse("theory doag\nvars x: x1 ; y: y1\nformula (< y1 x1)").unwrap();
        assert_eq!(p.theory, Theory::Doag);
        assert_eq!(p.partition.x, vec!["x1"]);
        assert_eq!(p.partition.y, vec!["y1"]);
        let Formula::Atom(a) = &p.formula else { panic!() };
        assert_eq!(a.relation, Relation::Lt);
        assert_eq!(a.term.coeffs["x1"], Q::from_int(1));
        assert_eq!(a.term.coeffs["y1"], Q::from_int(-1));
    }

    #[test]
    fn canonicalizes_equation_and_inequality() {
        let p = parse("theory doag\nvars x: x1 x2 ; y: y1\nformula (and (= x2 (+ x1 y1)) (< y1 x1))").unwrap();
        let Formula::And(kids) = &p.formula else { panic!() };
        let Formula::Atom(eq) = &kids[0] else { panic!() };
        assert_eq!(eq.relation, Relation::Eq);
        // x2 - x1 - y1 = 0 with the first (by name) coefficient positive.
        let expect: Vec<(&str, i64)> = vec![("x1", 1), ("x2", -1), ("y1", 1)];
        for (v, c) in expect {
            assert_eq!(eq.term.coeffs[v], Q::from_int(c), "{v}");
        }
        let Formula::Atom(lt) = &kids[1] else { panic!() };
        assert_eq!(lt.term.coeffs["x1"], Q::from_int(1));
        assert_eq!(lt.term.coeffs["y1"], Q::from_int(-1));
    }

    #[test]
    fn dlo_rejects_scaling() {
        let err = parse("theory dlo\nvars x: x1 ; y: y1\nformula (< (* 2 x1) y1)").unwrap_err();
        assert!(matches!(err, Error::TheoryMismatch(_)), "{err:?}");
    }

    #[test]
    fn undeclared_variable() {
        let err = parse("theory doag\nvars x: x1 ; y: y1\nformula (< z x1)").unwrap_err();
        assert_eq!(err, Error::UndeclaredVariable("z".into()));
    }

    #[test]
    fn syntax_error_has_position() {
        let err = parse("theory doag\nvars x: x1 ; y: y1\nformula (< y1 x1").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 3, .. }), "{err:?}");
        let err = parse("theory doag\nvars x: x1 ; y: y1\nformula (foo y1 x1)").unwrap_err();
        assert_eq!(
            err,
            Error::Syntax {
                line: 3,
                column: 10,
                message: "unknown operator `foo`".into()
            }
        );
    }

    #[test]
    fn empty_partition_side() {
        let err = parse("theory doag\nvars x: ; y: y1\nformula (< y1 0)").unwrap_err();
        assert!(matches!(err, Error::Syntax { .. }), "{err:?}");
        let err = Partition::new(Vec::<String>::new(), ["y1"]).unwrap_err();
        assert_eq!(err, Error::EmptyPartition("x"));
    }

    #[test]
    fn duplicate_and_shadowed_variables() {
        let err = parse("theory doag\nvars x: x1 ; y: x1\nformula (< x1 0)").unwrap_err();
        assert_eq!(err, Error::DuplicateVariable("x1".into()));
        let err = parse("theory doag\nvars x: x1 ; y: y1\nformula (exists (x1) (< x1 y1))").unwrap_err();
        assert_eq!(err, Error::DuplicateVariable("x1".into()));
    }

    #[test]
    fn quantifiers_and_comments() {
        let text = "# interval\ntheory dlo\nvars x: x1 x2 ; y: y1\nformula (forall (z) (or (not (< x1 z)) (< z x2)))\n";
        let p = parse(text).unwrap();
        assert!(matches!(p.formula, Formula::Forall(..)));
    }

    #[test]
    fn fixed_width_scalars() {
        let p =
            parse_as::<num_rational::Ratio<i64>>("theory doag\nvars x: x1 ; y: y1\nformula (< (* 1/3 y1) x1)").unwrap();
        assert_eq!(p.formula.atoms().len(), 1);
    }
}
