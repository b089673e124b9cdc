//! Recursive-descent parser for the text grammar
//!
//! ```text
//! formula := disj
//! disj    := conj ("|" conj)*
//! conj    := unary ("&" unary)*
//! unary   := "~" unary | "exists" var ("," var)* "." unary | "(" formula ")" | atom
//! atom    := PredName "(" var ("," var)* ")"
//! ```
//!
//! `∧ ∨ ¬ ∃` are accepted as aliases of `& | ~ exists`.

use std::collections::{BTreeMap, HashSet};

use super::signature::{is_pred_name, is_var_name, Signature};
use super::{Formula, FormulaError};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Exists,
    LParen,
    RParen,
    Comma,
    Dot,
    And,
    Or,
    Not,
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
}

impl Lexer {
    fn new(text: &str) -> Result<Self, FormulaError> {
        let mut toks = Vec::new();
        let chars: Vec<(usize, char)> = text.char_indices().collect();
        let mut i = 0;
        while i < chars.len() {
            let (pos, c) = chars[i];
            let tok = match c {
                c if c.is_whitespace() => {
                    i += 1;
                    continue;
                }
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                '.' => Tok::Dot,
                '&' | '∧' => Tok::And,
                '|' | '∨' => Tok::Or,
                '~' | '¬' => Tok::Not,
                '∃' => Tok::Exists,
                c if c.is_ascii_alphanumeric() || c == '_' => {
                    let start = i;
                    while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                        i += 1;
                    }
                    let word: String = chars[start..i].iter().map(|&(_, c)| c).collect();
                    let tok = if word == "exists" {
                        Tok::Exists
                    } else {
                        Tok::Ident(word)
                    };
                    toks.push((tok, pos));
                    continue;
                }
                other => {
                    return Err(FormulaError::Syntax {
                        pos,
                        msg: format!("unexpected character {other:?}"),
                    })
                }
            };
            toks.push((tok, pos));
            i += 1;
        }
        toks.push((Tok::End, text.len()));
        Ok(Self { toks })
    }
}

struct Parser<'s> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    sig: &'s Signature,
    inferred: BTreeMap<String, usize>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, FormulaError> {
        Err(FormulaError::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), FormulaError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn formula(&mut self) -> Result<Formula, FormulaError> {
        let mut parts = vec![self.conj()?];
        while *self.peek() == Tok::Or {
            self.bump();
            parts.push(self.conj()?);
        }
        Ok(Formula::disjoin(parts))
    }

    fn conj(&mut self) -> Result<Formula, FormulaError> {
        let mut parts = vec![self.unary()?];
        while *self.peek() == Tok::And {
            self.bump();
            parts.push(self.unary()?);
        }
        Ok(Formula::conjoin(parts))
    }

    fn unary(&mut self) -> Result<Formula, FormulaError> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Exists => {
                self.bump();
                let mut vars = vec![self.var()?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    vars.push(self.var()?);
                }
                // `∃x P(x)` style input may omit the dot
                if *self.peek() == Tok::Dot {
                    self.bump();
                }
                let body = self.unary()?;
                Ok(Formula::exists_many(&vars, body))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(f)
            }
            Tok::Ident(_) => self.atom(),
            Tok::End => self.err("unexpected end of input"),
            other => self.err(format!("unexpected token {other:?}")),
        }
    }

    fn var(&mut self) -> Result<String, FormulaError> {
        match self.peek().clone() {
            Tok::Ident(name) if is_var_name(&name) => {
                self.bump();
                Ok(name)
            }
            Tok::Ident(name) => self.err(format!("{name:?} is not a variable name")),
            _ => self.err("expected a variable"),
        }
    }

    fn atom(&mut self) -> Result<Formula, FormulaError> {
        let pos = self.pos();
        let name = match self.bump() {
            Tok::Ident(n) if is_pred_name(&n) => n,
            Tok::Ident(n) => {
                return Err(FormulaError::Syntax {
                    pos,
                    msg: format!("{n:?} is not a predicate name"),
                })
            }
            _ => unreachable!("atom called on identifier"),
        };
        self.expect(Tok::LParen, "'(' after predicate")?;
        let mut args = vec![self.var()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            args.push(self.var()?);
        }
        self.expect(Tok::RParen, "')' closing argument list")?;
        let expected = match self.sig.arity(&name) {
            Some(a) => a,
            None => match self.inferred.get(&name) {
                Some(&a) => a,
                None if self.sig.infers() => {
                    self.inferred.insert(name.clone(), args.len());
                    args.len()
                }
                None => return Err(FormulaError::UnknownPredicate(name)),
            },
        };
        if expected != args.len() {
            return Err(FormulaError::ArityMismatch {
                pred: name,
                expected,
                found: args.len(),
            });
        }
        Ok(Formula::Atom { pred: name, args })
    }
}

/// Parses and checks a formula. The input must already be rectified: each
/// variable is quantified at most once and never occurs both free and bound.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, FormulaError> {
    parse_with_arities(text, sig).map(|(f, _)| f)
}

/// Like [`parse_formula`], also returning the arities inferred for
/// predicates unknown to an inferring signature.
pub fn parse_with_arities(
    text: &str,
    sig: &Signature,
) -> Result<(Formula, BTreeMap<String, usize>), FormulaError> {
    let lexer = Lexer::new(text)?;
    let mut p = Parser {
        toks: lexer.toks,
        at: 0,
        sig,
        inferred: BTreeMap::new(),
    };
    let f = p.formula()?;
    if *p.peek() != Tok::End {
        return p.err("trailing input");
    }
    check_rectified(&f)?;
    Ok((f, p.inferred))
}

/// Errors unless every quantified variable is quantified once and not free.
pub fn check_rectified(f: &Formula) -> Result<(), FormulaError> {
    let mut bound = HashSet::new();
    for v in f.bound_vars() {
        if !bound.insert(v.clone()) {
            return Err(FormulaError::QuantifiedTwice(v));
        }
    }
    if let Some(v) = f.free_vars().into_iter().find(|v| bound.contains(v)) {
        return Err(FormulaError::FreeAndBound(v));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn open(text: &str) -> Result<Formula, FormulaError> {
        parse_formula(text, &Signature::inferring())
    }

    #[test]
    fn selling_reduction_shape() {
        let f = open("exists x. (S1(a,c,x) & S2(x,b,d))").unwrap();
        assert_eq!(
            f,
            Formula::exists(
                "x",
                Formula::and(vec![
                    Formula::atom("S1", &["a", "c", "x"]),
                    Formula::atom("S2", &["x", "b", "d"]),
                ])
            )
        );
        assert_eq!(f.free_vars(), ["a", "c", "b", "d"]);
    }

    #[test]
    fn atoms_and_precedence() {
        assert_eq!(
            parse_formula("I3(x,y,z)", &Signature::new()).unwrap(),
            Formula::atom("I3", &["x", "y", "z"])
        );
        let f = open("P(x) | Q(y) & ~R(z)").unwrap();
        assert_eq!(
            f,
            Formula::or(vec![
                Formula::atom("P", &["x"]),
                Formula::and(vec![
                    Formula::atom("Q", &["y"]),
                    Formula::not(Formula::atom("R", &["z"]))
                ]),
            ])
        );
        let g = open("∃t (P(x,t) ∧ ¬Q(t,y))").unwrap();
        assert_eq!(g, open("exists t. (P(x,t) & ~Q(t,y))").unwrap());
        let multi = open("exists s,t. R(s,t,x)").unwrap();
        assert_eq!(multi.bound_vars(), ["s", "t"]);
    }

    #[test]
    fn rectification_errors() {
        assert!(matches!(
            open("exists x. P(x) & exists x. Q(x)"),
            Err(FormulaError::QuantifiedTwice(v)) if v == "x"
        ));
        assert!(matches!(
            open("exists x. (P(x) & exists x. Q(x))"),
            Err(FormulaError::QuantifiedTwice(_))
        ));
        assert!(matches!(
            open("exists x. P(x) & Q(x)"),
            Err(FormulaError::FreeAndBound(v)) if v == "x"
        ));
    }

    #[test]
    fn signature_errors() {
        let sig = Signature::new().with("P", 2);
        assert!(matches!(
            parse_formula("Q(x)", &sig),
            Err(FormulaError::UnknownPredicate(p)) if p == "Q"
        ));
        assert!(matches!(
            parse_formula("P(x)", &sig),
            Err(FormulaError::ArityMismatch {
                expected: 2,
                found: 1,
                ..
            })
        ));
        assert!(matches!(
            parse_formula("I3(x,y)", &sig),
            Err(FormulaError::ArityMismatch { expected: 3, .. })
        ));
        assert!(matches!(
            open("P(x) & P(x,y)"),
            Err(FormulaError::ArityMismatch { expected: 1, .. })
        ));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match open("P(x) & ") {
            Err(FormulaError::Syntax { pos, .. }) => assert_eq!(pos, 7),
            other => panic!("{other:?}"),
        }
        match open("P(x)) ") {
            Err(FormulaError::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        assert!(open("P(X)").is_err());
        assert!(open("p(x)").is_err());
        assert!(open("P()").is_err());
        assert!(open("P(x) # Q(y)").is_err());
    }

    #[test]
    fn display_reparses() {
        for text in [
            "exists t. (~(P(x) & Q(y,t)) & R(t,z))",
            "(P(x) | Q(y)) & ~(R(z) | S(x,z))",
            "~exists u. ~(A(u,v) | exists w. B(w,v))",
        ] {
            let f = open(text).unwrap();
            assert_eq!(open(&f.to_string()).unwrap(), f, "{text}");
        }
    }
}
