//! Recursive-descent parser for the formula grammar. Hand-rolled tokenizer
//! with line/column tracking so syntax errors point at the offending token.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Atom, Formula, Relation};
use crate::poly::Polynomial;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at {}:{}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum TokenKind {
    LParen,
    RParen,
    Int(BigInt),
    /// Any non-integer word: variables, keywords, operators, relations.
    Word(String),
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub kind: TokenKind,
    pub line: usize,
    pub col: usize,
}

pub(crate) struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    pub fn new(src: &'a str) -> Self {
        Lexer { src: src.as_bytes(), pos: 0, line: 1, col: 1 }
    }

    fn bump(&mut self) -> u8 {
        let c = self.src[self.pos];
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        c
    }

    fn error(&self, line: usize, col: usize, message: impl Into<String>) -> ParseError {
        ParseError { line, col, message: message.into() }
    }

    /// All tokens up to end of input.
    pub fn tokenize(mut self) -> Result<Vec<Token>, ParseError> {
        let mut out = Vec::new();
        while self.pos < self.src.len() {
            let c = self.src[self.pos];
            if c.is_ascii_whitespace() {
                self.bump();
                continue;
            }
            let (line, col) = (self.line, self.col);
            if c == b'(' {
                self.bump();
                out.push(Token { kind: TokenKind::LParen, line, col });
                continue;
            }
            if c == b')' {
                self.bump();
                out.push(Token { kind: TokenKind::RParen, line, col });
                continue;
            }
            let start = self.pos;
            while self.pos < self.src.len() {
                let c = self.src[self.pos];
                if c.is_ascii_whitespace() || c == b'(' || c == b')' {
                    break;
                }
                self.bump();
            }
            let word = std::str::from_utf8(&self.src[start..self.pos])
                .map_err(|_| self.error(line, col, "invalid UTF-8 in token"))?;
            let is_int = {
                let digits = word.strip_prefix('-').unwrap_or(word);
                !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
            };
            let kind = if is_int {
                TokenKind::Int(word.parse::<BigInt>().unwrap())
            } else {
                TokenKind::Word(word.to_string())
            };
            out.push(Token { kind, line, col });
        }
        Ok(out)
    }
}

pub(crate) struct Parser {
    tokens: Vec<Token>,
    idx: usize,
    end_line: usize,
    end_col: usize,
}

impl Parser {
    pub(crate) fn new(src: &str) -> Result<Self, ParseError> {
        let tokens = Lexer::new(src).tokenize()?;
        let (end_line, end_col) = tokens
            .last()
            .map(|t| (t.line, t.col + 1))
            .unwrap_or((1, 1));
        Ok(Parser { tokens, idx: 0, end_line, end_col })
    }

    pub(crate) fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.idx)
    }

    pub(crate) fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.idx).cloned();
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    pub(crate) fn err_here(&self, message: impl Into<String>) -> ParseError {
        match self.peek() {
            Some(t) => ParseError { line: t.line, col: t.col, message: message.into() },
            None => ParseError {
                line: self.end_line,
                col: self.end_col,
                message: format!("{} (unexpected end of input)", message.into()),
            },
        }
    }

    pub(crate) fn expect_rparen(&mut self, what: &str) -> Result<(), ParseError> {
        match self.next() {
            Some(Token { kind: TokenKind::RParen, .. }) => Ok(()),
            Some(t) => Err(ParseError {
                line: t.line,
                col: t.col,
                message: format!("expected ) to close {what}"),
            }),
            None => Err(ParseError {
                line: self.end_line,
                col: self.end_col,
                message: format!("expected ) to close {what} (unexpected end of input)"),
            }),
        }
    }

    pub(crate) fn expect_done(&self) -> Result<(), ParseError> {
        if self.idx < self.tokens.len() {
            Err(self.err_here("trailing input after formula"))
        } else {
            Ok(())
        }
    }

    fn is_var_name(word: &str) -> bool {
        let mut bytes = word.bytes();
        match bytes.next() {
            Some(b) if b.is_ascii_alphabetic() => {}
            _ => return false,
        }
        bytes.all(|b| b.is_ascii_alphanumeric() || b == b'_')
    }

    pub(crate) fn formula(&mut self) -> Result<Formula, ParseError> {
        match self.next() {
            Some(Token { kind: TokenKind::Word(w), .. }) if w == "true" => Ok(Formula::True),
            Some(Token { kind: TokenKind::Word(w), .. }) if w == "false" => Ok(Formula::False),
            Some(Token { kind: TokenKind::LParen, .. }) => self.compound(),
            Some(t) => Err(ParseError {
                line: t.line,
                col: t.col,
                message: "expected formula".to_string(),
            }),
            None => Err(self.err_here("expected formula")),
        }
    }

    /// Everything after an opening paren in formula position.
    fn compound(&mut self) -> Result<Formula, ParseError> {
        let head = match self.next() {
            Some(Token { kind: TokenKind::Word(w), line, col }) => (w, line, col),
            Some(t) => {
                return Err(ParseError {
                    line: t.line,
                    col: t.col,
                    message: "expected connective, quantifier, or relation".to_string(),
                })
            }
            None => return Err(self.err_here("expected connective, quantifier, or relation")),
        };
        let (word, line, col) = head;
        match word.as_str() {
            "and" | "or" => {
                let mut children = Vec::new();
                loop {
                    match self.peek() {
                        Some(Token { kind: TokenKind::RParen, .. }) => break,
                        Some(_) => children.push(self.formula()?),
                        None => return Err(self.err_here("expected formula or )")),
                    }
                }
                self.expect_rparen(&word)?;
                if children.is_empty() {
                    return Err(ParseError {
                        line,
                        col,
                        message: format!("({word}) needs at least one operand"),
                    });
                }
                Ok(if word == "and" {
                    Formula::And(children)
                } else {
                    Formula::Or(children)
                })
            }
            "not" => {
                let inner = self.formula()?;
                self.expect_rparen("not")?;
                Ok(Formula::Not(Box::new(inner)))
            }
            "exists" | "forall" => {
                match self.next() {
                    Some(Token { kind: TokenKind::LParen, .. }) => {}
                    _ => {
                        return Err(ParseError {
                            line,
                            col,
                            message: format!("{word} needs a parenthesized variable"),
                        })
                    }
                }
                let var = match self.next() {
                    Some(Token { kind: TokenKind::Word(v), .. }) if Self::is_var_name(&v) => v,
                    Some(t) => {
                        return Err(ParseError {
                            line: t.line,
                            col: t.col,
                            message: "expected variable name".to_string(),
                        })
                    }
                    None => return Err(self.err_here("expected variable name")),
                };
                self.expect_rparen("variable binder")?;
                let body = self.formula()?;
                self.expect_rparen(&word)?;
                Ok(if word == "exists" {
                    Formula::Exists(var, Box::new(body))
                } else {
                    Formula::Forall(var, Box::new(body))
                })
            }
            _ => match Relation::from_token(&word) {
                Some(rel) => {
                    let poly = self.poly()?;
                    // Optional explicit zero right-hand side.
                    if let Some(Token { kind: TokenKind::Int(n), .. }) = self.peek() {
                        if n.is_zero() {
                            self.next();
                        } else {
                            return Err(self.err_here("atoms compare against 0"));
                        }
                    }
                    self.expect_rparen("atom")?;
                    Ok(Formula::Atom(Atom::new(poly, rel)))
                }
                None => Err(ParseError {
                    line,
                    col,
                    message: format!("unknown operator {word}"),
                }),
            },
        }
    }

    fn poly(&mut self) -> Result<Polynomial, ParseError> {
        match self.next() {
            Some(Token { kind: TokenKind::Int(n), .. }) => Ok(Polynomial::constant(n)),
            Some(Token { kind: TokenKind::Word(w), line, col }) => {
                if Self::is_var_name(&w) {
                    Ok(Polynomial::variable(&w))
                } else {
                    Err(ParseError { line, col, message: format!("expected polynomial, got {w}") })
                }
            }
            Some(Token { kind: TokenKind::LParen, .. }) => self.poly_compound(),
            Some(t) => Err(ParseError {
                line: t.line,
                col: t.col,
                message: "expected polynomial".to_string(),
            }),
            None => Err(self.err_here("expected polynomial")),
        }
    }

    fn poly_compound(&mut self) -> Result<Polynomial, ParseError> {
        let (op, line, col) = match self.next() {
            Some(Token { kind: TokenKind::Word(w), line, col }) => (w, line, col),
            Some(t) => {
                return Err(ParseError {
                    line: t.line,
                    col: t.col,
                    message: "expected +, *, -, or ^".to_string(),
                })
            }
            None => return Err(self.err_here("expected +, *, -, or ^")),
        };
        match op.as_str() {
            "+" | "*" => {
                let mut args = Vec::new();
                loop {
                    match self.peek() {
                        Some(Token { kind: TokenKind::RParen, .. }) => break,
                        Some(_) => args.push(self.poly()?),
                        None => return Err(self.err_here("expected polynomial or )")),
                    }
                }
                self.expect_rparen(&op)?;
                if args.is_empty() {
                    return Err(ParseError {
                        line,
                        col,
                        message: format!("({op}) needs at least one operand"),
                    });
                }
                let mut acc = if op == "+" { Polynomial::zero() } else { Polynomial::one() };
                for a in args {
                    acc = if op == "+" { &acc + &a } else { &acc * &a };
                }
                Ok(acc)
            }
            "-" => {
                let first = self.poly()?;
                match self.peek() {
                    Some(Token { kind: TokenKind::RParen, .. }) => {
                        self.next();
                        Ok(-&first)
                    }
                    Some(_) => {
                        let second = self.poly()?;
                        self.expect_rparen("-")?;
                        Ok(&first - &second)
                    }
                    None => Err(self.err_here("expected polynomial or )")),
                }
            }
            "^" => {
                let base = self.poly()?;
                let exp = match self.next() {
                    Some(Token { kind: TokenKind::Int(n), line, col }) => {
                        if n < BigInt::one() {
                            return Err(ParseError {
                                line,
                                col,
                                message: "exponent must be a positive integer".to_string(),
                            });
                        }
                        u32::try_from(&n).map_err(|_| ParseError {
                            line,
                            col,
                            message: "exponent too large".to_string(),
                        })?
                    }
                    Some(t) => {
                        return Err(ParseError {
                            line: t.line,
                            col: t.col,
                            message: "expected integer exponent".to_string(),
                        })
                    }
                    None => return Err(self.err_here("expected integer exponent")),
                };
                self.expect_rparen("^")?;
                Ok(base.pow(exp))
            }
            _ => Err(ParseError { line, col, message: format!("unknown operator {op}") }),
        }
    }
}

/// Parse a complete formula; the whole input must be consumed.
pub fn parse_formula(src: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(src)?;
    let f = p.formula()?;
    p.expect_done()?;
    Ok(f)
}

/// Parse a complete polynomial; the whole input must be consumed.
pub fn parse_poly(src: &str) -> Result<Polynomial, ParseError> {
    let mut p = Parser::new(src)?;
    let poly = p.poly()?;
    p.expect_done()?;
    Ok(poly)
}
