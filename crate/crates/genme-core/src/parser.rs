//! Recursive-descent parser for the textual theory format.
//!
//! One clause per `.`-terminated statement. Facts are written
//! `p(a, b).`, rules `h(X) :- b1(X, Y), not b2(Y, X).`; `not` is
//! negation as failure and `%` starts a line comment. Constants are
//! lower-case identifiers, bare integers, or quoted strings.

use crate::error::{Error, Result};
use crate::logic::{Atom, Clause, Literal, Term};
use crate::theory::Theory;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Lower(String),
    Upper(String),
    Quoted(String),
    Int(String),
    LParen,
    RParen,
    Comma,
    Dot,
    ColonDash,
    Eof,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Lower(s) | Token::Upper(s) | Token::Int(s) => format!("`{s}`"),
            Token::Quoted(s) => format!("`'{s}'`"),
            Token::LParen => "`(`".into(),
            Token::RParen => "`)`".into(),
            Token::Comma => "`,`".into(),
            Token::Dot => "`.`".into(),
            Token::ColonDash => "`:-`".into(),
            Token::Eof => "end of input".into(),
        }
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
            column: 1,
        }
    }

    fn err(&self, line: usize, column: usize, message: impl Into<String>) -> Error {
        Error::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.src.get(self.pos).copied()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_trivia(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_whitespace() => {
                    self.bump();
                }
                Some(b'%') => {
                    while let Some(c) = self.peek() {
                        if c == b'\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                _ => break,
            }
        }
    }

    /// Next token together with its source position.
    fn next_token(&mut self) -> Result<(Token, usize, usize)> {
        self.skip_trivia();
        let (line, column) = (self.line, self.column);
        let c = match self.peek() {
            None => return Ok((Token::Eof, line, column)),
            Some(c) => c,
        };
        let token = match c {
            b'(' => {
                self.bump();
                Token::LParen
            }
            b')' => {
                self.bump();
                Token::RParen
            }
            b',' => {
                self.bump();
                Token::Comma
            }
            b'.' => {
                self.bump();
                Token::Dot
            }
            b':' => {
                self.bump();
                if self.peek() == Some(b'-') {
                    self.bump();
                    Token::ColonDash
                } else {
                    return Err(self.err(line, column, "expected `:-`"));
                }
            }
            b'\'' => {
                self.bump();
                let mut content = String::new();
                loop {
                    match self.bump() {
                        None => {
                            return Err(self.err(line, column, "unterminated quoted constant"))
                        }
                        Some(b'\'') => break,
                        Some(c) => content.push(c as char),
                    }
                }
                if content.is_empty() {
                    return Err(self.err(line, column, "empty quoted constant"));
                }
                Token::Quoted(content)
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while let Some(c) = self.peek() {
                    if c.is_ascii_digit() {
                        s.push(c as char);
                        self.bump();
                    } else {
                        break;
                    }
                }
                if matches!(self.peek(), Some(c) if c.is_ascii_alphabetic() || c == b'_') {
                    return Err(self.err(line, column, "identifier may not start with a digit"));
                }
                Token::Int(s)
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let mut s = String::new();
                while let Some(c) = self.peek() {
                    if c.is_ascii_alphanumeric() || c == b'_' {
                        s.push(c as char);
                        self.bump();
                    } else {
                        break;
                    }
                }
                if c.is_ascii_uppercase() {
                    Token::Upper(s)
                } else if c == b'_' {
                    return Err(self.err(line, column, "identifier may not start with `_`"));
                } else {
                    Token::Lower(s)
                }
            }
            other => {
                return Err(self.err(
                    line,
                    column,
                    format!("unexpected character `{}`", other as char),
                ))
            }
        };
        Ok((token, line, column))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    lookahead: (Token, usize, usize),
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self> {
        let mut lexer = Lexer::new(src);
        let lookahead = lexer.next_token()?;
        Ok(Parser { lexer, lookahead })
    }

    fn peek(&self) -> &Token {
        &self.lookahead.0
    }

    fn advance(&mut self) -> Result<(Token, usize, usize)> {
        let next = self.lexer.next_token()?;
        Ok(std::mem::replace(&mut self.lookahead, next))
    }

    fn unexpected(&self, expected: &str) -> Error {
        Error::Syntax {
            line: self.lookahead.1,
            column: self.lookahead.2,
            message: format!("expected {expected}, found {}", self.lookahead.0.describe()),
        }
    }

    fn expect(&mut self, token: Token, expected: &str) -> Result<()> {
        if self.lookahead.0 == token {
            self.advance()?;
            Ok(())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn term(&mut self) -> Result<Term> {
        match self.peek().clone() {
            Token::Upper(v) => {
                self.advance()?;
                Ok(Term::Var(v))
            }
            Token::Lower(c) | Token::Quoted(c) | Token::Int(c) => {
                self.advance()?;
                Ok(Term::Const(c))
            }
            _ => Err(self.unexpected("a term")),
        }
    }

    fn atom(&mut self) -> Result<Atom> {
        let symbol = match self.peek().clone() {
            Token::Lower(s) => {
                self.advance()?;
                s
            }
            _ => Err(self.unexpected("a predicate symbol"))?,
        };
        let mut args = Vec::new();
        if self.peek() == &Token::LParen {
            self.advance()?;
            args.push(self.term()?);
            while self.peek() == &Token::Comma {
                self.advance()?;
                args.push(self.term()?);
            }
            self.expect(Token::RParen, "`)`")?;
        }
        Ok(Atom::new(symbol, args))
    }

    fn literal(&mut self) -> Result<Literal> {
        if let Token::Lower(s) = self.peek() {
            if s == "not" {
                self.advance()?;
                return Ok(Literal::neg(self.atom()?));
            }
        }
        Ok(Literal::pos(self.atom()?))
    }

    fn clause(&mut self) -> Result<(Clause, usize)> {
        let line = self.lookahead.1;
        let head = self.atom()?;
        let mut body = Vec::new();
        if self.peek() == &Token::ColonDash {
            self.advance()?;
            body.push(self.literal()?);
            while self.peek() == &Token::Comma {
                self.advance()?;
                body.push(self.literal()?);
            }
        }
        self.expect(Token::Dot, "`.`")?;
        Ok((Clause { head, body }, line))
    }

    fn program(&mut self) -> Result<Vec<(Clause, usize)>> {
        let mut clauses = Vec::new();
        while self.peek() != &Token::Eof {
            clauses.push(self.clause()?);
        }
        Ok(clauses)
    }
}

/// Parse a complete theory and validate all its invariants.
pub fn parse_theory(text: &str) -> Result<Theory> {
    let clauses = Parser::new(text)?.program()?;
    Theory::build(clauses.into_iter().map(|(c, l)| (c, Some(l))).collect())
}

/// Parse clauses without theory-level validation. Used for round-trip
/// checks.
pub fn parse_clauses(text: &str) -> Result<Vec<Clause>> {
    Ok(Parser::new(text)?
        .program()?
        .into_iter()
        .map(|(c, _)| c)
        .collect())
}

/// Parse a single ground atom, for example a query or target.
pub fn parse_ground_atom(text: &str) -> Result<Atom> {
    let mut parser = Parser::new(text)?;
    let atom = parser.atom()?;
    // an optional trailing period is accepted
    if parser.peek() == &Token::Dot {
        parser.advance()?;
    }
    if parser.peek() != &Token::Eof {
        return Err(parser.unexpected("end of input"));
    }
    if !atom.is_ground() {
        return Err(Error::NonGround(atom.to_string()));
    }
    Ok(atom)
}

/// Canonical clause text; round-trips through [`parse_theory`].
pub fn serialize_clause(clause: &Clause) -> String {
    clause.to_string()
}
