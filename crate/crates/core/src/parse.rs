//! Parser for the `Head(v1, ..., vn) :- P1(...), ..., Pm(...).` query format.
//!
//! Whitespace is free-form and `#` starts a comment running to the end of the
//! line. Constants (numbers, quoted strings) are rejected.

use crate::error::{Error, Result};
use crate::query::{Atom, Query, Variable};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Implies,
    Dot,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Implies => "`:-`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            chars: src.chars().peekable(),
            line: 1,
            col: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn error(&self, line: usize, col: usize, message: impl Into<String>) -> Error {
        Error::Syntax {
            line,
            col,
            message: message.into(),
        }
    }

    fn skip_trivia(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    /// Next token with its starting position.
    fn next(&mut self) -> Result<(Tok, usize, usize)> {
        self.skip_trivia();
        let (line, col) = (self.line, self.col);
        let Some(c) = self.bump() else {
            return Ok((Tok::Eof, line, col));
        };
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '.' => Tok::Dot,
            ':' => {
                if self.chars.peek() == Some(&'-') {
                    self.bump();
                    Tok::Implies
                } else {
                    return Err(self.error(line, col, "expected `:-`"));
                }
            }
            c if c.is_ascii_alphabetic() => {
                let mut s = String::from(c);
                while let Some(&c) = self.chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        s.push(c);
                        self.bump();
                    } else {
                        break;
                    }
                }
                Tok::Ident(s)
            }
            c if c.is_ascii_digit() || c == '"' || c == '\'' || c == '-' => {
                return Err(self.error(line, col, "constants are not supported, only variables"));
            }
            c => return Err(self.error(line, col, format!("unexpected character `{c}`"))),
        };
        Ok((tok, line, col))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    line: usize,
    col: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self> {
        let mut lexer = Lexer::new(src);
        let (tok, line, col) = lexer.next()?;
        Ok(Parser { lexer, tok, line, col })
    }

    fn advance(&mut self) -> Result<Tok> {
        let (tok, line, col) = self.lexer.next()?;
        self.line = line;
        self.col = col;
        Ok(std::mem::replace(&mut self.tok, tok))
    }

    fn unexpected(&self, expected: &str) -> Error {
        Error::Syntax {
            line: self.line,
            col: self.col,
            message: format!("expected {expected}, found {}", self.tok.describe()),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        if self.tok == tok {
            self.advance()?;
            Ok(())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        match &self.tok {
            Tok::Ident(_) => match self.advance()? {
                Tok::Ident(s) => Ok(s),
                _ => unreachable!(),
            },
            _ => Err(self.unexpected(what)),
        }
    }

    /// `Name(args)`; `allow_empty` permits `Name()`.
    fn atom(&mut self, allow_empty: bool) -> Result<Atom> {
        let predicate = self.ident("a predicate name")?;
        self.expect(Tok::LParen)?;
        let mut args = Vec::new();
        if self.tok == Tok::RParen {
            if !allow_empty {
                return Err(Error::Syntax {
                    line: self.line,
                    col: self.col,
                    message: format!("body atom `{predicate}` needs at least one argument"),
                });
            }
        } else {
            loop {
                args.push(Variable::new(self.ident("a variable")?));
                if self.tok == Tok::Comma {
                    self.advance()?;
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RParen)?;
        Ok(Atom { predicate, args })
    }

    fn query(&mut self) -> Result<Query> {
        let head = self.atom(true)?;
        self.expect(Tok::Implies)?;
        let mut body = Vec::new();
        loop {
            body.push(self.atom(false)?);
            if self.tok == Tok::Comma {
                self.advance()?;
            } else {
                break;
            }
        }
        self.expect(Tok::Dot)?;
        if self.tok != Tok::Eof {
            return Err(self.unexpected("end of input"));
        }
        Query::new(head.predicate, head.args, body)
    }
}

/// Parses a single query, preserving head and atom order.
pub fn parse_query(source: &str) -> Result<Query> {
    Parser::new(source)?.query()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_star_query() {
        let q = parse_query("Q(x1,x2) :- R(x1,z), R(x2,z).").unwrap();
        assert_eq!(q, Query::star(2));
    }

    #[test]
    fn parses_boolean_query_with_comments() {
        let q = parse_query("# boolean\nB() :- R(x, y). # trailing\n").unwrap();
        assert!(q.head.is_empty());
        assert_eq!(q.body, vec![Atom::new("R", ["x", "y"])]);
    }

    #[test]
    fn safety_violation() {
        assert!(matches!(parse_query("Q(x) :- R(y,z)."), Err(Error::UnsafeHead(v)) if v == "x"));
    }

    #[test]
    fn empty_body_atom_is_rejected() {
        assert!(matches!(parse_query("Q() :- R()."), Err(Error::Syntax { .. })));
    }

    #[test]
    fn empty_body_is_rejected() {
        assert!(matches!(parse_query("Q() :- ."), Err(Error::Syntax { .. })));
    }

    #[test]
    fn constants_are_rejected_with_position() {
        match parse_query("Q(x) :-\n  R(x, 3).") {
            Err(Error::Syntax { line, col, message }) => {
                assert_eq!((line, col), (2, 8));
                assert!(message.contains("constants"));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_query("Q(x) :- R(x, \"a\").").is_err());
    }

    #[test]
    fn missing_dot_and_trailing_garbage() {
        assert!(parse_query("Q(x) :- R(x)").is_err());
        assert!(parse_query("Q(x) :- R(x). S").is_err());
        assert!(parse_query("Q(x) : R(x).").is_err());
    }

    #[test]
    fn variables_are_case_sensitive() {
        let q = parse_query("Q(X) :- R(X, x).").unwrap();
        assert_eq!(q.variables().len(), 2);
    }

    #[test]
    fn identifiers_must_start_with_letter() {
        assert!(parse_query("Q(_x) :- R(_x).").is_err());
        assert!(parse_query("Q(a_1) :- R(a_1).").is_ok());
    }
}
