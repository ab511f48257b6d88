//! Text grammar for manifold descriptions.
//!
//! ```text
//! manifold  := "S3" | piece ( "#" piece )*
//! piece     := sfs | "Spherical(" INT ")" | "S2xS1" | "Hyperbolic" | "Sol" | "OtherAspherical"
//! sfs       := "SFS(" "g=" INT ";" "b=" INT ( ";" pairs )? ")"
//! pairs     := "(" INT "," INT ")" ( "," "(" INT "," INT ")" )*
//! ```
//!
//! Whitespace between tokens is ignored. Parsing is literal: no
//! normalization happens here.

use num_integer::Integer;
use thiserror::Error;

use super::{Fiber, Manifold, PrimePiece, SeifertData};

/// Magnitude bound on every integer literal.
const INT_LIMIT: i64 = i32::MAX as i64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(
        "line {line}, column {column}: exceptional fiber multiplicity {alpha} must be at least 2"
    )]
    FiberMultiplicity {
        line: usize,
        column: usize,
        alpha: i64,
    },
    #[error("line {line}, column {column}: exceptional fiber ({alpha},{beta}) needs gcd(alpha, beta) = 1")]
    FiberNotCoprime {
        line: usize,
        column: usize,
        alpha: i64,
        beta: i64,
    },
    #[error("line {line}, column {column}: Spherical order {order} must be at least 2 (write S3 for the 3-sphere)")]
    SphericalOrder {
        line: usize,
        column: usize,
        order: i64,
    },
    #[error("line {line}, column {column}: non-orientable base orbifolds are not supported")]
    NonOrientableBase { line: usize, column: usize },
}

/// Parses a manifold description into its literal (un-normalized) form.
pub fn parse_manifold(text: &str) -> Result<Manifold, ParseError> {
    let mut p = Parser::new(text);
    let m = p.manifold()?;
    p.skip_ws();
    if let Some(c) = p.peek() {
        return Err(p.syntax(format!("unexpected '{c}' after manifold description")));
    }
    Ok(m)
}

struct Parser<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            chars: text.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    fn syntax(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    fn expect(&mut self, want: char) -> Result<(), ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == want => {
                self.bump();
                Ok(())
            }
            Some(c) => Err(self.syntax(format!("expected '{want}', found '{c}'"))),
            None => Err(self.syntax(format!("expected '{want}', found end of input"))),
        }
    }

    /// Returns the identifier and the position where it started.
    fn ident(&mut self) -> Result<(String, usize, usize), ParseError> {
        self.skip_ws();
        let (line, column) = (self.line, self.column);
        let mut s = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_alphanumeric) {
            s.push(c);
            self.bump();
        }
        if s.is_empty() {
            return Err(match self.peek() {
                Some(c) => self.syntax(format!("expected a prime piece, found '{c}'")),
                None => self.syntax("expected a prime piece, found end of input"),
            });
        }
        Ok((s, line, column))
    }

    fn int(&mut self) -> Result<(i64, usize, usize), ParseError> {
        self.skip_ws();
        let (line, column) = (self.line, self.column);
        let mut s = String::new();
        if self.peek() == Some('-') {
            s.push('-');
            self.bump();
        }
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            s.push(c);
            self.bump();
        }
        if s.is_empty() || s == "-" {
            return Err(ParseError::Syntax {
                line,
                column,
                message: "expected an integer".into(),
            });
        }
        match s.parse::<i64>() {
            Ok(v) if v.abs() <= INT_LIMIT => Ok((v, line, column)),
            _ => Err(ParseError::Syntax {
                line,
                column,
                message: format!("integer {s} out of range (|n| <= {INT_LIMIT})"),
            }),
        }
    }

    fn manifold(&mut self) -> Result<Manifold, ParseError> {
        let mut pieces = Vec::new();
        loop {
            let (name, line, column) = self.ident()?;
            if name == "S3" {
                if pieces.is_empty() {
                    self.skip_ws();
                    if self.peek() == Some('#') {
                        return Err(self.syntax("S3 stands alone; it is the empty connected sum"));
                    }
                    return Ok(Manifold::sphere());
                }
                return Err(ParseError::Syntax {
                    line,
                    column,
                    message: "S3 cannot appear as a summand".into(),
                });
            }
            pieces.push(self.piece(&name, line, column)?);
            self.skip_ws();
            if self.peek() == Some('#') {
                self.bump();
            } else {
                return Ok(Manifold { pieces });
            }
        }
    }

    fn piece(&mut self, name: &str, line: usize, column: usize) -> Result<PrimePiece, ParseError> {
        match name {
            "S2xS1" => Ok(PrimePiece::S2xS1),
            "Hyperbolic" => Ok(PrimePiece::Hyperbolic),
            "Sol" => Ok(PrimePiece::Sol),
            "OtherAspherical" => Ok(PrimePiece::OtherAspherical),
            "Spherical" => {
                self.expect('(')?;
                let (order, l, c) = self.int()?;
                self.expect(')')?;
                if order < 2 {
                    return Err(ParseError::SphericalOrder {
                        line: l,
                        column: c,
                        order,
                    });
                }
                Ok(PrimePiece::Spherical(order as u64))
            }
            "SFS" => self.sfs().map(PrimePiece::SeifertFibered),
            other => Err(ParseError::Syntax {
                line,
                column,
                message: format!("unknown prime piece '{other}'"),
            }),
        }
    }

    fn key(&mut self, want: &str) -> Result<(), ParseError> {
        let (name, line, column) = self.ident()?;
        if name == want {
            return self.expect('=');
        }
        if want == "g" && (name == "n" || name.starts_with("non")) {
            return Err(ParseError::NonOrientableBase { line, column });
        }
        Err(ParseError::Syntax {
            line,
            column,
            message: format!("expected '{want}=', found '{name}'"),
        })
    }

    fn sfs(&mut self) -> Result<SeifertData, ParseError> {
        self.expect('(')?;
        self.key("g")?;
        let (genus, line, column) = self.int()?;
        if genus < 0 {
            return Err(ParseError::Syntax {
                line,
                column,
                message: "base genus must be non-negative".into(),
            });
        }
        self.expect(';')?;
        self.key("b")?;
        let (obstruction, _, _) = self.int()?;
        let mut fibers = Vec::new();
        self.skip_ws();
        if self.peek() == Some(';') {
            self.bump();
            loop {
                self.expect('(')?;
                let (alpha, l, c) = self.int()?;
                self.expect(',')?;
                let (beta, _, _) = self.int()?;
                self.expect(')')?;
                if alpha < 2 {
                    return Err(ParseError::FiberMultiplicity {
                        line: l,
                        column: c,
                        alpha,
                    });
                }
                if alpha.gcd(&beta) != 1 {
                    return Err(ParseError::FiberNotCoprime {
                        line: l,
                        column: c,
                        alpha,
                        beta,
                    });
                }
                fibers.push(Fiber::new(alpha, beta));
                self.skip_ws();
                if self.peek() == Some(',') {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(')')?;
        Ok(SeifertData {
            genus: genus as u32,
            obstruction,
            fibers,
        })
    }
}
