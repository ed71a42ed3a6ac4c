//! Recursive-descent parser for polynomial expressions such as
//! `x1 + x1*x2 + x2^2` or `(1/2)*x1^3 - x2`.
//!
//! ```text
//! expr     := sign? term (('+' | '-') term)*
//! term     := coef ('*'? monomial)? | monomial
//! monomial := var ('^' uint)? ('*' var ('^' uint)?)*
//! var      := 'x' uint                       (1-indexed)
//! coef     := int ('/' uint)? | '(' sign? int ('/' uint)? ')'
//! ```
//!
//! Whitespace is ignored everywhere.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use super::{ExponentVector, Polynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("variable x{index} at position {position} is out of range for dimension {dimension}")]
    VariableOutOfRange {
        position: usize,
        index: usize,
        dimension: usize,
    },
    #[error(
        "exponent at position {position} is not a non-negative integer; \
         use real-exponent terms for fractional or negative powers"
    )]
    NonIntegerExponent { position: usize },
    #[error("dimension must be at least 1")]
    ZeroDimension,
}

/// Parses `expr` as a polynomial in `dimension` variables.
pub fn parse(expr: &str, dimension: usize) -> Result<Polynomial, ParseError> {
    if dimension == 0 {
        return Err(ParseError::ZeroDimension);
    }
    let mut p = Parser {
        chars: expr.char_indices().filter(|(_, c)| !c.is_whitespace()).collect(),
        pos: 0,
        end: expr.len(),
        dimension,
    };
    let poly = p.expr()?;
    if let Some(&(at, c)) = p.chars.get(p.pos) {
        return Err(ParseError::Syntax {
            position: at,
            message: format!("unexpected '{}'", c),
        });
    }
    Ok(poly)
}

struct Parser {
    // whitespace-free characters with their byte offsets in the source
    chars: Vec<(usize, char)>,
    pos: usize,
    end: usize,
    dimension: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.end, |&(i, _)| i)
    }

    fn bump(&mut self) {
        self.pos += 1;
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            position: self.offset(),
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut out = Polynomial::zero(self.dimension);
        if self.peek().is_none() {
            return self.syntax("empty expression");
        }
        let mut negative = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        loop {
            let (alpha, c) = self.term()?;
            out.add_term(alpha, if negative { -c } else { c });
            negative = match self.peek() {
                Some('+') => false,
                Some('-') => true,
                _ => break,
            };
            self.bump();
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<(ExponentVector, BigRational), ParseError> {
        match self.peek() {
            Some('x') => Ok((self.monomial()?, BigRational::one())),
            Some(c) if c.is_ascii_digit() || c == '(' => {
                let coef = self.coef()?;
                let starred = self.eat('*');
                if self.peek() == Some('x') {
                    Ok((self.monomial()?, coef))
                } else if starred {
                    self.syntax("expected a variable after '*'")
                } else {
                    Ok((ExponentVector::zero(self.dimension), coef))
                }
            }
            Some(c) => self.syntax(format!("expected a term, found '{}'", c)),
            None => self.syntax("expected a term, found end of input"),
        }
    }

    fn coef(&mut self) -> Result<BigRational, ParseError> {
        if self.eat('(') {
            let negative = self.eat('-');
            let value = self.ratio()?;
            if !self.eat(')') {
                return self.syntax("expected ')'");
            }
            Ok(if negative { -value } else { value })
        } else {
            self.ratio()
        }
    }

    fn ratio(&mut self) -> Result<BigRational, ParseError> {
        let numer = self.uint()?;
        if self.eat('/') {
            let at = self.offset();
            let denom = self.uint()?;
            if denom.is_zero() {
                return Err(ParseError::Syntax {
                    position: at,
                    message: "zero denominator".into(),
                });
            }
            Ok(BigRational::new(numer, denom))
        } else {
            Ok(BigRational::from_integer(numer))
        }
    }

    fn uint(&mut self) -> Result<BigInt, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.bump();
        }
        if start == self.pos {
            return self.syntax("expected an integer");
        }
        let digits: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
        Ok(digits.parse().expect("ascii digits form an integer"))
    }

    fn small_uint(&mut self) -> Result<u64, ParseError> {
        let at = self.offset();
        let value = self.uint()?;
        u64::try_from(value).map_err(|_| ParseError::Syntax {
            position: at,
            message: "integer too large".into(),
        })
    }

    fn monomial(&mut self) -> Result<ExponentVector, ParseError> {
        let mut exps = vec![0u32; self.dimension];
        loop {
            let at = self.offset();
            if !self.eat('x') {
                return self.syntax("expected a variable");
            }
            let index = self.small_uint()? as usize;
            if index == 0 || index > self.dimension {
                return Err(ParseError::VariableOutOfRange {
                    position: at,
                    index,
                    dimension: self.dimension,
                });
            }
            let mut power = 1u32;
            if self.eat('^') {
                let at = self.offset();
                if matches!(self.peek(), Some('-') | Some('(')) {
                    return Err(ParseError::NonIntegerExponent { position: at });
                }
                let value = self.small_uint()?;
                if matches!(self.peek(), Some('.') | Some('/')) {
                    return Err(ParseError::NonIntegerExponent { position: at });
                }
                power = u32::try_from(value).map_err(|_| ParseError::Syntax {
                    position: at,
                    message: "exponent too large".into(),
                })?;
            }
            exps[index - 1] += power;
            if self.peek() == Some('*') && self.chars.get(self.pos + 1).map(|&(_, c)| c) == Some('x') {
                self.bump();
            } else {
                break;
            }
        }
        Ok(ExponentVector::new(exps))
    }
}
