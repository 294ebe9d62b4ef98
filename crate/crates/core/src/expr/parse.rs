//! Recursive-descent parser for the expression surface syntax.
//!
//! ```text
//! expr  := term (('+'|'-') term)*
//! term  := unary (('*'|'/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' unary)?
//! atom  := NUMBER | IDENT | IDENT '(' expr ')' | '(' expr ')'
//! ```
//!
//! A fraction literal `p/q` is read with the precedence of ordinary division,
//! so `x^1/2` is `x/2` and a rational exponent needs parentheses.

use num::{BigInt, BigRational};
use thiserror::Error;

use super::{Expr, Func, Symbol};

/// Identifiers visible to the parser.
#[derive(Clone, Debug, Default)]
pub struct ParseContext {
    pub base: Option<String>,
    pub fibers: Vec<String>,
    pub max_order: u32,
    pub params: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnknownIdentifier(String),
    UnknownFunction(String),
    OrderTooHigh { name: String, order: u32, max: u32 },
    NonConstantExponent,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{} at byte {offset}", describe(.kind))]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub offset: usize,
}

fn describe(k: &ParseErrorKind) -> String {
    match k {
        ParseErrorKind::Syntax(m) => format!("syntax error: {m}"),
        ParseErrorKind::UnknownIdentifier(n) => format!("unknown identifier `{n}`"),
        ParseErrorKind::UnknownFunction(n) => format!("unknown function `{n}`"),
        ParseErrorKind::OrderTooHigh { name, order, max } => {
            format!("derivative order {order} of `{name}` exceeds jet order {max}")
        }
        ParseErrorKind::NonConstantExponent => "exponent must be a rational constant".into(),
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident { name: String, order: Option<u32> },
    Op(char),
    End,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn err(&self, offset: usize, m: impl Into<String>) -> ParseError {
        ParseError {
            kind: ParseErrorKind::Syntax(m.into()),
            offset,
        }
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap()
    }

    fn next(&mut self) -> Result<(Tok, usize), ParseError> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&c) = self.src.get(self.pos) else {
            return Ok((Tok::End, start));
        };
        if c.is_ascii_digit() || (c == b'.' && self.peek_digit(1)) {
            return self.number().map(|t| (t, start));
        }
        if c.is_ascii_alphabetic() {
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                self.pos += 1;
            }
            let name = std::str::from_utf8(&self.src[start..self.pos])
                .unwrap()
                .to_string();
            let mut order = None;
            if self.src.get(self.pos) == Some(&b'\'') {
                let mut n = 0;
                while self.src.get(self.pos) == Some(&b'\'') {
                    n += 1;
                    self.pos += 1;
                }
                order = Some(n);
            } else if self.src.get(self.pos) == Some(&b'_') && self.peek_digit(1) {
                self.pos += 1;
                let d = self.digits();
                let n: u32 = d
                    .parse()
                    .map_err(|_| self.err(start, "derivative order too large"))?;
                order = Some(n);
            }
            return Ok((Tok::Ident { name, order }, start));
        }
        self.pos += 1;
        match c {
            b'+' | b'-' | b'*' | b'/' | b'^' | b'(' | b')' => Ok((Tok::Op(c as char), start)),
            _ => Err(self.err(start, format!("unexpected character `{}`", c as char))),
        }
    }

    fn peek_digit(&self, ahead: usize) -> bool {
        self.src
            .get(self.pos + ahead)
            .is_some_and(|b| b.is_ascii_digit())
    }

    fn number(&mut self) -> Result<Tok, ParseError> {
        let start = self.pos;
        let int_part = self.digits().to_string();
        let mut mantissa = int_part;
        let mut scale: i64 = 0;
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            let frac = self.digits();
            scale -= frac.len() as i64;
            mantissa.push_str(frac);
        }
        if matches!(self.src.get(self.pos), Some(b'e') | Some(b'E')) {
            let save = self.pos;
            self.pos += 1;
            let mut neg = false;
            if matches!(self.src.get(self.pos), Some(b'+') | Some(b'-')) {
                neg = self.src[self.pos] == b'-';
                self.pos += 1;
            }
            if self.src.get(self.pos).is_some_and(|b| b.is_ascii_digit()) {
                let e: i64 = self
                    .digits()
                    .parse()
                    .map_err(|_| self.err(start, "exponent too large"))?;
                scale += if neg { -e } else { e };
            } else {
                self.pos = save;
            }
        }
        if mantissa.is_empty() {
            mantissa.push('0');
        }
        let m: BigInt = mantissa.parse().unwrap();
        let ten = BigRational::from_integer(BigInt::from(10));
        let factor = num::pow::pow(ten, scale.unsigned_abs() as usize);
        let value = if scale >= 0 {
            BigRational::from_integer(m) * factor
        } else {
            BigRational::from_integer(m) / factor
        };
        Ok(Tok::Num(value))
    }
}

struct Parser<'a> {
    lex: Lexer<'a>,
    tok: Tok,
    at: usize,
    ctx: &'a ParseContext,
}

impl<'a> Parser<'a> {
    fn bump(&mut self) -> Result<(), ParseError> {
        let (t, at) = self.lex.next()?;
        self.tok = t;
        self.at = at;
        Ok(())
    }

    fn fail<T>(&self, kind: ParseErrorKind) -> Result<T, ParseError> {
        Err(ParseError {
            kind,
            offset: self.at,
        })
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut terms = vec![self.term()?];
        loop {
            match self.tok {
                Tok::Op('+') => {
                    self.bump()?;
                    terms.push(self.term()?);
                }
                Tok::Op('-') => {
                    self.bump()?;
                    terms.push(-self.term()?);
                }
                _ => break,
            }
        }
        Ok(Expr::add(terms))
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.tok {
                Tok::Op('*') => {
                    self.bump()?;
                    acc = acc * self.unary()?;
                }
                Tok::Op('/') => {
                    self.bump()?;
                    acc = acc / self.unary()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.tok == Tok::Op('-') {
            self.bump()?;
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.tok == Tok::Op('^') {
            self.bump()?;
            let at = self.at;
            let exp = self.unary()?;
            let Some(r) = exp.as_num() else {
                return Err(ParseError {
                    kind: ParseErrorKind::NonConstantExponent,
                    offset: at,
                });
            };
            return Ok(Expr::pow(base, r.clone()));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.tok.clone() {
            Tok::Num(r) => {
                self.bump()?;
                Ok(Expr::num(r))
            }
            Tok::Op('(') => {
                self.bump()?;
                let e = self.expr()?;
                self.expect_close()?;
                Ok(e)
            }
            Tok::Ident { name, order } => {
                let at = self.at;
                self.bump()?;
                if self.tok == Tok::Op('(') {
                    let Some(f) = Func::from_name(&name).filter(|_| order.is_none()) else {
                        return Err(ParseError {
                            kind: ParseErrorKind::UnknownFunction(name),
                            offset: at,
                        });
                    };
                    self.bump()?;
                    let arg = self.expr()?;
                    self.expect_close()?;
                    return Ok(Expr::func(f, arg));
                }
                self.resolve(name, order, at)
            }
            Tok::End => self.fail(ParseErrorKind::Syntax("unexpected end of input".into())),
            Tok::Op(c) => self.fail(ParseErrorKind::Syntax(format!("unexpected `{c}`"))),
        }
    }

    fn expect_close(&mut self) -> Result<(), ParseError> {
        if self.tok != Tok::Op(')') {
            return self.fail(ParseErrorKind::Syntax("expected `)`".into()));
        }
        self.bump()
    }

    fn resolve(&self, name: String, order: Option<u32>, at: usize) -> Result<Expr, ParseError> {
        let err = |kind| Err(ParseError { kind, offset: at });
        if self.ctx.fibers.iter().any(|f| *f == name) {
            let l = order.unwrap_or(0);
            if l > self.ctx.max_order {
                return err(ParseErrorKind::OrderTooHigh {
                    name,
                    order: l,
                    max: self.ctx.max_order,
                });
            }
            return Ok(Expr::jet(&name, l));
        }
        let bare = |sym: Expr| {
            if order.is_some() {
                err(ParseErrorKind::UnknownIdentifier(display_ident(&name, order)))
            } else {
                Ok(sym)
            }
        };
        if name == "pi" {
            return bare(Expr::pi());
        }
        if self.ctx.base.as_deref() == Some(name.as_str()) {
            return bare(Expr::var(Symbol::base(&name)));
        }
        if self.ctx.params.iter().any(|p| *p == name) {
            return bare(Expr::var(Symbol::param(&name)));
        }
        if Func::from_name(&name).is_some() {
            return err(ParseErrorKind::Syntax(format!(
                "function `{name}` needs an argument"
            )));
        }
        err(ParseErrorKind::UnknownIdentifier(display_ident(&name, order)))
    }
}

fn display_ident(name: &str, order: Option<u32>) -> String {
    match order {
        None => name.to_string(),
        Some(l) => format!("{name}_{l}"),
    }
}

/// Parses `text` into a canonical expression.
pub fn parse_expr(text: &str, ctx: &ParseContext) -> Result<Expr, ParseError> {
    let mut p = Parser {
        lex: Lexer {
            src: text.as_bytes(),
            pos: 0,
        },
        tok: Tok::End,
        at: 0,
        ctx,
    };
    p.bump()?;
    let e = p.expr()?;
    if p.tok != Tok::End {
        return p.fail(ParseErrorKind::Syntax("trailing input".into()));
    }
    Ok(e)
}
