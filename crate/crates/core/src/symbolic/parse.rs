//! Parser for the plain-text expression syntax.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr    := term (("+" | "-") term)*
//! term    := unary (("*" | "/") unary | primary)*      juxtaposition multiplies
//! unary   := ("+" | "-") unary | power
//! power   := primary ("^" integer | "^" "(" integer ")")?
//! primary := number | identifier | "(" expr ")"
//! ```
//!
//! Numbers may carry a decimal point and are read exactly (`0.15` is
//! `3/20`). `−` and `·` are accepted as synonyms of `-` and `*`.

use dashu::integer::IBig;
use dashu::rational::RBig;

use super::rational::RationalExpr;
use super::var::{is_identifier, Var};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(RBig),
    Ident(String),
    Op(char),
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '+' | '-' | '*' | '/' | '^' => {
                out.push((pos, Tok::Op(c)));
                i += 1;
            }
            '−' => {
                out.push((pos, Tok::Op('-')));
                i += 1;
            }
            '·' => {
                out.push((pos, Tok::Op('*')));
                i += 1;
            }
            '(' => {
                out.push((pos, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((pos, Tok::RParen));
                i += 1;
            }
            c if c.is_ascii_digit() || c == '.' => {
                let start = i;
                while i < chars.len() && (chars[i].1.is_ascii_digit() || chars[i].1 == '.') {
                    i += 1;
                }
                let text: String = chars[start..i].iter().map(|(_, c)| *c).collect();
                out.push((pos, Tok::Num(parse_decimal(&text, pos)?)));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                    i += 1;
                }
                let text: String = chars[start..i].iter().map(|(_, c)| *c).collect();
                debug_assert!(is_identifier(&text));
                out.push((pos, Tok::Ident(text)));
            }
            other => {
                return Err(Error::Parse {
                    pos,
                    msg: format!("unexpected character {other:?}"),
                })
            }
        }
    }
    Ok(out)
}

fn parse_decimal(text: &str, pos: usize) -> Result<RBig> {
    let bad = || Error::Parse {
        pos,
        msg: format!("malformed number {text:?}"),
    };
    let (int, frac) = match text.split_once('.') {
        Some((i, f)) => (i, f),
        None => (text, ""),
    };
    if frac.contains('.') || (int.is_empty() && frac.is_empty()) {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let n: IBig = digits.parse().map_err(|_| bad())?;
    let scale = IBig::from(10).pow(frac.len());
    Ok(RBig::from(n) / RBig::from(scale))
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.len, |(p, _)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn expr(&mut self) -> Result<RationalExpr> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.at += 1;
            let rhs = self.term()?;
            acc = if op == '+' { acc.add(&rhs) } else { acc.sub(&rhs) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RationalExpr> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.at += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Some(Tok::Op('/')) => {
                    let pos = self.pos();
                    self.at += 1;
                    let rhs = self.unary()?;
                    acc = acc.div(&rhs).map_err(|_| Error::Parse {
                        pos,
                        msg: "division by zero".into(),
                    })?;
                }
                Some(Tok::Num(_) | Tok::Ident(_) | Tok::LParen) => {
                    acc = acc.mul(&self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RationalExpr> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.at += 1;
                Ok(self.unary()?.neg())
            }
            Some(Tok::Op('+')) => {
                self.at += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RationalExpr> {
        let base = self.primary()?;
        if self.peek() != Some(&Tok::Op('^')) {
            return Ok(base);
        }
        self.at += 1;
        let pos = self.pos();
        let parenthesized = self.peek() == Some(&Tok::LParen);
        if parenthesized {
            self.at += 1;
        }
        let negative = match self.peek() {
            Some(Tok::Op('-')) => {
                self.at += 1;
                true
            }
            Some(Tok::Op('+')) => {
                self.at += 1;
                false
            }
            _ => false,
        };
        let e = match self.peek().cloned() {
            Some(Tok::Num(n)) if n.denominator() == &dashu::integer::UBig::ONE => {
                self.at += 1;
                i32::try_from(n.numerator().clone()).or_else(|_| self.err("exponent too large"))?
            }
            _ => return self.err("exponent must be an integer"),
        };
        if parenthesized {
            if self.peek() != Some(&Tok::RParen) {
                return self.err("expected ')'");
            }
            self.at += 1;
        }
        let e = if negative { -e } else { e };
        base.pow(e).map_err(|_| Error::Parse {
            pos,
            msg: "zero raised to a negative power".into(),
        })
    }

    fn primary(&mut self) -> Result<RationalExpr> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.at += 1;
                Ok(RationalExpr::from_rational(&n))
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                Ok(RationalExpr::var(Var::new(&name)))
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected ')'");
                }
                self.at += 1;
                Ok(e)
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses an expression in the text syntax into canonical form.
pub fn parse_expr(src: &str) -> Result<RationalExpr> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(Error::Parse {
            pos: 0,
            msg: "empty expression".into(),
        });
    }
    let mut p = Parser {
        toks,
        at: 0,
        len: src.len(),
    };
    let e = p.expr()?;
    if p.at != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals_are_exact() {
        let r = parse_expr("0.15").unwrap();
        assert_eq!(r, parse_expr("3/20").unwrap());
    }

    #[test]
    fn precedence_and_juxtaposition() {
        assert_eq!(parse_expr("-a^2").unwrap(), parse_expr("-(a*a)").unwrap());
        assert_eq!(parse_expr("b1(z1+1)").unwrap(), parse_expr("b1*z1 + b1").unwrap());
        assert_eq!(parse_expr("a/b*c").unwrap(), parse_expr("(a*c)/b").unwrap());
        assert_eq!(parse_expr("z1^-2").unwrap(), parse_expr("1/(z1*z1)").unwrap());
        assert_eq!(parse_expr("2 − a·b").unwrap(), parse_expr("2-a*b").unwrap());
    }

    #[test]
    fn errors_carry_positions() {
        match parse_expr("a + * b") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_expr("a^b").is_err());
        assert!(parse_expr("(a").is_err());
        assert!(parse_expr("1/0").is_err());
        assert!(parse_expr("").is_err());
    }

    #[test]
    fn printer_round_trips() {
        for s in ["(a^2 - 3/7*b)/(z1*z2 - 1)", "-1/(a+b)", "5/3", "z1^3*z2 - a"] {
            let r = parse_expr(s).unwrap();
            assert_eq!(parse_expr(&r.to_string()).unwrap(), r, "{s}");
        }
    }
}
