//! Text syntax for tropical expressions.
//!
//! ```text
//! expr   := factor { ("+" | "-") factor }
//! factor := rational ["*" factor] | "max(" expr {"," expr} ")" | "x" int | "(" expr ")"
//! ```
//!
//! Rationals are `p/q`, integers or finite decimals, optionally signed.
//! Subtraction is only allowed for constants. Möbius tags are not part of
//! the text form; use JSON to carry them.

use num_traits::{One, Signed, Zero};

use crate::expr::{make_max, make_sum, TropicalExpr};
use crate::rational::{parse_rational, Rational};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Max,
    Var(usize),
    LParen,
    RParen,
    Comma,
    Plus,
    Minus,
    Star,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn lex(src: &str) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let single = match c {
            '\n' => {
                line += 1;
                col = 1;
                i += 1;
                continue;
            }
            c if c.is_whitespace() => None,
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            _ => {
                let start = i;
                if c.is_ascii_digit() || c == '.' {
                    while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                        i += 1;
                    }
                    if i < chars.len() && chars[i] == '/' {
                        i += 1;
                        while i < chars.len() && chars[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                    let text: String = chars[start..i].iter().collect();
                    let value = parse_rational(&text)
                        .map_err(|_| err(l0, c0, format!("invalid number '{text}'")))?;
                    out.push(Spanned {
                        tok: Tok::Num(value),
                        line: l0,
                        column: c0,
                    });
                } else if c.is_ascii_alphabetic() {
                    while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                        i += 1;
                    }
                    let word: String = chars[start..i].iter().collect();
                    let tok = if word == "max" {
                        Tok::Max
                    } else if let Some(idx) = word.strip_prefix('x').filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit())) {
                        let k: usize = idx
                            .parse()
                            .map_err(|_| err(l0, c0, format!("variable index too large in '{word}'")))?;
                        if k == 0 {
                            return Err(err(l0, c0, "variables are numbered from x1"));
                        }
                        Tok::Var(k - 1)
                    } else {
                        return Err(err(l0, c0, format!("unknown identifier '{word}'")));
                    };
                    out.push(Spanned {
                        tok,
                        line: l0,
                        column: c0,
                    });
                } else {
                    return Err(err(l0, c0, format!("unexpected character '{c}'")));
                }
                col += i - start;
                continue;
            }
        };
        if let Some(tok) = single {
            out.push(Spanned {
                tok,
                line: l0,
                column: c0,
            });
        }
        i += 1;
        col += 1;
    }
    Ok(out)
}

#[derive(Clone, Debug)]
enum Node {
    Const(Rational),
    Var(usize, usize, usize),
    Scale(Rational, Box<Node>, usize, usize),
    Sum(Vec<Node>),
    Max(Vec<Node>),
}

impl Node {
    fn max_var(&self) -> Option<usize> {
        match self {
            Node::Const(_) => None,
            Node::Var(i, ..) => Some(*i),
            Node::Scale(_, inner, ..) => inner.max_var(),
            Node::Sum(v) | Node::Max(v) => v.iter().filter_map(Node::max_var).max(),
        }
    }

    fn as_const(&self) -> Option<Rational> {
        match self {
            Node::Const(c) => Some(c.clone()),
            Node::Scale(w, inner, ..) => inner.as_const().map(|c| w * c),
            Node::Sum(v) => v.iter().map(Node::as_const).sum(),
            Node::Max(v) => v.iter().map(Node::as_const).collect::<Option<Vec<_>>>()?.into_iter().max(),
            Node::Var(..) => None,
        }
    }

    fn build(&self, n: usize) -> Result<TropicalExpr> {
        match self {
            Node::Const(c) => TropicalExpr::constant(n, c.clone()),
            Node::Var(i, line, column) => {
                if *i >= n {
                    return Err(err(
                        *line,
                        *column,
                        format!("variable x{} exceeds dimension {n}", i + 1),
                    ));
                }
                TropicalExpr::variable(n, *i, Rational::one())
            }
            Node::Scale(w, inner, line, column) => {
                if w.is_negative() {
                    return match inner.as_const() {
                        Some(c) => TropicalExpr::constant(n, w * c),
                        None => Err(err(*line, *column, "negative coefficient on a non-constant expression")),
                    };
                }
                inner.build(n)?.scale(w)
            }
            Node::Sum(parts) => {
                let exprs = parts.iter().map(|p| p.build(n)).collect::<Result<Vec<_>>>()?;
                make_sum(&exprs, &vec![Rational::one(); exprs.len()])
            }
            Node::Max(parts) => {
                let exprs = parts.iter().map(|p| p.build(n)).collect::<Result<Vec<_>>>()?;
                make_max(&exprs)
            }
        }
    }
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map_or(self.end, |s| (s.line, s.column))
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T> {
        let (l, c) = self.here();
        Err(err(l, c, message))
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(format!("expected {what}"))
        }
    }

    fn expr(&mut self) -> Result<Node> {
        let mut parts = vec![self.factor()?];
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    parts.push(self.factor()?);
                }
                Some(Tok::Minus) => {
                    let (l, c) = self.here();
                    self.pos += 1;
                    let rhs = self.factor()?;
                    let Some(value) = rhs.as_const() else {
                        return Err(err(l, c, "only constants can be subtracted"));
                    };
                    parts.push(Node::Const(-value));
                }
                _ => break,
            }
        }
        Ok(if parts.len() == 1 {
            parts.pop().expect("one part")
        } else {
            Node::Sum(parts)
        })
    }

    fn factor(&mut self) -> Result<Node> {
        let (line, column) = self.here();
        match self.peek().cloned() {
            Some(Tok::Minus) => {
                self.pos += 1;
                let Some(Tok::Num(v)) = self.peek().cloned() else {
                    return self.fail("expected a number after '-'");
                };
                self.pos += 1;
                self.scaled(-v, line, column)
            }
            Some(Tok::Num(v)) => {
                self.pos += 1;
                self.scaled(v, line, column)
            }
            Some(Tok::Var(i)) => {
                self.pos += 1;
                Ok(Node::Var(i, line, column))
            }
            Some(Tok::Max) => {
                self.pos += 1;
                self.expect(Tok::LParen, "'(' after max")?;
                let mut args = vec![self.expr()?];
                while self.peek() == Some(&Tok::Comma) {
                    self.pos += 1;
                    args.push(self.expr()?);
                }
                self.expect(Tok::RParen, "')' or ','")?;
                Ok(Node::Max(args))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Some(_) => self.fail("expected a number, variable, max( or ("),
            None => self.fail("unexpected end of input"),
        }
    }

    fn scaled(&mut self, v: Rational, line: usize, column: usize) -> Result<Node> {
        if self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            let inner = self.factor()?;
            Ok(Node::Scale(v, Box::new(inner), line, column))
        } else {
            Ok(Node::Const(v))
        }
    }
}

/// Parses and canonicalizes. With `n = None` the dimension is the largest
/// variable index that occurs (at least 1).
pub fn parse(src: &str, n: Option<usize>) -> Result<TropicalExpr> {
    let toks = lex(src)?;
    let end = src.lines().enumerate().last().map_or((1, 1), |(i, l)| (i + 1, l.chars().count() + 1));
    let mut parser = Parser { toks, pos: 0, end };
    let node = parser.expr()?;
    if parser.pos < parser.toks.len() {
        return parser.fail("unexpected trailing input");
    }
    let needed = node.max_var().map_or(1, |i| i + 1);
    let n = n.unwrap_or(needed);
    node.build(n)
}

fn term_text(a: &[Rational], c: &Rational, force_last: bool) -> String {
    let mut parts = Vec::new();
    let n = a.len();
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() && !(force_last && i + 1 == n) {
            continue;
        }
        parts.push(if ai.is_one() {
            format!("x{}", i + 1)
        } else {
            format!("{ai}*x{}", i + 1)
        });
    }
    let mut s = parts.join(" + ");
    if parts.is_empty() {
        s = c.to_string();
    } else if c.is_positive() {
        s = format!("{s} + {c}");
    } else if c.is_negative() {
        s = format!("{s} - {}", -c);
    }
    s
}

/// Prints in the syntax accepted by [`parse`]. A zero-slope `xn` is added
/// when needed so the dimension survives the round trip.
pub fn to_dsl(expr: &TropicalExpr) -> String {
    let n = expr.n();
    let uses_last = expr.terms().iter().any(|t| !t.exponent.entries()[n - 1].is_zero());
    let texts: Vec<String> = expr
        .terms()
        .iter()
        .enumerate()
        .map(|(k, t)| term_text(t.exponent.entries(), &t.constant, k == 0 && !uses_last))
        .collect();
    if texts.len() == 1 {
        texts.into_iter().next().expect("one term")
    } else {
        format!("max({})", texts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn parses_basic_forms() {
        let e = parse("max(x1, x2, -1)", None).unwrap();
        assert_eq!(e.n(), 2);
        assert_eq!(e.terms().len(), 3);
        let e = parse("max(1/2*x1 + 3, 0.25 * x2)", None).unwrap();
        assert_eq!(e.terms()[1].exponent.entries(), &[rat(1, 2), int(0)]);
        assert_eq!(e.terms()[1].constant, int(3));
        assert_eq!(e.terms()[0].exponent.entries(), &[int(0), rat(1, 4)]);
    }

    #[test]
    fn scaling_distributes_over_max() {
        let a = parse("2*max(x1, x2) + 1", None).unwrap();
        let b = parse("max(2*x1 + 1, 2*x2 + 1)", None).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn subtraction_of_constants_only() {
        assert_eq!(parse("x1 - 2", None).unwrap(), parse("x1 + -2", None).unwrap());
        assert!(matches!(parse("x1 - x2", None), Err(Error::Parse { .. })));
        assert!(parse("-1*x1", None).is_err());
        assert_eq!(parse("-2*3", Some(1)).unwrap(), parse("-6", Some(1)).unwrap());
    }

    #[test]
    fn errors_carry_position() {
        match parse("max(x1,\n  x2 $)", None) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 6)),
            other => panic!("unexpected {other:?}"),
        }
        match parse("max(x1, x2", None) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (1, 11)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse("x0", None).is_err());
        assert!(parse("y1", None).is_err());
        assert!(parse("1/0", None).is_err());
        let e = parse("x3", Some(2)).unwrap_err();
        assert!(e.to_string().contains("x3"));
    }

    #[test]
    fn explicit_dimension_pads() {
        let e = parse("x1", Some(3)).unwrap();
        assert_eq!(e.n(), 3);
        assert_eq!(to_dsl(&e), "x1 + 0*x3");
        assert_eq!(parse(&to_dsl(&e), None).unwrap(), e);
    }

    #[test]
    fn round_trip() {
        for s in [
            "max(x1, x2, -1)",
            "max(3/2*x1 - 1/3, x2 + 2, 0.5*x1 + 0.5*x2 + 1)",
            "-7",
            "x1 + x2",
            "max(x1, x2) + max(2*x1, x2)",
        ] {
            let e = parse(s, None).unwrap();
            let again = parse(&to_dsl(&e), None).unwrap();
            assert_eq!(again, e, "{s}");
        }
    }
}
