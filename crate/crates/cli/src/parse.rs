//! Text input for maps and polynomials.
//!
//! Grammar, over a single variable `z` or `x`:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/')? unary)*
//! unary  := '-' unary | '+' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | decimal | variable | '(' expr ')'
//! ```
//!
//! Expressions evaluate to quotients of polynomials with rational
//! coefficients, so `(z^2-1)/z`, `1/z^2` and `z^2 - 1/2` are all accepted.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use orbitint::dynamics::RationalMap;
use orbitint::IntPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the input.
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at position {}: {}", self.position, self.message)
    }
}

impl std::error::Error for ParseError {}

type PResult<T> = Result<T, ParseError>;

/// Dense polynomial with rational coefficients, ascending.
#[derive(Clone, Debug)]
struct QPoly(Vec<BigRational>);

impl QPoly {
    fn constant(c: BigRational) -> QPoly {
        QPoly(vec![c]).trim()
    }

    fn var() -> QPoly {
        QPoly(vec![BigRational::zero(), BigRational::one()])
    }

    fn trim(mut self) -> QPoly {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn add(&self, o: &QPoly) -> QPoly {
        let n = self.0.len().max(o.0.len());
        let get = |v: &Vec<BigRational>, i: usize| v.get(i).cloned().unwrap_or_else(BigRational::zero);
        QPoly((0..n).map(|i| get(&self.0, i) + get(&o.0, i)).collect()).trim()
    }

    fn neg(&self) -> QPoly {
        QPoly(self.0.iter().map(|c| -c).collect())
    }

    fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly(Vec::new());
        }
        let mut v = vec![BigRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        QPoly(v).trim()
    }

    /// Integer polynomial with the same roots: denominators cleared.
    fn to_int(&self) -> IntPoly {
        let l = self.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        IntPoly::new(self.0.iter().map(|c| (c * &l).to_integer()).collect())
    }
}

/// `num / den`.
#[derive(Clone, Debug)]
struct Frac {
    num: QPoly,
    den: QPoly,
}

impl Frac {
    fn poly(p: QPoly) -> Frac {
        Frac {
            num: p,
            den: QPoly::constant(BigRational::one()),
        }
    }

    fn add(&self, o: &Frac) -> Frac {
        Frac {
            num: self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            den: self.den.mul(&o.den),
        }
    }

    fn mul(&self, o: &Frac) -> Frac {
        Frac {
            num: self.num.mul(&o.num),
            den: self.den.mul(&o.den),
        }
    }

    fn neg(&self) -> Frac {
        Frac {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Var(char),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> PResult<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            'z' | 'x' => Tok::Var(c),
            '0'..='9' | '.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                let lit = &text[start..i];
                out.push((start, Tok::Num(decimal(lit, start)?)));
                continue;
            }
            _ => {
                return Err(ParseError {
                    position: start,
                    message: format!("unexpected character {c:?}"),
                })
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

fn decimal(lit: &str, pos: usize) -> PResult<BigRational> {
    let bad = || ParseError {
        position: pos,
        message: format!("malformed number {lit:?}"),
    };
    let (int, frac) = match lit.split_once('.') {
        Some((a, b)) => (a, b),
        None => (lit, ""),
    };
    if frac.contains('.') || (int.is_empty() && frac.is_empty()) {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let n: BigInt = digits.parse().map_err(|_| bad())?;
    Ok(BigRational::new(n, BigInt::from(10).pow(frac.len() as u32)))
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    var: Option<char>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(ParseError {
            position: self.pos(),
            message: message.into(),
        })
    }

    fn expr(&mut self) -> PResult<Frac> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.at += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.at += 1;
                    acc = acc.add(&self.term()?.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> PResult<Frac> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.at += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Some(Tok::Slash) => {
                    self.at += 1;
                    let pos = self.pos();
                    let d = self.unary()?;
                    if d.num.is_zero() {
                        return Err(ParseError {
                            position: pos,
                            message: "division by zero".into(),
                        });
                    }
                    acc = acc.mul(&Frac {
                        num: d.den,
                        den: d.num,
                    });
                }
                // implicit product such as `2z` or `3(z+1)`
                Some(Tok::Num(_)) | Some(Tok::Var(_)) | Some(Tok::LParen) => {
                    acc = acc.mul(&self.unary()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> PResult<Frac> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.at += 1;
                Ok(self.unary()?.neg())
            }
            Some(Tok::Plus) => {
                self.at += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> PResult<Frac> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.at += 1;
        let e = match self.peek() {
            Some(Tok::Num(n)) if n.is_integer() && !n.is_negative() => n.to_integer(),
            _ => return self.err("expected a nonnegative integer exponent"),
        };
        let e: u32 = match e.try_into() {
            Ok(v) if v <= 4096 => v,
            _ => return self.err("exponent too large"),
        };
        self.at += 1;
        let mut out = Frac::poly(QPoly::constant(BigRational::one()));
        for _ in 0..e {
            out = out.mul(&base);
        }
        Ok(out)
    }

    fn atom(&mut self) -> PResult<Frac> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.at += 1;
                Ok(Frac::poly(QPoly::constant(n)))
            }
            Some(Tok::Var(v)) => {
                if let Some(w) = self.var {
                    if w != v {
                        return self.err(format!("mixed variables {w} and {v}"));
                    }
                }
                self.var = Some(v);
                self.at += 1;
                Ok(Frac::poly(QPoly::var()))
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(ParseError {
                        position: self.pos(),
                        message: format!("unclosed parenthesis opened at position {pos}"),
                    });
                }
                self.at += 1;
                Ok(inner)
            }
            Some(t) => self.err(format!("unexpected {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

fn parse_frac(text: &str) -> PResult<Frac> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: text.len(),
        var: None,
    };
    let f = p.expr()?;
    if p.at < p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(f)
}

/// Parse a polynomial; rational coefficients are cleared to integers.
pub fn parse_poly(text: &str) -> PResult<IntPoly> {
    let f = parse_frac(text)?;
    if f.den.0.len() != 1 {
        return Err(ParseError {
            position: 0,
            message: "expected a polynomial, found a quotient with a nonconstant denominator".into(),
        });
    }
    let c = f.den.0[0].clone();
    let q = QPoly(f.num.0.iter().map(|a| a / &c).collect());
    if q.is_zero() {
        return Err(ParseError {
            position: 0,
            message: "the zero polynomial is not allowed".into(),
        });
    }
    Ok(q.to_int())
}

/// Parse a rational map `p(z)/q(z)`, cancelling common factors.
pub fn parse_map(text: &str) -> Result<RationalMap, ParseError> {
    let f = parse_frac(text)?;
    if f.num.is_zero() {
        return Err(ParseError {
            position: 0,
            message: "the zero map is not allowed".into(),
        });
    }
    // clear denominators of both parts by one common factor
    let l = f
        .num
        .0
        .iter()
        .chain(&f.den.0)
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let scale = |p: &QPoly| IntPoly::new(p.0.iter().map(|c| (c * &l).to_integer()).collect());
    RationalMap::new(scale(&f.num), scale(&f.den)).map_err(|e| ParseError {
        position: 0,
        message: e.to_string(),
    })
}
