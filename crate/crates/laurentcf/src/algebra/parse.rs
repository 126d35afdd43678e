//! Text formats: field specs, polynomials in `T` (and `x` inside extension
//! coefficients), and quadratic expressions `(A + B*sqrt(D))/C`.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::field::{Field, PrimeField, Rationals};
use super::numfield::NumberField;
use super::poly::Poly;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(BigRational),
    T,
    X,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Sqrt(Box<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let txt: String = cs[st..i].iter().collect();
            out.push(Tok::Num(txt.parse().expect("digits")));
        } else if c.is_ascii_alphabetic() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_alphabetic() {
                i += 1;
            }
            let word: String = cs[st..i].iter().collect();
            // `Tx` style juxtapositions split into single-letter variables.
            if word == "sqrt" {
                out.push(Tok::Ident(word));
            } else {
                for ch in word.chars() {
                    out.push(Tok::Ident(ch.to_string()));
                }
            }
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else if c == '\u{2212}' {
            out.push(Tok::Op('-'));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} in {s:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
    src: &'a str,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at token {} in {:?}", self.pos, self.src))
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = if c == '+' {
                Expr::Add(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Sub(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Op('/')) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    lhs = Expr::Div(Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Op('(')) => {
                    let rhs = self.power()?;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n.try_into().map_err(|_| self.err("exponent too large"))?;
                    Ok(Expr::Pow(Box::new(base), e))
                }
                _ => Err(self.err("expected integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Expr::Num(BigRational::from_integer(n)))
            }
            Some(Tok::Ident(id)) => {
                self.pos += 1;
                match id.as_str() {
                    "T" => Ok(Expr::T),
                    "x" => Ok(Expr::X),
                    "sqrt" => {
                        if self.peek() != Some(&Tok::Op('(')) {
                            return Err(self.err("expected ( after sqrt"));
                        }
                        self.pos += 1;
                        let inner = self.expr()?;
                        self.expect_close()?;
                        Ok(Expr::Sqrt(Box::new(inner)))
                    }
                    other => Err(self.err(&format!("unknown symbol {other:?}"))),
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect_close()?;
                Ok(inner)
            }
            _ => Err(self.err("expected a term")),
        }
    }

    fn expect_close(&mut self) -> Result<()> {
        if self.peek() == Some(&Tok::Op(')')) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err("expected )"))
        }
    }
}

pub fn parse_expr(s: &str) -> Result<Expr> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { toks: &toks, pos: 0, src: s };
    let e = p.expr()?;
    if p.pos != toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

/// Evaluate an expression that denotes a polynomial in `T`.
pub fn eval_poly<F: Field>(e: &Expr, f: &F) -> Result<Poly<F>> {
    Ok(match e {
        Expr::Num(q) => Poly::constant(
            f,
            f.from_rational(q)
                .ok_or_else(|| Error::Parse(format!("{q} has no image in {}", f.spec())))?,
        ),
        Expr::T => Poly::t(f),
        Expr::X => Poly::constant(
            f,
            f.generator()
                .ok_or_else(|| Error::Parse(format!("x is not defined over {}", f.spec())))?,
        ),
        Expr::Neg(a) => -eval_poly(a, f)?,
        Expr::Add(a, b) => eval_poly(a, f)? + eval_poly(b, f)?,
        Expr::Sub(a, b) => eval_poly(a, f)? - eval_poly(b, f)?,
        Expr::Mul(a, b) => eval_poly(a, f)? * eval_poly(b, f)?,
        Expr::Div(a, b) => {
            let den = eval_poly(b, f)?;
            if den.deg() != Some(0) {
                return Err(Error::Parse("polynomial division by a non-constant".into()));
            }
            let ci = f.inv(&den.lead()).expect("nonzero constant");
            eval_poly(a, f)?.scale(&ci)
        }
        Expr::Pow(a, k) => eval_poly(a, f)?.pow(*k),
        Expr::Sqrt(_) => return Err(Error::Parse("sqrt is not allowed in a polynomial".into())),
    })
}

pub fn parse_poly<F: Field>(s: &str, f: &F) -> Result<Poly<F>> {
    eval_poly(&parse_expr(s)?, f)
}

/// A constant of the field, written like a polynomial without `T`.
pub fn parse_elem<F: Field>(s: &str, f: &F) -> Result<F::Elem> {
    let p = parse_poly(s, f)?;
    if p.deg().unwrap_or(0) > 0 {
        return Err(Error::Parse(format!("{s:?} is not a constant")));
    }
    Ok(p.constant_term())
}

/// `(a + b sqrt(d)) / c`; `d` is `None` when no radical occurred.
#[derive(Clone, Debug)]
pub struct QuadValue<F: Field> {
    pub a: Poly<F>,
    pub b: Poly<F>,
    pub c: Poly<F>,
    pub d: Option<Poly<F>>,
}

impl<F: Field> QuadValue<F> {
    fn rational(a: Poly<F>, c: Poly<F>) -> Self {
        let f = a.field().clone();
        QuadValue { a, b: Poly::zero(&f), c, d: None }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    fn merge_d(x: &Option<Poly<F>>, y: &Option<Poly<F>>) -> Result<Option<Poly<F>>> {
        match (x, y) {
            (Some(p), Some(q)) if p != q => {
                Err(Error::Parse("expressions with two different radicands".into()))
            }
            (Some(p), _) | (_, Some(p)) => Ok(Some(p.clone())),
            _ => Ok(None),
        }
    }

    fn dpoly(&self, d: &Option<Poly<F>>) -> Poly<F> {
        d.clone().unwrap_or_else(|| Poly::zero(self.a.field()))
    }

    fn reduce(mut self) -> Self {
        let g = self.a.gcd(&self.b).and_then(|g| g.gcd(&self.c));
        if let Ok(g) = g {
            if !g.is_one() {
                self.a = self.a.div_exact(&g).expect("gcd divides");
                self.b = self.b.div_exact(&g).expect("gcd divides");
                self.c = self.c.div_exact(&g).expect("gcd divides");
            }
        }
        if self.b.is_zero() {
            self.d = None;
        }
        self
    }

    fn add(&self, o: &Self, sign: bool) -> Result<Self> {
        let d = Self::merge_d(&self.d, &o.d)?;
        let (oa, ob) = if sign { (o.a.clone(), o.b.clone()) } else { (-&o.a, -&o.b) };
        Ok(QuadValue {
            a: &self.a * &o.c + &oa * &self.c,
            b: &self.b * &o.c + &ob * &self.c,
            c: &self.c * &o.c,
            d,
        }
        .reduce())
    }

    fn mul(&self, o: &Self) -> Result<Self> {
        let d = Self::merge_d(&self.d, &o.d)?;
        let dp = self.dpoly(&d);
        Ok(QuadValue {
            a: &self.a * &o.a + &(&self.b * &o.b) * &dp,
            b: &self.a * &o.b + &self.b * &o.a,
            c: &self.c * &o.c,
            d,
        }
        .reduce())
    }

    fn recip(&self) -> Result<Self> {
        let dp = self.dpoly(&self.d);
        // c / (a + b r) = c (a - b r) / (a^2 - b^2 d)
        let n = &self.a * &self.a - &(&self.b * &self.b) * &dp;
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(QuadValue { a: &self.c * &self.a, b: -(&self.c * &self.b), c: n, d: self.d.clone() }
            .reduce())
    }
}

pub fn eval_quad<F: Field>(e: &Expr, f: &F) -> Result<QuadValue<F>> {
    Ok(match e {
        Expr::Num(_) | Expr::T | Expr::X => QuadValue::rational(eval_poly(e, f)?, Poly::one(f)),
        Expr::Neg(a) => {
            let v = eval_quad(a, f)?;
            QuadValue { a: -&v.a, b: -&v.b, c: v.c, d: v.d }
        }
        Expr::Add(a, b) => eval_quad(a, f)?.add(&eval_quad(b, f)?, true)?,
        Expr::Sub(a, b) => eval_quad(a, f)?.add(&eval_quad(b, f)?, false)?,
        Expr::Mul(a, b) => eval_quad(a, f)?.mul(&eval_quad(b, f)?)?,
        Expr::Div(a, b) => eval_quad(a, f)?.mul(&eval_quad(b, f)?.recip()?)?,
        Expr::Pow(a, k) => {
            let base = eval_quad(a, f)?;
            let mut acc = QuadValue::rational(Poly::one(f), Poly::one(f));
            for _ in 0..*k {
                acc = acc.mul(&base)?;
            }
            acc
        }
        Expr::Sqrt(inner) => {
            let d = eval_poly(inner, f)?;
            QuadValue { a: Poly::zero(f), b: Poly::one(f), c: Poly::one(f), d: Some(d) }
        }
    })
}

pub fn parse_quad<F: Field>(s: &str, f: &F) -> Result<QuadValue<F>> {
    eval_quad(&parse_expr(s)?, f)
}

/// A field chosen at runtime from its spec string.
#[derive(Clone, Debug)]
pub enum AnyField {
    Q(Rationals),
    Fp(PrimeField),
    Ext(NumberField),
}

/// Parse `"Q"`, `"F<p>"` or `"Q[x]/(<poly in x>)"`.
pub fn parse_field(spec: &str) -> Result<AnyField> {
    let s = spec.trim();
    if s == "Q" {
        return Ok(AnyField::Q(Rationals));
    }
    if let Some(rest) = s.strip_prefix('F') {
        let p: u64 = rest
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad field spec {spec:?}")))?;
        return Ok(AnyField::Fp(PrimeField::new(p)?));
    }
    if let Some(rest) = s.strip_prefix("Q[x]/") {
        let inner = rest.trim();
        let inner = inner
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("bad extension spec {spec:?}")))?;
        // The minimal polynomial is written in x; read it as a polynomial over Q.
        let e = parse_expr(inner)?;
        let m = eval_poly(&swap_x_t(&e)?, &Rationals)?;
        return Ok(AnyField::Ext(NumberField::new(m, inner)?));
    }
    Err(Error::Parse(format!("bad field spec {spec:?}")))
}

fn swap_x_t(e: &Expr) -> Result<Expr> {
    let b = |x: &Expr| swap_x_t(x).map(Box::new);
    Ok(match e {
        Expr::X => Expr::T,
        Expr::T => return Err(Error::Parse("minimal polynomial must be written in x".into())),
        Expr::Num(q) => Expr::Num(q.clone()),
        Expr::Neg(a) => Expr::Neg(b(a)?),
        Expr::Add(x, y) => Expr::Add(b(x)?, b(y)?),
        Expr::Sub(x, y) => Expr::Sub(b(x)?, b(y)?),
        Expr::Mul(x, y) => Expr::Mul(b(x)?, b(y)?),
        Expr::Div(x, y) => Expr::Div(b(x)?, b(y)?),
        Expr::Pow(x, k) => Expr::Pow(b(x)?, *k),
        Expr::Sqrt(_) => return Err(Error::Parse("sqrt in a minimal polynomial".into())),
    })
}
