//! Formal Laurent series in `T^-1` as lazily evaluated, memoized streams.
//!
//! A stream stores an upper bound `top` on its degree; coefficient index `i`
//! of the cache holds the coefficient of `T^(top - i)`. Every stream is backed
//! by a finite description, so each coefficient is a pure function of its
//! index and the memo can be shared between clones.

use std::sync::{Arc, Mutex};

use crate::algebra::{Field, Poly};
use crate::error::{Error, Result};

/// Default number of coefficients scanned when looking for a leading term.
pub const DEFAULT_SCAN: usize = 4096;

enum Kind<F: Field> {
    Zero,
    /// `a / b`, computed by the linear recurrence of the denominator.
    Rational { a: Poly<F>, b: Poly<F> },
    /// A root of `d` whose leading coefficient is `root`.
    Sqrt { d: Poly<F>, root: F::Elem },
    Product(LaurentStream<F>, LaurentStream<F>),
    /// `sum c_i s_i`.
    Linear(Vec<(F::Elem, LaurentStream<F>)>),
    /// Reciprocal of a stream whose leading term is `lead * T^n`.
    Inverse { s: LaurentStream<F>, n: i64, lead_inv: F::Elem },
    /// The terms of strictly negative exponent.
    Frac(LaurentStream<F>),
    /// `(r + sqrt(d)) / s`, delegating coefficients to `value`.
    Surd { r: Poly<F>, s: Poly<F>, d: Poly<F>, root: F::Elem, value: LaurentStream<F> },
}

struct Node<F: Field> {
    field: F,
    top: i64,
    kind: Kind<F>,
    cache: Mutex<Vec<F::Elem>>,
}

/// An element of `K((T^-1))`. Clones share the coefficient memo.
#[derive(Clone)]
pub struct LaurentStream<F: Field> {
    node: Arc<Node<F>>,
}

/// Result of [`LaurentStream::sqrt`]: the stream and, when `d` is the square
/// of a polynomial, that polynomial.
#[derive(Clone)]
pub struct SqrtOutcome<F: Field> {
    pub stream: LaurentStream<F>,
    pub exact: Option<Poly<F>>,
}

impl<F: Field> LaurentStream<F> {
    fn make(field: &F, top: i64, kind: Kind<F>) -> Self {
        LaurentStream {
            node: Arc::new(Node { field: field.clone(), top, kind, cache: Mutex::new(Vec::new()) }),
        }
    }

    pub fn zero(field: &F) -> Self {
        Self::make(field, 0, Kind::Zero)
    }

    pub fn from_rational(a: &Poly<F>, b: &Poly<F>) -> Result<Self> {
        let f = a.field();
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if a.is_zero() {
            return Ok(Self::zero(f));
        }
        let top = a.deg_i() - b.deg_i();
        Ok(Self::make(f, top, Kind::Rational { a: a.clone(), b: b.clone() }))
    }

    pub fn from_poly(p: &Poly<F>) -> Self {
        Self::from_rational(p, &Poly::one(p.field())).expect("1 is nonzero")
    }

    pub fn constant(field: &F, c: F::Elem) -> Self {
        Self::from_poly(&Poly::constant(field, c))
    }

    /// Square root of `d` with the canonical leading coefficient.
    pub fn sqrt(d: &Poly<F>) -> Result<SqrtOutcome<F>> {
        let f = d.field();
        let root = f.sqrt(&d.lead()).ok_or_else(|| {
            Error::Precondition(format!("leading coefficient of {d} is not a square in {}", f.spec()))
        })?;
        Self::sqrt_with_root(d, &root)
    }

    /// Square root of `d` whose leading coefficient is `root`.
    pub fn sqrt_with_root(d: &Poly<F>, root: &F::Elem) -> Result<SqrtOutcome<F>> {
        let f = d.field();
        if f.characteristic() == 2 {
            return Err(Error::Unsupported("square roots in characteristic 2".into()));
        }
        let deg = d.deg().ok_or_else(|| Error::Precondition("square root of zero".into()))?;
        if deg % 2 == 1 {
            return Err(Error::Precondition(format!("{d} has odd degree")));
        }
        if f.mul(root, root) != d.lead() {
            return Err(Error::Precondition("root does not square to the leading coefficient".into()));
        }
        let stream = Self::make(
            f,
            (deg / 2) as i64,
            Kind::Sqrt { d: d.clone(), root: root.clone() },
        );
        let fl = stream.floor();
        let exact = (&fl * &fl == *d).then_some(fl);
        let stream = match &exact {
            Some(p) => Self::from_poly(p),
            None => stream,
        };
        Ok(SqrtOutcome { stream, exact })
    }

    /// `(r + sqrt(d)) / s` with the square root led by `root`.
    pub fn surd(r: &Poly<F>, s: &Poly<F>, d: &Poly<F>, root: &F::Elem) -> Result<Self> {
        if s.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let sq = Self::sqrt_with_root(d, root)?.stream;
        let num = sq.add(&Self::from_poly(r));
        let value = num.mul(&Self::from_rational(&Poly::one(r.field()), s)?);
        Ok(Self::make(
            r.field(),
            value.top(),
            Kind::Surd { r: r.clone(), s: s.clone(), d: d.clone(), root: root.clone(), value },
        ))
    }

    pub fn field(&self) -> &F {
        &self.node.field
    }

    /// Upper bound on the degree; every coefficient above it is zero.
    pub fn top(&self) -> i64 {
        self.node.top
    }

    pub fn is_zero_kind(&self) -> bool {
        matches!(self.node.kind, Kind::Zero)
    }

    /// `(a, b)` when the stream is backed by a rational function.
    pub fn as_rational(&self) -> Option<(Poly<F>, Poly<F>)> {
        match &self.node.kind {
            Kind::Rational { a, b } => Some((a.clone(), b.clone())),
            Kind::Zero => Some((Poly::zero(self.field()), Poly::one(self.field()))),
            _ => None,
        }
    }

    /// `(r, s, d, root)` when the stream is a square root or a surd.
    #[allow(clippy::type_complexity)]
    pub fn as_surd(&self) -> Option<(Poly<F>, Poly<F>, Poly<F>, F::Elem)> {
        let f = self.field();
        match &self.node.kind {
            Kind::Sqrt { d, root } => Some((Poly::zero(f), Poly::one(f), d.clone(), root.clone())),
            Kind::Surd { r, s, d, root, .. } => Some((r.clone(), s.clone(), d.clone(), root.clone())),
            _ => None,
        }
    }

    /// Coefficient of `T^e`.
    pub fn coeff(&self, e: i64) -> F::Elem {
        if e > self.node.top {
            return self.node.field.zero();
        }
        self.coeff_idx((self.node.top - e) as usize)
    }

    fn coeff_idx(&self, idx: usize) -> F::Elem {
        let mut cache = self.node.cache.lock().expect("stream memo poisoned");
        while cache.len() <= idx {
            let next = self.compute(cache.len(), &cache);
            cache.push(next);
        }
        cache[idx].clone()
    }

    /// Coefficient at index `idx` given all earlier ones in `prev`.
    fn compute(&self, idx: usize, prev: &[F::Elem]) -> F::Elem {
        let f = &self.node.field;
        let top = self.node.top;
        let e = top - idx as i64;
        match &self.node.kind {
            Kind::Zero => f.zero(),
            Kind::Rational { a, b } => {
                // sum_i b_i c_{e+M-i} = a_{e+M}
                let m = b.deg().expect("nonzero");
                let mut acc = coeff_at(a, e + m as i64);
                for i in 0..m {
                    let j = e + (m - i) as i64;
                    if j <= top {
                        acc = f.sub(&acc, &f.mul(&b.coeff(i), &prev[(top - j) as usize]));
                    }
                }
                f.div(&acc, &b.lead()).expect("nonzero lead")
            }
            Kind::Sqrt { d, root } => {
                let n = top;
                if idx == 0 {
                    return root.clone();
                }
                let mut acc = coeff_at(d, e + n);
                for k in (e + 1)..n {
                    let l = e + n - k;
                    acc = f.sub(&acc, &f.mul(&prev[(n - k) as usize], &prev[(n - l) as usize]));
                }
                let two_root = f.add(root, root);
                f.div(&acc, &two_root).expect("char != 2")
            }
            Kind::Product(a, b) => {
                let (ta, tb) = (a.top(), b.top());
                let mut acc = f.zero();
                for i in 0..=(ta + tb - e) {
                    let x = a.coeff(ta - i);
                    if f.is_zero(&x) {
                        continue;
                    }
                    acc = f.add(&acc, &f.mul(&x, &b.coeff(e - ta + i)));
                }
                acc
            }
            Kind::Linear(terms) => {
                let mut acc = f.zero();
                for (c, s) in terms {
                    acc = f.add(&acc, &f.mul(c, &s.coeff(e)));
                }
                acc
            }
            Kind::Inverse { s, n, lead_inv } => {
                if idx == 0 {
                    return lead_inv.clone();
                }
                // d_{m-N} = -c_N^-1 sum_{i=m+N}^{N-1} c_i d_{m-i}
                let m = e + n;
                let mut acc = f.zero();
                for i in (m + n)..*n {
                    let ci = s.coeff(i);
                    if f.is_zero(&ci) {
                        continue;
                    }
                    acc = f.add(&acc, &f.mul(&ci, &prev[(top - (m - i)) as usize]));
                }
                f.neg(&f.mul(lead_inv, &acc))
            }
            Kind::Frac(s) => s.coeff(e),
            Kind::Surd { value, .. } => value.coeff(e),
        }
    }

    /// Coefficients of `T^top, T^(top-1), ...`, `n` of them.
    pub fn prefix(&self, n: usize) -> Vec<F::Elem> {
        (0..n).map(|i| self.coeff_idx(i)).collect()
    }

    /// Leading exponent and coefficient, scanning at most `scan` positions.
    pub fn leading(&self, scan: usize) -> Option<(i64, F::Elem)> {
        if self.is_zero_kind() {
            return None;
        }
        let f = &self.node.field;
        (0..scan).find_map(|i| {
            let c = self.coeff_idx(i);
            (!f.is_zero(&c)).then(|| (self.node.top - i as i64, c))
        })
    }

    /// `ord = -deg`; `None` when no nonzero term occurs within `scan` positions.
    pub fn order(&self, scan: usize) -> Option<i64> {
        self.leading(scan).map(|(e, _)| -e)
    }

    /// True when every coefficient of exponent at least `e` vanishes.
    pub fn vanishes_from(&self, e: i64) -> bool {
        let f = &self.node.field;
        (e..=self.node.top).all(|k| f.is_zero(&self.coeff(k)))
    }

    pub fn add(&self, o: &Self) -> Self {
        let one = self.field().one();
        self.linear(&[(one.clone(), self.clone()), (one, o.clone())])
    }

    pub fn sub(&self, o: &Self) -> Self {
        let f = self.field();
        self.linear(&[(f.one(), self.clone()), (f.neg(&f.one()), o.clone())])
    }

    pub fn neg(&self) -> Self {
        self.scale(&self.field().neg(&self.field().one()))
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        self.linear(&[(c.clone(), self.clone())])
    }

    fn linear(&self, terms: &[(F::Elem, Self)]) -> Self {
        let top = terms.iter().map(|(_, s)| s.top()).max().unwrap_or(0);
        Self::make(self.field(), top, Kind::Linear(terms.to_vec()))
    }

    pub fn add_poly(&self, p: &Poly<F>) -> Self {
        self.add(&Self::from_poly(p))
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero_kind() || o.is_zero_kind() {
            return Self::zero(self.field());
        }
        Self::make(self.field(), self.top() + o.top(), Kind::Product(self.clone(), o.clone()))
    }

    pub fn mul_poly(&self, p: &Poly<F>) -> Self {
        self.mul(&Self::from_poly(p))
    }

    /// Reciprocal; fails when no nonzero coefficient appears within `scan`.
    pub fn inverse(&self, scan: usize) -> Result<Self> {
        if let Some((a, b)) = self.as_rational() {
            if a.is_zero() {
                return Err(Error::DivisionByZero);
            }
            return Self::from_rational(&b, &a);
        }
        let (n, lead) = self.leading(scan).ok_or(Error::DivisionByZero)?;
        let lead_inv = self.field().inv(&lead).expect("nonzero");
        Ok(Self::make(self.field(), -n, Kind::Inverse { s: self.clone(), n, lead_inv }))
    }

    /// The polynomial part `sum_{i >= 0} c_i T^i`.
    pub fn floor(&self) -> Poly<F> {
        let f = self.field();
        if self.top() < 0 {
            return Poly::zero(f);
        }
        let mut v: Vec<F::Elem> = (0..=self.top()).map(|e| self.coeff(e)).collect();
        // coeff(e) fills index e directly
        v.truncate((self.top() + 1) as usize);
        Poly::new(f, v)
    }

    /// Polynomial part and fractional part.
    pub fn poly_part(&self) -> (Poly<F>, Self) {
        let fl = self.floor();
        let frac = match self.as_rational() {
            Some((a, b)) => {
                let r = a.rem(&b).expect("b nonzero");
                Self::from_rational(&r, &b).expect("b nonzero")
            }
            None => Self::make(self.field(), self.top().min(-1), Kind::Frac(self.clone())),
        };
        (fl, frac)
    }

    /// Compare the coefficients of exponents `top..top-n` of both streams.
    pub fn prefix_eq(&self, o: &Self, n: usize) -> bool {
        let top = self.top().max(o.top());
        (0..n as i64).all(|i| self.coeff(top - i) == o.coeff(top - i))
    }

    /// `c_N*T^N + ... + c_0 + c_-1*T^-1 + ... (k terms shown)`.
    pub fn fmt_terms(&self, k: usize) -> String {
        let f = self.field();
        let mut parts: Vec<(bool, String)> = Vec::new();
        let mut idx = 0usize;
        while parts.len() < k && idx < DEFAULT_SCAN {
            let c = self.coeff_idx(idx);
            let e = self.top() - idx as i64;
            idx += 1;
            if f.is_zero(&c) {
                continue;
            }
            let mut cs = f.fmt_elem(&c);
            let compound = cs[1..].contains(['+', '-']);
            if compound {
                cs = format!("({cs})");
            }
            let neg = !compound && cs.starts_with('-');
            let body = if neg { cs[1..].to_string() } else { cs };
            let mono = match e {
                0 => String::new(),
                1 => "T".to_string(),
                _ => format!("T^{e}"),
            };
            let term = match (e, body.as_str()) {
                (0, _) => body,
                (_, "1") => mono,
                _ => format!("{body}*{mono}"),
            };
            parts.push((neg, term));
        }
        if parts.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (neg, t)) in parts.iter().enumerate() {
            match (i, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            out.push_str(t);
        }
        format!("{out} + ... ({} terms shown)", parts.len())
    }
}

fn coeff_at<F: Field>(p: &Poly<F>, e: i64) -> F::Elem {
    if e < 0 {
        p.field().zero()
    } else {
        p.coeff(e as usize)
    }
}

impl<F: Field> std::fmt::Debug for LaurentStream<F> {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(fm, "{}", self.fmt_terms(8))
    }
}
