//! Regular continued fractions: expansion, continuants, folding, unary
//! transforms and convergent transfer under multiplication.

use crate::algebra::{Field, Poly};
use crate::error::{Error, Result};
use crate::laurent::{LaurentStream, DEFAULT_SCAN};

/// Partial quotients with their continuants.
///
/// `p[n] = a_n p[n-1] + p[n-2]`, seeds `p_{-1} = 1, p_{-2} = 0, q_{-1} = 0,
/// q_{-2} = 1`. The pairs are kept raw (no normalization) so that
/// `q_n p_{n-1} - q_{n-1} p_n = (-1)^n` holds literally.
#[derive(Clone, Debug)]
pub struct Expansion<F: Field> {
    pub field: F,
    pub quotients: Vec<Poly<F>>,
    pub p: Vec<Poly<F>>,
    pub q: Vec<Poly<F>>,
    /// The remaining complete quotient vanished: the value is `p/q` of the last pair.
    pub terminated: bool,
    /// The step budget ran out before termination.
    pub budget_exhausted: bool,
}

/// `K` over all computed `a_n`, `n >= 1`, and an observed `ovK` over the
/// trailing window of `max(5, n/2)` quotients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KProfile {
    pub k: Option<usize>,
    pub ovk: Option<usize>,
    pub window: usize,
    pub quotients: usize,
}

impl<F: Field> Expansion<F> {
    pub fn from_quotients(field: &F, quotients: Vec<Poly<F>>, terminated: bool, budget_exhausted: bool) -> Self {
        let mut e = Expansion {
            field: field.clone(),
            quotients: Vec::new(),
            p: Vec::new(),
            q: Vec::new(),
            terminated,
            budget_exhausted,
        };
        for a in quotients {
            e.push(a);
        }
        e
    }

    /// Append a partial quotient and extend the continuants.
    pub fn push(&mut self, a: Poly<F>) {
        let f = &self.field;
        let n = self.p.len();
        let (p1, p2) = match n {
            0 => (Poly::one(f), Poly::zero(f)),
            1 => (self.p[0].clone(), Poly::one(f)),
            _ => (self.p[n - 1].clone(), self.p[n - 2].clone()),
        };
        let (q1, q2) = match n {
            0 => (Poly::zero(f), Poly::one(f)),
            1 => (self.q[0].clone(), Poly::zero(f)),
            _ => (self.q[n - 1].clone(), self.q[n - 2].clone()),
        };
        self.p.push(&(&a * &p1) + &p2);
        self.q.push(&(&a * &q1) + &q2);
        self.quotients.push(a);
    }

    pub fn len(&self) -> usize {
        self.quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quotients.is_empty()
    }

    /// `(p_n, q_n)` scaled so that `q_n` is monic.
    pub fn monic_continuant(&self, n: usize) -> (Poly<F>, Poly<F>) {
        let li = self.field.inv(&self.q[n].lead()).expect("q_n nonzero");
        (self.p[n].scale(&li), self.q[n].scale(&li))
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.quotients.iter().map(|a| a.deg_i()).collect()
    }

    pub fn k_profile(&self) -> KProfile {
        let tail: Vec<usize> = self.quotients.iter().skip(1).filter_map(|a| a.deg()).collect();
        let n = tail.len();
        let window = 5.max(n / 2).min(n);
        KProfile {
            k: tail.iter().copied().max(),
            ovk: tail[n - window..].iter().copied().max(),
            window,
            quotients: n,
        }
    }

    /// All `a_n` with `n >= 1` have degree exactly 1.
    pub fn is_normal(&self) -> bool {
        self.quotients.iter().skip(1).all(|a| a.deg() == Some(1))
    }

    /// `a_n` non-constant for every `n >= 1`.
    pub fn is_regular(&self) -> bool {
        self.quotients.iter().skip(1).all(|a| a.deg().unwrap_or(0) >= 1)
    }

    /// Value of the stored word when it terminated.
    pub fn value(&self) -> Option<(Poly<F>, Poly<F>)> {
        (self.terminated && !self.is_empty()).then(|| (self.p[self.len() - 1].clone(), self.q[self.len() - 1].clone()))
    }
}

/// 2x2 polynomial matrix `[[a, b], [c, d]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat2<F: Field> {
    pub a: Poly<F>,
    pub b: Poly<F>,
    pub c: Poly<F>,
    pub d: Poly<F>,
}

impl<F: Field> Mat2<F> {
    pub fn identity(f: &F) -> Self {
        Mat2 { a: Poly::one(f), b: Poly::zero(f), c: Poly::zero(f), d: Poly::one(f) }
    }

    /// `M_a = [[a, 1], [1, 0]]`.
    pub fn quotient(a: &Poly<F>) -> Self {
        let f = a.field();
        Mat2 { a: a.clone(), b: Poly::one(f), c: Poly::one(f), d: Poly::zero(f) }
    }

    /// `M_{(a_0..a_n)} = [[p_n, p_{n-1}], [q_n, q_{n-1}]]`.
    pub fn word(f: &F, w: &[Poly<F>]) -> Self {
        w.iter().fold(Self::identity(f), |m, a| m.mul(&Self::quotient(a)))
    }

    pub fn mul(&self, o: &Self) -> Self {
        Mat2 {
            a: &(&self.a * &o.a) + &(&self.b * &o.c),
            b: &(&self.a * &o.b) + &(&self.b * &o.d),
            c: &(&self.c * &o.a) + &(&self.d * &o.c),
            d: &(&self.c * &o.b) + &(&self.d * &o.d),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::identity(self.a.field());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn transpose(&self) -> Self {
        Mat2 { a: self.a.clone(), b: self.c.clone(), c: self.b.clone(), d: self.d.clone() }
    }

    pub fn det(&self) -> Poly<F> {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn trace(&self) -> Poly<F> {
        &self.a + &self.d
    }

    /// `tr^2 - 4 det`.
    pub fn discriminant(&self) -> Poly<F> {
        let t = self.trace();
        let four = self.a.field().from_i64(4);
        &(&t * &t) - &self.det().scale(&four)
    }
}

/// `C_n(a_1..a_n)`; the empty continuant is 1.
pub fn continuant<F: Field>(f: &F, seq: &[Poly<F>]) -> Poly<F> {
    let (mut prev, mut cur) = (Poly::zero(f), Poly::one(f));
    for a in seq {
        let next = &(a * &cur) + &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `(p_n, q_n)` of a finite word; fails when the denominator vanishes.
pub fn cf_value<F: Field>(f: &F, seq: &[Poly<F>]) -> Result<(Poly<F>, Poly<F>)> {
    if seq.is_empty() {
        return Err(Error::Precondition("empty continued fraction".into()));
    }
    let p = continuant(f, seq);
    let q = continuant(f, &seq[1..]);
    if q.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok((p, q))
}

/// Regular expansion of `a / b` by the Euclidean algorithm.
pub fn expand_rational<F: Field>(a: &Poly<F>, b: &Poly<F>, budget: usize) -> Result<Expansion<F>> {
    let f = a.field();
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let mut e = Expansion::from_quotients(f, Vec::new(), false, false);
    let (mut x, mut y) = (a.clone(), b.clone());
    while e.len() < budget {
        let (qt, r) = x.divrem(&y)?;
        e.push(qt);
        if r.is_zero() {
            e.terminated = true;
            return Ok(e);
        }
        x = y;
        y = r;
    }
    e.budget_exhausted = true;
    Ok(e)
}

/// Expand a stream for at most `budget` steps.
///
/// Rational streams use Euclid, surd streams the exact surd recurrence, and
/// anything else repeated inversion of fractional parts.
pub fn cf_expand<F: Field>(alpha: &LaurentStream<F>, budget: usize) -> Result<Expansion<F>> {
    if budget == 0 {
        return Err(Error::Precondition("budget must be at least 1".into()));
    }
    if let Some((a, b)) = alpha.as_rational() {
        return expand_rational(&a, &b, budget);
    }
    if let Some((r, s, d, root)) = alpha.as_surd() {
        let st = crate::surd::Surd::new(&r, &s, &d, &root)?;
        return Ok(st.expand(budget)?.expansion);
    }
    expand_stream(alpha, budget, DEFAULT_SCAN)
}

/// Stream-only expansion; a fractional part with no nonzero coefficient in
/// `scan` positions stops the run as budget exhaustion, never as termination.
pub fn expand_stream<F: Field>(alpha: &LaurentStream<F>, budget: usize, scan: usize) -> Result<Expansion<F>> {
    let f = alpha.field();
    let mut e = Expansion::from_quotients(f, Vec::new(), false, false);
    let mut cur = alpha.clone();
    while e.len() < budget {
        let (a, frac) = cur.poly_part();
        e.push(a);
        if frac.is_zero_kind() {
            e.terminated = true;
            return Ok(e);
        }
        match frac.inverse(scan) {
            Ok(next) => cur = next,
            Err(_) => {
                e.budget_exhausted = true;
                return Ok(e);
            }
        }
    }
    e.budget_exhausted = true;
    Ok(e)
}

/// Outcome of [`is_convergent`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Convergence {
    pub convergent: bool,
    /// `ord(p - alpha q) - deg q` when known; `None` when `p/q = alpha` or
    /// the leading term lies beyond the scan.
    pub next_degree: Option<i64>,
}

/// Decide `ord(p - alpha q) > deg q`.
pub fn is_convergent<F: Field>(p: &Poly<F>, q: &Poly<F>, alpha: &LaurentStream<F>, scan: usize) -> Result<Convergence> {
    if q.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if !p.is_coprime(q) {
        return Err(Error::Precondition("p and q are not coprime".into()));
    }
    let dq = q.deg_i();
    let err = match alpha.as_rational() {
        Some((a, b)) => LaurentStream::from_rational(&(&(p * &b) - &(q * &a)), &b)?,
        None => LaurentStream::from_poly(p).sub(&alpha.mul_poly(q)),
    };
    if !err.vanishes_from(-dq) {
        return Ok(Convergence { convergent: false, next_degree: None });
    }
    let next = err.order(scan).map(|o| o - dq);
    Ok(Convergence { convergent: true, next_degree: next })
}

fn is_regular_entry<F: Field>(a: &Poly<F>) -> bool {
    a.deg().unwrap_or(0) >= 1
}

/// Turn a word with zero or constant entries (beyond index 0) into the
/// regular expansion of the same value.
///
/// `[.., x, 0, y, ..] -> [.., x + y, ..]`; a trailing `[.., w, x, 0]` drops to
/// `[.., w]`; a constant `b` at index `i >= 1` is absorbed as
/// `[.., x + 1/b, -b^2 a_{i+1} - b, -b^-2 a_{i+2}, -b^2 a_{i+3}, ..]`.
pub fn normalize_to_regular<F: Field>(f: &F, seq: &[Poly<F>], budget: usize) -> Result<Expansion<F>> {
    for i in 1..seq.len().saturating_sub(1) {
        let (x, y) = (&seq[i], &seq[i + 1]);
        if x.deg() == Some(0) && y.deg() == Some(0) {
            let s = f.add(&f.mul(&x.lead(), &y.lead()), &f.one());
            if f.is_zero(&s) {
                return Err(Error::Divergent(format!("constants {x}, {y} at positions {i}, {}", i + 1)));
            }
        }
    }
    let mut w: Vec<Poly<F>> = seq.to_vec();
    let mut steps = 0usize;
    loop {
        let Some(i) = (1..w.len()).find(|&i| !is_regular_entry(&w[i])) else {
            break;
        };
        steps += 1;
        if steps > budget {
            return Err(Error::BudgetExceeded(format!("normalization needed more than {budget} steps")));
        }
        if w[i].is_zero() {
            if i + 1 < w.len() {
                let merged = &w[i - 1] + &w[i + 1];
                w.splice(i - 1..i + 2, [merged]);
            } else if i >= 2 {
                w.truncate(i - 1);
            } else {
                return Err(Error::DivisionByZero);
            }
            continue;
        }
        let b = w[i].lead();
        let bi = f.inv(&b).expect("nonzero constant");
        let head = &w[i - 1] + &Poly::constant(f, bi.clone());
        if i + 1 == w.len() {
            w.truncate(i - 1);
            w.push(head);
            continue;
        }
        let b2 = f.mul(&b, &b);
        let nb2 = f.neg(&b2);
        let nb2i = f.neg(&f.mul(&bi, &bi));
        let mut tail = Vec::with_capacity(w.len() - i - 1);
        for (k, a) in w[i + 1..].iter().enumerate() {
            tail.push(if k % 2 == 0 { a.scale(&nb2) } else { a.scale(&nb2i) });
        }
        tail[0] = &tail[0] - &Poly::constant(f, b.clone());
        w.truncate(i - 1);
        w.push(head);
        w.extend(tail);
    }
    Ok(Expansion::from_quotients(f, w, true, false))
}

/// Variant for [`fold`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FoldVariant<E> {
    /// `[a_0, w, a, -rev(w)]`.
    Plain,
    /// `[e1 a_0, e1 w + c, e2 rev(w) - c^3]` with `e1^2 = e2^2 = 1`, `c^2 = e1 e2`.
    Signed { e1: E, e2: E, c: E },
}

/// A folded word together with its closed-form value.
#[derive(Clone, Debug)]
pub struct Folded<F: Field> {
    pub word: Vec<Poly<F>>,
    pub num: Poly<F>,
    pub den: Poly<F>,
}

/// Fold `[a_0, w]` around `a` (plain) or around the signed junction.
pub fn fold<F: Field>(f: &F, a0: &Poly<F>, w: &[Poly<F>], a: &Poly<F>, variant: &FoldVariant<F::Elem>) -> Result<Folded<F>> {
    let mut head = vec![a0.clone()];
    head.extend(w.iter().cloned());
    let n = w.len();
    let (pn, qn) = cf_value(f, &head)?;
    let sign = if n.is_multiple_of(2) { f.one() } else { f.neg(&f.one()) };
    match variant {
        FoldVariant::Plain => {
            if a.is_zero() {
                return Err(Error::Precondition("folding around a = 0".into()));
            }
            let mut word = head;
            word.push(a.clone());
            word.extend(w.iter().rev().map(|x| -x));
            let num = &(&(a * &pn) * &qn) + &Poly::constant(f, sign);
            let den = &(a * &qn) * &qn;
            Ok(Folded { word, num, den })
        }
        FoldVariant::Signed { e1, e2, c } => {
            let one = f.one();
            if f.mul(e1, e1) != one || f.mul(e2, e2) != one || f.mul(c, c) != f.mul(e1, e2) {
                return Err(Error::Precondition("need e1^2 = e2^2 = 1 and c^2 = e1 e2".into()));
            }
            if n == 0 {
                return Err(Error::Precondition("signed folding needs a nonempty word".into()));
            }
            let cc = Poly::constant(f, c.clone());
            let c3 = Poly::constant(f, f.mul(c, &f.mul(c, c)));
            let mut word: Vec<Poly<F>> = head.iter().map(|x| x.scale(e1)).collect();
            let last = word.len() - 1;
            word[last] = &word[last] + &cc;
            let mut back: Vec<Poly<F>> = w.iter().rev().map(|x| x.scale(e2)).collect();
            back[0] = &back[0] - &c3;
            word.extend(back);
            let num = &(&pn * &qn).scale(e1) + &Poly::constant(f, f.mul(c, &sign));
            let den = &qn * &qn;
            Ok(Folded { word, num, den })
        }
    }
}

/// Unary transforms of a quotient list.
#[derive(Clone, Debug)]
pub enum Transform<F: Field> {
    AddPoly(Poly<F>),
    ScaleConst(F::Elem),
    Invert,
    /// `x -> x^p` in characteristic `p`.
    Frobenius,
    /// `T -> P` with `deg P >= 1`.
    Substitute(Poly<F>),
}

/// Apply a transform quotient-wise; constants created by inversion are
/// absorbed by [`normalize_to_regular`].
pub fn unary_transform<F: Field>(e: &Expansion<F>, t: &Transform<F>) -> Result<Expansion<F>> {
    let f = &e.field;
    let qs = &e.quotients;
    if qs.is_empty() {
        return Ok(e.clone());
    }
    let mut out: Vec<Poly<F>> = match t {
        Transform::AddPoly(a) => {
            let mut v = qs.clone();
            v[0] = &v[0] + a;
            v
        }
        Transform::ScaleConst(c) => {
            let ci = f.inv(c).ok_or_else(|| Error::Precondition("scaling by zero".into()))?;
            qs.iter().enumerate().map(|(i, a)| a.scale(if i % 2 == 0 { c } else { &ci })).collect()
        }
        Transform::Invert => {
            if qs[0].is_zero() {
                if qs.len() == 1 {
                    return Err(Error::DivisionByZero);
                }
                qs[1..].to_vec()
            } else {
                let mut v = vec![Poly::zero(f)];
                v.extend(qs.iter().cloned());
                v
            }
        }
        Transform::Frobenius => {
            let l = f.characteristic();
            if l == 0 {
                return Err(Error::Precondition("Frobenius needs positive characteristic".into()));
            }
            qs.iter().map(|a| a.pow(l as u32)).collect()
        }
        Transform::Substitute(p) => {
            if p.deg().unwrap_or(0) < 1 {
                return Err(Error::Precondition("substitution needs deg P >= 1".into()));
            }
            qs.iter().map(|a| a.compose(p)).collect()
        }
    };
    if matches!(t, Transform::Invert) && out.len() > 1 && out[1].deg() == Some(0) {
        let norm = normalize_to_regular(f, &out, out.len() + 1)?;
        out = norm.quotients;
    }
    Ok(Expansion::from_quotients(f, out, e.terminated, e.budget_exhausted))
}

/// Which rule produced a transferred convergent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransferCase {
    /// General rule with `A_n = gcd(A, q_n)`, `B_n = gcd(B, p_n)`.
    General,
    /// Linear multiplier, `q_n(lambda) q_{n+1}(lambda) != 0` bridge.
    Bridge,
}

#[derive(Clone, Debug)]
pub struct Transferred<F: Field> {
    pub n: usize,
    pub case: TransferCase,
    /// Normalized so that `v` is monic.
    pub u: Poly<F>,
    pub v: Poly<F>,
    /// Predicted degree of the following quotient of `(A/B) alpha`; `None`
    /// for the final convergent of a terminated expansion.
    pub next_degree: Option<i64>,
}

/// Convergents of `(A/B) alpha` obtained from those of `alpha`, sorted by `deg v`.
pub fn mobius_convergent_transfer<F: Field>(e: &Expansion<F>, a: &Poly<F>, b: &Poly<F>) -> Result<Vec<Transferred<F>>> {
    let f = &e.field;
    if a.is_zero() || b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if !a.is_coprime(b) {
        return Err(Error::Precondition("A and B are not coprime".into()));
    }
    let len = e.len();
    let mut out = Vec::new();
    let (da, db) = (a.deg_i(), b.deg_i());
    for n in 0..len {
        let an = a.gcd(&e.q[n])?;
        let bn = b.gcd(&e.p[n]).unwrap_or_else(|_| Poly::one(f));
        let slack = da + db - 2 * an.deg_i() - 2 * bn.deg_i();
        let next = if n + 1 < len {
            Some(e.quotients[n + 1].deg_i())
        } else if e.terminated {
            None
        } else {
            continue;
        };
        if next.is_some_and(|d| d <= slack) {
            continue;
        }
        let u = &a.div_exact(&an).expect("gcd") * &e.p[n].div_exact(&bn).expect("gcd");
        let v = &b.div_exact(&bn).expect("gcd") * &e.q[n].div_exact(&an).expect("gcd");
        out.push(normalized(n, TransferCase::General, u, v, next.map(|d| d - slack)));
    }
    if a.deg() == Some(1) && b.is_constant() {
        let lambda = f.neg(&f.div(&a.coeff(0), &a.lead()).expect("nonzero"));
        let tl = Poly::linear(f, &lambda);
        for n in 0..len.saturating_sub(1) {
            let (qa, qb) = (e.q[n].eval(&lambda), e.q[n + 1].eval(&lambda));
            if f.is_zero(&qa) || f.is_zero(&qb) {
                continue;
            }
            let u = &e.p[n].scale(&qb) - &e.p[n + 1].scale(&qa);
            let v = (&e.q[n].scale(&qb) - &e.q[n + 1].scale(&qa)).div_exact(&tl).expect("lambda is a root");
            // u/v approximates (T - lambda) alpha; rescale for a general constant B.
            let bi = f.inv(&b.lead()).expect("nonzero");
            let al = a.lead();
            out.push(normalized(n, TransferCase::Bridge, u.scale(&f.mul(&al, &bi)), v, Some(1)));
        }
    }
    out.sort_by_key(|t| (t.v.deg_i(), t.n));
    Ok(out)
}

fn normalized<F: Field>(n: usize, case: TransferCase, u: Poly<F>, v: Poly<F>, next_degree: Option<i64>) -> Transferred<F> {
    let li = v.field().inv(&v.lead()).expect("v nonzero");
    Transferred { n, case, u: u.scale(&li), v: v.scale(&li), next_degree }
}

/// A tail match `b_{m+k} = c^{(-1)^k} a_{n+k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailMatch<E> {
    pub n: usize,
    pub m: usize,
    pub c: E,
    pub overlap: usize,
}

/// `c` with `y = c x`, when `x, y` are proportional nonzero polynomials.
pub fn proportional<F: Field>(x: &Poly<F>, y: &Poly<F>) -> Option<F::Elem> {
    let f = x.field();
    if x.is_zero() || x.deg() != y.deg() {
        return None;
    }
    let c = f.div(&y.lead(), &x.lead())?;
    (x.scale(&c) == *y).then_some(c)
}

/// Search `(n, m)` by increasing `n + m`, then `n`, for tails of `e1`, `e2`
/// agreeing under alternating scaling on at least `min_overlap` quotients.
pub fn tail_equivalence<F: Field>(e1: &Expansion<F>, e2: &Expansion<F>, min_overlap: usize) -> Option<TailMatch<F::Elem>> {
    let f = &e1.field;
    let (l1, l2) = (e1.len(), e2.len());
    let min_overlap = min_overlap.max(1);
    for s in 0..(l1 + l2) {
        for n in 0..=s.min(l1) {
            let m = s - n;
            if n >= l1 || m >= l2 {
                continue;
            }
            let overlap = (l1 - n).min(l2 - m);
            if overlap < min_overlap {
                continue;
            }
            let Some(c) = proportional(&e1.quotients[n], &e2.quotients[m]) else {
                continue;
            };
            let ci = f.inv(&c).expect("nonzero");
            let ok = (0..overlap).all(|k| {
                let s = if k % 2 == 0 { &c } else { &ci };
                e1.quotients[n + k].scale(s) == e2.quotients[m + k]
            });
            if ok {
                return Some(TailMatch { n, m, c, overlap });
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_poly, PrimeField, Rationals};

    fn qp(s: &str) -> Poly<Rationals> {
        parse_poly(s, &Rationals).unwrap()
    }

    #[test]
    fn euclid_example() {
        let e = expand_rational(&qp("T^5+1"), &qp("T^4+T^2+1"), 50).unwrap();
        let want: Vec<_> = ["T", "-T", "-T^2+T-2", "1/3*T+1/3"].iter().map(|s| qp(s)).collect();
        assert_eq!(e.quotients, want);
        assert!(e.terminated);
    }

    #[test]
    fn value_of_word() {
        let w: Vec<_> = ["T", "T+1", "T-2", "T^2"].iter().map(|s| qp(s)).collect();
        let (p, q) = cf_value(&Rationals, &w).unwrap();
        assert_eq!(p, qp("T^5-T^4-T^2+T+1"));
        assert_eq!(q, qp("T^4-T^3-T^2+T+1"));
    }

    #[test]
    fn normalize_example() {
        let w: Vec<_> = ["T^2", "0", "0", "1", "T", "-1", "T", "T", "-T"].iter().map(|s| qp(s)).collect();
        let e = normalize_to_regular(&Rationals, &w, 100).unwrap();
        let want: Vec<_> = ["T^2+1", "-T", "T-1", "T", "-T"].iter().map(|s| qp(s)).collect();
        assert_eq!(e.quotients, want);
    }

    #[test]
    fn normalize_divergent() {
        let w: Vec<_> = ["T", "1", "-1", "T"].iter().map(|s| qp(s)).collect();
        assert!(matches!(normalize_to_regular(&Rationals, &w, 10), Err(Error::Divergent(_))));
    }

    #[test]
    fn transfer_matches_direct_product() {
        let w: Vec<_> = ["T", "T+1", "T-2", "T^2"].iter().map(|s| qp(s)).collect();
        let e = Expansion::from_quotients(&Rationals, w, true, false);
        let got = mobius_convergent_transfer(&e, &qp("T"), &qp("1")).unwrap();
        let (p, q) = e.value().unwrap();
        let direct = expand_rational(&(&qp("T") * &p), &q, 50).unwrap();
        let want: Vec<_> = (0..direct.len()).map(|n| direct.monic_continuant(n)).collect();
        let have: Vec<_> = got.iter().map(|t| (t.u.clone(), t.v.clone())).collect();
        assert_eq!(have, want);
    }

    #[test]
    fn tail_of_shift() {
        let f = PrimeField::new(7).unwrap();
        let a = parse_poly("T^3+2T+5", &f).unwrap();
        let b = parse_poly("T^5+T+1", &f).unwrap();
        let e1 = expand_rational(&a, &b, 50).unwrap();
        let e2 = expand_rational(&(&a + &(&b * &Poly::t(&f))), &b, 50).unwrap();
        let m = tail_equivalence(&e1, &e2, 1).unwrap();
        assert_eq!((m.n, m.m, m.c), (1, 1, 1));
    }

    #[test]
    fn signed_fold_closed_form() {
        let w: Vec<_> = ["T-1", "T+1", "2T"].iter().map(|s| qp(s)).collect();
        let one = num_rational::BigRational::from_integer(1.into());
        let v = FoldVariant::Signed { e1: one.clone(), e2: one.clone(), c: one };
        let fo = fold(&Rationals, &qp("T"), &w, &qp("1"), &v).unwrap();
        let (p, q) = cf_value(&Rationals, &fo.word).unwrap();
        assert_eq!(&p * &fo.den, &q * &fo.num);
    }
}
