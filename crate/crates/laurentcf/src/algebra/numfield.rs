//! Simple extensions Q[x]/(m(x)).

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::field::{rational_sqrt, Field, Rationals};
use super::poly::Poly;
use crate::error::{Error, Result};

/// How irreducibility of the minimal polynomial was established.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    /// Eisenstein at the given prime, applied to `m(x + shift)` or its reversal.
    Eisenstein { prime: u64, shift: i64, reversed: bool },
    /// Degree at most 3 without rational roots.
    NoRationalRoots,
    Linear,
    /// Not verified; the caller vouches for it.
    Trusted,
}

#[derive(Debug)]
struct Inner {
    /// Monic minimal polynomial.
    m: Poly<Rationals>,
    irreducibility: Irreducibility,
    spec: String,
}

/// Q[x]/(m(x)); elements are residues of degree `< deg m`.
#[derive(Clone, Debug)]
pub struct NumberField {
    inner: Arc<Inner>,
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.inner.m == other.inner.m
    }
}

/// Residue polynomial in `x`, little-endian, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NfElem(pub Vec<BigRational>);

impl NumberField {
    /// `m` must have degree at least 1; `spec` is the echoed text of `m`.
    pub fn new(m: Poly<Rationals>, spec: &str) -> Result<Self> {
        match m.deg() {
            None | Some(0) => {
                return Err(Error::Parse(format!("minimal polynomial {spec} is constant")))
            }
            _ => {}
        }
        let irreducibility = check_irreducible(&m);
        Ok(NumberField {
            inner: Arc::new(Inner { m: m.monic(), irreducibility, spec: spec.to_string() }),
        })
    }

    pub fn degree(&self) -> usize {
        self.inner.m.deg().unwrap_or(0)
    }

    pub fn minimal_poly(&self) -> &Poly<Rationals> {
        &self.inner.m
    }

    pub fn irreducibility(&self) -> &Irreducibility {
        &self.inner.irreducibility
    }

    pub fn trusted(&self) -> bool {
        self.inner.irreducibility == Irreducibility::Trusted
    }

    fn to_poly(&self, a: &NfElem) -> Poly<Rationals> {
        Poly::new(&Rationals, a.0.clone())
    }

    fn from_poly(&self, p: &Poly<Rationals>) -> NfElem {
        let r = p.rem(&self.inner.m).expect("m nonzero");
        NfElem(r.into_coeffs())
    }

    /// The rational value of an element lying in Q.
    pub fn as_rational(&self, a: &NfElem) -> Option<BigRational> {
        match a.0.len() {
            0 => Some(BigRational::zero()),
            1 => Some(a.0[0].clone()),
            _ => None,
        }
    }

    /// Square root in a quadratic extension, by solving for `u + v x`.
    fn quadratic_sqrt(&self, a: &NfElem) -> Option<NfElem> {
        let m = &self.inner.m;
        let c0 = m.coeff(0);
        let c1 = m.coeff(1);
        let k0 = a.0.first().cloned().unwrap_or_else(BigRational::zero);
        let k1 = a.0.get(1).cloned().unwrap_or_else(BigRational::zero);
        let two = BigRational::from_integer(2.into());
        let four = BigRational::from_integer(4.into());
        // (u + v x)^2 = (u^2 - c0 v^2) + (2uv - c1 v^2) x with x^2 = -c1 x - c0.
        // Eliminating u gives a quadratic in w = v^2.
        let qa = &c1 * &c1 - &four * &c0;
        let qb = &two * &k1 * &c1 - &four * &k0;
        let qc = &k1 * &k1;
        let mut ws = Vec::new();
        if qa.is_zero() {
            if !qb.is_zero() {
                ws.push(-&qc / &qb);
            }
        } else {
            let disc = &qb * &qb - &four * &qa * &qc;
            if let Some(sd) = rational_sqrt(&disc) {
                ws.push((-&qb + &sd) / (&two * &qa));
                ws.push((-&qb - &sd) / (&two * &qa));
            }
        }
        let mut found = Vec::new();
        for w in ws {
            if w.is_zero() {
                continue;
            }
            if let Some(v) = rational_sqrt(&w) {
                let u = (&k1 + &c1 * &w) / (&two * &v);
                let cand = self.from_poly(&Poly::new(&Rationals, vec![u, v]));
                if self.mul(&cand, &cand) == *a {
                    found.push(cand);
                }
            }
        }
        found.into_iter().map(|r| self.canonical_root(r)).next()
    }

    /// Of `±r`, the one whose top nonzero coordinate is positive.
    fn canonical_root(&self, r: NfElem) -> NfElem {
        match r.0.last() {
            Some(c) if c.is_negative() => self.neg(&r),
            _ => r,
        }
    }
}

impl Field for NumberField {
    type Elem = NfElem;

    fn zero(&self) -> NfElem {
        NfElem(Vec::new())
    }
    fn one(&self) -> NfElem {
        NfElem(vec![BigRational::one()])
    }
    fn add(&self, a: &NfElem, b: &NfElem) -> NfElem {
        NfElem((&self.to_poly(a) + &self.to_poly(b)).into_coeffs())
    }
    fn sub(&self, a: &NfElem, b: &NfElem) -> NfElem {
        NfElem((&self.to_poly(a) - &self.to_poly(b)).into_coeffs())
    }
    fn neg(&self, a: &NfElem) -> NfElem {
        NfElem(a.0.iter().map(|c| -c).collect())
    }
    fn mul(&self, a: &NfElem, b: &NfElem) -> NfElem {
        self.from_poly(&(&self.to_poly(a) * &self.to_poly(b)))
    }
    fn inv(&self, a: &NfElem) -> Option<NfElem> {
        if a.0.is_empty() {
            return None;
        }
        let (g, u, _) = self.to_poly(a).xgcd(&self.inner.m).ok()?;
        if !g.is_one() {
            // Only possible when m is reducible (trusted flag was wrong).
            return None;
        }
        Some(self.from_poly(&u))
    }
    fn is_zero(&self, a: &NfElem) -> bool {
        a.0.is_empty()
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn from_rational(&self, q: &BigRational) -> Option<NfElem> {
        Some(if q.is_zero() { NfElem(Vec::new()) } else { NfElem(vec![q.clone()]) })
    }
    fn sqrt(&self, a: &NfElem) -> Option<NfElem> {
        if let Some(q) = self.as_rational(a) {
            if let Some(r) = rational_sqrt(&q) {
                return self.from_rational(&r);
            }
        }
        if self.degree() == 2 {
            return self.quadratic_sqrt(a);
        }
        None
    }
    fn size(&self) -> Option<u64> {
        None
    }
    fn elements(&self) -> Vec<NfElem> {
        Vec::new()
    }
    fn fmt_elem(&self, a: &NfElem) -> String {
        let p = Poly::new(&Rationals, a.0.clone());
        p.fmt_with("x")
    }
    fn spec(&self) -> String {
        format!("Q[x]/({})", self.inner.spec)
    }
    fn generator(&self) -> Option<NfElem> {
        Some(self.from_poly(&Poly::t(&Rationals)))
    }
}

/// Primitive integer polynomial proportional to `m`.
fn integer_content_free(m: &Poly<Rationals>) -> Vec<BigInt> {
    let mut l = BigInt::one();
    for c in m.coeffs() {
        l = l.lcm(c.denom());
    }
    let ints: Vec<BigInt> = m.coeffs().iter().map(|c| (c * &l).to_integer()).collect();
    let mut g = BigInt::zero();
    for c in &ints {
        g = g.gcd(c);
    }
    ints.into_iter().map(|c| c / &g).collect()
}

fn small_prime_factors(n: &BigInt) -> Vec<u64> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = 2u64;
    while p < 100_000 && !n.is_one() && !n.is_zero() {
        let pb = BigInt::from(p);
        if (&n % &pb).is_zero() {
            out.push(p);
            while (&n % &pb).is_zero() {
                n /= &pb;
            }
        }
        p += 1;
    }
    if !n.is_one() && !n.is_zero() {
        if let Some(v) = n.to_u64() {
            out.push(v);
        }
    }
    out
}

fn eisenstein_prime(c: &[BigInt]) -> Option<u64> {
    let n = c.len() - 1;
    let mut g = BigInt::zero();
    for x in &c[..n] {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return None;
    }
    for p in small_prime_factors(&g) {
        let pb = BigInt::from(p);
        if !(&c[n] % &pb).is_zero() && !(&c[0] % (&pb * &pb)).is_zero() {
            return Some(p);
        }
    }
    None
}

fn has_rational_root(c: &[BigInt]) -> bool {
    let n = c.len() - 1;
    if c[0].is_zero() {
        return true;
    }
    let divisors = |x: &BigInt| -> Option<Vec<BigInt>> {
        let x = x.abs().to_u64()?;
        if x > 10_000_000 {
            return None;
        }
        Some((1..=x).filter(|d| x % d == 0).map(BigInt::from).collect())
    };
    let (Some(num), Some(den)) = (divisors(&c[0]), divisors(&c[n])) else {
        // Too large to screen: treat as possibly having a root.
        return true;
    };
    for a in &num {
        for b in &den {
            for s in [a.clone(), -a.clone()] {
                // b^n m(s/b) over the integers.
                let mut val = BigInt::zero();
                for (i, ci) in c.iter().enumerate() {
                    val += ci * pow_big(&s, i as u32) * pow_big(b, (n - i) as u32);
                }
                if val.is_zero() {
                    return true;
                }
            }
        }
    }
    false
}

fn pow_big(b: &BigInt, e: u32) -> BigInt {
    num_traits::pow(b.clone(), e as usize)
}

fn check_irreducible(m: &Poly<Rationals>) -> Irreducibility {
    let n = m.deg().unwrap_or(0);
    if n == 1 {
        return Irreducibility::Linear;
    }
    for shift in [0i64, 1, -1, 2, -2, 3, -3] {
        let sh = Poly::new(&Rationals, vec![BigRational::from_integer(shift.into()), BigRational::one()]);
        let ms = m.compose(&sh);
        let c = integer_content_free(&ms);
        if let Some(p) = eisenstein_prime(&c) {
            return Irreducibility::Eisenstein { prime: p, shift, reversed: false };
        }
        let mut rc = c.clone();
        rc.reverse();
        if !rc[rc.len() - 1].is_zero() {
            if let Some(p) = eisenstein_prime(&rc) {
                return Irreducibility::Eisenstein { prime: p, shift, reversed: true };
            }
        }
    }
    if n <= 3 && !has_rational_root(&integer_content_free(m)) {
        return Irreducibility::NoRationalRoots;
    }
    Irreducibility::Trusted
}
