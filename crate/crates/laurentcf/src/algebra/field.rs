//! Exact coefficient fields.
//!
//! A [`Field`] is a small context value (cheap to clone) that performs the
//! arithmetic on its element type. Fields with a runtime modulus cannot hand
//! out `zero()` without context, which is why elements do not implement the
//! `num-traits` algebra traits themselves.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub trait Field: Clone + Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Send + Sync + 'static;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `None` exactly for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// 0 for fields of characteristic zero.
    fn characteristic(&self) -> u64;
    /// Image of a rational number; `None` when its denominator vanishes in the field.
    fn from_rational(&self, q: &BigRational) -> Option<Self::Elem>;
    /// Canonical square root, or `None` when `a` is not a square.
    fn sqrt(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// Number of elements for finite fields.
    fn size(&self) -> Option<u64>;
    /// All elements in residue order (finite fields only, empty otherwise).
    fn elements(&self) -> Vec<Self::Elem>;
    fn fmt_elem(&self, a: &Self::Elem) -> String;
    /// The string accepted by [`crate::algebra::parse_field`] for this field.
    fn spec(&self) -> String;

    /// The class of `x` in a simple extension.
    fn generator(&self) -> Option<Self::Elem> {
        None
    }

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_rational(&BigRational::from_integer(BigInt::from(n)))
            .expect("integers always map into a field")
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// `a^n` for a possibly negative exponent; `None` for `0^n`, `n < 0`.
    fn powi(&self, a: &Self::Elem, n: i64) -> Option<Self::Elem> {
        if n >= 0 {
            Some(self.pow(a, n as u64))
        } else {
            self.inv(a).map(|ai| self.pow(&ai, n.unsigned_abs()))
        }
    }

    /// Multiplicative order of a nonzero element, searched up to `bound`.
    fn mult_order(&self, a: &Self::Elem, bound: u64) -> Option<u64> {
        if self.is_zero(a) {
            return None;
        }
        let mut x = a.clone();
        for k in 1..=bound {
            if self.is_one(&x) {
                return Some(k);
            }
            x = self.mul(&x, a);
        }
        None
    }
}

/// The rational numbers, elements are reduced `BigRational`s.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn from_rational(&self, q: &BigRational) -> Option<BigRational> {
        Some(q.clone())
    }
    fn sqrt(&self, a: &BigRational) -> Option<BigRational> {
        rational_sqrt(a)
    }
    fn size(&self) -> Option<u64> {
        None
    }
    fn elements(&self) -> Vec<BigRational> {
        Vec::new()
    }
    fn fmt_elem(&self, a: &BigRational) -> String {
        a.to_string()
    }
    fn spec(&self) -> String {
        "Q".to_string()
    }
}

/// Nonnegative square root of a rational square.
pub fn rational_sqrt(a: &BigRational) -> Option<BigRational> {
    if a.is_negative() {
        return None;
    }
    let n = exact_isqrt(a.numer())?;
    let d = exact_isqrt(a.denom())?;
    Some(BigRational::new(n, d))
}

fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

/// The prime field F_p. Elements are residues in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        if p >= 1 << 62 {
            return Err(Error::Unsupported(format!("modulus {p} too large")));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Residue of an integer.
    pub fn reduce_int(&self, n: &BigInt) -> u64 {
        let m = BigInt::from(self.p);
        let r = n.mod_floor(&m);
        r.to_u64().expect("residue fits")
    }

    fn mulmod(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    fn powmod(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mulmod(acc, a);
            }
            a = self.mulmod(a, a);
            e >>= 1;
        }
        acc
    }

    /// Tonelli-Shanks; returns some root of a quadratic residue.
    fn tonelli(&self, a: u64) -> Option<u64> {
        let p = self.p;
        if a == 0 {
            return Some(0);
        }
        if p == 2 {
            return Some(a);
        }
        if self.powmod(a, (p - 1) / 2) != 1 {
            return None;
        }
        let mut q = p - 1;
        let mut s = 0;
        while q.is_multiple_of(2) {
            q /= 2;
            s += 1;
        }
        let mut z = 2;
        while self.powmod(z, (p - 1) / 2) != p - 1 {
            z += 1;
        }
        let mut m = s;
        let mut c = self.powmod(z, q);
        let mut t = self.powmod(a, q);
        let mut r = self.powmod(a, q.div_ceil(2));
        while t != 1 {
            let mut i = 0;
            let mut tt = t;
            while tt != 1 {
                tt = self.mulmod(tt, tt);
                i += 1;
            }
            let b = self.powmod(c, 1 << (m - i - 1));
            m = i;
            c = self.mulmod(b, b);
            t = self.mulmod(t, c);
            r = self.mulmod(r, b);
        }
        Some(r)
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.mulmod(*a, *b)
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(self.powmod(*a, self.p - 2))
        }
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn from_rational(&self, q: &BigRational) -> Option<u64> {
        let d = self.reduce_int(q.denom());
        let n = self.reduce_int(q.numer());
        self.inv(&d).map(|di| self.mulmod(n, di))
    }
    fn from_i64(&self, n: i64) -> u64 {
        (n as i128).rem_euclid(self.p as i128) as u64
    }
    fn sqrt(&self, a: &u64) -> Option<u64> {
        self.tonelli(*a).map(|r| r.min(self.neg(&r)))
    }
    fn size(&self) -> Option<u64> {
        Some(self.p)
    }
    fn elements(&self) -> Vec<u64> {
        (0..self.p).collect()
    }
    fn fmt_elem(&self, a: &u64) -> String {
        a.to_string()
    }
    fn spec(&self) -> String {
        format!("F{}", self.p)
    }
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut a: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, a);
            }
            a = mulmod(a, a);
            e >>= 1;
        }
        acc
    };
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Exponent of the prime `p` in a nonzero integer.
pub fn int_valuation(n: &BigInt, p: u64) -> i64 {
    debug_assert!(!n.is_zero());
    let pb = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&pb);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// p-adic valuation of a nonzero rational.
pub fn rational_valuation(q: &BigRational, p: u64) -> i64 {
    int_valuation(q.numer(), p) - int_valuation(q.denom(), p)
}

