#![allow(dead_code)]

use laurentcf::algebra::parse_poly;
use laurentcf::{Field, Poly};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

pub fn poly<F: Field>(f: &F, s: &str) -> Poly<F> {
    parse_poly(s, f).unwrap_or_else(|e| panic!("{s}: {e}"))
}

pub fn polys<F: Field>(f: &F, ss: &[&str]) -> Vec<Poly<F>> {
    ss.iter().map(|s| poly(f, s)).collect()
}

/// A small coefficient; over Q sometimes a fraction with denominator 2 or 3.
pub fn rand_elem<F: Field, R: Rng>(f: &F, rng: &mut R) -> F::Elem {
    let n: i64 = rng.gen_range(-4..=4);
    if f.size().is_none() && rng.gen_bool(0.25) {
        let d: i64 = rng.gen_range(2..=3);
        return f.from_rational(&BigRational::new(BigInt::from(n), BigInt::from(d))).expect("Q accepts fractions");
    }
    f.from_i64(n)
}

/// Random polynomial of exact degree `deg`.
pub fn rand_poly<F: Field, R: Rng>(f: &F, rng: &mut R, deg: usize) -> Poly<F> {
    let mut c: Vec<F::Elem> = (0..=deg).map(|_| rand_elem(f, rng)).collect();
    while f.is_zero(&c[deg]) {
        c[deg] = rand_elem(f, rng);
    }
    Poly::new(f, c)
}

/// `[a_0, a_1, .., a_n]` with `1 <= n <= max_len - 1`, `deg a_i` in `1..=max_deg` for `i >= 1`.
pub fn rand_word<F: Field, R: Rng>(f: &F, rng: &mut R, max_len: usize, max_deg: usize) -> Vec<Poly<F>> {
    let n = rng.gen_range(2..=max_len);
    let a0_deg = rng.gen_range(0..=max_deg);
    let mut w = vec![rand_poly(f, rng, a0_deg)];
    for _ in 1..n {
        let d = rng.gen_range(1..=max_deg);
        w.push(rand_poly(f, rng, d));
    }
    w
}

/// Laurent order at infinity of `num/den`: `deg den - deg num`.
pub fn ord_of<F: Field>(num: &Poly<F>, den: &Poly<F>) -> i64 {
    den.deg_i() - num.deg_i()
}
