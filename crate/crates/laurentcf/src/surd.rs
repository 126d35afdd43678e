//! Quadratic irrationalities `(r + sqrt(D)) / s` with `s | r^2 - D`.
//!
//! The complete quotients of a surd are again surds on the same `D`, so the
//! expansion runs on exact `(r, s)` pairs: `a = quo(r + delta, s)`,
//! `r' = a s - r`, `s' = (D - r'^2) / s`, where `delta = floor(sqrt D)`.

use std::collections::HashMap;

use crate::algebra::{Field, Poly, PrimeField, Rationals};
use crate::contfrac::{proportional, Expansion};
use crate::error::{Error, Result};
use crate::laurent::LaurentStream;

#[derive(Clone, Debug)]
pub struct Surd<F: Field> {
    pub r: Poly<F>,
    pub s: Poly<F>,
    pub d: Poly<F>,
    /// Leading coefficient of the chosen `sqrt(D)`.
    pub root: F::Elem,
    delta: Poly<F>,
}

/// Polynomial part of `sqrt(d)` led by `root`; fails when `d` is not in the
/// admissible class (even positive degree, square lead, not a square).
pub fn sqrt_floor<F: Field>(d: &Poly<F>, root: &F::Elem) -> Result<Poly<F>> {
    if d.deg().unwrap_or(0) == 0 {
        return Err(Error::Precondition(format!("{d} must have positive degree")));
    }
    let out = LaurentStream::sqrt_with_root(d, root)?;
    if out.exact.is_some() {
        return Err(Error::Precondition(format!("{d} is a perfect square")));
    }
    Ok(out.stream.floor())
}

/// Canonical square root of the leading coefficient of `d`.
pub fn canonical_root<F: Field>(d: &Poly<F>) -> Result<F::Elem> {
    let f = d.field();
    f.sqrt(&d.lead())
        .ok_or_else(|| Error::Precondition(format!("leading coefficient of {d} is not a square in {}", f.spec())))
}

impl<F: Field> Surd<F> {
    pub fn new(r: &Poly<F>, s: &Poly<F>, d: &Poly<F>, root: &F::Elem) -> Result<Self> {
        if s.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let delta = sqrt_floor(d, root)?;
        if !s.divides(&(&(r * r) - d)) {
            return Err(Error::Precondition(format!("s = {s} does not divide r^2 - D")));
        }
        Ok(Surd { r: r.clone(), s: s.clone(), d: d.clone(), root: root.clone(), delta })
    }

    /// `sqrt(D)` itself, with the canonical root.
    pub fn sqrt(d: &Poly<F>) -> Result<Self> {
        let f = d.field();
        Self::new(&Poly::zero(f), &Poly::one(f), d, &canonical_root(d)?)
    }

    /// Represent `(A + B sqrt(D0)) / C` as `(r + sqrt(D)) / s` with
    /// `r = mA`, `s = mC`, `D = m^2 B^2 D0`, `m = C / gcd(C, A^2 - B^2 D0)`.
    pub fn from_quadratic(a: &Poly<F>, b: &Poly<F>, c: &Poly<F>, d0: &Poly<F>, root0: &F::Elem) -> Result<Self> {
        let f = a.field();
        if c.is_zero() || b.is_zero() {
            return Err(Error::Precondition("B and C must be nonzero".into()));
        }
        sqrt_floor(d0, root0)?;
        let n = &(a * a) - &(&(b * b) * d0);
        let g = c.gcd(&n)?;
        let m = c.div_exact(&g).expect("gcd divides");
        let mb = &m * b;
        let d = &(&mb * &mb) * d0;
        let root = f.mul(&mb.lead(), root0);
        Self::new(&(&m * a), &(&m * c), &d, &root)
    }

    pub fn field(&self) -> &F {
        self.r.field()
    }

    pub fn delta(&self) -> &Poly<F> {
        &self.delta
    }

    /// Half the degree of `D`.
    pub fn half_degree(&self) -> usize {
        self.d.deg().expect("nonzero") / 2
    }

    pub fn floor(&self) -> Poly<F> {
        (&self.r + &self.delta).divrem(&self.s).expect("s nonzero").0
    }

    /// The complete quotient after subtracting `a` and inverting.
    pub fn step(&self, a: &Poly<F>) -> Result<Self> {
        let r = &(a * &self.s) - &self.r;
        let s = (&self.d - &(&r * &r))
            .div_exact(&self.s)
            .ok_or_else(|| Error::Invariant("inexact division in the surd step".into()))?;
        if s.is_zero() {
            return Err(Error::Invariant("zero denominator in the surd step".into()));
        }
        Ok(Surd { r, s, d: self.d.clone(), root: self.root.clone(), delta: self.delta.clone() })
    }

    /// `ord(alpha) < 0` and `ord(alpha') > 0`.
    pub fn is_reduced(&self) -> bool {
        let ds = self.s.deg_i();
        (&self.r + &self.delta).deg_i() > ds && (&self.r - &self.delta).deg_i() < ds
    }

    /// `(r - sqrt D)/s`, written as `(-r + sqrt D)/(-s)`.
    pub fn conjugate(&self) -> Self {
        Surd { r: -&self.r, s: -&self.s, d: self.d.clone(), root: self.root.clone(), delta: self.delta.clone() }
    }

    /// `N(alpha) = (r^2 - D) / s^2` as an unreduced fraction.
    pub fn norm(&self) -> (Poly<F>, Poly<F>) {
        (&(&self.r * &self.r) - &self.d, &self.s * &self.s)
    }

    pub fn stream(&self) -> LaurentStream<F> {
        LaurentStream::surd(&self.r, &self.s, &self.d, &self.root).expect("valid surd")
    }

    fn key(&self) -> (Poly<F>, Poly<F>) {
        (self.r.clone(), self.s.monic())
    }

    /// Run `budget` steps.
    pub fn expand(&self, budget: usize) -> Result<SurdExpansion<F>> {
        let f = self.field();
        let mut e = Expansion::from_quotients(f, Vec::new(), false, true);
        let mut states = Vec::with_capacity(budget);
        let mut cur = self.clone();
        for i in 0..budget {
            let a = cur.floor();
            states.push((cur.r.clone(), cur.s.clone()));
            e.push(a.clone());
            if i + 1 < budget {
                cur = cur.step(&a)?;
            }
        }
        Ok(SurdExpansion { expansion: e, states, d: self.d.clone() })
    }
}

/// Expansion plus the `(r_n, s_n)` state of every complete quotient.
#[derive(Clone, Debug)]
pub struct SurdExpansion<F: Field> {
    pub expansion: Expansion<F>,
    pub states: Vec<(Poly<F>, Poly<F>)>,
    pub d: Poly<F>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PeriodStatus {
    Periodic,
    QuasiPeriodicAperiodic,
    NoneFound,
}

#[derive(Clone, Debug)]
pub struct PeriodInfo<E> {
    pub status: PeriodStatus,
    pub preperiod: usize,
    pub quasi_period: Option<usize>,
    /// `c` with `alpha_{n+m} = c alpha_n`.
    pub multiplier: Option<E>,
    pub period: Option<usize>,
    /// The period was confirmed by literal recurrence of `(r, s)`.
    pub period_verified: bool,
    pub steps: usize,
}

impl<E> PeriodInfo<E> {
    pub fn none(steps: usize) -> Self {
        PeriodInfo {
            status: PeriodStatus::NoneFound,
            preperiod: 0,
            quasi_period: None,
            multiplier: None,
            period: None,
            period_verified: false,
            steps,
        }
    }
}

/// Period length implied by a quasi-period `m` and multiplier `c`.
pub fn period_from_quasi<F: Field>(f: &F, m: usize, c: &F::Elem) -> Option<usize> {
    if m % 2 == 1 {
        return Some(if f.is_one(c) { m } else { 2 * m });
    }
    let bound = f.size().unwrap_or(64);
    f.mult_order(c, bound).map(|j| j as usize * m)
}

/// Expand and locate the first repetition of a state up to scaling.
pub fn detect_periodicity<F: Field>(alpha: &Surd<F>, budget: usize) -> Result<(SurdExpansion<F>, PeriodInfo<F::Elem>)> {
    let f = alpha.field().clone();
    let mut seen: HashMap<(Poly<F>, Poly<F>), usize> = HashMap::new();
    let mut cur = alpha.clone();
    let mut ex = SurdExpansion {
        expansion: Expansion::from_quotients(&f, Vec::new(), false, false),
        states: Vec::new(),
        d: alpha.d.clone(),
    };
    let mut found = None;
    for i in 0..budget {
        if let Some(&j) = seen.get(&cur.key()) {
            found = Some((j, i));
            break;
        }
        seen.insert(cur.key(), i);
        let a = cur.floor();
        ex.states.push((cur.r.clone(), cur.s.clone()));
        ex.expansion.push(a.clone());
        cur = cur.step(&a)?;
    }
    let Some((n0, n1)) = found else {
        ex.expansion.budget_exhausted = true;
        return Ok((ex, PeriodInfo::none(budget)));
    };
    let m = n1 - n0;
    let c = f.div(&ex.states[n0].1.lead(), &cur.s.lead()).expect("nonzero");
    let period = period_from_quasi(&f, m, &c);
    let mut info = PeriodInfo {
        status: if period.is_some() { PeriodStatus::Periodic } else { PeriodStatus::QuasiPeriodicAperiodic },
        preperiod: n0,
        quasi_period: Some(m),
        multiplier: Some(c),
        period,
        period_verified: false,
        steps: n1,
    };
    // Extend literally through one full period (and one quotient beyond) to
    // confirm alpha_{n0+M} = alpha_{n0}.
    if let Some(big_m) = period {
        let target = n0 + big_m;
        while ex.states.len() < target {
            let a = cur.floor();
            ex.states.push((cur.r.clone(), cur.s.clone()));
            ex.expansion.push(a.clone());
            cur = cur.step(&a)?;
        }
        info.period_verified = cur.r == ex.states[n0].0 && cur.s == ex.states[n0].1;
        ex.states.push((cur.r.clone(), cur.s.clone()));
        ex.expansion.push(cur.floor());
        if !info.period_verified {
            return Err(Error::Invariant(format!("period {big_m} predicted from quasi-period {m} did not recur")));
        }
    }
    Ok((ex, info))
}

/// Structural check for `sqrt D` with quasi-period `m`:
/// `a_m = 2c a_0`, `a_{m-i} = c^{(-1)^i} a_i`, `a_{m+i} = a_{m-i}`, `a_{2m} = 2 a_0`.
pub fn check_sqrt_palindrome<F: Field>(quotients: &[Poly<F>], m: usize) -> bool {
    if quotients.len() < 2 * m + 1 || m == 0 {
        return false;
    }
    let f = quotients[0].field();
    let two_a0 = quotients[0].scale(&f.from_i64(2));
    let Some(c) = proportional(&two_a0, &quotients[m]) else {
        return false;
    };
    let ci = f.inv(&c).expect("nonzero");
    let skew = (1..m).all(|i| quotients[m - i] == quotients[i].scale(if i % 2 == 0 { &c } else { &ci }));
    let pal = (1..m).all(|i| quotients[m + i] == quotients[m - i]);
    skew && pal && quotients[2 * m] == two_a0
}

/// For purely quasi-periodic `alpha = [a_0..a_n]^c`, the predicted opening of
/// the expansion of `alpha'`: `0`, then `-c^{(-1)^{j-1}} a_{n+1-j}` for
/// `j = 1..=m`, then the next block scaled alternately by `c^{(-1)^{n+1}}`.
pub fn conjugate_prediction<F: Field>(quotients: &[Poly<F>], m: usize, c: &F::Elem) -> Vec<Poly<F>> {
    let f = quotients[0].field();
    let ci = f.inv(c).expect("nonzero");
    let n = m - 1;
    let mut out = vec![Poly::zero(f)];
    for j in 1..=m {
        let s = if (j - 1) % 2 == 0 { c } else { &ci };
        out.push(-quotients[n + 1 - j].scale(s));
    }
    let k = if (n + 1).is_multiple_of(2) { c.clone() } else { ci.clone() };
    let ki = f.inv(&k).expect("nonzero");
    for i in 0..m {
        let s = if i % 2 == 0 { &k } else { &ki };
        out.push(out[1 + i].scale(s));
    }
    out
}

#[derive(Clone, Debug)]
pub struct PellSolution<F: Field> {
    pub x: Poly<F>,
    pub y: Poly<F>,
    /// `x^2 - D y^2` after normalization.
    pub unit_value: F::Elem,
    /// `p_{m-1}^2 - D q_{m-1}^2` before normalization.
    pub raw_unit: F::Elem,
    /// Continuant index `m - 1`.
    pub index: usize,
}

/// First `i >= 1` with `s_i` constant in the expansion of `sqrt D`, with the
/// expansion up to `a_i`.
pub fn sqrt_quasi_period<F: Field>(d: &Poly<F>, budget: usize) -> Result<(SurdExpansion<F>, Option<usize>)> {
    let alpha = Surd::sqrt(d)?;
    let f = d.field().clone();
    let mut ex = SurdExpansion {
        expansion: Expansion::from_quotients(&f, Vec::new(), false, false),
        states: Vec::new(),
        d: d.clone(),
    };
    let mut cur = alpha;
    for i in 0..=budget {
        if i >= 1 && cur.s.deg() == Some(0) {
            ex.states.push((cur.r.clone(), cur.s.clone()));
            ex.expansion.push(cur.floor());
            return Ok((ex, Some(i)));
        }
        if i == budget {
            break;
        }
        let a = cur.floor();
        ex.states.push((cur.r.clone(), cur.s.clone()));
        ex.expansion.push(a.clone());
        cur = cur.step(&a)?;
    }
    ex.expansion.budget_exhausted = true;
    Ok((ex, None))
}

/// Minimal solution of `X^2 - D Y^2 in K*`, normalized to unit value 1 (or
/// -1) when a square root of the raw unit (or its negative) exists.
pub fn pell_solve<F: Field>(d: &Poly<F>, budget: usize) -> Result<Option<PellSolution<F>>> {
    let (ex, m) = sqrt_quasi_period(d, budget)?;
    let Some(m) = m else { return Ok(None) };
    let f = d.field();
    let e = &ex.expansion;
    let (x, y) = (e.p[m - 1].clone(), e.q[m - 1].clone());
    let raw = (&(&x * &x) - &(&(&y * &y) * d)).lead();
    let scaled = |k: F::Elem| {
        let ki = f.inv(&k).expect("nonzero");
        (x.scale(&ki), y.scale(&ki))
    };
    let (x, y, unit) = if let Some(k) = f.sqrt(&raw) {
        let (x, y) = scaled(k);
        (x, y, f.one())
    } else if let Some(k) = f.sqrt(&f.neg(&raw)) {
        let (x, y) = scaled(k);
        (x, y, f.neg(&f.one()))
    } else {
        (x, y, raw.clone())
    };
    Ok(Some(PellSolution { x, y, unit_value: unit, raw_unit: raw, index: m - 1 }))
}

/// Torsion order at a prime: `deg q_{m-1} + d` for the minimal quasi-period
/// `m` of `sqrt D` (equivalently `deg p_{m-1}`).
pub fn torsion_order<F: Field>(d: &Poly<F>, budget: usize) -> Result<Option<usize>> {
    let (ex, m) = sqrt_quasi_period(d, budget)?;
    Ok(m.map(|m| ex.expansion.p[m - 1].deg().expect("nonzero")))
}

/// Why a prime was not used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BadPrime {
    Two,
    NotPrime,
    DenominatorDivisible,
    DegreeDrops,
    NotSquarefree,
    LeadNotSquare,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeOrder {
    pub p: u64,
    pub torsion_order: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedCheck {
    /// Largest compatible torsion order.
    pub torsion_bound: usize,
    /// Quotients examined beyond `a_0` (`torsion_bound - g`).
    pub steps: usize,
    pub max_quotient_degree: Option<usize>,
}

#[derive(Clone, Debug)]
pub enum Verdict {
    NonPellian,
    Pellian(PellSolution<Rationals>),
    Inconclusive(String),
}

#[derive(Clone, Debug)]
pub struct PellianityReport {
    pub verdict: Verdict,
    pub orders: Vec<PrimeOrder>,
    pub skipped: Vec<(u64, BadPrime)>,
    /// Common values `m_i p_i^{k_i}`; empty means incompatible orders.
    pub candidates: Vec<usize>,
    pub bounded_check: Option<BoundedCheck>,
}

/// Reduce a rational polynomial modulo `p`, if no denominator vanishes.
pub fn reduce_mod(d: &Poly<Rationals>, fp: &PrimeField) -> Option<Poly<PrimeField>> {
    let cs: Option<Vec<u64>> = d.coeffs().iter().map(|c| fp.from_rational(c)).collect();
    cs.map(|v| Poly::new(fp, v))
}

fn good_reduction(d: &Poly<Rationals>, p: u64) -> std::result::Result<Poly<PrimeField>, BadPrime> {
    if p == 2 {
        return Err(BadPrime::Two);
    }
    let fp = PrimeField::new(p).map_err(|_| BadPrime::NotPrime)?;
    let dp = reduce_mod(d, &fp).ok_or(BadPrime::DenominatorDivisible)?;
    if dp.deg() != d.deg() {
        return Err(BadPrime::DegreeDrops);
    }
    if !dp.is_squarefree() {
        return Err(BadPrime::NotSquarefree);
    }
    if fp.sqrt(&dp.lead()).is_none() {
        return Err(BadPrime::LeadNotSquare);
    }
    Ok(dp)
}

fn valuation_u(mut n: usize, p: u64) -> u32 {
    let p = p as usize;
    let mut v = 0;
    while n > 0 && n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

fn is_power_of(mut n: usize, p: u64) -> bool {
    let p = p as usize;
    while n > 1 && n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

/// Values `N` with `N = m_i p_i^{k_i}` for every `i`. Requires at least two
/// distinct primes; the exponent of the first prime is bounded by its
/// valuation in the second order.
pub fn compatible_orders(orders: &[PrimeOrder]) -> Vec<usize> {
    let first = &orders[0];
    let kmax = valuation_u(orders[1].torsion_order, first.p);
    let mut out = Vec::new();
    let mut n = first.torsion_order;
    for _ in 0..=kmax {
        if orders.iter().all(|o| n.is_multiple_of(o.torsion_order) && is_power_of(n / o.torsion_order, o.p)) {
            out.push(n);
        }
        n *= first.p as usize;
    }
    out
}

/// Decide whether `D` over Q is Pellian using torsion orders at good primes.
pub fn pellianity_decide(d: &Poly<Rationals>, primes: &[u64], budget: usize) -> Result<PellianityReport> {
    let deg = d.deg().unwrap_or(0);
    if deg == 0 || deg % 2 == 1 {
        return Err(Error::Precondition(format!("{d} must have even positive degree")));
    }
    if !d.is_squarefree() {
        return Err(Error::Precondition(format!("{d} is not squarefree")));
    }
    canonical_root(d)?;
    let half = deg / 2;
    let genus = half - 1;
    let mut orders = Vec::new();
    let mut skipped = Vec::new();
    let mut ps: Vec<u64> = primes.to_vec();
    ps.dedup();
    let results: Vec<(u64, std::result::Result<Poly<PrimeField>, BadPrime>)> =
        ps.iter().map(|&p| (p, good_reduction(d, p))).collect();
    for (p, r) in results {
        match r {
            Ok(dp) => {
                let bound = (p as usize).checked_pow(deg as u32 - 1).unwrap_or(usize::MAX);
                let cap = budget.max(bound.saturating_add(1).min(1 << 20));
                let m = torsion_order(&dp, cap)?.ok_or_else(|| {
                    Error::BudgetExceeded(format!("no quasi-period mod {p} within {cap} steps"))
                })?;
                orders.push(PrimeOrder { p, torsion_order: m });
            }
            Err(why) => skipped.push((p, why)),
        }
    }
    if orders.is_empty() {
        return Err(Error::Precondition("no prime of good reduction supplied".into()));
    }
    let mut report = PellianityReport {
        verdict: Verdict::Inconclusive(String::new()),
        orders: orders.clone(),
        skipped,
        candidates: Vec::new(),
        bounded_check: None,
    };
    if orders.len() < 2 {
        let sol = pell_solve(d, budget)?;
        report.verdict = match sol {
            Some(s) => Verdict::Pellian(s),
            None => Verdict::Inconclusive(format!(
                "one good prime gives no bound; no solution within {budget} steps"
            )),
        };
        return Ok(report);
    }
    let cands = compatible_orders(&orders);
    report.candidates = cands.clone();
    let Some(&bound) = cands.iter().max() else {
        report.verdict = Verdict::NonPellian;
        return Ok(report);
    };
    // A Pellian D has quasi-period at most bound - g.
    let steps = bound.saturating_sub(genus);
    let (ex, m) = sqrt_quasi_period(d, steps)?;
    let maxdeg = ex.expansion.quotients.iter().skip(1).filter_map(|a| a.deg()).max();
    report.bounded_check = Some(BoundedCheck { torsion_bound: bound, steps, max_quotient_degree: maxdeg });
    report.verdict = match m {
        Some(_) => Verdict::Pellian(pell_solve(d, steps)?.expect("quasi-period found")),
        None => Verdict::NonPellian,
    };
    Ok(report)
}

/// `(x1 + y1 sqrt D)(x2 + y2 sqrt D)`.
pub fn pell_compose<F: Field>(d: &Poly<F>, a: (&Poly<F>, &Poly<F>), b: (&Poly<F>, &Poly<F>)) -> (Poly<F>, Poly<F>) {
    (&(a.0 * b.0) + &(&(a.1 * b.1) * d), &(a.0 * b.1) + &(a.1 * b.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;

    fn qp(s: &str) -> Poly<Rationals> {
        parse_poly(s, &Rationals).unwrap()
    }

    #[test]
    fn first_step_of_sqrt() {
        let d = qp("T^4+T^2+1");
        let a = Surd::sqrt(&d).unwrap();
        assert!(!a.is_reduced());
        let a0 = a.floor();
        assert_eq!(a0, qp("T^2+1/2"));
        let a1 = a.step(&a0).unwrap();
        // 4/3 (sqrt D + T^2 + 1/2)
        assert_eq!(a1.r, qp("T^2+1/2"));
        assert_eq!(a1.s, qp("3/4"));
        assert!(a1.is_reduced());
    }

    #[test]
    fn erratum_denominator() {
        let d = qp("T^4+T^2+1");
        let delta = qp("T^2+1/2");
        let s = &d - &(&delta * &delta);
        let root = canonical_root(&d).unwrap();
        assert!(Surd::new(&delta, &s, &d, &root).is_ok());
        let wrong = &(&d * &d) - &delta;
        assert!(Surd::new(&delta, &wrong, &d, &root).is_err());
    }

    #[test]
    fn period_of_t8_t4() {
        let d = qp("T^8+T^4");
        let (ex, info) = detect_periodicity(&Surd::sqrt(&d).unwrap(), 50).unwrap();
        assert_eq!(info.preperiod, 1);
        assert_eq!(info.quasi_period, Some(1));
        assert_eq!(info.period, Some(2));
        let q = &ex.expansion.quotients;
        assert_eq!(q[0], qp("T^4+1/2"));
        assert_eq!(q[1], qp("-8T^4-4"));
        assert_eq!(q[2], qp("2T^4+1"));
        assert!(check_sqrt_palindrome(q, 1));
    }

    #[test]
    fn compatible_order_search() {
        let o = |p, m| PrimeOrder { p, torsion_order: m };
        assert!(compatible_orders(&[o(3, 7), o(5, 9)]).is_empty());
        assert_eq!(compatible_orders(&[o(17, 25), o(19, 25)]), vec![25]);
        assert_eq!(compatible_orders(&[o(3, 5), o(5, 3)]), vec![15]);
    }
}
