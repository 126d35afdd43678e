//! Normal rational functions `g/f` (all partial quotients after `a_0` of
//! degree one): Hankel tests, orthogonal-multiplicity censuses and partner
//! constructions.

use rayon::prelude::*;

use crate::algebra::{Field, Poly, PrimeField};
use crate::contfrac::{cf_value, expand_rational, Expansion};
use crate::error::{Error, Result};
use crate::laurent::LaurentStream;

/// Default census ceiling on `q^deg f`.
pub const CENSUS_CAP: u64 = 10_000_000;

/// `det H_j` of the coefficients `c[k] = c_{-(k+1)}`, by Gaussian elimination.
pub fn hankel_det<F: Field>(f: &F, c: &[F::Elem], j: usize) -> F::Elem {
    let mut m: Vec<Vec<F::Elem>> = (0..j).map(|r| (0..j).map(|s| c[r + s].clone()).collect()).collect();
    let mut det = f.one();
    for col in 0..j {
        let Some(piv) = (col..j).find(|&r| !f.is_zero(&m[r][col])) else {
            return f.zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = f.neg(&det);
        }
        let inv = f.inv(&m[col][col]).expect("nonzero pivot");
        det = f.mul(&det, &m[col][col]);
        for r in col + 1..j {
            if f.is_zero(&m[r][col]) {
                continue;
            }
            let k = f.mul(&m[r][col], &inv);
            for s in col..j {
                let v = f.mul(&k, &m[col][s]);
                m[r][s] = f.sub(&m[r][s], &v);
            }
        }
    }
    det
}

/// The `j` in `1..=max_j` with `det H_j(alpha) != 0`; these are the degrees
/// of the continuant denominators.
pub fn hankel_profile<F: Field>(alpha: &LaurentStream<F>, max_j: usize) -> Result<Vec<usize>> {
    if alpha.top() >= 0 && !alpha.vanishes_from(0) {
        return Err(Error::Precondition("Hankel profile needs ord(alpha) >= 1".into()));
    }
    let f = alpha.field();
    let c: Vec<F::Elem> = (1..=2 * max_j as i64).map(|k| alpha.coeff(-k)).collect();
    Ok((1..=max_j).filter(|&j| !f.is_zero(&hankel_det(f, &c, j))).collect())
}

/// `g/f` is normal: coprime and every quotient of `f/g` has degree one
/// (those are the quotients of `g/f` after `a_0 = 0`).
pub fn is_normal_pair<F: Field>(f: &Poly<F>, g: &Poly<F>) -> bool {
    if g.is_zero() || g.deg() >= f.deg() {
        return false;
    }
    let (mut x, mut y) = (f.clone(), g.clone());
    while !y.is_zero() {
        let (q, r) = x.divrem(&y).expect("nonzero");
        if q.deg() != Some(1) {
            return false;
        }
        x = y;
        y = r;
    }
    x.deg() == Some(0)
}

/// Census of normal partners of `f`.
#[derive(Clone, Debug)]
pub struct CensusReport {
    pub field: PrimeField,
    pub f: Poly<PrimeField>,
    pub multiplicity: u64,
    /// Sorted lexicographically on little-endian coefficient vectors.
    pub witnesses: Vec<Poly<PrimeField>>,
    pub witness_cap: usize,
    pub method: &'static str,
}

fn poly_from_index(fp: &PrimeField, mut idx: u64, d: usize) -> Poly<PrimeField> {
    let q = fp.modulus();
    let mut v = Vec::with_capacity(d);
    for _ in 0..d {
        v.push(idx % q);
        idx /= q;
    }
    Poly::new(fp, v)
}

/// Exhaustive count of `g`, `deg g < deg f`, with `g/f` normal.
/// `workers = 0` uses the global rayon pool.
pub fn orthogonal_multiplicity(
    f: &Poly<PrimeField>,
    witness_cap: usize,
    workers: usize,
    cap: u64,
) -> Result<CensusReport> {
    let fp = *f.field();
    let d = f.deg().ok_or_else(|| Error::Precondition("f must be nonzero".into()))?;
    if d == 0 {
        return Err(Error::Precondition("f must be non-constant".into()));
    }
    let total = fp
        .modulus()
        .checked_pow(d as u32)
        .filter(|&t| t <= cap)
        .ok_or_else(|| Error::BudgetExceeded(format!("q^d exceeds the census cap {cap}")))?;
    let run = || {
        (1..total)
            .into_par_iter()
            .filter_map(|i| {
                let g = poly_from_index(&fp, i, d);
                is_normal_pair(f, &g).then_some(g)
            })
            .collect::<Vec<_>>()
    };
    let mut found = if workers == 0 {
        run()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::Unsupported(format!("thread pool: {e}")))?
            .install(run)
    };
    let multiplicity = found.len() as u64;
    found.sort_by_key(|a| lex_key(a, d));
    found.truncate(witness_cap);
    Ok(CensusReport { field: fp, f: f.clone(), multiplicity, witnesses: found, witness_cap, method: "exhaustive" })
}

fn lex_key(g: &Poly<PrimeField>, d: usize) -> Vec<u64> {
    (0..d).map(|i| g.coeff(i)).collect()
}

/// All monic polynomials of degree `d` over `F_p`, in index order.
pub fn monic_polys(fp: &PrimeField, d: usize) -> Vec<Poly<PrimeField>> {
    let n = fp.modulus().pow(d as u32);
    (0..n).map(|i| &poly_from_index(fp, i, d) + &Poly::monomial(fp, 1, d)).collect()
}

/// Outcome of the linear-multiplier construction.
#[derive(Clone, Debug)]
pub struct PartnerConstruction<F: Field> {
    pub g: Poly<F>,
    pub lambdas: Vec<F::Elem>,
    pub expansion: Expansion<F>,
    /// `K` after each multiplication, starting with `K(1/f) = deg f`.
    pub k_trace: Vec<usize>,
    /// Supply elements allowed at each step.
    pub allowed: Vec<Vec<F::Elem>>,
}

/// Default supply: `0, 1, -1, 2, -2, ...` over infinite fields (`count`
/// terms), all residues in order over finite ones.
pub fn default_supply<F: Field>(f: &F, count: usize) -> Vec<F::Elem> {
    if f.size().is_some() {
        return f.elements();
    }
    let mut out = vec![f.zero()];
    let mut k = 1i64;
    while out.len() < count {
        out.push(f.from_i64(k));
        out.push(f.from_i64(-k));
        k += 1;
    }
    out.truncate(count.max(1));
    out
}

/// Values of `lambda` in `supply` avoiding every root of the `q_n` of `e`.
pub fn allowed_lambdas<F: Field>(e: &Expansion<F>, supply: &[F::Elem]) -> Vec<F::Elem> {
    let f = &e.field;
    supply.iter().filter(|l| e.q.iter().all(|q| !f.is_zero(&q.eval(l)))).cloned().collect()
}

/// Multiply `1/f` by `(T - lambda_i)` until the expansion is normal, each
/// `lambda_i` the first supply element avoiding the current `q_n` roots.
pub fn construct_partner_infinite<F: Field>(f: &Poly<F>, supply: &[F::Elem]) -> Result<PartnerConstruction<F>> {
    let fld = f.field();
    let d = f.deg().ok_or_else(|| Error::Precondition("f must be nonzero".into()))?;
    if d == 0 {
        return Err(Error::Precondition("f must be non-constant".into()));
    }
    let mut g = Poly::one(fld);
    let mut lambdas = Vec::new();
    let mut e = expand_rational(&g, f, d + 2)?;
    let mut k_trace = vec![e.k_profile().k.unwrap_or(0)];
    let mut allowed = Vec::new();
    while e.k_profile().k.unwrap_or(0) > 1 {
        let ok = allowed_lambdas(&e, supply);
        let Some(l) = ok.first().cloned() else {
            let roots: Vec<String> = supply.iter().map(|x| fld.fmt_elem(x)).collect();
            return Err(Error::SupplyExhausted(format!(
                "every candidate in [{}] is a root of some q_n after {} steps",
                roots.join(", "),
                lambdas.len()
            )));
        };
        allowed.push(ok);
        g = &g * &Poly::linear(fld, &l);
        lambdas.push(l);
        e = expand_rational(&g, f, d + 2)?;
        k_trace.push(e.k_profile().k.unwrap_or(0));
    }
    Ok(PartnerConstruction { g, lambdas, expansion: e, k_trace, allowed })
}

/// `g_d` with `K(g_d / P^d) = 1`: `g_1 = 1`, `g_d = g_l P^l + 1` for even `d`
/// and `g_l P^{l+1} + 1` for odd `d`, `l = floor(d/2)`.
pub fn folded_partner<F: Field>(p: &Poly<F>, d: u32) -> Result<(Poly<F>, Expansion<F>)> {
    if p.deg() != Some(1) || d == 0 {
        return Err(Error::Precondition("need deg P = 1 and d >= 1".into()));
    }
    let g = folded_g(p, d);
    let e = expand_rational(&g, &p.pow(d), d as usize + 2)?;
    Ok((g, e))
}

fn folded_g<F: Field>(p: &Poly<F>, d: u32) -> Poly<F> {
    if d == 1 {
        return Poly::one(p.field());
    }
    let l = d / 2;
    let e = if d.is_multiple_of(2) { l } else { l + 1 };
    &(&folded_g(p, l) * &p.pow(e)) + &Poly::one(p.field())
}

/// `sum_{j=0}^{r} P^{d - floor(d/2^j)}` with `2^r <= d < 2^{r+1}`.
pub fn folded_partner_sum<F: Field>(p: &Poly<F>, d: u32) -> Poly<F> {
    let r = 31 - d.leading_zeros();
    (0..=r).fold(Poly::zero(p.field()), |acc, j| &acc + &p.pow(d - (d >> j)))
}

/// All `g`, `deg g < deg f`, such that `f/g` begins with `prefix`.
///
/// With `P_i/Q_i` the last convergent of the prefix, `f = P_i r + P_{i-1} s`
/// is solved with `deg s < A = deg P_i`; then `g = Q_i r + Q_{i-1} s` and the
/// full solution set is `g + t`, `deg t < d - 2A`.
pub fn friesen_prefix_solve(f: &Poly<PrimeField>, prefix: &[Poly<PrimeField>]) -> Result<Vec<Poly<PrimeField>>> {
    let fp = f.field();
    if prefix.is_empty() || prefix.iter().any(|a| a.deg().unwrap_or(0) == 0) {
        return Err(Error::Precondition("prefix entries must be non-constant".into()));
    }
    let d = f.deg().unwrap_or(0);
    let a_sum: usize = prefix.iter().map(|a| a.deg().expect("nonzero")).sum();
    if d < 2 * a_sum {
        return Err(Error::Precondition(format!("deg f = {d} < 2A = {}", 2 * a_sum)));
    }
    let e = Expansion::from_quotients(fp, prefix.to_vec(), true, false);
    let i = prefix.len() - 1;
    let (pi, qi) = (&e.p[i], &e.q[i]);
    let (pm, qm) = if i == 0 { (Poly::one(fp), Poly::zero(fp)) } else { (e.p[i - 1].clone(), e.q[i - 1].clone()) };
    // s = f * pm^{-1} mod pi
    let (g1, u, _) = pm.xgcd(pi)?;
    debug_assert!(g1.is_one());
    let s = (f * &u).rem(pi)?;
    let r = (f - &(&pm * &s)).div_exact(pi).ok_or_else(|| Error::Invariant("prefix solve".into()))?;
    let g0 = &(qi * &r) + &(&qm * &s);
    let free = d - 2 * a_sum;
    let count = fp.modulus().pow(free as u32);
    let mut out = Vec::with_capacity(count as usize);
    for idx in 0..count {
        let g = &g0 + &poly_from_index(fp, idx, free);
        let ex = expand_rational(f, &g, prefix.len() + 1)?;
        if ex.quotients.len() < prefix.len() || ex.quotients[..prefix.len()] != *prefix {
            return Err(Error::Invariant(format!("{f}/{g} does not begin with the prefix")));
        }
        out.push(g);
    }
    out.sort_by_key(|a| lex_key(a, d));
    Ok(out)
}

/// Candidate constants `1, -1, 2, -2, ...` (residues, deduplicated).
fn b_candidates<F: Field>(f: &F) -> Vec<F::Elem> {
    let n = f.size().map(|q| q as usize).unwrap_or(64);
    let mut out: Vec<F::Elem> = Vec::new();
    let mut k = 1i64;
    while out.len() < n.saturating_sub(1) && k <= n as i64 + 1 {
        for c in [f.from_i64(k), f.from_i64(-k)] {
            if !f.is_zero(&c) && !out.contains(&c) {
                out.push(c);
            }
        }
        k += 1;
    }
    out
}

#[derive(Clone, Debug)]
pub enum SplitsOutcome<F: Field> {
    Found { g: Poly<F>, b: Vec<F::Elem>, expansion: Expansion<F> },
    /// No choice of `b` survives; `step` is the deepest (1-based) step at
    /// which every candidate was forbidden.
    Blocked { step: usize, forbidden: Vec<F::Elem> },
}

fn forbidden_b<F: Field>(g: &Poly<F>, fcur: &Poly<F>, l: &F::Elem, budget: usize) -> Result<Vec<F::Elem>> {
    let fld = g.field();
    let e = expand_rational(g, fcur, budget)?;
    let mut out: Vec<F::Elem> = Vec::new();
    for n in 0..e.len() {
        if let Some(v) = fld.div(&e.p[n].eval(l), &e.q[n].eval(l)) {
            let v = fld.neg(&v);
            if !out.contains(&v) {
                out.push(v);
            }
        }
    }
    Ok(out)
}

/// Nested construction `g_i = g_{i-1} + b_i f_{i-1}`, `f_i = f_{i-1} (T - lambda_i)`,
/// with `b_i` outside `{-p_n(lambda_i)/q_n(lambda_i)}` so every `g_i/f_i` is
/// normal. Candidates `1, -1, 2, -2, ...` are tried depth first.
pub fn splits_construct<F: Field>(f: &Poly<F>, roots: &[F::Elem]) -> Result<SplitsOutcome<F>> {
    let fld = f.field();
    let mut fi = Poly::one(fld);
    for l in roots {
        fi = &fi * &Poly::linear(fld, l);
    }
    if f.deg() != fi.deg() || fi.scale(&f.lead()) != *f {
        return Err(Error::Precondition("roots do not multiply out to f".into()));
    }
    let cands = b_candidates(fld);
    let budget = roots.len() + 2;
    let mut deepest = (0usize, Vec::new());
    // frames: (g_i, f_i, forbidden at step i+1, next candidate index)
    let mut stack: Vec<(Poly<F>, Poly<F>, Vec<F::Elem>, usize)> = Vec::new();
    let (g0, f0) = (Poly::zero(fld), Poly::one(fld));
    let fb0 = forbidden_b(&g0, &f0, &roots[0], budget)?;
    stack.push((g0, f0, fb0, 0));
    let mut bs: Vec<F::Elem> = Vec::new();
    while !stack.is_empty() {
        let step = stack.len() - 1;
        let top = &mut stack[step];
        let (g, fcur, forb, next) = (top.0.clone(), top.1.clone(), top.2.clone(), &mut top.3);
        let Some(k) = (*next..cands.len()).find(|&k| !forb.contains(&cands[k])) else {
            if step + 1 > deepest.0 {
                deepest = (step + 1, forb);
            }
            stack.pop();
            bs.pop();
            continue;
        };
        *next = k + 1;
        let b = cands[k].clone();
        let g2 = &g + &fcur.scale(&b);
        let f2 = &fcur * &Poly::linear(fld, &roots[step]);
        bs.truncate(step);
        bs.push(b);
        if step + 1 == roots.len() {
            let g = g2.scale(&f.lead());
            if !is_normal_pair(f, &g) {
                return Err(Error::Invariant(format!("{g}/{f} is not normal")));
            }
            let expansion = expand_rational(&g, f, budget)?;
            return Ok(SplitsOutcome::Found { g, b: bs, expansion });
        }
        let fb = forbidden_b(&g2, &f2, &roots[step + 1], budget)?;
        stack.push((g2, f2, fb, 0));
    }
    Ok(SplitsOutcome::Blocked { step: deepest.0, forbidden: deepest.1 })
}

/// Try root orders (distinct permutations) until one succeeds; at most
/// `budget` orders are tried.
pub fn splits_search<F: Field>(f: &Poly<F>, roots: &[F::Elem], budget: usize) -> Result<Option<(Vec<F::Elem>, SplitsOutcome<F>)>> {
    let mut order = roots.to_vec();
    let mut tried = 0;
    let mut seen: Vec<Vec<F::Elem>> = Vec::new();
    let mut stack = vec![(Vec::new(), order.clone())];
    order.clear();
    while let Some((chosen, rest)) = stack.pop() {
        if rest.is_empty() {
            if seen.contains(&chosen) {
                continue;
            }
            seen.push(chosen.clone());
            tried += 1;
            if let found @ SplitsOutcome::Found { .. } = splits_construct(f, &chosen)? {
                return Ok(Some((chosen, found)));
            }
            if tried >= budget {
                return Ok(None);
            }
            continue;
        }
        for i in (0..rest.len()).rev() {
            if rest[..i].contains(&rest[i]) {
                continue;
            }
            let mut c = chosen.clone();
            c.push(rest[i].clone());
            let mut r = rest.clone();
            r.remove(i);
            stack.push((c, r));
        }
    }
    Ok(None)
}

/// Normality over F_2 from coefficients `c[k] = c_{-(k+1)}`: `c_{-1} = 1`
/// and `c_{-i} + c_{-2i} + c_{-2i-1} = 0` for every `i` with `2i + 1 <= len`.
pub fn baum_sweet_normal(c: &[u64]) -> bool {
    if c.first() != Some(&1) {
        return false;
    }
    let at = |i: usize| c[i - 1] & 1;
    (1..).take_while(|i| 2 * i < c.len()).all(|i| (at(i) + at(2 * i) + at(2 * i + 1)) % 2 == 0)
}

/// Value `g/f` of `[0, a_1, .., a_n]`.
pub fn word_value<F: Field>(f: &F, tail: &[Poly<F>]) -> Result<(Poly<F>, Poly<F>)> {
    let mut w = vec![Poly::zero(f)];
    w.extend(tail.iter().cloned());
    cf_value(f, &w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;

    #[test]
    fn t3_over_f3() {
        let f3 = PrimeField::new(3).unwrap();
        let r = orthogonal_multiplicity(&parse_poly("T^3", &f3).unwrap(), 100, 0, CENSUS_CAP).unwrap();
        assert_eq!(r.multiplicity, 8);
    }

    #[test]
    fn folded_formulas_agree() {
        let f5 = PrimeField::new(5).unwrap();
        let t = Poly::t(&f5);
        for d in 1..=12 {
            assert_eq!(folded_g(&t, d), folded_partner_sum(&t, d), "d = {d}");
        }
    }

    #[test]
    fn hankel_dets_for_example() {
        let f7 = PrimeField::new(7).unwrap();
        let g = parse_poly("T^2+T", &f7).unwrap();
        let f = parse_poly("T^3+2", &f7).unwrap();
        let s = LaurentStream::from_rational(&g, &f).unwrap();
        assert_eq!(hankel_profile(&s, 3).unwrap(), vec![1, 2, 3]);
    }
}
