//! Bounded-quotient elements of `K(T, sqrt D)`: Mercat lifts and families,
//! multiplication by linear factors, divide-shift steps and Eisenstein-root
//! choices of `lambda`.

use rayon::prelude::*;

use crate::algebra::{Field, NfElem, NumberField, Poly, PrimeField, Rationals};
use crate::contfrac::{cf_expand, expand_rational, Expansion, KProfile, Mat2};
use crate::error::{Error, Result};
use crate::laurent::LaurentStream;
use crate::surd::{canonical_root, reduce_mod, Surd};

/// `u + v sqrt(D)` with polynomial parts.
#[derive(Clone, Debug, PartialEq)]
struct Quad<F: Field> {
    u: Poly<F>,
    v: Poly<F>,
}

impl<F: Field> Quad<F> {
    fn mul(&self, o: &Self, d: &Poly<F>) -> Self {
        Quad { u: &(&self.u * &o.u) + &(&(&self.v * &o.v) * d), v: &(&self.u * &o.v) + &(&self.v * &o.u) }
    }
    fn add(&self, o: &Self) -> Self {
        Quad { u: &self.u + &o.u, v: &self.v + &o.v }
    }
    fn poly(p: &Poly<F>) -> Self {
        Quad { u: p.clone(), v: Poly::zero(p.field()) }
    }
}

/// `M (alpha, 1)^t = mu (alpha, 1)^t` for `alpha = num / den`, all in `K[T][sqrt D]`.
fn is_eigenvector<F: Field>(m: &Mat2<F>, num: &Quad<F>, den: &Poly<F>, mu: &Quad<F>, d: &Poly<F>) -> bool {
    let den_q = Quad::poly(den);
    // a num + b den == mu num ; c num + d den == mu den
    let top = Quad::poly(&m.a).mul(num, d).add(&Quad::poly(&(&m.b * den)));
    let bot = Quad::poly(&m.c).mul(num, d).add(&Quad::poly(&(&m.d * den)));
    top == mu.mul(num, d) && bot == mu.mul(&den_q, d)
}

#[derive(Clone, Debug)]
pub struct MercatLift<F: Field> {
    pub x: Poly<F>,
    /// Sign-normalized so that `ord(X + Y sqrt D) < 0`.
    pub y: Poly<F>,
    pub t: F::Elem,
    pub k: F::Elem,
    /// `Z/X = [0, a_1, .., a_n]`.
    pub z_expansion: Expansion<F>,
    /// `(X - kZ + Y sqrt D) / (kX)`.
    pub surd: Surd<F>,
    /// One period of the predicted expansion.
    pub word: Vec<Poly<F>>,
    pub eigenvector_ok: bool,
    pub k_z_over_x: usize,
    pub expansion: Expansion<F>,
    pub k_bound_ok: bool,
}

/// Lift a partner `Z` of a Pell solution `(X, Y)` to a periodic element of
/// `K(T, sqrt D)` with `K <= K(Z/X)`.
pub fn mercat_lift<F: Field>(d: &Poly<F>, x: &Poly<F>, y: &Poly<F>, z: &Poly<F>, budget: usize) -> Result<MercatLift<F>> {
    let f = d.field();
    if f.characteristic() == 2 {
        return Err(Error::Unsupported("characteristic 2".into()));
    }
    let tp = &(x * x) - &(&(y * y) * d);
    let t = match tp.deg() {
        Some(0) if tp.lead() == f.one() || tp.lead() == f.neg(&f.one()) => tp.lead(),
        _ => return Err(Error::Precondition(format!("X^2 - D Y^2 = {tp} is not +-1"))),
    };
    if y.is_zero() {
        return Err(Error::Precondition("trivial Pell solution".into()));
    }
    let root = canonical_root(d)?;
    // X + Y sqrt D has degree deg X exactly when the leading terms agree.
    let y = if x.lead() == f.mul(&y.lead(), &root) { y.clone() } else { -y };
    if z.is_zero() || z.deg() >= x.deg() || !z.is_coprime(x) {
        return Err(Error::Precondition("need Z nonzero, coprime to X, deg Z < deg X".into()));
    }
    let ze = expand_rational(z, x, x.deg().unwrap_or(0) + 2)?;
    let n = ze.len() - 1;
    let k = f
        .div(&ze.q[n].lead(), &x.lead())
        .ok_or_else(|| Error::Invariant("zero leading coefficient".into()))?;
    if ze.q[n] != x.scale(&k) || ze.p[n] != z.scale(&k) {
        return Err(Error::Invariant("continuant normalization".into()));
    }
    let ki = f.inv(&k).expect("k nonzero");
    let two = f.from_i64(2);
    let mut word = vec![Poly::constant(f, f.mul(&two, &ki))];
    word.extend(ze.quotients[1..].iter().map(|a| -a));
    let sign = if n % 2 == 1 { f.one() } else { f.neg(&f.one()) };
    word.push(Poly::constant(f, f.mul(&sign, &f.mul(&two, &f.mul(&t, &ki)))));
    word.extend(ze.quotients[1..].iter().rev().cloned());

    let a = x - &z.scale(&k);
    let c = x.scale(&k);
    let m = Mat2::word(f, &word);
    let two_t = f.mul(&two, &t);
    let mu = Quad {
        u: &Poly::one(f) - &(x * x).scale(&two_t),
        v: -&(x * &y).scale(&two_t),
    };
    let eigenvector_ok = is_eigenvector(&m, &Quad { u: a.clone(), v: y.clone() }, &c, &mu, d);

    let surd = Surd::from_quadratic(&a, &y, &c, d, &root)?;
    let expansion = surd.expand(budget)?.expansion;
    let k_z_over_x = ze.k_profile().k.unwrap_or(0);
    let k_bound_ok = expansion.k_profile().k.unwrap_or(0) <= k_z_over_x;
    Ok(MercatLift { x: x.clone(), y, t, k, z_expansion: ze, surd, word, eigenvector_ok, k_z_over_x, expansion, k_bound_ok })
}

/// Which construction built `B`, `C`, `H`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MercatBranch {
    /// Period of length one: `A = M_{a_0}`.
    Single,
    /// Middle block `N` with `det N = -1`.
    DetMinusOne,
    /// Middle block `N` with `det N = 1`.
    DetOne,
}

#[derive(Clone, Debug)]
pub struct FamilyMember<F: Field> {
    pub n: usize,
    /// One period of `alpha_n`.
    pub word: Vec<Poly<F>>,
    pub value: Surd<F>,
    pub trace_ok: bool,
    /// `discr(B A^n C (A^t)^n) = tr(A^{n+2})^2 discr(A^{n+2})` and
    /// `discr(A^{n+2}) / discr(A)` is a square.
    pub discr_ok: bool,
}

#[derive(Clone, Debug)]
pub struct MercatFamily<F: Field> {
    pub branch: MercatBranch,
    /// A period of length two is doubled to make it quasi-palindromic.
    pub doubled: bool,
    pub period: Vec<Poly<F>>,
    pub b_word: Vec<Poly<F>>,
    pub c_word: Vec<Poly<F>>,
    pub h: Mat2<F>,
    pub members: Vec<FamilyMember<F>>,
}

fn quasi_palindromic<F: Field>(w: &[Poly<F>]) -> bool {
    let l = w.len() - 1;
    (1..=l).all(|i| w[i] == w[l + 1 - i])
}

fn square_poly<F: Field>(p: &Poly<F>) -> bool {
    if p.is_zero() {
        return true;
    }
    match LaurentStream::sqrt(p) {
        Ok(s) => s.exact.is_some(),
        Err(_) => false,
    }
}

fn fixed_point<F: Field>(m: &Mat2<F>) -> Result<Surd<F>> {
    let f = m.a.field();
    let disc = m.discriminant();
    let tr = m.trace();
    let root = canonical_root(&disc)?;
    // the attracting fixed point has the larger eigenvalue (tr + sigma sqrt disc)/2
    let sigma = if tr.deg_i() * 2 == disc.deg_i() && f.neg(&tr.lead()) == root { f.neg(&f.one()) } else { f.one() };
    let two_c = m.c.scale(&f.from_i64(2));
    Surd::from_quadratic(&(&m.a - &m.d), &Poly::constant(f, sigma), &two_c, &disc, &root)
}

/// Infinitely many periodic elements built around a purely periodic
/// quasi-palindromic period `a_0, a_1, .., a_1`, for `n = 0..=n_max`.
pub fn mercat_family<F: Field>(period: &[Poly<F>], n_max: usize) -> Result<MercatFamily<F>> {
    let Some(f) = period.first().map(|a| a.field().clone()) else {
        return Err(Error::Precondition("empty period".into()));
    };
    if f.characteristic() == 2 {
        return Err(Error::Unsupported("characteristic 2".into()));
    }
    if !quasi_palindromic(period) {
        return Err(Error::Precondition("period is not quasi-palindromic".into()));
    }
    let doubled = period.len() == 2;
    let w: Vec<Poly<F>> = if doubled { [period, period].concat() } else { period.to_vec() };
    let one = Poly::one(&f);
    let half = f.inv(&f.from_i64(2)).expect("char != 2");
    let a0 = w[0].clone();
    let a0h = a0.scale(&half);
    let hook = |x: &Poly<F>| vec![x.clone(), one.clone(), one.clone(), x - &one];
    let a_mat = Mat2::word(&f, &w);
    let rev: Vec<Poly<F>> = w.iter().rev().cloned().collect();
    let (branch, b_word, c_word, inner) = if w.len() == 1 {
        (MercatBranch::Single, hook(&a0h), hook(&a0), Mat2 { a: Poly::constant(&f, f.from_i64(2)), b: -&a0, c: Poly::zero(&f), d: Poly::zero(&f) })
    } else {
        let a1 = w[1].clone();
        let n_word = &w[2..w.len() - 1];
        if n_word.len() % 2 == 1 {
            let mut b = vec![a1.clone()];
            b.extend_from_slice(n_word);
            b.extend(hook(&a1));
            b.extend_from_slice(n_word);
            b.push(a1.clone());
            let mut c = w.clone();
            c.extend(hook(&a0h));
            c.extend(rev.iter().cloned());
            (MercatBranch::DetMinusOne, b, c, Mat2 { a: Poly::zero(&f), b: a0.clone(), c: Poly::zero(&f), d: Poly::constant(&f, f.from_i64(2)) })
        } else {
            let mut b = vec![a1.clone()];
            b.extend_from_slice(n_word);
            b.push(a1.clone());
            b.extend(hook(&a0h));
            b.push(a1.clone());
            b.extend_from_slice(n_word);
            b.push(a1.clone());
            let mut c = vec![a0.clone(), a1.clone()];
            c.extend_from_slice(n_word);
            c.extend(hook(&a1));
            c.extend_from_slice(n_word);
            c.extend([a1.clone(), a0.clone()]);
            (MercatBranch::DetOne, b, c, Mat2 { a: Poly::constant(&f, f.from_i64(2)), b: -&a0, c: Poly::zero(&f), d: Poly::zero(&f) })
        }
    };
    let h = a_mat.mul(&inner).mul(&a_mat);
    let b_mat = Mat2::word(&f, &b_word);
    let c_mat = Mat2::word(&f, &c_word);
    let disc_a = a_mat.discriminant();
    let members = (0..=n_max)
        .into_par_iter()
        .map(|n| {
            let an = a_mat.pow(n as u32);
            let ant = an.transpose();
            let m = b_mat.mul(&an).mul(&c_mat).mul(&ant);
            let mut word = b_word.clone();
            for _ in 0..n {
                word.extend(w.iter().cloned());
            }
            word.extend(c_word.iter().cloned());
            for _ in 0..n {
                word.extend(rev.iter().cloned());
            }
            if Mat2::word(&f, &word) != m {
                return Err(Error::Invariant("word and matrix product disagree".into()));
            }
            let hn = h.mul(&an).trace();
            let trace_ok = m.trace() == &(&hn * &hn) - &an.det().scale(&f.from_i64(2));
            let an2 = a_mat.pow(n as u32 + 2);
            let tr2 = an2.trace();
            let discr_ok = m.discriminant() == &(&tr2 * &tr2) * &an2.discriminant()
                && an2.discriminant().div_exact(&disc_a).is_some_and(|q| square_poly(&q));
            Ok(FamilyMember { n, word, value: fixed_point(&m)?, trace_ok, discr_ok })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MercatFamily { branch, doubled, period: w, b_word, c_word, h, members })
}

#[derive(Clone, Debug)]
pub struct PipelineStep<F: Field> {
    pub lambda: F::Elem,
    pub k_before: usize,
    pub k_after: usize,
}

#[derive(Clone, Debug)]
pub struct Pipeline<F: Field> {
    pub lambdas: Vec<F::Elem>,
    pub steps: Vec<PipelineStep<F>>,
    /// Expansion of `prod (T - lambda_i) sqrt D` over the window.
    pub expansion: Expansion<F>,
    pub k_profile: KProfile,
    /// Window-only evidence; never a proof of normality.
    pub observed_depth: usize,
}

fn product_surd<F: Field>(d: &Poly<F>, p: &Poly<F>, root: &F::Elem) -> Result<Surd<F>> {
    let f = d.field();
    let d2 = &(p * p) * d;
    Surd::new(&Poly::zero(f), &Poly::one(f), &d2, &f.mul(root, &p.lead()))
}

/// Multiply `sqrt D` by `T - lambda_i` until the observed `K` is 1 or
/// `d - 1` factors are used. Each `lambda_i` is the first supply element
/// avoiding the roots of every computed `q_n`.
pub fn sqrt_multiplier_pipeline<F: Field>(d: &Poly<F>, supply: &[F::Elem], budget: usize) -> Result<Pipeline<F>> {
    let f = d.field();
    if f.size().is_some() {
        return Err(Error::Unsupported(
            "over a finite field sqrt(D) is periodic with infinitely many quotients of degree d".into(),
        ));
    }
    if f.characteristic() == 2 {
        return Err(Error::Unsupported("characteristic 2".into()));
    }
    let deg = d.deg().unwrap_or(0);
    if deg == 0 || deg % 2 == 1 {
        return Err(Error::Precondition("D must have positive even degree".into()));
    }
    let root = canonical_root(d)?;
    let mut prod = Poly::one(f);
    let mut lambdas = Vec::new();
    let mut steps = Vec::new();
    let mut e = product_surd(d, &prod, &root)?.expand(budget)?.expansion;
    loop {
        let k = e.k_profile().k.unwrap_or(0);
        if k <= 1 || lambdas.len() + 1 >= deg / 2 {
            break;
        }
        let Some(l) = supply.iter().find(|l| e.q.iter().all(|q| !f.is_zero(&q.eval(l)))).cloned() else {
            return Err(Error::SupplyExhausted(format!("no lambda avoids the q_n roots after {} steps", lambdas.len())));
        };
        prod = &prod * &Poly::linear(f, &l);
        e = product_surd(d, &prod, &root)?.expand(budget)?.expansion;
        steps.push(PipelineStep { lambda: l.clone(), k_before: k, k_after: e.k_profile().k.unwrap_or(0) });
        lambdas.push(l);
    }
    let k_profile = e.k_profile();
    Ok(Pipeline { lambdas, steps, observed_depth: e.len(), expansion: e, k_profile })
}

#[derive(Clone, Debug)]
pub struct DivideShift<F: Field> {
    pub expansion: Expansion<F>,
    /// `p_n(lambda) + a q_n(lambda) != 0` on the whole window of `alpha`.
    pub avoidance_held: bool,
    pub first_violation: Option<usize>,
    pub k_before: usize,
    pub k_after: usize,
}

/// `(alpha + a)/(T - lambda)`, exact for rational and surd `alpha`.
pub fn divide_shift_stream<F: Field>(alpha: &LaurentStream<F>, a: &F::Elem, lambda: &F::Elem) -> Result<LaurentStream<F>> {
    let f = alpha.field();
    let lin = Poly::linear(f, lambda);
    if let Some((u, v)) = alpha.as_rational() {
        return LaurentStream::from_rational(&(&u + &v.scale(a)), &(&v * &lin));
    }
    if let Some((r, s, d, root)) = alpha.as_surd() {
        return Ok(Surd::from_quadratic(&(&r + &s.scale(a)), &Poly::one(f), &(&s * &lin), &d, &root)?.stream());
    }
    let shifted = alpha.add_poly(&Poly::constant(f, a.clone()));
    Ok(shifted.mul(&LaurentStream::from_rational(&Poly::one(f), &lin)?))
}

pub fn divide_shift<F: Field>(alpha: &LaurentStream<F>, a: &F::Elem, lambda: &F::Elem, budget: usize) -> Result<DivideShift<F>> {
    let f = alpha.field();
    let before = cf_expand(alpha, budget)?;
    let first_violation = (0..before.len())
        .find(|&n| f.is_zero(&f.add(&before.p[n].eval(lambda), &f.mul(a, &before.q[n].eval(lambda)))));
    let expansion = cf_expand(&divide_shift_stream(alpha, a, lambda)?, budget)?;
    Ok(DivideShift {
        avoidance_held: first_violation.is_none(),
        first_violation,
        k_before: before.k_profile().k.unwrap_or(0),
        k_after: expansion.k_profile().k.unwrap_or(0),
        expansion,
    })
}

#[derive(Clone, Debug)]
pub struct EisensteinCertificate {
    /// `Q[x]/(pi x^r - 1)`.
    pub field: NumberField,
    pub lambda: NfElem,
    /// Quotients of `sqrt D` checked.
    pub window: usize,
    /// First `n` with `q_n(lambda) = 0`, if any.
    pub first_zero: Option<usize>,
    /// `(T - lambda) sqrt D` over the extension.
    pub expansion: Expansion<NumberField>,
    pub k_profile: KProfile,
}

/// `lambda` a root of `pi x^r - 1`, checked against the continuants of
/// `sqrt D` on `window` quotients; `product_budget` quotients of
/// `(T - lambda) sqrt D` are expanded over the extension.
pub fn eisenstein_lambda(d: &Poly<Rationals>, pi: u64, r: usize, window: usize, product_budget: usize) -> Result<EisensteinCertificate> {
    let fp = PrimeField::new(pi)?;
    if pi == 2 {
        return Err(Error::Precondition("pi must be odd".into()));
    }
    let deg = d.deg().unwrap_or(0);
    if deg == 0 || deg % 2 == 1 {
        return Err(Error::Precondition("D must have positive even degree".into()));
    }
    if r < deg / 2 {
        return Err(Error::Precondition(format!("r = {r} < d = {}", deg / 2)));
    }
    let dp = reduce_mod(d, &fp).ok_or_else(|| Error::NotReducible { prime: pi, coeff: format!("{d}") })?;
    if dp.deg() != d.deg() {
        return Err(Error::Precondition(format!("leading coefficient of D vanishes mod {pi}: order drops")));
    }
    if fp.sqrt(&dp.lead()).is_none() {
        return Err(Error::Precondition(format!("leading coefficient of D is not a square mod {pi}")));
    }
    if LaurentStream::sqrt(&dp)?.exact.is_some() {
        return Err(Error::Precondition(format!("D is a square mod {pi}")));
    }
    let mut mcoeffs = vec![Rationals.from_i64(-1)];
    mcoeffs.extend(std::iter::repeat_with(|| Rationals.zero()).take(r - 1));
    mcoeffs.push(Rationals.from_i64(pi as i64));
    let m = Poly::new(&Rationals, mcoeffs);
    let nf = NumberField::new(m, &format!("{pi}*x^{r}-1"))?;
    let lambda = nf.generator().expect("generator");
    let root = canonical_root(d)?;
    let se = Surd::sqrt(d)?.expand(window)?.expansion;
    let embed = |p: &Poly<Rationals>| p.map_coeffs(&nf, |c| nf.from_rational(c).expect("rational"));
    let first_zero = se.q.iter().position(|q| nf.is_zero(&embed(q).eval(&lambda)));
    let dn = embed(d);
    let lin = Poly::linear(&nf, &lambda);
    let s = Surd::new(&Poly::zero(&nf), &Poly::one(&nf), &(&(&lin * &lin) * &dn), &nf.from_rational(&root).expect("rational"))?;
    let expansion = s.expand(product_budget)?.expansion;
    Ok(EisensteinCertificate { k_profile: expansion.k_profile(), field: nf, lambda, window: se.len(), first_zero, expansion })
}
