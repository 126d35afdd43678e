//! Reduction of Laurent series over Q modulo a rational prime: normalized
//! continuants, the index map `rho` onto the convergents of the reduction,
//! degree monotonicity and normality certificates.

use num_rational::BigRational;
use num_traits::Zero;

use crate::algebra::{rational_valuation, Field, Poly, PrimeField, Rationals};
use crate::contfrac::{expand_rational, Expansion};
use crate::error::{Error, Result};
use crate::laurent::LaurentStream;
use crate::surd::{detect_periodicity, PeriodStatus, Surd};

/// Coefficientwise reduction; the error names the first bad coefficient.
pub fn reduce_poly(f: &Poly<Rationals>, fp: &PrimeField) -> Result<Poly<PrimeField>> {
    let mut out = Vec::with_capacity(f.coeffs().len());
    for c in f.coeffs() {
        out.push(fp.from_rational(c).ok_or_else(|| Error::NotReducible { prime: fp.modulus(), coeff: c.to_string() })?);
    }
    Ok(Poly::new(fp, out))
}

fn min_valuation(f: &Poly<Rationals>, p: u64) -> i64 {
    f.coeffs().iter().filter(|c| !c.is_zero()).map(|c| rational_valuation(c, p)).min().unwrap_or(0)
}

fn p_power(p: u64, i: i64) -> BigRational {
    Rationals.powi(&Rationals.from_i64(p as i64), i).expect("p nonzero")
}

/// An element of `Q((1/T))` with finite description.
#[derive(Clone, Debug)]
pub enum QAlpha {
    Rational(Poly<Rationals>, Poly<Rationals>),
    Surd(Surd<Rationals>),
}

/// Its reduction over `F_p`.
#[derive(Clone, Debug)]
pub enum FpAlpha {
    Rational(Poly<PrimeField>, Poly<PrimeField>),
    Surd(Surd<PrimeField>),
}

impl QAlpha {
    pub fn stream(&self) -> Result<LaurentStream<Rationals>> {
        match self {
            QAlpha::Rational(a, b) => LaurentStream::from_rational(a, b),
            QAlpha::Surd(s) => Ok(s.stream()),
        }
    }

    pub fn expansion(&self, budget: usize) -> Result<Expansion<Rationals>> {
        match self {
            QAlpha::Rational(a, b) => expand_rational(a, b, budget),
            QAlpha::Surd(s) => Ok(s.expand(budget)?.expansion),
        }
    }

    /// Check `depth` coefficients of the series for `p`-integrality.
    pub fn check_reducible(&self, p: u64, depth: usize) -> Result<()> {
        let s = self.stream()?;
        let top = s.top();
        for k in 0..depth as i64 {
            let c = s.coeff(top - k);
            if !c.is_zero() && rational_valuation(&c, p) < 0 {
                return Err(Error::NotReducible { prime: p, coeff: format!("{c} at T^{}", top - k) });
            }
        }
        Ok(())
    }

    pub fn reduce(&self, fp: &PrimeField) -> Result<FpAlpha> {
        let p = fp.modulus();
        match self {
            QAlpha::Rational(a, b) => {
                // scale so that the denominator is primitive at p; then c*a = alpha*c*b is integral
                let c = p_power(p, -min_valuation(b, p));
                let (ca, cb) = (a.scale(&c), b.scale(&c));
                Ok(FpAlpha::Rational(reduce_poly(&ca, fp)?, reduce_poly(&cb, fp)?))
            }
            QAlpha::Surd(s) => {
                if p == 2 {
                    return Err(Error::Unsupported("square roots modulo 2".into()));
                }
                let (r, sd, d) = (reduce_poly(&s.r, fp)?, reduce_poly(&s.s, fp)?, reduce_poly(&s.d, fp)?);
                if sd.deg() != s.s.deg() || d.deg() != s.d.deg() {
                    return Err(Error::Precondition(format!("a leading coefficient vanishes mod {p}")));
                }
                let root = fp.from_rational(&s.root).ok_or_else(|| Error::NotReducible { prime: p, coeff: s.root.to_string() })?;
                Ok(FpAlpha::Surd(Surd::new(&r, &sd, &d, &root)?))
            }
        }
    }
}

impl FpAlpha {
    pub fn expansion(&self, budget: usize) -> Result<Expansion<PrimeField>> {
        match self {
            FpAlpha::Rational(a, b) => expand_rational(a, b, budget),
            FpAlpha::Surd(s) => Ok(s.expand(budget)?.expansion),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormalizedContinuant {
    /// `h_n = p^{i_n}`, `-i_n` the least valuation of the coefficients of `q_n`.
    pub i: i64,
    pub x: Poly<PrimeField>,
    pub y: Poly<PrimeField>,
}

/// `(i_n, reduction of h_n p_n, reduction of h_n q_n)` for every convergent.
pub fn normalized_continuants(e: &Expansion<Rationals>, fp: &PrimeField) -> Result<Vec<NormalizedContinuant>> {
    let p = fp.modulus();
    (0..e.len())
        .map(|n| {
            let i = -min_valuation(&e.q[n], p);
            let h = p_power(p, i);
            let x = reduce_poly(&e.p[n].scale(&h), fp)
                .map_err(|_| Error::Invariant(format!("h_n p_n not reducible at n = {n}")))?;
            Ok(NormalizedContinuant { i, x, y: reduce_poly(&e.q[n].scale(&h), fp)? })
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct ReductionReport {
    pub prime: u64,
    pub reducible: bool,
    pub checked_depth: usize,
    pub expansion: Expansion<Rationals>,
    pub reduced_expansion: Expansion<PrimeField>,
    pub normalized: Vec<NormalizedContinuant>,
    pub rho: Vec<usize>,
    pub rho_starts_at_zero: bool,
    pub nondecreasing: bool,
    pub step_le_one: bool,
    pub surjective: bool,
    /// On every increment `x_{n+1}, y_{n+1}` are coprime and `deg y = deg q_{n+1}`.
    pub increments_exact: bool,
    /// `i_n + i_{n+1} >= 0`, with equality exactly on increments.
    pub valuation_pairing: bool,
    /// `ord(alpha bar) > 0`: `x_n` may reduce to zero.
    pub ord_positive: bool,
}

impl ReductionReport {
    pub fn all_properties(&self) -> bool {
        self.rho_starts_at_zero && self.nondecreasing && self.step_le_one && self.surjective && self.increments_exact && self.valuation_pairing
    }
}

/// Match each normalized convergent of `alpha` to a convergent of its
/// reduction and re-check the properties of the index map.
pub fn rho_map(alpha: &QAlpha, p: u64, budget: usize, depth: usize) -> Result<ReductionReport> {
    let fp = PrimeField::new(p)?;
    alpha.check_reducible(p, depth)?;
    let e = alpha.expansion(budget)?;
    let red = alpha.reduce(&fp)?;
    let re = red.expansion(budget + 1)?;
    let normalized = normalized_continuants(&e, &fp)?;
    let mut rho = Vec::with_capacity(normalized.len());
    for (n, c) in normalized.iter().enumerate() {
        let m = (0..re.len())
            .find(|&m| &c.x * &re.q[m] == &c.y * &re.p[m])
            .ok_or_else(|| Error::Invariant(format!("reduced convergent {n} matches no convergent of the reduction")))?;
        rho.push(m);
    }
    let nondecreasing = rho.windows(2).all(|w| w[0] <= w[1]);
    let step_le_one = rho.windows(2).all(|w| w[1] <= w[0] + 1);
    let top = rho.last().copied().unwrap_or(0);
    let surjective = (0..=top).all(|m| rho.contains(&m))
        && (!(e.terminated && re.terminated) || top + 1 == re.len());
    let mut increments_exact = true;
    let mut valuation_pairing = true;
    for n in 0..rho.len().saturating_sub(1) {
        let s = normalized[n].i + normalized[n + 1].i;
        let inc = rho[n + 1] == rho[n] + 1;
        if s < 0 || (s == 0) != inc {
            valuation_pairing = false;
        }
        if inc {
            let c = &normalized[n + 1];
            if !c.x.is_coprime(&c.y) || c.y.deg() != e.q[n + 1].deg() {
                increments_exact = false;
            }
        }
    }
    let ord_positive = re.quotients.first().is_some_and(|a| a.is_zero());
    Ok(ReductionReport {
        prime: p,
        reducible: true,
        checked_depth: depth,
        rho_starts_at_zero: rho.first() == Some(&0),
        expansion: e,
        reduced_expansion: re,
        normalized,
        rho,
        nondecreasing,
        step_le_one,
        surjective,
        increments_exact,
        valuation_pairing,
        ord_positive,
    })
}

#[derive(Clone, Debug)]
pub struct MonotonicityReport {
    pub degrees: Vec<i64>,
    pub reduced_degrees: Vec<i64>,
    /// `(m + 1, predicted deg b_{m+1}, actual)` for every block fully inside the window.
    pub blocks: Vec<(usize, i64, i64)>,
    pub formula_holds: bool,
    pub k: Option<usize>,
    pub k_reduced: Option<usize>,
    /// `K(alpha bar) >= deg a_n` for every `a_n` inside a complete block; a
    /// terminating reduction leaves its last block open.
    pub k_grows: bool,
}

/// `deg b_{m+1} = deg a_{n_m + 1} + .. + deg a_{N_m + 1}` where
/// `rho^{-1}(m) = [n_m, N_m]`.
pub fn k_monotonicity_check(alpha: &QAlpha, p: u64, budget: usize, depth: usize) -> Result<MonotonicityReport> {
    let r = rho_map(alpha, p, budget, depth)?;
    let da = r.expansion.degrees();
    let db = r.reduced_expansion.degrees();
    let mut blocks = Vec::new();
    let mut covered: Option<i64> = None;
    let top = r.rho.last().copied().unwrap_or(0);
    for m in 0..=top {
        let lo = r.rho.iter().position(|&x| x == m).expect("surjective");
        let hi = r.rho.iter().rposition(|&x| x == m).expect("surjective");
        if hi + 1 >= da.len() || m + 1 >= db.len() {
            continue;
        }
        let predicted: i64 = da[lo + 1..=hi + 1].iter().sum();
        covered = covered.max(da[lo + 1..=hi + 1].iter().copied().max());
        blocks.push((m + 1, predicted, db[m + 1]));
    }
    let formula_holds = blocks.iter().all(|&(_, a, b)| a == b);
    let k = r.expansion.k_profile().k;
    let k_reduced = r.reduced_expansion.k_profile().k;
    Ok(MonotonicityReport {
        degrees: da,
        reduced_degrees: db,
        blocks,
        formula_holds,
        k_grows: covered.is_none_or(|c| k_reduced.is_some_and(|kr| kr as i64 >= c)),
        k,
        k_reduced,
    })
}

/// Evidence for normality of a quadratic surd over Q.
#[derive(Clone, Debug)]
pub enum NormalityVerdict {
    /// The reduction is periodic with every quotient after `a_0` of degree 1.
    ProvenNormal(NormalityCertificate),
    /// Nothing contradicts normality on the window, but nothing proves it.
    ObservedOnly { window: usize, reduced_k: Option<usize> },
    /// A quotient of degree > 1 occurs at this index of `alpha`'s own expansion.
    NotNormal { index: usize, degree: usize },
}

#[derive(Clone, Debug)]
pub struct NormalityCertificate {
    pub prime: u64,
    pub reduced: Surd<PrimeField>,
    pub preperiod: usize,
    pub period: usize,
    /// Quotients of the reduction through one full period.
    pub quotients: Vec<Poly<PrimeField>>,
}

impl NormalityCertificate {
    /// Recompute the reduction's expansion and re-check period and degrees.
    pub fn replay(&self) -> Result<bool> {
        let n = self.preperiod + self.period;
        let e = self.reduced.expand(n + self.period + 1)?.expansion;
        let periodic = (self.preperiod..n).all(|i| e.quotients[i] == e.quotients[i + self.period]);
        Ok(periodic && e.quotients[..=n] == self.quotients[..] && e.quotients[1..=n].iter().all(|a| a.deg() == Some(1)))
    }
}

/// Expand the reduction of `alpha` modulo `p`; a periodic normal reduction
/// proves `alpha` normal.
pub fn normality_by_reduction(alpha: &Surd<Rationals>, p: u64, budget: usize, own_window: usize) -> Result<NormalityVerdict> {
    let fp = PrimeField::new(p)?;
    let own = alpha.expand(own_window)?.expansion;
    if let Some((i, a)) = own.quotients.iter().enumerate().skip(1).find(|(_, a)| a.deg().unwrap_or(0) > 1) {
        return Ok(NormalityVerdict::NotNormal { index: i, degree: a.deg().unwrap_or(0) });
    }
    let qa = QAlpha::Surd(alpha.clone());
    qa.check_reducible(p, 2 * budget)?;
    let FpAlpha::Surd(red) = qa.reduce(&fp)? else { unreachable!("surd reduces to a surd") };
    let (se, info) = detect_periodicity(&red, budget)?;
    let q = &se.expansion.quotients;
    if let (PeriodStatus::Periodic, Some(period)) = (info.status, info.period) {
        let end = info.preperiod + period;
        if info.period_verified && q.len() > end && q[1..=end].iter().all(|a| a.deg() == Some(1)) {
            return Ok(NormalityVerdict::ProvenNormal(NormalityCertificate {
                prime: p,
                reduced: red,
                preperiod: info.preperiod,
                period,
                quotients: q[..=end].to_vec(),
            }));
        }
    }
    Ok(NormalityVerdict::ObservedOnly { window: own.len(), reduced_k: se.expansion.k_profile().k })
}
