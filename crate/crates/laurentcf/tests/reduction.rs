mod common;

use common::{poly, polys};
use laurentcf::contfrac::cf_value;
use laurentcf::reduction::{k_monotonicity_check, normality_by_reduction, reduce_poly, rho_map, NormalityVerdict, QAlpha};
use laurentcf::surd::Surd;
use laurentcf::{Error, Field, Poly, PrimeField, Rationals};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fp(p: u64) -> PrimeField {
    PrimeField::new(p).unwrap()
}

/// `sqrt(T^6 - 1 + a) / (T^2 - 1 + b)`.
fn sextic_surd(a: &Poly<Rationals>, b: &Poly<Rationals>) -> Surd<Rationals> {
    let q = Rationals;
    let d = &poly(&q, "T^6-1") + a;
    let c = &poly(&q, "T^2-1") + b;
    Surd::from_quadratic(&Poly::zero(&q), &Poly::one(&q), &c, &d, &q.one()).unwrap()
}

#[test]
fn coefficient_reduction() {
    let q = Rationals;
    let f = poly(&q, "1/3*T+5/9");
    assert_eq!(reduce_poly(&f, &fp(2)).unwrap(), poly(&fp(2), "T+1"));
    assert!(matches!(reduce_poly(&f, &fp(3)), Err(Error::NotReducible { prime: 3, .. })));
    let g = poly(&q, "7*T^3-12*T+5");
    for p in [2, 3, 5, 7, 11] {
        let k = fp(p);
        let want = Poly::new(&k, g.coeffs().iter().map(|c| k.from_rational(c).unwrap()).collect());
        assert_eq!(reduce_poly(&g, &k).unwrap(), want);
    }
}

#[test]
fn collapse_mod_three() {
    let q = Rationals;
    let alpha = QAlpha::Rational(poly(&q, "3*T^2-5*T"), poly(&q, "T^3+5"));
    let m = k_monotonicity_check(&alpha, 3, 20, 40).unwrap();
    assert_eq!(m.degrees[1..], [1, 1, 1]);
    assert_eq!(m.reduced_degrees[1..], [2, 1]);
    assert!(m.formula_holds && m.k_grows);
    assert_eq!((m.k, m.k_reduced), (Some(1), Some(2)));
}

#[test]
fn integral_continuants_do_not_collapse() {
    let q = Rationals;
    let w = polys(&q, &["0", "T+1", "T^2-2", "T+3", "2*T-1"]);
    let (num, den) = cf_value(&q, &w).unwrap();
    let alpha = QAlpha::Rational(num, den);
    for p in [3, 5, 7, 11] {
        let r = rho_map(&alpha, p, 20, 40).unwrap();
        assert!(r.normalized.iter().all(|c| c.i == 0), "p = {p}");
        assert_eq!(r.rho, (0..w.len()).collect::<Vec<_>>(), "p = {p}");
        assert!(r.all_properties());
        let m = k_monotonicity_check(&alpha, p, 20, 40).unwrap();
        assert_eq!(m.degrees, m.reduced_degrees);
    }
}

#[test]
fn sextic_surd_is_normal() {
    let zero = Poly::zero(&Rationals);
    let alpha = sextic_surd(&zero, &zero);
    for p in [3, 5, 7, 11, 13] {
        match normality_by_reduction(&alpha, p, 60, 8).unwrap() {
            NormalityVerdict::ProvenNormal(cert) => {
                assert_eq!(cert.prime, p);
                assert!(cert.replay().unwrap(), "p = {p}");
            }
            other => panic!("p = {p}: {other:?}"),
        }
        let r = rho_map(&QAlpha::Surd(alpha.clone()), p, 12, 40).unwrap();
        assert!(r.all_properties(), "p = {p}");
    }
}

#[test]
fn large_quotient_is_not_normal() {
    let q = Rationals;
    let alpha = Surd::sqrt(&poly(&q, "T^8+T^4")).unwrap();
    match normality_by_reduction(&alpha, 3, 40, 4).unwrap() {
        NormalityVerdict::NotNormal { index, degree } => assert_eq!((index, degree), (1, 4)),
        other => panic!("{other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn perturbed_sextic_stays_normal(seed in any::<u64>()) {
        // 3-divisible perturbations reduce to the same normal element mod 3
        let q = Rationals;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a: Vec<i64> = (0..6).map(|_| 3 * rng.gen_range(-2..=2)).collect();
        let b: Vec<i64> = (0..2).map(|_| 3 * rng.gen_range(-2..=2)).collect();
        let (pa, pb) = (Poly::from_i64s(&q, &a), Poly::from_i64s(&q, &b));
        prop_assume!((&poly(&q, "T^6-1") + &pa).is_squarefree());
        let alpha = sextic_surd(&pa, &pb);
        let verdict = normality_by_reduction(&alpha, 3, 60, 4).unwrap();
        prop_assert!(matches!(verdict, NormalityVerdict::ProvenNormal(_)), "{:?}", verdict);
    }
}
