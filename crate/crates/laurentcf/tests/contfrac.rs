mod common;

use common::{poly, polys, rand_poly, rand_word};
use laurentcf::contfrac::{
    cf_expand, cf_value, continuant, expand_rational, fold, is_convergent, mobius_convergent_transfer,
    normalize_to_regular, tail_equivalence, unary_transform, Expansion, FoldVariant, TransferCase, Transform,
};
use laurentcf::laurent::{LaurentStream, DEFAULT_SCAN};
use laurentcf::{Field, Poly, PrimeField, Rationals};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn same_value<F: Field>(a: &(Poly<F>, Poly<F>), b: &(Poly<F>, Poly<F>)) -> bool {
    &a.0 * &b.1 == &a.1 * &b.0
}

#[test]
fn rational_expansion() {
    let f = Rationals;
    let e = expand_rational(&poly(&f, "T^5+1"), &poly(&f, "T^4+T^2+1"), 50).unwrap();
    assert_eq!(e.quotients, polys(&f, &["T", "-T", "-T^2+T-2", "1/3*T+1/3"]));
    assert!(e.terminated && !e.budget_exhausted);
    assert_eq!(e.degrees(), vec![1, 1, 2, 1]);
    assert_eq!(e.k_profile().k, Some(2));
    assert!(!e.is_normal());

    let c = expand_rational(&poly(&f, "7/2"), &poly(&f, "1"), 10).unwrap();
    assert_eq!(c.quotients, polys(&f, &["7/2"]));
    assert!(c.terminated);
}

#[test]
fn sqrt_expansion_prefix() {
    let f = Rationals;
    let s = LaurentStream::sqrt(&poly(&f, "T^4+T^2+1")).unwrap().stream;
    let e = cf_expand(&s, 4).unwrap();
    assert_eq!(e.quotients, polys(&f, &["T^2+1/2", "8/3*T^2+4/3", "2*T^2+1", "8/3*T^2+4/3"]));
    assert!(!e.terminated && e.budget_exhausted);
}

#[test]
fn continuants_and_values() {
    let f = Rationals;
    assert_eq!(continuant(&f, &[]), Poly::one(&f));
    let (a, b) = (poly(&f, "T+2"), poly(&f, "3*T"));
    assert_eq!(continuant(&f, &[a.clone(), b.clone()]), &(&a * &b) + &Poly::one(&f));
    let w = polys(&f, &["T", "T+1", "T-2", "T^2"]);
    assert_eq!(
        cf_value(&f, &w).unwrap(),
        (poly(&f, "T^5-T^4-T^2+T+1"), poly(&f, "T^4-T^3-T^2+T+1"))
    );
    assert_eq!(cf_value(&f, std::slice::from_ref(&a)).unwrap(), (a, Poly::one(&f)));
}

#[test]
fn convergence_tests() {
    let f = Rationals;
    let s = LaurentStream::sqrt(&poly(&f, "T^4+T^2+1")).unwrap().stream;
    let c = is_convergent(&poly(&f, "T^2+1/2"), &Poly::one(&f), &s, DEFAULT_SCAN).unwrap();
    assert!(c.convergent);
    assert_eq!(c.next_degree, Some(2));

    let r = LaurentStream::from_rational(&poly(&f, "T^5+1"), &poly(&f, "T^4+T^2+1")).unwrap();
    assert!(is_convergent(&poly(&f, "T"), &Poly::one(&f), &r, DEFAULT_SCAN).unwrap().convergent);
    assert!(!is_convergent(&poly(&f, "T+1"), &Poly::one(&f), &r, DEFAULT_SCAN).unwrap().convergent);

    let e = cf_expand(&s, 8).unwrap();
    for n in 0..e.len() {
        let c = is_convergent(&e.p[n], &e.q[n], &s, DEFAULT_SCAN).unwrap();
        assert!(c.convergent, "n = {n}");
        if n + 1 < e.len() {
            assert_eq!(c.next_degree, Some(e.quotients[n + 1].deg_i()));
        }
    }
    assert!(is_convergent(&poly(&f, "T"), &poly(&f, "T"), &s, 64).is_err());
}

#[test]
fn normalization() {
    let f = Rationals;
    let w = polys(&f, &["T^2", "0", "0", "1", "T", "-1", "T", "T", "-T"]);
    let e = normalize_to_regular(&f, &w, 50).unwrap();
    assert_eq!(e.quotients, polys(&f, &["T^2+1", "-T", "T-1", "T", "-T"]));
    let regular = polys(&f, &["T", "-T", "-T^2+T-2", "1/3*T+1/3"]);
    assert_eq!(normalize_to_regular(&f, &regular, 50).unwrap().quotients, regular);
    let (a, b) = (poly(&f, "T^2+3"), poly(&f, "2*T"));
    let e = normalize_to_regular(&f, &[a.clone(), Poly::zero(&f), b.clone()], 10).unwrap();
    assert_eq!(e.quotients, vec![&a + &b]);
}

#[test]
fn folding_examples() {
    let f = Rationals;
    let w = polys(&f, &["T-1", "T+1"]);
    let t = poly(&f, "T");
    let folded = fold(&f, &Poly::zero(&f), &w, &t, &FoldVariant::Plain).unwrap();
    let (p2, q2) = cf_value(&f, &polys(&f, &["0", "T-1", "T+1"])).unwrap();
    let closed = (&(&(&t * &p2) * &q2) + &Poly::one(&f), &(&t * &q2) * &q2);
    assert!(same_value(&cf_value(&f, &folded.word).unwrap(), &closed));
    assert!(same_value(&(folded.num, folded.den), &closed));

    let e = expand_rational(&poly(&f, "T+1"), &poly(&f, "T^2"), 10).unwrap();
    assert_eq!(e.quotients, polys(&f, &["0", "T-1", "T+1"]));
    assert_eq!(e.k_profile().k, Some(1));
}

#[test]
fn unary_transforms() {
    let f = Rationals;
    let e = expand_rational(&poly(&f, "T^5+1"), &poly(&f, "T^4+T^2+1"), 50).unwrap();
    let k = e.k_profile().k;

    let added = unary_transform(&e, &Transform::AddPoly(poly(&f, "T^3"))).unwrap();
    assert_eq!(added.quotients[0], poly(&f, "T^3+T"));
    assert_eq!(added.quotients[1..], e.quotients[1..]);
    assert_eq!(added.k_profile().k, k);

    let neg = unary_transform(&e, &Transform::ScaleConst(f.from_i64(-1))).unwrap();
    assert_eq!(neg.quotients, e.quotients.iter().map(|a| -a).collect::<Vec<_>>());
    assert_eq!(neg.k_profile().k, k);

    let sub = unary_transform(&e, &Transform::Substitute(poly(&f, "T^2"))).unwrap();
    assert_eq!(sub.degrees(), vec![2, 2, 4, 2]);
    assert_eq!(sub.k_profile().k, Some(4));
    let (num, den) = e.value().unwrap();
    let tt = poly(&f, "T^2");
    assert!(same_value(&sub.value().unwrap(), &(num.compose(&tt), den.compose(&tt))));

    let f3 = PrimeField::new(3).unwrap();
    let e3 = expand_rational(&poly(&f3, "T^2+1"), &poly(&f3, "T^3-T+1"), 20).unwrap();
    let fr = unary_transform(&e3, &Transform::Frobenius).unwrap();
    let (a, b) = e3.value().unwrap();
    assert!(same_value(&fr.value().unwrap(), &(a.pow(3), b.pow(3))));
    assert!(unary_transform(&e, &Transform::Frobenius).is_err());
}

#[test]
fn transfer_example() {
    let f = Rationals;
    let e = Expansion::from_quotients(&f, polys(&f, &["T", "T+1", "T-2", "T^2"]), true, false);
    let t = poly(&f, "T");
    let got = mobius_convergent_transfer(&e, &t, &Poly::one(&f)).unwrap();
    let (num, den) = e.value().unwrap();
    let direct = expand_rational(&(&t * &num), &den, 50).unwrap();
    assert_eq!(direct.quotients, polys(&f, &["T^2+1", "-T", "T-1", "T", "-T"]));
    let mut direct_pairs: Vec<_> = (0..direct.len())
        .map(|n| {
            let li = f.inv(&direct.q[n].lead()).unwrap();
            (direct.p[n].scale(&li), direct.q[n].scale(&li))
        })
        .collect();
    direct_pairs.sort_by_key(|(_, q)| q.deg_i());
    let mut got_pairs: Vec<_> = got.iter().map(|t| (t.u.clone(), t.v.clone())).collect();
    got_pairs.dedup();
    assert_eq!(got_pairs, direct_pairs);

    let id = mobius_convergent_transfer(&e, &Poly::one(&f), &Poly::one(&f)).unwrap();
    assert_eq!(id.len(), e.len());
    for (n, t) in id.iter().enumerate() {
        assert_eq!(t.case, TransferCase::General);
        let li = f.inv(&e.q[n].lead()).unwrap();
        assert_eq!((t.u.clone(), t.v.clone()), (e.p[n].scale(&li), e.q[n].scale(&li)));
    }
}

#[test]
fn tail_matches() {
    let f = Rationals;
    let e = expand_rational(&poly(&f, "T^7+2*T^3-1"), &poly(&f, "T^6-T^2+T"), 50).unwrap();
    let tail = Expansion::from_quotients(&f, e.quotients[2..].to_vec(), true, false);
    let m = tail_equivalence(&e, &tail, 1).unwrap();
    assert_eq!((m.n, m.m, m.c), (2, 0, f.one()));

    let c = f.from_i64(3);
    let scaled = unary_transform(&e, &Transform::ScaleConst(c.clone())).unwrap();
    let m = tail_equivalence(&e, &scaled, 2).unwrap();
    assert_eq!((m.n, m.m, m.c), (0, 0, c));

    let shifted = unary_transform(&e, &Transform::AddPoly(poly(&f, "T"))).unwrap();
    let m = tail_equivalence(&e, &shifted, 1).unwrap();
    assert_eq!((m.n, m.m, m.c), (1, 1, f.one()));
}

fn k_of<F: Field>(num: &Poly<F>, den: &Poly<F>) -> Option<usize> {
    expand_rational(num, den, 100).unwrap().k_profile().k
}

#[test]
fn linear_multiplier_lowers_k() {
    let f7 = PrimeField::new(7).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 40 {
        let w = rand_word(&f7, &mut rng, 6, 3);
        let Ok((num, den)) = cf_value(&f7, &w) else { continue };
        let e = expand_rational(&num, &den, 100).unwrap();
        let k = e.k_profile().k.unwrap_or(0);
        if k < 2 {
            continue;
        }
        let Some(lambda) = (0..7u64).find(|l| e.q.iter().all(|q| q.eval(l) != 0)) else { continue };
        let a = Poly::linear(&f7, &lambda);
        assert_eq!(k_of(&(&a * &num), &den), Some(k - 1), "word {w:?}, lambda {lambda}");
        checked += 1;
    }
}

fn transform_values<F: Field>(f: &F, seed: u64) -> Result<(), TestCaseError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = rand_word(f, &mut rng, 6, 3);
    let e = normalize_to_regular(f, &w, 50).unwrap();
    let (num, den) = e.value().unwrap();
    prop_assert!(same_value(&(num.clone(), den.clone()), &cf_value(f, &w).unwrap()));
    prop_assert!(e.is_regular());

    let inv = unary_transform(&e, &Transform::Invert).unwrap();
    if !num.is_zero() {
        prop_assert!(same_value(&inv.value().unwrap(), &(den.clone(), num.clone())));
    }
    let c = f.from_i64(rng.gen_range(1..=3));
    let sc = unary_transform(&e, &Transform::ScaleConst(c.clone())).unwrap();
    prop_assert!(same_value(&sc.value().unwrap(), &(num.scale(&c), den.clone())));
    let pd = rng.gen_range(1..=2);
    let p = rand_poly(f, &mut rng, pd);
    let sub = unary_transform(&e, &Transform::Substitute(p.clone())).unwrap();
    prop_assert!(same_value(&sub.value().unwrap(), &(num.compose(&p), den.compose(&p))));
    prop_assert_eq!(sub.k_profile().k, e.k_profile().k.map(|k| k * pd));
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn transforms_track_values(seed in any::<u64>()) {
        transform_values(&Rationals, seed)?;
        transform_values(&PrimeField::new(5).unwrap(), seed)?;
    }

    #[test]
    fn generalized_continuant_identity(seed in any::<u64>()) {
        // p_{n+i} q_n - p_n q_{n+i} = (-1)^n C(a_{n+2}, .., a_{n+i})
        let f = PrimeField::new(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = rand_word(&f, &mut rng, 9, 2);
        let e = Expansion::from_quotients(&f, w.clone(), true, false);
        for n in 0..e.len() {
            for i in 1..=4 {
                if n + i >= e.len() {
                    break;
                }
                let lhs = &(&e.p[n + i] * &e.q[n]) - &(&e.p[n] * &e.q[n + i]);
                let c = continuant(&f, &w[n + 2..=n + i]);
                let rhs = if n % 2 == 0 { c } else { -&c };
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
