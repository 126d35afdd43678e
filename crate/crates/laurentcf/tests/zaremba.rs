mod common;

use common::{poly, polys, rand_poly};
use laurentcf::contfrac::expand_rational;
use laurentcf::laurent::LaurentStream;
use laurentcf::zaremba::{
    baum_sweet_normal, construct_partner_infinite, default_supply, folded_partner, friesen_prefix_solve,
    hankel_profile, is_normal_pair, monic_polys, orthogonal_multiplicity, splits_construct, splits_search,
    SplitsOutcome, CENSUS_CAP,
};
use laurentcf::{Poly, PrimeField, Rationals};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fp(p: u64) -> PrimeField {
    PrimeField::new(p).unwrap()
}

fn m_of(f: &Poly<PrimeField>) -> u64 {
    orthogonal_multiplicity(f, 0, 0, CENSUS_CAP).unwrap().multiplicity
}

fn lauder_bound(q: u64, d: u32) -> u64 {
    (q - 1).pow(d.div_ceil(2)) * q.pow(d / 2)
}

#[test]
fn census_witnesses_are_normal() {
    let f5 = fp(5);
    let f = poly(&f5, "T^5-T");
    let r = orthogonal_multiplicity(&f, 16, 0, CENSUS_CAP).unwrap();
    assert_eq!(r.multiplicity, 400);
    assert_eq!(r.witnesses.len(), 16);
    for g in &r.witnesses {
        assert!(g.deg() < f.deg() && f.is_coprime(g));
        let e = expand_rational(g, &f, 10).unwrap();
        assert!(e.is_normal(), "{g}");
    }
    let w1 = orthogonal_multiplicity(&f, 16, 1, CENSUS_CAP).unwrap();
    assert_eq!(w1.witnesses, r.witnesses);
    assert!(orthogonal_multiplicity(&f, 16, 0, 100).is_err());
}

#[test]
fn lauder_bound_holds() {
    for (q, dmax) in [(2u64, 6usize), (3, 4), (5, 3)] {
        let k = fp(q);
        for d in 1..=dmax {
            for f in monic_polys(&k, d) {
                assert!(m_of(&f) <= lauder_bound(q, d as u32), "m({f}) over F{q}");
            }
        }
    }
}

#[test]
fn friesen_positivity() {
    // q >= 2d forces a normal partner for every f of degree d.
    for (q, dmax) in [(3u64, 1usize), (5, 2), (7, 3)] {
        let k = fp(q);
        for d in 1..=dmax {
            for f in monic_polys(&k, d) {
                assert!(m_of(&f) > 0, "m({f}) over F{q}");
            }
        }
    }
}

#[test]
fn census_invariant_under_affine_change() {
    let k = fp(5);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..12 {
        let d = rng.gen_range(2..=4);
        let f = rand_poly(&k, &mut rng, d);
        let a = rng.gen_range(1..5u64);
        let b = rng.gen_range(0..5u64);
        let sub = Poly::new(&k, vec![b, a]);
        let c = rng.gen_range(1..5u64);
        let m = m_of(&f);
        assert_eq!(m_of(&f.compose(&sub)), m, "{f} under T -> {a}T+{b}");
        assert_eq!(m_of(&f.scale(&c)), m, "{f} scaled by {c}");
    }
}

#[test]
fn hankel_profile_matches_continuants() {
    let k = fp(5);
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..100 {
        let d = rng.gen_range(1..=6);
        let f = rand_poly(&k, &mut rng, d);
        let gd = rng.gen_range(0..d);
        let g = rand_poly(&k, &mut rng, gd);
        let s = LaurentStream::from_rational(&g, &f).unwrap();
        let e = expand_rational(&g, &f, 20).unwrap();
        let mut want: Vec<usize> = e.q.iter().filter_map(|q| q.deg()).filter(|&j| (1..=8).contains(&j)).collect();
        want.dedup();
        assert_eq!(hankel_profile(&s, 8).unwrap(), want, "{g}/{f}");
    }
    let f7 = fp(7);
    let s = LaurentStream::from_rational(&poly(&f7, "1"), &poly(&f7, "T^2+3")).unwrap();
    assert!(!hankel_profile(&s, 3).unwrap().contains(&1));
    let big = LaurentStream::from_rational(&poly(&f7, "T^2"), &poly(&f7, "T+1")).unwrap();
    assert!(hankel_profile(&big, 3).is_err());
}

#[test]
fn baum_sweet_agrees_with_expansion() {
    let k = fp(2);
    let s = LaurentStream::from_rational(&poly(&k, "T+1"), &poly(&k, "T^2")).unwrap();
    let c: Vec<u64> = (1..=3).map(|e| s.coeff(-e)).collect();
    assert_eq!(c, vec![1, 1, 0]);
    assert!(baum_sweet_normal(&c));
    assert!(is_normal_pair(&poly(&k, "T^2"), &poly(&k, "T+1")));

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..300 {
        let d = rng.gen_range(1..=10);
        let f = rand_poly(&k, &mut rng, d);
        let gd = rng.gen_range(0..d);
        let g = rand_poly(&k, &mut rng, gd);
        if !f.is_coprime(&g) {
            continue;
        }
        let s = LaurentStream::from_rational(&g, &f).unwrap();
        // H_1..H_d read c_{-1}..c_{-(2d-1)}
        let c: Vec<u64> = (1..2 * d as i64).map(|e| s.coeff(-e)).collect();
        assert_eq!(baum_sweet_normal(&c), is_normal_pair(&f, &g), "{g}/{f}");
    }
}

#[test]
fn splits_orders_over_f3() {
    let k = fp(3);
    let f = poly(&k, "T^5-T^3");
    match splits_construct(&f, &[2, 0, 1, 0, 0]).unwrap() {
        SplitsOutcome::Found { g, expansion, .. } => {
            assert!(is_normal_pair(&f, &g));
            assert!(expansion.is_normal());
        }
        SplitsOutcome::Blocked { step, .. } => panic!("blocked at {step}"),
    }
    assert!(is_normal_pair(&f, &poly(&k, "T^4-T^3+T^2+T-1")));
    assert!(matches!(splits_construct(&f, &[0, 0, 0, 1, 2]).unwrap(), SplitsOutcome::Blocked { .. }));
    let (order, found) = splits_search(&f, &[0, 0, 0, 1, 2], 60).unwrap().unwrap();
    assert!(matches!(found, SplitsOutcome::Found { .. }), "{order:?}");
    assert!(splits_construct(&f, &[0, 1, 2]).is_err());
}

#[test]
fn friesen_random_prefixes() {
    let k = fp(5);
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..20 {
        let f = rand_poly(&k, &mut rng, 5);
        let prefix: Vec<_> = (0..2).map(|_| rand_poly(&k, &mut rng, 1)).collect();
        let sols = friesen_prefix_solve(&f, &prefix).unwrap();
        assert_eq!(sols.len(), 5);
        for g in &sols {
            let e = expand_rational(&f, g, 10).unwrap();
            assert_eq!(e.quotients[..2], prefix[..]);
        }
    }
    let f3 = fp(3);
    let g = poly(&f3, "T^4-T^2+T");
    let f = poly(&f3, "T^5");
    let own = expand_rational(&f, &g, 10).unwrap().quotients;
    assert!(friesen_prefix_solve(&f, &own[..2]).unwrap().contains(&g));
    assert!(friesen_prefix_solve(&f, &polys(&f3, &["T^2", "T", "T"])).is_err());
}

#[test]
fn infinite_construction_over_q() {
    let q = Rationals;
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..5 {
        let f = rand_poly(&q, &mut rng, 4);
        let c = construct_partner_infinite(&f, &default_supply(&q, 40)).unwrap();
        assert!(is_normal_pair(&f, &c.g));
        assert_eq!(c.k_trace.first(), Some(&4));
        assert_eq!(c.k_trace.last(), Some(&1));
        assert!(c.k_trace.windows(2).all(|w| w[1] + 1 == w[0]));
    }
    let lin = construct_partner_infinite(&poly(&q, "2*T+1"), &default_supply(&q, 4)).unwrap();
    assert_eq!(lin.g, Poly::one(&q));
    assert!(lin.lambdas.is_empty());
}

#[test]
fn folded_partners() {
    let q = Rationals;
    let t = poly(&q, "T");
    assert_eq!(folded_partner(&t, 1).unwrap().0, Poly::one(&q));
    let (g2, e2) = folded_partner(&t, 2).unwrap();
    assert_eq!(g2, poly(&q, "T+1"));
    assert_eq!(e2.quotients, polys(&q, &["0", "T-1", "T+1"]));
    assert_eq!(folded_partner(&t, 5).unwrap().1.k_profile().k, Some(1));
    assert!(folded_partner(&poly(&q, "T^2"), 2).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn folded_partner_is_normal(p in prop::sample::select(vec![3u64, 5, 7]), a in 1u64..7, b in 0u64..7, d in 1u32..=12) {
        let k = fp(p);
        let pl = Poly::new(&k, vec![b % p, a % p]);
        prop_assume!(pl.deg() == Some(1));
        let (g, e) = folded_partner(&pl, d).unwrap();
        prop_assert!(is_normal_pair(&pl.pow(d), &g));
        prop_assert!(e.is_normal());
    }
}
