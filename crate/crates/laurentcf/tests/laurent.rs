mod common;

use common::{poly, rand_poly};
use laurentcf::laurent::{LaurentStream, DEFAULT_SCAN};
use laurentcf::{Field, PrimeField, Rationals};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[test]
fn rational_stream_prefix() {
    let f = Rationals;
    let s = LaurentStream::from_rational(&poly(&f, "T^3+T"), &poly(&f, "T^2+2*T+1")).unwrap();
    assert_eq!(s.top(), 1);
    let want: Vec<_> = [1, -2, 4, -6, 8, -10, 12].iter().map(|&x| q(x, 1)).collect();
    assert_eq!(s.prefix(7), want);

    let s = LaurentStream::from_rational(&poly(&f, "1"), &poly(&f, "5*T+1")).unwrap();
    assert_eq!(s.order(DEFAULT_SCAN), Some(1));
    assert_eq!(s.coeff(-1), q(1, 5));
    assert_eq!(s.coeff(-2), q(-1, 25));
    assert_eq!(s.coeff(-3), q(1, 125));
}

#[test]
fn polynomial_streams_terminate() {
    let f = Rationals;
    let p = poly(&f, "3*T^2-T+7");
    let s = LaurentStream::from_poly(&p);
    assert!((-20..0).all(|e| s.coeff(e) == q(0, 1)));
    let (fl, fr) = s.poly_part();
    assert_eq!(fl, p);
    assert!(fr.vanishes_from(-20));
    assert_eq!(fr.order(DEFAULT_SCAN), None);
}

#[test]
fn inverse_of_rational_stream() {
    let f = Rationals;
    let s = LaurentStream::from_rational(&poly(&f, "T^3+T"), &poly(&f, "T^2+2*T+1")).unwrap();
    let inv = s.inverse(DEFAULT_SCAN).unwrap();
    let direct = LaurentStream::from_rational(&poly(&f, "T^2+2*T+1"), &poly(&f, "T^3+T")).unwrap();
    assert!(inv.prefix_eq(&direct, 20));
    let prod = s.mul(&inv);
    assert_eq!(prod.coeff(0), q(1, 1));
    for e in -20..0 {
        assert_eq!(prod.coeff(e), q(0, 1));
    }
    let c = LaurentStream::constant(&f, q(3, 2));
    assert!(c.inverse(DEFAULT_SCAN).unwrap().prefix_eq(&LaurentStream::constant(&f, q(2, 3)), 5));
    assert!(LaurentStream::zero(&f).inverse(64).is_err());
}

#[test]
fn sqrt_prefix_and_floor() {
    let f = Rationals;
    let s = LaurentStream::sqrt(&poly(&f, "T^4+T^2+1")).unwrap().stream;
    let want = [(2, q(1, 1)), (0, q(1, 2)), (-2, q(3, 8)), (-4, q(-3, 16)), (-6, q(3, 128)), (-8, q(15, 256))];
    for (e, c) in want {
        assert_eq!(s.coeff(e), c, "exponent {e}");
    }
    for e in [1, -1, -3, -5] {
        assert_eq!(s.coeff(e), q(0, 1));
    }
    assert_eq!(s.floor(), poly(&f, "T^2+1/2"));

    let r = LaurentStream::from_rational(&poly(&f, "3*T^2-5*T"), &poly(&f, "T^3+5")).unwrap();
    assert!(r.floor().is_zero());
}

#[test]
fn sqrt_of_t8_t4_squares_back() {
    let f = Rationals;
    let d = poly(&f, "T^8+T^4");
    let s = LaurentStream::sqrt(&d).unwrap().stream;
    let sq = s.mul(&s);
    for e in -30..=8 {
        let want = if e == 8 || e == 4 { q(1, 1) } else { q(0, 1) };
        assert_eq!(sq.coeff(e), want, "exponent {e}");
    }
}

#[test]
fn sqrt_over_prime_field() {
    let f5 = PrimeField::new(5).unwrap();
    let d = poly(&f5, "T^2+4");
    let s = LaurentStream::sqrt(&d).unwrap().stream;
    let sq = s.mul(&s);
    assert_eq!(sq.coeff(2), 1);
    assert_eq!(sq.coeff(0), 4);
    for e in -25..0 {
        assert_eq!(sq.coeff(e), 0);
    }
}

fn stream_laws<F: Field>(f: &F, seed: u64) -> Result<(), TestCaseError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (da, db) = (rng.gen_range(0..5), rng.gen_range(0..5));
    let a = rand_poly(f, &mut rng, da);
    let b = rand_poly(f, &mut rng, db);
    let s = LaurentStream::from_rational(&a, &b).unwrap();
    prop_assert_eq!(s.order(DEFAULT_SCAN), Some(db as i64 - da as i64));
    let inv = s.inverse(DEFAULT_SCAN).unwrap();
    prop_assert_eq!(inv.order(DEFAULT_SCAN), Some(da as i64 - db as i64));
    prop_assert!(inv.inverse(DEFAULT_SCAN).unwrap().prefix_eq(&s, 15));
    let (fl, fr) = s.poly_part();
    prop_assert!(fr.order(DEFAULT_SCAN).is_none_or(|o| o >= 1));
    prop_assert!(fr.add_poly(&fl).prefix_eq(&s, 15));
    let (dc, dd) = (rng.gen_range(0..4), rng.gen_range(0..4));
    let t = LaurentStream::from_rational(&rand_poly(f, &mut rng, dc), &rand_poly(f, &mut rng, dd)).unwrap();
    let (os, ot) = (s.order(DEFAULT_SCAN).unwrap(), t.order(DEFAULT_SCAN).unwrap());
    prop_assert_eq!(s.mul(&t).order(DEFAULT_SCAN), Some(os + ot));
    if let Some(o) = s.add(&t).order(DEFAULT_SCAN) {
        prop_assert!(o >= os.min(ot));
        if os != ot {
            prop_assert_eq!(o, os.min(ot));
        }
    }
    Ok(())
}

proptest! {
    #[test]
    fn order_and_inverse_laws(seed in any::<u64>()) {
        stream_laws(&Rationals, seed)?;
        for p in [2, 3, 7] {
            stream_laws(&PrimeField::new(p).unwrap(), seed)?;
        }
    }
}
