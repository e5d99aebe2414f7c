use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mkt_core::algebra::{factor, is_irreducible, norm_element};
use mkt_core::symbols::{lemma23_rewrite, rewrite_multilinear_rational, Lemma23Variant};
use mkt_core::transfer::{transfer_milnor, transfer_stepwise, transfer_tower};
use mkt_core::valuations::{reciprocity_check, support, tame_symbol, Valuation};
use mkt_core::{
    canonical_class, Elem, Field, FunctionFieldSymbol, MilnorExpression, Poly, RationalFunction,
};

fn rational(rng: &mut ChaCha8Rng, bound: i64) -> Elem {
    let q = Field::rationals();
    loop {
        let n = rng.gen_range(-bound..=bound);
        if n != 0 {
            return q.frac(n, rng.gen_range(1..=bound)).unwrap();
        }
    }
}

fn sym(e: &[Elem]) -> MilnorExpression {
    MilnorExpression::symbol(e).unwrap()
}

fn random_monic_irreducible(k: &Field, deg: usize, rng: &mut ChaCha8Rng) -> Poly {
    loop {
        let mut c: Vec<Elem> = (0..deg)
            .map(|_| {
                if k.is_finite() {
                    k.random(rng)
                } else {
                    k.from_i64(rng.gen_range(-3..=3))
                }
            })
            .collect();
        c.push(k.one());
        let f = Poly::new(k, &c).unwrap();
        if is_irreducible(&f).unwrap() {
            return f;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn skew_symmetry_of_classes(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (rational(&mut rng, 60), rational(&mut rng, 60));
        let x = canonical_class(&sym(&[a.clone(), b.clone()])).unwrap();
        let y = canonical_class(&sym(&[b, a])).unwrap();
        prop_assert_eq!(x.combine(&y).unwrap(), mkt_core::KCanonicalClass::zero(&Field::rationals(), 2));
    }

    #[test]
    fn prime_splitting_preserves_class(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = sym(&[rational(&mut rng, 500), rational(&mut rng, 500)]).scale(rng.gen_range(-3..=3));
        let split = rewrite_multilinear_rational(&x).unwrap();
        prop_assert_eq!(canonical_class(&split).unwrap(), canonical_class(&x).unwrap());
    }

    #[test]
    fn two_term_rewrites_preserve_class(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (c, d) = (rational(&mut rng, 40), rational(&mut rng, 40));
        for variant in [Lemma23Variant::First, Lemma23Variant::Second] {
            if let Ok((l, r)) = lemma23_rewrite(&c, &d, variant) {
                prop_assert_eq!(canonical_class(&l).unwrap(), canonical_class(&r).unwrap());
            }
        }
    }

    #[test]
    fn factorization_multiplies_back(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = Field::prime(p).unwrap();
        let deg = rng.gen_range(1..=8);
        let c: Vec<Elem> = (0..=deg).map(|_| k.random_nonzero(&mut rng)).collect();
        let f = Poly::new(&k, &c).unwrap();
        let fac = factor(&f).unwrap();
        prop_assert_eq!(fac.expand(), f);
        for (g, _) in &fac.factors {
            prop_assert!(g.is_monic() && is_irreducible(g).unwrap());
        }
    }

    #[test]
    fn rational_factorization_multiplies_back(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = Field::rationals();
        let mut f = Poly::constant(&q.from_i64(rng.gen_range(1..=5)));
        for _ in 0..rng.gen_range(1..=3) {
            let g = random_monic_irreducible(&q, rng.gen_range(1..=3), &mut rng);
            f = f.checked_mul(&g).unwrap();
        }
        let fac = factor(&f).unwrap();
        prop_assert_eq!(fac.expand(), f);
    }

    #[test]
    fn stepwise_and_collapsed_towers_agree(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f4 = Field::finite(2, 2).unwrap();
        let m = random_monic_irreducible(&f4, 2, &mut rng);
        let l = Field::extension(&f4, &m).unwrap();
        let x = sym(&[l.random_nonzero(&mut rng)]);
        let f2 = f4.prime_field();
        let a = canonical_class(&transfer_tower(&l, &f2, &x).unwrap()).unwrap();
        let b = canonical_class(&transfer_stepwise(&l, &f2, &x).unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn weight_three_vanishes_over_finite_fields(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (q, d) = [(2u64, 3usize), (3, 2), (5, 2)][rng.gen_range(0..3)];
        let l = Field::finite(q, d).unwrap();
        let v = Valuation::finite(&l.modulus().unwrap()).unwrap();
        let x = sym(&[l.random_nonzero(&mut rng), l.random_nonzero(&mut rng), l.random_nonzero(&mut rng)]);
        prop_assert!(canonical_class(&transfer_milnor(&v, &x).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn reciprocity_over_rational_function_field(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = Field::rationals();
        let mut polys: Vec<Poly> = Vec::new();
        while polys.len() < 2 {
            let f = random_monic_irreducible(&q, rng.gen_range(1..=2), &mut rng);
            if !polys.contains(&f) {
                polys.push(f);
            }
        }
        let entries: Vec<RationalFunction> = polys.iter().map(RationalFunction::from_poly).collect();
        let w = FunctionFieldSymbol::symbol(&entries).unwrap();
        prop_assert!(reciprocity_check(&w).unwrap().holds());
    }
}

#[test]
fn documented_transfer_values() {
    let f3 = Field::prime(3).unwrap();
    let v = Valuation::finite(&Poly::from_i64s(&f3, &[1, 0, 1])).unwrap();
    let k9 = v.residue_field().clone();
    let a = k9.generator().unwrap();
    let n = transfer_milnor(&v, &sym(&[&a + &k9.one()])).unwrap();
    assert_eq!(
        canonical_class(&n).unwrap(),
        canonical_class(&sym(&[f3.from_i64(2)])).unwrap()
    );
    let w = transfer_milnor(&v, &sym(&[a.clone(), &a + &k9.one()])).unwrap();
    assert!(canonical_class(&w).unwrap().is_zero());
    for u in k9.elements().unwrap().into_iter().filter(|u| !u.is_zero()) {
        let got =
            canonical_class(&transfer_milnor(&v, &sym(std::slice::from_ref(&u))).unwrap()).unwrap();
        let want = canonical_class(&sym(&[norm_element(&u, &f3).unwrap()])).unwrap();
        assert_eq!(got, want);
    }
}

#[test]
fn tame_symbol_and_support_examples() {
    let q = Field::rationals();
    let x = RationalFunction::x(&q);
    let one_minus_x = RationalFunction::from_poly(&Poly::from_i64s(&q, &[1, -1]));
    let w = FunctionFieldSymbol::symbol(&[x.clone(), one_minus_x]).unwrap();
    let places = support(&w).unwrap();
    assert_eq!(places.len(), 3);
    let at_zero = Valuation::finite(&Poly::x(&q)).unwrap();
    let t = tame_symbol(&at_zero, &w).unwrap();
    assert!(canonical_class(&t).unwrap().is_zero());
    assert!(reciprocity_check(&w).unwrap().holds());
}
