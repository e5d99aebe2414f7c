use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mkt_core::goodwillie::random::{
    random_commuting_tuple, random_homotopy, random_invertible, random_scalar_tuple, HomotopyKind,
};
use mkt_core::goodwillie::{
    composition_series, gw_relations_check, h_mult, phi, phi_element, phi_expression, GwElement,
    MatrixTuple, PolyMatrixTuple,
};
use mkt_core::joint_det::{
    hilbert, hilbert_support, legendre, make_determinant, DeterminantSpec, DeterminantValue,
    HilbertPlace,
};
use mkt_core::symbols::ClassPayload;
use mkt_core::{canonical_class, Error, Field, Matrix, MilnorExpression, Poly, PolyMatrix};

fn fields() -> Vec<Field> {
    vec![
        Field::rationals(),
        Field::prime(5).unwrap(),
        Field::finite(3, 2).unwrap(),
    ]
}

fn rat(rng: &mut ChaCha8Rng) -> BigRational {
    loop {
        let n: i64 = rng.gen_range(-3000..=3000);
        if n != 0 {
            return BigRational::new(BigInt::from(n), BigInt::from(rng.gen_range(1..=3000i64)));
        }
    }
}

fn factor_signature(x: &MatrixTuple) -> Vec<(usize, Vec<String>, usize)> {
    let mut v: Vec<_> = composition_series(x)
        .unwrap()
        .into_iter()
        .map(|f| {
            let mut s: Vec<String> = f.scalars.iter().map(|a| a.to_string()).collect();
            s.push(f.extension.to_string());
            (f.extension.degree(), s, f.multiplicity)
        })
        .collect();
    v.sort();
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn phi_is_additive_on_direct_sums(seed in any::<u64>(), which in 0usize..3, l in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = &fields()[which];
        let x = random_commuting_tuple(k, rng.gen_range(1..=2), l, &mut rng).unwrap();
        let y = random_commuting_tuple(k, rng.gen_range(1..=2), l, &mut rng).unwrap();
        let sum = phi(&x).unwrap().combine(&phi(&y).unwrap()).unwrap();
        prop_assert_eq!(phi(&x.direct_sum(&y).unwrap()).unwrap(), sum);
    }

    #[test]
    fn kronecker_of_scalars_is_the_product(seed in any::<u64>(), p in 1usize..=2, q in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = Field::rationals();
        let x = random_scalar_tuple(&k, p, &mut rng);
        let y = random_scalar_tuple(&k, q, &mut rng);
        let prod = phi_expression(&x).unwrap().product(&phi_expression(&y).unwrap()).unwrap();
        prop_assert_eq!(phi(&x.kronecker(&y).unwrap()).unwrap(), canonical_class(&prod).unwrap());
    }

    #[test]
    fn composition_factors_are_conjugation_invariant(seed in any::<u64>(), which in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = &fields()[which];
        let n = rng.gen_range(1..=3);
        let x = random_commuting_tuple(k, n, 2, &mut rng).unwrap();
        let s = random_invertible(k, n, &mut rng);
        prop_assert_eq!(factor_signature(&x), factor_signature(&x.conjugate(&s).unwrap()));
    }

    #[test]
    fn relations_hold(seed in any::<u64>(), which in 0usize..3, l in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = &fields()[which];
        let x = random_commuting_tuple(k, rng.gen_range(1..=2), l, &mut rng).unwrap();
        let r = gw_relations_check(&x, &mut rng).unwrap();
        prop_assert!(r.is_clean(), "{:?}", r.violations);
    }

    #[test]
    fn boundaries_are_invisible_to_every_determinant(seed in any::<u64>(), kind in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = Field::rationals();
        let kind = HomotopyKind::ALL[kind];
        let h = random_homotopy(kind, &q, 2, &mut rng).unwrap();
        let b = h.boundary().unwrap();
        let places = vec![HilbertPlace::Infinity, HilbertPlace::Prime(2), HilbertPlace::Prime(3)];
        for spec in [DeterminantSpec::Universal, DeterminantSpec::RealSign, DeterminantSpec::RationalHilbert(places)] {
            let d = make_determinant(&q, 2, spec).unwrap();
            prop_assert_eq!(d.evaluate(&b.at_one).unwrap(), d.evaluate(&b.at_zero).unwrap());
        }
        let zero = phi_element(&q, 2, &b.as_element()).unwrap();
        prop_assert!(zero.is_zero());
    }

    #[test]
    fn hilbert_is_bilinear_and_steinberg(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, a2, b) = (rat(&mut rng), rat(&mut rng), rat(&mut rng));
        let one = BigRational::from_integer(1.into());
        let mut places = hilbert_support(&(&a * &a2), &b);
        places.extend(hilbert_support(&a, &(&one - &a)));
        for v in places {
            let lhs = hilbert(&(&a * &a2), &b, v).unwrap();
            prop_assert_eq!(lhs, hilbert(&a, &b, v).unwrap() * hilbert(&a2, &b, v).unwrap());
            if a != one {
                prop_assert_eq!(hilbert(&a, &(&one - &a), v).unwrap(), 1);
            }
        }
    }

    #[test]
    fn hilbert_at_odd_p_matches_tame_component(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = Field::rationals();
        let (a, b) = (rat(&mut rng), rat(&mut rng));
        let x = MilnorExpression::symbol(&[q.rational(a.clone()).unwrap(), q.rational(b.clone()).unwrap()]).unwrap();
        let tame = match canonical_class(&x).unwrap().payload() {
            ClassPayload::RationalClass { tame, .. } => tame.clone(),
            _ => Default::default(),
        };
        let tuple = MatrixTuple::scalars(&q, &[q.rational(a.clone()).unwrap(), q.rational(b.clone()).unwrap()]).unwrap();
        for v in hilbert_support(&a, &b) {
            let HilbertPlace::Prime(p) = v else { continue };
            if p == 2 {
                continue;
            }
            let want = tame.get(&p).map(|&t| legendre(&BigInt::from(t), p).unwrap()).unwrap_or(1);
            let d = make_determinant(&q, 2, DeterminantSpec::RationalHilbert(vec![v])).unwrap();
            prop_assert_eq!(d.evaluate(&tuple).unwrap(), DeterminantValue::Sign(want));
        }
    }
}

#[test]
fn f2_companion_gives_f4() {
    let f2 = Field::prime(2).unwrap();
    let c = Matrix::companion(&Poly::from_i64s(&f2, &[1, 1, 1])).unwrap();
    let x = MatrixTuple::from_matrices(vec![c]).unwrap();
    let fs = composition_series(&x).unwrap();
    assert_eq!(fs.len(), 1);
    assert_eq!(fs[0].extension.degree(), 2);
    // l = 1: the class is the determinant, 1 in F_2, hence zero.
    assert!(phi(&x).unwrap().is_zero());
}

#[test]
fn commuting_pairs_over_finite_fields_vanish() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for k in [Field::prime(7).unwrap(), Field::finite(2, 3).unwrap()] {
        for _ in 0..10 {
            let x = random_commuting_tuple(&k, 3, 2, &mut rng).unwrap();
            assert!(phi(&x).unwrap().is_zero());
        }
    }
}

#[test]
fn identity_summand_changes_nothing() {
    let q = Field::rationals();
    let x = MatrixTuple::scalars(&q, &[q.from_i64(-2), q.from_i64(3)]).unwrap();
    let id = MatrixTuple::scalars(&q, &[q.one(), q.one()]).unwrap();
    assert_eq!(phi(&x.direct_sum(&id).unwrap()).unwrap(), phi(&x).unwrap());
}

#[test]
fn mult_boundary_realizes_multiplicativity() {
    let q = Field::rationals();
    let b = Matrix::from_i64s(&q, 2, 2, &[2, 1, 0, 2]);
    let c = Matrix::from_i64s(&q, 2, 2, &[-3, 5, 0, -3]);
    let a = Matrix::scalar(&q, 2, &q.from_i64(7));
    let h = h_mult(&b, &c, std::slice::from_ref(&a)).unwrap();
    let bd = h.boundary().unwrap();
    let bc = MatrixTuple::from_matrices(vec![b.checked_mul(&c).unwrap(), a.clone()]).unwrap();
    let bb = MatrixTuple::from_matrices(vec![b, a.clone()]).unwrap();
    let cc = MatrixTuple::from_matrices(vec![c, a]).unwrap();
    assert_eq!(phi(&bd.at_one).unwrap(), phi(&bc).unwrap());
    assert_eq!(
        phi(&bd.at_zero).unwrap(),
        phi(&bb).unwrap().combine(&phi(&cc).unwrap()).unwrap()
    );
    let rel = GwElement::from_terms(vec![(1, bc), (-1, bb), (-1, cc)]);
    assert!(phi_element(&q, 2, &rel).unwrap().is_zero());
}

#[test]
fn preconditions_are_enforced() {
    let q = Field::rationals();
    let a = Matrix::from_i64s(&q, 2, 2, &[0, 1, 1, 0]);
    let b = Matrix::from_i64s(&q, 2, 2, &[1, 1, 0, 1]);
    assert_eq!(
        MatrixTuple::from_matrices(vec![a.clone(), b]).unwrap_err(),
        Error::NotCommuting
    );
    let z = Matrix::from_i64s(&q, 2, 2, &[1, 1, 1, 1]);
    assert_eq!(
        MatrixTuple::from_matrices(vec![z]).unwrap_err(),
        Error::Singular
    );
    let t = PolyMatrix::new(&q, 1, vec![Poly::from_i64s(&q, &[1, 1])]).unwrap();
    assert_eq!(
        PolyMatrixTuple::new(&q, 1, vec![t]).unwrap_err(),
        Error::NotUnitDeterminant
    );
    let x = MatrixTuple::from_matrices(vec![a]).unwrap();
    let y = MatrixTuple::scalars(&q, &[q.one(), q.one()]).unwrap();
    assert_eq!(x.direct_sum(&y).unwrap_err(), Error::ArityMismatch);
}

#[test]
fn unsupported_q_towers_are_reported() {
    let q = Field::rationals();
    // A = sqrt(2) on a 4-dimensional space where the second operator acts
    // as sqrt(3) over Q(sqrt 2): this needs a second quadratic step.
    let s2 = Matrix::companion(&Poly::from_i64s(&q, &[-2, 0, 1])).unwrap();
    let s3 = Matrix::companion(&Poly::from_i64s(&q, &[-3, 0, 1])).unwrap();
    let i2 = Matrix::identity(&q, 2);
    let a = s2.kronecker(&i2).unwrap();
    let b = i2.kronecker(&s3).unwrap();
    let x = MatrixTuple::from_matrices(vec![a, b]).unwrap();
    assert!(matches!(
        composition_series(&x),
        Err(Error::UnsupportedTower(_))
    ));
}
