//! Joint determinants: maps on commuting tuples that are multilinear,
//! additive on block sums, similarity invariant, and homotopy invariant.
//! All of them factor through `φ`; this module provides the universal one
//! and the concrete `±1`-valued families, together with the local symbols
//! they are built from.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::algebra::Field;
use crate::error::{Error, Result};
use crate::goodwillie::random::{
    random_commuting_tuple, random_homotopy, random_invertible, HomotopyKind,
};
use crate::goodwillie::{phi, phi_expression, random_commutant, MatrixTuple, RelationsReport};
use crate::symbols::{canonical_class_real, KCanonicalClass, MilnorExpression};

/// The Legendre symbol `(a | p)` for an odd prime `p` and `a` prime to `p`.
pub fn legendre(a: &BigInt, p: u64) -> Result<i8> {
    if p < 3 || p.is_multiple_of(2) || !num_prime::nt_funcs::is_prime64(p) {
        return Err(Error::BadModulus(format!("{p} is not an odd prime")));
    }
    let r = a
        .mod_floor(&BigInt::from(p))
        .to_u64()
        .expect("reduced below p");
    if r == 0 {
        return Err(Error::BadModulus(format!("{a} is divisible by {p}")));
    }
    let mut acc: u128 = 1;
    let mut base = r as u128;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u128;
        }
        base = base * base % p as u128;
        e >>= 1;
    }
    Ok(if acc == 1 { 1 } else { -1 })
}

/// A place of `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HilbertPlace {
    Infinity,
    Prime(u64),
}

impl fmt::Display for HilbertPlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HilbertPlace::Infinity => write!(f, "inf"),
            HilbertPlace::Prime(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for HilbertPlace {
    type Err = Error;

    fn from_str(s: &str) -> Result<HilbertPlace> {
        let s = s.trim();
        if matches!(s, "inf" | "infinity" | "oo" | "R") {
            return Ok(HilbertPlace::Infinity);
        }
        let p: u64 = s
            .parse()
            .map_err(|_| Error::BadModulus(format!("unknown place {s:?}")))?;
        if !num_prime::nt_funcs::is_prime64(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(HilbertPlace::Prime(p))
    }
}

/// `(p-adic valuation, unit part)` of a nonzero rational.
fn split_off(r: &BigRational, p: u64) -> (i64, BigRational) {
    let bp = BigInt::from(p);
    let mut v = 0i64;
    let (mut n, mut d) = (r.numer().clone(), r.denom().clone());
    while n.is_multiple_of(&bp) {
        n /= &bp;
        v += 1;
    }
    while d.is_multiple_of(&bp) {
        d /= &bp;
        v -= 1;
    }
    (v, BigRational::new(n, d))
}

/// A unit rational modulo `2^k`, via `n * d^{-1}`.
fn mod_pow2(u: &BigRational, modulus: u64) -> u64 {
    let m = BigInt::from(modulus);
    let n = u.numer().mod_floor(&m).to_u64().expect("small");
    let d = u.denom().mod_floor(&m).to_u64().expect("small");
    let inv = (1..modulus)
        .step_by(2)
        .find(|i| d * i % modulus == 1)
        .expect("odd");
    n * inv % modulus
}

fn unit_mod_p(u: &BigRational, p: u64) -> BigInt {
    let bp = BigInt::from(p);
    let d = u.denom().mod_floor(&bp);
    let inv = d.modpow(&BigInt::from(p - 2), &bp);
    (u.numer() * inv).mod_floor(&bp)
}

/// The Hilbert symbol `(a, b)_v` for nonzero rationals.
pub fn hilbert(a: &BigRational, b: &BigRational, place: HilbertPlace) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroEntry);
    }
    match place {
        HilbertPlace::Infinity => Ok(if a.is_negative() && b.is_negative() {
            -1
        } else {
            1
        }),
        HilbertPlace::Prime(2) => {
            let (alpha, u) = split_off(a, 2);
            let (beta, v) = split_off(b, 2);
            let (u8_, v8) = (mod_pow2(&u, 8), mod_pow2(&v, 8));
            let eps = |x: u64| ((x - 1) / 2) % 2;
            let omega = |x: u64| ((x * x - 1) / 8) % 2;
            let e = eps(u8_) * eps(v8)
                + (alpha.rem_euclid(2) as u64) * omega(v8)
                + (beta.rem_euclid(2) as u64) * omega(u8_);
            Ok(if e.is_multiple_of(2) { 1 } else { -1 })
        }
        HilbertPlace::Prime(p) => {
            let (alpha, u) = split_off(a, p);
            let (beta, v) = split_off(b, p);
            // The tame symbol (-1)^{αβ} u^β / v^α, reduced mod p.
            let um = unit_mod_p(&u, p);
            let vm = unit_mod_p(&v, p);
            let mut s = legendre(&um, p)?.pow(beta.rem_euclid(2) as u32)
                * legendre(&vm, p)?.pow(alpha.rem_euclid(2) as u32);
            if alpha * beta % 2 != 0 {
                s *= legendre(&BigInt::from(-1), p)?;
            }
            Ok(s)
        }
    }
}

/// Places where `(a, b)_v` can be nontrivial: infinity, 2, and the odd
/// primes dividing `a` or `b`.
pub fn hilbert_support(a: &BigRational, b: &BigRational) -> Vec<HilbertPlace> {
    let mut primes = std::collections::BTreeSet::new();
    primes.insert(2u64);
    for r in [a, b] {
        for n in [r.numer(), r.denom()] {
            let m = n.magnitude();
            if m.bits() > 1 {
                for (p, _) in num_prime::nt_funcs::factorize(m.clone()) {
                    primes.insert(p.to_u64().expect("rational entries have word-sized primes"));
                }
            }
        }
    }
    let mut out = vec![HilbertPlace::Infinity];
    out.extend(primes.into_iter().map(HilbertPlace::Prime));
    out
}

/// Which joint determinant to build.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DeterminantSpec {
    /// `φ` itself, valued in canonical classes.
    Universal,
    /// The sign of the real symbol; rational input only.
    RealSign,
    /// The product of Hilbert symbols at the given places (weight 2) or
    /// the real sign (weight at least 3).
    RationalHilbert(Vec<HilbertPlace>),
    /// The constant map over a finite field, with a check that `φ` vanishes.
    FiniteFieldTrivial,
}

/// A value of a joint determinant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DeterminantValue {
    Class(KCanonicalClass),
    Sign(i8),
}

impl DeterminantValue {
    /// The group law of the target.
    pub fn combine(&self, other: &DeterminantValue) -> Result<DeterminantValue> {
        match (self, other) {
            (DeterminantValue::Class(a), DeterminantValue::Class(b)) => {
                Ok(DeterminantValue::Class(a.combine(b)?))
            }
            (DeterminantValue::Sign(a), DeterminantValue::Sign(b)) => {
                Ok(DeterminantValue::Sign(a * b))
            }
            _ => Err(Error::DescriptorMismatch),
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            DeterminantValue::Class(c) => c.is_zero(),
            DeterminantValue::Sign(s) => *s == 1,
        }
    }

    pub fn as_sign(&self) -> Option<i8> {
        match self {
            DeterminantValue::Sign(s) => Some(*s),
            DeterminantValue::Class(_) => None,
        }
    }
}

/// A joint determinant of weight `l` over `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointDeterminant {
    field: Field,
    weight: usize,
    spec: DeterminantSpec,
}

/// Validates the combination of field, weight, and family.
pub fn make_determinant(k: &Field, l: usize, spec: DeterminantSpec) -> Result<JointDeterminant> {
    let bad = |msg: String| Err(Error::UnsupportedCombination(msg));
    match &spec {
        DeterminantSpec::Universal => {}
        DeterminantSpec::RealSign if !k.is_rationals() => {
            return bad(format!("the real sign needs Q, got {k}"));
        }
        DeterminantSpec::RealSign if l == 0 => return bad("the real sign needs weight >= 1".into()),
        DeterminantSpec::RealSign => {}
        DeterminantSpec::RationalHilbert(_) if !k.is_rationals() => {
            return bad(format!("Hilbert symbols need Q, got {k}"));
        }
        DeterminantSpec::RationalHilbert(_) if l < 2 => {
            return bad(format!("Hilbert symbols need weight >= 2, got {l}"));
        }
        DeterminantSpec::RationalHilbert(places) if places.is_empty() => {
            return bad("empty place set".into());
        }
        DeterminantSpec::RationalHilbert(_) => {}
        DeterminantSpec::FiniteFieldTrivial if !k.is_finite() => {
            return bad(format!("{k} is not finite"));
        }
        DeterminantSpec::FiniteFieldTrivial if l < 2 => {
            return bad(
                "weight 1 over a finite field has the determinant; no trivial family".into(),
            );
        }
        DeterminantSpec::FiniteFieldTrivial => {}
    }
    Ok(JointDeterminant {
        field: k.clone(),
        weight: l,
        spec,
    })
}

fn hilbert_of_expression(x: &MilnorExpression, places: &[HilbertPlace]) -> Result<i8> {
    let mut s = 1i8;
    for (entries, c) in x.terms() {
        if c % 2 == 0 {
            continue;
        }
        let a = entries[0].as_rational().expect("rational entries");
        let b = entries[1].as_rational().expect("rational entries");
        for &v in places {
            s *= hilbert(a, b, v)?;
        }
    }
    Ok(s)
}

fn real_sign(x: &MilnorExpression) -> Result<i8> {
    Ok(canonical_class_real(x)?.eps_inf().unwrap_or(1))
}

impl JointDeterminant {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn spec(&self) -> &DeterminantSpec {
        &self.spec
    }

    pub fn evaluate(&self, x: &MatrixTuple) -> Result<DeterminantValue> {
        if x.field() != &self.field {
            return Err(Error::DescriptorMismatch);
        }
        if x.weight() != self.weight {
            return Err(Error::WeightMismatch {
                expected: self.weight,
                found: x.weight(),
            });
        }
        match &self.spec {
            DeterminantSpec::Universal => Ok(DeterminantValue::Class(phi(x)?)),
            DeterminantSpec::RealSign => {
                Ok(DeterminantValue::Sign(real_sign(&phi_expression(x)?)?))
            }
            DeterminantSpec::RationalHilbert(places) => {
                let e = phi_expression(x)?;
                let s = if self.weight == 2 {
                    hilbert_of_expression(&e, places)?
                } else {
                    real_sign(&e)?
                };
                Ok(DeterminantValue::Sign(s))
            }
            DeterminantSpec::FiniteFieldTrivial => {
                let c = phi(x)?;
                if !c.is_zero() {
                    return Err(Error::InvariantViolated(format!(
                        "φ over a finite field gave the nonzero class {c}"
                    )));
                }
                Ok(DeterminantValue::Sign(1))
            }
        }
    }
}

/// Randomized check of multilinearity, block additivity, similarity
/// invariance, and homotopy invariance; `trials` instances of each.
pub fn axioms_check<R: Rng + ?Sized>(
    d: &JointDeterminant,
    trials: usize,
    rng: &mut R,
) -> Result<RelationsReport> {
    let k = d.field().clone();
    let l = d.weight();
    let kinds: Vec<HomotopyKind> = HomotopyKind::ALL
        .into_iter()
        .filter(|h| l >= h.min_weight())
        .filter(|h| {
            !(*h == HomotopyKind::Steinberg && k.order().is_some_and(|q| *q == 2u32.into()))
        })
        .collect();
    let mut report = RelationsReport::default();
    for t in 0..trials {
        let n = rng.gen_range(1..=2);
        let x = random_commuting_tuple(&k, n, l, rng)?;
        let base = d.evaluate(&x)?;

        if l > 0 {
            let slot = rng.gen_range(0..l);
            let b = random_commutant(&x, rng)?;
            let lhs = d.evaluate(&x.with_slot(slot, x.matrix(slot).checked_mul(&b)?)?)?;
            let rhs = base.combine(&d.evaluate(&x.with_slot(slot, b)?)?)?;
            report.record("multilinearity", lhs == rhs);
        }

        let y = random_commuting_tuple(&k, rng.gen_range(1..=2), l, rng)?;
        let lhs = d.evaluate(&x.direct_sum(&y)?)?;
        report.record("block diagonal", lhs == base.combine(&d.evaluate(&y)?)?);

        let s = random_invertible(&k, n, rng);
        report.record("similarity", d.evaluate(&x.conjugate(&s)?)? == base);

        if !kinds.is_empty() {
            let h = random_homotopy(kinds[t % kinds.len()], &k, l, rng)?;
            let b = h.boundary()?;
            report.record(
                "homotopy",
                d.evaluate(&b.at_one)? == d.evaluate(&b.at_zero)?,
            );
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(&BigInt::from(1), 7).unwrap(), 1);
        assert_eq!(legendre(&BigInt::from(2), 3).unwrap(), -1);
        assert_eq!(legendre(&BigInt::from(4), 5).unwrap(), 1);
        assert_eq!(legendre(&BigInt::from(-1), 5).unwrap(), 1);
        assert_eq!(legendre(&BigInt::from(-1), 7).unwrap(), -1);
        assert!(matches!(
            legendre(&BigInt::from(3), 4),
            Err(Error::BadModulus(_))
        ));
        assert!(matches!(
            legendre(&BigInt::from(2), 2),
            Err(Error::BadModulus(_))
        ));
        assert!(legendre(&BigInt::from(10), 5).is_err());
    }

    #[test]
    fn hilbert_examples() {
        let inf = HilbertPlace::Infinity;
        assert_eq!(hilbert(&r(-1, 1), &r(-1, 1), inf).unwrap(), -1);
        assert_eq!(
            hilbert(&r(-1, 1), &r(-1, 1), HilbertPlace::Prime(2)).unwrap(),
            -1
        );
        assert_eq!(
            hilbert(&r(2, 1), &r(3, 1), HilbertPlace::Prime(3)).unwrap(),
            -1
        );
        assert_eq!(
            hilbert(&r(2, 1), &r(3, 1), HilbertPlace::Prime(2)).unwrap(),
            -1
        );
        assert_eq!(
            hilbert(&r(2, 1), &r(3, 1), HilbertPlace::Prime(5)).unwrap(),
            1
        );
        // 5 is a norm from Q(i): (5, -1) is trivial everywhere.
        for v in hilbert_support(&r(5, 1), &r(-1, 1)) {
            assert_eq!(hilbert(&r(5, 1), &r(-1, 1), v).unwrap(), 1, "{v}");
        }
        assert_eq!("inf".parse::<HilbertPlace>().unwrap(), inf);
        assert!("9".parse::<HilbertPlace>().is_err());
    }

    #[test]
    fn determinant_examples() {
        let q = Field::rationals();
        let real = make_determinant(&q, 3, DeterminantSpec::RealSign).unwrap();
        let minus = MatrixTuple::scalars(&q, &vec![q.from_i64(-1); 3]).unwrap();
        assert_eq!(real.evaluate(&minus).unwrap(), DeterminantValue::Sign(-1));
        let real2 = make_determinant(&q, 2, DeterminantSpec::RealSign).unwrap();
        let x = MatrixTuple::scalars(&q, &[q.from_i64(2), q.from_i64(-5)]).unwrap();
        assert_eq!(real2.evaluate(&x).unwrap(), DeterminantValue::Sign(1));
        let h3 = make_determinant(
            &q,
            2,
            DeterminantSpec::RationalHilbert(vec![HilbertPlace::Prime(3)]),
        )
        .unwrap();
        let y = MatrixTuple::scalars(&q, &[q.from_i64(2), q.from_i64(3)]).unwrap();
        assert_eq!(h3.evaluate(&y).unwrap(), DeterminantValue::Sign(-1));
        assert!(matches!(
            make_determinant(
                &q,
                1,
                DeterminantSpec::RationalHilbert(vec![HilbertPlace::Infinity])
            ),
            Err(Error::UnsupportedCombination(_))
        ));
        let f7 = Field::prime(7).unwrap();
        let triv = make_determinant(&f7, 2, DeterminantSpec::FiniteFieldTrivial).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let z = random_commuting_tuple(&f7, 2, 2, &mut rng).unwrap();
        assert_eq!(triv.evaluate(&z).unwrap(), DeterminantValue::Sign(1));
    }

    #[test]
    fn axioms_small_run() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let q = Field::rationals();
        let places = vec![
            HilbertPlace::Infinity,
            HilbertPlace::Prime(3),
            HilbertPlace::Prime(5),
        ];
        let d = make_determinant(&q, 2, DeterminantSpec::RationalHilbert(places)).unwrap();
        let rep = axioms_check(&d, 5, &mut rng).unwrap();
        assert!(rep.is_clean(), "{:?}", rep.violations);
    }
}
