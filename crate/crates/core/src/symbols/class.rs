//! Decidable invariants of Milnor expressions over `Q` and finite fields.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use super::MilnorExpression;
use crate::algebra::{Elem, Field};
use crate::error::{Error, Result};
use crate::valuations::{tame_symbol, Valuation};

/// What a class records, depending on field and weight.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ClassPayload {
    /// The trivial class in any weight.
    Zero,
    /// Weight 0: an integer.
    Integer(i64),
    /// Weight 1: the product of the entries, different from 1.
    UnitValue(Elem),
    /// `Q`, weight 2: sign symbol and the nontrivial tame components at odd primes.
    RationalClass {
        eps_inf: i8,
        tame: BTreeMap<u64, u64>,
    },
    /// `Q`, weight at least 3: the sign symbol (always `-1`; `+1` is `Zero`).
    RationalSign(i8),
    /// The `Z/2` sign quotient of `K^M_l(R)` for rational entries (always `-1`).
    RealSign(i8),
}

/// A canonical invariant of a Milnor expression. Two expressions over `Q` or
/// a finite field are equal in `K^M_l` exactly when their classes are equal.
/// The real variant only decides equality in a `Z/2` quotient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KCanonicalClass {
    field: Field,
    weight: usize,
    payload: ClassPayload,
}

impl KCanonicalClass {
    pub fn zero(field: &Field, weight: usize) -> KCanonicalClass {
        KCanonicalClass {
            field: field.clone(),
            weight,
            payload: ClassPayload::Zero,
        }
    }

    fn normalized(field: &Field, weight: usize, payload: ClassPayload) -> KCanonicalClass {
        let trivial = match &payload {
            ClassPayload::Zero => true,
            ClassPayload::Integer(n) => *n == 0,
            ClassPayload::UnitValue(u) => u.is_one(),
            ClassPayload::RationalClass { eps_inf, tame } => *eps_inf == 1 && tame.is_empty(),
            ClassPayload::RationalSign(e) | ClassPayload::RealSign(e) => *e == 1,
        };
        KCanonicalClass {
            field: field.clone(),
            weight,
            payload: if trivial { ClassPayload::Zero } else { payload },
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn payload(&self) -> &ClassPayload {
        &self.payload
    }

    pub fn is_zero(&self) -> bool {
        self.payload == ClassPayload::Zero
    }

    /// `ε_∞ ∈ {±1}` for the payloads that carry it (`+1` for `Zero`).
    pub fn eps_inf(&self) -> Option<i8> {
        match &self.payload {
            ClassPayload::Zero => Some(1),
            ClassPayload::RationalClass { eps_inf, .. } => Some(*eps_inf),
            ClassPayload::RationalSign(e) | ClassPayload::RealSign(e) => Some(*e),
            _ => None,
        }
    }

    /// Group operation in `K^M_l`.
    pub fn combine(&self, other: &KCanonicalClass) -> Result<KCanonicalClass> {
        if self.field != other.field {
            return Err(Error::DescriptorMismatch);
        }
        if self.weight != other.weight {
            return Err(Error::WeightMismatch {
                expected: self.weight,
                found: other.weight,
            });
        }
        use ClassPayload::*;
        let payload = match (&self.payload, &other.payload) {
            (Zero, p) | (p, Zero) => p.clone(),
            (Integer(a), Integer(b)) => Integer(a + b),
            (UnitValue(a), UnitValue(b)) => UnitValue(a.checked_mul(b)?),
            (
                RationalClass {
                    eps_inf: e1,
                    tame: t1,
                },
                RationalClass {
                    eps_inf: e2,
                    tame: t2,
                },
            ) => {
                let mut tame = t1.clone();
                for (p, r) in t2 {
                    let x = tame.entry(*p).or_insert(1);
                    *x = ((*x as u128 * *r as u128) % *p as u128) as u64;
                }
                tame.retain(|_, r| *r != 1);
                RationalClass {
                    eps_inf: e1 * e2,
                    tame,
                }
            }
            (RationalSign(a), RationalSign(b)) => RationalSign(a * b),
            (RealSign(a), RealSign(b)) => RealSign(a * b),
            _ => {
                return Err(Error::UnsupportedCombination(
                    "classes of different kinds".into(),
                ))
            }
        };
        Ok(KCanonicalClass::normalized(
            &self.field,
            self.weight,
            payload,
        ))
    }

    /// Group inverse.
    pub fn negate(&self) -> Result<KCanonicalClass> {
        use ClassPayload::*;
        let payload = match &self.payload {
            Integer(n) => Integer(-n),
            UnitValue(u) => UnitValue(u.inv()?),
            RationalClass { eps_inf, tame } => RationalClass {
                eps_inf: *eps_inf,
                tame: tame.iter().map(|(p, r)| (*p, inv_mod(*r, *p))).collect(),
            },
            p => p.clone(),
        };
        Ok(KCanonicalClass::normalized(
            &self.field,
            self.weight,
            payload,
        ))
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let fp = Field::prime(p).expect("tame keys are primes");
    fp.from_i64(a as i64)
        .inv()
        .expect("tame residues are units")
        .as_residue()
        .expect("prime field")
}

impl fmt::Display for KCanonicalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.payload {
            ClassPayload::Zero => write!(f, "0"),
            ClassPayload::Integer(n) => write!(f, "{n}"),
            ClassPayload::UnitValue(u) => write!(f, "{{{u}}}"),
            ClassPayload::RationalClass { eps_inf, tame } => {
                write!(f, "eps_inf={eps_inf}")?;
                for (p, r) in tame {
                    write!(f, " t_{p}={r}")?;
                }
                Ok(())
            }
            ClassPayload::RationalSign(e) => write!(f, "eps_inf={e}"),
            ClassPayload::RealSign(e) => write!(f, "sign={e}"),
        }
    }
}

/// `ε_∞`: a term contributes `-1` when all its entries are negative and its
/// coefficient is odd.
fn sign_symbol(x: &MilnorExpression) -> i8 {
    let mut eps = 1;
    for (entries, c) in x.terms() {
        if c % 2 != 0 && entries.iter().all(|e| e.is_negative()) {
            eps = -eps;
        }
    }
    eps
}

fn unit_value(x: &MilnorExpression) -> Result<Elem> {
    let mut acc = x.field().one();
    for (entries, c) in x.terms() {
        acc = acc.checked_mul(&entries[0].pow(c)?)?;
    }
    Ok(acc)
}

fn odd_primes(x: &MilnorExpression) -> Result<BTreeSet<u64>> {
    let mut out = BTreeSet::new();
    for (entries, _) in x.terms() {
        for e in entries {
            let r = e.as_rational().expect("rational entries");
            for n in [r.numer().magnitude(), r.denom().magnitude()] {
                if n.is_zero() || *n == BigUint::from(1u32) {
                    continue;
                }
                for p in num_prime::nt_funcs::factorize(n.clone()).into_keys() {
                    let p = p.to_u64().ok_or_else(|| {
                        Error::UnsupportedField(format!("prime {p} exceeds 64 bits"))
                    })?;
                    if p != 2 {
                        out.insert(p);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// The canonical class of an expression over `Q` or a finite field.
///
/// Weight 0 gives the integer, weight 1 the product of entries. For finite
/// fields and weight at least 2 the class is zero. Over `Q` weight 2 records
/// `ε_∞` and every nontrivial tame symbol at an odd prime; weight at least 3
/// records `ε_∞` only.
pub fn canonical_class(x: &MilnorExpression) -> Result<KCanonicalClass> {
    let k = x.field();
    let l = x.weight();
    let payload = match l {
        0 => ClassPayload::Integer(x.as_integer().unwrap_or(0)),
        1 => ClassPayload::UnitValue(unit_value(x)?),
        _ if k.is_finite() => ClassPayload::Zero,
        2 if k.is_rationals() => {
            let mut tame = BTreeMap::new();
            for p in odd_primes(x)? {
                let v = Valuation::rational_prime(p)?;
                let r = unit_value(&tame_symbol(&v, x)?)?;
                let r = r.as_residue().expect("prime residue field");
                if r != 1 {
                    tame.insert(p, r);
                }
            }
            ClassPayload::RationalClass {
                eps_inf: sign_symbol(x),
                tame,
            }
        }
        _ if k.is_rationals() => ClassPayload::RationalSign(sign_symbol(x)),
        _ => {
            return Err(Error::UnsupportedField(format!(
                "no canonical form for weight {l} over {k}"
            )))
        }
    };
    Ok(KCanonicalClass::normalized(k, l, payload))
}

/// The `Z/2` sign invariant of `K^M_l(R)` for an expression with rational
/// entries. This decides equality only modulo the uniquely divisible part,
/// not in `K^M_l(R)` itself.
pub fn canonical_class_real(x: &MilnorExpression) -> Result<KCanonicalClass> {
    let k = x.field();
    if !k.is_rationals() {
        return Err(Error::UnsupportedField(format!(
            "sign invariant needs rational entries, got {k}"
        )));
    }
    let payload = match x.weight() {
        0 => ClassPayload::Integer(x.as_integer().unwrap_or(0)),
        _ => ClassPayload::RealSign(sign_symbol(x)),
    };
    Ok(KCanonicalClass::normalized(k, x.weight(), payload))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(k: &Field, v: &[(i64, i64)]) -> MilnorExpression {
        let e: Vec<Elem> = v.iter().map(|&(n, d)| k.frac(n, d).unwrap()).collect();
        MilnorExpression::symbol(&e).unwrap()
    }

    #[test]
    fn minus_one_minus_one() {
        let q = Field::rationals();
        let c = canonical_class(&sym(&q, &[(-1, 1), (-1, 1)])).unwrap();
        assert_eq!(
            c.payload(),
            &ClassPayload::RationalClass {
                eps_inf: -1,
                tame: BTreeMap::new()
            }
        );
    }

    #[test]
    fn three_five() {
        let q = Field::rationals();
        let c = canonical_class(&sym(&q, &[(3, 1), (5, 1)])).unwrap();
        let tame: BTreeMap<u64, u64> = [(3, 2), (5, 3)].into_iter().collect();
        assert_eq!(
            c.payload(),
            &ClassPayload::RationalClass { eps_inf: 1, tame }
        );
    }

    #[test]
    fn steinberg_and_friends_vanish() {
        let q = Field::rationals();
        assert!(canonical_class(&sym(&q, &[(3, 1), (-2, 1)]))
            .unwrap()
            .is_zero());
        assert!(canonical_class(&sym(&q, &[(2, 1), (-1, 1)]))
            .unwrap()
            .is_zero());
        assert!(canonical_class(&sym(&q, &[(7, 3), (-7, 3)]))
            .unwrap()
            .is_zero());
        assert!(canonical_class(&sym(&q, &[(1, 1), (5, 1)]))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn weight_one_is_the_product() {
        let q = Field::rationals();
        let minus = sym(&q, &[(-1, 1)]);
        assert_eq!(
            canonical_class(&minus.scale(-1)).unwrap(),
            canonical_class(&minus).unwrap()
        );
        let x = &sym(&q, &[(2, 1)]) + &sym(&q, &[(3, 2)]);
        assert_eq!(
            canonical_class(&x).unwrap().payload(),
            &ClassPayload::UnitValue(q.from_i64(3))
        );
    }

    #[test]
    fn finite_fields_collapse_in_weight_two() {
        let f7 = Field::prime(7).unwrap();
        let x = MilnorExpression::symbol(&[f7.from_i64(3), f7.from_i64(5)]).unwrap();
        assert!(canonical_class(&x).unwrap().is_zero());
    }

    #[test]
    fn combine_matches_sum() {
        let q = Field::rationals();
        let a = sym(&q, &[(3, 1), (5, 1)]);
        let b = sym(&q, &[(-3, 1), (10, 7)]);
        let lhs = canonical_class(&(&a + &b)).unwrap();
        let rhs = canonical_class(&a)
            .unwrap()
            .combine(&canonical_class(&b).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
        let neg = canonical_class(&a.scale(-1)).unwrap();
        assert_eq!(neg, canonical_class(&a).unwrap().negate().unwrap());
    }

    #[test]
    fn unsupported_fields() {
        let q = Field::rationals();
        let k = Field::extension(&q, &crate::algebra::Poly::from_i64s(&q, &[-2, 0, 1])).unwrap();
        let x = MilnorExpression::symbol(&[k.from_i64(3), k.from_i64(5)]).unwrap();
        assert!(matches!(
            canonical_class(&x),
            Err(Error::UnsupportedField(_))
        ));
    }
}
