//! Identity generators: the cyclic-difference relation, the two-term
//! rewrites of weight-2 symbols, and prime splitting over `Q`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::MilnorExpression;
use crate::algebra::Elem;
use crate::error::{Error, Result};

/// Splits nonzero rationals as `sign * prod p^e`; the sign appears as the
/// entry `-1` only when negative, and `1` splits into nothing.
pub fn rational_prime_split(a: &Elem) -> Result<Vec<(Elem, i64)>> {
    let q = a.field();
    let r = a
        .as_rational()
        .ok_or_else(|| Error::UnsupportedField(format!("prime splitting needs Q, got {q}")))?;
    if a.is_zero() {
        return Err(Error::ZeroEntry);
    }
    let mut out = Vec::new();
    if r.is_negative() {
        out.push((-q.one(), 1));
    }
    for (n, sign) in [(r.numer(), 1i64), (r.denom(), -1)] {
        let m = n.magnitude();
        if m.is_one() {
            continue;
        }
        for (p, e) in num_prime::nt_funcs::factorize(m.clone()) {
            let pe = q.rational(BigRational::from_integer(BigInt::from(p)))?;
            out.push((pe, sign * e as i64));
        }
    }
    Ok(out)
}

/// Expands every entry along its prime factorization.
pub fn rewrite_multilinear_rational(x: &MilnorExpression) -> Result<MilnorExpression> {
    x.rewrite_multilinear(rational_prime_split)
}

/// Both sides of
/// `Σ_{i=0}^{l} (-1)^{l(i+1)} {x_{i+1} - x_i, ..., x_{i+l} - x_i} = {-1, ..., -1}`
/// for points `x_0, ..., x_l` indexed cyclically.
pub fn key_relation_instance(xs: &[Elem]) -> Result<(MilnorExpression, MilnorExpression)> {
    if xs.len() < 2 {
        return Err(Error::DegenerateInput("need at least two points".into()));
    }
    let k = xs[0].field().clone();
    if xs.iter().any(|x| x.field() != &k) {
        return Err(Error::DescriptorMismatch);
    }
    let n = xs.len();
    let l = n - 1;
    let mut lhs = MilnorExpression::zero(&k, l);
    for i in 0..n {
        let mut entries = Vec::with_capacity(l);
        for j in 1..=l {
            let d = &xs[(i + j) % n] - &xs[i];
            if d.is_zero() {
                return Err(Error::DegenerateDifferences);
            }
            entries.push(d);
        }
        let sign = if (l * (i + 1)).is_multiple_of(2) {
            1
        } else {
            -1
        };
        lhs = lhs.checked_add(&MilnorExpression::symbol_in(&k, &entries)?.scale(sign))?;
    }
    let rhs = MilnorExpression::symbol_in(&k, &vec![-k.one(); l])?;
    Ok((lhs, rhs))
}

/// Which two-term rewrite of `{c, d}` to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lemma23Variant {
    /// `{c, d} = {c/d, d - c} + {-1, d}`; needs `d != c`.
    First,
    /// `{c, d} = {-c/d, d + c}`; needs `d != -c`.
    Second,
}

/// `({c, d}, rewritten form)`.
pub fn lemma23_rewrite(
    c: &Elem,
    d: &Elem,
    variant: Lemma23Variant,
) -> Result<(MilnorExpression, MilnorExpression)> {
    if c.is_zero() || d.is_zero() {
        return Err(Error::DegenerateInput("entries must be nonzero".into()));
    }
    let k = c.field().clone();
    let lhs = MilnorExpression::symbol_in(&k, &[c.clone(), d.clone()])?;
    let ratio = c.checked_div(d)?;
    let rhs = match variant {
        Lemma23Variant::First => {
            let diff = d.checked_sub(c)?;
            if diff.is_zero() {
                return Err(Error::DegenerateInput("variant (i) needs d != c".into()));
            }
            MilnorExpression::symbol_in(&k, &[ratio, diff])?
                .checked_add(&MilnorExpression::symbol_in(&k, &[-k.one(), d.clone()])?)?
        }
        Lemma23Variant::Second => {
            let sum = d.checked_add(c)?;
            if sum.is_zero() {
                return Err(Error::DegenerateInput("variant (ii) needs d != -c".into()));
            }
            MilnorExpression::symbol_in(&k, &[-ratio, sum])?
        }
    };
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;
    use crate::symbols::canonical_class;

    #[test]
    fn splitting_examples() {
        let q = Field::rationals();
        let c = q.from_i64(7);
        let four = MilnorExpression::symbol(&[q.from_i64(4), c.clone()]).unwrap();
        let two = MilnorExpression::symbol(&[q.from_i64(2), c.clone()])
            .unwrap()
            .scale(2);
        assert_eq!(rewrite_multilinear_rational(&four).unwrap(), two);
        let one = MilnorExpression::symbol(&[q.one(), c.clone()]).unwrap();
        assert!(rewrite_multilinear_rational(&one).unwrap().is_empty());
        let ab = MilnorExpression::symbol(&[q.from_i64(-6), c.clone()]).unwrap();
        let expanded = rewrite_multilinear_rational(&ab).unwrap();
        assert_eq!(expanded.num_terms(), 3);
        assert_eq!(
            canonical_class(&expanded).unwrap(),
            canonical_class(&ab).unwrap()
        );
    }

    #[test]
    fn key_relation_small_cases() {
        let q = Field::rationals();
        let (lhs, rhs) = key_relation_instance(&[q.zero(), q.one()]).unwrap();
        assert_eq!(
            canonical_class(&lhs).unwrap(),
            canonical_class(&rhs).unwrap()
        );
        let (lhs, rhs) = key_relation_instance(&[q.zero(), q.one(), q.from_i64(3)]).unwrap();
        assert_eq!(
            canonical_class(&lhs).unwrap(),
            canonical_class(&rhs).unwrap()
        );
        assert_eq!(
            key_relation_instance(&[q.one(), q.one()]).unwrap_err(),
            Error::DegenerateDifferences
        );
        let f5 = Field::prime(5).unwrap();
        let (lhs, rhs) =
            key_relation_instance(&[f5.one(), f5.from_i64(2), f5.from_i64(4)]).unwrap();
        assert!(
            canonical_class(&lhs).unwrap().is_zero() && canonical_class(&rhs).unwrap().is_zero()
        );
    }

    #[test]
    fn lemma23_examples() {
        let q = Field::rationals();
        let (l, r) = lemma23_rewrite(&q.one(), &q.from_i64(2), Lemma23Variant::Second).unwrap();
        assert_eq!(canonical_class(&l).unwrap(), canonical_class(&r).unwrap());
        let (l, r) = lemma23_rewrite(&q.one(), &q.one(), Lemma23Variant::Second).unwrap();
        assert!(canonical_class(&l).unwrap().is_zero() && canonical_class(&r).unwrap().is_zero());
        let (l, r) = lemma23_rewrite(
            &q.from_i64(5),
            &q.frac(-3, 7).unwrap(),
            Lemma23Variant::First,
        )
        .unwrap();
        assert_eq!(canonical_class(&l).unwrap(), canonical_class(&r).unwrap());
        assert!(lemma23_rewrite(&q.one(), &q.one(), Lemma23Variant::First).is_err());
    }
}
