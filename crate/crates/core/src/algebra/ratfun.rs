//! Elements of the rational function field `k(X)`.

use std::fmt;
use std::ops::{Mul, Neg};

use super::field::{Elem, Field};
use super::poly::Poly;
use crate::error::{Error, Result};

/// `num / den` with `gcd(num, den) = 1` and `den` monic.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: &Poly, den: &Poly) -> Result<RationalFunction> {
        if num.field() != den.field() {
            return Err(Error::DescriptorMismatch);
        }
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let k = num.field();
        if num.is_zero() {
            return Ok(RationalFunction {
                num: num.clone(),
                den: Poly::one(k),
            });
        }
        let g = num.gcd(den)?;
        let mut n = num.exact_div(&g)?;
        let d = den.exact_div(&g)?;
        let lc = d.leading();
        n = n.scale(&lc.inv()?);
        Ok(RationalFunction {
            num: n,
            den: d.monic(),
        })
    }

    pub fn from_poly(p: &Poly) -> RationalFunction {
        RationalFunction {
            num: p.clone(),
            den: Poly::one(p.field()),
        }
    }

    pub fn constant(c: &Elem) -> RationalFunction {
        RationalFunction::from_poly(&Poly::constant(c))
    }

    pub fn x(k: &Field) -> RationalFunction {
        RationalFunction::from_poly(&Poly::x(k))
    }

    pub fn one(k: &Field) -> RationalFunction {
        RationalFunction::from_poly(&Poly::one(k))
    }

    pub fn field(&self) -> &Field {
        self.num.field()
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The constant value, if this function lies in `k`.
    pub fn as_constant(&self) -> Option<Elem> {
        (self.num.is_constant() && self.den.is_one()).then(|| self.num.coeff(0))
    }

    pub fn checked_mul(&self, other: &RationalFunction) -> Result<RationalFunction> {
        RationalFunction::new(
            &self.num.checked_mul(&other.num)?,
            &self.den.checked_mul(&other.den)?,
        )
    }

    pub fn checked_div(&self, other: &RationalFunction) -> Result<RationalFunction> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RationalFunction::new(
            &self.num.checked_mul(&other.den)?,
            &self.den.checked_mul(&other.num)?,
        )
    }

    pub fn checked_add(&self, other: &RationalFunction) -> Result<RationalFunction> {
        let n = self
            .num
            .checked_mul(&other.den)?
            .checked_add(&other.num.checked_mul(&self.den)?)?;
        RationalFunction::new(&n, &self.den.checked_mul(&other.den)?)
    }

    pub fn checked_sub(&self, other: &RationalFunction) -> Result<RationalFunction> {
        self.checked_add(&-other)
    }

    pub fn inv(&self) -> Result<RationalFunction> {
        RationalFunction::one(self.field()).checked_div(self)
    }

    pub fn pow(&self, e: i64) -> Result<RationalFunction> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let e = e.unsigned_abs() as u32;
        Ok(RationalFunction {
            num: base.num.pow(e),
            den: base.den.pow(e),
        })
    }

    /// Value at a point of `k`; errors when the point is a pole.
    pub fn eval(&self, x: &Elem) -> Result<Elem> {
        let d = self.den.eval(x)?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        self.num.eval(x)?.checked_div(&d)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        self.checked_mul(rhs).expect("RationalFunction::mul")
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_common_factors() {
        let q = Field::rationals();
        // (2X^2 - 2) / (2X + 2) = X - 1
        let r = RationalFunction::new(
            &Poly::from_i64s(&q, &[-2, 0, 2]),
            &Poly::from_i64s(&q, &[2, 2]),
        )
        .unwrap();
        assert_eq!(
            r,
            RationalFunction::from_poly(&Poly::from_i64s(&q, &[-1, 1]))
        );
    }

    #[test]
    fn field_operations() {
        let f5 = Field::prime(5).unwrap();
        let a = RationalFunction::new(
            &Poly::from_i64s(&f5, &[1, 1]),
            &Poly::from_i64s(&f5, &[0, 1]),
        )
        .unwrap();
        let b = RationalFunction::x(&f5);
        let s = a.checked_add(&b).unwrap();
        assert_eq!(s.checked_sub(&b).unwrap(), a);
        assert_eq!(
            a.checked_mul(&a.inv().unwrap()).unwrap(),
            RationalFunction::one(&f5)
        );
        assert!(RationalFunction::new(&Poly::one(&f5), &Poly::zero(&f5)).is_err());
    }
}
