//! Dense univariate polynomials over a [`Field`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigUint;

use super::field::{Elem, Field, Value};
use crate::error::{Error, Result};

// Raw dense routines over coefficient values, lowest degree first, no trailing zeros.

pub(crate) fn trim(k: &Field, a: &mut Vec<Value>) {
    while a.last().is_some_and(|c| k.is_zero_v(c)) {
        a.pop();
    }
}

pub(crate) fn d_add(k: &Field, a: &[Value], b: &[Value]) -> Vec<Value> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out: Vec<Value> = long.to_vec();
    for (o, s) in out.iter_mut().zip(short) {
        *o = k.add_v(o, s);
    }
    trim(k, &mut out);
    out
}

pub(crate) fn d_neg(k: &Field, a: &[Value]) -> Vec<Value> {
    a.iter().map(|c| k.neg_v(c)).collect()
}

pub(crate) fn d_sub(k: &Field, a: &[Value], b: &[Value]) -> Vec<Value> {
    d_add(k, a, &d_neg(k, b))
}

pub(crate) fn d_scale(k: &Field, a: &[Value], c: &Value) -> Vec<Value> {
    if k.is_zero_v(c) {
        return Vec::new();
    }
    a.iter().map(|x| k.mul_v(x, c)).collect()
}

pub(crate) fn d_mul(k: &Field, a: &[Value], b: &[Value]) -> Vec<Value> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![k.zero_v(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if k.is_zero_v(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = k.add_v(&out[i + j], &k.mul_v(x, y));
        }
    }
    trim(k, &mut out);
    out
}

/// Quotient and remainder; `b` must be nonzero.
pub(crate) fn d_divrem(k: &Field, a: &[Value], b: &[Value]) -> (Vec<Value>, Vec<Value>) {
    assert!(!b.is_empty(), "polynomial division by zero");
    if a.len() < b.len() {
        return (Vec::new(), a.to_vec());
    }
    let lc_inv = k
        .inv_v(b.last().unwrap())
        .expect("nonzero leading coefficient");
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let mut q = vec![k.zero_v(); a.len() - db];
    for i in (0..q.len()).rev() {
        let c = k.mul_v(&r[i + db], &lc_inv);
        if k.is_zero_v(&c) {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            r[i + j] = k.sub_v(&r[i + j], &k.mul_v(&c, bj));
        }
        q[i] = c;
    }
    r.truncate(db);
    trim(k, &mut r);
    trim(k, &mut q);
    (q, r)
}

/// Remainder modulo a monic `m`.
pub(crate) fn d_rem_monic(k: &Field, a: &[Value], m: &[Value]) -> Vec<Value> {
    if a.len() < m.len() {
        return a.to_vec();
    }
    let dm = m.len() - 1;
    let mut r = a.to_vec();
    for i in (dm..r.len()).rev() {
        let c = r[i].clone();
        if k.is_zero_v(&c) {
            continue;
        }
        for (j, mj) in m.iter().enumerate().take(dm) {
            let idx = i - dm + j;
            r[idx] = k.sub_v(&r[idx], &k.mul_v(&c, mj));
        }
        r[i] = k.zero_v();
    }
    r.truncate(dm);
    trim(k, &mut r);
    r
}

pub(crate) fn d_monic(k: &Field, a: &[Value]) -> Vec<Value> {
    match a.last() {
        None => Vec::new(),
        Some(lc) => {
            let inv = k.inv_v(lc).expect("nonzero leading coefficient");
            d_scale(k, a, &inv)
        }
    }
}

/// Extended gcd: `(g, s, t)` with `g = s*a + t*b` and `g` monic (or zero).
pub(crate) fn d_xgcd(k: &Field, a: &[Value], b: &[Value]) -> (Vec<Value>, Vec<Value>, Vec<Value>) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (vec![k.one_v()], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![k.one_v()]);
    while !r1.is_empty() {
        let (q, r) = d_divrem(k, &r0, &r1);
        let s2 = d_sub(k, &s0, &d_mul(k, &q, &s1));
        let t2 = d_sub(k, &t0, &d_mul(k, &q, &t1));
        (r0, r1) = (r1, r);
        (s0, s1) = (s1, s2);
        (t0, t1) = (t1, t2);
    }
    match r0.last() {
        None => (r0, s0, t0),
        Some(lc) => {
            let inv = k.inv_v(lc).expect("nonzero");
            (
                d_scale(k, &r0, &inv),
                d_scale(k, &s0, &inv),
                d_scale(k, &t0, &inv),
            )
        }
    }
}

pub(crate) fn d_gcd(k: &Field, a: &[Value], b: &[Value]) -> Vec<Value> {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    while !r1.is_empty() {
        let (_, r) = d_divrem(k, &r0, &r1);
        (r0, r1) = (r1, r);
    }
    d_monic(k, &r0)
}

pub(crate) fn d_deriv(k: &Field, a: &[Value]) -> Vec<Value> {
    let mut out: Vec<Value> = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| k.mul_v(c, &k.int_v(i as i64)))
        .collect();
    trim(k, &mut out);
    out
}

pub(crate) fn d_eval(k: &Field, a: &[Value], x: &Value) -> Value {
    let mut acc = k.zero_v();
    for c in a.iter().rev() {
        acc = k.add_v(&k.mul_v(&acc, x), c);
    }
    acc
}

pub(crate) fn d_mulmod(k: &Field, a: &[Value], b: &[Value], m: &[Value]) -> Vec<Value> {
    let prod = d_mul(k, a, b);
    d_divrem(k, &prod, m).1
}

pub(crate) fn d_powmod(k: &Field, a: &[Value], e: &BigUint, m: &[Value]) -> Vec<Value> {
    let mut result = d_divrem(k, &[k.one_v()], m).1;
    let base = d_divrem(k, a, m).1;
    for i in (0..e.bits()).rev() {
        result = d_mulmod(k, &result, &result, m);
        if e.bit(i) {
            result = d_mulmod(k, &result, &base, m);
        }
    }
    result
}

/// A univariate polynomial; coefficients are stored lowest degree first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Value>,
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by degree first, then coefficients from the top down.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
            .then_with(|| self.field.cmp(&other.field))
    }
}

impl Poly {
    pub(crate) fn from_values(field: &Field, mut coeffs: Vec<Value>) -> Poly {
        trim(field, &mut coeffs);
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    pub(crate) fn values(&self) -> &[Value] {
        &self.coeffs
    }

    /// Builds a polynomial from coefficients, lowest degree first.
    pub fn new(field: &Field, coeffs: &[Elem]) -> Result<Poly> {
        let mut vals = Vec::with_capacity(coeffs.len());
        for c in coeffs {
            if c.field() != field {
                return Err(Error::DescriptorMismatch);
            }
            vals.push(c.value.clone());
        }
        Ok(Poly::from_values(field, vals))
    }

    /// Like [`Poly::new`] but infers the field from the first coefficient.
    pub fn from_elems(coeffs: &[Elem]) -> Result<Poly> {
        let field = coeffs
            .first()
            .ok_or_else(|| Error::DegenerateInput("empty coefficient list".into()))?
            .field()
            .clone();
        Poly::new(&field, coeffs)
    }

    pub fn from_i64s(field: &Field, coeffs: &[i64]) -> Poly {
        Poly::from_values(field, coeffs.iter().map(|&c| field.int_v(c)).collect())
    }

    pub fn zero(field: &Field) -> Poly {
        Poly::from_values(field, Vec::new())
    }

    pub fn one(field: &Field) -> Poly {
        Poly::from_values(field, vec![field.one_v()])
    }

    /// The indeterminate `X`.
    pub fn x(field: &Field) -> Poly {
        Poly::from_values(field, vec![field.zero_v(), field.one_v()])
    }

    pub fn constant(c: &Elem) -> Poly {
        Poly::from_values(c.field(), vec![c.value.clone()])
    }

    /// `X - c`.
    pub fn linear(c: &Elem) -> Poly {
        let f = c.field();
        Poly::from_values(f, vec![f.neg_v(&c.value), f.one_v()])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.field.is_one_v(&self.coeffs[0])
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| self.field.is_one_v(c))
    }

    /// Leading coefficient (zero for the zero polynomial).
    pub fn leading(&self) -> Elem {
        match self.coeffs.last() {
            Some(c) => self.field.wrap(c.clone()),
            None => self.field.zero(),
        }
    }

    pub fn coeff(&self, i: usize) -> Elem {
        match self.coeffs.get(i) {
            Some(c) => self.field.wrap(c.clone()),
            None => self.field.zero(),
        }
    }

    pub fn coeffs(&self) -> Vec<Elem> {
        self.coeffs
            .iter()
            .map(|c| self.field.wrap(c.clone()))
            .collect()
    }

    fn check(&self, other: &Poly) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::DescriptorMismatch)
        }
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        Ok(Poly::from_values(
            &self.field,
            d_add(&self.field, &self.coeffs, &other.coeffs),
        ))
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        Ok(Poly::from_values(
            &self.field,
            d_sub(&self.field, &self.coeffs, &other.coeffs),
        ))
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        Ok(Poly::from_values(
            &self.field,
            d_mul(&self.field, &self.coeffs, &other.coeffs),
        ))
    }

    pub fn scale(&self, c: &Elem) -> Poly {
        assert_eq!(c.field(), &self.field, "Poly::scale");
        Poly::from_values(&self.field, d_scale(&self.field, &self.coeffs, &c.value))
    }

    pub fn divrem(&self, other: &Poly) -> Result<(Poly, Poly)> {
        self.check(other)?;
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (q, r) = d_divrem(&self.field, &self.coeffs, &other.coeffs);
        Ok((
            Poly::from_values(&self.field, q),
            Poly::from_values(&self.field, r),
        ))
    }

    pub fn rem(&self, other: &Poly) -> Result<Poly> {
        Ok(self.divrem(other)?.1)
    }

    /// Exact quotient; errors if `other` does not divide `self`.
    pub fn exact_div(&self, other: &Poly) -> Result<Poly> {
        let (q, r) = self.divrem(other)?;
        if !r.is_zero() {
            return Err(Error::InvariantViolated(
                "inexact polynomial division".into(),
            ));
        }
        Ok(q)
    }

    pub fn monic(&self) -> Poly {
        Poly::from_values(&self.field, d_monic(&self.field, &self.coeffs))
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        Ok(Poly::from_values(
            &self.field,
            d_gcd(&self.field, &self.coeffs, &other.coeffs),
        ))
    }

    /// `(g, s, t)` with `g = s*self + t*other`, `g` monic.
    pub fn xgcd(&self, other: &Poly) -> Result<(Poly, Poly, Poly)> {
        self.check(other)?;
        let (g, s, t) = d_xgcd(&self.field, &self.coeffs, &other.coeffs);
        Ok((
            Poly::from_values(&self.field, g),
            Poly::from_values(&self.field, s),
            Poly::from_values(&self.field, t),
        ))
    }

    pub fn derivative(&self) -> Poly {
        Poly::from_values(&self.field, d_deriv(&self.field, &self.coeffs))
    }

    pub fn eval(&self, x: &Elem) -> Result<Elem> {
        if x.field() != &self.field {
            return Err(Error::DescriptorMismatch);
        }
        Ok(self.field.wrap(d_eval(&self.field, &self.coeffs, &x.value)))
    }

    /// Evaluates at a point of an extension of the coefficient field.
    pub fn eval_embedded(&self, x: &Elem) -> Result<Elem> {
        self.embed_into(x.field())?.eval(x)
    }

    /// Same polynomial with coefficients pushed up into an extension field.
    pub fn embed_into(&self, target: &Field) -> Result<Poly> {
        let vals: Result<Vec<Value>> = self
            .coeffs
            .iter()
            .map(|c| target.embed_v(&self.field, c))
            .collect();
        Ok(Poly::from_values(target, vals?))
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(&self.field);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn powmod(&self, e: &BigUint, m: &Poly) -> Result<Poly> {
        self.check(m)?;
        if m.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Poly::from_values(
            &self.field,
            d_powmod(&self.field, &self.coeffs, e, &m.coeffs),
        ))
    }

    /// Class of this polynomial in `field[X]/(modulus)` where `target` is that extension.
    pub fn reduce_into(&self, target: &Field) -> Result<Elem> {
        match target.base() {
            Some(b) if b == &self.field => {
                let m = target.modulus_values().expect("extension");
                Ok(target.wrap(Value::Poly(d_rem_monic(b, &self.coeffs, m))))
            }
            _ => Err(Error::DescriptorMismatch),
        }
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let nested = self.field.depth() > 0;
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if self.field.is_zero_v(c) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let one = self.field.is_one_v(c);
            let e = self.field.wrap(c.clone());
            if i == 0 || !one {
                if nested {
                    write!(f, "({e})")?;
                } else {
                    write!(f, "{e}")?;
                }
            }
            match (i, one) {
                (0, _) => {}
                (1, true) => write!(f, "X")?,
                (1, false) => write!(f, "*X")?,
                (_, true) => write!(f, "X^{i}")?,
                (_, false) => write!(f, "*X^{i}")?,
            }
        }
        Ok(())
    }
}

macro_rules! impl_poly_ops {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                self.$checked(rhs)
                    .expect(concat!("Poly::", stringify!($method)))
            }
        }
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
    };
}

impl_poly_ops!(Add, add, checked_add);
impl_poly_ops!(Sub, sub, checked_sub);
impl_poly_ops!(Mul, mul, checked_mul);

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::from_values(&self.field, d_neg(&self.field, &self.coeffs))
    }
}
