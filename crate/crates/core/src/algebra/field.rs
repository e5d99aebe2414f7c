//! Field descriptors and exact field elements.
//!
//! A [`Field`] is one of `Q`, `F_p`, or a simple extension `k[X]/(m)` of
//! another field, so towers nest to any height. Elements carry their field
//! and a canonical representation: reduced fractions, residues in `[0, p)`,
//! or base-field coefficient vectors reduced modulo the defining polynomial
//! with no trailing zeros. Equality is representation comparison.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;

use super::poly::{self, Poly};
use crate::error::{Error, Result};

/// Internal canonical representation of a field element.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) enum Value {
    Rational(BigRational),
    Residue(u64),
    Poly(Vec<Value>),
}

#[derive(Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Kind {
    Rationals,
    Prime(u64),
    Extension { base: Field, modulus: Vec<Value> },
}

#[derive(Debug)]
struct Inner {
    kind: Kind,
    degree: usize,
    depth: usize,
    order: Option<BigUint>,
}

/// A field descriptor. Cheap to clone.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

/// Shape of a field descriptor, for matching without touching internals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    Rationals,
    Prime(u64),
    Extension,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.kind == other.0.kind
    }
}

impl Eq for Field {}

impl PartialOrd for Field {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Field {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            Ordering::Equal
        } else {
            self.0.kind.cmp(&other.0.kind)
        }
    }
}

impl Hash for Field {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.kind.hash(state)
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.kind {
            Kind::Rationals => write!(f, "Q"),
            Kind::Prime(p) => write!(f, "F_{p}"),
            Kind::Extension { base, .. } => {
                let m = self.modulus().expect("extension has a modulus");
                write!(f, "{base}[{}]/({})", self.generator_name(), m)
            }
        }
    }
}

fn generator_name(depth: usize) -> String {
    const NAMES: [&str; 6] = ["a", "b", "c", "e", "g", "h"];
    match NAMES.get(depth.saturating_sub(1)) {
        Some(n) => (*n).to_string(),
        None => format!("g{depth}"),
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1);
    s0.rem_euclid(p as i128) as u64
}

impl Field {
    fn from_kind(kind: Kind) -> Field {
        let (degree, depth, order) = match &kind {
            Kind::Rationals => (1, 0, None),
            Kind::Prime(p) => (1, 0, Some(BigUint::from(*p))),
            Kind::Extension { base, modulus } => {
                let step = modulus.len() - 1;
                let order = base.0.order.as_ref().map(|q| q.pow(step as u32));
                (base.0.degree * step, base.0.depth + 1, order)
            }
        };
        Field(Arc::new(Inner {
            kind,
            degree,
            depth,
            order,
        }))
    }

    /// The rational numbers.
    pub fn rationals() -> Field {
        Field::from_kind(Kind::Rationals)
    }

    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Field> {
        if p >= (1u64 << 63) || !num_prime::nt_funcs::is_prime64(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Field::from_kind(Kind::Prime(p)))
    }

    /// `base[X]/(modulus)`; the modulus must be monic and irreducible over `base`.
    pub fn extension(base: &Field, modulus: &Poly) -> Result<Field> {
        if modulus.field() != base {
            return Err(Error::DescriptorMismatch);
        }
        match modulus.degree() {
            Some(d) if d >= 1 && modulus.leading().is_one() => {}
            _ => return Err(Error::NotMonic),
        }
        if !super::factor::is_irreducible(modulus)? {
            return Err(Error::Reducible);
        }
        Ok(Field::extension_unchecked(base, modulus.values().to_vec()))
    }

    /// Builds `base[X]/(modulus)` trusting the caller that `modulus` is monic irreducible.
    pub(crate) fn extension_unchecked(base: &Field, modulus: Vec<Value>) -> Field {
        debug_assert!(modulus.len() >= 2);
        Field::from_kind(Kind::Extension {
            base: base.clone(),
            modulus,
        })
    }

    /// `F_{p^d}` in the presentation `F_p[a]/(m)` with `m` the lexicographically
    /// first monic irreducible polynomial of degree `d`.
    pub fn finite(p: u64, d: usize) -> Result<Field> {
        let fp = Field::prime(p)?;
        if d == 0 {
            return Err(Error::DegenerateInput("degree must be positive".into()));
        }
        if d == 1 {
            return Ok(fp);
        }
        let m = super::factor::first_irreducible(&fp, d)?;
        Ok(Field::extension_unchecked(&fp, m.values().to_vec()))
    }

    /// `F_q` for a prime power `q`.
    pub fn galois(q: u64) -> Result<Field> {
        let factors = num_prime::nt_funcs::factorize64(q);
        if factors.len() != 1 {
            return Err(Error::BadModulus(format!("{q} is not a prime power")));
        }
        let (&p, &d) = factors.iter().next().expect("one factor");
        Field::finite(p, d)
    }

    pub fn kind(&self) -> FieldKind {
        match &self.0.kind {
            Kind::Rationals => FieldKind::Rationals,
            Kind::Prime(p) => FieldKind::Prime(*p),
            Kind::Extension { .. } => FieldKind::Extension,
        }
    }

    pub fn ptr_eq(&self, other: &Field) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// Field this one is a simple extension of, if any.
    pub fn base(&self) -> Option<&Field> {
        match &self.0.kind {
            Kind::Extension { base, .. } => Some(base),
            _ => None,
        }
    }

    /// Defining polynomial over the base, if this is an extension.
    pub fn modulus(&self) -> Option<Poly> {
        match &self.0.kind {
            Kind::Extension { base, modulus } => Some(Poly::from_values(base, modulus.clone())),
            _ => None,
        }
    }

    pub(crate) fn modulus_values(&self) -> Option<&[Value]> {
        match &self.0.kind {
            Kind::Extension { modulus, .. } => Some(modulus),
            _ => None,
        }
    }

    /// Degree over the base field (1 for `Q` and `F_p`).
    pub fn step_degree(&self) -> usize {
        match &self.0.kind {
            Kind::Extension { modulus, .. } => modulus.len() - 1,
            _ => 1,
        }
    }

    /// Degree over the prime field or over `Q`.
    pub fn degree(&self) -> usize {
        self.0.degree
    }

    /// Number of extension steps above the prime field or `Q`.
    pub fn depth(&self) -> usize {
        self.0.depth
    }

    pub(crate) fn generator_name(&self) -> String {
        generator_name(self.0.depth)
    }

    /// The bottom of the tower: `Q` or `F_p`.
    pub fn prime_field(&self) -> Field {
        let mut f = self.clone();
        while let Some(b) = f.base() {
            f = b.clone();
        }
        f
    }

    pub fn is_rationals(&self) -> bool {
        matches!(self.0.kind, Kind::Rationals)
    }

    pub fn is_finite(&self) -> bool {
        self.0.order.is_some()
    }

    /// Characteristic; zero for fields over `Q`.
    pub fn characteristic(&self) -> u64 {
        match &self.prime_field().0.kind {
            Kind::Prime(p) => *p,
            _ => 0,
        }
    }

    /// Number of elements, for finite fields.
    pub fn order(&self) -> Option<&BigUint> {
        self.0.order.as_ref()
    }

    /// Fields from `self` down to the prime field, starting with `self`.
    pub fn tower(&self) -> Vec<Field> {
        let mut out = vec![self.clone()];
        while let Some(b) = out.last().and_then(|f| f.base()).cloned() {
            out.push(b);
        }
        out
    }

    /// Whether `k` occurs in the tower below (or equal to) `self`.
    pub fn is_over(&self, k: &Field) -> bool {
        self.tower().iter().any(|f| f == k)
    }

    /// `[self : k]` for an ancestor `k`.
    pub fn degree_over(&self, k: &Field) -> Result<usize> {
        let mut d = 1;
        for f in self.tower() {
            if &f == k {
                return Ok(d);
            }
            d *= f.step_degree();
        }
        Err(Error::UnsupportedTower(format!(
            "{k} is not a subfield of {self}"
        )))
    }

    /// Number of extension steps from `k` up to `self`.
    pub fn height_over(&self, k: &Field) -> Result<usize> {
        self.tower()
            .iter()
            .position(|f| f == k)
            .ok_or_else(|| Error::UnsupportedTower(format!("{k} is not a subfield of {self}")))
    }

    // ----- raw arithmetic on values -----

    pub(crate) fn zero_v(&self) -> Value {
        match &self.0.kind {
            Kind::Rationals => Value::Rational(BigRational::zero()),
            Kind::Prime(_) => Value::Residue(0),
            Kind::Extension { .. } => Value::Poly(Vec::new()),
        }
    }

    pub(crate) fn one_v(&self) -> Value {
        self.int_v(1)
    }

    pub(crate) fn int_v(&self, n: i64) -> Value {
        match &self.0.kind {
            Kind::Rationals => Value::Rational(BigRational::from_integer(BigInt::from(n))),
            Kind::Prime(p) => Value::Residue((n as i128).rem_euclid(*p as i128) as u64),
            Kind::Extension { base, .. } => {
                let c = base.int_v(n);
                if base.is_zero_v(&c) {
                    Value::Poly(Vec::new())
                } else {
                    Value::Poly(vec![c])
                }
            }
        }
    }

    pub(crate) fn is_zero_v(&self, a: &Value) -> bool {
        match a {
            Value::Rational(r) => r.is_zero(),
            Value::Residue(r) => *r == 0,
            Value::Poly(c) => c.is_empty(),
        }
    }

    pub(crate) fn is_one_v(&self, a: &Value) -> bool {
        *a == self.one_v()
    }

    pub(crate) fn add_v(&self, a: &Value, b: &Value) -> Value {
        match (&self.0.kind, a, b) {
            (Kind::Rationals, Value::Rational(x), Value::Rational(y)) => Value::Rational(x + y),
            (Kind::Prime(p), Value::Residue(x), Value::Residue(y)) => {
                let s = x + y;
                Value::Residue(if s >= *p { s - p } else { s })
            }
            (Kind::Extension { base, .. }, Value::Poly(x), Value::Poly(y)) => {
                Value::Poly(poly::d_add(base, x, y))
            }
            _ => unreachable!("value does not belong to {self}"),
        }
    }

    pub(crate) fn neg_v(&self, a: &Value) -> Value {
        match (&self.0.kind, a) {
            (Kind::Rationals, Value::Rational(x)) => Value::Rational(-x),
            (Kind::Prime(p), Value::Residue(x)) => Value::Residue(if *x == 0 { 0 } else { p - x }),
            (Kind::Extension { base, .. }, Value::Poly(x)) => Value::Poly(poly::d_neg(base, x)),
            _ => unreachable!("value does not belong to {self}"),
        }
    }

    pub(crate) fn sub_v(&self, a: &Value, b: &Value) -> Value {
        self.add_v(a, &self.neg_v(b))
    }

    pub(crate) fn mul_v(&self, a: &Value, b: &Value) -> Value {
        match (&self.0.kind, a, b) {
            (Kind::Rationals, Value::Rational(x), Value::Rational(y)) => Value::Rational(x * y),
            (Kind::Prime(p), Value::Residue(x), Value::Residue(y)) => {
                Value::Residue(((*x as u128 * *y as u128) % *p as u128) as u64)
            }
            (Kind::Extension { base, modulus }, Value::Poly(x), Value::Poly(y)) => {
                if x.is_empty() || y.is_empty() {
                    return Value::Poly(Vec::new());
                }
                let prod = poly::d_mul(base, x, y);
                Value::Poly(poly::d_rem_monic(base, &prod, modulus))
            }
            _ => unreachable!("value does not belong to {self}"),
        }
    }

    pub(crate) fn inv_v(&self, a: &Value) -> Option<Value> {
        if self.is_zero_v(a) {
            return None;
        }
        Some(match (&self.0.kind, a) {
            (Kind::Rationals, Value::Rational(x)) => Value::Rational(x.recip()),
            (Kind::Prime(p), Value::Residue(x)) => Value::Residue(inv_mod(*x, *p)),
            (Kind::Extension { base, modulus }, Value::Poly(x)) => {
                let (g, s, _) = poly::d_xgcd(base, x, modulus);
                // g is a nonzero constant because the modulus is irreducible
                debug_assert_eq!(g.len(), 1);
                let ginv = base.inv_v(&g[0]).expect("gcd is a unit");
                Value::Poly(poly::d_scale(base, &s, &ginv))
            }
            _ => unreachable!("value does not belong to {self}"),
        })
    }

    pub(crate) fn div_v(&self, a: &Value, b: &Value) -> Option<Value> {
        self.inv_v(b).map(|bi| self.mul_v(a, &bi))
    }

    pub(crate) fn pow_v(&self, a: &Value, e: &BigUint) -> Value {
        let mut result = self.one_v();
        let bits = e.bits();
        for i in (0..bits).rev() {
            result = self.mul_v(&result, &result);
            if e.bit(i) {
                result = self.mul_v(&result, a);
            }
        }
        result
    }

    /// Inverse of Frobenius on a finite field: `a^(q/p)`.
    pub(crate) fn pth_root_v(&self, a: &Value) -> Value {
        let q = self.order().expect("finite field");
        let p = BigUint::from(self.characteristic());
        self.pow_v(a, &(q / p))
    }

    /// Embeds a value of the ancestor `from` into `self`.
    pub(crate) fn embed_v(&self, from: &Field, a: &Value) -> Result<Value> {
        if self == from {
            return Ok(a.clone());
        }
        match &self.0.kind {
            Kind::Extension { base, .. } => {
                let c = base.embed_v(from, a)?;
                Ok(if base.is_zero_v(&c) {
                    Value::Poly(Vec::new())
                } else {
                    Value::Poly(vec![c])
                })
            }
            _ => Err(Error::UnsupportedTower(format!(
                "{from} is not a subfield of {self}"
            ))),
        }
    }

    /// Coordinates of `a` over the ancestor `k` in the flattened power basis.
    pub(crate) fn coords_over_v(&self, a: &Value, k: &Field) -> Result<Vec<Value>> {
        if self == k {
            return Ok(vec![a.clone()]);
        }
        match (&self.0.kind, a) {
            (Kind::Extension { base, modulus }, Value::Poly(c)) => {
                let step = modulus.len() - 1;
                let zero = base.zero_v();
                let mut out = Vec::with_capacity(self.degree_over(k)?);
                for i in 0..step {
                    out.extend(base.coords_over_v(c.get(i).unwrap_or(&zero), k)?);
                }
                Ok(out)
            }
            _ => Err(Error::UnsupportedTower(format!(
                "{k} is not a subfield of {self}"
            ))),
        }
    }

    pub(crate) fn assemble_over_v(&self, coords: &[Value], k: &Field) -> Result<Value> {
        if self == k {
            return Ok(coords[0].clone());
        }
        match &self.0.kind {
            Kind::Extension { base, modulus } => {
                let step = modulus.len() - 1;
                let chunk = base.degree_over(k)?;
                if coords.len() != step * chunk {
                    return Err(Error::DimensionMismatch("coordinate vector length".into()));
                }
                let mut c = Vec::with_capacity(step);
                for i in 0..step {
                    c.push(base.assemble_over_v(&coords[i * chunk..(i + 1) * chunk], k)?);
                }
                poly::trim(base, &mut c);
                Ok(Value::Poly(c))
            }
            _ => Err(Error::UnsupportedTower(format!(
                "{k} is not a subfield of {self}"
            ))),
        }
    }

    // ----- public element constructors -----

    pub(crate) fn wrap(&self, value: Value) -> Elem {
        Elem {
            field: self.clone(),
            value,
        }
    }

    pub fn zero(&self) -> Elem {
        self.wrap(self.zero_v())
    }

    pub fn one(&self) -> Elem {
        self.wrap(self.one_v())
    }

    /// Image of the integer `n`.
    pub fn from_i64(&self, n: i64) -> Elem {
        self.wrap(self.int_v(n))
    }

    /// A rational number (only in `Q`).
    pub fn rational(&self, r: BigRational) -> Result<Elem> {
        match &self.0.kind {
            Kind::Rationals => Ok(self.wrap(Value::Rational(r))),
            _ => Err(Error::DescriptorMismatch),
        }
    }

    /// `n/d` in `Q`, or its image in `F_p` when `d` is invertible there.
    pub fn frac(&self, n: i64, d: i64) -> Result<Elem> {
        if d == 0 {
            return Err(Error::DivisionByZero);
        }
        self.from_i64(n).checked_div(&self.from_i64(d))
    }

    /// Element from coefficients over the base field, reduced modulo the modulus.
    pub fn from_coeffs(&self, coeffs: &[Elem]) -> Result<Elem> {
        let (base, modulus) = match &self.0.kind {
            Kind::Extension { base, modulus } => (base, modulus),
            _ => {
                return match coeffs {
                    [c] if c.field == *self => Ok(c.clone()),
                    [] => Ok(self.zero()),
                    _ => Err(Error::DescriptorMismatch),
                }
            }
        };
        let mut vals = Vec::with_capacity(coeffs.len());
        for c in coeffs {
            if c.field != *base {
                return Err(Error::DescriptorMismatch);
            }
            vals.push(c.value.clone());
        }
        poly::trim(base, &mut vals);
        Ok(self.wrap(Value::Poly(poly::d_rem_monic(base, &vals, modulus))))
    }

    /// The class of `X` in `base[X]/(m)`.
    pub fn generator(&self) -> Result<Elem> {
        match &self.0.kind {
            Kind::Extension { base, modulus } => {
                let x = vec![base.zero_v(), base.one_v()];
                Ok(self.wrap(Value::Poly(poly::d_rem_monic(base, &x, modulus))))
            }
            _ => Err(Error::UnsupportedTower(format!("{self} has no generator"))),
        }
    }

    /// Embeds an element of a subfield of `self` in the tower.
    pub fn embed(&self, x: &Elem) -> Result<Elem> {
        Ok(self.wrap(self.embed_v(&x.field, &x.value)?))
    }

    /// Coordinates of `x` over the subfield `k`, flattened power basis.
    pub fn coords_over(&self, x: &Elem, k: &Field) -> Result<Vec<Elem>> {
        if x.field != *self {
            return Err(Error::DescriptorMismatch);
        }
        Ok(self
            .coords_over_v(&x.value, k)?
            .into_iter()
            .map(|v| k.wrap(v))
            .collect())
    }

    /// Inverse of [`Field::coords_over`].
    pub fn from_coords_over(&self, coords: &[Elem], k: &Field) -> Result<Elem> {
        if coords.iter().any(|c| c.field != *k) {
            return Err(Error::DescriptorMismatch);
        }
        let vals: Vec<Value> = coords.iter().map(|c| c.value.clone()).collect();
        Ok(self.wrap(self.assemble_over_v(&vals, k)?))
    }

    /// All elements of a finite field, in a fixed order. Intended for small fields.
    pub fn elements(&self) -> Option<Vec<Elem>> {
        let q = self.order()?.to_usize()?;
        let p = self.characteristic();
        let fp = self.prime_field();
        let n = self.degree();
        let mut out = Vec::with_capacity(q);
        for idx in 0..q {
            let mut rest = idx as u64;
            let coords: Vec<Value> = (0..n)
                .map(|_| {
                    let r = rest % p;
                    rest /= p;
                    Value::Residue(r)
                })
                .collect();
            out.push(self.wrap(self.assemble_over_v(&coords, &fp).ok()?));
        }
        Some(out)
    }

    /// Uniformly random element of a finite field; for fields over `Q`,
    /// coordinates are small random rationals.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        let k = self.prime_field();
        let coords: Vec<Value> = (0..self.degree())
            .map(|_| match &k.0.kind {
                Kind::Prime(p) => Value::Residue(rng.gen_range(0..*p)),
                _ => {
                    let n: i64 = rng.gen_range(-9..=9);
                    let d: i64 = rng.gen_range(1..=5);
                    Value::Rational(BigRational::new(n.into(), d.into()))
                }
            })
            .collect();
        self.wrap(
            self.assemble_over_v(&coords, &k)
                .expect("tower coordinates"),
        )
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        loop {
            let x = self.random(rng);
            if !x.is_zero() {
                return x;
            }
        }
    }

    fn fmt_value(&self, v: &Value, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.0.kind, v) {
            (Kind::Rationals, Value::Rational(r)) => write!(f, "{r}"),
            (Kind::Prime(_), Value::Residue(r)) => write!(f, "{r}"),
            (Kind::Extension { base, .. }, Value::Poly(c)) => {
                if c.is_empty() {
                    return write!(f, "0");
                }
                let g = self.generator_name();
                let mut first = true;
                let nested = base.depth() > 0;
                for (i, ci) in c.iter().enumerate().rev() {
                    if base.is_zero_v(ci) {
                        continue;
                    }
                    if !first {
                        write!(f, " + ")?;
                    }
                    first = false;
                    let one = base.is_one_v(ci);
                    if i == 0 || !one {
                        if nested {
                            write!(f, "(")?;
                        }
                        base.fmt_value(ci, f)?;
                        if nested {
                            write!(f, ")")?;
                        }
                    }
                    match i {
                        0 => {}
                        1 if one => write!(f, "{g}")?,
                        1 => write!(f, "*{g}")?,
                        _ if one => write!(f, "{g}^{i}")?,
                        _ => write!(f, "*{g}^{i}")?,
                    }
                }
                Ok(())
            }
            _ => write!(f, "?"),
        }
    }
}

/// An exact element of a [`Field`].
#[derive(Clone)]
pub struct Elem {
    field: Field,
    pub(crate) value: Value,
}

impl PartialEq for Elem {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value && self.field == other.field
    }
}

impl Eq for Elem {}

impl PartialOrd for Elem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Elem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value
            .cmp(&other.value)
            .then_with(|| self.field.cmp(&other.field))
    }
}

impl Hash for Elem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.value.hash(state)
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.field.fmt_value(&self.value, f)
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.field.fmt_value(&self.value, f)
    }
}

impl Elem {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.field.is_zero_v(&self.value)
    }

    pub fn is_one(&self) -> bool {
        self.field.is_one_v(&self.value)
    }

    fn check(&self, other: &Elem) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::DescriptorMismatch)
        }
    }

    pub fn checked_add(&self, other: &Elem) -> Result<Elem> {
        self.check(other)?;
        Ok(self.field.wrap(self.field.add_v(&self.value, &other.value)))
    }

    pub fn checked_sub(&self, other: &Elem) -> Result<Elem> {
        self.check(other)?;
        Ok(self.field.wrap(self.field.sub_v(&self.value, &other.value)))
    }

    pub fn checked_mul(&self, other: &Elem) -> Result<Elem> {
        self.check(other)?;
        Ok(self.field.wrap(self.field.mul_v(&self.value, &other.value)))
    }

    pub fn checked_div(&self, other: &Elem) -> Result<Elem> {
        self.check(other)?;
        self.field
            .div_v(&self.value, &other.value)
            .map(|v| self.field.wrap(v))
            .ok_or(Error::DivisionByZero)
    }

    pub fn inv(&self) -> Result<Elem> {
        self.field
            .inv_v(&self.value)
            .map(|v| self.field.wrap(v))
            .ok_or(Error::DivisionByZero)
    }

    /// Integer power; negative exponents need a nonzero base.
    pub fn pow(&self, e: i64) -> Result<Elem> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        Ok(base.pow_big(&BigUint::from(e.unsigned_abs())))
    }

    pub fn pow_big(&self, e: &BigUint) -> Elem {
        self.field.wrap(self.field.pow_v(&self.value, e))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.value {
            Value::Rational(r) => Some(r),
            _ => None,
        }
    }

    pub fn as_residue(&self) -> Option<u64> {
        match &self.value {
            Value::Residue(r) => Some(*r),
            _ => None,
        }
    }

    /// Sign of a rational element.
    pub fn is_negative(&self) -> bool {
        self.as_rational().is_some_and(|r| r.is_negative())
    }

    /// Coefficients over the base field (length equals the step degree).
    pub fn coefficients(&self) -> Vec<Elem> {
        match (self.field.base(), &self.value) {
            (Some(base), Value::Poly(c)) => {
                let mut out: Vec<Elem> = c.iter().map(|v| base.wrap(v.clone())).collect();
                out.resize(self.field.step_degree(), base.zero());
                out
            }
            _ => vec![self.clone()],
        }
    }

    /// Representative polynomial over the base field, of degree below the step degree.
    pub fn lift(&self) -> Result<Poly> {
        match (self.field.base(), &self.value) {
            (Some(base), Value::Poly(c)) => Ok(Poly::from_values(base, c.clone())),
            _ => Err(Error::UnsupportedTower(format!(
                "{} is not an extension",
                self.field
            ))),
        }
    }
}

macro_rules! impl_ops {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&Elem> for &Elem {
            type Output = Elem;
            fn $method(self, rhs: &Elem) -> Elem {
                self.$checked(rhs)
                    .expect(concat!("Elem::", stringify!($method)))
            }
        }
        impl $tr<Elem> for Elem {
            type Output = Elem;
            fn $method(self, rhs: Elem) -> Elem {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Elem> for Elem {
            type Output = Elem;
            fn $method(self, rhs: &Elem) -> Elem {
                (&self).$method(rhs)
            }
        }
    };
}

impl_ops!(Add, add, checked_add);
impl_ops!(Sub, sub, checked_sub);
impl_ops!(Mul, mul, checked_mul);
impl_ops!(Div, div, checked_div);

impl Neg for &Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        self.field.wrap(self.field.neg_v(&self.value))
    }
}

impl Neg for Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        -&self
    }
}

/// Reduces a rational `n/d` into `F_p`, if `p` does not divide `d`.
pub(crate) fn rational_mod_p(r: &BigRational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let n = r.numer().mod_floor(&pb).to_u64()?;
    let d = r.denom().mod_floor(&pb).to_u64()?;
    if d == 0 {
        return None;
    }
    Some(((n as u128 * inv_mod(d, p) as u128) % p as u128) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f9() -> Field {
        let f3 = Field::prime(3).unwrap();
        let m = Poly::from_i64s(&f3, &[1, 0, 1]);
        Field::extension(&f3, &m).unwrap()
    }

    #[test]
    fn fraction_addition() {
        let q = Field::rationals();
        let s = q.frac(2, 3).unwrap() + q.frac(1, 6).unwrap();
        assert_eq!(s, q.frac(5, 6).unwrap());
    }

    #[test]
    fn f4_generator_squared() {
        let f4 = Field::finite(2, 2).unwrap();
        let a = f4.generator().unwrap();
        assert_eq!(
            f4.modulus().unwrap(),
            Poly::from_i64s(&Field::prime(2).unwrap(), &[1, 1, 1])
        );
        assert_eq!(&a * &a, &a + &f4.one());
    }

    #[test]
    fn f9_inverse_matches_brute_force() {
        let f9 = f9();
        let a = f9.generator().unwrap();
        let brute: Vec<Elem> = f9
            .elements()
            .unwrap()
            .into_iter()
            .filter(|x| (&a * x).is_one())
            .collect();
        assert_eq!(brute.len(), 1);
        assert_eq!(a.inv().unwrap(), brute[0]);
        assert_eq!(brute[0], &a * &f9.from_i64(2));
    }

    #[test]
    fn errors_surface() {
        let q = Field::rationals();
        assert_eq!(q.zero().inv(), Err(Error::DivisionByZero));
        let f5 = Field::prime(5).unwrap();
        assert_eq!(
            q.one().checked_add(&f5.one()),
            Err(Error::DescriptorMismatch)
        );
        assert_eq!(Field::prime(9).unwrap_err(), Error::NotPrime(9));
        let f2 = Field::prime(2).unwrap();
        assert_eq!(
            Field::extension(&f2, &Poly::from_i64s(&f2, &[1, 0, 1])).unwrap_err(),
            Error::Reducible
        );
    }

    #[test]
    fn field_axioms_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let f4 = Field::finite(2, 2).unwrap();
        let tower = {
            let m = Poly::from_elems(&[f4.generator().unwrap(), f4.one(), f4.one()]).unwrap();
            Field::extension(&f4, &m).unwrap()
        };
        for k in [Field::rationals(), Field::prime(7).unwrap(), f9(), tower] {
            for _ in 0..50 {
                let (a, b, c) = (k.random(&mut rng), k.random(&mut rng), k.random(&mut rng));
                assert_eq!((&a + &b) + &c, &a + &(&b + &c));
                assert_eq!((&a * &b) * &c, &a * &(&b * &c));
                assert_eq!(&a * &(&b + &c), &a * &b + &a * &c);
                assert_eq!(&a - &a, k.zero());
                if !a.is_zero() {
                    assert!((&a * &a.inv().unwrap()).is_one());
                }
            }
        }
    }

    #[test]
    fn coords_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f4 = Field::finite(2, 2).unwrap();
        let m = Poly::from_elems(&[f4.generator().unwrap(), f4.one(), f4.one()]).unwrap();
        let f16 = Field::extension(&f4, &m).unwrap();
        let f2 = f16.prime_field();
        assert_eq!(f16.degree_over(&f2).unwrap(), 4);
        for _ in 0..20 {
            let x = f16.random(&mut rng);
            let c = f16.coords_over(&x, &f2).unwrap();
            assert_eq!(c.len(), 4);
            assert_eq!(f16.from_coords_over(&c, &f2).unwrap(), x);
        }
    }
}
