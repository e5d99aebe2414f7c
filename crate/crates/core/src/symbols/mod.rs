//! Formal Milnor symbol expressions and their decidable invariants.

mod class;
mod relations;

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use crate::algebra::{Elem, Field, RationalFunction};
use crate::error::{Error, Result};

pub use class::{canonical_class, canonical_class_real, ClassPayload, KCanonicalClass};
pub use relations::{
    key_relation_instance, lemma23_rewrite, rational_prime_split, rewrite_multilinear_rational,
    Lemma23Variant,
};

/// Something that can sit inside a symbol: a nonzero element of a field.
pub trait SymbolEntry: Clone + Ord + Hash + fmt::Debug + fmt::Display {
    /// The field over which the entry (or its coefficients) lives.
    fn entry_field(&self) -> &Field;
    fn entry_is_zero(&self) -> bool;
}

impl SymbolEntry for Elem {
    fn entry_field(&self) -> &Field {
        self.field()
    }
    fn entry_is_zero(&self) -> bool {
        self.is_zero()
    }
}

impl SymbolEntry for RationalFunction {
    fn entry_field(&self) -> &Field {
        self.field()
    }
    fn entry_is_zero(&self) -> bool {
        self.is_zero()
    }
}

/// Integer combination of weight-`l` symbols `{a_1, ..., a_l}`.
///
/// Identical tuples are merged and zero coefficients dropped, so two
/// expressions compare equal exactly when they are the same formal sum.
/// Weight 0 expressions are integers, stored as the coefficient of the
/// empty tuple.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SymbolExpr<E> {
    field: Field,
    weight: usize,
    terms: BTreeMap<Vec<E>, i64>,
}

/// Symbols with entries in a field `k`.
pub type MilnorExpression = SymbolExpr<Elem>;
/// Symbols with entries in the rational function field `k(X)`.
pub type FunctionFieldSymbol = SymbolExpr<RationalFunction>;

impl<E: SymbolEntry> SymbolExpr<E> {
    pub fn zero(field: &Field, weight: usize) -> Self {
        SymbolExpr {
            field: field.clone(),
            weight,
            terms: BTreeMap::new(),
        }
    }

    /// The weight-0 expression `n`.
    pub fn integer(field: &Field, n: i64) -> Self {
        let mut e = Self::zero(field, 0);
        e.add_term(Vec::new(), n);
        e
    }

    /// The single symbol `{entries}`. The field is taken from the first entry.
    pub fn symbol(entries: &[E]) -> Result<Self> {
        let first = entries
            .first()
            .ok_or_else(|| Error::DegenerateInput("use `integer` for weight 0".into()))?;
        Self::symbol_in(&first.entry_field().clone(), entries)
    }

    /// `{entries}` over an explicit field; an empty list gives the integer 1.
    pub fn symbol_in(field: &Field, entries: &[E]) -> Result<Self> {
        Self::check_entries(field, entries)?;
        let mut e = Self::zero(field, entries.len());
        e.add_term(entries.to_vec(), 1);
        Ok(e)
    }

    /// Sum of `coeff * {entries}` over the given terms.
    pub fn from_terms<I>(field: &Field, weight: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, Vec<E>)>,
    {
        let mut e = Self::zero(field, weight);
        for (c, entries) in terms {
            if entries.len() != weight {
                return Err(Error::WeightMismatch {
                    expected: weight,
                    found: entries.len(),
                });
            }
            Self::check_entries(field, &entries)?;
            e.add_term(entries, c);
        }
        Ok(e)
    }

    fn check_entries(field: &Field, entries: &[E]) -> Result<()> {
        for x in entries {
            if x.entry_field() != field {
                return Err(Error::DescriptorMismatch);
            }
            if x.entry_is_zero() {
                return Err(Error::ZeroEntry);
            }
        }
        Ok(())
    }

    /// Adds `coeff * {entries}` without validating the entries.
    pub(crate) fn add_term(&mut self, entries: Vec<E>, coeff: i64) {
        if coeff == 0 {
            return;
        }
        debug_assert_eq!(entries.len(), self.weight);
        match self.terms.entry(entries) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if *o.get() == 0 {
                    o.remove();
                }
            }
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    /// Terms as `(entries, coefficient)`, in a fixed order.
    pub fn terms(&self) -> impl Iterator<Item = (&[E], i64)> + '_ {
        self.terms.iter().map(|(k, c)| (k.as_slice(), *c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Whether this is the empty formal sum (not the same as the zero class).
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// For weight 0, the integer value.
    pub fn as_integer(&self) -> Option<i64> {
        (self.weight == 0).then(|| self.terms.values().sum())
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::DescriptorMismatch);
        }
        if self.weight != other.weight {
            return Err(Error::WeightMismatch {
                expected: self.weight,
                found: other.weight,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), *c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.scale(-1))
    }

    pub fn scale(&self, n: i64) -> Self {
        let mut out = Self::zero(&self.field, self.weight);
        if n != 0 {
            for (k, c) in &self.terms {
                out.terms.insert(k.clone(), c * n);
            }
        }
        out
    }

    /// Graded product: concatenation of entry tuples, coefficients multiplied.
    pub fn product(&self, other: &Self) -> Result<Self> {
        if self.field != other.field {
            return Err(Error::DescriptorMismatch);
        }
        let mut out = Self::zero(&self.field, self.weight + other.weight);
        for (a, c) in &self.terms {
            for (b, d) in &other.terms {
                let mut key = a.clone();
                key.extend(b.iter().cloned());
                out.add_term(key, c * d);
            }
        }
        Ok(out)
    }

    /// Replaces every entry by a combination of factors and expands
    /// multilinearly. `split(a)` returns `(factor, exponent)` pairs with
    /// `a = prod factor^exponent`; an empty list means `a = 1`, which kills
    /// every term containing it.
    pub fn rewrite_multilinear<F>(&self, mut split: F) -> Result<Self>
    where
        F: FnMut(&E) -> Result<Vec<(E, i64)>>,
    {
        let mut out = Self::zero(&self.field, self.weight);
        for (entries, c) in &self.terms {
            let mut partial: Vec<(Vec<E>, i64)> = vec![(Vec::new(), *c)];
            for x in entries {
                let parts = split(x)?;
                Self::check_entries(
                    &self.field,
                    &parts.iter().map(|p| p.0.clone()).collect::<Vec<_>>(),
                )?;
                let mut next = Vec::with_capacity(partial.len() * parts.len());
                for (prefix, pc) in &partial {
                    for (f, e) in &parts {
                        if *e == 0 {
                            continue;
                        }
                        let mut key = prefix.clone();
                        key.push(f.clone());
                        next.push((key, pc * e));
                    }
                }
                partial = next;
            }
            for (k, pc) in partial {
                out.add_term(k, pc);
            }
        }
        Ok(out)
    }

    /// Applies `f` to every entry, landing in expressions over `target`.
    pub fn map_entries<E2, F>(&self, target: &Field, mut f: F) -> Result<SymbolExpr<E2>>
    where
        E2: SymbolEntry,
        F: FnMut(&E) -> Result<E2>,
    {
        let mut out = SymbolExpr::<E2>::zero(target, self.weight);
        for (entries, c) in &self.terms {
            let mapped: Result<Vec<E2>> = entries.iter().map(&mut f).collect();
            let mapped = mapped?;
            SymbolExpr::<E2>::check_entries(target, &mapped)?;
            out.add_term(mapped, *c);
        }
        Ok(out)
    }

    /// `{entries}` with the entries at positions `i` and `j` swapped, per term,
    /// negated: equal in K-theory by skew-symmetry.
    pub fn swap_slots(&self, i: usize, j: usize) -> Result<Self> {
        if i >= self.weight || j >= self.weight {
            return Err(Error::DegenerateInput("slot index out of range".into()));
        }
        let mut out = Self::zero(&self.field, self.weight);
        for (entries, c) in &self.terms {
            let mut k = entries.clone();
            k.swap(i, j);
            out.add_term(k, if i == j { *c } else { -c });
        }
        Ok(out)
    }
}

impl MilnorExpression {
    /// Pushes every entry into an extension field.
    pub fn base_change(&self, target: &Field) -> Result<MilnorExpression> {
        self.map_entries(target, |x| target.embed(x))
    }
}

impl<E: SymbolEntry> fmt::Display for SymbolExpr<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        if self.weight == 0 {
            return write!(f, "{}", self.as_integer().unwrap_or(0));
        }
        for (i, (entries, c)) in self.terms.iter().enumerate() {
            let c = *c;
            if i > 0 {
                write!(f, "{}", if c < 0 { " - " } else { " + " })?;
            } else if c < 0 {
                write!(f, "-")?;
            }
            if c.abs() != 1 {
                write!(f, "{}", c.abs())?;
            }
            write!(f, "{{")?;
            for (j, e) in entries.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{e}")?;
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}

impl<E: SymbolEntry> fmt::Debug for SymbolExpr<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}; w{}] {}", self.field, self.weight, self)
    }
}

impl<E: SymbolEntry> Add for &SymbolExpr<E> {
    type Output = SymbolExpr<E>;
    fn add(self, rhs: Self) -> SymbolExpr<E> {
        self.checked_add(rhs).expect("SymbolExpr::add")
    }
}

impl<E: SymbolEntry> Sub for &SymbolExpr<E> {
    type Output = SymbolExpr<E>;
    fn sub(self, rhs: Self) -> SymbolExpr<E> {
        self.checked_sub(rhs).expect("SymbolExpr::sub")
    }
}

impl<E: SymbolEntry> Neg for &SymbolExpr<E> {
    type Output = SymbolExpr<E>;
    fn neg(self) -> SymbolExpr<E> {
        self.scale(-1)
    }
}

impl<E: SymbolEntry> Mul<i64> for &SymbolExpr<E> {
    type Output = SymbolExpr<E>;
    fn mul(self, n: i64) -> SymbolExpr<E> {
        self.scale(n)
    }
}
