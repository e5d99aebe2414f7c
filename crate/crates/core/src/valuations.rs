//! Discrete valuations of `k(X)` and of `Q`, residue (tame) symbols, and the
//! reciprocity check over `k(X)`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use crate::algebra::field::rational_mod_p;
use crate::algebra::{factor, is_irreducible, Elem, Field, Poly, RationalFunction};
use crate::error::{Error, Result};
use crate::symbols::{
    canonical_class, FunctionFieldSymbol, KCanonicalClass, MilnorExpression, SymbolEntry,
    SymbolExpr,
};
use crate::transfer::transfer_milnor;

/// Where a valuation is centered.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    /// The zero locus of a monic irreducible polynomial in `k[X]`.
    Finite(Poly),
    /// `v(f) = -deg f`, uniformizer `1/X`.
    Infinite,
    /// The `p`-adic valuation of `Q`.
    RationalPrime(u64),
    /// The archimedean place of `Q`; it has no discrete valuation and only
    /// serves as a label for sign and Hilbert-symbol computations.
    Real,
}

/// A place together with its base field and residue field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Valuation {
    place: Place,
    base: Field,
    residue: Field,
}

impl Valuation {
    /// The place of `k(X)` at a monic irreducible `π`.
    pub fn finite(pi: &Poly) -> Result<Valuation> {
        if !pi.is_monic() || pi.degree().unwrap_or(0) == 0 {
            return Err(Error::NotMonic);
        }
        if !is_irreducible(pi)? {
            return Err(Error::Reducible);
        }
        Ok(Valuation::finite_unchecked(pi))
    }

    /// Residue field `k` when `deg π = 1`, otherwise `k[X]/(π)`.
    pub(crate) fn finite_unchecked(pi: &Poly) -> Valuation {
        let k = pi.field().clone();
        let residue = if pi.degree() == Some(1) {
            k.clone()
        } else {
            Field::extension_unchecked(&k, pi.values().to_vec())
        };
        Valuation {
            place: Place::Finite(pi.clone()),
            base: k,
            residue,
        }
    }

    pub fn infinite(k: &Field) -> Valuation {
        Valuation {
            place: Place::Infinite,
            base: k.clone(),
            residue: k.clone(),
        }
    }

    pub fn rational_prime(p: u64) -> Result<Valuation> {
        Ok(Valuation {
            place: Place::RationalPrime(p),
            base: Field::rationals(),
            residue: Field::prime(p)?,
        })
    }

    pub fn real() -> Valuation {
        let q = Field::rationals();
        Valuation {
            place: Place::Real,
            base: q.clone(),
            residue: q,
        }
    }

    pub fn place(&self) -> &Place {
        &self.place
    }

    /// `k` for places of `k(X)`, `Q` for places of `Q`.
    pub fn base_field(&self) -> &Field {
        &self.base
    }

    pub fn residue_field(&self) -> &Field {
        &self.residue
    }

    /// `[k_v : k]`.
    pub fn degree(&self) -> usize {
        match &self.place {
            Place::Finite(pi) => pi.degree().unwrap_or(0),
            _ => 1,
        }
    }

    pub fn uniformizer(&self) -> Option<&Poly> {
        match &self.place {
            Place::Finite(pi) => Some(pi),
            _ => None,
        }
    }

    /// Image of a polynomial of `k[X]` in the residue field of a finite place.
    pub(crate) fn reduce_poly(&self, f: &Poly) -> Result<Elem> {
        match &self.place {
            Place::Finite(pi) if pi.degree() == Some(1) => f.eval(&-&pi.coeff(0)),
            Place::Finite(_) => f.reduce_into(&self.residue),
            _ => Err(Error::UnsupportedPlace(format!(
                "{self} is not a finite place"
            ))),
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.place
            .cmp(&other.place)
            .then_with(|| self.base.cmp(&other.base))
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.place {
            Place::Finite(pi) => write!(f, "v_{{{pi}}}"),
            Place::Infinite => write!(f, "v_inf"),
            Place::RationalPrime(p) => write!(f, "v_{p}"),
            Place::Real => write!(f, "v_R"),
        }
    }
}

impl fmt::Debug for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Entries that admit a local decomposition `x = π^n u` at a valuation.
pub trait LocalEntry: SymbolEntry {
    /// `(n, u)` with `x = π_v^n u` and `v(u) = 0`.
    fn unit_part(v: &Valuation, x: &Self) -> Result<(i64, Self)>;
    /// Image in the residue field of a unit at `v`.
    fn residue(v: &Valuation, u: &Self) -> Result<Elem>;
}

fn strip_factor(f: &Poly, pi: &Poly) -> (i64, Poly) {
    let mut n = 0;
    let mut f = f.clone();
    loop {
        let (q, r) = f.divrem(pi).expect("nonzero uniformizer");
        if !r.is_zero() {
            return (n, f);
        }
        f = q;
        n += 1;
    }
}

impl LocalEntry for RationalFunction {
    fn unit_part(v: &Valuation, x: &Self) -> Result<(i64, Self)> {
        if x.is_zero() {
            return Err(Error::ZeroInput);
        }
        if x.field() != &v.base {
            return Err(Error::DescriptorMismatch);
        }
        match &v.place {
            Place::Finite(pi) => {
                let (a, num) = strip_factor(x.numerator(), pi);
                let (b, den) = strip_factor(x.denominator(), pi);
                Ok((a - b, RationalFunction::new(&num, &den)?))
            }
            Place::Infinite => {
                let dn = x.numerator().degree().unwrap() as i64;
                let dd = x.denominator().degree().unwrap() as i64;
                let n = dd - dn;
                let xn = Poly::x(&v.base).pow(n.unsigned_abs() as u32);
                let u = if n >= 0 {
                    RationalFunction::new(&(x.numerator() * &xn), x.denominator())?
                } else {
                    RationalFunction::new(x.numerator(), &(x.denominator() * &xn))?
                };
                Ok((n, u))
            }
            _ => Err(Error::UnsupportedPlace(format!(
                "{v} is not a place of k(X)"
            ))),
        }
    }

    fn residue(v: &Valuation, u: &Self) -> Result<Elem> {
        match &v.place {
            Place::Finite(_) => {
                let d = v.reduce_poly(u.denominator())?;
                if d.is_zero() {
                    return Err(Error::DegenerateInput(format!("{u} is not a unit at {v}")));
                }
                v.reduce_poly(u.numerator())?.checked_div(&d)
            }
            Place::Infinite => {
                if u.numerator().degree() != u.denominator().degree() {
                    return Err(Error::DegenerateInput(format!("{u} is not a unit at {v}")));
                }
                u.numerator()
                    .leading()
                    .checked_div(&u.denominator().leading())
            }
            _ => Err(Error::UnsupportedPlace(format!(
                "{v} is not a place of k(X)"
            ))),
        }
    }
}

fn p_adic_order(n: &BigInt, p: &BigInt) -> (i64, BigInt) {
    let mut k = 0;
    let mut n = n.clone();
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return (k, n);
        }
        n = q;
        k += 1;
    }
}

impl LocalEntry for Elem {
    fn unit_part(v: &Valuation, x: &Self) -> Result<(i64, Self)> {
        if x.is_zero() {
            return Err(Error::ZeroInput);
        }
        let Place::RationalPrime(p) = v.place else {
            return Err(Error::UnsupportedPlace(format!("{v} is not a prime of Q")));
        };
        let r = x
            .as_rational()
            .ok_or_else(|| Error::UnsupportedPlace(format!("{} is not Q", x.field())))?;
        let pb = BigInt::from(p);
        let (a, num) = p_adic_order(r.numer(), &pb);
        let (b, den) = p_adic_order(r.denom(), &pb);
        Ok((a - b, x.field().rational(BigRational::new(num, den))?))
    }

    fn residue(v: &Valuation, u: &Self) -> Result<Elem> {
        let Place::RationalPrime(p) = v.place else {
            return Err(Error::UnsupportedPlace(format!("{v} is not a prime of Q")));
        };
        let r = u
            .as_rational()
            .ok_or_else(|| Error::UnsupportedPlace(format!("{} is not Q", u.field())))?;
        match rational_mod_p(r, p) {
            Some(res) if res != 0 => Ok(v.residue.from_i64(res as i64)),
            _ => Err(Error::DegenerateInput(format!("{u} is not a unit at {v}"))),
        }
    }
}

/// Order of vanishing of a nonzero entry at `v`.
pub fn valuate<E: LocalEntry>(v: &Valuation, x: &E) -> Result<i64> {
    Ok(E::unit_part(v, x)?.0)
}

/// `x = π_v^n u` with `u` a unit at `v`.
pub fn unit_part<E: LocalEntry>(v: &Valuation, x: &E) -> Result<(i64, E)> {
    E::unit_part(v, x)
}

/// The residue map `∂_v` from weight `l + 1` to weight `l` over the residue field.
///
/// Each entry is split as `π^n u`; the symbol is expanded multilinearly over
/// the choice of `π` or `u` in every slot. Terms without `π` vanish. In a
/// term with several `π`, the leftmost one is kept and the others become
/// `-1` (from `{π, π} = {π, -1}`). The remaining `π` moves to the last slot
/// at the cost of one sign per transposition, after which
/// `∂_v{u_1, ..., u_l, π} = {ū_1, ..., ū_l}` applies.
pub fn tame_symbol<E: LocalEntry>(v: &Valuation, w: &SymbolExpr<E>) -> Result<MilnorExpression> {
    let weight = w.weight();
    if weight == 0 {
        return Err(Error::WeightMismatch {
            expected: 1,
            found: 0,
        });
    }
    let kv = v.residue_field();
    let minus_one = -kv.one();
    let mut out = MilnorExpression::zero(kv, weight - 1);
    for (entries, c) in w.terms() {
        let mut orders = Vec::with_capacity(weight);
        let mut residues = Vec::with_capacity(weight);
        for x in entries {
            let (n, u) = E::unit_part(v, x)?;
            orders.push(n);
            residues.push(E::residue(v, &u)?);
        }
        let active: Vec<usize> = (0..weight).filter(|&j| orders[j] != 0).collect();
        for mask in 1u32..(1u32 << active.len()) {
            let chosen: Vec<usize> = active
                .iter()
                .enumerate()
                .filter(|(b, _)| mask & (1 << b) != 0)
                .map(|(_, &j)| j)
                .collect();
            let jmin = chosen[0];
            let mut coeff = c;
            for &j in &chosen {
                coeff *= orders[j];
            }
            if (weight - 1 - jmin) % 2 == 1 {
                coeff = -coeff;
            }
            let reduced: Vec<Elem> = (0..weight)
                .filter(|&j| j != jmin)
                .map(|j| {
                    if chosen.contains(&j) {
                        minus_one.clone()
                    } else {
                        residues[j].clone()
                    }
                })
                .collect();
            out.add_term(reduced, coeff);
        }
    }
    Ok(out)
}

/// Places where `∂_v w` can be nonzero: the irreducible factors of every
/// numerator and denominator, then `v_∞`.
pub fn support(w: &FunctionFieldSymbol) -> Result<Vec<Valuation>> {
    let mut polys = BTreeSet::new();
    for (entries, _) in w.terms() {
        for f in entries {
            for p in [f.numerator(), f.denominator()] {
                if p.is_constant() {
                    continue;
                }
                for (g, _) in factor(p)?.factors {
                    polys.insert(g);
                }
            }
        }
    }
    let mut out: Vec<Valuation> = polys.iter().map(Valuation::finite_unchecked).collect();
    out.push(Valuation::infinite(w.field()));
    Ok(out)
}

/// One place's share of the reciprocity sum.
#[derive(Clone, Debug)]
pub struct PlaceContribution {
    pub valuation: Valuation,
    /// `∂_v w` over the residue field.
    pub residue: MilnorExpression,
    /// `N_{k_v/k}(∂_v w)` over `k`.
    pub transferred: MilnorExpression,
}

#[derive(Clone, Debug)]
pub struct ReciprocityReport {
    pub places: Vec<PlaceContribution>,
    pub sum: MilnorExpression,
    pub class: KCanonicalClass,
}

impl ReciprocityReport {
    pub fn holds(&self) -> bool {
        self.class.is_zero()
    }
}

/// Computes `Σ_v N_{k_v/k}(∂_v w)` over the support of `w` and its class in `K^M(k)`.
pub fn reciprocity_check(w: &FunctionFieldSymbol) -> Result<ReciprocityReport> {
    if w.weight() == 0 {
        return Err(Error::WeightMismatch {
            expected: 1,
            found: 0,
        });
    }
    let k = w.field();
    let mut sum = MilnorExpression::zero(k, w.weight() - 1);
    let mut places = Vec::new();
    for v in support(w)? {
        let residue = tame_symbol(&v, w)?;
        let transferred = transfer_milnor(&v, &residue)?;
        sum = sum.checked_add(&transferred)?;
        places.push(PlaceContribution {
            valuation: v,
            residue,
            transferred,
        });
    }
    let class = canonical_class(&sum)?;
    Ok(ReciprocityReport { places, sum, class })
}

/// Integer part of `Σ_v deg(v) v(f)` sanity helper: zero for every nonzero `f`.
pub fn degree_sum(f: &RationalFunction) -> Result<i64> {
    let w = FunctionFieldSymbol::symbol(std::slice::from_ref(f))?;
    let mut total = 0;
    for v in support(&w)? {
        total += v.degree() as i64 * valuate(&v, f)?;
    }
    Ok(total)
}
