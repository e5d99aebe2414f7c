//! Norm (transfer) maps `N_{k_v/k}` on Milnor expressions.
//!
//! An expression over `k_v = k[X]/(π)` is first rewritten as a combination
//! of symbols `{a_1, ..., a_{l-r}, f_1(α), ..., f_r(α)}` with constants
//! `a_i ∈ k` and monic irreducible `f_i` of strictly increasing degree below
//! `deg π`. Constant symbols transfer to `deg π` times themselves. For the
//! others, reciprocity applied to `y = {a, f_1, ..., f_r, π}` over `k(X)`
//! expresses `N_{k_v/k}` through transfers from the strictly smaller residue
//! fields `k[X]/(f_i)` and the residue at infinity.

use crate::algebra::{factor, present_as_simple, Elem, Field, Poly, RationalFunction};
use crate::error::{Error, Result};
use crate::symbols::{canonical_class, FunctionFieldSymbol, MilnorExpression};
use crate::valuations::{tame_symbol, Place, Valuation};

/// `coefficient * {constants, poly_entries(α)}` at a finite place.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueSymbolForm {
    pub valuation: Valuation,
    pub coefficient: i64,
    /// Entries in `k^×`.
    pub constants: Vec<Elem>,
    /// Monic irreducible over `k`, degrees strictly increasing and below `deg π`.
    pub poly_entries: Vec<Poly>,
}

impl ResidueSymbolForm {
    /// Number of polynomial entries.
    pub fn r(&self) -> usize {
        self.poly_entries.len()
    }

    /// The form as an expression over the residue field.
    pub fn to_expression(&self) -> Result<MilnorExpression> {
        let kv = self.valuation.residue_field();
        let mut entries = Vec::with_capacity(self.constants.len() + self.poly_entries.len());
        for c in &self.constants {
            entries.push(kv.embed(c)?);
        }
        for f in &self.poly_entries {
            entries.push(self.valuation.reduce_poly(f)?);
        }
        Ok(MilnorExpression::symbol_in(kv, &entries)?.scale(self.coefficient))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Atom {
    Const(Elem),
    Irr(Poly),
}

impl Atom {
    fn degree(&self) -> usize {
        match self {
            Atom::Const(_) => 0,
            Atom::Irr(p) => p.degree().unwrap_or(0),
        }
    }
}

/// `g = unit * prod p^e` as weighted atoms.
fn atoms_of(g: &Poly) -> Result<Vec<(Atom, i64)>> {
    let fac = factor(g)?;
    let mut out = Vec::with_capacity(fac.factors.len() + 1);
    if !fac.unit.is_one() {
        out.push((Atom::Const(fac.unit.clone()), 1));
    }
    for (p, e) in fac.factors {
        out.push((Atom::Irr(p), e as i64));
    }
    Ok(out)
}

/// Expands the atom combination `parts` into slot `pos` of `term`.
fn substitute(
    coeff: i64,
    term: &[Atom],
    pos: usize,
    parts: &[(Atom, i64)],
    queue: &mut Vec<(i64, Vec<Atom>)>,
) {
    for (atom, e) in parts {
        let mut t = term.to_vec();
        t[pos] = atom.clone();
        queue.push((coeff * e, t));
    }
}

/// Moves constants to the front and sorts polynomial entries by degree,
/// tracking the skew-symmetry sign.
fn normalize(term: &mut [Atom]) -> i64 {
    let mut sign = 1;
    let n = term.len();
    // insertion sort by (is_poly, degree, poly); equal keys never swap
    for i in 1..n {
        let mut j = i;
        while j > 0 && key(&term[j - 1]) > key(&term[j]) {
            term.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    sign
}

fn key(a: &Atom) -> (u8, usize, Option<&Poly>) {
    match a {
        Atom::Const(_) => (0, 0, None),
        Atom::Irr(p) => (1, a.degree(), Some(p)),
    }
}

/// Rewrites an expression over `k_v` as a combination of generator forms.
pub fn rewrite_to_generators(
    v: &Valuation,
    x: &MilnorExpression,
) -> Result<Vec<ResidueSymbolForm>> {
    if v.uniformizer().is_none() {
        return Err(Error::UnsupportedPlace(format!(
            "{v} is not a finite place"
        )));
    }
    if x.field() != v.residue_field() {
        return Err(Error::DescriptorMismatch);
    }
    let k = v.base_field().clone();
    let simple_residue = v.degree() == 1;
    let mut queue: Vec<(i64, Vec<Atom>)> = Vec::new();
    for (entries, c) in x.terms() {
        let mut partial: Vec<(i64, Vec<Atom>)> = vec![(c, Vec::new())];
        for e in entries {
            let lifted = if simple_residue {
                Poly::constant(e)
            } else {
                e.lift()?
            };
            if lifted.is_zero() {
                return Err(Error::ZeroEntry);
            }
            let parts = atoms_of(&lifted)?;
            let mut next = Vec::with_capacity(partial.len() * parts.len().max(1));
            for (pc, prefix) in &partial {
                for (a, m) in &parts {
                    let mut t = prefix.clone();
                    t.push(a.clone());
                    next.push((pc * m, t));
                }
            }
            partial = next;
        }
        queue.extend(partial);
    }

    let minus_one = -k.one();
    let mut forms: Vec<ResidueSymbolForm> = Vec::new();
    while let Some((coeff, mut term)) = queue.pop() {
        if coeff == 0
            || term
                .iter()
                .any(|a| matches!(a, Atom::Const(c) if c.is_one()))
        {
            continue;
        }
        let coeff = coeff * normalize(&mut term);
        let clash = (1..term.len()).find(|&i| {
            matches!((&term[i - 1], &term[i]), (Atom::Irr(f), Atom::Irr(g)) if f.degree() == g.degree())
        });
        match clash {
            None => {
                let split = term
                    .iter()
                    .position(|a| matches!(a, Atom::Irr(_)))
                    .unwrap_or(term.len());
                let constants = term[..split]
                    .iter()
                    .map(|a| match a {
                        Atom::Const(c) => c.clone(),
                        Atom::Irr(_) => unreachable!(),
                    })
                    .collect();
                let poly_entries = term[split..]
                    .iter()
                    .map(|a| match a {
                        Atom::Irr(p) => p.clone(),
                        Atom::Const(_) => unreachable!(),
                    })
                    .collect();
                forms.push(ResidueSymbolForm {
                    valuation: v.clone(),
                    coefficient: coeff,
                    constants,
                    poly_entries,
                });
            }
            Some(i) => {
                let (Atom::Irr(f), Atom::Irr(g)) = (term[i - 1].clone(), term[i].clone()) else {
                    unreachable!()
                };
                let mut with_minus = term.clone();
                with_minus[i - 1] = Atom::Const(minus_one.clone());
                if f == g {
                    // {f, f} = {-1, f}
                    queue.push((coeff, with_minus));
                    continue;
                }
                // {f, g} = {h, g} - {h, f} + {-1, f} with h = f - g
                let h = &f - &g;
                let parts = atoms_of(&h)?;
                substitute(coeff, &term, i - 1, &parts, &mut queue);
                let mut hf = term.clone();
                hf[i] = Atom::Irr(f.clone());
                substitute(-coeff, &hf, i - 1, &parts, &mut queue);
                with_minus[i] = Atom::Irr(f);
                queue.push((coeff, with_minus));
            }
        }
    }
    Ok(forms)
}

/// `N_{k_v/k}` for a place of `k(X)`; the identity at `v_∞` and at places of degree one.
pub fn transfer_milnor(v: &Valuation, x: &MilnorExpression) -> Result<MilnorExpression> {
    if x.field() != v.residue_field() {
        return Err(Error::DescriptorMismatch);
    }
    match v.place() {
        Place::Infinite => return Ok(x.clone()),
        Place::Finite(_) => {}
        _ => {
            return Err(Error::UnsupportedPlace(format!(
                "{v} is not a place of k(X)"
            )))
        }
    }
    let k = v.base_field();
    let d = v.degree();
    if d == 1 {
        return Ok(x.clone());
    }
    if x.weight() == 0 {
        return Ok(MilnorExpression::integer(
            k,
            x.as_integer().unwrap_or(0) * d as i64,
        ));
    }
    let mut out = MilnorExpression::zero(k, x.weight());
    for form in rewrite_to_generators(v, x)? {
        out = out.checked_add(&transfer_form(&form)?)?;
    }
    Ok(out)
}

fn transfer_form(form: &ResidueSymbolForm) -> Result<MilnorExpression> {
    let v = &form.valuation;
    let k = v.base_field();
    let d = v.degree();
    if form.poly_entries.is_empty() {
        return Ok(
            MilnorExpression::symbol_in(k, &form.constants)?.scale(form.coefficient * d as i64)
        );
    }
    let pi = v.uniformizer().expect("finite place");
    let mut entries: Vec<RationalFunction> = form
        .constants
        .iter()
        .map(RationalFunction::constant)
        .collect();
    entries.extend(form.poly_entries.iter().map(RationalFunction::from_poly));
    entries.push(RationalFunction::from_poly(pi));
    let y = FunctionFieldSymbol::symbol_in(k, &entries)?;

    let mut rest = tame_symbol(&Valuation::infinite(k), &y)?;
    for f in &form.poly_entries {
        if f.degree() >= pi.degree() {
            return Err(Error::RecursionInvariantViolated(format!(
                "deg {f} is not below deg {pi}"
            )));
        }
        let w = Valuation::finite_unchecked(f);
        let local = tame_symbol(&w, &y)?;
        rest = rest.checked_add(&transfer_milnor(&w, &local)?)?;
    }
    Ok(rest.scale(-form.coefficient))
}

/// The place of `B(X)` whose residue field is the simple extension `L = B[X]/(m)`.
fn step_place(l: &Field) -> Result<Valuation> {
    let m = l
        .modulus()
        .ok_or_else(|| Error::UnsupportedTower(format!("{l} is not an extension")))?;
    Ok(Valuation::finite_unchecked(&m))
}

/// Moves an expression over `L = B[X]/(m)` into the residue field of its place.
fn to_residue(v: &Valuation, l: &Field, x: &MilnorExpression) -> Result<MilnorExpression> {
    let kv = v.residue_field();
    if kv == l {
        return Ok(x.clone());
    }
    let base = l.base().expect("extension").clone();
    x.map_entries(kv, |e| Ok(l.coords_over(e, &base)?.remove(0)))
}

fn transfer_step(l: &Field, x: &MilnorExpression) -> Result<MilnorExpression> {
    let v = step_place(l)?;
    transfer_milnor(&v, &to_residue(&v, l, x)?)
}

/// Composite of the one-step transfers down a tower.
pub fn transfer_stepwise(l: &Field, k: &Field, x: &MilnorExpression) -> Result<MilnorExpression> {
    if x.field() != l {
        return Err(Error::DescriptorMismatch);
    }
    let mut current = x.clone();
    let mut f = l.clone();
    while f != *k {
        current = transfer_step(&f, &current)?;
        f = f
            .base()
            .ok_or_else(|| Error::UnsupportedTower(format!("{l} is not a tower over {k}")))?
            .clone();
    }
    Ok(current)
}

/// `N_{L/k}` for a tower `L ⊇ k`. Finite towers are collapsed to a simple
/// extension first; towers over `Q` may have height at most one.
pub fn transfer_tower(l: &Field, k: &Field, x: &MilnorExpression) -> Result<MilnorExpression> {
    if x.field() != l {
        return Err(Error::DescriptorMismatch);
    }
    let h = l.height_over(k)?;
    match h {
        0 => Ok(x.clone()),
        1 => transfer_step(l, x),
        _ if !k.is_finite() => Err(Error::UnsupportedTower(format!(
            "{l} has height {h} over {k}; transfers over Q need height at most one"
        ))),
        _ => {
            let pres = present_as_simple(l, k)?;
            let simple = pres.simple_field().clone();
            let moved = x.map_entries(&simple, |e| pres.to_simple_elem(e))?;
            transfer_step(&simple, &moved)
        }
    }
}

/// Entry-wise inclusion `K^M(k) → K^M(L)`.
pub fn base_change(x: &MilnorExpression, l: &Field) -> Result<MilnorExpression> {
    if !l.is_over(x.field()) {
        return Err(Error::UnsupportedTower(format!(
            "{l} does not contain {}",
            x.field()
        )));
    }
    x.base_change(l)
}

/// Whether `N_{L/k}(i(x))` and `[L:k] x` have the same canonical class.
pub fn restriction_corestriction_holds(x: &MilnorExpression, l: &Field) -> Result<bool> {
    let k = x.field();
    let d = l.degree_over(k)? as i64;
    let lhs = transfer_tower(l, k, &base_change(x, l)?)?;
    Ok(canonical_class(&lhs)? == canonical_class(&x.scale(d))?)
}

/// Whether `N(i(z) · w)` and `z · N(w)` have the same canonical class, for
/// `z` over `k` and `w` over `L`.
pub fn projection_formula_holds(z: &MilnorExpression, w: &MilnorExpression) -> Result<bool> {
    let (k, l) = (z.field(), w.field());
    let lhs = transfer_tower(l, k, &base_change(z, l)?.product(w)?)?;
    let rhs = z.product(&transfer_tower(l, k, w)?)?;
    Ok(canonical_class(&lhs)? == canonical_class(&rhs)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::norm_element;

    fn f9() -> (Field, Valuation) {
        let f3 = Field::prime(3).unwrap();
        let v = Valuation::finite(&Poly::from_i64s(&f3, &[1, 0, 1])).unwrap();
        (v.residue_field().clone(), v)
    }

    #[test]
    fn norm_of_alpha_plus_one() {
        let (k9, v) = f9();
        let x = &k9.generator().unwrap() + &k9.one();
        let n = transfer_milnor(
            &v,
            &MilnorExpression::symbol(std::slice::from_ref(&x)).unwrap(),
        )
        .unwrap();
        let class = canonical_class(&n).unwrap();
        let expected = norm_element(&x, v.base_field()).unwrap();
        assert_eq!(expected, v.base_field().from_i64(2));
        assert_eq!(
            class,
            canonical_class(&MilnorExpression::symbol(&[expected]).unwrap()).unwrap()
        );
    }

    #[test]
    fn generator_forms_have_increasing_degrees() {
        let f2 = Field::prime(2).unwrap();
        let v = Valuation::finite(&Poly::from_i64s(&f2, &[1, 1, 0, 1])).unwrap();
        let kv = v.residue_field().clone();
        let a = kv.generator().unwrap();
        let x = MilnorExpression::symbol(&[&a + &kv.one(), a.clone()]).unwrap();
        let forms = rewrite_to_generators(&v, &x).unwrap();
        for f in &forms {
            let degs: Vec<usize> = f.poly_entries.iter().map(|p| p.degree().unwrap()).collect();
            assert!(degs.windows(2).all(|w| w[0] < w[1]));
            assert!(degs.iter().all(|&d| d < 3));
        }
        assert!(canonical_class(&transfer_milnor(&v, &x).unwrap())
            .unwrap()
            .is_zero());
    }

    #[test]
    fn rewriting_preserves_the_k1_class() {
        let (k9, v) = f9();
        for x in k9.elements().unwrap().into_iter().filter(|x| !x.is_zero()) {
            let e = MilnorExpression::symbol(std::slice::from_ref(&x)).unwrap();
            let mut total = MilnorExpression::zero(&k9, 1);
            for f in rewrite_to_generators(&v, &e).unwrap() {
                total = &total + &f.to_expression().unwrap();
            }
            assert_eq!(
                canonical_class(&total).unwrap(),
                canonical_class(&e).unwrap()
            );
        }
    }

    #[test]
    fn weight_two_vanishes_over_f9() {
        let (k9, v) = f9();
        let a = k9.generator().unwrap();
        let x = MilnorExpression::symbol(&[a.clone(), &a + &k9.one()]).unwrap();
        assert!(canonical_class(&transfer_milnor(&v, &x).unwrap())
            .unwrap()
            .is_zero());
    }

    #[test]
    fn base_change_examples() {
        let f3 = Field::prime(3).unwrap();
        let k9 = Field::finite(3, 2).unwrap();
        let x = MilnorExpression::symbol(&[-f3.one()]).unwrap();
        let n = transfer_tower(&k9, &f3, &base_change(&x, &k9).unwrap()).unwrap();
        assert!(canonical_class(&n).unwrap().is_zero());
        let f5 = Field::prime(5).unwrap();
        let k25 = Field::finite(5, 2).unwrap();
        let x = MilnorExpression::symbol(&[f5.from_i64(2)]).unwrap();
        let n = transfer_tower(&k25, &f5, &base_change(&x, &k25).unwrap()).unwrap();
        assert_eq!(
            canonical_class(&n).unwrap(),
            canonical_class(&MilnorExpression::symbol(&[f5.from_i64(4)]).unwrap()).unwrap()
        );
        let q = Field::rationals();
        let x = MilnorExpression::symbol(&[q.from_i64(2), q.from_i64(3)]).unwrap();
        assert_eq!(base_change(&x, &q).unwrap(), x);
    }

    #[test]
    fn collapsed_and_stepwise_agree_on_f16() {
        let f4 = Field::finite(2, 2).unwrap();
        let f2 = f4.prime_field();
        let m = Poly::new(&f4, &[f4.generator().unwrap(), f4.one(), f4.one()]).unwrap();
        let l = Field::extension(&f4, &m).unwrap();
        for x in l.elements().unwrap().into_iter().filter(|x| !x.is_zero()) {
            let e = MilnorExpression::symbol(std::slice::from_ref(&x)).unwrap();
            let direct = canonical_class(&transfer_tower(&l, &f2, &e).unwrap()).unwrap();
            let steps = canonical_class(&transfer_stepwise(&l, &f2, &e).unwrap()).unwrap();
            let norm = norm_element(&x, &f2).unwrap();
            assert_eq!(direct, steps);
            assert_eq!(
                direct,
                canonical_class(&MilnorExpression::symbol(&[norm]).unwrap()).unwrap()
            );
        }
    }
}
