//! The map from commuting tuples to Milnor K-theory, and randomized checks
//! of the Goodwillie relations through it.

use rand::Rng;

use super::random::{random_commuting_tuple, random_invertible, random_nonzero_entry};
use super::{composition_series, GwElement, MatrixTuple};
use crate::algebra::{Field, Matrix};
use crate::error::Result;
use crate::symbols::{canonical_class, KCanonicalClass, MilnorExpression};
use crate::transfer::transfer_tower;

/// `Σ_j m_j N_{L_j/k} {α_1j, ..., α_lj}` over the composition factors.
pub fn phi_expression(x: &MatrixTuple) -> Result<MilnorExpression> {
    let k = x.field();
    let l = x.weight();
    if l == 0 {
        return Ok(MilnorExpression::integer(k, x.size() as i64));
    }
    let mut out = MilnorExpression::zero(k, l);
    for f in composition_series(x)? {
        let symbol = MilnorExpression::symbol_in(&f.extension, &f.scalars)?;
        let down = transfer_tower(&f.extension, k, &symbol)?;
        out = out.checked_add(&down.scale(f.multiplicity as i64))?;
    }
    Ok(out)
}

pub fn phi(x: &MatrixTuple) -> Result<KCanonicalClass> {
    canonical_class(&phi_expression(x)?)
}

/// `φ` extended linearly to formal combinations of weight `l`.
pub fn phi_element(k: &Field, l: usize, x: &GwElement) -> Result<KCanonicalClass> {
    let mut acc = MilnorExpression::zero(k, l);
    for (c, t) in x.terms() {
        acc = acc.checked_add(&phi_expression(t)?.scale(*c))?;
    }
    canonical_class(&acc)
}

/// Outcome of a batch of randomized relation checks.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RelationsReport {
    pub checked: usize,
    pub violations: Vec<String>,
}

impl RelationsReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn record(&mut self, name: &str, ok: bool) {
        self.checked += 1;
        if !ok {
            self.violations.push(name.to_string());
        }
    }

    pub fn merge(&mut self, other: RelationsReport) {
        self.checked += other.checked;
        self.violations.extend(other.violations);
    }
}

/// A random invertible element of the algebra generated by `x`, which
/// therefore commutes with every slot.
pub fn random_commutant<R: Rng + ?Sized>(x: &MatrixTuple, rng: &mut R) -> Result<Matrix> {
    let k = x.field();
    loop {
        let mut m = Matrix::scalar(k, x.size(), &random_nonzero_entry(k, rng));
        for a in x.matrices().iter().take(2) {
            m = m.checked_add(&a.scale(&random_nonzero_entry(k, rng)))?;
        }
        if m.is_invertible() {
            return Ok(m);
        }
    }
}

/// Checks, through canonical classes of `φ`, that `x` respects similarity,
/// block sums, slotwise multiplicativity, skew-symmetry, and vanishing
/// with an identity slot. Every joint determinant factors through these
/// classes, so a clean report covers all of them.
pub fn gw_relations_check<R: Rng + ?Sized>(
    x: &MatrixTuple,
    rng: &mut R,
) -> Result<RelationsReport> {
    let k = x.field();
    let (n, l) = (x.size(), x.weight());
    let base = phi(x)?;
    let mut report = RelationsReport::default();

    let s = random_invertible(k, n, rng);
    report.record("conjugation", phi(&x.conjugate(&s)?)? == base);

    let y = random_commuting_tuple(k, n, l, rng)?;
    let sum = base.combine(&phi(&y)?)?;
    report.record("direct sum", phi(&x.direct_sum(&y)?)? == sum);

    if l == 0 {
        return Ok(report);
    }
    let b = random_commutant(x, rng)?;
    let prod = x.with_slot(0, x.matrix(0).checked_mul(&b)?)?;
    let split = base.combine(&phi(&x.with_slot(0, b)?)?)?;
    report.record("slot multiplicativity", phi(&prod)? == split);

    let id = Matrix::identity(k, n);
    let slot = rng.gen_range(0..l);
    report.record("identity slot", phi(&x.with_slot(slot, id)?)?.is_zero());

    if l >= 2 {
        let i = rng.gen_range(0..l);
        let j = (i + rng.gen_range(1..l)) % l;
        report.record(
            "skew-symmetry",
            phi(&x.swap_slots(i, j)?)? == base.negate()?,
        );
    }
    Ok(report)
}
