//! Composition series of `k[x_1, ..., x_l]`-modules given by commuting
//! matrices, split one operator at a time.

use std::fmt;

use super::MatrixTuple;
use crate::algebra::{factor, Elem, Field, Matrix, Poly};
use crate::error::{Error, Result};

/// One simple factor: the residue field `L_j` and the scalars by which the
/// operators act on it.
#[derive(Clone, PartialEq, Eq)]
pub struct CompositionFactor {
    pub extension: Field,
    pub scalars: Vec<Elem>,
    pub multiplicity: usize,
}

impl fmt::Debug for CompositionFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} x ({}; ", self.multiplicity, self.extension)?;
        for (i, s) in self.scalars.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ")")
    }
}

/// Simple factors of `k^n` under the tuple, with multiplicities.
///
/// Factors are found by splitting along the first operator: each
/// irreducible factor `π` of its minimal polynomial contributes the layers
/// `ker π(A)^s / ker π(A)^{s-1}`, which are vector spaces over
/// `F[x]/(π)`; the remaining operators are then split over that field.
pub fn composition_series(x: &MatrixTuple) -> Result<Vec<CompositionFactor>> {
    let mut out: Vec<CompositionFactor> = Vec::new();
    let k = x.field().clone();
    split(&k, x.size(), x.matrices(), Vec::new(), &mut out)?;
    Ok(out)
}

fn push(out: &mut Vec<CompositionFactor>, f: CompositionFactor) {
    match out
        .iter_mut()
        .find(|g| g.extension == f.extension && g.scalars == f.scalars)
    {
        Some(g) => g.multiplicity += f.multiplicity,
        None => out.push(f),
    }
}

fn split(
    f: &Field,
    dim: usize,
    ops: &[Matrix],
    scalars: Vec<Elem>,
    out: &mut Vec<CompositionFactor>,
) -> Result<()> {
    if dim == 0 {
        return Ok(());
    }
    let Some((a, rest)) = ops.split_first() else {
        push(
            out,
            CompositionFactor {
                extension: f.clone(),
                scalars,
                multiplicity: dim,
            },
        );
        return Ok(());
    };
    let mu = a.minimal_polynomial()?;
    for (pi, e) in irreducible_factors(&mu)? {
        let mut lower = Matrix::zero(f, dim, 0);
        let mut power = Matrix::identity(f, dim);
        let step = a.eval_poly(&pi)?;
        for _ in 0..e {
            power = power.checked_mul(&step)?;
            let kernel = power.kernel();
            let (complement_cols, basis) = extend_basis(&lower, &kernel)?;
            let layer = Layer::new(&basis, lower.cols(), complement_cols);
            let a_bar = layer.restrict(a)?;
            let rest_bar = rest
                .iter()
                .map(|b| layer.restrict(b))
                .collect::<Result<Vec<_>>>()?;
            descend(f, &pi, &a_bar, &rest_bar, &scalars, out)?;
            lower = basis;
        }
    }
    Ok(())
}

/// Moves one layer, on which `π(A) = 0`, to the field `F[x]/(π)`.
fn descend(
    f: &Field,
    pi: &Poly,
    a_bar: &Matrix,
    rest: &[Matrix],
    scalars: &[Elem],
    out: &mut Vec<CompositionFactor>,
) -> Result<()> {
    let r = a_bar.rows();
    let d = pi.degree().unwrap_or(0);
    if d == 1 {
        let root = -pi.coeff(0);
        let mut next = scalars.to_vec();
        next.push(root);
        return split(f, r, rest, next, out);
    }
    let l = Field::extension_unchecked(f, pi.values().to_vec());
    // F-basis of the form A^i w_j with w_j chosen greedily from e_1, e_2, ...
    let mut cols: Vec<Matrix> = Vec::with_capacity(r);
    let mut span = Matrix::zero(f, r, 0);
    for i in 0..r {
        if cols.len() == r {
            break;
        }
        let mut e = Matrix::zero(f, r, 1);
        e.set(i, 0, &f.one());
        let trial = Matrix::block(&[vec![span.clone(), e.clone()]])?;
        if trial.rank() == span.cols() {
            continue;
        }
        let mut v = e;
        for _ in 0..d {
            cols.push(v.clone());
            v = a_bar.checked_mul(&v)?;
        }
        span = Matrix::block(&[cols.clone()])?;
    }
    if span.cols() != r || !r.is_multiple_of(d) {
        return Err(Error::InvariantViolated(format!(
            "layer of dimension {r} is not a vector space over a degree-{d} field"
        )));
    }
    let inv = span.inverse()?;
    let m = r / d;
    let mut rest_l = Vec::with_capacity(rest.len());
    for b in rest {
        let coords = inv.checked_mul(&b.checked_mul(&span)?)?;
        let mut entries = Vec::with_capacity(m * m);
        for row in 0..m {
            for col in 0..m {
                let c: Vec<Elem> = (0..d).map(|i| coords.get(row * d + i, col * d)).collect();
                entries.push(l.from_coeffs(&c)?);
            }
        }
        rest_l.push(Matrix::new(&l, m, m, &entries)?);
    }
    let mut next = scalars
        .iter()
        .map(|s| l.embed(s))
        .collect::<Result<Vec<_>>>()?;
    next.push(l.generator()?);
    split(&l, m, &rest_l, next, out)
}

/// Columns of `upper` completing the basis `lower`; returns
/// `(number added, [lower | added])`.
fn extend_basis(lower: &Matrix, upper: &Matrix) -> Result<(usize, Matrix)> {
    let joined = Matrix::block(&[vec![lower.clone(), upper.clone()]])?;
    let (_, pivots) = joined.rref();
    let mut chosen = vec![lower.clone()];
    let mut added = 0;
    for p in pivots {
        if p >= lower.cols() {
            let j = p - lower.cols();
            chosen.push(upper.submatrix(0..upper.rows(), j..j + 1));
            added += 1;
        }
    }
    Ok((added, Matrix::block(&[chosen])?))
}

/// A quotient `span(basis) / span(first `low` columns)` of an invariant flag.
struct Layer<'a> {
    basis: &'a Matrix,
    low: usize,
    width: usize,
}

impl<'a> Layer<'a> {
    fn new(basis: &'a Matrix, low: usize, width: usize) -> Layer<'a> {
        Layer { basis, low, width }
    }

    /// Matrix of the induced map on the quotient.
    fn restrict(&self, b: &Matrix) -> Result<Matrix> {
        let n = self.basis.rows();
        let top = self.low + self.width;
        let images = b.checked_mul(&self.basis.submatrix(0..n, self.low..top))?;
        let coords = solve(self.basis, &images)?;
        Ok(coords.submatrix(self.low..top, 0..self.width))
    }
}

/// `Y` with `P Y = R`, for `P` of full column rank and `R` in its span.
fn solve(p: &Matrix, r: &Matrix) -> Result<Matrix> {
    let c = p.cols();
    let aug = Matrix::block(&[vec![p.clone(), r.clone()]])?;
    let (red, pivots) = aug.rref();
    if pivots.len() != c || pivots.iter().enumerate().any(|(i, &q)| i != q) {
        return Err(Error::InvariantViolated(
            "subspace is not invariant under a commuting operator".into(),
        ));
    }
    Ok(red.submatrix(0..c, c..c + r.cols()))
}

/// Irreducible monic factors with exponents, subject to the tower policy
/// over `Q`: past one proper extension, polynomials must split linearly
/// with rational roots.
fn irreducible_factors(mu: &Poly) -> Result<Vec<(Poly, usize)>> {
    let f = mu.field();
    if f.is_finite() || f.is_rationals() || mu.degree() == Some(1) {
        return Ok(factor(mu)?.factors);
    }
    let q = f.prime_field();
    let mut coeffs = Vec::with_capacity(mu.coeffs().len());
    for c in mu.coeffs() {
        let coords = f.coords_over(&c, &q)?;
        if coords[1..].iter().any(|z| !z.is_zero()) {
            return Err(Error::UnsupportedTower(format!(
                "minimal polynomial {mu} over {f} does not descend to Q"
            )));
        }
        coeffs.push(coords[0].clone());
    }
    let over_q = Poly::new(&q, &coeffs)?;
    let fact = factor(&over_q)?;
    let mut out = Vec::with_capacity(fact.factors.len());
    for (g, e) in fact.factors {
        if g.degree() != Some(1) {
            return Err(Error::UnsupportedTower(format!(
                "{g} would need a second extension over {f}"
            )));
        }
        out.push((g.embed_into(f)?, e));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factor_sig(fs: &[CompositionFactor]) -> Vec<(usize, Vec<String>, usize)> {
        let mut v: Vec<_> = fs
            .iter()
            .map(|f| {
                (
                    f.extension.degree(),
                    f.scalars.iter().map(|s| s.to_string()).collect(),
                    f.multiplicity,
                )
            })
            .collect();
        v.sort();
        v
    }

    #[test]
    fn diagonal_and_jordan() {
        let q = Field::rationals();
        let x = MatrixTuple::from_matrices(vec![
            Matrix::from_i64s(&q, 2, 2, &[2, 0, 0, 3]),
            Matrix::from_i64s(&q, 2, 2, &[5, 0, 0, 7]),
        ])
        .unwrap();
        let fs = composition_series(&x).unwrap();
        assert_eq!(fs.len(), 2);
        assert!(fs.iter().all(|f| f.multiplicity == 1 && f.extension == q));
        let want = [
            vec![q.from_i64(2), q.from_i64(5)],
            vec![q.from_i64(3), q.from_i64(7)],
        ];
        assert!(want.iter().all(|w| fs.iter().any(|f| &f.scalars == w)));

        let j = MatrixTuple::from_matrices(vec![
            Matrix::from_i64s(&q, 2, 2, &[3, 1, 0, 3]),
            Matrix::scalar(&q, 2, &q.from_i64(-2)),
        ])
        .unwrap();
        let fs = composition_series(&j).unwrap();
        assert_eq!(fs.len(), 1);
        assert_eq!(fs[0].multiplicity, 2);
        assert_eq!(fs[0].scalars, vec![q.from_i64(3), q.from_i64(-2)]);
    }

    #[test]
    fn irreducible_companion_over_f2() {
        let f2 = Field::prime(2).unwrap();
        let c = Matrix::companion(&Poly::from_i64s(&f2, &[1, 1, 1])).unwrap();
        let fs = composition_series(&MatrixTuple::from_matrices(vec![c]).unwrap()).unwrap();
        assert_eq!(fs.len(), 1);
        assert_eq!(fs[0].extension.degree(), 2);
        assert_eq!(fs[0].multiplicity, 1);
    }

    #[test]
    fn conjugation_preserves_factors() {
        let f5 = Field::prime(5).unwrap();
        let a = Matrix::from_i64s(&f5, 3, 3, &[0, 0, 2, 1, 0, 1, 0, 1, 3]);
        let b = a.checked_mul(&a).unwrap();
        let x = MatrixTuple::from_matrices(vec![a, b]).unwrap();
        let s = Matrix::from_i64s(&f5, 3, 3, &[1, 2, 0, 0, 1, 4, 3, 0, 2]);
        let y = x.conjugate(&s).unwrap();
        assert_eq!(
            factor_sig(&composition_series(&x).unwrap()),
            factor_sig(&composition_series(&y).unwrap())
        );
    }

    #[test]
    fn quadratic_step_then_rational_split() {
        let q = Field::rationals();
        // A has minimal polynomial X^2 - 2; B = 3I commutes with it.
        let a = Matrix::from_i64s(&q, 4, 4, &[0, 2, 0, 0, 1, 0, 0, 0, 0, 0, 0, 2, 0, 0, 1, 0]);
        let b = Matrix::from_i64s(&q, 4, 4, &[3, 0, 0, 0, 0, 3, 0, 0, 0, 0, 5, 0, 0, 0, 0, 5]);
        let fs = composition_series(&MatrixTuple::from_matrices(vec![a, b]).unwrap()).unwrap();
        assert_eq!(fs.len(), 2);
        assert!(fs
            .iter()
            .all(|f| f.extension.degree() == 2 && f.multiplicity == 1));
    }
}
