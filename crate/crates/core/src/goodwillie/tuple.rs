//! Tuples of commuting invertible matrices, over `k` and over `k[t]`.

use std::fmt;

use crate::algebra::{Elem, Field, Matrix, PolyMatrix};
use crate::error::{Error, Result};

/// `l` pairwise commuting invertible `n x n` matrices over one field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatrixTuple {
    field: Field,
    size: usize,
    mats: Vec<Matrix>,
}

impl MatrixTuple {
    /// Validates shape, invertibility, and pairwise commutativity.
    pub fn new(field: &Field, size: usize, mats: Vec<Matrix>) -> Result<MatrixTuple> {
        for m in &mats {
            if m.field() != field {
                return Err(Error::DescriptorMismatch);
            }
            if m.rows() != size || m.cols() != size {
                return Err(Error::DimensionMismatch(format!(
                    "expected {size}x{size}, got {}x{}",
                    m.rows(),
                    m.cols()
                )));
            }
            if !m.is_invertible() {
                return Err(Error::Singular);
            }
        }
        for i in 0..mats.len() {
            for j in i + 1..mats.len() {
                if !mats[i].commutes_with(&mats[j])? {
                    return Err(Error::NotCommuting);
                }
            }
        }
        Ok(MatrixTuple {
            field: field.clone(),
            size,
            mats,
        })
    }

    /// Infers field and size from the first matrix.
    pub fn from_matrices(mats: Vec<Matrix>) -> Result<MatrixTuple> {
        let first = mats
            .first()
            .ok_or_else(|| Error::DegenerateInput("empty tuple needs an explicit size".into()))?;
        let (k, n) = (first.field().clone(), first.rows());
        MatrixTuple::new(&k, n, mats)
    }

    /// The `1 x 1` tuple `(a_1, ..., a_l)`.
    pub fn scalars(field: &Field, values: &[Elem]) -> Result<MatrixTuple> {
        let mats = values
            .iter()
            .map(|a| Matrix::new(field, 1, 1, std::slice::from_ref(a)))
            .collect::<Result<Vec<_>>>()?;
        MatrixTuple::new(field, 1, mats)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn weight(&self) -> usize {
        self.mats.len()
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.mats
    }

    pub fn matrix(&self, i: usize) -> &Matrix {
        &self.mats[i]
    }

    /// `(S A_1 S^{-1}, ..., S A_l S^{-1})`.
    pub fn conjugate(&self, s: &Matrix) -> Result<MatrixTuple> {
        let inv = s.inverse()?;
        let mats = self
            .mats
            .iter()
            .map(|a| s.checked_mul(a)?.checked_mul(&inv))
            .collect::<Result<Vec<_>>>()?;
        MatrixTuple::new(&self.field, self.size, mats)
    }

    /// Same tuple with slots `i` and `j` exchanged.
    pub fn swap_slots(&self, i: usize, j: usize) -> Result<MatrixTuple> {
        if i >= self.weight() || j >= self.weight() {
            return Err(Error::ArityMismatch);
        }
        let mut mats = self.mats.clone();
        mats.swap(i, j);
        Ok(MatrixTuple {
            field: self.field.clone(),
            size: self.size,
            mats,
        })
    }

    /// Same tuple with slot `i` replaced.
    pub fn with_slot(&self, i: usize, m: Matrix) -> Result<MatrixTuple> {
        if i >= self.weight() {
            return Err(Error::ArityMismatch);
        }
        let mut mats = self.mats.clone();
        mats[i] = m;
        MatrixTuple::new(&self.field, self.size, mats)
    }

    /// Blockwise `diag(A_i, B_i)` in every slot.
    pub fn direct_sum(&self, other: &MatrixTuple) -> Result<MatrixTuple> {
        if self.field != other.field {
            return Err(Error::DescriptorMismatch);
        }
        if self.weight() != other.weight() {
            return Err(Error::ArityMismatch);
        }
        let mats = self
            .mats
            .iter()
            .zip(&other.mats)
            .map(|(a, b)| a.direct_sum(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(MatrixTuple {
            field: self.field.clone(),
            size: self.size + other.size,
            mats,
        })
    }

    /// `(A_1 ⊗ I_n, ..., A_p ⊗ I_n, I_m ⊗ B_1, ..., I_m ⊗ B_q)`.
    pub fn kronecker(&self, other: &MatrixTuple) -> Result<MatrixTuple> {
        if self.field != other.field {
            return Err(Error::DescriptorMismatch);
        }
        let im = Matrix::identity(&self.field, self.size);
        let in_ = Matrix::identity(&self.field, other.size);
        let mut mats = Vec::with_capacity(self.weight() + other.weight());
        for a in &self.mats {
            mats.push(a.kronecker(&in_)?);
        }
        for b in &other.mats {
            mats.push(im.kronecker(b)?);
        }
        Ok(MatrixTuple {
            field: self.field.clone(),
            size: self.size * other.size,
            mats,
        })
    }
}

impl fmt::Debug for MatrixTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, m) in self.mats.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{m:?}")?;
        }
        write!(f, ")")
    }
}

/// Tuple over `k[t]`: commuting matrices whose determinants are nonzero constants.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyMatrixTuple {
    field: Field,
    size: usize,
    mats: Vec<PolyMatrix>,
}

impl PolyMatrixTuple {
    pub fn new(field: &Field, size: usize, mats: Vec<PolyMatrix>) -> Result<PolyMatrixTuple> {
        for m in &mats {
            if m.field() != field {
                return Err(Error::DescriptorMismatch);
            }
            if m.size() != size {
                return Err(Error::DimensionMismatch(format!(
                    "expected size {size}, got {}",
                    m.size()
                )));
            }
            let d = m.det();
            if d.is_zero() || !d.is_constant() {
                return Err(Error::NotUnitDeterminant);
            }
        }
        for i in 0..mats.len() {
            for j in i + 1..mats.len() {
                if !mats[i].commutes_with(&mats[j])? {
                    return Err(Error::NotCommuting);
                }
            }
        }
        Ok(PolyMatrixTuple {
            field: field.clone(),
            size,
            mats,
        })
    }

    /// A constant tuple viewed over `k[t]`.
    pub fn constant(x: &MatrixTuple) -> Result<PolyMatrixTuple> {
        let mats = x
            .matrices()
            .iter()
            .map(PolyMatrix::constant)
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyMatrixTuple {
            field: x.field().clone(),
            size: x.size(),
            mats,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn weight(&self) -> usize {
        self.mats.len()
    }

    pub fn matrices(&self) -> &[PolyMatrix] {
        &self.mats
    }

    /// Specialization at `t = c`.
    pub fn eval(&self, c: &Elem) -> Result<MatrixTuple> {
        let mats = self
            .mats
            .iter()
            .map(|m| m.eval(c))
            .collect::<Result<Vec<_>>>()?;
        MatrixTuple::new(&self.field, self.size, mats)
    }

    /// `(h(1), h(0))`: the image is `h(1) - h(0)`.
    pub fn boundary(&self) -> Result<Boundary> {
        Ok(Boundary {
            at_one: self.eval(&self.field.one())?,
            at_zero: self.eval(&self.field.zero())?,
        })
    }
}

impl fmt::Debug for PolyMatrixTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, m) in self.mats.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{m:?}")?;
        }
        write!(f, ")")
    }
}

/// The formal difference `at_one - at_zero`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Boundary {
    pub at_one: MatrixTuple,
    pub at_zero: MatrixTuple,
}

impl Boundary {
    pub fn as_element(&self) -> GwElement {
        GwElement::from_terms(vec![(1, self.at_one.clone()), (-1, self.at_zero.clone())])
    }
}

/// A formal integer combination of matrix tuples of one weight.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GwElement {
    terms: Vec<(i64, MatrixTuple)>,
}

impl GwElement {
    pub fn from_terms(terms: Vec<(i64, MatrixTuple)>) -> GwElement {
        GwElement {
            terms: terms.into_iter().filter(|(c, _)| *c != 0).collect(),
        }
    }

    pub fn single(x: MatrixTuple) -> GwElement {
        GwElement::from_terms(vec![(1, x)])
    }

    pub fn terms(&self) -> &[(i64, MatrixTuple)] {
        &self.terms
    }

    pub fn add(&self, other: &GwElement) -> GwElement {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        GwElement { terms }
    }

    pub fn scale(&self, n: i64) -> GwElement {
        GwElement::from_terms(self.terms.iter().map(|(c, x)| (c * n, x.clone())).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors_enforce_preconditions() {
        let q = Field::rationals();
        let a = Matrix::from_i64s(&q, 2, 2, &[1, 1, 0, 1]);
        let b = Matrix::from_i64s(&q, 2, 2, &[1, 0, 1, 1]);
        assert_eq!(
            MatrixTuple::new(&q, 2, vec![a.clone(), b]).unwrap_err(),
            Error::NotCommuting
        );
        let s = Matrix::from_i64s(&q, 2, 2, &[1, 2, 2, 4]);
        assert_eq!(
            MatrixTuple::new(&q, 2, vec![s]).unwrap_err(),
            Error::Singular
        );
        let x = MatrixTuple::new(&q, 2, vec![a.clone(), a.scale(&q.from_i64(3))]).unwrap();
        assert_eq!(x.weight(), 2);
    }

    #[test]
    fn direct_sum_and_kronecker_shapes() {
        let q = Field::rationals();
        let x = MatrixTuple::scalars(&q, &[q.from_i64(2), q.from_i64(3)]).unwrap();
        let y = MatrixTuple::scalars(&q, &[q.from_i64(5), q.from_i64(7)]).unwrap();
        let s = x.direct_sum(&y).unwrap();
        assert_eq!(s.size(), 2);
        assert_eq!(s.matrix(0), &Matrix::from_i64s(&q, 2, 2, &[2, 0, 0, 5]));
        let p = x.kronecker(&y).unwrap();
        assert_eq!(p.weight(), 4);
        let a = Matrix::from_i64s(&q, 2, 2, &[1, 1, 0, 1]);
        let b = Matrix::from_i64s(&q, 3, 3, &[2, 0, 0, 1, 2, 0, 0, 0, 1]);
        let ax = MatrixTuple::from_matrices(vec![a.clone()]).unwrap();
        let bx = MatrixTuple::from_matrices(vec![b.clone()]).unwrap();
        let kr = ax.kronecker(&bx).unwrap();
        assert_eq!(kr.size(), 6);
        assert_eq!(
            &kr.matrix(0).checked_mul(kr.matrix(1)).unwrap(),
            &a.kronecker(&b).unwrap()
        );
        assert!(ax.direct_sum(&x).is_err());
    }
}
