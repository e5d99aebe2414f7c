//! Explicit polynomial homotopies whose boundaries produce the defining
//! relations of Milnor K-theory inside the Goodwillie group.

use super::{MatrixTuple, PolyMatrixTuple};
use crate::algebra::{Elem, Field, Matrix, PolyMatrix};
use crate::error::{Error, Result};

fn doubled(field: &Field, bystanders: &[Matrix]) -> Result<Vec<PolyMatrix>> {
    bystanders
        .iter()
        .map(|a| {
            if a.field() != field {
                return Err(Error::DescriptorMismatch);
            }
            PolyMatrix::constant(&a.direct_sum(a)?)
        })
        .collect()
}

/// `[[0, I], [-BC, t(I + BC) + (1 - t)(B + C)]]` for commuting `B`, `C`.
fn two_root_path(b: &Matrix, c: &Matrix) -> Result<PolyMatrix> {
    let k = b.field();
    let n = b.rows();
    let bc = b.checked_mul(c)?;
    let id = Matrix::identity(k, n);
    let zero = Matrix::zero(k, n, n);
    let sum = b.checked_add(c)?;
    let at_zero = Matrix::block(&[vec![zero.clone(), id.clone()], vec![bc.neg(), sum.clone()]])?;
    let slope = id.checked_add(&bc)?.checked_sub(&sum)?;
    let dir = Matrix::block(&[vec![zero.clone(), zero.clone()], vec![zero, slope]])?;
    PolyMatrix::linear(&at_zero, &dir)
}

/// Homotopy from `(B, C)`'s two-root companion to `1 ⊕ BC`, with each
/// bystander doubled to `A_i ⊕ A_i`. Its boundary realizes
/// `(BC, A_2, ...) = (B, A_2, ...) + (C, A_2, ...)`.
pub fn h_mult(b: &Matrix, c: &Matrix, bystanders: &[Matrix]) -> Result<PolyMatrixTuple> {
    let k = b.field().clone();
    let n = b.rows();
    let mut all = vec![b.clone(), c.clone()];
    all.extend(bystanders.iter().cloned());
    MatrixTuple::new(&k, n, all)?;
    let mut mats = vec![two_root_path(b, c)?];
    mats.extend(doubled(&k, bystanders)?);
    PolyMatrixTuple::new(&k, 2 * n, mats)
}

/// The two-root path of `(A_i, A_j)` placed in both slots `i` and `j`;
/// the remaining slots are doubled.
pub fn h_swap(x: &MatrixTuple, i: usize, j: usize) -> Result<PolyMatrixTuple> {
    if i >= x.weight() || j >= x.weight() || i == j {
        return Err(Error::DegenerateInput(format!(
            "slots {i} and {j} must be distinct and below {}",
            x.weight()
        )));
    }
    let k = x.field();
    let path = two_root_path(x.matrix(i), x.matrix(j))?;
    let mut mats = Vec::with_capacity(x.weight());
    for (s, a) in x.matrices().iter().enumerate() {
        if s == i || s == j {
            mats.push(path.clone());
        } else {
            mats.push(PolyMatrix::constant(&a.direct_sum(a)?)?);
        }
    }
    PolyMatrixTuple::new(k, 2 * x.size(), mats)
}

/// `[[A, Ct], [0, B]]` in the first slot and scalar bystanders, deforming
/// `diag(A, B)` into a block-triangular matrix.
pub fn h_shear(a: &Matrix, b: &Matrix, c: &Matrix, bystanders: &[Elem]) -> Result<PolyMatrixTuple> {
    let k = a.field().clone();
    let (n, m) = (a.rows(), b.rows());
    if c.rows() != n || c.cols() != m || !a.is_square() || !b.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "need A n x n, B m x m, C n x m; got C {}x{}",
            c.rows(),
            c.cols()
        )));
    }
    let at_zero = a.direct_sum(b)?;
    let dir = Matrix::block(&[
        vec![Matrix::zero(&k, n, n), c.clone()],
        vec![Matrix::zero(&k, m, n), Matrix::zero(&k, m, m)],
    ])?;
    let mut mats = vec![PolyMatrix::linear(&at_zero, &dir)?];
    for s in bystanders {
        if s.is_zero() {
            return Err(Error::ZeroEntry);
        }
        mats.push(PolyMatrix::constant(&Matrix::scalar(&k, n + m, s))?);
    }
    PolyMatrixTuple::new(&k, n + m, mats)
}

/// `(A(t), I - A(t), c_3, ..., c_l)` with `A(t)` the companion matrix of
/// `X^3 + (a(t-1) - bt)X^2 - (at + b(1-t))X + ab`; both endpoints are
/// direct sums of Steinberg pairs.
pub fn h_steinberg(a: &Elem, b: &Elem, bystanders: &[Elem]) -> Result<PolyMatrixTuple> {
    let k = a.field().clone();
    for v in [a, b] {
        if v.is_zero() || v.is_one() {
            return Err(Error::DegenerateInput(format!("{v} must avoid 0 and 1")));
        }
    }
    let ab = a.checked_mul(b)?;
    let (z, o) = (k.zero(), k.one());
    let at_zero = Matrix::from_rows(
        &k,
        &[
            vec![z.clone(), z.clone(), -ab],
            vec![o.clone(), z.clone(), b.clone()],
            vec![z.clone(), o.clone(), a.clone()],
        ],
    )?;
    let d = a.checked_sub(b)?;
    let dir = Matrix::from_rows(
        &k,
        &[
            vec![z.clone(), z.clone(), z.clone()],
            vec![z.clone(), z.clone(), d.clone()],
            vec![z.clone(), z.clone(), -d],
        ],
    )?;
    let path = PolyMatrix::linear(&at_zero, &dir)?;
    let id = Matrix::identity(&k, 3);
    let complement = PolyMatrix::linear(&id.checked_sub(&at_zero)?, &dir.neg())?;
    let mut mats = vec![path, complement];
    for s in bystanders {
        if s.is_zero() {
            return Err(Error::ZeroEntry);
        }
        mats.push(PolyMatrix::constant(&Matrix::scalar(&k, 3, s))?);
    }
    PolyMatrixTuple::new(&k, 3, mats)
}
