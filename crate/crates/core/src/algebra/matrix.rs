//! Dense matrices over a [`Field`] and over the polynomial ring `k[t]`.

use std::fmt;

use super::field::{Elem, Field, Value};
use super::poly::{self, Poly};
use crate::error::{Error, Result};

/// Row-major dense matrix over a field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Value>,
}

impl Matrix {
    pub(crate) fn from_values(field: &Field, rows: usize, cols: usize, data: Vec<Value>) -> Matrix {
        debug_assert_eq!(data.len(), rows * cols);
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    /// Row-major construction.
    pub fn new(field: &Field, rows: usize, cols: usize, entries: &[Elem]) -> Result<Matrix> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if entries.iter().any(|e| e.field() != field) {
            return Err(Error::DescriptorMismatch);
        }
        let data = entries.iter().map(|e| e.value.clone()).collect();
        Ok(Matrix::from_values(field, rows, cols, data))
    }

    pub fn from_rows(field: &Field, rows: &[Vec<Elem>]) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let flat: Vec<Elem> = rows.iter().flatten().cloned().collect();
        Matrix::new(field, r, c, &flat)
    }

    pub fn from_i64s(field: &Field, rows: usize, cols: usize, entries: &[i64]) -> Matrix {
        assert_eq!(entries.len(), rows * cols);
        let data = entries.iter().map(|&x| field.int_v(x)).collect();
        Matrix::from_values(field, rows, cols, data)
    }

    pub fn zero(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix::from_values(field, rows, cols, vec![field.zero_v(); rows * cols])
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        Matrix::scalar(field, n, &field.one())
    }

    /// `c * I_n`.
    pub fn scalar(field: &Field, n: usize, c: &Elem) -> Matrix {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = c.value.clone();
        }
        m
    }

    /// Companion matrix of a monic polynomial (ones on the subdiagonal,
    /// negated coefficients in the last column).
    pub fn companion(f: &Poly) -> Result<Matrix> {
        let n = match f.degree() {
            Some(n) if n >= 1 && f.is_monic() => n,
            _ => return Err(Error::NotMonic),
        };
        let k = f.field();
        let mut m = Matrix::zero(k, n, n);
        for i in 1..n {
            m.data[i * n + i - 1] = k.one_v();
        }
        for i in 0..n {
            m.data[i * n + n - 1] = k.neg_v(&f.values()[i]);
        }
        Ok(m)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.field.wrap(self.data[i * self.cols + j].clone())
    }

    pub(crate) fn value(&self, i: usize, j: usize) -> &Value {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: &Elem) {
        assert_eq!(x.field(), &self.field);
        self.data[i * self.cols + j] = x.value.clone();
    }

    /// Row-major entries.
    pub fn entries(&self) -> Vec<Elem> {
        self.data
            .iter()
            .map(|v| self.field.wrap(v.clone()))
            .collect()
    }

    pub fn row(&self, i: usize) -> Vec<Elem> {
        (0..self.cols).map(|j| self.get(i, j)).collect()
    }

    fn same_shape(&self, other: &Matrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::DescriptorMismatch);
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("shapes differ".into()));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Matrix) -> Result<Matrix> {
        self.same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| self.field.add_v(a, b))
            .collect();
        Ok(Matrix::from_values(&self.field, self.rows, self.cols, data))
    }

    pub fn checked_sub(&self, other: &Matrix) -> Result<Matrix> {
        self.same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| self.field.sub_v(a, b))
            .collect();
        Ok(Matrix::from_values(&self.field, self.rows, self.cols, data))
    }

    pub fn checked_mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::DescriptorMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let k = &self.field;
        let mut data = vec![k.zero_v(); self.rows * other.cols];
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = &self.data[i * self.cols + l];
                if k.is_zero_v(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[l * other.cols + j];
                    if k.is_zero_v(b) {
                        continue;
                    }
                    let cell = &mut data[i * other.cols + j];
                    *cell = k.add_v(cell, &k.mul_v(a, b));
                }
            }
        }
        Ok(Matrix::from_values(k, self.rows, other.cols, data))
    }

    pub fn scale(&self, c: &Elem) -> Matrix {
        assert_eq!(c.field(), &self.field);
        let data = self
            .data
            .iter()
            .map(|a| self.field.mul_v(a, &c.value))
            .collect();
        Matrix::from_values(&self.field, self.rows, self.cols, data)
    }

    pub fn neg(&self) -> Matrix {
        let data = self.data.iter().map(|a| self.field.neg_v(a)).collect();
        Matrix::from_values(&self.field, self.rows, self.cols, data)
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.data[i * self.cols + j].clone());
            }
        }
        Matrix::from_values(&self.field, self.cols, self.rows, data)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Matrix::identity(&self.field, self.rows)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| self.field.is_zero_v(v))
    }

    pub fn commutes_with(&self, other: &Matrix) -> Result<bool> {
        Ok(self.checked_mul(other)? == other.checked_mul(self)?)
    }

    pub fn pow(&self, e: u32) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(
                "power of a non-square matrix".into(),
            ));
        }
        let mut acc = Matrix::identity(&self.field, self.rows);
        for _ in 0..e {
            acc = acc.checked_mul(self)?;
        }
        Ok(acc)
    }

    /// `f(A)` by Horner's rule.
    pub fn eval_poly(&self, f: &Poly) -> Result<Matrix> {
        if f.field() != &self.field {
            return Err(Error::DescriptorMismatch);
        }
        if !self.is_square() {
            return Err(Error::DimensionMismatch(
                "polynomial in a non-square matrix".into(),
            ));
        }
        let mut acc = Matrix::zero(&self.field, self.rows, self.cols);
        for c in f.coeffs().iter().rev() {
            acc = acc
                .checked_mul(self)?
                .checked_add(&Matrix::scalar(&self.field, self.rows, c))?;
        }
        Ok(acc)
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let k = &self.field;
        let mut m = self.data.clone();
        let (r, c) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..c {
            if row == r {
                break;
            }
            let Some(p) = (row..r).find(|&i| !k.is_zero_v(&m[i * c + col])) else {
                continue;
            };
            if p != row {
                for j in 0..c {
                    m.swap(p * c + j, row * c + j);
                }
            }
            let inv = k.inv_v(&m[row * c + col]).expect("nonzero pivot");
            for j in 0..c {
                m[row * c + j] = k.mul_v(&m[row * c + j], &inv);
            }
            for i in 0..r {
                if i == row || k.is_zero_v(&m[i * c + col]) {
                    continue;
                }
                let f = m[i * c + col].clone();
                for j in 0..c {
                    let t = k.mul_v(&f, &m[row * c + j]);
                    m[i * c + j] = k.sub_v(&m[i * c + j], &t);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (Matrix::from_values(k, r, c, m), pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel, as the columns of the returned matrix.
    pub fn kernel(&self) -> Matrix {
        let k = &self.field;
        let (e, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|j| !pivots.contains(j)).collect();
        let mut out = Matrix::zero(k, self.cols, free.len());
        for (idx, &f) in free.iter().enumerate() {
            out.data[f * free.len() + idx] = k.one_v();
            for (prow, &pc) in pivots.iter().enumerate() {
                out.data[pc * free.len() + idx] = k.neg_v(e.value(prow, f));
            }
        }
        out
    }

    /// Determinant by Gaussian elimination.
    pub fn det(&self) -> Result<Elem> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(
                "determinant of a non-square matrix".into(),
            ));
        }
        let k = &self.field;
        let n = self.rows;
        let mut m = self.data.clone();
        let mut det = k.one_v();
        for col in 0..n {
            let Some(p) = (col..n).find(|&i| !k.is_zero_v(&m[i * n + col])) else {
                return Ok(k.zero());
            };
            if p != col {
                for j in 0..n {
                    m.swap(p * n + j, col * n + j);
                }
                det = k.neg_v(&det);
            }
            let piv = m[col * n + col].clone();
            det = k.mul_v(&det, &piv);
            let inv = k.inv_v(&piv).expect("nonzero pivot");
            for i in col + 1..n {
                if k.is_zero_v(&m[i * n + col]) {
                    continue;
                }
                let f = k.mul_v(&m[i * n + col], &inv);
                for j in col..n {
                    let t = k.mul_v(&f, &m[col * n + j]);
                    m[i * n + j] = k.sub_v(&m[i * n + j], &t);
                }
            }
        }
        Ok(k.wrap(det))
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(
                "inverse of a non-square matrix".into(),
            ));
        }
        let n = self.rows;
        let k = &self.field;
        let mut aug = Matrix::zero(k, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.data[i * 2 * n + j] = self.data[i * n + j].clone();
            }
            aug.data[i * 2 * n + n + i] = k.one_v();
        }
        let (e, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(e.data[i * 2 * n + n + j].clone());
            }
        }
        Ok(Matrix::from_values(k, n, n, data))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// `A ⊗ B` with block `(i, j)` equal to `a_ij * B`.
    pub fn kronecker(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::DescriptorMismatch);
        }
        let k = &self.field;
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut data = vec![k.zero_v(); r * c];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self.data[i * self.cols + j];
                if k.is_zero_v(a) {
                    continue;
                }
                for p in 0..other.rows {
                    for q in 0..other.cols {
                        data[(i * other.rows + p) * c + j * other.cols + q] =
                            k.mul_v(a, &other.data[p * other.cols + q]);
                    }
                }
            }
        }
        Ok(Matrix::from_values(k, r, c, data))
    }

    /// Block diagonal `diag(A, B)`.
    pub fn direct_sum(&self, other: &Matrix) -> Result<Matrix> {
        Matrix::block(&[
            vec![
                self.clone(),
                Matrix::zero(&self.field, self.rows, other.cols),
            ],
            vec![
                Matrix::zero(&self.field, other.rows, self.cols),
                other.clone(),
            ],
        ])
    }

    /// Assembles a block matrix; blocks in a row share a height, blocks in a column a width.
    pub fn block(blocks: &[Vec<Matrix>]) -> Result<Matrix> {
        let first = blocks
            .first()
            .and_then(|r| r.first())
            .ok_or_else(|| Error::DimensionMismatch("empty block layout".into()))?;
        let k = first.field.clone();
        let widths: Vec<usize> = blocks[0].iter().map(|b| b.cols).collect();
        let total_c: usize = widths.iter().sum();
        let mut data = Vec::new();
        let mut total_r = 0;
        for brow in blocks {
            if brow.len() != widths.len() {
                return Err(Error::DimensionMismatch("ragged block layout".into()));
            }
            let h = brow[0].rows;
            for (b, &w) in brow.iter().zip(&widths) {
                if b.field != k {
                    return Err(Error::DescriptorMismatch);
                }
                if b.rows != h || b.cols != w {
                    return Err(Error::DimensionMismatch("block sizes disagree".into()));
                }
            }
            for i in 0..h {
                for b in brow {
                    data.extend_from_slice(&b.data[i * b.cols..(i + 1) * b.cols]);
                }
            }
            total_r += h;
        }
        Ok(Matrix::from_values(&k, total_r, total_c, data))
    }

    /// Submatrix with the given row and column ranges.
    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Matrix {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for i in rows.clone() {
            for j in cols.clone() {
                data.push(self.data[i * self.cols + j].clone());
            }
        }
        Matrix::from_values(&self.field, rows.len(), cols.len(), data)
    }

    pub(crate) fn from_columns(field: &Field, rows: usize, cols: &[Vec<Value>]) -> Matrix {
        let mut m = Matrix::zero(field, rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m.data[i * cols.len() + j] = v.clone();
            }
        }
        m
    }

    pub(crate) fn apply_values(&self, v: &[Value]) -> Vec<Value> {
        let k = &self.field;
        (0..self.rows)
            .map(|i| {
                let mut acc = k.zero_v();
                for (j, x) in v.iter().enumerate() {
                    acc = k.add_v(&acc, &k.mul_v(&self.data[i * self.cols + j], x));
                }
                acc
            })
            .collect()
    }

    /// Entries pushed into an extension field.
    pub fn embed_into(&self, target: &Field) -> Result<Matrix> {
        let data: Result<Vec<Value>> = self
            .data
            .iter()
            .map(|v| target.embed_v(&self.field, v))
            .collect();
        Ok(Matrix::from_values(target, self.rows, self.cols, data?))
    }

    /// Monic minimal polynomial, as the lcm of the local minimal polynomials
    /// of the standard basis vectors.
    pub fn minimal_polynomial(&self) -> Result<Poly> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(
                "minimal polynomial of a non-square matrix".into(),
            ));
        }
        let k = &self.field;
        let n = self.rows;
        let mut acc = Poly::one(k);
        for j in 0..n {
            let mut e = vec![k.zero_v(); n];
            e[j] = k.one_v();
            if !acc.is_one() && self.poly_apply(&acc, &e).iter().all(|v| k.is_zero_v(v)) {
                continue;
            }
            let local = first_dependency(k, n, e, |v| self.apply_values(v));
            acc = lcm(&acc, &local)?;
        }
        Ok(acc)
    }

    fn poly_apply(&self, f: &Poly, v: &[Value]) -> Vec<Value> {
        let k = &self.field;
        let mut acc = vec![k.zero_v(); v.len()];
        for c in f.values().iter().rev() {
            acc = self.apply_values(&acc);
            for (a, x) in acc.iter_mut().zip(v) {
                *a = k.add_v(a, &k.mul_v(c, x));
            }
        }
        acc
    }
}

fn lcm(a: &Poly, b: &Poly) -> Result<Poly> {
    let g = a.gcd(b)?;
    Ok(a.exact_div(&g)?.checked_mul(b)?.monic())
}

/// Smallest monic `c` with `sum c_i v_i = 0` where `v_0 = start`, `v_{i+1} = step(v_i)`.
pub(crate) fn first_dependency(
    k: &Field,
    dim: usize,
    start: Vec<Value>,
    step: impl Fn(&[Value]) -> Vec<Value>,
) -> Poly {
    // Echelon rows: (pivot index, reduced vector, expression as a polynomial in the step).
    let mut basis: Vec<(usize, Vec<Value>, Vec<Value>)> = Vec::new();
    let mut current = start;
    let mut i = 0;
    loop {
        let mut v = current.clone();
        let mut expr = vec![k.zero_v(); i + 1];
        expr[i] = k.one_v();
        for (piv, bv, bexpr) in &basis {
            if k.is_zero_v(&v[*piv]) {
                continue;
            }
            let f = v[*piv].clone();
            for (x, y) in v.iter_mut().zip(bv) {
                *x = k.sub_v(x, &k.mul_v(&f, y));
            }
            let scaled = poly::d_scale(k, bexpr, &f);
            expr = poly::d_sub(k, &expr, &scaled);
        }
        match (0..dim).find(|&j| !k.is_zero_v(&v[j])) {
            None => {
                return Poly::from_values(k, expr).monic();
            }
            Some(piv) => {
                let inv = k.inv_v(&v[piv]).expect("nonzero");
                let v: Vec<Value> = v.iter().map(|x| k.mul_v(x, &inv)).collect();
                let expr = poly::d_scale(k, &expr, &inv);
                basis.push((piv, v, expr));
            }
        }
        current = step(&current);
        i += 1;
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

impl std::ops::Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.checked_mul(rhs).expect("Matrix::mul")
    }
}

impl std::ops::Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        self.checked_add(rhs).expect("Matrix::add")
    }
}

impl std::ops::Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        self.checked_sub(rhs).expect("Matrix::sub")
    }
}

/// Square matrix with entries in `k[t]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyMatrix {
    field: Field,
    n: usize,
    data: Vec<Poly>,
}

impl PolyMatrix {
    pub fn new(field: &Field, n: usize, entries: Vec<Poly>) -> Result<PolyMatrix> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {n}x{n} matrix",
                entries.len()
            )));
        }
        if entries.iter().any(|p| p.field() != field) {
            return Err(Error::DescriptorMismatch);
        }
        Ok(PolyMatrix {
            field: field.clone(),
            n,
            data: entries,
        })
    }

    /// Constant matrix viewed over `k[t]`.
    pub fn constant(m: &Matrix) -> Result<PolyMatrix> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch("square matrices only".into()));
        }
        let data = m.entries().iter().map(Poly::constant).collect();
        PolyMatrix::new(m.field(), m.rows(), data)
    }

    /// `A + t B` for constant square matrices of equal size.
    pub fn linear(a: &Matrix, b: &Matrix) -> Result<PolyMatrix> {
        a.same_shape(b)?;
        let k = a.field();
        let t = Poly::x(k);
        let data = a
            .entries()
            .iter()
            .zip(b.entries())
            .map(|(x, y)| &Poly::constant(x) + &t.scale(&y))
            .collect();
        PolyMatrix::new(k, a.rows(), data)
    }

    pub fn identity(field: &Field, n: usize) -> PolyMatrix {
        PolyMatrix::constant(&Matrix::identity(field, n)).expect("square")
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.data[i * self.n + j]
    }

    pub fn entries(&self) -> &[Poly] {
        &self.data
    }

    /// Largest entry degree in `t`.
    pub fn degree(&self) -> usize {
        self.data
            .iter()
            .filter_map(|p| p.degree())
            .max()
            .unwrap_or(0)
    }

    /// Specializes `t` to a field element.
    pub fn eval(&self, t: &Elem) -> Result<Matrix> {
        let vals: Result<Vec<Elem>> = self.data.iter().map(|p| p.eval(t)).collect();
        Matrix::new(&self.field, self.n, self.n, &vals?)
    }

    pub fn checked_mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.field != other.field {
            return Err(Error::DescriptorMismatch);
        }
        if self.n != other.n {
            return Err(Error::DimensionMismatch("sizes differ".into()));
        }
        let n = self.n;
        let mut data = vec![Poly::zero(&self.field); n * n];
        for i in 0..n {
            for l in 0..n {
                let a = &self.data[i * n + l];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let prod = a * &other.data[l * n + j];
                    data[i * n + j] = &data[i * n + j] + &prod;
                }
            }
        }
        PolyMatrix::new(&self.field, n, data)
    }

    pub fn commutes_with(&self, other: &PolyMatrix) -> Result<bool> {
        Ok(self.checked_mul(other)? == other.checked_mul(self)?)
    }

    /// Determinant in `k[t]` by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Poly {
        let n = self.n;
        let k = &self.field;
        if n == 0 {
            return Poly::one(k);
        }
        let mut m = self.data.clone();
        let mut sign = false;
        let mut prev = Poly::one(k);
        for c in 0..n - 1 {
            if m[c * n + c].is_zero() {
                match (c + 1..n).find(|&i| !m[i * n + c].is_zero()) {
                    Some(p) => {
                        for j in 0..n {
                            m.swap(p * n + j, c * n + j);
                        }
                        sign = !sign;
                    }
                    None => return Poly::zero(k),
                }
            }
            for i in c + 1..n {
                for j in c + 1..n {
                    let num = &(&m[c * n + c] * &m[i * n + j]) - &(&m[i * n + c] * &m[c * n + j]);
                    m[i * n + j] = num.exact_div(&prev).expect("Bareiss division is exact");
                }
                m[i * n + c] = Poly::zero(k);
            }
            prev = m[c * n + c].clone();
        }
        let d = m[n * n - 1].clone();
        if sign {
            -&d
        } else {
            d
        }
    }

    /// `A ⊗ B` with the same block convention as [`Matrix::kronecker`].
    pub fn kronecker(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.field != other.field {
            return Err(Error::DescriptorMismatch);
        }
        let (n, m) = (self.n, other.n);
        let size = n * m;
        let mut data = vec![Poly::zero(&self.field); size * size];
        for i in 0..n {
            for j in 0..n {
                let a = &self.data[i * n + j];
                if a.is_zero() {
                    continue;
                }
                for p in 0..m {
                    for q in 0..m {
                        data[(i * m + p) * size + j * m + q] = a * &other.data[p * m + q];
                    }
                }
            }
        }
        PolyMatrix::new(&self.field, size, data)
    }

    pub fn direct_sum(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.field != other.field {
            return Err(Error::DescriptorMismatch);
        }
        let size = self.n + other.n;
        let mut data = vec![Poly::zero(&self.field); size * size];
        for i in 0..self.n {
            for j in 0..self.n {
                data[i * size + j] = self.data[i * self.n + j].clone();
            }
        }
        for i in 0..other.n {
            for j in 0..other.n {
                data[(self.n + i) * size + self.n + j] = other.data[i * other.n + j].clone();
            }
        }
        PolyMatrix::new(&self.field, size, data)
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.n {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.data[i * self.n + j])?;
            }
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(k: &Field, n: usize, rng: &mut ChaCha8Rng) -> Matrix {
        let e: Vec<Elem> = (0..n * n).map(|_| k.random(rng)).collect();
        Matrix::new(k, n, n, &e).unwrap()
    }

    /// Leibniz expansion, used as an independent determinant.
    fn leibniz(m: &Matrix) -> Elem {
        fn perms(n: usize) -> Vec<(Vec<usize>, bool)> {
            if n == 0 {
                return vec![(vec![], false)];
            }
            let mut out = Vec::new();
            for (p, s) in perms(n - 1) {
                for pos in 0..n {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    let flips = (n - 1 - pos) % 2 == 1;
                    out.push((q, s ^ flips));
                }
            }
            out
        }
        let k = m.field();
        let mut acc = k.zero();
        for (p, odd) in perms(m.rows()) {
            let mut t = k.one();
            for (i, &j) in p.iter().enumerate() {
                t = &t * &m.get(i, j);
            }
            acc = if odd { &acc - &t } else { &acc + &t };
        }
        acc
    }

    #[test]
    fn det_matches_leibniz() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for k in [
            Field::rationals(),
            Field::prime(7).unwrap(),
            Field::finite(3, 2).unwrap(),
        ] {
            for n in 1..=4 {
                let m = random_matrix(&k, n, &mut rng);
                assert_eq!(m.det().unwrap(), leibniz(&m));
            }
        }
    }

    #[test]
    fn inverse_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let k = Field::rationals();
        for _ in 0..10 {
            let m = random_matrix(&k, 3, &mut rng);
            if let Ok(inv) = m.inverse() {
                assert!((&m * &inv).is_identity());
            } else {
                assert!(m.det().unwrap().is_zero());
            }
        }
    }

    #[test]
    fn minimal_polynomials() {
        let q = Field::rationals();
        assert_eq!(
            Matrix::identity(&q, 3).minimal_polynomial().unwrap(),
            Poly::from_i64s(&q, &[-1, 1])
        );
        let f2 = Field::prime(2).unwrap();
        let f = Poly::from_i64s(&f2, &[1, 1, 1]);
        assert_eq!(
            Matrix::companion(&f).unwrap().minimal_polynomial().unwrap(),
            f
        );
        // diag(J_2(1), 2): (X-1)^2 (X-2)
        let m = Matrix::from_i64s(&q, 3, 3, &[1, 1, 0, 0, 1, 0, 0, 0, 2]);
        let expected = &Poly::from_i64s(&q, &[-1, 1]).pow(2) * &Poly::from_i64s(&q, &[-2, 1]);
        assert_eq!(m.minimal_polynomial().unwrap(), expected);
        assert!(m.eval_poly(&expected).unwrap().is_zero());
    }

    #[test]
    fn kernel_and_rank() {
        let q = Field::rationals();
        let m = Matrix::from_i64s(&q, 2, 3, &[1, 2, 3, 2, 4, 6]);
        assert_eq!(m.rank(), 1);
        let ker = m.kernel();
        assert_eq!(ker.cols(), 2);
        assert!((&m * &ker).is_zero());
    }

    #[test]
    fn kronecker_mixed_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let k = Field::prime(5).unwrap();
        let (a, b) = (
            random_matrix(&k, 2, &mut rng),
            random_matrix(&k, 3, &mut rng),
        );
        let (c, d) = (
            random_matrix(&k, 2, &mut rng),
            random_matrix(&k, 3, &mut rng),
        );
        let lhs = &a.kronecker(&b).unwrap() * &c.kronecker(&d).unwrap();
        let rhs = (&a * &c).kronecker(&(&b * &d)).unwrap();
        assert_eq!(lhs, rhs);
        let det = a.kronecker(&b).unwrap().det().unwrap();
        assert_eq!(
            det,
            a.det().unwrap().pow(3).unwrap() * b.det().unwrap().pow(2).unwrap()
        );
    }

    #[test]
    fn bareiss_agrees_with_pointwise_det() {
        let q = Field::rationals();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = random_matrix(&q, 3, &mut rng);
        let b = random_matrix(&q, 3, &mut rng);
        let pm = PolyMatrix::linear(&a, &b).unwrap();
        let d = pm.det();
        for t in -2..=2 {
            let tt = q.from_i64(t);
            assert_eq!(d.eval(&tt).unwrap(), pm.eval(&tt).unwrap().det().unwrap());
        }
    }
}
