//! Random commuting tuples for property checks.
//!
//! Over finite fields the matrices are polynomials in one random matrix.
//! Over `Q` they are simultaneously block-triangularizable with rational
//! eigenvalues, so every minimal polynomial met by the composition series
//! splits over `Q`.

use rand::Rng;

use super::{h_mult, h_shear, h_steinberg, h_swap, MatrixTuple, PolyMatrixTuple};
use crate::algebra::{Elem, Field, Matrix, Poly};
use crate::error::{Error, Result};

fn small_int<R: Rng + ?Sized>(k: &Field, rng: &mut R, nonzero: bool) -> Elem {
    loop {
        let v: i64 = rng.gen_range(-4..=4);
        if !nonzero || v != 0 {
            return k.from_i64(v);
        }
    }
}

/// An entry: uniform over finite fields, a small integer over `Q`.
pub fn random_entry<R: Rng + ?Sized>(k: &Field, rng: &mut R) -> Elem {
    if k.is_finite() {
        k.random(rng)
    } else {
        small_int(k, rng, false)
    }
}

pub fn random_nonzero_entry<R: Rng + ?Sized>(k: &Field, rng: &mut R) -> Elem {
    if k.is_finite() {
        k.random_nonzero(rng)
    } else {
        small_int(k, rng, true)
    }
}

pub fn random_matrix<R: Rng + ?Sized>(k: &Field, n: usize, rng: &mut R) -> Matrix {
    let entries: Vec<Elem> = (0..n * n).map(|_| random_entry(k, rng)).collect();
    Matrix::new(k, n, n, &entries).expect("entries live in k")
}

pub fn random_invertible<R: Rng + ?Sized>(k: &Field, n: usize, rng: &mut R) -> Matrix {
    loop {
        let m = random_matrix(k, n, rng);
        if m.is_invertible() {
            return m;
        }
    }
}

/// A `1 x 1` tuple of random nonzero scalars.
pub fn random_scalar_tuple<R: Rng + ?Sized>(k: &Field, l: usize, rng: &mut R) -> MatrixTuple {
    let vals: Vec<Elem> = (0..l).map(|_| random_nonzero_entry(k, rng)).collect();
    MatrixTuple::scalars(k, &vals).expect("nonzero scalars")
}

/// `l` commuting invertible `n x n` matrices.
pub fn random_commuting_tuple<R: Rng + ?Sized>(
    k: &Field,
    n: usize,
    l: usize,
    rng: &mut R,
) -> Result<MatrixTuple> {
    if k.is_finite() {
        random_polynomial_tuple(k, n, l, rng)
    } else {
        random_split_tuple(k, n, l, rng)
    }
}

fn random_polynomial_tuple<R: Rng + ?Sized>(
    k: &Field,
    n: usize,
    l: usize,
    rng: &mut R,
) -> Result<MatrixTuple> {
    let m = random_matrix(k, n, rng);
    let mut mats = Vec::with_capacity(l);
    while mats.len() < l {
        let coeffs: Vec<Elem> = (0..n.max(1)).map(|_| k.random(rng)).collect();
        let a = m.eval_poly(&Poly::new(k, &coeffs)?)?;
        if a.is_invertible() {
            mats.push(a);
        }
    }
    MatrixTuple::new(k, n, mats)
}

fn random_split_tuple<R: Rng + ?Sized>(
    k: &Field,
    n: usize,
    l: usize,
    rng: &mut R,
) -> Result<MatrixTuple> {
    let mut sizes = Vec::new();
    let mut left = n;
    while left > 0 {
        let s = rng.gen_range(1..=left.min(2));
        sizes.push(s);
        left -= s;
    }
    let s = random_invertible(k, n, rng);
    let s_inv = s.inverse()?;
    let mut mats = Vec::with_capacity(l);
    for _ in 0..l {
        let mut d = Matrix::zero(k, n, n);
        let mut at = 0;
        for &size in &sizes {
            let lambda = small_int(k, rng, true);
            let nil = random_entry(k, rng);
            for i in 0..size {
                d.set(at + i, at + i, &lambda);
                if i + 1 < size {
                    d.set(at + i, at + i + 1, &nil);
                }
            }
            at += size;
        }
        mats.push(s.checked_mul(&d)?.checked_mul(&s_inv)?);
    }
    MatrixTuple::new(k, n, mats)
}

/// The four families of explicit homotopies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HomotopyKind {
    Mult,
    Swap,
    Shear,
    Steinberg,
}

impl HomotopyKind {
    pub const ALL: [HomotopyKind; 4] = [
        HomotopyKind::Mult,
        HomotopyKind::Swap,
        HomotopyKind::Shear,
        HomotopyKind::Steinberg,
    ];

    /// Smallest weight at which the family exists.
    pub fn min_weight(self) -> usize {
        match self {
            HomotopyKind::Mult | HomotopyKind::Shear => 1,
            HomotopyKind::Swap | HomotopyKind::Steinberg => 2,
        }
    }
}

fn steinberg_parameter<R: Rng + ?Sized>(k: &Field, rng: &mut R) -> Elem {
    loop {
        let a = random_nonzero_entry(k, rng);
        if !a.is_one() {
            return a;
        }
    }
}

/// A random weight-`l` instance of the given family; fails with
/// `DegenerateInput` when `l` is below the family's minimum or the field
/// is too small (Steinberg over `F_2`).
pub fn random_homotopy<R: Rng + ?Sized>(
    kind: HomotopyKind,
    k: &Field,
    l: usize,
    rng: &mut R,
) -> Result<PolyMatrixTuple> {
    if l < kind.min_weight() {
        return Err(Error::DegenerateInput(format!(
            "{kind:?} needs weight at least {}",
            kind.min_weight()
        )));
    }
    let n = rng.gen_range(1..=2);
    match kind {
        HomotopyKind::Mult => {
            let x = random_commuting_tuple(k, n, l + 1, rng)?;
            let m = x.matrices();
            h_mult(&m[0], &m[1], &m[2..])
        }
        HomotopyKind::Swap => {
            let x = random_commuting_tuple(k, n, l, rng)?;
            let i = rng.gen_range(0..l);
            let j = (i + rng.gen_range(1..l)) % l;
            h_swap(&x, i, j)
        }
        HomotopyKind::Shear => {
            let m = rng.gen_range(1..=2);
            let a = random_invertible(k, n, rng);
            let b = random_invertible(k, m, rng);
            let entries: Vec<Elem> = (0..n * m).map(|_| random_entry(k, rng)).collect();
            let c = Matrix::new(k, n, m, &entries)?;
            let scalars: Vec<Elem> = (1..l).map(|_| random_nonzero_entry(k, rng)).collect();
            h_shear(&a, &b, &c, &scalars)
        }
        HomotopyKind::Steinberg => {
            if k.order().is_some_and(|q| *q == 2u32.into()) {
                return Err(Error::DegenerateInput(
                    "F_2 has no entry outside {0, 1}".into(),
                ));
            }
            let a = steinberg_parameter(k, rng);
            let b = steinberg_parameter(k, rng);
            let scalars: Vec<Elem> = (2..l).map(|_| random_nonzero_entry(k, rng)).collect();
            h_steinberg(&a, &b, &scalars)
        }
    }
}
