//! Minimal polynomials, norms, and primitive-element presentations of towers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::field::{Elem, Field, Value};
use super::matrix::{first_dependency, Matrix};
use super::poly::Poly;
use crate::error::{Error, Result};

/// Matrix over `k` of multiplication by `x`, in the coordinate basis of `x`'s field over `k`.
pub fn multiplication_matrix(x: &Elem, k: &Field) -> Result<Matrix> {
    let l = x.field();
    let n = l.degree_over(k)?;
    let mut cols = Vec::with_capacity(n);
    for i in 0..n {
        let mut e = vec![k.zero_v(); n];
        e[i] = k.one_v();
        let b = l.assemble_over_v(&e, k)?;
        cols.push(l.coords_over_v(&l.mul_v(&x.value, &b), k)?);
    }
    Ok(Matrix::from_columns(k, n, &cols))
}

/// Monic minimal polynomial over `k` of an element of a tower over `k`.
pub fn minimal_polynomial(x: &Elem, k: &Field) -> Result<Poly> {
    let l = x.field().clone();
    let n = l.degree_over(k)?;
    let start = l.coords_over_v(&l.one_v(), k)?;
    let xv = x.value.clone();
    Ok(first_dependency(k, n, start, |c| {
        let y = l.assemble_over_v(c, k).expect("coordinates");
        l.coords_over_v(&l.mul_v(&y, &xv), k).expect("coordinates")
    }))
}

/// `N_{L/k}(x)`: the determinant of multiplication by `x` over `k`.
pub fn norm_element(x: &Elem, k: &Field) -> Result<Elem> {
    if x.is_zero() {
        return Err(Error::ZeroElement);
    }
    multiplication_matrix(x, k)?.det()
}

/// An isomorphism between a tower `L` over `k` and a simple extension `k[X]/(π)`.
#[derive(Clone, Debug)]
pub struct SimplePresentation {
    tower: Field,
    base: Field,
    simple: Field,
    modulus: Poly,
    /// Columns: coordinates in `L` of the powers of the primitive element.
    to_tower: Matrix,
    to_simple: Matrix,
}

impl SimplePresentation {
    pub fn tower(&self) -> &Field {
        &self.tower
    }

    pub fn simple_field(&self) -> &Field {
        &self.simple
    }

    /// The modulus `π` over `k`.
    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    /// Image of the generator of `k[X]/(π)` in the tower.
    pub fn primitive_element(&self) -> Result<Elem> {
        if self.simple.step_degree() == 1 && self.simple == self.base {
            return Ok(self.tower.one());
        }
        self.to_tower_elem(&self.simple.generator()?)
    }

    fn map(m: &Matrix, from: &Field, to: &Field, base: &Field, x: &Elem) -> Result<Elem> {
        if x.field() != from {
            return Err(Error::DescriptorMismatch);
        }
        let c = from.coords_over_v(&x.value, base)?;
        let img: Vec<Value> = m.apply_values(&c);
        Ok(to.wrap(to.assemble_over_v(&img, base)?))
    }

    pub fn to_simple_elem(&self, x: &Elem) -> Result<Elem> {
        Self::map(&self.to_simple, &self.tower, &self.simple, &self.base, x)
    }

    pub fn to_tower_elem(&self, x: &Elem) -> Result<Elem> {
        Self::map(&self.to_tower, &self.simple, &self.tower, &self.base, x)
    }
}

const PRESENTATION_SEED: u64 = 0x7072_696d;

/// Presents a tower `L ⊇ k` as `k[X]/(π)` via a primitive element.
///
/// Towers of height at most one are returned unchanged. Over `Q` only height
/// at most one is accepted.
pub fn present_as_simple(l: &Field, k: &Field) -> Result<SimplePresentation> {
    let n = l.degree_over(k)?;
    let h = l.height_over(k)?;
    if h <= 1 {
        let modulus = l.modulus().unwrap_or_else(|| Poly::x(k));
        return Ok(SimplePresentation {
            tower: l.clone(),
            base: k.clone(),
            simple: l.clone(),
            modulus,
            to_tower: Matrix::identity(k, n),
            to_simple: Matrix::identity(k, n),
        });
    }
    if !k.is_finite() {
        return Err(Error::UnsupportedTower(format!(
            "{l} has height {h} over {k}; only height one is presented over Q"
        )));
    }
    let mut candidates: Vec<Elem> = Vec::new();
    let mut g = l.generator()?;
    candidates.push(g.clone());
    for f in l.tower().iter().skip(1).rev().skip(1) {
        g = &g + &l.embed(&f.generator()?)?;
        candidates.push(g.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(PRESENTATION_SEED);
    let theta = loop {
        let c = candidates.pop().unwrap_or_else(|| l.random(&mut rng));
        if minimal_polynomial(&c, k)?.degree() == Some(n) {
            break c;
        }
    };
    let modulus = minimal_polynomial(&theta, k)?;
    let simple = Field::extension_unchecked(k, modulus.values().to_vec());
    let mut cols = Vec::with_capacity(n);
    let mut p = l.one();
    for _ in 0..n {
        cols.push(l.coords_over_v(&p.value, k)?);
        p = &p * &theta;
    }
    let to_tower = Matrix::from_columns(k, n, &cols);
    let to_simple = to_tower.inverse()?;
    Ok(SimplePresentation {
        tower: l.clone(),
        base: k.clone(),
        simple,
        modulus,
        to_tower,
        to_simple,
    })
}
