//! Univariate factorization over finite fields (any tower) and over `Q`.
//!
//! Finite fields: squarefree decomposition, distinct-degree splitting, then
//! randomized equal-degree splitting (Cantor–Zassenhaus, with the trace map in
//! characteristic 2). `Q`: content removal, Yun squarefree decomposition,
//! rational-root stripping, then factorization modulo one prime larger than
//! twice the coefficient bound followed by subset recombination.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::{Elem, Field, FieldKind, Value};
use super::poly::Poly;
use crate::error::{Error, Result};

/// Seed used by [`factor`] when no generator is supplied.
pub const DEFAULT_FACTOR_SEED: u64 = 0x6d6b_745f_6661_6374;

/// `unit * prod(factor^multiplicity)`, factors monic irreducible and distinct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Elem,
    pub factors: Vec<(Poly, usize)>,
}

impl Factorization {
    /// Multiplies the factorization back out.
    pub fn expand(&self) -> Poly {
        let mut acc = Poly::constant(&self.unit);
        for (f, e) in &self.factors {
            acc = &acc * &f.pow(*e as u32);
        }
        acc
    }
}

pub fn factor(f: &Poly) -> Result<Factorization> {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_FACTOR_SEED);
    factor_with_rng(f, &mut rng)
}

pub fn factor_with_rng<R: Rng + ?Sized>(f: &Poly, rng: &mut R) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let k = f.field();
    let unit = f.leading();
    let monic = f.monic();
    let mut factors = match f.degree() {
        Some(0) => Vec::new(),
        Some(1) => vec![(monic, 1)],
        _ if k.is_finite() => factor_finite(&monic, rng),
        _ if k.is_rationals() => factor_rational_monic(&monic)?,
        _ => {
            return Err(Error::UnsupportedFactorization(format!(
                "polynomials over the number field {k} of degree above 1"
            )))
        }
    };
    factors.sort();
    Ok(Factorization { unit, factors })
}

/// Whether a polynomial of positive degree is irreducible.
pub fn is_irreducible(f: &Poly) -> Result<bool> {
    match f.degree() {
        None | Some(0) => Ok(false),
        Some(1) => Ok(true),
        Some(_) if f.field().is_finite() => Ok(rabin_irreducible(&f.monic())),
        Some(_) => {
            let fac = factor(f)?;
            Ok(fac.factors.len() == 1 && fac.factors[0].1 == 1)
        }
    }
}

/// Lexicographically first monic irreducible of degree `d` over a finite field.
pub(crate) fn first_irreducible(k: &Field, d: usize) -> Result<Poly> {
    let elems = k
        .elements()
        .ok_or_else(|| Error::UnsupportedField(format!("{k} is too large to enumerate")))?;
    let q = elems.len();
    let mut counter = vec![0usize; d];
    loop {
        let mut coeffs: Vec<Elem> = counter.iter().map(|&i| elems[i].clone()).collect();
        coeffs.push(k.one());
        let f = Poly::new(k, &coeffs)?;
        if !coeffs[0].is_zero() && rabin_irreducible(&f) {
            return Ok(f);
        }
        let mut i = 0;
        loop {
            if i == d {
                return Err(Error::InvariantViolated(
                    "no irreducible polynomial found".into(),
                ));
            }
            counter[i] += 1;
            if counter[i] < q {
                break;
            }
            counter[i] = 0;
            i += 1;
        }
    }
}

// ----- finite fields -----

fn frobenius_power(x_pow: &Poly, q: &BigUint, m: &Poly) -> Poly {
    x_pow.powmod(q, m).expect("same field")
}

fn rabin_irreducible(f: &Poly) -> bool {
    let n = f.degree().expect("nonzero");
    let k = f.field();
    let q = k.order().expect("finite").clone();
    let x = Poly::x(k).rem(f).unwrap();
    let primes: Vec<usize> = num_prime::nt_funcs::factorize64(n as u64)
        .keys()
        .map(|&r| r as usize)
        .collect();
    let mut powers = Vec::with_capacity(n + 1);
    powers.push(x.clone());
    for _ in 0..n {
        let next = frobenius_power(powers.last().unwrap(), &q, f);
        powers.push(next);
    }
    if powers[n] != x {
        return false;
    }
    primes
        .iter()
        .all(|r| (&powers[n / r] - &x).gcd(f).unwrap().is_one())
}

fn pth_root_poly(f: &Poly) -> Poly {
    let k = f.field();
    let p = k.characteristic() as usize;
    let vals: Vec<Value> = f
        .values()
        .iter()
        .step_by(p)
        .map(|c| k.pth_root_v(c))
        .collect();
    Poly::from_values(k, vals)
}

fn squarefree_finite(f: &Poly) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    if f.is_constant() {
        return out;
    }
    let p = f.field().characteristic() as usize;
    let fd = f.derivative();
    if fd.is_zero() {
        for (g, m) in squarefree_finite(&pth_root_poly(f)) {
            out.push((g, m * p));
        }
        return out;
    }
    let mut c = f.gcd(&fd).unwrap();
    let mut w = f.exact_div(&c).unwrap();
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c).unwrap();
        let z = w.exact_div(&y).unwrap();
        if !z.is_one() {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.exact_div(&w).unwrap();
    }
    if !c.is_one() {
        for (g, m) in squarefree_finite(&pth_root_poly(&c)) {
            out.push((g, m * p));
        }
    }
    out
}

fn distinct_degree(f: &Poly) -> Vec<(Poly, usize)> {
    let k = f.field();
    let q = k.order().expect("finite").clone();
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = Poly::x(k).rem(&rest).unwrap();
    let mut i = 1;
    while rest.degree().unwrap_or(0) >= 2 * i {
        h = frobenius_power(&h, &q, &rest);
        let g = (&h - &Poly::x(k)).gcd(&rest).unwrap();
        if !g.is_one() {
            rest = rest.exact_div(&g).unwrap();
            h = h.rem(&rest).unwrap();
            out.push((g, i));
        }
        i += 1;
    }
    if rest.degree().unwrap_or(0) > 0 {
        let d = rest.degree().unwrap();
        out.push((rest, d));
    }
    out
}

fn random_poly<R: Rng + ?Sized>(k: &Field, below: usize, rng: &mut R) -> Poly {
    let coeffs: Vec<Elem> = (0..below).map(|_| k.random(rng)).collect();
    Poly::new(k, &coeffs).unwrap()
}

fn equal_degree<R: Rng + ?Sized>(f: &Poly, d: usize, rng: &mut R, out: &mut Vec<Poly>) {
    let n = f.degree().unwrap();
    if n == d {
        out.push(f.monic());
        return;
    }
    let k = f.field();
    let q = k.order().expect("finite").clone();
    let char2 = k.characteristic() == 2;
    loop {
        let r = random_poly(k, n, rng);
        if r.is_constant() {
            continue;
        }
        let candidate = if char2 {
            // trace from F_{q^d} down to F_2 of r
            let steps = k.degree() * d;
            let mut t = r.rem(f).unwrap();
            let mut acc = t.clone();
            for _ in 1..steps {
                t = (&t * &t).rem(f).unwrap();
                acc = &acc + &t;
            }
            acc
        } else {
            let e = (q.pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
            &r.powmod(&e, f).unwrap() - &Poly::one(k)
        };
        let g = candidate.gcd(f).unwrap();
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < n {
            equal_degree(&g, d, rng, out);
            equal_degree(&f.exact_div(&g).unwrap(), d, rng, out);
            return;
        }
    }
}

fn factor_finite<R: Rng + ?Sized>(f: &Poly, rng: &mut R) -> Vec<(Poly, usize)> {
    let mut out: Vec<(Poly, usize)> = Vec::new();
    for (part, mult) in squarefree_finite(f) {
        for (block, d) in distinct_degree(&part) {
            let mut pieces = Vec::new();
            equal_degree(&block, d, rng, &mut pieces);
            for p in pieces {
                match out.iter_mut().find(|(g, _)| *g == p) {
                    Some(entry) => entry.1 += mult,
                    None => out.push((p, mult)),
                }
            }
        }
    }
    out
}

// ----- rationals -----

/// `f = c * F` with `F` primitive in `Z[X]` and positive leading coefficient.
fn primitive_integer(f: &Poly) -> (BigRational, Vec<BigInt>) {
    let coeffs: Vec<BigRational> = f
        .coeffs()
        .iter()
        .map(|c| c.as_rational().expect("rational").clone())
        .collect();
    let lcm = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let mut content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if ints.last().is_some_and(|c| c.is_negative()) {
        content = -content;
    }
    let prim: Vec<BigInt> = ints.iter().map(|c| c / &content).collect();
    (BigRational::new(content, lcm), prim)
}

fn int_poly_to_q(q: &Field, c: &[BigInt]) -> Poly {
    Poly::from_values(
        q,
        c.iter()
            .map(|x| Value::Rational(BigRational::from_integer(x.clone())))
            .collect(),
    )
}

fn yun_squarefree(f: &Poly) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    let fd = f.derivative();
    let b = f.gcd(&fd).unwrap();
    let mut c = f.exact_div(&b).unwrap();
    let mut d = &fd.exact_div(&b).unwrap() - &c.derivative();
    let mut i = 1;
    while !c.is_constant() {
        let a = c.gcd(&d).unwrap();
        c = c.exact_div(&a).unwrap();
        d = &d.exact_div(&a).unwrap() - &c.derivative();
        if !a.is_constant() {
            out.push((a, i));
        }
        i += 1;
    }
    out
}

fn divisors(n: &BigUint) -> Vec<BigUint> {
    let mut divs = vec![BigUint::one()];
    for (p, e) in num_prime::nt_funcs::factorize(n.clone()) {
        let mut next = Vec::with_capacity(divs.len() * (e + 1));
        for d in &divs {
            let mut pk = BigUint::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs
}

const ROOT_SEARCH_LIMIT: u64 = 1_000_000;

fn rational_roots(g: &Poly) -> Vec<BigRational> {
    let (_, ints) = primitive_integer(g);
    let c0 = ints[0].abs().to_biguint().unwrap();
    let lc = ints.last().unwrap().abs().to_biguint().unwrap();
    if c0.is_zero()
        || c0 > BigUint::from(ROOT_SEARCH_LIMIT)
        || lc > BigUint::from(ROOT_SEARCH_LIMIT)
    {
        return Vec::new();
    }
    let q = g.field();
    let mut roots = Vec::new();
    for a in divisors(&c0) {
        for b in divisors(&lc) {
            for sign in [1i32, -1] {
                let r = BigRational::new(
                    BigInt::from(sign) * BigInt::from(a.clone()),
                    b.clone().into(),
                );
                if roots.contains(&r) {
                    continue;
                }
                let e = q.rational(r.clone()).unwrap();
                if g.eval(&e).unwrap().is_zero() {
                    roots.push(r);
                }
            }
        }
    }
    roots
}

fn lift_symmetric(r: u64, p: u64) -> BigInt {
    if r > p / 2 {
        BigInt::from(r) - BigInt::from(p)
    } else {
        BigInt::from(r)
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Factors a squarefree primitive integer polynomial with nonzero constant term.
fn zassenhaus(g: &[BigInt]) -> Result<Vec<Vec<BigInt>>> {
    let n = g.len() - 1;
    if n <= 1 {
        return Ok(vec![g.to_vec()]);
    }
    let norm2: BigUint = g.iter().map(|c| (c * c).to_biguint().unwrap()).sum();
    let bound = (BigUint::one() << n) * (norm2.sqrt() + BigUint::one());
    let lc = g[n].abs().to_biguint().unwrap();
    let needed = BigUint::from(2u32) * &lc * &bound + BigUint::one();
    let start = needed
        .to_u64()
        .filter(|v| *v < (1u64 << 62))
        .ok_or_else(|| {
            Error::UnsupportedFactorization(
                "coefficients too large for single-prime recombination".into(),
            )
        })?;
    let q = Field::rationals();
    let gq = int_poly_to_q(&q, g);
    let mut p = start.max(3);
    let (fp, gp) = loop {
        if num_prime::nt_funcs::is_prime64(p) && (&g[n] % BigInt::from(p)) != BigInt::zero() {
            let fp = Field::prime(p)?;
            let vals: Vec<Value> = g
                .iter()
                .map(|c| Value::Residue(c.mod_floor(&BigInt::from(p)).to_u64().unwrap()))
                .collect();
            let gp = Poly::from_values(&fp, vals);
            if gp.gcd(&gp.derivative())?.is_one() {
                break (fp, gp);
            }
        }
        p += 1;
    };
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_FACTOR_SEED ^ p);
    let mut modular: Vec<Poly> = factor_finite(&gp.monic(), &mut rng)
        .into_iter()
        .map(|(f, _)| f)
        .collect();
    let mut remaining = gq.clone();
    let mut found = Vec::new();
    let mut s = 1;
    while 2 * s <= modular.len() {
        let mut hit = None;
        for subset in combinations(modular.len(), s) {
            let (_, rem_ints) = primitive_integer(&remaining);
            let lc_rem = rem_ints
                .last()
                .unwrap()
                .mod_floor(&BigInt::from(p))
                .to_u64()
                .unwrap();
            let mut prod = Poly::constant(&fp.wrap(Value::Residue(lc_rem)));
            for &i in &subset {
                prod = &prod * &modular[i];
            }
            let lifted: Vec<BigInt> = prod
                .values()
                .iter()
                .map(|v| match v {
                    Value::Residue(r) => lift_symmetric(*r, p),
                    _ => unreachable!(),
                })
                .collect();
            let candidate = int_poly_to_q(&q, &lifted);
            if candidate.is_constant() {
                continue;
            }
            let (_, prim) = primitive_integer(&candidate);
            let h = int_poly_to_q(&q, &prim);
            let (quot, r) = remaining.divrem(&h)?;
            if r.is_zero() {
                hit = Some((subset, prim, quot));
                break;
            }
        }
        match hit {
            Some((subset, prim, quot)) => {
                found.push(prim);
                remaining = quot;
                modular = modular
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, f)| f)
                    .collect();
            }
            None => s += 1,
        }
    }
    if !remaining.is_constant() {
        found.push(primitive_integer(&remaining).1);
    }
    Ok(found)
}

fn factor_rational_monic(f: &Poly) -> Result<Vec<(Poly, usize)>> {
    let q = f.field().clone();
    let mut out: Vec<(Poly, usize)> = Vec::new();
    let mut f = f.clone();
    let mut xpow = 0;
    while f.coeff(0).is_zero() {
        f = f.exact_div(&Poly::x(&q))?;
        xpow += 1;
    }
    if xpow > 0 {
        out.push((Poly::x(&q), xpow));
    }
    for (part, mult) in yun_squarefree(&f) {
        let mut part = part.monic();
        for r in rational_roots(&part) {
            let lin = Poly::linear(&q.rational(r)?);
            part = part.exact_div(&lin)?;
            out.push((lin, mult));
        }
        if part.is_constant() {
            continue;
        }
        let (_, ints) = primitive_integer(&part);
        for g in zassenhaus(&ints)? {
            out.push((int_poly_to_q(&q, &g).monic(), mult));
        }
    }
    Ok(out)
}

/// Whether a field supports [`factor`] for all degrees.
pub fn supports_factorization(k: &Field) -> bool {
    k.is_finite() || matches!(k.kind(), FieldKind::Rationals)
}
