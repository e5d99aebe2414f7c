//! Acceptance gate: each numbered criterion prints one PASS/FAIL line and
//! the process exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mkt_core::algebra::{is_irreducible, norm_element};
use mkt_core::goodwillie::random::{
    random_homotopy, random_invertible, random_nonzero_entry, HomotopyKind,
};
use mkt_core::goodwillie::{composition_series, phi, MatrixTuple};
use mkt_core::joint_det::{
    axioms_check, hilbert, hilbert_support, make_determinant, DeterminantSpec, DeterminantValue,
    HilbertPlace,
};
use mkt_core::symbols::key_relation_instance;
use mkt_core::transfer::{projection_formula_holds, transfer_milnor};
use mkt_core::valuations::{reciprocity_check, Valuation};
use mkt_core::{
    canonical_class, Elem, Field, FunctionFieldSymbol, Matrix, MilnorExpression, Poly,
    RationalFunction, Result,
};

const FINITE_PAIRS: [(u64, usize); 6] = [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2)];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome {
        pass,
        detail: detail.into(),
    })
}

fn sym(entries: &[Elem]) -> MilnorExpression {
    MilnorExpression::symbol(entries).expect("nonzero entries")
}

fn random_monic<R: Rng>(k: &Field, deg: usize, rng: &mut R) -> Poly {
    let mut c: Vec<Elem> = (0..deg).map(|_| k.random(rng)).collect();
    c.push(k.one());
    Poly::new(k, &c).expect("coefficients in k")
}

fn random_irreducible<R: Rng>(k: &Field, max_deg: usize, rng: &mut R) -> Poly {
    loop {
        let d = rng.gen_range(1..=max_deg);
        let f = random_monic(k, d, rng);
        if is_irreducible(&f).expect("finite field") {
            return f;
        }
    }
}

fn extension_place(q: u64, d: usize) -> Valuation {
    let l = Field::finite(q, d).unwrap();
    Valuation::finite(&l.modulus().unwrap()).expect("the modulus is irreducible")
}

fn random_rational<R: Rng>(rng: &mut R, bound: i64) -> BigRational {
    loop {
        let n: i64 = rng.gen_range(-bound..=bound);
        let d: i64 = rng.gen_range(1..=bound);
        if n != 0 {
            return BigRational::new(BigInt::from(n), BigInt::from(d));
        }
    }
}

fn q_elem(r: &BigRational) -> Elem {
    Field::rationals().rational(r.clone()).unwrap()
}

fn c1_weil_reciprocity() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut trials = 0;
    let mut bad = 0;
    for q in [2u64, 3, 5, 9] {
        let k = Field::galois(q)?;
        for l in 1..=2usize {
            for _ in 0..200 {
                let mut polys: Vec<Poly> = Vec::new();
                while polys.len() <= l {
                    let f = random_irreducible(&k, 4, &mut rng);
                    if !polys.contains(&f) {
                        polys.push(f);
                    }
                }
                let entries: Vec<RationalFunction> =
                    polys.iter().map(RationalFunction::from_poly).collect();
                let w = FunctionFieldSymbol::symbol(&entries)?;
                trials += 1;
                if !reciprocity_check(&w)?.holds() {
                    bad += 1;
                }
            }
        }
    }
    outcome(bad == 0, format!("{trials} symbols, {bad} nonzero sums"))
}

fn c2_norm_oracle() -> Result<Outcome> {
    let mut checked = 0;
    let mut bad = 0;
    for (q, d) in FINITE_PAIRS {
        let v = extension_place(q, d);
        let kv = v.residue_field().clone();
        for u in kv.elements().unwrap().into_iter().filter(|u| !u.is_zero()) {
            let n = transfer_milnor(&v, &sym(std::slice::from_ref(&u)))?;
            let want = sym(&[norm_element(&u, v.base_field())?]);
            checked += 1;
            if canonical_class(&n)? != canonical_class(&want)? {
                bad += 1;
            }
        }
    }
    outcome(bad == 0, format!("{checked} units, {bad} mismatches"))
}

fn c3_finite_k2_vanishing() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let mut bad = 0;
    for (q, d) in FINITE_PAIRS {
        let v = extension_place(q, d);
        let kv = v.residue_field().clone();
        for _ in 0..100 {
            let x = sym(&[kv.random_nonzero(&mut rng), kv.random_nonzero(&mut rng)]);
            if !canonical_class(&transfer_milnor(&v, &x)?)?.is_zero() {
                bad += 1;
            }
        }
    }
    outcome(bad == 0, format!("600 symbols, {bad} nonzero"))
}

fn c4_k2_of_q() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let q = Field::rationals();
    let mut bad_steinberg = 0;
    for _ in 0..100 {
        let a = loop {
            let a = q_elem(&random_rational(&mut rng, 1000));
            if !a.is_one() {
                break a;
            }
        };
        let s1 = sym(&[a.clone(), &q.one() - &a]);
        let s2 = sym(&[a.clone(), -&a]);
        if !canonical_class(&s1)?.is_zero() || !canonical_class(&s2)?.is_zero() {
            bad_steinberg += 1;
        }
    }
    let mut bad_add = 0;
    for _ in 0..200 {
        let mut r = || q_elem(&random_rational(&mut rng, 200));
        let x = sym(&[r(), r()]);
        let y = sym(&[r(), r()]);
        let sum = canonical_class(&x.checked_add(&y)?)?;
        if sum != canonical_class(&x)?.combine(&canonical_class(&y)?)? {
            bad_add += 1;
        }
    }
    outcome(
        bad_steinberg == 0 && bad_add == 0,
        format!("steinberg failures {bad_steinberg}/100, additivity failures {bad_add}/200"),
    )
}

fn c5_key_relation() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let q = Field::rationals();
    let target = canonical_class(&sym(&[-q.one(), -q.one()]))?;
    let mut bad = 0;
    let mut done = 0;
    while done < 100 {
        let xs: Vec<Elem> = (0..3)
            .map(|_| q_elem(&random_rational(&mut rng, 50)))
            .collect();
        if xs[0] == xs[1] || xs[1] == xs[2] || xs[0] == xs[2] {
            continue;
        }
        let (lhs, rhs) = key_relation_instance(&xs)?;
        let (cl, cr) = (canonical_class(&lhs)?, canonical_class(&rhs)?);
        if cl != cr || cr != target {
            bad += 1;
        }
        done += 1;
    }
    outcome(bad == 0, format!("100 triples, {bad} failures"))
}

fn c6_hilbert_product() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    let start = Instant::now();
    let mut bad = 0;
    for _ in 0..500 {
        let a = random_rational(&mut rng, 1_000_000);
        let b = random_rational(&mut rng, 1_000_000);
        let mut prod = 1i8;
        for v in hilbert_support(&a, &b) {
            prod *= hilbert(&a, &b, v)?;
        }
        if prod != 1 {
            bad += 1;
        }
    }
    let t = start.elapsed();
    outcome(
        bad == 0 && t < Duration::from_secs(10),
        format!("500 pairs, {bad} failures, {:.2}s", t.as_secs_f64()),
    )
}

fn c7_phi_anchors() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let q = Field::rationals();
    let f5 = Field::prime(5)?;
    let mut bad_det = 0;
    for k in [&q, &f5] {
        for _ in 0..100 {
            let n = rng.gen_range(1..=4);
            let a = random_invertible(k, n, &mut rng);
            let want = canonical_class(&sym(&[a.det()?]))?;
            if phi(&MatrixTuple::from_matrices(vec![a])?)? != want {
                bad_det += 1;
            }
        }
    }
    let mut bad_jordan = 0;
    for _ in 0..20 {
        let a = q.random_nonzero(&mut rng);
        let b = q.random_nonzero(&mut rng);
        let j = Matrix::from_rows(&q, &[vec![a.clone(), q.one()], vec![q.zero(), a.clone()]])?;
        let x = MatrixTuple::from_matrices(vec![j, Matrix::scalar(&q, 2, &b)])?;
        if phi(&x)? != canonical_class(&sym(&[a, b]).scale(2))? {
            bad_jordan += 1;
        }
    }
    let mut bad_elem = 0;
    for k in [&q, &f5] {
        for _ in 0..20 {
            let n = rng.gen_range(2..=4);
            let i = rng.gen_range(0..n);
            let j = (i + rng.gen_range(1..n)) % n;
            let mut e = Matrix::identity(k, n);
            e.set(i, j, &random_nonzero_entry(k, &mut rng));
            if !phi(&MatrixTuple::from_matrices(vec![e])?)?.is_zero() {
                bad_elem += 1;
            }
        }
    }
    outcome(
        bad_det + bad_jordan + bad_elem == 0,
        format!(
            "determinant {bad_det}/200, Jordan {bad_jordan}/20, elementary {bad_elem}/40 failures"
        ),
    )
}

fn c8_homotopy_invariance() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    let mut bad = Vec::new();
    let mut total = 0;
    let mut nontrivial = 0;
    for k in [Field::rationals(), Field::prime(5)?] {
        for kind in HomotopyKind::ALL {
            for _ in 0..50 {
                let l = rng.gen_range(kind.min_weight()..=3);
                let h = random_homotopy(kind, &k, l, &mut rng)?;
                let b = h.boundary()?;
                total += 1;
                let one = phi(&b.at_one)?;
                if !one.is_zero() {
                    nontrivial += 1;
                }
                if one != phi(&b.at_zero)? {
                    bad.push(format!("{kind:?}/{k}"));
                }
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!("{total} homotopies ({nontrivial} with nonzero endpoint class), failures {bad:?}"),
    )
}

fn c9_real_sign() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    let q = Field::rationals();
    let mut anchors = Vec::new();
    for l in 2..=4 {
        let d = make_determinant(&q, l, DeterminantSpec::RealSign)?;
        let x = MatrixTuple::scalars(&q, &vec![-q.one(); l])?;
        anchors.push(d.evaluate(&x)? == DeterminantValue::Sign(-1));
    }
    let mut bad = 0;
    for _ in 0..100 {
        let l = rng.gen_range(1..=4);
        let n = rng.gen_range(1..=3);
        let mut mats = Vec::with_capacity(l);
        for _ in 0..l {
            let mut m = Matrix::zero(&q, n, n);
            for i in 0..n {
                m.set(i, i, &q_elem(&random_rational(&mut rng, 9)));
            }
            mats.push(m);
        }
        let s = random_invertible(&q, n, &mut rng);
        let x = MatrixTuple::from_matrices(mats)?.conjugate(&s)?;
        let negative_factors: usize = composition_series(&x)?
            .iter()
            .filter(|f| f.extension.is_rationals() && f.scalars.iter().all(|a| a.is_negative()))
            .map(|f| f.multiplicity)
            .sum();
        let rule = if negative_factors % 2 == 1 { -1 } else { 1 };
        let d = make_determinant(&q, l, DeterminantSpec::RealSign)?;
        if d.evaluate(&x)? != DeterminantValue::Sign(rule) {
            bad += 1;
        }
    }
    outcome(
        anchors.iter().all(|&a| a) && bad == 0,
        format!("anchors l=2,3,4 {anchors:?}, parity-rule failures {bad}/100"),
    )
}

fn c10_axioms() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(110);
    let q = Field::rationals();
    let f7 = Field::prime(7)?;
    let places = vec![
        HilbertPlace::Infinity,
        HilbertPlace::Prime(3),
        HilbertPlace::Prime(5),
    ];
    let dets = [
        make_determinant(&q, 2, DeterminantSpec::RealSign)?,
        make_determinant(&q, 2, DeterminantSpec::RationalHilbert(places))?,
        make_determinant(&f7, 2, DeterminantSpec::FiniteFieldTrivial)?,
    ];
    let mut parts = Vec::new();
    let mut clean = true;
    for d in &dets {
        let r = axioms_check(d, 100, &mut rng)?;
        clean &= r.is_clean();
        parts.push(format!(
            "{:?}: {} checks, {} violations",
            d.spec(),
            r.checked,
            r.violations.len()
        ));
    }
    outcome(clean, parts.join("; "))
}

fn c11_projection_formula() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(111);
    let q = Field::rationals();
    let mut fields: Vec<Field> = FINITE_PAIRS
        .iter()
        .map(|&(p, d)| Field::finite(p, d))
        .collect::<Result<_>>()?;
    for m in [
        &[-2i64, 0, 1][..],
        &[1, 1, 1],
        &[-2, 0, 0, 1],
        &[1, -1, 0, 1],
    ] {
        fields.push(Field::extension(&q, &Poly::from_i64s(&q, m))?);
    }
    let mut bad = 0;
    let mut total = 0;
    for l in &fields {
        let k = l.base().expect("proper extension").clone();
        for _ in 0..50 {
            let z = sym(&[random_nonzero_entry(&k, &mut rng)]);
            let w = sym(&[l.random_nonzero(&mut rng)]);
            total += 1;
            if !projection_formula_holds(&z, &w)? {
                bad += 1;
            }
        }
    }
    outcome(
        bad == 0,
        format!(
            "{total} pairs over {} extensions, {bad} failures",
            fields.len()
        ),
    )
}

type Criterion = (&'static str, fn() -> Result<Outcome>);

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("Weil reciprocity over F_q(X)", c1_weil_reciprocity),
        ("K_1 transfer equals the norm", c2_norm_oracle),
        ("K_2 of finite fields vanishes", c3_finite_k2_vanishing),
        ("K_2(Q) canonical classes", c4_k2_of_q),
        ("cyclic difference identity", c5_key_relation),
        ("Hilbert product formula", c6_hilbert_product),
        ("phi anchors", c7_phi_anchors),
        ("homotopy invariance", c8_homotopy_invariance),
        ("real sign determinant", c9_real_sign),
        ("joint determinant axioms", c10_axioms),
        ("projection formula", c11_projection_formula),
    ];
    let mut failed = 0;
    let total_start = Instant::now();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = match run() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let elapsed = start.elapsed().as_secs_f64();
        let mut pass = pass;
        if i == 0 && elapsed >= 60.0 {
            pass = false;
        }
        if !pass {
            failed += 1;
        }
        println!(
            "[{}] {:>2}. {name}: {detail} ({elapsed:.2}s)",
            if pass { "PASS" } else { "FAIL" },
            i + 1
        );
    }
    println!(
        "acceptance: {}/{} criteria passed in {:.2}s",
        criteria.len() - failed,
        criteria.len(),
        total_start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
