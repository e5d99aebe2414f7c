//! Randomized property suites. Trial `i` draws from a ChaCha8 stream
//! seeded with `seed + i`, so trials are independent and the merged report
//! depends only on the arguments.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use mkt_core::algebra::{is_irreducible, norm_element};
use mkt_core::goodwillie::random::{
    random_commuting_tuple, random_homotopy, random_nonzero_entry, HomotopyKind,
};
use mkt_core::goodwillie::{gw_relations_check, phi};
use mkt_core::joint_det::{
    axioms_check, hilbert, hilbert_support, make_determinant, DeterminantSpec,
};
use mkt_core::symbols::key_relation_instance;
use mkt_core::transfer::{projection_formula_holds, transfer_milnor};
use mkt_core::valuations::{reciprocity_check, Valuation};
use mkt_core::{
    canonical_class, Elem, Field, FunctionFieldSymbol, MilnorExpression, Poly, RationalFunction,
    Result,
};

use crate::commands::{determinant_spec, spec_name};
use crate::error::CliError;
use crate::json::{field_json, parse_field_flag};
use crate::{CheckArgs, Report, Suite};

/// Everything a trial needs, resolved and validated before any trial runs.
struct Setup {
    k: Field,
    l: usize,
    /// Place whose residue field is the chosen extension of `k`.
    place: Option<Valuation>,
    spec: Option<DeterminantSpec>,
    kinds: Vec<HomotopyKind>,
}

enum Trial {
    Pass,
    Fail(String),
}

fn check(ok: bool, detail: impl FnOnce() -> String) -> Trial {
    if ok {
        Trial::Pass
    } else {
        Trial::Fail(detail())
    }
}

fn suite_name(s: Suite) -> &'static str {
    match s {
        Suite::Reciprocity => "reciprocity",
        Suite::Norm => "norm",
        Suite::Vanishing => "vanishing",
        Suite::Hilbert => "hilbert",
        Suite::Homotopy => "homotopy",
        Suite::Relations => "relations",
        Suite::Axioms => "axioms",
        Suite::Projection => "projection",
        Suite::KeyRelation => "key-relation",
    }
}

fn unsupported(msg: impl Into<String>) -> CliError {
    CliError::Lib(mkt_core::Error::UnsupportedCombination(msg.into()))
}

fn base_field(args: &CheckArgs) -> std::result::Result<Field, CliError> {
    match (args.q, args.field.as_deref()) {
        (Some(_), Some(_)) => Err(CliError::Parse(
            "pass either --q or --field, not both".into(),
        )),
        (Some(q), None) => Ok(Field::galois(q)?),
        (None, Some(f)) => parse_field_flag(f),
        (None, None) if matches!(args.suite, Suite::Hilbert | Suite::KeyRelation) => {
            Ok(Field::rationals())
        }
        (None, None) => Err(CliError::Parse("this suite needs --q or --field".into())),
    }
}

fn small_int<R: Rng>(rng: &mut R) -> i64 {
    rng.gen_range(-3..=3)
}

fn random_coefficient<R: Rng>(k: &Field, rng: &mut R) -> Elem {
    if k.is_finite() {
        k.random(rng)
    } else {
        k.from_i64(small_int(rng))
    }
}

/// Random monic irreducible of degree `1..=max_deg`; rational coefficients
/// stay in `[-3, 3]`.
fn random_irreducible<R: Rng>(k: &Field, max_deg: usize, rng: &mut R) -> Result<Poly> {
    loop {
        let deg = rng.gen_range(1..=max_deg);
        let mut c: Vec<Elem> = (0..deg).map(|_| random_coefficient(k, rng)).collect();
        c.push(k.one());
        let f = Poly::new(k, &c)?;
        if is_irreducible(&f)? {
            return Ok(f);
        }
    }
}

fn irreducible_of_degree<R: Rng>(k: &Field, deg: usize, rng: &mut R) -> Result<Poly> {
    loop {
        let f = random_irreducible(k, deg, rng)?;
        if f.degree() == Some(deg) {
            return Ok(f);
        }
    }
}

fn random_rational<R: Rng>(rng: &mut R, bound: i64) -> BigRational {
    loop {
        let n = rng.gen_range(-bound..=bound);
        if n != 0 {
            return BigRational::new(BigInt::from(n), BigInt::from(rng.gen_range(1..=bound)));
        }
    }
}

fn setup(args: &CheckArgs) -> std::result::Result<Setup, CliError> {
    let k = base_field(args)?;
    let mut s = Setup {
        k: k.clone(),
        l: args.l,
        place: None,
        spec: None,
        kinds: Vec::new(),
    };
    let needs_extension = matches!(
        args.suite,
        Suite::Norm | Suite::Vanishing | Suite::Projection
    );
    match args.suite {
        Suite::Reciprocity if args.l == 0 => return Err(unsupported("reciprocity needs l >= 1")),
        Suite::Vanishing if !k.is_finite() || args.l < 2 => {
            return Err(unsupported("vanishing runs over finite fields with l >= 2"))
        }
        Suite::Hilbert if !k.is_rationals() => {
            return Err(unsupported("the Hilbert suite runs over Q"))
        }
        Suite::KeyRelation if args.l == 0 => return Err(unsupported("key-relation needs l >= 1")),
        Suite::Homotopy => {
            let tiny = k.order().is_some_and(|q| *q == 2u32.into());
            s.kinds = HomotopyKind::ALL
                .into_iter()
                .filter(|h| args.l >= h.min_weight())
                .filter(|h| !(tiny && *h == HomotopyKind::Steinberg))
                .collect();
            if s.kinds.is_empty() {
                return Err(unsupported("no homotopy family exists at this weight"));
            }
        }
        Suite::Axioms => {
            let spec = determinant_spec(args.spec, args.places.as_deref())?;
            make_determinant(&k, args.l, spec.clone())?;
            s.spec = Some(spec);
        }
        _ => {}
    }
    if needs_extension {
        if args.deg < 2 {
            return Err(unsupported("--deg must be at least 2"));
        }
        if k.is_rationals() && args.suite == Suite::Vanishing {
            return Err(unsupported("vanishing runs over finite fields"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        let pi = irreducible_of_degree(&k, args.deg, &mut rng)?;
        s.place = Some(Valuation::finite(&pi)?);
    }
    Ok(s)
}

fn sym(entries: &[Elem]) -> Result<MilnorExpression> {
    MilnorExpression::symbol(entries)
}

fn trial(suite: Suite, s: &Setup, i: usize, rng: &mut ChaCha8Rng) -> Result<Trial> {
    let k = &s.k;
    match suite {
        Suite::Reciprocity => {
            let mut polys: Vec<Poly> = Vec::new();
            let max_deg = if k.is_finite() { 4 } else { 2 };
            while polys.len() <= s.l {
                let f = random_irreducible(k, max_deg, rng)?;
                if !polys.contains(&f) {
                    polys.push(f);
                }
            }
            let c = random_nonzero_entry(k, rng);
            let mut entries: Vec<RationalFunction> =
                polys.iter().map(RationalFunction::from_poly).collect();
            entries[0] = entries[0].checked_mul(&RationalFunction::constant(&c))?;
            let w = FunctionFieldSymbol::symbol(&entries)?;
            let r = reciprocity_check(&w)?;
            Ok(check(r.holds(), || format!("sum class {}", r.class)))
        }
        Suite::Norm => {
            let v = s.place.as_ref().expect("validated");
            let u = v.residue_field().random_nonzero(rng);
            let got = canonical_class(&transfer_milnor(v, &sym(std::slice::from_ref(&u))?)?)?;
            let want = canonical_class(&sym(&[norm_element(&u, k)?])?)?;
            Ok(check(got == want, || {
                format!("N({u}): transfer {got}, norm {want}")
            }))
        }
        Suite::Vanishing => {
            let v = s.place.as_ref().expect("validated");
            let entries: Vec<Elem> = (0..s.l)
                .map(|_| v.residue_field().random_nonzero(rng))
                .collect();
            let c = canonical_class(&transfer_milnor(v, &sym(&entries)?)?)?;
            Ok(check(c.is_zero(), || format!("class {c}")))
        }
        Suite::Hilbert => {
            let a = random_rational(rng, 1_000_000);
            let b = random_rational(rng, 1_000_000);
            let mut prod = 1i8;
            for v in hilbert_support(&a, &b) {
                prod *= hilbert(&a, &b, v)?;
            }
            Ok(check(prod == 1, || {
                format!("product over places of ({a},{b}) is {prod}")
            }))
        }
        Suite::Homotopy => {
            let kind = s.kinds[i % s.kinds.len()];
            let b = random_homotopy(kind, k, s.l, rng)?.boundary()?;
            let (one, zero) = (phi(&b.at_one)?, phi(&b.at_zero)?);
            Ok(check(one == zero, || {
                format!("{kind:?}: t=1 gives {one}, t=0 gives {zero}")
            }))
        }
        Suite::Relations => {
            let x = random_commuting_tuple(k, rng.gen_range(1..=3), s.l, rng)?;
            let r = gw_relations_check(&x, rng)?;
            Ok(check(r.is_clean(), || r.violations.join(", ")))
        }
        Suite::Axioms => {
            let d = make_determinant(k, s.l, s.spec.clone().expect("validated"))?;
            let r = axioms_check(&d, 1, rng)?;
            Ok(check(r.is_clean(), || r.violations.join(", ")))
        }
        Suite::Projection => {
            let v = s.place.as_ref().expect("validated");
            let z = sym(&[random_nonzero_entry(k, rng)])?;
            let w = sym(&[v.residue_field().random_nonzero(rng)])?;
            Ok(check(projection_formula_holds(&z, &w)?, || {
                "classes differ".into()
            }))
        }
        Suite::KeyRelation => {
            let xs = loop {
                let xs: Vec<Elem> = (0..=s.l).map(|_| random_nonzero_entry(k, rng)).collect();
                let distinct = (0..xs.len()).all(|a| (a + 1..xs.len()).all(|b| xs[a] != xs[b]));
                if distinct {
                    break xs;
                }
            };
            let (lhs, rhs) = key_relation_instance(&xs)?;
            let (cl, cr) = (canonical_class(&lhs)?, canonical_class(&rhs)?);
            Ok(check(cl == cr, || format!("left {cl}, right {cr}")))
        }
    }
}

pub fn run(args: &CheckArgs) -> std::result::Result<Report, CliError> {
    let s = setup(args)?;
    let outcomes: Vec<Trial> = (0..args.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed.wrapping_add(i as u64));
            trial(args.suite, &s, i, &mut rng).unwrap_or_else(|e| {
                Trial::Fail(format!("{}: {e}", CliError::Lib(e.clone()).kind()))
            })
        })
        .collect();
    let failures: Vec<Value> = outcomes
        .iter()
        .enumerate()
        .filter_map(|(i, t)| match t {
            Trial::Pass => None,
            Trial::Fail(d) => Some(json!({"trial": i, "detail": d})),
        })
        .collect();
    let passed = args.trials - failures.len();
    let mut body = json!({
        "command": "check",
        "suite": suite_name(args.suite),
        "field": field_json(&s.k),
        "l": s.l,
        "seed": args.seed,
        "trials": args.trials,
        "passed": passed,
        "failed": failures.len(),
        "summary": format!("{passed}/{}", args.trials),
        "failures": failures,
    });
    if let Some(v) = &s.place {
        body["extension"] = field_json(v.residue_field());
    }
    if let Some(spec) = &s.spec {
        body["spec"] = spec_name(spec);
    }
    Ok(Report {
        violated: passed != args.trials,
        body,
    })
}
