//! Property checks shared by the property tests and the acceptance suite.
#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use hodge_core::arith::{int, rat, rational_roots, UniPoly};
use hodge_core::groebner::{buchberger, MonomialOrder};
use hodge_core::parse::parse_polynomial;
use hodge_core::weyl::{AlgebraSignature, FractionContext, Poly, WeylElement, WeylMonomial};
use hodge_core::Rational;

pub fn runner(cases: u32, deterministic: bool) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    if deterministic {
        TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
    } else {
        TestRunner::new(config)
    }
}

pub fn small_rat() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(a, b)| rat(a, b))
}

pub fn nonzero_rat() -> impl Strategy<Value = Rational> {
    small_rat().prop_filter("nonzero", |r| *r != int(0))
}

pub fn weyl(sig: AlgebraSignature, max_exp: u32, max_terms: usize) -> impl Strategy<Value = WeylElement> {
    let slots = sig.active_slots();
    let term = (prop::collection::vec(0..=max_exp, slots.len()), nonzero_rat());
    prop::collection::vec(term, 1..=max_terms).prop_map(move |terms| {
        let mut out = WeylElement::zero(sig);
        for (exps, c) in terms {
            let mut m = WeylMonomial::one(&sig);
            for (slot, e) in slots.iter().zip(exps) {
                m.0[*slot] = e;
            }
            out.add_term(m, c);
        }
        out
    })
}

pub fn nonzero_weyl(sig: AlgebraSignature, max_exp: u32, max_terms: usize) -> impl Strategy<Value = WeylElement> {
    weyl(sig, max_exp, max_terms).prop_filter("nonzero", |w| !w.is_zero())
}

pub fn poly(n: usize, max_exp: u32, max_terms: usize) -> impl Strategy<Value = Poly> {
    let term = (prop::collection::vec(0..=max_exp, n), nonzero_rat());
    prop::collection::vec(term, 0..=max_terms).prop_map(move |terms| Poly::from_terms(n, terms))
}

type Check = Result<(), String>;

pub fn weyl_associativity(cases: u32, det: bool) -> Check {
    let sig = AlgebraSignature::with_s(2);
    let s = (weyl(sig, 3, 3), weyl(sig, 3, 3), weyl(sig, 3, 3));
    runner(cases, det)
        .run(&s, |(p, q, r)| {
            prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn sharp_additivity(cases: u32, det: bool) -> Check {
    let sig = AlgebraSignature::with_s(2);
    let s = (nonzero_weyl(sig, 3, 3), nonzero_weyl(sig, 3, 3));
    runner(cases, det)
        .run(&s, |(p, q)| {
            let pq = &p * &q;
            prop_assert_eq!(pq.sharp_order().unwrap(), p.sharp_order().unwrap() + q.sharp_order().unwrap());
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn gb_inputs() -> impl Strategy<Value = (Vec<WeylElement>, Vec<usize>)> {
    let sig = AlgebraSignature::plain(1);
    prop::collection::vec(nonzero_weyl(sig, 2, 2), 2..=3).prop_flat_map(|gens| {
        let idx: Vec<usize> = (0..gens.len()).collect();
        (Just(gens), Just(idx).prop_shuffle())
    })
}

fn comm_inputs() -> impl Strategy<Value = (Vec<WeylElement>, Vec<usize>)> {
    let sig = AlgebraSignature::plain(2);
    let p = poly(2, 2, 3).prop_filter("nonzero", |p| !p.is_zero()).prop_map(move |p| WeylElement::from_poly(sig, &p));
    prop::collection::vec(p, 2..=3).prop_flat_map(|gens| {
        let idx: Vec<usize> = (0..gens.len()).collect();
        (Just(gens), Just(idx).prop_shuffle())
    })
}

fn same_gb_and_certified(gens: &[WeylElement], perm: &[usize], order: &MonomialOrder) -> Result<(), TestCaseError> {
    let shuffled: Vec<WeylElement> = perm.iter().map(|&i| gens[i].clone()).collect();
    let a = buchberger(gens, order).unwrap();
    let b = buchberger(&shuffled, order).unwrap();
    prop_assert_eq!(a.gb().unwrap(), b.gb().unwrap());
    for basis in [&a, &b] {
        let certs = basis.certificates.as_ref().unwrap();
        for (g, cert) in basis.gb().unwrap().iter().zip(certs) {
            let mut sum = WeylElement::zero(order.signature());
            for (c, h) in cert.iter().zip(&basis.generators) {
                sum = &sum + &(c * h);
            }
            prop_assert_eq!(&sum, g);
        }
    }
    Ok(())
}

/// Shuffling the generators leaves the reduced basis unchanged, and every
/// basis element is reproduced by its certificate.
pub fn gb_determinism_and_certificates(cases: u32, det: bool) -> Check {
    let weyl_order = MonomialOrder::graded_lex(AlgebraSignature::plain(1));
    runner(cases, det)
        .run(&gb_inputs(), |(gens, perm)| same_gb_and_certified(&gens, &perm, &weyl_order))
        .map_err(|e| e.to_string())?;
    let comm_order = MonomialOrder::graded_lex(AlgebraSignature::plain(2));
    runner(cases, det)
        .run(&comm_inputs(), |(gens, perm)| same_gb_and_certified(&gens, &perm, &comm_order))
        .map_err(|e| e.to_string())
}

pub fn parser_round_trip(cases: u32, det: bool) -> Check {
    let names: Vec<String> = vec!["x".into(), "y".into(), "z".into()];
    runner(cases, det)
        .run(&poly(3, 4, 5), |p| {
            let text = p.canonical_string(&names);
            let back = parse_polynomial(&text, &names).unwrap();
            prop_assert_eq!(back, p);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn rational_fuzz(cases: u32, det: bool) -> Check {
    let big = (any::<i64>(), 1i64..=i64::MAX).prop_map(|(a, b)| rat(a, b));
    runner(cases, det)
        .run(&(big.clone(), big), |(a, b)| {
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
            if b != int(0) {
                prop_assert_eq!(&(&a * &b) / &b, a.clone());
            }
            prop_assert!(a.denom() > &0.into());
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// Planted rational roots are recovered with their multiplicities, and the
/// root list reconstructs the input.
pub fn planted_roots(cases: u32, det: bool) -> Check {
    let roots = prop::collection::vec(((-8i64..=8, 1i64..=6).prop_map(|(a, b)| rat(a, b)), 1u32..=2), 0..=3);
    let s = (roots, nonzero_rat(), any::<bool>());
    runner(cases, det)
        .run(&s, |(planted, lead, irreducible)| {
            let mut expected: std::collections::BTreeMap<Rational, u32> = Default::default();
            let mut p = UniPoly::new(vec![lead.clone()]);
            for (r, m) in &planted {
                *expected.entry(r.clone()).or_default() += m;
                p = &p * &UniPoly::linear(-r.clone()).pow(*m);
            }
            if irreducible {
                p = &p * &UniPoly::new(vec![int(2), int(0), int(1)]);
            }
            let found = rational_roots(&p).unwrap();
            let got: std::collections::BTreeMap<Rational, u32> = found.entries.iter().cloned().collect();
            prop_assert_eq!(got, expected);
            prop_assert_eq!(found.reconstruct(), p);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// Acting by a product equals acting twice, on `f^(s+gamma)`.
pub fn action_compatibility(cases: u32, det: bool) -> Check {
    let sig = AlgebraSignature::with_s(2);
    let f = &Poly::var(2, 0).pow(2) + &Poly::var(2, 1).pow(3);
    let ctx = FractionContext::new(f).unwrap();
    let s = (weyl(sig, 2, 2), weyl(sig, 2, 2), small_rat());
    runner(cases, det)
        .run(&s, |(p, q, gamma)| {
            let direct = ctx.act_on_fs(&(&p * &q), &gamma).unwrap();
            let inner = ctx.act_on_fs(&q, &gamma).unwrap();
            let twice = ctx.act_on_spoly(&p, &inner).unwrap();
            let diff = ctx.act_on_spoly(&WeylElement::one(sig), &direct).unwrap();
            prop_assert_eq!(diff, twice);
            Ok(())
        })
        .map_err(|e| e.to_string())
}
