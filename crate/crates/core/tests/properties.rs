//! Randomized algebraic and model invariants. `MDT_SEED` overrides the seed.

use mdt_core::corpus::{load, CORPUS};
use mdt_core::oracle::{count_points, CountOptions, Engine};
use mdt_core::{parse_model, render_model, Assignment, Coefficient, DimVector, MSeries, MotivicScalar, Series};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

fn config(cases: u32) -> Config {
    let seed = std::env::var("MDT_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0x5eed_2014);
    Config {
        cases,
        rng_seed: RngSeed::Fixed(seed),
        failure_persistence: None,
        ..Config::default()
    }
}

fn denominator(k: u8) -> MotivicScalar {
    let l = MotivicScalar::lefschetz();
    let one = MotivicScalar::one();
    match k {
        0 => &l - &one,
        1 => &l + &one,
        2 => &MotivicScalar::sqrt_lefschetz() - &MotivicScalar::half_power(-1),
        _ => one,
    }
}

prop_compose! {
    fn scalar()(terms in prop::collection::vec((-3i64..=3, -3i64..=3), 1..4), den in 0u8..6) -> MotivicScalar {
        let mut s = MotivicScalar::zero();
        for (c, e) in terms {
            s = &s + &(&MotivicScalar::from_int(c) * &MotivicScalar::half_power(e));
        }
        s.checked_div(&denominator(den)).unwrap()
    }
}

prop_compose! {
    /// Coefficients in `Q[L, 1/(L-1)]`.
    fn even_scalar()(terms in prop::collection::vec((-3i64..=3, 0i64..=2), 1..3), den in any::<bool>()) -> MotivicScalar {
        let mut s = MotivicScalar::zero();
        for (c, e) in terms {
            s = &s + &(&MotivicScalar::from_int(c) * &MotivicScalar::half_power(2 * e));
        }
        if den { s.checked_div(&denominator(0)).unwrap() } else { s }
    }
}

fn series_from(vars: usize, n: u32, coeffs: Vec<Option<MotivicScalar>>) -> MSeries {
    let mut f = MSeries::zero(vars, n);
    let alphas = DimVector::all_up_to(vars, n).into_iter().filter(|a| !a.is_zero());
    for (alpha, c) in alphas.zip(coeffs) {
        if let Some(c) = c {
            f.insert(alpha, c);
        }
    }
    f
}

fn shape() -> impl Strategy<Value = (usize, u32)> {
    prop_oneof![(Just(1usize), 1u32..=6), (Just(2usize), 1u32..=4)]
}

fn series_pair() -> impl Strategy<Value = (MSeries, MSeries)> {
    shape().prop_flat_map(|(vars, n)| {
        let len = DimVector::all_up_to(vars, n).len() - 1;
        let coeffs = || prop::collection::vec(prop::option::weighted(0.5, scalar()), len);
        (coeffs(), coeffs()).prop_map(move |(a, b)| (series_from(vars, n, a), series_from(vars, n, b)))
    })
}

fn even_series() -> impl Strategy<Value = MSeries> {
    (1u32..=5).prop_flat_map(|n| {
        prop::collection::vec(prop::option::weighted(0.6, even_scalar()), n as usize)
            .prop_map(move |c| series_from(1, n, c))
    })
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn adams_composes(a in scalar(), k in 1u32..=6, m in 1u32..=6) {
        prop_assert_eq!(a.adams(m).adams(k), a.adams(k * m));
    }

    #[test]
    fn adams_is_a_ring_map(a in scalar(), b in scalar(), k in 1u32..=6) {
        prop_assert_eq!((&a + &b).adams(k), &a.adams(k) + &b.adams(k));
        prop_assert_eq!((&a * &b).adams(k), &a.adams(k) * &b.adams(k));
    }

    #[test]
    fn specialization_is_a_ring_map(a in even_scalar(), b in even_scalar(), p in prop::sample::select(vec![2u64, 3, 5, 7, 11])) {
        if let (Ok(x), Ok(y)) = (a.specialize_at_prime(p), b.specialize_at_prime(p)) {
            prop_assert_eq!((&a * &b).specialize_at_prime(p).unwrap(), &x * &y);
            prop_assert_eq!((&a + &b).specialize_at_prime(p).unwrap(), &x + &y);
        }
    }

    #[test]
    fn series_adams_is_multiplicative((f, g) in series_pair(), k in 1u32..=4) {
        prop_assert_eq!(f.mul(&g).unwrap().adams(k), f.adams(k).mul(&g.adams(k)).unwrap());
    }

    #[test]
    fn exp_additive((f, g) in series_pair()) {
        let lhs = f.add(&g).unwrap().plethystic_exp().unwrap();
        let rhs = f.plethystic_exp().unwrap().mul(&g.plethystic_exp().unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn log_inverts_exp((f, _g) in series_pair()) {
        prop_assert_eq!(f.plethystic_exp().unwrap().plethystic_log().unwrap(), f.clone());
        let one_plus = f.add(&MSeries::one(f.vars(), f.truncation())).unwrap();
        prop_assert_eq!(one_plus.plethystic_log().unwrap().plethystic_exp().unwrap(), one_plus);
    }

    #[test]
    fn exp_commutes_with_specialization(f in even_series(), p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        let n = f.truncation();
        let specialize = |s: &MSeries| -> Option<Series<BigRational>> {
            let mut out = Series::<BigRational>::zero(1, n);
            for (a, c) in s.iter() {
                out.insert(a.clone(), c.specialize_at_prime(p).ok()?);
            }
            Some(out)
        };
        // exp(sum psi_k f / k) evaluated before or after the ordinary exponential.
        if let (Some(direct), Some(sum)) = (specialize(&f.plethystic_exp().unwrap()), specialize(&f.adams_sum())) {
            prop_assert_eq!(sum.exp().unwrap(), direct);
        }
    }
}

fn word_text(letters: &[u8]) -> String {
    letters.iter().map(|&i| ["x", "y", "z"][i as usize]).collect::<Vec<_>>().join("*")
}

fn loop_model(potential: &str) -> String {
    format!("vertex v\narrow x: v -> v\narrow y: v -> v\narrow z: v -> v\npotential W = {potential}\n")
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn cyclic_derivative_is_rotation_invariant(word in prop::collection::vec(0u8..3, 1..=5), shift in 0usize..5) {
        let mut rotated = word.clone();
        rotated.rotate_left(shift % word.len());
        let m1 = parse_model(&loop_model(&word_text(&word))).unwrap();
        let m2 = parse_model(&loop_model(&word_text(&rotated))).unwrap();
        for a in 0..3 {
            prop_assert_eq!(m1.cyclic_derivative(a), m2.cyclic_derivative(a));
        }
    }

    #[test]
    fn parse_render_roundtrip(terms in prop::collection::vec((-4i64..=4, prop::collection::vec(0u8..3, 1..=4)), 1..4)) {
        let body: Vec<String> = terms
            .iter()
            .filter(|(c, _)| *c != 0)
            .map(|(c, w)| format!("({c})*{}", word_text(w)))
            .collect();
        prop_assume!(!body.is_empty());
        if let Ok(m) = parse_model(&loop_model(&body.join(" + "))) {
            prop_assert_eq!(parse_model(&render_model(&m)).unwrap(), m);
        }
    }

    #[test]
    fn euler_form_is_bilinear(a in prop::collection::vec(0u32..4, 2), b in prop::collection::vec(0u32..4, 2), c in prop::collection::vec(0u32..4, 2)) {
        let m = load("conifold.qp");
        let chi = |x: &[u32], y: &[u32]| m.euler_form(x, y).unwrap();
        let sum: Vec<u32> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let twice: Vec<u32> = a.iter().map(|x| 2 * x).collect();
        prop_assert_eq!(chi(&sum, &c), chi(&a, &c) + chi(&b, &c));
        prop_assert_eq!(chi(&twice, &c), 2 * chi(&a, &c));
    }
}

proptest! {
    #![proptest_config(config(40))]

    #[test]
    fn engines_agree(
        case in prop::sample::select(vec![
            ("q1_quantum.qp", vec![1u32]),
            ("q1_quantum.qp", vec![2]),
            ("q1_jordan.qp", vec![2]),
            ("conifold.qp", vec![1, 1]),
            ("conifold.qp", vec![2, 1]),
            ("cyclic_1.qp", vec![1, 1]),
            ("cyclic_2_single.qp", vec![1, 1, 1]),
        ]),
        p in prop::sample::select(vec![2u64, 3, 5]),
        qv in 1u64..5,
    ) {
        let (name, alpha) = case;
        let model = load(name);
        let cut = model.declared_cut().unwrap().to_vec();
        let pres = model.reduced_presentation(&cut).unwrap();
        let mut a = Assignment::new();
        a.insert("q".into(), qv % p);
        prop_assume!(qv % p != 0);
        let run = |engine| {
            let opts = CountOptions { engine, ..CountOptions::default() };
            count_points(&pres, &alpha, p, &a, &opts).unwrap().count
        };
        prop_assert_eq!(run(Engine::Exhaustive), run(Engine::LinearFiber));
    }
}

#[test]
fn every_corpus_model_roundtrips() {
    for (name, text) in CORPUS {
        let m = parse_model(text).unwrap();
        assert_eq!(parse_model(&render_model(&m)).unwrap(), m, "{name}");
    }
}

#[test]
fn rational_coefficients_have_trivial_adams() {
    let r = BigRational::new(BigInt::from(3), BigInt::from(7));
    assert_eq!(r.adams(5), r);
}
