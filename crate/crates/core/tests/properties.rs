use std::collections::BTreeMap;

use num_complex::Complex64;
use proptest::prelude::*;
use whitlocal::exactalg::{
    evaluate_complex, evaluate_rational, rational, series_expand, HalfInt, LaurentPoly, Monomial, Rational,
    RationalFunction, TruncatedSeries,
};
use whitlocal::localrep::{self, LocalFieldData, UnramifiedRep};
use whitlocal::reciprocity::{dual_params, ParamPair};
use whitlocal::symfunc::{self, Partition};
use whitlocal::whittaker::{self, TorusCocharacter};

const VARS: [&str; 4] = ["q", "x", "y", "z"];

fn coefficient() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| rational::frac(n, d))
}

/// Exponents in [-3, 3]; `q` also takes half-integers.
fn monomial() -> impl Strategy<Value = Monomial> {
    proptest::collection::vec((0..VARS.len(), -6i64..=6), 0..=3).prop_map(|pairs| {
        let pairs: Vec<(&str, HalfInt)> = pairs
            .into_iter()
            .map(|(v, h)| {
                let h = if VARS[v] == "q" { h } else { h / 2 * 2 };
                (VARS[v], HalfInt::from_halves(h))
            })
            .collect();
        Monomial::from_pairs(pairs).unwrap()
    })
}

fn laurent() -> impl Strategy<Value = LaurentPoly> {
    proptest::collection::vec((monomial(), coefficient()), 0..=6).prop_map(LaurentPoly::from_terms)
}

fn integral_laurent() -> impl Strategy<Value = LaurentPoly> {
    laurent().prop_map(|p| {
        LaurentPoly::from_terms(
            p.terms().filter(|(m, _)| m.iter().all(|(_, e)| e.is_integer())).map(|(m, c)| (m.clone(), c.clone())),
        )
    })
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    (1i64..=12, 1i64..=7, any::<bool>()).prop_map(|(n, d, neg)| rational::frac(if neg { -n } else { n }, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_laws(a in laurent(), b in laurent(), c in laurent()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &LaurentPoly::one(), a.clone());
    }

    #[test]
    fn text_round_trip(a in laurent(), b in laurent()) {
        let text = a.to_string();
        let back: LaurentPoly = text.parse().unwrap();
        prop_assert_eq!(&back, &a);
        // the same polynomial built in a different order prints the same
        prop_assert_eq!((&a + &b).to_string(), (&b + &a).to_string());
        let json = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<LaurentPoly>(&json).unwrap(), a);
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(
        a in integral_laurent(),
        b in integral_laurent(),
        vals in proptest::collection::vec(nonzero_rational(), VARS.len()),
    ) {
        let bind: BTreeMap<String, Rational> = VARS.iter().map(|v| v.to_string()).zip(vals).collect();
        let ev = |p: &LaurentPoly| evaluate_rational(p, &bind).unwrap();
        prop_assert_eq!(ev(&(&a * &b)), ev(&a) * ev(&b));
        prop_assert_eq!(ev(&(&a + &b)), ev(&a) + ev(&b));
    }

    #[test]
    fn half_exponents_evaluate_at_squares(a in laurent(), root in 1i64..=6) {
        let q = rational::int(root * root);
        let bind: BTreeMap<String, Rational> =
            [("q", q), ("x", rational::int(2)), ("y", rational::frac(1, 3)), ("z", rational::int(-5))]
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect();
        let exact = evaluate_rational(&(&a * &a), &bind).unwrap();
        let single = evaluate_rational(&a, &bind).unwrap();
        prop_assert_eq!(exact, &single * &single);
    }

    #[test]
    fn series_inverse(
        unit in (coefficient().prop_filter("nonzero", |c| *c != rational::int(0)), monomial()),
        tail in proptest::collection::vec(integral_laurent(), 1..=4),
        order in 0usize..=6,
    ) {
        let (c, m) = unit;
        let x = LaurentPoly::var("X").unwrap();
        let mut f = LaurentPoly::term(c, m);
        for (k, t) in tail.iter().enumerate() {
            f += &(t * &x.pow(k as u32 + 1));
        }
        let fwd = series_expand(&RationalFunction::from_poly(f.clone()), "X", order).unwrap();
        let inv = series_expand(&RationalFunction::new(LaurentPoly::one(), f).unwrap(), "X", order).unwrap();
        let prod = fwd.mul(&inv).unwrap();
        prop_assert!(prod.is_one(), "product {:?}", prod);
        prop_assert_eq!(inv, fwd.inverse().unwrap());
    }

    #[test]
    fn series_product_truncates_as_convolution(
        a in proptest::collection::vec(integral_laurent(), 1..=5),
        b in proptest::collection::vec(integral_laurent(), 1..=5),
    ) {
        let order = a.len().min(b.len()) - 1;
        let sa = TruncatedSeries::new("X", a.clone()).unwrap().truncate(order);
        let sb = TruncatedSeries::new("X", b.clone()).unwrap().truncate(order);
        let prod = sa.mul(&sb).unwrap();
        for k in 0..=order {
            let expected: LaurentPoly = (0..=k).map(|i| &a[i] * &b[k - i]).sum();
            prop_assert_eq!(&prod.coeffs()[k], &expected);
        }
    }

    #[test]
    fn float_evaluation_accuracy(
        terms in proptest::collection::vec(
            (proptest::collection::vec((1..VARS.len(), -3i64..=3), 0..=3), -1000i64..=1000),
            1..=100,
        ),
        vals in proptest::collection::vec(-1000i64..=1000, VARS.len() - 1),
    ) {
        let vals: Vec<i64> = vals.into_iter().map(|v| if v == 0 { 1 } else { v }).collect();
        let p = LaurentPoly::from_terms(terms.into_iter().map(|(exps, c)| {
            let m = Monomial::from_pairs(exps.into_iter().map(|(v, e)| (VARS[v], HalfInt::from_int(e)))).unwrap();
            (m, rational::int(c))
        }));
        let exact_bind: BTreeMap<String, Rational> =
            VARS[1..].iter().zip(&vals).map(|(k, &v)| (k.to_string(), rational::int(v))).collect();
        let float_bind: BTreeMap<String, Complex64> =
            VARS[1..].iter().zip(&vals).map(|(k, &v)| (k.to_string(), Complex64::new(v as f64, 0.0))).collect();
        let exact = rational::to_f64(&evaluate_rational(&p, &exact_bind).unwrap());
        let float = evaluate_complex(&p, &float_bind).unwrap();
        // error is measured against the sum of absolute term values so that
        // cancellation in the exact value does not blow up the ratio
        let scale: f64 = p
            .terms()
            .map(|(m, c)| {
                let single = LaurentPoly::term(c.clone(), m.clone());
                rational::to_f64(&evaluate_rational(&single, &exact_bind).unwrap()).abs()
            })
            .sum();
        prop_assert!((float - Complex64::new(exact, 0.0)).norm() <= scale * 2f64.powi(-40));
    }

    #[test]
    fn dual_params_is_an_involution(n in 2usize..=10, s in coefficient(), w in coefficient()) {
        let p = ParamPair::rational(s, w, n);
        prop_assert_eq!(dual_params(&dual_params(&p)), p);
    }

    #[test]
    fn contragredient_is_an_involution(vals in proptest::collection::vec(nonzero_rational(), 1..=4)) {
        let rep = UnramifiedRep::numeric(vals, false).unwrap();
        let twice = localrep::contragredient(&localrep::contragredient(&rep).unwrap()).unwrap();
        prop_assert_eq!(twice.satake(), rep.satake());
    }

    #[test]
    fn spherical_support_and_central_shift(
        exps in proptest::collection::vec(-3i64..=3, 1..=4),
        c in -2i64..=2,
    ) {
        let n = exps.len();
        let rep = UnramifiedRep::symbolic("a", n).unwrap();
        let mu = TorusCocharacter::new(exps);
        let value = whittaker::spherical_value(&rep, &mu).unwrap();
        prop_assert_eq!(value.is_zero(), !mu.is_dominant());
        let shifted = whittaker::spherical_value(&rep, &mu.shifted(c)).unwrap();
        let factor = rep.central_value().pow_i64(c).unwrap();
        prop_assert_eq!(shifted, &factor * &value);
    }

    #[test]
    fn twisted_level_zero_is_spherical(exps in proptest::collection::vec(-2i64..=3, 1..=3)) {
        let n = exps.len() + 1;
        let rep = UnramifiedRep::symbolic("a", n).unwrap();
        let mu = TorusCocharacter::new(exps);
        let field = LocalFieldData::symbolic();
        prop_assert_eq!(
            whittaker::twisted_value(&rep, &mu, 0, &field).unwrap(),
            whittaker::spherical_value(&rep, &mu.padded()).unwrap()
        );
    }
}

#[test]
fn symbolic_contragredient_is_an_involution() {
    for n in 1..=4 {
        let rep = UnramifiedRep::symbolic("a", n).unwrap();
        let twice = localrep::contragredient(&localrep::contragredient(&rep).unwrap()).unwrap();
        assert_eq!(twice.satake(), rep.satake());
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    permutations(n - 1)
        .into_iter()
        .flat_map(|p| {
            (0..n).map(move |i| {
                let mut q = p.clone();
                q.insert(i, n - 1);
                q
            })
        })
        .collect()
}

#[test]
fn schur_is_symmetric() {
    let names = ["x1", "x2", "x3", "x4"];
    for n in 1..=4 {
        let vars = &names[..n];
        for lambda in Partition::up_to(5, n) {
            let base = symfunc::schur(&lambda, vars).unwrap();
            for perm in permutations(n) {
                let permuted: Vec<&str> = perm.iter().map(|&i| vars[i]).collect();
                assert_eq!(symfunc::schur(&lambda, &permuted).unwrap(), base, "lambda {lambda:?}, perm {perm:?}");
            }
        }
    }
}

#[test]
fn rank_two_hecke_recursion() {
    let rep = UnramifiedRep::symbolic("a", 2).unwrap();
    let e2 = rep.central_value();
    let lam = |k: u32| localrep::hecke_eigenvalue(&rep, k);
    for k in 1..=5 {
        assert_eq!(&lam(1) * &lam(k), &lam(k + 1) + &(&e2 * &lam(k - 1)), "k = {k}");
    }
}
