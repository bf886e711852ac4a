mod common;

use common::exact::{oracle, q, Q};
use gddx::model::{Construction, Goal};
use gddx::wu::{translate, triangularize, wu_prove, wu_prove_capped, Polynomial, Verdict, WuError};
use proptest::prelude::*;

fn declared(name: &str) -> (Construction, Vec<Goal>) {
    let c = common::construction(name);
    let goals = c.goals().to_vec();
    (c, goals)
}

#[test]
fn proved_theorems_hold_on_1000_exact_samples() {
    for name in ["midline.gcs", "right_median.gcs", "ninepoint.gcs", "varignon.gcs"] {
        let (c, goals) = declared(name);
        for g in &goals {
            let out = wu_prove(&c, g).unwrap();
            assert_eq!(out.verdict, Verdict::Proved, "{name} {}", g.fact);
            let run = oracle(&c, g, 1000);
            assert!(run.used >= 900, "{name}: only {} usable samples", run.used);
            assert_eq!(run.falsified, 0, "{name} {}", g.fact);
        }
    }
}

#[test]
fn false_conjecture_is_not_proved_and_falsified() {
    let (c, goals) = declared("scalene.gcs");
    let out = wu_prove(&c, &goals[0]).unwrap();
    assert_eq!(out.verdict, Verdict::NotProved);
    assert!(!out.final_remainder.is_zero());
    let run = oracle(&c, &goals[0], 1000);
    assert!(run.falsified > 900, "{} of {}", run.falsified, run.used);
}

#[test]
fn midline_and_right_median_report_conditions() {
    for name in ["midline.gcs", "right_median.gcs"] {
        let (c, goals) = declared(name);
        let out = wu_prove(&c, &goals[0]).unwrap();
        assert_eq!(out.verdict, Verdict::Proved);
        assert!(out.final_remainder.is_zero());
        assert!(!out.ndgs.is_empty(), "{name}");
        for n in &out.ndgs {
            assert_ne!(n.polynomial, "0");
        }
    }
}

#[test]
fn nine_point_staircase() {
    let (c, goals) = declared("ninepoint.gcs");
    let t = translate(&c, &goals[0]).unwrap();
    let ts = triangularize(&t.hypotheses, 200_000).unwrap();
    let mains = ts.main_vars();
    assert!(mains.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(mains.len(), t.variables.len() - t.parameters);
    assert!(mains.iter().all(|&v| v >= t.parameters));
}

#[test]
fn term_cap_is_enforced() {
    let (c, goals) = declared("ninepoint.gcs");
    let err = wu_prove_capped(&c, &goals[0], 10).unwrap_err();
    assert!(matches!(err, WuError::Poly(_)), "{err}");
}

fn small_poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((-5i64..=5, 0u32..3, 0u32..3, 0u32..3), 1..6).prop_map(|terms| {
        let mut p = Polynomial::zero();
        for (c, a, b, d) in terms {
            let t = &(&(&Polynomial::int(c) * &Polynomial::var(0).pow(a)) * &Polynomial::var(1).pow(b))
                * &Polynomial::var(2).pow(d);
            p = &p + &t;
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn prem_identity(f in small_poly(), g in small_poly(), v in 0usize..3) {
        prop_assume!(g.degree(v) > 0);
        let pd = f.prem(&g, v, 200_000).unwrap();
        let lhs = &g.initial(v).pow(pd.power) * &f;
        let rhs = &(&pd.quotient * &g) + &pd.remainder;
        prop_assert!((&lhs - &rhs).is_zero());
        prop_assert!(pd.remainder.is_zero() || pd.remainder.degree(v) < g.degree(v));
        let bound = (f.degree(v) + 1).saturating_sub(g.degree(v));
        prop_assert!(pd.power <= bound);
    }

    #[test]
    fn prem_identity_by_evaluation(f in small_poly(), g in small_poly(), v in 0usize..3,
                                   at in prop::array::uniform3(-7i64..=7)) {
        prop_assume!(g.degree(v) > 0);
        let pd = f.prem(&g, v, 200_000).unwrap();
        let x: Vec<Q> = at.iter().map(|&a| q(a)).collect();
        let init = g.initial(v).eval(&x);
        let lhs = num_traits::pow(init, pd.power as usize) * f.eval(&x);
        prop_assert_eq!(lhs, pd.quotient.eval(&x) * g.eval(&x) + pd.remainder.eval(&x));
    }
}
