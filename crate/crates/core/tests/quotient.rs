use std::sync::Arc;

use proptest::prelude::*;
use qdiff_core::ideal::{LetterOrder, Rewriter, RuleMode};
use qdiff_core::verify::{self, Suite, VerifyOptions};
use qdiff_core::{
    diff_n, parse_expression, render, AlgebraElement, Bounds, CalculusContext, CycScalar, IdealContext, SessionConfig,
    TensorElement, Word, XiHomomorphism,
};

fn ideal(xi: XiHomomorphism) -> IdealContext {
    IdealContext::new(Arc::new(CalculusContext::new(xi)))
}

fn arb_algebra() -> impl Strategy<Value = AlgebraElement> {
    prop::collection::vec((prop::collection::vec(0u16..2, 0..3), -2i64..3, -2i64..3), 1..3).prop_map(|terms| {
        terms.into_iter().map(|(w, a, b)| (Word(w), CycScalar::from_ints(a, b))).collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn d3_of_algebra_elements_lies_in_the_ideal(u in arb_algebra()) {
        let ic = ideal(XiHomomorphism::scalar_twist(2, CycScalar::q()));
        let e = diff_n(ic.calculus(), &TensorElement::from_algebra(u), 3);
        let v = ic.membership(&e, &Bounds::default()).unwrap();
        prop_assert!(v.is_member());
        prop_assert_eq!(v.expand(&ic), e);
    }

    #[test]
    fn normal_forms_agree_across_orders_modulo_the_ideal(u in arb_algebra()) {
        // d^2 u reduced under either letter order differs from d^2 u by an ideal element.
        let ic = ideal(XiHomomorphism::commutative(2));
        let e = diff_n(ic.calculus(), &TensorElement::from_algebra(u), 2);
        for order in [LetterOrder::Ascending, LetterOrder::Descending] {
            let r = Rewriter::new(&ic, RuleMode::Interreduced, order).unwrap().reduce(&e, 10_000).unwrap();
            prop_assert!(ic.membership(&(&r - &e), &Bounds::default()).unwrap().is_member());
        }
    }
}

#[test]
fn custom_linear_config_verifies() {
    let src = r#"{"n": 2, "xi_entries": [[["x1", "x2"], ["0", "q*x1"]], [["0", "x1 + x2"], ["x1", "2*x2"]]], "seed": 5}"#;
    let cfg = SessionConfig::from_json(src).unwrap();
    let ic = ideal(cfg.build_xi().unwrap());
    let opts = VerifyOptions {
        suites: vec![Suite::Scalar, Suite::Expansions, Suite::Generators, Suite::Congruences],
        seed: cfg.seed,
        samples: 5,
        ..VerifyOptions::default()
    };
    let report = verify::run(&ic, &cfg.label(), &opts);
    assert!(!report.failed() && !report.inconclusive(), "{}", report.to_text());
    assert_eq!(report.preset, "custom");
}

#[test]
fn rendered_d_iterates_parse_back() {
    let ctx = CalculusContext::new(XiHomomorphism::scalar_twist(2, CycScalar::q()));
    let u = parse_expression("x1 x2 x1 - q x2", &ctx).unwrap();
    for k in 1..=3 {
        let d = diff_n(&ctx, &u, k);
        assert_eq!(parse_expression(&render::text(&d), &ctx).unwrap(), d);
    }
}
