//! Property tests over randomly generated expressions and maps.

use cdk_core::expr::ScalarExpr;
use cdk_core::text::{parse_map, print_map};
use cdk_core::{Scalar, Shape, SmoothMap};
use proptest::prelude::*;

const DIM: usize = 2;

fn arb_scalar() -> impl Strategy<Value = Scalar> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Scalar::ratio(n, d).unwrap())
}

fn arb_expr(transcendental: bool) -> impl Strategy<Value = ScalarExpr> {
    let leaf = prop_oneof![
        arb_scalar().prop_map(ScalarExpr::Const),
        (0..DIM).prop_map(ScalarExpr::coord),
    ];
    leaf.prop_recursive(3, 24, 4, move |inner| {
        let sum = proptest::collection::vec((arb_scalar(), inner.clone()), 1..3)
            .prop_map(ScalarExpr::Sum);
        let prod =
            proptest::collection::vec(inner.clone(), 2..3).prop_map(ScalarExpr::Prod);
        let pow = (inner.clone(), 2u32..=3).prop_map(|(b, k)| ScalarExpr::pow(b, k));
        if transcendental {
            prop_oneof![
                sum,
                prod,
                pow,
                inner.clone().prop_map(ScalarExpr::sin),
                inner.clone().prop_map(ScalarExpr::cos),
            ]
            .boxed()
        } else {
            prop_oneof![sum, prod, pow].boxed()
        }
    })
}

fn plane() -> Shape {
    Shape::prod(Shape::Line, Shape::Line)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn normalize_is_idempotent(e in arb_expr(true)) {
        let once = e.normalize();
        prop_assert_eq!(once.normalize(), once);
    }

    #[test]
    fn normalize_preserves_exact_evaluation(e in arb_expr(false)) {
        // polynomial fragment: exact rational agreement at small points
        for (a, b) in [(0i64, 0i64), (1, -1), (2, 3), (-3, 1)] {
            let point = [Scalar::from_int(a), Scalar::from_int(b)];
            prop_assert_eq!(
                e.eval_exact(&point).unwrap(),
                e.normalize().eval_exact(&point).unwrap()
            );
        }
    }

    #[test]
    fn normalize_preserves_float_evaluation(e in arb_expr(true)) {
        for p in [[0.3, -0.7], [1.1, 0.9], [-1.4, 0.2]] {
            let before = e.eval_f64(&p);
            let after = e.normalize().eval_f64(&p);
            let bound = 1e-7 + 1e-7 * before.abs().max(after.abs());
            prop_assert!((before - after).abs() <= bound || (before.is_nan() && after.is_nan()));
        }
    }

    #[test]
    fn printed_maps_parse_back_to_the_same_normal_form(
        e1 in arb_expr(true),
        e2 in arb_expr(true),
    ) {
        let f = SmoothMap::new(plane(), plane(), vec![e1, e2]).unwrap();
        let text = print_map(&f);
        let back = parse_map(&text).unwrap();
        prop_assert_eq!(back.dom(), f.dom());
        prop_assert_eq!(back.cod(), f.cod());
        let (bn, fnm) = (back.normalized(), f.normalized());
        prop_assert_eq!(bn.comps(), fnm.comps());
    }

    #[test]
    fn derivative_is_additive(e1 in arb_expr(true), e2 in arb_expr(true)) {
        let f = SmoothMap::new(plane(), Shape::Line, vec![e1]).unwrap();
        let g = SmoothMap::new(plane(), Shape::Line, vec![e2]).unwrap();
        let one = Scalar::one();
        let lhs = cdk_core::diffop::d(&SmoothMap::lin_comb(&one, &f, &one, &g).unwrap());
        let rhs = SmoothMap::lin_comb(
            &one,
            &cdk_core::diffop::d(&f),
            &one,
            &cdk_core::diffop::d(&g),
        )
        .unwrap();
        let (ln, rn) = (lhs.normalized(), rhs.normalized());
        prop_assert_eq!(ln.comps(), rn.comps());
    }
}
