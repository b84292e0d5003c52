//! Property tests over seeds and over arbitrary types.

use ljmse_core::cps::{bar_ctx, bar_type, cgps, TransKind};
use ljmse_core::reduction::all_steps;
use ljmse_core::secondorder::{bar_natural, star_natural, ty_subst_type};
use ljmse_core::spectrum::{parse_spec, to_ljmse, Calculus};
use ljmse_core::syntax::json::{from_json, to_json};
use ljmse_core::syntax::{parse, Level};
use ljmse_core::target::typecheck_lam;
use ljmse_core::typing::{judge, subject_reduction_check};
use ljmse_core::types::Type;
use ljmse_core::verify::{gen_spec, gen_typed, GenConfig};
use proptest::prelude::*;

fn ty() -> impl Strategy<Value = Type> {
    let leaf = prop::sample::select(vec!["X", "Y", "Z"]).prop_map(Type::var);
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Type::arrow(a, b)),
            (prop::sample::select(vec!["X", "Y"]), inner).prop_map(|(x, a)| Type::forall(x, a)),
        ]
    })
}

fn small(seed: u64) -> GenConfig {
    GenConfig {
        seed,
        count: 20,
        ..GenConfig::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn translations_commute_with_type_substitution(a in ty(), b in ty()) {
        for kind in [TransKind::Cps, TransKind::Cgps] {
            prop_assert!(star_natural(&a, &b, "X", kind));
            prop_assert!(bar_natural(&a, &b, "X", kind));
        }
    }

    #[test]
    fn substituting_a_non_free_variable_is_identity(a in ty(), b in ty()) {
        let w = "W";
        prop_assert_eq!(ty_subst_type(&b, w, &a), a);
    }

    #[test]
    fn corpora_print_parse_and_serialize_back(seed in 0u64..1000) {
        for (_, e, _) in gen_typed(&small(seed)) {
            let again = parse(&e.to_string(), e.class(), Level::Prop).unwrap();
            prop_assert_eq!(&again, &e);
            prop_assert_eq!(from_json(&to_json(&e)).unwrap(), e);
        }
    }

    #[test]
    fn generated_terms_have_their_types_and_keep_them(seed in 0u64..1000) {
        for (ctx, e, _) in gen_typed(&small(seed)) {
            prop_assert!(judge(&ctx, &e).is_ok(), "{}", e);
            for s in all_steps(&e) {
                prop_assert!(subject_reduction_check(&ctx, &e, &s), "{} -> {}", e, s.to);
            }
        }
    }

    #[test]
    fn subsystem_terms_print_and_parse_back(seed in 0u64..1000) {
        for calc in Calculus::SPECTRUM {
            for (_, t, _) in gen_spec(&small(seed).with_calculus(calc)) {
                if t.calculus() != calc {
                    continue;
                }
                let again = parse_spec(calc, &t.to_string()).unwrap();
                prop_assert_eq!(again.canon(), t.canon());
                prop_assert!(to_ljmse(&t).is_some());
            }
        }
    }

    #[test]
    fn cgps_images_are_typed(seed in 0u64..200) {
        for (ctx, e, a) in gen_typed(&small(seed)) {
            if let Some(t) = e.as_term() {
                let k = TransKind::Cgps;
                prop_assert_eq!(typecheck_lam(&bar_ctx(&ctx, k), &cgps(t), &bar_type(&a, k)), Ok(true));
            }
        }
    }
}
