use proptest::prelude::*;

use nullcone::algebra::{derived_series, jacobi_check, lower_central_series, StructureTensor};
use nullcone::catalog::{self, CatalogVerdict};
use nullcone::frame::certify_class;
use nullcone::json::{parse_algebra, render};
use nullcone::{q, FrameLayout, Rational};

fn sample(index: usize) -> &'static StructureTensor {
    let all: Vec<_> = catalog::entries().iter().flat_map(|e| &e.samples).collect();
    &all[index % all.len()].algebra
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    (1i64..=9, 1i64..=5, any::<bool>()).prop_map(|(n, d, neg)| q(if neg { -n } else { n }, d))
}

/// `e_i -> s_i e_i`, which multiplies `C^c_{ab}` by `s_a s_b / s_c`.
fn rescale(t: &StructureTensor, s: &[Rational]) -> StructureTensor {
    StructureTensor::from_entries(
        t.dim(),
        t.entries().map(|(a, b, c, v)| ((a, b, c), v * &(&(&s[a - 1] * &s[b - 1]) / &s[c - 1]))),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn json_round_trip_preserves_constants(index in 0usize..1000, indent in prop::option::of(0usize..4)) {
        let t = sample(index);
        let text = render(t, indent).unwrap();
        prop_assert_eq!(&parse_algebra(&text).unwrap(), t);
    }

    #[test]
    fn rescaling_preserves_structure(index in 0usize..1000, s in prop::collection::vec(nonzero_rational(), 6)) {
        let t = sample(index);
        let r = rescale(t, &s[..t.dim()]);
        prop_assert!(jacobi_check(&r).is_empty());
        prop_assert_eq!(lower_central_series(&r, false).dims, lower_central_series(t, false).dims);
        prop_assert_eq!(derived_series(&r).dims, derived_series(t).dims);
    }

    #[test]
    fn rescaling_preserves_certification(index in 0usize..1000, s in prop::collection::vec(nonzero_rational(), 6)) {
        let certified: Vec<_> =
            catalog::entries().iter().filter(|e| e.verdict == CatalogVerdict::InNullCone).collect();
        let e = certified[index % certified.len()];
        for sample in &e.samples {
            for (&(p, k), class) in e.signatures.iter().zip(&e.classes) {
                let l = FrameLayout::canonical(p, k);
                let before = certify_class(&l, &sample.algebra, class).unwrap();
                let after = certify_class(&l, &rescale(&sample.algebra, &s[..e.dim]), class).unwrap();
                prop_assert!(before.certified && after.certified);
                prop_assert_eq!(before.worst_margin, after.worst_margin);
            }
        }
    }
}
