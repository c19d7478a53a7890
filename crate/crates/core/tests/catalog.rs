use hypercone_core::faces::{
    discover_span, face_as_cone, face_cone_agreement, make_face, mult_constancy_check,
    verify_face_representation, verify_face_representation_at,
};
use hypercone_core::fixtures::{self, Fixture};
use hypercone_core::{Rational, Scalar};

fn catalog<S: Scalar>() -> Vec<Fixture<S>> {
    fixtures::catalog_names()
        .into_iter()
        .map(|name| fixtures::by_name(name).unwrap())
        .collect()
}

fn check_faces<S: Scalar>(samples: usize) {
    for f in catalog::<S>() {
        for cat in &f.faces {
            let ctx = format!("{} {}", f.name, cat.label);
            let face =
                make_face(&f.cone, &cat.z, &cat.span).unwrap_or_else(|e| panic!("{ctx}: {e}"));
            assert_eq!(face.m(), cat.m, "{ctx}");

            let report = verify_face_representation(&face, samples, 11).unwrap();
            assert!(report.passed(), "{ctx}: {report:?}");

            if face.is_nontrivial() {
                let mut controls = Vec::new();
                if cat.m > 0 {
                    controls.push(cat.m - 1);
                }
                if cat.m < f.cone.degree() {
                    controls.push(cat.m + 1);
                }
                for m in controls {
                    let bad = verify_face_representation_at(&face, m, samples, 11).unwrap();
                    assert!(bad.violations > 0, "{ctx}: control m = {m} found nothing");
                }
            }

            let cone = face_as_cone(&face, 100, 5).unwrap_or_else(|e| panic!("{ctx}: {e}"));
            let agreement = face_cone_agreement(&face, &cone, samples, 12).unwrap();
            assert_eq!(agreement.violations, 0, "{ctx}: {agreement:?}");

            let found = discover_span(&f.cone, &cat.z).unwrap_or_else(|e| panic!("{ctx}: {e}"));
            assert!(found.span.same_span(&cat.span), "{ctx}: {found:?}");

            let mc = mult_constancy_check(&face, 50, 3).unwrap();
            assert!(mc.constant, "{ctx}: {mc:?}");
        }
    }
}

#[test]
fn catalog_faces_exact() {
    check_faces::<Rational>(200);
}

#[test]
fn catalog_faces_float() {
    check_faces::<f64>(1000);
}

#[test]
fn catalog_multiplicities_match_oracles() {
    for f in catalog::<f64>() {
        for cat in &f.faces {
            if let Some(m) = f.mult_oracle(&cat.z) {
                assert_eq!(
                    f.cone.multiplicity(&cat.z).unwrap().m,
                    m,
                    "{} {}",
                    f.name,
                    cat.label
                );
            }
        }
    }
}
