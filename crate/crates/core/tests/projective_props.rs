use bending_core::{cross_ratio, ProjectiveHyperplane, ProjectiveMap, ProjectivePoint};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

fn vec4() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0..2.0f64, 4)
}

/// Identity plus a bounded perturbation, so the map is well conditioned.
fn map4() -> impl Strategy<Value = ProjectiveMap<f64>> {
    prop::collection::vec(-0.3..0.3f64, 16)
        .prop_map(|e| ProjectiveMap::new(DMatrix::identity(4, 4) + DMatrix::from_row_slice(4, 4, &e)).unwrap())
}

proptest! {
    #[test]
    fn cross_ratio_is_projectively_invariant(a in vec4(), b in vec4(), s in prop::collection::vec(0.1..1.0f64, 4), g in map4()) {
        let a = DVector::from_vec(a);
        let b = DVector::from_vec(b);
        prop_assume!(a.norm() > 0.5 && b.norm() > 0.5 && (a.normalize() - b.normalize()).norm() > 0.3 && (a.normalize() + b.normalize()).norm() > 0.3);
        let mut params = vec![0.0];
        for step in s.iter().take(3) {
            params.push(params.last().unwrap() + step);
        }
        let pts: Vec<ProjectivePoint<f64>> = params.iter().map(|t| ProjectivePoint::new(&a + &b * *t).unwrap()).collect();
        let before = cross_ratio(&pts[0], &pts[1], &pts[2], &pts[3]).unwrap();
        let img: Vec<ProjectivePoint<f64>> = pts.iter().map(|p| g.apply(p)).collect();
        let after = cross_ratio(&img[0], &img[1], &img[2], &img[3]).unwrap();
        prop_assert!((before - after).abs() < 1e-8 * before.abs().max(1.0), "{} vs {}", before, after);
    }

    #[test]
    fn canonical_form_ignores_scale(v in vec4(), lambda in prop_oneof![-5.0..-0.1f64, 0.1..5.0f64]) {
        let v = DVector::from_vec(v);
        prop_assume!(v.norm() > 1e-3);
        let p = ProjectivePoint::new(v.clone()).unwrap();
        let q = ProjectivePoint::new(v * lambda).unwrap();
        prop_assert!(p.approx_eq(&q, 1e-12));
    }

    #[test]
    fn maps_preserve_incidence(h in vec4(), y in vec4(), g in map4()) {
        let h = DVector::from_vec(h);
        let y = DVector::from_vec(y);
        prop_assume!(h.norm() > 0.1);
        let x = &y - &h * (h.dot(&y) / h.norm_squared());
        prop_assume!(x.norm() > 0.1);
        let plane = ProjectiveHyperplane::new(h).unwrap();
        let point = ProjectivePoint::new(x).unwrap();
        prop_assert!(plane.incident(&point));
        prop_assert!(g.apply_hyperplane(&plane).incident(&g.apply(&point)));
    }

    #[test]
    fn inverse_composes_to_identity(g in map4()) {
        prop_assert!(g.compose(&g.inverse()).identity_residual() < 1e-12);
    }
}
