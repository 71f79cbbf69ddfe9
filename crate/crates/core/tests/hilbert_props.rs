use bending_core::cusp::{bent_graph, BentDomain, BentGroupElement};
use bending_core::hilbert::{finsler_norm, hilbert_distance, ConvexDomain, Ellipsoid, Paraboloid};
use bending_core::hyperbolic::{hyperbolic_distance_q, make_parabolic};
use bending_core::{Membership, ProjectivePoint};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

fn ellipsoid() -> Ellipsoid<f64> {
    Ellipsoid::new(DVector::from_vec(vec![0.2, -0.1, 0.3]), DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 4.0, 0.25]))).unwrap()
}

/// Interior point of the ellipsoid from a direction and a radius fraction.
fn ellipsoid_point() -> impl Strategy<Value = DVector<f64>> {
    (prop::collection::vec(-1.0..1.0f64, 3), 0.0..0.95f64).prop_filter_map("nonzero", |(u, r)| {
        let u = DVector::from_vec(u);
        (u.norm() > 1e-3).then(|| {
            let u = u.normalize() * r;
            DVector::from_vec(vec![0.2 + u[0], -0.1 + u[1] / 2.0, 0.3 + u[2] * 2.0])
        })
    })
}

/// Interior point of the bent model of dimension 3 at depth `h` above the boundary.
fn bent_point() -> impl Strategy<Value = DVector<f64>> {
    (0.2..5.0f64, -2.0..2.0f64, 0.05..3.0f64).prop_map(|(y, v, h)| DVector::from_vec(vec![bent_graph(y, &[v], 0.0) + h, y, v]))
}

fn paraboloid_point() -> impl Strategy<Value = DVector<f64>> {
    (-2.0..2.0f64, -2.0..2.0f64, 0.05..4.0f64).prop_map(|(a, b, h)| DVector::from_vec(vec![(a * a + b * b) / 2.0 + h, a, b]))
}

fn lift(z: &DVector<f64>) -> ProjectivePoint<f64> {
    ProjectivePoint::from_slice(&[z[0], z[1], z[2], 1.0]).unwrap()
}

proptest! {
    #[test]
    fn distance_is_symmetric_with_triangle_inequality(x in ellipsoid_point(), y in ellipsoid_point(), z in ellipsoid_point()) {
        let e = ellipsoid();
        let xy = hilbert_distance(&e, &x, &y).unwrap();
        prop_assert!((xy - hilbert_distance(&e, &y, &x).unwrap()).abs() < 1e-10 * (1.0 + xy));
        let xz = hilbert_distance(&e, &x, &z).unwrap();
        let zy = hilbert_distance(&e, &z, &y).unwrap();
        prop_assert!(xy <= xz + zy + 1e-10);
    }

    #[test]
    fn bent_distance_is_symmetric_with_triangle_inequality(x in bent_point(), y in bent_point(), z in bent_point()) {
        let b = BentDomain::new(3, 0.0).unwrap();
        let xy = hilbert_distance(&b, &x, &y).unwrap();
        prop_assert!((xy - hilbert_distance(&b, &y, &x).unwrap()).abs() < 1e-8 * (1.0 + xy));
        prop_assert!(xy <= hilbert_distance(&b, &x, &z).unwrap() + hilbert_distance(&b, &z, &y).unwrap() + 1e-8);
    }

    #[test]
    fn paraboloid_distance_is_hyperbolic(x in paraboloid_point(), y in paraboloid_point()) {
        let h = hilbert_distance(&Paraboloid::new(3, 0.0), &x, &y).unwrap();
        let q = hyperbolic_distance_q(&lift(&x), &lift(&y)).unwrap();
        prop_assert!((h - q).abs() < 1e-8 * (1.0 + q), "{} vs {}", h, q);
    }

    #[test]
    fn parabolic_maps_are_isometries(x in paraboloid_point(), y in paraboloid_point(), v in prop::collection::vec(-1.5..1.5f64, 2)) {
        let p = Paraboloid::new(3, 0.0);
        let g = make_parabolic(3, &v).unwrap();
        let image = |z: &DVector<f64>| p.patch().chart(&g.apply(&lift(z))).unwrap();
        let before = hilbert_distance(&p, &x, &y).unwrap();
        let after = hilbert_distance(&p, &image(&x), &image(&y)).unwrap();
        prop_assert!((before - after).abs() < 1e-8 * (1.0 + before));
    }

    #[test]
    fn bent_group_acts_by_isometries_preserving_levels(x in bent_point(), y in bent_point(), b in -1.0..1.0f64, v in -1.5..1.5f64) {
        let dom = BentDomain::new(3, 0.0).unwrap();
        let g = BentGroupElement::new(b, vec![v]);
        let (gx, gy) = (g.apply_chart(&x), g.apply_chart(&y));
        prop_assert!((BentDomain::horo_level(&gx) - BentDomain::horo_level(&x)).abs() < 1e-10 * (1.0 + x[0].abs()));
        let before = hilbert_distance(&dom, &x, &y).unwrap();
        let after = hilbert_distance(&dom, &gx, &gy).unwrap();
        prop_assert!((before - after).abs() < 1e-8 * (1.0 + before), "{} vs {}", before, after);
    }

    #[test]
    fn bent_model_is_convex(x in bent_point(), y in bent_point(), s in 0.0..1.0f64) {
        let dom = BentDomain::new(3, 0.0).unwrap();
        let z = &x * (1.0 - s) + &y * s;
        prop_assert_eq!(dom.membership(&z), Membership::Interior);
    }

    #[test]
    fn finsler_norm_is_the_distance_derivative(x in ellipsoid_point(), v in prop::collection::vec(-1.0..1.0f64, 3)) {
        let e = ellipsoid();
        let v = DVector::from_vec(v);
        prop_assume!(v.norm() > 0.1);
        let h = 1e-5;
        let fd = (hilbert_distance(&e, &x, &(&x + &v * h)).unwrap() + hilbert_distance(&e, &x, &(&x - &v * h)).unwrap()) / (2.0 * h);
        let f = finsler_norm(&e, &x, &v).unwrap();
        prop_assert!((fd - f).abs() < 1e-4 * f.max(1.0), "{} vs {}", fd, f);
    }
}
