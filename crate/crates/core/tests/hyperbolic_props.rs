use bending_core::hyperbolic::{
    bending_matrix, commutator, exp_nilpotent, make_parabolic, parabolic_algebra_element, parabolic_centralizer_candidate,
    parabolic_matrix, QuadraticForm,
};
use proptest::prelude::*;

proptest! {
    #[test]
    fn parabolic_and_bending_elements_preserve_q(d in 2usize..6, raw in prop::collection::vec(-3.0..3.0f64, 5), t in -2.0..2.0f64) {
        let q = QuadraticForm::<f64>::standard(d);
        let p = parabolic_matrix(d, &raw[..d - 1]).unwrap();
        prop_assert!(q.preservation_residual(&p) < 1e-12 * (1.0 + p.amax().powi(2)));
        let c = bending_matrix(d, t);
        let r = commutator(&(c.transpose() * q.gram() * &c), q.gram()).amax();
        prop_assert!(r < 1e-9 * c.amax().powi(4));
    }

    #[test]
    fn bending_path_is_a_one_parameter_group(d in 2usize..6, s in -1.5..1.5f64, t in -1.5..1.5f64) {
        let lhs = bending_matrix(d, s) * bending_matrix(d, t);
        let rhs = bending_matrix(d, s + t);
        prop_assert!((lhs - &rhs).amax() < 1e-12 * rhs.amax());
    }

    #[test]
    fn exponential_of_algebra_element_is_parabolic(d in 2usize..6, raw in prop::collection::vec(-3.0..3.0f64, 5)) {
        let u = &raw[..d - 1];
        let e = exp_nilpotent(&parabolic_algebra_element(d, u).unwrap());
        let p = make_parabolic(d, u).unwrap();
        prop_assert!((e - p.matrix()).amax() < 1e-12 * (1.0 + p.matrix().amax()));
    }

    #[test]
    fn parabolic_elements_commute(d in 2usize..6, a in prop::collection::vec(-2.0..2.0f64, 5), b in prop::collection::vec(-2.0..2.0f64, 5)) {
        let p = parabolic_matrix(d, &a[..d - 1]).unwrap();
        let q = parabolic_matrix(d, &b[..d - 1]).unwrap();
        prop_assert!(commutator(&p, &q).amax() < 1e-12);
    }

    #[test]
    fn centralizer_candidate_commutator_corner(d in 3usize..6, u in prop::collection::vec(-2.0..2.0f64, 4), w in prop::collection::vec(-2.0..2.0f64, 4), v in prop::collection::vec(-2.0..2.0f64, 4), b in -2.0..2.0f64) {
        let m = d - 1;
        let c = parabolic_centralizer_candidate(&u[..m], &w[..m], b).unwrap();
        let p = parabolic_matrix(d, &v[..m]).unwrap();
        let corner = commutator(&c, &p)[(0, d)];
        let expected: f64 = (0..m).map(|i| v[i] * (u[i] - w[i])).sum();
        prop_assert!((corner - expected).abs() < 1e-12 * (1.0 + expected.abs()).max(10.0));
    }
}
