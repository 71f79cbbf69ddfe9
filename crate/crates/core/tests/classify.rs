use bending_core::bending::{bend, BentRepresentation};
use bending_core::classify::{
    classify, horoball_sandwich, periodic_perturbation, precise_invariance_level, ClassifyOptions, CuspKind, CuspReport,
    PeripheralData, SignedPoint,
};
use bending_core::config::{bundled, parse_json, BendingConfig};
use bending_core::cusp::{LatticeCell, ModelKind};
use bending_core::hyperbolic::{bending_matrix, make_parabolic, parabolic_matrix};
use bending_core::ProjectiveMap;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

fn peripheral(rep: &BentRepresentation<f64>, cfg: &BendingConfig, cusp: usize) -> PeripheralData<f64> {
    let c = &cfg.cusps[cusp];
    PeripheralData {
        gamma: rep.evaluate_word(&c.gamma.to_word().unwrap()).unwrap(),
        delta: c.delta.iter().map(|w| rep.evaluate_word(&w.to_word().unwrap()).unwrap()).collect(),
        signed_points: c.signed_points.clone(),
    }
}

fn reports(name: &str, t: f64) -> Vec<CuspReport> {
    let cfg: BendingConfig = parse_json(bundled(name).unwrap()).unwrap();
    let rep = bend(&cfg.to_data().unwrap(), t).unwrap();
    (0..cfg.cusps.len())
        .map(|i| classify(&cfg.cusps[i].name, &peripheral(&rep, &cfg, i), t, ClassifyOptions::default()).unwrap())
        .collect()
}

fn kinds(name: &str, t: f64) -> Vec<CuspKind> {
    reports(name, t).into_iter().map(|r| r.kind).collect()
}

#[test]
fn bundled_cusps() {
    assert_eq!(kinds("whitehead", 0.5), vec![CuspKind::Bent, CuspKind::Standard]);
    assert_eq!(kinds("whitehead", 0.0), vec![CuspKind::Standard, CuspKind::Standard]);
    assert_eq!(kinds("hnn_d4", 0.3), vec![CuspKind::Bent, CuspKind::Standard]);
    assert_eq!(kinds("amalgam", -1.0), vec![CuspKind::Standard]);
    assert_eq!(kinds("degenerate_p", 0.5), vec![CuspKind::DegenerateP]);
}

#[test]
fn circle_scale_matches_pencil() {
    for t in [-0.8, -0.2, 0.3, 0.5] {
        for r in reports("whitehead", t) {
            let circle = r.affine_circle.unwrap();
            assert!(circle.beta_mismatch < 1e-7, "{} at {t}: {}", r.cusp, circle.beta_mismatch);
            assert_eq!(circle.predicted_standard, r.kind == CuspKind::Standard);
        }
    }
}

#[test]
fn degenerate_report_carries_certified_witness() {
    let r = &reports("degenerate_p", 0.0)[0];
    assert!(r.non_convex);
    assert!(r.witness.as_ref().unwrap().certified(1e-6));
}

#[test]
fn report_round_trips_through_json() {
    for r in reports("whitehead", 0.5).into_iter().chain(reports("degenerate_p", 0.2)) {
        let text = serde_json::to_string_pretty(&r).unwrap();
        let back: CuspReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }
}

#[test]
fn config_round_trips_through_json() {
    for name in ["whitehead", "amalgam", "degenerate_p", "hnn_d4"] {
        let cfg: BendingConfig = parse_json(bundled(name).unwrap()).unwrap();
        let back: BendingConfig = parse_json(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
    }
}

#[test]
fn out_of_order_points_are_rejected() {
    let cfg: BendingConfig = parse_json(bundled("whitehead").unwrap()).unwrap();
    let rep = bend(&cfg.to_data().unwrap(), 0.5).unwrap();
    let mut data = peripheral(&rep, &cfg, 0);
    data.signed_points = vec![SignedPoint { p: 0.6, sign: 1 }, SignedPoint { p: 0.3, sign: -1 }];
    assert!(classify("T1", &data, 0.5, ClassifyOptions::default()).is_err());
}

/// Element `[[e², f, 0, 0], [0, 1, 0, g], [0, 0, eI, 0], [0, 0, 0, 1]]` normalizing `P⁰_{d-1}`.
fn normalizer(d: usize, e: f64, f: f64, g: f64) -> ProjectiveMap<f64> {
    let mut m = DMatrix::identity(d + 1, d + 1);
    m[(0, 0)] = e * e;
    m[(0, 1)] = f;
    m[(1, d)] = g;
    for i in 2..d {
        m[(i, i)] = e;
    }
    ProjectiveMap::new(m).unwrap()
}

fn wall_translations(d: usize) -> Vec<ProjectiveMap<f64>> {
    (1..d - 1)
        .map(|i| {
            let mut v = vec![0.0; d - 1];
            v[i] = 1.0;
            make_parabolic(d, &v).unwrap()
        })
        .collect()
}

/// `c_t P(v)` with `v_1 ≠ 0`, bent for `t ≠ 0`, or `P(v)` itself at `t = 0`.
fn peripheral_element(d: usize, t: f64, v: &[f64]) -> ProjectiveMap<f64> {
    ProjectiveMap::new(bending_matrix(d, t) * parabolic_matrix(d, v).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn kind_is_conjugation_stable(
        d in 3usize..6,
        t in prop_oneof![Just(0.0), -1.0..-0.05f64, 0.05..1.0f64],
        v1 in 0.2..2.0f64,
        rest in prop::collection::vec(-1.0..1.0f64, 3),
        e in 0.5..2.0f64, f in -1.0..1.0f64, g in -1.0..1.0f64,
    ) {
        let mut v = vec![v1];
        v.extend_from_slice(&rest[..d - 2]);
        let data = PeripheralData { delta: wall_translations(d), gamma: peripheral_element(d, t, &v), signed_points: vec![] };
        let base = classify("c", &data, t, ClassifyOptions::default()).unwrap().kind;
        let expected = if t == 0.0 { CuspKind::Standard } else { CuspKind::Bent };
        prop_assert_eq!(base, expected);
        let moved = data.conjugate_by(&normalizer(d, e, f, g));
        prop_assert_eq!(classify("c", &moved, t, ClassifyOptions::default()).unwrap().kind, base);
        let inverse = PeripheralData { gamma: data.gamma.inverse(), ..data.clone() };
        prop_assert_eq!(classify("c", &inverse, t, ClassifyOptions::default()).unwrap().kind, base);
    }

    #[test]
    fn sandwich_recovers_perturbation_amplitude(amp in 0.0..0.5f64, a in 0.3..2.0f64, b in 0.3..2.0f64) {
        let cell = LatticeCell::new(DVector::zeros(2), DMatrix::from_diagonal(&DVector::from_vec(vec![a, b]))).unwrap();
        for kind in [ModelKind::Standard, ModelKind::Bent] {
            let s = horoball_sandwich(periodic_perturbation(kind, &cell, amp), kind, &cell, 64).unwrap();
            prop_assert!(s.upper >= amp - 1e-9 && s.lower >= amp - 1e-9);
            prop_assert!(s.upper <= amp + s.margin + 1e-9 && s.lower <= amp + s.margin + 1e-9, "{:?}", s);
            prop_assert!(s.margin <= amp * 0.11 + 1e-12, "{:?}", s);
        }
    }
}

#[test]
fn invariance_level_is_monotone_in_epsilon() {
    for kind in [ModelKind::Standard, ModelKind::Bent] {
        let mut last = f64::INFINITY;
        for eps in [0.05, 0.1, 0.2, 0.4] {
            let r = precise_invariance_level(kind, 3, &[1.0], eps, 100, 9).unwrap();
            assert!(r.spread < 1e-6 && r.displacement < eps);
            assert!(r.level <= last);
            last = r.level;
        }
    }
}
