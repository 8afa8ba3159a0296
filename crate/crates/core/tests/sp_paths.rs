mod common;

use std::f64::consts::{PI, TAU};

use approx::assert_abs_diff_eq;
use common::{crossing_form_cz, TrigLoop};
use proptest::prelude::*;
use reeb_core::sp_paths::*;

fn rotation_path(rate: f64, steps: usize) -> SymplecticPath {
    SymplecticPath::from_fn(|t| rotation(rate * t), steps).unwrap()
}

fn hyperbolic_model(c: Mat2, k: f64, steps: usize) -> SymplecticPath {
    let ci = symplectic_inverse(&c);
    SymplecticPath::from_fn(
        |t| c * Mat2::new((k * t).exp(), 0.0, 0.0, (-k * t).exp()) * ci,
        steps,
    )
    .unwrap()
}

fn symplectic_from(a: f64, b: f64, c: f64) -> Mat2 {
    // a shear times a rotation times a squeeze: always determinant one
    Mat2::new(1.0, a, 0.0, 1.0) * rotation(b) * Mat2::new(c.exp(), 0.0, 0.0, (-c).exp())
}

#[test]
fn zero_generator_gives_identity_path() {
    let p = evolve_linear_system(|_| Mat2::zeros(), 64).unwrap();
    assert_eq!(p.len(), 65);
    for m in p.samples() {
        assert_eq!(*m, Mat2::identity());
    }
}

#[test]
fn neck_generator_matches_closed_form() {
    let (f0, f2) = (1.0, 4.0);
    let a = (TAU * f0).sqrt();
    let b = (PI * f2).sqrt() / (2.0 * f0);
    let gen = Mat2::new(0.0, -a * a, -b * b, 0.0);
    let p = evolve_linear_system(|_| gen, 4096).unwrap();
    for (k, m) in p.samples().iter().enumerate().step_by(97) {
        let t = p.time(k);
        let (ch, sh) = ((a * b * t).cosh(), (a * b * t).sinh());
        let exact = Mat2::new(ch, -(a / b) * sh, -(b / a) * sh, ch);
        assert!(
            (m - exact).norm() <= 1e-6,
            "t = {t}: {}",
            (m - exact).norm()
        );
    }
}

#[test]
fn rotation_generator_matches_closed_form() {
    let p = evolve_linear_system(|_| j0() * TAU, 2048).unwrap();
    for (k, m) in p.samples().iter().enumerate() {
        assert!((m - rotation(TAU * p.time(k))).norm() <= 1e-6);
    }
}

#[test]
fn evolve_rejects_bad_input() {
    assert_eq!(
        evolve_linear_system(|_| Mat2::zeros(), 15).unwrap_err(),
        PathError::TooFewSteps(15)
    );
    assert!(matches!(
        evolve_linear_system(
            |t| if t > 0.5 {
                Mat2::repeat(f64::NAN)
            } else {
                Mat2::zeros()
            },
            32
        ),
        Err(PathError::NonFiniteGenerator(_))
    ));
}

#[test]
fn maslov_examples() {
    assert_eq!(maslov_index(&rotation_path(TAU, 256)).unwrap(), 1);
    assert_eq!(maslov_index(&rotation_path(2.0 * TAU, 256)).unwrap(), 2);
    assert_eq!(maslov_index(&rotation_path(-TAU, 256)).unwrap(), -1);
    let constant = SymplecticPath::from_fn(|_| Mat2::identity(), 16).unwrap();
    assert_eq!(maslov_index(&constant).unwrap(), 0);
}

#[test]
fn maslov_errors() {
    assert!(matches!(
        maslov_index(&rotation_path(PI, 64)),
        Err(PathError::NotALoop(_))
    ));
    assert!(matches!(
        maslov_index(&rotation_path(4.0 * TAU, 8)),
        Err(PathError::UnderResolved { .. })
    ));
}

#[test]
fn cz_examples() {
    let c = symplectic_from(0.7, -0.4, 0.3);
    assert_eq!(conley_zehnder(&hyperbolic_model(c, 1.3, 512)).unwrap(), 0);
    assert_eq!(conley_zehnder(&hyperbolic_model(c, -2.0, 512)).unwrap(), 0);
    assert_eq!(conley_zehnder(&rotation_path(TAU * 0.3, 256)).unwrap(), 1);
    assert_eq!(conley_zehnder(&rotation_path(TAU * 2.3, 512)).unwrap(), 5);
    assert_eq!(conley_zehnder(&rotation_path(-TAU * 0.3, 256)).unwrap(), -1);
}

#[test]
fn cz_of_negative_hyperbolic_endpoint() {
    // rotate by pi while stretching: endpoint has negative real eigenvalues
    let p = SymplecticPath::from_fn(
        |t| rotation(PI * t) * Mat2::new((2.0 * t).exp(), 0.0, 0.0, (-2.0 * t).exp()),
        512,
    )
    .unwrap();
    assert_eq!(
        classify_endpoint(&SymplecticMatrix::new(p.endpoint()).unwrap()).kind,
        EndpointKind::HyperbolicOdd
    );
    assert_eq!(conley_zehnder(&p).unwrap(), 1);
}

#[test]
fn cz_errors() {
    assert!(matches!(
        conley_zehnder(&rotation_path(TAU, 256)),
        Err(PathError::Degenerate(_))
    ));
    assert!(matches!(
        conley_zehnder(&rotation_path(TAU * 5.3, 16)),
        Err(PathError::UnderResolved { .. })
    ));
}

#[test]
fn iterate_examples() {
    assert_eq!(cz_iterate(CzBase::Hyperbolic(-2), 3).unwrap(), -6);
    assert_eq!(cz_iterate(CzBase::Elliptic(0.3), 4).unwrap(), 3);
    assert_eq!(cz_iterate(CzBase::Hyperbolic(0), 7).unwrap(), 0);
    assert!(matches!(
        cz_iterate(CzBase::Elliptic(0.25), 4),
        Err(PathError::NearIntegerIterate(_))
    ));
    assert_eq!(
        cz_iterate(CzBase::Hyperbolic(1), 0),
        Err(PathError::ZeroIterate)
    );
}

#[test]
fn classify_examples() {
    let k = |m: Mat2| classify_endpoint(&SymplecticMatrix::new(m).unwrap()).kind;
    assert_eq!(
        k(Mat2::new(2.0, 0.0, 0.0, 0.5)),
        EndpointKind::HyperbolicEven
    );
    assert_eq!(k(rotation(1.0)), EndpointKind::Elliptic);
    assert_eq!(
        k(Mat2::new(-2.0, 0.0, 0.0, -0.5)),
        EndpointKind::HyperbolicOdd
    );
    assert_eq!(k(Mat2::identity()), EndpointKind::Degenerate);
    assert_eq!(k(Mat2::new(1.0, 3.0, 0.0, 1.0)), EndpointKind::Degenerate);
    let c = classify_endpoint(&SymplecticMatrix::new(rotation(1.0)).unwrap());
    assert_abs_diff_eq!(c.eigenvalues[0].im, 1.0f64.sin(), epsilon = 1e-12);
}

#[test]
fn symplectic_matrix_invariant() {
    assert!(SymplecticMatrix::new(Mat2::new(2.0, 0.0, 0.0, 2.0)).is_err());
    assert!(SymplecticMatrix::new(Mat2::new(2.0, 0.0, 0.0, 0.5 + 1e-10)).is_ok());
    assert!(SymplecticPath::new(vec![rotation(0.1), rotation(0.2)]).is_err());
}

#[test]
fn rotation_family_matches_elliptic_formula() {
    for i in 0..20 {
        let theta = -3.0 + 0.3137 * i as f64;
        if (theta - theta.round()).abs() < 1e-3 {
            continue;
        }
        let p = rotation_path(TAU * theta, 1024);
        assert_eq!(
            conley_zehnder(&p).unwrap(),
            2 * theta.floor() as i64 + 1,
            "theta = {theta}"
        );
    }
}

#[test]
fn long_hyperbolic_path_keeps_index_zero() {
    // growth e^30 still yields a clean rotation-angle count
    let gen = Mat2::new(0.0, -0.5, -1800.0, 0.0);
    let p = evolve_linear_system(|_| gen, 10_000).unwrap();
    let m = SymplecticMatrix::new(p.endpoint()).unwrap();
    assert_eq!(classify_endpoint(&m).kind, EndpointKind::HyperbolicEven);
    assert_eq!(conley_zehnder(&p).unwrap(), 0);
}

fn arb_moderate_loop() -> impl Strategy<Value = TrigLoop> {
    (
        prop::array::uniform3(-2.0f64..2.0),
        prop::array::uniform3(-1.0f64..1.0),
        prop::array::uniform3(-1.0f64..1.0),
    )
        .prop_map(|(s0, s1, s2)| TrigLoop { s0, s1, s2 })
}

fn arb_loop() -> impl Strategy<Value = TrigLoop> {
    (
        prop::array::uniform3(-8.0f64..8.0),
        prop::array::uniform3(-4.0f64..4.0),
        prop::array::uniform3(-4.0f64..4.0),
    )
        .prop_map(|(s0, s1, s2)| TrigLoop { s0, s1, s2 })
}

fn nondegenerate_path(l: &TrigLoop) -> Option<SymplecticPath> {
    let p = evolve_linear_system(|t| l.generator(t), 2048).ok()?;
    (det_minus_identity(&p.endpoint()).abs() > 1e-3).then_some(p)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inverse_axiom(l in arb_loop()) {
        if let Some(p) = nondegenerate_path(&l) {
            prop_assert_eq!(conley_zehnder(&p.inverse()).unwrap(), -conley_zehnder(&p).unwrap());
        }
    }

    #[test]
    fn loop_compatibility(l in arb_loop(), k in -2i64..=2) {
        if let Some(p) = nondegenerate_path(&l) {
            let g = rotation_path(TAU * k as f64, 2048);
            let gp = p.left_multiply(&g).unwrap();
            prop_assert_eq!(maslov_index(&g).unwrap(), k);
            prop_assert_eq!(conley_zehnder(&gp).unwrap(), 2 * k + conley_zehnder(&p).unwrap());
        }
    }

    #[test]
    fn conjugation_invariance(l in arb_loop(), a in -2.0f64..2.0, b in -3.0f64..3.0, c in -1.5f64..1.5) {
        if let Some(p) = nondegenerate_path(&l) {
            let cm = SymplecticMatrix::new(symplectic_from(a, b, c)).unwrap();
            prop_assert_eq!(conley_zehnder(&p.conjugate(&cm)).unwrap(), conley_zehnder(&p).unwrap());
        }
    }

    #[test]
    fn parity_matches_endpoint_class(l in arb_loop()) {
        if let Some(p) = nondegenerate_path(&l) {
            let cz = conley_zehnder(&p).unwrap();
            let kind = classify_endpoint(&SymplecticMatrix::new(p.endpoint()).unwrap()).kind;
            prop_assert_eq!(cz.rem_euclid(2) == 0, kind == EndpointKind::HyperbolicEven);
        }
    }

    #[test]
    fn agrees_with_crossing_form(l in arb_loop()) {
        if let Some(p) = nondegenerate_path(&l) {
            prop_assert_eq!(conley_zehnder(&p).unwrap(), crossing_form_cz(p.samples(), |t| l.generator(t)));
        }
    }

    #[test]
    // absolute drift scales with |ad| + |bc|, so keep the generator moderate here
    fn determinant_drift_is_small(l in arb_moderate_loop(), steps in 1024usize..4096) {
        let (_, stats) = evolve_linear_system_with_stats(|t| l.generator(t), steps).unwrap();
        prop_assert!(stats.max_det_drift <= 1e-7, "drift {}", stats.max_det_drift);
    }

    #[test]
    fn hyperbolic_conjugates_have_index_zero(a in -2.0f64..2.0, b in -3.0f64..3.0, c in -1.5f64..1.5, k in 0.2f64..6.0, sign in prop::bool::ANY) {
        let k = if sign { k } else { -k };
        prop_assert_eq!(conley_zehnder(&hyperbolic_model(symplectic_from(a, b, c), k, 1024)).unwrap(), 0);
    }
}
