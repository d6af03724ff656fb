use quasilab::axb::{integrate, numeric_jacobian, AffineElement, TestFunction, DEFAULT_QUAD_TOL};
use quasilab::Side;

// Reference values from 40-digit quadrature of the separable integrals
// ∫ φ_a(a)/a² da · ∫ φ_b(b) db, computed outside this crate.
const BASELINE_K4_CENTER_2_0_RADII_HALF: f64 = 0.042_000_978_938_987_97;
const BASELINE_K3_CENTER_1_2_RADII_03_1: f64 = 0.258_622_315_860_303_65;

fn g(a: f64, b: f64) -> AffineElement<f64> {
    AffineElement::new(a, b).unwrap()
}

fn rel(x: f64, y: f64) -> f64 {
    (x - y).abs() / y.abs()
}

#[test]
fn baseline_matches_reference() {
    let f = TestFunction::new((2.0, 0.0), (0.5, 0.5), 4).unwrap();
    let i = integrate(&f, None, DEFAULT_QUAD_TOL).unwrap();
    assert!(rel(i, BASELINE_K4_CENTER_2_0_RADII_HALF) < 1e-8, "{i}");

    let f = TestFunction::new((1.0, 2.0), (0.3, 1.0), 3).unwrap();
    let i = integrate(&f, None, DEFAULT_QUAD_TOL).unwrap();
    assert!(rel(i, BASELINE_K3_CENTER_1_2_RADII_03_1) < 1e-8, "{i}");
}

#[test]
fn left_translation_preserves_the_integral() {
    let f = TestFunction::new((2.0, 0.0), (0.5, 0.5), 4).unwrap();
    let i = integrate(&f, Some((Side::Left, g(2.0, 3.0))), DEFAULT_QUAD_TOL).unwrap();
    assert!(rel(i, BASELINE_K4_CENTER_2_0_RADII_HALF) < 1e-6);
}

#[test]
fn right_translation_scales_by_alpha() {
    let f = TestFunction::new((2.0, 0.0), (0.5, 0.5), 4).unwrap();
    let i = integrate(&f, Some((Side::Right, g(2.0, 1.0))), DEFAULT_QUAD_TOL).unwrap();
    assert!(rel(i, 2.0 * BASELINE_K4_CENTER_2_0_RADII_HALF) < 1e-6);
    let i = integrate(&f, Some((Side::Right, g(0.5, -2.0))), DEFAULT_QUAD_TOL).unwrap();
    assert!(rel(i, 0.5 * BASELINE_K4_CENTER_2_0_RADII_HALF) < 1e-6);
}

#[test]
fn support_leaving_half_plane_is_rejected() {
    let f = TestFunction::new((2.0, 0.0), (0.5, 0.5), 4).unwrap();
    // translations rescale a by a positive factor, so only the bump itself
    // can touch a ≤ 0
    assert!(integrate(&f, Some((Side::Left, g(1e3, 0.0))), DEFAULT_QUAD_TOL).is_ok());
    assert!(TestFunction::new((0.3, 0.0), (0.3, 1.0), 4).is_err());
}

#[test]
fn jacobian_is_constant_in_base_point() {
    let h = 1e-4;
    let gg = g(3.0, 1.0);
    for p in [g(0.5, 0.0), g(1.0, -3.0), g(4.0, 9.0), g(10.0, 0.1)] {
        assert!((numeric_jacobian(Side::Left, &gg, &p, h).unwrap() - 9.0).abs() < 1e-6);
        assert!((numeric_jacobian(Side::Right, &gg, &p, h).unwrap() - 3.0).abs() < 1e-6);
    }
}
