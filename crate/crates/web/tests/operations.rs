use std::f64::consts::PI;

use quasiphase_web::{compute_amplified, compute_distribution, compute_moment};

#[test]
fn vacuum_wigner_peaks_at_two_over_pi() {
    let f = compute_distribution("fock:0", 0.0, 16, 65).unwrap();
    assert_eq!(f.points(), 65);
    assert_eq!(f.values().len(), 65 * 65);
    assert!((f.max() - 2.0 / PI).abs() < 1e-10, "max {}", f.max());
    assert!((f.normalization() - 1.0).abs() < 1e-6);
}

#[test]
fn fock_one_wigner_is_negative_at_the_origin() {
    let f = compute_distribution("fock:1", 0.0, 16, 65).unwrap();
    assert!((f.min() + 2.0 / PI).abs() < 1e-10, "min {}", f.min());
}

#[test]
fn husimi_and_p_are_available() {
    let q = compute_distribution("coherent:1", -1.0, 32, 48).unwrap();
    assert!(q.min() >= 0.0 && q.max() <= 1.0 / PI + 1e-12);
    let p = compute_distribution("thermal:1", 1.0, 64, 49).unwrap();
    assert!((p.max() - 1.0 / PI).abs() < 1e-3, "P(0) {}", p.max());
    assert!(p.note().contains("thermal:1"));
}

#[test]
fn amplified_coherent_mean_is_scaled_by_gain() {
    let f = compute_amplified("coherent:1", 0.5, 1.0, 2.0, 0.3, 32, 96).unwrap();
    assert!((f.normalization() - 1.0).abs() < 2e-3);
    assert!(f.note().starts_with("G = 1.349859"), "{}", f.note());
}

#[test]
fn moment_routes_agree() {
    let m = compute_moment(2, 3, 0.4, -0.2, 1.5, 0.7).unwrap();
    let scale = m.closed_re.hypot(m.closed_im);
    assert!((m.closed_re - m.quadrature_re).abs() < 1e-12 * scale);
    assert!((m.closed_im - m.quadrature_im).abs() < 1e-12 * scale);
    // I_{0,0} = pi m / G^2
    let z = compute_moment(0, 0, 0.3, 0.1, 2.0, 0.5).unwrap();
    assert!((z.closed_re - PI * 0.5 / 4.0).abs() < 1e-14);
}

#[test]
fn bad_inputs_are_reported() {
    assert!(compute_distribution("nonsense", 0.0, 16, 32).is_err());
    assert!(compute_distribution("fock:0", 0.0, 1, 32).is_err());
    assert!(compute_distribution("fock:0", 0.0, 16, 4).is_err());
    assert!(compute_amplified("fock:0", 0.5, 2.0, 1.0, 1.0, 16, 32).is_err());
    assert!(compute_moment(1, 1, 0.0, 0.0, 0.5, 1.0).is_err());
}
