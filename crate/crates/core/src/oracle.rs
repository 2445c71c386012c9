//! Brute-force reference quadratures used by the verification suites.

/// Adaptive Simpson rule on `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 50)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(f: &impl Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// `∫_0^∞ ρ^{2n+1} e^{−ρ²} dρ` by adaptive Simpson, truncated where the integrand is below
/// `1e-300` of its peak.
pub fn radial_quadrature(n: u32, rel_tol: f64) -> f64 {
    let p = 2 * n + 1;
    let f = |r: f64| if r == 0.0 { 0.0 } else { (p as f64 * r.ln() - r * r).exp() };
    // the integrand peaks at sqrt(p/2); beyond sqrt(p/2) + 28 it is e^{-780} smaller
    let peak = (p as f64 / 2.0).sqrt();
    let upper = peak + 28.0;
    let scale = f(peak) * upper;
    // split at the peak so both halves start with a well-resolved Simpson estimate
    adaptive_simpson(&f, 0.0, peak, rel_tol * scale * 1e-2) + adaptive_simpson(&f, peak, upper, rel_tol * scale * 1e-2)
}
