use std::f64::consts::PI;

use num_complex::Complex64;

use super::characteristic::{decay_radius, transform_step, transform_to_grid};
use super::{PhaseGrid, QuasiDistribution, QuasiKind};
use crate::error::{Error, Result};
use crate::fock::DensityMatrix;
use crate::special::ln_factorial;

#[derive(Debug, Clone, Copy)]
pub struct MehtaOptions {
    /// `|e^{|υ|²}<−υ|ρ|υ>|` must fall below this before the υ window closes. The series is
    /// alternating, so its rounding floor grows like `e^{|υ|²/2}`; values near `1e-6` keep
    /// the window inside the accurate region.
    pub decay_threshold: f64,
    pub max_radius: Option<f64>,
    /// Largest admissible absolute error in P. The truncated υ window leaves an error of about
    /// `(2/π)·decay_threshold` in `P e^{−|α|²}`; grid points where `e^{|α|²}` lifts that above
    /// this tolerance are set to zero and counted in the `masked_points` diagnostic.
    pub trust_tolerance: f64,
}

impl Default for MehtaOptions {
    fn default() -> Self {
        MehtaOptions {
            decay_threshold: 1e-6,
            max_radius: None,
            trust_tolerance: 1e-2,
        }
    }
}

/// `e^{|υ|²} <−υ|ρ|υ> = Σ ρ_nm (−υ*)^n υ^m / sqrt(n! m!)`.
fn mehta_kernel(rho: &DensityMatrix, d: usize, v: Complex64) -> Complex64 {
    let m = rho.matrix();
    let mut left = Vec::with_capacity(d);
    let mut right = Vec::with_capacity(d);
    let (mut l, mut r) = (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
    for n in 0..d {
        let norm = (-0.5 * ln_factorial(n)).exp();
        left.push(l * norm);
        right.push(r * norm);
        l *= -v.conj();
        r *= v;
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..d {
        let mut row = Complex64::new(0.0, 0.0);
        for j in 0..d {
            row += m[(i, j)] * right[j];
        }
        acc += left[i] * row;
    }
    acc
}

/// Glauber–Sudarshan P by Mehta's formula:
/// `P(α) = e^{|α|²} (1/π²) ∫ d²υ e^{|υ|²} <−υ|ρ|υ> e^{αυ* − α*υ}`.
///
/// Fails with [`Error::IllPosed`] when `e^{|υ|²}<−υ|ρ|υ>` does not decay, which is the case
/// whenever P is not an ordinary function (vacuum, coherent states, any pure state).
pub fn mehta_p(rho: &DensityMatrix, grid: &PhaseGrid, opts: &MehtaOptions) -> Result<QuasiDistribution> {
    grid.validate()?;
    // no cropping: tiny populations still multiply |υ|^{2n}/n!, which is huge at the window edge
    let d = rho.dim();
    let f = |v: Complex64| mehta_kernel(rho, d, v);
    let max_radius = opts.max_radius.unwrap_or(2.0 * (rho.dim() as f64).sqrt() + 8.0);
    let window = match decay_radius(&f, opts.decay_threshold, max_radius) {
        Ok(r) => r,
        Err(Error::InsufficientDecay { radius, residual }) => {
            return Err(Error::IllPosed { radius, residual })
        }
        Err(e) => return Err(e),
    };
    let step = transform_step(rho, grid);
    let (g, imag) = transform_to_grid(f, grid, window, step);
    let floor = 2.0 / PI * opts.decay_threshold;
    let trusted = (opts.trust_tolerance / floor).ln().max(0.0);
    let mut values = Vec::with_capacity(g.len());
    let mut amplification: f64 = 1.0;
    let mut masked = 0usize;
    for i in 0..grid.nq {
        for j in 0..grid.np {
            let r2 = grid.alpha(i, j).norm_sqr();
            if r2 > trusted {
                masked += 1;
                values.push(0.0);
                continue;
            }
            let weight = r2.exp();
            amplification = amplification.max(weight);
            values.push(g[i * grid.np + j] * weight);
        }
    }
    let mut out = QuasiDistribution::new(*grid, QuasiKind::SParam { s: 1.0 }, values)?;
    out.diagnostics.set("imag_residual", imag * amplification);
    out.diagnostics.set("upsilon_window", window);
    out.diagnostics.set("trusted_radius", trusted.sqrt());
    out.diagnostics.set("masked_points", masked as f64);
    if masked > 0 {
        out.diagnostics.warn(format!(
            "{masked} points beyond |α| = {:.3} set to zero; e^{{|α|²}} amplifies the error past tolerance",
            trusted.sqrt()
        ));
    }
    // rounding in the kernel is amplified by e^{|υ|²/2} at the window edge and by e^{|α|²}
    // on the grid
    let condition = (0.5 * window * window).exp() * amplification;
    out.diagnostics.set("condition_estimate", condition);
    if condition * f64::EPSILON > 1e-3 {
        out.diagnostics
            .warn(format!("P reconstruction is ill-conditioned (estimate {condition:.3e})"));
    }
    Ok(out)
}
