use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{effective_dim, PhaseGrid, QuasiDistribution, QuasiKind};
use crate::error::{Error, Result};
use crate::fock::DensityMatrix;
use crate::special::trace_displacement;

/// `G(β, s) = Tr(D(β) ρ) e^{s|β|²/2}`.
pub fn characteristic_function(rho: &DensityMatrix, beta: Complex64, s: f64) -> Complex64 {
    if beta.norm_sqr() > rho.dim() as f64 / 4.0 {
        log::warn!(
            "characteristic_function: |beta|^2 = {:.2} is not small against dim = {}",
            beta.norm_sqr(),
            rho.dim()
        );
    }
    let (m, d) = cropped(rho);
    trace_displacement(&m, d, beta) * (0.5 * s * beta.norm_sqr()).exp()
}

#[derive(Debug, Clone, Copy)]
pub struct SOptions {
    /// `|G|` must stay below this on a band of rings before the transform window closes.
    pub decay_threshold: f64,
    /// Largest `|β|` the window may reach; defaults to `2 sqrt(dim) + 8`.
    pub max_radius: Option<f64>,
    /// Opt-in Gaussian regularization: evaluate at `s - shift` instead of `s`.
    pub regularization: Option<f64>,
}

impl Default for SOptions {
    fn default() -> Self {
        SOptions {
            decay_threshold: 1e-10,
            max_radius: None,
            regularization: None,
        }
    }
}

fn cropped(rho: &DensityMatrix) -> (Vec<Complex64>, usize) {
    let keep = effective_dim(rho);
    let m = rho.matrix();
    let mut out = Vec::with_capacity(keep * keep);
    for i in 0..keep {
        for j in 0..keep {
            out.push(m[(i, j)]);
        }
    }
    (out, keep)
}

/// Smallest radius from which `|G|` stays under `threshold` over a short band of rings.
///
/// The band guards against isolated radial zeros of `G`. It is kept short because the
/// characteristic function of a truncated state only decays like `e^{-|β|²/2}`, so for
/// `s > 0` the weighted function turns up again at large `|β|`.
pub(crate) fn decay_radius(g: impl Fn(Complex64) -> Complex64, threshold: f64, max_radius: f64) -> Result<f64> {
    const STEP: f64 = 0.25;
    const BAND: usize = 3;
    const ANGLES: usize = 24;
    let ring_max = |r: f64| {
        (0..ANGLES)
            .map(|k| g(Complex64::from_polar(r, 2.0 * PI * (k as f64 + 0.5) / ANGLES as f64)).norm())
            .fold(0.0, f64::max)
    };
    let rings = (max_radius / STEP).ceil() as usize;
    let mut quiet = 0;
    let mut last = 0.0;
    for k in 1..=rings {
        let r = k as f64 * STEP;
        last = ring_max(r);
        if !last.is_finite() {
            break;
        }
        if last < threshold {
            quiet += 1;
            if quiet > BAND {
                return Ok(r - BAND as f64 * STEP);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::InsufficientDecay {
        radius: max_radius,
        residual: last,
    })
}

/// β step whose aliasing period clears the grid plus the support of the state.
pub(crate) fn transform_step(rho: &DensityMatrix, grid: &PhaseGrid) -> f64 {
    let nbar = rho.mean_photon_number();
    let state_radius = nbar.sqrt() + 6.0 * ((nbar + 1.0) / 2.0).sqrt();
    let (ax, ay) = grid.alpha_extent();
    PI / (ax.max(ay) + state_radius + 1.0)
}

/// `(1/π²) Σ g(β) e^{αβ* − α*β} Δ²` over the disk `|β| <= window`, evaluated at every grid
/// point. The disk rather than its bounding square keeps `g` away from the corners, where a
/// truncated state's weighted characteristic function may have turned up again.
/// `g` must satisfy `g(−β) = g(β)*`. Returns the real parts (q-major) and the largest
/// imaginary part.
pub(crate) fn transform_to_grid(
    g: impl Fn(Complex64) -> Complex64,
    grid: &PhaseGrid,
    window: f64,
    step: f64,
) -> (Vec<f64>, f64) {
    let half = (window / step).ceil() as usize;
    let n = 2 * half + 1;
    let axis: Vec<f64> = (0..n).map(|k| (k as f64 - half as f64) * step).collect();

    // only half of the window is evaluated; the rest follows from g(−β) = g(β)*
    let mut gmat = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for l in 0..n {
        for k in 0..n {
            let (lm, km) = (n - 1 - l, n - 1 - k);
            if (l, k) > (lm, km) {
                continue;
            }
            let beta = Complex64::new(axis[l], axis[k]);
            if beta.norm() > window {
                continue;
            }
            let val = g(beta);
            gmat[(l, k)] = val;
            gmat[(lm, km)] = val.conj();
        }
    }

    // α = x + iy, β = u + iv: αβ* − α*β = 2i(yu − xv)
    let xs: Vec<f64> = (0..grid.nq).map(|i| grid.alpha(i, 0).re).collect();
    let ys: Vec<f64> = (0..grid.np).map(|j| grid.alpha(0, j).im).collect();
    let a = DMatrix::from_fn(grid.nq, n, |i, k| Complex64::from_polar(1.0, -2.0 * xs[i] * axis[k]));
    let b = DMatrix::from_fn(grid.np, n, |j, l| Complex64::from_polar(1.0, 2.0 * ys[j] * axis[l]));
    let f = &a * (&b * &gmat).transpose();
    let scale = step * step / (PI * PI);

    let mut values = Vec::with_capacity(grid.nq * grid.np);
    let mut imag: f64 = 0.0;
    for i in 0..grid.nq {
        for j in 0..grid.np {
            let z = f[(i, j)] * scale;
            values.push(z.re);
            imag = imag.max(z.im.abs());
        }
    }
    (values, imag)
}

/// `F(α, s) = (1/π²) ∫ d²β G(β, s) e^{αβ* − α*β}` on `grid`.
///
/// The β integral is a trapezoid sum over the disk bounded by the decay radius of `G`, with
/// a step small enough that the periodic images of `F` lie outside the grid plus the support
/// of the state.
pub fn s_distribution(rho: &DensityMatrix, grid: &PhaseGrid, s: f64, opts: &SOptions) -> Result<QuasiDistribution> {
    grid.validate()?;
    let s_eff = s - opts.regularization.unwrap_or(0.0);
    let (m, d) = cropped(rho);
    let g = |beta: Complex64| trace_displacement(&m, d, beta) * (0.5 * s_eff * beta.norm_sqr()).exp();

    let max_radius = opts.max_radius.unwrap_or(2.0 * (rho.dim() as f64).sqrt() + 8.0);
    let window = decay_radius(&g, opts.decay_threshold, max_radius)?;

    let step = transform_step(rho, grid);
    let (values, imag) = transform_to_grid(g, grid, window, step);
    let mut out = QuasiDistribution::new(*grid, QuasiKind::SParam { s: s_eff }, values)?;
    out.diagnostics.set("imag_residual", imag);
    out.diagnostics.set("beta_window", window);
    out.diagnostics.set("beta_step", step);
    if s_eff > 0.0 {
        out.diagnostics
            .warn(format!("s = {s_eff} > 0: the transform amplifies truncation noise"));
    }
    if let Some(shift) = opts.regularization {
        out.diagnostics.set("regularization_shift", shift);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{FockSpace, LadderConvention};
    use crate::states::{coherent_state, thermal_state};

    fn space(d: usize) -> FockSpace {
        FockSpace::new(d).unwrap()
    }

    #[test]
    fn origin_is_one() {
        let (rho, _) = thermal_state(0.7, space(30)).unwrap();
        for s in [-1.0, 0.0, 0.5] {
            assert!((characteristic_function(&rho, Complex64::new(0.0, 0.0), s) - 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn vacuum_and_coherent_values() {
        let vac = DensityMatrix::from_pure(&crate::fock::vacuum(space(30))).unwrap();
        let b = Complex64::new(0.5, 0.0);
        assert!((characteristic_function(&vac, b, 0.0).re - (-0.125f64).exp()).abs() < 1e-8);

        let alpha = Complex64::new(1.0, 0.0);
        let rho = coherent_state(alpha, space(40)).unwrap().density().unwrap();
        let beta = Complex64::new(0.0, 0.3);
        let expect = (-0.5 * beta.norm_sqr() + beta * alpha.conj() - beta.conj() * alpha).exp();
        assert!((characteristic_function(&rho, beta, 0.0) - expect).norm() < 1e-8);
    }

    #[test]
    fn coherent_p_does_not_decay() {
        let rho = coherent_state(Complex64::new(1.0, 0.0), space(30)).unwrap().density().unwrap();
        let grid = PhaseGrid::symmetric(4.0, 16, LadderConvention::default()).unwrap();
        let err = s_distribution(&rho, &grid, 1.0, &SOptions::default()).unwrap_err();
        assert!(matches!(err, Error::InsufficientDecay { .. }));
    }

    #[test]
    fn thermal_wigner_is_gaussian() {
        let nbar = 0.5;
        let (rho, _) = thermal_state(nbar, space(60)).unwrap();
        let grid = PhaseGrid::symmetric(5.0, 21, LadderConvention::default()).unwrap();
        let w = s_distribution(&rho, &grid, 0.0, &SOptions::default()).unwrap();
        let width = nbar + 0.5;
        let mut err: f64 = 0.0;
        for i in 0..21 {
            for j in 0..21 {
                let a = grid.alpha(i, j);
                let exact = (-a.norm_sqr() / width).exp() / (PI * width);
                err = err.max((w.get(i, j) - exact).abs());
            }
        }
        assert!(err < 1e-9, "err = {err:e}");
        assert!(w.diagnostics.get("imag_residual").unwrap() < 1e-10);
    }

    #[test]
    fn regularization_shifts_the_kind() {
        let (rho, _) = thermal_state(1.0, space(60)).unwrap();
        let grid = PhaseGrid::symmetric(4.0, 16, LadderConvention::default()).unwrap();
        let opts = SOptions {
            regularization: Some(0.1),
            ..SOptions::default()
        };
        let p = s_distribution(&rho, &grid, 1.0, &opts).unwrap();
        assert_eq!(p.kind, QuasiKind::SParam { s: 0.9 });
        assert!(!p.diagnostics.warnings.is_empty());
    }
}
