use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{channel_params, AmplifierChannel};
use crate::error::{Error, Result};
use crate::fock::LadderConvention;
use crate::quasi::{PhaseGrid, QuasiDistribution, QuasiKind};
use crate::special::gauss_hermite;

#[derive(Debug, Clone, Copy)]
pub struct EvolveOptions {
    /// Largest admissible loss of mass between input and output grids.
    pub overflow_tolerance: f64,
    /// The convolution is summed on the grid when the kernel's standard deviation spans at
    /// least this many grid steps; narrower kernels use Gauss–Hermite nodes with interpolation.
    pub resolved_steps: f64,
    pub hermite_nodes: usize,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        EvolveOptions {
            overflow_tolerance: 1e-3,
            resolved_steps: 1.5,
            hermite_nodes: 20,
        }
    }
}

fn require_husimi(q: &QuasiDistribution) -> Result<()> {
    match q.kind {
        QuasiKind::SParam { s } if s == -1.0 => Ok(()),
        ref k => Err(Error::KindMismatch(format!("amplifier input must be a Husimi grid, got {k}"))),
    }
}

/// Grid that holds the output of `ch` for an input with `<a^+ a> = nbar`.
pub fn output_grid(nbar: f64, ch: &AmplifierChannel, convention: LadderConvention) -> Result<PhaseGrid> {
    let (g, m) = channel_params(ch)?;
    PhaseGrid::for_mean_photons(output_photons(nbar.max(0.0) + 1.0, g, m), convention)
}

/// `<a^+ a>` after the channel, from the input's `<|β|²>_Q`.
fn output_photons(second_moment: f64, gain: f64, noise: f64) -> f64 {
    (gain * gain * second_moment + noise - 1.0).max(0.0)
}

fn overflow_check(q_in: &QuasiDistribution, out: &mut QuasiDistribution, gain: f64, noise: f64, tol: f64) -> Result<()> {
    let (before, after) = (q_in.integral(), out.integral());
    out.diagnostics.set("input_mass", before);
    out.diagnostics.set("output_mass", after);
    out.diagnostics.set("gain", gain);
    out.diagnostics.set("noise", noise);
    if after < before - tol {
        let moment = q_in.integrate_with(|a| a.norm_sqr()) / before.max(f64::MIN_POSITIVE);
        let n = output_photons(moment, gain, noise);
        return Err(Error::SupportOverflow {
            mass: after / before.max(f64::MIN_POSITIVE),
            suggested_extent: n.sqrt() + 6.0 * ((n + 1.0) / 2.0).sqrt(),
        });
    }
    Ok(())
}

/// Output Husimi function of the channel, on the input grid:
/// `Q(α, t) = (1/(πm)) ∫ d²β Q(β) e^{−|α − βG|²/m}`.
///
/// Routes to [`evolve_husimi_pure_gain`] when `m = 0`. Fails with
/// [`Error::SupportOverflow`] when the amplified state does not fit on the grid.
pub fn evolve_husimi(q_in: &QuasiDistribution, ch: &AmplifierChannel, opts: &EvolveOptions) -> Result<QuasiDistribution> {
    require_husimi(q_in)?;
    let (gain, noise) = channel_params(ch)?;
    if noise == 0.0 {
        return evolve_husimi_pure_gain(q_in, gain, opts);
    }
    let grid = q_in.grid;
    let xs: Vec<f64> = (0..grid.nq).map(|i| grid.alpha(i, 0).re).collect();
    let ys: Vec<f64> = (0..grid.np).map(|j| grid.alpha(0, j).im).collect();
    let (hx, hy) = (xs[1] - xs[0], ys[1] - ys[0]);
    // as a function of β the kernel has standard deviation sqrt(m/2)/G per axis
    let sigma = (noise / 2.0).sqrt() / gain;
    let resolved = sigma >= opts.resolved_steps * hx.max(hy);

    let values = if resolved {
        let kx = DMatrix::from_fn(grid.nq, grid.nq, |i, k| (-(xs[i] - gain * xs[k]).powi(2) / noise).exp() * hx);
        let ky = DMatrix::from_fn(grid.np, grid.np, |j, l| (-(ys[j] - gain * ys[l]).powi(2) / noise).exp() * hy);
        let v = DMatrix::from_row_slice(grid.nq, grid.np, q_in.values());
        let out = kx * v * ky.transpose() / (PI * noise);
        (0..grid.nq).flat_map(|i| (0..grid.np).map(move |j| (i, j))).map(|(i, j)| out[(i, j)]).collect()
    } else {
        // β = (α − √m z)/G turns the integral into (1/(πG²)) ∫ d²z Q(β) e^{−|z|²}
        let (z, w) = gauss_hermite(opts.hermite_nodes);
        let s = noise.sqrt() / gain;
        let mut values = Vec::with_capacity(grid.nq * grid.np);
        for i in 0..grid.nq {
            for j in 0..grid.np {
                let centre = grid.alpha(i, j) / gain;
                let mut acc = 0.0;
                for (za, wa) in z.iter().zip(&w) {
                    for (zb, wb) in z.iter().zip(&w) {
                        acc += wa * wb * q_in.interpolate(centre - s * Complex64::new(*za, *zb));
                    }
                }
                values.push((acc / (PI * gain * gain)).max(0.0));
            }
        }
        values
    };

    let mut out = QuasiDistribution::new(grid, QuasiKind::SParam { s: -1.0 }, values)?;
    out.diagnostics.set("kernel_sigma_steps", sigma / hx.max(hy));
    out.diagnostics.set("quadrature_route", if resolved { 0.0 } else { 1.0 });
    overflow_check(q_in, &mut out, gain, noise, opts.overflow_tolerance)?;
    Ok(out)
}

/// Noise-free channel `Q_out(α) = Q_in(α/G)/G²`, resampled on the input grid.
///
/// With `λ = 1/G` this is `λ² Q(λα)`, the Husimi function of the stretched state.
pub fn evolve_husimi_pure_gain(q_in: &QuasiDistribution, gain: f64, opts: &EvolveOptions) -> Result<QuasiDistribution> {
    require_husimi(q_in)?;
    if !(gain >= 1.0 && gain.is_finite()) {
        return Err(Error::invariant("G >= 1", format!("G = {gain}")));
    }
    let grid = q_in.grid;
    let scale = 1.0 / (gain * gain);
    let out = if gain == 1.0 {
        q_in.values().to_vec()
    } else {
        let mut v = Vec::with_capacity(grid.nq * grid.np);
        for i in 0..grid.nq {
            for j in 0..grid.np {
                // interpolation rings slightly below zero in the tails
                v.push((scale * q_in.interpolate(grid.alpha(i, j) / gain)).max(0.0));
            }
        }
        v
    };
    let mut out = QuasiDistribution::new(grid, QuasiKind::SParam { s: -1.0 }, out)?;
    overflow_check(q_in, &mut out, gain, 0.0, opts.overflow_tolerance)?;
    Ok(out)
}
