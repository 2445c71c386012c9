use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{effective_dim, PhaseGrid, QuasiDistribution, QuasiKind};
use crate::error::{Error, Result};
use crate::fock::{DensityMatrix, LadderConvention, StateVector};
use crate::special::hermite_functions;
use crate::states::coherent_amplitudes;

/// `Q(α) = <α|ρ|α> / π`.
pub fn husimi_direct(rho: &DensityMatrix, alpha: Complex64) -> f64 {
    let d = effective_dim(rho);
    husimi_cropped(rho, d, alpha)
}

fn husimi_cropped(rho: &DensityMatrix, d: usize, alpha: Complex64) -> f64 {
    let c = coherent_amplitudes(alpha, d);
    let m = rho.matrix();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..d {
        let mut row = Complex64::new(0.0, 0.0);
        for j in 0..d {
            row += m[(i, j)] * c[j];
        }
        acc += c[i].conj() * row;
    }
    (acc.re / PI).max(0.0)
}

pub fn husimi_grid(rho: &DensityMatrix, grid: &PhaseGrid) -> Result<QuasiDistribution> {
    let d = effective_dim(rho);
    QuasiDistribution::from_fn(*grid, QuasiKind::SParam { s: -1.0 }, |a| husimi_cropped(rho, d, a))
}

/// Position-space amplitude `Σ c_n φ_n(x)` of a Fock-basis vector.
pub fn position_wavefunction(psi: &StateVector, x: f64, convention: LadderConvention) -> Complex64 {
    let xi = x * convention.lambda / convention.hbar.sqrt();
    let scale = (convention.lambda * convention.lambda / convention.hbar).powf(0.25);
    let h = hermite_functions(xi, psi.len());
    psi.iter().zip(h).map(|(c, h)| c * h).sum::<Complex64>() * scale
}

/// Momentum probability density `<p|ρ|p>`, normalized over `dp`.
pub fn momentum_density(rho: &DensityMatrix, p: f64, convention: LadderConvention) -> f64 {
    let d = effective_dim(rho);
    let eta = p / (convention.lambda * convention.hbar.sqrt());
    let scale = 1.0 / (convention.lambda * convention.hbar.sqrt());
    let h = hermite_functions(eta, d);
    // <p|n> = (-i)^n φ̃_n(p)
    let phase = |n: usize| match n % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    };
    let v: Vec<Complex64> = (0..d).map(|n| phase(n) * h[n]).collect();
    let m = rho.matrix();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..d {
        for j in 0..d {
            acc += v[i] * m[(i, j)] * v[j].conj();
        }
    }
    acc.re * scale
}

#[derive(Debug, Clone, Copy)]
pub struct WignerOptions {
    /// Ground-state widths added beyond the classical turning point of the highest level.
    pub extra_widths: f64,
    /// Largest admissible integrand magnitude at the end of the `u` range, relative to its peak.
    pub tail_tolerance: f64,
}

impl Default for WignerOptions {
    fn default() -> Self {
        WignerOptions {
            extra_widths: 8.0,
            tail_tolerance: 1e-12,
        }
    }
}

/// Wigner function as an `α`-plane density, `W = W_qp / π` with
/// `W_qp(q, p) = ∫ du ρ(q + u/2, q − u/2) e^{−ipu/ħ}`.
pub fn wigner_direct(rho: &DensityMatrix, q: f64, p: f64, convention: LadderConvention) -> Result<f64> {
    let w = WignerRule::new(rho, &[p], convention, &WignerOptions::default());
    Ok(w.row(rho, q)?[0])
}

pub fn wigner_grid(rho: &DensityMatrix, grid: &PhaseGrid, opts: &WignerOptions) -> Result<QuasiDistribution> {
    let ps = grid.p_axis();
    let rule = WignerRule::new(rho, &ps, grid.convention, opts);
    let mut values = Vec::with_capacity(grid.nq * grid.np);
    for i in 0..grid.nq {
        values.extend(rule.row(rho, grid.q(i))?);
    }
    QuasiDistribution::new(*grid, QuasiKind::SParam { s: 0.0 }, values)
}

/// Trapezoid rule over `w ≥ 0` in dimensionless units `ξ = λx/√ħ`, reused across `q`.
struct WignerRule {
    dim: usize,
    nodes: Vec<f64>,
    step: f64,
    /// `e^{−iηw}` with trapezoid weights, one row per momentum.
    phases: DMatrix<Complex64>,
    tail_tolerance: f64,
    lambda: f64,
    hbar: f64,
}

impl WignerRule {
    fn new(rho: &DensityMatrix, ps: &[f64], convention: LadderConvention, opts: &WignerOptions) -> Self {
        let dim = effective_dim(rho);
        let etas: Vec<f64> = ps.iter().map(|p| p / (convention.lambda * convention.hbar.sqrt())).collect();
        let turning = (2.0 * dim as f64 + 1.0).sqrt();
        let reach = turning + opts.extra_widths;
        let eta_max = etas.iter().fold(0.0_f64, |m, e| m.max(e.abs()));
        // aliased images sit at η ± 2π/step and must clear the momentum support
        let step = 2.0 * PI / (eta_max + reach + 4.0);
        let count = (2.0 * reach / step).ceil() as usize + 1;
        let nodes: Vec<f64> = (0..count).map(|k| k as f64 * step).collect();
        let phases = DMatrix::from_fn(etas.len(), count, |j, k| {
            let weight = if k == 0 { 0.5 } else { 1.0 };
            Complex64::from_polar(weight, -etas[j] * nodes[k])
        });
        WignerRule {
            dim,
            nodes,
            step,
            phases,
            tail_tolerance: opts.tail_tolerance,
            lambda: convention.lambda,
            hbar: convention.hbar,
        }
    }

    fn row(&self, rho: &DensityMatrix, q: f64) -> Result<Vec<f64>> {
        let d = self.dim;
        let xi = q * self.lambda / self.hbar.sqrt();
        let n = self.nodes.len();
        let plus = DMatrix::from_fn(n, d, |_, _| 0.0);
        let mut plus = plus;
        let mut minus = DMatrix::from_element(n, d, 0.0);
        for (k, w) in self.nodes.iter().enumerate() {
            let hp = hermite_functions(xi + w / 2.0, d);
            let hm = hermite_functions(xi - w / 2.0, d);
            for m in 0..d {
                plus[(k, m)] = hp[m];
                minus[(k, m)] = hm[m];
            }
        }
        let rho_d = rho.matrix().view((0, 0), (d, d));
        let t = plus.map(|x| Complex64::new(x, 0.0)) * rho_d;
        let f: Vec<Complex64> = (0..n)
            .map(|k| (0..d).map(|m| t[(k, m)] * minus[(k, m)]).sum())
            .collect();
        let peak = f.iter().fold(0.0_f64, |a, z| a.max(z.norm()));
        let tail = f[n - 1].norm().max(f[n - 2].norm());
        if peak > 0.0 && tail > self.tail_tolerance * peak.max(1.0) {
            return Err(Error::Quadrature(format!(
                "u-integrand tail {tail:.3e} at q = {q} exceeds tolerance"
            )));
        }
        // f(−w) = f(w)* for Hermitian ρ, so W_qp = 2 Re ∫_0^∞ f(w) e^{−iηw} dw
        let fv = DMatrix::from_iterator(n, 1, f);
        let integral = &self.phases * fv;
        Ok(integral.iter().map(|z| 2.0 * z.re * self.step / PI).collect())
    }
}
