use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::FftPlanner;

use super::direct::position_wavefunction;
use super::{PhaseGrid, QuasiDistribution, QuasiKind};
use crate::error::{Error, Result};
use crate::fock::StateVector;

/// Wavefunction samples `ψ(q_i)` on the q-axis of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledWavefunction {
    pub q_min: f64,
    pub dq: f64,
    pub values: Vec<Complex64>,
}

impl SampledWavefunction {
    pub fn from_fn(grid: &PhaseGrid, f: impl Fn(f64) -> Complex64) -> Self {
        SampledWavefunction {
            q_min: grid.q_min,
            dq: grid.dq(),
            values: (0..grid.nq).map(|i| f(grid.q(i))).collect(),
        }
    }

    /// Samples `Σ c_n φ_n(q)` for a Fock-basis vector.
    pub fn from_state(psi: &StateVector, grid: &PhaseGrid) -> Self {
        Self::from_fn(grid, |q| position_wavefunction(psi, q, grid.convention))
    }
}

/// Kernel `Φ(θ, τ)` in the ambiguity plane; `θ` is conjugate to `q` and `τ` to `p/ħ`.
#[derive(Debug, Clone, PartialEq)]
pub enum CohenKernel {
    /// `Φ ≡ 1`: the Wigner function.
    Identity,
    /// `Φ = exp(−ħθ²/(4λ) − λτ²/(4ħ))`: the Wigner function convolved with the Gaussian of
    /// [`weierstrass_smooth`](super::weierstrass_smooth) at width `λ`.
    Gaussian { lambda: f64 },
    /// Samples on a uniform `(θ, τ)` lattice, bilinearly interpolated and zero outside.
    Tabulated {
        theta_min: f64,
        theta_step: f64,
        tau_min: f64,
        tau_step: f64,
        /// `values[a][b]` at `(theta_min + a θ_step, tau_min + b τ_step)`.
        values: Vec<Vec<Complex64>>,
    },
}

impl CohenKernel {
    pub fn name(&self) -> String {
        match self {
            CohenKernel::Identity => "identity".into(),
            CohenKernel::Gaussian { lambda } => format!("gaussian({lambda})"),
            CohenKernel::Tabulated { .. } => "tabulated".into(),
        }
    }

    pub fn eval(&self, theta: f64, tau: f64, hbar: f64) -> Complex64 {
        match self {
            CohenKernel::Identity => Complex64::new(1.0, 0.0),
            CohenKernel::Gaussian { lambda } => {
                Complex64::new((-hbar * theta * theta / (4.0 * lambda) - lambda * tau * tau / (4.0 * hbar)).exp(), 0.0)
            }
            CohenKernel::Tabulated {
                theta_min,
                theta_step,
                tau_min,
                tau_step,
                values,
            } => {
                let x = (theta - theta_min) / theta_step;
                let y = (tau - tau_min) / tau_step;
                let (na, nb) = (values.len(), values.first().map_or(0, Vec::len));
                if x < 0.0 || y < 0.0 || x > (na - 1) as f64 || y > (nb - 1) as f64 {
                    return Complex64::new(0.0, 0.0);
                }
                let (a, b) = ((x.floor() as usize).min(na - 2), (y.floor() as usize).min(nb - 2));
                let (fx, fy) = (x - a as f64, y - b as f64);
                values[a][b] * (1.0 - fx) * (1.0 - fy)
                    + values[a + 1][b] * fx * (1.0 - fy)
                    + values[a][b + 1] * (1.0 - fx) * fy
                    + values[a + 1][b + 1] * fx * fy
            }
        }
    }

    pub fn validate(&self, hbar: f64) -> Result<()> {
        match self {
            CohenKernel::Gaussian { lambda } if !(*lambda > 0.0 && lambda.is_finite()) => {
                return Err(Error::invariant("lambda > 0", format!("lambda = {lambda}")))
            }
            CohenKernel::Tabulated {
                theta_step,
                tau_step,
                values,
                ..
            } => {
                let rect = values.len() >= 2 && values.iter().all(|r| r.len() == values[0].len() && r.len() >= 2);
                if !rect || !(*theta_step > 0.0) || !(*tau_step > 0.0) {
                    return Err(Error::InvalidParameter("tabulated kernel needs a 2x2 or larger lattice".into()));
                }
            }
            _ => {}
        }
        let origin = self.eval(0.0, 0.0, hbar);
        if (origin - Complex64::new(1.0, 0.0)).norm() > 1e-12 {
            return Err(Error::invariant("Phi(0,0) = 1", format!("Phi(0,0) = {origin}")));
        }
        Ok(())
    }
}

/// Cohen-class distribution of a pure state.
///
/// The two-point product `R(q, τ) = ψ*(q − τ/2) ψ(q + τ/2)` is formed on the lattice
/// `τ_k = 2kΔq`, transformed along `q` into the ambiguity plane (zero-padded FFT),
/// multiplied by `Φ(θ, τ)`, transformed back, and finally summed over `τ` against
/// `e^{−ipτ/ħ}`. The result is an `α`-plane density.
pub fn cohen_distribution(psi: &SampledWavefunction, kernel: &CohenKernel, grid: &PhaseGrid) -> Result<QuasiDistribution> {
    grid.validate()?;
    let hbar = grid.convention.hbar;
    kernel.validate(hbar)?;
    let nq = grid.nq;
    if psi.values.len() != nq || (psi.q_min - grid.q_min).abs() > 1e-12 || (psi.dq - grid.dq()).abs() > 1e-12 {
        return Err(Error::GridMismatch("wavefunction is not sampled on the grid's q-axis".into()));
    }
    let peak = psi.values.iter().fold(0.0_f64, |m, z| m.max(z.norm()));
    let edge = psi.values[0].norm().max(psi.values[nq - 1].norm());
    if peak == 0.0 || edge > 1e-7 * peak {
        return Err(Error::Resolution { edge: edge / peak.max(f64::MIN_POSITIVE) });
    }

    let dq = grid.dq();
    let kmax = nq as isize - 1;
    let taus: Vec<f64> = (-kmax..=kmax).map(|k| 2.0 * k as f64 * dq).collect();
    let padded = (2 * nq).next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(padded);
    let inverse = planner.plan_fft_inverse(padded);
    let identity = matches!(kernel, CohenKernel::Identity);

    // c[(i, k)] = smoothed R(q_i, τ_k)
    let mut c = DMatrix::from_element(nq, taus.len(), Complex64::new(0.0, 0.0));
    let mut buf = vec![Complex64::new(0.0, 0.0); padded];
    for (col, k) in (-kmax..=kmax).enumerate() {
        buf.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        for i in 0..nq as isize {
            let (lo, hi) = (i - k, i + k);
            if lo >= 0 && hi >= 0 && (lo as usize) < nq && (hi as usize) < nq {
                buf[i as usize] = psi.values[lo as usize].conj() * psi.values[hi as usize];
            }
        }
        if !identity {
            forward.process(&mut buf);
            for (j, z) in buf.iter_mut().enumerate() {
                let jj = if j <= padded / 2 { j as f64 } else { j as f64 - padded as f64 };
                // the forward transform carries e^{−iθu}; the Cohen integral uses e^{+iθu}
                let theta = -2.0 * PI * jj / (padded as f64 * dq);
                *z *= kernel.eval(theta, taus[col], hbar);
            }
            inverse.process(&mut buf);
            let scale = 1.0 / padded as f64;
            buf.iter_mut().for_each(|z| *z *= scale);
        }
        for i in 0..nq {
            c[(i, col)] = buf[i];
        }
    }

    let dtau = 2.0 * dq;
    let ps = grid.p_axis();
    let e = DMatrix::from_fn(taus.len(), grid.np, |k, j| Complex64::from_polar(dtau / PI, -ps[j] * taus[k] / hbar));
    let out = c * e;
    let mut values = Vec::with_capacity(nq * grid.np);
    let mut imag: f64 = 0.0;
    for i in 0..nq {
        for j in 0..grid.np {
            values.push(out[(i, j)].re);
            imag = imag.max(out[(i, j)].im.abs());
        }
    }
    let mut dist = QuasiDistribution::new(*grid, QuasiKind::Cohen { kernel: kernel.name() }, values)?;
    dist.diagnostics.set("imag_residual", imag);
    dist.diagnostics.set("edge_amplitude", edge / peak);
    Ok(dist)
}
