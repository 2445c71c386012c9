//! Phase-space quasi-probability distributions on rectangular `(q, p)` grids.
//!
//! Every distribution is stored as a density in the complex amplitude plane, normalized so
//! that `∫ F d²α = 1` with `d²α = dq dp / (2ħ)`. In these units the Husimi function is
//! `Q(α) = <α|ρ|α>/π`, the vacuum Wigner function is `(2/π) e^{-2|α|²}`, and a phase-space
//! function `W_qp` normalized by `∫ W_qp dq dp / (2πħ) = 1` equals `π W`.

mod characteristic;
mod cohen;
mod direct;
mod io;
mod mehta;
mod smoothing;
mod symbols;

pub use characteristic::{characteristic_function, s_distribution, SOptions};
pub use cohen::{cohen_distribution, CohenKernel, SampledWavefunction};
pub use direct::{
    husimi_direct, husimi_grid, momentum_density, position_wavefunction, wigner_direct,
    wigner_grid, WignerOptions,
};
pub use io::{read_csv, read_json, to_csv, to_json, write_csv, write_json};
pub use mehta::{mehta_p, MehtaOptions};
pub use smoothing::{matched_lambda, weierstrass_smooth, SmoothOptions};
pub use symbols::{expectation_from_symbols, normal_symbol, polynomial_symbol};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{DensityMatrix, LadderConvention};
use crate::special::lagrange_stencil;

/// Stencil width of [`QuasiDistribution::interpolate`]; 12 points keep resampling of a
/// 128-point state grid below 1e-6.
pub const INTERPOLATION_ORDER: usize = 12;

/// Uniform rectangular grid in `(q, p)`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseGrid {
    pub q_min: f64,
    pub q_max: f64,
    pub nq: usize,
    pub p_min: f64,
    pub p_max: f64,
    pub np: usize,
    pub convention: LadderConvention,
}

impl PhaseGrid {
    pub fn new(q: (f64, f64, usize), p: (f64, f64, usize), convention: LadderConvention) -> Result<Self> {
        let grid = PhaseGrid {
            q_min: q.0,
            q_max: q.1,
            nq: q.2,
            p_min: p.0,
            p_max: p.1,
            np: p.2,
            convention,
        };
        grid.validate()?;
        Ok(grid)
    }

    /// Square grid `[-extent, extent]²` with `n` points per axis.
    pub fn symmetric(extent: f64, n: usize, convention: LadderConvention) -> Result<Self> {
        Self::new((-extent, extent, n), (-extent, extent, n), convention)
    }

    /// Default grid for a state: 128 x 128 points covering six natural widths around the
    /// origin, with the width estimated from `<a^+ a>`.
    pub fn for_state(rho: &DensityMatrix, convention: LadderConvention) -> Result<Self> {
        Self::for_mean_photons(rho.mean_photon_number(), convention)
    }

    /// The [`for_state`](Self::for_state) grid for a state with `<a^+ a> = n`.
    pub fn for_mean_photons(n: f64, convention: LadderConvention) -> Result<Self> {
        let n = n.max(0.0);
        let radius = n.sqrt() + 6.0 * ((n + 1.0) / 2.0).sqrt();
        let s = (2.0 * convention.hbar).sqrt();
        let qx = radius * s / convention.lambda;
        let px = radius * s * convention.lambda;
        Self::new((-qx, qx, 128), (-px, px, 128), convention)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.q_min, self.q_max, self.p_min, self.p_max].iter().all(|x| x.is_finite());
        if !finite || !(self.q_min < self.q_max) || !(self.p_min < self.p_max) {
            return Err(Error::invariant("q_min < q_max and p_min < p_max", format!("{self}")));
        }
        if self.nq < 8 || self.np < 8 {
            return Err(Error::invariant("nq, np >= 8", format!("{} x {}", self.nq, self.np)));
        }
        Ok(())
    }

    pub fn dq(&self) -> f64 {
        (self.q_max - self.q_min) / (self.nq - 1) as f64
    }

    pub fn dp(&self) -> f64 {
        (self.p_max - self.p_min) / (self.np - 1) as f64
    }

    pub fn q(&self, i: usize) -> f64 {
        if i + 1 == self.nq {
            return self.q_max;
        }
        self.q_min + i as f64 * self.dq()
    }

    pub fn p(&self, j: usize) -> f64 {
        if j + 1 == self.np {
            return self.p_max;
        }
        self.p_min + j as f64 * self.dp()
    }

    pub fn q_axis(&self) -> Vec<f64> {
        (0..self.nq).map(|i| self.q(i)).collect()
    }

    pub fn p_axis(&self) -> Vec<f64> {
        (0..self.np).map(|j| self.p(j)).collect()
    }

    pub fn alpha(&self, i: usize, j: usize) -> Complex64 {
        self.convention.alpha(self.q(i), self.p(j))
    }

    /// Area of one cell in the `α` plane.
    pub fn cell_area(&self) -> f64 {
        self.dq() * self.dp() * self.convention.alpha_jacobian()
    }

    /// Largest `|Re α|` and `|Im α|` on the grid.
    pub fn alpha_extent(&self) -> (f64, f64) {
        let a = self.convention.alpha(self.q_min.abs().max(self.q_max.abs()), self.p_min.abs().max(self.p_max.abs()));
        (a.re, a.im)
    }

    /// Grid of the same spacing restricted to the central half of each axis.
    pub fn central_half(&self) -> (std::ops::Range<usize>, std::ops::Range<usize>) {
        (self.nq / 4..self.nq - self.nq / 4, self.np / 4..self.np - self.np / 4)
    }

    pub fn same_as(&self, other: &PhaseGrid) -> bool {
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()));
        self.nq == other.nq
            && self.np == other.np
            && close(self.q_min, other.q_min)
            && close(self.q_max, other.q_max)
            && close(self.p_min, other.p_min)
            && close(self.p_max, other.p_max)
            && self.convention == other.convention
    }
}

impl fmt::Display for PhaseGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}:{},{}:{}:{}",
            self.q_min, self.q_max, self.nq, self.p_min, self.p_max, self.np
        )
    }
}

/// Parses `qmin:qmax:nq,pmin:pmax:np` under the default convention.
impl FromStr for PhaseGrid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let axis = |part: &str| -> Result<(f64, f64, usize)> {
            let fields: Vec<&str> = part.split(':').map(str::trim).collect();
            let bad = || Error::Parse(format!("grid axis `{part}` is not `min:max:n`"));
            if fields.len() != 3 {
                return Err(bad());
            }
            Ok((
                fields[0].parse().map_err(|_| bad())?,
                fields[1].parse().map_err(|_| bad())?,
                fields[2].parse().map_err(|_| bad())?,
            ))
        };
        let (q, p) = s
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("grid `{s}` is not `qmin:qmax:nq,pmin:pmax:np`")))?;
        PhaseGrid::new(axis(q)?, axis(p)?, LadderConvention::default())
    }
}

/// Number of leading Fock levels that carry any weight in `rho`; the rest are zero to
/// below double precision and can be dropped from dense evaluations.
pub(crate) fn effective_dim(rho: &DensityMatrix) -> usize {
    let m = rho.matrix();
    let full = rho.dim();
    (0..full)
        .rev()
        .find(|&n| (0..full).any(|k| m[(n, k)].norm() > 1e-17))
        .map_or(1, |n| n + 1)
}

/// What a grid of values represents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum QuasiKind {
    /// `F(α, s)` of a state: `s = 1` is P, `s = 0` Wigner, `s = -1` Husimi.
    SParam { s: f64 },
    /// Cohen-class distribution with the named kernel.
    Cohen { kernel: String },
    /// `s`-ordered phase-space symbol of an operator (`s = 1` normal, `0` Weyl, `-1`
    /// antinormal); pairs with `SParam` of the same `s`.
    Symbol { s: f64 },
    /// Gaussian smoothing of an `s`-distribution with an unmatched width.
    Smoothed { s: f64, lambda: f64 },
}

impl fmt::Display for QuasiKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuasiKind::SParam { s } => write!(f, "s_param({s})"),
            QuasiKind::Cohen { kernel } => write!(f, "cohen({kernel})"),
            QuasiKind::Symbol { s } => write!(f, "symbol({s})"),
            QuasiKind::Smoothed { s, lambda } => write!(f, "smoothed({s}, {lambda})"),
        }
    }
}

/// Named numeric diagnostics plus free-form warnings.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub values: BTreeMap<String, f64>,
    pub warnings: Vec<String>,
}

impl Diagnostics {
    pub fn set(&mut self, key: &str, value: f64) {
        self.values.insert(key.to_string(), value);
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.values.get(key).copied()
    }

    pub fn warn(&mut self, message: impl Into<String>) {
        let message = message.into();
        log::warn!("{message}");
        self.warnings.push(message);
    }
}

/// Values on a [`PhaseGrid`], stored q-major: `values[i * np + j]` sits at `(q_i, p_j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuasiDistribution {
    pub grid: PhaseGrid,
    pub kind: QuasiKind,
    values: Vec<f64>,
    pub diagnostics: Diagnostics,
}

impl QuasiDistribution {
    pub fn new(grid: PhaseGrid, kind: QuasiKind, values: Vec<f64>) -> Result<Self> {
        grid.validate()?;
        if values.len() != grid.nq * grid.np {
            return Err(Error::GridMismatch(format!(
                "{} values for a {} x {} grid",
                values.len(),
                grid.nq,
                grid.np
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invariant("values finite", "distribution has non-finite values"));
        }
        let mut d = QuasiDistribution {
            grid,
            kind,
            values,
            diagnostics: Diagnostics::default(),
        };
        let norm = d.integral();
        d.diagnostics.set("normalization", norm);
        Ok(d)
    }

    pub fn from_fn(grid: PhaseGrid, kind: QuasiKind, mut f: impl FnMut(Complex64) -> f64) -> Result<Self> {
        let mut values = Vec::with_capacity(grid.nq * grid.np);
        for i in 0..grid.nq {
            for j in 0..grid.np {
                values.push(f(grid.alpha(i, j)));
            }
        }
        Self::new(grid, kind, values)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.grid.np + j]
    }

    /// Riemann sum `Σ F ΔA` in the `α` plane.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.cell_area()
    }

    /// `∫ F(α) g(α) d²α` by Riemann sum.
    pub fn integrate_with(&self, mut g: impl FnMut(Complex64) -> f64) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.grid.nq {
            for j in 0..self.grid.np {
                acc += self.get(i, j) * g(self.grid.alpha(i, j));
            }
        }
        acc * self.grid.cell_area()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Largest pointwise difference over index ranges.
    pub fn max_diff_on(
        &self,
        other: &QuasiDistribution,
        qs: std::ops::Range<usize>,
        ps: std::ops::Range<usize>,
    ) -> Result<f64> {
        if !self.grid.same_as(&other.grid) {
            return Err(Error::GridMismatch("distributions live on different grids".into()));
        }
        let mut m: f64 = 0.0;
        for i in qs {
            for j in ps.clone() {
                m = m.max((self.get(i, j) - other.get(i, j)).abs());
            }
        }
        Ok(m)
    }

    pub fn max_diff(&self, other: &QuasiDistribution) -> Result<f64> {
        self.max_diff_on(other, 0..self.grid.nq, 0..self.grid.np)
    }

    /// Value at an arbitrary point by separable 12-point Lagrange interpolation; zero off the grid.
    pub fn interpolate(&self, alpha: Complex64) -> f64 {
        let g = &self.grid;
        let (q, p) = g.convention.phase_point(alpha);
        let Some((i0, wq)) = lagrange_stencil(q, g.q_min, g.dq(), g.nq, INTERPOLATION_ORDER) else {
            return 0.0;
        };
        let Some((j0, wp)) = lagrange_stencil(p, g.p_min, g.dp(), g.np, INTERPOLATION_ORDER) else {
            return 0.0;
        };
        let mut acc = 0.0;
        for (a, wa) in wq.iter().enumerate() {
            let row = &self.values[(i0 + a) * g.np + j0..];
            acc += wa * wp.iter().zip(row).map(|(w, v)| w * v).sum::<f64>();
        }
        acc
    }

    /// Mean of `α` under the distribution, normalized by its integral.
    pub fn mean_alpha(&self) -> Complex64 {
        let norm = self.integral();
        let re = self.integrate_with(|a| a.re);
        let im = self.integrate_with(|a| a.im);
        Complex64::new(re, im) / norm
    }
}
