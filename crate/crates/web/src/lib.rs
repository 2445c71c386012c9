//! WebAssembly bindings behind the static page in `www/`.
//!
//! Three operations: a quasi-probability distribution on a grid, the Husimi function after the
//! amplifier channel, and the moment integral `I_{N,M}` by both routes. Each has a plain Rust
//! entry point (used by the native tests) and a `#[wasm_bindgen]` wrapper.

use num_complex::Complex64;
use wasm_bindgen::prelude::*;

use quasiphase::amplifier::{
    channel_params, evolve_husimi, moment_integral, moment_quadrature, output_grid, AmplifierChannel, EvolveOptions,
};
use quasiphase::fock::{DensityMatrix, FockSpace, LadderConvention};
use quasiphase::quasi::{
    husimi_grid, mehta_p, s_distribution, wigner_grid, MehtaOptions, PhaseGrid, QuasiDistribution, SOptions,
    WignerOptions,
};
use quasiphase::states::StateSpec;

const MAX_POINTS: usize = 256;
const MAX_DIM: usize = 160;

/// Values on a square grid in α, row `i` at `Re α_i`, column `j` at `Im α_j`.
#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct Field {
    values: Vec<f64>,
    points: usize,
    extent: f64,
    normalization: f64,
    min: f64,
    max: f64,
    note: String,
}

#[wasm_bindgen]
impl Field {
    #[wasm_bindgen(getter)]
    pub fn values(&self) -> Vec<f64> {
        self.values.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn points(&self) -> usize {
        self.points
    }

    /// Half-width of the grid in `Re α` and `Im α`.
    #[wasm_bindgen(getter)]
    pub fn extent(&self) -> f64 {
        self.extent
    }

    #[wasm_bindgen(getter)]
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    #[wasm_bindgen(getter)]
    pub fn min(&self) -> f64 {
        self.min
    }

    #[wasm_bindgen(getter)]
    pub fn max(&self) -> f64 {
        self.max
    }

    #[wasm_bindgen(getter)]
    pub fn note(&self) -> String {
        self.note.clone()
    }
}

impl Field {
    fn from_dist(d: &QuasiDistribution, note: String) -> Self {
        Field {
            values: d.values().to_vec(),
            points: d.grid.nq,
            extent: d.grid.alpha_extent().0,
            normalization: d.integral(),
            min: d.min(),
            max: d.max(),
            note,
        }
    }
}

/// `I_{N,M}` from the closed form and from Gauss–Hermite quadrature.
#[wasm_bindgen]
#[derive(Debug, Clone, Copy)]
pub struct Moment {
    pub closed_re: f64,
    pub closed_im: f64,
    pub quadrature_re: f64,
    pub quadrature_im: f64,
}

fn prepare(state: &str, dim: usize) -> Result<DensityMatrix, String> {
    if !(2..=MAX_DIM).contains(&dim) {
        return Err(format!("dimension must lie in 2..={MAX_DIM}"));
    }
    let spec: StateSpec = state.parse().map_err(|e| format!("{e}"))?;
    let space = FockSpace::new(dim).map_err(|e| e.to_string())?;
    Ok(spec.build(space).map_err(|e| e.to_string())?.rho)
}

fn square(g: PhaseGrid, points: usize) -> Result<PhaseGrid, String> {
    if !(8..=MAX_POINTS).contains(&points) {
        return Err(format!("points per axis must lie in 8..={MAX_POINTS}"));
    }
    PhaseGrid::new((g.q_min, g.q_max, points), (g.p_min, g.p_max, points), g.convention).map_err(|e| e.to_string())
}

/// s-parametrized distribution of `state`: `-1` Husimi, `0` Wigner, `1` Glauber–Sudarshan P.
pub fn compute_distribution(state: &str, s: f64, dim: usize, points: usize) -> Result<Field, String> {
    let rho = prepare(state, dim)?;
    let grid = square(PhaseGrid::for_state(&rho, LadderConvention::default()).map_err(|e| e.to_string())?, points)?;
    let d = if s == -1.0 {
        husimi_grid(&rho, &grid)
    } else if s == 0.0 {
        wigner_grid(&rho, &grid, &WignerOptions::default())
    } else if s == 1.0 {
        mehta_p(&rho, &grid, &MehtaOptions::default())
    } else {
        s_distribution(&rho, &grid, s, &SOptions::default())
    }
    .map_err(|e| e.to_string())?;
    let mut note = format!("{} of {state}, dim {dim}", d.kind);
    if let Some(masked) = d.diagnostics.get("masked_points").filter(|m| *m > 0.0) {
        note.push_str(&format!(", {masked} untrusted points set to zero"));
    }
    for w in &d.diagnostics.warnings {
        note.push_str(&format!("; {w}"));
    }
    Ok(Field::from_dist(&d, note))
}

/// Husimi function of `state` after the channel `(gamma, n0, n1, t)`, on the output grid.
pub fn compute_amplified(
    state: &str,
    gamma: f64,
    n0: f64,
    n1: f64,
    t: f64,
    dim: usize,
    points: usize,
) -> Result<Field, String> {
    let rho = prepare(state, dim)?;
    let ch = AmplifierChannel::new(gamma, n0, n1, t).map_err(|e| e.to_string())?;
    let (g, m) = channel_params(&ch).map_err(|e| e.to_string())?;
    let grid = square(
        output_grid(rho.mean_photon_number(), &ch, LadderConvention::default()).map_err(|e| e.to_string())?,
        points,
    )?;
    let q = husimi_grid(&rho, &grid).map_err(|e| e.to_string())?;
    let out = evolve_husimi(&q, &ch, &EvolveOptions::default()).map_err(|e| e.to_string())?;
    let mean = out.mean_alpha();
    let note = format!(
        "G = {g:.6}, m = {m:.6}, <alpha> in {:.4}{:+.4}i, out {:.4}{:+.4}i",
        q.mean_alpha().re,
        q.mean_alpha().im,
        mean.re,
        mean.im
    );
    Ok(Field::from_dist(&out, note))
}

/// `I_{N,M}(α)` for the channel parameters `(G, m)`.
pub fn compute_moment(n: usize, m: usize, alpha_re: f64, alpha_im: f64, gain: f64, noise: f64) -> Result<Moment, String> {
    let alpha = Complex64::new(alpha_re, alpha_im);
    let closed = moment_integral(n, m, alpha, gain, noise).map_err(|e| e.to_string())?;
    let quad = moment_quadrature(n, m, alpha, gain, noise, (n + m) / 2 + 2).map_err(|e| e.to_string())?;
    Ok(Moment {
        closed_re: closed.re,
        closed_im: closed.im,
        quadrature_re: quad.re,
        quadrature_im: quad.im,
    })
}

#[wasm_bindgen]
pub fn distribution(state: &str, s: f64, dim: usize, points: usize) -> Result<Field, JsError> {
    compute_distribution(state, s, dim, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn amplify(state: &str, gamma: f64, n0: f64, n1: f64, t: f64, dim: usize, points: usize) -> Result<Field, JsError> {
    compute_amplified(state, gamma, n0, n1, t, dim, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn moment(n: usize, m: usize, alpha_re: f64, alpha_im: f64, gain: f64, noise: f64) -> Result<Moment, JsError> {
    compute_moment(n, m, alpha_re, alpha_im, gain, noise).map_err(|e| JsError::new(&e))
}
