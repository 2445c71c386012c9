//! Verification suites: every invariant of the library checked against an independent
//! oracle, with measured residuals in a machine-readable report.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::amplifier::{
    amplified_operator_husimi, channel_params, evolve_husimi, evolve_husimi_pure_gain, moment_integral,
    moment_quadrature, output_grid, radial_integral, AmplifierChannel, EvolveOptions, OrderedPolynomial, Ordering,
};
use crate::error::{Error, Result};
use crate::fock::{
    annihilation, bch_matrix_identity, block_norm_diff, creation, displacement, displacement_analytic, identity,
    number, squeeze_decomposed, squeeze_direct, DensityMatrix, FockSpace, LadderConvention, SqueezeParameter,
};
use crate::oracle::radial_quadrature;
use crate::quasi::{
    cohen_distribution, expectation_from_symbols, husimi_direct, husimi_grid, matched_lambda, mehta_p,
    momentum_density, polynomial_symbol, s_distribution, weierstrass_smooth, wigner_grid, CohenKernel,
    MehtaOptions, PhaseGrid, QuasiDistribution, QuasiKind, SOptions, SampledWavefunction, SmoothOptions,
    WignerOptions,
};
use crate::states::{inner, squeezed_vacuum_nonunitary, StateSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Algebra,
    Distributions,
    Smoothing,
    Amplifier,
    Moments,
    All,
}

impl Suite {
    pub const EACH: [Suite; 5] = [Suite::Algebra, Suite::Distributions, Suite::Smoothing, Suite::Amplifier, Suite::Moments];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Distributions => "distributions",
            Suite::Smoothing => "smoothing",
            Suite::Amplifier => "amplifier",
            Suite::Moments => "moments",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s.trim())
            .ok_or_else(|| Error::Parse(format!("unknown suite `{s}`; expected algebra, distributions, smoothing, amplifier, moments or all")))
    }
}

const DEFAULT_TOLERANCES: &[(&str, f64)] = &[
    ("bch", 1e-12),
    ("squeeze", 1e-6),
    ("nonunitary", 1e-6),
    ("displacement", 1e-8),
    ("oracle_equivalence", 1e-5),
    ("normalization", 2e-3),
    ("husimi_bounds", 1e-12),
    ("marginal", 1e-4),
    ("cohen_identity", 1e-5),
    ("optical_equivalence", 1e-2),
    ("symbol_expectation", 1e-4),
    ("smoothing", 1e-4),
    ("smoothing_p", 1e-3),
    ("smoothed_negativity", 1e-10),
    ("channel", 1e-12),
    ("pure_gain_resampling", 1e-6),
    ("pure_gain_limit", 1e-3),
    ("amplifier_gaussian", 1e-6),
    ("amplifier_normalization", 2e-3),
    ("amplifier_mean", 1e-3),
    ("ordering_closure", 1e-8),
    ("radial_quadrature", 1e-10),
    ("moments", 1e-6),
    ("moment_symmetry", 1e-12),
    ("tail_weight", 1e-6),
    ("exact", 0.0),
];

/// Named tolerances; only names from the default table may be set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tolerances(BTreeMap<String, f64>);

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances(DEFAULT_TOLERANCES.iter().map(|(k, v)| (k.to_string(), *v)).collect())
    }
}

impl Tolerances {
    pub fn get(&self, name: &str) -> f64 {
        self.0.get(name).copied().unwrap_or_else(|| panic!("tolerance `{name}` is not defined"))
    }

    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !(value >= 0.0 && value.is_finite()) {
            return Err(Error::InvalidParameter(format!("tolerance `{name}` must be a nonnegative number")));
        }
        match self.0.get_mut(name) {
            Some(slot) => {
                *slot = value;
                Ok(())
            }
            None => Err(Error::InvalidParameter(format!(
                "unknown tolerance `{name}`; known: {}",
                self.0.keys().cloned().collect::<Vec<_>>().join(", ")
            ))),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    /// Fock dimension for the states of the distribution, smoothing and amplifier suites.
    /// The operator-algebra checks run at the dimensions their statements fix.
    pub dim: usize,
    /// Points per axis of the state grids.
    pub grid_points: usize,
    pub convention: LadderConvention,
    pub tolerances: Tolerances,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            dim: 40,
            grid_points: 128,
            convention: LadderConvention::default(),
            tolerances: Tolerances::default(),
            seed: 7,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub tolerance_name: &'static str,
    /// `None` when the check could not be evaluated.
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub suite: Suite,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let res = c.residual.map_or("n/a".to_string(), |r| format!("{r:.3e}"));
            out.push_str(&format!(
                "{:<4} {:<14} {:<44} residual {:>10}  tol {:.1e}  {}\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.suite.name(),
                c.name,
                res,
                c.tolerance,
                c.detail
            ));
        }
        let failed = self.failures().count();
        out.push_str(&format!("{} checks, {} failed\n", self.checks.len(), failed));
        out
    }
}

struct Recorder<'a> {
    cfg: &'a VerifyConfig,
    suite: Suite,
    checks: Vec<Check>,
}

impl Recorder<'_> {
    fn record(&mut self, name: impl Into<String>, key: &'static str, residual: Result<f64>, detail: impl Into<String>) {
        self.push(name.into(), key, residual, detail.into(), |r, t| r <= t);
    }

    fn push(&mut self, name: String, key: &'static str, residual: Result<f64>, detail: String, ok: fn(f64, f64) -> bool) {
        let tolerance = self.cfg.tolerances.get(key);
        let (residual, passed, detail) = match residual {
            Ok(r) => (Some(r), r.is_finite() && ok(r, tolerance), detail),
            Err(e) => (None, false, format!("{detail} error: {e}")),
        };
        self.checks.push(Check {
            suite: self.suite,
            name,
            tolerance_name: key,
            residual,
            tolerance,
            passed,
            detail,
        });
    }
}

pub fn run(suite: Suite, cfg: &VerifyConfig) -> Report {
    let suites: Vec<Suite> = if suite == Suite::All { Suite::EACH.to_vec() } else { vec![suite] };
    let mut checks = Vec::new();
    for s in suites {
        let mut rec = Recorder { cfg, suite: s, checks: Vec::new() };
        match s {
            Suite::Algebra => algebra(&mut rec),
            Suite::Distributions => distributions(&mut rec),
            Suite::Smoothing => smoothing(&mut rec),
            Suite::Amplifier => amplifier(&mut rec),
            Suite::Moments => moments(&mut rec),
            Suite::All => unreachable!(),
        }
        checks.extend(rec.checks);
    }
    Report {
        suite,
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

fn space(dim: usize) -> Result<FockSpace> {
    FockSpace::new(dim)
}

fn algebra(rec: &mut Recorder) {
    let mut rng = ChaCha8Rng::seed_from_u64(rec.cfg.seed);
    let mut worst = 0.0_f64;
    let mut worst_factor = 0.0_f64;
    for _ in 0..20 {
        let r = 3.0 * rng.gen::<f64>().sqrt();
        let zeta = Complex64::from_polar(r, 2.0 * PI * rng.gen::<f64>());
        match SqueezeParameter::new(zeta) {
            Ok(z) => {
                let id = bch_matrix_identity(z);
                worst = worst.max(id.residual() / id.closed_form.norm());
                worst_factor = worst_factor.max(id.factor_residual() / id.closed_form.norm());
            }
            Err(_) => worst = f64::NAN,
        }
    }
    rec.record("bch_exponential_vs_cosh_sinh", "bch", Ok(worst), "20 random |zeta| <= 3, relative max entry");
    rec.record("bch_disentangled_factors", "bch", Ok(worst_factor), "e^{aK+} e^{cK0} e^{bK-} vs closed form");

    let squeeze_error = |dim: usize, zeta: Complex64| -> Result<f64> {
        let sp = space(dim)?;
        let z = SqueezeParameter::new(zeta)?;
        Ok(block_norm_diff(&squeeze_decomposed(z, sp), &squeeze_direct(z, sp), dim / 2))
    };
    for r in [0.25, 0.5, 1.0] {
        let zeta = Complex64::from_polar(r, 0.7);
        rec.record(
            format!("squeeze_decomposition_r{r}"),
            "squeeze",
            squeeze_error(100, zeta),
            "dim 100, spectral norm on n < 50",
        );
    }
    let dims = [60, 80, 100, 120];
    let errors: Result<Vec<f64>> = dims.iter().map(|&d| squeeze_error(d, Complex64::from_polar(1.0, 0.7))).collect();
    match errors {
        Ok(e) => {
            let worst_ratio = e.windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max);
            let listing = dims.iter().zip(&e).map(|(d, x)| format!("{d}:{x:.2e}")).collect::<Vec<_>>().join(" ");
            rec.push(
                "squeeze_error_decreases_with_dim".into(),
                "squeeze",
                Ok(worst_ratio),
                format!("largest ratio of successive errors must be < 1; {listing}"),
                |r, _| r < 1.0,
            );
        }
        Err(e) => rec.record("squeeze_error_decreases_with_dim", "squeeze", Err(e), ""),
    }

    let zeta = Complex64::new(0.4, 0.0);
    match space(100).and_then(|sp| Ok((sp, squeezed_vacuum_nonunitary(zeta, sp)?, squeezed_vacuum_nonunitary(-zeta, sp)?))) {
        Ok((sp, plus, minus)) => {
            let op = annihilation(sp) + creation(sp) * zeta;
            rec.record(
                "nonunitary_annihilated",
                "nonunitary",
                Ok((op * &plus.unit).norm()),
                "||(a + zeta a^+)|psi>||, zeta = 0.4, dim 100",
            );
            rec.record(
                "nonunitary_pairing",
                "nonunitary",
                Ok((inner(&minus.paired, &plus.paired) - 1.0).norm()),
                "<0,0;-zeta|0,0;zeta> - 1",
            );
        }
        Err(e) => rec.record("nonunitary_annihilated", "nonunitary", Err(e), ""),
    }

    let alpha = Complex64::new(0.7, 0.3);
    match space(40) {
        Ok(sp) => {
            let d = displacement(alpha, sp);
            let lhs = d.adjoint() * annihilation(sp) * &d;
            let rhs = annihilation(sp) + identity(sp) * alpha;
            rec.record(
                "displacement_conjugation",
                "displacement",
                Ok(block_norm_diff(&lhs, &rhs, 20)),
                "||D^+ a D - (a + alpha)|| on n < 20, dim 40",
            );
            rec.record(
                "displacement_analytic_elements",
                "displacement",
                Ok(block_norm_diff(&d, &displacement_analytic(alpha, sp), 20)),
                "matrix exponential vs Laguerre closed form on n < 20",
            );
        }
        Err(e) => rec.record("displacement_conjugation", "displacement", Err(e), ""),
    }
}

fn state(spec: &str, dim: usize) -> Result<DensityMatrix> {
    Ok(spec.parse::<StateSpec>()?.build(space(dim)?)?.rho)
}

fn grid_for(rho: &DensityMatrix, cfg: &VerifyConfig) -> Result<PhaseGrid> {
    let g = PhaseGrid::for_state(rho, cfg.convention)?;
    PhaseGrid::new((g.q_min, g.q_max, cfg.grid_points), (g.p_min, g.p_max, cfg.grid_points), cfg.convention)
}

fn central_diff(a: &QuasiDistribution, b: &QuasiDistribution) -> Result<f64> {
    let (qs, ps) = a.grid.central_half();
    a.max_diff_on(b, qs, ps)
}

fn distributions(rec: &mut Recorder) {
    let cfg = rec.cfg;
    for spec in ["fock:0", "coherent:1", "fock:2", "thermal:0.5"] {
        let setup = state(spec, cfg.dim).and_then(|rho| Ok((grid_for(&rho, cfg)?, rho)));
        let (grid, rho) = match setup {
            Ok(x) => x,
            Err(e) => {
                rec.record(format!("state_{spec}"), "oracle_equivalence", Err(e), "");
                continue;
            }
        };
        rec.record(
            format!("truncation_tail_{spec}"),
            "tail_weight",
            Ok(rho.tail_weight()),
            format!("population of level {}", cfg.dim - 1),
        );
        let q = husimi_grid(&rho, &grid);
        let w = wigner_grid(&rho, &grid, &WignerOptions::default());
        let sq = s_distribution(&rho, &grid, -1.0, &SOptions::default());
        let sw = s_distribution(&rho, &grid, 0.0, &SOptions::default());
        let pair = |a: &Result<QuasiDistribution>, b: &Result<QuasiDistribution>| -> Result<f64> {
            match (a, b) {
                (Ok(a), Ok(b)) => central_diff(a, b),
                (Err(e), _) | (_, Err(e)) => Err(Error::Quadrature(e.to_string())),
            }
        };
        rec.record(format!("s_minus_one_vs_husimi_{spec}"), "oracle_equivalence", pair(&sq, &q), "central half-grid");
        rec.record(format!("s_zero_vs_wigner_{spec}"), "oracle_equivalence", pair(&sw, &w), "central half-grid");
        if let Ok(q) = &q {
            rec.record(format!("husimi_normalization_{spec}"), "normalization", Ok((q.integral() - 1.0).abs()), "");
            let excess = (-q.min()).max(q.max() - 1.0 / PI).max(0.0);
            rec.record(format!("husimi_bounds_{spec}"), "husimi_bounds", Ok(excess), "0 <= Q <= 1/pi");
        }
        if let Ok(w) = &w {
            rec.record(format!("wigner_normalization_{spec}"), "normalization", Ok((w.integral() - 1.0).abs()), "");
        }
    }

    let marginal = state("coherent:1", cfg.dim).and_then(|rho| {
        let grid = grid_for(&rho, cfg)?;
        let w = wigner_grid(&rho, &grid, &WignerOptions::default())?;
        Ok(marginal_error(&w, &rho))
    });
    rec.record("marginal_coherent_1", "marginal", marginal, "int W dq vs <p|rho|p>");

    let cohen = (|| -> Result<f64> {
        let rho = state("fock:0", cfg.dim)?;
        let grid = PhaseGrid::symmetric(8.0, 128, cfg.convention)?;
        let vac = crate::fock::vacuum(space(cfg.dim)?);
        let psi = SampledWavefunction::from_state(&vac, &grid);
        let c = cohen_distribution(&psi, &CohenKernel::Identity, &grid)?;
        c.max_diff(&wigner_grid(&rho, &grid, &WignerOptions::default())?)
    })();
    rec.record("cohen_identity_ground_state", "cohen_identity", cohen, "Phi = 1 vs Wigner");

    let optical = (|| -> Result<f64> {
        let rho = state("thermal:1", cfg.dim.max(60))?;
        let grid = grid_for(&rho, cfg)?;
        let p = mehta_p(&rho, &grid, &MehtaOptions::default())?;
        let sym = polynomial_symbol(&grid, 1.0, &[(1, 1, Complex64::new(1.0, 0.0))])?;
        let via_p = expectation_from_symbols(&sym, &p)?;
        Ok((via_p - rho.expectation(&number(rho.space())).re).abs())
    })();
    rec.record("optical_equivalence_thermal_1", "optical_equivalence", optical, "int P |alpha|^2 vs Tr(rho a^+a)");

    let symbol = (|| -> Result<f64> {
        let rho = state("coherent:0.8", cfg.dim)?;
        let grid = grid_for(&rho, cfg)?;
        let w = wigner_grid(&rho, &grid, &WignerOptions::default())?;
        let c = grid.convention;
        let scale = (2.0 * c.hbar).sqrt() / c.lambda;
        let half = Complex64::new(scale / 2.0, 0.0);
        let sym = polynomial_symbol(&grid, 0.0, &[(0, 1, half), (1, 0, half)])?;
        let sp = rho.space();
        let q_op = (annihilation(sp) + creation(sp)) * Complex64::new(c.hbar.sqrt() / (c.lambda * 2f64.sqrt()), 0.0);
        Ok((expectation_from_symbols(&sym, &w)? - rho.expectation(&q_op).re).abs())
    })();
    rec.record("weyl_symbol_q_coherent", "symbol_expectation", symbol, "int q W vs Tr(rho q)");
}

/// Largest deviation of `∫ W dq/(2ħ)` from the momentum density over the p-axis.
pub fn marginal_error(w: &QuasiDistribution, rho: &DensityMatrix) -> f64 {
    let g = &w.grid;
    let mut worst: f64 = 0.0;
    for j in 0..g.np {
        let mut acc = 0.0;
        for i in 0..g.nq {
            let weight = if i == 0 || i + 1 == g.nq { 0.5 } else { 1.0 };
            acc += weight * w.get(i, j);
        }
        let marginal = acc * g.dq() / (2.0 * g.convention.hbar);
        worst = worst.max((marginal - momentum_density(rho, g.p(j), g.convention)).abs());
    }
    worst
}

fn smoothing(rec: &mut Recorder) {
    let cfg = rec.cfg;
    let lambda = matched_lambda(cfg.convention);
    for spec in ["fock:0", "coherent:1"] {
        let r = (|| -> Result<f64> {
            let rho = state(spec, cfg.dim)?;
            let grid = grid_for(&rho, cfg)?;
            let w = wigner_grid(&rho, &grid, &WignerOptions::default())?;
            let smoothed = weierstrass_smooth(&w, lambda, &SmoothOptions::default())?;
            smoothed.max_diff(&husimi_grid(&rho, &grid)?)
        })();
        rec.record(format!("wigner_to_husimi_{spec}"), "smoothing", r, "matched Gaussian");
    }
    let negativity = (|| -> Result<f64> {
        let rho = state("fock:1", cfg.dim)?;
        let grid = grid_for(&rho, cfg)?;
        let w = wigner_grid(&rho, &grid, &WignerOptions::default())?;
        Ok((-weierstrass_smooth(&w, lambda, &SmoothOptions::default())?.min()).max(0.0))
    })();
    rec.record("smoothed_fock_1_nonnegative", "smoothed_negativity", negativity, "-min of smoothed Wigner");
    let p_to_w = (|| -> Result<f64> {
        let nbar = 0.5;
        let rho = state(&format!("thermal:{nbar}"), cfg.dim)?;
        let grid = grid_for(&rho, cfg)?;
        let p = QuasiDistribution::from_fn(grid, QuasiKind::SParam { s: 1.0 }, |a| {
            (-a.norm_sqr() / nbar).exp() / (PI * nbar)
        })?;
        let smoothed = weierstrass_smooth(&p, lambda, &SmoothOptions::default())?;
        smoothed.max_diff(&wigner_grid(&rho, &grid, &WignerOptions::default())?)
    })();
    rec.record("thermal_p_to_wigner", "smoothing_p", p_to_w, "analytic P, nbar = 0.5");
}

fn amplifier(rec: &mut Recorder) {
    let cfg = rec.cfg;
    let opts = EvolveOptions::default();
    let params = AmplifierChannel::new(0.5, 1.0, 2.0, 1.0).and_then(|ch| channel_params(&ch)).map(|(g, m)| {
        let e = 1f64.exp();
        (g - e).abs() + (m - (e * e - 1.0)).abs()
    });
    rec.record("channel_params_example", "channel", params, "gamma=0.5,n0=1,n1=2,t=1 -> (e, e^2-1)");

    let stretched = (|| -> Result<f64> {
        let gain: f64 = 2.0;
        let rho = state("fock:1", cfg.dim)?;
        let ch = AmplifierChannel::new(0.5 * gain.ln(), 0.0, 1.0, 1.0)?;
        let grid = sized(output_grid(1.0, &ch, cfg.convention)?, cfg)?;
        let out = evolve_husimi_pure_gain(&husimi_grid(&rho, &grid)?, gain, &opts)?;
        let lam = 1.0 / gain;
        let exact = QuasiDistribution::from_fn(grid, QuasiKind::SParam { s: -1.0 }, |a| lam * lam * husimi_direct(&rho, lam * a))?;
        out.max_diff(&exact)
    })();
    rec.record("pure_gain_is_stretched_state", "pure_gain_resampling", stretched, "lambda^2 Q(lambda alpha), lambda = 1/G = 1/2, fock:1");

    let limit = (|| -> Result<f64> {
        let gain: f64 = 2.0;
        let n0 = 1e-6 / (gain * gain - 1.0);
        let noisy = AmplifierChannel::new(0.5 * gain.ln() / (1.0 - n0), n0, 1.0, 1.0)?;
        let (g, m) = channel_params(&noisy)?;
        let rho = state("coherent:0.5-0.3i", cfg.dim)?;
        let grid = sized(output_grid(rho.mean_photon_number(), &noisy, cfg.convention)?, cfg)?;
        let q = husimi_grid(&rho, &grid)?;
        let a = evolve_husimi(&q, &noisy, &opts)?;
        let b = evolve_husimi_pure_gain(&q, g, &opts)?;
        log::debug!("pure-gain limit at G = {g}, m = {m:e}");
        a.max_diff(&b)
    })();
    rec.record("noise_1e-6_matches_pure_gain", "pure_gain_limit", limit, "m = 1e-6, G = 2");

    let channel = AmplifierChannel::new(0.5, 1.0, 2.0, 0.3).expect("valid channel");
    let vacuum = (|| -> Result<f64> {
        let (g, m) = channel_params(&channel)?;
        let grid = sized(output_grid(0.0, &channel, cfg.convention)?, cfg)?;
        let q = husimi_grid(&state("fock:0", cfg.dim)?, &grid)?;
        let out = evolve_husimi(&q, &channel, &opts)?;
        let v = g * g + m;
        let exact = QuasiDistribution::from_fn(grid, QuasiKind::SParam { s: -1.0 }, |a| (-a.norm_sqr() / v).exp() / (PI * v))?;
        out.max_diff(&exact)
    })();
    rec.record("vacuum_gaussian_convolution", "amplifier_gaussian", vacuum, "exp(-|a|^2/(G^2+m))/(pi(G^2+m))");

    let coherent = (|| -> Result<(f64, f64, f64)> {
        let (g, _) = channel_params(&channel)?;
        let rho = state("coherent:1", cfg.dim)?;
        let grid = sized(output_grid(rho.mean_photon_number(), &channel, cfg.convention)?, cfg)?;
        let out = evolve_husimi(&husimi_grid(&rho, &grid)?, &channel, &opts)?;
        let bounds = (-out.min()).max(out.max() - 1.0 / PI).max(0.0);
        Ok(((out.integral() - 1.0).abs(), (out.mean_alpha() - g).norm(), bounds))
    })();
    match coherent {
        Ok((norm, mean, bounds)) => {
            rec.record("coherent_output_normalization", "amplifier_normalization", Ok(norm), "coherent:1 through gamma=0.5,n0=1,n1=2,t=0.3");
            rec.record("coherent_output_mean", "amplifier_mean", Ok(mean), "|<alpha> - G beta0|");
            rec.record("output_husimi_bounds", "husimi_bounds", Ok(bounds), "0 <= Q <= 1/pi");
        }
        Err(e) => rec.record("coherent_output_normalization", "amplifier_normalization", Err(e), ""),
    }

    let closure = ordering_closure(cfg.seed);
    rec.record("ordering_closure_dim_10", "ordering_closure", closure, "normal/antinormal/symmetric sets of one operator");
}

fn sized(g: PhaseGrid, cfg: &VerifyConfig) -> Result<PhaseGrid> {
    PhaseGrid::new((g.q_min, g.q_max, cfg.grid_points), (g.p_min, g.p_max, cfg.grid_points), g.convention)
}

/// Largest spread of `amplified_operator_husimi` across the three orderings of random
/// operators, together with the spread of their matrices on ten levels.
pub fn ordering_closure(seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let sp = space(10)?;
    let channel = AmplifierChannel::new(0.5, 1.0, 2.0, 0.4)?;
    let mut worst: f64 = 0.0;
    for _ in 0..3 {
        let coeffs: Vec<((usize, usize), Complex64)> = (0..6)
            .map(|_| ((rng.gen_range(0..=4), rng.gen_range(0..=4)), Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
            .collect();
        let normal = OrderedPolynomial::new(Ordering::Normal, coeffs)?;
        let anti = normal.to_ordering(Ordering::Antinormal, 10)?;
        let sym = normal.to_ordering(Ordering::Symmetric, 10)?;
        let m = normal.operator_matrix(sp)?;
        worst = worst.max((anti.operator_matrix(sp)? - &m).norm()).max((sym.operator_matrix(sp)? - &m).norm());
        for _ in 0..4 {
            let alpha = Complex64::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
            let v = amplified_operator_husimi(&normal, alpha, &channel)?;
            let scale = v.norm().max(1.0);
            worst = worst
                .max((amplified_operator_husimi(&anti, alpha, &channel)? - v).norm() / scale)
                .max((amplified_operator_husimi(&sym, alpha, &channel)? - v).norm() / scale);
        }
    }
    Ok(worst)
}

fn moments(rec: &mut Recorder) {
    let mut mismatches = 0.0;
    let mut factorial = BigRational::from_integer(1.into());
    for n in 0..=20u32 {
        if n > 0 {
            factorial *= BigRational::from_integer(n.into());
        }
        if radial_integral(n) != &factorial / BigRational::from_integer(2.into()) {
            mismatches += 1.0;
        }
    }
    rec.record("radial_integral_exact", "exact", Ok(mismatches), "count of n <= 20 with I_{2n+1} != n!/2");
    let mut worst: f64 = 0.0;
    for n in 0..=10u32 {
        let exact = radial_integral(n).to_f64().unwrap_or(f64::NAN);
        worst = worst.max((radial_quadrature(n, 1e-13) - exact).abs() / exact);
    }
    rec.record("radial_integral_quadrature", "radial_quadrature", Ok(worst), "adaptive Simpson, n <= 10, relative");

    let mut rng = ChaCha8Rng::seed_from_u64(rec.cfg.seed ^ 0x1234);
    let mut worst: f64 = 0.0;
    let mut symmetry: f64 = 0.0;
    let mut failure = None;
    for _ in 0..5 {
        let alpha = Complex64::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
        let gain = rng.gen_range(1.0..2.5);
        let noise = rng.gen_range(0.1..2.0);
        for n in 0..=6 {
            for m in 0..=6 {
                let pair = moment_integral(n, m, alpha, gain, noise).and_then(|c| {
                    Ok((c, moment_quadrature(n, m, alpha, gain, noise, 24)?, moment_integral(m, n, alpha, gain, noise)?))
                });
                match pair {
                    Ok((c, q, swapped)) => {
                        worst = worst.max((c - q).norm() / q.norm());
                        symmetry = symmetry.max((c.conj() - swapped).norm() / c.norm());
                    }
                    Err(e) => failure = Some(e),
                }
            }
        }
    }
    match failure {
        Some(e) => rec.record("moments_closed_form_vs_quadrature", "moments", Err(e), ""),
        None => {
            rec.record("moments_closed_form_vs_quadrature", "moments", Ok(worst), "0 <= N, M <= 6, 5 random (alpha, G, m), relative");
            rec.record("moments_conjugate_symmetry", "moment_symmetry", Ok(symmetry), "conj(I_{N,M}) = I_{M,N}");
        }
    }
}
