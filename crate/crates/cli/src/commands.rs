//! Command handlers. Numbers come from library calls; this layer only routes, checks
//! tolerances and writes files.

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Serialize;

use quasiphase::amplifier::{channel_params, evolve_husimi, output_grid, AmplifierChannel, EvolveOptions, MomentQuery};
use quasiphase::error::{Error, Result};
use quasiphase::fock::FockSpace;
use quasiphase::quasi::{
    cohen_distribution, husimi_grid, mehta_p, s_distribution, to_csv, to_json, wigner_grid, CohenKernel, MehtaOptions,
    PhaseGrid, QuasiDistribution, SOptions, SampledWavefunction, WignerOptions,
};
use quasiphase::states::{PreparedState, StateSpec};
use quasiphase::verify::{self, Suite, VerifyConfig};

use crate::config::{Format, RunConfig};

/// Tolerance violations collected while running a command.
#[derive(Debug, Default)]
pub struct Outcome {
    pub violations: Vec<String>,
}

impl Outcome {
    /// Records `name` as violated when `residual > tol`.
    fn check(&mut self, name: &str, residual: f64, tol: f64) {
        if !(residual <= tol) {
            self.violations.push(format!("{name}: residual {residual:.3e} exceeds tolerance {tol:.1e}"));
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn emit(cfg: &RunConfig, text: &str) -> Result<()> {
    match &cfg.out {
        Some(path) => write_file(path, text),
        None => {
            io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    let mut f = File::create(path)
        .map_err(|e| Error::InvalidParameter(format!("cannot write {}: {e}", path.display())))?;
    f.write_all(text.as_bytes())?;
    Ok(())
}

fn render(dist: &QuasiDistribution, format: Format) -> Result<String> {
    match format {
        Format::Csv => to_csv(dist),
        Format::Json => to_json(dist),
    }
}

fn prepare(spec: &StateSpec, cfg: &RunConfig) -> Result<PreparedState> {
    spec.build(FockSpace::new(cfg.dim)?)
}

fn report_state(prepared: &PreparedState, outcome: &mut Outcome, cfg: &RunConfig) {
    let tail = prepared.rho.tail_weight();
    eprintln!("tail weight: {tail:.3e}");
    eprintln!("discarded weight: {:.3e}", prepared.discarded_weight);
    outcome.check("truncation tail weight", tail, cfg.tolerances.get("tail_weight"));
}

fn report_distribution(dist: &QuasiDistribution, outcome: &mut Outcome, cfg: &RunConfig, label: &str) {
    let norm = dist.integral();
    eprintln!("{label} kind: {}", dist.kind);
    eprintln!("{label} normalization: {norm:.8}");
    eprintln!("{label} min value: {:.6e}", dist.min());
    eprintln!("{label} max value: {:.6e}", dist.max());
    for (k, v) in dist.diagnostics.values.iter().filter(|(k, _)| k.as_str() != "normalization") {
        eprintln!("{label} {k}: {v:.6e}");
    }
    for w in &dist.diagnostics.warnings {
        eprintln!("{label} warning: {w}");
    }
    outcome.check(&format!("{label} normalization"), (norm - 1.0).abs(), cfg.tolerances.get("normalization"));
}

fn report_husimi_bounds(dist: &QuasiDistribution, outcome: &mut Outcome, cfg: &RunConfig, label: &str) {
    let over = (dist.max() - std::f64::consts::FRAC_1_PI).max(-dist.min()).max(0.0);
    outcome.check(&format!("{label} bounds 0 <= Q <= 1/pi"), over, cfg.tolerances.get("husimi_bounds"));
}

#[derive(Serialize)]
struct StateSummary {
    state: String,
    dim: usize,
    trace: f64,
    purity: f64,
    mean_photon_number: f64,
    min_eigenvalue: f64,
    tail_weight: f64,
    discarded_weight: f64,
    rho: Vec<Vec<Complex64>>,
}

#[derive(Serialize)]
struct MatrixEntry {
    row: usize,
    col: usize,
    re: f64,
    im: f64,
}

pub fn state(spec: &StateSpec, cfg: &RunConfig) -> Result<Outcome> {
    let prepared = prepare(spec, cfg)?;
    let rho = &prepared.rho;
    let mut outcome = Outcome::default();
    eprintln!("state: {spec}");
    eprintln!("mean photon number: {:.8}", rho.mean_photon_number());
    eprintln!("purity: {:.8}", rho.purity());
    report_state(&prepared, &mut outcome, cfg);
    let dim = rho.dim();
    let entries = rho.to_row_major();
    let text = match cfg.format {
        Format::Json => {
            let summary = StateSummary {
                state: spec.to_string(),
                dim,
                trace: rho.trace().re,
                purity: rho.purity(),
                mean_photon_number: rho.mean_photon_number(),
                min_eigenvalue: rho.min_eigenvalue(),
                tail_weight: rho.tail_weight(),
                discarded_weight: prepared.discarded_weight,
                rho: entries.chunks(dim).map(<[Complex64]>::to_vec).collect(),
            };
            serde_json::to_string_pretty(&summary)? + "\n"
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for (k, z) in entries.iter().enumerate() {
                w.serialize(MatrixEntry { row: k / dim, col: k % dim, re: z.re, im: z.im }).map_err(csv_error)?;
            }
            csv_string(w)?
        }
    };
    emit(cfg, &text)?;
    Ok(outcome)
}

/// Distribution selected by `dist`.
#[derive(Debug, Clone, PartialEq)]
pub enum DistKind {
    S(f64),
    Cohen(CohenKernel),
}

/// Parses `identity` or `gaussian:<lambda>`.
pub fn parse_kernel(text: &str) -> std::result::Result<CohenKernel, String> {
    match text.trim() {
        "identity" => Ok(CohenKernel::Identity),
        other => match other.strip_prefix("gaussian:") {
            Some(l) => l
                .parse()
                .map(|lambda| CohenKernel::Gaussian { lambda })
                .map_err(|_| format!("`{l}` is not a number")),
            None => Err(format!("unknown kernel `{other}`; expected identity or gaussian:<lambda>")),
        },
    }
}

pub fn dist(spec: &StateSpec, kind: &DistKind, cfg: &RunConfig) -> Result<Outcome> {
    let prepared = prepare(spec, cfg)?;
    let rho = &prepared.rho;
    let grid = cfg.grid_for(rho.mean_photon_number())?;
    let mut outcome = Outcome::default();
    report_state(&prepared, &mut outcome, cfg);
    let dist = match kind {
        DistKind::S(s) if *s == -1.0 => husimi_grid(rho, &grid)?,
        DistKind::S(s) if *s == 0.0 => wigner_grid(rho, &grid, &WignerOptions::default())?,
        DistKind::S(s) if *s == 1.0 => {
            let p = mehta_p(rho, &grid, &MehtaOptions::default())?;
            eprintln!("ill-posed: false");
            p
        }
        DistKind::S(s) => s_distribution(rho, &grid, *s, &SOptions::default())?,
        DistKind::Cohen(kernel) => {
            let psi = rho.pure_state(cfg.tolerances.get("tail_weight"))?;
            cohen_distribution(&SampledWavefunction::from_state(&psi, &grid), kernel, &grid)?
        }
    };
    report_distribution(&dist, &mut outcome, cfg, "distribution");
    if *kind == DistKind::S(-1.0) {
        report_husimi_bounds(&dist, &mut outcome, cfg, "distribution");
    }
    emit(cfg, &render(&dist, cfg.format)?)?;
    Ok(outcome)
}

#[derive(Serialize)]
struct AmplifyDocument {
    channel: AmplifierChannel,
    gain: f64,
    noise: f64,
    input: serde_json::Value,
    output: serde_json::Value,
}

/// `<stem>_input.<ext>` beside `path`.
pub fn input_path(path: &Path) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("grid");
    let name = match path.extension().and_then(|e| e.to_str()) {
        Some(ext) => format!("{stem}_input.{ext}"),
        None => format!("{stem}_input"),
    };
    path.with_file_name(name)
}

pub fn amplify(spec: &StateSpec, channel: &AmplifierChannel, cfg: &RunConfig) -> Result<Outcome> {
    let prepared = prepare(spec, cfg)?;
    let rho = &prepared.rho;
    let (gain, noise) = channel_params(channel)?;
    let grid = match cfg.grid {
        Some(g) => g,
        None => {
            let g = output_grid(rho.mean_photon_number(), channel, cfg.convention)?;
            PhaseGrid::new((g.q_min, g.q_max, cfg.grid_points), (g.p_min, g.p_max, cfg.grid_points), cfg.convention)?
        }
    };
    let mut outcome = Outcome::default();
    eprintln!("channel: {channel}");
    eprintln!("gain G: {gain:.10}");
    eprintln!("noise m: {noise:.10}");
    report_state(&prepared, &mut outcome, cfg);
    let q_in = husimi_grid(rho, &grid)?;
    let q_out = match evolve_husimi(&q_in, channel, &EvolveOptions::default()) {
        Err(Error::SupportOverflow { mass, suggested_extent }) => {
            let (q, p) = cfg.convention.phase_point(Complex64::new(suggested_extent, suggested_extent));
            let n = grid.nq.max(grid.np);
            return Err(Error::InvalidParameter(format!(
                "support overflow: output grid holds {mass:.6} of the input mass; \
                 enlarge to |alpha| <= {suggested_extent:.2}, e.g. --grid={:.3}:{q:.3}:{n},{:.3}:{p:.3}:{n}",
                -q, -p
            )));
        }
        other => other?,
    };
    report_distribution(&q_in, &mut outcome, cfg, "input");
    report_distribution(&q_out, &mut outcome, cfg, "output");
    report_husimi_bounds(&q_out, &mut outcome, cfg, "output");
    let (mean_in, mean_out) = (q_in.mean_alpha(), q_out.mean_alpha());
    eprintln!("input mean alpha: {:.8} {:+.8}i", mean_in.re, mean_in.im);
    eprintln!("output mean alpha: {:.8} {:+.8}i", mean_out.re, mean_out.im);
    eprintln!("expected output mean G<alpha>: {:.8} {:+.8}i", gain * mean_in.re, gain * mean_in.im);
    outcome.check("output mean = G <alpha>_in", (mean_out - gain * mean_in).norm(), cfg.tolerances.get("amplifier_mean"));

    match cfg.format {
        Format::Json => {
            let doc = AmplifyDocument {
                channel: *channel,
                gain,
                noise,
                input: serde_json::from_str(&to_json(&q_in)?)?,
                output: serde_json::from_str(&to_json(&q_out)?)?,
            };
            emit(cfg, &(serde_json::to_string_pretty(&doc)? + "\n"))?;
        }
        Format::Csv => {
            emit(cfg, &to_csv(&q_out)?)?;
            match &cfg.out {
                Some(path) => {
                    let input = input_path(path);
                    write_file(&input, &to_csv(&q_in)?)?;
                    eprintln!("input grid written to {}", input.display());
                }
                None => eprintln!("input grid not written; pass --out to store both grids"),
            }
        }
    }
    Ok(outcome)
}

/// Which evaluation of `I_{N,M}` to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Route {
    Closed,
    Quadrature,
    Both,
}

#[derive(Serialize)]
struct MomentRecord {
    n: usize,
    m_order: usize,
    alpha_re: f64,
    alpha_im: f64,
    gain: f64,
    noise: f64,
    route: &'static str,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct MomentEnvelope<'a> {
    integral: &'static str,
    results: &'a [MomentRecord],
}

pub fn moment(queries: &[MomentQuery], route: Route, cfg: &RunConfig) -> Result<Outcome> {
    let mut outcome = Outcome::default();
    let mut records = Vec::new();
    for q in queries {
        let mut eval = |name: &'static str, value: Complex64| {
            eprintln!("I[{q}] ({name}) = {:.12e} {:+.12e}i", value.re, value.im);
            records.push(MomentRecord {
                n: q.n,
                m_order: q.m_order,
                alpha_re: q.alpha.re,
                alpha_im: q.alpha.im,
                gain: q.gain,
                noise: q.noise,
                route: name,
                re: value.re,
                im: value.im,
            });
        };
        let closed = matches!(route, Route::Closed | Route::Both).then(|| q.closed_form()).transpose()?;
        let quad = matches!(route, Route::Quadrature | Route::Both).then(|| q.quadrature()).transpose()?;
        if let Some(v) = closed {
            eval("closed_form", v);
        }
        if let Some(v) = quad {
            eval("quadrature", v);
        }
        if let (Some(a), Some(b)) = (closed, quad) {
            let rel = (a - b).norm() / a.norm().max(1.0);
            outcome.check(&format!("closed form vs quadrature for {q}"), rel, cfg.tolerances.get("moments"));
        }
    }
    let text = match cfg.format {
        Format::Json => {
            let env = MomentEnvelope {
                integral: "I_{N,M}(alpha) = int d^2beta beta*^N beta^M exp(-|alpha - G beta|^2 / m)",
                results: &records,
            };
            serde_json::to_string_pretty(&env)? + "\n"
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &records {
                w.serialize(r).map_err(csv_error)?;
            }
            csv_string(w)?
        }
    };
    emit(cfg, &text)?;
    Ok(outcome)
}

pub fn verify(suite: Suite, cfg: &RunConfig) -> Result<Outcome> {
    let vcfg = VerifyConfig {
        dim: cfg.dim,
        grid_points: cfg.grid_points,
        convention: cfg.convention,
        tolerances: cfg.tolerances.clone(),
        seed: cfg.seed,
    };
    let report = verify::run(suite, &vcfg);
    print!("{}", report.to_table());
    if let Some(path) = &cfg.out {
        let text = match cfg.format {
            Format::Json => serde_json::to_string_pretty(&report)? + "\n",
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                for c in &report.checks {
                    w.serialize(c).map_err(csv_error)?;
                }
                csv_string(w)?
            }
        };
        write_file(path, &text)?;
    }
    let mut outcome = Outcome::default();
    for c in report.failures() {
        outcome.violations.push(format!("{} / {}: {}", c.suite.name(), c.name, c.detail));
    }
    Ok(outcome)
}

fn csv_error(e: csv::Error) -> Error {
    Error::Parse(format!("csv: {e}"))
}

fn csv_string(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Parse(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernels_parse() {
        assert_eq!(parse_kernel("identity"), Ok(CohenKernel::Identity));
        assert_eq!(parse_kernel("gaussian:0.5"), Ok(CohenKernel::Gaussian { lambda: 0.5 }));
        assert!(parse_kernel("gaussian:x").is_err());
        assert!(parse_kernel("boxcar").is_err());
    }

    #[test]
    fn input_grid_sits_beside_output() {
        assert_eq!(input_path(Path::new("/tmp/out.csv")), PathBuf::from("/tmp/out_input.csv"));
        assert_eq!(input_path(Path::new("grid")), PathBuf::from("grid_input"));
    }

    #[test]
    fn outcome_flags_nan_residuals() {
        let mut o = Outcome::default();
        o.check("x", 1e-9, 1e-6);
        assert!(o.passed());
        o.check("y", f64::NAN, 1e-6);
        assert!(!o.passed());
    }
}
