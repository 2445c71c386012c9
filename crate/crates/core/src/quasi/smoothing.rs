use std::f64::consts::PI;

use nalgebra::DMatrix;

use super::{QuasiDistribution, QuasiKind};
use crate::error::{Error, Result};
use crate::fock::LadderConvention;

#[derive(Debug, Clone, Copy)]
pub struct SmoothOptions {
    /// Largest fraction of the input mass the kernel may carry off the grid before a warning.
    pub leak_tolerance: f64,
}

impl Default for SmoothOptions {
    fn default() -> Self {
        SmoothOptions { leak_tolerance: 1e-6 }
    }
}

/// Kernel width for which one smoothing step lowers `s` by exactly one (the coherent-state width).
pub fn matched_lambda(convention: LadderConvention) -> f64 {
    convention.lambda * convention.lambda
}

/// Convolution with `K(Δq, Δp) = (1/(πħ)) exp(−λΔq²/ħ − Δp²/(λħ))`.
///
/// `K` integrates to one over `dq dp`, so the output keeps the normalization of the input.
/// At [`matched_lambda`] an `s`-distribution becomes the `(s − 1)`-distribution
/// (P to Wigner, Wigner to Husimi); other widths give a [`QuasiKind::Smoothed`] result.
pub fn weierstrass_smooth(w: &QuasiDistribution, lambda: f64, opts: &SmoothOptions) -> Result<QuasiDistribution> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::invariant("lambda > 0", format!("lambda = {lambda}")));
    }
    let QuasiKind::SParam { s } = w.kind else {
        return Err(Error::KindMismatch(format!("cannot smooth a {} grid", w.kind)));
    };
    let g = w.grid;
    let hbar = g.convention.hbar;
    let (dq, dp) = (g.dq(), g.dp());
    let kq = DMatrix::from_fn(g.nq, g.nq, |i, k| {
        let d = g.q(i) - g.q(k);
        (lambda / (PI * hbar)).sqrt() * (-lambda * d * d / hbar).exp() * dq
    });
    let kp = DMatrix::from_fn(g.np, g.np, |j, k| {
        let d = g.p(j) - g.p(k);
        (1.0 / (PI * lambda * hbar)).sqrt() * (-d * d / (lambda * hbar)).exp() * dp
    });
    let v = DMatrix::from_row_slice(g.nq, g.np, w.values());
    let out = &kq * v * kp.transpose();

    // fraction of each source point's kernel that lands on the grid
    let keep_q: Vec<f64> = kq.column_iter().map(|c| c.sum()).collect();
    let keep_p: Vec<f64> = kp.column_iter().map(|c| c.sum()).collect();
    let (mut lost, mut total) = (0.0, 0.0);
    for i in 0..g.nq {
        for j in 0..g.np {
            let m = w.get(i, j).abs();
            total += m;
            lost += m * (1.0 - keep_q[i] * keep_p[j]).max(0.0);
        }
    }
    let leak = if total > 0.0 { lost / total } else { 0.0 };

    let matched = matched_lambda(g.convention);
    let kind = if (lambda - matched).abs() <= 1e-12 * matched {
        QuasiKind::SParam { s: s - 1.0 }
    } else {
        QuasiKind::Smoothed { s, lambda }
    };
    let mut values = Vec::with_capacity(g.nq * g.np);
    for i in 0..g.nq {
        for j in 0..g.np {
            values.push(out[(i, j)]);
        }
    }
    let mut result = QuasiDistribution::new(g, kind, values)?;
    result.diagnostics.set("edge_leak", leak);
    result.diagnostics.set("kernel_normalization", 1.0 / (PI * hbar));
    if leak > opts.leak_tolerance {
        result
            .diagnostics
            .warn(format!("smoothing kernel carries {leak:.3e} of the mass off the grid"));
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quasi::PhaseGrid;

    fn grid(extent: f64, n: usize) -> PhaseGrid {
        PhaseGrid::symmetric(extent, n, LadderConvention::default()).unwrap()
    }

    #[test]
    fn narrow_input_reproduces_the_kernel() {
        let g = grid(4.0, 81);
        let mut values = vec![0.0; 81 * 81];
        values[40 * 81 + 40] = 1.0 / g.cell_area();
        let spike = QuasiDistribution::new(g, QuasiKind::SParam { s: 0.0 }, values).unwrap();
        let out = weierstrass_smooth(&spike, 1.0, &SmoothOptions::default()).unwrap();
        // as an α-density the kernel is (2ħ)(1/(πħ)) e^{−q² − p²} = (2/π) e^{−2|α|²}
        for &(i, j) in &[(40, 40), (45, 38), (30, 52)] {
            let a = g.alpha(i, j);
            let k = 2.0 / PI * (-2.0 * a.norm_sqr()).exp();
            assert!((out.get(i, j) - k).abs() < 1e-12);
        }
        assert_eq!(out.kind, QuasiKind::SParam { s: -1.0 });
    }

    #[test]
    fn wide_kernel_warns_about_leakage() {
        let g = grid(2.0, 16);
        let flat = QuasiDistribution::from_fn(g, QuasiKind::SParam { s: 0.0 }, |_| 1.0).unwrap();
        let out = weierstrass_smooth(&flat, 0.2, &SmoothOptions::default()).unwrap();
        assert!(out.diagnostics.get("edge_leak").unwrap() > 1e-3);
        assert!(!out.diagnostics.warnings.is_empty());
        assert!(matches!(out.kind, QuasiKind::Smoothed { .. }));
    }

    #[test]
    fn rejects_non_state_kinds() {
        let g = grid(2.0, 16);
        let sym = QuasiDistribution::from_fn(g, QuasiKind::Symbol { s: 1.0 }, |_| 1.0).unwrap();
        assert!(weierstrass_smooth(&sym, 1.0, &SmoothOptions::default()).is_err());
    }
}
