use num_complex::Complex64;

use super::{PhaseGrid, QuasiDistribution, QuasiKind};
use crate::error::{Error, Result};
use crate::fock::ComplexMatrix;
use crate::states::coherent_amplitudes;

/// Symbol of the `s`-ordered polynomial `Σ c {a^{+n} a^m}_s`, which is `Re Σ c α*^n α^m`
/// for every ordering.
pub fn polynomial_symbol(grid: &PhaseGrid, s: f64, terms: &[(u32, u32, Complex64)]) -> Result<QuasiDistribution> {
    QuasiDistribution::from_fn(*grid, QuasiKind::Symbol { s }, |a| {
        terms
            .iter()
            .map(|&(n, m, c)| c * a.conj().powu(n) * a.powu(m))
            .sum::<Complex64>()
            .re
    })
}

/// Normal-ordered symbol `<α|G|α>` of a Hermitian operator matrix.
pub fn normal_symbol(op: &ComplexMatrix, grid: &PhaseGrid) -> Result<QuasiDistribution> {
    let d = op.nrows();
    QuasiDistribution::from_fn(*grid, QuasiKind::Symbol { s: 1.0 }, |a| {
        let c = coherent_amplitudes(a, d);
        (c.adjoint() * op * &c)[(0, 0)].re
    })
}

/// `<G> = ∫ g(α) F(α) d²α` for a symbol and a state distribution of the same ordering:
/// Weyl symbol with Wigner, normal symbol with P, antinormal symbol with Husimi.
pub fn expectation_from_symbols(g_symbol: &QuasiDistribution, rho_dist: &QuasiDistribution) -> Result<f64> {
    let (QuasiKind::Symbol { s: sg }, QuasiKind::SParam { s: sr }) = (&g_symbol.kind, &rho_dist.kind) else {
        return Err(Error::KindMismatch(format!(
            "expected a symbol and a state distribution, got {} and {}",
            g_symbol.kind, rho_dist.kind
        )));
    };
    if (sg - sr).abs() > 1e-12 {
        return Err(Error::KindMismatch(format!(
            "symbol({sg}) pairs with s_param({sg}), not s_param({sr})"
        )));
    }
    if !g_symbol.grid.same_as(&rho_dist.grid) {
        return Err(Error::GridMismatch("symbol and distribution live on different grids".into()));
    }
    let sum: f64 = g_symbol.values().iter().zip(rho_dist.values()).map(|(g, f)| g * f).sum();
    Ok(sum * rho_dist.grid.cell_area())
}
