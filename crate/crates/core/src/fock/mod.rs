//! Truncated Fock-space linear algebra.
//!
//! Everything here lives on the span of `|0>, ..., |dim-1>`. Operators are dense
//! [`ComplexMatrix`] values; states are [`StateVector`]s or [`DensityMatrix`] values.

mod bch;
mod dd;
mod density;
mod operators;

pub use bch::{bch_matrix_identity, k0, k_minus, k_plus, BchIdentity, Matrix2c, SuFactors};
pub use density::DensityMatrix;
pub use operators::{
    displacement, displacement_analytic, squeeze_decomposed, squeeze_direct, squeeze_direct_in,
    squeeze_factors,
    tail_weight, SqueezeFactors,
};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;
pub type StateVector = DVector<Complex64>;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Default tolerance for exact algebraic identities.
pub const ALGEBRAIC_TOL: f64 = 1e-10;
/// Default tolerance for truncation-limited operator equalities.
pub const TRUNCATION_TOL: f64 = 1e-6;

/// Truncation level of the oscillator Hilbert space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FockSpace {
    dim: usize,
}

impl FockSpace {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::invariant("dim >= 2", format!("got dim = {dim}")));
        }
        Ok(FockSpace { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// Fixes the map between phase space `(q, p)` and the complex amplitude
/// `alpha = (2 hbar)^{-1/2} (lambda q + i p / lambda)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LadderConvention {
    pub hbar: f64,
    pub lambda: f64,
}

impl Default for LadderConvention {
    fn default() -> Self {
        LadderConvention {
            hbar: 1.0,
            lambda: 1.0,
        }
    }
}

impl LadderConvention {
    pub fn new(hbar: f64, lambda: f64) -> Result<Self> {
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::invariant("hbar > 0", format!("got hbar = {hbar}")));
        }
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::invariant("lambda > 0", format!("got lambda = {lambda}")));
        }
        Ok(LadderConvention { hbar, lambda })
    }

    pub fn alpha(&self, q: f64, p: f64) -> Complex64 {
        let s = (2.0 * self.hbar).sqrt();
        Complex64::new(self.lambda * q / s, p / (self.lambda * s))
    }

    pub fn phase_point(&self, alpha: Complex64) -> (f64, f64) {
        let s = (2.0 * self.hbar).sqrt();
        (alpha.re * s / self.lambda, alpha.im * s * self.lambda)
    }

    /// Ground-state position width `sqrt(hbar)/lambda`.
    pub fn position_width(&self) -> f64 {
        self.hbar.sqrt() / self.lambda
    }

    /// Ground-state momentum width `lambda sqrt(hbar)`.
    pub fn momentum_width(&self) -> f64 {
        self.lambda * self.hbar.sqrt()
    }

    /// `d^2 alpha = jacobian * dq dp`.
    pub fn alpha_jacobian(&self) -> f64 {
        1.0 / (2.0 * self.hbar)
    }
}

/// Squeezing parameter `zeta = r e^{i theta}`; `theta` is taken as 0 when `r = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezeParameter {
    zeta: Complex64,
}

impl SqueezeParameter {
    pub fn new(zeta: Complex64) -> Result<Self> {
        if !(zeta.re.is_finite() && zeta.im.is_finite()) {
            return Err(Error::invariant("r finite", format!("got zeta = {zeta}")));
        }
        Ok(SqueezeParameter { zeta })
    }

    pub fn from_polar(r: f64, theta: f64) -> Result<Self> {
        if r < 0.0 {
            return Err(Error::invariant("r >= 0", format!("got r = {r}")));
        }
        Self::new(Complex64::from_polar(r, theta))
    }

    pub fn zeta(&self) -> Complex64 {
        self.zeta
    }

    pub fn r(&self) -> f64 {
        self.zeta.norm()
    }

    /// Phase in `[0, 2 pi)`.
    pub fn theta(&self) -> f64 {
        if self.zeta.norm() == 0.0 {
            return 0.0;
        }
        self.zeta.arg().rem_euclid(2.0 * std::f64::consts::PI)
    }

    /// `e^{i theta}`, equal to 1 at the origin.
    pub fn phase(&self) -> Complex64 {
        let r = self.r();
        if r == 0.0 {
            ONE
        } else {
            self.zeta / r
        }
    }
}

/// Annihilation operator: `<n-1|a|n> = sqrt(n)`.
pub fn annihilation(space: FockSpace) -> ComplexMatrix {
    let d = space.dim();
    DMatrix::from_fn(d, d, |i, j| {
        if j == i + 1 {
            Complex64::new((j as f64).sqrt(), 0.0)
        } else {
            ZERO
        }
    })
}

pub fn creation(space: FockSpace) -> ComplexMatrix {
    annihilation(space).adjoint()
}

pub fn number(space: FockSpace) -> ComplexMatrix {
    let d = space.dim();
    DMatrix::from_fn(d, d, |i, j| if i == j { Complex64::new(i as f64, 0.0) } else { ZERO })
}

pub fn identity(space: FockSpace) -> ComplexMatrix {
    DMatrix::identity(space.dim(), space.dim())
}

pub fn vacuum(space: FockSpace) -> StateVector {
    let mut v = DVector::from_element(space.dim(), ZERO);
    v[0] = ONE;
    v
}

/// `exp(x)` for anti-Hermitian `x` through the Hermitian eigendecomposition of `-i x`;
/// the result is unitary to working precision.
pub(crate) fn expm_antihermitian(x: &ComplexMatrix) -> ComplexMatrix {
    let i = Complex64::new(0.0, 1.0);
    let h = x.map(|z| -i * z);
    // symmetrize against rounding so the eigensolver sees an exactly Hermitian input
    let h = (&h + h.adjoint()).map(|z| z * 0.5);
    let eig = nalgebra::SymmetricEigen::new(h);
    let phases = DVector::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues.iter().map(|&l| Complex64::from_polar(1.0, l)),
    );
    let v = &eig.eigenvectors;
    let mut scaled = v.clone();
    for (mut col, ph) in scaled.column_iter_mut().zip(phases.iter()) {
        col *= *ph;
    }
    scaled * v.adjoint()
}

/// Largest absolute entry of `a - b` restricted to the leading `k x k` block.
pub fn block_max_diff(a: &ComplexMatrix, b: &ComplexMatrix, k: usize) -> f64 {
    let k = k.min(a.nrows()).min(b.nrows());
    let mut m: f64 = 0.0;
    for i in 0..k {
        for j in 0..k {
            m = m.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    m
}

/// Spectral norm of `a - b` restricted to the leading `k x k` block.
pub fn block_norm_diff(a: &ComplexMatrix, b: &ComplexMatrix, k: usize) -> f64 {
    let k = k.min(a.nrows()).min(b.nrows());
    let diff = a.view((0, 0), (k, k)) - b.view((0, 0), (k, k));
    diff.singular_values().max()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fock_space_rejects_trivial_dimension() {
        assert!(FockSpace::new(1).is_err());
        assert!(FockSpace::new(2).is_ok());
    }

    #[test]
    fn annihilation_dim2() {
        let a = annihilation(FockSpace::new(2).unwrap());
        assert_eq!(a[(0, 1)], ONE);
        assert_eq!(a[(0, 0)], ZERO);
        assert_eq!(a[(1, 0)], ZERO);
        assert_eq!(a[(1, 1)], ZERO);
    }

    #[test]
    fn annihilation_lowers_one_photon() {
        let space = FockSpace::new(4).unwrap();
        let mut one = DVector::from_element(4, ZERO);
        one[1] = ONE;
        let out = annihilation(space) * one;
        assert_eq!(out, vacuum(space));
    }

    #[test]
    fn commutator_is_identity_below_top_level() {
        let space = FockSpace::new(5).unwrap();
        let a = annihilation(space);
        let ad = creation(space);
        let comm = &a * &ad - &ad * &a;
        for i in 0..5 {
            for j in 0..5 {
                let expect = if i != j {
                    0.0
                } else if i < 4 {
                    1.0
                } else {
                    -4.0
                };
                assert!((comm[(i, j)] - Complex64::new(expect, 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn convention_round_trip() {
        let c = LadderConvention::new(0.7, 1.9).unwrap();
        let a = c.alpha(1.3, -0.4);
        let (q, p) = c.phase_point(a);
        assert!((q - 1.3).abs() < 1e-14 && (p + 0.4).abs() < 1e-14);
        assert!(LadderConvention::new(0.0, 1.0).is_err());
        assert!(LadderConvention::new(1.0, -1.0).is_err());
    }

    #[test]
    fn squeeze_parameter_phase_at_zero() {
        let z = SqueezeParameter::new(Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(z.theta(), 0.0);
        assert_eq!(z.phase(), ONE);
        let z = SqueezeParameter::from_polar(0.5, -1.0).unwrap();
        assert!((z.theta() - (2.0 * std::f64::consts::PI - 1.0)).abs() < 1e-14);
    }
}
