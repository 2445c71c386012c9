use nalgebra::SymmetricEigen;
use num_complex::Complex64;

use super::{ComplexMatrix, FockSpace, StateVector, ALGEBRAIC_TOL};
use crate::error::{Error, Result};

/// A validated density operator on a truncated Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
    space: FockSpace,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity at the default tolerance.
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(mat, ALGEBRAIC_TOL)
    }

    pub fn with_tolerance(mat: ComplexMatrix, tol: f64) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::invariant(
                "square matrix",
                format!("{}x{}", mat.nrows(), mat.ncols()),
            ));
        }
        let space = FockSpace::new(mat.nrows())?;
        if mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::invariant("finite entries", "matrix has non-finite entries"));
        }
        let herm = (&mat - mat.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if herm > tol {
            return Err(Error::invariant("Hermitian", format!("||rho - rho^+|| = {herm:.3e}")));
        }
        let tr = mat.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > tol {
            return Err(Error::invariant("unit trace", format!("Tr rho = {tr}")));
        }
        let rho = DensityMatrix { mat, space };
        let min_eig = rho.min_eigenvalue();
        if min_eig < -tol {
            return Err(Error::invariant(
                "positive semidefinite",
                format!("min eigenvalue {min_eig:.3e}"),
            ));
        }
        Ok(rho)
    }

    /// `|psi><psi|` after renormalizing `psi`.
    pub fn from_pure(psi: &StateVector) -> Result<Self> {
        let n = psi.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidParameter("state vector has zero norm".into()));
        }
        let v = psi / Complex64::new(n, 0.0);
        let mat = &v * v.adjoint();
        Self::new(mat)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn space(&self) -> FockSpace {
        self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Population of the highest retained level; large values mean the truncation is too tight.
    pub fn tail_weight(&self) -> f64 {
        let d = self.dim();
        self.mat[(d - 1, d - 1)].re
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let h = (&self.mat + self.mat.adjoint()).map(|z| z * 0.5);
        SymmetricEigen::new(h).eigenvalues.min()
    }

    pub fn hermiticity_residual(&self) -> f64 {
        (&self.mat - self.mat.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Complex64 {
        self.mat.trace()
    }

    pub fn purity(&self) -> f64 {
        (&self.mat * &self.mat).trace().re
    }

    /// `Tr(rho op)`.
    pub fn expectation(&self, op: &ComplexMatrix) -> Complex64 {
        (&self.mat * op).trace()
    }

    /// The state vector of a pure state, up to a global phase fixed so the largest amplitude is
    /// real and positive. Fails when `1 − Tr ρ² > tol`.
    pub fn pure_state(&self, tol: f64) -> Result<StateVector> {
        let purity = self.purity();
        if 1.0 - purity > tol {
            return Err(Error::invariant("pure state", format!("Tr rho^2 = {purity:.6}")));
        }
        let eig = SymmetricEigen::new(self.mat.clone());
        let top = eig.eigenvalues.imax();
        let v = eig.eigenvectors.column(top).into_owned();
        let lead = v.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap_or_default();
        let phase = if lead.norm() > 0.0 { lead.conj() / lead.norm() } else { Complex64::new(1.0, 0.0) };
        Ok(v * phase)
    }

    pub fn mean_photon_number(&self) -> f64 {
        (0..self.dim()).map(|n| n as f64 * self.mat[(n, n)].re).sum()
    }

    /// Highest Fock level whose population exceeds `threshold`.
    pub fn occupied_levels(&self, threshold: f64) -> usize {
        (0..self.dim())
            .rev()
            .find(|&n| self.mat[(n, n)].re > threshold)
            .unwrap_or(0)
    }

    /// Row-major copy of the entries.
    pub fn to_row_major(&self) -> Vec<Complex64> {
        let d = self.dim();
        let mut out = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                out.push(self.mat[(i, j)]);
            }
        }
        out
    }

    /// Convex combination of validated states on the same space.
    pub fn mixture(parts: &[(f64, DensityMatrix)]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty mixture".into()))?;
        let dim = first.1.dim();
        let total: f64 = parts.iter().map(|(w, _)| *w).sum();
        if parts.iter().any(|(w, _)| *w < 0.0) {
            return Err(Error::invariant("weights >= 0", "negative mixture weight"));
        }
        if (total - 1.0).abs() > ALGEBRAIC_TOL {
            return Err(Error::invariant("weights sum to 1", format!("sum = {total}")));
        }
        let mut mat = ComplexMatrix::zeros(dim, dim);
        for (w, rho) in parts {
            if rho.dim() != dim {
                return Err(Error::InvalidParameter("mixture components differ in dim".into()));
            }
            mat += rho.matrix() * Complex64::new(*w, 0.0);
        }
        Self::new(mat)
    }
}
