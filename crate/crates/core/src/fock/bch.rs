//! The su(1,1) triple `K0 = -sigma_z/2`, `K- = sigma_+`, `K+ = -sigma_-` in its 2x2
//! representation, used to read off the disentangled form of the squeeze operator.

use nalgebra::Matrix2;
use num_complex::Complex64;

use super::{SqueezeParameter, ONE, ZERO};

pub type Matrix2c = Matrix2<Complex64>;

/// `K0 = diag(-1, 1) / 2`.
pub fn k0() -> Matrix2c {
    Matrix2::new(Complex64::new(-0.5, 0.0), ZERO, ZERO, Complex64::new(0.5, 0.0))
}

/// `K- = [[0, 1], [0, 0]]`, the image of `a^2 / 2`.
pub fn k_minus() -> Matrix2c {
    Matrix2::new(ZERO, ONE, ZERO, ZERO)
}

/// `K+ = [[0, 0], [-1, 0]]`, the image of `a^{+2} / 2`.
pub fn k_plus() -> Matrix2c {
    Matrix2::new(ZERO, ZERO, -ONE, ZERO)
}

/// Parameters of `e^{a K+} e^{c K0} e^{b K-}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuFactors {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
}

impl SuFactors {
    /// Product of the three exponentials, using `e^{xK±} = I + xK±` and the diagonal `e^{cK0}`.
    pub fn matrix(&self) -> Matrix2c {
        let id = Matrix2c::identity();
        let plus = id + k_plus() * self.a;
        let minus = id + k_minus() * self.b;
        let zero = Matrix2::new((-self.c * 0.5).exp(), ZERO, ZERO, (self.c * 0.5).exp());
        plus * zero * minus
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BchIdentity {
    /// `exp([[0, zeta^*], [zeta, 0]])` by numerical exponentiation.
    pub numeric: Matrix2c,
    /// `[[cosh r, e^{-i theta} sinh r], [e^{i theta} sinh r, cosh r]]`.
    pub closed_form: Matrix2c,
    pub factors: SuFactors,
}

impl BchIdentity {
    pub fn residual(&self) -> f64 {
        (self.numeric - self.closed_form).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn factor_residual(&self) -> f64 {
        (self.factors.matrix() - self.closed_form)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

/// Both sides of the 2x2 squeeze identity plus the disentangling parameters.
///
/// Matching entries of `e^{aK+} e^{cK0} e^{bK-}` against the closed form gives
/// `e^{-c/2} = cosh r`, `b = e^{-i theta} tanh r`, `a = -e^{i theta} tanh r`, so
/// `c = -2 ln cosh r`; through `K0 <-> (a^+ a + 1/2)/2` this is the middle factor
/// `exp(-ln cosh r (1/2 + a^+ a))`.
pub fn bch_matrix_identity(zeta: SqueezeParameter) -> BchIdentity {
    let z = zeta.zeta();
    let r = zeta.r();
    let generator = Matrix2::new(ZERO, z.conj(), z, ZERO);
    let numeric = generator.exp();

    let phase = zeta.phase();
    let ch = Complex64::new(r.cosh(), 0.0);
    let sh = r.sinh();
    let closed_form = Matrix2::new(ch, phase.conj() * sh, phase * sh, ch);

    let t = r.tanh();
    let factors = SuFactors {
        a: -phase * t,
        b: phase.conj() * t,
        c: Complex64::new(-2.0 * r.cosh().ln(), 0.0),
    };
    BchIdentity {
        numeric,
        closed_form,
        factors,
    }
}
