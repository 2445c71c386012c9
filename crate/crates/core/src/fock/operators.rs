use log::warn;
use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{
    annihilation, creation, expm_antihermitian, ComplexMatrix, FockSpace, SqueezeParameter,
    TRUNCATION_TOL, ZERO,
};
use super::dd::Dd;
use crate::special::{displacement_elements, ln_factorial};

/// `|<dim-1|op|0>|^2`: how much of the ground-state image reaches the top level.
pub fn tail_weight(op: &ComplexMatrix) -> f64 {
    op[(op.nrows() - 1, 0)].norm_sqr()
}

fn check_tail(name: &str, op: &ComplexMatrix) {
    let tail = tail_weight(op);
    if tail > TRUNCATION_TOL * TRUNCATION_TOL {
        warn!("{name}: ground-state image has tail weight {tail:.3e} at level {}", op.nrows() - 1);
    }
}

/// `D(alpha) = exp(alpha a^+ - alpha^* a)`, exponentiated in the truncated space.
///
/// Accurate on the low-lying block while `|alpha|^2 << dim`.
pub fn displacement(alpha: Complex64, space: FockSpace) -> ComplexMatrix {
    let a = annihilation(space);
    let ad = creation(space);
    let gen = ad * alpha - a * alpha.conj();
    let d = expm_antihermitian(&gen);
    check_tail("displacement", &d);
    d
}

/// Matrix elements of the untruncated `D(alpha)` (generalized Laguerre form).
pub fn displacement_analytic(alpha: Complex64, space: FockSpace) -> ComplexMatrix {
    let d = space.dim();
    DMatrix::from_row_slice(d, d, &displacement_elements(alpha, d))
}

/// `S(zeta) = exp((zeta^* a^2 - zeta a^{+2}) / 2)` by direct exponentiation.
///
/// The generator is exponentiated in a working space of `2 * dim` levels and the
/// leading `dim x dim` block is returned. Squeezing spreads `|n>` far above `n`
/// (mean photon number `n cosh 2r + sinh^2 r`), so exponentiating in `dim` itself
/// corrupts the upper half of the block already at `r = 1`. With the padding the block
/// `n < dim/2` is accurate for `r <= 1`.
pub fn squeeze_direct(zeta: SqueezeParameter, space: FockSpace) -> ComplexMatrix {
    squeeze_direct_in(zeta, space, 2 * space.dim())
}

/// [`squeeze_direct`] with an explicit working dimension (`work_dim >= dim`).
pub fn squeeze_direct_in(zeta: SqueezeParameter, space: FockSpace, work_dim: usize) -> ComplexMatrix {
    let d = space.dim();
    let work = FockSpace { dim: work_dim.max(d) };
    let a = annihilation(work);
    let ad = creation(work);
    let z = zeta.zeta();
    let gen = (&a * &a * z.conj() - &ad * &ad * z) * Complex64::new(0.5, 0.0);
    let full = expm_antihermitian(&gen);
    let s = full.view((0, 0), (d, d)).into_owned();
    check_tail("squeeze_direct", &s);
    s
}

/// The three factors of the normal-ordered squeeze decomposition
/// `S = exp(-e^{i theta} tanh r a^{+2}/2) exp(-ln cosh r (1/2 + a^+ a)) exp(e^{-i theta} tanh r a^2/2)`.
#[derive(Debug, Clone)]
pub struct SqueezeFactors {
    pub raising: ComplexMatrix,
    pub diagonal: ComplexMatrix,
    pub lowering: ComplexMatrix,
}

impl SqueezeFactors {
    pub fn product(&self) -> ComplexMatrix {
        &self.raising * &self.diagonal * &self.lowering
    }
}

/// `exp(c a^2)` on `space`. The generator is nilpotent, so the series terminates and
/// `<n - 2k| exp(c a^2) |n> = c^k / k! * sqrt(n! / (n - 2k)!)` holds entry by entry.
fn exp_lowering_pair(c: Complex64, space: FockSpace) -> ComplexMatrix {
    let d = space.dim();
    let mut m = ComplexMatrix::zeros(d, d);
    let (ln_c, arg_c) = (c.norm().ln(), c.arg());
    for n in 0..d {
        m[(n, n)] = Complex64::new(1.0, 0.0);
        if c == ZERO {
            continue;
        }
        for k in 1..=n / 2 {
            let kf = k as f64;
            let ln_mag = kf * ln_c - ln_factorial(k) + 0.5 * (ln_factorial(n) - ln_factorial(n - 2 * k));
            m[(n - 2 * k, n)] = Complex64::from_polar(ln_mag.exp(), kf * arg_c);
        }
    }
    m
}

pub fn squeeze_factors(zeta: SqueezeParameter, space: FockSpace) -> SqueezeFactors {
    let d = space.dim();
    let r = zeta.r();
    let t = r.tanh();
    let phase = zeta.phase();
    let ln_cosh = r.cosh().ln();
    let diagonal = DMatrix::from_fn(d, d, |i, j| {
        if i == j {
            Complex64::new((-ln_cosh * (0.5 + i as f64)).exp(), 0.0)
        } else {
            ZERO
        }
    });
    // exp(c a^{+2}) is the transpose of exp(c a^2)
    SqueezeFactors {
        raising: exp_lowering_pair(phase * (-0.5 * t), space).transpose(),
        diagonal,
        lowering: exp_lowering_pair(phase.conj() * (0.5 * t), space),
    }
}

/// Squeeze operator assembled from its three-factor decomposition.
///
/// Each factor is evaluated from its terminating series, so this route never touches the
/// generator used by [`squeeze_direct`]. Entries with both indices below `dim` are exact for
/// the infinite-dimensional operator because the outer factors are triangular.
///
/// The product sums alternating terms far larger than the result (about `1e9` for
/// `n ~ 60` at `r = 1`), so it is formed in double-double arithmetic. `tanh r` and
/// `sech r` are both derived from the single rounded value `w = e^{−r}`, which keeps them
/// consistent with one nearby `r`.
pub fn squeeze_decomposed(zeta: SqueezeParameter, space: FockSpace) -> ComplexMatrix {
    let d = space.dim();
    let w = Dd::from_f64((-zeta.r()).exp());
    let w2 = w * w;
    let denom = Dd::ONE + w2;
    let half_t = (Dd::ONE - w2) / (denom * Dd::from_f64(2.0));
    let sech = w * Dd::from_f64(2.0) / denom;
    // m[i][k] = (t/2)^p / p! * sqrt(i!/k!) with i = k + 2p: the modulus of both outer factors
    let mut m = vec![vec![Dd::default(); d]; d];
    for k in 0..d {
        m[k][k] = Dd::ONE;
        let mut i = k + 2;
        while i < d {
            let p = ((i - k) / 2) as f64;
            let step = Dd::from_f64((i * (i - 1)) as f64).sqrt() * half_t / Dd::from_f64(p);
            m[i][k] = m[i - 2][k] * step;
            i += 2;
        }
    }
    let mut sech_pow = Vec::with_capacity(d);
    let mut acc = Dd::ONE;
    for _ in 0..d {
        sech_pow.push(acc);
        acc = acc * sech;
    }
    let root_sech = sech.sqrt().to_f64();
    let phase = zeta.phase();
    let mut s = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        for j in (i % 2..d).step_by(2) {
            let mut sum = Dd::default();
            for k in (i % 2..=i.min(j)).step_by(2) {
                let term = m[i][k] * sech_pow[k] * m[j][k];
                sum = if ((i - k) / 2) % 2 == 0 { sum + term } else { sum - term };
            }
            // e^{iθ p} from the raising factor and e^{−iθ q} from the lowering factor
            let half_diff = (i as i32 - j as i32) / 2;
            s[(i, j)] = phase.powi(half_diff) * (sum.to_f64() * root_sech);
        }
    }
    check_tail("squeeze_decomposed", &s);
    s
}
