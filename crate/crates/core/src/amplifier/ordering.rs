use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{channel_params, moment_integral, AmplifierChannel};
use crate::error::{Error, Result};
use crate::fock::{annihilation, creation, ComplexMatrix, FockSpace};
use crate::special::ln_factorial;

/// Largest `max(N, M)` accepted by [`OrderedPolynomial::new`].
pub const DEFAULT_MAX_ORDER: usize = 24;

/// Placement of `a` and `a^+` in each monomial, keyed by `(N, M)` = powers of `(a^+, a)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ordering {
    /// `(a^+)^N a^M`
    Normal,
    /// `a^M (a^+)^N`
    Antinormal,
    /// `(1/(M+1)) Σ_{n=0}^{M} a^{M−n} (a^+)^N a^n`
    Symmetric,
}

impl fmt::Display for Ordering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ordering::Normal => "normal",
            Ordering::Antinormal => "antinormal",
            Ordering::Symmetric => "symmetric",
        })
    }
}

impl std::str::FromStr for Ordering {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "normal" => Ok(Ordering::Normal),
            "antinormal" => Ok(Ordering::Antinormal),
            "symmetric" => Ok(Ordering::Symmetric),
            other => Err(Error::Parse(format!("unknown ordering `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderedPolynomial {
    pub ordering: Ordering,
    coeffs: BTreeMap<(usize, usize), Complex64>,
}

impl OrderedPolynomial {
    pub fn new(ordering: Ordering, coeffs: impl IntoIterator<Item = ((usize, usize), Complex64)>) -> Result<Self> {
        Self::with_bound(ordering, coeffs, DEFAULT_MAX_ORDER)
    }

    pub fn with_bound(
        ordering: Ordering,
        coeffs: impl IntoIterator<Item = ((usize, usize), Complex64)>,
        bound: usize,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for ((n, m), c) in coeffs {
            if n.max(m) > bound {
                return Err(Error::invariant("max(N, M) <= bound", format!("({n}, {m}) with bound {bound}")));
            }
            if !(c.re.is_finite() && c.im.is_finite()) {
                return Err(Error::InvalidParameter(format!("coefficient ({n}, {m}) is not finite")));
            }
            *map.entry((n, m)).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        map.retain(|_, c| c.norm() != 0.0);
        Ok(OrderedPolynomial { ordering, coeffs: map })
    }

    pub fn coeffs(&self) -> &BTreeMap<(usize, usize), Complex64> {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize, m: usize) -> Complex64 {
        self.coeffs.get(&(n, m)).copied().unwrap_or_default()
    }

    /// `max(N, M)` over the support; zero for the empty polynomial.
    pub fn order(&self) -> usize {
        self.coeffs.keys().map(|&(n, m)| n.max(m)).max().unwrap_or(0)
    }

    /// Matrix of the operator on `space`. Products are formed in a space enlarged by the
    /// order of the polynomial, so truncation of `a^+` does not reach the returned block.
    pub fn operator_matrix(&self, space: FockSpace) -> Result<ComplexMatrix> {
        let d = space.dim();
        let big = FockSpace::new(d + self.order() + 1)?;
        let (a, ad) = (annihilation(big), creation(big));
        let mut a_pow = vec![ComplexMatrix::identity(big.dim(), big.dim())];
        let mut ad_pow = a_pow.clone();
        for k in 1..=self.order() {
            a_pow.push(&a_pow[k - 1] * &a);
            ad_pow.push(&ad_pow[k - 1] * &ad);
        }
        let mut total = ComplexMatrix::zeros(big.dim(), big.dim());
        for (&(n, m), &c) in &self.coeffs {
            total += monomial(self.ordering, n, m, &a_pow, &ad_pow) * c;
        }
        Ok(total.view((0, 0), (d, d)).into_owned())
    }

    /// The same operator expanded in another ordering.
    ///
    /// The operator matrix is built on `dim` levels and the normally ordered coefficients are
    /// read off its diagonals by forward substitution; for a target other than normal order the
    /// normal expansions of the target monomials are inverted. Needs `dim ≥ 2K + 1` for order `K`.
    pub fn to_ordering(&self, target: Ordering, dim: usize) -> Result<OrderedPolynomial> {
        let k = self.order();
        if dim < 2 * k + 1 {
            return Err(Error::invariant("dim >= 2K + 1", format!("dim = {dim}, K = {k}")));
        }
        let space = FockSpace::new(dim)?;
        let normal = normal_coefficients(&self.operator_matrix(space)?, k);
        let coeffs = if target == Ordering::Normal {
            normal
        } else {
            let keys: Vec<(usize, usize)> = (0..=k).flat_map(|n| (0..=k).map(move |m| (n, m))).collect();
            let index: BTreeMap<(usize, usize), usize> = keys.iter().enumerate().map(|(i, key)| (*key, i)).collect();
            let mut t = DMatrix::<Complex64>::zeros(keys.len(), keys.len());
            for (col, &(n, m)) in keys.iter().enumerate() {
                let unit = OrderedPolynomial::with_bound(target, [((n, m), Complex64::new(1.0, 0.0))], k)?;
                for (key, c) in normal_coefficients(&unit.operator_matrix(space)?, k) {
                    t[(index[&key], col)] = c;
                }
            }
            let rhs = DVector::from_iterator(keys.len(), keys.iter().map(|key| normal.get(key).copied().unwrap_or_default()));
            let sol = t
                .lu()
                .solve(&rhs)
                .ok_or_else(|| Error::InvalidParameter("ordering transform is singular".into()))?;
            keys.into_iter().zip(sol.iter().copied()).collect()
        };
        let scale = coeffs.values().fold(0.0_f64, |s, c| s.max(c.norm()));
        let kept = coeffs.into_iter().filter(|(_, c)| c.norm() > 1e-13 * scale);
        OrderedPolynomial::with_bound(target, kept, k.max(DEFAULT_MAX_ORDER))
    }
}

fn monomial(ordering: Ordering, n: usize, m: usize, a: &[ComplexMatrix], ad: &[ComplexMatrix]) -> ComplexMatrix {
    match ordering {
        Ordering::Normal => &ad[n] * &a[m],
        Ordering::Antinormal => &a[m] * &ad[n],
        Ordering::Symmetric => {
            let mut acc = ComplexMatrix::zeros(a[0].nrows(), a[0].ncols());
            for k in 0..=m {
                acc += &a[m - k] * &ad[n] * &a[k];
            }
            acc / Complex64::new((m + 1) as f64, 0.0)
        }
    }
}

/// Normally ordered coefficients `c_{N,M}` with `max(N, M) ≤ k` of an operator matrix.
///
/// `<k'+d| (a^+)^N a^M |k'>` with `d = N − M` is `sqrt(k'! (k'+d)!)/(k'−M)!` for `k' ≥ M` and zero
/// below, so each diagonal is triangular in `M`.
fn normal_coefficients(op: &ComplexMatrix, k: usize) -> BTreeMap<(usize, usize), Complex64> {
    let mut out = BTreeMap::new();
    let element = |row: usize, col: usize, m: usize| -> f64 {
        (0.5 * (ln_factorial(col) + ln_factorial(row)) - ln_factorial(col - m)).exp()
    };
    for d in -(k as isize)..=(k as isize) {
        let m_lo = (-d).max(0) as usize;
        let m_hi = if d > 0 { k - d as usize } else { k };
        let mut found: Vec<Complex64> = Vec::new();
        for m in m_lo..=m_hi {
            let col = m;
            let row = (m as isize + d) as usize;
            let mut rest = op[(row, col)];
            for (i, c) in found.iter().enumerate() {
                rest -= c * element(row, col, m_lo + i);
            }
            let c = rest / element(row, col, m);
            found.push(c);
            let n = (m as isize + d) as usize;
            out.insert((n, m), c);
        }
    }
    out
}

/// Husimi function at `α` of the operator `f` after the channel,
/// `(1/(πm)) Σ c_{N,M} I_{N,M}(α)` over the normally ordered coefficients of `f`.
///
/// Antinormal and symmetric inputs are first re-expanded in normal order, since
/// `<β|f|β> = Σ c_{N,M} β*^N β^M` holds for normal order only. At `m = 0` the channel is a pure
/// gain and the value is `Σ c_{N,M} (α*/G)^N (α/G)^M / G²`.
pub fn amplified_operator_husimi(f: &OrderedPolynomial, alpha: Complex64, ch: &AmplifierChannel) -> Result<Complex64> {
    let (gain, noise) = channel_params(ch)?;
    let normal = match f.ordering {
        Ordering::Normal => f.clone(),
        _ => f.to_ordering(Ordering::Normal, 2 * f.order() + 1)?,
    };
    let mut acc = Complex64::new(0.0, 0.0);
    if noise == 0.0 {
        let b = alpha / gain;
        for (&(n, m), &c) in normal.coeffs() {
            acc += c * b.conj().powu(n as u32) * b.powu(m as u32);
        }
        return Ok(acc / (gain * gain));
    }
    for (&(n, m), &c) in normal.coeffs() {
        acc += c * moment_integral(n, m, alpha, gain, noise)?;
    }
    Ok(acc / (PI * noise))
}
