use std::fmt;
use std::f64::consts::PI;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::special::{gauss_hermite, ln_factorial};
use crate::states::{fmt_complex, parse_complex};

/// `𝓘_{2n+1} = ∫_0^∞ ρ^{2n+1} e^{−ρ²} dρ`, exactly, by `𝓘_{2n+1} = n 𝓘_{2n−1}` from `𝓘_1 = 1/2`.
pub fn radial_integral(n: u32) -> BigRational {
    let mut acc = BigRational::new(1.into(), 2.into());
    for k in 1..=n {
        acc *= BigRational::from_integer(k.into());
    }
    acc
}

fn check_channel(gain: f64, noise: f64) -> Result<()> {
    if !(gain >= 1.0 && gain.is_finite()) {
        return Err(Error::invariant("G >= 1", format!("G = {gain}")));
    }
    if !(noise > 0.0 && noise.is_finite()) {
        return Err(Error::invariant("m > 0", format!("m = {noise}")));
    }
    Ok(())
}

/// `I_{N,M} = ∫ d²β β^M β*^N e^{−|α − βG|²/m}` in closed form:
/// `(πm/G^{M+N+2}) Σ_{j=max(0,N−M)}^{N} M! C(N,j)/(M−N+j)! α^{M−N+j} α*^j m^{N−j}`.
///
/// Every term carries the phase `e^{i(M−N) arg α}`, so the sum is accumulated in the log domain.
pub fn moment_integral(n: usize, m_order: usize, alpha: Complex64, gain: f64, noise: f64) -> Result<Complex64> {
    check_channel(gain, noise)?;
    let ln_a = alpha.norm().ln();
    let lo = n.saturating_sub(m_order);
    let mut logs = Vec::with_capacity(n + 1 - lo);
    for j in lo..=n {
        let power = m_order + j - n;
        let mut t = ln_factorial(m_order) + ln_factorial(n) - ln_factorial(j) - ln_factorial(n - j) - ln_factorial(power)
            + (n - j) as f64 * noise.ln();
        let alpha_power = power + j;
        if alpha_power > 0 {
            if alpha.norm() == 0.0 {
                continue;
            }
            t += alpha_power as f64 * ln_a;
        }
        logs.push(t);
    }
    let Some(top) = logs.iter().copied().reduce(f64::max) else {
        return Ok(Complex64::new(0.0, 0.0));
    };
    let sum: f64 = logs.iter().map(|t| (t - top).exp()).sum();
    let ln_mag = (PI * noise).ln() - (m_order + n + 2) as f64 * gain.ln() + top + sum.ln();
    if ln_mag > f64::MAX.ln() {
        return Err(Error::Overflow(format!("|I_{{{n},{m_order}}}| = e^{ln_mag:.1}")));
    }
    let phase = (m_order as f64 - n as f64) * alpha.arg();
    Ok(Complex64::from_polar(ln_mag.exp(), phase))
}

/// `I_{N,M}` by tensor-product Gauss–Hermite quadrature in `z = (α − βG)/√m`.
///
/// The integrand is a polynomial of degree `N + M` per axis times `e^{−|z|²}`, so
/// `nodes ≥ (N + M)/2 + 1` is exact up to rounding.
pub fn moment_quadrature(n: usize, m_order: usize, alpha: Complex64, gain: f64, noise: f64, nodes: usize) -> Result<Complex64> {
    check_channel(gain, noise)?;
    let (x, w) = gauss_hermite(nodes.max(1));
    let s = noise.sqrt();
    let mut acc = Complex64::new(0.0, 0.0);
    for (xa, wa) in x.iter().zip(&w) {
        for (xb, wb) in x.iter().zip(&w) {
            let beta = (alpha - s * Complex64::new(*xa, *xb)) / gain;
            acc += wa * wb * beta.powu(m_order as u32) * beta.conj().powu(n as u32);
        }
    }
    Ok(acc * noise / (gain * gain))
}

/// A moment request `N,M,alpha,G,m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentQuery {
    pub n: usize,
    pub m_order: usize,
    pub alpha: Complex64,
    pub gain: f64,
    pub noise: f64,
}

impl MomentQuery {
    pub fn closed_form(&self) -> Result<Complex64> {
        moment_integral(self.n, self.m_order, self.alpha, self.gain, self.noise)
    }

    pub fn quadrature(&self) -> Result<Complex64> {
        moment_quadrature(self.n, self.m_order, self.alpha, self.gain, self.noise, (self.n + self.m_order) / 2 + 2)
    }
}

impl fmt::Display for MomentQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{},{}", self.n, self.m_order, fmt_complex(self.alpha), self.gain, self.noise)
    }
}

impl FromStr for MomentQuery {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let f: Vec<&str> = s.split(',').map(str::trim).collect();
        if f.len() != 5 {
            return Err(Error::Parse(format!("moment query `{s}` is not `N,M,alpha,G,m`")));
        }
        let int = |t: &str| t.parse::<usize>().map_err(|_| Error::Parse(format!("`{t}` is not a nonnegative integer")));
        let real = |t: &str| t.parse::<f64>().map_err(|_| Error::Parse(format!("`{t}` is not a number")));
        let q = MomentQuery {
            n: int(f[0])?,
            m_order: int(f[1])?,
            alpha: parse_complex(f[2])?,
            gain: real(f[3])?,
            noise: real(f[4])?,
        };
        check_channel(q.gain, q.noise)?;
        Ok(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radial_chain() {
        assert_eq!(radial_integral(0), BigRational::new(1.into(), 2.into()));
        assert_eq!(radial_integral(1), BigRational::new(1.into(), 2.into()));
        assert_eq!(radial_integral(2), BigRational::from_integer(1.into()));
        assert_eq!(radial_integral(3), BigRational::from_integer(3.into()));
        assert_eq!(radial_integral(4), BigRational::from_integer(12.into()));
    }

    #[test]
    fn gaussian_normalization() {
        let (g, m) = (1.7, 0.6);
        let i = moment_integral(0, 0, Complex64::new(0.3, -0.8), g, m).unwrap();
        assert!((i - PI * m / (g * g)).norm() < 1e-14);
    }

    #[test]
    fn first_moment_is_centered() {
        let a = Complex64::new(1.0, 1.0);
        let i = moment_integral(0, 1, a, 2.0, 0.5).unwrap();
        assert!((i - PI * 0.5 * a / 8.0).norm() < 1e-14);
    }

    #[test]
    fn zero_alpha_keeps_only_balanced_terms() {
        let i = moment_integral(2, 2, Complex64::new(0.0, 0.0), 1.3, 0.7).unwrap();
        // M! m^N with j = 0
        let expect = PI * 0.7 / 1.3f64.powi(6) * 2.0 * 0.49;
        assert!((i.re - expect).abs() < 1e-14 && i.im == 0.0);
        assert_eq!(moment_integral(1, 2, Complex64::new(0.0, 0.0), 1.3, 0.7).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn closed_form_matches_gauss_hermite() {
        let a = Complex64::new(0.8, -0.2);
        for (n, m) in [(3, 3), (0, 5), (4, 1), (6, 6)] {
            let q = MomentQuery { n, m_order: m, alpha: a, gain: 1.5, noise: 1.2 };
            let c = q.closed_form().unwrap();
            let h = q.quadrature().unwrap();
            assert!((c - h).norm() <= 1e-12 * c.norm(), "({n},{m}) {c} vs {h}");
        }
    }

    #[test]
    fn huge_orders_report_overflow() {
        let r = moment_integral(200, 200, Complex64::new(30.0, 0.0), 1.0, 50.0);
        assert!(matches!(r, Err(Error::Overflow(_))));
    }

    #[test]
    fn rejects_invalid_channel() {
        assert!(moment_integral(1, 1, Complex64::new(1.0, 0.0), 0.5, 1.0).is_err());
        assert!(moment_integral(1, 1, Complex64::new(1.0, 0.0), 1.5, 0.0).is_err());
        assert!("1,2,0.5+1i,2,0.5".parse::<MomentQuery>().is_ok());
        assert!("1,2,0.5+1i,2".parse::<MomentQuery>().is_err());
    }
}
