//! Standard states: Fock, coherent, squeezed coherent, the non-unitary squeezed vacuum,
//! thermal states and mixtures, plus the textual `StateSpec` form used on the command line.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{
    displacement, squeeze_direct, vacuum, DensityMatrix, FockSpace, SqueezeParameter, StateVector,
    ZERO,
};
use crate::special::ln_factorial;

/// A pure state together with the norm lost to truncation before renormalizing.
#[derive(Debug, Clone)]
pub struct PureState {
    pub vector: StateVector,
    pub discarded_weight: f64,
}

impl PureState {
    fn renormalized(v: StateVector) -> Result<Self> {
        let n2 = v.norm_squared();
        if !(n2 > 0.0 && n2.is_finite()) {
            return Err(Error::InvalidParameter("state has zero or non-finite norm".into()));
        }
        Ok(PureState {
            vector: v / Complex64::new(n2.sqrt(), 0.0),
            discarded_weight: (1.0 - n2).max(0.0),
        })
    }

    pub fn density(&self) -> Result<DensityMatrix> {
        DensityMatrix::from_pure(&self.vector)
    }
}

/// Limits applied by the constructors.
#[derive(Debug, Clone, Copy)]
pub struct StateOptions {
    /// Coherent amplitudes with `|alpha|^2 > fraction * dim` are rejected.
    pub coherent_limit_fraction: f64,
}

impl Default for StateOptions {
    fn default() -> Self {
        StateOptions {
            coherent_limit_fraction: 0.25,
        }
    }
}

pub fn fock_state(n: usize, space: FockSpace) -> Result<StateVector> {
    if n >= space.dim() {
        return Err(Error::invariant("n < dim", format!("n = {n}, dim = {}", space.dim())));
    }
    let mut v = DVector::from_element(space.dim(), ZERO);
    v[n] = Complex64::new(1.0, 0.0);
    Ok(v)
}

/// `|alpha> = e^{-|alpha|^2/2} sum_n alpha^n / sqrt(n!) |n>`, renormalized after truncation.
pub fn coherent_state(alpha: Complex64, space: FockSpace) -> Result<PureState> {
    coherent_state_with(alpha, space, StateOptions::default())
}

pub fn coherent_state_with(alpha: Complex64, space: FockSpace, opts: StateOptions) -> Result<PureState> {
    let limit = opts.coherent_limit_fraction * space.dim() as f64;
    if alpha.norm_sqr() > limit {
        return Err(Error::invariant(
            "|alpha|^2 <= dim/4",
            format!("|alpha|^2 = {:.3} exceeds {limit:.3}", alpha.norm_sqr()),
        ));
    }
    PureState::renormalized(coherent_amplitudes(alpha, space.dim()))
}

/// Exact (unrenormalized) coherent-state amplitudes on the first `dim` levels.
pub fn coherent_amplitudes(alpha: Complex64, dim: usize) -> StateVector {
    let mut v = DVector::from_element(dim, ZERO);
    let mut c = Complex64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    for n in 0..dim {
        v[n] = c;
        c *= alpha / ((n + 1) as f64).sqrt();
    }
    v
}

/// `D(alpha) S(zeta) |0>`.
pub fn squeezed_coherent(alpha: Complex64, zeta: SqueezeParameter, space: FockSpace) -> Result<PureState> {
    let s = squeeze_direct(zeta, space);
    let d = displacement(alpha, space);
    PureState::renormalized(d * (s * vacuum(space)))
}

/// Squeezed vacuum from the non-unitary construction `exp(-zeta a^{+2}/2)|0>`.
#[derive(Debug, Clone)]
pub struct NonunitarySqueezedVacuum {
    /// `(1 + |zeta|^2)^{1/4} exp(-zeta a^{+2}/2)|0>`, normalized so that the pairing
    /// `<0,0;-zeta|0,0;zeta>` equals one.
    pub paired: StateVector,
    /// The same ray with unit norm.
    pub unit: StateVector,
    pub discarded_weight: f64,
}

pub fn squeezed_vacuum_nonunitary(zeta: Complex64, space: FockSpace) -> Result<NonunitarySqueezedVacuum> {
    let z2 = zeta.norm_sqr();
    if !(z2 < 1.0) {
        return Err(Error::invariant("|zeta| < 1", format!("|zeta| = {:.4}", z2.sqrt())));
    }
    let dim = space.dim();
    let mut v = DVector::from_element(dim, ZERO);
    let pref = (1.0 + z2).powf(0.25);
    let half = -zeta * 0.5;
    let mut k = 0;
    while 2 * k < dim {
        let mag = (0.5 * ln_factorial(2 * k) - ln_factorial(k)).exp();
        v[2 * k] = half.powu(k as u32) * mag * pref;
        k += 1;
    }
    // exact unit norm of the untruncated ray: (1 - |zeta|^2)^{-1/2} (1 + |zeta|^2)^{1/2}
    let exact_norm2 = ((1.0 + z2) / (1.0 - z2)).sqrt();
    let n2 = v.norm_squared();
    let unit = &v / Complex64::new(n2.sqrt(), 0.0);
    Ok(NonunitarySqueezedVacuum {
        paired: v,
        unit,
        discarded_weight: (1.0 - n2 / exact_norm2).max(0.0),
    })
}

/// `<bra_of(left)|right>`.
pub fn inner(left: &StateVector, right: &StateVector) -> Complex64 {
    left.dotc(right)
}

/// Thermal state `rho_nn = nbar^n / (1 + nbar)^{n+1}`, renormalized after truncation.
pub fn thermal_state(nbar: f64, space: FockSpace) -> Result<(DensityMatrix, f64)> {
    if !(nbar >= 0.0 && nbar.is_finite()) {
        return Err(Error::invariant("nbar >= 0", format!("nbar = {nbar}")));
    }
    let dim = space.dim();
    let ratio = nbar / (1.0 + nbar);
    let mut diag = Vec::with_capacity(dim);
    let mut p = 1.0 / (1.0 + nbar);
    for _ in 0..dim {
        diag.push(p);
        p *= ratio;
    }
    let total: f64 = diag.iter().sum();
    let mat = DMatrix::from_fn(dim, dim, |i, j| {
        if i == j {
            Complex64::new(diag[i] / total, 0.0)
        } else {
            ZERO
        }
    });
    Ok((DensityMatrix::new(mat)?, (1.0 - total).max(0.0)))
}

/// Declarative description of a state.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Fock(usize),
    Coherent(Complex64),
    SqueezedCoherent { alpha: Complex64, zeta: Complex64 },
    /// Unit-normalized non-unitary squeezed vacuum.
    SqueezedVacuumNonunitary(Complex64),
    Thermal(f64),
    Mixture(Vec<(f64, StateSpec)>),
}

/// A constructed state and the truncation loss it incurred.
#[derive(Debug, Clone)]
pub struct PreparedState {
    pub rho: DensityMatrix,
    pub discarded_weight: f64,
}

impl StateSpec {
    pub fn build(&self, space: FockSpace) -> Result<PreparedState> {
        self.build_with(space, StateOptions::default())
    }

    pub fn build_with(&self, space: FockSpace, opts: StateOptions) -> Result<PreparedState> {
        let pure = |p: PureState| -> Result<PreparedState> {
            Ok(PreparedState {
                rho: p.density()?,
                discarded_weight: p.discarded_weight,
            })
        };
        match self {
            StateSpec::Fock(n) => Ok(PreparedState {
                rho: DensityMatrix::from_pure(&fock_state(*n, space)?)?,
                discarded_weight: 0.0,
            }),
            StateSpec::Coherent(alpha) => pure(coherent_state_with(*alpha, space, opts)?),
            StateSpec::SqueezedCoherent { alpha, zeta } => {
                pure(squeezed_coherent(*alpha, SqueezeParameter::new(*zeta)?, space)?)
            }
            StateSpec::SqueezedVacuumNonunitary(zeta) => {
                let s = squeezed_vacuum_nonunitary(*zeta, space)?;
                Ok(PreparedState {
                    rho: DensityMatrix::from_pure(&s.unit)?,
                    discarded_weight: s.discarded_weight,
                })
            }
            StateSpec::Thermal(nbar) => {
                let (rho, discarded_weight) = thermal_state(*nbar, space)?;
                Ok(PreparedState { rho, discarded_weight })
            }
            StateSpec::Mixture(parts) => {
                let mut built = Vec::with_capacity(parts.len());
                let mut discarded = 0.0;
                for (w, spec) in parts {
                    let p = spec.build_with(space, opts)?;
                    discarded += w * p.discarded_weight;
                    built.push((*w, p.rho));
                }
                Ok(PreparedState {
                    rho: DensityMatrix::mixture(&built)?,
                    discarded_weight: discarded,
                })
            }
        }
    }
}

pub(crate) fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateSpec::Fock(n) => write!(f, "fock:{n}"),
            StateSpec::Coherent(a) => write!(f, "coherent:{}", fmt_complex(*a)),
            StateSpec::SqueezedCoherent { alpha, zeta } => {
                write!(f, "squeezed:{}:{}", fmt_complex(*alpha), fmt_complex(*zeta))
            }
            StateSpec::SqueezedVacuumNonunitary(z) => write!(f, "nonunitary:{}", fmt_complex(*z)),
            StateSpec::Thermal(n) => write!(f, "thermal:{n}"),
            StateSpec::Mixture(parts) => {
                write!(f, "mix:")?;
                for (i, (w, s)) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{w}*{s}")?;
                }
                Ok(())
            }
        }
    }
}

/// Parses `1.0`, `-0.5i`, `1e-3+2.5i`, `0.3-0.2i`.
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let t = text.trim();
    let bad = || Error::Parse(format!("not a complex number: `{text}`"));
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not a leading sign or an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let parse_im = |s: &str| -> Result<f64> {
        match s {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => s.parse::<f64>().map_err(|_| bad()),
        }
    };
    match split {
        Some(k) => {
            let re = body[..k].parse::<f64>().map_err(|_| bad())?;
            let im = parse_im(&body[k..])?;
            Ok(Complex64::new(re, im))
        }
        None => Ok(Complex64::new(0.0, parse_im(body)?)),
    }
}

impl FromStr for StateSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("state spec `{s}` lacks `kind:`")))?;
        let parse_f64 = |x: &str| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("not a number: `{x}`")))
        };
        match kind {
            "fock" => rest
                .trim()
                .parse::<usize>()
                .map(StateSpec::Fock)
                .map_err(|_| Error::Parse(format!("bad Fock index `{rest}`"))),
            "coherent" => Ok(StateSpec::Coherent(parse_complex(rest)?)),
            "squeezed" => {
                let (a, z) = rest
                    .split_once(':')
                    .ok_or_else(|| Error::Parse("squeezed expects `squeezed:<alpha>:<zeta>`".into()))?;
                Ok(StateSpec::SqueezedCoherent {
                    alpha: parse_complex(a)?,
                    zeta: parse_complex(z)?,
                })
            }
            "nonunitary" => Ok(StateSpec::SqueezedVacuumNonunitary(parse_complex(rest)?)),
            "thermal" => Ok(StateSpec::Thermal(parse_f64(rest)?)),
            "mix" => {
                let mut parts = Vec::new();
                for item in rest.split(',') {
                    let (w, spec) = item
                        .split_once('*')
                        .ok_or_else(|| Error::Parse(format!("mixture item `{item}` lacks `w*`")))?;
                    let spec: StateSpec = spec.parse()?;
                    if matches!(spec, StateSpec::Mixture(_)) {
                        return Err(Error::Parse("nested mixtures are not supported".into()));
                    }
                    parts.push((parse_f64(w)?, spec));
                }
                let total: f64 = parts.iter().map(|(w, _)| w).sum();
                if parts.iter().any(|(w, _)| *w < 0.0) || (total - 1.0).abs() > 1e-9 {
                    return Err(Error::invariant(
                        "weights >= 0 and sum to 1",
                        format!("weights sum to {total}"),
                    ));
                }
                Ok(StateSpec::Mixture(parts))
            }
            other => Err(Error::Parse(format!("unknown state kind `{other}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{annihilation, creation, number};

    fn space(d: usize) -> FockSpace {
        FockSpace::new(d).unwrap()
    }

    #[test]
    fn coherent_zero_is_vacuum() {
        let s = coherent_state(ZERO, space(10)).unwrap();
        assert_eq!(s.vector, vacuum(space(10)));
    }

    #[test]
    fn coherent_mean_photon_number() {
        let alpha = Complex64::new(1.2, -0.7);
        let rho = coherent_state(alpha, space(60)).unwrap().density().unwrap();
        assert!((rho.mean_photon_number() - alpha.norm_sqr()).abs() < 1e-10);
        let n = rho.expectation(&number(space(60)));
        assert!((n.re - alpha.norm_sqr()).abs() < 1e-10);
    }

    #[test]
    fn coherent_overlap() {
        let a = coherent_state(Complex64::new(1.0, 0.0), space(60)).unwrap().vector;
        let b = coherent_state(Complex64::new(0.0, 0.5), space(60)).unwrap().vector;
        let expect = (-(Complex64::new(1.0, -0.5)).norm_sqr()).exp();
        assert!((inner(&b, &a).norm_sqr() - expect).abs() < 1e-8);
    }

    #[test]
    fn coherent_rejects_large_amplitude() {
        assert!(coherent_state(Complex64::new(3.0, 0.0), space(20)).is_err());
        let opts = StateOptions {
            coherent_limit_fraction: 1.0,
        };
        assert!(coherent_state_with(Complex64::new(3.0, 0.0), space(20), opts).is_ok());
    }

    #[test]
    fn coherent_eigen_residual_shrinks_with_dim() {
        let alpha = Complex64::new(1.5, 0.5);
        let residual = |d: usize| {
            let v = coherent_state(alpha, space(d)).unwrap().vector;
            let a = annihilation(space(d));
            (a * &v - &v * alpha).norm()
        };
        let r: Vec<f64> = [12, 16, 20, 24, 30].iter().map(|&d| residual(d)).collect();
        assert!(r.windows(2).all(|w| w[1] < w[0]), "{r:?}");
    }

    #[test]
    fn squeezed_coherent_trivial_and_parity() {
        let z0 = SqueezeParameter::new(ZERO).unwrap();
        let v = squeezed_coherent(ZERO, z0, space(10)).unwrap().vector;
        assert!((v - vacuum(space(10))).norm() < 1e-14);
        let z = SqueezeParameter::from_polar(0.5, 0.8).unwrap();
        let v = squeezed_coherent(ZERO, z, space(40)).unwrap().vector;
        for n in (1..40).step_by(2) {
            assert!(v[n].norm() < 1e-14);
        }
    }

    #[test]
    fn squeezed_coherent_norm() {
        let z = SqueezeParameter::from_polar(0.5, 0.0).unwrap();
        let p = squeezed_coherent(Complex64::new(1.0, 0.0), z, space(80)).unwrap();
        assert!(p.discarded_weight < 1e-8);
        assert!((p.vector.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn nonunitary_zero_and_bounds() {
        let s = squeezed_vacuum_nonunitary(ZERO, space(8)).unwrap();
        assert!((s.unit.clone() - vacuum(space(8))).norm() < 1e-15);
        assert!(squeezed_vacuum_nonunitary(Complex64::new(1.0, 0.0), space(8)).is_err());
        assert!(squeezed_vacuum_nonunitary(Complex64::new(0.0, -1.2), space(8)).is_err());
    }

    #[test]
    fn nonunitary_is_annihilated_and_paired() {
        let sp = space(100);
        let zeta = Complex64::new(0.4, 0.0);
        let s = squeezed_vacuum_nonunitary(zeta, sp).unwrap();
        let op = annihilation(sp) + creation(sp) * zeta;
        assert!((op * &s.paired).norm() < 1e-6);
        let minus = squeezed_vacuum_nonunitary(Complex64::new(0.0, 0.0) - Complex64::new(0.3, 0.0), sp).unwrap();
        let plus = squeezed_vacuum_nonunitary(Complex64::new(0.3, 0.0), sp).unwrap();
        assert!((inner(&minus.paired, &plus.paired) - Complex64::new(1.0, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn nonunitary_matches_unitary_squeeze() {
        let sp = space(80);
        let zeta = Complex64::from_polar(0.5, 1.1);
        let s = squeezed_vacuum_nonunitary(zeta, sp).unwrap();
        let r = zeta.norm().atanh();
        let zp = SqueezeParameter::from_polar(r, zeta.arg()).unwrap();
        let u = squeeze_direct(zp, sp) * vacuum(sp);
        assert!((s.unit - u).norm() < 1e-6);
    }

    #[test]
    fn thermal_basics() {
        let (rho, discarded) = thermal_state(0.0, space(6)).unwrap();
        assert!((rho.matrix()[(0, 0)].re - 1.0).abs() < 1e-15);
        assert_eq!(discarded, 0.0);
        let (rho, _) = thermal_state(0.5, space(60)).unwrap();
        assert!((rho.trace().re - 1.0).abs() < 1e-14);
        assert!((rho.purity() - 1.0 / 2.0).abs() < 1e-4);
        assert!(thermal_state(-0.1, space(6)).is_err());
    }

    #[test]
    fn parse_complex_forms() {
        let cases = [
            ("1.0", Complex64::new(1.0, 0.0)),
            ("1.0+0.5i", Complex64::new(1.0, 0.5)),
            ("-0.3-0.2i", Complex64::new(-0.3, -0.2)),
            ("0.5i", Complex64::new(0.0, 0.5)),
            ("-i", Complex64::new(0.0, -1.0)),
            ("1e-3+2e-1i", Complex64::new(1e-3, 0.2)),
            ("2.5e+1-1.5E-2i", Complex64::new(25.0, -0.015)),
        ];
        for (s, z) in cases {
            assert_eq!(parse_complex(s).unwrap(), z, "{s}");
        }
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("").is_err());
    }

    #[test]
    fn spec_text_forms() {
        let s: StateSpec = "coherent:1.0+0.5i".parse().unwrap();
        assert_eq!(s, StateSpec::Coherent(Complex64::new(1.0, 0.5)));
        let s: StateSpec = "thermal:0.5".parse().unwrap();
        assert_eq!(s, StateSpec::Thermal(0.5));
        let s: StateSpec = "mix:0.5*fock:0,0.5*coherent:2.0".parse().unwrap();
        assert_eq!(
            s,
            StateSpec::Mixture(vec![
                (0.5, StateSpec::Fock(0)),
                (0.5, StateSpec::Coherent(Complex64::new(2.0, 0.0)))
            ])
        );
        assert_eq!(s.to_string().parse::<StateSpec>().unwrap(), s);
        assert!("mix:0.7*fock:0,0.5*fock:1".parse::<StateSpec>().is_err());
        assert!("bogus:1".parse::<StateSpec>().is_err());
    }

    #[test]
    fn every_constructor_yields_valid_density() {
        let sp = space(40);
        let specs = [
            "fock:3",
            "coherent:1.0-0.5i",
            "squeezed:0.5:0.3+0.2i",
            "nonunitary:0.4",
            "thermal:0.7",
            "mix:0.25*fock:1,0.75*thermal:0.3",
        ];
        for text in specs {
            let p = text.parse::<StateSpec>().unwrap().build(sp).unwrap();
            let rho = &p.rho;
            assert!(rho.hermiticity_residual() < 1e-10, "{text}");
            assert!((rho.trace().re - 1.0).abs() < 1e-10, "{text}");
            assert!(rho.min_eigenvalue() > -1e-10, "{text}");
        }
    }
}
