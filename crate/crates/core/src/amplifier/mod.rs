//! Linear amplifier channel acting on Husimi functions.
//!
//! A field mode coupled to `N₁` excited and `N₀` ground-state two-level atoms has gain
//! `G = e^{2(N₁−N₀)γt}` and added noise `m = N₀/(N₁−N₀) (G² − 1)`. The output Husimi function is
//! `Q(α, t) = (1/(πm)) ∫ d²β Q(β) e^{−|α − βG|²/m}`, which collapses to `Q(α/G)/G²` at `m = 0`.

mod evolve;
mod moments;
mod ordering;

pub use evolve::{evolve_husimi, evolve_husimi_pure_gain, output_grid, EvolveOptions};
pub use moments::{moment_integral, moment_quadrature, radial_integral, MomentQuery};
pub use ordering::{amplified_operator_husimi, Ordering, OrderedPolynomial, DEFAULT_MAX_ORDER};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmplifierChannel {
    pub gamma: f64,
    pub n0: f64,
    pub n1: f64,
    pub t: f64,
}

impl AmplifierChannel {
    pub fn new(gamma: f64, n0: f64, n1: f64, t: f64) -> Result<Self> {
        let ch = AmplifierChannel { gamma, n0, n1, t };
        ch.validate()?;
        Ok(ch)
    }

    pub fn validate(&self) -> Result<()> {
        let all_finite = [self.gamma, self.n0, self.n1, self.t].iter().all(|x| x.is_finite());
        if !all_finite {
            return Err(Error::InvalidParameter(format!("non-finite channel parameter in {self}")));
        }
        if !(self.gamma > 0.0) {
            return Err(Error::invariant("gamma > 0", format!("gamma = {}", self.gamma)));
        }
        if !(self.n0 >= 0.0) {
            return Err(Error::invariant("n0 >= 0", format!("n0 = {}", self.n0)));
        }
        if !(self.n1 > 0.0) {
            return Err(Error::invariant("n1 > 0", format!("n1 = {}", self.n1)));
        }
        if !(self.n0 < self.n1) {
            return Err(Error::invariant("n0 < n1", format!("n0 = {}, n1 = {}", self.n0, self.n1)));
        }
        if !(self.t >= 0.0) {
            return Err(Error::invariant("t >= 0", format!("t = {}", self.t)));
        }
        Ok(())
    }

    pub fn gain(&self) -> f64 {
        (2.0 * (self.n1 - self.n0) * self.gamma * self.t).exp()
    }

    pub fn noise(&self) -> f64 {
        let g = self.gain();
        self.n0 / (self.n1 - self.n0) * (g * g - 1.0)
    }
}

/// `(G, m)` of a channel.
pub fn channel_params(ch: &AmplifierChannel) -> Result<(f64, f64)> {
    ch.validate()?;
    let (g, m) = (ch.gain(), ch.noise());
    if !g.is_finite() || !m.is_finite() {
        return Err(Error::Overflow(format!("gain overflows for {ch}")));
    }
    Ok((g, m))
}

impl fmt::Display for AmplifierChannel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gamma={},n0={},n1={},t={}", self.gamma, self.n0, self.n1, self.t)
    }
}

/// Parses `gamma=0.5,n0=1,n1=2,t=1`; all four keys are required, in any order.
impl FromStr for AmplifierChannel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (mut gamma, mut n0, mut n1, mut t) = (None, None, None, None);
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("channel field `{part}` is not key=value")))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("channel value `{value}` is not a number")))?;
            let slot = match key.trim() {
                "gamma" => &mut gamma,
                "n0" => &mut n0,
                "n1" => &mut n1,
                "t" => &mut t,
                other => return Err(Error::Parse(format!("unknown channel key `{other}`"))),
            };
            *slot = Some(value);
        }
        let need = |v: Option<f64>, k: &str| v.ok_or_else(|| Error::Parse(format!("channel is missing `{k}`")));
        AmplifierChannel::new(need(gamma, "gamma")?, need(n0, "n0")?, need(n1, "n1")?, need(t, "t")?)
    }
}
