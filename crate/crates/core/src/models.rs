//! Pareto-type families, their second-order (Hall) constants, censoring
//! schemes, and reproducible sampling of censored data.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::rng::UniformStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Burr,
    Frechet,
    ExactPareto,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Burr => "burr",
            Family::Frechet => "frechet",
            Family::ExactPareto => "pareto",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "burr" => Ok(Family::Burr),
            "frechet" | "fréchet" => Ok(Family::Frechet),
            "pareto" | "exact-pareto" | "exactpareto" => Ok(Family::ExactPareto),
            other => Err(Error::domain(format!("unknown family {other:?}"))),
        }
    }
}

/// A heavy-tailed distribution with extreme value index `gamma`.
///
/// * Burr(ζ, γ): survival `(1 + x^{1/ζ})^{-ζ/γ}` for `x ≥ 0`.
/// * Fréchet(γ): survival `1 - exp(-x^{-1/γ})` for `x > 0` (1 at `x = 0`).
/// * ExactPareto(γ): survival `min(1, x^{-1/γ})`, no second-order term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParetoTypeModel {
    family: Family,
    gamma: f64,
    zeta: f64,
}

impl ParetoTypeModel {
    pub fn burr(zeta: f64, gamma: f64) -> Result<Self> {
        check_positive("gamma", gamma)?;
        check_positive("zeta", zeta)?;
        Ok(Self {
            family: Family::Burr,
            gamma,
            zeta,
        })
    }

    pub fn frechet(gamma: f64) -> Result<Self> {
        check_positive("gamma", gamma)?;
        Ok(Self {
            family: Family::Frechet,
            gamma,
            zeta: 1.0,
        })
    }

    pub fn exact_pareto(gamma: f64) -> Result<Self> {
        check_positive("gamma", gamma)?;
        Ok(Self {
            family: Family::ExactPareto,
            gamma,
            zeta: 1.0,
        })
    }

    /// Builds a model from a family tag; `zeta` is only read for Burr.
    pub fn new(family: Family, gamma: f64, zeta: f64) -> Result<Self> {
        match family {
            Family::Burr => Self::burr(zeta, gamma),
            Family::Frechet => Self::frechet(gamma),
            Family::ExactPareto => Self::exact_pareto(gamma),
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    pub fn survival(&self, x: f64) -> Result<f64> {
        if x.is_nan() || x < 0.0 {
            return Err(Error::domain(format!("survival needs x >= 0, got {x}")));
        }
        let g = self.gamma;
        let s = match self.family {
            Family::Burr => {
                if x == 0.0 {
                    1.0
                } else {
                    let z = self.zeta;
                    (-(z / g) * x.powf(1.0 / z).ln_1p()).exp()
                }
            }
            Family::Frechet => {
                if x == 0.0 {
                    1.0
                } else {
                    -(-x.powf(-1.0 / g)).exp_m1()
                }
            }
            Family::ExactPareto => {
                if x <= 1.0 {
                    1.0
                } else {
                    x.powf(-1.0 / g)
                }
            }
        };
        Ok(s)
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        Ok(1.0 - self.survival(x)?)
    }

    /// Inverse of the cdf on (0, 1).
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::domain(format!("quantile needs u in (0,1), got {u}")));
        }
        let g = self.gamma;
        let x = match self.family {
            // (1-u)^{-γ/ζ} - 1, computed without cancellation for small u
            Family::Burr => {
                let z = self.zeta;
                (-(g / z) * (-u).ln_1p()).exp_m1().powf(z)
            }
            Family::Frechet => (-u.ln()).powf(-g),
            Family::ExactPareto => (-g * (-u).ln_1p()).exp(),
        };
        Ok(x)
    }

    /// Second-order constants `(C, D, β)` in
    /// `S(x) = C x^{-1/γ} (1 + D x^{-β} (1 + o(1)))`.
    pub fn hall_constants(&self) -> HallConstants {
        let (c, d, beta) = match self.family {
            Family::Burr => (1.0, -self.zeta / self.gamma, 1.0 / self.zeta),
            Family::Frechet => (1.0, -0.5, 1.0 / self.gamma),
            Family::ExactPareto => (1.0, 0.0, f64::INFINITY),
        };
        HallConstants::new(self.gamma, c, d, beta)
    }

    /// Total order used to assign random substreams; see [`sample_censored`].
    fn stream_key(&self) -> (Family, u64, u64) {
        (self.family, self.gamma.to_bits(), self.zeta.to_bits())
    }
}

impl fmt::Display for ParetoTypeModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Burr => write!(f, "burr(zeta={}, gamma={})", self.zeta, self.gamma),
            _ => write!(f, "{}(gamma={})", self.family, self.gamma),
        }
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be positive, got {v}")))
    }
}

/// Hall-class second-order constants of one distribution tail.
///
/// `beta = +inf` (and `tau = -inf`) marks a tail with no second-order term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HallConstants {
    pub gamma: f64,
    pub c: f64,
    pub d: f64,
    pub beta: f64,
    pub tau: f64,
}

impl HallConstants {
    pub fn new(gamma: f64, c: f64, d: f64, beta: f64) -> Self {
        Self {
            gamma,
            c,
            d,
            beta,
            tau: -beta * gamma,
        }
    }

    pub fn has_second_order(&self) -> bool {
        self.beta.is_finite() && self.d != 0.0
    }
}

/// The variable of interest `X ~ f` censored by an independent `Y ~ g`.
///
/// `g = None` is the uncensored mode: `Y` is never drawn and every
/// observation is uncensored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CensoringScheme {
    pub f: ParetoTypeModel,
    pub g: Option<ParetoTypeModel>,
}

impl CensoringScheme {
    pub fn new(f: ParetoTypeModel, g: ParetoTypeModel) -> Self {
        Self { f, g: Some(g) }
    }

    pub fn uncensored(f: ParetoTypeModel) -> Self {
        Self { f, g: None }
    }

    pub fn gamma1(&self) -> f64 {
        self.f.gamma
    }

    /// Tail index of `Z = min(X, Y)`: `γ₁γ₂/(γ₁+γ₂)`.
    pub fn gamma(&self) -> f64 {
        match self.g {
            Some(g) => self.f.gamma * g.gamma / (self.f.gamma + g.gamma),
            None => self.f.gamma,
        }
    }

    /// Limiting proportion of uncensored observations in the tail.
    pub fn p(&self) -> f64 {
        match self.g {
            Some(g) => g.gamma / (self.f.gamma + g.gamma),
            None => 1.0,
        }
    }

    /// Survival of `Z`; the product of the two survivals by independence.
    pub fn survival_h(&self, x: f64) -> Result<f64> {
        let sf = self.f.survival(x)?;
        match self.g {
            Some(g) => Ok(sf * g.survival(x)?),
            None => Ok(sf),
        }
    }

    pub fn composite_tail(&self) -> CompositeTail {
        let hf = self.f.hall_constants();
        let Some(g) = self.g else {
            return CompositeTail {
                gamma: hf.gamma,
                c: hf.c,
                beta_star: hf.beta,
                d_star: hf.d,
                p: 1.0,
            };
        };
        let hg = g.hall_constants();
        let d_star = if hf.beta < hg.beta {
            hf.d
        } else if hf.beta > hg.beta {
            hg.d
        } else {
            hf.d + hg.d
        };
        CompositeTail {
            gamma: self.gamma(),
            c: hf.c * hg.c,
            beta_star: hf.beta.min(hg.beta),
            d_star,
            p: self.p(),
        }
    }
}

/// Second-order description of the tail of `Z`:
/// `S_H(z) = C z^{-1/γ} (1 + D* z^{-β*} (1 + o(1)))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompositeTail {
    pub gamma: f64,
    pub c: f64,
    pub beta_star: f64,
    pub d_star: f64,
    pub p: f64,
}

/// One observed pair `(z, δ)`; `delta = true` means `X` was observed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation {
    pub z: f64,
    pub delta: bool,
}

/// Observed censored pairs in arrival order.
#[derive(Debug, Clone, PartialEq)]
pub struct CensoredSample {
    records: Vec<Observation>,
}

impl CensoredSample {
    pub fn new(records: Vec<Observation>) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::EmptySample);
        }
        if records.len() < 2 {
            return Err(Error::SampleTooSmall { got: records.len() });
        }
        if let Some((i, r)) = records
            .iter()
            .enumerate()
            .find(|(_, r)| !(r.z.is_finite() && r.z > 0.0))
        {
            return Err(Error::domain(format!(
                "observation {} has non-positive or non-finite z = {}",
                i + 1,
                r.z
            )));
        }
        Ok(Self { records })
    }

    pub fn from_pairs(z: &[f64], delta: &[bool]) -> Result<Self> {
        if z.len() != delta.len() {
            return Err(Error::domain("z and delta lengths differ"));
        }
        Self::new(
            z.iter()
                .zip(delta)
                .map(|(&z, &delta)| Observation { z, delta })
                .collect(),
        )
    }

    pub fn records(&self) -> &[Observation] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn uncensored_count(&self) -> usize {
        self.records.iter().filter(|r| r.delta).count()
    }
}

/// Draws `n` censored observations from `scheme`.
///
/// `X` and `Y` come from two independent substreams of the seed. Streams are
/// assigned by the models' own parameters rather than by role, so swapping
/// `f` and `g` (with distinct models) swaps the drawn `X` and `Y` values:
/// `z` is unchanged and `δ` flips except at exact ties.
pub fn sample_censored(scheme: &CensoringScheme, n: usize, seed: u64) -> Result<CensoredSample> {
    if n < 2 {
        return Err(Error::SampleTooSmall { got: n });
    }
    let records = match scheme.g {
        None => {
            let mut xs = UniformStream::new(seed, 0);
            (0..n)
                .map(|_| {
                    let z = scheme.f.quantile(xs.next_open01())?;
                    Ok(Observation { z, delta: true })
                })
                .collect::<Result<Vec<_>>>()?
        }
        Some(g) => {
            let (sx, sy) = if scheme.f.stream_key() <= g.stream_key() {
                (0, 1)
            } else {
                (1, 0)
            };
            let mut xs = UniformStream::new(seed, sx);
            let mut ys = UniformStream::new(seed, sy);
            (0..n)
                .map(|_| {
                    let x = scheme.f.quantile(xs.next_open01())?;
                    let y = g.quantile(ys.next_open01())?;
                    Ok(Observation {
                        z: x.min(y),
                        delta: x <= y,
                    })
                })
                .collect::<Result<Vec<_>>>()?
        }
    };
    CensoredSample::new(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn burr(z: f64, g: f64) -> ParetoTypeModel {
        ParetoTypeModel::burr(z, g).unwrap()
    }

    #[test]
    fn survival_closed_forms() {
        assert!((burr(1.0, 0.5).survival(1.0).unwrap() - 0.25).abs() < 1e-15);
        let fr = ParetoTypeModel::frechet(1.0).unwrap();
        assert!((fr.survival(1.0).unwrap() - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
        assert_eq!(burr(3.0, 0.7).survival(0.0).unwrap(), 1.0);
        assert_eq!(fr.survival(0.0).unwrap(), 1.0);
        assert!(burr(1.0, 1.0).survival(-1.0).is_err());
    }

    #[test]
    fn quantile_examples() {
        assert!((burr(1.0, 0.5).quantile(0.75).unwrap() - 1.0).abs() < 1e-12);
        let fr = ParetoTypeModel::frechet(1.0).unwrap();
        assert!((fr.quantile((-1.0f64).exp()).unwrap() - 1.0).abs() < 1e-12);
        assert!(fr.quantile(0.0).is_err());
        assert!(fr.quantile(1.0).is_err());
    }

    #[test]
    fn hall_constants_examples() {
        let h = burr(1.0, 0.5).hall_constants();
        assert_eq!((h.c, h.d, h.beta, h.tau), (1.0, -2.0, 1.0, -0.5));
        let h = ParetoTypeModel::frechet(1.0).unwrap().hall_constants();
        assert_eq!((h.c, h.d, h.beta), (1.0, -0.5, 1.0));
        let h = ParetoTypeModel::exact_pareto(2.0).unwrap().hall_constants();
        assert_eq!(h.d, 0.0);
        assert!(!h.has_second_order());
    }

    #[test]
    fn composite_examples() {
        let s = CensoringScheme::new(burr(1.0, 0.5), burr(1.0, 1.0));
        assert!((s.gamma() - 1.0 / 3.0).abs() < 1e-15);
        assert!((s.p() - 2.0 / 3.0).abs() < 1e-15);
        let s = CensoringScheme::new(burr(1.0, 0.8), ParetoTypeModel::frechet(0.8).unwrap());
        assert_eq!(s.p(), 0.5);

        let s = CensoringScheme::new(burr(1.0, 0.5), ParetoTypeModel::frechet(1.0).unwrap());
        let ct = s.composite_tail();
        assert_eq!(ct.beta_star, 1.0);
        assert_eq!(ct.d_star, -2.5);
        assert_eq!(ct.c, 1.0);
    }

    #[test]
    fn composite_indicator_cases() {
        // β₁ = 1/ζ₁ = 2 > β₂ = 1 picks D₂
        let s = CensoringScheme::new(burr(0.5, 1.0), burr(1.0, 1.0));
        let ct = s.composite_tail();
        assert_eq!(ct.beta_star, 1.0);
        assert_eq!(ct.d_star, -1.0);
        // β₁ = 1 < β₂ = 2 picks D₁
        let s = CensoringScheme::new(burr(1.0, 1.0), burr(0.5, 1.0));
        assert_eq!(s.composite_tail().d_star, -1.0);
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(ParetoTypeModel::burr(1.0, 0.0).is_err());
        assert!(ParetoTypeModel::burr(-1.0, 1.0).is_err());
        assert!(ParetoTypeModel::frechet(f64::NAN).is_err());
        let err = ParetoTypeModel::exact_pareto(0.0).unwrap_err();
        assert!(err.to_string().contains("gamma must be positive"));
    }

    #[test]
    fn sample_rejects_tiny_n() {
        let s = CensoringScheme::uncensored(burr(1.0, 0.5));
        assert!(sample_censored(&s, 1, 0).is_err());
    }
}
