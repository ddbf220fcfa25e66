//! Parametrized initial states: two pure three-qubit families mixed with
//! white noise.
//!
//! Both families interpolate between product states and maximally correlated
//! superpositions; the mixing weight `r` slides between the maximally mixed
//! state (`r = 0`) and the pure state (`r = 1`), giving purity
//! `r^2 + (1 - r^2)/8`.

use crate::error::{Error, Result};
use crate::qstate::DensityMatrix8;
use crate::C64;

const NORM_TOL: f64 = 1e-12;

fn check_unit_interval(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() || !(0.0..=1.0).contains(&v) {
        return Err(Error::InvalidInput(format!("{name} = {v} outside [0, 1]")));
    }
    Ok(())
}

fn check_finite(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() {
        return Err(Error::InvalidInput(format!("{name} = {v} is not finite")));
    }
    Ok(())
}

fn mix_with_white_noise(pure: &DensityMatrix8, r: f64) -> DensityMatrix8 {
    let mut m = *pure.entries();
    for (i, row) in m.iter_mut().enumerate() {
        for (j, z) in row.iter_mut().enumerate() {
            *z *= r;
            if i == j {
                *z += C64::new((1.0 - r) / 8.0, 0.0);
            }
        }
    }
    DensityMatrix8::from_raw(m)
}

/// Superposition of the all-ground and all-excited levels,
/// `alpha |000> + beta_abs e^{i delta} |111>`, mixed with white noise of
/// weight `1 - r`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GhzSpec {
    pub alpha: f64,
    pub beta_abs: f64,
    pub delta: f64,
    pub r: f64,
}

impl GhzSpec {
    pub fn new(alpha: f64, beta_abs: f64, delta: f64, r: f64) -> Result<Self> {
        let spec = GhzSpec {
            alpha,
            beta_abs,
            delta,
            r,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Amplitudes from the ground-level weight: `alpha = sqrt(alpha_sq)`,
    /// `beta_abs = sqrt(1 - alpha_sq)`.
    pub fn with_alpha_sq(alpha_sq: f64, delta: f64, r: f64) -> Result<Self> {
        check_unit_interval("alpha_sq", alpha_sq)?;
        GhzSpec::new(alpha_sq.sqrt(), (1.0 - alpha_sq).sqrt(), delta, r)
    }

    pub fn validate(&self) -> Result<()> {
        check_finite("delta", self.delta)?;
        check_unit_interval("r", self.r)?;
        for (name, v) in [("alpha", self.alpha), ("beta_abs", self.beta_abs)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidInput(format!(
                    "{name} = {v} must be a nonnegative amplitude"
                )));
            }
        }
        let norm = self.alpha * self.alpha + self.beta_abs * self.beta_abs;
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidInput(format!(
                "alpha^2 + beta^2 = {norm} is not 1"
            )));
        }
        Ok(())
    }
}

/// Builds the mixed state of a [`GhzSpec`].
pub fn make_ghz(spec: &GhzSpec) -> Result<DensityMatrix8> {
    spec.validate()?;
    let mut amps = [C64::new(0.0, 0.0); 8];
    amps[7] = C64::new(spec.alpha, 0.0);
    amps[0] = C64::from_polar(spec.beta_abs, spec.delta);
    let pure = DensityMatrix8::pure(&amps)?;
    Ok(mix_with_white_noise(&pure, spec.r))
}

/// Single-excitation superposition
/// `alpha |001> + beta_abs e^{i delta} |010> + eta_abs e^{i epsilon} |100>`,
/// mixed with white noise of weight `1 - r`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WSpec {
    pub alpha: f64,
    pub beta_abs: f64,
    pub eta_abs: f64,
    pub delta: f64,
    pub epsilon: f64,
    pub r: f64,
}

impl WSpec {
    pub fn new(
        alpha: f64,
        beta_abs: f64,
        eta_abs: f64,
        delta: f64,
        epsilon: f64,
        r: f64,
    ) -> Result<Self> {
        let spec = WSpec {
            alpha,
            beta_abs,
            eta_abs,
            delta,
            epsilon,
            r,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Puts weight `alpha_sq` on `|001>` and splits the remainder equally
    /// between the other two single-excitation levels.
    pub fn with_alpha_sq(alpha_sq: f64, delta: f64, epsilon: f64, r: f64) -> Result<Self> {
        check_unit_interval("alpha_sq", alpha_sq)?;
        let rest = ((1.0 - alpha_sq) / 2.0).sqrt();
        WSpec::new(alpha_sq.sqrt(), rest, rest, delta, epsilon, r)
    }

    pub fn validate(&self) -> Result<()> {
        check_finite("delta", self.delta)?;
        check_finite("epsilon", self.epsilon)?;
        check_unit_interval("r", self.r)?;
        for (name, v) in [
            ("alpha", self.alpha),
            ("beta_abs", self.beta_abs),
            ("eta_abs", self.eta_abs),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidInput(format!(
                    "{name} = {v} must be a nonnegative amplitude"
                )));
            }
        }
        let norm =
            self.alpha * self.alpha + self.beta_abs * self.beta_abs + self.eta_abs * self.eta_abs;
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidInput(format!(
                "alpha^2 + beta^2 + eta^2 = {norm} is not 1"
            )));
        }
        Ok(())
    }
}

/// Builds the mixed state of a [`WSpec`].
pub fn make_w(spec: &WSpec) -> Result<DensityMatrix8> {
    spec.validate()?;
    let mut amps = [C64::new(0.0, 0.0); 8];
    amps[6] = C64::new(spec.alpha, 0.0);
    amps[5] = C64::from_polar(spec.beta_abs, spec.delta);
    amps[3] = C64::from_polar(spec.eta_abs, spec.epsilon);
    let pure = DensityMatrix8::pure(&amps)?;
    Ok(mix_with_white_noise(&pure, spec.r))
}
