//! Exact single-excitation dynamics of qubits coupled to independent empty
//! reservoirs with Lorentzian coupling spectra.
//!
//! Each qubit's excited-state population decays by a common factor `P(t)`
//! with memory: `P` is the square of an amplitude obeying
//! `g'(t) = -(gamma0 lambda / 2) * int_0^t exp(-lambda (t - s)) g(s) ds`,
//! whose closed form oscillates (and repeatedly vanishes) for
//! `lambda < 2 gamma0`, decays monotonically for `lambda > 2 gamma0`, and
//! sits on a polynomial-times-exponential boundary in between. The same
//! factor drives every matrix element of the product state, which is what
//! [`evolve_three`] implements entry by entry.

use crate::error::{Error, Result};
use crate::linalg::{herm_psd_with_shift, min_eig_herm};
use crate::qstate::{bit, kron3, DensityMatrix8};
use crate::C64;

/// Reservoir coupling strength `gamma0` and spectral width `lambda`, both
/// strictly positive. Their ratio decides the dynamical regime: memory
/// effects (oscillations, population revivals) require `lambda < 2 gamma0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReservoirParams {
    gamma0: f64,
    lambda: f64,
}

impl ReservoirParams {
    pub fn new(gamma0: f64, lambda: f64) -> Result<Self> {
        if !gamma0.is_finite() || gamma0 <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "gamma0 must be positive and finite, got {gamma0}"
            )));
        }
        if !lambda.is_finite() || lambda <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "lambda must be positive and finite, got {lambda}"
            )));
        }
        Ok(ReservoirParams { gamma0, lambda })
    }

    /// Sets `gamma0 = 1` so that times are measured in units of `1/gamma0`.
    pub fn from_ratio(lambda_over_gamma0: f64) -> Result<Self> {
        ReservoirParams::new(1.0, lambda_over_gamma0)
    }

    pub fn gamma0(&self) -> f64 {
        self.gamma0
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn ratio(&self) -> f64 {
        self.lambda / self.gamma0
    }

    /// `lambda (2 gamma0 - lambda)`, the squared oscillation frequency;
    /// positive in the oscillatory regime.
    fn disc(&self) -> f64 {
        self.lambda * (2.0 * self.gamma0 - self.lambda)
    }
}

/// Excited-state survival probability of one qubit at a fixed time: the
/// squared magnitude of the surviving excitation amplitude, a number in
/// [0, 1]. Values outside by more than 1e-12 are rejected; closer overshoots
/// are clamped.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct SurvivalAmplitude(f64);

impl SurvivalAmplitude {
    pub fn new(p: f64) -> Result<Self> {
        if !p.is_finite() || !(-1e-12..=1.0 + 1e-12).contains(&p) {
            return Err(Error::InvalidInput(format!(
                "survival probability {p} outside [0, 1]"
            )));
        }
        Ok(SurvivalAmplitude(p.clamp(0.0, 1.0)))
    }

    /// The probability itself.
    pub fn value(self) -> f64 {
        self.0
    }

    /// Its positive square root, the factor multiplying single-excitation
    /// coherences.
    pub fn root(self) -> f64 {
        self.0.sqrt()
    }
}

/// Closed-form survival probability at time `t >= 0`.
pub fn p_t(params: &ReservoirParams, t: f64) -> Result<SurvivalAmplitude> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::InvalidInput(format!("time {t} must be >= 0")));
    }
    let l = params.lambda;
    let disc = params.disc();
    let amp = if disc > 0.0 {
        let d = disc.sqrt();
        let half = d * t / 2.0;
        (-l * t / 2.0).exp() * (half.cos() + (l / d) * half.sin())
    } else if disc < 0.0 {
        let dh = (-disc).sqrt();
        let x = dh * t / 2.0;
        if x > 300.0 {
            // cosh and sinh collapse to exp(x)/2 far out; folding the
            // exponentials together avoids overflow (dh < lambda).
            ((dh - l) * t / 2.0).exp() * (1.0 + l / dh) / 2.0
        } else {
            (-l * t / 2.0).exp() * (x.cosh() + (l / dh) * x.sinh())
        }
    } else {
        (-l * t / 2.0).exp() * (1.0 + l * t / 2.0)
    };
    SurvivalAmplitude::new((amp * amp).min(1.0))
}

/// The first `n_max` times where the survival probability vanishes exactly:
/// `t_n = 2 (n pi - atan(d / lambda)) / d` with `d = sqrt(disc)`. Outside
/// the oscillatory regime the probability never reaches zero.
pub fn p_t_zeros(params: &ReservoirParams, n_max: usize) -> Result<Vec<f64>> {
    let disc = params.disc();
    if disc <= 0.0 {
        return Err(Error::NoZeros);
    }
    let d = disc.sqrt();
    let phase = (d / params.lambda).atan();
    Ok((1..=n_max)
        .map(|n| 2.0 * (n as f64 * std::f64::consts::PI - phase) / d)
        .collect())
}

/// Marches the memory-kernel amplitude equation with an implicit trapezoid
/// rule and returns `(t, P)` samples at every step up to `t_max`.
///
/// The running convolution integral is updated in O(1) per step by peeling
/// one factor of `exp(-lambda dt)` off the exponential kernel, so the cost
/// is linear in the number of steps. Steps larger than `1e-2 / gamma0` are
/// refused as too coarse for a trustworthy cross-check.
pub fn p_t_numeric(params: &ReservoirParams, t_max: f64, dt: f64) -> Result<Vec<(f64, f64)>> {
    if !t_max.is_finite() || t_max <= 0.0 {
        return Err(Error::InvalidInput(format!("t_max {t_max} must be > 0")));
    }
    if !dt.is_finite() || dt <= 0.0 {
        return Err(Error::InvalidInput(format!("dt {dt} must be > 0")));
    }
    if dt > 1e-2 / params.gamma0 {
        return Err(Error::Accuracy(format!(
            "dt = {dt} exceeds 1e-2 / gamma0 = {}",
            1e-2 / params.gamma0
        )));
    }
    let n = (t_max / dt).ceil() as usize;
    let g0l = params.gamma0 * params.lambda;
    let decay = (-params.lambda * dt).exp();
    let stiff = g0l * dt * dt / 8.0;
    let mut samples = Vec::with_capacity(n + 1);
    let mut g = 1.0_f64;
    // conv = int_0^t exp(-lambda (t - s)) g(s) ds, trapezoid-accumulated.
    let mut conv = 0.0_f64;
    samples.push((0.0, 1.0));
    for step in 1..=n {
        let g_next =
            (g * (1.0 - stiff * decay) - (g0l * dt / 4.0) * (1.0 + decay) * conv) / (1.0 + stiff);
        conv = decay * (conv + dt / 2.0 * g) + dt / 2.0 * g_next;
        g = g_next;
        samples.push((step as f64 * dt, g * g));
    }
    Ok(samples)
}

/// One-qubit decay map in the excited-first basis: the excited population
/// keeps fraction `P`, coherences scale by `sqrt(P)`, and the lost
/// population lands in the ground state.
pub fn evolve_single(rho: &[[C64; 2]; 2], p: SurvivalAmplitude) -> [[C64; 2]; 2] {
    let pv = p.value();
    let s = p.root();
    [
        [pv * rho[0][0], s * rho[0][1]],
        [s * rho[1][0], rho[1][1] + (1.0 - pv) * rho[0][0]],
    ]
}

/// Entry-wise three-qubit image of the independent-reservoir decay at a
/// common survival probability `p`.
///
/// Each entry (a, b) factorizes over qubit slots: a slot excited on both
/// sides contributes `P`, excited on one side `sqrt(P)`, and a slot in the
/// ground state on both sides additionally absorbs `(1 - P)` times the
/// matching entry with that slot excited — summed over every subset of such
/// slots. The output must remain a state; an eigenvalue below -1e-9 is
/// reported as an internal error.
pub fn evolve_three(rho: &DensityMatrix8, p: SurvivalAmplitude) -> Result<DensityMatrix8> {
    let pv = p.value();
    let s = p.root();
    let q = 1.0 - pv;
    let m = rho.entries();
    let mut out = [[C64::new(0.0, 0.0); 8]; 8];
    for a in 0..8 {
        for b in 0..8 {
            let mut factor = 1.0;
            let mut ground = [0usize; 3];
            let mut n_ground = 0;
            for slot in 0..3 {
                match (bit(a, slot), bit(b, slot)) {
                    (0, 0) => factor *= pv,
                    (1, 1) => {
                        ground[n_ground] = slot;
                        n_ground += 1;
                    }
                    _ => factor *= s,
                }
            }
            let mut acc = C64::new(0.0, 0.0);
            for mask in 0..(1usize << n_ground) {
                let mut src_a = a;
                let mut src_b = b;
                let mut weight = 1.0;
                for (i, &slot) in ground[..n_ground].iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        let sh = 2 - slot;
                        src_a &= !(1 << sh);
                        src_b &= !(1 << sh);
                        weight *= q;
                    }
                }
                acc += weight * m[src_a][src_b];
            }
            out[a][b] = factor * acc;
        }
    }
    let evolved = DensityMatrix8::from_raw(out);
    let mut gershgorin = f64::INFINITY;
    for i in 0..8 {
        let mut radius = 0.0;
        for j in 0..8 {
            if i != j {
                radius += out[i][j].norm();
            }
        }
        gershgorin = gershgorin.min(out[i][i].re - radius);
    }
    if gershgorin < -1e-9 && !herm_psd_with_shift(evolved.entries(), 1e-9) {
        // Only genuinely suspect outputs pay for the exact eigensolve.
        let min = min_eig_herm(evolved.entries())?;
        if min < -1e-9 {
            return Err(Error::InternalConsistency(format!(
                "evolved matrix has eigenvalue {min:.3e}"
            )));
        }
    }
    Ok(evolved)
}

/// Independent route to the same channel: the tensor product of one-qubit
/// operator pairs `K0 = diag(sqrt(P), 1)`, `K1 = sqrt(1-P) |g><e|`, summed
/// over all eight combinations as `sum K rho K^dag`.
pub fn kraus_oracle(rho: &DensityMatrix8, p: SurvivalAmplitude) -> DensityMatrix8 {
    let s = p.root();
    let q = (1.0 - p.value()).max(0.0).sqrt();
    let zero = C64::new(0.0, 0.0);
    let k0 = [[C64::new(s, 0.0), zero], [zero, C64::new(1.0, 0.0)]];
    let k1 = [[zero, zero], [C64::new(q, 0.0), zero]];
    let choices = [k0, k1];
    let mut acc = [[zero; 8]; 8];
    for sel in 0..8usize {
        let k = kron3(
            &choices[(sel >> 2) & 1],
            &choices[(sel >> 1) & 1],
            &choices[sel & 1],
        );
        let krho = crate::qstate::matmul8(&k, rho.entries());
        for i in 0..8 {
            for j in 0..8 {
                let mut v = zero;
                for x in 0..8 {
                    v += krho[i][x] * k[j][x].conj();
                }
                acc[i][j] += v;
            }
        }
    }
    DensityMatrix8::from_raw(acc)
}
