//! Analytic SU(2) cycle map.
//!
//! One drive period acts on the two instantaneous eigenstates as
//!
//! ```text
//! 𝒰 = [[ c·e^{-iΦ},        -s·e^{-i(Ω-Φ)} ],
//!      [ s·e^{ i(Ω-Φ)},     c·e^{ iΦ}     ]],   c = cos(Θ/2), s = sin(Θ/2)
//! ```
//!
//! Repeated application moves the state around a circle on the Bloch sphere;
//! the long-run excited population is the orbit average `½ sin²α`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::su2::{Matrix2, State2, C64};

/// Below this `1 - cos²(Θ/2)cos²Φ` the cycle is the identity up to phase.
pub const IDENTITY_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CycleParams {
    /// Turning angle Θ between the two field sections, in `[0, π]`.
    pub theta: f64,
    /// Total dynamic phase Φ.
    pub phi: f64,
    /// Azimuth Ω of the field plane.
    pub omega_az: f64,
}

impl Default for CycleParams {
    fn default() -> Self {
        Self { theta: PI, phi: 0.0, omega_az: 0.0 }
    }
}

impl CycleParams {
    pub fn new(theta: f64, phi: f64, omega_az: f64) -> Result<Self> {
        let c = Self { theta, phi, omega_az };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=PI).contains(&self.theta) {
            return Err(Error::InvalidParameter(format!(
                "theta = {} must lie in [0, π]",
                self.theta
            )));
        }
        if !self.phi.is_finite() || !self.omega_az.is_finite() {
            return Err(Error::InvalidParameter("phi and omega_az must be finite".into()));
        }
        Ok(())
    }
}

/// Split of Φ into the two straight sections and the turning arc.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SegmentPhases {
    pub phi1: f64,
    pub phi2: f64,
    /// Arc phase, fixed so the three add up to Φ.
    pub phi_c: f64,
}

impl SegmentPhases {
    /// `phi_c = Φ - phi1 - phi2`.
    pub fn new(c: &CycleParams, phi1: f64, phi2: f64) -> Self {
        Self { phi1, phi2, phi_c: c.phi - phi1 - phi2 }
    }

    pub fn total(&self) -> f64 {
        self.phi1 + self.phi2 + self.phi_c
    }
}

/// Axis `(α, β)` of the circular orbit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OrbitAxis {
    /// Polar angle in `[0, π]`.
    pub alpha: f64,
    /// Azimuth, canonicalized to `[0, π)`.
    pub beta: f64,
}

/// Rotation by `delta` about the axis with polar angle `alpha` and azimuth
/// `beta`.
pub fn rotation(alpha: f64, beta: f64, delta: f64) -> Matrix2 {
    let (s, c) = (delta / 2.0).sin_cos();
    let (sa, ca) = alpha.sin_cos();
    let i = C64::i();
    Matrix2::new(
        C64::new(c, -s * ca),
        -i * s * sa * C64::from_polar(1.0, -beta),
        -i * s * sa * C64::from_polar(1.0, beta),
        C64::new(c, s * ca),
    )
}

fn phase_diag(phi: f64) -> Matrix2 {
    Matrix2::diag(C64::from_polar(1.0, -phi), C64::from_polar(1.0, phi))
}

/// Closed-form cycle unitary.
pub fn cycle_unitary(c: &CycleParams) -> Matrix2 {
    let (s, co) = (c.theta / 2.0).sin_cos();
    let w = c.omega_az - c.phi;
    Matrix2::new(
        C64::from_polar(co, -c.phi),
        -C64::from_polar(s, -w),
        C64::from_polar(s, w),
        C64::from_polar(co, c.phi),
    )
}

/// The same unitary assembled as `ℛ(π/2, Ω+π/2, Θ) · U'_II · Λ · U_I`.
pub fn cycle_unitary_from_segments(c: &CycleParams, seg: &SegmentPhases) -> Matrix2 {
    rotation(FRAC_PI_2, c.omega_az + FRAC_PI_2, c.theta)
        * phase_diag(seg.phi2)
        * phase_diag(seg.phi_c)
        * phase_diag(seg.phi1)
}

/// Raw populations `|⟨n1|𝒰^j|n0⟩|²` for `j = 1..=n`.
pub fn p_raw(c: &CycleParams, n: usize) -> Vec<f64> {
    let u = cycle_unitary(c);
    let mut psi = State2::up();
    (0..n)
        .map(|_| {
            psi = u.apply(&psi);
            psi.c1.norm_sqr()
        })
        .collect()
}

/// Running means `p_1 … p_n` of the raw populations.
pub fn p_series(c: &CycleParams, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidParameter("p_series needs n >= 1".into()));
    }
    Ok(crate::propagator::running_means(&p_raw(c, n)))
}

/// `p_n` alone, without storing the series.
pub fn p_series_mean(c: &CycleParams, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("p_series needs n >= 1".into()));
    }
    let u = cycle_unitary(c);
    let mut psi = State2::up();
    let mut sum = 0.0;
    for _ in 0..n {
        psi = u.apply(&psi);
        sum += psi.c1.norm_sqr();
    }
    Ok(sum / n as f64)
}

/// `p_G = ½ sin²(Θ/2) / (1 - cos²(Θ/2) cos²Φ)`.
///
/// Naively 0/0 at `Θ = 0, cos²Φ = 1`; the numerator vanishes faster, so the
/// limit 0 is returned whenever `sin(Θ/2) = 0`.
pub fn p_g_closed(c: &CycleParams) -> f64 {
    let (s, co) = (c.theta / 2.0).sin_cos();
    let s2 = s * s;
    if s2 == 0.0 {
        return 0.0;
    }
    let cphi = c.phi.cos();
    0.5 * s2 / (1.0 - co * co * cphi * cphi)
}

/// Orbit axis of `𝒰`.
///
/// `cos α = cos(Θ/2) sin Φ / √(1 - cos²(Θ/2)cos²Φ)` (the signed root of the
/// usual `cos²α` expression) and `β = Φ - Ω - π/2 mod π`.
pub fn orbit_axis(c: &CycleParams) -> Result<OrbitAxis> {
    let co = (c.theta / 2.0).cos();
    let (sphi, cphi) = c.phi.sin_cos();
    let den = 1.0 - co * co * cphi * cphi;
    if den < IDENTITY_TOL {
        return Err(Error::IdentityCycle);
    }
    let cos_alpha = (co * sphi / den.sqrt()).clamp(-1.0, 1.0);
    let beta = (c.phi - c.omega_az - FRAC_PI_2).rem_euclid(PI);
    Ok(OrbitAxis { alpha: cos_alpha.acos(), beta })
}

/// Rotation angle `γ ∈ [0, 2π]` and unit axis `n` of an SU(2) matrix
/// `cos(γ/2) I - i sin(γ/2) n·σ`.
pub fn su2_axis_angle(u: &Matrix2) -> Result<(f64, [f64; 3])> {
    let a = (u.m[0][0] + u.m[1][1]) * 0.5;
    let half = a.re.clamp(-1.0, 1.0).acos();
    let sh = half.sin();
    if sh < 1e-12 {
        return Err(Error::IdentityCycle);
    }
    // -i sin(γ/2) (n·σ) = U - cos(γ/2) I
    let nx = -(u.m[0][1] + u.m[1][0]).im / (2.0 * sh);
    let ny = (u.m[1][0] - u.m[0][1]).re / (2.0 * sh);
    let nz = -(u.m[0][0] - u.m[1][1]).im / (2.0 * sh);
    Ok((2.0 * half, [nx, ny, nz]))
}

/// Uniform-density orbit average of `sin²(ζ/2)` with
/// `sin(ζ/2) = sin α · sin(η/2)`, trapezoid rule on `η ∈ [0, 2π)`.
pub fn p_infinity_orbit(axis: &OrbitAxis, quadrature_points: usize) -> Result<f64> {
    if quadrature_points < 8 {
        return Err(Error::InvalidParameter("quadrature needs at least 8 points".into()));
    }
    let sa = axis.alpha.sin();
    let h = TAU / quadrature_points as f64;
    let sum: f64 = (0..quadrature_points)
        .map(|i| {
            let half_zeta = sa * (0.5 * i as f64 * h).sin();
            half_zeta * half_zeta
        })
        .sum();
    Ok(sum / quadrature_points as f64)
}

/// Θ = π when the cycle crosses a topological transition, 0 otherwise.
pub fn theta_from_tpt(delta_nu: i32) -> Result<f64> {
    match delta_nu {
        0 => Ok(0.0),
        1 => Ok(PI),
        _ => Err(Error::InvalidParameter(format!("delta_nu = {delta_nu} must be 0 or 1"))),
    }
}
