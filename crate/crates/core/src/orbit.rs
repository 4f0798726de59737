//! Orbit-level time and anomaly bookkeeping for the elliptical target orbit:
//! mean motion, Kepler's equation and its numerical inverse, and conversions
//! between eccentric and true anomaly.
//!
//! Anomalies are kept *unwrapped* (revolution count preserved relative to the
//! periapsis epoch). The secular term of the transition matrix grows with the
//! eccentric anomaly, so wrapping to `[0, 2π)` would corrupt propagation over
//! multi-revolution scenarios.

use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// Gravitational parameter of the Earth [m³/s²], default for scenarios.
pub const EARTH_MU: f64 = 3.986004418e14;
/// Mean equatorial Earth radius [m], default for perigee-altitude inputs.
pub const EARTH_RADIUS: f64 = 6.378137e6;

/// Absolute tolerance on the Kepler residual `|M - (E - e sin E)|` [rad].
pub const KEPLER_TOL: f64 = 1e-12;
const KEPLER_MAX_ITER: usize = 100;

/// Elliptical target orbit description.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitParams {
    a: f64,
    e: f64,
    mu: f64,
    t_p: f64,
}

impl OrbitParams {
    /// Largest eccentricity accepted; the closed forms divide by powers of
    /// `1 - e²` and degrade rapidly beyond this.
    pub const MAX_ECCENTRICITY: f64 = 0.99;

    /// `a`: semi-major axis [m], `e`: eccentricity, `mu`: gravitational
    /// parameter [m³/s²], `t_p`: periapsis epoch [s].
    pub fn new(a: f64, e: f64, mu: f64, t_p: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidOrbit(format!("semi-major axis {a} must be > 0")));
        }
        if !(mu.is_finite() && mu > 0.0) {
            return Err(Error::InvalidOrbit(format!("gravitational parameter {mu} must be > 0")));
        }
        if !(e.is_finite() && (0.0..=Self::MAX_ECCENTRICITY).contains(&e)) {
            return Err(Error::InvalidOrbit(format!(
                "eccentricity {e} outside [0, {}]",
                Self::MAX_ECCENTRICITY
            )));
        }
        if !t_p.is_finite() {
            return Err(Error::InvalidOrbit("periapsis epoch must be finite".into()));
        }
        Ok(Self { a, e, mu, t_p })
    }

    /// Builds the orbit from perigee altitude `h_p` [m] above `body_radius`
    /// [m], choosing the periapsis epoch so that the true anomaly at `t_0`
    /// equals `theta_0` [rad]. The returned `t_p` is ≤ `t_0` whenever
    /// `theta_0 ∈ [0, 2π)`.
    pub fn from_perigee_altitude(
        e: f64,
        h_p: f64,
        theta_0: f64,
        t_0: f64,
        mu: f64,
        body_radius: f64,
    ) -> Result<Self> {
        if !(h_p.is_finite() && body_radius.is_finite() && body_radius + h_p > 0.0) {
            return Err(Error::InvalidOrbit(format!("perigee radius {} must be > 0", body_radius + h_p)));
        }
        if !(0.0..1.0).contains(&e) {
            return Err(Error::InvalidOrbit(format!("eccentricity {e} outside [0, 1)")));
        }
        let a = (body_radius + h_p) / (1.0 - e);
        let ecc_anomaly = convert_anomaly(e, theta_0, AnomalyKind::TrueToEccentric);
        let mean_anomaly = ecc_anomaly - e * ecc_anomaly.sin();
        let n = (mu / (a * a * a)).sqrt();
        Self::new(a, e, mu, t_0 - mean_anomaly / n)
    }

    pub fn semi_major_axis(&self) -> f64 {
        self.a
    }

    pub fn eccentricity(&self) -> f64 {
        self.e
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn periapsis_epoch(&self) -> f64 {
        self.t_p
    }

    /// Orbital mean motion `n = sqrt(mu / a³)` [rad/s].
    pub fn mean_motion(&self) -> f64 {
        (self.mu / (self.a * self.a * self.a)).sqrt()
    }

    /// Orbital period [s].
    pub fn period(&self) -> f64 {
        TAU / self.mean_motion()
    }

    /// Unwrapped eccentric anomaly at epoch `t` [s] (inverse Kepler).
    pub fn eccentric_anomaly_at(&self, t: f64) -> Result<f64> {
        solve_kepler(self.e, self.mean_motion() * (t - self.t_p))
    }
}

/// Solves Kepler's equation `M = E - e sin E` for the unwrapped eccentric
/// anomaly. Newton iteration with a bisection safeguard on the reduced
/// anomaly, then the revolution count is restored and the full-range root is
/// polished so the residual meets [`KEPLER_TOL`] even for `M` many
/// revolutions out.
pub fn solve_kepler(e: f64, mean_anomaly: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&e) || !mean_anomaly.is_finite() {
        return Err(Error::InputDomain(format!(
            "Kepler solve requires 0 <= e < 1 and finite M, got e={e}, M={mean_anomaly}"
        )));
    }

    let rev = (mean_anomaly / TAU).floor();
    let m_red = mean_anomaly - TAU * rev; // in [0, 2π)

    // f(0) = -m_red <= 0 and f(2π) = 2π - m_red > 0 bracket the root.
    let mut lo = 0.0_f64;
    let mut hi = TAU;
    let mut ecc_red = m_red + e * m_red.sin();
    let mut converged = false;
    for _ in 0..KEPLER_MAX_ITER {
        let f = ecc_red - e * ecc_red.sin() - m_red;
        if f.abs() < 0.5 * KEPLER_TOL {
            converged = true;
            break;
        }
        if f > 0.0 {
            hi = ecc_red;
        } else {
            lo = ecc_red;
        }
        let newton = ecc_red - f / (1.0 - e * ecc_red.cos());
        ecc_red = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    if !converged {
        return Err(Error::KeplerDivergence { eccentricity: e, mean_anomaly });
    }

    // Polish on the unreduced equation: 2πk is not exactly representable, so a
    // couple of Newton steps at full range close the remaining gap.
    let mut ecc = ecc_red + TAU * rev;
    for _ in 0..4 {
        let f = ecc - e * ecc.sin() - mean_anomaly;
        if f.abs() < 0.5 * KEPLER_TOL {
            break;
        }
        ecc -= f / (1.0 - e * ecc.cos());
    }
    let residual = ecc - e * ecc.sin() - mean_anomaly;
    if residual.abs() >= KEPLER_TOL {
        return Err(Error::KeplerDivergence { eccentricity: e, mean_anomaly });
    }
    Ok(ecc)
}

/// Direction of an anomaly conversion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnomalyKind {
    EccentricToTrue,
    TrueToEccentric,
}

/// Converts between eccentric and true anomaly through the half-angle tangent
/// map, preserving the revolution count of the input (output stays on the
/// same revolution, so round trips are exact up to rounding).
pub fn convert_anomaly(e: f64, value: f64, direction: AnomalyKind) -> f64 {
    let rev = (value / TAU).round();
    let frac = value - TAU * rev; // in [-π, π]
    let (num, den) = match direction {
        AnomalyKind::EccentricToTrue => ((1.0 + e).sqrt(), (1.0 - e).sqrt()),
        AnomalyKind::TrueToEccentric => ((1.0 - e).sqrt(), (1.0 + e).sqrt()),
    };
    let half = frac * 0.5;
    let converted = 2.0 * f64::atan2(num * half.sin(), den * half.cos());
    TAU * rev + converted
}
