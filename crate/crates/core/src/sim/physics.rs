//! Closed-form channel, coverage and propulsion models.

use super::config::{PathlossParams, PathlossSign, PropulsionParams, SimConfig};
use crate::{Error, Result};

/// Rotary-wing propulsion power at horizontal speed `v` (m/s), in watts.
///
/// Sum of blade-profile, induced and parasite power. At `v = 0` this is the
/// hover power `P1 + P2`.
pub fn propulsion_power(v: f64, p: &PropulsionParams) -> Result<f64> {
    if !(v >= 0.0) {
        return Err(Error::Domain(format!("speed must be >= 0, got {v}")));
    }
    let v2 = v * v;
    let blade = p.p1 * (1.0 + 3.0 * v2 / (p.u_tip * p.u_tip));
    let v0_2 = p.v0 * p.v0;
    let inner = (1.0 + v2 * v2 / (4.0 * v0_2 * v0_2)).sqrt() - v2 / (2.0 * v0_2);
    // inner is mathematically positive; guard the catastrophic cancellation at high speed.
    let induced = p.p2 * inner.max(0.0).sqrt();
    let parasite = 0.5 * p.d0 * p.rho * p.g_sol * p.a_disc * v2 * v;
    Ok(blade + induced + parasite)
}

/// Horizontal coverage radius of the UAV at altitude `h` with azimuth limit `theta_max`.
pub fn coverage_radius(h: f64, theta_max: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::Domain(format!("altitude must be > 0, got {h}")));
    }
    if !(theta_max > 0.0 && theta_max < std::f64::consts::FRAC_PI_2) {
        return Err(Error::Domain(format!(
            "theta_max must lie in (0, pi/2), got {theta_max}"
        )));
    }
    Ok(h * theta_max.tan())
}

/// Pathloss in dB for a 3-D link distance `d` (m) and elevation angle `theta` (degrees).
pub fn pathloss(d: f64, theta: f64, p: &PathlossParams) -> Result<f64> {
    if !(d > 0.0) {
        return Err(Error::Domain(format!("link distance must be > 0, got {d}")));
    }
    let angular = p.b0 * (theta - p.theta0) * ((p.theta0 - theta) / p.c0).exp();
    Ok(10.0 * p.a0 * d.log10() + angular + p.eta0)
}

/// Shannon rate (bits/s) of the UAV-to-BS link with the UAV at horizontal
/// position `uav`, altitude `h`, and the BS on the ground at `bs`.
pub fn data_rate(uav: [f64; 2], h: f64, bs: [f64; 2], cfg: &SimConfig) -> Result<f64> {
    let horizontal = (uav[0] - bs[0]).hypot(uav[1] - bs[1]);
    let dist = horizontal.hypot(h);
    let elevation_deg = h.atan2(horizontal).to_degrees();
    let pl = pathloss(dist, elevation_deg, &cfg.pathloss)?;
    let sign = match cfg.pathloss_sign {
        PathlossSign::Attenuation => -1.0,
        PathlossSign::Literal => 1.0,
    };
    let snr = cfg.p_tx * 10f64.powf(sign * pl / 10.0) / cfg.sigma2;
    Ok(shannon_rate(cfg.bandwidth, snr))
}

pub(crate) fn shannon_rate(bandwidth: f64, snr: f64) -> f64 {
    bandwidth * snr.ln_1p() / std::f64::consts::LN_2
}
